import numpy as np
import pytest
from hypothesis import given, settings

from termorder.pauli import (
    Hamiltonian,
    HamiltonianParseError,
    PauliTerm,
    char_on,
    commutes,
    fixture_names,
    format_hamiltonian,
    hamming_weight,
    lex_key,
    load_directory,
    load_fixture,
    parse_hamiltonian,
    support,
)
from termorder.sim import pauli_matrix

from conftest import pauli_strings, same_width_pair


def test_parse_two_terms():
    h = parse_hamiltonian("0.0871 IIIZ\n-0.0243 IIZI")
    assert len(h) == 2
    assert h.width == 4
    assert h.coefficients == [0.0871, -0.0243]
    assert h.strings == ["IIIZ", "IIZI"]


def test_parse_keeps_line_order_and_skips_comments():
    text = "# header\n\n1.0 ZI   # trailing\n  -2 IX\n0.5 XX\n"
    h = parse_hamiltonian(text)
    assert h.strings == ["ZI", "IX", "XX"]


def test_duplicates_are_merged():
    h = parse_hamiltonian("1.0 ZZ\n0.5 XI\n0.25 ZZ")
    assert h.strings == ["ZZ", "XI"]
    assert h[0].coefficient == 1.25


def test_duplicates_summing_to_zero_vanish():
    h = parse_hamiltonian("1.0 ZZ\n0.5 XI\n-1.0 ZZ")
    assert h.strings == ["XI"]


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("abc ZZ", "malformed coefficient"),
        ("1.0 ZQ", "illegal"),
        ("1.0 ZZ\n1.0 ZZZ", "inconsistent width"),
        ("", "no terms"),
        ("# only a comment\n", "no terms"),
        ("1.0", "expected"),
        ("1.0 II", "no terms"),
        ("nan ZZ", "non-finite"),
        ("0.0 ZZ\n1 XX", "zero coefficient"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(HamiltonianParseError, match=fragment):
        parse_hamiltonian(text)


def test_identity_dropped_by_default():
    h = parse_hamiltonian("5.907 II\n0.2183 ZI")
    assert h.strings == ["ZI"]


def test_identity_strict_mode():
    with pytest.raises(HamiltonianParseError, match="identity"):
        parse_hamiltonian("5.907 II\n0.2183 ZI", drop_identity=False)


def test_zero_coefficient_rejected():
    with pytest.raises(ValueError, match="zero"):
        Hamiltonian((PauliTerm(0.0, "ZZ"),))


def test_format_round_trip():
    h = parse_hamiltonian("0.1 XZ\n-3.25e-7 YY\n0.3333333333333333 IZ")
    assert parse_hamiltonian(format_hamiltonian(h)) == h


def test_commutes_examples():
    assert commutes("ZZ", "XX")
    assert not commutes("XI", "ZI")
    assert commutes("XYZ", "XYZ")
    assert commutes("IIZ", "XXI")


def test_commutes_width_mismatch():
    with pytest.raises(ValueError, match="width"):
        commutes("XX", "XXX")


@settings(max_examples=300, deadline=None)
@given(same_width_pair(max_width=5))
def test_commutes_matches_dense_commutator(pair):
    a, b = pair
    pa, pb = pauli_matrix(a), pauli_matrix(b)
    dense = np.allclose(pa @ pb, pb @ pa)
    assert commutes(a, b) == dense


@given(pauli_strings())
def test_weight_and_support(p):
    assert hamming_weight(p) == len(support(p))
    for q in support(p):
        assert char_on(p, q) != "I"


def test_qubit_convention():
    # rightmost character is qubit 0
    assert support("XIIZ") == [0, 3]
    assert char_on("XIIZ", 0) == "Z"
    assert char_on("XIIZ", 3) == "X"


def test_lex_order():
    strings = ["IZ", "XI", "ZX", "YY", "XX"]
    assert sorted(strings, key=lex_key) == ["XX", "XI", "YY", "ZX", "IZ"]


def test_fixtures_load():
    names = fixture_names()
    assert {"h2", "deuteron", "hc", "hpqrs8", "xz9", "lih_synthetic"} <= set(names)
    assert len(load_fixture("h2")) == 14
    assert len(load_fixture("lih_synthetic")) == 26
    assert load_fixture("xz9").width == 10


def test_load_directory(tmp_path):
    (tmp_path / "b.ham").write_text("1 ZZ\n")
    (tmp_path / "a.ham").write_text("1 X\n")
    (tmp_path / "skip.txt").write_text("junk")
    got = load_directory(tmp_path)
    assert list(got) == ["a", "b"]
