"""Benchmark driver behind the ``order``, ``compile``, ``fidelity`` and ``noisy`` commands.

Every command takes a :class:`BenchConfig`, computes a list of row dicts
and can write them as CSV. Rows are sorted before writing, and each row
depends only on the config and its seeds, so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import io
import itertools
import logging
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import sim
from .circuit import ARCHITECTURES, CNOT, Circuit, H, S, X, assemble, cancel_gates, cnot_count, synthesize_term
from .clique import build_graph, clique_cover, pair_scores, permutation_heuristic, permutation_score
from .ordering import OrderingPlan, canonical_strategy, make_plan
from .pauli import Hamiltonian, fixture_path, hamming_weight, load_hamiltonian
from .tsp import build_distance_matrix, path_total_cnots

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

ORDER_COLUMNS = (
    "hamiltonian", "strategy", "seed", "terms", "cliques", "clique_sizes", "proxy_score",
    "permutation", "cnot_bound", "cnots_predicted",
)
COMPILE_COLUMNS = ("hamiltonian", "strategy", "seed", "arch", "r", "t", "cnots_pre", "cnots_post", "reduction_pct", "gates_post")
FIDELITY_COLUMNS = ("hamiltonian", "strategy", "clique_order", "t", "process_fidelity")
FIDELITY_SUMMARY_COLUMNS = (
    "hamiltonian", "strategy", "clique_order", "proxy_score", "heuristic_pick", "t_prime",
    "normalized_fidelity", "min_fidelity",
)
NOISY_COLUMNS = (
    "hamiltonian", "strategy", "initial_state", "p", "shots", "seed", "cnots_post",
    "hellinger_distance", "hellinger_infidelity", "total_variation",
)

INITIAL_STATES = ("entangled_pair", "equal_superposition", "complex")

ENUMERATE_LIMIT = 720


class ConfigError(ValueError):
    pass


def _split(value) -> list[str]:
    if isinstance(value, str):
        return [v.strip() for v in value.replace(";", ",").split(",") if v.strip()]
    return [str(v) for v in value]


@dataclass
class BenchConfig:
    """Everything a command needs; defaults reproduce the documented desk-scale runs.

    The fidelity grid runs ``0 .. t_max`` in steps of ``t_step``. ``t`` is the
    evolution time for ``compile`` and ``noisy``.
    """

    hamiltonians: list[str] = field(default_factory=list)
    strategies: list[str] = field(
        default_factory=lambda: ["unordered", "lexicographic", "magnitude", "random", "deplete_groups", "max_commute_tsp"]
    )
    t_max: float = 2.5
    t_step: float = 0.025
    t: float = 1.0
    r: int = 10
    arch: str = "star_ancilla"
    p: list[float] = field(default_factory=lambda: [0.001, 0.005, 0.01, 0.02])
    shots: int = 1000
    seed: int = 0
    initial_states: list[str] = field(default_factory=lambda: ["entangled_pair"])
    cover_mode: str = "auto"
    enumerate: bool = False
    out: str | None = None

    def __post_init__(self):
        self.hamiltonians = _split(self.hamiltonians)
        self.strategies = _split(self.strategies)
        self.initial_states = _split(self.initial_states)
        self.p = [float(x) for x in _split(self.p)] if isinstance(self.p, str) else [float(x) for x in self.p]
        self.t_max, self.t_step, self.t = float(self.t_max), float(self.t_step), float(self.t)
        self.r, self.shots, self.seed = int(self.r), int(self.shots), int(self.seed)
        if isinstance(self.enumerate, str):
            self.enumerate = self.enumerate.strip().lower() in ("1", "true", "yes", "on")

    def validate(self) -> None:
        if not self.hamiltonians:
            raise ConfigError("no hamiltonians given")
        for ref in self.hamiltonians:
            resolve_hamiltonian(ref)
        if not self.strategies:
            raise ConfigError("strategy list is empty")
        for s in self.strategies:
            parse_strategy(s)
        if self.r < 1:
            raise ConfigError("r must be at least 1")
        if self.arch not in ARCHITECTURES:
            raise ConfigError(f"unknown architecture {self.arch!r}")
        if self.t_step <= 0 or self.t_max < 0:
            raise ConfigError("time grid needs t_step > 0 and t_max >= 0")
        if not self.p or any(not 0.0 <= x <= 1.0 for x in self.p):
            raise ConfigError("noise p list must be non-empty with values in [0, 1]")
        if self.shots < 1:
            raise ConfigError("shots must be positive")
        for tag in self.initial_states:
            if tag not in INITIAL_STATES:
                raise ConfigError(f"unknown initial state {tag!r}; choose from {', '.join(INITIAL_STATES)}")

    def time_grid(self) -> np.ndarray:
        n = int(math.floor(self.t_max / self.t_step + 1e-9))
        return np.round(np.arange(n + 1) * self.t_step, 12)


def parse_config_text(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def load_config(path=None, overrides: Mapping[str, object] | None = None) -> BenchConfig:
    """Read a config file (optional) and apply overrides; ``None`` override values are skipped."""
    values: dict[str, object] = {}
    base = None
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        values.update(parse_config_text(path.read_text()))
        base = path.parent
    for k, v in (overrides or {}).items():
        if v is not None:
            values[k.replace("-", "_")] = v
    known = {f.name for f in fields(BenchConfig)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    cfg = BenchConfig(**values)
    if base is not None:
        # relative hamiltonian paths in a config file are relative to the file
        cfg.hamiltonians = [
            str(base / h) if not Path(h).is_absolute() and (base / h).is_file() else h for h in cfg.hamiltonians
        ]
    cfg.validate()
    return cfg


def resolve_hamiltonian(ref: str) -> tuple[str, Hamiltonian]:
    """Load a ``.ham`` file, or a shipped fixture by name."""
    path = Path(ref)
    if path.is_file():
        return path.stem, load_hamiltonian(path)
    try:
        return ref, load_hamiltonian(fixture_path(ref))
    except FileNotFoundError:
        raise ConfigError(f"hamiltonian not found: {ref}") from None


def parse_strategy(entry: str) -> tuple[str, int | None]:
    """``random:7`` or ``random(7)`` pins a seed; other names go through the alias table."""
    entry = entry.strip()
    seed = None
    for sep in (":", "("):
        if sep in entry:
            entry, tail = entry.split(sep, 1)
            seed = int(tail.rstrip(")"))
    try:
        name = canonical_strategy(entry)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return name, seed


def _plan(h: Hamiltonian, entry: str, cfg: BenchConfig, cover=None) -> OrderingPlan:
    name, seed = parse_strategy(entry)
    return make_plan(h, name, seed=cfg.seed if seed is None else seed, cover=cover, cover_mode=cfg.cover_mode)


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def rows_to_csv(rows: Iterable[Mapping], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def write_csv(path, rows, columns) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(rows_to_csv(rows, columns))
    return path


def _sorted(rows: list[dict], keys: Sequence[str]) -> list[dict]:
    return sorted(rows, key=lambda r: tuple(r[k] for k in keys))


# -- initial states ------------------------------------------------------


def initial_state_circuit(tag: str, n: int) -> Circuit:
    if tag == "equal_superposition":
        return Circuit(n, tuple(H(q) for q in range(n)))
    if n < 4:
        raise ConfigError(f"initial state {tag!r} needs at least 4 qubits, got {n}")
    pair = (H(0), CNOT(0, 1), X(2), X(3), CNOT(0, 2), CNOT(0, 3))
    if tag == "entangled_pair":
        return Circuit(n, pair)
    if tag == "complex":
        return Circuit(n, pair + (H(2), S(3)))
    raise ConfigError(f"unknown initial state {tag!r}")


def initial_state(tag: str, n: int) -> np.ndarray:
    psi = sim.simulate_statevector(initial_state_circuit(tag, n))
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > 1e-9:
        raise AssertionError(f"initial state {tag} not normalized ({norm})")
    return psi


# -- commands ------------------------------------------------------------


def cmd_order(cfg: BenchConfig) -> list[dict]:
    """Permutation, clique stats and CNOT predictions for every (hamiltonian, strategy)."""
    rows = []
    for ref in cfg.hamiltonians:
        label, h = resolve_hamiltonian(ref)
        cover = clique_cover(h, cfg.cover_mode)
        scores = pair_scores(h, cover)
        clique_of = cover.clique_of()
        bound = 2 * sum(hamming_weight(s) for s in h.strings) * cfg.r
        for entry in cfg.strategies:
            plan = _plan(h, entry, cfg, cover)
            # clique sequence visited by the plan, merging runs
            seq = [clique_of[i] for i in plan.term_order]
            runs = [c for c, _ in itertools.groupby(seq)]
            rows.append(
                {
                    "hamiltonian": label,
                    "strategy": plan.strategy,
                    "seed": plan.seed if plan.seed is not None else "",
                    "terms": len(h),
                    "cliques": len(cover),
                    "clique_sizes": ";".join(str(len(c)) for c in cover),
                    "proxy_score": permutation_score(runs, scores) if plan.clique_boundaries else "",
                    "permutation": " ".join(map(str, plan.term_order)),
                    "cnot_bound": bound,
                    "cnots_predicted": path_total_cnots(list(plan.term_order) * cfg.r, h.strings),
                }
            )
    return _sorted(rows, ("hamiltonian", "strategy", "seed"))


def distance_report(ref: str) -> str:
    label, h = resolve_hamiltonian(ref)
    return f"# {label}\n" + build_distance_matrix(h.strings).to_text()


def compile_circuit(h: Hamiltonian, plan: OrderingPlan, cfg: BenchConfig) -> tuple[Circuit, Circuit]:
    raw = assemble(plan, h, cfg.t, cfg.r, cfg.arch)
    return raw, cancel_gates(raw)


def cmd_compile(cfg: BenchConfig, circuit_dir=None) -> list[dict]:
    """Assemble and cancel every (hamiltonian, strategy); optionally write ``.circ`` files."""
    rows = []
    for ref in cfg.hamiltonians:
        label, h = resolve_hamiltonian(ref)
        cover = clique_cover(h, cfg.cover_mode)
        for entry in cfg.strategies:
            plan = _plan(h, entry, cfg, cover)
            raw, done = compile_circuit(h, plan, cfg)
            pre, post = cnot_count(raw), cnot_count(done)
            tag = plan.strategy if plan.seed is None else f"{plan.strategy}-{plan.seed}"
            if circuit_dir is not None:
                out = Path(circuit_dir)
                out.mkdir(parents=True, exist_ok=True)
                (out / f"{label}.{tag}.circ").write_text(done.to_text())
            rows.append(
                {
                    "hamiltonian": label,
                    "strategy": plan.strategy,
                    "seed": plan.seed if plan.seed is not None else "",
                    "arch": cfg.arch,
                    "r": cfg.r,
                    "t": cfg.t,
                    "cnots_pre": pre,
                    "cnots_post": post,
                    "reduction_pct": round(100.0 * (pre - post) / pre, 6) if pre else 0.0,
                    "gates_post": len(done),
                }
            )
    return _sorted(rows, ("hamiltonian", "strategy", "seed"))


class TermUnitaries:
    """Per-term circuit unitaries at one step size, shared across orderings.

    Every term sub-circuit hands the ancilla back in ``|0>``, so the data block
    of a whole step is the product of the per-term blocks.
    """

    def __init__(self, h: Hamiltonian, arch: str):
        self.h, self.arch = h, arch
        self._cache: dict[tuple[int, float], np.ndarray] = {}
        self._exact: dict[float, np.ndarray] = {}

    def exact(self, t: float) -> np.ndarray:
        if t not in self._exact:
            self._exact[t] = sim.exact_unitary(self.h, t)
        return self._exact[t]

    def term(self, i: int, dt: float) -> np.ndarray:
        key = (i, dt)
        if key not in self._cache:
            gates = synthesize_term(self.h[i], dt, self.arch)
            n = self.h.width
            anc = n if self.arch == "star_ancilla" else None
            self._cache[key] = sim.circuit_unitary(Circuit(n + (anc is not None), tuple(gates), ancilla=anc))
        return self._cache[key]

    def step(self, order: Sequence[int], dt: float) -> np.ndarray:
        u = np.eye(2**self.h.width, dtype=complex)
        for i in order:
            u = self.term(i, dt) @ u
        return u


def fidelity_series(
    h: Hamiltonian, plan: OrderingPlan, grid: Sequence[float], r: int, arch: str, terms: TermUnitaries | None = None
) -> list[float]:
    """Process fidelity of the r-step circuit against exact evolution at each grid time."""
    terms = terms or TermUnitaries(h, arch)
    out = []
    for t in grid:
        if t == 0:
            out.append(1.0)
            continue
        u = np.linalg.matrix_power(terms.step(plan.term_order, t / r), r)
        out.append(min(1.0, sim.process_fidelity(terms.exact(t), u)))
    return out


def _reblock(plan: OrderingPlan, blocks) -> OrderingPlan:
    order = [i for b in blocks for i in b]
    bounds = [0, *itertools.accumulate(len(b) for b in blocks)]
    return OrderingPlan(plan.strategy, tuple(order), tuple(bounds))


def cmd_fidelity(cfg: BenchConfig) -> tuple[list[dict], list[dict]]:
    """Time series and normalized fidelity per strategy.

    With ``enumerate`` on, clique-structured strategies are swept over every
    clique permutation (up to 720), each tagged with its proxy score and
    whether the heuristic would pick it.
    """
    grid = cfg.time_grid()
    series, summary = [], []
    for ref in cfg.hamiltonians:
        label, h = resolve_hamiltonian(ref)
        if h.width + (cfg.arch == "star_ancilla") > sim.DENSE_CEILING:
            raise ConfigError(f"{label}: width {h.width} exceeds the dense ceiling {sim.DENSE_CEILING}")
        cover = clique_cover(h, cfg.cover_mode)
        scores = pair_scores(h, cover)
        pick = permutation_heuristic(h, cover, build_graph(h)).order
        terms = TermUnitaries(h, cfg.arch)
        for entry in cfg.strategies:
            plan = _plan(h, entry, cfg, cover)
            variants = [("", plan, "")]
            if cfg.enumerate and plan.clique_boundaries is not None:
                if math.factorial(len(cover)) > ENUMERATE_LIMIT:
                    raise ConfigError(f"{label}: {len(cover)}! clique orders exceeds the limit {ENUMERATE_LIMIT}")
                # intra-clique orders do not depend on the clique order; reuse them
                block_of = {cover.clique_of()[b[0]]: b for b in plan.blocks()}
                variants = [
                    (" ".join(map(str, perm)), _reblock(plan, [block_of[c] for c in perm]), perm)
                    for perm in itertools.permutations(range(len(cover)))
                ]
            for clique_order, p, perm in variants:
                fs = fidelity_series(h, p, grid, cfg.r, cfg.arch, terms)
                for t, f in zip(grid, fs):
                    series.append(
                        {"hamiltonian": label, "strategy": plan.strategy, "clique_order": clique_order, "t": float(t), "process_fidelity": f}
                    )
                summary.append(
                    {
                        "hamiltonian": label,
                        "strategy": plan.strategy,
                        "clique_order": clique_order,
                        "proxy_score": permutation_score(perm, scores) if perm else "",
                        "heuristic_pick": int(tuple(perm) == pick) if perm else "",
                        "t_prime": float(grid[-1]),
                        "normalized_fidelity": sim.normalized_fidelity(list(zip(grid, fs))),
                        "min_fidelity": min(fs),
                    }
                )
    series = _sorted(series, ("hamiltonian", "strategy", "clique_order", "t"))
    summary = _sorted(summary, ("hamiltonian", "strategy", "clique_order"))
    return series, summary


def cmd_noisy(cfg: BenchConfig, dump_dir=None) -> list[dict]:
    """Hellinger comparison of noisy shot distributions against exact evolution."""
    rows = []
    for ref in cfg.hamiltonians:
        label, h = resolve_hamiltonian(ref)
        n = h.width
        cover = clique_cover(h, cfg.cover_mode)
        u = sim.exact_unitary(h, cfg.t)
        for tag in cfg.initial_states:
            psi0 = initial_state(tag, n)
            ideal = sim.born_probabilities(u @ psi0, n)
            for entry in cfg.strategies:
                plan = _plan(h, entry, cfg, cover)
                _, circ = compile_circuit(h, plan, cfg)
                for p in cfg.p:
                    counts = sim.run_noisy(circ, psi0, sim.NoiseConfig(p, cfg.shots, cfg.seed))
                    emp = sim.counts_to_probs(counts, n)
                    dist, infid = sim.hellinger(emp, ideal)
                    if dump_dir is not None:
                        out = Path(dump_dir)
                        out.mkdir(parents=True, exist_ok=True)
                        (out / f"{label}.{plan.strategy}.{tag}.p{p:g}.csv").write_text(sim.distribution_csv(counts, n))
                    rows.append(
                        {
                            "hamiltonian": label,
                            "strategy": plan.strategy,
                            "initial_state": tag,
                            "p": p,
                            "shots": cfg.shots,
                            "seed": cfg.seed,
                            "cnots_post": cnot_count(circ),
                            "hellinger_distance": dist,
                            "hellinger_infidelity": infid,
                            "total_variation": sim.total_variation(emp, ideal),
                        }
                    )
    return _sorted(rows, ("hamiltonian", "strategy", "initial_state", "p"))


def mean_infidelity_by_p(rows: Iterable[Mapping], initial_state_tag: str | None = None) -> dict[float, float]:
    acc: dict[float, list[float]] = {}
    for row in rows:
        if initial_state_tag is None or row["initial_state"] == initial_state_tag:
            acc.setdefault(float(row["p"]), []).append(float(row["hellinger_infidelity"]))
    return {p: float(np.mean(v)) for p, v in sorted(acc.items())}


def with_overrides(cfg: BenchConfig, **kw) -> BenchConfig:
    out = replace(cfg, **kw)
    out.validate()
    return out
