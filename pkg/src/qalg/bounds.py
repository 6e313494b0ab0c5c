"""Upper bounds for the derived-category dimension, and the syzygy certificate.

Five bounds are evaluated from (LL(A), gldim A, pd V, layer length of A):
the classical Loewy and global-dimension bounds, the two layer-length bounds,
and the new bound pd V + 3 that applies once the layer length of the regular
module is at most two.  Under that hypothesis the certificate checks, module
by module, that the (pd V + 2)-nd syzygy lands in add of the corresponding
syzygy of A/rad A plus A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import (
    HypothesisFailed,
    SearchSpaceTooLarge,
    UndeterminedPd,
    VNotInFiniteProjDim,
)
from .modules import (
    Module,
    direct_sum,
    in_add,
    projective,
    quotient,
    radical,
    regular_module,
    simple,
    syzygy,
)
from .quiver import BoundQuiverAlgebra
from .torsion import (
    PdResult,
    SimpleSet,
    classify_simples,
    layer_length,
    loewy_length,
    pd_of_set,
)


@dataclass(frozen=True)
class BoundEntry:
    name: str
    source: str
    value: int | None
    applicable: bool

    def as_json(self):
        return {
            "applicable": self.applicable,
            "name": self.name,
            "source": self.source,
            "value": self.value,
        }


@dataclass(frozen=True)
class BoundReport:
    algebra_name: str
    v_set: tuple[int, ...]
    pd_v: int
    ll_tv: int
    entries: tuple[BoundEntry, ...]
    best: int
    flags: dict
    pd_table: dict[int, PdResult]
    kind: str = field(default="bounds", repr=False)

    def entry(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_json_dict(self) -> dict:
        return {
            "algebra": self.algebra_name,
            "best_bound": self.best,
            "bounds": {
                "entries": [e.as_json() for e in self.entries],
                "flags": dict(self.flags),
                "pd_v": self.pd_v,
            },
            "ll_tv": self.ll_tv,
            "pd_table": {f"S({v})": r.as_json() for v, r in sorted(self.pd_table.items())},
            "v_set": list(self.v_set),
        }

    def to_text(self) -> str:
        lines = [f"derived-dimension bounds for {self.algebra_name}"]
        lines.append(f"  V = {{{', '.join(f'S({v})' for v in self.v_set)}}}" if self.v_set else "  V = {}")
        lines.append(f"  pd V = {self.pd_v}")
        lines.append(f"  ll_tV(A) = {self.ll_tv}")
        for e in self.entries:
            shown = e.value if e.applicable else "inapplicable"
            lines.append(f"  {e.source} = {shown}")
        lines.append(f"  best bound = {self.best}")
        if self.flags.get("syzygy_finite_k") is not None:
            lines.append(f"  syzygy-finite from index {self.flags['syzygy_finite_k']}")
            lines.append("  left big finitistic dimension: finite")
            lines.append("  Psi-dimension of the module category: finite")
        return "\n".join(lines) + "\n"


def _require_v_in_finite(algebra, v_set: SimpleSet, cutoff):
    cls = classify_simples(algebra, cutoff)
    for v in sorted(v_set.vertices):
        r = cls.table[v]
        if r.kind == "infinite":
            raise VNotInFiniteProjDim(
                f"S({v}) has infinite projective dimension; V must sit inside the finite-pd simples"
            )
        if r.kind == "undetermined":
            raise UndeterminedPd(f"S({v})", r.cutoff)
    return cls


def derived_dim_bounds(
    algebra: BoundQuiverAlgebra,
    v,
    cutoff: int | None = None,
    algebra_name: str = "A",
) -> BoundReport:
    v_set = v if isinstance(v, SimpleSet) else SimpleSet.of(algebra, v)
    cls = _require_v_in_finite(algebra, v_set, cutoff)
    pd_v = pd_of_set(algebra, v_set, cutoff).value
    ll_tv = layer_length(regular_module(algebra), v_set).value
    ll_a = algebra.loewy_length()

    entries = [
        BoundEntry("loewy_length", "LL(A) - 1", ll_a - 1, True),
        BoundEntry(
            "global_dimension",
            "gldim A",
            cls.gldim.value if cls.gldim.is_finite else None,
            cls.gldim.is_finite,
        ),
        BoundEntry(
            "layer_product",
            "(pd V + 2)(ll_tV(A) + 1) - 2",
            (pd_v + 2) * (ll_tv + 1) - 2,
            True,
        ),
        BoundEntry(
            "layer_linear",
            "2(pd V + ll_tV(A)) + 1",
            2 * (pd_v + ll_tv) + 1,
            True,
        ),
        BoundEntry(
            "syzygy_finite",
            "pd V + 3",
            pd_v + 3 if ll_tv <= 2 else None,
            ll_tv <= 2,
        ),
    ]
    applicable = [e.value for e in entries if e.applicable]
    best = max(0, min(applicable))
    new_applies = ll_tv <= 2
    flags = {
        "syzygy_finite_k": pd_v + 2 if new_applies else None,
        "big_findim_finite": new_applies,
        "psi_dim_finite": new_applies,
    }
    return BoundReport(
        algebra_name=algebra_name,
        v_set=v_set.sorted(),
        pd_v=pd_v,
        ll_tv=ll_tv,
        entries=tuple(entries),
        best=best,
        flags=flags,
        pd_table=cls.table,
    )


def best_v_search(
    algebra: BoundQuiverAlgebra,
    cutoff: int | None = None,
    strategy: str = "exhaustive",
    cap: int = 20,
    algebra_name: str = "A",
) -> tuple[SimpleSet, BoundReport]:
    """Minimize the best bound over subsets V of the finite-pd simples.

    Ties break toward smaller V, then lexicographically smaller vertex
    tuples, so the result is deterministic.
    """
    cls = classify_simples(algebra, cutoff)
    pool = tuple(sorted(cls.finite_vertices))

    def key(report: BoundReport):
        return (report.best, len(report.v_set), report.v_set)

    if strategy == "exhaustive":
        if len(pool) > cap:
            raise SearchSpaceTooLarge(2 ** len(pool), cap)
        best_report = None
        for size in range(len(pool) + 1):
            for subset in combinations(pool, size):
                report = derived_dim_bounds(algebra, subset, cutoff, algebra_name)
                if best_report is None or key(report) < key(best_report):
                    best_report = report
        return SimpleSet(frozenset(best_report.v_set)), best_report
    if strategy == "greedy":
        current = derived_dim_bounds(algebra, pool, cutoff, algebra_name)
        while True:
            candidates = []
            chosen = set(current.v_set)
            for v in pool:
                flipped = sorted(chosen ^ {v})
                candidates.append(derived_dim_bounds(algebra, flipped, cutoff, algebra_name))
            best_neighbor = min(candidates, key=key)
            if key(best_neighbor) < key(current):
                current = best_neighbor
            else:
                return SimpleSet(frozenset(current.v_set)), current
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass(frozen=True)
class CertificateEntry:
    label: str
    dims: tuple[int, ...]
    passed: bool


@dataclass(frozen=True)
class CertificateReport:
    algebra_name: str
    v_set: tuple[int, ...]
    delta: int
    k: int
    ll_tv: int
    generator_dim: int
    entries: tuple[CertificateEntry, ...]
    seed: int
    kind: str = field(default="certificate", repr=False)

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_json_dict(self) -> dict:
        return {
            "algebra": self.algebra_name,
            "all_passed": self.all_passed,
            "delta": self.delta,
            "entries": [
                {"dims": list(e.dims), "label": e.label, "passed": e.passed}
                for e in self.entries
            ],
            "generator_dim": self.generator_dim,
            "k": self.k,
            "ll_tv": self.ll_tv,
            "seed": self.seed,
            "v_set": list(self.v_set),
        }

    def to_text(self) -> str:
        lines = [
            f"syzygy-finiteness certificate for {self.algebra_name}",
            f"  V = {{{', '.join(f'S({v})' for v in self.v_set)}}}, pd V = {self.delta}, k = {self.k}",
            f"  ll_tV(A) = {self.ll_tv} (hypothesis: <= 2)",
            f"  generator dim = {self.generator_dim}",
        ]
        for e in self.entries:
            lines.append(f"  [{'PASS' if e.passed else 'FAIL'}] Omega^{self.k}({e.label}) in add(G)")
        lines.append(f"  verdict: {'PASS' if self.all_passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def syzygy_finiteness_certificate(
    algebra: BoundQuiverAlgebra,
    v,
    samples: int = 25,
    seed: int = 7,
    cutoff: int | None = None,
    algebra_name: str = "A",
) -> CertificateReport:
    """Check Omega^(pd V + 2)(M) in add(Omega^(pd V + 2)(A/rad A) + A) on a
    deterministic smoke set plus seeded random modules."""
    v_set = v if isinstance(v, SimpleSet) else SimpleSet.of(algebra, v)
    _require_v_in_finite(algebra, v_set, cutoff)
    ll_tv = layer_length(regular_module(algebra), v_set).value
    if ll_tv > 2:
        raise HypothesisFailed(ll_tv)
    delta = pd_of_set(algebra, v_set, cutoff).value
    k = delta + 2
    semisimple_top = direct_sum(
        [simple(algebra, i) for i in algebra.quiver.vertices], algebra=algebra
    )
    generator = direct_sum([syzygy(semisimple_top, k), regular_module(algebra)])

    probes: list[tuple[str, Module]] = []
    for i in algebra.quiver.vertices:
        probes.append((f"S({i})", simple(algebra, i)))
    for i in algebra.quiver.vertices:
        p = projective(algebra, i)
        probes.append((f"rad P({i})", radical(p).to_module()[0]))
    for i in algebra.quiver.vertices:
        p = projective(algebra, i)
        depth = loewy_length(p) - 1
        layer = _radical_power_submodule(p, depth)
        probes.append((f"P({i})/rad^{depth}", quotient(p, layer)))
    from .harness import random_module

    for s in range(samples):
        probes.append((f"rand({seed + s})", random_module(algebra, seed + s)))

    entries = []
    for label, module in probes:
        omega = syzygy(module, k)
        entries.append(CertificateEntry(label, module.dims, in_add(omega, generator)))
    return CertificateReport(
        algebra_name=algebra_name,
        v_set=v_set.sorted(),
        delta=delta,
        k=k,
        ll_tv=ll_tv,
        generator_dim=generator.total_dim,
        entries=tuple(entries),
        seed=seed,
    )


def _radical_power_submodule(module: Module, power: int):
    from .modules import Submodule, full_submodule
    from .torsion import _sub_radical_rows

    rows = [r.copy() for r in full_submodule(module).rows]
    for _ in range(power):
        rows = _sub_radical_rows(module, rows)
    return Submodule(module, rows, check=False)


@dataclass(frozen=True)
class SesCheckResult:
    ll_sub: int
    ll_mid: int
    ll_quot: int
    lower_ok: bool
    upper_ok: bool
    degenerate_ok: bool

    @property
    def passed(self) -> bool:
        return self.lower_ok and self.upper_ok and self.degenerate_ok


def exact_sequence_bound_check(sub: Module, mid: Module, quot: Module, v) -> SesCheckResult:
    """Both layer-length inequalities for 0 -> sub -> mid -> quot -> 0."""
    l = layer_length(sub, v).value
    m = layer_length(mid, v).value
    n = layer_length(quot, v).value
    lower = max(l, n) <= m
    upper = m <= l + n
    degenerate = True
    if l == 0 and n != m:
        degenerate = False
    if n == 0 and l != m:
        degenerate = False
    return SesCheckResult(l, m, n, lower, upper, degenerate)
