"""Torsion radicals, radical layer lengths, and projective dimensions.

For a set V of simple modules (named by their vertices), the torsion class
consists of the modules whose top avoids V; its torsion radical t_V(M) is
computed concretely as the submodule of M generated by the full component
spaces at the complementary vertices.  The t_V-layer length of M is the
number of rad-after-t_V steps needed before t_V vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    QalgError,
    UndeterminedClassification,
    VertexOutOfRange,
)
from .modules import (
    Module,
    Submodule,
    is_iso,
    regular_module,
    simple,
    syzygy_step,
)
from .quiver import BoundQuiverAlgebra, IdealBasis


@dataclass(frozen=True)
class SimpleSet:
    """A chosen set V of simple modules, stored by vertex id."""

    vertices: frozenset[int]

    @staticmethod
    def of(algebra: BoundQuiverAlgebra, ids) -> "SimpleSet":
        ids = frozenset(int(i) for i in ids)
        for i in ids:
            if not 1 <= i <= algebra.quiver.n:
                raise VertexOutOfRange(f"vertex {i} outside 1..{algebra.quiver.n}")
        return SimpleSet(ids)

    def complement(self, algebra: BoundQuiverAlgebra) -> tuple[int, ...]:
        return tuple(v for v in algebra.quiver.vertices if v not in self.vertices)

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertices))


def _as_vertex_set(algebra, v) -> frozenset[int]:
    if isinstance(v, SimpleSet):
        return v.vertices
    return SimpleSet.of(algebra, v).vertices


# -- submodule chains ------------------------------------------------------


def _sub_radical_rows(module: Module, rows) -> list[np.ndarray]:
    gf = module.algebra.gf
    p = module.algebra.p
    out = [np.zeros((0, d), dtype=np.int64) for d in module.dims]
    pieces: list[list[np.ndarray]] = [[] for _ in module.dims]
    for idx, arrow in enumerate(module.algebra.quiver.arrows):
        i, j = arrow.source - 1, arrow.target - 1
        if rows[i].shape[0] == 0:
            continue
        image = rows[i] @ module.mats[idx] % p
        if image.any():
            pieces[j].append(image)
    for j, stack in enumerate(pieces):
        if stack:
            out[j] = gf.row_space(np.vstack(stack))
    return out


def _sub_closure_rows(module: Module, seeds) -> list[np.ndarray]:
    gf = module.algebra.gf
    p = module.algebra.p
    rows = [gf.row_space(s) if s.shape[0] else s for s in seeds]
    dirty = [v for v in range(len(rows)) if rows[v].shape[0]]
    while dirty:
        v = dirty.pop()
        for a in module.algebra.quiver.by_source[v + 1]:
            j = module.algebra.quiver.arrows[a].target - 1
            image = rows[v] @ module.mats[a] % p
            if not image.any():
                continue
            merged = gf.row_space(np.vstack([rows[j], image]))
            if merged.shape[0] != rows[j].shape[0]:
                rows[j] = merged
                if j not in dirty:
                    dirty.append(j)
    return rows


def _sub_torsion_rows(module: Module, rows, v_vertices: frozenset[int]) -> list[np.ndarray]:
    seeds = []
    for v in range(module.algebra.quiver.n):
        if (v + 1) not in v_vertices:
            seeds.append(rows[v])
        else:
            seeds.append(np.zeros((0, module.dims[v]), dtype=np.int64))
    return _sub_closure_rows(module, seeds)


def _full_rows(module: Module) -> list[np.ndarray]:
    return [np.eye(d, dtype=np.int64) for d in module.dims]


def _rows_dim(rows) -> int:
    return sum(r.shape[0] for r in rows)


def torsion_radical(module: Module, v) -> Submodule:
    """t_V(M): the largest submodule whose top avoids the simples in V."""
    v_vertices = _as_vertex_set(module.algebra, v)
    rows = _sub_torsion_rows(module, _full_rows(module), v_vertices)
    return Submodule(module, rows, check=False)


def torsion_quotient(module: Module, v) -> Module:
    from .modules import quotient

    return quotient(module, torsion_radical(module, v))


def torsion_layer_submodule(module: Module, v, steps: int = 0) -> Submodule:
    """t_V((rad t_V)^steps M) as a submodule of M."""
    v_vertices = _as_vertex_set(module.algebra, v)
    rows = _full_rows(module)
    for _ in range(steps):
        rows = _sub_radical_rows(module, _sub_torsion_rows(module, rows, v_vertices))
    return Submodule(module, _sub_torsion_rows(module, rows, v_vertices), check=False)


@dataclass(frozen=True)
class LayerLengthTrace:
    """Layer length with the dimension chain [M, tM, rad tM, t rad tM, ...]."""

    value: int
    chain: tuple[int, ...]


def layer_length(module: Module, v) -> LayerLengthTrace:
    """Least i such that t_V((rad t_V)^i M) = 0, with its dimension trace."""
    v_vertices = _as_vertex_set(module.algebra, v)
    chain = [module.total_dim]
    rows = _full_rows(module)
    i = 0
    while True:
        t_rows = _sub_torsion_rows(module, rows, v_vertices)
        chain.append(_rows_dim(t_rows))
        if _rows_dim(t_rows) == 0:
            return LayerLengthTrace(i, tuple(chain))
        rows = _sub_radical_rows(module, t_rows)
        chain.append(_rows_dim(rows))
        i += 1


def loewy_length(module: Module) -> int:
    """Least n with M rad^n = 0."""
    rows = _full_rows(module)
    n = 0
    while _rows_dim(rows):
        rows = _sub_radical_rows(module, rows)
        n += 1
    return n


# -- projective dimension ----------------------------------------------------


@dataclass(frozen=True)
class PdResult:
    """Projective dimension: finite value, certified infinity, or cutoff hit."""

    kind: str  # "finite" | "infinite" | "undetermined"
    value: int | None = None
    witness: tuple[int, int] | None = None
    cutoff: int | None = None

    @staticmethod
    def finite(n: int) -> "PdResult":
        return PdResult("finite", value=n)

    @staticmethod
    def infinite(a: int, b: int) -> "PdResult":
        return PdResult("infinite", witness=(a, b))

    @staticmethod
    def undetermined(cutoff: int) -> "PdResult":
        return PdResult("undetermined", cutoff=cutoff)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def __str__(self) -> str:
        if self.kind == "finite":
            return str(self.value)
        if self.kind == "infinite":
            return "inf"
        return f"undetermined(<={self.cutoff})"

    def as_json(self):
        if self.kind == "finite":
            return self.value
        if self.kind == "infinite":
            return "inf"
        return {"undetermined_at_cutoff": self.cutoff}


def default_cutoff(algebra: BoundQuiverAlgebra) -> int:
    return max(1, 4 * algebra.dim)


def pd(module: Module, cutoff: int | None = None) -> PdResult:
    """Projective dimension via minimal syzygies.

    Infinity is certified only by a syzygy repetition: with minimal covers,
    an isomorphism between two distinct syzygies makes the resolution
    periodic forever.  Anything unresolved at the cutoff stays undetermined.
    """
    algebra = module.algebra
    if cutoff is None:
        cutoff = default_cutoff(algebra)
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if module.is_zero():
        return PdResult.finite(-1)
    seen: dict[tuple[int, ...], list[tuple[int, Module]]] = {module.dims: [(0, module)]}
    current = module
    for k in range(1, cutoff + 1):
        current = syzygy_step(current)
        if current.is_zero():
            return PdResult.finite(k - 1)
        bucket = seen.setdefault(current.dims, [])
        for a, earlier in bucket:
            if is_iso(earlier, current, seed=a * 1009 + k):
                return PdResult.infinite(a, k)
        bucket.append((k, current))
    return PdResult.undetermined(cutoff)


@dataclass(frozen=True)
class SimplesClassification:
    table: dict[int, PdResult]
    finite_vertices: tuple[int, ...]
    infinite_vertices: tuple[int, ...]
    undetermined_vertices: tuple[int, ...]
    gldim: PdResult


def classify_simples(algebra: BoundQuiverAlgebra, cutoff: int | None = None) -> SimplesClassification:
    cache_key = cutoff
    cache = getattr(algebra, "_classification_cache", None)
    if cache is None:
        cache = {}
        algebra._classification_cache = cache
    if cache_key in cache:
        return cache[cache_key]
    table = {v: pd(simple(algebra, v), cutoff) for v in algebra.quiver.vertices}
    fin = tuple(v for v, r in table.items() if r.kind == "finite")
    inf = tuple(v for v, r in table.items() if r.kind == "infinite")
    und = tuple(v for v, r in table.items() if r.kind == "undetermined")
    if inf:
        gldim = PdResult.infinite(*table[inf[0]].witness)
    elif und:
        gldim = PdResult.undetermined(table[und[0]].cutoff)
    else:
        gldim = PdResult.finite(max(r.value for r in table.values()))
    result = SimplesClassification(table, fin, inf, und, gldim)
    cache[cache_key] = result
    return result


def pd_of_set(algebra: BoundQuiverAlgebra, v, cutoff: int | None = None) -> PdResult:
    """max pd over the simples in V, with pd of the empty set being -1."""
    v_vertices = _as_vertex_set(algebra, v)
    if not v_vertices:
        return PdResult.finite(-1)
    cls = classify_simples(algebra, cutoff)
    results = [cls.table[i] for i in sorted(v_vertices)]
    for r in results:
        if r.kind == "infinite":
            return r
    for r in results:
        if r.kind == "undetermined":
            return r
    return PdResult.finite(max(r.value for r in results))


def ell_infinity(module: Module, cutoff: int | None = None) -> int:
    """Layer length taken at V = all simples of finite projective dimension."""
    cls = classify_simples(module.algebra, cutoff)
    if cls.undetermined_vertices:
        raise UndeterminedClassification(
            f"simples at vertices {cls.undetermined_vertices}",
            cls.table[cls.undetermined_vertices[0]].cutoff,
        )
    return layer_length(module, cls.finite_vertices).value


# -- ideal actions ------------------------------------------------------------


def module_times_ideal(module: Module, ideal: IdealBasis) -> Submodule:
    """The submodule M * J for a two-sided ideal J of the algebra."""
    if not ideal.two_sided:
        raise QalgError("module_times_ideal needs a two-sided ideal")
    algebra = module.algebra
    gf = algebra.gf
    out = []
    for j in algebra.quiver.vertices:
        pieces = []
        for a_row in ideal.rows:
            per_source: dict[int, np.ndarray] = {}
            for col in algebra.cols_by_target[j]:
                cval = int(a_row[col])
                if cval == 0:
                    continue
                path = algebra.basis[col]
                mat = cval * module.act_path(path)
                if path.source in per_source:
                    per_source[path.source] = per_source[path.source] + mat
                else:
                    per_source[path.source] = mat
            for s in sorted(per_source):
                mat = per_source[s] % algebra.p
                if mat.any():
                    pieces.append(mat)
        if pieces:
            out.append(gf.row_space(np.vstack(pieces)))
        else:
            out.append(np.zeros((0, module.dims[j - 1]), dtype=np.int64))
    return Submodule(module, out, check=False)


def torsion_layer_ideal(algebra: BoundQuiverAlgebra, v, steps: int = 0) -> IdealBasis:
    """t_V((rad t_V)^steps A) as a two-sided ideal of A.

    Computed on the regular module, whose vertex-j coordinates are the basis
    paths with target j, then reassembled into algebra coefficient vectors.
    """
    v_vertices = _as_vertex_set(algebra, v)
    reg = regular_module(algebra)
    rows = _full_rows(reg)
    for _ in range(steps):
        rows = _sub_radical_rows(reg, _sub_torsion_rows(reg, rows, v_vertices))
    rows = _sub_torsion_rows(reg, rows, v_vertices)
    vecs = []
    for j in algebra.quiver.vertices:
        cols = algebra.cols_by_target[j]
        for r in rows[j - 1]:
            vec = np.zeros(algebra.dim, dtype=np.int64)
            vec[cols] = r
            vecs.append(vec)
    if vecs:
        return IdealBasis(algebra, np.vstack(vecs), two_sided=True)
    return IdealBasis(algebra, np.zeros((0, algebra.dim), dtype=np.int64), two_sided=True)


def submodule_from_module_rows(module: Module, rows) -> Submodule:
    return Submodule(module, rows, check=False)
