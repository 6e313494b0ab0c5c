"""Quivers, paths, admissible relation ideals, and the compiled algebra.

A presentation (quiver, relations, p) is compiled by degreewise linear
algebra: for growing N the span of all products u*r*v of relations with
paths is computed inside the space of paths of length <= N, until every
length-N path falls into that span.  The least such N is the nilpotency
index; the non-pivot paths under a length-then-lex column order form the
multiplication basis of the quotient algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DuplicateArrow,
    NonParallelRelation,
    NotAdmissible,
    TooManyPaths,
    UnknownArrow,
)
from .linalg import DEFAULT_MODULUS, GF

MAX_LENGTH_DEFAULT = 64
PATH_CAP_DEFAULT = 200_000


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Path:
    """A path in the quiver: a composable arrow-index word.

    The empty word is the trivial path at a vertex, with source == target.
    Arrows are listed in traversal order: the first arrow is applied first.
    """

    source: int
    target: int
    arrows: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def sort_key(self):
        return (len(self.arrows), self.arrows, self.source)


def trivial_path(vertex: int) -> Path:
    return Path(vertex, vertex, ())


class Quiver:
    """A finite quiver on vertices 1..n with named arrows."""

    def __init__(self, n_vertices: int, arrows: list[Arrow]):
        if n_vertices < 1:
            raise ValueError("a quiver needs at least one vertex")
        self.n = n_vertices
        self.arrows = tuple(arrows)
        self.arrow_index: dict[str, int] = {}
        for idx, a in enumerate(self.arrows):
            if a.name in self.arrow_index:
                raise DuplicateArrow(f"arrow {a.name!r} declared twice", 0, 0)
            if not (1 <= a.source <= n_vertices and 1 <= a.target <= n_vertices):
                raise UnknownArrow(
                    f"arrow {a.name!r} endpoints ({a.source} -> {a.target}) "
                    f"outside vertices 1..{n_vertices}"
                )
            self.arrow_index[a.name] = idx
        self.by_source: dict[int, list[int]] = {v: [] for v in self.vertices}
        self.by_target: dict[int, list[int]] = {v: [] for v in self.vertices}
        for idx, a in enumerate(self.arrows):
            self.by_source[a.source].append(idx)
            self.by_target[a.target].append(idx)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def path_from_names(self, names: list[str]) -> Path | None:
        """Path for an arrow-name word, or None when the word does not compose."""
        idxs = []
        for name in names:
            if name not in self.arrow_index:
                raise UnknownArrow(f"unknown arrow {name!r}")
            idxs.append(self.arrow_index[name])
        if not idxs:
            raise ValueError("empty word has no unique vertex")
        for a, b in zip(idxs, idxs[1:]):
            if self.arrows[a].target != self.arrows[b].source:
                return None
        return Path(self.arrows[idxs[0]].source, self.arrows[idxs[-1]].target, tuple(idxs))


@dataclass(frozen=True)
class Relation:
    """A parallel linear combination of paths of length >= 2."""

    terms: tuple[tuple[int, Path], ...]

    @property
    def source(self) -> int:
        return self.terms[0][1].source

    @property
    def target(self) -> int:
        return self.terms[0][1].target

    @property
    def max_term_length(self) -> int:
        return max(len(p) for _, p in self.terms)


def _validate_relations(quiver: Quiver, relations: list[Relation], p: int) -> list[Relation]:
    cleaned = []
    for rel in relations:
        terms = []
        for coeff, path in rel.terms:
            coeff %= p
            if coeff == 0:
                continue
            for a in path.arrows:
                if not 0 <= a < len(quiver.arrows):
                    raise UnknownArrow(f"relation uses arrow index {a} outside the quiver")
            for a, b in zip(path.arrows, path.arrows[1:]):
                if quiver.arrows[a].target != quiver.arrows[b].source:
                    raise NonParallelRelation("relation term is not a composable path")
            if len(path) < 2:
                raise NonParallelRelation(
                    "relation terms must have length >= 2 (admissible ideals sit inside rad^2)"
                )
            terms.append((coeff, path))
        if not terms:
            continue
        st = {(path.source, path.target) for _, path in terms}
        if len(st) > 1:
            raise NonParallelRelation(f"relation mixes parallelism classes {sorted(st)}")
        cleaned.append(Relation(tuple(terms)))
    return cleaned


class _Block:
    """Reduction data for one (source, target) parallelism class of paths."""

    __slots__ = ("paths", "col", "rows", "pivots", "pivot_set", "basis_cols")

    def __init__(self, paths: list[Path]):
        self.paths = paths
        self.col = {p: i for i, p in enumerate(paths)}
        self.rows = None
        self.pivots: list[int] = []
        self.pivot_set: set[int] = set()
        self.basis_cols: list[int] = []


class BoundQuiverAlgebra:
    """A compiled bound quiver algebra with a normal-form path basis."""

    def __init__(self, quiver, relations, gf, nilpotency, blocks, max_length):
        self.quiver = quiver
        self.relations = tuple(relations)
        self.gf = gf
        self.p = gf.p
        self.nilpotency = nilpotency
        self.max_length = max_length
        self._blocks: dict[tuple[int, int], _Block] = blocks

        self.basis: list[Path] = []
        for st in sorted(self._blocks):
            block = self._blocks[st]
            for c in block.basis_cols:
                self.basis.append(block.paths[c])
        self.dim = len(self.basis)
        self.basis_index = {path: i for i, path in enumerate(self.basis)}
        self.cols_by_source: dict[int, list[int]] = {v: [] for v in quiver.vertices}
        self.cols_by_target: dict[int, list[int]] = {v: [] for v in quiver.vertices}
        for i, path in enumerate(self.basis):
            self.cols_by_source[path.source].append(i)
            self.cols_by_target[path.target].append(i)
        self._prod_cache: dict[tuple[int, int], np.ndarray | None] = {}

    # -- basic structure --------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return self.quiver.n

    def idempotent(self, vertex: int) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.int64)
        vec[self.basis_index[trivial_path(vertex)]] = 1
        return vec

    def unit(self) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.int64)
        for v in self.quiver.vertices:
            vec[self.basis_index[trivial_path(v)]] = 1
        return vec

    def arrow_element(self, arrow_idx: int) -> np.ndarray:
        a = self.quiver.arrows[arrow_idx]
        return self.path_normal_form(Path(a.source, a.target, (arrow_idx,)))

    def dims_of_projectives(self) -> dict[int, int]:
        return {v: len(self.cols_by_source[v]) for v in self.quiver.vertices}

    def loewy_length(self) -> int:
        """Least n with rad^n = 0; equals the nilpotency index."""
        return self.nilpotency

    # -- normal forms and multiplication ----------------------------------

    def path_normal_form(self, path: Path) -> np.ndarray:
        """Coefficient vector of a quiver path in the algebra basis."""
        vec = np.zeros(self.dim, dtype=np.int64)
        if len(path) >= self.nilpotency:
            return vec
        block = self._blocks.get((path.source, path.target))
        if block is None or path not in block.col:
            return vec
        c = block.col[path]
        if c not in block.pivot_set:
            vec[self.basis_index[path]] = 1
            return vec
        row = block.rows[block.pivots.index(c)]
        for bc in block.basis_cols:
            val = (-row[bc]) % self.p
            if val:
                vec[self.basis_index[block.paths[bc]]] = val
        return vec

    def _basis_product(self, i: int, j: int) -> np.ndarray | None:
        """Normal form of basis[i] * basis[j]; None stands for zero."""
        key = (i, j)
        if key in self._prod_cache:
            return self._prod_cache[key]
        u, w = self.basis[i], self.basis[j]
        result: np.ndarray | None
        if u.target != w.source:
            result = None
        else:
            prod = Path(u.source, w.target, u.arrows + w.arrows)
            vec = self.path_normal_form(prod)
            result = vec if vec.any() else None
        self._prod_cache[key] = result
        return result

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of two coefficient vectors, in normal form."""
        out = np.zeros(self.dim, dtype=np.int64)
        for i in np.nonzero(x)[0]:
            xi = int(x[i])
            for j in np.nonzero(y)[0]:
                prod = self._basis_product(int(i), int(j))
                if prod is not None:
                    out += xi * int(y[j]) * prod
        return out % self.p

    def element(self, coeffs) -> "AlgebraElement":
        return AlgebraElement(self, self.gf.array(coeffs))

    # -- ideals ------------------------------------------------------------

    def radical_ideal(self) -> "IdealBasis":
        """rad A: the span of the basis paths of length >= 1."""
        cols = [i for i, path in enumerate(self.basis) if len(path) >= 1]
        rows = np.zeros((len(cols), self.dim), dtype=np.int64)
        for r, c in enumerate(cols):
            rows[r, c] = 1
        return IdealBasis(self, rows, two_sided=True)

    def two_sided_closure(self, gens: list[np.ndarray]) -> "IdealBasis":
        """Smallest subspace containing gens closed under two-sided multiplication."""
        gf = self.gf
        rows = gf.zeros(0, self.dim)
        pivots: list[int] = []
        work: list[np.ndarray] = []

        def absorb(vec: np.ndarray) -> bool:
            nonlocal rows, pivots
            red = gf.reduce_mod_rows(rows, pivots, vec % self.p)
            if not red.any():
                return False
            rows = gf.row_space(np.vstack([rows, red.reshape(1, -1)]))
            pivots = [int(np.nonzero(r)[0][0]) for r in rows]
            return True

        for g in gens:
            g = gf.array(g)
            if absorb(g):
                work.append(g)
        multipliers = [self.idempotent(v) for v in self.quiver.vertices]
        multipliers += [self.arrow_element(i) for i in range(len(self.quiver.arrows))]
        while work:
            vec = work.pop()
            for m in multipliers:
                for prod in (self.multiply(m, vec), self.multiply(vec, m)):
                    if prod.any() and absorb(prod):
                        work.append(prod)
        return IdealBasis(self, rows, two_sided=True)


@dataclass(frozen=True)
class AlgebraElement:
    """A coefficient vector over the algebra basis."""

    algebra: BoundQuiverAlgebra
    coeffs: np.ndarray = field(compare=False)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.algebra.multiply(self.coeffs, other.coeffs))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.algebra, (self.coeffs + other.coeffs) % self.algebra.p)

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraElement) and np.array_equal(self.coeffs, other.coeffs)


class IdealBasis:
    """An RREF row basis of a subspace of A, optionally verified two-sided."""

    def __init__(self, algebra: BoundQuiverAlgebra, rows: np.ndarray, two_sided: bool = False):
        self.algebra = algebra
        self.rows = algebra.gf.row_space(rows)
        self.two_sided = two_sided

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    def contains(self, vec: np.ndarray) -> bool:
        return self.algebra.gf.subspace_contains(self.rows, vec)

    def verify_two_sided(self) -> bool:
        A = self.algebra
        multipliers = [A.idempotent(v) for v in A.quiver.vertices]
        multipliers += [A.arrow_element(i) for i in range(len(A.quiver.arrows))]
        for row in self.rows:
            for m in multipliers:
                if not self.contains(A.multiply(m, row)):
                    return False
                if not self.contains(A.multiply(row, m)):
                    return False
        return True


def _enumerate_paths(quiver: Quiver, up_to: int, cap: int) -> list[list[Path]]:
    """Paths grouped by length, each length sorted by arrow word."""
    by_len: list[list[Path]] = [[trivial_path(v) for v in quiver.vertices]]
    total = quiver.n
    for _ in range(up_to):
        nxt = []
        for path in by_len[-1]:
            for a in quiver.by_source[path.target]:
                nxt.append(Path(path.source, quiver.arrows[a].target, path.arrows + (a,)))
        nxt.sort(key=lambda q: q.arrows)
        total += len(nxt)
        if total > cap:
            raise TooManyPaths(total, cap)
        by_len.append(nxt)
        if not nxt:
            break
    return by_len


def compile_presentation(
    quiver: Quiver,
    relations: list[Relation],
    p: int = DEFAULT_MODULUS,
    max_length: int = MAX_LENGTH_DEFAULT,
    path_cap: int = PATH_CAP_DEFAULT,
) -> BoundQuiverAlgebra:
    """Compile a presentation into a finite-dimensional algebra.

    Raises NotAdmissible when no nilpotency index exists within max_length,
    and TooManyPaths when enumeration outgrows path_cap (never truncates).
    """
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    gf = GF(p)
    relations = _validate_relations(quiver, relations, p)

    for n in range(1, max_length + 1):
        by_len = _enumerate_paths(quiver, n, path_cap)
        top = by_len[n] if len(by_len) > n else []
        blocks = _build_blocks(quiver, relations, by_len, n, gf)
        if (
            _all_top_paths_reduce(blocks, top)
            and _relations_vanish(blocks, relations, n, gf)
            and _ideal_stable(blocks, quiver, n, gf)
        ):
            return BoundQuiverAlgebra(quiver, relations, gf, n, blocks, max_length)
    raise NotAdmissible(max_length)


def _build_blocks(quiver, relations, by_len, n, gf) -> dict[tuple[int, int], _Block]:
    paths_by_st: dict[tuple[int, int], list[Path]] = {}
    for length_paths in by_len[: n + 1]:
        for path in length_paths:
            paths_by_st.setdefault((path.source, path.target), []).append(path)
    blocks = {st: _Block(paths) for st, paths in paths_by_st.items()}

    ends_at: dict[int, list[Path]] = {v: [] for v in quiver.vertices}
    starts_at: dict[int, list[Path]] = {v: [] for v in quiver.vertices}
    for length_paths in by_len[: n + 1]:
        for path in length_paths:
            ends_at[path.target].append(path)
            starts_at[path.source].append(path)

    gen_rows: dict[tuple[int, int], list[np.ndarray]] = {}
    for rel in relations:
        budget = n - rel.max_term_length
        if budget < 0:
            continue
        for u in ends_at[rel.source]:
            if len(u) > budget:
                continue
            for v in starts_at[rel.target]:
                if len(u) + len(v) > budget:
                    continue
                st = (u.source, v.target)
                block = blocks[st]
                row = np.zeros(len(block.paths), dtype=np.int64)
                for coeff, term in rel.terms:
                    prod = Path(u.source, v.target, u.arrows + term.arrows + v.arrows)
                    row[block.col[prod]] += coeff
                gen_rows.setdefault(st, []).append(row % gf.p)

    for st, block in blocks.items():
        rows = gen_rows.get(st)
        if rows:
            reduced, pivots = gf.rref(np.vstack(rows))
            block.rows = reduced[: len(pivots)]
            block.pivots = pivots
        else:
            block.rows = gf.zeros(0, len(block.paths))
            block.pivots = []
        block.pivot_set = set(block.pivots)
        block.basis_cols = [c for c in range(len(block.paths)) if c not in block.pivot_set]
    return blocks


def _all_top_paths_reduce(blocks, top_paths) -> bool:
    for path in top_paths:
        block = blocks[(path.source, path.target)]
        c = block.col[path]
        if c not in block.pivot_set:
            return False
        row = block.rows[block.pivots.index(c)]
        # The path is in the span iff its RREF row is the bare unit vector.
        if np.count_nonzero(row) != 1:
            return False
    return True


def _reduce_in_block(block: _Block, vec: np.ndarray, p: int) -> np.ndarray:
    if not block.pivots:
        return vec % p
    return (vec - vec[block.pivots] @ block.rows) % p


def _relations_vanish(blocks, relations, n, gf) -> bool:
    """Every relation must land in the computed span, terms beyond length n
    being zero already (all length-n paths reduce when this runs)."""
    for rel in relations:
        block = blocks.get((rel.source, rel.target))
        vec = np.zeros(len(block.paths) if block else 0, dtype=np.int64)
        for coeff, term in rel.terms:
            if len(term) > n:
                continue
            if block is None or term not in block.col:
                return False
            vec[block.col[term]] += coeff
        if block is not None and _reduce_in_block(block, vec, gf.p).any():
            return False
    return True


def _ideal_stable(blocks, quiver, n, gf) -> bool:
    """The span must absorb one-arrow products of its rows (long paths drop
    to zero), otherwise the quotient multiplication would be inconsistent.
    Trivial for monomial and length-homogeneous relations."""
    p = gf.p
    for (s, t), block in blocks.items():
        if block.rows.shape[0] == 0:
            continue
        for row in block.rows:
            cols = np.nonzero(row)[0]
            for a in quiver.by_source[t]:
                dest = blocks.get((s, quiver.arrows[a].target))
                if dest is None:
                    continue
                vec = np.zeros(len(dest.paths), dtype=np.int64)
                for c in cols:
                    path = block.paths[c]
                    if len(path) + 1 >= n:
                        continue
                    longer = Path(s, quiver.arrows[a].target, path.arrows + (a,))
                    vec[dest.col[longer]] += row[c]
                if _reduce_in_block(dest, vec, p).any():
                    return False
            for a in quiver.by_target[s]:
                dest = blocks.get((quiver.arrows[a].source, t))
                if dest is None:
                    continue
                vec = np.zeros(len(dest.paths), dtype=np.int64)
                for c in cols:
                    path = block.paths[c]
                    if len(path) + 1 >= n:
                        continue
                    longer = Path(quiver.arrows[a].source, t, (a,) + path.arrows)
                    vec[dest.col[longer]] += row[c]
                if _reduce_in_block(dest, vec, p).any():
                    return False
    return True
