"""Right modules over a compiled bound quiver algebra, as representations.

A module places a row-vector space at every vertex and a d_i x d_j matrix on
every arrow i -> j; the arrow acts on the right, x -> x @ mat.  Submodules
carry RREF row bases per vertex, so equal submodules compare entry-wise.
Projective covers are minimal everywhere, which makes syzygies canonical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, QalgError
from .quiver import BoundQuiverAlgebra, Path


class Module:
    """A finite-dimensional right module, given by its representation data."""

    def __init__(self, algebra: BoundQuiverAlgebra, dims, mats, check: bool = True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.quiver.n:
            raise DimensionMismatch("dimension vector length differs from vertex count")
        fixed = {}
        for idx, arrow in enumerate(algebra.quiver.arrows):
            mat = mats.get(idx)
            ds, dt = self.dims[arrow.source - 1], self.dims[arrow.target - 1]
            if mat is None:
                mat = np.zeros((ds, dt), dtype=np.int64)
            else:
                mat = np.asarray(mat, dtype=np.int64) % algebra.p
                if mat.shape != (ds, dt):
                    raise DimensionMismatch(
                        f"arrow {arrow.name}: matrix shape {mat.shape} != ({ds}, {dt})"
                    )
            fixed[idx] = mat
        self.mats = fixed
        self._act_cache: dict[tuple, np.ndarray] = {}
        if check:
            self._check_relations()

    def _check_relations(self):
        p = self.algebra.p
        for rel in self.algebra.relations:
            ds = self.dims[rel.source - 1]
            dt = self.dims[rel.target - 1]
            acc = np.zeros((ds, dt), dtype=np.int64)
            for coeff, term in rel.terms:
                acc = (acc + coeff * self.act_path(term)) % p
            if acc.any():
                raise QalgError("representation does not satisfy the relations")

    # -- structure ---------------------------------------------------------

    @property
    def dim_vector(self) -> tuple[int, ...]:
        return self.dims

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def dim_at(self, vertex: int) -> int:
        return self.dims[vertex - 1]

    def act_path(self, path: Path) -> np.ndarray:
        """Matrix of the right action of a path, dim(source) x dim(target)."""
        key = (path.source, path.arrows)
        cached = self._act_cache.get(key)
        if cached is not None:
            return cached
        mat = np.eye(self.dims[path.source - 1], dtype=np.int64)
        for a in path.arrows:
            mat = (mat @ self.mats[a]) % self.algebra.p
        self._act_cache[key] = mat
        return mat

    def __repr__(self):
        return f"Module(dims={self.dims})"


@dataclass(frozen=True)
class ModuleHom:
    """A per-vertex matrix family intertwining the arrow actions."""

    source: Module
    target: Module
    mats: tuple[np.ndarray, ...]

    def verify(self) -> bool:
        p = self.source.algebra.p
        for idx, arrow in enumerate(self.source.algebra.quiver.arrows):
            i, j = arrow.source - 1, arrow.target - 1
            left = self.source.mats[idx] @ self.mats[j] % p
            right = self.mats[i] @ self.target.mats[idx] % p
            if not np.array_equal(left, right):
                return False
        return True

    def compose(self, then: "ModuleHom") -> "ModuleHom":
        if then.source is not self.target:
            raise DimensionMismatch("homs do not compose")
        p = self.source.algebra.p
        mats = tuple(a @ b % p for a, b in zip(self.mats, then.mats))
        return ModuleHom(self.source, then.target, mats)

    def is_vertexwise_invertible(self) -> bool:
        gf = self.source.algebra.gf
        for m in self.mats:
            if m.shape[0] != m.shape[1]:
                return False
            if m.shape[0] and gf.rank(m) != m.shape[0]:
                return False
        return True

    @staticmethod
    def identity(module: Module) -> "ModuleHom":
        mats = tuple(np.eye(d, dtype=np.int64) for d in module.dims)
        return ModuleHom(module, module, mats)


class Submodule:
    """A per-vertex RREF row basis closed under the arrow action."""

    def __init__(self, parent: Module, rows, check: bool = True):
        gf = parent.algebra.gf
        self.parent = parent
        canon = []
        for v, d in enumerate(parent.dims):
            r = rows[v] if v < len(rows) and rows[v] is not None else np.zeros((0, d), dtype=np.int64)
            r = np.asarray(r, dtype=np.int64)
            if d == 0:
                r = np.zeros((0, 0), dtype=np.int64)
            elif r.ndim != 2:
                r = r.reshape(-1, d)
            canon.append(gf.row_space(r))
        self.rows = tuple(canon)
        self.pivots = tuple(
            [int(np.nonzero(row)[0][0]) for row in r] for r in self.rows
        )
        if check and not self._is_closed():
            raise QalgError("subspace family is not closed under the arrow action")

    def _is_closed(self) -> bool:
        gf = self.parent.algebra.gf
        for idx, arrow in enumerate(self.parent.algebra.quiver.arrows):
            i, j = arrow.source - 1, arrow.target - 1
            if self.rows[i].shape[0] == 0:
                continue
            image = self.rows[i] @ self.parent.mats[idx] % self.parent.algebra.p
            if gf.reduce_mod_rows(self.rows[j], self.pivots[j], image).any():
                return False
        return True

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(r.shape[0] for r in self.rows)

    @property
    def total_dim(self) -> int:
        return sum(r.shape[0] for r in self.rows)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def contains(self, other: "Submodule") -> bool:
        gf = self.parent.algebra.gf
        for mine, pivs, theirs in zip(self.rows, self.pivots, other.rows):
            if theirs.shape[0] and gf.reduce_mod_rows(mine, pivs, theirs).any():
                return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, Submodule)
            and self.parent is other.parent
            and all(np.array_equal(a, b) for a, b in zip(self.rows, other.rows))
        )

    def to_module(self) -> tuple[Module, ModuleHom]:
        """The abstract module on the basis rows, with its inclusion."""
        parent = self.parent
        gf = parent.algebra.gf
        p = parent.algebra.p
        mats = {}
        for idx, arrow in enumerate(parent.algebra.quiver.arrows):
            i, j = arrow.source - 1, arrow.target - 1
            image = self.rows[i] @ parent.mats[idx] % p
            mats[idx] = gf.coords_in_rref(self.rows[j], self.pivots[j], image)
        mod = Module(parent.algebra, self.dims, mats, check=False)
        incl = ModuleHom(mod, parent, tuple(self.rows))
        return mod, incl


def zero_module(algebra: BoundQuiverAlgebra) -> Module:
    return Module(algebra, (0,) * algebra.quiver.n, {}, check=False)


def simple(algebra: BoundQuiverAlgebra, vertex: int) -> Module:
    dims = [0] * algebra.quiver.n
    dims[vertex - 1] = 1
    return Module(algebra, dims, {}, check=False)


def projective(algebra: BoundQuiverAlgebra, vertex: int) -> Module:
    """P(vertex) = e_vertex * A on the normal-form paths out of the vertex."""
    cache = getattr(algebra, "_projective_cache", None)
    if cache is None:
        cache = {}
        algebra._projective_cache = cache
    if vertex in cache:
        return cache[vertex]
    paths_at: dict[int, list[Path]] = {v: [] for v in algebra.quiver.vertices}
    for col in algebra.cols_by_source[vertex]:
        path = algebra.basis[col]
        paths_at[path.target].append(path)
    col_of = {
        path: k for v in algebra.quiver.vertices for k, path in enumerate(paths_at[v])
    }
    dims = [len(paths_at[v]) for v in algebra.quiver.vertices]
    mats = {}
    for idx, arrow in enumerate(algebra.quiver.arrows):
        i, j = arrow.source, arrow.target
        mat = np.zeros((len(paths_at[i]), len(paths_at[j])), dtype=np.int64)
        for r, w in enumerate(paths_at[i]):
            vec = algebra.path_normal_form(Path(vertex, j, w.arrows + (idx,)))
            for col in np.nonzero(vec)[0]:
                mat[r, col_of[algebra.basis[col]]] = vec[col]
        mats[idx] = mat
    mod = Module(algebra, dims, mats, check=False)
    cache[vertex] = mod
    return mod


def direct_sum(summands: list[Module], algebra: BoundQuiverAlgebra | None = None) -> Module:
    if not summands:
        if algebra is None:
            raise ValueError("direct_sum of nothing needs the algebra")
        return zero_module(algebra)
    algebra = summands[0].algebra
    dims = [sum(m.dims[v] for m in summands) for v in range(algebra.quiver.n)]
    mats = {}
    for idx, arrow in enumerate(algebra.quiver.arrows):
        i, j = arrow.source - 1, arrow.target - 1
        blocks = [m.mats[idx] for m in summands]
        mat = np.zeros((dims[i], dims[j]), dtype=np.int64)
        r = c = 0
        for b in blocks:
            mat[r : r + b.shape[0], c : c + b.shape[1]] = b
            r += b.shape[0]
            c += b.shape[1]
        mats[idx] = mat
    return Module(algebra, dims, mats, check=False)


def regular_module(algebra: BoundQuiverAlgebra) -> Module:
    """A as a right module over itself: the sum of all indecomposable projectives.

    At vertex j the coordinates are the basis paths with target j, ordered by
    source vertex and then as in the algebra basis (matching cols_by_target).
    """
    return direct_sum([projective(algebra, v) for v in algebra.quiver.vertices])


def radical(module: Module) -> Submodule:
    """rad M: the sum of the images of all arrow actions."""
    gf = module.algebra.gf
    rows = []
    for v in module.algebra.quiver.vertices:
        pieces = [
            module.mats[a]
            for a in module.algebra.quiver.by_target[v]
            if module.mats[a].shape[0]
        ]
        if pieces:
            rows.append(gf.row_space(np.vstack(pieces)))
        else:
            rows.append(np.zeros((0, module.dims[v - 1]), dtype=np.int64))
    return Submodule(module, rows, check=False)


def top_dims(module: Module) -> tuple[int, ...]:
    """Multiplicity of each simple in M / rad M."""
    rad = radical(module)
    return tuple(d - r.shape[0] for d, r in zip(module.dims, rad.rows))


def hom_space(m: Module, n: Module) -> list[ModuleHom]:
    """A basis of Hom(M, N), from the intertwining linear system."""
    if m.algebra is not n.algebra:
        raise DimensionMismatch("modules live over different algebras")
    algebra = m.algebra
    gf = algebra.gf
    nv = algebra.quiver.n
    sizes = [m.dims[v] * n.dims[v] for v in range(nv)]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offsets[-1])
    if total == 0:
        return []
    blocks = []
    for idx, arrow in enumerate(algebra.quiver.arrows):
        i, j = arrow.source - 1, arrow.target - 1
        rows = m.dims[i] * n.dims[j]
        if rows == 0:
            continue
        block = np.zeros((rows, total), dtype=np.int64)
        block[:, offsets[j] : offsets[j + 1]] = np.kron(
            m.mats[idx], np.eye(n.dims[j], dtype=np.int64)
        )
        block[:, offsets[i] : offsets[i + 1]] -= np.kron(
            np.eye(m.dims[i], dtype=np.int64), n.mats[idx].T
        )
        blocks.append(block % algebra.p)
    system = np.vstack(blocks) if blocks else np.zeros((0, total), dtype=np.int64)
    kernel = gf.kernel_basis(system)
    homs = []
    for c in range(kernel.shape[1]):
        vec = kernel[:, c]
        mats = tuple(
            vec[offsets[v] : offsets[v + 1]].reshape(m.dims[v], n.dims[v])
            for v in range(nv)
        )
        homs.append(ModuleHom(m, n, mats))
    return homs


def is_iso(m: Module, n: Module, trials: int = 64, seed: int = 0) -> bool:
    """Probabilistic isomorphism test.

    Never reports isomorphic modules as such falsely; a true isomorphism can
    be missed with probability at most (max dim / p) ** trials, since each
    trial draws an independent random point of the hom space.
    """
    if m.dims != n.dims:
        return False
    if m.total_dim == 0:
        return True
    basis = hom_space(m, n)
    if not basis:
        return False
    gf = m.algebra.gf
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        coeffs = rng.integers(0, m.algebra.p, size=len(basis))
        ok = True
        for v in range(m.algebra.quiver.n):
            combo = sum(int(c) * h.mats[v] for c, h in zip(coeffs, basis)) % m.algebra.p
            if m.dims[v] and gf.rank(combo) != m.dims[v]:
                ok = False
                break
        if ok:
            return True
    return False


def projective_cover(module: Module) -> tuple[Module, ModuleHom]:
    """The minimal projective cover P ->> M.

    P stacks one P(j) per chosen top generator; the generators map onto the
    canonical complement of rad M (non-pivot unit vectors of its RREF basis).
    """
    algebra = module.algebra
    rad = radical(module)
    generators: list[tuple[int, int]] = []  # (vertex, coordinate of the lift)
    for v in algebra.quiver.vertices:
        pivots = set(rad.pivots[v - 1])
        for c in range(module.dims[v - 1]):
            if c not in pivots:
                generators.append((v, c))
    summands = [projective(algebra, v) for v, _ in generators]
    cover = direct_sum(summands, algebra=algebra)
    mats = []
    for v in algebra.quiver.vertices:
        rows = []
        for (src, c), summand in zip(generators, summands):
            paths = [
                algebra.basis[col]
                for col in algebra.cols_by_source[src]
                if algebra.basis[col].target == v
            ]
            block = np.zeros((len(paths), module.dims[v - 1]), dtype=np.int64)
            for r, w in enumerate(paths):
                block[r] = module.act_path(w)[c]
            rows.append(block)
        if rows:
            mats.append(np.vstack(rows) % algebra.p)
        else:
            mats.append(np.zeros((0, module.dims[v - 1]), dtype=np.int64))
    epi = ModuleHom(cover, module, tuple(mats))
    return cover, epi


def syzygy_step(module: Module) -> Module:
    """Kernel of the minimal projective cover."""
    cover, epi = projective_cover(module)
    gf = module.algebra.gf
    rows = [gf.left_kernel(epi.mats[v]) for v in range(module.algebra.quiver.n)]
    sub = Submodule(cover, rows, check=False)
    return sub.to_module()[0]


def syzygy(module: Module, m: int) -> Module:
    if m < 0:
        raise ValueError("syzygy index must be >= 0")
    current = module
    for _ in range(m):
        if current.is_zero():
            return current
        current = syzygy_step(current)
    return current


def submodule_generated(module: Module, elements: list[tuple[int, np.ndarray]]) -> Submodule:
    """Closure of the spans of the given (vertex, row vector) elements."""
    algebra = module.algebra
    gf = algebra.gf
    nv = algebra.quiver.n
    rows = [np.zeros((0, d), dtype=np.int64) for d in module.dims]
    stacks: list[list[np.ndarray]] = [[] for _ in range(nv)]
    for vertex, vec in elements:
        vec = np.asarray(vec, dtype=np.int64).reshape(-1) % algebra.p
        if vec.shape[0] != module.dims[vertex - 1]:
            raise DimensionMismatch("generator does not live at its vertex")
        stacks[vertex - 1].append(vec)
    dirty = []
    for v in range(nv):
        if stacks[v]:
            rows[v] = gf.row_space(np.vstack(stacks[v]))
            if rows[v].shape[0]:
                dirty.append(v)
    while dirty:
        v = dirty.pop()
        for a in algebra.quiver.by_source[v + 1]:
            j = algebra.quiver.arrows[a].target - 1
            image = rows[v] @ module.mats[a] % algebra.p
            if not image.any():
                continue
            merged = gf.row_space(np.vstack([rows[j], image]))
            if merged.shape[0] != rows[j].shape[0]:
                rows[j] = merged
                if j not in dirty:
                    dirty.append(j)
    return Submodule(module, rows, check=False)


def full_submodule(module: Module) -> Submodule:
    rows = [np.eye(d, dtype=np.int64) for d in module.dims]
    return Submodule(module, rows, check=False)


def quotient(module: Module, sub: Submodule) -> Module:
    """M / U on the non-pivot coordinates of U's RREF bases."""
    return quotient_with_projection(module, sub)[0]


def quotient_with_projection(module: Module, sub: Submodule) -> tuple[Module, ModuleHom]:
    if sub.parent is not module:
        raise DimensionMismatch("submodule belongs to a different module")
    algebra = module.algebra
    gf = algebra.gf
    nv = algebra.quiver.n
    npc = []
    for v in range(nv):
        pivots = set(sub.pivots[v])
        npc.append([c for c in range(module.dims[v]) if c not in pivots])
    mats = {}
    for idx, arrow in enumerate(algebra.quiver.arrows):
        i, j = arrow.source - 1, arrow.target - 1
        act = module.mats[idx][npc[i], :]
        act = gf.reduce_mod_rows(sub.rows[j], sub.pivots[j], act)
        mats[idx] = act[:, npc[j]]
    q = Module(algebra, [len(npc[v]) for v in range(nv)], mats, check=False)
    proj = []
    for v in range(nv):
        eye = np.eye(module.dims[v], dtype=np.int64)
        reduced = gf.reduce_mod_rows(sub.rows[v], sub.pivots[v], eye)
        proj.append(reduced[:, npc[v]])
    return q, ModuleHom(module, q, tuple(proj))


def in_add(m: Module, n: Module) -> bool:
    """Whether M lies in add(N): id_M factors through the hom spaces with N."""
    if m.algebra is not n.algebra:
        raise DimensionMismatch("modules live over different algebras")
    if m.is_zero():
        return True
    f_basis = hom_space(m, n)
    g_basis = hom_space(n, m)
    if not f_basis or not g_basis:
        return False
    gf = m.algebra.gf
    p = m.algebra.p
    nv = m.algebra.quiver.n
    columns = []
    for f in f_basis:
        for g in g_basis:
            comp = np.concatenate(
                [(f.mats[v] @ g.mats[v] % p).reshape(-1) for v in range(nv)]
            )
            columns.append(comp)
    target = np.concatenate(
        [np.eye(m.dims[v], dtype=np.int64).reshape(-1) for v in range(nv)]
    )
    sol = gf.solve(np.column_stack(columns), target)
    return sol is not None


def _split_pair(m: Module, proj: Module):
    """A split pair (f: P->M, g: M->P with f;g = id), or None."""
    gf = m.algebra.gf
    p = m.algebra.p
    nv = m.algebra.quiver.n
    f_basis = hom_space(proj, m)
    g_basis = hom_space(m, proj)
    if not f_basis or not g_basis:
        return None
    columns = []
    for f in f_basis:
        for g in g_basis:
            comp = np.concatenate(
                [(f.mats[v] @ g.mats[v] % p).reshape(-1) for v in range(nv)]
            )
            columns.append(comp)
    target = np.concatenate(
        [np.eye(proj.dims[v], dtype=np.int64).reshape(-1) for v in range(nv)]
    )
    sol = gf.solve(np.column_stack(columns), target)
    if sol is None:
        return None
    coeff = sol.reshape(len(f_basis), len(g_basis))
    # id_P = sum_b (f'_b ; g_b) with f'_b = sum_a c[a,b] f_a.  End(P) is local,
    # so at least one single composite f'_b ; g_b is invertible.
    for b, g in enumerate(g_basis):
        fmats = tuple(
            sum(int(coeff[a, b]) * f_basis[a].mats[v] for a in range(len(f_basis))) % p
            for v in range(nv)
        )
        comp = [fmats[v] @ g.mats[v] % p for v in range(nv)]
        inverses = []
        ok = True
        for mat in comp:
            inv = gf.invert(mat)
            if inv is None:
                ok = False
                break
            inverses.append(inv)
        if ok:
            gmats = tuple(g.mats[v] @ inverses[v] % p for v in range(nv))
            return ModuleHom(proj, m, fmats), ModuleHom(m, proj, gmats)
    return None


def strip_projective_summands(module: Module) -> tuple[Module, list[int]]:
    """Peel projective direct summands until none remain.

    Returns the projective-free core and the sorted multiset of the vertices
    whose P(i) were removed.  Deterministic: the factorization id_P through
    the hom spaces is solved exactly, and End(P(i)) being local guarantees a
    genuine split pair whenever P(i) is a summand.
    """
    algebra = module.algebra
    gf = algebra.gf
    stripped: list[int] = []
    current = module
    progress = True
    while progress and not current.is_zero():
        progress = False
        for v in algebra.quiver.vertices:
            proj = projective(algebra, v)
            if any(pd > md for pd, md in zip(proj.dims, current.dims)):
                continue
            pair = _split_pair(current, proj)
            if pair is None:
                continue
            f, g = pair
            p = algebra.p
            idem = tuple(g.mats[i] @ f.mats[i] % p for i in range(algebra.quiver.n))
            rows = [gf.left_kernel(idem[i]) for i in range(algebra.quiver.n)]
            current = Submodule(current, rows, check=False).to_module()[0]
            stripped.append(v)
            progress = True
            break
    return current, sorted(stripped)
