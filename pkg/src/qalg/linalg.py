"""Exact linear algebra over a prime field GF(p).

Matrices are numpy int64 arrays with entries reduced into [0, p).  Subspaces
are represented by their row spans; every basis returned by this module is in
reduced row echelon form, so two equal subspaces have entry-wise equal bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BadModulus, DimensionMismatch

DEFAULT_MODULUS = 101


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=None)
def _inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


@dataclass(frozen=True)
class GF:
    """Arithmetic and Gaussian elimination mod a prime p."""

    p: int = DEFAULT_MODULUS

    def __post_init__(self):
        if not is_prime(self.p):
            raise BadModulus(self.p)

    # -- scalars and array builders ------------------------------------

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return int(_inverse_table(self.p)[a])

    def array(self, data) -> np.ndarray:
        return np.asarray(data, dtype=np.int64) % self.p

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a @ b) % self.p

    # -- elimination ----------------------------------------------------

    def rref(self, m) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and the pivot column indices."""
        p = self.p
        a = np.array(m, dtype=np.int64) % p
        if a.ndim != 2:
            raise DimensionMismatch(f"expected a 2d array, got shape {a.shape}")
        nrows, ncols = a.shape
        inv = _inverse_table(p)
        pivots: list[int] = []
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            nz = np.nonzero(a[r:, c])[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                a[[r, i]] = a[[i, r]]
            a[r] = a[r] * inv[a[r, c]] % p
            others = np.nonzero(a[:, c])[0]
            others = others[others != r]
            if others.size:
                a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
            pivots.append(c)
            r += 1
        return a, pivots

    def rank(self, m) -> int:
        return len(self.rref(m)[1])

    def kernel_basis(self, m) -> np.ndarray:
        """Columns spanning the right null space {x : m @ x = 0}.

        Column count is cols - rank(m); the basis is the canonical
        free-variable parameterization read off the RREF.
        """
        a = self.array(m)
        reduced, pivots = self.rref(a)
        ncols = a.shape[1]
        pivot_set = set(pivots)
        free = [c for c in range(ncols) if c not in pivot_set]
        k = self.zeros(ncols, len(free))
        for idx, f in enumerate(free):
            k[f, idx] = 1
            for j, pc in enumerate(pivots):
                k[pc, idx] = (-reduced[j, f]) % self.p
        return k

    def left_kernel(self, m) -> np.ndarray:
        """Rows spanning {x : x @ m = 0}, RREF-canonical."""
        a = self.array(m)
        return self.row_space(self.kernel_basis(a.T).T)

    def solve(self, m, rhs) -> np.ndarray | None:
        """Any solution x of m @ x = rhs, or None when rhs is not reachable.

        rhs may have several columns; a 1d rhs yields a 1d solution.
        """
        a = self.array(m)
        b = self.array(rhs)
        vector = b.ndim == 1
        if vector:
            b = b.reshape(-1, 1)
        if a.shape[0] != b.shape[0]:
            raise DimensionMismatch(f"row counts differ: {a.shape[0]} vs {b.shape[0]}")
        ncols = a.shape[1]
        reduced, pivots = self.rref(np.hstack([a, b]))
        if any(pc >= ncols for pc in pivots):
            return None
        x = self.zeros(ncols, b.shape[1])
        for j, pc in enumerate(pivots):
            x[pc] = reduced[j, ncols:]
        return x[:, 0] if vector else x

    # -- row-span subspaces ----------------------------------------------

    def row_space(self, m) -> np.ndarray:
        """Canonical basis (RREF rows, zero rows dropped) of the row span."""
        reduced, pivots = self.rref(m)
        return reduced[: len(pivots)]

    def sum_subspaces(self, a, b) -> np.ndarray:
        a, b = self.array(a), self.array(b)
        if a.shape[1] != b.shape[1]:
            raise DimensionMismatch("ambient dimensions differ")
        return self.row_space(np.vstack([a, b]))

    def intersect_subspaces(self, a, b) -> np.ndarray:
        a, b = self.array(a), self.array(b)
        if a.shape[1] != b.shape[1]:
            raise DimensionMismatch("ambient dimensions differ")
        if a.shape[0] == 0 or b.shape[0] == 0:
            return self.zeros(0, a.shape[1])
        # w = (u, v) with u @ a = v @ b; the intersection is {u @ a}.
        stacked = np.vstack([a, (-b) % self.p])
        w = self.left_kernel(stacked)
        u = w[:, : a.shape[0]]
        return self.row_space(self.matmul(u, a))

    def subspace_contains(self, basis, v) -> bool:
        basis = self.array(basis)
        v = self.array(v)
        if v.ndim == 1:
            v = v.reshape(1, -1)
        if basis.shape[1] != v.shape[1]:
            raise DimensionMismatch("ambient dimensions differ")
        return self.rank(np.vstack([basis, v])) == self.rank(basis)

    def reduce_mod_rows(self, basis_rref: np.ndarray, pivots: list[int], v: np.ndarray) -> np.ndarray:
        """v minus its projection onto an RREF row basis; zero iff contained."""
        if basis_rref.shape[0] == 0:
            return v % self.p
        coeff = v[..., pivots]
        return (v - coeff @ basis_rref) % self.p

    def coords_in_rref(self, basis_rref: np.ndarray, pivots: list[int], rows: np.ndarray) -> np.ndarray:
        """Coefficients c with c @ basis = rows, assuming rows lie in the span."""
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        if basis_rref.shape[0] == 0:
            return self.zeros(rows.shape[0], 0)
        return rows[:, pivots] % self.p

    def invert(self, m) -> np.ndarray | None:
        """Inverse of a square matrix, or None when singular."""
        a = self.array(m)
        if a.shape[0] != a.shape[1]:
            raise DimensionMismatch("matrix is not square")
        n = a.shape[0]
        if n == 0:
            return self.zeros(0, 0)
        sol = self.solve(a, self.eye(n))
        return sol
