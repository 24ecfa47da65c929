"""Chevalley Lie algebras over GF(3)/GF(9): basis, bracket, adjoint matrices,
and subspace calculus (closure, centralizer, normalizer, derived series).

Basis order: e_alpha for all roots alpha in the root-system order (positive
roots by height then lex, followed by their negatives in the same order),
then h_1 .. h_rank for the simple coroots.
"""

from __future__ import annotations

import numpy as np

from . import gf
from .rootsys import RootSystem, root_label, parse_label


class AlgebraMismatchError(ValueError):
    pass


_TENSOR_CACHE = {}


def _bracket_tensor(rs: RootSystem):
    """T[i, j, k]: coefficient of basis k in [b_i, b_j], reduced mod 3."""
    cache_key = (rs.type_label, rs.basis_tag)
    if cache_key in _TENSOR_CACHE:
        return _TENSOR_CACHE[cache_key]
    nroots = len(rs.roots)
    dim = nroots + rs.rank
    T = np.zeros((dim, dim, dim), dtype=np.int8)
    idx = {r: i for i, r in enumerate(rs.roots)}
    for i, a in enumerate(rs.roots):
        for j, b in enumerate(rs.roots):
            s = tuple(x + y for x, y in zip(a, b))
            if all(c == 0 for c in s):
                # [e_a, e_{-a}] = h_a = a^vee over the simple coroots
                for k, c in enumerate(rs.coroot_coeffs(a)):
                    T[i, j, nroots + k] = c % 3
            elif rs.is_root(s):
                T[i, j, idx[s]] = rs.struct_const(a, b) % 3
    for k in range(rs.rank):
        alpha_k = tuple(1 if t == k else 0 for t in range(rs.rank))
        for j, b in enumerate(rs.roots):
            c = rs.pairing(b, alpha_k) % 3
            T[nroots + k, j, j] = c
            T[j, nroots + k, j] = (-c) % 3
    _TENSOR_CACHE[cache_key] = T
    return T


class ChevalleyAlgebra:
    """The Chevalley algebra of a root system over a fixed field."""

    def __init__(self, rs: RootSystem, field: gf.GF):
        self.rs = rs
        self.field = field
        self.nroots = len(rs.roots)
        self.dim = self.nroots + rs.rank
        self.tensor = _bracket_tensor(rs)
        self._root_index = {r: i for i, r in enumerate(rs.roots)}
        self._ad_cache = {}

    # -- basis helpers --

    def basis_labels(self):
        return [f"e:{root_label(r)}" for r in self.rs.roots] + [
            f"h:{k + 1}" for k in range(self.rs.rank)
        ]

    def root_index(self, r) -> int:
        return self._root_index[self.rs.check_root(r)]

    def e(self, r):
        """Basis vector e_r for a root r (tuple or digit-string label)."""
        if isinstance(r, str):
            r = parse_label(r, self.rs.rank)
        v = np.zeros(self.dim, dtype=np.int8)
        v[self.root_index(r)] = 1
        return v

    def h(self, k: int):
        """Simple coroot h_k, 1-based."""
        v = np.zeros(self.dim, dtype=np.int8)
        v[self.nroots + (k - 1)] = 1
        return v

    def element_to_json(self, v):
        labels = self.basis_labels()
        return {labels[i]: int(v[i]) for i in range(self.dim) if v[i]}

    def element_from_json(self, data):
        labels = {lab: i for i, lab in enumerate(self.basis_labels())}
        v = np.zeros(self.dim, dtype=np.int8)
        for lab, c in data.items():
            v[labels[lab]] = c
        return v

    # -- core operations --

    def _check(self, x):
        x = np.asarray(x)
        if x.shape != (self.dim,):
            raise AlgebraMismatchError("element does not belong to this algebra")
        return x

    def _contract(self, u, v):
        """sum_{i,j} u_i T[i,j,k] v_j over the nonzero support of u."""
        idx = np.flatnonzero(u)
        if idx.size == 0:
            return np.zeros(self.dim, dtype=np.int64)
        M = np.tensordot(u[idx].astype(np.int64), self.tensor[idx], axes=(0, 0))
        return M.T @ v.astype(np.int64)

    def bracket(self, x, y):
        x = self._check(x)
        y = self._check(y)
        if self.field.order == 3:
            return (self._contract(x, y) % 3).astype(np.int8)
        xa, xb = x % 3, x // 3
        ya, yb = y % 3, y // 3
        real = (self._contract(xa, ya) - self._contract(xb, yb)) % 3
        imag = (self._contract(xa, yb) + self._contract(xb, ya)) % 3
        return (real + 3 * imag).astype(np.int8)

    def ad_matrix(self, x):
        """Matrix of bracket(x, -) acting on column vectors."""
        x = self._check(x)
        T = self.tensor
        if self.field.order == 3:
            m = np.tensordot(x.astype(np.int64), T, axes=(0, 0)) % 3
            return m.T.astype(np.int8)
        xa, xb = (x % 3).astype(np.int64), (x // 3).astype(np.int64)
        ma = np.tensordot(xa, T, axes=(0, 0)).T % 3
        mb = np.tensordot(xb, T, axes=(0, 0)).T % 3
        return (ma + 3 * mb).astype(np.int8)

    def ad_basis(self, i: int):
        """ad of the i-th basis vector (cached; shared across fields)."""
        if i not in self._ad_cache:
            self._ad_cache[i] = np.ascontiguousarray(self.tensor[i].T)
        return self._ad_cache[i]

    # -- subspaces --

    def span(self, vectors):
        return SubalgebraBasis(self, vectors)

    def close_under_bracket(self, seed):
        if len(seed) == 0:
            raise ValueError("seed must be nonempty")
        basis = SubalgebraBasis(self, seed)
        while True:
            vecs = basis.echelon
            new_rows = [vecs]
            for u in vecs:
                img = self.field.mat_mul(self.ad_matrix(u), vecs.T).T
                new_rows.append(img)
            bigger = SubalgebraBasis(self, np.vstack(new_rows))
            if bigger.dim == basis.dim:
                return basis
            basis = bigger

    def centralizer(self, s):
        """Centralizer of a SubalgebraBasis or of a single element."""
        if isinstance(s, SubalgebraBasis):
            gens = s.echelon
        else:
            gens = np.asarray(s).reshape(1, -1)
        mats = [self.ad_matrix(g) for g in gens]
        ns = self.field.nullspace_stack(mats, self.dim)
        return SubalgebraBasis(self, ns) if len(ns) else SubalgebraBasis.empty(self)

    def normalizer(self, s: "SubalgebraBasis"):
        """{y : [y, s] is contained in span(s)}."""
        P = s.residual_projector()
        mats = [self.field.mat_mul(P, self.ad_matrix(g)) for g in s.echelon]
        ns = self.field.nullspace_stack(mats, self.dim)
        return SubalgebraBasis(self, ns) if len(ns) else SubalgebraBasis.empty(self)

    def derived_series(self, s: "SubalgebraBasis"):
        series = [s]
        while True:
            cur = series[-1]
            if cur.dim == 0:
                break
            rows = []
            vecs = cur.echelon
            for u in vecs:
                rows.append(self.field.mat_mul(self.ad_matrix(u), vecs.T).T)
            nxt = SubalgebraBasis(self, np.vstack(rows)) if rows else SubalgebraBasis.empty(self)
            if nxt.dim == cur.dim:
                break
            series.append(nxt)
        return series


class SubalgebraBasis:
    """An echelonized subspace of a Chevalley algebra (not necessarily closed)."""

    def __init__(self, algebra: ChevalleyAlgebra, vectors):
        self.algebra = algebra
        vectors = np.asarray(vectors, dtype=np.int8)
        if vectors.ndim == 1:
            vectors = vectors.reshape(1, -1)
        if vectors.size == 0:
            self.echelon = np.zeros((0, algebra.dim), dtype=np.int8)
            self.pivots = ()
        else:
            R, piv = algebra.field.rref(vectors)
            self.echelon = R[: len(piv)]
            self.pivots = piv

    @classmethod
    def empty(cls, algebra):
        return cls(algebra, np.zeros((0, algebra.dim), dtype=np.int8))

    @property
    def dim(self) -> int:
        return self.echelon.shape[0]

    def contains(self, v) -> bool:
        return bool(np.all(self.residual(v) == 0))

    def coords(self, v):
        """Coordinates over the echelon rows; valid when contains(v)."""
        return np.asarray(v)[list(self.pivots)]

    def residual(self, v):
        v = np.asarray(v)
        c = v[list(self.pivots)]
        field = self.algebra.field
        proj = field.mat_mul(c.reshape(1, -1), self.echelon).reshape(-1)
        return field.sub(v, proj)

    def residual_projector(self):
        """Matrix P with P v = v - (projection of v onto this row space)."""
        n = self.algebra.dim
        field = self.algebra.field
        sel = np.zeros((self.dim, n), dtype=np.int8)
        for k, p in enumerate(self.pivots):
            sel[k, p] = 1
        P = field.sub(field.identity(n), field.mat_mul(self.echelon.T, sel))
        return P

    def same_space(self, other: "SubalgebraBasis") -> bool:
        return (
            self.dim == other.dim
            and self.pivots == other.pivots
            and bool(np.all(self.echelon == other.echelon))
        )
