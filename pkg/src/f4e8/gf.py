"""Exact arithmetic in GF(3) and GF(9), plus the dense linear-algebra kernels.

GF(9) is realized as GF(3)[i] with i^2 = -1 (valid: -1 is a non-square mod 3).
The element a + b*i is encoded as the integer a + 3*b, so GF(3) sits inside
GF(9) as the codes {0, 1, 2}.  Matrices are plain numpy integer arrays of
such codes; all operations are pure and leave their arguments unchanged.
"""

from __future__ import annotations

from collections import Counter

import numpy as np


class NotNilpotentError(ValueError):
    pass


class OrderExceedsCapError(ValueError):
    pass


class NotInvertibleError(ValueError):
    pass


def _build_tables():
    add = np.zeros((9, 9), dtype=np.int8)
    mul = np.zeros((9, 9), dtype=np.int8)
    for x in range(9):
        a1, b1 = x % 3, x // 3
        for y in range(9):
            a2, b2 = y % 3, y // 3
            add[x, y] = (a1 + a2) % 3 + 3 * ((b1 + b2) % 3)
            # (a1 + b1 i)(a2 + b2 i) with i^2 = -1
            mul[x, y] = (a1 * a2 - b1 * b2) % 3 + 3 * ((a1 * b2 + a2 * b1) % 3)
    neg = np.array([(-x % 3) + 3 * ((-(x // 3)) % 3) for x in range(9)], dtype=np.int8)
    inv = np.zeros(9, dtype=np.int8)
    for x in range(1, 9):
        for y in range(1, 9):
            if mul[x, y] == 1:
                inv[x] = y
                break
    frob = np.zeros(9, dtype=np.int8)
    for x in range(9):
        frob[x] = mul[mul[x, x], x]
    return add, mul, neg, inv, frob


ADD, MUL, NEG, INV, FROB = _build_tables()


def _planes(arr):
    a = np.asarray(arr)
    return (a % 3).astype(np.int64), (a // 3).astype(np.int64)


def _combine(a, b):
    return (a % 3 + 3 * (b % 3)).astype(np.int8)


class GF:
    """The field GF(3) or GF(9).  Instances are stateless and shareable."""

    def __init__(self, order: int):
        if order not in (3, 9):
            raise ValueError("only GF(3) and GF(9) are supported")
        self.order = order

    def __repr__(self):
        return f"GF({self.order})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.order == self.order

    def __hash__(self):
        return hash(("GF", self.order))

    # -- scalar / elementwise ops (work on ints and arrays alike) --

    def elements(self):
        return list(range(self.order))

    def add(self, x, y):
        return ADD[x, y]

    def neg(self, x):
        return NEG[x]

    def sub(self, x, y):
        return ADD[x, NEG[y]]

    def mul(self, x, y):
        return MUL[x, y]

    def inv(self, x):
        if np.any(np.asarray(x) == 0):
            raise ZeroDivisionError("0 has no inverse")
        return INV[x]

    def frobenius(self, x):
        """x -> x^3, the field automorphism fixing exactly GF(3)."""
        return FROB[x]

    def pow(self, x, k):
        r = 1
        b = int(x)
        while k:
            if k & 1:
                r = int(MUL[r, b])
            b = int(MUL[b, b])
            k >>= 1
        return r

    def from_int(self, n: int) -> int:
        """Reduce an ordinary integer into the prime field."""
        return n % 3

    # -- matrices --

    def zeros(self, rows, cols):
        return np.zeros((rows, cols), dtype=np.int8)

    def identity(self, n):
        return np.eye(n, dtype=np.int8)

    def mat_mul(self, A, B):
        A = np.asarray(A)
        B = np.asarray(B)
        if self.order == 3:
            return ((A.astype(np.int64) @ B.astype(np.int64)) % 3).astype(np.int8)
        aa, ab = _planes(A)
        ba, bb = _planes(B)
        real = (aa @ ba - ab @ bb) % 3
        imag = (aa @ bb + ab @ ba) % 3
        return _combine(real, imag)

    def mat_vec(self, A, v):
        return self.mat_mul(A, np.asarray(v).reshape(-1, 1)).reshape(-1)

    def mat_pow(self, A, k):
        n = A.shape[0]
        result = self.identity(n)
        base = A
        while k:
            if k & 1:
                result = self.mat_mul(result, base)
            base = self.mat_mul(base, base)
            k >>= 1
        return result

    def rref(self, A):
        """Reduced row-echelon form.  Returns (R, pivot_columns)."""
        A = np.asarray(A)
        ra, rb = _planes(A)
        m, n = A.shape
        pivots = []
        r = 0
        for c in range(n):
            if r == m:
                break
            col = ra[r:, c] + 3 * rb[r:, c]
            nz = np.nonzero(col)[0]
            if len(nz) == 0:
                continue
            i = r + nz[0]
            if i != r:
                ra[[r, i]] = ra[[i, r]]
                rb[[r, i]] = rb[[i, r]]
            pv = int(ra[r, c] + 3 * rb[r, c])
            if pv != 1:
                s = int(INV[pv])
                sa, sb = s % 3, s // 3
                na = (sa * ra[r] - sb * rb[r]) % 3
                nb = (sa * rb[r] + sb * ra[r]) % 3
                ra[r], rb[r] = na, nb
            ca = ra[:, c].copy()
            cb = rb[:, c].copy()
            ca[r] = 0
            cb[r] = 0
            pa, pb = ra[r], rb[r]
            ra = (ra - np.outer(ca, pa) + np.outer(cb, pb)) % 3
            rb = (rb - np.outer(ca, pb) - np.outer(cb, pa)) % 3
            pivots.append(c)
            r += 1
        return _combine(ra, rb), tuple(pivots)

    def rank(self, A):
        _, piv = self.rref(A)
        return len(piv)

    def nullspace(self, A):
        """Basis of the right nullspace {v : A v = 0}, as rows of a matrix."""
        A = np.asarray(A)
        n = A.shape[1]
        R, piv = self.rref(A)
        free = [c for c in range(n) if c not in set(piv)]
        basis = np.zeros((len(free), n), dtype=np.int8)
        for k, fc in enumerate(free):
            basis[k, fc] = 1
            for i, pc in enumerate(piv):
                basis[k, pc] = NEG[R[i, fc]]
        return basis

    def nullspace_stack(self, mats, n):
        """Common right nullspace of several matrices with n columns.

        Intersects incrementally so each elimination stays small.
        """
        ns = self.identity(n)
        for M in mats:
            if ns.shape[0] == 0:
                break
            C = self.mat_mul(M, ns.T)
            K = self.nullspace(C)
            ns = self.mat_mul(K, ns)
        return ns

    def solve(self, A, b):
        """A particular solution x of A x = b, or None if inconsistent.
        Free variables are set to 0."""
        A = np.asarray(A)
        b = np.asarray(b).reshape(-1, 1)
        m, n = A.shape
        R, piv = self.rref(np.hstack([A, b]))
        if n in piv:
            return None
        x = np.zeros(n, dtype=np.int8)
        for i, p in enumerate(piv):
            x[p] = R[i, n]
        return x

    def mat_inv(self, A):
        A = np.asarray(A)
        n = A.shape[0]
        aug = np.hstack([A, self.identity(n)])
        R, piv = self.rref(aug)
        if len(piv) < n or piv[:n] != tuple(range(n)):
            raise NotInvertibleError("matrix is singular")
        return R[:, n:]

    def mat_equal(self, A, B):
        return A.shape == B.shape and bool(np.all(A == B))


def mat_rank(field: GF, m) -> int:
    return field.rank(m)


def nullspace(field: GF, m):
    return field.nullspace(m)


def jordan_type_nilpotent(field: GF, n) -> tuple:
    """Jordan block sizes of a nilpotent matrix, largest first.

    Uses #{blocks >= k} = rank(N^(k-1)) - rank(N^k).
    """
    n = np.asarray(n)
    dim = n.shape[0]
    ranks = [dim]
    P = n
    while True:
        r = field.rank(P)
        ranks.append(r)
        if r == 0:
            break
        if len(ranks) > dim + 1:
            raise NotNilpotentError("matrix is not nilpotent")
        P = field.mat_mul(P, n)
    blocks = Counter()
    for k in range(1, len(ranks)):
        count_ge_k = ranks[k - 1] - ranks[k]
        # count_ge_k - count_ge_{k+1} blocks of size exactly k
        nxt = ranks[k] - ranks[k + 1] if k + 1 < len(ranks) else 0
        if count_ge_k - nxt > 0:
            blocks[k] = count_ge_k - nxt
    out = []
    for size in sorted(blocks, reverse=True):
        out.extend([size] * blocks[size])
    if sum(out) != dim:
        raise NotNilpotentError("block sizes do not sum to the dimension")
    return tuple(out)


def multiplicative_order_scalar(x: int) -> int:
    """Order of a nonzero field element code in the multiplicative group."""
    if x == 0:
        raise ZeroDivisionError("0 has no multiplicative order")
    k = 1
    cur = int(x)
    while cur != 1:
        cur = int(MUL[cur, x])
        k += 1
    return k


def multiplicative_order(field: GF, m, cap: int) -> int:
    m = np.asarray(m)
    n = m.shape[0]
    if field.rank(m) != n:
        raise NotInvertibleError("matrix is singular")
    I = field.identity(n)
    P = m
    for k in range(1, cap + 1):
        if field.mat_equal(P, I):
            return k
        P = field.mat_mul(P, m)
    raise OrderExceedsCapError(f"order exceeds cap {cap}")


def unipotent_order(field: GF, m, max_power: int = 5) -> int:
    """Order of a unipotent matrix over GF(3)/GF(9): the least 3^k power that
    is the identity.  Raises NotNilpotentError if m - I is not nilpotent."""
    m = np.asarray(m)
    I = field.identity(m.shape[0])
    P = m
    order = 1
    for _ in range(max_power + 1):
        if field.mat_equal(P, I):
            return order
        P = field.mat_pow(P, 3)
        order *= 3
    raise NotNilpotentError("matrix is not unipotent")


def to_json_entries(field: GF, A):
    """JSON form: GF(3) entries as 0/1/2, GF(9) entries as [a, b]."""
    A = np.asarray(A)
    if field.order == 3:
        return A.astype(int).tolist()
    return [[[int(x % 3), int(x // 3)] for x in row] for row in A]


def from_json_entries(field: GF, data):
    if field.order == 3:
        return np.array(data, dtype=np.int8)
    return np.array([[a + 3 * b for (a, b) in row] for row in data], dtype=np.int8)


GF3 = GF(3)
GF9 = GF(9)
