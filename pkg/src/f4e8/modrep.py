"""Invariant subspaces of the 248-dimensional algebra under the embedded F4:
spinning, MeatAxe-style irreducibility certificates, the 52 + 196
decomposition, restriction to the B4 subsystem subgroup, and the involution
eigenspace split.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np
import sympy

from . import gf
from .chevgroup import EmbeddedF4, NotInvolutionError
from .rootsys import parse_label, root_label


class ZeroVectorError(ValueError):
    pass


class DecompositionFailureError(RuntimeError):
    pass


@dataclass
class MatModule:
    """A list of square matrices acting on column vectors of a fixed size."""

    field: gf.GF
    generators: list
    dimension: int
    invertible: bool = True

    def __post_init__(self):
        for g in self.generators:
            if g.shape != (self.dimension, self.dimension):
                raise ValueError("generator has the wrong shape")

    def transpose(self) -> "MatModule":
        return MatModule(
            self.field,
            [np.ascontiguousarray(g.T) for g in self.generators],
            self.dimension,
            self.invertible,
        )


class Subspace:
    """An echelonized subspace of the module's underlying vector space."""

    def __init__(self, field: gf.GF, vectors, n: int):
        self.field = field
        self.n = n
        vectors = np.asarray(vectors, dtype=np.int8)
        if vectors.ndim == 1:
            vectors = vectors.reshape(1, -1)
        if vectors.size == 0:
            self.echelon = np.zeros((0, n), dtype=np.int8)
            self.pivots = ()
        else:
            R, piv = field.rref(vectors)
            self.echelon = R[: len(piv)]
            self.pivots = piv

    @property
    def dim(self) -> int:
        return self.echelon.shape[0]

    def residual(self, v):
        v = np.asarray(v)
        c = v[list(self.pivots)]
        proj = self.field.mat_mul(c.reshape(1, -1), self.echelon).reshape(-1)
        return self.field.sub(v, proj)

    def contains(self, v) -> bool:
        return bool(np.all(self.residual(v) == 0))

    def coords(self, v):
        return np.asarray(v)[list(self.pivots)]

    def basis_hash(self) -> str:
        import hashlib

        return hashlib.sha256(self.echelon.tobytes()).hexdigest()[:16]


def spin(m: MatModule, v) -> Subspace:
    """Smallest generator-invariant subspace containing v (worklist version:
    every independent vector is hit by each generator exactly once)."""
    v = np.asarray(v, dtype=np.int8)
    if not np.any(v):
        raise ZeroVectorError("cannot spin the zero vector")
    reduced = []
    queue = [v.copy()]
    _reduce_insert(m.field, reduced, v.copy())
    while queue and len(reduced) < m.dimension:
        u = queue.pop()
        for g in m.generators:
            w = m.field.mat_vec(g, u)
            if _reduce_insert(m.field, reduced, w.copy()):
                queue.append(w)
    return Subspace(m.field, np.vstack([row for _, row in reduced]), m.dimension)


def _residual_rows(field: gf.GF, s: Subspace, rows):
    """Residuals of several row vectors against the echelon basis at once."""
    c = rows[:, list(s.pivots)]
    proj = field.mat_mul(c, s.echelon)
    return field.sub(rows, proj), c


def is_invariant(m: MatModule, s: Subspace) -> bool:
    for g in m.generators:
        img = m.field.mat_mul(g, s.echelon.T).T
        res, _ = _residual_rows(m.field, s, img)
        if np.any(res):
            return False
    return True


def restrict(m: MatModule, s: Subspace) -> MatModule:
    """The action of the generators on s, in echelon coordinates."""
    gens = []
    for g in m.generators:
        img = m.field.mat_mul(g, s.echelon.T).T
        res, coords = _residual_rows(m.field, s, img)
        if np.any(res):
            raise DecompositionFailureError("subspace is not invariant")
        # row r of s maps to coordinate row coords[r]; column action: transpose
        gens.append(np.ascontiguousarray(coords.T).astype(np.int8))
    return MatModule(m.field, gens, s.dim, m.invertible)


def quotient(m: MatModule, s: Subspace) -> MatModule:
    """The action on the quotient space, in free-column coordinates."""
    free = [c for c in range(m.dimension) if c not in set(s.pivots)]
    gens = []
    for g in m.generators:
        img = np.ascontiguousarray(g[:, free].T)  # rows: images of free units
        res, _ = _residual_rows(m.field, s, img)
        gens.append(np.ascontiguousarray(res[:, free].T).astype(np.int8))
    return MatModule(m.field, gens, len(free), m.invertible)


# -- enveloping-algebra elements and minimal polynomials --


def random_envelope_element(m: MatModule, rng: random.Random, terms: int = 4):
    """A random linear combination of short random words in the generators."""
    n = m.dimension
    out = np.zeros((n, n), dtype=np.int8)
    for _ in range(terms):
        w = m.field.identity(n)
        for _ in range(rng.randrange(1, 4)):
            w = m.field.mat_mul(w, rng.choice(m.generators))
        c = rng.randrange(1, m.field.order)
        out = m.field.add(out, gf.MUL[c, w])
    return out


_X = sympy.symbols("x")


def _vector_minpoly(fieldobj: gf.GF, theta, v):
    """Monic generator of {p : p(theta) v = 0}, as a sympy Poly over GF(3)."""
    if fieldobj.order != 3:
        raise ValueError("polynomial work is over GF(3) only")
    rows = [np.asarray(v, dtype=np.int8)]
    reduced = []  # (pivot, normalized residual) pairs, built incrementally
    _reduce_insert(fieldobj, reduced, rows[0].copy())
    while True:
        w = fieldobj.mat_vec(theta, rows[-1])
        if not _reduce_insert(fieldobj, reduced, w.copy()):
            K = np.vstack(rows)
            sol = fieldobj.solve(K.T, w)
            coeffs = [1] + [int((-sol[i]) % 3) for i in reversed(range(len(rows)))]
            return sympy.Poly(coeffs, _X, domain=sympy.GF(3))
        rows.append(w)


def _reduce_insert(fieldobj: gf.GF, reduced, w) -> bool:
    """Reduce w against the stored rows; insert if independent.  Returns
    whether w was independent."""
    for p, row in reduced:
        if w[p]:
            w = fieldobj.sub(w, gf.MUL[int(w[p]), row])
    nz = np.nonzero(w)[0]
    if len(nz) == 0:
        return False
    p = int(nz[0])
    row = gf.MUL[int(fieldobj.inv(int(w[p]))), w]
    reduced.append((p, row))
    return True


def minimal_polynomial(fieldobj: gf.GF, theta, rng: random.Random, max_tries: int = 30):
    """Minimal polynomial of a matrix over GF(3), via lcm of vector annihilators."""
    n = theta.shape[0]
    p = sympy.Poly(1, _X, domain=sympy.GF(3))
    for _ in range(max_tries):
        v = np.array([rng.randrange(3) for _ in range(n)], dtype=np.int8)
        if not np.any(v):
            continue
        p = sympy.lcm(p, _vector_minpoly(fieldobj, theta, v))
        if _poly_kills(fieldobj, p, theta):
            return p
    raise DecompositionFailureError("minimal polynomial search did not stabilize")


def _poly_kills(fieldobj: gf.GF, p, theta) -> bool:
    return not np.any(_poly_eval(fieldobj, p, theta))


def _poly_eval(fieldobj: gf.GF, p, theta):
    n = theta.shape[0]
    out = np.zeros((n, n), dtype=np.int8)
    for c in p.all_coeffs():
        out = fieldobj.mat_mul(out, theta)
        out = fieldobj.add(out, gf.MUL[int(c) % 3, fieldobj.identity(n)])
    return out


# -- irreducibility --


def norton_test(m: MatModule, seed: int = 1, max_tries: int = 12) -> dict:
    """MeatAxe irreducibility test with Norton's criterion.

    Returns {"irreducible": True/False/None, ...}; None means the budget ran
    out without a usable witness (never claims reducible without exhibiting
    an invariant subspace, which is returned as "submodule").
    """
    rng = random.Random(seed)
    fieldobj = m.field
    if fieldobj.order == 3:
        factor_iter = _gf3_factors
    else:
        factor_iter = _linear_factors
    for attempt in range(max_tries):
        theta = random_envelope_element(m, rng)
        for q_mat, deg, nullity in factor_iter(fieldobj, theta, rng):
            kernel = fieldobj.nullspace(q_mat)
            for v in kernel:
                sub = spin(m, v)
                if sub.dim < m.dimension:
                    return {
                        "irreducible": False,
                        "submodule": sub,
                        "witness_nullity": int(nullity),
                    }
            if nullity == deg:
                # good witness: the kernel is one-dimensional over the field
                # extension, so one spin and one dual spin decide
                mt = m.transpose()
                w = fieldobj.nullspace(np.ascontiguousarray(q_mat.T))[0]
                dual = spin(mt, w)
                if dual.dim < m.dimension:
                    return {
                        "irreducible": False,
                        "submodule_dual": dual,
                        "witness_nullity": int(nullity),
                    }
                return {
                    "irreducible": True,
                    "witness_nullity": int(nullity),
                    "witness_degree": int(deg),
                    "absolutely_irreducible": nullity == 1,
                    "attempts": attempt + 1,
                }
    return {"irreducible": None, "attempts": max_tries}


def _gf3_factors(fieldobj, theta, rng):
    """(q(theta), deg q, nullity) for each irreducible factor of the minimal
    polynomial, smallest nullity first."""
    p = minimal_polynomial(fieldobj, theta, rng)
    out = []
    with warnings.catch_warnings():
        # sympy's own factor sorting compares modular integers, which it
        # deprecates itself; harmless here
        warnings.simplefilter("ignore")
        factors = sympy.factor_list(p.as_expr(), _X, domain=sympy.GF(3))[1]
    for q, _mult in factors:
        qp = sympy.Poly(q, _X, domain=sympy.GF(3))
        q_mat = _poly_eval(fieldobj, qp, theta)
        nullity = theta.shape[0] - fieldobj.rank(q_mat)
        if nullity:
            out.append((q_mat, qp.degree(), nullity))
    return sorted(out, key=lambda t: t[2])


def _linear_factors(fieldobj, theta, rng):
    """Eigenvalue sweep: (theta - lam, 1, nullity) for every eigenvalue lam.
    Used over GF(9), where we avoid polynomial factorization."""
    n = theta.shape[0]
    out = []
    for lam in range(fieldobj.order):
        q_mat = fieldobj.sub(theta, gf.MUL[lam, fieldobj.identity(n)])
        nullity = n - fieldobj.rank(q_mat)
        if nullity:
            out.append((q_mat, 1, nullity))
    return sorted(out, key=lambda t: t[2])


def composition_factor_dims(m: MatModule, seed: int = 1, max_depth: int = 16) -> list:
    """Dimensions of the composition factors, by recursive chopping."""
    result = []
    stack = [(m, 0)]
    while stack:
        cur, depth = stack.pop()
        if depth > max_depth:
            raise DecompositionFailureError("chop recursion exceeded the depth bound")
        if cur.dimension == 0:
            continue
        verdict = norton_test(cur, seed=seed + depth)
        if verdict["irreducible"] is True:
            result.append(cur.dimension)
        elif verdict["irreducible"] is False:
            if "submodule" in verdict:
                sub = verdict["submodule"]
                stack.append((restrict(cur, sub), depth + 1))
                stack.append((quotient(cur, sub), depth + 1))
            else:
                dual = verdict["submodule_dual"]
                # the annihilator of a dual submodule is a submodule
                ann_mat = dual.echelon
                sub = Subspace(cur.field, cur.field.nullspace(ann_mat), cur.dimension)
                if sub.dim in (0, cur.dimension):
                    raise DecompositionFailureError("dual witness gave no split")
                stack.append((restrict(cur, sub), depth + 1))
                stack.append((quotient(cur, sub), depth + 1))
        else:
            raise DecompositionFailureError(
                f"irreducibility undecided for a {cur.dimension}-dim factor"
            )
    return sorted(result)


# -- the invariant bilinear form on the 248-dim algebra --


def invariant_form(alg) -> np.ndarray:
    """The nondegenerate invariant symmetric form: (e_a, e_{-a}) = 1 and
    (h_i, h_j) = Cartan entry, all other basis pairs orthogonal.  Callers
    should verify invariance against their generators via form_invariant."""
    rs = alg.rs
    n = alg.dim
    F = np.zeros((n, n), dtype=np.int8)
    for r in rs.roots:
        F[alg.root_index(r), alg.root_index(tuple(-c for c in r))] = 1
    for i in range(rs.rank):
        for j in range(rs.rank):
            F[alg.nroots + i, alg.nroots + j] = rs.cartan[i][j] % 3
    return F


def form_invariant(fieldobj: gf.GF, F, gens) -> bool:
    for g in gens:
        lhs = fieldobj.mat_mul(fieldobj.mat_mul(np.ascontiguousarray(g.T), F), g)
        if not fieldobj.mat_equal(lhs, F):
            return False
    return True


def orthogonal_complement(fieldobj: gf.GF, F, s: Subspace) -> Subspace:
    """{v : (u, v) = 0 for all u in s} for the form F."""
    M = fieldobj.mat_mul(s.echelon, F)
    return Subspace(fieldobj, fieldobj.nullspace(M), s.n)


# -- the headline decompositions --


def f4_module(group: EmbeddedF4, scalars=(1,)) -> MatModule:
    """The 248-dim module over the F4 root-subgroup generators x_beta(t) for
    all simple and lowest roots beta (enough to generate the group)."""
    f4 = group.f4
    lows = [tuple(-c for c in r) for r in f4.positive_roots if sum(r) == 1]
    gens = []
    for beta in [r for r in f4.positive_roots if sum(r) == 1] + lows:
        for t in scalars:
            gens.append(group.x(beta, t).matrix)
    return MatModule(group.field, gens, group.alg.dim, invertible=True)


def decompose_248(group: EmbeddedF4, seed: int = 1, group9: EmbeddedF4 = None) -> dict:
    """L(E8) restricted to the embedded F4: the invariant 52-space, its
    invariant complement of dimension 196, and irreducibility certificates
    for both factors.

    group9 (the same subgroup over GF(9)) enables a second certificate pass
    when the GF(3) witness cannot settle absolute irreducibility."""
    m = f4_module(group)
    fieldobj = group.field
    rng = random.Random(seed)
    # the 52-space, re-found by spinning a vector of the known span
    v = group.span.echelon[rng.randrange(group.span.dim)]
    V = spin(m, v)
    if V.dim != 52:
        raise DecompositionFailureError(f"span vector spun to dimension {V.dim}")
    F = invariant_form(group.alg)
    if not form_invariant(fieldobj, F, m.generators):
        raise DecompositionFailureError("bilinear form is not group-invariant")
    W = orthogonal_complement(fieldobj, F, V)
    if W.dim != 196 or not is_invariant(m, W):
        raise DecompositionFailureError("form complement is not a 196-dim submodule")
    stacked = Subspace(fieldobj, np.vstack([V.echelon, W.echelon]), m.dimension)
    if stacked.dim != 248:
        raise DecompositionFailureError("52-space and complement are not direct")
    mv = restrict(m, V)
    mw = restrict(m, W)
    tv = norton_test(mv, seed=seed)
    tw = norton_test(mw, seed=seed)
    abs_flags = [tv.get("absolutely_irreducible"), tw.get("absolutely_irreducible")]
    if group9 is not None:
        # a nullity-1 witness over GF(9) certifies a one-dimensional
        # endomorphism algebra, hence absolute irreducibility
        m9 = f4_module(group9)
        for k, S in enumerate((V, W)):
            if not abs_flags[k]:
                s9 = Subspace(group9.field, S.echelon, m9.dimension)
                t9 = norton_test(restrict(m9, s9), seed=seed)
                if t9["irreducible"] and t9.get("absolutely_irreducible"):
                    abs_flags[k] = True
    return {
        "factors": [
            {
                "dim": V.dim,
                "irreducible": tv["irreducible"],
                "absolutely_irreducible": abs_flags[0],
                "basis_hash": V.basis_hash(),
            },
            {
                "dim": W.dim,
                "irreducible": tw["irreducible"],
                "absolutely_irreducible": abs_flags[1],
                "basis_hash": W.basis_hash(),
            },
        ],
        "seed": seed,
        "V": V,
        "W": W,
    }


B4_SIMPLE_ROOTS = ("-2342", "1000", "0100", "0010")


def b4_module(group: EmbeddedF4, scalars=(1,)) -> MatModule:
    """Root subgroup generators for the B4 subsystem: the negated highest
    root plus the three long-chain simple roots, and their negatives."""
    roots = [parse_label(lab, 4) for lab in B4_SIMPLE_ROOTS]
    roots += [tuple(-c for c in r) for r in roots]
    gens = []
    for beta in roots:
        for t in scalars:
            gens.append(group.x(beta, t).matrix)
    return MatModule(group.field, gens, group.alg.dim, invertible=True)


def restrict_to_b4(group: EmbeddedF4, V: Subspace, W: Subspace, seed: int = 1) -> dict:
    """Composition factor dimensions of the 52- and 196-spaces under the B4
    subsystem subgroup."""
    m = b4_module(group)
    if not (is_invariant(m, V) and is_invariant(m, W)):
        raise DecompositionFailureError("B4 generators do not preserve the factors")
    dims_v = composition_factor_dims(restrict(m, V), seed=seed)
    dims_w = composition_factor_dims(restrict(m, W), seed=seed)
    return {
        "simple_roots": list(B4_SIMPLE_ROOTS),
        "dims_52": dims_v,
        "dims_196": dims_w,
        "total": sum(dims_v) + sum(dims_w),
    }


def involution_split(group: EmbeddedF4) -> dict:
    """Among the torus involutions h_beta(-1) for beta in {1000, 0001}, find
    the one with eigenspace dimensions (120, 128) on the 248-space."""
    fieldobj = group.field
    n = group.alg.dim
    results = {}
    best = None
    for lab in ("0001", "1000"):
        g = group.h(parse_label(lab, 4), fieldobj.neg(1)).matrix
        if not fieldobj.mat_equal(fieldobj.mat_mul(g, g), fieldobj.identity(n)):
            raise NotInvolutionError(f"h_{lab}(-1) does not square to the identity")
        plus = n - fieldobj.rank(fieldobj.sub(g, fieldobj.identity(n)))
        minus = n - fieldobj.rank(fieldobj.add(g, fieldobj.identity(n)))
        results[lab] = (int(plus), int(minus))
        if best is None and (plus, minus) == (120, 128):
            best = lab
    return {"candidates": results, "selected": best, "split": results.get(best)}
