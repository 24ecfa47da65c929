"""The explicit f4 subalgebra of e8 in characteristic 3.

The defining data (which E8 root elements make up each F4 root element, and
how the F4 torus sits inside the E8 torus) ships as a checked-in JSON file;
nothing here is trusted until the verification routines below have confirmed
it mechanically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import gf
from .liealg import ChevalleyAlgebra, SubalgebraBasis
from .rootsys import RootSystem, build_rootsystem, parse_label, root_label


class NonCommutingSupportError(ValueError):
    pass


class RelationFailureError(ValueError):
    pass


@dataclass(frozen=True)
class EmbeddingTable:
    """For each positive F4 root: its (E8 root, +-1) summands; for each F4
    simple root: the (E8 simple root, exponent) factors of its torus element."""

    pos_rows: dict
    torus_rows: dict
    raw_torus_rows: dict
    version: int

    def row(self, beta):
        beta = tuple(beta)
        if all(c <= 0 for c in beta):
            pos = tuple(-c for c in beta)
            return [(tuple(-c for c in a), s) for a, s in self.pos_rows[pos]]
        return self.pos_rows[beta]


def load_embedding() -> EmbeddingTable:
    raw = json.loads(
        resources.files("f4e8.data").joinpath("embedding_f4_e8.json").read_text()
    )
    pos_rows = {}
    for lab, row in raw["pos_rows"].items():
        pos_rows[parse_label(lab, 4)] = [(parse_label(a, 8), int(c)) for a, c in row]
    torus_rows = {}
    raw_torus = {}
    for lab, row in raw["torus_rows"].items():
        raw_torus[lab] = [list(x) for x in row]
        fixed = []
        for a, k in row:
            if len(a) == 7:
                a = a + "0"  # normalize the malformed seven-digit label
            fixed.append((parse_label(a, 8), int(k)))
        torus_rows[parse_label(lab, 4)] = fixed
    return EmbeddingTable(
        pos_rows=pos_rows,
        torus_rows=torus_rows,
        raw_torus_rows=raw_torus,
        version=int(raw["version"]),
    )


def _gf2_solve(rows, rhs, nvars):
    """Solve a linear system over GF(2); free variables are set to 0.
    Raises RelationFailureError when inconsistent."""
    A = np.array(rows, dtype=np.int8) % 2
    y = np.array(rhs, dtype=np.int8) % 2
    m = A.shape[0]
    r = 0
    where = {}
    for c in range(nvars):
        piv = None
        for i in range(r, m):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        y[[r, piv]] = y[[piv, r]]
        mask = A[:, c] == 1
        mask[r] = False
        A[mask] ^= A[r]
        y[mask] ^= y[r]
        where[c] = r
        r += 1
    if any(y[i] for i in range(r, m)):
        raise RelationFailureError("no consistent sign character exists")
    sol = np.zeros(nvars, dtype=np.int8)
    for c, i in where.items():
        sol[c] = y[i]
    return sol


def basis_sign_character(table: EmbeddingTable = None) -> dict:
    """The rescaling d: E8 roots -> {+1,-1} aligning the extraspecial-pair
    basis with the basis the subalgebra table is written in.

    The table rows only span a closed subalgebra in the basis they were
    computed in, which differs from the extraspecial convention by a
    rescaling e_a -> d(a) e_a of the root vectors.  Requiring every bracket
    of two rows to be proportional to the row of the sum is linear in the
    sign bits of d over GF(2); this builds and solves that system (free bits
    fixed to +1) and returns d on the positive roots the table touches.
    """
    table = table or load_embedding()
    e8 = build_rootsystem("E8")
    f4 = build_rootsystem("F4")

    def elem(beta):
        return table.row(beta)

    table_roots = sorted({a for row in table.pos_rows.values() for a, _ in row})
    svar = {r: i for i, r in enumerate(table_roots)}

    def sv(r):
        return svar[r if sum(r) > 0 else tuple(-c for c in r)]

    pairs = [
        (b, g)
        for b in f4.roots
        for g in f4.roots
        if f4.is_root(tuple(x + y for x, y in zip(b, g)))
    ]
    pvar = {p: len(table_roots) + i for i, p in enumerate(pairs)}
    nvars = len(table_roots) + len(pairs)

    def bit(v):
        # nonzero residue mod 3 as a sign bit: 1 -> 0, 2 (= -1) -> 1
        v %= 3
        if v not in (1, 2):
            raise RelationFailureError("vanishing structure constant in a row product")
        return v - 1

    rows, rhs = [], []
    for b, g in pairs:
        s = tuple(x + y for x, y in zip(b, g))
        targ = {a: c for a, c in elem(s)}
        contrib = {}
        for a1, c1 in elem(b):
            for a2, c2 in elem(g):
                t = tuple(x + y for x, y in zip(a1, a2))
                if e8.is_root(t):
                    contrib.setdefault(t, []).append(
                        (a1, a2, c1 * c2 * e8.struct_const(a1, a2))
                    )
        if set(contrib) != set(targ):
            raise RelationFailureError(
                f"bracket of rows {root_label(b)}, {root_label(g)} has the "
                f"wrong support; no rescaling can fix this"
            )
        for t, terms in contrib.items():
            if len(terms) == 1:
                ((a1, a2, v),) = terms
                row = np.zeros(nvars, dtype=np.int8)
                for r in (a1, a2, t):
                    row[sv(r)] ^= 1
                row[pvar[(b, g)]] ^= 1
                rows.append(row)
                rhs.append(bit(v) ^ bit(targ[t]))
            elif len(terms) == 2:
                (a1, b1, v1), (a2, b2, v2) = terms
                # the two terms must agree in sign (x + x = -x mod 3; if they
                # differed the target coefficient would vanish)
                row = np.zeros(nvars, dtype=np.int8)
                for r in (a1, b1, a2, b2):
                    row[sv(r)] ^= 1
                rows.append(row)
                rhs.append(bit(v1) ^ bit(v2))
                row = np.zeros(nvars, dtype=np.int8)
                for r in (a1, b1, t):
                    row[sv(r)] ^= 1
                row[pvar[(b, g)]] ^= 1
                rows.append(row)
                rhs.append(bit(v1) ^ 1 ^ bit(targ[t]))
            else:
                raise RelationFailureError(
                    "more than two contributions to one target coefficient"
                )
    sol = _gf2_solve(rows, rhs, nvars)
    return {r: (-1 if sol[svar[r]] else 1) for r in table_roots}


_AMBIENT_CACHE = {}


def ambient_rootsystem() -> RootSystem:
    """The E8 root system in the basis the embedding table is written in."""
    if "rs" not in _AMBIENT_CACHE:
        _AMBIENT_CACHE["rs"] = RootSystem("E8", sign_character=basis_sign_character())
    return _AMBIENT_CACHE["rs"]


def ambient_algebra(field: gf.GF = None) -> ChevalleyAlgebra:
    """e8 over GF(3) (or the given field) in the table's basis."""
    field = field or gf.GF3
    key = ("alg", field.order)
    if key not in _AMBIENT_CACHE:
        _AMBIENT_CACHE[key] = ChevalleyAlgebra(ambient_rootsystem(), field)
    return _AMBIENT_CACHE[key]


def check_table_wellformed(table: EmbeddingTable, f4: RootSystem, e8: RootSystem):
    """Structural checks: one row per positive F4 root, the 2-long/4-short
    summand law, and pairwise-commuting E8 supports within every row."""
    if set(table.pos_rows) != set(f4.positive_roots):
        raise RelationFailureError("rows do not cover the positive F4 roots")
    for beta, row in table.pos_rows.items():
        expected = 2 if f4.is_long(beta) else 4
        if len(row) != expected:
            raise RelationFailureError(
                f"row {root_label(beta)}: {len(row)} summands, expected {expected}"
            )
        for a, c in row:
            if not e8.is_root(a):
                raise RelationFailureError(
                    f"row {root_label(beta)}: {root_label(a)} is not an E8 root"
                )
            if c not in (1, -1):
                raise RelationFailureError(
                    f"row {root_label(beta)}: coefficient {c} not in +-1"
                )
        for i in range(len(row)):
            for j in range(i + 1, len(row)):
                a, b = row[i][0], row[j][0]
                s = tuple(x + y for x, y in zip(a, b))
                if a == tuple(-c for c in b) or e8.is_root(s):
                    raise NonCommutingSupportError(
                        f"row {root_label(beta)}: {root_label(a)} and "
                        f"{root_label(b)} do not commute"
                    )
    # every E8 root is used at most once across all rows
    used = [a for row in table.pos_rows.values() for a, _ in row]
    if len(used) != len(set(used)):
        raise RelationFailureError("an E8 root appears in two different rows")


@dataclass
class F4Basis:
    """The 52 embedded basis elements of the f4 subalgebra, as e8 vectors."""

    algebra: ChevalleyAlgebra  # ambient e8
    f4: RootSystem
    e_plus: dict
    e_minus: dict
    h: dict  # F4 simple root -> toral element, derived via the bracket
    span: SubalgebraBasis = field(default=None)

    def element(self, beta):
        """e_beta for any F4 root beta (tuple or label)."""
        if isinstance(beta, str):
            beta = parse_label(beta, 4)
        if self.f4.is_positive(beta):
            return self.e_plus[beta]
        return self.e_minus[tuple(-c for c in beta)]

    def all_vectors(self):
        """The 52 vectors: e_beta in F4 root order, then the four h's."""
        rows = [self.element(b) for b in self.f4.roots]
        rows += [self.h[s] for s in sorted(self.h)]
        return np.vstack(rows)

    def simple_roots(self):
        return [r for r in self.f4.positive_roots if sum(r) == 1]


def build_f4_basis(alg: ChevalleyAlgebra, table: EmbeddingTable) -> F4Basis:
    f4 = build_rootsystem("F4")
    e8 = alg.rs
    check_table_wellformed(table, f4, e8)
    e_plus, e_minus = {}, {}
    for beta, row in table.pos_rows.items():
        vp = np.zeros(alg.dim, dtype=np.int8)
        vm = np.zeros(alg.dim, dtype=np.int8)
        for a, c in row:
            vp[alg.root_index(a)] = c % 3
            vm[alg.root_index(tuple(-x for x in a))] = c % 3
        e_plus[beta] = vp
        e_minus[beta] = vm
    h = {}
    for s in f4.positive_roots:
        if sum(s) == 1:
            h[s] = alg.bracket(e_plus[s], e_minus[s])
    basis = F4Basis(algebra=alg, f4=f4, e_plus=e_plus, e_minus=e_minus, h=h)
    basis.span = SubalgebraBasis(alg, basis.all_vectors())
    return basis


def _coords_or_fail(span: SubalgebraBasis, v, what: str):
    if not span.contains(v):
        raise RelationFailureError(f"{what} falls outside the embedded span")


def verify_f4_relations(basis: F4Basis, f4: RootSystem = None) -> dict:
    """Check the Chevalley relations of the embedded basis against the F4
    root-system constants, up to a sign character eps on the roots.

    Returns {"sign_character": {root label: +-1}, "constants": {...},
    "cartan_ok": bool, "coroot_ok": bool}.
    """
    alg = basis.algebra
    f4 = f4 or basis.f4
    simples = basis.simple_roots()

    # (i) torus action: [h_s, e_gamma] = <gamma, s^vee> e_gamma
    for s in simples:
        hs = basis.h[s]
        for gamma in f4.roots:
            eg = basis.element(gamma)
            want = (f4.pairing(gamma, s) % 3) * eg % 3
            got = alg.bracket(hs, eg)
            if not np.array_equal(got, want.astype(np.int8)):
                raise RelationFailureError(
                    f"[h_{root_label(s)}, e_{root_label(gamma)}] has wrong weight"
                )

    # (ii) [e_beta, e_{-beta}] = the coroot combination of the four h's
    # (rows of hmat in simple-root index order to match coroot_coeffs)
    by_index = sorted(simples, key=lambda r: r.index(1))
    hmat = np.vstack([basis.h[s] for s in by_index])
    for beta in f4.positive_roots:
        got = alg.bracket(basis.element(beta), basis.element(tuple(-c for c in beta)))
        cor = np.array(f4.coroot_coeffs(beta), dtype=np.int64) % 3
        want = (cor @ hmat.astype(np.int64)) % 3
        if not np.array_equal(got.astype(np.int64), want):
            raise RelationFailureError(
                f"[e_{root_label(beta)}, e_-{root_label(beta)}] is not the coroot"
            )

    # (iii) [e_beta, e_gamma] = N' e_{beta+gamma} with N' = +-N_{beta,gamma}
    measured = {}
    for beta in f4.roots:
        for gamma in f4.roots:
            s = tuple(x + y for x, y in zip(beta, gamma))
            if not f4.is_root(s):
                continue
            got = alg.bracket(basis.element(beta), basis.element(gamma))
            es = basis.element(s)
            n_ref = f4.struct_const(beta, gamma) % 3
            coeff = None
            for cand in (1, 2):
                if np.array_equal(got, (cand * es) % 3):
                    coeff = cand
                    break
            if coeff is None:
                raise RelationFailureError(
                    f"[e_{root_label(beta)}, e_{root_label(gamma)}] is not "
                    f"proportional to e_{root_label(s)}"
                )
            if coeff not in (n_ref, (-n_ref) % 3):
                raise RelationFailureError(
                    f"constant for ({root_label(beta)}, {root_label(gamma)}) "
                    f"has wrong magnitude"
                )
            measured[(beta, gamma)] = coeff

    eps = _solve_sign_character(f4, measured)
    return {
        "sign_character": {root_label(b): eps[b] for b in f4.positive_roots},
        "constants": {
            f"{root_label(b)}|{root_label(g)}": int(c) for (b, g), c in measured.items()
        },
        "cartan_ok": True,
        "coroot_ok": True,
    }


def _solve_sign_character(f4: RootSystem, measured: dict) -> dict:
    """Find eps: positive roots -> {+1,-1} (extended evenly to negatives)
    with measured N' = eps(b) eps(g) eps(b+g) N mod 3, via GF(2) elimination."""
    pos = f4.positive_roots
    var = {r: i for i, r in enumerate(pos)}

    def vindex(r):
        return var[r if f4.is_positive(r) else tuple(-c for c in r)]

    rows = []
    rhs = []
    for (b, g), coeff in measured.items():
        s = tuple(x + y for x, y in zip(b, g))
        n_ref = f4.struct_const(b, g) % 3
        if coeff == n_ref and coeff == (-n_ref) % 3:
            continue  # cannot happen mod 3 for nonzero n
        bit = 0 if coeff == n_ref else 1
        row = np.zeros(len(pos), dtype=np.int8)
        for r in (b, g, s):
            row[vindex(r)] ^= 1
        rows.append(row)
        rhs.append(bit)
    sol = _gf2_solve(rows, rhs, len(pos))
    return {root: (1 if sol[var[root]] == 0 else -1) for root in pos}


def verify_closure_and_maximality_witness(basis: F4Basis) -> dict:
    """Closure dimension, normalizer dimension and centralizer dimension of
    the 52-dimensional span inside e8."""
    alg = basis.algebra
    closed = alg.close_under_bracket(basis.all_vectors())
    norm = alg.normalizer(basis.span)
    cent = alg.centralizer(basis.span)
    return {
        "span_dim": basis.span.dim,
        "closure_dim": closed.dim,
        "normalizer_dim": norm.dim,
        "centralizer_dim": cent.dim,
        "pass": basis.span.dim == 52
        and closed.dim == 52
        and norm.dim == 52
        and cent.dim == 0,
    }


def weight_decomposition(basis: F4Basis, field: gf.GF = None) -> dict:
    """Joint eigenspace decomposition of the four toral elements acting on
    the 52-span: expect 48 one-dimensional weight lines plus a 4-dim zero
    weight space."""
    field = field or gf.GF9
    alg_base = basis.algebra
    alg = ChevalleyAlgebra(alg_base.rs, field)
    simples = basis.simple_roots()
    V = basis.span.echelon
    d = V.shape[0]
    # toral elements lie in the standard Cartan: their ad matrices are diagonal
    ops = []
    for s in simples:
        ad = alg.ad_matrix(basis.h[s])
        diag = np.diag(ad)
        if not np.array_equal(ad, np.diag(diag)):
            raise RelationFailureError(
                f"h_{root_label(s)} is not diagonal on the Chevalley basis"
            )
        # restricted operator on span coordinates
        img = field.mat_mul(np.diag(diag).astype(np.int8), V.T).T
        M = np.vstack([_span_coords(basis.span, field, row) for row in img])
        ops.append(M.T)  # act on column coordinate vectors
    weights = {}
    zero_dim = 0
    seen = 0
    f4 = basis.f4
    candidates = [tuple(f4.pairing(r, s) % 3 for s in simples) for r in f4.roots]
    candidates.append((0, 0, 0, 0))
    for w in dict.fromkeys(candidates):
        mats = [field.sub(M, (w[k] * field.identity(d)) % 3) for k, M in enumerate(ops)]
        ns = field.nullspace_stack(mats, d)
        dim = ns.shape[0]
        if dim:
            weights[w] = dim
            seen += dim
            if w == (0, 0, 0, 0):
                zero_dim = dim
    nonzero_lines = sum(1 for w, dd in weights.items() if w != (0, 0, 0, 0))
    return {
        "total_dim": seen,
        "zero_weight_dim": zero_dim,
        "nonzero_weight_lines": nonzero_lines,
        "all_nonzero_one_dimensional": all(
            dd == 1 for w, dd in weights.items() if w != (0, 0, 0, 0)
        ),
        "pass": seen == 52 and zero_dim == 4 and nonzero_lines == 48,
    }


def _span_coords(span: SubalgebraBasis, field: gf.GF, v):
    c = np.asarray(v)[list(span.pivots)]
    proj = field.mat_mul(c.reshape(1, -1), span.echelon).reshape(-1)
    if not np.array_equal(proj, np.asarray(v) % 9):
        raise RelationFailureError("vector left the embedded span")
    return c


def table_to_json(table: EmbeddingTable) -> dict:
    return {
        "version": table.version,
        "pos_rows": {
            root_label(b): [[root_label(a), c] for a, c in row]
            for b, row in table.pos_rows.items()
        },
        "torus_rows": table.raw_torus_rows,
    }
