"""Root systems of types E8 and F4 with a signed structure-constant table.

Simple roots are numbered in Bourbaki order and a root is written as its
integer coefficient vector over the simple roots (digit-string labels like
"00010000", negatives prefixed with "-").  Signs of the constants N_{a,b}
are fixed by making every extraspecial pair positive, with positive roots
totally ordered by height then lexicographically on coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


class NotARootError(ValueError):
    pass


# candidate tie-break keys (within fixed height) for the positive-root total
# order that pins down the structure-constant signs
_ORDER_KEYS = {
    "lex": lambda r: r,
    "revlex": lambda r: tuple(reversed(r)),
    "neglex": lambda r: tuple(-c for c in r),
    "negrevlex": lambda r: tuple(-c for c in reversed(r)),
}


# Cartan matrices, A[i][j] = <alpha_j, alpha_i^vee> = 2(alpha_i,alpha_j)/(alpha_i,alpha_i)
_CARTAN = {
    "E8": None,  # built below
    "F4": (
        (2, -1, 0, 0),
        (-1, 2, -1, 0),
        (0, -2, 2, -1),
        (0, 0, -1, 2),
    ),
}

# squared lengths of the simple roots (scaled to stay integral)
_NORMS = {
    "E8": (2,) * 8,
    "F4": (4, 4, 2, 2),
}


def _e8_cartan():
    edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]
    A = [[0] * 8 for _ in range(8)]
    for i in range(8):
        A[i][i] = 2
    for i, j in edges:
        A[i - 1][j - 1] = -1
        A[j - 1][i - 1] = -1
    return tuple(tuple(row) for row in A)


_CARTAN["E8"] = _e8_cartan()


def root_label(coeffs) -> str:
    if all(c <= 0 for c in coeffs) and any(c < 0 for c in coeffs):
        return "-" + "".join(str(-c) for c in coeffs)
    return "".join(str(c) for c in coeffs)


def parse_label(label: str, rank: int):
    neg = label.startswith("-")
    digits = label[1:] if neg else label
    if len(digits) != rank or not digits.isdigit():
        raise NotARootError(f"malformed root label {label!r}")
    coeffs = tuple((-int(d) if neg else int(d)) for d in digits)
    return coeffs


class RootSystem:
    """Immutable root system with structure constants; build once, share."""

    def __init__(
        self, type_label: str, order_variant: str = "lex", sign_character: dict = None
    ):
        if type_label not in ("E8", "F4"):
            raise ValueError("type_label must be 'E8' or 'F4'")
        self.type_label = type_label
        self.order_variant = order_variant
        self.cartan = _CARTAN[type_label]
        self.rank = len(self.cartan)
        self._norms = _NORMS[type_label]
        # Gram matrix of the simple roots: G[i][j] = (alpha_i, alpha_j)
        self._gram = [
            [self.cartan[i][j] * self._norms[i] // 2 for j in range(self.rank)]
            for i in range(self.rank)
        ]
        self.positive_roots = self._enumerate()
        self.roots = self.positive_roots + [self._neg(r) for r in self.positive_roots]
        self._root_set = frozenset(self.roots)
        self._index = {r: i for i, r in enumerate(self.roots)}
        # total order on positive roots fixing the extraspecial sign choices;
        # basis/serialization order stays height-then-lex regardless
        key = _ORDER_KEYS[order_variant]
        ordered = sorted(self.positive_roots, key=lambda r: (sum(r), key(r)))
        self._pos_index = {r: i for i, r in enumerate(ordered)}
        self._extraspecial = self._find_extraspecial()
        self._nmemo = {}
        # optional rescaling e_a -> d(a) e_a of the root vectors, given as a
        # map positive root -> +-1 and extended evenly to negatives; changes
        # N_{a,b} by the factor d(a) d(b) d(a+b) and preserves all Chevalley
        # identities.  Used to pin the basis that external tables are written
        # in when it differs from the extraspecial convention.
        if sign_character is None:
            self._delta = None
            self.basis_tag = f"raw:{order_variant}"
        else:
            self._delta = {}
            for r in self.positive_roots:
                d = sign_character.get(r, 1)
                if d not in (1, -1):
                    raise ValueError("sign character values must be +-1")
                self._delta[r] = d
                self._delta[self._neg(r)] = d
            flipped = sorted(
                root_label(r) for r in self.positive_roots if self._delta[r] < 0
            )
            self.basis_tag = f"rescaled:{order_variant}:" + ",".join(flipped)
        max_norm = max(self.norm(r) for r in self.positive_roots)
        self._long = frozenset(r for r in self.roots if self.norm(r) == max_norm)

    # -- construction --

    @staticmethod
    def _neg(r):
        return tuple(-c for c in r)

    @staticmethod
    def _add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    @staticmethod
    def _sub(a, b):
        return tuple(x - y for x, y in zip(a, b))

    def _enumerate(self):
        rank = self.rank
        simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
        found = set(simple)
        frontier = list(simple)
        while frontier:
            new = []
            for beta in frontier:
                for i, alpha in enumerate(simple):
                    # p = how far the string continues below beta
                    p = 0
                    cur = self._sub(beta, alpha)
                    while cur in found:
                        p += 1
                        cur = self._sub(cur, alpha)
                    pairing = sum(m * self.cartan[i][j] for j, m in enumerate(beta))
                    q = p - pairing
                    if q > 0:
                        cand = self._add(beta, alpha)
                        if cand not in found:
                            found.add(cand)
                            new.append(cand)
            frontier = new
        return sorted(found, key=lambda r: (sum(r), r))

    def _find_extraspecial(self):
        """For each positive root of height >= 2, the special pair (xi, eta)
        with xi + eta = gamma and xi minimal in the root order."""
        out = {}
        pos = set(self.positive_roots)
        for xi in self.positive_roots:
            for gamma in self.positive_roots:
                eta = self._sub(gamma, xi)
                if gamma not in out and eta in pos and eta != xi:
                    if self._pos_index[xi] < self._pos_index[eta]:
                        out[gamma] = (xi, eta)
        return out

    # -- queries --

    def is_root(self, r) -> bool:
        return tuple(r) in self._root_set

    def check_root(self, r):
        r = tuple(r)
        if r not in self._root_set:
            raise NotARootError(f"{root_label(r)} is not a root of {self.type_label}")
        return r

    def is_positive(self, r) -> bool:
        return sum(r) > 0

    def height(self, r) -> int:
        return sum(r)

    def norm(self, r) -> int:
        return sum(
            ci * cj * self._gram[i][j]
            for i, ci in enumerate(r)
            for j, cj in enumerate(r)
            if ci and cj
        )

    def is_long(self, r) -> bool:
        return tuple(r) in self._long

    def length_class(self, r) -> str:
        return "long" if self.is_long(r) else "short"

    def inner(self, a, b) -> int:
        return sum(
            ci * cj * self._gram[i][j]
            for i, ci in enumerate(a)
            for j, cj in enumerate(b)
            if ci and cj
        )

    def pairing(self, beta, alpha) -> int:
        """<beta, alpha^vee> = 2(beta,alpha)/(alpha,alpha)."""
        num = 2 * self.inner(beta, alpha)
        den = self.norm(alpha)
        assert num % den == 0
        return num // den

    def coroot_coeffs(self, beta):
        """beta^vee expanded over the simple coroots; integer coefficients."""
        nb = self.norm(beta)
        out = []
        for i, m in enumerate(beta):
            num = m * self._norms[i]
            assert num % nb == 0
            out.append(num // nb)
        return tuple(out)

    def root_string(self, alpha, beta):
        """(p, q): beta - p*alpha ... beta + q*alpha is the alpha-string
        through beta.  Requires alpha != +-beta."""
        alpha = self.check_root(alpha)
        beta = self.check_root(beta)
        if alpha == beta or alpha == self._neg(beta):
            raise NotARootError("root string undefined for alpha = +-beta")
        p = 0
        cur = self._sub(beta, alpha)
        while cur in self._root_set:
            p += 1
            cur = self._sub(cur, alpha)
        q = 0
        cur = self._add(beta, alpha)
        while cur in self._root_set:
            q += 1
            cur = self._add(cur, alpha)
        return p, q

    # -- structure constants --

    def struct_const(self, alpha, beta) -> int:
        """N_{alpha,beta} with [e_a, e_b] = N e_{a+b}; 0 if a+b is not a root."""
        alpha = self.check_root(alpha)
        beta = self.check_root(beta)
        s = self._add(alpha, beta)
        if s not in self._root_set:
            return 0
        n = self._nconst(alpha, beta)
        if self._delta is not None:
            n *= self._delta[alpha] * self._delta[beta] * self._delta[s]
        return n

    def _string_p(self, alpha, beta) -> int:
        p = 0
        cur = self._sub(beta, alpha)
        while cur in self._root_set:
            p += 1
            cur = self._sub(cur, alpha)
        return p

    def _nconst(self, a, b) -> int:
        key = (a, b)
        if key in self._nmemo:
            return self._nmemo[key]
        val = self._nconst_compute(a, b)
        self._nmemo[key] = val
        return val

    def _nconst_compute(self, a, b) -> int:
        neg = self._neg
        pos_a, pos_b = self.is_positive(a), self.is_positive(b)
        if not pos_a and not pos_b:
            return -self._nconst(neg(a), neg(b))
        if pos_a and not pos_b:
            c = self._add(a, b)
            if not self.is_positive(c):
                # reduce to the mixed pair (-b, -a) whose sum is positive
                return self._nconst(neg(b), neg(a))
            # a + b + (-c) = 0 with a, -b, c positive:
            # N_{a,b}/ (c,c) = N_{b,-c}/(a,a)  (cyclic identity)
            n = -self._nconst(neg(b), c)  # N_{b,-c} = -N_{-b,c}
            val = Fraction(self.norm(c) * n, self.norm(a))
            assert val.denominator == 1
            return int(val)
        if not pos_a and pos_b:
            return -self._nconst(b, a)
        # both positive
        ia, ib = self._pos_index[a], self._pos_index[b]
        if ia > ib:
            return -self._nconst(b, a)
        gamma = self._add(a, b)
        xi, eta = self._extraspecial[gamma]
        if (a, b) == (xi, eta):
            return self._string_p(a, b) + 1
        # four-root identity on (xi, -a, eta, -b)
        total = Fraction(0)
        d1 = self._sub(xi, a)
        if d1 in self._root_set:
            total += Fraction(
                self._nconst(xi, neg(a)) * self._nconst(eta, neg(b)), self.norm(d1)
            )
        d2 = self._sub(eta, a)
        if d2 in self._root_set:
            total += Fraction(
                self._nconst(neg(a), eta) * self._nconst(xi, neg(b)), self.norm(d2)
            )
        val = -Fraction(self.norm(gamma)) / self._nconst(xi, eta) * total
        assert val.denominator == 1
        return int(val)

    # -- serialization --

    def to_json(self):
        nstruct = {}
        for a in self.roots:
            for b in self.roots:
                s = self._add(a, b)
                if s in self._root_set:
                    nstruct[f"{root_label(a)}|{root_label(b)}"] = self.struct_const(a, b)
        return {
            "type": self.type_label,
            "basis": self.basis_tag,
            "cartan": [list(row) for row in self.cartan],
            "roots": [root_label(r) for r in self.roots],
            "nstruct": nstruct,
        }


@lru_cache(maxsize=None)
def build_rootsystem(type_label: str) -> RootSystem:
    return RootSystem(type_label)
