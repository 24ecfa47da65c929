"""Conjugacy invariants of unipotent and nilpotent elements of the embedded
F4 and the fusion tables they assemble into.

Signatures (element orders, Jordan types on the 248- and 52-spaces,
centralizer data) are computed; the class names attached to them are bundled
reference data, keyed to signatures by explicit, reported rules: Levi-regular
representatives pin the eleven non-distinguished classes, and the four
distinguished classes are ordered by fixed-space dimension.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import gf
from .chevgroup import EmbeddedF4, GroupElement
from .rootsys import parse_label, root_label


class NotUnipotentError(ValueError):
    pass


class BudgetExhaustedError(RuntimeError):
    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class ClassSignature:
    """Conjugation-invariant data of a unipotent or nilpotent element.

    extra holds the refinement invariants: the dimensions of the brackets of
    the 52-span kernel of N = u - 1 (resp. ad x) with the N-images of the
    52-span and of its form-orthogonal 196-complement.  They are needed
    because Jordan data alone merges some pairs of classes."""

    kind: str  # "unipotent" | "nilpotent"
    order_or_depth: int
    jordan_248: tuple
    jordan_52: tuple
    extra: tuple = ()

    @property
    def primary(self):
        return (self.kind, self.order_or_depth, self.jordan_248, self.jordan_52)

    @property
    def e8_part(self):
        """The part visible to the ambient group only."""
        return (self.order_or_depth, self.jordan_248)

    @property
    def centralizer_dim(self) -> int:
        """dim ker(ad x) (nilpotent) or the fixed-space dimension (unipotent)
        on the 248-space: the number of Jordan blocks."""
        return len(self.jordan_248)

    @property
    def f4_centralizer_dim(self) -> int:
        return len(self.jordan_52)

    def to_json(self):
        return {
            "kind": self.kind,
            "order_or_depth": self.order_or_depth,
            "jordan_248": list(self.jordan_248),
            "jordan_52": list(self.jordan_52),
            "centralizer_dim": self.centralizer_dim,
            "f4_centralizer_dim": self.f4_centralizer_dim,
            "extra": list(self.extra),
        }


def load_labels() -> dict:
    return json.loads(
        resources.files("f4e8.data").joinpath("fusion_labels.json").read_text()
    )


def _restrict_to_span(group: EmbeddedF4, M):
    """A 248-matrix stabilizing the 52-span, as a 52x52 matrix on echelon
    coordinates."""
    span = group.span
    img = group.field.mat_mul(M, span.echelon.T).T
    c = img[:, list(span.pivots)]
    proj = group.field.mat_mul(c, span.echelon)
    if np.any(group.field.sub(img, proj)):
        raise ValueError("matrix does not stabilize the 52-span")
    return np.ascontiguousarray(c.T)


def unipotent_signature(group: EmbeddedF4, u: GroupElement) -> ClassSignature:
    """Order and Jordan types of u on the 248-space and the 52-span."""
    field = group.field
    order = gf.unipotent_order(field, u.matrix)
    n = u.matrix.shape[0]
    j248 = gf.jordan_type_nilpotent(field, field.sub(u.matrix, field.identity(n)))
    u52 = _restrict_to_span(group, u.matrix)
    j52 = gf.jordan_type_nilpotent(field, field.sub(u52, field.identity(52)))
    return ClassSignature("unipotent", order, j248, j52)


def nilpotent_signature(group: EmbeddedF4, x) -> ClassSignature:
    """Depth and ad-Jordan types of a nilpotent element x of the 52-span."""
    field = group.field
    ad = group.alg.ad_matrix(np.asarray(x, dtype=np.int8))
    j248 = gf.jordan_type_nilpotent(field, ad)
    ad52 = _restrict_to_span(group, ad)
    j52 = gf.jordan_type_nilpotent(field, ad52)
    depth = int(j248[0])  # least k with (ad x)^k = 0 is the largest block
    return ClassSignature("nilpotent", depth, j248, j52)


def _form_complement(group: EmbeddedF4):
    """The form-orthogonal complement of the 52-span: the 196-dimensional
    F4-stable complement, as basis rows.  Cached on the group."""
    cached = getattr(group, "_form_complement_rows", None)
    if cached is None:
        from .modrep import invariant_form

        form = invariant_form(group.alg)
        cached = group.field.nullspace(group.field.mat_mul(group.span.echelon, form))
        group._form_complement_rows = cached
    return cached


def _kernel_image_bracket_dims(group: EmbeddedF4, N) -> tuple:
    """(dim [K, N(span)], dim [K, N(W)]) where K = ker N on the 52-span and
    W is the F4-stable 196-complement: the refinement invariants used when
    Jordan data collides.  Both spaces are conjugation-equivariant, so the
    dimensions are class invariants."""
    field = group.field
    alg = group.alg
    span = group.span
    ker52 = field.nullspace(_restrict_to_span(group, N))
    K = field.mat_mul(ker52, span.echelon)

    def bracket_dim(rows_in):
        rows = [field.mat_mul(alg.ad_matrix(k), rows_in.T).T for k in K]
        return field.rank(np.vstack(rows))

    img_span = field.mat_mul(N, span.echelon.T).T
    img_comp = field.mat_mul(N, _form_complement(group).T).T
    return (bracket_dim(img_span), bracket_dim(img_comp))


def refine_signature(group: EmbeddedF4, sig: ClassSignature, element) -> ClassSignature:
    """Recompute a signature with the refinement invariants attached."""
    field = group.field
    if sig.kind == "unipotent":
        N = field.sub(element.matrix, field.identity(element.matrix.shape[0]))
    else:
        N = group.alg.ad_matrix(np.asarray(element, dtype=np.int8))
    extra = _kernel_image_bracket_dims(group, N)
    return ClassSignature(sig.kind, sig.order_or_depth, sig.jordan_248, sig.jordan_52, extra)


def nilpotent_deep_invariants(group: EmbeddedF4, x, max_terms: int = 6) -> dict:
    """Derived-series dimensions of the e8 centralizer of x, with the e8
    normalizer dimension of each term."""
    alg = group.alg
    cent = alg.centralizer(np.asarray(x, dtype=np.int8))
    series = alg.derived_series(cent)[:max_terms]
    return {
        "centralizer_dim": cent.dim,
        "derived_dims": [s.dim for s in series],
        "normalizer_dims": [alg.normalizer(s).dim for s in series],
    }


# -- representatives --


def levi_unipotent(group: EmbeddedF4, labels: list) -> GroupElement:
    """Product of x_beta(1) over the given simple-root labels: the regular
    unipotent of the corresponding Levi subgroup."""
    out = None
    for lab in labels:
        g = group.x(parse_label(lab, 4), 1)
        out = g if out is None else out.compose(g)
    return out


def levi_nilpotent(group: EmbeddedF4, labels: list):
    """Sum of the embedded root elements over the given simple-root labels."""
    v = np.zeros(group.alg.dim, dtype=np.int8)
    for lab in labels:
        v = group.field.add(v, group.basis.element(parse_label(lab, 4)))
    return v


def random_unipotent(group: EmbeddedF4, rng: random.Random, length: int = 10) -> GroupElement:
    """Random product of positive-root elements: automatically unipotent."""
    out = None
    for _ in range(length):
        beta = rng.choice(group.f4.positive_roots)
        t = rng.randrange(1, group.field.order)
        g = group.x(beta, t)
        out = g if out is None else out.compose(g)
    return out


def random_nilpotent(group: EmbeddedF4, rng: random.Random):
    """Random combination of positive embedded root elements: ad-nilpotent.
    The support size is itself randomized; sparse combinations reach the
    smaller classes that dense generic combinations almost never hit."""
    v = np.zeros(group.alg.dim, dtype=np.int8)
    while not np.any(v):
        k = rng.randrange(2, len(group.f4.positive_roots) + 1)
        for beta in rng.sample(group.f4.positive_roots, k):
            c = rng.randrange(1, group.field.order)
            v = group.field.add(v, gf.MUL[c, group.basis.element(beta)])
    return v


# -- the surveys --


def survey_classes(group: EmbeddedF4, kind: str, seed: int = 0, budget: int = 300) -> dict:
    """Seeded search for all 15 class signatures of the given kind, with
    bundled labels attached by the keying rules.  Raises BudgetExhausted
    (carrying the partial result) if fewer than 15 signatures appear."""
    if kind not in ("unipotent", "nilpotent"):
        raise ValueError("kind must be 'unipotent' or 'nilpotent'")
    data = load_labels()
    rng = random.Random(seed)
    found = {}  # signature -> provenance dict

    def record(sig, provenance):
        if sig not in found:
            found[sig] = provenance

    # Levi-regular representatives pin the non-distinguished labels.  Every
    # signature carries the refinement invariants: Jordan data alone merges
    # some pairs of classes.
    canonical = {}
    for label, simple_labels in data["levi_representatives"].items():
        if kind == "unipotent":
            el = levi_unipotent(group, simple_labels)
            sig = unipotent_signature(group, el)
        else:
            el = levi_nilpotent(group, simple_labels)
            sig = nilpotent_signature(group, el)
        canonical[label] = refine_signature(group, sig, el)
    for label, sig in canonical.items():
        record(sig, {"source": "levi", "roots": data["levi_representatives"][label]})

    # random search for the rest
    tries = 0
    while len(found) < 15 and tries < budget:
        tries += 1
        if kind == "unipotent":
            el = random_unipotent(group, rng)
            sig = unipotent_signature(group, el)
        else:
            el = random_nilpotent(group, rng)
            sig = nilpotent_signature(group, el)
        record(refine_signature(group, sig, el), {"source": "random", "try": tries})

    result = _assemble(kind, data, canonical, found, seed, tries)
    if len(found) < 15:
        raise BudgetExhaustedError(
            f"found {len(found)} signatures within budget {budget}", result
        )
    return result


def _assemble(kind, data, canonical, found, seed, tries):
    ambiguities = []
    label_of = {}
    # canonical labels must be pairwise distinct signatures
    by_sig = {}
    for label, sig in canonical.items():
        by_sig.setdefault(sig, []).append(label)
    for sig, labels in by_sig.items():
        if len(labels) > 1:
            ambiguities.append(f"representatives {labels} share one signature")
            label_of[sig] = "|".join(sorted(labels))
        else:
            label_of[sig] = labels[0]
    leftovers = [s for s in found if s not in label_of]
    # distinguished classes: fixed-space dimension on the 52-span, descending
    leftovers.sort(key=lambda s: (-s.f4_centralizer_dim, s.jordan_248))
    dist = data["distinguished_order"]
    if len(leftovers) == len(dist):
        keys = [s.f4_centralizer_dim for s in leftovers]
        if len(set(keys)) != len(keys):
            ambiguities.append(f"distinguished fixed-space dims not distinct: {keys}")
        for s, label in zip(leftovers, dist):
            label_of[s] = label
    else:
        ambiguities.append(
            f"{len(leftovers)} unlabeled signatures for {len(dist)} distinguished names"
        )
        for i, s in enumerate(leftovers):
            label_of[s] = f"?{i}"
    e8_label = dict(data[kind])
    rows = []
    for sig, label in label_of.items():
        rows.append(
            {
                "f4_label": label,
                "e8_label": e8_label.get(label, "?"),
                "signature": sig.to_json(),
                "provenance": found[sig],
            }
        )
    rows.sort(key=lambda r: (r["signature"]["order_or_depth"],
                             -r["signature"]["f4_centralizer_dim"],
                             r["f4_label"]))
    collisions, coincidences = _e8_collisions(label_of, e8_label)
    return {
        "kind": kind,
        "seed": seed,
        "random_tries": tries,
        "count": len(found),
        "rows": rows,
        "ambiguities": ambiguities,
        "order_partition": _order_partition(found) if kind == "unipotent" else None,
        "e8_collisions": collisions,
        "e8_jordan_coincidences": coincidences,
        "expected_collisions": data["collisions"][kind],
    }


def _order_partition(found) -> dict:
    out = {}
    for sig in found:
        out[sig.order_or_depth] = out.get(sig.order_or_depth, 0) + 1
    return {str(k): v for k, v in sorted(out.items())}


def _e8_collisions(label_of, e8_label):
    """Groups of distinct local classes with identical ambient Jordan data,
    split by what their attached ambient labels say: groups whose ambient
    labels agree are class collisions, groups whose labels differ are
    Jordan-type coincidences of distinct ambient classes (the Jordan data
    alone cannot tell those apart, so they are reported separately)."""
    groups = {}
    for sig, label in label_of.items():
        groups.setdefault(sig.e8_part, []).append(label)
    collisions, coincidences = [], []
    for labels in groups.values():
        if len(labels) < 2:
            continue
        targets = {e8_label.get(lab, "?") for lab in labels}
        (collisions if len(targets) == 1 else coincidences).append(sorted(labels))
    return sorted(collisions), sorted(coincidences)


# -- the corrected Jordan-block claim --


E8B6_BLOCKS = (9,) * 26 + (7, 3, 3, 1)
E8B6_SUPERSEDED = (9,) * 25 + (8, 8, 2, 2, 1, 1, 1)


def jordan_correction_check(survey: dict) -> dict:
    """The order-9 survey must contain the block shape 9^26,7,3^2,1 and must
    not contain the superseded shape 9^25,8^2,2^2,1^3."""
    shapes = [tuple(r["signature"]["jordan_248"]) for r in survey["rows"]]
    return {
        "corrected_present": E8B6_BLOCKS in shapes,
        "superseded_absent": E8B6_SUPERSEDED not in shapes,
        "pass": E8B6_BLOCKS in shapes and E8B6_SUPERSEDED not in shapes,
    }
