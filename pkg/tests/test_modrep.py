"""Module machinery: spinning, minimal polynomials, the invariant form."""

import random

import numpy as np
import pytest

from f4e8 import gf, modrep


def _tiny_reducible_module():
    """Two generators acting block-upper-triangularly on GF(3)^3: invariant
    line spanned by e1, quotient of dimension 2."""
    field = gf.GF3
    g1 = np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]], dtype=np.int8)
    g2 = np.array([[2, 0, 1], [0, 1, 0], [0, 0, 2]], dtype=np.int8)
    return modrep.MatModule(field, [g1, g2], 3)


def test_spin_finds_invariant_line():
    m = _tiny_reducible_module()
    v = np.array([1, 0, 0], dtype=np.int8)
    S = modrep.spin(m, v)
    assert S.dim == 1
    assert modrep.is_invariant(m, S)


def test_composition_factors_of_tiny_module():
    m = _tiny_reducible_module()
    dims = modrep.composition_factor_dims(m, seed=0)
    assert sum(dims) == 3
    assert 1 in dims


def test_minimal_polynomial_kills_operator():
    field = gf.GF3
    rng = random.Random(0)
    A = np.array(
        [[rng.randrange(3) for _ in range(6)] for _ in range(6)], dtype=np.int8
    )
    p = modrep.minimal_polynomial(field, A, random.Random(1))
    assert not np.any(modrep._poly_eval(field, p, A))


def test_invariant_form_is_group_invariant(group3):
    F = modrep.invariant_form(group3.alg)
    gens = [group3.x(b, 1).matrix for b in group3.f4.roots[:8]]
    assert modrep.form_invariant(group3.field, F, gens)


def test_spin_span_vector_gives_52(group3):
    m = modrep.f4_module(group3)
    v = group3.span.echelon[0]
    S = modrep.spin(m, v)
    assert S.dim == 52


def test_form_complement_is_invariant(group3):
    F = modrep.invariant_form(group3.alg)
    m = modrep.f4_module(group3)
    V = modrep.Subspace(group3.field, group3.span.echelon, 248)
    W = modrep.orthogonal_complement(group3.field, F, V)
    assert W.dim == 196
    assert modrep.is_invariant(m, W)
