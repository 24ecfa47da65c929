"""Chevalley algebra bracket and adjoint-action properties."""

import random

import numpy as np
import pytest

from f4e8 import gf
from f4e8.liealg import ChevalleyAlgebra
from f4e8.rootsys import build_rootsystem


@pytest.fixture(scope="module")
def f4alg():
    return ChevalleyAlgebra(build_rootsystem("F4"), gf.GF3)


def _random_vec(algebra, rng):
    return np.array(
        [rng.randrange(algebra.field.order) for _ in range(algebra.dim)], dtype=np.int8
    )


def test_bracket_antisymmetric_and_bilinear(f4alg):
    rng = random.Random(0)
    F = f4alg.field
    for _ in range(30):
        x, y = _random_vec(f4alg, rng), _random_vec(f4alg, rng)
        xy = F.mat_vec(f4alg.ad_matrix(x), y)
        yx = F.mat_vec(f4alg.ad_matrix(y), x)
        assert np.array_equal(xy, F.neg(yx))
        c = rng.randrange(1, F.order)
        assert np.array_equal(
            F.mat_vec(f4alg.ad_matrix(gf.MUL[c, x]), y), gf.MUL[c, xy]
        )


def test_ad_is_a_homomorphism(f4alg):
    """ad([x, y]) = [ad x, ad y] for 100 seeded random pairs."""
    rng = random.Random(1)
    F = f4alg.field
    for _ in range(100):
        x, y = _random_vec(f4alg, rng), _random_vec(f4alg, rng)
        adx, ady = f4alg.ad_matrix(x), f4alg.ad_matrix(y)
        lhs = f4alg.ad_matrix(F.mat_vec(adx, y))
        rhs = F.sub(F.mat_mul(adx, ady), F.mat_mul(ady, adx))
        assert F.mat_equal(lhs, rhs)


def test_cartan_acts_by_pairing(f4alg):
    rs = f4alg.rs
    simples = sorted(
        (r for r in rs.positive_roots if sum(r) == 1), key=lambda r: r.index(1)
    )
    F = f4alg.field
    for k, s in enumerate(simples, start=1):
        h = f4alg.h(k)
        ad = f4alg.ad_matrix(h)
        for r in rs.roots:
            img = F.mat_vec(ad, f4alg.e(r))
            expect = gf.MUL[rs.pairing(r, s) % 3, f4alg.e(r)]
            assert np.array_equal(img, expect)


def test_root_vector_brackets_match_constants(f4alg):
    rs = f4alg.rs
    F = f4alg.field
    for a in rs.roots:
        for b in rs.roots:
            s = tuple(x + y for x, y in zip(a, b))
            if not rs.is_root(s):
                continue
            img = F.mat_vec(f4alg.ad_matrix(f4alg.e(a)), f4alg.e(b))
            expect = gf.MUL[rs.struct_const(a, b) % 3, f4alg.e(s)]
            assert np.array_equal(img, expect)
