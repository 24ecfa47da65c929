"""Class signatures: Jordan invariants, refinement, conjugation invariance."""

import random

import numpy as np
import pytest

from f4e8 import classify, gf


def test_jordan_type_conjugation_invariance():
    """jordan_type(P N P^-1) = jordan_type(N) for 50 seeded trials."""
    field = gf.GF3
    rng = np.random.default_rng(0)
    done = 0
    while done < 50:
        n = 16
        N = np.triu(rng.integers(0, 3, size=(n, n)), k=1).astype(np.int8)
        P = rng.integers(0, 3, size=(n, n)).astype(np.int8)
        if field.rank(P) < n:
            continue
        conj = field.mat_mul(field.mat_mul(P, N), field.mat_inv(P))
        assert gf.jordan_type_nilpotent(field, conj) == gf.jordan_type_nilpotent(
            field, N
        )
        done += 1


def test_levi_representative_signatures(group3):
    labels = classify.load_labels()
    u = classify.levi_unipotent(group3, labels["levi_representatives"]["A1"])
    sig = classify.unipotent_signature(group3, u)
    assert sig.order_or_depth == 3
    assert sig.centralizer_dim == 156
    assert sig.f4_centralizer_dim == 36
    u = classify.levi_unipotent(group3, labels["levi_representatives"]["A1~"])
    sig = classify.unipotent_signature(group3, u)
    assert sig.centralizer_dim == 120


def test_unipotent_signature_conjugation_invariant(group3):
    labels = classify.load_labels()
    for name in ("A2", "A2~"):
        u = classify.levi_unipotent(group3, labels["levi_representatives"][name])
        base = classify.refine_signature(
            group3, classify.unipotent_signature(group3, u), u
        )
        for seed in range(3):
            g = group3.random_element(seed)
            cu = g.compose(u).compose(g.inverse())
            sig = classify.refine_signature(
                group3, classify.unipotent_signature(group3, cu), cu
            )
            assert sig == base


def test_nilpotent_signature_conjugation_invariant(group3):
    labels = classify.load_labels()
    x = classify.levi_nilpotent(group3, labels["levi_representatives"]["A2+A1~"])
    base = classify.refine_signature(
        group3, classify.nilpotent_signature(group3, x), x
    )
    for seed in range(3):
        g = group3.random_element(seed)
        cx = g.apply(x)
        sig = classify.refine_signature(
            group3, classify.nilpotent_signature(group3, cx), cx
        )
        assert sig == base


def test_refinement_separates_the_merged_pairs(group3):
    labels = classify.load_labels()
    reps = labels["levi_representatives"]
    sigs = {}
    for name in ("A2", "A2~"):
        u = classify.levi_unipotent(group3, reps[name])
        sigs[name] = classify.refine_signature(
            group3, classify.unipotent_signature(group3, u), u
        )
    assert sigs["A2"].primary == sigs["A2~"].primary
    assert sigs["A2"] != sigs["A2~"]
    for name in ("A2+A1~", "A2~+A1"):
        x = classify.levi_nilpotent(group3, reps[name])
        sigs[name] = classify.refine_signature(
            group3, classify.nilpotent_signature(group3, x), x
        )
    assert sigs["A2+A1~"].primary == sigs["A2~+A1"].primary
    assert sigs["A2+A1~"] != sigs["A2~+A1"]


def test_random_unipotent_is_unipotent(group3):
    rng = random.Random(0)
    u = classify.random_unipotent(group3, rng)
    assert gf.unipotent_order(group3.field, u.matrix) in (3, 9, 27)


def test_random_nilpotent_is_nilpotent(group3):
    rng = random.Random(0)
    x = classify.random_nilpotent(group3, rng)
    ad = group3.alg.ad_matrix(x)
    assert gf.jordan_type_nilpotent(group3.field, ad)  # raises if not nilpotent
