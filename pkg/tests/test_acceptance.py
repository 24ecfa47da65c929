"""Acceptance gate: one test per criterion, with pinned tolerances and
runtime budgets.  Every assertion is exact (integer dimensions, exact Jordan
shapes, exact objective counts); runtime budgets are wall-clock upper bounds
for the checked operation itself (session fixtures are built once and shared).
"""

import random
import time

import numpy as np
import pytest

from f4e8 import classify, embedding, gf, hillclimb, modrep
from f4e8.cli import toral_basis
from f4e8.liealg import ChevalleyAlgebra
from f4e8.rootsys import build_rootsystem


@pytest.fixture(scope="module")
def closure_report(basis):
    return embedding.verify_closure_and_maximality_witness(basis)


@pytest.fixture(scope="module")
def unipotent_survey(group3):
    start = time.perf_counter()
    survey = classify.survey_classes(group3, "unipotent", seed=0, budget=300)
    survey["elapsed"] = time.perf_counter() - start
    return survey


@pytest.fixture(scope="module")
def nilpotent_survey(group3):
    start = time.perf_counter()
    survey = classify.survey_classes(group3, "nilpotent", seed=0, budget=300)
    survey["elapsed"] = time.perf_counter() - start
    return survey


def test_c01_embedding_wellformed(table, alg):
    """Criterion 1: commuting supports, 2-long/4-short law; < 1 s."""
    f4 = build_rootsystem("F4")
    start = time.perf_counter()
    embedding.check_table_wellformed(table, f4, alg.rs)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"well-formedness took {elapsed:.2f}s (budget 1s)"


def test_c02_closure_relations_weights(basis, closure_report):
    """Criterion 2: closure dim exactly 52, relations with a consistent sign
    character, 48-line weight decomposition; < 30 s."""
    start = time.perf_counter()
    relations = embedding.verify_f4_relations(basis)
    weights = embedding.weight_decomposition(basis)
    elapsed = time.perf_counter() - start
    assert closure_report["closure_dim"] == 52
    assert relations["cartan_ok"] and relations["coroot_ok"]
    assert set(relations["sign_character"].values()) <= {1, -1}
    assert weights["nonzero_weight_lines"] == 48 and weights["zero_weight_dim"] == 4
    assert elapsed < 30.0, f"relations+weights took {elapsed:.2f}s (budget 30s)"


def test_c03_self_normalization(closure_report):
    """Criterion 3: normalizer dim 52, centralizer dim 0; < 2 min."""
    assert closure_report["normalizer_dim"] == 52
    assert closure_report["centralizer_dim"] == 0


def test_c04_group_normalization(group3, group9):
    """Criterion 4: 100 seeded random group elements (50 per field) all
    stabilize the 52-span; < 1 min."""
    start = time.perf_counter()
    for G in (group3, group9):
        for seed in range(50):
            assert G.stabilizes_span(G.random_element(seed)), (G.field, seed)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"span stabilization took {elapsed:.2f}s (budget 60s)"


def test_c05_torus_identities(group9):
    """Criterion 5: all four torus rows match the n-derived elements over
    GF(9); the fourth row is re-derived from its corrected exponent vector."""
    report = group9.torus_report()
    for lab in ("1000", "0100", "0010"):
        assert report[lab]["exponents_agree"], lab
        assert report[lab]["matrix_agrees"], lab
    # the printed source row for 0001 has a truncated first label; agreement
    # here certifies the padded completion
    assert report["0001"]["exponents_agree"]
    assert report["0001"]["matrix_agrees"]
    assert report["0001"]["table_exponents"] == report["0001"]["derived_exponents"]


def test_c06_module_decomposition(group3, group9):
    """Criterion 6: 52 + 196, both absolutely irreducible; B4 dims
    {16,36,84,112}; involution split (120,128); < 5 min."""
    start = time.perf_counter()
    dec = modrep.decompose_248(group3, seed=1, group9=group9)
    b4 = modrep.restrict_to_b4(group3, dec["V"], dec["W"], seed=1)
    inv = modrep.involution_split(group3)
    elapsed = time.perf_counter() - start
    assert [f["dim"] for f in dec["factors"]] == [52, 196]
    assert all(f["irreducible"] for f in dec["factors"])
    assert all(f["absolutely_irreducible"] for f in dec["factors"])
    assert sorted(b4["dims_52"]) == [16, 36]
    assert sorted(b4["dims_196"]) == [84, 112]
    assert inv["split"] == (120, 128)
    assert elapsed < 300.0, f"decomposition took {elapsed:.2f}s (budget 5min)"


def test_c07_fusion_tables(unipotent_survey, nilpotent_survey):
    """Criterion 7: 15 signatures per table, unipotent order partition 7/7/1,
    exactly the prescribed e8 collision in each; < 15 min combined."""
    assert unipotent_survey["count"] == 15
    assert unipotent_survey["order_partition"] == {"3": 7, "9": 7, "27": 1}
    assert unipotent_survey["ambiguities"] == []
    assert unipotent_survey["e8_collisions"] == [["A2", "A2~"]]
    assert nilpotent_survey["count"] == 15
    assert nilpotent_survey["ambiguities"] == []
    assert nilpotent_survey["e8_collisions"] == [["A2+A1~", "A2~+A1"]]
    elapsed = unipotent_survey["elapsed"] + nilpotent_survey["elapsed"]
    assert elapsed < 900.0, f"surveys took {elapsed:.2f}s (budget 15min)"


def test_c08_jordan_correction(unipotent_survey):
    """Criterion 8: order-9 block shape 9^26,7,3^2,1 present and the
    superseded 9^25,8^2,2^2,1^3 absent; exact."""
    check = classify.jordan_correction_check(unipotent_survey)
    assert check["corrected_present"]
    assert check["superseded_absent"]
    shapes = [tuple(r["signature"]["jordan_248"]) for r in unipotent_survey["rows"]]
    assert classify.E8B6_BLOCKS in shapes
    assert classify.E8B6_SUPERSEDED not in shapes


def test_c09_hill_climb(alg, basis):
    """Criterion 9: default config re-aligns a 30-step scrambled toral basis
    to objective 960 with a deterministically replaying trace; fallback is
    >= 8 of the 10 documented seeds 0..9."""
    gens = hillclimb.InnerGenerators(alg)
    targets = toral_basis(basis)
    scrambled, _ = hillclimb.scramble(gens, targets, 30, seed=5)

    def attempt(seed):
        try:
            state = hillclimb.recover(gens, scrambled, seed=seed, budget=2000)
        except hillclimb.BudgetExhaustedError:
            return None
        replayed = hillclimb.replay(gens, scrambled, state.history)
        assert np.array_equal(replayed, state.targets)
        return state

    state = attempt(0)
    if state is not None:
        assert state.objective == 960
        return
    successes = sum(1 for seed in range(10) if attempt(seed) is not None)
    assert successes >= 8, f"only {successes}/10 documented seeds succeeded"


def test_c10_property_suites(group3):
    """Criterion 10: Jacobi (200 triples), ad-homomorphism (100 pairs),
    one-parameter additivity (50 pairs), Jordan conjugation invariance
    (50 trials); zero failures."""
    rs = embedding.ambient_rootsystem()
    rng = random.Random(0)

    def jacobi(a, b, c):
        total = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            s = tuple(p + q for p, q in zip(y, z))
            if not rs.is_root(s):
                continue
            t = tuple(p + q for p, q in zip(x, s))
            if rs.is_root(t):
                v = rs.struct_const(y, z) * rs.struct_const(x, s)
                total[t] = total.get(t, 0) + v
        return all(v == 0 for v in total.values())

    checked = 0
    while checked < 200:
        a, b, c = (rng.choice(rs.roots) for _ in range(3))
        pairs = [(a, b), (b, c), (c, a)]
        if any(x == tuple(-t for t in y) for x, y in pairs):
            continue
        s = tuple(p + q + r for p, q, r in zip(a, b, c))
        if any(x == tuple(-t for t in s) for x in (a, b, c)):
            continue
        assert jacobi(a, b, c), (a, b, c)
        checked += 1

    f4alg = ChevalleyAlgebra(build_rootsystem("F4"), gf.GF3)
    F = f4alg.field
    for _ in range(100):
        x = np.array([rng.randrange(3) for _ in range(f4alg.dim)], dtype=np.int8)
        y = np.array([rng.randrange(3) for _ in range(f4alg.dim)], dtype=np.int8)
        adx, ady = f4alg.ad_matrix(x), f4alg.ad_matrix(y)
        lhs = f4alg.ad_matrix(F.mat_vec(adx, y))
        rhs = F.sub(F.mat_mul(adx, ady), F.mat_mul(ady, adx))
        assert F.mat_equal(lhs, rhs)

    for _ in range(50):
        beta = rng.choice(group3.f4.roots)
        s, t = rng.randrange(3), rng.randrange(3)
        lhs = group3.x(beta, s).compose(group3.x(beta, t))
        rhs = group3.x(beta, F.add(s, t))
        assert F.mat_equal(lhs.matrix, rhs.matrix)

    nprng = np.random.default_rng(0)
    done = 0
    while done < 50:
        N = np.triu(nprng.integers(0, 3, size=(12, 12)), k=1).astype(np.int8)
        P = nprng.integers(0, 3, size=(12, 12)).astype(np.int8)
        if F.rank(P) < 12:
            continue
        conj = F.mat_mul(F.mat_mul(P, N), F.mat_inv(P))
        assert gf.jordan_type_nilpotent(F, conj) == gf.jordan_type_nilpotent(F, N)
        done += 1
