import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coreep.errors import InconsistentSpec
from coreep.gen_inverses import index
from coreep.instances import (
    BLOCK_MODES,
    CommutationPair,
    GenSpec,
    bundle_from_obj,
    dumps_bundle,
    gen_block_triple,
    gen_lambda_pair,
    gen_order_pair,
    gen_thm35_pair,
    gen_with_index,
    haar_unitary,
    random_corpus,
    rng_for,
    thm36_constraint_terms,
)
from coreep.laws import block_constraint
from coreep.matcore import ct, residual
from coreep.order import order_holds


@pytest.mark.parametrize(
    "spec",
    [GenSpec(0, 0, 1), GenSpec(3, 4, 0), GenSpec(3, 3, 1), GenSpec(3, 1, 3), GenSpec(3, 1, 0),
     GenSpec(3, 1, 1, condition_cap=0.5)],
)
def test_genspec_rejects_inconsistent(spec):
    with pytest.raises(InconsistentSpec):
        spec.validate()


def test_gen_with_index_is_deterministic_and_bounded():
    spec = GenSpec(5, 2, 2, seed=17)
    a = gen_with_index(spec)
    np.testing.assert_array_equal(a, gen_with_index(spec))
    assert np.linalg.norm(a, 2) <= 1 + 1e-12
    assert index(a) == 2


def test_haar_unitary_is_unitary():
    u = haar_unitary(5, rng_for(3))
    np.testing.assert_allclose(u @ ct(u), np.eye(5), atol=1e-13)


def test_random_corpus_dims():
    corpus = random_corpus(40, seed=5, dims=(2, 6))
    assert len(corpus) == 40
    assert {m.shape[0] for m in corpus} <= set(range(2, 7))


def test_lambda_pair_unmixed_example():
    pair = gen_lambda_pair(2, 2, seed=0, mix=False)
    d = pair.a[0, 0]
    np.testing.assert_allclose(pair.a, np.diag([d, -d]), atol=1e-15)
    np.testing.assert_allclose(pair.b, [[0, 1], [1, 0]])
    assert pair.lam == pytest.approx(-1)
    assert pair.mu == pytest.approx(-1)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
@pytest.mark.parametrize("singular", [False, True])
def test_lambda_pair_relations(n, singular):
    for root in [d for d in range(1, n + 1) if n % d == 0]:
        p = gen_lambda_pair(n, root, seed=n * 10 + root, singular_direct_summand=singular)
        assert abs(p.lam ** root - 1) < 1e-12
        assert residual(p.a @ p.b, p.lam * p.b @ p.a) < 1e-13
        assert residual(ct(p.a) @ p.b, p.mu * p.b @ ct(p.a)) < 1e-13


def test_lambda_pair_nilpotent_regime():
    p = gen_lambda_pair(3, 1, seed=2, lam=0.5)
    assert p.regime == "nilpotent-b"
    assert residual(p.a @ p.b, p.lam * p.b @ p.a) < 1e-13
    assert np.linalg.norm(np.linalg.matrix_power(p.b, 3)) < 1e-13


def test_lambda_pair_bad_root_order():
    with pytest.raises(InconsistentSpec):
        gen_lambda_pair(4, 3, seed=0)


def test_commutation_pair_rejects_zero_weights():
    with pytest.raises(ValueError):
        CommutationPair(np.eye(2), np.eye(2), 0, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_thm35_pair_relations(n):
    p = gen_thm35_pair(n, seed=n)
    a, b = p.a, p.b
    bab, b2 = b @ a @ b, b @ b
    assert residual(bab, p.lam * a @ b2) < 1e-13
    assert residual(bab, p.mu * b2 @ a) < 1e-13
    assert residual(b @ ct(a) @ b, p.lam2 * ct(a) @ b2) < 1e-13
    assert residual(b @ ct(a) @ b, p.mu2 * b2 @ ct(a)) < 1e-13


def test_thm35_pair_n2_weights():
    p = gen_thm35_pair(2, seed=0)
    assert p.lam == pytest.approx(-1)
    assert p.mu == pytest.approx(-1)


@pytest.mark.parametrize("mode", BLOCK_MODES)
def test_block_triple_constraint_vanishes(mode):
    for seed in range(8):
        a, b, d, _ = gen_block_triple(1 + seed % 3, 1 + (seed // 3) % 3, mode, seed)
        c = block_constraint(a, b, d)
        assert np.linalg.norm(c) / (1 + np.linalg.norm(b)) <= 1e-12
        terms = thm36_constraint_terms(a, b, d)
        np.testing.assert_allclose(sum(terms), c, atol=1e-14)


def test_block_triple_nullspace_example():
    a, b, d, _ = gen_block_triple(2, 2, "NullspaceSolve", 11)
    assert np.linalg.norm(block_constraint(a, b, d)) <= 1e-12


def test_block_triple_bad_mode():
    with pytest.raises(ValueError):
        gen_block_triple(2, 2, "Nope", 0)


@settings(max_examples=30, deadline=None)
@given(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)).filter(lambda t: sum(t) > 0),
       st.integers(0, 10**6))
def test_order_pair_is_ordered(dims, seed):
    a, b = gen_order_pair(dims, seed)
    assert order_holds(a, b)[0]


def test_bundle_roundtrip():
    p = gen_lambda_pair(3, 3, seed=1)
    text = dumps_bundle("lambda-pair", 1, {"A": p.a, "B": p.b}, {"lambda": p.lam})
    kind, seed, mats, scal = bundle_from_obj(json.loads(text))
    assert kind == "lambda-pair" and seed == 1
    np.testing.assert_array_equal(mats["A"], p.a)
    assert scal["lambda"] == p.lam
