import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coreep.errors import MatrixFormatError, ShapeError
from coreep.matcore import (
    DEFAULT_TOL,
    EPS,
    ToleranceConfig,
    approx_equal,
    cmatrix,
    ct,
    dumps_matrix,
    is_nilpotent,
    is_projection,
    load_matrix,
    loads_matrix,
    mat_pow,
    nilpotency_residual,
    pinv,
    range_contains,
    range_equal,
    range_projector,
    rank,
    residual,
    save_matrix,
)


def test_default_tolerances():
    assert DEFAULT_TOL.rank_tol == 64 * EPS
    assert DEFAULT_TOL.eq_tol == 1e-8
    assert DEFAULT_TOL.nil_tol == 1e-8


@pytest.mark.parametrize("field", ["rank_tol", "eq_tol", "nil_tol"])
@pytest.mark.parametrize("bad", [0.0, -1e-3, float("nan"), float("inf")])
def test_tolerances_must_be_positive(field, bad):
    with pytest.raises(ValueError):
        ToleranceConfig(**{field: bad})


def test_tolerance_dict_roundtrip():
    cfg = ToleranceConfig(1e-12, 1e-9, 1e-7)
    assert cfg.to_dict() == {"rankTol": 1e-12, "eqTol": 1e-9, "nilTol": 1e-7}
    assert ToleranceConfig.from_dict(cfg.to_dict()) == cfg


def test_rank_examples():
    assert rank([[1, 2], [3, 4]]) == 2
    assert rank(np.zeros((3, 3))) == 0
    assert rank([[1, 1], [0, 0]]) == 1


def test_rank_scale_ignores_noise():
    noise = 1e-17 * np.ones((3, 3))
    assert rank(noise) == 1
    assert rank(noise, scale=1.0) == 0


def test_pinv_example():
    np.testing.assert_allclose(pinv([[1, 1], [0, 0]]), [[0.5, 0], [0.5, 0]], atol=1e-15)


def test_range_projector_examples():
    np.testing.assert_allclose(range_projector([[1, 1], [0, 0]]), [[1, 0], [0, 0]], atol=1e-15)
    np.testing.assert_allclose(range_projector([[0, 1], [0, 0]]), [[1, 0], [0, 0]], atol=1e-15)


def test_range_equal_examples():
    assert range_equal([[1, 0], [0, 0]], [[0, 1], [0, 0]])
    assert not range_equal([[1, 0], [0, 0]], [[0, 0], [1, 0]])


def test_range_contains_is_directional():
    e1 = np.array([[1, 0], [0, 0]])
    assert range_contains(np.eye(2), e1)
    assert not range_contains(e1, np.eye(2))


def test_residual_example():
    ok, r = approx_equal(np.eye(2), 2 * np.eye(2))
    assert not ok
    assert r == pytest.approx(math.sqrt(2) / (1 + math.sqrt(2) + 2 * math.sqrt(2)), rel=1e-15)


def test_residual_shape_mismatch():
    with pytest.raises(ShapeError):
        residual(np.eye(2), np.eye(3))


def test_mat_pow():
    a = np.array([[1, 1], [0, 1]], dtype=complex)
    np.testing.assert_array_equal(mat_pow(a, 0), np.eye(2))
    np.testing.assert_array_equal(mat_pow(a, 5), [[1, 5], [0, 1]])
    with pytest.raises(ValueError):
        mat_pow(a, -1)


def test_projection_and_nilpotent():
    assert is_projection(np.diag([1.0, 0.0]))[0]
    assert not is_projection(np.array([[1.0, 1.0], [0.0, 0.0]]))[0]
    n = np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)
    assert is_nilpotent(n)[0]
    assert nilpotency_residual(n) == 0.0
    assert not is_nilpotent(np.eye(2))[0]


def test_cmatrix_rejects_bad_input():
    with pytest.raises(MatrixFormatError):
        cmatrix([[1.0, np.nan]])
    with pytest.raises(ShapeError):
        cmatrix(np.zeros((2, 2, 2)))


def test_matrix_json_roundtrip(tmp_path):
    m = np.array([[1 + 2j, -0.5], [0, 3j]])
    path = tmp_path / "m.json"
    save_matrix(m, path)
    np.testing.assert_array_equal(load_matrix(path), m)
    obj = json.loads(dumps_matrix(m))
    assert obj["rows"] == 2 and obj["cols"] == 2
    assert obj["data"][0] == [1.0, 2.0]


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        '{"rows": 2, "cols": 2}',
        '{"rows": 2, "cols": 2, "data": [[1, 0]]}',
        '{"rows": 0, "cols": 1, "data": []}',
        '{"rows": 1, "cols": 1, "data": [[NaN, 0]]}',
        '{"rows": 1, "cols": 1, "data": [[Infinity, 0]]}',
        '{"rows": 1, "cols": 1, "data": [[true, 0]]}',
        '{"rows": 1, "cols": 1, "data": [[1, 0, 0]]}',
        '{"rows": 1, "cols": 1, "data": [["1", 0]]}',
        '{"rows": true, "cols": 1, "data": [[1, 0]]}',
    ],
)
def test_malformed_matrix_json(text):
    with pytest.raises(MatrixFormatError):
        loads_matrix(text)


def _cmat(n):
    # quarter-integers: exact zeros and rank drops are common, subnormals never occur
    entries = st.integers(-8, 8).map(lambda k: k / 4)
    return st.lists(entries, min_size=2 * n * n, max_size=2 * n * n).map(
        lambda v: (np.array(v[: n * n]) + 1j * np.array(v[n * n:])).reshape(n, n)
    )


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(_cmat))
def test_pinv_penrose_identities(m):
    x = pinv(m)
    tol = 1e-8
    # drop near-rank-deficient draws: the cutoff is a threshold, not a regularizer
    s = np.linalg.svd(m, compute_uv=False)
    kept = s[s > DEFAULT_TOL.rank_tol * max(s[0], 0)]
    if kept.size and kept[-1] < 1e-6 * s[0]:
        return
    assert residual(m @ x @ m, m) <= tol
    assert residual(x @ m @ x, x) <= tol
    assert residual(ct(m @ x), m @ x) <= tol
    assert residual(ct(x @ m), x @ m) <= tol
    assert residual(pinv(x), m) <= tol


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(_cmat))
def test_range_projector_properties(m):
    p = range_projector(m)
    assert is_projection(p)[0]
    assert range_equal(p, m)
