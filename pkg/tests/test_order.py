import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coreep.errors import OrderViolation
from coreep.order import (
    lemma42_check,
    lemma43_corner,
    order_holds,
    thm44_assemble,
    thm44_decompose,
)
from coreep.matcore import residual

E1 = np.diag([1.0, 0.0]).astype(complex)
E2 = np.diag([0.0, 1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)
A11 = np.array([[1, 1], [0, 0]], dtype=complex)


def test_order_examples():
    assert order_holds(E1, I2)[0]
    assert not order_holds(E1, E2)[0]


def test_order_is_reflexive():
    assert order_holds(A11, A11)[0]


def test_order_shape_mismatch():
    with pytest.raises(ValueError):
        order_holds(np.eye(2), np.eye(3))


def test_lemma42_examples():
    yes = lemma42_check(E1, I2)
    no = lemma42_check(E1, E2)
    assert yes.passed and "order holds" in yes.notes
    assert no.passed and "order fails" in no.notes and "block form fails" in no.notes


def test_lemma43_example():
    rep = lemma43_corner(E1, I2)
    assert rep.passed
    assert rep.residuals["x3=(1-p)b^cEP p=0"] == 0.0


def test_lemma43_self_pair_corner_is_nilpotent_part():
    rep = lemma43_corner(A11, A11)
    assert rep.passed


def test_lemma43_vacuous_without_order():
    assert lemma43_corner(E1, E2).vacuous


def test_decompose_example():
    cert = thm44_decompose(E1, I2)
    np.testing.assert_allclose(cert.e1, E1, atol=1e-14)
    np.testing.assert_allclose(cert.e2, E2, atol=1e-14)
    np.testing.assert_allclose(cert.e3, np.zeros((2, 2)), atol=1e-14)
    assert cert.dims() == (1, 1, 0)


def test_decompose_self_pair():
    cert = thm44_decompose(A11, A11)
    np.testing.assert_allclose(cert.e1, E1, atol=1e-14)
    np.testing.assert_allclose(cert.e2, np.zeros((2, 2)), atol=1e-14)
    np.testing.assert_allclose(cert.e3, E2, atol=1e-14)
    np.testing.assert_allclose(cert.blocks_a[2][2], np.zeros((2, 2)), atol=1e-14)


def test_decompose_rejects_unordered():
    with pytest.raises(OrderViolation):
        thm44_decompose(E1, E2)


def test_certificate_json():
    cert = thm44_decompose(E1, I2)
    obj = cert.to_dict()
    assert set(obj) == {"e1", "e2", "e3", "blocksA", "blocksB", "residuals", "checks"}
    assert cert.to_json()


def test_assemble_1_0_1():
    a, b, parts = thm44_assemble(1, 0, 1, seed=3, return_parts=True)
    assert order_holds(a, b)[0]
    e3 = parts["e3"]
    # b restricted to e3 is the nilpotent t5 corner
    np.testing.assert_allclose(e3 @ b @ e3, np.zeros((2, 2)), atol=1e-14)


def test_assemble_rejects_bad_dims():
    with pytest.raises(ValueError):
        thm44_assemble(0, 0, 0, seed=0)
    with pytest.raises(ValueError):
        thm44_assemble(-1, 1, 1, seed=0)


@settings(max_examples=60, deadline=None)
@given(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)).filter(lambda t: sum(t) > 0),
       st.integers(0, 10**6))
def test_assemble_decompose_roundtrip(dims, seed):
    a, b, parts = thm44_assemble(*dims, seed, return_parts=True)
    cert = thm44_decompose(a, b)
    assert cert.ok()
    assert cert.dims() == dims
    for name in ("e1", "e2", "e3"):
        assert residual(getattr(cert, name), parts[name]) <= 1e-8
