import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatfrac.errors import NotOrthonormal
from quatfrac.quaternion import (
    I,
    J,
    K,
    ONE,
    PSI_STD,
    conjugate,
    coords,
    cquat,
    from_coords,
    make_structural_set,
    psi_scalar_product,
    quat,
    quat_mul,
    random_structural_set,
    scalar_product,
)

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)
quats = st.tuples(finite, finite, finite, finite).map(lambda t: quat(*t))


def test_basis_products():
    assert np.allclose(quat_mul(I, J), K)
    assert np.allclose(quat_mul(J, I), -K)
    assert np.allclose(quat_mul(J, K), I)
    assert np.allclose(quat_mul(K, I), J)
    assert np.allclose(quat_mul(I, I), -ONE)
    assert np.allclose(quat_mul(J, J), -ONE)
    assert np.allclose(quat_mul(K, K), -ONE)


def test_identity_element():
    q = quat(0.3, -1.2, 0.5, 2.0)
    assert np.allclose(quat_mul(ONE, q), q)
    assert np.allclose(quat_mul(q, ONE), q)


def test_mixed_product_expansion():
    # (i+j)(i-j) expanded termwise: ii - ij + ji - jj = -1 - k - k + 1 = -2k
    got = quat_mul(I + J, I - J)
    expected = (
        quat_mul(I, I) - quat_mul(I, J) + quat_mul(J, I) - quat_mul(J, J)
    )
    assert np.allclose(got, expected)
    assert np.allclose(got, quat(0, 0, 0, -2))


@settings(max_examples=60, deadline=None)
@given(quats, quats, quats)
def test_associativity_and_distributivity(a, b, c):
    assert np.allclose(
        quat_mul(quat_mul(a, b), c), quat_mul(a, quat_mul(b, c)), atol=1e-9
    )
    assert np.allclose(
        quat_mul(a, b + c), quat_mul(a, b) + quat_mul(a, c), atol=1e-10
    )


@settings(max_examples=60, deadline=None)
@given(quats, quats)
def test_conjugation_antihomomorphism(q, x):
    lhs = conjugate(quat_mul(q, x))
    rhs = quat_mul(conjugate(x), conjugate(q))
    assert np.allclose(lhs, rhs, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(quats)
def test_norm_via_conjugate(q):
    prod = quat_mul(q, conjugate(q))
    assert np.allclose(prod[1:], 0, atol=1e-10)
    assert np.isclose(prod[0], (q * q).sum(), atol=1e-9)
    assert np.allclose(prod, quat_mul(conjugate(q), q), atol=1e-10)


def test_conjugate_basic():
    assert np.allclose(conjugate(I), -I)
    assert np.allclose(conjugate(quat(1, 2, 3, 4)), quat(1, -2, -3, -4))


@settings(max_examples=40, deadline=None)
@given(quats, quats)
def test_scalar_product_against_conjugate_formula(q, x):
    direct = scalar_product(q, x)
    via_conj = 0.5 * (quat_mul(conjugate(q), x) + quat_mul(conjugate(x), q))
    assert np.allclose(via_conj[1:], 0, atol=1e-9)
    assert np.isclose(direct, via_conj[0], atol=1e-9)


def test_scalar_product_basis():
    assert scalar_product(I, I) == 1.0
    assert scalar_product(I, J) == 0.0


def test_structural_set_standard_orientation():
    s = make_structural_set(ONE, I, J, K)
    assert s.sgn == 1


def test_structural_set_swapped_orientation():
    s = make_structural_set(ONE, J, I, K)
    assert s.sgn == -1


def test_structural_set_rejects_non_orthonormal():
    with pytest.raises(NotOrthonormal):
        make_structural_set(ONE, I, J, 2.0 * K)


def test_coords_roundtrip_standard():
    assert np.allclose(coords(K, PSI_STD), [0, 0, 0, 1])
    assert np.allclose(coords(quat(1, 2, 0, 0), PSI_STD), [1, 2, 0, 0])


@settings(max_examples=30, deadline=None)
@given(quats, st.integers(0, 2**31 - 1))
def test_coords_roundtrip_random_set(q, seed):
    psi = random_structural_set(np.random.default_rng(seed))
    c = coords(q, psi)
    assert np.allclose(from_coords(c, psi), q, atol=1e-10)
    # completeness: sum_k <q, psi_k> psi_k = q
    total = sum(c[k] * psi[k] for k in range(4))
    assert np.allclose(total, q, atol=1e-10)
    assert np.isclose(psi_scalar_product(q, q, psi), (q * q).sum(), atol=1e-9)


def test_complex_embedding_matches_real():
    rng = np.random.default_rng(5)
    a, b = rng.normal(size=4), rng.normal(size=4)
    real = quat_mul(a, b)
    cplx = quat_mul(a.astype(complex), b.astype(complex))
    assert cplx.dtype == complex
    assert np.allclose(cplx.imag, 0)
    assert np.allclose(cplx.real, real)


def test_complex_unit_commutes_with_basis():
    q = cquat(0.5 + 1j, -2.0, 1j, 3.0 - 2j)
    assert np.allclose(quat_mul(1j * q, I), 1j * quat_mul(q, I))
    assert np.allclose(quat_mul(I, 1j * q), 1j * quat_mul(I, q))
