import numpy as np
import pytest

from monoconv.errors import DomainError
from monoconv.measure import (
    CircleMeasure,
    KTransform,
    k_transform,
    moments_from_k,
    poisson_density,
    validate_k,
)
from monoconv.series import TruncatedSeries


def rand_atomic(rng, max_atoms=8):
    n = int(rng.integers(1, max_atoms + 1))
    angles = rng.uniform(0, 2 * np.pi, n)
    w = rng.dirichlet(np.ones(n))
    return CircleMeasure.from_atoms(angles, w)


# -- moments ----------------------------------------------------------------


def test_moments_dirac():
    assert np.allclose(CircleMeasure.dirac(0.0).moments(10), np.ones(10), atol=0)


def test_moments_two_point_symmetric():
    mu = CircleMeasure.from_atoms([0.0, np.pi], [0.5, 0.5])
    m = mu.moments(8)
    assert np.allclose(m, [0, 1, 0, 1, 0, 1, 0, 1], atol=1e-15)


def test_moments_uniform_atoms_vanish():
    mu = CircleMeasure.uniform_atoms(64)
    m = mu.moments(63)
    assert np.max(np.abs(m)) < 1e-13  # root-of-unity sums cancel


def test_moment_representation_passthrough_and_bounds():
    mu = CircleMeasure.from_moments([0.5, 0.25j])
    assert np.allclose(mu.moments(2), [0.5, 0.25j], atol=0)
    with pytest.raises(DomainError):
        mu.moments(3)
    with pytest.raises(ValueError):
        CircleMeasure.from_moments([2.0])


def test_weights_validation():
    with pytest.raises(ValueError):
        CircleMeasure.from_atoms([0.0], [0.7])
    with pytest.raises(ValueError):
        CircleMeasure.from_atoms([0.0, 1.0], [1.5, -0.5])


# -- K-transform -------------------------------------------------------------


def test_k_transform_dirac_closed_form():
    phi = 1.2345
    k = k_transform(CircleMeasure.dirac(phi), 12)
    assert k.closed_form is not None and k.closed_form.kind == "dirac"
    expect = np.zeros(13, dtype=complex)
    expect[1] = np.exp(1j * phi)
    assert np.allclose(k.series.coeffs, expect, atol=0)
    assert abs(k.eval(0.3 + 0.2j) - np.exp(1j * phi) * (0.3 + 0.2j)) == 0


def test_k_transform_haar_is_zero():
    k = k_transform(CircleMeasure.haar(16), 16)
    assert k.closed_form is not None and k.closed_form.kind == "haar"
    assert np.allclose(k.series.coeffs, 0, atol=0)


def test_k_transform_two_point_is_square():
    mu = CircleMeasure.from_atoms([0.0, np.pi], [0.5, 0.5])
    k = k_transform(mu, 12)
    expect = np.zeros(13, dtype=complex)
    expect[2] = 1.0
    assert np.max(np.abs(k.series.coeffs - expect)) < 1e-13


def test_k_transform_of_unit_is_identity():
    k = k_transform(CircleMeasure.dirac(0.0), 8)
    assert np.allclose(k.series.coeffs, TruncatedSeries.identity(8).coeffs, atol=0)


# -- inversion ---------------------------------------------------------------


def test_moments_from_square():
    m = moments_from_k(KTransform.monomial(2, 12), 12)
    assert np.allclose(m, [0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1], atol=1e-14)


def test_moments_from_rotation():
    phi = 0.7
    m = moments_from_k(KTransform.dirac(phi, 10), 10)
    assert np.allclose(m, np.exp(1j * phi * np.arange(1, 11)), atol=1e-13)


def test_moments_from_haar():
    assert np.allclose(moments_from_k(KTransform.haar(10), 10), 0, atol=0)


def test_round_trip_random_atomic():
    rng = np.random.default_rng(21)
    for _ in range(25):
        mu = rand_atomic(rng)
        n = 24
        m = moments_from_k(k_transform(mu, n), n)
        assert np.max(np.abs(m - mu.moments(n))) < 1e-12


# -- validation --------------------------------------------------------------


def test_validate_square():
    rep = validate_k(KTransform.monomial(2, 16))
    assert rep.all_ok


def test_validate_schur_violation():
    rep = validate_k(KTransform.from_coefficients([0, 2.0] + [0.0] * 14))
    assert rep.k_at_zero_ok and not rep.schur_bound_ok


def test_validate_nonzero_origin():
    rep = validate_k(TruncatedSeries([0.5, 1.0] + [0.0] * 14))
    assert not rep.k_at_zero_ok


def test_validate_random_atomic():
    rng = np.random.default_rng(5)
    for _ in range(10):
        rep = validate_k(k_transform(rand_atomic(rng), 32))
        assert rep.all_ok, rep


# -- Poisson density ---------------------------------------------------------


def test_poisson_haar_constant():
    p = poisson_density(CircleMeasure.haar(16), 0.8, 128)
    assert np.allclose(p, 1.0, atol=1e-14)


def test_poisson_dirac_peak_and_mass():
    p = poisson_density(CircleMeasure.dirac(0.0), 0.9, 256)
    assert np.argmax(p) == 0
    assert abs(np.mean(p) - 1.0) < 1e-6  # trapezoid of a periodic function
    assert np.min(p) > -1e-9


def test_poisson_two_peaks():
    mu = CircleMeasure.from_atoms([0.0, np.pi], [0.5, 0.5])
    p = poisson_density(mu, 0.9, 256)
    assert np.argmax(p) in (0, 128)
    assert abs(p[0] - p[128]) < 1e-9  # symmetry
    assert abs(np.mean(p) - 1.0) < 1e-6


def test_poisson_radius_domain():
    with pytest.raises(DomainError):
        poisson_density(CircleMeasure.dirac(0.0), 1.0, 16)
