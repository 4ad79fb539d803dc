import numpy as np

from monoconv.convolution import affine_mixture_convolve, monotone_convolve
from monoconv.measure import CircleMeasure, k_transform, validate_k


def rand_atomic(rng, n):
    return CircleMeasure.from_atoms(rng.uniform(0, 2 * np.pi, n), rng.dirichlet(np.ones(n)))


def two_point():
    return CircleMeasure.from_atoms([0.0, np.pi], [0.5, 0.5])


def test_unit_both_sides():
    rng = np.random.default_rng(2)
    mu = rand_atomic(rng, 4)
    unit = CircleMeasure.dirac(0.0)
    m = mu.moments(16)
    assert np.max(np.abs(monotone_convolve(mu, unit, 16).moments(16) - m)) < 1e-13
    assert np.max(np.abs(monotone_convolve(unit, mu, 16).moments(16) - m)) < 1e-13


def test_right_dirac_translates():
    rng = np.random.default_rng(3)
    mu = rand_atomic(rng, 5)
    x = 0.9
    out = monotone_convolve(mu, CircleMeasure.dirac(x), 12).moments(12)
    expect = mu.moments(12) * np.exp(1j * x * np.arange(1, 13))
    assert np.max(np.abs(out - expect)) < 1e-13


def test_square_of_two_point_is_fourth_roots():
    out = monotone_convolve(two_point(), two_point(), 16).moments(16)
    expect = np.array([1.0 if (k % 4 == 0) else 0.0 for k in range(1, 17)])
    assert np.max(np.abs(out - expect)) < 1e-12


def test_associativity_random_triples():
    rng = np.random.default_rng(17)
    for _ in range(8):
        lam = rand_atomic(rng, 3)
        mu = rand_atomic(rng, 2)
        nu = rand_atomic(rng, 3)
        left = monotone_convolve(monotone_convolve(lam, mu, 16), nu, 16).moments(16)
        right = monotone_convolve(lam, monotone_convolve(mu, nu, 16), 16).moments(16)
        assert np.max(np.abs(left - right)) < 1e-12


def test_noncommutativity_witness():
    # left convolution by a point mass is not the translation action
    x = np.pi / 2
    mu = two_point()
    left = monotone_convolve(CircleMeasure.dirac(x), mu, 8).moments(8)
    translated = mu.moments(8) * np.exp(1j * x * np.arange(1, 9))
    assert np.max(np.abs(left - translated)) > 1e-3
    # and the convolution itself is order-sensitive
    other = monotone_convolve(mu, CircleMeasure.dirac(x), 8).moments(8)
    assert np.max(np.abs(left - other)) > 1e-3


def test_affine_mixture_point_mass_and_unit():
    rng = np.random.default_rng(19)
    nu = rand_atomic(rng, 3)
    x = 1.3
    dirac = CircleMeasure.dirac(x)
    a = affine_mixture_convolve(dirac, nu, 12).moments(12)
    b = monotone_convolve(dirac, nu, 12).moments(12)
    assert np.max(np.abs(a - b)) < 1e-13
    mu = two_point()
    back = affine_mixture_convolve(mu, CircleMeasure.dirac(0.0), 12).moments(12)
    assert np.max(np.abs(back - mu.moments(12))) < 1e-13


def test_affine_mixture_requires_atoms():
    import pytest

    from monoconv.errors import DomainError

    with pytest.raises(DomainError):
        affine_mixture_convolve(CircleMeasure.haar(8), two_point(), 8)


def test_affine_mixture_matches_composition():
    rng = np.random.default_rng(23)
    for _ in range(6):
        mu = rand_atomic(rng, 3)
        nu = rand_atomic(rng, 2)
        a = monotone_convolve(mu, nu, 16).moments(16)
        b = affine_mixture_convolve(mu, nu, 16).moments(16)
        assert np.max(np.abs(a - b)) < 1e-12


def test_output_is_valid_k():
    rng = np.random.default_rng(29)
    for _ in range(6):
        out = monotone_convolve(rand_atomic(rng, 4), rand_atomic(rng, 3), 32)
        assert validate_k(k_transform(out, 32)).all_ok
