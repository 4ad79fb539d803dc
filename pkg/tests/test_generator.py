import numpy as np
import pytest

from monoconv._util import ring_grid
from monoconv.errors import DomainError
from monoconv.generator import HerglotzGenerator


def rand_gen(rng, max_atoms=5, with_b=True):
    n = int(rng.integers(1, max_atoms + 1))
    rho = [(a, w) for a, w in zip(rng.uniform(0, 2 * np.pi, n), rng.uniform(0.05, 0.6, n))]
    b = rng.uniform(-1, 1) if with_b else 0.0
    return HerglotzGenerator(b=b, rho=rho)


def test_trivial_generator():
    gen = HerglotzGenerator()
    assert gen.eval(0.3 + 0.2j) == 0
    assert gen.beta == 0


def test_single_atom_closed_form():
    gen = HerglotzGenerator(0.0, [(0.0, 1.0)])
    assert gen.eval(0.0) == 1.0
    for z in (0.3, -0.5j, 0.2 + 0.4j):
        assert abs(gen.eval(z) - (1 + z) / (1 - z)) < 1e-14


def test_uniform_atoms_exact_closed_form():
    # 64 equal atoms of mass 1: u(z) = 1 + 2 z^64 / (1 - z^64) exactly,
    # so u is 1 up to 1e-12 only for |z| <= 0.65; at 0.9 the gap is ~2.4e-3
    gen = HerglotzGenerator.uniform()
    for r in (0.3, 0.6, 0.9):
        for z in r * np.exp(2j * np.pi * np.arange(8) / 8):
            exact = 1 + 2 * z**64 / (1 - z**64)
            assert abs(gen.eval(z) - exact) < 1e-12
    for z in 0.6 * np.exp(2j * np.pi * np.arange(8) / 8):
        assert abs(gen.eval(z) - 1.0) < 1e-12
    assert abs(gen.eval(0.9) - 1.0) > 1e-4  # the cancellation is not unconditional


def test_domain_error_outside_disk():
    gen = HerglotzGenerator(0.0, [(0.0, 1.0)])
    with pytest.raises(DomainError):
        gen.eval(1.0)


def test_vector_field_constantish():
    gen = HerglotzGenerator.uniform()
    v = gen.vector_field(16)
    expect = np.zeros(17)
    expect[1] = -1.0
    assert np.max(np.abs(v.coeffs - expect)) < 1e-13


def test_vector_field_single_atom_series():
    # v(z) = -z (1+z)/(1-z) = -z - 2 z^2 - 2 z^3 - ...
    gen = HerglotzGenerator(0.0, [(0.0, 1.0)])
    v = gen.vector_field(8)
    expect = np.array([0, -1, -2, -2, -2, -2, -2, -2, -2], dtype=complex)
    assert np.max(np.abs(v.coeffs - expect)) < 1e-14


def test_series_matches_pointwise():
    rng = np.random.default_rng(31)
    for _ in range(6):
        gen = rand_gen(rng)
        u = gen.series(64)
        v = gen.vector_field(64)
        for z in ring_grid((0.2, 0.45), 6):
            # geometric truncation tail of the atom expansions
            tail = 2 * gen.mass * abs(z) ** 64 / (1 - abs(z))
            assert abs(u(z) - gen.eval(z)) <= 1e-13 + tail
            assert abs(v(z) - gen.vector_field_at(z)) <= 1e-13 + tail


def test_positive_real_part_on_grid():
    rng = np.random.default_rng(37)
    grid = ring_grid((0.3, 0.6, 0.9, 0.95), 64)
    for _ in range(8):
        gen = rand_gen(rng)
        vals = gen.eval(grid)
        assert float(np.min(np.real(vals))) >= -1e-12


def test_beta_is_exact():
    gen = HerglotzGenerator(b=0.25, rho=[(1.0, 0.5), (2.0, 0.75)])
    assert gen.beta == 1.25 + 0.25j


def test_negative_weight_rejected():
    with pytest.raises(ValueError):
        HerglotzGenerator(0.0, [(0.0, -0.1)])
