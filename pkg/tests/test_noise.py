import math

import numpy as np
import pytest

from cubeineq.cube import CubeFunction, character, random_function
from cubeineq.noise import (
    MCEstimate,
    NoiseParameter,
    SampleBatch,
    exact_noise_expectation,
    mc_noise_expectation,
    symmetrized_tail_integral,
    verify_derivative_representation,
    verify_heat_representation,
)
from cubeineq.radial import RadialProfile
from cubeineq.rng import stream_generator


def test_noise_parameter_invariants():
    for t in (0.0, 0.05, 0.7, 3.0, 50.0):
        np_t = NoiseParameter(t)
        assert 0.5 <= np_t.p_plus <= 1.0
        assert abs(np_t.mean**2 + np_t.variance - 1.0) < 1e-15
    with pytest.raises(ValueError):
        NoiseParameter(-0.1)


def test_moment_identities_closed_form_and_sampled():
    t = 0.8
    par = NoiseParameter(t)
    rng = stream_generator(3)
    xi = np.where(rng.random(200_000) < par.p_plus, 1.0, -1.0)
    delta = (xi - par.mean) / math.sqrt(par.variance)
    se = 1.0 / math.sqrt(len(xi))
    assert abs(xi.mean() - math.exp(-t)) < 5 * se
    assert abs(xi.var() - (1 - math.exp(-2 * t))) < 5 * se
    assert abs(delta.mean()) < 5 * se
    assert abs((delta**2).mean() - 1.0) < 5 * se
    assert abs((delta * xi).mean() - math.sqrt(1 - math.exp(-2 * t))) < 5 * se


def test_character_noising():
    f = character(5, 0b01101)
    pair = exact_noise_expectation(f, 0.9)
    assert np.allclose(pair.spectral.coeffs, math.exp(-0.9 * 3) * f.coeffs)
    assert np.max(np.abs(pair.enumerative.coeffs - pair.spectral.coeffs)) < 1e-12


def test_zero_time_is_identity(rng):
    f = random_function(6, rng)
    pair = exact_noise_expectation(f, 0.0)
    assert np.max(np.abs(pair.spectral.coeffs - f.coeffs)) < 1e-15
    assert np.max(np.abs(pair.enumerative.coeffs - f.coeffs)) < 1e-12


def test_spectral_vs_enumerative_cross_check(rng):
    f = random_function(8, rng)
    assert verify_heat_representation(f, 0.7) < 1e-12


def test_enumeration_refused_above_cap():
    big = CubeFunction(15, np.zeros(1 << 15))
    with pytest.raises(ValueError):
        exact_noise_expectation(big, 0.5)
    with pytest.raises(ValueError):
        verify_derivative_representation(big, 0, 0.5)


def test_derivative_representation_characters():
    # j in A: closed-form moments make the two sides agree exactly
    f = character(6, 0b010110)
    for t in (0.3, 1.0):
        assert verify_derivative_representation(f, 1, t) < 1e-13
        # j not in A: both sides vanish
        assert verify_derivative_representation(f, 0, t) < 1e-15


def test_derivative_representation_random(rng):
    for t in (0.1, 1.0, 3.0):
        f = random_function(6, rng)
        assert verify_derivative_representation(f, 2, t) < 1e-12


def test_derivative_representation_grid(rng):
    for n in (2, 5, 8):
        f = random_function(n, rng)
        for t in (0.05, 0.3, 1.0, 2.0, 5.0):
            assert verify_derivative_representation(f, n - 1, t) < 1e-12


def test_derivative_rejects_t_zero(rng):
    with pytest.raises(ValueError):
        verify_derivative_representation(random_function(4, rng), 0, 0.0)


def test_mc_constant_has_zero_variance():
    f = CubeFunction(4, np.r_[3.0, np.zeros(15)])
    est = mc_noise_expectation(f, 0.5, SampleBatch(seed=1, count=500))
    assert est.value == 3.0
    assert est.stderr == 0.0


def test_mc_matches_spectral_truth():
    f = character(10, 0b1)
    est = mc_noise_expectation(f, 1.0, SampleBatch(seed=5, count=40_000))
    # at the all-ones base point the noised dictator averages to e^{-1}
    assert abs(est.value - math.exp(-1.0)) < 4 * est.stderr


def test_mc_radial_and_base_point():
    prof = RadialProfile(50, np.arange(51.0))
    batch = SampleBatch(seed=9, count=10_000, stream=3)
    at = np.ones(50)
    at[:10] = -1
    est = mc_noise_expectation(prof, 0.4, batch, at=at)
    # truth: E v(weight) with weight = stays_down + flips_up
    par = NoiseParameter(0.4)
    truth = 10 * par.p_plus + 40 * (1 - par.p_plus)
    assert abs(est.value - truth) < 4 * est.stderr


def test_mc_stderr_shrinks_like_root_count():
    f = character(10, 0b1)
    small = mc_noise_expectation(f, 1.0, SampleBatch(seed=4, count=4_000))
    large = mc_noise_expectation(f, 1.0, SampleBatch(seed=4, count=64_000))
    shrink = large.stderr / small.stderr
    assert 0.15 < shrink < 0.35  # expect 1/4 for a 16x batch


def test_mc_determinism():
    f = character(8, 0b11)
    a = mc_noise_expectation(f, 0.7, SampleBatch(seed=42, count=2048, stream=1))
    b = mc_noise_expectation(f, 0.7, SampleBatch(seed=42, count=2048, stream=1))
    assert a == b
    c = mc_noise_expectation(f, 0.7, SampleBatch(seed=42, count=2048, stream=2))
    assert a.value != c.value


def test_mc_zero_count_rejected():
    with pytest.raises(ValueError):
        SampleBatch(seed=1, count=0)


def test_distribution_invariance(rng):
    # for fixed xi, eps -> f(eps xi) is a rearrangement of f
    for n in (4, 7, 10):
        f = random_function(n, rng)
        vals = f.values()
        xi_mask = int(rng.integers(1 << n))
        shifted = vals[np.arange(1 << n) ^ xi_mask]
        assert np.array_equal(np.sort(shifted), np.sort(vals))


def test_tail_integral_limits():
    for r in (1.0, 1.5, 2.0, 4.0):
        assert abs(symmetrized_tail_integral(60.0, r) - 2.0 ** (1 - 1 / r)) < 1e-12
    for t in (0.1, 0.5, 2.0):
        assert abs(symmetrized_tail_integral(t, 1.0) - (1 - math.exp(-2 * t))) < 1e-15


def test_tail_integral_numeric_agreement():
    assert abs(
        symmetrized_tail_integral(0.5, 2.0)
        - symmetrized_tail_integral(0.5, 2.0, numeric=True)
    ) < 1e-12
    with pytest.raises(ValueError):
        symmetrized_tail_integral(0.5, 0.9)
