import math

import numpy as np
import pytest

from physec.channel import (
    ChannelParams,
    eve_correlation_from_distance,
    expected_reciprocity,
    generate_trace,
    pearson_correlation,
)
from physec.errors import DegenerateInputError, ParameterError


def test_params_validation():
    with pytest.raises(ParameterError):
        ChannelParams(temporal_correlation=1.1)
    with pytest.raises(ParameterError):
        ChannelParams(sampling_delay=-1.0)
    with pytest.raises(ParameterError):
        ChannelParams(snr_db=float("nan"))
    with pytest.raises(ParameterError):
        ChannelParams(snr_db=-math.inf)
    with pytest.raises(ParameterError):
        ChannelParams(eve_correlation=1.5)
    with pytest.raises(ParameterError):
        ChannelParams(n_probes=0)


def test_determinism_bit_for_bit():
    p = ChannelParams(n_probes=500, rng_seed=123)
    t1, t2 = generate_trace(p), generate_trace(p)
    for a, b in ((t1.x_a, t2.x_a), (t1.x_b, t2.x_b), (t1.x_e, t2.x_e)):
        assert np.array_equal(a, b)
    t3 = generate_trace(ChannelParams(n_probes=500, rng_seed=124))
    assert not np.array_equal(t1.x_b, t3.x_b)


def test_perfect_reciprocity_limit():
    # tau = 0 with noise off: both parties sample the identical process
    p = ChannelParams(sampling_delay=0.0, snr_db=math.inf, n_probes=1000, rng_seed=5)
    tr = generate_trace(p)
    assert np.array_equal(tr.x_a, tr.x_b)
    assert np.all(np.isfinite(tr.x_a))


def test_timestamp_offset():
    p = ChannelParams(sampling_delay=2.5, n_probes=50, rng_seed=0)
    tr = generate_trace(p)
    assert np.allclose(tr.t_a - tr.t_b, 2.5)
    assert np.array_equal(tr.t_b, np.arange(50.0))


def test_reciprocity_calibration_20db():
    p = ChannelParams(
        temporal_correlation=0.99,
        sampling_delay=1.0,
        snr_db=20.0,
        n_probes=100_000,
        rng_seed=1,
    )
    tr = generate_trace(p)
    r = pearson_correlation(tr.x_a, tr.x_b)
    assert abs(r - 0.99 / 1.01) < 0.01
    assert abs(expected_reciprocity(p) - 0.99 / 1.01) < 1e-12


def test_expected_reciprocity_noise_off():
    p = ChannelParams(temporal_correlation=0.9, sampling_delay=3.0, snr_db=math.inf)
    assert expected_reciprocity(p) == pytest.approx(0.9**3)


def test_eve_decorrelated_when_rho_zero():
    # weakly autocorrelated traces keep the CLT tolerance meaningful
    for seed in range(5):
        p = ChannelParams(
            temporal_correlation=0.3,
            snr_db=math.inf,
            eve_correlation=0.0,
            n_probes=100_000,
            rng_seed=seed,
        )
        tr = generate_trace(p)
        assert abs(pearson_correlation(tr.x_e, tr.x_b)) < 0.01


def test_eve_decorrelation_three_sigma_bound():
    n = 10_000
    for rho_t in (0.0, 0.3):
        for seed in range(5):
            p = ChannelParams(
                temporal_correlation=rho_t,
                snr_db=math.inf,
                eve_correlation=0.0,
                n_probes=n,
                rng_seed=seed,
            )
            tr = generate_trace(p)
            assert abs(pearson_correlation(tr.x_e, tr.x_b)) < 3 / math.sqrt(n)


def test_eve_decorrelation_slow_fading_mean():
    # at rho_t = 0.99 a single-trace estimate is noisy; the seed-averaged
    # correlation still has to vanish
    cs = []
    for seed in range(50):
        p = ChannelParams(
            temporal_correlation=0.99,
            snr_db=math.inf,
            eve_correlation=0.0,
            n_probes=100_000,
            rng_seed=seed,
        )
        tr = generate_trace(p)
        cs.append(pearson_correlation(tr.x_e, tr.x_b))
    assert abs(float(np.mean(cs))) < 0.01


def test_eve_correlation_tracks_rho():
    p = ChannelParams(
        temporal_correlation=0.9,
        snr_db=math.inf,
        eve_correlation=0.8,
        n_probes=100_000,
        rng_seed=3,
    )
    tr = generate_trace(p)
    assert pearson_correlation(tr.x_e, tr.x_b) == pytest.approx(0.8, abs=0.02)


def test_reciprocity_monotone_in_snr():
    snrs = (30.0, 20.0, 10.0, 0.0)
    means = []
    for snr in snrs:
        rs = []
        for seed in range(50):
            p = ChannelParams(snr_db=snr, n_probes=2000, rng_seed=seed)
            tr = generate_trace(p)
            rs.append(pearson_correlation(tr.x_a, tr.x_b))
        means.append(float(np.mean(rs)))
    assert means[0] >= means[1] >= means[2] >= means[3]


def test_fading_process_stationary_unit_variance():
    for seed in range(10):
        p = ChannelParams(
            temporal_correlation=0.99,
            sampling_delay=0.0,
            snr_db=math.inf,
            n_probes=100_000,
            rng_seed=seed,
        )
        tr = generate_trace(p)
        assert 0.9 <= float(tr.x_b.var()) <= 1.1


def test_rho_one_gives_constant_process():
    p = ChannelParams(
        temporal_correlation=1.0, sampling_delay=0.5, snr_db=math.inf, n_probes=200
    )
    tr = generate_trace(p)
    assert np.allclose(tr.x_b, tr.x_b[0])
    assert np.allclose(tr.x_a, tr.x_b)


def test_rho_zero_gives_white_process():
    p = ChannelParams(
        temporal_correlation=0.0, sampling_delay=0.0, snr_db=math.inf,
        n_probes=50_000, rng_seed=2,
    )
    tr = generate_trace(p)
    lag1 = pearson_correlation(tr.x_b[1:], tr.x_b[:-1])
    assert abs(lag1) < 0.02


def test_pearson_examples():
    assert pearson_correlation([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)
    assert pearson_correlation([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    assert pearson_correlation([1, 2, 3, 4], [1, 2, 4, 3]) == pytest.approx(0.8)


def test_pearson_degenerate():
    with pytest.raises(DegenerateInputError):
        pearson_correlation([1, 1, 1], [1, 2, 3])
    with pytest.raises(DegenerateInputError):
        pearson_correlation([1], [2])
    with pytest.raises(ParameterError):
        pearson_correlation([1, 2], [1, 2, 3])


def test_eve_correlation_from_distance():
    assert eve_correlation_from_distance(0.0, 0.125) == pytest.approx(1.0)
    # J0(pi): the half-wavelength spacing leaves residual anticorrelation
    assert eve_correlation_from_distance(0.0625, 0.125) == pytest.approx(
        -0.304242, abs=1e-5
    )
    with pytest.raises(ParameterError):
        eve_correlation_from_distance(-1.0, 0.125)
    with pytest.raises(ParameterError):
        eve_correlation_from_distance(1.0, 0.0)
