"""Reciprocal wireless channel simulator for key-generation studies.

Models the three quantities a secret-key-generation experiment needs:
Bob's probe measurements of the Alice->Bob channel, Alice's delayed
measurements of the reciprocal Bob->Alice channel, and an eavesdropper's
spatially decorrelated observations, all driven by one stationary
Gauss-Markov fading process.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter
from scipy.special import j0

from .errors import DegenerateInputError, ParameterError


@dataclass(frozen=True)
class ChannelParams:
    """Physical parameters of one probing session.

    temporal_correlation: one-step autocorrelation rho_t of the fading
        process, in [0, 1]. One step is one probing interval.
    sampling_delay: tau, the Alice->Bob half-round offset in probing-interval
        units. Alice measures the channel tau units after Bob.
    snr_db: ratio of fading variance (unit) to measurement noise variance,
        in dB. +inf switches noise off.
    eve_correlation: rho_E, correlation between the eavesdropper's channel
        and the legitimate channel, in [-1, 1]. 0 models an eavesdropper
        beyond spatial decorrelation distance.
    n_probes: number of probing rounds.
    rng_seed: seed for the simulation; identical params reproduce identical
        traces bit for bit.
    """

    temporal_correlation: float = 0.99
    sampling_delay: float = 1.0
    snr_db: float = 30.0
    eve_correlation: float = 0.0
    n_probes: int = 600
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.temporal_correlation <= 1.0:
            raise ParameterError("temporal_correlation must be in [0, 1]")
        if self.sampling_delay < 0.0 or not math.isfinite(self.sampling_delay):
            raise ParameterError("sampling_delay must be finite and >= 0")
        if math.isnan(self.snr_db) or self.snr_db == -math.inf:
            raise ParameterError("snr_db must be a real value or +inf (noise off)")
        if not -1.0 <= self.eve_correlation <= 1.0:
            raise ParameterError("eve_correlation must be in [-1, 1]")
        if self.n_probes < 1:
            raise ParameterError("n_probes must be >= 1")

    @property
    def noise_std(self) -> float:
        if self.snr_db == math.inf:
            return 0.0
        return 10.0 ** (-self.snr_db / 20.0)


@dataclass(frozen=True)
class ChannelTrace:
    """One probing session: measurement and timestamp vectors.

    x_b[i] is Bob's measurement at time t_b[i] = i, x_a[i] is Alice's at
    t_a[i] = i + tau, and x_e[i] is the eavesdropper's at t_b[i].
    """

    x_a: np.ndarray
    x_b: np.ndarray
    x_e: np.ndarray
    t_a: np.ndarray
    t_b: np.ndarray
    params: ChannelParams


def _gauss_markov_at(times: np.ndarray, rho: float, rng) -> np.ndarray:
    """Sample a zero-mean unit-variance stationary Gauss-Markov process.

    Exact at arbitrary (sorted) sample times: conditional on h(t1),
    h(t2) ~ N(rho^(t2-t1) h(t1), 1 - rho^(2(t2-t1))). Repeated times get
    identical values. rho=0 gives white samples (0^0 = 1 keeps duplicates
    coherent), rho=1 a constant process.
    """
    n = times.size
    z = rng.standard_normal(n)
    if n == 1:
        return z
    dt = np.diff(times)
    phi = np.power(rho, dt)
    sigma = np.sqrt(np.maximum(0.0, 1.0 - phi * phi))
    if np.all(phi == phi[0]):
        # constant probe spacing: the recursion is a first-order IIR filter
        drive = np.empty(n)
        drive[0] = z[0]
        drive[1:] = sigma * z[1:]
        return lfilter([1.0], [1.0, -phi[0]], drive)
    out = np.empty(n)
    out[0] = z[0]
    for i in range(1, n):
        out[i] = phi[i - 1] * out[i - 1] + sigma[i - 1] * z[i]
    return out


def generate_trace(params: ChannelParams) -> ChannelTrace:
    """Simulate one probing session.

    Bob samples the fading process h at integer times, Alice at the same
    times shifted by tau, so corr(h at Bob's time, h at Alice's) is
    rho_t^tau before noise. The eavesdropper sees
    rho_E h + sqrt(1 - rho_E^2) g with g an independent copy of the fading
    process, plus her own measurement noise.
    """
    n = params.n_probes
    rho = params.temporal_correlation
    tau = params.sampling_delay

    seeds = np.random.SeedSequence(params.rng_seed).spawn(5)
    rng_h, rng_g, rng_wa, rng_wb, rng_we = (np.random.default_rng(s) for s in seeds)

    t_b = np.arange(n, dtype=float)
    t_a = t_b + tau

    union = np.union1d(t_b, t_a)
    h_union = _gauss_markov_at(union, rho, rng_h)
    idx_b = np.searchsorted(union, t_b)
    idx_a = np.searchsorted(union, t_a)
    h_b = h_union[idx_b]
    h_a = h_union[idx_a]

    g = _gauss_markov_at(t_b, rho, rng_g)

    sw = params.noise_std
    x_a = h_a + sw * rng_wa.standard_normal(n)
    x_b = h_b + sw * rng_wb.standard_normal(n)
    rho_e = params.eve_correlation
    x_e = rho_e * h_b + math.sqrt(1.0 - rho_e**2) * g + sw * rng_we.standard_normal(n)

    return ChannelTrace(x_a=x_a, x_b=x_b, x_e=x_e, t_a=t_a, t_b=t_b, params=params)


def pearson_correlation(u, v) -> float:
    """Sample Pearson correlation of two equal-length vectors.

    Raises DegenerateInputError when either input has zero variance or the
    vectors are too short to define a correlation.
    """
    ua = np.asarray(u, dtype=float)
    va = np.asarray(v, dtype=float)
    if ua.ndim != 1 or va.ndim != 1 or ua.size != va.size:
        raise ParameterError("inputs must be 1-D vectors of equal length")
    if ua.size < 2:
        raise DegenerateInputError("need at least 2 samples for a correlation")
    du = ua - ua.mean()
    dv = va - va.mean()
    denom = math.sqrt(float(du @ du) * float(dv @ dv))
    if denom == 0.0:
        raise DegenerateInputError("zero-variance input has no correlation")
    r = float(du @ dv) / denom
    return max(-1.0, min(1.0, r))


def expected_reciprocity(params: ChannelParams) -> float:
    """Analytic corr(x_a, x_b): rho_t^tau / (1 + noise variance)."""
    noise_var = 0.0 if params.snr_db == math.inf else 10.0 ** (-params.snr_db / 10.0)
    return params.temporal_correlation**params.sampling_delay / (1.0 + noise_var)


def eve_correlation_from_distance(distance: float, wavelength: float) -> float:
    """Optional Jakes/Clarke spatial model: rho_E = J0(2 pi d / lambda).

    Note the first zero of J0 sits near d = 0.38 lambda, so the common
    half-wavelength rule of thumb actually leaves a residual correlation of
    about -0.3; pass eve_correlation directly when a specific value matters.
    """
    if distance < 0 or wavelength <= 0:
        raise ParameterError("need distance >= 0 and wavelength > 0")
    return float(j0(2.0 * math.pi * distance / wavelength))
