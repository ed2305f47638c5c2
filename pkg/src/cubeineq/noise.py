"""The biased noise vector and the probabilistic heat-semigroup formulas.

For t >= 0 let xi(t) have i.i.d. +-1 coordinates with P{xi_i = 1} =
(1 + e^{-t})/2, so E xi_i = e^{-t} and Var xi_i = 1 - e^{-2t}, and let
delta_i(t) = (xi_i - e^{-t}) / sqrt(1 - e^{-2t}) be its standardization.
Two identities are verified numerically against full enumeration over xi:

    exp(-tL) f (eps)      =  E_xi[ f(eps * xi(t)) ],
    exp(-tL) D_j f (eps)  =  e^{-t} (1-e^{-2t})^{-1/2} E_xi[ delta_j(t) f(eps*xi(t)) ],

together with the symmetrized tail integral

    int_0^inf P{|xi_j(t) - xi_j'(t)| > s}^{1/r} ds = 2^{1-1/r} (1-e^{-2t})^{1/r}.

Enumeration over the 2^n noise outcomes is exact and is refused above n = 14;
the Monte-Carlo estimator covers larger instances with a reported standard
error and (seed, stream)-deterministic sampling.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cube import CubeFunction, discrete_derivative, heat
from .radial import RadialProfile
from .rng import stream_generator

MAX_ENUM_N = 14
_XOR_CACHE_N = 10


@dataclass(frozen=True)
class NoiseParameter:
    """Time parameter of the biased noise vector xi(t)."""

    t: float

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"noise time must be >= 0, got {self.t}")

    @property
    def p_plus(self) -> float:
        return (1.0 + math.exp(-self.t)) / 2.0

    @property
    def mean(self) -> float:
        return math.exp(-self.t)

    @property
    def variance(self) -> float:
        return 1.0 - math.exp(-2.0 * self.t)


@dataclass(frozen=True)
class SampleBatch:
    """Reproducible Monte-Carlo batch: (seed, stream, count) fixes the samples."""

    seed: int
    count: int
    stream: int = 0

    def __post_init__(self):
        if self.count <= 0:
            raise ValueError("sample count must be positive")

    def generator(self) -> np.random.Generator:
        return stream_generator(self.seed, self.stream)


def _as_noise(t) -> NoiseParameter:
    return t if isinstance(t, NoiseParameter) else NoiseParameter(float(t))


@functools.lru_cache(maxsize=8)
def _xor_table(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return np.bitwise_xor.outer(idx, idx)


def _outcome_weights(n: int, noise: NoiseParameter) -> np.ndarray:
    """P(xi = outcome b) where bit i of b marks xi_i = -1."""
    pc = np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.float64)
    pp = noise.p_plus
    return pp ** (n - pc) * (1.0 - pp) ** pc


def _enumerated_noise_values(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """out[x] = sum_b weights[b] * values[x xor b], by direct summation."""
    n = values.shape[0].bit_length() - 1
    if n <= _XOR_CACHE_N:
        return (values[_xor_table(n)] * weights).sum(axis=1)
    out = np.zeros_like(values)
    idx = np.arange(1 << n)
    for b in range(1 << n):
        out += weights[b] * values[idx ^ b]
    return out


class NoisePair(NamedTuple):
    """Spectral and enumerative computations of the same noise expectation."""

    spectral: CubeFunction
    enumerative: CubeFunction


def exact_noise_expectation(f: CubeFunction, t) -> NoisePair:
    """E_xi[f(eps xi(t))] two independent ways, for cross-checking.

    The spectral path multiplies level k by exp(-tk); the enumerative path
    sums the 2^n outcomes of xi with product weights (refused for n > 14).
    """
    noise = _as_noise(t)
    if f.n > MAX_ENUM_N:
        raise ValueError(f"enumerative path refused for n > {MAX_ENUM_N}")
    spectral = heat(f, noise.t)
    weights = _outcome_weights(f.n, noise)
    enumerated = _enumerated_noise_values(f.values(), weights)
    return NoisePair(spectral, CubeFunction.from_values(enumerated))


def verify_heat_representation(f: CubeFunction, t) -> float:
    """Max pointwise gap between exp(-tL)f and the enumerated noise average."""
    pair = exact_noise_expectation(f, t)
    return float(np.max(np.abs(pair.spectral.values() - pair.enumerative.values())))


def verify_derivative_representation(f: CubeFunction, j: int, t) -> float:
    """Max pointwise gap in the derivative representation at coordinate j.

    Both sides of  exp(-tL) D_j f = e^{-t}(1-e^{-2t})^{-1/2} E[delta_j f(eps xi)]
    are computed exactly (the right side by enumeration over xi); t = 0 is
    rejected because the standardization degenerates.
    """
    noise = _as_noise(t)
    if noise.t <= 0:
        raise ValueError("derivative representation needs t > 0")
    if f.n > MAX_ENUM_N:
        raise ValueError(f"enumerative path refused for n > {MAX_ENUM_N}")
    if not 0 <= j < f.n:
        raise ValueError(f"coordinate {j} out of range")
    lhs = heat(discrete_derivative(f, j), noise.t).values()

    e = noise.mean
    sd = math.sqrt(noise.variance)
    weights = _outcome_weights(f.n, noise)
    b = np.arange(1 << f.n)
    xi_j = 1.0 - 2.0 * ((b >> j) & 1)
    rhs = _enumerated_noise_values(f.values(), weights * (xi_j - e) / sd)
    rhs *= e / sd
    return float(np.max(np.abs(lhs - rhs)))


class MCEstimate(NamedTuple):
    value: float
    stderr: float
    count: int


def mc_noise_expectation(f, t, batch: SampleBatch, at=None) -> MCEstimate:
    """Monte-Carlo estimate of E_xi[f(eps xi(t))] at the base point `at`.

    `f` may be a CubeFunction or a RadialProfile; `at` defaults to the
    all-ones point.  Unbiased, with the sample standard error reported;
    identical (seed, stream, count) gives bit-identical output.
    """
    noise = _as_noise(t)
    rng = batch.generator()
    if isinstance(f, RadialProfile):
        n = f.n
        base_down = 0 if at is None else int(np.sum(np.asarray(at) == -1))
        # weight of eps*xi = (flips among +1 coords) + (non-flips among -1 coords)
        flips_up = rng.binomial(n - base_down, 1.0 - noise.p_plus, size=batch.count)
        stays_down = rng.binomial(base_down, noise.p_plus, size=batch.count)
        samples = f.v[flips_up + stays_down]
    elif isinstance(f, CubeFunction):
        n = f.n
        vals = f.values()
        base = 0 if at is None else _sign_index(at)
        flip_bits = rng.random((batch.count, n)) < (1.0 - noise.p_plus)
        masks = flip_bits @ (1 << np.arange(n))
        samples = vals[np.bitwise_xor(masks.astype(np.int64), base)]
    else:
        raise TypeError(f"unsupported operand {type(f).__name__}")
    value = float(samples.mean())
    stderr = float(samples.std(ddof=1) / math.sqrt(batch.count)) if batch.count > 1 else 0.0
    return MCEstimate(value, stderr, batch.count)


def _sign_index(at) -> int:
    at = np.asarray(at)
    return int(((at == -1) @ (1 << np.arange(len(at)))))


def symmetrized_tail_integral(t: float, r: float, numeric: bool = False) -> float:
    """int_0^inf P{|xi_j(t) - xi_j'(t)| > s}^{1/r} ds for an independent copy xi'.

    The difference is 0 or +-2 with P{xi != xi'} = (1 - e^{-2t})/2, so the
    closed form is 2^{1-1/r} (1-e^{-2t})^{1/r}.  With numeric=True the same
    quantity is integrated over s in [0, 2) on a fine midpoint grid instead.
    """
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    if t < 0:
        raise ValueError(f"need t >= 0, got {t}")
    p_diff = (1.0 - math.exp(-2.0 * t)) / 2.0
    if not numeric:
        return 2.0 ** (1.0 - 1.0 / r) * (1.0 - math.exp(-2.0 * t)) ** (1.0 / r)
    # midpoint rule on [0, 4]; the tail probability is p_diff on [0, 2), 0 beyond
    grid = np.linspace(0.0, 4.0, 4001)
    mid = (grid[:-1] + grid[1:]) / 2.0
    tail = np.where(mid < 2.0, p_diff, 0.0)
    return float(np.sum(tail ** (1.0 / r) * np.diff(grid)))
