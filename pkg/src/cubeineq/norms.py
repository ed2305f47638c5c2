"""L^p and mixed vector-valued norms, and Rademacher sign averages.

Everything is taken with respect to the uniform probability measure on the
cube, so `lp_norm` is a p-th power *mean* and norms are nondecreasing in p.
Inner norms for vector-valued work are either the counting norm ell^q over
R components or L^q / L^infty over a second cube variable.

`rademacher_avg` computes (E_delta || sum_i delta_i g_i ||_{L^p(X)}^p)^{1/p}
by full enumeration of the 2^k sign patterns (k <= 20) or by seeded
Monte-Carlo with a reported standard error.

`radial_sup_rademacher_moment` is the O(n^2)-style reduction that makes the
quantity (E_delta [sup_zeta |sum_i delta_i D_i f(zeta)|]^p)^{1/p} exactly
computable for radial f up to n ~ 10^6: for a point zeta of weight d the
summand D_i f(zeta) equals alpha(d) = (v(d)-v(d+1))/2 on +1 coordinates and
beta(d) = (v(d)-v(d-1))/2 on -1 coordinates, so for a sign pattern with sum
s the supremum over zeta is a maximum of |alpha(d) s + (beta-alpha)(d) u|
over d and over the feasible (integer, parity-free after relaxing to the
endpoints) range of u = (signed delta-mass on the -1 set), which is linear
in u and hence attained at the range endpoints.  The delta-average then
collapses to a binomial sum over s.  For large n the binomial sum is
truncated where the total discarded probability mass is below `tail_mass`
(default 1e-20); below the window size the computation is exact.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .cube import BiCubeFunction, CubeFunction, VectorCubeFunction
from .radial import RadialProfile, binomial_weights
from .rng import stream_generator

MAX_EXACT_SIGNS = 20
_CHUNK = 1 << 12

try:
    import numba
    from numba import njit, prange

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


@dataclass(frozen=True)
class MixedNormSpec:
    """Outer exponent p with an inner norm: scalar, ell^q over components,
    or L^q over a second cube variable (q may be inf)."""

    p: float
    inner: str = "scalar"
    q: float | None = None

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"outer exponent must be >= 1, got {self.p}")
        if self.inner not in ("scalar", "lq", "Lq"):
            raise ValueError(f"unknown inner norm kind {self.inner!r}")
        if self.inner != "scalar" and not (self.q is not None and self.q >= 1):
            raise ValueError("inner norm needs an exponent q >= 1")

    @classmethod
    def scalar(cls, p: float) -> "MixedNormSpec":
        return cls(p=p)

    @classmethod
    def lq(cls, p: float, q: float) -> "MixedNormSpec":
        return cls(p=p, inner="lq", q=q)

    @classmethod
    def cube(cls, p: float, q: float) -> "MixedNormSpec":
        return cls(p=p, inner="Lq", q=q)


def _power_mean(absvals: np.ndarray, p: float, axis=-1) -> np.ndarray:
    if np.isinf(p):
        return absvals.max(axis=axis)
    return (absvals**p).mean(axis=axis) ** (1.0 / p)


def lp_norm(f, p: float) -> float:
    """((1/2^n) sum |f|^p)^{1/p}; p = inf gives the maximum.

    Radial profiles are averaged with binomial weights, which is the same
    measure pushed to the weight variable.
    """
    if not p >= 1:
        raise ValueError(f"exponent must be in [1, inf], got {p}")
    if isinstance(f, CubeFunction):
        return float(_power_mean(np.abs(f.values()), p))
    if isinstance(f, RadialProfile):
        a = np.abs(f.v)
        if np.isinf(p):
            return float(a.max())
        return float((binomial_weights(f.n) @ a**p) ** (1.0 / p))
    raise TypeError(f"unsupported operand {type(f).__name__}")


def _inner_then_outer(vals: np.ndarray, spec: MixedNormSpec) -> np.ndarray:
    """Reduce trailing axes of a (..., inner?, points)-shaped value block."""
    if spec.inner == "scalar":
        return _power_mean(np.abs(vals), spec.p)
    if spec.inner == "lq":
        # vals shape (..., R, points): counting ell^q over the R axis
        if np.isinf(spec.q):
            inner = np.abs(vals).max(axis=-2)
        else:
            inner = (np.abs(vals) ** spec.q).sum(axis=-2) ** (1.0 / spec.q)
        return _power_mean(inner, spec.p)
    # "Lq": vals shape (..., points_eps, points_delta): mean in the second cube
    inner = _power_mean(np.abs(vals), spec.q)
    return _power_mean(inner, spec.p)


def _operand_values(g) -> np.ndarray:
    if isinstance(g, CubeFunction):
        return g.values()
    if isinstance(g, VectorCubeFunction):
        return g.values()
    if isinstance(g, BiCubeFunction):
        return g.values
    raise TypeError(f"unsupported operand {type(g).__name__}")


def _spec_matches(g, spec: MixedNormSpec) -> bool:
    if isinstance(g, CubeFunction):
        return spec.inner == "scalar"
    if isinstance(g, VectorCubeFunction):
        return spec.inner == "lq"
    if isinstance(g, BiCubeFunction):
        return spec.inner == "Lq"
    return False


def mixed_norm(F, spec: MixedNormSpec) -> float:
    """Outer L^p over the cube of the inner norm declared by `spec`."""
    if not _spec_matches(F, spec):
        raise ValueError(f"norm spec {spec} does not match operand {type(F).__name__}")
    return float(_inner_then_outer(_operand_values(F), spec))


@dataclass(frozen=True)
class RademacherConfig:
    """Exact enumeration or seeded Monte-Carlo for sign averages."""

    mode: str = "exact"
    samples: int = 4096
    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        if self.mode not in ("exact", "monte-carlo"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "monte-carlo" and self.samples <= 0:
            raise ValueError("monte-carlo needs a positive sample count")


@dataclass(frozen=True)
class RademacherResult:
    value: float
    stderr: float = 0.0

    def __float__(self):
        return self.value


def _sign_chunk(indices: np.ndarray, k: int) -> np.ndarray:
    return 1.0 - 2.0 * ((indices[:, None] >> np.arange(k)) & 1)


def rademacher_avg(operands, p: float, spec: MixedNormSpec | None = None,
                   cfg: RademacherConfig | None = None) -> RademacherResult:
    """(E_delta || sum_i delta_i g_i ||_{L^p(X)}^p)^{1/p} over uniform signs.

    All operands must share their shape and match `spec` (default: scalar).
    Exact mode enumerates the 2^k patterns and is capped at k = 20; the
    Monte-Carlo mode reports the delta-method standard error of the final
    p-th root.  p = inf takes the maximum over patterns.
    """
    operands = list(operands)
    if not operands:
        raise ValueError("need at least one operand")
    spec = spec if spec is not None else MixedNormSpec.scalar(p)
    if spec.p != p:
        raise ValueError("spec outer exponent must agree with p")
    cfg = cfg if cfg is not None else RademacherConfig()
    for g in operands:
        if not _spec_matches(g, spec):
            raise ValueError(f"operand {type(g).__name__} does not match spec {spec}")
    k = len(operands)
    vals = np.stack([_operand_values(g) for g in operands])  # (k, ...)

    if cfg.mode == "exact":
        if k > MAX_EXACT_SIGNS:
            raise ValueError(f"exact mode capped at {MAX_EXACT_SIGNS} sign variables, got {k}")
        total = 1 << k
        norms = np.empty(total)
        for lo in range(0, total, _CHUNK):
            idx = np.arange(lo, min(lo + _CHUNK, total))
            signs = _sign_chunk(idx, k)
            block = np.tensordot(signs, vals, axes=(1, 0))
            norms[idx] = _inner_then_outer(block, spec)
        if np.isinf(p):
            return RademacherResult(float(norms.max()))
        return RademacherResult(float(((norms**p).mean()) ** (1.0 / p)))

    rng = stream_generator(cfg.seed, cfg.stream)
    norms = np.empty(cfg.samples)
    done = 0
    while done < cfg.samples:
        m = min(_CHUNK, cfg.samples - done)
        signs = 1.0 - 2.0 * rng.integers(0, 2, size=(m, k))
        block = np.tensordot(signs, vals, axes=(1, 0))
        norms[done:done + m] = _inner_then_outer(block, spec)
        done += m
    if np.isinf(p):
        return RademacherResult(float(norms.max()))
    powers = norms**p
    mean = powers.mean()
    se_mean = powers.std(ddof=1) / math.sqrt(cfg.samples) if cfg.samples > 1 else 0.0
    value = mean ** (1.0 / p)
    stderr = se_mean * value / (p * mean) if mean > 0 else se_mean
    return RademacherResult(float(value), float(stderr))


# -- radial sup-Rademacher reduction ------------------------------------------


if _HAVE_NUMBA:
    @njit(parallel=True, cache=False)
    def _sup_kernel(alpha, beta, n, svals):  # pragma: no cover - jitted
        out = np.empty(svals.shape[0])
        for si in prange(svals.shape[0]):
            s = svals[si]
            best = 0.0
            for d in range(n + 1):
                a = alpha[d]
                g = beta[d] - a
                umin = d - n + s
                if -d > umin:
                    umin = float(-d)
                umax = n + s - d
                if d < umax:
                    umax = float(d)
                v1 = abs(a * s + g * umin)
                v2 = abs(a * s + g * umax)
                if v1 > best:
                    best = v1
                if v2 > best:
                    best = v2
            out[si] = best
        return out


def _sup_kernel_numpy(alpha, beta, n, svals):
    d = np.arange(n + 1, dtype=np.float64)
    gamma = beta - alpha
    out = np.empty(svals.shape[0])
    for i, s in enumerate(svals):
        umin = np.maximum(-d, d - n + s)
        umax = np.minimum(d, n + s - d)
        base = alpha * s
        out[i] = max(np.abs(base + gamma * umin).max(),
                     np.abs(base + gamma * umax).max())
    return out


def radial_derivative_profiles(profile: RadialProfile) -> tuple[np.ndarray, np.ndarray]:
    """alpha(d), beta(d): the two values D_i f takes at a weight-d point.

    alpha applies on +1 coordinates, beta on -1 coordinates; the unused
    endpoints alpha(n) and beta(0) are set to zero (they always cancel).
    """
    v = profile.v
    n = profile.n
    alpha = np.zeros(n + 1)
    beta = np.zeros(n + 1)
    alpha[:n] = (v[:n] - v[1:]) / 2.0
    beta[1:] = (v[1:] - v[:n]) / 2.0
    return alpha, beta


def sup_gradient_sum_by_sign_total(profile: RadialProfile, svals: np.ndarray) -> np.ndarray:
    """sup_zeta |sum_i delta_i D_i f(zeta)| for each sign total s in `svals`."""
    alpha, beta = radial_derivative_profiles(profile)
    svals = np.asarray(svals, dtype=np.float64)
    if _HAVE_NUMBA:
        threads = os.environ.get("CUBEINEQ_THREADS")
        if threads:
            try:
                numba.set_num_threads(max(1, int(threads)))
            except ValueError:
                pass
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # threading-layer fallback chatter
            return _sup_kernel(alpha, beta, profile.n, svals)
    return _sup_kernel_numpy(alpha, beta, profile.n, svals)


def sign_total_window(n: int, tail_mass: float = 1e-20) -> np.ndarray:
    """Sign totals s (parity of n) covering all but `tail_mass` of the mass."""
    half_width = int(math.ceil(math.sqrt(2.0 * n * math.log(2.0 / tail_mass))))
    half_width = min(half_width, n)
    lo = -half_width if (half_width % 2) == (n % 2) else -half_width + 1
    return np.arange(lo, half_width + 1, 2, dtype=np.int64)


def radial_sup_rademacher_moment(profile: RadialProfile, p: float,
                                 tail_mass: float = 1e-20) -> float:
    """(E_delta [sup_zeta |sum_i delta_i D_i f(zeta)|]^p)^{1/p} for radial f.

    Exact up to the documented binomial-tail truncation; p = inf returns the
    overall supremum.  Cost is O(n * window) with window ~ sqrt(n log(1/tail)).
    """
    if not p >= 1:
        raise ValueError(f"exponent must be in [1, inf], got {p}")
    n = profile.n
    svals = sign_total_window(n, tail_mass)
    sups = sup_gradient_sum_by_sign_total(profile, svals)
    if np.isinf(p):
        return float(sups.max())
    from scipy.stats import binom

    pmf = binom.pmf((svals + n) // 2, n, 0.5)
    return float((pmf @ sups**p) ** (1.0 / p))
