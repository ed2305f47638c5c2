"""Walsh-Fourier representation of functions on the sign cube {-1,1}^n.

A function f on the cube is a multilinear polynomial

    f(eps) = sum_A  fhat(A) * prod_{i in A} eps_i,

indexed by subsets A of {0,..,n-1}.  We store the coefficient vector fhat
over subset bitmasks (bit i of the mask <-> coordinate i, little-endian)
and realize every operator of interest as a spectral multiplier acting on
level |A|:

    derivative D_i      keeps exactly the terms with i in A,
    Laplacian  L        multiplies level k by k          (L = sum_i D_i),
    heat       P_t      multiplies level k by exp(-t*k),
    frac_power L^{-a}   multiplies level k by k^{-a}, kills the mean,
    Riesz      R_i      = D_i L^{-1/2}.

Point values use the index convention eps_i(x) = +1 if bit i of x is 0 and
-1 otherwise, so the bitmask of -1 coordinates is the point index and the
Hamming weight of x equals dist(eps, all-ones).

The sign convention is fixed once: L is the *positive* operator with
eigenvalue |A| on the character of A, and the heat semigroup is exp(-t*L).
"""

from __future__ import annotations

import json

import numpy as np

MAX_DENSE_N = 24


def _check_dense_n(n: int) -> None:
    if not 1 <= n <= MAX_DENSE_N:
        raise ValueError(f"dense cube dimension must be in [1, {MAX_DENSE_N}], got {n}")


def walsh_transform(a: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform, out[k] = sum_x a[x]*(-1)^|x&k|.

    Length must be a power of two; cost O(n 2^n).  Self-inverse up to the
    factor 2^n.
    """
    a = np.array(a, dtype=np.float64)
    m = a.shape[0]
    if m == 0 or m & (m - 1):
        raise ValueError(f"length must be a power of two, got {m}")
    h = 1
    while h < m:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :] + a[:, 1, :]
        bot = a[:, 0, :] - a[:, 1, :]
        a[:, 0, :] = top
        a[:, 1, :] = bot
        a = a.reshape(m)
        h *= 2
    return a


def levels(n: int) -> np.ndarray:
    """|A| for every subset bitmask A of {0..n-1}, in index order."""
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int64)


def signs_to_index(eta: np.ndarray) -> int:
    """Bitmask of the -1 coordinates of a sign vector."""
    eta = np.asarray(eta)
    idx = 0
    for i, e in enumerate(eta):
        if e == -1:
            idx |= 1 << i
        elif e != 1:
            raise ValueError("sign vector entries must be +-1")
    return idx


def index_to_signs(x: int, n: int) -> np.ndarray:
    bits = (x >> np.arange(n)) & 1
    return 1 - 2 * bits


class CubeFunction:
    """Real-valued function on {-1,1}^n stored by Walsh coefficients.

    `coeffs[A]` is the coefficient of prod_{i in A} eps_i for the subset
    bitmask A.  `mean_annihilated` flags that a negative fractional power
    of L silently dropped a nonzero mean component.
    """

    __slots__ = ("n", "coeffs", "mean_annihilated")

    def __init__(self, n: int, coeffs, mean_annihilated: bool = False):
        _check_dense_n(n)
        coeffs = np.asarray(coeffs, dtype=np.float64)
        if coeffs.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} coefficients for n={n}, got {coeffs.shape}")
        self.n = n
        self.coeffs = coeffs
        self.mean_annihilated = mean_annihilated

    # -- construction / evaluation ------------------------------------------

    @classmethod
    def from_values(cls, values) -> "CubeFunction":
        values = np.asarray(values, dtype=np.float64)
        m = values.shape[0]
        if m == 0 or m & (m - 1):
            raise ValueError(f"length must be a power of two, got {m}")
        n = m.bit_length() - 1
        return cls(n, walsh_transform(values) / m)

    def values(self) -> np.ndarray:
        """Synthesize point values; exact inverse of `from_values`."""
        return walsh_transform(self.coeffs)

    def __call__(self, eps) -> float:
        return float(self.values()[signs_to_index(eps)])

    @property
    def mean(self) -> float:
        return float(self.coeffs[0])

    # -- arithmetic (coefficientwise linear, pointwise product) -------------

    def __add__(self, other):
        if isinstance(other, CubeFunction):
            self._check_same(other)
            return CubeFunction(self.n, self.coeffs + other.coeffs)
        out = self.coeffs.copy()
        out[0] += float(other)
        return CubeFunction(self.n, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, CubeFunction):
            self._check_same(other)
            return CubeFunction.from_values(self.values() * other.values())
        return CubeFunction(self.n, self.coeffs * float(other))

    __rmul__ = __mul__

    def _check_same(self, other: "CubeFunction") -> None:
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    # -- file format ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {"n": self.n, "basis": "walsh-bitmask-le", "coeffs": self.coeffs.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "CubeFunction":
        if d.get("basis") != "walsh-bitmask-le":
            raise ValueError(f"unsupported basis {d.get('basis')!r}")
        return cls(int(d["n"]), np.asarray(d["coeffs"], dtype=np.float64))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "CubeFunction":
        return cls.from_dict(json.loads(s))

    def __repr__(self):
        return f"CubeFunction(n={self.n})"


def character(n: int, mask: int) -> CubeFunction:
    """The Walsh character prod_{i in mask} eps_i."""
    c = np.zeros(1 << n)
    c[mask] = 1.0
    return CubeFunction(n, c)


def fwht(values) -> CubeFunction:
    """Analysis: point values -> Walsh coefficients (normalized by 2^n)."""
    return CubeFunction.from_values(values)


def random_function(n: int, rng: np.random.Generator, mean_zero: bool = False) -> CubeFunction:
    """Standard-normal random coefficients (unit-scale generic test input)."""
    c = rng.standard_normal(1 << n)
    if mean_zero:
        c[0] = 0.0
    return CubeFunction(n, c)


# -- operators ---------------------------------------------------------------


def partial_derivative(f: CubeFunction, i: int) -> CubeFunction:
    """partial_i: moves the coefficient of A onto A\\{i} for every A containing i."""
    _check_coord(f, i)
    out = np.zeros_like(f.coeffs)
    idx = np.arange(1 << f.n)
    has = (idx >> i) & 1 == 1
    out[idx[has] ^ (1 << i)] = f.coeffs[has]
    return CubeFunction(f.n, out)


def discrete_derivative(f: CubeFunction, i: int) -> CubeFunction:
    """D_i = eps_i * partial_i: keeps exactly the coefficients of A containing i."""
    _check_coord(f, i)
    idx = np.arange(1 << f.n)
    keep = ((idx >> i) & 1).astype(np.float64)
    return CubeFunction(f.n, f.coeffs * keep)


def _check_coord(f: CubeFunction, i: int) -> None:
    if not 0 <= i < f.n:
        raise ValueError(f"coordinate {i} out of range for n={f.n}")


def apply_multiplier(f: CubeFunction, m) -> CubeFunction:
    """Spectral calculus: fhat(A) -> m(|A|) * fhat(A).

    `m` is a callable on levels 0..n or an array of length n+1.
    """
    if callable(m):
        table = np.array([m(k) for k in range(f.n + 1)], dtype=np.float64)
    else:
        table = np.asarray(m, dtype=np.float64)
        if table.shape != (f.n + 1,):
            raise ValueError(f"multiplier table must have length n+1={f.n + 1}")
    return CubeFunction(f.n, f.coeffs * table[levels(f.n)],
                        mean_annihilated=f.mean_annihilated)


def laplacian(f: CubeFunction) -> CubeFunction:
    """L = sum_i D_i, the positive cube Laplacian with eigenvalue |A|."""
    return apply_multiplier(f, np.arange(f.n + 1, dtype=np.float64))


def heat(f: CubeFunction, t: float) -> CubeFunction:
    """Heat semigroup exp(-t L); multiplies level k by exp(-t k)."""
    if t < 0:
        raise ValueError(f"heat flow needs t >= 0, got {t}")
    return apply_multiplier(f, np.exp(-t * np.arange(f.n + 1)))


def frac_power(f: CubeFunction, a: float) -> CubeFunction:
    """L^{-a}: multiplies level k >= 1 by k^{-a} and annihilates the mean.

    For a > 0 the operator is only defined on mean-zero functions; a nonzero
    mean is dropped and flagged through `mean_annihilated` on the result.
    """
    table = np.arange(f.n + 1, dtype=np.float64)
    table[1:] = table[1:] ** (-a)
    table[0] = 0.0
    flagged = f.mean_annihilated or (a > 0 and f.coeffs[0] != 0.0)
    out = apply_multiplier(f, table)
    out.mean_annihilated = flagged
    return out


def riesz(f: CubeFunction, i: int) -> CubeFunction:
    """Riesz transform R_i = D_i L^{-1/2}."""
    return discrete_derivative(frac_power(f, 0.5), i)


def gradient(f: CubeFunction) -> list[CubeFunction]:
    return [partial_derivative(f, i) for i in range(f.n)]


def group_translate(f: CubeFunction, eta) -> CubeFunction:
    """f_eta(eps) = f(eps * eta); in coefficients fhat(A) -> eta^A fhat(A).

    Commutes with every spectral operator (translation is a cube symmetry).
    """
    h = signs_to_index(eta)
    if len(np.asarray(eta)) != f.n:
        raise ValueError("sign vector length must equal n")
    idx = np.arange(1 << f.n)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & h) & 1)
    return CubeFunction(f.n, f.coeffs * signs)


def permute_coordinates(f: CubeFunction, perm) -> CubeFunction:
    """Relabel coordinate i as perm[i]; fhat(A) moves to the relabeled mask."""
    perm = np.asarray(perm)
    if sorted(perm.tolist()) != list(range(f.n)):
        raise ValueError("perm must be a permutation of 0..n-1")
    out = np.zeros_like(f.coeffs)
    for mask in range(1 << f.n):
        new = 0
        for i in range(f.n):
            if mask >> i & 1:
                new |= 1 << perm[i]
        out[new] = f.coeffs[mask]
    return CubeFunction(f.n, out)


# -- vector- and two-variable functions ---------------------------------------


class VectorCubeFunction:
    """An R-tuple of cube functions sharing n; models ell^q_R-valued data."""

    __slots__ = ("components",)

    def __init__(self, components):
        components = list(components)
        if not components:
            raise ValueError("need at least one component")
        n = components[0].n
        if any(c.n != n for c in components):
            raise ValueError("all components must share the same n")
        self.components = components

    @property
    def n(self) -> int:
        return self.components[0].n

    @property
    def R(self) -> int:
        return len(self.components)

    def values(self) -> np.ndarray:
        """(R, 2^n) array of point values."""
        return np.stack([c.values() for c in self.components])

    def map(self, op) -> "VectorCubeFunction":
        """Apply a CubeFunction -> CubeFunction operator componentwise."""
        return VectorCubeFunction([op(c) for c in self.components])

    def __add__(self, other):
        if self.R != other.R:
            raise ValueError("component count mismatch")
        return VectorCubeFunction([a + b for a, b in zip(self.components, other.components)])

    def __mul__(self, scalar):
        return VectorCubeFunction([c * float(scalar) for c in self.components])

    __rmul__ = __mul__


class BiCubeFunction:
    """Real function F(eps, delta) on a product cube, stored as a value grid.

    Row index runs over the first (eps) cube, column index over the second
    (delta) cube, both in the standard point-index convention.
    """

    __slots__ = ("n_eps", "n_delta", "values")

    def __init__(self, n_eps: int, n_delta: int, values):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (1 << n_eps, 1 << n_delta):
            raise ValueError(f"value grid must be 2^{n_eps} x 2^{n_delta}")
        self.n_eps = n_eps
        self.n_delta = n_delta
        self.values = values

    @classmethod
    def from_sign_family(cls, family) -> "BiCubeFunction":
        """F(eps, delta) = sum_j delta_j f_j(eps) from cube functions f_j."""
        family = list(family)
        n_eps = family[0].n
        n_delta = len(family)
        cols = np.zeros((1 << n_eps, 1 << n_delta))
        didx = np.arange(1 << n_delta)
        for j, fj in enumerate(family):
            dsign = 1.0 - 2.0 * ((didx >> j) & 1)
            cols += np.outer(fj.values(), dsign)
        return cls(n_eps, n_delta, cols)

    @classmethod
    def from_translate(cls, f: CubeFunction) -> "BiCubeFunction":
        """F(eps, eta) = f(eps * eta), the group-shifted two-variable lift."""
        m = 1 << f.n
        v = f.values()
        xor = np.bitwise_xor.outer(np.arange(m), np.arange(m))
        return cls(f.n, f.n, v[xor])

    def marginal(self, j: int) -> CubeFunction:
        """F_j(eps) = E_delta[ delta_j F(eps, delta) ]."""
        if not 0 <= j < self.n_delta:
            raise ValueError(f"coordinate {j} out of range for n_delta={self.n_delta}")
        didx = np.arange(1 << self.n_delta)
        dsign = 1.0 - 2.0 * ((didx >> j) & 1)
        return CubeFunction.from_values(self.values @ dsign / (1 << self.n_delta))

    def marginals(self) -> list[CubeFunction]:
        return [self.marginal(j) for j in range(self.n_delta)]

    def map_eps(self, op) -> "BiCubeFunction":
        """Apply a CubeFunction operator in the eps variable, columnwise in delta."""
        out = np.empty_like(self.values)
        for col in range(self.values.shape[1]):
            out[:, col] = op(CubeFunction.from_values(self.values[:, col])).values()
        return BiCubeFunction(self.n_eps, self.n_delta, out)
