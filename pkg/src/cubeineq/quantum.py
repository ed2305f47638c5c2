"""Pauli-word matrix model of the cube and its kernel-integral calculus.

Scalar cube functions embed into 2^n x 2^n matrices through

    T_f = sum_A fhat(A) Q_A,      (T_f)[y, x] = fhat(y xor x),

where Q_A flips the bits of A.  Under the normalized trace tr = Tr / 2^n
the embedding is an L^p isometry onto a commutative subalgebra: the
eigenvalue multiset of T_f is exactly the value multiset of f.  Around it
live the anticommuting partners P_j, the projection back onto the Q-span
(a Schatten-norm contraction, realized both as a word-coefficient
projection and as a conjugated diagonal restriction), and the rotation
group

    rotate(T, theta) = A_theta^* T A_theta,  A_theta = diag(1, e^{i theta})^{(x) n},

which turns Q_j into cos(theta) Q_j + sin(theta) P_j and preserves every
Schatten norm.  The singular kernel sgn(theta)/sqrt(-log cos theta) on
(-pi/2, pi/2) integrates the rotated derivation back into the half-power
of the Laplacian:

    T_{D_j L^{-1/2} f} = (1/c) proj_Q  int  K(theta) rotate(P_j d_j T_f, -theta) dtheta,

with c the kernel's own normalization integral.  Note the inverse rotation
inside the integral: with the rotation oriented as above (the convention
that also matches the generator sum_j P_j d_j), the forward rotation would
flip the sign of the identity.

Dense complex matrices only, n <= 10; all Schatten norms go through SVD.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .cube import CubeFunction, VectorCubeFunction, partial_derivative, riesz, frac_power
from .inequalities import InequalityInstance, RatioReport
from . import inequalities

MAX_QUBITS = 10
MAX_FORMULA_QUBITS = 6

Q2 = np.array([[0, 1], [1, 0]], dtype=complex)
P2 = np.array([[0, 1j], [-1j, 0]], dtype=complex)
U2 = 1j * (Q2 @ P2)
I2 = np.eye(2, dtype=complex)
_LETTERS = {"I": I2, "Q": Q2, "P": P2, "U": U2}


class QuadratureAccuracyError(RuntimeError):
    pass


def _check_qubits(n: int, cap: int = MAX_QUBITS) -> None:
    if not 1 <= n <= cap:
        raise ValueError(f"qubit count must be in [1, {cap}], got {n}")


@functools.lru_cache(maxsize=16)
def _popcounts(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.float64)


@functools.lru_cache(maxsize=16)
def _xor_grid(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return np.bitwise_xor.outer(idx, idx)


class MatrixObservable:
    """Dense complex 2^n x 2^n matrix under the normalized trace."""

    __slots__ = ("n", "mat")

    def __init__(self, n: int, mat):
        _check_qubits(n)
        mat = np.asarray(mat, dtype=complex)
        if mat.shape != (1 << n, 1 << n):
            raise ValueError(f"expected a {1 << n} x {1 << n} matrix")
        if not np.all(np.isfinite(mat)):
            raise ValueError("matrix entries must be finite")
        self.n = n
        self.mat = mat

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.mat - self.mat.conj().T)) <= tol)

    def trace(self) -> complex:
        """Normalized trace Tr / 2^n."""
        return complex(np.trace(self.mat) / (1 << self.n))

    def __repr__(self):
        return f"MatrixObservable(n={self.n})"


def _as_mat(T) -> np.ndarray:
    return T.mat if isinstance(T, MatrixObservable) else np.asarray(T, dtype=complex)


@dataclass(frozen=True)
class PauliWord:
    """One letter from {I, Q, P, U} per coordinate (coordinate 0 first)."""

    letters: tuple

    def __post_init__(self):
        if not self.letters or any(c not in _LETTERS for c in self.letters):
            raise ValueError("letters must be a nonempty sequence over I, Q, P, U")

    @property
    def n(self) -> int:
        return len(self.letters)

    @classmethod
    def from_string(cls, s: str) -> "PauliWord":
        return cls(tuple(s))

    @classmethod
    def q_word(cls, mask: int, n: int) -> "PauliWord":
        return cls(tuple("Q" if (mask >> i) & 1 else "I" for i in range(n)))

    @classmethod
    def p_word(cls, mask: int, n: int) -> "PauliWord":
        return cls(tuple("P" if (mask >> i) & 1 else "I" for i in range(n)))

    def matrix(self) -> np.ndarray:
        # coordinate i owns bit i of the index, so factor order is reversed
        out = _LETTERS[self.letters[-1]]
        for c in reversed(self.letters[:-1]):
            out = np.kron(out, _LETTERS[c])
        return out


def pauli_build(word: PauliWord) -> MatrixObservable:
    """Dense matrix of a Pauli tensor word."""
    _check_qubits(word.n)
    return MatrixObservable(word.n, word.matrix())


def pauli_inner(X, Y, n: int) -> complex:
    """tr(X^* Y) with the normalized trace; Pauli words are orthonormal."""
    return complex(np.trace(_as_mat(X).conj().T @ _as_mat(Y)) / (1 << n))


# -- the commutative embedding -------------------------------------------------


def embed(f: CubeFunction) -> MatrixObservable:
    """T_f = sum_A fhat(A) Q_A, assembled entrywise as fhat(y xor x)."""
    _check_qubits(f.n)
    return MatrixObservable(f.n, f.coeffs[_xor_grid(f.n)].astype(complex))


def extract_q_coefficients(T) -> np.ndarray:
    """Coefficients of T on the Q-words: c(A) = tr(Q_A T) = mean_x T[x xor A, x]."""
    mat = _as_mat(T)
    n = mat.shape[0].bit_length() - 1
    idx = np.arange(1 << n)
    return mat[_xor_grid(n), idx[None, :]].mean(axis=1)


def schatten_norm(T, p: float, normalizer: int | None = None) -> float:
    """sigma_p norm (tr[(T^* T)^{p/2}])^{1/p} with tr = Tr / normalizer.

    The normalizer defaults to the column count, which is the cube factor
    2^n both for square observables and for column-stacked blocks; pass it
    explicitly for other block shapes.  p = inf is the operator norm.
    """
    if not p >= 1:
        raise ValueError(f"exponent must be in [1, inf], got {p}")
    mat = _as_mat(T)
    s = np.linalg.svd(mat, compute_uv=False)
    if np.isinf(p):
        return float(s[0])
    d = normalizer if normalizer is not None else mat.shape[1]
    return float(((s**p).sum() / d) ** (1.0 / p))


# -- projection onto the Q-span -------------------------------------------------


@functools.lru_cache(maxsize=16)
def rho_matrix(n: int) -> np.ndarray:
    """The unitary r^{(x) n} with r = [[1,1],[-1,1]]/sqrt(2) conjugating
    the Q-span onto the diagonal."""
    r = np.array([[1, 1], [-1, 1]], dtype=complex) / math.sqrt(2)
    out = r
    for _ in range(n - 1):
        out = np.kron(out, r)
    return out


def conjugate_nu(T) -> np.ndarray:
    """nu(T) = rho T rho^*."""
    mat = _as_mat(T)
    n = mat.shape[0].bit_length() - 1
    rho = rho_matrix(n)
    return rho @ mat @ rho.conj().T


def conjugate_nu_inv(T) -> np.ndarray:
    mat = _as_mat(T)
    n = mat.shape[0].bit_length() - 1
    rho = rho_matrix(n)
    return rho.conj().T @ mat @ rho


def project_Q(T, method: str = "both", tol: float = 1e-12) -> MatrixObservable:
    """Orthogonal projection onto span{Q_A}; a contraction in every sigma_p.

    method "words" projects through the word coefficients, "conjugation"
    through rho Diag(rho^* T rho) rho^*; "both" runs the two and demands
    agreement within `tol` (an internal-consistency failure otherwise).
    """
    mat = _as_mat(T)
    n = mat.shape[0].bit_length() - 1
    if method not in ("words", "conjugation", "both"):
        raise ValueError(f"unknown method {method!r}")
    by_words = by_conj = None
    if method in ("words", "both"):
        c = extract_q_coefficients(mat)
        by_words = c[_xor_grid(n)]
    if method in ("conjugation", "both"):
        rho = rho_matrix(n)
        inner = rho.conj().T @ mat @ rho
        by_conj = rho @ np.diag(np.diag(inner)) @ rho.conj().T
    if method == "both":
        gap = float(np.max(np.abs(by_words - by_conj)))
        if gap > tol:
            raise QuadratureAccuracyError(
                f"projection implementations disagree by {gap:.3e} (> {tol:.1e})")
    return MatrixObservable(n, by_words if by_words is not None else by_conj)


# -- rotation group and derivation ---------------------------------------------


def rotate(T, theta: float) -> MatrixObservable:
    """A_theta^* T A_theta with A_theta = diag(1, e^{i theta})^{(x) n}.

    Sends Q_j to cos(theta) Q_j + sin(theta) P_j and P_j to
    cos(theta) P_j - sin(theta) Q_j; an isometry of every sigma_p.
    """
    mat = _as_mat(T)
    n = mat.shape[0].bit_length() - 1
    pc = _popcounts(n)
    phase = np.exp(1j * theta * (pc[None, :] - pc[:, None]))
    return MatrixObservable(n, mat * phase)


def apply_p_left(M, j: int) -> np.ndarray:
    """Left-multiply by P_j without forming it: row y picks i(-1)^{y_j} M[y xor e_j]."""
    mat = _as_mat(M)
    n = mat.shape[0].bit_length() - 1
    idx = np.arange(1 << n)
    sign = 1j * (1.0 - 2.0 * ((idx >> j) & 1))
    return sign[:, None] * mat[idx ^ (1 << j), :]


def derivation(f: CubeFunction) -> MatrixObservable:
    """D(T_f) = sum_j P_j d_j T_f, the generator of the rotation group."""
    _check_qubits(f.n)
    total = np.zeros((1 << f.n, 1 << f.n), dtype=complex)
    for j in range(f.n):
        total += apply_p_left(embed(partial_derivative(f, j)).mat, j)
    return MatrixObservable(f.n, total)


# -- singular kernel quadrature --------------------------------------------------


def kernel_t(theta) -> np.ndarray:
    """t(theta) = sqrt(-log cos theta), the kernel's denominator."""
    return np.sqrt(-np.log(np.cos(theta)))


class QuadratureRule:
    """Nodes and kernel-inclusive weights for int K(theta) F(theta) dtheta.

    K(theta) = sgn(theta)/t(theta) is odd and blows up like sqrt(2)/|theta|
    at zero, so the rule stores positive nodes only and evaluates the exact
    odd part, sum_k w_k (F(theta_k) - F(-theta_k)); the admissible
    integrands vanish linearly at 0, making the products analytic there.
    Composite Gauss-Legendre panels cover [0, 1]; beyond, the substitution
    u = -log cos theta turns the endpoint into a smooth exponential tail
    integrated on geometric panels.  `declared_accuracy` is checked against
    the kernel's own moment law (the normalization integral is measured,
    never assumed).
    """

    _THETA_PANELS = (0.0, 0.25, 0.5, 1.0)
    _U_OFFSETS = (0.0, 1.0, 3.0, 7.0, 15.0, 31.0, 63.0)

    def __init__(self, nodes: np.ndarray, weights: np.ndarray, declared_accuracy: float):
        self.nodes = np.asarray(nodes, dtype=np.float64)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.declared_accuracy = float(declared_accuracy)
        self._norm_const: float | None = None

    @classmethod
    def build(cls, accuracy: float = 1e-8) -> "QuadratureRule":
        if accuracy >= 1e-6:
            n_theta, n_u = 24, 20
        elif accuracy >= 1e-9:
            n_theta, n_u = 40, 32
        else:
            n_theta, n_u = 64, 48
        gx, gw = np.polynomial.legendre.leggauss(n_theta)
        nodes, weights = [], []
        for a, b in zip(cls._THETA_PANELS, cls._THETA_PANELS[1:]):
            x = (b - a) / 2 * gx + (a + b) / 2
            nodes.append(x)
            weights.append((b - a) / 2 * gw / kernel_t(x))
        u_lo = -math.log(math.cos(cls._THETA_PANELS[-1]))
        gx, gw = np.polynomial.legendre.leggauss(n_u)
        u_panels = [u_lo + off for off in cls._U_OFFSETS]
        for a, b in zip(u_panels, u_panels[1:]):
            u = (b - a) / 2 * gx + (a + b) / 2
            jac = np.exp(-u) / np.sqrt(1.0 - np.exp(-2.0 * u))
            nodes.append(np.arccos(np.exp(-u)))
            weights.append((b - a) / 2 * gw * jac / np.sqrt(u))
        return cls(np.concatenate(nodes), np.concatenate(weights), accuracy)

    def integrate(self, F) -> np.ndarray:
        """sum_k w_k (F(theta_k) - F(-theta_k)), in fixed node order."""
        total = None
        for theta, w in zip(self.nodes, self.weights):
            term = w * (F(theta) - F(-theta))
            total = term if total is None else total + term
        return total

    def moment(self, m: int) -> float:
        """int cos^m(theta) sin(theta) K(theta) dtheta (decays like (m+1)^{-1/2})."""
        if m < 0:
            raise ValueError(f"need m >= 0, got {m}")
        c, s = np.cos(self.nodes), np.sin(self.nodes)
        return float(2.0 * np.sum(self.weights * c**m * s))

    def constancy_defect(self, max_m: int = 64) -> float:
        """Max deviation of moment(m) * sqrt(m+1) from its mean over m <= max_m."""
        prods = np.array([self.moment(m) * math.sqrt(m + 1) for m in range(max_m + 1)])
        return float(np.max(np.abs(prods - prods.mean())))

    def normalizing_constant(self) -> float:
        """c = moment(0), with the moment law checked at the declared accuracy."""
        if self._norm_const is None:
            defect = self.constancy_defect()
            if defect > self.declared_accuracy:
                raise QuadratureAccuracyError(
                    f"kernel moment law violated by {defect:.3e} "
                    f"(declared {self.declared_accuracy:.1e})")
            self._norm_const = self.moment(0)
        return self._norm_const


def pisier_kernel_integral(m: int, quad: QuadratureRule) -> float:
    """The kernel moment I(m); I(m) sqrt(m+1) is constant in m."""
    return quad.moment(m)


def kernel_transform(G, quad: QuadratureRule) -> MatrixObservable:
    """int K(theta) rotate(G, -theta) dtheta (the orientation under which the
    half-power representation below holds with a positive constant)."""
    mat = _as_mat(G)
    n = mat.shape[0].bit_length() - 1
    pc = _popcounts(n)
    delta = pc[None, :] - pc[:, None]

    def F(theta):
        return mat * np.exp(-1j * theta * delta)

    return MatrixObservable(n, quad.integrate(F))


def qa_word_defect(n: int, j: int, thetas=(0.3, 0.9, 1.4)) -> float:
    """Max defect of proj_Q(rotate(P_j d_j Q_A, -theta)) = cos^{|A|-1} sin(theta) Q_A
    over every basis word A and the sampled rotation angles."""
    _check_qubits(n, MAX_FORMULA_QUBITS)
    m = 1 << n
    idx = np.arange(m)
    worst = 0.0
    for A in range(m):
        if not (A >> j) & 1:
            continue
        rest = A ^ (1 << j)
        q_rest = np.zeros((m, m), dtype=complex)
        q_rest[idx ^ rest, idx] = 1.0
        g = apply_p_left(q_rest, j)
        k = bin(A).count("1") - 1
        for theta in thetas:
            lhs = project_Q(rotate(g, -theta)).mat
            expect = np.zeros((m, m), dtype=complex)
            expect[idx ^ A, idx] = math.cos(theta) ** k * math.sin(theta)
            worst = max(worst, float(np.max(np.abs(lhs - expect))))
    return worst


def verify_qa_formula(f: CubeFunction, j: int, quad: QuadratureRule) -> float:
    """Residual of the kernel-integral representation of D_j L^{-1/2}.

    Compares T_{D_j L^{-1/2} f} with (1/c) proj_Q int K rotate(P_j d_j T_f, -theta),
    and folds in the per-word rotation identity defect.
    """
    _check_qubits(f.n, MAX_FORMULA_QUBITS)
    if not 0 <= j < f.n:
        raise ValueError(f"coordinate {j} out of range")
    c = quad.normalizing_constant()
    lhs = embed(riesz(f, j)).mat
    g = apply_p_left(embed(partial_derivative(f, j)).mat, j)
    rhs = project_Q(kernel_transform(g, quad).mat).mat / c
    residual = float(np.max(np.abs(lhs - rhs)))
    return max(residual, qa_word_defect(f.n, j))


def verify_elpF(f: CubeFunction, quad: QuadratureRule) -> float:
    """Residual of T_{L^{1/2} f} = (1/c) proj_Q int K rotate(D(T_f), -theta) dtheta
    for mean-zero f (the derivation sums the per-coordinate integrands)."""
    _check_qubits(f.n, MAX_FORMULA_QUBITS)
    if abs(f.mean) > 1e-12:
        raise ValueError("the half-power representation needs a mean-zero function")
    c = quad.normalizing_constant()
    lhs = embed(frac_power(f, -0.5)).mat
    rhs = project_Q(kernel_transform(derivation(f).mat, quad).mat).mat / c
    return float(np.max(np.abs(lhs - rhs)))


# -- vector-valued block embeddings ----------------------------------------------


def block_column(F: VectorCubeFunction) -> np.ndarray:
    """C_F: the T_{f^r} stacked vertically; sigma_p of it is the L^p(ell^2) norm."""
    _check_block(F)
    return np.vstack([embed(c).mat for c in F.components])


def block_diag(F: VectorCubeFunction) -> np.ndarray:
    """D_F: the T_{f^r} on the diagonal; sigma_p of it (cube-normalized)
    is the L^p(ell^p) norm."""
    _check_block(F)
    mats = [embed(c).mat for c in F.components]
    m = 1 << F.n
    out = np.zeros((m * F.R, m * F.R), dtype=complex)
    for r, Tr in enumerate(mats):
        out[r * m:(r + 1) * m, r * m:(r + 1) * m] = Tr
    return out


def block_column_norm(F: VectorCubeFunction, p: float) -> float:
    return schatten_norm(block_column(F), p, normalizer=1 << F.n)


def block_diag_norm(F: VectorCubeFunction, p: float) -> float:
    return schatten_norm(block_diag(F), p, normalizer=1 << F.n)


def _check_block(F: VectorCubeFunction) -> None:
    if F.n > 8 or F.R > 8:
        raise ValueError(f"block embeddings capped at n <= 8, R <= 8; got n={F.n}, R={F.R}")


def epi_quantum_ratio(family, p: float) -> RatioReport:
    """|| sum_j D_j L^{-1/2} f_j ||_p against the square-function norm.

    The matrix proof bounds this ratio by C p^{3/2}; the evaluator itself is
    a cube-side computation (catalog entry EPI), exposed here beside the
    machinery that proves it.
    """
    family = list(family)
    if p < 2:
        raise ValueError(f"the endpoint estimate concerns p >= 2, got {p}")
    instance = InequalityInstance("EPI", n=family[0].n, p=p)
    return inequalities.evaluate(instance, family)
