"""
Berlab Operator Core

Dense complex matrix operators with the spectral helpers the Davis-Wielandt
and Berezin bounds need: adjoint, modulus, fractional powers of positive
operators, Cartesian decomposition, operator norm, numerical radius and a
witnessed lower estimate of the Davis-Wielandt radius.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple, TYPE_CHECKING

import numpy as np
from scipy import linalg

from src.core.optimizer import minimize_scalar
from src.errors import DimensionMismatch, NonFiniteEntries, NotHermitian, NotPSD

if TYPE_CHECKING:
    from src.core.kernel_space import KernelSpace

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
NEGATIVE_EIGEN_TOL = 1e-10
RANGE_CUTOFF = 1e-12
RADIUS_GRID = 1024
RADIUS_CANDIDATES = 3
ASCENT_STEP = 0.1
ASCENT_ITERATIONS = 200
ASCENT_MIN_GAIN = 1e-10


@dataclass(frozen=True, eq=False)
class Operator:
    """A square complex matrix acting on C^n. Entries are read-only."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionMismatch(f"operator must be square, got shape {entries.shape}")
        if entries.shape[0] < 1:
            raise DimensionMismatch("operator dimension must be at least 1")
        if not np.all(np.isfinite(entries)):
            raise NonFiniteEntries("operator entries must be finite")
        entries.flags.writeable = False
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def identity(cls, dim: int) -> 'Operator':
        return cls(np.eye(dim, dtype=complex))

    @classmethod
    def zeros(cls, dim: int) -> 'Operator':
        return cls(np.zeros((dim, dim), dtype=complex))

    @classmethod
    def diagonal(cls, values) -> 'Operator':
        return cls(np.diag(np.asarray(values, dtype=complex)))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def adjoint(self) -> 'Operator':
        """Conjugate transpose A*."""
        return Operator(self.entries.conj().T)

    def gram(self) -> 'Operator':
        """A*A, i.e. |A|^2."""
        return Operator(self.entries.conj().T @ self.entries)

    def cogram(self) -> 'Operator':
        """AA*, i.e. |A*|^2."""
        return Operator(self.entries @ self.entries.conj().T)

    def modulus(self) -> 'Operator':
        """|A| = (A*A)^(1/2)."""
        return psd_power(self.gram(), 0.5)

    def modulus_adjoint(self) -> 'Operator':
        """|A*| = (AA*)^(1/2)."""
        return psd_power(self.cogram(), 0.5)

    def cartesian(self) -> Tuple['Operator', 'Operator']:
        """
        Cartesian decomposition A = Re(A) + i Im(A).

        Returns:
            tuple: (Re(A), Im(A)), both Hermitian.
        """
        adj = self.entries.conj().T
        return Operator((self.entries + adj) / 2), Operator((self.entries - adj) / 2j)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.entries))))
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) <= tol * scale)

    def apply(self, vector: np.ndarray) -> np.ndarray:
        return self.entries @ vector

    def _check_dim(self, other: 'Operator'):
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimensions {self.dim} and {other.dim} differ")

    def __add__(self, other: 'Operator') -> 'Operator':
        self._check_dim(other)
        return Operator(self.entries + other.entries)

    def __sub__(self, other: 'Operator') -> 'Operator':
        self._check_dim(other)
        return Operator(self.entries - other.entries)

    def __neg__(self) -> 'Operator':
        return Operator(-self.entries)

    def __matmul__(self, other: 'Operator') -> 'Operator':
        self._check_dim(other)
        return Operator(self.entries @ other.entries)

    def __mul__(self, scalar: complex) -> 'Operator':
        return Operator(self.entries * scalar)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Operator(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class HermitianSpectrum:
    """
    Eigendecomposition of a Hermitian positive semidefinite operator.

    Eigenvalues at or below ``RANGE_CUTOFF * largest`` are stored as exact
    zeros, so every power shares the same support and s = 0 gives the range
    projector.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def of(cls, positive: Operator) -> 'HermitianSpectrum':
        """
        Decompose a Hermitian PSD operator.

        Raises:
            NotHermitian: If the operator is not Hermitian within 1e-10.
            NotPSD: If an eigenvalue lies below -1e-10 times the spectral scale.
        """
        if not positive.is_hermitian():
            raise NotHermitian("operator is not Hermitian")
        entries = positive.entries
        eigenvalues, eigenvectors = linalg.eigh((entries + entries.conj().T) / 2)
        scale = float(np.max(np.abs(eigenvalues)))
        if eigenvalues[0] < -NEGATIVE_EIGEN_TOL * scale:
            raise NotPSD(f"eigenvalue {eigenvalues[0]:.3e} below tolerance")
        largest = max(float(eigenvalues[-1]), 0.0)
        clamped = np.where(eigenvalues > RANGE_CUTOFF * largest, eigenvalues, 0.0)
        return cls(clamped, eigenvectors)

    def power(self, s: float) -> Operator:
        """P^s on the same eigenvectors; s = 0 is the projector onto range(P)."""
        if s < 0:
            raise ValueError(f"exponent must be nonnegative, got {s}")
        if s == 0:
            weights = (self.eigenvalues > 0).astype(float)
        else:
            weights = np.power(self.eigenvalues, s)
        vecs = self.eigenvectors
        return Operator((vecs * weights) @ vecs.conj().T)


@dataclass(frozen=True, eq=False)
class WitnessedEstimate:
    """A value together with the unit vector at which it was attained."""

    value: float
    witness: np.ndarray


def adjoint(operator: Operator) -> Operator:
    return operator.adjoint()


def psd_power(positive: Operator, s: float) -> Operator:
    """
    Fractional power of a Hermitian positive semidefinite operator.

    Args:
        positive: Hermitian PSD operator P.
        s: Exponent, s >= 0. s = 0 yields the orthogonal projector onto range(P).

    Returns:
        Operator: P^s.
    """
    return HermitianSpectrum.of(positive).power(s)


def modulus(operator: Operator) -> Operator:
    return operator.modulus()


def modulus_adjoint(operator: Operator) -> Operator:
    return operator.modulus_adjoint()


def cartesian(operator: Operator) -> Tuple[Operator, Operator]:
    return operator.cartesian()


def is_normal(operator: Operator, tol: float = 1e-10) -> bool:
    """True when ||A*A - AA*|| <= tol * ||A||^2 (spectral norms)."""
    entries = operator.entries
    adj = entries.conj().T
    commutator = linalg.norm(adj @ entries - entries @ adj, 2)
    return bool(commutator <= tol * linalg.norm(entries, 2) ** 2)


def operator_norm(operator: Operator) -> WitnessedEstimate:
    """Largest singular value with the top right-singular vector as witness."""
    _, singular_values, vh = linalg.svd(operator.entries)
    return WitnessedEstimate(float(singular_values[0]), vh[0].conj())


def _rotated_hermitian(operator: Operator, theta: float) -> np.ndarray:
    rotated = cmath.exp(1j * theta) * operator.entries
    return (rotated + rotated.conj().T) / 2


def numerical_radius(operator: Operator, tol: float = 1e-8) -> WitnessedEstimate:
    """
    Numerical radius w(A) = max over theta of the top eigenvalue of Re(e^{i theta} A).

    The theta grid has 1024 points; the best three local maxima are refined by
    golden-section search to width ``tol``. The reported value is
    |<A x, x>| at the witness x, which lies between the optimal rotated
    eigenvalue and w(A).

    Args:
        operator: Operator A.
        tol: Refinement tolerance in theta, must be positive.

    Returns:
        WitnessedEstimate: w(A) and its witness vector.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    def negative_top(theta: float) -> float:
        return -float(linalg.eigvalsh(_rotated_hermitian(operator, theta))[-1])

    best = minimize_scalar(negative_top, 0.0, 2 * math.pi, grid=RADIUS_GRID,
                           refine_tol=tol, candidates=RADIUS_CANDIDATES, periodic=True)
    _, eigenvectors = linalg.eigh(_rotated_hermitian(operator, best.x))
    witness = eigenvectors[:, -1]
    value = abs(np.vdot(witness, operator.entries @ witness))
    return WitnessedEstimate(float(max(value, -best.value)), witness)


def dw_functional(operator: Operator, vector: np.ndarray) -> float:
    """sqrt(|<Ax,x>|^2 + ||Ax||^4) at a unit vector x."""
    image = operator.entries @ vector
    quad = np.vdot(vector, image)
    norm_sq = np.vdot(image, image).real
    return math.sqrt(abs(quad) ** 2 + norm_sq ** 2)


def _ascend(operator: Operator, start: np.ndarray) -> Tuple[float, np.ndarray]:
    """Projected gradient ascent of the dw functional on the unit sphere."""
    entries = operator.entries
    adj = entries.conj().T
    x = start
    value = dw_functional(operator, x)
    for _ in range(ASCENT_ITERATIONS):
        image = entries @ x
        quad = np.vdot(x, image)
        norm_sq = np.vdot(image, image).real
        gradient = np.conj(quad) * image + quad * (adj @ x) + 2 * norm_sq * (adj @ image)
        candidate = x + ASCENT_STEP * gradient
        length = np.linalg.norm(candidate)
        if length == 0:
            break
        candidate = candidate / length
        new_value = dw_functional(operator, candidate)
        if new_value <= value:
            break
        gain = (new_value - value) / max(value, 1e-300)
        x, value = candidate, new_value
        if gain < ASCENT_MIN_GAIN:
            break
    return value, x


def dw_lower_estimate(operator: Operator, space: Optional['KernelSpace'] = None,
                      restarts: int = 4, seed: int = 0, *,
                      radius: Optional[WitnessedEstimate] = None,
                      norm: Optional[WitnessedEstimate] = None) -> WitnessedEstimate:
    """
    Certified lower bound on the Davis-Wielandt radius dw(A).

    Evaluates the dw functional at the numerical-radius witness, the
    operator-norm witness, every normalized kernel of ``space`` and at
    ``restarts`` random unit vectors improved by projected ascent. The value
    is always attained at the returned witness, so it never exceeds dw(A).

    Args:
        operator: Operator A.
        space: Optional kernel space whose kernels are added as candidates.
        restarts: Number of random ascent starts, >= 0.
        seed: Seed for the random starts.
        radius: Precomputed numerical_radius(A), if available.
        norm: Precomputed operator_norm(A), if available.

    Returns:
        WitnessedEstimate: Best value found and its witness.
    """
    if restarts < 0:
        raise ValueError(f"restarts must be nonnegative, got {restarts}")
    if space is not None and space.dim != operator.dim:
        raise DimensionMismatch(f"operator dim {operator.dim} != space dim {space.dim}")

    radius = radius or numerical_radius(operator)
    norm = norm or operator_norm(operator)
    candidates = [radius.witness, norm.witness]
    if space is not None:
        candidates.extend(space.kernels[:, j] for j in range(space.size))

    best_value, best_witness = -1.0, candidates[0]
    for vector in candidates:
        value = dw_functional(operator, vector)
        if value > best_value:
            best_value, best_witness = value, vector

    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        start = rng.normal(size=operator.dim) + 1j * rng.normal(size=operator.dim)
        start /= np.linalg.norm(start)
        value, vector = _ascend(operator, start)
        if value > best_value:
            best_value, best_witness = value, vector

    return WitnessedEstimate(best_value, best_witness)
