"""
Berlab Kernel Space

Finite models of reproducing kernel Hilbert spaces. A model is a family of
unit vectors k̂_j in C^n indexed by a finite point set; the Szegő, Bergman and
Fock spaces are realized by factorizing their Gram matrices on sample points.

All sup/inf quantities computed on a model are exact for that finite model;
they are not approximations of the continuum space the kernel comes from.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from src.errors import (DuplicatePoint, IndexOutOfRange, NotHermitian, NotPSD,
                        PointOutsideDisc, PointTooLarge, ZeroKernelPoint)

logger = logging.getLogger(__name__)

GRAM_HERMITIAN_TOL = 1e-12
GRAM_NEGATIVE_TOL = 1e-10
RANK_CUTOFF = 1e-12
ZERO_KERNEL_TOL = 1e-10
DISC_MARGIN = 1e-6
FOCK_RADIUS = 10.0


@dataclass(frozen=True, eq=False)
class KernelSpace:
    """
    A finite RKHS model.

    Attributes:
        dim: Ambient dimension n.
        points: The m point labels (the index set Omega).
        kernels: n x m matrix whose column j is the normalized kernel k̂_j.
        gram: Optional m x m unnormalized Gram matrix, kept for provenance.
        kind: Name of the construction ('szego', 'bergman', 'fock', 'gram', ...).
    """

    dim: int
    points: Tuple[complex, ...]
    kernels: np.ndarray
    gram: Optional[np.ndarray] = None
    kind: str = 'gram'

    def __post_init__(self):
        self.kernels.flags.writeable = False
        if self.gram is not None:
            self.gram.flags.writeable = False

    @property
    def size(self) -> int:
        """Number of points m."""
        return len(self.points)

    def normalized_kernel(self, index: int) -> np.ndarray:
        return normalized_kernel(self, index)

    def induced_gram(self) -> np.ndarray:
        """Gram matrix of the normalized kernels: entry [i, j] = <k̂_j, k̂_i>."""
        return self.kernels.conj().T @ self.kernels

    def permuted(self, order: Sequence[int]) -> 'KernelSpace':
        """Same model with points (and kernel columns) reordered."""
        order = list(order)
        if sorted(order) != list(range(self.size)):
            raise IndexOutOfRange(f"{order} is not a permutation of 0..{self.size - 1}")
        gram = None if self.gram is None else self.gram[np.ix_(order, order)].copy()
        return KernelSpace(self.dim, tuple(self.points[j] for j in order),
                           self.kernels[:, order].copy(), gram, self.kind)


def _factorize(normalized: np.ndarray) -> np.ndarray:
    """Columns of sqrt(L) U^H restricted to eigenvalues above the rank cutoff."""
    eigenvalues, eigenvectors = linalg.eigh(normalized)
    largest = float(eigenvalues[-1])
    keep = eigenvalues > RANK_CUTOFF * largest
    factor = np.sqrt(eigenvalues[keep])[:, None] * eigenvectors[:, keep].conj().T
    # Dropped directions carry at most m * cutoff of each column's norm
    return factor / np.linalg.norm(factor, axis=0)


def build_from_gram(gram, labels: Optional[Sequence] = None, kind: str = 'gram') -> KernelSpace:
    """
    Build a kernel space from a Hermitian PSD Gram matrix.

    Args:
        gram: m x m matrix with gram[i][j] = <k_j, k_i>.
        labels: m point labels; defaults to 0..m-1.
        kind: Construction name recorded on the space.

    Returns:
        KernelSpace: Model with n equal to the numerical rank of the Gram.

    Raises:
        NotHermitian: Gram differs from its adjoint by more than 1e-12 in some entry.
        ZeroKernelPoint: A diagonal entry is at most 1e-10.
        NotPSD: An eigenvalue lies below -1e-10 times the largest one.
    """
    gram = np.array(gram, dtype=complex)
    if gram.ndim != 2 or gram.shape[0] != gram.shape[1] or gram.shape[0] < 1:
        raise NotHermitian(f"gram must be a non-empty square matrix, got shape {gram.shape}")
    size = gram.shape[0]
    labels = tuple(complex(j) for j in range(size)) if labels is None else tuple(labels)
    if len(labels) != size:
        raise IndexOutOfRange(f"{len(labels)} labels for a {size}x{size} gram")

    if np.max(np.abs(gram - gram.conj().T)) > GRAM_HERMITIAN_TOL:
        raise NotHermitian("gram is not Hermitian")
    gram = (gram + gram.conj().T) / 2

    diagonal = gram.diagonal().real
    if np.any(diagonal <= ZERO_KERNEL_TOL):
        raise ZeroKernelPoint(f"kernel at point {int(np.argmin(diagonal))} has zero norm")

    eigenvalues = linalg.eigvalsh(gram)
    if eigenvalues[0] < -GRAM_NEGATIVE_TOL * eigenvalues[-1]:
        raise NotPSD(f"gram eigenvalue {eigenvalues[0]:.3e} below tolerance")

    norms = np.sqrt(diagonal)
    kernels = _factorize(gram / np.outer(norms, norms))
    logger.debug(f"Built {kind} space with {size} points, rank {kernels.shape[0]}")
    return KernelSpace(kernels.shape[0], labels, kernels, gram, kind)


def orthonormal_space(dim: int) -> KernelSpace:
    """The model whose kernels are the standard basis e_1..e_n."""
    if dim < 1:
        raise IndexOutOfRange(f"dimension must be at least 1, got {dim}")
    labels = tuple(complex(j) for j in range(dim))
    return KernelSpace(dim, labels, np.eye(dim, dtype=complex),
                       np.eye(dim, dtype=complex), kind='orthonormal')


def _validate_points(points: Sequence[complex], limit: float, error: type, what: str) -> np.ndarray:
    z = np.asarray(points, dtype=complex).ravel()
    if z.size < 1:
        raise IndexOutOfRange("at least one point is required")
    for value in z:
        if abs(value) > limit:
            raise error(f"point {value} exceeds |z| <= {limit} for the {what} kernel")
    for i in range(z.size):
        for j in range(i):
            if z[i] == z[j]:
                raise DuplicatePoint(f"point {z[i]} appears twice")
    return z


def build_szego(points: Sequence[complex]) -> KernelSpace:
    """Hardy-space model: gram[i][j] = 1 / (1 - z_i conj(z_j))."""
    z = _validate_points(points, 1 - DISC_MARGIN, PointOutsideDisc, 'Szegő')
    gram = 1.0 / (1.0 - np.outer(z, z.conj()))
    return build_from_gram((gram + gram.conj().T) / 2, tuple(z), kind='szego')


def build_bergman(points: Sequence[complex]) -> KernelSpace:
    """Bergman-space model: gram[i][j] = 1 / (1 - z_i conj(z_j))^2."""
    z = _validate_points(points, 1 - DISC_MARGIN, PointOutsideDisc, 'Bergman')
    gram = 1.0 / (1.0 - np.outer(z, z.conj())) ** 2
    return build_from_gram((gram + gram.conj().T) / 2, tuple(z), kind='bergman')


def build_fock(points: Sequence[complex]) -> KernelSpace:
    """Fock-space model: gram[i][j] = exp(z_i conj(z_j)), |z| <= 10."""
    z = _validate_points(points, FOCK_RADIUS, PointTooLarge, 'Fock')
    gram = np.exp(np.outer(z, z.conj()))
    return build_from_gram((gram + gram.conj().T) / 2, tuple(z), kind='fock')


def normalized_kernel(space: KernelSpace, index: int) -> np.ndarray:
    """
    Column ``index`` of the kernel matrix, a unit vector of length n.

    Raises:
        IndexOutOfRange: If index is not in 0..m-1.
    """
    if not 0 <= index < space.size:
        raise IndexOutOfRange(f"index {index} outside 0..{space.size - 1}")
    return space.kernels[:, index].copy()
