"""
Berlab Berezin Functionals

Berezin symbol, Berezin set, Berezin number, least Berezin number, Berezin
norm, Davis-Wielandt-Berezin shell and radius of an operator relative to a
kernel space. Every sup/inf is an exact max/min over the finite point set;
ties go to the lowest index.
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from src.core.kernel_space import KernelSpace
from src.core.operator import Operator
from src.errors import DimensionMismatch


@dataclass(frozen=True, eq=False)
class BerezinProfile:
    """Per-point trace of an operator over the kernel points."""

    points: Tuple[complex, ...]
    symbols: np.ndarray
    image_norms_sq: np.ndarray

    @property
    def dw_points(self) -> List[Tuple[complex, float]]:
        return [(complex(s), float(q)) for s, q in zip(self.symbols, self.image_norms_sq)]

    @property
    def dw_radii(self) -> np.ndarray:
        """sqrt(|symbol|^2 + image_norm_sq^2) per point."""
        return np.sqrt(np.abs(self.symbols) ** 2 + self.image_norms_sq ** 2)


@dataclass(frozen=True)
class ShellPoint:
    """One point of the Davis-Wielandt-Berezin shell, labeled by its kernel point."""

    label: complex
    symbol: complex
    image_norm_sq: float


def _check_dims(operator: Operator, space: KernelSpace):
    if operator.dim != space.dim:
        raise DimensionMismatch(f"operator dim {operator.dim} != space dim {space.dim}")


def berezin_profile(operator: Operator, space: KernelSpace) -> BerezinProfile:
    """
    Evaluate <A k̂_j, k̂_j> and ||A k̂_j||^2 for every kernel point j.

    Raises:
        DimensionMismatch: If operator and space dimensions differ.
    """
    _check_dims(operator, space)
    images = operator.entries @ space.kernels
    symbols = np.sum(space.kernels.conj() * images, axis=0)
    norms_sq = np.sum(np.abs(images) ** 2, axis=0)
    return BerezinProfile(space.points, symbols, norms_sq)


def berezin_set(operator: Operator, space: KernelSpace) -> Tuple[complex, ...]:
    """The multiset Ber(A) of symbol values, in point order."""
    return tuple(complex(s) for s in berezin_profile(operator, space).symbols)


def ber_argmax(operator: Operator, space: KernelSpace) -> Tuple[float, int]:
    moduli = np.abs(berezin_profile(operator, space).symbols)
    index = int(np.argmax(moduli))
    return float(moduli[index]), index


def ber(operator: Operator, space: KernelSpace) -> float:
    """Berezin number: max over the points of |symbol|."""
    return ber_argmax(operator, space)[0]


def least_ber(operator: Operator, space: KernelSpace) -> float:
    """Least Berezin number c(A): min over the points of |symbol|."""
    return float(np.min(np.abs(berezin_profile(operator, space).symbols)))


def berezin_norm(operator: Operator, space: KernelSpace) -> float:
    """Max over all ordered pairs (lambda, mu) of |<A k̂_lambda, k̂_mu>|."""
    _check_dims(operator, space)
    kernels = space.kernels
    pairs = kernels.conj().T @ operator.entries @ kernels
    return float(np.max(np.abs(pairs)))


def eta_argmax(operator: Operator, space: KernelSpace) -> Tuple[float, int]:
    radii = berezin_profile(operator, space).dw_radii
    index = int(np.argmax(radii))
    return float(radii[index]), index


def eta(operator: Operator, space: KernelSpace) -> float:
    """Davis-Wielandt-Berezin radius: max of sqrt(|symbol|^2 + ||A k̂||^4)."""
    return eta_argmax(operator, space)[0]


def dwber_shell(operator: Operator, space: KernelSpace) -> List[ShellPoint]:
    """The Davis-Wielandt-Berezin shell as labeled points, ready for export."""
    profile = berezin_profile(operator, space)
    return [ShellPoint(complex(label), complex(symbol), float(norm_sq))
            for label, symbol, norm_sq in zip(profile.points, profile.symbols,
                                               profile.image_norms_sq)]
