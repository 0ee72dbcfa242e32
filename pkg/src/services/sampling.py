"""
Berlab Sampling

Deterministic random instances for verification campaigns. Every trial gets
its own stream: seed = splitmix64(campaign_seed XOR trial), fed into numpy's
PCG64 generator. The scheme is recorded in reports as "splitmix64-pcg64/1".
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import unitary_group

from src.core.kernel_space import (KernelSpace, build_bergman, build_fock, build_from_gram,
                                   build_szego, orthonormal_space)
from src.core.operator import HermitianSpectrum, Operator

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1

STRUCTURED_KINDS = ('hermitian', 'unitary', 'nilpotent', 'normal')
STRUCTURED_PROBABILITY = 0.2

DISC_SAMPLE_RADIUS = 0.9
FOCK_SAMPLE_RADIUS = 2.0


def splitmix64(value: int) -> int:
    """One step of the SplitMix64 output function on a 64-bit integer."""
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(seed: int, trial: int) -> int:
    return splitmix64((seed ^ trial) & MASK64)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial of a campaign."""
    return np.random.Generator(np.random.PCG64(trial_seed(seed, trial)))


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def _haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    if dim == 1:
        return np.array([[np.exp(1j * rng.uniform(0, 2 * math.pi))]])
    return unitary_group.rvs(dim, random_state=rng)


def random_operator(rng: np.random.Generator, dim: int, scale: float = 1.0,
                    kind: Optional[str] = None) -> Tuple[Operator, str]:
    """
    Draw a random operator.

    With probability 0.2 the draw is structured (Hermitian, unitary,
    nilpotent shift or normal); otherwise entries are i.i.d. complex standard
    normal times scale / sqrt(dim).

    Args:
        rng: Generator to draw from.
        dim: Dimension n.
        scale: Overall scale, must be positive.
        kind: Force a kind ('gaussian' or one of STRUCTURED_KINDS).

    Returns:
        tuple: (Operator, kind drawn). The kind travels with the operator so
        campaign provenance can record which family a failing draw came from.
    """
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    if kind is None:
        if rng.random() < STRUCTURED_PROBABILITY:
            kind = STRUCTURED_KINDS[int(rng.integers(len(STRUCTURED_KINDS)))]
        else:
            kind = 'gaussian'

    gaussian = _complex_gaussian(rng, (dim, dim)) * scale / math.sqrt(dim)
    if kind == 'gaussian':
        entries = gaussian
    elif kind == 'hermitian':
        entries = (gaussian + gaussian.conj().T) / 2
    elif kind == 'unitary':
        entries = _haar_unitary(rng, dim) * scale
    elif kind == 'nilpotent':
        entries = np.triu(gaussian, k=1)
    elif kind == 'normal':
        unitary = _haar_unitary(rng, dim)
        values = _complex_gaussian(rng, dim) * scale
        entries = (unitary * values) @ unitary.conj().T
    else:
        raise ValueError(f"unknown operator kind {kind!r}")
    return Operator(entries), kind


def _disc_points(rng: np.random.Generator, count: int, radius: float) -> np.ndarray:
    moduli = radius * np.sqrt(rng.random(count))
    angles = rng.uniform(0, 2 * math.pi, count)
    return moduli * np.exp(1j * angles)


def random_space(rng: np.random.Generator, kind: str, dims: Sequence[int],
                 omega_sizes: Sequence[int]) -> KernelSpace:
    """
    Draw a kernel space of the given kind.

    ``dims`` sizes the orthonormal and random_gram kinds; the disc and Fock
    kinds get their dimension from the rank of the sampled Gram.
    """
    if kind == 'orthonormal':
        return orthonormal_space(int(rng.choice(dims)))
    if kind == 'random_gram':
        dim, size = int(rng.choice(dims)), int(rng.choice(omega_sizes))
        vectors = _complex_gaussian(rng, (dim, size))
        gram = vectors.conj().T @ vectors
        return build_from_gram((gram + gram.conj().T) / 2, kind='random_gram')

    size = int(rng.choice(omega_sizes))
    if kind == 'szego':
        return build_szego(_disc_points(rng, size, DISC_SAMPLE_RADIUS))
    if kind == 'bergman':
        return build_bergman(_disc_points(rng, size, DISC_SAMPLE_RADIUS))
    if kind == 'fock':
        return build_fock(_disc_points(rng, size, FOCK_SAMPLE_RADIUS))
    raise ValueError(f"unknown kernel kind {kind!r}")


def orthogonal_partner(operator: Operator, rng: np.random.Generator) -> Operator:
    """
    An operator B with Re<A k, B k> = 0 for every vector k.

    B = i A H where H is a real combination of I, |A| and |A|^2. H commutes
    with A*A, so <A k, B k> = -i <H A*A k, k> is purely imaginary.
    """
    spectrum = HermitianSpectrum.of(operator.gram())
    weights = rng.standard_normal(3)
    mixer = (Operator.identity(operator.dim) * weights[0]
             + spectrum.power(0.5) * weights[1]
             + spectrum.power(1.0) * weights[2])
    return (operator @ mixer) * 1j
