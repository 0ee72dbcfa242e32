"""
Berlab Scalar Optimizer

Grid scan followed by golden-section refinement for one-parameter families.
Used for the min over theta in [0, 2pi] and alpha in [0, 1] in the bound
registry, and for the rotated-Hermitian maximization of the numerical radius.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List

import numpy as np
from scipy import optimize

logger = logging.getLogger(__name__)

# Golden section shrinks by 0.618 per step; 100 steps take a grid cell far below 1e-12.
MAX_REFINE_ITERATIONS = 100


@dataclass(frozen=True)
class ScalarMinimum:
    """Incumbent of a scalar minimization: a feasible point and its value."""

    x: float
    value: float


def _local_minima(values: np.ndarray, periodic: bool) -> List[int]:
    """Indices of strict local grid minima, best first, ties by lowest index."""
    count = len(values)
    minima = []
    for idx in range(count):
        if periodic:
            left, right = values[(idx - 1) % count], values[(idx + 1) % count]
        elif 0 < idx < count - 1:
            left, right = values[idx - 1], values[idx + 1]
        else:
            continue
        if values[idx] < left and values[idx] < right:
            minima.append(idx)
    return sorted(minima, key=lambda i: (values[i], i))


def minimize_scalar(func: Callable[[float], float], lo: float, hi: float,
                    grid: int = 257, refine_tol: float = 1e-8,
                    candidates: int = 1, periodic: bool = False) -> ScalarMinimum:
    """
    Minimize a scalar function on [lo, hi] by grid scan plus golden-section refinement.

    The returned point is always one at which ``func`` was evaluated, so the
    value is an upper bound on the true minimum; callers never depend on the
    refinement reaching the exact minimizer.

    Args:
        func: Function to minimize.
        lo: Lower end of the interval.
        hi: Upper end of the interval.
        grid: Number of grid points (at least 3).
        refine_tol: Width tolerance of the golden-section refinement.
        candidates: How many of the best local grid minima get refined.
        periodic: Treat ``func`` as periodic with period hi - lo; the grid then
            covers [lo, hi) and brackets wrap around.

    Returns:
        ScalarMinimum: Best point found and its value.
    """
    if grid < 3:
        raise ValueError(f"grid must be at least 3, got {grid}")

    if periodic:
        xs = lo + (hi - lo) * np.arange(grid) / grid
    else:
        xs = np.linspace(lo, hi, grid)
    values = np.array([func(float(x)) for x in xs])
    step = float(xs[1] - xs[0])

    best_idx = int(np.argmin(values))
    best = ScalarMinimum(float(xs[best_idx]), float(values[best_idx]))

    for idx in _local_minima(values, periodic)[:candidates]:
        center = float(xs[idx])
        left, right = center - step, center + step
        if not periodic:
            left, right = max(lo, left), min(hi, right)
        try:
            result = optimize.minimize_scalar(
                func,
                bracket=(left, center, right),
                method='golden',
                tol=refine_tol,
                options={'maxiter': MAX_REFINE_ITERATIONS},
            )
        except ValueError as e:
            # Bracket rejected (flat neighbourhood); the grid point stands
            logger.debug(f"Refinement skipped at x={center}: {e}")
            continue
        if result.fun < best.value:
            best = ScalarMinimum(float(result.x), float(result.fun))

    if periodic:
        best = ScalarMinimum(lo + (best.x - lo) % (hi - lo), best.value)
    return best
