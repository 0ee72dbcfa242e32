"""
Berlab Lemma Campaign

Randomized checks of the four auxiliary inequalities the bound proofs rest
on: the Hölder-McCarthy inequality for positive operators, the mixed Schwarz
inequality, Buzano's inequality and monotonicity of weighted power means.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.core.operator import HermitianSpectrum, Operator
from src.services.sampling import trial_rng
from src.services.schemas import LemmaReport, LemmaSummary

logger = logging.getLogger(__name__)

LEMMA_DIMS = (2, 3, 4, 8)
LEMMA_R_VALUES = (1.0, 1.5, 2.0, 3.0)
LEMMA_ALPHAS = (0.0, 0.25, 0.5, 0.75, 1.0)
MEAN_ORDERS = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0)
POWER_MEAN_TOL = 1e-12


@dataclass(frozen=True)
class PowerMean:
    """Weighted power mean M_r(a, b, alpha) with a, b >= 0 and 0 < alpha < 1."""

    a: float
    b: float
    alpha: float
    r: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError(f"a and b must be nonnegative, got {self.a}, {self.b}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")


def power_mean(pm: PowerMean) -> float:
    """
    M_r = (alpha a^r + (1 - alpha) b^r)^(1/r), M_0 = a^alpha b^(1 - alpha).

    Computed in log space so that r of either sign stays accurate.
    """
    a, b, alpha, r = pm.a, pm.b, pm.alpha, pm.r
    if a == b:
        return float(a)
    if a == 0 or b == 0:
        if r <= 0:
            return 0.0
        return ((alpha * a ** r) + (1 - alpha) * b ** r) ** (1 / r)
    log_a, log_b = math.log(a), math.log(b)
    if r == 0:
        return math.exp(alpha * log_a + (1 - alpha) * log_b)
    log_sum = np.logaddexp(math.log(alpha) + r * log_a, math.log(1 - alpha) + r * log_b)
    return math.exp(float(log_sum) / r)


def check_power_mean(a: float, b: float, alpha: float, r: float, s: float) -> bool:
    """True when M_r(a, b, alpha) <= M_s(a, b, alpha) within 1e-12 (relative to scale)."""
    if r > s:
        raise ValueError(f"need r <= s, got r={r}, s={s}")
    low = power_mean(PowerMean(a, b, alpha, r))
    high = power_mean(PowerMean(a, b, alpha, s))
    return low <= high + POWER_MEAN_TOL * max(1.0, high)


def _unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    vector = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vector / np.linalg.norm(vector)


def _random_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2 * dim)


def holder_mccarthy_sides(positive: Operator, x: np.ndarray, r: float) -> Tuple[float, float]:
    """<Px, x>^r and <P^r x, x> for positive P, unit x and r >= 1."""
    spectrum = HermitianSpectrum.of(positive)
    quad = max(float(np.vdot(x, positive.entries @ x).real), 0.0)
    powered = spectrum.power(r).entries
    return quad ** r, float(np.vdot(x, powered @ x).real)


def mixed_schwarz_sides(operator: Operator, x: np.ndarray, y: np.ndarray,
                        alpha: float) -> Tuple[float, float]:
    """|<Ax, y>|^2 and <|A|^{2 alpha} x, x> <|A*|^{2(1 - alpha)} y, y>."""
    left = abs(np.vdot(y, operator.entries @ x)) ** 2
    first = HermitianSpectrum.of(operator.gram()).power(alpha).entries
    second = HermitianSpectrum.of(operator.cogram()).power(1 - alpha).entries
    right = np.vdot(x, first @ x).real * np.vdot(y, second @ y).real
    return float(left), float(right)


def buzano_sides(x: np.ndarray, y: np.ndarray, e: np.ndarray) -> Tuple[float, float]:
    """|<x, e><e, y>| and (||x|| ||y|| + |<x, y>|) / 2 for unit e."""
    left = abs(np.vdot(e, x) * np.vdot(y, e))
    right = (np.linalg.norm(x) * np.linalg.norm(y) + abs(np.vdot(y, x))) / 2
    return float(left), float(right)


class _Tally:
    def __init__(self, tol: float):
        self.tol = tol
        self.summary = LemmaSummary()

    def add(self, lhs: float, rhs: float):
        self.summary.checked += 1
        shortfall = lhs - rhs
        if shortfall > self.tol * max(abs(lhs), abs(rhs), 1.0):
            self.summary.violations += 1
            self.summary.worst_violation = max(self.summary.worst_violation, shortfall)


def run_lemma_suite(seed: int = 0, trials: int = 1000, tol: float = 1e-9) -> LemmaReport:
    """
    Check the four auxiliary lemmas on ``trials`` random draws each.

    Args:
        seed: Campaign seed; every trial derives its own stream.
        trials: Draws per lemma.
        tol: Relative tolerance for a violation.

    Returns:
        LemmaReport: Counts and worst shortfall per lemma.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    logger.info(f"Running lemma suite: seed={seed}, trials={trials}")

    tallies = {name: _Tally(tol) for name in
               ('holder_mccarthy', 'mixed_schwarz', 'buzano', 'power_mean')}
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        dim = int(rng.choice(LEMMA_DIMS))

        root = _random_matrix(rng, dim)
        positive = Operator(root.conj().T @ root)
        x = _unit(rng, dim)
        for r in LEMMA_R_VALUES:
            tallies['holder_mccarthy'].add(*holder_mccarthy_sides(positive, x, r))

        operator = Operator(_random_matrix(rng, dim))
        x, y = rng.standard_normal(dim) + 1j * rng.standard_normal(dim), _unit(rng, dim)
        for alpha in LEMMA_ALPHAS:
            tallies['mixed_schwarz'].add(*mixed_schwarz_sides(operator, x, y, alpha))

        first = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        second = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        tallies['buzano'].add(*buzano_sides(first, second, _unit(rng, dim)))

        a, b = rng.uniform(0, 10, 2)
        alpha = float(rng.uniform(0.01, 0.99))
        r, s = sorted(rng.choice(MEAN_ORDERS, 2))
        low = power_mean(PowerMean(float(a), float(b), alpha, float(r)))
        high = power_mean(PowerMean(float(a), float(b), alpha, float(s)))
        tallies['power_mean'].add(low, high)

    report = LemmaReport(seed=seed, trials=trials, tol=tol,
                         lemmas={name: tally.summary for name, tally in tallies.items()})
    logger.info(f"Lemma suite finished with {report.total_violations} violations")
    return report
