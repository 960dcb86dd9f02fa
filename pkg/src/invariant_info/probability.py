"""
Probability distributions over measurement outcomes
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import DISTRIBUTION_SUM_TOL, NEGATIVE_CLAMP_TOL, RENORMALIZE_TOL
from .errors import ConsistencyError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProbabilityDistribution:
    """Outcome probabilities p_1..p_n, each in [0, 1], summing to 1"""

    p: np.ndarray
    labels: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        values = np.array(self.p, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValidationError(f"distribution must be a non-empty 1-D array, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValidationError("distribution contains NaN or Inf entries")
        if np.any(values < 0) or np.any(values > 1):
            worst = float(max(-values.min(), values.max() - 1))
            raise ValidationError(f"probabilities must lie in [0, 1], worst excursion {worst:.3e}")
        total = float(values.sum())
        if abs(total - 1) > DISTRIBUTION_SUM_TOL:
            raise ValidationError(
                f"probabilities sum to {total:.12f}, off by {abs(total - 1):.3e} > {DISTRIBUTION_SUM_TOL:.0e}"
            )
        labels = tuple(str(x) for x in self.labels)
        if labels and len(labels) != values.size:
            raise ValidationError(f"{len(labels)} labels for {values.size} outcomes")

        values.setflags(write=False)
        object.__setattr__(self, 'p', values)
        object.__setattr__(self, 'labels', labels)

    @classmethod
    def from_values(cls, values: Sequence[float], labels: Sequence[str] = ()) -> 'ProbabilityDistribution':
        return cls(np.asarray(values, dtype=float), tuple(labels))

    @property
    def n(self) -> int:
        return int(self.p.size)

    def __len__(self) -> int:
        return self.n

    def to_list(self) -> List[float]:
        return [float(x) for x in self.p]


def clamp_probabilities(raw: np.ndarray, labels: Sequence[str] = (),
                        context: str = 'measurement',
                        renormalize_tol: Optional[float] = RENORMALIZE_TOL) -> ProbabilityDistribution:
    """
    Turn Born-rule values into a ProbabilityDistribution

    Negatives down to -1e-10 are rounding noise and clamp to 0; anything more
    negative means the inputs were not a valid state/measurement pair. A sum
    within ``renormalize_tol`` of 1 is renormalised, with a warning once it
    drifts past the distribution tolerance.

    Raises:
        ConsistencyError: large negatives or a sum too far from 1
    """
    values = np.asarray(raw, dtype=float)
    most_negative = float(values.min())
    if most_negative < -NEGATIVE_CLAMP_TOL:
        raise ConsistencyError(f"{context}: probability {most_negative:.3e} is below -{NEGATIVE_CLAMP_TOL:.0e}")
    values = np.clip(values, 0.0, 1.0)

    total = float(values.sum())
    if abs(total - 1) > renormalize_tol:
        raise ConsistencyError(f"{context}: probabilities sum to {total:.12f}, off by {abs(total - 1):.3e}")
    if abs(total - 1) > DISTRIBUTION_SUM_TOL:
        logger.warning(f"⚠️  {context}: renormalised probabilities summing to {total:.12f}")
        values = values / total
    elif total != 1.0:
        values = values / total

    return ProbabilityDistribution(values, tuple(labels))
