from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

UNIFORM = "uniform"
INCONCLUSIVE = "inconclusive"
INFEASIBLE = "infeasible-by-theorem"


@dataclass
class ApportionReport:
    """Outcome of an apportionment attempt.

    ``transform`` is the apportioning matrix (unitary or SL), ``matrix`` the
    conjugated result it produces, and ``residual`` the largest deviation of
    an entry magnitude from ``kappa``.
    """

    status: str
    transform: np.ndarray
    kappa: float
    residual: float
    iterations: int = 0
    seed: int = 0
    matrix: Optional[np.ndarray] = None
    theorem: Optional[str] = None
    history: list = field(default_factory=list)

    @property
    def uniform(self) -> bool:
        return self.status == UNIFORM
