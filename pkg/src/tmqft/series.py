"""Truncation control and convergence diagnostics for series and quadratures."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SeriesControl:
    """Truncation order and tail tolerance for a summation or quadrature.

    ``n_max`` caps the number of terms (or quadrature refinements); ``tail_tol``
    is the bound the discarded tail must satisfy for the result to count as
    converged.
    """

    n_max: int = 400
    tail_tol: float = 1e-15

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if not self.tail_tol > 0:
            raise ValueError(f"tail_tol must be > 0, got {self.tail_tol}")


@dataclass
class SeriesReport:
    terms: int = 0
    tail_bound: float = 0.0
    converged: bool = True
    notes: list[str] = field(default_factory=list)

    def as_dict(self):
        return {
            "terms": self.terms,
            "tail_bound": self.tail_bound,
            "converged": self.converged,
            "notes": list(self.notes),
        }
