"""Result type shared by every structure test, plus the error hierarchy."""
from __future__ import annotations

from dataclasses import dataclass, field

from .operators import SymbolPair
from .trigpoly import TrigPoly


class StructureError(ValueError):
    """The input does not have the structure an operation requires."""


class KernelEmptyError(StructureError):
    """A Hankel section is injective, so no Beurling factor can be read off."""


class NotShiftInvariantError(StructureError):
    """A numerical kernel failed the shift-invariance check."""


class AmbiguousDecompositionError(StructureError):
    """The Toeplitz+Hankel system lost more rank than the known gauge."""


@dataclass
class ClassReport:
    """Verdict of a structure test.

    ``residual`` is the largest interior deviation, ``guard`` the number of
    boundary rows/columns excluded from it.  ``symbols`` carries auxiliary
    recovered symbols (inner factor, intermediate products) by name.
    """

    verdict: bool
    residual: float
    guard: int = 0
    recovered: SymbolPair | None = None
    gauge_note: str = ""
    details: dict = field(default_factory=dict)
    symbols: dict[str, TrigPoly] = field(default_factory=dict)

    def __bool__(self):
        return self.verdict

    def to_dict(self) -> dict:
        from .io import report_to_dict

        return report_to_dict(self)
