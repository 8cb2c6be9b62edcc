"""Potential-outcome model kinds and their partial order."""

from __future__ import annotations

from netlue._compat import StrEnum


class Assumption(StrEnum):
    """Structural assumptions layered on neighborhood interference."""

    SYMMETRIC_RECEPTION = "symmetric_reception"
    ADDITIVE_MAIN = "additive_main"
    ADDITIVE_INTERFERENCE = "additive_interference"
    SYMMETRIC_SENDING = "symmetric_sending"


class InterferenceLayout(StrEnum):
    """How interference parameters are stored for a kind."""

    NONE = "none"
    MASK = "mask"
    DEGREE = "degree"
    EDGE = "edge"
    SENDER = "sender"
    SLOPE = "slope"


_S = Assumption.SYMMETRIC_RECEPTION
_A = Assumption.ADDITIVE_MAIN
_AI = Assumption.ADDITIVE_INTERFERENCE
_SS = Assumption.SYMMETRIC_SENDING


class ModelKind(StrEnum):
    SUTVA = "SUTVA"
    NIA = "NIA"
    SNIA = "SNIA"
    ANIA = "ANIA"
    NAIA = "NAIA"
    SANIA = "SANIA"
    SNAIA = "SNAIA"
    ANAIA = "ANAIA"
    NASIA = "NASIA"
    SANAIA = "SANAIA"
    SNASIA = "SNASIA"
    ANASIA = "ANASIA"
    SANASIA = "SANASIA"

    @property
    def assumptions(self) -> frozenset[Assumption]:
        return _ASSUMPTIONS[self]

    @property
    def layout(self) -> InterferenceLayout:
        return _LAYOUTS[self]

    @property
    def has_delta(self) -> bool:
        """True when treatment and interference interact (non-additive main effects)."""
        return self is not ModelKind.SUTVA and _A not in self.assumptions

    @property
    def symmetric_reception(self) -> bool:
        return _S in self.assumptions

    @property
    def additive_main(self) -> bool:
        return _A in self.assumptions

    @property
    def additive_interference(self) -> bool:
        return _AI in self.assumptions

    @property
    def symmetric_sending(self) -> bool:
        return _SS in self.assumptions

    def is_submodel_of(self, other: "ModelKind") -> bool:
        """True when every outcome of this kind is also an outcome of `other`."""
        if self is ModelKind.SUTVA:
            return True
        if other is ModelKind.SUTVA:
            return False
        return other.assumptions <= self.assumptions


_ASSUMPTIONS: dict[ModelKind, frozenset[Assumption]] = {
    ModelKind.SUTVA: frozenset({_S, _A, _AI, _SS}),
    ModelKind.NIA: frozenset(),
    ModelKind.SNIA: frozenset({_S}),
    ModelKind.ANIA: frozenset({_A}),
    ModelKind.NAIA: frozenset({_AI}),
    ModelKind.SANIA: frozenset({_S, _A}),
    ModelKind.SNAIA: frozenset({_S, _AI}),
    ModelKind.ANAIA: frozenset({_A, _AI}),
    ModelKind.NASIA: frozenset({_AI, _SS}),
    ModelKind.SANAIA: frozenset({_S, _A, _AI}),
    ModelKind.SNASIA: frozenset({_S, _AI, _SS}),
    ModelKind.ANASIA: frozenset({_A, _AI, _SS}),
    ModelKind.SANASIA: frozenset({_S, _A, _AI, _SS}),
}

_LAYOUTS: dict[ModelKind, InterferenceLayout] = {
    ModelKind.SUTVA: InterferenceLayout.NONE,
    ModelKind.NIA: InterferenceLayout.MASK,
    ModelKind.ANIA: InterferenceLayout.MASK,
    ModelKind.SNIA: InterferenceLayout.DEGREE,
    ModelKind.SANIA: InterferenceLayout.DEGREE,
    ModelKind.NAIA: InterferenceLayout.EDGE,
    ModelKind.ANAIA: InterferenceLayout.EDGE,
    ModelKind.SNAIA: InterferenceLayout.SLOPE,
    ModelKind.SANAIA: InterferenceLayout.SLOPE,
    ModelKind.NASIA: InterferenceLayout.SENDER,
    ModelKind.ANASIA: InterferenceLayout.SENDER,
    ModelKind.SNASIA: InterferenceLayout.SLOPE,
    ModelKind.SANASIA: InterferenceLayout.SLOPE,
}
