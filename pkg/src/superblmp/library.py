"""Registered functions of y used for q(y) (reduction) and m(y) (shift)."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import jet
from .errors import DescriptorError

REGISTRY = ("zero", "identity", "poly", "sin", "exp")


@dataclass(frozen=True)
class NamedFunction:
    """One of ``zero, identity, poly(coeffs), sin(a*y), exp(a*y)``."""

    name: str = "zero"
    a: float = 1.0
    coeffs: tuple = field(default=())

    def __post_init__(self):
        if self.name not in REGISTRY:
            raise DescriptorError(f"unknown function {self.name!r}; choose from {REGISTRY}")

    def __call__(self, y):
        if self.name == "zero":
            return 0.0 * y
        if self.name == "identity":
            return y
        if self.name == "sin":
            return jet.sin(self.a * y)
        if self.name == "exp":
            return jet.exp(self.a * y)
        acc = 0.0 * y
        for c in reversed(self.coeffs):
            acc = acc * y + c
        return acc

    def derivative_at(self, y: float) -> complex:
        return self(jet.Jet.var("y", y, (0, 1, 0))).partial(0, 1, 0)

    def to_dict(self):
        if self.name == "poly":
            return {"name": "poly", "coeffs": list(self.coeffs)}
        if self.name in ("sin", "exp"):
            return {"name": self.name, "a": self.a}
        return {"name": self.name}

    @classmethod
    def from_dict(cls, d):
        if d is None:
            return cls()
        if isinstance(d, str):
            return cls(d)
        try:
            return cls(d["name"], float(d.get("a", 1.0)), tuple(float(c) for c in d.get("coeffs", ())))
        except (KeyError, TypeError, ValueError) as exc:
            raise DescriptorError(f"bad function descriptor {d!r}: {exc}") from None


ZERO = NamedFunction("zero")
IDENTITY = NamedFunction("identity")


@dataclass(frozen=True)
class ReductionSpec:
    """z = x + q(y); u = -2 d_x log tau - m(y)."""

    q: NamedFunction = IDENTITY
    m: NamedFunction = ZERO

    def to_dict(self):
        return {"q": self.q.to_dict(), "m": self.m.to_dict()}
