"""Affine degree-one forms p(y) = constant + a*y1 + b*y2 with rational data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

Rational = Union[int, Fraction, str]


def as_fraction(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(str(value))


@dataclass(frozen=True)
class LinearForm:
    """Exact affine form on the plane.

    ``coeffs`` holds the gradient ``(a, b)``; the form is
    ``constant + a*y1 + b*y2``.  A form must not be identically zero.
    """

    constant: Fraction
    coeffs: Tuple[Fraction, Fraction]

    def __post_init__(self) -> None:
        c = as_fraction(self.constant)
        a = as_fraction(self.coeffs[0])
        b = as_fraction(self.coeffs[1])
        object.__setattr__(self, "constant", c)
        object.__setattr__(self, "coeffs", (a, b))
        if c == 0 and a == 0 and b == 0:
            raise ValueError("linear form is identically zero")
        object.__setattr__(self, "_floats", (float(c), float(a), float(b)))

    def value(self, y1: float, y2: float) -> float:
        c, a, b = self._floats  # type: ignore[attr-defined]
        return c + a * y1 + b * y2

    def exact_value(self, y1: Fraction, y2: Fraction) -> Fraction:
        return self.constant + self.coeffs[0] * y1 + self.coeffs[1] * y2

    def gradient(self) -> Tuple[float, float]:
        _, a, b = self._floats  # type: ignore[attr-defined]
        return (a, b)

    def __str__(self) -> str:
        parts = []
        if self.constant:
            parts.append(str(self.constant))
        for coef, name in zip(self.coeffs, ("y1", "y2")):
            if coef == 0:
                continue
            sign = "+" if coef > 0 else "-"
            mag = abs(coef)
            lead = "" if mag == 1 else f"{mag}*"
            parts.append(f"{sign} {lead}{name}" if parts else
                         (f"{'-' if coef < 0 else ''}{lead}{name}"))
        return " ".join(parts) if parts else "0"


def linear_form(constant: Rational, a: Rational, b: Rational) -> LinearForm:
    return LinearForm(as_fraction(constant), (as_fraction(a), as_fraction(b)))


def eval_form(form: LinearForm, y: Tuple[float, float]) -> float:
    """Float value of the form at a point given as a pair."""
    return form.value(y[0], y[1])
