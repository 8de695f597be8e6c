"""Sparse exact polynomials in two variables.

Terms map exponent pairs ``(i, j)`` (for ``y1^i * y2^j``) to nonzero
``Fraction`` coefficients.  All arithmetic is exact; float evaluation goes
through :func:`float_terms` so hot loops can precompute power tables.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import InternalError
from .forms import LinearForm, Rational, as_fraction

Exponent = Tuple[int, int]
Terms = Dict[Exponent, Fraction]


class Poly2:
    """Immutable-by-convention sparse bivariate polynomial."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Exponent, Rational] | None = None):
        clean: Terms = {}
        if terms:
            for key, coef in terms.items():
                c = as_fraction(coef)
                if c:
                    clean[(int(key[0]), int(key[1]))] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Poly2":
        return Poly2()

    @staticmethod
    def constant(c: Rational) -> "Poly2":
        return Poly2({(0, 0): as_fraction(c)})

    @staticmethod
    def variable(index: int) -> "Poly2":
        if index == 0:
            return Poly2({(1, 0): Fraction(1)})
        if index == 1:
            return Poly2({(0, 1): Fraction(1)})
        raise ValueError("variable index must be 0 or 1")

    @staticmethod
    def from_form(form: LinearForm) -> "Poly2":
        return Poly2({
            (0, 0): form.constant,
            (1, 0): form.coeffs[0],
            (0, 1): form.coeffs[1],
        })

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "Poly2") -> "Poly2":
        out = dict(self.terms)
        for key, coef in other.terms.items():
            s = out.get(key, Fraction(0)) + coef
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Poly2(out)

    def __sub__(self, other: "Poly2") -> "Poly2":
        return self + (-other)

    def __neg__(self) -> "Poly2":
        return Poly2({key: -coef for key, coef in self.terms.items()})

    def __mul__(self, other: "Poly2") -> "Poly2":
        out: Terms = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                s = out.get(key, Fraction(0)) + c1 * c2
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return Poly2(out)

    def scale(self, c: Rational) -> "Poly2":
        f = as_fraction(c)
        if not f:
            return Poly2()
        return Poly2({key: coef * f for key, coef in self.terms.items()})

    def power(self, k: int) -> "Poly2":
        if k < 0:
            raise ValueError("negative power")
        out = Poly2.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def diff(self, var: int) -> "Poly2":
        out: Terms = {}
        for (i, j), coef in self.terms.items():
            if var == 0 and i:
                out[(i - 1, j)] = coef * i
            elif var == 1 and j:
                out[(i, j - 1)] = coef * j
        return Poly2(out)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((i + j for i, j in self.terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((key[var] for key in self.terms), default=-1)

    def max_abs_coeff(self) -> Fraction:
        return max((abs(c) for c in self.terms.values()), default=Fraction(0))

    def sorted_terms(self) -> List[Tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))

    def coefficient(self, i: int, j: int) -> Fraction:
        return self.terms.get((i, j), Fraction(0))

    def eval_exact(self, y1: Fraction, y2: Fraction) -> Fraction:
        total = Fraction(0)
        for (i, j), coef in self.terms.items():
            total += coef * y1**i * y2**j
        return total

    def eval_float(self, y1: float, y2: float) -> float:
        dx = self.degree_in(0)
        dy = self.degree_in(1)
        xs = [1.0] * (dx + 2)
        ys = [1.0] * (dy + 2)
        for k in range(1, dx + 1):
            xs[k] = xs[k - 1] * y1
        for k in range(1, dy + 1):
            ys[k] = ys[k - 1] * y2
        return sum(float(c) * xs[i] * ys[j] for (i, j), c in self.terms.items())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly2) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "Poly2(0)"
        bits = []
        for (i, j), coef in self.sorted_terms():
            mono = "".join(
                f"{name}^{e}" if e > 1 else (name if e == 1 else "")
                for name, e in (("x", i), ("y", j))
            )
            bits.append(f"{coef}{'*' if mono else ''}{mono}")
        return "Poly2(" + " + ".join(bits) + ")"


def float_terms(poly: Poly2) -> List[Tuple[int, int, float]]:
    """Terms with float coefficients, for hot evaluation loops."""
    return [(i, j, float(c)) for (i, j), c in poly.terms.items()]


def product_of_forms(forms: Iterable[LinearForm]) -> Poly2:
    out = Poly2.constant(1)
    for form in forms:
        out = out * Poly2.from_form(form)
    return out


def _divmod_lex(f: Poly2, g: Poly2) -> Tuple[Poly2, Poly2]:
    """Lex-order (x > y) division of f by g; returns quotient and remainder."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    lead = max(g.terms)
    lc = g.terms[lead]
    quo: Terms = {}
    rem: Terms = {}
    work = dict(f.terms)
    while work:
        key = max(work)
        coef = work.pop(key)
        if key[0] >= lead[0] and key[1] >= lead[1]:
            mono = (key[0] - lead[0], key[1] - lead[1])
            factor = coef / lc
            quo[mono] = quo.get(mono, Fraction(0)) + factor
            for (gi, gj), gc in g.terms.items():
                if (gi, gj) == lead:
                    continue
                tkey = (mono[0] + gi, mono[1] + gj)
                s = work.get(tkey, Fraction(0)) - factor * gc
                if s:
                    work[tkey] = s
                else:
                    work.pop(tkey, None)
        else:
            rem[key] = rem.get(key, Fraction(0)) + coef
    return Poly2(quo), Poly2(rem)


def divide_exact(f: Poly2, divisors: Sequence[Poly2 | LinearForm]) -> Poly2:
    """Divide f successively by each divisor, requiring zero remainder.

    Raises InternalError when any step leaves a remainder: callers use this
    for identities that are guaranteed to divide exactly.
    """
    out = f
    for div in divisors:
        g = Poly2.from_form(div) if isinstance(div, LinearForm) else div
        out, rem = _divmod_lex(out, g)
        if not rem.is_zero():
            raise InternalError("exact polynomial division left a remainder")
    return out


def restrict_to_line(
    poly: Poly2,
    point: Tuple[Fraction, Fraction],
    direction: Tuple[Fraction, Fraction],
) -> List[Fraction]:
    """Exact univariate coefficients of t -> poly(point + t*direction).

    Coefficients are listed from the constant term up.
    """
    px, py = as_fraction(point[0]), as_fraction(point[1])
    dx, dy = as_fraction(direction[0]), as_fraction(direction[1])
    deg_x = poly.degree_in(0)
    deg_y = poly.degree_in(1)

    def univ_powers(c0: Fraction, c1: Fraction, top: int) -> List[List[Fraction]]:
        # powers[k] = coefficients of (c0 + c1*t)^k
        powers = [[Fraction(1)]]
        for _ in range(top):
            prev = powers[-1]
            nxt = [Fraction(0)] * (len(prev) + 1)
            for idx, c in enumerate(prev):
                nxt[idx] += c * c0
                nxt[idx + 1] += c * c1
            powers.append(nxt)
        return powers

    xp = univ_powers(px, dx, max(deg_x, 0))
    yp = univ_powers(py, dy, max(deg_y, 0))
    out = [Fraction(0)] * (poly.degree() + 1 if poly.terms else 1)
    for (i, j), coef in poly.terms.items():
        a = xp[i]
        b = yp[j]
        for ia, ca in enumerate(a):
            if not ca:
                continue
            for ib, cb in enumerate(b):
                if cb:
                    out[ia + ib] += coef * ca * cb
    while len(out) > 1 and not out[-1]:
        out.pop()
    return out


def clear_denominators(coeffs: Sequence[Fraction]) -> List[int]:
    """Scale rational coefficients to coprime integers, preserving signs."""
    fracs = [as_fraction(c) for c in coeffs]
    if not any(fracs):
        return [0] * len(fracs)
    denom_lcm = 1
    for c in fracs:
        denom_lcm = denom_lcm * c.denominator // gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return [v // g for v in ints]
