"""Exact Sylvester resultants for plane polynomial pairs.

The resultant in the kept variable is recovered by evaluating the Sylvester
matrix at integer sample points, taking fraction-free determinants, and
interpolating.  Evaluation commutes with the determinant, so degree drops of
the leading coefficient at individual samples are harmless as long as the
matrix layout follows the formal degrees.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Dict, List, Tuple

from .intlinalg import bareiss_determinant
from .poly2 import Poly2


def _integer_grid(poly: Poly2) -> Dict[Tuple[int, int], int]:
    """Coefficients scaled by the common denominator, as plain ints."""
    if poly.is_zero():
        return {}
    scale = lcm(*(c.denominator for c in poly.terms.values()))
    out = {}
    for key, c in poly.terms.items():
        v = c * scale
        out[key] = v.numerator
    return out


def _coeffs_in(grid: Dict[Tuple[int, int], int], elim: int) -> List[Dict[int, int]]:
    """grid reorganized as a list over elim-powers of {kept-power: coeff}."""
    top = max((k[elim] for k in grid), default=0)
    out: List[Dict[int, int]] = [dict() for _ in range(top + 1)]
    kept = 1 - elim
    for key, c in grid.items():
        out[key[elim]][key[kept]] = c
    return out


def _eval_coeff(coeff: Dict[int, int], s: int) -> int:
    return sum(c * s**e for e, c in coeff.items())


def _interpolate(xs: List[int], ys: List[int]) -> List[Fraction]:
    """Newton divided differences; coefficients of the interpolant, low first."""
    n = len(xs)
    table = [Fraction(y) for y in ys]
    newton = [table[0]]
    for level in range(1, n):
        for i in range(n - level):
            table[i] = (table[i + 1] - table[i]) / (xs[i + level] - xs[i])
        newton.append(table[0])
    coeffs = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        shifted = [Fraction(0)] * n
        for i in range(n - 1):
            shifted[i + 1] = coeffs[i]
        for i in range(n):
            coeffs[i] = shifted[i] - xs[k] * coeffs[i]
        coeffs[0] += newton[k]
    return coeffs


def resultant_eliminating(f: Poly2, g: Poly2, elim: int) -> List[int]:
    """Resultant of f and g with respect to the elim variable (0 or 1).

    Returns primitive integer coefficients in the kept variable, low order
    first.  The zero polynomial comes back as [0], signalling a common
    factor.  If either input does not involve the elim variable its
    coefficient list in the kept variable is returned instead, which keeps
    the eliminant property: kept-coordinates of common zeros are roots.

    Raises:
        ValueError: if either polynomial is zero, or neither involves elim.
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of a zero polynomial")
    if elim not in (0, 1):
        raise ValueError("elim must be 0 or 1")
    kept = 1 - elim
    fg = _integer_grid(f)
    gg = _integer_grid(g)
    p = max(k[elim] for k in fg)
    q = max(k[elim] for k in gg)
    if p == 0 and q == 0:
        raise ValueError("neither polynomial involves the eliminated variable")
    if p == 0:
        return _primitive([_eval_poly_list(fg, kept)])[0]
    if q == 0:
        return _primitive([_eval_poly_list(gg, kept)])[0]

    fc = _coeffs_in(fg, elim)
    gc = _coeffs_in(gg, elim)
    dkf = max(k[kept] for k in fg)
    dkg = max(k[kept] for k in gg)
    degree_bound = p * dkg + q * dkf
    if degree_bound == 0:
        # both univariate in elim: resultant is a constant
        mat = _sylvester([_eval_coeff(c, 0) for c in fc], [_eval_coeff(c, 0) for c in gc], p, q)
        d = bareiss_determinant(mat)
        return [d if d else 0]

    samples: List[int] = [0]
    k = 1
    while len(samples) < degree_bound + 1:
        samples.append(k)
        if len(samples) < degree_bound + 1:
            samples.append(-k)
        k += 1
    values = []
    for s in samples:
        frow = [_eval_coeff(c, s) for c in fc]
        grow = [_eval_coeff(c, s) for c in gc]
        values.append(bareiss_determinant(_sylvester(frow, grow, p, q)))
    coeffs = _interpolate(samples, values)
    ints = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("resultant interpolation produced a non-integer")
        ints.append(c.numerator)
    while len(ints) > 1 and ints[-1] == 0:
        ints.pop()
    return _primitive([ints])[0]


def _eval_poly_list(grid: Dict[Tuple[int, int], int], kept: int) -> List[int]:
    top = max(k[kept] for k in grid)
    out = [0] * (top + 1)
    for key, c in grid.items():
        out[key[kept]] += c
    return out


def _sylvester(fc: List[int], gc: List[int], p: int, q: int) -> List[List[int]]:
    """Sylvester matrix for coefficient lists indexed by power, low first."""
    n = p + q
    mat = [[0] * n for _ in range(n)]
    for r in range(q):
        for i in range(p + 1):
            mat[r][r + p - i] = fc[i] if i < len(fc) else 0
    for r in range(p):
        for i in range(q + 1):
            mat[q + r][r + q - i] = gc[i] if i < len(gc) else 0
    return mat


def _primitive(polys: List[List[int]]) -> List[List[int]]:
    from math import gcd

    out = []
    for coeffs in polys:
        g = 0
        for c in coeffs:
            g = gcd(g, abs(c))
        if g > 1:
            coeffs = [c // g for c in coeffs]
        out.append(coeffs)
    return out
