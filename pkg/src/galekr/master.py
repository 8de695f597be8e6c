"""Master functions on a chamber and their Jacobian curve polynomials.

A master system is a list of affine forms p_i together with a rational
exponent matrix beta (one row per form, one column per master function) and
positive constants c_j.  The j-th master logarithm is

    phi_j(y) = log c_j + sum_i beta[i][j] * log p_i(y),

defined where every p_i is positive.  Solutions of phi_1 = phi_2 = 0 inside
the positive chamber correspond to positive solutions of the original sparse
polynomial system.

The continuation needs two derived plane curves.  With m forms and
P = prod_i p_i:

    J2 = P * jac(phi_1, phi_2)

is a polynomial (the products of the other m-2 forms absorb the poles), and

    J1 = P^2 * jac(phi_1, J2 / P)

is again a polynomial.  Both are computed exactly; the division by the forms
must leave no remainder, anything else means the input was inconsistent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .chamber import Chamber, build_polygon
from .errors import DomainError, InternalError, NonGenericError
from .forms import LinearForm, Rational, as_fraction
from .poly2 import Poly2, product_of_forms


@dataclass
class MasterSystem:
    forms: Tuple[LinearForm, ...]
    beta: Tuple[Tuple[Fraction, Fraction], ...]
    constants: Tuple[Fraction, Fraction]
    n: int
    chamber: Chamber
    # Index of a bounding form appended by the projective transformation,
    # or None when the chamber was bounded to begin with.
    synthesized_index: Optional[int] = None
    _beta_float: Tuple[Tuple[float, float], ...] = field(init=False, repr=False)
    _log_constants: Tuple[float, float] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._beta_float = tuple((float(b1), float(b2)) for b1, b2 in self.beta)
        self._log_constants = (
            math.log(float(self.constants[0])),
            math.log(float(self.constants[1])),
        )

    @property
    def num_forms(self) -> int:
        return len(self.forms)

    def beta_column(self, j: int) -> Tuple[Fraction, ...]:
        _check_j(j)
        return tuple(row[j - 1] for row in self.beta)


def _check_j(j: int) -> None:
    if j not in (1, 2):
        raise ValueError("master function index must be 1 or 2")


def make_master_system(
    forms: Sequence[LinearForm],
    beta: Sequence[Sequence[Rational]],
    constants: Sequence[Rational] = (1, 1),
    n: Optional[int] = None,
    chamber: Optional[Chamber] = None,
    synthesized_index: Optional[int] = None,
) -> MasterSystem:
    """Validate the data and build a MasterSystem.

    ``n`` is the number of variables of the original sparse system; when
    omitted it is inferred from the shape: m - 2 forms normally, m - 3 when
    every beta column sums to zero (the signature of a system that carries a
    redundant bounding form).
    """
    forms = tuple(forms)
    m = len(forms)
    if m < 3:
        raise ValueError("need at least three forms to bound a planar chamber")
    if len(beta) != m:
        raise ValueError("beta must have one row per form")
    beta_rows = tuple(
        (as_fraction(row[0]), as_fraction(row[1])) for row in beta
    )
    for j in (0, 1):
        if all(row[j] == 0 for row in beta_rows):
            raise ValueError(f"beta column {j + 1} is identically zero")
    consts = (as_fraction(constants[0]), as_fraction(constants[1]))
    if consts[0] <= 0 or consts[1] <= 0:
        raise ValueError("master constants must be positive")

    _check_general_position(forms)

    if n is None:
        zero_sums = all(
            sum(row[j] for row in beta_rows) == 0 for j in (0, 1)
        )
        n = m - 3 if zero_sums else m - 2
    if chamber is None:
        chamber = build_polygon(forms)
    return MasterSystem(
        forms=forms,
        beta=beta_rows,
        constants=consts,
        n=n,
        chamber=chamber,
        synthesized_index=synthesized_index,
    )


def _check_general_position(forms: Sequence[LinearForm]) -> None:
    # No two forms proportional, no three concurrent.
    m = len(forms)
    for i in range(m):
        ci, (ai, bi) = forms[i].constant, forms[i].coeffs
        for k in range(i + 1, m):
            ck, (ak, bk) = forms[k].constant, forms[k].coeffs
            if ai * bk - ak * bi == 0 and ai * ck - ak * ci == 0 and bi * ck - bk * ci == 0:
                raise NonGenericError(f"forms {i} and {k} are proportional")
    for i in range(m):
        ai, bi = forms[i].coeffs
        for k in range(i + 1, m):
            ak, bk = forms[k].coeffs
            det = ai * bk - ak * bi
            if det == 0:
                continue
            ci, ck = forms[i].constant, forms[k].constant
            # Intersection point of forms i and k.
            y1 = (-ci * bk + ck * bi) / det
            y2 = (-ai * ck + ak * ci) / det
            for r in range(m):
                if r in (i, k):
                    continue
                if forms[r].exact_value(y1, y2) == 0:
                    raise NonGenericError(
                        f"forms {i}, {k}, {r} meet at a common point"
                    )


# -- evaluation -------------------------------------------------------------


def phi_eval(ms: MasterSystem, j: int, y: Tuple[float, float]) -> float:
    """Value of the j-th master logarithm at y; DomainError off the domain."""
    _check_j(j)
    total = ms._log_constants[j - 1]
    col = j - 1
    for form, brow in zip(ms.forms, ms._beta_float):
        p = form.value(y[0], y[1])
        if p <= 0.0:
            raise DomainError(f"form value {p} is not positive at {y}")
        b = brow[col]
        if b:
            total += b * math.log(p)
    return total


def phi_gradient(ms: MasterSystem, j: int, y: Tuple[float, float]) -> Tuple[float, float]:
    """Gradient of the j-th master logarithm at y."""
    _check_j(j)
    col = j - 1
    g1 = 0.0
    g2 = 0.0
    for form, brow in zip(ms.forms, ms._beta_float):
        p = form.value(y[0], y[1])
        if p <= 0.0:
            raise DomainError(f"form value {p} is not positive at {y}")
        b = brow[col]
        if b:
            a1, a2 = form.gradient()
            g1 += b * a1 / p
            g2 += b * a2 / p
    return (g1, g2)


def master_residual(ms: MasterSystem, y: Tuple[float, float]) -> float:
    """max_j |psi_j(y) - 1| where psi_j = exp(phi_j)."""
    return max(abs(math.expm1(phi_eval(ms, j, y))) for j in (1, 2))


# -- Jacobian chain ---------------------------------------------------------


def jacobian2_polynomial(ms: MasterSystem) -> Poly2:
    """Exact polynomial J2 = (prod p_i) * jac(phi_1, phi_2).

    Expanded over pairs of forms: the (i, k) term contributes the 2x2
    gradient determinant of p_i and p_k weighted by the corresponding beta
    minor, times the product of the remaining forms.
    """
    m = ms.num_forms
    forms = ms.forms
    beta = ms.beta
    total = Poly2.zero()
    for i in range(m):
        ai, bi = forms[i].coeffs
        for k in range(i + 1, m):
            minor = beta[i][0] * beta[k][1] - beta[k][0] * beta[i][1]
            if not minor:
                continue
            ak, bk = forms[k].coeffs
            grad_det = ai * bk - ak * bi
            if not grad_det:
                continue
            rest = product_of_forms(
                forms[r] for r in range(m) if r not in (i, k)
            )
            total = total + rest.scale(minor * grad_det)
    expected = m - 2 if ms.synthesized_index is None else m - 3
    if total.degree() > expected:
        raise InternalError(
            f"J2 degree {total.degree()} exceeds expected bound {expected}"
        )
    return total


def jacobian1_polynomial(ms: MasterSystem, j2: Optional[Poly2] = None) -> Poly2:
    """Exact polynomial J1 = (prod p_i) * jac(J2, phi_2).

    With A = P * d(phi_2)/dy1 and B = P * d(phi_2)/dy2 (both polynomials,
    the products of the other forms absorb the poles):

        J1 = B * dJ2/dy1 - A * dJ2/dy2.

    On the curve J2 = 0 the two master gradients are parallel, so inside the
    chamber J1 vanishes exactly where the trace direction becomes orthogonal
    to both of them: the turning points of phi_1 and phi_2 along the curve.
    This is the polynomial whose zeros seed and stop the first stage.
    """
    if j2 is None:
        j2 = jacobian2_polynomial(ms)
    m = ms.num_forms
    forms = ms.forms
    beta = ms.beta
    a_poly = Poly2.zero()
    b_poly = Poly2.zero()
    for i in range(m):
        b2 = beta[i][1]
        if not b2:
            continue
        rest = product_of_forms(forms[r] for r in range(m) if r != i)
        ai, bi = forms[i].coeffs
        if ai:
            a_poly = a_poly + rest.scale(b2 * ai)
        if bi:
            b_poly = b_poly + rest.scale(b2 * bi)
    out = b_poly * j2.diff(0) - a_poly * j2.diff(1)
    bound = 2 * ms.n if ms.synthesized_index is None else 2 * ms.n + 1
    if out.degree() > bound:
        raise InternalError(
            f"J1 degree {out.degree()} exceeds expected bound {bound}"
        )
    return out
