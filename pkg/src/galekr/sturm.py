"""Sturm-sequence real root isolation for integer polynomials.

Coefficient lists run from the constant term upward.  All isolation logic is
exact: signs at rational points are computed by integer Horner evaluation of
``b^n p(a/b)``, and the Sturm chain is kept in primitive integer form with
only positive content removed, which preserves the sign semantics the count
relies on.  Floats appear only in the final refinement step.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, inf
from typing import List, Optional, Sequence, Tuple

from .poly2 import clear_denominators

IntPoly = List[int]


def normalize(coeffs: Sequence[int]) -> IntPoly:
    out = [int(c) for c in coeffs]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def from_fractions(coeffs: Sequence[Fraction]) -> IntPoly:
    return normalize(clear_denominators([Fraction(c) for c in coeffs]))


def degree(p: Sequence[int]) -> int:
    p = normalize(p)
    return -1 if p == [0] else len(p) - 1


def derivative(p: Sequence[int]) -> IntPoly:
    return normalize([i * c for i, c in enumerate(p)][1:]) if len(p) > 1 else [0]


def eval_fraction(p: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(list(p)):
        acc = acc * x + c
    return acc


def sign_at(p: Sequence[int], x: Fraction) -> int:
    """Sign of p(x) at a rational point, exactly."""
    a = x.numerator
    b = x.denominator
    n = len(p) - 1
    # b^n * p(a/b) via Horner with precomputed powers of b.
    powers = [1] * (n + 1)
    for k in range(1, n + 1):
        powers[k] = powers[k - 1] * b
    acc = 0
    for k in range(n, -1, -1):
        acc = acc * a + p[k] * powers[n - k]
    return (acc > 0) - (acc < 0)


def _content(p: Sequence[int]) -> int:
    g = 0
    for c in p:
        g = gcd(g, abs(c))
    return g or 1


def _primitive(p: Sequence[int]) -> IntPoly:
    p = normalize(p)
    g = _content(p)
    return [c // g for c in p]


def _pseudo_rem(f: IntPoly, g: IntPoly) -> IntPoly:
    """lc(g)^(deg f - deg g + 1) * f mod g, fraction free."""
    f = list(f)
    dg = len(g) - 1
    lc = g[-1]
    steps = len(f) - len(g) + 1
    for _ in range(steps):
        df = len(f) - 1
        if df < dg:
            break
        coef = f[-1]
        f = [c * lc for c in f]
        shift = df - dg
        for i, gc in enumerate(g):
            f[shift + i] -= coef * gc
        f = f[:-1]
        while len(f) > 1 and f[-1] == 0:
            f.pop()
        if f == [0]:
            break
    return normalize(f)


def _signed_rem(f: IntPoly, g: IntPoly) -> IntPoly:
    """Remainder of f by g up to a positive constant factor."""
    lc = g[-1]
    if lc < 0:
        # Pseudo-division scales by powers of a negative leading coefficient,
        # which would scramble signs; the rational division keeps them.
        r = _fraction_rem(f, g)
    else:
        r = _pseudo_rem(f, g)
    if r == [0]:
        return r
    return _primitive(r)


def _fraction_rem(f: IntPoly, g: IntPoly) -> IntPoly:
    fr = [Fraction(c) for c in f]
    dg = len(g) - 1
    lc = Fraction(g[-1])
    while len(fr) - 1 >= dg and any(fr):
        df = len(fr) - 1
        coef = fr[-1] / lc
        shift = df - dg
        for i, gc in enumerate(g):
            fr[shift + i] -= coef * gc
        fr.pop()
        while len(fr) > 1 and fr[-1] == 0:
            fr.pop()
    ints = clear_denominators(fr)
    return normalize(ints)


def sturm_chain(p: IntPoly) -> List[IntPoly]:
    """Sturm chain of a squarefree integer polynomial."""
    chain = [_primitive(p)]
    d = derivative(p)
    if degree(d) >= 0 and d != [0]:
        chain.append(_primitive(d))
    while degree(chain[-1]) > 0:
        rem = _signed_rem(chain[-2], chain[-1])
        if rem == [0]:
            break
        chain.append([-c for c in rem])
    return chain


def polynomial_gcd(f: IntPoly, g: IntPoly) -> IntPoly:
    """Primitive gcd via the Euclidean remainder sequence."""
    a, b = _primitive(f), _primitive(g)
    if degree(a) < degree(b):
        a, b = b, a
    while degree(b) > 0:
        r = _fraction_rem(a, b)
        if r == [0]:
            a, b = b, r
            break
        a, b = b, _primitive(r)
    if b != [0] and degree(b) == 0:
        return [1]
    return _primitive(a)


def squarefree_part(p: IntPoly) -> Tuple[IntPoly, IntPoly]:
    """Return (p / gcd(p, p'), gcd(p, p'))."""
    p = _primitive(p)
    if degree(p) <= 1:
        return p, [1]
    g = polynomial_gcd(p, derivative(p))
    if degree(g) == 0:
        return p, [1]
    return _exact_div(p, g), g


def _exact_div(f: IntPoly, g: IntPoly) -> IntPoly:
    fr = [Fraction(c) for c in f]
    out = [Fraction(0)] * (len(f) - len(g) + 1)
    dg = len(g) - 1
    lc = Fraction(g[-1])
    work = fr
    for pos in range(len(out) - 1, -1, -1):
        coef = work[pos + dg] / lc
        out[pos] = coef
        if coef:
            for i, gc in enumerate(g):
                work[pos + i] -= coef * gc
    return normalize(clear_denominators(out))


def _sign_variations_at(chain: Sequence[IntPoly], x) -> int:
    signs = []
    for poly in chain:
        if x is inf:
            s = (poly[-1] > 0) - (poly[-1] < 0)
        elif x is -inf:
            s = (poly[-1] > 0) - (poly[-1] < 0)
            if (len(poly) - 1) % 2:
                s = -s
        else:
            s = sign_at(poly, x)
        if s:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(chain: Sequence[IntPoly], a, b) -> int:
    """Number of roots of the chain's polynomial in the half-open (a, b]."""
    return _sign_variations_at(chain, a) - _sign_variations_at(chain, b)


def cauchy_bound(p: IntPoly) -> Fraction:
    lead = abs(p[-1])
    rest = max((abs(c) for c in p[:-1]), default=0)
    return Fraction(1) + Fraction(rest, lead)


@dataclass(frozen=True)
class IsolatedRoot:
    """One real root: refined float value, exact bracket, multiplicity flag."""

    value: float
    interval: Tuple[Fraction, Fraction]
    multiple: bool


def _isolate(chain: Sequence[IntPoly], sq: IntPoly, lo: Fraction, hi: Fraction) -> List[Tuple[Fraction, Fraction]]:
    """Disjoint intervals (a, b] each holding exactly one root of sq.

    Exact rational roots are returned as collapsed intervals (r, r].
    """
    out: List[Tuple[Fraction, Fraction]] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        k = count_roots(chain, a, b)
        if k == 0:
            continue
        if k == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        if sign_at(sq, mid) == 0:
            delta = (b - a) / 4
            while count_roots(chain, mid - delta, mid + delta) != 1:
                delta /= 2
            out.append((mid, mid))
            stack.append((a, mid - delta))
            stack.append((mid + delta, b))
        else:
            stack.append((a, mid))
            stack.append((mid, b))
    out.sort(key=lambda ab: ab[0])
    return out


def _refine(sq: IntPoly, a: Fraction, b: Fraction) -> Tuple[float, Fraction, Fraction]:
    """Refine the single root in (a, b] to about 1e-12 absolute error."""
    if a == b or sign_at(sq, b) == 0:
        return float(b), b, b
    # Exact bisection until the bracket is comfortably small for Newton.
    sa = sign_at(sq, a)
    while b - a > Fraction(1, 10**4):
        mid = (a + b) / 2
        sm = sign_at(sq, mid)
        if sm == 0:
            return float(mid), mid, mid
        if sm == sa:
            a = mid
        else:
            b = mid
    # Rescale the variable to [-1, 1] and the coefficients to unit size so
    # Newton in doubles cannot overflow even for huge integer inputs.
    radius = max(abs(a), abs(b), Fraction(1))
    r = Fraction(2) ** max(0, (radius.numerator // radius.denominator).bit_length())
    scaled = [c * r**i for i, c in enumerate(sq)]
    scale = max(abs(c) for c in scaled)
    fl = [float(Fraction(c, scale)) for c in scaled]
    dfl = [i * c for i, c in enumerate(fl)][1:]

    def horner(cs, u):
        acc = 0.0
        for c in reversed(cs):
            acc = acc * u + c
        return acc

    u = float((a + b) / (2 * r))
    lo_f, hi_f = float(a / r), float(b / r)
    for _ in range(60):
        dv = horner(dfl, u)
        if dv == 0.0:
            break
        step = horner(fl, u) / dv
        nxt = u - step
        if not (lo_f - 1e-9 <= nxt <= hi_f + 1e-9):
            break
        u = nxt
        if abs(step) < 1e-16 * max(1.0, abs(u)):
            break
    x = u * float(r)
    # Certify with exact signs a hair around the candidate.
    eps = Fraction(1, 10**12)
    cx = Fraction(x)
    lo_c, hi_c = cx - eps, cx + eps
    if max(a, lo_c) < min(b, hi_c):
        sl = sign_at(sq, lo_c) if lo_c > a else sa
        sr = sign_at(sq, hi_c) if hi_c < b else -sa
        if sl == 0:
            return float(lo_c), lo_c, lo_c
        if sr == 0:
            return float(hi_c), hi_c, hi_c
        if sl == sa and sr == -sa:
            return x, max(a, lo_c), min(b, hi_c)
    # Fall back to exact bisection all the way down.
    while b - a > Fraction(1, 10**13):
        mid = (a + b) / 2
        sm = sign_at(sq, mid)
        if sm == 0:
            return float(mid), mid, mid
        if sm == sa:
            a = mid
        else:
            b = mid
    return float((a + b) / 2), a, b


# Above this size the Sturm chain's coefficient growth makes isolation far
# too slow (resultants reach degree ~100 with 1000-bit coefficients); large
# inputs go through sympy's exact integer isolation instead, with the same
# certified refinement applied afterwards.
_STURM_MAX_DEGREE = 24
_STURM_MAX_BITS = 192


def _isolate_large(p: IntPoly) -> Tuple[IntPoly, List[Tuple[Fraction, Fraction, bool]]]:
    from sympy.polys.domains import ZZ
    from sympy.polys.rootisolation import dup_isolate_real_roots
    from sympy.polys.sqfreetools import dup_sqf_part

    dup = [ZZ(c) for c in reversed(p)]
    raw = dup_isolate_real_roots(dup, ZZ)
    sq = normalize([int(c) for c in reversed(dup_sqf_part(dup, ZZ))])
    out = []
    for (a, b), mult in raw:
        fa = Fraction(a.numerator, a.denominator)
        fb = Fraction(b.numerator, b.denominator)
        out.append((fa, fb, mult > 1))
    return sq, out


def _shrink_clean(sq: IntPoly, a: Fraction, b: Fraction) -> Tuple[Fraction, Fraction]:
    """Shrink (a, b) holding one strictly interior root until no endpoint is a root.

    Adjacent isolating intervals can share endpoints that are exact roots of
    neighbouring intervals; those poison sign-based refinement.  The sign of
    sq just right of a root equals the sign of its derivative there, which
    anchors the bisection while an endpoint sign is zero.
    """
    sa = sign_at(sq, a)
    slo = sa if sa != 0 else sign_at(derivative(sq), a)
    for _ in range(4000):
        if sign_at(sq, a) != 0 and sign_at(sq, b) != 0:
            return a, b
        mid = (a + b) / 2
        sm = sign_at(sq, mid)
        if sm == 0:
            return mid, mid
        if sm == slo:
            a = mid
        else:
            b = mid
    raise ArithmeticError("isolating interval has a root stuck at an endpoint")


def _separate_from(sq: IntPoly, a: Fraction, b: Fraction, cut: Fraction) -> int:
    """Position of the single root in (a, b) relative to cut: -1, 0, or +1."""
    if sign_at(sq, cut) == 0:
        return 0
    sa = sign_at(sq, a)
    while a < cut < b:
        mid = (a + b) / 2
        sm = sign_at(sq, mid)
        if sm == 0:
            return (mid > cut) - (mid < cut)
        if sm == sa:
            a = mid
        else:
            b = mid
    return 1 if a >= cut else -1


def real_roots_univariate(
    coeffs: Sequence[Fraction],
    interval: Optional[Tuple[Fraction, Fraction]] = None,
) -> List[IsolatedRoot]:
    """All real roots of the polynomial, optionally restricted to [lo, hi].

    Each root is reported once with a ``multiple`` flag set when it is a
    repeated root of the input.  The interval is closed: endpoint roots are
    included.
    """
    p = from_fractions([Fraction(c) for c in coeffs])
    if p == [0]:
        raise ValueError("zero polynomial has every point as a root")
    if degree(p) == 0:
        return []

    restricted = interval is not None
    if restricted:
        ilo, ihi = Fraction(interval[0]), Fraction(interval[1])
        if ilo > ihi:
            return []

    small = degree(p) <= _STURM_MAX_DEGREE and max(
        abs(c) for c in p
    ).bit_length() <= _STURM_MAX_BITS

    isolated: List[Tuple[Fraction, Fraction, bool]] = []
    if small:
        sq, cof = squarefree_part(p)
        chain = sturm_chain(sq)
        bound = cauchy_bound(sq) + 1
        lo = max(-bound, ilo) if restricted else -bound
        hi = min(bound, ihi) if restricted else bound
        has_cof = degree(cof) > 0
        cof_sq = squarefree_part(cof)[0] if has_cof else None
        cof_chain = sturm_chain(cof_sq) if has_cof else None
        if restricted and lo <= ihi and sign_at(sq, lo) == 0:
            mult = has_cof and sign_at(cof_sq, lo) == 0
            isolated.append((lo, lo, mult))
        if lo < hi:
            for a, b in _isolate(chain, sq, lo, hi):
                if a == b:
                    isolated.append((a, b, has_cof and sign_at(cof_sq, a) == 0))
                    continue
                mult = has_cof and count_roots(cof_chain, a, b) > 0
                if sign_at(sq, b) == 0:
                    # Half-open (a, b]: the root sits exactly at b.
                    isolated.append((b, b, mult))
                elif sign_at(sq, a) == 0:
                    # a is a root outside (a, b]; it poisons sign-anchored
                    # refinement, so shrink away from it first.
                    isolated.append((*_shrink_clean(sq, a, b), mult))
                else:
                    isolated.append((a, b, mult))
    else:
        sq, isolated = _isolate_large(p)
        cleaned = []
        for a, b, mult in isolated:
            if a != b:
                a, b = _shrink_clean(sq, a, b)
            cleaned.append((a, b, mult))
        isolated = cleaned
        if restricted:
            kept = []
            for a, b, mult in isolated:
                if a == b:
                    if ilo <= a <= ihi:
                        kept.append((a, b, mult))
                    continue
                if b <= ilo or a >= ihi:
                    continue
                pos_lo = _separate_from(sq, a, b, ilo) if a < ilo else 1
                pos_hi = _separate_from(sq, a, b, ihi) if b > ihi else -1
                if pos_lo == 0:
                    kept.append((ilo, ilo, mult))
                elif pos_hi == 0:
                    kept.append((ihi, ihi, mult))
                elif pos_lo > 0 and pos_hi < 0:
                    kept.append((max(a, ilo), min(b, ihi), mult))
            isolated = kept

    roots: List[IsolatedRoot] = []
    for a, b, mult in isolated:
        if a == b:
            roots.append(IsolatedRoot(float(a), (a, a), mult))
        else:
            value, ra, rb = _refine(sq, a, b)
            roots.append(IsolatedRoot(value, (ra, rb), mult))
    roots.sort(key=lambda r: r.value)
    return roots
