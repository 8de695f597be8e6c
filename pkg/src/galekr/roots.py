"""Real zero finding for pairs of plane polynomials over a chamber.

The main entry point projects the common zeros onto one coordinate through a
Sylvester resultant, isolates the real projections exactly, lifts each back by
solving the specialized univariate polynomials numerically, and polishes with
Newton on the original pair.  Results are classified against the chamber by
exact sign evaluation and, by default, cross-checked against the Bernstein
subdivision oracle on a slightly enlarged bounding box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from .chamber import Chamber
from .errors import DegenerateVertexError, NonGenericError, PrecisionError
from .poly2 import Poly2, clear_denominators, float_terms, restrict_to_line
from .resultant import resultant_eliminating
from .sturm import IsolatedRoot, polynomial_gcd, real_roots_univariate
from .subdivision import common_zeros

__all__ = [
    "BivariateZeros",
    "EdgePoint",
    "VertexLaunch",
    "solve_bivariate",
    "boundary_points",
    "admissible_vertices",
    "IsolatedRoot",
]


class BivariateZeros(NamedTuple):
    interior: List[Tuple[float, float]]
    boundary: List[Tuple[float, float]]
    total_real: int


@dataclass(frozen=True)
class EdgePoint:
    """A zero of a polynomial strictly inside a chamber edge."""

    edge_index: int
    t: float
    point: Tuple[float, float]


@dataclass(frozen=True)
class VertexLaunch:
    """Launch data for the branch of a master curve entering a vertex.

    In local coordinates u = p_a(y), v = p_b(y) the branch behaves like
    v = alpha * u**beta_exp near the vertex.
    """

    vertex_index: int
    point: Tuple[float, float]
    exact_point: Tuple[Fraction, Fraction]
    incident: Tuple[int, int]
    beta_exp: float
    log_alpha: float


def _specialize(poly: Poly2, kept: int, value: float) -> List[float]:
    """Float coefficients in the other variable at kept = value."""
    elim = 1 - kept
    top = poly.degree_in(elim)
    out = [0.0] * (top + 1)
    for i, j, c in float_terms(poly):
        e = i if elim == 0 else j
        k = j if elim == 0 else i
        out[e] += c * value**k
    return out


def _real_candidates(coeffs: List[float]) -> List[float]:
    scale = max((abs(c) for c in coeffs), default=0.0)
    if scale == 0.0:
        return []
    trimmed = list(coeffs)
    while len(trimmed) > 1 and abs(trimmed[-1]) <= 1e-12 * scale:
        trimmed.pop()
    if len(trimmed) <= 1:
        return []
    rts = np.roots(list(reversed(trimmed)))
    out = []
    for z in rts:
        if abs(z.imag) <= 1e-6 * (1.0 + abs(z.real)):
            out.append(float(z.real))
    return out


def _newton2(f: Poly2, g: Poly2, x: float, y: float, iters: int = 40) -> Optional[Tuple[float, float]]:
    fx, fy = f.diff(0), f.diff(1)
    gx, gy = g.diff(0), g.diff(1)
    for _ in range(iters):
        fv = f.eval_float(x, y)
        gv = g.eval_float(x, y)
        a, b = fx.eval_float(x, y), fy.eval_float(x, y)
        c, d = gx.eval_float(x, y), gy.eval_float(x, y)
        det = a * d - b * c
        if det == 0.0 or math.isnan(det) or math.isinf(det):
            return None
        dx = (fv * d - gv * b) / det
        dy = (a * gv - c * fv) / det
        x -= dx
        y -= dy
        if abs(dx) + abs(dy) < 1e-15 * (1.0 + abs(x) + abs(y)):
            return (x, y)
    return (x, y)


def _coeff_scale(poly: Poly2) -> float:
    return max((abs(c) for _, _, c in float_terms(poly)), default=1.0) or 1.0


def solve_bivariate(
    f: Poly2,
    g: Poly2,
    chamber: Optional[Chamber],
    *,
    cross_check: bool = True,
    boundary_tol: float = 1e-9,
) -> BivariateZeros:
    """All real common zeros of f and g, classified against the chamber.

    The eliminated variable is the one minimizing the combined degree of the
    pair (the Sylvester dimension); ties eliminate x.  Interior and boundary
    membership is decided by exact evaluation of the chamber forms at the
    polished points: margins above boundary_tol are interior, margins within
    it are boundary, anything else is outside and only counted in the total.

    Raises:
        NonGenericError: common factor, zero input, or a positive-dimensional
            intersection.
        PrecisionError: the subdivision cross-check disagrees or could not
            resolve a cluster.
    """
    if f.is_zero() or g.is_zero():
        raise NonGenericError("zero polynomial has no isolated zero set")
    est0 = f.degree_in(0) + g.degree_in(0)
    est1 = f.degree_in(1) + g.degree_in(1)
    elim = 0 if est0 <= est1 else 1
    if f.degree_in(elim) == 0 and g.degree_in(elim) == 0:
        elim = 1 - elim
    if f.degree_in(elim) == 0 and g.degree_in(elim) == 0:
        # both univariate in the same variable
        fi = clear_denominators([f.coefficient((k, 0) if elim == 1 else (0, k)) for k in range(f.degree_in(1 - elim) + 1)])
        gi = clear_denominators([g.coefficient((k, 0) if elim == 1 else (0, k)) for k in range(g.degree_in(1 - elim) + 1)])
        common = polynomial_gcd(fi, gi)
        if len(common) > 1 and real_roots_univariate(common):
            raise NonGenericError("common zero locus contains a line")
        return BivariateZeros([], [], 0)
    kept = 1 - elim

    resultant = resultant_eliminating(f, g, elim)
    if resultant == [0]:
        raise NonGenericError("polynomials share a factor")
    kept_roots = real_roots_univariate(resultant)

    scale_f = _coeff_scale(f)
    scale_g = _coeff_scale(g)
    zeros: List[Tuple[float, float]] = []
    for root in kept_roots:
        rv = root.value
        cf = _specialize(f, kept, rv)
        cg = _specialize(g, kept, rv)
        if max((abs(c) for c in cf), default=0.0) <= 1e-12 * scale_f and max(
            (abs(c) for c in cg), default=0.0
        ) <= 1e-12 * scale_g:
            raise NonGenericError("common zero locus contains a coordinate line")
        candidates = _real_candidates(cf) + _real_candidates(cg)
        for ev in candidates:
            if elim == 0:
                start = (ev, rv)
            else:
                start = (rv, ev)
            polished = _newton2(f, g, *start)
            if polished is None:
                continue
            px, py = polished
            kv = px if kept == 0 else py
            if abs(kv - rv) > 1e-6 * (1.0 + abs(rv)):
                continue
            if abs(f.eval_float(px, py)) > 1e-9 * scale_f:
                continue
            if abs(g.eval_float(px, py)) > 1e-9 * scale_g:
                continue
            for zx, zy in zeros:
                if abs(zx - px) <= 1e-8 * (1.0 + abs(px)) and abs(zy - py) <= 1e-8 * (1.0 + abs(py)):
                    break
            else:
                zeros.append((px, py))

    interior: List[Tuple[float, float]] = []
    boundary: List[Tuple[float, float]] = []
    if chamber is not None:
        for px, py in zeros:
            m = float(chamber.margin_exact((Fraction(px), Fraction(py))))
            if m > boundary_tol:
                interior.append((px, py))
            elif m >= -boundary_tol:
                boundary.append((px, py))
        if cross_check:
            _subdivision_check(f, g, chamber, zeros)
    else:
        interior = list(zeros)
    interior.sort()
    boundary.sort()
    return BivariateZeros(interior, boundary, len(zeros))


def _subdivision_check(f: Poly2, g: Poly2, chamber: Chamber, zeros: List[Tuple[float, float]]) -> None:
    xmin, xmax, ymin, ymax = chamber.bbox
    wx = (xmax - xmin) or 1.0
    wy = (ymax - ymin) or 1.0
    box = (xmin - 0.1 * wx, xmax + 0.1 * wx, ymin - 0.1 * wy, ymax + 0.1 * wy)
    oracle = common_zeros(f, g, box)
    if oracle.unresolved:
        raise PrecisionError(f"subdivision left {len(oracle.unresolved)} unresolved clusters")
    margin = 1e-6
    inside = [
        (x, y)
        for x, y in zeros
        if box[0] + margin < x < box[1] - margin and box[2] + margin < y < box[3] - margin
    ]
    for ox, oy in oracle.zeros:
        if not any(abs(ox - x) < 1e-6 and abs(oy - y) < 1e-6 for x, y in inside):
            raise PrecisionError(f"subdivision found an unmatched zero near ({ox:.9g}, {oy:.9g})")
    for x, y in inside:
        if not any(abs(ox - x) < 1e-6 and abs(oy - y) < 1e-6 for ox, oy in oracle.zeros):
            raise PrecisionError(f"resultant zero near ({x:.9g}, {y:.9g}) missing from subdivision")


def boundary_points(poly: Poly2, chamber: Chamber) -> List[EdgePoint]:
    """Zeros of poly in the relative interior of each chamber edge.

    Roots landing exactly on a vertex are excluded; those belong to the
    vertex bookkeeping, not to the open edges.

    Raises:
        NonGenericError: poly vanishes identically along some edge line.
    """
    out: List[EdgePoint] = []
    for idx, edge in enumerate(chamber.edges):
        v0 = chamber.vertices[edge.endpoints[0]].point
        v1 = chamber.vertices[edge.endpoints[1]].point
        direction = (v1[0] - v0[0], v1[1] - v0[1])
        coeffs = restrict_to_line(poly, v0, direction)
        if all(c == 0 for c in coeffs):
            raise NonGenericError(f"polynomial vanishes along edge {idx}")
        ints = clear_denominators(coeffs)
        for root in real_roots_univariate(ints, interval=(Fraction(0), Fraction(1))):
            lo, hi = root.interval
            if (lo, hi) == (0, 0) or (lo, hi) == (1, 1):
                continue
            t = root.value
            pt = (float(v0[0]) + t * float(direction[0]), float(v0[1]) + t * float(direction[1]))
            out.append(EdgePoint(edge_index=idx, t=t, point=pt))
    out.sort(key=lambda e: (e.edge_index, e.t))
    return out


def admissible_vertices(ms, chamber: Chamber, j: int) -> List[VertexLaunch]:
    """Vertices where the curve of the j-th master log enters the chamber.

    A vertex with incident forms p_a, p_b is admissible when the exponents
    beta_{a,j} and beta_{b,j} have opposite signs; the branch then satisfies
    v = alpha * u**beta_exp with u = p_a, v = p_b near the vertex.

    Raises:
        DegenerateVertexError: an incident exponent is zero.
    """
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    out: List[VertexLaunch] = []
    for vidx, vertex in enumerate(chamber.vertices):
        a, b = vertex.incident
        beta_a = ms.beta[a][j - 1]
        beta_b = ms.beta[b][j - 1]
        if beta_a == 0 or beta_b == 0:
            raise DegenerateVertexError(f"vertex {vidx}: incident exponent is zero for psi_{j}")
        if beta_a * beta_b >= 0:
            continue
        exps = -Fraction(beta_a) / Fraction(beta_b)
        log_alpha = -math.log(float(ms.constants[j - 1]))
        for i, form in enumerate(ms.forms):
            if i in (a, b):
                continue
            value = form.exact_value(vertex.point[0], vertex.point[1])
            log_alpha -= float(ms.beta[i][j - 1]) * math.log(float(value))
        log_alpha /= float(beta_b)
        out.append(
            VertexLaunch(
                vertex_index=vidx,
                point=(float(vertex.point[0]), float(vertex.point[1])),
                exact_point=vertex.point,
                incident=(a, b),
                beta_exp=float(exps),
                log_alpha=log_alpha,
            )
        )
    return out
