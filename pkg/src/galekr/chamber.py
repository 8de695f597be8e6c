"""Exact construction of the positive chamber of a set of affine forms.

The chamber is the open planar region where every form is strictly positive.
Vertices are computed from pairwise intersections in rational arithmetic, so
membership of a candidate vertex is decided exactly.  Emptiness of a
vertex-free region falls back to Fourier-Motzkin elimination and
unboundedness to an exact recession cone test.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import EmptyError, InternalError, NonGenericError, UnboundedError
from .forms import LinearForm

Point = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Vertex:
    point: Point
    incident: Tuple[int, int]  # indices of the two forms vanishing here


@dataclass(frozen=True)
class Edge:
    form_index: int
    endpoints: Tuple[int, int]  # vertex indices, counterclockwise order


@dataclass(frozen=True)
class Chamber:
    forms: Tuple[LinearForm, ...]
    vertices: Tuple[Vertex, ...]  # counterclockwise
    edges: Tuple[Edge, ...]
    facet_forms: frozenset
    bbox: Tuple[float, float, float, float]  # xmin, xmax, ymin, ymax

    @property
    def facet_count(self) -> int:
        return len(self.edges)

    def margin(self, y: Tuple[float, float]) -> float:
        """Smallest form value at y; positive inside, negative outside."""
        return min(f.value(y[0], y[1]) for f in self.forms)

    def contains(self, y: Tuple[float, float]) -> bool:
        return self.margin(y) > 0.0

    def margin_exact(self, y: Point) -> Fraction:
        return min(f.exact_value(y[0], y[1]) for f in self.forms)

    def interior_point(self) -> Tuple[float, float]:
        cx = sum(v.point[0] for v in self.vertices) / len(self.vertices)
        cy = sum(v.point[1] for v in self.vertices) / len(self.vertices)
        return (float(cx), float(cy))

    def crossing(
        self, a: Tuple[float, float], b: Tuple[float, float]
    ) -> Optional[Tuple[int, float, Tuple[float, float]]]:
        """First boundary crossing of the segment from a to b.

        Works in exact arithmetic on the float inputs.  Returns
        ``(form_index, t, point)`` with the smallest crossing parameter, or
        None when no form changes sign along the segment.  Ties pick the
        lowest form index.
        """
        ax, ay = Fraction(a[0]), Fraction(a[1])
        bx, by = Fraction(b[0]), Fraction(b[1])
        best: Optional[Tuple[Fraction, int]] = None
        for idx, form in enumerate(self.forms):
            pa = form.exact_value(ax, ay)
            pb = form.exact_value(bx, by)
            if pa > 0 >= pb:
                t = pa / (pa - pb)
                if best is None or t < best[0] or (t == best[0] and idx < best[1]):
                    best = (t, idx)
        if best is None:
            return None
        t, idx = best
        px = ax + t * (bx - ax)
        py = ay + t * (by - ay)
        return (idx, float(t), (float(px), float(py)))


def build_polygon(forms: Sequence[LinearForm]) -> Chamber:
    """Build the chamber of the given forms.

    Raises EmptyError when the open region is empty, UnboundedError when it
    is nonempty but unbounded, NonGenericError when three forms meet at a
    candidate vertex.
    """
    forms = tuple(forms)
    m = len(forms)
    verts: List[Vertex] = []
    for i in range(m):
        ai, bi = forms[i].coeffs
        ci = forms[i].constant
        for k in range(i + 1, m):
            ak, bk = forms[k].coeffs
            det = ai * bk - ak * bi
            if det == 0:
                continue
            ck = forms[k].constant
            y1 = (-ci * bk + ck * bi) / det
            y2 = (-ai * ck + ak * ci) / det
            ok = True
            for r in range(m):
                if r in (i, k):
                    continue
                val = forms[r].exact_value(y1, y2)
                if val == 0:
                    raise NonGenericError(
                        f"forms {i}, {k}, {r} meet at ({y1}, {y2})"
                    )
                if val < 0:
                    ok = False
                    break
            if ok:
                verts.append(Vertex(point=(y1, y2), incident=(i, k)))

    if not verts:
        if _strictly_feasible(forms):
            raise UnboundedError("chamber is nonempty but has no vertices")
        raise EmptyError("chamber is empty")

    ray = _recession_ray(forms)
    if ray is not None:
        raise UnboundedError(f"chamber recedes in direction {ray}")
    if len(verts) < 3:
        raise InternalError("bounded chamber with fewer than three vertices")

    cx = sum(v.point[0] for v in verts) / len(verts)
    cy = sum(v.point[1] for v in verts) / len(verts)

    def cmp(u: Vertex, w: Vertex) -> int:
        du = (u.point[0] - cx, u.point[1] - cy)
        dw = (w.point[0] - cx, w.point[1] - cy)
        hu = 0 if (du[1] > 0 or (du[1] == 0 and du[0] > 0)) else 1
        hw = 0 if (dw[1] > 0 or (dw[1] == 0 and dw[0] > 0)) else 1
        if hu != hw:
            return -1 if hu < hw else 1
        cross = du[0] * dw[1] - du[1] * dw[0]
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return 0

    ordered = sorted(verts, key=functools.cmp_to_key(cmp))

    edges: List[Edge] = []
    for idx in range(len(ordered)):
        u = ordered[idx]
        w = ordered[(idx + 1) % len(ordered)]
        shared = set(u.incident) & set(w.incident)
        if len(shared) != 1:
            raise InternalError(
                f"consecutive vertices {u.point} and {w.point} share "
                f"{len(shared)} forms"
            )
        edges.append(Edge(form_index=shared.pop(),
                          endpoints=(idx, (idx + 1) % len(ordered))))

    if len({e.form_index for e in edges}) != len(edges):
        raise InternalError("a form supports two different edges")

    xs = [float(v.point[0]) for v in ordered]
    ys = [float(v.point[1]) for v in ordered]
    return Chamber(
        forms=forms,
        vertices=tuple(ordered),
        edges=tuple(edges),
        facet_forms=frozenset(e.form_index for e in edges),
        bbox=(min(xs), max(xs), min(ys), max(ys)),
    )


def _strictly_feasible(forms: Sequence[LinearForm]) -> bool:
    """Fourier-Motzkin test for the strict system p_i(y) > 0."""
    cons = [(f.coeffs[0], f.coeffs[1], f.constant) for f in forms]
    lowers = []  # b > 0: y > -(a x + c)/b
    uppers = []  # b < 0
    onedim = []  # (a, c): a x + c > 0
    for a, b, c in cons:
        if b > 0:
            lowers.append((a, b, c))
        elif b < 0:
            uppers.append((a, b, c))
        else:
            onedim.append((a, c))
    for al, bl, cl in lowers:
        for au, bu, cu in uppers:
            onedim.append((bl * au - bu * al, bl * cu - bu * cl))
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    for a, c in onedim:
        if a > 0:
            bound = -c / a
            if lo is None or bound > lo:
                lo = bound
        elif a < 0:
            bound = -c / a
            if hi is None or bound < hi:
                hi = bound
        elif c <= 0:
            return False
    if lo is not None and hi is not None:
        return lo < hi
    return True


def _recession_ray(forms: Sequence[LinearForm]) -> Optional[Tuple[Fraction, Fraction]]:
    """A nonzero direction d with grad(p_i) . d >= 0 for all i, if one exists.

    The recession cone of an intersection of half-planes either is {0} or
    contains a rotated gradient of one of the effective constraints, so
    checking those candidate rays is exhaustive.
    """
    grads = [f.coeffs for f in forms if f.coeffs != (0, 0)]
    if not grads:
        return (Fraction(1), Fraction(0))  # no effective constraint at all
    for a, b in grads:
        for d in ((-b, a), (b, -a)):
            if all(ga * d[0] + gb * d[1] >= 0 for ga, gb in grads):
                return d
    return None


def recession_cone_rays(forms: Sequence[LinearForm]) -> List[Tuple[Fraction, Fraction]]:
    """All candidate extreme rays of the recession cone, deduplicated.

    Empty when the cone is {0}, i.e. when the chamber is bounded.
    """
    grads = [f.coeffs for f in forms if f.coeffs != (0, 0)]
    rays: List[Tuple[Fraction, Fraction]] = []
    if not grads:
        raise UnboundedError("no effective constraints: the chamber is the plane")
    seen = set()
    for a, b in grads:
        for d in ((-b, a), (b, -a)):
            if all(ga * d[0] + gb * d[1] >= 0 for ga, gb in grads):
                scale = max(abs(d[0]), abs(d[1]))
                key = (d[0] / scale, d[1] / scale)
                if key not in seen:
                    seen.add(key)
                    rays.append(key)
    return rays
