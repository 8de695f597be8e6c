"""Bernstein-coefficient subdivision for common zeros of two plane polynomials.

Serves as an independent oracle: a box where all Bernstein coefficients of
either polynomial share a strict sign contains no common zero.  Remaining
boxes are split until tiny, clustered, and polished by Newton; clusters that
refuse to polish are reported as unresolved rather than guessed at.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import List, Optional, Sequence, Tuple

from .poly2 import Poly2

Box = Tuple[float, float, float, float]  # xmin, xmax, ymin, ymax


def master_cleared_polynomials(ms) -> Tuple[Poly2, Poly2]:
    """Polynomial equations with the same positive zero set as psi_j = 1.

    Rational exponents are scaled out column-wise; on the chamber, where every
    form is positive, psi^L = 1 holds exactly when psi = 1, so the zero sets
    agree there.
    """
    from fractions import Fraction
    from math import lcm

    out = []
    for j in range(2):
        denoms = [ms.beta[i][j].denominator for i in range(len(ms.forms))]
        scale = lcm(*denoms) if denoms else 1
        c = Fraction(ms.constants[j]) ** scale
        pos = Poly2.constant(c.numerator)
        neg = Poly2.constant(c.denominator)
        for i, form in enumerate(ms.forms):
            e = ms.beta[i][j] * scale
            assert e.denominator == 1
            e = e.numerator
            if e > 0:
                pos = pos * Poly2.from_form(form).power(e)
            elif e < 0:
                neg = neg * Poly2.from_form(form).power(-e)
        out.append(pos - neg)
    return out[0], out[1]
Grid = List[List[float]]  # grid[i][j]: Bernstein index i in x, j in y


def _power_grid(poly: Poly2, box: Box) -> Grid:
    """Power-basis coefficients of poly restricted to the unit square of box."""
    xmin, xmax, ymin, ymax = box
    dx = poly.degree_in(0)
    dy = poly.degree_in(1)
    nx, ny = max(dx, 0) + 1, max(dy, 0) + 1
    grid = [[0.0] * ny for _ in range(nx)]
    wx = xmax - xmin
    wy = ymax - ymin
    # binomial expansion of (xmin + wx u)^i and (ymin + wy v)^j
    xpow = [[0.0] * nx for _ in range(nx)]
    for i in range(nx):
        for a in range(i + 1):
            xpow[i][a] = comb(i, a) * (xmin ** (i - a)) * (wx**a)
    ypow = [[0.0] * ny for _ in range(ny)]
    for j in range(ny):
        for b in range(j + 1):
            ypow[j][b] = comb(j, b) * (ymin ** (j - b)) * (wy**b)
    for (i, j), coef in poly.terms.items():
        c = float(coef)
        xi = xpow[i]
        yj = ypow[j]
        for a in range(i + 1):
            ca = c * xi[a]
            if ca == 0.0:
                continue
            row = grid[a]
            for b in range(j + 1):
                row[b] += ca * yj[b]
    return grid


def _power_to_bernstein(grid: Grid) -> Grid:
    nx = len(grid)
    ny = len(grid[0])
    # rows: x direction
    out = [[0.0] * ny for _ in range(nx)]
    for k in range(nx):
        for i in range(k + 1):
            f = comb(k, i) / comb(nx - 1, i)
            row = grid[i]
            orow = out[k]
            for j in range(ny):
                orow[j] += f * row[j]
    final = [[0.0] * ny for _ in range(nx)]
    for i in range(nx):
        for k in range(ny):
            acc = 0.0
            for j in range(k + 1):
                acc += comb(k, j) / comb(ny - 1, j) * out[i][j]
            final[i][k] = acc
    return final


def bernstein_grid(poly: Poly2, box: Box) -> Grid:
    return _power_to_bernstein(_power_grid(poly, box))


def _split_x(grid: Grid) -> Tuple[Grid, Grid]:
    """de Casteljau halving along the x (row-index) direction."""
    nx = len(grid)
    cols = list(zip(*grid))
    left_cols = []
    right_cols = []
    for col in cols:
        work = list(col)
        left = [work[0]]
        right = [work[-1]]
        for level in range(1, nx):
            work = [(work[i] + work[i + 1]) * 0.5 for i in range(len(work) - 1)]
            left.append(work[0])
            right.append(work[-1])
        right.reverse()
        left_cols.append(left)
        right_cols.append(right)
    left_grid = [list(r) for r in zip(*left_cols)]
    right_grid = [list(r) for r in zip(*right_cols)]
    return left_grid, right_grid


def _split_y(grid: Grid) -> Tuple[Grid, Grid]:
    ny = len(grid[0])
    low = []
    high = []
    for row in grid:
        work = list(row)
        l = [work[0]]
        h = [work[-1]]
        for level in range(1, ny):
            work = [(work[j] + work[j + 1]) * 0.5 for j in range(len(work) - 1)]
            l.append(work[0])
            h.append(work[-1])
        h.reverse()
        low.append(l)
        high.append(h)
    return low, high


def _excludes(grid: Grid, eps: float) -> bool:
    pos = all(v > eps for row in grid for v in row)
    if pos:
        return True
    return all(v < -eps for row in grid for v in row)


@dataclass
class SubdivisionResult:
    zeros: List[Tuple[float, float]]
    unresolved: List[Box]


def _newton2_poly(f: Poly2, g: Poly2, x: float, y: float, iters: int = 50):
    fx, fy = f.diff(0), f.diff(1)
    gx, gy = g.diff(0), g.diff(1)
    for _ in range(iters):
        fv = f.eval_float(x, y)
        gv = g.eval_float(x, y)
        a, b = fx.eval_float(x, y), fy.eval_float(x, y)
        c, d = gx.eval_float(x, y), gy.eval_float(x, y)
        det = a * d - b * c
        if det == 0.0 or not (abs(det) > 0):
            return None
        dx = (fv * d - gv * b) / det
        dy = (a * gv - c * fv) / det
        x -= dx
        y -= dy
        if abs(dx) + abs(dy) < 1e-15 * (1.0 + abs(x) + abs(y)):
            break
    return (x, y)


def common_zeros(
    f: Poly2,
    g: Poly2,
    box: Box,
    min_size: float = 1e-7,
    max_boxes: int = 400_000,
) -> SubdivisionResult:
    """All common zeros of f and g inside the box, by subdivision.

    Zeros within 1e-8 of each other merge.  A surviving tiny cluster where
    Newton fails to converge is returned in ``unresolved``.
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("subdivision needs nonzero polynomials")
    gf = bernstein_grid(f, box)
    gg = bernstein_grid(g, box)
    scale_f = max(abs(v) for row in gf for v in row) or 1.0
    scale_g = max(abs(v) for row in gg for v in row) or 1.0
    eps_f = 1e-12 * scale_f
    eps_g = 1e-12 * scale_g
    queue = [(box, gf, gg)]
    survivors: List[Box] = []
    visited = 0
    while queue:
        visited += 1
        if visited > max_boxes:
            raise RuntimeError("subdivision budget exhausted")
        (bx, gf, gg) = queue.pop()
        if _excludes(gf, eps_f) or _excludes(gg, eps_g):
            continue
        xmin, xmax, ymin, ymax = bx
        wx, wy = xmax - xmin, ymax - ymin
        if max(wx, wy) < min_size:
            survivors.append(bx)
            continue
        if wx >= wy:
            fl, fr = _split_x(gf)
            gl, gr = _split_x(gg)
            xm = 0.5 * (xmin + xmax)
            queue.append(((xmin, xm, ymin, ymax), fl, gl))
            queue.append(((xm, xmax, ymin, ymax), fr, gr))
        else:
            fl, fh = _split_y(gf)
            gl, gh = _split_y(gg)
            ym = 0.5 * (ymin + ymax)
            queue.append(((xmin, xmax, ymin, ym), fl, gl))
            queue.append(((xmin, xmax, ym, ymax), fh, gh))

    clusters = _merge_adjacent(survivors, min_size)

    zeros: List[Tuple[float, float]] = []
    unresolved: List[Box] = []
    for cl in clusters:
        cx = 0.5 * (cl[0] + cl[1])
        cy = 0.5 * (cl[2] + cl[3])
        diam = max(cl[1] - cl[0], cl[3] - cl[2])
        polished = _newton2_poly(f, g, cx, cy)
        ok = False
        if polished is not None:
            px, py = polished
            slack = 10 * diam + 100 * min_size
            inside = cl[0] - slack <= px <= cl[1] + slack and cl[2] - slack <= py <= cl[3] + slack
            if inside:
                fs = abs(f.eval_float(px, py)) / scale_f
                gs = abs(g.eval_float(px, py)) / scale_g
                if fs < 1e-9 and gs < 1e-9:
                    ok = True
        if ok:
            for zx, zy in zeros:
                if abs(zx - px) < 1e-8 and abs(zy - py) < 1e-8:
                    break
            else:
                zeros.append((px, py))
        else:
            unresolved.append(cl)
    zeros.sort()
    return SubdivisionResult(zeros=zeros, unresolved=unresolved)


def _merge_adjacent(boxes: List[Box], min_size: float) -> List[Box]:
    """Union boxes transitively when closer than min_size; returns bounding boxes."""
    n = len(boxes)
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    cells = {}
    for idx, b in enumerate(boxes):
        cx = int((b[0] + b[1]) / (2 * min_size))
        cy = int((b[2] + b[3]) / (2 * min_size))
        cells.setdefault((cx, cy), []).append(idx)
    for (cx, cy), members in cells.items():
        for dx in (-2, -1, 0, 1, 2):
            for dy in (-2, -1, 0, 1, 2):
                other = cells.get((cx + dx, cy + dy))
                if not other:
                    continue
                for i in members:
                    bi = boxes[i]
                    for j in other:
                        if j <= i:
                            continue
                        bj = boxes[j]
                        if (
                            bi[0] - min_size <= bj[1]
                            and bj[0] - min_size <= bi[1]
                            and bi[2] - min_size <= bj[3]
                            and bj[2] - min_size <= bi[3]
                        ):
                            ra, rb = find(i), find(j)
                            if ra != rb:
                                parent[ra] = rb
    merged = {}
    for idx, b in enumerate(boxes):
        root = find(idx)
        cur = merged.get(root)
        if cur is None:
            merged[root] = list(b)
        else:
            cur[0] = min(cur[0], b[0])
            cur[1] = max(cur[1], b[1])
            cur[2] = min(cur[2], b[2])
            cur[3] = max(cur[3], b[3])
    return [tuple(v) for v in merged.values()]
