"""Exact linear algebra over the integers.

Matrices are plain lists of lists of Python ints, row major.  Everything here
is exact; nothing ever rounds.  The Smith normal form drives three consumers:
lattice saturation checks, integer kernel bases, and solving ``A X = B`` over
the integers.

Typical sizes are tiny (rows and columns both below ten), so the quadratic
bookkeeping of the classical algorithms is irrelevant; correctness and
predictable pivoting are what matter.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

IntMatrix = List[List[int]]


def identity_matrix(k: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    """Multiply two integer matrices."""
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if inner else 0
    out = []
    for row in a:
        if len(row) != inner:
            raise ValueError("matrix dimensions do not match")
        out.append([sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)])
    return out


def mat_vec(a: Sequence[Sequence[int]], v: Sequence[int]) -> List[int]:
    return [sum(row[k] * v[k] for k in range(len(v))) for row in a]


def _swap_rows(m: IntMatrix, i: int, j: int) -> None:
    m[i], m[j] = m[j], m[i]


def _swap_cols(m: IntMatrix, i: int, j: int) -> None:
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m: IntMatrix, dst: int, src: int, factor: int) -> None:
    if factor:
        row_s = m[src]
        row_d = m[dst]
        for k in range(len(row_d)):
            row_d[k] += factor * row_s[k]


def _add_col(m: IntMatrix, dst: int, src: int, factor: int) -> None:
    if factor:
        for row in m:
            row[dst] += factor * row[src]


def _negate_row(m: IntMatrix, i: int) -> None:
    m[i] = [-x for x in m[i]]


def smith_normal_form(a: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Compute the Smith normal form with its unimodular transforms.

    Args:
        a: integer matrix with ``m`` rows and ``n`` columns.

    Returns:
        A triple ``(d, u, v)`` where ``u`` is ``m x m`` unimodular, ``v`` is
        ``n x n`` unimodular, ``u a v = d``, and ``d`` is diagonal with
        nonnegative entries satisfying ``d[0][0] | d[1][1] | ...``.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(row) for row in a]
    u = identity_matrix(m)
    v = identity_matrix(n)

    t = 0
    while t < min(m, n):
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                val = abs(d[i][j])
                if val and (best is None or val < best):
                    best = val
                    piv = (i, j)
        if piv is None:
            break
        if piv[0] != t:
            _swap_rows(d, t, piv[0])
            _swap_rows(u, t, piv[0])
        if piv[1] != t:
            _swap_cols(d, t, piv[1])
            _swap_cols(v, t, piv[1])

        while True:
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    _add_row(d, i, t, -q)
                    _add_row(u, i, t, -q)
                    if d[i][t]:
                        # Remainder became the smaller pivot; promote it.
                        _swap_rows(d, t, i)
                        _swap_rows(u, t, i)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    _add_col(d, j, t, -q)
                    _add_col(v, j, t, -q)
                    if d[t][j]:
                        _swap_cols(d, t, j)
                        _swap_cols(v, t, j)
                        dirty = True
                        break
            if dirty:
                continue
            # Row and column at t are clear; enforce divisibility of the rest.
            pivot = d[t][t]
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % pivot:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            _add_row(d, t, offender, 1)
            _add_row(u, t, offender, 1)
        if d[t][t] < 0:
            _negate_row(d, t)
            _negate_row(u, t)
        t += 1

    return d, u, v


def invariant_factors(a: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero diagonal entries of the Smith normal form, in order."""
    d, _, _ = smith_normal_form(a)
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i]:
            out.append(d[i][i])
    return out


def integer_kernel_basis(a: Sequence[Sequence[int]]) -> List[List[int]]:
    """Basis of the integer kernel ``{x : a x = 0}``.

    The basis is saturated: it spans the full sublattice of integer kernel
    vectors, not a finite-index subgroup.  Returned vectors are the columns
    of the Smith column transform beyond the rank.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d, _, v = smith_normal_form(a)
    rank = sum(1 for i in range(min(m, n)) if d[i][i])
    return [[v[i][j] for i in range(n)] for j in range(rank, n)]


def solve_integer_matrix(
    a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]
) -> Optional[IntMatrix]:
    """Solve ``a x = b`` over the integers.

    Args:
        a: ``m x n`` integer matrix.
        b: ``m x p`` integer matrix.

    Returns:
        An ``n x p`` integer solution with free coordinates set to zero, or
        ``None`` when no integer solution exists.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    p = len(b[0]) if b else 0
    d, u, v = smith_normal_form(a)
    rank = sum(1 for i in range(min(m, n)) if d[i][i])
    ub = mat_mul(u, b)
    y = [[0] * p for _ in range(n)]
    for i in range(m):
        for j in range(p):
            if i < rank:
                q, r = divmod(ub[i][j], d[i][i])
                if r:
                    return None
                y[i][j] = q
            elif ub[i][j]:
                return None
    return mat_mul(v, y)


def bareiss_determinant(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_gauss_solve(
    a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]
) -> Optional[List[List[Fraction]]]:
    """Solve a square rational system ``a x = b`` exactly.

    Returns ``None`` when ``a`` is singular.
    """
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(x) for x in brow] for row, brow in zip(a, b)]
    p = len(b[0]) if b else 0
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [[m[i][n + j] for j in range(p)] for i in range(n)]
