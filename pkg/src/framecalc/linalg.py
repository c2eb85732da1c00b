"""Exact linear algebra over the rationals.

Dense routines (echelon form, rank, nullspace, inverse, Pfaffian) work on
lists of :class:`fractions.Fraction` rows.  The sparse affine solver keeps
a rational coefficient matrix but allows polynomial right-hand sides, so
parametrized inhomogeneous systems solve exactly.

Pivoting is fixed: columns left to right, first row with a nonzero entry
in the pivot column (row-major order).  No size heuristics are needed
because the arithmetic is exact, and the fixed rule makes every echelon
output canonical and reproducible.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InconsistencyError
from .scalars import Scalar

_F0 = Fraction(0)
_F1 = Fraction(1)


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form.  Returns (matrix, pivot column indices)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    prow = 0
    for col in range(ncols):
        pr = None
        for r in range(prow, len(m)):
            if m[r][col]:
                pr = r
                break
        if pr is None:
            continue
        m[prow], m[pr] = m[pr], m[prow]
        pv = m[prow][col]
        if pv != 1:
            m[prow] = [x / pv for x in m[prow]]
        lead = m[prow]
        for r in range(len(m)):
            if r != prow and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], lead)]
        pivots.append(col)
        prow += 1
        if prow == len(m):
            break
    return m, pivots


def rank(rows: list[list[Fraction]]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Canonical basis of {x : rows @ x = 0}, as reduced echelon rows."""
    if not rows:
        basis = [[_F1 if c == f else _F0 for c in range(ncols)] for f in range(ncols)]
        return basis
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [_F0] * ncols
        v[f] = _F1
        for r, c in enumerate(pivots):
            v[c] = -red[r][f]
        basis.append(v)
    if not basis:
        return []
    canon, _ = rref(basis)
    return [row for row in canon if any(row)]


def invert(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    """Inverse of a square rational matrix.  Raises ValueError if singular."""
    n = len(mat)
    aug = [list(mat[r]) + [_F1 if c == r else _F0 for c in range(n)] for r in range(n)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red[:n]]


def pfaffian(mat: list[list[Fraction]]) -> Fraction:
    """Pfaffian of an antisymmetric rational matrix (0 for odd size)."""
    n = len(mat)
    if n == 0:
        return _F1
    if n % 2:
        return _F0

    def rec(idx: list[int]) -> Fraction:
        if not idx:
            return _F1
        i0 = idx[0]
        total = _F0
        sign = _F1
        for j in idx[1:]:
            a = mat[i0][j]
            if a:
                rest = [x for x in idx if x != i0 and x != j]
                total += sign * a * rec(rest)
            sign = -sign
        return total

    return rec(list(range(n)))


def solve_affine_sparse(
    rows: list[dict[int, Fraction]],
    rhs: list[Scalar],
    nunknowns: int,
) -> tuple[list[Scalar], list[list[Fraction]]]:
    """Solve ``rows @ x = rhs`` exactly.

    Coefficients are rational; right-hand sides may be polynomial scalars.
    Returns (particular solution with free unknowns set to zero, canonical
    rational nullspace basis).  Raises :class:`InconsistencyError` when the
    system has no solution.
    """
    work = [dict(r) for r in rows]
    right = list(rhs)
    pivots: list[tuple[int, int]] = []  # (column, row)
    used = [False] * len(work)
    for col in range(nunknowns):
        pr = None
        for r in range(len(work)):
            if not used[r] and work[r].get(col):
                pr = r
                break
        if pr is None:
            continue
        used[pr] = True
        pv = work[pr][col]
        if pv != 1:
            work[pr] = {c: v / pv for c, v in work[pr].items()}
            right[pr] = right[pr] / pv
        lead = work[pr]
        lead_rhs = right[pr]
        for r in range(len(work)):
            if r == pr:
                continue
            f = work[r].get(col)
            if not f:
                continue
            row = work[r]
            for c, v in lead.items():
                nv = row.get(c, _F0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            if lead_rhs:
                right[r] = right[r] - lead_rhs * f
        pivots.append((col, pr))

    for r in range(len(work)):
        if not work[r] and right[r]:
            raise InconsistencyError(f"system is inconsistent (row {r}: 0 = {right[r]})")

    particular = [Scalar.zero()] * nunknowns
    for col, r in pivots:
        particular[col] = right[r]

    pivot_cols = {col for col, _ in pivots}
    basis: list[list[Fraction]] = []
    for f in range(nunknowns):
        if f in pivot_cols:
            continue
        v = [_F0] * nunknowns
        v[f] = _F1
        for col, r in pivots:
            coeff = work[r].get(f)
            if coeff:
                v[col] = -coeff
        basis.append(v)
    if basis:
        canon, _ = rref(basis)
        basis = [row for row in canon if any(row)]
    return particular, basis
