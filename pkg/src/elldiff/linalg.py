"""Dense exact linear algebra over Q(i) (Gaussian elimination throughout)."""

from __future__ import annotations

from typing import List, Optional

from .scalars import Scalar, ZERO, ONE


def solve_linear(mat: List[List[Scalar]], rhs: List[Scalar]) -> Optional[List[Scalar]]:
    """One solution of mat*x = rhs, or None if inconsistent.

    Free variables are set to zero.
    """
    n_rows = len(mat)
    n_cols = len(mat[0]) if mat else 0
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    pivots = []
    r = 0
    for c in range(n_cols):
        pr = next((i for i in range(r, n_rows) if not a[i][c].is_zero()), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = a[r][c].inverse()
        a[r] = [v * inv for v in a[r]]
        for i in range(n_rows):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if not a[i][n_cols].is_zero():
            return None
    x = [ZERO] * n_cols
    for i, c in enumerate(pivots):
        x[c] = a[i][n_cols]
    return x


def kernel_basis(M: List[List[Scalar]]) -> List[List[Scalar]]:
    """Basis of the right kernel."""
    n = len(M)
    m = len(M[0]) if M else 0
    a = [row[:] for row in M]
    pivots = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if not a[i][c].is_zero()), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = a[r][c].inverse()
        a[r] = [v * inv for v in a[r]]
        for i in range(n):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    basis = []
    free = [c for c in range(m) if c not in pivots]
    for fc in free:
        vec = [ZERO] * m
        vec[fc] = ONE
        for i, pc in enumerate(pivots):
            vec[pc] = -a[i][fc]
        basis.append(vec)
    return basis


def det_is_zero(M: List[List[Scalar]]) -> bool:
    n = len(M)
    a = [row[:] for row in M]
    for c in range(n):
        pr = next((i for i in range(c, n) if not a[i][c].is_zero()), None)
        if pr is None:
            return True
        a[c], a[pr] = a[pr], a[c]
        inv = a[c][c].inverse()
        for i in range(c + 1, n):
            if not a[i][c].is_zero():
                f = a[i][c] * inv
                a[i] = [vi - f * vc for vi, vc in zip(a[i], a[c])]
    return False


def mat_vec(M: List[List[Scalar]], v: List[Scalar]) -> List[Scalar]:
    out = []
    for row in M:
        acc = ZERO
        for a, x in zip(row, v):
            if not a.is_zero() and not x.is_zero():
                acc = acc + a * x
        out.append(acc)
    return out
