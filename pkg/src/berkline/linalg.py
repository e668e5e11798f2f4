"""Exact dense linear algebra over Q(sqrt 2) for the tiny systems
(Cantor matrices, equilibrium stationarity) this package solves."""

from __future__ import annotations

from .exact import BerklineError, ValExp

_ZERO = ValExp(0)


class SingularSystemError(BerklineError):
    code = "SINGULAR_SYSTEM"


def solve_linear(a, b):
    """Solve A x = b exactly; A a square matrix of ValExp, b a vector."""
    n = len(a)
    m = [[ValExp.of(x) for x in row] + [ValExp.of(b[r])] for r, row in enumerate(a)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            raise SingularSystemError("singular linear system")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def det(a) -> ValExp:
    """Determinant over Q(sqrt 2), by exact elimination."""
    n = len(a)
    m = [[ValExp.of(x) for x in row] for row in a]
    result = ValExp(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            return _ZERO
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            result = -result
        result = result * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] = m[r][c] - f * m[col][c]
    return result
