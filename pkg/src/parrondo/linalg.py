"""Dense linear algebra over either scalar backend.

Matrices are tuples of row tuples and vectors are flat tuples, so values
are immutable and hashable.  The same routines run on Fraction entries
(exact arithmetic, full pivoting) and on float entries (partial
pivoting).  State spaces here are tiny, at most a few dozen states, so
clarity wins over asymptotics.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import is_exact

Matrix = tuple
Vector = tuple


class SingularMatrixError(ArithmeticError):
    """Gaussian elimination ran out of usable pivots."""


def mat_from_rows(rows) -> Matrix:
    return tuple(tuple(row) for row in rows)


def matrix_is_exact(m: Matrix) -> bool:
    return all(is_exact(x) for row in m for x in row)


def identity(n: int, exact: bool = True) -> Matrix:
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(m: Matrix, v: Vector) -> Vector:
    """Matrix times column vector."""
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_mat(v: Vector, m: Matrix) -> Vector:
    """Row vector times matrix."""
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0])))


def dot(u: Vector, v: Vector):
    return sum(x * y for x, y in zip(u, v))


def row_sums(m: Matrix) -> Vector:
    return tuple(sum(row) for row in m)


def mat_pow(m: Matrix, k: int) -> Matrix:
    """k-th power by repeated multiplication (k is small here)."""
    if k < 0:
        raise ValueError("negative matrix power")
    out = identity(len(m), exact=matrix_is_exact(m))
    for _ in range(k):
        out = mat_mul(out, m)
    return out


def geometric_sum(m: Matrix, k: int) -> Matrix:
    """I + m + m^2 + ... + m^(k-1); the zero matrix for k = 0."""
    n = len(m)
    exact = matrix_is_exact(m)
    zero = Fraction(0) if exact else 0.0
    acc = tuple(tuple(zero for _ in range(n)) for _ in range(n))
    term = identity(n, exact=exact)
    for _ in range(k):
        acc = mat_add(acc, term)
        term = mat_mul(term, m)
    return acc


def _gauss_jordan(a_rows, rhs_rows, exact: bool):
    """Reduce [A | R] to [I | A^-1 R] in place and return the solution rows.

    Exact mode pivots over the whole remaining submatrix (full pivoting,
    with column swaps undone at the end); float mode pivots within the
    current column (partial pivoting).
    """
    n = len(a_rows)
    col_of = list(range(n))
    for k in range(n):
        if exact:
            pi, pj, best = -1, -1, None
            for i in range(k, n):
                for j in range(k, n):
                    v = abs(a_rows[i][j])
                    if v != 0 and (best is None or v > best):
                        pi, pj, best = i, j, v
            if pi < 0:
                raise SingularMatrixError("no nonzero pivot")
            if pj != k:
                for row in a_rows:
                    row[k], row[pj] = row[pj], row[k]
                col_of[k], col_of[pj] = col_of[pj], col_of[k]
        else:
            pi = max(range(k, n), key=lambda i: abs(a_rows[i][k]))
            if a_rows[pi][k] == 0:
                raise SingularMatrixError("no nonzero pivot")
        if pi != k:
            a_rows[k], a_rows[pi] = a_rows[pi], a_rows[k]
            rhs_rows[k], rhs_rows[pi] = rhs_rows[pi], rhs_rows[k]
        p = a_rows[k][k]
        a_rows[k] = [x / p for x in a_rows[k]]
        rhs_rows[k] = [x / p for x in rhs_rows[k]]
        for i in range(n):
            if i == k:
                continue
            f = a_rows[i][k]
            if f == 0:
                continue
            a_rows[i] = [x - f * y for x, y in zip(a_rows[i], a_rows[k])]
            rhs_rows[i] = [x - f * y for x, y in zip(rhs_rows[i], rhs_rows[k])]
    out = [None] * n
    for k in range(n):
        out[col_of[k]] = rhs_rows[k]
    return out


def solve(a: Matrix, b: Vector) -> Vector:
    """Solve A x = b for square full-rank A."""
    exact = matrix_is_exact(a)
    rows = [list(row) for row in a]
    rhs = [[x] for x in b]
    sol = _gauss_jordan(rows, rhs, exact)
    return tuple(row[0] for row in sol)


def inverse(a: Matrix) -> Matrix:
    exact = matrix_is_exact(a)
    n = len(a)
    rows = [list(row) for row in a]
    rhs = [list(row) for row in identity(n, exact=exact)]
    return mat_from_rows(_gauss_jordan(rows, rhs, exact))
