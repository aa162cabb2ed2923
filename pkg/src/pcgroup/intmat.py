"""Exact integer matrices as numpy object arrays of Python ints."""

from fractions import Fraction

import numpy as np


def intmat(rows) -> np.ndarray:
    a = np.empty((len(rows), len(rows)), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != len(rows):
            raise ValueError("matrix must be square")
        for j, v in enumerate(row):
            a[i, j] = int(v)
    return a


def identity(d) -> np.ndarray:
    a = np.zeros((d, d), dtype=object)
    for i in range(d):
        a[i, i] = 1
    return a


def equal(a, b) -> bool:
    return a.shape == b.shape and bool((a == b).all())


def det(a) -> int:
    """Bareiss fraction-free determinant."""
    m = [list(row) for row in a.tolist()]
    d = len(m)
    sign, prev = 1, 1
    for k in range(d - 1):
        if m[k][k] == 0:
            for i in range(k + 1, d):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, d):
            for j in range(k + 1, d):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[d - 1][d - 1] if d else 1


def _is_permutation(a) -> bool:
    if not all(v in (0, 1) for v in a.flat):
        return False
    return bool((a.sum(axis=0) == 1).all() and (a.sum(axis=1) == 1).all())


def inverse(a) -> np.ndarray:
    """Inverse of a unimodular integer matrix."""
    if _is_permutation(a):
        return a.T.copy()
    d = a.shape[0]
    m = [[Fraction(v) for v in row] + [Fraction(int(i == r)) for i in range(d)]
         for r, row in enumerate(a.tolist())]
    for c in range(d):
        piv = next((r for r in range(c, d) if m[r][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        pv = m[c][c]
        m[c] = [v / pv for v in m[c]]
        for r in range(d):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    out = np.empty((d, d), dtype=object)
    for i in range(d):
        for j in range(d):
            v = m[i][d + j]
            if v.denominator != 1:
                raise ValueError("matrix is not invertible over the integers")
            out[i, j] = int(v)
    return out


def mat_pow(a, k, a_inv=None) -> np.ndarray:
    if k < 0:
        a = inverse(a) if a_inv is None else a_inv
        k = -k
    d = a.shape[0]
    nil = a - identity(d)
    if not (nil.dot(nil) != 0).any():
        # unipotent of step 2: (I + N)^k = I + k N
        return identity(d) + nil * k
    result = identity(d)
    base = a
    while k:
        if k & 1:
            result = result.dot(base)
        k >>= 1
        if k:
            base = base.dot(base)
    return result


def format_matrix(a) -> str:
    return ";".join(",".join(str(v) for v in row) for row in a.tolist())


def parse_matrix(text) -> np.ndarray:
    return intmat([[int(v) for v in row.split(",")] for row in text.strip().split(";")])
