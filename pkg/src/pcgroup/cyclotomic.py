"""Arithmetic in the cyclotomic integers Z[zeta_r] for r in {3, 4, 7, 11}.

Elements are coefficient tuples in the power basis 1, zeta, ...,
zeta^(phi(r) - 1).  For these r, Z[zeta_r] is the maximal order.
"""

from typing import Tuple

from pcgroup import intmat

CyclotomicInt = Tuple[int, ...]

SUPPORTED = (3, 4, 7, 11)


def _check(r):
    if r not in SUPPORTED:
        raise ValueError(f"unsupported cyclotomic order {r}; choose from {SUPPORTED}")


def phi(r: int) -> int:
    _check(r)
    return 2 if r == 4 else r - 1


def cyclotomic_poly(r: int) -> Tuple[int, ...]:
    """Coefficients of Phi_r, constant term first (monic)."""
    _check(r)
    if r == 4:
        return (1, 0, 1)
    return (1,) * r


def reduce_poly(r: int, coeffs) -> CyclotomicInt:
    f = cyclotomic_poly(r)
    d = len(f) - 1
    c = list(coeffs) + [0] * max(0, d - len(coeffs))
    for top in range(len(c) - 1, d - 1, -1):
        lead = c[top]
        if lead:
            for k in range(d + 1):
                c[top - d + k] -= lead * f[k]
    return tuple(c[:d])


def cyc_mul(r: int, x: CyclotomicInt, y: CyclotomicInt) -> CyclotomicInt:
    d = phi(r)
    if len(x) != d or len(y) != d:
        raise ValueError(f"expected coefficient vectors of length {d}")
    prod = [0] * (2 * d - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                prod[i + j] += a * b
    return reduce_poly(r, prod)


def one(r) -> CyclotomicInt:
    return (1,) + (0,) * (phi(r) - 1)


def zeta_power(r, k) -> CyclotomicInt:
    return reduce_poly(r, [0] * k + [1])


def unit_matrix(r: int, u: CyclotomicInt):
    """Matrix of multiplication by u; row k holds u * zeta^k."""
    d = phi(r)
    rows = [cyc_mul(r, u, zeta_power(r, k)) for k in range(d)]
    m = intmat.intmat(rows)
    if intmat.det(m) not in (1, -1):
        raise ValueError(f"{u} is not a unit of Z[zeta_{r}]")
    return m


def unit_generators(r: int):
    """Torsion generator and independent cyclotomic units.

    Returns ``(torsion, torsion_order, free_units)``.  For prime r the
    torsion is -zeta (order 2r) and the free units are
    (1 - zeta^a) / (1 - zeta) = 1 + zeta + ... + zeta^(a-1), a = 2..(r-1)/2.
    For r = 4 the torsion is zeta (order 4) and there are no free units.
    """
    _check(r)
    if r == 4:
        return zeta_power(4, 1), 4, []
    neg_zeta = tuple(-c for c in zeta_power(r, 1))
    free = [reduce_poly(r, [1] * a) for a in range(2, (r - 1) // 2 + 1)]
    return neg_zeta, 2 * r, free
