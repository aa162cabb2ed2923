import itertools

import pytest

from pcgroup import zoo

WORD_GROUPS = ["d4", "dihedral:6", "heisenberg", "product:d4,d4", "cyclotomic:3", "cyclotomic:7"]


@pytest.fixture(scope="session")
def d4():
    return zoo.dihedral(4)


@pytest.fixture(scope="session")
def heis():
    return zoo.heisenberg()


@pytest.fixture(scope="session")
def groups():
    return {ref: zoo.builtin(ref) for ref in zoo.BUILTINS}


def matmul(a, b):
    """Plain nested-list integer matrix product; shares nothing with the package."""
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b)))
                       for j in range(len(b[0]))) for i in range(len(a)))


def matpow(a, e):
    r = tuple(tuple(int(i == j) for j in range(len(a))) for i in range(len(a)))
    for _ in range(e):
        r = matmul(r, a)
    return r


ROT = ((0, -1), (1, 0))
REFL = ((1, 0), (0, -1))


def d4_matrix(x):
    return matmul(matpow(REFL, x[0]), matpow(ROT, x[1]))


def d4_lookup():
    """Matrix -> exponent vector over all 8 elements of D4."""
    return {d4_matrix(x): x for x in itertools.product(range(2), range(4))}


def d4_eval(word):
    """Normal form of a D4 word by brute force through the matrix group."""
    m = matpow(ROT, 0)
    for g, e in word:
        base = REFL if g == 0 else ROT
        m = matmul(m, matpow(base, e % (2 if g == 0 else 4)))
    return d4_lookup()[m]
