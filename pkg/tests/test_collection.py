import itertools

import pytest

from pcgroup import intmat, zoo
from pcgroup.collection import (
    CollectionLimitError, check_consistency, collect, commutator, conjugate,
    conjugation_relation, inverse, multiply, power,
)
from pcgroup.presentation import PcPresentation, embed, is_normal, random_word
from conftest import WORD_GROUPS, d4_eval, d4_lookup, d4_matrix, matmul

# Expected values below were computed with the brute-force oracles in conftest
# (2x2 dihedral matrices, 3x3 unitriangular matrices) and frozen.


@pytest.mark.parametrize("word, expected", [
    (((1, 1), (0, 1)), (1, 3)),
    (((0, 1), (0, 1)), (0, 0)),
    ((), (0, 0)),
    (((1, 7), (0, -3), (1, -2)), d4_eval(((1, 7), (0, -3), (1, -2)))),
])
def test_collect_d4(d4, word, expected):
    assert collect(d4.presentation, word) == expected


def test_collect_d4_exhaustive_pairs(d4):
    p = d4.presentation
    table = d4_lookup()
    elements = list(table.values())
    for x, y in itertools.product(elements, repeat=2):
        assert multiply(p, x, y) == table[matmul(d4_matrix(x), d4_matrix(y))]


def test_d4_arithmetic_examples(d4):
    p = d4.presentation
    assert multiply(p, (1, 3), (1, 0)) == (0, 1)
    assert multiply(p, (1, 3), (0, 0)) == (1, 3)
    assert inverse(p, (0, 1)) == (0, 3)
    assert inverse(p, (0, 0)) == (0, 0)
    assert conjugate(p, (0, 1), (1, 0)) == (0, 3)
    assert conjugate(p, (1, 2), (0, 0)) == (1, 2)
    assert commutator(p, (0, 1), (1, 0)) == (0, 2)
    assert power(p, (0, 1), 5) == (0, 1)
    assert power(p, (1, 3), 0) == (0, 0)


def test_heisenberg_examples(heis):
    p = heis.presentation
    assert collect(p, ((1, 1), (0, 1))) == (1, 1, 1)
    assert multiply(p, (1, 0, 0), (0, 1, 0)) == (1, 1, 0)
    assert inverse(p, (1, 1, 0)) == (-1, -1, 1)
    assert multiply(p, (1, 1, 0), (-1, -1, 1)) == (0, 0, 0)
    assert conjugate(p, (0, 1, 0), (1, 0, 0)) == (0, 1, 1)
    assert commutator(p, (0, 1, 0), (1, 0, 0)) == (0, 0, 1)
    assert power(p, (1, 1, 0), 3) == (3, 3, 3)


def test_heisenberg_power_closed_form(heis):
    # (a1 a2)^k = a1^k a2^k a3^(k(k-1)/2), checked independently of power()
    p = heis.presentation
    for k in range(-6, 7):
        assert power(p, (1, 1, 0), k) == (k, k, k * (k - 1) // 2)


def test_commutator_with_self_is_trivial(groups):
    for g in groups.values():
        p = g.presentation
        x = collect(p, random_word(p, 6, 4, 3))
        assert commutator(p, x, x) == p.identity()


def test_power_negative_is_inverse(groups):
    for g in groups.values():
        p = g.presentation
        x = collect(p, random_word(p, 5, 3, 11))
        assert power(p, x, -3) == inverse(p, power(p, x, 3))


@pytest.mark.parametrize("ref", list(zoo.BUILTINS))
def test_collection_laws(ref, groups):
    p = groups[ref].presentation
    one = p.identity()
    for seed in range(200):
        w = random_word(p, 12, 16, seed)
        x = collect(p, w)
        assert is_normal(p, x)
        assert collect(p, embed(x)) == x
        winv = tuple((g, -e) for g, e in reversed(w))
        assert collect(p, w + winv) == one
    for seed in range(200):
        x, y, z = (collect(p, random_word(p, 6, 8, 1000 + 3 * seed + k)) for k in range(3))
        assert multiply(p, multiply(p, x, y), z) == multiply(p, x, multiply(p, y, z))


@pytest.mark.parametrize("ref", WORD_GROUPS)
def test_matrix_oracle_homomorphism(ref, groups):
    g = groups[ref]
    p = g.presentation
    for seed in range(150):
        w = random_word(p, 15, 32, seed)
        assert intmat.equal(zoo.matrix_of_word(g, w), zoo.matrix_of_word(g, embed(collect(p, w))))


def test_large_exponents_stay_exact():
    g = zoo.cyclotomic_group(7)
    p = g.presentation
    w = ((1, 500), (3, 1), (2, -700), (8, 3))
    x = collect(p, w)
    assert max(abs(e) for e in x) > 2 ** 64
    assert intmat.equal(zoo.matrix_of_word(g, w), zoo.matrix_of_word(g, embed(x)))


def test_collection_terminates_at_largest_test_sizes(groups):
    for g in groups.values():
        p = g.presentation
        for seed in range(3):
            collect(p, random_word(p, 30, 2 ** 10, seed))


def test_step_limit():
    p = zoo.heisenberg().presentation
    with pytest.raises(CollectionLimitError):
        collect(p, random_word(p, 30, 10, 1), step_limit=5)


def test_collect_rejects_unknown_generator(d4):
    with pytest.raises(ValueError):
        collect(d4.presentation, ((2, 1),))


def _bad():
    return PcPresentation.build(2, orders={0: 2}, conjugates={(1, 0, 1): [(1, 2)], (1, 0, -1): [(1, 2)]})


def test_consistency_builtins(groups):
    for g in groups.values():
        rep = check_consistency(g.presentation)
        assert rep.consistent and rep.violations == []


def test_consistency_detects_overlap():
    rep = check_consistency(_bad())
    assert not rep.consistent
    assert ("g2 g1^2", (0, 1), (0, 4)) in rep.violations
    assert "inconsistent" in rep.describe()


def test_consistency_step_limit_reported():
    rep = check_consistency(_bad(), step_limit=1)
    assert not rep.consistent
    assert any(left is None or right is None for _, left, right in rep.violations)


def _q8():
    # i, j, -1 acting on the quaternion basis (1, i, j, k) by right multiplication
    p = PcPresentation.build(3, orders={0: 2, 1: 2, 2: 2},
                             powers={0: [(2, 1)], 1: [(2, 1)]},
                             conjugates={(1, 0, 1): [(1, 1), (2, 1)]})
    i = intmat.intmat([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    j = intmat.intmat([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
    m = intmat.intmat([[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]])
    return zoo.GroupSpec(p, "q8", (i, j, m), 8)


def test_q8_nontrivial_power_relations():
    g = _q8()
    assert zoo.relation_violations(g) == []
    assert check_consistency(g.presentation).consistent
    p = g.presentation
    for seed in range(100):
        w = random_word(p, 8, 5, seed)
        assert intmat.equal(zoo.matrix_of_word(g, w), zoo.matrix_of_word(g, embed(collect(p, w))))


def test_derived_inverse_conjugation():
    g = _q8()
    p = g.presentation
    # a2^(a1^-1) derived from the positive relation and a1^2 = a3
    derived = conjugation_relation(p, 1, 0, -1)
    assert derived == conjugate(p, (0, 1, 0), inverse(p, (1, 0, 0)))
    lhs = zoo.matrix_of_word(g, ((0, 1), (1, 1), (0, -1)))
    assert intmat.equal(lhs, zoo.matrix_of_word(g, embed(derived)))
    d4 = zoo.dihedral(4).presentation
    assert conjugation_relation(d4, 1, 0, -1) == (0, 3)
