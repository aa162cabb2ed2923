"""Collection from the left, element arithmetic and consistency checks.

The collector keeps the already-collected prefix as an exponent vector and
a stack of pending syllables.  A syllable ``a_g^e`` is moved in one step
across the collected tail ``a_{g+1}^{t_{g+1}} ... a_n^{t_n}`` using

    tail * a_g^e = a_g^e * tail^(a_g^e)

where conjugation by ``a_g^e`` is an automorphism of ``<a_{g+1}, ..., a_n>``.
Images of generators under these automorphisms are memoised per exponent
and built by halving the exponent, so large exponents cost O(log e)
compositions.  Exponents are Python ints throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from pcgroup.presentation import (
    NormalWord, PcPresentation, Word, embed, format_normal, make_word,
)

DEFAULT_STEP_LIMIT = 10 ** 7


class CollectionLimitError(RuntimeError):
    """Raised when a collection exceeds its step limit."""


class _Budget:
    __slots__ = ("left", "limit")

    def __init__(self, limit):
        self.limit = limit
        self.left = limit

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise CollectionLimitError(f"collection exceeded {self.limit} steps")


class Collector:
    """Arithmetic engine for one presentation.  Caches automorphism images."""

    def __init__(self, p: PcPresentation):
        self.p = p
        self.n = p.n
        self._orders = [p.orders.get(i) for i in range(p.n)]
        self._images = {}
        self._power_nf = {}
        # commutes[g]: generators k > g with a trivial relation against g
        self._commutes = []
        for g in range(p.n):
            s = set()
            for k in range(g + 1, p.n):
                plus = p.conj_rhs[(k, g, 1)]
                minus = p.conj_rhs.get((k, g, -1), plus)
                if plus == ((k, 1),) and minus == ((k, 1),):
                    s.add(k)
            self._commutes.append(frozenset(s))

    # -- the collection loop ------------------------------------------------

    def _run(self, exps: List[int], syllables, budget: _Budget) -> List[int]:
        orders = self._orders
        n = self.n
        stack = list(reversed(syllables))
        while stack:
            g, e = stack.pop()
            budget.tick()
            if e == 0:
                continue
            r = orders[g]
            if r is not None and not 0 <= e < r:
                # a_g^(q r + e') = a_g^e' * u_g^q
                q, e = divmod(e, r)
                uq = self._power_rhs_pow(g, q, budget)
                stack.extend(reversed(embed(uq)))
                if e:
                    stack.append((g, e))
                continue
            tail = [k for k in range(g + 1, n) if exps[k]]
            if tail and not self._commutes[g].issuperset(tail):
                conj = self._conj_tail(exps, tail, g, e, budget)
                for k in tail:
                    exps[k] = 0
                stack.extend(reversed(embed(conj)))
                tail = []
            exps[g] += e
            if r is not None and exps[g] >= r:
                exps[g] -= r
                u = self.p.power_word(g)
                if u:
                    if tail:
                        # u_g must sit between a_g and the untouched tail
                        stack.extend(reversed([(k, exps[k]) for k in tail]))
                        for k in tail:
                            exps[k] = 0
                    stack.extend(reversed(u))
        return exps

    def _conj_tail(self, exps, tail, g, e, budget) -> NormalWord:
        img = self._image(g, e, budget)
        support = {g + 1 + i for k in tail for i, v in enumerate(img[k - g - 1][g + 1:]) if v}
        if self._free_abelian(sorted(support)):
            acc = [0] * self.n
            for k in tail:
                t = exps[k]
                for i, v in enumerate(img[k - g - 1]):
                    if v:
                        acc[i] += v * t
            return tuple(acc)
        acc = [0] * self.n
        for k in tail:
            y = self._pow(img[k - g - 1], exps[k], budget)
            acc = self._run(acc, embed(y), budget)
        return tuple(acc)

    def _image(self, g, e, budget) -> Tuple[NormalWord, ...]:
        """Images of a_{g+1}..a_n under conjugation by a_g^e."""
        key = (g, e)
        hit = self._images.get(key)
        if hit is not None:
            return hit
        if e == 1 or e == -1:
            img = self._relation_image(g, e, budget)
        else:
            e1 = e // 2 if e > 0 else -((-e) // 2)
            first = self._image(g, e1, budget)
            second = self._image(g, e - e1, budget)
            img = tuple(self._apply(second, g, x, budget) for x in first)
        self._images[key] = img
        return img

    def _relation_image(self, g, sign, budget):
        p = self.p
        out = []
        for k in range(g + 1, self.n):
            w = p.conj_rhs.get((k, g, sign))
            if w is not None:
                out.append(tuple(self._run([0] * self.n, w, budget)))
            else:
                out.append(None)
        if None not in out:
            return tuple(out)
        # derived a_k^(a_g^-1) = (a_k^(a_g^(r-1)))^(u_g^-1) for finite a_g
        r = self._orders[g]
        fwd = self._image(g, r - 1, budget)
        u_inv = self._inv(self._power_rhs_pow(g, 1, budget), budget)
        return tuple(
            out[i] if out[i] is not None else self._conj(fwd[i], u_inv, budget)
            for i in range(len(out))
        )

    def _apply(self, img, g, x: NormalWord, budget) -> NormalWord:
        """Apply the automorphism with generator images ``img`` to x."""
        used = [k for k in range(g + 1, self.n) if x[k]]
        support = {i for k in used for i, v in enumerate(img[k - g - 1]) if v}
        acc = [0] * self.n
        if self._free_abelian(sorted(support)):
            for k in used:
                for i, v in enumerate(img[k - g - 1]):
                    if v:
                        acc[i] += v * x[k]
            return tuple(acc)
        for k in used:
            acc = self._run(acc, embed(self._pow(img[k - g - 1], x[k], budget)), budget)
        return tuple(acc)

    def _power_rhs_pow(self, g, q, budget) -> NormalWord:
        u = self._power_nf.get(g)
        if u is None:
            u = tuple(self._run([0] * self.n, self.p.power_word(g), budget))
            self._power_nf[g] = u
        return self._pow(u, q, budget)

    # -- element arithmetic --------------------------------------------------

    def _mul(self, x, y, budget) -> NormalWord:
        return tuple(self._run(list(x), embed(y), budget))

    def _inv(self, x, budget) -> NormalWord:
        return tuple(self._run([0] * self.n, [(i, -e) for i, e in reversed(embed(x))], budget))

    def _conj(self, x, y, budget) -> NormalWord:
        return self._mul(self._mul(self._inv(y, budget), x, budget), y, budget)

    def _pow(self, x, k, budget) -> NormalWord:
        if k == 0:
            return (0,) * self.n
        support = [i for i, e in enumerate(x) if e]
        if not support:
            return tuple(x)
        if len(support) == 1:
            i = support[0]
            return tuple(self._run([0] * self.n, [(i, x[i] * k)], budget))
        if self._free_abelian(support):
            return tuple(e * k for e in x)
        if k < 0:
            x, k = self._inv(x, budget), -k
        result = None
        base = x
        while True:
            if k & 1:
                result = base if result is None else self._mul(result, base, budget)
            k >>= 1
            if not k:
                return result
            base = self._mul(base, base, budget)

    def _free_abelian(self, support) -> bool:
        orders = self._orders
        for a, i in enumerate(support):
            if orders[i] is not None:
                return False
            for j in support[a + 1:]:
                if j not in self._commutes[i]:
                    return False
        return True


def _collector(p: PcPresentation) -> Collector:
    return p._collector


def collect(p: PcPresentation, w: Word, step_limit: int = DEFAULT_STEP_LIMIT) -> NormalWord:
    """Return the normal word of ``w``."""
    for g, _ in w:
        if not 0 <= g < p.n:
            raise ValueError(f"generator index {g + 1} out of range 1..{p.n}")
    c = _collector(p)
    return tuple(c._run([0] * p.n, make_word(w), _Budget(step_limit)))


def multiply(p, x: NormalWord, y: NormalWord, step_limit=DEFAULT_STEP_LIMIT) -> NormalWord:
    return _collector(p)._mul(x, y, _Budget(step_limit))


def inverse(p, x: NormalWord, step_limit=DEFAULT_STEP_LIMIT) -> NormalWord:
    return _collector(p)._inv(x, _Budget(step_limit))


def conjugate(p, x: NormalWord, y: NormalWord, step_limit=DEFAULT_STEP_LIMIT) -> NormalWord:
    """x^y = y^-1 x y."""
    return _collector(p)._conj(x, y, _Budget(step_limit))


def commutator(p, a: NormalWord, b: NormalWord, step_limit=DEFAULT_STEP_LIMIT) -> NormalWord:
    """[a, b] = a^-1 b^-1 a b."""
    c = _collector(p)
    budget = _Budget(step_limit)
    return c._mul(c._inv(a, budget), c._conj(a, b, budget), budget)


def power(p, x: NormalWord, k: int, step_limit=DEFAULT_STEP_LIMIT) -> NormalWord:
    return _collector(p)._pow(x, k, _Budget(step_limit))


def evaluate(p, elements, word, step_limit=DEFAULT_STEP_LIMIT) -> NormalWord:
    """Product of ``elements[pos]^exp`` over the syllables of ``word``."""
    c = _collector(p)
    budget = _Budget(step_limit)
    acc = p.identity()
    for pos, e in word:
        acc = c._mul(acc, c._pow(elements[pos], e, budget), budget)
    return acc


# -- consistency --------------------------------------------------------------

@dataclass
class ConsistencyReport:
    consistent: bool
    violations: List[Tuple[str, Optional[NormalWord], Optional[NormalWord]]] = field(
        default_factory=list)

    def describe(self) -> str:
        if self.consistent:
            return "consistent"
        lines = ["inconsistent"]
        for what, left, right in self.violations:
            lhs = "?" if left is None else format_normal(left)
            rhs = "?" if right is None else format_normal(right)
            lines.append(f"  {what}: {lhs} != {rhs}")
        return "\n".join(lines)


def check_consistency(p: PcPresentation, step_limit: int = DEFAULT_STEP_LIMIT) -> ConsistencyReport:
    """Collect the standard overlap words two ways and compare.

    Each side is evaluated by collecting its bracketed subword first and
    multiplying the partial results.  Overlaps checked, for i < j < k:
    a_k a_j a_i; a_j^{r_j} a_i; a_j a_i^{r_i}; a_i^{r_i + 1}; and the
    inverse cancellations a_j a_i^{-1} a_i, a_j a_i a_i^{-1},
    a_j^{-1} a_i^{-1} a_i for infinite generators.
    """
    n = p.n
    orders = p.orders
    violations = []

    def gen(i, e=1):
        return p.generator(i, e) if e >= 0 or i not in orders else collect(p, [(i, e)], step_limit)

    def mul(*xs):
        acc = p.identity()
        for x in xs:
            acc = multiply(p, acc, x, step_limit)
        return acc

    def col(*syllables):
        return collect(p, syllables, step_limit)

    def check(what, left_fn, right_fn):
        try:
            left = left_fn()
        except CollectionLimitError:
            violations.append((what, None, None))
            return
        try:
            right = right_fn()
        except CollectionLimitError:
            violations.append((what, left, None))
            return
        if left != right:
            violations.append((what, left, right))

    def name(i, e=1):
        return f"g{i + 1}" if e == 1 else f"g{i + 1}^{e}"

    for k in range(n):
        for j in range(k):
            for i in range(j):
                check(f"{name(k)} {name(j)} {name(i)}",
                      lambda: mul(gen(k), col((j, 1), (i, 1))),
                      lambda: mul(col((k, 1), (j, 1)), gen(i)))
    for j in range(n):
        for i in range(j):
            if j in orders:
                rj = orders[j]
                check(f"{name(j, rj)} {name(i)}",
                      lambda: mul(col((j, rj)), gen(i)),
                      lambda: mul(gen(j, rj - 1), col((j, 1), (i, 1))))
            if i in orders:
                ri = orders[i]
                check(f"{name(j)} {name(i, ri)}",
                      lambda: mul(gen(j), col((i, ri))),
                      lambda: mul(col((j, 1), (i, 1)), gen(i, ri - 1)))
            else:
                check(f"{name(j)} {name(i, -1)} {name(i)}",
                      lambda: gen(j),
                      lambda: mul(col((j, 1), (i, -1)), gen(i)))
                check(f"{name(j)} {name(i)} {name(i, -1)}",
                      lambda: gen(j),
                      lambda: mul(col((j, 1), (i, 1)), col((i, -1))))
                if j not in orders:
                    check(f"{name(j, -1)} {name(i, -1)} {name(i)}",
                          lambda: col((j, -1)),
                          lambda: mul(col((j, -1), (i, -1)), gen(i)))
    for i, ri in orders.items():
        check(f"{name(i, ri + 1)}",
              lambda: mul(gen(i), col((i, ri))),
              lambda: mul(col((i, ri)), gen(i)))
    return ConsistencyReport(not violations, violations)


def conjugation_relation(p: PcPresentation, j: int, i: int, sign: int) -> NormalWord:
    """Normal form of a_j conjugated by a_i^sign, derived when not given."""
    if not 0 <= i < j < p.n or sign not in (1, -1):
        raise ValueError("need 0 <= i < j < n and sign in (1, -1)")
    img = _collector(p)._image(i, sign, _Budget(DEFAULT_STEP_LIMIT))
    return img[j - i - 1]
