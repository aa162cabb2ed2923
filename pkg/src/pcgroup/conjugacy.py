"""Conjugacy search: orbit-stabilizer for finite groups, bounded BFS otherwise.

Every solver works on an explicit acting set, a list of group elements whose
generated subgroup supplies the conjugators.  Witnesses carry the conjugator
both as a normal word and as a word over the acting set (syllables
``(position, exponent)``), which is what an attacker needs to replay a
secret built from public subgroup generators.
"""

from __future__ import annotations

import itertools
import logging
import time
from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from pcgroup.collection import Collector, _Budget, DEFAULT_STEP_LIMIT
from pcgroup.presentation import NormalWord, Word, word_inverse
from pcgroup.zoo import GroupSpec

log = logging.getLogger(__name__)

ORBIT_CAP = 2 ** 20
VISITED_CAP = 2 ** 22
ELEMENT_CAP = 2 ** 20


class SearchLimitError(RuntimeError):
    """An orbit, closure or visited set outgrew its cap."""


class SearchTimeout(RuntimeError):
    pass


@dataclass
class ConjugacyWitness:
    conjugator: NormalWord
    centralizer_gens: List[NormalWord] = field(default_factory=list)
    conjugator_word: Word = ()
    centralizer_words: List[Word] = field(default_factory=list)


@dataclass(frozen=True)
class Solver:
    """``finite`` or ``bounded`` with a word-length bound."""

    kind: str = "finite"
    bound: Optional[int] = None

    @classmethod
    def parse(cls, text: str) -> "Solver":
        if text == "finite":
            return cls("finite")
        kind, _, arg = text.partition(":")
        if kind == "bounded" and arg.isdigit() and int(arg) >= 1:
            return cls("bounded", int(arg))
        raise ValueError(f"bad solver {text!r}; expected 'finite' or 'bounded:<L>'")

    def __str__(self):
        return self.kind if self.kind == "finite" else f"bounded:{self.bound}"


def _ops(g: GroupSpec):
    c: Collector = g.presentation._collector
    budget = _Budget(DEFAULT_STEP_LIMIT)

    def mul(x, y):
        budget.left = budget.limit
        return c._mul(x, y, budget)

    def inv(x):
        budget.left = budget.limit
        return c._inv(x, budget)

    return mul, inv


def _check_deadline(deadline):
    if deadline is not None and time.monotonic() > deadline:
        raise SearchTimeout("conjugacy search timed out")


def compress(word) -> Word:
    """Merge adjacent syllables on the same position, drop zero exponents."""
    out = []
    for pos, e in word:
        if out and out[-1][0] == pos:
            e += out.pop()[1]
        if e:
            out.append((pos, e))
    return tuple(out)


def enumerate_elements(g: GroupSpec, cap: int = ELEMENT_CAP) -> List[NormalWord]:
    """All normal words of a finite group, in lexicographic order."""
    p = g.presentation
    if not g.is_finite:
        raise ValueError(f"group {g.name} is infinite")
    order = 1
    for r in p.orders.values():
        order *= r
    if order > cap:
        raise SearchLimitError(f"group order {order} exceeds cap {cap}")
    return [tuple(x) for x in itertools.product(*(range(p.orders[i]) for i in range(p.n)))]


def closure(g: GroupSpec, gens: Sequence[NormalWord], cap: int = ELEMENT_CAP) -> set:
    """Elements of the (finite) subgroup generated by ``gens``."""
    mul, _ = _ops(g)
    one = g.presentation.identity()
    seen = {one}
    queue = deque([one])
    while queue:
        x = queue.popleft()
        for y in gens:
            z = mul(x, y)
            if z not in seen:
                seen.add(z)
                if len(seen) > cap:
                    raise SearchLimitError(f"subgroup exceeds cap {cap}")
                queue.append(z)
    return seen


def conjugacy_search_finite(g: GroupSpec, acting: Sequence[NormalWord], r: NormalWord,
                            s: NormalWord, cap: int = ORBIT_CAP,
                            deadline: Optional[float] = None) -> Optional[ConjugacyWitness]:
    """Orbit of r under conjugation by <acting>, with stabilizer generators.

    Returns None exactly when s is not in the orbit, which proves r and s
    are not conjugate under the acting subgroup.  The centralizer generators
    generate the centralizer of s in the acting subgroup; Schreier
    generators already in the subgroup found so far are skipped.
    """
    if not acting:
        raise ValueError("acting set must be nonempty")
    mul, inv = _ops(g)
    gen_inv = [inv(x) for x in acting]
    one = g.presentation.identity()
    elem = {r: one}
    words = {r: ()}
    queue = deque([r])
    candidates = []
    while queue:
        _check_deadline(deadline)
        pt = queue.popleft()
        for pos, x in enumerate(acting):
            img = mul(mul(gen_inv[pos], pt), x)
            if img not in elem:
                elem[img] = mul(elem[pt], x)
                words[img] = words[pt] + ((pos, 1),)
                if len(elem) > cap:
                    raise SearchLimitError(f"orbit exceeds cap {cap}")
                queue.append(img)
            else:
                candidates.append((pt, pos, img))
    if s not in elem:
        return None

    stab, stab_words = [], []
    members = {one}
    for pt, pos, img in candidates:
        _check_deadline(deadline)
        h = mul(mul(elem[pt], acting[pos]), inv(elem[img]))
        if h in members:
            continue
        stab.append(h)
        stab_words.append(words[pt] + ((pos, 1),) + word_inverse(words[img]))
        members = closure(g, stab, cap)

    a, a_word = elem[s], compress(words[s])
    a_inv = inv(a)
    cent = [mul(mul(a_inv, h), a) for h in stab]
    cent_words = [compress(word_inverse(a_word) + w + a_word) for w in stab_words]
    return ConjugacyWitness(a, cent, a_word, cent_words)


def _bounded_bfs(g, acting, rs, ss, max_length, cap, deadline):
    """BFS over products of at most max_length acting generators and inverses."""
    mul, inv = _ops(g)
    rs, ss = tuple(rs), tuple(ss)
    one = g.presentation.identity()
    if rs == ss:
        return one, ()
    moves = []
    for pos, x in enumerate(acting):
        xi = inv(x)
        moves.append((pos, 1, x, xi))
        if xi != x:
            moves.append((pos, -1, xi, x))
    seen = {one}
    frontier = [(one, (), rs)]
    for _ in range(max_length):
        nxt = []
        for a, word, conj in frontier:
            _check_deadline(deadline)
            for pos, e, x, xi in moves:
                b = mul(a, x)
                if b in seen:
                    continue
                seen.add(b)
                if len(seen) > cap:
                    raise SearchLimitError(f"visited set exceeds cap {cap}")
                bc = tuple(mul(mul(xi, c), x) for c in conj)
                bw = word + ((pos, e),)
                if bc == ss:
                    return b, compress(bw)
                nxt.append((b, bw, bc))
        frontier = nxt
    return None


def conjugacy_search_bounded(g: GroupSpec, acting: Sequence[NormalWord], r: NormalWord,
                             s: NormalWord, max_length: int, cap: int = VISITED_CAP,
                             deadline: Optional[float] = None) -> Optional[ConjugacyWitness]:
    """Search conjugators of word length <= max_length.

    None only means nothing was found within the bound.  No centralizer
    generators are reported.
    """
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    if not acting:
        raise ValueError("acting set must be nonempty")
    hit = _bounded_bfs(g, acting, [r], [s], max_length, cap, deadline)
    if hit is None:
        return None
    return ConjugacyWitness(hit[0], [], hit[1], [])


def multiple_conjugacy(g: GroupSpec, acting: Sequence[NormalWord], rs: Sequence[NormalWord],
                       ss: Sequence[NormalWord], solver: Solver = Solver(),
                       cap: Optional[int] = None,
                       deadline: Optional[float] = None) -> Optional[ConjugacyWitness]:
    """Find a in <acting> with rs[i]^a = ss[i] for all i.

    With the finite solver this runs the centralizer-chain reduction: each
    step solves one conjugacy equation inside the centralizer of all earlier
    targets.  The bounded solver has no centralizers to restrict to and
    instead tests all equations at once on every candidate of length at
    most the bound.
    """
    if len(rs) != len(ss):
        raise ValueError(f"got {len(rs)} elements but {len(ss)} targets")
    if not rs:
        raise ValueError("need at least one conjugacy equation")
    if not acting:
        raise ValueError("acting set must be nonempty")
    if solver.kind == "bounded":
        hit = _bounded_bfs(g, acting, rs, ss, solver.bound, cap or VISITED_CAP, deadline)
        if hit is None:
            log.info("bounded multiple conjugacy failed within length %d", solver.bound)
            return None
        return ConjugacyWitness(hit[0], [], hit[1], [])

    mul, inv = _ops(g)
    a = g.presentation.identity()
    a_word: Word = ()
    gens = list(acting)
    gen_words = [((pos, 1),) for pos in range(len(acting))]
    for step, (r, s) in enumerate(zip(rs, ss)):
        target = mul(mul(inv(a), r), a)
        if not gens:
            # centralizer chain reached the trivial group
            if target != s:
                log.info("multiple conjugacy failed at step %d", step + 1)
                return None
            continue
        wit = conjugacy_search_finite(g, gens, target, s, cap or ORBIT_CAP, deadline)
        if wit is None:
            log.info("multiple conjugacy failed at step %d", step + 1)
            return None
        a = mul(a, wit.conjugator)
        a_word = compress(a_word + _substitute(wit.conjugator_word, gen_words))
        gens = wit.centralizer_gens
        gen_words = [compress(_substitute(w, gen_words)) for w in wit.centralizer_words]
    return ConjugacyWitness(a, gens, a_word, gen_words)


def _substitute(word, gen_words):
    out = []
    for pos, e in word:
        piece = gen_words[pos] if e > 0 else word_inverse(gen_words[pos])
        out.extend(piece * abs(e))
    return tuple(out)
