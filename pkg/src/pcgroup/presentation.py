"""Polycyclic presentations, words and the ``pcp v1`` text format.

Generators are 0-based internally.  The text format (and everything printed
for humans) uses 1-based names ``g1 .. gn``.

A word is a tuple of ``(generator, exponent)`` syllables with non-zero
exponents; a normal word is a tuple of ``n`` integer exponents.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Mapping, Optional, Tuple

Word = Tuple[Tuple[int, int], ...]
NormalWord = Tuple[int, ...]

IDENTITY_WORD: Word = ()


class PresentationError(ValueError):
    """Malformed presentation text or relation structure."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def make_word(syllables: Iterable[Tuple[int, int]]) -> Word:
    """Return a word with zero-exponent syllables dropped."""
    return tuple((int(g), int(e)) for g, e in syllables if e != 0)


def embed(x: NormalWord) -> Word:
    """Turn a normal word back into a word a_1^{e_1} ... a_n^{e_n}."""
    return tuple((i, e) for i, e in enumerate(x) if e != 0)


def word_inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


@dataclass(frozen=True)
class PcPresentation:
    """A polycyclic presentation on generators ``0 .. n-1``.

    ``orders`` maps the generators of finite relative order to that order.
    ``power_rhs[i]`` is the right-hand side of ``a_i^{r_i}``; a missing
    entry means the trivial word.  ``conj_rhs[(j, i, sign)]`` is the image
    of ``a_j`` under conjugation by ``a_i^{sign}``, for ``i < j``.  Every
    right-hand side lies in the subgroup generated by the generators after
    the one on the left (``a_{i+1} ..`` for conjugates).
    """

    n: int
    orders: Mapping[int, int] = field(default_factory=dict)
    power_rhs: Mapping[int, Word] = field(default_factory=dict)
    conj_rhs: Mapping[Tuple[int, int, int], Word] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise PresentationError("need at least one generator")
        for i, r in self.orders.items():
            if not 0 <= i < self.n:
                raise PresentationError(f"order for unknown generator g{i + 1}")
            if r < 2:
                raise PresentationError(f"relative order of g{i + 1} must be >= 2, got {r}")
        for i, w in self.power_rhs.items():
            if i not in self.orders:
                raise PresentationError(f"power relation for g{i + 1}, which has no finite order")
            _check_rhs(w, i, self.n, f"pow {i + 1}")
        for (j, i, sign), w in self.conj_rhs.items():
            if not (0 <= i < j < self.n) or sign not in (1, -1):
                raise PresentationError(
                    f"bad conjugate relation key ({j + 1}, {sign * (i + 1)})")
            _check_rhs(w, i, self.n, f"conj {j + 1} {sign * (i + 1)}")
        for j in range(self.n):
            for i in range(j):
                if (j, i, 1) not in self.conj_rhs:
                    raise PresentationError(f"missing relation conj {j + 1} {i + 1}")
                if i not in self.orders and (j, i, -1) not in self.conj_rhs:
                    raise PresentationError(
                        f"missing relation conj {j + 1} -{i + 1} "
                        f"(g{i + 1} has infinite order)")

    @classmethod
    def build(cls, n, orders=None, powers=None, conjugates=None):
        """Build a presentation, filling in trivial conjugate relations.

        A pair ``(j, i)`` with neither sign given defaults to ``a_j``
        commuting with ``a_i``.
        """
        orders = dict(orders or {})
        powers = {i: make_word(w) for i, w in (powers or {}).items() if make_word(w)}
        conj = {k: make_word(w) for k, w in (conjugates or {}).items()}
        for j in range(n):
            for i in range(j):
                if (j, i, 1) not in conj and (j, i, -1) not in conj:
                    conj[(j, i, 1)] = ((j, 1),)
                    if i not in orders:
                        conj[(j, i, -1)] = ((j, 1),)
        return cls(n, orders, powers, conj)

    @property
    def finite_indices(self):
        return frozenset(self.orders)

    def power_word(self, i) -> Word:
        return self.power_rhs.get(i, IDENTITY_WORD)

    def identity(self) -> NormalWord:
        return (0,) * self.n

    def generator(self, i, e=1) -> NormalWord:
        x = [0] * self.n
        x[i] = e
        return tuple(x)

    @cached_property
    def _collector(self):
        from pcgroup.collection import Collector
        return Collector(self)


def _check_rhs(w: Word, key: int, n: int, what: str):
    for g, e in w:
        if not 0 <= g < n:
            raise PresentationError(f"{what}: unknown generator g{g + 1}")
        if g <= key:
            raise PresentationError(
                f"{what}: right-hand side uses g{g + 1}, "
                f"index must be greater than {key + 1}")
        if e == 0:
            raise PresentationError(f"{what}: zero exponent in right-hand side")


def hirsch_length(p: PcPresentation) -> int:
    """Number of infinite cyclic factors of the polycyclic series."""
    return p.n - len(p.orders)


def is_normal(p: PcPresentation, x: NormalWord) -> bool:
    if len(x) != p.n:
        return False
    return all(0 <= x[i] < r for i, r in p.orders.items())


def random_word(p: PcPresentation, syllable_count: int, exponent_bound: int, seed: int) -> Word:
    """Seeded random word: uniform generator, uniform non-zero exponent."""
    if exponent_bound < 1:
        raise ValueError("exponent_bound must be >= 1")
    rng = random.Random(seed)
    out = []
    for _ in range(syllable_count):
        g = rng.randrange(p.n)
        v = rng.randrange(2 * exponent_bound)
        e = v - exponent_bound if v < exponent_bound else v - exponent_bound + 1
        out.append((g, e))
    return tuple(out)


# --- text format -----------------------------------------------------------

def format_word(w: Word) -> str:
    if not w:
        return "id"
    return " ".join(f"g{g + 1}" if e == 1 else f"g{g + 1}^{e}" for g, e in w)


def parse_word(text: str, n: Optional[int] = None, line=None) -> Word:
    out = []
    tokens = text.split()
    if not tokens:
        raise PresentationError("empty word (use 'id' for the identity)", line)
    if tokens == ["id"]:
        return ()
    for tok in tokens:
        base, _, exp = tok.partition("^")
        if not base.startswith("g") or not base[1:].isdigit():
            raise PresentationError(f"bad word token {tok!r}", line)
        g = int(base[1:]) - 1
        if g < 0 or (n is not None and g >= n):
            raise PresentationError(f"generator {base} out of range", line)
        try:
            e = int(exp) if exp else 1
        except ValueError:
            raise PresentationError(f"bad exponent in {tok!r}", line) from None
        if e != 0:
            out.append((g, e))
    return tuple(out)


def format_normal(x: NormalWord) -> str:
    return ",".join(str(e) for e in x)


def parse_normal(text: str, n: Optional[int] = None) -> NormalWord:
    try:
        x = tuple(int(t) for t in text.strip().split(","))
    except ValueError:
        raise PresentationError(f"bad normal word {text!r}") from None
    if n is not None and len(x) != n:
        raise PresentationError(f"normal word {text!r} has length {len(x)}, expected {n}")
    return x


def format_presentation(p: PcPresentation) -> str:
    lines = ["pcp v1", f"gens {p.n}"]
    for i in sorted(p.orders):
        lines.append(f"order {i + 1} {p.orders[i]}")
    for i in sorted(p.power_rhs):
        if p.power_rhs[i]:
            lines.append(f"pow {i + 1} = {format_word(p.power_rhs[i])}")
    for j in range(p.n):
        for i in range(j):
            for sign in (1, -1):
                w = p.conj_rhs.get((j, i, sign))
                if w is not None:
                    lines.append(f"conj {j + 1} {sign * (i + 1)} = {format_word(w)}")
    return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> PcPresentation:
    """Parse ``pcp v1`` text.  Errors carry the offending line number."""
    return _parse_lines(list(enumerate(text.splitlines(), 1)))


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_lines(numbered) -> PcPresentation:
    rows = [(no, _strip(raw)) for no, raw in numbered]
    rows = [(no, s) for no, s in rows if s]
    if not rows or rows[0][1] != "pcp v1":
        raise PresentationError("expected header 'pcp v1'", rows[0][0] if rows else 1)
    n = None
    orders: Dict[int, int] = {}
    powers: Dict[int, Word] = {}
    conj: Dict[Tuple[int, int, int], Word] = {}
    for no, s in rows[1:]:
        head, *rest = s.split(None, 1)
        rest = rest[0] if rest else ""
        if head == "gens":
            if n is not None:
                raise PresentationError("duplicate 'gens' line", no)
            try:
                n = int(rest)
            except ValueError:
                raise PresentationError(f"bad generator count {rest!r}", no) from None
            if n < 1:
                raise PresentationError("need at least one generator", no)
            continue
        if n is None:
            raise PresentationError("'gens' must come before relations", no)
        if head == "order":
            parts = rest.split()
            if len(parts) != 2:
                raise PresentationError("expected 'order <i> <r>'", no)
            i, r = _int(parts[0], no) - 1, _int(parts[1], no)
            _index(i, n, no)
            if r < 2:
                raise PresentationError(f"relative order must be >= 2, got {r}", no)
            orders[i] = r
        elif head == "pow":
            lhs, rhs = _split_eq(rest, no)
            i = _int(lhs, no) - 1
            _index(i, n, no)
            w = parse_word(rhs, n, no)
            _rhs_above(w, i, no)
            powers[i] = w
        elif head == "conj":
            lhs, rhs = _split_eq(rest, no)
            parts = lhs.split()
            if len(parts) != 2:
                raise PresentationError("expected 'conj <j> <i> = <word>'", no)
            j = _int(parts[0], no) - 1
            si = _int(parts[1], no)
            sign = -1 if si < 0 else 1
            i = abs(si) - 1
            _index(j, n, no)
            _index(i, n, no)
            if not i < j:
                raise PresentationError(f"conj {j + 1} {si}: need i < j", no)
            w = parse_word(rhs, n, no)
            _rhs_above(w, i, no)
            if (j, i, sign) in conj:
                raise PresentationError(f"duplicate relation conj {j + 1} {si}", no)
            conj[(j, i, sign)] = w
        else:
            raise PresentationError(f"unknown directive {head!r}", no)
    if n is None:
        raise PresentationError("missing 'gens' line", rows[-1][0])
    for i in powers:
        if i not in orders:
            raise PresentationError(f"pow {i + 1} given but g{i + 1} has no order line")
    return PcPresentation(n, orders, {i: w for i, w in powers.items() if w}, conj)


def _int(s, no):
    try:
        return int(s)
    except ValueError:
        raise PresentationError(f"expected an integer, got {s!r}", no) from None


def _index(i, n, no):
    if not 0 <= i < n:
        raise PresentationError(f"generator index {i + 1} out of range 1..{n}", no)


def _split_eq(s, no):
    lhs, eq, rhs = s.partition("=")
    if not eq:
        raise PresentationError("expected '='", no)
    return lhs.strip(), rhs.strip()


def _rhs_above(w, key, no):
    for g, _ in w:
        if g <= key:
            raise PresentationError(
                f"right-hand side generator g{g + 1} must have index greater than {key + 1}", no)
