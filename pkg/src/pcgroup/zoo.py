"""Concrete polycyclic groups with faithful integer matrix embeddings.

Matrices act on row vectors, so the image of a word is the product of its
generator images in word order.  The embeddings give a word-problem oracle
that shares no code with the collector.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import prod
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from pcgroup import cyclotomic, intmat
from pcgroup.presentation import (
    PcPresentation, PresentationError, Word, _parse_lines, format_presentation,
    hirsch_length,
)


@dataclass(frozen=True, eq=False)
class GroupSpec:
    presentation: PcPresentation
    name: str
    embedding: Optional[Tuple[np.ndarray, ...]] = None
    order: Optional[int] = None
    r: Optional[int] = None
    blocks: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        p = self.presentation
        if self.order is not None and len(p.orders) != p.n:
            raise ValueError("order given for a group with infinite generators")
        if self.embedding is not None:
            if len(self.embedding) != p.n:
                raise ValueError("embedding needs one matrix per generator")
            if len({m.shape for m in self.embedding}) != 1:
                raise ValueError("embedding matrices must share a dimension")

    @property
    def n(self):
        return self.presentation.n

    @property
    def hirsch_length(self):
        return hirsch_length(self.presentation)

    @property
    def is_finite(self):
        return len(self.presentation.orders) == self.presentation.n

    @cached_property
    def _inverse_images(self):
        return tuple(intmat.inverse(m) for m in self.embedding)

    def generators(self):
        return [self.presentation.generator(i) for i in range(self.n)]


def _with_order(p: PcPresentation) -> Optional[int]:
    if len(p.orders) == p.n:
        return prod(p.orders.values())
    return None


def dihedral(m: int) -> GroupSpec:
    """Dihedral group of order 2m: a1 reflection, a2 rotation."""
    if m < 3:
        raise ValueError("dihedral(m) needs m >= 3")
    p = PcPresentation.build(
        2, orders={0: 2, 1: m}, conjugates={(1, 0, 1): [(1, m - 1)]})
    if m == 4:
        refl = intmat.intmat([[1, 0], [0, -1]])
        rot = intmat.intmat([[0, -1], [1, 0]])
    else:
        # permutation matrices on Z/m: rotation i -> i+1, reflection i -> -i
        refl = np.zeros((m, m), dtype=object)
        rot = np.zeros((m, m), dtype=object)
        for i in range(m):
            refl[i, (-i) % m] = 1
            rot[i, (i + 1) % m] = 1
    return GroupSpec(p, "d4" if m == 4 else f"dihedral:{m}", (refl, rot), 2 * m)


def heisenberg() -> GroupSpec:
    """Integer Heisenberg group; a3 = [a2, a1] is central."""
    p = PcPresentation.build(3, conjugates={
        (1, 0, 1): [(1, 1), (2, 1)],
        (1, 0, -1): [(1, 1), (2, -1)],
    })
    a1 = intmat.intmat([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    a2 = intmat.intmat([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    a3 = intmat.intmat([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
    return GroupSpec(p, "heisenberg", (a1, a2, a3))


def direct_product(g: GroupSpec, h: GroupSpec) -> GroupSpec:
    pg, ph = g.presentation, h.presentation
    off = pg.n

    def shift(w):
        return [(x + off, e) for x, e in w]

    orders = dict(pg.orders)
    orders.update({i + off: r for i, r in ph.orders.items()})
    powers = dict(pg.power_rhs)
    powers.update({i + off: shift(w) for i, w in ph.power_rhs.items()})
    conj = dict(pg.conj_rhs)
    conj.update({(j + off, i + off, s): shift(w) for (j, i, s), w in ph.conj_rhs.items()})
    p = PcPresentation.build(pg.n + ph.n, orders, powers, conj)
    embedding = None
    if g.embedding is not None and h.embedding is not None:
        dg = g.embedding[0].shape[0]
        dh = h.embedding[0].shape[0]
        embedding = tuple(_block(m, intmat.identity(dh)) for m in g.embedding) + \
            tuple(_block(intmat.identity(dg), m) for m in h.embedding)
    order = g.order * h.order if g.order is not None and h.order is not None else None
    return GroupSpec(p, f"product:{g.name},{h.name}", embedding, order, blocks=(pg.n, ph.n))


def _block(a, b):
    da, db = a.shape[0], b.shape[0]
    out = np.zeros((da + db, da + db), dtype=object)
    out[:da, :da] = a
    out[da:, da:] = b
    return out


def cyclotomic_group(r: int) -> GroupSpec:
    """The split extension Z[zeta_r] x| U' with U' the cyclotomic units.

    Generators: the torsion unit, the free cyclotomic units, then the
    phi(r) additive basis elements 1, zeta, ... of the ring.
    """
    d = cyclotomic.phi(r)
    torsion, tor_order, free = cyclotomic.unit_generators(r)
    units = [torsion] + free
    nu = len(units)
    n = nu + d
    conj = {}
    mats = []
    for x, u in enumerate(units):
        m = cyclotomic.unit_matrix(r, u)
        mats.append(m)
        m_inv = intmat.inverse(m)
        for row in range(d):
            conj[(nu + row, x, 1)] = [(nu + c, m[row, c]) for c in range(d)]
            if x > 0:
                conj[(nu + row, x, -1)] = [(nu + c, m_inv[row, c]) for c in range(d)]
    p = PcPresentation.build(n, orders={0: tor_order}, conjugates=conj)
    embedding = []
    for m in mats:
        embedding.append(_block(m, intmat.identity(1)))
    for row in range(d):
        t = intmat.identity(d + 1)
        t[d, row] = 1
        embedding.append(t)
    return GroupSpec(p, f"cyclotomic:{r}", tuple(embedding), None, r)


def matrix_of_word(g: GroupSpec, w: Word) -> np.ndarray:
    if g.embedding is None:
        raise ValueError(f"group {g.name} has no matrix embedding")
    inv = g._inverse_images
    acc = intmat.identity(g.embedding[0].shape[0])
    for x, e in w:
        acc = acc.dot(intmat.mat_pow(g.embedding[x], e, inv[x]))
    return acc


def relation_violations(g: GroupSpec):
    """Defining relations whose two sides differ under the embedding."""
    p = g.presentation
    bad = []
    for i, r in p.orders.items():
        if not intmat.equal(matrix_of_word(g, [(i, r)]), matrix_of_word(g, p.power_word(i))):
            bad.append(f"pow {i + 1}")
    for (j, i, s), w in p.conj_rhs.items():
        lhs = matrix_of_word(g, [(i, -s), (j, 1), (i, s)])
        if not intmat.equal(lhs, matrix_of_word(g, w)):
            bad.append(f"conj {j + 1} {s * (i + 1)}")
    return bad


BUILTINS = (
    "d4", "dihedral:6", "heisenberg", "product:d4,d4", "product:heisenberg,heisenberg",
    "cyclotomic:3", "cyclotomic:4", "cyclotomic:7", "cyclotomic:11",
)


def builtin(ref: str) -> GroupSpec:
    """Resolve ``d4 | dihedral:<m> | heisenberg | cyclotomic:<r> | product:<a>,<b>``."""
    kind, _, arg = ref.partition(":")
    try:
        if kind == "d4" and not arg:
            return dihedral(4)
        if kind == "heisenberg" and not arg:
            return heisenberg()
        if kind == "dihedral":
            return dihedral(int(arg))
        if kind == "cyclotomic":
            return cyclotomic_group(int(arg))
        if kind == "product":
            a, sep, b = arg.partition(",")
            if sep:
                return direct_product(resolve_group(a), resolve_group(b))
    except ValueError as exc:
        raise PresentationError(f"bad group {ref!r}: {exc}") from None
    raise PresentationError(f"unknown group {ref!r}")


def resolve_group(ref: str) -> GroupSpec:
    """A built-in name or a path to a group file."""
    path = Path(ref)
    if path.suffix and path.exists():
        spec = parse_group_spec(path.read_text(encoding="utf-8"))
        return spec
    return builtin(ref)


# -- group files ----------------------------------------------------------------

def format_group_spec(g: GroupSpec, with_embedding=True) -> str:
    text = format_presentation(g.presentation)
    head, rest = text.split("\n", 1)
    out = f"{head}\n# name {g.name}\n{rest}"
    if with_embedding and g.embedding is not None:
        out += "[embedding]\n"
        for i, m in enumerate(g.embedding):
            out += f"mat {i + 1} = {intmat.format_matrix(m)}\n"
    return out


def parse_group_spec(text: str, default_name="group") -> GroupSpec:
    lines = list(enumerate(text.splitlines(), 1))
    name = default_name
    for _, raw in lines:
        s = raw.strip()
        if s.startswith("# name "):
            name = s[len("# name "):].strip()
            break
    split = next((k for k, (_, raw) in enumerate(lines) if raw.strip() == "[embedding]"), None)
    pres_lines = lines if split is None else lines[:split]
    p = _parse_lines(pres_lines)
    embedding = None
    if split is not None:
        mats = {}
        for no, raw in lines[split + 1:]:
            s = raw.split("#", 1)[0].strip()
            if not s:
                continue
            head, _, rhs = s.partition("=")
            parts = head.split()
            if len(parts) != 2 or parts[0] != "mat" or not rhs:
                raise PresentationError("expected 'mat <i> = <rows>'", no)
            try:
                i = int(parts[1]) - 1
                mats[i] = intmat.parse_matrix(rhs)
            except ValueError as exc:
                raise PresentationError(str(exc), no) from None
        if sorted(mats) != list(range(p.n)):
            raise PresentationError("embedding must give one matrix per generator")
        embedding = tuple(mats[i] for i in range(p.n))
    r = None
    if name.startswith("cyclotomic:"):
        try:
            r = int(name.split(":", 1)[1])
        except ValueError:
            pass
    return GroupSpec(p, name, embedding, _with_order(p), r)

