"""AAG (commutator) and non-commutative Diffie-Hellman key exchange.

Secrets are words over the public subgroup generators: syllables
``(position, exponent)`` indexing ``s_gens`` (Alice) or ``t_gens`` (Bob).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from pcgroup.collection import (
    collect, commutator, conjugate, evaluate, inverse, multiply,
)
from pcgroup.conjugacy import Solver, multiple_conjugacy
from pcgroup.presentation import (
    NormalWord, PresentationError, Word, format_normal, parse_normal, random_word,
)
from pcgroup.zoo import GroupSpec, resolve_group

SubgroupWord = Word
ALICE, BOB = "alice", "bob"


@dataclass(frozen=True, eq=False)
class AagParams:
    group: GroupSpec
    s_gens: Tuple[NormalWord, ...]
    t_gens: Tuple[NormalWord, ...]

    def __post_init__(self):
        if not self.s_gens or not self.t_gens:
            raise ValueError("both subgroups need at least one generator")

    def own(self, role):
        return self.s_gens if _role(role) == ALICE else self.t_gens

    def peer(self, role):
        return self.t_gens if _role(role) == ALICE else self.s_gens


@dataclass(frozen=True, eq=False)
class NcdhParams:
    group: GroupSpec
    u: NormalWord
    s_gens: Tuple[NormalWord, ...]
    t_gens: Tuple[NormalWord, ...]

    def __post_init__(self):
        if not self.s_gens or not self.t_gens:
            raise ValueError("both subgroups need at least one generator")
        p = self.group.presentation
        one = p.identity()
        for i, s in enumerate(self.s_gens):
            for j, t in enumerate(self.t_gens):
                if commutator(p, s, t) != one:
                    raise ValueError(
                        f"S and T do not commute: [s{i + 1}, t{j + 1}] is not trivial")

    def own(self, role):
        return self.s_gens if _role(role) == ALICE else self.t_gens


def _role(role):
    if role not in (ALICE, BOB):
        raise ValueError(f"role must be 'alice' or 'bob', got {role!r}")
    return role


def _check_secret(secret, gens):
    for pos, e in secret:
        if not 0 <= pos < len(gens):
            raise ValueError(f"secret uses generator position {pos + 1} of {len(gens)}")
        if e == 0:
            raise ValueError("secret has a zero exponent")


def secret_element(gens, secret: SubgroupWord, group: GroupSpec) -> NormalWord:
    _check_secret(secret, gens)
    return evaluate(group.presentation, gens, secret)


# -- AAG ------------------------------------------------------------------------

def aag_commit(params: AagParams, role: str, secret: SubgroupWord) -> Tuple[NormalWord, ...]:
    """Alice publishes t_j^a for all j; Bob publishes s_i^b for all i."""
    p = params.group.presentation
    x = secret_element(params.own(role), secret, params.group)
    return tuple(conjugate(p, y, x) for y in params.peer(role))


def aag_key(params: AagParams, role: str, secret: SubgroupWord,
            peer_commit: Sequence[NormalWord]) -> NormalWord:
    """The shared key [a, b], computed from one secret and the peer's commit."""
    p = params.group.presentation
    if len(peer_commit) != len(params.own(role)):
        raise ValueError(
            f"peer commit has {len(peer_commit)} entries, expected {len(params.own(role))}")
    x = secret_element(params.own(role), secret, params.group)
    # the peer commit is the own generators conjugated by the peer secret, so
    # substituting into the secret word gives x conjugated by the peer secret
    x_conj = evaluate(p, peer_commit, secret)
    if role == ALICE:
        return multiply(p, inverse(p, x), x_conj)
    return multiply(p, inverse(p, x_conj), x)


def aag_attack(params: AagParams, commit_a, commit_b, solver: Solver = Solver(),
               deadline: Optional[float] = None) -> Optional[NormalWord]:
    """Recover the key from public data by solving t_j^a' = commit_a[j] in S."""
    wit = multiple_conjugacy(params.group, params.s_gens, params.t_gens, commit_a,
                             solver, deadline=deadline)
    if wit is None:
        return None
    return aag_key(params, ALICE, wit.conjugator_word, commit_b)


# -- non-commutative Diffie-Hellman ------------------------------------------------

def ncdh_commit(params: NcdhParams, role: str, secret: SubgroupWord) -> NormalWord:
    x = secret_element(params.own(role), secret, params.group)
    return conjugate(params.group.presentation, params.u, x)


def ncdh_key(params: NcdhParams, role: str, secret: SubgroupWord,
             peer_commit: NormalWord) -> NormalWord:
    x = secret_element(params.own(role), secret, params.group)
    return conjugate(params.group.presentation, peer_commit, x)


def ncdh_attack(params: NcdhParams, commit_a, commit_b, solver: Solver = Solver(),
                deadline: Optional[float] = None) -> Optional[NormalWord]:
    wit = multiple_conjugacy(params.group, params.s_gens, [params.u], [commit_a],
                             solver, deadline=deadline)
    if wit is None:
        return None
    return conjugate(params.group.presentation, commit_b, wit.conjugator)


# -- classic baseline ------------------------------------------------------------

def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def classic_dh(p: int, g: int, x: int, y: int) -> Tuple[int, int, int]:
    """Return (X, Y, k) for Diffie-Hellman modulo the prime p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 0 < g < p:
        raise ValueError("generator must satisfy 0 < g < p")
    X, Y = pow(g, x, p), pow(g, y, p)
    k_alice, k_bob = pow(Y, x, p), pow(X, y, p)
    if k_alice != k_bob:
        raise ArithmeticError("Diffie-Hellman derivations disagree")
    return X, Y, k_alice


# -- demo parameters ---------------------------------------------------------------

def random_element(group: GroupSpec, rng: random.Random, syllables=3, bound=3) -> NormalWord:
    p = group.presentation
    return collect(p, random_word(p, syllables, bound, rng.getrandbits(64)))


def random_secret(count: int, rng: random.Random, syllables=4, bound=3) -> SubgroupWord:
    out = []
    for _ in range(syllables):
        e = rng.choice([k for k in range(-bound, bound + 1) if k])
        out.append((rng.randrange(count), e))
    return tuple(out)


def random_aag_params(group: GroupSpec, seed: int, gens=2, syllables=3, bound=3) -> AagParams:
    """Subgroups generated by ``gens`` random elements each."""
    rng = random.Random(seed)
    s = tuple(random_element(group, rng, syllables, bound) for _ in range(gens))
    t = tuple(random_element(group, rng, syllables, bound) for _ in range(gens))
    return AagParams(group, s, t)


def product_ncdh_params(group: GroupSpec, seed: int, syllables=3, bound=3) -> NcdhParams:
    """S = first direct factor, T = second, u random."""
    if group.blocks is None:
        raise ValueError(f"group {group.name} is not a direct product")
    n1 = group.blocks[0]
    p = group.presentation
    rng = random.Random(seed)
    u = random_element(group, rng, syllables, bound)
    s = tuple(p.generator(i) for i in range(n1))
    t = tuple(p.generator(i) for i in range(n1, p.n))
    return NcdhParams(group, u, s, t)


# -- transcripts -------------------------------------------------------------------

@dataclass
class KexTranscript:
    protocol: str
    group: str
    s_gens: Tuple[NormalWord, ...]
    t_gens: Tuple[NormalWord, ...]
    commit_a: Tuple[NormalWord, ...]
    commit_b: Tuple[NormalWord, ...]
    u: Optional[NormalWord] = None
    key_a: Optional[NormalWord] = None
    key_b: Optional[NormalWord] = None

    def __post_init__(self):
        if self.protocol not in ("aag", "ncdh"):
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if (self.protocol == "ncdh") != (self.u is not None):
            raise ValueError("a 'u' element is required for ncdh and only for ncdh")
        if self.key_a is not None and self.key_b is not None and self.key_a != self.key_b:
            raise ValueError("transcript keys differ")

    def params(self, group: Optional[GroupSpec] = None):
        group = group or resolve_group(self.group)
        if self.protocol == "aag":
            return AagParams(group, self.s_gens, self.t_gens)
        return NcdhParams(group, self.u, self.s_gens, self.t_gens)


def _fmt_list(xs):
    return ";".join(format_normal(x) for x in xs)


def _parse_list(text, n=None):
    return tuple(parse_normal(t, n) for t in text.split(";"))


def format_transcript(t: KexTranscript) -> str:
    lines = [f"kex v1 {t.protocol}", f"group {t.group}",
             f"sgens {_fmt_list(t.s_gens)}", f"tgens {_fmt_list(t.t_gens)}"]
    if t.u is not None:
        lines.append(f"u {format_normal(t.u)}")
    lines.append(f"commitA {_fmt_list(t.commit_a)}")
    lines.append(f"commitB {_fmt_list(t.commit_b)}")
    if t.key_a is not None:
        lines.append(f"keyA {format_normal(t.key_a)}")
    if t.key_b is not None:
        lines.append(f"keyB {format_normal(t.key_b)}")
    return "\n".join(lines) + "\n"


def parse_transcript(text: str) -> KexTranscript:
    fields = {}
    protocol = None
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        if protocol is None:
            parts = s.split()
            if len(parts) != 3 or parts[:2] != ["kex", "v1"]:
                raise PresentationError("expected header 'kex v1 <aag|ncdh>'", no)
            protocol = parts[2]
            continue
        key, _, value = s.partition(" ")
        if key not in ("group", "sgens", "tgens", "u", "commitA", "commitB", "keyA", "keyB"):
            raise PresentationError(f"unknown transcript field {key!r}", no)
        if key in fields:
            raise PresentationError(f"duplicate field {key!r}", no)
        fields[key] = (no, value.strip())
    if protocol is None:
        raise PresentationError("empty transcript")
    for need in ("group", "sgens", "tgens", "commitA", "commitB"):
        if need not in fields:
            raise PresentationError(f"transcript is missing {need!r}")

    def get(key, single=False):
        if key not in fields:
            return None
        no, value = fields[key]
        try:
            return parse_normal(value) if single else _parse_list(value)
        except PresentationError as exc:
            raise PresentationError(str(exc), no) from None

    values = (get("sgens"), get("tgens"), get("commitA"), get("commitB"),
              get("u", True), get("keyA", True), get("keyB", True))
    try:
        return KexTranscript(protocol, fields["group"][1], *values)
    except ValueError as exc:
        raise PresentationError(str(exc)) from None


def run_aag(params: AagParams, secret_a: SubgroupWord, secret_b: SubgroupWord,
            group_ref: Optional[str] = None) -> KexTranscript:
    commit_a = aag_commit(params, ALICE, secret_a)
    commit_b = aag_commit(params, BOB, secret_b)
    key_a = aag_key(params, ALICE, secret_a, commit_b)
    key_b = aag_key(params, BOB, secret_b, commit_a)
    return KexTranscript("aag", group_ref or params.group.name, params.s_gens, params.t_gens,
                         commit_a, commit_b, None, key_a, key_b)


def run_ncdh(params: NcdhParams, secret_a: SubgroupWord, secret_b: SubgroupWord,
             group_ref: Optional[str] = None) -> KexTranscript:
    commit_a = ncdh_commit(params, ALICE, secret_a)
    commit_b = ncdh_commit(params, BOB, secret_b)
    key_a = ncdh_key(params, ALICE, secret_a, commit_b)
    key_b = ncdh_key(params, BOB, secret_b, commit_a)
    return KexTranscript("ncdh", group_ref or params.group.name, params.s_gens, params.t_gens,
                         (commit_a,), (commit_b,), params.u, key_a, key_b)
