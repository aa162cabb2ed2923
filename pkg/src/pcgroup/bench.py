"""Timing harness: collection versus conjugacy search on the same group."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from statistics import mean
from typing import List, Optional

from pcgroup.collection import collect, conjugate
from pcgroup.conjugacy import (
    SearchTimeout, Solver, conjugacy_search_bounded, conjugacy_search_finite,
)
from pcgroup.presentation import random_word
from pcgroup.zoo import GroupSpec

DEFAULT_TIMEOUT_MS = 60_000


@dataclass
class BenchResult:
    label: str
    hirsch: int
    trials: int
    seed: int
    r: Optional[int] = None
    collect_mean_ms: Optional[float] = None
    collect_max_ms: Optional[float] = None
    conj_mean_ms: Optional[float] = None
    conj_max_ms: Optional[float] = None
    conj_timeouts: int = 0
    conj_unsolved: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be positive")


def _seeds(seed, trials):
    rng = random.Random(seed)
    return [rng.getrandbits(64) for _ in range(trials)]


def bench_words(g: GroupSpec, trials, syllables, exponent_bound, seed):
    p = g.presentation
    return [random_word(p, syllables, exponent_bound, s) for s in _seeds(seed, trials)]


def bench_collection(g: GroupSpec, trials=100, syllables=10, exponent_bound=16, seed=0,
                     warmup=0) -> BenchResult:
    """Time ``collect`` on seeded random words."""
    p = g.presentation
    words = bench_words(g, trials, syllables, exponent_bound, seed)
    for w in words[:warmup]:
        collect(p, w)
    times = []
    for w in words:
        t0 = time.perf_counter()
        collect(p, w)
        times.append((time.perf_counter() - t0) * 1000)
    return BenchResult(g.name, g.hirsch_length, trials, seed, g.r,
                       collect_mean_ms=mean(times), collect_max_ms=max(times))


def conjugacy_instances(g: GroupSpec, trials, seed, r_syllables=4, r_bound=4,
                        conj_syllables=2, conj_bound=2):
    """Seeded (r, s = r^x, x) triples with short conjugators x."""
    p = g.presentation
    out = []
    for s in _seeds(seed ^ 0x5EED, trials):
        rng = random.Random(s)
        r = collect(p, random_word(p, r_syllables, r_bound, rng.getrandbits(64)))
        x = collect(p, random_word(p, conj_syllables, conj_bound, rng.getrandbits(64)))
        out.append((r, conjugate(p, r, x), x))
    return out


def bench_conjugacy(g: GroupSpec, trials=100, solver: Solver = Solver("bounded", 4),
                    timeout_ms=DEFAULT_TIMEOUT_MS, seed=0, conj_syllables=2,
                    conj_bound=2) -> BenchResult:
    """Time conjugacy search on random conjugate pairs.

    Timed-out trials count at the timeout value.  A returned witness is
    checked by collection before its trial counts; an unsound witness raises.
    """
    p = g.presentation
    acting = g.generators()
    instances = conjugacy_instances(g, trials, seed, conj_syllables=conj_syllables,
                                    conj_bound=conj_bound)
    times = []
    timeouts = unsolved = 0
    for r, s, _ in instances:
        t0 = time.perf_counter()
        deadline = time.monotonic() + timeout_ms / 1000
        try:
            if solver.kind == "finite":
                wit = conjugacy_search_finite(g, acting, r, s, deadline=deadline)
            else:
                wit = conjugacy_search_bounded(g, acting, r, s, solver.bound, deadline=deadline)
        except SearchTimeout:
            times.append(float(timeout_ms))
            timeouts += 1
            continue
        elapsed = (time.perf_counter() - t0) * 1000
        if wit is None:
            unsolved += 1
        elif conjugate(p, r, wit.conjugator) != s:
            raise AssertionError(f"unsound conjugacy witness on {g.name}")
        times.append(elapsed)
    return BenchResult(g.name, g.hirsch_length, trials, seed, g.r,
                       conj_mean_ms=mean(times), conj_max_ms=max(times),
                       conj_timeouts=timeouts, conj_unsolved=unsolved)


def bench_group(g: GroupSpec, trials=100, solver: Solver = Solver("bounded", 4),
                timeout_ms=DEFAULT_TIMEOUT_MS, seed=0, syllables=10, exponent_bound=16,
                warmup=0) -> BenchResult:
    res = bench_collection(g, trials, syllables, exponent_bound, seed, warmup)
    conj = bench_conjugacy(g, trials, solver, timeout_ms, seed)
    res.conj_mean_ms = conj.conj_mean_ms
    res.conj_max_ms = conj.conj_max_ms
    res.conj_timeouts = conj.conj_timeouts
    res.conj_unsolved = conj.conj_unsolved
    return res


def _cells(res: BenchResult):
    coll = "" if res.collect_mean_ms is None else f"{res.collect_mean_ms:.3f}"
    if res.conj_mean_ms is None:
        conj = ""
    elif res.conj_timeouts == res.trials:
        conj = ">timeout"
    else:
        conj = f"{res.conj_mean_ms:.3f}"
    r = str(res.r) if res.r is not None else res.label
    return [r, str(res.hirsch), coll, conj, str(res.conj_timeouts)]


def emit_table(results: List[BenchResult], fmt: str = "markdown") -> str:
    """Render rows as ``r, h, coll, conj, timeouts`` (times in ms)."""
    if not results:
        raise ValueError("no benchmark results to tabulate")
    header = ["r", "h", "coll_ms", "conj_ms", "timeouts"]
    rows = [_cells(res) for res in results]
    if fmt == "csv":
        return "\n".join(",".join(row) for row in [header] + rows) + "\n"
    if fmt != "markdown":
        raise ValueError(f"unknown table format {fmt!r}")
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines) + "\n"
