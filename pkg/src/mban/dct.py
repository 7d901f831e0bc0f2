"""Deciding the density classification task by exhaustive enumeration."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    TABLE_MAX_N,
    final_states,
    format_config,
    majority,
    orbit,
    require_mban,
    stepper,
    successor_table,
    uniform,
)
from .errors import BudgetExceededError, TieError
from .graph import DiGraph

WRONG_FIXED_POINT = "wrong-fixed-point"
LIMIT_CYCLE = "limit-cycle"
MAJORITY_FLIP = "majority-flip-detected"

#: Default cap on the vertex count of a full configuration scan.
MAX_SCAN_N = 20


@dataclass(frozen=True)
class DctVerdict:
    solves: bool
    counterexample: int | None
    failure_kind: str | None
    majority_flip: bool
    configurations_checked: int
    n: int

    def format(self) -> dict:
        out = {
            "solves": self.solves,
            "configurations_checked": self.configurations_checked,
        }
        if not self.solves:
            out["counterexample"] = format_config(self.counterexample, self.n)
            out["failure_kind"] = self.failure_kind
            out["majority_flip"] = self.majority_flip
        return out


def _require_odd(g: DiGraph) -> None:
    if g.n % 2 == 0:
        raise TieError(f"the task is undefined for an even number of vertices ({g.n})")


def check_dct_one(g: DiGraph, x: int, max_steps: int | None = None) -> bool:
    """Does the orbit of ``x`` reach the uniform configuration of its majority?"""
    _require_odd(g)
    target = uniform(majority(x, g.n), g.n)
    return orbit(g, x, max_steps).cycle == (target,)


def classify_failure(g: DiGraph, x: int, max_steps: int | None = None) -> tuple[str, bool]:
    """Failure kind of a counterexample plus whether the majority ever changes along its orbit."""
    orb = orbit(g, x, max_steps)
    kind = WRONG_FIXED_POINT if orb.period == 1 else LIMIT_CYCLE
    seq = orb.states() + orb.cycle[:1]
    majs = [majority(y, g.n) for y in seq]
    flip = any(a != b for a, b in zip(majs, majs[1:]))
    return kind, flip


def _scan_range(g: DiGraph, lo: int, hi: int) -> tuple[int | None, int]:
    """Per-configuration scan of ``[lo, hi)`` with memoised outcomes.

    Returns the first failing configuration (or None) and the count checked.
    """
    n = g.n
    f = stepper(g)
    full = uniform(1, n)
    verdict: dict[int, int] = {0: 0, full: full}  # state -> final fixed point, -1 if none
    for x in range(lo, hi):
        path = []
        on_path: set[int] = set()
        y = x
        while y not in verdict and y not in on_path:
            path.append(y)
            on_path.add(y)
            y = f(y)
        end = verdict[y] if y in verdict else -1
        for z in path:
            verdict[z] = end
        if end != uniform(majority(x, n), n):
            return x, x - lo + 1
    return None, hi - lo


def check_dct_all(
    g: DiGraph,
    prune_complements: bool = True,
    max_n: int = MAX_SCAN_N,
    jobs: int = 1,
) -> DctVerdict:
    """Decide whether the network solves the task by checking every configuration.

    With ``prune_complements`` only configurations whose last bit (vertex
    ``n-1``) is 0 are visited; by self-duality the complement of each behaves
    symmetrically.  Every complementary pair has its smaller member in that
    half, so the first counterexample in ascending order is the same either way.
    """
    require_mban(g)
    _require_odd(g)
    n = g.n
    if n > max_n:
        raise BudgetExceededError(f"{n} vertices exceeds the full-scan limit of {max_n}")
    limit = 1 << (n - 1) if prune_complements else 1 << n
    if n <= TABLE_MAX_N:
        fin = final_states(successor_table(g), n)[:limit]
        xs = np.arange(limit, dtype=np.int64)
        maj = 2 * np.bitwise_count(xs) > n
        target = np.where(maj, np.int64(uniform(1, n)), np.int64(0))
        bad = np.flatnonzero(fin != target)
        if bad.size == 0:
            return DctVerdict(True, None, None, False, limit, n)
        cx = int(bad[0])
        checked = cx + 1
    else:
        cx, checked = _parallel_scan(g, limit, jobs)
        if cx is None:
            return DctVerdict(True, None, None, False, checked, n)
    kind, flip = classify_failure(g, cx)
    return DctVerdict(False, cx, kind, flip, checked, n)


def _parallel_scan(g: DiGraph, limit: int, jobs: int) -> tuple[int | None, int]:
    if jobs <= 1:
        return _scan_range(g, 0, limit)
    bounds = np.linspace(0, limit, jobs + 1, dtype=np.int64).tolist()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_scan_range, [g] * jobs, bounds[:-1], bounds[1:]))
    # deterministic merge: the lowest-order counterexample wins
    checked = 0
    for (cx, cnt), lo in zip(parts, bounds[:-1]):
        if cx is not None:
            return cx, lo + cnt
        checked += cnt
    return None, checked
