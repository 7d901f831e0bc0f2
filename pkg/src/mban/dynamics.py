"""Synchronous local-majority dynamics and orbit analysis.

Configurations are packed into Python ints: bit ``v`` holds the state of
vertex ``v``.  The textual literal writes vertex 0 leftmost, so ``"100"`` is
the int ``1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BudgetExceededError, InvalidNetworkError, TieError
from .graph import DiGraph

#: Above this many vertices ``orbit`` switches to constant-memory cycle detection.
BRENT_THRESHOLD = 24
#: Largest vertex count for which a full successor table is built.
TABLE_MAX_N = 20


# -- configuration literals --------------------------------------------------


def parse_config(text: str) -> tuple[int, int]:
    """``"0110"`` -> ``(x, n)`` with bit ``i`` of ``x`` equal to character ``i``."""
    text = text.strip()
    if not text or any(c not in "01" for c in text):
        raise ValueError(f"configuration literal must be a non-empty 0/1 string, got {text!r}")
    x = 0
    for i, c in enumerate(text):
        if c == "1":
            x |= 1 << i
    return x, len(text)


def format_config(x: int, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def config(text: str) -> int:
    """Shorthand for the packed value of a literal."""
    return parse_config(text)[0]


def complement(x: int, n: int) -> int:
    return ~x & ((1 << n) - 1)


def uniform(bit: int, n: int) -> int:
    return (1 << n) - 1 if bit else 0


# -- majority and the global map ---------------------------------------------


def majority(x: int | str, n: int | None = None) -> int:
    """Majority bit of a configuration; :class:`TieError` when exactly half are ones."""
    if isinstance(x, str):
        x, n = parse_config(x)
    if n is None:
        raise TypeError("n is required for packed configurations")
    ones = x.bit_count()
    if 2 * ones > n:
        return 1
    if 2 * ones < n:
        return 0
    raise TieError(f"tie: {ones} ones out of {n}")


def require_mban(g: DiGraph) -> None:
    bad = [v for v, d in enumerate(g.indegrees) if d % 2 == 0]
    if bad:
        raise InvalidNetworkError(
            f"even or zero in-degree at vertices {bad[:10]}{'...' if len(bad) > 10 else ''}"
        )


def _step_unchecked(masks: tuple[int, ...], halves: tuple[int, ...], x: int) -> int:
    y = 0
    for v, m in enumerate(masks):
        if (x & m).bit_count() > halves[v]:
            y |= 1 << v
    return y


def step(g: DiGraph, x: int) -> int:
    """One synchronous update: each vertex takes the majority of its in-neighbours."""
    require_mban(g)
    return _step_unchecked(g.masks, _halves(g), x)


def _halves(g: DiGraph) -> tuple[int, ...]:
    return tuple(d // 2 for d in g.indegrees)


def stepper(g: DiGraph) -> Callable[[int], int]:
    """A validated single-argument step function for repeated use."""
    require_mban(g)
    masks, halves = g.masks, _halves(g)
    return lambda x: _step_unchecked(masks, halves, x)


def iterate(g: DiGraph, x: int, t: int) -> int:
    if t < 0:
        raise ValueError("t must be non-negative")
    f = stepper(g)
    for _ in range(t):
        x = f(x)
    return x


def step_many(g: DiGraph, states: np.ndarray) -> np.ndarray:
    """Vectorised ``step`` over an int64 array of packed configurations."""
    require_mban(g)
    states = np.asarray(states, dtype=np.int64)
    out = np.zeros(states.shape, dtype=np.int64)
    for v, (m, d) in enumerate(zip(g.masks, g.indegrees)):
        ones = np.bitwise_count(states & np.int64(m))
        out |= (2 * ones.astype(np.int64) > d).astype(np.int64) << v
    return out


def successor_table(g: DiGraph, max_n: int = TABLE_MAX_N) -> np.ndarray:
    """``table[x] = step(g, x)`` for all ``2**n`` configurations."""
    if g.n > max_n:
        raise BudgetExceededError(f"successor table needs 2^{g.n} entries (limit 2^{max_n})")
    return step_many(g, np.arange(1 << g.n, dtype=np.int64))


# -- orbits ------------------------------------------------------------------


@dataclass(frozen=True)
class Orbit:
    """Transient prefix plus limit cycle of a deterministic trajectory."""

    transient: tuple[int, ...]
    cycle: tuple[int, ...]
    n: int

    @property
    def period(self) -> int:
        return len(self.cycle)

    @property
    def transient_length(self) -> int:
        return len(self.transient)

    def states(self) -> tuple[int, ...]:
        return self.transient + self.cycle

    def format(self) -> dict:
        return {
            "transient": [format_config(x, self.n) for x in self.transient],
            "cycle": [format_config(x, self.n) for x in self.cycle],
            "period": self.period,
            "transient_length": self.transient_length,
        }


def functional_orbit(f: Callable[[int], int], x: int, n: int, max_steps: int | None = None) -> Orbit:
    """Exact orbit of ``x`` under ``f`` via a visited map (time index per state)."""
    if max_steps is None:
        max_steps = (1 << n) + 1
    seen: dict[int, int] = {}
    path: list[int] = []
    while x not in seen:
        if len(path) >= max_steps:
            raise BudgetExceededError(
                f"orbit not closed after {len(path)} steps", progress=len(path)
            )
        seen[x] = len(path)
        path.append(x)
        x = f(x)
    mu = seen[x]
    return Orbit(tuple(path[:mu]), tuple(path[mu:]), n)


def brent(f: Callable[[int], int], x: int, max_steps: int | None = None) -> tuple[int, int]:
    """Constant-memory cycle detection; returns ``(transient_length, period)``."""
    budget = max_steps if max_steps is not None else float("inf")
    used = 0
    power = lam = 1
    tortoise, hare = x, f(x)
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = f(hare)
        lam += 1
        used += 1
        if used > budget:
            raise BudgetExceededError(f"no cycle found within {max_steps} steps", progress=used)
    tortoise = hare = x
    for _ in range(lam):
        hare = f(hare)
    mu = 0
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(hare)
        mu += 1
        used += 1
        if used > budget:
            raise BudgetExceededError(f"no cycle found within {max_steps} steps", progress=used)
    return mu, lam


def orbit_shape(g: DiGraph, x: int, max_steps: int | None = None) -> tuple[int, int]:
    """``(transient_length, period)`` of ``x`` without storing the trajectory."""
    return brent(stepper(g), x, max_steps)


def orbit(
    g: DiGraph,
    x: int,
    max_steps: int | None = None,
    brent_threshold: int = BRENT_THRESHOLD,
) -> Orbit:
    """Transient and limit cycle of ``x`` under the majority map of ``g``.

    Small networks record the trajectory in a dict.  Above ``brent_threshold``
    vertices the shape is found first with Brent's method and the states are
    regenerated afterwards, so peak memory is the size of the answer.
    """
    f = stepper(g)
    n = g.n
    if n <= brent_threshold:
        return functional_orbit(f, x, n, max_steps)
    mu, lam = brent(f, x, max_steps)
    if max_steps is not None and mu + lam > max_steps:
        raise BudgetExceededError(f"orbit has {mu + lam} states (limit {max_steps})", mu + lam)
    states = [x]
    for _ in range(mu + lam - 1):
        states.append(f(states[-1]))
    return Orbit(tuple(states[:mu]), tuple(states[mu:]), n)


def final_states(table: np.ndarray, n: int) -> np.ndarray:
    """Image of every state under a power of the map that lands on its limit cycle.

    Pointer doubling: after ``n + 1`` squarings the exponent ``2**(n+1)``
    exceeds the longest possible transient.
    """
    f = np.asarray(table)
    g = f.copy()
    for _ in range(n + 1):
        g = g[g]
    return g


def periodic_points(table: np.ndarray, n: int) -> np.ndarray:
    """Sorted states lying on some limit cycle."""
    return np.unique(final_states(table, n))


def limit_cycles(table: np.ndarray, n: int) -> list[tuple[int, ...]]:
    """Every limit cycle, each rotated to start at its smallest state, sorted by that state."""
    f = np.asarray(table)
    cycles = []
    seen: set[int] = set()
    for start in periodic_points(f, n).tolist():
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        y = int(f[start])
        while y != start:
            cyc.append(y)
            seen.add(y)
            y = int(f[y])
        cycles.append(tuple(cyc))
    return cycles
