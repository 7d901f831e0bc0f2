"""The major operator and the three forbidden patterns.

A network solves the density task exactly when its graph has no leader, no
non-trivial maximal self-sufficient subset and no self-sufficient m-cycle.
Subsets are exchanged as ascending tuples of vertex ids; internally they are
bitmasks, which are also configurations (the 1-set of ``x`` is ``x`` itself).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

import numpy as np

from .dynamics import (
    TABLE_MAX_N,
    limit_cycles,
    require_mban,
    successor_table,
)
from .errors import BudgetExceededError, GraphFormatError
from .graph import DiGraph, mask_members, subset_mask

#: Default vertex cap for size-ordered subset searches.
MAX_SUBSET_N = 24
#: Default vertex cap for searches through the full state space.
MAX_STATE_N = TABLE_MAX_N
_CHUNK = 1 << 20


def major_mask(g: DiGraph, s: int) -> int:
    out = 0
    for v, (m, d) in enumerate(zip(g.masks, g.indegrees)):
        if 2 * (s & m).bit_count() > d:
            out |= 1 << v
    return out


def major(g: DiGraph, s: Iterable[int]) -> tuple[int, ...]:
    """Vertices with a strict majority of their in-neighbours inside ``s``."""
    return mask_members(major_mask(g, subset_mask(s)))


def major_many(g: DiGraph, states: np.ndarray) -> np.ndarray:
    states = np.asarray(states, dtype=np.int64)
    out = np.zeros(states.shape, dtype=np.int64)
    for v, (m, d) in enumerate(zip(g.masks, g.indegrees)):
        ones = np.bitwise_count(states & np.int64(m)).astype(np.int64)
        out |= (2 * ones > d).astype(np.int64) << v
    return out


# -- certificates ------------------------------------------------------------


@dataclass(frozen=True)
class LeaderCertificate:
    s: tuple[int, ...]
    major_of_s: tuple[int, ...]
    n: int
    kind = "leader"


@dataclass(frozen=True)
class SelfSufficientCertificate:
    s: tuple[int, ...]
    maximal: bool
    n: int

    @property
    def kind(self) -> str:
        return "maximal-self-sufficient" if self.maximal else "self-sufficient"


@dataclass(frozen=True)
class MCycleCertificate:
    subsets: tuple[tuple[int, ...], ...]
    n: int
    kind = "m-cycle"

    @property
    def m(self) -> int:
        return len(self.subsets)


Certificate = Union[LeaderCertificate, SelfSufficientCertificate, MCycleCertificate]


@dataclass(frozen=True)
class CharacterizationVerdict:
    solves: bool
    witness: Certificate | None


def verify_certificate(g: DiGraph, cert: Certificate) -> bool:
    """Recompute the defining conditions of a certificate on ``g``."""
    if not isinstance(cert, (LeaderCertificate, SelfSufficientCertificate, MCycleCertificate)):
        raise TypeError(f"not a certificate: {cert!r}")
    n = g.n
    if cert.n != n:
        return False
    if isinstance(cert, LeaderCertificate):
        s = subset_mask(cert.s)
        m = major_mask(g, s)
        return (
            2 * len(cert.s) < n
            and 2 * m.bit_count() > n
            and mask_members(m) == tuple(cert.major_of_s)
        )
    if isinstance(cert, SelfSufficientCertificate):
        s = subset_mask(cert.s)
        m = major_mask(g, s)
        if s == 0 or s & ~m:
            return False
        if cert.maximal:
            return m == s and s != (1 << n) - 1
        return 2 * s.bit_count() < n
    masks = [subset_mask(s) for s in cert.subsets]
    if len(masks) < 2 or len(set(masks)) != len(masks) or (1 << n) - 1 in masks:
        return False
    return all(major_mask(g, a) == masks[(i + 1) % len(masks)] for i, a in enumerate(masks))


def format_certificate(cert: Certificate) -> str:
    def ids(s):
        return " ".join(map(str, s))

    lines = [f"certificate {cert.kind} {cert.n}"]
    if isinstance(cert, LeaderCertificate):
        lines += [f"S: {ids(cert.s)}", f"M: {ids(cert.major_of_s)}"]
    elif isinstance(cert, SelfSufficientCertificate):
        lines.append(f"S: {ids(cert.s)}")
    else:
        lines += [f"{i}: {ids(s)}" for i, s in enumerate(cert.subsets)]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    rows: list[tuple[str, tuple[int, ...]]] = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 3 or parts[0] != "certificate" or not parts[2].isdigit():
                raise GraphFormatError(f"bad certificate header {raw!r}", lineno)
            header = (parts[1], int(parts[2]))
            continue
        key, sep, tail = line.partition(":")
        if not sep:
            raise GraphFormatError(f"expected '<tag>: <ids>', got {raw!r}", lineno)
        try:
            rows.append((key.strip(), tuple(int(t) for t in tail.split())))
        except ValueError:
            raise GraphFormatError(f"non-integer id in {raw!r}", lineno) from None
    if header is None:
        raise GraphFormatError("empty certificate")
    kind, n = header
    tags = dict(rows)
    if kind == "leader":
        return LeaderCertificate(tags["S"], tags["M"], n)
    if kind in ("self-sufficient", "maximal-self-sufficient"):
        return SelfSufficientCertificate(tags["S"], kind == "maximal-self-sufficient", n)
    if kind == "m-cycle":
        return MCycleCertificate(tuple(s for _, s in rows), n)
    raise GraphFormatError(f"unknown certificate kind {kind!r}")


# -- size-ordered subset search -----------------------------------------------


@lru_cache(maxsize=64)
def masks_of_size(n: int, k: int) -> np.ndarray:
    """All ``n``-bit masks with exactly ``k`` ones (ascending integer order)."""
    if k < 0 or k > n:
        return np.zeros(0, dtype=np.int64)
    if k == 0:
        return np.zeros(1, dtype=np.int64)
    if k == n:
        return np.array([(1 << n) - 1], dtype=np.int64)
    without_top = masks_of_size(n - 1, k)
    with_top = masks_of_size(n - 1, k - 1) | np.int64(1 << (n - 1))
    return np.concatenate([without_top, with_top])


def _lex_first(masks: np.ndarray, n: int) -> int:
    """The mask whose ascending member tuple is lexicographically smallest.

    For equal-size sets, the lex-smaller tuple owns the lowest bit of the
    symmetric difference, i.e. it has the larger bit-reversed value.
    """
    rev = np.zeros(masks.shape, dtype=np.int64)
    for v in range(n):
        rev |= ((masks >> v) & 1) << (n - 1 - v)
    return int(masks[int(np.argmax(rev))])


def _search_by_size(g: DiGraph, sizes: Iterable[int], accept, max_subsets: int | None) -> int | None:
    n = g.n
    examined = 0
    for k in sizes:
        cands = masks_of_size(n, k)
        hits = []
        for lo in range(0, len(cands), _CHUNK):
            chunk = cands[lo : lo + _CHUNK]
            examined += len(chunk)
            if max_subsets is not None and examined > max_subsets:
                raise BudgetExceededError(
                    f"subset budget of {max_subsets} exhausted at size {k}", progress=examined
                )
            ok = accept(chunk, major_many(g, chunk))
            if ok.any():
                hits.append(chunk[ok])
        if hits:
            return _lex_first(np.concatenate(hits), n)
    return None


def _check_subset_budget(g: DiGraph, max_n: int) -> None:
    if g.n > max_n:
        raise BudgetExceededError(f"{g.n} vertices exceeds the subset-search limit of {max_n}")


def find_leader(
    g: DiGraph, max_n: int = MAX_SUBSET_N, max_subsets: int | None = None
) -> LeaderCertificate | None:
    """Smallest (then lexicographically first) ``S`` with ``|S| < n/2 < |M(S)|``."""
    _check_subset_budget(g, max_n)
    n = g.n

    def accept(s, m):
        return 2 * np.bitwise_count(m).astype(np.int64) > n

    s = _search_by_size(g, range(1, (n + 1) // 2), accept, max_subsets)
    if s is None:
        return None
    return LeaderCertificate(mask_members(s), mask_members(major_mask(g, s)), n)


def find_small_self_sufficient(
    g: DiGraph, max_n: int = MAX_SUBSET_N, max_subsets: int | None = None
) -> SelfSufficientCertificate | None:
    """Smallest non-empty ``S`` with ``|S| < n/2`` and ``S ⊆ M(S)``."""
    _check_subset_budget(g, max_n)
    n = g.n

    def accept(s, m):
        return (s & ~m) == 0

    s = _search_by_size(g, range(1, (n + 1) // 2), accept, max_subsets)
    if s is None:
        return None
    return SelfSufficientCertificate(mask_members(s), False, n)


def _state_table(g: DiGraph, max_n: int) -> np.ndarray:
    require_mban(g)
    if g.n > max_n:
        raise BudgetExceededError(f"{g.n} vertices exceeds the state-space limit of {max_n}")
    return successor_table(g, max_n=max(max_n, g.n))


def nontrivial_fixed_points(g: DiGraph, max_n: int = MAX_STATE_N) -> list[int]:
    table = _state_table(g, max_n)
    full = (1 << g.n) - 1
    fixed = np.flatnonzero(table == np.arange(len(table), dtype=np.int64))
    return [int(x) for x in fixed if x not in (0, full)]


def find_maximal_self_sufficient(
    g: DiGraph, max_n: int = MAX_STATE_N
) -> SelfSufficientCertificate | None:
    """A non-empty proper ``S`` with ``M(S) = S``, read off a non-trivial fixed point.

    Among all such sets the smallest, then lexicographically first, is returned.
    """
    fixed = nontrivial_fixed_points(g, max_n)
    if not fixed:
        return None
    pc = np.bitwise_count(np.array(fixed, dtype=np.int64))
    smallest = np.array(fixed, dtype=np.int64)[pc == pc.min()]
    return SelfSufficientCertificate(mask_members(_lex_first(smallest, g.n)), True, g.n)


def find_ss_m_cycle(g: DiGraph, max_n: int = MAX_STATE_N) -> MCycleCertificate | None:
    """The 1-sets along a shortest limit cycle of period at least 2, if any.

    Ties go to the cycle holding the numerically smallest configuration, which
    also becomes ``S_0``.
    """
    table = _state_table(g, max_n)
    cycles = [c for c in limit_cycles(table, g.n) if len(c) >= 2]
    if not cycles:
        return None
    best = min(cycles, key=lambda c: (len(c), c[0]))
    return MCycleCertificate(tuple(mask_members(x) for x in best), g.n)


def limit_cycle_periods(g: DiGraph, max_n: int = MAX_STATE_N) -> list[int]:
    table = _state_table(g, max_n)
    return sorted(len(c) for c in limit_cycles(table, g.n))


def characterize(
    g: DiGraph, max_n: int = MAX_STATE_N, max_subsets: int | None = None
) -> CharacterizationVerdict:
    """Decide the task through pattern search (leader, then maximal self-sufficient, then m-cycle)."""
    require_mban(g)
    if g.n % 2 == 0:
        raise ValueError("characterization needs an odd number of vertices")
    for search in (
        lambda: find_leader(g, max_n=max(max_n, MAX_SUBSET_N), max_subsets=max_subsets),
        lambda: find_maximal_self_sufficient(g, max_n),
        lambda: find_ss_m_cycle(g, max_n),
    ):
        witness = search()
        if witness is not None:
            return CharacterizationVerdict(False, witness)
    return CharacterizationVerdict(True, None)
