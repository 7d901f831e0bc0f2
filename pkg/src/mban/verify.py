"""Randomized and exhaustive property suites for the main results.

Each suite returns a :class:`SuiteResult`; nothing here raises on a failed
property, so callers (tests, the ``verify`` subcommand) decide what to do.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import circuit as cc
from .dct import check_dct_all, check_dct_one
from .errors import ReductionError
from .dynamics import final_states, iterate, limit_cycles, orbit, successor_table
from .graph import DiGraph
from .patterns import characterize, find_leader, major_mask, nontrivial_fixed_points
from .reduce import circuit_to_mban, embed_circuit_config, rails, reduce_dctp_one


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        self.failures.append(message)

    def format(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures[:20],
            **self.notes,
        }


# -- graph generators ----------------------------------------------------------


def odd_subsets(n: int) -> list[tuple[int, ...]]:
    return [s for k in range(1, n + 1, 2) for s in itertools.combinations(range(n), k)]


def all_valid_mbans(n: int) -> Iterator[DiGraph]:
    """Every digraph on ``n`` vertices (loops allowed) with all in-degrees odd."""
    choices = odd_subsets(n)
    for lists in itertools.product(choices, repeat=n):
        yield DiGraph(lists)


def random_valid_mban(n: int, rng: random.Random) -> DiGraph:
    """Each vertex draws an odd in-degree uniformly, then a uniform subset of that size."""
    lists = []
    for _ in range(n):
        d = rng.randrange(1, n + 1, 2)
        lists.append(tuple(sorted(rng.sample(range(n), d))))
    return DiGraph(tuple(lists))


# -- characterization ------------------------------------------------------------


def characterization(seed: int = 0, samples: int = 300, sizes: tuple[int, ...] = (5, 7)) -> SuiteResult:
    """Pattern-based characterization agrees with the brute-force verdict."""
    res = SuiteResult("characterization")
    rng = random.Random(seed)
    graphs = list(all_valid_mbans(3))
    for n in sizes:
        graphs += [random_valid_mban(n, rng) for _ in range(samples)]
    solved = 0
    for g in graphs:
        brute = check_dct_all(g).solves
        charac = characterize(g).solves
        res.checked += 1
        solved += brute
        if brute != charac:
            res.fail(f"n={g.n} {g.in_neighbors}: brute force {brute}, patterns {charac}")
    res.notes["solving_instances"] = solved
    return res


# -- pattern checks -----------------------------------------------------------------


def _subset_major_table(g: DiGraph) -> list[int]:
    return [major_mask(g, s) for s in range(1 << g.n)]


def _cycles_of_map(f: list[int]) -> list[int]:
    """Lengths of all cycles of a function on ``range(len(f))``."""
    color = [0] * len(f)
    lengths = []
    for start in range(len(f)):
        path = []
        x = start
        while color[x] == 0:
            color[x] = 1
            path.append(x)
            x = f[x]
        if color[x] == 1:
            lengths.append(len(path) - path.index(x))
        for y in path:
            color[y] = 2
    return lengths


def pattern_checks(g: DiGraph) -> list[str]:
    """Subset-level oracles against state-space facts; returns the names of the violated checks."""
    n = g.n
    bad = []
    table = successor_table(g)
    xs = np.arange(1 << n, dtype=np.int64)
    ones = np.bitwise_count(xs).astype(np.int64)
    ones_next = np.bitwise_count(table).astype(np.int64)
    flips = bool(np.any((2 * ones < n) & (2 * ones_next > n)))
    if flips != (find_leader(g) is not None):
        bad.append("leader")
    mj = _subset_major_table(g)
    full = (1 << n) - 1
    maximal_ss = any(mj[s] == s for s in range(1, full))
    if maximal_ss != bool(nontrivial_fixed_points(g)):
        bad.append("maximal-self-sufficient")
    m_cycles = {m for m in _cycles_of_map(mj) if m >= 2}
    periods = {len(c) for c in limit_cycles(table, n) if len(c) >= 2}
    if m_cycles != periods:
        bad.append("m-cycle")
    return bad


def _threshold_bits(n: int, choices: list[tuple[int, ...]], per_member: bool) -> np.ndarray:
    """``out[c, x]`` = does ``x`` hold a strict majority of in-list ``choices[c]``.

    Two independent code paths: popcount of an intersection mask (state
    side) or an explicit member-by-member count (subset side).
    """
    xs = np.arange(1 << n, dtype=np.int64)
    out = np.zeros((len(choices), 1 << n), dtype=np.uint8)
    for c, members in enumerate(choices):
        if per_member:
            count = sum((xs >> u) & 1 for u in members)
        else:
            count = np.bitwise_count(xs & sum(1 << u for u in members)).astype(np.int64)
        out[c] = 2 * count > len(members)
    return out


def _period_sets(f: np.ndarray) -> np.ndarray:
    """Per row of a batch of maps on ``range(m)``: bitmask of cycle lengths >= 2."""
    m = f.shape[1]
    on = np.broadcast_to(np.arange(m, dtype=f.dtype), f.shape).copy()
    for _ in range(m):
        on = np.take_along_axis(f, on, axis=1)
    period = np.zeros(f.shape, dtype=np.int64)
    cur = on
    for k in range(1, m + 1):
        cur = np.take_along_axis(f, cur, axis=1)
        period[(cur == on) & (period == 0)] = k
        if period.all():
            break
    bits = np.where(period >= 2, np.left_shift(np.int64(1), period), 0)
    return np.bitwise_or.reduce(bits, axis=1)


def pattern_checks_all(n: int) -> SuiteResult:
    """:func:`pattern_checks` over every odd-in-degree digraph on ``n <= 5`` vertices, batched."""
    if not 1 <= n <= 5:
        raise ValueError("batched pattern check supports 1 <= n <= 5")
    res = SuiteResult(f"pattern-checks-n{n}")
    choices = odd_subsets(n)
    k = len(choices)
    state_bits = _threshold_bits(n, choices, per_member=False)
    subset_bits = _threshold_bits(n, choices, per_member=True)
    full = (1 << n) - 1
    sizes = np.bitwise_count(np.arange(1 << n, dtype=np.int64)).astype(np.int64)
    small = 2 * sizes < n
    rest = np.indices((k,) * (n - 1), dtype=np.int64).reshape(n - 1, k ** (n - 1)).T
    for first in range(k):
        idx = np.column_stack([np.full(len(rest), first, dtype=np.int64), rest])
        table = np.zeros((len(idx), 1 << n), dtype=np.uint8)
        major = np.zeros_like(table)
        for v in range(n):
            table |= state_bits[idx[:, v]] << np.uint8(v)
            major |= subset_bits[idx[:, v]] << np.uint8(v)
        flips = np.any(small & (2 * np.bitwise_count(table) > n), axis=1)
        leader = np.any(small & (2 * np.bitwise_count(major) > n), axis=1)
        inner = np.arange(1, full, dtype=np.uint8)
        fixed_state = np.any(table[:, inner] == inner, axis=1)
        fixed_subset = np.any(major[:, inner] == inner, axis=1)
        periods = _period_sets(table)
        m_cycles = _period_sets(major)
        for name, a, b in (
            ("leader", flips, leader),
            ("maximal-self-sufficient", fixed_state, fixed_subset),
            ("m-cycle", periods, m_cycles),
        ):
            for row in np.flatnonzero(a != b)[:3]:
                res.fail(f"{name}: in-lists {[choices[c] for c in idx[row]]}")
        res.checked += len(idx)
        res.notes["with_leader"] = res.notes.get("with_leader", 0) + int(leader.sum())
        res.notes["with_fixed_point"] = res.notes.get("with_fixed_point", 0) + int(fixed_subset.sum())
        res.notes["with_cycle"] = res.notes.get("with_cycle", 0) + int(np.count_nonzero(m_cycles))
    return res


# -- circuits ------------------------------------------------------------------------


def _random_circuit(rng: random.Random, n_in: int, n_out: int | None = None) -> cc.Circuit:
    return cc.random_circuit(n_in, rng.randint(1, 3 * n_in + 3), rng, n_outputs=n_out)


def fixes_all_ones(c: cc.Circuit) -> bool:
    full = (1 << c.n_inputs) - 1
    return cc.evaluate(c, full) == full


def random_self_map(rng: random.Random, n: int, fix_ones: bool = False) -> cc.Circuit:
    while True:
        c = _random_circuit(rng, n)
        if not fix_ones or fixes_all_ones(c):
            return c


def dual_contract(seed: int = 0, count: int = 100, max_inputs: int = 10) -> SuiteResult:
    """``N(C)(~x) == ~C(x)`` on full truth tables."""
    res = SuiteResult("dual")
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, max_inputs)
        c = _random_circuit(rng, n, rng.randint(1, max_inputs))
        tt = cc.truth_table(c)
        td = cc.truth_table(cc.dual(c))
        in_mask = (1 << n) - 1
        out_mask = (1 << c.n_outputs) - 1
        xs = np.arange(1 << n, dtype=np.int64)
        res.checked += 1
        if not np.array_equal(td[xs ^ in_mask], tt ^ out_mask):
            res.fail(cc.format_circuit(c))
    return res


def rails_violations(c: cc.Circuit, m: cc.Circuit) -> list[str]:
    """Exhaustive check of paired-rail simulation and off-rail collapse."""
    n = c.n_inputs
    tm = cc.truth_table(m)
    tc = cc.truth_table(c)
    mask = (1 << n) - 1
    full = (1 << 2 * n) - 1
    out = []
    for z in range(1 << 2 * n):
        left, right = z & mask, z >> n
        y = int(tm[z])
        if right == left ^ mask:
            want = full if left == mask else rails(int(tc[left]), n)
            if y != want:
                out.append(f"on-rail {z}: got {y}, want {want}")
        elif y not in (0, full):
            out.append(f"off-rail {z}: got {y}")
    return out


def rails_contract(seed: int = 0, count: int = 50, max_n: int = 4) -> SuiteResult:
    res = SuiteResult("rails")
    rng = random.Random(seed)
    for _ in range(count):
        c = random_self_map(rng, rng.randint(1, max_n))
        m = cc.monotonize(c).circuit
        res.checked += 1
        for msg in rails_violations(c, m)[:3]:
            res.fail(msg)
    return res


def cycle_periods(c: cc.Circuit) -> list[int]:
    """Sorted periods (> 1) of all limit cycles of a self-map circuit, one entry per cycle."""
    return sorted(len(cy) for cy in limit_cycles(cc.truth_table(c), c.n_inputs) if len(cy) > 1)


def has_global_attractor(c: cc.Circuit) -> bool:
    full = (1 << c.n_inputs) - 1
    return bool(np.all(final_states(cc.truth_table(c), c.n_inputs) == full))


def only_uniform_cycles(m: cc.Circuit) -> bool:
    full = (1 << m.n_inputs) - 1
    return limit_cycles(cc.truth_table(m), m.n_inputs) == [(0,), (full,)]


def monotone_cycles(seed: int = 0, count: int = 50, max_n: int = 4, fix_ones: bool = True) -> SuiteResult:
    """Cycle transfer from ``C`` to ``M(C)``.

    With ``fix_ones`` the circuits are drawn with ``C(1^n) = 1^n``, which is
    the situation produced by the counter wrapper.  Without it the transfer
    can fail: a 2-cycle through ``1^n`` collapses under rule 1.
    """
    res = SuiteResult("monotone")
    rng = random.Random(seed)
    for _ in range(count):
        c = random_self_map(rng, rng.randint(1, max_n), fix_ones=fix_ones)
        m = cc.monotonize(c).circuit
        res.checked += 1
        pc, pm = cycle_periods(c), cycle_periods(m)
        if pc != pm:
            res.fail(f"periods {pc} vs {pm}:\n{cc.format_circuit(c)}")
        if has_global_attractor(c) != only_uniform_cycles(m):
            res.fail(f"attractor mismatch:\n{cc.format_circuit(c)}")
    return res


# -- counter wrapper -------------------------------------------------------------------


def counter_instance_error(c: cc.Circuit, x: int, i: int) -> str | None:
    """None when the instance behaves as stated, else a description of the failure."""
    n = c.n_inputs
    wrapped = cc.wrap_counter(c, x, i)
    full = (1 << 2 * n) - 1
    if cc.iter_cvp(c, x, i):
        fin = final_states(cc.truth_table(wrapped), 2 * n)
        if not np.all(fin == full):
            return "positive instance without global attractor"
        return None
    seed = cc.with_counter(cc.evaluate(c, x), 1, n)
    orb = cc.circuit_orbit(wrapped, seed)
    if orb.transient or orb.period != 1 << n:
        return f"negative instance: transient {orb.transient_length}, period {orb.period}"
    return None


def find_instances(rng: random.Random, n: int, positive: bool, count: int) -> list[tuple]:
    out = []
    while len(out) < count:
        c = random_self_map(rng, n)
        x = rng.randrange(1 << n)
        i = rng.randrange(n)
        if cc.iter_cvp(c, x, i) == positive:
            out.append((c, x, i))
    return out


def counter_cycles(seed: int = 0, sizes: tuple[int, ...] = (2, 3), per_case: int = 5) -> SuiteResult:
    res = SuiteResult("counter")
    rng = random.Random(seed)
    for n in sizes:
        for positive in (True, False):
            for c, x, i in find_instances(rng, n, positive, per_case):
                res.checked += 1
                err = counter_instance_error(c, x, i)
                if err:
                    res.fail(f"{err}: x={x} i={i}\n{cc.format_circuit(c)}")
    return res


# -- circuit -> MBAN ------------------------------------------------------------------------


SWAP = cc.buffer_circuit(2, [1, 0])


def constant_ones(n: int) -> cc.Circuit:
    """``C(x) = 1^n`` built as ``x_j OR NOT x_j``: every orbit reaches ``1^n`` in one step."""
    b = cc.CircuitBuilder(n)
    outs = [b.add(cc.OR, j, b.add(cc.NOT, j)) for j in range(n)]
    return b.build(outs)


def tf_stabilizes(g: DiGraph, s: int, rng: random.Random, trials: int) -> list[str]:
    t_block = range(s, s + 5)
    f_block = range(s + 5, s + 10)
    bad = []
    for _ in range(trials):
        x = rng.getrandbits(g.n)
        t_maj = int(sum((x >> v) & 1 for v in t_block) >= 3)
        f_maj = int(sum((x >> v) & 1 for v in f_block) >= 3)
        y = iterate(g, x, 2)
        for _step in range(3):
            if any((y >> v) & 1 != t_maj for v in t_block) or any(
                (y >> v) & 1 != f_maj for v in f_block
            ):
                bad.append(f"T/F not settled from {x}")
                break
            y = iterate(g, y, 1)
    return bad


def compiled_cycles(seed: int = 0, trials: int = 100) -> SuiteResult:
    """Limit cycles of ``C`` reappear in ``B(M(C))`` stretched by the depth ``d``."""
    res = SuiteResult("compile")
    rng = random.Random(seed)

    m = cc.monotonize(SWAP)
    r = circuit_to_mban(m)
    d = m.depth
    for x in (1, 2):  # the two states of the swap 2-cycle
        res.checked += 1
        orb = orbit(r.graph, embed_circuit_config(r, m, rails(x, 2)))
        if orb.transient or orb.period != 2 * d:
            res.fail(f"swap state {x}: transient {orb.transient_length}, period {orb.period}, want {2 * d}")
    for z in (rails(0, 2), 0b1111):  # fixed points of M(swap)
        res.checked += 1
        e = embed_circuit_config(r, m, z)
        if iterate(r.graph, e, 1) != e:
            res.fail(f"embedded fixed point {z} moved")
    res.notes["swap_depth"] = d

    for n in (1, 2):
        c = constant_ones(n)
        mc = cc.monotonize(c)
        rc = circuit_to_mban(mc)
        for z in range(1 << 2 * n):
            res.checked += 1
            orb = orbit(rc.graph, embed_circuit_config(rc, mc, z))
            if orb.period != 1:
                res.fail(f"constant-ones n={n}: embedded state {z} has period {orb.period}")

    for bad in tf_stabilizes(r.graph, r.metadata["s"], rng, trials):
        res.fail(bad)
    res.checked += trials
    return res


# -- brute-force oracles for the NP reductions ---------------------------------------------


def has_clique(n: int, edges, k: int) -> bool:
    es = {frozenset(e) for e in edges}
    return any(
        all(frozenset(p) in es for p in itertools.combinations(s, 2))
        for s in itertools.combinations(range(n), k)
    )


def has_vertex_cover(n: int, edges, k: int) -> bool:
    return any(
        all(u in s or v in s for u, v in edges)
        for size in range(k + 1)
        for s in map(set, itertools.combinations(range(n), size))
    )


# -- DCTP-One ----------------------------------------------------------------------------


def random_dctp_instance(rng: random.Random, n: int, max_gates: int = 6) -> tuple[cc.Circuit, int, int] | None:
    """A random layered monotone self-map accepted by the DCTP-One reduction, or None."""
    c = cc.random_circuit(n, rng.randint(n, max_gates), rng, ops=(cc.AND, cc.OR))
    c = cc.layerize(cc.prune(c)[0]).circuit
    if any(not c.is_gate(o) for o in c.outputs):
        return None
    x, i = rng.randrange(1 << n), rng.randrange(n)
    try:
        reduce_dctp_one(c, x, i)
    except ReductionError:
        return None
    return c, x, i


def dctp_one(seed: int = 0, count: int = 100, max_inputs: int = 3) -> SuiteResult:
    """``check_dct_one(G', x')`` agrees with the iterated-circuit verdict."""
    res = SuiteResult("dctp-one")
    rng = random.Random(seed)
    positives = 0
    while res.checked < count:
        inst = random_dctp_instance(rng, rng.randint(1, max_inputs))
        if inst is None:
            continue
        c, x, i = inst
        r = reduce_dctp_one(c, x, i)
        want = cc.iter_cvp(c, x, i)
        positives += want
        res.checked += 1
        if check_dct_one(r.graph, r.seed_config) != want:
            res.fail(f"x={x} i={i} expected {want}:\n{cc.format_circuit(c)}")
    res.notes["positive"] = positives
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "characterization": characterization,
    "dual": dual_contract,
    "rails": rails_contract,
    "counter": counter_cycles,
    "monotone": monotone_cycles,
    "compile": compiled_cycles,
    "dctp-one": dctp_one,
}
