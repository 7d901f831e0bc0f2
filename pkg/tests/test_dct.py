from __future__ import annotations

import random

import numpy as np
import pytest

from mban.dct import (
    LIMIT_CYCLE,
    WRONG_FIXED_POINT,
    _scan_range,
    check_dct_all,
    check_dct_one,
    classify_failure,
)
from mban.dynamics import config, format_config, limit_cycles, majority, orbit, successor_table
from mban.errors import BudgetExceededError, InvalidNetworkError, TieError
from mban.graph import DiGraph, clique_with_loops, rotation
from mban.verify import random_valid_mban


def test_dct_one_examples(k3, rot3):
    assert check_dct_one(k3, config("110"))
    assert not check_dct_one(rot3, config("100"))
    for g in (k3, rot3, clique_with_loops(5)):
        assert check_dct_one(g, (1 << g.n) - 1)


def test_dct_one_even_n():
    with pytest.raises(TieError):
        check_dct_one(rotation(4), 1)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_cliques_solve(n):
    v = check_dct_all(clique_with_loops(n))
    assert v.solves and v.counterexample is None and v.failure_kind is None


def test_rotation_counterexample(rot3):
    v = check_dct_all(rot3)
    assert not v.solves
    assert format_config(v.counterexample, 3) == "100"
    assert v.failure_kind == LIMIT_CYCLE
    assert v.configurations_checked == 2
    assert v.format()["counterexample"] == "100"


def test_single_vertex_loop():
    assert check_dct_all(DiGraph(((0,),))).solves


def test_wrong_fixed_point_kind():
    # two disjoint loops plus a copy vertex: 110 is a wrong... use 3 loops
    g = DiGraph(((0,), (1,), (2,)))
    v = check_dct_all(g)
    assert not v.solves
    assert v.failure_kind == WRONG_FIXED_POINT
    assert format_config(v.counterexample, 3) == "100"


def test_invalid_network_rejected():
    with pytest.raises(InvalidNetworkError):
        check_dct_all(DiGraph(((0, 1), (0,), (1,))))


def test_budget():
    with pytest.raises(BudgetExceededError):
        check_dct_all(clique_with_loops(7), max_n=5)


def test_pruned_equals_unpruned(rng):
    for _ in range(200):
        g = random_valid_mban(rng.randrange(1, 11, 2), rng)
        a = check_dct_all(g)
        b = check_dct_all(g, prune_complements=False)
        assert a.solves == b.solves
        assert a.counterexample == b.counterexample


def test_counterexample_replays(rng):
    for _ in range(100):
        g = random_valid_mban(rng.randrange(3, 10, 2), rng)
        v = check_dct_all(g)
        if v.solves:
            continue
        x = v.counterexample
        target = (1 << g.n) - 1 if majority(x, g.n) else 0
        assert target not in orbit(g, x).states()
        kind, flip = classify_failure(g, x)
        assert (kind, flip) == (v.failure_kind, v.majority_flip)


def test_solvers_have_only_uniform_cycles(rng):
    found = 0
    for _ in range(400):
        g = random_valid_mban(rng.randrange(3, 13, 2), rng)
        if g.n > 12 or not check_dct_all(g).solves:
            continue
        found += 1
        full = (1 << g.n) - 1
        assert limit_cycles(successor_table(g), g.n) == [(0,), (full,)]
        for x in random.Random(found).sample(range(1 << g.n), min(64, 1 << g.n)):
            m = majority(x, g.n)
            assert all(majority(y, g.n) == m for y in orbit(g, x).states())
    assert found > 0


def test_scan_range_matches_table(rng):
    for _ in range(40):
        g = random_valid_mban(rng.randrange(3, 10, 2), rng)
        v = check_dct_all(g)
        cx, checked = _scan_range(g, 0, 1 << (g.n - 1))
        assert cx == v.counterexample
        assert checked == v.configurations_checked


def test_parallel_scan_is_deterministic(rng):
    from mban.dct import _parallel_scan

    for _ in range(5):
        g = random_valid_mban(9, rng)
        v = check_dct_all(g)
        assert _parallel_scan(g, 1 << 8, 3)[0] == v.counterexample


def test_verdict_format_keys(k3):
    assert set(check_dct_all(k3).format()) == {"solves", "configurations_checked"}
    assert np.int64  # numpy import used for dtype checks elsewhere
