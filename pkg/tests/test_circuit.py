from __future__ import annotations

import math
import random

import numpy as np
import pytest

from mban import circuit as cc
from mban.circuit import (
    AND,
    BUF,
    NOT,
    OR,
    Circuit,
    CircuitBuilder,
    Gate,
    counter_value,
    dual,
    evaluate,
    format_circuit,
    layerize,
    monotonize,
    normalize,
    parse_circuit,
    truth_table,
    with_counter,
    wrap_counter,
)
from mban.dynamics import config
from mban.errors import GraphFormatError, ReductionError
from mban.reduce import rails
from mban.verify import (
    cycle_periods,
    has_global_attractor,
    only_uniform_cycles,
    counter_instance_error,
    rails_violations,
    random_self_map,
)

FIG = "inputs 3\ngate n0 NOT i0\ngate n1 NOT i2\ngate o0 AND n0 i1\ngate o1 OR i0 i2\ngate o2 OR i1 n1\noutputs o0 o1 o2\n"


def fig() -> Circuit:
    return parse_circuit(FIG)


def test_eval_examples():
    b = CircuitBuilder(2)
    c = b.build([b.add(AND, 0, 1)])
    assert evaluate(c, 0b11) == 1
    assert evaluate(c, 0b01) == 0
    assert evaluate(fig(), config("010")) == config("101")


def test_truth_table_matches_evaluate(rng):
    for _ in range(30):
        c = cc.random_circuit(rng.randint(1, 6), rng.randint(1, 12), rng)
        tt = truth_table(c)
        assert all(int(tt[x]) == evaluate(c, x) for x in range(1 << c.n_inputs))


def test_iterate_periods():
    assert cc.circuit_orbit(cc.buffer_circuit(3), 5).period == 1
    assert cc.circuit_orbit(cc.rotation_circuit(3), config("100")).period == 3
    assert cc.iterate_circuit(cc.rotation_circuit(3), config("100"), 1) == config("010")
    for x in range(8):
        assert cc.circuit_orbit(cc.negation_circuit(3), x).period == 2


def test_iterate_requires_self_map():
    b = CircuitBuilder(2)
    c = b.build([b.add(AND, 0, 1)])
    with pytest.raises(ValueError):
        cc.iterate_circuit(c, 0, 1)


def test_iter_cvp():
    rot = cc.rotation_circuit(3)
    assert cc.iter_cvp(rot, config("100"), 2)
    assert not cc.iter_cvp(rot, 0, 0)
    # the seed itself does not count, only iterates
    assert not cc.iter_cvp(cc.buffer_circuit(2), config("10"), 1)


def test_circuit_rejects_bad_structure():
    with pytest.raises(ValueError):
        Circuit(2, (Gate(AND, (0, 2), "g0"),), (2,))
    with pytest.raises(ValueError):
        Circuit(1, (Gate(NOT, (0, 0), "g0"),), (1,))
    with pytest.raises(ValueError):
        Circuit(1, (Gate("XOR", (0,), "g0"),), (1,))
    with pytest.raises(ValueError):
        Circuit(1, (Gate(BUF, (0,), "i3"),), (1,))
    with pytest.raises(ValueError):
        Circuit(1, (Gate(BUF, (0,), "a"), Gate(BUF, (1,), "a")), (1,))
    with pytest.raises(ValueError):
        Circuit(1, (), (4,))


def test_io_example_and_roundtrip(rng):
    c = parse_circuit("inputs 2\ngate g0 AND i0 i1\noutputs g0 g0")
    assert c.n_inputs == 2 and c.n_outputs == 2 and c.is_self_map
    assert parse_circuit(format_circuit(c)) == c
    for _ in range(30):
        c = cc.random_circuit(rng.randint(1, 5), rng.randint(0, 10), rng)
        assert parse_circuit(format_circuit(c)) == c
        assert format_circuit(parse_circuit(format_circuit(c))) == format_circuit(c)


@pytest.mark.parametrize(
    "text,line",
    [
        ("inputs 2\ngate g0 XOR i0 i1\noutputs g0\n", 2),
        ("gate g0 AND i0 i1\n", 1),
        ("inputs 2\ngate g0 AND i0 i9\noutputs g0\n", 2),
        ("inputs 2\ngate g0 AND i0 g1\noutputs g0\n", 2),
        ("inputs 2\ngate g0 NOT i0 i1\noutputs g0\n", 2),
        ("inputs 1\ngate g0 BUF i0\ngate g0 BUF i0\noutputs g0\n", 3),
        ("inputs 1\noutputs zz\n", 2),
        ("inputs 1\noutputs i0\ngate g0 BUF i0\n", 3),
    ],
)
def test_io_errors(text, line):
    with pytest.raises(GraphFormatError) as info:
        parse_circuit(text)
    assert info.value.line == line


def test_io_missing_outputs():
    with pytest.raises(GraphFormatError):
        parse_circuit("inputs 1\ngate g0 BUF i0\n")


def test_normalize_double_negation():
    b = CircuitBuilder(1)
    c = b.build([b.add(NOT, b.add(NOT, 0))])
    n = normalize(c)
    assert len(c.gates) - len(n.gates) == 2
    assert np.array_equal(truth_table(n), truth_table(c))


def test_normalize_idempotent_and_equivalent(rng):
    for _ in range(50):
        c = cc.random_circuit(4, rng.randint(1, 15), rng, ops=(AND, OR, NOT, BUF))
        n = normalize(c)
        assert cc.is_normal(n)
        assert normalize(n) == n
        assert np.array_equal(truth_table(n), truth_table(c))


def test_normalize_keeps_normal_circuit():
    assert normalize(fig()) == fig()


def test_dual_examples():
    b = CircuitBuilder(2)
    c = b.build([b.add(AND, 0, 1)])
    d = dual(c)
    assert d.gates[0].op == OR
    # dual(AND)(not(1,0)) = OR(0,1) = 1 = not AND(1,0)
    assert evaluate(d, config("01")) == 1 == 1 - evaluate(c, config("10"))
    assert dual(dual(fig())) == fig()


def test_dual_contract(rng):
    for _ in range(50):
        n = rng.randint(1, 8)
        c = cc.random_circuit(n, rng.randint(1, 20), rng, n_outputs=rng.randint(1, 4), ops=(AND, OR, NOT, BUF))
        tt, td = truth_table(c), truth_table(dual(c))
        xs = np.arange(1 << n)
        assert np.array_equal(td[xs ^ ((1 << n) - 1)], tt ^ ((1 << c.n_outputs) - 1))
        assert [g.op for g in dual(c).gates if g.op in (NOT, BUF)] == [g.op for g in c.gates if g.op in (NOT, BUF)]


def test_layerize_examples(rng):
    lc = layerize(cc.rotation_circuit(3))
    assert lc.circuit == cc.rotation_circuit(3) and lc.depth == 1
    b = CircuitBuilder(2)
    a = b.add(AND, 0, 1)
    o = b.add(OR, b.add(NOT, a), 0)  # input 0 is a short path
    c = b.build([o, o])
    lc = layerize(c)
    assert cc.is_layered(lc.circuit) and lc.depth == 3
    assert any(g.op == BUF for g in lc.circuit.gates)
    assert np.array_equal(truth_table(lc.circuit), truth_table(c))
    for _ in range(30):
        c = cc.random_circuit(rng.randint(1, 10), rng.randint(1, 25), rng)
        lc = layerize(c)
        assert cc.is_layered(lc.circuit)
        assert all(cc.levels(lc.circuit)[o] == lc.depth for o in lc.circuit.outputs)
        assert np.array_equal(truth_table(lc.circuit), truth_table(c))


def test_layerize_min_depth_and_names():
    b = CircuitBuilder(1)
    c = b.build([b.add(BUF, 0, name="pad0")])
    lc = layerize(c, min_depth=3)
    assert lc.depth == 3
    names = [g.name for g in lc.circuit.gates]
    assert len(set(names)) == len(names) and "pad0" in names


def test_monotonize_figure_example():
    m = monotonize(fig()).circuit
    assert evaluate(m, config("010101")) == config("101010")
    assert evaluate(m, config("111000")) == config("111111")
    assert evaluate(m, config("000001")) == 0


def test_monotonize_rules(rng):
    for _ in range(20):
        c = random_self_map(rng, rng.randint(1, 4))
        n = c.n_inputs
        m = monotonize(c)
        assert m.circuit.is_monotone and m.circuit.is_self_map and m.circuit.n_inputs == 2 * n
        tt = truth_table(m.circuit)
        mask = (1 << n) - 1
        full = (1 << 2 * n) - 1
        for z in range(1 << 2 * n):
            left, right = z & mask, z >> n
            if left == mask:
                assert tt[z] == full  # rule 1
            elif left & right:
                assert tt[z] == full  # rule 2
            elif (left | right) != mask:
                assert tt[z] == 0  # rule 3
            else:
                assert tt[z] == rails(evaluate(c, left), n)


def test_monotonize_layering_and_coprime(rng):
    for _ in range(30):
        c = random_self_map(rng, rng.randint(1, 6))
        m = monotonize(c)
        assert cc.rail_depth_ok(m)
        meta = m.meta
        assert meta["depth"] == m.depth == meta["rail_depth"] + meta["padding_layers"] + 3
        assert math.gcd(meta["depth"], meta["test_depth"]) == 1
        # minimal padding
        for k in range(meta["padding_layers"]):
            d = meta["rail_depth"] + k + 3
            assert d < meta["test_depth"] or math.gcd(d, meta["test_depth"]) != 1
        assert len(m.circuit.gates) % 2 == 1
        assert all(cc.levels(m.circuit)[o] == m.depth for o in m.circuit.outputs)
        for role in (cc.ROLE_RULE1, cc.ROLE_RULE2, cc.ROLE_RULE3):
            assert m.gates_with_role(role)


def test_monotonize_rejects_non_self_map():
    b = CircuitBuilder(2)
    with pytest.raises(ValueError):
        monotonize(b.build([b.add(AND, 0, 1)]))


def test_rails_with_fixed_ones(rng):
    for _ in range(20):
        c = random_self_map(rng, rng.randint(1, 3))
        assert rails_violations(c, monotonize(c).circuit) == []


def test_monotone_cycles_need_fixed_ones():
    # NOT on one bit has the 2-cycle 0 <-> 1, but rule 1 sends the on-rail state "10" to 11
    c = cc.negation_circuit(1)
    m = monotonize(c).circuit
    assert cycle_periods(c) == [2]
    assert cycle_periods(m) == []
    assert evaluate(m, config("10")) == config("11")
    assert only_uniform_cycles(m) and not has_global_attractor(c)


def test_monotone_cycles_with_fixed_ones(rng):
    for _ in range(20):
        c = random_self_map(rng, rng.randint(1, 3), fix_ones=True)
        m = monotonize(c).circuit
        assert cycle_periods(c) == cycle_periods(m)
        assert has_global_attractor(c) == only_uniform_cycles(m)


def test_counter_packing():
    n = 3
    for y in range(8):
        for k in range(8):
            z = with_counter(y, k, n)
            assert z & 7 == y and counter_value(z, n) == k
    # counter literal "01" is value 1
    assert counter_value(config("0001"), 2) == 1


def _contract_violations(c: Circuit, x: int, i: int) -> list[str]:
    n = c.n_inputs
    w = wrap_counter(c, x, i)
    tt = truth_table(w)
    full = (1 << 2 * n) - 1
    mask = (1 << n) - 1
    cx = evaluate(c, x)
    bad = []
    if tt[full] != full:
        bad.append("all-ones not fixed")
    for z in range(full):
        y, k = z & mask, counter_value(z, n)
        out = int(tt[z])
        written = cx if k == 0 else evaluate(c, y)
        if (written >> i) & 1:
            if out != full:
                bad.append(f"{z}: flag set but output {out}")
            continue
        if counter_value(out, n) != (k + 1) % (1 << n):
            bad.append(f"{z}: counter {counter_value(out, n)}")
        if out & mask != written:
            bad.append(f"{z}: y-output {out & mask}")
    return bad


def test_wrap_counter_contract(rng):
    for _ in range(40):
        n = rng.randint(1, 3)
        c = cc.random_circuit(n, rng.randint(1, 8), rng)
        x, i = rng.randrange(1 << n), rng.randrange(n)
        assert _contract_violations(c, x, i) == []


def test_wrap_counter_flag_literal_when_counter_nonzero(rng):
    # for counter != 0 the flag is exactly C(y)_i
    c = cc.rotation_circuit(3)
    w = wrap_counter(c, config("100"), 0)
    full = (1 << 6) - 1
    for z in range(1 << 6):
        if counter_value(z, 3) and (evaluate(c, z & 7) & 1):
            assert evaluate(w, z) == full


def test_wrap_counter_example():
    swap = cc.buffer_circuit(2, [1, 0])
    w = wrap_counter(swap, config("10"), 1)
    z = config("0101")  # y = 01, counter = 01
    assert evaluate(w, z) == config("1010")
    assert evaluate(w, config("1111")) == config("1111")
    # with i = 0 the same input triggers
    assert evaluate(wrap_counter(swap, config("10"), 0), z) == config("1111")


def test_wrap_counter_zero_counter_writes_cx():
    swap = cc.buffer_circuit(2, [1, 0])
    w = wrap_counter(swap, config("10"), 0)  # C(x) = 01 leaves bit 0 clear
    for y in range(4):
        assert evaluate(w, with_counter(y, 0, 2)) == with_counter(config("01"), 1, 2)
    # with index 1 the written C(x) triggers the flag
    w1 = wrap_counter(swap, config("10"), 1)
    assert evaluate(w1, 0) == config("1111")


def test_wrap_counter_errors():
    with pytest.raises(ReductionError):
        wrap_counter(cc.buffer_circuit(2), 0, 2)
    with pytest.raises(ReductionError):
        wrap_counter(cc.buffer_circuit(2), 4, 0)


def test_counter_instance_errors(rng):
    from mban.verify import find_instances

    for n in (1, 2, 3):
        for positive in (True, False):
            for c, x, i in find_instances(rng, n, positive, 3):
                assert counter_instance_error(c, x, i) is None


def test_prune_and_live_nodes():
    b = CircuitBuilder(2)
    dead = b.add(AND, 0, 1)
    live = b.add(OR, 0, 1)
    c = b.build([live, live])
    p, _ = cc.prune(c)
    assert len(p.gates) == 1 and p.gates[0].op == OR
    assert dead not in cc.live_nodes(c)


def test_random_circuit_deterministic():
    a = cc.random_circuit(4, 10, random.Random(3))
    b = cc.random_circuit(4, 10, random.Random(3))
    assert a == b
