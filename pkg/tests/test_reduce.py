from __future__ import annotations

import itertools
import random

import pytest

from mban import circuit as cc
from mban.circuit import AND, OR, CircuitBuilder, parse_circuit
from mban.dct import check_dct_one
from mban.dynamics import iterate, majority, orbit, step
from mban.errors import ReductionError
from mban.graph import DiGraph, format_graph, validate_mban
from mban.patterns import find_leader, find_small_self_sufficient, major_mask
from mban.reduce import (
    circuit_to_mban,
    clique_certificate,
    degree_histogram,
    embed_circuit_config,
    full_reduction,
    gate_gadget,
    leader_certificate,
    parse_labels,
    rails,
    reduce_clique_to_ss,
    reduce_dctp_one,
    reduce_vc_to_leader,
)
from mban.graph import subset_mask
from mban.verify import SWAP, constant_ones, dctp_one, has_clique, has_vertex_cover, tf_stabilizes

K4_EDGES = list(itertools.combinations(range(4), 2))
TREES4 = [
    es for es in itertools.combinations(K4_EDGES, 3)
    if len({v for e in es for v in e}) == 4 and not any(set(es) == set(itertools.combinations(t, 2)) for t in itertools.combinations(range(4), 3))
]
MATCHINGS4 = [es for k in range(3) for es in itertools.combinations(K4_EDGES, k) if len({v for e in es for v in e}) == 2 * k]
OR_AND = "inputs 2\ngate a OR i0 i1\ngate b AND i0 i1\noutputs a b\n"


def _gadget_state(values, nbrs):
    return sum(v << u for u, v in zip(nbrs, values))


@pytest.mark.parametrize("kind,const", [(AND, 0), (OR, 1)])
def test_gate_gadget_truth_table(kind, const):
    nbrs = gate_gadget(kind, 0, 1, 2)
    assert nbrs == (0, 1, 2)
    for a, b in itertools.product((0, 1), repeat=2):
        want = a & b if kind == AND else a | b
        assert majority(_gadget_state((a, b, const), nbrs), 3) == want
        flipped = a | b if kind == AND else a & b
        assert majority(_gadget_state((a, b, 1 - const), nbrs), 3) == flipped


def test_gate_gadget_errors():
    with pytest.raises(ValueError):
        gate_gadget("NOT", 0, 1, 2)
    with pytest.raises(ValueError):
        gate_gadget(AND, 0, 0, 2)


def test_trees_and_matchings_counts():
    assert len(TREES4) == 16
    assert len(MATCHINGS4) == 10


# -- DCTP-One -------------------------------------------------------------------------


def test_dctp_structure():
    c = parse_circuit(OR_AND)
    r = reduce_dctp_one(c, 0b01, 0)
    vc = c.n_nodes
    assert r.graph.n == 2 * vc + 3
    assert majority(r.seed_config, r.graph.n) == 1
    assert validate_mban(r.graph).ok
    p_block = [v for v, t in enumerate(r.labels) if t == "P"]
    assert len(p_block) == vc + 1
    for v, d in enumerate(r.graph.indegrees):
        assert d == (vc + 1 if v in p_block else 3)
    assert degree_histogram(r.graph) == {3: 6, 5: 5}
    # x' holds x on inputs, 0 on gates and b0, 1 on b1 and P
    seed = r.seed_config
    assert seed & 0b11 == 0b01
    assert (seed >> 2) & 0b11 == 0
    assert not (seed >> r.metadata["b0"]) & 1
    assert (seed >> r.metadata["b1"]) & 1
    assert all((seed >> v) & 1 for v in p_block)


def test_dctp_dummy_pads_odd_node_count():
    c = parse_circuit("inputs 1\ngate a BUF i0\ngate b BUF a\noutputs b\n")
    r = reduce_dctp_one(c, 1, 0)
    assert r.metadata["dummy"] and r.graph.n == 2 * 4 + 3
    assert validate_mban(r.graph).ok


@pytest.mark.parametrize("x,i,positive", [(0b01, 0, True), (0b11, 1, True), (0b00, 0, False), (0b01, 1, False), (0b10, 1, False)])
def test_dctp_tiny_instances(x, i, positive):
    c = parse_circuit(OR_AND)
    assert cc.iter_cvp(c, x, i) == positive
    r = reduce_dctp_one(c, x, i)
    assert r.metadata["expected_dct_one"] == positive
    assert check_dct_one(r.graph, r.seed_config) == positive


def test_dctp_random_agreement():
    res = dctp_one(seed=7, count=80)
    assert res.passed, res.failures
    assert 0 < res.notes["positive"] < res.checked


@pytest.mark.parametrize(
    "text,x,i",
    [
        ("inputs 1\ngate a NOT i0\noutputs a\n", 0, 0),
        ("inputs 2\ngate a OR i0 i1\noutputs a\n", 0, 0),
        ("inputs 2\ngate a OR i0 i1\ngate b BUF a\noutputs a b\n", 0, 0),
        ("inputs 2\ngate a BUF i0\ngate b BUF i1\noutputs a b\n", 0, 0),
        ("inputs 2\ngate a OR i0 i1\noutputs a i0\n", 0, 0),
        (OR_AND, 0, 2),
        (OR_AND, 4, 0),
    ],
)
def test_dctp_rejections(text, x, i):
    with pytest.raises(ReductionError):
        reduce_dctp_one(parse_circuit(text), x, i)


# -- half-clique -> self-sufficient ------------------------------------------------------


def test_clique_reduction_histogram():
    n = 4
    for edges in MATCHINGS4:
        r = reduce_clique_to_ss(n, edges)
        assert r.graph.n == 5 * n + 1
        assert validate_mban(r.graph).ok
        assert degree_histogram(r.graph) == {3 * n - 3: n, 4 * n - 1: 2 * n - 1, 5 * n - 1: 1, 5 * n + 1: 2 * n + 1}
        assert r.labels.count("x") == 1 and r.labels.count("X") == 2 * n - 1


def test_clique_reduction_larger_histogram():
    n = 6
    edges = [(0, 1), (1, 2), (0, 2), (3, 4)]
    r = reduce_clique_to_ss(n, edges)
    assert degree_histogram(r.graph) == {3 * n - 3: n, 4 * n - 1: 2 * n - 1, 5 * n - 1: 1, 5 * n + 1: 2 * n + 1}
    cert = clique_certificate(n, (0, 1, 2))
    s = subset_mask(cert)
    assert len(cert) == (r.graph.n - 1) // 2
    assert s & ~major_mask(r.graph, s) == 0


def test_clique_forward_certificate():
    r = reduce_clique_to_ss(4, [(0, 1)])
    cert = clique_certificate(4, (0, 1))
    s = subset_mask(cert)
    assert len(cert) == (r.graph.n - 1) // 2
    assert s & ~major_mask(r.graph, s) == 0


@pytest.mark.parametrize("edges", [[], [(0, 1)], [(0, 1), (2, 3)]])
def test_clique_equivalence_small(edges):
    r = reduce_clique_to_ss(4, edges)
    assert (find_small_self_sufficient(r.graph) is not None) == has_clique(4, edges, 2)


def test_clique_rejections():
    with pytest.raises(ReductionError):
        reduce_clique_to_ss(5, [])
    with pytest.raises(ReductionError):
        reduce_clique_to_ss(4, [(0, 1), (0, 2)])


# -- vertex cover -> leader -----------------------------------------------------------


def test_vc_sizes_and_forward_certificate():
    for edges in TREES4 + [((0, 1), (1, 2), (2, 3), (3, 0))]:
        r = reduce_vc_to_leader(4, edges)
        n, m = 4, len(edges)
        assert r.graph.n == n + 4 * m + 1
        assert validate_mban(r.graph).ok
        assert r.labels.count("Z") == 3 * n // 2
        assert r.labels.count("Z'") == n // 2 + 1
        assert max(r.graph.indegrees) == r.graph.n


def _covers(n, edges, k):
    return [c for size in range(k + 1) for c in itertools.combinations(range(n), size) if all(u in c or v in c for u, v in edges)]


def test_vc_forward_certificate_parts():
    # cover, X and the r-vertices reach X, Z' and every vertex whose
    # neighbours all lie in the cover; a cover vertex with a neighbour
    # outside the cover is not reached, so the set falls short of a leader
    for edges in TREES4:
        r = reduce_vc_to_leader(4, edges)
        nbrs = [{v for e in edges if u in e for v in e if v != u} for u in range(4)]
        for cover in _covers(4, edges, 2):
            cert = leader_certificate(4, edges, cover)
            assert 2 * len(cert) < r.graph.n
            m = major_mask(r.graph, subset_mask(cert))
            for v, tag in enumerate(r.labels):
                if tag in ("X", "Z'"):
                    assert (m >> v) & 1
                elif tag.startswith("vertex:"):
                    assert (m >> v) & 1 == int(nbrs[v] <= set(cover))
            assert 2 * m.bit_count() < r.graph.n


def test_vc_tree_leader_ignores_cover():
    for edges in TREES4:
        r = reduce_vc_to_leader(4, edges)
        cert = find_leader(r.graph)
        assert cert is not None
        tags = [r.labels[v] for v in cert.s]
        assert tags[:4] == [f"vertex:{v}" for v in range(4)]
        assert all(t in ("X", "Z") for t in tags[4:])


def test_vc_equivalence_on_path():
    edges = [(0, 1), (1, 2), (2, 3)]
    r = reduce_vc_to_leader(4, edges)
    assert r.graph.n == 17
    assert has_vertex_cover(4, edges, 2)
    assert find_leader(r.graph) is not None


def test_vc_cycle_counterexample():
    # C4 has a 2-vertex cover, yet the construction has no leader
    edges = [(0, 1), (1, 2), (2, 3), (3, 0)]
    r = reduce_vc_to_leader(4, edges)
    assert r.graph.n == 21
    assert has_vertex_cover(4, edges, 2)
    assert find_leader(r.graph) is None


def test_vc_rejections():
    with pytest.raises(ReductionError):
        reduce_vc_to_leader(3, [(0, 1), (1, 2)])
    with pytest.raises(ReductionError):
        reduce_vc_to_leader(4, [(0, 1), (2, 3)])


# -- B -------------------------------------------------------------------------------


def test_b_structure():
    m = cc.monotonize(SWAP)
    r = circuit_to_mban(m)
    s = r.metadata["s"]
    assert r.graph.n == len(m.circuit.gates) + 10
    assert validate_mban(r.graph).ok
    assert set(r.graph.indegrees) <= {1, 3, 5, 7}
    assert r.labels[s : s + 5] == ("T",) * 5 and r.labels[s + 5 :] == ("F",) * 5
    assert set(r.graph.in_neighbors[s + 4]) == {0, 1} | set(range(s, s + 5))
    for k, g in enumerate(m.circuit.gates):
        nbrs = set(r.graph.in_neighbors[k])
        if g.op == OR and len(set(g.args)) == 2:
            assert s in nbrs
        if g.op == AND and len(set(g.args)) == 2:
            assert s + 5 in nbrs


def test_tf_stabilization(rng):
    r = circuit_to_mban(cc.monotonize(SWAP))
    assert tf_stabilizes(r.graph, r.metadata["s"], rng, 100) == []


def test_b_simulates_one_application(rng):
    for _ in range(10):
        c = cc.random_circuit(2, rng.randint(2, 6), rng, ops=(AND, OR))
        c = cc.layerize(c, min_depth=2).circuit
        if any(not c.is_gate(o) for o in c.outputs):
            continue
        d = cc.depth(c)
        r = circuit_to_mban(c)
        for x in range(4):
            y = iterate(r.graph, embed_circuit_config(r, c, x), d)
            outs = sum(((y >> (o - c.n_inputs)) & 1) << j for j, o in enumerate(c.outputs))
            assert outs == cc.evaluate(c, cc.evaluate(c, x))


def test_b_embedded_fixed_point():
    m = cc.monotonize(SWAP)
    r = circuit_to_mban(m)
    for z in (rails(0, 2), 0b1111):
        e = embed_circuit_config(r, m, z)
        assert step(r.graph, e) == e


def test_b_period_stretches_by_depth():
    m = cc.monotonize(SWAP)
    r = circuit_to_mban(m)
    for x in (1, 2):
        o = orbit(r.graph, embed_circuit_config(r, m, rails(x, 2)))
        assert o.transient == () and o.period == 2 * m.depth


def test_b_global_attractor():
    for n in (1, 2):
        m = cc.monotonize(constant_ones(n))
        r = circuit_to_mban(m)
        for z in range(1 << 2 * n):
            assert orbit(r.graph, embed_circuit_config(r, m, z)).period == 1


def test_b_embed_force_tests_variant():
    m = cc.monotonize(SWAP)
    r = circuit_to_mban(m)
    e = embed_circuit_config(r, m, rails(1, 2), force_tests=True)
    for k in m.gates_with_role(cc.ROLE_RULE3):
        assert (e >> k) & 1
    with pytest.raises(ReductionError):
        embed_circuit_config(r, SWAP, 0)


def test_b_rejections():
    with pytest.raises(ReductionError):
        circuit_to_mban(cc.negation_circuit(2))
    b = CircuitBuilder(2)
    with pytest.raises(ReductionError):
        circuit_to_mban(b.build([b.add(AND, 0, 1)]))


# -- full pipeline ------------------------------------------------------------------


def test_full_reduction_structure():
    r = full_reduction(SWAP, 0b00, 0)
    meta = r.metadata
    n = 2
    assert meta["wrapped_bits"] == 2 * n and meta["monotone_bits"] == 4 * n
    assert r.graph.n == meta["monotone_gates"] + 10
    assert max(r.graph.indegrees) == 7
    assert set(r.graph.indegrees) <= {1, 3, 5, 7}
    assert validate_mban(r.graph).ok


@pytest.mark.parametrize("text,x,i", [(None, 0b00, 0), ("inputs 1\ngate a BUF i0\noutputs a\n", 0, 0)])
def test_full_reduction_negative_period(text, x, i):
    c = SWAP if text is None else parse_circuit(text)
    r = full_reduction(c, x, i)
    assert not r.metadata["expected_positive"]
    o = orbit(r.graph, r.seed_config)
    assert o.period == r.metadata["depth"] * 2 ** c.n_inputs


def test_full_reduction_positive_fixed_point():
    r = full_reduction(SWAP, 0b01, 1)
    assert r.metadata["expected_positive"]
    assert orbit(r.graph, r.seed_config).period == 1


def test_determinism():
    a = full_reduction(SWAP, 0b00, 0)
    b = full_reduction(SWAP, 0b00, 0)
    assert format_graph(a.graph) == format_graph(b.graph) and a.labels == b.labels
    assert format_graph(reduce_vc_to_leader(4, TREES4[0]).graph) == format_graph(reduce_vc_to_leader(4, TREES4[0]).graph)


def test_labels_roundtrip():
    r = reduce_clique_to_ss(4, [(0, 1)])
    assert parse_labels(r.format_labels()) == r.labels
    with pytest.raises(Exception):
        parse_labels("1: x\n")


def test_every_output_is_valid(rng):
    outs = [reduce_clique_to_ss(4, e) for e in MATCHINGS4]
    outs += [reduce_vc_to_leader(4, e) for e in TREES4]
    outs += [circuit_to_mban(cc.monotonize(random_self(rng))) for _ in range(5)]
    for r in outs:
        assert validate_mban(r.graph).ok
        assert len(r.labels) == r.graph.n


def random_self(rng: random.Random):
    from mban.verify import random_self_map

    return random_self_map(rng, rng.randint(1, 3))
