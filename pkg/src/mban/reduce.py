"""Gadget constructions turning circuits and undirected graphs into MBANs."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .circuit import (
    AND,
    OR,
    Circuit,
    LayeredCircuit,
    evaluate,
    is_layered,
    iter_cvp,
    monotonize,
    node_values,
    normalize,
    with_counter,
    wrap_counter,
    ROLE_RULE1,
    ROLE_RULE2,
    ROLE_RULE3,
)
from .dynamics import format_config
from .errors import GraphFormatError, ReductionError
from .graph import DiGraph, undirected_neighbors


@dataclass(frozen=True)
class ReductionOutput:
    graph: DiGraph
    labels: tuple[str, ...]
    seed_config: int | None = None
    metadata: dict = field(default_factory=dict, compare=False)

    def format_labels(self) -> str:
        return "".join(f"{v}: {tag}\n" for v, tag in enumerate(self.labels))

    def format_seed(self) -> str | None:
        if self.seed_config is None:
            return None
        return format_config(self.seed_config, self.graph.n)


def parse_labels(text: str) -> tuple[str, ...]:
    labels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        head, sep, tail = raw.partition(":")
        if not sep or not head.strip().isdigit() or int(head) != len(labels):
            raise GraphFormatError(f"expected '<v>: <tag>' in order, got {raw!r}", lineno)
        labels.append(tail.strip())
    return tuple(labels)


def degree_histogram(g: DiGraph) -> dict[int, int]:
    return dict(sorted(Counter(g.indegrees).items()))


def _finish(lists: Sequence[Sequence[int]], labels: Sequence[str], seed=None, **meta) -> ReductionOutput:
    g = DiGraph.from_lists(lists)
    meta = {"n": g.n, "degree_histogram": degree_histogram(g), **meta}
    return ReductionOutput(g, tuple(labels), seed, meta)


def gate_gadget(kind: str, in1: int, in2: int, const_vertex: int) -> tuple[int, ...]:
    """In-neighbourhood of a majority vertex simulating ``kind`` on two inputs.

    The constant vertex must hold 0 for AND and 1 for OR; with the constant
    flipped the gadget computes the other gate.
    """
    if kind not in (AND, OR):
        raise ValueError(f"gadget kind must be AND or OR, got {kind!r}")
    nbrs = {in1, in2, const_vertex}
    if len(nbrs) != 3:
        raise ValueError("gadget needs three distinct in-neighbours")
    return tuple(sorted(nbrs))


# -- DCTP-One ----------------------------------------------------------------


def _feedback_reaches(c: Circuit, target: int) -> set[int]:
    """Nodes with a path to ``target`` when output ``j`` is wired back to input ``j``."""
    preds: list[set[int]] = [set() for _ in range(c.n_nodes)]
    for k, g in enumerate(c.gates):
        preds[c.n_inputs + k].update(g.args)
    for j, o in enumerate(c.outputs):
        preds[j].add(o)
    seen = {target}
    stack = [target]
    while stack:
        v = stack.pop()
        for u in preds[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


def reduce_dctp_one(c: Circuit, x: int, i: int) -> ReductionOutput:
    """MBAN ``G'`` and configuration ``x'`` such that ``x'`` converges to all ones
    iff some iterate ``C^t(x)``, ``t > 0``, has bit ``i`` set.

    Gates become majority gadgets with constants ``b0``/``b1``; inputs copy
    their output through ``{out_j, b0, b1}``; ``b0`` switches to 1 once output
    ``i`` fires, and a clique ``P`` holds the majority on the ones side.
    """
    stage = "dctp-one"
    if not c.is_self_map:
        raise ReductionError("circuit is not a self-map", stage)
    if not c.is_monotone:
        raise ReductionError("circuit is not monotone (contains NOT)", stage)
    if not is_layered(c):
        raise ReductionError("circuit is not layered", stage)
    if not 0 <= i < c.n_inputs:
        raise ReductionError(f"index {i} out of range", stage)
    if not 0 <= x < (1 << c.n_inputs):
        raise ReductionError(f"configuration {x} does not fit {c.n_inputs} bits", stage)
    if any(not c.is_gate(o) for o in c.outputs):
        raise ReductionError("every output must be a gate", stage)
    out_i = c.outputs[i]
    if len(_feedback_reaches(c, out_i)) != c.n_nodes:
        raise ReductionError("output i does not depend on every circuit node", stage)

    n_c = c.n_nodes
    dummy = n_c % 2 == 1
    vc = n_c + (1 if dummy else 0)
    b0, b1 = vc, vc + 1
    p_vertices = list(range(vc + 2, vc + 2 + vc + 1))
    p = p_vertices[0]
    lists: list[tuple[int, ...]] = []
    labels: list[str] = []
    for j in range(c.n_inputs):
        lists.append((c.outputs[j], b0, b1))
        labels.append(f"input:{j}")
    for g in c.gates:
        args = set(g.args)
        if g.op in (AND, OR) and len(args) == 2:
            lists.append(gate_gadget(g.op, *g.args, b0 if g.op == AND else b1))
        else:
            lists.append((g.args[0], b0, b1))
        labels.append(f"gate:{g.name}")
    if dummy:
        lists.append((out_i, b0, b1))
        labels.append("delay")
    lists.append((b0, vc - 1 if dummy else out_i, b1))
    labels.append("b0")
    lists.append((b1, b0, p))
    labels.append("b1")
    for q in p_vertices:
        lists.append(tuple(u for u in p_vertices if u != p) + (b1,) if q == p else tuple(p_vertices))
        labels.append("P")

    seed = x | sum(1 << v for v in [b1] + p_vertices)
    positive = iter_cvp(c, x, i)
    return _finish(
        lists,
        labels,
        seed,
        circuit_nodes=n_c,
        dummy=dummy,
        b0=b0,
        b1=b1,
        p=p,
        expected_dct_one=positive,
    )


# -- half-clique -> small self-sufficient subset ------------------------------


def reduce_clique_to_ss(n: int, edges: Sequence[tuple[int, int]]) -> ReductionOutput:
    """Graph on ``V ⊔ X ⊔ Y`` with a self-sufficient set below half size iff
    the undirected graph has a clique on half its vertices."""
    stage = "clique"
    if n % 2 or n < 4:
        raise ReductionError("vertex count must be even and at least 4", stage)
    nbrs = undirected_neighbors(n, edges)
    if any(len(s) > n - 3 for s in nbrs):
        raise ReductionError(f"every degree must be at most {n - 3}", stage)
    xs = list(range(n, 3 * n))
    ys = list(range(3 * n, 5 * n + 1))
    x0 = xs[0]
    lists: list[tuple[int, ...]] = []
    labels: list[str] = []
    for v in range(n):
        from_y = ys[: 2 * n - 3 - len(nbrs[v])]
        lists.append(tuple(sorted(nbrs[v])) + tuple(xs[:n]) + tuple(from_y))
        labels.append(f"vertex:{v}")
    for u in xs:
        extra = tuple(range(n)) if u == x0 else ()
        lists.append(extra + tuple(xs) + tuple(ys[: 2 * n - 1]))
        labels.append("x" if u == x0 else "X")
    for _ in ys:
        lists.append(tuple(range(5 * n + 1)))
        labels.append("Y")
    return _finish(lists, labels, None, x=x0, X=(xs[0], xs[-1]), Y=(ys[0], ys[-1]))


def clique_certificate(n: int, clique: Sequence[int]) -> tuple[int, ...]:
    """Forward witness: the clique together with all of ``X``."""
    return tuple(sorted(clique)) + tuple(range(n, 3 * n))


# -- vertex cover -> leader ---------------------------------------------------


@dataclass(frozen=True)
class LeaderLayout:
    n: int
    y: tuple[tuple[int, ...], ...]
    x: tuple[int, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]
    t: int

    @property
    def z(self) -> tuple[int, ...]:
        k = 3 * self.n // 4
        return tuple(v for pair in zip(self.left[:k], self.right[:k]) for v in pair)

    @property
    def z_prime(self) -> tuple[int, ...]:
        k = 3 * self.n // 4
        return tuple(v for pair in zip(self.left[k:], self.right[k:]) for v in pair) + (self.t,)


def _leader_layout(n: int, nbrs: list[set[int]]) -> LeaderLayout:
    nxt = n
    y = []
    for i in range(n):
        size = len(nbrs[i]) - 1
        y.append(tuple(range(nxt, nxt + size)))
        nxt += size
    n_x = sum(len(b) for b in y)
    x = tuple(range(nxt, nxt + n_x))
    nxt += n_x
    left, right = [], []
    for _ in range(n):
        left.append(nxt)
        right.append(nxt + 1)
        nxt += 2
    return LeaderLayout(n, tuple(y), x, tuple(left), tuple(right), nxt)


def _is_connected(n: int, nbrs: list[set[int]]) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        for u in nbrs[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def reduce_vc_to_leader(n: int, edges: Sequence[tuple[int, int]]) -> ReductionOutput:
    """Graph with a leader iff the undirected graph has a vertex cover of at most ``n/2`` vertices.

    ``X`` is a directed cycle whose first vertices also read the side inputs
    ``l_i, r_i``; ``Y ⊔ Z`` read every vertex.  ``Z'`` reads ``X`` and ``t``
    (``|X|`` is even, so ``t`` keeps the in-degree odd).  When ``|X| < n``
    (trees), side inputs with ``i >= |X|`` feed only ``Y ⊔ Z``.
    """
    stage = "vc"
    if n % 4 or n == 0:
        raise ReductionError("vertex count must be a positive multiple of 4", stage)
    nbrs = undirected_neighbors(n, edges)
    if any(not s for s in nbrs) or not _is_connected(n, nbrs):
        raise ReductionError("graph must be connected with no isolated vertex", stage)
    lay = _leader_layout(n, nbrs)
    total = lay.t + 1
    everything = tuple(range(total))
    lists: list[tuple[int, ...]] = [()] * total
    labels = [""] * total
    for i in range(n):
        lists[i] = tuple(sorted(nbrs[i])) + lay.y[i]
        labels[i] = f"vertex:{i}"
        for u in lay.y[i]:
            lists[u] = everything
            labels[u] = f"Y:{i}"
    m = len(lay.x)
    for k, u in enumerate(lay.x):
        prev = lay.x[k - 1]
        lists[u] = (prev, lay.left[k], lay.right[k]) if k < n else (prev,)
        labels[u] = "X"
    zp = set(lay.z_prime)
    for u in lay.left + lay.right + (lay.t,):
        if u in zp:
            lists[u] = lay.x + (lay.t,)
            labels[u] = "Z'"
        else:
            lists[u] = everything
            labels[u] = "Z"
    return _finish(lists, labels, None, x=(lay.x[0], lay.x[-1]) if m else None, t=lay.t, x_count=m)


def leader_certificate(n: int, edges: Sequence[tuple[int, int]], cover: Sequence[int]) -> tuple[int, ...]:
    """Forward witness ``S = cover ⊔ X ⊔ R`` for the leader reduction."""
    lay = _leader_layout(n, undirected_neighbors(n, edges))
    return tuple(sorted(set(cover) | set(lay.x) | set(lay.right)))


# -- circuit -> MBAN (B) -------------------------------------------------------


def _unwrap(c: Circuit | LayeredCircuit) -> tuple[Circuit, tuple[str, ...]]:
    if isinstance(c, LayeredCircuit):
        return c.circuit, c.roles
    return c, ()


def circuit_to_mban(c: Circuit | LayeredCircuit) -> ReductionOutput:
    """Compile a monotone self-map circuit into an MBAN on ``C_0 ⊔ T ⊔ F``.

    Gate ``k`` becomes vertex ``k``; a read of input ``j`` becomes a read of
    output gate ``j``.  OR gadgets use ``s`` (in ``T``) and AND gadgets
    ``s + 5`` (in ``F``) as constants; single-operand gates are copies.
    """
    stage = "compile"
    circ, roles = _unwrap(c)
    if not circ.is_self_map:
        raise ReductionError("circuit is not a self-map", stage)
    if not circ.is_monotone:
        raise ReductionError("circuit is not monotone (contains NOT)", stage)
    if any(not circ.is_gate(o) for o in circ.outputs):
        raise ReductionError("every output must be a gate", stage)
    s = len(circ.gates)
    if s < 2:
        raise ReductionError("need at least two gates", stage)
    n_in = circ.n_inputs

    def vertex(ref: int) -> int:
        return circ.outputs[ref] - n_in if ref < n_in else ref - n_in

    lists: list[tuple[int, ...]] = []
    labels: list[str] = []
    for k, g in enumerate(circ.gates):
        args = sorted({vertex(a) for a in g.args})
        if g.op in (AND, OR) and len(args) == 2:
            lists.append(gate_gadget(g.op, *args, s if g.op == OR else s + 5))
        else:
            lists.append(tuple(args))
        role = f"/{roles[k]}" if roles and roles[k] else ""
        labels.append(f"gate:{g.name}{role}")
    t_block = tuple(range(s, s + 5))
    f_block = tuple(range(s + 5, s + 10))
    for block, tag in ((t_block, "T"), (f_block, "F")):
        for q in block:
            lists.append((0, 1) + block if q == block[-1] else block)
            labels.append(tag)
    meta = {"s": s, "T": s, "F": s + 5}
    if isinstance(c, LayeredCircuit):
        meta["depth"] = c.meta.get("depth", c.depth)
    return _finish(lists, labels, None, **meta)


def embed_circuit_config(
    r: ReductionOutput, c: Circuit | LayeredCircuit, x: int, force_tests: bool = False
) -> int:
    """MBAN configuration holding every gate's value on input ``x``, ``T = 1`` and ``F = 0``.

    With ``force_tests`` the rule-1 and rule-2 test gates are set to 0 and the
    rule-3 test gates to 1 instead of their evaluated values.
    """
    circ, roles = _unwrap(c)
    s = len(circ.gates)
    if r.graph.n != s + 10 or r.metadata.get("s") != s:
        raise ReductionError("reduction output was not built from this circuit", "embed")
    vals = node_values(circ, x)[circ.n_inputs :]
    if force_tests and roles:
        forced = {ROLE_RULE1: 0, ROLE_RULE2: 0, ROLE_RULE3: 1}
        vals = [forced.get(roles[k], v) for k, v in enumerate(vals)]
    y = sum(v << k for k, v in enumerate(vals))
    return y | (0b11111 << s)


def rails(x: int, n: int) -> int:
    """Double-rail encoding ``x ¬x`` on ``2n`` bits."""
    return x | ((~x & ((1 << n) - 1)) << n)


def full_reduction(c: Circuit, x: int, i: int) -> ReductionOutput:
    """``B(M(L(C, x, i)))`` with the embedded counter seed as ``seed_config``."""
    if not c.is_self_map:
        raise ReductionError("circuit is not a self-map", "input")
    n = c.n_inputs
    try:
        c0 = normalize(c)
    except ValueError as exc:
        raise ReductionError(str(exc), "normalize") from exc
    wrapped = normalize(wrap_counter(c0, x, i))
    try:
        m = monotonize(wrapped)
    except ValueError as exc:
        raise ReductionError(str(exc), "monotonize") from exc
    out = circuit_to_mban(m)
    seed_l = with_counter(evaluate(c0, x), 1, n)
    seed = embed_circuit_config(out, m, rails(seed_l, 2 * n))
    meta = dict(out.metadata)
    meta.update(
        input_bits=n,
        circuit_gates=len(c0.gates),
        wrapped_bits=wrapped.n_inputs,
        wrapped_gates=len(wrapped.gates),
        monotone_bits=m.circuit.n_inputs,
        monotone_gates=len(m.circuit.gates),
        depth=m.depth,
        rail_depth=m.meta["rail_depth"],
        test_depth=m.meta["test_depth"],
        expected_positive=iter_cvp(c0, x, i),
    )
    return ReductionOutput(out.graph, out.labels, seed, meta)


__all__ = [
    "ReductionOutput",
    "circuit_to_mban",
    "clique_certificate",
    "degree_histogram",
    "embed_circuit_config",
    "full_reduction",
    "gate_gadget",
    "leader_certificate",
    "parse_labels",
    "rails",
    "reduce_clique_to_ss",
    "reduce_dctp_one",
    "reduce_vc_to_leader",
]
