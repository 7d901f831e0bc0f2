"""Gate-level circuits and the transformations used by the reductions.

Node references are integers: ``0..n_inputs-1`` are the inputs, and gate ``k``
is node ``n_inputs + k``.  Operands always point to earlier nodes, so a
circuit is acyclic by construction.  Bit vectors are packed ints with bit
``j`` for input/output ``j`` (the literal ``"100"`` is ``1``).
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .dynamics import Orbit, functional_orbit
from .errors import GraphFormatError, ReductionError

AND, OR, NOT, BUF = "AND", "OR", "NOT", "BUF"
ARITY = {AND: 2, OR: 2, NOT: 1, BUF: 1}
_INPUT_REF = re.compile(r"^i(\d+)$")


@dataclass(frozen=True)
class Gate:
    op: str
    args: tuple[int, ...]
    name: str


@dataclass(frozen=True)
class Circuit:
    n_inputs: int
    gates: tuple[Gate, ...]
    outputs: tuple[int, ...]

    def __post_init__(self):
        names = set()
        for k, g in enumerate(self.gates):
            if g.op not in ARITY:
                raise ValueError(f"unknown gate op {g.op!r}")
            if len(g.args) != ARITY[g.op]:
                raise ValueError(f"{g.op} gate {g.name} needs {ARITY[g.op]} operands")
            for a in g.args:
                if not 0 <= a < self.n_inputs + k:
                    raise ValueError(f"gate {g.name} refers to node {a}, not strictly earlier")
            if g.name in names or _INPUT_REF.match(g.name):
                raise ValueError(f"bad or duplicate gate name {g.name!r}")
            names.add(g.name)
        for o in self.outputs:
            if not 0 <= o < self.n_nodes:
                raise ValueError(f"output refers to missing node {o}")

    @property
    def n_nodes(self) -> int:
        return self.n_inputs + len(self.gates)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    @property
    def is_self_map(self) -> bool:
        return self.n_outputs == self.n_inputs

    @property
    def is_monotone(self) -> bool:
        return all(g.op != NOT for g in self.gates)

    def gate(self, node: int) -> Gate:
        return self.gates[node - self.n_inputs]

    def is_gate(self, node: int) -> bool:
        return node >= self.n_inputs


class CircuitBuilder:
    """Append-only construction with automatic ``g<k>`` names."""

    def __init__(self, n_inputs: int):
        self.n_inputs = n_inputs
        self.gates: list[Gate] = []
        self.tags: list[str] = []

    def add(self, op: str, *args: int, name: str | None = None, tag: str = "") -> int:
        k = len(self.gates)
        self.gates.append(Gate(op, tuple(args), name or f"g{k}"))
        self.tags.append(tag)
        return self.n_inputs + k

    def build(self, outputs: Sequence[int]) -> Circuit:
        return Circuit(self.n_inputs, tuple(self.gates), tuple(outputs))


# -- text format -------------------------------------------------------------


def node_label(c: Circuit, ref: int) -> str:
    return f"i{ref}" if ref < c.n_inputs else c.gate(ref).name


def format_circuit(c: Circuit) -> str:
    lines = [f"inputs {c.n_inputs}"]
    for g in c.gates:
        lines.append(f"gate {g.name} {g.op} " + " ".join(node_label(c, a) for a in g.args))
    lines.append("outputs " + " ".join(node_label(c, o) for o in c.outputs))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    n_inputs = None
    gates: list[Gate] = []
    by_name: dict[str, int] = {}
    outputs = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if outputs is not None:
            raise GraphFormatError("content after 'outputs' line", lineno)
        if n_inputs is None:
            if len(parts) != 2 or parts[0] != "inputs" or not parts[1].isdigit():
                raise GraphFormatError(f"expected 'inputs <n>', got {raw!r}", lineno)
            n_inputs = int(parts[1])
            continue

        def ref(tok: str) -> int:
            m = _INPUT_REF.match(tok)
            if m:
                j = int(m.group(1))
                if j >= n_inputs:
                    raise GraphFormatError(f"input {tok} out of range", lineno)
                return j
            if tok not in by_name:
                raise GraphFormatError(f"unknown reference {tok!r}", lineno)
            return by_name[tok]

        if parts[0] == "gate":
            if len(parts) < 3:
                raise GraphFormatError(f"malformed gate line {raw!r}", lineno)
            name, op = parts[1], parts[2]
            if op not in ARITY:
                raise GraphFormatError(f"unknown op {op!r}", lineno)
            if len(parts) - 3 != ARITY[op]:
                raise GraphFormatError(f"{op} takes {ARITY[op]} operands", lineno)
            if name in by_name or _INPUT_REF.match(name):
                raise GraphFormatError(f"bad or duplicate gate id {name!r}", lineno)
            args = tuple(ref(t) for t in parts[3:])
            by_name[name] = n_inputs + len(gates)
            gates.append(Gate(op, args, name))
        elif parts[0] == "outputs":
            outputs = tuple(ref(t) for t in parts[1:])
        else:
            raise GraphFormatError(f"unrecognised line {raw!r}", lineno)
    if n_inputs is None:
        raise GraphFormatError("missing 'inputs <n>' header")
    if outputs is None:
        raise GraphFormatError("missing 'outputs' line")
    return Circuit(n_inputs, tuple(gates), outputs)


# -- evaluation --------------------------------------------------------------


def node_values(c: Circuit, x: int) -> list[int]:
    """Value of every node (inputs first, then gates) on input ``x``."""
    vals = [(x >> j) & 1 for j in range(c.n_inputs)]
    for g in c.gates:
        a = vals[g.args[0]]
        if g.op == AND:
            vals.append(a & vals[g.args[1]])
        elif g.op == OR:
            vals.append(a | vals[g.args[1]])
        elif g.op == NOT:
            vals.append(a ^ 1)
        else:
            vals.append(a)
    return vals


def evaluate(c: Circuit, x: int) -> int:
    vals = node_values(c, x)
    y = 0
    for j, o in enumerate(c.outputs):
        y |= vals[o] << j
    return y


def truth_table(c: Circuit) -> np.ndarray:
    """Packed outputs for every input, evaluated bit-parallel over ``2**n_inputs`` rows."""
    if c.n_inputs > 24:
        raise ValueError("truth tables are limited to 24 inputs")
    xs = np.arange(1 << c.n_inputs, dtype=np.int64)
    vals = [((xs >> j) & 1).astype(bool) for j in range(c.n_inputs)]
    for g in c.gates:
        a = vals[g.args[0]]
        if g.op == AND:
            vals.append(a & vals[g.args[1]])
        elif g.op == OR:
            vals.append(a | vals[g.args[1]])
        elif g.op == NOT:
            vals.append(~a)
        else:
            vals.append(a)
    out = np.zeros(len(xs), dtype=np.int64)
    for j, o in enumerate(c.outputs):
        out |= vals[o].astype(np.int64) << j
    return out


def _require_self_map(c: Circuit) -> None:
    if not c.is_self_map:
        raise ValueError(f"not a self-map: {c.n_inputs} inputs, {c.n_outputs} outputs")


def iterate_circuit(c: Circuit, x: int, t: int) -> int:
    _require_self_map(c)
    for _ in range(t):
        x = evaluate(c, x)
    return x


def circuit_orbit(c: Circuit, x: int, max_steps: int | None = None) -> Orbit:
    _require_self_map(c)
    return functional_orbit(lambda y: evaluate(c, y), x, c.n_inputs, max_steps)


def iter_cvp(c: Circuit, x: int, i: int, max_steps: int | None = None) -> bool:
    """Is there ``t > 0`` with bit ``i`` of ``C^t(x)`` equal to 1?"""
    orb = circuit_orbit(c, evaluate(c, x), max_steps)
    return any((y >> i) & 1 for y in orb.states())


# -- structure ---------------------------------------------------------------


def levels(c: Circuit) -> list[int]:
    """Longest-path depth of every node; inputs are at level 0."""
    lv = [0] * c.n_inputs
    for g in c.gates:
        lv.append(1 + max(lv[a] for a in g.args))
    return lv


def depth(c: Circuit) -> int:
    lv = levels(c)
    return max((lv[o] for o in c.outputs), default=0)


def is_layered(c: Circuit) -> bool:
    lv = levels(c)
    d = depth(c)
    for k, g in enumerate(c.gates):
        if any(lv[a] != lv[c.n_inputs + k] - 1 for a in g.args):
            return False
    return all(lv[o] == d for o in c.outputs)


def live_nodes(c: Circuit) -> set[int]:
    live = set(c.outputs)
    for k in range(len(c.gates) - 1, -1, -1):
        node = c.n_inputs + k
        if node in live:
            live.update(c.gates[k].args)
    return live


def prune(c: Circuit, tags: Sequence[str] | None = None) -> tuple[Circuit, list[str]]:
    """Drop gates that no output depends on; names are kept."""
    live = live_nodes(c)
    remap = {j: j for j in range(c.n_inputs)}
    gates = []
    kept_tags = []
    for k, g in enumerate(c.gates):
        node = c.n_inputs + k
        if node not in live:
            continue
        remap[node] = c.n_inputs + len(gates)
        gates.append(Gate(g.op, tuple(remap[a] for a in g.args), g.name))
        if tags is not None:
            kept_tags.append(tags[k])
    return Circuit(c.n_inputs, tuple(gates), tuple(remap[o] for o in c.outputs)), kept_tags


def normalize(c: Circuit) -> Circuit:
    """Remove BUF gates, cancel NOT-NOT pairs, and drop dead gates."""
    remap = {j: j for j in range(c.n_inputs)}
    gates: list[Gate] = []

    def new_gate(ref: int) -> Gate | None:
        return gates[ref - c.n_inputs] if ref >= c.n_inputs else None

    for k, g in enumerate(c.gates):
        node = c.n_inputs + k
        args = tuple(remap[a] for a in g.args)
        if g.op == BUF:
            remap[node] = args[0]
            continue
        if g.op == NOT:
            inner = new_gate(args[0])
            if inner is not None and inner.op == NOT:
                remap[node] = inner.args[0]
                continue
        remap[node] = c.n_inputs + len(gates)
        gates.append(Gate(g.op, args, g.name))
    out = Circuit(c.n_inputs, tuple(gates), tuple(remap[o] for o in c.outputs))
    return prune(out)[0]


def is_normal(c: Circuit) -> bool:
    return normalize(c) == c


def dual(c: Circuit) -> Circuit:
    """Swap AND and OR gates; ``dual(c)(~x) == ~c(x)``."""
    swap = {AND: OR, OR: AND, NOT: NOT, BUF: BUF}
    return Circuit(c.n_inputs, tuple(Gate(swap[g.op], g.args, g.name) for g in c.gates), c.outputs)


# -- layering ----------------------------------------------------------------


@dataclass(frozen=True)
class LayeredCircuit:
    """A circuit plus a layer index per gate.

    ``roles`` tags every gate with the part it belongs to; ``meta`` carries
    construction details (test roots, padding, depths).
    """

    circuit: Circuit
    layers: tuple[int, ...]
    depth: int
    roles: tuple[str, ...] = ()
    meta: dict = field(default_factory=dict, compare=False)

    def gates_with_role(self, role: str) -> list[int]:
        return [k for k, r in enumerate(self.roles) if r == role]


class _Layerer:
    """Re-emits a circuit into a builder, inserting BUF chains between layers."""

    def __init__(self, builder: CircuitBuilder, level: dict[int, int]):
        self.b = builder
        self.level = level
        self._delays: dict[tuple[int, int], int] = {}

    def delayed(self, ref: int, target: int, tag: str) -> int:
        lv = self.level.get(ref, 0)
        if lv > target:
            raise ValueError("cannot move a node to an earlier layer")
        while lv < target:
            key = (ref, lv + 1)
            if key not in self._delays:
                nxt = self.b.add(BUF, ref, tag=tag)
                self.level[nxt] = lv + 1
                self._delays[key] = nxt
            ref = self._delays[key]
            lv += 1
        return ref

    def gate(self, op: str, args: Sequence[int], tag: str, name: str | None = None) -> int:
        target = max(self.level.get(a, 0) for a in args)
        args = [self.delayed(a, target, tag) for a in args]
        ref = self.b.add(op, *args, name=name, tag=tag)
        self.level[ref] = target + 1
        return ref

    def tree(self, op: str, refs: Sequence[int], tag: str) -> int:
        """Balanced, layered reduction of ``refs`` with ``op``."""
        refs = list(refs)
        while len(refs) > 1:
            nxt = [self.gate(op, refs[k : k + 2], tag) for k in range(0, len(refs) - 1, 2)]
            if len(refs) % 2:
                nxt.append(self.delayed(refs[-1], self.level[nxt[0]], tag))
            refs = nxt
        return refs[0]


def layerize(c: Circuit, min_depth: int = 0) -> LayeredCircuit:
    """Pad with BUF gates until every gate reads only from the previous layer."""
    lv = levels(c)
    if is_layered(c) and depth(c) >= min_depth:
        return LayeredCircuit(c, tuple(lv[c.n_inputs :]), depth(c), ("",) * len(c.gates))
    b = CircuitBuilder(c.n_inputs)
    level: dict[int, int] = {}
    lay = _Layerer(b, level)
    remap = {j: j for j in range(c.n_inputs)}
    for k, g in enumerate(c.gates):
        target = lv[c.n_inputs + k] - 1
        args = [lay.delayed(remap[a], target, "pad") for a in g.args]
        ref = b.add(g.op, *args, name=g.name)
        level[ref] = target + 1
        remap[c.n_inputs + k] = ref
    d = max(min_depth, max((lv[o] for o in c.outputs), default=0))
    outs = [lay.delayed(remap[o], d, "pad") for o in c.outputs]
    # keep user names on original gates, number padding after them
    names = {g.name for g in c.gates}
    gates = []
    counter = 0
    for g, t in zip(b.gates, b.tags):
        if t == "pad":
            while f"pad{counter}" in names:
                counter += 1
            gates.append(Gate(g.op, g.args, f"pad{counter}"))
            counter += 1
        else:
            gates.append(g)
    out = Circuit(c.n_inputs, tuple(gates), tuple(outs))
    return LayeredCircuit(out, tuple(levels(out)[out.n_inputs :]), d, tuple(b.tags))


# -- monotonization (double-rail) --------------------------------------------

ROLE_C, ROLE_N = "C", "N"
ROLE_RULE1, ROLE_RULE2, ROLE_RULE3 = "rule1", "rule2", "rule3"
ROLE_OUT = "out"


def _ceil_log2(n: int) -> int:
    return max(0, math.ceil(math.log2(n))) if n > 0 else 0


def monotonize(c: Circuit) -> LayeredCircuit:
    """Monotone double-rail self-map on ``2n`` bits simulating ``c``.

    Layout: the left rail computes ``c``, the right rail computes ``dual(c)``
    (NOT edges become cross-rail wires).  Three layered test trees compute
    ``r1`` (left half all ones), ``r2`` (some position with both rails 1) and
    ``r3`` (no position with both rails 0), and output ``j`` becomes
    ``((g_j AND r3) OR r2) OR r1``.  The rail part is padded with whole BUF
    layers until its depth (rewire layers included) is coprime with, and at
    least, the depth of the test paths.  One BUF on ``r1`` keeps the gate
    count odd, so the compiled network has an odd vertex count.
    """
    _require_self_map(c)
    c = normalize(c)
    n = c.n_inputs

    # rails: rail[node] = (left ref, right ref) in a 2n-input circuit
    rb = CircuitBuilder(2 * n)
    rail: dict[int, tuple[int, int]] = {j: (j, n + j) for j in range(n)}
    for k, g in enumerate(c.gates):
        node = n + k
        if g.op == NOT:
            left, right = rail[g.args[0]]
            rail[node] = (right, left)
        elif g.op in (AND, OR):
            (la, ra), (lb, rb_) = rail[g.args[0]], rail[g.args[1]]
            other = OR if g.op == AND else AND
            rail[node] = (
                rb.add(g.op, la, lb, tag=ROLE_C),
                rb.add(other, ra, rb_, tag=ROLE_N),
            )
        else:  # pragma: no cover - normalize removed BUFs
            rail[node] = rail[g.args[0]]
    rails_out = [rail[o][0] for o in c.outputs] + [rail[o][1] for o in c.outputs]
    rails, rail_tags = prune(rb.build(rails_out), rb.tags)

    lg = _ceil_log2(n)
    test_depth = lg + 1 + 3
    rail_depth = max(1, depth(rails))
    pad = 0
    while rail_depth + pad + 3 < test_depth or math.gcd(rail_depth + pad + 3, test_depth) != 1:
        pad += 1
    total_depth = rail_depth + pad + 3

    b = CircuitBuilder(2 * n)
    level: dict[int, int] = {}
    lay = _Layerer(b, level)
    lv = levels(rails)
    remap = {j: j for j in range(2 * n)}
    for k, g in enumerate(rails.gates):
        target = lv[2 * n + k] - 1
        tag = rail_tags[k]
        args = [lay.delayed(remap[a], target, tag) for a in g.args]
        ref = b.add(g.op, *args, tag=tag)
        level[ref] = target + 1
        remap[2 * n + k] = ref
    core_outs = []
    for j, o in enumerate(rails.outputs):
        tag = ROLE_C if j < n else ROLE_N
        core_outs.append(lay.delayed(remap[o], rail_depth + pad, tag))

    left = list(range(n))
    right = list(range(n, 2 * n))
    r1 = lay.tree(AND, left, ROLE_RULE1)
    pairs_and = [lay.gate(AND, (left[j], right[j]), ROLE_RULE2) for j in range(n)]
    r2 = lay.tree(OR, pairs_and, ROLE_RULE2)
    pairs_or = [lay.gate(OR, (left[j], right[j]), ROLE_RULE3) for j in range(n)]
    r3 = lay.tree(AND, pairs_or, ROLE_RULE3)

    rewire_count = 3 * 2 * n
    if (len(b.gates) + rewire_count) % 2 == 0:
        r1 = lay.gate(BUF, (r1,), ROLE_RULE1)

    outs = []
    for g in core_outs:
        a = b.add(AND, g, r3, tag=ROLE_OUT)
        o = b.add(OR, a, r2, tag=ROLE_OUT)
        outs.append(b.add(OR, o, r1, tag=ROLE_OUT))
    m = b.build(outs)
    if len(m.gates) % 2 == 0:  # pragma: no cover - guarded by the parity BUF above
        raise AssertionError("monotonize produced an even gate count")
    lvs = levels(m)
    return LayeredCircuit(
        m,
        tuple(lvs[2 * n :]),
        total_depth,
        tuple(b.tags),
        meta={
            "r1": r1,
            "r2": r2,
            "r3": r3,
            "rail_depth": rail_depth,
            "padding_layers": pad,
            "test_depth": test_depth,
            "depth": total_depth,
        },
    )


def rail_depth_ok(lc: LayeredCircuit) -> bool:
    """The rail part is strictly layered and its depth is coprime with the test depth."""
    c = lc.circuit
    lv = levels(c)
    for k, g in enumerate(c.gates):
        if lc.roles[k] in (ROLE_C, ROLE_N) and any(lv[a] != lv[c.n_inputs + k] - 1 for a in g.args):
            return False
    return math.gcd(lc.meta["depth"], lc.meta["test_depth"]) == 1 and lc.meta["depth"] > lc.meta[
        "test_depth"
    ]


# -- counter wrapper ---------------------------------------------------------


def inline(b: CircuitBuilder, c: Circuit, inputs: Sequence[int], tag: str = "") -> list[int]:
    """Copy ``c`` into ``b`` with its inputs bound to ``inputs``; returns output refs."""
    remap = dict(enumerate(inputs))
    for k, g in enumerate(c.gates):
        remap[c.n_inputs + k] = b.add(g.op, *(remap[a] for a in g.args), tag=tag)
    return [remap[o] for o in c.outputs]


def _tree(b: CircuitBuilder, op: str, refs: Sequence[int], tag: str) -> int:
    refs = list(refs)
    while len(refs) > 1:
        nxt = [b.add(op, refs[k], refs[k + 1], tag=tag) for k in range(0, len(refs) - 1, 2)]
        if len(refs) % 2:
            nxt.append(refs[-1])
        refs = nxt
    return refs[0]


def _xor(b: CircuitBuilder, a: int, c: int, tag: str) -> int:
    either = b.add(OR, a, c, tag=tag)
    both = b.add(AND, a, c, tag=tag)
    return b.add(AND, either, b.add(NOT, both, tag=tag), tag=tag)


def counter_value(z: int, n: int) -> int:
    """Counter held in the high block of a ``2n``-bit state; its last bit is least significant."""
    value = 0
    for k in range(n):
        value = (value << 1) | ((z >> (n + k)) & 1)
    return value


def with_counter(y: int, counter: int, n: int) -> int:
    """Pack ``y`` (low block) and a counter value (high block) into a ``2n``-bit state."""
    z = y
    for k in range(n):
        if (counter >> (n - 1 - k)) & 1:
            z |= 1 << (n + k)
    return z


def wrap_counter(c: Circuit, x: int, i: int) -> Circuit:
    """Counter wrapper on ``2n`` bits: blocks ``y`` (low) and ``counter`` (high).

    * the all-ones state is fixed;
    * if the selected C-output has bit ``i`` set, everything goes to all ones;
    * otherwise the counter is incremented modulo ``2**n`` and ``y`` becomes
      ``C(x)`` when the counter was zero, ``C(y)`` otherwise.

    The selected C-output is ``C(x)`` when the counter is zero and ``C(y)``
    otherwise, so the flag tests exactly the value about to be written.
    """
    _require_self_map(c)
    n = c.n_inputs
    if not 0 <= i < n:
        raise ReductionError(f"index {i} out of range [0, {n})", stage="wrap_counter")
    if not 0 <= x < (1 << n):
        raise ReductionError(f"seed {x} does not fit in {n} bits", stage="wrap_counter")
    b = CircuitBuilder(2 * n)
    y_in = list(range(n))
    cnt_in = list(range(n, 2 * n))

    consts = []
    for j in range(n):
        neg = b.add(NOT, y_in[j], tag="write-x")
        consts.append(b.add(OR if (x >> j) & 1 else AND, y_in[j], neg, tag="write-x"))
    c_of_x = inline(b, c, consts, tag="C(x)")
    c_of_y = inline(b, c, y_in, tag="C(y)")

    all_ones = _tree(b, AND, list(range(2 * n)), tag="all-ones")
    nonzero = _tree(b, OR, cnt_in, tag="nonzero")
    is_zero = b.add(NOT, nonzero, tag="nonzero")

    # counter bits, least significant first (input 2n-1 is the LSB)
    bits = [cnt_in[n - 1 - k] for k in range(n)]
    sums = [b.add(NOT, bits[0], tag="add1")]
    carry = bits[0]
    for k in range(1, n):
        sums.append(_xor(b, bits[k], carry, tag="add1"))
        if k < n - 1:
            carry = b.add(AND, bits[k], carry, tag="add1")

    mux = []
    for j in range(n):
        from_x = b.add(AND, is_zero, c_of_x[j], tag="mux")
        from_y = b.add(AND, nonzero, c_of_y[j], tag="mux")
        mux.append(b.add(OR, from_x, from_y, tag="mux"))
    flag = mux[i]

    outs = []
    for j in range(n):
        v = mux[j] if j == i else b.add(OR, mux[j], flag, tag="out")
        outs.append(b.add(OR, v, all_ones, tag="out"))
    for k in range(n):  # output position n+k carries counter bit n-1-k
        v = b.add(OR, sums[n - 1 - k], flag, tag="out")
        outs.append(b.add(OR, v, all_ones, tag="out"))
    return normalize(b.build(outs))


# -- random circuits (tests and verification suites) -------------------------


def random_circuit(
    n_inputs: int,
    n_gates: int,
    rng: random.Random,
    n_outputs: int | None = None,
    ops: Iterable[str] = (AND, OR, NOT),
) -> Circuit:
    ops = tuple(ops)
    b = CircuitBuilder(n_inputs)
    for _ in range(n_gates):
        op = rng.choice(ops)
        hi = b.n_inputs + len(b.gates)
        args = [rng.randrange(hi) for _ in range(ARITY[op])]
        b.add(op, *args)
    nodes = b.n_inputs + len(b.gates)
    n_outputs = n_inputs if n_outputs is None else n_outputs
    lo = max(0, nodes - max(n_outputs, n_gates // 2 + 1))
    outs = [rng.randrange(lo, nodes) for _ in range(n_outputs)]
    return b.build(outs)


def buffer_circuit(n: int, perm: Sequence[int] | None = None) -> Circuit:
    """Output ``j`` copies input ``perm[j]`` through one BUF gate."""
    perm = list(range(n)) if perm is None else list(perm)
    b = CircuitBuilder(n)
    outs = [b.add(BUF, perm[j]) for j in range(n)]
    return b.build(outs)


def rotation_circuit(n: int) -> Circuit:
    """Cyclic shift: output ``j`` is input ``j-1``."""
    return buffer_circuit(n, [(j - 1) % n for j in range(n)])


def negation_circuit(n: int) -> Circuit:
    b = CircuitBuilder(n)
    return b.build([b.add(NOT, j) for j in range(n)])
