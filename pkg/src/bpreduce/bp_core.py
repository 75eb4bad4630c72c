"""Layered nondeterministic branching programs and brute-force oracles."""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import GuardRefusal, InputError, ParseError

MAX_BRUTE_FORCE_N = 24

Node = tuple[int, int]
Edge = tuple[int, int, int, int]


@dataclass(frozen=True)
class BranchingProgram:
    """Layers 1..T of width W. ``layer_var[i - 1]`` is the variable read at layer i.

    An edge ``(i, j, jp, bit)`` goes from node (i, j) to node (i + 1, jp) and is
    usable when the layer variable equals ``bit``. Start is (1, 1), accept is (T, 1).
    """

    n: int
    T: int
    W: int
    layer_var: tuple[int, ...]
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        if self.n < 0 or self.T < 1 or self.W < 1:
            raise InputError(f"invalid dimensions n={self.n} T={self.T} W={self.W}")
        if len(self.layer_var) != self.T - 1:
            raise InputError(f"need {self.T - 1} layer variables, got {len(self.layer_var)}")
        for i, var in enumerate(self.layer_var, start=1):
            if not 1 <= var <= self.n:
                raise InputError(f"layer {i} reads variable {var} outside [1, {self.n}]")
        for edge in self.edges:
            i, j, jp, bit = edge
            if not 1 <= i < self.T:
                raise InputError(f"edge {edge} leaves layer {i}, not in [1, {self.T - 1}]")
            if not (1 <= j <= self.W and 1 <= jp <= self.W):
                raise InputError(f"edge {edge} uses a node outside [1, {self.W}]")
            if bit not in (0, 1):
                raise InputError(f"edge {edge} has label {bit}")

    @property
    def start(self) -> Node:
        return (1, 1)

    @property
    def accept(self) -> Node:
        return (self.T, 1)

    @property
    def t(self) -> int:
        """Return t with T = 2^t + 1, or raise if T has another form."""
        d = self.T - 1
        if d < 1 or d & (d - 1):
            raise InputError(f"T={self.T} is not of the form 2^t + 1")
        return d.bit_length() - 1

    def owner(self, var: int) -> int:
        """0 when the variable sits in the first half of the inputs, else 1."""
        return 0 if var <= self.n // 2 else 1

    def has_edge(self, u: Node, v: Node, bit: int) -> bool:
        return (u[0], u[1], v[1], bit) in self.edges and v[0] == u[0] + 1

    @cached_property
    def by_layer(self) -> tuple[tuple[tuple[int, int, int], ...], ...]:
        """Per layer i (index i - 1), the (j, jp, bit) triples leaving it."""
        rows: list[list[tuple[int, int, int]]] = [[] for _ in range(self.T - 1)]
        for i, j, jp, bit in sorted(self.edges):
            rows[i - 1].append((j, jp, bit))
        return tuple(tuple(r) for r in rows)


def _check_assignment(bp: BranchingProgram, asg: Sequence[int]) -> tuple[int, ...]:
    if len(asg) != bp.n:
        raise InputError(f"assignment has length {len(asg)}, program has n={bp.n}")
    return tuple(1 if b else 0 for b in asg)


def _check_node(bp: BranchingProgram, node: Node) -> None:
    i, j = node
    if not (1 <= i <= bp.T and 1 <= j <= bp.W):
        raise InputError(f"node {node} outside the {bp.T}x{bp.W} grid")


def join(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Concatenate two half assignments into a full assignment."""
    return tuple(a) + tuple(b)


def induced_subgraph(bp: BranchingProgram, asg: Sequence[int]) -> frozenset[Edge]:
    bits = _check_assignment(bp, asg)
    return frozenset(e for e in bp.edges if bits[bp.layer_var[e[0] - 1] - 1] == e[3])


def _successors(bp: BranchingProgram, bits: tuple[int, ...]) -> dict[Node, list[Node]]:
    out: dict[Node, list[Node]] = {}
    for i, j, jp, bit in bp.edges:
        if bits[bp.layer_var[i - 1] - 1] == bit:
            out.setdefault((i, j), []).append((i + 1, jp))
    return out


def reachable(bp: BranchingProgram, asg: Sequence[int], u: Node, v: Node) -> bool:
    """Breadth-first search from u to v in the induced subgraph."""
    bits = _check_assignment(bp, asg)
    _check_node(bp, u)
    _check_node(bp, v)
    if u == v:
        return True
    succ = _successors(bp, bits)
    seen = {u}
    queue = deque([u])
    while queue:
        node = queue.popleft()
        for nxt in succ.get(node, ()):
            if nxt == v:
                return True
            if nxt not in seen and nxt[0] < v[0]:
                seen.add(nxt)
                queue.append(nxt)
    return False


def evaluate(bp: BranchingProgram, asg: Sequence[int]) -> bool:
    """Layer-by-layer forward reachability from start to accept."""
    bits = _check_assignment(bp, asg)
    frontier = {1}
    for i in range(1, bp.T):
        value = bits[bp.layer_var[i - 1] - 1]
        frontier = {jp for (j, jp, bit) in bp.by_layer[i - 1] if bit == value and j in frontier}
        if not frontier:
            return False
    return 1 in frontier


def all_assignments(n: int) -> Iterator[tuple[int, ...]]:
    """All 0/1 tuples of length n in lexicographic order."""
    return itertools.product((0, 1), repeat=n)


def brute_force_sat(bp: BranchingProgram, max_n: int = MAX_BRUTE_FORCE_N) -> tuple[int, ...] | None:
    """Lexicographically first satisfying assignment, or None."""
    if bp.n > max_n:
        raise GuardRefusal(f"brute force over n={bp.n} variables exceeds the guard n <= {max_n}")
    for asg in all_assignments(bp.n):
        if evaluate(bp, asg):
            return asg
    return None


def satisfying_pair(
    bp: BranchingProgram,
    S1: Iterable[Sequence[int]],
    S2: Iterable[Sequence[int]],
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    if bp.n % 2:
        raise InputError(f"satisfying pairs need an even n, got {bp.n}")
    half = bp.n // 2
    left = [tuple(a) for a in S1]
    right = [tuple(b) for b in S2]
    for h in left + right:
        if len(h) != half:
            raise InputError(f"half assignment {h} does not have length {half}")
    for a in left:
        for b in right:
            if evaluate(bp, a + b):
                return a, b
    return None


def random_bp(n: int, W: int, t: int, seed: int, density: float = 0.5) -> BranchingProgram:
    """Seeded random program with T = 2^t + 1; each (edge, label) kept with probability density."""
    if n < 2 or n % 2:
        raise InputError(f"n must be even and positive, got {n}")
    if W < 2:
        raise InputError(f"W must be at least 2, got {W}")
    if t < 0:
        raise InputError(f"t must be nonnegative, got {t}")
    if not 0.0 <= density <= 1.0:
        raise InputError(f"density {density} outside [0, 1]")
    rng = random.Random(seed)
    T = 2**t + 1
    layer_var = tuple(rng.randint(1, n) for _ in range(T - 1))
    edges = set()
    for i in range(1, T):
        for j in range(1, W + 1):
            for jp in range(1, W + 1):
                for bit in (0, 1):
                    if rng.random() < density:
                        edges.add((i, j, jp, bit))
    return BranchingProgram(n, T, W, layer_var, frozenset(edges))


def serial_compose(p: BranchingProgram, q: BranchingProgram) -> BranchingProgram:
    """Accepts exactly when both programs accept; q's start is glued onto p's accept."""
    if p.n != q.n:
        raise InputError("composed programs must read the same variables")
    W = max(p.W, q.W)
    shift = p.T - 1
    edges = set(p.edges)
    # only p's accept node may continue into q
    edges.update((i + shift, j, jp, bit) for (i, j, jp, bit) in q.edges if i > 1 or j == 1)
    return BranchingProgram(p.n, p.T + q.T - 1, W, p.layer_var + q.layer_var, frozenset(edges))


def union_compose(p: BranchingProgram, q: BranchingProgram) -> BranchingProgram:
    """Accepts when either program accepts.

    A fresh first layer fans the start node out to both copies. The copies then
    run one after the other, the idle copy waiting on a self loop, and a final
    layer merges both accept nodes into node 1.
    """
    if p.n != q.n:
        raise InputError("composed programs must read the same variables")
    n = p.n
    W = p.W + q.W
    po, qo = 0, p.W
    layer_var: list[int] = []
    edges: set[Edge] = set()
    layer = 1
    # fan-out layer: start (1,1) reaches node 1 of both copies
    layer_var.append(1)
    for bit in (0, 1):
        edges.add((layer, 1, 1 + po, bit))
        edges.add((layer, 1, 1 + qo, bit))
    layer += 1
    # p's layers, q idles on its start node
    for i in range(1, p.T):
        layer_var.append(p.layer_var[i - 1])
        for li, j, jp, bit in p.edges:
            if li == i:
                edges.add((layer, j + po, jp + po, bit))
        for bit in (0, 1):
            edges.add((layer, 1 + qo, 1 + qo, bit))
        layer += 1
    # q's layers, p's accept node idles
    for i in range(1, q.T):
        layer_var.append(q.layer_var[i - 1])
        for li, j, jp, bit in q.edges:
            if li == i:
                edges.add((layer, j + qo, jp + qo, bit))
        for bit in (0, 1):
            edges.add((layer, 1 + po, 1 + po, bit))
        layer += 1
    # merge layer: either accept node feeds node 1
    layer_var.append(1)
    for bit in (0, 1):
        edges.add((layer, 1 + po, 1, bit))
        edges.add((layer, 1 + qo, 1, bit))
    layer += 1
    return BranchingProgram(n, layer, W, tuple(layer_var), frozenset(edges))


def serialize_bp(bp: BranchingProgram) -> str:
    lines = [f"bp n={bp.n} T={bp.T} W={bp.W}"]
    for i, var in enumerate(bp.layer_var, start=1):
        lines.append(f"layer {i} var {var}")
    for i, j, jp, bit in sorted(bp.edges):
        lines.append(f"edge {i} {j} {jp} {bit}")
    return "\n".join(lines) + "\n"


def _int_field(token: str, key: str, lineno: int) -> int:
    prefix = key + "="
    if not token.startswith(prefix):
        raise ParseError(f"expected {prefix}<int>, got {token!r}", line=lineno)
    try:
        return int(token[len(prefix):])
    except ValueError:
        raise ParseError(f"bad integer in {token!r}", line=lineno) from None


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", line=lineno) from None


def parse_bp(text: str) -> BranchingProgram:
    header = None
    layer_var: dict[int, int] = {}
    edges: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "bp":
            if header is not None:
                raise ParseError("duplicate header", line=lineno)
            if len(tokens) != 4:
                raise ParseError("header must be 'bp n=<n> T=<T> W=<W>'", line=lineno)
            header = tuple(_int_field(tok, key, lineno) for tok, key in zip(tokens[1:], ("n", "T", "W")))
            continue
        if header is None:
            raise ParseError("missing 'bp' header before content", line=lineno)
        n, T, W = header
        if kind == "layer":
            if len(tokens) != 4 or tokens[2] != "var":
                raise ParseError("layer line must be 'layer <i> var <f(i)>'", line=lineno)
            i, var = _ints([tokens[1], tokens[3]], lineno)
            if not 1 <= i < T:
                raise ParseError(f"layer {i} outside [1, {T - 1}]", line=lineno)
            if not 1 <= var <= n:
                raise ParseError(f"variable {var} outside [1, {n}]", line=lineno)
            if i in layer_var:
                raise ParseError(f"layer {i} declared twice", line=lineno)
            layer_var[i] = var
        elif kind == "edge":
            if len(tokens) != 5:
                raise ParseError("edge line must be 'edge <i> <j> <j'> <bit>'", line=lineno)
            i, j, jp, bit = _ints(tokens[1:], lineno)
            if not 1 <= i < T:
                raise ParseError(f"edge leaves layer {i}, which has no successor layer in [2, {T}]", line=lineno)
            if not (1 <= j <= W and 1 <= jp <= W):
                raise ParseError(f"edge node outside [1, {W}]", line=lineno)
            if bit not in (0, 1):
                raise ParseError(f"edge label {bit} is not 0 or 1", line=lineno)
            edges.add((i, j, jp, bit))
        else:
            raise ParseError(f"unknown record {kind!r}", line=lineno)
    if header is None:
        raise ParseError("empty program text")
    n, T, W = header
    missing = [i for i in range(1, T) if i not in layer_var]
    if missing:
        raise ParseError(f"no variable declared for layers {missing}")
    return BranchingProgram(n, T, W, tuple(layer_var[i] for i in range(1, T)), frozenset(edges))
