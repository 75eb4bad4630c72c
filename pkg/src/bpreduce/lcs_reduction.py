"""Direct reduction from branching-program satisfiability to weighted LCS.

Reachability gadgets are built recursively: a level-k gadget for nodes u and v
lets the LCS solver guess the midpoint node and compares both halves at level
k - 1. Heavy letters force the guess to be made once, so the weighted LCS of an
a-side and b-side gadget is exactly ``Y_k`` when v is reachable from u and at
most ``Y_k - 1`` otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .bp_core import BranchingProgram, Node, all_assignments
from .errors import InputError
from .gadgets import (
    max_base_score,
    max_left,
    max_letters,
    max_right,
    weight_of,
    window_base_score,
    window_long,
    window_short,
    SeparatorRegistry,
)
from .seq_measures import WeightedAlphabet, WeightedSequence


class Side(enum.Enum):
    X = "X"
    Y = "Y"

    @classmethod
    def parse(cls, value: "Side | str") -> "Side":
        if isinstance(value, Side):
            return value
        key = str(value).upper()
        if key in ("X", "A"):
            return cls.X
        if key in ("Y", "B"):
            return cls.Y
        raise InputError(f"unknown side {value!r}")

    @property
    def party(self) -> int:
        return 1 if self is Side.X else 2


@dataclass(frozen=True)
class ScoreTable:
    W: int
    t: int
    Z: tuple[int, ...]
    Y: tuple[int, ...]

    @property
    def X_bound(self) -> tuple[int, ...]:
        return tuple(y - 1 for y in self.Y)


def score_tables(W: int, t: int) -> ScoreTable:
    """Total gadget weight Z_k and reachable score Y_k for k = 0..t, as exact integers."""
    if W < 2:
        raise InputError(f"W must be at least 2, got {W}")
    if t < 0:
        raise InputError(f"t must be nonnegative, got {t}")
    Z = [1]
    Y = [1]
    for _ in range(t):
        Y.append(6 * (6 * W + 1) * Z[-1] + 2 * Y[-1])
        Z.append(Z[-1] * W * (36 * W + 26))
    return ScoreTable(W, t, tuple(Z), tuple(Y))


@dataclass
class LetterLayout:
    """Integer letters for the gadgets of K parties up to level t.

    Id 0 is ``e``, ids 1..K are the private absent letters ``$_j``, and level k
    takes one contiguous block ``f_k, g_k, z_{1..W,k}, #_{1..K-1,k}``.
    """

    W: int
    t: int
    K: int = 2
    alphabet: WeightedAlphabet = field(default_factory=WeightedAlphabet)

    def __post_init__(self) -> None:
        if self.K < 2:
            raise InputError(f"need at least two parties, got {self.K}")
        tables = score_tables(self.W, self.t)
        self.tables = tables
        self.e = self.alphabet.add("e", 1)
        self.absent = {j: self.alphabet.add(f"$_{j}", 1) for j in range(1, self.K + 1)}
        self.f: dict[int, int] = {}
        self.g: dict[int, int] = {}
        self.z: dict[tuple[int, int], int] = {}
        self.pad: dict[tuple[int, int], int] = {}
        for k in range(1, self.t + 1):
            heavy = 9 * tables.Z[k - 1]
            self.f[k] = self.alphabet.add(f"f_{k}", heavy)
            self.g[k] = self.alphabet.add(f"g_{k}", heavy)
            for node in range(1, self.W + 1):
                self.z[node, k] = self.alphabet.add(f"z_{k}[{node}]", 2 * tables.Z[k - 1])
            for j in range(1, self.K):
                name = f"#_{k}" if self.K == 2 else f"#_{j},{k}"
                self.pad[j, k] = self.alphabet.add(name, heavy)

    def manifest(self) -> dict[int, str]:
        return dict(self.alphabet.names)


def _layer_distance_level(bp: BranchingProgram, u: Node, v: Node) -> int:
    d = v[0] - u[0]
    if d < 1 or d & (d - 1):
        raise InputError(f"layer distance {d} between {u} and {v} is not a power of two")
    return d.bit_length() - 1


class PartyBuilder:
    """Builds the gadgets of one party for one fixed partial assignment.

    Parties 1..K-1 use the padded template with ``f`` on the outside, party K uses
    the template with ``g`` runs around each core. Results are memoized per node pair.
    """

    def __init__(self, bp: BranchingProgram, layout: LetterLayout, party: int, half: Sequence[int]):
        K = layout.K
        if bp.n % K:
            raise InputError(f"n={bp.n} is not divisible into {K} equal blocks")
        if not 1 <= party <= K:
            raise InputError(f"party {party} outside [1, {K}]")
        block = bp.n // K
        if len(half) != block:
            raise InputError(f"party {party} needs {block} bits, got {len(half)}")
        if bp.W > layout.W:
            raise InputError(f"program width {bp.W} exceeds the layout width {layout.W}")
        self.bp = bp
        self.layout = layout
        self.party = party
        self.block = block
        self.bits = tuple(1 if b else 0 for b in half)
        self._memo: dict[tuple[Node, Node], list[int]] = {}

    def base(self, u: Node, v: Node) -> list[int]:
        if v[0] != u[0] + 1:
            raise InputError(f"nodes {u} and {v} are not in adjacent layers")
        var = self.bp.layer_var[u[0] - 1]
        if (var - 1) // self.block + 1 != self.party:
            return [self.layout.e]
        bit = self.bits[(var - 1) % self.block]
        if (u[0], u[1], v[1], bit) in self.bp.edges:
            return [self.layout.e]
        return [self.layout.absent[self.party]]

    def build(self, u: Node, v: Node) -> list[int]:
        key = (u, v)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        k = _layer_distance_level(self.bp, u, v)
        if k == 0:
            out = self.base(u, v)
        else:
            out = self._level(u, v, k)
        self._memo[key] = out
        return out

    def _core(self, u: Node, v: Node, k: int, node: int) -> list[int]:
        h = (u[0] + v[0]) // 2
        z = self.layout.z[node, k]
        return [z, *self.build(u, (h, node)), z, *self.build((h, node), v), z]

    def _level(self, u: Node, v: Node, k: int) -> list[int]:
        lay = self.layout
        W = lay.W
        f, g = lay.f[k], lay.g[k]
        out: list[int] = []
        if self.party < lay.K:
            out.extend([f] * (2 * W))
            for node in range(1, W + 1):
                out.append(g)
                out.extend(self._core(u, v, k, node))
                out.append(g)
            out.extend([f] * (2 * W))
            out.extend([lay.pad[self.party, k]] * (4 * W * (W - 1)))
        else:
            for node in range(1, W + 1):
                out.append(f)
                out.extend([g] * (2 * W))
                out.extend(self._core(u, v, k, node))
                out.extend([g] * (2 * W))
                out.append(f)
        return out


def _side_half_ok(bp: BranchingProgram, half: Sequence[int]) -> None:
    if bp.n % 2:
        raise InputError(f"two-party gadgets need an even n, got {bp.n}")
    if len(half) != bp.n // 2:
        raise InputError(f"half assignment must have length {bp.n // 2}, got {len(half)}")


def rg_base(bp: BranchingProgram, side: Side | str, half: Sequence[int], u: Node, v: Node,
            layout: LetterLayout | None = None) -> WeightedSequence:
    side = Side.parse(side)
    _side_half_ok(bp, half)
    layout = layout or LetterLayout(bp.W, 0)
    return WeightedSequence(tuple(PartyBuilder(bp, layout, side.party, half).base(u, v)), layout.alphabet)


def rg(bp: BranchingProgram, side: Side | str, half: Sequence[int], u: Node, v: Node, k: int,
       layout: LetterLayout | None = None) -> WeightedSequence:
    side = Side.parse(side)
    _side_half_ok(bp, half)
    if _layer_distance_level(bp, u, v) != k:
        raise InputError(f"nodes {u} and {v} are not at layer distance 2^{k}")
    layout = layout or LetterLayout(bp.W, k)
    if layout.t < k:
        raise InputError(f"layout only covers levels up to {layout.t}")
    return WeightedSequence(tuple(PartyBuilder(bp, layout, side.party, half).build(u, v)), layout.alphabet)


def rg_k_multiparty(bp: BranchingProgram, j: int, K: int, half: Sequence[int], u: Node, v: Node, k: int,
                    layout: LetterLayout | None = None) -> WeightedSequence:
    if _layer_distance_level(bp, u, v) != k:
        raise InputError(f"nodes {u} and {v} are not at layer distance 2^{k}")
    layout = layout or LetterLayout(bp.W, k, K)
    if layout.K != K:
        raise InputError(f"layout built for {layout.K} parties, asked for {K}")
    return WeightedSequence(tuple(PartyBuilder(bp, layout, j, half).build(u, v)), layout.alphabet)


def vector_gadget(bp: BranchingProgram, side: Side | str, half: Sequence[int],
                  layout: LetterLayout | None = None) -> WeightedSequence:
    t = bp.t
    return rg(bp, side, half, bp.start, bp.accept, t, layout or LetterLayout(bp.W, t))


COMBINE_MODES = ("align", "or")


@dataclass
class ReductionArtifact:
    """Sequences A, B with threshold E, plus the tables behind them.

    In ``align`` mode a satisfying pair exists iff ``wlcs(A, B) >= E``; unsatisfiable
    inputs give at most ``E - 1``. In ``or`` mode the value is exactly ``E`` when a
    satisfying pair exists.
    """

    A: WeightedSequence
    B: WeightedSequence
    E: int
    mode: str
    tables: ScoreTable
    layout: LetterLayout
    predicted: dict[str, int]
    measured: dict[str, int]
    left: list[tuple[int, ...]]
    right: list[tuple[int, ...]]

    def accepts(self, value: int) -> bool:
        """Threshold test applied to a measured LCS value."""
        if self.mode == "or":
            return value == self.E
        return value >= self.E

    def manifest(self) -> dict:
        tab = self.tables
        return {
            "W": tab.W,
            "t": tab.t,
            "mode": self.mode,
            "Z": list(tab.Z),
            "Y": list(tab.Y),
            "E": self.E,
            "predicted": dict(self.predicted),
            "measured": dict(self.measured),
            "letters": {str(k): v for k, v in sorted(self.layout.alphabet.names.items())},
        }


def combine(bp: BranchingProgram, mode: str = "align",
            S1: Sequence[Sequence[int]] | None = None,
            S2: Sequence[Sequence[int]] | None = None) -> ReductionArtifact:
    """Glue all vector gadgets into one LCS instance with a satisfiability threshold."""
    if bp.n % 2:
        raise InputError(f"n must be even, got {bp.n}")
    if mode not in COMBINE_MODES:
        raise InputError(f"unknown combine mode {mode!r}; choose from {COMBINE_MODES}")
    half = bp.n // 2
    left = [tuple(a) for a in (S1 if S1 is not None else all_assignments(half))]
    right = [tuple(b) for b in (S2 if S2 is not None else all_assignments(half))]
    for h in left + right:
        if len(h) != half:
            raise InputError(f"half assignment {h} does not have length {half}")
    t = bp.t
    layout = LetterLayout(bp.W, t)
    tables = layout.tables
    Z, Yt = tables.Z[t], tables.Y[t]
    va = [PartyBuilder(bp, layout, 1, a).build(bp.start, bp.accept) for a in left]
    vb = [PartyBuilder(bp, layout, 2, b).build(bp.start, bp.accept) for b in right]
    alpha = layout.alphabet
    if mode == "or":
        A, B, E, predicted = _combine_or(va, vb, alpha, Z, Yt)
    else:
        A, B, E, predicted = _combine_align(va, vb, alpha, Z, Yt)
    measured = {
        "gadget": weight_of(va[0], alpha) if va else 0,
        "A": weight_of(A, alpha),
        "B": weight_of(B, alpha),
        "A_symbols": len(A),
        "B_symbols": len(B),
    }
    return ReductionArtifact(
        WeightedSequence(tuple(A), alpha), WeightedSequence(tuple(B), alpha), E, mode, tables,
        layout, predicted, measured, left, right,
    )


def _combine_or(va, vb, alpha, Z, Yt):
    p, q = len(va), len(vb)
    if not p or not q:
        return [], [], 1, {"gadget": Z, "A": 0, "B": 0}
    letters = max_letters(alpha, Z, "*")
    A = max_left(va, q, letters)
    B = max_right(vb, p, letters)
    E = max_base_score(p, q, letters) + Yt
    predicted = {"gadget": Z, "A": (4 * q + 2 * p) * Z + p * Z, "B": q * (2 + 4 * p) * Z + q * Z}
    return A, B, E, predicted


def _combine_align(va, vb, alpha, Z, Yt):
    """Window combination over normalized items.

    Every item is first wrapped in a two-by-two max gadget together with a dummy
    letter of weight ``Y_t - 1``, so that each pair scores ``Y_t - 1`` plus a
    constant unless it satisfies the program. The a-list is repeated so that
    every cyclic shift of it appears as a window against the b-list.
    """
    p, q = len(va), len(vb)
    if not p or not q:
        return [], [], 1, {"gadget": Z, "A": 0, "B": 0}
    dummy = [alpha.add("d", Yt - 1)] if Yt > 1 else []
    dlen = Yt - 1
    norm = max_letters(alpha, max(Z, dlen), "'")
    wn = norm.weight
    na = [max_left([v, dummy], 2, norm) for v in va]
    nb = [max_right([v, dummy], 2, norm) for v in vb]
    item_score = max_base_score(2, 2, norm)
    reps = max(2, -(-(p + q - 1) // p))
    long_items = na * reps
    la, lb = 12 * wn + Z + dlen, 20 * wn + Z + dlen
    unit = min(la, lb)
    registry = SeparatorRegistry(alpha)
    win = registry.window(("direct", len(long_items), q), unit, "window")
    A = window_long(long_items, win)
    B = window_short(nb, len(long_items), win)
    E = window_base_score(len(long_items), q, win) + q * item_score + (q - 1) * (Yt - 1) + Yt
    n_long = len(long_items)
    predicted = {
        "gadget": Z,
        "normalized_a": la,
        "normalized_b": lb,
        "separator_a": la - Z + 4 * unit,
        "A": n_long * (Z + (la - Z + 4 * unit)),
        "B": 2 * (n_long - q) * 2 * unit + q * (4 * unit + lb),
    }
    return A, B, E, predicted
