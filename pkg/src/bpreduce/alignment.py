"""Alignment-gadget framework and the reduction built on it.

Instances are sequences over a weighted alphabet whose expanded form is an
ordinary string; the measure is the LCS distance ``|x| + |y| - 2 lcs(x, y)``.
Every letter keeps one weight, so the weighted LCS of the compressed sequences
equals the LCS of their expansions and nothing is ever expanded.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from .bp_core import BranchingProgram, Node, all_assignments
from .errors import GuardRefusal, InputError
from .gadgets import (
    SeparatorRegistry,
    WindowLetters,
    symbol_sum,
    weight_of,
    window_base_score,
    window_long,
    window_short,
)
from .seq_measures import WeightedAlphabet, wlcs_raw

MAX_ENUM_N = 6


@dataclass(frozen=True, order=True)
class TypeTag:
    length: int
    sum: int


@dataclass(frozen=True, eq=False)
class GadgetInstance:
    payload: tuple[int, ...]
    alphabet: WeightedAlphabet
    tag: TypeTag = field(init=False)

    def __post_init__(self) -> None:
        tag = TypeTag(weight_of(self.payload, self.alphabet), symbol_sum(self.payload, self.alphabet))
        object.__setattr__(self, "tag", tag)

    def __len__(self) -> int:
        return self.tag.length

    def expand(self) -> list[int]:
        w = self.alphabet.weights
        return [s for s in self.payload for _ in range(w[s])]


@dataclass(frozen=True)
class AlignmentSpec:
    """Pairs (i, j), 1-based, of long-list item i with short-list item j."""

    pairs: tuple[tuple[int, int], ...]
    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < self.m:
            raise InputError(f"alignment needs n >= m, got n={self.n} m={self.m}")
        prev = (0, 0)
        for i, j in self.pairs:
            if not (prev[0] < i <= self.n and prev[1] < j <= self.m):
                raise InputError(f"pairs {self.pairs} are not strictly increasing within bounds")
            prev = (i, j)

    @property
    def structured(self) -> bool:
        if len(self.pairs) != self.m:
            return False
        if self.m == 0:
            return True
        delta = self.pairs[0][0] - 1
        return all(i == delta + j for i, j in self.pairs)


def enumerate_alignments(n: int, m: int, max_n: int = MAX_ENUM_N) -> list[AlignmentSpec]:
    if n < m or m < 0:
        raise InputError(f"need n >= m >= 0, got n={n} m={m}")
    if n > max_n:
        raise GuardRefusal(f"enumerating alignments for n={n} exceeds the guard n <= {max_n}")
    out = []
    for k in range(m + 1):
        for left in itertools.combinations(range(1, n + 1), k):
            for right in itertools.combinations(range(1, m + 1), k):
                out.append(AlignmentSpec(tuple(zip(left, right)), n, m))
    return out


def structured_alignments(n: int, m: int) -> list[AlignmentSpec]:
    if n < m or m < 0:
        raise InputError(f"need n >= m >= 0, got n={n} m={m}")
    return [AlignmentSpec(tuple((d + j, j) for j in range(1, m + 1)), n, m) for d in range(n - m + 1)]


def cost_from_matrix(A: AlignmentSpec, D: Sequence[Sequence[int]]) -> int:
    """Cost with ``D[i][j]`` the distance of long item i and short item j (0-based)."""
    if A.m == 0:
        return 0
    Q = max(max(row) for row in D)
    return sum(D[i - 1][j - 1] for i, j in A.pairs) + (A.m - len(A.pairs)) * Q


def min_cost_dp(D: Sequence[Sequence[int]]) -> int:
    """Least alignment cost over all partial alignments, by dynamic programming."""
    n = len(D)
    m = len(D[0]) if n else 0
    if m == 0:
        return 0
    Q = max(max(row) for row in D)
    best = [[0] * (m + 1) for _ in range(n + 1)]
    for j in range(1, m + 1):
        best[0][j] = best[0][j - 1] + Q
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            best[i][j] = min(best[i - 1][j], best[i][j - 1] + Q, best[i - 1][j - 1] + D[i - 1][j - 1])
    return int(best[n][m])


class Session:
    """Symbol allocation context for one construction.

    Holds the alphabet, the coordinate-value letters and the separator registry.
    Not shared across threads; independent sessions are independent.
    """

    def __init__(self) -> None:
        self.alphabet = WeightedAlphabet()
        base = [self.alphabet.add(f"c{i}", 1) for i in range(4)]
        s = base[0]
        self.one_x = GadgetInstance((s + 1, s + 1), self.alphabet)
        self.zero_x = GadgetInstance((s, s + 2), self.alphabet)
        self.one_y = GadgetInstance((s, s + 3), self.alphabet)
        self.zero_y = GadgetInstance((s + 1, s + 2), self.alphabet)
        self.registry = SeparatorRegistry(self.alphabet)
        self.max_ratio = 0.0
        self.max_or_ratio = 0.0
        self.invocations = 0

    def note_or(self, out: "GadgetInstance", n: int, tx: "TypeTag", ty: "TypeTag") -> None:
        self.max_or_ratio = max(self.max_or_ratio, out.tag.length / (n * n * (tx.length + ty.length)))

    def delta(self, x: GadgetInstance, y: GadgetInstance) -> int:
        return x.tag.length + y.tag.length - 2 * wlcs_raw(x.payload, y.payload, self.alphabet.weights)


def _check_types(items: Sequence[GadgetInstance], what: str) -> TypeTag | None:
    tags = {it.tag for it in items}
    if len(tags) > 1:
        raise InputError(f"{what} items have mixed types {sorted(tags)}")
    return tags.pop() if tags else None


@dataclass
class WindowBuilder:
    """Alignment gadgets for the LCS distance with registry-shared window letters."""

    session: Session
    pad: bool = True

    def _letters(self, nx: int, ny: int, tx: TypeTag, ty: TypeTag) -> WindowLetters:
        sig = ("window", nx, ny, tx, ty)
        return self.session.registry.window(sig, min(tx.length, ty.length))

    def build_x(self, xs: Sequence[GadgetInstance], ny: int, ty: TypeTag) -> GadgetInstance:
        tx = _check_types(xs, "X") or ty
        return self._build(xs, len(xs), ny, tx, ty, own_x=True)

    def build_y(self, ys: Sequence[GadgetInstance], nx: int, tx: TypeTag) -> GadgetInstance:
        ty = _check_types(ys, "Y") or tx
        return self._build(ys, nx, len(ys), tx, ty, own_x=False)

    def _build(self, items, nx, ny, tx, ty, own_x: bool) -> GadgetInstance:
        letters = self._letters(nx, ny, tx, ty)
        own, other = (nx, ny) if own_x else (ny, nx)
        payloads = [it.payload for it in items]
        if own >= other or not self.pad:
            seq = window_long(payloads, letters)
        else:
            seq = window_short(payloads, other, letters)
        out = GadgetInstance(tuple(seq), self.session.alphabet)
        s = self.session
        s.invocations += 1
        s.max_ratio = max(s.max_ratio, out.tag.length / (max(nx, ny, 1) * (tx.length + ty.length)))
        return out

    def offset(self, nx: int, ny: int, tx: TypeTag, ty: TypeTag) -> int:
        """The constant C with delta(x, y) - C bracketed by the alignment costs."""
        letters = self._letters(nx, ny, tx, ty)
        n, m = max(nx, ny), min(nx, ny)
        lx, ly = self.predict_types(nx, ny, tx, ty)
        K = window_base_score(n, m, letters)
        return lx.length + ly.length - 2 * K - m * (tx.length + ty.length)

    def predict_types(self, nx: int, ny: int, tx: TypeTag, ty: TypeTag) -> tuple[TypeTag, TypeTag]:
        letters = self._letters(nx, ny, tx, ty)
        w = self.session.alphabet.weights
        unit_len = w[letters.A] + 2 * w[letters.P]
        unit_sum = letters.A * w[letters.A] + 2 * letters.P * w[letters.P]

        def side(count: int, other: int, tag: TypeTag) -> TypeTag:
            pad = max(0, other - count) * 2
            return TypeTag(
                count * (unit_len + tag.length) + pad * w[letters.A],
                count * (unit_sum + tag.sum) + pad * letters.A * w[letters.A],
            )

        return side(nx, ny, tx), side(ny, nx, ty)


@dataclass
class MeasureBinding:
    """A similarity measure with coordinate values and an alignment-gadget builder."""

    session: Session
    builder: WindowBuilder
    size_constant: int = 4

    @property
    def zero_x(self) -> GadgetInstance:
        return self.session.zero_x

    @property
    def one_x(self) -> GadgetInstance:
        return self.session.one_x

    @property
    def zero_y(self) -> GadgetInstance:
        return self.session.zero_y

    @property
    def one_y(self) -> GadgetInstance:
        return self.session.one_y

    def delta(self, x: GadgetInstance, y: GadgetInstance) -> int:
        return self.session.delta(x, y)

    @property
    def rho_T(self) -> int:
        return self.delta(self.zero_x, self.zero_y)

    @property
    def rho_F(self) -> int:
        return self.delta(self.one_x, self.one_y)

    def cv_x(self, bit: int) -> GadgetInstance:
        return self.one_x if bit else self.zero_x

    def cv_y(self, bit: int) -> GadgetInstance:
        return self.one_y if bit else self.zero_y

    def ga_x(self, xs: Sequence[GadgetInstance], ny: int, ty: TypeTag) -> GadgetInstance:
        return self.builder.build_x(xs, ny, ty)

    def ga_y(self, ys: Sequence[GadgetInstance], nx: int, tx: TypeTag) -> GadgetInstance:
        return self.builder.build_y(ys, nx, tx)

    def offset(self, nx: int, ny: int, tx: TypeTag, ty: TypeTag) -> int:
        return self.builder.offset(nx, ny, tx, ty)

    @property
    def realized_c(self) -> float:
        """Smallest c with every gadget within c n (lx + ly) and every OR within c^2 n^2 (lx + ly)."""
        return max(self.session.max_ratio, math.sqrt(self.session.max_or_ratio))


def lcs_measure_binding(W: int = 2, T: int = 3) -> MeasureBinding:
    """Fresh LCS-distance binding; W and T only label the session."""
    session = Session()
    return MeasureBinding(session, WindowBuilder(session))


@dataclass
class ConformanceReport:
    C: int
    delta: int
    min_all: int
    min_structured: int
    bracket_ok: bool
    types_ok: bool
    size_ok: bool
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def distance_matrix(binding: MeasureBinding, longs: Sequence[GadgetInstance], shorts: Sequence[GadgetInstance],
                    long_is_x: bool) -> list[list[int]]:
    if long_is_x:
        return [[binding.delta(a, b) for b in shorts] for a in longs]
    return [[binding.delta(b, a) for b in shorts] for a in longs]


def check_alignment_gadget(binding: MeasureBinding, xs: Sequence[GadgetInstance],
                           ys: Sequence[GadgetInstance]) -> ConformanceReport:
    """Verify the bracket, type determinism and size bound for one pair of lists."""
    tx, ty = _check_types(xs, "X"), _check_types(ys, "Y")
    if tx is None or ty is None:
        raise InputError("conformance check needs nonempty lists")
    x = binding.ga_x(xs, len(ys), ty)
    y = binding.ga_y(ys, len(xs), tx)
    C = binding.offset(len(xs), len(ys), tx, ty)
    d = binding.delta(x, y)
    long_is_x = len(xs) >= len(ys)
    longs, shorts = (xs, ys) if long_is_x else (ys, xs)
    D = distance_matrix(binding, longs, shorts, long_is_x)
    n, m = len(longs), len(shorts)
    min_all = min(cost_from_matrix(A, D) for A in enumerate_alignments(n, m))
    min_struct = min(cost_from_matrix(A, D) for A in structured_alignments(n, m))
    violations = []
    bracket_ok = min_all <= d - C <= min_struct
    if not bracket_ok:
        violations.append(f"bracket fails: {min_all} <= {d - C} <= {min_struct}")
    px, py = binding.builder.predict_types(len(xs), len(ys), tx, ty)
    types_ok = x.tag == px and y.tag == py
    if not types_ok:
        violations.append(f"types {x.tag}, {y.tag} differ from the predicted {px}, {py}")
    bound = binding.size_constant * max(n, 1) * (tx.length + ty.length)
    size_ok = x.tag.length <= bound and y.tag.length <= bound
    if not size_ok:
        violations.append(f"lengths {x.tag.length}, {y.tag.length} exceed {bound}")
    return ConformanceReport(C, d, min_all, min_struct, bracket_ok, types_ok, size_ok, violations)


@dataclass(frozen=True)
class OrShape:
    n: int
    tx: TypeTag
    ty: TypeTag
    inner_x: TypeTag
    inner_y: TypeTag
    C: int


def or_shape(binding: MeasureBinding, n: int, tx: TypeTag, ty: TypeTag) -> OrShape:
    inner_x, inner_y = binding.builder.predict_types(n, 1, tx, ty)
    C = binding.offset(n, 1, tx, ty) + binding.offset(1, n, inner_x, inner_y)
    return OrShape(n, tx, ty, inner_x, inner_y, C)


def or_x(binding: MeasureBinding, xs: Sequence[GadgetInstance], ty: TypeTag) -> GadgetInstance:
    tx = _check_types(xs, "X")
    shape = or_shape(binding, len(xs), tx, ty)
    inner = binding.ga_x(xs, 1, ty)
    out = binding.ga_x([inner], len(xs), shape.inner_y)
    binding.session.note_or(out, len(xs), tx, ty)
    return out


def or_y(binding: MeasureBinding, ys: Sequence[GadgetInstance], tx: TypeTag) -> GadgetInstance:
    ty = _check_types(ys, "Y")
    shape = or_shape(binding, len(ys), tx, ty)
    inner = [binding.ga_y([y], len(ys), tx) for y in ys]
    out = binding.ga_y(inner, 1, shape.inner_x)
    binding.session.note_or(out, len(ys), tx, ty)
    return out


def or_gadget(binding: MeasureBinding, xs: Sequence[GadgetInstance],
              ys: Sequence[GadgetInstance]) -> tuple[GadgetInstance, GadgetInstance, int]:
    """Instances x, y and constant C with delta(x, y) = C + min over pairs."""
    if len(xs) != len(ys) or not xs:
        raise InputError(f"OR gadgets need two nonempty lists of equal length, got {len(xs)} and {len(ys)}")
    tx, ty = _check_types(xs, "X"), _check_types(ys, "Y")
    shape = or_shape(binding, len(xs), tx, ty)
    return or_x(binding, xs, ty), or_y(binding, ys, tx), shape.C


def _bits(z: int, w: int) -> list[int]:
    """Binary expansion of z - 1 in w bits, most significant first."""
    return [((z - 1) >> (w - 1 - i)) & 1 for i in range(w)]


def width_bits(W: int) -> int:
    return max(1, (W - 1).bit_length())


def eg_gadget(binding: MeasureBinding, w: int, bit: int, side: str) -> GadgetInstance:
    """Edge gadgets: X(0) = (0..0,1,0), X(1) = (1..1,1,0), Y(0) = (0..0,0,1), Y(1) = (1..1,0,1)."""
    side = side.upper()
    count = 2 * w + 2
    if side == "X":
        items = [binding.cv_x(bit)] * (2 * w) + [binding.one_x, binding.zero_x]
        return binding.ga_x(items, count, binding.one_y.tag)
    if side == "Y":
        items = [binding.cv_y(bit)] * (2 * w) + [binding.zero_y, binding.one_y]
        return binding.ga_y(items, count, binding.one_x.tag)
    raise InputError(f"unknown side {side!r}")


def ig1_gadget(binding: MeasureBinding, z: int, side: str, w: int) -> GadgetInstance:
    """Index gadget for node z at the base level."""
    if not 1 <= z <= 2**w:
        raise InputError(f"node index {z} outside [1, {2**w}]")
    bits = _bits(z, w)
    side = side.upper()
    count = 2 * w + 2
    if side == "X":
        items = [binding.cv_x(b) for b in bits] + [binding.cv_x(1 - b) for b in bits]
        items += [binding.zero_x, binding.one_x]
        return binding.ga_x(items, count, binding.one_y.tag)
    if side == "Y":
        items = [binding.cv_y(1 - b) for b in bits] + [binding.cv_y(b) for b in bits]
        items += [binding.one_y, binding.zero_y]
        return binding.ga_y(items, count, binding.one_x.tag)
    raise InputError(f"unknown side {side!r}")


def base_normalizers(binding: MeasureBinding, w: int) -> tuple[GadgetInstance, GadgetInstance]:
    count = 2 * w + 2
    S = binding.ga_x([binding.zero_x] * (2 * w) + [binding.one_x, binding.one_x], count, binding.one_y.tag)
    T = binding.ga_x([binding.zero_x] * count, count, binding.one_y.tag)
    return S, T


@dataclass
class LevelConstants:
    w: int
    W: int
    rho_T: int
    rho_F: int
    C1: int
    C_path: list[int]
    C_or: list[int]
    rho: list[int]
    tau_x: list[TypeTag]
    tau_y: list[TypeTag]

    @property
    def gap(self) -> int:
        return self.rho_F - self.rho_T


class FrameworkBuilder:
    """All reduction gadgets for one program inside one session.

    Level k gadgets span layer distance 2^k; level 0 uses the edge gadgets.
    Node indices run over 1..2^w with w = ceil(log2 W); padded nodes have no edges.
    """

    def __init__(self, binding: MeasureBinding, bp: BranchingProgram):
        if bp.n % 2:
            raise InputError(f"n must be even, got {bp.n}")
        self.binding = binding
        self.bp = bp
        self.t = bp.t
        self.w = width_bits(bp.W)
        self.nodes = 2**self.w
        self._rg: dict[tuple, GadgetInstance] = {}
        self._ig: dict[tuple, GadgetInstance] = {}
        self._st: dict[int, tuple[GadgetInstance, GadgetInstance]] = {}
        self.constants = self._constants()

    def _constants(self) -> LevelConstants:
        b = self.binding
        w = self.w
        count = 2 * w + 2
        rho_T, rho_F = b.rho_T, b.rho_F
        C1 = b.offset(count, count, b.one_x.tag, b.one_y.tag)
        tx, ty = b.builder.predict_types(count, count, b.one_x.tag, b.one_y.tag)
        rho = [C1 + count * rho_T]
        tau_x, tau_y = [tx], [ty]
        C_path, C_or = [0], [0]
        for _ in range(1, self.t + 1):
            cp = b.offset(3, 3, tx, ty)
            px, py = b.builder.predict_types(3, 3, tx, ty)
            shape = or_shape(b, self.nodes, px, py)
            ox = b.builder.predict_types(1, self.nodes, shape.inner_x, shape.inner_y)
            tx, ty = ox
            C_path.append(cp)
            C_or.append(shape.C)
            rho.append(shape.C + cp + 3 * rho[-1])
            tau_x.append(tx)
            tau_y.append(ty)
        return LevelConstants(w, self.bp.W, rho_T, rho_F, C1, C_path, C_or, rho, tau_x, tau_y)

    def index_gadget(self, z: int, side: str, k: int) -> GadgetInstance:
        key = (z, side, k)
        hit = self._ig.get(key)
        if hit is not None:
            return hit
        b = self.binding
        if k == 0:
            out = ig1_gadget(b, z, side, self.w)
        else:
            prev = self.index_gadget(z, side, k - 1)
            out = self._or_level(side, k, [[prev, prev, prev]] * self.nodes)
        self._ig[key] = out
        return out

    def _triple(self, side: str, k: int, items: list[GadgetInstance]) -> GadgetInstance:
        c = self.constants
        if side == "X":
            return self.binding.ga_x(items, 3, c.tau_y[k - 1])
        return self.binding.ga_y(items, 3, c.tau_x[k - 1])

    def _or_level(self, side: str, k: int, triples: list[list[GadgetInstance]]) -> GadgetInstance:
        b = self.binding
        c = self.constants
        items = [self._triple(side, k, t) for t in triples]
        px, py = b.builder.predict_types(3, 3, c.tau_x[k - 1], c.tau_y[k - 1])
        if side == "X":
            return or_x(b, items, py)
        return or_y(b, items, px)

    def edge_gadget(self, side: str, half: Sequence[int], u: Node, v: Node) -> GadgetInstance:
        bp = self.bp
        var = bp.layer_var[u[0] - 1]
        owner = bp.owner(var)
        me = 0 if side == "X" else 1
        if owner != me:
            return eg_gadget(self.binding, self.w, 1, side)
        bit = half[(var - 1) - me * (bp.n // 2)]
        present = (u[0], u[1], v[1], bit) in bp.edges
        return eg_gadget(self.binding, self.w, 0 if present else 1, side)

    def reachability(self, side: str, half: Sequence[int], u: Node, v: Node) -> GadgetInstance:
        side = side.upper()
        key = (side, tuple(half), u, v)
        hit = self._rg.get(key)
        if hit is not None:
            return hit
        d = v[0] - u[0]
        if d < 1 or d & (d - 1):
            raise InputError(f"layer distance {d} is not a power of two")
        k = d.bit_length() - 1
        if k == 0:
            out = self.edge_gadget(side, half, u, v)
        else:
            h = u[0] + d // 2
            triples = [
                [self.reachability(side, half, u, (h, z)),
                 self.reachability(side, half, (h, z), v),
                 self.index_gadget(z, side, k - 1)]
                for z in range(1, self.nodes + 1)
            ]
            out = self._or_level(side, k, triples)
        self._rg[key] = out
        return out

    def normalizers(self, k: int) -> tuple[GadgetInstance, GadgetInstance]:
        hit = self._st.get(k)
        if hit is not None:
            return hit
        if k == 0:
            out = base_normalizers(self.binding, self.w)
        else:
            S, T = self.normalizers(k - 1)
            s_triples = [[T, S, self.index_gadget(z, "X", k - 1)] for z in range(1, self.nodes + 1)]
            t_triples = [[T, T, self.index_gadget(z, "X", k - 1)] for z in range(1, self.nodes + 1)]
            out = (self._or_level("X", k, s_triples), self._or_level("X", k, t_triples))
        self._st[k] = out
        return out

    def nvg_x(self, a: Sequence[int]) -> GadgetInstance:
        c = self.constants
        S, _ = self.normalizers(self.t)
        rg = self.reachability("X", a, self.bp.start, self.bp.accept)
        return self.binding.ga_x([S, rg], 1, c.tau_y[self.t])

    def nvg_y(self, b: Sequence[int]) -> GadgetInstance:
        c = self.constants
        rg = self.reachability("Y", b, self.bp.start, self.bp.accept)
        return self.binding.ga_y([rg], 2, c.tau_x[self.t])

    def nvg_offset(self) -> int:
        c = self.constants
        return self.binding.offset(2, 1, c.tau_x[self.t], c.tau_y[self.t])


def rg_framework(binding: MeasureBinding, bp: BranchingProgram, side: str, half: Sequence[int],
                 u: Node, v: Node, k: int, builder: FrameworkBuilder | None = None) -> GadgetInstance:
    if v[0] - u[0] != 2**k:
        raise InputError(f"nodes {u} and {v} are not at layer distance 2^{k}")
    builder = builder or FrameworkBuilder(binding, bp)
    return builder.reachability(side, half, u, v)


def normalizers(binding: MeasureBinding, bp: BranchingProgram, k: int,
                builder: FrameworkBuilder | None = None) -> tuple[GadgetInstance, GadgetInstance]:
    builder = builder or FrameworkBuilder(binding, bp)
    return builder.normalizers(k)


def nvg(binding: MeasureBinding, bp: BranchingProgram, half: Sequence[int], side: str,
        builder: FrameworkBuilder | None = None) -> GadgetInstance:
    builder = builder or FrameworkBuilder(binding, bp)
    return builder.nvg_x(half) if side.upper() == "X" else builder.nvg_y(half)


@dataclass
class FrameworkArtifact:
    x: GadgetInstance
    y: GadgetInstance
    threshold: int
    unsat_value: int
    C_star: int
    C_nvg: int
    constants: LevelConstants
    realized_c: float
    level_lengths: list[tuple[int, int]]
    n_long: int

    def size_report(self) -> dict:
        """Lengths against ``L_k <= (12 W^2 c^3)^k L_0`` and the matching bound for x and y."""
        c = self.realized_c
        W = 2**self.constants.w
        base = 12 * W * W * c**3
        L = [lx + ly for lx, ly in self.level_lengths]
        levels = [{"k": k, "length": Lk, "bound": base**k * L[0], "ok": Lk <= base**k * L[0]}
                  for k, Lk in enumerate(L)]
        t = len(L) - 1
        final_bound = 4 * c * c * self.n_long * base**t * L[0]
        longest = max(self.x.tag.length, self.y.tag.length)
        return {
            "realized_c": c,
            "growth_base": base,
            "exponent": math.log2(base),
            "levels": levels,
            "final_length": longest,
            "final_bound": final_bound,
            "ok": all(lv["ok"] for lv in levels) and longest <= final_bound,
        }

    @property
    def gap(self) -> int:
        return self.unsat_value - self.threshold

    def accepts(self, value: int) -> bool:
        return value <= self.threshold

    def manifest(self) -> dict:
        c = self.constants
        return {
            "rho_T": c.rho_T,
            "rho_F": c.rho_F,
            "rho": list(c.rho),
            "C1": c.C1,
            "C_path": list(c.C_path),
            "C_or": list(c.C_or),
            "C": self.C_nvg,
            "C_star": self.C_star,
            "threshold": self.threshold,
            "unsat_value": self.unsat_value,
            "realized_c": self.realized_c,
            "level_lengths": [list(p) for p in self.level_lengths],
            "size": self.size_report(),
            "x_length": self.x.tag.length,
            "y_length": self.y.tag.length,
        }


def final_sequences(binding: MeasureBinding, bp: BranchingProgram,
                    S1: Sequence[Sequence[int]] | None = None,
                    S2: Sequence[Sequence[int]] | None = None) -> FrameworkArtifact:
    """Instances x, y with delta(x, y) <= threshold iff some pair satisfies the program."""
    fb = FrameworkBuilder(binding, bp)
    half = bp.n // 2
    left = [tuple(a) for a in (S1 if S1 is not None else all_assignments(half))]
    right = [tuple(b) for b in (S2 if S2 is not None else all_assignments(half))]
    if not left or not right:
        raise InputError("final sequences need nonempty assignment lists")
    c = fb.constants
    xs = [fb.nvg_x(a) for a in left]
    ys = [fb.nvg_y(b) for b in right]
    reps = max(2, -(-(len(left) + len(right) - 1) // len(left)))
    long_list = xs * reps
    tx, ty = xs[0].tag, ys[0].tag
    x = binding.ga_x(long_list, len(ys), ty)
    y = binding.ga_y(ys, len(long_list), tx)
    C_star = binding.offset(len(long_list), len(ys), tx, ty)
    C = fb.nvg_offset()
    rt = c.rho[fb.t]
    q = len(ys)
    threshold = C_star + (q - 1) * (C + rt + c.gap) + (C + rt)
    unsat = C_star + q * (C + rt + c.gap)
    lengths = [(tx_.length, ty_.length) for tx_, ty_ in zip(c.tau_x, c.tau_y)]
    return FrameworkArtifact(x, y, threshold, unsat, C_star, C, c, binding.realized_c, lengths, len(long_list))
