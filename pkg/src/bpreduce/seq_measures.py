"""Exact solvers for LCS, weighted LCS, k-LCS and edit distance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import GuardRefusal, InputError, ParseError

DEFAULT_MAX_EXPAND = 10**7
DEFAULT_MAX_CELLS = 10**7
_INT64_SAFE = 2**62


@dataclass(eq=False)
class WeightedAlphabet:
    """Append-only map from integer symbol ids to positive weights.

    Construction code allocates fresh symbols with ``add``; existing weights
    never change, so sequences built earlier stay valid.
    """

    weights: dict[int, int] = field(default_factory=dict)
    names: dict[int, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for sym, w in self.weights.items():
            if not isinstance(w, int) or w < 1:
                raise InputError(f"symbol {sym} has weight {w}; weights must be positive integers")

    @classmethod
    def uniform(cls, symbols: Iterable[int]) -> "WeightedAlphabet":
        return cls({s: 1 for s in symbols})

    def add(self, name: str, weight: int) -> int:
        if not isinstance(weight, int) or weight < 1:
            raise InputError(f"weight {weight} for {name!r} must be a positive integer")
        sym = len(self.weights)
        while sym in self.weights:
            sym += 1
        self.weights[sym] = weight
        self.names[sym] = name
        return sym

    def weight(self, sym: int) -> int:
        try:
            return self.weights[sym]
        except KeyError:
            raise InputError(f"symbol {sym} is not in the alphabet") from None

    @property
    def K(self) -> int:
        return max(self.weights.values(), default=0)

    def __len__(self) -> int:
        return len(self.weights)


@dataclass(frozen=True, eq=False)
class WeightedSequence:
    symbols: tuple[int, ...]
    alphabet: WeightedAlphabet

    def __post_init__(self) -> None:
        missing = set(self.symbols) - self.alphabet.weights.keys()
        if missing:
            raise InputError(f"symbols {sorted(missing)[:5]} are not in the alphabet")

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedSequence):
            return NotImplemented
        if self.symbols != other.symbols:
            return False
        return all(self.alphabet.weights[s] == other.alphabet.weights[s] for s in set(self.symbols))

    __hash__ = None  # type: ignore[assignment]


def total_length(P: WeightedSequence) -> int:
    w = P.alphabet.weights
    return sum(w[s] for s in P.symbols)


def unweight(P: WeightedSequence, max_expand: int = DEFAULT_MAX_EXPAND) -> list[int]:
    """Replace every symbol by weight-many consecutive copies."""
    size = total_length(P)
    if size > max_expand:
        raise GuardRefusal(f"expanded length {size} exceeds the cap {max_expand}")
    w = P.alphabet.weights
    out: list[int] = []
    for s in P.symbols:
        out.extend([s] * w[s])
    return out


def _as_codes(x: Sequence[Hashable], y: Sequence[Hashable]) -> tuple[list[int], list[int]]:
    codes: dict[Hashable, int] = {}
    cx = [codes.setdefault(s, len(codes)) for s in x]
    cy = [codes.setdefault(s, len(codes)) for s in y]
    return cx, cy


def lcs(x: Sequence[Hashable], y: Sequence[Hashable]) -> int:
    """LCS length, evaluating the quadratic recurrence one column at a time in bit-parallel form."""
    if len(x) < len(y):
        x, y = y, x
    if not y:
        return 0
    masks: dict[Hashable, int] = {}
    for i, s in enumerate(x):
        masks[s] = masks.get(s, 0) | (1 << i)
    full = (1 << len(x)) - 1
    v = full
    for s in y:
        m = masks.get(s)
        if m is None:
            continue
        u = v & m
        v = ((v + u) | (v - u)) & full
    return len(x) - bin(v).count("1")


def _check_shared(P1: WeightedSequence, P2: WeightedSequence) -> dict[int, int]:
    w1, w2 = P1.alphabet.weights, P2.alphabet.weights
    if P1.alphabet is P2.alphabet:
        return w1
    for s in set(P1.symbols) & set(P2.symbols):
        if w1[s] != w2[s]:
            raise InputError(f"symbol {s} has weight {w1[s]} in one alphabet and {w2[s]} in the other")
    return {**w2, **w1}


def wlcs_raw(a: Sequence[int], b: Sequence[int], weights: Mapping[int, int]) -> int:
    """Weighted LCS of two id lists under one weight map.

    Row update: a match at (i, j) adds w(a_i) to cell (i-1, j-1); the row is then
    closed under the max from the left by a running maximum.
    """
    if not a or not b:
        return 0
    if len(a) > len(b):
        a, b = b, a
    budget = min(sum(weights[s] for s in a), sum(weights[s] for s in b))
    if budget >= _INT64_SAFE:
        return _wlcs_object(a, b, weights)
    bv = np.asarray(b, dtype=np.int64)
    common = set(a) & set(b)
    prev = np.zeros(len(b) + 1, dtype=np.int64)
    cur = np.empty_like(prev)
    cand = np.empty(len(b), dtype=np.int64)
    for s in a:
        if s not in common:
            continue
        np.multiply(bv == s, weights[s], out=cand)
        cand += prev[:-1]
        cur[0] = 0
        np.maximum(prev[1:], cand, out=cur[1:])
        np.maximum.accumulate(cur, out=cur)
        prev, cur = cur, prev
    return int(prev[-1])


def _wlcs_object(a: Sequence[int], b: Sequence[int], weights: Mapping[int, int]) -> int:
    prev = [0] * (len(b) + 1)
    for s in a:
        w = weights[s]
        cur = [0] * (len(b) + 1)
        best = 0
        for j, t in enumerate(b, start=1):
            v = prev[j]
            if t == s and prev[j - 1] + w > v:
                v = prev[j - 1] + w
            if v < best:
                v = best
            cur[j] = best = v
        prev = cur
    return prev[-1]


def wlcs(P1: WeightedSequence, P2: WeightedSequence) -> int:
    weights = _check_shared(P1, P2)
    return wlcs_raw(P1.symbols, P2.symbols, weights)


def k_lcs(
    seqs: Sequence[Sequence[int]],
    weights: Mapping[int, int] | None = None,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> int:
    """Longest (optionally weighted) common subsequence of K >= 2 sequences."""
    if len(seqs) < 2:
        raise InputError(f"k_lcs needs at least two sequences, got {len(seqs)}")
    cells = math.prod(len(s) for s in seqs)
    if cells > max_cells:
        raise GuardRefusal(f"{cells} table cells exceed the guard {max_cells}")
    if any(len(s) == 0 for s in seqs):
        return 0
    if weights is None:
        weights = {s: 1 for seq in seqs for s in seq}
    first, rest = seqs[0], [np.asarray(s, dtype=np.int64) for s in seqs[1:]]
    shape = tuple(len(s) + 1 for s in rest)
    prev = np.zeros(shape, dtype=np.int64)
    inner = tuple(slice(1, None) for _ in rest)
    lower = tuple(slice(None, -1) for _ in rest)
    for sym in first:
        match = np.ones(tuple(len(s) for s in rest), dtype=bool)
        for axis, arr in enumerate(rest):
            view = [1] * len(rest)
            view[axis] = len(arr)
            match = match & (arr == sym).reshape(view)
        cur = prev.copy()
        cur[inner] = np.maximum(prev[inner], prev[lower] + match * weights[sym])
        for axis in range(len(rest)):
            np.maximum.accumulate(cur, axis=axis, out=cur)
        prev = cur
    return int(prev[(-1,) * len(rest)])


def edit_distance(x: Sequence[Hashable], y: Sequence[Hashable], substitutions: bool = True) -> int:
    """Minimum number of edits turning x into y.

    With ``substitutions=False`` only insertions and deletions are allowed.
    """
    cx, cy = _as_codes(x, y)
    if not cx:
        return len(cy)
    yv = np.asarray(cy, dtype=np.int64)
    prev = np.arange(len(cy) + 1, dtype=np.int64)
    sub_cost = 1 if substitutions else 2
    offsets = np.arange(len(cy) + 1, dtype=np.int64)
    for i, s in enumerate(cx, start=1):
        diag = prev[:-1] + np.where(yv == s, 0, sub_cost)
        col = np.empty_like(prev)
        col[0] = i
        col[1:] = np.minimum(prev[1:] + 1, diag)
        # insertions propagate left to right: col[j] = min_k (col[k] + j - k)
        col = np.minimum.accumulate(col - offsets) + offsets
        prev = col
    return int(prev[-1])


def format_sequence_file(P: WeightedSequence, weighted: bool = True, per_line: int = 32) -> str:
    syms = sorted(set(P.symbols))
    lines = [f"alphabet {len(syms)}"]
    for s in syms:
        lines.append(f"sym {s} weight {P.alphabet.weights[s]}" if weighted else f"sym {s}")
    lines.append("seq")
    ids = P.symbols
    for k in range(0, len(ids), per_line):
        lines.append(" ".join(str(s) for s in ids[k : k + per_line]))
    return "\n".join(lines) + "\n"


def parse_sequence_file(text: str) -> WeightedSequence:
    weights: dict[int, int] = {}
    declared = None
    symbols: list[int] = []
    in_body = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if in_body:
            try:
                symbols.extend(int(tok) for tok in tokens)
            except ValueError:
                raise ParseError(f"non-integer symbol in {line!r}", line=lineno) from None
            continue
        if tokens[0] == "alphabet" and len(tokens) == 2 and declared is None:
            try:
                declared = int(tokens[1])
            except ValueError:
                raise ParseError("alphabet count must be an integer", line=lineno) from None
        elif tokens[0] == "sym" and len(tokens) in (2, 4):
            if declared is None:
                raise ParseError("'sym' before 'alphabet' header", line=lineno)
            if len(tokens) == 4 and tokens[2] != "weight":
                raise ParseError("expected 'sym <id> weight <w>'", line=lineno)
            try:
                sym = int(tokens[1])
                w = int(tokens[3]) if len(tokens) == 4 else 1
            except ValueError:
                raise ParseError("symbol id and weight must be integers", line=lineno) from None
            if w < 1:
                raise ParseError(f"weight {w} must be positive", line=lineno)
            if sym in weights:
                raise ParseError(f"symbol {sym} declared twice", line=lineno)
            weights[sym] = w
        elif tokens == ["seq"]:
            in_body = True
        else:
            raise ParseError(f"unexpected line {line!r}", line=lineno)
    if declared is None or not in_body:
        raise ParseError("sequence file needs an 'alphabet' header and a 'seq' body")
    if declared != len(weights):
        raise ParseError(f"alphabet declares {declared} symbols but lists {len(weights)}")
    unknown = sorted(set(symbols) - weights.keys())
    if unknown:
        raise ParseError(f"body uses undeclared symbols {unknown[:5]}")
    return WeightedSequence(tuple(symbols), WeightedAlphabet(weights))
