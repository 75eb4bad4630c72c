"""Separator gadgets over weighted alphabets shared by both reduction engines.

Two constructions live here.

The window gadget lines up a long list of items against a short one. Each long
item becomes ``A P item P`` and the short side is padded with ``n - m`` copies
of ``A`` on both ends, where ``A`` weighs ``2l`` and ``P`` weighs ``l`` and ``l``
is the smaller item length. Its LCS is ``K + s`` where ``s`` is at least the best
window sum of item scores and at most the best sum over any monotone partial
matching of items, with ``K = 2l(n + m)``.

The max gadget picks out the single best pair. With heavy letters ``f`` and ``g``
its LCS equals ``(2p + 2q) w + max s(x_i, y_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .errors import InputError
from .seq_measures import WeightedAlphabet


def weight_of(symbols: Sequence[int], alphabet: WeightedAlphabet) -> int:
    w = alphabet.weights
    return sum(w[s] for s in symbols)


def symbol_sum(symbols: Sequence[int], alphabet: WeightedAlphabet) -> int:
    """Sum of symbol ids over the expanded sequence."""
    w = alphabet.weights
    return sum(s * w[s] for s in symbols)


@dataclass(frozen=True)
class WindowLetters:
    A: int
    P: int
    unit: int


@dataclass
class SeparatorRegistry:
    """Hands out one pair of window letters per gadget signature.

    Both sides of one gadget ask with the same signature and so receive the same
    letters, while gadgets nested inside each other always differ in signature.
    """

    alphabet: WeightedAlphabet
    _pairs: dict[Hashable, WindowLetters] = field(default_factory=dict)

    def window(self, signature: Hashable, unit: int, label: str = "") -> WindowLetters:
        pair = self._pairs.get(signature)
        if pair is None:
            unit = max(1, unit)
            tag = f"[{label}]" if label else f"[{len(self._pairs)}]"
            A = self.alphabet.add(f"A{tag}", 2 * unit)
            P = self.alphabet.add(f"P{tag}", unit)
            pair = WindowLetters(A, P, unit)
            self._pairs[signature] = pair
        return pair

    def __len__(self) -> int:
        return len(self._pairs)


def window_long(items: Sequence[Sequence[int]], letters: WindowLetters) -> list[int]:
    out: list[int] = []
    for item in items:
        out.append(letters.A)
        out.append(letters.P)
        out.extend(item)
        out.append(letters.P)
    return out


def window_short(items: Sequence[Sequence[int]], n_long: int, letters: WindowLetters) -> list[int]:
    pad = n_long - len(items)
    if pad < 0:
        raise InputError(f"short side has {len(items)} items but the long side only {n_long}")
    out = [letters.A] * pad
    out.extend(window_long(items, letters))
    out.extend([letters.A] * pad)
    return out


def window_base_score(n_long: int, m_short: int, letters: WindowLetters) -> int:
    return 2 * letters.unit * (n_long + m_short)


@dataclass(frozen=True)
class MaxLetters:
    f: int
    g: int
    weight: int


def max_letters(alphabet: WeightedAlphabet, weight: int, label: str = "") -> MaxLetters:
    weight = max(1, weight)
    return MaxLetters(alphabet.add(f"f{label}", weight), alphabet.add(f"g{label}", weight), weight)


def max_left(items: Sequence[Sequence[int]], q: int, letters: MaxLetters) -> list[int]:
    """Left side: ``f^{2q} (g x_i g)_i f^{2q}``."""
    out = [letters.f] * (2 * q)
    for item in items:
        out.append(letters.g)
        out.extend(item)
        out.append(letters.g)
    out.extend([letters.f] * (2 * q))
    return out


def max_right(items: Sequence[Sequence[int]], p: int, letters: MaxLetters) -> list[int]:
    """Right side: ``(f g^{2p} y_j g^{2p} f)_j``."""
    out: list[int] = []
    for item in items:
        out.append(letters.f)
        out.extend([letters.g] * (2 * p))
        out.extend(item)
        out.extend([letters.g] * (2 * p))
        out.append(letters.f)
    return out


def max_base_score(p: int, q: int, letters: MaxLetters) -> int:
    return (2 * p + 2 * q) * letters.weight
