"""Compile fan-in-2 formulas into width-5 branching programs.

A formula is turned into a sequence of instructions ``(var, p0, p1)`` over
permutations of five points whose composition is a fixed 5-cycle when the
formula is true and the identity otherwise. AND is the commutator of its two
children, NOT flips the target cycle and multiplies by it, and OR goes through
De Morgan. Following the image of point 0 layer by layer turns the instruction
list into a layered program.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .bp_core import BranchingProgram
from .errors import InputError, ParseError

Perm = tuple[int, ...]
IDENTITY: Perm = (0, 1, 2, 3, 4)
SIGMA: Perm = (1, 2, 3, 4, 0)


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


Formula = Union[Var, Const, Not, And, Or]


def formula_depth(f: Formula) -> int:
    if isinstance(f, (Var, Const)):
        return 0
    if isinstance(f, Not):
        return 1 + formula_depth(f.child)
    return 1 + max(formula_depth(f.left), formula_depth(f.right))


def max_var(f: Formula) -> int:
    if isinstance(f, Var):
        return f.index
    if isinstance(f, Const):
        return 0
    if isinstance(f, Not):
        return max_var(f.child)
    return max(max_var(f.left), max_var(f.right))


def evaluate_formula(f: Formula, asg) -> int:
    if isinstance(f, Var):
        return 1 if asg[f.index - 1] else 0
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return 1 - evaluate_formula(f.child, asg)
    if isinstance(f, And):
        return evaluate_formula(f.left, asg) & evaluate_formula(f.right, asg)
    return evaluate_formula(f.left, asg) | evaluate_formula(f.right, asg)


def format_formula(f: Formula) -> str:
    if isinstance(f, Var):
        return f"x{f.index}"
    if isinstance(f, Const):
        return str(f.value)
    if isinstance(f, Not):
        return f"(not {format_formula(f.child)})"
    op = "and" if isinstance(f, And) else "or"
    return f"({op} {format_formula(f.left)} {format_formula(f.right)})"


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append((ch, i))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append((text[i:j], i))
            i = j
    return tokens


def parse_formula(text: str) -> Formula:
    """Parse prefix syntax: ``(and e1 e2)``, ``(or e1 e2)``, ``(not e)``, ``x<i>``, ``0``, ``1``."""
    tokens = _tokenize(text)
    pos = 0

    def col(k: int) -> int:
        return tokens[k][1] + 1 if k < len(tokens) else len(text) + 1

    def expr() -> Formula:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of formula", column=col(pos))
        tok, at = tokens[pos]
        if tok == "(":
            pos += 1
            if pos >= len(tokens):
                raise ParseError("missing operator after '('", column=col(pos))
            op, op_at = tokens[pos]
            if op not in ("and", "or", "not"):
                raise ParseError(f"unknown operator {op!r}", column=op_at + 1)
            pos += 1
            args = []
            while pos < len(tokens) and tokens[pos][0] != ")":
                args.append(expr())
            if pos >= len(tokens):
                raise ParseError("missing ')'", column=col(pos))
            want = 1 if op == "not" else 2
            if len(args) != want:
                raise ParseError(f"'{op}' takes {want} argument(s), got {len(args)}", column=at + 1)
            pos += 1
            if op == "not":
                return Not(args[0])
            return And(*args) if op == "and" else Or(*args)
        if tok == ")":
            raise ParseError("unexpected ')'", column=at + 1)
        pos += 1
        if tok in ("0", "1"):
            return Const(int(tok))
        if tok.startswith("x") and tok[1:].isdigit() and int(tok[1:]) >= 1:
            return Var(int(tok[1:]))
        raise ParseError(f"bad leaf {tok!r}", column=at + 1)

    f = expr()
    if pos != len(tokens):
        raise ParseError(f"trailing input {tokens[pos][0]!r}", column=col(pos))
    return f


def compose(p: Perm, q: Perm) -> Perm:
    """Apply q first, then p."""
    return tuple(p[q[i]] for i in range(5))


def inverse(p: Perm) -> Perm:
    out = [0] * 5
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def is_five_cycle(p: Perm) -> bool:
    x, steps = 0, 0
    while True:
        x = p[x]
        steps += 1
        if x == 0:
            return steps == 5


@lru_cache(maxsize=None)
def _commutator_pair() -> tuple[Perm, Perm, Perm]:
    """Two 5-cycles whose commutator (run a, b, a^-1, b^-1) is again a 5-cycle."""
    cycles = [p for p in itertools.permutations(range(5)) if is_five_cycle(p)]
    for a in cycles:
        for b in cycles:
            gamma = compose(inverse(b), compose(inverse(a), compose(b, a)))
            if is_five_cycle(gamma):
                return a, b, gamma
    raise AssertionError("no commutator pair among 5-cycles")


@lru_cache(maxsize=None)
def _conjugator(src: Perm, dst: Perm) -> Perm:
    """A permutation c with c src c^-1 = dst."""
    for c in itertools.permutations(range(5)):
        if compose(c, compose(src, inverse(c))) == dst:
            return c
    raise AssertionError("permutations are not conjugate")


Instruction = tuple[int, Perm, Perm]


def _program(f: Formula, target: Perm) -> list[Instruction]:
    """Instructions composing to ``target`` when f is true and to the identity otherwise."""
    if isinstance(f, Const):
        p = target if f.value else IDENTITY
        return [(1, p, p)]
    if isinstance(f, Var):
        return [(f.index, IDENTITY, target)]
    if isinstance(f, Not):
        prog = _program(f.child, inverse(target))
        var, p0, p1 = prog[-1]
        prog[-1] = (var, compose(target, p0), compose(target, p1))
        return prog
    if isinstance(f, Or):
        return _program(Not(And(Not(f.left), Not(f.right))), target)
    a, b, gamma = _commutator_pair()
    c = _conjugator(gamma, target)
    ci = inverse(c)
    a2 = compose(c, compose(a, ci))
    b2 = compose(c, compose(b, ci))
    return (
        _program(f.left, a2)
        + _program(f.right, b2)
        + _program(f.left, inverse(a2))
        + _program(f.right, inverse(b2))
    )


def to_width5_bp(f: Formula, n: int | None = None) -> BranchingProgram:
    """Width-5 program accepting exactly the satisfying assignments of f."""
    n = max(max_var(f), 1) if n is None else n
    if max_var(f) > n:
        raise InputError(f"formula reads x{max_var(f)} but only {n} variables are declared")
    prog = _program(f, SIGMA)
    # make the true case land back on point 0: post-compose with SIGMA^-1
    var, p0, p1 = prog[-1]
    back = inverse(SIGMA)
    prog[-1] = (var, compose(back, p0), compose(back, p1))
    edges = set()
    for i, (_, p0, p1) in enumerate(prog, start=1):
        for j in range(5):
            edges.add((i, j + 1, p0[j] + 1, 0))
            edges.add((i, j + 1, p1[j] + 1, 1))
    return BranchingProgram(n, len(prog) + 1, 5, tuple(v for v, _, _ in prog), frozenset(edges))


def random_formula(n: int, depth: int, rng: random.Random) -> Formula:
    """Random formula of depth at most ``depth`` over x1..xn."""
    if depth == 0 or rng.random() < 0.15:
        if rng.random() < 0.08:
            return Const(rng.randint(0, 1))
        return Var(rng.randint(1, n))
    kind = rng.random()
    if kind < 0.2:
        return Not(random_formula(n, depth - 1, rng))
    left = random_formula(n, depth - 1, rng)
    right = random_formula(n, depth - 1, rng)
    return And(left, right) if kind < 0.6 else Or(left, right)
