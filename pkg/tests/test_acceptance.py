"""End-to-end acceptance checks, one test per criterion.

Each check prints a single PASS or FAIL line. Run standalone with
``python3 tests/test_acceptance.py`` or through pytest.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from bpreduce.alignment import (  # noqa: E402
    FrameworkBuilder,
    check_alignment_gadget,
    eg_gadget,
    final_sequences,
    ig1_gadget,
    lcs_measure_binding,
    or_gadget,
)
from bpreduce.barrington import evaluate_formula, formula_depth, random_formula, to_width5_bp  # noqa: E402
from bpreduce.bp_core import all_assignments, brute_force_sat, evaluate, random_bp, reachable  # noqa: E402
from bpreduce.cli import jsonable  # noqa: E402
from bpreduce.corpus import direct_corpus, framework_corpus  # noqa: E402
from bpreduce.lcs_reduction import LetterLayout, PartyBuilder, combine, rg, score_tables  # noqa: E402
from bpreduce.seq_measures import (  # noqa: E402
    WeightedAlphabet,
    WeightedSequence,
    k_lcs,
    lcs,
    total_length,
    unweight,
    wlcs,
)

RESULTS: dict[int, tuple[bool, str]] = {}


def report(number: int, title: str, ok: bool, detail: str) -> str:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title} ({detail})"
    RESULTS[number] = (ok, line)
    return line


def closed_form_gadget(W: int, t: int) -> int:
    return (W * (36 * W + 26)) ** t


# 1

def check_end_to_end_direct() -> str:
    start = time.perf_counter()
    bad, sat_count, literal = [], 0, 0
    for inst in direct_corpus(200, seed=0):
        bp = inst.build()
        sat = brute_force_sat(bp) is not None
        sat_count += sat
        exact = combine(bp, "or")
        if inst.t == 1:
            value = lcs(unweight(exact.A), unweight(exact.B))
            literal += 1
        else:
            # expansions reach millions of symbols; the weighted value equals the literal one
            value = wlcs(exact.A, exact.B)
        if (sat and value != exact.E) or (not sat and value > exact.E - 1):
            bad.append(f"{inst.label()} exact value {value} vs E {exact.E}")
        linear = combine(bp, "align")
        lv = wlcs(linear.A, linear.B)
        if linear.accepts(lv) != sat or (not sat and lv > linear.E - 1):
            bad.append(f"{inst.label()} linear value {lv} vs E {linear.E}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 600
    detail = (f"{200 - len({b.split(' exact')[0].split(' linear')[0] for b in bad})}/200 agree, "
              f"{sat_count} satisfiable, {literal} by literal unweighted LCS, {elapsed:.1f}s")
    if bad:
        detail += "; first: " + bad[0]
    return report(1, "end-to-end direct reduction", ok, detail)


# 2 and 3 share the exhaustive gadget sweep

def gadget_sweep():
    """Every (u, v) at distance 2 and 4, every half pair, n = 4, W in {2, 3}."""
    rows = []
    for W in (2, 3):
        tab = score_tables(W, 2)
        for idx, density in enumerate((0.25, 0.35, 0.45, 0.55, 0.7)):
            bp = random_bp(4, W, 2, 1000 * W + idx, density)
            lay = LetterLayout(W, 2)
            for k in (1, 2):
                d = 2**k
                for layer in range(1, bp.T - d + 1):
                    for j, jp in itertools.product(range(1, W + 1), repeat=2):
                        u, v = (layer, j), (layer + d, jp)
                        xs = {a: rg(bp, "a", a, u, v, k, lay) for a in all_assignments(2)}
                        ys = {b: rg(bp, "b", b, u, v, k, lay) for b in all_assignments(2)}
                        for a, b in itertools.product(xs, ys):
                            rows.append((W, k, tab, bp, a, b, u, v, xs[a], ys[b]))
    return rows


def check_gadget_dichotomy(rows) -> str:
    bad, reach = 0, 0
    for W, k, tab, bp, a, b, u, v, x, y in rows:
        value = wlcs(x, y)
        r = reachable(bp, a + b, u, v)
        reach += r
        if (r and value != tab.Y[k]) or (not r and value > tab.Y[k] - 1):
            bad += 1
    return report(2, "gadget dichotomy", bad == 0,
                  f"{len(rows) - bad}/{len(rows)} gadget pairs exact, {reach} reachable")


def check_weight_calculus(rows) -> str:
    bad = []
    gadgets = 0
    for W, k, tab, bp, a, b, u, v, x, y in rows:
        for g in (x, y):
            gadgets += 1
            if total_length(g) != tab.Z[k] or tab.Z[k] != closed_form_gadget(W, k):
                bad.append((W, k))
    # vector gadgets of the three-party variant and of t = 3 programs
    for W in (2, 3):
        bp = random_bp(6, W, 3, W, 0.5)
        for K in (2, 3):
            lay = LetterLayout(W, 3, K)
            for party in range(1, K + 1):
                half = [1, 0, 1][: 6 // K]
                g = PartyBuilder(bp, lay, party, half).build(bp.start, bp.accept)
                gadgets += 1
                if sum(lay.alphabet.weights[s] for s in g) != closed_form_gadget(W, 3):
                    bad.append((W, 3, K))
    bound_cases = 0
    for W in range(2, 9):
        tab = score_tables(W, 8)
        for k, z in enumerate(tab.Z):
            bound_cases += 1
            prev = tab.Z[k - 1] if k else None
            if z > W ** (8 * k) or (k and z != prev * W * (9 * (4 * W + 2) + 8)):
                bad.append(("bound", W, k))
    return report(3, "weight calculus", not bad,
                  f"{gadgets} gadgets weigh exactly Z_k, Z_k <= W^(8k) on {bound_cases} (W, k) cases")


# 4

def check_unweighting() -> str:
    rng = random.Random(404)
    bad = 0
    for _ in range(100):
        symbols = rng.randint(1, 5)
        alpha = WeightedAlphabet({s: rng.randint(1, 8) for s in range(symbols)})
        P1 = WeightedSequence(tuple(rng.randrange(symbols) for _ in range(rng.randint(0, 30))), alpha)
        P2 = WeightedSequence(tuple(rng.randrange(symbols) for _ in range(rng.randint(0, 30))), alpha)
        bad += wlcs(P1, P2) != lcs(unweight(P1), unweight(P2))
    return report(4, "unweighting soundness", bad == 0, f"{100 - bad}/100 weighted pairs equal")


# 5

def conformance_payloads(binding):
    w = 1
    level1_x = [eg_gadget(binding, w, 0, "X"), eg_gadget(binding, w, 1, "X"),
                ig1_gadget(binding, 1, "X", w), ig1_gadget(binding, 2, "X", w)]
    level1_y = [eg_gadget(binding, w, 0, "Y"), eg_gadget(binding, w, 1, "Y"),
                ig1_gadget(binding, 1, "Y", w), ig1_gadget(binding, 2, "Y", w)]
    coords = ([binding.zero_x, binding.one_x], [binding.zero_y, binding.one_y])
    return coords, (level1_x, level1_y)


def check_conformance() -> str:
    binding = lcs_measure_binding()
    coords, level1 = conformance_payloads(binding)
    rng = random.Random(5)
    checked, violations = 0, []
    for nx, ny in itertools.product(range(1, 5), repeat=2):
        for pool_x, pool_y in (coords, level1):
            combos = list(itertools.product(itertools.product(pool_x, repeat=nx),
                                            itertools.product(pool_y, repeat=ny)))
            if len(combos) > 256:
                combos = rng.sample(combos, 256)
            for xs, ys in combos:
                rep = check_alignment_gadget(binding, list(xs), list(ys))
                checked += 1
                if not rep.ok:
                    violations.append(f"({nx},{ny}): {rep.violations[0]}")
    detail = f"{checked} list pairs over all shapes n, m <= 4, {len(violations)} violations"
    if violations:
        detail += "; first: " + violations[0]
    return report(5, "framework conformance", not violations, detail)


# 6

def check_or_exactness() -> str:
    binding = lcs_measure_binding()
    coords, level1 = conformance_payloads(binding)
    rng = random.Random(6)
    bad, size_bad, checked = 0, 0, 0
    worst = 0.0
    for n in (1, 2, 3):
        for pool_x, pool_y in (coords, level1):
            combos = list(itertools.product(itertools.product(pool_x, repeat=n),
                                            itertools.product(pool_y, repeat=n)))
            if len(combos) > 300:
                combos = rng.sample(combos, 300)
            for xs, ys in combos:
                x, y, C = or_gadget(binding, list(xs), list(ys))
                checked += 1
                if binding.delta(x, y) - C != min(binding.delta(p, q) for p in xs for q in ys):
                    bad += 1
                unit = n * n * (xs[0].tag.length + ys[0].tag.length)
                worst = max(worst, max(x.tag.length, y.tag.length) / unit)
    c_ga = binding.session.max_ratio
    c = binding.realized_c
    size_bad = worst > c * c or worst > 2 * c_ga * c_ga
    return report(6, "OR-gadget exactness", bad == 0 and not size_bad,
                  f"{checked - bad}/{checked} exact, max |out|/(n^2 (lx+ly)) = {worst:.3f} <= c^2 = {c * c:.3f} "
                  f"with realized c = {c:.3f}; alignment-gadget constant c_ga = {c_ga:.3f} "
                  f"gives 2 c_ga^2 = {2 * c_ga * c_ga:.3f}")


# 7

def check_framework_pipeline() -> str:
    bad = []
    sat_n = gap_measured = 0
    for inst in framework_corpus(50, seed=1):
        bp = inst.build()
        b = lcs_measure_binding(bp.W, bp.T)
        art = final_sequences(b, bp)
        d = b.delta(art.x, art.y)
        sat = brute_force_sat(bp) is not None
        target_gap = art.constants.rho_F - art.constants.rho_T
        if art.accepts(d) != sat:
            bad.append(f"{inst.label()} verdict")
        if not sat and d != art.unsat_value:
            bad.append(f"{inst.label()} unsatisfiable value {d} != {art.unsat_value}")
        if art.unsat_value - art.threshold != target_gap:
            bad.append(f"{inst.label()} threshold gap")
        if sat:
            sat_n += 1
            fb = FrameworkBuilder(b, bp)
            c = fb.constants
            base = fb.nvg_offset() + c.rho[fb.t]
            pair_values = {}
            for a, bb in itertools.product(all_assignments(bp.n // 2), repeat=2):
                v = b.delta(fb.nvg_x(a), fb.nvg_y(bb))
                pair_values.setdefault(evaluate(bp, a + bb), set()).add(v)
            # satisfying pairs sit at base, the others exactly one gap above
            if pair_values.get(True) != {base} or pair_values.get(False, {base + target_gap}) != {base + target_gap}:
                bad.append(f"{inst.label()} pair values {pair_values}")
            S, T = fb.normalizers(fb.t)
            rgy = fb.reachability("Y", (0,) * (bp.n // 2), bp.start, bp.accept)
            measured = b.delta(S, rgy) - b.delta(T, rgy)
            if measured != target_gap:
                bad.append(f"{inst.label()} normalizer gap {measured}")
            if False in pair_values:
                measured = min(pair_values[False]) - max(pair_values[True])
                gap_measured += 1
                if measured != target_gap:
                    bad.append(f"{inst.label()} measured gap {measured}")
    detail = (f"{50 - len({x.split(' ')[0] for x in bad})}/50 agree, {sat_n} satisfiable, "
              f"gap rho_F - rho_T measured between pairs on {gap_measured} and via normalizers on all {sat_n}")
    if bad:
        detail += "; first: " + bad[0]
    return report(7, "framework pipeline", not bad, detail)


# 8

def check_barrington() -> str:
    rng = random.Random(8)
    bad = []
    depths = []
    for i in range(100):
        n = rng.randint(1, 6)
        f = random_formula(n, rng.randint(0, 5), rng)
        depth = formula_depth(f)
        depths.append(depth)
        bp = to_width5_bp(f, n)
        for layer in range(1, bp.T):
            for bit in (0, 1):
                moves = sorted((j, jp) for (li, j, jp, bb) in bp.edges if li == layer and bb == bit)
                if [j for j, _ in moves] != [1, 2, 3, 4, 5] or sorted(jp for _, jp in moves) != [1, 2, 3, 4, 5]:
                    bad.append(f"formula {i}: layer {layer} is not a width-5 permutation")
        if bp.W != 5 or bp.T > 4**depth + 1:
            bad.append(f"formula {i}: W={bp.W} T={bp.T} depth={depth}")
        for a in all_assignments(n):
            if evaluate(bp, a) != bool(evaluate_formula(f, a)):
                bad.append(f"formula {i}: differs on {a}")
                break
    return report(8, "width-5 compilation", not bad,
                  f"{100 - len({b.split(':')[0] for b in bad})}/100 formulas equal, depths {min(depths)}..{max(depths)}")


# 9

def check_k_lcs() -> str:
    K, W = 3, 2
    tab = score_tables(W, 2)
    checked = bad = reach = 0
    for seed, density in ((0, 0.35), (1, 0.5), (2, 0.65)):
        bp = random_bp(6, W, 2, 900 + seed, density)
        lay = LetterLayout(W, 2, K)
        weights = lay.alphabet.weights
        builders = {(j, h): PartyBuilder(bp, lay, j, h) for j in range(1, K + 1) for h in all_assignments(2)}
        for k in (0, 1, 2):
            d = 2**k
            for layer in range(1, bp.T - d + 1):
                for jn, jp in itertools.product(range(1, W + 1), repeat=2):
                    u, v = (layer, jn), (layer + d, jp)
                    for asg in all_assignments(6):
                        parts = [builders[j, asg[2 * (j - 1): 2 * j]].build(u, v) for j in range(1, K + 1)]
                        value = k_lcs(parts, weights)
                        r = reachable(bp, asg, u, v)
                        reach += r
                        checked += 1
                        if (r and value != tab.Y[k]) or (not r and value >= tab.Y[k]):
                            bad += 1
    return report(9, "three-party k-LCS gadgets", bad == 0,
                  f"{checked - bad}/{checked} node pairs and assignments exact, {reach} reachable")


# 10

def check_size_scaling() -> str:
    bad = []
    direct_checked = 0
    for inst in direct_corpus(200, seed=0)[::4]:
        bp = inst.build()
        art = combine(bp, "align")
        Z = closed_form_gadget(bp.W, bp.t)
        gadget_weights = {
            sum(art.A.alphabet.weights[s] for s in PartyBuilder(bp, art.layout, p, h).build(bp.start, bp.accept))
            for p in (1, 2) for h in all_assignments(bp.n // 2)
        }
        half = 2 ** (bp.n // 2)
        expected_A = 2 * half * (Z + art.predicted["separator_a"])
        manifest = jsonable(art.manifest())
        measured_A = len(unweight(art.A)) if bp.t == 1 else total_length(art.A)
        if gadget_weights != {Z} or art.measured["gadget"] != Z:
            bad.append(f"{inst.label()} gadget weights {gadget_weights} != {Z}")
        if not (measured_A == expected_A == art.predicted["A"]) or manifest["predicted"]["A"] != str(measured_A):
            bad.append(f"{inst.label()} |A| {measured_A} vs {expected_A}")
        if manifest["predicted"]["B"] != str(total_length(art.B)):
            bad.append(f"{inst.label()} |B|")
        direct_checked += 1
    cs, exponents = [], []
    for inst in framework_corpus(50, seed=1):
        bp = inst.build()
        b = lcs_measure_binding(bp.W, bp.T)
        rep = final_sequences(b, bp).size_report()
        cs.append(rep["realized_c"])
        exponents.append(rep["exponent"])
        if not rep["ok"]:
            bad.append(f"{inst.label()} framework lengths exceed the bound")
    detail = (f"direct: {direct_checked} instances match (W(36W+26))^t and 2*2^(n/2)*(gadget + separator); "
              f"framework: 50 instances within T^log2(12W^2c^3), realized c <= {max(cs):.3f}, "
              f"exponent log2(12W^2c^3) <= {max(exponents):.2f}")
    if bad:
        detail += "; first: " + bad[0]
    return report(10, "size scaling", not bad, detail)


@pytest.fixture(scope="module")
def sweep():
    return gadget_sweep()


def emit(capsys, line: str) -> None:
    with capsys.disabled():
        print("\n" + line)


def test_end_to_end_direct_reduction(capsys):
    emit(capsys, check_end_to_end_direct())
    assert RESULTS[1][0], RESULTS[1][1]


def test_gadget_dichotomy(capsys, sweep):
    emit(capsys, check_gadget_dichotomy(sweep))
    assert RESULTS[2][0], RESULTS[2][1]


def test_weight_calculus(capsys, sweep):
    emit(capsys, check_weight_calculus(sweep))
    assert RESULTS[3][0], RESULTS[3][1]


def test_unweighting_soundness(capsys):
    emit(capsys, check_unweighting())
    assert RESULTS[4][0], RESULTS[4][1]


def test_framework_conformance(capsys):
    emit(capsys, check_conformance())
    assert RESULTS[5][0], RESULTS[5][1]


def test_or_gadget_exactness(capsys):
    emit(capsys, check_or_exactness())
    assert RESULTS[6][0], RESULTS[6][1]


def test_framework_pipeline(capsys):
    emit(capsys, check_framework_pipeline())
    assert RESULTS[7][0], RESULTS[7][1]


def test_width5_compilation(capsys):
    emit(capsys, check_barrington())
    assert RESULTS[8][0], RESULTS[8][1]


def test_three_party_gadgets(capsys):
    emit(capsys, check_k_lcs())
    assert RESULTS[9][0], RESULTS[9][1]


def test_size_scaling(capsys):
    emit(capsys, check_size_scaling())
    assert RESULTS[10][0], RESULTS[10][1]


def main() -> int:
    rows = gadget_sweep()
    checks = [check_end_to_end_direct, lambda: check_gadget_dichotomy(rows), lambda: check_weight_calculus(rows),
              check_unweighting, check_conformance, check_or_exactness, check_framework_pipeline,
              check_barrington, check_k_lcs, check_size_scaling]
    for check in checks:
        print(check(), flush=True)
    return 0 if all(ok for ok, _ in RESULTS.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
