import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from bpreduce.errors import GuardRefusal, InputError, ParseError
from bpreduce.seq_measures import (
    WeightedAlphabet,
    WeightedSequence,
    edit_distance,
    format_sequence_file,
    k_lcs,
    lcs,
    parse_sequence_file,
    total_length,
    unweight,
    wlcs,
    wlcs_raw,
)
from conftest import load_fixture


def weighted(symbols, weights):
    return WeightedSequence(tuple(symbols), WeightedAlphabet(dict(weights)))


def int_keys(d):
    return {int(k): v for k, v in d.items()}


@pytest.mark.parametrize("case", load_fixture("lcs.json"))
def test_lcs_frozen(case):
    assert lcs(case["x"], case["y"]) == case["lcs"]


@pytest.mark.parametrize("case", load_fixture("wlcs.json"))
def test_wlcs_frozen(case):
    weights = int_keys(case["weights"])
    alpha = WeightedAlphabet(weights)
    P1, P2 = WeightedSequence(tuple(case["x"]), alpha), WeightedSequence(tuple(case["y"]), alpha)
    assert wlcs(P1, P2) == case["wlcs"]


@pytest.mark.parametrize("case", load_fixture("klcs.json"))
def test_klcs_frozen(case):
    assert k_lcs(case["seqs"]) == case["klcs"]
    assert k_lcs(case["seqs"], int_keys(case["weights"])) == case["wklcs"]


@pytest.mark.parametrize("case", load_fixture("edit.json"))
def test_edit_frozen(case):
    assert edit_distance(case["x"], case["y"]) == case["edit"]
    assert edit_distance(case["x"], case["y"], substitutions=False) == case["indel"]


def test_frozen_fixtures_match_live_oracles():
    for case in load_fixture("lcs.json")[:20]:
        assert oracles.lcs_enum(case["x"], case["y"]) == case["lcs"]
    for case in load_fixture("edit.json")[:10]:
        assert oracles.edit_distance_bfs(case["x"], case["y"]) == case["edit"]


@given(st.lists(st.integers(0, 3), max_size=40))
def test_lcs_identity_and_empty(x):
    assert lcs(x, x) == len(x)
    assert lcs(x, []) == 0
    assert lcs([], x) == 0


@given(st.lists(st.integers(0, 2), max_size=60), st.lists(st.integers(0, 2), max_size=60))
@settings(max_examples=60)
def test_indel_distance_is_lcs_distance(x, y):
    assert edit_distance(x, y, substitutions=False) == len(x) + len(y) - 2 * lcs(x, y)


def test_lcs_accepts_any_hashable():
    assert lcs("ABCBDAB", "BDCABA") == 4


def test_lcs_long_inputs():
    rng = random.Random(1)
    x = [rng.randint(0, 3) for _ in range(700)]
    y = [rng.randint(0, 3) for _ in range(500)]
    assert lcs(x, y) == wlcs_raw(x, y, {s: 1 for s in range(4)})


@given(st.lists(st.integers(0, 3), max_size=20), st.lists(st.integers(0, 3), max_size=20))
@settings(max_examples=50)
def test_wlcs_unit_weights_is_lcs(x, y):
    alpha = WeightedAlphabet.uniform(range(4))
    assert wlcs(WeightedSequence(tuple(x), alpha), WeightedSequence(tuple(y), alpha)) == lcs(x, y)


def test_wlcs_self_is_total_weight():
    P = weighted([0, 1, 2, 1, 0], {0: 3, 1: 1, 2: 7})
    assert wlcs(P, P) == total_length(P) == 15


def test_wlcs_huge_weights_fall_back_exactly():
    big = 2**70
    P1 = weighted([0, 1, 0], {0: big, 1: 1})
    P2 = weighted([1, 0, 0], {0: big, 1: 1})
    assert wlcs(P1, P2) == 2 * big


def test_wlcs_alphabet_mismatch():
    with pytest.raises(InputError):
        wlcs(weighted([0], {0: 2}), weighted([0], {0: 3}))


def test_unweight_examples():
    assert unweight(weighted([0, 1], {0: 1, 1: 1})) == [0, 1]
    assert unweight(weighted([4], {4: 3})) == [4, 4, 4]
    assert total_length(weighted([], {0: 1})) == 0
    assert total_length(weighted([2], {2: 9})) == 9
    P = weighted([0, 1, 1, 2], {0: 2, 1: 5, 2: 1})
    assert total_length(P) == len(unweight(P))
    with pytest.raises(GuardRefusal):
        unweight(weighted([0], {0: 100}), max_expand=99)


def test_bad_weights_rejected():
    with pytest.raises(InputError):
        WeightedAlphabet({0: 0})
    with pytest.raises(InputError):
        WeightedSequence((1,), WeightedAlphabet({0: 1}))


def test_klcs_specialisations():
    rng = random.Random(4)
    for _ in range(30):
        x = [rng.randint(0, 2) for _ in range(rng.randint(0, 15))]
        y = [rng.randint(0, 2) for _ in range(rng.randint(0, 15))]
        assert k_lcs([x, y]) == lcs(x, y)
    s = [1, 2, 3, 1]
    assert k_lcs([s, s, s, s]) == 4
    with pytest.raises(InputError):
        k_lcs([s])
    with pytest.raises(GuardRefusal):
        k_lcs([s * 100, s * 100, s * 100], max_cells=1000)


def test_edit_distance_examples():
    assert edit_distance("kitten", "sitting") == 3
    assert edit_distance([], [1, 2]) == 2
    assert edit_distance([1, 2], []) == 2


def test_sequence_file_round_trip():
    P = weighted([3, 1, 3, 3, 0] * 20, {0: 2, 1: 1, 3: 9})
    again = parse_sequence_file(format_sequence_file(P))
    assert again == P
    plain = parse_sequence_file(format_sequence_file(P, weighted=False))
    assert plain.symbols == P.symbols and all(plain.alphabet.weights[s] == 1 for s in plain.symbols)


@pytest.mark.parametrize("text, line", [
    ("alphabet 1\nsym 0 weight x\nseq\n0\n", 2),
    ("sym 0\n", 1),
    ("alphabet 1\nsym 0\nseq\n0 q\n", 4),
    ("alphabet 1\nsym 0 weight 0\nseq\n", 2),
])
def test_sequence_file_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_sequence_file(text)
    assert err.value.line == line


def test_sequence_file_undeclared_symbol():
    with pytest.raises(ParseError):
        parse_sequence_file("alphabet 1\nsym 0\nseq\n0 1\n")


def test_wlcs_separate_compatible_alphabets():
    P1 = weighted([0, 1, 2], {0: 2, 1: 3, 2: 4})
    P2 = weighted([5, 1, 2], {1: 3, 2: 4, 5: 9})
    assert wlcs(P1, P2) == 7
    assert wlcs(P2, P1) == 7
