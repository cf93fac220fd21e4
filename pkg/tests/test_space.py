"""Configurations, cylinders, block decompositions, distance."""

import json
import random

import pytest
from hypothesis import given, strategies as st

from symdyn.space import (ALPHA_01, ALPHA_01S, Alphabet, Configuration,
                          Constant, Cylinder, Periodic, Sampler, Scheduled,
                          binary_config, config_from_json, config_to_json,
                          distance_exponent, parse_blocks, render_runs,
                          rich_configuration)

WORKED = "1001011100101100"


def test_materialize_examples():
    assert binary_config("10", Constant("0")).materialize(5) == "10000"
    assert binary_config("", Periodic("01")).materialize(5) == "01010"


def test_sampler_determinism():
    x = binary_config("", Sampler(("0", "1"), (1, 1), 7))
    assert x.materialize(20) == x.materialize(20)
    assert x.materialize(40)[:20] == x.materialize(20)


@given(st.text(alphabet="01", max_size=12), st.integers(0, 30),
       st.integers(0, 30))
def test_prefix_consistency(prefix, n, extra):
    x = binary_config(prefix, Periodic("011"))
    assert x.materialize(n + extra)[:n] == x.materialize(n)


def test_parse_blocks_simple():
    dec = parse_blocks("0110")
    blocks = dec.blocks("1")
    assert blocks == [(0, 2)]


def test_parse_blocks_worked_example():
    dec = parse_blocks(WORKED)
    assert dec.blocks("1") == [(2, 1), (4, 3), (9, 1), (11, 2)]
    lead = dec.runs[0]
    assert lead.symbol == "1" and not lead.bounded and lead.bound_left is None


def test_parse_blocks_empty():
    assert parse_blocks("").runs == ()


def test_parse_blocks_s_positions():
    assert parse_blocks("01S0S").s_positions == (2, 4)


@given(st.text(alphabet="01S", max_size=40))
def test_parse_render_round_trip(w):
    assert render_runs(parse_blocks(w).runs) == w


def test_distance_exponent():
    a = binary_config("10", Constant("0"))
    b = binary_config("11", Constant("0"))
    assert distance_exponent(a, b, 64) == 1
    assert distance_exponent(a, a, 64) is None  # agree up to depth


def test_distance_matches_brute_force():
    rng = random.Random(9)
    for _ in range(40):
        u = "".join(rng.choice("01") for _ in range(20))
        v = "".join(rng.choice("01") for _ in range(20))
        a = binary_config(u, Constant("0"))
        b = binary_config(v, Constant("0"))
        brute = next((i for i in range(64)
                      if a.materialize(64)[i] != b.materialize(64)[i]), None)
        assert distance_exponent(a, b, 64) == brute


def test_rich_configuration_schedule():
    x = rich_configuration("all01")
    w = x.materialize(100_000)
    # every early enumerated word recurs many times
    from symdyn.space import get_enumerator
    fn = get_enumerator("all01")
    for i in range(1, 20):
        word = fn(i)
        assert w.count(word) >= 3, word
    assert "11" in w


def test_rich_configuration_empty_enumerator():
    from symdyn.space import register_enumerator
    register_enumerator("empty-word", lambda i: "")
    x = rich_configuration("empty-word")
    assert x.materialize(32) == "0" * 32


def test_cylinder_validation():
    assert Cylinder("01", 3).position == 3
    with pytest.raises(ValueError):
        Cylinder("01", -1)


def test_alphabet_validation():
    with pytest.raises(ValueError):
        Alphabet(())
    with pytest.raises(ValueError):
        Alphabet(("0", "0"))
    with pytest.raises(ValueError):
        Configuration(ALPHA_01, "01S", Constant("0"))


def test_config_json_round_trip():
    samples = [
        binary_config("101", Constant("0")),
        binary_config("", Periodic("01")),
        binary_config("1", Sampler(("0", "1"), (1, 3), 99)),
        Configuration(ALPHA_01S, "0S", Scheduled("all01", "0")),
    ]
    for x in samples:
        text = config_to_json(x)
        y = config_from_json(text)
        assert y == x
        assert json.loads(config_to_json(y)) == json.loads(text)
        assert y.materialize(64) == x.materialize(64)
