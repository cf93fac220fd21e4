"""Fat-Cantor interval scheme, the embedding, and the extended map."""

import io
import random
from fractions import Fraction

import pytest

from symdyn.cantor import (CantorScheme, InGap, InLevelInterval,
                           cantor_measure, escape_fraction, export_intervals,
                           f_eval, gap_map, interval_of_word, locate,
                           phi_point)
from symdyn.oracle import OracleTable
from symdyn.space import (ALPHA_01S, Constant, Periodic, Sampler,
                          binary_config)
from symdyn.systems import pi1_system, pi2_system, shift_system

F = Fraction
NEVER = OracleTable.programmed_table([])


@pytest.fixture(scope="module")
def scheme():
    return CantorScheme()


# -- interval recurrence ----------------------------------------------------

def test_interval_examples(scheme):
    assert interval_of_word(scheme, "") == (0, 1)
    assert interval_of_word(scheme, "0") == (0, F(3, 8))
    assert interval_of_word(scheme, "1") == (F(5, 8), 1)
    assert interval_of_word(scheme, "01") == (F(7, 32), F(12, 32))
    g = scheme.gap("0", 0)
    assert (g.a, g.b) == (F(5, 32), F(7, 32))
    assert g.b - g.a == F(1, 16)


def test_cantor_measure_examples(scheme):
    assert cantor_measure(scheme, "") == F(1, 2)
    assert cantor_measure(scheme, "0") == F(1, 4)
    assert cantor_measure(scheme, "101") == F(1, 16)


def test_level_identities(scheme):
    # sum of level-n lengths is c_n; each |I_w| = 2^{-n} c_n; the level-n
    # gap length matches 2^{-(n-1)} (1 - b_{n-1}) prod_{i<n-1} b_i
    for n in range(10):
        words = [w for w in scheme.words(n) if len(w) == n]
        total = sum((scheme.interval_length(w) for w in words), F(0))
        assert total == scheme.level_measure(n)
        assert all(scheme.interval_length(w)
                   == scheme.level_measure(n) / 2 ** n for w in words)
        if n >= 1:
            prod = F(1)
            for i in range(n - 1):
                prod *= scheme.contraction(i)
            expected = F(1, 2 ** (n - 1)) * (1 - scheme.contraction(n - 1)) * prod
            g = scheme.gap("0" * (n - 1), 0)
            assert g.b - g.a == expected


def test_nesting_and_endpoint_sharing(scheme):
    for w in scheme.words(8):
        lo, hi = scheme.interval_of_word(w)
        l0, h0 = scheme.interval_of_word(w + "0")
        l1, h1 = scheme.interval_of_word(w + "1")
        assert l0 == lo and h1 == hi           # outer endpoints shared
        assert lo <= l0 < h0 < l1 < h1 <= hi   # nested with a real gap


def test_memo_is_pure_cache(scheme):
    fresh = CantorScheme()
    for w in ("", "0110", "10101", "111111"):
        assert fresh.interval_of_word(w) == scheme.interval_of_word(w)


def test_distortion_implication(scheme):
    # points separated by less than 2^{-n}(1-b_{n-1}) share n symbols: the
    # nearest pair of intervals split before depth n is a level-<=n gap
    # apart, and every such gap beats the threshold
    for n in range(1, 13):
        g = scheme.level_layout(n - 1)
        gap_len = g[1] - g[0]
        assert gap_len >= F(1, 2 ** n) * (1 - scheme.contraction(n - 1))
    for u in scheme.words(6):
        if len(u) != 6:
            continue
        for v in ("000000", "011111", "101010", "111111"):
            if u == v:
                continue
            n = next(i for i in range(6) if u[i] != v[i]) + 1
            (alo, ahi), (blo, bhi) = (scheme.interval_of_word(u),
                                      scheme.interval_of_word(v))
            dist = max(blo - ahi, alo - bhi)
            assert dist >= F(1, 2 ** n) * (1 - scheme.contraction(n - 1))


def test_ternary_scheme_identities():
    s3 = CantorScheme(ALPHA_01S)
    for n in range(5):
        words = [w for w in s3.words(n) if len(w) == n]
        assert sum((s3.interval_length(w) for w in words), F(0)) \
            == s3.level_measure(n)
    assert s3.cantor_measure("0S") == F(1, 2) / 9
    lo, hi = s3.interval_of_word("S")
    assert hi == 1 and lo < 1


# -- locating points --------------------------------------------------------

def test_locate_examples(scheme):
    loc = locate(scheme, F(1, 2), 8)
    assert isinstance(loc, InGap) and loc.gap.parent == ""
    assert (loc.gap.a, loc.gap.b) == (F(3, 8), F(5, 8))
    loc = locate(scheme, F(3, 8), 6)
    assert isinstance(loc, InLevelInterval) and loc.word == "011111"
    loc = locate(scheme, F(6, 32), 8)
    assert isinstance(loc, InGap)
    assert (loc.gap.a, loc.gap.b) == (F(5, 32), F(7, 32))


def test_locate_agrees_with_intervals(scheme):
    rng = random.Random(31)
    for _ in range(200):
        y = F(rng.randrange(0, 2 ** 20), 2 ** 20)
        loc = locate(scheme, y, 6)
        if isinstance(loc, InLevelInterval):
            lo, hi = scheme.interval_of_word(loc.word)
            assert lo <= y <= hi and len(loc.word) == 6
        else:
            assert loc.gap.a < y < loc.gap.b


# -- the embedding phi ------------------------------------------------------

def test_phi_exact_points(scheme):
    assert phi_point(scheme, binary_config("", Constant("0")), 10).exact
    assert phi_point(scheme, binary_config("", Constant("0")), 10).lower == 0
    assert phi_point(scheme, binary_config("", Constant("1")), 10).upper == 1
    e = phi_point(scheme, binary_config("1", Constant("0")), 10)
    assert e.exact and e.lower == F(5, 8)


def test_phi_enclosures_nest(scheme):
    x = binary_config("", Periodic("011"))
    prev = None
    for n in (4, 8, 16, 24):
        e = phi_point(scheme, x, n)
        assert e.width <= F(1, 2 ** n)
        if prev is not None:
            assert prev.contains(e)
        prev = e


# -- the interval map f -----------------------------------------------------

def test_f_on_cantor_part(scheme):
    # f(phi(10^inf)) = phi(0^inf) = 0 for the conjugated shift
    e = f_eval(scheme, shift_system(), F(5, 8), 20)
    assert e.lower == 0 and e.width <= F(1, 2 ** 20)


def test_f_on_gap_lands_in_target(scheme, worked):
    sys = pi1_system(worked)
    gm = gap_map(scheme, sys, locate(scheme, F(1, 2), 4).gap)
    y = gm(F(1, 2))
    assert gm.target_lo <= y <= gm.target_hi
    assert f_eval(scheme, sys, F(1, 2), 10).lower == y


def test_gap_map_shape(scheme, worked):
    # continuity at the endpoints, middle piece onto I' exactly, and the
    # middle piece is half of the gap -- for every gap down to depth 5
    for sysf in (shift_system, lambda: pi1_system(worked)):
        sys = sysf() if callable(sysf) else sysf
        for w in scheme.words(5):
            gm = gap_map(scheme, sys, scheme.gap(w, 0))
            assert gm(gm.a) == gm.fa and gm(gm.b) == gm.fb
            assert gm(gm.q1) == gm.target_lo and gm(gm.q3) == gm.target_hi
            assert gm.q3 - gm.q1 == (gm.b - gm.a) / 2
            mid = gm(gm.a + (gm.b - gm.a) / 2)
            assert gm.target_lo <= mid <= gm.target_hi


def test_f_enclosures_nest(scheme, worked):
    sys = pi1_system(worked)
    y = phi_point(scheme, binary_config("01101", Constant("0")), 30).lower
    prev = None
    for n in (6, 12, 20):
        e = f_eval(scheme, sys, y, n)
        assert e.width <= F(1, 2 ** n)
        if prev is not None:
            assert prev.contains(e)
        prev = e


def test_conjugacy_spot_check(scheme, worked):
    from symdyn.systems import orbit
    rng = random.Random(45)
    for sysf in (shift_system(), pi1_system(worked)):
        for _ in range(30):
            pre = "".join(rng.choice("01") for _ in range(rng.randint(0, 10)))
            x = binary_config(pre, Constant("0"))
            y = phi_point(scheme, x, 24).lower
            left = f_eval(scheme, sysf, y, 22)
            w = orbit(sysf, x, 1, 40)[0]
            right = phi_point(scheme, binary_config(w, Constant("0")), 22)
            dist = max(right.lower - left.upper, left.lower - right.upper)
            assert dist <= F(1, 2 ** 20)


def test_non_binary_systems_are_refused(scheme):
    with pytest.raises(ValueError):
        f_eval(scheme, pi2_system(NEVER), F(1, 2), 8)


# -- escape experiment ------------------------------------------------------

def test_escape_initial_mass(scheme):
    r = escape_fraction(scheme, shift_system(), 0, 3000, 7, depth=12)
    assert abs(float(r.fraction) - 0.5) < 0.03
    assert r.bound == 1


def test_escape_decays(scheme, worked):
    sys = pi1_system(worked)
    r3 = escape_fraction(scheme, sys, 3, 1500, 11, depth=14)
    assert float(r3.fraction) <= float(F(3, 4) ** 3) + 3 * r3.sigma + 0.02
    r12 = escape_fraction(scheme, sys, 12, 400, 11, depth=14)
    assert float(r12.fraction) < 0.12


def test_escape_deterministic_and_json(scheme):
    a = escape_fraction(scheme, shift_system(), 2, 500, 99, depth=10)
    b = escape_fraction(scheme, shift_system(), 2, 500, 99, depth=10)
    assert a == b
    doc = a.to_json()
    assert set(doc) == {"n", "samples", "fraction", "bound", "sigma"}
    assert doc["n"] == 2 and doc["samples"] == 500


# -- export -----------------------------------------------------------------

def test_export_csv(scheme):
    buf = io.StringIO()
    rows = export_intervals(scheme, 2, buf)
    lines = buf.getvalue().splitlines()
    assert rows == 7 and len(lines) == 8
    assert lines[0] == "word,lo_num,lo_den,hi_num,hi_den"
    assert lines[1] == ",0,1,1,1"
    assert lines[2] == "0,0,1,3,8"
