"""Attractor membership, empirical orbit statistics, and the limit measure.

The membership predicates decide, by pattern analysis plus oracle queries,
whether a cylinder meets each of the four constructed attractors.  The
statistical side provides visited-window profiles (the desk-scale
surrogate for the omega-limit set), empirical measures along orbits and
their Monte-Carlo averages, and an exact rational enclosure of the limit
measure obtained by pushing a Bernoulli measure through the block-erasure
maps.
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .oracle import Answer, HaltQuery, OracleTable, QueryKind, INF
from .space import Configuration, Cylinder, parse_blocks
from .systems import EraseKind, SystemId, SystemSpec, orbit_windows

YES, NO, UNKNOWN = "yes", "no", "unknown_within_budget"


@dataclass(frozen=True)
class MeetsVerdict:
    value: str                      # YES / NO / UNKNOWN
    witness: Optional[str] = None   # extension sketch or violated block

    def __bool__(self):
        return self.value == YES


def _run_halts_empty(oracle: OracleTable, l: int, budget: Optional[int]):
    """True/False/None (undecided) for 'M_l halts on the empty input'."""
    if oracle.programmed:
        return oracle.empty_halt_time(l) is not None
    if budget is None:
        raise ValueError("enumerated oracles need a budget")
    ans = oracle.answer(l, HaltQuery(QueryKind.EMPTY, budget))
    return True if ans is Answer.YES else None


def _meets_pi1(oracle, w, budget):
    dec = parse_blocks(w)
    for j1, l in dec.blocks("1"):
        fate = _run_halts_empty(oracle, l, budget)
        if fate is True:
            return MeetsVerdict(NO, witness=f"block 01^{l} 0 at {j1}: M_{l} halts")
        if fate is None:
            return MeetsVerdict(UNKNOWN, witness=f"block 01^{l} 0 at {j1}")
    return MeetsVerdict(YES, witness=w + "1^inf")


def _meets_sigma2(oracle, w, budget):
    if not oracle.programmed:
        raise ValueError("the finite-domain predicates need a programmed table")
    dec = parse_blocks(w)
    for j1, l in dec.blocks("1"):
        if not oracle.has_finite_domain(l):
            return MeetsVerdict(NO, witness=f"block 01^{l} 0 at {j1}: "
                                            f"M_{l} has infinite domain")
        j0 = w.rfind("1", 0, j1)
        if j0 >= 0 and oracle.halts_on_size_above(l, j1 - j0):
            return MeetsVerdict(
                NO, witness=f"factor 10^{j1 - j0}1^{l}0 at {j0}: "
                            f"M_{l} halts on a larger input")
    return MeetsVerdict(YES, witness=w + "1^inf")


def _single_block_shape(w: str):
    """Parse w as 0^a 1^l 0^b (any part possibly absent).

    Returns (a, l, closed) or None when w has two separated 1-groups.
    """
    runs = parse_blocks(w).runs
    symbols = [r.symbol for r in runs]
    if symbols in ([], ["0"], ["1"], ["0", "1"], ["1", "0"],
                   ["0", "1", "0"]):
        a = runs[0].length if symbols[:1] == ["0"] else 0
        ones = [r for r in runs if r.symbol == "1"]
        l = ones[0].length if ones else 0
        closed = bool(ones) and ones[0].bounded_right
        return a, l, closed
    return None


def _meets_single_block(w, total_ok: Callable[[int], bool],
                        some_total_at_least: Callable[[int], bool]):
    if "S" in w:
        return MeetsVerdict(NO, witness="the attractor contains no S")
    shape = _single_block_shape(w)
    if shape is None:
        return MeetsVerdict(NO, witness="two separated 1-groups")
    a, l, closed = shape
    if a == 0:
        # the 1^a 0^inf family: any leading 1-group, one change afterwards
        return MeetsVerdict(YES, witness=w + "0^inf")
    if l == 0:
        return MeetsVerdict(YES, witness=w + "0^inf")
    if closed:
        if total_ok(l):
            return MeetsVerdict(YES, witness=w + "0^inf")
        return MeetsVerdict(NO, witness=f"block 01^{l} 0: index not admissible")
    if some_total_at_least(l):
        return MeetsVerdict(YES, witness="extend the 1-run to an admissible "
                                         "length, then 0^inf")
    return MeetsVerdict(NO, witness=f"no admissible block length >= {l}")


def _meets_pi2(oracle, w):
    if not oracle.programmed:
        raise ValueError("the totality predicate needs a programmed table")

    def some_total_at_least(l):
        if oracle.default_halts:
            return True    # all unlisted indices are total with bound 1
        return any(oracle.is_total(e) for e in oracle._by_machine if e >= l)

    return _meets_single_block(w, oracle.is_total, some_total_at_least)


def _meets_a_prime(w):
    return _meets_single_block(w, lambda l: True, lambda l: True)


def attractor_meets(system_id: SystemId, c: Cylinder, oracle: OracleTable,
                    budget: Optional[int] = None) -> MeetsVerdict:
    """Does the cylinder meet the attractor of the given system?"""
    if c.position != 0:
        raise ValueError("membership predicates are defined at position 0")
    w = c.word
    if system_id is SystemId.PI1:
        return _meets_pi1(oracle, w, budget)
    if system_id is SystemId.SIGMA2:
        return _meets_sigma2(oracle, w, budget)
    if system_id is SystemId.PI2 or system_id is SystemId.WILD_T_PRIME:
        return _meets_pi2(oracle, w)
    if system_id is SystemId.WILD_T_SECOND:
        return _meets_a_prime(w)
    raise ValueError(f"no attractor predicate for {system_id}")


def verdict_to_json(predicate: str, v: MeetsVerdict) -> str:
    return json.dumps({"predicate": predicate, "verdict": v.value,
                       "witness": v.witness}, indent=2)


# ---------------------------------------------------------------------------
# Visited-window profiles and empirical measures
# ---------------------------------------------------------------------------

def _window_key(w) -> str:
    return w if isinstance(w, str) else "|".join(w)


@dataclass(frozen=True)
class OmegaProfile:
    depth: int
    words: frozenset
    burn_in: int
    horizon: int

    def project(self, depth: int) -> "OmegaProfile":
        if depth > self.depth:
            raise ValueError("cannot project to a greater depth")
        return OmegaProfile(depth, frozenset(w[:depth] for w in self.words),
                            self.burn_in, self.horizon)


def omega_profile(sys: SystemSpec, x, burn_in: int, horizon: int,
                  depth: int) -> OmegaProfile:
    """The set of depth-L windows visited in [burn_in, horizon)."""
    if burn_in >= horizon:
        raise ValueError("need burn_in < horizon")
    seen = set()
    for w in orbit_windows(sys, x, burn_in, horizon, depth):
        seen.add(_window_key(w))
    return OmegaProfile(depth, frozenset(seen), burn_in, horizon)


@dataclass(frozen=True)
class EmpiricalMeasure:
    depth: int
    counts: Dict[str, int]
    total: int

    def frequency(self, word: str) -> Fraction:
        return Fraction(self.counts.get(word, 0), self.total)

    def project(self, depth: int) -> "EmpiricalMeasure":
        if depth > self.depth:
            raise ValueError("cannot project to a greater depth")
        agg: Counter = Counter()
        for w, c in self.counts.items():
            agg[w[:depth]] += c
        return EmpiricalMeasure(depth, dict(agg), self.total)

    def total_variation(self, other: "EmpiricalMeasure") -> Fraction:
        if self.depth != other.depth:
            raise ValueError("depth mismatch")
        words = set(self.counts) | set(other.counts)
        return sum((abs(self.frequency(w) - other.frequency(w))
                    for w in words), Fraction(0)) / 2

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["word", "count", "frequency"])
            for w in sorted(self.counts):
                out.writerow([w, self.counts[w],
                              float(Fraction(self.counts[w], self.total))])


def empirical_measure(sys: SystemSpec, x, n: int, depth: int,
                      start: int = 0) -> EmpiricalMeasure:
    """Counts of depth-L windows over iterates start .. start+n-1."""
    if n < 1:
        raise ValueError("need n >= 1")
    counts: Counter = Counter()
    for w in orbit_windows(sys, x, start, start + n, depth):
        counts[_window_key(w)] += 1
    return EmpiricalMeasure(depth, dict(counts), n)


def derived_seed(master_seed: int, index: int) -> int:
    """Per-sample seed: numpy SeedSequence spawn-key [master, index]."""
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1)[0])


def pushforward_average(sys: SystemSpec,
                        make_config: Callable[[int], Configuration],
                        n: int, depth: int, samples: int,
                        master_seed: int) -> EmpiricalMeasure:
    """Monte-Carlo average of the first n pushforwards of a sampled measure.

    ``make_config(seed)`` must build a configuration from a derived seed;
    results are bit-identical for a fixed master seed regardless of
    evaluation order.
    """
    if samples < 1:
        raise ValueError("need samples >= 1")
    agg: Counter = Counter()
    for i in range(samples):
        x = make_config(derived_seed(master_seed, i))
        m = empirical_measure(sys, x, n, depth)
        agg.update(m.counts)
    return EmpiricalMeasure(depth, dict(agg), n * samples)


@dataclass(frozen=True)
class FoundWitness:
    t: int
    seed_index: int


def realm_visit_check(sys: SystemSpec, seeds: Sequence, target: Cylinder,
                      k: int, n: int, m: int) -> Optional[FoundWitness]:
    """First (seed, t), n <= t <= m, whose window meets the depth-k
    neighbourhood of the target cylinder; None when no orbit does."""
    if n > m:
        raise ValueError("need n <= m")
    word = target.word[:max(0, k - target.position)]
    lo, hi = target.position, target.position + len(word)
    for idx, x in enumerate(seeds):
        for t, w in enumerate(orbit_windows(sys, x, n, m + 1, hi), start=n):
            key = _window_key(w) if not isinstance(w, tuple) else w[0]
            if key[lo:hi] == word:
                return FoundWitness(t=t, seed_index=idx)
    return None


# ---------------------------------------------------------------------------
# Membership in the product-system cylinders U_{s,t}
# ---------------------------------------------------------------------------

def u_st_member(x, s: int, t: int, depth: int) -> Optional[bool]:
    """Membership in U_{s,t}: layer 1 in [{0,1}^{s-1} S]_0, layer 2 with
    an a-run a^{m+s} starting at some position m >= t.

    Returns True, or None when no witnessing run exists up to ``depth``
    (the predicate is open; absence cannot be certified).
    """
    if s < 1:
        raise ValueError("need s >= 1")
    w1, w2 = x.materialize(max(s, 2 * depth + s))
    if len(w1) < s or "S" in w1[:s - 1] or w1[s - 1] != "S":
        return False
    for m in range(t, depth):
        hi = m + m + s
        if hi <= len(w2) and all(c == "a" for c in w2[m:hi]):
            return True
    return None


# ---------------------------------------------------------------------------
# The limit measure: exact rational enclosures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TildeMuEstimate:
    word: str
    lower: Fraction
    upper: Fraction
    truncation: int

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2


def _phi_fate(oracle: OracleTable, l: int, gap: int, kind: EraseKind) -> bool:
    """True when a block of length l with preceding 1-distance ``gap``
    is erased in the limit."""
    if kind is EraseKind.PHI:
        return oracle.empty_halt_time(l) is not None
    return (not oracle.has_finite_domain(l)
            or oracle.halts_on_size_above(l, gap))


def tilde_mu(oracle: OracleTable, p: Fraction, u: str, truncation: int,
             kind: EraseKind = EraseKind.PHI) -> TildeMuEstimate:
    """Exact rational enclosure of the limit measure of [u] under Bernoulli(p).

    The limit of the shifted pushforwards of the Bernoulli(p on 1) product
    measure through a block-erasure map makes the window distribution
    stationary; each window probability is a sum over environments: the
    1-run touching the window's left edge (length a), the 0-gap before it
    (z extra zeros), the window content, and the extension of a right-open
    run (e).  A finite table's verdicts are eventually constant in both
    run length and gap, so the geometric tails beyond the truncation are
    summed in closed form with sentinel indices and the enclosure is tight.
    """
    if not oracle.programmed:
        raise ValueError("tilde_mu needs a programmed table")
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError("need 0 < p < 1")
    q = 1 - p
    L = len(u)
    if L == 0:
        return TildeMuEstimate(u, Fraction(1), Fraction(1), truncation)

    listed = list(oracle._by_machine)
    l_big = max(listed, default=0) + 1           # unlisted machine index
    finite_his = [e.k_hi for e in oracle.entries
                  if e.kind is QueryKind.SOME_IN and e.k_hi is not INF]
    k_big = max(finite_his, default=0) + 1       # gap beyond every k_hi
    T = max(truncation, l_big, k_big)
    BIG = None
    need_gap = kind is EraseKind.PHI_PRIME

    def fate(l_tot, gap) -> bool:
        return _phi_fate(oracle, l_big if l_tot is BIG else l_tot,
                         k_big if gap is BIG else gap, kind)

    # left contexts ... 1 0^{z+1} 1^a | window, with closed-form tail terms
    if need_gap:
        contexts = [(a, z, p ** (a + 1) * q ** (z + 1))
                    for a in range(T + 1) for z in range(T + 1)]
        contexts += [(a, BIG, p ** a * q ** (T + 2)) for a in range(T + 1)]
        contexts += [(BIG, z, p ** (T + 2) * q ** z) for z in range(T + 1)]
        contexts += [(BIG, BIG, p ** (T + 1) * q ** (T + 1))]
    else:
        contexts = [(a, 0, p ** a * q) for a in range(T + 1)]
        contexts += [(BIG, 0, p ** (T + 1))]

    yes = Fraction(0)
    total = Fraction(0)
    for bits in range(1 << L):
        w = format(bits, "b").zfill(L)
        w_prob = Fraction(1)
        for c in w:
            w_prob *= p if c == "1" else q
        one_runs = [r for r in parse_blocks(w).runs if r.symbol == "1"]
        for a, z, ctx_prob in contexts:
            base = ctx_prob * w_prob
            img = list(w)
            open_run = None
            prev_one = None      # nearest in-window 1 left of the current run
            for r in one_runs:
                start, l = r.start, r.length
                if start == 0 and a != 0:
                    l_tot = BIG if a is BIG else a + l
                    gap = BIG if z is BIG else z + 1
                else:
                    if prev_one is None:
                        gap = (start if a != 0
                               else (BIG if z is BIG else start + z + 1))
                    else:
                        gap = start - 1 - prev_one
                    l_tot = l
                if not r.bounded_right:
                    open_run = (start, l, l_tot, gap)
                    break
                if fate(l_tot, gap):
                    for i in range(start, start + l):
                        img[i] = "0"
                prev_one = start + l - 1
            if open_run is None:
                total += base
                if "".join(img) == u:
                    yes += base
                continue
            start, l, l_tot, gap = open_run
            exts = [(e, p ** e * q) for e in range(T + 1)] + [(BIG, p ** (T + 1))]
            for e, e_prob in exts:
                total += base * e_prob
                img2 = img.copy()
                full = BIG if (e is BIG or l_tot is BIG) else l_tot + e
                if fate(full, gap):
                    for i in range(start, start + l):
                        img2[i] = "0"
                if "".join(img2) == u:
                    yes += base * e_prob

    if total != 1:
        raise AssertionError("environment decomposition lost mass")
    return TildeMuEstimate(u, yes, yes, truncation)


def tilde_mu_table(oracle: OracleTable, p: Fraction, depth: int,
                   truncation: int,
                   kind: EraseKind = EraseKind.PHI) -> Dict[str, TildeMuEstimate]:
    """Enclosures for every word of the given depth."""
    return {format(i, "b").zfill(depth):
            tilde_mu(oracle, p, format(i, "b").zfill(depth), truncation, kind)
            for i in range(1 << depth)}
