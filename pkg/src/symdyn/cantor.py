"""Fat-Cantor interval embedding with exact rational arithmetic.

A ``CantorScheme`` builds a nested family of closed intervals I_w, one
per finite word w over a k-letter alphabet.  The children of I_w share
its outer endpoints, have equal length, and are separated by k-1 equal
gaps; the fraction of I_w covered by children at level n is
b_n = c_{n+1}/c_n for the level-measure sequence c.  The default
c_n = (1 + 2^{-n})/2 makes every endpoint, gap and measure an exact
rational, with residual Cantor set C of Lebesgue measure 1/2.

phi maps a configuration x to the unique point of the intersection of
the I_{x[:n]}.  The induced interval map f agrees with phi.T.phi^{-1}
on C and is extended across each gap [a, b] by three linear pieces with
breakpoints at the quarter points: the middle piece maps half of the
gap onto the whole target interval I', so at least a fixed proportion
of every gap escapes into C under one application of f.

All arithmetic uses ``fractions.Fraction``; every comparison made by
``locate`` and ``escape_fraction`` is exact.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Union

import numpy as np

from .space import ALPHA_01, Alphabet, Configuration, Constant, Periodic, Tail
from .systems import SystemId, SystemSpec, step_prefix

ZERO = Fraction(0)
ONE = Fraction(1)


def default_level_measure(n: int) -> Fraction:
    """c_n = (1 + 2^{-n}) / 2; c_0 = 1, decreasing, limit 1/2."""
    return (1 + Fraction(1, 2 ** n)) / 2


class CantorScheme:
    """Immutable k-ary fat-Cantor interval scheme with an endpoint memo.

    The memo is a pure cache: ``interval_of_word`` always returns the
    value given by the recurrence, so concurrent readers at worst
    recompute an entry.
    """

    def __init__(self,
                 alphabet: Alphabet = ALPHA_01,
                 level_measure: Callable[[int], Fraction]
                 = default_level_measure,
                 limit: Fraction = Fraction(1, 2)):
        self.alphabet = alphabet
        self.k = len(alphabet.symbols)
        if self.k < 2:
            raise ValueError("scheme needs at least two symbols")
        self._c = level_measure
        self.limit = Fraction(limit)
        if not ZERO < self.limit < self._c(0) == ONE:
            raise ValueError("need c_0 = 1 and limit in (0, 1)")
        self._memo: dict = {"": (ZERO, ONE)}
        self._layout: dict = {}

    def level_measure(self, n: int) -> Fraction:
        """Total length of the level-n intervals: sum_{|w|=n} |I_w|."""
        return Fraction(self._c(n))

    def contraction(self, n: int) -> Fraction:
        """b_n = c_{n+1}/c_n, the covered fraction of a level-n interval."""
        b = self.level_measure(n + 1) / self.level_measure(n)
        if not ZERO < b < ONE:
            raise ValueError(f"level measures not strictly decreasing at {n}")
        return b

    def _index(self, symbol: str) -> int:
        try:
            return self.alphabet.symbols.index(symbol)
        except ValueError:
            raise ValueError(f"symbol {symbol!r} outside scheme alphabet")

    def child_layout(self, w: str):
        """(child length, gap length, list of child left endpoints) of I_w."""
        lo, hi = self.interval_of_word(w)
        length = hi - lo
        b = self.contraction(len(w))
        child = b * length / self.k
        gap = (1 - b) * length / (self.k - 1)
        starts = [lo + j * (child + gap) for j in range(self.k)]
        return child, gap, starts

    def interval_of_word(self, w: str):
        """Exact endpoints (lo, hi) of I_w."""
        cached = self._memo.get(w)
        if cached is not None:
            return cached
        child, _, starts = self.child_layout(w[:-1])
        j = self._index(w[-1])
        val = (starts[j], starts[j] + child)
        self._memo[w] = val
        return val

    def interval_length(self, w: str) -> Fraction:
        lo, hi = self.interval_of_word(w)
        return hi - lo

    def cantor_measure(self, w: str) -> Fraction:
        """Lebesgue measure of I_w ∩ C: k^{-|w|} times the measure of C."""
        return self.limit / Fraction(self.k) ** len(w)

    def gap(self, w: str, j: int) -> "GapLocation":
        """The j-th gap inside I_w (between children j and j+1)."""
        if not 0 <= j < self.k - 1:
            raise ValueError("gap index out of range")
        child, _, starts = self.child_layout(w)
        return GapLocation(w, j, starts[j] + child, starts[j + 1])

    def level_layout(self, n: int):
        """(child length, child-to-child stride) shared by all level-n I_w."""
        cached = self._layout.get(n)
        if cached is None:
            length = self.level_measure(n) / Fraction(self.k) ** n
            b = self.contraction(n)
            child = b * length / self.k
            gap = (1 - b) * length / (self.k - 1)
            cached = self._layout[n] = (child, child + gap)
        return cached

    def words(self, depth: int) -> Iterator[str]:
        """All words of length <= depth, in breadth-first order."""
        level = [""]
        for _ in range(depth + 1):
            yield from level
            level = [w + s for w in level for s in self.alphabet.symbols]
            if len(level[0]) > depth:
                return


def interval_of_word(scheme: CantorScheme, w: str):
    return scheme.interval_of_word(w)


def cantor_measure(scheme: CantorScheme, w: str) -> Fraction:
    return scheme.cantor_measure(w)


@dataclass(frozen=True)
class PointEnclosure:
    """Exact rational bounds on a real number."""
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("empty enclosure")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def contains(self, other: "PointEnclosure") -> bool:
        return self.lower <= other.lower and other.upper <= self.upper


@dataclass(frozen=True)
class GapLocation:
    """The open interval (a, b) between children j and j+1 of I_parent."""
    parent: str
    index: int
    a: Fraction
    b: Fraction

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("degenerate gap")


@dataclass(frozen=True)
class InGap:
    gap: GapLocation


@dataclass(frozen=True)
class InLevelInterval:
    word: str


Location = Union[InGap, InLevelInterval]


def locate(scheme: CantorScheme, y: Fraction, depth: int) -> Location:
    """Exact position of y relative to the level-``depth`` intervals.

    Returns ``InGap`` as soon as y falls strictly inside a gap at level
    <= depth, otherwise the depth-letter word whose interval contains y
    (interval endpoints count as inside, since they belong to C).
    """
    y = Fraction(y)
    if not ZERO <= y <= ONE:
        raise ValueError("point outside [0, 1]")
    w, lo = "", ZERO
    for n in range(depth):
        child, stride = scheme.level_layout(n)
        j = min(int((y - lo) / stride), scheme.k - 1)
        start = lo + j * stride
        if y > start + child:  # strictly inside the gap right of child j
            return InGap(GapLocation(w, j, start + child, start + stride))
        w += scheme.alphabet.symbols[j]
        lo = start
    return InLevelInterval(w)


def _word_depth_for(scheme: CantorScheme, precision: int) -> int:
    """Least d with k^{-d} <= 2^{-precision} (so |I_w| < 2^{-precision})."""
    d = 0
    while Fraction(scheme.k) ** -d > Fraction(1, 2 ** precision):
        d += 1
    return d


def _constant_extreme(scheme: CantorScheme, tail: Tail) -> Optional[int]:
    """-1/+1 when the tail is constantly the bottom/top symbol, else None."""
    if isinstance(tail, Constant):
        sym = tail.symbol
    elif isinstance(tail, Periodic) and len(set(tail.word)) == 1:
        sym = tail.word[0]
    else:
        return None
    if sym == scheme.alphabet.symbols[0]:
        return -1
    if sym == scheme.alphabet.symbols[-1]:
        return 1
    return None


def phi_point(scheme: CantorScheme, x: Configuration,
              precision: int) -> PointEnclosure:
    """Enclosure of phi(x) of width <= 2^{-precision}.

    Exact (width 0) when the tail is constantly the bottom or top
    symbol: phi(v 0^inf) and phi(v top^inf) are the outer endpoints of
    I_v, which the children at every deeper level share.
    """
    side = _constant_extreme(scheme, x.tail)
    if side is not None:
        lo, hi = scheme.interval_of_word(x.prefix)
        p = lo if side < 0 else hi
        return PointEnclosure(p, p)
    d = _word_depth_for(scheme, precision)
    lo, hi = scheme.interval_of_word(x.materialize(d))
    return PointEnclosure(lo, hi)


# ---------------------------------------------------------------------------
# The interval map f
# ---------------------------------------------------------------------------

_BINARY_SYSTEMS = (SystemId.SHIFT, SystemId.PI1, SystemId.SIGMA2)


def _require_embeddable(scheme: CantorScheme, sys: SystemSpec):
    if sys.id not in _BINARY_SYSTEMS:
        raise ValueError(
            "interval map supports binary-alphabet systems only; the "
            "three-symbol and product systems need exact values at "
            "S-extremal gap endpoints, which are not computable here")
    if scheme.alphabet.symbols != ALPHA_01.symbols:
        raise ValueError("scheme alphabet must match the system alphabet")


def _exact_image_point(scheme: CantorScheme, sys: SystemSpec,
                       prefix: str, tail_symbol: str) -> Fraction:
    """phi(T(prefix . tail^inf)) for an extremal constant tail.

    The binary maps preserve extremal tails: an unbounded trailing
    1-run is never a closed block (so never erased) and a trailing
    0^inf stays 0^inf, hence the image word settles to the same
    constant and its phi-value is an outer interval endpoint.
    """
    d = len(prefix) + 8
    w = prefix + tail_symbol * (sys.lookahead(d) - len(prefix))
    v = step_prefix(sys, w, d)
    u = v.rstrip(tail_symbol)
    lo, hi = scheme.interval_of_word(u)
    return lo if tail_symbol == scheme.alphabet.symbols[0] else hi


@dataclass(frozen=True)
class GapMap:
    """f restricted to a gap [a, b]: three linear pieces.

    Breakpoints at the quarter points q1, q3; the middle piece carries
    [q1, q3] (half of the gap) linearly onto the whole of the target
    interval I' = [target_lo, target_hi], and the outer pieces connect
    it continuously to the exact values f(a) and f(b).
    """
    a: Fraction
    b: Fraction
    fa: Fraction
    fb: Fraction
    target_lo: Fraction
    target_hi: Fraction

    @property
    def q1(self) -> Fraction:
        return self.a + (self.b - self.a) / 4

    @property
    def q3(self) -> Fraction:
        return self.a + 3 * (self.b - self.a) / 4

    def __call__(self, y: Fraction) -> Fraction:
        y = Fraction(y)
        if not self.a <= y <= self.b:
            raise ValueError("point outside this gap")
        q1, q3 = self.q1, self.q3
        if y <= q1:
            return self.fa + (y - self.a) / (q1 - self.a) * (self.target_lo - self.fa)
        if y <= q3:
            return self.target_lo + (y - q1) / (q3 - q1) * (self.target_hi - self.target_lo)
        return self.target_hi + (y - q3) / (self.b - q3) * (self.fb - self.target_hi)


def gap_map(scheme: CantorScheme, sys: SystemSpec, gap: GapLocation) -> GapMap:
    """Build the three-piece extension of f across ``gap``."""
    _require_embeddable(scheme, sys)
    w = gap.parent
    bot, top = scheme.alphabet.symbols[0], scheme.alphabet.symbols[-1]
    left_child = w + scheme.alphabet.symbols[gap.index]
    right_child = w + scheme.alphabet.symbols[gap.index + 1]
    fa = _exact_image_point(scheme, sys, left_child, top)
    fb = _exact_image_point(scheme, sys, right_child, bot)
    m = sys.modulus(len(w))
    if m == 0:
        t_lo, t_hi = ZERO, ONE
    else:
        # both gap endpoints extend w, so their images agree to depth m
        src = left_child + top * (sys.lookahead(m) - len(left_child))
        t_lo, t_hi = scheme.interval_of_word(step_prefix(sys, src, m))
    return GapMap(gap.a, gap.b, fa, fb, t_lo, t_hi)


def f_eval(scheme: CantorScheme, sys: SystemSpec, y: Fraction,
           precision: int) -> PointEnclosure:
    """Enclosure of f(y) of width <= 2^{-precision}.

    On a gap the value is an exact rational from the three-piece map;
    on the Cantor part the enclosure is the interval of the stepped
    word, refined by locating y deeply enough that the image word has
    the requested length.
    """
    _require_embeddable(scheme, sys)
    y = Fraction(y)
    d_out = _word_depth_for(scheme, precision)
    depth = sys.lookahead(d_out)
    loc = locate(scheme, y, depth)
    if isinstance(loc, InGap):
        v = gap_map(scheme, sys, loc.gap)(y)
        return PointEnclosure(v, v)
    lo, hi = scheme.interval_of_word(step_prefix(sys, loc.word, d_out))
    return PointEnclosure(lo, hi)


# ---------------------------------------------------------------------------
# Escape experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EscapeResult:
    iterations: int
    samples: int
    escaped: int
    fraction: Fraction
    bound: Fraction
    sigma: float

    def to_json(self) -> dict:
        return {"n": self.iterations, "samples": self.samples,
                "fraction": float(self.fraction), "bound": float(self.bound),
                "sigma": self.sigma}


def escape_fraction(scheme: CantorScheme, sys: SystemSpec, iterations: int,
                    samples: int, master_seed: int, depth: int,
                    ) -> EscapeResult:
    """Fraction of uniform points still certified outside C after n steps.

    A sample counts as escaped when its n-th iterate lies strictly
    inside a gap of level <= depth.  A point whose orbit reaches a
    level-``depth`` interval cannot be certified outside C and is
    counted as absorbed, so the reported fraction is a one-sided
    estimate tested against the (3/4)^n bound.  Gap images are exact
    rationals, so every comparison is rigorous.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    _require_embeddable(scheme, sys)
    rng = np.random.default_rng(master_seed)
    den = 2 ** 53
    cache: dict = {}
    escaped = 0
    for _ in range(samples):
        y = Fraction(int(rng.integers(0, den)), den)
        status = None
        for _ in range(iterations + 1):
            loc = locate(scheme, y, depth)
            if isinstance(loc, InLevelInterval):
                status = "absorbed"
                break
            status = "outside"
            key = (loc.gap.parent, loc.gap.index)
            gm = cache.get(key)
            if gm is None:
                gm = cache[key] = gap_map(scheme, sys, loc.gap)
            y = gm(y)
        escaped += status == "outside"
    frac = Fraction(escaped, samples)
    p = float(frac)
    sigma = math.sqrt(max(p * (1 - p), 1e-12) / samples)
    return EscapeResult(iterations, samples, escaped, frac,
                        Fraction(3, 4) ** iterations, sigma)


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def export_intervals(scheme: CantorScheme, depth: int, stream) -> int:
    """Write the endpoint tree to ``depth`` as CSV; returns the row count."""
    writer = csv.writer(stream)
    writer.writerow(["word", "lo_num", "lo_den", "hi_num", "hi_den"])
    rows = 0
    for w in scheme.words(depth):
        lo, hi = scheme.interval_of_word(w)
        writer.writerow([w, lo.numerator, lo.denominator,
                         hi.numerator, hi.denominator])
        rows += 1
    return rows
