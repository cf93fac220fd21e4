"""The traveling-S maps: zone automaton, gated variant, inserting variant.

A configuration over {0,1,S} is read as u0 S u1 S u2 ...; one application
does, atomically and in this order:

  (b) for the k-th S (k >= 2) at position i_k, every maximal 1-run whose
      1s lie within the first i_k cells of the zone to its right and whose
      length l satisfies the oracle query AllLengthsBelow(k) at budget i_k
      is excised: its cells are zeroed and the word 0 1^l is inserted
      immediately left of that S (several excisions concatenate in their
      original order), pushing the S and everything right of it;
  (c) the first S advances one cell.  If the zone left of it is of the
      form 0^p 1^q (all 1s glued to the S), it consumes the symbol to its
      right: a 1 extends the glued run (whose left end stays fixed), a 0
      is written to its left and ends a crossing; otherwise — or when the
      neighbour is another S — it pushes everything to its right by one
      cell and two 0s fill the vacated space;
  (d) the leftmost zone shifts left one cell (absorbed into the glued-run
      bookkeeping during a crossing step).

The gated variant additionally allows a crossing step at first-S position
i only when the second layer currently carries a^{2i} at position i or
a^{2i+1} at position i+1; the second layer itself is shifted.  The
inserting variant leaves the first S ungated but makes the second S test
the same condition at the first S's position i, and on success insert the
word (01)(011)...(01^i)0 at its own position, pushing itself and
everything to its right.

``step_prefix`` applies one step to a finite word exactly.  ``ZoneEngine``
runs long orbits; it tracks every S inside a finite materialized horizon
and extends the frontier whenever a scan or window read reaches it.  This
is exact whenever no excision cascade originates beyond the horizon
(influence on a fixed window can in principle reach exponentially far for
adversarial oracle tables); the engine is cross-checked against
``step_prefix`` in the test suite.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .oracle import Answer, HaltQuery, OracleTable, QueryKind
from .space import Configuration


def _unresolved(msg):
    from .systems import FrontierUnresolved
    return FrontierUnresolved(msg)


@dataclass(frozen=True)
class ProductConfiguration:
    """Two-layer configuration: {0,1,S} symbols over an {a,b} stream."""

    layer1: Configuration
    layer2: Configuration

    def materialize(self, n: int) -> Tuple[str, str]:
        return self.layer1.materialize(n), self.layer2.materialize(n)


# ---------------------------------------------------------------------------
# The crossing gate read off the second layer
# ---------------------------------------------------------------------------

def gate_allows(w2: str, i: int) -> bool:
    """True when a^{2i} sits at position i or a^{2i+1} at i+1 in ``w2``.

    Raises FrontierUnresolved if ``w2`` is too short to decide.
    """
    if i == 0:
        return True
    c1_hi, c2_hi = 3 * i, 3 * i + 2
    if len(w2) >= c1_hi and all(c == "a" for c in w2[i:c1_hi]):
        return True
    if len(w2) >= c2_hi and all(c == "a" for c in w2[i + 1:c2_hi]):
        return True
    for hi, lo in ((c1_hi, i), (c2_hi, i + 1)):
        if len(w2) < hi and all(c == "a" for c in w2[lo:]):
            raise _unresolved("second layer too short for the gate")
    return False


def _insertion_word(i: int) -> str:
    """(01)(011)...(01^i)0 — the first i blocks of 1s, then a closing 0."""
    return "".join("0" + "1" * j for j in range(1, i + 1)) + "0"


# ---------------------------------------------------------------------------
# One exact step on a finite word
# ---------------------------------------------------------------------------

def _all_below_yes(oracle: OracleTable, l: int, k: int, budget: int) -> bool:
    q = HaltQuery(QueryKind.ALL_BELOW, budget, k=k)
    return oracle.answer(l, q) is Answer.YES


def _zone_runs(cells: List[str], lo: int, hi: int):
    """Maximal 1-runs of cells[lo:hi] as (absolute start, length)."""
    runs = []
    i = lo
    while i < hi:
        if cells[i] == "1":
            j = i
            while j < hi and cells[j] == "1":
                j += 1
            runs.append((i, j - i))
            i = j
        else:
            i += 1
    return runs


def _step_word(oracle: OracleTable, w1: str, n: int,
               w2: Optional[str] = None,
               gate_first: bool = False,
               second_inserts: bool = False) -> str:
    if len(w1) < n + 1:
        raise _unresolved("need one symbol past the window")
    cells = list(w1)
    s_pos = [i for i, c in enumerate(cells) if c == "S"]

    # everything strictly right of this position cannot influence the window
    # (the first S reads the symbol to its right, which an excision at an
    # adjacent second S may rewrite)
    reach = n if not s_pos else max(n, s_pos[0] + 2)

    inserts: List[Tuple[int, int, str]] = []  # (position, tiebreak, word)
    for k in range(2, len(s_pos) + 1):
        i_k = s_pos[k - 1]
        if i_k >= reach:
            break
        zone_lo = i_k + 1
        zone_hi = s_pos[k] if k < len(s_pos) else len(cells)
        scan_hi = zone_lo + i_k
        if zone_hi == len(cells) and scan_hi > len(cells):
            raise _unresolved("scan prefix runs past the supplied word")
        scan_hi = min(scan_hi, zone_hi)
        excised = []
        for start, l in _zone_runs(cells, zone_lo, zone_hi):
            if start + l <= scan_hi and _all_below_yes(oracle, l, k, i_k):
                excised.append((start, l))
        if excised:
            for start, l in excised:
                cells[start:start + l] = ["0"] * l
            word = "".join("0" + "1" * l for _, l in excised)
            inserts.append((i_k, 0, word))

    if second_inserts and len(s_pos) >= 2 and s_pos[1] < reach:
        if gate_allows(w2, s_pos[0]):
            inserts.append((s_pos[1], 1, _insertion_word(s_pos[0])))

    for pos, _, word in sorted(inserts, reverse=True):
        cells[pos:pos] = list(word)

    s1 = s_pos[0] if s_pos else None
    if s1 is None:
        # no S within reach: the map shifts, unless a 1-run glued to an S
        # just past the supplied word could freeze the window
        i = 0
        while i < len(cells) and cells[i] == "0":
            i += 1
        if i < n and i < len(cells) and all(c == "1" for c in cells[i:]):
            raise _unresolved("open 1-run may be glued to an S beyond the word")
        return "".join(cells[1:n + 1])
    if s1 + 1 >= len(cells):
        raise _unresolved("first S reads one symbol past the supplied word")

    u0 = cells[:s1]
    ones = sum(1 for c in u0 if c == "1")
    trailing = 0
    for c in reversed(u0):
        if c != "1":
            break
        trailing += 1
    c = cells[s1 + 1]
    eat = ones == trailing
    if eat and c == "1" and (not gate_first or gate_allows(w2, s1)):
        cells[s1], cells[s1 + 1] = "1", "S"
        shift = False
    elif eat and c == "0":
        cells[s1], cells[s1 + 1] = "0", "S"
        shift = True
    else:
        cells.insert(s1, "0")
        shift = True
    s1 += 1
    if shift:
        del cells[0]
        s1 -= 1
        cells.insert(s1, "0")
    return "".join(cells[:n])


def step_prefix(sys, w, n: int):
    """One application of the zone automaton, restricted to [0, n)."""
    from .systems import SystemId
    oracle = sys.oracle
    if sys.id is SystemId.PI2:
        return _step_word(oracle, w, n)
    w1, w2 = w
    if len(w2) < n + 1:
        raise _unresolved("second layer needs one symbol past the window")
    gate_first = sys.id is SystemId.WILD_T_PRIME
    out1 = _step_word(oracle, w1, n, w2=w2, gate_first=gate_first,
                      second_inserts=sys.id is SystemId.WILD_T_SECOND)
    return out1, w2[1:n + 1]


# ---------------------------------------------------------------------------
# Long-orbit engine
# ---------------------------------------------------------------------------

_CHUNK = 4096


class ZoneEngine:
    """Iterates the zone automaton with lazy position bookkeeping.

    Requires a programmed oracle (excision times must be computable in
    advance).  Zone k content sits in ``zones[k]``; the position of the
    k-th S is ``base[k] + pushes + dep[k]`` where ``dep`` accumulates
    insertion displacements, so idle zones cost nothing per step.
    """

    def __init__(self, sysid, oracle: OracleTable, layer1: Configuration,
                 layer2: Optional[Configuration], horizon: int, window: int):
        from .systems import SystemId
        if not oracle.programmed:
            raise ValueError("the long-orbit engine needs a programmed oracle")
        self.oracle = oracle
        self.layer1 = layer1
        self.window = window
        self.gate_first = sysid is SystemId.WILD_T_PRIME
        self.second_inserts = sysid is SystemId.WILD_T_SECOND

        w = layer1.materialize(horizon + window + 64)
        self.src = len(w)          # next unread index of the initial layer 1
        self.cap = len(w)          # excision-scan materialization cap
        self.excisable = oracle.default_halts or any(
            ent.kind is QueryKind.ALL_BELOW and ent.time is not None
            for ent in oracle.entries)
        self.t = 0
        self.pushes = 0            # +1 per first-S push step
        self.completed_crossings = 0
        self.crossing = False

        first_s = w.find("S")
        if first_s < 0:
            self.u0 = None         # S-free horizon: the map acts as the shift
            self._shift_word = w
            return
        self.u0 = deque(w[:first_s])
        self.ones = sum(1 for c in self.u0 if c == "1")
        self.trailing = 0
        for c in reversed(self.u0):
            if c != "1":
                break
            self.trailing += 1

        self.zones: List = [None, deque()]   # zones[k] holds u_k
        self.base: List[int] = [0, first_s]  # initial position of S_k
        self.dep: List[int] = [0, 0]         # insertion displacement of S_k
        self.pending: List[list] = [None, None]  # (threshold, start, len) heaps
        self.parsed: List[int] = [0, 0]
        self.wake: list = []                 # (required pushes, zone index)
        rest = w[first_s:]
        idx = rest.find("S", 1)
        while idx >= 0:
            nxt = rest.find("S", idx + 1)
            seg = rest[idx + 1: nxt if nxt >= 0 else len(rest)]
            if len(self.base) == 2:
                self.zones[1].extend(rest[1:idx])
            self.base.append(first_s + idx)
            self.dep.append(0)
            self.zones.append(list(seg))
            self.pending.append([])
            self.parsed.append(0)
            idx = nxt
        if len(self.base) == 2:
            self.zones[1].extend(rest[1:])
        self.last = len(self.base) - 1
        for k in range(2, self.last + 1):
            self._absorb_runs(k, complete=(k < self.last))

        if self.gate_first or self.second_inserts:
            need = 4 * horizon + 3 * first_s + 3 * window + 64
            g = layer2.materialize(need)
            arr = np.frombuffer(g.encode("ascii"), np.uint8) == ord("b")
            idxs = np.arange(len(arr), dtype=np.int64)
            idxs[~arr] = np.iinfo(np.int64).max
            self._next_b = np.minimum.accumulate(idxs[::-1])[::-1]
            self._g2_len = len(g)

    # -- bookkeeping helpers ------------------------------------------------

    def _pos(self, k: int) -> int:
        return self.base[k] + self.pushes + self.dep[k]

    def _tau(self, l: int, k: int) -> Optional[int]:
        return self.oracle.all_below_time(l, k)

    def _wake_key(self, k: int):
        return self.pending[k][0][0] - self.base[k] - self.dep[k]

    def _absorb_runs(self, k: int, complete: bool):
        """Parse unparsed cells of zone k into pending excision candidates.

        Complete zones are parsed to the end; the frontier zone is parsed
        a little past the scan prefix and never through an open 1-run.
        """
        zone = self.zones[k]
        limit = len(zone) if complete else min(len(zone),
                                               self._pos(k) + _CHUNK)
        off = self.parsed[k]
        if off >= limit:
            return
        cells = zone[off:limit]
        hi = len(cells)
        if not complete and k == self.last:
            while hi > 0 and cells[hi - 1] == "1":
                hi -= 1
        i = 0
        heap = self.pending[k]
        while i < hi:
            if cells[i] == "1":
                j = i
                while j < hi and cells[j] == "1":
                    j += 1
                tau = self._tau(j - i, k)
                if tau is not None:
                    heapq.heappush(heap, (max(tau, off + j), off + i, j - i))
                i = j
            else:
                i += 1
        self.parsed[k] = off + hi
        if heap:
            heapq.heappush(self.wake, (self._wake_key(k), k))

    def _extend_frontier(self, needed: int):
        """Materialize layer 1 until the last zone holds ``needed`` cells.

        Returns early when a new S is discovered (the caller re-examines
        the zone structure), so S-dense tails cannot run this unboundedly.
        """
        while len(self.zones[self.last]) < needed:
            w = self.layer1.materialize(self.src + _CHUNK)
            seg = w[self.src:]
            cut = seg.find("S")
            if cut < 0:
                self.zones[self.last].extend(seg)
                self.src += len(seg)
            else:
                self.zones[self.last].extend(seg[:cut])
                if self.last >= 2:
                    self._absorb_runs(self.last, complete=True)
                # a new S enters the tracked region; everything right of
                # every tracked S shares all pushes and displacements
                self.base.append(self.src + cut)
                self.dep.append(self.dep[self.last])
                self.zones.append([])
                self.pending.append([])
                self.parsed.append(0)
                self.last += 1
                self.src += cut + 1
                break
        if self.last >= 2:
            self._absorb_runs(self.last, complete=False)

    def _gate_ok(self, i: int) -> bool:
        if i == 0:
            return True
        lo1 = i + self.t
        if lo1 + 2 * i <= self._g2_len and self._next_b[lo1] >= lo1 + 2 * i:
            return True
        lo2 = lo1 + 1
        return (lo2 + 2 * i + 1 <= self._g2_len
                and self._next_b[lo2] >= lo2 + 2 * i + 1)

    # -- stepping -----------------------------------------------------------

    def _fire_excisions(self):
        # snapshot the eligible zones first: a block deposited this step is
        # not rescanned until the next application of the map
        ready = []
        while self.wake and self.wake[0][0] <= self.pushes:
            ready.append(heapq.heappop(self.wake)[1])
        # ascending zone order: a deposit into zone k-1 is then never
        # rescanned before the next application of the map
        ready = sorted(set(ready))
        # all excisions of one step are judged against the pre-step S
        # positions; same-step displacements must not widen a later scan
        pos_before = {k: self._pos(k) for k in ready}
        for k in ready:
            heap = self.pending[k]
            if not heap:
                continue
            pos = pos_before[k]
            fired = []
            while heap and heap[0][0] <= pos:
                fired.append(heapq.heappop(heap))
            if heap:
                heapq.heappush(self.wake, (self._wake_key(k), k))
            if not fired:
                continue
            fired.sort(key=lambda e: e[1])
            zone = self.zones[k]
            pieces = []
            for _, start, l in fired:
                zone[start:start + l] = ["0"] * l
                pieces.append("0" + "1" * l)
            w = "".join(pieces)
            tgt = self.zones[k - 1]
            off = len(tgt)
            tgt.extend(w)
            if k - 1 >= 2:
                for piece in pieces:
                    l = len(piece) - 1
                    tau = self._tau(l, k - 1)
                    if tau is not None:
                        heapq.heappush(self.pending[k - 1],
                                       (max(tau, off + l + 1), off + 1, l))
                    off += len(piece)
                if self.pending[k - 1]:
                    heapq.heappush(self.wake, (self._wake_key(k - 1), k - 1))
            self._displace(k, len(w))

    def _displace(self, k: int, amount: int):
        """Record that S_k .. S_last moved right by ``amount``."""
        for j in range(k, self.last + 1):
            self.dep[j] += amount
        refreshed = {}
        while self.wake:
            _, j = heapq.heappop(self.wake)
            if self.pending[j] and j not in refreshed:
                refreshed[j] = self._wake_key(j)
        self.wake = [(key, j) for j, key in refreshed.items()]
        heapq.heapify(self.wake)
        self._check_frontier()

    def _check_frontier(self):
        """Keep the last S's scan prefix parsed for future excisions.

        Stops at the materialization cap: excision cascades originating
        beyond the initial horizon are outside the engine's contract.
        """
        if not self.excisable or self.last < 2:
            return
        while (self.src <= self.cap
               and self._pos(self.last) + _CHUNK // 2
                   > len(self.zones[self.last])):
            prev = (self.last, self.src)
            self._extend_frontier(self._pos(self.last) + _CHUNK)
            if (self.last, self.src) == prev:
                break

    def _u0_popleft(self):
        c = self.u0.popleft()
        if c == "1":
            if self.ones == len(self.u0) + 1:
                self.trailing -= 1
            self.ones -= 1

    def _u0_append(self, c: str):
        self.u0.append(c)
        if c == "1":
            self.ones += 1
            self.trailing += 1
        else:
            self.trailing = 0

    def step(self):
        if self.u0 is None:
            self.t += 1
            return
        self._fire_excisions()

        if self.second_inserts and self.last >= 2:
            if self._gate_ok(len(self.u0)):
                word = _insertion_word(len(self.u0))
                self.zones[1].extend(word)
                self._displace(2, len(word))

        u1 = self.zones[1]
        if not u1 and self.last == 1:
            self._extend_frontier(1)
        if u1:
            c = u1[0]
        elif self.last >= 2:
            c = "S"
        else:
            c = "0"
        eat = self.ones == self.trailing
        if eat and c == "1" and (not self.gate_first
                                 or self._gate_ok(len(self.u0))):
            u1.popleft()
            self._u0_append("1")
            self.crossing = True
        elif eat and c == "0":
            if u1:
                u1.popleft()
            self._u0_append("0")
            if self.u0:
                self._u0_popleft()
            self._u0_append("0")
            if self.crossing:
                self.completed_crossings += 1
                self.crossing = False
        else:
            self._u0_append("0")
            self._u0_popleft()
            self._u0_append("0")
            self.pushes += 1
            self.crossing = False
            self._check_frontier()
        self.t += 1

    # -- observation --------------------------------------------------------

    def window_word(self) -> str:
        L = self.window
        if self.u0 is None:
            hi = self.t + L
            if hi > len(self._shift_word):
                self._shift_word = self.layer1.materialize(hi + _CHUNK)
            return self._shift_word[self.t:hi]
        out = list(itertools.islice(self.u0, 0, L))
        k = 1
        while len(out) < L and k <= self.last:
            out.append("S")
            take = L - len(out)
            if take > 0:
                if k == self.last and len(self.zones[k]) < take:
                    self._extend_frontier(take)
                out.extend(itertools.islice(self.zones[k], 0, take))
            k += 1
        return "".join(out[:L])


def orbit_windows(sys, x, t0: int, t1: int, window: int) -> Iterator:
    """Windows T^t(x)[0:window] for t in [t0, t1); pairs for two layers."""
    product = isinstance(x, ProductConfiguration)
    layer1 = x.layer1 if product else x
    layer2 = x.layer2 if product else None
    eng = ZoneEngine(sys.id, sys.oracle, layer1, layer2, t1, window)
    g2 = layer2.materialize(t1 + window) if product else None
    for t in range(t1):
        if t >= t0:
            w1 = eng.window_word()
            yield (w1, g2[t:t + window]) if product else w1
        if t + 1 < t1:
            eng.step()
