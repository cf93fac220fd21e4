"""Configurations, words, cylinders and block decompositions on A^N.

A configuration is a finite prefix plus a tail descriptor (constant,
periodic, seeded Bernoulli sampler, or a scheduled word stream).  All
values are immutable; sampler tails rebuild their PRNG stream from the
seed on every materialization, so sharing across threads is safe.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

BINARY = ("0", "1")
TERNARY = ("0", "1", "S")
LAYER2 = ("a", "b")


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __post_init__(self):
        if not self.symbols or len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be nonempty and distinct")

    def __contains__(self, s):
        return s in self.symbols


ALPHA_01 = Alphabet(BINARY)
ALPHA_01S = Alphabet(TERNARY)
ALPHA_AB = Alphabet(LAYER2)


@dataclass(frozen=True)
class Cylinder:
    word: str
    position: int = 0

    def __post_init__(self):
        if self.position < 0:
            raise ValueError("cylinder position must be >= 0")


# ---------------------------------------------------------------------------
# Tail descriptors
# ---------------------------------------------------------------------------

class Tail:
    def generate(self, n: int) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(Tail):
    symbol: str

    def generate(self, n):
        return self.symbol * n


@dataclass(frozen=True)
class Periodic(Tail):
    word: str

    def generate(self, n):
        reps = -(-n // len(self.word))
        return (self.word * reps)[:n]


@dataclass(frozen=True)
class Sampler(Tail):
    """I.i.d. symbols with the given weights, reproducible from the seed."""

    alphabet: tuple
    weights: tuple
    seed: int

    def generate(self, n):
        rng = np.random.Generator(np.random.PCG64(self.seed))
        p = np.asarray(self.weights, dtype=float)
        idx = rng.choice(len(self.alphabet), size=n, p=p / p.sum())
        return "".join(self.alphabet[i] for i in idx)


# Named word enumerators for scheduled tails.  An enumerator is a function
# index -> word; registration keeps configurations serializable.
_ENUMERATORS: dict = {}


def register_enumerator(name: str, fn: Callable[[int], str]) -> str:
    _ENUMERATORS[name] = fn
    return name


def get_enumerator(name: str) -> Callable[[int], str]:
    return _ENUMERATORS[name]


def _all_binary_words(i: int) -> str:
    # epsilon, 0, 1, 00, 01, ...
    length = 0
    while i >= 2 ** length:
        i -= 2 ** length
        length += 1
    return format(i, "b").zfill(length) if length else ""


register_enumerator("all01", _all_binary_words)


@dataclass(frozen=True)
class Scheduled(Tail):
    """Triangular schedule w1 f w1 f w2 f w1 f w2 f w3 ... over an enumerator.

    Every enumerated word occurs infinitely often, at positions that can be
    computed in advance from the schedule alone.
    """

    enumerator: str
    filler: str = "0"

    def _words(self) -> Iterator[str]:
        fn = get_enumerator(self.enumerator)
        round_no = 0
        while True:
            round_no += 1
            for i in range(round_no):
                yield fn(i)

    def generate(self, n):
        parts = []
        size = 0
        for w in self._words():
            parts.append(w)
            parts.append(self.filler)
            size += len(w) + 1
            if size >= n:
                break
        return "".join(parts)[:n]


@dataclass(frozen=True)
class Configuration:
    alphabet: Alphabet
    prefix: str
    tail: Tail

    def __post_init__(self):
        for c in self.prefix:
            if c not in self.alphabet:
                raise ValueError(f"symbol {c!r} outside alphabet")

    def materialize(self, n: int) -> str:
        """First ``n`` symbols; deterministic and prefix-consistent."""
        if n <= len(self.prefix):
            return self.prefix[:n]
        return self.prefix + self.tail.generate(n - len(self.prefix))


def binary_config(prefix: str, tail: Tail) -> Configuration:
    return Configuration(ALPHA_01, prefix, tail)


def rich_configuration(enumerator: str, filler: str = "0",
                       alphabet: Alphabet = ALPHA_01) -> Configuration:
    """A configuration in which every enumerated word appears infinitely often."""
    return Configuration(alphabet, "", Scheduled(enumerator, filler))


def distance_exponent(x: Configuration, y: Configuration, depth: int):
    """First index of disagreement, or None when agreeing up to ``depth``.

    ``d(x, y) <= 2^-n`` exactly when this returns None for ``depth = n``.
    """
    if x.alphabet != y.alphabet:
        raise ValueError("configurations over different alphabets")
    a, b = x.materialize(depth), y.materialize(depth)
    for i in range(depth):
        if a[i] != b[i]:
            return i
    return None


# ---------------------------------------------------------------------------
# Block decompositions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Run:
    """Maximal run of ``symbol``; ``bound_left`` is the position of the
    differing symbol to its left (the position the erasure rules key on),
    None when the run touches the word boundary on that side."""

    start: int
    length: int
    symbol: str
    bound_left: Optional[int]
    bounded_right: bool

    @property
    def bounded(self) -> bool:
        return self.bound_left is not None and self.bounded_right


@dataclass(frozen=True)
class BlockDecomposition:
    word: str
    runs: tuple
    s_positions: tuple = ()

    def blocks(self, symbol: str):
        """Bounded maximal runs of ``symbol``, as (left-bound position, length)."""
        return [(r.bound_left, r.length) for r in self.runs
                if r.symbol == symbol and r.bounded]

    def unbounded_runs(self, symbol: str):
        return [r for r in self.runs if r.symbol == symbol and not r.bounded]


def parse_blocks(w: str) -> BlockDecomposition:
    runs = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        runs.append(Run(start=i, length=j - i, symbol=w[i],
                        bound_left=i - 1 if i > 0 else None,
                        bounded_right=j < len(w)))
        i = j
    s_pos = tuple(i for i, c in enumerate(w) if c == "S")
    return BlockDecomposition(word=w, runs=tuple(runs), s_positions=s_pos)


def render_runs(runs: Sequence[Run]) -> str:
    return "".join(r.symbol * r.length for r in runs)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def config_to_json(x: Configuration) -> str:
    t = x.tail
    if isinstance(t, Constant):
        tail = {"kind": "constant", "symbol": t.symbol}
    elif isinstance(t, Periodic):
        tail = {"kind": "periodic", "word": t.word}
    elif isinstance(t, Sampler):
        tail = {"kind": "sampler", "alphabet": list(t.alphabet),
                "weights": list(t.weights), "seed": t.seed}
    elif isinstance(t, Scheduled):
        tail = {"kind": "scheduled", "language": t.enumerator, "filler": t.filler}
    else:
        raise TypeError(f"unserializable tail {t!r}")
    return json.dumps({"alphabet": list(x.alphabet.symbols),
                       "prefix": x.prefix, "tail": tail}, indent=2)


def config_from_json(text: str) -> Configuration:
    doc = json.loads(text)
    t = doc["tail"]
    kind = t["kind"]
    if kind == "constant":
        tail = Constant(t["symbol"])
    elif kind == "periodic":
        tail = Periodic(t["word"])
    elif kind == "sampler":
        tail = Sampler(tuple(t["alphabet"]), tuple(t["weights"]), int(t["seed"]))
    elif kind == "scheduled":
        tail = Scheduled(t["language"], t["filler"])
    else:
        raise ValueError(f"unknown tail kind {kind!r}")
    return Configuration(Alphabet(tuple(doc["alphabet"])), doc["prefix"], tail)
