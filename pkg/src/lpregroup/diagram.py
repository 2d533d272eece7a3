"""Finite chains with designated covers, and partial-function diagrams.

A c-chain is {0, ..., size-1} together with a set of adjacent pairs
(a, a+1) designated as covers.  Designated covers are the pairs a spacing
embedding into Z must keep at distance exactly 1; everything else may be
spread apart.

A partial order-preserving function g on a c-chain has bracket inverses,
partial analogues of the residuals of a total map on Z:

    ell_bracket(g)(x) = b  iff  (b-1, b) is a designated cover, both ends
                                lie in dom(g), and g(b-1) < x <= g(b)
    r_bracket(g)(x)   = a  iff  (a, a+1) is a designated cover, both ends
                                lie in dom(g), and g(a) <= x < g(a+1)

Iterating alternately in either direction gives g^[m] for every integer m.
The point of the definition: if e is a spacing embedding and f is any
order-preserving extension of the counterpart e.g.e^-1 to all of Z, then the
e-image of every g^[m] pair is realized by the m-th iterated residual of f.
So bracket values computed on the finite diagram are guaranteed evaluations
in the function algebra, and they only grow as the diagram gains pairs or
covers (never change or disappear), which is what makes incremental pruning
during diagram search sound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import fnz


class BudgetExceeded(RuntimeError):
    """Raised when a search exhausts its node budget before finishing."""


@dataclass(frozen=True)
class CChain:
    """A finite chain 0..size-1 with designated covers (subset of the
    adjacent pairs)."""

    size: int
    covers: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"chain size must be >= 1, got {self.size}")
        object.__setattr__(self, "covers", frozenset(self.covers))
        for a, b in self.covers:
            if b != a + 1 or not 0 <= a < b < self.size:
                raise ValueError(f"not an adjacent pair in the chain: {(a, b)}")

    def points(self) -> range:
        return range(self.size)


@dataclass(frozen=True)
class PartialFn:
    """An order-preserving partial function, stored as pairs sorted by
    argument."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted(self.pairs))
        object.__setattr__(self, "pairs", pairs)
        for (x, y), (x2, y2) in zip(pairs, pairs[1:]):
            if x == x2:
                raise ValueError(f"two values at {x}: {y} and {y2}")
            if y > y2:
                raise ValueError(f"not order-preserving: {x}->{y}, {x2}->{y2}")

    @classmethod
    def from_mapping(cls, m: Mapping[int, int]) -> "PartialFn":
        return cls(tuple(m.items()))

    def mapping(self) -> dict[int, int]:
        return dict(self.pairs)

    def domain(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.pairs)

    def get(self, x: int, default=None):
        for a, b in self.pairs:
            if a == x:
                return b
        return default

    def __contains__(self, x: int) -> bool:
        return any(a == x for a, _ in self.pairs)


@dataclass
class Diagram:
    """A c-chain together with one partial function per variable."""

    chain: CChain
    fns: dict[str, PartialFn] = field(default_factory=dict)

    def __post_init__(self):
        for name, g in self.fns.items():
            for x, y in g.pairs:
                if not (0 <= x < self.chain.size and 0 <= y < self.chain.size):
                    raise ValueError(
                        f"pair {x}->{y} of {name} is outside the chain")


@dataclass(frozen=True)
class SpacingEmbedding:
    """A strictly increasing map of a c-chain into Z sending designated
    covers to pairs at distance exactly 1."""

    chain: CChain
    positions: tuple[int, ...]

    def __post_init__(self):
        if len(self.positions) != self.chain.size:
            raise ValueError("one position per chain point required")
        for p, q in zip(self.positions, self.positions[1:]):
            if p >= q:
                raise ValueError(f"positions must strictly increase: {p}, {q}")
        for a, b in self.chain.covers:
            if self.positions[b] != self.positions[a] + 1:
                raise ValueError(
                    f"designated cover {(a, b)} not at distance 1: "
                    f"{self.positions[a]}, {self.positions[b]}")

    def __call__(self, x: int) -> int:
        return self.positions[x]

    @property
    def height(self) -> int:
        return self.positions[-1] - self.positions[0]


def ell_bracket(g: PartialFn, chain: CChain) -> PartialFn:
    """Partial left inverse of g along designated covers."""
    gm = g.mapping()
    out = {}
    for a, b in chain.covers:
        if a in gm and b in gm:
            for x in range(gm[a] + 1, gm[b] + 1):
                if 0 <= x < chain.size:
                    out[x] = b
    return PartialFn.from_mapping(out)


def r_bracket(g: PartialFn, chain: CChain) -> PartialFn:
    """Partial right inverse of g along designated covers."""
    gm = g.mapping()
    out = {}
    for a, b in chain.covers:
        if a in gm and b in gm:
            for x in range(gm[a], gm[b]):
                if 0 <= x < chain.size:
                    out[x] = a
    return PartialFn.from_mapping(out)


def iter_bracket(g: PartialFn, chain: CChain, m: int) -> PartialFn:
    """m-fold bracket iterate: g^[0] = g, g^[k+1] = (g^[k])^[l], and
    g^[-(k+1)] = (g^[-k])^[r]."""
    out = g
    for _ in range(abs(m)):
        out = ell_bracket(out, chain) if m > 0 else r_bracket(out, chain)
    return out


def counterpart(g: PartialFn, e: SpacingEmbedding) -> dict[int, int]:
    """The partial function e.g.e^-1 on Z induced by a spacing embedding."""
    return {e(x): e(y) for x, y in g.pairs}


def check_n_periodic(h: Mapping[int, int], n: int) -> bool:
    """Whether a finite partial function on Z is n-periodic, i.e. extends to
    an element of the n-periodic function algebra.  Single pairwise ceiling
    test; see fnz.is_periodic_pairs for the reduction from the forall-k
    definition."""
    return fnz.is_periodic_pairs(h, n)
