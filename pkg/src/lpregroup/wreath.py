"""Wreath product of an acting group of translations with the periodic
function algebra, instantiated at desk scale.

An element is a pair (h, comps): a global integer translation h acting on
the index chain Z, and a finite-support family of periodic functions, one
per index, default identity.  Multiplication twists the left factor's
family by the right factor's translation:
    (h1, n1) * (h2, n2) = (h1 + h2, j -> n1(h2 + j) o n2(j)).
The order compares translations first and, where they agree (here: only
when they are equal), compares components pointwise.  Inverses invert the
translation and re-index the componentwise adjoints.

The instantiation keeps the acting part a group on purpose: with a mere
pregroup acting, the natural inversion formulas stop being involutive
(see the negative test exercising that failure).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import fnz, lexfn
from .fnz import PeriodicFn
from .lexfn import LexFn, PLBijection


@dataclass(frozen=True)
class WreathElement:
    n: int
    h: int = 0
    comps: tuple[tuple[int, PeriodicFn], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"period must be >= 1, got {self.n}")
        seen = set()
        kept = []
        for j, f in self.comps:
            if f.n != self.n:
                raise ValueError(f"component period {f.n} != {self.n}")
            if j in seen:
                raise ValueError(f"duplicate component at {j}")
            seen.add(j)
            if f != fnz.id_fn(self.n):
                kept.append((int(j), f))
        kept.sort()
        object.__setattr__(self, "comps", tuple(kept))

    def comp(self, j: int) -> PeriodicFn:
        for jj, f in self.comps:
            if jj == j:
                return f
        return fnz.id_fn(self.n)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j, _ in self.comps)

    def act(self, p: tuple[int, int]) -> tuple[int, int]:
        """Action on the lexicographic product of indices and integers."""
        j, m = p
        return (self.h + j, fnz.eval(self.comp(j), m))


def identity(n: int) -> WreathElement:
    return WreathElement(n)


def _check(a: WreathElement, b: WreathElement):
    if a.n != b.n:
        raise ValueError(f"period mismatch: {a.n} != {b.n}")


def multiply(a: WreathElement, b: WreathElement) -> WreathElement:
    _check(a, b)
    support = set(b.support) | {j - b.h for j in a.support}
    comps = tuple((j, fnz.compose(a.comp(b.h + j), b.comp(j)))
                  for j in sorted(support))
    return WreathElement(a.n, a.h + b.h, comps)


def leq(a: WreathElement, b: WreathElement) -> bool:
    _check(a, b)
    if a.h != b.h:
        return a.h < b.h
    return all(fnz.leq(a.comp(j), b.comp(j))
               for j in set(a.support) | set(b.support))


def join(a: WreathElement, b: WreathElement) -> WreathElement:
    _check(a, b)
    support = sorted(set(a.support) | set(b.support))
    comps = []
    for j in support:
        if a.h + j < b.h + j:
            comps.append((j, b.comp(j)))
        elif b.h + j < a.h + j:
            comps.append((j, a.comp(j)))
        else:
            comps.append((j, fnz.join(a.comp(j), b.comp(j))))
    return WreathElement(a.n, max(a.h, b.h), tuple(comps))


def meet(a: WreathElement, b: WreathElement) -> WreathElement:
    _check(a, b)
    support = sorted(set(a.support) | set(b.support))
    comps = []
    for j in support:
        if a.h + j < b.h + j:
            comps.append((j, a.comp(j)))
        elif b.h + j < a.h + j:
            comps.append((j, b.comp(j)))
        else:
            comps.append((j, fnz.meet(a.comp(j), b.comp(j))))
    return WreathElement(a.n, min(a.h, b.h), tuple(comps))


def linv(a: WreathElement) -> WreathElement:
    """(h, n)^l = (h^-1, n^l twisted by h^-1): component at j is the left
    adjoint of the component at j - h."""
    comps = tuple((j + a.h, fnz.linv(f)) for j, f in a.comps)
    return WreathElement(a.n, -a.h, comps)


def rinv(a: WreathElement) -> WreathElement:
    comps = tuple((j + a.h, fnz.rinv(f)) for j, f in a.comps)
    return WreathElement(a.n, -a.h, comps)


def iter_inv(a: WreathElement, m: int) -> WreathElement:
    out = a
    for _ in range(abs(m)):
        out = linv(out) if m > 0 else rinv(out)
    return out


# ------------------------------------------------- lexicographic transport

def iso_to_lexfn(a: WreathElement) -> LexFn:
    """The same element as a function on Q x Z, indices embedded at the
    integer points of Q."""
    tilde = PLBijection.translation(a.h)
    comps = tuple((Fraction(j), f) for j, f in a.comps)
    return LexFn(a.n, tilde, comps)


def iso_from_lexfn(f: LexFn,
                   grid: Optional[Sequence[Fraction]] = None
                   ) -> WreathElement:
    """Inverse transport.  With no grid, the global part must be an
    integer translation with integer-supported components.  With a grid (a
    strictly increasing tuple of rationals standing for indices 0, 1, ...),
    the global part must shift the grid by a constant number of steps and
    the support must lie on the grid."""
    if grid is None:
        anchors = f.tilde.anchors
        if anchors and anchors != PLBijection.translation(
                anchors[0][1] - anchors[0][0]).anchors:
            raise ValueError("global part is not a translation")
        h = anchors[0][1] - anchors[0][0] if anchors else Fraction(0)
        if h.denominator != 1:
            raise ValueError(f"translation {h} is not an integer")
        comps = []
        for j, c in f.components:
            if j.denominator != 1:
                raise ValueError(f"component index {j} is not an integer")
            comps.append((int(j), c))
        return WreathElement(f.n, int(h), tuple(comps))
    grid = [Fraction(g) for g in grid]
    pos = {g: i for i, g in enumerate(grid)}
    shifts = {pos[f.tilde(g)] - pos[g] for g in grid if f.tilde(g) in pos}
    if len(shifts) != 1:
        raise ValueError("global part does not shift the grid uniformly")
    h = shifts.pop()
    comps = []
    for j, c in f.components:
        if j not in pos:
            raise ValueError(f"component index {j} is off the grid")
        comps.append((pos[j], c))
    return WreathElement(f.n, h, tuple(comps))
