"""Bounded spacing embeddings for integer c-chains.

A finite subset of Z with some designated unit gaps (a sub-c-chain, here
always presented as a SpacingEmbedding) can be re-spaced: moved to a new
strictly increasing image that keeps designated covers at distance 1 and
preserves which partial functions extend to periodic maps.  The point of
re-spacing is height control: every chain admits a 1-periodicity-preserving
embedding of height at most rho(size), and an n-periodicity-preserving one
of height at most nu(size, n), so searches over embeddings can be cut off
at these bounds without losing completeness.

The 1-periodic case reduces to a linear system over the gap deficits
y_k = p_k - p_{k-1} - 1: a translation by c that maps chain points to chain
points forces pairs of segments to keep equal lengths, which is one linear
row per pair of positions in the translation's domain; designated covers
force y_k = 0.  Any nonnegative solution re-spaces the chain, and a classic
bound on small nonnegative solutions of integer systems caps the search.

The n-periodic case folds the chain by the period: divide all points by n,
pad with neighbors, re-space the quotient chain 1-periodically (unit gaps in
the quotient are kept designated so that carries across period boundaries
survive), then recombine as position*n + original remainder.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from . import fnz
from .diagram import BudgetExceeded, CChain, PartialFn, SpacingEmbedding

# gap vectors are plain tuples of nonnegative ints, one entry per
# consecutive pair of chain points
GapVector = tuple[int, ...]

# gap intervals wider than this are bisected instead of enumerated
_SPLIT_WIDTH = 16


def rho(a: int) -> int:
    """Height bound for 1-periodicity-preserving re-spacing of an a-point
    chain."""
    return 2 * a ** 3 * math.factorial(a) + a + 1


def nu(a: int, n: int) -> int:
    """Height bound for n-periodicity-preserving re-spacing of an a-point
    chain."""
    return (rho(3 * a) + 1) * n


def complete_cap(size: int, n: int) -> int:
    """The height bound that turns a refuted embedding search into a
    proof: any witness embedding re-spaces below it.  The 1-periodic
    re-spacing bound is much smaller than the general one."""
    return rho(size) if n == 1 else nu(size, n)


@dataclass(frozen=True)
class LinearSystem:
    """Integer system rows . Y = rhs over nonnegative gap deficits."""

    rows: tuple[tuple[int, ...], ...]
    rhs: tuple[int, ...]
    num_vars: int

    def __post_init__(self):
        assert len(self.rows) == len(self.rhs)
        assert all(len(r) == self.num_vars for r in self.rows)


def build_1transfer_system(e: SpacingEmbedding) -> LinearSystem:
    """The linear system over gap deficits whose nonnegative solutions are
    exactly the re-spacings of e's image that preserve 1-periodicity of all
    restricted translations.

    For every translation constant c realized inside the point set, and
    every two domain positions z < j of that translation, the segment
    [z, j] and its image segment [z', j'] must keep equal length, which in
    deficit coordinates reads
        sum((z, j], Y) - sum((z', j'], Y) = (j' - z') - (j - z).
    Designated covers contribute Y_k = 0.
    """
    pos = e.positions
    npts = len(pos)
    index = {p: i for i, p in enumerate(pos)}
    nvars = npts - 1
    orig_y = tuple(pos[k + 1] - pos[k] - 1 for k in range(nvars))

    rows: dict[tuple[int, ...], int] = {}

    def add_row(coefs: tuple[int, ...], rhs: int):
        if all(c == 0 for c in coefs):
            assert rhs == 0, "inconsistent zero row from a valid chain"
            return
        prev = rows.setdefault(coefs, rhs)
        assert prev == rhs, "conflicting rows from a valid chain"

    diffs = {b - a for a in pos for b in pos if a != b}
    for c in sorted(diffs):
        dom = [i for i in range(npts) if pos[i] + c in index]
        img = {i: index[pos[i] + c] for i in dom}
        for z, j in itertools.combinations(dom, 2):
            zp, jp = img[z], img[j]
            coefs = tuple((1 if z < k <= j else 0) - (1 if zp < k <= jp else 0)
                          for k in range(1, npts))
            rhs = (jp - zp) - (j - z)
            assert all(v in (-1, 0, 1) for v in coefs)
            assert abs(rhs) <= 2 * npts
            add_row(coefs, rhs)
    for a, b in e.chain.covers:
        coefs = tuple(1 if k == b else 0 for k in range(1, npts))
        add_row(coefs, 0)

    system = LinearSystem(tuple(rows), tuple(rows[r] for r in rows), nvars)
    for coefs, rhs in zip(system.rows, system.rhs):
        assert sum(c * y for c, y in zip(coefs, orig_y)) == rhs, \
            "input chain must solve its own system"
    return system


# ------------------------------------------------------ bounded solving

def _independent_rows(system: LinearSystem) -> Optional[list[int]]:
    """Indices of a maximal independent row set of (A|b); None if the
    system is inconsistent."""
    nv = system.num_vars
    reduced: list[tuple[list[Fraction], int]] = []  # (row, pivot col)
    chosen: list[int] = []
    for ridx, (coefs, rhs) in enumerate(zip(system.rows, system.rhs)):
        row = [Fraction(c) for c in coefs] + [Fraction(rhs)]
        for done, pivot in reduced:
            if row[pivot]:
                f = row[pivot] / done[pivot]
                row = [a - f * b for a, b in zip(row, done)]
        pivot = next((k for k in range(nv + 1) if row[k]), None)
        if pivot is None:
            continue
        if pivot == nv:
            return None  # 0 = nonzero
        reduced.append((row, pivot))
        chosen.append(ridx)
    return chosen


def _minor_bound(system: LinearSystem, row_idx: list[int],
                 max_exact: int = 4000) -> int:
    """Largest absolute M x M minor of the augmented independent rows,
    computed exactly when there are few column choices, otherwise bounded
    from above by Hadamard's inequality (any upper bound keeps the small-
    solution guarantee valid)."""
    m = len(row_idx)
    if m == 0:
        return 1
    aug = [list(system.rows[i]) + [system.rhs[i]] for i in row_idx]
    ncols = len(aug[0])
    if math.comb(ncols, m) <= max_exact:
        best = 0
        for cols in itertools.combinations(range(ncols), m):
            sub = [[Fraction(aug[r][c]) for c in cols] for r in range(m)]
            best = max(best, abs(_det(sub)))
        return int(best) if best else 1
    bound = 1
    for row in aug:
        norm2 = sum(v * v for v in row)
        bound *= math.isqrt(norm2) + 1
    return bound


def _det(mat: list[list[Fraction]]) -> Fraction:
    n = len(mat)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        for r in range(col + 1, n):
            f = mat[r][col] / mat[col][col]
            mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
    return det


def solve_bounded_nonneg(system: LinearSystem) -> Optional[GapVector]:
    """Lexicographically smallest nonnegative integer solution, or None.

    A consistent system with some nonnegative solution always has one with
    entries at most (l - M + 1) * gamma, where M is the rank and gamma the
    largest absolute M x M minor of the reduced augmented matrix, so the
    search space is a finite box.  Depth-first search with per-row interval
    propagation, trying small values first.
    """
    nv = system.num_vars
    if nv == 0:
        return ()
    indep = _independent_rows(system)
    if indep is None:
        return None
    m = len(indep)
    bound = (nv - m + 1) * _minor_bound(system, indep)

    lo = [0] * nv
    hi = [bound] * nv
    rows = list(zip(system.rows, system.rhs))

    def propagate(lo, hi) -> bool:
        changed = True
        while changed:
            changed = False
            for coefs, rhs in rows:
                smin = sum(c * (lo[i] if c > 0 else hi[i])
                           for i, c in enumerate(coefs) if c)
                smax = sum(c * (hi[i] if c > 0 else lo[i])
                           for i, c in enumerate(coefs) if c)
                if not smin <= rhs <= smax:
                    return False
                for i, c in enumerate(coefs):
                    if not c:
                        continue
                    rest_min = smin - c * (lo[i] if c > 0 else hi[i])
                    rest_max = smax - c * (hi[i] if c > 0 else lo[i])
                    # c*y_i must lie in [rhs - rest_max, rhs - rest_min]
                    if c > 0:
                        new_lo = -((rest_max - rhs) // c)
                        new_hi = (rhs - rest_min) // c
                    else:
                        new_lo = -((rhs - rest_min) // -c)
                        new_hi = (rest_max - rhs) // -c
                    if new_lo > lo[i]:
                        lo[i] = new_lo
                        changed = True
                    if new_hi < hi[i]:
                        hi[i] = new_hi
                        changed = True
                    if lo[i] > hi[i]:
                        return False
        return True

    def dfs(lo, hi) -> Optional[list[int]]:
        if not propagate(lo, hi):
            return None
        free = next((i for i in range(nv) if lo[i] < hi[i]), None)
        if free is None:
            if all(sum(c * lo[i] for i, c in enumerate(coefs)) == rhs
                   for coefs, rhs in rows):
                return lo
            return None
        for v in range(lo[free], hi[free] + 1):
            nlo, nhi = lo[:], hi[:]
            nlo[free] = nhi[free] = v
            got = dfs(nlo, nhi)
            if got is not None:
                return got
        return None

    got = dfs(lo, hi)
    return tuple(got) if got is not None else None


# -------------------------------------------------------- short transfers

def find_short_1transfer(e: SpacingEmbedding) -> SpacingEmbedding:
    """Re-space an integer sub-c-chain, preserving 1-periodicity transfer,
    with height at most rho(size)."""
    system = build_1transfer_system(e)
    y = solve_bounded_nonneg(system)
    assert y is not None, "own chain solves the system, so must the search"
    positions = [0]
    for k, deficit in enumerate(y):
        positions.append(positions[-1] + deficit + 1)
    out = SpacingEmbedding(e.chain, tuple(positions))
    assert out.height <= rho(e.chain.size)
    return out


def find_short_ntransfer(e: SpacingEmbedding, n: int) -> SpacingEmbedding:
    """Re-space an integer sub-c-chain, preserving n-periodicity transfer,
    with height at most nu(size, n).

    Folds by the period: quotient points q = x // n padded with q +- 1, unit
    gaps in the quotient designated as covers (a carry across a period
    boundary must stay a unit step for the recombined map to respect both
    the original covers and the periodic arithmetic), then 1-periodic
    re-spacing of the quotient and recombination with the remainders.
    """
    if n < 1:
        raise ValueError(f"period must be >= 1, got {n}")
    xs = e.positions
    folded = sorted({x // n + d for x in xs for d in (-1, 0, 1)})
    covers = frozenset((i, i + 1) for i in range(len(folded) - 1)
                       if folded[i + 1] == folded[i] + 1)
    quotient = SpacingEmbedding(CChain(len(folded), covers), tuple(folded))
    d = find_short_1transfer(quotient)
    qindex = {q: i for i, q in enumerate(folded)}
    raw = [d(qindex[x // n]) * n + x % n for x in xs]
    # periodicity transfer is translation-invariant, so normalize to min 0
    out = SpacingEmbedding(e.chain, tuple(p - raw[0] for p in raw))
    assert out.height <= nu(e.chain.size, n)
    return out


def transfers_periodicity(before: SpacingEmbedding, after: SpacingEmbedding,
                          f: fnz.PeriodicFn) -> bool:
    """Whether re-spacing `before` as `after` keeps the restriction of f
    extendable to a periodic map (the property the short transfers
    guarantee for every f)."""
    pts = set(before.positions)
    index = {p: i for i, p in enumerate(before.positions)}
    cp = {after(index[p]): after(index[fnz.eval(f, p)])
          for p in before.positions if fnz.eval(f, p) in pts}
    return fnz.is_periodic_pairs(cp, f.n)


# --------------------------------------------------- witness embeddings

def _ceil_div(a: int, n: int) -> int:
    return -(a // -n)


def _translation_closure(fns, ngaps, fixed, cap):
    """Exact linear reasoning for n = 1, where a counterpart is periodic
    iff it is a partial translation: consecutive pairs of each function
    force segment-sum equalities over the gaps.  Gaussian elimination
    either refutes the system outright (rank or interval contradiction)
    or returns its reduced rows, whose cancelled combinations sharpen
    interval propagation far beyond the raw constraints.  Returns None
    when refuted, else a list of integer equality rows (coeffs, rhs)."""
    rows = []
    for g in fns:
        pairs = sorted(g.pairs)
        for (x1, y1), (x2, y2) in zip(pairs, pairs[1:]):
            row = [Fraction(0)] * ngaps
            for k in range(min(x1, x2), max(x1, x2)):
                row[k] += 1 if x2 > x1 else -1
            for k in range(min(y1, y2), max(y1, y2)):
                row[k] -= 1 if y2 > y1 else -1
            rhs = Fraction(0)
            for k in fixed:
                rhs -= row[k]
                row[k] = Fraction(0)
            if any(row):
                rows.append((row, rhs))
            elif rhs:
                return None
    piv = 0
    for col in range(ngaps):
        if col in fixed:
            continue
        j = next((i for i in range(piv, len(rows)) if rows[i][0][col]), None)
        if j is None:
            continue
        rows[piv], rows[j] = rows[j], rows[piv]
        prow, prhs = rows[piv]
        for i in range(len(rows)):
            if i != piv and rows[i][0][col]:
                f = rows[i][0][col] / prow[col]
                rows[i] = ([a - f * b for a, b in zip(rows[i][0], prow)],
                           rows[i][1] - f * prhs)
        piv += 1
    out = []
    for row, rhs in rows:
        if not any(row):
            if rhs:
                return None
            continue
        scale = math.lcm(*(c.denominator for c in row + [rhs]))
        irow = [int(c * scale) for c in row]
        irhs = int(rhs * scale)
        # sound interval refutation: every non-fixed gap lies in [1, cap]
        low = sum(c * (1 if c > 0 else cap) for c in irow if c)
        high = sum(c * (cap if c > 0 else 1) for c in irow if c)
        if not low <= irhs <= high:
            return None
        out.append((irow, irhs))
    return out


def find_witness_embedding(chain: CChain,
                           fns: Mapping[str, PartialFn] | Iterable[PartialFn],
                           n: int,
                           cap: Optional[int] = None,
                           node_budget: Optional[int] = None
                           ) -> Optional[SpacingEmbedding]:
    """Search for a spacing embedding of the chain under which every given
    partial function is n-periodic (its counterpart extends to a periodic
    map), with height at most cap.

    Returns the embedding with the lexicographically smallest gap vector,
    or None if there is none up to the cap.  The default cap is a small
    practical one; passing cap=nu(chain.size, n) makes None a proof that no
    embedding exists at all, since a witness of any height can be re-spaced
    below that bound.  Raises BudgetExceeded after node_budget assignments.

    n-periodicity of a counterpart is the pairwise condition
    ceil((e(y)-e(y'))/n) <= ceil((e(x)-e(x'))/n) over pairs (x,y), (x',y')
    of each function; both sides are signed sums of gaps, so interval
    propagation over the gap domains prunes the search.
    """
    if isinstance(fns, Mapping):
        fns = list(fns.values())
    else:
        fns = list(fns)
    q = chain.size
    if cap is None:
        cap = (q + 1) * n + q
    ngaps = q - 1
    if ngaps == 0:
        return SpacingEmbedding(chain, (0,))

    # constraints: (ya, yb, xa, xb) demanding
    #   ceil((P(ya)-P(yb))/n) <= ceil((P(xa)-P(xb))/n)
    constraints = []
    for g in fns:
        for (x1, y1), (x2, y2) in itertools.permutations(g.pairs, 2):
            constraints.append((y1, y2, x1, x2))

    def coef(a, b):
        """Gap coefficients of P(a) - P(b)."""
        row = [0] * ngaps
        for k in range(min(a, b), max(a, b)):
            row[k] = 1 if a > b else -1
        return row

    # each constraint also implies the linear row (Y - X) <= n - 1 over the
    # gaps.  Shared gaps cancel algebraically here, which matters: when Y
    # and X overlap, interval propagation only transfers their difference
    # one pass at a time, far too slowly for completeness-scale caps
    rows = []
    for ya, yb, xa, xb in constraints:
        cy, cx = coef(ya, yb), coef(xa, xb)
        row = [p - q for p, q in zip(cy, cx)]
        if any(row):
            rows.append((row, n - 1))

    lo = [1] * ngaps
    hi = [cap - (ngaps - 1)] * ngaps
    for a, b in chain.covers:
        hi[b - 1] = 1
    if any(l > h for l, h in zip(lo, hi)):
        return None

    def seg(a, b, lo, hi):
        """Interval of P(b) - P(a) for a <= b (gap k spans points k, k+1)."""
        return (sum(lo[a:b]), sum(hi[a:b]))

    def diff_interval(a, b, lo, hi):
        """Interval of P(a) - P(b)."""
        if a >= b:
            s = seg(b, a, lo, hi)
            return s
        s = seg(a, b, lo, hi)
        return (-s[1], -s[0])

    def tighten_upper(a, b, bound, lo, hi):
        """Constrain P(b) - P(a) <= bound (a <= b)."""
        ok = True
        smin, _ = seg(a, b, lo, hi)
        if smin > bound:
            return False
        for k in range(a, b):
            new = bound - (smin - lo[k])
            if new < hi[k]:
                hi[k] = new
                if lo[k] > hi[k]:
                    ok = False
        return ok

    def tighten_lower(a, b, bound, lo, hi):
        """Constrain P(b) - P(a) >= bound (a <= b)."""
        ok = True
        _, smax = seg(a, b, lo, hi)
        if smax < bound:
            return False
        for k in range(a, b):
            new = bound - (smax - hi[k])
            if new > lo[k]:
                lo[k] = new
                if lo[k] > hi[k]:
                    ok = False
        return ok

    def bound_diff_upper(a, b, bound, lo, hi):
        """Constrain P(a) - P(b) <= bound."""
        if a >= b:
            return tighten_upper(b, a, bound, lo, hi)
        return tighten_lower(a, b, -bound, lo, hi)

    def bound_diff_lower(a, b, bound, lo, hi):
        """Constrain P(a) - P(b) >= bound."""
        if a >= b:
            return tighten_lower(b, a, bound, lo, hi)
        return tighten_upper(a, b, -bound, lo, hi)

    if n == 1:
        fixed = {b - 1 for a, b in chain.covers}
        closure = _translation_closure(fns, ngaps, fixed, cap)
        if closure is None:
            return None
        for irow, irhs in closure:
            rows.append((irow, irhs))
            rows.append(([-c for c in irow], -irhs))

    def linear_rows(lo, hi) -> bool:
        """One-shot box consistency for the cancelled linear rows."""
        for row, rhs in rows:
            base = sum(c * (lo[k] if c > 0 else hi[k])
                       for k, c in enumerate(row) if c)
            if base > rhs:
                return False
            for k, c in enumerate(row):
                if not c:
                    continue
                slack = rhs - base + c * (lo[k] if c > 0 else hi[k])
                if c > 0:
                    if slack // c < hi[k]:
                        hi[k] = slack // c
                else:
                    if -(slack // -c) > lo[k]:
                        lo[k] = -(slack // -c)
                if lo[k] > hi[k]:
                    return False
        return True

    max_passes = 20 * (ngaps + len(constraints) + 1)

    def propagate(lo, hi) -> bool:
        for _ in range(max_passes):
            before = (tuple(lo), tuple(hi))
            if not tighten_upper(0, ngaps, cap, lo, hi):
                return False
            if not linear_rows(lo, hi):
                return False
            for ya, yb, xa, xb in constraints:
                xlo, xhi = diff_interval(xa, xb, lo, hi)
                ylo, yhi = diff_interval(ya, yb, lo, hi)
                if _ceil_div(ylo, n) > _ceil_div(xhi, n):
                    return False
                if not bound_diff_upper(ya, yb, n * _ceil_div(xhi, n),
                                        lo, hi):
                    return False
                if not bound_diff_lower(xa, xb,
                                        n * (_ceil_div(ylo, n) - 1) + 1,
                                        lo, hi):
                    return False
            if (tuple(lo), tuple(hi)) == before:
                return True
        return True  # propagation out of passes: sound, just less pruning

    nodes = [0]

    def dfs(lo, hi) -> Optional[list[int]]:
        if node_budget is not None:
            nodes[0] += 1
            if nodes[0] > node_budget:
                raise BudgetExceeded(
                    f"witness embedding search exceeded {node_budget} nodes")
        if not propagate(lo, hi):
            return None
        free = next((k for k in range(ngaps) if lo[k] < hi[k]), None)
        if free is None:
            return lo
        if hi[free] - lo[free] >= _SPLIT_WIDTH:
            # completeness caps leave enormous intervals; bisect so a
            # contradiction surfaces after logarithmically many splits.
            # Lower half first keeps the result lexicographically smallest.
            mid = lo[free] + (hi[free] - lo[free]) // 2
            nlo, nhi = lo[:], hi[:]
            nhi[free] = mid
            got = dfs(nlo, nhi)
            if got is not None:
                return got
            nlo, nhi = lo[:], hi[:]
            nlo[free] = mid + 1
            return dfs(nlo, nhi)
        for v in range(lo[free], hi[free] + 1):
            nlo, nhi = lo[:], hi[:]
            nlo[free] = nhi[free] = v
            got = dfs(nlo, nhi)
            if got is not None:
                return got
        return None

    gaps = dfs(lo, hi)
    if gaps is None:
        return None
    positions = [0]
    for gsize in gaps:
        positions.append(positions[-1] + gsize)
    out = SpacingEmbedding(chain, tuple(positions))
    assert out.height <= cap
    for g in fns:
        cp = {out(x): out(y) for x, y in g.pairs}
        assert fnz.is_periodic_pairs(cp, n), "solution must verify"
    return out
