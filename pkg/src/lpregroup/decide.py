"""Decision procedures with verified witnesses.

Three entry points, one per theory:

- decide_fnz: validity over the algebra of n-periodic functions on the
  integer chain.  The search runs over compatible surjections; a failing
  one plus a spacing embedding realizes concrete functions.
- decide_lpn: validity in the variety of n-periodic l-pregroups.  Same
  shape, but the candidates are block-grid diagrams, the embedding is
  shared across blocks, and the witness lives on the lexicographic
  chain Q x Z.
- decide_dlp: validity in distributive l-pregroups, by reduction to
  decide_lpn at an exactly computed period.

A verdict is "valid" only when the failure search space was provably
exhausted: either complete mode, where every embedding refutation is run
up to the re-spacing bound nu and is therefore a proof, or a capped run
whose candidate stream finished with nothing in it.  A "fails" verdict
always carries a witness that has been re-verified by direct evaluation
in the function algebra; "unknown-budget-exhausted" means a node budget
or practical cap stopped the search first.

Capped mode is the default.  It bounds both the number of search nodes
spent enumerating candidates and the effort per embedding attempt, so it
terminates quickly, finds the witnesses that exist at small scale, and
never overclaims.
"""

from __future__ import annotations

import dataclasses
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from . import fnz, lexfn, spacing, term
from .diagram import BudgetExceeded, CChain, SpacingEmbedding
from .fnz import PeriodicFn
from .lexfn import LexFn, PLBijection
from .search import (CompatibleSurjection, NodeBudget, PartitionDiagram,
                     enumerate_compatible_surjections,
                     enumerate_partition_diagrams)
from .term import Equation, IntensionalEquation, point_of_word, word_str

VALID = "valid"
FAILS = "fails"
UNKNOWN = "unknown-budget-exhausted"

# capped-mode defaults: nodes across the whole candidate enumeration, and
# assignment nodes per embedding attempt (refutations are mostly decided
# by interval propagation, so the latter is rarely reached)
DEFAULT_NODE_BUDGET = 2_000_000
EMBED_NODE_BUDGET = 20_000

# largest reduced period decide_dlp will run to completion without force;
# witness realization materializes one period of each function, so truly
# enormous periods are only practical through n_override
DLP_PRACTICAL_MAX = 20_000

_CAPPED = "capped-attempt"

FnPoint = Union[int, tuple[Fraction, int]]


# ----------------------------------------------------------------- results

@dataclass
class Witness:
    """A failing instantiation: a function per variable and a point where
    every joinand of one conjunct lands strictly below it."""

    space: str  # "FnZ" or "FnQxZ"
    n: int
    assignment: dict[str, Union[PeriodicFn, LexFn]]
    point: FnPoint
    conjunct: int = 0
    checked: tuple[tuple[str, FnPoint], ...] = ()

    def to_json(self) -> dict:
        if self.space == "FnZ":
            fn_json = lexfn.fn_to_json
        else:
            fn_json = lexfn.to_json
        return {
            "space": self.space,
            "n": self.n,
            "assignment": {name: fn_json(f)
                           for name, f in sorted(self.assignment.items())},
            "point": _point_to_json(self.space, self.point),
            "conjunct": self.conjunct,
            "checked": [{"word": w, "value": _point_to_json(self.space, v)}
                        for w, v in self.checked],
        }


def _point_to_json(space: str, p: FnPoint):
    if space == "FnZ":
        return p
    return {"q": str(p[0]), "z": p[1]}


def _point_from_json(space: str, data) -> FnPoint:
    if space == "FnZ":
        return int(data)
    return (Fraction(data["q"]), int(data["z"]))


def witness_from_json(data: dict) -> Witness:
    space = data["space"]
    fn_load = lexfn.fn_from_json if space == "FnZ" else lexfn.from_json
    return Witness(
        space=space,
        n=int(data["n"]),
        assignment={name: fn_load(f)
                    for name, f in data["assignment"].items()},
        point=_point_from_json(space, data["point"]),
        conjunct=int(data.get("conjunct", 0)),
        checked=tuple((c["word"], _point_from_json(space, c["value"]))
                      for c in data.get("checked", ())),
    )


@dataclass
class Verdict:
    status: str  # valid / fails / unknown-budget-exhausted
    n: int
    mode: str  # "complete" or "capped"
    witness: Optional[Witness] = None
    stats: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return {VALID: 0, FAILS: 1, UNKNOWN: 2}[self.status]

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "n": self.n,
            "mode": self.mode,
            "witness": self.witness.to_json() if self.witness else None,
            "stats": dict(self.stats),
        }


# ------------------------------------------------------------- realization

def _vars_of(eq: IntensionalEquation) -> list[str]:
    return sorted({name for w in eq.joinands for name, _ in w})


def realize_fnz_witness(phi: CompatibleSurjection, e: SpacingEmbedding,
                        eq: IntensionalEquation, n: int) -> Witness:
    """Concrete n-periodic functions on Z from a failing compatible
    surjection and a spacing embedding of its chain.

    Each variable's counterpart pairs are pushed through the embedding and
    extended periodically; variables with no pairs get the identity.  The
    evaluations are then checked against the diagram, final subword by
    final subword; a mismatch is an internal error, not an input
    condition."""
    fns = {}
    for name in _vars_of(eq):
        pairs = {e(x): e(y) for x, y in phi.fn(name).pairs}
        fns[name] = fnz.extend_partial(pairs, n, permissive=True)
    p = e(phi.value(()))
    checked = []
    for w in eq.joinands:
        for k in range(len(w) + 1):
            got = fnz.eval_word(w[k:], fns, p)
            want = e(phi.value(point_of_word(w[k:])))
            assert got == want, \
                f"realized functions disagree with diagram at {w[k:]}: " \
                f"{got} != {want}"
        v = fnz.eval_word(w, fns, p)
        assert v < p, f"joinand {word_str(w)} not below the point"
        checked.append((word_str(w), v))
    return Witness("FnZ", n, fns, p, 0, tuple(checked))


def realize_lex_witness(pd: PartitionDiagram, e: SpacingEmbedding,
                        eq: IntensionalEquation, n: int) -> Witness:
    """Concrete functions on the lexicographic chain Q x Z from a failing
    block-grid diagram and a shared spacing embedding of its slot chain.

    Blocks sit at the integer rationals.  A variable's block-level
    injection extends to a piecewise-linear bijection through those
    anchor points, and each of its per-block slot functions extends
    n-periodically under the shared embedding; untouched fibers keep the
    identity component.  As in the integer case, every evaluation is
    checked against the diagram before the witness is returned."""
    fns = {}
    for name in _vars_of(eq):
        gt = pd.gtilde(name)
        tilde = PLBijection(tuple((Fraction(j), Fraction(k))
                                  for j, k in sorted(gt.items())))
        comps = []
        for j in sorted(gt):
            pairs = {e(s): e(t) for s, t in pd.gbar(name, j).pairs}
            comps.append((Fraction(j),
                          fnz.extend_partial(pairs, n, permissive=True)))
        fns[name] = LexFn(n, tilde, tuple(comps))
    block, slot = pd.point
    p = (Fraction(block), e(slot))
    checked = []
    for w in eq.joinands:
        for k in range(len(w) + 1):
            got = lexfn.eval_word(w[k:], fns, p)
            wb, ws = pd.phi[point_of_word(w[k:])]
            want = (Fraction(wb), e(ws))
            assert got == want, \
                f"realized functions disagree with diagram at {w[k:]}: " \
                f"{got} != {want}"
        v = lexfn.eval_word(w, fns, p)
        assert v < p, f"joinand {word_str(w)} not below the point"
        checked.append((word_str(w), v))
    return Witness("FnQxZ", n, fns, p, 0, tuple(checked))


def verify_witness(eq: Union[Equation, str], w: Witness) -> bool:
    """Re-check a witness by direct evaluation, independent of the search
    that produced it: every joinand of the claimed conjunct must evaluate
    strictly below the witness point.  Raises KeyError when the
    assignment is missing a variable of that conjunct."""
    conjuncts = _conjuncts(eq)
    if not 0 <= w.conjunct < len(conjuncts):
        return False
    conj = conjuncts[w.conjunct]
    missing = set(_vars_of(conj)) - set(w.assignment)
    if missing:
        raise KeyError(f"assignment missing variables: {sorted(missing)}")
    ev = fnz.eval_word if w.space == "FnZ" else lexfn.eval_word
    return all(ev(jw, w.assignment, w.point) < w.point
               for jw in conj.joinands)


# ------------------------------------------------------------- the drivers

def _conjuncts(eq: Union[Equation, str]) -> list[IntensionalEquation]:
    if isinstance(eq, str):
        eq = term.parse(eq)
    return term.to_intensional(eq)


def _embed_task(args) -> Union[SpacingEmbedding, None, str]:
    chain, fns, n, cap, node_budget = args
    try:
        return spacing.find_witness_embedding(chain, fns, n, cap=cap,
                                              node_budget=node_budget)
    except BudgetExceeded:
        return _CAPPED


def _decide(eq: Union[Equation, str], n: int, complete: bool,
            budget: Optional[int], jobs: int, *, space: str,
            enumerate_failing, chain_of, fns_of, realize) -> Verdict:
    if n < 1:
        raise ValueError(f"period must be positive, got {n}")
    conjuncts = _conjuncts(eq)
    all_names = sorted({name for c in conjuncts for name in _vars_of(c)})
    mode = "complete" if complete else "capped"
    if budget is None:
        budget = None if complete else DEFAULT_NODE_BUDGET
    nb = NodeBudget(budget)
    stats = {"failing_candidates": 0, "embeddings_refuted": 0,
             "attempts_capped": 0}
    t0 = time.perf_counter()
    stopped = False

    def drain(it, k):
        nonlocal stopped
        out = []
        try:
            for cand in it:
                out.append(cand)
                if len(out) >= k:
                    break
        except BudgetExceeded:
            stopped = True
        return out

    def finish(status, witness=None):
        stats["nodes"] = nb.used
        stats["time_s"] = round(time.perf_counter() - t0, 3)
        return Verdict(status, n, mode, witness, stats)

    executor = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for ci, conj in enumerate(conjuncts):
            if stopped:
                break
            it = enumerate_failing(conj, nb)
            while not stopped:
                batch = drain(it, 4 * max(1, jobs))
                if not batch:
                    break
                stats["failing_candidates"] += len(batch)
                tasks = [(chain_of(c), fns_of(c), n,
                          spacing.complete_cap(chain_of(c).size, n)
                          if complete else None,
                          None if complete else EMBED_NODE_BUDGET)
                         for c in batch]
                mapper = executor.map if executor else map
                hit = None
                for cand, emb in zip(batch, mapper(_embed_task, tasks)):
                    if emb == _CAPPED:
                        stats["attempts_capped"] += 1
                    elif emb is None:
                        stats["embeddings_refuted"] += 1
                    elif hit is None:
                        hit = (cand, emb)
                if hit is None:
                    continue
                cand, emb = hit
                w = realize(cand, emb, conj, n)
                ident = fnz.id_fn(n) if space == "FnZ" else lexfn.identity(n)
                w = dataclasses.replace(
                    w, conjunct=ci,
                    assignment={name: w.assignment.get(name, ident)
                                for name in all_names})
                assert verify_witness(eq, w), \
                    "witness failed independent re-verification"
                return finish(FAILS, w)
    finally:
        if executor:
            executor.shutdown(cancel_futures=True)

    if not stopped and (complete or stats["failing_candidates"] == 0):
        return finish(VALID)
    return finish(UNKNOWN)


def decide_fnz(eq: Union[Equation, str], n: int, complete: bool = False,
               budget: Optional[int] = None, jobs: int = 1) -> Verdict:
    """Decide validity of an equation over the n-periodic functions on Z.

    Complete mode exhausts the failing-candidate stream and runs every
    embedding refutation up to the re-spacing bound, so both answers are
    proofs.  Capped mode (the default) stops at a node budget and only
    claims validity when no failing candidate exists at all."""
    return _decide(
        eq, n, complete, budget, jobs,
        space="FnZ",
        enumerate_failing=lambda conj, nb: enumerate_compatible_surjections(
            conj, require_failure=True, budget=nb),
        chain_of=lambda cand: cand.chain,
        fns_of=lambda cand: cand.fns,
        realize=realize_fnz_witness)


def decide_lpn(eq: Union[Equation, str], n: int, complete: bool = False,
               budget: Optional[int] = None, jobs: int = 1) -> Verdict:
    """Decide validity of an equation in the n-periodic variety.

    Candidates are block-grid diagrams; one spacing embedding of the
    shared slot chain must make every block's local function n-periodic
    at once, and a found witness lives on the chain Q x Z with blocks at
    the integer rationals.  Completeness discipline is as in decide_fnz."""
    return _decide(
        eq, n, complete, budget, jobs,
        space="FnQxZ",
        enumerate_failing=lambda conj, nb: enumerate_partition_diagrams(
            conj, require_failure=True, budget=nb),
        chain_of=lambda cand: cand.slot_chain(),
        fns_of=lambda cand: cand.local_fns(),
        realize=realize_lex_witness)


def decide_dlp(eq: Union[Equation, str], complete: bool = False,
               budget: Optional[int] = None, jobs: int = 1,
               n_override: Optional[int] = None,
               force: bool = False) -> Verdict:
    """Decide validity in distributive l-pregroups by reduction.

    An equation of symbol count s holds there iff it holds in the
    n-periodic variety for n = 2^s * s^4.  That period is computed
    exactly (as a big integer) and reported in the verdict.  It grows so
    fast that complete runs are refused above a practicality threshold
    unless force=True; n_override substitutes a chosen period instead,
    which turns the run into a plain decide_lpn call at that period (an
    unconditional answer only for the reduced value)."""
    eqobj = term.parse(eq) if isinstance(eq, str) else eq
    if n_override is not None:
        n = n_override
    else:
        s = term.equation_size(eqobj)
        n = (1 << s) * s ** 4
    if complete and n > DLP_PRACTICAL_MAX and not force:
        raise ValueError(
            f"complete decision at the reduced period n={n} is impractical "
            f"on this machine; pass force=True or use n_override")
    return decide_lpn(eqobj, n, complete=complete, budget=budget, jobs=jobs)
