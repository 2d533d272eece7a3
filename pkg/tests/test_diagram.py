"""Tests for c-chains, brackets, counterparts and spacing embeddings.

The load-bearing property here is realization: bracket pairs computed on the
finite diagram must be honored by every periodic extension of the embedded
counterpart.  That is what lets a finite certificate stand in for a function
algebra computation, so it gets a direct property test, as does monotone
growth of brackets under diagram extension (the soundness of incremental
pruning rests on it).
"""

import pytest
from hypothesis import assume, given, settings, strategies as st

from lpregroup import fnz
from lpregroup.diagram import (CChain, Diagram, PartialFn, SpacingEmbedding,
                               check_n_periodic, counterpart, ell_bracket,
                               iter_bracket, r_bracket)


# ------------------------------------------------------------- strategies

@st.composite
def chain_and_fn(draw, max_size=5):
    size = draw(st.integers(2, max_size))
    covers = frozenset((a, a + 1) for a in range(size - 1)
                       if draw(st.booleans()))
    chain = CChain(size, covers)
    dom = sorted(draw(st.sets(st.integers(0, size - 1), max_size=size)))
    vals = sorted(draw(st.lists(st.integers(0, size - 1), min_size=len(dom),
                                max_size=len(dom))))
    return chain, PartialFn(tuple(zip(dom, vals)))


@st.composite
def embedded(draw, max_size=5):
    chain, g = draw(chain_and_fn(max_size=max_size))
    pos = [draw(st.integers(-4, 4))]
    for a in range(chain.size - 1):
        gap = 1 if (a, a + 1) in chain.covers else draw(st.integers(1, 3))
        pos.append(pos[-1] + gap)
    return chain, g, SpacingEmbedding(chain, tuple(pos))


# ------------------------------------------------------------- unit tests

def test_partial_fn_validation():
    with pytest.raises(ValueError):
        PartialFn(((0, 2), (1, 1)))     # order violated
    with pytest.raises(ValueError):
        PartialFn(((0, 2), (0, 3)))     # two values at one point
    assert PartialFn(((2, 2), (0, 1))).domain() == (0, 2)


def test_chain_validation():
    with pytest.raises(ValueError):
        CChain(3, frozenset({(0, 2)}))
    with pytest.raises(ValueError):
        CChain(2, frozenset({(1, 2)}))
    assert list(CChain(3).points()) == [0, 1, 2]


def test_embedding_validation():
    chain = CChain(3, frozenset({(0, 1)}))
    SpacingEmbedding(chain, (0, 1, 5))
    with pytest.raises(ValueError):
        SpacingEmbedding(chain, (0, 2, 5))   # cover stretched
    with pytest.raises(ValueError):
        SpacingEmbedding(chain, (0, 0, 5))   # not strictly increasing
    with pytest.raises(ValueError):
        SpacingEmbedding(chain, (0, 1))      # wrong length


def test_diagram_validation():
    chain = CChain(2)
    with pytest.raises(ValueError):
        Diagram(chain, {"x": PartialFn(((0, 5),))})
    Diagram(chain, {"x": PartialFn(((0, 1),))})


def test_bracket_hand_example():
    chain = CChain(4, frozenset({(0, 1)}))
    g = PartialFn(((0, 1), (1, 2)))
    assert ell_bracket(g, chain).pairs == ((2, 1),)
    assert r_bracket(g, chain).pairs == ((1, 0),)
    # no covers, no brackets
    assert ell_bracket(g, CChain(4)).pairs == ()


def test_iter_bracket_directions():
    chain = CChain(4, frozenset({(0, 1), (1, 2)}))
    g = PartialFn(((0, 0), (1, 2), (2, 3)))
    assert iter_bracket(g, chain, 0) == g
    assert iter_bracket(g, chain, 1) == ell_bracket(g, chain)
    assert iter_bracket(g, chain, -1) == r_bracket(g, chain)
    assert iter_bracket(g, chain, -2) == r_bracket(r_bracket(g, chain), chain)


def test_counterpart_is_conjugation():
    chain = CChain(3, frozenset({(1, 2)}))
    e = SpacingEmbedding(chain, (0, 3, 4))
    g = PartialFn(((0, 1), (2, 2)))
    assert counterpart(g, e) == {0: 3, 4: 4}


# --------------------------------------------------------- property tests

@settings(max_examples=300)
@given(embedded(), st.integers(1, 3), st.integers(-3, 3))
def test_bracket_pairs_realized_by_periodic_extensions(setup, n, m):
    chain, g, e = setup
    cp = counterpart(g, e)
    assume(cp and check_n_periodic(cp, n))
    f = fnz.extend_partial(cp, n)
    fm = fnz.iter_inv(f, m)
    for x, y in iter_bracket(g, chain, m).pairs:
        assert fnz.eval(fm, e(x)) == e(y)


@settings(max_examples=200)
@given(chain_and_fn(), st.data(), st.integers(-3, 3))
def test_brackets_grow_monotonically(setup, data, m):
    chain, g = setup
    sub_pairs = tuple(p for p in g.pairs if data.draw(st.booleans()))
    sub_covers = frozenset(c for c in chain.covers if data.draw(st.booleans()))
    sub_chain = CChain(chain.size, sub_covers)
    small = set(iter_bracket(PartialFn(sub_pairs), sub_chain, m).pairs)
    big = set(iter_bracket(g, chain, m).pairs)
    assert small <= big


@given(st.dictionaries(st.integers(-6, 6), st.integers(-6, 6), max_size=4),
       st.integers(1, 3))
def test_check_n_periodic_agrees_with_fnz(pairs, n):
    assert check_n_periodic(pairs, n) == fnz.is_periodic_pairs(pairs, n)
