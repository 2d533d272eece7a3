"""Tests for parsing, intensional normalization and the point set.

The normalization oracle is semantic: an equation and its intensional form
must agree on every concrete assignment of n-periodic functions, because
each rewriting step is an equivalence over those algebras.  Evaluating both
sides directly is a complete check up to the sampled assignments and is
where any distribution or inverse-pushing bug would surface.
"""

import pytest
from hypothesis import given, settings, strategies as st

from lpregroup import fnz, term
from lpregroup.term import (Equation, IntensionalEquation, Inv, Join, Meet,
                            ParseError, Prod, Unit, Var, delta_epsilon,
                            final_subwords, parse, point_of_word, point_str,
                            to_intensional)

from test_fnz import periodic_fns


# ----------------------------------------------------------------- oracles

def eval_term(t, asg, n):
    """Direct evaluation of a term AST in the n-periodic function algebra."""
    if isinstance(t, Var):
        return asg[t.name]
    if isinstance(t, Unit):
        return fnz.id_fn(n)
    if isinstance(t, Inv):
        return fnz.iter_inv(eval_term(t.arg, asg, n), t.m)
    vals = [eval_term(a, asg, n) for a in t.args]
    out = vals[0]
    for v in vals[1:]:
        if isinstance(t, Prod):
            out = fnz.compose(out, v)
        elif isinstance(t, Join):
            out = fnz.join(out, v)
        else:
            out = fnz.meet(out, v)
    return out


def equation_holds(eq: Equation, asg, n) -> bool:
    lhs, rhs = eval_term(eq.lhs, asg, n), eval_term(eq.rhs, asg, n)
    if eq.relation == "<=":
        return fnz.leq(lhs, rhs)
    return lhs == rhs


def conjunct_holds(c: IntensionalEquation, asg, n) -> bool:
    # 1 <= join of words, checked on one period
    return all(any(fnz.eval_word(w, asg, p) >= p for w in c.joinands)
               for p in range(n))


# ------------------------------------------------------------------ parser

def test_parse_literals_and_precedence():
    assert parse("x <= y") == Equation(Var("x"), Var("y"), "<=")
    eq = parse("x y | z & w = 1")
    assert eq.lhs == Join((Prod((Var("x"), Var("y"))),
                           Meet((Var("z"), Var("w")))))
    assert eq.rhs == Unit()


def test_parse_postfix():
    assert parse("x^l = x^r") == Equation(Inv(Var("x"), 1),
                                          Inv(Var("x"), -1), "=")
    assert parse("x^l^l <= 1").lhs == Inv(Inv(Var("x"), 1), 1)
    assert parse("x^(-2) <= 1").lhs == Inv(Var("x"), -2)
    assert parse("(x y)^l <= 1").lhs == Inv(Prod((Var("x"), Var("y"))), 1)


def test_parse_explicit_star_and_parens():
    assert parse("x * y <= x y") == Equation(Prod((Var("x"), Var("y"))),
                                             Prod((Var("x"), Var("y"))), "<=")
    assert parse("(x | y) z <= 1").lhs == Prod((Join((Var("x"), Var("y"))),
                                                Var("z")))


def test_parse_errors():
    for bad in ["x <", "x <= ", "<= x", "x ^ q <= 1", "x^() <= 1",
                "2 <= x", "x & <= y", "x <= y)", "x@y <= 1", "x <= y z)"]:
        with pytest.raises(ParseError):
            parse(bad)


def test_sizes():
    assert term.equation_size(parse("x <= x^l")) == 3
    assert term.equation_size(parse("1 <= x")) == 2
    assert term.equation_size(parse("x y = y x")) == 6
    assert term.equation_size(parse("x^(4) = x")) == 6
    assert term.equation_size(parse("x | 1 <= x & x")) == 6


def test_variables():
    assert term.variables(parse("x y^l | 1 <= z").lhs) == {"x", "y"}


# ------------------------------------------------------------ normalization

def words(*texts):
    out = []
    for t in texts:
        w = []
        for lit in t.split():
            if "^" in lit:
                name, m = lit.split("^")
                w.append((name, int(m.strip("()"))))
            else:
                w.append((lit, 0))
        out.append(tuple(w))
    return out


def test_intensional_inverse_split():
    assert [c.joinands for c in to_intensional(parse("x^l = x^r"))] == \
        [tuple(words("x x^(-1)")), tuple(words("x^(-2) x^(1)"))]
    assert [c.joinands for c in to_intensional(parse("x^(4) = x"))] == \
        [tuple(words("x^(3) x")), tuple(words("x^(-1) x^(4)"))]


def test_intensional_commutativity():
    got = [c.joinands for c in to_intensional(parse("x y = y x"))]
    assert got == [tuple(words("y^(-1) x^(-1) y x")),
                   tuple(words("x^(-1) y^(-1) x y"))]


def test_intensional_trivial_conjuncts_dropped():
    assert to_intensional(parse("1 <= 1 | x")) == []
    assert to_intensional(parse("1 <= 1")) == []


def test_intensional_join_and_meet():
    # meets on the right split into selections, joins stay joins
    got = to_intensional(parse("1 <= x & y"))
    assert [c.joinands for c in got] == [tuple(words("x")), tuple(words("y"))]
    got = to_intensional(parse("1 <= x | y"))
    assert [c.joinands for c in got] == [tuple(sorted(words("x", "y")))]


@st.composite
def small_terms(draw, depth=0):
    if depth >= 2 or draw(st.booleans()):
        leaf = draw(st.sampled_from(["x", "y", "1"]))
        return Unit() if leaf == "1" else Var(leaf)
    kind = draw(st.sampled_from(["prod", "join", "meet", "inv", "inv"]))
    if kind == "inv":
        return Inv(draw(small_terms(depth + 1)), draw(st.integers(-2, 2)))
    args = (draw(small_terms(depth + 1)), draw(small_terms(depth + 1)))
    return {"prod": Prod, "join": Join, "meet": Meet}[kind](args)


def periodic_fns_at(n, bound=4):
    def build(v0, steps):
        return fnz.PeriodicFn(n, tuple([v0] + [v0 + s for s in sorted(steps)]))
    return st.builds(build, st.integers(-bound, bound),
                     st.lists(st.integers(0, n), min_size=n - 1,
                              max_size=n - 1))


@settings(max_examples=300, deadline=None)
@given(small_terms(), small_terms(), st.sampled_from(["<=", "="]),
       st.data())
def test_intensional_form_is_equivalent(lhs, rhs, rel, data):
    eq = Equation(lhs, rhs, rel)
    n = data.draw(st.integers(1, 3))
    asg = {v: data.draw(periodic_fns_at(n), label=v) for v in ("x", "y")}
    direct = equation_holds(eq, asg, n)
    viaform = all(conjunct_holds(c, asg, n) for c in to_intensional(eq))
    assert direct == viaform


# ------------------------------------------------------- final subwords

def test_final_subwords():
    [c] = to_intensional(parse("1 <= x^r x"))
    assert final_subwords(c) == {(), *words("x", "x^(-1) x")}


def test_final_subwords_multiple_joinands():
    [c] = to_intensional(parse("1 <= x y | y"))
    got = final_subwords(c)
    assert got == {(), *words("y", "x y")}


# --------------------------------------------------------------- Delta set

def point_set_strs(eq_text):
    conjs = to_intensional(parse(eq_text))
    return [sorted(point_str(p) for p in delta_epsilon(c)) for c in conjs]


def test_delta_smallest():
    [pts] = point_set_strs("1 <= x")
    assert pts == ["1", "x"]


def test_delta_one_left_inverse():
    [c] = to_intensional(parse("1 <= x x^l"))
    pts = delta_epsilon(c)
    assert sorted(point_str(p) for p in pts) == \
        ["-x^(1)", "1", "x -x^(1)", "x x^(1)", "x^(1)"]


def test_delta_one_right_inverse():
    [c] = to_intensional(parse("1 <= x^r x"))
    pts = delta_epsilon(c)
    assert sorted(point_str(p) for p in pts) == \
        ["+x^(-1) x", "1", "x", "x +x^(-1) x", "x x^(-1) x", "x^(-1) x"]


def test_delta_sizes_of_known_sets():
    [c] = to_intensional(parse("1 <= x^(3) x"))
    assert len(delta_epsilon(c)) == 24
    c1, c2 = to_intensional(parse("x y = y x"))
    assert len(delta_epsilon(c1)) == len(delta_epsilon(c2)) == 11


def test_delta_contains_final_subwords_and_cover_bases():
    for eq_text in ["1 <= x^(-2) x^(1)", "x^(4) = x", "x y = y x"]:
        for c in to_intensional(parse(eq_text)):
            pts = delta_epsilon(c)
            for w in final_subwords(c):
                assert point_of_word(w) in pts
            for p in pts:
                if p and p[0][0] == "cov":
                    assert p[1:] in pts
                # stripping one application lands back in the set
                if p and p[0][0] == "app":
                    assert p[1:] in pts
