"""Terms, parsing, and reduction of equations to intensional form.

Input language (ASCII):

    equation  :=  term ("=" | "<=") term
    term      :=  meet ("|" meet)*            join, loosest
    meet      :=  prod ("&" prod)*
    prod      :=  postfix (["*"] postfix)*    juxtaposition allowed
    postfix   :=  atom ("^l" | "^r" | "^(" ["-"] int ")")*
    atom      :=  ident | "1" | "(" term ")"

An equation is decided through its intensional form: a conjunction of
inequalities 1 <= w_1 | ... | w_k where every w is a product of literals
x^(m) (m-fold iterated inverses of variables, m in Z; x^(0) is x itself,
x^(1) is x^l, x^(-1) is x^r).  The reduction: split = into two <=, move the
left side to the right (s <= t becomes 1 <= s^r t), push inverses down to
variables (inverting is an anti-automorphism for even iterates and swaps
join with meet for odd ones), distribute products over joins and meets and
meets over joins, and finally split the join-of-meets into one conjunct per
selection of a meetand from each join arm.  Every step preserves validity
over the function algebras targeted here (multiplication has both residuals
and co-residuals, so it distributes over finite joins and meets, and the
lattices are distributive).

Words are tuples of (variable, m) pairs, composition order left to right:
the rightmost factor applies first to a point.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Union

# --------------------------------------------------------------------- AST

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Inv:
    arg: "Term"
    m: int


@dataclass(frozen=True)
class Prod:
    args: tuple["Term", ...]


@dataclass(frozen=True)
class Join:
    args: tuple["Term", ...]


@dataclass(frozen=True)
class Meet:
    args: tuple["Term", ...]


Term = Union[Var, Unit, Inv, Prod, Join, Meet]


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    relation: str  # "=" or "<="


class ParseError(ValueError):
    pass


# ------------------------------------------------------------------ parser

_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
                       r"|(?P<int>\d+)"
                       r"|(?P<op><=|[=|&*^()\-]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r} at {pos}")
        if m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name")))
        elif m.lastgroup == "int":
            tokens.append(("int", m.group("int"), m.start("int")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r} at {pos}, got {val!r}")

    def fail(self, msg):
        _, val, pos = self.peek()
        raise ParseError(f"{msg} at {pos} (near {val!r})")

    def equation(self) -> Equation:
        lhs = self.term()
        kind, val, pos = self.take()
        if val not in ("=", "<="):
            raise ParseError(f"expected '=' or '<=' at {pos}, got {val!r}")
        rhs = self.term()
        if self.peek()[0] != "end":
            self.fail("trailing input")
        return Equation(lhs, rhs, val)

    def term(self) -> Term:
        arms = [self.meet()]
        while self.peek()[1] == "|":
            self.take()
            arms.append(self.meet())
        return arms[0] if len(arms) == 1 else Join(tuple(arms))

    def meet(self) -> Term:
        arms = [self.prod()]
        while self.peek()[1] == "&":
            self.take()
            arms.append(self.prod())
        return arms[0] if len(arms) == 1 else Meet(tuple(arms))

    def prod(self) -> Term:
        factors = [self.postfix()]
        while True:
            kind, val, _ = self.peek()
            if val == "*":
                self.take()
                factors.append(self.postfix())
            elif kind == "name" or val == "(" or (kind == "int" and val == "1"):
                factors.append(self.postfix())
            else:
                break
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def postfix(self) -> Term:
        t = self.atom()
        while self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if val == "l":
                t = Inv(t, 1)
            elif val == "r":
                t = Inv(t, -1)
            elif val == "(":
                sign = 1
                if self.peek()[1] == "-":
                    self.take()
                    sign = -1
                kind, val, pos = self.take()
                if kind != "int":
                    raise ParseError(f"expected integer at {pos}")
                self.expect(")")
                t = Inv(t, sign * int(val))
            else:
                raise ParseError(
                    f"expected 'l', 'r' or '(m)' after '^' at {pos}")
        return t

    def atom(self) -> Term:
        kind, val, pos = self.take()
        if kind == "name":
            return Var(val)
        if kind == "int":
            if val == "1":
                return Unit()
            raise ParseError(f"only the unit constant 1 is allowed, "
                             f"got {val} at {pos}")
        if val == "(":
            t = self.term()
            self.expect(")")
            return t
        raise ParseError(f"expected a variable, '1' or '(' at {pos}, "
                         f"got {val!r}")


def parse(text: str) -> Equation:
    """Parse an equation.  Raises ParseError on malformed input."""
    return _Parser(text).equation()


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek()[0] != "end":
        p.fail("trailing input")
    return t


# ------------------------------------------------------- size and variables

def term_size(t: Term) -> int:
    """Symbol count: variable and unit occurrences, k-ary lattice/monoid
    operations count k-1, an m-fold inverse counts |m|."""
    if isinstance(t, (Var, Unit)):
        return 1
    if isinstance(t, Inv):
        return term_size(t.arg) + abs(t.m)
    return sum(term_size(a) for a in t.args) + len(t.args) - 1


def equation_size(eq: Equation) -> int:
    return term_size(eq.lhs) + term_size(eq.rhs)


def variables(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Unit,)):
        return set()
    if isinstance(t, Inv):
        return variables(t.arg)
    return set().union(*(variables(a) for a in t.args))


# -------------------------------------------------------- intensional form

# A word is a product of literals x^(m); the empty word is the unit.
Word = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class IntensionalEquation:
    """1 <= w_1 | ... | w_k with every w_i a word of literals."""

    joinands: tuple[Word, ...]

    def __str__(self):
        return "1 <= " + " | ".join(word_str(w) for w in self.joinands)


def literal_str(lit: tuple[str, int]) -> str:
    name, m = lit
    if m == 0:
        return name
    return f"{name}^({m})"


def word_str(w: Word) -> str:
    return " ".join(literal_str(lit) for lit in w) if w else "1"


def _push_inv(t: Term, m: int) -> Term:
    """Rewrite t^(m) with inverses applied directly to variables."""
    if isinstance(t, Unit):
        return t
    if isinstance(t, Var):
        return Inv(t, m) if m else t
    if isinstance(t, Inv):
        return _push_inv(t.arg, t.m + m)
    args = tuple(_push_inv(a, m) for a in t.args)
    if isinstance(t, Prod):
        return Prod(args if m % 2 == 0 else args[::-1])
    if isinstance(t, Join):
        return Join(args) if m % 2 == 0 else Meet(args)
    return Meet(args) if m % 2 == 0 else Join(args)


def _join_of_meets(t: Term) -> list[list[Word]]:
    """Normal form of an inverse-pushed term: a join of meets of words."""
    if isinstance(t, Unit):
        return [[()]]
    if isinstance(t, Var):
        return [[((t.name, 0),)]]
    if isinstance(t, Inv):
        assert isinstance(t.arg, Var), "inverses must be pushed first"
        return [[((t.arg.name, t.m),)]]
    if isinstance(t, Join):
        arms: list[list[Word]] = []
        for a in t.args:
            arms.extend(_join_of_meets(a))
        return _dedup(arms)
    if isinstance(t, Meet):
        arms = [[]]
        for a in t.args:
            arms = [_dedup_words(m1 + m2)
                    for m1 in arms for m2 in _join_of_meets(a)]
        return _dedup(arms)
    # product: multiply arm by arm, word by word
    arms = [[()]]
    for a in t.args:
        arms = [_dedup_words([w1 + w2 for w1 in m1 for w2 in m2])
                for m1 in arms for m2 in _join_of_meets(a)]
    return _dedup(arms)


def _dedup_words(words: Iterable[Word]) -> list[Word]:
    return sorted(set(words))


def _dedup(arms: list[list[Word]]) -> list[list[Word]]:
    seen = set()
    out = []
    for arm in arms:
        key = tuple(arm)
        if key not in seen:
            seen.add(key)
            out.append(arm)
    return out


def _inequality_conjuncts(lhs: Term, rhs: Term) -> list[IntensionalEquation]:
    moved = Prod((Inv(lhs, -1), rhs))
    arms = _join_of_meets(_push_inv(moved, 0))
    conjuncts = []
    seen = set()
    for choice in itertools.product(*(range(len(arm)) for arm in arms)):
        joinands = tuple(sorted({arms[i][c] for i, c in enumerate(choice)}))
        if () in joinands:
            continue  # one joinand is the unit itself: trivially true
        if joinands and joinands not in seen:
            seen.add(joinands)
            conjuncts.append(IntensionalEquation(joinands))
    return conjuncts


def to_intensional(eq: Equation) -> list[IntensionalEquation]:
    """Reduce an equation to an equivalent finite conjunction of intensional
    inequalities.  The list may be empty when every conjunct is trivially
    true (for instance 1 <= 1 | x)."""
    out = _inequality_conjuncts(eq.lhs, eq.rhs)
    if eq.relation == "=":
        out.extend(_inequality_conjuncts(eq.rhs, eq.lhs))
    seen = set()
    dedup = []
    for c in out:
        if c.joinands not in seen:
            seen.add(c.joinands)
            dedup.append(c)
    return dedup


def intensional_size(eq: IntensionalEquation) -> int:
    """Symbol count of an intensional equation (the unit on the left counts
    one, like any other occurrence)."""
    total = 1 + max(len(eq.joinands) - 1, 0)
    for w in eq.joinands:
        total += sum(1 + abs(m) for _, m in w) + max(len(w) - 1, 0)
        if not w:
            total += 1
    return total


# ------------------------------------------------ final subwords and Delta

def final_subwords(eq: IntensionalEquation) -> set[Word]:
    """All final (right) segments of the joinands, including the empty word."""
    subs: set[Word] = {()}
    for w in eq.joinands:
        for i in range(len(w) + 1):
            subs.add(w[i:])
    return subs


# Points of the Delta set are decorated words: tuples of operations, written
# leftmost first, applied rightmost first.  Operations are
#   ("app", x, m)  apply the m-th iterated inverse of variable x
#   ("cov", +1)    move to the upper cover       ("cov", -1)  lower cover
Point = tuple[tuple, ...]


def point_of_word(w: Word) -> Point:
    return tuple(("app", name, m) for name, m in w)


def point_str(p: Point) -> str:
    if not p:
        return "1"
    bits = []
    for op in p:
        if op[0] == "app":
            bits.append(literal_str((op[1], op[2])))
        else:
            bits.append("+" if op[1] > 0 else "-")
    return " ".join(bits).replace("+ ", "+").replace("- ", "-")


def _decorated_family(name: str, m: int, base: Point) -> set[Point]:
    """The decorated approach-words for one literal x^(m) acting on a base
    point: for every tail j..|m| of the exponent ladder and every choice of
    cover decorations (lower covers for m >= 0, upper for m < 0; never on
    the outermost exponent 0)."""
    out = {base}
    sign = 1 if m >= 0 else -1
    cov = -1 if m >= 0 else +1
    for j in range(abs(m) + 1):
        ladder = list(range(j, abs(m) + 1))
        decorable = [k for k in ladder if not (k == 0)]
        for picks in itertools.product((False, True), repeat=len(decorable)):
            chosen = {k for k, on in zip(decorable, picks) if on}
            ops: list[tuple] = []
            for k in ladder:
                if k in chosen:
                    ops.append(("cov", cov))
                ops.append(("app", name, sign * k))
            out.add(tuple(ops) + base)
    return out


def delta_epsilon(eq: IntensionalEquation) -> frozenset[Point]:
    """The finite set of decorated evaluation points attached to an
    intensional equation.  It contains the final subwords; for every literal
    step x^(m)v between final subwords it also contains the intermediate
    iterates x^(j)...x^(m)v with optional cover decorations, which is what
    lets a surjection of this set pin down iterated inverses exactly."""
    points: set[Point] = {()}
    fs = final_subwords(eq)
    for w in fs:
        points.add(point_of_word(w))
    for w in fs:
        if w:
            (name, m), rest = w[0], w[1:]
            if rest in fs:
                points.update(_decorated_family(name, m, point_of_word(rest)))
    size = intensional_size(eq)
    assert len(points) <= 2 ** size * size ** 4, \
        f"point set larger than promised: {len(points)}"
    return frozenset(points)
