"""
Stochastic Regular Expressions

An SRE is a regular expression whose unions and stars carry exact rational
probabilities, so it denotes both a language and a distribution over it.
Skip and Require are relevance wrappers: transparent to probability, stripping
and rewriting, they only change entropy and lens cost.
"""

import math
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from src import regex as rx
from src.errors import (BadPath, EmptySubterm, PatternMismatch, PreconditionViolated,
                        WholeLanguageEmpty)

STAR_DEFAULT = Fraction(4, 5)


class SRENode:
    """Shared behavior of SRE nodes"""

    def to_regex(self) -> rx.Regex:
        return strip(self)

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Const(SRENode):
    text: str


@dataclass(frozen=True)
class Empty(SRENode):
    pass


@dataclass(frozen=True)
class Concat(SRENode):
    left: "SRE"
    right: "SRE"


@dataclass(frozen=True)
class Or(SRENode):
    left: "SRE"
    right: "SRE"
    p: Optional[Fraction] = None


@dataclass(frozen=True)
class Star(SRENode):
    body: "SRE"
    p: Optional[Fraction] = None


@dataclass(frozen=True)
class Skip(SRENode):
    body: "SRE"


@dataclass(frozen=True)
class Require(SRENode):
    body: "SRE"


@dataclass(frozen=True)
class Ref(SRENode):
    name: str


SRE = Union[Const, Empty, Concat, Or, Star, Skip, Require, Ref]


def prob(value: Any) -> Fraction:
    """Coerce to an exact rational, accepting "a/b" and decimal strings"""
    return value if isinstance(value, Fraction) else Fraction(value)


def children(s: SRE) -> Tuple[SRE, ...]:
    if isinstance(s, (Concat, Or)):
        return (s.left, s.right)
    if isinstance(s, (Star, Skip, Require)):
        return (s.body,)
    return ()


def with_children(s: SRE, kids: Sequence[SRE]) -> SRE:
    if isinstance(s, (Concat, Or)):
        return replace(s, left=kids[0], right=kids[1])
    if isinstance(s, (Star, Skip, Require)):
        return replace(s, body=kids[0])
    return s


# ---------------------------------------------------------------------------
# Conversions
# ---------------------------------------------------------------------------

def strip(s: SRE) -> rx.Regex:
    """Drop probabilities and relevance wrappers"""
    if isinstance(s, Const):
        return rx.Const(s.text)
    if isinstance(s, Empty):
        return rx.Empty()
    if isinstance(s, Concat):
        return rx.Concat(strip(s.left), strip(s.right))
    if isinstance(s, Or):
        return rx.Or(strip(s.left), strip(s.right))
    if isinstance(s, Star):
        return rx.Star(strip(s.body))
    if isinstance(s, (Skip, Require)):
        return strip(s.body)
    return rx.Ref(s.name)


def lift(r: rx.Regex) -> SRE:
    """A Regex as an SRE with every probability unassigned"""
    if isinstance(r, rx.Const):
        return Const(r.text)
    if isinstance(r, rx.Empty):
        return Empty()
    if isinstance(r, rx.Concat):
        return Concat(lift(r.left), lift(r.right))
    if isinstance(r, rx.Or):
        return Or(lift(r.left), lift(r.right))
    if isinstance(r, rx.Star):
        return Star(lift(r.body))
    return Ref(r.name)


def sequence_count(s: SRE) -> int:
    """Number of sequences in the DNF of s: Or adds, Concat multiplies"""
    if isinstance(s, Empty):
        return 0
    if isinstance(s, Concat):
        return sequence_count(s.left) * sequence_count(s.right)
    if isinstance(s, Or):
        return sequence_count(s.left) + sequence_count(s.right)
    if isinstance(s, (Skip, Require)):
        return sequence_count(s.body)
    return 1


def _check_no_empty(s: SRE) -> None:
    if isinstance(s, Empty):
        raise EmptySubterm("Empty occurs inside a nonempty expression")
    for child in children(s):
        _check_no_empty(child)


def complete_probabilities(s: SRE) -> SRE:
    """
    Fill every unassigned probability with its default.

    Stars get 4/5; an Or gets count(left)/(count(left)+count(right)) so that
    all DNF sequences end up equally likely. Assigned probabilities are kept.
    """
    if isinstance(s, Empty):
        return s
    _check_no_empty(s)
    return _complete(s)


def _complete(s: SRE) -> SRE:
    if isinstance(s, Or):
        left, right = _complete(s.left), _complete(s.right)
        p = s.p
        if p is None:
            a, b = sequence_count(s.left), sequence_count(s.right)
            p = Fraction(a, a + b)
        return Or(left, right, p)
    if isinstance(s, Star):
        return Star(_complete(s.body), STAR_DEFAULT if s.p is None else s.p)
    kids = children(s)
    if not kids:
        return s
    return with_children(s, [_complete(k) for k in kids])


def to_stochastic(r: rx.Regex, env: Optional[rx.DefEnv] = None) -> SRE:
    """
    Assign default probabilities to a plain regex.

    Args:
        r: Regex (its Refs stay closed atoms)
        env: Unused beyond symmetry with the other operations

    Returns:
        An SRE with strip(result) == r

    Raises:
        EmptySubterm: r contains Empty but is not Empty itself
    """
    return complete_probabilities(lift(r))


def is_complete(s: SRE) -> bool:
    if isinstance(s, (Or, Star)) and s.p is None:
        return False
    return all(is_complete(child) for child in children(s))


def binding(env: rx.DefEnv, name: str) -> SRE:
    """The SRE bound to name, lifted and completed when stored as a plain regex"""
    def build() -> SRE:
        value = env.lookup(name)
        sre = value if isinstance(value, SRENode) else lift(value)
        return complete_probabilities(sre)
    return env.cached(("sre-binding", name), build)


def normalize_empty(s: SRE) -> SRE:
    """
    Remove Empty subterms, renormalizing the distribution.

    Raises:
        WholeLanguageEmpty: s denotes the empty language
    """
    result = _drop_empty(s)
    if result is None:
        raise WholeLanguageEmpty(f"{show(s)} denotes the empty language")
    return result


def _drop_empty(s: SRE) -> Optional[SRE]:
    if isinstance(s, Empty):
        return None
    if isinstance(s, Concat):
        left, right = _drop_empty(s.left), _drop_empty(s.right)
        if left is None or right is None:
            return None
        return Concat(left, right)
    if isinstance(s, Or):
        left, right = _drop_empty(s.left), _drop_empty(s.right)
        if left is None:
            return right
        if right is None:
            return left
        return Or(left, right, s.p)
    if isinstance(s, Star):
        body = _drop_empty(s.body)
        return Const("") if body is None else Star(body, s.p)
    if isinstance(s, (Skip, Require)):
        body = _drop_empty(s.body)
        return None if body is None else type(s)(body)
    return s


def normalize_relevance(s: SRE, outer: Optional[type] = None) -> SRE:
    """Collapse directly nested Skip/Require wrappers; the outermost wins"""
    if isinstance(s, (Skip, Require)):
        if outer is not None:
            return normalize_relevance(s.body, outer)
        return type(s)(normalize_relevance(s.body, type(s)))
    kids = children(s)
    if not kids:
        return s
    return with_children(s, [normalize_relevance(k, None) for k in kids])


# ---------------------------------------------------------------------------
# Probability and entropy
# ---------------------------------------------------------------------------

class _ProbabilityTable:
    """Position-indexed dynamic program over one input string"""

    def __init__(self, text: str, env: rx.DefEnv):
        self.text = text
        self.env = env
        self.memo: Dict[Tuple[int, int], Dict[int, Fraction]] = {}

    def ends(self, s: SRE, i: int) -> Dict[int, Fraction]:
        while isinstance(s, (Skip, Require, Ref)):
            s = binding(self.env, s.name) if isinstance(s, Ref) else s.body
        key = (id(s), i)
        found = self.memo.get(key)
        if found is not None:
            return found
        out: Dict[int, Fraction] = {}
        if isinstance(s, Const):
            if self.text.startswith(s.text, i):
                out[i + len(s.text)] = Fraction(1)
        elif isinstance(s, Concat):
            for k, pk in self.ends(s.left, i).items():
                for j, pj in self.ends(s.right, k).items():
                    out[j] = out.get(j, 0) + pk * pj
        elif isinstance(s, Or):
            p = _require_p(s)
            for j, pj in self.ends(s.left, i).items():
                out[j] = out.get(j, 0) + p * pj
            for j, pj in self.ends(s.right, i).items():
                out[j] = out.get(j, 0) + (1 - p) * pj
        elif isinstance(s, Star):
            out = self._star(s, i)
        self.memo[key] = out
        return out

    def _star(self, s: Star, i: int) -> Dict[int, Fraction]:
        p = _require_p(s)
        reach: Dict[int, Fraction] = {i: Fraction(1)}
        for k in range(i, len(self.text) + 1):
            if k not in reach:
                continue
            for j, pj in self.ends(s.body, k).items():
                if j == k:
                    raise PreconditionViolated("Star body accepts the empty string")
                reach[j] = reach.get(j, 0) + reach[k] * p * pj
        return {j: w * (1 - p) for j, w in reach.items()}


def _require_p(s: Union[Or, Star]) -> Fraction:
    if s.p is None:
        raise PreconditionViolated(f"Missing probability on {show(s)}")
    return s.p


def probability(s: SRE, w: str, env: rx.DefEnv = rx.EMPTY_ENV) -> Fraction:
    """
    Exact probability of w under s.

    Args:
        s: Stochastic regex with complete probabilities
        w: Input string
        env: Definitions for Refs

    Returns:
        P_s(w) as a Fraction (summed over every parse)
    """
    return _ProbabilityTable(w, env).ends(s, 0).get(len(w), Fraction(0))


def log2(p: Fraction) -> float:
    """Exact base-2 logarithm of a rational probability"""
    return math.log2(p.numerator) - math.log2(p.denominator)


def entropy(s: SRE, env: rx.DefEnv = rx.EMPTY_ENV) -> float:
    """
    Entropy in bits, computed from the syntax.

    Skip contributes nothing; Require is transparent.
    """
    if isinstance(s, Const):
        return 0.0
    if isinstance(s, Empty):
        raise PreconditionViolated("Entropy of the empty language is undefined")
    if isinstance(s, Concat):
        return entropy(s.left, env) + entropy(s.right, env)
    if isinstance(s, Or):
        p = _require_p(s)
        if p == 1:
            return entropy(s.left, env)
        return (float(p) * (entropy(s.left, env) - log2(p))
                + float(1 - p) * (entropy(s.right, env) - log2(1 - p)))
    if isinstance(s, Star):
        p = _require_p(s)
        return star_entropy(entropy(s.body, env), p)
    if isinstance(s, Skip):
        return 0.0
    if isinstance(s, Require):
        return entropy(s.body, env)
    return env.cached(("sre-entropy", s.name), lambda: entropy(binding(env, s.name), env))


def star_entropy(body_entropy: float, p: Fraction) -> float:
    """Entropy of a star whose body has the given entropy"""
    return float(p / (1 - p)) * (body_entropy - log2(p)) - log2(1 - p)


# ---------------------------------------------------------------------------
# Rewriting
# ---------------------------------------------------------------------------

RULES = ("ZeroProjL", "ZeroProjR", "ConcatIdentL", "ConcatIdentR", "OrIdent", "OrComm",
         "DistR", "DistL", "UnrollL", "UnrollR", "ConcatAssoc", "OrAssoc")

FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class RewriteStep:
    """One equivalence rule applied at a path; operand feeds backward ZeroProj"""
    rule: str
    path: Tuple[int, ...] = ()
    direction: str = FORWARD
    operand: Optional[SRE] = None


def subterm(s: SRE, path: Sequence[int]) -> SRE:
    """The subterm addressed by path"""
    current = s
    for index in path:
        kids = children(current)
        if index < 0 or index >= len(kids):
            raise BadPath(path)
        current = kids[index]
    return current


def replace_at(s: SRE, path: Sequence[int], new: SRE) -> SRE:
    """s with the subterm at path replaced by new"""
    if not path:
        return new
    kids = list(children(s))
    index = path[0]
    if index < 0 or index >= len(kids):
        raise BadPath(path)
    kids[index] = replace_at(kids[index], path[1:], new)
    return with_children(s, kids)


def apply_rewrite(s: SRE, step: RewriteStep) -> SRE:
    """
    Apply one star-semiring equivalence in either direction.

    Args:
        s: Expression to rewrite
        step: Rule, location and direction

    Returns:
        The rewritten expression

    Raises:
        BadPath: the path leaves the tree
        PatternMismatch: the rule does not match the addressed subterm
    """
    if step.rule not in RULES:
        raise PatternMismatch(step.rule, "unknown rule")
    target = subterm(s, step.path)
    forward = step.direction == FORWARD
    rewritten = _forward(step.rule, target) if forward else _backward(step.rule, target, step.operand)
    return replace_at(s, step.path, rewritten)


def _forward(rule: str, t: SRE) -> SRE:
    if rule == "ZeroProjL" and isinstance(t, Concat) and isinstance(t.left, Empty):
        return Empty()
    if rule == "ZeroProjR" and isinstance(t, Concat) and isinstance(t.right, Empty):
        return Empty()
    if rule == "ConcatIdentL" and isinstance(t, Concat) and t.left == Const(""):
        return t.right
    if rule == "ConcatIdentR" and isinstance(t, Concat) and t.right == Const(""):
        return t.left
    if rule == "OrIdent" and isinstance(t, Or) and isinstance(t.right, Empty) and t.p == 1:
        return t.left
    if rule == "OrComm" and isinstance(t, Or):
        return Or(t.right, t.left, 1 - t.p)
    if rule == "DistR" and isinstance(t, Concat) and isinstance(t.right, Or):
        inner = t.right
        return Or(Concat(t.left, inner.left), Concat(t.left, inner.right), inner.p)
    if rule == "DistL" and isinstance(t, Concat) and isinstance(t.left, Or):
        inner = t.left
        return Or(Concat(inner.left, t.right), Concat(inner.right, t.right), inner.p)
    if rule == "UnrollL" and isinstance(t, Star):
        return Or(Const(""), Concat(t.body, t), 1 - t.p)
    if rule == "UnrollR" and isinstance(t, Star):
        return Or(Const(""), Concat(t, t.body), 1 - t.p)
    if rule == "ConcatAssoc" and isinstance(t, Concat) and isinstance(t.left, Concat):
        return Concat(t.left.left, Concat(t.left.right, t.right))
    if rule == "OrAssoc" and isinstance(t, Or) and isinstance(t.left, Or):
        p1, p2 = t.left.p, t.p
        outer = p1 * p2
        inner = (1 - p1) * p2 / (1 - outer)
        return Or(t.left.left, Or(t.left.right, t.right, inner), outer)
    raise PatternMismatch(rule, show(t))


def _backward(rule: str, t: SRE, operand: Optional[SRE]) -> SRE:
    if rule in ("ZeroProjL", "ZeroProjR") and isinstance(t, Empty):
        if operand is None:
            raise PatternMismatch(rule, "backward application needs an operand")
        return Concat(Empty(), operand) if rule == "ZeroProjL" else Concat(operand, Empty())
    if rule == "ConcatIdentL":
        return Concat(Const(""), t)
    if rule == "ConcatIdentR":
        return Concat(t, Const(""))
    if rule == "OrIdent":
        return Or(t, Empty(), Fraction(1))
    if rule == "OrComm" and isinstance(t, Or):
        return Or(t.right, t.left, 1 - t.p)
    if rule == "DistR" and isinstance(t, Or) and isinstance(t.left, Concat) \
            and isinstance(t.right, Concat) and t.left.left == t.right.left:
        return Concat(t.left.left, Or(t.left.right, t.right.right, t.p))
    if rule == "DistL" and isinstance(t, Or) and isinstance(t.left, Concat) \
            and isinstance(t.right, Concat) and t.left.right == t.right.right:
        return Concat(Or(t.left.left, t.right.left, t.p), t.left.right)
    if rule == "UnrollL" and isinstance(t, Or) and t.left == Const("") \
            and isinstance(t.right, Concat) and isinstance(t.right.right, Star):
        star = t.right.right
        if star.body == t.right.left and star.p == 1 - t.p:
            return star
    if rule == "UnrollR" and isinstance(t, Or) and t.left == Const("") \
            and isinstance(t.right, Concat) and isinstance(t.right.left, Star):
        star = t.right.left
        if star.body == t.right.right and star.p == 1 - t.p:
            return star
    if rule == "ConcatAssoc" and isinstance(t, Concat) and isinstance(t.right, Concat):
        return Concat(Concat(t.left, t.right.left), t.right.right)
    if rule == "OrAssoc" and isinstance(t, Or) and isinstance(t.right, Or):
        r1, r2 = t.p, t.right.p
        p2 = r1 + r2 * (1 - r1)
        p1 = r1 / p2
        return Or(Or(t.left, t.right.left, p1), t.right.right, p2)
    raise PatternMismatch(rule, show(t))


def paths(s: SRE, prefix: Tuple[int, ...] = ()) -> List[Tuple[Tuple[int, ...], SRE]]:
    """Every (path, subterm) pair in preorder"""
    found = [(prefix, s)]
    for index, child in enumerate(children(s)):
        found.extend(paths(child, prefix + (index,)))
    return found


def unroll_neighbors(s: SRE, env: rx.DefEnv = rx.EMPTY_ENV) -> List[SRE]:
    """
    Every SRE one unroll or one opening away from s.

    Stars unroll left then right; closed Refs open to their definition.
    Results are ordered by path (preorder), then rule.
    """
    neighbors = []
    for path, sub in paths(s):
        if isinstance(sub, Star):
            neighbors.append(apply_rewrite(s, RewriteStep("UnrollL", path)))
            neighbors.append(apply_rewrite(s, RewriteStep("UnrollR", path)))
        elif isinstance(sub, Ref) and sub.name in env and env.is_closed(sub.name):
            neighbors.append(replace_at(s, path, binding(env, sub.name)))
    return neighbors


def open_ref(s: SRE, name: str, env: rx.DefEnv) -> SRE:
    """Replace every occurrence of Ref(name) with its definition"""
    if isinstance(s, Ref):
        return binding(env, name) if s.name == name else s
    kids = children(s)
    if not kids:
        return s
    return with_children(s, [open_ref(k, name, env) for k in kids])


def ref_names(s: SRE) -> List[str]:
    """Ref occurrences in s, left to right"""
    return [sub.name for _, sub in paths(s) if isinstance(sub, Ref)]


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def sample(s: SRE, env: rx.DefEnv = rx.EMPTY_ENV, seed: Any = 0) -> str:
    """
    Draw one string with probability exactly P_s.

    Args:
        s: Stochastic regex
        env: Definitions for Refs
        seed: Seed, or a random.Random instance to draw from

    Returns:
        The sampled string
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    out: List[str] = []
    _draw(s, env, rng, out)
    return "".join(out)


def _flip(rng: random.Random, p: Fraction) -> bool:
    return rng.randrange(p.denominator) < p.numerator


def _draw(s: SRE, env: rx.DefEnv, rng: random.Random, out: List[str]) -> None:
    if isinstance(s, Const):
        out.append(s.text)
    elif isinstance(s, Empty):
        raise PreconditionViolated("Cannot sample from the empty language")
    elif isinstance(s, Concat):
        _draw(s.left, env, rng, out)
        _draw(s.right, env, rng, out)
    elif isinstance(s, Or):
        _draw(s.left if _flip(rng, _require_p(s)) else s.right, env, rng, out)
    elif isinstance(s, Star):
        p = _require_p(s)
        while _flip(rng, p):
            _draw(s.body, env, rng, out)
    elif isinstance(s, (Skip, Require)):
        _draw(s.body, env, rng, out)
    else:
        _draw(binding(env, s.name), env, rng, out)


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

def show_prob(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def show(s: SRE, level: int = 0) -> str:
    """Concrete syntax with probability annotations"""
    if isinstance(s, Const):
        return rx.quote(s.text)
    if isinstance(s, Empty):
        return "empty"
    if isinstance(s, Ref):
        return s.name
    if isinstance(s, Skip):
        return f"skip({show(s.body)})"
    if isinstance(s, Require):
        return f"require({show(s.body)})"
    if isinstance(s, Star):
        mark = "*" if s.p is None else "*{" + show_prob(s.p) + "}"
        return show(s.body, 3) + mark
    if isinstance(s, Concat):
        text = f"{show(s.left, 2)} {show(s.right, 1)}"
        return f"({text})" if level > 1 else text
    bar = "|" if s.p is None else "|{" + show_prob(s.p) + "}"
    text = f"{show(s.left, 1)} {bar} {show(s.right, 0)}"
    return f"({text})" if level > 0 else text
