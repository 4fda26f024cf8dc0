"""
Regular Expressions

Plain regular expressions are the type language of lenses. This module holds
the AST, the definition environment, an all-parses matcher (membership, unique
parse trees, parse counts) and position-automaton procedures for deciding
unambiguity and equivalence.
"""

import heapq
from collections import deque
from dataclasses import dataclass, field
from itertools import count as _counter
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

from src.errors import AmbiguousParse, NoParse, PreconditionViolated, UnresolvedRef, UserError


class RegexNode:
    """Shared behavior of regex AST nodes"""

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Empty(RegexNode):
    pass


@dataclass(frozen=True)
class Const(RegexNode):
    text: str


@dataclass(frozen=True)
class Concat(RegexNode):
    left: "Regex"
    right: "Regex"


@dataclass(frozen=True)
class Or(RegexNode):
    left: "Regex"
    right: "Regex"


@dataclass(frozen=True)
class Star(RegexNode):
    body: "Regex"


@dataclass(frozen=True)
class Ref(RegexNode):
    name: str


Regex = Union[Empty, Const, Concat, Or, Star, Ref]

EPSILON = Const("")


def concat_all(parts: Iterable[Regex]) -> Regex:
    """Right-nested concatenation of parts; "" when there are none"""
    items = list(parts)
    if not items:
        return EPSILON
    result = items[-1]
    for item in reversed(items[:-1]):
        result = Concat(item, result)
    return result


def or_all(parts: Iterable[Regex]) -> Regex:
    """Right-nested union of parts; Empty when there are none"""
    items = list(parts)
    if not items:
        return Empty()
    result = items[-1]
    for item in reversed(items[:-1]):
        result = Or(item, result)
    return result


def size(r: Regex) -> int:
    """Syntactic size: number of AST nodes"""
    if isinstance(r, (Concat, Or)):
        return 1 + size(r.left) + size(r.right)
    if isinstance(r, Star):
        return 1 + size(r.body)
    return 1


def refs_in(r: Regex) -> List[str]:
    """Names referenced directly by r, in left-to-right order with repeats"""
    if isinstance(r, Ref):
        return [r.name]
    if isinstance(r, (Concat, Or)):
        return refs_in(r.left) + refs_in(r.right)
    if isinstance(r, Star):
        return refs_in(r.body)
    return []


# ---------------------------------------------------------------------------
# Definition environment
# ---------------------------------------------------------------------------

class DefEnv:
    """
    Ordered named definitions with open/closed marking.

    Values are Regex nodes or anything exposing to_regex() (stochastic
    expressions). Every name starts closed. Environments are never mutated;
    define and opened return new environments.
    """

    def __init__(self, bindings: Optional[Dict[str, Any]] = None,
                 closed: Optional[Iterable[str]] = None):
        self._bindings: Dict[str, Any] = dict(bindings or {})
        self._closed: FrozenSet[str] = frozenset(self._bindings if closed is None else closed)
        self._regex_cache: Dict[str, Regex] = {}
        self._memo: Dict[Any, Any] = {}

    def define(self, name: str, value: Any, closed: bool = True) -> "DefEnv":
        """
        Add a binding that may only mention earlier names.

        Args:
            name: Identifier to bind
            value: Regex or stochastic expression
            closed: Whether the name starts closed

        Returns:
            A new environment with the binding appended
        """
        regex = value.to_regex() if hasattr(value, "to_regex") else value
        for ref in refs_in(regex):
            if ref not in self._bindings:
                raise UnresolvedRef(ref)
        if name in self._bindings:
            raise UserError(f"{name} is already defined")
        bindings = dict(self._bindings)
        bindings[name] = value
        closed_names = set(self._closed)
        if closed:
            closed_names.add(name)
        return DefEnv(bindings, closed_names)

    def __contains__(self, name: str) -> bool:
        return name in self._bindings

    def names(self) -> List[str]:
        return list(self._bindings)

    def lookup(self, name: str) -> Any:
        """Return the stored value for name"""
        try:
            return self._bindings[name]
        except KeyError:
            raise UnresolvedRef(name) from None

    def regex(self, name: str) -> Regex:
        """Return the plain regex bound to name (stable object per name)"""
        cached = self._regex_cache.get(name)
        if cached is None:
            value = self.lookup(name)
            cached = value.to_regex() if hasattr(value, "to_regex") else value
            self._regex_cache[name] = cached
        return cached

    def cached(self, key: Any, factory: Any) -> Any:
        """Memoize a value derived from this environment"""
        if key not in self._memo:
            self._memo[key] = factory()
        return self._memo[key]

    def is_closed(self, name: str) -> bool:
        return name in self._closed

    def opened(self, name: str) -> "DefEnv":
        """Return an environment where name is open"""
        return DefEnv(self._bindings, self._closed - {name})

    def reachable(self, name: str) -> Set[str]:
        """All names reachable from name's definition, following Refs"""
        seen: Set[str] = set()
        stack = list(refs_in(self.regex(name)))
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            stack.extend(refs_in(self.regex(current)))
        return seen


EMPTY_ENV = DefEnv()


def resolve(r: Regex, env: DefEnv) -> Regex:
    """Follow Refs until a non-Ref node"""
    while isinstance(r, Ref):
        r = env.regex(r.name)
    return r


def inline(r: Regex, env: DefEnv) -> Regex:
    """Replace every Ref by its definition, recursively"""
    if isinstance(r, Ref):
        return inline(env.regex(r.name), env)
    if isinstance(r, Concat):
        return Concat(inline(r.left, env), inline(r.right, env))
    if isinstance(r, Or):
        return Or(inline(r.left, env), inline(r.right, env))
    if isinstance(r, Star):
        return Star(inline(r.body, env))
    return r


# ---------------------------------------------------------------------------
# Parse trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstLeaf:
    text: str


@dataclass(frozen=True)
class ConcatNode:
    left: "ParseTree"
    right: "ParseTree"


@dataclass(frozen=True)
class OrNode:
    side: str
    child: "ParseTree"


@dataclass(frozen=True)
class StarNode:
    children: Tuple["ParseTree", ...]


ParseTree = Union[ConstLeaf, ConcatNode, OrNode, StarNode]

LEFT = "left"
RIGHT = "right"


def flatten(tree: ParseTree) -> str:
    """Concatenate the leaves of a parse tree"""
    if isinstance(tree, ConstLeaf):
        return tree.text
    if isinstance(tree, ConcatNode):
        return flatten(tree.left) + flatten(tree.right)
    if isinstance(tree, OrNode):
        return flatten(tree.child)
    return "".join(flatten(child) for child in tree.children)


# ---------------------------------------------------------------------------
# All-parses matcher
# ---------------------------------------------------------------------------

def _cap(n: int) -> int:
    return 2 if n > 2 else n


class _Matcher:
    """Memoized end-position/parse-count tables for one input string"""

    def __init__(self, text: str, env: DefEnv):
        self.text = text
        self.env = env
        self.memo: Dict[Tuple[int, int], Dict[int, int]] = {}
        self.furthest = 0

    def ends(self, node: Regex, i: int) -> Dict[int, int]:
        node = resolve(node, self.env)
        key = (id(node), i)
        found = self.memo.get(key)
        if found is not None:
            return found
        result: Dict[int, int] = {}
        if isinstance(node, Const):
            if self.text.startswith(node.text, i):
                result[i + len(node.text)] = 1
                self.furthest = max(self.furthest, i + len(node.text))
            else:
                self._note_partial(node.text, i)
        elif isinstance(node, Or):
            for side in (node.left, node.right):
                for j, c in self.ends(side, i).items():
                    result[j] = _cap(result.get(j, 0) + c)
        elif isinstance(node, Concat):
            for k, c1 in self.ends(node.left, i).items():
                for j, c2 in self.ends(node.right, k).items():
                    result[j] = _cap(result.get(j, 0) + c1 * c2)
        elif isinstance(node, Star):
            result = self._star_ends(node, i)
        self.memo[key] = result
        return result

    def _note_partial(self, literal: str, i: int) -> None:
        matched = 0
        limit = min(len(literal), len(self.text) - i)
        while matched < limit and self.text[i + matched] == literal[matched]:
            matched += 1
        self.furthest = max(self.furthest, i + matched)

    def _star_ends(self, node: Star, i: int) -> Dict[int, int]:
        reach: Dict[int, int] = {i: 1}
        heap = [i]
        done: Set[int] = set()
        while heap:
            k = heapq.heappop(heap)
            if k in done:
                continue
            done.add(k)
            body_ends = self.ends(node.body, k)
            if k in body_ends:
                # a nullable body repeats "" without bound
                reach[k] = 2
            for j, c in body_ends.items():
                if j == k:
                    continue
                reach[j] = _cap(reach.get(j, 0) + reach[k] * c)
                heapq.heappush(heap, j)
        return reach

    def count(self, node: Regex, i: int, j: int) -> int:
        return self.ends(node, i).get(j, 0)

    def tree(self, node: Regex, i: int, j: int) -> ParseTree:
        node = resolve(node, self.env)
        if isinstance(node, Const):
            return ConstLeaf(node.text)
        if isinstance(node, Or):
            if j in self.ends(node.left, i):
                return OrNode(LEFT, self.tree(node.left, i, j))
            return OrNode(RIGHT, self.tree(node.right, i, j))
        if isinstance(node, Concat):
            for k in sorted(self.ends(node.left, i)):
                if j in self.ends(node.right, k):
                    return ConcatNode(self.tree(node.left, i, k), self.tree(node.right, k, j))
        if isinstance(node, Star):
            children = []
            while i != j:
                for k in sorted(self.ends(node.body, i)):
                    if k != i and j in self.ends(node, k):
                        children.append(self.tree(node.body, i, k))
                        i = k
                        break
                else:
                    break
            return StarNode(tuple(children))
        raise NoParse(self.text[i:j], i)


def language_member(r: Regex, s: str, env: DefEnv = EMPTY_ENV) -> bool:
    """
    Decide whether s is in the language of r.

    Args:
        r: Regular expression
        s: Candidate string
        env: Definitions for any Refs in r

    Returns:
        True iff s is a member
    """
    return len(s) in _Matcher(s, env).ends(r, 0)


def count_parses(r: Regex, s: str, env: DefEnv = EMPTY_ENV) -> int:
    """Number of parse trees of s under r, capped at 2"""
    return _Matcher(s, env).count(r, 0, len(s))


def parse_string(r: Regex, s: str, env: DefEnv = EMPTY_ENV) -> ParseTree:
    """
    Return the unique parse tree of s under r.

    Raises:
        NoParse: s is not in the language (position = longest matched prefix)
        AmbiguousParse: s has two or more parses
    """
    matcher = _Matcher(s, env)
    n = matcher.count(r, 0, len(s))
    if n == 0:
        raise NoParse(s, matcher.furthest, show(r))
    if n > 1:
        raise AmbiguousParse(s, n)
    return matcher.tree(r, 0, len(s))


# ---------------------------------------------------------------------------
# Position automata
# ---------------------------------------------------------------------------

Weights = Dict[int, int]


def _add(target: Weights, source: Weights, scale: int = 1) -> None:
    if scale == 0:
        return
    for pos, w in source.items():
        target[pos] = _cap(target.get(pos, 0) + w * scale)


@dataclass
class _Positions:
    """Weighted Glushkov construction: multiplicities count parses, capped at 2"""
    chars: Dict[int, str] = field(default_factory=dict)
    follow: Dict[int, Weights] = field(default_factory=dict)

    def build(self, r: Regex, env: DefEnv, ids: Any) -> Tuple[int, Weights, Weights]:
        r = resolve(r, env)
        if isinstance(r, Empty):
            return 0, {}, {}
        if isinstance(r, Const):
            if not r.text:
                return 1, {}, {}
            positions = []
            for ch in r.text:
                p = next(ids)
                self.chars[p] = ch
                self.follow[p] = {}
                positions.append(p)
            for a, b in zip(positions, positions[1:]):
                self.follow[a][b] = 1
            return 0, {positions[0]: 1}, {positions[-1]: 1}
        if isinstance(r, Or):
            n1, f1, l1 = self.build(r.left, env, ids)
            n2, f2, l2 = self.build(r.right, env, ids)
            first, last = dict(f1), dict(l1)
            _add(first, f2)
            _add(last, l2)
            return _cap(n1 + n2), first, last
        if isinstance(r, Concat):
            n1, f1, l1 = self.build(r.left, env, ids)
            n2, f2, l2 = self.build(r.right, env, ids)
            for x, wx in l1.items():
                _add(self.follow[x], f2, wx)
            first = dict(f1)
            _add(first, f2, n1)
            last = dict(l2)
            _add(last, l1, n2)
            return _cap(n1 * n2), first, last
        # Star
        n, f, l = self.build(r.body, env, ids)
        for x, wx in l.items():
            _add(self.follow[x], f, wx)
        scale = 2 if n else 1
        first: Weights = {}
        last: Weights = {}
        _add(first, f, scale)
        _add(last, l, scale)
        return (2 if n else 1), first, last


@dataclass
class _Automaton:
    positions: _Positions
    null: int
    first: Weights
    last: Weights

    @classmethod
    def of(cls, r: Regex, env: DefEnv) -> "_Automaton":
        positions = _Positions()
        null, first, last = positions.build(r, env, _counter())
        return cls(positions, null, first, last)

    def alphabet(self) -> List[str]:
        return sorted(set(self.positions.chars.values()))

    def step(self, state: Optional[Weights], ch: str) -> Weights:
        chars = self.positions.chars
        if state is None:
            return {p: w for p, w in self.first.items() if chars[p] == ch}
        out: Weights = {}
        for x, wx in state.items():
            for y, wy in self.positions.follow[x].items():
                if chars[y] == ch:
                    out[y] = _cap(out.get(y, 0) + wx * wy)
        return out

    def accept(self, state: Optional[Weights]) -> int:
        if state is None:
            return self.null
        total = 0
        for x, wx in state.items():
            total += wx * self.last.get(x, 0)
        return _cap(total)


def _state_key(state: Optional[Weights]) -> Any:
    return None if state is None else tuple(sorted(state.items()))


def default_bound(r: Regex) -> int:
    """Witness length bound used when none is given: 2*size+4"""
    return 2 * size(r) + 4


def check_unambiguous(r: Regex, env: DefEnv = EMPTY_ENV,
                      bound: Optional[int] = -1) -> Union[bool, str]:
    """
    Look for a string with two parses.

    Breadth-first search over the determinized weighted position automaton
    finds the shortest ambiguous string, so the answer is exact when bound is
    None. With a bound, witnesses longer than it are not reported.

    Args:
        r: Regular expression
        env: Definitions for Refs
        bound: Maximum witness length; -1 selects 2*size+4, None is unbounded

    Returns:
        True when unambiguous (up to the bound), otherwise the witness string
    """
    if bound == -1:
        bound = default_bound(r)
    automaton = _Automaton.of(r, env)
    if automaton.null >= 2:
        return ""
    alphabet = automaton.alphabet()
    seen = {_state_key(None)}
    queue = deque([(None, "")])
    while queue:
        state, prefix = queue.popleft()
        if bound is not None and len(prefix) >= bound:
            continue
        for ch in alphabet:
            nxt = automaton.step(state, ch)
            if not nxt:
                continue
            word = prefix + ch
            if automaton.accept(nxt) >= 2:
                return word
            key = _state_key(nxt)
            if key not in seen:
                seen.add(key)
                queue.append((nxt, word))
    return True


def is_unambiguous(r: Regex, env: DefEnv = EMPTY_ENV) -> bool:
    """Exact unambiguity decision"""
    return check_unambiguous(r, env, bound=None) is True


def equivalent(r1: Regex, r2: Regex, env: DefEnv = EMPTY_ENV) -> bool:
    """
    Decide L(r1) == L(r2) by exploring pairs of position subsets.

    Args:
        r1: First regex
        r2: Second regex
        env: Definitions for Refs in either

    Returns:
        True iff the languages are equal
    """
    if r1 == r2:
        return True
    a1 = _Automaton.of(r1, env)
    a2 = _Automaton.of(r2, env)
    alphabet = sorted(set(a1.alphabet()) | set(a2.alphabet()))

    def key(state: Optional[Weights]) -> Any:
        return None if state is None else frozenset(state)

    start = (None, None)
    seen = {(None, None)}
    queue = deque([start])
    while queue:
        s1, s2 = queue.popleft()
        if bool(a1.accept(s1)) != bool(a2.accept(s2)):
            return False
        for ch in alphabet:
            n1 = {p: 1 for p in a1.step(s1, ch)}
            n2 = {p: 1 for p in a2.step(s2, ch)}
            if not n1 and not n2:
                continue
            k = (key(n1), key(n2))
            if k not in seen:
                seen.add(k)
                queue.append((n1, n2))
    return True


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def enumerate_strings(r: Regex, env: DefEnv = EMPTY_ENV, max_len: int = 0) -> List[str]:
    """
    All members of length <= max_len, shortest first then lexicographic.

    Args:
        r: Regular expression
        env: Definitions for Refs
        max_len: Length bound

    Returns:
        Duplicate-free sorted list
    """
    memo: Dict[int, FrozenSet[str]] = {}

    def lang(node: Regex) -> FrozenSet[str]:
        node = resolve(node, env)
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Empty):
            out: FrozenSet[str] = frozenset()
        elif isinstance(node, Const):
            out = frozenset([node.text]) if len(node.text) <= max_len else frozenset()
        elif isinstance(node, Or):
            out = lang(node.left) | lang(node.right)
        elif isinstance(node, Concat):
            right = lang(node.right)
            out = frozenset(a + b for a in lang(node.left) for b in right
                            if len(a) + len(b) <= max_len)
        else:
            body = [w for w in lang(node.body) if w]
            result = {""}
            frontier = {""}
            while frontier:
                grown = {a + b for a in frontier for b in body if len(a) + len(b) <= max_len}
                frontier = grown - result
                result |= frontier
            out = frozenset(result)
        memo[key] = out
        return out

    return sorted(lang(r), key=lambda w: (len(w), w))


def shortest_member(r: Regex, env: DefEnv = EMPTY_ENV) -> str:
    """
    The shortest member of L(r), lexicographically least among equals.

    Raises:
        PreconditionViolated: the language is empty
    """
    found = _shortest(r, env)
    if found is None:
        raise PreconditionViolated(f"{show(r)} has no members")
    return found


def _shortest(r: Regex, env: DefEnv) -> Optional[str]:
    if isinstance(r, Ref):
        return env.cached(("shortest", r.name), lambda: _shortest(env.regex(r.name), env))
    if isinstance(r, Empty):
        return None
    if isinstance(r, Const):
        return r.text
    if isinstance(r, Star):
        return ""
    if isinstance(r, Concat):
        left, right = _shortest(r.left, env), _shortest(r.right, env)
        return None if left is None or right is None else left + right
    options = [w for w in (_shortest(r.left, env), _shortest(r.right, env)) if w is not None]
    return min(options, key=lambda w: (len(w), w)) if options else None


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_ESCAPES = {'"': '\\"', '\\': '\\\\', '\n': '\\n', '\t': '\\t'}


def quote(text: str) -> str:
    """Render a string literal in the concrete syntax"""
    return '"' + "".join(_ESCAPES.get(ch, ch) for ch in text) + '"'


def show(r: Regex, level: int = 0) -> str:
    """Concrete syntax for r; level is the binding strength of the context"""
    if isinstance(r, Empty):
        return "empty"
    if isinstance(r, Const):
        return quote(r.text)
    if isinstance(r, Ref):
        return r.name
    if isinstance(r, Star):
        return show(r.body, 3) + "*"
    if isinstance(r, Concat):
        text = f"{show(r.left, 2)} {show(r.right, 1)}"
        return f"({text})" if level > 1 else text
    text = f"{show(r.left, 1)} | {show(r.right, 0)}"
    return f"({text})" if level > 0 else text
