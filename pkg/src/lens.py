"""
Simple Symmetric Lenses

The surface lens language. Each combinator has a type S <=> T over plain
regexes and four functions (create_r, create_l, put_r, put_l) satisfying the
round-tripping laws:

    put_l(create_r(s), s) = s        put_r(create_l(t), t) = t
    put_l(put_r(s, t), s) = s        put_r(put_l(t, s), t) = t

Inputs are parsed once against the lens type and the evaluators walk the
parse trees. Entropy bounds (h_right, h_left) estimate how many bits one side
needs to rebuild the other; their upper bounds sum to the lens cost.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

from src import regex as rx
from src import sre
from src.errors import (ComposePresent, DefaultNotInLanguage, TypeMismatch,
                        UnambiguityViolation, UnresolvedLibRef)

INF = math.inf


# ---------------------------------------------------------------------------
# Syntax
# ---------------------------------------------------------------------------

class LensNode:
    """Shared behavior of lens AST nodes"""

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Identity(LensNode):
    regex: rx.Regex


@dataclass(frozen=True)
class Disconnect(LensNode):
    src: rx.Regex
    tgt: rx.Regex
    s_default: str
    t_default: str


@dataclass(frozen=True)
class Concat(LensNode):
    left: "Lens"
    right: "Lens"


@dataclass(frozen=True)
class Swap(LensNode):
    left: "Lens"
    right: "Lens"


@dataclass(frozen=True)
class Or(LensNode):
    left: "Lens"
    right: "Lens"


@dataclass(frozen=True)
class MergeRight(LensNode):
    """(S1 | S2) <=> T, both sublenses sharing the target"""
    left: "Lens"
    right: "Lens"


@dataclass(frozen=True)
class MergeLeft(LensNode):
    """S <=> (T1 | T2), both sublenses sharing the source"""
    left: "Lens"
    right: "Lens"


@dataclass(frozen=True)
class Compose(LensNode):
    left: "Lens"
    right: "Lens"


@dataclass(frozen=True)
class Iterate(LensNode):
    body: "Lens"


@dataclass(frozen=True)
class Invert(LensNode):
    body: "Lens"


@dataclass(frozen=True)
class LibRef(LensNode):
    name: str


Lens = Union[Identity, Disconnect, Concat, Swap, Or, MergeRight, MergeLeft,
             Compose, Iterate, Invert, LibRef]

BINARY = (Concat, Swap, Or, MergeRight, MergeLeft, Compose)


def ins(text: str) -> Disconnect:
    """Insert a constant on the right"""
    return Disconnect(rx.Const(""), rx.Const(text), "", text)


def delete(text: str) -> Disconnect:
    """Delete a constant from the left"""
    return Disconnect(rx.Const(text), rx.Const(""), text, "")


def concat_lenses(parts: List[Lens]) -> Lens:
    """Right-nested Concat of the parts"""
    if not parts:
        return Identity(rx.Const(""))
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Concat(part, result)
    return result


def has_compose(l: Lens, library: Optional["Library"] = None) -> bool:
    """Whether composition occurs in l, looking through library entries"""
    if isinstance(l, Compose):
        return True
    if isinstance(l, BINARY):
        return has_compose(l.left, library) or has_compose(l.right, library)
    if isinstance(l, (Iterate, Invert)):
        return has_compose(l.body, library)
    if isinstance(l, LibRef) and library is not None and l.name in library:
        return library.get(l.name).has_compose
    return False


# ---------------------------------------------------------------------------
# Library
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LibraryEntry:
    """A previously checked lens available by name"""
    name: str
    lens: Lens
    src: rx.Regex
    tgt: rx.Regex
    cost: Optional[float] = None
    has_compose: bool = False


class Library:
    """Named lenses, in definition order"""

    def __init__(self, entries: Optional[Dict[str, LibraryEntry]] = None):
        self._entries: Dict[str, LibraryEntry] = dict(entries or {})

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __iter__(self):
        return iter(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, name: str) -> LibraryEntry:
        try:
            return self._entries[name]
        except KeyError:
            raise UnresolvedLibRef(name) from None

    def add(self, entry: LibraryEntry) -> "Library":
        """Return a new library with entry added"""
        entries = dict(self._entries)
        entries[entry.name] = entry
        return Library(entries)


EMPTY_LIBRARY = Library()


# ---------------------------------------------------------------------------
# Entropy intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Bounds in bits; hi may be infinite"""
    lo: float = 0.0
    hi: float = 0.0

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def scaled(self, k: Union[float, Fraction]) -> "Interval":
        k = float(k)
        if k == 0:
            return ZERO
        return Interval(self.lo * k, self.hi * k)

    @staticmethod
    def point(value: float) -> "Interval":
        return Interval(value, value)


ZERO = Interval()
INFINITE = Interval(INF, INF)


def mix(p: Fraction, a: Interval, b: Interval) -> Interval:
    """p*a + (1-p)*b; a branch with probability zero contributes nothing"""
    return a.scaled(p) + b.scaled(1 - p)


def merge_bound(a: Interval, b: Interval) -> Interval:
    """Recovering the branch of a merge costs at most one extra bit"""
    return Interval(0.0, a.hi + b.hi + 1)


# ---------------------------------------------------------------------------
# Edits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Inl:
    """An edit to the left format"""
    text: str


@dataclass(frozen=True)
class Inr:
    """An edit to the right format"""
    text: str


Edit = Union[Inl, Inr]
EditState = Optional[Tuple[str, str]]


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

class LensEvaluator:
    """
    Typing, evaluation and cost for lenses over one definition environment.

    Types are memoized per lens object. typecheck validates (unambiguity,
    equivalence at seams, defaults); the evaluators only need the structural
    types and never re-validate.
    """

    def __init__(self, env: rx.DefEnv = rx.EMPTY_ENV, library: Optional[Library] = None,
                 unambiguity_bound: Optional[int] = -1):
        self.env = env
        self.library = library if library is not None else EMPTY_LIBRARY
        self.unambiguity_bound = unambiguity_bound
        self._types: Dict[int, Tuple[Lens, rx.Regex, rx.Regex]] = {}
        self._checked: Dict[int, Lens] = {}
        self._unambiguous: Dict[rx.Regex, bool] = {}

    # -- typing -------------------------------------------------------------

    def types(self, l: Lens) -> Tuple[rx.Regex, rx.Regex]:
        """Structural type of l without validation"""
        found = self._types.get(id(l))
        if found is not None:
            return found[1], found[2]
        src, tgt = self._infer(l)
        self._types[id(l)] = (l, src, tgt)
        return src, tgt

    def _infer(self, l: Lens) -> Tuple[rx.Regex, rx.Regex]:
        if isinstance(l, Identity):
            return l.regex, l.regex
        if isinstance(l, Disconnect):
            return l.src, l.tgt
        if isinstance(l, Concat):
            (s1, t1), (s2, t2) = self.types(l.left), self.types(l.right)
            return rx.Concat(s1, s2), rx.Concat(t1, t2)
        if isinstance(l, Swap):
            (s1, t1), (s2, t2) = self.types(l.left), self.types(l.right)
            return rx.Concat(s1, s2), rx.Concat(t2, t1)
        if isinstance(l, Or):
            (s1, t1), (s2, t2) = self.types(l.left), self.types(l.right)
            return rx.Or(s1, s2), rx.Or(t1, t2)
        if isinstance(l, MergeRight):
            (s1, t1), (s2, _) = self.types(l.left), self.types(l.right)
            return rx.Or(s1, s2), t1
        if isinstance(l, MergeLeft):
            (s1, t1), (_, t2) = self.types(l.left), self.types(l.right)
            return s1, rx.Or(t1, t2)
        if isinstance(l, Compose):
            return self.types(l.left)[0], self.types(l.right)[1]
        if isinstance(l, Iterate):
            s, t = self.types(l.body)
            return rx.Star(s), rx.Star(t)
        if isinstance(l, Invert):
            s, t = self.types(l.body)
            return t, s
        entry = self.library.get(l.name)
        return entry.src, entry.tgt

    def typecheck(self, l: Lens) -> Tuple[rx.Regex, rx.Regex]:
        """
        Check l and return its type (src, tgt).

        Raises:
            TypeMismatch: a merge or composition seam has inequivalent types
            DefaultNotInLanguage: a disconnect default is outside its regex
            UnambiguityViolation: a type fails the unambiguity check
            UnresolvedLibRef: a library name is unknown
        """
        if id(l) not in self._checked:
            self._check(l)
            self._checked[id(l)] = l
        return self.types(l)

    def _check(self, l: Lens) -> None:
        if isinstance(l, Identity):
            self._require_unambiguous(l.regex)
        elif isinstance(l, Disconnect):
            self._require_unambiguous(l.src)
            self._require_unambiguous(l.tgt)
            for default, regex in ((l.s_default, l.src), (l.t_default, l.tgt)):
                if not rx.language_member(regex, default, self.env):
                    raise DefaultNotInLanguage(default, rx.show(regex))
        elif isinstance(l, BINARY):
            (s1, t1), (s2, t2) = self.typecheck(l.left), self.typecheck(l.right)
            if isinstance(l, MergeRight):
                self._require_equivalent("merge_right targets", t1, t2)
            elif isinstance(l, MergeLeft):
                self._require_equivalent("merge_left sources", s1, s2)
            elif isinstance(l, Compose):
                self._require_equivalent("compose", t1, s2)
            src, tgt = self.types(l)
            self._require_unambiguous(src)
            self._require_unambiguous(tgt)
        elif isinstance(l, (Iterate, Invert)):
            self.typecheck(l.body)
            src, tgt = self.types(l)
            self._require_unambiguous(src)
            self._require_unambiguous(tgt)
        else:
            self.library.get(l.name)

    def _require_equivalent(self, where: str, expected: rx.Regex, got: rx.Regex) -> None:
        if not rx.equivalent(expected, got, self.env):
            raise TypeMismatch(where, rx.show(expected), rx.show(got))

    def _require_unambiguous(self, r: rx.Regex) -> None:
        if r in self._unambiguous:
            return
        verdict = rx.check_unambiguous(r, self.env, self.unambiguity_bound)
        if verdict is not True:
            raise UnambiguityViolation(rx.show(r), verdict)
        self._unambiguous[r] = True

    # -- parsing ------------------------------------------------------------

    def _parse(self, r: rx.Regex, text: str) -> rx.ParseTree:
        return rx.parse_string(r, text, self.env)

    def _retree(self, tree: rx.ParseTree, have: rx.Regex, want: rx.Regex) -> rx.ParseTree:
        """Re-parse tree's string when the expected type differs structurally"""
        if have is want or have == want:
            return tree
        return self._parse(want, rx.flatten(tree))

    # -- the four functions -------------------------------------------------

    def create_r(self, l: Lens, s: str) -> str:
        """Build a right string from a left one"""
        return self._cr(l, self._parse(self.types(l)[0], s))

    def create_l(self, l: Lens, t: str) -> str:
        """Build a left string from a right one"""
        return self._cl(l, self._parse(self.types(l)[1], t))

    def put_r(self, l: Lens, s: str, t: str) -> str:
        """Push a left string into an existing right string"""
        src, tgt = self.types(l)
        return self._pr(l, self._parse(src, s), self._parse(tgt, t))

    def put_l(self, l: Lens, t: str, s: str) -> str:
        """Push a right string into an existing left string"""
        src, tgt = self.types(l)
        return self._pl(l, self._parse(tgt, t), self._parse(src, s))

    def _cr(self, l: Lens, s: rx.ParseTree) -> str:
        if isinstance(l, Identity):
            return rx.flatten(s)
        if isinstance(l, Disconnect):
            return l.t_default
        if isinstance(l, Concat):
            return self._cr(l.left, s.left) + self._cr(l.right, s.right)
        if isinstance(l, Swap):
            return self._cr(l.right, s.right) + self._cr(l.left, s.left)
        if isinstance(l, (Or, MergeRight)):
            branch = l.left if s.side == rx.LEFT else l.right
            return self._cr(branch, s.child)
        if isinstance(l, MergeLeft):
            return self._cr(l.left, s)
        if isinstance(l, Compose):
            middle = self._cr(l.left, s)
            return self._cr(l.right, self._parse(self.types(l.right)[0], middle))
        if isinstance(l, Iterate):
            return "".join(self._cr(l.body, child) for child in s.children)
        if isinstance(l, Invert):
            return self._cl(l.body, s)
        entry = self.library.get(l.name)
        return self._cr(entry.lens, self._retree(s, entry.src, self.types(entry.lens)[0]))

    def _cl(self, l: Lens, t: rx.ParseTree) -> str:
        if isinstance(l, Identity):
            return rx.flatten(t)
        if isinstance(l, Disconnect):
            return l.s_default
        if isinstance(l, Concat):
            return self._cl(l.left, t.left) + self._cl(l.right, t.right)
        if isinstance(l, Swap):
            return self._cl(l.left, t.right) + self._cl(l.right, t.left)
        if isinstance(l, (Or, MergeLeft)):
            branch = l.left if t.side == rx.LEFT else l.right
            return self._cl(branch, t.child)
        if isinstance(l, MergeRight):
            return self._cl(l.left, t)
        if isinstance(l, Compose):
            middle = self._cl(l.right, t)
            return self._cl(l.left, self._parse(self.types(l.left)[1], middle))
        if isinstance(l, Iterate):
            return "".join(self._cl(l.body, child) for child in t.children)
        if isinstance(l, Invert):
            return self._cr(l.body, t)
        entry = self.library.get(l.name)
        return self._cl(entry.lens, self._retree(t, entry.tgt, self.types(entry.lens)[1]))

    def _pr(self, l: Lens, s: rx.ParseTree, t: rx.ParseTree) -> str:
        if isinstance(l, Identity):
            return rx.flatten(s)
        if isinstance(l, Disconnect):
            return rx.flatten(t)
        if isinstance(l, Concat):
            return self._pr(l.left, s.left, t.left) + self._pr(l.right, s.right, t.right)
        if isinstance(l, Swap):
            return self._pr(l.right, s.right, t.left) + self._pr(l.left, s.left, t.right)
        if isinstance(l, Or):
            branch = l.left if s.side == rx.LEFT else l.right
            if s.side == t.side:
                return self._pr(branch, s.child, t.child)
            return self._cr(branch, s.child)
        if isinstance(l, MergeRight):
            if s.side == rx.LEFT:
                return self._pr(l.left, s.child, t)
            t2 = self._retree(t, self.types(l.left)[1], self.types(l.right)[1])
            return self._pr(l.right, s.child, t2)
        if isinstance(l, MergeLeft):
            if t.side == rx.LEFT:
                return self._pr(l.left, s, t.child)
            s2 = self._retree(s, self.types(l.left)[0], self.types(l.right)[0])
            return self._pr(l.right, s2, t.child)
        if isinstance(l, Compose):
            mid_left, mid_right = self.types(l.left)[1], self.types(l.right)[0]
            old_middle = self._cl(l.right, t)
            middle = self._pr(l.left, s, self._parse(mid_left, old_middle))
            return self._pr(l.right, self._parse(mid_right, middle), t)
        if isinstance(l, Iterate):
            olds = t.children
            pieces = [self._pr(l.body, child, olds[k]) if k < len(olds) else self._cr(l.body, child)
                      for k, child in enumerate(s.children)]
            return "".join(pieces)
        if isinstance(l, Invert):
            return self._pl(l.body, s, t)
        entry = self.library.get(l.name)
        src, tgt = self.types(entry.lens)
        return self._pr(entry.lens, self._retree(s, entry.src, src), self._retree(t, entry.tgt, tgt))

    def _pl(self, l: Lens, t: rx.ParseTree, s: rx.ParseTree) -> str:
        if isinstance(l, Identity):
            return rx.flatten(t)
        if isinstance(l, Disconnect):
            return rx.flatten(s)
        if isinstance(l, Concat):
            return self._pl(l.left, t.left, s.left) + self._pl(l.right, t.right, s.right)
        if isinstance(l, Swap):
            return self._pl(l.left, t.right, s.left) + self._pl(l.right, t.left, s.right)
        if isinstance(l, Or):
            branch = l.left if t.side == rx.LEFT else l.right
            if s.side == t.side:
                return self._pl(branch, t.child, s.child)
            return self._cl(branch, t.child)
        if isinstance(l, MergeRight):
            if s.side == rx.LEFT:
                return self._pl(l.left, t, s.child)
            t2 = self._retree(t, self.types(l.left)[1], self.types(l.right)[1])
            return self._pl(l.right, t2, s.child)
        if isinstance(l, MergeLeft):
            if t.side == rx.LEFT:
                return self._pl(l.left, t.child, s)
            s2 = self._retree(s, self.types(l.left)[0], self.types(l.right)[0])
            return self._pl(l.right, t.child, s2)
        if isinstance(l, Compose):
            mid_left, mid_right = self.types(l.left)[1], self.types(l.right)[0]
            old_middle = self._cr(l.left, s)
            middle = self._pl(l.right, t, self._parse(mid_right, old_middle))
            return self._pl(l.left, self._parse(mid_left, middle), s)
        if isinstance(l, Iterate):
            olds = s.children
            pieces = [self._pl(l.body, child, olds[k]) if k < len(olds) else self._cl(l.body, child)
                      for k, child in enumerate(t.children)]
            return "".join(pieces)
        if isinstance(l, Invert):
            return self._pr(l.body, t, s)
        entry = self.library.get(l.name)
        src, tgt = self.types(entry.lens)
        return self._pl(entry.lens, self._retree(t, entry.tgt, tgt), self._retree(s, entry.src, src))

    # -- entropy bounds -----------------------------------------------------

    def h_right(self, l: Lens, s: sre.SRE, t: sre.SRE) -> Interval:
        """Bits needed to recover the right string from the left one"""
        return self._bound(l, s, t, right=True)

    def h_left(self, l: Lens, s: sre.SRE, t: sre.SRE) -> Interval:
        """Bits needed to recover the left string from the right one"""
        return self._bound(l, s, t, right=False)

    def cost(self, l: Lens, s: sre.SRE, t: sre.SRE) -> float:
        """Sum of the two upper bounds; zero for bijections"""
        return self.h_left(l, s, t).hi + self.h_right(l, s, t).hi

    def _bound(self, l: Lens, s: sre.SRE, t: sre.SRE, right: bool) -> Interval:
        # the side being recovered
        recovered = t if right else s
        core, mark = _peel(recovered)
        if mark is sre.Skip:
            return ZERO
        if mark is sre.Require:
            inner = self._bound(l, *((s, core) if right else (core, t)), right=right)
            return ZERO if inner.hi == 0 else INFINITE
        return self._structural(l, s, t, right)

    def _structural(self, l: Lens, s: sre.SRE, t: sre.SRE, right: bool) -> Interval:
        if isinstance(l, Identity):
            return ZERO
        if isinstance(l, Disconnect):
            return Interval.point(relevant_entropy(t if right else s, self.env))
        if isinstance(l, Compose):
            raise ComposePresent("Cost is undefined for lenses with composition")
        if isinstance(l, Invert):
            return self._bound(l.body, t, s, right=not right)
        if isinstance(l, LibRef):
            entry = self.library.get(l.name)
            if entry.cost is not None:
                return Interval.point(entry.cost / 2)
            if entry.has_compose:
                raise ComposePresent(f"Lens {l.name} uses composition and has no recorded cost")
            return self._bound(entry.lens, s, t, right)
        src, tgt = self.types(l)
        if isinstance(l, (Concat, Swap)):
            s1, s2 = self._view(s, src, sre.Concat)
            first, second = self._view(t, tgt, sre.Concat)
            t1, t2 = (first, second) if isinstance(l, Concat) else (second, first)
            return self._bound(l.left, s1, t1, right) + self._bound(l.right, s2, t2, right)
        if isinstance(l, Or):
            s1, s2, p = self._view_or(s, src)
            t1, t2, q = self._view_or(t, tgt)
            a = self._bound(l.left, s1, t1, right)
            b = self._bound(l.right, s2, t2, right)
            return mix(p if right else q, a, b)
        if isinstance(l, MergeRight):
            s1, s2, p = self._view_or(s, src)
            a = self._bound(l.left, s1, t, right)
            b = self._bound(l.right, s2, t, right)
            return mix(p, a, b) if right else merge_bound(a, b)
        if isinstance(l, MergeLeft):
            t1, t2, q = self._view_or(t, tgt)
            a = self._bound(l.left, s, t1, right)
            b = self._bound(l.right, s, t2, right)
            return merge_bound(a, b) if right else mix(q, a, b)
        sb, p = self._view_star(s, src)
        tb, q = self._view_star(t, tgt)
        inner = self._bound(l.body, sb, tb, right)
        weight = p if right else q
        return inner.scaled(weight / (1 - weight))

    # -- structural views of SREs -------------------------------------------

    def _view(self, s: sre.SRE, expected: rx.Regex, kind: type) -> Tuple[sre.SRE, ...]:
        core, mark = _peel(s)
        core = self._open(core, expected, kind)
        return tuple(_wrap(child, mark) for child in sre.children(core))

    def _view_or(self, s: sre.SRE, expected: rx.Regex) -> Tuple[sre.SRE, sre.SRE, Fraction]:
        core, mark = _peel(s)
        core = self._open(core, expected, sre.Or)
        return _wrap(core.left, mark), _wrap(core.right, mark), core.p

    def _view_star(self, s: sre.SRE, expected: rx.Regex) -> Tuple[sre.SRE, Fraction]:
        core, mark = _peel(s)
        core = self._open(core, expected, sre.Star)
        return _wrap(core.body, mark), core.p

    def _open(self, core: sre.SRE, expected: rx.Regex, kind: type) -> sre.SRE:
        """Find the node of the given kind whose strip the lens type expects"""
        while isinstance(core, sre.Ref):
            core, _ = _peel(sre.binding(self.env, core.name))
        expected = rx.resolve(expected, self.env)
        if isinstance(core, kind) and sre.is_complete(core) and self._lines_up(core, expected):
            return core
        fallback = sre.to_stochastic(expected)
        if not isinstance(fallback, kind):
            raise TypeMismatch("cost", rx.show(expected), sre.show(core))
        return fallback

    def _lines_up(self, core: sre.SRE, expected: rx.Regex) -> bool:
        """Whether the children of core denote the languages the lens type splits into"""
        if isinstance(expected, (rx.Concat, rx.Or)):
            theirs = [expected.left, expected.right]
        elif isinstance(expected, rx.Star):
            theirs = [expected.body]
        else:
            return False
        ours = [sre.strip(child) for child in sre.children(core)]
        if len(ours) != len(theirs):
            return False
        return all(a == b or rx.equivalent(a, b, self.env) for a, b in zip(ours, theirs))


def _peel(s: sre.SRE) -> Tuple[sre.SRE, Optional[type]]:
    """Strip directly nested relevance wrappers; the outermost one wins"""
    mark = None
    while isinstance(s, (sre.Skip, sre.Require)):
        mark = mark or type(s)
        s = s.body
    return s, mark


def _wrap(s: sre.SRE, mark: Optional[type]) -> sre.SRE:
    return s if mark is None else mark(s)


def relevant_entropy(s: sre.SRE, env: rx.DefEnv = rx.EMPTY_ENV) -> float:
    """
    Entropy of s when the whole string is thrown away.

    Skip contributes nothing, and a Require whose contents carry any
    information makes the loss infinitely expensive.
    """
    if isinstance(s, sre.Const):
        return 0.0
    if isinstance(s, sre.Skip):
        return 0.0
    if isinstance(s, sre.Require):
        inner = relevant_entropy(s.body, env)
        return INF if inner > 0 else 0.0
    if isinstance(s, sre.Concat):
        return relevant_entropy(s.left, env) + relevant_entropy(s.right, env)
    if isinstance(s, sre.Or):
        p = s.p
        if p == 1:
            return relevant_entropy(s.left, env)
        if p == 0:
            return relevant_entropy(s.right, env)
        return (float(p) * (relevant_entropy(s.left, env) - sre.log2(p))
                + float(1 - p) * (relevant_entropy(s.right, env) - sre.log2(1 - p)))
    if isinstance(s, sre.Star):
        if s.p == 0:
            return 0.0
        return sre.star_entropy(relevant_entropy(s.body, env), s.p)
    if isinstance(s, sre.Ref):
        return env.cached(("relevant-entropy", s.name),
                          lambda: relevant_entropy(sre.binding(env, s.name), env))
    return sre.entropy(s, env)


# ---------------------------------------------------------------------------
# Synchronization, edits and the forgetful wrapper
# ---------------------------------------------------------------------------

def check_synchronized(ev: LensEvaluator, l: Lens, s: str, t: str) -> bool:
    """Whether (s, t) is a fixed point of both puts"""
    return ev.put_r(l, s, t) == t and ev.put_l(l, t, s) == s


def apply(ev: LensEvaluator, l: Lens, state: EditState, edits: List[Edit]) -> List[Edit]:
    """
    Translate a sequence of edits, starting from state.

    Edits made with no prior data use the creates; later edits put into the
    most recent synchronized pair.
    """
    out: List[Edit] = []
    for edit in edits:
        if isinstance(edit, Inl):
            y = ev.create_r(l, edit.text) if state is None else ev.put_r(l, edit.text, state[1])
            state = (edit.text, y)
            out.append(Inr(y))
        else:
            x = ev.create_l(l, edit.text) if state is None else ev.put_l(l, edit.text, state[0])
            state = (x, edit.text)
            out.append(Inl(x))
    return out


@dataclass(frozen=True)
class ForgetfulLens:
    """A classical symmetric lens whose complement is the last synchronized pair"""
    init: EditState
    putr: Callable[[str, EditState], Tuple[str, EditState]]
    putl: Callable[[str, EditState], Tuple[str, EditState]]


def forgetful_wrap(ev: LensEvaluator, l: Lens) -> ForgetfulLens:
    """Wrap a simple symmetric lens as a classical one"""

    def putr(x: str, c: EditState) -> Tuple[str, EditState]:
        y = ev.create_r(l, x) if c is None else ev.put_r(l, x, c[1])
        return y, (x, y)

    def putl(y: str, c: EditState) -> Tuple[str, EditState]:
        x = ev.create_l(l, y) if c is None else ev.put_l(l, y, c[0])
        return x, (x, y)

    return ForgetfulLens(None, putr, putl)


def classical_apply(f: ForgetfulLens, complement: EditState, edits: List[Edit]) -> List[Edit]:
    """Thread a complement through putr/putl"""
    out: List[Edit] = []
    for edit in edits:
        if isinstance(edit, Inl):
            y, complement = f.putr(edit.text, complement)
            out.append(Inr(y))
        else:
            x, complement = f.putl(edit.text, complement)
            out.append(Inl(x))
    return out


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_NAMES = {Concat: "concat", Swap: "swap", Or: "or", MergeRight: "merge_right",
          MergeLeft: "merge_left", Compose: "compose"}


def show(l: Lens) -> str:
    """Concrete syntax using the function-call forms"""
    if isinstance(l, Identity):
        return f"id({rx.show(l.regex)})"
    if isinstance(l, Disconnect):
        if l.src == rx.Const("") and l.tgt == rx.Const(l.t_default) and l.s_default == "":
            return f"ins({rx.quote(l.t_default)})"
        if l.tgt == rx.Const("") and l.src == rx.Const(l.s_default) and l.t_default == "":
            return f"del({rx.quote(l.s_default)})"
        return (f"disconnect({rx.show(l.src)}, {rx.show(l.tgt)}, "
                f"{rx.quote(l.s_default)}, {rx.quote(l.t_default)})")
    if isinstance(l, BINARY):
        return f"{_NAMES[type(l)]}({show(l.left)}, {show(l.right)})"
    if isinstance(l, Iterate):
        return f"iterate({show(l.body)})"
    if isinstance(l, Invert):
        return f"invert({show(l.body)})"
    return l.name
