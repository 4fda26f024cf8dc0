"""
Stochastic DNF Regular Expressions

The search normal form: an n-ary union of probability-weighted sequences, each
an interleaving s0 A1 s1 ... An sn of constant strings and atoms. An atom is
either an iterated DNF (a star) or a closed name that is never looked into.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from itertools import count
from typing import Any, Dict, List, Optional, Tuple

from src import lens as ln
from src import regex as rx
from src import sre
from src.errors import AmbiguousParse, EmptySubterm, NoParse, PreconditionViolated

NONE = "none"
SKIP = "skip"
REQUIRE = "require"

_GROUPS = count()


@dataclass(frozen=True)
class Atom:
    """A starred DNF (body, p) or a closed name (closed_ref)"""
    body: Optional["DnfRegex"] = None
    p: Optional[Fraction] = None
    closed_ref: Optional[str] = None
    relevance: str = NONE

    @property
    def is_closed(self) -> bool:
        return self.closed_ref is not None

    @cached_property
    def key(self) -> Tuple[Any, ...]:
        if self.closed_ref is not None:
            return (0, self.closed_ref, self.relevance)
        return (1, self.body.key, self.p, self.relevance)


@dataclass(frozen=True)
class Sequence:
    """
    Interleaving of len(atoms)+1 strings with the atoms.

    free is the product of the branch probabilities chosen inside skip, and
    required is set when a branch was chosen inside require. Sequences that
    differ only in choices made inside skip share a group.
    """
    strings: Tuple[str, ...]
    atoms: Tuple[Atom, ...] = ()
    free: Fraction = Fraction(1)
    required: bool = False
    group: Any = field(default_factory=lambda: next(_GROUPS), compare=False)

    def __post_init__(self):
        if len(self.strings) != len(self.atoms) + 1:
            raise ValueError("a sequence needs exactly one more string than atoms")

    @cached_property
    def key(self) -> Tuple[Any, ...]:
        return (self.strings, tuple(atom.key for atom in self.atoms), self.free, self.required)


@dataclass(frozen=True)
class DnfRegex:
    """Canonically ordered (sequence, probability) branches"""
    branches: Tuple[Tuple[Sequence, Fraction], ...] = ()

    @cached_property
    def key(self) -> Tuple[Any, ...]:
        return tuple((seq.key, p) for seq, p in self.branches)

    @property
    def sequences(self) -> List[Sequence]:
        return [seq for seq, _ in self.branches]

    @property
    def probabilities(self) -> List[Fraction]:
        return [p for _, p in self.branches]

    def __str__(self) -> str:
        return show(self)


def canonical(branches: List[Tuple[Sequence, Fraction]]) -> DnfRegex:
    """Sort branches into the canonical order"""
    return DnfRegex(tuple(sorted(branches, key=lambda b: (b[0].key, b[1]))))


def singleton(text: str) -> DnfRegex:
    return DnfRegex(((Sequence((text,)), Fraction(1)),))


def concat_seq(a: Sequence, b: Sequence) -> Sequence:
    """Join two sequences, fusing the touching constant strings"""
    strings = a.strings[:-1] + (a.strings[-1] + b.strings[0],) + b.strings[1:]
    return Sequence(strings, a.atoms + b.atoms, a.free * b.free, a.required or b.required,
                    (a.group, b.group))


def concat_dnf(x: DnfRegex, y: DnfRegex) -> DnfRegex:
    """Pairwise product of branches with multiplied probabilities"""
    return canonical([(concat_seq(sx, sy), px * py)
                      for sx, px in x.branches for sy, py in y.branches])


def or_dnf(x: DnfRegex, y: DnfRegex, p: Fraction) -> DnfRegex:
    """Weighted union; duplicates are kept"""
    return canonical([(seq, p * q) for seq, q in x.branches]
                     + [(seq, (1 - p) * q) for seq, q in y.branches])


def atom_to_dnf(a: Atom) -> DnfRegex:
    """A single sequence holding just the atom"""
    return DnfRegex(((Sequence(("", ""), (a,)), Fraction(1)),))


def closed_atom(name: str, relevance: str = NONE) -> Atom:
    return Atom(closed_ref=name, relevance=relevance)


def to_dnf(s: sre.SRE, env: rx.DefEnv = rx.EMPTY_ENV) -> DnfRegex:
    """
    Convert an SRE to its stochastic DNF.

    Closed Refs become closed atoms; open Refs are converted through their
    definitions. Skip/Require mark every atom they contain.

    Raises:
        EmptySubterm: Empty occurs below the root
    """
    if isinstance(s, sre.Empty):
        return DnfRegex()
    return _to_dnf(s, env)


def _to_dnf(s: sre.SRE, env: rx.DefEnv) -> DnfRegex:
    if isinstance(s, sre.Const):
        return singleton(s.text)
    if isinstance(s, sre.Empty):
        raise EmptySubterm("Empty occurs inside a nonempty expression")
    if isinstance(s, sre.Concat):
        return concat_dnf(_to_dnf(s.left, env), _to_dnf(s.right, env))
    if isinstance(s, sre.Or):
        if s.p is None:
            raise PreconditionViolated(f"Missing probability on {sre.show(s)}")
        return or_dnf(_to_dnf(s.left, env), _to_dnf(s.right, env), s.p)
    if isinstance(s, sre.Star):
        if s.p is None:
            raise PreconditionViolated(f"Missing probability on {sre.show(s)}")
        return atom_to_dnf(Atom(body=_to_dnf(s.body, env), p=s.p))
    if isinstance(s, (sre.Skip, sre.Require)):
        mark = SKIP if isinstance(s, sre.Skip) else REQUIRE
        return with_relevance(_to_dnf(s.body, env), mark)
    if s.name in env and not env.is_closed(s.name):
        return env.cached(("dnf-open", s.name), lambda: _to_dnf(sre.binding(env, s.name), env))
    return atom_to_dnf(closed_atom(s.name))


def with_relevance(d: DnfRegex, mark: str) -> DnfRegex:
    """
    Mark every top-level atom of every sequence, and the branch choice itself.

    Under skip each branch's probability becomes free; under require a choice
    between two or more branches becomes required.
    """
    choice = len(d.branches) > 1
    skipped = next(_GROUPS)
    branches = []
    for seq, p in d.branches:
        atoms = tuple(replace(atom, relevance=mark) for atom in seq.atoms)
        if mark == SKIP:
            marked = Sequence(seq.strings, atoms, free=p, group=skipped)
        else:
            marked = Sequence(seq.strings, atoms, seq.free, seq.required or choice, seq.group)
        branches.append((marked, p))
    return canonical(branches)



# ---------------------------------------------------------------------------
# Back to regexes
# ---------------------------------------------------------------------------

def atom_sre(a: Atom) -> sre.SRE:
    """The SRE an atom stands for, relevance wrapper included"""
    inner = sre.Ref(a.closed_ref) if a.is_closed else sre.Star(to_sre(a.body), a.p)
    if a.relevance == SKIP:
        return sre.Skip(inner)
    if a.relevance == REQUIRE:
        return sre.Require(inner)
    return inner


def sequence_parts(seq: Sequence) -> List[sre.SRE]:
    """Constants and atoms in interleaved order"""
    parts: List[sre.SRE] = [sre.Const(seq.strings[0])]
    for atom, text in zip(seq.atoms, seq.strings[1:]):
        parts.append(atom_sre(atom))
        parts.append(sre.Const(text))
    return parts


def sequence_sre(seq: Sequence) -> sre.SRE:
    """Right-nested concatenation of the sequence's parts, empty strings dropped"""
    parts = [part for part in sequence_parts(seq) if part != sre.Const("")]
    if not parts:
        return sre.Const("")
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = sre.Concat(part, result)
    return result


def to_sre(d: DnfRegex) -> sre.SRE:
    """A union of the sequences whose distribution matches d"""
    if not d.branches:
        return sre.Empty()
    result = sequence_sre(d.branches[-1][0])
    remaining = d.branches[-1][1]
    for seq, p in reversed(d.branches[:-1]):
        remaining += p
        result = sre.Or(sequence_sre(seq), result, p / remaining)
    if len(d.branches) > 1:
        if all(seq.free == p for seq, p in d.branches):
            return sre.Skip(result)
        if all(seq.required for seq in d.sequences):
            return sre.Require(result)
    return result



def to_regex(d: DnfRegex) -> rx.Regex:
    return sre.strip(to_sre(d))


def sequence_regex(seq: Sequence) -> rx.Regex:
    return sre.strip(sequence_sre(seq))


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------

def dnf_probability(d: DnfRegex, w: str, env: rx.DefEnv = rx.EMPTY_ENV) -> Fraction:
    """Exact probability of w: the branch-weighted sum of sequence probabilities"""
    if not d.branches:
        return Fraction(0)
    return sum((p * sre.probability(sequence_sre(seq), w, env) for seq, p in d.branches),
               Fraction(0))


def atom_entropy(a: Atom, env: rx.DefEnv = rx.EMPTY_ENV) -> float:
    """Entropy of one atom; skipped atoms carry none"""
    if a.relevance == SKIP:
        return 0.0
    if a.is_closed:
        return sre.entropy(sre.Ref(a.closed_ref), env)
    return sre.star_entropy(dnf_entropy(a.body, env), a.p)


def sequence_entropy(seq: Sequence, env: rx.DefEnv = rx.EMPTY_ENV) -> float:
    return sum((atom_entropy(atom, env) for atom in seq.atoms), 0.0)


def dnf_entropy(d: DnfRegex, env: rx.DefEnv = rx.EMPTY_ENV) -> float:
    """
    Entropy of a DNF: the sum of p_i * (H(SQ_i) - log2 p_i + log2 free_i).

    The log2 free_i term removes the bits of choices made inside skip.

    Raises:
        PreconditionViolated: d is the empty DNF
    """
    if not d.branches:
        raise PreconditionViolated("Entropy of the empty language is undefined")
    total = 0.0
    for seq, p in d.branches:
        total += float(p) * (sequence_entropy(seq, env) - sre.log2(p) + sre.log2(seq.free))
    return total


def relevant_atom_entropy(a: Atom, env: rx.DefEnv = rx.EMPTY_ENV) -> float:
    """Bits lost when the atom is disconnected"""
    if a.relevance == SKIP:
        return 0.0
    if a.relevance == REQUIRE:
        return ln.INF if atom_entropy(a, env) > 0 else 0.0
    if a.is_closed:
        return ln.relevant_entropy(sre.Ref(a.closed_ref), env)
    return sre.star_entropy(relevant_dnf_entropy(a.body, env), a.p)


def relevant_dnf_entropy(d: DnfRegex, env: rx.DefEnv = rx.EMPTY_ENV) -> float:
    """dnf_entropy with relevance applied to atoms and to required branch choices"""
    if not d.branches:
        raise PreconditionViolated("Entropy of the empty language is undefined")
    if len(d.branches) > 1 and any(seq.required for seq in d.sequences):
        return ln.INF
    total = 0.0
    for seq, p in d.branches:
        lost = sum((relevant_atom_entropy(atom, env) for atom in seq.atoms), 0.0)
        total += float(p) * (lost - sre.log2(p) + sre.log2(seq.free))
    return total


def choice_entropy(d: DnfRegex, indices: List[int]) -> float:
    """
    Bits needed to tell apart the given branches of d.

    Branches in one skip group are not told apart; a required choice costs
    infinitely much.
    """
    mass: Dict[Any, Fraction] = {}
    for k in indices:
        seq, p = d.branches[k]
        mass[seq.group] = mass.get(seq.group, Fraction(0)) + p
    if len(mass) < 2:
        return 0.0
    total = sum(mass.values(), Fraction(0))
    bits = -sum(float(m / total) * sre.log2(m / total) for m in mass.values())
    if any(d.branches[k][0].required for k in indices):
        return ln.INF
    return bits




# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AtomMatch:
    """Substring matched by an atom; iterations are set for star atoms"""
    text: str
    iterations: Optional[Tuple[str, ...]] = None


@dataclass(frozen=True)
class DnfParse:
    branch: int
    atoms: Tuple[AtomMatch, ...]


def _atom_regex(a: Atom) -> rx.Regex:
    return rx.Ref(a.closed_ref) if a.is_closed else rx.Star(to_regex(a.body))


def parse_sequence(seq: Sequence, w: str, env: rx.DefEnv = rx.EMPTY_ENV) -> Tuple[AtomMatch, ...]:
    """Split w along the sequence; raises NoParse/AmbiguousParse"""
    parts: List[rx.Regex] = [rx.Const(seq.strings[0])]
    for atom, text in zip(seq.atoms, seq.strings[1:]):
        parts.append(_atom_regex(atom))
        parts.append(rx.Const(text))
    tree = rx.parse_string(rx.concat_all(parts), w, env)
    subtrees = []
    for _ in range(len(parts) - 1):
        subtrees.append(tree.left)
        tree = tree.right
    subtrees.append(tree)
    matches = []
    for index, atom in enumerate(seq.atoms):
        sub = subtrees[2 * index + 1]
        if atom.is_closed:
            matches.append(AtomMatch(rx.flatten(sub)))
        else:
            iterations = tuple(rx.flatten(child) for child in sub.children)
            matches.append(AtomMatch("".join(iterations), iterations))
    return tuple(matches)


def dnf_parse(d: DnfRegex, w: str, env: rx.DefEnv = rx.EMPTY_ENV) -> DnfParse:
    """
    Find the branch w belongs to and what each atom matched.

    Raises:
        NoParse: no branch matches
        AmbiguousParse: several branches match, or one matches twice
    """
    found: Optional[DnfParse] = None
    for index, seq in enumerate(d.sequences):
        if not rx.language_member(sequence_regex(seq), w, env):
            continue
        if found is not None:
            raise AmbiguousParse(w, 2)
        found = DnfParse(index, parse_sequence(seq, w, env))
    if found is None:
        raise NoParse(w, _furthest(d, w, env), show(d))
    return found


def branch_of(d: DnfRegex, w: str, env: rx.DefEnv = rx.EMPTY_ENV) -> int:
    """Index of the unique branch containing w"""
    matches = [i for i, seq in enumerate(d.sequences)
               if rx.language_member(sequence_regex(seq), w, env)]
    if not matches:
        raise NoParse(w, _furthest(d, w, env), show(d))
    if len(matches) > 1:
        raise AmbiguousParse(w, len(matches))
    return matches[0]


def _furthest(d: DnfRegex, w: str, env: rx.DefEnv) -> int:
    try:
        rx.parse_string(to_regex(d), w, env)
    except NoParse as e:
        return e.position
    except AmbiguousParse:
        pass
    return len(w)


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

def show_atom(a: Atom) -> str:
    core = a.closed_ref if a.is_closed else f"({show(a.body)})*{{{sre.show_prob(a.p)}}}"
    if a.relevance != NONE:
        core = f"{a.relevance}({core})"
    return core


def show_sequence(seq: Sequence) -> str:
    pieces = [rx.quote(seq.strings[0])]
    for atom, text in zip(seq.atoms, seq.strings[1:]):
        pieces.append(show_atom(atom))
        pieces.append(rx.quote(text))
    return "[" + " · ".join(pieces) + "]"


def show(d: DnfRegex) -> str:
    """The ⟨(SQ, p) ⊕ ...⟩ notation"""
    inner = " ⊕ ".join(f"({show_sequence(seq)}, {sre.show_prob(p)})" for seq, p in d.branches)
    return f"⟨{inner}⟩"
