"""
Symmetric DNF Lenses

Composition-free lenses that mirror the shape of stochastic DNF regexes:
a DnfLens maps left sequences to right sequences, a SeqLens maps atoms to
atoms and gives defaults to the rest, and an AtomLens iterates a nested
DnfLens or connects two closed names. These are what synthesis builds; the
to_surface conversion turns them back into ordinary lenses.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence as Seq, Tuple, Union

from src import dnf
from src import lens as ln
from src import regex as rx
from src import sre
from src.errors import CreateTableGap, DnfTypeError, InexpressibleLens


# ---------------------------------------------------------------------------
# Syntax
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IterateDnf:
    body: "DnfLens"


@dataclass(frozen=True)
class ClosedId:
    name: str


@dataclass(frozen=True)
class ClosedLib:
    """A library lens used between two closed atoms"""
    name: str
    lens: ln.Lens


AtomLens = Union[IterateDnf, ClosedId, ClosedLib]


@dataclass(frozen=True)
class AtomMapping:
    i: int
    j: int
    lens: AtomLens


@dataclass(frozen=True)
class SeqLens:
    """Atom mappings plus defaults for the atoms left out"""
    mappings: Tuple[AtomMapping, ...] = ()
    left_unmapped: Tuple[Tuple[int, str], ...] = ()
    right_unmapped: Tuple[Tuple[int, str], ...] = ()

    def right_of(self, i: int) -> Optional[AtomMapping]:
        for m in self.mappings:
            if m.i == i:
                return m
        return None

    def left_of(self, j: int) -> Optional[AtomMapping]:
        for m in self.mappings:
            if m.j == j:
                return m
        return None


@dataclass(frozen=True)
class SeqMapping:
    i: int
    j: int
    lens: SeqLens


@dataclass(frozen=True)
class DnfLens:
    """
    Sequence mappings and the two create tables.

    create_r_table[k] is the index of the mapping used to create from left
    sequence k; create_l_table is the same for right sequences.
    """
    mappings: Tuple[SeqMapping, ...] = ()
    create_r_table: Tuple[int, ...] = ()
    create_l_table: Tuple[int, ...] = ()

    def find(self, i: int, j: int) -> Optional[SeqMapping]:
        for m in self.mappings:
            if m.i == i and m.j == j:
                return m
        return None


def identity_lens(d: dnf.DnfRegex) -> DnfLens:
    """The bijective lens from a DNF to itself"""
    mappings = tuple(SeqMapping(k, k, identity_seq(seq)) for k, seq in enumerate(d.sequences))
    table = tuple(range(len(mappings)))
    return DnfLens(mappings, table, table)


def identity_seq(seq: dnf.Sequence) -> SeqLens:
    return SeqLens(tuple(AtomMapping(k, k, identity_atom(a)) for k, a in enumerate(seq.atoms)))


def identity_atom(a: dnf.Atom) -> AtomLens:
    return ClosedId(a.closed_ref) if a.is_closed else IterateDnf(identity_lens(a.body))


def mapping_count(dl: DnfLens) -> int:
    """Total number of atom mappings, nested ones included"""
    total = 0
    for m in dl.mappings:
        for am in m.lens.mappings:
            total += 1
            if isinstance(am.lens, IterateDnf):
                total += mapping_count(am.lens.body)
    return total


def disconnect_count(dl: DnfLens, src: dnf.DnfRegex, tgt: dnf.DnfRegex) -> int:
    """Unmapped atoms plus sequences that are only reached through creates"""
    total = 0
    for m in dl.mappings:
        total += len(m.lens.left_unmapped) + len(m.lens.right_unmapped)
        for am in m.lens.mappings:
            if isinstance(am.lens, IterateDnf):
                a = src.sequences[m.i].atoms[am.i]
                b = tgt.sequences[m.j].atoms[am.j]
                total += disconnect_count(am.lens.body, a.body, b.body)
    return total


# ---------------------------------------------------------------------------
# Typing
# ---------------------------------------------------------------------------

def typecheck_dnf(dl: DnfLens, src: dnf.DnfRegex, tgt: dnf.DnfRegex,
                  env: rx.DefEnv = rx.EMPTY_ENV,
                  library: Optional[ln.Library] = None) -> None:
    """
    Check the DNF lens typing judgment, recursively.

    Raises:
        CreateTableGap: a sequence has no valid create entry
        DnfTypeError: any other clause fails (named in .clause)
    """
    library = library if library is not None else ln.EMPTY_LIBRARY
    left, right = src.sequences, tgt.sequences
    for m in dl.mappings:
        if not (0 <= m.i < len(left) and 0 <= m.j < len(right)):
            raise DnfTypeError("SequenceIndex", f"({m.i}, {m.j}) is out of range")
        _check_seq(m.lens, left[m.i], right[m.j], env, library)
    _check_table(dl, dl.create_r_table, len(left), "left")
    _check_table(dl, dl.create_l_table, len(right), "right")


def _check_table(dl: DnfLens, table: Seq[int], count: int, side: str) -> None:
    if len(table) != count:
        raise CreateTableGap(side, min(len(table), count))
    for k, index in enumerate(table):
        if not 0 <= index < len(dl.mappings):
            raise CreateTableGap(side, k)
        m = dl.mappings[index]
        if (m.i if side == "left" else m.j) != k:
            raise CreateTableGap(side, k)


def _check_seq(sl: SeqLens, a: dnf.Sequence, b: dnf.Sequence,
               env: rx.DefEnv, library: ln.Library) -> None:
    lefts = [m.i for m in sl.mappings] + [k for k, _ in sl.left_unmapped]
    rights = [m.j for m in sl.mappings] + [k for k, _ in sl.right_unmapped]
    if sorted(lefts) != list(range(len(a.atoms))):
        raise DnfTypeError("LeftAtomCoverage", f"left atoms {sorted(lefts)} of {len(a.atoms)}")
    if sorted(rights) != list(range(len(b.atoms))):
        raise DnfTypeError("RightAtomCoverage", f"right atoms {sorted(rights)} of {len(b.atoms)}")
    for atoms, unmapped in ((a.atoms, sl.left_unmapped), (b.atoms, sl.right_unmapped)):
        for k, default in unmapped:
            if not rx.language_member(dnf._atom_regex(atoms[k]), default, env):
                raise DnfTypeError("DefaultNotInLanguage", f"{default!r} for {dnf.show_atom(atoms[k])}")
    for m in sl.mappings:
        _check_atom(m.lens, a.atoms[m.i], b.atoms[m.j], env, library)


def _check_atom(al: AtomLens, a: dnf.Atom, b: dnf.Atom,
                env: rx.DefEnv, library: ln.Library) -> None:
    if isinstance(al, IterateDnf):
        if a.is_closed or b.is_closed:
            raise DnfTypeError("IterateAtoms", "iterate connects two star atoms")
        typecheck_dnf(al.body, a.body, b.body, env, library)
    elif isinstance(al, ClosedId):
        if a.closed_ref != al.name or b.closed_ref != al.name:
            raise DnfTypeError("ClosedIdentity", f"{al.name} needs {al.name} on both sides")
    else:
        if not (a.is_closed and b.is_closed):
            raise DnfTypeError("LibraryAtoms", f"{al.name} connects closed atoms only")
        src, tgt = ln.LensEvaluator(env, library).types(al.lens)
        if src != rx.Ref(a.closed_ref) or tgt != rx.Ref(b.closed_ref):
            raise DnfTypeError("LibraryType", f"{al.name} does not have type "
                                              f"{a.closed_ref} <=> {b.closed_ref}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

class DnfEvaluator:
    """The four lens functions for a DnfLens at a fixed pair of DNF types"""

    def __init__(self, env: rx.DefEnv = rx.EMPTY_ENV, library: Optional[ln.Library] = None):
        self.env = env
        self.library = library if library is not None else ln.EMPTY_LIBRARY
        self.lenses = ln.LensEvaluator(env, self.library)

    def eval(self, dl: DnfLens, op: str, src: dnf.DnfRegex, tgt: dnf.DnfRegex,
             *inputs: str) -> str:
        """Dispatch by operation name: create_r, create_l, put_r or put_l"""
        return getattr(self, op)(dl, src, tgt, *inputs)

    def create_r(self, dl: DnfLens, src: dnf.DnfRegex, tgt: dnf.DnfRegex, s: str) -> str:
        i = dnf.branch_of(src, s, self.env)
        m = dl.mappings[dl.create_r_table[i]]
        return self._seq_create_r(m.lens, src.sequences[i], tgt.sequences[m.j], s)

    def create_l(self, dl: DnfLens, src: dnf.DnfRegex, tgt: dnf.DnfRegex, t: str) -> str:
        j = dnf.branch_of(tgt, t, self.env)
        m = dl.mappings[dl.create_l_table[j]]
        return self._seq_create_l(m.lens, src.sequences[m.i], tgt.sequences[j], t)

    def put_r(self, dl: DnfLens, src: dnf.DnfRegex, tgt: dnf.DnfRegex, s: str, t: str) -> str:
        i = dnf.branch_of(src, s, self.env)
        j = dnf.branch_of(tgt, t, self.env)
        m = dl.find(i, j)
        if m is None:
            return self.create_r(dl, src, tgt, s)
        return self._seq_put_r(m.lens, src.sequences[i], tgt.sequences[j], s, t)

    def put_l(self, dl: DnfLens, src: dnf.DnfRegex, tgt: dnf.DnfRegex, t: str, s: str) -> str:
        i = dnf.branch_of(src, s, self.env)
        j = dnf.branch_of(tgt, t, self.env)
        m = dl.find(i, j)
        if m is None:
            return self.create_l(dl, src, tgt, t)
        return self._seq_put_l(m.lens, src.sequences[i], tgt.sequences[j], t, s)

    # -- sequences ----------------------------------------------------------

    def _assemble(self, seq: dnf.Sequence, pieces: Dict[int, str]) -> str:
        out = [seq.strings[0]]
        for k, text in enumerate(seq.strings[1:]):
            out.append(pieces[k])
            out.append(text)
        return "".join(out)

    def _seq_create_r(self, sl: SeqLens, a: dnf.Sequence, b: dnf.Sequence, s: str) -> str:
        matches = dnf.parse_sequence(a, s, self.env)
        pieces = dict(sl.right_unmapped)
        for m in sl.mappings:
            pieces[m.j] = self._atom_create_r(m.lens, a.atoms[m.i], b.atoms[m.j], matches[m.i])
        return self._assemble(b, pieces)

    def _seq_create_l(self, sl: SeqLens, a: dnf.Sequence, b: dnf.Sequence, t: str) -> str:
        matches = dnf.parse_sequence(b, t, self.env)
        pieces = dict(sl.left_unmapped)
        for m in sl.mappings:
            pieces[m.i] = self._atom_create_l(m.lens, a.atoms[m.i], b.atoms[m.j], matches[m.j])
        return self._assemble(a, pieces)

    def _seq_put_r(self, sl: SeqLens, a: dnf.Sequence, b: dnf.Sequence, s: str, t: str) -> str:
        sm = dnf.parse_sequence(a, s, self.env)
        tm = dnf.parse_sequence(b, t, self.env)
        pieces = {k: tm[k].text for k, _ in sl.right_unmapped}
        for m in sl.mappings:
            pieces[m.j] = self._atom_put_r(m.lens, a.atoms[m.i], b.atoms[m.j], sm[m.i], tm[m.j])
        return self._assemble(b, pieces)

    def _seq_put_l(self, sl: SeqLens, a: dnf.Sequence, b: dnf.Sequence, t: str, s: str) -> str:
        sm = dnf.parse_sequence(a, s, self.env)
        tm = dnf.parse_sequence(b, t, self.env)
        pieces = {k: sm[k].text for k, _ in sl.left_unmapped}
        for m in sl.mappings:
            pieces[m.i] = self._atom_put_l(m.lens, a.atoms[m.i], b.atoms[m.j], tm[m.j], sm[m.i])
        return self._assemble(a, pieces)

    # -- atoms --------------------------------------------------------------

    def _atom_create_r(self, al: AtomLens, a: dnf.Atom, b: dnf.Atom, s: dnf.AtomMatch) -> str:
        if isinstance(al, ClosedId):
            return s.text
        if isinstance(al, ClosedLib):
            return self.lenses.create_r(al.lens, s.text)
        return "".join(self.create_r(al.body, a.body, b.body, piece) for piece in s.iterations)

    def _atom_create_l(self, al: AtomLens, a: dnf.Atom, b: dnf.Atom, t: dnf.AtomMatch) -> str:
        if isinstance(al, ClosedId):
            return t.text
        if isinstance(al, ClosedLib):
            return self.lenses.create_l(al.lens, t.text)
        return "".join(self.create_l(al.body, a.body, b.body, piece) for piece in t.iterations)

    def _atom_put_r(self, al: AtomLens, a: dnf.Atom, b: dnf.Atom,
                    s: dnf.AtomMatch, t: dnf.AtomMatch) -> str:
        if isinstance(al, ClosedId):
            return s.text
        if isinstance(al, ClosedLib):
            return self.lenses.put_r(al.lens, s.text, t.text)
        olds = t.iterations
        return "".join(self.put_r(al.body, a.body, b.body, piece, olds[k]) if k < len(olds)
                       else self.create_r(al.body, a.body, b.body, piece)
                       for k, piece in enumerate(s.iterations))

    def _atom_put_l(self, al: AtomLens, a: dnf.Atom, b: dnf.Atom,
                    t: dnf.AtomMatch, s: dnf.AtomMatch) -> str:
        if isinstance(al, ClosedId):
            return t.text
        if isinstance(al, ClosedLib):
            return self.lenses.put_l(al.lens, t.text, s.text)
        olds = s.iterations
        return "".join(self.put_l(al.body, a.body, b.body, piece, olds[k]) if k < len(olds)
                       else self.create_l(al.body, a.body, b.body, piece)
                       for k, piece in enumerate(t.iterations))

    # -- cost ---------------------------------------------------------------

    def dnf_cost(self, dl: DnfLens, src: dnf.DnfRegex, tgt: dnf.DnfRegex) -> float:
        """Sum of the upper bounds in both directions"""
        return self.bound(dl, src, tgt, right=True).hi + self.bound(dl, src, tgt, right=False).hi

    def bound(self, dl: DnfLens, src: dnf.DnfRegex, tgt: dnf.DnfRegex, right: bool) -> ln.Interval:
        """
        Expected bits to recover one side, weighted by branch probability.

        A sequence with several mappings must also recover which one applies:
        the entropy of that choice, free when it was made inside skip.
        """
        total = ln.ZERO
        origin = src if right else tgt
        recovered = tgt if right else src
        for k, (_, weight) in enumerate(origin.branches):
            found = [m for m in dl.mappings if (m.i if right else m.j) == k]
            parts = [self.seq_bound(m.lens, src.sequences[m.i], tgt.sequences[m.j], right)
                     for m in found]
            if len(parts) == 1:
                contribution = parts[0]
            else:
                choice = dnf.choice_entropy(recovered, [m.j if right else m.i for m in found])
                contribution = ln.Interval(0.0, sum(p.hi for p in parts) + choice)
            total = total + contribution.scaled(weight)
        return total


    def seq_bound(self, sl: SeqLens, a: dnf.Sequence, b: dnf.Sequence, right: bool) -> ln.Interval:
        total = ln.ZERO
        for m in sl.mappings:
            total = total + self.atom_bound(m.lens, a.atoms[m.i], b.atoms[m.j], right)
        lost_atoms = b.atoms if right else a.atoms
        for k, _ in (sl.right_unmapped if right else sl.left_unmapped):
            lost = dnf.relevant_atom_entropy(lost_atoms[k], self.env)
            total = total + ln.Interval.point(lost)
        return total

    def atom_bound(self, al: AtomLens, a: dnf.Atom, b: dnf.Atom, right: bool) -> ln.Interval:
        recovered = b if right else a
        if recovered.relevance == dnf.SKIP:
            return ln.ZERO
        inner = self._atom_bound_inner(al, a, b, right)
        if recovered.relevance == dnf.REQUIRE:
            return ln.ZERO if inner.hi == 0 else ln.INFINITE
        return inner

    def _atom_bound_inner(self, al: AtomLens, a: dnf.Atom, b: dnf.Atom, right: bool) -> ln.Interval:
        if isinstance(al, ClosedId):
            return ln.ZERO
        if isinstance(al, ClosedLib):
            s, t = sre.Ref(a.closed_ref), sre.Ref(b.closed_ref)
            if right:
                return self.lenses.h_right(al.lens, s, t)
            return self.lenses.h_left(al.lens, s, t)
        weight = a.p if right else b.p
        return self.bound(al.body, a.body, b.body, right).scaled(weight / (1 - weight))


def dnf_cost(dl: DnfLens, src: dnf.DnfRegex, tgt: dnf.DnfRegex,
             env: rx.DefEnv = rx.EMPTY_ENV, library: Optional[ln.Library] = None) -> float:
    return DnfEvaluator(env, library).dnf_cost(dl, src, tgt)


# ---------------------------------------------------------------------------
# Conversion to surface lenses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceLens:
    """A surface lens together with stochastic types shaped like it"""
    lens: ln.Lens
    src: sre.SRE
    tgt: sre.SRE

    @property
    def types(self) -> Tuple[rx.Regex, rx.Regex]:
        return sre.strip(self.src), sre.strip(self.tgt)


def to_surface(dl: DnfLens, src: dnf.DnfRegex, tgt: dnf.DnfRegex) -> ln.Lens:
    """
    Convert to a composition-free surface lens.

    Raises:
        InexpressibleLens: a group of connected sequences is neither a fan
            nor complete, or atoms are reordered by a permutation that
            nested swaps cannot express
    """
    return to_surface_typed(dl, src, tgt).lens


def to_surface_typed(dl: DnfLens, src: dnf.DnfRegex, tgt: dnf.DnfRegex) -> SurfaceLens:
    """to_surface, also returning SREs whose structure follows the lens"""
    components = _components(dl, len(src.branches), len(tgt.branches))
    built = [_component(dl, src, tgt, comp) for comp in components]
    lens, s, t = built[-1]
    s_mass, t_mass = _mass(src, components[-1][0]), _mass(tgt, components[-1][1])
    for (l1, s1, t1), (lefts, rights) in zip(reversed(built[:-1]), reversed(components[:-1])):
        ps, pt = _mass(src, lefts), _mass(tgt, rights)
        s_mass += ps
        t_mass += pt
        lens = ln.Or(l1, lens)
        s = sre.Or(s1, s, ps / s_mass)
        t = sre.Or(t1, t, pt / t_mass)
    return SurfaceLens(lens, s, t)


def _mass(d: dnf.DnfRegex, indices: Seq[int]) -> Fraction:
    return sum((d.branches[k][1] for k in indices), Fraction(0))


def _components(dl: DnfLens, n_left: int, n_right: int) -> List[Tuple[List[int], List[int]]]:
    """Connected components of the sequence mapping graph, by smallest left index"""
    parent = {("l", k): ("l", k) for k in range(n_left)}
    parent.update({("r", k): ("r", k) for k in range(n_right)})

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in dl.mappings:
        parent[find(("l", m.i))] = find(("r", m.j))
    groups: Dict[Tuple[str, int], Tuple[List[int], List[int]]] = {}
    for side, k in sorted(parent):
        lefts, rights = groups.setdefault(find((side, k)), ([], []))
        (lefts if side == "l" else rights).append(k)
    comps = list(groups.values())
    pairs = {(m.i, m.j) for m in dl.mappings}
    for lefts, rights in comps:
        if not lefts or not rights:
            raise InexpressibleLens("A sequence is not connected to the other side")
        complete = all((i, j) in pairs for i in lefts for j in rights)
        if len(lefts) > 1 and len(rights) > 1 and not complete:
            raise InexpressibleLens(f"Left sequences {lefts} and right sequences {rights} "
                                    "are connected in a pattern merges cannot express")
    return sorted(comps, key=lambda c: c[0][0])


def _component(dl: DnfLens, src: dnf.DnfRegex, tgt: dnf.DnfRegex,
               comp: Tuple[List[int], List[int]]) -> Tuple[ln.Lens, sre.SRE, sre.SRE]:
    lefts, rights = comp
    if len(lefts) == 1 and len(rights) == 1:
        m = dl.find(lefts[0], rights[0])
        return _seq_surface(m.lens, src.sequences[m.i], tgt.sequences[m.j])
    if len(lefts) == 1:
        return _left_fan(dl, src, tgt, lefts[0])
    if len(rights) == 1:
        first = dl.create_l_table[rights[0]]
        order = [first] + [k for k, m in enumerate(dl.mappings)
                           if m.j == rights[0] and k != first]
        parts = [_seq_surface(dl.mappings[k].lens, src.sequences[dl.mappings[k].i],
                              tgt.sequences[dl.mappings[k].j]) for k in order]
        return _fan(parts, [dl.mappings[k].i for k in order], src, ln.MergeRight)
    # complete group: merge_right over one merge_left fan per left sequence
    heads = {dl.mappings[dl.create_l_table[j]].i for j in rights}
    if len(heads) != 1:
        raise InexpressibleLens(f"Right sequences {rights} create from different left sequences")
    head = heads.pop()
    order = [head] + [i for i in lefts if i != head]
    return _fan([_left_fan(dl, src, tgt, i) for i in order], order, src, ln.MergeRight)


def _left_fan(dl: DnfLens, src: dnf.DnfRegex, tgt: dnf.DnfRegex,
              i: int) -> Tuple[ln.Lens, sre.SRE, sre.SRE]:
    """merge_left over the mappings of left sequence i, its create entry first"""
    first = dl.create_r_table[i]
    order = [first] + [k for k, m in enumerate(dl.mappings) if m.i == i and k != first]
    parts = [_seq_surface(dl.mappings[k].lens, src.sequences[dl.mappings[k].i],
                          tgt.sequences[dl.mappings[k].j]) for k in order]
    return _fan(parts, [dl.mappings[k].j for k in order], tgt, ln.MergeLeft)


def _fan(parts: List[Tuple[ln.Lens, sre.SRE, sre.SRE]], fan_index: List[int],
         fan_side: dnf.DnfRegex, merge: type) -> Tuple[ln.Lens, sre.SRE, sre.SRE]:
    lens, s, t = parts[-1]
    fan = t if merge is ln.MergeLeft else s
    mass = fan_side.branches[fan_index[-1]][1]
    for (l1, s1, t1), index in zip(reversed(parts[:-1]), reversed(fan_index[:-1])):
        weight = fan_side.branches[index][1]
        mass += weight
        lens = merge(l1, lens)
        fan = sre.Or(t1 if merge is ln.MergeLeft else s1, fan, weight / mass)
    _, s_first, t_first = parts[0]
    if merge is ln.MergeLeft:
        return lens, s_first, fan
    return lens, fan, t_first


# -- sequences ---------------------------------------------------------------

# a constant string, or the index of an atom in the enclosing sequence
Part = Union[str, int]


def _parts_between(seq: dnf.Sequence, start: int, stop: int) -> List[Part]:
    """Constants and atom indices from after atom start-1 up to before atom stop"""
    parts: List[Part] = [seq.strings[start]]
    for k in range(start, stop):
        parts.append(k)
        parts.append(seq.strings[k + 1])
    return parts


def _gap(left: List[Part], right: List[Part], left_defaults: Dict[int, str],
         right_defaults: Dict[int, str], left_seq: dnf.Sequence,
         right_seq: dnf.Sequence) -> Tuple[ln.Lens, sre.SRE, sre.SRE]:
    s = _parts_sre(left, left_seq)
    t = _parts_sre(right, right_seq)
    if all(isinstance(p, str) for p in left + right):
        text_left, text_right = "".join(left), "".join(right)
        if text_left == text_right:
            return ln.Identity(rx.Const(text_left)), s, t
        return ln.Disconnect(rx.Const(text_left), rx.Const(text_right), text_left, text_right), s, t
    return (ln.Disconnect(sre.strip(s), sre.strip(t),
                          _default(left, left_defaults), _default(right, right_defaults)), s, t)


def _parts_sre(parts: List[Part], seq: dnf.Sequence) -> sre.SRE:
    nodes = [sre.Const(p) if isinstance(p, str) else dnf.atom_sre(seq.atoms[p])
             for p in parts if p != ""]
    if not nodes:
        return sre.Const("")
    if all(isinstance(n, sre.Const) for n in nodes):
        return sre.Const("".join(n.text for n in nodes))
    result = nodes[-1]
    for node in reversed(nodes[:-1]):
        result = sre.Concat(node, result)
    return result


def _default(parts: List[Part], defaults: Dict[int, str]) -> str:
    return "".join(p if isinstance(p, str) else defaults[p] for p in parts)


def _seq_surface(sl: SeqLens, a: dnf.Sequence, b: dnf.Sequence) -> Tuple[ln.Lens, sre.SRE, sre.SRE]:
    left_defaults = dict(sl.left_unmapped)
    right_defaults = dict(sl.right_unmapped)
    mapped = sorted(sl.mappings, key=lambda m: m.i)
    left_mapped = [m.i for m in mapped]
    right_mapped = sorted(m.j for m in mapped)
    rank = {j: r for r, j in enumerate(right_mapped)}

    def left_gap(k: int) -> List[Part]:
        start = 0 if k < 0 else left_mapped[k] + 1
        stop = left_mapped[k + 1] if k + 1 < len(left_mapped) else len(a.atoms)
        return _parts_between(a, start, stop)

    def right_gap(r: int) -> List[Part]:
        start = 0 if r < 0 else right_mapped[r] + 1
        stop = right_mapped[r + 1] if r + 1 < len(right_mapped) else len(b.atoms)
        return _parts_between(b, start, stop)

    def gap(lp: List[Part], rp: List[Part]) -> Tuple[ln.Lens, sre.SRE, sre.SRE]:
        return _gap(lp, rp, left_defaults, right_defaults, a, b)

    head = gap(left_gap(-1), right_gap(-1))
    if not mapped:
        return head
    units = []
    for k, m in enumerate(mapped):
        atom = _atom_surface(m.lens, a.atoms[m.i], b.atoms[m.j])
        tail = gap(left_gap(k), right_gap(rank[m.j]))
        units.append((rank[m.j], _join(atom, tail)))
    body = _arrange(units)
    return _join(head, body)


def _is_empty_identity(part: Tuple[ln.Lens, sre.SRE, sre.SRE]) -> bool:
    return part[0] == ln.Identity(rx.Const(""))


def _join(first, second) -> Tuple[ln.Lens, sre.SRE, sre.SRE]:
    if _is_empty_identity(first):
        return second
    if _is_empty_identity(second):
        return first
    return (ln.Concat(first[0], second[0]), sre.Concat(first[1], second[1]),
            sre.Concat(first[2], second[2]))


def _arrange(units: List[Tuple[int, Tuple[ln.Lens, sre.SRE, sre.SRE]]]):
    """Nest Concat/Swap so the right side reads the units in rank order"""
    if len(units) == 1:
        return units[0][1]
    for x in range(1, len(units)):
        head, tail = units[:x], units[x:]
        if max(r for r, _ in head) < min(r for r, _ in tail):
            return _join(_arrange(head), _arrange(tail))
        if min(r for r, _ in head) > max(r for r, _ in tail):
            (l1, s1, t1), (l2, s2, t2) = _arrange(head), _arrange(tail)
            return ln.Swap(l1, l2), sre.Concat(s1, s2), sre.Concat(t2, t1)
    raise InexpressibleLens("Atom reordering is not a separable permutation")


def _atom_surface(al: AtomLens, a: dnf.Atom, b: dnf.Atom) -> Tuple[ln.Lens, sre.SRE, sre.SRE]:
    if isinstance(al, IterateDnf):
        inner = to_surface_typed(al.body, a.body, b.body)
        s = _relevance(sre.Star(inner.src, a.p), a)
        t = _relevance(sre.Star(inner.tgt, b.p), b)
        return ln.Iterate(inner.lens), s, t
    s = _relevance(sre.Ref(a.closed_ref), a)
    t = _relevance(sre.Ref(b.closed_ref), b)
    if isinstance(al, ClosedId):
        return ln.Identity(rx.Ref(al.name)), s, t
    return ln.LibRef(al.name), s, t


def _relevance(s: sre.SRE, atom: dnf.Atom) -> sre.SRE:
    if atom.relevance == dnf.SKIP:
        return sre.Skip(s)
    if atom.relevance == dnf.REQUIRE:
        return sre.Require(s)
    return s


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

def show_atom_lens(al: AtomLens) -> str:
    if isinstance(al, ClosedId):
        return f"id({al.name})"
    if isinstance(al, ClosedLib):
        return al.name
    return f"iterate({show(al.body)})"


def show_seq_lens(sl: SeqLens) -> str:
    pieces = [f"{m.i}->{m.j}: {show_atom_lens(m.lens)}" for m in sl.mappings]
    pieces += [f"{k}-> {rx.quote(d)}" for k, d in sl.left_unmapped]
    pieces += [f"{rx.quote(d)} ->{k}" for k, d in sl.right_unmapped]
    return "{" + ", ".join(pieces) + "}"


def show(dl: DnfLens) -> str:
    body = "; ".join(f"{m.i}=>{m.j} {show_seq_lens(m.lens)}" for m in dl.mappings)
    return f"[{body} | c={list(dl.create_r_table)} d={list(dl.create_l_table)}]"
