"""
Lens Synthesis

Searches for the most likely lens between two stochastic regular expressions.
The outer loop explores rewrite-equivalent pairs of expressions in order of
how many star unrollings (or openings of closed names) produced them; for
each pair, greedy builders assemble a DNF lens sequence by sequence and atom
by atom, preferring connections that lower the lens cost.
"""

import heapq
import math
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from src import dnf
from src import dnflens as dl
from src import lens as ln
from src import regex as rx
from src import sre
from src.config import SynthLimits
from src.errors import (ExampleNotInLanguage, InexpressibleLens, LawViolation,
                        MissingCostAnnotation, NoLens, TimeoutWithBest)
from src.logger import get_logger

logger = get_logger(__name__)

Example = Tuple[str, str]

INFORMATION = "information"
FIRST_LENS = "first_lens"
DISCONNECT_COUNT = "disconnect_count"
COST_MODES = (INFORMATION, FIRST_LENS, DISCONNECT_COUNT)

# Costs closer than this are treated as equal
EPSILON = 1e-9

# Sampled pairs on which a finished lens is checked
SPOT_CHECKS = 8


@dataclass(frozen=True)
class SynthTask:
    """Everything a synthesis run needs"""
    src: sre.SRE
    tgt: sre.SRE
    examples: Tuple[Example, ...] = ()
    library: ln.Library = field(default_factory=ln.Library)
    limits: SynthLimits = field(default_factory=SynthLimits)
    env: rx.DefEnv = rx.EMPTY_ENV
    cost_mode: str = INFORMATION


@dataclass(frozen=True)
class SynthResult:
    """The chosen lens, its cost and where the search found it"""
    lens: ln.Lens
    cost: float
    distance: int
    expansions: int
    dnf_lens: dl.DnfLens
    src: dnf.DnfRegex
    tgt: dnf.DnfRegex


# ---------------------------------------------------------------------------
# Frontier
# ---------------------------------------------------------------------------

class Frontier:
    """
    Pairs of expressions ordered by rewrite distance, FIFO within a distance.

    Pairs are deduplicated by the canonical DNF forms of both sides, so a pair
    reachable along several rewrite paths is processed once.
    """

    def __init__(self, canon):
        self._heap: List[Tuple[int, int, sre.SRE, sre.SRE]] = []
        self._seen: Set[Tuple] = set()
        self._counts: Counter = Counter()
        self._order = 0
        self._canon = canon

    def __len__(self) -> int:
        return len(self._heap)

    def push(self, s: sre.SRE, t: sre.SRE, distance: int) -> bool:
        key = (self._canon(s).key, self._canon(t).key)
        if key in self._seen:
            return False
        self._seen.add(key)
        heapq.heappush(self._heap, (distance, self._order, s, t))
        self._order += 1
        self._counts[distance] += 1
        return True

    def pop(self) -> Tuple[sre.SRE, sre.SRE, int]:
        distance, _, s, t = heapq.heappop(self._heap)
        self._counts[distance] -= 1
        return s, t, distance

    def next_distance(self) -> Optional[int]:
        return self._heap[0][0] if self._heap else None

    def count_at(self, distance: int) -> int:
        return self._counts[distance]


def continue_heuristic(frontier: Frontier, best_cost: Optional[float]) -> bool:
    """
    Whether the search should keep popping.

    Stops on an empty frontier or a zero-cost best. Otherwise continues while
    the best cost is below d + log2(n), where d is the next distance and n the
    number of pairs waiting at it.
    """
    d = frontier.next_distance()
    if d is None:
        return False
    if best_cost is None:
        return True
    if best_cost <= 0:
        return False
    return best_cost < d + math.log2(max(frontier.count_at(d), 1))


# ---------------------------------------------------------------------------
# Expansion
# ---------------------------------------------------------------------------

def expand(s: sre.SRE, t: sre.SRE, env: rx.DefEnv = rx.EMPTY_ENV) -> List[Tuple[sre.SRE, sre.SRE]]:
    """All pairs one unroll (or one opening) away, left side first"""
    pairs = [(s2, t) for s2 in sre.unroll_neighbors(s, env)]
    pairs += [(s, t2) for t2 in sre.unroll_neighbors(t, env)]
    return [apply_inferred(a, b, env) for a, b in pairs]


def _closure(names: List[str], env: rx.DefEnv) -> Set[str]:
    found: Set[str] = set()
    for name in names:
        if name in env and name not in found:
            found.add(name)
            found |= env.reachable(name)
    return found


def infer_expansions(s: sre.SRE, t: sre.SRE, env: rx.DefEnv = rx.EMPTY_ENV) -> List[Tuple[str, str]]:
    """
    Closed names worth opening, as (side, name) pairs.

    A closed name that occurs on one side only can only be disconnected as a
    whole. It is opened when its definition reaches a name that the other
    side reaches too, since connections may exist inside it.
    """
    left = [n for n in dict.fromkeys(sre.ref_names(s)) if n in env and env.is_closed(n)]
    right = [n for n in dict.fromkeys(sre.ref_names(t)) if n in env and env.is_closed(n)]
    left_reach, right_reach = _closure(left, env), _closure(right, env)
    forced = []
    for name in left:
        if name not in right and _closure([name], env) & right_reach:
            forced.append(("left", name))
    for name in right:
        if name not in left and _closure([name], env) & left_reach:
            forced.append(("right", name))
    return forced


def apply_inferred(s: sre.SRE, t: sre.SRE, env: rx.DefEnv) -> Tuple[sre.SRE, sre.SRE]:
    """Open inferred names until none remain"""
    while True:
        forced = infer_expansions(s, t, env)
        if not forced:
            return s, t
        for side, name in forced:
            if side == "left":
                s = sre.open_ref(s, name, env)
            else:
                t = sre.open_ref(t, name, env)


# ---------------------------------------------------------------------------
# Examples
# ---------------------------------------------------------------------------

def distribute_examples(examples: List[Example], ds: dnf.DnfRegex, dt: dnf.DnfRegex,
                        env: rx.DefEnv = rx.EMPTY_ENV) -> Dict[Tuple[int, int], List[Example]]:
    """Group examples by the (left branch, right branch) pair they land in"""
    groups: Dict[Tuple[int, int], List[Example]] = {}
    for left, right in examples:
        key = (dnf.branch_of(ds, left, env), dnf.branch_of(dt, right, env))
        groups.setdefault(key, []).append((left, right))
    return groups


def atom_examples(examples: List[Example], sq: dnf.Sequence, tq: dnf.Sequence,
                  env: rx.DefEnv = rx.EMPTY_ENV) -> List[Tuple[Tuple[dnf.AtomMatch, ...],
                                                               Tuple[dnf.AtomMatch, ...]]]:
    """Split each example along both sequences"""
    return [(dnf.parse_sequence(sq, left, env), dnf.parse_sequence(tq, right, env))
            for left, right in examples]


def zip_iterations(s: dnf.AtomMatch, t: dnf.AtomMatch) -> List[Example]:
    """Pair iterations positionally; surplus iterations on either side stay unpaired"""
    return list(zip(s.iterations, t.iterations))


def cannot_map(examples: List[Example], left: dnf.Sequence, right: dnf.Sequence,
               env: rx.DefEnv = rx.EMPTY_ENV) -> bool:
    """
    A quick, conservative test that no sequence lens exists.

    True when an example does not parse on its side, or when a required atom
    with positive entropy faces a side with no atoms at all.
    """
    for s, t in examples:
        if not rx.language_member(dnf.sequence_regex(left), s, env):
            return True
        if not rx.language_member(dnf.sequence_regex(right), t, env):
            return True
    for mine, other in ((left, right), (right, left)):
        if other.atoms:
            continue
        for atom in mine.atoms:
            if atom.relevance == dnf.REQUIRE and dnf.relevant_atom_entropy(atom, env) > 0:
                return True
    return False


# ---------------------------------------------------------------------------
# Library
# ---------------------------------------------------------------------------

def register_library(library: ln.Library, name: str, lens: ln.Lens, src: sre.SRE, tgt: sre.SRE,
                     env: rx.DefEnv = rx.EMPTY_ENV, cost: Optional[float] = None,
                     bijective: bool = False) -> ln.Library:
    """
    Add a checked lens to the library with its recorded cost.

    Args:
        library: Library to extend
        name: Name later lenses refer to
        lens: The lens
        src: Declared source type
        tgt: Declared target type
        env: Definitions
        cost: User-annotated cost, if any
        bijective: Annotation meaning cost 0

    Returns:
        The extended library

    Raises:
        MissingCostAnnotation: the lens uses composition and has no annotation
    """
    composed = ln.has_compose(lens, library)
    if bijective and cost is None:
        cost = 0.0
    if cost is None:
        if composed:
            raise MissingCostAnnotation(name)
        evaluator = ln.LensEvaluator(env, library)
        cost = evaluator.cost(lens, sre.complete_probabilities(src), sre.complete_probabilities(tgt))
    entry = ln.LibraryEntry(name, lens, sre.strip(src), sre.strip(tgt), cost, composed)
    logger.debug(f"Registered lens {name} with cost {cost:.4f}")
    return library.add(entry)


# ---------------------------------------------------------------------------
# Greedy builders
# ---------------------------------------------------------------------------

class Synthesizer:
    """
    Greedy DNF lens construction for one environment and library.

    Results of atom_synth and greedy_synth are memoized on the DNF structure
    and the examples, so identical sub-problems met under different rewrites
    are solved once.
    """

    def __init__(self, env: rx.DefEnv = rx.EMPTY_ENV, library: Optional[ln.Library] = None):
        self.env = env
        self.library = library if library is not None else ln.EMPTY_LIBRARY
        self.evaluator = dl.DnfEvaluator(env, self.library)
        self._dnf_memo: Dict[sre.SRE, dnf.DnfRegex] = {}
        self._greedy_memo: Dict[Tuple, Optional[dl.DnfLens]] = {}
        self._atom_memo: Dict[Tuple, Optional[dl.AtomLens]] = {}

    def canonical(self, s: sre.SRE) -> dnf.DnfRegex:
        """The DNF of s, memoized"""
        found = self._dnf_memo.get(s)
        if found is None:
            found = dnf.to_dnf(s, self.env)
            self._dnf_memo[s] = found
        return found

    # -- DNF level ----------------------------------------------------------

    def greedy_synth(self, examples: List[Example], ds: dnf.DnfRegex,
                     dt: dnf.DnfRegex) -> Optional[dl.DnfLens]:
        """
        Build a DNF lens covering every sequence on both sides.

        Candidates between all sequence pairs are popped cheapest first. A
        candidate is accepted when it covers a new sequence or an example
        lands in its pair. One whose source or target is already covered is
        pushed back with a one-bit penalty per accepted mapping it shares a
        sequence with. A group left with crossing mappings is completed with
        every missing pair so that it converts to nested merges.
        """
        key = (ds.key, dt.key, tuple(examples))
        if key not in self._greedy_memo:
            self._greedy_memo[key] = self._greedy_synth(list(examples), ds, dt)
        return self._greedy_memo[key]

    def _greedy_synth(self, examples: List[Example], ds: dnf.DnfRegex,
                      dt: dnf.DnfRegex) -> Optional[dl.DnfLens]:
        if not ds.branches or not dt.branches:
            return None
        groups = distribute_examples(examples, ds, dt, self.env)
        heap = []
        candidates: Dict[Tuple[int, int], Tuple[float, dl.SeqLens]] = {}
        for i, (sq, p) in enumerate(ds.branches):
            for j, (tq, q) in enumerate(dt.branches):
                exs = groups.get((i, j), [])
                sl = self.greedy_seq_synth(exs, sq, tq)
                if sl is None:
                    if exs:
                        return None
                    continue
                right = self.evaluator.seq_bound(sl, sq, tq, right=True).hi
                left = self.evaluator.seq_bound(sl, sq, tq, right=False).hi
                cost = float(p) * right + float(q) * left
                if math.isinf(cost):
                    if exs:
                        return None
                    continue
                candidates[(i, j)] = (cost, sl)
                baseline = (float(p) * self._sequence_loss(tq)
                            + float(q) * self._sequence_loss(sq))
                heap.append((_saving(cost, baseline), i, j, 0, cost, sl))
        heapq.heapify(heap)

        accepted: List[Tuple[int, int, dl.SeqLens, float]] = []
        left_covered: Set[int] = set()
        right_covered: Set[int] = set()
        while heap:
            priority, i, j, applied, cost, sl = heapq.heappop(heap)
            obligated = (i, j) in groups
            if not (obligated or i not in left_covered or j not in right_covered):
                continue
            pairs = [(a, b) for a, b, _, _ in accepted]
            penalty = 0 if obligated else sharing_penalty(pairs, i, j)
            if penalty > applied:
                heapq.heappush(heap, (priority + penalty - applied, i, j, penalty, cost, sl))
                continue
            if not obligated and not _keeps_fans(accepted, i, j):
                continue
            accepted.append((i, j, sl, cost))
            left_covered.add(i)
            right_covered.add(j)

        if len(left_covered) != len(ds.branches) or len(right_covered) != len(dt.branches):
            return None
        heads = _complete_groups(accepted, candidates)
        if heads is None:
            return None
        mappings = tuple(dl.SeqMapping(i, j, sl) for i, j, sl, _ in accepted)
        index = {(i, j): k for k, (i, j, _, _) in enumerate(accepted)}
        c = tuple(_cheapest(accepted, k, side=0) for k in range(len(ds.branches)))
        d = tuple(index[(heads[k], k)] if k in heads else _cheapest(accepted, k, side=1)
                  for k in range(len(dt.branches)))
        return dl.DnfLens(mappings, c, d)

    # -- sequence level -----------------------------------------------------

    def greedy_seq_synth(self, examples: List[Example], sq: dnf.Sequence,
                         tq: dnf.Sequence) -> Optional[dl.SeqLens]:
        """
        Choose atom lenses that lower the cost of a sequence lens.

        Disconnecting an atom costs its entropy (zero when skipped, infinite
        when required and informative). A candidate connection is accepted
        when it lowers the total; accepting may evict earlier choices that
        share one of its atoms.
        """
        if cannot_map(examples, sq, tq, self.env):
            return None
        splits = atom_examples(examples, sq, tq, self.env)
        lost_left = [dnf.relevant_atom_entropy(a, self.env) for a in sq.atoms]
        lost_right = [dnf.relevant_atom_entropy(b, self.env) for b in tq.atoms]

        heap = []
        for i, a in enumerate(sq.atoms):
            for j, b in enumerate(tq.atoms):
                exs = tuple((sm[i], tm[j]) for sm, tm in splits)
                al = self.atom_synth(exs, a, b)
                if al is None:
                    continue
                cost = (self.evaluator.atom_bound(al, a, b, right=True).hi
                        + self.evaluator.atom_bound(al, a, b, right=False).hi)
                if not math.isinf(cost):
                    heap.append((_saving(cost, lost_left[i] + lost_right[j]), i, j, cost, al))
        heapq.heapify(heap)

        chosen: Dict[int, Tuple[int, dl.AtomLens, float]] = {}

        def total(selection: Dict[int, Tuple[int, dl.AtomLens, float]]) -> float:
            used = {j for j, _, _ in selection.values()}
            value = sum(c for _, _, c in selection.values())
            value += sum(h for i, h in enumerate(lost_left) if i not in selection)
            value += sum(h for j, h in enumerate(lost_right) if j not in used)
            return value

        while heap:
            _, i, j, cost, al = heapq.heappop(heap)
            candidate = {k: v for k, v in chosen.items() if k != i and v[0] != j}
            candidate[i] = (j, al, cost)
            before, after = total(chosen), total(candidate)
            if after < before - EPSILON or (math.isinf(before) and not math.isinf(after)):
                chosen = candidate

        if math.isinf(total(chosen)):
            return None
        used = {j for j, _, _ in chosen.values()}
        mappings = tuple(dl.AtomMapping(i, j, al) for i, (j, al, _) in sorted(chosen.items()))
        left_unmapped = tuple((i, self._default(a, [sm[i].text for sm, _ in splits]))
                              for i, a in enumerate(sq.atoms) if i not in chosen)
        right_unmapped = tuple((j, self._default(b, [tm[j].text for _, tm in splits]))
                               for j, b in enumerate(tq.atoms) if j not in used)
        return dl.SeqLens(mappings, left_unmapped, right_unmapped)

    def _sequence_loss(self, seq: dnf.Sequence) -> float:
        """Bits lost when every atom of seq is disconnected"""
        return sum((dnf.relevant_atom_entropy(a, self.env) for a in seq.atoms), 0.0)

    def _default(self, atom: dnf.Atom, seen: List[str]) -> str:
        """The first example substring for atom, else its shortest member"""
        if seen:
            return seen[0]
        return rx.shortest_member(sre.strip(dnf.atom_sre(atom)), self.env)

    # -- atom level ---------------------------------------------------------

    def atom_synth(self, examples: Tuple[Tuple[dnf.AtomMatch, dnf.AtomMatch], ...],
                   a: dnf.Atom, b: dnf.Atom) -> Optional[dl.AtomLens]:
        """Connect two atoms consistently with their examples, or give None"""
        key = (a.key, b.key, examples)
        if key not in self._atom_memo:
            self._atom_memo[key] = self._atom_synth(examples, a, b)
        return self._atom_memo[key]

    def _atom_synth(self, examples, a: dnf.Atom, b: dnf.Atom) -> Optional[dl.AtomLens]:
        if a.is_closed and b.is_closed:
            if a.closed_ref == b.closed_ref and all(s.text == t.text for s, t in examples):
                return dl.ClosedId(a.closed_ref)
            return self._library_atom(examples, a, b)
        if a.is_closed or b.is_closed:
            return None
        if any(len(s.iterations) != len(t.iterations) for s, t in examples):
            return None
        body_examples = [pair for s, t in examples for pair in zip_iterations(s, t)]
        body = self.greedy_synth(body_examples, a.body, b.body)
        return None if body is None else dl.IterateDnf(body)

    def _library_atom(self, examples, a: dnf.Atom, b: dnf.Atom) -> Optional[dl.AtomLens]:
        want_src, want_tgt = rx.Ref(a.closed_ref), rx.Ref(b.closed_ref)
        found = None
        for entry in self.library:
            if entry.src != want_src or entry.tgt != want_tgt:
                continue
            lens = ln.LibRef(entry.name)
            if not all(ln.check_synchronized(self.evaluator.lenses, lens, s.text, t.text)
                       for s, t in examples):
                continue
            if found is None or (entry.cost or 0.0) < (found[0] or 0.0):
                found = (entry.cost, dl.ClosedLib(entry.name, lens))
        return None if found is None else found[1]


def _saving(cost: float, baseline: float) -> float:
    """Priority of a candidate: its cost minus the cost of disconnecting instead"""
    if math.isinf(baseline):
        return -math.inf
    return cost - baseline


def sharing_penalty(pairs: List[Tuple[int, int]], i: int, j: int) -> int:
    """Number of accepted mappings that share the source i or the target j"""
    return sum(1 for a, b in pairs if a == i or b == j)


def _group_of(edges: List[Tuple[int, int]], i: int, j: int) -> Tuple[Set[int], Set[int]]:
    """Left and right sequences connected to the mapping (i, j)"""
    lefts, rights = {i}, {j}
    changed = True
    while changed:
        changed = False
        for a, b in edges:
            if (a in lefts) != (b in rights):
                lefts.add(a)
                rights.add(b)
                changed = True
    return lefts, rights


def _keeps_fans(accepted: List[Tuple[int, int, dl.SeqLens, float]], i: int, j: int) -> bool:
    """Whether adding (i, j) keeps every connected group one-to-many or many-to-one"""
    lefts, rights = _group_of([(a, b) for a, b, _, _ in accepted] + [(i, j)], i, j)
    return len(lefts) == 1 or len(rights) == 1


def _complete_groups(accepted: List[Tuple[int, int, dl.SeqLens, float]],
                     candidates: Dict[Tuple[int, int], Tuple[float, dl.SeqLens]]
                     ) -> Optional[Dict[int, int]]:
    """
    Add the missing pairs of every group that is not a fan.

    Returns the left sequence each right sequence of such a group creates
    from, or None when a missing pair has no candidate.
    """
    heads: Dict[int, int] = {}
    done: Set[int] = set()
    for i, j, _, _ in list(accepted):
        if j in done:
            continue
        edges = [(a, b) for a, b, _, _ in accepted]
        lefts, rights = _group_of(edges, i, j)
        done |= rights
        if len(lefts) == 1 or len(rights) == 1:
            continue
        present = set(edges)
        for a in sorted(lefts):
            for b in sorted(rights):
                if (a, b) in present:
                    continue
                if (a, b) not in candidates:
                    return None
                cost, sl = candidates[(a, b)]
                accepted.append((a, b, sl, cost))
        head = accepted[_cheapest(accepted, min(rights), side=1)][0]
        heads.update({b: head for b in rights})
    return heads


def _cheapest(accepted: List[Tuple[int, int, dl.SeqLens, float]], k: int, side: int) -> int:
    best = None
    for index, entry in enumerate(accepted):
        if entry[side] == k and (best is None or entry[3] < accepted[best][3]):
            best = index
    return best if best is not None else 0


# ---------------------------------------------------------------------------
# Outer loop
# ---------------------------------------------------------------------------

def _check_examples(task: SynthTask) -> None:
    src, tgt = sre.strip(task.src), sre.strip(task.tgt)
    for left, right in task.examples:
        if not rx.language_member(src, left, task.env):
            raise ExampleNotInLanguage("left", left)
        if not rx.language_member(tgt, right, task.env):
            raise ExampleNotInLanguage("right", right)


def _prepare(s: sre.SRE) -> sre.SRE:
    return sre.complete_probabilities(sre.normalize_relevance(sre.normalize_empty(s)))


def initial_pair(task: SynthTask) -> Tuple[sre.SRE, sre.SRE]:
    """The distance-0 pair: both sides normalized, inferred names opened"""
    return apply_inferred(_prepare(task.src), _prepare(task.tgt), task.env)


def synth(task: SynthTask) -> SynthResult:
    """
    Find the cheapest lens between the task's two expressions.

    Args:
        task: Expressions, examples, library, limits and cost mode

    Returns:
        The best lens found, converted to surface syntax

    Raises:
        ExampleNotInLanguage: an example is outside its side's language
        NoLens: the search ended without a lens satisfying the examples
        TimeoutWithBest: the wall clock ran out; carries the best result so far
    """
    _check_examples(task)
    limits = task.limits
    worker = Synthesizer(task.env, task.library)
    src, tgt = initial_pair(task)

    frontier = Frontier(worker.canonical)
    frontier.push(src, tgt, 0)
    best: Optional[SynthResult] = None
    expansions = 0
    started = time.monotonic()
    logger.info(f"Synthesizing {sre.show(task.src)} <=> {sre.show(task.tgt)} "
                f"with {len(task.examples)} example(s)")

    while continue_heuristic(frontier, None if best is None else best.cost):
        if expansions >= limits.max_expansions:
            logger.info(f"Stopping after {expansions} expansions")
            break
        if time.monotonic() - started >= limits.timeout:
            if best is None:
                raise NoLens(f"No lens found within {limits.timeout} seconds")
            raise TimeoutWithBest(best)

        d = frontier.next_distance()
        logger.debug(f"distance={d} queued={frontier.count_at(d)} "
                     f"best={'none' if best is None else f'{best.cost:.4f}'}")
        s, t, distance = frontier.pop()
        expansions += 1

        found = candidate(worker, task, s, t, distance, expansions)
        if found is not None and (best is None or found.cost < best.cost - EPSILON):
            best = found
            logger.debug(f"New best at distance {distance}: cost {best.cost:.4f}")

        for s2, t2 in expand(s, t, task.env):
            frontier.push(s2, t2, distance + 1)

    if best is None:
        raise NoLens()
    spot_check(best.lens, task)
    logger.info(f"Found lens with cost {best.cost:.4f} at distance {best.distance}")
    return best


def candidate(worker: Synthesizer, task: SynthTask, s: sre.SRE, t: sre.SRE,
              distance: int, expansions: int) -> Optional[SynthResult]:
    """The greedy lens for one expression pair, costed under the task's mode"""
    ds, dt = worker.canonical(s), worker.canonical(t)
    found = worker.greedy_synth(list(task.examples), ds, dt)
    if found is None:
        return None
    try:
        surface = dl.to_surface(found, ds, dt)
    except InexpressibleLens as e:
        logger.debug(f"Skipping candidate: {e}")
        return None
    if task.cost_mode == FIRST_LENS:
        cost = 0.0
    elif task.cost_mode == DISCONNECT_COUNT:
        cost = float(dl.disconnect_count(found, ds, dt))
    else:
        cost = worker.evaluator.dnf_cost(found, ds, dt)
        if math.isinf(cost):
            logger.debug("Skipping candidate that loses required information")
            return None
    return SynthResult(surface, cost, distance, expansions, found, ds, dt)


def spot_check(lens: ln.Lens, task: SynthTask) -> None:
    """
    Check the round-trip laws on strings sampled from both sides.

    Draws are seeded from the task's limits.

    Raises:
        LawViolation: a sampled string breaks one of the laws
    """
    ev = ln.LensEvaluator(task.env, task.library)
    rng = random.Random(task.limits.seed)
    src, tgt = _prepare(task.src), _prepare(task.tgt)
    for _ in range(SPOT_CHECKS):
        s = sre.sample(src, task.env, seed=rng)
        t = sre.sample(tgt, task.env, seed=rng)
        if ev.put_l(lens, ev.create_r(lens, s), s) != s:
            raise LawViolation("put_l(create_r(s), s) = s", s)
        if ev.put_r(lens, ev.create_l(lens, t), t) != t:
            raise LawViolation("put_r(create_l(t), t) = t", t)
        if ev.put_l(lens, ev.put_r(lens, s, t), s) != s:
            raise LawViolation("put_l(put_r(s, t), s) = s", s)
        if ev.put_r(lens, ev.put_l(lens, t, s), t) != t:
            raise LawViolation("put_r(put_l(t, s), t) = t", t)
    logger.debug(f"Round-trip laws hold on {SPOT_CHECKS} sampled pairs (seed {task.limits.seed})")
