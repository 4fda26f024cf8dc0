"""
Tests for lens synthesis
"""

import pytest
from src import dnf
from src import lens as ln
from src import regex as rx
from src import sre
from src import synth as sy
from src.config import SynthLimits
from src.errors import ExampleNotInLanguage, LawViolation, MissingCostAnnotation, NoLens
from src.syntax import parse_lens, parse_sre
from tests.conftest import EMPLOYEE_LEFT, EMPLOYEE_RIGHT

NAME_ENTROPY = 3.609640 + 4 * 1.0
NAMES_ENTROPY = 3.609640 + 4 * NAME_ENTROPY


@pytest.fixture
def name_env():
    """name = "x" ("a" | "b")*, closed"""
    return rx.EMPTY_ENV.define("name", parse_sre('"x" ("a" | "b")*'))


def task(src, tgt, **kwargs):
    return sy.SynthTask(parse_sre(src), parse_sre(tgt), **kwargs)


class TestFrontier:
    """Test suite for the search frontier and the continue heuristic"""

    def test_duplicates_are_dropped(self):
        """Test that pairs with the same canonical form are queued once"""
        frontier = sy.Frontier(sy.Synthesizer().canonical)
        a = sre.complete_probabilities(parse_sre('"a" | "b"'))
        b = sre.complete_probabilities(parse_sre('"b" | "a"'))

        assert frontier.push(a, a, 0)
        assert not frontier.push(b, b, 1)
        assert len(frontier) == 1

    def test_pops_by_distance(self):
        """Test that smaller distances come out first"""
        frontier = sy.Frontier(sy.Synthesizer().canonical)
        far = sre.complete_probabilities(parse_sre('"far"'))
        near = sre.complete_probabilities(parse_sre('"near"'))
        frontier.push(far, far, 2)
        frontier.push(near, near, 1)

        assert frontier.pop()[2] == 1
        assert frontier.next_distance() == 2
        assert frontier.count_at(2) == 1

    def test_continue_heuristic(self):
        """Test the stopping rule against distance and queue size"""
        frontier = sy.Frontier(sy.Synthesizer().canonical)
        assert not sy.continue_heuristic(frontier, None)

        for letter in "abcdefgh":
            s = sre.complete_probabilities(parse_sre(f'"{letter}"'))
            frontier.push(s, s, 3)

        assert frontier.count_at(3) == 8
        assert sy.continue_heuristic(frontier, None)
        assert sy.continue_heuristic(frontier, 5.0)
        assert not sy.continue_heuristic(frontier, 7.0)
        assert not sy.continue_heuristic(frontier, 0.0)


class TestExpansion:
    """Test suite for unrolling and inferred openings"""

    def test_expand_unrolls_each_side(self):
        """Test that a star yields a left and a right unrolling"""
        s = sre.complete_probabilities(parse_sre('"a"*'))
        t = sre.complete_probabilities(parse_sre('"b"'))
        pairs = sy.expand(s, t)

        assert len(pairs) == 2
        assert all(right == t for _, right in pairs)

    def test_infer_opens_names_sharing_structure(self):
        """Test that different closed names reaching a common name are opened"""
        env = rx.EMPTY_ENV.define("d", parse_sre('"0" | "1"'))
        env = env.define("n", parse_sre("d d*")).define("m", parse_sre('d ";" d'))

        assert sy.infer_expansions(sre.Ref("n"), sre.Ref("m"), env) == [("left", "n"), ("right", "m")]
        assert sy.infer_expansions(sre.Ref("n"), sre.Ref("n"), env) == []

    def test_apply_inferred_reaches_fixpoint(self):
        """Test that opening continues until both sides share their closed names"""
        env = rx.EMPTY_ENV.define("d", parse_sre('"0" | "1"'))
        env = env.define("n", parse_sre("d d*")).define("m", parse_sre('d ";" d'))
        s, t = sy.apply_inferred(sre.Ref("n"), sre.Ref("m"), env)

        assert sre.ref_names(s) and set(sre.ref_names(s)) == {"d"}
        assert set(sre.ref_names(t)) == {"d"}


class TestGreedy:
    """Test suite for the greedy builders"""

    def test_dropped_star_cost(self, name_env):
        """Test the lens collapsing name name* to name at distance zero"""
        worker = sy.Synthesizer(name_env)
        ds = worker.canonical(sre.complete_probabilities(parse_sre('"" | name name*')))
        dt = worker.canonical(sre.complete_probabilities(parse_sre('"" | name')))
        found = worker.greedy_synth([], ds, dt)

        assert found is not None
        assert len(found.mappings) == 2
        assert worker.evaluator.dnf_cost(found, ds, dt) == pytest.approx(NAMES_ENTROPY / 2, abs=1e-4)

    def test_example_in_unmappable_pair(self):
        """Test that an example between sequences with no lens fails the search"""
        worker = sy.Synthesizer()
        ds = worker.canonical(sre.complete_probabilities(parse_sre('require("a"*)')))
        dt = worker.canonical(sre.complete_probabilities(parse_sre('"c"')))

        assert worker.greedy_synth([("aa", "c")], ds, dt) is None

    def test_cannot_map_required_information(self):
        """Test the quick check for informative required atoms with no partner"""
        left = dnf.to_dnf(sre.complete_probabilities(parse_sre('require("a"*)'))).sequences[0]
        right = dnf.to_dnf(sre.complete_probabilities(parse_sre('"b"'))).sequences[0]

        assert sy.cannot_map([], left, right)
        assert sy.cannot_map([("c", "b")], right, right)

    def test_unmapped_defaults(self):
        """Test that defaults come from the first example, else the shortest member"""
        env = rx.EMPTY_ENV.define("w", parse_sre('"bb" | "a"'))
        worker = sy.Synthesizer(env)
        sq = worker.canonical(sre.complete_probabilities(parse_sre('"x"'))).sequences[0]
        tq = worker.canonical(sre.complete_probabilities(parse_sre('"x" w'))).sequences[0]

        assert worker.greedy_seq_synth([], sq, tq).right_unmapped == ((0, "a"),)
        assert worker.greedy_seq_synth([("x", "xbb")], sq, tq).right_unmapped == ((0, "bb"),)

    def test_sharing_penalty_counts_each_shared_mapping(self):
        """Test one penalty bit per accepted mapping sharing a sequence"""
        assert sy.sharing_penalty([(0, 0), (1, 0)], 2, 0) == 2
        assert sy.sharing_penalty([(0, 0), (1, 0)], 0, 1) == 1
        assert sy.sharing_penalty([(0, 0), (1, 0)], 2, 1) == 0

    def test_crossing_examples_complete_the_group(self):
        """Test that examples crossing two pairs of sequences give a complete merge"""
        worker = sy.Synthesizer()
        ds = worker.canonical(sre.complete_probabilities(parse_sre('"a" | "b"')))
        dt = worker.canonical(sre.complete_probabilities(parse_sre('"c" | "d"')))
        found = worker.greedy_synth([("a", "c"), ("a", "d"), ("b", "c")], ds, dt)

        assert sorted((m.i, m.j) for m in found.mappings) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert {found.mappings[k].i for k in found.create_l_table} == {0}

    def test_zip_iterations_pairs_by_position(self):
        """Test that iterations pair up in order and surplus ones are left out"""
        s = dnf.AtomMatch("\nx\ny\nz", ("\nx", "\ny", "\nz"))
        t = dnf.AtomMatch("\nu", ("\nu",))
        assert sy.zip_iterations(s, t) == [("\nx", "\nu")]

    def test_atoms_with_different_iteration_counts(self):
        """Test that a star cannot connect examples with different iteration counts"""
        worker = sy.Synthesizer()
        a = worker.canonical(sre.complete_probabilities(parse_sre('"a"*'))).sequences[0].atoms[0]
        b = worker.canonical(sre.complete_probabilities(parse_sre('"b"*'))).sequences[0].atoms[0]
        matches = ((dnf.AtomMatch("aaa", ("a", "a", "a")), dnf.AtomMatch("b", ("b",))),)

        assert worker.atom_synth(matches, a, b) is None
        assert worker.atom_synth(((dnf.AtomMatch("a", ("a",)), dnf.AtomMatch("b", ("b",))),), a, b)


class TestSynth:
    """Test suite for the search"""

    def test_bijective_fast_path(self):
        """Test that identical types give a free lens without unrolling"""
        result = sy.synth(task('("a" | "b")*', '("a" | "b")*'))

        assert result.cost == 0.0
        assert result.distance == 0
        assert result.expansions == 1
        assert ln.LensEvaluator().create_r(result.lens, "abba") == "abba"

    def test_collapse_repeated_names(self, name_env):
        """Test the lens between "" | name name* and "" | name"""
        limits = SynthLimits(max_expansions=30, timeout=60.0)
        result = sy.synth(task('"" | name name*', '"" | name', env=name_env, limits=limits))
        ev = ln.LensEvaluator(name_env)

        assert ev.create_r(result.lens, "") == ""
        assert ev.create_r(result.lens, "xa") == "xa"
        assert ev.put_l(result.lens, "xb", "xaxa") == "xbxa"

    def test_employee_task(self, employee_env):
        """Test that a costly first lens ends the search at distance 0"""
        result = sy.synth(sy.SynthTask(sre.Ref("emp_salaries"), sre.Ref("emp_insurance"),
                                       ((EMPLOYEE_LEFT, EMPLOYEE_RIGHT),), env=employee_env))
        ev = ln.LensEvaluator(employee_env)

        assert result.distance == 0
        assert result.expansions == 1
        assert ev.put_r(result.lens, EMPLOYEE_LEFT, EMPLOYEE_RIGHT) == EMPLOYEE_RIGHT
        assert ev.put_l(result.lens, EMPLOYEE_RIGHT, EMPLOYEE_LEFT) == EMPLOYEE_LEFT

    def test_employee_rows_after_one_unroll(self, employee_env):
        """Test that one unrolling lets the rows line up and lowers the cost"""
        employee = sy.SynthTask(sre.Ref("emp_salaries"), sre.Ref("emp_insurance"),
                                ((EMPLOYEE_LEFT, EMPLOYEE_RIGHT),), env=employee_env)
        worker = sy.Synthesizer(employee_env)
        start = sy.initial_pair(employee)
        first = sy.candidate(worker, employee, *start, 0, 1)
        found = [sy.candidate(worker, employee, s, t, 1, 2) for s, t in sy.expand(*start, employee_env)]
        best = min((r for r in found if r is not None), key=lambda r: r.cost)
        ev = ln.LensEvaluator(employee_env)

        assert best.cost < first.cost
        assert ev.put_r(best.lens, EMPLOYEE_LEFT, EMPLOYEE_RIGHT) == EMPLOYEE_RIGHT
        assert ev.put_l(best.lens, EMPLOYEE_RIGHT, EMPLOYEE_LEFT) == EMPLOYEE_LEFT
        assert ev.create_r(best.lens, "Chris Roe: 32500").startswith("FirstLast,Company\nChris Roe,")


    def test_library_lens_between_closed_names(self):
        """Test that a library lens connects two different closed names"""
        env = rx.EMPTY_ENV.define("d", parse_sre('"0" | "1"')).define("e", parse_sre('"x" | "y"'))
        flip = parse_lens('or(disconnect("0", "x", "0", "x"), disconnect("1", "y", "1", "y"))')
        library = sy.register_library(ln.EMPTY_LIBRARY, "flip", flip, sre.Ref("d"), sre.Ref("e"),
                                      env, bijective=True)
        result = sy.synth(task('d ";"', 'e ";"', env=env, library=library))

        assert ln.LensEvaluator(env, library).create_r(result.lens, "1;") == "y;"
        assert result.cost == 0.0

    def test_timeout_without_lens(self):
        """Test that running out of time before any candidate gives NoLens"""
        with pytest.raises(NoLens):
            sy.synth(task('"a"', '"a"', limits=SynthLimits(timeout=0.0)))

    def test_example_outside_language(self):
        """Test that examples are checked before the search starts"""
        with pytest.raises(ExampleNotInLanguage):
            sy.synth(task('"a" | "b"', '"c"', examples=(("z", "c"),)))

    def test_crossing_examples(self):
        """Test a lens whose examples connect both left sequences to both right ones"""
        examples = (("a", "c"), ("a", "d"), ("b", "c"))
        result = sy.synth(task('"a" | "b"', '"c" | "d"', examples=examples))
        ev = ln.LensEvaluator()

        assert result.cost == pytest.approx(2.0)
        assert all(ln.check_synchronized(ev, result.lens, s, t) for s, t in examples)
        assert ev.put_r(result.lens, "b", "d") == "d"
        assert ev.create_r(result.lens, "b") == "c"
        assert ev.create_l(result.lens, "d") == "a"

    def test_spot_check_reports_broken_laws(self, mocker):
        """Test that the sampled round-trip check catches a lens that forgets"""
        merge = task('"a" | "b"', '"c"')
        result = sy.synth(merge)
        sy.spot_check(result.lens, merge)

        mocker.patch.object(ln.LensEvaluator, "put_l", return_value="z")
        with pytest.raises(LawViolation):
            sy.spot_check(result.lens, merge)

    def test_first_lens_mode(self):
        """Test that the first-lens ablation stops at the first candidate"""
        result = sy.synth(task('"a" | "b"', '"c"', cost_mode=sy.FIRST_LENS))
        assert result.cost == 0.0
        assert result.distance == 0

    def test_disconnect_count_mode(self):
        """Test ranking by the number of disconnected atoms"""
        limits = SynthLimits(max_expansions=20, timeout=60.0)
        result = sy.synth(task('"<" "a"* ">"', '"<" ">"', cost_mode=sy.DISCONNECT_COUNT,
                                 limits=limits))
        assert result.cost == 1.0


class TestLibrary:
    """Test suite for registering library lenses"""

    def test_computed_cost(self):
        """Test that a lens without an annotation gets its computed cost"""
        l = parse_lens('disconnect("a" | "b", "c", "a", "c")')
        library = sy.register_library(ln.EMPTY_LIBRARY, "drop", l, parse_sre('"a" | "b"'),
                                      parse_sre('"c"'))
        assert library.get("drop").cost == pytest.approx(1.0)

    def test_bijective_is_free(self):
        """Test that the bijective annotation records cost zero"""
        l = parse_lens('id("a")')
        library = sy.register_library(ln.EMPTY_LIBRARY, "same", l, parse_sre('"a"'),
                                      parse_sre('"a"'), bijective=True)
        assert library.get("same").cost == 0.0

    def test_compose_needs_annotation(self):
        """Test that composed lenses must carry a cost"""
        l = parse_lens('compose(id("a"), id("a"))')
        with pytest.raises(MissingCostAnnotation):
            sy.register_library(ln.EMPTY_LIBRARY, "twice", l, parse_sre('"a"'), parse_sre('"a"'))

        library = sy.register_library(ln.EMPTY_LIBRARY, "twice", l, parse_sre('"a"'),
                                      parse_sre('"a"'), cost=2.0)
        assert library.get("twice").cost == 2.0
        assert library.get("twice").has_compose
