"""
Tests for running spec files
"""

import pytest
from src.config import SynthLimits
from src.errors import SpecSyntaxError
from src.specfile import build_environment, check_spec, load_spec, load_spec_file, synth_spec

PICK_SPEC = """
let name = "x" ("a" | "b")* ;
let pick : "" | name name* <=> "" | name = synth using { } ;
test createR pick "xa" = "xa" ;
test putL pick "xb" "xaxa" = "xbxa" ;
"""

LIMITS = SynthLimits(max_expansions=30, timeout=60.0)


class TestLoading:
    """Test suite for loading spec files"""

    def test_load_file(self, spec_file, swap_spec):
        """Test reading a spec from disk"""
        spec = load_spec_file(spec_file(swap_spec))

        assert len(spec.statements) == 9
        assert [d.name for d in spec.lens_defs()] == ["pair"]
        assert spec.synth_directives() == []

    def test_syntax_error(self):
        """Test that parse errors surface as SpecSyntaxError"""
        with pytest.raises(SpecSyntaxError):
            load_spec("let = ;")

    def test_build_environment(self, swap_spec):
        """Test that definitions and lenses are registered"""
        env, library = build_environment(load_spec(swap_spec))

        assert env.names() == ["letter", "word", "digit", "number"]
        assert library.get("pair").cost == 0.0


class TestCheck:
    """Test suite for checking definitions and tests"""

    def test_all_pass(self, swap_spec):
        """Test a spec whose tests all pass"""
        report = check_spec(load_spec(swap_spec))

        assert report.ok
        assert report.definitions == 5
        assert (report.tests_passed, report.tests_run) == (4, 4)
        assert "5 definition(s), 4/4 test(s) passed" in report.summary()

    def test_wrong_output(self, swap_spec):
        """Test that a wrong expectation is reported with both values"""
        report = check_spec(load_spec(swap_spec + 'test createR pair "a,0" = "a,0" ;\n'))

        assert not report.ok
        (failure,) = report.failures
        assert failure.expected == "a,0"
        assert failure.actual == "0,a"
        assert "wrong output" in failure.describe()

    def test_type_mismatch(self):
        """Test that a lens whose type differs from its declaration fails"""
        report = check_spec(load_spec('let f : "a" <=> "b" = id("a") ;\n'
                                      'test createR f "a" = "a" ;'))

        assert [f.what for f in report.failures] == ["f", "test createR f"]
        assert report.tests_passed == 0

    def test_pending_synthesis(self):
        """Test that tests of unsynthesized lenses fail"""
        report = check_spec(load_spec(PICK_SPEC))

        assert report.pending == ["pick"]
        assert all("has not been synthesized" in f.message for f in report.failures)
        assert "not synthesized yet: pick" in report.summary()


class TestSynthSpec:
    """Test suite for rewriting synth directives"""

    def test_rewrites_directive(self):
        """Test that the synthesized lens replaces the directive and passes the tests"""
        text, outcomes = synth_spec(load_spec(PICK_SPEC), LIMITS)
        (outcome,) = outcomes

        assert outcome.ok
        assert "synth using" not in text
        assert outcome.lens_text in text
        assert "# synthesized: cost" in text
        report = check_spec(load_spec(text))
        assert report.ok
        assert report.tests_passed == 2

    def test_failed_directive_is_kept(self):
        """Test that a directive with a bad example stays in place"""
        spec = 'let f : "a" <=> "b" = synth using { ("z", "b") } ;\n'
        text, outcomes = synth_spec(load_spec(spec), LIMITS)

        assert text == spec
        assert not outcomes[0].ok
        assert outcomes[0].error

    def test_later_lenses_see_earlier_ones(self, swap_spec):
        """Test that hand-written lenses above a directive are in its library"""
        spec = swap_spec + 'let again : word "," number <=> number "," word = synth using { } ;\n'
        text, outcomes = synth_spec(load_spec(spec), LIMITS)

        assert outcomes[0].ok
        assert outcomes[0].result.cost == 0.0
        assert check_spec(load_spec(text)).ok
