"""
Tests for the command line interface
"""

import json
import pytest
from click.testing import CliRunner
from src import synth as sy
from src.cli import EXIT_OK, EXIT_SEARCH, EXIT_USER, cli


@pytest.fixture
def runner():
    return CliRunner()


class TestCheck:
    """Test suite for the check command"""

    def test_passing_spec(self, runner, spec_file, swap_spec):
        """Test that a spec whose tests pass exits with 0"""
        result = runner.invoke(cli, ["check", spec_file(swap_spec)])

        assert result.exit_code == EXIT_OK
        assert "4/4 test(s) passed" in result.output

    def test_failing_spec(self, runner, spec_file, swap_spec):
        """Test that a failing test exits with 1 and names its line"""
        path = spec_file(swap_spec + 'test createR pair "a,0" = "a,0" ;\n')
        result = runner.invoke(cli, ["check", path])

        assert result.exit_code == EXIT_USER
        assert "wrong output" in result.output

    def test_syntax_error(self, runner, spec_file):
        """Test that a spec that does not parse is a user error"""
        result = runner.invoke(cli, ["check", spec_file("let = ;")])
        assert result.exit_code == EXIT_USER

    def test_missing_file(self, runner, tmp_path):
        """Test that click rejects a missing file as a usage error"""
        result = runner.invoke(cli, ["check", str(tmp_path / "absent.lens")])
        assert result.exit_code == 2


class TestApply:
    """Test suite for the apply command"""

    def test_create_r(self, runner, spec_file, swap_spec, tmp_path):
        """Test running a lens function over a file"""
        source = tmp_path / "in.txt"
        source.write_text("ab,12", encoding="utf-8")
        result = runner.invoke(cli, ["apply", spec_file(swap_spec), "--lens", "pair",
                                     "--op", "createR", "--input", str(source)])

        assert result.exit_code == EXIT_OK
        assert result.output.endswith("12,ab")

    def test_put_needs_old(self, runner, spec_file, swap_spec, tmp_path):
        """Test that put functions require the existing string"""
        source = tmp_path / "in.txt"
        source.write_text("ab,12", encoding="utf-8")
        result = runner.invoke(cli, ["apply", spec_file(swap_spec), "--lens", "pair",
                                     "--op", "putR", "--input", str(source)])

        assert result.exit_code == EXIT_USER
        assert "--old" in result.output

    def test_put_l(self, runner, spec_file, swap_spec, tmp_path):
        """Test a put with the old string from a second file"""
        new, old = tmp_path / "new.txt", tmp_path / "old.txt"
        new.write_text("21,cc", encoding="utf-8")
        old.write_text("ab,12", encoding="utf-8")
        result = runner.invoke(cli, ["apply", spec_file(swap_spec), "--lens", "pair", "--op", "putL",
                                     "--input", str(new), "--old", str(old)])

        assert result.exit_code == EXIT_OK
        assert result.output.endswith("cc,21")

    def test_input_outside_type(self, runner, spec_file, swap_spec, tmp_path):
        """Test that an input the lens cannot parse is a user error"""
        source = tmp_path / "in.txt"
        source.write_text("ab;12", encoding="utf-8")
        result = runner.invoke(cli, ["apply", spec_file(swap_spec), "--lens", "pair",
                                     "--op", "createR", "--input", str(source)])
        assert result.exit_code == EXIT_USER


class TestEntropy:
    """Test suite for the entropy command"""

    def test_fair_choice(self, runner, spec_file):
        """Test printing the entropy of a definition"""
        result = runner.invoke(cli, ["entropy", spec_file('let coin = "a" | "b" ;'), "--regex", "coin"])

        assert result.exit_code == EXIT_OK
        assert "1.000000" in result.output

    def test_sampled(self, runner, spec_file):
        """Test that sampling reports its estimate"""
        result = runner.invoke(cli, ["entropy", spec_file('let coin = "a" | "b" ;'),
                                     "--regex", "coin", "--sample", "50"])

        assert result.exit_code == EXIT_OK
        assert "sampled: 1.000000 over 50 samples" in result.output

    def test_seed_defaults_to_settings(self, runner, spec_file, tmp_path):
        """Test that the settings seed is used when --seed is not given"""
        config = tmp_path / "settings.json"
        config.write_text(json.dumps({"settings": {"seed": 5}}), encoding="utf-8")
        path = spec_file('let w = "a" |{1/4} "b" ;')
        configured = runner.invoke(cli, ["--config", str(config), "entropy", path,
                                         "--regex", "w", "--sample", "20"])
        explicit = runner.invoke(cli, ["entropy", path, "--regex", "w", "--sample", "20",
                                       "--seed", "5"])

        assert configured.exit_code == EXIT_OK
        assert configured.output == explicit.output



class TestSynth:
    """Test suite for the synth command"""

    def test_writes_rewritten_spec(self, runner, spec_file, tmp_path):
        """Test that synthesized lenses are written to the output file"""
        spec = 'let bits = ("0" | "1")* ;\nlet same : bits <=> bits = synth using { } ;\n'
        out = tmp_path / "out.lens"
        result = runner.invoke(cli, ["synth", spec_file(spec), "--max-expansions", "10",
                                     "-o", str(out)])

        assert result.exit_code == EXIT_OK
        text = out.read_text(encoding="utf-8")
        assert "synth using" not in text
        assert "# synthesized: cost 0.000000, distance 0" in text

    def test_seed_reaches_the_spot_check(self, runner, spec_file, mocker):
        """Test that --seed seeds the sampled round-trip check"""
        spy = mocker.spy(sy, "spot_check")
        spec = 'let bits = ("0" | "1")* ;\nlet same : bits <=> bits = synth using { } ;\n'
        result = runner.invoke(cli, ["synth", spec_file(spec), "--seed", "9"])

        assert result.exit_code == EXIT_OK
        assert spy.call_count == 1
        assert spy.call_args.args[1].limits.seed == 9


    def test_failed_directive(self, runner, spec_file):
        """Test that a directive without a lens exits with 2"""
        spec = 'let f : "a" <=> "b" = synth using { ("z", "b") } ;\n'
        result = runner.invoke(cli, ["synth", spec_file(spec)])

        assert result.exit_code == EXIT_SEARCH
        assert "f (line 1)" in result.output
