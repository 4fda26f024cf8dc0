"""
Spec File Runtime

Runs the statements of a spec file: regex definitions extend the definition
environment, lens definitions are typechecked and registered in the library
that later lenses and synth directives can use, and test statements run the
four lens functions against expected outputs.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

from src import lens as ln
from src import regex as rx
from src import sre
from src import synth as sy
from src.config import Settings, SynthLimits
from src.errors import LensError, NoLens, TimeoutWithBest, TypeMismatch, UserError
from src.logger import get_logger
from src.syntax import LensDef, RegexDef, Statement, TestStmt, format_lens, parse_spec

logger = get_logger(__name__)


@dataclass(frozen=True)
class SpecFile:
    """Parsed statements together with the text they came from"""
    text: str
    statements: Tuple[Statement, ...]

    def lens_defs(self) -> List[LensDef]:
        return [st for st in self.statements if isinstance(st, LensDef)]

    def synth_directives(self) -> List[LensDef]:
        return [st for st in self.lens_defs() if st.is_synth]


def load_spec(text: str) -> SpecFile:
    """
    Parse spec-file text.

    Raises:
        SpecSyntaxError: the text does not parse
    """
    return SpecFile(text, tuple(parse_spec(text)))


def load_spec_file(path: str) -> SpecFile:
    """Read and parse a UTF-8 spec file"""
    return load_spec(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Environment building
# ---------------------------------------------------------------------------

def _bound(settings: Optional[Settings]) -> Optional[int]:
    if settings is None or settings.unambiguity_bound is None:
        return -1
    return settings.unambiguity_bound


class _Runtime:
    """The environment and library as the statements are executed in order"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or Settings()
        self.env = rx.EMPTY_ENV
        self.library = ln.EMPTY_LIBRARY
        self.pending: List[str] = []

    def evaluator(self) -> ln.LensEvaluator:
        return ln.LensEvaluator(self.env, self.library, _bound(self.settings))

    def define_regex(self, st: RegexDef) -> None:
        self.env = self.env.define(st.name, st.value)
        verdict = rx.check_unambiguous(self.env.regex(st.name), self.env, _bound(self.settings))
        if verdict is not True:
            logger.warning(f"line {st.line}: {st.name} is ambiguous; {verdict!r} has two parses")

    def define_lens(self, st: LensDef, lens: ln.Lens, cost: Optional[float] = None) -> None:
        """Typecheck lens against the declared type and add it to the library"""
        ev = self.evaluator()
        src, tgt = ev.typecheck(lens)
        declared_src, declared_tgt = sre.strip(st.src), sre.strip(st.tgt)
        if not rx.equivalent(src, declared_src, self.env):
            raise TypeMismatch(f"source of {st.name}", rx.show(declared_src), rx.show(src))
        if not rx.equivalent(tgt, declared_tgt, self.env):
            raise TypeMismatch(f"target of {st.name}", rx.show(declared_tgt), rx.show(tgt))
        self.library = sy.register_library(
            self.library, st.name, lens, st.src, st.tgt, self.env,
            cost=st.cost if cost is None else cost, bijective=st.bijective)


def build_environment(spec: SpecFile, settings: Optional[Settings] = None) -> Tuple[rx.DefEnv, ln.Library]:
    """
    Definitions and checked lenses of a spec file.

    Synth directives that have not been replaced by a lens are left out of the
    library.

    Raises:
        UserError: the first definition that fails to check
    """
    runtime = _Runtime(settings)
    for st in spec.statements:
        if isinstance(st, RegexDef):
            runtime.define_regex(st)
        elif isinstance(st, LensDef) and not st.is_synth:
            runtime.define_lens(st, st.body)
    return runtime.env, runtime.library


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Failure:
    """One failed definition or test"""
    line: int
    what: str
    message: str
    expected: Optional[str] = None
    actual: Optional[str] = None

    def describe(self) -> str:
        text = f"line {self.line}: {self.what}: {self.message}"
        if self.expected is not None:
            text += f"\n  expected: {rx.quote(self.expected)}\n  actual:   {rx.quote(self.actual or '')}"
        return text


@dataclass
class CheckReport:
    """Outcome of checking a spec file"""
    definitions: int = 0
    tests_run: int = 0
    tests_passed: int = 0
    pending: List[str] = field(default_factory=list)
    failures: List[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = [f.describe() for f in self.failures]
        lines.append(f"{self.definitions} definition(s), {self.tests_passed}/{self.tests_run} test(s) passed")
        if self.pending:
            lines.append(f"not synthesized yet: {', '.join(self.pending)}")
        return "\n".join(lines)


def run_test(ev: ln.LensEvaluator, st: TestStmt) -> str:
    """The output of the operation a test statement names"""
    lens = ln.LibRef(st.lens)
    if st.op == "createR":
        return ev.create_r(lens, st.inputs[0])
    if st.op == "createL":
        return ev.create_l(lens, st.inputs[0])
    if st.op == "putR":
        return ev.put_r(lens, st.inputs[0], st.inputs[1])
    return ev.put_l(lens, st.inputs[0], st.inputs[1])


def check_spec(spec: SpecFile, settings: Optional[Settings] = None) -> CheckReport:
    """
    Typecheck every definition and run every test.

    Failures are collected rather than raised; a definition that fails is
    skipped, so tests that use it fail too.

    Args:
        spec: Parsed spec file
        settings: Unambiguity bound and other settings

    Returns:
        CheckReport listing each failure with its line
    """
    report = CheckReport()
    runtime = _Runtime(settings)
    for st in spec.statements:
        if isinstance(st, RegexDef):
            report.definitions += 1
            try:
                runtime.define_regex(st)
            except UserError as e:
                report.failures.append(Failure(st.line, st.name, str(e)))
        elif isinstance(st, LensDef):
            report.definitions += 1
            if st.is_synth:
                report.pending.append(st.name)
                continue
            try:
                runtime.define_lens(st, st.body)
            except LensError as e:
                report.failures.append(Failure(st.line, st.name, str(e)))
        else:
            report.tests_run += 1
            what = f"test {st.op} {st.lens}"
            if st.lens in report.pending:
                report.failures.append(Failure(st.line, what, f"{st.lens} has not been synthesized"))
                continue
            try:
                actual = run_test(runtime.evaluator(), st)
            except LensError as e:
                report.failures.append(Failure(st.line, what, str(e)))
                continue
            if actual == st.expected:
                report.tests_passed += 1
            else:
                report.failures.append(Failure(st.line, what, "wrong output", st.expected, actual))
    logger.info(f"Checked {report.definitions} definition(s), "
                f"{report.tests_passed}/{report.tests_run} test(s) passed")
    return report


# ---------------------------------------------------------------------------
# Synthesis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SynthOutcome:
    """What happened to one synth directive"""
    name: str
    line: int
    result: Optional[sy.SynthResult] = None
    error: Optional[str] = None
    timed_out: bool = False

    @property
    def ok(self) -> bool:
        return self.result is not None

    @property
    def lens_text(self) -> Optional[str]:
        return None if self.result is None else format_lens(self.result.lens)


def _comment(outcome: SynthOutcome) -> str:
    result = outcome.result
    note = ", timed out" if outcome.timed_out else ""
    return f"  # synthesized: cost {result.cost:.6f}, distance {result.distance}{note}"


def synth_spec(spec: SpecFile, limits: Optional[SynthLimits] = None,
               settings: Optional[Settings] = None,
               cost_mode: str = sy.INFORMATION) -> Tuple[str, List[SynthOutcome]]:
    """
    Replace every synth directive with a synthesized lens.

    Directives run in file order; each one sees the lenses defined above it
    as library entries. A directive that fails keeps its synth body and the
    remaining directives are still processed.

    Args:
        spec: Parsed spec file
        limits: Search limits; defaults to the settings' limits
        settings: Toolkit settings
        cost_mode: Cost function used to rank candidates

    Returns:
        The rewritten text and one outcome per directive
    """
    settings = settings or Settings()
    limits = limits or settings.limits
    runtime = _Runtime(settings)
    outcomes: List[SynthOutcome] = []
    edits: List[Tuple[int, int, str]] = []

    for st in spec.statements:
        if isinstance(st, RegexDef):
            runtime.define_regex(st)
            continue
        if not isinstance(st, LensDef):
            continue
        if not st.is_synth:
            runtime.define_lens(st, st.body)
            continue

        task = sy.SynthTask(st.src, st.tgt, st.body.examples, runtime.library, limits,
                            runtime.env, cost_mode)
        try:
            outcome = SynthOutcome(st.name, st.line, sy.synth(task))
        except TimeoutWithBest as e:
            logger.warning(f"{st.name}: timed out, keeping the best lens found")
            outcome = SynthOutcome(st.name, st.line, e.best, timed_out=True)
        except (NoLens, UserError) as e:
            logger.error(f"{st.name}: {e}")
            outcomes.append(SynthOutcome(st.name, st.line, error=str(e)))
            continue

        lens = outcome.result.lens
        composed = ln.has_compose(lens, runtime.library)
        runtime.define_lens(st, lens, cost=outcome.result.cost)
        if composed and st.cost is None and not st.bijective:
            edits.append((st.type_end, st.type_end, f" [cost {outcome.result.cost:.6f}]"))
        start, end = st.body.span
        edits.append((start, end, outcome.lens_text))
        edits.append((st.end, st.end, _comment(outcome)))
        outcomes.append(outcome)

    text = spec.text
    for start, end, replacement in sorted(edits, key=lambda e: (e[0], e[1]), reverse=True):
        text = text[:start] + replacement + text[end:]
    return text, outcomes
