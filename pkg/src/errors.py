"""
Error Types

Every failure the lens toolkit reports is a subclass of LensError so callers
can catch the whole family at once. UserError marks mistakes in user input
(spec files, examples, lens definitions); SearchFailure marks synthesis runs
that end without an acceptable lens.
"""

from typing import Any, Optional


class LensError(Exception):
    """Base class for every error raised by the toolkit"""
    pass


class UserError(LensError):
    """Raised for problems the author of a spec file can fix"""
    pass


class SearchFailure(LensError):
    """Raised when synthesis finishes without a usable result"""
    pass


class UnresolvedRef(UserError):
    """A Ref names a definition that does not exist"""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unresolved reference: {name}")


class NoParse(UserError):
    """A string is not in the language of a regular expression"""

    def __init__(self, text: str, position: int = 0, what: str = ""):
        self.text = text
        self.position = position
        self.what = what
        shown = text if len(text) <= 40 else text[:37] + "..."
        where = f" against {what}" if what else ""
        super().__init__(f"No parse for {shown!r}{where} (matched up to position {position})")


class AmbiguousParse(UserError):
    """A string has at least two parse trees"""

    def __init__(self, text: str, count: int = 2):
        self.text = text
        self.count = count
        super().__init__(f"Ambiguous parse for {text!r} ({count}+ parses)")


class PreconditionViolated(LensError):
    """An operation was called on input outside its domain"""
    pass


class EmptySubterm(UserError):
    """An Empty occurs inside a nonempty expression"""
    pass


class WholeLanguageEmpty(UserError):
    """The expression denotes the empty language"""
    pass


class PatternMismatch(LensError):
    """A rewrite rule does not match the addressed subterm"""

    def __init__(self, rule: str, detail: str = ""):
        self.rule = rule
        super().__init__(f"{rule} does not apply{': ' + detail if detail else ''}")


class BadPath(LensError):
    """A rewrite path does not address a subterm"""

    def __init__(self, path: Any):
        self.path = path
        super().__init__(f"Path {list(path)} does not address a subterm")


class TypeMismatch(UserError):
    """Two types that must be equivalent are not"""

    def __init__(self, where: str, expected: Any, got: Any):
        self.where = where
        self.expected = expected
        self.got = got
        super().__init__(f"Type mismatch in {where}: expected {expected}, got {got}")


class DefaultNotInLanguage(UserError):
    """A disconnect default is not a member of its regular expression"""

    def __init__(self, default: str, regex: Any):
        self.default = default
        self.regex = regex
        super().__init__(f"Default {default!r} is not in {regex}")


class UnambiguityViolation(UserError):
    """A regular expression used as a lens type is ambiguous"""

    def __init__(self, regex: Any, witness: str):
        self.regex = regex
        self.witness = witness
        super().__init__(f"{regex} is ambiguous; {witness!r} has two parses")


class UnresolvedLibRef(UserError):
    """A library lens name is not defined"""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown lens: {name}")


class ComposePresent(LensError):
    """Cost is undefined for lenses containing composition"""
    pass


class DnfTypeError(LensError):
    """A DNF lens violates one of its typing clauses"""

    def __init__(self, clause: str, detail: str = ""):
        self.clause = clause
        super().__init__(f"{clause}: {detail}" if detail else clause)


class CreateTableGap(DnfTypeError):
    """A sequence is not covered by its create table"""

    def __init__(self, side: str, index: int):
        self.side = side
        self.index = index
        super().__init__("CreateTableGap", f"{side} sequence {index} has no create entry")


class InexpressibleLens(LensError):
    """A DNF lens has no counterpart built from the surface combinators"""
    pass


class ExampleNotInLanguage(UserError):
    """A synthesis example does not belong to its side's language"""

    def __init__(self, side: str, text: str):
        self.side = side
        self.text = text
        super().__init__(f"Example {text!r} is not in the {side} language")


class MissingCostAnnotation(UserError):
    """A library lens with composition was registered without a cost"""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Lens {name} uses composition and needs a cost annotation")


class SpecSyntaxError(UserError):
    """A spec file or expression failed to parse"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{location}")


class NoLens(SearchFailure):
    """No lens satisfying the examples was found"""

    def __init__(self, message: str = "No satisfying lens found"):
        super().__init__(message)


class TimeoutWithBest(SearchFailure):
    """The wall-clock limit expired; carries the best result found so far"""

    def __init__(self, best: Any):
        self.best = best
        super().__init__("Synthesis timed out before the search finished")


class LawViolation(LensError):
    """A synthesized lens broke a round-trip law on a sampled string"""

    def __init__(self, law: str, text: str):
        self.law = law
        self.text = text
        super().__init__(f"{law} fails for {text!r}")
