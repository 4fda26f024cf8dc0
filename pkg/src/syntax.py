"""
Concrete Syntax

One lark grammar covers regular expressions, stochastic regular expressions,
lenses and spec files. Parsing goes through a Transformer that builds the AST
nodes of src.regex, src.sre and src.lens; the printers are the show functions of
those modules, whose output this grammar reads back.

Inside a spec file `;` ends a statement, so infix composition `l1 ; l2` is only
accepted inside parentheses. The printer always uses `compose(l1, l2)`.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from src import lens as ln
from src import regex as rx
from src import sre
from src.errors import LensError, SpecSyntaxError

GRAMMAR = r"""
spec: statement*
sre_text: sre
lens_text: lens_seq

?statement: regex_def
          | lens_def
          | test_stmt

regex_def: "let" NAME "=" sre ";"
lens_def: "let" NAME ":" lens_type [note] "=" lens_body ";"
lens_type: sre "<=>" sre
note: "[" "cost" NUMBER "]"   -> cost_note
    | "[" "bijective" "]"     -> bijective_note
?lens_body: lens_cat
          | synth_body
synth_body: "synth" [lens_type] "using" "{" (example ("," example)*)? "}"
example: "(" STRING "," STRING ")"
test_stmt: "test" NAME NAME STRING [STRING] "=" STRING ";"

sre: seq (bar seq)*
bar: "|" [prob]
seq: postfix ("."? postfix)*
postfix: primary star*
star: "*" [prob]
prob: "{" NUMBER "}"
?primary: STRING                   -> const
        | NAME                     -> ref
        | "empty"                  -> empty
        | "skip" "(" sre ")"       -> skip
        | "require" "(" sre ")"    -> require
        | "(" sre ")"

lens_seq: lens_cat (";" lens_cat)*
lens_cat: lens_atom ("." lens_atom)*
?lens_atom: "id" "(" sre ")"                                        -> l_id
          | "disconnect" "(" sre "," sre "," STRING "," STRING ")"  -> l_disconnect
          | "ins" "(" STRING ")"                                    -> l_ins
          | "del" "(" STRING ")"                                    -> l_del
          | "concat" "(" lens_seq "," lens_seq ")"                  -> l_concat
          | "swap" "(" lens_seq "," lens_seq ")"                    -> l_swap
          | "or" "(" lens_seq "," lens_seq ")"                      -> l_or
          | "merge_right" "(" lens_seq "," lens_seq ")"             -> l_merge_right
          | "merge_left" "(" lens_seq "," lens_seq ")"              -> l_merge_left
          | "compose" "(" lens_seq "," lens_seq ")"                 -> l_compose
          | "iterate" "(" lens_seq ")"                              -> l_iterate
          | "invert" "(" lens_seq ")"                               -> l_invert
          | NAME                                                    -> l_ref
          | "(" lens_seq ")"

NAME: /[A-Za-z_][A-Za-z0-9_]*/
STRING: /"(?:[^"\\\n]|\\.)*"/
NUMBER: /\d+\/\d+|\d*\.\d+|\d+/
COMMENT: /#[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

OPS = ("createR", "createL", "putR", "putL")

Example = Tuple[str, str]


# ---------------------------------------------------------------------------
# Spec-file statements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegexDef:
    """let name = <regex or sre> ;"""
    name: str
    value: sre.SRE
    line: int


@dataclass(frozen=True)
class SynthDirective:
    """The body `synth [S <=> T] using {...}`; span is its offset range in the text"""
    examples: Tuple[Example, ...]
    src: Optional[sre.SRE]
    tgt: Optional[sre.SRE]
    span: Tuple[int, int]


@dataclass(frozen=True)
class LensDef:
    """let name : S <=> T [annotation] = body ;"""
    name: str
    src: sre.SRE
    tgt: sre.SRE
    body: Union[ln.Lens, SynthDirective]
    cost: Optional[float]
    bijective: bool
    line: int
    end: int
    type_end: int

    @property
    def is_synth(self) -> bool:
        return isinstance(self.body, SynthDirective)


@dataclass(frozen=True)
class TestStmt:
    """test op lens "input" ["old"] = "expected" ;"""
    op: str
    lens: str
    inputs: Tuple[str, ...]
    expected: str
    line: int


Statement = Union[RegexDef, LensDef, TestStmt]


# ---------------------------------------------------------------------------
# Tree building
# ---------------------------------------------------------------------------

_UNESCAPES = {"n": "\n", "t": "\t"}


def unquote(token: str) -> str:
    """The value of a string literal token"""
    body = token[1:-1]
    out: List[str] = []
    k = 0
    while k < len(body):
        ch = body[k]
        if ch == "\\" and k + 1 < len(body):
            k += 1
            ch = _UNESCAPES.get(body[k], body[k])
        out.append(ch)
        k += 1
    return "".join(out)


def _plain(s: sre.SRE, meta=None) -> rx.Regex:
    """A regex that must not carry probabilities or relevance marks"""
    r = sre.strip(s)
    if sre.lift(r) != s:
        line = getattr(meta, "line", None)
        column = getattr(meta, "column", None)
        raise SpecSyntaxError("Lens types inside lenses are plain regular expressions", line, column)
    return r


class _Star:
    def __init__(self, p: Optional[Fraction]):
        self.p = p


@v_args(inline=True)
class _Builder(Transformer):
    """Turns parse trees into AST nodes and statements"""

    # -- stochastic regular expressions -------------------------------------

    def const(self, token):
        return sre.Const(unquote(token))

    def ref(self, token):
        return sre.Ref(str(token))

    def empty(self):
        return sre.Empty()

    def skip(self, body):
        return sre.Skip(body)

    def require(self, body):
        return sre.Require(body)

    @v_args(meta=True, inline=True)
    def prob(self, meta, token):
        value = sre.prob(str(token))
        if not 0 < value < 1:
            raise SpecSyntaxError(f"Probability {token} must lie strictly between 0 and 1",
                                  meta.line, meta.column)
        return value

    def bar(self, p=None):
        return p

    def star(self, p=None):
        return _Star(p)

    def postfix(self, body, *stars):
        for mark in stars:
            body = sre.Star(body, mark.p)
        return body

    def seq(self, *parts):
        result = parts[-1]
        for part in reversed(parts[:-1]):
            result = sre.Concat(part, result)
        return result

    def sre(self, *children):
        seqs = children[0::2]
        bars = children[1::2]
        result = seqs[-1]
        for k in range(len(seqs) - 2, -1, -1):
            result = sre.Or(seqs[k], result, bars[k])
        return result

    def sre_text(self, s):
        return s

    # -- lenses -------------------------------------------------------------

    @v_args(meta=True, inline=True)
    def l_id(self, meta, s):
        return ln.Identity(_plain(s, meta))

    @v_args(meta=True, inline=True)
    def l_disconnect(self, meta, s, t, s_default, t_default):
        return ln.Disconnect(_plain(s, meta), _plain(t, meta), unquote(s_default), unquote(t_default))

    def l_ins(self, token):
        return ln.ins(unquote(token))

    def l_del(self, token):
        return ln.delete(unquote(token))

    def l_concat(self, a, b):
        return ln.Concat(a, b)

    def l_swap(self, a, b):
        return ln.Swap(a, b)

    def l_or(self, a, b):
        return ln.Or(a, b)

    def l_merge_right(self, a, b):
        return ln.MergeRight(a, b)

    def l_merge_left(self, a, b):
        return ln.MergeLeft(a, b)

    def l_compose(self, a, b):
        return ln.Compose(a, b)

    def l_iterate(self, body):
        return ln.Iterate(body)

    def l_invert(self, body):
        return ln.Invert(body)

    def l_ref(self, token):
        return ln.LibRef(str(token))

    def lens_cat(self, *parts):
        return ln.concat_lenses(list(parts))

    def lens_seq(self, *parts):
        result = parts[-1]
        for part in reversed(parts[:-1]):
            result = ln.Compose(part, result)
        return result

    def lens_text(self, l):
        return l

    # -- statements ---------------------------------------------------------

    @v_args(meta=True, inline=True)
    def lens_type(self, meta, s, t):
        return (s, t, meta.end_pos)

    def cost_note(self, token):
        return ("cost", float(sre.prob(str(token))))

    def bijective_note(self):
        return ("bijective", None)

    def example(self, left, right):
        return (unquote(left), unquote(right))

    @v_args(meta=True, inline=True)
    def synth_body(self, meta, types, *examples):
        src, tgt = types[:2] if types is not None else (None, None)
        return SynthDirective(tuple(examples), src, tgt, (meta.start_pos, meta.end_pos))

    @v_args(meta=True, inline=True)
    def regex_def(self, meta, name, value):
        return RegexDef(str(name), value, meta.line)

    @v_args(meta=True, inline=True)
    def lens_def(self, meta, name, types, note, body):
        src, tgt, type_end = types
        if isinstance(body, SynthDirective) and body.src is not None:
            if sre.strip(body.src) != sre.strip(src) or sre.strip(body.tgt) != sre.strip(tgt):
                raise SpecSyntaxError(f"synth types of {name} differ from its declared type",
                                      meta.line, meta.column)
        cost = note[1] if note is not None and note[0] == "cost" else None
        bijective = note is not None and note[0] == "bijective"
        return LensDef(str(name), src, tgt, body, cost, bijective, meta.line, meta.end_pos, type_end)

    @v_args(meta=True, inline=True)
    def test_stmt(self, meta, op, name, first, second, expected):
        op = str(op)
        if op not in OPS:
            raise SpecSyntaxError(f"Unknown operation {op}; expected one of {', '.join(OPS)}",
                                  meta.line, meta.column)
        inputs = (unquote(first),) if second is None else (unquote(first), unquote(second))
        if len(inputs) != (1 if op.startswith("create") else 2):
            raise SpecSyntaxError(f"{op} takes {1 if op.startswith('create') else 2} input(s)",
                                  meta.line, meta.column)
        return TestStmt(op, str(name), inputs, unquote(expected), meta.line)

    def spec(self, *statements):
        return list(statements)


_PARSER = Lark(GRAMMAR, parser="lalr", start=["spec", "sre_text", "lens_text"],
               propagate_positions=True, maybe_placeholders=True)
_BUILDER = _Builder()


def _location(text: str, e: UnexpectedInput) -> Tuple[int, int]:
    line, column = getattr(e, "line", -1), getattr(e, "column", -1)
    if isinstance(e, UnexpectedEOF) or line is None or line < 1:
        lines = text.split("\n")
        return len(lines), len(lines[-1]) + 1
    return line, column


def _parse(text: str, start: str):
    try:
        tree = _PARSER.parse(text, start=start)
    except UnexpectedInput as e:
        line, column = _location(text, e)
        found = str(getattr(e, "token", None) or getattr(e, "char", None) or "")
        message = f"Unexpected {found!r}" if found else "Unexpected end of input"
        raise SpecSyntaxError(message, line, column) from None
    try:
        return _BUILDER.transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, LensError):
            raise e.orig_exc from None
        raise


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def parse_sre(text: str) -> sre.SRE:
    """
    Parse a stochastic regular expression.

    Unannotated operators get no probability; complete_probabilities or
    to_stochastic fill them in later.

    Raises:
        SpecSyntaxError: with the line and column of the offending token
    """
    return _parse(text, "sre_text")


def parse_regex(text: str) -> rx.Regex:
    """Parse a plain regular expression (no probabilities or relevance marks)"""
    return _plain(parse_sre(text))


def parse_lens(text: str) -> ln.Lens:
    """Parse a lens expression; `l1 ; l2` composes"""
    return _parse(text, "lens_text")


def parse_spec(text: str) -> List[Statement]:
    """Parse a whole spec file into its statements, in file order"""
    return _parse(text, "spec")


def format_regex(r: rx.Regex) -> str:
    return rx.show(r)


def format_sre(s: sre.SRE) -> str:
    return sre.show(s)


def format_lens(l: ln.Lens) -> str:
    return ln.show(l)
