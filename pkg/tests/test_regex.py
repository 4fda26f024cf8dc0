"""
Unit tests for the regex module
"""

import pytest
from src import regex as rx
from src.errors import AmbiguousParse, NoParse, PreconditionViolated, UnresolvedRef, UserError
from src.syntax import parse_regex


def env_of(*definitions):
    env = rx.EMPTY_ENV
    for name, text in definitions:
        env = env.define(name, parse_regex(text))
    return env


class TestDefEnv:
    """Test suite for definition environments"""

    def test_define_and_lookup(self):
        """Test that definitions are stored in order and start closed"""
        env = env_of(("digit", '"0" | "1"'), ("number", "digit digit*"))

        assert env.names() == ["digit", "number"]
        assert env.is_closed("number")
        assert isinstance(env.regex("number"), rx.Concat)

    def test_define_unknown_reference(self):
        """Test that a definition may only mention earlier names"""
        with pytest.raises(UnresolvedRef):
            rx.EMPTY_ENV.define("number", parse_regex("digit digit*"))

    def test_define_twice(self):
        """Test that redefining a name is rejected"""
        env = env_of(("a", '"a"'))
        with pytest.raises(UserError):
            env.define("a", rx.Const("b"))

    def test_opened_is_a_new_environment(self):
        """Test that opening a name leaves the original environment unchanged"""
        env = env_of(("a", '"a"'))
        opened = env.opened("a")

        assert env.is_closed("a")
        assert not opened.is_closed("a")

    def test_reachable(self):
        """Test the names reachable through a definition"""
        env = env_of(("d", '"0"'), ("n", "d d*"), ("pair", 'n "," n'))
        assert env.reachable("pair") == {"n", "d"}


class TestMatching:
    """Test suite for membership and parsing"""

    def test_language_member(self):
        """Test membership with references and stars"""
        env = env_of(("d", '"0" | "1"'), ("n", "d d*"))

        assert rx.language_member(rx.Ref("n"), "0110", env)
        assert not rx.language_member(rx.Ref("n"), "", env)
        assert not rx.language_member(rx.Ref("n"), "012", env)

    def test_count_parses_is_capped(self):
        """Test that parse counting stops at two"""
        r = parse_regex('("a" | "a" | "a") ("a"*)')
        assert rx.count_parses(r, "a") == 2
        assert rx.count_parses(parse_regex('"a" "b"'), "ab") == 1

    def test_parse_tree_flattens_back(self):
        """Test that a parse tree reproduces the input"""
        r = parse_regex('("x" | "y")* ":" "z"')
        tree = rx.parse_string(r, "xyx:z")

        assert isinstance(tree, rx.ConcatNode)
        assert rx.flatten(tree) == "xyx:z"
        assert len(tree.left.children) == 3

    def test_parse_or_records_branch(self):
        """Test that union parse nodes remember which side matched"""
        tree = rx.parse_string(parse_regex('"a" | "b"'), "b")
        assert tree.side == rx.RIGHT

    def test_no_parse_reports_position(self):
        """Test that a failed parse reports how far it got"""
        with pytest.raises(NoParse) as excinfo:
            rx.parse_string(parse_regex('"abc" "def"'), "abcxef")
        assert excinfo.value.position == 3

    def test_ambiguous_parse(self):
        """Test that two parses are reported"""
        with pytest.raises(AmbiguousParse):
            rx.parse_string(parse_regex('"a"* "a"*'), "a")


class TestAmbiguity:
    """Test suite for the unambiguity check"""

    def test_unambiguous(self):
        """Test an unambiguous expression"""
        assert rx.check_unambiguous(parse_regex('("a" | "b")* "c"')) is True

    def test_overlapping_union(self):
        """Test that overlapping alternatives yield a witness"""
        assert rx.check_unambiguous(parse_regex('"a" | "a"')) == "a"

    def test_concatenation_witness(self):
        """Test that the shortest ambiguous string is returned"""
        verdict = rx.check_unambiguous(parse_regex('("a" | "ab") ("c" | "bc")'))
        assert verdict == "abc"

    def test_nullable_twice(self):
        """Test that an empty string with two parses gives the empty witness"""
        assert rx.check_unambiguous(parse_regex('"" | ""')) == ""

    def test_bound_hides_long_witnesses(self):
        """Test that witnesses longer than the bound are not reported"""
        r = parse_regex('"aaaa" | "aaaa"')
        assert rx.check_unambiguous(r, bound=2) is True
        assert rx.check_unambiguous(r, bound=None) == "aaaa"

    def test_is_unambiguous(self):
        """Test the exact decision"""
        assert rx.is_unambiguous(parse_regex('"a"*'))
        assert not rx.is_unambiguous(parse_regex('"a"* "a"*'))


class TestEquivalence:
    """Test suite for language equivalence"""

    def test_reassociation(self):
        """Test that grouping does not change the language"""
        assert rx.equivalent(parse_regex('("a" "b") "c"'), parse_regex('"a" ("b" "c")'))

    def test_unrolled_star(self):
        """Test a star against its unrolling"""
        assert rx.equivalent(parse_regex('"a"*'), parse_regex('"" | "a" "a"*'))

    def test_different_languages(self):
        """Test that different languages are told apart"""
        assert not rx.equivalent(parse_regex('"a"*'), parse_regex('"a" "a"*'))

    def test_through_references(self):
        """Test equivalence of a reference and its definition"""
        env = env_of(("d", '"0" | "1"'))
        assert rx.equivalent(rx.Ref("d"), parse_regex('"1" | "0"'), env)


class TestEnumerateAndShow:
    """Test suite for enumeration and printing"""

    def test_enumerate_order(self):
        """Test shortest-first, then lexicographic enumeration"""
        words = rx.enumerate_strings(parse_regex('("b" | "a")*'), max_len=2)
        assert words == ["", "a", "b", "aa", "ab", "ba", "bb"]

    def test_enumerate_without_duplicates(self):
        """Test that ambiguous expressions list each string once"""
        assert rx.enumerate_strings(parse_regex('"a" | "a"'), max_len=3) == ["a"]

    def test_show_round_trip(self):
        """Test that printed expressions parse back to the same tree"""
        r = parse_regex('("a" | "b" "c")* ("d" | empty) "\\n"')
        assert parse_regex(rx.show(r)) == r

    def test_quote_escapes(self):
        """Test string literal escaping"""
        assert rx.quote('a"b\n') == '"a\\"b\\n"'

    def test_size(self):
        """Test the node count"""
        assert rx.size(parse_regex('"a" | "b"*')) == 4

    def test_shortest_member_prefers_length(self):
        """Test that the shortest member wins over an earlier longer branch"""
        assert rx.shortest_member(parse_regex('"bb" | "a"')) == "a"

    def test_shortest_member_breaks_ties_lexicographically(self):
        """Test lexicographic order among members of equal length"""
        assert rx.shortest_member(parse_regex('("y" | "x") "z"*')) == "x"

    def test_shortest_member_of_empty_language(self):
        """Test that an empty language has no shortest member"""
        with pytest.raises(PreconditionViolated):
            rx.shortest_member(parse_regex('"a" empty'))
