"""
Unit tests for stochastic regular expressions
"""

import pytest
import random
from fractions import Fraction
from hypothesis import given, settings, strategies as st
from src import regex as rx
from src import sre
from src.errors import (BadPath, EmptySubterm, PatternMismatch, PreconditionViolated,
                        WholeLanguageEmpty)
from src.syntax import parse_sre


def complete(text):
    return sre.complete_probabilities(parse_sre(text))


class TestProbabilities:
    """Test suite for default probabilities and exact string probabilities"""

    def test_default_star(self):
        """Test that unannotated stars continue with probability 4/5"""
        s = complete('"a"*')
        assert s.p == Fraction(4, 5)

    def test_default_union_weights_sequences(self):
        """Test that every DNF sequence is equally likely by default"""
        s = complete('"a" | "b" | "c"')
        assert s.p == Fraction(1, 3)
        assert s.right.p == Fraction(1, 2)

    def test_explicit_probabilities_kept(self):
        """Test that annotated probabilities survive completion"""
        s = complete('"a" |{1/4} "b"*{1/2}')
        assert s.p == Fraction(1, 4)
        assert s.right.p == Fraction(1, 2)

    def test_sequence_count(self):
        """Test that unions add and concatenations multiply"""
        s = parse_sre('("a" | "b") ("c" | "d" | "e") | "f"*')
        assert sre.sequence_count(s) == 7

    def test_probability_of_star(self):
        """Test the exact probability of a repeated string"""
        s = complete('"a"*')
        assert sre.probability(s, "aa") == Fraction(4, 5) ** 2 * Fraction(1, 5)
        assert sre.probability(s, "b") == 0

    def test_probability_through_references(self):
        """Test that references use their completed bindings"""
        env = rx.EMPTY_ENV.define("bit", parse_sre('"0" | "1"'))
        s = sre.complete_probabilities(parse_sre("bit bit"))
        assert sre.probability(s, "01", env) == Fraction(1, 4)

    def test_probability_requires_annotations(self):
        """Test that missing probabilities are rejected"""
        with pytest.raises(PreconditionViolated):
            sre.probability(parse_sre('"a" | "b"'), "a")

    def test_empty_inside_expression(self):
        """Test that Empty may only stand alone"""
        with pytest.raises(EmptySubterm):
            sre.complete_probabilities(parse_sre('"a" | empty'))

    def test_normalize_empty(self):
        """Test that empty alternatives disappear"""
        assert sre.normalize_empty(parse_sre('"a" | empty')) == sre.Const("a")
        assert sre.normalize_empty(parse_sre("empty*")) == sre.Const("")

    def test_normalize_empty_whole_language(self):
        """Test that an empty language is an error"""
        with pytest.raises(WholeLanguageEmpty):
            sre.normalize_empty(parse_sre('"a" empty'))

    def test_normalize_relevance(self):
        """Test that nested relevance marks collapse to the outermost"""
        s = sre.normalize_relevance(parse_sre('skip(require("a"))'))
        assert s == sre.Skip(sre.Const("a"))


class TestEntropy:
    """Test suite for entropy, sampling and the most likely string"""

    def test_star_entropy(self):
        """Test the entropy of a single-character star"""
        assert sre.entropy(complete('"a"*')) == pytest.approx(3.609640, abs=1e-6)

    def test_fair_choice_is_one_bit(self):
        """Test that a fair binary choice carries one bit"""
        assert sre.entropy(complete('"a" | "b"')) == pytest.approx(1.0)

    def test_certain_choice(self):
        """Test that a certain branch carries no information"""
        certain = sre.Or(sre.Const("a"), sre.Const("b"), Fraction(1))
        assert sre.entropy(certain) == 0.0

    def test_skip_carries_nothing(self):
        """Test that skipped subterms contribute no entropy"""
        assert sre.entropy(complete('skip("a" | "b") "c"')) == 0.0

    def test_sample_is_in_language(self):
        """Test that samples are members and deterministic per seed"""
        s = complete('("a" | "bc")* "d"')
        first = [sre.sample(s, seed=k) for k in range(20)]
        again = [sre.sample(s, seed=k) for k in range(20)]

        assert first == again
        assert all(rx.language_member(sre.strip(s), w) for w in first)

    def test_sampled_entropy_estimate(self):
        """Test that the sample average of -log2 P approaches the entropy"""
        s = complete('"a" | "b" | "c" | "d"')
        rng = random.Random(7)
        total = sum(-sre.log2(sre.probability(s, sre.sample(s, seed=rng))) for _ in range(200))
        assert total / 200 == pytest.approx(sre.entropy(s))


class TestRewriting:
    """Test suite for the equivalence rewrites"""

    def test_unroll_left(self):
        """Test that unrolling keeps the continuation probability"""
        s = complete('"a"*')
        unrolled = sre.apply_rewrite(s, sre.RewriteStep("UnrollL"))

        assert unrolled == sre.Or(sre.Const(""), sre.Concat(sre.Const("a"), s), Fraction(1, 5))

    def test_unroll_backward(self):
        """Test that a backward unroll restores the star"""
        s = complete('"a"*')
        unrolled = sre.apply_rewrite(s, sre.RewriteStep("UnrollL"))
        back = sre.apply_rewrite(unrolled, sre.RewriteStep("UnrollL", direction=sre.BACKWARD))
        assert back == s

    def test_or_comm(self):
        """Test that commuting flips the probability"""
        s = complete('"a" |{1/3} "b"')
        swapped = sre.apply_rewrite(s, sre.RewriteStep("OrComm"))
        assert swapped == sre.Or(sre.Const("b"), sre.Const("a"), Fraction(2, 3))

    def test_rewrite_at_path(self):
        """Test rewriting a nested subterm"""
        s = complete('"x" "a"*')
        rewritten = sre.apply_rewrite(s, sre.RewriteStep("UnrollR", (1,)))
        assert isinstance(rewritten.right, sre.Or)
        assert rewritten.left == sre.Const("x")

    def test_pattern_mismatch(self):
        """Test that a rule must match its subterm"""
        with pytest.raises(PatternMismatch):
            sre.apply_rewrite(complete('"a"'), sre.RewriteStep("UnrollL"))

    def test_bad_path(self):
        """Test that paths must stay inside the tree"""
        with pytest.raises(BadPath):
            sre.apply_rewrite(complete('"a"*'), sre.RewriteStep("UnrollL", (0, 0)))

    def test_unroll_neighbors(self):
        """Test the neighbors of an expression with one star and one closed name"""
        env = rx.EMPTY_ENV.define("d", parse_sre('"0" | "1"'))
        neighbors = sre.unroll_neighbors(sre.complete_probabilities(parse_sre('d "a"*')), env)

        assert len(neighbors) == 3
        assert isinstance(neighbors[0].left, sre.Or)

    @settings(max_examples=30, deadline=None)
    @given(word=st.text(alphabet="ab", max_size=5),
           rule=st.sampled_from(["UnrollL", "UnrollR"]))
    def test_unroll_preserves_probability(self, word, rule):
        """Test that unrolling never changes the distribution"""
        s = complete('("a" |{1/3} "b")*{2/3}')
        rewritten = sre.apply_rewrite(s, sre.RewriteStep(rule))
        assert sre.probability(rewritten, word) == sre.probability(s, word)

    @settings(max_examples=30, deadline=None)
    @given(word=st.text(alphabet="abc", max_size=3))
    def test_associativity_preserves_probability(self, word):
        """Test that reassociating a union keeps every string's probability"""
        s = complete('("a" |{1/4} "b") |{2/5} "c"')
        rewritten = sre.apply_rewrite(s, sre.RewriteStep("OrAssoc"))
        assert sre.probability(rewritten, word) == sre.probability(s, word)


class TestShow:
    """Test suite for printing"""

    def test_show_round_trip(self):
        """Test that printed annotations parse back"""
        s = complete('("a" | skip("b"))* "c"')
        assert parse_sre(sre.show(s)) == s

    def test_show_annotations(self):
        """Test the printed form of probabilities"""
        assert sre.show(complete('"a"*')) == '"a"*{4/5}'
