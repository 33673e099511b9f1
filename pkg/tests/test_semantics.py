import pytest
from hypothesis import given, settings

from hornseq.algebra import compose
from hornseq.errors import AlphabetError, BoundExceededError
from hornseq.semantics import (
    enumerate_models,
    entails,
    is_model,
    least_model,
    subsumption_equivalent,
    tp,
)
from hornseq.syntax import (
    Alphabet,
    Atom,
    Program,
    Rule,
    facts_program,
    parse_interpretation,
    parse_program,
)

from .oracles import naive_least_model, naive_models
from .strategies import interpretations, programs

P = parse_program
I = parse_interpretation
A = Atom


class TestEntails:
    def test_atom_membership(self):
        assert entails(I("{a}"), A("a"))
        assert not entails(I("{a}"), A("b"))

    def test_atom_set_inclusion(self):
        assert entails(I("{a, b}"), I("{a}"))
        assert not entails(I("{a}"), I("{a, b}"))

    def test_rule_vacuous_when_body_unsatisfied(self):
        assert entails(I("{a}"), Rule(A("a"), {A("b")}))

    def test_rule_fails_when_head_missing(self):
        assert not entails(I("{a, b}"), Rule(A("c"), {A("a"), A("b")}))

    def test_program_rule_by_rule(self):
        assert entails(I("{a, b}"), P("a. b :- a."))
        assert not entails(I("{a}"), P("a. b :- a."))


class TestTp:
    def test_facts_always_fire(self):
        assert tp(P("a. b :- a."), I("{}")) == I("{a}")

    def test_one_step(self):
        assert tp(P("a. b :- a."), I("{a}")) == I("{a, b}")

    def test_empty_program(self):
        assert tp(Program(), I("{a, b}")) == frozenset()

    @given(programs(), interpretations())
    def test_agrees_with_composition(self, p, i):
        assert facts_program(tp(p, i)) == compose(p, facts_program(i))

    @given(programs(), interpretations(), interpretations())
    def test_monotone(self, p, i, j):
        assert tp(p, i & j) <= tp(p, i | j)


class TestIsModel:
    def test_positive(self):
        assert is_model(P("a. b :- a."), I("{a, b}"))

    def test_missing_fact(self):
        assert not is_model(P("a."), I("{}"))

    def test_missing_head(self):
        assert not is_model(P("a :- b."), I("{b}"))

    def test_models_are_prefixed_points_exhaustively(self, ab, programs_ab):
        subsets = [I("{}"), I("{a}"), I("{b}"), I("{a, b}")]
        for p in programs_ab:
            for i in subsets:
                assert entails(i, p) == (tp(p, i) <= i) == is_model(p, i)


class TestLeastModel:
    def test_trace(self, ab):
        lm, trace = least_model(P("a. b :- a."), ab)
        assert lm == I("{a, b}")
        assert trace.stages == (I("{}"), I("{a}"), I("{a, b}"), I("{a, b}"))
        assert trace.converged_at == 2

    def test_empty_program(self):
        lm, trace = least_model(Program(), Alphabet(["a"]))
        assert lm == frozenset() and trace.converged_at == 0

    def test_self_loop_has_empty_least_model(self):
        assert least_model(P("a :- a."), Alphabet(["a"]))[0] == frozenset()

    def test_alphabet_coverage_enforced(self, ab):
        with pytest.raises(AlphabetError):
            least_model(P("z."), ab)

    @given(programs())
    def test_matches_subset_minimum_of_all_models(self, p):
        atoms = [A("a"), A("b"), A("c")]
        assert least_model(p, Alphabet(atoms))[0] == naive_least_model(p, atoms)

    @given(programs())
    def test_trace_is_an_increasing_chain(self, p):
        a = Alphabet(["a", "b", "c"])
        _, trace = least_model(p, a)
        for lo, hi in zip(trace.stages, trace.stages[1:]):
            assert lo <= hi
        assert trace.converged_at <= len(a)


class TestEnumerateModels:
    def test_supported_models_of_self_loop(self):
        out = enumerate_models(P("a :- a."), Alphabet(["a"]), "supported")
        assert out == frozenset({I("{}"), I("{a}")})

    def test_everything_models_the_empty_program(self):
        out = enumerate_models(Program(), Alphabet(["a"]), "all")
        assert out == frozenset({I("{}"), I("{a}")})

    def test_single_fact(self):
        out = enumerate_models(P("a."), Alphabet(["a"]), "all")
        assert out == frozenset({I("{a}")})

    def test_cap(self, abc):
        with pytest.raises(BoundExceededError):
            enumerate_models(Program(), abc, "all", cap=2)

    def test_rejects_unknown_kind(self, ab):
        with pytest.raises(ValueError):
            enumerate_models(Program(), ab, "most")

    @given(programs(("a", "b")))
    def test_matches_definition_level_oracle(self, p):
        atoms = [A("a"), A("b")]
        assert enumerate_models(p, Alphabet(atoms), "all") == frozenset(
            naive_models(p, atoms)
        )

    @settings(max_examples=50)
    @given(programs())
    def test_least_model_is_subset_minimum(self, p):
        a = Alphabet(["a", "b", "c"])
        lm = least_model(p, a)[0]
        models = enumerate_models(p, a, "all")
        assert lm in models
        assert all(lm <= m for m in models)

    @settings(max_examples=50)
    @given(programs())
    def test_supported_models_are_fixed_points(self, p):
        a = Alphabet(["a", "b", "c"])
        for i in enumerate_models(p, a, "supported"):
            assert tp(p, i) == i


class TestSubsumptionEquivalence:
    def test_redundant_rule(self, ab):
        assert subsumption_equivalent(P("a."), P("a. a :- b."), ab)

    def test_reflexive(self, ab):
        p = P("a :- b.")
        assert subsumption_equivalent(p, p, ab)

    def test_fact_vs_empty(self):
        assert not subsumption_equivalent(P("a."), Program(), Alphabet(["a"]))

    def test_cap(self, abc):
        with pytest.raises(BoundExceededError):
            subsumption_equivalent(Program(), Program(), abc, cap=1)
