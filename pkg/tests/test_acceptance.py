"""Acceptance suite.

Each test covers one acceptance criterion at its stated scale and prints a
single PASS line (visible with ``pytest -s``).  Exhaustive two-atom sweeps
run on the dense composition table only after that table has been
cross-checked entry-by-entry against the symbolic composition, so the fast
path never silently replaces the reference semantics.
"""

import random
import time

import numpy as np
import pytest

from hornseq.algebra import (
    build_ominus,
    build_oplus,
    compose,
    left_reduct,
    omega,
    partial_unit,
    plus,
    power_trace,
    right_reduct,
    star,
    unit,
)
from hornseq.dense import DenseSpace
from hornseq.green import (
    check_le_l_against_oracle,
    check_le_r_against_oracle,
    equiv,
    find_nonassociative_triple,
    green_partition,
    le_j,
    le_l,
    le_r,
    oracle_le,
)
from hornseq.semantics import least_model, tp
from hornseq.syntax import (
    Alphabet,
    Atom,
    Program,
    Rule,
    facts_program,
    parse_interpretation,
    parse_program,
    render_program,
)

from .conftest import random_interpretation, random_program

P = parse_program
I = parse_interpretation

AB = Alphabet(["a", "b"])
ABC = Alphabet(["a", "b", "c"])
ABCD = Alphabet(["a", "b", "c", "d"])

PI_SWAP = P("a :- b. b :- a.")


def _report(name: str, detail: str) -> None:
    print(f"ACCEPTANCE {name}: PASS - {detail}")


@pytest.fixture(scope="module")
def verified_table(programs_ab):
    """Dense composition table, validated against symbolic composition on
    every one of the 65,536 ordered pairs before any law sweep uses it."""
    space = DenseSpace(AB)
    table = space.table()
    masks = [space.encode(p) for p in programs_ab]
    for pm, p in zip(masks, programs_ab):
        row = table[pm]
        for rm, r in zip(masks, programs_ab):
            assert int(row[rm]) == space.encode(compose(p, r)), (
                f"dense/symbolic mismatch at {p!r} o {r!r}"
            )
    return space, table


class TestC1LawSuite:
    def test_exhaustive_two_atom_laws(self, verified_table, programs_ab):
        started = time.perf_counter()
        space, table = verified_table
        ids = np.arange(256, dtype=np.int64)
        t = table.astype(np.int64)

        # identity: P o 1 = 1 o P = P
        u = space.encode(unit(AB))
        assert np.array_equal(t[:, u], ids)
        assert np.array_equal(t[u, :], ids)
        # left zero: {} o P = {}
        assert not t[0, :].any()

        # facts absorb right composition: I o P = I
        interp_sets = [I("{}"), I("{a}"), I("{b}"), I("{a, b}")]
        fact_masks = [space.encode(facts_program(s)) for s in interp_sets]
        for fm in fact_masks:
            assert np.array_equal(t[fm, :], np.full(256, fm))

        # right distributivity over all 16.7M ordered triples
        union = np.bitwise_or.outer(ids, ids)
        lhs = t[union, :]
        rhs = t[:, None, :] | t[None, :, :]
        assert np.array_equal(lhs, rhs)

        # head/body containment under composition, all pairs
        heads = np.zeros(256, dtype=np.int64)
        bodies = np.zeros(256, dtype=np.int64)
        for m, p in enumerate(programs_ab):
            pm = space.encode(p)
            heads[pm] = space.encode_interp(p.heads)
            bodies[pm] = space.encode_interp(p.bodies)
        assert not (heads[t] & ~heads[:, None]).any()
        assert not (bodies[t] & ~bodies[None, :]).any()

        # consequence operator is right composition with an interpretation
        for s, fm in zip(interp_sets, fact_masks):
            for pm, p in zip((space.encode(q) for q in programs_ab), programs_ab):
                assert int(t[pm, fm]) == space.encode(facts_program(tp(p, s)))

        elapsed = time.perf_counter() - started
        assert elapsed < 60.0, f"law suite took {elapsed:.1f}s"
        _report(
            "C1",
            "identity/zero/absorption/distributivity/containment/operator laws, "
            f"256 programs, 65536 pairs, 16.7M triples, 0 violations ({elapsed:.1f}s)",
        )


class TestC2LeastModelOmega:
    def test_exhaustive_two_atoms_and_random_four_atoms(self, programs_ab):
        started = time.perf_counter()
        for p in programs_ab:
            lm, trace = least_model(p, AB)
            assert omega(p, AB) == lm
            assert tp(p, lm) == lm  # fixpoint
            assert trace.stages[trace.converged_at] == lm

        space = DenseSpace(ABCD)
        rng = random.Random(424242)
        sample = [random_program(rng, list(ABCD), 6) for _ in range(10_000)]
        batch = np.array([space.encode(p) for p in sample], dtype=np.uint64)
        om = space.omega_batch(batch)  # power-cycle route
        lm = space.lm_batch(batch)  # operator-iteration route
        assert np.array_equal(om, lm)
        for k in rng.sample(range(len(sample)), 400):
            p = sample[k]
            expect = space.decode_interp(int(om[k]))
            assert omega(p, ABCD) == expect
            assert least_model(p, ABCD)[0] == expect

        elapsed = time.perf_counter() - started
        assert elapsed < 60.0, f"least-model sweep took {elapsed:.1f}s"
        _report(
            "C2",
            "LM = omega = T_P fixpoint on all 256 two-atom programs and "
            f"10000 random four-atom programs ({elapsed:.1f}s)",
        )


class TestC3Counterexamples:
    def test_left_distributivity_failure_bit_exact(self):
        p = P("a :- b, c.")
        assert compose(p, P("b.") | P("c.")) == P("a.")
        assert compose(p, P("b.")) == Program()
        assert compose(p, P("c.")) == Program()

    def test_strict_r_order_of_swap_program(self):
        r = P("a :- b. b :- b.")
        w = le_r(r, PI_SWAP)
        assert w.holds and w.verify(r, PI_SWAP)
        assert compose(PI_SWAP, r) == r  # the swap image itself certifies the suffix
        assert not le_r(PI_SWAP, r).holds
        assert not oracle_le("r", PI_SWAP, r, AB)  # exhaustive confirmation

    def test_j_equivalence_is_orthogonal_to_logical_equivalence(self):
        # logically equivalent, not J-equivalent
        a1 = Alphabet(["a"])
        assert least_model(Program(), a1)[0] == least_model(P("a :- a."), a1)[0]
        assert not le_j(P("a :- a."), Program(), a1).holds
        # J-equivalent, not logically equivalent
        e1, e2 = P("a. b :- a."), P("a. b :- a, b.")
        assert compose(e2, build_ominus(I("{b}"), AB)) == e1
        assert compose(e1, build_oplus(I("{b}"), AB)) == e2
        assert equiv("j", e1, e2, AB)
        assert least_model(e1, AB)[0] != least_model(e2, AB)[0]
        _report("C3", "both composition counterexamples reproduce bit-exactly")


class TestC4CanonicalPrefixAgreement:
    def test_le_l_agrees_with_oracle_on_all_pairs(self):
        started = time.perf_counter()
        discrepancies = check_le_l_against_oracle(AB)
        elapsed = time.perf_counter() - started
        assert discrepancies == [], "\n".join(d.describe() for d in discrepancies)
        _report(
            "C4",
            f"canonical-prefix decision = oracle on all 65536 pairs ({elapsed:.1f}s)",
        )


class TestC5SuffixSearchAgreement:
    def test_le_r_agrees_with_oracle_on_all_pairs(self):
        started = time.perf_counter()
        discrepancies = check_le_r_against_oracle(AB)
        elapsed = time.perf_counter() - started
        assert discrepancies == [], "\n".join(d.describe() for d in discrepancies)
        assert elapsed < 600.0, f"suffix sweep took {elapsed:.1f}s"
        _report(
            "C5",
            f"restricted suffix search = oracle on all 65536 pairs ({elapsed:.1f}s)",
        )


class TestC6WorkedThreeAtomEquivalence:
    def test_closed_form_witnesses_and_search_agree(self):
        p = P("c. a :- b, c. b :- a, c.")
        # closed-form pair, one direction: star of {c} and the insertion gadget
        q1 = star(P("c."), ABC)
        s1 = build_oplus(I("{c}"), ABC) - partial_unit(I("{c}"))
        assert compose(compose(q1, PI_SWAP), s1) == p
        # other direction: partial unit and the deletion gadget
        q2 = partial_unit(I("{a, b}"))
        s2 = build_ominus(I("{c}"), ABC)
        assert compose(compose(q2, p), s2) == PI_SWAP
        # the decision procedure finds its own verified witnesses
        w1 = le_j(p, PI_SWAP, ABC)
        assert w1.holds and w1.verify(p, PI_SWAP)
        assert compose(compose(w1.prefix, PI_SWAP), w1.suffix) == p
        w2 = le_j(PI_SWAP, p, ABC)
        assert w2.holds and w2.verify(PI_SWAP, p)
        assert compose(compose(w2.prefix, p), w2.suffix) == PI_SWAP
        _report(
            "C6",
            "three-atom J-equivalence reproduced with closed-form and searched witnesses",
        )


class TestC7RelationChains:
    def test_equation_witnesses_hold_on_random_pairs(self):
        started = time.perf_counter()
        rng = random.Random(987654)
        alphabets = [AB, ABC, ABCD]
        checked = 0
        for _ in range(1_000):
            a = rng.choice(alphabets)
            atoms = list(a)
            p = random_program(rng, atoms, 6)
            i = random_interpretation(rng, atoms)
            fi = facts_program(i)

            # prefix witnesses
            plus_indep = Program()
            for q in power_trace(p, a).powers:
                plus_indep = plus_indep | q
            assert compose(star(p, a), p) == plus_indep  # P^+ <=L P via P^*
            assert compose(unit(a) | fi, p) == p | fi  # P u I <=L P via I^*
            assert compose(partial_unit(i), p) == left_reduct(i, p)  # ^IP <=L P

            # suffix witnesses
            assert compose(p, Program()) == p.facts  # f(P) <=R P via {}
            om = facts_program(omega(p, a))
            assert compose(p, om) == om  # P^omega <=R P via its own facts
            assert compose(p, partial_unit(i)) == right_reduct(p, i)  # P^I <=R P
            oplus = build_oplus(i, a)
            assert compose(p, oplus) == p.facts | Program(
                Rule(q.head, q.body | i) for q in p.proper.rules
            )
            ominus = build_ominus(i, a)
            assert compose(p, ominus) == Program(
                Rule(q.head, q.body - i) for q in p.rules
            )
            assert compose(p, fi) == facts_program(tp(p, i))  # T_P(I) <=R P
            checked += 1
        elapsed = time.perf_counter() - started
        assert checked >= 1_000
        _report(
            "C7",
            f"9 relation chains verified by composition on {checked} random "
            f"(P, I) pairs over 2-4 atoms ({elapsed:.1f}s)",
        )


class TestC8NonAssociativity:
    def test_witness_within_budget(self):
        started = time.perf_counter()
        triple = find_nonassociative_triple(AB)
        elapsed = time.perf_counter() - started
        assert triple is not None
        x, y, z = triple
        left = compose(compose(x, y), z)
        right = compose(x, compose(y, z))
        assert left != right
        assert elapsed < 60.0, f"scan took {elapsed:.1f}s"
        _report(
            "C8",
            f"verified non-associative triple found in {elapsed:.2f}s",
        )


class TestC9StructuralFacts:
    def test_interpretation_classes_and_characterizations(self, programs_ab):
        interps = [Program(), P("a."), P("b."), P("a. b.")]
        report_l = green_partition(interps, "l", AB)
        assert len(report_l.classes) == 1
        report_r = green_partition(interps, "r", AB)
        assert len(report_r.classes) == 4
        assert all(len(c) == 1 for c in report_r.classes)

        for fi in interps:
            for p in programs_ab:
                assert le_l(p, fi).holds == p.is_interpretation
                assert le_r(p, fi, AB).holds == (p == fi)
        _report(
            "C9",
            "interpretations: one L-class, four singleton R-classes; "
            "P <=L I iff P is an interpretation; P <=R I iff P = I (all 256 x 4)",
        )


class TestC10RoundTripAndDeterminism:
    def test_parse_render_identity_on_all_two_atom_programs(self, programs_ab):
        for p in programs_ab:
            assert parse_program(render_program(p)) == p

    def test_cli_reruns_are_byte_identical(self, capsys):
        from hornseq.cli import run

        commands = [
            ["star", "a. b :- a."],
            ["equiv", "j", "c. a :- b, c. b :- a, c.", "a :- b. b :- a."],
            ["classes", "--relation", "r", "--enumerate", "--alphabet", "a"],
            ["nonassoc", "--json"],
            ["lm", "a. b :- a, c. c :- a.", "--json"],
        ]
        for argv in commands:
            outputs = []
            for _ in range(2):
                code = run(argv)
                captured = capsys.readouterr()
                outputs.append((code, captured.out.encode(), captured.err.encode()))
            assert outputs[0] == outputs[1], f"non-deterministic output for {argv}"
        _report(
            "C10",
            "parse/render identity on all 256 canonical programs; "
            "CLI reruns byte-identical",
        )
