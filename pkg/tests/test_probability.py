from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle
from wordmaps.catalog import named
from wordmaps.errors import ContractError, ResourceLimitError
from wordmaps.groups import center, conjugacy_classes, derived_subgroup, normal_closure, whole, trivial
from wordmaps.probability import (ExactProbability, coset_probability, decomposition_check, hoeffding_radius,
                                  reduction_check, sample_probability, value_counts, word_histogram,
                                  word_probability)
from wordmaps.words import evaluate, named_word, parse

# Frozen from the brute-force oracle in tests/oracle.py.
ORACLE_VALUES = [
    ("dihedral:8", "comm", Fraction(5, 8)),
    ("quaternion:8", "comm", Fraction(5, 8)),
    ("sym:3", "comm", Fraction(1, 2)),
    ("sym:4", "comm", Fraction(5, 24)),
    ("alt:4", "comm", Fraction(1, 3)),
    ("dihedral:16", "comm", Fraction(7, 16)),
    ("alt:5", "comm", Fraction(1, 12)),
    ("dihedral:16", "engel2", Fraction(3, 4)),
    ("sym:3", "engel2", Fraction(2, 3)),
    ("sym:4", "engel2", Fraction(5, 12)),
    ("dihedral:12", "engel2", Fraction(2, 3)),
    ("dihedral:32", "engel2", Fraction(5, 8)),
    ("dihedral:16", "gammaR:3", Fraction(13, 16)),
    ("dihedral:32", "gammaR:3", Fraction(23, 32)),
    ("dihedral:24", "gammaR:3", Fraction(3, 4)),
    ("sym:4", "metab", Fraction(25, 48)),
]


@pytest.mark.parametrize("spec,word,value", ORACLE_VALUES)
def test_frozen_oracle_values(spec, word, value):
    assert word_probability(named(spec), named_word(word)).value == value


@pytest.mark.parametrize("spec", ["sym:3", "dihedral:10", "product:sym:3,cyclic:2", "alt:4"])
def test_live_oracle(spec):
    G = named(spec)
    elems = [tuple(p) for p in G.perms.tolist()]
    for word in ("engel2", "[x1,x2,x1]", "x1 x2 x1 x2'", "power:2"):
        w = parse(word)
        assert word_probability(G, w).value == oracle.word_probability(elems, w.letters, w.arity)


def test_commuting_probability_is_class_ratio(corpus100):
    comm = named_word("comm")
    for G in corpus100[::7]:
        assert word_probability(G, comm).value == Fraction(len(conjugacy_classes(G)), G.order)


def test_histogram_total_and_identity_target():
    G = named("sym:4")
    hist = word_histogram(G, named_word("engel2"))
    assert hist.sum() == 24 ** 2
    assert word_probability(G, parse("1")).value == 1
    assert word_probability(named("cyclic:6"), named_word("comm")).value == 1


def test_targets_sum_to_one():
    G = named("dihedral:12")
    w = named_word("comm")
    assert sum(word_probability(G, w, g).value for g in range(G.order)) == 1


def test_threads_do_not_change_result():
    G = named("product:sym:3,cyclic:4")
    w = named_word("metab")
    a = value_counts(G, w, threads=1)
    b = value_counts(G, w, threads=3)
    assert np.array_equal(a, b)


def test_budget_refusal():
    with pytest.raises(ResourceLimitError) as exc:
        word_probability(named("sym:4"), named_word("metab"), budget=1000)
    assert exc.value.required == 24 ** 4 and exc.value.budget == 1000


def test_exact_probability_validation():
    with pytest.raises(ValueError):
        ExactProbability(5, 4)
    p = ExactProbability(40, 64)
    assert p.reduced == (5, 8) and str(p) == "5/8"
    assert p.to_dict()["float"] == 0.625


def test_coset_probability_oracle():
    G = named("sym:4")
    N = derived_subgroup(G)
    w = named_word("comm")
    reps = [0, 1]
    nel = N.elements.tolist()
    hits = sum(1 for a in nel for b in nel
               if evaluate(w, G, [G.mul(a, reps[0]), G.mul(b, reps[1])]) == 0)
    assert coset_probability(G, N, w, reps).hits == hits
    with pytest.raises(ContractError):
        coset_probability(G, N, w, [0])


def test_reduction_and_decomposition_small():
    G = named("sym:4")
    for N in (derived_subgroup(G), center(G), whole(G)):
        if N.order == 1:
            continue
        assert reduction_check(G, N, named_word("comm")).holds
        assert decomposition_check(G, N, named_word("comm")).holds


def test_sampling_is_deterministic_and_close():
    G = named("dihedral:8")
    w = named_word("comm")
    a = sample_probability(G, w, samples=20000, seed=7)
    b = sample_probability(G, w, samples=20000, seed=7)
    assert a == b
    assert abs(a.estimate - 0.625) <= a.radius
    assert a.radius == pytest.approx(hoeffding_radius(20000))
    assert hoeffding_radius(10 ** 6) < hoeffding_radius(10 ** 4)


@given(st.sampled_from(["sym:4", "dihedral:12", "quaternion:8", "alt:4"]), st.data())
def test_hypothesis_reduction_inequality(spec, data):
    G = named(spec)
    g = data.draw(st.integers(1, G.order - 1))
    N = normal_closure(G, [g])
    w = data.draw(st.sampled_from([named_word("comm"), named_word("engel2"), parse("x1 x2 x1 x2")]))
    res = reduction_check(G, N, w)
    assert res.holds
    assert res.in_group.value <= res.in_quotient.value


@given(st.sampled_from(["sym:3", "dihedral:8", "alt:4"]), st.sampled_from(["comm", "engel2", "power:2"]))
def test_hypothesis_decomposition_identity(spec, word):
    G = named(spec)
    N = derived_subgroup(G) if not G.is_abelian else whole(G)
    if N.order == 1:
        N = whole(G)
    assert decomposition_check(G, N, named_word(word)).holds


def test_trivial_normal_subgroup_is_rejected_by_coset_path():
    G = named("sym:3")
    res = reduction_check(G, trivial(G), named_word("comm"))
    assert res.in_group == res.in_quotient
