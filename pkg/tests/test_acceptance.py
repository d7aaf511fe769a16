"""Acceptance criteria AC-1 .. AC-10.

Each test records a status line through the ``acceptance`` fixture; the lines
are printed in the terminal summary. Parts that cannot hold for mathematical
reasons are strict xfails, so they fail loudly if the behaviour ever changes.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from wordmaps.catalog import named
from wordmaps.cli import fix_rows
from wordmaps.errors import ContractError
from wordmaps.groups import center, derived_length, derived_series, derived_subgroup, is_solvable, whole
from wordmaps.probability import decomposition_check, reduction_check, word_probability
from wordmaps.psl2 import ad_image_size, fixed_points, outer_coset_reps, psl2
from wordmaps.solvable import (analyze, derive_operators, gamma_bound, gamma_recursion_check,
                               reduce_to_minimal_verbal, verbal_subgroup)
from wordmaps.vsmb import check_word
from wordmaps.words import named_word

COMM, ENGEL, METAB = named_word("comm"), named_word("engel2"), named_word("metab")
SMALL = ["psl2:2", "sz:2", "psl2:3"]


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _maximum(groups, w):
    vals = {G.name: word_probability(G, w).value for G in groups}
    vals = {k: v for k, v in vals.items() if v != 1}
    top = max(vals.values())
    return top, sorted(k for k, v in vals.items() if v == top), len(vals)


@pytest.fixture(scope="module")
def solvable100(corpus100):
    return [G for G in corpus100 if is_solvable(G)]


# -- AC-1 ---------------------------------------------------------------------------

def test_ac1_dihedral8_commuting_probability(acceptance):
    G = named("dihedral:8")
    word_probability(G, COMM)  # warm-up: compiles the kernel
    t = time.perf_counter()
    p = word_probability(named("dihedral:8"), COMM, 0)
    dt = time.perf_counter() - t
    ok = p.value == Fraction(5, 8) and dt < 1.0
    acceptance("AC-1", ok, f"P(D8, comm) = {p} in {dt * 1000:.1f} ms")
    assert p.value == Fraction(5, 8)
    assert dt < 1.0


# -- AC-2 ---------------------------------------------------------------------------

def test_ac2_commuting_gap(corpus100, acceptance):
    groups = [G for G in corpus100 if not G.is_abelian]
    top, where, n = _maximum(groups, COMM)
    acceptance("AC-2", top <= Fraction(5, 8),
               f"max over {n} nonabelian groups = {_fmt(top)}, attained by {len(where)} groups")
    assert top == Fraction(5, 8)


# -- AC-3 ---------------------------------------------------------------------------

def test_ac3_dihedral16(acceptance):
    p = word_probability(named("dihedral:16"), ENGEL).value
    acceptance("AC-3", p == Fraction(3, 4), f"P(D16, engel2) = {_fmt(p)}")
    assert p == Fraction(3, 4)


@pytest.mark.xfail(strict=True, reason="two 2-groups of order 64 reach 13/16; see decisions ledger")
def test_ac3_solvable_engel_bound(solvable100, acceptance):
    top, where, n = _maximum(solvable100, ENGEL)
    at_34 = sum(1 for G in solvable100 if word_probability(G, ENGEL).value == Fraction(3, 4))
    acceptance("AC-3", top <= Fraction(3, 4),
               f"max over {n} non-2-Engel solvable groups = {_fmt(top)} at {', '.join(where)} "
               f"(known counterexample; 3/4 attained by {at_34} groups)")
    assert top <= Fraction(3, 4)


# -- AC-4 ---------------------------------------------------------------------------

@pytest.mark.slow
def test_ac4_metabelian_gap(solvable100, acceptance):
    groups = [G for G in solvable100 if derived_length(G) > 2]
    top, where, n = _maximum(groups, METAB)
    acceptance("AC-4", top <= Fraction(29, 32),
               f"max over {n} non-metabelian solvable groups = {_fmt(top)} at {where[0]} "
               f"and {len(where) - 1} others; bound 29/32")
    assert n == len(groups) == 42
    assert top <= Fraction(29, 32)


# -- AC-5 ---------------------------------------------------------------------------

def test_ac5_long_commutators(acceptance):
    d8 = gamma_recursion_check(named("dihedral:8"), 2)
    assert d8.ok
    p2 = d8.probabilities[2].value
    best, arg = Fraction(0), []
    for order in range(4, 65, 2):
        try:
            rep = gamma_recursion_check(named(f"dihedral:{order}"), 3)
        except ContractError:
            continue  # gamma_3 is an identity of this group
        assert rep.ok, rep.to_dict()
        v = rep.probabilities[3].value
        if v > best:
            best, arg = v, [order]
        elif v == best:
            arg.append(order)
    ok = p2 == Fraction(5, 8) and best == gamma_bound(3) == Fraction(13, 16)
    acceptance("AC-5", ok, f"P(D8, gamma_2) = {_fmt(p2)}; max P(gamma_3) over dihedral "
                           f"orders <= 64 = {_fmt(best)} at orders {arg}")
    assert ok


# -- AC-6 ---------------------------------------------------------------------------

def test_ac6_ad_identity(acceptance):
    checked = 0
    for q in (3, 5, 9):
        n = psl2(q).group.order
        for a in outer_coset_reps(q):
            assert ad_image_size(a) * fixed_points(a) == n, (q, a)
            checked += 1
    acceptance("AC-6", True, f"|im ad| * |Fix| = |S| for {checked} automorphisms, q in (3, 5, 9)")


# -- AC-7 ---------------------------------------------------------------------------

def test_ac7_fixed_point_report(acceptance):
    rows = [r for r in fix_rows(9) if (r["alpha_i"], r["alpha_j"]) != (0, 0)]
    assert len(rows) == 15
    for r in rows:
        assert r["within_bound"] in ("true", "false")
        assert (r["within_bound"] == "true") == (r["fix_count"] <= 12)
    over = [(r["alpha_i"], r["alpha_j"], r["fix_count"]) for r in rows if r["within_bound"] == "false"]
    acceptance("AC-7", True, f"{len(rows)} nontrivial alpha reported; {len(over)} exceed 12 "
                             f"(finding: sigma D^j, j even, has |Fix| = 24): {over}")


# -- AC-8 ---------------------------------------------------------------------------

def test_ac8_engel_small_groups(acceptance):
    rep = check_word(ENGEL, SMALL)
    s = rep.summary
    acceptance("AC-8", s["constant"] == 0 and s["unknown"] == 0,
               f"engel2 on {SMALL}: {len(rep.instances)} instances, "
               f"Constant {s['constant']}, Unknown {s['unknown']}")
    assert s["constant"] == 0 and s["unknown"] == 0


@pytest.mark.slow
@pytest.mark.parametrize("word", ["engel2", "metab"])
def test_ac8_psl2_9(word, acceptance):
    rep = check_word(named_word(word), ["psl2:9"])
    s = rep.summary
    acceptance("AC-8", s["constant"] == 0,
               f"{word} on psl2:9: {len(rep.instances)} instances, "
               f"Constant {s['constant']}, Unknown {s['unknown']}")
    assert s["constant"] == 0


@pytest.mark.xfail(strict=True, reason="the metabelian word is an identity of these solvable groups")
def test_ac8_metab_small_groups(acceptance):
    rep = check_word(METAB, SMALL)
    s = rep.summary
    acceptance("AC-8", s["constant"] == 0,
               f"metab on {SMALL}: Constant {s['constant']} of {len(rep.instances)}, "
               f"Unknown {s['unknown']} (all three groups are metabelian)")
    assert s["unknown"] == 0
    assert s["constant"] == 0


# -- AC-9 ---------------------------------------------------------------------------

def _normal(G, kind):
    if kind == "derived":
        return derived_subgroup(G)
    if kind == "derived2":
        return derived_series(G)[2]
    if kind == "center":
        return center(G)
    return whole(G)


AC9_CASES = [
    ("sym:3", "derived", "comm"), ("sym:3", "derived", "engel2"), ("sym:4", "derived", "comm"),
    ("sym:4", "derived2", "comm"), ("sym:4", "derived2", "engel2"), ("sym:4", "derived", "metab"),
    ("alt:4", "derived", "comm"), ("alt:4", "derived", "power:2"), ("dihedral:8", "center", "comm"),
    ("dihedral:8", "derived", "engel2"), ("dihedral:16", "center", "engel2"),
    ("dihedral:16", "derived", "gammaR:3"), ("quaternion:8", "center", "comm"),
    ("dihedral:12", "derived", "power:3"), ("product:sym:3,cyclic:3", "derived", "comm"),
    ("product:sym:3,cyclic:4", "center", "engel2"), ("alt:5", "whole", "comm"),
    ("alt:5", "whole", "power:2"), ("sym:5", "derived", "comm"), ("sym:5", "derived", "power:2"),
    ("product:alt:5,sym:3", "derived2", "comm"), ("product:alt:5,sym:3", "derived2", "power:2"),
    ("product:alt:5,cyclic:2", "derived", "engel2"), ("psl2:7", "whole", "comm"),
    ("product:alt:4,cyclic:2", "derived", "metab"),
]


def test_ac9_reduction_and_decomposition(acceptance):
    assert len(AC9_CASES) == 25
    solvable = 0
    for spec, kind, word in AC9_CASES:
        G = named(spec)
        N = _normal(G, kind)
        assert N.is_normal and N.order > 1
        w = named_word(word)
        red = reduction_check(G, N, w)
        dec = decomposition_check(G, N, w)
        assert red.holds and red.in_group.value <= red.in_quotient.value, (spec, kind, word)
        assert dec.holds and dec.indicator_ok, (spec, kind, word)
        solvable += is_solvable(G)
    G = named("product:alt:5,sym:3")
    assert _normal(G, "derived2").order == 60
    acceptance("AC-9", True, f"25 cases ({solvable} solvable, {25 - solvable} nonsolvable, "
                             f"incl. A5 x S3 with N = A5)")


# -- AC-10 --------------------------------------------------------------------------

def _axioms(G) -> bool:
    T = G.table
    n = G.order
    ar = np.arange(n)
    if not (np.array_equal(T[0], ar) and np.array_equal(T[:, 0], ar)):
        return False
    if not all(np.array_equal(np.sort(row), ar) for row in T):
        return False
    if not (T[ar, G.inverse] == 0).all():
        return False
    # (ab)c == a(bc) for all triples
    return bool((T[T] == T[ar[:, None, None], T[None]]).all())


@pytest.mark.slow
def test_ac10_property_suites(corpus100, solvable100, acceptance):
    assert all(_axioms(G) for G in corpus100)
    rng = np.random.default_rng(0)
    counted = 0
    for w in (ENGEL, METAB):
        for G in solvable100:
            if verbal_subgroup(G, w).is_trivial:
                continue  # w is an identity of G
            rep = analyze(G, w)
            failed = [k for k, v in rep.checks.items() if not v]
            assert not failed, (G.name, w.name, failed)
            ctx = reduce_to_minimal_verbal(G, w)
            derive_operators(ctx, [int(x) for x in rng.choice(ctx.reps, size=w.arity)], samples=50)
            counted += 1
    acceptance("AC-10", True, f"axioms on {len(corpus100)} groups; operator linearity, expansion laws, "
                              f"closure of Y and S, fiber bound on {counted} (group, word) contexts")
