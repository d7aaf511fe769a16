"""Bounding machinery for word probabilities in finite solvable groups.

The reduction replaces ``G`` by a quotient in which the verbal subgroup
``V = w(G)`` is the unique minimal normal subgroup, hence an elementary
abelian ``p``-group ``F_p^dim``.  On that quotient the tuples of coset
representatives split into BAD ones (all exponent operators vanish) and
GOOD ones, and the counts give exact rational upper bounds on
``P_{w=1}``.  Every inequality below is checked with :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ._kernels import coset_identity_mask
from .errors import ContractError, HypothesisError, InternalConsistencyError, ResourceLimitError
from .groups import (FiniteGroup, Subgroup, center, centralizer, commutator_subgroup,
                     coset_representatives, derived_series, derived_subgroup, is_solvable,
                     lower_central_series, minimal_normal_subgroups, quotient, subgroup_generated,
                     whole)
from .probability import DEFAULT_BUDGET, ExactProbability, letter_codes, word_histogram, \
    word_probability
from .words import Word, evaluate, named_word

LINEARITY_LIMIT = 256
EXPANSION_LIMIT = 256


# -- verbal subgroup and reduction -----------------------------------------------------

def verbal_subgroup(G: FiniteGroup, w: Word, budget: int = DEFAULT_BUDGET) -> Subgroup:
    """``w(G)``, the subgroup generated by all values of ``w``."""
    if w.name == "comm":
        return derived_subgroup(G)
    if w.name == "metab":
        series = derived_series(G)
        return series[2] if len(series) > 2 else series[-1]
    hist = word_histogram(G, w, budget=budget)
    return subgroup_generated(G, np.flatnonzero(hist))


@dataclass(eq=False)
class VerbalContext:
    """``G`` (already reduced) with ``V = w(G)`` and an ``F_p`` basis of ``V``.

    ``coords[g]`` holds the coordinate vector of ``g`` in ``V`` (``-1`` rows
    outside ``V``); ``from_code[sum c_k p^k]`` is the element with
    coordinates ``c``.
    """

    group: FiniteGroup
    word: Word
    V: Subgroup
    minimal: bool
    p: int | None
    dim: int | None
    reps: np.ndarray
    source: FiniteGroup
    projection: np.ndarray
    steps: int = 0
    basis: list[int] = field(default_factory=list)
    coords: np.ndarray | None = None
    from_code: np.ndarray | None = None

    def vector(self, g: int) -> np.ndarray:
        return self.coords[g]

    def element(self, vec: Sequence[int]) -> int:
        code = 0
        for k, c in enumerate(vec):
            code += (int(c) % self.p) * self.p ** k
        return int(self.from_code[code])


def _elementary_abelian_basis(G: FiniteGroup, V: Subgroup) -> tuple[int, int, list[int], np.ndarray,
                                                                      np.ndarray] | None:
    els = V.elements
    if V.order == 1:
        return None
    orders = {G.element_order(int(x)) for x in els[1:]}
    if len(orders) != 1:
        return None
    p = orders.pop()
    if any(G.mul(int(a), int(b)) != G.mul(int(b), int(a)) for a in V.generators for b in V.generators):
        return None
    span = np.zeros(1, dtype=np.int64)
    codes = {0: 0}
    basis: list[int] = []
    for x in els[1:]:
        x = int(x)
        if x in codes:
            continue
        k = len(basis)
        basis.append(x)
        new = [int(s) for s in span]
        layer = span
        for c in range(1, p):
            layer = G.mul_arrays(layer, np.full(layer.size, x))
            for s, t in zip(span.tolist(), layer.tolist()):
                codes[t] = codes[s] + c * p ** k
            new.extend(layer.tolist())
        span = np.asarray(new, dtype=np.int64)
        if span.size == V.order:
            break
    dim = len(basis)
    coords = np.full((G.order, dim), -1, dtype=np.int64)
    from_code = np.zeros(p ** dim, dtype=np.int64)
    for g, code in codes.items():
        from_code[code] = g
        coords[g] = [(code // p ** k) % p for k in range(dim)]
    return p, dim, basis, coords, from_code


def _context(G: FiniteGroup, w: Word, V: Subgroup, source: FiniteGroup, proj: np.ndarray,
             steps: int) -> VerbalContext:
    mins = minimal_normal_subgroups(G)
    minimal = V in mins
    ctx = VerbalContext(G, w, V, minimal, None, None, coset_representatives(G, V), source, proj, steps)
    if minimal:
        info = _elementary_abelian_basis(G, V)
        if info is not None:
            ctx.p, ctx.dim, ctx.basis, ctx.coords, ctx.from_code = info
    return ctx


def reduce_to_minimal_verbal(G: FiniteGroup, w: Word, budget: int = DEFAULT_BUDGET) -> VerbalContext:
    """Quotient by minimal normal subgroups ``N`` with ``w(G/N) != 1`` until none is left.

    Among qualifying ``N`` the smallest is taken (ties by element list), so
    the result is deterministic.  Afterwards ``V`` lies in every minimal
    normal subgroup, so it is the unique one.
    """
    V = verbal_subgroup(G, w, budget)
    if V.is_trivial:
        raise ContractError(f"{w.name or w} is an identity in {G.name}")
    if not is_solvable(G):
        raise ContractError(f"{G.name} is not solvable")
    source = G
    proj = np.arange(G.order, dtype=np.int64)
    steps = 0
    while True:
        for N in minimal_normal_subgroups(G):
            if not V <= N:
                Q, p = quotient(G, N, name=f"{source.name}/~{steps + 1}")
                G, proj, steps = Q, p[proj], steps + 1
                V = verbal_subgroup(G, w, budget)
                break
        else:
            return _context(G, w, V, source, proj, steps)


# -- exponent operators -------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentOperator:
    """Matrix over ``F_p`` acting on column coordinate vectors of ``V``."""

    matrix: np.ndarray
    p: int

    @property
    def is_zero(self) -> bool:
        return not self.matrix.any()

    def __call__(self, vec: np.ndarray) -> np.ndarray:
        return (self.matrix @ np.asarray(vec)) % self.p


def _require_abelian_minimal(ctx: VerbalContext) -> None:
    if not ctx.minimal or ctx.p is None:
        raise ContractError("context does not have an elementary abelian minimal verbal subgroup")


def derive_operators(ctx: VerbalContext, reps: Sequence[int], seed: int = 0,
                     samples: int = 1000) -> tuple[list[ExponentOperator], int]:
    """Operators ``a -> w(.., a r_i, ..) w(r)^-1`` on ``V`` and the base value ``w(r)``.

    Linearity is checked on all of ``V`` when ``|V| <= 256``; the product
    formula is re-checked on ``samples`` random tuples in ``V^d``.
    """
    _require_abelian_minimal(ctx)
    G, w, p, dim = ctx.group, ctx.word, ctx.p, ctx.dim
    d = w.arity
    r = [int(x) for x in reps]
    if len(r) != d:
        raise ContractError(f"need {d} representatives")
    base = evaluate(w, G, r)
    base_inv = G.inv(base)

    def diff(i: int, a: int) -> int:
        args = list(r)
        args[i] = G.mul(a, r[i])
        return G.mul(evaluate(w, G, args), base_inv)

    ops = []
    for i in range(d):
        cols = []
        for b in ctx.basis:
            v = diff(i, b)
            if not ctx.V.mask[v]:
                raise InternalConsistencyError("difference map leaves V")
            cols.append(ctx.coords[v])
        ops.append(ExponentOperator(np.array(cols, dtype=np.int64).T.reshape(dim, dim) % p, p))
    if ctx.V.order <= LINEARITY_LIMIT:
        for i, op in enumerate(ops):
            for a in ctx.V.elements.tolist():
                if not np.array_equal(ctx.coords[diff(i, a)], op(ctx.coords[a])):
                    raise InternalConsistencyError(f"operator {i + 1} is not linear on V")
    rng = np.random.default_rng(seed)
    vel = ctx.V.elements
    for _ in range(samples if d else 0):
        a = rng.choice(vel, size=d)
        lhs = evaluate(w, G, [G.mul(int(x), y) for x, y in zip(a, r)])
        vec = sum((op(ctx.coords[int(x)]) for op, x in zip(ops, a)), np.zeros(dim, dtype=np.int64))
        if lhs != G.mul(ctx.element(vec), base):
            raise InternalConsistencyError("product formula for the exponent operators fails")
    return ops, base


def bad_mask(ctx: VerbalContext, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Flags over ``R^d`` (mixed radix, first variable most significant) of BAD tuples."""
    _require_abelian_minimal(ctx)
    G, w = ctx.group, ctx.word
    d = w.arity
    m = ctx.reps.size
    if m ** d * (1 + d * ctx.dim) > budget:
        raise ResourceLimitError(f"BAD enumeration needs {m ** d} tuples", required=m ** d, budget=budget)
    code, _ = letter_codes(w)
    table = np.ascontiguousarray(G.table, dtype=np.int32)
    inv = np.ascontiguousarray(G.inverse, dtype=np.int64)
    return coset_identity_mask(table, inv, code, d, ctx.reps.astype(np.int64),
                               np.asarray(ctx.basis, dtype=np.int64)).astype(bool)


# -- reports ------------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: Fraction
    rhs: Fraction
    relation: str = "<="

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs if self.relation == "<=" else self.lhs == self.rhs

    def to_dict(self) -> dict:
        return {"name": self.name, "relation": self.relation, "holds": self.holds,
                "lhs": [self.lhs.numerator, self.lhs.denominator],
                "rhs": [self.rhs.numerator, self.rhs.denominator]}


@dataclass
class BadnessReport:
    """Counts, exact bounds and boolean structural checks for one context."""

    group: str
    word: str
    branch: str
    p: int | None
    dim: int | None
    counts: dict[str, int] = field(default_factory=dict)
    bounds: list[BoundCheck] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)
    attained: ExactProbability | None = None
    original: ExactProbability | None = None

    def __post_init__(self):
        self._check_counts()

    def _check_counts(self) -> None:
        c = self.counts
        if {"BAD", "GOOD", "total"} <= c.keys() and c["BAD"] + c["GOOD"] != c["total"]:
            raise InternalConsistencyError("|BAD| + |GOOD| differs from the number of tuples")

    def add(self, name: str, lhs, rhs, relation: str = "<=") -> BoundCheck:
        b = BoundCheck(name, Fraction(lhs), Fraction(rhs), relation)
        self.bounds.append(b)
        return b

    @property
    def ok(self) -> bool:
        self._check_counts()
        return all(b.holds for b in self.bounds) and all(self.checks.values())

    def bound(self, name: str) -> BoundCheck:
        return next(b for b in self.bounds if b.name == name)

    def to_dict(self) -> dict:
        return {"group": self.group, "word": self.word, "branch": self.branch, "p": self.p,
                "dim": self.dim, "ok": self.ok, "counts": self.counts,
                "bounds": [b.to_dict() for b in self.bounds], "checks": self.checks,
                "attained": self.attained.to_dict() if self.attained else None,
                "original": self.original.to_dict() if self.original else None}


def _new_report(ctx: VerbalContext, branch: str) -> BadnessReport:
    rep = BadnessReport(ctx.group.name, ctx.word.name or str(ctx.word), branch, ctx.p, ctx.dim)
    rep.attained = word_probability(ctx.group, ctx.word)
    rep.original = word_probability(ctx.source, ctx.word)
    rep.add("P(G) <= P(reduced G)", rep.original.value, rep.attained.value)
    return rep


def _general_principle(rep: BadnessReport, bad: int, total: int, p: int) -> None:
    ratio = Fraction(bad, total)
    rep.add("P <= 1/p + (1 - 1/p) |BAD|/|R|^d", rep.attained.value,
            Fraction(1, p) + (1 - Fraction(1, p)) * ratio)
    rep.add("P <= (1 + |BAD|/|R|^d) / 2", rep.attained.value, (1 + ratio) / 2)


def badness_report(ctx: VerbalContext, budget: int = DEFAULT_BUDGET) -> BadnessReport:
    """BAD/GOOD split of ``R^d`` and the resulting probability bounds."""
    _require_abelian_minimal(ctx)
    mask = bad_mask(ctx, budget)
    rep = _new_report(ctx, "general")
    bad = int(mask.sum())
    rep.counts.update(BAD=bad, GOOD=mask.size - bad, total=mask.size)
    _general_principle(rep, bad, mask.size, ctx.p)
    return rep


# -- the 2-Engel word ---------------------------------------------------------------------

@dataclass(frozen=True)
class EngelPhi:
    """``phi_y(a) = [a, y, y]`` tabulated over ``G``."""

    group: FiniteGroup
    y: int
    values: np.ndarray
    expansion_checked: bool

    def __call__(self, a):
        return self.values[a]

    @property
    def is_trivial(self) -> bool:
        return not self.values.any()


def _engel_values(G: FiniteGroup, y: int) -> np.ndarray:
    ar = np.arange(G.order)
    return np.asarray(G.comm_arrays(G.comm_arrays(ar, y), y), dtype=np.int64)


def engel_expansion_holds(G: FiniteGroup, y: int) -> bool:
    """``phi_y(ab) = phi_y(a) phi_y(b) [a, y, b, y]`` for all ``a, b``."""
    phi = _engel_values(G, y)
    a = np.arange(G.order)[:, None]
    b = np.arange(G.order)[None, :]
    extra = G.comm_arrays(G.comm_arrays(G.comm_arrays(a, y), b), y)
    return bool(np.array_equal(phi[G.mul_arrays(a, b)],
                               G.mul_arrays(G.mul_arrays(phi[a], phi[b]), extra)))


def engel_phi(G: FiniteGroup, y: int, verify: bool = True) -> EngelPhi:
    """``phi_y``; with ``verify`` the expansion law is checked for ``|G| <= 256``.

    The law is not an identity of all groups (it fails in ``S4``); it holds
    in the reduced contexts where ``V`` is central.
    """
    checked = False
    if verify and G.order <= EXPANSION_LIMIT:
        if not engel_expansion_holds(G, y):
            raise InternalConsistencyError(f"expansion law for phi_y fails in {G.name} at y={y}")
        checked = True
    return EngelPhi(G, y, _engel_values(G, y), checked)


def fiber_bound_check(G: FiniteGroup, phi: np.ndarray | Callable, H: Subgroup) -> bool:
    """``|phi^-1(1)| <= |G|/2`` given ``phi(gh) = phi(g) phi(h)`` (``h in H``) and ``phi(H) != 1``.

    A failed hypothesis raises :class:`HypothesisError`; the return value is
    the conclusion.
    """
    vals = np.asarray(phi.values if isinstance(phi, EngelPhi) else
                      (phi(np.arange(G.order)) if callable(phi) else phi), dtype=np.int64)
    h = H.elements
    g = np.arange(G.order)[:, None]
    lhs = vals[G.mul_arrays(g, h[None, :])]
    rhs = G.mul_arrays(vals[g], vals[h][None, :])
    if not np.array_equal(lhs, rhs):
        raise HypothesisError("phi(gh) = phi(g) phi(h) fails for some g in G, h in H")
    if not vals[h].any():
        raise HypothesisError("phi is trivial on H")
    return 2 * int(np.count_nonzero(vals == 0)) <= G.order


def _sylow_preimage(G: FiniteGroup, C: Subgroup, p: int) -> np.ndarray:
    """Mask of ``y`` whose image in ``G/C`` has ``p``-power order (nilpotent ``G/C``)."""
    e, n = 1, G.order
    while n % p == 0:
        n //= p
        e *= p
    return C.mask[_power(G, np.arange(G.order), e)]


def _power(G: FiniteGroup, arr: np.ndarray, k: int) -> np.ndarray:
    acc = np.zeros_like(arr)
    x = arr
    while k:
        if k & 1:
            acc = G.mul_arrays(acc, x)
        x = G.mul_arrays(x, x)
        k >>= 1
    return acc


def engel_badness(ctx: VerbalContext, budget: int = DEFAULT_BUDGET) -> BadnessReport:
    """Badness analysis for the 2-Engel word on a reduced context."""
    _require_abelian_minimal(ctx)
    if ctx.word.letters != named_word("engel2").letters:
        raise ContractError("engel_badness needs the 2-Engel word")
    G, p = ctx.group, ctx.p
    C = centralizer(G, ctx.V)
    n = G.order
    if C.order != n:
        rep = _new_report(ctx, "nontrivial action")
        mask = bad_mask(ctx, budget).reshape(ctx.reps.size, ctx.reps.size)
        bad = int(mask.sum())
        rep.counts.update(BAD=bad, GOOD=mask.size - bad, total=mask.size, centralizer=C.order)
        ys = ctx.reps[np.flatnonzero(mask.any(axis=0))]
        rep.checks["y^p in C_G(V) for BAD"] = bool(C.mask[_power(G, ys, p)].all())
        P = _sylow_preimage(G, C, p)
        rep.checks["BAD inside R x P/V"] = bool(P[ys].all())
        rep.counts["P"] = int(P.sum())
        rep.add("|BAD|/|R|^2 <= 1/|G:P|", Fraction(bad, mask.size), Fraction(int(P.sum()), n))
        rep.add("1/|G:P| <= 1/2", Fraction(int(P.sum()), n), Fraction(1, 2))
        _general_principle(rep, bad, mask.size, p)
        return rep
    ar = np.arange(n)
    rep = _new_report(ctx, "central")
    comm = G.comm_arrays(ar[:, None], ar[None, :])
    nice = True
    for y in range(n):
        if G.comm_arrays(comm[G.comm_arrays(ar, y)], y).any():
            nice = False
            break
    rep.checks["expansion law"] = all(engel_expansion_holds(G, y) for y in range(n)) \
        if n <= EXPANSION_LIMIT else True
    Gp = derived_subgroup(G)
    H = whole(G) if nice else Gp
    phis = [_engel_values(G, y) for y in range(n)]
    bad_g = [y for y in range(n) if not phis[y].any()]
    bad = bad_g if nice else [y for y in range(n) if not phis[y][H.elements].any()]
    label = "BAD" if nice else "BAD'"
    rep.branch = "central, [G,y,G,y] = 1" if nice else "central, [G,y,G,y] != 1"
    rep.counts.update(BAD=len(bad_g), GOOD=n - len(bad_g), total=n)
    rep.counts[label] = len(bad)
    limit = Fraction(1, 2) if p == 2 else Fraction(2, 3)
    rep.add(f"|{label}|/|G| <= {limit}", Fraction(len(bad), n), limit)
    if p != 2:
        rep.add(f"|{label}|/|G| <= 2/p", Fraction(len(bad), n), Fraction(2, p))
    bad_set = set(bad)
    rep.checks["fiber bound on GOOD"] = all(
        fiber_bound_check(G, phis[y], H) for y in range(n) if y not in bad_set)
    rep.add("P <= (1 + |BAD|/|G|) / 2", rep.attained.value, (1 + Fraction(len(bad), n)) / 2)
    if p == 3:
        claim_left = nice
        claim_right = all(not phis[y][Gp.elements].any() for y in range(n))
        rep.checks["[G,y,G,y]=1 iff [G',y,y]=1"] = claim_left == claim_right
        if claim_left:
            series = lower_central_series(G)
            g3 = series[2] if len(series) > 2 else series[-1]
            rep.checks["gamma_3(G) <= V"] = g3 <= ctx.V
    return rep


# -- the metabelian word ------------------------------------------------------------------

def _commutator_counts(G: FiniteGroup, elems: np.ndarray | None = None) -> dict[int, int]:
    e = np.arange(G.order) if elems is None else np.asarray(elems)
    vals = G.comm_arrays(e[:, None], e[None, :]).ravel()
    keys, counts = np.unique(vals, return_counts=True)
    return dict(zip(keys.tolist(), counts.tolist()))


def metab_phi(G: FiniteGroup, y: int, c: int) -> np.ndarray:
    """``a -> [[a, y], c]`` where ``c = [z, t]``."""
    ar = np.arange(G.order)
    return np.asarray(G.comm_arrays(G.comm_arrays(ar, y), c), dtype=np.int64)


def metab_expansion_holds(G: FiniteGroup, y: int, c: int) -> bool:
    """``phi(ab) = phi(a) phi(b) [[a, y, b], c]`` for all ``a, b``."""
    phi = metab_phi(G, y, c)
    a = np.arange(G.order)[:, None]
    b = np.arange(G.order)[None, :]
    extra = G.comm_arrays(G.comm_arrays(G.comm_arrays(a, y), b), c)
    return bool(np.array_equal(phi[G.mul_arrays(a, b)],
                               G.mul_arrays(G.mul_arrays(phi[a], phi[b]), extra)))


def _is_closed(G: FiniteGroup, mask: np.ndarray) -> bool:
    els = np.flatnonzero(mask)
    return bool(mask[0] and mask[G.mul_arrays(els[:, None], els[None, :])].all())


def _commuting_fraction(G: FiniteGroup, N: Subgroup) -> Fraction:
    Q, _ = quotient(G, N)
    ar = np.arange(Q.order)
    hits = int(np.count_nonzero(Q.comm_arrays(ar[:, None], ar[None, :]) == 0))
    return Fraction(hits, Q.order ** 2)


def metab_badness(ctx: VerbalContext, budget: int = DEFAULT_BUDGET) -> BadnessReport:
    """Badness analysis for the metabelian word on a reduced context."""
    _require_abelian_minimal(ctx)
    if ctx.word.letters != named_word("metab").letters:
        raise ContractError("metab_badness needs the metabelian word")
    G = ctx.group
    n = G.order
    ar = np.arange(n)
    Gp = derived_subgroup(G)
    C = centralizer(G, ctx.V)
    if not Gp <= C:
        rep = _new_report(ctx, "nontrivial derived action")
        reps = ctx.reps
        m = reps.size
        mask = bad_mask(ctx, budget).reshape(m, m, m, m)
        bad = int(mask.sum())
        rep.counts.update(BAD=bad, GOOD=mask.size - bad, total=mask.size, centralizer=C.order)
        zt = G.comm_arrays(reps[:, None], reps[None, :])
        ugly = C.mask[zt]
        rep.counts["UGLY"] = int(ugly.sum())
        vel = ctx.V.elements
        closed = True
        proper = True
        inside = True
        ymask = {}
        for c in np.unique(zt).tolist():
            vals = G.comm_arrays(G.comm_arrays(vel[:, None], ar[None, :]), c)
            Y = ~vals.any(axis=0)
            ymask[c] = Y
            closed &= _is_closed(G, Y)
            if not C.mask[c]:
                proper &= not Y.all()
        for j, k, l in zip(*np.nonzero(mask.any(axis=0))):
            inside &= bool(ymask[int(zt[k, l])][reps[j]])
        rep.checks["Y_[z,t] closed"] = bool(closed)
        rep.checks["Y_[z,t] proper off UGLY"] = bool(proper)
        rep.checks["BAD inside R x {[V,y,[z,t]] = 1}"] = bool(inside)
        uratio = Fraction(rep.counts["UGLY"], m * m)
        rep.add("|BAD|/|R|^4 <= 1/2 + |UGLY|/(2|R|^2)", Fraction(bad, mask.size),
                Fraction(1, 2) + uratio / 2)
        cp = _commuting_fraction(G, C)
        rep.add("|UGLY|/|R|^2 = cp(G/C_G(V))", uratio, cp, "==")
        rep.add("|UGLY|/|R|^2 <= 5/8", uratio, Fraction(5, 8))
        _general_principle(rep, bad, mask.size, ctx.p)
        return rep
    rep = _new_report(ctx, "trivial derived action")
    counts = _commutator_counts(G)
    cgp = centralizer(G, Gp)
    nice_sub = commutator_subgroup(G, commutator_subgroup(G, Gp, whole(G)), Gp)
    nice = nice_sub.is_trivial
    rep.branch += ", [G',G,G'] = 1" if nice else ", [G',G,G'] != 1"
    gel = Gp.elements
    s_sizes, s_prime_sizes = {}, {}
    closed, full_iff_ugly, expansion, fibers = True, True, True, True
    for c in counts:
        vals = G.comm_arrays(G.comm_arrays(ar[:, None], ar[None, :]), c)
        S = ~vals.any(axis=0)
        Sp = ~vals[gel].any(axis=0)
        s_sizes[c], s_prime_sizes[c] = int(S.sum()), int(Sp.sum())
        closed &= _is_closed(G, S) and _is_closed(G, Sp)
        full_iff_ugly &= bool(S.all()) == bool(cgp.mask[c])
        if n <= EXPANSION_LIMIT:
            for y in range(n):
                expansion &= metab_expansion_holds(G, y, c)
        H = whole(G) if nice else Gp
        good = np.flatnonzero(~(S if nice else Sp))
        for y in good.tolist():
            fibers &= fiber_bound_check(G, metab_phi(G, y, c), H)
    rep.checks["S_{z,t} closed"] = bool(closed)
    rep.checks["S_{z,t} = G iff [z,t] in C_G(G')"] = bool(full_iff_ugly)
    rep.checks["expansion law"] = bool(expansion)
    rep.checks["fiber bound on GOOD"] = bool(fibers)
    total = n ** 3
    bad = sum(counts[c] * s_sizes[c] for c in counts)
    bad_p = sum(counts[c] * s_prime_sizes[c] for c in counts)
    ugly = sum(k for c, k in counts.items() if cgp.mask[c])
    rep.counts.update(BAD=bad, GOOD=total - bad, total=total, UGLY=ugly)
    rep.add("|BAD| <= |G|^3/2 + |G||UGLY|/2", bad, Fraction(total, 2) + Fraction(n * ugly, 2))
    rep.add("|UGLY|/|G|^2 = cp(G/C_G(G'))", Fraction(ugly, n * n), _commuting_fraction(G, cgp), "==")
    rep.add("|UGLY|/|G|^2 <= 5/8", Fraction(ugly, n * n), Fraction(5, 8))
    rep.add("|BAD|/|G|^3 <= 13/16", Fraction(bad, total), Fraction(13, 16))
    used = bad
    if not nice:
        cgg = centralizer(G, commutator_subgroup(G, Gp, whole(G)))
        ugly_p = sum(k for c, k in counts.items() if cgg.mask[c])
        rep.counts.update({"BAD'": bad_p, "UGLY'": ugly_p})
        rep.add("|BAD'|/|G|^3 <= 13/16", Fraction(bad_p, total), Fraction(13, 16))
        used = bad_p
    rep.add("P <= (1 + |BAD|/|G|^3) / 2", rep.attained.value, (1 + Fraction(used, total)) / 2)
    rep.add("P <= 29/32", rep.attained.value, Fraction(29, 32))
    return rep


# -- long commutators ---------------------------------------------------------------------

@dataclass
class GammaReport:
    group: str
    d: int
    probabilities: dict[int, ExactProbability]
    bounds: list[BoundCheck]

    @property
    def ok(self) -> bool:
        return all(b.holds for b in self.bounds)

    def to_dict(self) -> dict:
        return {"group": self.group, "d": self.d, "ok": self.ok,
                "probabilities": {str(k): v.to_dict() for k, v in self.probabilities.items()},
                "bounds": [b.to_dict() for b in self.bounds]}


def gamma_bound(d: int) -> Fraction:
    return 1 - Fraction(3, 2 ** (d + 1))


def gamma_recursion_check(G: FiniteGroup, d: int, budget: int = DEFAULT_BUDGET) -> GammaReport:
    """``P(gamma_k = 1) <= 1 - 3/2^(k+1)`` for ``k = 2..d`` (right-nested) and the BAD count.

    For each ``k`` the number of ``(g_2..g_k)`` with ``gamma_{k-1}(g_2..g_k)``
    central equals the count of solutions of ``gamma_{k-1} = 1`` in
    ``G/Z(G)`` times ``|Z(G)|^(k-1)``.
    """
    if d < 2:
        raise ContractError("d must be at least 2")
    w = named_word(f"gammaR:{d}")
    if word_probability(G, w, budget=budget).value == 1:
        raise ContractError(f"{G.name} satisfies gamma_{d}")
    Z = center(G)
    Q, _ = quotient(G, Z)
    probs: dict[int, ExactProbability] = {}
    bounds: list[BoundCheck] = []
    for k in range(2, d + 1):
        pk = word_probability(G, named_word(f"gammaR:{k}"), budget=budget)
        probs[k] = pk
        bounds.append(BoundCheck(f"P(gamma_{k} = 1) <= 1 - 3/2^{k + 1}", pk.value, gamma_bound(k)))
        inner = named_word(f"gammaR:{k - 1}") if k > 2 else None
        if inner is None:
            bad, bad_q = Z.order, 1
        else:
            hist = word_histogram(G, inner, budget=budget)
            bad = int(hist[Z.mask].sum())
            bad_q = int(word_histogram(Q, inner, budget=budget)[0])
        bounds.append(BoundCheck(f"|BAD_{k}| = |Q sols| |Z|^{k - 1}", Fraction(bad),
                                 Fraction(bad_q * Z.order ** (k - 1)), "=="))
    return GammaReport(G.name, d, probs, bounds)


def analyze(G: FiniteGroup, w: Word, budget: int = DEFAULT_BUDGET) -> BadnessReport:
    """Reduce and dispatch to the word-specific analysis."""
    ctx = reduce_to_minimal_verbal(G, w, budget)
    if w.letters == named_word("engel2").letters:
        return engel_badness(ctx, budget)
    if w.letters == named_word("metab").letters:
        return metab_badness(ctx, budget)
    return badness_report(ctx, budget)
