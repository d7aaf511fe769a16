"""Exact and sampled word probabilities, coset probabilities, and the
reduction / decomposition identities."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._kernels import value_histogram
from .errors import ContractError, ResourceLimitError
from .groups import FiniteGroup, Subgroup, coset_representatives, quotient
from .words import Word, evaluate_many

DEFAULT_BUDGET = 10 ** 10
HOEFFDING_ALPHA = 0.01


@dataclass(frozen=True)
class ExactProbability:
    """``hits / total`` kept as exact integers."""

    hits: int
    total: int

    def __post_init__(self):
        if self.total <= 0 or not 0 <= self.hits <= self.total:
            raise ValueError(f"invalid probability {self.hits}/{self.total}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.hits, self.total)

    @property
    def reduced(self) -> tuple[int, int]:
        f = self.value
        return f.numerator, f.denominator

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        n, d = self.reduced
        return f"{n}/{d}"

    def to_dict(self) -> dict:
        n, d = self.reduced
        return {"hits": self.hits, "total": self.total, "reduced": f"{n}/{d}",
                "numerator": n, "denominator": d, "float": float(self)}


def letter_codes(w: Word) -> tuple[np.ndarray, int]:
    """Kernel letter codes and the length of the prefix free of the last variable."""
    code = np.asarray([2 * (v - 1) + (s < 0) for v, s in w.letters], dtype=np.int64)
    last = w.arity
    prefix = next((t for t, (v, _) in enumerate(w.letters) if v == last), len(w.letters))
    return code, prefix


def value_counts(
    G: FiniteGroup,
    w: Word,
    domains: np.ndarray | None = None,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> np.ndarray:
    """Histogram over ``G`` of the values of ``w`` on the product of ``domains``.

    ``domains`` has one row of element indices per variable; the default is
    all of ``G`` for each of ``w.arity`` variables.  Work is split into
    chunks of the first variable; the result does not depend on ``threads``.
    """
    d = w.arity
    if domains is None:
        domains = np.tile(np.arange(G.order, dtype=np.int64), (d, 1))
    if d == 0:
        domains = np.zeros((0, 1), dtype=np.int64)
    else:
        domains = np.ascontiguousarray(domains, dtype=np.int64).reshape(d, -1)
    m = domains.shape[1] if d else 1
    required = m ** d
    if required > budget:
        raise ResourceLimitError(
            f"exhaustive enumeration needs {required} evaluations, budget is {budget}",
            required=required, budget=budget)
    if not G.table_backed:
        return _value_counts_python(G, w, domains)
    table = np.ascontiguousarray(G.table, dtype=np.int32)
    inv = np.ascontiguousarray(G.inverse, dtype=np.int64)
    code, prefix = letter_codes(w)
    if d == 0:
        return value_histogram(table, inv, code, prefix, domains, 0, 1)
    threads = max(1, min(int(threads), m))
    bounds = np.linspace(0, m, threads + 1).astype(np.int64)
    if threads == 1:
        return value_histogram(table, inv, code, prefix, domains, 0, m)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(
            lambda lh: value_histogram(table, inv, code, prefix, domains, int(lh[0]), int(lh[1])),
            zip(bounds[:-1], bounds[1:])))
    return np.sum(parts, axis=0)


def _value_counts_python(G: FiniteGroup, w: Word, domains: np.ndarray) -> np.ndarray:
    out = np.zeros(G.order, dtype=np.int64)
    for args in itertools.product(*(row.tolist() for row in domains)):
        acc = 0
        for v, s in w.letters:
            x = args[v - 1]
            acc = G.mul(acc, x if s > 0 else G.inv(x))
        out[acc] += 1
    return out


def word_histogram(G: FiniteGroup, w: Word, *, budget: int = DEFAULT_BUDGET, threads: int = 1) -> np.ndarray:
    """Cached ``value_counts`` over ``G^arity``."""
    key = ("hist", w.letters)
    if key not in G.cache:
        G.cache[key] = value_counts(G, w, budget=budget, threads=threads)
    return G.cache[key]


def word_probability(
    G: FiniteGroup,
    w: Word,
    target: int = 0,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> ExactProbability:
    """``|w^-1(target)| / |G|^d`` by exhaustive enumeration."""
    hist = word_histogram(G, w, budget=budget, threads=threads)
    return ExactProbability(int(hist[target]), G.order ** w.arity)


def coset_probability(
    G: FiniteGroup,
    N: Subgroup,
    w: Word,
    reps: Sequence[int],
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> ExactProbability:
    """Fraction of ``(n_1..n_d) in N^d`` with ``w(n_1 g_1, ..., n_d g_d) = 1``."""
    if len(reps) < w.arity:
        raise ContractError(f"word needs {w.arity} coset representatives")
    if not N.is_normal():
        raise ContractError("coset probability requires a normal subgroup")
    nel = N.elements
    domains = np.stack([G.mul_arrays(nel, np.full(nel.size, r)) for r in reps[:w.arity]]) \
        if w.arity else np.zeros((0, 1), dtype=np.int64)
    hist = value_counts(G, w, domains, budget=budget, threads=threads)
    return ExactProbability(int(hist[0]), N.order ** w.arity)


@dataclass(frozen=True)
class ReductionCheck:
    holds: bool
    in_group: ExactProbability
    in_quotient: ExactProbability


def reduction_check(G: FiniteGroup, N: Subgroup, w: Word, g: int = 0, **kw) -> ReductionCheck:
    """Compare ``P_{w=g}(G)`` with ``P_{w=gN}(G/N)``."""
    Q, proj = quotient(G, N)
    lhs = word_probability(G, w, g, **kw)
    rhs = word_probability(Q, w, int(proj[g]), **kw)
    return ReductionCheck(lhs.value <= rhs.value, lhs, rhs)


@dataclass(frozen=True)
class DecompositionCheck:
    holds: bool
    probability: ExactProbability
    summed_hits: int
    indicator_ok: bool


def decomposition_check(G: FiniteGroup, N: Subgroup, w: Word, **kw) -> DecompositionCheck:
    """Verify ``P(G) = |G|^-d * sum over R^d of |N|^d * P^(r)(N)`` exactly.

    Also checks that coset tuples with ``w(r) not in N`` contribute nothing.
    """
    d = w.arity
    reps = coset_representatives(G, N)
    total = 0
    indicator_ok = True
    for r in itertools.product(reps.tolist(), repeat=d):
        cp = coset_probability(G, N, w, r, **kw)
        total += cp.hits
        if cp.hits and not N.mask[int(evaluate_many(w, G, [np.asarray(x) for x in r]))]:
            indicator_ok = False
    p = word_probability(G, w, 0, **kw)
    lhs = Fraction(total, G.order ** d)
    return DecompositionCheck(lhs == p.value and indicator_ok, p, total, indicator_ok)


@dataclass(frozen=True)
class SampledProbability:
    estimate: float
    radius: float
    samples: int
    hits: int
    seed: int

    def to_dict(self) -> dict:
        return {"estimate": self.estimate, "radius": self.radius, "samples": self.samples,
                "hits": self.hits, "seed": self.seed, "confidence": 1 - HOEFFDING_ALPHA}


def hoeffding_radius(samples: int, alpha: float = HOEFFDING_ALPHA) -> float:
    return math.sqrt(math.log(2 / alpha) / (2 * samples))


def sample_probability(
    G: FiniteGroup,
    w: Word,
    target: int = 0,
    samples: int = 10 ** 5,
    seed: int = 0,
    chunk: int = 1 << 18,
) -> SampledProbability:
    """Monte Carlo estimate with a 99% Hoeffding radius; deterministic given ``seed``."""
    if samples < 1:
        raise ContractError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    hits = 0
    left = samples
    while left:
        k = min(chunk, left)
        args = [rng.integers(0, G.order, size=k) for _ in range(w.arity)]
        vals = evaluate_many(w, G, args) if w.arity else np.zeros(k, dtype=np.int64)
        hits += int(np.count_nonzero(vals == target))
        left -= k
    return SampledProbability(hits / samples, hoeffding_radius(samples), samples, hits, seed)
