"""Non-constancy of varied coset word maps on small simple groups.

A coset word map sends ``(s_1, ..., s_d)`` in ``S^d`` to
``w(s_1 g_1, ..., s_d g_d)`` where the ``g_i`` are automorphisms of ``S``.
Everything is computed inside a group ``A`` of automorphisms of ``S`` that
contains ``Inn(S)``; since ``S`` has trivial centre, ``s`` is identified with
the inner automorphism ``x -> s^-1 x s``.  The coset ``s_i g_i`` is then the
product ``inn(s_i) * g_i`` in ``A``.
"""

from __future__ import annotations

import hashlib
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import psl2 as _psl2
from .catalog import named
from .errors import ContractError, InternalConsistencyError
from .groups import (FiniteGroup, Subgroup, automorphisms, center, coset_representatives,
                     from_generators, inner_automorphism)
from .words import Variation, Word, evaluate, evaluate_many, variations, vsmb_prune

DEFAULT_INSTANCE_BUDGET = 10 ** 7
DEFAULT_GROUPS = ("psl2:2", "sz:2", "psl2:3", "psl2:9")
RANDOM_BATCH = 64


# -- automorphism models ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AutomorphismModel:
    """``S`` together with an automorphism group ``A >= Inn(S)``.

    ``inn[s]`` is the index in ``A`` of conjugation by ``s``; ``reps`` lists
    ``(label, index in A)`` for the automorphisms used in coset tuples.
    """

    spec: str
    S: FiniteGroup
    A: FiniteGroup
    inn: np.ndarray
    reps: tuple[tuple[str, int], ...]

    @property
    def inner_mask(self) -> np.ndarray:
        mask = np.zeros(self.A.order, dtype=bool)
        mask[self.inn] = True
        return mask


def _inner_images(S: FiniteGroup) -> list[np.ndarray]:
    return [inner_automorphism(S, s) for s in range(S.order)]


@lru_cache(maxsize=None)
def automorphism_model(spec: str) -> AutomorphismModel:
    """Model for ``psl2:q`` (``A = Inn(S) <D, sigma>``) or any centreless group.

    For ``psl2:q`` with odd ``q`` the tuple representatives are the normal
    forms ``sigma^i D^j``.  Otherwise ``A`` is the full automorphism group
    found from generator images and the representatives are coset
    representatives of ``Inn(S)`` in ``A``.
    """
    S = named(spec)
    if center(S).order != 1:
        raise ContractError(f"{spec} has a nontrivial centre")
    inner_perms = _inner_images(S)
    kind, _, arg = spec.partition(":")
    if kind == "psl2" and int(arg) % 2:
        q = int(arg)
        outer = _psl2.outer_coset_reps(q)
        gens = [inner_perms[g] for g in S.generators]
        gens += [_psl2.aut_permutation(_psl2.diagonal(q))]
        if _psl2.prime_power(q)[1] > 1:
            gens.append(_psl2.aut_permutation(_psl2.frobenius(q)))
        A = from_generators(S.order, gens, name=f"Inn({S.name})<D,s>")
        reps = tuple((a.label, A.index_of_perm(_psl2.aut_permutation(a))) for a in outer)
    else:
        A = from_generators(S.order, automorphisms(S), name=f"Aut({S.name})")
        inn = np.asarray([A.index_of_perm(p) for p in inner_perms], dtype=np.int64)
        mask = np.zeros(A.order, dtype=bool)
        mask[inn] = True
        reps = tuple(("1" if r == 0 else f"aut{r}", int(r))
                     for r in coset_representatives(A, Subgroup(A, mask)))
    inn = np.asarray([A.index_of_perm(p) for p in inner_perms], dtype=np.int64)
    return AutomorphismModel(spec, S, A, inn, reps)


# -- instances and verdicts ------------------------------------------------------------

class VerdictKind(Enum):
    NON_CONSTANT = "NonConstant"
    CONSTANT = "Constant"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ConstancyVerdict:
    kind: VerdictKind
    evals_used: int
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    values: tuple[int, int] | None = None
    method: str = ""

    def to_dict(self) -> dict:
        out = {"verdict": self.kind.value, "evals_used": self.evals_used, "method": self.method}
        if self.witness is not None:
            out["witness"] = {"args": [list(self.witness[0]), list(self.witness[1])],
                              "values": list(self.values)}
        return out


@dataclass(frozen=True)
class CosetMapInstance:
    """A (varied) word on ``model.S`` with one automorphism per variable."""

    model: AutomorphismModel
    word: Word
    variation_id: str
    tuple_: tuple[int, ...]
    scope: str = "required"

    def __post_init__(self):
        if len(self.tuple_) != self.word.arity:
            raise ContractError("automorphism tuple length must equal the word's arity")

    @property
    def automorphisms(self) -> tuple[int, ...]:
        return tuple(self.model.reps[k][1] for k in self.tuple_)

    @property
    def tuple_labels(self) -> list[str]:
        return [self.model.reps[k][0] for k in self.tuple_]

    def args(self, s: Sequence[np.ndarray | int]) -> list[np.ndarray]:
        """``inn(s_i) * g_i`` in ``A``."""
        A, inn = self.model.A, self.model.inn
        return [A.mul_arrays(inn[np.asarray(x)], np.asarray(g))
                for x, g in zip(s, self.automorphisms)]

    def value(self, s: Sequence[int]) -> int:
        A, inn = self.model.A, self.model.inn
        return evaluate(self.word, A, [A.mul(int(inn[x]), g) for x, g in zip(s, self.automorphisms)])

    def seed(self, seed: int) -> int:
        key = f"{seed}|{self.model.spec}|{self.word.letters}|{self.tuple_}".encode()
        return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


def _found(inst: CosetMapInstance, base: int, s: tuple[int, ...], used: int,
           method: str) -> ConstancyVerdict:
    zero = (0,) * inst.word.arity
    v0, v1 = inst.value(zero), inst.value(s)
    if v0 != base or v0 == v1:
        raise InternalConsistencyError("non-constancy witness failed to re-verify")
    return ConstancyVerdict(VerdictKind.NON_CONSTANT, used, (zero, s), (v0, v1), method)


def check_instance(
    inst: CosetMapInstance,
    budget: int = DEFAULT_INSTANCE_BUDGET,
    seed: int = 0,
    random_evals: int = 4096,
    chunk: int = 1 << 16,
) -> ConstancyVerdict:
    """Seeded random witness search, then an exhaustive sweep if ``|S|^d <= budget``.

    ``Constant`` is only returned after a full sweep; ``Unknown`` means the
    budget ran out without a witness.
    """
    if budget < 2:
        raise ContractError("budget must be at least 2")
    d = inst.word.arity
    n = inst.model.S.order
    A = inst.model.A
    if d == 0:
        return ConstancyVerdict(VerdictKind.CONSTANT, 1, method="exhaustive")
    base = inst.value((0,) * d)
    used = 1
    space = n ** d
    exhaustive = space <= budget
    random_budget = min(random_evals, budget - 1, space) if exhaustive else budget - 1
    rng = np.random.default_rng(inst.seed(seed))
    while used < 1 + random_budget:
        k = min(RANDOM_BATCH, 1 + random_budget - used)
        s = rng.integers(0, n, size=(d, k))
        vals = evaluate_many(inst.word, A, inst.args(list(s)))
        used += k
        hit = np.flatnonzero(vals != base)
        if hit.size:
            return _found(inst, base, tuple(int(x) for x in s[:, hit[0]]), used, "random")
    if not exhaustive:
        return ConstancyVerdict(VerdictKind.UNKNOWN, used, method="random")
    radix = n ** np.arange(d - 1, -1, -1, dtype=np.int64)
    for start in range(0, space, chunk):
        idx = np.arange(start, min(space, start + chunk), dtype=np.int64)
        s = (idx[None, :] // radix[:, None]) % n
        vals = evaluate_many(inst.word, A, inst.args(list(s)))
        hit = np.flatnonzero(vals != base)
        if hit.size:
            return _found(inst, base, tuple(int(x) for x in s[:, hit[0]]),
                          used + int(hit[0]) + 1, "exhaustive")
        used += idx.size
    return ConstancyVerdict(VerdictKind.CONSTANT, used, method="exhaustive")


# -- word-level checks -------------------------------------------------------------------

def candidate_variations(w: Word, stream: str = "restricted") -> list[Variation]:
    """Variations that survive the sufficient-criteria pruning.

    ``restricted`` uses the reductions available for the named words: for
    the 2-Engel word ``X1`` stays unvaried and ``X2`` uses at most two
    second indices; for the metabelian word only the word itself remains.
    Other words, and ``stream="full"``, use every canonical variation.
    """
    if stream not in ("restricted", "full"):
        raise ContractError(f"unknown variation stream {stream!r}")
    caps = None
    if stream == "restricted" and w.name == "engel2":
        caps = {1: 1, 2: 2}
    elif stream == "restricted" and w.name == "metab":
        caps = {v: 1 for v in w.variables}
    return [v for v in variations(w, max_classes=caps) if not vsmb_prune(v).vsmb]


def _scope(spec: str, var: Variation) -> str:
    if spec == "psl2:3" or var.is_identity:
        return "required"
    return "supplementary"


@dataclass
class VsmbReport:
    word: str
    instances: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return self.summary.get("verdict", "")

    def to_dict(self) -> dict:
        return {"word": self.word, "summary": self.summary, "instances": self.instances}


def _run(inst: CosetMapInstance, budget: int, seed: int) -> dict:
    v = check_instance(inst, budget, seed)
    row = {"group": inst.model.spec, "variation_id": inst.variation_id,
           "tuple": inst.tuple_labels, "scope": inst.scope}
    row.update(v.to_dict())
    return row


def check_word(
    w: Word,
    groups: Iterable[str] = DEFAULT_GROUPS,
    budget: int = DEFAULT_INSTANCE_BUDGET,
    seed: int = 0,
    stream: str = "restricted",
    threads: int = 1,
) -> VsmbReport:
    """Check every surviving variation on every group and every automorphism tuple."""
    cands = candidate_variations(w, stream)
    jobs: list[CosetMapInstance] = []
    for spec in groups:
        model = automorphism_model(spec)
        for var in cands:
            vw = var.word
            for tup in itertools.product(range(len(model.reps)), repeat=vw.arity):
                jobs.append(CosetMapInstance(model, vw, var.label, tup, _scope(spec, var)))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda j: _run(j, budget, seed), jobs, chunksize=64))
    else:
        rows = [_run(j, budget, seed) for j in jobs]
    per_group: dict[str, dict[str, int]] = {}
    for row in rows:
        g = per_group.setdefault(row["group"], {"instances": 0, "NonConstant": 0, "Constant": 0,
                                                "Unknown": 0, "evals_used": 0})
        g["instances"] += 1
        g[row["verdict"]] += 1
        g["evals_used"] += row["evals_used"]
    constant = sum(g["Constant"] for g in per_group.values())
    unknown = sum(g["Unknown"] for g in per_group.values())
    if constant:
        verdict = "constant instance found"
    elif unknown:
        verdict = "VSMB-supported up to listed Unknowns"
    else:
        verdict = "VSMB-supported"
    summary = {"verdict": verdict, "stream": stream, "variations": len(cands), "budget": budget,
               "seed": seed, "constant": constant, "unknown": unknown, "groups": per_group,
               "unknown_instances": [r for r in rows if r["verdict"] == "Unknown"]}
    return VsmbReport(w.name or str(w), rows, summary)


def inner_invariance_check(
    inst: CosetMapInstance,
    twist: Sequence[int],
    samples: int = 10 ** 4,
    seed: int = 0,
    exhaustive_limit: int = 10 ** 6,
) -> bool:
    """Twisting ``g_i`` by ``inn(t_i)`` leaves the image set unchanged.

    Small instances compare full image sets.  Larger ones check on sampled
    ``s`` that the twisted map at ``s`` agrees with the original at ``s t``.
    """
    model = inst.model
    d = inst.word.arity
    if len(twist) != d:
        raise ContractError("one twisting element per variable required")
    A, inn = model.A, model.inn
    twisted = [A.mul(int(inn[t]), g) for t, g in zip(twist, inst.automorphisms)]
    n = model.S.order

    def values(gs: Sequence[int], s: np.ndarray) -> np.ndarray:
        return evaluate_many(inst.word, A, [A.mul_arrays(inn[x], g) for x, g in zip(s, gs)])

    if d == 0:
        return True
    if n ** d <= exhaustive_limit:
        grid = np.indices((n,) * d).reshape(d, -1)
        return np.array_equal(np.unique(values(inst.automorphisms, grid)),
                              np.unique(values(twisted, grid)))
    rng = np.random.default_rng(seed)
    s = rng.integers(0, n, size=(d, samples))
    st = np.stack([model.S.mul_arrays(row, np.full(samples, t)) for row, t in zip(s, twist)])
    return np.array_equal(values(twisted, s), values(inst.automorphisms, st))
