"""Finite groups on element indices ``0..n-1`` with identity at index 0.

Groups up to ``TABLE_LIMIT`` elements carry a full Cayley table; larger ones
multiply by composing permutations and looking the result up.  Both are
exposed through :class:`FiniteGroup`.  Subgroups are boolean masks.

Permutations act on the right: ``(a * b)[x] == b[a[x]]``, i.e. apply ``a``
first.  Commutators are ``[a, b] = a^-1 b^-1 a b`` and conjugation is
``a^b = b^-1 a b``.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import ContractError, InternalConsistencyError, ResourceLimitError

TABLE_LIMIT = 4096
DEFAULT_ORDER_CAP = 20000


class FiniteGroup:
    """Immutable finite group with elements ``0..order-1``."""

    def __init__(
        self,
        order: int,
        name: str,
        *,
        table: np.ndarray | None = None,
        inverse: np.ndarray | None = None,
        generators: Sequence[int] | None = None,
        perms: np.ndarray | None = None,
        perm_index: dict[bytes, int] | None = None,
        bfs_tree: tuple[np.ndarray, np.ndarray] | None = None,
        labels: Sequence[Hashable] | None = None,
    ):
        self.order = int(order)
        self.name = name
        self.identity = 0
        self._table = table
        self._perms = perms
        self._perm_index = perm_index
        if table is not None:
            table.setflags(write=False)
        if inverse is None:
            if table is None:
                raise ValueError("inverse required for permutation-backed groups")
            inverse = np.argmax(table == 0, axis=1).astype(np.int32)
        inverse.setflags(write=False)
        self._inverse = inverse
        self._generators = None if generators is None else [int(g) for g in generators]
        self._bfs_tree = bfs_tree
        self.labels = labels
        self.cache: dict = {}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    # -- basic operations -------------------------------------------------

    @property
    def table(self) -> np.ndarray | None:
        return self._table

    @property
    def inverse(self) -> np.ndarray:
        return self._inverse

    @property
    def perms(self) -> np.ndarray | None:
        return self._perms

    @property
    def table_backed(self) -> bool:
        return self._table is not None

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        if self._table is not None:
            return int(self._table[a, b])
        return self._perm_index[self._perms[b][self._perms[a]].tobytes()]

    def inv(self, a: int) -> int:
        return int(self._inverse[a])

    def product(self, elems: Iterable[int]) -> int:
        acc = 0
        for e in elems:
            acc = self.mul(acc, e)
        return acc

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        acc = 0
        base = a
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def conj(self, a: int, b: int) -> int:
        """``a^b = b^-1 a b``."""
        return self.mul(self.mul(self.inv(b), a), b)

    def comm(self, a: int, b: int, *more: int) -> int:
        """Left-normed commutator ``[a, b, c, ...] = [[a, b], c, ...]``."""
        c = self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
        for x in more:
            c = self.comm(c, x)
        return c

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def col(self, g: int) -> np.ndarray:
        """Array ``x -> x * g`` over all ``x``."""
        if self._table is not None:
            return self._table[:, g]
        p = self._perms[g]
        return np.fromiter((self._perm_index[p[row].tobytes()] for row in self._perms),
                           dtype=np.int32, count=self.order)

    def row(self, g: int) -> np.ndarray:
        """Array ``x -> g * x`` over all ``x``."""
        if self._table is not None:
            return self._table[g, :]
        p = self._perms[g]
        return np.fromiter((self._perm_index[row[p].tobytes()] for row in self._perms),
                           dtype=np.int32, count=self.order)

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self._table is not None:
            return self._table[a, b]
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = np.fromiter((self.mul(int(x), int(y)) for x, y in zip(a.ravel(), b.ravel())),
                          dtype=np.int32, count=a.size)
        return out.reshape(a.shape)

    def comm_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        inv = self._inverse
        return self.mul_arrays(self.mul_arrays(inv[a], inv[b]), self.mul_arrays(a, b))

    # -- derived data -----------------------------------------------------

    @property
    def generators(self) -> list[int]:
        if self._generators is None:
            self._generators = _greedy_generators(self)
        return list(self._generators)

    @property
    def is_abelian(self) -> bool:
        if "abelian" not in self.cache:
            gens = self.generators
            self.cache["abelian"] = all(
                self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)
        return self.cache["abelian"]

    def bfs_tree(self) -> tuple[np.ndarray, np.ndarray]:
        """``(parent, via)`` with ``g == parent[g] * generators[via[g]]``."""
        if self._bfs_tree is None:
            gens = self.generators
            parent = np.full(self.order, -1, dtype=np.int64)
            via = np.full(self.order, -1, dtype=np.int64)
            seen = np.zeros(self.order, dtype=bool)
            seen[0] = True
            queue = deque([0])
            cols = [self.col(g) for g in gens]
            while queue:
                x = queue.popleft()
                for k, c in enumerate(cols):
                    y = int(c[x])
                    if not seen[y]:
                        seen[y] = True
                        parent[y], via[y] = x, k
                        queue.append(y)
            if not seen.all():
                raise InternalConsistencyError("generators do not generate the group")
            self._bfs_tree = (parent, via)
        return self._bfs_tree

    def regular_perms(self, elems: Sequence[int]) -> list[np.ndarray]:
        """Right regular representation of ``elems`` as permutations of indices."""
        return [np.asarray(self.col(g), dtype=np.int64) for g in elems]

    def index_of_perm(self, perm: Sequence[int]) -> int:
        """Element index of a permutation (permutation-built groups only)."""
        if self._perm_index is None:
            raise ContractError(f"{self.name} has no permutation representation")
        key = np.asarray(perm, dtype=np.int64).tobytes()
        if key not in self._perm_index:
            raise ContractError("permutation is not an element of the group")
        return self._perm_index[key]

    def perm_generators(self) -> tuple[int, list[np.ndarray]]:
        """A faithful permutation representation of the generators."""
        gens = self.generators
        if self._perms is not None:
            return self._perms.shape[1], [self._perms[g].astype(np.int64) for g in gens]
        return self.order, self.regular_perms(gens)


class Subgroup:
    """Subgroup of ``owner`` stored as a membership mask."""

    def __init__(self, owner: FiniteGroup, mask: np.ndarray, generators: Sequence[int] | None = None):
        mask = np.asarray(mask, dtype=bool).copy()
        mask.setflags(write=False)
        self.owner = owner
        self.mask = mask
        self._generators = None if generators is None else [int(g) for g in generators]

    @property
    def order(self) -> int:
        return int(self.mask.sum())

    def __len__(self) -> int:
        return self.order

    def __contains__(self, g: int) -> bool:
        return bool(self.mask[g])

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Subgroup) and other.owner is self.owner
                and bool(np.array_equal(other.mask, self.mask)))

    def __hash__(self) -> int:
        return hash(self.mask.tobytes())

    def __le__(self, other: Subgroup) -> bool:
        return bool(np.all(other.mask[self.mask]))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.owner.name!r})"

    @property
    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def generators(self) -> list[int]:
        if self._generators is None:
            self._generators = _greedy_generators(self.owner, self.elements)
        return list(self._generators)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def is_normal(self) -> bool:
        G = self.owner
        inv = G.inverse
        for g in G.generators:
            gens = np.asarray(self.generators, dtype=np.int64)
            if gens.size == 0:
                return True
            conj = G.mul_arrays(G.mul_arrays(np.full_like(gens, inv[g]), gens), np.full_like(gens, g))
            if not self.mask[conj].all():
                return False
        return True


# -- construction -------------------------------------------------------------

def _closure(
    identity: object,
    gens: Sequence[object],
    mul: Callable[[object, object], object],
    key: Callable[[object], Hashable],
    cap: int,
) -> tuple[list[object], dict[Hashable, int], np.ndarray, np.ndarray, np.ndarray]:
    """Breadth-first closure; returns elements, index, right-gen table, parent, via."""
    elems = [identity]
    index = {key(identity): 0}
    right: list[list[int]] = []
    parent = [-1]
    via = [-1]
    i = 0
    while i < len(elems):
        x = elems[i]
        row = []
        for k, g in enumerate(gens):
            y = mul(x, g)
            ky = key(y)
            j = index.get(ky)
            if j is None:
                j = len(elems)
                if j >= cap:
                    raise ResourceLimitError(
                        f"group closure exceeds order cap {cap}", required=None, budget=cap)
                index[ky] = j
                elems.append(y)
                parent.append(i)
                via.append(k)
            row.append(j)
        right.append(row)
        i += 1
    rg = np.asarray(right, dtype=np.int64).reshape(len(elems), len(gens)).T
    return elems, index, rg, np.asarray(parent, dtype=np.int64), np.asarray(via, dtype=np.int64)


def _table_from_tree(n: int, rg: np.ndarray, parent: np.ndarray, via: np.ndarray) -> np.ndarray:
    table = np.empty((n, n), dtype=np.int32)
    table[:, 0] = np.arange(n)
    for j in range(1, n):
        table[:, j] = rg[via[j]][table[:, parent[j]]]
    return table


def from_elements(
    identity: object,
    gens: Sequence[object],
    mul: Callable[[object, object], object],
    key: Callable[[object], Hashable],
    name: str,
    order_cap: int = DEFAULT_ORDER_CAP,
) -> FiniteGroup:
    """Close ``gens`` under an arbitrary hashable multiplication (table-backed)."""
    elems, index, rg, parent, via = _closure(identity, gens, mul, key, order_cap)
    n = len(elems)
    if n > TABLE_LIMIT:
        raise ResourceLimitError(f"order {n} exceeds table limit {TABLE_LIMIT}", required=n,
                                 budget=TABLE_LIMIT)
    table = _table_from_tree(n, rg, parent, via)
    gen_idx = [index[key(g)] for g in gens]
    return FiniteGroup(n, name, table=table, generators=_dedupe_nontrivial(gen_idx),
                       bfs_tree=(parent, via) if gen_idx == _dedupe_nontrivial(gen_idx) else None,
                       labels=elems)


def from_generators(
    degree: int,
    generators: Sequence[Sequence[int]],
    name: str = "",
    order_cap: int = DEFAULT_ORDER_CAP,
) -> FiniteGroup:
    """Closure of permutations of ``{0..degree-1}`` under composition.

    Elements are numbered breadth-first: identity first, then in order of
    discovery applying the generators in the given order.
    """
    perms = []
    for i, g in enumerate(generators):
        p = np.asarray(g, dtype=np.int64)
        if p.shape != (degree,) or not np.array_equal(np.sort(p), np.arange(degree)):
            raise ContractError(f"generator {i} is not a permutation of 0..{degree - 1}")
        perms.append(p)
    ident = np.arange(degree, dtype=np.int64)
    elems, index, rg, parent, via = _closure(
        ident, perms, lambda a, b: b[a], lambda a: a.tobytes(), order_cap)
    n = len(elems)
    name = name or f"perm{degree}<{len(perms)} gens>"
    gen_idx = [index[p.tobytes()] for p in perms]
    clean = _dedupe_nontrivial(gen_idx)
    tree = (parent, via) if clean == gen_idx else None
    if n <= TABLE_LIMIT:
        table = _table_from_tree(n, rg, parent, via)
        arr = np.stack(elems).astype(np.int32) if degree else np.zeros((n, 0), dtype=np.int32)
        return FiniteGroup(n, name, table=table, generators=clean, perms=arr,
                           perm_index=index, bfs_tree=tree)
    arr = np.stack(elems).astype(np.int64)
    inverse = np.empty(n, dtype=np.int32)
    for i, p in enumerate(arr):
        q = np.empty_like(p)
        q[p] = np.arange(degree)
        inverse[i] = index[q.tobytes()]
    return FiniteGroup(n, name, inverse=inverse, generators=clean, perms=arr,
                       perm_index=index, bfs_tree=tree)


def from_table(table: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Group from a 0-based Cayley table with identity at index 0."""
    t = np.asarray(table, dtype=np.int32)
    n = t.shape[0]
    if t.ndim != 2 or t.shape != (n, n) or n == 0:
        raise ContractError("Cayley table must be a non-empty square matrix")
    ar = np.arange(n)
    if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
        raise ContractError("index 0 is not the identity of the Cayley table")
    if not (np.all(np.sort(t, axis=1) == ar) and np.all(np.sort(t, axis=0) == ar[:, None])):
        raise ContractError("Cayley table is not a Latin square")
    return FiniteGroup(n, name or f"cayley{n}", table=t.copy())


def _dedupe_nontrivial(idx: Iterable[int]) -> list[int]:
    out: list[int] = []
    for g in idx:
        if g != 0 and g not in out:
            out.append(int(g))
    return out


def _greedy_generators(G: FiniteGroup, candidates: Iterable[int] | None = None) -> list[int]:
    cand = range(G.order) if candidates is None else candidates
    gens: list[int] = []
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    for g in cand:
        g = int(g)
        if not mask[g]:
            gens.append(g)
            mask = _generate_mask(G, gens)
    return gens


# -- subgroup machinery ------------------------------------------------------

def _generate_mask(G: FiniteGroup, gens: Sequence[int]) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    gens = [int(g) for g in gens if g != 0]
    if not gens:
        return mask
    cols = np.stack([G.col(g) for g in gens])
    frontier = np.array([0])
    while frontier.size:
        cand = np.unique(cols[:, frontier].ravel())
        cand = cand[~mask[cand]]
        mask[cand] = True
        frontier = cand
    return mask


def subgroup_generated(G: FiniteGroup, elems: Iterable[int]) -> Subgroup:
    gens = _dedupe_nontrivial(int(e) for e in elems)
    return Subgroup(G, _generate_mask(G, gens))


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, np.ones(G.order, dtype=bool), G.generators)


def trivial(G: FiniteGroup) -> Subgroup:
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    return Subgroup(G, mask, [])


def _conjugates(G: FiniteGroup, elems: np.ndarray, g: int) -> np.ndarray:
    elems = np.asarray(elems, dtype=np.int64)
    return G.mul_arrays(G.mul_arrays(np.full_like(elems, G.inv(g)), elems), np.full_like(elems, g))


def normal_closure(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    gens = _dedupe_nontrivial(int(e) for e in S)
    mask = _generate_mask(G, gens)
    while True:
        arr = np.asarray(gens, dtype=np.int64)
        if arr.size == 0:
            return Subgroup(G, mask, [])
        new = []
        for g in G.generators:
            c = _conjugates(G, arr, g)
            new.extend(int(x) for x in c[~mask[c]])
        if not new:
            return Subgroup(G, mask, gens)
        gens = _dedupe_nontrivial(gens + new)
        mask = _generate_mask(G, gens)


def center(G: FiniteGroup) -> Subgroup:
    mask = np.ones(G.order, dtype=bool)
    for g in G.generators:
        mask &= G.col(g) == G.row(g)
    return Subgroup(G, mask)


def centralizer(G: FiniteGroup, S: Iterable[int] | Subgroup) -> Subgroup:
    elems = S.generators if isinstance(S, Subgroup) else list(S)
    mask = np.ones(G.order, dtype=bool)
    for s in dict.fromkeys(int(x) for x in elems):
        mask &= G.col(s) == G.row(s)
    return Subgroup(G, mask)


def commutator_subgroup(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    """``[A, B]`` for normal subgroups ``A`` and ``B``."""
    ga = np.asarray(A.generators, dtype=np.int64)
    gb = np.asarray(B.generators, dtype=np.int64)
    if ga.size == 0 or gb.size == 0:
        return trivial(G)
    aa, bb = np.meshgrid(ga, gb, indexing="ij")
    comms = G.comm_arrays(aa.ravel(), bb.ravel())
    return normal_closure(G, comms)


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    W = whole(G)
    return commutator_subgroup(G, W, W)


def derived_series(G: FiniteGroup) -> list[Subgroup]:
    series = [whole(G)]
    while True:
        H = series[-1]
        nxt = _derived_of_subgroup(G, H)
        if nxt == H:
            return series
        series.append(nxt)


def _derived_of_subgroup(G: FiniteGroup, H: Subgroup) -> Subgroup:
    """``H'`` for a normal subgroup ``H`` of ``G``; result is normal in ``G``."""
    return commutator_subgroup(G, H, H)


def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    W = whole(G)
    series = [W]
    while True:
        nxt = commutator_subgroup(G, series[-1], W)
        if nxt == series[-1]:
            return series
        series.append(nxt)


def is_solvable(G: FiniteGroup) -> bool:
    return derived_series(G)[-1].is_trivial


def is_nilpotent(G: FiniteGroup) -> bool:
    return lower_central_series(G)[-1].is_trivial


def nilpotency_class(G: FiniteGroup) -> int | None:
    series = lower_central_series(G)
    return len(series) - 1 if series[-1].is_trivial else None


def derived_length(G: FiniteGroup) -> int | None:
    series = derived_series(G)
    return len(series) - 1 if series[-1].is_trivial else None


def conjugacy_classes(G: FiniteGroup) -> list[np.ndarray]:
    label = np.full(G.order, -1, dtype=np.int64)
    maps = []
    inv = G.inverse
    for g in G.generators:
        # x -> g^-1 x g
        maps.append(np.asarray(G.mul_arrays(G.row(inv[g]), np.full(G.order, g)), dtype=np.int64))
    classes = []
    for x in range(G.order):
        if label[x] >= 0:
            continue
        cls_id = len(classes)
        label[x] = cls_id
        frontier = np.array([x])
        members = [x]
        while frontier.size:
            cand = np.unique(np.concatenate([m[frontier] for m in maps])) if maps else np.array([], dtype=np.int64)
            cand = cand[label[cand] < 0]
            label[cand] = cls_id
            members.extend(int(c) for c in cand)
            frontier = cand
        classes.append(np.sort(np.asarray(members, dtype=np.int64)))
    return classes


def minimal_normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All minimal nontrivial normal subgroups, sorted by (order, elements)."""
    if G.order == 1:
        return []
    cands: dict[bytes, Subgroup] = {}
    for cls in conjugacy_classes(G):
        x = int(cls[0])
        if x == 0:
            continue
        k = G.element_order(x)
        if not _is_prime(k):
            continue
        N = normal_closure(G, [x])
        cands.setdefault(N.mask.tobytes(), N)
    subs = list(cands.values())
    minimal = [N for N in subs
               if not any(M.order < N.order and M <= N for M in subs)]
    minimal.sort(key=lambda N: (N.order, tuple(N.elements)))
    return minimal


def _is_prime(k: int) -> bool:
    return k >= 2 and all(k % d for d in range(2, int(k ** 0.5) + 1))


def quotient(G: FiniteGroup, N: Subgroup, name: str | None = None) -> tuple[FiniteGroup, np.ndarray]:
    """Quotient ``G/N`` and the projection array ``g -> coset index``.

    Cosets are numbered by their least element, so the identity coset is 0.
    """
    if N.owner is not G:
        raise ContractError("subgroup belongs to a different group")
    if not N.is_normal():
        raise ContractError("quotient requires a normal subgroup")
    proj = np.full(G.order, -1, dtype=np.int64)
    nel = N.elements
    reps = []
    for g in range(G.order):
        if proj[g] < 0:
            coset = G.mul_arrays(np.full(nel.size, g), nel)
            proj[coset] = len(reps)
            reps.append(g)
    reps_a = np.asarray(reps, dtype=np.int64)
    m = len(reps)
    if m > TABLE_LIMIT:
        raise ResourceLimitError(f"quotient order {m} exceeds table limit", required=m, budget=TABLE_LIMIT)
    aa, bb = np.meshgrid(reps_a, reps_a, indexing="ij")
    qt = proj[G.mul_arrays(aa, bb)].astype(np.int32)
    gens = _dedupe_nontrivial(int(proj[g]) for g in G.generators)
    Q = FiniteGroup(m, name or f"{G.name}/N{N.order}", table=qt, generators=gens)
    Q.cache["coset_reps"] = reps_a
    return Q, proj


def coset_representatives(G: FiniteGroup, N: Subgroup) -> np.ndarray:
    """Least element of each coset ``gN``, in increasing order."""
    seen = np.zeros(G.order, dtype=bool)
    reps = []
    nel = N.elements
    for g in range(G.order):
        if not seen[g]:
            seen[G.mul_arrays(np.full(nel.size, g), nel)] = True
            reps.append(g)
    return np.asarray(reps, dtype=np.int64)


def is_homomorphism(G: FiniteGroup, H: FiniteGroup, phi: np.ndarray) -> bool:
    """Exhaustive check on all pairs ``(x, g)`` with ``g`` a generator of ``G``."""
    phi = np.asarray(phi, dtype=np.int64)
    for g in G.generators:
        lhs = phi[G.col(g)]
        rhs = H.mul_arrays(phi, np.full(G.order, phi[g]))
        if not np.array_equal(lhs, rhs):
            return False
    return phi[0] == 0


def automorphisms(G: FiniteGroup, limit: int = 100000) -> list[np.ndarray]:
    """All automorphisms as index permutations, found from generator images."""
    gens = G.generators
    parent, via = G.bfs_tree()
    order_of = np.array([G.element_order(x) for x in range(G.order)])
    options = [np.flatnonzero(order_of == order_of[g]) for g in gens]
    total = 1
    for o in options:
        total *= len(o)
    if total > limit:
        raise ResourceLimitError(f"{total} candidate generator images exceed limit", required=total,
                                 budget=limit)
    seq = np.argsort(_bfs_depth(parent), kind="stable")
    out = []
    for images in _product(options):
        phi = np.zeros(G.order, dtype=np.int64)
        for j in seq[1:]:
            phi[j] = G.mul(int(phi[parent[j]]), int(images[via[j]]))
        if np.unique(phi).size != G.order:
            continue
        if is_homomorphism(G, G, phi):
            out.append(phi)
    return out


def _bfs_depth(parent: np.ndarray) -> np.ndarray:
    depth = np.zeros(parent.size, dtype=np.int64)
    for j in range(1, parent.size):
        depth[j] = depth[parent[j]] + 1 if parent[j] < j else -1
    if (depth < 0).any():
        # parent indices are not topologically sorted; resolve iteratively
        depth[:] = -1
        depth[0] = 0
        while (depth < 0).any():
            ok = (depth < 0) & (depth[parent] >= 0)
            depth[ok] = depth[parent[ok]] + 1
    return depth


def _product(options: list[np.ndarray]):
    if not options:
        yield ()
        return
    import itertools
    yield from itertools.product(*(o.tolist() for o in options))


def inner_automorphism(G: FiniteGroup, g: int) -> np.ndarray:
    """Permutation ``x -> g^-1 x g``."""
    return np.asarray(G.mul_arrays(G.row(G.inv(g)), np.full(G.order, g)), dtype=np.int64)


def direct_product(factors: Sequence[FiniteGroup], name: str | None = None,
                   order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    gens: list[np.ndarray] = []
    reps = [f.perm_generators() for f in factors]
    total = sum(deg for deg, _ in reps)
    offset = 0
    for deg, perms in reps:
        for p in perms:
            full = np.arange(total, dtype=np.int64)
            full[offset:offset + deg] = p + offset
            gens.append(full)
        offset += deg
    name = name or " x ".join(f.name for f in factors)
    return from_generators(total, gens, name=name, order_cap=order_cap)
