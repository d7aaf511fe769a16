"""Finite fields, PSL_2(q), and the automorphisms generated by the diagonal
automorphism ``D`` and the Frobenius automorphism ``sigma``.

Conventions
-----------
* ``F_q`` elements are integers ``0..q-1`` encoding coefficient vectors in
  base ``p`` (constant term least significant).  The modulus is the monic
  irreducible polynomial of degree ``n`` with the smallest such encoding.
* ``omega`` is the least primitive element in that integer order.
* Automorphisms act on the right.  ``compose(a, b)`` applies ``a`` first,
  so ``apply(compose(a, b), x) == apply(b, apply(a, x))``.
* ``D`` maps ``x`` to ``M^-1 x M`` with ``M = diag(omega, 1)``, i.e.
  ``[[a, b], [c, d]] -> [[a, b/omega], [c*omega, d]]``; ``sigma`` raises every
  entry to the ``p``-th power.  With these choices ``[D, sigma] = D^(p-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import ContractError
from .groups import FiniteGroup, from_elements

MAX_FIELD_ORDER = 1 << 16


def prime_power(q: int) -> tuple[int, int] | None:
    """``(p, n)`` with ``q == p**n``, or ``None``."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    n, r = 0, q
    while r % p == 0:
        r //= p
        n += 1
    return (p, n) if r == 1 else None


class GF:
    """The field with ``p**n`` elements."""

    def __init__(self, p: int, n: int = 1):
        if prime_power(p) != (p, 1):
            raise ContractError(f"{p} is not prime")
        self.p, self.n = p, n
        self.q = p ** n
        if self.q > MAX_FIELD_ORDER:
            raise ContractError(f"field order {self.q} exceeds {MAX_FIELD_ORDER}")
        self.modulus = self._find_modulus()
        self._build_tables()

    def __repr__(self) -> str:
        return f"GF({self.q})"

    # polynomial helpers on coefficient lists (constant term first)

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.n):
            out.append(x % self.p)
            x //= self.p
        return out

    def _from_digits(self, ds: list[int]) -> int:
        x = 0
        for c in reversed(ds):
            x = x * self.p + c
        return x

    def _polymulmod(self, a: list[int], b: list[int], mod: list[int]) -> list[int]:
        p, n = self.p, len(mod) - 1
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(len(prod) - 1, n - 1, -1):
            c = prod[k]
            if c:
                for i in range(n + 1):
                    prod[k - n + i] = (prod[k - n + i] - c * mod[i]) % p
        return (prod + [0] * n)[:n]

    def _find_modulus(self) -> list[int]:
        p, n = self.p, self.n
        if n == 1:
            return [0, 1]
        for code in range(p ** n):
            low = []
            c = code
            for _ in range(n):
                low.append(c % p)
                c //= p
            poly = low + [1]
            if poly[0] == 0:
                continue
            if self._is_irreducible(poly):
                return poly
        raise AssertionError("no irreducible polynomial found")

    def _is_irreducible(self, poly: list[int]) -> bool:
        # no roots / factors: brute force over monic divisors of degree <= n/2
        p, n = self.p, len(poly) - 1
        for deg in range(1, n // 2 + 1):
            for code in range(p ** deg):
                div = []
                c = code
                for _ in range(deg):
                    div.append(c % p)
                    c //= p
                div.append(1)
                if _polymod(poly, div, p) == [0] * deg:
                    return False
        return True

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        mod = self.modulus
        digits = [self._digits(x) for x in range(q)]
        self._dig = np.asarray(digits, dtype=np.int64).reshape(q, self.n)
        self._weights = p ** np.arange(self.n, dtype=np.int64)
        # least primitive element
        for w in range(1, q):
            x = digits[w]
            k = 1
            while self._from_digits(x) != 1:
                x = self._polymulmod(x, digits[w], mod)
                k += 1
            if k == q - 1:
                self.omega = w
                break
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = [1] + [0] * (self.n - 1)
        for k in range(q - 1):
            v = self._from_digits(x)
            exp[k] = v
            log[v] = k
            x = self._polymulmod(x, digits[self.omega], mod)
        self.exp, self.log = exp, log

    # arithmetic

    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        return int(((self._dig[a] + self._dig[b]) % self.p) @ self._weights)

    def neg(self, a: int) -> int:
        if self.n == 1:
            return (-a) % self.p
        return int(((-self._dig[a]) % self.p) @ self._weights)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return int(self.exp[(-self.log[a]) % (self.q - 1)])

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("inverse of 0")
            return 1 if k == 0 else 0
        return int(self.exp[(self.log[a] * k) % (self.q - 1)])

    def omega_pow(self, k: int) -> int:
        return int(self.exp[k % (self.q - 1)])

    def frobenius(self, a: int, i: int = 1) -> int:
        return self.pow(a, self.p ** (i % self.n))

    def elements(self) -> range:
        return range(self.q)


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k] * inv_lead % p
        if c:
            for i in range(dm + 1):
                a[k - dm + i] = (a[k - dm + i] - c * m[i]) % p
    return (a + [0] * dm)[:dm]


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    pn = prime_power(q)
    if pn is None:
        raise ContractError(f"{q} is not a prime power")
    return GF(*pn)


# -- PSL_2(q) -------------------------------------------------------------------

Matrix = tuple[int, int, int, int]


class PSL2:
    """PSL_2(q) with canonical matrix representatives and a Cayley table."""

    def __init__(self, q: int):
        self.F = F = field(q)
        self.q, self.p, self.n = q, F.p, F.n
        self._half = (q - 1) // 2 if self.p != 2 else q - 1

    def canonical(self, m: Matrix) -> Matrix:
        """Representative of ``{m, -m}``: first nonzero entry is ``omega^k``, ``k < (q-1)/2``."""
        if self.p == 2:
            return m
        first = next(x for x in m if x)
        if self.F.log[first] < self._half:
            return m
        neg = self.F.neg
        return (neg(m[0]), neg(m[1]), neg(m[2]), neg(m[3]))

    def matmul(self, x: Matrix, y: Matrix) -> Matrix:
        F = self.F
        a, b, c, d = x
        e, f, g, h = y
        return (F.add(F.mul(a, e), F.mul(b, g)), F.add(F.mul(a, f), F.mul(b, h)),
                F.add(F.mul(c, e), F.mul(d, g)), F.add(F.mul(c, f), F.mul(d, h)))

    def det(self, x: Matrix) -> int:
        F = self.F
        return F.sub(F.mul(x[0], x[3]), F.mul(x[1], x[2]))

    def matinv(self, x: Matrix) -> Matrix:
        a, b, c, d = x
        neg = self.F.neg
        return (d, neg(b), neg(c), a)

    def generator_matrices(self) -> list[Matrix]:
        F = self.F
        w = F.omega
        one, zero = 1, 0
        gens = [(one, one, zero, one),
                (w, zero, zero, F.inv(w)),
                (zero, one, F.neg(one), zero)]
        return [self.canonical(g) for g in gens]

    @cached_property
    def group(self) -> FiniteGroup:
        name = f"PSL(2,{self.q})"
        G = from_elements((1, 0, 0, 1), self.generator_matrices(),
                          lambda x, y: self.canonical(self.matmul(x, y)), lambda x: x, name)
        G.cache["psl2"] = self
        return G

    @cached_property
    def index(self) -> dict[Matrix, int]:
        return {m: i for i, m in enumerate(self.group.labels)}

    def element(self, m: Matrix) -> int:
        if self.det(m) != 1:
            raise ContractError(f"matrix {m} does not have determinant 1")
        return self.index[self.canonical(m)]

    def matrix(self, i: int) -> Matrix:
        return self.group.labels[i]

    def diag(self, a: int) -> int:
        """Index of ``diag(a, a^-1)``."""
        return self.element((a, 0, 0, self.F.inv(a)))


@lru_cache(maxsize=None)
def psl2(q: int) -> PSL2:
    if prime_power(q) is None:
        raise ContractError(f"{q} is not a prime power")
    return PSL2(q)


def psl2_order(q: int) -> int:
    from math import gcd
    return q * (q * q - 1) // gcd(2, q - 1)


# -- automorphisms ------------------------------------------------------------------

@dataclass(frozen=True)
class Psl2Aut:
    """The automorphism ``inner(g) * sigma^i * D^j`` (apply left to right).

    ``inner`` is an element index of PSL_2(q) (conjugation ``x -> g^-1 x g``)
    or ``None`` for the identity.
    """

    q: int
    i: int = 0
    j: int = 0
    inner: int | None = None

    def __post_init__(self):
        p, n = prime_power(self.q)
        object.__setattr__(self, "i", self.i % n)
        object.__setattr__(self, "j", self.j % (self.q - 1) if p != 2 else 0)
        if self.inner == 0:
            object.__setattr__(self, "inner", None)

    @property
    def label(self) -> str:
        parts = []
        if self.inner is not None:
            parts.append(f"inn({self.inner})")
        if self.i:
            parts.append(f"s^{self.i}")
        if self.j:
            parts.append(f"D^{self.j}")
        return "*".join(parts) or "1"


def identity_aut(q: int) -> Psl2Aut:
    return Psl2Aut(q)


def frobenius(q: int) -> Psl2Aut:
    return Psl2Aut(q, i=1)


def diagonal(q: int) -> Psl2Aut:
    if q % 2 == 0:
        raise ContractError("the diagonal automorphism requires odd q")
    return Psl2Aut(q, j=1)


def inner(q: int, g: int) -> Psl2Aut:
    return Psl2Aut(q, inner=g)


def _apply_matrix(S: PSL2, alpha: Psl2Aut, m: Matrix) -> Matrix:
    F = S.F
    if alpha.inner is not None:
        g = S.matrix(alpha.inner)
        m = S.matmul(S.matmul(S.matinv(g), m), g)
    if alpha.i:
        m = tuple(F.frobenius(x, alpha.i) for x in m)
    if alpha.j:
        wj = F.omega_pow(alpha.j)
        m = (m[0], F.mul(m[1], F.inv(wj)), F.mul(m[2], wj), m[3])
    return S.canonical(m)


def apply(alpha: Psl2Aut, x: int) -> int:
    S = psl2(alpha.q)
    return S.index[_apply_matrix(S, alpha, S.matrix(x))]


def aut_permutation(alpha: Psl2Aut) -> np.ndarray:
    """``alpha`` as an index permutation of PSL_2(q)."""
    S = psl2(alpha.q)
    G = S.group
    idx = S.index
    return np.fromiter((idx[_apply_matrix(S, alpha, m)] for m in G.labels), dtype=np.int64,
                       count=G.order)


def compose(alpha: Psl2Aut, beta: Psl2Aut) -> Psl2Aut:
    """``alpha`` followed by ``beta``.

    Uses ``inn(t) a = a inn(t^a)`` and ``D^j sigma^k = sigma^k D^(j p^k)``.
    """
    if alpha.q != beta.q:
        raise ContractError("automorphisms of different groups")
    q = alpha.q
    p, n = prime_power(q)
    outer_a = Psl2Aut(q, alpha.i, alpha.j)
    inner_part = alpha.inner or 0
    if beta.inner is not None:
        # outer_a inn(t) = inn(t^(outer_a^-1)) outer_a
        t = apply(inverse(outer_a), beta.inner)
        inner_part = psl2(q).group.mul(inner_part, t)
    i = alpha.i + beta.i
    j = alpha.j * p ** beta.i + beta.j if p != 2 else 0
    return Psl2Aut(q, i, j, inner_part)


def inverse(alpha: Psl2Aut) -> Psl2Aut:
    q = alpha.q
    p, n = prime_power(q)
    # (sigma^i D^j)^-1 = D^-j sigma^-i = sigma^-i D^(-j p^(n-i))
    i = (-alpha.i) % n
    j = (-alpha.j * p ** i) if p != 2 else 0
    out = Psl2Aut(q, i, j)
    if alpha.inner is not None:
        g_inv = psl2(q).group.inv(alpha.inner)
        out = compose(out, inner(q, g_inv))
    return out


def commutator(alpha: Psl2Aut, beta: Psl2Aut) -> Psl2Aut:
    """``[alpha, beta] = alpha^-1 beta^-1 alpha beta``."""
    return compose(compose(inverse(alpha), inverse(beta)), compose(alpha, beta))


def outer_coset_reps(q: int) -> list[Psl2Aut]:
    """Normal forms ``sigma^i D^j``, ``0 <= i < n``, ``0 <= j < q-1`` (field powers only for even q)."""
    p, n = prime_power(q)
    if p == 2:
        return [Psl2Aut(q, i=i) for i in range(n)]
    return [Psl2Aut(q, i=i, j=j) for i in range(n) for j in range(q - 1)]


def fixed_points(alpha: Psl2Aut) -> int:
    perm = aut_permutation(alpha)
    return int(np.count_nonzero(perm == np.arange(perm.size)))


def fixed_subgroup_mask(alpha: Psl2Aut) -> np.ndarray:
    perm = aut_permutation(alpha)
    return perm == np.arange(perm.size)


def ad_image_size(alpha: Psl2Aut) -> int:
    """``|{a^-1 a^alpha : a in S}|``."""
    G = psl2(alpha.q).group
    perm = aut_permutation(alpha)
    vals = G.table[G.inverse, perm]
    return int(np.unique(vals).size)


def lemma_bound_squared(q: int) -> int:
    """Square of ``p^(n/2) (p^n - 1) / 2``, times 4: ``p^n (p^n - 1)^2``.

    ``|Fix| <= p^(n/2)(p^n-1)/2`` iff ``4 |Fix|^2 <= lemma_bound_squared(q)``.
    """
    return q * (q - 1) ** 2


def within_lemma_bound(q: int, fix: int) -> bool:
    return 4 * fix * fix <= lemma_bound_squared(q)


def lemma_bound(q: int) -> float:
    return (q * (q - 1) ** 2) ** 0.5 / 2
