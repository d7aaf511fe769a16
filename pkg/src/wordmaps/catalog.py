"""Named group constructors.

``dihedral:n`` is the dihedral group of ORDER ``n`` (so ``dihedral:16`` has
sixteen elements and a rotation of order 8).
"""

from __future__ import annotations

from .errors import ContractError, ParseError
from .groups import DEFAULT_ORDER_CAP, FiniteGroup, direct_product, from_elements, from_generators
from .psl2 import prime_power, psl2

NAMED_KINDS = ("cyclic", "dihedral", "quaternion", "sym", "alt", "psl2", "sz", "product")


def cycle(degree: int, points: list[int]) -> list[int]:
    perm = list(range(degree))
    for a, b in zip(points, points[1:] + points[:1]):
        perm[a] = b
    return perm


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ContractError("cyclic group order must be positive")
    gens = [cycle(n, list(range(n)))] if n > 1 else []
    return from_generators(max(n, 1), gens, name=f"C{n}")


def dihedral(order: int) -> FiniteGroup:
    if order < 4 or order % 2:
        raise ContractError("dihedral:n needs an even order n >= 4")
    m = order // 2
    if m == 2:
        gens = [[1, 0, 3, 2], [2, 3, 0, 1]]
        return from_generators(4, gens, name="D4")
    rot = cycle(m, list(range(m)))
    refl = [(-x) % m for x in range(m)]
    return from_generators(m, [rot, refl], name=f"D{order}")


def quaternion(order: int = 8) -> FiniteGroup:
    if order != 8:
        raise ContractError("only quaternion:8 is supported")
    # unit quaternions as (sign, axis) with axis in 1, i, j, k
    table = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
             (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
             (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
             (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0)}

    def mul(x, y):
        s, a = table[(x[1], y[1])]
        return (x[0] * y[0] * s, a)

    return from_elements((1, 0), [(1, 1), (1, 2)], mul, lambda x: x, "Q8")


def symmetric(n: int) -> FiniteGroup:
    if n < 1:
        raise ContractError("sym:n needs n >= 1")
    if n == 1:
        return from_generators(1, [], name="S1")
    if n == 2:
        return from_generators(2, [[1, 0]], name="S2")
    return from_generators(n, [cycle(n, list(range(n))), cycle(n, [0, 1])], name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n < 1:
        raise ContractError("alt:n needs n >= 1")
    if n < 3:
        return from_generators(n, [], name=f"A{n}")
    if n == 3:
        return from_generators(3, [cycle(3, [0, 1, 2])], name="A3")
    long = cycle(n, list(range(n))) if n % 2 else cycle(n, list(range(1, n)))
    return from_generators(n, [cycle(n, [0, 1, 2]), long], name=f"A{n}")


def suzuki2() -> FiniteGroup:
    """Sz(2), the Frobenius group C5 : C4 acting on five points."""
    return from_generators(5, [[1, 2, 3, 4, 0], [(2 * x) % 5 for x in range(5)]], name="Sz(2)")


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def named(spec: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Build a group from ``kind:arg`` (see ``NAMED_KINDS``).

    ``product:A,B,...`` takes factors separated by top-level commas; nest
    products with parentheses, e.g. ``product:(product:cyclic:2,cyclic:2),sym:3``.
    """
    spec = spec.strip()
    if spec.startswith("(") and spec.endswith(")"):
        return named(spec[1:-1], order_cap)
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise ParseError("expected kind:argument", spec, len(spec))
    if kind == "product":
        factors = [named(part, order_cap) for part in _split_top(arg)]
        if len(factors) < 2:
            raise ParseError("product needs at least two factors", spec, len(kind) + 1)
        G = direct_product(factors, order_cap=order_cap)
        G.name = " x ".join(f.name for f in factors)
        return G
    try:
        k = int(arg)
    except ValueError:
        raise ParseError(f"expected an integer argument for {kind}", spec, len(kind) + 1) from None
    if kind == "cyclic":
        return cyclic(k)
    if kind == "dihedral":
        return dihedral(k)
    if kind == "quaternion":
        return quaternion(k)
    if kind == "sym":
        return symmetric(k)
    if kind == "alt":
        return alternating(k)
    if kind == "psl2":
        if prime_power(k) is None:
            raise ContractError(f"psl2:{k}: {k} is not a prime power")
        return psl2(k).group
    if kind == "sz":
        if k != 2:
            raise ContractError("only sz:2 is supported")
        return suzuki2()
    raise ParseError(f"unknown group kind {kind!r}", spec, 0)
