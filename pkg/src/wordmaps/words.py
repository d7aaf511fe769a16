"""Reduced words, their evaluation, and their variations.

Bracket syntax: ``[u,v] = u' v' u v`` where ``'`` marks an inverse, and
``[u,v,w] = [[u,v],w]`` (left-normed).  Named words:

========  ==============================================
comm      ``[x1,x2]``
engel2    ``[x1,x2,x2]``
metab     ``[[x1,x2],[x3,x4]]``
gamma:d   left-normed ``[x1,x2,...,xd]``
gammaR:d  right-nested ``[x1,[x2,[...,xd]]]``
power:k   ``x1 x1 ... x1`` (k letters)
========  ==============================================
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from .errors import ContractError, ParseError, ResourceLimitError
from .groups import FiniteGroup

MAX_RANK = 9
MAX_LENGTH = 64

Letter = tuple[int, int]


def free_reduce(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for v, s in letters:
        if out and out[-1] == (v, -s):
            out.pop()
        else:
            out.append((v, s))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """Freely reduced word in ``X_1, X_2, ...``; letters are ``(variable, ±1)``."""

    letters: tuple[Letter, ...]
    name: str = ""

    def __post_init__(self):
        letters = free_reduce(tuple((int(v), int(s)) for v, s in self.letters))
        for v, s in letters:
            if v < 1 or s not in (1, -1):
                raise ContractError(f"bad letter {(v, s)}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def from_letters(cls, letters: Sequence[Letter], name: str = "") -> Word:
        return cls(tuple(letters), name)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.name or self.expanded()

    def expanded(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"X{v}" + ("^-1" if s < 0 else "") for v, s in self.letters)

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(sorted({v for v, _ in self.letters}))

    @property
    def rank(self) -> int:
        """Number of distinct variables."""
        return len(self.variables)

    @property
    def arity(self) -> int:
        """Number of arguments expected by :func:`evaluate` (largest variable index)."""
        return max((v for v, _ in self.letters), default=0)

    def multiplicity(self, var: int) -> int:
        return sum(1 for v, _ in self.letters if v == var)

    @property
    def multiplicities(self) -> dict[int, int]:
        return {v: self.multiplicity(v) for v in self.variables}

    def inverse(self) -> Word:
        return Word(tuple((v, -s) for v, s in reversed(self.letters)))

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def relabel(self) -> Word:
        """Rename variables to ``1..rank`` in order of first appearance."""
        mapping: dict[int, int] = {}
        for v, _ in self.letters:
            mapping.setdefault(v, len(mapping) + 1)
        return Word(tuple((mapping[v], s) for v, s in self.letters), self.name)

    def is_power_word(self) -> bool:
        return self.rank == 1 and len({s for _, s in self.letters}) == 1


def commutator(u: Word, v: Word) -> Word:
    return u.inverse() * v.inverse() * u * v


def variable(i: int) -> Word:
    return Word(((i, 1),))


def gamma_left(d: int) -> Word:
    w = variable(1)
    for i in range(2, d + 1):
        w = commutator(w, variable(i))
    return Word(w.letters, f"gamma:{d}")


def gamma_right(d: int) -> Word:
    w = variable(d)
    for i in range(d - 1, 0, -1):
        w = commutator(variable(i), w)
    return Word(w.letters, f"gammaR:{d}")


def named_word(name: str) -> Word:
    x1, x2, x3, x4 = (variable(i) for i in range(1, 5))
    if name == "comm":
        return Word(commutator(x1, x2).letters, "comm")
    if name == "engel2":
        return Word(commutator(commutator(x1, x2), x2).letters, "engel2")
    if name == "metab":
        return Word(commutator(commutator(x1, x2), commutator(x3, x4)).letters, "metab")
    kind, _, arg = name.partition(":")
    if kind in ("gamma", "gammaR", "power") and arg.isdigit():
        d = int(arg)
        if kind == "power":
            return Word(((1, 1),) * d, name)
        if d < 1 or d > MAX_RANK:
            raise ParseError("gamma rank out of range", name, len(kind) + 1)
        return gamma_left(d) if kind == "gamma" else gamma_right(d)
    raise ParseError(f"unknown named word {name!r}", name, 0)


NAMED_WORDS = ("comm", "engel2", "metab", "gamma:d", "gammaR:d", "power:k")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.text, self.pos)

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> Word:
        w = Word(())
        while self.peek() and self.peek() not in ",])":
            w = w * self.term()
        return w

    def term(self) -> Word:
        ch = self.peek()
        if ch == "x":
            self.pos += 1
            if self.pos >= len(self.text) or not self.text[self.pos].isdigit():
                raise self.error("expected variable index after 'x'")
            v = int(self.text[self.pos])
            if v == 0:
                raise self.error("variables are x1..x9")
            self.pos += 1
            w = variable(v)
        elif ch == "[":
            self.pos += 1
            parts = [self.expr()]
            while self.peek() == ",":
                self.pos += 1
                parts.append(self.expr())
            if self.peek() != "]":
                raise self.error("expected ']'")
            self.pos += 1
            if len(parts) < 2:
                raise self.error("commutator needs at least two entries")
            w = parts[0]
            for p in parts[1:]:
                w = commutator(w, p)
        elif ch == "(":
            self.pos += 1
            w = self.expr()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
        elif ch == "1":
            self.pos += 1
            w = Word(())
        else:
            raise self.error(f"unexpected {ch!r}" if ch else "unexpected end of input")
        while self.peek() == "'":
            self.pos += 1
            w = w.inverse()
        return w


def parse(spec: str) -> Word:
    """Parse a named word or bracket syntax into a reduced :class:`Word`."""
    text = spec.strip()
    if text and text[0].isalpha() and text[0] != "x":
        w = named_word(text)
    else:
        p = _Parser(text)
        w = p.expr()
        if p.peek():
            raise p.error("trailing input")
        w = Word(w.letters, text)
    if w.arity > MAX_RANK:
        raise ParseError(f"more than {MAX_RANK} variables", spec, 0)
    if w.length > MAX_LENGTH:
        raise ParseError(f"reduced length {w.length} exceeds {MAX_LENGTH}", spec, 0)
    return w


# -- evaluation -------------------------------------------------------------------

def evaluate(w: Word, G: FiniteGroup, args: Sequence[int]) -> int:
    """Value of ``w`` at ``args`` (``args[i-1]`` substitutes ``X_i``)."""
    if len(args) < w.arity:
        raise ContractError(f"word needs {w.arity} arguments, got {len(args)}")
    acc = 0
    for v, s in w.letters:
        x = args[v - 1]
        acc = G.mul(acc, x if s > 0 else G.inv(x))
    return acc


def evaluate_many(w: Word, G: FiniteGroup, args: Sequence[np.ndarray]) -> np.ndarray:
    """Vectorised :func:`evaluate` over broadcastable index arrays."""
    if len(args) < w.arity:
        raise ContractError(f"word needs {w.arity} arguments, got {len(args)}")
    arrs = [np.asarray(a, dtype=np.int64) for a in args]
    shape = np.broadcast_shapes(*(a.shape for a in arrs)) if arrs else ()
    acc = np.zeros(shape, dtype=np.int64)
    inv = G.inverse
    for v, s in w.letters:
        x = arrs[v - 1]
        acc = G.mul_arrays(acc, x if s > 0 else inv[x])
    return np.asarray(acc, dtype=np.int64)


# -- variations --------------------------------------------------------------------

@dataclass(frozen=True)
class Variation:
    """A second index for every letter of ``base``.

    ``word`` is the induced word over the doubled alphabet, with variables
    numbered by ``(original variable, second index)`` in sorted order;
    ``origin[k-1]`` is the original variable of new variable ``k``.
    """

    base: Word
    labels: tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.base.letters):
            raise ContractError("one label per letter required")
        mult = self.base.multiplicities
        for (v, _), lab in zip(self.base.letters, self.labels):
            if not 1 <= lab <= mult[v]:
                raise ContractError(f"second index {lab} out of range for X{v}")

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return sorted({(v, lab) for (v, _), lab in zip(self.base.letters, self.labels)})

    @property
    def word(self) -> Word:
        num = {pair: k + 1 for k, pair in enumerate(self.pairs)}
        return Word(tuple((num[(v, lab)], s) for (v, s), lab in zip(self.base.letters, self.labels)),
                    self.label)

    @property
    def origin(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.pairs)

    @property
    def is_identity(self) -> bool:
        """True when every variable keeps a single second index (the base word itself)."""
        return all(lab == 1 for lab in self.labels)

    def canonical(self) -> Variation:
        """Rename second indices per variable into first-use order."""
        seen: dict[int, dict[int, int]] = {}
        out = []
        for (v, _), lab in zip(self.base.letters, self.labels):
            m = seen.setdefault(v, {})
            out.append(m.setdefault(lab, len(m) + 1))
        return Variation(self.base, tuple(out))

    @property
    def label(self) -> str:
        parts = []
        for v in self.base.variables:
            labs = [lab for (u, _), lab in zip(self.base.letters, self.labels) if u == v]
            parts.append(f"X{v}:" + "".join(str(x) for x in labs))
        return " ".join(parts)


def set_partitions_rgs(m: int, max_blocks: int | None = None) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length ``m`` (1-based blocks)."""
    limit = m if max_blocks is None else max_blocks
    if m == 0:
        yield ()
        return

    def rec(prefix: list[int], top: int):
        if len(prefix) == m:
            yield tuple(prefix)
            return
        for b in range(1, min(top + 1, limit) + 1):
            prefix.append(b)
            yield from rec(prefix, max(top, b))
            prefix.pop()

    yield from rec([1], 1)


def bell(m: int) -> int:
    # Bell triangle
    row = [1]
    for _ in range(m):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def variation_count(w: Word) -> int:
    return math.prod(bell(m) for m in w.multiplicities.values())


def variations(
    w: Word,
    budget: int | None = None,
    max_classes: dict[int, int] | None = None,
) -> Iterator[Variation]:
    """Canonical variations of ``w`` (one per tuple of set partitions of occurrences).

    ``max_classes`` caps the number of second indices per variable; a cap of
    1 keeps that variable unvaried.  Raises :class:`ResourceLimitError` before
    yielding anything if the stream would exceed ``budget``.
    """
    vars_ = w.variables
    caps = max_classes or {}
    mult = w.multiplicities
    if budget is not None:
        count = math.prod(sum(1 for _ in set_partitions_rgs(mult[v], caps.get(v))) for v in vars_) \
            if caps else variation_count(w)
        if count > budget:
            raise ResourceLimitError(f"{count} variations exceed budget {budget}", required=count,
                                     budget=budget)
    positions = {v: [k for k, (u, _) in enumerate(w.letters) if u == v] for v in vars_}
    streams = [list(set_partitions_rgs(mult[v], caps.get(v))) for v in vars_]
    for combo in itertools.product(*streams):
        labels = [0] * len(w.letters)
        for v, rgs in zip(vars_, combo):
            for k, lab in zip(positions[v], rgs):
                labels[k] = lab
        yield Variation(w, tuple(labels))


def raw_labelings(w: Word) -> Iterator[Variation]:
    """Every labelling with second indices in ``1..mu`` (before deduplication)."""
    mult = w.multiplicities
    ranges = [range(1, mult[v] + 1) for v, _ in w.letters]
    for labels in itertools.product(*ranges):
        yield Variation(w, labels)


# -- variation pruning ------------------------------------------------------------

class Verdict(Enum):
    VSMB_BY_LEMMA = "vsmb_by_lemma"
    NEEDS_CHECK = "needs_check"


@dataclass(frozen=True)
class PruneResult:
    verdict: Verdict
    rule: int | None = None
    reason: str = ""

    @property
    def vsmb(self) -> bool:
        return self.verdict is Verdict.VSMB_BY_LEMMA


def vsmb_prune(w: Word | Variation) -> PruneResult:
    """Apply the three sufficient VSMB criteria for reduced words.

    1. some variable occurs exactly once;
    2. some variable occurs exactly twice, either with equal signs, or with
       opposite signs around a segment that is itself VSMB by these rules;
    3. ``1 <= length <= 8`` and ``w`` is not the eighth power of a letter.
    """
    word = w.word if isinstance(w, Variation) else w
    if not word.letters:
        return PruneResult(Verdict.NEEDS_CHECK, None, "empty word")
    mult = word.multiplicities
    for v in word.variables:
        if mult[v] == 1:
            return PruneResult(Verdict.VSMB_BY_LEMMA, 1, f"X{v} occurs once")
    for v in word.variables:
        if mult[v] != 2:
            continue
        i, j = [k for k, (u, _) in enumerate(word.letters) if u == v]
        si, sj = word.letters[i][1], word.letters[j][1]
        if si == sj:
            return PruneResult(Verdict.VSMB_BY_LEMMA, 2, f"X{v} occurs twice with equal signs")
        inner = Word(word.letters[i + 1:j])
        if inner.letters and vsmb_prune(inner).vsmb:
            return PruneResult(Verdict.VSMB_BY_LEMMA, 2,
                               f"X{v}^±1 ... X{v}^∓1 encloses a VSMB segment of length {inner.length}")
    if word.length <= 8 and not (word.is_power_word() and word.length == 8):
        return PruneResult(Verdict.VSMB_BY_LEMMA, 3, f"length {word.length} <= 8")
    return PruneResult(Verdict.NEEDS_CHECK, None, "no criterion applies")
