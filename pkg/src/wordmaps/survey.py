"""Word probabilities across a corpus or a family of groups, written as CSV."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .catalog import cyclic, dihedral, named, symmetric, alternating
from .corpus import ingest
from .errors import ResourceLimitError, WordMapError
from .groups import FiniteGroup, center, is_solvable
from .probability import DEFAULT_BUDGET, word_histogram
from .solvable import reduce_to_minimal_verbal, verbal_subgroup
from .words import Word

FAMILIES = ("dihedral", "cyclic", "abelian", "sym", "alt")
CSV_FIELDS = ("group", "order", "word", "hits", "total", "numerator", "denominator", "float",
              "is_identity", "solvable", "action")


@dataclass(frozen=True)
class SurveyRow:
    group: str
    order: int
    word: str
    hits: int
    total: int
    numerator: int
    denominator: int
    float: float
    is_identity: bool
    solvable: bool
    action: str

    @property
    def value(self) -> Fraction:
        return Fraction(self.hits, self.total)


@dataclass
class SurveySummary:
    word: str
    rows: list[SurveyRow] = field(default_factory=list)
    errors: list[tuple[str, str]] = field(default_factory=list)

    @property
    def non_identity(self) -> list[SurveyRow]:
        return [r for r in self.rows if not r.is_identity]

    @property
    def max_value(self) -> Fraction | None:
        vals = [r.value for r in self.non_identity]
        return max(vals) if vals else None

    @property
    def argmax(self) -> list[str]:
        best = self.max_value
        return [r.group for r in self.non_identity if r.value == best]

    def to_dict(self) -> dict:
        best = self.max_value
        return {"word": self.word, "groups": len(self.rows), "identity_rows": len(self.rows) - len(self.non_identity),
                "max_non_identity": None if best is None else [best.numerator, best.denominator],
                "argmax": self.argmax, "errors": [list(e) for e in self.errors]}


def _partitions(n: int, largest: int | None = None) -> Iterator[list[int]]:
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _abelian_invariants(n: int) -> Iterator[list[int]]:
    """Invariant factor lists ``d_1 | d_2 | ...`` of the abelian groups of order ``n``."""
    primes = sorted(_prime_factors(n).items())
    choices: list[list[list[int]]] = [list(_partitions(e)) for _, e in primes]

    def rec(i: int, acc: list[list[int]]):
        if i == len(primes):
            width = max((len(a) for a in acc), default=0)
            factors = [1] * width
            for (p, _), part in zip(primes, acc):
                for j, e in enumerate(part):
                    factors[width - 1 - j] *= p ** e
            yield [f for f in factors if f > 1] or [1]
            return
        for part in choices[i]:
            yield from rec(i + 1, acc + [part])

    yield from rec(0, [])


def family(kind: str, max_order: int) -> list[FiniteGroup]:
    """Named families up to ``max_order`` (dihedral groups are indexed by order)."""
    if kind == "cyclic":
        return [cyclic(n) for n in range(1, max_order + 1)]
    if kind == "dihedral":
        return [dihedral(n) for n in range(4, max_order + 1, 2)]
    if kind == "sym":
        out, n, f = [], 1, 1
        while f <= max_order:
            out.append(symmetric(n))
            n += 1
            f *= n
        return out
    if kind == "alt":
        out, n = [], 3
        while _factorial(n) // 2 <= max_order:
            out.append(alternating(n))
            n += 1
        return out
    if kind == "abelian":
        out = []
        for n in range(1, max_order + 1):
            for inv in _abelian_invariants(n):
                if len(inv) == 1:
                    out.append(cyclic(inv[0]))
                else:
                    out.append(named("product:" + ",".join(f"cyclic:{d}" for d in inv)))
        return out
    raise WordMapError(f"unknown family {kind!r}; expected one of {', '.join(FAMILIES)}")


def _factorial(n: int) -> int:
    f = 1
    for k in range(2, n + 1):
        f *= k
    return f


def _action(G: FiniteGroup, w: Word, budget: int) -> str:
    ctx = reduce_to_minimal_verbal(G, w, budget)
    return "trivial" if ctx.V <= center(ctx.group) else "nontrivial"


def survey_row(G: FiniteGroup, w: Word, budget: int = DEFAULT_BUDGET, branches: bool = True) -> SurveyRow:
    total = G.order ** w.arity
    solv = is_solvable(G)
    if verbal_subgroup(G, w, budget).is_trivial:
        hits = total
    else:
        hits = int(word_histogram(G, w, budget=budget)[0])
    action = ""
    if branches and solv and hits != total:
        action = _action(G, w, budget)
    f = Fraction(hits, total)
    return SurveyRow(G.name, G.order, w.name or str(w), hits, total, f.numerator, f.denominator,
                     hits / total, hits == total, solv, action)


def _resolve(source, max_order: int | None) -> list[FiniteGroup]:
    if isinstance(source, (str, Path)):
        if str(source) in FAMILIES:
            if max_order is None:
                raise WordMapError("a family survey needs max_order")
            return family(str(source), max_order)
        return ingest(source, max_order)
    groups = list(source)
    if max_order is not None:
        groups = [G for G in groups if G.order <= max_order]
    return sorted(groups, key=lambda G: (G.order, G.name))


def survey(
    source: str | Path | Iterable[FiniteGroup],
    w: Word,
    max_order: int | None = None,
    *,
    where: Callable[[FiniteGroup], bool] | None = None,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    out: str | Path | None = None,
    branches: bool = True,
) -> SurveySummary:
    """One row per group, in ``(order, name)`` order.

    ``source`` is a corpus directory, a family name from ``FAMILIES`` or a
    list of groups.  A group whose computation fails is listed under
    ``errors``; budget refusals propagate.
    """
    groups = [G for G in _resolve(source, max_order) if where is None or where(G)]

    def job(G: FiniteGroup):
        try:
            return survey_row(G, w, budget, branches)
        except ResourceLimitError:
            raise
        except WordMapError as exc:
            return (G.name, str(exc))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, groups))
    else:
        results = [job(G) for G in groups]
    summary = SurveySummary(w.name or str(w))
    for r in results:
        (summary.rows if isinstance(r, SurveyRow) else summary.errors).append(r)
    if out is not None:
        Path(out).write_bytes(rows_to_csv(summary.rows).encode())
    return summary


def rows_to_csv(rows: Iterable[SurveyRow]) -> str:
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    wr.writeheader()
    for r in rows:
        d = asdict(r)
        d["float"] = repr(r.float)
        d["is_identity"] = str(r.is_identity).lower()
        d["solvable"] = str(r.solvable).lower()
        wr.writerow(d)
    return buf.getvalue()
