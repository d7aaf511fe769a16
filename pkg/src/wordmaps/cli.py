"""Command-line interface: ``wordmaps {prob,survey,vsmb,fix,badness}``.

Exit status is 0 on success, 2 on an engine error and 3 when a budget or
order cap refuses the computation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import psl2 as psl2_mod
from .catalog import NAMED_KINDS, named
from .corpus import load_group_file
from .errors import ContractError, ResourceLimitError, WordMapError
from .groups import (FiniteGroup, center, derived_length, derived_subgroup, is_solvable, normal_closure,
                     whole)
from .probability import DEFAULT_BUDGET, coset_probability, sample_probability, word_probability
from .solvable import analyze, gamma_recursion_check
from .survey import FAMILIES, rows_to_csv, survey
from .vsmb import DEFAULT_GROUPS, DEFAULT_INSTANCE_BUDGET, check_word
from .words import NAMED_WORDS, parse

WORD_HELP = ("word: a named word (" + ", ".join(NAMED_WORDS) + ") or bracket syntax over x1..x9, "
             "e.g. \"[x1,x2,x2]\"; [u,v] = u'v'uv, ' inverts, [a,b,c] = [[a,b],c]")
GROUP_HELP = ("group: a JSON group file or kind:arg with kind in " + ", ".join(NAMED_KINDS)
              + " (dihedral:n has order n)")
FILTERS = ("solvable", "nonsolvable", "nonabelian", "nonmetabelian")


def resolve_group(spec: str) -> FiniteGroup:
    path = Path(spec)
    if path.suffix == ".json" and path.exists():
        return load_group_file(path)
    return named(spec)


def _normal_subgroup(G: FiniteGroup, spec: str):
    if spec == "derived":
        return derived_subgroup(G)
    if spec == "center":
        return center(G)
    if spec == "whole":
        return whole(G)
    kind, _, arg = spec.partition(":")
    if kind == "closure" and arg:
        return normal_closure(G, [int(x) for x in arg.split(",")])
    raise ContractError(f"unknown normal subgroup {spec!r}; use derived, center, whole or closure:i,j,..")


def _filter(names: str | None):
    if not names:
        return None
    wanted = names.split(",")
    bad = [n for n in wanted if n not in FILTERS]
    if bad:
        raise ContractError(f"unknown filter {bad[0]!r}; choose from {', '.join(FILTERS)}")

    def keep(G: FiniteGroup) -> bool:
        solv = is_solvable(G)
        tests = {"solvable": lambda: solv, "nonsolvable": lambda: not solv,
                 "nonabelian": lambda: not G.is_abelian,
                 "nonmetabelian": lambda: derived_length(G) not in (0, 1, 2)}
        return all(tests[n]() for n in wanted)

    return keep


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_prob(a) -> None:
    G, w = resolve_group(a.group), parse(a.word)
    head = {"group": G.name, "order": G.order, "word": w.name or str(w), "target": a.target}
    if a.sample:
        res = sample_probability(G, w, a.target, samples=a.sample, seed=a.seed)
        _emit(_json({**head, "mode": "sampled", **res.to_dict()}), a.out)
        return
    budget = a.budget or DEFAULT_BUDGET
    if a.coset:
        if not a.reps:
            raise ContractError("--coset needs --reps")
        N = _normal_subgroup(G, a.coset)
        reps = [int(x) for x in a.reps.split(",")]
        res = coset_probability(G, N, w, reps, budget=budget, threads=a.threads)
        head.update(coset=a.coset, reps=reps)
    else:
        res = word_probability(G, w, a.target, budget=budget, threads=a.threads)
    _emit(_json({**head, "mode": "exact", **res.to_dict()}), a.out)


def cmd_survey(a) -> None:
    if bool(a.corpus) == bool(a.family):
        raise ContractError("give exactly one of --corpus and --family")
    source = a.corpus or a.family
    summary = survey(source, parse(a.word), a.max_order, where=_filter(a.filter),
                     budget=a.budget or DEFAULT_BUDGET, threads=a.threads, out=a.out,
                     branches=not a.no_branches)
    if a.out:
        sys.stdout.write(_json(summary.to_dict()))
    else:
        sys.stdout.write(rows_to_csv(summary.rows))
        sys.stderr.write(_json(summary.to_dict()))


def cmd_vsmb(a) -> None:
    groups = a.groups.split(",") if a.groups else list(DEFAULT_GROUPS)
    rep = check_word(parse(a.word), groups, budget=a.budget or DEFAULT_INSTANCE_BUDGET,
                     seed=a.seed, stream=a.stream, threads=a.threads)
    _emit(_json(rep.to_dict()), a.out)
    if a.out:
        sys.stdout.write(_json({k: v for k, v in rep.summary.items() if k != "unknown_instances"}))


def fix_rows(q: int) -> list[dict]:
    rows = []
    bound = psl2_mod.lemma_bound(q)
    for alpha in psl2_mod.outer_coset_reps(q):
        f = psl2_mod.fixed_points(alpha)
        rows.append({"alpha_i": alpha.i, "alpha_j": alpha.j, "fix_count": f,
                     "lemma_bound": f"{bound:.6f}",
                     "within_bound": str(psl2_mod.within_lemma_bound(q, f)).lower(),
                     "ad_image_size": psl2_mod.ad_image_size(alpha)})
    return rows


def cmd_fix(a) -> None:
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=["alpha_i", "alpha_j", "fix_count", "lemma_bound", "within_bound",
                                         "ad_image_size"], lineterminator="\n")
    wr.writeheader()
    wr.writerows(fix_rows(a.q))
    _emit(buf.getvalue(), a.out)


def cmd_badness(a) -> None:
    G, w = resolve_group(a.group), parse(a.word)
    budget = a.budget or DEFAULT_BUDGET
    kind, _, arg = a.word.partition(":")
    if kind == "gamma" and arg.isdigit():
        rep = gamma_recursion_check(G, int(arg), budget)
    else:
        rep = analyze(G, w, budget)
    _emit(_json(rep.to_dict()), a.out)


def build_parser() -> argparse.ArgumentParser:
    def common(p: argparse.ArgumentParser, default) -> None:
        p.add_argument("--threads", type=int, default=default(1), help="worker threads")
        p.add_argument("--budget", type=int, default=default(None), help="evaluation budget")
        p.add_argument("--seed", type=int, default=default(0), help="random seed")
        p.add_argument("--out", default=default(None), help="output file (default: stdout)")

    parser = argparse.ArgumentParser(prog="wordmaps", description="Exact word-map computations on finite groups.",
                                     epilog=WORD_HELP)
    common(parser, lambda v: v)
    shared = argparse.ArgumentParser(add_help=False)
    common(shared, lambda v: argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prob", parents=[shared], help="word probability", epilog=WORD_HELP)
    p.add_argument("--group", required=True, help=GROUP_HELP)
    p.add_argument("--word", required=True)
    p.add_argument("--target", type=int, default=0, help="element index (0 is the identity)")
    p.add_argument("--coset", help="normal subgroup: derived, center, whole or closure:i,j,..")
    p.add_argument("--reps", help="comma-separated coset representatives")
    p.add_argument("--sample", type=int, help="Monte Carlo with this many samples instead of enumeration")
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("survey", parents=[shared], help="probabilities over a corpus or family",
                       epilog=WORD_HELP)
    p.add_argument("--corpus", help="directory of group files")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--word", required=True)
    p.add_argument("--max-order", type=int)
    p.add_argument("--filter", help="comma-separated: " + ", ".join(FILTERS))
    p.add_argument("--no-branches", action="store_true", help="skip the action column")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("vsmb", parents=[shared], help="search varied coset word maps for constancy",
                       epilog=WORD_HELP)
    p.add_argument("--word", required=True)
    p.add_argument("--groups", help="comma-separated, default " + ",".join(DEFAULT_GROUPS))
    p.add_argument("--stream", choices=("restricted", "full"), default="restricted")
    p.set_defaults(func=cmd_vsmb)

    p = sub.add_parser("fix", parents=[shared], help="fixed points of outer automorphisms of PSL2(q)")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_fix)

    p = sub.add_parser("badness", parents=[shared], help="solvable-group badness report", epilog=WORD_HELP)
    p.add_argument("--group", required=True, help=GROUP_HELP)
    p.add_argument("--word", required=True, help="engel2, metab, gamma:d or any word")
    p.set_defaults(func=cmd_badness)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ResourceLimitError as exc:
        print(f"wordmaps: budget refused: {exc}", file=sys.stderr)
        return 3
    except WordMapError as exc:
        print(f"wordmaps: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
