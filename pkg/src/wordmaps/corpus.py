"""Group input files and corpus directories.

A group file is a JSON object with ``name`` and ``kind`` plus the fields for
that kind::

    {"name": "S3", "kind": "permutation", "degree": 3, "generators": [[1, 2, 0], [1, 0, 2]]}
    {"name": "C2", "kind": "cayley", "table": [[0, 1], [1, 0]]}
    {"name": "D16", "kind": "named", "constructor": "dihedral:16"}

Generators are 0-based images of ``0..degree-1``.  A directory may hold a
``manifest.json`` with per-group metadata; it is not a group file.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .catalog import named
from .errors import ContractError, ParseError, SchemaError
from .groups import DEFAULT_ORDER_CAP, FiniteGroup, from_generators, from_table

KINDS = {"permutation": ("degree", "generators"), "cayley": ("table",), "named": ("constructor",)}
MANIFEST = "manifest.json"


def data_path(name: str = "corpus") -> Path:
    """Directory of a corpus shipped with the package (``corpus`` or ``corpus243``)."""
    return Path(str(resources.files("wordmaps") / "data" / name))


def _int_matrix(value, path: str, fld: str) -> list[list[int]]:
    if not isinstance(value, list):
        raise SchemaError("expected a list of integer lists", path, fld)
    for i, row in enumerate(value):
        if not isinstance(row, list) or not all(isinstance(x, int) and not isinstance(x, bool)
                                                for x in row):
            raise SchemaError("expected a list of integers", path, f"{fld}[{i}]")
    return value


def group_from_record(rec: dict, path: str = "", order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if not isinstance(rec, dict):
        raise SchemaError("group file must hold a JSON object", path)
    name = rec.get("name")
    if not isinstance(name, str) or not name:
        raise SchemaError("missing or empty name", path, "name")
    kind = rec.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"kind must be one of {sorted(KINDS)}", path, "kind")
    for fld in KINDS[kind]:
        if fld not in rec:
            raise SchemaError(f"missing field for kind {kind!r}", path, fld)
    if kind == "permutation":
        degree = rec["degree"]
        if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
            raise SchemaError("degree must be a positive integer", path, "degree")
        gens = _int_matrix(rec["generators"], path, "generators")
        for i, g in enumerate(gens):
            if sorted(g) != list(range(degree)):
                raise SchemaError(f"generator {i} is not a bijection of 0..{degree - 1}", path,
                                  f"generators[{i}]")
        G = from_generators(degree, gens, name=name, order_cap=order_cap)
    elif kind == "cayley":
        table = _int_matrix(rec["table"], path, "table")
        try:
            G = from_table(table, name=name)
        except ContractError as exc:
            raise SchemaError(str(exc), path, "table") from None
    else:
        spec = rec["constructor"]
        if not isinstance(spec, str):
            raise SchemaError("constructor must be a string", path, "constructor")
        try:
            G = named(spec, order_cap=order_cap)
        except (ParseError, ContractError) as exc:
            raise SchemaError(str(exc), path, "constructor") from None
        G.name = name
    return G


def load_group_file(path: str | Path, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    path = Path(path)
    try:
        rec = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", str(path)) from None
    return group_from_record(rec, str(path), order_cap)


def load_manifest(path: str | Path) -> dict | None:
    f = Path(path) / MANIFEST
    return json.loads(f.read_text()) if f.exists() else None


def ingest(path: str | Path, max_order: int | None = None,
           order_cap: int = DEFAULT_ORDER_CAP) -> list[FiniteGroup]:
    """All groups in a directory, sorted by ``(order, name)``.

    When a manifest lists orders, files above ``max_order`` are skipped
    without being built.
    """
    root = Path(path)
    if not root.is_dir():
        raise SchemaError("corpus path is not a directory", str(root))
    files = sorted(p for p in root.glob("*.json") if p.name != MANIFEST)
    manifest = load_manifest(root)
    if manifest is not None and max_order is not None:
        orders = {g["file"]: g["order"] for g in manifest.get("groups", [])}
        files = [f for f in files if orders.get(f.name, 0) <= max_order]
    groups = [load_group_file(f, order_cap) for f in files]
    if max_order is not None:
        groups = [G for G in groups if G.order <= max_order]
    return sorted(groups, key=lambda G: (G.order, G.name))
