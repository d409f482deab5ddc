"""GraphFile JSON format (version 1).

Adjacency rows are lowercase hex strings of ``ceil(n/4)`` digits.  Digit
``i`` holds columns ``4i .. 4i+3`` with column ``4i`` in its lowest bit,
so the string reads little-endian from the left.  Polynomials, when
present, are coefficient lists in graded lexicographic monomial order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .construction import GRAPH, VARIANTS, Construction, ConstructionParams, rows_from_polynomials
from .gf import field_make
from .graph import BipartiteGraph
from .poly import MultiPoly, degree_for_count

FORMAT_VERSION = 1
_HEX = set("0123456789abcdef")


class GraphFileError(ValueError):
    pass


@dataclass(frozen=True)
class GraphFile:
    graph: BipartiteGraph
    s: int | None = None
    t: int | None = None
    q: int | None = None
    variant: str | None = None
    seed: int | None = None
    polynomials: tuple[tuple[int, ...], ...] | None = None

    @classmethod
    def from_construction(cls, c: Construction) -> "GraphFile":
        p = c.params
        return cls(
            graph=c.graph,
            s=p.s,
            t=p.t,
            q=p.q,
            variant=p.variant,
            seed=c.seed,
            polynomials=tuple(tuple(f.coefficient_vector()) for f in c.polynomials),
        )

    def multipolys(self) -> list[MultiPoly]:
        """Rebuild the stored polynomials; requires ``s``, ``q`` and ``variant``."""
        if not self.polynomials:
            return []
        if self.s is None or self.q is None or self.variant is None:
            raise GraphFileError("polynomials need s, q and variant to be interpreted")
        spec = field_make(self.q)
        nvars = self.s - 1 if self.variant == GRAPH else self.s
        d = degree_for_count(nvars, len(self.polynomials[0]))
        return [MultiPoly.from_vector(spec, nvars, d, vec) for vec in self.polynomials]

    def coherent(self) -> bool:
        """Whether the polynomials regenerate the adjacency exactly."""
        polys = self.multipolys()
        if not polys:
            return True
        if len(polys) != self.graph.m:
            return False
        params = ConstructionParams(self.s, self.t or self.s, self.q, polys[0].d, len(polys), self.variant)
        if params.n != self.graph.n:
            return False
        return rows_from_polynomials(polys, params) == self.graph.rows


def encode_row(row: int, n: int) -> str:
    width = (n + 3) // 4
    if width == 0:
        return ""
    return format(row, f"0{width}x")[::-1]


def decode_row(text: str, n: int) -> int:
    width = (n + 3) // 4
    if not isinstance(text, str) or len(text) != width or not set(text) <= _HEX:
        raise GraphFileError(f"adjacency row {text!r} is not {width} lowercase hex digits")
    row = int(text[::-1], 16) if text else 0
    if row >> n:
        raise GraphFileError(f"adjacency row {text!r} sets bits beyond column {n - 1}")
    return row


def _list_block(items: list[str]) -> str:
    if not items:
        return "[]"
    return "[\n" + ",\n".join(f"    {x}" for x in items) + "\n  ]"


def dumps(gf: GraphFile) -> str:
    g = gf.graph
    fields: list[tuple[str, str]] = [
        ("format_version", json.dumps(FORMAT_VERSION)),
        ("s", json.dumps(gf.s)),
        ("t", json.dumps(gf.t)),
        ("q", json.dumps(gf.q)),
        ("variant", json.dumps(gf.variant)),
        ("seed", json.dumps(gf.seed)),
        ("m", json.dumps(g.m)),
        ("n", json.dumps(g.n)),
        (
            "polynomials",
            "null" if gf.polynomials is None else _list_block([json.dumps(list(p)) for p in gf.polynomials]),
        ),
        ("adjacency", _list_block([json.dumps(encode_row(r, g.n)) for r in g.rows])),
    ]
    return "{\n" + ",\n".join(f"  {json.dumps(k)}: {v}" for k, v in fields) + "\n}\n"


def _opt_int(data: dict, key: str) -> int | None:
    v = data.get(key)
    if v is None:
        return None
    if not isinstance(v, int) or isinstance(v, bool):
        raise GraphFileError(f"{key!r} must be an integer")
    return v


def loads(text: str) -> GraphFile:
    try:
        data: Any = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise GraphFileError("top level must be an object")
    if data.get("format_version") != FORMAT_VERSION:
        raise GraphFileError(f"unsupported format_version {data.get('format_version')!r}")
    m, n = _opt_int(data, "m"), _opt_int(data, "n")
    if m is None or n is None or m < 0 or n < 0:
        raise GraphFileError("m and n are required non-negative integers")
    adjacency = data.get("adjacency")
    if not isinstance(adjacency, list) or len(adjacency) != m:
        raise GraphFileError(f"adjacency must list exactly {m} rows")
    rows = tuple(decode_row(r, n) for r in adjacency)

    variant = data.get("variant")
    if variant is not None and variant not in VARIANTS:
        raise GraphFileError(f"unknown variant {variant!r}")
    polys = data.get("polynomials")
    if polys is not None:
        if not isinstance(polys, list) or not all(
            isinstance(p, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in p) for p in polys
        ):
            raise GraphFileError("polynomials must be a list of integer lists")
        polys = tuple(tuple(p) for p in polys)

    meta = {k: data.get(k) for k in ("s", "t", "q", "variant", "seed") if data.get(k) is not None}
    gf = GraphFile(
        graph=BipartiteGraph(m, n, rows, meta or None),
        s=_opt_int(data, "s"),
        t=_opt_int(data, "t"),
        q=_opt_int(data, "q"),
        variant=variant,
        seed=_opt_int(data, "seed"),
        polynomials=polys,
    )
    if polys:
        try:
            gf.multipolys()
        except (ValueError, ArithmeticError) as exc:
            raise GraphFileError(f"cannot interpret polynomials: {exc}") from exc
    return gf


def write(path, gf: GraphFile) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(gf))


def read(path) -> GraphFile:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
