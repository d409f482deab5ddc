"""Batch construction runs summarised as CSV rows."""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Iterable

from .construction import DEFAULT_RETRIES, GRAPH, VARIANTS, build, params_derive
from .errors import ConstructionFailed, EllTooSmall, NotPrime
from .graph import density_report, kst_free

REPORT_VERSION = 1


@dataclass(frozen=True)
class GridEntry:
    s: int
    t: int
    q: int
    variant: str = GRAPH
    seed: int = 0


@dataclass(frozen=True)
class ReportRow:
    report_version: int
    s: int
    t: int
    q: int
    variant: str
    seed: int
    d: int | None = None
    ell: int | None = None
    m: int | None = None
    n: int | None = None
    edges: int | None = None
    kst_upper: int | None = None
    lower_target: float | None = None
    ratio_lower: float | None = None
    union_bound_ok: bool | None = None
    retries_total: int | None = None
    failure: str = ""


HEADER = [f.name for f in fields(ReportRow)]


class GridError(ValueError):
    pass


def parse_grid(text: str) -> list[GridEntry]:
    """Grid CSV with header ``s,t,q[,variant][,seed]``; an empty file is an
    empty grid."""
    if not text.strip():
        return []
    reader = csv.DictReader(io.StringIO(text))
    cols = set(reader.fieldnames or ())
    if not {"s", "t", "q"} <= cols:
        raise GridError("grid header must contain s, t and q")
    unknown = cols - {"s", "t", "q", "variant", "seed"}
    if unknown:
        raise GridError(f"unknown grid columns: {sorted(unknown)}")
    out = []
    for lineno, rec in enumerate(reader, start=2):
        try:
            variant = (rec.get("variant") or GRAPH).strip()
            seed_text = (rec.get("seed") or "").strip()
            entry = GridEntry(
                int(rec["s"]), int(rec["t"]), int(rec["q"]), variant, int(seed_text) if seed_text else 0
            )
        except (TypeError, ValueError) as exc:
            raise GridError(f"line {lineno}: {exc}") from exc
        if entry.variant not in VARIANTS:
            raise GridError(f"line {lineno}: unknown variant {entry.variant!r}")
        out.append(entry)
    return out


def run_entry(entry: GridEntry, retry_budget: int = DEFAULT_RETRIES) -> ReportRow:
    base = dict(report_version=REPORT_VERSION, s=entry.s, t=entry.t, q=entry.q, variant=entry.variant,
                seed=entry.seed)
    try:
        params = params_derive(entry.s, entry.t, entry.q, entry.variant)
    except NotPrime:
        return ReportRow(**base, failure="not_prime_power")
    except EllTooSmall:
        return ReportRow(**base, failure="ell_too_small")
    except ValueError:
        return ReportRow(**base, failure="invalid_params")
    base.update(d=params.d, ell=params.ell, union_bound_ok=params.union_bound_ok)
    try:
        c = build(entry.s, entry.t, entry.q, entry.variant, entry.seed, retry_budget)
    except NotPrime:
        return ReportRow(**base, failure="not_prime")
    except ConstructionFailed as exc:
        return ReportRow(**base, retries_total=sum(exc.retries_used) + exc.retries,
                         failure=f"construction_failed@{exc.index}")
    g = c.graph
    if not kst_free(g, entry.s, entry.t).free:
        return ReportRow(**base, failure="not_free")
    rep = density_report(g, entry.s, entry.t)
    return ReportRow(
        **base,
        m=g.m,
        n=g.n,
        edges=rep.edges,
        kst_upper=rep.kst_upper,
        lower_target=rep.lower_target,
        ratio_lower=rep.ratio_lower,
        retries_total=c.retries_total,
    )


def worker_threads() -> int:
    """Worker cap from ``ZFORGE_THREADS``; 0 or unset means one per CPU."""
    raw = os.environ.get("ZFORGE_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def run_grid(entries: Iterable[GridEntry], workers: int | None = None) -> list[ReportRow]:
    entries = list(entries)
    workers = workers or worker_threads()
    if workers <= 1 or len(entries) <= 1:
        return [run_entry(e) for e in entries]
    with ProcessPoolExecutor(max_workers=min(workers, len(entries))) as pool:
        return list(pool.map(run_entry, entries))


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


def format_csv(rows: Iterable[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for row in rows:
        d = asdict(row)
        writer.writerow([_cell(d[h]) for h in HEADER])
    return buf.getvalue()
