"""Asset records and their year-by-year network snapshots.

Life intervals are half-open: an asset with ``year_in=1975, year_out=1990``
is part of every snapshot from 1975 through 1989 and absent from 1990 on.
A missing ``year_out`` means the asset is still in service at the end of
the dataset span. Change events are dated inside the closed interval
``[year_in, year_out or dataset_end]``; a ``decommission`` event, when
present, must agree with ``year_out``.

Snapshots collapse parallel circuit records between the same pair of
stations into a single edge and keep isolated stations, so node counts
reflect equipment in service rather than connectivity.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    IntervalError,
    ParseError,
    ReferentialError,
    ValidationFailedError,
    YearRangeError,
)
from .graph import AnnualSnapshot, Graph

EVENT_KINDS = ("split", "reroute", "voltage_upgrade", "decommission", "other")

# Kinds that end a line's undisturbed lifetime; "other" is bookkeeping only.
MAJOR_CHANGE_KINDS = ("split", "reroute", "voltage_upgrade", "decommission")

NODE_HEADER = ("node_id", "label", "voltage_kv", "year_in", "year_out", "lat", "lon")
EDGE_HEADER = ("edge_id", "node_a", "node_b", "voltage_kv", "circuits", "year_in", "year_out")
EVENT_HEADER = ("edge_id", "year", "kind")


@dataclass(frozen=True)
class ChangeEvent:
    """A dated change on an edge record."""

    year: int
    kind: str


@dataclass(frozen=True)
class NodeRecord:
    """A station or substation with its service interval."""

    node_id: str
    label: str
    voltage_kv: int
    year_in: int
    year_out: int | None = None
    lat: float | None = None
    lon: float | None = None


@dataclass(frozen=True)
class EdgeRecord:
    """A circuit between two stations with its service interval and events."""

    edge_id: str
    node_a: str
    node_b: str
    voltage_kv: int
    year_in: int
    year_out: int | None = None
    circuits: int = 1
    events: tuple[ChangeEvent, ...] = ()


@dataclass(frozen=True)
class AssetRecordSet:
    """All records for one network plus the observed dataset span."""

    nodes: tuple[NodeRecord, ...]
    edges: tuple[EdgeRecord, ...]
    dataset_start: int
    dataset_end: int
    country_tag: str = ""

    @cached_property
    def node_by_id(self) -> dict[str, NodeRecord]:
        # First record wins on duplicates; validation reports them anyway.
        out: dict[str, NodeRecord] = {}
        for rec in self.nodes:
            out.setdefault(rec.node_id, rec)
        return out


def _alive(year_in: int, year_out: int | None, year: int) -> bool:
    return year_in <= year and (year_out is None or year < year_out)


@dataclass(frozen=True)
class Violation:
    severity: str
    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity.upper()} {self.code} [{self.subject}]: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "OK: no violations"
        return "\n".join(str(v) for v in self.violations)


def _read_rows(path: str, header: Sequence[str]) -> list[tuple[int, list[str]]]:
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ParseError(path, None, f"cannot read file: {exc}") from exc
    with handle:
        reader = csv.reader(handle)
        try:
            first = next(reader)
        except StopIteration:
            raise ParseError(path, 1, "empty file, expected a header row") from None
        if [c.strip() for c in first] != list(header):
            raise ParseError(path, 1, f"bad header, expected {','.join(header)}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(path, lineno, f"expected {len(header)} fields, got {len(row)}")
            rows.append((lineno, row))
    return rows


def _int_field(raw: str, name: str, path: str, line: int) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise ParseError(path, line, f"{name} must be an integer, got {raw!r}") from None


def _year_field(raw: str, name: str, path: str, line: int) -> int:
    year = _int_field(raw, name, path, line)
    if not 1000 <= year <= 9999:
        raise ParseError(path, line, f"{name} must be a 4-digit year, got {raw!r}")
    return year


def _opt_year_field(raw: str, name: str, path: str, line: int) -> int | None:
    if raw.strip() == "":
        return None
    return _year_field(raw, name, path, line)


def _opt_float_field(raw: str, name: str, path: str, line: int) -> float | None:
    if raw.strip() == "":
        return None
    try:
        return float(raw)
    except ValueError:
        raise ParseError(path, line, f"{name} must be a number, got {raw!r}") from None


def load_asset_records(
    node_file: str,
    edge_file: str,
    event_file: str | None = None,
    *,
    country_tag: str = "",
    dataset_start: int | None = None,
    dataset_end: int | None = None,
) -> AssetRecordSet:
    """Read records from CSV without enforcing cross-record integrity.

    Raises :class:`ParseError` on structural problems (bad header, short
    row, non-integer field, unknown event kind, event for an unknown
    edge). Referential and interval integrity are left to
    :func:`validate_records`, so broken datasets can still be loaded and
    reported on. The dataset span defaults to the years observed in the
    data; pass ``dataset_start`` / ``dataset_end`` to pin it explicitly.
    """
    nodes = []
    for lineno, row in _read_rows(node_file, NODE_HEADER):
        node_id, label, voltage, y_in, y_out, lat, lon = row
        if node_id.strip() == "":
            raise ParseError(node_file, lineno, "node_id must not be empty")
        nodes.append(
            NodeRecord(
                node_id=node_id.strip(),
                label=label.strip(),
                voltage_kv=_int_field(voltage, "voltage_kv", node_file, lineno),
                year_in=_year_field(y_in, "year_in", node_file, lineno),
                year_out=_opt_year_field(y_out, "year_out", node_file, lineno),
                lat=_opt_float_field(lat, "lat", node_file, lineno),
                lon=_opt_float_field(lon, "lon", node_file, lineno),
            )
        )
    if not nodes:
        raise ParseError(node_file, None, "no node records")

    edges = []
    for lineno, row in _read_rows(edge_file, EDGE_HEADER):
        edge_id, node_a, node_b, voltage, circuits, y_in, y_out = row
        if edge_id.strip() == "":
            raise ParseError(edge_file, lineno, "edge_id must not be empty")
        edges.append(
            EdgeRecord(
                edge_id=edge_id.strip(),
                node_a=node_a.strip(),
                node_b=node_b.strip(),
                voltage_kv=_int_field(voltage, "voltage_kv", edge_file, lineno),
                circuits=_int_field(circuits, "circuits", edge_file, lineno),
                year_in=_year_field(y_in, "year_in", edge_file, lineno),
                year_out=_opt_year_field(y_out, "year_out", edge_file, lineno),
            )
        )

    if event_file is not None:
        by_edge: dict[str, list[ChangeEvent]] = {}
        known = {e.edge_id for e in edges}
        for lineno, row in _read_rows(event_file, EVENT_HEADER):
            edge_id, year, kind = (c.strip() for c in row)
            if kind not in EVENT_KINDS:
                raise ParseError(
                    event_file, lineno, f"kind must be one of {', '.join(EVENT_KINDS)}, got {kind!r}"
                )
            if edge_id not in known:
                raise ParseError(event_file, lineno, f"event for unknown edge_id {edge_id!r}")
            by_edge.setdefault(edge_id, []).append(
                ChangeEvent(year=_year_field(year, "year", event_file, lineno), kind=kind)
            )
        if by_edge:
            edges = [
                replace(e, events=tuple(sorted(by_edge.get(e.edge_id, []), key=lambda ev: (ev.year, ev.kind))))
                for e in edges
            ]

    return build_record_set(
        nodes,
        edges,
        country_tag=country_tag,
        dataset_start=dataset_start,
        dataset_end=dataset_end,
    )


def build_record_set(
    nodes: Iterable[NodeRecord],
    edges: Iterable[EdgeRecord],
    *,
    country_tag: str = "",
    dataset_start: int | None = None,
    dataset_end: int | None = None,
) -> AssetRecordSet:
    """Assemble a record set, inferring the dataset span where not given.

    Records are sorted by identifier so that downstream results never
    depend on input row order.
    """
    nodes = tuple(sorted(nodes, key=lambda r: (r.node_id, r.year_in)))
    edges = tuple(sorted(edges, key=lambda r: (r.edge_id, r.year_in)))
    years = []
    for rec in nodes:
        years.append(rec.year_in)
        if rec.year_out is not None:
            years.append(rec.year_out)
    for rec in edges:
        years.append(rec.year_in)
        if rec.year_out is not None:
            years.append(rec.year_out)
        years.extend(ev.year for ev in rec.events)
    if not years:
        raise ParseError("<records>", None, "cannot infer a dataset span from zero records")
    return AssetRecordSet(
        nodes=nodes,
        edges=edges,
        dataset_start=dataset_start if dataset_start is not None else min(years),
        dataset_end=dataset_end if dataset_end is not None else max(years),
        country_tag=country_tag,
    )


def validate_records(records: AssetRecordSet) -> ValidationReport:
    """Check every integrity rule and report all violations found."""
    out: list[Violation] = []

    def err(code: str, subject: str, message: str) -> None:
        out.append(Violation("error", code, subject, message))

    start, end = records.dataset_start, records.dataset_end
    if start > end:
        err("span_reversed", "dataset", f"dataset_start {start} is after dataset_end {end}")

    seen_nodes: set[str] = set()
    for rec in records.nodes:
        if rec.node_id in seen_nodes:
            err("duplicate_node_id", rec.node_id, "node_id appears more than once")
        seen_nodes.add(rec.node_id)
        if rec.voltage_kv <= 0:
            err("nonpositive_voltage", rec.node_id, f"voltage_kv must be positive, got {rec.voltage_kv}")
        if rec.year_out is not None and rec.year_out < rec.year_in:
            err("interval_reversed", rec.node_id, f"year_out {rec.year_out} is before year_in {rec.year_in}")
        if not start <= rec.year_in <= end or (rec.year_out is not None and not start <= rec.year_out <= end):
            err("year_outside_span", rec.node_id, f"service interval leaves the dataset span {start}-{end}")

    node_map = records.node_by_id
    seen_edges: set[str] = set()
    for rec in records.edges:
        if rec.edge_id in seen_edges:
            err("duplicate_edge_id", rec.edge_id, "edge_id appears more than once")
        seen_edges.add(rec.edge_id)
        if rec.node_a == rec.node_b:
            err("self_loop", rec.edge_id, f"both endpoints are {rec.node_a!r}")
        if rec.voltage_kv <= 0:
            err("nonpositive_voltage", rec.edge_id, f"voltage_kv must be positive, got {rec.voltage_kv}")
        if rec.circuits <= 0:
            err("nonpositive_circuits", rec.edge_id, f"circuits must be positive, got {rec.circuits}")
        if rec.year_out is not None and rec.year_out < rec.year_in:
            err("interval_reversed", rec.edge_id, f"year_out {rec.year_out} is before year_in {rec.year_in}")
        if not start <= rec.year_in <= end or (rec.year_out is not None and not start <= rec.year_out <= end):
            err("year_outside_span", rec.edge_id, f"service interval leaves the dataset span {start}-{end}")

        edge_end = rec.year_out if rec.year_out is not None else end + 1
        for endpoint in (rec.node_a, rec.node_b):
            node = node_map.get(endpoint)
            if node is None:
                err("unknown_endpoint", rec.edge_id, f"endpoint {endpoint!r} is not a known node_id")
                continue
            node_end = node.year_out if node.year_out is not None else end + 1
            if node.year_in > rec.year_in or edge_end > node_end:
                err(
                    "endpoint_dead",
                    rec.edge_id,
                    f"endpoint {endpoint!r} is not in service for the whole edge interval",
                )

        last_event_year = rec.year_out if rec.year_out is not None else end
        for ev in rec.events:
            if not rec.year_in <= ev.year <= last_event_year:
                err(
                    "event_out_of_range",
                    rec.edge_id,
                    f"{ev.kind} event in {ev.year} falls outside {rec.year_in}-{last_event_year}",
                )
            if ev.kind == "decommission" and ev.year != rec.year_out:
                err(
                    "decommission_mismatch",
                    rec.edge_id,
                    f"decommission event in {ev.year} disagrees with year_out {rec.year_out}",
                )

    return ValidationReport(tuple(out))


_REFERENTIAL_CODES = frozenset({"unknown_endpoint", "endpoint_dead"})
_INTERVAL_CODES = frozenset(
    {"interval_reversed", "event_out_of_range", "year_outside_span", "span_reversed", "decommission_mismatch"}
)


def parse_asset_records(
    node_file: str,
    edge_file: str,
    event_file: str | None = None,
    *,
    country_tag: str = "",
    dataset_start: int | None = None,
    dataset_end: int | None = None,
) -> AssetRecordSet:
    """Load CSV files and return a fully validated record set.

    Any integrity violation raises: referential problems as
    :class:`ReferentialError`, interval problems as :class:`IntervalError`,
    anything else as :class:`ValidationFailedError`. The report on the
    exception lists every violation, not just the first.
    """
    records = load_asset_records(
        node_file,
        edge_file,
        event_file,
        country_tag=country_tag,
        dataset_start=dataset_start,
        dataset_end=dataset_end,
    )
    report = validate_records(records)
    if report.ok:
        return records
    codes = report.codes()
    if codes & _REFERENTIAL_CODES:
        raise ReferentialError(report)
    if codes & _INTERVAL_CODES:
        raise IntervalError(report)
    raise ValidationFailedError(report)


def snapshot_at(records: AssetRecordSet, year: int, voltage_floor_kv: int = 0) -> AnnualSnapshot:
    """Network state in ``year`` at or above the voltage floor.

    Nodes and edges below the floor are dropped; an edge also needs both
    endpoints present. Multiple circuit records between one station pair
    collapse to a single edge. Isolated nodes stay in.
    """
    if not records.dataset_start <= year <= records.dataset_end:
        raise YearRangeError(
            f"year {year} is outside the dataset span "
            f"{records.dataset_start}-{records.dataset_end}"
        )
    alive_nodes = {
        rec.node_id
        for rec in records.nodes
        if rec.voltage_kv >= voltage_floor_kv and _alive(rec.year_in, rec.year_out, year)
    }
    pairs = set()
    for rec in records.edges:
        if rec.voltage_kv < voltage_floor_kv or not _alive(rec.year_in, rec.year_out, year):
            continue
        if rec.node_a in alive_nodes and rec.node_b in alive_nodes:
            pairs.add((rec.node_a, rec.node_b) if rec.node_a < rec.node_b else (rec.node_b, rec.node_a))
    return AnnualSnapshot(year=year, voltage_floor_kv=voltage_floor_kv, graph=Graph(alive_nodes, pairs))


def build_panel(
    records: AssetRecordSet,
    year_range: tuple[int, int] | None = None,
    voltage_floor_kv: int = 0,
) -> list[AnnualSnapshot]:
    """One snapshot per year, ascending, over ``year_range`` (inclusive).

    The range defaults to the dataset span and must lie inside it.
    """
    if year_range is None:
        year_range = (records.dataset_start, records.dataset_end)
    start, end = year_range
    if start > end:
        raise YearRangeError(f"empty year range {start}-{end}")
    if start < records.dataset_start or end > records.dataset_end:
        raise YearRangeError(
            f"year range {start}-{end} leaves the dataset span "
            f"{records.dataset_start}-{records.dataset_end}"
        )
    return [snapshot_at(records, year, voltage_floor_kv) for year in range(start, end + 1)]


def filter_by_voltage(records: AssetRecordSet, voltage_floor_kv: int) -> AssetRecordSet:
    """Sub-record-set at or above the floor, keeping the original span.

    Mirrors snapshot filtering: an edge survives only if its own voltage
    and both endpoint nodes pass.
    """
    nodes = tuple(rec for rec in records.nodes if rec.voltage_kv >= voltage_floor_kv)
    kept = {rec.node_id for rec in nodes}
    edges = tuple(
        rec
        for rec in records.edges
        if rec.voltage_kv >= voltage_floor_kv and rec.node_a in kept and rec.node_b in kept
    )
    return AssetRecordSet(
        nodes=nodes,
        edges=edges,
        dataset_start=records.dataset_start,
        dataset_end=records.dataset_end,
        country_tag=records.country_tag,
    )
