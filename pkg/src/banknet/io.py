"""On-disk formats.

Everything written here is deterministic: fixed key order, fixed float
repr (shortest round-trip), LF line endings, no timestamps.  Identical
inputs therefore produce byte-identical files, which is what makes
whole analysis runs diffable.
"""

from __future__ import annotations

import colorsys
import csv
import io as _io
import json
from collections.abc import Iterable, Sequence
from pathlib import Path
from xml.sax.saxutils import quoteattr

import numpy as np

from .attribution import AttributionReport, CountryAttribution
from .capital import CapitalSchedule
from .community import CommunityAssignment
from .contagion import NO_SPREAD, SirTrajectory, is_no_spread
from .graph import CountryGraph, OwnershipRecord, Projection

RECORD_HEADER = ("parent_country", "host_country", "link_count")


def _num(value) -> str:
    """Shortest round-trip text for a number."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def read_ownership_csv(path) -> list[OwnershipRecord]:
    """Parse an ownership record file.

    Expected header: parent_country,host_country,link_count.  Lines
    whose first non-blank character is '#' are comments.  Errors carry
    the 1-based line number of the offending row.
    """
    records: list[OwnershipRecord] = []
    header_seen = False
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                row = next(csv.reader([line]))
            except csv.Error as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            row = [cell.strip() for cell in row]
            if not header_seen:
                if tuple(row) != RECORD_HEADER:
                    raise ValueError(
                        f"{path}: line {lineno}: expected header "
                        f"{','.join(RECORD_HEADER)!r}, got {','.join(row)!r}")
                header_seen = True
                continue
            if len(row) != 3:
                raise ValueError(
                    f"{path}: line {lineno}: expected 3 fields, got {len(row)}")
            parent, host, count_text = row
            try:
                count = int(count_text)
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: link_count {count_text!r} "
                    "is not an integer") from None
            if count < 1:
                raise ValueError(
                    f"{path}: line {lineno}: link_count must be >= 1, "
                    f"got {count}")
            if not parent or not host:
                raise ValueError(
                    f"{path}: line {lineno}: empty country code")
            if parent == host:
                raise ValueError(
                    f"{path}: line {lineno}: self-loop {parent!r} -> {host!r}")
            records.append(OwnershipRecord(parent, host, count))
    if not header_seen:
        raise ValueError(f"{path}: missing header line")
    return records


def write_ownership_csv(path, records: Iterable[OwnershipRecord]) -> None:
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RECORD_HEADER)
    for rec in records:
        writer.writerow([rec.parent_country, rec.host_country, rec.link_count])
    _write_text(path, out.getvalue())


def write_graph_json(path, g: CountryGraph) -> None:
    """Canonical graph file: node array plus explicit weighted edges."""
    payload = {
        "directed": True,
        "nodes": list(g.nodes),
        "edges": [{"source": g.nodes[s], "target": g.nodes[d], "weight": w}
                  for s, d, w in g.edges],
        "metadata": dict(g.metadata),
    }
    _write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_graph_json(path) -> CountryGraph:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    try:
        nodes = tuple(str(n) for n in payload["nodes"])
        index = {code: i for i, code in enumerate(nodes)}
        edges = tuple((index[e["source"]], index[e["target"]], int(e["weight"]))
                      for e in payload["edges"])
        metadata = {str(k): str(v)
                    for k, v in payload.get("metadata", {}).items()}
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: not a valid graph file ({exc})") from None
    return CountryGraph(nodes, edges, metadata)


def _community_color(community_id: int) -> tuple[int, int, int]:
    hue = (community_id * 0.6180339887498949) % 1.0
    r, g, b = colorsys.hsv_to_rgb(hue, 0.65, 0.85)
    return int(round(r * 255)), int(round(g * 255)), int(round(b * 255))


def write_gexf(path, g: CountryGraph,
               communities: CommunityAssignment | None = None) -> None:
    """Directed weighted GEXF; optional node colors by community."""
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    if communities is None:
        lines.append('<gexf xmlns="http://www.gexf.net/1.2draft" version="1.2">')
    else:
        lines.append('<gexf xmlns="http://www.gexf.net/1.2draft" '
                     'xmlns:viz="http://www.gexf.net/1.2draft/viz" '
                     'version="1.2">')
    lines.append('  <graph defaultedgetype="directed" mode="static">')
    lines.append('    <nodes>')
    for code in g.nodes:
        attr = quoteattr(code)
        if communities is None:
            lines.append(f'      <node id={attr} label={attr} />')
        else:
            r, gr, b = _community_color(communities.labels[code])
            lines.append(f'      <node id={attr} label={attr}>')
            lines.append(f'        <viz:color r="{r}" g="{gr}" b="{b}" />')
            lines.append('      </node>')
    lines.append('    </nodes>')
    lines.append('    <edges>')
    for idx, (s, d, w) in enumerate(g.edges):
        lines.append(f'      <edge id="{idx}" source={quoteattr(g.nodes[s])} '
                     f'target={quoteattr(g.nodes[d])} weight="{w}" />')
    lines.append('    </edges>')
    lines.append('  </graph>')
    lines.append('</gexf>')
    _write_text(path, "\n".join(lines) + "\n")


def _dot_quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(path, g: CountryGraph) -> None:
    lines = ["digraph banknet {"]
    for code in g.nodes:
        lines.append(f"  {_dot_quote(code)};")
    for s, d, w in g.edges:
        lines.append(f"  {_dot_quote(g.nodes[s])} -> {_dot_quote(g.nodes[d])} "
                     f"[weight={w}];")
    lines.append("}")
    _write_text(path, "\n".join(lines) + "\n")


def write_trajectory_csv(path, traj: SirTrajectory) -> None:
    """Long-format mean-field trajectory: one row per (time, class)."""
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["time", "k", "S", "I", "R", "theta"])
    for t_idx, t in enumerate(traj.times):
        theta = _num(traj.theta[t_idx])
        for k_idx, k in enumerate(traj.degree_classes):
            writer.writerow([_num(t), k,
                             _num(traj.s[t_idx, k_idx]),
                             _num(traj.i[t_idx, k_idx]),
                             _num(traj.r[t_idx, k_idx]),
                             theta])
    _write_text(path, out.getvalue())


def write_mc_csv(path, finals: Sequence[float]) -> None:
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["replica", "final_fraction"])
    for idx, value in enumerate(finals):
        writer.writerow([idx, _num(value)])
    _write_text(path, out.getvalue())


def _bool_text(flag: bool) -> str:
    return "true" if flag else "false"


def write_attribution_csv(path, report: AttributionReport) -> None:
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["country", "lambda_c_after", "delta", "component_size",
                     "ks_D", "ks_p", "ks_same"])
    for row in report.rows:
        if is_no_spread(row.lambda_c_after):
            lam, delta = "NoSpread", ""
        else:
            lam, delta = _num(row.lambda_c_after), _num(row.delta)
        writer.writerow([row.country, lam, delta, row.component_size,
                         _num(row.ks_statistic), _num(row.ks_p_value),
                         _bool_text(row.ks_same_distribution)])
    _write_text(path, out.getvalue())


def write_attribution_json(path, report: AttributionReport) -> None:
    """JSON mirror of the attribution table with the baseline up front."""
    countries = []
    for row in report.rows:
        no_spread = is_no_spread(row.lambda_c_after)
        countries.append({
            "country": row.country,
            "lambda_c_after": None if no_spread else row.lambda_c_after,
            "delta": row.delta,
            "component_size": row.component_size,
            "ks_statistic": row.ks_statistic,
            "ks_p_value": row.ks_p_value,
            "ks_same_distribution": row.ks_same_distribution,
        })
    payload = {
        "baseline_lambda_c": report.baseline_lambda_c,
        "projection": report.projection.value,
        "ks_alpha": report.ks_alpha,
        "countries": countries,
    }
    _write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_attribution_json(path) -> AttributionReport:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    try:
        rows = []
        for entry in payload["countries"]:
            lam = entry["lambda_c_after"]
            rows.append(CountryAttribution(
                str(entry["country"]),
                NO_SPREAD if lam is None else float(lam),
                None if entry["delta"] is None else float(entry["delta"]),
                int(entry["component_size"]),
                float(entry["ks_statistic"]),
                float(entry["ks_p_value"]),
                bool(entry["ks_same_distribution"])))
        return AttributionReport(
            float(payload["baseline_lambda_c"]),
            Projection.from_flag(payload["projection"]),
            float(payload["ks_alpha"]),
            tuple(rows))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: not a valid attribution file ({exc})") \
            from None


def write_schedule_csv(path, schedule: CapitalSchedule) -> None:
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["country", "lambda_c", "charge", "difference", "rank"])
    for rank, row in enumerate(schedule.rows, start=1):
        writer.writerow([row.country, _num(row.lambda_c), _num(row.charge),
                         _num(row.difference), rank])
    _write_text(path, out.getvalue())


def write_communities_csv(path, assignment: CommunityAssignment) -> None:
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["country", "community_id"])
    for country, community_id in assignment.labels.items():
        writer.writerow([country, community_id])
    _write_text(path, out.getvalue())
