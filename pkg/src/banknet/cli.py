"""banknet command line.

One-shot batch subcommands over files; no services.  Every command
echoes its parameters into <out-dir>/<command>_config.json (out-dir
itself excluded), and with fixed seeds and inputs all outputs are
byte-identical across runs.

Exit codes: 0 success, 1 input or validation error, 2 empty-result
warning.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from .attribution import attribute_all
from .capital import build_schedule
from .community import detect_communities
from .contagion import (SirParams, epidemic_threshold, integrate_sir,
                        is_no_spread, simulate_sir_mc)
from .graph import (CountryGraph, OwnershipRecord, Projection, build_graph,
                    degree_view, strength_rankings)
from .io import (read_attribution_json, read_graph_json, read_ownership_csv,
                 write_attribution_csv, write_attribution_json,
                 write_communities_csv, write_gexf, write_graph_json,
                 write_mc_csv, write_ownership_csv, write_schedule_csv,
                 write_trajectory_csv)
from .synth import SyntheticSpec, generate_records

PROJECTION_FLAG = click.Choice([p.value for p in Projection])
FORMAT_FLAG = click.Choice(["csv", "json", "gexf"])


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _warn_empty(message: str) -> None:
    click.echo(f"warning: {message}", err=True)
    sys.exit(2)


def _num(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _echo_config(command: str, **params) -> str:
    return json.dumps({"command": command, **params},
                      indent=2, sort_keys=True) + "\n"


def _write_outputs(out_dir: str, outputs: list[tuple[str, object]]) -> None:
    """Write all files or none; a failure removes partial output."""
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    name = "?"
    try:
        for name, content in outputs:
            path = directory / name
            if callable(content):
                content(path)
            else:
                path.write_text(content, encoding="utf-8")
            written.append(path)
    except Exception as exc:  # noqa: BLE001 - cleanup then report
        for path in written:
            path.unlink(missing_ok=True)
        _fail(f"failed writing {name}: {exc}")


def _load_graph(path: str) -> CountryGraph:
    if not Path(path).exists():
        _fail(f"graph file not found: {path}")
    try:
        return read_graph_json(path)
    except (ValueError, json.JSONDecodeError) as exc:
        _fail(str(exc))
    raise AssertionError("unreachable")


def _stage(name: str, func):
    try:
        return func()
    except Exception as exc:  # noqa: BLE001 - map to the stage contract
        _fail(f"analyze failed at stage {name}: {exc}")
    raise AssertionError("unreachable")


@click.group()
def cli() -> None:
    """Systemic-risk analytics over cross-border bank ownership networks."""


@cli.command("build")
@click.argument("records_csv", type=click.Path())
@click.option("--out-dir", default=".", show_default=True,
              help="Directory the outputs go to.")
@click.option("--format", "fmt", type=FORMAT_FLAG, default="json",
              show_default=True,
              help="Extra graph export next to the canonical graph.json.")
def cmd_build(records_csv: str, out_dir: str, fmt: str) -> None:
    """Aggregate an ownership record CSV into the canonical graph file."""
    if not Path(records_csv).exists():
        _fail(f"records file not found: {records_csv}")
    try:
        records = read_ownership_csv(records_csv)
    except ValueError as exc:
        _fail(str(exc))
    if not records:
        _warn_empty(f"{records_csv} holds no records; no graph written")
    try:
        g = build_graph(records)
    except ValueError as exc:
        _fail(str(exc))

    outputs: list[tuple[str, object]] = [
        ("graph.json", lambda p: write_graph_json(p, g)),
    ]
    if fmt == "gexf":
        outputs.append(("graph.gexf", lambda p: write_gexf(p, g)))
    elif fmt == "csv":
        aggregated = [OwnershipRecord(g.nodes[s], g.nodes[d], w)
                      for s, d, w in g.edges]
        outputs.append(("edges.csv",
                        lambda p: write_ownership_csv(p, aggregated)))
    outputs.append(("build_config.json",
                    _echo_config("build", records_csv=records_csv, format=fmt)))
    _write_outputs(out_dir, outputs)

    click.echo(f"countries: {g.node_count}")
    click.echo(f"edges: {g.edge_count}")
    rankings = strength_rankings(g)
    for title, table in (
            ("total strength", rankings.total_strength),
            ("in-degree", rankings.in_degree),
            ("out-degree", rankings.out_degree)):
        click.echo(f"top 5 by {title}:")
        for pos, (country, value) in enumerate(table[:5], start=1):
            click.echo(f"  {pos}. {country} ({value})")


@cli.command("synth")
@click.option("--nodes", type=int, required=True, help="Country count.")
@click.option("--m", type=int, default=3, show_default=True,
              help="Links each new country opens.")
@click.option("--weight-p", type=float, default=0.5, show_default=True,
              help="Geometric weight parameter.")
@click.option("--reciprocal-prob", type=float, default=0.3, show_default=True,
              help="Probability a link is reciprocated.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-dir", default=".", show_default=True)
def cmd_synth(nodes: int, m: int, weight_p: float, reciprocal_prob: float,
              seed: int, out_dir: str) -> None:
    """Generate a synthetic preferential-attachment record CSV."""
    try:
        spec = SyntheticSpec(nodes, m, weight_p, reciprocal_prob, seed)
    except ValueError as exc:
        _fail(str(exc))
    records = generate_records(spec)
    _write_outputs(out_dir, [
        ("edges.csv", lambda p: write_ownership_csv(p, records)),
        ("synth_config.json",
         _echo_config("synth", nodes=nodes, m=m, weight_p=weight_p,
                      reciprocal_prob=reciprocal_prob, seed=seed)),
    ])
    click.echo(f"records: {len(records)}")


@cli.command("analyze")
@click.argument("graph_json", type=click.Path())
@click.option("--projection", type=PROJECTION_FLAG, default="simple",
              show_default=True)
@click.option("--holling-n", type=int, default=1, show_default=True,
              help="Capital charge exponent.")
@click.option("--ks-alpha", type=float, default=0.01, show_default=True,
              help="KS significance level.")
@click.option("--resolution", type=float, default=1.0, show_default=True,
              help="Community detection resolution.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-dir", default=".", show_default=True)
@click.option("--format", "fmt", type=FORMAT_FLAG, default="csv",
              show_default=True)
def cmd_analyze(graph_json: str, projection: str, holling_n: int,
                ks_alpha: float, resolution: float, seed: int, out_dir: str,
                fmt: str) -> None:
    """Full risk analysis: attribution, capital schedule, communities."""
    g = _load_graph(graph_json)
    proj = Projection.from_flag(projection)

    report = _stage("attribution",
                    lambda: attribute_all(g, proj, alpha=ks_alpha))
    schedule = _stage("capital", lambda: build_schedule(report, holling_n))
    communities = _stage("communities",
                         lambda: detect_communities(g, resolution, seed))

    ranked = report.ranked()
    lines = [
        f"baseline lambda_c: {_num(report.baseline_lambda_c)}",
        f"projection: {proj.value}",
        f"countries: {g.node_count}",
        f"edges: {g.edge_count}",
        "top risk contributors (threshold after removal):",
    ]
    for pos, row in enumerate(ranked[:5], start=1):
        if is_no_spread(row.lambda_c_after):
            lines.append(f"  {pos}. {row.country} lambda_c_after=NoSpread")
        else:
            lines.append(f"  {pos}. {row.country} "
                         f"lambda_c_after={_num(row.lambda_c_after)} "
                         f"delta={_num(row.delta)}")
    lines.append(f"communities: {communities.community_count} "
                 f"(modularity {_num(communities.modularity_q)})")
    summary = "\n".join(lines) + "\n"

    _write_outputs(out_dir, [
        ("attribution.csv", lambda p: write_attribution_csv(p, report)),
        ("attribution.json", lambda p: write_attribution_json(p, report)),
        ("capital_schedule.csv", lambda p: write_schedule_csv(p, schedule)),
        ("communities.csv",
         lambda p: write_communities_csv(p, communities)),
        ("network.gexf", lambda p: write_gexf(p, g, communities)),
        ("summary.txt", summary),
        ("analyze_config.json",
         _echo_config("analyze", graph=graph_json, projection=projection,
                      holling_n=holling_n, ks_alpha=ks_alpha,
                      resolution=resolution, seed=seed, format=fmt)),
    ])
    click.echo(summary, nl=False)


def _classify(final: float, initial: float) -> str:
    return "outbreak" if final >= 10.0 * initial else "no outbreak"


@cli.command("simulate")
@click.argument("graph_json", type=click.Path())
@click.option("--lambda", "spreading_rate", type=float, required=True,
              help="Spreading rate per link.")
@click.option("--mu", type=float, default=1.0, show_default=True,
              help="Recovery rate.")
@click.option("--dt", type=float, default=0.01, show_default=True)
@click.option("--t-max", type=float, default=200.0, show_default=True)
@click.option("--replicas", type=int, default=100, show_default=True)
@click.option("--i0", type=float, default=1e-3, show_default=True,
              help="Initial infected density.")
@click.option("--projection", type=PROJECTION_FLAG, default="simple",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-dir", default=".", show_default=True)
def cmd_simulate(graph_json: str, spreading_rate: float, mu: float, dt: float,
                 t_max: float, replicas: int, i0: float, projection: str,
                 seed: int, out_dir: str) -> None:
    """Mean-field integration plus stochastic replicas on one graph."""
    g = _load_graph(graph_json)
    proj = Projection.from_flag(projection)
    try:
        params = SirParams(spreading_rate, mu, i0, t_max, dt)
    except ValueError as exc:
        _fail(str(exc))

    dv = degree_view(g, proj)
    threshold = epidemic_threshold(dv)
    try:
        traj = integrate_sir(dv, None, params)
        finals = simulate_sir_mc(g, params, replicas, seed, proj)
    except ValueError as exc:
        _fail(str(exc))

    seed_fraction = min(g.node_count, max(1, round(i0 * g.node_count))) \
        / g.node_count
    mc_mean = float(np.mean(finals))
    lines = [
        f"lambda: {_num(spreading_rate)}",
        f"mu: {_num(mu)}",
    ]
    if threshold.no_spread:
        lines.append("lambda_c: NoSpread")
    else:
        lines.append(f"lambda_c: {_num(threshold.lambda_c)}")
        lines.append(
            f"lambda/lambda_c: {_num(spreading_rate / threshold.lambda_c)}")
    lines += [
        f"mean-field final_r: {_num(traj.final_r)}",
        f"mean-field classification: {_classify(traj.final_r, i0)}",
        f"mc replicas: {replicas}",
        f"mc mean final fraction: {_num(mc_mean)}",
        f"mc classification: {_classify(mc_mean, seed_fraction)}",
    ]
    summary = "\n".join(lines) + "\n"

    _write_outputs(out_dir, [
        ("trajectory.csv", lambda p: write_trajectory_csv(p, traj)),
        ("mc_replicas.csv", lambda p: write_mc_csv(p, finals)),
        ("simulation_summary.txt", summary),
        ("simulate_config.json",
         _echo_config("simulate", graph=graph_json, **{
             "lambda": spreading_rate, "mu": mu, "dt": dt, "t_max": t_max,
             "replicas": replicas, "i0": i0, "projection": projection,
             "seed": seed})),
    ])
    click.echo(summary, nl=False)


@cli.command("communities")
@click.argument("graph_json", type=click.Path())
@click.option("--resolution", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-dir", default=".", show_default=True)
@click.option("--format", "fmt", type=FORMAT_FLAG, default="csv",
              show_default=True,
              help="gexf additionally writes a community-colored network.")
def cmd_communities(graph_json: str, resolution: float, seed: int,
                    out_dir: str, fmt: str) -> None:
    """Community detection on the weighted undirected projection."""
    g = _load_graph(graph_json)
    try:
        assignment = detect_communities(g, resolution, seed)
    except ValueError as exc:
        _fail(str(exc))

    outputs: list[tuple[str, object]] = [
        ("communities.csv", lambda p: write_communities_csv(p, assignment)),
    ]
    if fmt == "gexf":
        outputs.append(("network.gexf",
                        lambda p: write_gexf(p, g, assignment)))
    outputs.append(("communities_config.json",
                    _echo_config("communities", graph=graph_json,
                                 resolution=resolution, seed=seed,
                                 format=fmt)))
    _write_outputs(out_dir, outputs)
    click.echo(f"communities: {assignment.community_count} "
               f"(modularity {_num(assignment.modularity_q)})")


@cli.command("charge")
@click.argument("attribution_json", type=click.Path())
@click.option("--holling-n", type=int, default=1, show_default=True)
@click.option("--out-dir", default=".", show_default=True)
def cmd_charge(attribution_json: str, holling_n: int, out_dir: str) -> None:
    """Capital schedule from a stored attribution report."""
    if not Path(attribution_json).exists():
        _fail(f"attribution file not found: {attribution_json}")
    try:
        report = read_attribution_json(attribution_json)
        schedule = build_schedule(report, holling_n)
    except (ValueError, json.JSONDecodeError) as exc:
        _fail(str(exc))
    _write_outputs(out_dir, [
        ("capital_schedule.csv", lambda p: write_schedule_csv(p, schedule)),
        ("charge_config.json",
         _echo_config("charge", attribution=attribution_json,
                      holling_n=holling_n)),
    ])
    click.echo(f"rows: {len(schedule.rows)}")


def main(argv: list[str] | None = None) -> None:
    """Entry point mapping usage errors onto exit code 1."""
    try:
        # non-standalone click returns --help/--version exits as ints
        result = cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    if isinstance(result, int) and result != 0:
        sys.exit(result)


if __name__ == "__main__":
    main()
