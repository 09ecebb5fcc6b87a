"""netboost command line: parsing, centrality, solving, sweeps, what-if,
benchmark reproduction, and the HTTP service.

Exit codes: 0 on success (an empty solution is a valid answer), 2 on
usage/config/parse errors, 1 on internal errors.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .bench import SCALES, generate_network, rows_to_csv, run_matrix, select_tier_targets
from .betweenness import betweenness_all
from .errors import NetboostError
from .graph import DistanceTransform, Network, parse_pajek
from .scenario import paths_report, run_budget_sweep, what_if_edge
from .solver import Mode, SolverConfig, solve_co_mbi
from .wire import (
    parse_solver_config,
    pathset_payload,
    resolve_node,
    solution_from_payload,
    solution_payload,
    sweep_payload,
    whatif_payload,
)

_TRANSFORMS = {t.value: t for t in DistanceTransform}


def _fail(exc: NetboostError) -> None:
    click.echo(f"error: {exc.code}: {exc.message}", err=True)
    sys.exit(2)


def _load_net(path: str) -> Network:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(2)
    return parse_pajek(text)


def _default_threads() -> int:
    return max(1, os.cpu_count() or 1)


class _Catcher(click.Group):
    """Translate domain errors into exit code 2, unexpected ones into 1."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except NetboostError as exc:
            _fail(exc)
        except click.ClickException:
            raise
        except click.exceptions.Abort:
            raise
        except Exception as exc:  # noqa: BLE001
            click.echo(f"internal error: {exc}", err=True)
            sys.exit(1)


@click.group(cls=_Catcher)
@click.version_option(package_name="netboost")
def main() -> None:
    """Improve the weighted betweenness centrality of a network node."""


# -- betweenness ---------------------------------------------------------------


@main.command("betweenness")
@click.option("--net", "net_path", required=True, help="Pajek NET file")
@click.option("--transform", type=click.Choice(sorted(_TRANSFORMS)), default="reciprocal")
@click.option("--top", type=int, default=None, help="only the N highest-ranked nodes")
@click.option("--format", "fmt", type=click.Choice(["table", "csv", "json"]), default="table")
@click.option("--threads", type=int, default=None)
def betweenness_cmd(net_path: str, transform: str, top: int | None, fmt: str, threads: int | None) -> None:
    """Weighted betweenness of every node, sorted descending."""
    net = _load_net(net_path)
    scores = betweenness_all(net, _TRANSFORMS[transform], threads=threads or _default_threads())
    ranked = scores.top(top)
    if fmt == "json":
        click.echo(json.dumps([
            {"node": v, "label": net.label(v), "betweenness": b} for v, b in ranked
        ], indent=2))
    elif fmt == "csv":
        click.echo("node,label,betweenness")
        for v, b in ranked:
            click.echo(f"{v},{net.label(v)},{b:.9g}")
    else:
        width = max((len(net.label(v)) for v, _ in ranked), default=5)
        for v, b in ranked:
            click.echo(f"{v:>6}  {net.label(v):<{width}}  {b:.6f}")


# -- solve ----------------------------------------------------------------------


def _solver_options(fn):
    fn = click.option("--transform", type=click.Choice(sorted(_TRANSFORMS)), default="reciprocal")(fn)
    fn = click.option("--no-binary-search", is_flag=True, default=False)(fn)
    fn = click.option("--max-edges", type=int, default=None)(fn)
    fn = click.option("--degree-filter", type=float, default=None, help="weighted-degree percentile filter")(fn)
    fn = click.option("--p-imp", type=float, default=0.01, help="relative improvement threshold")(fn)
    fn = click.option("--forbidden", default="", help="comma-separated labels or ids")(fn)
    fn = click.option("--strategy", default="no-increment",
                      help="no-increment | upper-bound:B | delta:P | delta-ratio:R")(fn)
    fn = click.option("--opponents", default="", help="comma-separated labels or ids")(fn)
    fn = click.option("--mode", type=click.Choice([m.value for m in Mode]), default="both")(fn)
    fn = click.option("--threads", type=int, default=None)(fn)
    return fn


def _split_refs(raw: str) -> list[str]:
    return [part.strip() for part in raw.split(",") if part.strip()]


def _build_config(net: Network, target: str, budget: int, mode: str, opponents: str, strategy: str,
                  forbidden: str, p_imp: float, degree_filter: float | None, max_edges: int | None,
                  no_binary_search: bool, transform: str) -> SolverConfig:
    body = {
        "target": target,
        "budget": budget,
        "mode": mode,
        "opponents": _split_refs(opponents),
        "strategy": strategy,
        "forbidden": _split_refs(forbidden),
        "p_imp": p_imp,
        "degree_filter_percentile": degree_filter,
        "max_edges": max_edges,
        "use_binary_search": not no_binary_search,
        "transform": transform,
    }
    return parse_solver_config(net, body)


def _emit_solution(net: Network, payload: dict, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2))
        return
    if fmt == "csv":
        click.echo("node,label,increment,weight_before,weight_after")
        for e in payload["edits"]:
            click.echo(f"{e['node']},{e['label']},{e['increment']},{e['weight_before']},{e['weight_after']}")
        return
    click.echo(f"target {payload['target_label']}: betweenness {payload['target_before']:.6f}"
               f" -> {payload['target_after']:.6f}")
    click.echo(f"budget used {payload['cost']}/{payload['budget']}; stopped: {payload['terminated_reason']}")
    if payload["edits"]:
        click.echo("edits:")
        for e in payload["edits"]:
            click.echo(f"  {e['label']:<20} +{e['increment']:<5} ({e['weight_before']} -> {e['weight_after']})")
    else:
        click.echo("edits: none")
    for opp in payload["opponents"]:
        pct = "n/a" if opp["pct_change"] is None else f"{opp['pct_change']:+.2f}%"
        click.echo(f"opponent {opp['label']}: {opp['before']:.6f} -> {opp['after']:.6f} ({pct})")


@main.command("solve")
@click.option("--net", "net_path", required=True)
@click.option("--target", required=True, help="target node label or id")
@click.option("--budget", required=True, type=int)
@_solver_options
@click.option("--format", "fmt", type=click.Choice(["table", "csv", "json"]), default="table")
@click.option("--out", type=click.Path(), default=None, help="also write the JSON payload here")
def solve_cmd(net_path, target, budget, mode, opponents, strategy, forbidden, p_imp, degree_filter,
              max_edges, no_binary_search, transform, threads, fmt, out) -> None:
    """Run the budgeted improvement solver for one target."""
    net = _load_net(net_path)
    cfg = _build_config(net, target, budget, mode, opponents, strategy, forbidden, p_imp,
                        degree_filter, max_edges, no_binary_search, transform)
    solution = solve_co_mbi(net, cfg, threads=threads or _default_threads())
    payload = solution_payload(net, solution)
    if out:
        Path(out).write_text(json.dumps(payload, indent=2))
    _emit_solution(net, payload, fmt)


# -- sweep ------------------------------------------------------------------------


def _parse_budget_spec(spec: str) -> list[int]:
    spec = spec.strip()
    try:
        if ":" in spec:
            parts = [int(x) for x in spec.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, stop, step = parts
            if step < 1 or start < 1 or stop < start:
                raise ValueError
            return list(range(start, stop + 1, step))
        if "," in spec:
            return [int(x) for x in spec.split(",") if x.strip()]
        return [int(spec)]
    except ValueError:
        raise NetboostError("INVALID_CONFIG", f"bad budget spec {spec!r} (use START:STOP:STEP or a list)") from None


@main.command("sweep")
@click.option("--net", "net_path", required=True)
@click.option("--target", required=True)
@click.option("--budgets", required=True, help="START:STOP:STEP (inclusive) or comma list")
@_solver_options
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@click.option("--out", type=click.Path(), default=None)
def sweep_cmd(net_path, target, budgets, mode, opponents, strategy, forbidden, p_imp, degree_filter,
              max_edges, no_binary_search, transform, threads, fmt, out) -> None:
    """Solve once per budget and count which nodes keep appearing."""
    net = _load_net(net_path)
    budget_list = _parse_budget_spec(budgets)
    cfg = _build_config(net, target, budget_list[0], mode, opponents, strategy, forbidden, p_imp,
                        degree_filter, max_edges, no_binary_search, transform)
    report = run_budget_sweep(net, cfg, budget_list, threads=threads or _default_threads())
    payload = sweep_payload(net, report)
    if out:
        Path(out).write_text(json.dumps(payload, indent=2))
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2))
        return
    click.echo("label,count")
    for row in payload["frequency_table"]:
        click.echo(f"{row['label']},{row['count']}")


# -- what-if and paths ---------------------------------------------------------------


@main.command("what-if")
@click.option("--net", "net_path", required=True)
@click.option("--a", "a_ref", required=True)
@click.option("--b", "b_ref", required=True)
@click.option("--weight", required=True, type=int, help="new weight (0 removes the edge)")
@click.option("--transform", type=click.Choice(sorted(_TRANSFORMS)), default="reciprocal")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
def what_if_cmd(net_path, a_ref, b_ref, weight, transform, fmt) -> None:
    """Set one edge's weight and watch both endpoints' betweenness."""
    net = _load_net(net_path)
    a = resolve_node(net, a_ref)
    b = resolve_node(net, b_ref)
    rep = what_if_edge(net, a, b, weight, _TRANSFORMS[transform])
    payload = whatif_payload(net, rep)
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2))
        return
    click.echo(f"edge {payload['a_label']} -- {payload['b_label']}: weight {rep.old_weight} -> {rep.new_weight}")
    click.echo(f"{payload['a_label']}: {rep.b_a_before:.6f} -> {rep.b_a_after:.6f}")
    click.echo(f"{payload['b_label']}: {rep.b_b_before:.6f} -> {rep.b_b_after:.6f}")


@main.command("paths")
@click.option("--net", "net_path", required=True)
@click.option("--s", "s_ref", required=True)
@click.option("--t", "t_ref", required=True)
@click.option("--solution", "solution_path", type=click.Path(), default=None,
              help="solution JSON (from solve --out) for the after-view")
@click.option("--max-paths", type=int, default=100)
@click.option("--transform", type=click.Choice(sorted(_TRANSFORMS)), default="reciprocal")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
def paths_cmd(net_path, s_ref, t_ref, solution_path, max_paths, transform, fmt) -> None:
    """All shortest paths between two nodes, before/after a solution."""
    net = _load_net(net_path)
    s = resolve_node(net, s_ref)
    t = resolve_node(net, t_ref)
    solution = None
    if solution_path:
        solution = solution_from_payload(json.loads(Path(solution_path).read_text()))
    before, after = paths_report(net, solution, s, t, _TRANSFORMS[transform], max_paths)
    payload = {"before": pathset_payload(net, before)}
    if after is not None:
        payload["after"] = pathset_payload(net, after)
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2))
        return
    for name in ("before", "after"):
        if name not in payload:
            continue
        ps = payload[name]
        if not ps["reachable"]:
            click.echo(f"{name}: UNREACHABLE")
            continue
        click.echo(f"{name}: distance {ps['distance']:.6f}, {ps['num_shortest']} shortest path(s)"
                   + (" (listing truncated)" if ps["truncated"] else ""))
        for p in ps["paths"]:
            click.echo("  " + " -> ".join(step["label"] for step in p))


# -- bench -----------------------------------------------------------------------------


@main.command("bench")
@click.option("--scale", type=click.Choice(sorted(SCALES)), required=True)
@click.option("--matrix", is_flag=True, default=False, help="run the full timing matrix")
@click.option("--seed", type=int, default=42)
@click.option("--reps", type=int, default=1, help="repetitions per cell (median)")
@click.option("--threads", type=int, default=None)
@click.option("--out", type=click.Path(), default=None, help="write the CSV here")
@click.option("--save-net", type=click.Path(), default=None, help="dump the generated network")
def bench_cmd(scale, matrix, seed, reps, threads, out, save_net) -> None:
    """Generate a benchmark-scale network and reproduce the timing matrix."""
    from .graph import serialize_pajek

    threads = threads or _default_threads()
    net = generate_network(scale, seed)
    click.echo(f"# generated {scale}: {net.n_nodes} nodes, {net.n_edges} edges (seed {seed})", err=True)
    if save_net:
        Path(save_net).write_text(serialize_pajek(net))
    targets = select_tier_targets(net, threads=threads)
    click.echo("# tiers: " + ", ".join(f"{k}={net.label(v)}" for k, v in targets.items()), err=True)
    if not matrix:
        return

    def progress(fraction, row):
        click.echo(f"# [{fraction:5.1%}] {row.tier}/{row.mode}/bs={'on' if row.binary_search else 'off'}"
                   f"/budget={row.budget}: {row.seconds:.3f}s", err=True)

    rows = run_matrix(net, targets, threads=threads, repetitions=reps, progress=progress)
    csv_text = rows_to_csv(rows)
    if out:
        Path(out).write_text(csv_text)
    click.echo(csv_text, nl=False)


# -- serve ------------------------------------------------------------------------------


@main.command("serve")
@click.option("--addr", default=None, help="HOST:PORT (default env NETBOOST_ADDR or 127.0.0.1:8787)")
@click.option("--workers", type=int, default=2, help="job worker pool size")
@click.option("--data-dir", type=click.Path(), default=None)
@click.option("--threads", type=int, default=None, help="solver threads per job")
def serve_cmd(addr, workers, data_dir, threads) -> None:
    """Start the HTTP service (SIGINT shuts down and cancels running jobs)."""
    import uvicorn

    from .service import create_app

    addr = addr or os.environ.get("NETBOOST_ADDR") or "127.0.0.1:8787"
    host, _, port_text = addr.rpartition(":")
    if not host or not port_text.isdigit():
        raise NetboostError("INVALID_CONFIG", f"bad address {addr!r}; expected HOST:PORT")
    app = create_app(workers=workers, data_dir=data_dir, solver_threads=threads or _default_threads())
    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")


if __name__ == "__main__":
    main()
