"""Command-line frontend: generate -> optimize -> build -> simulate -> bench.

Each subcommand is a thin client of the service layer: it assembles the same
request model the HTTP API accepts, executes it (in-process by default, or
against a running server via --server), and writes the response to files.
Artifacts are byte-stable for fixed seeds; a ``<artifact>.manifest.json``
sidecar records tool version, flags, seeds, and timestamps.

Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .errors import NumericalFailureError, QsatError
from .manifest import RunManifest
from .service import handlers, models

_ROUTES = {
    "generate": "/instances/generate",
    "optimize": "/angles/optimize",
    "build": "/circuits/build",
    "simulate": "/simulate",
    "run_bench": "/bench",
}


def _call(ctx: click.Context, op: str, request, response_model):
    """Dispatch a request to the in-process handlers or a remote server."""
    server = ctx.obj.get("server")
    try:
        if server:
            import httpx

            resp = httpx.post(
                server.rstrip("/") + _ROUTES[op],
                json=request.model_dump(),
                timeout=None,
            )
            if resp.status_code == 422:
                raise click.UsageError(resp.text)
            if resp.status_code != 200:
                click.echo(f"server error: {resp.text}", err=True)
                sys.exit(3)
            return response_model.model_validate(resp.json())
        return getattr(handlers, op)(request)
    except NumericalFailureError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(3)
    except (QsatError, ValueError) as exc:
        raise click.UsageError(str(exc)) from exc


def _manifest(ctx: click.Context, subcommand: str, flags: dict, seeds: dict,
              inputs: list[str], outputs: list[str]) -> RunManifest:
    return RunManifest(
        tool_version=__version__,
        subcommand=subcommand,
        flags={k: v for k, v in flags.items() if v is not None},
        seeds=seeds,
        inputs=inputs,
        outputs=outputs,
    )


def _write(path: Path, text: str, manifest: RunManifest) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    manifest.write_sidecar(path)
    click.echo(f"wrote {path}")


def _load_instance(path: str) -> models.InstancePayload:
    text = Path(path).read_text()
    if path.endswith(".cnf") or text.lstrip().startswith(("c", "p")):
        from .sat import instance_to_json, parse_dimacs

        return models.InstancePayload(**instance_to_json(parse_dimacs(text)))
    return models.InstancePayload(**json.loads(text))


def _load_schedules(paths: tuple[str, ...]) -> list[models.SchedulePayload]:
    return [
        models.SchedulePayload(**json.loads(Path(p).read_text())) for p in paths
    ]


def _parse_p_range(spec: str) -> tuple[int, int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return int(lo), int(hi)
    p = int(spec)
    return p, p


@click.group()
@click.version_option(version=__version__)
@click.option("--server", default=None, metavar="URL",
              help="Run against a qsat service instead of in-process.")
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """QAOA circuits, exact simulation, and benchmarks for MAX k-SAT."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@main.command()
@click.option("-n", "num_vars", type=int, required=True, help="Variable count.")
@click.option("-k", "width", type=int, default=3, show_default=True,
              help="Clause width.")
@click.option("--density", type=float, default=4.0, show_default=True,
              help="Clauses per variable; m = round(density * n).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--out", default="instance", show_default=True,
              help="Output prefix; writes <out>.cnf and <out>.json.")
@click.pass_context
def generate(ctx, num_vars: int, width: int, density: float, seed: int, out: str):
    """Generate a random MAX k-SAT instance (DIMACS + instance JSON)."""
    req = models.GenerateRequest(n=num_vars, k=width, density=density, seed=seed)
    resp = _call(ctx, "generate", req, models.GenerateResponse)
    cnf, js = Path(f"{out}.cnf"), Path(f"{out}.json")
    manifest = _manifest(ctx, "generate",
                         {"n": num_vars, "k": width, "density": density},
                         {"seed": seed}, [], [str(cnf), str(js)])
    _write(cnf, resp.dimacs, manifest)
    _write(js, json.dumps(resp.instance.model_dump(), indent=2, sort_keys=True) + "\n",
           manifest)
    click.echo(f"instance {resp.instance_id}: n={resp.instance.n} k={resp.instance.k} "
               f"m={resp.m}")


@main.command()
@click.option("--instance", "instance_path", required=True,
              type=click.Path(exists=True), help="Instance JSON or DIMACS file.")
@click.option("-p", "p_spec", default="1", show_default=True,
              help="Round count or range, e.g. 3 or 1..12.")
@click.option("--hops", type=int, default=10, show_default=True,
              help="Basin-hopping iterations per p.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--stop-ratio", type=float, default=0.999, show_default=True,
              help="Stop the sweep once the ideal ratio exceeds this.")
@click.option("-o", "--out", default="angles", show_default=True,
              help="Output prefix; writes <out>_p<P>.json per round count.")
@click.pass_context
def optimize(ctx, instance_path: str, p_spec: str, hops: int, seed: int,
             stop_ratio: float, out: str):
    """Find QAOA angles by warm-started basin-hopping over a range of p."""
    p_min, p_max = _parse_p_range(p_spec)
    req = models.OptimizeRequest(
        instance=_load_instance(instance_path),
        p_min=p_min, p_max=p_max, hops=hops, seed=seed, stop_ratio=stop_ratio,
    )
    resp = _call(ctx, "optimize", req, models.OptimizeResponse)
    outputs = [f"{out}_p{s.p}.json" for s in resp.schedules]
    manifest = _manifest(ctx, "optimize",
                         {"p": p_spec, "hops": hops, "stop_ratio": stop_ratio},
                         {"seed": seed}, [instance_path], outputs)
    for sched, path in zip(resp.schedules, outputs):
        _write(Path(path), json.dumps(sched.model_dump(), indent=2, sort_keys=True) + "\n",
               manifest)
        click.echo(f"p={sched.p}: expectation={sched.expectation:.6f} "
                   f"ideal_ratio={sched.ideal_ratio:.6f}")
    if resp.stopped_early:
        click.echo(f"stopped early: ideal ratio exceeded {stop_ratio}")


@main.command(name="build")
@click.option("--instance", "instance_path", required=True,
              type=click.Path(exists=True))
@click.option("--angles", "angles_path", required=True,
              type=click.Path(exists=True), help="Angle-schedule JSON.")
@click.option("--gateset", type=click.Choice(["raw", "rzz", "cx"]), default="raw",
              show_default=True, help="Target gateset (rzz/cx = trapped-ion sets).")
@click.option("--format", "fmt", type=click.Choice(["qasm2", "qasm3", "json"]),
              default="qasm3", show_default=True)
@click.option("-o", "--out", required=True, help="Circuit output file.")
@click.pass_context
def build(ctx, instance_path: str, angles_path: str, gateset: str, fmt: str, out: str):
    """Synthesize (and optionally transpile) the QAOA circuit; print its census."""
    sched = json.loads(Path(angles_path).read_text())
    req = models.BuildRequest(
        instance=_load_instance(instance_path),
        gammas=sched["gammas"], betas=sched["betas"],
        gateset=gateset, fmt=fmt,
    )
    resp = _call(ctx, "build", req, models.BuildResponse)
    manifest = _manifest(ctx, "build", {"gateset": gateset, "format": fmt}, {},
                         [instance_path, angles_path], [out])
    _write(Path(out), resp.text, manifest)
    c = resp.census
    click.echo(f"census: 1q={c.one_qubit} 2q={c.two_qubit} depth={c.depth} "
               f"qubits={c.num_qubits} clbits={c.num_clbits}")


main.add_command(build, name="export")


@main.command()
@click.option("--instance", "instance_path", required=True,
              type=click.Path(exists=True))
@click.option("--angles", "angles_path", required=True,
              type=click.Path(exists=True))
@click.option("--shots", type=int, default=40, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--out", default="shots.jsonl", show_default=True)
@click.pass_context
def simulate(ctx, instance_path: str, angles_path: str, shots: int, seed: int,
             out: str):
    """Sample the QAOA circuit exactly; write shot records as JSON lines."""
    sched = json.loads(Path(angles_path).read_text())
    req = models.SimulateRequest(
        instance=_load_instance(instance_path),
        gammas=sched["gammas"], betas=sched["betas"], shots=shots, seed=seed,
    )
    resp = _call(ctx, "simulate", req, models.SimulateResponse)
    from .bench import shots_to_jsonl

    text = shots_to_jsonl(rec.model_dump() for rec in resp.shots)
    manifest = _manifest(ctx, "simulate", {"shots": shots}, {"seed": seed},
                         [instance_path, angles_path], [out])
    _write(Path(out), text, manifest)


@main.command(name="bench")
@click.option("--instance", "instance_path", required=True,
              type=click.Path(exists=True))
@click.option("--angles", "angles_paths", multiple=True,
              type=click.Path(exists=True),
              help="Angle-schedule JSON (repeat per round count).")
@click.option("--shots-file", "shots_path", type=click.Path(exists=True),
              help="Ingest external shots (JSONL with a p per record).")
@click.option("--shots", type=int, default=0, show_default=True,
              help="Per-p shots sampled from the ideal state; 0 = exact curve.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--baseline-samples", type=int, default=100_000, show_default=True)
@click.option("--baseline-seed", type=int, default=0, show_default=True)
@click.option("-o", "--out", default="curve.csv", show_default=True)
@click.option("--svg", "svg_path", default=None, help="Optional chart output.")
@click.pass_context
def run_bench(ctx, instance_path: str, angles_paths: tuple[str, ...],
              shots_path: str | None, shots: int, seed: int,
              baseline_samples: int, baseline_seed: int, out: str,
              svg_path: str | None):
    """Compute the approximation-ratio curve, baseline band, p_max and p_noise."""
    if not angles_paths and not shots_path:
        raise click.UsageError("provide --angles files or a --shots-file")
    shot_records: list[models.ShotPayload] = []
    if shots_path:
        for line in Path(shots_path).read_text().splitlines():
            if line.strip():
                shot_records.append(models.ShotPayload(**json.loads(line)))
    req = models.BenchRequest(
        instance=_load_instance(instance_path),
        schedules=_load_schedules(angles_paths),
        shot_records=shot_records,
        shots=shots,
        seed=seed,
        baseline_samples=baseline_samples,
        baseline_seed=baseline_seed,
    )
    resp = _call(ctx, "run_bench", req, models.BenchResponse)
    inputs = [instance_path, *angles_paths] + ([shots_path] if shots_path else [])
    manifest = _manifest(ctx, "bench",
                         {"shots": shots, "baseline_samples": baseline_samples},
                         {"seed": seed, "baseline_seed": baseline_seed},
                         inputs, [out])
    _write(Path(out), resp.csv, manifest)
    if svg_path:
        _render_svg(resp, svg_path, manifest)
    click.echo("summary:")
    click.echo(f"  instance      {resp.instance_id} (C_opt={resp.c_opt})")
    click.echo(f"  baseline      mean={resp.baseline.mean_ratio:.4f} "
               f"pct40={resp.baseline.pct40:.4f} pct60={resp.baseline.pct60:.4f}")
    click.echo(f"  p_max         {resp.p_max}")
    click.echo(f"  p_noise       {resp.p_noise if resp.p_noise is not None else 'none'}")
    click.echo(f"  qaoa_volume   {resp.qaoa_volume}")


def _render_svg(resp: models.BenchResponse, svg_path: str,
                manifest: RunManifest) -> None:
    from .bench import Baseline, BenchmarkCurve, CurvePoint, curve_to_svg

    points = tuple(
        CurvePoint(p=pt.p, mean_ratio=pt.mean_ratio, pct40=pt.pct40,
                   pct60=pt.pct60, sample_ratios=(pt.mean_ratio,) * pt.n_shots,
                   source=pt.source)
        for pt in resp.curve
    )
    curve = BenchmarkCurve(points=points, instance_id=resp.instance_id, n=0)
    baseline = Baseline(
        mean_ratio=resp.baseline.mean_ratio, pct40=resp.baseline.pct40,
        pct60=resp.baseline.pct60, sample_count=resp.baseline.sample_count,
        seed=resp.baseline.seed,
    )
    curve_to_svg([curve], baseline, svg_path,
                 title=f"instance {resp.instance_id}")
    manifest.write_sidecar(Path(svg_path))
    click.echo(f"wrote {svg_path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("qsat.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
