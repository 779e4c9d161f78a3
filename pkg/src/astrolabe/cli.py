"""Command-line interface for the store and its analyses.

Exit codes: 0 success, 1 domain error (validation failures, unknown ids,
conflicts), 2 usage error. With ``--output json`` results go to stdout as
JSON and diagnostics to stderr. Mutating commands hold an exclusive lock
file next to the store so the CLI and a running server can share one file;
read commands work on a point-in-time snapshot and never write.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
from filelock import FileLock

from . import __version__, decomposition, ingest, leannets, metrics
from .store import STRICT, STRUCTURAL, Store, StoreError, load, save

DEFAULT_STORE = "./astrolabe.json"


class Ctx:
    def __init__(self, store_path: str, mode: str, output: str, seed: int):
        self.store_path = Path(store_path)
        self.mode = mode
        self.output = output
        self.seed = seed

    def load(self) -> Store:
        if not self.store_path.exists():
            raise StoreError(f"store file not found: {self.store_path}")
        return load(self.store_path, mode=self.mode)

    def lock(self) -> FileLock:
        return FileLock(str(self.store_path) + ".lock")

    def emit(self, payload: dict, human: str) -> None:
        if self.output == "json":
            click.echo(json.dumps(payload, ensure_ascii=False, sort_keys=True))
        else:
            click.echo(human)


pass_ctx = click.make_pass_decorator(Ctx)


def _domain_errors(f):
    """Map StoreError to exit code 1 with a stable error code."""

    import functools

    @functools.wraps(f)
    def wrapper(ctx: Ctx, *args, **kwargs):
        try:
            return f(ctx, *args, **kwargs)
        except StoreError as exc:
            message = {"error": exc.code, "message": str(exc)}
            click.echo(json.dumps(message, ensure_ascii=False), err=True)
            sys.exit(1)

    return wrapper


@click.group()
@click.option(
    "--store",
    "store_path",
    envvar="ASTRO_STORE",
    default=DEFAULT_STORE,
    show_default=True,
    help="Path of the store file (env: ASTRO_STORE).",
)
@click.option(
    "--mode",
    type=click.Choice([STRICT, STRUCTURAL]),
    default=STRICT,
    show_default=True,
    help="strict verifies content addressing; structural permits labeled ids.",
)
@click.option(
    "--output",
    type=click.Choice(["human", "json"]),
    default="human",
    show_default=True,
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.version_option(version=__version__, prog_name="astro")
@click.pass_context
def main(click_ctx, store_path: str, mode: str, output: str, seed: int):
    """Content-addressable hypergraph store with semantic network analysis."""
    click_ctx.obj = Ctx(store_path, mode, output, seed)


@main.command()
@pass_ctx
@_domain_errors
def init(ctx: Ctx):
    """Create an empty store file."""
    if ctx.store_path.exists():
        raise StoreError(f"refusing to overwrite existing {ctx.store_path}")
    with ctx.lock():
        save(Store(ctx.mode), ctx.store_path)
    ctx.emit({"created": str(ctx.store_path)}, f"created {ctx.store_path}")


@main.command("add-atom")
@click.option("--record", required=True, help="Record string for the new atom.")
@pass_ctx
@_domain_errors
def add_atom(ctx: Ctx, record: str):
    """Insert a width-0 nerve; prints its id."""
    with ctx.lock():
        store = ctx.load()
        nerve_id = store.insert_atom(record)
        save(store, ctx.store_path)
    ctx.emit({"id": nerve_id}, nerve_id)


@main.command("add-nerve")
@click.option("--record", required=True)
@click.option("--ref", "refs", multiple=True, required=True, help="Repeat per reference.")
@pass_ctx
@_domain_errors
def add_nerve(ctx: Ctx, record: str, refs: tuple[str, ...]):
    """Insert a width>=1 nerve over existing ids; prints its id."""
    with ctx.lock():
        store = ctx.load()
        nerve_id = store.insert_nerve(record, refs)
        save(store, ctx.store_path)
    ctx.emit({"id": nerve_id}, nerve_id)


@main.command()
@click.argument("nerve_id")
@pass_ctx
@_domain_errors
def rm(ctx: Ctx, nerve_id: str):
    """Remove a nerve nothing else references."""
    with ctx.lock():
        store = ctx.load()
        store.remove(nerve_id)
        save(store, ctx.store_path)
    ctx.emit({"removed": nerve_id}, f"removed {nerve_id}")


@main.command()
@pass_ctx
@_domain_errors
def validate(ctx: Ctx):
    """Check the well-formedness axioms; exit 1 on any violation."""
    report = ctx.load().validate()
    payload = {
        "well_formed": report.is_well_formed,
        "violations": [
            {"axiom": v.axiom, "id": v.nerve_id, "message": v.message}
            for v in report.violations
        ],
    }
    if report.is_well_formed:
        ctx.emit(payload, "well-formed")
        return
    lines = [f"axiom {v.axiom}: {v.nerve_id}: {v.message}" for v in report.violations]
    ctx.emit(payload, "\n".join(lines))
    sys.exit(1)


@main.command()
@pass_ctx
@_domain_errors
def width(ctx: Ctx):
    """Width of every nerve plus the width histogram."""
    profile = decomposition.width_profile(ctx.load())
    payload = {
        "widths": dict(sorted(profile.widths.items())),
        "histogram": {str(k): v for k, v in sorted(profile.histogram.items())},
    }
    human = "\n".join(f"{i}  width {w}" for i, w in sorted(profile.widths.items()))
    ctx.emit(payload, human)


@main.command()
@pass_ctx
@_domain_errors
def depth(ctx: Ctx):
    """Depth of every nerve; -1 marks nerves trapped by reference cycles."""
    store = ctx.load()
    assignment = decomposition.depth_filtration(store)
    witnesses = decomposition.undepthed_set(store, assignment)
    payload = {
        "depths": dict(sorted(assignment.depths.items())),
        "stabilization_stage": assignment.stabilization_stage,
        "undepthed": witnesses,
    }
    human = "\n".join(f"{i}  depth {d}" for i, d in sorted(assignment.depths.items()))
    ctx.emit(payload, human)


@main.command()
@pass_ctx
@_domain_errors
def extract(ctx: Ctx):
    """Skeleton graph (atoms as nodes, width-1 atom pairs as edges) as JSON."""
    network = leannets.export_network(ctx.load())
    human = "\n".join(
        [f"node {n['id']} [{n['sort']}/{n['source']}]" for n in network["nodes"]]
        + [f"edge {e['id']}: {e['from']} -> {e['to']}" for e in network["edges"]]
    )
    ctx.emit(network, human)


@main.command()
@click.argument("atom_id")
@click.option("--reverse", is_flag=True, help="Walk edges against their direction.")
@pass_ctx
@_domain_errors
def propagate(ctx: Ctx, atom_id: str, reverse: bool):
    """Atoms semantically affected by a change to ATOM_ID."""
    skeleton = leannets.extract_skeleton(ctx.load())
    affected = leannets.propagate(skeleton, atom_id, reverse=reverse)
    payload = {
        "changed": affected.changed,
        "affected": affected.affected,
        "hop_distance": affected.hop_distance,
    }
    ctx.emit(payload, " ".join(affected.affected) if affected.affected else "(none)")


@main.command("metrics")
@click.option("--name", required=True)
@click.option("--source", "source_filter", default=None, help="Restrict to one source.")
@pass_ctx
@_domain_errors
def metrics_cmd(ctx: Ctx, name: str, source_filter: str):
    """Node metric values over the skeleton graph."""
    skeleton = leannets.extract_skeleton(ctx.load())
    vector = metrics.compute_metric(
        skeleton, name, params={"seed": ctx.seed}, source_filter=source_filter
    )
    payload = {
        "name": vector.name,
        "params": vector.params,
        "values": dict(sorted(vector.values.items())),
    }
    human = "\n".join(f"{i}  {v:.6g}" for i, v in sorted(vector.values.items()))
    ctx.emit(payload, human)


@main.command("cluster")
@click.option("--method", required=True)
@click.option("-k", "k", type=int, default=2, show_default=True)
@click.option("--source", "source_filter", default=None)
@pass_ctx
@_domain_errors
def cluster_cmd(ctx: Ctx, method: str, k: int, source_filter: str):
    """Group skeleton nodes into clusters."""
    skeleton = leannets.extract_skeleton(ctx.load())
    result = metrics.cluster(
        skeleton, method, params={"k": k, "seed": ctx.seed}, source_filter=source_filter
    )
    payload = {
        "method": result.method,
        "assignment": dict(sorted(result.assignment.items())),
        "quality": result.quality,
    }
    human = "\n".join(f"{i}  cluster {c}" for i, c in sorted(result.assignment.items()))
    ctx.emit(payload, human)


def _run_ingest(ctx: Ctx, files: tuple[str, ...], parser, dry_run: bool):
    results = []
    for name in files:
        try:
            text = Path(name).read_text(encoding="utf-8")
        except OSError as exc:
            raise StoreError(f"cannot read {name}: {exc}") from exc
        result = parser(text)
        entry = {
            "file": name,
            "atoms": [record for record, _ in result.atoms],
            "edges": [
                {"from": a, "to": b, "record": record}
                for a, b, record in result.edges
            ],
            "diagnostics": [
                {"span": list(span), "message": message}
                for span, message in result.diagnostics
            ],
        }
        results.append((entry, result))

    if dry_run:
        payload = {"dry_run": True, "files": [entry for entry, _ in results]}
        ctx.emit(payload, json.dumps(payload, ensure_ascii=False, indent=2))
        return

    with ctx.lock():
        store = ctx.load()
        for entry, result in results:
            entry["ids"] = ingest.commit(store, result)
        save(store, ctx.store_path)
    payload = {"files": [entry for entry, _ in results]}
    human = "\n".join(
        f"{entry['file']}: {len(entry['ids'])} nerves" for entry, _ in results
    )
    ctx.emit(payload, human)


@main.command("ingest-tex")
@click.argument("files", nargs=-1, required=True)
@click.option("--dry-run", is_flag=True, help="Print the parse result; change nothing.")
@pass_ctx
@_domain_errors
def ingest_tex(ctx: Ctx, files: tuple[str, ...], dry_run: bool):
    """Parse LaTeX files into atoms and statement-proof edges."""
    _run_ingest(ctx, files, ingest.parse_tex, dry_run)


@main.command("ingest-lean")
@click.argument("files", nargs=-1, required=True)
@click.option("--dry-run", is_flag=True, help="Print the parse result; change nothing.")
@pass_ctx
@_domain_errors
def ingest_lean(ctx: Ctx, files: tuple[str, ...], dry_run: bool):
    """Parse Lean files into statement/proof atoms and edges."""
    _run_ingest(ctx, files, ingest.parse_lean, dry_run)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


@main.command()
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["network-json", "dot"]),
    default="network-json",
    show_default=True,
)
@pass_ctx
@_domain_errors
def export(ctx: Ctx, fmt: str):
    """Write the skeleton graph to stdout as JSON or DOT."""
    network = leannets.export_network(ctx.load())
    if fmt == "network-json":
        click.echo(json.dumps(network, ensure_ascii=False, sort_keys=True))
        return
    lines = ["digraph astrolabe {"]
    for node in network["nodes"]:
        label = node["title"] or node["id"][:6]
        lines.append(f'  "{node["id"]}" [label="{_dot_escape(label)}"];')
    for edge in network["edges"]:
        label = edge["meaning"] or ""
        attr = f' [label="{_dot_escape(label)}"]' if label else ""
        lines.append(f'  "{edge["from"]}" -> "{edge["to"]}"{attr};')
    lines.append("}")
    click.echo("\n".join(lines))


@main.command()
@click.option("--port", type=int, default=8787, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@pass_ctx
@_domain_errors
def serve(ctx: Ctx, port: int, host: str):
    """Run the local HTTP API on the store file."""
    from . import server

    server.serve(str(ctx.store_path), port=port, host=host, mode=ctx.mode)


if __name__ == "__main__":
    main()
