"""Batch entry points: knowledge-base builds, one-shot generation, metrics.

Exit codes are stable so scripts can branch: 1 for input problems,
2 for backend failures, 3 for generation failures.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import sampledata
from .agents import load_templates, orchestrate
from .config import apply_backend_flag, build_backends, load_config
from .errors import (
    BackendError,
    GenerationError,
    InputError,
    KnowledgeBaseError,
    MaxprotoError,
)
from .kb import (
    IconRecord,
    build_icon_store,
    embed_records,
    ingest_ui_records,
    load_store,
    save_store,
    store_hash,
)
from .metrics import (
    evaluation_report,
    extract_features,
    load_features,
    save_features,
)
from .model import GenerationRequest, parse_wireframe
from .raster import load_image
from .render import write_outputs
from .service import create_app

EXIT_INPUT = 1
EXIT_BACKEND = 2
EXIT_GENERATION = 3


def _exit_code_for(exc: MaxprotoError) -> int:
    if isinstance(exc, BackendError):
        return EXIT_BACKEND
    if isinstance(exc, GenerationError):
        return EXIT_GENERATION
    if isinstance(exc, (InputError, KnowledgeBaseError)):
        return EXIT_INPUT
    return EXIT_GENERATION


def engine_errors(fn):
    """Map engine exceptions onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except MaxprotoError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(_exit_code_for(exc))
        except FileNotFoundError as exc:
            click.echo(f"error: file not found: {exc.filename or exc}", err=True)
            sys.exit(EXIT_INPUT)

    return wrapper


@click.group()
def main():
    """Wireframe-plus-prompt to editable UI prototype."""


@main.group()
def kb():
    """Build and embed the knowledge bases."""


def _maybe_embed(store, embed_flag, config_path, backend_flag):
    if not embed_flag:
        return store
    cfg = apply_backend_flag(load_config(config_path), backend_flag)
    backends = build_backends(cfg)
    return embed_records(store, backends.embed)


@kb.command("build")
@click.option("--source", required=True, type=click.Path(exists=True), help="Record directory or .jsonl file.")
@click.option("--captions", type=click.Path(exists=True), help="Captioner answers keyed by record id.")
@click.option("--out", required=True, type=click.Path(), help="Store file to write (ui_kb.jsonl).")
@click.option("--embed", is_flag=True, help="Embed records with the configured backend.")
@click.option("--backend", type=click.Choice(["mock", "remote"]), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@engine_errors
def kb_build(source, captions, out, embed, backend, config_path):
    """Ingest UI records (and captions) into a persisted store."""
    store, report = ingest_ui_records(source, captions=captions)
    store = _maybe_embed(store, embed, config_path, backend)
    save_store(store, out)
    click.echo(str(report))
    click.echo(f"store: {out} ({len(store)} records)")
    click.echo(f"store hash: {store_hash(store)}")


@kb.command("build-icons")
@click.option("--source", required=True, type=click.Path(exists=True), help="JSON list of {name, svg, description}.")
@click.option("--out", required=True, type=click.Path(), help="Store file to write (icon_kb.jsonl).")
@click.option("--embed", is_flag=True)
@click.option("--backend", type=click.Choice(["mock", "remote"]), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@engine_errors
def kb_build_icons(source, out, embed, backend, config_path):
    """Ingest icon records into a persisted store."""
    raw = json.loads(Path(source).read_text(encoding="utf-8"))
    store = build_icon_store(
        IconRecord(name=r["name"], svg=r["svg"], description=r["description"]) for r in raw
    )
    store = _maybe_embed(store, embed, config_path, backend)
    save_store(store, out)
    click.echo(f"store: {out} ({len(store)} icons)")
    click.echo(f"store hash: {store_hash(store)}")


@kb.command("sample")
@click.option("--dir", "directory", required=True, type=click.Path(), help="Directory for the sample fixtures.")
@engine_errors
def kb_sample(directory):
    """Write the built-in sample records, captions and icons."""
    directory = Path(directory)
    source_dir, captions = sampledata.write_sample_kb_source(directory)
    icons_file = directory / "icons.json"
    icons_file.write_text(
        json.dumps(
            [{"name": n, "description": d, "svg": s} for n, d, s in sampledata.SAMPLE_ICONS],
            indent=2,
        ),
        encoding="utf-8",
    )
    wf_file = directory / "wireframe.json"
    wf_file.write_text(json.dumps(sampledata.SAMPLE_WIREFRAME_DOCUMENT, indent=2), encoding="utf-8")
    click.echo(f"records: {source_dir}")
    click.echo(f"captions: {captions}")
    click.echo(f"icons: {icons_file}")
    click.echo(f"wireframe: {wf_file}")


def _write_provenance_log(proto, path: Path):
    blocks = []
    if proto.theme_provenance:
        p = proto.theme_provenance
        blocks.append(
            f"component: {p.component_id}\nbackend: {p.backend}\nseed: {p.seed}\n"
            + (f"notes: {'; '.join(p.notes)}\n" if p.notes else "")
            + f"prompt:\n{p.prompt}\n"
        )
    for p in proto.provenance:
        blocks.append(
            f"component: {p.component_id}\nbackend: {p.backend}\nseed: {p.seed}\n"
            + (f"notes: {'; '.join(p.notes)}\n" if p.notes else "")
            + f"prompt:\n{p.prompt}\n"
        )
    path.write_text("\n---\n".join(blocks), encoding="utf-8")


def _load_embedded(path, backends, what):
    store = load_store(path)
    if not store.is_embedded():
        click.echo(f"embedding {len(store)} {what} records (store was not embedded)", err=True)
        store = embed_records(store, backends.embed)
    return store


@main.command()
@click.option("--prompt", required=True, help="The design prompt.")
@click.option("--wireframe", "wireframe_path", required=True, type=click.Path(), help="Wireframe JSON document.")
@click.option("--kb", "kb_path", required=True, type=click.Path(exists=True), help="UI knowledge store.")
@click.option("--icons", "icons_path", required=True, type=click.Path(exists=True), help="Icon store.")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Output directory.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--backend", type=click.Choice(["mock", "remote"]), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@engine_errors
def generate(prompt, wireframe_path, kb_path, icons_path, out_dir, seed, backend, config_path):
    """One-shot generation: prototype.svg, prototype.json, provenance.log."""
    wf_path = Path(wireframe_path)
    if not wf_path.exists():
        click.echo(f"error: wireframe file not found: {wf_path}", err=True)
        sys.exit(EXIT_INPUT)
    cfg = apply_backend_flag(load_config(config_path), backend)
    backends = build_backends(cfg)
    templates = load_templates(cfg.templates_path) if cfg.templates_path else None
    wireframe = parse_wireframe(wf_path.read_text(encoding="utf-8"))
    request = GenerationRequest(prompt=prompt, wireframe=wireframe, seed=seed)
    ui_store = _load_embedded(kb_path, backends, "ui")
    icon_store = _load_embedded(icons_path, backends, "icon")
    proto = orchestrate(
        request, ui_store, icon_store, backends,
        templates=templates, options=cfg.options(),
    )
    out = Path(out_dir)
    written = write_outputs(proto, out)
    _write_provenance_log(proto, out / "provenance.log")
    click.echo(f"prototype: {written['svg']}")
    click.echo(f"document:  {written['json']}")
    click.echo(f"log:       {out / 'provenance.log'}")


def _load_feature_set(path, extractor_name):
    path = Path(path)
    if not path.exists():
        click.echo(f"error: no such path: {path}", err=True)
        sys.exit(EXIT_INPUT)
    if path.is_dir():
        images = sorted(
            p for p in path.iterdir() if p.suffix.lower() in (".png", ".jpg", ".jpeg")
        )
        if not images:
            click.echo(f"error: no images under {path}", err=True)
            sys.exit(EXIT_INPUT)
        return extract_features([load_image(p) for p in images])
    return load_features(path)


@main.command("eval")
@click.option("--real", "real_path", required=True, type=click.Path(), help="Feature file or image directory.")
@click.option("--gen", "gen_path", required=True, type=click.Path(), help="Feature file or image directory.")
@click.option("--extractor", default="pixel-stats", show_default=True, type=click.Choice(["pixel-stats"]))
@click.option("--out", "report_path", required=True, type=click.Path(), help="Report JSON to write.")
@engine_errors
def eval_cmd(real_path, gen_path, extractor, report_path):
    """Fréchet distance and generation diversity between two sets."""
    real = _load_feature_set(real_path, extractor)
    gen = _load_feature_set(gen_path, extractor)
    if real.n < 2 or gen.n < 2:
        click.echo("error: both sets need at least 2 samples", err=True)
        sys.exit(EXIT_INPUT)
    try:
        report = evaluation_report(real, gen)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    Path(report_path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    click.echo(f"fid: {report['fid']:.6f}")
    click.echo(f"gd:  {report['gd']:.6f}")
    click.echo(f"report: {report_path}")


@main.command()
@click.option("--features", "out_path", required=True, type=click.Path(), help="Feature file to write.")
@click.argument("images", nargs=-1, type=click.Path(exists=True))
@engine_errors
def featurize(out_path, images):
    """Extract pixel-stats features from images into a feature file."""
    if not images:
        click.echo("error: no images given", err=True)
        sys.exit(EXIT_INPUT)
    fs = extract_features([load_image(p) for p in images])
    save_features(fs, out_path)
    click.echo(f"features: {out_path} ({fs.n} x {fs.dim})")


@main.command()
@click.option("--addr", default="127.0.0.1:8000", show_default=True, help="host:port to bind.")
@click.option("--backend", type=click.Choice(["mock", "remote"]), default=None)
@click.option("--kb", "kb_path", required=True, type=click.Path(exists=True))
@click.option("--icons", "icons_path", required=True, type=click.Path(exists=True))
@click.option("--snapshot-dir", type=click.Path(), default=None)
@click.option("--ui", "ui_dir", type=click.Path(exists=True), default=None,
              help="Serve the browser studio from this directory at /studio.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@engine_errors
def serve(addr, backend, kb_path, icons_path, snapshot_dir, ui_dir, config_path):
    """Run the session service."""
    import uvicorn

    cfg = apply_backend_flag(load_config(config_path), backend)
    backends = build_backends(cfg)
    templates = load_templates(cfg.templates_path) if cfg.templates_path else None
    ui_store = _load_embedded(kb_path, backends, "ui")
    icon_store = _load_embedded(icons_path, backends, "icon")
    app = create_app(
        ui_store, icon_store, backends,
        templates=templates, options=cfg.options(),
        snapshot_dir=snapshot_dir, studio_dir=ui_dir,
    )
    host, _, port = addr.rpartition(":")
    if ui_dir:
        click.echo(f"studio: http://{host or '127.0.0.1'}:{port}/studio/")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))


if __name__ == "__main__":
    main()
