"""Command-line pipeline: run -> classify -> report / sample / validate / serve.

Exit codes: 0 success, 2 configuration error, 3 missing artifact,
4 invariant or data violation.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from .classify import NoiseSpec, RuleClassifier, classify_dataset, wrap_with_noise
from .errors import (
    AuditError,
    ConfigError,
    InvalidCounts,
    InvariantViolation,
    MalformedRecord,
    MissingArtifact,
)
from .model import (
    canonical_json,
    read_annotations,
    write_classifications,
)
from .orchestrator import run_audit
from .report import build_report, write_report
from .runio import (
    CLASSIFICATIONS,
    REPORT_DIR,
    SAMPLES_DIR,
    load_classifications,
    load_frame,
    load_run,
    write_run,
)
from .scenario import load_scenario
from .sim import PlatformSim
from .stats import build_validation, stratified_sample

EXIT_CONFIG = 2
EXIT_MISSING = 3
EXIT_INVARIANT = 4


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except MissingArtifact as exc:
            click.echo(f"missing artifact: {exc}", err=True)
            sys.exit(EXIT_MISSING)
        except (InvariantViolation, MalformedRecord, InvalidCounts) as exc:
            click.echo(f"invariant violation: {exc}", err=True)
            sys.exit(EXIT_INVARIANT)
        except AuditError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


@click.group()
def main() -> None:
    """Paired sock-puppet audit of a simulated short-video platform."""


@main.command("run")
@click.option("-s", "--scenario", "scenario_path", required=True, type=click.Path())
@click.option("-o", "--out", "out_dir", required=True, type=click.Path())
@_handle_errors
def cmd_run(scenario_path: str, out_dir: str) -> None:
    """Seed the agents and run all daily sessions; write logs + manifest."""
    scenario = load_scenario(scenario_path)
    run = run_audit(scenario)
    manifest = write_run(run, out_dir)
    click.echo(f"run {manifest['run_id']} -> {out_dir}")
    for user_id, totals in sorted(manifest["totals"].items()):
        click.echo(f"  {user_id}: {totals['sessions']} exposures ({totals['seeding']} seeding)")
    click.echo(f"content hash {manifest['content_hash']}")


def _parse_noise(spec: str) -> NoiseSpec:
    values = {"type": 0.0, "topic": 0.0, "seed": 0.0}
    for part in spec.split(","):
        if not part:
            continue
        key, _, raw = part.partition("=")
        key = key.strip()
        if key not in values:
            raise ConfigError(f"unknown noise key {key!r}; expected type=,topic=,seed=", "--noise")
        try:
            values[key] = float(raw)
        except ValueError:
            raise ConfigError(f"bad value {raw!r} for {key}", "--noise") from None
    try:
        return NoiseSpec(
            type_error_rate=values["type"],
            topic_error_rate=values["topic"],
            seed=int(values["seed"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), "--noise") from exc


@main.command("classify")
@click.argument("run_dir", type=click.Path())
@click.option("--noise", "noise_spec", default=None, help="type=R,topic=R,seed=N label noise")
@_handle_errors
def cmd_classify(run_dir: str, noise_spec: str | None) -> None:
    """Classify every main-phase exposure with the rule classifier."""
    run = load_run(run_dir)
    classifier = RuleClassifier()
    if noise_spec:
        classifier = wrap_with_noise(classifier, _parse_noise(noise_spec))
    records = [row for rows in run.exposures.values() for row in rows]
    results = classify_dataset(records, classifier)
    out_path = Path(run_dir) / CLASSIFICATIONS
    write_classifications(results.values(), out_path)
    ads = sum(1 for r in results.values() if r.is_ad)
    click.echo(f"classified {len(results)} videos ({ads} ads) -> {out_path}")


@main.command("report")
@click.argument("run_dir", type=click.Path())
@_handle_errors
def cmd_report(run_dir: str) -> None:
    """Build the report bundle (overview, profiling, summary, matrices)."""
    frame = load_frame(run_dir)
    report = build_report(frame)
    out = Path(run_dir) / REPORT_DIR
    written = write_report(report, out)
    click.echo(f"report bundle ({len(written)} files) -> {out}")
    for set_name, rows in report.profiling.items():
        for row in rows:
            click.echo(
                f"  [{set_name}] {row['label']}: "
                f"{row['personalization']['pct']:.2f}% vs {row['baseline']['pct']:.2f}% "
                f"delta {row['delta_pp']:+.2f} pp {row['stars']}"
            )


@main.command("sample")
@click.argument("run_dir", type=click.Path())
@click.option("--per-cell", default=5, show_default=True)
@click.option("--seed", default=0, show_default=True)
@_handle_errors
def cmd_sample(run_dir: str, per_cell: int, seed: int) -> None:
    """Stratified validation sample: per (user x ad type) cell."""
    frame = load_frame(run_dir)
    sample = stratified_sample(frame, per_cell=per_cell, seed=seed)
    out = Path(run_dir) / SAMPLES_DIR / f"sample_seed{seed}_per{per_cell}.jsonl"
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for (user_id, ad_type), vids in sorted(sample.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
            for vid in vids:
                fh.write(
                    canonical_json(
                        {"user_id": user_id, "ad_type": ad_type.value, "video_id": vid}
                    )
                    + "\n"
                )
    total = sum(len(v) for v in sample.values())
    click.echo(f"sampled {total} videos over {len(sample)} cells -> {out}")


@main.command("validate")
@click.argument("run_dir", type=click.Path())
@click.argument("annotation_files", nargs=-1, required=True, type=click.Path())
@_handle_errors
def cmd_validate(run_dir: str, annotation_files: tuple[str, ...]) -> None:
    """Accuracy vs the pipeline and inter-annotator agreement."""
    classifications = load_classifications(run_dir)
    annotators: dict[str, list] = {}
    for path in annotation_files:
        if not Path(path).exists():
            raise MissingArtifact(f"annotation file not found: {path}")
        for rec in read_annotations(path):
            annotators.setdefault(rec.annotator_id, []).append(rec)
    validation = build_validation(classifications, annotators)
    out = Path(run_dir) / "validation.json"
    out.write_text(
        json.dumps(validation, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n"
    )
    for annotator, entry in validation["annotators"].items():
        click.echo(
            f"  {annotator}: type accuracy {entry['type_accuracy']['pct']:.1f}% "
            f"({entry['type_accuracy']['matched']}/{entry['type_accuracy']['total']}), "
            f"topic (ads) {entry['topic_accuracy_ads']['pct']:.1f}%"
        )
    for pair_key, entry in validation["pairwise"].items():
        click.echo(
            f"  {pair_key}: ad_type agreement {entry['ad_type']['pct']:.1f}%, "
            f"ad_topic {entry['ad_topic']['pct']:.1f}%"
        )
    click.echo(f"validation -> {out}")


@main.command("serve")
@click.argument("run_dir", type=click.Path())
@click.option("--port", default=8400, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui", "ui_dir", default=None, type=click.Path(), help="static UI directory to mount at /")
@_handle_errors
def cmd_serve(run_dir: str, port: int, host: str, ui_dir: str | None) -> None:
    """Serve the review/annotation API (and optionally the web UI)."""
    import uvicorn

    from .service import create_review_app

    app = create_review_app(run_dir, static_dir=ui_dir)
    click.echo(f"review service for {run_dir} on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command("simserve")
@click.option("-s", "--scenario", "scenario_path", required=True, type=click.Path())
@click.option("--port", default=8500, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@_handle_errors
def cmd_simserve(scenario_path: str, port: int, host: str) -> None:
    """Serve the simulated platform's feed API for external agents."""
    import uvicorn

    from .service import create_feed_app

    scenario = load_scenario(scenario_path)
    sim = PlatformSim(scenario.policy, seed=scenario.seed, skip_cost_s=scenario.session.skip_cost_s)
    app = create_feed_app(sim)
    click.echo(f"feed service on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
