"""Run-directory layout and persistence.

A run directory is the unit every pipeline stage reads and writes:

    run_dir/
      manifest.json          seed, scenario hash, totals, file inventory
      scenario.json          the exact configuration that produced the run
      seeding/<user>.jsonl   seeding-phase exposures (excluded from stats)
      sessions/<user>_dayNN.jsonl
      classifications.jsonl  one result per video (classify stage)
      samples/               stratified validation samples
      annotations/           annotation-tool writes
      report/                report bundle (report stage)
"""

from __future__ import annotations

import datetime as _dt
import hashlib
from dataclasses import dataclass
from pathlib import Path

from .errors import MissingArtifact
from .model import (
    ClassificationResult,
    ExposureRecord,
    UserProfile,
    canonical_json,
    read_classifications,
    read_exposure_log,
    write_exposure_log,
)
from .orchestrator import AuditRun
from .scenario import Scenario, load_scenario, save_scenario, scenario_hash
from .stats import AuditFrame

MANIFEST = "manifest.json"
SCENARIO = "scenario.json"
SEEDING_DIR = "seeding"
SESSIONS_DIR = "sessions"
CLASSIFICATIONS = "classifications.jsonl"
SAMPLES_DIR = "samples"
ANNOTATIONS_DIR = "annotations"
REPORT_DIR = "report"


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def session_file_name(user_id: str, day: int) -> str:
    return f"{user_id}_day{day:02d}.jsonl"


def write_run(run: AuditRun, out_dir: str | Path) -> dict:
    """Persist logs plus manifest; returns the manifest dict.

    The manifest's content_hash covers seed, scenario hash, totals, and
    the per-file digests -- everything deterministic -- while created_at
    stays outside the hash.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_scenario(run.scenario, out / SCENARIO)

    files: dict[str, dict] = {}

    def _write_log(rel: str, rows: list[ExposureRecord]) -> None:
        path = out / rel
        write_exposure_log(rows, path)
        files[rel] = {"sha256": _sha256_file(path), "rows": len(rows)}

    for user_id, rows in sorted(run.seeding_logs.items()):
        _write_log(f"{SEEDING_DIR}/{user_id}.jsonl", rows)
    for (user_id, day), rows in sorted(run.session_logs.items()):
        _write_log(f"{SESSIONS_DIR}/{session_file_name(user_id, day)}", rows)

    manifest = run.manifest()
    manifest["files"] = files
    manifest["content_hash"] = hashlib.sha256(
        canonical_json(
            {
                "seed": manifest["seed"],
                "scenario_hash": manifest["scenario_hash"],
                "totals": manifest["totals"],
                "files": files,
            }
        ).encode("utf-8")
    ).hexdigest()
    manifest["created_at"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    (out / MANIFEST).write_text(
        canonical_json(manifest) + "\n", encoding="utf-8", newline="\n"
    )
    return manifest


@dataclass
class LoadedRun:
    root: Path
    scenario: Scenario
    exposures: dict[str, list[ExposureRecord]]
    seeding: dict[str, list[ExposureRecord]]

    def users(self) -> dict[str, UserProfile]:
        return {u.user_id: u for u in self.scenario.users()}


def load_run(run_dir: str | Path) -> LoadedRun:
    root = Path(run_dir)
    if not (root / SCENARIO).exists():
        raise MissingArtifact(f"no {SCENARIO} in {root}; run the audit first")
    scenario = load_scenario(root / SCENARIO)
    sessions_dir = root / SESSIONS_DIR
    if not sessions_dir.is_dir():
        raise MissingArtifact(f"no {SESSIONS_DIR}/ directory in {root}; run the audit first")

    exposures: dict[str, list[ExposureRecord]] = {u.user_id: [] for u in scenario.users()}
    for path in sorted(sessions_dir.glob("*.jsonl")):
        rows = read_exposure_log(path)
        for row in rows:
            exposures.setdefault(row.user_id, []).append(row)

    seeding: dict[str, list[ExposureRecord]] = {}
    seeding_dir = root / SEEDING_DIR
    if seeding_dir.is_dir():
        for path in sorted(seeding_dir.glob("*.jsonl")):
            rows = read_exposure_log(path)
            if rows:
                seeding.setdefault(rows[0].user_id, []).extend(rows)

    return LoadedRun(root=root, scenario=scenario, exposures=exposures, seeding=seeding)


def load_classifications(run_dir: str | Path) -> dict[str, ClassificationResult]:
    path = Path(run_dir) / CLASSIFICATIONS
    if not path.exists():
        raise MissingArtifact(f"no {CLASSIFICATIONS} in {run_dir}; classify the run first")
    return {res.video_id: res for res in read_classifications(path)}


def load_frame(run_dir: str | Path) -> AuditFrame:
    """The joined analysis view over a classified run."""
    run = load_run(run_dir)
    return AuditFrame(
        users=run.users(),
        exposures=run.exposures,
        classifications=load_classifications(run_dir),
    )
