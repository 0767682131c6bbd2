"""Report bundle: overview, profiling tables, summary counts, topic matrices.

Everything is emitted twice: human-oriented CSVs (2-decimal percentages,
signed pp deltas, star footnotes) and a machine-readable report.json with
raw counts. Regenerating from identical inputs is byte-identical, and
every generated report is checked for count conservation before being
returned.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

from .errors import InvariantViolation, NoBaselineUsers
from .model import AdType, AD_TYPES, AgeBand, CREATOR_AD_TYPES, Topic
from .stats import (
    AuditFrame,
    ProfilingResult,
    Rate,
    TopicMatrix,
    disclosure_rate,
    personalization_rate,
    profiling_effect,
    baseline_rate,
    topic_matrix,
)

#: The two ad-type groupings every profiling table is computed over.
TYPE_SETS: dict[str, tuple[AdType, ...]] = {
    "formal": (AdType.FORMAL,),
    "creator": CREATOR_AD_TYPES,
}


@dataclass
class Report:
    overview: list[dict]
    profiling: dict[str, list[dict]]
    summary: dict[str, dict]
    matrices: dict[str, dict]

    def as_json_dict(self) -> dict:
        return {
            "overview": self.overview,
            "profiling": self.profiling,
            "summary": self.summary,
            "topic_matrices": self.matrices,
        }


def _rate_dict(rate: Rate) -> dict:
    return {
        "matched": rate.numerator,
        "total": rate.denominator,
        "pct": round(100.0 * rate.value, 2),
        "defined": rate.defined,
    }


def _profiling_dict(user_id: str, label: str, result: ProfilingResult) -> dict:
    return {
        "user_id": user_id,
        "label": label,
        "personalization": _rate_dict(result.personalization),
        "baseline": _rate_dict(result.baseline),
        "delta_pp": round(result.delta_pp, 2),
        "z": round(result.z, 4),
        "p_value": result.p_value,
        "stars": result.stars.value,
    }


def build_report(frame: AuditFrame) -> Report:
    users = frame.ordered_users()

    overview = []
    for user in users:
        exposures = frame.exposures.get(user.user_id, [])
        results = frame.user_results(user.user_id)
        ads = sum(1 for r in results if r.ad_type is not AdType.NON_AD)
        total = len(results)
        mean_dur = (
            sum(rec.video.duration_s for rec in exposures) / total if total else 0.0
        )
        disc = disclosure_rate(frame, user.user_id)
        overview.append(
            {
                "user_id": user.user_id,
                "label": user.label(),
                "gender": user.gender.value,
                "age": user.age.age_years,
                "interest": user.interest.value,
                "total_records": total,
                "ads_detected": ads,
                "ad_share_pct": round(100.0 * ads / total, 2) if total else 0.0,
                "avg_video_length_s": round(mean_dur, 2),
                "disclosure": _rate_dict(disc),
            }
        )

    profiling: dict[str, list[dict]] = {}
    for set_name, ad_types in TYPE_SETS.items():
        rows = []
        for user in users:
            pers = personalization_rate(frame, user.user_id, ad_types)
            try:
                base = baseline_rate(frame, user.user_id, ad_types)
            except NoBaselineUsers:
                # a band with a single interest has no no-profiling pool;
                # the row renders with an undefined baseline, test skipped
                base = Rate(0, 0)
            rows.append(_profiling_dict(user.user_id, user.label(), profiling_effect(pers, base)))
        profiling[set_name] = rows

    summary: dict[str, dict] = {}
    for user in users:
        results = frame.user_results(user.user_id)
        by_type: dict[str, dict] = {}
        for ad_type in AD_TYPES:
            topic_counts = {t.value: 0 for t in Topic}
            for r in results:
                if r.ad_type is ad_type:
                    topic_counts[r.ad_topic.value] += 1
            by_type[ad_type.value] = {
                "total": sum(topic_counts.values()),
                "topics": topic_counts,
            }
        ads = sum(d["total"] for d in by_type.values())
        summary[user.user_id] = {
            "label": user.label(),
            "interest": user.interest.value,
            "age_band": user.band.value,
            "gender": user.gender.value,
            "total_records": len(results),
            "non_ad_records": sum(1 for r in results if r.ad_type is AdType.NON_AD),
            "ads_detected": ads,
            "avg_video_length_s": next(
                row["avg_video_length_s"] for row in overview if row["user_id"] == user.user_id
            ),
            "by_type": by_type,
        }

    matrices: dict[str, dict] = {}
    for band in AgeBand:
        if not any(u.band == band for u in users):
            continue
        for set_name, ad_types in TYPE_SETS.items():
            m = topic_matrix(frame, band, ad_types)
            matrices[f"{band.value}_{set_name}"] = _matrix_dict(m)

    report = Report(overview=overview, profiling=profiling, summary=summary, matrices=matrices)
    _check_conservation(report)
    return report


def _matrix_dict(m: TopicMatrix) -> dict:
    diag = m.diagonal_share
    return {
        "interests": [i.value for i in m.interests],
        "topics": [t.value for t in m.topics],
        "counts": [list(row) for row in m.counts],
        "diagonal": {"matched": diag.numerator, "total": diag.denominator,
                     "pct": round(100.0 * diag.value, 2)},
    }


def _check_conservation(report: Report) -> None:
    """Count bookkeeping must close exactly: topic rows sum to the type
    total, type totals sum to ads detected, ads plus non-ads give the
    record total."""
    for user_id, entry in report.summary.items():
        for type_name, d in entry["by_type"].items():
            if sum(d["topics"].values()) != d["total"]:
                raise InvariantViolation(
                    f"{user_id}: {type_name} topic counts do not sum to the type total"
                )
        type_sum = sum(d["total"] for d in entry["by_type"].values())
        if type_sum != entry["ads_detected"]:
            raise InvariantViolation(f"{user_id}: type totals do not sum to ads detected")
        if entry["ads_detected"] + entry["non_ad_records"] != entry["total_records"]:
            raise InvariantViolation(f"{user_id}: ads + non-ads != total records")


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def render_overview_csv(report: Report) -> str:
    header = [
        "user_id", "label", "gender", "age", "interest", "total_records",
        "ads_detected", "ad_share_pct", "avg_video_length_s",
        "disclosed", "creator_total", "disclosure_pct",
    ]
    rows = []
    for r in report.overview:
        rows.append([
            r["user_id"], r["label"], r["gender"], r["age"], r["interest"],
            r["total_records"], r["ads_detected"], f"{r['ad_share_pct']:.2f}",
            f"{r['avg_video_length_s']:.2f}",
            r["disclosure"]["matched"], r["disclosure"]["total"],
            f"{r['disclosure']['pct']:.2f}",
        ])
    return _csv_text(header, rows)


def render_profiling_csv(report: Report, set_name: str) -> str:
    header = [
        "user_id", "label",
        "pers_pct", "pers_matched", "pers_total",
        "base_pct", "base_matched", "base_total",
        "delta_pp", "z", "p_value", "stars",
    ]
    rows = []
    for r in report.profiling[set_name]:
        rows.append([
            r["user_id"], r["label"],
            f"{r['personalization']['pct']:.2f}",
            r["personalization"]["matched"], r["personalization"]["total"],
            f"{r['baseline']['pct']:.2f}",
            r["baseline"]["matched"], r["baseline"]["total"],
            f"{r['delta_pp']:+.2f}", f"{r['z']:.2f}", f"{r['p_value']:.3g}", r["stars"],
        ])
    return _csv_text(header, rows)


def render_summary_csv(report: Report) -> str:
    user_ids = list(report.summary)
    labels = [report.summary[u]["label"] for u in user_ids]
    lines: list[list] = []
    lines.append(["Interest"] + [report.summary[u]["interest"] for u in user_ids])
    lines.append(["Age Group"] + [report.summary[u]["age_band"] for u in user_ids])
    lines.append(["Gender"] + [report.summary[u]["gender"] for u in user_ids])
    lines.append(["Total Records"] + [report.summary[u]["total_records"] for u in user_ids])
    lines.append(["Non Ad Records"] + [report.summary[u]["non_ad_records"] for u in user_ids])
    lines.append(["Ads Detected"] + [report.summary[u]["ads_detected"] for u in user_ids])
    lines.append(
        ["Avg Video Length"] + [f"{report.summary[u]['avg_video_length_s']:.2f}" for u in user_ids]
    )
    for ad_type in AD_TYPES:
        name = ad_type.value.capitalize() + " Ads"
        lines.append([name] + [report.summary[u]["by_type"][ad_type.value]["total"] for u in user_ids])
        for topic in Topic:
            lines.append(
                [f"{name} / {topic.value.capitalize()}"]
                + [report.summary[u]["by_type"][ad_type.value]["topics"][topic.value] for u in user_ids]
            )
    return _csv_text(["row"] + labels, lines)


def render_matrix_csv(report: Report, key: str) -> str:
    m = report.matrices[key]
    header = ["interest"] + list(m["topics"])
    rows = [
        [interest] + list(counts)
        for interest, counts in zip(m["interests"], m["counts"])
    ]
    return _csv_text(header, rows)


def write_report(report: Report, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def _emit(name: str, text: str) -> None:
        path = out / name
        path.write_text(text, encoding="utf-8", newline="\n")
        written.append(path)

    _emit("overview.csv", render_overview_csv(report))
    _emit("profiling_formal.csv", render_profiling_csv(report, "formal"))
    _emit("profiling_creator.csv", render_profiling_csv(report, "creator"))
    _emit("summary.csv", render_summary_csv(report))
    for key in sorted(report.matrices):
        _emit(f"topic_matrix_{key}.csv", render_matrix_csv(report, key))
    _emit("report.json", json.dumps(report.as_json_dict(), indent=2, sort_keys=True) + "\n")
    return written
