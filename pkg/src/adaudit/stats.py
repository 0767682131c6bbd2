"""Rates, profiling effects, significance tests, and validation analytics.

All quantities are exact integer-count ratios until the final division.
The significance test is the pooled two-proportion z-test, two-sided,
without continuity correction; star categories follow the thresholds
0.05 / 0.01 / 0.001.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import (
    EmptyIntersection,
    InvalidCounts,
    JoinFailure,
    NoBaselineUsers,
)
from .model import (
    AdType,
    AgeBand,
    AnnotationRecord,
    ClassificationResult,
    CREATOR_AD_TYPES,
    ExposureRecord,
    Topic,
    UserProfile,
)
from .util import derived_rng


@dataclass(frozen=True)
class Rate:
    """An integer-count proportion; undefined when the denominator is 0."""

    numerator: int
    denominator: int

    def __post_init__(self) -> None:
        if self.numerator < 0 or self.denominator < 0:
            raise InvalidCounts(f"negative counts: {self.numerator}/{self.denominator}")
        if self.numerator > self.denominator:
            raise InvalidCounts(f"numerator exceeds denominator: {self.numerator}/{self.denominator}")

    @property
    def value(self) -> float:
        return self.numerator / self.denominator if self.denominator > 0 else 0.0

    @property
    def defined(self) -> bool:
        return self.denominator > 0

    def display(self) -> str:
        """Render like '91.89% (136/148)'; zero denominators show 0.00%."""
        return f"{100.0 * self.value:.2f}% ({self.numerator}/{self.denominator})"


class Stars(Enum):
    NONE = ""
    ONE = "*"
    TWO = "**"
    THREE = "***"


def stars_for(p_value: float) -> Stars:
    if p_value < 0.001:
        return Stars.THREE
    if p_value < 0.01:
        return Stars.TWO
    if p_value < 0.05:
        return Stars.ONE
    return Stars.NONE


@dataclass(frozen=True)
class ZTestResult:
    z: float
    p_value: float
    stars: Stars


def two_proportion_z(x1: int, n1: int, x2: int, n2: int) -> ZTestResult:
    """Pooled two-proportion z-test, two-sided.

    p_hat = (x1+x2)/(n1+n2); z = (p1-p2)/sqrt(p_hat(1-p_hat)(1/n1+1/n2));
    p = two-sided normal tail. Degenerate pooled proportions (0 or 1)
    yield z=0, p=1.
    """
    if n1 <= 0 or n2 <= 0:
        raise InvalidCounts(f"sample sizes must be positive, got n1={n1}, n2={n2}")
    if not (0 <= x1 <= n1) or not (0 <= x2 <= n2):
        raise InvalidCounts(f"counts out of range: x1={x1}/{n1}, x2={x2}/{n2}")
    pooled = (x1 + x2) / (n1 + n2)
    if pooled == 0.0 or pooled == 1.0:
        return ZTestResult(z=0.0, p_value=1.0, stars=Stars.NONE)
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    z = (x1 / n1 - x2 / n2) / se
    p = math.erfc(abs(z) / math.sqrt(2.0))
    return ZTestResult(z=z, p_value=p, stars=stars_for(p))


@dataclass(frozen=True)
class ProfilingResult:
    personalization: Rate
    baseline: Rate
    delta_pp: float
    z: float
    p_value: float
    stars: Stars


def profiling_effect(pers: Rate, base: Rate) -> ProfilingResult:
    """Percentage-point difference plus significance test.

    The test is skipped (p=1, no stars) when either rate is undefined.
    """
    delta_pp = 100.0 * (pers.value - base.value)
    if pers.defined and base.defined:
        test = two_proportion_z(pers.numerator, pers.denominator, base.numerator, base.denominator)
    else:
        test = ZTestResult(z=0.0, p_value=1.0, stars=Stars.NONE)
    return ProfilingResult(
        personalization=pers,
        baseline=base,
        delta_pp=delta_pp,
        z=test.z,
        p_value=test.p_value,
        stars=test.stars,
    )


# ---------------------------------------------------------------------------
# Dataset view
# ---------------------------------------------------------------------------


@dataclass
class AuditFrame:
    """Joined view over a run: profiles, main-phase exposures, labels."""

    users: dict[str, UserProfile]
    exposures: dict[str, list[ExposureRecord]]
    classifications: dict[str, ClassificationResult]

    def result_for(self, video_id: str) -> ClassificationResult:
        res = self.classifications.get(video_id)
        if res is None:
            raise JoinFailure(f"no classification for video {video_id!r}")
        return res

    def user_results(self, user_id: str) -> list[ClassificationResult]:
        return [self.result_for(rec.video.video_id) for rec in self.exposures.get(user_id, [])]

    def ordered_users(self) -> list[UserProfile]:
        """Interest-major, minor-before-adult ordering used by all tables."""
        topic_order = [t.value for t in Topic]
        band_order = [AgeBand.MINOR, AgeBand.ADULT]
        return sorted(
            self.users.values(),
            key=lambda u: (topic_order.index(u.interest.value), band_order.index(u.band)),
        )


def _ad_results(results: Iterable[ClassificationResult], ad_types: Iterable[AdType]):
    wanted = set(ad_types)
    return [r for r in results if r.ad_type in wanted]


def personalization_rate(
    frame: AuditFrame, user_id: str, ad_types: Iterable[AdType]
) -> Rate:
    """Share of the user's ads (of the given types) matching their interest."""
    interest = frame.users[user_id].interest
    ads = _ad_results(frame.user_results(user_id), ad_types)
    matched = sum(1 for r in ads if r.ad_topic == interest)
    return Rate(matched, len(ads))


def baseline_rate(frame: AuditFrame, user_id: str, ad_types: Iterable[AdType]) -> Rate:
    """Share of interest-topic ads among ads served to same-age-band users
    holding a different interest: the no-profiling expectation.

    Pools raw ad counts across all qualifying users.
    """
    user = frame.users[user_id]
    others = [
        u
        for u in frame.users.values()
        if u.user_id != user_id and u.band == user.band and u.interest != user.interest
    ]
    if not others:
        raise NoBaselineUsers(
            f"no {user.band.value} user with an interest other than {user.interest.value}"
        )
    pool: list[ClassificationResult] = []
    for other in others:
        pool.extend(_ad_results(frame.user_results(other.user_id), ad_types))
    matched = sum(1 for r in pool if r.ad_topic == user.interest)
    return Rate(matched, len(pool))


def user_profiling(frame: AuditFrame, user_id: str, ad_types: Iterable[AdType]) -> ProfilingResult:
    return profiling_effect(
        personalization_rate(frame, user_id, ad_types),
        baseline_rate(frame, user_id, ad_types),
    )


def disclosure_rate(frame: AuditFrame, user_id: str) -> Rate:
    """Disclosed ads as a share of all creator-driven commercial content."""
    results = frame.user_results(user_id)
    disclosed = sum(1 for r in results if r.ad_type is AdType.DISCLOSED)
    creator = sum(1 for r in results if r.ad_type in CREATOR_AD_TYPES)
    return Rate(disclosed, creator)


@dataclass(frozen=True)
class TopicMatrix:
    """Interest x ad-topic counts for one age band and ad-type set."""

    interests: tuple[Topic, ...]
    topics: tuple[Topic, ...]
    counts: tuple[tuple[int, ...], ...]

    def count(self, interest: Topic, topic: Topic) -> int:
        return self.counts[self.interests.index(interest)][self.topics.index(topic)]

    @property
    def diagonal_share(self) -> Rate:
        diag = sum(
            self.count(i, i)
            for i in self.interests
            if i in self.topics
        )
        total = sum(sum(row) for row in self.counts)
        return Rate(diag, total)


def topic_matrix(
    frame: AuditFrame, band: AgeBand, ad_types: Iterable[AdType]
) -> TopicMatrix:
    """Counts of ad topics seen per interest group within one age band."""
    users = [u for u in frame.ordered_users() if u.band == band]
    interests = tuple(dict.fromkeys(u.interest for u in users))
    topics = tuple(Topic)
    grid = {i: {t: 0 for t in topics} for i in interests}
    for user in users:
        for res in _ad_results(frame.user_results(user.user_id), ad_types):
            grid[user.interest][res.ad_topic] += 1
    counts = tuple(tuple(grid[i][t] for t in topics) for i in interests)
    return TopicMatrix(interests=interests, topics=topics, counts=counts)


# ---------------------------------------------------------------------------
# Validation protocol: sampling, agreement, confusion
# ---------------------------------------------------------------------------

_SAMPLE_TYPES = list(AdType)


def stratified_sample(
    frame: AuditFrame, per_cell: int = 5, seed: int = 0
) -> dict[tuple[str, AdType], list[str]]:
    """min(per_cell, |cell|) video ids per (user x predicted ad type) cell.

    Draws are uniform without replacement and depend only on
    (seed, user, ad type), so samples are reproducible cell by cell.
    """
    out: dict[tuple[str, AdType], list[str]] = {}
    for user in frame.ordered_users():
        by_type: dict[AdType, list[str]] = {t: [] for t in _SAMPLE_TYPES}
        for rec in frame.exposures.get(user.user_id, []):
            res = frame.result_for(rec.video.video_id)
            by_type[res.ad_type].append(res.video_id)
        for ad_type in _SAMPLE_TYPES:
            cell = sorted(by_type[ad_type])
            rng = derived_rng(seed, "sample", user.user_id, ad_type.value)
            take = min(per_cell, len(cell))
            picked = sorted(
                cell[int(i)] for i in rng.choice(len(cell), size=take, replace=False)
            ) if cell else []
            out[(user.user_id, ad_type)] = picked
    return out


def _field_value(rec: AnnotationRecord | ClassificationResult, field: str):
    if field == "ad_type":
        return rec.ad_type
    if field == "ad_topic":
        return rec.ad_topic
    raise ValueError(f"unknown comparison field {field!r}")


def agreement(
    a: Sequence[AnnotationRecord],
    b: Sequence[AnnotationRecord | ClassificationResult],
    field: str = "ad_type",
) -> Rate:
    """Share of shared video ids on which the two sides assign equal labels."""
    a_by_id = {r.video_id: r for r in a}
    b_by_id = {r.video_id: r for r in b}
    shared = sorted(set(a_by_id) & set(b_by_id))
    if not shared:
        raise EmptyIntersection("annotation sets share no video ids")
    equal = sum(
        1 for vid in shared if _field_value(a_by_id[vid], field) == _field_value(b_by_id[vid], field)
    )
    return Rate(equal, len(shared))


def confusion_matrix(
    predicted: Mapping[str, AnnotationRecord | ClassificationResult],
    reference: Mapping[str, AnnotationRecord | ClassificationResult],
    field: str = "ad_type",
) -> dict[str, dict[str, int]]:
    """Rows are reference labels, columns predicted labels.

    Absent ad_topic values appear under the label 'none'.
    """
    shared = sorted(set(predicted) & set(reference))
    if not shared:
        raise EmptyIntersection("prediction and reference share no video ids")
    labels = [t.value for t in (AdType if field == "ad_type" else Topic)]
    if field == "ad_topic":
        labels.append("none")
    matrix = {ref: {pred: 0 for pred in labels} for ref in labels}
    for vid in shared:
        ref_val = _field_value(reference[vid], field)
        pred_val = _field_value(predicted[vid], field)
        ref_key = ref_val.value if ref_val is not None else "none"
        pred_key = pred_val.value if pred_val is not None else "none"
        matrix[ref_key][pred_key] += 1
    return matrix


def _rate_json(rate: Rate) -> dict:
    return {
        "matched": rate.numerator,
        "total": rate.denominator,
        "pct": round(100.0 * rate.value, 2) if rate.defined else 0.0,
        "defined": rate.defined,
    }


def build_validation(
    classifications: Mapping[str, ClassificationResult],
    annotator_records: Mapping[str, Sequence[AnnotationRecord]],
) -> dict:
    """Manual-validation report: per-annotator accuracy against the
    pipeline, pairwise inter-annotator agreement, confusion matrices.

    Topic accuracy is additionally restricted to videos the annotator
    considers ads, mirroring how topic labels only exist for ads.
    """
    out: dict = {"annotators": {}, "pairwise": {}}
    for annotator, records in sorted(annotator_records.items()):
        by_vid = {r.video_id: r for r in records}
        shared = sorted(set(by_vid) & set(classifications))
        preds = {v: classifications[v] for v in shared}
        refs = {v: by_vid[v] for v in shared}
        type_acc = agreement(list(refs.values()), list(preds.values()), "ad_type")
        ad_vids = [v for v in shared if refs[v].ad_type is not AdType.NON_AD]
        topic_hits = sum(1 for v in ad_vids if preds[v].ad_topic == refs[v].ad_topic)
        out["annotators"][annotator] = {
            "compared": len(shared),
            "type_accuracy": _rate_json(type_acc),
            "topic_accuracy_ads": _rate_json(Rate(topic_hits, len(ad_vids))),
            "confusion_type": confusion_matrix(preds, refs, "ad_type"),
            "confusion_topic": confusion_matrix(preds, refs, "ad_topic"),
        }

    names = sorted(annotator_records)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            pair_key = f"{a}|{b}"
            out["pairwise"][pair_key] = {
                "ad_type": _rate_json(
                    agreement(list(annotator_records[a]), list(annotator_records[b]), "ad_type")
                ),
                "ad_topic": _rate_json(
                    agreement(list(annotator_records[a]), list(annotator_records[b]), "ad_topic")
                ),
            }
    return out
