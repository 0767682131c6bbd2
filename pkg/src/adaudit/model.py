"""Domain types, validation, and the line-delimited record schemas.

Every type here is an immutable value: construction validates the
structural invariants, so a successfully built record is always coherent.
Serialization is canonical -- UTF-8, one JSON object per line, keys sorted
lexicographically at every level, compact separators -- which makes
round-trips and determinism checks byte-exact.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable

from .errors import (
    InvalidAge,
    InvariantViolation,
    MalformedRecord,
    MismatchedPair,
)


class AgeBand(str, Enum):
    MINOR = "minor"
    ADULT = "adult"


class Gender(str, Enum):
    FEMALE = "female"
    MALE = "male"


class Topic(str, Enum):
    BEAUTY = "beauty"
    FITNESS = "fitness"
    GAMING = "gaming"
    POLITICS = "politics"
    OTHER = "other"


#: Fixed category order used wherever topic ties must break deterministically.
TOPIC_ORDER = [Topic.BEAUTY, Topic.FITNESS, Topic.GAMING, Topic.POLITICS]


class AdType(str, Enum):
    FORMAL = "formal"
    DISCLOSED = "disclosed"
    UNDISCLOSED = "undisclosed"
    NON_AD = "non_ad"


#: The three commercial categories (everything but NON_AD).
AD_TYPES = (AdType.FORMAL, AdType.DISCLOSED, AdType.UNDISCLOSED)
#: Creator-driven commercial content: disclosed or not, remuneration bypasses the platform.
CREATOR_AD_TYPES = (AdType.DISCLOSED, AdType.UNDISCLOSED)


class OverlayLabel(str, Enum):
    NONE = "none"
    SPONSORED = "sponsored"
    AD = "ad"
    PAID_PARTNERSHIP = "paid_partnership"
    PROMOTIONAL_CONTENT = "promotional_content"


#: Platform-injected labels marking paid placement.
FORMAL_OVERLAYS = (OverlayLabel.SPONSORED, OverlayLabel.AD)
#: Creator-applied disclosure labels.
DISCLOSURE_OVERLAYS = (OverlayLabel.PAID_PARTNERSHIP, OverlayLabel.PROMOTIONAL_CONTENT)


class IndicatorKind(str, Enum):
    DISCOUNT_CODE = "discount_code"
    PROMO_HASHTAG = "promo_hashtag"
    BRAND_MENTION = "brand_mention"
    CALL_TO_ACTION = "call_to_action"
    PRODUCT_ENDORSEMENT = "product_endorsement"
    URL = "url"
    QR_CODE = "qr_code"


MINOR_AGES = (16, 17)
ADULT_AGES = (20, 21)


@dataclass(frozen=True)
class AgeGroup:
    band: AgeBand
    age_years: int

    def __post_init__(self) -> None:
        allowed = MINOR_AGES if self.band is AgeBand.MINOR else ADULT_AGES
        if self.age_years not in allowed:
            raise InvalidAge(
                f"age {self.age_years} not allowed for band {self.band.value!r}; "
                f"expected one of {allowed}"
            )

    @classmethod
    def from_age(cls, age_years: int) -> "AgeGroup":
        if age_years in MINOR_AGES:
            return cls(AgeBand.MINOR, age_years)
        if age_years in ADULT_AGES:
            return cls(AgeBand.ADULT, age_years)
        raise InvalidAge(
            f"age {age_years} is outside the audited bands {MINOR_AGES} and {ADULT_AGES}"
        )


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    age: AgeGroup
    gender: Gender
    interest: Topic
    locale: str

    def __post_init__(self) -> None:
        if self.interest is Topic.OTHER:
            raise InvariantViolation("'other' is never a valid user interest")
        if not self.user_id:
            raise InvariantViolation("user_id must be non-empty")

    @property
    def band(self) -> AgeBand:
        return self.age.band

    def label(self) -> str:
        """Human-readable handle like 'Beauty_Minor' used in report tables."""
        return f"{self.interest.value.capitalize()}_{self.band.value.capitalize()}"


@dataclass(frozen=True)
class AgentPair:
    pair_id: str
    minor: UserProfile
    adult: UserProfile


def validate_pair(pair: AgentPair) -> AgentPair:
    """Check the paired-design invariants and return the pair unchanged.

    The two agents must differ only in age: one minor (16-17), one adult
    (20-21), with identical gender, interest, and locale.
    """
    if pair.minor.band is not AgeBand.MINOR:
        raise InvalidAge(f"pair {pair.pair_id}: minor slot holds a {pair.minor.band.value}")
    if pair.adult.band is not AgeBand.ADULT:
        raise InvalidAge(f"pair {pair.pair_id}: adult slot holds a {pair.adult.band.value}")
    mismatches = [
        name
        for name, a, b in (
            ("gender", pair.minor.gender, pair.adult.gender),
            ("interest", pair.minor.interest, pair.adult.interest),
            ("locale", pair.minor.locale, pair.adult.locale),
        )
        if a != b
    ]
    if mismatches:
        raise MismatchedPair(f"pair {pair.pair_id}: agents differ on {', '.join(mismatches)}")
    if pair.minor.user_id == pair.adult.user_id:
        raise MismatchedPair(f"pair {pair.pair_id}: agents share user_id {pair.minor.user_id!r}")
    return pair


@dataclass(frozen=True)
class GroundTruth:
    true_ad_type: AdType
    true_topic: Topic


@dataclass(frozen=True)
class VideoRecord:
    video_id: str
    author: str
    description: str
    hashtags: tuple[str, ...]
    transcript: str | None
    duration_s: float
    overlay_label: OverlayLabel
    commercial_indicators: tuple[IndicatorKind, ...]
    frames: tuple[str, str, str]
    truth: GroundTruth | None = None

    def __post_init__(self) -> None:
        if len(self.frames) != 3:
            raise InvariantViolation(
                f"video {self.video_id}: expected 3 frame descriptors, got {len(self.frames)}"
            )
        if not self.duration_s > 0:
            raise InvariantViolation(f"video {self.video_id}: duration must be positive")
        object.__setattr__(self, "hashtags", tuple(self.hashtags))
        object.__setattr__(self, "commercial_indicators", tuple(self.commercial_indicators))
        object.__setattr__(self, "frames", tuple(self.frames))

    def without_truth(self) -> "VideoRecord":
        """The observable view: identical record with ground truth stripped."""
        if self.truth is None:
            return self
        return VideoRecord(
            video_id=self.video_id,
            author=self.author,
            description=self.description,
            hashtags=self.hashtags,
            transcript=self.transcript,
            duration_s=self.duration_s,
            overlay_label=self.overlay_label,
            commercial_indicators=self.commercial_indicators,
            frames=self.frames,
            truth=None,
        )


@dataclass(frozen=True)
class Engagement:
    watched_full: bool
    liked: bool
    bookmarked: bool
    skipped: bool

    def __post_init__(self) -> None:
        if self.watched_full == self.skipped:
            raise InvariantViolation("exactly one of watched_full/skipped must hold")
        if (self.liked or self.bookmarked) and not self.watched_full:
            raise InvariantViolation("liking or bookmarking requires a full watch")


#: The all-or-nothing strong-interest routine: watch to the end, like, bookmark.
ENGAGED_FULL = Engagement(watched_full=True, liked=True, bookmarked=True, skipped=False)
SKIPPED = Engagement(watched_full=False, liked=False, bookmarked=False, skipped=True)


@dataclass(frozen=True)
class ExposureRecord:
    user_id: str
    session_index: int
    position: int
    video: VideoRecord
    engaged: Engagement
    sim_time_s: float

    def __post_init__(self) -> None:
        if self.session_index < 1:
            raise InvariantViolation("session_index starts at 1")
        if self.position < 1:
            raise InvariantViolation("position starts at 1")


@dataclass(frozen=True)
class ClassificationResult:
    video_id: str
    is_ad: bool
    ad_type: AdType
    ad_topic: Topic | None
    indicators_found: tuple[IndicatorKind, ...]
    reasoning: str

    def __post_init__(self) -> None:
        _check_label_coherence(self.is_ad, self.ad_type, self.ad_topic)
        object.__setattr__(self, "indicators_found", tuple(self.indicators_found))


@dataclass(frozen=True)
class AnnotationRecord:
    annotator_id: str
    video_id: str
    ad_type: AdType
    ad_topic: Topic | None

    def __post_init__(self) -> None:
        _check_label_coherence(self.ad_type is not AdType.NON_AD, self.ad_type, self.ad_topic)


def _check_label_coherence(is_ad: bool, ad_type: AdType, ad_topic: Topic | None) -> None:
    # is_ad <=> ad_type != NON_AD <=> ad_topic present
    if is_ad != (ad_type is not AdType.NON_AD):
        raise InvariantViolation(f"is_ad={is_ad} contradicts ad_type={ad_type.value}")
    if is_ad and ad_topic is None:
        raise InvariantViolation("an ad must carry an ad_topic")
    if not is_ad and ad_topic is not None:
        raise InvariantViolation("a non-ad must not carry an ad_topic")


# ---------------------------------------------------------------------------
# Canonical serialization
# ---------------------------------------------------------------------------


def canonical_json(obj: Any) -> str:
    """Canonical single-line JSON: sorted keys, compact separators, UTF-8."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def video_to_dict(video: VideoRecord) -> dict:
    d: dict[str, Any] = {
        "video_id": video.video_id,
        "author": video.author,
        "description": video.description,
        "hashtags": list(video.hashtags),
        "duration_s": video.duration_s,
        "overlay_label": video.overlay_label.value,
        "commercial_indicators": [k.value for k in video.commercial_indicators],
        "frames": list(video.frames),
    }
    if video.transcript is not None:
        d["transcript"] = video.transcript
    if video.truth is not None:
        d["truth"] = {
            "true_ad_type": video.truth.true_ad_type.value,
            "true_topic": video.truth.true_topic.value,
        }
    return d


def video_from_dict(d: dict) -> VideoRecord:
    truth = None
    if "truth" in d:
        truth = GroundTruth(
            true_ad_type=AdType(d["truth"]["true_ad_type"]),
            true_topic=Topic(d["truth"]["true_topic"]),
        )
    return VideoRecord(
        video_id=d["video_id"],
        author=d["author"],
        description=d["description"],
        hashtags=tuple(d["hashtags"]),
        transcript=d.get("transcript"),
        duration_s=float(d["duration_s"]),
        overlay_label=OverlayLabel(d["overlay_label"]),
        commercial_indicators=tuple(IndicatorKind(k) for k in d["commercial_indicators"]),
        frames=tuple(d["frames"]),
        truth=truth,
    )


def exposure_to_dict(rec: ExposureRecord) -> dict:
    return {
        "user_id": rec.user_id,
        "session_index": rec.session_index,
        "position": rec.position,
        "sim_time_s": rec.sim_time_s,
        "engaged": {
            "watched_full": rec.engaged.watched_full,
            "liked": rec.engaged.liked,
            "bookmarked": rec.engaged.bookmarked,
            "skipped": rec.engaged.skipped,
        },
        "video": video_to_dict(rec.video),
    }


def exposure_from_dict(d: dict) -> ExposureRecord:
    e = d["engaged"]
    return ExposureRecord(
        user_id=d["user_id"],
        session_index=int(d["session_index"]),
        position=int(d["position"]),
        video=video_from_dict(d["video"]),
        engaged=Engagement(
            watched_full=bool(e["watched_full"]),
            liked=bool(e["liked"]),
            bookmarked=bool(e["bookmarked"]),
            skipped=bool(e["skipped"]),
        ),
        sim_time_s=float(d["sim_time_s"]),
    )


def classification_to_dict(res: ClassificationResult) -> dict:
    d: dict[str, Any] = {
        "video_id": res.video_id,
        "is_ad": res.is_ad,
        "ad_type": res.ad_type.value,
        "indicators_found": [k.value for k in res.indicators_found],
        "reasoning": res.reasoning,
    }
    if res.ad_topic is not None:
        d["ad_topic"] = res.ad_topic.value
    return d


def classification_from_dict(d: dict) -> ClassificationResult:
    return ClassificationResult(
        video_id=d["video_id"],
        is_ad=bool(d["is_ad"]),
        ad_type=AdType(d["ad_type"]),
        ad_topic=Topic(d["ad_topic"]) if d.get("ad_topic") is not None else None,
        indicators_found=tuple(IndicatorKind(k) for k in d["indicators_found"]),
        reasoning=d["reasoning"],
    )


def annotation_to_dict(rec: AnnotationRecord) -> dict:
    d: dict[str, Any] = {
        "annotator_id": rec.annotator_id,
        "video_id": rec.video_id,
        "ad_type": rec.ad_type.value,
    }
    if rec.ad_topic is not None:
        d["ad_topic"] = rec.ad_topic.value
    return d


def annotation_from_dict(d: dict) -> AnnotationRecord:
    return AnnotationRecord(
        annotator_id=d["annotator_id"],
        video_id=d["video_id"],
        ad_type=AdType(d["ad_type"]),
        ad_topic=Topic(d["ad_topic"]) if d.get("ad_topic") is not None else None,
    )


def _read_jsonl(path: str | Path, parse, kind: str) -> list:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(f"invalid JSON in {kind} file: {exc.msg}", line=lineno)
            try:
                out.append(parse(raw))
            except (KeyError, ValueError) as exc:
                key = exc.args[0] if isinstance(exc, KeyError) else None
                raise MalformedRecord(
                    f"bad {kind} record: {exc}", line=lineno, field=key
                ) from exc
    return out


def _write_jsonl(records: Iterable[Any], path: str | Path, render) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(canonical_json(render(rec)))
            fh.write("\n")


def read_exposure_log(path: str | Path) -> list[ExposureRecord]:
    return _read_jsonl(path, exposure_from_dict, "exposure")


def write_exposure_log(records: Iterable[ExposureRecord], path: str | Path) -> None:
    _write_jsonl(records, path, exposure_to_dict)


def read_classifications(path: str | Path) -> list[ClassificationResult]:
    return _read_jsonl(path, classification_from_dict, "classification")


def write_classifications(records: Iterable[ClassificationResult], path: str | Path) -> None:
    _write_jsonl(records, path, classification_to_dict)


def read_annotations(path: str | Path) -> list[AnnotationRecord]:
    return _read_jsonl(path, annotation_from_dict, "annotation")


def write_annotations(records: Iterable[AnnotationRecord], path: str | Path) -> None:
    _write_jsonl(records, path, annotation_to_dict)
