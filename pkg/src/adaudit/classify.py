"""Post-hoc ad-type and topic classification of logged exposures.

The shipped classifier is a deterministic rule engine implementing a
strict decision hierarchy:

1. a platform overlay ("Sponsored"/"Ad") forces Formal, whatever else the
   video contains;
2. otherwise a creator disclosure overlay ("Paid partnership"/
   "Promotional content") forces Disclosed;
3. otherwise any commercial indicator makes it Undisclosed;
4. otherwise it is not an ad.

The topic is a keyword scan over description, hashtags, transcript, and
frame texts; ties break in the fixed category order beauty < fitness <
gaming < politics, with 'other' as the fallback.

A seeded noise wrapper reproduces a target label-error rate for testing
the manual-validation protocol, and the external-model adapter contract
(request/response schema and label mapping) is specified here without a
wire implementation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Protocol

from .errors import MalformedRecord
from .model import (
    AdType,
    ClassificationResult,
    DISCLOSURE_OVERLAYS,
    ExposureRecord,
    FORMAL_OVERLAYS,
    IndicatorKind,
    OverlayLabel,
    TOPIC_ORDER,
    Topic,
    VideoRecord,
)
from .util import derived_rng

# Keyword lexicon per topic; hand-extended with plural forms. A keyword
# must belong to exactly one topic (tests enforce disjointness).
TOPIC_LEXICON: dict[Topic, tuple[str, ...]] = {
    Topic.BEAUTY: (
        "beauty", "makeup", "skincare", "cosmetic", "cosmetics",
        "clearskin", "kbeauty", "glasskin",
    ),
    Topic.FITNESS: (
        "fitness", "abs", "workout", "workouts", "gym", "sports", "health",
        "nutrition", "gymtok", "supplement", "supplements",
    ),
    Topic.GAMING: (
        "gaming", "gamer", "gamers", "gamerlife", "console", "consoles",
        "streamer", "streamers", "videogame", "videogames",
        "video game", "video games",
    ),
    Topic.POLITICS: (
        "politics", "political", "politician", "politicians", "voting",
        "election", "elections", "breaking news",
    ),
}

_TOPIC_PATTERNS = {
    topic: re.compile(r"\b(?:" + "|".join(re.escape(k) for k in kws) + r")\b")
    for topic, kws in TOPIC_LEXICON.items()
}

PROMO_HASHTAGS = frozenset({"ad", "werbung", "partnership", "collaboration", "sponsored"})
CTA_PHRASES = ("buy now", "shop today", "link in bio")
DEFAULT_BRANDS = frozenset({"brandhub", "dealfinds", "shopzone", "trendmart", "shineco"})

_PROMO_TAG_RE = re.compile(r"#(?:" + "|".join(sorted(PROMO_HASHTAGS)) + r")\b")
_URL_RE = re.compile(r"(?:https?://\S+|\bwww\.\S+)")
_MENTION_RE = re.compile(r"@[a-z0-9_]{3,}")
_CODE_TOKEN_RE = re.compile(r"^[A-Z][A-Z0-9]*\d[A-Z0-9]*$")


@dataclass(frozen=True)
class ClassifierInputView:
    """Observable video features; structurally cannot carry ground truth."""

    video_id: str
    author: str
    description: str
    hashtags: tuple[str, ...]
    transcript: str | None
    duration_s: float
    overlay_label: OverlayLabel
    commercial_indicators: tuple[IndicatorKind, ...]
    frames: tuple[str, str, str]

    @classmethod
    def from_video(cls, video: VideoRecord) -> "ClassifierInputView":
        return cls(
            video_id=video.video_id,
            author=video.author,
            description=video.description,
            hashtags=tuple(video.hashtags),
            transcript=video.transcript,
            duration_s=video.duration_s,
            overlay_label=video.overlay_label,
            commercial_indicators=tuple(video.commercial_indicators),
            frames=tuple(video.frames),
        )

    def text_blob(self) -> str:
        """All scannable text, lowercased. The author handle is excluded:
        it names the account, not the content."""
        parts = [self.description, " ".join(self.hashtags), *self.frames]
        if self.transcript:
            parts.append(self.transcript)
        return " ".join(parts).lower()


class Classifier(Protocol):
    def classify(self, view: ClassifierInputView) -> ClassificationResult: ...


def _scan_discount_code(text: str) -> bool:
    # Uppercase alphanumeric token (with a digit) adjacent to "code" or a
    # percentage token, e.g. "use code GLOW20" or "GLOW20 15% off".
    tokens = text.split()
    stripped = [t.strip(".,;:!?()[]'\"") for t in tokens]
    for i, tok in enumerate(stripped):
        if not _CODE_TOKEN_RE.match(tok):
            continue
        for j in (i - 1, i + 1):
            if 0 <= j < len(stripped):
                neigh = stripped[j]
                if neigh.lower() == "code" or "%" in neigh:
                    return True
    return False


def scan_indicators(
    view: ClassifierInputView, brands: frozenset[str] = DEFAULT_BRANDS
) -> tuple[IndicatorKind, ...]:
    """Deterministic token/pattern scan for commercial indicators."""
    blob = view.text_blob()
    found: set[IndicatorKind] = set()

    if any(h.lstrip("#").lower() in PROMO_HASHTAGS for h in view.hashtags) or _PROMO_TAG_RE.search(blob):
        found.add(IndicatorKind.PROMO_HASHTAG)
    # Case matters for discount codes: scan the original-case text.
    raw = " ".join([view.description, view.transcript or "", *view.frames])
    if _scan_discount_code(raw):
        found.add(IndicatorKind.DISCOUNT_CODE)
    if _URL_RE.search(blob):
        found.add(IndicatorKind.URL)
    if any(p in blob for p in CTA_PHRASES):
        found.add(IndicatorKind.CALL_TO_ACTION)
    if _MENTION_RE.search(blob) or any(re.search(rf"\b{re.escape(b)}\b", blob) for b in brands):
        found.add(IndicatorKind.BRAND_MENTION)
    if "qr code" in blob:
        found.add(IndicatorKind.QR_CODE)
    if "endorse" in blob:
        found.add(IndicatorKind.PRODUCT_ENDORSEMENT)

    order = list(IndicatorKind)
    return tuple(sorted(found, key=order.index))


def scan_topic(view: ClassifierInputView) -> Topic:
    """Keyword-count vote with fixed-order tie-breaking, 'other' fallback."""
    blob = view.text_blob()
    best_topic = Topic.OTHER
    best_count = 0
    for topic in TOPIC_ORDER:
        count = len(_TOPIC_PATTERNS[topic].findall(blob))
        if count > best_count:
            best_topic, best_count = topic, count
    return best_topic


class RuleClassifier:
    """The deterministic default classifier. Stateless and pure."""

    def __init__(self, brands: frozenset[str] = DEFAULT_BRANDS):
        self.brands = brands

    def classify(self, view: ClassifierInputView) -> ClassificationResult:
        indicators = tuple(
            sorted(
                set(scan_indicators(view, self.brands)) | set(view.commercial_indicators),
                key=list(IndicatorKind).index,
            )
        )
        overlay = view.overlay_label
        if overlay in FORMAL_OVERLAYS:
            ad_type = AdType.FORMAL
            reasoning = f"platform overlay '{overlay.value}' marks paid placement"
        elif overlay in DISCLOSURE_OVERLAYS:
            ad_type = AdType.DISCLOSED
            reasoning = f"creator disclosure overlay '{overlay.value}'"
        elif indicators:
            ad_type = AdType.UNDISCLOSED
            names = ", ".join(k.value for k in indicators)
            reasoning = f"no disclosure overlay; commercial indicators: {names}"
        else:
            ad_type = AdType.NON_AD
            reasoning = "no overlay and no commercial indicators"

        is_ad = ad_type is not AdType.NON_AD
        return ClassificationResult(
            video_id=view.video_id,
            is_ad=is_ad,
            ad_type=ad_type,
            ad_topic=scan_topic(view) if is_ad else None,
            indicators_found=indicators,
            reasoning=reasoning,
        )


@dataclass(frozen=True)
class NoiseSpec:
    type_error_rate: float
    topic_error_rate: float
    seed: int

    def __post_init__(self) -> None:
        for name in ("type_error_rate", "topic_error_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {rate}")


class NoisyClassifier:
    """Wraps a classifier with seeded, per-video label noise.

    Error draws depend only on (seed, video_id), so the wrapper stays a
    pure map regardless of classification order.
    """

    def __init__(self, inner: Classifier, spec: NoiseSpec):
        self.inner = inner
        self.spec = spec

    def classify(self, view: ClassifierInputView) -> ClassificationResult:
        base = self.inner.classify(view)
        rng = derived_rng(self.spec.seed, "label-noise", view.video_id)

        ad_type = base.ad_type
        if rng.random() < self.spec.type_error_rate:
            others = [t for t in AdType if t is not ad_type]
            ad_type = others[int(rng.integers(len(others)))]

        is_ad = ad_type is not AdType.NON_AD
        topic: Topic | None = None
        if is_ad:
            topic = base.ad_topic if base.ad_topic is not None else scan_topic(view)
            if rng.random() < self.spec.topic_error_rate:
                others_t = [t for t in Topic if t is not topic]
                topic = others_t[int(rng.integers(len(others_t)))]

        if ad_type is base.ad_type and topic == base.ad_topic:
            return base
        return ClassificationResult(
            video_id=base.video_id,
            is_ad=is_ad,
            ad_type=ad_type,
            ad_topic=topic,
            indicators_found=base.indicators_found,
            reasoning=f"{base.reasoning} [label noise applied]",
        )


def wrap_with_noise(classifier: Classifier, spec: NoiseSpec) -> Classifier:
    if spec.type_error_rate == 0.0 and spec.topic_error_rate == 0.0:
        return classifier
    return NoisyClassifier(classifier, spec)


def classify_dataset(
    records: Iterable[ExposureRecord | VideoRecord],
    classifier: Classifier,
) -> dict[str, ClassificationResult]:
    """Classify every distinct video once; a pure, order-independent map.

    Returns results keyed by video_id in sorted id order.
    """
    videos: dict[str, VideoRecord] = {}
    for rec in records:
        video = rec.video if isinstance(rec, ExposureRecord) else rec
        videos.setdefault(video.video_id, video)
    return {
        vid: classifier.classify(ClassifierInputView.from_video(videos[vid]))
        for vid in sorted(videos)
    }


# ---------------------------------------------------------------------------
# External-model adapter contract
# ---------------------------------------------------------------------------
# A remote vision-language classifier is plugged in over the wire: the
# request carries the observable view, the response is JSON with the fields
# below. Only the contract is shipped; no client is implemented.

ADAPTER_AD_TYPE_MAP = {
    "formal": AdType.FORMAL,
    "influencer": AdType.DISCLOSED,
    "other": AdType.UNDISCLOSED,
}

_ADAPTER_INDICATOR_MAP = {
    "discount code": IndicatorKind.DISCOUNT_CODE,
    "promo code": IndicatorKind.DISCOUNT_CODE,
    "promotional hashtag": IndicatorKind.PROMO_HASHTAG,
    "hashtag": IndicatorKind.PROMO_HASHTAG,
    "brand mention": IndicatorKind.BRAND_MENTION,
    "call to action": IndicatorKind.CALL_TO_ACTION,
    "product endorsement": IndicatorKind.PRODUCT_ENDORSEMENT,
    "endorsement": IndicatorKind.PRODUCT_ENDORSEMENT,
    "url": IndicatorKind.URL,
    "link": IndicatorKind.URL,
    "qr code": IndicatorKind.QR_CODE,
}


def view_to_request(view: ClassifierInputView) -> dict:
    """Serialize the observable view as the adapter request body."""
    return {
        "video_id": view.video_id,
        "author": view.author,
        "description": view.description,
        "hashtags": list(view.hashtags),
        "transcript": view.transcript,
        "duration_s": view.duration_s,
        "overlay_label": view.overlay_label.value,
        "commercial_indicators": [k.value for k in view.commercial_indicators],
        "frames": list(view.frames),
    }


def parse_adapter_response(video_id: str, payload: dict) -> ClassificationResult:
    """Map an adapter response onto the internal label space.

    Response schema: is_ad (bool), ad_type ("formal" | "influencer" |
    "other" | null), ad_topic (topic string | null), visual_indicators
    (list of strings), reasoning (string). The "influencer" label maps to
    Disclosed and the "other" ad type to Undisclosed.
    """
    try:
        is_ad = bool(payload["is_ad"])
        raw_type = payload["ad_type"]
        raw_topic = payload["ad_topic"]
        raw_indicators = payload.get("visual_indicators", [])
        reasoning = str(payload.get("reasoning", ""))
    except KeyError as exc:
        raise MalformedRecord("adapter response missing field", field=exc.args[0]) from exc

    if not is_ad:
        if raw_type is not None:
            raise MalformedRecord("non-ad response must carry ad_type null", field="ad_type")
        ad_type, topic = AdType.NON_AD, None
    else:
        if raw_type not in ADAPTER_AD_TYPE_MAP:
            raise MalformedRecord(f"unknown ad_type {raw_type!r}", field="ad_type")
        ad_type = ADAPTER_AD_TYPE_MAP[raw_type]
        try:
            topic = Topic(raw_topic)
        except ValueError:
            raise MalformedRecord(f"unknown ad_topic {raw_topic!r}", field="ad_topic") from None

    indicators = []
    for item in raw_indicators:
        kind = _ADAPTER_INDICATOR_MAP.get(str(item).strip().lower())
        if kind is not None and kind not in indicators:
            indicators.append(kind)

    return ClassificationResult(
        video_id=video_id,
        is_ad=is_ad,
        ad_type=ad_type,
        ad_topic=topic,
        indicators_found=tuple(indicators),
        reasoning=reasoning,
    )
