"""Synthesis of observable video features for the simulated platform.

The simulator works with textual feature summaries, not media: a video is
its description, hashtags, optional transcript, and three frame
descriptors (beginning, middle, end). This module renders those features
from a chosen ground truth so that the downstream rule classifier can
recover the topic from keywords and the commercial indicators from the
exact token patterns it scans for.

The vocabulary here is deliberately a strict subset of the classifier's
lexicon per topic and disjoint from every other topic; tests enforce both
properties so the generator and the scanner stay two independent routes.
"""

from __future__ import annotations

import numpy as np

from .model import (
    AdType,
    DISCLOSURE_OVERLAYS,
    FORMAL_OVERLAYS,
    GroundTruth,
    IndicatorKind,
    OverlayLabel,
    Topic,
    VideoRecord,
)

GEN_TOPIC_PHRASES: dict[Topic, list[str]] = {
    Topic.BEAUTY: [
        "my everyday makeup routine",
        "honest skincare review",
        "trying viral kbeauty finds",
        "glasskin tutorial step by step",
        "tiny cosmetics haul",
    ],
    Topic.FITNESS: [
        "full body workout at home",
        "leg day at the gym",
        "how i plan my nutrition",
        "gymtok motivation dump",
        "ranking my supplements",
    ],
    Topic.GAMING: [
        "late night gaming session",
        "budget gamer setup tour",
        "new console unboxing",
        "my streamer highlights",
        "gamerlife in thirty seconds",
    ],
    Topic.POLITICS: [
        "election night coverage",
        "sitting down with a politician",
        "voting explained in one minute",
        "political debate recap",
    ],
    Topic.OTHER: [
        "pov: sunday reset vlog",
        "street food tour downtown",
        "road trip day three",
        "teaching my dog a new trick",
        "city timelapse at dusk",
        "diy room decor ideas",
    ],
}

GEN_TOPIC_TAGS: dict[Topic, list[str]] = {
    Topic.BEAUTY: ["#makeup", "#skincare", "#kbeauty", "#glasskin"],
    Topic.FITNESS: ["#workout", "#gym", "#gymtok", "#supplements"],
    Topic.GAMING: ["#gaming", "#gamer", "#gamerlife", "#console"],
    Topic.POLITICS: ["#voting", "#election", "#politician"],
    Topic.OTHER: [],
}

GEN_TOPIC_SCENES: dict[Topic, list[str]] = {
    Topic.BEAUTY: ["vanity desk covered in cosmetics", "close-up of a skincare shelf"],
    Topic.FITNESS: ["squat rack at a busy gym", "meal prep for a workout week"],
    Topic.GAMING: ["rgb-lit gamer desk", "console controller close-up"],
    Topic.POLITICS: ["podium before the political debate", "voting booth queue"],
    Topic.OTHER: ["sunlit kitchen counter", "rainy street from a cafe window", "mountain road at noon"],
}

_NEUTRAL_OPENERS = ["pov:", "day 12:", "quick clip:", "okay so", "no way,", "finally,"]
_NEUTRAL_TAGS = ["#fyp", "#viral", "#foryou", "#trending", "#daily"]
_PROMO_TAGS = ["#ad", "#werbung", "#partnership", "#collaboration", "#sponsored"]
_CTA_LINES = [
    "buy now before it sells out",
    "shop today and thank me later",
    "link in bio for the deal",
]
_BRANDS = ["brandhub", "dealfinds", "shopzone", "trendmart", "shineco"]
_CODE_WORDS = ["SAVE", "GLOW", "FIT", "PLAY", "DEAL"]

_OVERLAY_FRAME_TEXT = {
    OverlayLabel.SPONSORED: "label overlay: Sponsored",
    OverlayLabel.AD: "label overlay: Ad",
    OverlayLabel.PAID_PARTNERSHIP: "label overlay: Paid partnership",
    OverlayLabel.PROMOTIONAL_CONTENT: "label overlay: Promotional content",
}

_INDICATOR_ORDER = list(IndicatorKind)


def _pick(rng: np.random.Generator, items: list[str]) -> str:
    return items[int(rng.integers(len(items)))]


def pick_indicator_kinds(
    rng: np.random.Generator, ad_type: AdType
) -> tuple[IndicatorKind, ...]:
    """Draw which commercial indicators a video will visibly carry.

    Undisclosed ads always carry at least one (that is what makes them
    detectable); formal/disclosed ads may carry some on top of their
    overlay; non-ads never do.
    """
    if ad_type is AdType.NON_AD:
        return ()
    if ad_type is AdType.UNDISCLOSED:
        count = 1 + int(rng.random() < 0.45) + int(rng.random() < 0.2)
    else:
        if rng.random() >= 0.5:
            return ()
        count = 1 + int(rng.random() < 0.35)
    idx = rng.choice(len(_INDICATOR_ORDER), size=count, replace=False)
    kinds = sorted((_INDICATOR_ORDER[int(i)] for i in idx), key=_INDICATOR_ORDER.index)
    return tuple(kinds)


def overlay_for(rng: np.random.Generator, ad_type: AdType) -> OverlayLabel:
    """Overlay label implied by the ground-truth ad type.

    The two members of each label pair are an observed platform quirk with
    no semantic difference, so the choice within a pair is a 50/50 draw.
    """
    if ad_type is AdType.FORMAL:
        return FORMAL_OVERLAYS[int(rng.integers(2))]
    if ad_type is AdType.DISCLOSED:
        return DISCLOSURE_OVERLAYS[int(rng.integers(2))]
    return OverlayLabel.NONE


def render_video(
    video_id: str,
    rng: np.random.Generator,
    true_ad_type: AdType,
    true_topic: Topic,
    overlay_label: OverlayLabel,
    indicators: tuple[IndicatorKind, ...],
    duration_s: float,
) -> VideoRecord:
    """Materialize the observable record for a (type, topic) ground truth."""
    author = f"@creator{int(rng.integers(1, 41)):02d}"
    parts = [f"{_pick(rng, _NEUTRAL_OPENERS)} {_pick(rng, GEN_TOPIC_PHRASES[true_topic])}"]
    hashtags = []
    if true_topic is not Topic.OTHER:
        hashtags.append(_pick(rng, GEN_TOPIC_TAGS[true_topic]))
    hashtags.append(_pick(rng, _NEUTRAL_TAGS))

    if rng.random() < 0.7:
        if true_topic is Topic.OTHER:
            transcript = "hey everyone, just a normal day over here."
        else:
            phrase = _pick(rng, GEN_TOPIC_PHRASES[true_topic])
            transcript = f"hey everyone, today it's all about {phrase}."
    else:
        transcript = None

    scene = _pick(rng, GEN_TOPIC_SCENES[true_topic])
    frames = [f"opening shot: {scene}", f"mid shot: {scene}", "closing shot: wave goodbye"]
    if overlay_label in _OVERLAY_FRAME_TEXT:
        frames[1] = f"{frames[1]}; {_OVERLAY_FRAME_TEXT[overlay_label]}"
        frames[2] = f"{frames[2]}; {_OVERLAY_FRAME_TEXT[overlay_label]}"

    for kind in indicators:
        if kind is IndicatorKind.DISCOUNT_CODE:
            code = f"{_pick(rng, _CODE_WORDS)}{int(rng.integers(10, 91))}"
            parts.append(f"use code {code} at checkout")
        elif kind is IndicatorKind.PROMO_HASHTAG:
            hashtags.append(_pick(rng, _PROMO_TAGS))
        elif kind is IndicatorKind.BRAND_MENTION:
            parts.append(f"thanks to @{_pick(rng, _BRANDS)} for sending this")
        elif kind is IndicatorKind.CALL_TO_ACTION:
            parts.append(_pick(rng, _CTA_LINES))
        elif kind is IndicatorKind.URL:
            parts.append(f"full details at https://shop.example/{rng.integers(1000, 9999)}")
        elif kind is IndicatorKind.QR_CODE:
            frames[2] = f"{frames[2]}; qr code overlay in the corner"
        elif kind is IndicatorKind.PRODUCT_ENDORSEMENT:
            frames[1] = f"{frames[1]}; creator endorses the product on camera"

    return VideoRecord(
        video_id=video_id,
        author=author,
        description=". ".join(parts),
        hashtags=tuple(hashtags),
        transcript=transcript,
        duration_s=duration_s,
        overlay_label=overlay_label,
        commercial_indicators=indicators,
        frames=(frames[0], frames[1], frames[2]),
        truth=GroundTruth(true_ad_type=true_ad_type, true_topic=true_topic),
    )
