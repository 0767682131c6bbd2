from __future__ import annotations

import pytest

from adaudit.model import (
    AdType,
    AgeGroup,
    AgentPair,
    Engagement,
    ExposureRecord,
    Gender,
    GroundTruth,
    IndicatorKind,
    OverlayLabel,
    SKIPPED,
    Topic,
    UserProfile,
    VideoRecord,
)
from adaudit.scenario import default_scenario_dict, scenario_from_dict


def make_profile(
    user_id: str = "beauty_minor",
    age: int = 16,
    gender: Gender = Gender.FEMALE,
    interest: Topic = Topic.BEAUTY,
    locale: str = "DE",
) -> UserProfile:
    return UserProfile(
        user_id=user_id, age=AgeGroup.from_age(age), gender=gender, interest=interest, locale=locale
    )


def make_pair(
    minor_age: int = 16,
    adult_age: int = 21,
    gender: Gender = Gender.FEMALE,
    interest: Topic = Topic.BEAUTY,
    adult_gender: Gender | None = None,
    adult_interest: Topic | None = None,
    adult_locale: str = "DE",
) -> AgentPair:
    minor = make_profile("u_minor", minor_age, gender, interest)
    adult = make_profile(
        "u_adult", adult_age, adult_gender or gender, adult_interest or interest, adult_locale
    )
    return AgentPair(pair_id="p1", minor=minor, adult=adult)


def make_video(
    video_id: str = "v1",
    description: str = "pov: sunday reset vlog",
    hashtags: tuple[str, ...] = ("#fyp",),
    transcript: str | None = None,
    duration_s: float = 30.0,
    overlay_label: OverlayLabel = OverlayLabel.NONE,
    commercial_indicators: tuple[IndicatorKind, ...] = (),
    frames: tuple[str, str, str] = ("opening shot", "mid shot", "closing shot"),
    truth: GroundTruth | None = None,
    author: str = "@creator01",
) -> VideoRecord:
    return VideoRecord(
        video_id=video_id,
        author=author,
        description=description,
        hashtags=hashtags,
        transcript=transcript,
        duration_s=duration_s,
        overlay_label=overlay_label,
        commercial_indicators=commercial_indicators,
        frames=frames,
        truth=truth,
    )


def make_exposure(
    video: VideoRecord,
    user_id: str = "beauty_minor",
    session_index: int = 1,
    position: int = 1,
    engaged: Engagement = SKIPPED,
    sim_time_s: float = 0.0,
) -> ExposureRecord:
    return ExposureRecord(
        user_id=user_id,
        session_index=session_index,
        position=position,
        video=video,
        engaged=engaged,
        sim_time_s=sim_time_s,
    )


def tiny_scenario(
    seed: int = 11,
    days: int = 1,
    budget_s: float = 600.0,
    **overrides,
):
    """Small fast scenario derived from the default; overrides patch the
    raw dict before parsing (keys like 'policy.disclosure_honesty')."""
    data = default_scenario_dict(seed)
    data["session"]["days"] = days
    data["session"]["budget_s"] = budget_s
    for dotted, value in overrides.items():
        node = data
        *path, last = dotted.split(".")
        for key in path:
            node = node[key]
        node[last] = value
    return scenario_from_dict(data)


@pytest.fixture
def beauty_pair() -> AgentPair:
    return make_pair()
