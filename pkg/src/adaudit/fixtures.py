"""Materialize per-user count tables as synthetic runs.

Given, for each user, the desired number of records per (ad type, topic)
cell, this builds full exposure logs whose videos the rule classifier
will label back into exactly those cells. That turns any published count
table into an executable oracle for the whole report pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import content
from .model import (
    AdType,
    AgeGroup,
    AgentPair,
    ExposureRecord,
    Gender,
    SKIPPED,
    Topic,
    UserProfile,
    validate_pair,
)
from .orchestrator import AuditRun
from .runio import write_run
from .scenario import (
    Scenario,
    SeedingConfig,
    SessionConfig,
    default_scenario,
)
from .util import derived_rng


@dataclass(frozen=True)
class UserFixture:
    """Target counts for one synthetic user."""

    user_id: str
    gender: Gender
    age: int
    interest: Topic
    total_records: int
    avg_video_length_s: float
    ads: dict[AdType, dict[Topic, int]]
    locale: str = "DE"

    def profile(self) -> UserProfile:
        return UserProfile(
            user_id=self.user_id,
            age=AgeGroup.from_age(self.age),
            gender=self.gender,
            interest=self.interest,
            locale=self.locale,
        )

    def ad_total(self) -> int:
        return sum(sum(by_topic.values()) for by_topic in self.ads.values())


def build_exposures(fixture: UserFixture, seed: int = 0) -> list[ExposureRecord]:
    """One session of exposures realizing the fixture's counts.

    Every video is rendered with the overlay/indicator configuration its
    target cell implies, so classification recovers the table exactly.
    Durations are constant at the fixture's average.
    """
    rng = derived_rng(seed, "fixture", fixture.user_id)
    rows: list[ExposureRecord] = []

    def _emit(ad_type: AdType, topic: Topic) -> None:
        serial = len(rows)
        video_id = f"{fixture.user_id}-fx{serial:05d}"
        overlay = content.overlay_for(rng, ad_type)
        indicators = content.pick_indicator_kinds(rng, ad_type)
        video = content.render_video(
            video_id=video_id,
            rng=rng,
            true_ad_type=ad_type,
            true_topic=topic,
            overlay_label=overlay,
            indicators=indicators,
            duration_s=round(fixture.avg_video_length_s, 3),
        )
        rows.append(
            ExposureRecord(
                user_id=fixture.user_id,
                session_index=1,
                position=serial + 1,
                video=video,
                engaged=SKIPPED,
                sim_time_s=round(serial * 3.0, 3),
            )
        )

    for ad_type in (AdType.FORMAL, AdType.DISCLOSED, AdType.UNDISCLOSED):
        for topic in Topic:
            for _ in range(fixture.ads.get(ad_type, {}).get(topic, 0)):
                _emit(ad_type, topic)
    non_ads = fixture.total_records - fixture.ad_total()
    if non_ads < 0:
        raise ValueError(f"{fixture.user_id}: ad counts exceed total_records")
    for _ in range(non_ads):
        _emit(AdType.NON_AD, Topic.OTHER)
    return rows


def fixture_pairs(fixtures: list[UserFixture]) -> list[AgentPair]:
    """Group fixtures into validated minor/adult pairs by interest."""
    by_interest: dict[Topic, dict[str, UserFixture]] = {}
    for fx in fixtures:
        slot = "minor" if fx.age < 18 else "adult"
        by_interest.setdefault(fx.interest, {})[slot] = fx
    pairs = []
    for interest, slots in by_interest.items():
        if set(slots) != {"minor", "adult"}:
            raise ValueError(f"interest {interest.value}: need one minor and one adult fixture")
        pairs.append(
            validate_pair(
                AgentPair(
                    pair_id=interest.value,
                    minor=slots["minor"].profile(),
                    adult=slots["adult"].profile(),
                )
            )
        )
    return pairs


def fixture_scenario(fixtures: list[UserFixture], seed: int = 0) -> Scenario:
    base = default_scenario(seed)
    return Scenario(
        seed=seed,
        pairs=tuple(fixture_pairs(fixtures)),
        policy=base.policy,
        session=SessionConfig(budget_s=3600.0, days=1, skip_cost_s=3.0),
        seeding=SeedingConfig(),
    )


def materialize_run(fixtures: list[UserFixture], out_dir: str | Path, seed: int = 0) -> dict:
    """Write a complete run directory realizing the fixtures' counts."""
    scenario = fixture_scenario(fixtures, seed)
    session_logs = {
        (fx.user_id, 1): build_exposures(fx, seed) for fx in fixtures
    }
    run = AuditRun(
        scenario=scenario,
        seeding_logs={},
        session_logs=session_logs,
        seeding_reports={},
    )
    return write_run(run, out_dir)
