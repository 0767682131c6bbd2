"""The paired sock-puppet protocol: seeding, daily sessions, full runs.

Each pair holds a minor and an adult agent that differ only in age. A run
is: one seeding phase per agent (engage with interest-matching content
until 25 hits or 51 candidates), then N daily sessions in which both
agents advance in lockstep rounds under a simulated time budget. Every
served item is logged whether watched or skipped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

from .errors import PairDesync
from .model import (
    AgentPair,
    ENGAGED_FULL,
    ExposureRecord,
    SKIPPED,
    Topic,
    UserProfile,
    VideoRecord,
    validate_pair,
)
from .scenario import Scenario, SeedingConfig, SessionConfig, scenario_hash
from .sim import PlatformSim
from .util import derived_rng


@dataclass(frozen=True)
class PredictorVerdict:
    topic: Topic
    matches_interest: bool


class InteractionPredictor(Protocol):
    """Decides, from video metadata, whether an agent engages.

    Implementations over the wire must serialize the observable view only;
    the shipped default is a truth oracle with a configurable error rate.
    """

    def predict(self, video: VideoRecord, interest: Topic) -> PredictorVerdict: ...


class TruthOraclePredictor:
    """Default predictor: reads simulator ground truth and flips the match
    verdict with a seeded per-video error probability.

    The flip draw depends only on (seed, video_id), never on call order.
    """

    def __init__(self, seed: int, error_rate: float = 0.0):
        if not 0.0 <= error_rate <= 1.0:
            raise ValueError(f"error_rate must be in [0, 1], got {error_rate}")
        self.seed = seed
        self.error_rate = error_rate

    def predict(self, video: VideoRecord, interest: Topic) -> PredictorVerdict:
        if video.truth is None:
            raise ValueError(f"video {video.video_id} carries no ground truth")
        true_topic = video.truth.true_topic
        matches = true_topic == interest
        if self.error_rate > 0.0:
            rng = derived_rng(self.seed, "predict", video.video_id)
            if rng.random() < self.error_rate:
                matches = not matches
        if matches:
            return PredictorVerdict(topic=interest, matches_interest=True)
        wrong = true_topic if true_topic != interest else Topic.OTHER
        return PredictorVerdict(topic=wrong, matches_interest=False)


class FeedService(Protocol):
    """The platform surface the agents drive (in-process or over HTTP)."""

    def open_session(self, profile: UserProfile) -> int: ...

    def next_feed_item(self, user_id: str) -> VideoRecord: ...

    def record_engagement(self, user_id: str, video_id: str, engagement) -> None: ...

    def close_session(self, user_id: str) -> list[ExposureRecord]: ...


@dataclass(frozen=True)
class SeedingReport:
    evaluated: int
    engaged: int


def run_seeding(
    agent: UserProfile,
    cfg: SeedingConfig,
    service: FeedService,
    predictor: InteractionPredictor,
) -> SeedingReport:
    """Teach the platform the agent's interest before measurement begins.

    Candidates are evaluated one at a time; a topic match triggers the
    strong-interest routine (full watch + like + bookmark). Stops as soon
    as relevant_target videos were engaged or candidate_cap candidates
    were evaluated. Requires an open session.
    """
    evaluated = 0
    engaged = 0
    while engaged < cfg.relevant_target and evaluated < cfg.candidate_cap:
        video = service.next_feed_item(agent.user_id)
        verdict = predictor.predict(video, agent.interest)
        evaluated += 1
        if verdict.matches_interest:
            service.record_engagement(agent.user_id, video.video_id, ENGAGED_FULL)
            engaged += 1
        else:
            service.record_engagement(agent.user_id, video.video_id, SKIPPED)
    return SeedingReport(evaluated=evaluated, engaged=engaged)


@dataclass
class _AgentCursor:
    profile: UserProfile
    elapsed: float = 0.0
    items: int = 0

    def active(self, budget_s: float) -> bool:
        return self.elapsed < budget_s


def run_session(
    pair: AgentPair,
    cfg: SessionConfig,
    day: int,
    service: FeedService,
    predictor: InteractionPredictor,
) -> tuple[list[ExposureRecord], list[ExposureRecord]]:
    """One contemporaneous daily session for a pair.

    The agents advance in lockstep rounds: neither starts item k+1 before
    both finished item k (while both are still inside their budget). A
    topic match costs the full video duration and triggers the engagement
    routine; anything else costs skip_cost_s. An agent stops requesting
    once its elapsed time reaches the budget; the boundary item is still
    watched in full and logged.
    """
    if not 1 <= day <= cfg.days:
        raise ValueError(f"day {day} outside [1, {cfg.days}]")
    service.open_session(pair.minor)
    service.open_session(pair.adult)
    minor = _AgentCursor(pair.minor)
    adult = _AgentCursor(pair.adult)

    while minor.active(cfg.budget_s) or adult.active(cfg.budget_s):
        both_active = minor.active(cfg.budget_s) and adult.active(cfg.budget_s)
        for cursor in (minor, adult):
            if not cursor.active(cfg.budget_s):
                continue
            video = service.next_feed_item(cursor.profile.user_id)
            verdict = predictor.predict(video, cursor.profile.interest)
            if verdict.matches_interest:
                service.record_engagement(cursor.profile.user_id, video.video_id, ENGAGED_FULL)
                cursor.elapsed += video.duration_s
            else:
                service.record_engagement(cursor.profile.user_id, video.video_id, SKIPPED)
                cursor.elapsed += cfg.skip_cost_s
            cursor.items += 1
        if both_active and minor.items != adult.items:
            raise PairDesync(
                f"pair {pair.pair_id} day {day}: {minor.items} vs {adult.items} items"
            )

    return service.close_session(pair.minor.user_id), service.close_session(pair.adult.user_id)


@dataclass
class AuditRun:
    """In-memory result of a full audit: logs plus the manifest skeleton."""

    scenario: Scenario
    seeding_logs: dict[str, list[ExposureRecord]]
    session_logs: dict[tuple[str, int], list[ExposureRecord]]
    seeding_reports: dict[str, SeedingReport]

    def exposures_by_user(self) -> dict[str, list[ExposureRecord]]:
        """Main-phase exposures per user (seeding excluded), in day order."""
        out: dict[str, list[ExposureRecord]] = {u.user_id: [] for u in self.scenario.users()}
        for (user_id, _day), rows in sorted(self.session_logs.items()):
            out[user_id].extend(rows)
        return out

    def totals(self) -> dict[str, dict[str, int]]:
        per_user: dict[str, dict[str, int]] = {}
        for user in self.scenario.users():
            uid = user.user_id
            per_user[uid] = {
                "seeding": len(self.seeding_logs.get(uid, [])),
                "sessions": sum(
                    len(rows) for (u, _d), rows in self.session_logs.items() if u == uid
                ),
            }
        return per_user

    def manifest(self) -> dict:
        sc_hash = scenario_hash(self.scenario)
        return {
            "run_id": f"run-{sc_hash[:12]}",
            "seed": self.scenario.seed,
            "scenario_hash": sc_hash,
            "totals": self.totals(),
            "seeding_reports": {
                uid: {"evaluated": rep.evaluated, "engaged": rep.engaged}
                for uid, rep in sorted(self.seeding_reports.items())
            },
        }


def run_audit(
    scenario: Scenario,
    service: FeedService | None = None,
    predictor: InteractionPredictor | None = None,
) -> AuditRun:
    """Execute the full protocol: per-pair seeding, then N daily sessions.

    Deterministic: rerunning with an identical scenario yields identical
    logs, item for item.
    """
    for pair in scenario.pairs:
        validate_pair(pair)
    if service is None:
        service = PlatformSim(
            scenario.policy, seed=scenario.seed, skip_cost_s=scenario.session.skip_cost_s
        )
    if predictor is None:
        predictor = TruthOraclePredictor(
            seed=scenario.seed, error_rate=scenario.seeding.predictor_error_rate
        )

    seeding_logs: dict[str, list[ExposureRecord]] = {}
    seeding_reports: dict[str, SeedingReport] = {}
    for pair in scenario.pairs:
        for agent in (pair.minor, pair.adult):
            service.open_session(agent)
            seeding_reports[agent.user_id] = run_seeding(
                agent, scenario.seeding, service, predictor
            )
            seeding_logs[agent.user_id] = service.close_session(agent.user_id)

    session_logs: dict[tuple[str, int], list[ExposureRecord]] = {}
    for day in range(1, scenario.session.days + 1):
        for pair in scenario.pairs:
            minor_rows, adult_rows = run_session(
                pair, scenario.session, day, service, predictor
            )
            session_logs[(pair.minor.user_id, day)] = minor_rows
            session_logs[(pair.adult.user_id, day)] = adult_rows

    return AuditRun(
        scenario=scenario,
        seeding_logs=seeding_logs,
        session_logs=session_logs,
        seeding_reports=seeding_reports,
    )
