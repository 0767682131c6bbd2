"""Deterministic, seedable simulated short-video platform.

The simulator serves per-user feeds whose ad mix, disclosure labels, topic
targeting, and video durations follow an injectable profiling policy --
the ground truth the audit later tries to recover.

Determinism contract: every video is a pure function of
(scenario seed, user_id, served_count). Per-user streams are derived by
hashing, and draws are indexed by the per-user serve counter, so
concurrent interleaving across users can never perturb any single user's
feed.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field, replace

import numpy as np

from . import content
from .errors import (
    ConfigError,
    InvariantViolation,
    SessionClosed,
    UnknownUser,
    UnknownVideoForUser,
)
from .model import (
    AdType,
    AgeBand,
    Engagement,
    ExposureRecord,
    SKIPPED,
    Topic,
    UserProfile,
    VideoRecord,
)
from .util import derived_rng

_PROB_TOL = 1e-9


@dataclass(frozen=True)
class DurationSpec:
    mean_s: float
    sd_s: float


@dataclass(frozen=True)
class ProfilingPolicy:
    """Ground-truth generative knobs for the simulated platform.

    theta[ad_type][band] is the probability that a served video's topic is
    forced to the viewer's interest (the profiling strength being
    audited). ad_mix draws the commercial category of each feed item.
    disclosure_honesty splits creator-commercial items into properly
    labelled (Disclosed) versus unlabelled (Undisclosed) ground truth.
    """

    theta: dict[AdType, dict[AgeBand, float]]
    ad_mix: dict[AdType, float]
    background_topic_dist: dict[Topic, float]
    disclosure_honesty: float
    duration_dist: dict[AgeBand, DurationSpec]

    def __post_init__(self) -> None:
        theta = {t: {b: 0.0 for b in AgeBand} for t in AdType}
        for ad_type, by_band in self.theta.items():
            for band, p in by_band.items():
                _check_prob(p, f"theta[{ad_type.value}][{band.value}]")
                theta[ad_type][band] = float(p)
        object.__setattr__(self, "theta", theta)

        mix = {t: 0.0 for t in AdType}
        for ad_type, p in self.ad_mix.items():
            _check_prob(p, f"ad_mix[{ad_type.value}]")
            mix[ad_type] = float(p)
        if abs(sum(mix.values()) - 1.0) > _PROB_TOL:
            raise ConfigError(f"probabilities sum to {sum(mix.values())}, expected 1", "ad_mix")
        object.__setattr__(self, "ad_mix", mix)

        bg = {t: 0.0 for t in Topic}
        for topic, p in self.background_topic_dist.items():
            _check_prob(p, f"background_topic_dist[{topic.value}]")
            bg[topic] = float(p)
        if abs(sum(bg.values()) - 1.0) > _PROB_TOL:
            raise ConfigError(
                f"probabilities sum to {sum(bg.values())}, expected 1", "background_topic_dist"
            )
        object.__setattr__(self, "background_topic_dist", bg)

        _check_prob(self.disclosure_honesty, "disclosure_honesty")
        if set(self.duration_dist) != set(AgeBand):
            raise ConfigError("must cover both age bands", "duration_dist")
        for band, spec in self.duration_dist.items():
            if spec.mean_s <= 0 or spec.sd_s < 0:
                raise ConfigError(
                    f"mean_s must be > 0 and sd_s >= 0, got {spec}", f"duration_dist[{band.value}]"
                )


def _check_prob(p: float, path: str) -> None:
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"probability {p} outside [0, 1]", path)


def _categorical(rng: np.random.Generator, dist: dict, order: list) -> object:
    u = rng.random()
    acc = 0.0
    for key in order:
        acc += dist.get(key, 0.0)
        if u < acc:
            return key
    return order[-1]


def _truncated_duration(rng: np.random.Generator, spec: DurationSpec) -> float:
    # Truncated normal, minimum 1 second.
    if spec.sd_s == 0.0:
        return round(max(spec.mean_s, 1.0), 3)
    for _ in range(1000):
        draw = rng.normal(spec.mean_s, spec.sd_s)
        if draw >= 1.0:
            return round(float(draw), 3)
    return 1.0


def generate_video(
    profile: UserProfile,
    policy: ProfilingPolicy,
    rng: np.random.Generator,
    video_id: str,
) -> VideoRecord:
    """Draw one feed item for the profile under the policy.

    The commercial category comes from ad_mix; creator-commercial items
    are re-labelled by the honesty draw (honest -> Disclosed with a
    disclosure overlay, dishonest -> Undisclosed with no overlay but at
    least one visible indicator). The topic is forced to the viewer's
    interest with probability theta[type][band], otherwise drawn from the
    background distribution.
    """
    raw_type = _categorical(rng, policy.ad_mix, list(AdType))
    if raw_type in (AdType.DISCLOSED, AdType.UNDISCLOSED):
        true_type = (
            AdType.DISCLOSED
            if rng.random() < policy.disclosure_honesty
            else AdType.UNDISCLOSED
        )
    else:
        true_type = raw_type

    if rng.random() < policy.theta[true_type][profile.band]:
        topic = profile.interest
    else:
        topic = _categorical(rng, policy.background_topic_dist, list(Topic))

    overlay = content.overlay_for(rng, true_type)
    indicators = content.pick_indicator_kinds(rng, true_type)
    duration = _truncated_duration(rng, policy.duration_dist[profile.band])
    return content.render_video(
        video_id=video_id,
        rng=rng,
        true_ad_type=true_type,
        true_topic=topic,
        overlay_label=overlay,
        indicators=indicators,
        duration_s=duration,
    )


@dataclass
class SessionState:
    """Per-user mutable state; all counters monotone over a user's lifetime."""

    profile: UserProfile
    session_index: int = 0
    served_count: int = 0
    elapsed_sim_s: float = 0.0
    open: bool = False
    position: int = 0
    session_rows: list[ExposureRecord] = field(default_factory=list)
    row_index: dict[str, int] = field(default_factory=dict)
    charged: dict[str, float] = field(default_factory=dict)


class PlatformSim:
    """The feed service: sessions, items, engagement, capture-all logging.

    Every served item immediately becomes an exposure row (engagement
    defaults to skipped); record_engagement replaces the row's engagement
    and re-charges the session clock, so replaying an engagement sequence
    is idempotent.
    """

    def __init__(self, policy: ProfilingPolicy, seed: int, skip_cost_s: float = 3.0):
        self.policy = policy
        self.seed = int(seed)
        self.skip_cost_s = float(skip_cost_s)
        self._users: dict[str, SessionState] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock(self, user_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(user_id, threading.Lock())

    def _state(self, user_id: str) -> SessionState:
        state = self._users.get(user_id)
        if state is None:
            raise UnknownUser(f"no session was ever opened for {user_id!r}")
        return state

    def open_session(self, profile: UserProfile) -> int:
        """Open a session for the profile; returns the new session index."""
        with self._lock(profile.user_id):
            state = self._users.get(profile.user_id)
            if state is None:
                state = SessionState(profile=profile)
                self._users[profile.user_id] = state
            elif state.profile != profile:
                raise InvariantViolation(
                    f"user {profile.user_id!r} reopened with a different profile"
                )
            if state.open:
                raise InvariantViolation(f"session already open for {profile.user_id!r}")
            state.open = True
            state.session_index += 1
            state.position = 0
            state.session_rows = []
            state.row_index = {}
            state.charged = {}
            return state.session_index

    def next_feed_item(self, user_id: str) -> VideoRecord:
        with self._lock(user_id):
            state = self._state(user_id)
            if not state.open:
                raise SessionClosed(f"no open session for {user_id!r}")
            video_id = f"{user_id}-v{state.served_count:05d}"
            rng = derived_rng(self.seed, "video", user_id, state.served_count)
            video = generate_video(state.profile, self.policy, rng, video_id)
            state.served_count += 1
            state.position += 1
            row = ExposureRecord(
                user_id=user_id,
                session_index=state.session_index,
                position=state.position,
                video=video,
                engaged=SKIPPED,
                sim_time_s=round(state.elapsed_sim_s, 3),
            )
            state.row_index[video_id] = len(state.session_rows)
            state.session_rows.append(row)
            return video

    def record_engagement(self, user_id: str, video_id: str, engagement: Engagement) -> None:
        with self._lock(user_id):
            state = self._state(user_id)
            if not state.open:
                raise SessionClosed(f"no open session for {user_id!r}")
            idx = state.row_index.get(video_id)
            if idx is None:
                raise UnknownVideoForUser(
                    f"video {video_id!r} was not served to {user_id!r} in the open session"
                )
            row = state.session_rows[idx]
            charge = row.video.duration_s if engagement.watched_full else self.skip_cost_s
            state.elapsed_sim_s += charge - state.charged.get(video_id, 0.0)
            state.charged[video_id] = charge
            state.session_rows[idx] = replace(row, engaged=engagement)

    def session_elapsed(self, user_id: str) -> float:
        """Engagement-charged simulated seconds in the user's open session."""
        state = self._state(user_id)
        return sum(state.charged.values())

    def close_session(self, user_id: str) -> list[ExposureRecord]:
        with self._lock(user_id):
            state = self._state(user_id)
            if not state.open:
                raise SessionClosed(f"no open session for {user_id!r}")
            state.open = False
            rows = list(state.session_rows)
            state.session_rows = []
            state.row_index = {}
            return rows

    def profile_of(self, user_id: str) -> UserProfile:
        return self._state(user_id).profile
