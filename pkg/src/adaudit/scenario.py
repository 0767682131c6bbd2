"""Scenario configuration: the single JSON file that fixes a whole run.

A scenario pins the master seed, the paired agents, the platform's
profiling policy, and the session/seeding parameters. Loading is strict:
any malformed field raises ConfigError with the offending path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .model import (
    AdType,
    AgeBand,
    AgentPair,
    AgeGroup,
    Gender,
    Topic,
    UserProfile,
    canonical_json,
    sha256_text,
    validate_pair,
)
from .sim import DurationSpec, ProfilingPolicy


@dataclass(frozen=True)
class SessionConfig:
    budget_s: float = 3600.0
    days: int = 10
    skip_cost_s: float = 3.0

    def __post_init__(self) -> None:
        if not self.budget_s >= 0:
            raise ConfigError("budget_s must be >= 0", "session.budget_s")
        if self.days < 1:
            raise ConfigError("days must be >= 1", "session.days")
        if self.skip_cost_s < 0:
            raise ConfigError("skip_cost_s must be >= 0", "session.skip_cost_s")


@dataclass(frozen=True)
class SeedingConfig:
    queries: dict[str, list[str]] = field(default_factory=dict)
    relevant_target: int = 25
    candidate_cap: int = 51
    predictor_error_rate: float = 0.0

    def __post_init__(self) -> None:
        if self.relevant_target > self.candidate_cap:
            raise ConfigError(
                "relevant_target must not exceed candidate_cap", "seeding.relevant_target"
            )
        if not 0.0 <= self.predictor_error_rate <= 1.0:
            raise ConfigError(
                "predictor_error_rate must be in [0, 1]", "seeding.predictor_error_rate"
            )


@dataclass(frozen=True)
class Scenario:
    seed: int
    pairs: tuple[AgentPair, ...]
    policy: ProfilingPolicy
    session: SessionConfig
    seeding: SeedingConfig

    def users(self) -> list[UserProfile]:
        out = []
        for pair in self.pairs:
            out.extend([pair.minor, pair.adult])
        return out


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "seed": scenario.seed,
        "pairs": [
            {
                "pair_id": p.pair_id,
                "gender": p.minor.gender.value,
                "interest": p.minor.interest.value,
                "locale": p.minor.locale,
                "minor": {"user_id": p.minor.user_id, "age": p.minor.age.age_years},
                "adult": {"user_id": p.adult.user_id, "age": p.adult.age.age_years},
            }
            for p in scenario.pairs
        ],
        "policy": {
            "theta": {
                t.value: {b.value: scenario.policy.theta[t][b] for b in AgeBand} for t in AdType
            },
            "ad_mix": {t.value: scenario.policy.ad_mix[t] for t in AdType},
            "background_topic_dist": {
                t.value: scenario.policy.background_topic_dist[t] for t in Topic
            },
            "disclosure_honesty": scenario.policy.disclosure_honesty,
            "duration_dist": {
                b.value: {
                    "mean_s": scenario.policy.duration_dist[b].mean_s,
                    "sd_s": scenario.policy.duration_dist[b].sd_s,
                }
                for b in AgeBand
            },
        },
        "session": {
            "budget_s": scenario.session.budget_s,
            "days": scenario.session.days,
            "skip_cost_s": scenario.session.skip_cost_s,
        },
        "seeding": {
            "queries": scenario.seeding.queries,
            "relevant_target": scenario.seeding.relevant_target,
            "candidate_cap": scenario.seeding.candidate_cap,
            "predictor_error_rate": scenario.seeding.predictor_error_rate,
        },
    }


def scenario_hash(scenario: Scenario) -> str:
    return sha256_text(canonical_json(scenario_to_dict(scenario)))


def _require(d: dict, key: str, path: str):
    if key not in d:
        raise ConfigError("missing required field", f"{path}.{key}" if path else key)
    return d[key]


def _parse_enum(enum_cls, raw, path: str):
    try:
        return enum_cls(raw)
    except ValueError:
        valid = ", ".join(e.value for e in enum_cls)
        raise ConfigError(f"got {raw!r}, expected one of: {valid}", path) from None


def scenario_from_dict(data: dict) -> Scenario:
    seed = _require(data, "seed", "")
    if not isinstance(seed, int):
        raise ConfigError("seed must be an integer", "seed")

    pairs = []
    raw_pairs = _require(data, "pairs", "")
    for i, raw in enumerate(raw_pairs):
        path = f"pairs[{i}]"
        gender = _parse_enum(Gender, _require(raw, "gender", path), f"{path}.gender")
        interest = _parse_enum(Topic, _require(raw, "interest", path), f"{path}.interest")
        locale = _require(raw, "locale", path)

        def _profile(slot: str):
            spec = _require(raw, slot, path)
            try:
                return UserProfile(
                    user_id=_require(spec, "user_id", f"{path}.{slot}"),
                    age=AgeGroup.from_age(int(_require(spec, "age", f"{path}.{slot}"))),
                    gender=gender,
                    interest=interest,
                    locale=locale,
                )
            except ConfigError:
                raise
            except Exception as exc:
                raise ConfigError(str(exc), f"{path}.{slot}") from exc

        pair = AgentPair(
            pair_id=_require(raw, "pair_id", path),
            minor=_profile("minor"),
            adult=_profile("adult"),
        )
        try:
            pairs.append(validate_pair(pair))
        except Exception as exc:
            raise ConfigError(str(exc), path) from exc

    raw_policy = _require(data, "policy", "")
    theta: dict[AdType, dict[AgeBand, float]] = {}
    for t_key, by_band in _require(raw_policy, "theta", "policy").items():
        ad_type = _parse_enum(AdType, t_key, f"policy.theta.{t_key}")
        theta[ad_type] = {
            _parse_enum(AgeBand, b_key, f"policy.theta.{t_key}.{b_key}"): float(v)
            for b_key, v in by_band.items()
        }
    ad_mix = {
        _parse_enum(AdType, k, f"policy.ad_mix.{k}"): float(v)
        for k, v in _require(raw_policy, "ad_mix", "policy").items()
    }
    background = {
        _parse_enum(Topic, k, f"policy.background_topic_dist.{k}"): float(v)
        for k, v in _require(raw_policy, "background_topic_dist", "policy").items()
    }
    raw_durations = _require(raw_policy, "duration_dist", "policy")
    durations = {}
    for b_key, spec in raw_durations.items():
        band = _parse_enum(AgeBand, b_key, f"policy.duration_dist.{b_key}")
        durations[band] = DurationSpec(
            mean_s=float(_require(spec, "mean_s", f"policy.duration_dist.{b_key}")),
            sd_s=float(_require(spec, "sd_s", f"policy.duration_dist.{b_key}")),
        )
    policy = ProfilingPolicy(
        theta=theta,
        ad_mix=ad_mix,
        background_topic_dist=background,
        disclosure_honesty=float(_require(raw_policy, "disclosure_honesty", "policy")),
        duration_dist=durations,
    )

    raw_session = _require(data, "session", "")
    session = SessionConfig(
        budget_s=float(_require(raw_session, "budget_s", "session")),
        days=int(_require(raw_session, "days", "session")),
        skip_cost_s=float(raw_session.get("skip_cost_s", 3.0)),
    )

    raw_seeding = data.get("seeding", {})
    seeding = SeedingConfig(
        queries={str(k): list(v) for k, v in raw_seeding.get("queries", {}).items()},
        relevant_target=int(raw_seeding.get("relevant_target", 25)),
        candidate_cap=int(raw_seeding.get("candidate_cap", 51)),
        predictor_error_rate=float(raw_seeding.get("predictor_error_rate", 0.0)),
    )

    return Scenario(seed=seed, pairs=tuple(pairs), policy=policy, session=session, seeding=seeding)


def load_scenario(path: str | Path) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"scenario file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario file is not valid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError("scenario file must hold a JSON object")
    return scenario_from_dict(data)


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(scenario_to_dict(scenario), indent=2, sort_keys=True))
        fh.write("\n")


# ---------------------------------------------------------------------------
# Shipped scenarios
# ---------------------------------------------------------------------------

DEFAULT_QUERIES = {
    "beauty": ["makeup", "skincare", "cosmetics"],
    "fitness": ["workout", "gym", "nutrition"],
    "gaming": ["gaming", "console", "streamer"],
}


def default_pairs() -> list[dict]:
    return [
        {
            "pair_id": "beauty",
            "gender": "female",
            "interest": "beauty",
            "locale": "DE",
            "minor": {"user_id": "beauty_minor", "age": 16},
            "adult": {"user_id": "beauty_adult", "age": 21},
        },
        {
            "pair_id": "fitness",
            "gender": "male",
            "interest": "fitness",
            "locale": "DE",
            "minor": {"user_id": "fitness_minor", "age": 17},
            "adult": {"user_id": "fitness_adult", "age": 20},
        },
        {
            "pair_id": "gaming",
            "gender": "female",
            "interest": "gaming",
            "locale": "DE",
            "minor": {"user_id": "gaming_minor", "age": 16},
            "adult": {"user_id": "gaming_adult", "age": 21},
        },
    ]


def default_scenario_dict(seed: int = 20251201) -> dict:
    """Three pairs, ten daily one-hour sessions.

    Calibrated so minors see fewer items overall (longer videos) while
    their creator-commercial content is almost always steered onto their
    interest, and formal ads are never steered for minors.
    """
    return {
        "seed": seed,
        "pairs": default_pairs(),
        "policy": {
            "theta": {
                "formal": {"minor": 0.0, "adult": 0.15},
                "disclosed": {"minor": 0.85, "adult": 0.70},
                "undisclosed": {"minor": 0.90, "adult": 0.85},
                "non_ad": {"minor": 0.50, "adult": 0.50},
            },
            "ad_mix": {"formal": 0.06, "disclosed": 0.013, "undisclosed": 0.117, "non_ad": 0.81},
            "background_topic_dist": {
                "beauty": 0.05,
                "fitness": 0.05,
                "gaming": 0.05,
                "politics": 0.0,
                "other": 0.85,
            },
            "disclosure_honesty": 0.10,
            "duration_dist": {
                "minor": {"mean_s": 40.0, "sd_s": 10.0},
                "adult": {"mean_s": 28.0, "sd_s": 7.0},
            },
        },
        "session": {"budget_s": 3600.0, "days": 10, "skip_cost_s": 3.0},
        "seeding": {
            "queries": DEFAULT_QUERIES,
            "relevant_target": 25,
            "candidate_cap": 51,
            "predictor_error_rate": 0.04,
        },
    }


def default_scenario(seed: int = 20251201) -> Scenario:
    return scenario_from_dict(default_scenario_dict(seed))
