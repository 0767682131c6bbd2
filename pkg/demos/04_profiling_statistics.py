"""The statistics that turn exposure logs into a profiling verdict.

personalization rate  share of a user's ads matching their own interest
baseline rate         share of that interest's ads among same-age users
                      who hold a DIFFERENT interest (the no-profiling
                      expectation, pooled over raw counts)
profiling effect      personalization - baseline, in percentage points,
                      tested with a pooled two-proportion z-test

Run: python3 demos/04_profiling_statistics.py
"""

from adaudit.classify import RuleClassifier, classify_dataset
from adaudit.model import AdType, AgeBand, CREATOR_AD_TYPES
from adaudit.orchestrator import run_audit
from adaudit.scenario import default_scenario
from adaudit.stats import (
    AuditFrame,
    disclosure_rate,
    topic_matrix,
    two_proportion_z,
    user_profiling,
)

print("building a full default run (3 pairs x 10 sessions)...")
scenario = default_scenario(seed=202)
run = run_audit(scenario)
exposures = run.exposures_by_user()
classifications = classify_dataset(
    [r for rows in exposures.values() for r in rows], RuleClassifier()
)
frame = AuditFrame(
    users={u.user_id: u for u in scenario.users()},
    exposures=exposures,
    classifications=classifications,
)

for set_name, ad_types in (("formal ads", [AdType.FORMAL]),
                           ("creator ads (disclosed + undisclosed)", CREATOR_AD_TYPES)):
    print(f"\n=== profiling effect, {set_name} ===")
    print(f"{'user':<14} {'personalization':<22} {'baseline':<20} {'delta':>9}  sig")
    for user in frame.ordered_users():
        res = user_profiling(frame, user.user_id, ad_types)
        print(f"{user.user_id:<14} {res.personalization.display():<22}"
              f" {res.baseline.display():<20} {res.delta_pp:+8.2f}pp  {res.stars.value}")

print("\nminor formal ads carry no profiling (theta is zero there by policy);")
print("minor creator ads are profiled hard - exactly the injected ground truth.")

print("\n=== topic concentration (diagonal dominance), minors ===")
for name, ad_types in (("formal", [AdType.FORMAL]), ("creator", CREATOR_AD_TYPES)):
    m = topic_matrix(frame, AgeBand.MINOR, ad_types)
    d = m.diagonal_share
    print(f"{name:<8} diagonal {d.display()}")

print("\n=== disclosure rates (how much creator-commercial content is labelled) ===")
for user in frame.ordered_users():
    print(f"{user.user_id:<14} {disclosure_rate(frame, user.user_id).display()}")

print("\n=== the z-test itself ===")
res = two_proportion_z(3, 7, 2, 21)
print(f"two_proportion_z(3,7, 2,21): z={res.z:.3f} p={res.p_value:.4f} stars='{res.stars.value}'")
res = two_proportion_z(58, 301, 19, 214)
print(f"two_proportion_z(58,301, 19,214): z={res.z:.3f} p={res.p_value:.5f} stars='{res.stars.value}'")
