"""Tour of the simulated platform: policies, feeds, and ground truth.

The simulator serves per-user video feeds whose commercial mix, disclosure
labels, topic targeting, and durations follow a profiling policy you
inject. Because that policy IS the ground truth, any audit pipeline run
on top of it can be checked against known answers.

Run: python3 demos/01_platform_simulation.py
"""

from collections import Counter

from adaudit.model import AdType, ENGAGED_FULL, SKIPPED, AgeBand
from adaudit.scenario import default_scenario
from adaudit.sim import PlatformSim, generate_video
from adaudit.util import derived_rng

scenario = default_scenario(seed=42)
policy = scenario.policy
minor = scenario.pairs[0].minor
adult = scenario.pairs[0].adult

print("=== the profiling policy under audit ===")
print(f"ad mix: {{ {', '.join(f'{t.value}: {p:.3f}' for t, p in policy.ad_mix.items())} }}")
print(f"disclosure honesty: {policy.disclosure_honesty:.2f}")
for t in (AdType.FORMAL, AdType.DISCLOSED, AdType.UNDISCLOSED):
    by_band = policy.theta[t]
    print(f"theta[{t.value}]: minor={by_band[AgeBand.MINOR]:.2f} adult={by_band[AgeBand.ADULT]:.2f}")

print("\n=== a few feed items for the beauty-minor agent ===")
sim = PlatformSim(policy, seed=42, skip_cost_s=scenario.session.skip_cost_s)
sim.open_session(minor)
for i in range(5):
    video = sim.next_feed_item(minor.user_id)
    truth = video.truth
    print(f"[{video.video_id}] {truth.true_ad_type.value:<11} topic={truth.true_topic.value:<8}"
          f" overlay={video.overlay_label.value:<19} dur={video.duration_s:5.1f}s")
    print(f"    '{video.description}'  tags={list(video.hashtags)}")
    sim.record_engagement(minor.user_id, video.video_id, ENGAGED_FULL if i % 2 == 0 else SKIPPED)
rows = sim.close_session(minor.user_id)
print(f"session closed; {len(rows)} exposure rows captured (watched and skipped alike)")

print("\n=== ground-truth frequencies converge to the policy ===")
rng = derived_rng(42, "demo-draws")
n = 4000
counts: Counter = Counter()
durations = {AgeBand.MINOR: [], AgeBand.ADULT: []}
for i in range(n):
    v = generate_video(minor, policy, rng, f"m{i}")
    counts[v.truth.true_ad_type] += 1
    durations[AgeBand.MINOR].append(v.duration_s)
    durations[AgeBand.ADULT].append(
        generate_video(adult, policy, rng, f"a{i}").duration_s
    )
for ad_type, share in policy.ad_mix.items():
    print(f"{ad_type.value:<11} target {share:.3f}  observed {counts[ad_type] / n:.3f}")
for band, xs in durations.items():
    target = policy.duration_dist[band].mean_s
    print(f"mean duration {band.value}: target {target:.0f}s observed {sum(xs)/len(xs):.1f}s")
print("\nshorter adult videos are the mechanism behind adults seeing more items per hour.")
