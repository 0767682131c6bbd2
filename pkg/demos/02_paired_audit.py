"""The paired sock-puppet protocol, end to end in memory.

Each pair holds a minor and an adult identical in gender, interest, and
locale, so differences in what they are served isolate age. Agents first
seed their interest profile (engage until 25 relevant videos or 51
candidates), then run daily lockstep sessions under a simulated time
budget. Every served item is logged, watched or skipped.

Run: python3 demos/02_paired_audit.py
"""

import json

from adaudit.orchestrator import run_audit
from adaudit.scenario import default_scenario_dict, scenario_from_dict

data = default_scenario_dict(seed=7)
data["session"]["days"] = 3          # short demo; the shipped default is 10
scenario = scenario_from_dict(data)

print("=== pairs under audit ===")
for pair in scenario.pairs:
    m, a = pair.minor, pair.adult
    print(f"{pair.pair_id:<8} {m.user_id} ({m.age.age_years}, {m.gender.value})"
          f"  vs  {a.user_id} ({a.age.age_years}, {a.gender.value})"
          f"  interest={m.interest.value} locale={m.locale}")

run = run_audit(scenario)

print("\n=== seeding phase (excluded from all statistics) ===")
for uid, report in sorted(run.seeding_reports.items()):
    print(f"{uid:<14} engaged {report.engaged:>2} of {report.evaluated:>2} candidates")

print("\n=== daily sessions ===")
for day in range(1, scenario.session.days + 1):
    parts = []
    for pair in scenario.pairs:
        m = len(run.session_logs[(pair.minor.user_id, day)])
        a = len(run.session_logs[(pair.adult.user_id, day)])
        parts.append(f"{pair.pair_id}: {m:>3}/{a:>3}")
    print(f"day {day}:  " + "   ".join(parts) + "   (minor/adult items)")

print("\nadults consistently see more items: their videos are shorter, the hourly budget is fixed.")

exposures = run.exposures_by_user()
print("\n=== exposure totals (main phase) ===")
for uid, rows in sorted(exposures.items()):
    watched = sum(r.engaged.watched_full for r in rows)
    print(f"{uid:<14} {len(rows):>5} exposures, {watched:>4} watched in full")

print("\n=== manifest (what a rerun must reproduce byte for byte) ===")
manifest = run.manifest()
print(json.dumps({k: manifest[k] for k in ("run_id", "seed", "scenario_hash")}, indent=2))
