"""The two HTTP surfaces, exercised in-process.

Feed API (what agents drive):
    POST /session/open    GET /feed/next?user=&truth=
    POST /engage          POST /session/close

Review API (what the annotation UI consumes):
    GET  /api/videos?ad_type=&ad_topic=&user=&page=
    GET  /api/videos/{id}
    POST /api/annotations     GET /api/annotations/export?annotator=
    GET  /api/metrics/summary

Run: python3 demos/07_service_api.py
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from adaudit.cli import main as cli_main
from adaudit.scenario import default_scenario, save_scenario
from adaudit.service import create_feed_app, create_review_app
from adaudit.sim import PlatformSim
from click.testing import CliRunner

scenario = default_scenario(seed=99)

print("=== feed API ===")
sim = PlatformSim(scenario.policy, seed=99)
feed = TestClient(create_feed_app(sim))
profile = scenario.pairs[0].minor
resp = feed.post("/session/open", json={
    "user_id": profile.user_id, "age": profile.age.age_years,
    "gender": profile.gender.value, "interest": profile.interest.value,
    "locale": profile.locale,
})
print("open ->", resp.json())
video = feed.get("/feed/next", params={"user": profile.user_id}).json()
print("next ->", video["video_id"], "| truth stripped:", "truth" not in video)
with_truth = feed.get("/feed/next", params={"user": profile.user_id, "truth": 1}).json()
print("next?truth=1 ->", with_truth["video_id"], "is", with_truth["truth"]["true_ad_type"])
feed.post("/engage", json={"user": profile.user_id, "video_id": video["video_id"],
                           "engagement": {"watched_full": True, "liked": True,
                                          "bookmarked": True, "skipped": False}})
closed = feed.post("/session/close", json={"user": profile.user_id}).json()
print("close ->", len(closed["records"]), "exposure records")

print("\n=== review API over a real run ===")
workdir = Path(tempfile.mkdtemp(prefix="adaudit_demo_"))
scenario_path = workdir / "scenario.json"
sc = default_scenario(seed=99)
save_scenario(sc, scenario_path)
runner = CliRunner()
run_dir = workdir / "run"
for args in (["run", "-s", str(scenario_path), "-o", str(run_dir)],
             ["classify", str(run_dir)], ["report", str(run_dir)]):
    result = runner.invoke(cli_main, args)
    assert result.exit_code == 0, result.output
    print(f"$ audit {' '.join(args[:1])} ... ok")

review = TestClient(create_review_app(run_dir))
listing = review.get("/api/videos", params={"ad_type": "undisclosed", "page_size": 3}).json()
print(f"GET /api/videos?ad_type=undisclosed -> {listing['total']} total, showing {len(listing['items'])}")
vid = listing["items"][0]["video_id"]
detail = review.get(f"/api/videos/{vid}").json()
print(f"GET /api/videos/{vid} -> predicted {detail['classification']['ad_type']},"
      f" reasoning: {detail['classification']['reasoning']!r}")
review.post("/api/annotations", json={"annotator_id": "demo", "video_id": vid,
                                      "ad_type": "undisclosed", "ad_topic": "beauty"})
export = review.get("/api/annotations/export", params={"annotator": "demo"}).text
print("export ->", export.strip())
summary = review.get("/api/metrics/summary").json()
print("metrics summary keys:", sorted(summary))
print(f"\n(the browser UI consumes exactly these endpoints: audit serve {run_dir} --ui frontend)")
