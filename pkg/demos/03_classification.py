"""The strict decision hierarchy behind ad classification.

1. platform overlay ("Sponsored"/"Ad")            -> formal ad
2. creator disclosure ("Paid partnership"/...)    -> disclosed ad
3. any commercial indicator without an overlay    -> undisclosed ad
4. otherwise                                      -> not an ad

Topics come from a keyword scan over description, hashtags, transcript,
and frame texts. On the simulator's output the rule classifier is exact,
which is what makes ground-truth recovery tests meaningful.

Run: python3 demos/03_classification.py
"""

from adaudit.classify import ClassifierInputView, RuleClassifier, classify_dataset
from adaudit.model import OverlayLabel, VideoRecord
from adaudit.orchestrator import run_audit
from adaudit.scenario import default_scenario_dict, scenario_from_dict

rule = RuleClassifier()
_counter = iter(range(10_000))


def make_demo_video(description="a quiet afternoon", hashtags=(), overlay_label=OverlayLabel.NONE):
    return VideoRecord(
        video_id=f"demo{next(_counter):03d}",
        author="@creator01",
        description=description,
        hashtags=tuple(hashtags),
        transcript=None,
        duration_s=30.0,
        overlay_label=overlay_label,
        commercial_indicators=(),
        frames=("opening shot", "mid shot", "closing shot"),
    )


def show(title: str, **kwargs):
    video = make_demo_video(**kwargs)
    res = rule.classify(ClassifierInputView.from_video(video))
    topic = res.ad_topic.value if res.ad_topic else "-"
    print(f"{title:<46} -> {res.ad_type.value:<11} topic={topic:<8} | {res.reasoning}")


print("=== hierarchy walkthrough ===")
show("sponsored overlay, even with #ad in the tags",
     overlay_label=OverlayLabel.SPONSORED, hashtags=("#ad", "#makeup"))
show("paid partnership overlay",
     overlay_label=OverlayLabel.PAID_PARTNERSHIP, description="my gym essentials")
show("no overlay, but a discount code",
     description="leg day at the gym. use code FIT30 at checkout")
show("no overlay, a promo hashtag",
     description="new console unboxing", hashtags=("#werbung",))
show("no overlay, nothing commercial",
     description="city timelapse at dusk")

print("\n=== classifying a whole run against ground truth ===")
data = default_scenario_dict(seed=9)
data["session"]["days"] = 1
scenario = scenario_from_dict(data)
run = run_audit(scenario)
records = [r for rows in run.exposures_by_user().values() for r in rows]
results = classify_dataset(records, rule)

type_hits = topic_hits = ads = 0
for rec in records:
    truth = rec.video.truth
    res = results[rec.video.video_id]
    type_hits += res.ad_type is truth.true_ad_type
    if truth.true_ad_type.value != "non_ad":
        ads += 1
        topic_hits += res.ad_topic is truth.true_topic
print(f"{len(records)} exposures classified")
print(f"ad-type accuracy vs ground truth:  {type_hits / len(records):.1%}")
print(f"ad-topic accuracy among {ads} ads:  {topic_hits / ads:.1%}")
print("\n(the noise wrapper in demos/06 degrades these on purpose, to rehearse manual validation)")
