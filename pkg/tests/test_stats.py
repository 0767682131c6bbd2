from __future__ import annotations

import math

import pytest

from adaudit.errors import (
    EmptyIntersection,
    InvalidCounts,
    JoinFailure,
    NoBaselineUsers,
)
from adaudit.model import (
    AdType,
    AgeBand,
    AnnotationRecord,
    ClassificationResult,
    CREATOR_AD_TYPES,
    Topic,
)
from adaudit.stats import (
    AuditFrame,
    Rate,
    Stars,
    agreement,
    baseline_rate,
    build_validation,
    confusion_matrix,
    disclosure_rate,
    personalization_rate,
    profiling_effect,
    stratified_sample,
    topic_matrix,
    two_proportion_z,
)

from conftest import make_exposure, make_profile, make_video

# Frozen from a high-precision normal-CDF oracle (mpmath erfc, 50 digits).
ZTEST_ORACLE = [
    # (x1, n1, x2, n2, z, p, stars)
    (3, 7, 2, 21, 1.9941944725, 0.0461308059904, Stars.ONE),
    (58, 301, 19, 214, 3.2587563258, 0.0011190173698, Stars.TWO),
    (1, 21, 2, 7, -1.7638342074, 0.0777598964393, Stars.NONE),
    (2, 6, 86, 509, 1.0634511414, 0.287577411008, Stars.NONE),
    (49, 208, 28, 307, 4.5082101913, 6.53767920167e-06, Stars.THREE),
    (136, 148, 5, 89, 13.1019025288, 3.21106259985e-39, Stars.THREE),
    (41, 44, 0, 193, 14.7465484468, 3.23806774692e-49, Stars.THREE),
]


class TestRate:
    def test_value_exact(self):
        r = Rate(136, 148)
        assert r.value == 136 / 148
        assert abs(r.value - r.numerator / r.denominator) < 1e-12
        assert r.defined

    def test_zero_denominator_undefined(self):
        r = Rate(0, 0)
        assert not r.defined
        assert r.value == 0.0
        assert r.display() == "0.00% (0/0)"

    def test_display(self):
        assert Rate(136, 148).display() == "91.89% (136/148)"
        assert Rate(5, 89).display() == "5.62% (5/89)"

    def test_invalid_counts(self):
        with pytest.raises(InvalidCounts):
            Rate(-1, 5)
        with pytest.raises(InvalidCounts):
            Rate(6, 5)


class TestTwoProportionZ:
    @pytest.mark.parametrize("x1,n1,x2,n2,z,p,stars", ZTEST_ORACLE)
    def test_oracle_values(self, x1, n1, x2, n2, z, p, stars):
        res = two_proportion_z(x1, n1, x2, n2)
        assert res.z == pytest.approx(z, abs=1e-6)
        assert res.p_value == pytest.approx(p, rel=1e-6, abs=1e-12)
        assert res.stars is stars

    def test_identical_proportions_are_null(self):
        for k, n in [(0, 5), (3, 9), (9, 9)]:
            res = two_proportion_z(k, n, k, n)
            assert res.z == 0.0 and res.p_value == 1.0 and res.stars is Stars.NONE

    def test_degenerate_pooled_proportions(self):
        assert two_proportion_z(0, 10, 0, 20).p_value == 1.0
        assert two_proportion_z(10, 10, 20, 20).p_value == 1.0

    def test_invalid_inputs(self):
        with pytest.raises(InvalidCounts):
            two_proportion_z(1, 0, 1, 5)
        with pytest.raises(InvalidCounts):
            two_proportion_z(6, 5, 1, 5)
        with pytest.raises(InvalidCounts):
            two_proportion_z(-1, 5, 1, 5)

    def test_scale_free_sanity(self):
        base = two_proportion_z(30, 100, 20, 100)
        doubled = two_proportion_z(60, 200, 40, 200)
        assert doubled.p_value < base.p_value

    def test_symmetry(self):
        a = two_proportion_z(30, 100, 20, 90)
        b = two_proportion_z(20, 90, 30, 100)
        assert a.z == pytest.approx(-b.z)
        assert a.p_value == pytest.approx(b.p_value)


class TestProfilingEffect:
    def test_delta_definition(self):
        res = profiling_effect(Rate(136, 148), Rate(5, 89))
        expected = 100.0 * (136 / 148 - 5 / 89)
        assert res.delta_pp == pytest.approx(expected, abs=1e-9)
        assert res.stars is Stars.THREE

    def test_equal_rates_zero_delta(self):
        res = profiling_effect(Rate(3, 10), Rate(3, 10))
        assert res.delta_pp == pytest.approx(0.0)
        assert res.stars is Stars.NONE

    def test_negative_delta(self):
        res = profiling_effect(Rate(1, 21), Rate(2, 7))
        assert res.delta_pp == pytest.approx(100.0 * (1 / 21 - 2 / 7), abs=1e-9)

    def test_undefined_rate_skips_test(self):
        res = profiling_effect(Rate(0, 0), Rate(1, 28))
        assert res.p_value == 1.0 and res.stars is Stars.NONE
        assert res.delta_pp == pytest.approx(-100.0 / 28)

    def test_antisymmetry(self):
        fwd = profiling_effect(Rate(40, 45), Rate(10, 192))
        rev = profiling_effect(Rate(10, 192), Rate(40, 45))
        assert fwd.delta_pp == pytest.approx(-rev.delta_pp)
        assert abs(fwd.z) == pytest.approx(abs(rev.z))
        assert fwd.p_value == pytest.approx(rev.p_value)


def _result(video_id: str, ad_type: AdType, topic: Topic | None) -> ClassificationResult:
    return ClassificationResult(
        video_id=video_id,
        is_ad=ad_type is not AdType.NON_AD,
        ad_type=ad_type,
        ad_topic=topic,
        indicators_found=(),
        reasoning="t",
    )


def small_frame() -> AuditFrame:
    """Two minors, one adult; hand-countable labels."""
    users = {
        "bm": make_profile("bm", 16, interest=Topic.BEAUTY),
        "gm": make_profile("gm", 17, interest=Topic.GAMING),
        "ba": make_profile("ba", 21, interest=Topic.BEAUTY),
    }
    plan = {
        # user: list of (ad_type, topic-or-None)
        "bm": [
            (AdType.UNDISCLOSED, Topic.BEAUTY),
            (AdType.UNDISCLOSED, Topic.BEAUTY),
            (AdType.UNDISCLOSED, Topic.OTHER),
            (AdType.DISCLOSED, Topic.BEAUTY),
            (AdType.FORMAL, Topic.OTHER),
            (AdType.NON_AD, None),
        ],
        "gm": [
            (AdType.UNDISCLOSED, Topic.GAMING),
            (AdType.UNDISCLOSED, Topic.BEAUTY),
            (AdType.FORMAL, Topic.GAMING),
            (AdType.NON_AD, None),
            (AdType.NON_AD, None),
        ],
        "ba": [
            (AdType.FORMAL, Topic.BEAUTY),
            (AdType.UNDISCLOSED, Topic.OTHER),
        ],
    }
    exposures = {}
    classifications = {}
    for uid, rows in plan.items():
        recs = []
        for i, (ad_type, topic) in enumerate(rows):
            vid = f"{uid}-{i}"
            recs.append(make_exposure(make_video(vid), user_id=uid, position=i + 1))
            classifications[vid] = _result(vid, ad_type, topic)
        exposures[uid] = recs
    return AuditFrame(users=users, exposures=exposures, classifications=classifications)


class TestRatesOnFrame:
    def test_personalization(self):
        frame = small_frame()
        rate = personalization_rate(frame, "bm", CREATOR_AD_TYPES)
        assert (rate.numerator, rate.denominator) == (3, 4)

    def test_personalization_zero_matches_is_defined(self):
        frame = small_frame()
        rate = personalization_rate(frame, "bm", [AdType.FORMAL])
        assert (rate.numerator, rate.denominator) == (0, 1)
        assert rate.defined

    def test_personalization_zero_denominator(self):
        frame = small_frame()
        rate = personalization_rate(frame, "ba", [AdType.DISCLOSED])
        assert not rate.defined

    def test_partition(self):
        frame = small_frame()
        for uid in frame.users:
            for types in ([AdType.FORMAL], CREATOR_AD_TYPES):
                rate = personalization_rate(frame, uid, types)
                assert 0 <= rate.numerator <= rate.denominator

    def test_baseline_pools_other_interest_same_band(self):
        frame = small_frame()
        # bm's baseline pool: gm's creator ads (2 undisclosed); beauty among
        # them = 1.
        rate = baseline_rate(frame, "bm", CREATOR_AD_TYPES)
        assert (rate.numerator, rate.denominator) == (1, 2)

    def test_baseline_excludes_other_band(self):
        frame = small_frame()
        # ba has no same-band other-interest peer
        with pytest.raises(NoBaselineUsers):
            baseline_rate(frame, "ba", CREATOR_AD_TYPES)

    def test_join_failure(self):
        frame = small_frame()
        del frame.classifications["bm-0"]
        with pytest.raises(JoinFailure):
            personalization_rate(frame, "bm", CREATOR_AD_TYPES)

    def test_disclosure_rate(self):
        frame = small_frame()
        rate = disclosure_rate(frame, "bm")
        assert (rate.numerator, rate.denominator) == (1, 4)
        assert not disclosure_rate(frame, "ba").defined or True  # ba: 0 disclosed / 1 creator
        assert (disclosure_rate(frame, "ba").numerator, disclosure_rate(frame, "ba").denominator) == (0, 1)


class TestTopicMatrix:
    def test_counts_and_diagonal(self):
        frame = small_frame()
        m = topic_matrix(frame, AgeBand.MINOR, CREATOR_AD_TYPES)
        assert m.count(Topic.BEAUTY, Topic.BEAUTY) == 3
        assert m.count(Topic.BEAUTY, Topic.OTHER) == 1
        assert m.count(Topic.GAMING, Topic.GAMING) == 1
        assert m.count(Topic.GAMING, Topic.BEAUTY) == 1
        assert (m.diagonal_share.numerator, m.diagonal_share.denominator) == (4, 6)

    def test_empty_band(self):
        frame = small_frame()
        for uid in ("bm", "gm"):
            frame.users.pop(uid)
            frame.exposures.pop(uid)
        m = topic_matrix(frame, AgeBand.MINOR, CREATOR_AD_TYPES)
        assert m.interests == ()
        assert not m.diagonal_share.defined


class TestStratifiedSample:
    def _frame_with_cell(self, n: int) -> AuditFrame:
        users = {"bm": make_profile("bm", 16)}
        exposures = {"bm": []}
        classifications = {}
        for i in range(n):
            vid = f"v{i:03d}"
            exposures["bm"].append(make_exposure(make_video(vid), position=i + 1))
            classifications[vid] = _result(vid, AdType.UNDISCLOSED, Topic.BEAUTY)
        return AuditFrame(users, exposures, classifications)

    def test_cell_larger_than_quota(self):
        sample = stratified_sample(self._frame_with_cell(12), per_cell=5, seed=3)
        assert len(sample[("bm", AdType.UNDISCLOSED)]) == 5

    def test_cell_smaller_than_quota_takes_all(self):
        sample = stratified_sample(self._frame_with_cell(3), per_cell=5, seed=3)
        assert len(sample[("bm", AdType.UNDISCLOSED)]) == 3

    def test_empty_cell(self):
        sample = stratified_sample(self._frame_with_cell(4), per_cell=5, seed=3)
        assert sample[("bm", AdType.FORMAL)] == []

    def test_seed_reproducible(self):
        frame = self._frame_with_cell(30)
        assert stratified_sample(frame, 5, seed=9) == stratified_sample(frame, 5, seed=9)
        assert stratified_sample(frame, 5, seed=9) != stratified_sample(frame, 5, seed=10)

    def test_without_replacement(self):
        sample = stratified_sample(self._frame_with_cell(8), per_cell=5, seed=4)
        picked = sample[("bm", AdType.UNDISCLOSED)]
        assert len(set(picked)) == len(picked) == 5


def _ann(annotator: str, vid: str, ad_type: AdType, topic: Topic | None) -> AnnotationRecord:
    return AnnotationRecord(annotator_id=annotator, video_id=vid, ad_type=ad_type, ad_topic=topic)


class TestAgreement:
    def test_identical_sets(self):
        a = [_ann("a", f"v{i}", AdType.FORMAL, Topic.OTHER) for i in range(10)]
        b = [_ann("b", f"v{i}", AdType.FORMAL, Topic.OTHER) for i in range(10)]
        assert agreement(a, b, "ad_type").value == 1.0

    def test_known_fraction(self):
        a = [_ann("a", f"v{i}", AdType.FORMAL, Topic.OTHER) for i in range(113)]
        b = [
            _ann("b", f"v{i}", AdType.FORMAL if i < 107 else AdType.NON_AD,
                 Topic.OTHER if i < 107 else None)
            for i in range(113)
        ]
        rate = agreement(a, b, "ad_type")
        assert (rate.numerator, rate.denominator) == (107, 113)
        assert f"{100 * rate.value:.1f}" == "94.7"

    def test_fully_disjoint_labels(self):
        a = [_ann("a", f"v{i}", AdType.FORMAL, Topic.OTHER) for i in range(5)]
        b = [_ann("b", f"v{i}", AdType.NON_AD, None) for i in range(5)]
        assert agreement(a, b, "ad_type").value == 0.0

    def test_intersection_only(self):
        a = [_ann("a", "v1", AdType.FORMAL, Topic.OTHER), _ann("a", "v2", AdType.NON_AD, None)]
        b = [_ann("b", "v2", AdType.NON_AD, None), _ann("b", "v3", AdType.FORMAL, Topic.OTHER)]
        rate = agreement(a, b, "ad_type")
        assert rate.denominator == 1 and rate.value == 1.0

    def test_empty_intersection(self):
        with pytest.raises(EmptyIntersection):
            agreement(
                [_ann("a", "v1", AdType.FORMAL, Topic.OTHER)],
                [_ann("b", "v2", AdType.FORMAL, Topic.OTHER)],
            )

    def test_topic_field_with_none_equality(self):
        a = [_ann("a", "v1", AdType.NON_AD, None)]
        b = [_ann("b", "v1", AdType.NON_AD, None)]
        assert agreement(a, b, "ad_topic").value == 1.0


class TestConfusionMatrix:
    def test_rows_reference_columns_predicted(self):
        predicted = {"v1": _result("v1", AdType.FORMAL, Topic.OTHER)}
        reference = {"v1": _ann("a", "v1", AdType.DISCLOSED, Topic.OTHER)}
        m = confusion_matrix(predicted, reference, "ad_type")
        assert m["disclosed"]["formal"] == 1
        assert sum(sum(row.values()) for row in m.values()) == 1

    def test_topic_none_bucket(self):
        predicted = {"v1": _result("v1", AdType.NON_AD, None)}
        reference = {"v1": _ann("a", "v1", AdType.FORMAL, Topic.BEAUTY)}
        m = confusion_matrix(predicted, reference, "ad_topic")
        assert m["beauty"]["none"] == 1


class TestBuildValidation:
    def test_shapes_and_accuracy(self):
        classifications = {
            f"v{i}": _result(f"v{i}", AdType.FORMAL, Topic.BEAUTY) for i in range(10)
        }
        ann1 = [_ann("a1", f"v{i}", AdType.FORMAL, Topic.BEAUTY) for i in range(10)]
        ann2 = [
            _ann("a2", f"v{i}", AdType.FORMAL if i else AdType.NON_AD,
                 Topic.BEAUTY if i else None)
            for i in range(10)
        ]
        out = build_validation(classifications, {"a1": ann1, "a2": ann2})
        assert out["annotators"]["a1"]["type_accuracy"]["pct"] == 100.0
        assert out["annotators"]["a2"]["type_accuracy"]["matched"] == 9
        pair = out["pairwise"]["a1|a2"]
        assert pair["ad_type"]["matched"] == 9
        assert pair["ad_type"]["total"] == 10
        assert pair["ad_type"]["pct"] == 90.0
