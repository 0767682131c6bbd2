from __future__ import annotations

from pathlib import Path

import pytest

from adaudit.errors import InvalidAge, InvariantViolation, MalformedRecord, MismatchedPair
from adaudit.model import (
    AdType,
    AgeBand,
    AgeGroup,
    Engagement,
    ENGAGED_FULL,
    Gender,
    IndicatorKind,
    OverlayLabel,
    SKIPPED,
    Topic,
    UserProfile,
    exposure_from_dict,
    exposure_to_dict,
    read_exposure_log,
    validate_pair,
    write_exposure_log,
)

from conftest import make_exposure, make_pair, make_profile, make_video

FIXTURE = Path(__file__).parent / "fixtures" / "exposures_canonical.jsonl"


class TestAgeGroup:
    @pytest.mark.parametrize("age,band", [(16, AgeBand.MINOR), (17, AgeBand.MINOR),
                                          (20, AgeBand.ADULT), (21, AgeBand.ADULT)])
    def test_accepted_ages(self, age, band):
        assert AgeGroup.from_age(age).band is band

    @pytest.mark.parametrize("age", [15, 18, 19, 22, 0, 30])
    def test_rejected_ages(self, age):
        with pytest.raises(InvalidAge):
            AgeGroup.from_age(age)

    def test_band_age_consistency(self):
        with pytest.raises(InvalidAge):
            AgeGroup(AgeBand.MINOR, 21)
        with pytest.raises(InvalidAge):
            AgeGroup(AgeBand.ADULT, 16)


class TestPairValidation:
    def test_valid_pair_returned_unchanged(self):
        pair = make_pair(16, 21, Gender.FEMALE, Topic.BEAUTY)
        assert validate_pair(pair) is pair

    def test_age_cross_product(self):
        for minor_age in (16, 17):
            for adult_age in (20, 21):
                validate_pair(make_pair(minor_age, adult_age))

    def test_gender_mismatch(self):
        pair = make_pair(adult_gender=Gender.MALE)
        with pytest.raises(MismatchedPair):
            validate_pair(pair)

    def test_interest_mismatch(self):
        pair = make_pair(adult_interest=Topic.GAMING)
        with pytest.raises(MismatchedPair):
            validate_pair(pair)

    def test_locale_mismatch(self):
        pair = make_pair(adult_locale="FR")
        with pytest.raises(MismatchedPair):
            validate_pair(pair)

    def test_borderline_age_rejected_at_construction(self):
        with pytest.raises(InvalidAge):
            make_pair(minor_age=18)

    def test_swapped_bands_rejected(self):
        minor = make_profile("a", 16)
        adult = make_profile("b", 21)
        swapped = type(make_pair())(pair_id="p", minor=adult, adult=minor)
        with pytest.raises(InvalidAge):
            validate_pair(swapped)


class TestProfileInvariants:
    def test_other_is_not_an_interest(self):
        with pytest.raises(InvariantViolation):
            make_profile(interest=Topic.OTHER)

    def test_politics_is_a_valid_interest(self):
        assert make_profile(interest=Topic.POLITICS, gender=Gender.MALE).interest is Topic.POLITICS

    def test_label(self):
        assert make_profile().label() == "Beauty_Minor"
        assert make_profile("x", 21).label() == "Beauty_Adult"


class TestEngagement:
    def test_strong_interest_routine(self):
        assert ENGAGED_FULL.watched_full and ENGAGED_FULL.liked and ENGAGED_FULL.bookmarked

    def test_skip_watch_exclusive(self):
        with pytest.raises(InvariantViolation):
            Engagement(watched_full=True, liked=False, bookmarked=False, skipped=True)
        with pytest.raises(InvariantViolation):
            Engagement(watched_full=False, liked=False, bookmarked=False, skipped=False)

    def test_like_requires_watch(self):
        with pytest.raises(InvariantViolation):
            Engagement(watched_full=False, liked=True, bookmarked=False, skipped=True)

    def test_bookmark_requires_watch(self):
        with pytest.raises(InvariantViolation):
            Engagement(watched_full=False, liked=False, bookmarked=True, skipped=True)

    def test_watch_without_like_is_fine(self):
        Engagement(watched_full=True, liked=False, bookmarked=False, skipped=False)


class TestVideoRecord:
    def test_frames_must_be_three(self):
        with pytest.raises(InvariantViolation):
            make_video(frames=("a", "b"))

    def test_duration_positive(self):
        with pytest.raises(InvariantViolation):
            make_video(duration_s=0.0)

    def test_without_truth_strips_only_truth(self):
        from adaudit.model import GroundTruth

        video = make_video(truth=GroundTruth(AdType.FORMAL, Topic.BEAUTY))
        view = video.without_truth()
        assert view.truth is None
        assert view.video_id == video.video_id
        assert view.description == video.description


class TestRecordCoherence:
    def test_classification_coherence(self):
        from adaudit.model import ClassificationResult

        with pytest.raises(InvariantViolation):
            ClassificationResult("v", True, AdType.NON_AD, None, (), "")
        with pytest.raises(InvariantViolation):
            ClassificationResult("v", True, AdType.FORMAL, None, (), "")
        with pytest.raises(InvariantViolation):
            ClassificationResult("v", False, AdType.NON_AD, Topic.BEAUTY, (), "")
        ClassificationResult("v", True, AdType.FORMAL, Topic.OTHER, (), "ok")
        ClassificationResult("v", False, AdType.NON_AD, None, (), "ok")

    def test_annotation_coherence(self):
        from adaudit.model import AnnotationRecord

        with pytest.raises(InvariantViolation):
            AnnotationRecord("a1", "v", AdType.NON_AD, Topic.OTHER)
        with pytest.raises(InvariantViolation):
            AnnotationRecord("a1", "v", AdType.DISCLOSED, None)
        AnnotationRecord("a1", "v", AdType.DISCLOSED, Topic.GAMING)


class TestEnumRoundTrips:
    @pytest.mark.parametrize("enum_cls", [AdType, Topic, OverlayLabel, IndicatorKind, Gender, AgeBand])
    def test_parse_render_identity(self, enum_cls):
        for member in enum_cls:
            assert enum_cls(member.value) is member


class TestExposureLogIO:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        assert read_exposure_log(path) == []

    def test_single_record_roundtrip(self, tmp_path):
        rec = make_exposure(make_video())
        path = tmp_path / "one.jsonl"
        write_exposure_log([rec], path)
        back = read_exposure_log(path)
        assert back == [rec]

    def test_canonical_fixture_byte_roundtrip(self, tmp_path):
        records = read_exposure_log(FIXTURE)
        assert len(records) == 12
        out = tmp_path / "rewritten.jsonl"
        write_exposure_log(records, out)
        assert out.read_bytes() == FIXTURE.read_bytes()

    def test_concatenation_is_order_stable(self, tmp_path):
        a = [make_exposure(make_video(f"a{i}"), position=i + 1) for i in range(3)]
        b = [make_exposure(make_video(f"b{i}"), session_index=2, position=i + 1) for i in range(2)]
        pa, pb, pc = tmp_path / "a.jsonl", tmp_path / "b.jsonl", tmp_path / "c.jsonl"
        write_exposure_log(a, pa)
        write_exposure_log(b, pb)
        pc.write_bytes(pa.read_bytes() + pb.read_bytes())
        assert read_exposure_log(pc) == a + b

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"user_id": "x"\n', encoding="utf-8")
        with pytest.raises(MalformedRecord) as err:
            read_exposure_log(path)
        assert err.value.line == 1

    def test_missing_field_reports_line_and_field(self, tmp_path):
        rec = make_exposure(make_video())
        d = exposure_to_dict(rec)
        del d["video"]["author"]
        import json

        path = tmp_path / "missing.jsonl"
        path.write_text(json.dumps(d) + "\n", encoding="utf-8")
        with pytest.raises(MalformedRecord) as err:
            read_exposure_log(path)
        assert err.value.line == 1
        assert err.value.field == "author"

    def test_invariant_violating_record_raises(self, tmp_path):
        rec = make_exposure(make_video())
        d = exposure_to_dict(rec)
        d["engaged"]["liked"] = True  # liked without watched_full
        import json

        path = tmp_path / "broken.jsonl"
        path.write_text(json.dumps(d) + "\n", encoding="utf-8")
        with pytest.raises(InvariantViolation):
            read_exposure_log(path)

    def test_optional_fields_omitted_when_absent(self):
        rec = make_exposure(make_video(transcript=None, truth=None))
        d = exposure_to_dict(rec)
        assert "transcript" not in d["video"]
        assert "truth" not in d["video"]
        assert exposure_from_dict(d) == rec

    def test_truth_present_iff_simulator_origin(self):
        from adaudit.model import GroundTruth

        truth = GroundTruth(AdType.UNDISCLOSED, Topic.GAMING)
        rec = make_exposure(make_video(truth=truth))
        d = exposure_to_dict(rec)
        assert d["video"]["truth"] == {"true_ad_type": "undisclosed", "true_topic": "gaming"}
        assert exposure_from_dict(d).video.truth == truth
