"""Frozen reference dataset: per-user counts from the published audit,
plus the table values they must reproduce.

The counts feed the fixture materializer; the expected values were
independently reconstructed from those counts and cross-checked against a
high-precision normal-CDF oracle before being frozen here.
"""

from __future__ import annotations

from adaudit.fixtures import UserFixture
from adaudit.model import AdType, Gender, Topic

B, F, G, P, O = Topic.BEAUTY, Topic.FITNESS, Topic.GAMING, Topic.POLITICS, Topic.OTHER


def reference_fixtures() -> list[UserFixture]:
    return [
        UserFixture(
            user_id="beauty_minor", gender=Gender.FEMALE, age=16, interest=B,
            total_records=651, avg_video_length_s=54.8,
            ads={
                AdType.FORMAL: {B: 1, F: 1, G: 2, O: 17},
                AdType.DISCLOSED: {B: 7, O: 1},
                AdType.UNDISCLOSED: {B: 129, F: 10, O: 1},
            },
        ),
        UserFixture(
            user_id="beauty_adult", gender=Gender.FEMALE, age=21, interest=B,
            total_records=1088, avg_video_length_s=35.6,
            ads={
                AdType.FORMAL: {B: 2, G: 3, O: 1},
                AdType.DISCLOSED: {B: 8},
                AdType.UNDISCLOSED: {B: 146, F: 81, G: 2, O: 3},
            },
        ),
        UserFixture(
            user_id="fitness_minor", gender=Gender.MALE, age=17, interest=F,
            total_records=876, avg_video_length_s=35.8,
            ads={
                AdType.FORMAL: {},
                AdType.DISCLOSED: {F: 1},
                AdType.UNDISCLOSED: {B: 3, F: 39, O: 2},
            },
        ),
        UserFixture(
            user_id="fitness_adult", gender=Gender.MALE, age=20, interest=F,
            total_records=2341, avg_video_length_s=14.0,
            ads={
                AdType.FORMAL: {B: 62, F: 58, G: 25, O: 156},
                AdType.DISCLOSED: {B: 1, F: 8, O: 1},
                AdType.UNDISCLOSED: {B: 11, F: 206, G: 2, O: 4},
            },
        ),
        UserFixture(
            user_id="gaming_minor", gender=Gender.FEMALE, age=16, interest=G,
            total_records=868, avg_video_length_s=30.0,
            ads={
                AdType.FORMAL: {B: 2, G: 3, O: 2},
                AdType.DISCLOSED: {G: 5},
                AdType.UNDISCLOSED: {B: 2, G: 36, O: 1},
            },
        ),
        UserFixture(
            user_id="gaming_adult", gender=Gender.FEMALE, age=21, interest=G,
            total_records=1271, avg_video_length_s=30.0,
            ads={
                AdType.FORMAL: {B: 24, F: 19, G: 49, O: 116},
                AdType.DISCLOSED: {G: 19, O: 1},
                AdType.UNDISCLOSED: {F: 1, G: 63, O: 9},
            },
        ),
    ]


# Every profiling-table cell the reference run must reproduce:
# user -> (pers_matched, pers_total, pers_pct,
#          base_matched, base_total, base_pct, delta_pp, stars)
EXPECTED_FORMAL = {
    "beauty_minor": (1, 21, 4.76, 2, 7, 28.57, -23.81, ""),
    "beauty_adult": (2, 6, 33.33, 86, 509, 16.90, 16.43, ""),
    "fitness_minor": (0, 0, 0.00, 1, 28, 3.57, -3.57, ""),
    "fitness_adult": (58, 301, 19.27, 19, 214, 8.88, 10.39, "**"),
    "gaming_minor": (3, 7, 42.86, 2, 21, 9.52, 33.34, "*"),
    "gaming_adult": (49, 208, 23.56, 28, 307, 9.12, 14.44, "***"),
}

EXPECTED_CREATOR = {
    "beauty_minor": (136, 148, 91.89, 5, 89, 5.62, 86.27, "***"),
    "beauty_adult": (154, 240, 64.17, 12, 326, 3.68, 60.49, "***"),
    "fitness_minor": (40, 45, 88.89, 10, 192, 5.21, 83.68, "***"),
    "fitness_adult": (214, 233, 91.85, 82, 333, 24.62, 67.23, "***"),
    "gaming_minor": (41, 44, 93.18, 0, 193, 0.00, 93.18, "***"),
    "gaming_adult": (82, 93, 88.17, 4, 473, 0.85, 87.32, "***"),
}

# user -> (total_records, ads_detected)
EXPECTED_OVERVIEW = {
    "beauty_minor": (651, 169),
    "beauty_adult": (1088, 246),
    "fitness_minor": (876, 45),
    "fitness_adult": (2341, 534),
    "gaming_minor": (868, 51),
    "gaming_adult": (1271, 301),
}

# (matched, total) diagonals
EXPECTED_DIAGONALS = {
    "minor_creator": (217, 237),
    "minor_formal": (4, 28),
    "adult_formal": (109, 515),
}
EXPECTED_MINOR_UNDISCLOSED_DIAGONAL = (204, 223)

# user -> (disclosed, creator_total)
EXPECTED_DISCLOSURE = {
    "beauty_minor": (8, 148),
    "fitness_minor": (1, 45),
    "gaming_minor": (5, 44),
}

GRAND_TOTALS = {"records": 7095, "ads": 1346}


def delta_close(computed_pp: float, table_pp: float) -> bool:
    """Within +/-0.01 pp at 2-decimal rounding granularity."""
    return abs(round(computed_pp * 100) - round(table_pp * 100)) <= 1
