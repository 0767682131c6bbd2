"""Paired sock-puppet auditing of ad delivery on a simulated platform.

The package covers the full pipeline: a deterministic platform simulator
with injectable profiling ground truth, paired minor/adult agents, a
rule-based ad classifier with a strict decision hierarchy, the statistics
engine (personalization/baseline rates, profiling effects, proportion
z-tests), and the report/validation tooling around them.
"""

from .classify import (
    ClassifierInputView,
    NoiseSpec,
    RuleClassifier,
    classify_dataset,
    scan_indicators,
    scan_topic,
    wrap_with_noise,
)
from .model import (
    AdType,
    AgeBand,
    AgeGroup,
    AgentPair,
    AnnotationRecord,
    ClassificationResult,
    Engagement,
    ExposureRecord,
    Gender,
    GroundTruth,
    IndicatorKind,
    OverlayLabel,
    Topic,
    UserProfile,
    VideoRecord,
    read_exposure_log,
    validate_pair,
    write_exposure_log,
)
from .orchestrator import (
    AuditRun,
    PredictorVerdict,
    SeedingReport,
    TruthOraclePredictor,
    run_audit,
    run_seeding,
    run_session,
)
from .report import Report, build_report, write_report
from .scenario import (
    Scenario,
    SeedingConfig,
    SessionConfig,
    default_scenario,
    load_scenario,
    save_scenario,
)
from .sim import DurationSpec, PlatformSim, ProfilingPolicy, generate_video
from .stats import (
    AuditFrame,
    ProfilingResult,
    Rate,
    Stars,
    TopicMatrix,
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
    user_profiling,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
