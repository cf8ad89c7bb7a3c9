"""critmatch: critical relaxed stable matchings with two-sided ties.

The solver matches a bipartite instance whose vertices rank acceptable
partners (ties allowed, lists may be incomplete) and where some vertices on
either side are critical and must be matched whenever any matching could
match them. Output is always a critical matching in which every remaining
blocking pair is justified by a critical partner, of size at least two
thirds of the best such matching.
"""

from .engine import LeveledMatching, Level, SolveStats, solve
from .gen import GenParams, random_instance
from .model import (
    Instance,
    ParseError,
    make_instance,
    parse_instance,
    serialize_instance,
    validate,
)
from .oracle import (
    OracleResult,
    PopularityVerdict,
    ScanResult,
    enumerate_matchings,
    exhaustive_scan,
    max_critical_rsm,
    meets_two_thirds,
    more_popular,
)
from .verify import (
    BlockingPair,
    StructureReport,
    VerificationReport,
    blocking_pairs,
    build_level_partition,
    check_structure,
    critical_coverage,
    is_critical,
    is_rsm,
    max_critical_coverage,
    verification_report,
)

__version__ = "0.1.0"

__all__ = [
    "BlockingPair",
    "GenParams",
    "Instance",
    "Level",
    "LeveledMatching",
    "OracleResult",
    "ParseError",
    "PopularityVerdict",
    "ScanResult",
    "SolveStats",
    "StructureReport",
    "VerificationReport",
    "__version__",
    "blocking_pairs",
    "build_level_partition",
    "check_structure",
    "critical_coverage",
    "enumerate_matchings",
    "exhaustive_scan",
    "is_critical",
    "is_rsm",
    "make_instance",
    "max_critical_coverage",
    "max_critical_rsm",
    "meets_two_thirds",
    "more_popular",
    "parse_instance",
    "random_instance",
    "serialize_instance",
    "solve",
    "validate",
    "verification_report",
]
