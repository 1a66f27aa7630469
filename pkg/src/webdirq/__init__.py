"""Structure audits and browse-session quality metrics for web directories."""
from webdirq.directory import (
    Category,
    DirectoryError,
    NavConfig,
    ParseError,
    Resource,
    UnreachableError,
    ValidationError,
    Violation,
    WebDirectory,
    load_directory,
    shortest_path,
    shortest_path_length,
    skip_level,
    validate,
)
from webdirq.metrics import (
    AggregateReport,
    BrowseSession,
    InconsistentSessionError,
    SessionMetrics,
    aggregate,
    ddp,
    max_revisit,
    path_ratio,
    read_sessions,
    score_session,
    write_sessions,
)
from webdirq.semantics import (
    ConceptBag,
    SemanticsConfig,
    bag_difference,
    bag_gap,
    bag_union,
    distance,
    ideality_gap,
    is_ideal,
    is_realistically_ideal,
    semantic_content,
    similarity,
)
from webdirq.simulator import Policy, SimConfig, batch_simulate, simulate

__version__ = "0.1.0"
