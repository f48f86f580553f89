"""sigbench: synthetic event logs with planted object signatures, a
from-scratch DBSCAN over Jaccard features, pair-counting cluster metrics,
and a resumable benchmark harness tying them together."""

from .bench import (
    PAPER_GRID,
    BenchRecord,
    PoorGroup,
    SweepSpec,
    TimingStats,
    aggregate_by_parameter,
    enumerate_grid,
    extract_poor_combinations,
    load_records,
    run_cell,
    run_sweep,
    timing_summary,
)
from .dbscan import ClusteringResult, DbscanConfig, dbscan, suggest_config
from .encoding import EncodedDataset, encode, jaccard_distance
from .errors import (
    DatasetFormatError,
    InvalidParameterError,
    ResultsFileError,
    SweepSpecError,
    UndefinedMetricError,
    UnsupportedVersionError,
)
from .events import NOISE_LABEL, Dataset, Event, GroundTruth, ObjectId, event_overlap
from .generator import (
    BASE_EPOCH_MS,
    TIMESTAMP_STEP_MS,
    GenerationParams,
    generate_dataset,
    generate_noise,
    generate_objects,
    generate_signatures,
    inject_signatures,
    shared_object_count,
)
from .io import (
    FieldMapping,
    ImportSkipWarning,
    import_external,
    read_dataset,
    read_header,
    write_dataset,
)
from .metrics import PairCounts, adjusted_rand_index, pair_counts, rand_index

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ObjectId",
    "Event",
    "Dataset",
    "GroundTruth",
    "NOISE_LABEL",
    "event_overlap",
    "GenerationParams",
    "BASE_EPOCH_MS",
    "TIMESTAMP_STEP_MS",
    "shared_object_count",
    "generate_objects",
    "generate_signatures",
    "generate_noise",
    "generate_dataset",
    "inject_signatures",
    "EncodedDataset",
    "encode",
    "jaccard_distance",
    "DbscanConfig",
    "ClusteringResult",
    "dbscan",
    "suggest_config",
    "PairCounts",
    "pair_counts",
    "rand_index",
    "adjusted_rand_index",
    "write_dataset",
    "read_dataset",
    "read_header",
    "import_external",
    "FieldMapping",
    "ImportSkipWarning",
    "SweepSpec",
    "BenchRecord",
    "PoorGroup",
    "TimingStats",
    "PAPER_GRID",
    "enumerate_grid",
    "run_cell",
    "run_sweep",
    "load_records",
    "aggregate_by_parameter",
    "extract_poor_combinations",
    "timing_summary",
    "InvalidParameterError",
    "UndefinedMetricError",
    "DatasetFormatError",
    "UnsupportedVersionError",
    "SweepSpecError",
    "ResultsFileError",
]
