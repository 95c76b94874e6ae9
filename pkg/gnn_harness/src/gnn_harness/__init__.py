"""GIN-based graph classification harness for noisy TUDataset exports."""

__version__ = "0.1.0"

from .compare import RunResult, compare_mechanisms, write_report
from .data import Batch, Dataset, GraphRecord, load_tudataset, shuffled_labels
from .model import Gin
from .train import GinConfig, SplitSpec, grid_search, train_and_eval

__all__ = [
    "__version__",
    "RunResult",
    "compare_mechanisms",
    "write_report",
    "Batch",
    "Dataset",
    "GraphRecord",
    "load_tudataset",
    "shuffled_labels",
    "Gin",
    "GinConfig",
    "SplitSpec",
    "grid_search",
    "train_and_eval",
]
