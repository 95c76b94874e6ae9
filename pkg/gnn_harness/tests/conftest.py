import subprocess
import sys
from pathlib import Path

import pytest

# the obfuscation tool is consumed strictly through its CLI and file formats
EXPORT_SCRIPT = Path(__file__).parents[2] / "scripts" / "make_noisy_exports.py"


def build_exports(root: Path, n: int, count: int, rhos: str, seed: int = 0) -> Path:
    subprocess.run(
        [sys.executable, str(EXPORT_SCRIPT), "--n", str(n), "--count", str(count),
         "--rhos", rhos, "--seed", str(seed), "--epsilon", "1", "--out", str(root)],
        check=True, capture_output=True, text=True)
    return root / "exports"


@pytest.fixture(scope="session")
def exports_small(tmp_path_factory):
    """60-graph two-class collection; fast enough for unit tests."""
    return build_exports(tmp_path_factory.mktemp("small"), n=40, count=30, rhos="0")


@pytest.fixture(scope="session")
def exports_full(tmp_path_factory):
    """400-graph collection (m=2 vs m=6) used by the ordering acceptance."""
    return build_exports(tmp_path_factory.mktemp("full"), n=80, count=200,
                         rhos="0,0.2,0.5")
