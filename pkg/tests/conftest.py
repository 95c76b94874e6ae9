import pytest

from dprr import Graph, generate_ba


@pytest.fixture
def triangle() -> Graph:
    return Graph(3, {(0, 1), (1, 2), (0, 2)})


@pytest.fixture
def path6() -> Graph:
    return Graph(6, {(i, i + 1) for i in range(5)})


@pytest.fixture(scope="session")
def ba_small() -> Graph:
    return generate_ba(100, 3, seed=7)


def write_tudataset_files(tmp_path, name, a_lines, indicator, labels):
    tmp_path.mkdir(parents=True, exist_ok=True)
    (tmp_path / f"{name}_A.txt").write_text("\n".join(a_lines) + "\n")
    (tmp_path / f"{name}_graph_indicator.txt").write_text("\n".join(indicator) + "\n")
    (tmp_path / f"{name}_graph_labels.txt").write_text("\n".join(labels) + "\n")
    return tmp_path
