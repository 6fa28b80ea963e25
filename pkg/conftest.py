import pytest

from revkit.model import Allocation, new_instance

EPS = 0.001
EPSILONS = (0.001, 0.01, 0.1)

# Three papers, six unit-capacity reviewers, two reviewers per paper
INST_A_VALUES = [
    [9, 3, 5, 9, 4, 4],
    [10, 4, 0, 10, 6, 5],
    [1, 1, 2, 2, 4, 4],
]


def inst_b_values(eps=EPS):
    """Four papers, six reviewers of capacity two, three reviewers per paper."""
    return [
        [2, 0, 0, 1, 0.5, eps],
        [3, 1, 2, 10, 0, 0],
        [0, eps, 0, 10, 1, 0],
        [2, 1, 3, 10, 0, eps],
    ]


INST_B_VALUES = inst_b_values()


def ids(*one_based):
    """1-based ids as a 0-based tuple."""
    return tuple(x - 1 for x in one_based)


def bundles(*one_based_bundles):
    return [list(ids(*b)) for b in one_based_bundles]


def write_csv(path, rows):
    path.write_text("".join(",".join(repr(float(v)) for v in row) + "\n" for row in rows), encoding="utf-8")
    return str(path)


@pytest.fixture
def inst_a():
    return new_instance(INST_A_VALUES, 1, 2)


@pytest.fixture
def inst_b():
    return new_instance(INST_B_VALUES, 2, 3)


@pytest.fixture
def naive_b_alloc():
    """Naive round robin on INST_B in order 1, 2, 3, 4: paper 4 envies paper 2 beyond one reviewer."""
    return Allocation.from_bundles(bundles([1, 5, 6], [4, 1, 3], [4, 5, 2], [3, 2, 6]))


@pytest.fixture
def repaired_b_alloc():
    return Allocation.from_bundles(bundles([1, 5, 6], [4, 1, 2], [4, 5, 3], [3, 2, 6]))


@pytest.fixture
def inst_a_csv(tmp_path):
    return write_csv(tmp_path / "inst_a.csv", INST_A_VALUES)


@pytest.fixture
def inst_b_csv(tmp_path):
    return write_csv(tmp_path / "inst_b.csv", INST_B_VALUES)
