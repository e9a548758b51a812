import numpy as np
import pytest

from pairinfo import EmpiricalPmf, JointPmf, PairShape, z_view

# Working example used throughout: a 2x2 joint table with a small positive
# dependence between the coordinates.
DEMO_TABLE = np.array([[0.2, 0.4], [0.1, 0.3]])


@pytest.fixture
def demo_joint():
    return JointPmf(DEMO_TABLE)


@pytest.fixture
def demo_z():
    return z_view(JointPmf(DEMO_TABLE))


@pytest.fixture
def demo_emp():
    return EmpiricalPmf(np.array([2, 4, 1, 3]), PairShape(2, 2))
