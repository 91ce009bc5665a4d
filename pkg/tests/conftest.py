from pathlib import Path

import numpy as np
import pytest

from zpencil.pencil import Pencil

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def ex1() -> Pencil:
    # 2x2 pencil whose family walks through L_0, L_1, L_2 as t rises.
    return Pencil(A=np.array([[1.0, 2.0], [1.0, 0.0]]),
                  B=np.array([[2.0, 2.0], [1.0, 1.0]]))


@pytest.fixture
def ex2() -> Pencil:
    # 4x4 pencil with coincident thresholds tau_2 = tau_3 = tau_4; only
    # L_0, L_1, L_4 appear on [0, 1].
    return Pencil(
        A=np.array([[1.0, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 1, 0, 1]]),
        B=np.array([[4.0, 0, -2, 0], [0, 3, 0, -1], [-2, 0, 4, 0], [0, -2, 0, 4]]),
    )


@pytest.fixture
def ex3() -> Pencil:
    # Critical value 0: the family never leaves L_2.
    return Pencil(A=np.array([[0.0, 1.0], [0.0, 0.0]]),
                  B=np.array([[1.0, 1.0], [0.0, 1.0]]))
