import numpy as np
import pytest

from zpencil.cli import parse_pencil
from zpencil.pencil import validate
from zpencil.testkit import (
    GenConfig,
    gen_pencil,
    oracle_classify,
    oracle_pencil_eigs,
)
from zpencil.zmatrix import NotZMatrixError


class TestGenPencil:
    def test_scalar_structure(self):
        p = gen_pencil(GenConfig(n=1, seed=3, density=1.0))
        assert p.n == 1
        assert p.B[0, 0] - p.A[0, 0] > 0

    def test_every_instance_validates(self):
        for n in (1, 2, 3, 4, 5, 6):
            for seed in range(10):
                cfg = GenConfig(n=n, seed=seed, density=0.2 + 0.1 * (seed % 7))
                assert validate(gen_pencil(cfg)).ok

    def test_deterministic_in_seed(self):
        cfg = GenConfig(n=5, seed=99, density=0.4)
        p1, p2 = gen_pencil(cfg), gen_pencil(cfg)
        assert np.array_equal(p1.A, p2.A) and np.array_equal(p1.B, p2.B)

    def test_regression_snapshot(self, data_dir):
        frozen = parse_pencil((data_dir / "gen_n4_seed42.pencil").read_text())
        p = gen_pencil(GenConfig(n=4, seed=42))
        assert np.array_equal(p.A, frozen.A)
        assert np.array_equal(p.B, frozen.B)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            GenConfig(n=0, seed=1)
        with pytest.raises(ValueError):
            GenConfig(n=2, seed=1, density=0.0)
        with pytest.raises(ValueError):
            GenConfig(n=2, seed=1, dominance_slack=-1.0)


class TestOraclePencilEigs:
    def test_golden_2x2_degree_drop(self, ex1):
        # det(t*B - A) = 3t - 2 here (B is singular): one finite root 2/3
        spec = oracle_pencil_eigs(ex1)
        assert spec.infinite_count == 1
        assert len(spec.finite) == 1
        assert spec.finite[0] == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_trivial_pencil(self):
        from zpencil.pencil import Pencil

        p = Pencil(A=np.zeros((3, 3)), B=np.eye(3))
        spec = oracle_pencil_eigs(p)
        assert spec.infinite_count == 0
        assert all(abs(z) < 1e-12 for z in spec.finite)

    def test_golden_nilpotent(self, ex3):
        # det(t*B - A) = t^2: double root at 0, no infinite eigenvalues
        spec = oracle_pencil_eigs(ex3)
        assert spec.infinite_count == 0
        assert len(spec.finite) == 2
        assert all(abs(z) < 1e-12 for z in spec.finite)

    def test_order_guard(self):
        p = gen_pencil(GenConfig(n=7, seed=0))
        with pytest.raises(ValueError):
            oracle_pencil_eigs(p)


class TestOracleClassify:
    def test_identity(self):
        assert oracle_classify(np.eye(4)) == 4

    def test_golden_interval_point(self, ex1):
        assert oracle_classify(ex1.matrix_at(0.55)) == 1

    def test_negated_with_positive_diagonal(self, ex1):
        # a_11 = 1 > 0, so -A sits in class 0
        assert oracle_classify(-ex1.A) == 0

    def test_rejects_non_z(self):
        with pytest.raises(NotZMatrixError):
            oracle_classify([[0.0, 1.0], [0.0, 0.0]])

    def test_order_guard(self):
        with pytest.raises(ValueError):
            oracle_classify(np.eye(9))


class TestTripleAgreement:
    def test_small_sample(self):
        # the full-size suite lives in the acceptance module
        from zpencil.pencil import classify_at, thresholds
        from zpencil.zmatrix import classify_direct

        for seed in range(10):
            p = gen_pencil(GenConfig(n=4, seed=seed, density=0.45))
            tbl = thresholds(p)
            for t in np.linspace(0.0, 1.0, 9):
                member = p.matrix_at(t)
                a = classify_at(p, t, tbl)
                b = classify_direct(member)
                c = oracle_classify(member)
                assert a == b == c
