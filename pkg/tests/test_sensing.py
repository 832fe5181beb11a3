import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gradcs import linalg
from gradcs.errors import DimensionError, FormatError, NumericalError
from gradcs.sensing import (ObservationMatrix, coherence_index, generate_observation, measure,
                            rip_ratio_estimate, sparse_unit_vector, stream)
from gradcs.transforms import TransformOperator


def test_uniform_12_by_64():
    # 12 = 2 * log2(64)
    obs = generate_observation(12, 64, "uniform01", 3)
    assert obs.shape == (12, 64)
    assert np.all((obs.mat >= 0) & (obs.mat < 1))


@pytest.mark.parametrize("seed", range(5))
def test_bernoulli_support(seed):
    assert generate_observation(1, 1, "bernoulli_pm1", seed).mat[0, 0] in (-1.0, 1.0)
    big = generate_observation(20, 30, "bernoulli_pm1", seed).mat
    assert set(np.unique(big)) == {-1.0, 1.0}


def test_seed_sensitivity():
    a = generate_observation(3, 5, "normal01", 1).mat
    b = generate_observation(3, 5, "normal01", 2).mat
    assert np.any(a != b)


@pytest.mark.parametrize("dist", ["normal01", "uniform01", "bernoulli_pm1"])
def test_generation_is_pure(dist):
    a = generate_observation(7, 9, dist, 42)
    b = generate_observation(7, 9, dist, 42)
    assert a.mat.tobytes() == b.mat.tobytes()
    assert (a.distribution.value, a.seed) == (dist, 42)


def test_columns_use_independent_streams():
    # column j only depends on (seed, j): a wider matrix extends a narrower one
    narrow = generate_observation(5, 4, "normal01", 9).mat
    wide = generate_observation(5, 10, "normal01", 9).mat
    np.testing.assert_array_equal(wide[:, :4], narrow)


def test_distribution_moments():
    mat = generate_observation(200, 200, "normal01", 0).mat
    assert abs(mat.mean()) < 0.02 and abs(mat.std() - 1) < 0.02
    mat = generate_observation(200, 200, "uniform01", 0).mat
    assert abs(mat.mean() - 0.5) < 0.01


def test_bad_dimensions():
    with pytest.raises(DimensionError):
        generate_observation(0, 4, "normal01", 1)
    with pytest.raises(DimensionError):
        generate_observation(4, 0, "normal01", 1)


def test_measure_examples():
    np.testing.assert_array_equal(measure(np.eye(2), [3, 4]), [3, 4])
    np.testing.assert_array_equal(measure([[1, 1]], [2, 5]), [7])
    with pytest.raises(DimensionError):
        measure([[1, 1]], [2, 5, 1])


def test_measure_equals_matvec(rng):
    obs = generate_observation(6, 10, "normal01", 5)
    f = rng.standard_normal(10)
    assert measure(obs, f).tobytes() == linalg.matvec(obs.mat, f).tobytes()


def test_rip_identity_is_isometry():
    est = rip_ratio_estimate(np.eye(16), 3, 200, 1)
    assert est.min_ratio == pytest.approx(1, abs=1e-12)
    assert est.max_ratio == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("n", [8, 32])
def test_rip_orthonormal_square(n, rng):
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    est = rip_ratio_estimate(Q, 2, 100, 3)
    assert abs(est.min_ratio - 1) < 1e-12 and abs(est.max_ratio - 1) < 1e-12


def test_rip_witness_zero_ratio():
    # first 4 rows of the 16x16 identity; 1-sparse vectors off those rows vanish
    est = rip_ratio_estimate(np.eye(16)[:4], 1, 200, 0)
    assert est.min_ratio == 0.0
    assert est.max_ratio == pytest.approx(1.0)


def test_rip_matches_bruteforce_recomputation():
    obs = generate_observation(32, 64, "normal01", 11)
    est = rip_ratio_estimate(obs, 4, 1000, 5)
    ratios = []
    for t in range(1000):
        f = sparse_unit_vector(stream(5, t), 64, 4)
        assert np.count_nonzero(f) == 4
        num = sum(sum(obs.mat[i, j] * f[j] for j in np.flatnonzero(f)) ** 2 for i in range(32))
        ratios.append(num / sum(v * v for v in f))
    assert est.min_ratio > 0 and np.isfinite(est.max_ratio)
    assert est.min_ratio == pytest.approx(min(ratios), rel=1e-10)
    assert est.max_ratio == pytest.approx(max(ratios), rel=1e-10)
    assert est.trials == 1000 and est.sparsity_k == 4


def test_rip_bad_k():
    with pytest.raises(DimensionError):
        rip_ratio_estimate(np.eye(4), 5, 10, 0)


def _coherence_by_loops(psi, mat):
    n = mat.shape[1]
    basis = psi.as_matrix()
    best = 0.0
    for row in mat:
        unit = row / np.sqrt(sum(v * v for v in row))
        for k in range(n):
            best = max(best, abs(sum(unit[i] * basis[k, i] for i in range(n))))
    return np.sqrt(n) * best


def test_coherence_examples():
    ident = TransformOperator("identity", 4)
    assert coherence_index(ident, np.eye(4)) == pytest.approx(2.0)
    s = 1 / np.sqrt(2)
    two = TransformOperator("identity", 2)
    assert coherence_index(two, [[s, s], [s, -s]]) == pytest.approx(1.0)


def test_coherence_row_scaling_invariant(rng):
    mat = rng.standard_normal((5, 8))
    psi = TransformOperator("dct", 8)
    scaled = mat.copy()
    scaled[2] *= 5
    assert coherence_index(psi, scaled) == pytest.approx(coherence_index(psi, mat), rel=1e-14)


def test_coherence_zero_row():
    with pytest.raises(NumericalError):
        coherence_index(TransformOperator("identity", 2), [[0, 0], [1, 1]])


@settings(max_examples=30, deadline=None)
@given(kind=st.sampled_from(["identity", "dct", "haar"]), log_n=st.integers(1, 6),
       m=st.integers(1, 10), seed=st.integers(0, 1000))
def test_coherence_bounds_and_loops(kind, log_n, m, seed):
    n = 2 ** log_n
    psi = TransformOperator(kind, n)
    mat = generate_observation(m, n, "normal01", seed).mat
    chi = coherence_index(psi, mat)
    assert 1 - 1e-12 <= chi <= np.sqrt(n) + 1e-12
    assert chi == pytest.approx(_coherence_by_loops(psi, mat), rel=1e-12)


def test_save_load_round_trip(tmp_path):
    obs = generate_observation(4, 6, "normal01", 8)
    obs.save(tmp_path / "M.csv")
    meta = json.loads((tmp_path / "M.json").read_text())
    assert meta == {"m": 4, "n": 6, "dist": "normal01", "seed": 8}
    back = ObservationMatrix.load(tmp_path / "M.csv")
    np.testing.assert_array_equal(back.mat, obs.mat)
    assert back.seed == 8


def test_load_detects_tampering(tmp_path):
    obs = generate_observation(4, 6, "normal01", 8)
    obs.save(tmp_path / "M.csv")
    mat = obs.mat.copy()
    mat[0, 0] += 1e-9
    linalg.write_csv(tmp_path / "M.csv", mat)
    with pytest.raises(FormatError):
        ObservationMatrix.load(tmp_path / "M.csv")


def test_load_without_sidecar(tmp_path):
    linalg.write_csv(tmp_path / "plain.csv", np.eye(3))
    obs = ObservationMatrix.load(tmp_path / "plain.csv")
    assert obs.distribution is None and obs.seed is None
