import numpy as np
import pytest

from sigembed import (ChartPoint, DomainError, ImmersionError,
                      PreconditionError, isometry_residual,
                      isometry_residual_grid, psi_toy, psi_toy_map, pullback,
                      temporal_f, toy_model)
from sigembed.minkowski import EmbeddingMap, MinkowskiEvent, fd_jacobian
from sigembed.verify import perturbed_psi_map


def test_temporal_f_values():
    assert temporal_f(0.0) == pytest.approx(-2.0 / 3.0, abs=1e-15)
    assert temporal_f(3.0) == pytest.approx(-16.0 / 3.0, abs=1e-14)
    # one-sided limit toward the domain boundary
    assert temporal_f(-1.0 + 1e-12) == pytest.approx(0.0, abs=1e-15)
    assert temporal_f(-1.0 + 1e-12) < 0.0


def test_temporal_f_domain_error():
    with pytest.raises(DomainError):
        temporal_f(-1.0)
    with pytest.raises(DomainError):
        temporal_f(-2.0)


def test_temporal_f_strictly_decreasing():
    ts = np.linspace(-0.999, 10, 300)
    vals = [temporal_f(t) for t in ts]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_psi_toy_values():
    np.testing.assert_allclose(
        psi_toy(ChartPoint(0.0, [5.0])).coords(), [-2.0 / 3.0, 0.0, 5.0], atol=1e-15
    )
    np.testing.assert_allclose(
        psi_toy(ChartPoint(3.0, [0.0])).coords(), [-16.0 / 3.0, 3.0, 0.0], atol=1e-14
    )
    np.testing.assert_allclose(
        psi_toy(ChartPoint(0.0, [1.0, 2.0])).coords(),
        [-2.0 / 3.0, 0.0, 1.0, 2.0], atol=1e-15,
    )


def test_psi_toy_injective_on_grid():
    m = psi_toy_map(2)
    ts = np.linspace(-0.9, 3, 25)
    xs = np.linspace(-2, 2, 25)
    tt, xx = np.meshgrid(ts, xs)
    coords = np.column_stack([tt.ravel(), xx.ravel()])
    images = m.value_batch(coords)
    assert np.unique(images, axis=0).shape[0] == images.shape[0]


@pytest.mark.parametrize("t,expected", [
    (1.0, [[-1.0, 0.0], [0.0, 1.0]]),
    (0.0, [[0.0, 0.0], [0.0, 1.0]]),
    (-0.5, [[0.5, 0.0], [0.0, 1.0]]),
])
def test_pullback_matches_source_metric(t, expected, cfg):
    map_ = psi_toy_map(2)
    model = toy_model(2)
    p = ChartPoint(t, [0.7])
    np.testing.assert_allclose(pullback(map_, model, p, "analytic"), expected,
                               atol=1e-14)
    np.testing.assert_allclose(
        pullback(map_, model, p, "finite_difference", cfg), expected, atol=1e-6
    )


def test_pullback_modes_agree(cfg):
    map_ = psi_toy_map(3)
    model = toy_model(3)
    rng = np.random.default_rng(3)
    for _ in range(20):
        p = ChartPoint(rng.uniform(-0.9, 5), rng.uniform(-3, 3, size=2))
        a = pullback(map_, model, p, "analytic")
        f = pullback(map_, model, p, "finite_difference", cfg)
        assert np.abs(a - f).max() <= 10 * cfg.fd_step


def test_pullback_rank_deficiency_reported():
    # collapse the embedding along x so the Jacobian loses a column
    def value_eval(p):
        return MinkowskiEvent(p.t, [p.t, 0.0])

    degenerate = EmbeddingMap(2, 3, value_eval, domain_check=None)
    with pytest.raises(ImmersionError) as err:
        pullback(degenerate, None, ChartPoint(1.0, [0.0]),
                 "finite_difference")
    assert err.value.rank == 1


def test_pullback_requires_analytic_jacobian_when_asked():
    m = EmbeddingMap(2, 3, lambda p: MinkowskiEvent(p.t, [p.t, p.spatial[0]]))
    with pytest.raises(PreconditionError):
        pullback(m, None, ChartPoint(1.0, [0.0]), "analytic")


def test_psi_jacobian_full_rank_near_boundary():
    map_ = psi_toy_map(2)
    for t in [-0.999999, -0.9, 0.0, 10.0]:
        jac = map_.jacobian_eval(ChartPoint(t, [0.0]))
        assert np.linalg.matrix_rank(jac) == 2


def test_isometry_residual_grid_and_pointwise_agree(cfg):
    map_ = psi_toy_map(2)
    model = toy_model(2)
    ts = np.linspace(-0.99, 10, 40)
    xs = np.linspace(-5, 5, 10)
    tt, xx = np.meshgrid(ts, xs, indexing="ij")
    coords = np.column_stack([tt.ravel(), xx.ravel()])
    grid_worst = isometry_residual_grid(map_, model, coords, "finite_difference", cfg)
    point_worst = max(
        isometry_residual(map_, model, ChartPoint.from_coords(c),
                          "finite_difference", cfg)
        for c in coords[:: 40]
    )
    assert grid_worst <= 1e-6
    assert point_worst <= grid_worst + 1e-12


def test_perturbed_map_residual_detects_non_isometry():
    model = toy_model(2)
    bad = perturbed_psi_map(2, scale=1.01)
    res = isometry_residual(bad, model, ChartPoint(1.0, [0.0]), "analytic")
    # residual = |(scale^2 - 1)(1 + t)| at the tt entry
    assert res == pytest.approx((1.01**2 - 1.0) * 2.0, rel=1e-10)
    assert res == pytest.approx(0.0402, abs=1e-4)


def test_fd_jacobian_of_psi_matches_analytic(cfg):
    map_ = psi_toy_map(2)
    p = ChartPoint(2.0, [1.5])
    np.testing.assert_allclose(
        fd_jacobian(map_, p, cfg), map_.jacobian_eval(p), atol=1e-8
    )


def test_minkowski_event_validation():
    with pytest.raises(ValueError):
        MinkowskiEvent(np.nan, [0.0])
    e = MinkowskiEvent(1.0, [2.0, 3.0])
    assert e.dim == 3
    np.testing.assert_array_equal(e.coords(), [1.0, 2.0, 3.0])
