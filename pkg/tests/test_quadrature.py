import math

import numpy as np
import pytest

from diskops.errors import ConfigError, NumericalFailure, ResourceLimit
from diskops.geometry import EuclideanSubdisk, PseudoDisk, StolzAngle
from diskops.quadrature import (
    WHOLE_DISK,
    RegionIndicator,
    default_grid,
    disk_template,
    integrate_circle,
    integrate_disk,
    integrate_region,
    integrate_segment,
    integrate_stolz,
    integrate_subdisk,
    make_grid,
    stolz_integrals,
)


@pytest.fixture(scope="module")
def grid():
    return default_grid()


@pytest.fixture(scope="module")
def small():
    return make_grid(levels=8, base_angular=16)


def test_weights_partition(grid):
    for g in (make_grid(levels=1), make_grid(levels=5, r_max=0.9), grid):
        assert integrate_disk(lambda z: np.ones(z.shape), g) == pytest.approx(g.r_max ** 2, abs=1e-12)


def test_grid_structure(grid):
    assert np.all(np.diff(grid.radii) > 0)
    assert grid.radii[-1] <= grid.r_max
    assert np.all(grid.counts >= 8)
    assert np.all(np.diff(grid.counts) >= 0)
    near = grid.ring_inner >= 1 - 2.0 ** -11
    assert np.all((grid.ring_outer - grid.ring_inner)[near] <= 2.0 ** -12)


def test_cell_cap():
    with pytest.raises(ResourceLimit):
        make_grid(cell_cap=1000)
    with pytest.raises(ConfigError):
        make_grid(r_max=1.0)


def test_disk_integrals(grid):
    assert integrate_disk(lambda z: np.abs(z) ** 2, grid) == pytest.approx(0.5, rel=5e-3)
    assert integrate_disk(lambda z: np.log(1 / np.abs(z)), grid) == pytest.approx(0.5, rel=1e-2)


def test_log_convergence():
    errs = [abs(integrate_disk(lambda z: np.log(1 / np.abs(z)), make_grid(levels=lv, base_angular=8)) - 0.5) for lv in (4, 8, 16)]
    assert errs[1] <= errs[0] / 2 and errs[2] <= errs[1] / 2


def test_non_finite_field(small):
    with pytest.raises(NumericalFailure):
        integrate_disk(lambda z: np.where(np.abs(z) > 0.5, np.inf, 1.0), small)


def test_region_integrals(grid):
    one = lambda z: np.ones(z.shape)  # noqa: E731
    assert integrate_region(one, WHOLE_DISK, grid) == integrate_disk(one, grid)
    ann = RegionIndicator(lambda z: np.abs(z) > 0.25)
    assert integrate_region(one, ann, grid) == pytest.approx(grid.r_max ** 2 - 0.0625, rel=1e-2)
    assert integrate_region(one, PseudoDisk(0.5, 0.5), grid) == pytest.approx(0.16, rel=1e-2)


def test_complementary_regions(small):
    f = lambda z: np.abs(z - 0.3) ** 2  # noqa: E731
    reg = RegionIndicator(lambda z: z.real > 0.1) | PseudoDisk(-0.4j, 0.6)
    total = integrate_region(f, reg, small) + integrate_region(f, ~reg, small)
    assert total == pytest.approx(integrate_disk(f, small), abs=1e-12)
    both = integrate_region(f, reg & ~reg, small)
    assert both == 0.0


def test_summation_is_deterministic(small):
    f = lambda z: np.abs(np.sin(3 * z)) ** 2  # noqa: E731
    assert integrate_disk(f, small) == integrate_disk(f, small)


def test_subdisk_examples():
    one = lambda z: np.ones(z.shape)  # noqa: E731
    for a, eta in [(0.0, 0.3), (0.5, 0.5), (0.9, 0.7), (0.999j, 0.5)]:
        d = PseudoDisk(a, eta)
        assert integrate_subdisk(one, d) == pytest.approx(d.area(), rel=1e-3)
    for a, eta in [(0.0, 0.5), (0.5, 0.5), (0.9, 0.1)]:
        d = EuclideanSubdisk(a, eta)
        assert integrate_subdisk(one, d) == pytest.approx(eta ** 2 * (1 - abs(a)) ** 2, rel=1e-3)
    ind = lambda z: (np.abs(z) > 0.25).astype(float)  # noqa: E731
    assert integrate_subdisk(ind, PseudoDisk(0, 0.5)) == pytest.approx(0.1875, rel=1e-2)


def test_template_weights_sum_to_one():
    _, w = disk_template(32, 6)
    assert w.sum() == pytest.approx(1.0, abs=1e-14)


def test_circle_examples():
    assert integrate_circle(lambda t: np.ones(t.shape), 0.5) == pytest.approx(1.0)
    assert integrate_circle(lambda t: np.abs(0.5 * np.exp(1j * t)) ** 2, 0.5) == pytest.approx(0.25)
    val = integrate_circle(lambda t: np.abs(1 - 0.5 * np.exp(1j * t)) ** -2, 0.5, 4096)
    assert val == pytest.approx(4 / 3, abs=1e-6)
    with pytest.raises(ConfigError):
        integrate_circle(lambda t: t, 1.0)


def test_stolz_integrals(grid):
    one = lambda z: np.ones(z.shape)  # noqa: E731
    a = [integrate_stolz(one, StolzAngle(t, 0.5), grid) for t in (0.0, 1.0, 4.0)]
    assert max(a) / min(a) - 1 < 1e-2
    assert integrate_stolz(one, StolzAngle(0.0, 0.3), grid) < integrate_stolz(one, StolzAngle(0.0, 0.6), grid)


def test_stolz_prefix_sums_match_indicator(small):
    v = np.abs(small.points - 0.2) ** 2
    thetas = np.array([0.0, 0.37, 2.0, 5.9])
    fast = stolz_integrals(v, small, 0.5, thetas)
    slow = [integrate_stolz(lambda z: np.abs(z - 0.2) ** 2, StolzAngle(t, 0.5), small) for t in thetas]
    assert np.allclose(fast, slow, rtol=1e-12, atol=1e-15)


def test_segment_examples():
    z = 0.3 + 0.4j
    assert integrate_segment(lambda w: np.ones(w.shape), z) == pytest.approx(z)
    assert integrate_segment(lambda w: 2 * w, z) == pytest.approx(z * z, abs=1e-15)
    val = integrate_segment(lambda w: 1 / (1 - w / 2), 0.5)
    assert abs(val - (-2 * math.log(0.75))) < 1e-10


def test_segment_vectorized():
    ends = np.array([0.1, 0.5j, -0.7 + 0.2j])
    out = integrate_segment(lambda w: np.exp(w), ends)
    assert np.allclose(out, np.exp(ends) - 1, atol=1e-14)
    graded = integrate_segment(lambda w: 1 / np.sqrt(1 - w), 0.999999, 40, graded=True)
    assert graded == pytest.approx(2 * (1 - math.sqrt(1 - 0.999999)), rel=1e-10)
