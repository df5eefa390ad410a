import itertools

import numpy as np
import pytest

from decspace.geometry import (
    Interval,
    Region,
    box,
    interval_intersect,
    projection_measure,
    region_contains_point,
    region_intersect,
    region_subtract,
    region_union,
)

from conftest import raster, sample_axes


def half_open(lo, hi):
    return (lo, hi, True, False)


def closed(lo, hi):
    return (lo, hi, True, True)


class TestInterval:
    def test_intersect_overlapping(self):
        got = interval_intersect(Interval(0, 4), Interval(2, 6))
        assert got == Interval(2, 4, True, False)

    def test_intersect_half_open_touch_is_empty(self):
        assert interval_intersect(Interval(0, 4), Interval(4, 6, True, True)) is None

    def test_intersect_closed_touch_is_a_point(self):
        got = interval_intersect(Interval.closed(0, 4), Interval.closed(4, 6))
        assert got == Interval.point(4)

    def test_measure_ignores_inclusivity(self):
        assert Interval(0, 4).measure == Interval.closed(0, 4).measure == 4

    def test_degenerate_must_be_closed(self):
        with pytest.raises(ValueError):
            Interval(3, 3, True, False).check()
        with pytest.raises(ValueError):
            Interval(5, 3).check()

    def test_box_builder_validates(self):
        assert len(box((0, 1), (2, 3, True, True))) == 2
        with pytest.raises(ValueError):
            box((0, 1), (3, 2))


class TestRegionIntersect:
    def test_self_intersection_is_identity(self):
        r = Region.from_box(half_open(0, 4), half_open(0, 4))
        assert (r & r) == r

    def test_box_overlap(self):
        a = Region.from_box(half_open(0, 4), half_open(0, 4))
        b = Region.from_box(half_open(2, 6), half_open(2, 6))
        assert (a & b) == Region.from_box(half_open(2, 4), half_open(2, 4))

    def test_disjoint_cross(self):
        cross = Region((
            (half_open(2, 4), half_open(0, 6)),
            (half_open(0, 2), half_open(2, 4)),
            (half_open(4, 6), half_open(2, 4)),
        ))
        far = Region.from_box(half_open(10, 12), half_open(10, 12))
        assert (cross & far).is_empty

    def test_dimension_mismatch(self):
        a = Region.from_box(half_open(0, 1))
        b = Region.from_box(half_open(0, 1), half_open(0, 1))
        with pytest.raises(ValueError):
            a & b


class TestRegionSubtract:
    def test_self_difference_is_empty(self):
        r = Region.from_box(half_open(1, 5), half_open(1, 5))
        assert (r - r).is_empty

    def test_l_shape_by_grid_enumeration(self):
        a = Region.from_box(half_open(1, 5), half_open(1, 5))
        b = Region.from_box(half_open(0, 3), half_open(0, 3))
        diff = a - b
        # unit-cell oracle: cells of a minus cells of b
        cells_a = {(i, j) for i in range(1, 5) for j in range(1, 5)}
        cells_b = {(i, j) for i in range(0, 3) for j in range(0, 3)}
        got = {
            (i, j)
            for i in range(0, 6)
            for j in range(0, 6)
            if diff.contains((i + 0.5, j + 0.5))
        }
        assert got == cells_a - cells_b
        assert diff.measure() == pytest.approx(len(cells_a - cells_b))

    def test_subtract_empty_is_identity(self):
        r = Region.from_box(half_open(1, 5), half_open(1, 5))
        assert (r - Region.empty()) == r


class TestRegionUnion:
    def test_union_with_empty(self):
        r = Region.from_box(half_open(0, 2), half_open(0, 4))
        assert (r | Region.empty()) == r

    def test_adjacent_boxes_coalesce(self):
        a = Region.from_box(half_open(0, 2), half_open(0, 4))
        b = Region.from_box(half_open(2, 4), half_open(0, 4))
        got = a | b
        assert got == Region.from_box(half_open(0, 4), half_open(0, 4))
        assert len(got.boxes) == 1

    def test_open_gap_does_not_coalesce(self):
        a = Region.from_box((0, 2, True, False), (0, 4, True, False))
        b = Region.from_box((2, 4, False, False), (0, 4, True, False))
        got = a | b
        assert len(got.boxes) == 2
        assert not got.contains((2, 1))

    def test_overlapping_union_grid_oracle(self):
        a = Region.from_box(half_open(0, 4), half_open(0, 4))
        b = Region.from_box(half_open(2, 6), half_open(2, 6))
        axes = sample_axes(a, b)
        assert raster(a | b, axes) == raster(a, axes) | raster(b, axes)


class TestProjection:
    def test_single_box(self):
        r = Region.from_box(closed(3, 10), closed(7, 8))
        assert projection_measure(r, 0) == 7
        assert projection_measure(r, 1) == 1

    def test_empty_region(self):
        assert projection_measure(Region.empty(), 0) == 0.0

    def test_l_shape_overlap_counted_once(self):
        r = Region((
            (half_open(0, 3), half_open(0, 2)),
            (half_open(0, 5), half_open(2, 4)),
        ))
        # projections [0,3) and [0,5) overlap on [0,3)
        assert projection_measure(r, 0) == 5
        assert projection_measure(r, 1) == 4

    def test_index_out_of_range(self):
        r = Region.from_box(half_open(0, 1), half_open(0, 1))
        with pytest.raises(IndexError):
            projection_measure(r, 2)


class TestContainsPoint:
    def test_closed_lower_bound(self):
        r = Region.from_box(half_open(0, 4), half_open(0, 4))
        assert region_contains_point(r, (0, 0))

    def test_open_upper_bound(self):
        r = Region.from_box(half_open(0, 4), half_open(0, 4))
        assert not region_contains_point(r, (4, 0))

    def test_point_region(self):
        p = Region.from_box(closed(2, 2), closed(3, 3))
        assert region_contains_point(p, (2, 3))
        assert not region_contains_point(p, (2, 3.0001))


def _random_region(rng, n_boxes=3, span=8):
    """A random region accumulated by unioning random half-open boxes."""
    r = Region.empty()
    for _ in range(n_boxes):
        lo0, lo1 = rng.integers(0, span - 1, size=2)
        hi0 = rng.integers(lo0 + 1, span + 1)
        hi1 = rng.integers(lo1 + 1, span + 1)
        b = Region.from_box(
            half_open(float(lo0), float(hi0)), half_open(float(lo1), float(hi1))
        )
        r = r | b
    return r


class TestRandomizedInvariants:
    def test_set_operations_match_raster_oracle(self, rng):
        for _ in range(50):
            a = _random_region(rng)
            b = _random_region(rng)
            axes = sample_axes(a, b)
            ra, rb = raster(a, axes), raster(b, axes)
            assert raster(a & b, axes) == ra & rb
            assert raster(a - b, axes) == ra - rb
            assert raster(a | b, axes) == ra | rb

    def test_measure_conservation(self, rng):
        for _ in range(50):
            a = _random_region(rng)
            b = _random_region(rng)
            lhs = a.measure()
            rhs = (a & b).measure() + (a - b).measure()
            assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_outputs_are_pairwise_disjoint(self, rng):
        for _ in range(30):
            a = _random_region(rng)
            b = _random_region(rng)
            for r in (a & b, a - b, a | b):
                for b1, b2 in itertools.combinations(r.boxes, 2):
                    probe = Region((b1,), _canonical=True)
                    other = Region((b2,), _canonical=True)
                    assert (probe & other).is_empty

    def test_difference_disjoint_from_subtrahend(self, rng):
        for _ in range(30):
            a = _random_region(rng)
            b = _random_region(rng)
            assert ((a - b) & b).is_empty
            recomposed = (a - b) | (a & b)
            axes = sample_axes(a, b)
            assert raster(recomposed, axes) == raster(a, axes)
