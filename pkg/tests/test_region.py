import math
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from branchaudit.errors import ParameterError
from branchaudit.region import (Disk, HalfPlane, ParamCurve, Region, Window, build_paper_region,
                                connected_components, region_from_table, region_to_table)


@pytest.fixture(scope="module")
def fig3():
    return build_paper_region("fig3")


def test_contains_examples(fig3):
    assert fig3.contains(1 + 1j)
    assert fig3.contains(0.25 + 0.5j)  # right half of the small disk
    assert not fig3.contains(-0.25 + 0.5j)  # left half
    assert not fig3.contains(-3.0)
    assert not fig3.contains(0.5j)
    assert not fig3.contains(-1j)
    assert fig3.contains(-1j + 1e-3)


def test_distance_examples(fig3):
    assert abs(fig3.distance_to_exclusions(2.0) - 2.0) < 1e-15
    assert abs(fig3.distance_to_exclusions(-2 + 0.5j) - 0.5) < 1e-15
    assert abs(fig3.distance_to_exclusions(0.3 + 0.5j) - 0.3) < 1e-15


def test_primitive_distances():
    arc = ParamCurve.arc(0, 1, 0, math.pi)
    assert abs(arc.distance(2j) - 1) < 1e-15
    assert abs(arc.distance(-2j) - math.sqrt(5)) < 1e-15  # nearest points are the endpoints +-1
    seg = ParamCurve.segment(0, 1)
    assert abs(seg.distance(2 + 1j) - math.sqrt(2)) < 1e-15
    ray = ParamCurve.ray(0, 1j)
    assert abs(ray.distance(3 + 5j) - 3) < 1e-15
    assert HalfPlane(-1j).distance(-2j) == 0
    assert Disk(0, 1, half="right").distance(0.5j) == 0  # on the diameter
    assert Disk(0, 1, half="right").distance(-1) == 1


def test_trace_distance_interpolates_chords():
    t = np.linspace(0, 1, 3)
    cv = ParamCurve.trace(t + 0j, t)
    assert abs(cv.distance(0.25 + 0.1j) - 0.1) < 1e-15


def test_guard_validation():
    with pytest.raises(ParameterError):
        Region(guard=0.0)
    with pytest.raises(ParameterError):
        build_paper_region("annulus")


@given(st.builds(complex, st.floats(-3, 3), st.floats(-3, 3)), st.floats(1e-9, 1e-3), st.floats(1e-9, 1e-3))
def test_guard_monotone(z, g1, g2):
    lo, hi = sorted((g1, g2))
    r = build_paper_region("fig3")
    if r.with_guard(hi).contains(z):
        assert r.with_guard(lo).contains(z)


def test_window_helpers():
    w = Window.square(2)
    assert w.cell_size(4) == (1.0, 1.0)
    xs, ys, Z = w.centers(4)
    assert Z.shape == (4, 4)
    assert Z[0, 0] == complex(-1.5, -1.5)
    assert w.cell_of(-1.5 - 1.5j, 4) == (0, 0)
    assert w.cell_of(5, 4) is None


def test_fig3_is_connected(fig3):
    comps = connected_components(fig3, (-3, 3, -3, 3), 400)
    assert comps.count == 1


def test_no_exclusions_is_one_component():
    comps = connected_components(Region(), (-1, 1, -1, 1), 32)
    assert comps.count == 1 and comps.sizes == [32 * 32]


def test_a_full_cut_splits_the_window():
    r = Region(curves=(ParamCurve.segment(-5j, 5j),))
    comps = connected_components(r, (-1, 1, -1, 1), 64)
    assert comps.count == 2
    assert comps.label_at(-0.5) != comps.label_at(0.5)


def test_refinement_stability(fig3):
    counts = {connected_components(fig3, (-3, 3, -3, 3), n).count for n in (200, 400, 800)}
    assert counts == {1}


def test_simply_connected_variant():
    r = build_paper_region("upper-half-simply-connected")
    assert r.contains(1 + 1j)
    assert not r.contains(1 - 1j)
    assert not r.contains(-0.2 + 0.5j)
    assert connected_components(r, (-3, 3, -3, 3), 200).count == 1


def _bfs_count(free):
    seen = np.zeros_like(free)
    rows, cols = free.shape
    count = 0
    for i in range(rows):
        for j in range(cols):
            if free[i, j] and not seen[i, j]:
                count += 1
                seen[i, j] = True
                q = deque([(i, j)])
                while q:
                    a, b = q.popleft()
                    for da, db in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                        u, v = a + da, b + db
                        if 0 <= u < rows and 0 <= v < cols and free[u, v] and not seen[u, v]:
                            seen[u, v] = True
                            q.append((u, v))
    return count


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)),
                min_size=1, max_size=4))
def test_flood_fill_matches_plain_bfs(segments):
    segments = [s for s in segments if (s[0], s[1]) != (s[2], s[3])]
    r = Region(curves=tuple(ParamCurve.segment(complex(a, b), complex(c, d)) for a, b, c, d in segments))
    comps = connected_components(r, (-1, 1, -1, 1), 24)
    assert comps.count == _bfs_count(comps.labels > 0)


def test_table_round_trip(fig3):
    arc = ParamCurve.arc(1j, 2.0, 0.1, 1.2)
    tr = ParamCurve.trace([1j, 1 + 2j, 3 + 3j], [0.0, 0.5, 1.0])
    r = fig3.with_curves(arc, tr)
    back = region_from_table(region_to_table(r))
    assert region_to_table(back) == region_to_table(r)
    z = np.array([0.3 + 0.2j, -0.4 + 0.6j, 2 + 2.5j, 1 + 2.0001j])
    assert np.array_equal(back.contains(z), r.contains(z))
    variant = build_paper_region("upper-half-simply-connected")
    assert region_to_table(region_from_table(region_to_table(variant))) == region_to_table(variant)


def test_curve_midway_between_centres_still_blocks():
    # with an even grid on a symmetric window the axis lies exactly half a cell from two rows
    r = Region(curves=(ParamCurve.segment(-5, 5),))
    for n in (20, 64, 200):
        assert connected_components(r, (-4, 4, -4, 4), n).count == 2


@pytest.mark.parametrize("z,inside", [
    (2 + 2j, True), (-1, False), (-1j, False), (0.25j, False), (-0.25 + 0.43j, False),
    (complex(math.cos(math.pi / 4), math.sin(math.pi / 4)), True),
])
def test_membership_examples(fig3, z, inside):
    assert fig3.contains(z) is inside


@pytest.mark.parametrize("z,d", [(1, 1.0), (-2 + 1j, 1.0), (0.5 + 0.5j, 0.5)])
def test_distance_table(fig3, z, d):
    assert abs(fig3.distance_to_exclusions(z) - d) < 1e-15


def test_fig3_connected_on_default_window(fig3):
    assert connected_components(fig3, (-4, 4, -4, 4), 400).count == 1
