import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from branchaudit.errors import EmptyInputError, ParameterError
from branchaudit.functions import PhaseParam, rational_F3
from branchaudit.preimage import (PreimageQuery, closed_form_preimage, compare_preimages, eq12_residuals,
                                  f1_cut_curve, f2_cut_curve, f3_preimage_oracle, grid_scan_preimage,
                                  oracle_sweep)
from branchaudit.region import build_paper_region

phases = st.floats(-math.pi + 1e-3, -1e-3).filter(lambda c: abs(c + math.pi / 2) > 1e-3)


def roots_numpy(c, r):
    """Roots of z^2 - (2i + 2r e^{-ic}) z - 1 through numpy's companion matrix."""
    b = 2j + 2 * r * cmath.exp(-1j * c)
    return np.roots([1, -b, -1])


def test_query_validation():
    with pytest.raises(ParameterError):
        PreimageQuery("F4")
    with pytest.raises(ParameterError):
        PreimageQuery("F1", r_max=-1)


def test_closed_form_curves():
    cv = closed_form_preimage(PreimageQuery("F1"))
    assert cv.samples.size == 1000
    assert np.max(np.abs(np.abs(cv.samples - 0.5j) - 0.5)) < 1e-12
    assert f1_cut_curve(1.0) == -0.5 + 0.5j
    assert f2_cut_curve(1.0) == 0.5j
    f3 = closed_form_preimage(PreimageQuery("F3"))
    assert set(f3.samples.tolist()) == {1j, -1j}


def test_oracle_at_r_one():
    outer, inner = f3_preimage_oracle(-math.pi / 4, 1.0)
    ref = sorted(roots_numpy(-math.pi / 4, 1.0), key=abs)
    assert abs(outer - ref[1]) < 1e-12 and abs(inner - ref[0]) < 1e-12
    assert abs(outer - (1.5389 + 3.1583j)) < 1e-4
    # the inner root lies inside the excluded left half-disk
    assert not build_paper_region("fig3").contains(inner)


def test_oracle_at_r_zero_is_double_root_i():
    outer, inner = f3_preimage_oracle(-math.pi / 4, 0.0)
    assert abs(outer - 1j) < 1e-15 and abs(inner - 1j) < 1e-15


def test_oracle_asymptotics():
    r, c = 100.0, -math.pi / 4
    outer, inner = f3_preimage_oracle(c, r)
    assert abs(outer / (2 * r * cmath.exp(-1j * c)) - 1) < 0.02
    assert abs(inner * 2 * r * cmath.exp(-1j * c) + 1) < 0.02


@given(phases, st.floats(0, 1e4))
def test_oracle_back_substitution_and_vieta(c, r):
    outer, inner = f3_preimage_oracle(c, r)
    assert abs(outer * inner + 1) < 1e-12
    for z in (outer, inner):
        assert abs(rational_F3(z, c) + r) < 1e-10 * (1 + r)


def test_oracle_rejects_negative_r():
    with pytest.raises(ParameterError):
        f3_preimage_oracle(-math.pi / 4, -1.0)


def test_oracle_sweep_shapes():
    outer, inner = oracle_sweep(PhaseParam(), [0.0, 1.0, 2.0])
    assert outer.shape == inner.shape == (3,)


def test_eq12_examples():
    # z = i at r = 0: s = 1, theta = pi/2
    e1, e2 = eq12_residuals(1.0, math.pi / 2, -math.pi / 4, 0.0)
    assert abs(e1) < 1e-15 and abs(e2) < 1e-15
    z, _ = f3_preimage_oracle(-math.pi / 4, 1.0)
    e1, e2 = eq12_residuals(abs(z), cmath.phase(z), -math.pi / 4, 1.0)
    assert abs(e1) < 1e-9 and abs(e2) < 1e-9
    assert math.sin(cmath.phase(z)) != 0
    # a point off the preimage gives a nonzero residual
    e1, e2 = eq12_residuals(2.0, 0.3, -math.pi / 4, 1.0)
    assert max(abs(e1), abs(e2)) > 0.1
    with pytest.raises(ParameterError):
        eq12_residuals(0.0, 0.3, -math.pi / 4, 1.0)


@pytest.mark.parametrize("fid", ["F1", "F2"])
def test_scan_agrees_with_closed_form(fid):
    scan = grid_scan_preimage(fid, window=(-2, 2, -2, 2), n=800, tol=0.005)
    d = compare_preimages(closed_form_preimage(PreimageQuery(fid)), scan)
    assert d < 2 * scan.cell


def test_identity_scan_is_the_negative_axis():
    scan = grid_scan_preimage("identity", window=(-2, 2, -2, 2), n=64)
    assert scan.points.size > 0
    assert np.all(scan.points.real < scan.tol)
    assert np.all(np.abs(scan.points.imag) < scan.tol)


def test_f3_scan_far_from_two_points():
    scan = grid_scan_preimage("F3", -math.pi / 4, (-2, 2, -2, 2), 800)
    d = compare_preimages(closed_form_preimage(PreimageQuery("F3")), scan)
    assert d > 10 * scan.cell
    inside = build_paper_region("fig3").contains(scan.points)
    assert inside.sum() > 0


def test_scan_validation_and_empty_compare():
    with pytest.raises(ParameterError):
        grid_scan_preimage("F1", n=16)
    with pytest.raises(EmptyInputError):
        compare_preimages(closed_form_preimage(PreimageQuery("F1")), np.array([], dtype=complex))


def test_cut_curve_examples():
    z = f1_cut_curve(1.0)
    assert z == (-1 + 1j) / 2 and abs(abs(z - 0.5j) - 0.5) < 1e-15
    assert f1_cut_curve(0.0) == 0


def test_eq12_nonpreimage_example():
    e1, e2 = eq12_residuals(1.0, 0.0, -math.pi / 4, 0.0)
    assert abs(e1) > 0.1 or abs(e2) > 0.1


def test_f2_scan_stays_on_segment():
    scan = grid_scan_preimage("F2", window=(-2, 2, -2, 2), n=800, tol=0.005)
    assert np.all(np.abs(scan.points.real) < 2 * scan.cell)
    assert np.all((scan.points.imag > -2 * scan.cell) & (scan.points.imag < 1))


def test_f3_scan_runs_through_oracle_root_to_edge():
    scan = grid_scan_preimage("F3", -math.pi / 4, (-4, 4, -4, 4), 400)
    assert np.min(np.abs(scan.points - (1.5389 + 3.1583j))) < 2 * scan.cell
    assert np.max(scan.points.imag) > 4 - 2 * scan.cell
