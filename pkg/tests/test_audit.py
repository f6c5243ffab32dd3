import cmath
import math

import numpy as np
import pytest

from branchaudit import audit, core
from branchaudit.errors import AuditFailure, ParameterError, SpuriousBracketError
from branchaudit.functions import PhaseParam, make_f, rational_F3
from branchaudit.preimage import f3_preimage_oracle


@pytest.fixture(scope="module")
def trace():
    return audit.trace_discontinuity_curve(PhaseParam(), (-6, 6, -6, 6), 1.8726 + 3.5346j)


def test_cr_residual_examples():
    assert audit.cr_residual(lambda z: z * z, 1 + 2j) < 1e-8
    assert abs(audit.cr_residual(np.conj, 1 + 2j) - 2) < 1e-8  # d conj/dx + i d conj/dy = 2
    assert audit.cr_residual(make_f(), 2 + 2j) < 1e-6
    with pytest.raises(ParameterError):
        audit.cr_residual(np.exp, 1.0, h=0.0)


def test_cr_residual_of_a_cubic_is_the_stencil_error():
    # the two centred differences err by +-h^2 g'''/6; combined: h^2 g'''/3 = 2 h^2 for z^3
    for h in (1e-2, 5e-3):
        assert abs(audit.cr_residual(lambda z: z ** 3, 1 + 1j, h=h) / (2 * h * h) - 1) < 1e-6


def test_cr_residual_of_squared_modulus():
    # d/dx + i d/dy of z conj(z) is 2z
    assert abs(audit.cr_residual(lambda z: z * np.conj(z), 1.5, h=1e-4) - 3) < 1e-8


def test_path_helpers():
    p = audit.segment_path(0, 1, step=0.25)
    assert np.allclose(p.samples(), [0, 0.25, 0.5, 0.75, 1])
    arc = audit.arc_path(1, 0, math.pi, step=0.1)
    assert np.all(np.abs(np.abs(arc.samples()) - 1) < 1e-12)
    with pytest.raises(ParameterError):
        audit.Path((1j,), 0.1)


def test_path_scan_across_the_negative_axis():
    scan = audit.path_scan(core.pln, audit.segment_path(-1 + 1j, -1 - 1j, step=1e-2))
    assert len(scan.jumps) == 1
    assert abs(scan.jumps[0].value + 2j * math.pi) < 1e-2


def test_path_scan_continuous_function():
    scan = audit.path_scan(np.exp, audit.segment_path(0, 1, 1e-3))
    assert scan.jumps == [] and scan.gaps == []


def test_path_scan_reports_domain_gaps():
    scan = audit.path_scan(make_f(), audit.segment_path(0.5j, 1.5j, step=0.1))
    assert any(abs(a - 1j) < 1e-12 or abs(b - 1j) < 1e-12 for a, b in scan.gaps)


def test_f_jumps_once_on_radius_four():
    scan = audit.path_scan(make_f(), audit.arc_path(4, 0.3, 2.8))
    assert len(scan.jumps) == 1
    assert abs(scan.jumps[0].magnitude - 2 * math.pi) < 1e-6


def test_bisect_pln_on_negative_axis():
    cr = audit.bisect_discontinuity(core.pln, -2 + 1j, -2 - 1j)
    assert abs(cr.point + 2) < 1e-9
    assert abs(abs(cr.jump) - 2 * math.pi) < 1e-6


def test_bisect_names_f3():
    f = make_f()
    cr = audit.bisect_discontinuity(f, 4 * cmath.exp(1.0j), 4 * cmath.exp(1.2j))
    assert cr.crossed == "F3"
    assert cr.cut_distance < 1e-8


def test_spurious_bracket():
    with pytest.raises(SpuriousBracketError):
        audit.bisect_discontinuity(np.exp, 0, 1)


def test_trace_lies_on_oracle_roots(trace):
    assert trace.flags["ends"] == ("reached-i", "exited")
    assert not trace.flags["partial"]
    assert trace.samples[0] == 1j
    # every sample is the oracle root at its own cut parameter
    for z, r in zip(trace.samples[1::25], trace.ts[1::25]):
        outer, _ = f3_preimage_oracle(PhaseParam(), r)
        assert abs(z - outer) < 1e-9 * max(1, abs(z))
    # between samples the polyline stays within the chord sagitta
    for r in (0.1, 0.5, 1.0, 2.0, 2.5):
        outer, _ = f3_preimage_oracle(PhaseParam(), r)
        assert trace.distance(outer) < 1e-4
    pts = trace.samples[1:]
    w = rational_F3(pts)
    assert np.max(np.abs(w.imag) / np.maximum(1, np.abs(w))) < 1e-11
    assert np.all(w.real < 0)
    assert np.all(np.diff(trace.ts) > 0)


def test_trace_depends_on_c():
    p = PhaseParam(-3 * math.pi / 4)
    outer, _ = f3_preimage_oracle(p, 2.0)
    tr = audit.trace_discontinuity_curve(p, (-6, 6, -6, 6), outer)
    assert tr.samples[0] == 1j
    other, _ = f3_preimage_oracle(PhaseParam(), 2.0)
    assert tr.distance(other) > 0.5


def test_trace_rejects_off_locus_seed():
    with pytest.raises(ParameterError):
        audit.trace_discontinuity_curve(PhaseParam(), (-6, 6, -6, 6), 3 - 3j)


def test_isolated_zero_of_square():
    rep = audit.isolated_zero_audit(lambda z: z * z, None, (-1, 1, -1, 1), 64)
    assert len(rep) == 1
    rec = rep.records[0]
    assert abs(rec.location) < 1e-4 and rec.isolated


def test_isolated_zeros_of_sine():
    rep = audit.isolated_zero_audit(np.sin, None, (-1, 4, -1, 1), 64)
    locs = sorted(r.location.real for r in rep)
    assert len(locs) == 2
    assert abs(locs[0]) < 1e-6 and abs(locs[1] - math.pi) < 1e-6
    assert all(r.isolated for r in rep)


def test_f_zero_set_is_not_isolated():
    from branchaudit.region import build_paper_region

    rep = audit.isolated_zero_audit(make_f(), build_paper_region(), (-2, 2, -2, 2), 64)
    assert len(rep) >= 1
    assert not any(r.isolated for r in rep)


def test_constant_function_has_one_component_without_trace():
    rep = audit.component_constancy_audit(func=lambda z: np.zeros_like(np.asarray(z, dtype=complex)),
                                          window=(-3, 3, -3, 3), n=200)
    assert rep.component_count == 1 and rep.traces == []
    assert rep.constant


def test_audit_failure_carries_report():
    with pytest.raises(AuditFailure) as info:
        audit.component_constancy_audit(window=(-3, 3, -3, 3), n=200, exclude_trace=False)
    assert info.value.report.component_count == 1


def test_small_grid_rejected():
    with pytest.raises(ParameterError):
        audit.component_constancy_audit(n=100)


def test_cr_examples_at_default_step():
    assert audit.cr_residual(lambda z: z * z, 1 + 1j, 1e-5) < 1e-8
    assert 0.5 < audit.cr_residual(np.conj, 1, 1e-5) < 3
    assert audit.cr_residual(make_f(-math.pi / 4), 2 + 2j, 1e-5) < 1e-6


def test_no_jumps_on_lower_arc_or_for_exp():
    assert audit.path_scan(make_f(), audit.arc_path(1, 0.1, 1.4)).jumps == []
    assert audit.path_scan(core.c_exp, audit.segment_path(-3 - 3j, 3 + 5j, 1e-2)).jumps == []


def test_bisect_near_oracle_root():
    root, _ = f3_preimage_oracle(PhaseParam(), 1.0)
    cr = audit.bisect_discontinuity(make_f(), root - 0.05, root + 0.05)
    w = rational_F3(cr.point)
    assert w.real < 0 and abs(w.imag) < 1e-8
    assert abs(cr.point - root) < 0.05


def test_trace_from_r_one_seed():
    root, _ = f3_preimage_oracle(PhaseParam(), 1.0)
    tr = audit.trace_discontinuity_curve(PhaseParam(), (-6, 6, -6, 6), root)
    assert tr.samples[0] == 1j and tr.flags["ends"][1] == "exited"
    assert tr.distance(root) < 1e-12


def test_sine_zeros_on_wide_strip():
    rep = audit.isolated_zero_audit(core.c_sin, None, (-7, 7, -1, 1), 128)
    locs = sorted(round(r.location.real / math.pi) for r in rep)
    assert locs == [-2, -1, 0, 1, 2]
    assert all(r.isolated for r in rep)
    assert all(abs(r.location - round(r.location.real / math.pi) * math.pi) < 1e-6 for r in rep)
