"""End-to-end acceptance criteria; each test prints one PASS/FAIL line."""

import math
from fractions import Fraction as F

import numpy as np
import pytest

from gmrawave.cascade import partial_product, scaling_vector, translate_norm_profile
from gmrawave.catalog import JOURNE_S1, JOURNE_S2, ex35, journe_canonical, journe_smooth
from gmrawave.filters import (build_KL, complete_highpass, make_filter_system, validate_system,
                              verify_cross_orth, verify_filter_eq, verify_highpass_eq)
from gmrawave.funcalg import QmfLowpass, indicator
from gmrawave.intervals import IntervalSet
from gmrawave.lattice import make_scheme
from gmrawave.msystems import (JOURNE_P, canonical_journe_msystem, diagonal_phase_loop,
                               journe_loop_element, loop_act, loop_quotient, max_deviation,
                               msystem_from_filters)
from gmrawave.multiplicity import (MultiplicityFn, check_consistency_equation,
                                   check_delta_conditions, conjugate_multiplicity, make_pair)
from gmrawave.wavelet import (box_indicator, cuntz_residuals, frame_sum_direct, frame_sum_FJ,
                              random_hvector, smoothness_proxy, synthesize_wavelets)

GRID = 7 * 2 ** 8
QUARTER_BOX = box_indicator(F(-1, 4), F(1, 4))


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def _max_residual(sys, fns, grid_q=GRID):
    worst = 0.0
    for w in sys.scheme.grid(grid_q):
        for fn in fns:
            worst = max(worst, float(np.max(fn(sys, w), initial=0.0)))
    return worst


def _off_breakpoints(xs, sets, margin=F(1, 10 ** 6)):
    return np.array([all(s.distance_to_boundary(x) > margin for s in sets) for x in xs])


def _random_rationals(n, seed, den=100003):
    rng = np.random.default_rng(seed)
    return [(F(int(k), den),) for k in rng.integers(-(den // 2), den // 2, size=n)]


# ---------------------------------------------------------------------------


def test_criterion_01_ex35_filter_equations(verdict):
    sys = ex35()
    worst = _max_residual(sys, (verify_filter_eq, verify_highpass_eq, verify_cross_orth))
    verdict(1, sys.exact and worst == 0.0,
            f"exact arithmetic={sys.exact}, max residual {worst} over {GRID} grid points")


def test_criterion_02_ex35_cascade(verdict):
    sys = ex35()
    sv = scaling_vector(sys, K=3, gridQ=2 ** 8, kMax=40)
    target = IntervalSet([(F(-1, 4), F(1, 4))])
    xs = [p[0] for p in sv.points]
    keep = _off_breakpoints(xs, [target])
    expected = np.array([1.0 if target.contains(x) else 0.0 for x in xs])
    err = float(np.max(np.abs(sv.values[keep, 0] - expected[keep])))
    ws = synthesize_wavelets(sys, sv)
    psi_ok = ws.psi[0].pieces == indicator([(F(-1, 2), F(-1, 4)), (F(1, 4), F(1, 2))], periodic=False)
    verdict(2, err < 1e-12 and psi_ok, f"phi max error {err:.1e}, psi exact match={psi_ok}")


def test_criterion_03_ex35_parseval(verdict):
    sys = ex35()
    ws = synthesize_wavelets(sys, scaling_vector(sys, K=3, gridQ=2 ** 8, kMax=40))
    fj20 = frame_sum_FJ(ws, QUARTER_BOX, 20)
    fj10 = frame_sum_FJ(ws, QUARTER_BOX, 10)
    direct10 = frame_sum_direct(ws, QUARTER_BOX, 10, zMax=2 ** 14)
    Js = list(range(-4, 11, 2))
    fj_seq = [frame_sum_FJ(ws, QUARTER_BOX, J) for J in Js]
    direct_seq = [frame_sum_direct(ws, QUARTER_BOX, J, zMax=2 ** 12) for J in Js]
    mono = all(a <= b + 1e-15 for seq in (fj_seq, direct_seq) for a, b in zip(seq, seq[1:]))
    ok = 0.5 - 1e-5 <= fj20 <= 0.5 and abs(direct10 - fj10) <= 1e-3 and mono
    verdict(3, ok, f"FJ(20)={fj20!r}, FJ(10)={fj10!r}, direct(10)={direct10:.7f}, monotone={mono}")


def test_criterion_04_journe_canonical(verdict):
    sys = journe_canonical()
    worst = _max_residual(sys, (verify_filter_eq, verify_highpass_eq, verify_cross_orth))
    sv = scaling_vector(sys, K=4, gridQ=2 ** 8, kMax=64)
    phi_sets = [IntervalSet([(F(-4, 7), F(-1, 2)), (F(-2, 7), F(2, 7)), (F(1, 2), F(4, 7))]),
                IntervalSet([(F(-8, 7), F(-1)), (F(1), F(8, 7))])]
    xs = [p[0] for p in sv.points]
    keep = _off_breakpoints(xs, phi_sets)
    phi_err = max(float(np.max(np.abs(sv.values[keep, i] - np.array(
        [1.0 if S.contains(x) else 0.0 for x in xs])[keep]))) for i, S in enumerate(phi_sets))
    ws = synthesize_wavelets(sys, sv)
    psi_set = IntervalSet([(F(-16, 7), F(-2)), (F(-1, 2), F(-2, 7)), (F(2, 7), F(1, 2)), (F(2), F(16, 7))])
    ys = np.array([float(x) for x in xs] + [2 * float(x) for x in xs])
    ys_exact = [F(y) for y in ys]
    psi_keep = _off_breakpoints(ys_exact, [psi_set])
    psi_vals = ws.psi[0].evaluate_many(ys)
    psi_err = float(np.max(np.abs(psi_vals[psi_keep] - np.array(
        [1.0 if psi_set.contains(y) else 0.0 for y in ys_exact])[psi_keep])))
    grid = [F(k, 7 * 2 ** 6) + F(1, 7 * 2 ** 8) for k in range(-7 * 2 ** 5, 7 * 2 ** 5)]
    prof_err = 0.0
    for i, S in ((1, JOURNE_S1), (2, JOURNE_S2)):
        prof = translate_norm_profile(sv, i, 7, grid)
        prof_err = max(prof_err, float(np.max(np.abs(prof - [1.0 if S.contains(w) else 0.0 for w in grid]))))
    ok = worst == 0.0 and phi_err < 1e-12 and psi_err < 1e-12 and prof_err < 1e-10
    verdict(4, ok, f"filter residual {worst}, phi error {phi_err:.1e}, psi error {psi_err:.1e}, "
                   f"profile error {prof_err:.1e}")


def test_criterion_05_journe_smooth(verdict):
    p0 = QmfLowpass()
    xs = np.linspace(-0.5, 0.5, 10 ** 4, endpoint=False)
    qmf = float(np.max(np.abs(np.abs(p0.evaluate_many(xs)) ** 2 + np.abs(p0.evaluate_many(xs + 0.5)) ** 2 - 2)))
    sys = journe_smooth()
    rep = validate_system(sys, GRID)
    filt = max(c.residual for c in rep.checks)
    stable = True
    for (x,) in _random_rationals(200, seed=5, den=1009 * 16):
        x = x * 16
        if x == 0:
            continue
        k0 = max(1, math.floor(math.log2(14 * abs(x)) + 2) + 1)
        ref = partial_product(sys, (x,), k0, shortcut=False).matrix
        for k in range(k0 + 1, 48, 7):
            stable &= bool(np.array_equal(partial_product(sys, (x,), k, shortcut=False).matrix, ref))
    ws = synthesize_wavelets(sys, scaling_vector(sys, K=4, gridQ=2 ** 8, kMax=64))
    fj12 = frame_sum_FJ(ws, QUARTER_BOX, 12)
    proxies = [smoothness_proxy(ws, 0, 2.0 ** -e, 3.0) for e in (8, 9, 10)]
    bounded = max(proxies) < 2 * min(proxies)
    ok = qmf < 1e-12 and filt < 1e-10 and stable and abs(fj12 - 0.5) <= 1e-3 and bounded
    verdict(5, ok, f"QMF residual {qmf:.1e}, filter residual {filt:.1e}, stabilization={stable}, "
                   f"FJ(12)={fj12:.6f}, second-difference proxy {[round(p) for p in proxies]}")


def test_criterion_06_section_unitarity(verdict):
    worst = {}
    pts = _random_rationals(1000, seed=6)
    for sys in (ex35(), journe_canonical(), journe_smooth()):
        worst[sys.name] = max(build_KL(sys, w).defect for w in pts)
    L0 = build_KL(journe_canonical(), (F(0),)).L
    lc = np.array_equal(L0, np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex))
    ok = max(worst.values()) < 1e-10 and lc
    verdict(6, ok, f"unitarity defects {{{', '.join(f'{k}: {v:.1e}' for k, v in worst.items())}}}, "
                   f"L(0) equals L_C={lc}")


def test_criterion_07_cuntz_relations(verdict):
    out = {}
    rng = np.random.default_rng(7)
    samples = _random_rationals(1000, seed=17)
    for sys, tol in ((ex35(), 0.0), (journe_canonical(), 0.0), (journe_smooth(), 1e-12)):
        worst = 0.0
        for _ in range(10):
            res = cuntz_residuals(sys, random_hvector(sys, rng), random_hvector(sys, rng, tilde=True), samples)
            worst = max(worst, max(res.values()))
        out[sys.name] = (worst, tol)
    ok = all(w <= t for w, t in out.values())
    verdict(7, ok, "max residuals " + ", ".join(f"{k}: {w:.1e} (tol {t})" for k, (w, t) in out.items()))


def test_criterion_08_highpass_completion(verdict):
    out = {}
    deterministic = True
    for sys in (ex35(), journe_canonical()):
        G = complete_highpass(sys.scheme, sys.mp, sys.H, GRID)
        G2 = complete_highpass(sys.scheme, sys.mp, sys.H, GRID)
        deterministic &= all(np.array_equal(a.values, b.values) for r1, r2 in zip(G, G2) for a, b in zip(r1, r2))
        done = make_filter_system(sys.scheme, sys.mp, sys.H, G, check_lipschitz=False)
        out[sys.name] = _max_residual(done, (verify_highpass_eq, verify_cross_orth))
    ok = max(out.values()) < 1e-10 and deterministic
    verdict(8, ok, f"residuals {out}, deterministic={deterministic}")


def test_criterion_09_loop_group_action(verdict):
    MJ = canonical_journe_msystem()
    Lp = journe_loop_element()
    target = msystem_from_filters(journe_smooth(highpass_sign=-1))
    rng = np.random.default_rng(9)
    pts = []
    for P, _ in JOURNE_P.values():
        for lo, hi in P:
            width = hi - lo
            pts += [(lo + width * F(int(k), 10 ** 6),) for k in rng.integers(0, 10 ** 6, size=1000 // len(P) + 1)]
    act = max_deviation(loop_act(Lp, MJ), target, pts)
    sub = pts[::4]
    Lq = loop_quotient(MJ, target)
    round_trip = max_deviation(loop_act(Lq, MJ), target, sub)
    self_q = max(loop_quotient(target, target).identity_deviation(w) for w in sub)
    phase = diagonal_phase_loop(MJ.mp, MJ.scheme, [2, -1, 5])
    assoc = max_deviation(loop_act(phase.product(Lp), MJ), loop_act(phase, loop_act(Lp, MJ)), sub)
    ok = max(act, round_trip, self_q, assoc) < 1e-12
    verdict(9, ok, f"action vs smooth filters (high-pass row phase -1) {act:.1e} at {len(pts)} points, "
                   f"round trip {round_trip:.1e}, self quotient {self_q:.1e}, associativity {assoc:.1e}")


def test_criterion_10_multiplicity(verdict):
    scheme = make_scheme(2)
    m = MultiplicityFn.from_sets([JOURNE_S1, JOURNE_S2])
    mt = conjugate_multiplicity(scheme, m)
    one = mt == MultiplicityFn.constant(1)
    eq = check_consistency_equation(make_pair(scheme, m), scheme, GRID).passed
    delta = check_delta_conditions(scheme, m, K=4, nMax=8, P=3).passed
    verdict(10, one and eq and delta, f"complement identically 1={one}, consistency equation={eq}, "
                                      f"Delta conditions at (4, 8, 3)={delta}")
