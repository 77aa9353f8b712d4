"""Command-line driver.

Every subcommand writes ``report.txt`` and ``report.json`` to the output
directory (plus CSV data and plot-script stubs where relevant) and exits
with 0 when all checks pass, 1 when a check fails and 2 on configuration
errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (ConfigError, ConsistencyViolated, GmraError, InitialConditionViolated,
                     LipschitzSuspect, LowPassViolation, NonConvergent, SupportViolation)
from .report import Report, config_digest

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
PC_TOL = 1e-12
# failures of these are reported as checks by ``validate`` rather than as config errors
CONSTRUCTION_CHECKS = (SupportViolation, LowPassViolation, LipschitzSuspect, ConsistencyViolated)


class _ConfigFailure(Exception):
    pass


def _load_system(ref):
    from .config import build_system
    try:
        return build_system(ref)
    except GmraError as e:
        raise _ConfigFailure(f"{type(e).__name__}: {e}") from None


def _spec_hash(*refs) -> str:
    from .config import load_spec
    try:
        return config_digest([load_spec(r) for r in refs])
    except ConfigError:
        return config_digest([str(r) for r in refs])


def _write_report(rep: Report, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(rep.to_json() + "\n")
    (out / "report.txt").write_text(rep.to_text())
    print(rep.to_text(), end="")


def _write_csv(path: Path, xs, columns: dict) -> None:
    """Columns: x as decimal, x as ``p/q``, then ``re_<name>``, ``im_<name>`` per function."""
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        header = ["x", "x_exact"]
        for name in columns:
            header += [f"re_{name}", f"im_{name}"]
        w.writerow(header)
        for t, x in enumerate(xs):
            row = [repr(float(x)), str(Fraction(x))]
            for vals in columns.values():
                v = complex(vals[t])
                row += [repr(v.real), repr(v.imag)]
            w.writerow(row)


def _write_plot_stub(path: Path, csv_name: str, title: str) -> None:
    path.write_text(
        "import csv\n"
        "import sys\n\n"
        "import matplotlib.pyplot as plt\n\n"
        f"rows = list(csv.DictReader(open({csv_name!r})))\n"
        "x = [float(r['x']) for r in rows]\n"
        "for key in rows[0]:\n"
        "    if key.startswith('re_'):\n"
        "        plt.plot(x, [float(r[key]) for r in rows], label=key)\n"
        f"plt.title({title!r})\n"
        "plt.legend()\n"
        "plt.savefig(sys.argv[1] if len(sys.argv) > 1 else "
        f"{csv_name.replace('.csv', '.png')!r})\n"
    )


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> Report:
    from .config import build_system, canonical_of
    from .filters import build_KL, lipschitz_estimate, validate_system
    from .multiplicity import check_consistency_equation

    rep = Report("validate", config_hash=_spec_hash(args.system))
    try:
        system = build_system(args.system)
    except CONSTRUCTION_CHECKS as e:
        rep.add("system construction", False, detail=f"{type(e).__name__}: {e}")
        return rep
    except GmraError as e:
        raise _ConfigFailure(f"{type(e).__name__}: {e}") from None
    rep.extend(validate_system(system, args.grid))
    rep.extend(check_consistency_equation(system.mp, system.scheme, args.grid or 7 * 2 ** 8))
    rep.data["lipschitz_estimate"] = lipschitz_estimate(system)
    rep.data["flat_radius"] = system.flat_radius
    canonical = canonical_of(args.system)
    if canonical is not None:
        from .msystems import msystem_from_filters
        try:
            msystem_from_filters(system, canonical=canonical)
            rep.add("initial conditions", True, 0.0, 0.0)
        except InitialConditionViolated as e:
            rep.add("initial conditions", False, detail=str(e))
    origin = system.scheme.point(0)
    rep.data["L_at_origin"] = build_KL(system, origin).L.real.round(15).tolist()
    return rep


def cmd_cascade(args) -> Report:
    from .cascade import refinement_residual, scaling_vector

    system = _load_system(args.system)
    rep = Report("cascade", config_hash=_spec_hash(args.system))
    try:
        sv = scaling_vector(system, args.K, args.grid, args.kmax)
    except NonConvergent as e:
        rep.add("cascade convergence", False, location=e.witness, detail=str(e))
        return rep
    final = float(np.max(sv.increments[-1]))
    rep.add("cascade convergence", True, final, 1e-8)
    res = refinement_residual(system, sv)
    rep.add("refinement equation", res <= 1e-10, res, 1e-10)
    zero = sv.evaluate(system.scheme.point(0))
    target = np.zeros(system.c)
    target[0] = 1
    dev0 = float(np.max(np.abs(zero - target)))
    rep.add("value at origin", dev0 <= 1e-12, dev0, 1e-12)
    rep.data["max_stabilization_depth"] = int(sv.stabilized_at.max())
    if sv.exact_pieces is not None:
        rep.data["exact_pieces"] = [repr(f) for f in sv.exact_pieces]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if system.scheme.d == 1:
        xs = [p[0] for p in sv.points]
        _write_csv(out / "phi.csv", xs, {f"phi{i + 1}": sv.values[:, i] for i in range(system.c)})
        _write_plot_stub(out / "plot_phi.py", "phi.csv", "scaling vector")
    return rep


def cmd_wavelet(args) -> Report:
    from .cascade import box_points, scaling_vector
    from .wavelet import synthesize_wavelets

    system = _load_system(args.system)
    rep = Report("wavelet", config_hash=_spec_hash(args.system))
    ws = synthesize_wavelets(system, scaling_vector(system, args.K, args.grid, args.kmax))
    xs = [p[0] for p in box_points(system, args.K + 1, args.grid)]
    fx = np.array([float(x) for x in xs])
    cols = {f"psi{k + 1}": ws.psi[k].evaluate_many(fx) for k in range(len(ws.psi))}
    at0 = max((abs(complex(p.value(0))) for p in ws.psi), default=0.0)
    rep.add("psi vanishes at the origin", at0 <= 1e-12, at0, 1e-12)
    if ws.phi.exact_pieces is not None:
        for i, f in enumerate(ws.phi.exact_pieces):
            rep.data[f"phi{i + 1}"] = repr(f)
    for k, p in enumerate(ws.psi):
        if p.pieces is not None:
            rep.data[f"psi{k + 1}"] = repr(p.pieces)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "psi.csv", xs, cols)
    _write_plot_stub(out / "plot_psi.py", "psi.csv", "wavelets")
    return rep


def _parse_f(text: str):
    from .wavelet import box_indicator
    if text == "boxquarter":
        return box_indicator(Fraction(-1, 4), Fraction(1, 4))
    if ":" in text:
        from .lattice import parse_rational
        lo, hi = text.split(":", 1)
        return box_indicator(parse_rational(lo), parse_rational(hi))
    raise _ConfigFailure(f"unknown test function {text!r} (use boxquarter or lo:hi)")


def cmd_parseval(args) -> Report:
    from .cascade import scaling_vector
    from .wavelet import frame_sum_direct, frame_sum_FJ, norm_squared, synthesize_wavelets

    system = _load_system(args.system)
    fhat = _parse_f(args.f)
    rep = Report("parseval", config_hash=_spec_hash(args.system))
    ws = synthesize_wavelets(system, scaling_vector(system, args.K, args.grid, args.kmax))
    fj = frame_sum_FJ(ws, fhat, args.J)
    direct = frame_sum_direct(ws, fhat, args.J, args.nmin, args.zmax)
    norm = norm_squared(fhat)
    rep.data.update({"frame_sum_FJ": fj, "frame_sum_direct": direct, "norm_squared": norm,
                     "gap": norm - fj})
    rep.add("FJ route bounded by the norm", fj <= norm + 1e-12, max(0.0, fj - norm), 1e-12)
    rep.add("routes agree", abs(fj - direct) <= 1e-3, abs(fj - direct), 1e-3)
    return rep


def cmd_cuntz(args) -> Report:
    from .wavelet import cuntz_residuals, random_hvector

    system = _load_system(args.system)
    rep = Report("cuntz", config_hash=_spec_hash(args.system))
    rng = np.random.default_rng(args.seed)
    den = 7 * 2 ** 10 + 1
    samples = [system.scheme.point(Fraction(int(k), den))
               for k in rng.integers(-(den // 2), den // 2 + 1, size=args.samples)]
    tol = 0.0 if system.exact else PC_TOL
    worst = {}
    for _ in range(args.vectors):
        f = random_hvector(system, rng)
        ft = random_hvector(system, rng, tilde=True)
        for name, v in cuntz_residuals(system, f, ft, samples).items():
            worst[name] = max(worst.get(name, 0.0), v)
    for name, v in worst.items():
        rep.add(name, v <= tol, v, tol)
    return rep


def cmd_complete_highpass(args) -> Report:
    from .config import format_spec, load_spec, sampled_spec
    from .filters import FilterSystem, complete_highpass, validate_system

    system = _load_system(args.system)
    rep = Report("complete-highpass", config_hash=_spec_hash(args.system))
    G = complete_highpass(system.scheme, system.mp, system.H, args.grid)
    done = FilterSystem(system.scheme, system.mp, system.H, G, system.name + "_completed")
    rep.extend(validate_system(done, args.grid))
    spec = dict(load_spec(args.system))
    spec["name"] = done.name
    spec["G"] = [[sampled_spec(g) for g in row] for row in G]
    spec.pop("canonical", None)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "completed.cfg").write_text(format_spec(spec))
    return rep


def cmd_loop_act(args) -> Report:
    from .config import build_loop, format_spec, load_spec
    from .filters import validate_system
    from .msystems import filters_from_msystem, loop_act, msystem_from_filters

    base = _load_system(args.system)
    try:
        L = build_loop(args.loop)
    except GmraError as e:
        raise _ConfigFailure(str(e)) from None
    rep = Report("loop-act", config_hash=_spec_hash(args.loop, args.system))
    origin = base.scheme.point(0)
    dev = L.identity_deviation(origin)
    rep.add("loop is the identity at the origin", dev <= 1e-12, dev, 1e-12)
    grid = base.scheme.grid(args.grid)
    defect = max(L.unitarity_defect(w) for w in grid)
    rep.add("loop unitarity", defect <= 1e-10, defect, 1e-10)
    result = filters_from_msystem(loop_act(L, msystem_from_filters(base)), "loop_act")
    rep.extend(validate_system(result, args.grid), prefix="result: ")
    spec = {"kind": "loop_act", "name": "loop_act", "loop": load_spec(args.loop),
            "system": load_spec(args.system)}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "result.cfg").write_text(format_spec(spec))
    return rep


def cmd_loop_quotient(args) -> Report:
    from .config import format_spec, load_spec
    from .msystems import loop_act, loop_quotient, max_deviation, msystem_from_filters

    a = msystem_from_filters(_load_system(args.source))
    b = msystem_from_filters(_load_system(args.target))
    rep = Report("loop-quotient", config_hash=_spec_hash(args.source, args.target))
    L = loop_quotient(a, b)
    grid = a.scheme.grid(args.grid)
    dev0 = L.identity_deviation(a.scheme.point(0))
    rep.add("quotient is the identity at the origin", dev0 <= 1e-12, dev0, 1e-12)
    defect = max(L.unitarity_defect(w) for w in grid)
    rep.add("quotient unitarity", defect <= 1e-10, defect, 1e-10)
    rt = max_deviation(loop_act(L, a), b, grid)
    rep.add("round trip", rt <= 1e-12, rt, 1e-12)
    spec = {"kind": "loop", "name": "quotient", "type": "loop_quotient",
            "from": load_spec(args.source), "to": load_spec(args.target)}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "quotient.cfg").write_text(format_spec(spec))
    return rep


def export_examples(outdir) -> list:
    from .config import format_spec
    from .examples_data import EXAMPLE_CONFIGS, EXPORTED

    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in EXPORTED:
        p = out / f"{name}.cfg"
        p.write_text(format_spec(EXAMPLE_CONFIGS[name]))
        paths.append(p)
    return paths


def cmd_export_examples(args) -> Report:
    rep = Report("export-examples")
    for p in export_examples(args.out):
        rep.add(f"wrote {p.name}", True)
    return rep


# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gmrawave", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, system=True):
        sp = sub.add_parser(name)
        sp.set_defaults(fn=fn)
        sp.add_argument("--out", default="gmra_out", help="output directory")
        if system:
            sp.add_argument("--system", required=True, help="system config path or built-in name")
        return sp

    sp = add("validate", cmd_validate)
    sp.add_argument("--grid", type=int, default=None, help="grid denominator (default 7*2^8 in 1-D)")

    for name, fn in (("cascade", cmd_cascade), ("wavelet", cmd_wavelet)):
        sp = add(name, fn)
        sp.add_argument("--K", type=int, default=4)
        sp.add_argument("--grid", type=int, default=256)
        sp.add_argument("--kmax", type=int, default=64)

    sp = add("parseval", cmd_parseval)
    sp.add_argument("--f", default="boxquarter")
    sp.add_argument("--J", type=int, default=20)
    sp.add_argument("--nmin", type=int, default=-30)
    sp.add_argument("--zmax", type=int, default=2 ** 14)
    sp.add_argument("--K", type=int, default=4)
    sp.add_argument("--grid", type=int, default=256)
    sp.add_argument("--kmax", type=int, default=64)

    sp = add("cuntz", cmd_cuntz)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--vectors", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("complete-highpass", cmd_complete_highpass)
    sp.add_argument("--grid", type=int, default=7 * 2 ** 8)

    sp = add("loop-act", cmd_loop_act)
    sp.add_argument("--loop", required=True)
    sp.add_argument("--grid", type=int, default=256)

    sp = add("loop-quotient", cmd_loop_quotient, system=False)
    sp.add_argument("--from", dest="source", required=True)
    sp.add_argument("--to", dest="target", required=True)
    sp.add_argument("--grid", type=int, default=256)

    add("export-examples", cmd_export_examples, system=False)
    return p


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        rep = args.fn(args)
    except (_ConfigFailure, ConfigError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except GmraError as e:
        rep = Report(args.command)
        rep.add(type(e).__name__, False, detail=str(e))
    _write_report(rep, Path(args.out))
    return EXIT_OK if rep.passed else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
