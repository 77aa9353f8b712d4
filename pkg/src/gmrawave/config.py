"""Strict JSON configuration files for systems and loop elements.

Geometry (interval endpoints, epsilons, shifts) must be written as exact
``"p/q"`` strings; floats are accepted only for filter values.  Any string
where a config is expected names either a built-in example or a file path.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .exact import ExactValue
from .filters import FilterSystem, make_filter_system
from .funcalg import Masked, PiecewiseFn, QmfHighpass, QmfLowpass, Sampled, Scaled, Shifted, ZeroFn
from .intervals import IntervalSet
from .lattice import format_rational, make_scheme, parse_rational
from .multiplicity import MultiplicityFn, make_pair


def _keys(obj: dict, required=(), optional=(), where="config"):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise ConfigError(f"{where}: missing keys {missing}")


def _rat(v, where) -> Fraction:
    try:
        return parse_rational(v)
    except ConfigError as e:
        raise ConfigError(f"{where}: {e}") from None


def parse_value(v, N: int = 2):
    """Filter value: ``"sqrt2"``, ``"-sqrtN"``, ``"p/q"``, an int, a float or ``{"re", "im"}``."""
    if isinstance(v, dict):
        _keys(v, optional=("re", "im"), where="value")
        re, im = v.get("re", 0), v.get("im", 0)
        if all(isinstance(t, (int, str)) for t in (re, im)):
            return ExactValue.rational(_rat(str(re), "value"), _rat(str(im), "value"))
        return complex(float(re), float(im))
    if isinstance(v, bool):
        raise ConfigError("value: booleans are not values")
    if isinstance(v, int):
        return ExactValue.rational(v)
    if isinstance(v, float):
        return complex(v)
    if isinstance(v, str):
        s = v.strip()
        sign = 1
        if s.startswith("-"):
            sign, s = -1, s[1:]
        if s.startswith("sqrt"):
            arg = s[4:]
            if arg == "N":
                root = ExactValue.sqrt(N)
            else:
                root = ExactValue.sqrt(_rat(arg.strip("()"), "value"))
            return root * sign
        return ExactValue.rational(sign * _rat(s, "value"))
    raise ConfigError(f"value: cannot parse {v!r}")


def _intervals(spec, where) -> IntervalSet:
    out = []
    for item in spec:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise ConfigError(f"{where}: intervals are [lo, hi] pairs")
        out.append((_rat(item[0], where), _rat(item[1], where)))
    return IntervalSet(out)


def parse_filter(spec, N: int = 2, d: int = 1):
    if isinstance(spec, str) and spec == "zero":
        return ZeroFn(d)
    _keys(spec, required=("type",), optional=("pieces", "epsilon", "shift", "mask", "scale",
                                                "den", "re", "im"), where="filter")
    kind = spec["type"]
    if kind == "zero":
        return ZeroFn(d)
    if kind == "piecewise":
        pieces = []
        for p in spec.get("pieces", []):
            _keys(p, required=("lo", "hi", "value"), optional=("pm",), where="piece")
            lo, hi = _rat(p["lo"], "piece"), _rat(p["hi"], "piece")
            val = parse_value(p["value"], N)
            if p.get("pm"):
                if lo >= hi or lo < 0:
                    raise ConfigError(f"piece: symmetric pair needs 0 <= lo < hi, got {lo}, {hi}")
                pieces += [(-hi, -lo, val), (lo, hi, val)]
            else:
                pieces.append((lo, hi, val))
        return _finish(PiecewiseFn(pieces, 0, periodic=True), spec, N)
    if kind in ("smooth_qmf", "smooth_qmf_highpass"):
        eps = _rat(spec.get("epsilon", "1/100"), "epsilon")
        base = QmfLowpass(eps)
        if kind == "smooth_qmf_highpass":
            base = QmfHighpass(base)
        return _finish(base, spec, N)
    if kind == "sampled":
        den = int(spec["den"])
        re = np.asarray(spec["re"], dtype=float)
        im = np.asarray(spec.get("im", np.zeros_like(re)), dtype=float)
        return Sampled(den, (re + 1j * im).reshape((den,) * d), d)
    raise ConfigError(f"filter: unknown type {kind!r}")


def _finish(f, spec, N):
    if "shift" in spec:
        f = Shifted(f, _rat(spec["shift"], "shift"))
    if "mask" in spec:
        f = Masked(f, _intervals(spec["mask"], "mask"))
    if "scale" in spec:
        f = Scaled(f, parse_value(spec["scale"], N))
    return f


def parse_scheme(spec):
    if isinstance(spec, dict):
        _keys(spec, required=("A",), where="scheme")
        spec = spec["A"]
    return make_scheme(spec)


def parse_multiplicity(spec, d: int = 1) -> MultiplicityFn:
    if isinstance(spec, int):
        return MultiplicityFn.constant(spec, d)
    _keys(spec, optional=("constant", "pieces", "sets"), where="multiplicity")
    if "constant" in spec:
        return MultiplicityFn.constant(int(spec["constant"]), d)
    if "pieces" in spec:
        return MultiplicityFn(1, pieces=[(_rat(lo, "m"), _rat(hi, "m"), int(v)) for lo, hi, v in spec["pieces"]])
    if "sets" in spec:
        return MultiplicityFn.from_sets([_intervals(s, "sets") for s in spec["sets"]])
    raise ConfigError("multiplicity: give constant, pieces or sets")


# ---------------------------------------------------------------------------


def load_spec(ref) -> dict:
    """Resolve a built-in name, a path, or an already parsed object."""
    if isinstance(ref, dict):
        return ref
    if isinstance(ref, (str, Path)):
        from .examples_data import EXAMPLE_CONFIGS
        name = str(ref)
        path = Path(name)
        if name in EXAMPLE_CONFIGS:
            return EXAMPLE_CONFIGS[name]
        if not path.exists():
            if path.suffix == ".cfg" and path.stem in EXAMPLE_CONFIGS:
                return EXAMPLE_CONFIGS[path.stem]
            raise ConfigError(f"no such config or built-in example: {name}")
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(f"{name}: invalid JSON ({e})") from None
    raise ConfigError(f"cannot load config from {ref!r}")


SYSTEM_KEYS = ("kind", "name", "scheme", "multiplicity", "m_tilde", "H", "G", "canonical")


def build_system(ref) -> FilterSystem:
    spec = load_spec(ref)
    kind = spec.get("kind", "system")
    if kind == "loop_act":
        return _build_loop_act(spec)
    if kind != "system":
        raise ConfigError(f"expected a system config, got kind {kind!r}")
    _keys(spec, required=("scheme", "multiplicity", "H", "G"), optional=SYSTEM_KEYS, where="system")
    scheme = parse_scheme(spec["scheme"])
    m = parse_multiplicity(spec["multiplicity"], scheme.d)
    mt = parse_multiplicity(spec["m_tilde"], scheme.d) if "m_tilde" in spec else None
    mp = make_pair(scheme, m, mt)
    N = scheme.N
    H = [[parse_filter(f, N, scheme.d) for f in row] for row in spec["H"]]
    G = [[parse_filter(f, N, scheme.d) for f in row] for row in spec["G"]]
    return make_filter_system(scheme, mp, H, G, name=spec.get("name", ""))


def canonical_of(ref):
    spec = load_spec(ref)
    if "canonical" in spec:
        return build_system(spec["canonical"])
    return None


def _build_loop_act(spec) -> FilterSystem:
    from .msystems import filters_from_msystem, loop_act, msystem_from_filters
    _keys(spec, required=("kind", "loop", "system"), optional=("name", "canonical"), where="loop_act")
    base = build_system(spec["system"])
    L = build_loop(spec["loop"])
    M = loop_act(L, msystem_from_filters(base))
    return filters_from_msystem(M, spec.get("name", "loop_act"))


def build_loop(ref):
    from .msystems import (diagonal_phase_loop, identity_loop, journe_loop_element, loop_quotient,
                           msystem_from_filters)
    spec = load_spec(ref)
    _keys(spec, required=("kind", "type"), optional=("epsilon", "row_phase", "frequencies", "from",
                                                      "to", "factors", "system", "name"), where="loop")
    if spec["kind"] != "loop":
        raise ConfigError(f"expected a loop config, got kind {spec['kind']!r}")
    kind = spec["type"]
    if kind == "journe_loop":
        eps = _rat(spec.get("epsilon", "1/100"), "epsilon")
        phase = spec.get("row_phase", "auto")
        if phase != "auto":
            phase = complex(parse_value(phase))
        return journe_loop_element(QmfLowpass(eps), phase)
    if kind in ("identity", "diagonal_phase"):
        sys = build_system(spec.get("system", "journe_canonical"))
        if kind == "identity":
            return identity_loop(sys.mp, sys.scheme)
        return diagonal_phase_loop(sys.mp, sys.scheme, spec.get("frequencies", [1]))
    if kind == "loop_quotient":
        a = msystem_from_filters(build_system(spec["from"]))
        b = msystem_from_filters(build_system(spec["to"]))
        return loop_quotient(a, b)
    if kind == "product":
        factors = [build_loop(f) for f in spec["factors"]]
        if not factors:
            raise ConfigError("product: no factors")
        out = factors[0]
        for f in factors[1:]:
            out = out.product(f)
        return out
    raise ConfigError(f"loop: unknown type {kind!r}")


def format_spec(spec: dict) -> str:
    return json.dumps(spec, indent=2, sort_keys=False) + "\n"


def sampled_spec(f: Sampled) -> dict:
    return {"type": "sampled", "den": f.den, "re": np.real(f.values).ravel().tolist(),
            "im": np.imag(f.values).ravel().tolist()}


def fraction_text(q) -> str:
    return format_rational(Fraction(q))
