"""Configurations of the shipped example systems and loop element."""

from __future__ import annotations

_SQ2 = "sqrt2"

EX35 = {
    "kind": "system",
    "name": "ex35",
    "scheme": {"A": 2},
    "multiplicity": {"constant": 1},
    "H": [[{"type": "piecewise", "pieces": [
        {"lo": "-1/8", "hi": "1/8", "value": _SQ2},
        {"lo": "1/4", "hi": "3/8", "value": _SQ2, "pm": True},
    ]}]],
    "G": [[{"type": "piecewise", "pieces": [
        {"lo": "1/8", "hi": "1/4", "value": _SQ2, "pm": True},
        {"lo": "3/8", "hi": "1/2", "value": _SQ2, "pm": True},
    ]}]],
}

JOURNE_M = {"sets": [[["-1/2", "-3/7"], ["-2/7", "2/7"], ["3/7", "1/2"]], [["-1/7", "1/7"]]]}

JOURNE_CANONICAL = {
    "kind": "system",
    "name": "journe_canonical",
    "scheme": {"A": 2},
    "multiplicity": JOURNE_M,
    "H": [
        [{"type": "piecewise", "pieces": [
            {"lo": "-2/7", "hi": "-1/4", "value": _SQ2},
            {"lo": "-1/7", "hi": "1/7", "value": _SQ2},
            {"lo": "1/4", "hi": "2/7", "value": _SQ2},
        ]}, {"type": "zero"}],
        [{"type": "piecewise", "pieces": [{"lo": "3/7", "hi": "1/2", "value": _SQ2, "pm": True}]},
         {"type": "zero"}],
    ],
    "G": [[
        {"type": "piecewise", "pieces": [{"lo": "1/7", "hi": "1/4", "value": _SQ2, "pm": True}]},
        {"type": "piecewise", "pieces": [{"lo": "-1/7", "hi": "1/7", "value": _SQ2}]},
    ]],
}

JOURNE_SMOOTH = {
    "kind": "system",
    "name": "journe_smooth",
    "scheme": {"A": 2},
    "multiplicity": JOURNE_M,
    "H": [
        [{"type": "smooth_qmf", "epsilon": "1/100", "mask": [["-2/7", "2/7"]]},
         {"type": "smooth_qmf", "epsilon": "1/100", "shift": "1/2", "mask": [["-1/7", "1/7"]]}],
        [{"type": "piecewise", "pieces": [{"lo": "3/7", "hi": "1/2", "value": _SQ2, "pm": True}]},
         {"type": "zero"}],
    ],
    "G": [[
        {"type": "smooth_qmf_highpass", "epsilon": "1/100", "mask": [["-2/7", "2/7"]]},
        {"type": "smooth_qmf_highpass", "epsilon": "1/100", "shift": "1/2", "mask": [["-1/7", "1/7"]]},
    ]],
}

LOOP_P = {
    "kind": "loop",
    "name": "loop_p",
    "type": "journe_loop",
    "epsilon": "1/100",
    "row_phase": "auto",
}

LOOP_P_ON_JOURNE = {
    "kind": "loop_act",
    "name": "journe_smooth_via_loop",
    "loop": "loop_p",
    "system": "journe_canonical",
    "canonical": "journe_canonical",
}

EXAMPLE_CONFIGS = {
    "ex35": EX35,
    "journe_canonical": JOURNE_CANONICAL,
    "journe_smooth": JOURNE_SMOOTH,
    "loop_p": LOOP_P,
    "journe_smooth_via_loop": LOOP_P_ON_JOURNE,
}

EXPORTED = ("ex35", "journe_canonical", "journe_smooth", "loop_p")
