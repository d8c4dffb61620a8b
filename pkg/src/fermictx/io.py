"""JSON state files.

A pure state::

    {"mode_count": 2,
     "amplitudes": [{"pattern": "10", "re": 0.7071, "im": 0.0}, ...],
     "label": "optional"}

Patterns list mode 1 leftmost. A mixture wraps pure states::

    {"weights": [0.5, 0.5], "states": [<pure state>, <pure state>]}
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .errors import DomainError
from .fock import DensityState, FermionState, format_pattern, make_state

PathLike = Union[str, Path]


def state_from_dict(doc: dict):
    """Build a checked :class:`FermionState` or a :class:`DensityState`."""
    if "states" in doc:
        states = [state_from_dict(s) for s in doc["states"]]
        if any(isinstance(s, DensityState) for s in states):
            raise DomainError("mixtures must list pure states")
        return DensityState.from_mixture(doc["weights"], states, doc.get("label", "mixture"))
    try:
        M = int(doc["mode_count"])
        amps = {rec["pattern"]: complex(rec.get("re", 0.0), rec.get("im", 0.0))
                for rec in doc["amplitudes"]}
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed state document: {exc}") from exc
    return make_state(M, amps, doc.get("label", ""))


def state_to_dict(state: FermionState) -> dict:
    return {
        "mode_count": state.mode_count,
        "amplitudes": [{"pattern": format_pattern(p), "re": a.real, "im": a.imag}
                       for p, a in state.amplitudes.items()],
        "label": state.label,
    }


def mixture_to_dict(weights, states, label: str = "mixture") -> dict:
    return {"weights": [float(w) for w in weights],
            "states": [state_to_dict(s) for s in states], "label": label}


def load_state(path: PathLike):
    with open(path) as fh:
        return state_from_dict(json.load(fh))


def save_state(state: FermionState, path: PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_dict(state), fh, indent=2)
        fh.write("\n")
