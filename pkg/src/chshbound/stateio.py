"""JSON state format shared by the library and the command line.

Density matrices are stored as ``{"re": [[...] x4], "im": [[...] x4]}``
(row-major 4x4) and pure states as ``{"amplitudes": [[re, im] x4]}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import BadFormat
from .qmat import DEFAULT_TOLERANCES, Tolerances
from .states import projector, validate_density, validate_pure


def pure_to_json(psi) -> dict:
    psi = np.asarray(psi, dtype=complex)
    return {"amplitudes": [[float(z.real), float(z.imag)] for z in psi]}


def density_to_json(rho) -> dict:
    rho = np.asarray(rho, dtype=complex)
    return {"re": rho.real.tolist(), "im": rho.imag.tolist()}


def _as_matrix(values, name: str) -> np.ndarray:
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise BadFormat(f"BadFormat: field {name!r} is not numeric") from exc
    if arr.size != 16:
        raise BadFormat(f"BadFormat: field {name!r} must hold 16 numbers, got {arr.size}")
    return arr.reshape(4, 4)


def state_from_json(obj, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Validated density matrix for a decoded JSON state (pure states become projectors)."""
    if not isinstance(obj, dict):
        raise BadFormat("BadFormat: expected a JSON object")
    if "amplitudes" in obj:
        try:
            amps = np.asarray(obj["amplitudes"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise BadFormat("BadFormat: amplitudes must be [re, im] pairs") from exc
        if amps.shape != (4, 2):
            raise BadFormat(f"BadFormat: amplitudes must be 4 [re, im] pairs, got shape {amps.shape}")
        return projector(validate_pure(amps[:, 0] + 1j * amps[:, 1]))
    if "re" in obj:
        re = _as_matrix(obj["re"], "re")
        im = _as_matrix(obj.get("im", np.zeros((4, 4))), "im")
        return validate_density(re + 1j * im, tol)
    raise BadFormat("BadFormat: expected an 'amplitudes' or 're'/'im' state")


def read_state(path, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise BadFormat(f"BadFormat: cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadFormat(f"BadFormat: {path} is not valid JSON ({exc.msg})") from exc
    return state_from_json(obj, tol)


def write_state(obj: dict, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")
