"""Gate vocabulary: names, arities, matrices, and decomposition bodies.

Single source of truth for every gate the toolkit understands.  The table
covers the OpenQASM 2 standard-include gates plus sx/sxdg, the measurement
and barrier directives, and the decomposition bodies used to lower
composite gates onto {1Q, cx}.

Matrix conventions (shared with the simulator in :mod:`circuitbench.verify`):
- state indices are little-endian (qubit i is bit i of the index),
- multi-qubit gate matrices put the first listed qubit on the most
  significant local bit, so ``kron(P_control, P_target)`` matches the
  usual textbook notation for a gate written ``g control, target``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

# Arity sentinel for directives that accept any number of qubits.
VARIADIC = -1


@dataclass(frozen=True)
class GateKind:
    """A gate name with its fixed qubit and parameter signature."""

    name: str
    num_qubits: int  # VARIADIC for barrier
    num_params: int = 0

    @property
    def is_directive(self) -> bool:
        return self.name in ("barrier", "measure", "reset")


def _m(rows) -> np.ndarray:
    return np.array(rows, dtype=complex)


_SQ2 = 1.0 / math.sqrt(2.0)

_FIXED_1Q = {
    "id": _m([[1, 0], [0, 1]]),
    "x": _m([[0, 1], [1, 0]]),
    "y": _m([[0, -1j], [1j, 0]]),
    "z": _m([[1, 0], [0, -1]]),
    "h": _m([[_SQ2, _SQ2], [_SQ2, -_SQ2]]),
    "s": _m([[1, 0], [0, 1j]]),
    "sdg": _m([[1, 0], [0, -1j]]),
    "t": _m([[1, 0], [0, cmath.exp(1j * math.pi / 4)]]),
    "tdg": _m([[1, 0], [0, cmath.exp(-1j * math.pi / 4)]]),
    "sx": 0.5 * _m([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]),
    "sxdg": 0.5 * _m([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]]),
}


def _u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return _m(
        [
            [c, -cmath.exp(1j * lam) * s],
            [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c],
        ]
    )


def _rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return _m([[c, -1j * s], [-1j * s, c]])


def _ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return _m([[c, -s], [s, c]])


def _rz(lam: float) -> np.ndarray:
    return _m([[cmath.exp(-0.5j * lam), 0], [0, cmath.exp(0.5j * lam)]])


_PARAM_1Q = {
    "rx": _rx,
    "ry": _ry,
    "rz": _rz,
    "u1": lambda lam: _m([[1, 0], [0, cmath.exp(1j * lam)]]),
    "u2": lambda phi, lam: _u3(math.pi / 2.0, phi, lam),
    "u3": _u3,
}


def controlled(u: np.ndarray) -> np.ndarray:
    """4x4 controlled version of a 2x2 gate, control on the high local bit."""
    out = np.eye(4, dtype=complex)
    out[2:, 2:] = u
    return out


_FIXED_2Q = {
    "cx": controlled(_FIXED_1Q["x"]),
    "cy": controlled(_FIXED_1Q["y"]),
    "cz": controlled(_FIXED_1Q["z"]),
    "ch": controlled(_FIXED_1Q["h"]),
    "swap": _m([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]),
}

_PARAM_2Q = {
    "crz": lambda lam: controlled(_rz(lam)),
    "cu1": lambda lam: controlled(_PARAM_1Q["u1"](lam)),
    "cu3": lambda t, p, l: controlled(_u3(t, p, l)),
}

_CCX = np.eye(8, dtype=complex)
_CCX[6:, 6:] = _FIXED_1Q["x"]

# The OpenQASM 2 standard-include vocabulary plus sx/sxdg and directives.
GATE_TABLE: dict[str, GateKind] = {}
for _name in _FIXED_1Q:
    GATE_TABLE[_name] = GateKind(_name, 1, 0)
for _name, _arity in (("rx", 1), ("ry", 1), ("rz", 1), ("u1", 1), ("u3", 1), ("u2", 1)):
    GATE_TABLE[_name] = GateKind(_name, _arity, {"u3": 3, "u2": 2}.get(_name, 1))
for _name in _FIXED_2Q:
    GATE_TABLE[_name] = GateKind(_name, 2, 0)
GATE_TABLE["crz"] = GateKind("crz", 2, 1)
GATE_TABLE["cu1"] = GateKind("cu1", 2, 1)
GATE_TABLE["cu3"] = GateKind("cu3", 2, 3)
GATE_TABLE["ccx"] = GateKind("ccx", 3, 0)
GATE_TABLE["barrier"] = GateKind("barrier", VARIADIC, 0)
GATE_TABLE["measure"] = GateKind("measure", 1, 0)
GATE_TABLE["reset"] = GateKind("reset", 1, 0)


class UnknownGateError(KeyError):
    """Raised when a matrix or decomposition is requested for a gate we do not know."""


def has_matrix(name: str) -> bool:
    return (
        name in _FIXED_1Q
        or name in _PARAM_1Q
        or name in _FIXED_2Q
        or name in _PARAM_2Q
        or name == "ccx"
    )


def matrix(name: str, params: tuple[float, ...] = ()) -> np.ndarray:
    """Unitary matrix of a known gate, little-endian with the first qubit high."""
    if name in _FIXED_1Q:
        return _FIXED_1Q[name]
    if name in _PARAM_1Q:
        return _PARAM_1Q[name](*params)
    if name in _FIXED_2Q:
        return _FIXED_2Q[name]
    if name in _PARAM_2Q:
        return _PARAM_2Q[name](*params)
    if name == "ccx":
        return _CCX
    raise UnknownGateError(name)


# Decomposition bodies in OpenQASM 2 standard-include form.  Each entry is a
# list of (gate name, qubit positions into the parent argument list,
# parameter function over the parent parameters).
_PI = math.pi
_noparams = lambda *a: ()

DECOMPOSITIONS: dict[str, list[tuple[str, tuple[int, ...], object]]] = {
    "swap": [
        ("cx", (0, 1), _noparams),
        ("cx", (1, 0), _noparams),
        ("cx", (0, 1), _noparams),
    ],
    "ccx": [
        ("h", (2,), _noparams),
        ("cx", (1, 2), _noparams),
        ("tdg", (2,), _noparams),
        ("cx", (0, 2), _noparams),
        ("t", (2,), _noparams),
        ("cx", (1, 2), _noparams),
        ("tdg", (2,), _noparams),
        ("cx", (0, 2), _noparams),
        ("t", (1,), _noparams),
        ("t", (2,), _noparams),
        ("h", (2,), _noparams),
        ("cx", (0, 1), _noparams),
        ("t", (0,), _noparams),
        ("tdg", (1,), _noparams),
        ("cx", (0, 1), _noparams),
    ],
    "cy": [
        ("sdg", (1,), _noparams),
        ("cx", (0, 1), _noparams),
        ("s", (1,), _noparams),
    ],
    "ch": [
        ("h", (1,), _noparams),
        ("sdg", (1,), _noparams),
        ("cx", (0, 1), _noparams),
        ("h", (1,), _noparams),
        ("t", (1,), _noparams),
        ("cx", (0, 1), _noparams),
        ("t", (1,), _noparams),
        ("h", (1,), _noparams),
        ("s", (1,), _noparams),
        ("x", (1,), _noparams),
        ("s", (0,), _noparams),
    ],
    "crz": [
        ("u1", (1,), lambda lam: (lam / 2.0,)),
        ("cx", (0, 1), _noparams),
        ("u1", (1,), lambda lam: (-lam / 2.0,)),
        ("cx", (0, 1), _noparams),
    ],
    "cu1": [
        ("u1", (0,), lambda lam: (lam / 2.0,)),
        ("cx", (0, 1), _noparams),
        ("u1", (1,), lambda lam: (-lam / 2.0,)),
        ("cx", (0, 1), _noparams),
        ("u1", (1,), lambda lam: (lam / 2.0,)),
    ],
    "cu3": [
        ("u1", (0,), lambda t, p, l: ((l + p) / 2.0,)),
        ("u1", (1,), lambda t, p, l: ((l - p) / 2.0,)),
        ("cx", (0, 1), _noparams),
        ("u3", (1,), lambda t, p, l: (-t / 2.0, 0.0, -(p + l) / 2.0)),
        ("cx", (0, 1), _noparams),
        ("u3", (1,), lambda t, p, l: (t / 2.0, p, 0.0)),
    ],
}


def decomposition(name: str, params: tuple[float, ...]) -> list[tuple[str, tuple[int, ...], tuple[float, ...]]]:
    """Instantiate a gate's decomposition body with concrete parameters."""
    if name not in DECOMPOSITIONS:
        raise UnknownGateError(name)
    return [(g, qs, tuple(fn(*params))) for g, qs, fn in DECOMPOSITIONS[name]]
