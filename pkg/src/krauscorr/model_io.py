"""JSON model files.

Complex matrices are nested lists of ``[re, im]`` pairs. A model gives the
joint Hamiltonian and either an explicit initial state or marginals plus a
correlation (a probe direction or a dense matrix)::

    {
      "dimA": 2, "dimB": 2,
      "hamiltonian": [[[0.5, 0.0], ...], ...],
      "marginals": {"rhoA": ..., "rhoB": ...},          # optional
      "correlation": {"probe": [2, 3], "epsilon": 0.1}   # or "auto", or a matrix
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .composite import (
    BipartiteState,
    make_correlated_state,
    make_probe_state,
    maximally_mixed,
)
from .linalg import check_density, check_hermitian


class ModelError(ValueError):
    pass


def encode_matrix(m) -> list:
    a = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def decode_matrix(data: Any, where: str) -> np.ndarray:
    try:
        a = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ModelError(f"{where}: expected nested [re, im] pairs ({exc})") from None
    if a.ndim != 3 or a.shape[2] != 2 or a.shape[0] != a.shape[1]:
        raise ModelError(f"{where}: expected a square matrix of [re, im] pairs, got shape {a.shape}")
    return a[..., 0] + 1j * a[..., 1]


@dataclass
class Model:
    dim_a: int
    dim_b: int
    hamiltonian: np.ndarray
    initial_state: np.ndarray | None = None
    rho_a: np.ndarray | None = None
    rho_b: np.ndarray | None = None
    correlation: dict | np.ndarray | None = None

    def marginals(self) -> tuple[np.ndarray, np.ndarray]:
        ra = self.rho_a if self.rho_a is not None else maximally_mixed(self.dim_a)
        rb = self.rho_b if self.rho_b is not None else maximally_mixed(self.dim_b)
        return ra, rb

    def initial(self) -> BipartiteState:
        if self.initial_state is not None:
            return BipartiteState(self.dim_a, self.dim_b, self.initial_state)
        ra, rb = self.marginals()
        cor = self.correlation
        if cor is None:
            return make_correlated_state(ra, rb, np.zeros((self.dim_a * self.dim_b,) * 2), 0.0)
        if isinstance(cor, dict):
            l, m = cor["probe"]
            return make_probe_state(l, m, ra, rb, cor.get("epsilon", "auto"))
        return make_correlated_state(ra, rb, cor, 1.0)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "dimA": self.dim_a,
            "dimB": self.dim_b,
            "hamiltonian": encode_matrix(self.hamiltonian),
        }
        if self.initial_state is not None:
            out["initial_state"] = encode_matrix(self.initial_state)
        if self.rho_a is not None or self.rho_b is not None:
            ra, rb = self.marginals()
            out["marginals"] = {"rhoA": encode_matrix(ra), "rhoB": encode_matrix(rb)}
        if isinstance(self.correlation, dict):
            out["correlation"] = dict(self.correlation)
        elif self.correlation is not None:
            out["correlation"] = encode_matrix(self.correlation)
        return out


def parse_model(text: str, source: str = "<model>") -> Model:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ModelError(f"{source}: top level must be a JSON object")

    def need(key):
        if key not in data:
            raise ModelError(f"{source}: missing required field '{key}'")
        return data[key]

    dim_a, dim_b = need("dimA"), need("dimB")
    if not all(isinstance(d, int) and d >= 2 for d in (dim_a, dim_b)):
        raise ModelError(f"{source}: dimA and dimB must be integers >= 2")
    n = dim_a * dim_b

    def matrix(value, where, side):
        m = decode_matrix(value, f"{source}: {where}")
        if m.shape[0] != side:
            raise ModelError(f"{source}: {where} must be {side}x{side}, got {m.shape[0]}x{m.shape[0]}")
        return m

    try:
        h = check_hermitian(matrix(need("hamiltonian"), "hamiltonian", n), "hamiltonian")
        model = Model(dim_a, dim_b, h)
        if "initial_state" in data:
            model.initial_state = check_density(
                matrix(data["initial_state"], "initial_state", n), "initial_state"
            )
        if "marginals" in data:
            marg = data["marginals"]
            if "rhoA" in marg:
                model.rho_a = check_density(matrix(marg["rhoA"], "marginals.rhoA", dim_a), "rhoA")
            if "rhoB" in marg:
                model.rho_b = check_density(matrix(marg["rhoB"], "marginals.rhoB", dim_b), "rhoB")
        cor = data.get("correlation")
        if isinstance(cor, dict):
            probe = cor.get("probe")
            if not (isinstance(probe, list) and len(probe) == 2 and all(isinstance(x, int) for x in probe)):
                raise ModelError(f"{source}: correlation.probe must be [l, m]")
            eps = cor.get("epsilon", "auto")
            if not (eps == "auto" or isinstance(eps, (int, float))):
                raise ModelError(f"{source}: correlation.epsilon must be a number or \"auto\"")
            model.correlation = {"probe": probe, "epsilon": eps}
        elif cor is not None:
            model.correlation = matrix(cor, "correlation", n)
        # surface state-construction errors at load time
        model.initial()
    except ModelError:
        raise
    except ValueError as exc:
        raise ModelError(f"{source}: {exc}") from None
    return model


def load_model(path: str | Path) -> Model:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ModelError(f"{p}: {exc.strerror}") from None
    return parse_model(text, str(p))


def _dumps(value: Any, indent: str = "") -> str:
    # one matrix row per line; floats use repr, which round-trips exactly
    inner = indent + "  "
    if isinstance(value, dict):
        items = [f"{inner}{json.dumps(k)}: {_dumps(v, inner)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + indent + "}"
    if isinstance(value, list) and value and isinstance(value[0], list) and isinstance(value[0][0], list):
        rows = [inner + json.dumps(row) for row in value]
        return "[\n" + ",\n".join(rows) + "\n" + indent + "]"
    return json.dumps(value)


def dumps_model(model: Model) -> str:
    return _dumps(model.to_dict()) + "\n"


def dump_model(model: Model, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model))
