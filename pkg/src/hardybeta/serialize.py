"""JSON and CSV interchange formats.

Complex scalars are encoded as ``[re, im]`` pairs and complex matrices as
row-major nested lists of such pairs, so operator data looks like
``{"A": [[[re, im], ...], ...], "C": [[...], ...]}``.  Weights serialize as
``{"kind": "beta_alpha", "alpha": 2.0, "n": 256}`` or
``{"kind": "custom", "betas": [...]}``.  Floats are emitted with Python's
shortest round-trip repr, so dump/load cycles are bit-stable; ``dumps``
sorts keys so identical data yields identical bytes.
"""

from __future__ import annotations

import json

import numpy as np

from .colligation import ColligationFamily, ColligationStep
from .errors import InvalidParameterError
from .hereditary import OutputPair, gramian_table
from .weights import (
    WeightSequence,
    make_weight_beta_alpha,
    make_weight_custom,
    make_weight_hardy,
)


def _json_default(o):
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not JSON-serializable: {type(o)}")


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, round-trip floats."""
    return json.dumps(obj, sort_keys=True, indent=1, default=_json_default)


def complex_matrix_to_json(M) -> list:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return [[[float(v.real), float(v.imag)] for v in row] for row in M]


def complex_matrix_from_json(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.ndim == 2:  # bare real matrix accepted
        return arr.astype(complex)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise InvalidParameterError(
            "matrix JSON must be rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def complex_vector_to_json(v) -> list:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return [[float(x.real), float(x.imag)] for x in v]


def complex_vector_from_json(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.ndim == 1:
        return arr.astype(complex)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidParameterError("vector JSON must be [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def weight_to_json(w: WeightSequence) -> dict:
    if w.kind == "beta_alpha":
        return {"kind": "beta_alpha", "alpha": w.alpha, "n": w.trunc_len}
    if w.kind == "hardy":
        return {"kind": "hardy", "n": w.trunc_len}
    return {"kind": "custom", "betas": [float(b) for b in w.betas]}


def weight_from_json(obj: dict) -> WeightSequence:
    kind = obj.get("kind")
    if kind == "beta_alpha":
        return make_weight_beta_alpha(float(obj["alpha"]), int(obj["n"]))
    if kind == "hardy":
        return make_weight_hardy(int(obj["n"]))
    if kind == "custom":
        return make_weight_custom(obj["betas"])
    raise InvalidParameterError(f"unknown weight kind {kind!r}")


def pair_to_json(pair: OutputPair) -> dict:
    return {"A": complex_matrix_to_json(pair.A),
            "C": complex_matrix_to_json(pair.C)}


def pair_from_json(obj: dict) -> OutputPair:
    if "A" not in obj or "C" not in obj:
        raise InvalidParameterError("operator JSON needs keys 'A' and 'C'")
    return OutputPair(A=complex_matrix_from_json(obj["A"]),
                      C=complex_matrix_from_json(obj["C"]))


def family_to_json(fam: ColligationFamily) -> dict:
    steps = []
    for k, st in enumerate(fam.steps):
        steps.append({
            "k": k,
            "u": st.u,
            "B": complex_matrix_to_json(st.B) if st.u else [],
            "D": complex_matrix_to_json(st.D) if st.u else [],
            "isometry_residual": fam.isometry_residuals[k]
            if k < len(fam.isometry_residuals) else None,
            "coisometry_residual": fam.coisometry_residuals[k]
            if k < len(fam.coisometry_residuals) else None,
        })
    return {
        "weight": weight_to_json(fam.weight),
        "pair": pair_to_json(fam.pair),
        "steps": steps,
    }


def family_from_json(obj: dict, tol: float = 1e-12) -> ColligationFamily:
    w = weight_from_json(obj["weight"])
    pair = pair_from_json(obj["pair"])
    steps = []
    for item in sorted(obj["steps"], key=lambda s: s["k"]):
        u = int(item["u"])
        if u:
            B = complex_matrix_from_json(item["B"])
            D = complex_matrix_from_json(item["D"])
        else:
            B = np.zeros((pair.n, 0), dtype=complex)
            D = np.zeros((pair.p, 0), dtype=complex)
        steps.append(ColligationStep(B=B, D=D, u=u))
    gramians = gramian_table(w, pair, len(steps), tol=tol)
    fam = ColligationFamily(weight=w, pair=pair, steps=steps,
                            gramians=gramians)
    for item in sorted(obj["steps"], key=lambda s: s["k"]):
        fam.isometry_residuals.append(item.get("isometry_residual"))
        fam.coisometry_residuals.append(item.get("coisometry_residual"))
    return fam


def char_family_to_json(char) -> dict:
    return {
        "T": complex_matrix_to_json(char.T),
        "defect": complex_matrix_to_json(char.defect),
        "weight": weight_to_json(char.weight),
        "family": family_to_json(char.family),
        "gramian_identity_residual": char.gramian_identity_residual,
        "classification": {
            "flags": char.classification.flags,
            "residuals": char.classification.residuals,
            "k_checked": char.classification.k_checked,
            "certified_all_k": char.classification.certified_all_k,
        },
    }


def inputs_from_json(obj) -> list:
    """Ragged input sequence: list of per-step vectors of [re, im] pairs."""
    return [complex_vector_from_json(u) for u in obj]


def inputs_to_json(inputs) -> list:
    return [complex_vector_to_json(u) for u in inputs]


def kernel_grid_csv(points, values) -> str:
    """CSV rows ``z_re, z_im, zeta_re, zeta_im, K_00_re, K_00_im, ...``.

    ``points`` is a list of ``(z, zeta)`` pairs and ``values`` the matching
    list of p-by-p kernel matrices, flattened row-major.
    """
    if not points:
        return ""
    p = np.atleast_2d(values[0]).shape[0]
    header = ["z_re", "z_im", "zeta_re", "zeta_im"]
    for i in range(p):
        for j in range(p):
            header += [f"K_{i}{j}_re", f"K_{i}{j}_im"]
    lines = [",".join(header)]
    for (z, zeta), V in zip(points, values):
        V = np.atleast_2d(np.asarray(V, dtype=complex))
        row = [repr(float(z.real)), repr(float(z.imag)),
               repr(float(zeta.real)), repr(float(zeta.imag))]
        for i in range(p):
            for j in range(p):
                row += [repr(float(V[i, j].real)), repr(float(V[i, j].imag))]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def trajectory_csv(traj) -> str:
    """CSV rows ``step, x_0_re, x_0_im, ..., y_0_re, y_0_im, ...``."""
    n = len(traj.states[0])
    p = len(traj.outputs[0]) if traj.outputs else 0
    header = ["step"]
    header += [f"x_{i}_{part}" for i in range(n) for part in ("re", "im")]
    header += [f"y_{i}_{part}" for i in range(p) for part in ("re", "im")]
    lines = [",".join(header)]
    for j, y in enumerate(traj.outputs):
        x = traj.states[j]
        row = [str(j)]
        for i in range(n):
            row += [repr(float(x[i].real)), repr(float(x[i].imag))]
        for i in range(p):
            row += [repr(float(y[i].real)), repr(float(y[i].imag))]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
