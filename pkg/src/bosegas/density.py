"""Structured second-order models of the one- and two-particle density matrices.

Both models are stored structurally rather than as dense matrices: a
condensate scalar, per-mode diagonal weights, and (for the two-particle
model) the anomalous block coupling the doubly-condensed vector to each
zero-total-momentum pair.  Traces are the structural identities
``N = condensate + sum(weights)``; no dense algebra is involved.

The two-particle model need not be positive at finite N; its minimum
eigenvalue is available as a diagnostic in closed form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .bogoliubov import ThermalConfig, Variant, mu_sq, pairing_coeff, theta_sq
from .errors import ModelValidityError
from .lattice import Mode, modes_up_to

__all__ = [
    "SecondOrderDM1",
    "SecondOrderDM2",
    "build_rho1",
    "build_rho2",
    "dm_trace_norm_diff",
    "dm2_min_eigenvalue",
]


@dataclass(frozen=True)
class SecondOrderDM1:
    """Model of N * rho^(1): condensate weight plus a plane-wave diagonal."""

    N: int
    cutoff: int
    variant: Variant
    condensate_weight: float
    modes: tuple[Mode, ...]
    excited_weights: np.ndarray

    def trace(self) -> float:
        return math.fsum([self.condensate_weight, *self.excited_weights.tolist()])

    def to_json(self, provenance: dict | None = None) -> str:
        return _dm_json(self, pairing=None, provenance=provenance)


@dataclass(frozen=True)
class SecondOrderDM2:
    """Model of N * rho^(2): condensed weight, pair-diagonal, anomalous block.

    ``pairing`` holds, per mode p, the coefficient of the ordered basis
    element |phi_0 phi_0><phi_p phi_-p| (its adjoint is implied, the block
    is traceless).  The factor 4 of the symmetrized condensate-excited
    sector is absorbed into ``excited_weights``.
    """

    N: int
    cutoff: int
    variant: Variant
    condensate_weight: float
    modes: tuple[Mode, ...]
    excited_weights: np.ndarray
    pairing: np.ndarray

    def trace(self) -> float:
        return math.fsum([self.condensate_weight, *self.excited_weights.tolist()])

    def to_json(self, provenance: dict | None = None) -> str:
        return _dm_json(self, pairing=self.pairing, provenance=provenance)


def _dm_json(dm, pairing, provenance) -> str:
    counts: dict[int, int] = {}
    for mode in dm.modes:
        counts[mode.norm_sq] = counts.get(mode.norm_sq, 0) + 1
    rows = []
    seen = set()
    for i, mode in enumerate(dm.modes):
        key = mode.norm_sq
        if key in seen:
            continue
        seen.add(key)
        row = {
            "norm_sq": key,
            "multiplicity": counts[key],
            "weight": float(dm.excited_weights[i]),
        }
        if pairing is not None:
            row["pairing"] = float(pairing[i])
        rows.append(row)
    payload = {
        "N": dm.N,
        "cutoff": dm.cutoff,
        "variant": dm.variant.value,
        "condensate": float(dm.condensate_weight),
        "trace": dm.trace(),
        "modes": rows,
    }
    if provenance is not None:
        payload["provenance"] = provenance
    return json.dumps(payload, indent=2, sort_keys=True)


def build_rho1(cfg: ThermalConfig, N: int, cutoff: int) -> SecondOrderDM1:
    """Assemble the one-particle model with weights mu^2 + theta^2 per mode.

    Valid only while the depletion stays below N; otherwise the condensate
    weight would be non-positive and the asymptotic model meaningless, so a
    structured error is raised instead.
    """
    if N < 1:
        raise ValueError("particle number must be >= 1")
    modes = modes_up_to(cutoff)
    weights = np.array(
        [
            mu_sq(m.p_sq, cfg.a) + theta_sq(m.p_sq, cfg.a, cfg.beta, cfg.variant)
            for m in modes
        ]
    )
    depletion = math.fsum(weights.tolist())
    if depletion >= N:
        raise ModelValidityError(
            f"second-order model invalid at this N: depletion {depletion:g} >= N = {N}"
        )
    return SecondOrderDM1(
        N=N,
        cutoff=cutoff,
        variant=cfg.variant,
        condensate_weight=N - depletion,
        modes=modes,
        excited_weights=weights,
    )


def build_rho2(cfg: ThermalConfig, N: int, cutoff: int) -> SecondOrderDM2:
    """Assemble the two-particle model: weights 4(mu^2+theta^2) and the pairing block."""
    if N < 1:
        raise ValueError("particle number must be >= 1")
    modes = modes_up_to(cutoff)
    weights = np.array(
        [
            4.0 * (mu_sq(m.p_sq, cfg.a) + theta_sq(m.p_sq, cfg.a, cfg.beta, cfg.variant))
            for m in modes
        ]
    )
    depletion4 = math.fsum(weights.tolist())
    if depletion4 >= N:
        raise ModelValidityError(
            f"second-order model invalid at this N: 4*depletion {depletion4:g} >= N = {N}"
        )
    pairing = np.array(
        [pairing_coeff(m.p_sq, cfg.a, cfg.beta, cfg.variant) for m in modes]
    )
    return SecondOrderDM2(
        N=N,
        cutoff=cutoff,
        variant=cfg.variant,
        condensate_weight=N - depletion4,
        modes=modes,
        excited_weights=weights,
        pairing=pairing,
    )


def _check_same_shape(x, y):
    if type(x) is not type(y):
        raise ValueError("density-matrix models of different kinds cannot be compared")
    if x.cutoff != y.cutoff or len(x.modes) != len(y.modes):
        raise ValueError("density-matrix models must share cutoff and mode basis")


def dm_trace_norm_diff(x, y) -> float:
    """Trace norm of the structured difference of two same-shape models.

    The sectors are orthogonal, so the norm splits exactly: the condensate
    difference, the per-mode diagonal differences, and for two-particle
    models the singular values of the off-diagonal anomalous blocks, which
    contribute 2|delta| per +-p pair of modes.
    """
    _check_same_shape(x, y)
    parts = [abs(x.condensate_weight - y.condensate_weight)]
    parts.extend(np.abs(x.excited_weights - y.excited_weights).tolist())
    if isinstance(x, SecondOrderDM2):
        parts.extend(np.abs(x.pairing - y.pairing).tolist())
    return math.fsum(parts)


def dm2_min_eigenvalue(dm: SecondOrderDM2) -> float:
    """Smallest eigenvalue of the two-particle model, in closed form.

    The anomalous block couples the doubly-condensed vector to the pair
    vectors with zero model weight, an arrow-shaped matrix whose nonzero
    eigenvalues are (w00 +- sqrt(w00^2 + 4 sum c^2))/2; the rest of the
    spectrum is the non-negative diagonal.  Negative values are expected at
    finite N and merely reported.
    """
    c_sq = float(np.dot(dm.pairing, dm.pairing))
    w00 = dm.condensate_weight
    arrow_min = 0.5 * (w00 - math.sqrt(w00 * w00 + 4.0 * c_sq))
    candidates = [arrow_min, float(np.min(dm.excited_weights))]
    if len(dm.pairing) > 1:
        candidates.append(0.0)  # null space of the arrow block
    return min(candidates)
