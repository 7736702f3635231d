"""Linear drift of the quantum Langevin equations.

Two forms are provided:

* :func:`build_drift` is the memoryless (Ohmic) 4x4 drift over canonical
  variables ``(x, y, p_x, p_y)``; the kinetic velocity couples to the
  vector potential through ``omegac/2``.
* :func:`drude_drift` is the 6x6 drift over ``(x, y, v_x, v_y, u_x, u_y)``
  where ``u`` is the retarded friction force of the Drude kernel
  ``gamma omegaD exp(-omegaD t)``. This is the exact Markovian embedding of
  the cutoff bath and the one whose noise obeys the fluctuation-dissipation
  relation with :func:`~ericsson.langevin.noise.symmetrized_noise_psd`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..model import SystemParams

__all__ = ["DriftMatrix", "build_drift", "drude_drift", "NOISE_INPUT", "STATE_LABELS"]

STATE_LABELS = ("x", "y", "v_x", "v_y", "u_x", "u_y")

# noise forces enter the two velocity rows of the Drude state
NOISE_INPUT = np.zeros((6, 2))
NOISE_INPUT[2, 0] = NOISE_INPUT[3, 1] = 1.0


@dataclass(frozen=True)
class DriftMatrix:
    """``dz/dt = a z + noise`` over ``labels``.

    Rows/columns for positions are lengths, momenta are mass * velocity
    (mass 1), so ``a`` mixes 1, frequency and frequency**2 entries.
    """

    a: np.ndarray
    labels: tuple

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.a)

    @property
    def stable(self) -> bool:
        return bool(np.all(self.eigenvalues.real <= 1e-12 * max(1.0, np.abs(self.a).max())))


def build_drift(p: SystemParams) -> DriftMatrix:
    """Ohmic drift over ``(x, y, p_x, p_y)`` derived from the trap Hamiltonian.

    ``v_x = p_x - (omegac/2) y`` and ``v_y = p_y + (omegac/2) x``; friction
    ``-gamma v`` acts on the momenta. Trace is ``-2 gamma``.
    """
    h = 0.5 * p.omegac
    k = h * h + p.omega0**2
    g = p.gamma
    a = np.array(
        [
            [0.0, -h, 1.0, 0.0],
            [h, 0.0, 0.0, 1.0],
            [-k, g * h, -g, -h],
            [-g * h, -k, h, -g],
        ]
    )
    return DriftMatrix(a, ("x", "y", "p_x", "p_y"))


def drude_drift(p: SystemParams, omegac: float | None = None, bdot: float = 0.0) -> np.ndarray:
    """6x6 drift over ``(x, y, v_x, v_y, u_x, u_y)`` with Drude memory friction.

    ``omegac`` overrides the field in ``p`` (used along a protocol) and
    ``bdot`` adds the induced electric force ``(bdot/2) (-y, x)`` of a
    changing field in the symmetric gauge.

    Its eigenvalues are ``-lam_j`` and ``-conj(lam_j)`` for the three roots of
    :func:`ericsson.model.cubic_coefficients`.
    """
    wc = p.omegac if omegac is None else omegac
    w2 = p.omega0**2
    gd = p.gamma * p.omegaD
    od = p.omegaD
    e = 0.5 * bdot
    return np.array(
        [
            [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            [-w2, -e, 0.0, -wc, -1.0, 0.0],
            [e, -w2, wc, 0.0, 0.0, -1.0],
            [0.0, 0.0, gd, 0.0, -od, 0.0],
            [0.0, 0.0, 0.0, gd, 0.0, -od],
        ]
    )
