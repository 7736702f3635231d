"""Magnetic Ericsson cycle: net work, heat intake and efficiency.

The cycle visits four corners, with the field playing the role of pressure::

    1 (B1, Tc) -> 2 (B1, Th)   field held, heating
    2 (B1, Th) -> 3 (B2, Th)   isothermal, field raised
    3 (B2, Th) -> 4 (B2, Tc)   field held, cooling
    4 (B2, Tc) -> 1 (B1, Tc)   isothermal, field lowered

Work done by the system along an isotherm is ``-Delta F``. The heat taken
in from the hot side counts the heating leg (no regenerator) plus the hot
isotherm.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EricssonError
from .gibbs import _eps_gamma, _f_gamma, thermo_state
from .model import SystemParams

__all__ = ["CycleSpec", "CycleResult", "cycle_work", "cycle_heat", "efficiency", "sweep", "SweepRow"]

HEAT_FLOOR = 1e-14


@dataclass(frozen=True)
class CycleSpec:
    """Corner fields and temperatures plus the fixed trap/bath parameters.

    Only ``omega0``, ``gamma`` and ``omegaD`` of ``base`` are used.
    Field order and temperature order are not enforced: reversed or
    degenerate cycles are legal and are flagged by :func:`efficiency`.
    """

    b1: float
    b2: float
    t_cold: float
    t_hot: float
    base: SystemParams

    def __post_init__(self):
        for name in ("b1", "b2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise DomainError(name, f"field must be finite and >= 0, got {v!r}")
        for name in ("t_cold", "t_hot"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(name, f"temperature must be finite and > 0, got {v!r}")

    def corner(self, b, t) -> tuple:
        p = self.base
        return (p.omega0, b, p.gamma, p.omegaD, 1.0 / t)

    def params_at(self, b, t) -> SystemParams:
        return self.base.replace(omegac=b, beta=1.0 / t)


def _f(spec, b, t):
    return _f_gamma(*spec.corner(b, t))


def _eps(spec, b, t):
    return _eps_gamma(*spec.corner(b, t))


def cycle_work(spec: CycleSpec) -> float:
    """Net work done by the engine over one cycle."""
    s = spec
    return -(_f(s, s.b1, s.t_cold) - _f(s, s.b2, s.t_cold)) + (
        _f(s, s.b1, s.t_hot) - _f(s, s.b2, s.t_hot)
    )


def cycle_heat(spec: CycleSpec) -> float:
    """Heat absorbed on the heating leg and the hot isotherm."""
    s = spec
    return (_f(s, s.b1, s.t_hot) - _f(s, s.b2, s.t_hot)) + (
        _eps(s, s.b2, s.t_hot) - _eps(s, s.b1, s.t_cold)
    )


def leg_heats(spec: CycleSpec) -> dict:
    """Heat taken in on each leg (negative means rejected).

    The four values sum to the net work.
    """
    s = spec
    F = {(b, t): _f(s, b, t) for b in (s.b1, s.b2) for t in (s.t_cold, s.t_hot)}
    E = {(b, t): _eps(s, b, t) for b in (s.b1, s.b2) for t in (s.t_cold, s.t_hot)}
    c1, c2, c3, c4 = (s.b1, s.t_cold), (s.b1, s.t_hot), (s.b2, s.t_hot), (s.b2, s.t_cold)
    return {
        "heating_12": E[c2] - E[c1],
        "hot_isotherm_23": (E[c3] - E[c2]) - (F[c3] - F[c2]),
        "cooling_34": E[c4] - E[c3],
        "cold_isotherm_41": (E[c1] - E[c4]) - (F[c1] - F[c4]),
    }


@dataclass(frozen=True)
class CycleResult:
    """Outcome of one cycle.

    ``eta`` is ``None`` unless both ``work_positive`` and ``heat_positive``.
    """

    delta_w: float
    delta_q: float
    eta: float | None
    eta_carnot: float
    work_positive: bool
    heat_positive: bool
    spec: CycleSpec
    legs: dict = field(default_factory=dict, compare=False)

    @property
    def engine(self) -> bool:
        return self.work_positive and self.heat_positive


def efficiency(spec: CycleSpec, legs: bool = False) -> CycleResult:
    """Efficiency ``Delta W / Delta Q`` with engine-regime flags.

    Non-engine cycles (no net work out, or no heat in) are returned with
    ``eta=None`` rather than raising.
    """
    w = cycle_work(spec)
    q = cycle_heat(spec)
    work_pos = w > 0
    heat_pos = q > HEAT_FLOOR
    eta = w / q if (work_pos and heat_pos) else None
    return CycleResult(
        delta_w=w,
        delta_q=q,
        eta=eta,
        eta_carnot=1.0 - spec.t_cold / spec.t_hot,
        work_positive=work_pos,
        heat_positive=heat_pos,
        spec=spec,
        legs=leg_heats(spec) if legs else {},
    )


@dataclass(frozen=True)
class SweepRow:
    """One grid cell: its coordinates plus either a result or an error message."""

    gamma: float
    b1: float
    t_cold: float
    t_hot: float
    b2: float
    result: CycleResult | None
    error: str | None = None


SWEEP_AXES = ("gamma", "b1", "t_cold", "t_hot", "b2")


def _as_axis(values):
    return [float(v) for v in np.atleast_1d(np.asarray(values, dtype=float))]


def _cell(args):
    base, gamma, b1, t_cold, t_hot, b2, check = args
    try:
        spec = CycleSpec(b1, b2, t_cold, t_hot, base.replace(gamma=gamma))
        if check:
            for b in (b1, b2):
                for t in (t_cold, t_hot):
                    thermo_state(spec.params_at(b, t), check=True)
        return SweepRow(gamma, b1, t_cold, t_hot, b2, efficiency(spec))
    except (EricssonError, ArithmeticError, ValueError) as exc:
        return SweepRow(gamma, b1, t_cold, t_hot, b2, None, f"{type(exc).__name__}: {exc}")


def sweep(
    base: SystemParams,
    *,
    b1,
    b2,
    t_cold,
    t_hot,
    gamma=None,
    check: bool = False,
    max_workers: int | None = None,
) -> list[SweepRow]:
    """Evaluate :func:`efficiency` over a Cartesian grid.

    Rows come out in lexicographic order over ``(gamma, b1, t_cold, t_hot,
    b2)`` with ``b2`` varying fastest, independent of ``max_workers``. A
    failing cell is recorded in its row and does not stop the sweep.
    ``check`` runs the full :func:`~ericsson.gibbs.thermo_state` consistency
    checks at every corner.
    """
    gammas = _as_axis(base.gamma if gamma is None else gamma)
    grid = itertools.product(gammas, _as_axis(b1), _as_axis(t_cold), _as_axis(t_hot), _as_axis(b2))
    tasks = [(base, *cell, check) for cell in grid]
    if max_workers and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(_cell, tasks, chunksize=max(1, len(tasks) // (4 * max_workers))))
    return [_cell(t) for t in tasks]
