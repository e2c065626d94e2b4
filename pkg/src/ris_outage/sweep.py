"""Sweep engine: evaluate a scenario over its sweep range.

Each sweep point yields the exact OP, the high-SNR approximation, the
closed-form floor (misaligned scenarios only), and optionally a Monte
Carlo estimate.  Points are independent and may be evaluated in
parallel; output order is always sweep order and Monte Carlo seeds are a
pure function of (scenario seed, point index).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace as dc_replace

from .cascade import moment_match
from .errors import (
    DegenerateJitter,
    DegenerateParameters,
    FloorUndefined,
    RisOutageError,
)
from .geometry import misalignment_stats
from .montecarlo import MCConfig, simulate_op
from .outage import HardwareProfile, OutageScenario, op_asymptotic, op_exact, op_floor
from .scenario import ScenarioFile

__all__ = ["SweepRow", "evaluate_sweep", "derived_report", "CSV_HEADER"]

CSV_HEADER = "sweep_value,op_exact,op_asymptotic,op_floor,op_mc,mc_stderr,flags"

_POINT_SEED_STRIDE = 1_000_003  # distinct deterministic stream per sweep point


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    op_exact: float
    op_asymptotic: float | None
    op_floor: float | None
    op_mc: float | None
    mc_stderr: float | None
    flags: tuple[str, ...]

    def csv_line(self) -> str:
        def fmt(v):
            return "" if v is None else f"{v:.12g}"

        return ",".join(
            [
                f"{self.sweep_value:.12g}",
                fmt(self.op_exact),
                fmt(self.op_asymptotic),
                fmt(self.op_floor),
                fmt(self.op_mc),
                fmt(self.mc_stderr),
                ";".join(self.flags),
            ]
        )


def _point_inputs(scn: ScenarioFile, value: float):
    """Resolve (hardware, geometry, gamma, gamma_th) for one sweep point."""
    hw = scn.hardware
    geometry = scn.geometry
    gamma_th = scn.gamma_th
    if scn.sweep.variable == "gamma_over_gamma_th_db":
        gamma = gamma_th * 10.0 ** (value / 10.0)
    else:
        gamma = scn.gamma
        if scn.sweep.variable == "gamma_th":
            gamma_th = value
        elif scn.sweep.variable == "kappa":
            hw = HardwareProfile(kappa_s=value, kappa_d=value)
        else:  # geometry sweeps
            geometry = dc_replace(geometry, **{scn.sweep.variable: value})
    return hw, geometry, gamma, gamma_th


def evaluate_sweep(scn: ScenarioFile, with_mc: bool = False) -> list[SweepRow]:
    """Evaluate every sweep point.  Numeric failures raise RisOutageError
    with the offending sweep value in the message."""
    kg = moment_match(scn.hop1, scn.hop2, scn.n_elements)
    values = scn.sweep.values()

    def eval_point(item) -> SweepRow:
        index, value = item
        try:
            return _eval_point_inner(scn, index, value, with_mc)
        except RisOutageError as exc:
            raise type(exc)(
                f"{exc} (at sweep point {scn.sweep.variable} = {value:g})"
            ) from exc

    def _eval_point_inner(scn, index, value, with_mc) -> SweepRow:
        flags: list[str] = []
        hw, geometry, gamma, gamma_th = _point_inputs(scn, value)
        mis = None
        if geometry is not None:
            try:
                mis = misalignment_stats(geometry)
            except DegenerateJitter:
                mis = None  # aligned path
                flags.append("aligned")
        scenario = OutageScenario(
            kg=kg, hw=hw, gamma=gamma, gamma_th=gamma_th, mis=mis
        )
        exact = op_exact(scenario)
        try:
            asym = op_asymptotic(scenario)
        except DegenerateParameters:
            asym = None
            flags.append("asymptote_undefined")
        floor = None
        if mis is not None:
            try:
                floor = op_floor(scenario)
            except FloorUndefined:
                flags.append("floor_undefined")
        mc_hat = mc_err = None
        if with_mc and scn.mc is not None:
            cfg = MCConfig(
                samples=scn.mc.samples,
                seed=scn.mc.seed + _POINT_SEED_STRIDE * index,
                chunk_size=scn.mc.chunk_size,
                workers=1,  # outer parallelism; results identical either way
            )
            est = simulate_op(
                scn.hop1, scn.hop2, scn.n_elements, mis, hw, gamma, gamma_th, cfg
            )
            mc_hat, mc_err = est.op_hat, est.stderr
            if est.tail_flag:
                flags.append("mc_tail")
        return SweepRow(
            sweep_value=value,
            op_exact=exact,
            op_asymptotic=asym,
            op_floor=floor,
            op_mc=mc_hat,
            mc_stderr=mc_err,
            flags=tuple(flags),
        )

    tasks = list(enumerate(values))
    if len(tasks) == 1:
        return [eval_point(tasks[0])]
    with ThreadPoolExecutor() as pool:
        return list(pool.map(eval_point, tasks))


def derived_report(scn: ScenarioFile) -> dict:
    """Derived quantities a user should audit before sweeping."""
    kg = moment_match(scn.hop1, scn.hop2, scn.n_elements)
    gamma_th_max = (
        math.inf
        if scn.hardware.kappa_sq_sum == 0.0
        else 1.0 / scn.hardware.kappa_sq_sum
    )
    out = {
        "hop1": scn.hop1.label,
        "hop2": scn.hop2.label,
        "n_elements": scn.n_elements,
        "k_a": kg.k_a,
        "m_a": kg.m_a,
        "xi": kg.xi,
        "omega_a": kg.omega_a,
        "gamma_th_max": gamma_th_max,
    }
    if scn.geometry is not None:
        try:
            mis = misalignment_stats(scn.geometry)
        except DegenerateJitter:
            out["misalignment"] = "degenerate jitter (aligned path)"
        else:
            out.update(
                {
                    "w_l2": mis.w_l2,
                    "rho_l2": mis.rho_l2,
                    "b_o": mis.b_o,
                    "zeta": mis.zeta,
                    "k_m": mis.k_m,
                }
            )
            if mis.zeta >= 2.0 * min(kg.k_a, kg.m_a):
                out["floor"] = "UNDEFINED (Gamma-argument condition violated)"
            else:
                scenario = OutageScenario(
                    kg=kg,
                    hw=scn.hardware,
                    gamma=1.0,
                    gamma_th=min(scn.gamma_th, 1.0),
                    mis=mis,
                )
                out["floor"] = op_floor(scenario)
    return out
