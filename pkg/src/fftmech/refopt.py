"""Search for the reference Young modulus minimizing the iteration count.

The figure of merit is N(E0), the number of iterations needed to reach the
target equilibrium residual, at a fixed reference Poisson ratio of 0.25.  The
descent compares N(E0) against N(E0 + dE0) with dE0 = 0.01 E0 to pick a
direction; ties fall back to comparing the residual reached after the same
number of iterations, and the walk stops once N has not changed over two
accepted steps (or both tie-breakers are exact ties).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .elastic import IsotropicModuli, LoadingSpec
from .grid import PhaseGrid
from .solve import (Algorithm, SolveConfig, StopCause, default_reference, solve)
from .green import Scheme

REFERENCE_POISSON = 0.25


@dataclass
class DescentStep:
    e0: float
    iterations: int
    eta_at_n: float


@dataclass
class DescentTrace:
    steps: list[DescentStep] = field(default_factory=list)
    final_e0: float = float("nan")
    final_iterations: int = 0
    stop_reason: str = ""

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["step", "E0", "N", "eta_at_N"])
            for i, s in enumerate(self.steps):
                writer.writerow([i, f"{s.e0:.10g}", s.iterations, f"{s.eta_at_n:.6g}"])


class DescentError(RuntimeError):
    pass


def _measure(phases, moduli, loading, algorithm, scheme, e0, tolerance, cap, dim):
    ref = IsotropicModuli.from_young_poisson(e0, REFERENCE_POISSON, dim)
    config = SolveConfig(scheme=scheme, algorithm=algorithm, reference=ref,
                         tolerance=tolerance, cap=cap)
    report = solve(phases, moduli, loading, config)
    if report.stop is not StopCause.TOLERANCE_REACHED:
        return None, report
    return report.iterations, report


def optimize_reference(phases: PhaseGrid, moduli_by_phase, loading: LoadingSpec,
                       algorithm: Algorithm, scheme: Scheme,
                       tolerance: float = 1e-8, cap: int = 50_000,
                       initial_e0: float | None = None,
                       max_steps: int = 400) -> DescentTrace:
    """Local descent on E0; N measured to the given residual tolerance."""
    dim = phases.spec.dim
    if initial_e0 is None:
        chi = moduli_by_phase[2].mu / moduli_by_phase[1].mu
        if algorithm is Algorithm.DIRECT:
            e1 = moduli_by_phase[1].young(dim)
            e2 = moduli_by_phase[2].young(dim)
            initial_e0 = 0.51 * (e1 + e2)
        else:
            initial_e0 = default_reference(algorithm, chi, moduli_by_phase,
                                           dim).young(dim)

    def measure(e0):
        n, report = _measure(phases, moduli_by_phase, loading, algorithm,
                             scheme, e0, tolerance, cap, dim)
        return n, report

    trace = DescentTrace()
    e0 = float(initial_e0)
    n0, report0 = measure(e0)
    if n0 is None:
        raise DescentError(
            f"solver did not reach eta <= {tolerance} at the initial guess "
            f"E0 = {e0:.4g}; try a different starting value")
    eta0 = report0.eta_trace[n0 - 1]
    trace.steps.append(DescentStep(e0, n0, float(eta0)))

    accepted_n = [n0]
    for _ in range(max_steps):
        delta = 0.01 * e0
        n_up, report_up = measure(e0 + delta)
        if n_up is None:
            direction = -1
        elif n_up < n0:
            direction = +1
        elif n_up > n0:
            direction = -1
        else:
            # same N: compare the residual after that many iterations
            eta_up = report_up.eta_trace[n_up - 1]
            if np.isclose(eta_up, eta0, rtol=0, atol=0):
                trace.stop_reason = "exact tie on N and eta"
                break
            direction = +1 if eta_up < eta0 else -1

        if direction == +1 and n_up is not None:
            e0, n0, eta0 = e0 + delta, n_up, float(report_up.eta_trace[n_up - 1])
        else:
            n_dn, report_dn = measure(e0 - delta)
            if n_dn is None:
                # stepping down leaves the convergent region; stay put
                trace.stop_reason = "downhill step stopped converging"
                break
            e0, n0, eta0 = e0 - delta, n_dn, float(report_dn.eta_trace[n_dn - 1])
        trace.steps.append(DescentStep(e0, n0, eta0))
        accepted_n.append(n0)
        if len(accepted_n) >= 3 and accepted_n[-1] == accepted_n[-2] == accepted_n[-3]:
            trace.stop_reason = "N unchanged after two descent steps"
            break
    else:
        trace.stop_reason = "step budget exhausted"

    trace.final_e0 = e0
    trace.final_iterations = n0
    return trace


def scan_reference(phases: PhaseGrid, moduli_by_phase, loading: LoadingSpec,
                   algorithm: Algorithm, scheme: Scheme, e0_values,
                   tolerance: float = 1e-8, cap: int = 50_000) -> list[DescentStep]:
    """Exhaustive N(E0) scan over a list of reference moduli; non-converging
    entries carry iterations = cap and eta at the cap."""
    dim = phases.spec.dim
    out = []
    for e0 in e0_values:
        n, report = _measure(phases, moduli_by_phase, loading, algorithm,
                             scheme, float(e0), tolerance, cap, dim)
        if n is None:
            out.append(DescentStep(float(e0), cap, float(report.eta_trace[-1])))
        else:
            out.append(DescentStep(float(e0), n, float(report.eta_trace[n - 1])))
    return out
