"""Coverage-target selection on a nested chain.

Given a chain and a mass-coverage target tau, the fractional optimum mixes the
two chain sets whose induced weights bracket tau * W; its vertex values are 1
on the lower set and alpha on the gap.  Two integral routes are exposed:

* ``round_fractional``: threshold the fractional values at rho = kappa/(1+kappa),
  returning the upper bracket set exactly when alpha >= rho;
* ``select``: the smallest chain set whose residual mass is at most
  (1+kappa)*(1-tau)*W.

``select`` never sits above ``round_fractional`` in the chain, so both satisfy
the same size and residual guarantees; they are kept separate and are
cross-checked in tests rather than merged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chain import NestedChain
from .hypergraph import InputError, InvariantError, as_fraction

__all__ = [
    "FractionalSolution",
    "Selection",
    "fractional_solution",
    "round_fractional",
    "select",
    "tau_threshold",
]


def _check_tau(tau) -> Fraction:
    tau = as_fraction(tau)
    if not 0 <= tau <= 1:
        raise InputError(f"coverage target must lie in [0, 1], got {tau}")
    return tau


def _check_kappa(kappa) -> Fraction:
    kappa = as_fraction(kappa)
    if kappa <= 0:
        raise InputError(f"slack parameter must be positive, got {kappa}")
    return kappa


@dataclass(frozen=True)
class FractionalSolution:
    """Optimal fractional mix between two consecutive chain sets.

    Vertex values: 1 on sets[lower], alpha on sets[upper] minus sets[lower],
    0 elsewhere.  objective = |lower| + alpha * (|upper| - |lower|); the
    covered mass equals target_mass exactly.  lam_star is the breakpoint
    certificate: objective == min_K Phi(K, lam_star) + lam_star * target_mass.
    """

    lower_index: int
    upper_index: int
    alpha: Fraction
    lam_star: Fraction
    objective: Fraction
    target_mass: Fraction


@dataclass(frozen=True)
class Selection:
    """An integral chain choice with its residual-mass certificate."""

    index: int
    vertex_set: frozenset[int]
    residual: Fraction
    bound: Fraction

    def __post_init__(self):
        if self.residual > self.bound:
            raise InvariantError(
                f"selection certificate violated: residual {self.residual} "
                f"exceeds bound {self.bound}"
            )


def fractional_solution(chain: NestedChain, tau) -> FractionalSolution:
    tau = _check_tau(tau)
    target = tau * chain.total
    induced = chain.induced
    if target > induced[-1]:
        raise InputError(f"target mass {target} exceeds reachable mass {induced[-1]}")
    # exact hit on a chain set: degenerate mix with alpha = 0
    for j, e in enumerate(induced):
        if e == target:
            lam = chain.breakpoints[j - 1] if j >= 1 else Fraction(0)
            return FractionalSolution(j, j, Fraction(0), lam, Fraction(len(chain.sets[j])), target)
    if induced[0] > target:
        # mass attached to no vertex already over-covers; the LP optimum is empty
        return FractionalSolution(0, 0, Fraction(0), Fraction(0), Fraction(0), target)
    j = max(i for i, e in enumerate(induced) if e < target)
    lo, hi = chain.sets[j], chain.sets[j + 1]
    alpha = (target - induced[j]) / (induced[j + 1] - induced[j])
    objective = len(lo) + alpha * (len(hi) - len(lo))
    return FractionalSolution(j, j + 1, alpha, chain.breakpoints[j], objective, target)


def round_fractional(chain: NestedChain, tau, kappa) -> Selection:
    """Threshold the fractional values at rho = kappa / (1 + kappa)."""
    kappa = _check_kappa(kappa)
    frac = fractional_solution(chain, tau)
    rho = kappa / (1 + kappa)
    index = frac.upper_index if frac.alpha >= rho else frac.lower_index
    return _selection(chain, index, _check_tau(tau), kappa)


def select(chain: NestedChain, tau, kappa) -> Selection:
    """Smallest chain set with residual mass <= (1+kappa)*(1-tau)*W."""
    tau = _check_tau(tau)
    kappa = _check_kappa(kappa)
    bound = (1 + kappa) * (1 - tau) * chain.total
    for index, r in enumerate(chain.residuals):
        if r <= bound:
            return _selection(chain, index, tau, kappa)
    raise InputError(f"no chain set meets residual bound {bound}")  # r_k = 0 <= bound


def _selection(chain: NestedChain, index: int, tau: Fraction, kappa: Fraction) -> Selection:
    bound = (1 + kappa) * (1 - tau) * chain.total
    return Selection(index, chain.sets[index], chain.residuals[index], bound)


def tau_threshold(chain: NestedChain, b: frozenset[int], kappa) -> Fraction:
    """Smallest coverage target whose selection first contains ``b``.

    Returns 1 when b is not contained even in the top chain set.  Under
    ``select``'s non-strict residual rule the containment region is the open
    interval above the returned value; under the boundary-inclusive
    prediction rule the region is closed and the returned value is attained.
    Either way this infimum is the calibration score.
    """
    kappa = _check_kappa(kappa)
    b = frozenset(b)
    if not b:
        return Fraction(0)
    if not b <= chain.sets[-1]:
        return Fraction(1)
    j = next(i for i, s in enumerate(chain.sets) if b <= s)
    prev_residual = chain.residuals[j - 1]
    value = 1 - prev_residual / ((1 + kappa) * chain.total)
    return max(Fraction(0), value)
