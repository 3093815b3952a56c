"""Nerve-signaling speed-accuracy model and reach-time cost decomposition.

A bundle of n axons of mean radius rho in cross-section s trades signaling
delay against data rate along R = lambda * T_s, where lambda scales with the
spatial/metabolic budget. Reach-time cost splits into a delay cost T and a
rate cost F/R; minimising their sum under the bundle constraint gives the
sweet spot T = sqrt(F/lambda), R = sqrt(lambda*F).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable


@dataclass(frozen=True)
class NerveBundleSpec:
    """Axon-bundle geometry plus propagation and firing constants.

    cross_section: total cross-sectional area s
    radius: mean axon radius rho
    alpha_prop: propagation constant, T_s = alpha_prop / rho
    beta_fire: firing constant, per-axon rate phi = beta_fire * rho
    """

    cross_section: float
    radius: float
    alpha_prop: float = 1.0
    beta_fire: float = 1.0

    def __post_init__(self):
        for name in ("cross_section", "radius", "alpha_prop", "beta_fire"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def n_axons(self) -> float:
        """s / (pi * rho^2)."""
        return self.cross_section / (math.pi * self.radius**2)

    @property
    def budget(self) -> float:
        """lambda = s * beta_fire / (pi * alpha_prop)."""
        return self.cross_section * self.beta_fire / (math.pi * self.alpha_prop)


@dataclass(frozen=True)
class CostBreakdown:
    """Reach-time cost at one operating point: total = delay + rate cost."""

    rate: float
    delay_cost: float
    rate_cost: float

    @property
    def total(self) -> float:
        return self.delay_cost + self.rate_cost


def bundle_to_channel(bundle: NerveBundleSpec) -> tuple[float, float]:
    """(T_s, R) realised by a bundle; satisfies R = lambda * T_s exactly."""
    t_s = bundle.alpha_prop / bundle.radius
    return t_s, bundle.budget * t_s


def sweet_spot(difficulty: float, budget: float) -> tuple[float, float, float]:
    """Minimiser of T + F/R subject to R = lambda*T.

    Returns (T, R, total cost) = (sqrt(F/lambda), sqrt(lambda*F), 2*sqrt(F/lambda)).
    """
    if difficulty < 0:
        raise ValueError("difficulty must be non-negative")
    if budget <= 0:
        raise ValueError("budget must be positive")
    t = math.sqrt(difficulty / budget)
    return t, math.sqrt(budget * difficulty), 2 * t


def cost_sweep(
    difficulty: float,
    constraint: Callable[[float], float],
    rate_grid: Iterable[float],
) -> list[CostBreakdown]:
    """Delay/rate/total cost along a component SAT constraint T = constraint(R).

    The constraint is passed as data so the same sweep serves both the
    theoretical curves and the externally injected experiment constraint.
    """
    out = []
    for r in rate_grid:
        if r <= 0:
            raise ValueError("rates must be positive")
        out.append(
            CostBreakdown(rate=r, delay_cost=constraint(r), rate_cost=difficulty / r)
        )
    return out


def combined_constraint(r: float) -> float:
    """The experiments' component SAT: T = (R - 1) / 8."""
    return (r - 1) / 8
