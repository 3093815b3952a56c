"""Speed-accuracy tradeoffs in sensorimotor control: simulators and trials.

Layers, roughly bottom-up:

- ``dynamics``: scalar error dynamics, reach tasks, reach-and-stay time.
- ``channel``: delayed/quantized feedback channels, the reaching-time lower
  bound, and the bisection oracle that achieves it.
- ``nerve``: axon-bundle SAT (R = lambda * T_s) and the delay/rate sweet spot.
- ``muscle``: motor-unit activation dynamics and recruitment.
- ``reach``: muscle-driven reaches against stick-slip friction; frontiers.
- ``transport``: diversity sweet spots in a travel-time model.
- ``engine``/``agents``/``logs``: the human-in-the-loop trial engine,
  scripted reference agents, and append-only session logs with replay.
- ``protocol``/``service``: the wire schema and the WebSocket trial server.
"""

from .channel import (
    ChannelSpec,
    DelayLine,
    QuantizerState,
    bound,
    make_quantizer,
    oracle_controller,
    oracle_reach_time,
    quantize_step,
    refinement_steps,
    worst_case_reach_time,
)
from .dynamics import ErrorState, ReachTask, Trajectory, reaching_time, step
from .engine import (
    Condition,
    FittsFit,
    SpeedMap,
    TrialLoop,
    TrialRecord,
    condition_schedule,
    estimate_internal_delay,
    fit_fitts,
    run_trial,
    worst_case_target,
)
from .muscle import MotorUnit, MuscleSpec, advance, muscle, recruit, steady_activation
from .nerve import (
    CostBreakdown,
    NerveBundleSpec,
    bundle_to_channel,
    combined_constraint,
    cost_sweep,
    sweet_spot,
)
from .reach import (
    FrictionSpec,
    FrontierPoint,
    ReachPlan,
    frontier,
    min_time_for,
    sat_curve,
    simulate_reach,
    two_muscle_frontier,
)
from .service import create_app, export_results, open_session
from .transport import TransportMode, TravelPlan, diverse_time, plan_diverse, uniform_time

__all__ = [
    "ChannelSpec",
    "Condition",
    "CostBreakdown",
    "DelayLine",
    "ErrorState",
    "FittsFit",
    "FrictionSpec",
    "FrontierPoint",
    "MotorUnit",
    "MuscleSpec",
    "NerveBundleSpec",
    "QuantizerState",
    "ReachPlan",
    "ReachTask",
    "SpeedMap",
    "Trajectory",
    "TransportMode",
    "TravelPlan",
    "TrialLoop",
    "TrialRecord",
    "advance",
    "bound",
    "bundle_to_channel",
    "combined_constraint",
    "condition_schedule",
    "cost_sweep",
    "create_app",
    "diverse_time",
    "estimate_internal_delay",
    "export_results",
    "fit_fitts",
    "frontier",
    "make_quantizer",
    "min_time_for",
    "muscle",
    "open_session",
    "oracle_controller",
    "oracle_reach_time",
    "plan_diverse",
    "quantize_step",
    "reaching_time",
    "recruit",
    "refinement_steps",
    "run_trial",
    "sat_curve",
    "simulate_reach",
    "steady_activation",
    "step",
    "sweet_spot",
    "two_muscle_frontier",
    "uniform_time",
    "worst_case_reach_time",
    "worst_case_target",
]

__version__ = "0.1.0"
