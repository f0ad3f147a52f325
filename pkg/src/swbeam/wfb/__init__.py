"""Traffic-driven self-organisation using wireless flow betweenness."""

from .centrality import simple_betweenness, wfb_on_overhear, wfb_on_transmit
from .decision import (
    DecisionOutcome,
    apply_decisions,
    beam_decision,
    beamformed_config,
    check_suppression,
    choose_orientation,
    neighborhood_average,
    per_node_theta,
)
from .logs import export_decisions, export_events, load_decisions, load_events
from .state import (
    DecisionRecord,
    Flow,
    NeighborRecord,
    ScheduledTransmission,
    SlotEvent,
    WfbNodeState,
)
from .traffic import generate_traffic, min_hop_route
from .warmup import WarmupResult, build_schedule, initial_states, run_warmup

__all__ = [
    "DecisionOutcome",
    "DecisionRecord",
    "Flow",
    "NeighborRecord",
    "ScheduledTransmission",
    "SlotEvent",
    "WarmupResult",
    "WfbNodeState",
    "apply_decisions",
    "beam_decision",
    "beamformed_config",
    "build_schedule",
    "check_suppression",
    "choose_orientation",
    "export_decisions",
    "export_events",
    "generate_traffic",
    "initial_states",
    "load_decisions",
    "load_events",
    "min_hop_route",
    "neighborhood_average",
    "per_node_theta",
    "run_warmup",
    "simple_betweenness",
    "wfb_on_overhear",
    "wfb_on_transmit",
]
