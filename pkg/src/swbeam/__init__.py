"""Small-world wireless ad hoc networks built with long range directional beams."""

__version__ = "0.1.0"

from .antenna import Omni, Sector, Ula, optimal_beamwidth
from .errors import SwbeamError
from .linkgraph import DirectedLinkGraph, build_link_graph
from .metrics import MetricsReport, compute_report
from .topology import Topology, generate_connected_topology, generate_topology

__all__ = [
    "DirectedLinkGraph",
    "MetricsReport",
    "Omni",
    "Sector",
    "SwbeamError",
    "Topology",
    "Ula",
    "build_link_graph",
    "compute_report",
    "generate_connected_topology",
    "generate_topology",
    "optimal_beamwidth",
]
