"""All-optical BCube topologies, routing, and wavelength assignment.

Build the explicit topology, route every ordered host pair along its
descending shortest path, assign wavelengths per shift class, and verify
the resulting load and wavelength counts against their closed forms.
"""

from .analysis import (
    IndexReport,
    avg_host_distance,
    bruteforce_forwarding_index,
    bruteforce_optical_index,
    forwarding_index,
    full_report,
    load_lower_bound,
    optical_upper_bound,
    report_csv,
    report_table,
)
from .cpr import (
    CollisionReport,
    LinkDisjointCertificate,
    Shift,
    ShiftRouting,
    all_nonzero_shifts,
    apply_shift,
    classify_pair,
    decompose_traffic,
    layer_usage,
    shift_routing,
    verify_collision,
    verify_link_disjoint,
)
from .errors import (
    BCubeError,
    CapacityError,
    DomainError,
    IntegrityError,
    VerificationError,
)
from .routing import (
    DiPath,
    Hop,
    Routing,
    descending_path,
    descending_routing,
    downlink_pair_count,
    enumerate_shortest_paths,
    hamming_distance,
    link_loads,
    link_occupants,
    load_report_csv,
    max_link_load,
    routing_to_json_dict,
    shortest_path,
    uplink_pair_count,
)
from .rwa import (
    Coloring,
    ConflictGraph,
    NonblockingCertificate,
    RwaPlan,
    Wavelength,
    build_conflict_graph,
    greedy_coloring,
    greedy_global_plan,
    layered_plan,
    oblivious_plan,
    oblivious_wavelength,
    plan_from_json_dict,
    plan_to_json_dict,
    two_layer_plan,
    verify_nonblocking,
)
from .topology import (
    DOWN,
    UP,
    BCube,
    DirectedLink,
    Host,
    SubcubeView,
    Switch,
    build,
)

__version__ = "0.1.0"
