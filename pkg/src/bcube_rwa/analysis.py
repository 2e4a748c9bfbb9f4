"""Closed-form indices, exact-rational bound checks, and tiny-instance oracles.

Verification here is exact: distances and averages are held as rationals,
never floats, and every closed form is cross-checked against explicit
enumeration before it lands in a report.  The brute-force oracles search
over all shortest-path routing choices on instances small enough to
enumerate; when the result meets the distance lower bound, restricting to
shortest paths provably lost nothing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .coloring import exact_chromatic
from .errors import CapacityError, DomainError, VerificationError
from .routing import (
    descending_routing,
    enumerate_shortest_paths,
    hamming_distance,
    max_link_load,
)
from .rwa import (
    RwaPlan,
    greedy_global_plan,
    layered_plan,
    oblivious_plan,
    two_layer_plan,
    verify_nonblocking,
)
from .topology import DEFAULT_HOST_CAP, BCube

ORACLE_HOST_CAP = 8
ORACLE_COMBO_CAP = 10_000_000
ORACLE_CONFLICT_NODE_CAP = 24

ALL_SCHEMES = ("oblivious", "layered", "greedy", "two-layer")


def _validate_parameters(ell: int, d: int) -> None:
    if ell < 1:
        raise DomainError(f"ell must be >= 1, got {ell}")
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")


def forwarding_index(ell: int, d: int) -> int:
    """Minimum over routings of the maximum link load: ``d**ell - d**(ell-1)``."""
    _validate_parameters(ell, d)
    return d**ell - d ** (ell - 1)


def avg_host_distance(ell: int, d: int) -> Fraction:
    """Average directed-link distance between distinct hosts, exact.

    Each hop crosses two directed links, so the distance of a pair is
    twice its Hamming distance; averaging over ordered pairs gives
    ``2 * ell * (d-1)/d * n/(n-1)`` with ``n = d**ell``.
    """
    _validate_parameters(ell, d)
    hosts = d**ell
    return Fraction(2 * ell * (d - 1), d) * Fraction(hosts, hosts - 1)


def load_lower_bound(ell: int, d: int) -> int:
    """Distance-counting lower bound on the maximum link load of any routing.

    Total distance ``n * (n-1) * avg`` must be carried by ``2 * ell * n``
    directed links, so some link carries at least the ceiling of the mean.
    """
    hosts = d**ell
    total = hosts * (hosts - 1) * avg_host_distance(ell, d)
    return math.ceil(total / (2 * ell * hosts))


def optical_upper_bound(ell: int, d: int) -> int:
    """Closed-form upper bound on the wavelength count.

    Exact for one and two layers (``d - 1`` and ``d**2 - d``); for three
    or more layers it is the per-weight-class coloring budget
    ``d**ell - d**floor(ell/2) - (floor(ell/2) - 1)``.
    """
    _validate_parameters(ell, d)
    if ell == 1:
        return d - 1
    if ell == 2:
        return d * d - d
    half = ell // 2
    return d**ell - d**half - (half - 1)


def _routing_choices(topology: BCube, max_combos: int):
    """Per-pair shortest-path alternatives, with the combination guard."""
    if topology.num_hosts > ORACLE_HOST_CAP:
        raise CapacityError(
            f"oracle limited to {ORACLE_HOST_CAP} hosts, got {topology.num_hosts}"
        )
    choices = []
    combos = 1
    for src in topology.hosts:
        for dst in topology.hosts:
            if src == dst:
                continue
            paths = enumerate_shortest_paths(topology, src, dst)
            combos *= len(paths)
            if combos > max_combos:
                raise CapacityError(
                    f"more than {max_combos} shortest-path routings to enumerate"
                )
            choices.append(paths)
    return choices


def bruteforce_forwarding_index(
    topology: BCube, max_combos: int = ORACLE_COMBO_CAP
) -> int:
    """Exhaustive minimum over shortest-path routings of the max link load."""
    choices = _routing_choices(topology, max_combos)
    link_lists = [
        [
            [
                topology.link_index(link.direction, link.layer, link.host)
                for link in path.links(topology)
            ]
            for path in paths
        ]
        for paths in choices
    ]
    best = None
    for combo in itertools.product(*link_lists):
        loads = [0] * topology.num_links
        for links in combo:
            for index in links:
                loads[index] += 1
        worst = max(loads)
        if best is None or worst < best:
            best = worst
    return best


def bruteforce_optical_index(
    topology: BCube, max_combos: int = ORACLE_COMBO_CAP
) -> int:
    """Exhaustive minimum over shortest-path routings of the wavelengths needed.

    Unlike the shipped schemes, every path may take its own wavelength:
    each candidate routing becomes a conflict graph on paths (adjacent when
    they share a directed link) whose exact chromatic number is computed.
    """
    choices = _routing_choices(topology, max_combos)
    if len(choices) > ORACLE_CONFLICT_NODE_CAP:
        raise CapacityError(
            f"exact coloring capped at {ORACLE_CONFLICT_NODE_CAP} paths, "
            f"got {len(choices)}"
        )
    link_sets = [
        [
            frozenset(
                topology.link_index(link.direction, link.layer, link.host)
                for link in path.links(topology)
            )
            for path in paths
        ]
        for paths in choices
    ]
    best = None
    for combo in itertools.product(*link_sets):
        nodes = list(range(len(combo)))
        adjacency = {
            i: {j for j in nodes if j != i and combo[i] & combo[j]} for i in nodes
        }
        chi, _ = exact_chromatic(nodes, adjacency, max_nodes=ORACLE_CONFLICT_NODE_CAP)
        if best is None or chi < best:
            best = chi
    return best


@dataclass
class IndexReport:
    """All indices, bounds, and achieved wavelength counts for one instance."""

    ell: int
    d: int
    forwarding_index: int
    load_lower_bound: int
    avg_host_distance: Fraction
    optical_lower: int
    optical_upper: int
    achieved: dict[str, int] = field(default_factory=dict)
    oracle_forwarding: int | None = None
    oracle_optical: int | None = None
    oracle_note: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "ell": self.ell,
            "d": self.d,
            "forwarding_index": self.forwarding_index,
            "load_lower_bound": self.load_lower_bound,
            "avg_host_distance": str(self.avg_host_distance),
            "optical_lower": self.optical_lower,
            "optical_upper": self.optical_upper,
            "achieved": dict(sorted(self.achieved.items())),
            "oracle": None
            if self.oracle_forwarding is None and self.oracle_optical is None
            else {
                "forwarding": self.oracle_forwarding,
                "optical": self.oracle_optical,
                "note": self.oracle_note,
            },
        }


def _brute_avg_distance(topology: BCube) -> Fraction:
    total = 0
    for src in topology.hosts:
        for dst in topology.hosts:
            if src != dst:
                total += 2 * hamming_distance(src, dst)
    pairs = topology.num_hosts * (topology.num_hosts - 1)
    return Fraction(total, pairs)


_PLAN_BUILDERS = {
    "oblivious": oblivious_plan,
    "layered": layered_plan,
    "greedy": greedy_global_plan,
    "two-layer": two_layer_plan,
}


def _run_scheme(topology: BCube, scheme: str) -> RwaPlan:
    plan = _PLAN_BUILDERS[scheme](topology)
    certificate = verify_nonblocking(topology, plan)
    if not certificate.ok:
        raise VerificationError(
            f"scheme {scheme} produced a blocking plan: {certificate.to_json_dict()}"
        )
    return plan


def _check_report(report: IndexReport) -> None:
    """The bound chain and per-scheme exact values; any miss is a hard error."""
    ell, d = report.ell, report.d
    closed = d**ell - d ** (ell - 1)
    failures = []
    if report.forwarding_index != closed:
        failures.append(
            f"enumerated max link load {report.forwarding_index} != closed form {closed}"
        )
    if report.load_lower_bound != closed:
        failures.append(
            f"distance lower bound {report.load_lower_bound} != closed form {closed}"
        )
    if report.optical_upper > d**ell - 1:
        failures.append("closed-form upper bound exceeds the wavelength-per-class cap")
    for scheme, count in report.achieved.items():
        if count < report.optical_lower:
            failures.append(f"scheme {scheme} beat the lower bound: impossible")
    expected = {
        "oblivious": d**ell - 1,
        "two-layer": d * d - d if ell == 2 else None,
        "layered": optical_upper_bound(ell, d) if ell <= 2 else None,
    }
    for scheme, value in expected.items():
        count = report.achieved.get(scheme)
        if value is not None and count is not None and count != value:
            failures.append(f"scheme {scheme} used {count} wavelengths, expected {value}")
    greedy = report.achieved.get("greedy")
    layered = report.achieved.get("layered")
    if layered is not None and layered > report.optical_upper:
        failures.append(
            f"layered count {layered} exceeds the closed-form bound {report.optical_upper}"
        )
    if greedy is not None and layered is not None and greedy > layered:
        failures.append(f"greedy count {greedy} exceeds layered count {layered}")
    if failures:
        raise VerificationError("; ".join(failures))


def full_report(
    ell: int,
    d: int,
    schemes=None,
    include_oracle: bool = False,
    host_cap: int = DEFAULT_HOST_CAP,
) -> IndexReport:
    """Build the instance, run the schemes, and verify every bound relation.

    The forwarding index and the average distance are recomputed by full
    enumeration and compared against their closed forms before the report
    is returned; any mismatch or bound-chain violation raises.
    """
    _validate_parameters(ell, d)
    if schemes is None:
        schemes = ("oblivious", "layered", "greedy") + (("two-layer",) if ell == 2 else ())
    for scheme in schemes:
        if scheme not in _PLAN_BUILDERS:
            raise DomainError(f"unknown scheme {scheme!r}; pick from {ALL_SCHEMES}")
        if scheme == "two-layer" and ell != 2:
            raise DomainError("the two-layer scheme only applies when ell = 2")
    topology = BCube(ell, d, host_cap=host_cap)

    avg = avg_host_distance(ell, d)
    if avg != _brute_avg_distance(topology):
        raise VerificationError(
            f"closed-form average distance {avg} disagrees with enumeration"
        )
    report = IndexReport(
        ell=ell,
        d=d,
        forwarding_index=max_link_load(topology, descending_routing(topology)),
        load_lower_bound=load_lower_bound(ell, d),
        avg_host_distance=avg,
        optical_lower=forwarding_index(ell, d),
        optical_upper=optical_upper_bound(ell, d),
    )
    for scheme in schemes:
        report.achieved[scheme] = _run_scheme(topology, scheme).wavelength_count
    if include_oracle:
        report.oracle_forwarding = bruteforce_forwarding_index(topology)
        report.oracle_optical = bruteforce_optical_index(topology)
        if report.oracle_optical == report.optical_lower:
            report.oracle_note = "optimal: meets the distance lower bound"
        else:
            report.oracle_note = "shortest-path-restricted minimum"
    _check_report(report)
    return report


_COLUMNS = ("ell", "d", "pi", "oblivious", "layered", "greedy", "bound", "oracle")


def _report_row(report: IndexReport) -> tuple[str, ...]:
    def cell(value) -> str:
        return "-" if value is None else str(value)

    return (
        str(report.ell),
        str(report.d),
        str(report.forwarding_index),
        cell(report.achieved.get("oblivious")),
        cell(report.achieved.get("layered")),
        cell(report.achieved.get("greedy")),
        str(report.optical_upper),
        cell(report.oracle_optical),
    )


def report_table(reports) -> str:
    """Aligned text table, one row per instance."""
    rows = [_COLUMNS] + [_report_row(report) for report in reports]
    widths = [max(len(row[i]) for row in rows) for i in range(len(_COLUMNS))]
    lines = [
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
        for row in rows
    ]
    return "\n".join(lines) + "\n"


def report_csv(reports) -> str:
    lines = [",".join(_COLUMNS)]
    lines.extend(",".join(_report_row(report)) for report in reports)
    return "\n".join(lines) + "\n"
