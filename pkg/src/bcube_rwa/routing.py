"""Shortest dipaths, the all-pairs descending routing, and link loads.

A hop goes host -> switch -> host and corrects exactly one digit of the
address; a shortest path between hosts at Hamming distance ``m`` is one
hop per differing digit, and the order in which the digits are fixed
determines the path.  The *descending* path fixes the highest differing
digit first.  Loads count how many paths of a routing cross each
directed link.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CapacityError, DomainError, IntegrityError
from .topology import DOWN, UP, BCube, DirectedLink, Host, Switch, format_digits

DEFAULT_ENUMERATION_CAP = 10_000
DEFAULT_PATH_CAP = 10_000_000


@dataclass(frozen=True, slots=True)
class Hop:
    """One host -> switch -> host traversal fixing digit ``fixed_digit``."""

    src: Host
    via: Switch
    dst: Host
    fixed_digit: int


@dataclass(frozen=True, slots=True)
class DiPath:
    """A directed path: the ordered hops from ``source`` to ``destination``."""

    source: Host
    destination: Host
    hops: tuple[Hop, ...]

    @property
    def hop_count(self) -> int:
        return len(self.hops)

    @property
    def host_after_first_hop(self) -> Host:
        """Where the path sits after one hop (the source for hopless paths)."""
        return self.hops[0].dst if self.hops else self.source

    def hosts(self) -> tuple[Host, ...]:
        """The visited host sequence, source first."""
        return (self.source,) + tuple(hop.dst for hop in self.hops)

    def links(self, topology: BCube):
        """The directed links traversed: an uplink then a downlink per hop."""
        for hop in self.hops:
            yield DirectedLink(UP, hop.fixed_digit, hop.src)
            yield DirectedLink(DOWN, hop.fixed_digit, hop.dst)


class Routing:
    """A set of dipaths keyed by ordered (source, destination) pair."""

    def __init__(self, paths=()):
        self._paths: dict[tuple[Host, Host], DiPath] = {}
        for path in paths:
            self.add(path)

    def add(self, path: DiPath) -> None:
        key = (path.source, path.destination)
        if key in self._paths:
            raise DomainError(f"duplicate path for pair ({key[0]}, {key[1]})")
        self._paths[key] = path

    def get(self, source: Host, destination: Host) -> DiPath:
        return self._paths[(source, destination)]

    def __len__(self) -> int:
        return len(self._paths)

    def __iter__(self):
        for key in sorted(self._paths):
            yield self._paths[key]

    def pairs(self):
        return sorted(self._paths)


def hamming_distance(a: Host, b: Host) -> int:
    return sum(1 for x, y in zip(a.digits, b.digits) if x != y)


def differing_digits(a: Host, b: Host) -> tuple[int, ...]:
    """1-based positions where two addresses differ, ascending."""
    return tuple(k for k in range(1, len(a.digits) + 1) if a.digit(k) != b.digit(k))


def _fix_digits(src: Host, dst: Host, order) -> DiPath:
    """Build the path fixing digits in the given order; no validation."""
    hops = []
    current = src
    for k in order:
        nxt = current.replace_digit(k, dst.digit(k))
        hops.append(Hop(current, Switch(k, current.drop_digit(k)), nxt, k))
        current = nxt
    return DiPath(src, dst, tuple(hops))


def shortest_path(topology: BCube, src: Host, dst: Host, order) -> DiPath:
    """The shortest path fixing the differing digits in the given order.

    ``order`` must be a permutation of exactly the positions where ``src``
    and ``dst`` differ.
    """
    topology.validate_host(src)
    topology.validate_host(dst)
    if src == dst:
        raise DomainError(f"no path needed from {src} to itself")
    order = tuple(order)
    if sorted(order) != list(differing_digits(src, dst)):
        raise DomainError(
            f"order {order} is not a permutation of the digits where {src} and {dst} differ"
        )
    return _fix_digits(src, dst, order)


def descending_path(topology: BCube, src: Host, dst: Host) -> DiPath:
    """The shortest path fixing the highest differing digit first."""
    topology.validate_host(src)
    topology.validate_host(dst)
    if src == dst:
        raise DomainError(f"no path needed from {src} to itself")
    return _fix_digits(src, dst, tuple(reversed(differing_digits(src, dst))))


def enumerate_shortest_paths(
    topology: BCube, src: Host, dst: Host, max_paths: int = DEFAULT_ENUMERATION_CAP
) -> list[DiPath]:
    """All shortest paths between two hosts: one per digit-fixing order."""
    if src == dst:
        raise DomainError(f"no path needed from {src} to itself")
    diff = differing_digits(src, dst)
    count = 1
    for i in range(2, len(diff) + 1):
        count *= i
    if count > max_paths:
        raise CapacityError(
            f"{count} shortest paths between {src} and {dst} exceeds the cap of {max_paths}"
        )
    return [
        shortest_path(topology, src, dst, order)
        for order in itertools.permutations(diff)
    ]


def descending_routing(topology: BCube, max_paths: int = DEFAULT_PATH_CAP) -> Routing:
    """Descending paths for every ordered host pair.

    This is the canonical all-pairs routing the load and wavelength
    results are stated for; it has ``n * (n - 1)`` paths for ``n`` hosts.
    """
    total = topology.num_hosts * (topology.num_hosts - 1)
    if total > max_paths:
        raise CapacityError(
            f"all-pairs routing needs {total} paths, above the cap of {max_paths}"
        )
    ell = topology.ell
    routing = Routing()
    for src in topology.hosts:
        src_digits = src.digits
        for dst in topology.hosts:
            if src is dst:
                continue
            order = tuple(
                k for k in range(ell, 0, -1) if src_digits[k - 1] != dst.digits[k - 1]
            )
            routing._paths[(src, dst)] = _fix_digits(src, dst, order)
    return routing


def _loads_array(topology: BCube, routing) -> list[int]:
    loads = [0] * topology.num_links
    ell, n = topology.ell, topology.num_hosts
    value_of = {host: value for value, host in enumerate(topology.hosts)}
    for path in routing:
        for hop in path.hops:
            k = hop.fixed_digit
            src = value_of.get(hop.src)
            dst = value_of.get(hop.dst)
            if src is None or dst is None or not 1 <= k <= ell:
                raise IntegrityError(
                    f"path through nonexistent link at layer {k}: {hop.src} -> {hop.dst}"
                )
            base = (k - 1) * n
            loads[2 * (base + src)] += 1
            loads[2 * (base + dst) + 1] += 1
    return loads


def link_loads(topology: BCube, routing) -> dict[DirectedLink, int]:
    """Paths crossing each directed link; zero entries are included."""
    loads = _loads_array(topology, routing)
    return {
        link: loads[topology.link_index(link.direction, link.layer, link.host)]
        for link in topology.links()
    }


def link_occupants(topology: BCube, routing) -> dict[DirectedLink, list[DiPath]]:
    """Debug variant of :func:`link_loads` retaining the paths per link."""
    occupants: dict[DirectedLink, list[DiPath]] = {link: [] for link in topology.links()}
    for path in routing:
        for link in path.links(topology):
            if link not in occupants:
                raise IntegrityError(f"path through nonexistent link {link}")
            occupants[link].append(path)
    return occupants


def max_link_load(topology: BCube, routing) -> int:
    """The maximum over directed links of the per-link load; 0 when empty."""
    loads = _loads_array(topology, routing)
    return max(loads) if loads else 0


def _validate_link(topology: BCube, link: DirectedLink, direction: str) -> None:
    if link.direction != direction:
        raise DomainError(f"expected an {direction}link, got {link}")
    if not 1 <= link.layer <= topology.ell:
        raise DomainError(f"layer {link.layer} outside 1..{topology.ell}")
    topology.validate_host(link.host)


def uplink_pair_count(topology: BCube, link: DirectedLink) -> int:
    """Ordered pairs whose descending path crosses this uplink, by counting.

    A descending path walks the uplink at layer ``k`` of host ``x`` exactly
    when the source matches ``x`` on digits ``1..k``, the destination
    matches ``x`` on digits ``k+1..ell``, and digit ``k`` differs.  The
    count comes from this membership condition, not from path enumeration,
    so it can serve as an independent cross-check of the load maps.
    """
    _validate_link(topology, link, UP)
    k, x = link.layer, link.host
    count = 0
    for src in topology.hosts:
        for dst in topology.hosts:
            if (
                src.digits[:k] == x.digits[:k]
                and dst.digits[k:] == x.digits[k:]
                and src.digit(k) != dst.digit(k)
            ):
                count += 1
    return count


def downlink_pair_count(topology: BCube, link: DirectedLink) -> int:
    """Downlink analogue of :func:`uplink_pair_count`.

    The descending path crosses the downlink at layer ``k`` of host ``y``
    exactly when the source matches ``y`` on digits ``1..k-1``, the
    destination matches ``y`` on digits ``k..ell``, and digit ``k`` differs.
    """
    _validate_link(topology, link, DOWN)
    k, y = link.layer, link.host
    count = 0
    for src in topology.hosts:
        for dst in topology.hosts:
            if (
                src.digits[: k - 1] == y.digits[: k - 1]
                and dst.digits[k - 1 :] == y.digits[k - 1 :]
                and src.digit(k) != dst.digit(k)
            ):
                count += 1
    return count


def routing_to_json_dict(routing) -> list[dict]:
    """JSON-ready dump: one record per path with its hop sequence."""
    return [
        {
            "source": str(path.source),
            "destination": str(path.destination),
            "hops": [
                {
                    "via_layer": hop.via.layer,
                    "via_digits": format_digits(hop.via.digits),
                    "to": str(hop.dst),
                }
                for hop in path.hops
            ],
        }
        for path in routing
    ]


def load_report_csv(topology: BCube, loads: dict[DirectedLink, int]) -> str:
    """CSV load report: one row per directed link."""
    rows = ["layer,direction,host,load"]
    ordered = sorted(
        loads.items(),
        key=lambda item: (
            item[0].layer,
            0 if item[0].direction == UP else 1,
            item[0].host,
        ),
    )
    for link, load in ordered:
        rows.append(f"{link.layer},{link.direction},{link.host},{load}")
    return "\n".join(rows) + "\n"
