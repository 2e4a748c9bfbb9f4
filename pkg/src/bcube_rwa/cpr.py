"""Cyclic permutation routing: digit-wise shift classes of the traffic.

Every ordered host pair is classified by the digit-wise modular
difference of its endpoints.  Pairs sharing a difference vector form a
cyclic permutation (each host is source once and destination once), and
routing every pair of one class along its descending path yields a set
of pairwise link-disjoint paths.  These classes are the unit to which
the wavelength schemes assign a single wavelength.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .routing import DiPath, descending_path
from .topology import DOWN, UP, BCube, DirectedLink, Host, format_digits


@dataclass(frozen=True, order=True, slots=True)
class Shift:
    """A digit-wise cyclic shift: ``ell`` offsets, each in ``range(d)``.

    The all-zero shift is representable (it names the identity pairing,
    which carries no traffic) but is rejected wherever paths are built.
    """

    digits: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return all(digit == 0 for digit in self.digits)

    @property
    def support(self) -> frozenset[int]:
        """The 1-based digit positions with a nonzero offset."""
        return frozenset(k + 1 for k, digit in enumerate(self.digits) if digit != 0)

    @property
    def weight(self) -> int:
        return sum(1 for digit in self.digits if digit != 0)

    def __str__(self) -> str:
        return format_digits(self.digits)


@dataclass(frozen=True)
class ShiftRouting:
    """The descending paths of one shift class, one per source host."""

    shift: Shift
    paths: tuple[DiPath, ...]


@dataclass(frozen=True)
class LinkDisjointCertificate:
    """Outcome of a link-disjointness check, with a witness on failure."""

    shift: Shift
    link_disjoint: bool
    witness: tuple[DirectedLink, DiPath, DiPath] | None = None

    def to_json_dict(self) -> dict:
        payload: dict = {
            "perm": str(self.shift),
            "link_disjoint": self.link_disjoint,
        }
        if self.witness is None:
            payload["witness"] = None
        else:
            link, path_a, path_b = self.witness
            payload["witness"] = {
                "link": str(link),
                "path_a": [str(h) for h in path_a.hosts()],
                "path_b": [str(h) for h in path_b.hosts()],
            }
        return payload


@dataclass(frozen=True)
class CollisionReport:
    """Shared-link structure of two shift routings, layer by layer.

    ``shared_per_layer[k]`` counts the (host, layer) link positions at
    layer ``k`` where the two routings traverse a common directed link.
    """

    x: Shift
    y: Shift
    shared_per_layer: dict[int, int]

    @property
    def colliding_layers(self) -> set[int]:
        return {layer for layer, count in self.shared_per_layer.items() if count > 0}


def classify_pair(topology: BCube, src: Host, dst: Host) -> Shift:
    """The shift vector taking ``src`` to ``dst``: digit-wise difference mod d."""
    topology.validate_host(src)
    topology.validate_host(dst)
    return Shift(
        tuple((b - a) % topology.d for a, b in zip(src.digits, dst.digits))
    )


def apply_shift(topology: BCube, host: Host, shift: Shift) -> Host:
    """The destination host ``shift`` pairs with ``host``."""
    return Host(
        tuple((a + p) % topology.d for a, p in zip(host.digits, shift.digits))
    )


def decompose_traffic(topology: BCube) -> dict[Shift, list[tuple[Host, Host]]]:
    """Partition all ordered host pairs by their shift vector.

    Yields exactly ``d**ell - 1`` classes of ``d**ell`` pairs each; the
    zero shift never appears because pairs have distinct endpoints.
    """
    classes: dict[Shift, list[tuple[Host, Host]]] = {}
    for src in topology.hosts:
        for dst in topology.hosts:
            if src != dst:
                classes.setdefault(classify_pair(topology, src, dst), []).append(
                    (src, dst)
                )
    return {shift: classes[shift] for shift in sorted(classes)}


def shift_routing(topology: BCube, shift: Shift) -> ShiftRouting:
    """Descending paths for every pair of one nonzero shift class."""
    if shift.is_zero:
        raise DomainError("the zero shift pairs every host with itself and has no paths")
    if len(shift.digits) != topology.ell or any(
        not 0 <= digit < topology.d for digit in shift.digits
    ):
        raise DomainError(f"shift {shift} does not fit an ell={topology.ell}, d={topology.d} cube")
    paths = tuple(
        descending_path(topology, src, apply_shift(topology, src, shift))
        for src in topology.hosts
    )
    return ShiftRouting(shift, paths)


def verify_link_disjoint(topology: BCube, routing: ShiftRouting) -> LinkDisjointCertificate:
    """Check that no directed link carries two paths of the routing."""
    seen: dict[int, DiPath] = {}
    for path in routing.paths:
        for link in path.links(topology):
            index = topology.link_index(link.direction, link.layer, link.host)
            if index in seen:
                return LinkDisjointCertificate(
                    routing.shift, False, (link, seen[index], path)
                )
            seen[index] = path
    return LinkDisjointCertificate(routing.shift, True)


def layer_usage(shift: Shift) -> set[int]:
    """The layers whose links the shift's routing occupies: its support."""
    return set(shift.support)


def _links_by_layer(topology: BCube, routing: ShiftRouting) -> dict[int, set[DirectedLink]]:
    by_layer: dict[int, set[DirectedLink]] = {
        layer: set() for layer in range(1, topology.ell + 1)
    }
    for path in routing.paths:
        for link in path.links(topology):
            by_layer[link.layer].add(link)
    return by_layer


def verify_collision(topology: BCube, x: Shift, y: Shift) -> CollisionReport:
    """Report where the routings of two distinct nonzero shifts share links.

    Two classes must share links at every layer where both have a nonzero
    offset, and at no other layer.  The per-layer figure counts shared
    (host, layer) positions: each position covers the uplink/downlink pair
    of one host at one layer.
    """
    if x == y:
        raise DomainError("collision check needs two distinct shifts")
    if x.is_zero or y.is_zero:
        raise DomainError("the zero shift has no routing to collide")
    links_x = _links_by_layer(topology, shift_routing(topology, x))
    links_y = _links_by_layer(topology, shift_routing(topology, y))
    shared_per_layer: dict[int, int] = {}
    for layer in range(1, topology.ell + 1):
        shared = links_x[layer] & links_y[layer]
        positions = {link.host for link in shared}
        shared_per_layer[layer] = len(positions)
    return CollisionReport(x, y, shared_per_layer)


def shift_to_int(shift: Shift, d: int) -> int:
    """Mixed-radix value of a shift, digit 1 most significant."""
    value = 0
    for digit in shift.digits:
        value = value * d + digit
    return value


def shift_from_int(value: int, ell: int, d: int) -> Shift:
    digits = []
    for _ in range(ell):
        value, digit = divmod(value, d)
        digits.append(digit)
    return Shift(tuple(reversed(digits)))


def all_nonzero_shifts(ell: int, d: int) -> list[Shift]:
    """Every nonzero shift vector, ordered by mixed-radix value."""
    return [shift_from_int(value, ell, d) for value in range(1, d**ell)]
