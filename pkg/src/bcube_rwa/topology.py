"""Explicit construction of BCube interconnects.

A BCube with ``ell`` switch layers and radix ``d`` has one host per
base-``d`` digit vector of length ``ell`` and one switch per (layer,
digit-vector-of-length-``ell - 1``) pair.  A host ``h`` hangs off switch
``s`` at layer ``k`` exactly when deleting the ``k``-th digit of ``h``
yields the switch's digits; the deleted digit is the port number.  Hosts
never connect to hosts and switches never connect to switches; every
host-switch line is one uplink plus one downlink.

Digit positions and layers are 1-based throughout the public API, with
digit 1 the most significant (host ``200`` has digit 1 equal to 2).
Topologies are immutable once built and safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapacityError, DomainError

DEFAULT_HOST_CAP = 10_000

UP = "up"
DOWN = "down"


def digits_to_int(digits: tuple[int, ...], d: int) -> int:
    """Mixed-radix value of a digit vector, digit 1 most significant."""
    value = 0
    for digit in digits:
        value = value * d + digit
    return value


def int_to_digits(value: int, length: int, d: int) -> tuple[int, ...]:
    """Inverse of :func:`digits_to_int` for a vector of known length."""
    digits = []
    for _ in range(length):
        value, digit = divmod(value, d)
        digits.append(digit)
    return tuple(reversed(digits))


def format_digits(digits: tuple[int, ...]) -> str:
    """Render a digit vector with digit 1 first, e.g. ``(2, 0, 0)`` -> ``"200"``.

    Digits above 9 are dot-separated to stay unambiguous.
    """
    if any(digit > 9 for digit in digits):
        return ".".join(str(digit) for digit in digits)
    return "".join(str(digit) for digit in digits)


def parse_digits(text: str, length: int) -> tuple[int, ...]:
    """Parse a digit string produced by :func:`format_digits`."""
    if "." in text:
        digits = tuple(int(part) for part in text.split("."))
    elif length == 1:
        digits = (int(text),)
    else:
        digits = tuple(int(ch) for ch in text)
    if len(digits) != length:
        raise DomainError(f"expected {length} digits, got {text!r}")
    return digits


@dataclass(frozen=True, order=True, slots=True)
class Host:
    """A host address: ``ell`` digits, each in ``range(d)``."""

    digits: tuple[int, ...]

    def digit(self, k: int) -> int:
        """Digit at 1-based position ``k``."""
        return self.digits[k - 1]

    def replace_digit(self, k: int, value: int) -> "Host":
        """Copy of this address with digit ``k`` set to ``value``."""
        return Host(self.digits[: k - 1] + (value,) + self.digits[k:])

    def drop_digit(self, k: int) -> tuple[int, ...]:
        """Digits with position ``k`` deleted (the switch-side view at layer ``k``)."""
        return self.digits[: k - 1] + self.digits[k:]

    def __str__(self) -> str:
        return format_digits(self.digits)


@dataclass(frozen=True, order=True, slots=True)
class Switch:
    """A switch address: a layer in ``1..ell`` plus ``ell - 1`` digits."""

    layer: int
    digits: tuple[int, ...]

    def __str__(self) -> str:
        return f"L{self.layer}:{format_digits(self.digits)}"


@dataclass(frozen=True, slots=True)
class DirectedLink:
    """One directed host-switch link, identified by direction, layer, and host."""

    direction: str
    layer: int
    host: Host

    def __str__(self) -> str:
        return f"{self.direction}:{self.layer}:{self.host}"


class BCube:
    """The explicit topology for given ``ell`` (layers) and ``d`` (radix).

    Exposes adjacency queries, address arithmetic, and O(1) integer
    indexing of directed links for load accounting.
    """

    def __init__(self, ell: int, d: int, host_cap: int = DEFAULT_HOST_CAP):
        if ell < 1:
            raise DomainError(f"ell must be >= 1, got {ell}")
        if d < 2:
            raise DomainError(f"d must be >= 2, got {d}")
        num_hosts = d**ell
        if num_hosts > host_cap:
            raise CapacityError(
                f"{num_hosts} hosts exceeds the cap of {host_cap}; "
                "raise host_cap to build this instance"
            )
        self.ell = ell
        self.d = d
        self.host_cap = host_cap
        self._num_hosts = num_hosts
        self._num_switches = ell * d ** (ell - 1)
        self._hosts = tuple(
            Host(int_to_digits(value, ell, d)) for value in range(num_hosts)
        )
        self._switches = tuple(
            Switch(layer, int_to_digits(value, ell - 1, d))
            for layer in range(1, ell + 1)
            for value in range(d ** (ell - 1))
        )

    # -- counts ----------------------------------------------------------

    @property
    def num_hosts(self) -> int:
        return self._num_hosts

    @property
    def num_switches(self) -> int:
        return self._num_switches

    @property
    def num_links(self) -> int:
        return 2 * self.ell * self._num_hosts

    # -- element access --------------------------------------------------

    @property
    def hosts(self) -> tuple[Host, ...]:
        return self._hosts

    @property
    def switches(self) -> tuple[Switch, ...]:
        return self._switches

    def links(self):
        """All directed links in index order (layer, host, up-then-down)."""
        for layer in range(1, self.ell + 1):
            for host in self._hosts:
                yield DirectedLink(UP, layer, host)
                yield DirectedLink(DOWN, layer, host)

    def host_to_int(self, host: Host) -> int:
        self.validate_host(host)
        return digits_to_int(host.digits, self.d)

    def host_from_int(self, value: int) -> Host:
        return self._hosts[value]

    def validate_host(self, host: Host) -> None:
        if len(host.digits) != self.ell:
            raise DomainError(f"host {host} has {len(host.digits)} digits, expected {self.ell}")
        if any(not 0 <= digit < self.d for digit in host.digits):
            raise DomainError(f"host {host} has digits outside 0..{self.d - 1}")

    def validate_switch(self, switch: Switch) -> None:
        if not 1 <= switch.layer <= self.ell:
            raise DomainError(f"switch layer {switch.layer} outside 1..{self.ell}")
        if len(switch.digits) != self.ell - 1:
            raise DomainError(
                f"switch {switch} has {len(switch.digits)} digits, expected {self.ell - 1}"
            )
        if any(not 0 <= digit < self.d for digit in switch.digits):
            raise DomainError(f"switch {switch} has digits outside 0..{self.d - 1}")

    # -- link indexing ---------------------------------------------------

    def link_index(self, direction: str, layer: int, host: Host) -> int:
        """Dense integer id of a directed link; the hot path for load arrays."""
        offset = (layer - 1) * self._num_hosts + digits_to_int(host.digits, self.d)
        return 2 * offset + (0 if direction == UP else 1)

    def link_from_index(self, index: int) -> DirectedLink:
        offset, parity = divmod(index, 2)
        layer, value = divmod(offset, self._num_hosts)
        return DirectedLink(UP if parity == 0 else DOWN, layer + 1, self._hosts[value])

    # -- adjacency -------------------------------------------------------

    def adjacent(self, host: Host, switch: Switch) -> int | None:
        """Port number connecting ``host`` to ``switch``, or None if not adjacent.

        A host hangs off a layer-``k`` switch exactly when deleting its
        ``k``-th digit gives the switch digits; the port is that digit.
        """
        self.validate_host(host)
        self.validate_switch(switch)
        if host.drop_digit(switch.layer) == switch.digits:
            return host.digit(switch.layer)
        return None

    def switch_between(self, a: Host, b: Host, layer: int) -> Switch:
        """The unique switch joining two hosts that differ only at ``layer``."""
        return Switch(layer, a.drop_digit(layer))

    def neighbors(self, host: Host) -> list[tuple[Host, int]]:
        """All hosts one hop away, each with the layer of the shared switch."""
        self.validate_host(host)
        result = []
        for layer in range(1, self.ell + 1):
            own = host.digit(layer)
            for value in range(self.d):
                if value != own:
                    result.append((host.replace_digit(layer, value), layer))
        return result

    # -- built-in subcubes -------------------------------------------------

    def built_in_subcube(self, index: int) -> "SubcubeView":
        """The copy of the (ell-1)-layer cube whose hosts share last digit ``index``."""
        if self.ell < 2:
            raise DomainError("a single-layer cube has no built-in subcubes")
        if not 0 <= index < self.d:
            raise DomainError(f"subcube index {index} outside 0..{self.d - 1}")
        hosts = tuple(h for h in self._hosts if h.digit(self.ell) == index)
        switches = tuple(
            s
            for s in self._switches
            if s.layer < self.ell and s.digits[-1] == index
        )
        links = tuple(
            DirectedLink(direction, layer, host)
            for layer in range(1, self.ell)
            for host in hosts
            for direction in (UP, DOWN)
        )
        return SubcubeView(self, index, hosts, switches, links)

    # -- exports -----------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "ell": self.ell,
            "d": self.d,
            "hosts": [str(h) for h in self._hosts],
            "switches": [
                {"layer": s.layer, "digits": format_digits(s.digits)}
                for s in self._switches
            ],
            "counts": {
                "hosts": self.num_hosts,
                "switches": self.num_switches,
                "links": self.num_links,
            },
        }

    def to_dot(self) -> str:
        """Graphviz source: hosts as boxes, switches as ellipses tagged by layer.

        Each uplink/downlink pair renders as a single undirected edge.
        """
        lines = [f"graph bcube_{self.ell}_{self.d} {{"]
        lines.append('  node [shape=box];')
        for host in self._hosts:
            lines.append(f'  "h{host}";')
        lines.append('  node [shape=ellipse];')
        for switch in self._switches:
            lines.append(
                f'  "s{switch.layer}_{format_digits(switch.digits)}" [layer={switch.layer}];'
            )
        for switch in self._switches:
            name = f"s{switch.layer}_{format_digits(switch.digits)}"
            for port in range(self.d):
                digits = (
                    switch.digits[: switch.layer - 1]
                    + (port,)
                    + switch.digits[switch.layer - 1 :]
                )
                lines.append(f'  "h{format_digits(digits)}" -- "{name}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SubcubeView:
    """The host/switch/link subsets of one built-in subcube.

    Dropping the last host digit (and the last switch digit) maps the view
    onto the standalone ``BCube(ell - 1, d)``.
    """

    parent: BCube
    index: int
    hosts: tuple[Host, ...]
    switches: tuple[Switch, ...]
    links: tuple[DirectedLink, ...]

    def project_host(self, host: Host) -> Host:
        return Host(host.digits[:-1])

    def project_switch(self, switch: Switch) -> Switch:
        return Switch(switch.layer, switch.digits[:-1])


def build(ell: int, d: int, host_cap: int = DEFAULT_HOST_CAP) -> BCube:
    """Construct the explicit topology; deterministic for identical inputs."""
    return BCube(ell, d, host_cap=host_cap)
