"""Wavelength assignment for the all-pairs descending routing.

Three schemes, all assigning one wavelength per shift class:

* ``oblivious_plan`` reads the wavelength straight off the shift vector
  of a pair, using ``d**ell - 1`` wavelengths.
* ``layered_plan`` groups shift classes by how many nonzero offsets they
  have, colors each group's conflict graph separately, and concatenates
  the color ranges.
* ``greedy_global_plan`` colors the full conflict graph in one greedy
  pass, allowing reuse across groups.

Two classes need distinct wavelengths exactly when their supports
intersect: both then occupy every link of some shared layer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coloring import color_count, exact_chromatic, greedy_color
from .cpr import Shift, all_nonzero_shifts, classify_pair, shift_routing, shift_to_int
from .errors import CapacityError, DomainError, IntegrityError, VerificationError
from .routing import DiPath, Hop, differing_digits
from .topology import BCube, DirectedLink, Host, parse_digits

EXACT_FALLBACK_NODE_CAP = 20


@dataclass(frozen=True, slots=True)
class Wavelength:
    """A wavelength id, dense in ``[0, count)``; schemes that derive the
    wavelength from a shift vector also carry that vector as the label."""

    id: int
    label: Shift | None = None


@dataclass
class RwaPlan:
    """A complete lightpath plan: per ordered pair, a path and a wavelength."""

    scheme: str
    ell: int
    d: int
    assignments: dict[tuple[Host, Host], tuple[DiPath, Wavelength]]
    wavelength_count: int


@dataclass(frozen=True)
class NonblockingCertificate:
    """Result of the full link scan; carries the first conflict if any."""

    ok: bool
    witness: tuple[DirectedLink, tuple[Host, Host], tuple[Host, Host], int] | None = None

    def to_json_dict(self) -> dict:
        if self.witness is None:
            return {"nonblocking": self.ok, "witness": None}
        link, pair_a, pair_b, wavelength = self.witness
        return {
            "nonblocking": self.ok,
            "witness": {
                "link": str(link),
                "wavelength": wavelength,
                "pair_a": [str(pair_a[0]), str(pair_a[1])],
                "pair_b": [str(pair_b[0]), str(pair_b[1])],
            },
        }


@dataclass
class ConflictGraph:
    """Shift classes as nodes, adjacent when their supports intersect."""

    ell: int
    d: int
    class_k: int | None
    nodes: tuple[Shift, ...]
    adjacency: dict[Shift, frozenset[Shift]]

    def degree(self, node: Shift) -> int:
        return len(self.adjacency[node])

    @property
    def max_degree(self) -> int:
        return max((len(peers) for peers in self.adjacency.values()), default=0)

    @property
    def is_complete(self) -> bool:
        n = len(self.nodes)
        return all(len(self.adjacency[node]) == n - 1 for node in self.nodes)

    def edges(self):
        for node in self.nodes:
            for peer in sorted(self.adjacency[node]):
                if node < peer:
                    yield node, peer

    def to_dot(self) -> str:
        name = f"conflicts_{self.ell}_{self.d}"
        if self.class_k is not None:
            name += f"_k{self.class_k}"
        lines = [f"graph {name} {{"]
        for node in self.nodes:
            lines.append(f'  "{node}" [class={node.weight}];')
        for a, b in self.edges():
            lines.append(f'  "{a}" -- "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass
class Coloring:
    """A proper coloring of a conflict graph, colors dense in ``[0, num_colors)``."""

    colors: dict[Shift, int]
    num_colors: int

    def is_proper(self, graph: ConflictGraph) -> bool:
        return all(
            self.colors[node] != self.colors[peer]
            for node in graph.nodes
            for peer in graph.adjacency[node]
        )


def oblivious_wavelength(topology: BCube, src: Host, dst: Host) -> Wavelength:
    """Wavelength computed from the two addresses alone.

    The label is the digit-wise difference vector of the pair; the id is
    its mixed-radix value shifted down to make the id range dense.
    """
    if src == dst:
        raise DomainError("a host does not need a lightpath to itself")
    shift = classify_pair(topology, src, dst)
    return Wavelength(shift_to_int(shift, topology.d) - 1, label=shift)


def _per_class_plan(topology: BCube, scheme: str, wavelength_of) -> RwaPlan:
    assignments: dict[tuple[Host, Host], tuple[DiPath, Wavelength]] = {}
    ids = set()
    for shift in all_nonzero_shifts(topology.ell, topology.d):
        wavelength = wavelength_of(shift)
        ids.add(wavelength.id)
        for path in shift_routing(topology, shift).paths:
            assignments[(path.source, path.destination)] = (path, wavelength)
    assignments = {key: assignments[key] for key in sorted(assignments)}
    return RwaPlan(scheme, topology.ell, topology.d, assignments, len(ids))


def oblivious_plan(topology: BCube) -> RwaPlan:
    """Wavelength = shift vector for every pair: ``d**ell - 1`` wavelengths."""
    return _per_class_plan(
        topology,
        "oblivious",
        lambda shift: Wavelength(shift_to_int(shift, topology.d) - 1, label=shift),
    )


def two_layer_plan(topology: BCube) -> RwaPlan:
    """The exact scheme for two-layer cubes, using ``d**2 - d`` wavelengths.

    A class whose second offset is zero uses no layer-2 links, so it can
    share the wavelength of the class with the same offset moved to the
    second position; the label's second digit is therefore never zero.
    """
    if topology.ell != 2:
        raise DomainError(f"two_layer_plan needs ell = 2, got ell = {topology.ell}")
    d = topology.d

    def wavelength_of(shift: Shift) -> Wavelength:
        p1, p2 = shift.digits
        vec = (p1, p2) if p2 != 0 else (0, p1)
        return Wavelength(vec[0] * (d - 1) + vec[1] - 1, label=Shift(vec))

    return _per_class_plan(topology, "two-layer", wavelength_of)


def build_conflict_graph(
    ell: int, d: int, class_k: int | None = None, max_nodes: int = 100_000
) -> ConflictGraph:
    """The conflict graph on nonzero shifts (optionally one weight class)."""
    if ell < 1:
        raise DomainError(f"ell must be >= 1, got {ell}")
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if class_k is not None and not 1 <= class_k <= ell:
        raise DomainError(f"class index {class_k} outside 1..{ell}")
    if d**ell - 1 > max_nodes:
        raise CapacityError(
            f"conflict graph on {d ** ell - 1} shifts exceeds the cap of {max_nodes}"
        )
    shifts = all_nonzero_shifts(ell, d)
    if class_k is not None:
        shifts = [shift for shift in shifts if shift.weight == class_k]
    supports = {shift: shift.support for shift in shifts}
    adjacency = {
        shift: frozenset(
            peer for peer in shifts if peer != shift and supports[shift] & supports[peer]
        )
        for shift in shifts
    }
    return ConflictGraph(ell, d, class_k, tuple(shifts), adjacency)


def default_order(graph: ConflictGraph) -> list[Shift]:
    """Descending degree, ties broken by mixed-radix value."""
    return sorted(
        graph.nodes,
        key=lambda node: (-len(graph.adjacency[node]), shift_to_int(node, graph.d)),
    )


def greedy_coloring(graph: ConflictGraph, order=None) -> Coloring:
    """Greedy coloring in the given (default: largest-degree-first) order."""
    if order is None:
        order = default_order(graph)
    else:
        order = list(order)
        if sorted(order) != sorted(graph.nodes):
            raise DomainError("order must list every node of the graph exactly once")
    colors = greedy_color(order, graph.adjacency)
    return Coloring(colors, color_count(colors))


def _color_class(graph: ConflictGraph) -> Coloring:
    """Color one weight class, enforcing the max-degree budget where it applies.

    For middle weight classes the conflict graph is regular, connected, and
    neither complete nor an odd cycle, so max_degree colors must suffice; if
    the greedy pass overshoots, small graphs fall back to the exact solver.
    """
    coloring = greedy_coloring(graph)
    k, ell = graph.class_k, graph.ell
    if k is not None and 2 <= k <= ell // 2 and coloring.num_colors > graph.max_degree:
        if len(graph.nodes) <= EXACT_FALLBACK_NODE_CAP:
            chi, colors = exact_chromatic(
                graph.nodes, graph.adjacency, max_nodes=EXACT_FALLBACK_NODE_CAP
            )
            coloring = Coloring(colors, chi)
        if coloring.num_colors > graph.max_degree:
            raise VerificationError(
                f"class {k} of ell={ell}, d={graph.d} needed "
                f"{coloring.num_colors} colors, above the degree budget {graph.max_degree}"
            )
    return coloring


def layered_plan(topology: BCube) -> RwaPlan:
    """Per-weight-class coloring with disjoint color ranges across classes.

    Weight-1 classes form disjoint cliques that share one set of ``d - 1``
    colors; every other class gets a fresh color range.  The total is
    exact for one- and two-layer cubes and stays within the closed-form
    bound checked by the analysis module otherwise.
    """
    ell, d = topology.ell, topology.d
    colorings: dict[int, Coloring] = {}
    offsets: dict[int, int] = {}
    total = 0
    for k in range(1, ell + 1):
        coloring = _color_class(build_conflict_graph(ell, d, class_k=k))
        colorings[k] = coloring
        offsets[k] = total
        total += coloring.num_colors

    def wavelength_of(shift: Shift) -> Wavelength:
        k = shift.weight
        return Wavelength(offsets[k] + colorings[k].colors[shift])

    plan = _per_class_plan(topology, "layered", wavelength_of)
    assert plan.wavelength_count == total
    return plan


def greedy_global_plan(topology: BCube) -> RwaPlan:
    """One greedy coloring of the full conflict graph, reusing colors freely."""
    graph = build_conflict_graph(topology.ell, topology.d)
    coloring = greedy_coloring(graph)
    return _per_class_plan(
        topology, "greedy", lambda shift: Wavelength(coloring.colors[shift])
    )


def verify_nonblocking(topology: BCube, plan: RwaPlan) -> NonblockingCertificate:
    """Scan every directed link for two same-wavelength paths crossing it."""
    seen: dict[tuple[int, int], tuple[Host, Host]] = {}
    for pair, (path, wavelength) in plan.assignments.items():
        for link in path.links(topology):
            if not 1 <= link.layer <= topology.ell or any(
                not 0 <= digit < topology.d for digit in link.host.digits
            ):
                raise IntegrityError(f"plan path through nonexistent link {link}")
            key = (topology.link_index(link.direction, link.layer, link.host), wavelength.id)
            if key in seen:
                return NonblockingCertificate(
                    False, (link, seen[key], pair, wavelength.id)
                )
            seen[key] = pair
    return NonblockingCertificate(True)


def plan_to_json_dict(plan: RwaPlan) -> dict:
    """JSON-ready plan dump; paths appear as their visited host sequence."""
    return {
        "scheme": plan.scheme,
        "ell": plan.ell,
        "d": plan.d,
        "wavelength_count": plan.wavelength_count,
        "assignments": [
            {
                "src": str(src),
                "dst": str(dst),
                "wavelength": wavelength.id,
                "path": [str(h) for h in path.hosts()],
            }
            for (src, dst), (path, wavelength) in plan.assignments.items()
        ],
    }


def _path_from_hosts(topology: BCube, hosts: list[Host]) -> DiPath:
    hops = []
    for a, b in zip(hosts, hosts[1:]):
        topology.validate_host(a)
        topology.validate_host(b)
        diff = differing_digits(a, b)
        if len(diff) != 1:
            raise IntegrityError(
                f"consecutive path hosts {a} and {b} are not joined by one switch"
            )
        k = diff[0]
        hops.append(Hop(a, topology.switch_between(a, b, k), b, k))
    return DiPath(hosts[0], hosts[-1], tuple(hops))


def plan_from_json_dict(data: dict) -> RwaPlan:
    """Rebuild a plan from its JSON dump, revalidating the hop structure."""
    try:
        ell = int(data["ell"])
        d = int(data["d"])
        scheme = str(data["scheme"])
        count = int(data["wavelength_count"])
        records = data["assignments"]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"plan file is missing required fields: {exc}") from exc
    topology = BCube(ell, d)
    assignments: dict[tuple[Host, Host], tuple[DiPath, Wavelength]] = {}
    for record in records:
        try:
            src = Host(parse_digits(str(record["src"]), ell))
            dst = Host(parse_digits(str(record["dst"]), ell))
            wavelength = Wavelength(int(record["wavelength"]))
            hosts = [Host(parse_digits(str(text), ell)) for text in record["path"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed plan record {record!r}") from exc
        if not hosts or hosts[0] != src or hosts[-1] != dst:
            raise IntegrityError(
                f"path for ({src}, {dst}) does not start and end at the pair"
            )
        assignments[(src, dst)] = (_path_from_hosts(topology, hosts), wavelength)
    return RwaPlan(scheme, ell, d, assignments, count)
