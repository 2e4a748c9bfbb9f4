"""Deterministic greedy coloring and an exact solver for small graphs.

Both work on plain adjacency mappings (node -> set of nodes) so they can
color shift-conflict graphs and path-conflict graphs alike.  The exact
solver does clique-seeded backtracking and is intentionally capped: it
exists to pin down tiny instances, not to compete on general graphs.
"""

from __future__ import annotations

from .errors import CapacityError


def greedy_color(order, adjacency) -> dict:
    """Color nodes in the given order, always taking the smallest free color."""
    colors: dict = {}
    for node in order:
        taken = {colors[peer] for peer in adjacency[node] if peer in colors}
        color = 0
        while color in taken:
            color += 1
        colors[node] = color
    return colors


def color_count(colors: dict) -> int:
    return max(colors.values()) + 1 if colors else 0


def greedy_clique(order, adjacency) -> list:
    """A maximal clique grown greedily along the given node order."""
    clique: list = []
    for node in order:
        if all(node in adjacency[member] for member in clique):
            clique.append(node)
    return clique


def exact_chromatic(nodes, adjacency, max_nodes: int = 24) -> tuple[int, dict]:
    """The exact chromatic number and one optimal coloring.

    Tries increasing color budgets starting from a greedy-clique lower
    bound; a greedy coloring supplies the initial upper bound.  Nodes are
    ordered by descending degree with the seed clique first.
    """
    nodes = list(nodes)
    if len(nodes) > max_nodes:
        raise CapacityError(
            f"exact coloring capped at {max_nodes} nodes, got {len(nodes)}"
        )
    if not nodes:
        return 0, {}
    by_degree = sorted(nodes, key=lambda n: (-len(adjacency[n]), nodes.index(n)))
    clique = greedy_clique(by_degree, adjacency)
    order = clique + [n for n in by_degree if n not in clique]
    greedy = greedy_color(order, adjacency)
    upper = color_count(greedy)
    lower = len(clique)

    index_of = {node: i for i, node in enumerate(order)}
    earlier_peers = [
        sorted(
            (index_of[peer] for peer in adjacency[node] if index_of[peer] < i),
        )
        for i, node in enumerate(order)
    ]

    def try_k(k: int) -> list[int] | None:
        assignment = [-1] * len(order)

        def backtrack(i: int, used: int) -> bool:
            if i == len(order):
                return True
            taken = {assignment[j] for j in earlier_peers[i]}
            # colors beyond used+1 are symmetric; never open more than one new
            for color in range(min(k, used + 1)):
                if color not in taken:
                    assignment[i] = color
                    if backtrack(i + 1, max(used, color + 1)):
                        return True
            assignment[i] = -1
            return False

        return assignment if backtrack(0, 0) else None

    for k in range(lower, upper):
        assignment = try_k(k)
        if assignment is not None:
            return k, {node: assignment[i] for i, node in enumerate(order)}
    return upper, greedy


def is_proper(colors: dict, adjacency) -> bool:
    return all(
        colors[node] != colors[peer]
        for node in colors
        for peer in adjacency[node]
    )
