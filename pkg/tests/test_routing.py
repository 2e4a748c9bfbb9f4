"""Shortest paths, the all-pairs descending routing, and link-load accounting."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcube_rwa import (
    CapacityError,
    DomainError,
    Host,
    IntegrityError,
    Routing,
    build,
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
from bcube_rwa.routing import DiPath, Hop, differing_digits
from bcube_rwa.topology import DOWN, UP, DirectedLink, Switch


def hosts_of(path):
    return tuple(str(h) for h in path.hosts())


def assert_valid_shortest_path(t, path):
    """Structural oracle: hop chaining, hop count, and switch adjacency."""
    assert path.hop_count == hamming_distance(path.source, path.destination)
    current = path.source
    for hop in path.hops:
        assert hop.src == current
        assert differing_digits(hop.src, hop.dst) == (hop.fixed_digit,)
        assert hop.via.layer == hop.fixed_digit
        assert t.adjacent(hop.src, hop.via) is not None
        assert t.adjacent(hop.dst, hop.via) is not None
        current = hop.dst
    assert current == path.destination


def test_shortest_path_orders():
    t = build(3, 3)
    src, dst = Host((0, 0, 0)), Host((1, 2, 2))
    assert hosts_of(shortest_path(t, src, dst, (1, 2, 3))) == ("000", "100", "120", "122")
    assert hosts_of(shortest_path(t, src, dst, (3, 2, 1))) == ("000", "002", "022", "122")

    t23 = build(2, 3)
    path = shortest_path(t23, Host((0, 0)), Host((0, 1)), (2,))
    assert path.hop_count == 1
    assert path.hops[0].via == Switch(2, (0,))


def test_shortest_path_errors():
    t = build(3, 3)
    src, dst = Host((0, 0, 0)), Host((1, 2, 2))
    with pytest.raises(DomainError):
        shortest_path(t, src, src, ())
    with pytest.raises(DomainError):
        shortest_path(t, src, dst, (1, 2))  # misses digit 3
    with pytest.raises(DomainError):
        shortest_path(t, src, dst, (1, 2, 2))
    with pytest.raises(DomainError):
        shortest_path(t, src, Host((0, 0, 1)), (1,))  # digit 1 does not differ


def test_descending_path_examples():
    t = build(3, 3)
    assert hosts_of(descending_path(t, Host((0, 0, 0)), Host((1, 2, 2)))) == (
        "000",
        "002",
        "022",
        "122",
    )
    # fixing digit 2 before digit 1 takes 21 through 22 to 02
    t23 = build(2, 3)
    path = descending_path(t23, Host((2, 1)), Host((0, 2)))
    assert hosts_of(path) == ("21", "22", "02")
    assert_valid_shortest_path(t23, path)

    t14 = build(1, 4)
    path = descending_path(t14, Host((0,)), Host((1,)))
    assert path.hop_count == 1
    assert path.hops[0].via == Switch(1, ())
    with pytest.raises(DomainError):
        descending_path(t14, Host((2,)), Host((2,)))


def test_enumerate_all_six_shortest_paths():
    t = build(3, 3)
    paths = enumerate_shortest_paths(t, Host((0, 0, 0)), Host((1, 2, 2)))
    assert {hosts_of(p) for p in paths} == {
        ("000", "100", "120", "122"),
        ("000", "100", "102", "122"),
        ("000", "020", "120", "122"),
        ("000", "020", "022", "122"),
        ("000", "002", "102", "122"),
        ("000", "002", "022", "122"),
    }
    for path in paths:
        assert_valid_shortest_path(t, path)


def test_enumerate_counts_and_cap():
    t = build(2, 2)
    assert len(enumerate_shortest_paths(t, Host((0, 0)), Host((0, 1)))) == 1
    two = enumerate_shortest_paths(t, Host((0, 0)), Host((1, 1)))
    assert len(two) == 2 and two[0] != two[1]

    t8 = build(8, 2)
    with pytest.raises(CapacityError):
        enumerate_shortest_paths(t8, Host((0,) * 8), Host((1,) * 8))  # 8! paths
    with pytest.raises(CapacityError):
        enumerate_shortest_paths(t, Host((0, 0)), Host((1, 1)), max_paths=1)
    t5 = build(5, 2)
    assert len(enumerate_shortest_paths(t5, Host((0,) * 5), Host((1,) * 5))) == 120


@pytest.mark.parametrize(
    "ell,d,paths",
    [(1, 3, 6), (2, 3, 72), (3, 3, 702)],
)
def test_descending_routing_counts(ell, d, paths):
    t = build(ell, d)
    routing = descending_routing(t)
    assert len(routing) == paths == t.num_hosts * (t.num_hosts - 1)
    if ell == 1:
        assert all(p.hop_count == 1 for p in routing)


def test_descending_routing_cap():
    with pytest.raises(CapacityError):
        descending_routing(build(2, 3), max_paths=10)


def test_duplicate_pair_rejected():
    t = build(1, 2)
    path = descending_path(t, Host((0,)), Host((1,)))
    routing = Routing([path])
    with pytest.raises(DomainError):
        routing.add(path)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_single_layer_loads_are_uniform(d):
    """With one switch layer every host is endpoint d-1 times per direction."""
    t = build(1, d)
    loads = link_loads(t, descending_routing(t))
    assert set(loads.values()) == {d - 1}


def test_top_layer_uplink_load():
    t = build(3, 3)
    loads = link_loads(t, descending_routing(t))
    top_uplinks = [l for l in loads if l.direction == UP and l.layer == 3]
    assert len(top_uplinks) == 27
    assert all(loads[l] == 18 for l in top_uplinks)


def test_empty_routing_loads_are_zero():
    t = build(2, 2)
    loads = link_loads(t, Routing())
    assert len(loads) == t.num_links
    assert set(loads.values()) == {0}
    assert max_link_load(t, Routing()) == 0


@pytest.mark.parametrize(
    "ell,d,expected",
    [(3, 3, 18), (2, 2, 2), (1, 4, 3)],
)
def test_max_link_load_values(ell, d, expected):
    t = build(ell, d)
    assert max_link_load(t, descending_routing(t)) == expected
    assert expected == d**ell - d ** (ell - 1)


def test_max_link_load_closed_form_up_to_256_hosts():
    for ell in range(1, 9):
        for d in range(2, 17):
            if d**ell > 256:
                continue
            t = build(ell, d)
            assert max_link_load(t, descending_routing(t)) == d**ell - d ** (ell - 1)


def test_loads_sum_to_twice_total_hops():
    t = build(2, 3)
    routing = descending_routing(t)
    loads = link_loads(t, routing)
    assert sum(loads.values()) == 2 * sum(p.hop_count for p in routing)


def test_pair_count_examples():
    t = build(3, 3)
    up = DirectedLink(UP, 3, Host((0, 1, 2)))
    down = DirectedLink(DOWN, 3, Host((0, 1, 2)))
    assert uplink_pair_count(t, up) == 18
    assert downlink_pair_count(t, down) == 18

    t23 = build(2, 3)
    assert uplink_pair_count(t23, DirectedLink(UP, 1, Host((0, 0)))) == 6


def test_pair_count_direction_mismatch():
    t = build(2, 3)
    with pytest.raises(DomainError):
        uplink_pair_count(t, DirectedLink(DOWN, 1, Host((0, 0))))
    with pytest.raises(DomainError):
        downlink_pair_count(t, DirectedLink(UP, 1, Host((0, 0))))
    with pytest.raises(DomainError):
        uplink_pair_count(t, DirectedLink(UP, 3, Host((0, 0))))


@pytest.mark.parametrize("ell,d", [(2, 3), (3, 2)])
def test_pair_counts_match_enumerated_loads(ell, d):
    """The membership-condition counts must agree with full path enumeration."""
    t = build(ell, d)
    loads = link_loads(t, descending_routing(t))
    for link, load in loads.items():
        if link.direction == UP:
            assert uplink_pair_count(t, link) == load
        else:
            assert downlink_pair_count(t, link) == load


@pytest.mark.parametrize("ell,d", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_lower_layer_loads_scale_by_d(ell, d):
    """Layer-k loads are d times the corresponding loads one size down."""
    t = build(ell, d)
    small = build(ell - 1, d) if ell > 1 else None
    if small is None:
        return
    loads = link_loads(t, descending_routing(t))
    small_loads = link_loads(small, descending_routing(small))
    for link, load in loads.items():
        if link.layer >= ell:
            continue
        projected = DirectedLink(link.direction, link.layer, Host(link.host.digits[:-1]))
        assert load == d * small_loads[projected]


def test_loads_merge_across_source_partitions():
    """Accumulating per-source partitions and summing matches one pass."""
    t = build(2, 3)
    full = link_loads(t, descending_routing(t))
    parts = [Routing(), Routing()]
    for src in t.hosts:
        bucket = parts[t.host_to_int(src) % 2]
        for dst in t.hosts:
            if src != dst:
                bucket.add(descending_path(t, src, dst))
    merged = {link: 0 for link in t.links()}
    for part in parts:
        for link, load in link_loads(t, part).items():
            merged[link] += load
    assert merged == full


def test_link_occupants_retains_paths():
    t = build(1, 3)
    routing = descending_routing(t)
    occupants = link_occupants(t, routing)
    loads = link_loads(t, routing)
    assert {link: len(paths) for link, paths in occupants.items()} == loads


def test_integrity_error_on_foreign_path():
    t = build(2, 2)
    bogus = DiPath(
        Host((0, 5)),
        Host((1, 5)),
        (Hop(Host((0, 5)), Switch(1, (5,)), Host((1, 5)), 1),),
    )
    with pytest.raises(IntegrityError):
        link_loads(t, Routing([bogus]))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_random_orders_give_valid_paths(data):
    ell = data.draw(st.integers(min_value=1, max_value=4), label="ell")
    d = data.draw(st.integers(min_value=2, max_value=4), label="d")
    t = build(ell, d)
    digits = st.tuples(*[st.integers(min_value=0, max_value=d - 1)] * ell)
    src = Host(data.draw(digits, label="src"))
    dst = Host(data.draw(digits.filter(lambda v: v != src.digits), label="dst"))
    diff = list(differing_digits(src, dst))
    order = data.draw(st.permutations(diff), label="order")
    path = shortest_path(t, src, dst, order)
    assert_valid_shortest_path(t, path)
    assert tuple(h.fixed_digit for h in path.hops) == tuple(order)


def test_routing_json_dump():
    t = build(2, 3)
    doc = routing_to_json_dict(descending_routing(t))
    assert len(doc) == 72
    record = next(r for r in doc if r["source"] == "21" and r["destination"] == "02")
    assert record["hops"] == [
        {"via_layer": 2, "via_digits": "2", "to": "22"},
        {"via_layer": 1, "via_digits": "2", "to": "02"},
    ]


def test_load_report_csv():
    t = build(1, 2)
    report = load_report_csv(t, link_loads(t, descending_routing(t)))
    lines = report.strip().split("\n")
    assert lines[0] == "layer,direction,host,load"
    assert lines[1:] == ["1,up,0,1", "1,up,1,1", "1,down,0,1", "1,down,1,1"]
