"""Closed forms, exact rational identities, and the exhaustive tiny oracles."""

from fractions import Fraction

import pytest

from bcube_rwa import (
    CapacityError,
    DomainError,
    VerificationError,
    avg_host_distance,
    bruteforce_forwarding_index,
    bruteforce_optical_index,
    build,
    descending_routing,
    forwarding_index,
    full_report,
    hamming_distance,
    load_lower_bound,
    max_link_load,
    optical_upper_bound,
    report_csv,
    report_table,
)
from bcube_rwa.coloring import exact_chromatic, greedy_color, is_proper

SMALL_GRID = [
    (ell, d) for ell in range(1, 7) for d in range(2, 9) if d**ell <= 64
]


def brute_avg(t) -> Fraction:
    total = sum(
        2 * hamming_distance(a, b) for a in t.hosts for b in t.hosts if a != b
    )
    return Fraction(total, t.num_hosts * (t.num_hosts - 1))


def test_forwarding_index_values():
    assert forwarding_index(3, 3) == 18
    assert [forwarding_index(1, d) for d in (2, 3, 4, 5)] == [1, 2, 3, 4]
    assert forwarding_index(2, 4) == 12
    t = build(2, 4)
    assert max_link_load(t, descending_routing(t)) == 12
    with pytest.raises(DomainError):
        forwarding_index(0, 3)


def test_avg_host_distance_values():
    assert avg_host_distance(2, 3) == 3
    assert avg_host_distance(1, 2) == 2
    assert avg_host_distance(3, 3) == Fraction(54, 13)


@pytest.mark.parametrize("ell,d", SMALL_GRID)
def test_avg_host_distance_matches_enumeration(ell, d):
    assert avg_host_distance(ell, d) == brute_avg(build(ell, d))


@pytest.mark.parametrize("ell,d", SMALL_GRID)
def test_load_lower_bound_equals_forwarding_index(ell, d):
    assert load_lower_bound(ell, d) == forwarding_index(ell, d)


def test_optical_upper_bound_values():
    assert optical_upper_bound(3, 3) == 24
    assert optical_upper_bound(2, 5) == 20
    assert optical_upper_bound(4, 2) == 11
    assert [optical_upper_bound(1, d) for d in (2, 5)] == [1, 4]


@pytest.mark.parametrize(
    "ell,d,pi,omega",
    [(1, 2, 1, 1), (1, 3, 2, 2), (1, 4, 3, 3), (1, 5, 4, 4), (2, 2, 2, 2)],
)
def test_bruteforce_oracles(ell, d, pi, omega):
    t = build(ell, d)
    assert bruteforce_forwarding_index(t) == pi == forwarding_index(ell, d)
    assert bruteforce_optical_index(t) == omega


def test_oracle_guards():
    with pytest.raises(CapacityError):
        bruteforce_forwarding_index(build(2, 3))  # 9 hosts
    with pytest.raises(CapacityError):
        bruteforce_forwarding_index(build(3, 2))  # too many path combinations
    with pytest.raises(CapacityError):
        bruteforce_optical_index(build(2, 2), max_combos=3)


def test_oracle_agrees_with_layered_plan_where_admissible():
    from bcube_rwa import layered_plan

    for ell, d in [(1, 2), (1, 3), (1, 4), (1, 5), (2, 2)]:
        t = build(ell, d)
        assert bruteforce_optical_index(t) == layered_plan(t).wavelength_count


def test_full_report_two_three():
    report = full_report(2, 3)
    assert report.forwarding_index == 6
    assert report.achieved["oblivious"] == 8
    assert report.achieved["layered"] == 6
    assert report.achieved["two-layer"] == 6
    assert report.optical_upper == 6
    assert report.avg_host_distance == 3


def test_full_report_three_three():
    report = full_report(3, 3)
    assert report.forwarding_index == 18
    assert report.load_lower_bound == 18
    assert report.achieved == {"oblivious": 26, "layered": 22, "greedy": 20}
    assert report.optical_upper == 24
    assert report.oracle_forwarding is None


def test_full_report_single_layer():
    report = full_report(1, 4)
    assert report.forwarding_index == 3
    assert report.achieved["oblivious"] == 3
    assert report.achieved["layered"] == 3


def test_full_report_with_oracle():
    report = full_report(2, 2, include_oracle=True)
    assert report.oracle_forwarding == 2
    assert report.oracle_optical == 2
    assert report.oracle_note == "optimal: meets the distance lower bound"
    doc = report.to_json_dict()
    assert doc["oracle"] == {"forwarding": 2, "optical": 2, "note": report.oracle_note}
    assert doc["avg_host_distance"] == "8/3"


@pytest.mark.parametrize("ell,d", [(1, 3), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_full_report_bound_chain(ell, d):
    report = full_report(ell, d)
    greedy = report.achieved["greedy"]
    layered = report.achieved["layered"]
    assert (
        report.optical_lower
        <= greedy
        <= layered
        <= report.optical_upper
        <= d**ell - 1
    )


def test_full_report_scheme_validation():
    with pytest.raises(DomainError):
        full_report(2, 3, schemes=("nonsense",))
    with pytest.raises(DomainError):
        full_report(3, 2, schemes=("two-layer",))
    report = full_report(3, 2, schemes=("oblivious",))
    assert set(report.achieved) == {"oblivious"}


def test_report_table_and_csv():
    reports = [full_report(2, 3), full_report(3, 3)]
    table = report_table(reports)
    lines = table.strip().split("\n")
    assert lines[0].split() == [
        "ell", "d", "pi", "oblivious", "layered", "greedy", "bound", "oracle",
    ]
    assert lines[1].split() == ["2", "3", "6", "8", "6", "6", "6", "-"]
    assert lines[2].split() == ["3", "3", "18", "26", "22", "20", "24", "-"]

    csv = report_csv([full_report(2, 2, include_oracle=True)])
    assert csv.splitlines()[1] == "2,2,2,3,2,2,2,2"


def test_exact_chromatic_on_known_graphs():
    cycle5 = {i: {(i + 1) % 5, (i - 1) % 5} for i in range(5)}
    assert exact_chromatic(range(5), cycle5)[0] == 3

    complete4 = {i: set(range(4)) - {i} for i in range(4)}
    chi, colors = exact_chromatic(range(4), complete4)
    assert chi == 4 and is_proper(colors, complete4)

    cycle6 = {i: {(i + 1) % 6, (i - 1) % 6} for i in range(6)}
    assert exact_chromatic(range(6), cycle6)[0] == 2

    assert exact_chromatic([], {})[0] == 0
    with pytest.raises(CapacityError):
        exact_chromatic(range(30), {i: set() for i in range(30)})


def test_greedy_color_is_proper():
    cycle7 = {i: {(i + 1) % 7, (i - 1) % 7} for i in range(7)}
    colors = greedy_color(range(7), cycle7)
    assert is_proper(colors, cycle7)
