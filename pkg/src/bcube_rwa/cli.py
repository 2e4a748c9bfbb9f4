"""Command-line front end: build, route, rwa, verify, and report.

Every command is deterministic (identical invocations give byte-identical
output) and output files are written atomically, so a failed run never
leaves a partial file behind.  Exit codes: 0 success, 2 bad arguments,
3 capacity guardrail, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import analysis
from .cpr import (
    all_nonzero_shifts,
    decompose_traffic,
    shift_routing,
    verify_collision,
    verify_link_disjoint,
)
from .errors import CapacityError, DomainError, VerificationError
from .routing import (
    descending_routing,
    link_loads,
    load_report_csv,
    max_link_load,
    routing_to_json_dict,
    uplink_pair_count,
    downlink_pair_count,
)
from .rwa import (
    greedy_global_plan,
    layered_plan,
    oblivious_plan,
    plan_from_json_dict,
    plan_to_json_dict,
    two_layer_plan,
    verify_nonblocking,
)
from .topology import DEFAULT_HOST_CAP, UP, BCube

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_VERIFY = 4

SCHEMES = {
    "oblivious": oblivious_plan,
    "layered": layered_plan,
    "greedy": greedy_global_plan,
    "two-layer": two_layer_plan,
}

VERIFY_CLASS_CAP = 64


@dataclass(frozen=True)
class RunConfig:
    """Validated arguments of one CLI invocation."""

    command: str
    ell: int | None
    d: int | None
    scheme: str | None = None
    fmt: str = "table"
    out: Path | None = None
    host_cap: int = DEFAULT_HOST_CAP
    plan: Path | None = None
    oracle: bool = False
    deterministic: bool = True


def _config(args: argparse.Namespace) -> RunConfig:
    ell = getattr(args, "ell", None)
    d = getattr(args, "d", None)
    if ell is not None and ell < 1:
        raise DomainError(f"--ell must be >= 1, got {ell}")
    if d is not None and d < 2:
        raise DomainError(f"--d must be >= 2, got {d}")
    return RunConfig(
        command=args.command,
        ell=ell,
        d=d,
        scheme=getattr(args, "scheme", None),
        fmt=getattr(args, "format", "table"),
        out=Path(args.out) if getattr(args, "out", None) else None,
        host_cap=getattr(args, "host_cap", DEFAULT_HOST_CAP),
        plan=Path(args.plan) if getattr(args, "plan", None) else None,
        oracle=getattr(args, "oracle", False),
    )


def write_text_atomic(path: Path, text: str) -> None:
    """Write via a temporary file and rename, so readers never see partials."""
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _emit(cfg: RunConfig, text: str, summary: str | None = None) -> None:
    if cfg.out is not None:
        write_text_atomic(cfg.out, text)
        if summary is not None:
            print(summary)
    else:
        sys.stdout.write(text)


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _topology(cfg: RunConfig) -> BCube:
    if cfg.ell is None or cfg.d is None:
        raise DomainError("this command needs --ell and --d")
    return BCube(cfg.ell, cfg.d, host_cap=cfg.host_cap)


def cmd_build(cfg: RunConfig) -> int:
    topology = _topology(cfg)
    summary = (
        f"hosts={topology.num_hosts} "
        f"switches={topology.num_switches} "
        f"links={topology.num_links}"
    )
    if cfg.fmt == "table":
        print(summary)
    elif cfg.fmt == "json":
        _emit(cfg, _json_text(topology.to_json_dict()), summary)
    elif cfg.fmt == "dot":
        _emit(cfg, topology.to_dot(), summary)
    else:
        raise DomainError(f"build cannot emit format {cfg.fmt!r}")
    return EXIT_OK


def cmd_route(cfg: RunConfig) -> int:
    topology = _topology(cfg)
    routing = descending_routing(topology)
    summary = f"paths={len(routing)} max_load={max_link_load(topology, routing)}"
    if cfg.fmt == "table":
        print(summary)
    elif cfg.fmt == "json":
        _emit(cfg, _json_text(routing_to_json_dict(routing)), summary)
    elif cfg.fmt == "csv":
        _emit(cfg, load_report_csv(topology, link_loads(topology, routing)), summary)
    else:
        raise DomainError(f"route cannot emit format {cfg.fmt!r}")
    return EXIT_OK


def cmd_rwa(cfg: RunConfig) -> int:
    topology = _topology(cfg)
    if cfg.scheme not in SCHEMES:
        raise DomainError(f"unknown scheme {cfg.scheme!r}; pick from {sorted(SCHEMES)}")
    plan = SCHEMES[cfg.scheme](topology)
    certificate = verify_nonblocking(topology, plan)
    flag = "true" if certificate.ok else "false"
    print(f"scheme={plan.scheme} wavelengths={plan.wavelength_count} nonblocking={flag}")
    if cfg.out is not None:
        write_text_atomic(cfg.out, _json_text(plan_to_json_dict(plan)))
    if not certificate.ok:
        print(json.dumps(certificate.to_json_dict()))
        return EXIT_VERIFY
    return EXIT_OK


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    witness: dict | None = None


def _check_topology_counts(topology: BCube) -> CheckResult:
    ell, d = topology.ell, topology.d
    ok = (
        topology.num_hosts == d**ell
        and topology.num_switches == ell * d ** (ell - 1)
        and topology.num_links == 2 * ell * d**ell
        and len(list(topology.links())) == topology.num_links
    )
    return CheckResult("topology-counts", ok)


def _check_adjacency(topology: BCube) -> CheckResult:
    for host in topology.hosts:
        touched = []
        for switch in topology.switches:
            port = topology.adjacent(host, switch)
            if port is not None:
                if port != host.digit(switch.layer):
                    return CheckResult(
                        "adjacency-rule",
                        False,
                        {"host": str(host), "switch": str(switch), "port": port},
                    )
                touched.append(switch.layer)
        if sorted(touched) != list(range(1, topology.ell + 1)):
            return CheckResult(
                "adjacency-rule", False, {"host": str(host), "layers": touched}
            )
    return CheckResult("adjacency-rule", True)


def _check_forwarding_index(topology: BCube) -> CheckResult:
    expected = analysis.forwarding_index(topology.ell, topology.d)
    loads = link_loads(topology, descending_routing(topology))
    if max(loads.values()) != expected:
        return CheckResult(
            "forwarding-index", False, {"max_load": max(loads.values()), "expected": expected}
        )
    for link, load in loads.items():
        counted = (
            uplink_pair_count(topology, link)
            if link.direction == UP
            else downlink_pair_count(topology, link)
        )
        if counted != load:
            return CheckResult(
                "forwarding-index",
                False,
                {"link": str(link), "enumerated": load, "counted": counted},
            )
    return CheckResult("forwarding-index", True)


def _check_average_distance(topology: BCube) -> CheckResult:
    ell, d = topology.ell, topology.d
    closed = analysis.avg_host_distance(ell, d)
    total = 0
    for src in topology.hosts:
        for dst in topology.hosts:
            if src != dst:
                total += 2 * sum(1 for a, b in zip(src.digits, dst.digits) if a != b)
    pairs = topology.num_hosts * (topology.num_hosts - 1)
    ok = (
        closed * pairs == total
        and analysis.load_lower_bound(ell, d) == analysis.forwarding_index(ell, d)
    )
    return CheckResult("average-distance", ok)


def _check_traffic_partition(topology: BCube) -> CheckResult:
    classes = decompose_traffic(topology)
    n = topology.num_hosts
    ok = len(classes) == n - 1 and all(len(pairs) == n for pairs in classes.values())
    return CheckResult("traffic-partition", ok)


def _check_link_disjointness(topology: BCube) -> CheckResult:
    for shift in all_nonzero_shifts(topology.ell, topology.d):
        certificate = verify_link_disjoint(topology, shift_routing(topology, shift))
        if not certificate.link_disjoint:
            return CheckResult("link-disjointness", False, certificate.to_json_dict())
    return CheckResult("link-disjointness", True)


def _check_collision_structure(topology: BCube) -> CheckResult:
    shifts = all_nonzero_shifts(topology.ell, topology.d)
    if len(shifts) > VERIFY_CLASS_CAP:
        raise CapacityError(
            f"collision check over {len(shifts)} classes exceeds the cap of "
            f"{VERIFY_CLASS_CAP}; verify a smaller instance"
        )
    saturated = topology.num_hosts
    for i, x in enumerate(shifts):
        for y in shifts[i + 1 :]:
            report = verify_collision(topology, x, y)
            both = x.support & y.support
            if report.colliding_layers != both:
                return CheckResult(
                    "collision-structure",
                    False,
                    {"x": str(x), "y": str(y), "layers": sorted(report.colliding_layers)},
                )
            if any(report.shared_per_layer[layer] != saturated for layer in both):
                return CheckResult(
                    "collision-structure",
                    False,
                    {"x": str(x), "y": str(y), "counts": report.shared_per_layer},
                )
    return CheckResult("collision-structure", True)


def _check_plans(topology: BCube) -> list[CheckResult]:
    results = []
    counts = {}
    for scheme, builder in SCHEMES.items():
        if scheme == "two-layer" and topology.ell != 2:
            continue
        plan = builder(topology)
        certificate = verify_nonblocking(topology, plan)
        counts[scheme] = plan.wavelength_count
        results.append(
            CheckResult(
                f"plan-{scheme}",
                certificate.ok,
                None if certificate.ok else certificate.to_json_dict(),
            )
        )
    ell, d = topology.ell, topology.d
    lower = analysis.forwarding_index(ell, d)
    upper = analysis.optical_upper_bound(ell, d)
    chain = (
        lower <= counts["greedy"] <= counts["layered"] <= upper <= d**ell - 1
        and counts["oblivious"] == d**ell - 1
        and (ell > 2 or counts["layered"] == upper)
    )
    results.append(
        CheckResult("bound-chain", chain, None if chain else {"counts": counts})
    )
    return results


def run_verification(topology: BCube) -> list[CheckResult]:
    """The desk-scale claim suite the ``verify`` command prints."""
    results = [
        _check_topology_counts(topology),
        _check_adjacency(topology),
        _check_forwarding_index(topology),
        _check_average_distance(topology),
        _check_traffic_partition(topology),
        _check_link_disjointness(topology),
        _check_collision_structure(topology),
    ]
    results.extend(_check_plans(topology))
    return results


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.plan is not None:
        try:
            data = json.loads(cfg.plan.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read plan file {cfg.plan}: {exc}") from exc
        plan = plan_from_json_dict(data)
        topology = BCube(plan.ell, plan.d, host_cap=cfg.host_cap)
        certificate = verify_nonblocking(topology, plan)
        status = "pass" if certificate.ok else "fail"
        print(f"check=plan-nonblocking status={status}")
        if not certificate.ok:
            print(json.dumps(certificate.to_json_dict()))
            return EXIT_VERIFY
        return EXIT_OK

    failures = 0
    for result in run_verification(_topology(cfg)):
        print(f"check={result.name} status={'pass' if result.ok else 'fail'}")
        if not result.ok:
            failures += 1
            if result.witness is not None:
                print(json.dumps(result.witness))
    return EXIT_VERIFY if failures else EXIT_OK


def cmd_report(cfg: RunConfig) -> int:
    report = analysis.full_report(
        cfg.ell, cfg.d, include_oracle=cfg.oracle, host_cap=cfg.host_cap
    )
    if cfg.fmt == "table":
        text = analysis.report_table([report])
    elif cfg.fmt == "csv":
        text = analysis.report_csv([report])
    elif cfg.fmt == "json":
        text = _json_text(report.to_json_dict())
    else:
        raise DomainError(f"report cannot emit format {cfg.fmt!r}")
    _emit(cfg, text, None)
    return EXIT_OK


_COMMANDS = {
    "build": cmd_build,
    "route": cmd_route,
    "rwa": cmd_rwa,
    "verify": cmd_verify,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcube-rwa",
        description="Build BCube topologies, route all-pairs traffic, and assign wavelengths.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, need_params: bool = True) -> None:
        p.add_argument("--ell", type=int, required=need_params, help="number of switch layers")
        p.add_argument("--d", type=int, required=need_params, help="switch radix")
        p.add_argument(
            "--host-cap",
            dest="host_cap",
            type=int,
            default=DEFAULT_HOST_CAP,
            help="refuse to build instances with more hosts than this",
        )
        p.add_argument("--out", help="write the primary output to this file (atomically)")

    p_build = sub.add_parser("build", help="construct a topology and export it")
    add_common(p_build)
    p_build.add_argument("--format", choices=["table", "json", "dot"], default="table")

    p_route = sub.add_parser("route", help="all-pairs descending routing and link loads")
    add_common(p_route)
    p_route.add_argument("--format", choices=["table", "json", "csv"], default="table")

    p_rwa = sub.add_parser("rwa", help="run a wavelength-assignment scheme")
    add_common(p_rwa)
    p_rwa.add_argument("--scheme", choices=sorted(SCHEMES), required=True)

    p_verify = sub.add_parser("verify", help="machine-check the structural claims")
    add_common(p_verify, need_params=False)
    p_verify.add_argument("--plan", help="verify a previously emitted plan file instead")

    p_report = sub.add_parser("report", help="indices, bounds, and achieved counts")
    add_common(p_report)
    p_report.add_argument("--format", choices=["table", "json", "csv"], default="table")
    p_report.add_argument(
        "--oracle",
        action="store_true",
        help="include the exhaustive tiny-instance oracles (small instances only)",
    )

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](_config(args))
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
