"""Command-line front end.

Every command prints a JSON envelope ({tool_version, command, config,
payload, timestamp}) on stdout, or a plain-text rendering of the same
payload with ``--pretty``.  ``replay`` re-executes an envelope from its
embedded config and checks that the payload is reproduced.

Exit codes: 0 success (Valid pair, or a completed search even when
nothing is found), 1 Invalid pair / size mismatch / replay mismatch,
2 search stopped by a resource limit, 3 configuration or input error.
"""

from __future__ import annotations

import argparse
import functools
import json
import sys
from datetime import datetime, timezone

from . import __version__, kernels
from .duality import SizeMismatchError, verify_pair_exact, verify_pair_fast
from .profiles import enumerate_profiles, odd_prime_obstruction
from .search import (
    CheckpointMismatch,
    OracleGuardError,
    SearchLimits,
    SearchReport,
    brute_force_oracle,
    deterministic_view,
    realize_profile,
    search_primitive_pairs,
)
from .sets import ClassProfile, Subset

EXIT_OK, EXIT_INVALID, EXIT_LIMIT, EXIT_CONFIG = 0, 1, 2, 3


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors; exit 2 is reserved for limits
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def parse_residues(text: str, n: int) -> list[int]:
    """Comma-separated residues; values outside [0, n) are reduced with a warning."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            r = int(tok)
        except ValueError:
            raise InputError(f"not an integer: {tok!r}") from None
        if not 0 <= r < n:
            print(f"warning: residue {r} reduced to {r % n} mod {n}", file=sys.stderr)
            r %= n
        if r in out:
            raise InputError(f"duplicate residue {r}")
        out.append(r)
    if not out:
        raise InputError("empty residue list")
    return sorted(out)


def parse_profile(text: str, n: int) -> ClassProfile:
    vals = {}
    for tok in text.split(","):
        try:
            d, v = tok.split(":")
            vals[int(d)] = int(v)
        except ValueError:
            raise InputError(f"bad profile entry {tok!r}; expected d:value") from None
    try:
        return ClassProfile(n, vals)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# --------------------------------------------------------------------------
# execution from a config dict (shared by the subcommands and replay)

def run_verify(cfg: dict) -> tuple[dict, int]:
    n = cfg["n"]
    S, T = Subset.of(n, cfg["S"]), Subset.of(n, cfg["T"])
    routes = {}
    if cfg["route"] in ("exact", "both"):
        routes["exact"] = verify_pair_exact(S, T)
    if cfg["route"] in ("fast", "both"):
        routes["fast"] = verify_pair_fast(S, T)
    verdicts = {c.verdict.value for c in routes.values()}
    valid = verdicts == {"Valid"}
    payload = {
        "verdict": "Valid" if valid else "Invalid",
        "routes_agree": len(verdicts) == 1,
        "routes": {k: c.to_dict() for k, c in routes.items()},
    }
    return payload, EXIT_OK if valid else EXIT_INVALID


def run_profiles(cfg: dict) -> tuple[dict, int]:
    ps = enumerate_profiles(cfg["n"], cfg["size"], cfg["primitive"], cfg.get("theorems", True))
    return ps.to_dict(), EXIT_OK


def _limits(cfg: dict) -> SearchLimits:
    return SearchLimits(max_nodes=cfg["max_nodes"], max_seconds=cfg["max_seconds"],
                        trace_limit=cfg["trace_limit"])


def _search_exit(report: SearchReport) -> int:
    return EXIT_OK if report.exhausted else EXIT_LIMIT


def run_search(cfg: dict, session: dict | None = None) -> tuple[dict, int]:
    session = session or {}
    report = search_primitive_pairs(
        cfg["n"], _limits(cfg), theorems=cfg["theorems"], prune=cfg["prune"],
        unit_orbits=cfg["unit_orbits"], workers=session.get("workers", 1),
        checkpoint=session.get("checkpoint"), resume=session.get("resume", False))
    return report.to_dict(), _search_exit(report)


def run_realize(cfg: dict, session: dict | None = None) -> tuple[dict, int]:
    session = session or {}
    profile = ClassProfile.from_dict(cfg["n"], cfg["profile"])
    report = realize_profile(
        cfg["n"], profile, _limits(cfg), prune=cfg["prune"], unit_orbits=cfg["unit_orbits"],
        workers=session.get("workers", 1), checkpoint=session.get("checkpoint"),
        resume=session.get("resume", False))
    return report.to_dict(), _search_exit(report)


def run_obstruction(cfg: dict) -> tuple[dict, int]:
    return odd_prime_obstruction(cfg["p"], cfg["l"]).to_dict(), EXIT_OK


def run_oracle(cfg: dict) -> tuple[dict, int]:
    pairs = brute_force_oracle(cfg["n"], cfg["size"], cfg["guard"])
    return {"n": cfg["n"], "size_S": cfg["size"],
            "pairs": [[list(S), list(T)] for S, T in pairs], "count": len(pairs)}, EXIT_OK


RUNNERS = {
    "verify": run_verify,
    "profiles": run_profiles,
    "search": run_search,
    "realize": run_realize,
    "obstruction": run_obstruction,
    "oracle": run_oracle,
}


def execute(command: str, cfg: dict, session: dict | None = None) -> tuple[dict, int]:
    runner = RUNNERS[command]
    if command in ("search", "realize"):
        return runner(cfg, session)
    return runner(cfg)


def envelope(command: str, cfg: dict, payload: dict) -> dict:
    return {
        "tool": "formaldual",
        "tool_version": __version__,
        "command": command,
        "config": cfg,
        "payload": payload,
        "backend": kernels.BACKEND,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


# --------------------------------------------------------------------------
# plain-text rendering

def _fmt_set(xs) -> str:
    return "{" + ",".join(map(str, xs)) + "}"


def render(command: str, payload: dict) -> str:
    lines = []
    if command == "verify":
        lines.append(f"verdict: {payload['verdict']}")
        for name, c in payload["routes"].items():
            lines.append(f"  {name:5s} {c['route']:20s} {c['verdict']}")
            if c["violation"]:
                v = c["violation"]
                lines.append(f"        y={v['y']}: {v['lhs']} != {v['rhs']} ({v['kind']})")
        c = next(iter(payload["routes"].values()))
        lines.append("  v      : " + " ".join(f"{v:3d}" for v in range(len(c["nu_S"]))))
        lines.append("  nu_S(v): " + " ".join(f"{v:3d}" for v in c["nu_S"]))
        lines.append("  nu_T(v): " + " ".join(f"{v:3d}" for v in c["nu_T"]))
    elif command == "profiles":
        lines.append(f"n={payload['n']} |S|={payload['size_S']} |T|={payload['size_T']} "
                     f"primitive={payload['primitive_required']}: {payload['count']} profile(s)")
        if payload["profiles"]:
            keys = list(payload["profiles"][0])
            lines.append("  d    " + " ".join(f"{k:>4s}" for k in keys))
            for i, p in enumerate(payload["profiles"], 1):
                lines.append(f"  nu{i:<3d}" + " ".join(f"{p[k]:4d}" for k in keys))
        if payload["trace"]:
            lines.append("  pruned: " + ", ".join(f"{k}={v}" for k, v in payload["trace"].items()))
    elif command in ("search", "realize"):
        status = "exhausted" if payload["exhausted"] else f"stopped ({payload['stop_reason']})"
        lines.append(f"n={payload['n']} {command}: {len(payload['found'])} found, {status}")
        for f in payload["found"]:
            if command == "search":
                lines.append(f"  S={_fmt_set(f[0])}  T={_fmt_set(f[1])}")
            else:
                lines.append(f"  {_fmt_set(f)}")
        lines.append(f"  nodes={payload['nodes_expanded']} units={payload['units_completed']}"
                     f"/{payload['units_total']}")
        if payload["prunes_by_reason"]:
            lines.append("  pruned: " + ", ".join(
                f"{k}={v}" for k, v in payload["prunes_by_reason"].items()))
    elif command == "obstruction":
        lines.append(f"p={payload['p']} l={payload['l']} mod {payload['modulus']}: "
                     f"lhs={payload['lhs']} rhs={payload['rhs']} -> {payload['conclusion']}")
    else:
        lines.append(json.dumps(payload, indent=2))
    return "\n".join(lines)


# --------------------------------------------------------------------------
# argument handling

def _limit_args(p):
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--max-seconds", type=float, default=None)
    p.add_argument("--trace-limit", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--checkpoint", help="write a checkpoint after every completed unit")
    p.add_argument("--resume", metavar="PATH", help="resume from (and keep updating) PATH")
    p.add_argument("--no-prune", action="store_true", help="plain enumeration, for cross-checks")
    p.add_argument("--unit-orbits", action="store_true",
                   help="reduce by multiplication with units as well")


@functools.lru_cache(maxsize=1)
def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="formaldual", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"formaldual {__version__}")
    out = _Parser(add_help=False)
    g = out.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="JSON envelope (default)")
    g.add_argument("--pretty", action="store_true", help="human-readable rendering")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[out], help="check whether S and T are formally dual")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-S", required=True)
    p.add_argument("-T", required=True)
    p.add_argument("--route", choices=["exact", "fast", "both"], default="both")

    p = sub.add_parser("profiles", parents=[out], help="admissible weight-enumerator profiles")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-s", "--size", type=int, required=True)
    p.add_argument("--primitive", action="store_true")
    p.add_argument("--no-theorems", action="store_true",
                   help="only conditions valid for every n")

    p = sub.add_parser("search", parents=[out], help="exhaustive search for primitive pairs")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--no-theorems", action="store_true",
                   help="skip the prime-power size gate and congruence obstruction")
    _limit_args(p)

    p = sub.add_parser("realize", parents=[out], help="all sets with a given class profile")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--profile", required=True, help="d:value,... over all divisors of n")
    _limit_args(p)

    p = sub.add_parser("obstruction", parents=[out], help="odd-prime congruence check")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-l", type=int, required=True)

    p = sub.add_parser("oracle", parents=[out], help="brute-force all formally dual pairs")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-s", "--size", type=int, required=True)
    p.add_argument("--guard", type=int, default=10**7)

    p = sub.add_parser("replay", parents=[out], help="re-run an envelope and compare payloads")
    p.add_argument("envelope", help="envelope JSON file, or - for stdin")
    return ap


def _config(args) -> tuple[dict, dict]:
    c = args.command
    if c == "verify":
        return {"n": args.n, "S": parse_residues(args.S, args.n),
                "T": parse_residues(args.T, args.n), "route": args.route}, {}
    if c == "profiles":
        return {"n": args.n, "size": args.size, "primitive": args.primitive,
                "theorems": not args.no_theorems}, {}
    if c in ("search", "realize"):
        lim = SearchLimits.from_env(max_nodes=args.max_nodes, max_seconds=args.max_seconds,
                                    trace_limit=args.trace_limit)
        cfg = {"n": args.n, "prune": not args.no_prune, "unit_orbits": args.unit_orbits,
               **lim.to_dict()}
        if c == "search":
            cfg["theorems"] = not args.no_theorems
        else:
            cfg["profile"] = parse_profile(args.profile, args.n).to_dict()
        session = {"workers": args.workers}
        if args.resume:
            session.update(checkpoint=args.resume, resume=True)
        elif args.checkpoint:
            session.update(checkpoint=args.checkpoint)
        return cfg, session
    if c == "obstruction":
        return {"p": args.p, "l": args.l}, {}
    if c == "oracle":
        return {"n": args.n, "size": args.size, "guard": args.guard}, {}
    raise AssertionError(c)


def _emit(args, command, cfg, payload):
    if args.pretty:
        print(render(command, payload))
    else:
        print(json.dumps(envelope(command, cfg, payload), sort_keys=True))


def _replay(args) -> int:
    text = sys.stdin.read() if args.envelope == "-" else open(args.envelope).read()
    env = json.loads(text)
    missing = [k for k in ("command", "config", "payload") if k not in env]
    if missing or env["command"] not in RUNNERS:
        raise InputError(f"not a replayable envelope (missing {missing or ['known command']})")
    payload, _ = execute(env["command"], env["config"])
    same = deterministic_view(payload) == deterministic_view(env["payload"])
    result = {"command": env["command"], "reproduced": same}
    if args.pretty:
        print(f"{env['command']}: {'reproduced' if same else 'MISMATCH'}")
    else:
        print(json.dumps(envelope("replay", {"envelope": env["config"]}, result), sort_keys=True))
    return EXIT_OK if same else EXIT_INVALID


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "replay":
            return _replay(args)
        cfg, session = _config(args)
        payload, code = execute(args.command, cfg, session)
    except SizeMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CheckpointMismatch as exc:
        print(f"error: cannot resume: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InputError, OracleGuardError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(args, args.command, cfg, payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
