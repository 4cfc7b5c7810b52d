"""Backtracking realisation of class profiles and the primitive-pair search.

The depth-first search places residues in increasing order with 0 fixed
(translation normalisation) and keeps a completed set only if it equals
its own canonical form, so every orbit under translation and negation is
reported once.  Work is cut into units at the first placement with more
than one option; units run in a fixed order, possibly on several worker
processes, and are merged in that order, which makes node counts, prune
counters and found lists independent of the worker count.  After each
completed unit a checkpoint can be written; a resumed run skips the units
already recorded and produces the same report.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, gcd
from pathlib import Path

from . import __version__, kernels
from .duality import (
    exact_identity_failure,
    forced_dual_profile,
    verify_pair_exact,
)
from .numtheory import divisors
from .profiles import enumerate_profiles
from .sets import (
    ClassProfile,
    Subset,
    canonical_form,
    is_in_proper_coset,
    symmetry_multipliers,
    weight_enumerator,
)

CHECKPOINT_FORMAT = "formaldual-checkpoint/1"
DEFAULT_MAX_NODES = 10**8
DEFAULT_MAX_SECONDS = 3600.0


class CheckpointMismatch(RuntimeError):
    """The checkpoint was written by a different configuration or code version."""


class OracleGuardError(RuntimeError):
    """The brute-force oracle would exceed its pair-count guard."""


@dataclass(frozen=True)
class SearchLimits:
    max_nodes: int = DEFAULT_MAX_NODES
    max_seconds: float = DEFAULT_MAX_SECONDS
    trace_limit: int = 200

    @classmethod
    def from_env(cls, **overrides) -> SearchLimits:
        env = os.environ
        vals = {
            "max_nodes": int(env.get("FORMALDUAL_MAX_NODES", DEFAULT_MAX_NODES)),
            "max_seconds": float(env.get("FORMALDUAL_MAX_SECONDS", DEFAULT_MAX_SECONDS)),
        }
        vals.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**vals)

    def to_dict(self) -> dict:
        return {"max_nodes": self.max_nodes, "max_seconds": self.max_seconds,
                "trace_limit": self.trace_limit}


@dataclass
class SearchReport:
    n: int
    kind: str
    profiles: list[dict]
    found: list
    exhausted: bool
    nodes_expanded: int
    prunes_by_reason: dict[str, int]
    trace: list[dict]
    units_total: int
    units_completed: int
    stop_reason: str | None = None
    splits: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "kind": self.kind,
            "profiles": self.profiles,
            "splits": self.splits,
            "found": self.found,
            "exhausted": self.exhausted,
            "stop_reason": self.stop_reason,
            "nodes_expanded": self.nodes_expanded,
            "prunes_by_reason": dict(sorted(self.prunes_by_reason.items())),
            "trace": self.trace,
            "units_total": self.units_total,
            "units_completed": self.units_completed,
            "wall_time": self.wall_time,
        }

    @classmethod
    def from_dict(cls, d: dict) -> SearchReport:
        return cls(
            n=d["n"], kind=d["kind"], profiles=d["profiles"], found=d["found"],
            exhausted=d["exhausted"], nodes_expanded=d["nodes_expanded"],
            prunes_by_reason=dict(d["prunes_by_reason"]), trace=d["trace"],
            units_total=d["units_total"], units_completed=d["units_completed"],
            stop_reason=d.get("stop_reason"), splits=d.get("splits", []),
            wall_time=d.get("wall_time", 0.0),
        )


def code_version_hash() -> str:
    here = Path(__file__).parent
    h = hashlib.sha256(__version__.encode())
    for name in sorted(["search.py", "_pykernels.py", "_kernels.pyx", "profiles.py",
                        "duality.py", "sets.py", "numtheory.py", "polynomial.py"]):
        path = here / name
        if path.exists():
            h.update(name.encode())
            h.update(path.read_bytes())
    return h.hexdigest()[:16]


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


# --------------------------------------------------------------------------
# planning

@dataclass
class _Job:
    """One profile to realise: residue-level target plus bookkeeping."""

    index: int
    size: int
    dual_size: int | None
    profile: ClassProfile


@dataclass
class _Plan:
    jobs: list[_Job]
    units: list[tuple[int, list[int]]]
    nodes: int
    prunes: Counter
    trace: list[dict]
    status: int
    splits: list[dict]


def _event(kind_side: str, job: int, members, over) -> dict:
    return {"profile": job, "side": kind_side, "set": list(members),
            "overflow": {str(d): c for d, c in over}}


def _plan(n: int, jobs: list[_Job], prune: bool, mult: list[int], budget: int,
          deadline: float, trace_limit: int, splits: list[dict]) -> _Plan:
    plan = _Plan(jobs, [], 0, Counter(), [], kernels.STATUS_COMPLETE, splits)
    for job in jobs:
        target = list(job.profile.expand())
        prefix = [0]
        if job.size == 1:
            plan.units.append((job.index, prefix))
            continue
        while True:
            st, _, nodes, prunes, children, trace = kernels.explore(
                n, target, job.size, prefix, budget - plan.nodes, prune, True,
                trace_limit, mult, deadline)
            plan.nodes += nodes
            _add_prunes(plan.prunes, prunes)
            plan.trace.extend(_event("S", job.index, m, o) for m, o in trace)
            if st != kernels.STATUS_COMPLETE:
                plan.status = st
                return plan
            if len(children) == 1 and len(prefix) + 1 < job.size:
                prefix = prefix + [children[0]]
                continue
            plan.units.extend((job.index, prefix + [c]) for c in children)
            break
    return plan


def _add_prunes(acc: Counter, prunes) -> None:
    for name, v in zip(kernels.PRUNE_REASONS, prunes):
        if v:
            acc[name] += v


# --------------------------------------------------------------------------
# units

def _run_unit(n: int, job: _Job, prefix: list[int], budget: int, prune: bool,
              mult: list[int], deadline: float, trace_limit: int, pairs: bool) -> dict:
    target = list(job.profile.expand())
    st, found, nodes, prunes, _, trace = kernels.explore(
        n, target, job.size, prefix, budget, prune, False, trace_limit, mult, deadline)
    acc = Counter()
    _add_prunes(acc, prunes)
    events = [_event("S", job.index, m, o) for m, o in trace]
    out_found = []
    if not pairs:
        for members in found:
            S = Subset.of(n, members)
            _assert_realises(S, job.profile)
            out_found.append(list(members))
        return {"status": st, "nodes": nodes, "prunes": dict(acc), "found": out_found,
                "trace": events}
    for members in found:
        if st != kernels.STATUS_COMPLETE:
            break
        S = Subset.of(n, members)
        _assert_realises(S, job.profile)
        if is_in_proper_coset(S)[0]:
            acc["S_in_proper_coset"] += 1
            continue
        forced = forced_dual_profile(S, job.dual_size)
        if not forced.feasible:
            acc["forced_dual_infeasible"] += 1
            continue
        t_target = list(forced.profile.expand())
        st2, t_found, t_nodes, t_prunes, _, t_trace = kernels.explore(
            n, t_target, job.dual_size, [0], budget - nodes, prune, False, trace_limit,
            mult, deadline)
        nodes += t_nodes
        _add_prunes(acc, t_prunes)
        events.extend(_event("T", job.index, m, o) for m, o in t_trace)
        if st2 != kernels.STATUS_COMPLETE:
            st = st2
            break
        for t_members in t_found:
            T = Subset.of(n, t_members)
            cert = verify_pair_exact(S, T)
            if not cert.valid:
                raise AssertionError(f"realised dual {T} of {S} fails the exact check")
            if is_in_proper_coset(T)[0]:
                acc["T_in_proper_coset"] += 1
                continue
            out_found.append([list(members), list(t_members)])
    return {"status": st, "nodes": nodes, "prunes": dict(acc), "found": out_found,
            "trace": events}


def _assert_realises(S: Subset, profile: ClassProfile) -> None:
    if weight_enumerator(S).counts != profile.expand():
        raise AssertionError(f"{S} does not realise {profile.to_dict()}")


def _unit_worker(args):
    return _run_unit(*args)


# --------------------------------------------------------------------------
# driver

class _Run:
    def __init__(self, n, kind, jobs, splits, config, limits, prune, mult, pairs,
                 workers, checkpoint, resume, stop_after_units):
        self.n, self.kind, self.jobs, self.splits = n, kind, jobs, splits
        self.config, self.limits, self.prune, self.mult = config, limits, prune, mult
        self.pairs, self.workers = pairs, max(1, workers)
        self.checkpoint = Path(checkpoint) if checkpoint else None
        self.resume = resume
        self.stop_after_units = stop_after_units

    def _state0(self):
        return {"completed": 0, "nodes": 0, "prunes": {}, "found": [], "trace": []}

    def _load(self, chash, vhash):
        data = json.loads(self.checkpoint.read_text())
        if data.get("format") != CHECKPOINT_FORMAT:
            raise CheckpointMismatch("unrecognised checkpoint format")
        if data.get("code_hash") != vhash:
            raise CheckpointMismatch(
                f"checkpoint written by code version {data.get('code_hash')}, this is {vhash}")
        if data.get("config_hash") != chash:
            raise CheckpointMismatch(
                "checkpoint configuration differs: "
                f"{json.dumps(data.get('config'), sort_keys=True)} vs "
                f"{json.dumps(self.config, sort_keys=True)}")
        return data["state"], data.get("stop_reason")

    def _save(self, state, chash, vhash, units_total, stop_reason=None):
        if not self.checkpoint:
            return
        data = {"format": CHECKPOINT_FORMAT, "config": self.config, "config_hash": chash,
                "code_hash": vhash, "units_total": units_total, "state": state,
                "stop_reason": stop_reason}
        tmp = self.checkpoint.with_suffix(self.checkpoint.suffix + ".tmp")
        tmp.write_text(json.dumps(data, sort_keys=True))
        os.replace(tmp, self.checkpoint)

    def _merge(self, state, res):
        state["nodes"] += res["nodes"]
        pr = Counter(state["prunes"])
        pr.update(res["prunes"])
        state["prunes"] = {k: v for k, v in sorted(pr.items()) if v}
        state["found"].extend(res["found"])
        room = self.limits.trace_limit - len(state["trace"])
        if room > 0:
            state["trace"].extend(res["trace"][:room])

    def run(self) -> SearchReport:
        t0 = time.monotonic()
        deadline = t0 + self.limits.max_seconds if self.limits.max_seconds else 0.0
        chash, vhash = config_hash(self.config), code_version_hash()
        state = self._state0()
        if self.resume:
            if not self.checkpoint or not self.checkpoint.exists():
                raise CheckpointMismatch("no checkpoint to resume from")
            state, _ = self._load(chash, vhash)
        max_nodes = self.limits.max_nodes
        plan = _plan(self.n, self.jobs, self.prune, self.mult, max_nodes, deadline,
                     self.limits.trace_limit, self.splits)
        units = plan.units
        stop = None
        if plan.status != kernels.STATUS_COMPLETE:
            stop = _stop_name(plan.status)
        session_units = 0

        def used():
            return plan.nodes + state["nodes"]

        def args_for(i, budget):
            job_index, prefix = units[i]
            return (self.n, self.jobs[job_index], prefix, budget, self.prune, self.mult,
                    deadline, self.limits.trace_limit, self.pairs)

        pool = ProcessPoolExecutor(self.workers) if self.workers > 1 and stop is None else None
        try:
            i = state["completed"]
            while stop is None and i < len(units):
                if self.stop_after_units is not None and session_units >= self.stop_after_units:
                    stop = "interrupted"
                    break
                budget = max_nodes - used()
                if pool is None:
                    batch = [_run_unit(*args_for(i, budget))]
                else:
                    width = self.workers * 4
                    if self.stop_after_units is not None:
                        width = min(width, self.stop_after_units - session_units)
                    idx = list(range(i, min(len(units), i + width)))
                    batch = list(pool.map(_unit_worker, [args_for(j, budget) for j in idx]))
                for res in batch:
                    budget = max_nodes - used()
                    if res["status"] == kernels.STATUS_COMPLETE and res["nodes"] > budget:
                        # ran with a larger budget in a worker; redo with the exact one
                        res = _run_unit(*args_for(i, budget))
                    if res["status"] != kernels.STATUS_COMPLETE:
                        self._merge(state, res)
                        stop = _stop_name(res["status"])
                        break
                    self._merge(state, res)
                    i += 1
                    session_units += 1
                    state["completed"] = i
                    self._save(state, chash, vhash, len(units))
                    if self.stop_after_units is not None and session_units >= self.stop_after_units:
                        break
        except KeyboardInterrupt:
            stop = "interrupted"
        finally:
            if pool is not None:
                pool.shutdown(cancel_futures=True)
        completed = state["completed"]
        exhausted = stop is None and completed == len(units)
        if exhausted:
            self._save(state, chash, vhash, len(units))
        prunes = Counter(plan.prunes)
        prunes.update(state["prunes"])
        trace = (plan.trace + state["trace"])[: self.limits.trace_limit]
        return SearchReport(
            n=self.n, kind=self.kind,
            profiles=[{"index": j.index, "size": j.size, "profile": j.profile.to_dict()}
                      for j in self.jobs],
            found=state["found"], exhausted=exhausted,
            nodes_expanded=plan.nodes + state["nodes"],
            prunes_by_reason={k: v for k, v in prunes.items() if v},
            trace=trace, units_total=len(units), units_completed=completed,
            stop_reason=stop, splits=self.splits, wall_time=time.monotonic() - t0,
        )


def _stop_name(status: int) -> str:
    return {kernels.STATUS_NODE_LIMIT: "max_nodes",
            kernels.STATUS_DEADLINE: "max_seconds"}.get(status, "unknown")


def realize_profile(n: int, profile: ClassProfile, limits: SearchLimits | None = None, *,
                    prune: bool = True, unit_orbits: bool = False, workers: int = 1,
                    checkpoint=None, resume: bool = False,
                    stop_after_units: int | None = None) -> SearchReport:
    """All sets (up to symmetry) whose weight enumerator is ``profile`` on every residue."""
    limits = limits or SearchLimits()
    if profile.n != n:
        raise ValueError("profile belongs to a different group")
    bad = profile.violations()
    if bad:
        raise ValueError("profile is not realisable: " + "; ".join(bad))
    config = {"command": "realize", "n": n, "profile": profile.to_dict(), "prune": prune,
              "unit_orbits": unit_orbits, **limits.to_dict()}
    job = _Job(0, profile.size, None, profile)
    run = _Run(n, "realize", [job], [], config, limits, prune,
               symmetry_multipliers(n, unit_orbits), False, workers, checkpoint, resume,
               stop_after_units)
    return run.run()


def search_primitive_pairs(n: int, limits: SearchLimits | None = None, *,
                           theorems: bool = True, prune: bool = True,
                           unit_orbits: bool = False, workers: int = 1, checkpoint=None,
                           resume: bool = False,
                           stop_after_units: int | None = None) -> SearchReport:
    """Every primitive formally dual pair (S, T) of Z/nZ, up to symmetry of each side.

    Size splits |S|*|T| = n are gated and turned into admissible profiles
    for S; each realised S yields a forced profile for T, which is realised
    in turn, and every candidate pair is confirmed by the exact route.
    """
    limits = limits or SearchLimits()
    if n < 1:
        raise ValueError("n must be positive")
    jobs: list[_Job] = []
    splits: list[dict] = []
    for s in divisors(n):
        ps = enumerate_profiles(n, s, primitive_required=True, theorems=theorems)
        first = len(jobs)
        for p in ps.profiles:
            jobs.append(_Job(len(jobs), s, n // s, p))
        splits.append({
            "size_S": s, "size_T": n // s,
            "gate": ps.gate.to_dict() if ps.gate else None,
            "obstruction": ps.obstruction.to_dict() if ps.obstruction else None,
            "profiles": list(range(first, len(jobs))),
            "profile_trace": dict(sorted(ps.trace.items())),
        })
    config = {"command": "search", "n": n, "theorems": theorems, "prune": prune,
              "unit_orbits": unit_orbits, **limits.to_dict()}
    run = _Run(n, "search", jobs, splits, config, limits, prune,
               symmetry_multipliers(n, unit_orbits), True, workers, checkpoint, resume,
               stop_after_units)
    return run.run()


# --------------------------------------------------------------------------
# independent oracle

def brute_force_oracle(n: int, size_S: int, guard: int = 10**7) -> list[tuple[tuple, tuple]]:
    """Every formally dual pair (S, T) with |S| = size_S, by testing all pairs exactly."""
    if size_S < 1 or n % size_S:
        raise ValueError(f"size {size_S} does not divide {n}")
    size_T = n // size_S
    checks = comb(n, size_S) * comb(n, size_T)
    if checks > guard:
        raise OracleGuardError(f"{checks} pair checks exceed the guard of {guard}")
    Ts = [(T, kernels.weight_counts(n, T)) for T in combinations(range(n), size_T)]
    out = []
    for S in combinations(range(n), size_S):
        nu_S = tuple(kernels.weight_counts(n, S))
        for T, nu_T in Ts:
            if exact_identity_failure(n, nu_S, tuple(nu_T), size_S, size_T) is None:
                out.append((S, T))
    return out


def oracle_primitive_pairs(n: int, unit_orbits: bool = False, guard: int = 10**7) -> set:
    """Canonical primitive pairs over every size split, from the brute-force oracle."""
    out = set()
    for s in divisors(n):
        for S, T in brute_force_oracle(n, s, guard):
            SS, TT = Subset.of(n, S), Subset.of(n, T)
            if is_in_proper_coset(SS)[0] or is_in_proper_coset(TT)[0]:
                continue
            out.add((canonical_form(SS, unit_orbits).members,
                     canonical_form(TT, unit_orbits).members))
    return out


def oracle_realizations(n: int, profile: ClassProfile, unit_orbits: bool = False) -> set:
    """Canonical sets realising ``profile``, by enumerating every subset of that size."""
    target = list(profile.expand())
    out = set()
    for S in combinations(range(n), profile.size):
        if kernels.weight_counts(n, S) == target:
            out.add(canonical_form(Subset.of(n, S), unit_orbits).members)
    return out


def found_pairs(report: SearchReport) -> set:
    return {(tuple(S), tuple(T)) for S, T in report.found}


def deterministic_view(payload: dict) -> dict:
    """Payload with run-dependent timing removed, for equality checks."""
    return {k: v for k, v in payload.items() if k != "wall_time"}
