"""Pure-Python search kernels; the reference twin of ``_kernels.pyx``.

Both modules expose the same three functions with identical results:

weight_counts(n, members)
    ordered-pair difference counts, indexed by residue.
canonical_members(n, members, multipliers)
    least sorted image of ``members`` under x -> u*x + c.
explore(n, target, size, prefix, budget, prune, split, trace_limit,
        multipliers, deadline)
    depth-first realisation of the residue-level enumerator ``target`` by
    sets containing ``prefix``; see ``formaldual.search`` for the driver.
"""

import time

STATUS_COMPLETE = 0
STATUS_NODE_LIMIT = 1
STATUS_DEADLINE = 2

PRUNE_REASONS = (
    "class_budget",
    "capacity",
    "unreachable_difference",
    "forced_inclusion",
    "canonical_prefix",
    "noncanonical",
    "profile_mismatch",
)
(P_BUDGET, P_CAPACITY, P_UNREACHABLE, P_FORCED, P_PREFIX, P_NONCANON,
 P_MISMATCH) = range(len(PRUNE_REASONS))

BACKEND = "python"


def weight_counts(n, members):
    counts = [0] * n
    for a in members:
        for b in members:
            counts[(a - b) % n] += 1
    return counts


def canonical_members(n, members, multipliers):
    best = None
    for u in multipliers:
        img = [(u * x) % n for x in members]
        for a in img:
            cand = sorted((x - a) % n for x in img)
            if best is None or cand < best:
                best = cand
    return best


class _Abort(Exception):
    pass


class _State:
    __slots__ = ("n", "target", "size", "cnt", "members", "budget", "nodes",
                 "prune", "prunes", "found", "trace", "trace_limit", "mult",
                 "deadline", "status", "first_diff")


def _add(st, c, sign):
    n, cnt = st.n, st.cnt
    for m in st.members:
        cnt[(c - m) % n] += sign
        cnt[(m - c) % n] += sign
    cnt[0] += sign


def _node(st, split):
    if st.nodes >= st.budget:
        st.status = STATUS_NODE_LIMIT
        raise _Abort
    if st.deadline and (st.nodes & 1023) == 0 and time.monotonic() > st.deadline:
        st.status = STATUS_DEADLINE
        raise _Abort
    st.nodes += 1
    n, target, cnt, P = st.n, st.target, st.cnt, st.members
    k = len(P)
    r = st.size - k
    if r == 0:
        if cnt != target:
            st.prunes[P_MISMATCH] += 1
        elif canonical_members(n, P, st.mult) != P:
            st.prunes[P_NONCANON] += 1
        else:
            st.found.append(tuple(P))
        return None
    last = P[-1]
    prune = st.prune
    cands = range(last + 1, n)
    avail = []
    if prune:
        for c in cands:
            inc = {}
            for m in P:
                d1 = (c - m) % n
                d2 = (m - c) % n
                inc[d1] = inc.get(d1, 0) + 1
                inc[d2] = inc.get(d2, 0) + 1
            over = [(d, cnt[d] + v) for d, v in sorted(inc.items()) if cnt[d] + v > target[d]]
            if over:
                st.prunes[P_BUDGET] += 1
                if r == 1 and len(st.trace) < st.trace_limit:
                    st.trace.append((tuple(P) + (c,), tuple(over)))
            else:
                avail.append(c)
        if len(avail) < r:
            st.prunes[P_CAPACITY] += 1
            return None
        is_avail = [False] * n
        for c in avail:
            is_avail[c] = True
        total = [0] * n
        for c in avail:
            for m in P:
                total[(c - m) % n] += 1
                total[(m - c) % n] += 1
        slack = {}
        for y in range(1, n):
            deficit = target[y] - cnt[y]
            if deficit <= 0:
                continue
            if r >= 2 and any(is_avail[(c + y) % n] for c in avail):
                continue
            if total[y] < deficit:
                st.prunes[P_UNREACHABLE] += 1
                return None
            slack[y] = total[y] - deficit
        required = []
        if slack:
            for c in avail:
                own = {}
                for m in P:
                    d1 = (c - m) % n
                    d2 = (m - c) % n
                    own[d1] = own.get(d1, 0) + 1
                    own[d2] = own.get(d2, 0) + 1
                if any(y in slack and v > slack[y] for y, v in own.items()):
                    required.append(c)
        if required:
            if len(required) > r:
                st.prunes[P_FORCED] += 1
                return None
            bound = required[0]
            children = [c for c in avail if c <= bound]
            if len(children) < len(avail):
                st.prunes[P_FORCED] += len(avail) - len(children)
        else:
            children = avail
        if k == 1:
            # the second element of a canonical set is its least positive difference
            fd = st.first_diff
            forced = [fd] if fd is not None and fd in children else []
            if len(forced) < len(children):
                st.prunes[P_PREFIX] += 1
            children = forced
    else:
        children = list(cands)
    if split:
        return children
    for c in children:
        _add(st, c, 1)
        P.append(c)
        try:
            _node(st, False)
        finally:
            P.pop()
            _add(st, c, -1)
    return None


def explore(n, target, size, prefix, budget, prune, split, trace_limit,
            multipliers, deadline):
    if len(prefix) > size or len(prefix) == 0:
        raise ValueError("prefix must be nonempty and no larger than size")
    st = _State()
    st.n = n
    st.target = list(target)
    st.size = size
    st.members = []
    st.cnt = [0] * n
    for c in sorted(prefix):
        _add(st, c, 1)
        st.members.append(c)
    st.budget = budget
    st.nodes = 0
    st.prune = bool(prune)
    st.prunes = [0] * len(PRUNE_REASONS)
    st.found = []
    st.trace = []
    st.trace_limit = trace_limit
    st.mult = list(multipliers)
    st.deadline = deadline
    st.status = STATUS_COMPLETE
    st.first_diff = next((y for y in range(1, n) if st.target[y] > 0), None)
    children = None
    try:
        children = _node(st, split)
    except _Abort:
        children = None
    if split and children is None:
        children = []
    return st.status, st.found, st.nodes, st.prunes, children, st.trace
