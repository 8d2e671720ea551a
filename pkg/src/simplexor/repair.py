"""Erasure repair machinery: correctability, repair plans, availability.

Nodes are generator columns indexed 0..n-1.  A repair group for a node is
a minimal set of other nodes whose columns XOR to its column; "minimal"
means no nonempty proper subset XORs to zero, so groups carry no dead
weight.  Duplicate-valued columns at distinct indices are distinct nodes,
which is what makes replication (a size-1 group) possible.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .codes import EASY_REPAIR_FAMILIES, LinearCode
from .gf2 import BitMatrix, DimensionMismatch, nullspace, rank_of_rows

MAX_GROUP_SIZE = 6
PACKING_MAX_NODES = 96
PROFILE_MAX_NODES = 48


class InvalidBound(ValueError):
    """A size bound is outside the supported range."""


class LocalityUndefined(ValueError):
    """Some node is not a combination of other nodes at all."""


@dataclass(frozen=True)
class ErasurePattern:
    """Partition of node indices into erased and live sets."""

    n: int
    erased: frozenset[int]

    def __post_init__(self) -> None:
        if any(not 0 <= i < self.n for i in self.erased):
            raise DimensionMismatch("erased index out of range")

    @classmethod
    def from_erased(cls, n: int, erased: Iterable[int]) -> ErasurePattern:
        return cls(n, frozenset(erased))

    @property
    def live(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if j not in self.erased)

    def erased_sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.erased))


@dataclass(frozen=True)
class RepairGroup:
    target: int
    helpers: frozenset[int]


@dataclass(frozen=True)
class RepairStep:
    target: int
    helpers: tuple[int, ...]
    order: int


@dataclass(frozen=True)
class RepairPlan:
    steps: tuple[RepairStep, ...]
    mode: str  # "sequential" | "parallel"
    r_bound: int


@dataclass(frozen=True)
class RepairFailure:
    """Repair stalled: the residual pattern could not be progressed.

    ``theorem_violation`` is set when the stalled pattern was correctable
    and the code belongs to a family whose every correctable pattern is
    supposed to be easy-repairable; the test harness treats that as a
    counterexample, not an error.
    """

    residual: ErasurePattern
    steps: tuple[RepairStep, ...] = ()
    theorem_violation: bool = False


@dataclass(frozen=True)
class AvailabilityProfile:
    r_max: int
    per_node: tuple[tuple[int, ...], ...]
    witnesses: tuple[tuple[tuple[tuple[int, ...], ...], ...], ...]
    code_level: tuple[tuple[int, int], ...]

    def node_count(self, node: int, r: int) -> int:
        return self.per_node[node][r - 1]

    def code_t(self, r: int) -> int:
        return self.code_level[r - 1][1]


@lru_cache(maxsize=256)
def _cached_columns(generator: BitMatrix) -> tuple[int, ...]:
    return generator.columns_bits()


def code_columns(code: LinearCode) -> tuple[int, ...]:
    return _cached_columns(code.generator)


def _full_rank_on_live(cols: Sequence[int], erased: frozenset[int], k: int) -> bool:
    pivots: dict[int, int] = {}
    count = 0
    for j, v in enumerate(cols):
        if j in erased:
            continue
        while v:
            h = v.bit_length()
            p = pivots.get(h)
            if p is None:
                pivots[h] = v
                count += 1
                break
            v ^= p
        if count == k:
            return True
    return k == 0


def is_correctable(code: LinearCode, pattern: ErasurePattern) -> bool:
    """True iff the live columns still span GF(2)^k."""
    if pattern.n != code.n:
        raise DimensionMismatch("pattern length does not match code length")
    return _full_rank_on_live(code_columns(code), pattern.erased, code.k)


def is_correctable_via_parity(
    code: LinearCode, pattern: ErasurePattern, parity: BitMatrix | None = None
) -> bool:
    """Cross-check route: erased parity-check columns are independent."""
    if pattern.n != code.n:
        raise DimensionMismatch("pattern length does not match code length")
    h = parity if parity is not None else nullspace(code.generator)
    erased = pattern.erased_sorted()
    sub = h.select_columns(list(erased))
    return rank_of_rows(sub.columns_bits()) == len(erased)


def _scan_easy_helper(
    cols: Sequence[int],
    target: int,
    avail_sorted: Sequence[int],
    avail_by_val: dict[int, list[int]],
) -> tuple[int, ...] | None:
    tcol = cols[target]
    same = avail_by_val.get(tcol)
    if same:
        return (same[0],)
    for j in avail_sorted:
        partners = avail_by_val.get(tcol ^ cols[j])
        if not partners:
            continue
        m = partners[0]
        if m == j:
            if len(partners) < 2:
                continue
            m = partners[1]
        return (j, m) if j < m else (m, j)
    return None


def find_easy_repairable(code: LinearCode, pattern: ErasurePattern) -> RepairStep | None:
    """First erased node (ascending index) repairable from <= 2 live nodes."""
    cols = code_columns(code)
    live = sorted(pattern.live)
    by_val: dict[int, list[int]] = {}
    for j in live:
        by_val.setdefault(cols[j], []).append(j)
    for target in pattern.erased_sorted():
        helpers = _scan_easy_helper(cols, target, live, by_val)
        if helpers is not None:
            return RepairStep(target, helpers, 0)
    return None


def easy_steps(
    cols: Sequence[int], erased: list[int]
) -> tuple[tuple[tuple[int, tuple[int, ...]], ...], tuple[int, ...]]:
    """Low-level greedy sequential easy repair.

    Returns (steps, remaining) where each step is (target, helpers) and
    remaining lists the erased nodes the greedy loop could not progress.
    The scan order is deterministic: erased nodes ascending, helper search
    over available nodes ascending, replication preferred over an XOR pair,
    outer scan restarted after every repair.
    """
    n = len(cols)
    erased_set = set(erased)
    avail_sorted = [j for j in range(n) if j not in erased_set]
    by_val: dict[int, list[int]] = {}
    for j in avail_sorted:
        by_val.setdefault(cols[j], []).append(j)
    remaining = sorted(erased_set)
    steps: list[tuple[int, tuple[int, ...]]] = []
    progress = True
    while remaining and progress:
        progress = False
        for target in remaining:
            helpers = _scan_easy_helper(cols, target, avail_sorted, by_val)
            if helpers is None:
                continue
            steps.append((target, helpers))
            remaining.remove(target)
            bisect.insort(avail_sorted, target)
            bisect.insort(by_val.setdefault(cols[target], []), target)
            progress = True
            break
    return tuple(steps), tuple(remaining)


def easy_repair_plan(code: LinearCode, pattern: ErasurePattern) -> RepairPlan | RepairFailure:
    """Greedy sequential easy repair until done or stalled.

    Already-repaired nodes count as available helpers for later steps.  On
    a stall the failure value carries the residual pattern, and flags a
    theorem violation when the input was correctable and the family
    guarantees easy repair.
    """
    cols = code_columns(code)
    raw_steps, remaining = easy_steps(cols, list(pattern.erased))
    steps = tuple(RepairStep(t, h, i) for i, (t, h) in enumerate(raw_steps))
    if remaining:
        residual = ErasurePattern(pattern.n, frozenset(remaining))
        violation = code.family in EASY_REPAIR_FAMILIES and is_correctable(code, pattern)
        return RepairFailure(residual, steps, violation)
    r_bound = max((len(s.helpers) for s in steps), default=0)
    return RepairPlan(steps, "sequential", r_bound)


def easy_closure_for_mask(cols: Sequence[int], erased_mask: int) -> bool:
    """Verdict-only sequential easy repair; order-free (the closure is unique).

    Tracks only column-value multiplicities: a target is repairable once
    some available value equals it (replication) or two distinct available
    nodes XOR to it, and every repair adds the target's value to the pool.
    """
    avail: dict[int, int] = {}
    pending: list[int] = []
    for j, c in enumerate(cols):
        if (erased_mask >> j) & 1:
            pending.append(c)
        else:
            avail[c] = avail.get(c, 0) + 1
    changed = True
    while pending and changed:
        changed = False
        still: list[int] = []
        for t in pending:
            if avail.get(t):
                avail[t] += 1
                changed = True
                continue
            for v in avail:
                w = t ^ v
                if w == v:
                    if avail[v] >= 2:
                        break
                elif avail.get(w):
                    break
            else:
                still.append(t)
                continue
            avail[t] = avail.get(t, 0) + 1
            changed = True
        pending = still
    return not pending


def easy_closure_ok(cols: Sequence[int], erased: Iterable[int]) -> bool:
    mask = 0
    for j in erased:
        mask |= 1 << j
    return easy_closure_for_mask(cols, mask)


# ---------------------------------------------------------------------------
# Repair group enumeration (meet in the middle over column values)


@lru_cache(maxsize=64)
def _singles_map(cols: tuple[int, ...]) -> dict[int, tuple[int, ...]]:
    out: dict[int, list[int]] = {}
    for j, c in enumerate(cols):
        out.setdefault(c, []).append(j)
    return {v: tuple(lst) for v, lst in out.items()}


@lru_cache(maxsize=16)
def _pairs_map(cols: tuple[int, ...]) -> dict[int, tuple[tuple[int, int], ...]]:
    out: dict[int, list[tuple[int, int]]] = {}
    n = len(cols)
    for a in range(n):
        ca = cols[a]
        for b in range(a + 1, n):
            out.setdefault(ca ^ cols[b], []).append((a, b))
    return {v: tuple(lst) for v, lst in out.items()}


@lru_cache(maxsize=4)
def _triples_map(cols: tuple[int, ...]) -> dict[int, tuple[tuple[int, int, int], ...]]:
    out: dict[int, list[tuple[int, int, int]]] = {}
    for a, b, c in combinations(range(len(cols)), 3):
        out.setdefault(cols[a] ^ cols[b] ^ cols[c], []).append((a, b, c))
    return {v: tuple(lst) for v, lst in out.items()}


def _is_minimal(vals: Sequence[int]) -> bool:
    # No nonempty proper subset may XOR to zero.
    m = len(vals)
    if m == 1:
        return True
    sub = [0] * (1 << m)
    for mask in range(1, (1 << m) - 1):
        low = (mask & -mask).bit_length() - 1
        sub[mask] = sub[mask & (mask - 1)] ^ vals[low]
        if sub[mask] == 0:
            return False
    return True


@lru_cache(maxsize=4096)
def _minimal_groups(
    cols: tuple[int, ...], target: int, max_size: int
) -> tuple[tuple[int, ...], ...]:
    """All minimal repair groups for target, sorted by (size, indices)."""
    n = len(cols)
    tcol = cols[target]
    singles = _singles_map(cols)
    found: list[tuple[int, ...]] = []

    def ok(idx: Iterable[int]) -> bool:
        return target not in idx

    for j in singles.get(tcol, ()):
        if j != target:
            found.append((j,))
    if max_size >= 2:
        for j in range(n):
            if j == target:
                continue
            for m in singles.get(tcol ^ cols[j], ()):
                if m > j and m != target:
                    found.append((j, m))
    if max_size >= 3:
        for a in range(n):
            if a == target:
                continue
            va = tcol ^ cols[a]
            for b in range(a + 1, n):
                if b == target:
                    continue
                for m in singles.get(va ^ cols[b], ()):
                    if m > b and m != target:
                        found.append((a, b, m))
    if max_size >= 4:
        pairs = _pairs_map(cols)
        for a in range(n):
            if a == target:
                continue
            va = tcol ^ cols[a]
            for b in range(a + 1, n):
                if b == target:
                    continue
                for cd in pairs.get(va ^ cols[b], ()):
                    if cd[0] > b and ok(cd):
                        found.append((a, b) + cd)
    if max_size >= 5:
        triples = _triples_map(cols)
        for a in range(n):
            if a == target:
                continue
            va = tcol ^ cols[a]
            for b in range(a + 1, n):
                if b == target:
                    continue
                for cde in triples.get(va ^ cols[b], ()):
                    if cde[0] > b and ok(cde):
                        found.append((a, b) + cde)
    if max_size >= 6:
        triples = _triples_map(cols)
        for abc in combinations((j for j in range(n) if j != target), 3):
            v = tcol ^ cols[abc[0]] ^ cols[abc[1]] ^ cols[abc[2]]
            for cde in triples.get(v, ()):
                if cde[0] > abc[2] and ok(cde):
                    found.append(abc + cde)
    minimal = [g for g in found if _is_minimal([cols[i] for i in g])]
    minimal.sort(key=lambda g: (len(g), g))
    return tuple(minimal)


def enumerate_repair_groups(code: LinearCode, target: int, max_size: int) -> list[RepairGroup]:
    """All minimal repair groups with at most max_size helpers."""
    if not 1 <= max_size <= MAX_GROUP_SIZE:
        raise InvalidBound(f"max_size {max_size} outside 1..{MAX_GROUP_SIZE}")
    if not 0 <= target < code.n:
        raise DimensionMismatch("target index out of range")
    groups = _minimal_groups(code_columns(code), target, max_size)
    return [RepairGroup(target, frozenset(g)) for g in groups]


# ---------------------------------------------------------------------------
# Exact maximum disjoint packing (branch and bound, lex-first witness)


def _greedy_pack_count(masks: Sequence[int]) -> int:
    best = 0
    for order in (sorted(masks, key=lambda m: (m.bit_count(), m)), masks):
        used = 0
        count = 0
        for m in order:
            if not m & used:
                used |= m
                count += 1
        best = max(best, count)
    return best


def _greedy_cover_bits(masks: Sequence[int]) -> list[int]:
    """Elements of a greedy hitting set of the masks, as single-bit ints."""
    remaining = list(masks)
    bits: list[int] = []
    while remaining:
        freq: dict[int, int] = {}
        for m in remaining:
            while m:
                b = m & -m
                freq[b] = freq.get(b, 0) + 1
                m ^= b
        best_bit = max(sorted(freq), key=lambda b: freq[b])
        bits.append(best_bit)
        remaining = [m for m in remaining if not m & best_bit]
    return bits


class _PackingSolver:
    """Exact max disjoint packing as max clique on the compatibility graph.

    Vertices are groups, edges join disjoint ones.  Branch and bound with
    two complementary bounds: the greedy-coloring bound (at most one
    vertex per independent class) and a hitting-set bound (every packed
    group spends one element of a fixed cover).  Vertices are relabeled by
    compatibility degree so the coloring packs classes tightly; the public
    indices stay in lex order of the helper tuples.
    """

    def __init__(self, masks: Sequence[int]):
        n = len(masks)
        lex_adj = [0] * n
        for i in range(n):
            mi = masks[i]
            row = lex_adj[i]
            for j in range(i + 1, n):
                if not mi & masks[j]:
                    row |= 1 << j
                    lex_adj[j] |= 1 << i
            lex_adj[i] = row
        perm = sorted(range(n), key=lambda v: (lex_adj[v].bit_count(), v))
        self.pos = [0] * n
        for s, v in enumerate(perm):
            self.pos[v] = s
        self.adj = [0] * n
        for i in range(n):
            row = 0
            m = lex_adj[i]
            while m:
                b = m & -m
                row |= 1 << self.pos[b.bit_length() - 1]
                m ^= b
            self.adj[self.pos[i]] = row
        self.full = (1 << n) - 1 if n else 0
        # vertex sets through each cover element, for the hitting-set bound
        self.cover_verts = []
        for bit in _greedy_cover_bits(masks):
            verts = 0
            for i in range(n):
                if masks[i] & bit:
                    verts |= 1 << self.pos[i]
            self.cover_verts.append(verts)

    def max_clique(self, start: int, best_start: int, stop_at: int | None) -> int:
        adj = self.adj
        cover_verts = self.cover_verts
        best = best_start
        done = False

        def expand(p: int, size: int) -> None:
            nonlocal best, done
            hits = 0
            tightest = None
            tight_count = 0
            for verts in cover_verts:
                sub = verts & p
                if sub:
                    hits += 1
                    c = sub.bit_count()
                    if tightest is None or c < tight_count:
                        tightest, tight_count = sub, c
            if size + hits <= best:
                return
            if hits - (best - size) <= 1 and tightest is not None:
                # Nearly every cover element must host a packed group, so
                # branch on the element with the fewest candidate groups;
                # its skip branch loses a cover hit and prunes itself.
                sub = tightest
                while sub:
                    b = sub & -sub
                    sub ^= b
                    v = b.bit_length() - 1
                    p2 = p & adj[v]
                    if p2:
                        expand(p2, size + 1)
                        if done:
                            return
                    elif size + 1 > best:
                        best = size + 1
                        if stop_at is not None and best >= stop_at:
                            done = True
                            return
                skip = p & ~tightest
                if skip:
                    expand(skip, size)
                return
            order: list[int] = []
            colors: list[int] = []
            uncolored = p
            color = 0
            while uncolored:
                color += 1
                q = uncolored
                while q:
                    b = q & -q
                    v = b.bit_length() - 1
                    q &= ~adj[v]
                    q ^= b
                    uncolored ^= b
                    order.append(v)
                    colors.append(color)
            for i in range(len(order) - 1, -1, -1):
                if size + colors[i] <= best:
                    return
                v = order[i]
                p2 = p & adj[v]
                if p2:
                    expand(p2, size + 1)
                    if done:
                        return
                elif size + 1 > best:
                    best = size + 1
                    if stop_at is not None and best >= stop_at:
                        done = True
                        return
                p &= ~(1 << v)

        if start:
            expand(start, 0)
        return best


def _projection_bound(cols: Sequence[int], target: int, n_rows: int) -> int | None:
    """Upper bound on disjoint repair groups from row-interval projections.

    For a row interval where the target column is nonzero, every group
    must contain either one node whose projection equals the target's, or
    at least two nodes with nonzero projection (their XOR there must hit a
    nonzero value).  Weighting those node classes 1 and 1/2 is a valid
    fractional cover, so the packing is at most n1 + n_other/2; minimized
    over all intervals.
    """
    tcol = cols[target]
    if tcol == 0:
        return None
    best: int | None = None
    for a in range(n_rows):
        for b in range(a + 1, n_rows + 1):
            window = ((1 << b) - 1) >> a << a
            tproj = tcol & window
            if not tproj:
                continue
            exact = 0
            other = 0
            for j, c in enumerate(cols):
                if j == target:
                    continue
                cp = c & window
                if cp == tproj:
                    exact += 1
                elif cp:
                    other += 1
            bound = exact + other // 2
            if best is None or bound < best:
                best = bound
    return best


def _greedy_most_compatible(solver: _PackingSolver) -> int:
    """Greedy packing that always takes the least-conflicting candidate."""
    p = solver.full
    count = 0
    while p:
        best_v = -1
        best_compat = -1
        q = p
        while q:
            b = q & -q
            q ^= b
            v = b.bit_length() - 1
            c = (p & solver.adj[v]).bit_count()
            if c > best_compat:
                best_compat = c
                best_v = v
        count += 1
        p &= solver.adj[best_v]
    return count


def _packing_size(solver: _PackingSolver, lower: int, upper_hint: int | None) -> int:
    """Exact packing number via descending feasibility tests.

    Starting from the best known upper bound keeps the incumbent maximal
    during each test, so all bounds prune as hard as they can.
    """
    lb = max(lower, _greedy_most_compatible(solver))
    ub = len(solver.cover_verts)
    if upper_hint is not None and upper_hint < ub:
        ub = upper_hint
    while ub > lb:
        if solver.max_clique(solver.full, ub - 1, ub) >= ub:
            return ub
        ub -= 1
    return lb


def _max_packing(
    groups: Sequence[tuple[int, ...]], upper_hint: int | None = None
) -> list[tuple[int, ...]]:
    """Largest pairwise-disjoint subcollection; lex-least witness on ties."""
    if not groups:
        return []
    ordered = sorted(groups)
    masks = [_index_mask(g) for g in ordered]
    solver = _PackingSolver(masks)
    size = _packing_size(solver, _greedy_pack_count(masks), upper_hint)
    # Rebuild the witness front to back: take the lex-least group that
    # still allows a packing of the remaining size.
    chosen: list[int] = []
    p = solver.full
    need = size
    while need:
        found = False
        for v in range(len(ordered)):
            s = solver.pos[v]
            if not (p >> s) & 1:
                continue
            if need == 1:
                chosen.append(v)
                need = 0
                found = True
                break
            p2 = p & solver.adj[s]
            if solver.max_clique(p2, need - 2, need - 1) >= need - 1:
                chosen.append(v)
                p = p2
                need -= 1
                found = True
                break
        if not found:
            raise RuntimeError("packing witness search disagrees with the exact count")
    return [ordered[v] for v in chosen]


def _index_mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def max_disjoint_groups(
    code: LinearCode, target: int, max_size: int
) -> tuple[int, list[RepairGroup]]:
    """Exact maximum number of pairwise-disjoint repair groups, with witness."""
    if code.n > PACKING_MAX_NODES:
        raise InvalidBound(f"code length {code.n} exceeds packing guard {PACKING_MAX_NODES}")
    cols = code_columns(code)
    groups = _minimal_groups(cols, target, _checked_size(max_size))
    witness = _max_packing(groups, _projection_bound(cols, target, code.k))
    return len(witness), [RepairGroup(target, frozenset(g)) for g in witness]


def _checked_size(max_size: int) -> int:
    if not 1 <= max_size <= MAX_GROUP_SIZE:
        raise InvalidBound(f"max_size {max_size} outside 1..{MAX_GROUP_SIZE}")
    return max_size


def availability_profile(code: LinearCode, r_max: int) -> AvailabilityProfile:
    """Per-node disjoint-group counts for each r <= r_max, plus code-level t."""
    if code.n > PROFILE_MAX_NODES:
        raise InvalidBound(f"code length {code.n} exceeds profile guard {PROFILE_MAX_NODES}")
    _checked_size(r_max)
    per_node = []
    witnesses = []
    for node in range(code.n):
        counts = []
        node_wits = []
        for r in range(1, r_max + 1):
            count, wit = max_disjoint_groups(code, node, r)
            counts.append(count)
            node_wits.append(tuple(tuple(sorted(g.helpers)) for g in wit))
        per_node.append(tuple(counts))
        witnesses.append(tuple(node_wits))
    code_level = tuple(
        (r, min(per_node[node][r - 1] for node in range(code.n))) for r in range(1, r_max + 1)
    )
    return AvailabilityProfile(r_max, tuple(per_node), tuple(witnesses), code_level)


def locality(code: LinearCode) -> int:
    """Max over nodes of the smallest repair-group size."""
    if code.n > PROFILE_MAX_NODES:
        raise InvalidBound(f"code length {code.n} exceeds locality guard {PROFILE_MAX_NODES}")
    cols = code_columns(code)
    worst = 0
    for node in range(code.n):
        gamma = None
        for cap in (2, MAX_GROUP_SIZE):
            groups = _minimal_groups(cols, node, cap)
            if groups:
                gamma = len(groups[0])
                break
        if gamma is None:
            others = [cols[j] for j in range(code.n) if j != node]
            if rank_of_rows(others) == rank_of_rows(others + [cols[node]]):
                raise InvalidBound(f"node {node}: no repair group within size {MAX_GROUP_SIZE}")
            raise LocalityUndefined(f"node {node} is independent of all other nodes")
        worst = max(worst, gamma)
    return worst


# ---------------------------------------------------------------------------
# Parallel repair


@lru_cache(maxsize=64)
def _parallel_table(
    cols: tuple[int, ...], r: int
) -> tuple[tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]], ...]:
    """Per target: (greedy disjoint packing, full group list) as (mask, pos) pairs.

    ``pos`` indexes into the sorted minimal-group list so helper tuples can
    be recovered; the greedy packing is scanned first because at most one
    erasure can hit each of its pairwise-disjoint groups.
    """
    out = []
    for target in range(len(cols)):
        groups = _minimal_groups(cols, target, r)
        full = tuple((_index_mask(g), i) for i, g in enumerate(groups))
        packing = []
        used = 0
        for mask, i in full:
            if not mask & used:
                packing.append((mask, i))
                used |= mask
        out.append((tuple(packing), full))
    return tuple(out)


def parallel_group_for(
    cols: tuple[int, ...], target: int, erased_mask: int, r: int
) -> tuple[int, ...] | None:
    """First all-live minimal group of size <= r for target, if any."""
    packing, full = _parallel_table(cols, r)[target]
    for mask, i in packing:
        if not mask & erased_mask:
            return _minimal_groups(cols, target, r)[i]
    for mask, i in full:
        if not mask & erased_mask:
            return _minimal_groups(cols, target, r)[i]
    return None


def parallel_repair_plan(
    code: LinearCode, pattern: ErasurePattern, r: int
) -> RepairPlan | RepairFailure:
    """One all-live repair group of size <= r per erased node, independently."""
    if r < 1:
        raise InvalidBound("r must be >= 1")
    _checked_size(r)
    cols = code_columns(code)
    erased_mask = _index_mask(pattern.erased)
    steps: list[RepairStep] = []
    unrepaired: list[int] = []
    for target in pattern.erased_sorted():
        group = parallel_group_for(cols, target, erased_mask, r)
        if group is None:
            unrepaired.append(target)
        else:
            steps.append(RepairStep(target, group, len(steps)))
    if unrepaired:
        return RepairFailure(ErasurePattern(pattern.n, frozenset(unrepaired)), tuple(steps))
    return RepairPlan(tuple(steps), "parallel", r)


# ---------------------------------------------------------------------------
# Plan serialization


def format_plan(plan: RepairPlan) -> str:
    """One header comment, then one `repair <t> <- <h1>+<h2>` line per step."""
    if plan.mode == "parallel":
        lines = [f"# mode: parallel r={plan.r_bound}"]
    else:
        lines = ["# mode: sequential"]
    for step in plan.steps:
        lines.append(f"repair {step.target} <- {'+'.join(str(h) for h in step.helpers)}")
    return "\n".join(lines)
