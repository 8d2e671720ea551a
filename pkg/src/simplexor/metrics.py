"""Brute-force distance oracles, theorem sweeps, tables and simulation.

Every sweep is deterministic: exhaustive enumerations have a fixed order
and sampled runs derive one RNG seed per trial index from the master seed,
so partitioning work across processes cannot change any verdict or count.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .codes import (
    ConvCode,
    InvalidDimension,
    LinearCode,
    c0_repeat_code,
    c1_code,
    c1_repeat_code,
    simplex_code,
    sliding_generator,
    tensor_um_code,
    um2prime_code,
    um_block_code,
)
from .gf2 import TooLarge, min_weight_nonzero_rowspan
from .repair import (
    _parallel_table,
    code_columns,
    easy_closure_for_mask,
    easy_steps,
    max_disjoint_groups,
)

MAX_MESSAGE_DIM = 24
MAX_SWEEP_PATTERNS = 8_000_000

_M64 = (1 << 64) - 1


def _mix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, index: int) -> int:
    """Stable per-trial RNG seed; independent of process or partitioning."""
    return _mix64((master_seed & _M64) ^ _mix64(index))


# ---------------------------------------------------------------------------
# Distances


@dataclass(frozen=True)
class DistanceReport:
    code_id: str
    d: int
    method: str
    codewords_examined: int


@dataclass(frozen=True)
class ColumnDistanceReport:
    base_k: int
    distances: tuple[tuple[int, int], ...]  # (j, d_j)
    d_free_evidence: int


def min_distance(code: LinearCode) -> DistanceReport:
    """Exact minimum distance by exhausting all nonzero messages."""
    if code.k > MAX_MESSAGE_DIM:
        raise TooLarge(f"k={code.k} exceeds the {MAX_MESSAGE_DIM}-message-bit guard")
    d = min_weight_nonzero_rowspan(code.generator, guard=MAX_MESSAGE_DIM)
    return DistanceReport(code.code_id, d, "exhaustive", (1 << code.k) - 1)


def column_distance(c: ConvCode, j: int) -> int:
    """Minimum weight of the first j+1 output blocks over messages with a
    nonzero leading block."""
    if c.k * (j + 1) > 20:
        raise TooLarge(f"window of {c.k * (j + 1)} message bits exceeds guard 20")
    window = (j + 1) * c.n_block
    mask = (1 << window) - 1
    rows = [rb & mask for rb in sliding_generator(c, j).row_bits]
    head, tail = rows[: c.k], rows[c.k :]
    best = window + 1
    for u0 in range(1, 1 << c.k):
        acc = 0
        u = u0
        i = 0
        while u:
            if u & 1:
                acc ^= head[i]
            u >>= 1
            i += 1
        w = acc.bit_count()
        if w < best:
            best = w
        for t in range(1, 1 << len(tail)):
            acc ^= tail[(t & -t).bit_length() - 1]
            w = acc.bit_count()
            if w < best:
                best = w
    return best


def sliding_block_distance(c: ConvCode, s: int) -> int:
    """Exact minimum distance of the unrolled block code with horizon s."""
    if (s + 1) * c.k > 20:
        raise TooLarge(f"{(s + 1) * c.k} message bits exceeds guard 20")
    return min_weight_nonzero_rowspan(sliding_generator(c, s), guard=MAX_MESSAGE_DIM)


def column_distance_report(c: ConvCode, j_max: int = 3) -> ColumnDistanceReport:
    distances = tuple((j, column_distance(c, j)) for j in range(j_max + 1))
    evidence = min(sliding_block_distance(c, s) for s in range(1, 5) if (s + 1) * c.k <= 20)
    return ColumnDistanceReport(c.k, distances, evidence)


# ---------------------------------------------------------------------------
# Theorem sweeps


@dataclass(frozen=True)
class Exhaustive:
    max_erasures: int | None = None


@dataclass(frozen=True)
class Sampled:
    seed: int
    trials: int


@dataclass(frozen=True)
class VerifyReport:
    code_id: str
    checked: str
    verdict: bool
    patterns_examined: int
    correctable: int
    repaired: int
    counterexample: tuple[int, ...] | None


def _merge_counts(parts):
    examined = correctable = repaired = 0
    counterexample = None
    for ex, co, re_, ce in parts:
        examined += ex
        correctable += co
        repaired += re_
        if counterexample is None and ce is not None:
            counterexample = ce
    return examined, correctable, repaired, counterexample


def _full_rank_mask(cols, mask, k) -> bool:
    pivots: dict[int, int] = {}
    count = 0
    for j, v in enumerate(cols):
        if (mask >> j) & 1:
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


def _erp_check_mask(cols, k, mask, n):
    """-> (correctable?, repaired?) for one erasure bitmask."""
    if not _full_rank_mask(cols, mask, k):
        return False, False
    return True, easy_closure_for_mask(cols, mask)


def _erased_tuple(mask: int, n: int) -> tuple[int, ...]:
    return tuple(j for j in range(n) if (mask >> j) & 1)


def _chunk_erp_masks(cols, k, lo, hi):
    n = len(cols)
    examined = correctable = repaired = 0
    counterexample = None
    for mask in range(lo, hi):
        examined += 1
        co, ok = _erp_check_mask(cols, k, mask, n)
        if co:
            correctable += 1
            if ok:
                repaired += 1
            elif counterexample is None:
                counterexample = _erased_tuple(mask, n)
    return examined, correctable, repaired, counterexample


def _chunk_erp_combos(cols, k, e, lo, hi):
    n = len(cols)
    examined = correctable = repaired = 0
    counterexample = None
    if e == 0:
        return (1, 1, 1, None) if lo == 0 else (0, 0, 0, None)
    for first in range(lo, hi):
        for rest in combinations(range(first + 1, n), e - 1):
            mask = 1 << first
            for j in rest:
                mask |= 1 << j
            examined += 1
            co, ok = _erp_check_mask(cols, k, mask, n)
            if co:
                correctable += 1
                if ok:
                    repaired += 1
                elif counterexample is None:
                    counterexample = (first,) + rest
    return examined, correctable, repaired, counterexample


def _chunk_erp_sampled(cols, k, seed, lo, hi):
    n = len(cols)
    examined = correctable = repaired = 0
    counterexample = None
    for i in range(lo, hi):
        rng = random.Random(trial_seed(seed, i))
        mask = rng.getrandbits(n)
        examined += 1
        co, ok = _erp_check_mask(cols, k, mask, n)
        if co:
            correctable += 1
            if ok:
                repaired += 1
            elif counterexample is None:
                counterexample = _erased_tuple(mask, n)
    return examined, correctable, repaired, counterexample


def _parallel_mask_tables(cols, r):
    tables = _parallel_table(cols, r)
    return [([m for m, _ in packing], [m for m, _ in full]) for packing, full in tables]


def _parallel_ok(tabs, erased, emask) -> bool:
    for t in erased:
        packing, full = tabs[t]
        for m in packing:
            if not m & emask:
                break
        else:
            for m in full:
                if not m & emask:
                    break
            else:
                return False
    return True


def _chunk_par_combos(cols, r, e, lo, hi):
    n = len(cols)
    tabs = _parallel_mask_tables(cols, r)
    examined = repaired = 0
    counterexample = None
    if e == 0:
        return (1, 1, 1, None) if lo == 0 else (0, 0, 0, None)
    for first in range(lo, hi):
        for rest in combinations(range(first + 1, n), e - 1):
            erased = (first,) + rest
            emask = 0
            for j in erased:
                emask |= 1 << j
            examined += 1
            if _parallel_ok(tabs, erased, emask):
                repaired += 1
            elif counterexample is None:
                counterexample = erased
    return examined, examined, repaired, counterexample


def _chunk_par_sampled(cols, r, e, seed, lo, hi):
    n = len(cols)
    tabs = _parallel_mask_tables(cols, r)
    examined = repaired = 0
    counterexample = None
    for i in range(lo, hi):
        rng = random.Random(trial_seed(seed, i))
        erased = tuple(sorted(rng.sample(range(n), e)))
        emask = 0
        for j in erased:
            emask |= 1 << j
        examined += 1
        if _parallel_ok(tabs, erased, emask):
            repaired += 1
        elif counterexample is None:
            counterexample = erased
    return examined, examined, repaired, counterexample


_CHUNK_RUNNERS = {
    "erp_masks": _chunk_erp_masks,
    "erp_combos": _chunk_erp_combos,
    "erp_sampled": _chunk_erp_sampled,
    "par_combos": _chunk_par_combos,
    "par_sampled": _chunk_par_sampled,
    "sim": None,  # installed below
}


def _run_chunk(spec):
    return _CHUNK_RUNNERS[spec[0]](*spec[1:])


def _run_chunks(specs, workers: int):
    if workers <= 1 or len(specs) <= 1:
        return [_run_chunk(s) for s in specs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_run_chunk, specs))


def _ranges(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total)) if total else 0
    if not total:
        return [(0, 0)]
    step = -(-total // parts)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def verify_easy_repair_property(
    code: LinearCode, mode: Exhaustive | Sampled, workers: int = 1
) -> VerifyReport:
    """Sweep erasure patterns; every correctable one must easy-repair."""
    cols = code_columns(code)
    n, k = code.n, code.k
    specs: list[tuple] = []
    if isinstance(mode, Exhaustive):
        if mode.max_erasures is None:
            total = 1 << n
            if total > MAX_SWEEP_PATTERNS:
                raise TooLarge(f"2^{n} patterns exceeds the sweep guard")
            for lo, hi in _ranges(total, workers * 4):
                specs.append(("erp_masks", cols, k, lo, hi))
        else:
            cap = min(mode.max_erasures, n)
            total = sum(comb(n, e) for e in range(cap + 1))
            if total > MAX_SWEEP_PATTERNS:
                raise TooLarge(f"{total} patterns exceeds the sweep guard")
            for e in range(cap + 1):
                for lo, hi in _ranges(n - e + 1, workers):
                    specs.append(("erp_combos", cols, k, e, lo, hi))
        checked = (
            "easy-repair exhaustive"
            if mode.max_erasures is None
            else f"easy-repair exhaustive <={mode.max_erasures} erasures"
        )
    else:
        for lo, hi in _ranges(mode.trials, workers * 4):
            specs.append(("erp_sampled", cols, k, mode.seed, lo, hi))
        checked = f"easy-repair sampled seed={mode.seed} trials={mode.trials}"
    examined, correctable, repaired, ce = _merge_counts(_run_chunks(specs, workers))
    return VerifyReport(code.code_id, checked, ce is None, examined, correctable, repaired, ce)


def verify_parallel_capacity(
    code: LinearCode, r: int, e: int, mode: Exhaustive | Sampled, workers: int = 1
) -> VerifyReport:
    """Every pattern with exactly e erasures must admit parallel r-repair."""
    cols = code_columns(code)
    n = code.n
    if not 0 <= e <= n:
        raise ValueError(f"erasure count {e} outside 0..{n}")
    specs: list[tuple] = []
    if isinstance(mode, Exhaustive):
        total = comb(n, e)
        if total > MAX_SWEEP_PATTERNS:
            raise TooLarge(f"C({n},{e}) patterns exceeds the sweep guard")
        for lo, hi in _ranges(n - e + 1 if e else 1, workers):
            specs.append(("par_combos", cols, r, e, lo, hi))
        checked = f"parallel r={r} e={e} exhaustive"
    else:
        for lo, hi in _ranges(mode.trials, workers * 4):
            specs.append(("par_sampled", cols, r, e, mode.seed, lo, hi))
        checked = f"parallel r={r} e={e} sampled seed={mode.seed} trials={mode.trials}"
    examined, _, repaired, ce = _merge_counts(_run_chunks(specs, workers))
    return VerifyReport(code.code_id, checked, ce is None, examined, examined, repaired, ce)


# ---------------------------------------------------------------------------
# Comparison tables


@dataclass(frozen=True)
class ComparisonRow:
    code_id: str
    n: int
    d: int
    ratio: Fraction


_FAMILY_RANK = {"simplex": 0, "c1": 1, "um2p4": 2, "umx": 3, "c0x": 4, "c1x": 5}


def _divisors(k: int) -> list[int]:
    return [x for x in range(1, k + 1) if k % x == 0]


def comparison_table(k: int) -> list[ComparisonRow]:
    """One row per construction of dimension k, sorted by n descending."""
    if k < 2:
        raise InvalidDimension("comparison table needs k >= 2")
    entries: list[tuple[tuple, ComparisonRow]] = []

    def add(code: LinearCode, code_id: str | None = None) -> None:
        rank_ = _FAMILY_RANK[code.family]
        d = min_distance(code).d
        row = ComparisonRow(code_id or code.code_id, code.n, d, Fraction(d, code.n))
        entries.append(((-row.n, -row.d, rank_, code.x or 0), row))

    add(simplex_code(k))
    add(c1_code(k))
    if k == 4:
        add(um2prime_code())
    for x in _divisors(k):
        if x >= 2:
            add(tensor_um_code(k, x))
    for x in _divisors(k):
        if not 2 <= x < k:
            continue
        c0 = c0_repeat_code(k, x)
        if k // x == 2:
            # the weight-2 code of dimension 2 is the 2-dimensional simplex
            # code, so the two repeats coincide; emit one merged row
            add(c0, code_id=f"c0:{k}:{x}=c1:{k}:{x}")
        else:
            add(c0)
            add(c1_repeat_code(k, x))
    entries.sort(key=lambda it: it[0])
    return [row for _, row in entries]


def format_table_tsv(rows: list[ComparisonRow]) -> str:
    lines = ["code\tn\td\td_over_n"]
    for r in rows:
        lines.append(f"{r.code_id}\t{r.n}\t{r.d}\t{r.ratio.numerator}/{r.ratio.denominator}")
    return "\n".join(lines)


def format_table_text(rows: list[ComparisonRow]) -> str:
    width = max(len(r.code_id) for r in rows)
    lines = [f"{'code'.ljust(width)}  {'n':>4} {'d':>4}  d/n"]
    for r in rows:
        approx = f"1/{r.n / r.d:.4g}"
        frac = f"{r.ratio.numerator}/{r.ratio.denominator}"
        lines.append(f"{r.code_id.ljust(width)}  {r.n:>4} {r.d:>4}  {frac} ({approx})")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Disjoint repair-group census for unrolled UM codes


@dataclass(frozen=True)
class UmCensus:
    base_k: int
    s: int
    time_index: int
    half: int  # nodes per half block
    time0_cap1: tuple[int, ...]
    time0_cap2: tuple[int, ...]
    by_cap: tuple[tuple[int, tuple[int, ...], tuple[int, ...]], ...]


def um_node_index(base_k: int, time_index: int, half: int, j: int) -> int:
    """Node index of coordinate j in the given half of a time block."""
    width = (1 << base_k) - 1
    return 2 * width * time_index + half * width + j


def um_census(base_k: int, s: int, time_index: int, caps=(2, 3, 4, 5)) -> UmCensus:
    """Exact per-node disjoint-group counts around one interior time block."""
    code = um_block_code(base_k, s)
    width = (1 << base_k) - 1

    def count(node: int, cap: int) -> int:
        return max_disjoint_groups(code, node, cap)[0]

    time0_cap1 = tuple(count(um_node_index(base_k, 0, h, j), 1) for h in (0, 1) for j in range(width))
    time0_cap2 = tuple(count(um_node_index(base_k, 0, h, j), 2) for h in (0, 1) for j in range(width))
    by_cap = []
    for cap in caps:
        first = tuple(count(um_node_index(base_k, time_index, 0, j), cap) for j in range(width))
        second = tuple(count(um_node_index(base_k, time_index, 1, j), cap) for j in range(width))
        by_cap.append((cap, first, second))
    return UmCensus(base_k, s, time_index, width, time0_cap1, time0_cap2, tuple(by_cap))


# ---------------------------------------------------------------------------
# Monte Carlo repair statistics


@dataclass(frozen=True)
class FixedErasures:
    count: int


@dataclass(frozen=True)
class BernoulliErasures:
    prob: float


@dataclass(frozen=True)
class SimulationReport:
    code_id: str
    trials: int
    seed: int
    erasure_histogram: tuple[tuple[int, int], ...]
    fraction_correctable: float
    fraction_easy_repaired: float
    parallel_fractions: tuple[tuple[int, float], ...]
    mean_xors_per_repaired_node: float


def _chunk_sim(cols, k, model_kind, model_arg, r_values, seed, lo, hi):
    n = len(cols)
    tabs = {r: _parallel_mask_tables(cols, r) for r in r_values}
    hist: dict[int, int] = {}
    correctable = easy_ok = 0
    par_ok = {r: 0 for r in r_values}
    xor_total = nodes_total = 0
    for i in range(lo, hi):
        rng = random.Random(trial_seed(seed, i))
        if model_kind == "fixed":
            erased = tuple(sorted(rng.sample(range(n), model_arg)))
        else:
            erased = tuple(j for j in range(n) if rng.random() < model_arg)
        emask = 0
        for j in erased:
            emask |= 1 << j
        hist[len(erased)] = hist.get(len(erased), 0) + 1
        if _full_rank_mask(cols, emask, k):
            correctable += 1
            steps, remaining = easy_steps(cols, list(erased))
            if not remaining:
                easy_ok += 1
                nodes_total += len(steps)
                xor_total += sum(len(h) - 1 for _, h in steps)
        for r in r_values:
            if _parallel_ok(tabs[r], erased, emask):
                par_ok[r] += 1
    return (hi - lo, tuple(sorted(hist.items())), correctable, easy_ok,
            tuple(par_ok[r] for r in r_values), xor_total, nodes_total)


_CHUNK_RUNNERS["sim"] = _chunk_sim


def monte_carlo_repair(
    code: LinearCode,
    trials: int,
    model: FixedErasures | BernoulliErasures,
    seed: int,
    r_values: tuple[int, ...] = (2,),
    workers: int = 1,
) -> SimulationReport:
    """Seeded repair statistics; identical output for identical arguments."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cols = code_columns(code)
    if isinstance(model, FixedErasures):
        kind, arg = "fixed", model.count
        if not 0 <= model.count <= code.n:
            raise ValueError("erasure count out of range")
    else:
        kind, arg = "bernoulli", model.prob
    specs = [
        ("sim", cols, code.k, kind, arg, r_values, seed, lo, hi)
        for lo, hi in _ranges(trials, workers * 4)
    ]
    parts = _run_chunks(specs, workers)
    hist: dict[int, int] = {}
    total = correctable = easy_ok = xor_total = nodes_total = 0
    par_ok = [0] * len(r_values)
    for cnt, h, co, eo, po, xt, nt in parts:
        total += cnt
        for e, c in h:
            hist[e] = hist.get(e, 0) + c
        correctable += co
        easy_ok += eo
        for i, v in enumerate(po):
            par_ok[i] += v
        xor_total += xt
        nodes_total += nt
    return SimulationReport(
        code_id=code.code_id,
        trials=total,
        seed=seed,
        erasure_histogram=tuple(sorted(hist.items())),
        fraction_correctable=correctable / total,
        fraction_easy_repaired=easy_ok / total,
        parallel_fractions=tuple((r, par_ok[i] / total) for i, r in enumerate(r_values)),
        mean_xors_per_repaired_node=(xor_total / nodes_total) if nodes_total else 0.0,
    )


def format_simulation(report: SimulationReport) -> str:
    lines = [
        f"code\t{report.code_id}",
        f"trials\t{report.trials}",
        f"seed\t{report.seed}",
        "erasures\t" + ",".join(f"{e}:{c}" for e, c in report.erasure_histogram),
        f"fraction_correctable\t{report.fraction_correctable:.6f}",
        f"fraction_easy_repaired\t{report.fraction_easy_repaired:.6f}",
    ]
    for r, frac in report.parallel_fractions:
        lines.append(f"fraction_parallel_r{r}\t{frac:.6f}")
    lines.append(f"mean_xors_per_repaired_node\t{report.mean_xors_per_repaired_node:.6f}")
    return "\n".join(lines)
