#!/usr/bin/env python3
"""Run the full repair-theorem sweep battery and print one line per check.

--quick trims the unit-memory sweeps to the small horizons so the whole
run finishes in a few seconds; the full battery matches the acceptance
suite's coverage.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from simplexor.codes import c1_code, c2_code, simplex_code, um_block_code
from simplexor.metrics import Exhaustive, Sampled, verify_easy_repair_property, verify_parallel_capacity

SEED = 20260808


def report(label, rep):
    verdict = "ok" if rep.verdict else "FAILED"
    print(
        f"{verdict:6} {label}: examined={rep.patterns_examined}"
        f" correctable={rep.correctable} repaired={rep.repaired}"
    )
    return rep.verdict


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()
    w = args.workers
    started = time.perf_counter()
    ok = True

    for k in (2, 3, 4):
        code = simplex_code(k)
        ok &= report(f"easy repair {code.code_id}",
                     verify_easy_repair_property(code, Exhaustive(), workers=w))
    for k in (2, 3, 4, 5):
        code = c1_code(k)
        ok &= report(f"easy repair {code.code_id}",
                     verify_easy_repair_property(code, Exhaustive(), workers=w))
    for k in range(2, 8):
        code = c2_code(k)
        ok &= report(f"easy repair {code.code_id}",
                     verify_easy_repair_property(code, Exhaustive(), workers=w))
    um = um_block_code(2, 1 if args.quick else 2)
    ok &= report(f"easy repair {um.code_id} (<=8 erasures)",
                 verify_easy_repair_property(um, Exhaustive(max_erasures=8), workers=w))
    ok &= report(f"easy repair {um.code_id} (sampled)",
                 verify_easy_repair_property(
                     um, Sampled(seed=SEED, trials=10_000 if args.quick else 100_000),
                     workers=w))

    for k in (3, 4):
        code = simplex_code(k)
        e = (code.n - 1) // 2
        ok &= report(f"parallel r=2 e={e} {code.code_id}",
                     verify_parallel_capacity(code, 2, e, Exhaustive(), workers=w))
    um2 = um_block_code(2, 3)
    for r, e in ((2, 2), (3, 3), (4, 4), (5, 5)):
        ok &= report(f"parallel r={r} e={e} {um2.code_id}",
                     verify_parallel_capacity(um2, r, e, Exhaustive(), workers=w))
    um3 = um_block_code(3, 3)
    for r, e in ((2, 4), (3, 7), (4, 8), (5, 11)):
        trials = 5_000 if args.quick else 100_000
        ok &= report(f"parallel r={r} e={e} {um3.code_id} (sampled)",
                     verify_parallel_capacity(
                         um3, r, e, Sampled(seed=SEED + r, trials=trials), workers=w))

    print(f"total: {time.perf_counter() - started:.1f}s")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
