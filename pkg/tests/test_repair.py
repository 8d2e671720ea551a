import itertools
import random

import pytest
from hypothesis import given, strategies as st

from simplexor.codes import (
    LinearCode,
    c1_code,
    c2_code,
    simplex_code,
    simplex_parity_check,
    um_block_code,
)
from simplexor.gf2 import BitMatrix, BitVector
from simplexor.repair import (
    ErasurePattern,
    InvalidBound,
    LocalityUndefined,
    RepairFailure,
    RepairPlan,
    availability_profile,
    code_columns,
    easy_closure_ok,
    easy_repair_plan,
    enumerate_repair_groups,
    find_easy_repairable,
    format_plan,
    is_correctable,
    is_correctable_via_parity,
    locality,
    max_disjoint_groups,
    parallel_repair_plan,
    _index_mask,
    _max_packing,
    _projection_bound,
)

# four erasures in seven nodes: correctable, but past the (n-1)/2 guarantee
HARD_CORRECTABLE = frozenset({0, 1, 3, 5})


def _pattern(code, erased):
    return ErasurePattern.from_erased(code.n, erased)


def _custom_code(rows, family="custom", code_id="custom"):
    g = BitMatrix.from_rows(rows)
    return LinearCode(code_id, family, g.rows, g.cols, g)


# One weight-3 relation only: node 3 is repairable but never by two nodes.
NO_EASY_ROWS = [[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]]


def test_pattern_validation_and_live():
    p = ErasurePattern.from_erased(7, [0, 3])
    assert p.live == (1, 2, 4, 5, 6)
    assert p.erased_sorted() == (0, 3)
    with pytest.raises(Exception):
        ErasurePattern.from_erased(3, [5])


def test_is_correctable_beyond_guaranteed_capability():
    code = simplex_code(3)
    assert is_correctable(code, _pattern(code, HARD_CORRECTABLE))
    assert is_correctable(code, _pattern(code, []))
    assert not is_correctable(code, _pattern(code, range(7)))


@pytest.mark.parametrize(
    "code", [simplex_code(3), c1_code(3), c2_code(3)], ids=lambda c: c.code_id
)
def test_correctability_criteria_agree_exhaustively(code):
    """Full-rank live columns, independent erased parity columns, and
    unique decode are one and the same condition."""
    parity = simplex_parity_check(code.k) if code.family == "simplex" else None
    g = code.generator
    for mask in range(1 << code.n):
        erased = frozenset(j for j in range(code.n) if (mask >> j) & 1)
        pattern = ErasurePattern(code.n, erased)
        via_g = is_correctable(code, pattern)
        via_h = is_correctable_via_parity(code, pattern, parity)
        assert via_g == via_h
        # unique decode: no two distinct messages agree on the live nodes
        live = pattern.live
        seen = set()
        ambiguous = False
        for ubits in range(1 << code.k):
            c = g.mul_vec(BitVector(code.k, ubits))
            key = tuple(c.bit(j) for j in live)
            if key in seen:
                ambiguous = True
                break
            seen.add(key)
        assert via_g == (not ambiguous)


def test_find_easy_repairable_on_hard_pattern():
    code = simplex_code(3)
    step = find_easy_repairable(code, _pattern(code, HARD_CORRECTABLE))
    assert step is not None
    assert (step.target, step.helpers) == (0, (2, 4))


def test_find_easy_repairable_nothing_erased():
    code = simplex_code(3)
    assert find_easy_repairable(code, _pattern(code, [])) is None


def test_find_easy_repairable_prefers_replication():
    code = c2_code(3)
    step = find_easy_repairable(code, _pattern(code, [0]))
    assert step is not None
    assert (step.target, step.helpers) == (0, (1,))


def test_easy_repair_plan_on_hard_pattern():
    code = simplex_code(3)
    plan = easy_repair_plan(code, _pattern(code, HARD_CORRECTABLE))
    assert isinstance(plan, RepairPlan)
    assert plan.mode == "sequential"
    assert plan.r_bound <= 2
    targets = [s.target for s in plan.steps]
    assert sorted(targets) == [0, 1, 3, 5]
    # node 5 has no two live helpers at the start, so it cannot come first
    assert targets.index(5) > targets.index(1)
    _assert_replay_recovers(code, plan, HARD_CORRECTABLE)


def _assert_replay_recovers(code, plan, erased):
    g = code.generator
    rng = random.Random(13)
    for _ in range(10):
        c = list(g.mul_vec(BitVector(code.k, rng.getrandbits(code.k))))
        have = {j: c[j] for j in range(code.n) if j not in erased}
        for step in plan.steps:
            assert step.target not in have
            val = 0
            for h in step.helpers:
                val ^= have[h]
            have[step.target] = val
        assert [have[j] for j in range(code.n)] == c


def test_easy_repair_plan_empty_pattern():
    code = simplex_code(3)
    plan = easy_repair_plan(code, _pattern(code, []))
    assert isinstance(plan, RepairPlan)
    assert plan.steps == ()
    assert plan.r_bound == 0


def test_easy_repair_plan_succeeds_on_every_correctable_pattern():
    code = simplex_code(3)
    for mask in range(1 << 7):
        pattern = ErasurePattern(7, frozenset(j for j in range(7) if (mask >> j) & 1))
        outcome = easy_repair_plan(code, pattern)
        if is_correctable(code, pattern):
            assert isinstance(outcome, RepairPlan)
            assert len(outcome.steps) == len(pattern.erased)
        else:
            assert isinstance(outcome, RepairFailure)
            assert not outcome.theorem_violation


def test_easy_repair_failure_flags_theorem_violation_only_for_easy_families():
    plain = _custom_code(NO_EASY_ROWS)
    outcome = easy_repair_plan(plain, _pattern(plain, [3]))
    assert isinstance(outcome, RepairFailure)
    assert outcome.residual.erased == frozenset({3})
    assert not outcome.theorem_violation

    mislabeled = _custom_code(NO_EASY_ROWS, family="simplex", code_id="bogus")
    outcome = easy_repair_plan(mislabeled, _pattern(mislabeled, [3]))
    assert isinstance(outcome, RepairFailure)
    assert outcome.theorem_violation


@given(st.integers(0, (1 << 9) - 1))
def test_easy_closure_verdict_matches_plan(mask):
    code = c2_code(4)
    erased = [j for j in range(code.n) if (mask >> j) & 1]
    pattern = _pattern(code, erased)
    plan = easy_repair_plan(code, pattern)
    assert easy_closure_ok(code_columns(code), erased) == isinstance(plan, RepairPlan)


def test_parallel_plan_within_capability():
    code = simplex_code(3)
    for e in range(4):
        for erased in itertools.combinations(range(7), e):
            plan = parallel_repair_plan(code, _pattern(code, erased), 2)
            assert isinstance(plan, RepairPlan)
            assert plan.mode == "parallel"
            for step in plan.steps:
                assert not set(step.helpers) & set(erased)


def test_parallel_plan_fails_beyond_capability():
    code = simplex_code(3)
    outcome = parallel_repair_plan(code, _pattern(code, HARD_CORRECTABLE), 2)
    assert isinstance(outcome, RepairFailure)
    assert 5 in outcome.residual.erased


@pytest.mark.parametrize("k", range(2, 6))
def test_parallel_3_repair_for_chain_codes(k):
    code = c2_code(k)
    for erased in itertools.combinations(range(code.n), 2):
        plan = parallel_repair_plan(code, _pattern(code, erased), 3)
        assert isinstance(plan, RepairPlan)


def test_enumerate_groups_simplex3_target0():
    code = simplex_code(3)
    groups = enumerate_repair_groups(code, 0, 2)
    assert [tuple(sorted(g.helpers)) for g in groups] == [(1, 3), (2, 4), (5, 6)]


def test_enumerate_groups_replication():
    code = c2_code(3)
    groups = enumerate_repair_groups(code, 0, 1)
    assert [tuple(sorted(g.helpers)) for g in groups] == [(1,)]


@pytest.mark.parametrize(
    "code", [simplex_code(3), c1_code(4), c2_code(4), um_block_code(2, 1)],
    ids=lambda c: c.code_id,
)
def test_enumerated_groups_xor_to_target_and_are_minimal(code):
    cols = code_columns(code)
    for target in range(0, code.n, 3):
        for group in enumerate_repair_groups(code, target, 3):
            helpers = sorted(group.helpers)
            assert target not in helpers
            acc = 0
            for h in helpers:
                acc ^= cols[h]
            assert acc == cols[target]
            for r in range(1, len(helpers)):
                for sub in itertools.combinations(helpers, r):
                    sub_acc = 0
                    for h in sub:
                        sub_acc ^= cols[h]
                    assert sub_acc != cols[target]


def test_enumerate_groups_bound_validation():
    code = simplex_code(3)
    with pytest.raises(InvalidBound):
        enumerate_repair_groups(code, 0, 0)
    with pytest.raises(InvalidBound):
        enumerate_repair_groups(code, 0, 7)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_max_disjoint_pairs_simplex(k):
    code = simplex_code(k)
    n = code.n
    for target in range(n):
        count, witness = max_disjoint_groups(code, target, 2)
        assert count == (n - 1) // 2
        _assert_packing_valid(code, target, witness)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_max_disjoint_pairs_weight2_code(k):
    code = c1_code(k)
    for target in range(code.n):
        count, witness = max_disjoint_groups(code, target, 2)
        assert count == k - 1
        _assert_packing_valid(code, target, witness)


def _assert_packing_valid(code, target, witness):
    cols = code_columns(code)
    seen = set()
    for group in witness:
        helpers = set(group.helpers)
        assert target not in helpers
        assert not helpers & seen
        seen |= helpers
        acc = 0
        for h in helpers:
            acc ^= cols[h]
        assert acc == cols[target]


def test_max_disjoint_groups_trivial_code():
    code = simplex_code(1)
    assert max_disjoint_groups(code, 0, 2) == (0, [])


def test_max_disjoint_groups_lex_witness():
    code = _custom_code([[1, 1, 1]])
    count, witness = max_disjoint_groups(code, 0, 2)
    assert count == 2
    assert [tuple(sorted(g.helpers)) for g in witness] == [(1,), (2,)]
    assert max_disjoint_groups(code, 0, 2) == (count, witness)


@given(
    st.lists(
        st.sets(st.integers(0, 7), min_size=1, max_size=3).map(lambda s: tuple(sorted(s))),
        min_size=0,
        max_size=9,
        unique=True,
    )
)
def test_max_packing_matches_brute_force(groups):
    best = 0
    witnesses = []
    for r in range(len(groups) + 1):
        for combo in itertools.combinations(sorted(groups), r):
            masks = [_index_mask(g) for g in combo]
            if all(
                not (masks[i] & masks[j])
                for i in range(len(masks))
                for j in range(i + 1, len(masks))
            ):
                if r > best:
                    best = r
                    witnesses = [list(combo)]
                elif r == best:
                    witnesses.append(list(combo))
    got = _max_packing(groups)
    assert len(got) == best
    assert got == min(witnesses)


def test_projection_bound_is_a_valid_upper_bound():
    for code in (simplex_code(3), c2_code(4), um_block_code(2, 2)):
        cols = code_columns(code)
        for target in range(0, code.n, 2):
            bound = _projection_bound(cols, target, code.k)
            count, _ = max_disjoint_groups(code, target, 4)
            if bound is not None:
                assert count <= bound


@pytest.mark.parametrize(
    "code", [simplex_code(4), c1_code(4), c2_code(5), um_block_code(2, 1)],
    ids=lambda c: c.code_id,
)
def test_projection_hint_never_changes_the_packing(code):
    """The search must reach the same maximum with and without the
    row-projection upper bound, else the bound would be cutting below
    the true optimum."""
    from simplexor.repair import _minimal_groups

    cols = code_columns(code)
    for target in range(0, code.n, 3):
        for cap in (2, 3, 4):
            groups = _minimal_groups(cols, target, cap)
            assert _max_packing(groups) == _max_packing(
                groups, _projection_bound(cols, target, code.k)
            )


def test_availability_profile_simplex3():
    code = simplex_code(3)
    profile = availability_profile(code, 2)
    assert profile.code_t(2) == 3
    assert all(counts[1] == 3 for counts in profile.per_node)
    cols = code_columns(code)
    for node in range(code.n):
        for r in (1, 2):
            used = set()
            for helpers in profile.witnesses[node][r - 1]:
                assert len(helpers) <= r
                assert node not in helpers
                assert not set(helpers) & used
                used |= set(helpers)
                acc = 0
                for h in helpers:
                    acc ^= cols[h]
                assert acc == cols[node]


def test_availability_profile_chain():
    profile = availability_profile(c2_code(3), 3)
    assert profile.code_t(3) == 2


def test_availability_interior_um_node():
    code = um_block_code(2, 2)
    profile = availability_profile(code, 2)
    # a first-half node in time block 1 sits at index n_block + j
    assert profile.node_count(6, 2) == 2


def test_locality_of_the_easy_repair_families():
    assert locality(simplex_code(3)) == 2
    assert locality(c1_code(4)) == 2
    assert locality(c2_code(4)) == 2


def test_locality_undefined_for_independent_columns():
    code = _custom_code([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(LocalityUndefined):
        locality(code)


@pytest.mark.parametrize(
    "code",
    [simplex_code(3), c1_code(4), c2_code(4), um_block_code(2, 1)],
    ids=lambda c: c.code_id,
)
def test_plan_replay_recovers_random_codewords(code):
    rng = random.Random(2718)
    for _ in range(200):
        erased = frozenset(j for j in range(code.n) if rng.random() < 0.4)
        pattern = ErasurePattern(code.n, erased)
        plan = easy_repair_plan(code, pattern)
        if isinstance(plan, RepairFailure):
            assert not is_correctable(code, pattern)
            continue
        _assert_replay_recovers(code, plan, erased)


def test_parity_route_agrees_on_stream_code():
    code = um_block_code(2, 1)
    for e in range(5):
        for erased in itertools.combinations(range(code.n), e):
            pattern = _pattern(code, erased)
            assert is_correctable(code, pattern) == is_correctable_via_parity(code, pattern)


def test_format_plan_golden():
    code = simplex_code(3)
    plan = easy_repair_plan(code, _pattern(code, HARD_CORRECTABLE))
    assert format_plan(plan) == (
        "# mode: sequential\n"
        "repair 0 <- 2+4\n"
        "repair 1 <- 4+6\n"
        "repair 3 <- 0+1\n"
        "repair 5 <- 0+6"
    )
    par = parallel_repair_plan(code, _pattern(code, [0]), 2)
    assert format_plan(par) == "# mode: parallel r=2\nrepair 0 <- 1+3"
