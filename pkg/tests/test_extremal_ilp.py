import dataclasses
from fractions import Fraction
from itertools import product

import pytest

from critval.core_games import (
    BooleanGame, desirability_classes, popcount, enumerate_simple_games, is_proper, is_strong, shift_minimal_winning_vectors,
)
from critval.exact_lp import LE, make_model, solve_lp
from critval.extremal_ilp import (
    PROVED, Budget, IlpModel, build_max_mu_model, lower_covers, max_critical_threshold, solve_bnb,
)
from critval.threshold import mu_boolean, mu_simple

F = Fraction
COMPUTED = {}


def run(cls, n, **kw):
    key = (cls, n, tuple(sorted(kw.items())))
    if key not in COMPUTED:
        COMPUTED[key] = max_critical_threshold(cls, n, **kw)
    return COMPUTED[key]


def test_model_shape():
    m = build_max_mu_model("simple", 3)
    size = 8
    assert len(m.binaries) == size
    for j in m.binaries:
        assert 0 <= m.lp.lower[j] <= m.lp.upper[j] <= 1
    assert m.lp.lower[m.var_index["x_7"]] == 1        # grand coalition wins
    assert m.lp.upper[m.var_index["x_0"]] == 0        # empty coalition loses
    assert m.lp.upper[m.var_index["x_1"]] == 0        # singleton reduction
    assert all(m.lp.objective[m.var_index[f"u_{s}"]] == 1 for s in range(size))
    r = build_max_mu_model("complete", 4, r=1)
    assert len(r.binaries) == 32


def test_model_flag_errors():
    with pytest.raises(ValueError):
        build_max_mu_model("simple", 4, r=1)
    with pytest.raises(ValueError):
        build_max_mu_model("simple", 17)
    with pytest.raises(ValueError):
        max_critical_threshold("simple", 9)


def test_lower_covers():
    # voter 1 is the strongest; {2} -> {3} and {3} -> {} are the covers
    assert sorted(lower_covers(0b010, 3)) == [0b100]
    assert lower_covers(0b100, 3) == [0]
    assert sorted(lower_covers(0b011, 3)) == [0b101]


@pytest.mark.parametrize("n", [4, 5, 6, pytest.param(7, marks=pytest.mark.slow)])
def test_root_relaxation(n):
    sol = solve_lp(build_max_mu_model("simple", n).lp)
    assert sol.objective == F(n - 1, 2)


def test_generic_branch_and_bound_on_knapsack():
    c, rows = [5, 4, 3], [([2, 3, 1], LE, 5), ([4, 1, 2], LE, 11), ([3, 4, 2], LE, 8)]
    lp = make_model("max", c, rows, upper=[1, 1, 1])
    res = solve_bnb(IlpModel(lp, (0, 1, 2), {}))
    best = max(sum(ci * xi for ci, xi in zip(c, x)) for x in product((0, 1), repeat=3)
               if all(sum(a * xi for a, xi in zip(r[0], x)) <= r[2] for r in rows))
    assert res.status == PROVED and res.optimum == best


def _largest_raw_optimum(cls, n):
    # the program maximises z* itself; mu = max(z*, 1) is applied afterwards
    if cls == "boolean":
        games = (BooleanGame.from_bits(n, code << 1) for code in range(1 << ((1 << n) - 1)))
        return max(mu_boolean(g).raw_optimum for g in games)
    # the builder fixes singletons losing for simple games
    return max(mu_simple(g).raw_optimum for g in enumerate_simple_games(n)
               if all(popcount(s) > 1 for s in g.minimal_winning))


@pytest.mark.parametrize("cls, n", [("simple", 3), ("boolean", 2)])
def test_generic_branch_and_bound_on_threshold_model(cls, n):
    model = dataclasses.replace(build_max_mu_model(cls, n), meta=None)
    res = solve_bnb(model)
    assert res.status == PROVED and res.optimum == _largest_raw_optimum(cls, n)


def test_solve_bnb_dispatches_builder_models():
    res = solve_bnb(build_max_mu_model("simple", 5))
    assert res.optimum == F(6, 5) and res.status == PROVED


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_matches_brute_force_maximum(n):
    brute = max(mu_simple(g).mu for g in enumerate_simple_games(n))
    res = run("simple", n)
    assert res.proved and res.optimum == brute
    assert mu_simple(res.witness).mu == res.optimum


@pytest.mark.parametrize("n, value", [(6, F(3, 2)), (7, F(12, 7))])
def test_simple_values(n, value):
    res = run("simple", n)
    assert res.proved and res.optimum == value


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_boolean_values(n):
    res = run("boolean", n)
    assert res.proved and res.optimum == n
    assert mu_boolean(res.witness).mu == n


@pytest.mark.parametrize("n, value", [(5, 1), (6, 1), (7, F(8, 7)), (8, F(26, 21))])
def test_complete_values(n, value):
    res = run("complete", n)
    assert res.proved and res.optimum == value
    ok, _ = desirability_classes(res.witness)
    assert ok and res.form == shift_minimal_winning_vectors(res.witness)


@pytest.mark.parametrize("cls, kw, value", [
    ("simple", dict(n=6, strong=True), F(3, 2)),
    ("simple", dict(n=6, proper=True), F(4, 3)),
    ("simple", dict(n=6, proper=True, strong=True), F(1)),
    ("simple", dict(n=7, proper=True), F(7, 5)),
    ("simple", dict(n=7, strong=True), F(5, 3)),
    ("simple", dict(n=7, proper=True, strong=True), F(4, 3)),
    ("complete", dict(n=7, proper=True), F(14, 13)),
    ("complete", dict(n=7, strong=True), F(10, 9)),
    ("complete", dict(n=7, proper=True, strong=True), F(1)),
    ("complete", dict(n=8, proper=True), F(38, 33)),
    ("complete", dict(n=9, proper=True, strong=True), F(13, 12)),
])
def test_restricted_classes(cls, kw, value):
    res = run(cls, **kw)
    assert res.proved and res.optimum == value
    if kw.get("proper"):
        assert is_proper(res.witness)
    if kw.get("strong"):
        assert is_strong(res.witness)


@pytest.mark.parametrize("n, value", [(7, F(10, 9)), (8, F(6, 5)), (9, F(14, 11)), (10, F(4, 3))])
def test_single_shift_vector(n, value):
    res = run("complete", n, r=1)
    assert res.proved and res.optimum == value
    assert res.form.r == 1


def test_budget_exhaustion_reports_bounds():
    res = max_critical_threshold("complete", 9, budget=Budget(nodes=20))
    assert res.status != PROVED
    assert res.lower <= F(4, 3) <= res.upper
    assert mu_simple(res.witness).mu == res.lower


def test_monotone_in_n_and_ordered_across_classes():
    simple = [run("simple", n).optimum for n in range(1, 8)]
    complete = [run("complete", n).optimum for n in range(1, 9)]
    boolean = [run("boolean", n).optimum for n in range(1, 5)]
    for seq in (simple, complete, boolean):
        assert all(a <= b for a, b in zip(seq, seq[1:]))
    for n in range(1, 8):
        assert complete[n - 1] <= simple[n - 1]
    for n in range(1, 5):
        assert simple[n - 1] <= boolean[n - 1]


@pytest.mark.parametrize("n", [5, 6])
def test_flag_ordering(n):
    full = run("simple", n).optimum
    p = run("simple", n, proper=True).optimum
    s = run("simple", n, strong=True).optimum
    ps = run("simple", n, proper=True, strong=True).optimum
    assert ps <= p <= full and ps <= s <= full
