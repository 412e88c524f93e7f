"""Critical threshold values, dual certificates and the cost of stability.

Every threshold computation solves the certificate LP

    max sum u_S   s.t.  (sum_S u_S a(S) - sum_T v_T a(T))_i  <= 0  (or = 0)
                        sum_T v_T <= 1,  u, v >= 0

over winning coalitions S and losing coalitions T.  Its row duals are the
weights w_i and the threshold alpha of the primal ``min alpha`` program, so one
solve yields both a weight certificate and a lower-bound certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .core_games import (
    BooleanGame,
    CompleteGameForm,
    SimpleGame,
    WeightedRepresentation,
    expand_complete_form,
    iter_bits,
    lattice,
    maximal_losing,
    popcount,
    shift_maximal_losing_vectors,
    validate_complete_form,
    vector_wins,
    winning,
)
from .exact_lp import EQ, GE, LE, OPTIMAL, LpModel, make_model, solve_lp

NONNEGATIVE, SIGNED, ORDERED = "nonnegative", "signed", "ordered"
WEIGHTED = "weighted"


@dataclass(frozen=True)
class DualCertificate:
    """Multipliers proving ``mu >= bound``.

    Keys are coalition masks, or class-count vectors when ``mode`` is
    ``ordered`` (weights constrained to be non-increasing across classes)."""

    u: dict
    v: dict
    bound: Fraction
    mode: str = NONNEGATIVE
    class_sizes: Optional[tuple] = None


@dataclass(frozen=True)
class ThresholdResult:
    mu: Fraction
    raw_optimum: Fraction
    weights: tuple
    dual_certificate: DualCertificate
    class_weights: Optional[tuple] = None


@dataclass(frozen=True)
class StabilityResult:
    delta: Fraction
    payments: tuple


# ---------------------------------------------------------------------------
# the certificate LP


def _rows_for(key, mode: str, n: int) -> list:
    """Coefficient vector of a coalition (or class vector) in the voter rows."""
    if mode == ORDERED:
        out, c = [], 0
        for x in key:
            c += x
            out.append(c)
        return out
    return [key >> i & 1 for i in range(n)]


def certificate_model(wins: Sequence, loses: Sequence, mode: str, n: int) -> LpModel:
    """LP over u (one per entry of ``wins``) then v (one per entry of ``loses``)."""
    width = len(wins) + len(loses)
    objective = [1] * len(wins) + [0] * len(loses)
    cols = [_rows_for(s, mode, n) for s in wins] + [[-x for x in _rows_for(t, mode, n)] for t in loses]
    rel = EQ if mode == SIGNED else LE
    rows = []
    for i in range(n):
        rows.append(({j: c[i] for j, c in enumerate(cols) if c[i]}, rel, 0, f"voter{i + 1}"))
    rows.append(({len(wins) + j: 1 for j in range(len(loses))}, LE, 1, "budget"))
    return make_model("max", objective, rows, lower=[0] * width)


def _solve_certificate(wins, loses, mode, n, class_sizes=None):
    model = certificate_model(wins, loses, mode, n)
    sol = solve_lp(model)
    if sol.status != OPTIMAL:
        raise RuntimeError(f"certificate LP ended {sol.status}")
    u = {s: sol.x[j] for j, s in enumerate(wins) if sol.x[j]}
    v = {t: sol.x[len(wins) + j] for j, t in enumerate(loses) if sol.x[len(wins) + j]}
    cert = DualCertificate(u, v, sol.objective, mode, class_sizes)
    return sol, cert


def _check_weights(weights, wins, loses, alpha, n, mode):
    for s in wins:
        if sum((weights[i] for i in range(n) if s >> i & 1), Fraction(0)) < 1:
            raise AssertionError("weight certificate violates a winning row")
    for t in loses:
        if sum((weights[i] for i in range(n) if t >> i & 1), Fraction(0)) > alpha:
            raise AssertionError("weight certificate violates a losing row")
    if mode != SIGNED and any(w < 0 for w in weights):
        raise AssertionError("negative weight in a non-negative certificate")


def _result_from_coalitions(n, wins, loses, mode) -> ThresholdResult:
    sol, cert = _solve_certificate(wins, loses, mode, n)
    weights = tuple(sol.duals[:n])
    z = sol.objective
    mu = max(z, Fraction(1))
    _check_weights(weights, wins, loses, mu, n, mode)
    return ThresholdResult(mu, z, weights, cert)


def mu_boolean(game: BooleanGame, nonnegative: bool = False) -> ThresholdResult:
    """Threshold over every coalition; weights are signed unless ``nonnegative``."""
    n = game.n
    wins = sorted(game.winning)
    loses = [s for s in range(1 << n) if s not in game.winning]
    return _result_from_coalitions(n, wins, loses, NONNEGATIVE if nonnegative else SIGNED)


def mu_simple(game: Union[SimpleGame, WeightedRepresentation]) -> ThresholdResult:
    if isinstance(game, WeightedRepresentation):
        game = game.game()
    return _result_from_coalitions(game.n, list(game.minimal_winning), list(maximal_losing(game)), NONNEGATIVE)


def mu_complete(form: CompleteGameForm) -> ThresholdResult:
    """Threshold of a complete game from its class-level description.

    Class weights are forced non-increasing; the LP works with the
    differences of consecutive class weights, which turns the ordering rows
    into prefix sums of the count vectors."""
    ok, report = validate_complete_form(form)
    if not ok:
        raise ValueError(f"invalid complete game form: {report}")
    wins = list(form.shift_matrix)
    loses = list(shift_maximal_losing_vectors(form))
    t = form.t
    sol, cert = _solve_certificate(wins, loses, ORDERED, t, form.class_sizes)
    diffs = sol.duals[:t]
    class_w = []
    acc = Fraction(0)
    for d in reversed(diffs):
        acc += d
        class_w.append(acc)
    class_w = tuple(reversed(class_w))
    z = sol.objective
    mu = max(z, Fraction(1))
    for a in wins:
        if sum(x * w for x, w in zip(a, class_w)) < 1:
            raise AssertionError("class weights violate a winning vector")
    for b in loses:
        if sum(x * w for x, w in zip(b, class_w)) > mu:
            raise AssertionError("class weights violate a losing vector")
    weights = tuple(w for w, size in zip(class_w, form.class_sizes) for _ in range(size))
    return ThresholdResult(mu, z, weights, cert, class_w)


def mu_of(game) -> ThresholdResult:
    """Dispatch on the game type."""
    if isinstance(game, CompleteGameForm):
        return mu_complete(game)
    if isinstance(game, BooleanGame):
        return mu_boolean(game)
    return mu_simple(game)


def primal_model(game) -> LpModel:
    """The weight program ``min alpha`` in natural form (variables w_1..w_n, alpha)."""
    if isinstance(game, WeightedRepresentation):
        game = game.game()
    if isinstance(game, CompleteGameForm):
        t = game.t
        names = [f"w{j + 1}" for j in range(t)] + ["alpha"]
        rows = [({j: x for j, x in enumerate(a) if x}, GE, 1, f"win{k + 1}") for k, a in enumerate(game.shift_matrix)]
        for k, b in enumerate(shift_maximal_losing_vectors(game)):
            d = {j: -x for j, x in enumerate(b) if x}
            d[t] = 1
            rows.append((d, GE, 0, f"lose{k + 1}"))
        for j in range(t - 1):
            rows.append(({j: 1, j + 1: -1}, GE, 0, f"order{j + 1}"))
        return make_model("min", [0] * t + [1], rows, lower=[0] * t + [None], names=names)
    n = game.n
    if isinstance(game, BooleanGame):
        wins = sorted(game.winning)
        loses = [s for s in range(1 << n) if s not in game.winning]
        lower = [None] * n + [None]
    else:
        wins, loses = list(game.minimal_winning), list(maximal_losing(game))
        lower = [0] * n + [None]
    names = [f"w{i + 1}" for i in range(n)] + ["alpha"]
    rows = [({i: 1 for i in iter_bits(s)}, GE, 1, f"win{k + 1}") for k, s in enumerate(wins)]
    for k, t in enumerate(loses):
        d = {i: -1 for i in iter_bits(t)}
        d[n] = 1
        rows.append((d, GE, 0, f"lose{k + 1}"))
    return make_model("min", [0] * n + [1], rows, lower=lower, names=names)


# ---------------------------------------------------------------------------
# certificates


def _mode_for(game, nonnegative: Optional[bool]) -> str:
    if isinstance(game, CompleteGameForm):
        return ORDERED
    if nonnegative is None:
        nonnegative = not isinstance(game, BooleanGame)
    return NONNEGATIVE if nonnegative else SIGNED


def _classified(game, key, want_win: bool) -> bool:
    if isinstance(game, CompleteGameForm):
        if len(key) != game.t or any(not 0 <= x <= s for x, s in zip(key, game.class_sizes)):
            return False
        return vector_wins(game, key) == want_win
    if not 0 <= key < (1 << game.n):
        return False
    return winning(game, key) == want_win


def certificate_lower_bound(game, wins: Iterable, loses: Iterable,
                            nonnegative: Optional[bool] = None) -> DualCertificate:
    """Best lower bound provable from the given winning and losing coalitions."""
    wins, loses = sorted(set(wins)), sorted(set(loses))
    for s in wins:
        if not _classified(game, s, True):
            raise ValueError(f"{s} is not a winning coalition of the game")
    for t in loses:
        if not _classified(game, t, False):
            raise ValueError(f"{t} is not a losing coalition of the game")
    mode = _mode_for(game, nonnegative)
    if mode == ORDERED:
        return _solve_certificate(wins, loses, mode, game.t, game.class_sizes)[1]
    return _solve_certificate(wins, loses, mode, game.n)[1]


def verify_certificate(game, cert: DualCertificate) -> bool:
    """Independent feasibility check; the bound must equal the sum of u."""
    if any(x < 0 for x in cert.u.values()) or any(x < 0 for x in cert.v.values()):
        return False
    if cert.mode == ORDERED:
        if not isinstance(game, CompleteGameForm) or tuple(cert.class_sizes or ()) != game.class_sizes:
            return False
        width = game.t
    else:
        if isinstance(game, CompleteGameForm):
            return False
        width = game.n
    for s in cert.u:
        if not _classified(game, s, True):
            return False
    for t in cert.v:
        if not _classified(game, t, False):
            return False
    if sum(cert.v.values(), Fraction(0)) > 1:
        return False
    load = [Fraction(0)] * width
    for s, x in cert.u.items():
        for i, c in enumerate(_rows_for(s, cert.mode, width)):
            load[i] += c * x
    for t, x in cert.v.items():
        for i, c in enumerate(_rows_for(t, cert.mode, width)):
            load[i] -= c * x
    if cert.mode == SIGNED:
        if any(load):
            return False
    elif any(x > 0 for x in load):
        return False
    return sum(cert.u.values(), Fraction(0)) == cert.bound


# ---------------------------------------------------------------------------
# cost of stability


def cost_of_stability(game: Union[BooleanGame, SimpleGame, WeightedRepresentation]) -> StabilityResult:
    """Minimal external payment making a non-negative payoff cover every winning coalition."""
    if isinstance(game, WeightedRepresentation):
        game = game.game()
    n = game.n
    full = (1 << n) - 1
    if isinstance(game, BooleanGame):
        if full not in game.winning:
            raise ValueError("cost of stability is only defined here for games with f(N) = 1")
        rows_for = sorted(game.winning)
    else:
        rows_for = list(game.minimal_winning)
    rows = [({i: 1 for i in iter_bits(s)}, GE, 1) for s in rows_for]
    d = {i: 1 for i in range(n)}
    d[n] = -1
    rows.append((d, EQ, 1))
    model = make_model("min", [0] * n + [1], rows)
    sol = solve_lp(model)
    if sol.status != OPTIMAL:
        raise RuntimeError(f"stability LP ended {sol.status}")
    payments = tuple(sol.x[:n])
    delta = sol.x[n]
    if sum(payments) != 1 + delta:
        raise AssertionError("payments do not match the normalisation row")
    return StabilityResult(delta, payments)


# ---------------------------------------------------------------------------
# closed forms and bounds


def closed_form_t2_r1(n1: int, n2: int, a: int, b: int):
    """Threshold of the two-class game with the single shift-minimal vector (a, b).

    Returns ``WEIGHTED`` for parameters whose games are weighted, else the
    exact value (at least 1)."""
    if n1 < 1 or n2 < 1 or not 1 <= a <= n1 or not 0 <= b <= n2:
        raise ValueError("need n1, n2 >= 1, 1 <= a <= n1 and 0 <= b <= n2")
    if b in (0, 1, n2) or a == n1:
        return WEIGHTED
    if a + b - 1 <= n1:
        alpha = Fraction(n2 * (a + b - 1), a * n2 + b * b)
    else:
        num = n1 * n2 - a * b + b - a * a + 2 * a + a * n1 - 1 - n1
        den = -a * a - 2 * a * b + a + a * n1 + n1 * b + a * n2 + b
        alpha = Fraction(num, den)
    return max(alpha, Fraction(1))


def analytic_upper_bound(game: SimpleGame) -> Fraction:
    """min(n - k, max(1, k/2)) with k the size of a largest losing coalition."""
    k = max(popcount(t) for t in maximal_losing(game))
    return min(Fraction(game.n - k), max(Fraction(1), Fraction(k, 2)))


def largest_losing_size(game: SimpleGame) -> int:
    return max(popcount(t) for t in maximal_losing(game))
