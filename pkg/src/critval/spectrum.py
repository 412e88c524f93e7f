"""Sets of attainable critical threshold values.

``lambda_superset`` gives the determinant-based candidate set.  The exact
spectrum is swept upward: each step finds the least threshold strictly above
the previous one by branch and bound over the coalition lattice, with an
upper bound (largest threshold of any completion) and a lower bound (a
certificate using only coalitions already decided) at every node.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional

import numpy as np

from . import threshold
from .core_games import BooleanGame, dictator, shift_minimal_winning_vectors
from .exact_lp import OPTIMAL, bits_to_array
from .extremal_ilp import Budget, Space, _perm_table

MAX_DET = (1, 1, 2, 3, 5, 9, 32, 56, 144, 320, 1458, 3645, 9477, 25515, 131072, 327680, 1114112)
# attainable |det| of k x k binary matrices, nonzero part, where fully known
KNOWN_FULL_SPECTRA = {
    1: frozenset({1}),
    2: frozenset({1}),
    3: frozenset({1, 2}),
    4: frozenset({1, 2, 3}),
    5: frozenset(range(1, 6)),
    6: frozenset(range(1, 10)),
    7: frozenset(set(range(1, 19)) | {20, 24, 32}),
}

EXACT, LOWER_SET = "exact", "lower_set"
YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass(frozen=True)
class DeterminantTable:
    max_det: tuple = MAX_DET
    known_full_spectra: dict = field(default_factory=lambda: dict(KNOWN_FULL_SPECTRA))

    def bound(self, k: int) -> int:
        if 1 <= k <= len(self.max_det):
            return self.max_det[k - 1]
        # improved Hadamard bound for binary matrices
        return int((k + 1) ** ((k + 1) / 2) / 2 ** k)


@dataclass
class SpectrumResult:
    game_class: str
    n: int
    values: tuple
    completeness: str
    witnesses: dict
    node_count: int = 0
    elapsed: float = 0.0


def class_upper_bound(cls: str, n: int) -> Fraction:
    """Proven ceiling on thresholds in the class."""
    if cls == "boolean":
        return Fraction(max(n, 1))
    return max(Fraction(1), Fraction(n, 3))


def lambda_superset(n: int, cls: str = "boolean", table: Optional[DeterminantTable] = None) -> tuple:
    """{1} together with every p/q in lowest terms, q < p <= D, below the class ceiling.

    D is the largest determinant of an (n+1) x (n+1) binary matrix; when the
    full determinant spectrum of that size is known, denominators are drawn
    from it (closed under divisors)."""
    if not 1 <= n <= 8:
        raise ValueError("candidate sets are supported for 1 <= n <= 8")
    table = table or DeterminantTable()
    k = n + 1
    D = table.bound(k)
    dens = range(1, D + 1)
    spec = table.known_full_spectra.get(k)
    if spec is not None:
        allowed = {d for v in spec for d in range(1, v + 1) if v % d == 0}
        dens = sorted(allowed)
    cap = class_upper_bound(cls, n)
    out = {Fraction(1)}
    for q in dens:
        for p in range(q + 1, D + 1):
            if gcd(p, q) == 1 and Fraction(p, q) <= cap:
                out.add(Fraction(p, q))
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# search over completions


class _Sweep:
    def __init__(self, cls: str, n: int, budget: Budget, start: float):
        self.sp = Space(cls, n)
        self.cls = cls
        self.budget = budget
        self.start = start
        self.nodes = 0
        self.symmetric = cls in ("simple", "boolean") and n <= 7
        if self.symmetric:
            self.table = _perm_table(n)

    def out_of_budget(self) -> bool:
        return self.nodes >= self.budget.nodes or time.monotonic() - self.start > self.budget.seconds

    def root(self):
        sp = self.sp
        W, L = 0, 1
        if self.cls != "boolean":
            W |= 1 << sp.full
        state = sp.propagate(W, L)
        group = np.arange(len(self.table), dtype=np.int64) if self.symmetric else None
        if group is not None:
            group = self._stab(group, *state)
        return state, group

    def _stab(self, group, W, L):
        if group is None or len(group) <= 1:
            return group
        wa = bits_to_array(W, self.sp.size)
        la = bits_to_array(L, self.sp.size)
        img = self.table[group]
        return group[(wa[img] == wa).all(axis=1) & (la[img] == la).all(axis=1)]

    def lower(self, W, L, basis=None):
        sp = self.sp
        allow_u = bits_to_array(W, sp.size)
        allow_v = bits_to_array(L, sp.size)
        return sp.lp.solve(allow_u, allow_v, basis)

    def children(self, W, L, s, group):
        sp = self.sp
        out = []
        left = sp.propagate(W | (1 << s), L)
        if left is not None:
            out.append((left, self._stab(group, *left)))
        orbit = 1 << s
        if group is not None and len(group) > 1:
            for img in np.unique(self.table[group, s]):
                orbit |= 1 << int(img)
        right = sp.propagate(W, L | orbit)
        if right is not None:
            out.append((right, self._stab(group, *right)))
        return out

    def pick(self, W, L, up):
        """Coalition to branch on, taken from the upper-bound solution."""
        sp = self.sp
        conf = sp.conflicts(up.u, up.v)
        if conf:
            return conf[0][2]
        free = sp.all & ~(W | L)
        for s in sorted(up.u, key=lambda k: (-up.u[k], k)):
            if free >> s & 1:
                return s
        for t in sorted(up.v, key=lambda k: (-up.v[k], k)):
            if free >> t & 1:
                return t
        return free.bit_length() - 1 if free else None

    def next_value(self, prev: Fraction):
        """Least z* strictly above ``prev`` as (value, W), None if there is none,
        or raises _OutOfBudget."""
        sp = self.sp
        best_val, best_W = None, None
        (W0, L0), g0 = self.root()
        heap = []
        counter = 0

        def push(W, L, group, ub_basis, lb_basis):
            nonlocal counter, best_val, best_W
            ub = sp.bound(W, L, ub_basis, prev)
            if ub.status != OPTIMAL or ub.value <= prev:
                return
            lb = self.lower(W, L, lb_basis)
            if best_val is not None and lb.value >= best_val:
                return
            if lb.value == ub.value:
                done = sp.complete_greedily(W, L)
                if done is not None and (best_val is None or ub.value < best_val):
                    best_val, best_W = ub.value, done
                return
            if not sp.conflicts(ub.u, ub.v):
                done = sp.complete_greedily(W | sum(1 << s for s in ub.u), L | sum(1 << t for t in ub.v))
                if done is not None and (best_val is None or ub.value < best_val):
                    best_val, best_W = ub.value, done
            counter += 1
            heapq.heappush(heap, (lb.value, counter, W, L, group, ub, lb))

        push(W0, L0, g0, None, None)
        while heap:
            if self.out_of_budget():
                raise _OutOfBudget()
            lbv, _, W, L, group, ub, lb = heapq.heappop(heap)
            if best_val is not None and lbv >= best_val:
                break
            self.nodes += 1
            s = self.pick(W, L, ub)
            if s is None:
                continue
            for (W2, L2), g2 in self.children(W, L, s, group):
                push(W2, L2, g2, ub.basis, lb.basis)
        if best_val is None:
            return None
        return best_val, best_W

    def feasible(self, alpha: Fraction):
        """A game with z* == alpha as its winning family, or None."""
        sp = self.sp
        (W0, L0), g0 = self.root()
        stack = [(W0, L0, g0, None, None)]
        while stack:
            if self.out_of_budget():
                raise _OutOfBudget()
            W, L, group, ub_basis, lb_basis = stack.pop()
            self.nodes += 1
            ub = sp.bound(W, L, ub_basis)
            if ub.value < alpha:
                continue
            lb = self.lower(W, L, lb_basis)
            if lb.value > alpha:
                continue
            if lb.value == ub.value == alpha:
                done = sp.complete_greedily(W, L)
                if done is not None:
                    return done
                continue
            if ub.value == alpha and not sp.conflicts(ub.u, ub.v):
                done = sp.complete_greedily(W | sum(1 << s for s in ub.u), L | sum(1 << t for t in ub.v))
                if done is not None:
                    return done
            s = self.pick(W, L, ub)
            if s is None:
                continue
            for (W2, L2), g2 in reversed(self.children(W, L, s, group)):
                stack.append((W2, L2, g2, ub.basis, lb.basis))
        return None


class _OutOfBudget(Exception):
    pass


def _trivial_game(cls, n):
    """A weighted member of the class, so threshold 1."""
    g = dictator(n)
    return BooleanGame.from_bits(n, g.bits) if cls == "boolean" else g


def _mu_of_bits(cls, sp, W):
    game = sp.game_of(W)
    if cls == "boolean":
        return threshold.mu_boolean(game).mu, game
    if cls == "complete":
        form = shift_minimal_winning_vectors(game)
        return threshold.mu_complete(form).mu, game
    return threshold.mu_simple(game).mu, game


_CAPS = {"boolean": 5, "simple": 6, "complete": 7}


def _check(cls, n, allow_large):
    if cls not in _CAPS:
        raise ValueError(f"unknown class {cls!r}")
    if n < 1:
        raise ValueError("n must be positive")
    if n > _CAPS[cls] and not allow_large:
        raise ValueError(f"n={n} exceeds the {cls} cap of {_CAPS[cls]}; pass allow_large to override")


def spec_feasible(alpha, cls: str, n: int, budget: Optional[Budget] = None, allow_large: bool = False):
    """``(YES, witness)`` if some game of the class has threshold exactly alpha,
    ``(NO, None)`` if none has, ``(UNKNOWN, None)`` when the budget runs out."""
    alpha = Fraction(alpha)
    if alpha < 1:
        raise ValueError("thresholds are at least 1")
    _check(cls, n, allow_large)
    if alpha == 1:
        return YES, _trivial_game(cls, n)
    budget = budget or Budget()
    sweep = _Sweep(cls, n, budget, time.monotonic())
    try:
        W = sweep.feasible(alpha)
    except _OutOfBudget:
        return UNKNOWN, None
    if W is None:
        return NO, None
    mu, game = _mu_of_bits(cls, sweep.sp, W)
    if mu != alpha:
        raise AssertionError(f"witness has threshold {mu}, expected {alpha}")
    return YES, game


def spectrum(cls: str, n: int, budget: Optional[Budget] = None, mode: str = "sweep",
             allow_large: bool = False, stop_after: Optional[int] = None) -> SpectrumResult:
    """All attainable thresholds of the class on n voters.

    ``mode="candidates"`` tests every element of the candidate set instead of
    sweeping.  ``stop_after`` ends the sweep after that many values above 1
    (the result is then flagged as a lower set)."""
    _check(cls, n, allow_large)
    budget = budget or Budget()
    start = time.monotonic()
    values = {Fraction(1): _trivial_game(cls, n)}
    complete = True
    nodes = 0
    if mode == "sweep":
        sweep = _Sweep(cls, n, budget, start)
        prev = Fraction(1)
        while True:
            if stop_after is not None and len(values) - 1 >= stop_after:
                complete = False
                break
            try:
                found = sweep.next_value(prev)
            except _OutOfBudget:
                complete = False
                break
            if found is None:
                break
            value, W = found
            mu, game = _mu_of_bits(cls, sweep.sp, W)
            if mu != value:
                raise AssertionError(f"witness has threshold {mu}, expected {value}")
            values[value] = game
            prev = value
        nodes = sweep.nodes
    elif mode == "candidates":
        for alpha in lambda_superset(n, cls):
            if alpha == 1:
                continue
            remaining = Budget(budget.nodes, max(0.0, budget.seconds - (time.monotonic() - start)))
            verdict, game = spec_feasible(alpha, cls, n, remaining, allow_large)
            if verdict == YES:
                values[alpha] = game
            elif verdict == UNKNOWN:
                complete = False
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return SpectrumResult(cls, n, tuple(sorted(values)), EXACT if complete else LOWER_SET,
                          values, nodes, time.monotonic() - start)
