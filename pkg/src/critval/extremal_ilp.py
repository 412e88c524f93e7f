"""Maximum critical threshold over a game class by branch and bound.

``build_max_mu_model`` writes the mixed binary program in full (game
indicators x_S, dual multipliers u_S and v_S).  Solving that program with a
dense exact tableau is hopeless beyond a handful of voters, so models that
come from the builder are solved by a structured search over the coalition
lattice that uses the same relaxation idea with far smaller LPs: a node fixes
some coalitions winning (an up-set W) and some losing (a down-set L), and
its bound is the certificate LP in which u may sit on anything outside L and
v on anything outside W.  Any other ``IlpModel`` goes through a textbook
LP-based branch and bound.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Optional

import numpy as np

from .core_games import (
    BooleanGame,
    CompleteGameForm,
    SimpleGame,
    compositions,
    dictator,
    iter_bits,
    lattice,
    popcount,
    shift_leq,
    shift_minimal_winning_vectors,
    desirability_classes,
    construct_extremal_family,
    expand_complete_form,
    is_proper,
    is_strong,
)
from .exact_lp import (
    EQ, GE, LE, OPTIMAL, INFEASIBLE, UNBOUNDED,
    CoalitionLp, LpModel, bits_to_array, make_model, solve_lp,
)
from . import threshold

PROVED, BOUNDS = "proved_optimal", "bound_pair"
CLASSES = ("boolean", "simple", "complete")
DEFAULT_NODES = 10 ** 6
DEFAULT_SECONDS = 600.0

# desk-scale caps per class; larger n needs allow_large=True
CAPS = {"boolean": 8, "simple": 8, "complete": 16}
# conflict coalitions tried per node by strong branching (ordered classes only)
LOOKAHEAD = 4


@dataclass(frozen=True)
class Budget:
    nodes: int = DEFAULT_NODES
    seconds: float = DEFAULT_SECONDS


@dataclass(frozen=True)
class IlpModel:
    lp: LpModel
    binaries: tuple
    var_index: dict
    meta: Optional[dict] = None


@dataclass
class BnbResult:
    optimum: Fraction
    witness: object
    node_count: int
    status: str
    lower: Fraction
    upper: Fraction
    elapsed: float = 0.0
    form: Optional[CompleteGameForm] = None

    @property
    def proved(self) -> bool:
        return self.status == PROVED


def _check_flags(cls, n, proper, strong, r):
    if cls not in CLASSES:
        raise ValueError(f"unknown class {cls!r}")
    if r is not None and cls != "complete":
        raise ValueError("the shift-count restriction needs class=complete")
    if r is not None and r < 1:
        raise ValueError("r must be positive")
    if n < 1:
        raise ValueError("n must be positive")


# ---------------------------------------------------------------------------
# explicit model


def lower_covers(mask: int, n: int) -> list:
    """Direct predecessors of a coalition in the per-voter shift order."""
    out = []
    last = n - 1
    if mask >> last & 1:
        out.append(mask ^ (1 << last))
    for j in range(n - 1):
        if mask >> j & 1 and not mask >> (j + 1) & 1:
            out.append(mask ^ (1 << j) ^ (1 << (j + 1)))
    return out


def build_max_mu_model(cls: str, n: int, proper: bool = False, strong: bool = False,
                       r: Optional[int] = None, singleton_fix: Optional[bool] = None) -> IlpModel:
    """Mixed binary program whose optimum is the largest threshold in the class."""
    _check_flags(cls, n, proper, strong, r)
    if n > 16:
        raise ValueError("models are limited to n <= 16")
    size = 1 << n
    full = size - 1
    if singleton_fix is None:
        singleton_fix = cls == "simple" and n >= 2 and not strong
    names = [f"x_{s}" for s in range(size)] + [f"u_{s}" for s in range(size)] + [f"v_{s}" for s in range(size)]
    X, U, V = 0, size, 2 * size
    s_base = len(names)
    if r is not None:
        names += [f"s_{s}" for s in range(size)]
    width = len(names)
    lower = [0] * width
    upper = [1] * width
    objective = [0] * width
    for s in range(size):
        objective[U + s] = 1
    rows = []
    # dual rows: weights per voter (prefix-transformed for ordered weights)
    if cls == "complete":
        for k in range(n):
            d = {}
            for s in range(size):
                c = popcount(s & ((1 << (k + 1)) - 1))
                if c:
                    d[U + s] = c
                    d[V + s] = -c
            rows.append((d, LE, 0, f"voter{k + 1}"))
    else:
        rel = EQ if cls == "boolean" else LE
        for i in range(n):
            d = {}
            for s in range(size):
                if s >> i & 1:
                    d[U + s] = 1
                    d[V + s] = -1
            rows.append((d, rel, 0, f"voter{i + 1}"))
    rows.append(({V + s: 1 for s in range(size)}, LE, 1, "budget"))
    for s in range(size):
        rows.append(({U + s: 1, X + s: -1}, LE, 0, f"ucap_{s}"))
        rows.append(({V + s: 1, X + s: 1}, LE, 1, f"vcap_{s}"))
    upper[X + 0] = 0
    if cls != "boolean":
        lower[X + full] = 1
        for s in range(size):
            for i in iter_bits(s):
                rows.append(({X + s: 1, X + (s ^ (1 << i)): -1}, GE, 0, f"mono_{s}_{i + 1}"))
    if cls == "complete":
        for s in range(size):
            for j in range(n - 1):
                if s >> (j + 1) & 1 and not s >> j & 1:
                    t = s ^ (1 << j) ^ (1 << (j + 1))
                    rows.append(({X + t: 1, X + s: -1}, GE, 0, f"swap_{s}_{j + 1}"))
    if proper or strong:
        for s in range(size):
            c = full ^ s
            if s < c:
                if proper:
                    rows.append(({X + s: 1, X + c: 1}, LE, 1, f"proper_{s}"))
                if strong:
                    rows.append(({X + s: 1, X + c: 1}, GE, 1, f"strong_{s}"))
    if singleton_fix:
        for i in range(n):
            upper[X + (1 << i)] = 0
    binaries = list(range(X, X + size))
    if r is not None:
        for s in range(size):
            covers = lower_covers(s, n)
            rows.append(({s_base + s: 1, X + s: -1}, LE, 0, f"sx_{s}"))
            for t in covers:
                rows.append(({s_base + s: 1, X + t: 1}, LE, 1, f"scov_{s}_{t}"))
            d = {s_base + s: 1, X + s: -1}
            for t in covers:
                d[X + t] = 1
            rows.append((d, GE, 0, f"sforce_{s}"))
        rows.append(({s_base + s: 1 for s in range(size)}, EQ, r, "shift_count"))
        binaries += list(range(s_base, s_base + size))
    lp = make_model("max", objective, rows, lower=lower, upper=upper, names=names)
    meta = dict(cls=cls, n=n, proper=proper, strong=strong, r=r, singleton_fix=singleton_fix)
    return IlpModel(lp, tuple(binaries), {nm: j for j, nm in enumerate(names)}, meta)


# ---------------------------------------------------------------------------
# generic LP-based branch and bound


def _with_bounds(lp: LpModel, lower, upper) -> LpModel:
    return LpModel(lp.sense, lp.objective, lp.constraints, tuple(lower), tuple(upper), lp.names)


def _generic_bnb(model: IlpModel, budget: Budget) -> BnbResult:
    lp = model.lp
    start = time.monotonic()
    sign = 1 if lp.sense == "max" else -1
    binaries = sorted(model.binaries)
    lo0, hi0 = list(lp.lower), list(lp.upper)
    for j in binaries:
        lo0[j] = max(Fraction(0), lo0[j] if lo0[j] is not None else Fraction(0))
        hi0[j] = min(Fraction(1), hi0[j] if hi0[j] is not None else Fraction(1))
    best_val, best_x = None, None
    counter = 0
    heap = []

    def relax(lo, hi):
        return solve_lp(_with_bounds(lp, lo, hi))

    root = relax(lo0, hi0)
    if root.status == UNBOUNDED:
        raise ValueError("LP relaxation is unbounded")
    if root.status == OPTIMAL:
        heapq.heappush(heap, (-sign * root.objective, 0, counter, lo0, hi0, root))
    nodes = 0
    while heap:
        if nodes >= budget.nodes or time.monotonic() - start > budget.seconds:
            break
        key, negdepth, _, lo, hi, sol = heapq.heappop(heap)
        bound = -key * sign
        if best_val is not None and sign * bound <= sign * best_val:
            heap.clear()
            break
        nodes += 1
        frac = []
        for j in binaries:
            xj = sol.x[j]
            if xj.denominator != 1:
                frac.append((abs(xj - Fraction(1, 2)), j))
        if not frac:
            if best_val is None or sign * sol.objective > sign * best_val:
                best_val, best_x = sol.objective, sol.x
            continue
        _, j = min(frac)  # most fractional, smallest index on ties
        for val in (Fraction(0), Fraction(1)):
            lo2, hi2 = list(lo), list(hi)
            lo2[j] = hi2[j] = val
            child = relax(lo2, hi2)
            if child.status != OPTIMAL:
                continue
            if best_val is not None and sign * child.objective <= sign * best_val:
                continue
            counter += 1
            heapq.heappush(heap, (-sign * child.objective, negdepth - 1, counter, lo2, hi2, child))
    elapsed = time.monotonic() - start
    if heap:
        upper = max(-k * sign for k, *_ in heap) if sign > 0 else min(-k * sign for k, *_ in heap)
        if best_val is not None and sign * best_val >= sign * upper:
            upper = best_val
        status = BOUNDS
    else:
        upper = best_val
        status = PROVED
    return BnbResult(best_val, best_x, nodes, status, best_val, upper, elapsed)


def solve_bnb(model: IlpModel, budget: Optional[Budget] = None) -> BnbResult:
    """Branch and bound with exact LP relaxations.

    Models produced by ``build_max_mu_model`` are recognised through their
    metadata and handed to the lattice search, which explores the same
    feasible set with much smaller relaxations."""
    budget = budget or Budget()
    if model.meta is not None:
        m = model.meta
        return _search(m["cls"], m["n"], m["proper"], m["strong"], m["r"], budget, m["singleton_fix"])
    return _generic_bnb(model, budget)


# ---------------------------------------------------------------------------
# lattice search


def _transform(cls: str, n: int) -> list:
    if cls == "complete":
        return [[1 if i <= k else 0 for i in range(n)] for k in range(n)]
    eye = [[1 if i == k else 0 for i in range(n)] for k in range(n)]
    if cls == "boolean":
        return eye + [[-x for x in row] for row in eye]
    return eye


@lru_cache(maxsize=None)
def _perm_table(n: int) -> np.ndarray:
    """Row g maps each coalition mask to its image under the g-th voter permutation."""
    perms = list(permutations(range(n)))
    masks = np.arange(1 << n, dtype=np.int64)
    ind = (masks[:, None] >> np.arange(n)) & 1
    powers = np.array([[1 << p[i] for i in range(n)] for p in perms], dtype=np.int64)
    return (powers @ ind.T).astype(np.int32)


class Space:
    """Coalition lattice of one class with closure, propagation and LP bounds."""

    def __init__(self, cls: str, n: int, proper: bool = False, strong: bool = False):
        self.cls, self.n = cls, n
        self.proper, self.strong = proper, strong
        self.lat = lattice(n)
        self.size = 1 << n
        self.full = self.size - 1
        self.all = self.lat.all
        self.order = {"simple": "subset", "complete": "shift", "boolean": None}[cls]
        self.lp = CoalitionLp(n, _transform(cls, n))

    # closures
    def up(self, bits: int) -> int:
        return self.lat.up_closure(bits, self.order) if self.order else bits

    def down(self, bits: int) -> int:
        return self.lat.down_closure(bits, self.order) if self.order else bits

    def up_of(self, s: int) -> int:
        return self.up(1 << s)

    def down_of(self, s: int) -> int:
        return self.down(1 << s)

    def leq(self, s: int, t: int) -> bool:
        if self.order == "subset":
            return s & ~t == 0
        if self.order == "shift":
            return shift_leq(s, t, self.n)
        return s == t

    def propagate(self, W: int, L: int):
        """Close W upward and L downward under the class order and the flags;
        None when the two collide."""
        comp = self.lat.complement_map
        while True:
            W2, L2 = self.up(W), self.down(L)
            if self.proper:
                L2 |= comp(W2)
            if self.strong:
                W2 |= comp(L2)
            if W2 & L2:
                return None
            if W2 == W and L2 == L:
                return W, L
            W, L = W2, L2

    def root(self, vetoer_fix: bool = True, singleton_fix: bool = False):
        W, L = 0, 1  # empty coalition loses
        if self.cls != "boolean":
            W |= 1 << self.full
            if vetoer_fix and self.n >= 2:
                for i in range(self.n):
                    W |= 1 << (self.full ^ (1 << i))
        if singleton_fix:
            for i in range(self.n):
                L |= 1 << (1 << i)
        return self.propagate(W, L)

    def bound(self, W: int, L: int, basis=None, cutoff=None):
        allow_u = bits_to_array(self.all & ~L, self.size)
        allow_v = bits_to_array(self.all & ~W, self.size)
        return self.lp.solve(allow_u, allow_v, basis, cutoff)

    def exact_mu(self, W: int):
        """z* of the fully decided game W (certificate LP on W versus its complement)."""
        return self.bound(W, self.all & ~W)

    def analytic(self, W: int, L: int) -> Fraction:
        """Size-based bound valid for every monotone completion."""
        n = self.n
        lmax = max(k for k in range(n + 1) if L & self.lat.size_bits[k])
        notw = self.all & ~W
        kmax = max(k for k in range(n + 1) if notw & self.lat.size_bits[k])
        return min(Fraction(n - lmax), max(Fraction(1), Fraction(kmax, 2)))

    def conflicts(self, u: dict, v: dict) -> list:
        out = []
        for s, us in u.items():
            for t, vt in v.items():
                if self.leq(s, t):
                    out.append((min(us, vt), us, s, t))
        out.sort(key=lambda c: (-c[0], -c[1], c[2], c[3]))
        return out

    def valid_game(self, W: int) -> bool:
        if W & 1:
            return False
        if self.cls != "boolean" and (not W >> self.full & 1 or self.up(W) != W):
            return False
        comp = self.lat.complement_map
        if self.proper and W & comp(W):
            return False
        if self.strong:
            lose = self.all & ~W
            if lose & comp(lose):
                return False
        return True

    def complete_greedily(self, W: int, L: int):
        """Some valid game between W and the complement of L, or None."""
        state = self.propagate(W, L)
        while state is not None:
            W, L = state
            free = self.all & ~(W | L)
            if not free:
                return W
            s = free.bit_length() - 1
            nxt = self.propagate(W, L | (1 << s))
            state = nxt if nxt is not None else self.propagate(W | (1 << s), L)
        return None

    def game_of(self, W: int):
        if self.cls == "boolean":
            return BooleanGame.from_bits(self.n, W)
        return SimpleGame.from_bits(self.n, W)


def _incumbent_games(cls, n, proper, strong):
    """Known games of the class used as starting incumbents."""
    cands = [dictator(n)]
    if cls == "boolean":
        if not proper and not strong:
            bits = 0
            for i in range(n):
                bits |= 1 << (1 << i)
            return [BooleanGame.from_bits(n, bits)]
        return [BooleanGame.from_bits(n, dictator(n).bits)]
    if cls == "simple":
        try:
            if n % 2 == 0 and n >= 2:
                cands.append(construct_extremal_family("even_chain", n))
            elif n >= 3:
                cands.append(construct_extremal_family("odd_chain", n))
        except ValueError:
            pass
        if strong:
            for kind in ("strong_even", "strong_odd"):
                try:
                    cands.append(construct_extremal_family(kind, n))
                except ValueError:
                    pass
    if cls == "complete" and not proper and not strong:
        form = _best_two_class_form(n)
        if form is not None:
            cands.append(expand_complete_form(form))
    return [g for g in cands if (not proper or is_proper(g)) and (not strong or is_strong(g))]


def _best_two_class_form(n):
    """Two-class game with one shift-minimal vector and the largest closed-form threshold."""
    best, arg = Fraction(1), None
    for n1 in range(1, n):
        n2 = n - n1
        for a in range(1, n1):
            for b in range(2, n2 - 1):
                val = threshold.closed_form_t2_r1(n1, n2, a, b)
                if val != threshold.WEIGHTED and val > best:
                    best, arg = val, (n1, n2, a, b)
    return construct_extremal_family("t2r1", None, *arg) if arg else None


class _Search:
    def __init__(self, space: Space, budget: Budget, symmetric: bool, lookahead: int = 0):
        self.sp = space
        self.lookahead = lookahead
        self.budget = budget
        self.start = time.monotonic()
        self.nodes = 0
        self.best_val = Fraction(0)
        self.best_W = None
        self.counter = 0
        self.symmetric = symmetric
        if symmetric:
            self.table = _perm_table(space.n)

    def out_of_budget(self) -> bool:
        return self.nodes >= self.budget.nodes or time.monotonic() - self.start > self.budget.seconds

    def offer(self, value: Fraction, W: int) -> None:
        if value > self.best_val:
            self.best_val, self.best_W = value, W

    def stabiliser(self, group, W, L):
        if group is None or len(group) <= 1:
            return group
        sp = self.sp
        wa = bits_to_array(W, sp.size)
        la = bits_to_array(L, sp.size)
        img = self.table[group]
        keep = (wa[img] == wa).all(axis=1) & (la[img] == la).all(axis=1)
        return group[keep]

    def run(self, root, analytic: bool = True):
        sp = self.sp
        heap = []

        def evaluate(W, L, basis):
            if analytic and sp.cls != "boolean" and sp.analytic(W, L) <= self.best_val:
                return None
            res = sp.bound(W, L, basis, self.best_val)
            if res.status != OPTIMAL or res.value <= self.best_val:
                return None
            return res

        def push(W, L, depth, basis, group, res=None):
            if res is None:
                res = evaluate(W, L, basis)
            if res is None:
                return
            self.counter += 1
            heapq.heappush(heap, (-res.value, -depth, self.counter, W, L, res, group))

        if root is None:
            return heap, False
        W0, L0 = root
        group = np.arange(len(self.table), dtype=np.int64) if self.symmetric else None
        if self.symmetric:
            group = self.stabiliser(group, W0, L0)
        push(W0, L0, 0, None, group)
        while heap:
            if self.out_of_budget():
                return heap, False
            key, negdepth, _, W, L, res, group = heapq.heappop(heap)
            value = -key
            if value <= self.best_val:
                heap.clear()
                break
            self.nodes += 1
            conf = sp.conflicts(res.u, res.v)
            if not conf:
                # the supports are compatible: fix them and look for a valid game
                done = sp.complete_greedily(W | sum(1 << s for s in res.u),
                                            L | sum(1 << t for t in res.v))
                if done is not None:
                    self.offer(value, done)
                    continue
                s = self._fallback_branch(W, L, res)
                if s is None:
                    continue
            elif self.lookahead and group is None:
                self._strong_branch(push, evaluate, W, L, conf, value, -negdepth, res)
                continue
            else:
                s = conf[0][2]
            self._branch(push, W, L, s, -negdepth, res, group)
        return heap, True

    def _fallback_branch(self, W, L, res):
        free = self.sp.all & ~(W | L)
        for s in sorted(res.u, key=lambda k: -res.u[k]):
            if free >> s & 1:
                return s
        for t in sorted(res.v, key=lambda k: -res.v[k]):
            if free >> t & 1:
                return t
        return free.bit_length() - 1 if free else None

    def _strong_branch(self, push, evaluate, W, L, conf, value, depth, res):
        """Try the leading conflict coalitions and keep the split whose two
        children lose the most bound (product rule)."""
        sp = self.sp
        cands = []
        for c in conf:
            for x in (c[2], c[3]):
                if x not in cands and not (W | L) >> x & 1:
                    cands.append(x)
        best = None
        floor = Fraction(1, 10**6)
        for s in cands[:self.lookahead]:
            kids = []
            for state in (sp.propagate(W | (1 << s), L), sp.propagate(W, L | (1 << s))):
                r = evaluate(state[0], state[1], res.basis) if state is not None else None
                kids.append((state, r))
            gains = [value - (r.value if r is not None else 0) for _, r in kids]
            score = max(gains[0], floor) * max(gains[1], floor)
            if best is None or score > best[0]:
                best = (score, kids)
            if kids[0][1] is None and kids[1][1] is None:
                break
        for state, r in best[1]:
            if r is not None:
                push(state[0], state[1], depth + 1, None, None, r)

    def _branch(self, push, W, L, s, depth, res, group):
        sp = self.sp
        left = sp.propagate(W | (1 << s), L)
        if left is not None:
            g = self.stabiliser(group, *left) if group is not None else None
            push(left[0], left[1], depth + 1, res.basis, g)
        orbit = 1 << s
        if group is not None and len(group) > 1:
            for img in np.unique(self.table[group, s]):
                orbit |= 1 << int(img)
        right = sp.propagate(W, L | orbit)
        if right is not None:
            g = self.stabiliser(group, *right) if group is not None else None
            push(right[0], right[1], depth + 1, res.basis, g)


def _r_search(space: Space, r: int, budget: Budget) -> tuple:
    """Best game whose per-voter shift-minimal winning coalitions number exactly r."""
    sp = space
    n, size = sp.n, sp.size
    search = _Search(sp, budget, False)
    comparable = [sp.up_of(s) | sp.down_of(s) for s in range(size)]
    comp = sp.lat.complement_map
    heap = []

    def feasible(Mbits, Cbits):
        W = sp.up(Mbits)
        if W & 1:
            return None
        notL = sp.up(Mbits | Cbits)
        if not notL >> sp.full & 1:
            return None
        if sp.proper and W & comp(W):
            return None
        if sp.strong:
            lose_min = sp.all & ~notL
            if lose_min & comp(lose_min):
                return None
        return W, sp.all & ~notL

    def push(M, Mbits, Cbits, basis):
        if len(M) + popcount(Cbits) < r:
            return
        st = feasible(Mbits, Cbits)
        if st is None:
            return
        W, L = st
        if len(M) == r:
            L = sp.all & ~W
            if not sp.valid_game(W):
                return
            res = sp.bound(W, L)
            search.offer(max(res.value, Fraction(1)), W)
            return
        res = sp.bound(W, L, basis, search.best_val)
        if res.status != OPTIMAL or res.value <= search.best_val:
            return
        search.counter += 1
        heapq.heappush(heap, (-res.value, -len(M), search.counter, M, Mbits, Cbits, res))

    push((), 0, sp.all & ~1, None)
    finished = True
    while heap:
        if search.out_of_budget():
            finished = False
            break
        key, _, _, M, Mbits, Cbits, res = heapq.heappop(heap)
        if -key <= search.best_val:
            heap.clear()
            break
        search.nodes += 1
        W = sp.up(Mbits)
        c = None
        for s in sorted(res.u, key=lambda k: (-res.u[k], k)):
            if not W >> s & 1:
                below = sp.down_of(s) & Cbits
                if below:
                    c = below.bit_length() - 1
                    break
        if c is None:
            c = Cbits.bit_length() - 1
        push(M + (c,), Mbits | (1 << c), Cbits & ~comparable[c], res.basis)
        push(M, Mbits, Cbits & ~(1 << c), res.basis)
    return search, heap, finished


def _finish(space: Space, search, heap, finished, start) -> BnbResult:
    elapsed = time.monotonic() - start
    upper = search.best_val
    if heap and not finished:
        upper = max(upper, max(-h[0] for h in heap))
    status = PROVED if finished or upper <= search.best_val else BOUNDS
    game = space.game_of(search.best_W) if search.best_W is not None else None
    form = None
    if space.cls == "complete" and game is not None:
        form = shift_minimal_winning_vectors(game)
    return BnbResult(search.best_val, game, search.nodes, status, search.best_val, upper, elapsed, form)


def _search(cls, n, proper, strong, r, budget, singleton_fix=None) -> BnbResult:
    start = time.monotonic()
    space = Space(cls, n, proper, strong)
    if r is not None:
        search, heap, finished = _r_search(space, r, budget)
        if search.best_W is None and finished:
            raise ValueError(f"no complete game on {n} voters has exactly {r} shift-minimal winning coalitions"
                             + (" with the requested flags" if proper or strong else ""))
        return _finish(space, search, heap, finished, start)
    if singleton_fix is None:
        singleton_fix = cls == "simple" and n >= 2 and not strong
    symmetric = cls in ("simple", "boolean") and n <= 8
    search = _Search(space, budget, symmetric, lookahead=0 if symmetric else LOOKAHEAD)
    for g in _incumbent_games(cls, n, proper, strong):
        val = threshold.mu_boolean(g).mu if cls == "boolean" else threshold.mu_simple(g).mu
        search.offer(val, g.bits)
    if singleton_fix and not proper:
        # a winning singleton leaves a game no better than the optimum on n - 1 voters
        sub = _search(cls, n - 1, proper, strong, None,
                      Budget(budget.nodes, max(0.0, budget.seconds - (time.monotonic() - start))))
        if sub.witness is not None:
            search.offer(sub.optimum, _add_null_voter(sub.witness).bits)
        search.nodes += sub.node_count
        if sub.status != PROVED:
            res = _finish(space, search, [(-sub.upper,)], False, start)
            return res
    root = space.root(vetoer_fix=True, singleton_fix=singleton_fix)
    heap, finished = search.run(root)
    return _finish(space, search, heap, finished, start)


def _add_null_voter(game: SimpleGame) -> SimpleGame:
    return SimpleGame(game.n + 1, game.minimal_winning)


def _verify_witness(cls, res: BnbResult, proper, strong, r) -> None:
    g = res.witness
    if cls == "boolean":
        mu = threshold.mu_boolean(g).mu
    else:
        mu = threshold.mu_simple(g).mu
        if cls == "complete":
            ok, _ = desirability_classes(g)
            if not ok:
                raise AssertionError("witness is not complete")
            form = shift_minimal_winning_vectors(g)
            if threshold.mu_complete(form).mu != mu:
                raise AssertionError("class-level and voter-level thresholds disagree")
            if r is not None and form.r != r:
                raise AssertionError("witness has the wrong number of shift-minimal vectors")
    if proper and not is_proper(g):
        raise AssertionError("witness is not proper")
    if strong and not is_strong(g):
        raise AssertionError("witness is not strong")
    if mu != res.optimum:
        raise AssertionError(f"witness threshold {mu} differs from the reported optimum {res.optimum}")


def max_critical_threshold(cls: str, n: int, proper: bool = False, strong: bool = False,
                           r: Optional[int] = None, budget: Optional[Budget] = None,
                           allow_large: bool = False) -> BnbResult:
    """Largest critical threshold value in the class, with a verified witness."""
    _check_flags(cls, n, proper, strong, r)
    if n > CAPS[cls] and not allow_large:
        raise ValueError(f"n={n} exceeds the {cls} cap of {CAPS[cls]}; pass allow_large to override")
    model = build_max_mu_model(cls, n, proper, strong, r) if n <= 12 else None
    budget = budget or Budget()
    if model is not None:
        res = solve_bnb(model, budget)
    else:
        res = _search(cls, n, proper, strong, r, budget)
    if res.witness is not None:
        _verify_witness(cls, res, proper, strong, r)
    return res
