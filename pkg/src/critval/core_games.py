"""Coalitions, Boolean/simple/complete games and their combinatorial structure.

Coalitions are bitmasks: voter ``i`` (1-based) is bit ``i-1``.  Families of
coalitions over ``n`` voters are Python ints with one bit per mask, so set
algebra over the whole lattice is a handful of big-integer operations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, permutations
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

MAX_VOTERS = 62
MAX_LATTICE_VOTERS = 20


def popcount(x: int) -> int:
    return bin(x).count("1")


def iter_bits(bits: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def members(mask: int) -> list:
    return [i + 1 for i in iter_bits(mask)]


def mask_of(voters: Iterable[int]) -> int:
    m = 0
    for v in voters:
        if v < 1:
            raise ValueError(f"voter {v} is not a positive index")
        m |= 1 << (v - 1)
    return m


@dataclass(frozen=True, order=True)
class Coalition:
    mask: int
    n: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VOTERS:
            raise ValueError(f"voter count {self.n} outside 0..{MAX_VOTERS}")
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask} uses bits beyond {self.n} voters")

    @classmethod
    def of(cls, n: int, voters: Iterable[int]) -> "Coalition":
        return cls(mask_of(voters), n)

    def members(self) -> list:
        return members(self.mask)

    def __len__(self) -> int:
        return popcount(self.mask)

    def __contains__(self, voter: int) -> bool:
        return 1 <= voter <= self.n and bool(self.mask >> (voter - 1) & 1)

    def _same(self, other: "Coalition") -> None:
        if other.n != self.n:
            raise ValueError("coalitions over different voter sets")

    def issubset(self, other: "Coalition") -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def issuperset(self, other: "Coalition") -> bool:
        return other.issubset(self)

    def union(self, other: "Coalition") -> "Coalition":
        self._same(other)
        return Coalition(self.mask | other.mask, self.n)

    def intersection(self, other: "Coalition") -> "Coalition":
        self._same(other)
        return Coalition(self.mask & other.mask, self.n)

    def complement(self) -> "Coalition":
        return Coalition(((1 << self.n) - 1) ^ self.mask, self.n)

    def __str__(self) -> str:
        return "{" + " ".join(map(str, self.members())) + "}"


def _mask(s: Union[int, Coalition], n: int) -> int:
    if isinstance(s, Coalition):
        if s.n != n:
            raise ValueError(f"coalition over {s.n} voters used with a game on {n}")
        return s.mask
    if s < 0 or s >> n:
        raise ValueError(f"mask {s} does not fit {n} voters")
    return s


# ---------------------------------------------------------------------------
# lattice toolkit over all 2^n coalitions


def _bits_from_bool(flags: np.ndarray) -> int:
    """Bitset with bit s set iff ``flags[s]``."""
    return int.from_bytes(np.packbits(flags.astype(bool), bitorder="little").tobytes(), "little")


class Lattice:
    """Bitset operations over the coalition lattice of ``n`` voters.

    ``order`` is ``"subset"`` (inclusion) or ``"shift"`` (prefix-count
    dominance with voter 1 most influential)."""

    def __init__(self, n: int):
        if not 0 <= n <= MAX_LATTICE_VOTERS:
            raise ValueError(f"lattice operations support at most {MAX_LATTICE_VOTERS} voters")
        self.n = n
        self.size = 1 << n
        self.full = self.size - 1
        self.all = (1 << self.size) - 1
        masks = np.arange(self.size, dtype=np.int64)
        self.with_bit = [_bits_from_bool(masks >> i & 1) for i in range(n)]
        self.without_bit = [self.all ^ w for w in self.with_bit]
        # swap families for the shift order: bit j+1 set and bit j clear (and vice versa)
        self.hi_not_lo = []
        self.lo_not_hi = []
        for j in range(n - 1):
            self.hi_not_lo.append(self.with_bit[j + 1] & self.without_bit[j])
            self.lo_not_hi.append(self.with_bit[j] & self.without_bit[j + 1])
        counts = sum((masks >> i & 1 for i in range(n)), np.zeros(self.size, dtype=np.int64))
        self.size_bits = [_bits_from_bool(counts == k) for k in range(n + 1)]

    # one-step images
    def up_step(self, bits: int, order: str) -> int:
        out = 0
        if order == "subset":
            for i in range(self.n):
                out |= (bits & self.without_bit[i]) << (1 << i)
            return out
        if self.n:
            last = self.n - 1
            out |= (bits & self.without_bit[last]) << (1 << last)
        for j in range(self.n - 1):
            out |= (bits & self.hi_not_lo[j]) >> (1 << j)
        return out

    def down_step(self, bits: int, order: str) -> int:
        out = 0
        if order == "subset":
            for i in range(self.n):
                out |= (bits & self.with_bit[i]) >> (1 << i)
            return out
        if self.n:
            last = self.n - 1
            out |= (bits & self.with_bit[last]) >> (1 << last)
        for j in range(self.n - 1):
            out |= (bits & self.lo_not_hi[j]) << (1 << j)
        return out

    def up_closure(self, bits: int, order: str) -> int:
        if order == "subset":
            for i in range(self.n):
                bits |= (bits & self.without_bit[i]) << (1 << i)
            return bits
        while True:
            nxt = bits | self.up_step(bits, order)
            if nxt == bits:
                return bits
            bits = nxt

    def down_closure(self, bits: int, order: str) -> int:
        if order == "subset":
            for i in range(self.n):
                bits |= (bits & self.with_bit[i]) >> (1 << i)
            return bits
        while True:
            nxt = bits | self.down_step(bits, order)
            if nxt == bits:
                return bits
            bits = nxt

    def minimal(self, upset: int, order: str) -> int:
        """Minimal elements of an up-closed family."""
        return upset & ~self.up_step(upset, order)

    def maximal(self, downset: int, order: str) -> int:
        """Maximal elements of a down-closed family."""
        return downset & ~self.down_step(downset, order)

    def complement_map(self, bits: int) -> int:
        """Family {N \\ S : S in bits}."""
        if not bits:
            return 0
        text = format(bits, f"0{self.size}b")
        return int(text[::-1], 2)

    def leq(self, s: int, t: int, order: str) -> bool:
        if order == "subset":
            return s & ~t == 0
        ps = pt = 0
        for i in range(self.n):
            ps += s >> i & 1
            pt += t >> i & 1
            if ps > pt:
                return False
        return True


@lru_cache(maxsize=None)
def lattice(n: int) -> Lattice:
    return Lattice(n)


def prefix_counts(mask: int, n: int) -> tuple:
    out, c = [], 0
    for i in range(n):
        c += mask >> i & 1
        out.append(c)
    return tuple(out)


def shift_leq(s: int, t: int, n: int) -> bool:
    """S precedes-or-equals T in the per-voter shift order."""
    ps = pt = 0
    for i in range(n):
        ps += s >> i & 1
        pt += t >> i & 1
        if ps > pt:
            return False
    return True


# ---------------------------------------------------------------------------
# games


@dataclass(frozen=True)
class BooleanGame:
    """Arbitrary f: 2^N -> {0,1} with f(empty)=0, given by its winning masks."""

    n: int
    winning: frozenset

    def __post_init__(self):
        if not 0 <= self.n <= MAX_LATTICE_VOTERS:
            raise ValueError(f"Boolean games support at most {MAX_LATTICE_VOTERS} voters")
        object.__setattr__(self, "winning", frozenset(int(s) for s in self.winning))
        for s in self.winning:
            if s < 0 or s >> self.n:
                raise ValueError(f"mask {s} does not fit {self.n} voters")
        if 0 in self.winning:
            raise ValueError("the empty coalition must be losing")

    @cached_property
    def bits(self) -> int:
        out = 0
        for s in self.winning:
            out |= 1 << s
        return out

    @classmethod
    def from_bits(cls, n: int, bits: int) -> "BooleanGame":
        return cls(n, frozenset(iter_bits(bits)))


def _is_antichain(n: int, masks: tuple) -> bool:
    if n <= 12 or len(masks) < 64:
        return not any(a & b == a or a & b == b for a, b in combinations(masks, 2))
    lat = lattice(n)
    bits = 0
    for s in masks:
        bits |= 1 << s
    above = lat.up_closure(lat.up_step(bits, "subset"), "subset")
    return not bits & above


@dataclass(frozen=True)
class SimpleGame:
    """Monotone game given by its minimal winning coalitions (ascending masks)."""

    n: int
    minimal_winning: tuple

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VOTERS:
            raise ValueError(f"voter count outside 0..{MAX_VOTERS}")
        mins = tuple(sorted(set(int(s) for s in self.minimal_winning)))
        object.__setattr__(self, "minimal_winning", mins)
        if not mins:
            raise ValueError("a simple game needs at least one winning coalition")
        for s in mins:
            if s < 0 or s >> self.n:
                raise ValueError(f"mask {s} does not fit {self.n} voters")
            if s == 0:
                raise ValueError("the empty coalition must be losing")
        if not _is_antichain(self.n, mins):
            raise ValueError("minimal winning coalitions must form an antichain")

    @classmethod
    def from_generators(cls, n: int, masks: Iterable[int]) -> "SimpleGame":
        """Game whose winning coalitions are the supersets of ``masks``."""
        masks = set(masks)
        mins = [s for s in masks if not any(t != s and t & s == t for t in masks)]
        return cls(n, tuple(mins))

    @classmethod
    def from_bits(cls, n: int, bits: int) -> "SimpleGame":
        lat = lattice(n)
        up = lat.up_closure(bits, "subset")
        return cls(n, tuple(iter_bits(lat.minimal(up, "subset"))))

    @cached_property
    def bits(self) -> int:
        out = 0
        for s in self.minimal_winning:
            out |= 1 << s
        return lattice(self.n).up_closure(out, "subset")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1


@dataclass(frozen=True)
class WeightedRepresentation:
    quota: Fraction
    weights: tuple

    def __post_init__(self):
        q = Fraction(self.quota)
        ws = tuple(Fraction(w) for w in self.weights)
        object.__setattr__(self, "quota", q)
        object.__setattr__(self, "weights", ws)
        if q <= 0:
            raise ValueError("quota must be positive")
        if any(w < 0 for w in ws):
            raise ValueError("weights must be non-negative")
        if sum(ws) < q:
            raise ValueError("the grand coalition must reach the quota")

    @property
    def n(self) -> int:
        return len(self.weights)

    def game(self) -> SimpleGame:
        n = self.n
        if n > MAX_LATTICE_VOTERS:
            raise ValueError("too many voters to expand")
        win = 0
        for s in range(1 << n):
            if sum((self.weights[i] for i in iter_bits(s)), Fraction(0)) >= self.quota:
                win |= 1 << s
        return SimpleGame.from_bits(n, win)


@dataclass(frozen=True)
class CompleteGameForm:
    class_sizes: tuple
    shift_matrix: tuple

    def __post_init__(self):
        object.__setattr__(self, "class_sizes", tuple(int(x) for x in self.class_sizes))
        object.__setattr__(self, "shift_matrix", tuple(tuple(int(x) for x in row) for row in self.shift_matrix))

    @property
    def n(self) -> int:
        return sum(self.class_sizes)

    @property
    def t(self) -> int:
        return len(self.class_sizes)

    @property
    def r(self) -> int:
        return len(self.shift_matrix)


Game = Union[BooleanGame, SimpleGame]


def vector_leq(a: Sequence[int], b: Sequence[int]) -> bool:
    """Prefix-sum dominance: a precedes-or-equals b."""
    pa = pb = 0
    for x, y in zip(a, b):
        pa += x
        pb += y
        if pa > pb:
            return False
    return True


def vector_incomparable(a, b) -> bool:
    return not vector_leq(a, b) and not vector_leq(b, a)


# ---------------------------------------------------------------------------
# basic queries


def winning(game: Game, s: Union[int, Coalition]) -> bool:
    m = _mask(s, game.n)
    if isinstance(game, BooleanGame):
        return m in game.winning
    return any(w & m == w for w in game.minimal_winning)


def winning_bits(game: Game) -> int:
    return game.bits


def maximal_losing(game: SimpleGame) -> tuple:
    lat = lattice(game.n)
    lose = lat.all & ~game.bits
    return tuple(iter_bits(lat.maximal(lose, "subset")))


def losing_bits(game: Game) -> int:
    return lattice(game.n).all & ~game.bits


def truth_table(game: SimpleGame) -> BooleanGame:
    return BooleanGame.from_bits(game.n, game.bits)


def is_proper(game: Game) -> bool:
    lat = lattice(game.n)
    w = game.bits
    return w & lat.complement_map(w) == 0


def is_strong(game: Game) -> bool:
    lat = lattice(game.n)
    lose = lat.all & ~game.bits
    return lose & lat.complement_map(lose) == 0


def dual_game(game: SimpleGame) -> SimpleGame:
    """S wins in the dual iff N \\ S loses in ``game``."""
    lat = lattice(game.n)
    return SimpleGame.from_bits(game.n, lat.complement_map(lat.all & ~game.bits))


def is_monotone_bits(n: int, bits: int) -> bool:
    return lattice(n).up_closure(bits, "subset") == bits


def relabel(game: SimpleGame, order: Sequence[int]) -> SimpleGame:
    """New game where new voter k+1 plays the role of old voter ``order[k]``."""
    pos = {old: new for new, old in enumerate(order, start=1)}
    mins = [mask_of(pos[v] for v in members(s)) for s in game.minimal_winning]
    return SimpleGame(game.n, tuple(mins))


def _at_least_as_desirable(game: SimpleGame, i: int, j: int) -> bool:
    """Isbell relation: swapping j out for i never turns a winner into a loser."""
    lat = lattice(game.n)
    w = game.bits
    sel = w & lat.with_bit[j] & lat.without_bit[i]
    delta = (1 << i) - (1 << j)  # mask S -> S - 2^j + 2^i
    moved = sel << delta if delta > 0 else sel >> -delta
    return moved & ~w == 0


def desirability_classes(game: SimpleGame) -> tuple:
    """Return ``(is_complete, classes)``.  Classes are tuples of 1-based voters,
    ordered from most to least influential; empty when the relation is not total."""
    n = game.n
    rel = [[_at_least_as_desirable(game, i, j) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if not (rel[i][j] or rel[j][i]):
                return False, ()
    score = [sum(rel[i]) for i in range(n)]
    groups = {}
    for i in range(n):
        groups.setdefault(score[i], []).append(i + 1)
    classes = tuple(tuple(groups[s]) for s in sorted(groups, reverse=True))
    return True, classes


# ---------------------------------------------------------------------------
# complete games and the (n~, M) parameterisation


def _grid(sizes: Sequence[int]) -> list:
    out = [()]
    for s in sizes:
        out = [v + (k,) for v in out for k in range(s + 1)]
    return out


def _lower_neighbours(a: tuple, sizes: tuple) -> Iterator[tuple]:
    t = len(a)
    for j in range(t):
        if a[j] > 0:
            yield a[:j] + (a[j] - 1,) + a[j + 1:]
            if j + 1 < t and a[j + 1] < sizes[j + 1]:
                yield a[:j] + (a[j] - 1, a[j + 1] + 1) + a[j + 2:]


def _upper_neighbours(a: tuple, sizes: tuple) -> Iterator[tuple]:
    t = len(a)
    for j in range(t):
        if a[j] < sizes[j]:
            yield a[:j] + (a[j] + 1,) + a[j + 1:]
            if j + 1 < t and a[j + 1] > 0:
                yield a[:j] + (a[j] + 1, a[j + 1] - 1) + a[j + 2:]


def _lex_desc(rows) -> tuple:
    return tuple(sorted(set(tuple(r) for r in rows), reverse=True))


def validate_complete_form(form: CompleteGameForm) -> tuple:
    """Return ``(ok, report)``; the report names the first violated condition."""
    sizes, rows = form.class_sizes, form.shift_matrix
    t = len(sizes)
    if t == 0 or any(s < 1 for s in sizes):
        return False, "class sizes must be positive"
    if not rows:
        return False, "at least one shift-minimal winning vector is required"
    for i, row in enumerate(rows):
        if len(row) != t:
            return False, f"row {i + 1} has {len(row)} entries, expected {t}"
        for j, x in enumerate(row):
            if not 0 <= x <= sizes[j]:
                return False, f"(i) violated: m[{i + 1},{j + 1}]={x} outside 0..{sizes[j]}"
    for i in range(len(rows)):
        for k in range(i + 1, len(rows)):
            if not vector_incomparable(rows[i], rows[k]):
                return False, f"(ii) violated: rows {i + 1} and {k + 1} are comparable"
    if t == 1:
        if rows[0][0] <= 0:
            return False, "(iii) violated: m[1,1] must be positive when t=1"
    else:
        for j in range(t - 1):
            if not any(row[j] > 0 and row[j + 1] < sizes[j + 1] for row in rows):
                return False, f"(iii) violated for classes {j + 1} and {j + 2}"
    for i in range(len(rows) - 1):
        if not rows[i] > rows[i + 1]:
            return False, f"(iv) violated: rows {i + 1} and {i + 2} not in decreasing lexicographic order"
    return True, "valid"


def _require_valid(form: CompleteGameForm) -> None:
    ok, report = validate_complete_form(form)
    if not ok:
        raise ValueError(f"invalid complete game form: {report}")


def vector_wins(form: CompleteGameForm, a: Sequence[int]) -> bool:
    return any(vector_leq(row, a) for row in form.shift_matrix)


def shift_maximal_losing_vectors(form: CompleteGameForm) -> tuple:
    _require_valid(form)
    sizes = form.class_sizes
    out = []
    for a in _grid(sizes):
        if vector_wins(form, a):
            continue
        if all(vector_wins(form, b) for b in _upper_neighbours(a, sizes)):
            out.append(a)
    return _lex_desc(out)


def class_masks(sizes: Sequence[int]) -> list:
    out, start = [], 0
    for s in sizes:
        out.append(((1 << s) - 1) << start)
        start += s
    return out


def expand_complete_form(form: CompleteGameForm) -> SimpleGame:
    """Concrete game on voters 1..n, classes taking consecutive voters."""
    _require_valid(form)
    n = form.n
    if n > MAX_LATTICE_VOTERS:
        raise ValueError("too many voters to expand")
    masks = np.arange(1 << n, dtype=np.int64)
    prefix = []
    acc = np.zeros(1 << n, dtype=np.int64)
    for cm in class_masks(form.class_sizes):
        for i in iter_bits(cm):
            acc = acc + (masks >> i & 1)
        prefix.append(acc)
    wins = np.zeros(1 << n, dtype=bool)
    for row in form.shift_matrix:
        need = np.cumsum(row)
        ok = np.ones(1 << n, dtype=bool)
        for p, k in zip(prefix, need):
            ok &= p >= k
        wins |= ok
    return SimpleGame.from_bits(n, _bits_from_bool(wins))


def shift_minimal_winning_vectors(game: SimpleGame) -> CompleteGameForm:
    complete, classes = desirability_classes(game)
    if not complete:
        raise ValueError("game is not complete")
    sizes = tuple(len(c) for c in classes)

    def wins(a):
        voters = [v for c, k in zip(classes, a) for v in c[:k]]
        return winning(game, mask_of(voters))

    rows = [a for a in _grid(sizes) if wins(a) and not any(wins(b) for b in _lower_neighbours(a, sizes))]
    return CompleteGameForm(sizes, _lex_desc(rows))


def complete_form_of_bits(n: int, bits: int) -> Optional[CompleteGameForm]:
    """Form of the complete game with winning family ``bits`` (None if not complete)."""
    game = SimpleGame.from_bits(n, bits)
    complete, _ = desirability_classes(game)
    return shift_minimal_winning_vectors(game) if complete else None


# ---------------------------------------------------------------------------
# enumeration oracles


@lru_cache(maxsize=None)
def _monotone_functions(n: int) -> tuple:
    """All monotone functions on n variables as 2^n-bit truth tables (incl. constants)."""
    if n == 0:
        return (0, 1)
    prev = _monotone_functions(n - 1)
    shift = 1 << (n - 1)
    out = []
    for f0 in prev:
        for f1 in prev:
            if f0 & ~f1 == 0:
                out.append(f0 | (f1 << shift))
    return tuple(sorted(out))


def enumerate_simple_games(n: int, expensive: bool = False) -> Iterator[SimpleGame]:
    """Every simple game on ``n`` labelled voters exactly once."""
    cap = 6 if expensive else 5
    if not 1 <= n <= cap:
        raise ValueError(f"enumeration supports 1 <= n <= {cap}")
    full_bit = 1 << ((1 << n) - 1)
    for f in _monotone_functions(n):
        if f & 1 or not f & full_bit:
            continue
        yield SimpleGame.from_bits(n, f)


def compositions(n: int) -> Iterator[tuple]:
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def enumerate_complete_forms(n: int) -> Iterator[CompleteGameForm]:
    """One (n~, M) form per isomorphism class of complete simple games."""
    if not 1 <= n <= 8:
        raise ValueError("complete form enumeration supports 1 <= n <= 8")
    for sizes in compositions(n):
        grid = _grid(sizes)
        g = len(grid)
        comparable = []
        for a in grid:
            bits = 0
            for k, b in enumerate(grid):
                if vector_leq(a, b) or vector_leq(b, a):
                    bits |= 1 << k
            comparable.append(bits)
        t = len(sizes)

        def condition_iii(rows):
            if t == 1:
                return rows[0][0] > 0
            return all(any(r[j] > 0 and r[j + 1] < sizes[j + 1] for r in rows) for j in range(t - 1))

        stack = [((1 << g) - 1, [])]
        while stack:
            avail, chosen = stack.pop()
            if chosen:
                rows = [grid[k] for k in chosen]
                if condition_iii(rows):
                    yield CompleteGameForm(sizes, _lex_desc(rows))
            start = chosen[-1] + 1 if chosen else 0
            for k in reversed(list(iter_bits(avail >> start << start))):
                stack.append((avail & ~comparable[k], chosen + [k]))


def canonical_simple_game(game: SimpleGame) -> tuple:
    """Isomorphism invariant: lexicographically least relabelled antichain."""
    best = None
    for perm in permutations(range(1, game.n + 1)):
        key = tuple(sorted(mask_of(perm[v - 1] for v in members(s)) for s in game.minimal_winning))
        if best is None or key < best:
            best = key
    return best


# ---------------------------------------------------------------------------
# extremal constructions


def _even_chain(n: int) -> SimpleGame:
    if n < 2 or n % 2:
        raise ValueError("even_chain needs an even n >= 2")
    return SimpleGame(n, tuple(mask_of((2 * i - 1, 2 * i)) for i in range(1, n // 2 + 1)))


def _odd_chain(n: int) -> SimpleGame:
    if n < 3 or n % 2 == 0:
        raise ValueError("odd_chain needs an odd n >= 3")
    return SimpleGame(n, tuple(mask_of((i, i + 1)) for i in range(1, n)))


def _strong_even(n: int) -> SimpleGame:
    """Strong game on 2k voters with threshold k/2.

    Pairs {2i-1, 2i} win.  Transversals picking one voter per pair are split
    into complementary halves by a self-dual parity rule that is balanced in
    every coordinate; the losing half is prescribed and everything not below
    a prescribed loser wins."""
    if n < 6 or n % 2:
        raise ValueError("strong_even needs an even n >= 6")
    k = n // 2
    lat = lattice(n)
    parity_len = k if k % 2 else k - 1
    losers = 0
    for choice in range(1 << k):
        if popcount(choice & ((1 << parity_len) - 1)) % 2 == 1:
            voters = [2 * i + 1 + (choice >> i & 1) for i in range(k)]
            losers |= 1 << mask_of(voters)
    lose = lat.down_closure(losers, "subset")
    return SimpleGame.from_bits(n, lat.all & ~lose)


def _strong_odd(n: int) -> SimpleGame:
    """Strong game on 2k+5 voters (k >= 2) built from prescribed coalitions."""
    if n < 9 or n % 2 == 0:
        raise ValueError("strong_odd needs an odd n >= 9")
    k = (n - 5) // 2
    lat = lattice(n)
    B = [2 * i - 1 for i in range(1, k + 2)]
    R = [2 * i for i in range(1, k + 1)]
    a, b, c, d = 2 * k + 2, 2 * k + 3, 2 * k + 4, 2 * k + 5
    win = [mask_of((i, i + 1)) for i in range(1, 2 * k + 1)]
    win += [mask_of([b, d] + R), mask_of([a, c] + R), mask_of([a, d] + B), mask_of([b, c] + B)]
    lose = [mask_of([a, c] + B), mask_of([b, d] + B), mask_of([b, c] + R), mask_of([a, d] + R)]
    lbits = 0
    for s in lose:
        lbits |= 1 << s
    down = lat.down_closure(lbits, "subset")
    game = SimpleGame.from_bits(n, lat.all & ~down)
    if not all(winning(game, s) for s in win) or not is_strong(game):
        raise ValueError("prescribed coalitions admit no strong completion of this shape")
    return game


def construct_extremal_family(kind: str, n: Optional[int] = None, *params: int):
    """Known extremal constructions.

    ``even_chain``/``odd_chain``: pair chains with threshold floor(n^2/4)/n.
    ``strong_even``/``strong_odd``: strong games with large threshold.
    ``t2r1``: ``construct_extremal_family("t2r1", None, n1, n2, a, b)``.
    """
    if kind == "even_chain":
        return _even_chain(n)
    if kind == "odd_chain":
        return _odd_chain(n)
    if kind == "strong_even":
        return _strong_even(n)
    if kind == "strong_odd":
        return _strong_odd(n)
    if kind == "t2r1":
        if len(params) != 4:
            raise ValueError("t2r1 needs n1, n2, a, b")
        n1, n2, a, b = params
        if n is not None and n != n1 + n2:
            raise ValueError("n must equal n1 + n2")
        if not (1 <= a < n1 and 2 <= b <= n2 - 2):
            raise ValueError("t2r1 needs 1 <= a < n1 and 2 <= b <= n2 - 2")
        return CompleteGameForm((n1, n2), ((a, b),))
    raise ValueError(f"unknown family {kind!r}")


def dictator(n: int) -> SimpleGame:
    return SimpleGame(n, (1,))


# ---------------------------------------------------------------------------
# game file format


class GameFileError(ValueError):
    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


_RATIONAL = re.compile(r"^([+-]?\d+)(?:/([+-]?\d+))?$")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL.match(text.strip())
    if not m:
        raise ValueError(f"not a rational number: {text!r}")
    p = int(m.group(1))
    q = int(m.group(2)) if m.group(2) is not None else 1
    if q <= 0:
        raise ValueError(f"denominator must be positive in {text!r}")
    return Fraction(p, q)


def _groups(text: str, open_ch: str, close_ch: str, line: int) -> list:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        if text[pos] != open_ch:
            raise GameFileError(f"expected {open_ch!r} but found {text[pos]!r}", line)
        end = text.find(close_ch, pos)
        if end < 0:
            raise GameFileError(f"unterminated {open_ch!r}", line)
        inner = text[pos + 1:end].replace(",", " ").split()
        try:
            out.append([int(x) for x in inner])
        except ValueError:
            raise GameFileError(f"non-integer entry in {text[pos:end + 1]!r}", line) from None
        pos = end + 1
    return out


def parse_game(text: str):
    """Parse the line-oriented game format; returns the matching game object."""
    kind = None
    fields = {}
    seen_line = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "game":
            if kind is not None:
                raise GameFileError("duplicate 'game' line", no)
            if rest not in ("simple", "weighted", "complete", "boolean"):
                raise GameFileError(f"unknown game kind {rest!r}", no)
            kind = rest
            continue
        if kind is None:
            raise GameFileError("first entry must be 'game <kind>'", no)
        seen_line.setdefault(key, no)
        if key in ("voters", "quota"):
            if key in fields:
                raise GameFileError(f"duplicate {key!r}", no)
            fields[key] = (rest, no)
        elif key in ("weights", "classes"):
            fields.setdefault(key, ([], no))[0].extend(rest.split())
        elif key in ("winning-min", "winning"):
            fields.setdefault(key, ([], no))[0].extend(_groups(rest, "{", "}", no))
        elif key == "shift-min":
            fields.setdefault(key, ([], no))[0].extend(_groups(rest, "(", ")", no))
        else:
            raise GameFileError(f"unknown keyword {key!r}", no)
    if kind is None:
        raise GameFileError("missing 'game <kind>' line")
    allowed = {
        "simple": {"voters", "winning-min"},
        "weighted": {"quota", "weights"},
        "complete": {"classes", "shift-min"},
        "boolean": {"voters", "winning"},
    }[kind]
    for key in fields:
        if key not in allowed:
            raise GameFileError(f"{key!r} is not valid for a {kind} game", seen_line[key])
    for key in allowed:
        if key not in fields and not (kind == "boolean" and key == "winning"):
            raise GameFileError(f"missing {key!r} for a {kind} game")

    def voters():
        text_n, no = fields["voters"]
        try:
            n = int(text_n)
        except ValueError:
            raise GameFileError(f"bad voter count {text_n!r}", no) from None
        if not 1 <= n <= MAX_VOTERS:
            raise GameFileError(f"voter count {n} outside 1..{MAX_VOTERS}", no)
        return n, no

    def coalitions(key, n):
        groups, no = fields.get(key, ([], 0))
        out = []
        for g in groups:
            if any(not 1 <= v <= n for v in g):
                raise GameFileError(f"voter index outside 1..{n} in {g}", no)
            out.append(mask_of(g))
        return out, no

    try:
        if kind == "simple":
            n, _ = voters()
            mins, no = coalitions("winning-min", n)
            try:
                return SimpleGame.from_generators(n, mins)
            except ValueError as exc:
                raise GameFileError(str(exc), no) from None
        if kind == "boolean":
            n, _ = voters()
            wins, no = coalitions("winning", n)
            try:
                return BooleanGame(n, frozenset(wins))
            except ValueError as exc:
                raise GameFileError(str(exc), no) from None
        if kind == "weighted":
            qtext, qno = fields["quota"]
            wtexts, wno = fields["weights"]
            try:
                q = parse_rational(qtext)
            except ValueError as exc:
                raise GameFileError(str(exc), qno) from None
            try:
                ws = [parse_rational(w) for w in wtexts]
            except ValueError as exc:
                raise GameFileError(str(exc), wno) from None
            try:
                return WeightedRepresentation(q, tuple(ws))
            except ValueError as exc:
                raise GameFileError(str(exc), qno) from None
        sizes_text, cno = fields["classes"]
        try:
            sizes = tuple(int(x) for x in sizes_text)
        except ValueError:
            raise GameFileError("class sizes must be integers", cno) from None
        rows, sno = fields["shift-min"]
        form = CompleteGameForm(sizes, _lex_desc(rows))
        ok, report = validate_complete_form(form)
        if not ok:
            raise GameFileError(report, sno)
        return form
    except GameFileError:
        raise


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_coalition(mask: int) -> str:
    return "{" + " ".join(map(str, members(mask))) + "}"


def format_game(game) -> str:
    if isinstance(game, SimpleGame):
        return (f"game simple\nvoters {game.n}\nwinning-min "
                + " ".join(format_coalition(s) for s in game.minimal_winning) + "\n")
    if isinstance(game, BooleanGame):
        return (f"game boolean\nvoters {game.n}\nwinning "
                + " ".join(format_coalition(s) for s in sorted(game.winning))).rstrip() + "\n"
    if isinstance(game, WeightedRepresentation):
        return (f"game weighted\nquota {_fmt_q(game.quota)}\nweights "
                + " ".join(_fmt_q(w) for w in game.weights) + "\n")
    if isinstance(game, CompleteGameForm):
        rows = " ".join("(" + " ".join(map(str, r)) + ")" for r in game.shift_matrix)
        return f"game complete\nclasses {' '.join(map(str, game.class_sizes))}\nshift-min {rows}\n"
    raise TypeError(f"cannot format {type(game).__name__}")
