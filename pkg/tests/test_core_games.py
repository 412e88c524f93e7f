from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from critval.core_games import (
    BooleanGame, Coalition, CompleteGameForm, GameFileError, SimpleGame, WeightedRepresentation,
    canonical_simple_game, construct_extremal_family, desirability_classes, dual_game,
    enumerate_complete_forms, enumerate_simple_games, expand_complete_form, format_game,
    is_proper, is_strong, mask_of, maximal_losing, members, parse_game, parse_rational,
    relabel, shift_maximal_losing_vectors, shift_minimal_winning_vectors, truth_table,
    validate_complete_form, vector_leq, winning,
)
from critval.threshold import mu_complete, mu_simple

import oracles


def game_of(n, *coalitions):
    return SimpleGame(n, tuple(mask_of(c) for c in coalitions))


# -- coalitions -------------------------------------------------------------

def test_mask_round_trip():
    assert mask_of([1, 3]) == 0b101
    assert members(0b101) == [1, 3]
    c = Coalition.of(4, [2, 4])
    assert c.members() == [2, 4]
    assert c.complement().members() == [1, 3]


def test_coalition_rejects_out_of_range():
    with pytest.raises(ValueError):
        Coalition.of(3, [4])


# -- shift-minimal and shift-maximal vectors -----------------------------------

def test_shift_minimal_vectors_of_four_voter_example():
    g = game_of(4, (1, 2), (1, 3), (1, 4), (2, 3, 4))
    form = shift_minimal_winning_vectors(g)
    assert form.class_sizes == (1, 3)
    assert form.shift_matrix == ((1, 1), (0, 3))


def test_shift_minimal_vectors_of_majority():
    form = shift_minimal_winning_vectors(WeightedRepresentation(2, (1, 1, 1)).game())
    assert form == CompleteGameForm((3,), ((2,),))


def test_form_15_4_round_trips():
    form = CompleteGameForm((15, 4), ((7, 2),))
    assert shift_minimal_winning_vectors(expand_complete_form(form)) == form


@pytest.mark.parametrize("form, expected", [
    (CompleteGameForm((15, 4), ((7, 2),)), {(8, 0), (6, 4)}),
    (CompleteGameForm((2, 5), ((1, 2),)), {(2, 0), (0, 5)}),
    (CompleteGameForm((3,), ((1,),)), {(0,)}),
])
def test_shift_maximal_losing(form, expected):
    assert set(shift_maximal_losing_vectors(form)) == expected


def test_validate_forms():
    assert validate_complete_form(CompleteGameForm((1, 3), ((1, 1), (0, 3))))[0]
    ok, report = validate_complete_form(CompleteGameForm((1, 3), ((1, 1), (1, 2))))
    assert not ok and "ii" in report
    ok, report = validate_complete_form(CompleteGameForm((2,), ((0,),)))
    assert not ok and "iii" in report


def test_expand_examples():
    g = expand_complete_form(CompleteGameForm((1, 3), ((1, 1), (0, 3))))
    assert set(g.minimal_winning) == {mask_of(c) for c in [(1, 2), (1, 3), (1, 4), (2, 3, 4)]}
    g = expand_complete_form(CompleteGameForm((3,), ((3,),)))
    assert g.minimal_winning == (0b111,)
    # brute-force classification of all 16 coalitions
    g = expand_complete_form(CompleteGameForm((2, 2), ((1, 1),)))
    expected = {s for s in range(16) if s & 0b11 and bin(s).count("1") >= 2}
    assert {s for s in range(16) if winning(g, s)} == expected


# -- enumeration ------------------------------------------------------------------

@pytest.mark.parametrize("n, count", [(1, 1), (2, 4), (3, 18), (4, 166), (5, 7579)])
def test_simple_game_counts(n, count):
    games = list(enumerate_simple_games(n))
    assert len(games) == count
    assert len({g.minimal_winning for g in games}) == count


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumeration_matches_brute_force(n):
    ours = {frozenset(s for s in range(1 << n) if winning(g, s)) for g in enumerate_simple_games(n)}
    assert ours == set(oracles.all_monotone_games(n))


def test_enumeration_cap():
    with pytest.raises(ValueError):
        next(enumerate_simple_games(6))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_complete_form_count_matches_isomorphism_filter(n):
    brute = {oracles.canonical_bits(n, w) for w in oracles.all_monotone_games(n)
             if oracles.is_complete_bits(n, w)}
    forms = list(enumerate_complete_forms(n))
    assert len(forms) == len(brute)
    expanded = {oracles.canonical_bits(n, oracles.winning_set(n, expand_complete_form(f).minimal_winning))
                for f in forms}
    assert expanded == brute


def test_single_voter_form():
    assert list(enumerate_complete_forms(1)) == [CompleteGameForm((1,), ((1,),))]


@pytest.mark.parametrize("n", range(1, 7))
def test_forms_valid_and_round_trip(n):
    for form in enumerate_complete_forms(n):
        assert validate_complete_form(form)[0]
        g = expand_complete_form(form)
        complete, classes = desirability_classes(g)
        assert complete and tuple(len(c) for c in classes) == form.class_sizes
        assert shift_minimal_winning_vectors(g) == form


@pytest.mark.parametrize("n", range(1, 7))
def test_winning_vectors_up_closed(n):
    for form in enumerate_complete_forms(n):
        grid = _grid(form.class_sizes)
        wins = [a for a in grid if any(vector_leq(m, a) for m in form.shift_matrix)]
        for a in wins:
            for b in grid:
                if vector_leq(a, b):
                    assert b in wins


def _grid(sizes):
    out = [()]
    for s in sizes:
        out = [p + (k,) for p in out for k in range(s + 1)]
    return out


vectors = st.lists(st.integers(0, 3), min_size=3, max_size=3).map(tuple)


@given(vectors, vectors, vectors)
def test_vector_order_is_partial_order(a, b, c):
    assert vector_leq(a, a)
    if vector_leq(a, b) and vector_leq(b, a):
        # prefix sums agree, so the vectors agree
        assert a == b
    if vector_leq(a, b) and vector_leq(b, c):
        assert vector_leq(a, c)


# -- queries ---------------------------------------------------------------------

def test_proper_strong_examples():
    maj = WeightedRepresentation(2, (1, 1, 1)).game()
    assert is_proper(maj) and is_strong(maj)
    assert not is_proper(game_of(4, (1, 2), (3, 4)))
    una = game_of(3, (1, 2, 3))
    assert is_proper(una) and not is_strong(una)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_strong_iff_dual_proper(n):
    for g in enumerate_simple_games(n):
        assert is_strong(g) == is_proper(dual_game(g))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_antichains_and_reconstruction(n):
    for g in enumerate_simple_games(n):
        win = oracles.winning_set(n, g.minimal_winning)
        ml = maximal_losing(g)
        assert sorted(ml) == sorted(oracles.maximal_losing(n, win))
        for a in ml:
            for b in ml:
                assert a == b or a & b != a
        # losing coalitions are exactly those below a maximal losing one
        rebuilt = {s for s in range(1 << n) if not any(s & t == s for t in ml)}
        assert rebuilt == win


def test_truth_table_and_relabel():
    g = game_of(3, (1, 2), (3,))
    tt = truth_table(g)
    assert isinstance(tt, BooleanGame)
    assert tt.winning == frozenset(oracles.winning_set(3, g.minimal_winning))
    h = relabel(g, [3, 1, 2])
    assert set(h.minimal_winning) == {mask_of([1]), mask_of([2, 3])}
    assert canonical_simple_game(g) == canonical_simple_game(h)


def test_desirability_not_complete():
    complete, classes = desirability_classes(game_of(4, (1, 2), (3, 4)))
    assert not complete and classes == ()


# -- extremal families -------------------------------------------------------------

def test_even_chain_eight():
    g = construct_extremal_family("even_chain", 8)
    for pair in [(1, 2), (3, 4), (5, 6), (7, 8)]:
        assert winning(g, mask_of(pair))
    assert mu_simple(g).mu == 2


def test_odd_chain_five():
    assert mu_simple(construct_extremal_family("odd_chain", 5)).mu == Fraction(6, 5)


def test_t2r1_family():
    form = construct_extremal_family("t2r1", None, 2, 5, 1, 2)
    assert mu_complete(form).mu == Fraction(10, 9)
    with pytest.raises(ValueError):
        construct_extremal_family("t2r1", None, 2, 5, 1, 4)


@pytest.mark.parametrize("n", [6, 8])
def test_strong_even_family(n):
    g = construct_extremal_family("strong_even", n)
    assert is_strong(g)
    assert mu_simple(g).mu >= Fraction(n // 2, 2)


def test_strong_odd_family():
    g = construct_extremal_family("strong_odd", 9)
    assert is_strong(g)
    assert mu_simple(g).mu > 1


# -- file format --------------------------------------------------------------------

def test_parse_rational():
    assert parse_rational("6/4") == Fraction(3, 2)
    assert parse_rational("-2") == -2
    for bad in ["1/0", "1/-2", "x", "1.5"]:
        with pytest.raises(ValueError):
            parse_rational(bad)


GAMES = [
    game_of(5, (1, 2), (2, 4), (3, 4), (2, 5), (3, 5)),
    WeightedRepresentation(Fraction(7, 2), (2, 1, 1, Fraction(1, 2))),
    CompleteGameForm((1, 3), ((1, 1), (0, 3))),
    BooleanGame(3, frozenset({1, 2, 3})),
]


@pytest.mark.parametrize("game", GAMES)
def test_format_round_trip(game):
    text = format_game(game)
    assert parse_game(text) == game
    assert format_game(parse_game(text)) == text


def test_parse_errors_carry_line_numbers():
    with pytest.raises(GameFileError) as info:
        parse_game("game simple\nvoters 3\n# note\nwinning-min {1 2} {4}\n")
    assert info.value.line == 4
    with pytest.raises(GameFileError):
        parse_game("game unknown\n")
    with pytest.raises(GameFileError):
        parse_game("game weighted\nquota 1/0\nweights 1 1\n")


def test_parse_ignores_comments_and_normalises():
    g = parse_game("# header\ngame weighted   # trailing\nquota 4/2\nweights 2/2 1\n")
    assert g == WeightedRepresentation(2, (1, 1))
