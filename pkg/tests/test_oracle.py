"""Finite-model semantics, used as an independent check on the prover."""
import pytest

from pasl.config import preset
from pasl.formula import parse
from pasl.oracle import (
    FrameModel, assignments, check_conditions, enumerate_frames,
    find_countermodel, format_model, parse_model, satisfies,
    sequent_falsifiable,
)
from pasl.sequent import EPS, Sequent

BBI = preset("bbi")
PASL = preset("pasl")
PASL_D = preset("pasl+d")
BBI_IU = preset("bbi+iu")
BBI_S = preset("bbi+s")

# Z2: {0,1} with 1+1=0, the standard two-element group frame
Z2 = frozenset({(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)})
# the two-element frame where 1 is not composable with itself
HALF = frozenset({(0, 0, 0), (0, 1, 1), (1, 0, 1)})


def test_satisfies_basics():
    m = FrameModel(2, Z2, {"a": frozenset({1})})
    assert satisfies(m, 1, parse("a"))
    assert not satisfies(m, 0, parse("a"))
    assert satisfies(m, 0, parse("emp"))
    assert not satisfies(m, 1, parse("emp"))
    assert satisfies(m, 1, parse("true"))
    assert not satisfies(m, 1, parse("false"))
    assert satisfies(m, 0, parse("~a"))
    assert satisfies(m, 1, parse("a \\/ b"))
    assert satisfies(m, 1, parse("b -> a"))


def test_satisfies_star_and_wand():
    m = FrameModel(2, Z2, {"a": frozenset({1})})
    # 1+1=0, so a*a holds only at the empty world
    assert satisfies(m, 0, parse("a * a"))
    assert not satisfies(m, 1, parse("a * a"))
    # from 1, adding an a-world (only 1) lands at 0
    assert satisfies(m, 1, parse("a -* emp"))
    assert not satisfies(m, 0, parse("a -* emp"))
    # in HALF, 1 composes with nothing but 0, so the wand is vacuous at 1
    m2 = FrameModel(2, HALF, {"a": frozenset({1})})
    assert satisfies(m2, 1, parse("a -* false"))


def test_check_conditions_per_logic():
    assert check_conditions(Z2, 2, BBI)
    assert check_conditions(Z2, 2, PASL)
    assert not check_conditions(Z2, 2, BBI_IU)        # 1+1=0 with 1 != 0
    assert not check_conditions(Z2, 2, PASL_D)
    assert check_conditions(HALF, 2, PASL_D)
    # neither frame splits world 1 into two non-empty parts
    assert not check_conditions(Z2, 2, BBI_S)
    assert not check_conditions(HALF, 2, BBI_S)
    assert check_conditions(Z2 | {(1, 1, 1)}, 2, BBI_S)
    # dropped identity triple
    assert not check_conditions(frozenset({(0, 0, 0)}), 2, BBI)
    # non-commutative relation
    bad = Z2 | {(1, 1, 1)}
    assert check_conditions(bad, 2, BBI)
    assert not check_conditions(bad, 2, PASL)         # 1+1 in {0,1}


def test_enumerate_frames_counts_are_stable():
    assert [len(enumerate_frames(n, BBI)) for n in (1, 2, 3)] == [1, 4, 92]
    assert [len(enumerate_frames(n, PASL)) for n in (1, 2, 3)] == [1, 2, 4]
    assert [len(enumerate_frames(n, PASL_D)) for n in (1, 2, 3)] == [1, 1, 1]
    assert len(enumerate_frames(4, PASL_D)) == 4
    for rel in enumerate_frames(3, PASL_D):
        assert check_conditions(rel, 3, PASL_D)


def test_enumerate_frames_refuses_large_general_frames():
    with pytest.raises(ValueError):
        enumerate_frames(4, BBI)
    with pytest.raises(ValueError):
        enumerate_frames(5, PASL_D)


def test_find_countermodel():
    got = find_countermodel(parse("(emp /\\ (a * b)) -> a"), PASL, 2)
    assert got is not None
    model, world = got
    assert model.size == 2
    assert not satisfies(model, world, parse("(emp /\\ (a * b)) -> a"))
    # the same formula has no countermodel once units are indivisible
    assert find_countermodel(parse("(emp /\\ (a * b)) -> a"), BBI_IU, 3) is None
    assert find_countermodel(parse("a -> a"), BBI, 3) is None
    assert find_countermodel(parse("a -> (a * a)"), BBI, 2) is not None


def test_assignments_fix_the_identity():
    m = FrameModel(2, Z2, {})
    maps = list(assignments({EPS, 3, 7}, m))
    assert len(maps) == 4
    assert all(rho[EPS] == 0 for rho in maps)


def test_sequent_falsifiable():
    m = FrameModel(2, Z2, {"a": frozenset({1})})
    s = Sequent(rel=((1, 1, 2),), gamma=((1, parse("a")),),
                delta=((2, parse("a")),))
    # 1 -> world 1, 2 -> world 0: 1+1=0, a true at 1, a false at 0
    assert sequent_falsifiable(s, m, {EPS: 0, 1: 1, 2: 0})
    # violating the relational atom
    assert not sequent_falsifiable(s, m, {EPS: 0, 1: 1, 2: 1})
    # succedent made true
    s2 = Sequent(gamma=(), delta=((1, parse("a")),))
    assert not sequent_falsifiable(s2, m, {EPS: 0, 1: 1})


def test_model_text_round_trip():
    m = FrameModel(2, Z2, {"a": frozenset({1}), "b": frozenset()})
    text = format_model(m, 1)
    m2, world = parse_model(text)
    assert world == 1
    assert m2.size == m.size and m2.rel == m.rel and m2.valuation == m.valuation
    with pytest.raises(ValueError):
        parse_model("nonsense 1 2\n")
