"""Parser, printer and syntax helpers."""
import pytest

from pasl.formula import (
    BOT, EMP, TOP, ParseError, conj, disj, exists, expr_eq, free_exprs,
    has_heap, imp, neg, parse, points_to, prop, prop_names, septraction,
    show, size, star, subformulae, subst_expr, wand,
)


def test_hash_consing_gives_identity_equality():
    a = star(prop("a"), prop("b"))
    b = star(prop("a"), prop("b"))
    assert a is b
    assert conj(a, TOP) is conj(b, TOP)
    assert star(prop("b"), prop("a")) is not a


def test_formula_is_immutable():
    f = prop("a")
    with pytest.raises(AttributeError):
        f.kind = "or"


def test_parse_constants_and_props():
    assert parse("true") is TOP
    assert parse("false") is BOT
    assert parse("emp") is EMP
    assert parse("a") is prop("a")
    assert parse("foo_1") is prop("foo_1")


def test_parse_precedence():
    # ~ binds tightest, then *, /\, \/, -*, ->
    assert parse("~a * b") is star(neg(prop("a")), prop("b"))
    assert parse("a * b /\\ c") is conj(star(prop("a"), prop("b")), prop("c"))
    assert parse("a /\\ b \\/ c") is disj(conj(prop("a"), prop("b")), prop("c"))
    assert parse("a \\/ b -* c") is wand(disj(prop("a"), prop("b")), prop("c"))
    assert parse("a -* b -> c") is imp(wand(prop("a"), prop("b")), prop("c"))


def test_parse_associativity():
    # binary lattice connectives associate left, arrows associate right
    assert parse("a * b * c") is star(star(prop("a"), prop("b")), prop("c"))
    assert parse("a -> b -> c") is imp(prop("a"), imp(prop("b"), prop("c")))
    assert parse("a -* b -* c") is wand(prop("a"), wand(prop("b"), prop("c")))


def test_parse_unicode_aliases():
    assert parse("⊤* ∧ ¬⊥") is parse("emp /\\ ~false")
    assert parse("(a ∗ b) → a") is parse("(a * b) -> a")
    assert parse("⊤ −∗ a") is parse("true -* a")


def test_parse_septraction_sugar():
    assert parse("a -o b") is septraction(parse("a"), parse("b"))
    assert parse("a -o b") is neg(wand(prop("a"), neg(prop("b"))))


def test_parse_heap_atoms():
    assert parse("x |-> y") is points_to("x", "y")
    assert parse("x = y") is expr_eq("x", "y")
    assert parse("exists x. x |-> y") is exists("x", points_to("x", "y"))
    assert parse("exists x y. x = y") is exists("x", exists("y", expr_eq("x", "y")))


def test_parse_errors():
    for bad in ("", "a *", "(a", "a b", "exists . a", "a |-> ", "A"):
        with pytest.raises(ParseError):
            parse(bad)


def test_show_round_trip():
    samples = [
        "a", "true", "false", "emp", "~~a",
        "(a -* b) /\\ (true * (emp /\\ a)) -> b",
        "a * (b * (c * d)) -> d * (c * (b * a))",
        "~(emp /\\ (a /\\ (b * ~(c -* (emp -> a)))))",
        "x |-> y", "x = y", "exists v. (v |-> w) * a",
        "emp -> ~(true -* ~(x |-> y))",
    ]
    for s in samples:
        f = parse(s)
        assert parse(show(f)) is f


def test_size_and_subformulae():
    f = parse("(a * b) -> a")
    assert size(f) == 5
    assert prop("a") in set(subformulae(f))
    assert parse("a * b") in set(subformulae(f))


def test_prop_names_and_has_heap():
    assert prop_names(parse("(a * b) -> c")) == {"a", "b", "c"}
    assert not has_heap(parse("(a * b) -> c"))
    assert has_heap(parse("x |-> y"))
    assert has_heap(parse("exists x. a"))


def test_free_exprs_respects_binders():
    f = parse("exists x. (x |-> y) * (z = z)")
    assert free_exprs(f) == {"y", "z"}


def test_subst_expr_avoids_capture():
    f = parse("exists x. x |-> y")
    assert subst_expr(f, "y", "w") is parse("exists x. x |-> w")
    # bound occurrences are left alone
    assert subst_expr(f, "x", "w") is f
