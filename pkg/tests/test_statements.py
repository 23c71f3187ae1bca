"""Statement DSL: parsing, canonical rendering, and evaluation laws."""

import random

import pytest
from hypothesis import given, settings, strategies as st

import support
from bedlam.parser import ParseError, parse_statement
from bedlam.statements import (And, AtLeast, Atom, Believes, Exists, ForAll,
                               Implies, ME, Not, Or, Person, SemanticError,
                               Var, eval_closed, free_variables,
                               render_statement, substitute_me)
from bedlam.worlds import FluentDecl
from support import random_statement, random_utterance, random_world


def test_parse_believes_example():
    stmt = parse_statement("believes(not lover(Grace))")
    assert stmt == Believes(Not(Atom("lover", Person("Grace"))))


def test_parse_exists_example():
    stmt = parse_statement("exists x . doctor(x) and guilt(x, guilty)")
    assert stmt == Exists("x", And((Atom("doctor", Var("x")),
                                    Atom("guilt", Var("x"), "guilty"))))


def test_parse_keeps_double_negation():
    stmt = parse_statement("not not patient(me)")
    assert stmt == Not(Not(Atom("patient", ME)))


def test_precedence_not_and_or_implies():
    stmt = parse_statement("not sane(A) and sane(B) or sane(C) implies sane(D)")
    assert stmt == Implies(
        Or((And((Not(Atom("sane", Person("A"))), Atom("sane", Person("B")))),
            Atom("sane", Person("C")))),
        Atom("sane", Person("D")))


def test_implies_is_right_associative():
    stmt = parse_statement("sane(A) implies sane(B) implies sane(C)")
    assert stmt == Implies(Atom("sane", Person("A")),
                           Implies(Atom("sane", Person("B")),
                                   Atom("sane", Person("C"))))


def test_quantifier_body_extends_right():
    stmt = parse_statement("sane(A) or exists x . sane(x) and patient(x)")
    assert stmt == Or((Atom("sane", Person("A")),
                       Exists("x", And((Atom("sane", Var("x")),
                                        Atom("patient", Var("x")))))))


def test_render_atleast_canonical_form():
    stmt = AtLeast(2, "x", Atom("guilt", Var("x"), "guilty"))
    assert render_statement(stmt) == "atleast 2 x . guilt(x, guilty)"


def test_round_trip_of_spec_examples():
    for text in ("believes(not lover(Grace))",
                 "exists x . doctor(x) and guilt(x, guilty)",
                 "not not patient(me)"):
        stmt = parse_statement(text)
        assert parse_statement(render_statement(stmt)) == stmt


def test_believes_inside_body_is_rejected():
    with pytest.raises(ParseError):
        parse_statement("not believes(patient(me))")
    with pytest.raises(ParseError):
        parse_statement("believes(believes(patient(me)))")


def test_unbound_variable_rejected_with_context():
    with pytest.raises(SemanticError):
        parse_statement("lover(x)", persons=("Ann",),
                        fluents=(FluentDecl("lover"),))
    # Without context, a stray identifier reads as a person name.
    assert parse_statement("lover(x)") == Atom("lover", Person("x"))


def test_undeclared_predicate_rejected_with_context():
    with pytest.raises(SemanticError):
        parse_statement("sneaky(Ann)", persons=("Ann",), fluents=())


def test_syntax_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_statement("exists x sane(x)")
    assert err.value.line == 1
    assert err.value.col > 1
    with pytest.raises(ParseError):
        parse_statement("sane(Ann) and")
    with pytest.raises(ParseError):
        parse_statement("")


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=300, deadline=None)
def test_render_parse_round_trip(seed):
    rng = random.Random(seed)
    stmt = random_utterance(rng)
    assert parse_statement(render_statement(stmt)) == stmt


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_render_is_idempotent_canonical_form(seed):
    rng = random.Random(seed)
    text = render_statement(random_utterance(rng))
    assert render_statement(parse_statement(text)) == text


DECLS = tuple(FluentDecl(name) for name in support.FLUENT_POOL)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=200, deadline=None)
def test_eval_negation_law(seed):
    rng = random.Random(seed)
    world = random_world(rng, support.NAME_POOL, DECLS)
    stmt = random_statement(rng)
    assert eval_closed(world, Not(stmt), "Ann") == \
        (not eval_closed(world, stmt, "Ann"))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=200, deadline=None)
def test_eval_de_morgan(seed):
    rng = random.Random(seed)
    world = random_world(rng, support.NAME_POOL, DECLS)
    items = tuple(random_statement(rng, depth=2) for _ in range(2))
    assert eval_closed(world, Not(And(items)), "Ann") == \
        eval_closed(world, Or(tuple(Not(i) for i in items)), "Ann")
    assert eval_closed(world, Not(Or(items)), "Ann") == \
        eval_closed(world, And(tuple(Not(i) for i in items)), "Ann")


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_atleast_zero_is_vacuous(seed):
    rng = random.Random(seed)
    world = random_world(rng, support.NAME_POOL, DECLS)
    stmt = AtLeast(0, "x", random_statement(rng, depth=1, bound=("x",)))
    assert eval_closed(world, stmt, "Ann") is True


def test_forall_over_empty_person_set_is_true():
    from bedlam.worlds import World
    empty = World((), (), (), ())
    stmt = ForAll("x", Atom("sane", Var("x")))
    assert eval_closed(empty, stmt) is True
    assert eval_closed(empty, Exists("x", Atom("sane", Var("x")))) is False


def test_atleast_counts_persons():
    rng = random.Random(7)
    world = random_world(rng, support.NAME_POOL, DECLS)
    sane_count = sum(world.builtin_value("sane", p) for p in world.person_names)
    body = Atom("sane", Var("x"))
    for k in range(5):
        assert eval_closed(world, AtLeast(k, "x", body)) == (sane_count >= k)


def test_quantifier_shadowing_restores_outer_binding():
    rng = random.Random(3)
    world = random_world(rng, support.NAME_POOL, DECLS)
    # exists x . sane(x) and (exists x . patient(x)) and sane(x):
    # the trailing sane(x) must still see the outer binding.
    stmt = Exists("x", And((Atom("sane", Var("x")),
                            Exists("x", Atom("patient", Var("x"))),
                            Atom("sane", Var("x")))))
    expected = any(
        world.builtin_value("sane", p)
        and any(world.builtin_value("patient", q) for q in world.person_names)
        for p in world.person_names)
    assert eval_closed(world, stmt) == expected


def test_eval_rejects_believes():
    rng = random.Random(1)
    world = random_world(rng, support.NAME_POOL, DECLS)
    with pytest.raises(SemanticError):
        eval_closed(world, Believes(Atom("sane", Person("Ann"))))


def test_substitute_me():
    stmt = parse_statement("believes(lover(me) and exists x . lover(x))")
    substituted = substitute_me(stmt, "Beth")
    assert substituted == Believes(And((Atom("lover", Person("Beth")),
                                        Exists("x", Atom("lover", Var("x"))))))
    assert free_variables(substituted) == set()
