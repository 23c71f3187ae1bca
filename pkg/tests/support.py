"""Seeded generators shared by the property and oracle tests."""

from __future__ import annotations

import random

from bedlam.puzzle import PuzzleSpec, QuestionRound, StatementsRound
from bedlam.semantics import (ALL_TYPES, AgentState, Answer, advance,
                              would_assert)
from bedlam.statements import (And, AtLeast, Atom, Believes, Exists, ForAll,
                               Implies, ME, Not, Or, Person, Statement, Var)
from bedlam.worlds import FluentDecl, World

NAME_POOL = ("Ann", "Beth", "Cedric")
FLUENT_POOL = ("shifty", "hungry")
BUILTINS = ("patient", "doctor", "sane", "delusional", "partial",
            "truthteller", "liar", "alternator")
VAR_NAMES = ("x", "y", "z")


def random_statement(rng: random.Random, depth: int = 3, persons=NAME_POOL,
                     fluents=FLUENT_POOL, allow_me: bool = True,
                     bound=()) -> Statement:
    """A random believes-free closed statement over the given declarations."""
    bound = list(bound)

    def atom() -> Statement:
        terms = [Person(rng.choice(persons))] if persons else []
        if allow_me:
            terms.append(ME)
        if bound:
            terms.append(Var(rng.choice(bound)))
        term = rng.choice(terms)
        if fluents and rng.random() < 0.5:
            return Atom(rng.choice(fluents), term)
        return Atom(rng.choice(BUILTINS), term)

    def node(d: int) -> Statement:
        if d <= 0 or rng.random() < 0.3:
            return atom()
        kind = rng.randrange(7)
        if kind == 0:
            return Not(node(d - 1))
        if kind == 1:
            return And(tuple(node(d - 1) for _ in range(rng.randint(2, 3))))
        if kind == 2:
            return Or(tuple(node(d - 1) for _ in range(rng.randint(2, 3))))
        if kind == 3:
            return Implies(node(d - 1), node(d - 1))
        var = rng.choice([v for v in VAR_NAMES if v not in bound] or VAR_NAMES)
        bound.append(var)
        body = node(d - 1)
        bound.pop()
        if kind == 4:
            return Exists(var, body)
        if kind == 5:
            return ForAll(var, body)
        return AtLeast(rng.randint(0, len(persons) + 1), var, body)

    return node(depth)


def random_utterance(rng: random.Random, **kwargs) -> Statement:
    stmt = random_statement(rng, **kwargs)
    if rng.random() < 0.4:
        return Believes(stmt)
    return stmt


def random_world(rng: random.Random, persons, decls) -> World:
    types = tuple(rng.choice(ALL_TYPES) for _ in persons)
    values = tuple(
        tuple(rng.choice(decl.values()) for _ in persons) for decl in decls)
    return World(tuple(persons), types, tuple(decls), values)


def random_puzzle(rng: random.Random) -> PuzzleSpec:
    """A small random puzzle; roughly half are seeded from a hidden world.

    Hidden-world puzzles replay a real population's behavior, so they have
    at least one consistent world; the rest record arbitrary answers and
    are frequently unsatisfiable.  Both kinds exercise the solver.
    """
    n_persons = rng.choice((1, 1, 2, 2, 2, 3, 3))
    n_fluents = rng.choice((0, 1, 1, 2))
    persons = NAME_POOL[:n_persons]
    decls = tuple(FluentDecl(name) for name in FLUENT_POOL[:n_fluents])
    hidden = random_world(rng, persons, decls) if rng.random() < 0.6 else None
    counts = {p: 0 for p in persons}

    def statement_for(speaker: str) -> Statement:
        stmt = random_utterance(rng, depth=2, persons=persons,
                                fluents=[d.name for d in decls])
        if hidden is None:
            return stmt
        # Flip the content so the hidden speaker really would say it.
        state = AgentState(hidden.type_of(speaker), counts[speaker])
        if would_assert(state, hidden, stmt, speaker):
            return stmt
        if isinstance(stmt, Believes):
            return Believes(Not(stmt.body))
        return Not(stmt)

    axioms = []
    for _ in range(rng.randint(0, 2)):
        axiom = random_statement(rng, depth=2, persons=persons,
                                 fluents=[d.name for d in decls],
                                 allow_me=False)
        if hidden is not None:
            from bedlam.statements import eval_closed
            if not eval_closed(hidden, axiom):
                axiom = Not(axiom)
        axioms.append(axiom)

    rounds = []
    for _ in range(rng.randint(0, 4)):
        if rng.random() < 0.5:
            question = random_utterance(rng, depth=1, persons=persons,
                                        fluents=[d.name for d in decls])
            addressed = tuple(p for p in persons if rng.random() < 0.8)
            if not addressed:
                addressed = (rng.choice(persons),)
            answers = []
            for person in addressed:
                if hidden is None:
                    answers.append(rng.choice((Answer.YES, Answer.NO)))
                else:
                    state = AgentState(hidden.type_of(person), counts[person])
                    says_yes = would_assert(state, hidden, question, person)
                    answers.append(Answer.YES if says_yes else Answer.NO)
                counts[person] += 1
            rounds.append(QuestionRound("probe", question, addressed,
                                        tuple(answers)))
        else:
            speakers = [p for p in persons if rng.random() < 0.7]
            if not speakers:
                speakers = [rng.choice(persons)]
            utterances = []
            for speaker in speakers:
                utterances.append((speaker, statement_for(speaker)))
                counts[speaker] += 1
            rounds.append(StatementsRound(tuple(utterances)))

    puzzle = PuzzleSpec(tuple(persons), decls, tuple(axioms), tuple(rounds))
    puzzle.validate()
    return puzzle
