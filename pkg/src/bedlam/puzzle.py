"""Puzzle specifications: persons, fluents, axioms, and transcript rounds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from . import statements as st
from .extraction import (ExtractionConfig, SANITY_CATEGORY,
                         TRUTHFULNESS_CATEGORY)
from .semantics import Answer
from .statements import Believes, SemanticError, Statement
from .worlds import FluentDecl, PersonId


def validate_statement_in_context(stmt: Statement, where: str,
                                  person_names: tuple[str, ...],
                                  fluent_decls: tuple[FluentDecl, ...]) -> None:
    """Check a parsed statement against declared persons and fluents."""
    body, _ = st.peel_believes(stmt)  # rejects inner believes
    free = st.free_variables(body)
    if free:
        raise SemanticError(f"{where}: unbound variable '{sorted(free)[0]}'")
    by_name = {d.name: d for d in fluent_decls}
    for node in st.walk(body):
        if not isinstance(node, st.Atom):
            continue
        if node.predicate in st.BUILTIN_PREDICATES:
            if node.value is not None:
                raise SemanticError(
                    f"{where}: builtin '{node.predicate}' takes no value")
        elif node.predicate in by_name:
            decl = by_name[node.predicate]
            if decl.is_boolean and node.value is not None:
                raise SemanticError(
                    f"{where}: boolean fluent '{node.predicate}' takes no value")
            if not decl.is_boolean:
                if node.value is None:
                    raise SemanticError(
                        f"{where}: fluent '{node.predicate}' needs a value")
                if node.value not in decl.domain:
                    raise SemanticError(
                        f"{where}: '{node.value}' not in domain of "
                        f"'{node.predicate}'")
        else:
            raise SemanticError(
                f"{where}: undeclared predicate '{node.predicate}'")
        if (isinstance(node.term, st.Person)
                and node.term.name not in person_names):
            raise SemanticError(
                f"{where}: unknown person '{node.term.name}'")


@dataclass(frozen=True)
class QuestionRound:
    """One yes/no question put to a set of persons, with recorded answers.

    Answers align one-to-one with the addressed tuple.
    """

    label: str
    statement: Statement
    addressed: tuple[str, ...]
    answers: tuple[Answer, ...]

    def answer_of(self, person: str) -> Answer:
        return self.answers[self.addressed.index(person)]


@dataclass(frozen=True)
class StatementsRound:
    """A round of volunteered statements, in speaking order."""

    utterances: tuple[tuple[str, Statement], ...]


Round = Union[QuestionRound, StatementsRound]


@dataclass(frozen=True)
class ScheduledUtterance:
    """One slot in a person's utterance history."""

    round_index: int
    statement: Statement
    answer: Optional[Answer]  # None for volunteered statements

    @property
    def is_question(self) -> bool:
        return self.answer is not None


@dataclass(frozen=True)
class PuzzleSpec:
    """Everything a puzzle file declares, validated and immutable."""

    person_names: tuple[str, ...]
    fluent_decls: tuple[FluentDecl, ...]
    axioms: tuple[Statement, ...]
    rounds: tuple[Round, ...]
    extraction: Optional[ExtractionConfig] = None

    @property
    def persons(self) -> tuple[PersonId, ...]:
        return tuple(PersonId(i, n) for i, n in enumerate(self.person_names))

    def fluent_decl(self, name: str) -> FluentDecl:
        for decl in self.fluent_decls:
            if decl.name == name:
                return decl
        raise SemanticError(f"undeclared fluent '{name}'")

    def utterance_schedule(self) -> dict[str, list[ScheduledUtterance]]:
        """Each person's utterances in order; list position is their counter."""
        schedule: dict[str, list[ScheduledUtterance]] = {
            name: [] for name in self.person_names}
        for i, rnd in enumerate(self.rounds):
            if isinstance(rnd, QuestionRound):
                for person, answer in zip(rnd.addressed, rnd.answers):
                    schedule[person].append(
                        ScheduledUtterance(i, rnd.statement, answer))
            else:
                for speaker, stmt in rnd.utterances:
                    schedule[speaker].append(ScheduledUtterance(i, stmt, None))
        return schedule

    def validate(self) -> None:
        """Raise SemanticError on any declaration or round inconsistency."""
        if len(set(self.person_names)) != len(self.person_names):
            raise SemanticError("duplicate person name")
        fluent_names = [d.name for d in self.fluent_decls]
        if len(set(fluent_names)) != len(fluent_names):
            raise SemanticError("duplicate fluent name")
        for name in fluent_names:
            if name in st.BUILTIN_PREDICATES:
                raise SemanticError(
                    f"fluent '{name}' shadows a builtin predicate")
        for i, axiom in enumerate(self.axioms):
            where = f"axiom {i + 1}"
            if any(isinstance(n, Believes) for n in st.walk(axiom)):
                raise SemanticError(f"{where}: axioms cannot contain believes")
            if st.mentions_me(axiom):
                raise SemanticError(f"{where}: axioms have no speaker for 'me'")
            self._validate_statement(axiom, where)
        for i, rnd in enumerate(self.rounds):
            where = f"round {i}"
            if isinstance(rnd, QuestionRound):
                if len(rnd.answers) != len(rnd.addressed):
                    raise SemanticError(
                        f"{where}: answers must cover exactly the addressed persons")
                if len(set(rnd.addressed)) != len(rnd.addressed):
                    raise SemanticError(f"{where}: person addressed twice")
                for person in rnd.addressed:
                    if person not in self.person_names:
                        raise SemanticError(
                            f"{where}: unknown person '{person}'")
                self._validate_statement(rnd.statement, where)
            else:
                seen = set()
                for speaker, stmt in rnd.utterances:
                    if speaker not in self.person_names:
                        raise SemanticError(
                            f"{where}: unknown speaker '{speaker}'")
                    if speaker in seen:
                        raise SemanticError(
                            f"{where}: '{speaker}' speaks twice in one round")
                    seen.add(speaker)
                    self._validate_statement(stmt, f"{where}, {speaker}")
        if self.extraction is not None:
            self._validate_extraction()

    def _validate_statement(self, stmt: Statement, where: str) -> None:
        validate_statement_in_context(stmt, where, self.person_names,
                                      self.fluent_decls)

    def _validate_extraction(self) -> None:
        for cat in self.extraction.categories:
            if cat.name in (SANITY_CATEGORY, TRUTHFULNESS_CATEGORY):
                continue
            decl = self.fluent_decl(cat.name)
            if decl.is_boolean or set(decl.domain) != set(cat.values):
                raise SemanticError(
                    f"extraction category '{cat.name}' must list exactly the "
                    "fluent's three declared values")
