"""Agent behavior: the sixteen extended types and their assertion rules.

A person combines a truthfulness class (truth-teller, liar, alternator)
with a sanity class (sane, delusional, partial).  Alternators flip
between telling the truth and lying on every utterance of their own;
partials flip between sane and insane belief states the same way.  The
two phase flags anchor those toggles at the person's first utterance in
a transcript, giving sixteen distinct behavioral types.

Belief distortion is exact negation: an insane state believes precisely
the false facts.  Two consequences drive everything else here:

* a bare statement is asserted exactly when
  ``(truthful_now == sane_now) == value``, and
* a belief report ``believes(S)`` is asserted exactly when
  ``truthful_now == value(S)``, with sanity cancelling out.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Union

from .statements import Statement, SemanticError, eval_closed, peel_believes, Not


class Sanity(Enum):
    SANE = "sane"
    DELUSIONAL = "delusional"
    PARTIAL = "partial"


class Truthfulness(Enum):
    TRUTHTELLER = "truth-teller"
    LIAR = "liar"
    ALTERNATOR = "alternator"


class Answer(Enum):
    YES = "yes"
    NO = "no"

    @property
    def letter(self) -> str:
        return "Y" if self is Answer.YES else "N"


@dataclass(frozen=True)
class ExtendedType:
    """Sanity class, truthfulness class, and phases at the first utterance."""

    sanity: Sanity
    truthfulness: Truthfulness
    truthful_at_start: bool
    sane_at_start: bool

    def __post_init__(self):
        if self.truthfulness is Truthfulness.TRUTHTELLER and not self.truthful_at_start:
            raise ValueError("truth-tellers start truthful")
        if self.truthfulness is Truthfulness.LIAR and self.truthful_at_start:
            raise ValueError("liars start lying")
        if self.sanity is Sanity.SANE and not self.sane_at_start:
            raise ValueError("sane people start sane")
        if self.sanity is Sanity.DELUSIONAL and self.sane_at_start:
            raise ValueError("delusional people start insane")

    @property
    def is_patient(self) -> bool:
        return self.sanity is not Sanity.SANE

    @property
    def label(self) -> str:
        if self.sanity is Sanity.SANE:
            first = "S"
        elif self.sanity is Sanity.DELUSIONAL:
            first = "D"
        else:
            first = "Ps" if self.sane_at_start else "Pi"
        if self.truthfulness is Truthfulness.TRUTHTELLER:
            second = "T"
        elif self.truthfulness is Truthfulness.LIAR:
            second = "L"
        else:
            second = "At" if self.truthful_at_start else "Al"
        return first + second

    def advanced(self, steps: int = 1) -> "ExtendedType":
        """The label this type carries when re-anchored `steps` utterances later."""
        if steps % 2 == 0:
            return self
        truthful = self.truthful_at_start
        sane = self.sane_at_start
        if self.truthfulness is Truthfulness.ALTERNATOR:
            truthful = not truthful
        if self.sanity is Sanity.PARTIAL:
            sane = not sane
        return replace(self, truthful_at_start=truthful, sane_at_start=sane)

    def __repr__(self):
        return f"ExtendedType({self.label})"


def _make_all_types() -> tuple[ExtendedType, ...]:
    types = []
    sanity_states = [
        (Sanity.SANE, (True,)),
        (Sanity.DELUSIONAL, (False,)),
        (Sanity.PARTIAL, (False, True)),  # Pi before Ps
    ]
    truth_states = [
        (Truthfulness.TRUTHTELLER, (True,)),
        (Truthfulness.LIAR, (False,)),
        (Truthfulness.ALTERNATOR, (True, False)),  # At before Al
    ]
    for sanity, sane_opts in sanity_states:
        for sane_start in sane_opts:
            for truth, truthful_opts in truth_states:
                for truthful_start in truthful_opts:
                    types.append(ExtendedType(sanity, truth, truthful_start, sane_start))
    return tuple(types)


def _canonical_order(types) -> tuple[ExtendedType, ...]:
    order = ["ST", "SL", "SAt", "SAl", "DT", "DL", "DAt", "DAl",
             "PiT", "PiL", "PiAt", "PiAl", "PsT", "PsL", "PsAt", "PsAl"]
    by_label = {t.label: t for t in types}
    return tuple(by_label[label] for label in order)


ALL_TYPES: tuple[ExtendedType, ...] = _canonical_order(_make_all_types())
TYPES_BY_LABEL: dict[str, ExtendedType] = {t.label: t for t in ALL_TYPES}
TYPE_INDEX: dict[ExtendedType, int] = {t: i for i, t in enumerate(ALL_TYPES)}


def type_from_label(label: str) -> ExtendedType:
    try:
        return TYPES_BY_LABEL[label]
    except KeyError:
        raise ValueError(f"unknown type label '{label}'") from None


@dataclass(frozen=True)
class AgentState:
    """An extended type plus how many utterances the person has made."""

    type: ExtendedType
    utterances_made: int = 0


def current_phases(state: AgentState) -> tuple[bool, bool]:
    """(truthful_now, sane_now) for the state's utterance count."""
    odd = state.utterances_made % 2 == 1
    truthful = state.type.truthful_at_start
    if state.type.truthfulness is Truthfulness.ALTERNATOR and odd:
        truthful = not truthful
    sane = state.type.sane_at_start
    if state.type.sanity is Sanity.PARTIAL and odd:
        sane = not sane
    return truthful, sane


def advance(state: AgentState) -> AgentState:
    """The state after one more utterance of any kind."""
    return AgentState(state.type, state.utterances_made + 1)


def would_assert(state: AgentState, world, stmt: Statement,
                 speaker: Optional[str] = None) -> bool:
    """Whether an agent in this state would utter the statement.

    ``believes(S)`` collapses to ``truthful_now == value(S)`` regardless of
    sanity; a bare statement follows ``(truthful_now == sane_now) == value``.
    """
    body, is_belief = peel_believes(stmt)
    value = eval_closed(world, body, speaker)
    truthful, sane = current_phases(state)
    if is_belief:
        return truthful == value
    return (truthful == sane) == value


def answer_yes_no(state: AgentState, world, question: Statement,
                  speaker: Optional[str] = None) -> tuple[Answer, AgentState]:
    """Answer a yes/no question and advance the utterance counter.

    Exactly one answer is ever behavior-consistent, so the agent always
    answers: yes when it would assert the question's statement, else no.
    """
    answer = Answer.YES if would_assert(state, world, question, speaker) else Answer.NO
    return answer, advance(state)


@dataclass(frozen=True)
class Ask:
    """Plan item: the person is asked a yes/no question."""
    statement: Statement


@dataclass(frozen=True)
class Say:
    """Plan item: the person utters a statement of their own."""
    statement: Statement


PlanItem = Union[Ask, Say]


@dataclass(frozen=True)
class SimulatedFragment:
    """Per-item results of a simulated utterance plan plus the final state."""

    results: tuple  # Answer for Ask items, bool consistency for Say items
    state: AgentState


def simulate_person(type_: ExtendedType, world, plan,
                    speaker: Optional[str] = None) -> SimulatedFragment:
    """Thread one person's state through a plan of questions and statements."""
    state = AgentState(type_)
    results = []
    for item in plan:
        if isinstance(item, Ask):
            answer, state = answer_yes_no(state, world, item.statement, speaker)
            results.append(answer)
        elif isinstance(item, Say):
            results.append(would_assert(state, world, item.statement, speaker))
            state = advance(state)
        else:
            raise TypeError(f"not a plan item: {item!r}")
    return SimulatedFragment(tuple(results), state)


def decode_assertion(state: AgentState, stmt: Statement) -> Statement:
    """The fact guaranteed true given that this state uttered the statement.

    For ``believes(S)`` the fact is S when the speaker is in a truthful
    phase and not-S otherwise; for a bare statement the sanity phase
    participates as well.
    """
    body, is_belief = peel_believes(stmt)
    truthful, sane = current_phases(state)
    positive = truthful if is_belief else truthful == sane
    return body if positive else Not(body)


def decode_answer(state: AgentState, question: Statement,
                  answer: Answer) -> Statement:
    """The fact guaranteed true given this state's answer to a question."""
    fact = decode_assertion(state, question)
    if answer is Answer.YES:
        return fact
    return fact.body if isinstance(fact, Not) else Not(fact)
