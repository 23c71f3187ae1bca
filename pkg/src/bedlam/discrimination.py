"""Question-sequence signatures and the type partitions they induce.

A signature is the string of Y/N answers one behavioral type gives to a
fixed list of self-referential questions.  The phase letters of the type
passed in (or reported back) always describe the answerer at the moment
the first listed question is asked; `epoch_offset` records how many
utterances the person already made in the surrounding transcript, so
callers holding transcript-anchored types can convert with
``ExtendedType.advanced``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .semantics import ALL_TYPES, AgentState, Answer, ExtendedType, answer_yes_no
from .statements import Atom, Believes, ME, Statement, fluents_used
from .worlds import SoloTypeWorld

SUBJECT = "subject"

# The two classic probes: a fact about oneself, and the belief report on it.
PATIENT_QUESTION: Statement = Atom("patient", ME)
BELIEF_QUESTION: Statement = Believes(Atom("patient", ME))

FOUR_QUESTION_PLAN = (PATIENT_QUESTION, PATIENT_QUESTION,
                      BELIEF_QUESTION, BELIEF_QUESTION)
THREE_QUESTION_PLAN = (PATIENT_QUESTION, PATIENT_QUESTION, BELIEF_QUESTION)
TWO_QUESTION_PLAN = (PATIENT_QUESTION, BELIEF_QUESTION)


class UnsupportedQuestionError(Exception):
    """The question cannot be answered from the answerer's type alone."""


def answer_signature(type_: ExtendedType, questions,
                     epoch_offset: int = 0) -> str:
    """Y/N answers this type gives to the questions, as one string."""
    if epoch_offset < 0:
        raise ValueError("epoch_offset must be non-negative")
    _check_questions(questions)
    world = SoloTypeWorld(SUBJECT, type_)
    state = AgentState(type_)
    letters = []
    for question in questions:
        answer, state = answer_yes_no(state, world, question, speaker=SUBJECT)
        letters.append(answer.letter)
    return "".join(letters)


def _check_questions(questions) -> None:
    for question in questions:
        if fluents_used(question):
            raise UnsupportedQuestionError(
                "questions must be answerable from the type alone; "
                f"'{sorted(fluents_used(question))[0]}' is a fluent")


@dataclass(frozen=True)
class TypePartition:
    """Types grouped by their signature under one question list."""

    classes: tuple[tuple[str, tuple[ExtendedType, ...]], ...]

    @property
    def is_discrete(self) -> bool:
        return all(len(types) == 1 for _, types in self.classes)

    def types_for(self, signature: str) -> tuple[ExtendedType, ...]:
        for sig, types in self.classes:
            if sig == signature:
                return types
        return ()

    def as_dict(self) -> dict[str, tuple[ExtendedType, ...]]:
        return dict(self.classes)


def partition_types(questions, epoch_offset: int = 0) -> TypePartition:
    """Group all sixteen types by signature; classes keep canonical order."""
    groups: dict[str, list[ExtendedType]] = {}
    for t in ALL_TYPES:
        groups.setdefault(answer_signature(t, questions, epoch_offset), []).append(t)
    # Order classes by their first member's canonical position.
    ordered = sorted(groups.items(), key=lambda kv: ALL_TYPES.index(kv[1][0]))
    return TypePartition(tuple((sig, tuple(ts)) for sig, ts in ordered))


def filter_types_by_signature(questions, answers,
                              epoch_offset: int = 0) -> frozenset[ExtendedType]:
    """Types whose answers to the questions match the recorded ones."""
    signature = _as_signature(answers)
    if len(signature) != len(tuple(questions)):
        raise ValueError(
            f"{len(signature)} answers recorded for "
            f"{len(tuple(questions))} questions")
    return frozenset(
        t for t in ALL_TYPES
        if answer_signature(t, questions, epoch_offset) == signature)


def _as_signature(answers) -> str:
    if isinstance(answers, str):
        signature = answers.upper()
    else:
        signature = "".join(
            a.letter if isinstance(a, Answer) else str(a).upper()
            for a in answers)
    if any(c not in "YN" for c in signature):
        raise ValueError(f"not a Y/N signature: {answers!r}")
    return signature


# --- Fixed-layout table rendering ---

# The widely circulated two-question table swaps the liar rows' belief
# answers; the collapse rule (and the four-question table) disagree.
LEGACY_TWO_QUESTION_SIGNATURES = {"ST": "NN", "SL": "YN", "DT": "NY", "DL": "YY"}
NON_SWITCHING_LABELS = ("ST", "SL", "DT", "DL")


def two_question_table() -> dict[str, str]:
    """Signatures of the four non-switching types under [fact, belief]."""
    from .semantics import TYPES_BY_LABEL
    return {label: answer_signature(TYPES_BY_LABEL[label], TWO_QUESTION_PLAN)
            for label in NON_SWITCHING_LABELS}


def tables_report() -> str:
    """The three reference tables in a fixed, golden-comparable layout."""
    from .semantics import TYPES_BY_LABEL
    out = []
    out.append("Two-question signatures [are you a patient? / "
               "do you believe you are a patient?]")
    out.append("(non-switching types only)")
    out.append("")
    engine = two_question_table()
    for label in NON_SWITCHING_LABELS:
        mark = "  (*)" if engine[label] != LEGACY_TWO_QUESTION_SIGNATURES[label] else ""
        out.append(f"  {label:<3} {engine[label]}{mark}")
    out.append("")
    out.append("(*) Often tabulated the other way around (SL=YN, DL=YY);")
    out.append("    the belief-collapse rule gives the values above, in")
    out.append("    agreement with the four-question table that follows.")
    out.append("")
    out.append("Four-question signatures [patient?, patient?, believe?, believe?]")
    out.append("")
    header = "       " + "  ".join(f"{t.label:<4}" for t in ALL_TYPES)
    out.append(header.rstrip())
    rows = [answer_signature(t, FOUR_QUESTION_PLAN) for t in ALL_TYPES]
    for q in range(4):
        cells = "  ".join(f"{rows[i][q]:<4}" for i in range(len(ALL_TYPES)))
        out.append(f"  q{q + 1}:  {cells}".rstrip())
    out.append("")
    for t in ALL_TYPES:
        out.append(f"  {t.label:<4} {answer_signature(t, FOUR_QUESTION_PLAN)}")
    out.append("")
    out.append("Three-question partition [patient?, patient?, believe?],")
    out.append("asked after one earlier utterance; labels give the state at")
    out.append("the first of the three questions")
    out.append("")
    partition = partition_types(THREE_QUESTION_PLAN, epoch_offset=1)
    for signature, types in partition.classes:
        names = ", ".join(t.label for t in types)
        out.append(f"  {signature} → {names}")
    out.append("")
    return "\n".join(out)
