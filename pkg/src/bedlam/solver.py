"""World enumeration: consistency checking, staged search, derivations.

`check_world` replays a transcript against one candidate world and is the
single source of truth for consistency.  `brute_force_solve` filters it
over the full cartesian world space and serves as the checking oracle for
small puzzles.  `solve_all` must agree with the oracle wherever the space
is enumerable; it gets there faster by pruning each person's type against
their own question answers, then backtracking over fluent values with
three-valued constraint evaluation.
"""

from __future__ import annotations

import itertools
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

from . import statements as st
from .discrimination import filter_types_by_signature  # noqa: F401  (re-export)
from .puzzle import PuzzleSpec, QuestionRound, ScheduledUtterance, StatementsRound
from .semantics import (ALL_TYPES, AgentState, Answer, ExtendedType,
                        advance, answer_yes_no, current_phases,
                        decode_answer, decode_assertion, would_assert)
from .statements import (SemanticError, Statement, UNKNOWN, eval_closed,
                         eval_partial, render_statement)
from .worlds import FluentDecl, SoloTypeWorld, World, builtin_truth


class SolveStatus(Enum):
    UNIQUE = "unique"
    NONE = "none"
    MULTIPLE = "multiple"


@dataclass(frozen=True)
class Budget:
    """Search limits; exceeding either aborts with an explicit error."""

    max_nodes: int = 100_000_000
    max_seconds: float = 120.0


@dataclass
class SolveStatistics:
    nodes: int = 0
    elapsed: float = 0.0
    worlds_found: int = 0


class BudgetExceededError(Exception):
    """The search hit its node or time limit before finishing."""

    def __init__(self, message: str, statistics: SolveStatistics):
        super().__init__(message)
        self.statistics = statistics


@dataclass(frozen=True)
class ReportRow:
    """One person's solved report triple."""

    person: str
    sanity: str
    truthfulness: str
    guilt: Optional[str]  # value of the extraction's fluent category


@dataclass(frozen=True)
class SolveResult:
    status: SolveStatus
    worlds: tuple[World, ...]
    report: Optional[tuple[ReportRow, ...]]
    statistics: SolveStatistics


@dataclass(frozen=True)
class CheckResult:
    """Outcome of replaying a transcript against one world."""

    ok: bool
    round_index: Optional[int]
    person: Optional[str]
    message: str

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class _CheckStep:
    round_index: int
    person: str
    person_index: int
    count: int                    # the speaker's utterance ordinal
    body: Statement               # believes wrapper peeled off
    is_belief: bool
    expected_yes: Optional[bool]  # None for volunteered statements
    label: str                    # question label or rendered statement


def _check_plan(puzzle: PuzzleSpec) -> list[_CheckStep]:
    index = {name: k for k, name in enumerate(puzzle.person_names)}
    counts = [0] * len(puzzle.person_names)
    plan = []
    for ri, rnd in enumerate(puzzle.rounds):
        if isinstance(rnd, QuestionRound):
            body, is_belief = st.peel_believes(rnd.statement)
            for person, recorded in zip(rnd.addressed, rnd.answers):
                pi = index[person]
                plan.append(_CheckStep(ri, person, pi, counts[pi], body,
                                       is_belief, recorded is Answer.YES,
                                       rnd.label))
                counts[pi] += 1
        else:
            for person, stmt in rnd.utterances:
                pi = index[person]
                body, is_belief = st.peel_believes(stmt)
                plan.append(_CheckStep(ri, person, pi, counts[pi], body,
                                       is_belief, None,
                                       render_statement(stmt)))
                counts[pi] += 1
    return plan


# Replaying one puzzle against many worlds is the oracle's hot loop, so
# the flattened plan is cached per puzzle object.
_PLAN_CACHE: dict[int, tuple[PuzzleSpec, list[_CheckStep]]] = {}


def _cached_plan(puzzle: PuzzleSpec) -> list[_CheckStep]:
    entry = _PLAN_CACHE.get(id(puzzle))
    if entry is not None and entry[0] is puzzle:
        return entry[1]
    plan = _check_plan(puzzle)
    if len(_PLAN_CACHE) >= 64:
        _PLAN_CACHE.clear()
    _PLAN_CACHE[id(puzzle)] = (puzzle, plan)
    return plan


def check_world(puzzle: PuzzleSpec, world: World) -> CheckResult:
    """True iff the world satisfies every axiom and transcript round.

    Each person's utterance counter is threaded through the rounds in
    order; the first violation found is reported.
    """
    if world.person_names != puzzle.person_names:
        raise SemanticError("world persons do not match the puzzle")
    if world.fluent_decls != puzzle.fluent_decls:
        raise SemanticError("world fluents do not match the puzzle")
    for i, axiom in enumerate(puzzle.axioms):
        if not eval_closed(world, axiom):
            return CheckResult(
                False, None, None,
                f"axiom {i + 1} is violated: {render_statement(axiom)}")
    types = world.types
    for step in _cached_plan(puzzle):
        type_ = types[step.person_index]
        truthful, sane = current_phases(AgentState(type_, step.count))
        target = truthful if step.is_belief else truthful == sane
        if step.expected_yes is None:
            required = target
        else:
            required = target if step.expected_yes else not target
        if eval_closed(world, step.body, step.person) != required:
            if step.expected_yes is None:
                message = (f"round {step.round_index}: {step.person} "
                           f"({type_.label}) would not say: {step.label}")
            else:
                recorded = "yes" if step.expected_yes else "no"
                would = "no" if step.expected_yes else "yes"
                message = (f"round {step.round_index}: {step.person} answered "
                           f"{recorded} to \"{step.label}\" but a {type_.label} "
                           f"in this world would answer {would}")
            return CheckResult(False, step.round_index, step.person, message)
    return CheckResult(True, None, None, "consistent")


# --- Brute-force oracle ---

def enumerate_worlds(puzzle: PuzzleSpec) -> Iterator[World]:
    """Every possible world, in canonical order."""
    n = len(puzzle.person_names)
    value_spaces = [
        list(itertools.product(decl.values(), repeat=n))
        for decl in puzzle.fluent_decls]
    for types in itertools.product(ALL_TYPES, repeat=n):
        for combo in itertools.product(*value_spaces):
            yield World(puzzle.person_names, types, puzzle.fluent_decls,
                        tuple(combo))


def brute_force_solve(puzzle: PuzzleSpec) -> tuple[World, ...]:
    """Filter `check_world` over the full space.  Only viable when small."""
    return tuple(w for w in enumerate_worlds(puzzle) if check_world(puzzle, w))


# --- Staged search ---

@dataclass(frozen=True)
class _Utterance:
    person_index: int
    person: str
    count: int                 # the speaker's utterance ordinal
    body: Statement            # believes wrapper peeled off
    is_belief: bool
    expected_yes: Optional[bool]  # None for volunteered statements
    fluent_deps: frozenset     # of (fluent_index, person_index | None)
    type_local: bool


@dataclass(frozen=True)
class _Axiom:
    body: Statement
    fluent_deps: frozenset


class _Analysis:
    """Per-puzzle precomputation shared by every type combination."""

    def __init__(self, puzzle: PuzzleSpec):
        self.puzzle = puzzle
        names = puzzle.person_names
        self.person_index = {name: i for i, name in enumerate(names)}
        self.fluent_index = {d.name: i for i, d in enumerate(puzzle.fluent_decls)}
        self.utterances: list[_Utterance] = []
        for person, slots in puzzle.utterance_schedule().items():
            for count, slot in enumerate(slots):
                self.utterances.append(self._analyze(person, count, slot))
        self.axioms = [
            _Axiom(ax, self._deps(ax, None)) for ax in puzzle.axioms]
        # Search variables: one per (fluent, person), declaration order.
        self.variables = [
            (fi, pi)
            for fi in range(len(puzzle.fluent_decls))
            for pi in range(len(names))]
        self.var_index = {v: i for i, v in enumerate(self.variables)}

    def _analyze(self, person: str, count: int,
                 slot: ScheduledUtterance) -> _Utterance:
        body, is_belief = st.peel_believes(slot.statement)
        expected = None if slot.answer is None else slot.answer is Answer.YES
        return _Utterance(
            self.person_index[person], person, count, body, is_belief,
            expected, self._deps(body, person),
            st.is_type_local(body, person))

    def _deps(self, body: Statement, speaker: Optional[str]) -> frozenset:
        deps = set()
        for node in st.walk(body):
            if not isinstance(node, st.Atom):
                continue
            if node.predicate in st.BUILTIN_PREDICATES:
                continue
            fi = self.fluent_index[node.predicate]
            term = node.term
            if isinstance(term, st.Person):
                deps.add((fi, self.person_index[term.name]))
            elif isinstance(term, st.Me):
                deps.add((fi, self.person_index[speaker]))
            else:
                deps.add((fi, None))
        return frozenset(deps)

    def type_candidates(self) -> list[list[ExtendedType]]:
        """Per-person types consistent with their own type-local utterances."""
        by_person: dict[int, list[_Utterance]] = {}
        for u in self.utterances:
            by_person.setdefault(u.person_index, []).append(u)
        candidates = []
        for pi, person in enumerate(self.puzzle.person_names):
            locals_ = [u for u in by_person.get(pi, ()) if u.type_local]
            survivors = []
            for t in ALL_TYPES:
                world = _SpeakerOnlyWorld(self.puzzle.person_names, person, t)
                ok = True
                for u in locals_:
                    value = eval_closed(world, u.body, person)
                    if _required_value(t, u) != value:
                        ok = False
                        break
                if ok:
                    survivors.append(t)
            candidates.append(survivors)
        return candidates


class _SpeakerOnlyWorld:
    """Full person set, but only the speaker's type is known.

    Type-local statements never query anyone else, while quantifiers
    still range over the real domain (its size is observable through
    constructs like `atleast 2 x . patient(me)`).
    """

    __slots__ = ("person_names", "speaker", "type")

    def __init__(self, person_names, speaker, type_):
        self.person_names = person_names
        self.speaker = speaker
        self.type = type_

    def type_of(self, person: str) -> ExtendedType:
        if person != self.speaker:
            raise SemanticError(
                f"type of '{person}' is not fixed at this search stage")
        return self.type

    def builtin_value(self, predicate: str, person: str) -> bool:
        return builtin_truth(self.type_of(person), predicate)

    def fluent_value(self, fluent: str, person: str):
        raise SemanticError(
            f"fluent '{fluent}' is not assigned at this search stage")


def _required_value(type_: ExtendedType, utterance: _Utterance) -> bool:
    """The truth value the utterance's body must have in the world."""
    truthful, sane = current_phases(AgentState(type_, utterance.count))
    target = truthful if utterance.is_belief else truthful == sane
    if utterance.expected_yes is None or utterance.expected_yes:
        return target
    return not target


class _PartialWorld:
    """Mutable world with UNKNOWN fluent slots, for three-valued checks."""

    __slots__ = ("person_names", "types", "_pindex", "_findex", "values")

    def __init__(self, puzzle: PuzzleSpec, analysis: _Analysis, types):
        self.person_names = puzzle.person_names
        self.types = types
        self._pindex = analysis.person_index
        self._findex = analysis.fluent_index
        self.values = [[UNKNOWN] * len(puzzle.person_names)
                       for _ in puzzle.fluent_decls]

    def type_of(self, person: str):
        try:
            return self.types[self._pindex[person]]
        except KeyError:
            raise SemanticError(f"unknown person '{person}'") from None

    def builtin_value(self, predicate: str, person: str) -> bool:
        return builtin_truth(self.type_of(person), predicate)

    def fluent_value(self, fluent: str, person: str):
        try:
            fi = self._findex[fluent]
        except KeyError:
            raise SemanticError(f"undeclared predicate '{fluent}'") from None
        return self.values[fi][self._pindex[person]]


class _Ticker:
    """Node counter with shared budget enforcement."""

    _FLUSH = 2048

    def __init__(self, shared: "_SharedProgress"):
        self.shared = shared
        self.local = 0

    def tick(self) -> None:
        self.local += 1
        if self.local % self._FLUSH == 0:
            self.shared.add(self._FLUSH)
            self.local = 0

    def finish(self) -> None:
        self.shared.add(self.local)
        self.local = 0


class _SharedProgress:
    def __init__(self, budget: Budget, started: float):
        self.budget = budget
        self.started = started
        self.total = 0
        self.lock = threading.Lock()

    def add(self, n: int) -> None:
        with self.lock:
            self.total += n
            total = self.total
        if total > self.budget.max_nodes:
            raise BudgetExceededError(
                f"node budget of {self.budget.max_nodes} exceeded",
                SolveStatistics(nodes=total, elapsed=self.elapsed()))
        if self.elapsed() > self.budget.max_seconds:
            raise BudgetExceededError(
                f"time budget of {self.budget.max_seconds}s exceeded",
                SolveStatistics(nodes=total, elapsed=self.elapsed()))

    def elapsed(self) -> float:
        return time.perf_counter() - self.started


def solve_all(puzzle: PuzzleSpec, budget: Optional[Budget] = None,
              workers: int = 1) -> SolveResult:
    """All worlds consistent with the puzzle, canonically ordered.

    The result is deterministic for any worker count.  Exceeding the
    budget raises BudgetExceededError; it never truncates silently.
    """
    budget = budget or Budget()
    started = time.perf_counter()
    progress = _SharedProgress(budget, started)
    analysis = _Analysis(puzzle)
    candidates = analysis.type_candidates()
    worlds: list[World] = []
    if all(candidates) or not candidates:
        if workers <= 1 or not candidates or len(candidates[0]) == 1:
            ticker = _Ticker(progress)
            worlds = _search_combos(puzzle, analysis, candidates, ticker)
            ticker.finish()
        else:
            worlds = _search_parallel(puzzle, analysis, candidates,
                                      progress, workers)
    worlds.sort(key=lambda w: w.sort_key())
    if not worlds:
        status = SolveStatus.NONE
    elif len(worlds) == 1:
        status = SolveStatus.UNIQUE
    else:
        status = SolveStatus.MULTIPLE
    report = _build_report(puzzle, worlds[0]) if status is SolveStatus.UNIQUE else None
    stats = SolveStatistics(
        nodes=progress.total, elapsed=time.perf_counter() - started,
        worlds_found=len(worlds))
    return SolveResult(status, tuple(worlds), report, stats)


def _search_parallel(puzzle, analysis, candidates, progress, workers):
    slices = [candidates[0][w::workers] for w in range(workers)]
    results: list[list[World]] = []

    def run(first_slice):
        ticker = _Ticker(progress)
        found = _search_combos(puzzle, analysis,
                               [first_slice] + candidates[1:], ticker)
        ticker.finish()
        return found

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for found in pool.map(run, slices):
            results.append(found)
    return [w for found in results for w in found]


def _search_combos(puzzle, analysis, candidates, ticker) -> list[World]:
    found: list[World] = []
    for types in itertools.product(*candidates):
        ticker.tick()
        _search_fluents(puzzle, analysis, types, ticker, found)
    return found


def _search_fluents(puzzle, analysis, types, ticker, found) -> None:
    world = _PartialWorld(puzzle, analysis, types)
    pending = []
    for u in analysis.utterances:
        required = _required_value(types[u.person_index], u)
        if not u.fluent_deps:
            if eval_closed(world, u.body, u.person) != required:
                return
        else:
            pending.append((u.body, u.person, required, u.fluent_deps))
    for ax in analysis.axioms:
        if not ax.fluent_deps:
            if not eval_closed(world, ax.body):
                return
        else:
            pending.append((ax.body, None, True, ax.fluent_deps))

    variables = analysis.variables
    # Constraints to re-check when a variable gets assigned.
    watchers: list[list[tuple]] = [[] for _ in variables]
    for constraint in pending:
        _, _, _, deps = constraint
        for vi, (fi, pi) in enumerate(variables):
            if (fi, pi) in deps or (fi, None) in deps:
                watchers[vi].append(constraint)

    decls = puzzle.fluent_decls

    def descend(depth: int) -> None:
        if depth == len(variables):
            for body, speaker, required, _ in pending:
                if eval_closed(world, body, speaker) != required:
                    return
            found.append(World(
                puzzle.person_names, types, decls,
                tuple(tuple(row) for row in world.values)))
            return
        fi, pi = variables[depth]
        for value in decls[fi].values():
            ticker.tick()
            world.values[fi][pi] = value
            ok = True
            for body, speaker, required, _ in watchers[depth]:
                result = eval_partial(world, body, speaker)
                if result is not UNKNOWN and result != required:
                    ok = False
                    break
            if ok:
                descend(depth + 1)
        world.values[fi][pi] = UNKNOWN

    descend(0)


def _build_report(puzzle: PuzzleSpec,
                  world: World) -> tuple[ReportRow, ...]:
    guilt_category = None
    if puzzle.extraction is not None:
        from .extraction import SANITY_CATEGORY, TRUTHFULNESS_CATEGORY
        for cat in puzzle.extraction.categories:
            if cat.name not in (SANITY_CATEGORY, TRUTHFULNESS_CATEGORY):
                guilt_category = cat.name
    rows = []
    for person in puzzle.person_names:
        t = world.type_of(person)
        guilt = (world.fluent_value(guilt_category, person)
                 if guilt_category else None)
        rows.append(ReportRow(person, t.sanity.value, t.truthfulness.value, guilt))
    return tuple(rows)


# --- Derivations ---

@dataclass(frozen=True)
class DerivationStep:
    """What one utterance tells us, given fully determined phases."""

    round_index: int
    person: str
    truthful_now: bool
    sane_now: bool
    spoken: str
    fact: Statement

    def render(self) -> str:
        phases = (("truthful" if self.truthful_now else "lying") + ", "
                  + ("sane" if self.sane_now else "insane"))
        return (f"round {self.round_index} {self.person} ({phases}): "
                f"{self.spoken} => {render_statement(self.fact)}")


def explain_solution(puzzle: PuzzleSpec,
                     world: World) -> tuple[DerivationStep, ...]:
    """Decode every utterance of a consistent world into a guaranteed fact."""
    check = check_world(puzzle, world)
    if not check:
        raise SemanticError(f"world is not consistent: {check.message}")
    index = {name: i for i, name in enumerate(puzzle.person_names)}
    counts = [0] * len(puzzle.person_names)
    steps = []
    for ri, rnd in enumerate(puzzle.rounds):
        if isinstance(rnd, QuestionRound):
            for person, recorded in zip(rnd.addressed, rnd.answers):
                pi = index[person]
                state = AgentState(world.types[pi], counts[pi])
                counts[pi] += 1
                truthful, sane = current_phases(state)
                fact = decode_answer(
                    state, st.substitute_me(rnd.statement, person), recorded)
                spoken = f"\"{rnd.label}\" answered {recorded.value}"
                steps.append(DerivationStep(ri, person, truthful, sane,
                                            spoken, fact))
        else:
            for person, stmt in rnd.utterances:
                pi = index[person]
                state = AgentState(world.types[pi], counts[pi])
                counts[pi] += 1
                truthful, sane = current_phases(state)
                fact = decode_assertion(state, st.substitute_me(stmt, person))
                spoken = f"says {render_statement(stmt)}"
                steps.append(DerivationStep(ri, person, truthful, sane,
                                            spoken, fact))
    return tuple(steps)
