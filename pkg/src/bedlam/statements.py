"""Statement language: AST nodes, canonical rendering, and evaluation.

Statements are built from predicate atoms over persons, the usual
connectives, quantifiers ranging over the puzzle's person set, and a
``believes`` wrapper that may only appear as the outermost node of an
uttered statement.  Everything here is immutable and safe to share.

Evaluation is three-valued so the solver can test statements against
partially assigned worlds: ``eval_partial`` returns True, False, or the
``UNKNOWN`` sentinel, and ``eval_closed`` insists on a definite answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

# Predicates derived from a person's behavioral type.  Everything else
# must be a fluent declared by the puzzle.
BUILTIN_PREDICATES = frozenset({
    "patient", "doctor",
    "sane", "delusional", "partial",
    "truthteller", "liar", "alternator",
})


class _Unknown:
    """Sentinel for a truth value not determined by a partial world."""

    def __repr__(self):
        return "UNKNOWN"

    def __bool__(self):
        raise TypeError("UNKNOWN has no boolean value; check identity instead")


UNKNOWN = _Unknown()
_MISSING = object()


class SemanticError(Exception):
    """Statement is well-formed but meaningless where it is used."""

    def __init__(self, message: str, path: tuple[str, ...] = ()):
        self.path = tuple(path)
        if self.path:
            message = f"{message} (at {'/'.join(self.path)})"
        super().__init__(message)


# --- Terms ---

@dataclass(frozen=True)
class Person:
    """A reference to a person by name."""
    name: str


@dataclass(frozen=True)
class Var:
    """A quantifier-bound variable."""
    name: str


@dataclass(frozen=True)
class Me:
    """The speaker of the enclosing utterance."""


ME = Me()
Term = Union[Person, Var, Me]


# --- Statement nodes ---

class Statement:
    """Base class for all statement nodes."""
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Statement):
    """predicate(term) or fluent(term, value) for categorical fluents."""
    predicate: str
    term: Term
    value: Optional[str] = None


@dataclass(frozen=True)
class Not(Statement):
    body: Statement


@dataclass(frozen=True)
class And(Statement):
    items: tuple[Statement, ...]

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("And needs at least two items")


@dataclass(frozen=True)
class Or(Statement):
    items: tuple[Statement, ...]

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("Or needs at least two items")


@dataclass(frozen=True)
class Implies(Statement):
    left: Statement
    right: Statement


@dataclass(frozen=True)
class Exists(Statement):
    var: str
    body: Statement


@dataclass(frozen=True)
class ForAll(Statement):
    var: str
    body: Statement


@dataclass(frozen=True)
class AtLeast(Statement):
    count: int
    var: str
    body: Statement

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("AtLeast count must be non-negative")


@dataclass(frozen=True)
class Believes(Statement):
    """First-person belief report; legal only as the outermost node."""
    body: Statement


# --- Structural helpers ---

def peel_believes(stmt: Statement) -> tuple[Statement, bool]:
    """Split an utterance into (body, is_belief_report).

    Nested believes wrappers collapse into one.  A believes node anywhere
    below the outermost position is a semantic error.
    """
    is_belief = False
    while isinstance(stmt, Believes):
        is_belief = True
        stmt = stmt.body
    _reject_inner_believes(stmt, ())
    return stmt, is_belief


def _reject_inner_believes(stmt: Statement, path: tuple[str, ...]) -> None:
    for label, child in _children(stmt):
        if isinstance(child, Believes):
            raise SemanticError(
                "believes may only appear as the outermost node",
                path + (label,))
        _reject_inner_believes(child, path + (label,))


def _children(stmt: Statement):
    if isinstance(stmt, Not):
        yield "not", stmt.body
    elif isinstance(stmt, (And, Or)):
        word = "and" if isinstance(stmt, And) else "or"
        for i, item in enumerate(stmt.items):
            yield f"{word}[{i}]", item
    elif isinstance(stmt, Implies):
        yield "implies.left", stmt.left
        yield "implies.right", stmt.right
    elif isinstance(stmt, (Exists, ForAll, AtLeast)):
        yield "body", stmt.body
    elif isinstance(stmt, Believes):
        yield "believes", stmt.body


def walk(stmt: Statement):
    """Yield every node of the statement tree, preorder."""
    yield stmt
    for _, child in _children(stmt):
        yield from walk(child)


def free_variables(stmt: Statement, bound: frozenset[str] = frozenset()) -> set[str]:
    if isinstance(stmt, Atom):
        if isinstance(stmt.term, Var) and stmt.term.name not in bound:
            return {stmt.term.name}
        return set()
    if isinstance(stmt, (Exists, ForAll, AtLeast)):
        return free_variables(stmt.body, bound | {stmt.var})
    out: set[str] = set()
    for _, child in _children(stmt):
        out |= free_variables(child, bound)
    return out


def mentions_me(stmt: Statement) -> bool:
    return any(isinstance(n, Atom) and isinstance(n.term, Me) for n in walk(stmt))


def substitute_me(stmt: Statement, person_name: str) -> Statement:
    """Replace the speaker keyword with a direct reference to the person."""
    if isinstance(stmt, Atom):
        if isinstance(stmt.term, Me):
            return Atom(stmt.predicate, Person(person_name), stmt.value)
        return stmt
    if isinstance(stmt, Not):
        return Not(substitute_me(stmt.body, person_name))
    if isinstance(stmt, And):
        return And(tuple(substitute_me(i, person_name) for i in stmt.items))
    if isinstance(stmt, Or):
        return Or(tuple(substitute_me(i, person_name) for i in stmt.items))
    if isinstance(stmt, Implies):
        return Implies(substitute_me(stmt.left, person_name),
                       substitute_me(stmt.right, person_name))
    if isinstance(stmt, Exists):
        return Exists(stmt.var, substitute_me(stmt.body, person_name))
    if isinstance(stmt, ForAll):
        return ForAll(stmt.var, substitute_me(stmt.body, person_name))
    if isinstance(stmt, AtLeast):
        return AtLeast(stmt.count, stmt.var, substitute_me(stmt.body, person_name))
    if isinstance(stmt, Believes):
        return Believes(substitute_me(stmt.body, person_name))
    raise TypeError(f"not a statement node: {stmt!r}")


def fluents_used(stmt: Statement) -> set[str]:
    """Names of non-builtin predicates appearing in the statement."""
    return {n.predicate for n in walk(stmt)
            if isinstance(n, Atom) and n.predicate not in BUILTIN_PREDICATES}


def is_type_local(stmt: Statement, speaker: str) -> bool:
    """True when truth depends only on the speaker's own behavioral type.

    Such statements use builtin predicates applied to the speaker alone, so
    a solver may check them before any other person or fluent is fixed.
    """
    for node in walk(stmt):
        if not isinstance(node, Atom):
            continue
        if node.predicate not in BUILTIN_PREDICATES:
            return False
        term = node.term
        if isinstance(term, Me):
            continue
        if isinstance(term, Person) and term.name == speaker:
            continue
        return False
    return True


# --- Rendering ---

# Higher binds tighter; quantifiers extend to the end of their context.
_LEVEL_IMPLIES = 1
_LEVEL_OR = 2
_LEVEL_AND = 3
_LEVEL_NOT = 4
_LEVEL_ATOM = 5
_LEVEL_QUANT = 0


def _level(stmt: Statement) -> int:
    if isinstance(stmt, Atom):
        return _LEVEL_ATOM
    if isinstance(stmt, Not):
        return _LEVEL_NOT
    if isinstance(stmt, And):
        return _LEVEL_AND
    if isinstance(stmt, Or):
        return _LEVEL_OR
    if isinstance(stmt, Implies):
        return _LEVEL_IMPLIES
    return _LEVEL_QUANT


def render_statement(stmt: Statement) -> str:
    """Canonical text form; parsing it back yields an equal AST."""
    if isinstance(stmt, Believes):
        body, _ = peel_believes(stmt)
        return f"believes({_render(body, 0)})"
    _reject_inner_believes(stmt, ())
    return _render(stmt, 0)


def render_term(term: Term) -> str:
    if isinstance(term, Me):
        return "me"
    return term.name


def _render(stmt: Statement, min_level: int) -> str:
    if isinstance(stmt, Atom):
        if stmt.value is None:
            return f"{stmt.predicate}({render_term(stmt.term)})"
        return f"{stmt.predicate}({render_term(stmt.term)}, {stmt.value})"
    if isinstance(stmt, Not):
        text = "not " + _render(stmt.body, _LEVEL_NOT)
    elif isinstance(stmt, And):
        text = " and ".join(_render(item, _LEVEL_NOT) for item in stmt.items)
    elif isinstance(stmt, Or):
        text = " or ".join(_render(item, _LEVEL_AND) for item in stmt.items)
    elif isinstance(stmt, Implies):
        text = (_render(stmt.left, _LEVEL_OR) + " implies "
                + _render(stmt.right, _LEVEL_IMPLIES))
    elif isinstance(stmt, Exists):
        text = f"exists {stmt.var} . {_render(stmt.body, 0)}"
    elif isinstance(stmt, ForAll):
        text = f"forall {stmt.var} . {_render(stmt.body, 0)}"
    elif isinstance(stmt, AtLeast):
        text = f"atleast {stmt.count} {stmt.var} . {_render(stmt.body, 0)}"
    elif isinstance(stmt, Believes):
        raise SemanticError("believes may only appear as the outermost node")
    else:
        raise TypeError(f"not a statement node: {stmt!r}")
    if _level(stmt) < min_level:
        return f"({text})"
    return text


# --- Evaluation ---
#
# The world argument is duck-typed.  It must provide:
#   person_names            ordered names of all persons
#   builtin_value(pred, person) -> bool
#   fluent_value(name, person)  -> bool | str | UNKNOWN
# Both lookups raise SemanticError for unknown persons or predicates.

def eval_closed(world, stmt: Statement, speaker: Optional[str] = None) -> bool:
    """Classical evaluation of a closed, believes-free statement."""
    result = eval_partial(world, stmt, speaker)
    if result is UNKNOWN:
        raise SemanticError("statement not determined by a partial world")
    return result


def eval_partial(world, stmt: Statement, speaker: Optional[str] = None):
    """Three-valued evaluation tolerating unassigned fluent values."""
    return _eval(world, stmt, speaker, {})


def _eval(world, stmt, speaker, env):
    if isinstance(stmt, Atom):
        return _eval_atom(world, stmt, speaker, env)
    if isinstance(stmt, Not):
        inner = _eval(world, stmt.body, speaker, env)
        return UNKNOWN if inner is UNKNOWN else not inner
    if isinstance(stmt, And):
        saw_unknown = False
        for item in stmt.items:
            v = _eval(world, item, speaker, env)
            if v is False:
                return False
            if v is UNKNOWN:
                saw_unknown = True
        return UNKNOWN if saw_unknown else True
    if isinstance(stmt, Or):
        saw_unknown = False
        for item in stmt.items:
            v = _eval(world, item, speaker, env)
            if v is True:
                return True
            if v is UNKNOWN:
                saw_unknown = True
        return UNKNOWN if saw_unknown else False
    if isinstance(stmt, Implies):
        left = _eval(world, stmt.left, speaker, env)
        if left is False:
            return True
        right = _eval(world, stmt.right, speaker, env)
        if right is True:
            return True
        if left is UNKNOWN or right is UNKNOWN:
            return UNKNOWN
        return False
    if isinstance(stmt, Exists):
        return _eval_counting(world, stmt.var, stmt.body, speaker, env, minimum=1)
    if isinstance(stmt, ForAll):
        inner = _eval_counting(world, stmt.var, Not(stmt.body), speaker, env,
                               minimum=1)
        return UNKNOWN if inner is UNKNOWN else not inner
    if isinstance(stmt, AtLeast):
        return _eval_counting(world, stmt.var, stmt.body, speaker, env,
                              minimum=stmt.count)
    if isinstance(stmt, Believes):
        raise SemanticError("believes cannot be evaluated as a fact")
    raise TypeError(f"not a statement node: {stmt!r}")


def _eval_counting(world, var, body, speaker, env, minimum):
    if minimum == 0:
        return True
    shadowed = env.get(var, _MISSING)
    trues = 0
    unknowns = 0
    try:
        for name in world.person_names:
            env[var] = name
            v = _eval(world, body, speaker, env)
            if v is True:
                trues += 1
                if trues >= minimum:
                    return True
            elif v is UNKNOWN:
                unknowns += 1
    finally:
        if shadowed is _MISSING:
            env.pop(var, None)
        else:
            env[var] = shadowed
    if trues + unknowns >= minimum:
        return UNKNOWN
    return False


def _eval_atom(world, atom, speaker, env):
    term = atom.term
    if isinstance(term, Me):
        if speaker is None:
            raise SemanticError("'me' used outside any utterance")
        name = speaker
    elif isinstance(term, Var):
        if term.name not in env:
            raise SemanticError(f"unbound variable '{term.name}'")
        name = env[term.name]
    else:
        name = term.name
        if name not in world.person_names:
            raise SemanticError(f"unknown person '{name}'")
    if atom.predicate in BUILTIN_PREDICATES:
        if atom.value is not None:
            raise SemanticError(
                f"builtin predicate '{atom.predicate}' takes no value")
        return world.builtin_value(atom.predicate, name)
    value = world.fluent_value(atom.predicate, name)
    if atom.value is None:
        if isinstance(value, str):
            raise SemanticError(
                f"fluent '{atom.predicate}' needs a value argument")
        return value
    if value is UNKNOWN:
        return UNKNOWN
    if isinstance(value, bool):
        raise SemanticError(
            f"boolean fluent '{atom.predicate}' takes no value argument")
    return value == atom.value
