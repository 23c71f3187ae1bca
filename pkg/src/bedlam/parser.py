"""Parsers for the statement language, puzzle files, and world files.

The statement grammar, in canonical form:

    stmt  := 'believes' '(' body ')' | body
    body  := 'not' body | body 'and' body | body 'or' body
           | body 'implies' body
           | ('exists' | 'forall') IDENT '.' body
           | 'atleast' NAT IDENT '.' body
           | PRED '(' term (',' VALUE)? ')' | '(' body ')'
    term  := PERSON-NAME | IDENT | 'me'

Precedence, tightest first: not, and, or, implies.  Quantifier bodies
extend as far right as possible.  An identifier bound by an enclosing
quantifier is a variable; any other identifier in term position names a
person.  Identifiers are case-sensitive; '#' starts a comment.

Puzzle files are line-oriented: a `persons:` line, then `fluent`,
`axiom`, `round` and `extraction` sections.  World files carry a single
`world:` section assigning each person a type label and fluent values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from . import statements as st
from .extraction import Category, ExtractionConfig
from .puzzle import (PuzzleSpec, QuestionRound, StatementsRound,
                     validate_statement_in_context)
from .semantics import Answer, type_from_label
from .statements import (And, AtLeast, Atom, Believes, Exists, ForAll,
                         Implies, ME, Not, Or, Person, Statement, Var)
from .worlds import FluentDecl, World

STATEMENT_KEYWORDS = frozenset({
    "believes", "not", "and", "or", "implies",
    "exists", "forall", "atleast", "me",
})
FILE_KEYWORDS = frozenset({
    "persons", "fluent", "axiom", "round", "statements", "question",
    "to", "all", "answers", "extraction", "category", "order",
    "alphabetical", "world", "bool", "yes", "no",
})
RESERVED = STATEMENT_KEYWORDS | FILE_KEYWORDS

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<nat>[0-9]+)
  | (?P<word>[A-Za-z_][A-Za-z0-9_-]*)
  | (?P<string>"[^"]*")
  | (?P<punct>[(){},.:=])
""", re.VERBOSE)


class ParseError(Exception):
    """Syntax error with a source position."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        if line:
            message = f"line {line}, column {col}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Token:
    kind: str  # "word" | "nat" | "string" | "punct"
    text: str
    line: int
    col: int


def _tokenize(text: str, line_no: int = 1) -> list[Token]:
    tokens = []
    line = line_no
    col = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    return tokens


def _strip_comment(line: str) -> str:
    in_string = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_string = not in_string
        elif ch == "#" and not in_string:
            return line[:i]
    return line


class _TokenCursor:
    def __init__(self, tokens: list[Token], end_line: int, end_col: int):
        self.tokens = tokens
        self.pos = 0
        self.end_line = end_line
        self.end_col = end_col

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, expect_text: Optional[str] = None,
             expect_kind: Optional[str] = None,
             what: str = "") -> Token:
        tok = self.peek()
        if tok is None:
            wanted = expect_text or what or expect_kind or "more input"
            raise ParseError(f"unexpected end of input, expected {wanted}",
                             self.end_line, self.end_col)
        if expect_text is not None and tok.text != expect_text:
            raise ParseError(f"expected '{expect_text}', found '{tok.text}'",
                             tok.line, tok.col)
        if expect_kind is not None and tok.kind != expect_kind:
            wanted = what or expect_kind
            raise ParseError(f"expected {wanted}, found '{tok.text}'",
                             tok.line, tok.col)
        self.pos += 1
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def error_here(self, message: str) -> ParseError:
        tok = self.peek()
        if tok is None:
            return ParseError(message, self.end_line, self.end_col)
        return ParseError(message, tok.line, tok.col)


# --- Statement parsing ---

class _StatementParser:
    def __init__(self, cursor: _TokenCursor):
        self.cursor = cursor
        self.bound: list[str] = []

    def parse_top(self) -> Statement:
        tok = self.cursor.peek()
        if tok is not None and tok.text == "believes":
            self.cursor.next()
            self.cursor.next(expect_text="(")
            body = self.parse_body()
            self.cursor.next(expect_text=")")
            return Believes(body)
        return self.parse_body()

    def parse_body(self) -> Statement:
        return self.parse_implies()

    def parse_implies(self) -> Statement:
        left = self.parse_or()
        tok = self.cursor.peek()
        if tok is not None and tok.text == "implies":
            self.cursor.next()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Statement:
        items = [self.parse_and()]
        while True:
            tok = self.cursor.peek()
            if tok is None or tok.text != "or":
                break
            self.cursor.next()
            items.append(self.parse_and())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def parse_and(self) -> Statement:
        items = [self.parse_unary()]
        while True:
            tok = self.cursor.peek()
            if tok is None or tok.text != "and":
                break
            self.cursor.next()
            items.append(self.parse_unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def parse_unary(self) -> Statement:
        tok = self.cursor.peek()
        if tok is None:
            raise self.cursor.error_here("expected a statement")
        if tok.text == "not":
            self.cursor.next()
            return Not(self.parse_unary())
        if tok.text in ("exists", "forall"):
            self.cursor.next()
            var = self._bind_variable()
            self.cursor.next(expect_text=".")
            body = self.parse_body()
            self.bound.pop()
            return Exists(var, body) if tok.text == "exists" else ForAll(var, body)
        if tok.text == "atleast":
            self.cursor.next()
            count_tok = self.cursor.next(expect_kind="nat", what="a count")
            var = self._bind_variable()
            self.cursor.next(expect_text=".")
            body = self.parse_body()
            self.bound.pop()
            return AtLeast(int(count_tok.text), var, body)
        return self.parse_primary()

    def parse_primary(self) -> Statement:
        tok = self.cursor.peek()
        if tok is None:
            raise self.cursor.error_here("expected a statement")
        if tok.text == "(":
            self.cursor.next()
            body = self.parse_body()
            self.cursor.next(expect_text=")")
            return body
        if tok.text == "believes":
            raise ParseError("believes may only appear as the outermost node",
                             tok.line, tok.col)
        if tok.kind != "word" or tok.text in RESERVED:
            raise ParseError(f"expected a predicate, found '{tok.text}'",
                             tok.line, tok.col)
        self.cursor.next()
        self.cursor.next(expect_text="(")
        term = self._parse_term()
        value = None
        comma = self.cursor.peek()
        if comma is not None and comma.text == ",":
            self.cursor.next()
            value_tok = self.cursor.next(expect_kind="word", what="a value name")
            if value_tok.text in RESERVED:
                raise ParseError(f"'{value_tok.text}' is a reserved word",
                                 value_tok.line, value_tok.col)
            value = value_tok.text
        self.cursor.next(expect_text=")")
        return Atom(tok.text, term, value)

    def _parse_term(self):
        tok = self.cursor.next(expect_kind="word", what="a term")
        if tok.text == "me":
            return ME
        if tok.text in RESERVED:
            raise ParseError(f"'{tok.text}' is a reserved word",
                             tok.line, tok.col)
        if tok.text in self.bound:
            return Var(tok.text)
        return Person(tok.text)

    def _bind_variable(self) -> str:
        tok = self.cursor.next(expect_kind="word", what="a variable name")
        if tok.text in RESERVED:
            raise ParseError(f"'{tok.text}' is a reserved word",
                             tok.line, tok.col)
        self.bound.append(tok.text)
        return tok.text


def _parse_statement_tokens(cursor: _TokenCursor) -> Statement:
    stmt = _StatementParser(cursor).parse_top()
    if not cursor.at_end():
        raise cursor.error_here(
            f"unexpected '{cursor.peek().text}' after statement")
    return stmt


def parse_statement(text: str,
                    persons: Optional[Sequence[str]] = None,
                    fluents: Optional[Sequence[FluentDecl]] = None) -> Statement:
    """Parse a single statement.

    When `persons` or `fluents` are given the statement is also checked
    against those declarations.
    """
    clean = "\n".join(_strip_comment(line) for line in text.split("\n"))
    tokens = _tokenize(clean)
    lines = clean.split("\n")
    cursor = _TokenCursor(tokens, len(lines), len(lines[-1]) + 1)
    stmt = _parse_statement_tokens(cursor)
    if persons is not None or fluents is not None:
        validate_statement_in_context(
            stmt, "statement",
            tuple(persons or ()), tuple(fluents or ()))
    return stmt


# --- Puzzle files ---

@dataclass
class _Line:
    number: int
    text: str
    tokens: list[Token]

    def cursor(self) -> _TokenCursor:
        return _TokenCursor(list(self.tokens), self.number, len(self.text) + 1)

    def first_word(self) -> str:
        return self.tokens[0].text if self.tokens else ""


def _logical_lines(text: str) -> list[_Line]:
    lines = []
    for i, raw in enumerate(text.split("\n"), start=1):
        stripped = _strip_comment(raw)
        if not stripped.strip():
            continue
        lines.append(_Line(i, stripped, _tokenize(stripped, i)))
    return lines


class _FileParser:
    def __init__(self, text: str):
        self.lines = _logical_lines(text)
        self.index = 0

    def peek_line(self) -> Optional[_Line]:
        return self.lines[self.index] if self.index < len(self.lines) else None

    def next_line(self) -> _Line:
        line = self.peek_line()
        if line is None:
            last = self.lines[-1].number if self.lines else 1
            raise ParseError("unexpected end of file", last, 1)
        self.index += 1
        return line


def _is_entry_line(line: _Line) -> bool:
    """A 'Name: ...' line that is not a new section header."""
    toks = line.tokens
    return (len(toks) >= 2 and toks[0].kind == "word"
            and toks[0].text not in FILE_KEYWORDS
            and toks[1].text == ":")


def parse_puzzle_file(text: str) -> PuzzleSpec:
    """Parse and fully validate a puzzle file."""
    fp = _FileParser(text)
    persons = _parse_persons_line(fp.next_line())
    fluents: list[FluentDecl] = []
    axioms: list[Statement] = []
    rounds: list = []
    extraction: Optional[ExtractionConfig] = None
    while True:
        line = fp.peek_line()
        if line is None:
            break
        word = line.first_word()
        if word == "fluent":
            fluents.append(_parse_fluent_line(fp.next_line()))
        elif word == "axiom":
            axioms.append(_parse_axiom_line(fp.next_line()))
        elif word == "round":
            rounds.append(_parse_round(fp, persons))
        elif word == "extraction":
            if extraction is not None:
                raise ParseError("duplicate extraction section",
                                 line.number, 1)
            extraction = _parse_extraction(fp)
        else:
            tok = line.tokens[0]
            raise ParseError(
                f"expected 'fluent', 'axiom', 'round' or 'extraction', "
                f"found '{tok.text}'", tok.line, tok.col)
    spec = PuzzleSpec(tuple(persons), tuple(fluents), tuple(axioms),
                      tuple(rounds), extraction)
    spec.validate()
    return spec


def _parse_persons_line(line: _Line) -> list[str]:
    cur = line.cursor()
    cur.next(expect_text="persons")
    cur.next(expect_text=":")
    names = _parse_name_list(cur)
    if not cur.at_end():
        raise cur.error_here("unexpected text after person list")
    return names


def _parse_name_list(cur: _TokenCursor) -> list[str]:
    names = []
    while not cur.at_end():
        tok = cur.next(expect_kind="word", what="a name")
        if tok.text in RESERVED:
            raise ParseError(f"'{tok.text}' is a reserved word",
                             tok.line, tok.col)
        names.append(tok.text)
        if cur.at_end() or cur.peek().text != ",":
            break
        cur.next()
    return names


def _parse_fluent_line(line: _Line) -> FluentDecl:
    cur = line.cursor()
    cur.next(expect_text="fluent")
    name_tok = cur.next(expect_kind="word", what="a fluent name")
    if name_tok.text in RESERVED:
        raise ParseError(f"'{name_tok.text}' is a reserved word",
                         name_tok.line, name_tok.col)
    cur.next(expect_text=":")
    tok = cur.peek()
    if tok is not None and tok.text == "bool":
        cur.next()
        decl = FluentDecl(name_tok.text, None)
    else:
        cur.next(expect_text="{")
        values = _parse_name_list(cur)
        cur.next(expect_text="}")
        decl = FluentDecl(name_tok.text, tuple(values))
    if not cur.at_end():
        raise cur.error_here("unexpected text after fluent declaration")
    return decl


def _parse_axiom_line(line: _Line) -> Statement:
    cur = line.cursor()
    cur.next(expect_text="axiom")
    return _parse_statement_tokens(cur)


def _parse_round(fp: _FileParser, persons: list[str]):
    line = fp.next_line()
    cur = line.cursor()
    cur.next(expect_text="round")
    kind = cur.next(expect_kind="word", what="'statements' or 'question'")
    if kind.text == "statements":
        cur.next(expect_text=":")
        if not cur.at_end():
            raise cur.error_here("statements begin on the following lines")
        utterances = []
        while True:
            entry = fp.peek_line()
            if entry is None or not _is_entry_line(entry):
                break
            fp.next_line()
            ecur = entry.cursor()
            speaker = ecur.next(expect_kind="word").text
            ecur.next(expect_text=":")
            utterances.append((speaker, _parse_statement_tokens(ecur)))
        if not utterances:
            raise ParseError("a statements round needs at least one speaker",
                             line.number, 1)
        return StatementsRound(tuple(utterances))
    if kind.text == "question":
        label_tok = cur.next(expect_kind="string", what="a question label")
        cur.next(expect_text="to")
        tok = cur.peek()
        if tok is not None and tok.text == "all":
            cur.next()
            addressed = list(persons)
        else:
            addressed = _parse_name_list(cur)
        cur.next(expect_text=":")
        statement = _parse_statement_tokens(cur)
        answers = _parse_answers_line(fp.next_line(), addressed)
        return QuestionRound(label_tok.text.strip('"'), statement,
                             tuple(addressed), answers)
    raise ParseError(f"expected 'statements' or 'question', found '{kind.text}'",
                     kind.line, kind.col)


def _parse_answers_line(line: _Line, addressed: list[str]) -> tuple[Answer, ...]:
    cur = line.cursor()
    cur.next(expect_text="answers", what="an answers line")
    cur.next(expect_text=":")
    recorded: dict[str, Answer] = {}
    while not cur.at_end():
        name_tok = cur.next(expect_kind="word", what="a person name")
        cur.next(expect_text="=")
        value_tok = cur.next(expect_kind="word", what="yes or no")
        if value_tok.text not in ("yes", "no"):
            raise ParseError(f"expected yes or no, found '{value_tok.text}'",
                             value_tok.line, value_tok.col)
        if name_tok.text in recorded:
            raise ParseError(f"duplicate answer for '{name_tok.text}'",
                             name_tok.line, name_tok.col)
        if name_tok.text not in addressed:
            raise ParseError(
                f"answer recorded for unaddressed person '{name_tok.text}'",
                name_tok.line, name_tok.col)
        recorded[name_tok.text] = Answer(value_tok.text)
        if not cur.at_end():
            cur.next(expect_text=",")
    missing = [p for p in addressed if p not in recorded]
    if missing:
        raise ParseError(f"no answer recorded for '{missing[0]}'",
                         line.number, 1)
    return tuple(recorded[p] for p in addressed)


def _parse_extraction(fp: _FileParser) -> ExtractionConfig:
    header = fp.next_line()
    cur = header.cursor()
    cur.next(expect_text="extraction")
    cur.next(expect_text=":")
    if not cur.at_end():
        raise cur.error_here("extraction entries begin on the following lines")
    categories: list[Category] = []
    ordering = "alphabetical"
    while True:
        line = fp.peek_line()
        if line is None or line.first_word() not in ("category", "order"):
            break
        fp.next_line()
        lcur = line.cursor()
        word = lcur.next().text
        if word == "category":
            name_tok = lcur.next(expect_kind="word", what="a category name")
            lcur.next(expect_text=":")
            values = _parse_name_list(lcur)
            if len(values) != 3:
                raise ParseError("a category lists exactly three values",
                                 name_tok.line, name_tok.col)
            categories.append(Category(name_tok.text, tuple(values)))
        else:
            lcur.next(expect_text=":")
            ordering = lcur.next(expect_text="alphabetical").text
        if not lcur.at_end():
            raise lcur.error_here("unexpected text after extraction entry")
    if len(categories) != 3:
        raise ParseError("extraction needs exactly three categories",
                         header.number, 1)
    return ExtractionConfig(tuple(categories), ordering)


# --- World files ---

def parse_world_file(text: str, puzzle: PuzzleSpec) -> World:
    """Parse a world file against a puzzle's declarations."""
    fp = _FileParser(text)
    header = fp.next_line()
    cur = header.cursor()
    cur.next(expect_text="world")
    cur.next(expect_text=":")
    if not cur.at_end():
        raise cur.error_here("world entries begin on the following lines")
    types: dict[str, object] = {}
    values: dict[str, dict[str, object]] = {}
    while True:
        line = fp.peek_line()
        if line is None:
            break
        if not _is_entry_line(line):
            tok = line.tokens[0]
            raise ParseError(f"expected a person entry, found '{tok.text}'",
                             tok.line, tok.col)
        fp.next_line()
        lcur = line.cursor()
        name_tok = lcur.next(expect_kind="word")
        person = name_tok.text
        if person not in puzzle.person_names:
            raise ParseError(f"unknown person '{person}'",
                             name_tok.line, name_tok.col)
        if person in types:
            raise ParseError(f"duplicate entry for '{person}'",
                             name_tok.line, name_tok.col)
        lcur.next(expect_text=":")
        label_tok = lcur.next(expect_kind="word", what="a type label")
        try:
            types[person] = type_from_label(label_tok.text)
        except ValueError as exc:
            raise ParseError(str(exc), label_tok.line, label_tok.col) from None
        values[person] = {}
        while not lcur.at_end():
            lcur.next(expect_text=",")
            fluent_tok = lcur.next(expect_kind="word", what="a fluent name")
            lcur.next(expect_text="=")
            value_tok = lcur.next(expect_kind="word", what="a value")
            decl = _find_fluent(puzzle, fluent_tok)
            if fluent_tok.text in values[person]:
                raise ParseError(f"duplicate value for '{fluent_tok.text}'",
                                 fluent_tok.line, fluent_tok.col)
            values[person][fluent_tok.text] = _fluent_value(decl, value_tok)
    missing = [p for p in puzzle.person_names if p not in types]
    if missing:
        raise ParseError(f"no entry for person '{missing[0]}'", 1, 1)
    for person, assigned in values.items():
        for decl in puzzle.fluent_decls:
            if decl.name not in assigned:
                raise ParseError(
                    f"no value of '{decl.name}' for '{person}'", 1, 1)
    return World(
        puzzle.person_names,
        tuple(types[p] for p in puzzle.person_names),
        puzzle.fluent_decls,
        tuple(tuple(values[p][decl.name] for p in puzzle.person_names)
              for decl in puzzle.fluent_decls))


def _find_fluent(puzzle: PuzzleSpec, tok: Token) -> FluentDecl:
    for decl in puzzle.fluent_decls:
        if decl.name == tok.text:
            return decl
    raise ParseError(f"undeclared fluent '{tok.text}'", tok.line, tok.col)


def _fluent_value(decl: FluentDecl, tok: Token):
    if decl.is_boolean:
        if tok.text not in ("yes", "no"):
            raise ParseError(
                f"boolean fluent '{decl.name}' takes yes or no",
                tok.line, tok.col)
        return tok.text == "yes"
    if tok.text not in decl.domain:
        raise ParseError(
            f"'{tok.text}' not in domain of '{decl.name}'",
            tok.line, tok.col)
    return tok.text
