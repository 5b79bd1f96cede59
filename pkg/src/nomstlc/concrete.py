"""Concrete syntax: the term grammar and the source-file layout.

Terms::

    a, b1, x'        UP atoms (lowercase identifiers)
    'b, 'b'          DOWN atoms (apostrophe prefix)
    C, Succ          constants when declared, unknowns otherwise
    X['b := s, ...]  moderated unknown
    \\a:t -> t. r     lambda (``λ`` also accepted); binders must be UP atoms
    r s              application, left associative

Types are base-type identifiers and right-associative ``->``.  Line comments
start with ``--``.  See ``docs/formats.md`` for the source-file layout.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Union

from .atoms import Atom
from .syntax import App, Arrow, AtomTerm, Base, Const, Lam, Signature, SimpleType, Term, Unk
from .typecheck import Context


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class SortError(ParseError):
    """A DOWN atom where only an UP atom is allowed (or vice versa)."""


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|--[^\n]*)
  | (?P<lam>\\|λ)
  | (?P<arrow>->)
  | (?P<assign>:=)
  | (?P<down>'[a-z][A-Za-z0-9_']*)
  | (?P<lower>[a-z][A-Za-z0-9_']*)
  | (?P<upper>[A-Z][A-Za-z0-9_']*)
  | (?P<punct>[:.()\[\],=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col: int = 1) -> list[Token]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            toks.append(Token(chunk if kind == "punct" else kind, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    toks.append(Token("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, toks: list[Token], constants: Iterable[str] = ()):
        self.toks = toks
        self.i = 0
        self.constants = set(constants)

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, tok: Optional[Token] = None, cls=ParseError):
        tok = tok or self.tok
        return cls(message, tok.line, tok.col)

    def take(self, kind: str) -> Token:
        tok = self.tok
        if tok.kind != kind:
            shown = tok.text or "end of input"
            raise self.error(f"expected {kind!r}, found {shown!r}")
        self.i += 1
        return tok

    def at(self, *kinds: str) -> bool:
        return self.tok.kind in kinds

    def done(self):
        if not self.at("eof"):
            raise self.error(f"unexpected {self.tok.text!r}")

    # types

    def type_(self) -> SimpleType:
        left = self.type_atom()
        if self.at("arrow"):
            self.i += 1
            return Arrow(left, self.type_())
        return left

    def type_atom(self) -> SimpleType:
        if self.at("("):
            self.i += 1
            ty = self.type_()
            self.take(")")
            return ty
        if self.at("lower", "upper"):
            return Base(self.take(self.tok.kind).text)
        raise self.error(f"expected a type, found {self.tok.text or 'end of input'!r}")

    # atoms

    def atom(self) -> Atom:
        tok = self.tok
        if tok.kind == "lower":
            self.i += 1
            return Atom.up(tok.text)
        if tok.kind == "down":
            self.i += 1
            return Atom.down(tok.text[1:])
        raise self.error(f"expected an atom, found {tok.text or 'end of input'!r}")

    # terms

    _STARTS = ("lower", "down", "upper", "(")

    def term(self) -> Term:
        if self.at("lam"):
            return self.lam()
        head = self.atomic()
        while True:
            if self.at(*self._STARTS):
                head = App(head, self.atomic())
            elif self.at("lam"):
                head = App(head, self.lam())
            else:
                return head

    def lam(self) -> Term:
        self.take("lam")
        tok = self.tok
        binder = self.atom()
        if not binder.is_up:
            raise self.error(f"lambda binder {tok.text} must be an UP atom", tok, SortError)
        self.take(":")
        ty = self.type_()
        self.take(".")
        return Lam(binder, ty, self.term())

    def atomic(self) -> Term:
        tok = self.tok
        if tok.kind in ("lower", "down"):
            return AtomTerm(self.atom())
        if tok.kind == "upper":
            self.i += 1
            if tok.text in self.constants:
                if self.at("["):
                    raise self.error(f"constant {tok.text} cannot carry a moderation")
                return Const(tok.text)
            mod = self.moderation() if self.at("[") else ()
            return Unk(tok.text, mod)
        if tok.kind == "(":
            self.i += 1
            t = self.term()
            self.take(")")
            return t
        raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")

    def moderation(self) -> tuple:
        self.take("[")
        entries = []
        seen = set()
        if not self.at("]"):
            while True:
                tok = self.tok
                b = self.atom()
                if not b.is_down:
                    raise self.error(f"moderated atom {tok.text} must be a DOWN atom", tok, SortError)
                if b in seen:
                    raise self.error(f"atom {tok.text} is moderated twice", tok)
                seen.add(b)
                self.take("assign")
                entries.append((b, self.term()))
                if not self.at(","):
                    break
                self.i += 1
        self.take("]")
        return tuple(entries)

    def l1_entries(self) -> dict[Atom, Term]:
        out = {}
        while True:
            tok = self.tok
            a = self.atom()
            if a in out:
                raise self.error(f"atom {tok.text} is substituted twice", tok)
            self.take("assign")
            out[a] = self.term()
            if not self.at(","):
                return out
            self.i += 1

    def l2_entries(self) -> dict[str, Term]:
        out = {}
        while True:
            tok = self.take("upper")
            if tok.text in self.constants:
                raise self.error(f"{tok.text} is a constant, not an unknown", tok)
            self.take("assign")
            out[tok.text] = self.term()
            if not self.at(","):
                return out
            self.i += 1

    def typing(self):
        tok = self.tok
        if tok.kind == "upper":
            self.i += 1
            key = tok.text
        else:
            key = self.atom()
        self.take(":")
        return key, self.type_()


def _parse(text: str, rule: str, constants=(), line: int = 1, col: int = 1):
    p = _Parser(tokenize(text, line, col), constants)
    out = getattr(p, rule)()
    p.done()
    return out


def parse_term(text: str, constants: Iterable[str] = ()) -> Term:
    return _parse(text, "term", constants)


def parse_type(text: str) -> SimpleType:
    return _parse(text, "type_")


def parse_atom(text: str) -> Atom:
    return _parse(text, "atom")


def parse_l1(text: str, constants: Iterable[str] = ()) -> dict[Atom, Term]:
    """``"a := s, 'b := t"`` as a level-1 substitution."""
    return _parse(text, "l1_entries", constants)


def parse_l2(text: str, constants: Iterable[str] = ()) -> dict[str, Term]:
    """``"X := s, Y := t"`` as a level-2 substitution."""
    return _parse(text, "l2_entries", constants)


def parse_context(text: str) -> Context:
    """Comma-separated typings such as ``"'b : t, X : t -> t"``."""
    p = _Parser(tokenize(text))
    atoms, unknowns = {}, {}
    if not p.at("eof"):
        while True:
            tok = p.tok
            key, ty = p.typing()
            table = unknowns if isinstance(key, str) else atoms
            if key in table and table[key] != ty:
                raise p.error(f"{tok.text} is typed twice", tok)
            table[key] = ty
            if not p.at(","):
                break
            p.i += 1
    p.done()
    return Context(atoms, unknowns)


# ----------------------------------------------------------------------
# Source files


@dataclass
class SourceFile:
    signature: Signature
    context: Context
    definitions: dict[str, Term] = field(default_factory=dict)
    valuation: dict[str, str] = field(default_factory=dict)
    model: Optional[str] = None
    path: Optional[Path] = None
    # line numbers of definitions, for diagnostics
    lines: dict[str, int] = field(default_factory=dict)

    def term(self, name: str) -> Term:
        try:
            return self.definitions[name]
        except KeyError:
            raise KeyError(f"no definition named {name!r}") from None

    def model_path(self) -> Optional[Path]:
        if self.model is None:
            return None
        p = Path(self.model)
        if not p.is_absolute() and self.path is not None:
            p = self.path.parent / p
        return p


_STATEMENT = re.compile(r"(type|types|const|context|def|val|model)\b")


def _statements(text: str):
    """Yield ``(keyword, rest, line, col)``; indented lines continue the
    previous statement."""
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        bare = raw.strip()
        if not bare or bare.startswith("--"):
            if current is not None:
                current[1].append("")
            continue
        if raw[:1] in " \t" and current is not None:
            current[1].append(raw)
            continue
        if current is not None:
            yield current[0], "\n".join(current[1]), current[2], current[3]
        m = _STATEMENT.match(raw)
        if m is None:
            raise ParseError(f"unknown statement {raw.split()[0]!r}", lineno, 1)
        current = [m.group(1), [raw[m.end():]], lineno, m.end() + 1]
    if current is not None:
        yield current[0], "\n".join(current[1]), current[2], current[3]


_VAL = re.compile(r"\s*([A-Z][A-Za-z0-9_']*)\s*=(.*)", re.DOTALL)


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("--", 1)[0] for line in text.splitlines()).strip()


def parse_source(text: str, path: Union[str, Path, None] = None) -> SourceFile:
    base_types: list[str] = []
    constants: dict[str, SimpleType] = {}
    atoms: dict = {}
    unknowns: dict = {}
    defs: dict[str, Term] = {}
    lines: dict[str, int] = {}
    valuation: dict[str, str] = {}
    model = None

    def check_bases(ty, line, col):
        missing = _bases(ty) - set(base_types)
        if missing:
            raise ParseError(f"undeclared base types {sorted(missing)}", line, col)

    for kw, rest, line, col in _statements(text):
        # values and model paths are not term syntax, so they skip the lexer
        p = None if kw in ("val", "model") else _Parser(tokenize(rest, line, col), constants)
        if kw in ("type", "types"):
            while not p.at("eof"):
                if p.at(","):
                    p.i += 1
                    continue
                tok = p.tok
                if not p.at("lower", "upper"):
                    raise p.error("expected a base type name")
                p.i += 1
                if tok.text not in base_types:
                    base_types.append(tok.text)
        elif kw == "const":
            tok = p.take("upper")
            p.take(":")
            ty = p.type_()
            p.done()
            check_bases(ty, tok.line, tok.col)
            if tok.text in constants or tok.text in unknowns:
                raise ParseError(f"{tok.text} is declared twice", tok.line, tok.col)
            constants[tok.text] = ty
        elif kw == "context":
            while True:
                tok = p.tok
                key, ty = p.typing()
                check_bases(ty, tok.line, tok.col)
                if isinstance(key, str):
                    if key in constants:
                        raise ParseError(f"{key} is a constant, not an unknown", tok.line, tok.col)
                    table = unknowns
                else:
                    table = atoms
                if key in table and table[key] != ty:
                    raise ParseError(f"{tok.text} is typed twice", tok.line, tok.col)
                table[key] = ty
                if not p.at(","):
                    break
                p.i += 1
            p.done()
        elif kw == "def":
            tok = p.take("lower") if p.at("lower") else p.take("upper")
            p.take("=")
            if tok.text in defs:
                raise ParseError(f"definition {tok.text} is repeated", tok.line, tok.col)
            defs[tok.text] = p.term()
            p.done()
            lines[tok.text] = tok.line
        elif kw == "val":
            m = _VAL.match(rest)
            if m is None or not _strip_comments(m.group(2)):
                raise ParseError("expected 'val X = value'", line, col)
            # kept verbatim: a term for the term model, a label for a finite model
            valuation[m.group(1)] = _strip_comments(m.group(2))
        elif kw == "model":
            model = _strip_comments(rest)
            if not model:
                raise ParseError("model statement needs a path", line, col)
    if not base_types:
        raise ParseError("no base types declared", 1, 1)
    sig = Signature(frozenset(base_types), constants)
    return SourceFile(sig, Context(atoms, unknowns), defs, valuation, model,
                      Path(path) if path is not None else None, lines)


def _bases(ty: SimpleType) -> set[str]:
    if isinstance(ty, Base):
        return {ty.name}
    return _bases(ty.dom) | _bases(ty.cod)


def load_source(path: Union[str, Path]) -> SourceFile:
    path = Path(path)
    return parse_source(path.read_text(), path)
