"""Concrete syntax: parser and pretty-printers.

Grammar::

    P   ::= "0" | ACT "." P | ACT "!" "." P | P "+" P | P PAR P
    PAR ::= "|[" (ACT ("," ACT)*)? "]|"
    ACT ::= [a-z][a-z0-9_]*

Prefix binds tighter than "+", which binds tighter than parallel
composition.  "+" and parallel are parsed left-associatively but the AST
keeps the shape that was written, so ``parse(render(p)) == p``.  ``!`` marks
an executed action; ``tau`` is a legal action name but is rejected inside
``|[...]|``.
"""

from __future__ import annotations

import re

from .errors import ParseError, WellFormednessError
from .terms import (
    NIL,
    Act,
    BrsPrefix,
    Choice,
    Dot,
    Nil,
    Par,
    ParL,
    ParR,
    PlusL,
    PlusR,
    Prefix,
    Process,
    ProcessLike,
    ProofTerm,
    Syn,
    TAU,
    is_initial,
    is_wellformed,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<act>[a-z][a-z0-9_]*)
  | (?P<nil>0)
  | (?P<parl>\|\[)
  | (?P<parr>\]\|)
  | (?P<op>[().+,!])
    """,
    re.VERBOSE,
)


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group(0)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token("op" if kind == "op" else kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col)

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return self.next()

    # par (loosest) > choice > prefix
    def parse_par(self) -> Process:
        left = self.parse_choice()
        while self.peek().kind == "parl":
            sync = self.parse_sync()
            right = self.parse_choice()
            left = Par(sync, left, right)
        return left

    def parse_sync(self) -> tuple[str, ...]:
        self.next()  # |[
        names: list[str] = []
        if self.peek().kind == "act":
            while True:
                tok = self.next()
                if tok.text == TAU:
                    raise ParseError("tau cannot occur in a synchronization set", tok.line, tok.col)
                names.append(tok.text)
                if self.peek().text == ",":
                    self.next()
                else:
                    break
        if self.peek().kind != "parr":
            raise self.error("expected ']|' closing the synchronization set")
        self.next()
        return tuple(sorted(set(names)))

    def parse_choice(self) -> Process:
        left = self.parse_prefix()
        while self.peek().text == "+":
            self.next()
            right = self.parse_prefix()
            left = Choice(left, right)
        return left

    def parse_prefix(self) -> Process:
        tok = self.peek()
        if tok.kind == "nil":
            self.next()
            return NIL
        if tok.text == "(":
            self.next()
            inner = self.parse_par()
            self.expect(")")
            return inner
        if tok.kind == "act":
            self.next()
            executed = False
            if self.peek().text == "!":
                self.next()
                executed = True
            self.expect(".")
            cont = self.parse_prefix()
            return Prefix(tok.text, executed, cont)
        raise self.error(f"expected a process term, found {tok.text or 'end of input'!r}")


def parse(src: str, allow_illformed: bool = False) -> Process:
    """Parse a process term; rejects ill-formed terms unless told otherwise."""
    parser = _Parser(_tokenize(src))
    term = parser.parse_par()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input starting at {tok.text!r}", tok.line, tok.col)
    if not allow_illformed and not is_wellformed(term):
        raise WellFormednessError(_wf_diagnosis(term))
    return term


def _wf_diagnosis(p: ProcessLike, path: str = "") -> str:
    """Name the innermost violated well-formedness clause."""
    where = f" at {path}" if path else ""
    if isinstance(p, Prefix) and not p.executed and not is_initial(p.cont):
        if is_wellformed(p.cont):
            return f"executed action follows an unexecuted one{where}"
        return _wf_diagnosis(p.cont, path + f"{p.action}.")
    if isinstance(p, (Prefix,)) and p.executed and not is_wellformed(p.cont):
        return _wf_diagnosis(p.cont, path + f"{p.action}!.")
    if isinstance(p, Choice):
        li, ri = is_initial(p.left), is_initial(p.right)
        if not li and not ri:
            return f"executed action on both sides of +{where}"
        if not is_wellformed(p.left):
            return _wf_diagnosis(p.left, path + "+l ")
        if not is_wellformed(p.right):
            return _wf_diagnosis(p.right, path + "+r ")
    if isinstance(p, Par):
        if not is_wellformed(p.left):
            return _wf_diagnosis(p.left, path + "|l ")
        if not is_wellformed(p.right):
            return _wf_diagnosis(p.right, path + "|r ")
    return f"term is not well-formed{where}"


# --- rendering -------------------------------------------------------------

_PREC_PAR = 0
_PREC_CHOICE = 1
_PREC_PREFIX = 2


def render(p: ProcessLike, unicode: bool = False) -> str:
    """Minimal-parentheses canonical text form; inverse of :func:`parse`."""
    return _render(p, _PREC_PAR, unicode)


def _mark(executed: bool, unicode: bool) -> str:
    if not executed:
        return ""
    return "†" if unicode else "!"


def _render(p: ProcessLike, level: int, uni: bool) -> str:
    if isinstance(p, Nil):
        return "0"
    if isinstance(p, Prefix):
        return f"{p.action}{_mark(p.executed, uni)}.{_render(p.cont, _PREC_PREFIX, uni)}"
    if isinstance(p, BrsPrefix):
        ready = ",".join(p.display_ready())
        l, r = ("⟨", "⟩") if uni else ("<", ">")
        return f"{l}{p.action}{_mark(p.executed, uni)},{{{ready}}}{r}.{_render(p.cont, _PREC_PREFIX, uni)}"
    if isinstance(p, Choice):
        text = f"{_render(p.left, _PREC_CHOICE, uni)} + {_render(p.right, _PREC_PREFIX, uni)}"
        return f"({text})" if level > _PREC_CHOICE else text
    text = f"{_render(p.left, _PREC_PAR, uni)} |[{','.join(p.sync)}]| {_render(p.right, _PREC_CHOICE, uni)}"
    return f"({text})" if level > _PREC_PAR else text


def render_proof(t: ProofTerm) -> str:
    if isinstance(t, Act):
        return t.name
    if isinstance(t, Dot):
        return "." + render_proof(t.inner)
    if isinstance(t, PlusL):
        return "+l " + render_proof(t.inner)
    if isinstance(t, PlusR):
        return "+r " + render_proof(t.inner)
    if isinstance(t, ParL):
        return "|l " + render_proof(t.inner)
    if isinstance(t, ParR):
        return "|r " + render_proof(t.inner)
    return f"<{render_proof(t.left)}, {render_proof(t.right)}>"


def _proof_tokens(src: str):
    pattern = re.compile(r"\s*(\+l|\+r|\|l|\|r|[a-z][a-z0-9_]*|[.<>,])")
    pos = 0
    out = []
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = pattern.match(src, pos)
        if m is None:
            raise ParseError(f"bad proof term near {src[pos:]!r}", 1, pos + 1)
        out.append(m.group(1))
        pos = m.end()
    return out


def _parse_proof(tokens: list[str], pos: int) -> tuple[ProofTerm, int]:
    if pos >= len(tokens):
        raise ParseError("unexpected end of proof term", 1, pos + 1)
    tok = tokens[pos]
    if tok == ".":
        inner, pos = _parse_proof(tokens, pos + 1)
        return Dot(inner), pos
    if tok == "+l":
        inner, pos = _parse_proof(tokens, pos + 1)
        return PlusL(inner), pos
    if tok == "+r":
        inner, pos = _parse_proof(tokens, pos + 1)
        return PlusR(inner), pos
    if tok == "|l":
        inner, pos = _parse_proof(tokens, pos + 1)
        return ParL(inner), pos
    if tok == "|r":
        inner, pos = _parse_proof(tokens, pos + 1)
        return ParR(inner), pos
    if tok == "<":
        left, pos = _parse_proof(tokens, pos + 1)
        if pos >= len(tokens) or tokens[pos] != ",":
            raise ParseError("expected ',' in synchronization proof", 1, pos + 1)
        right, pos = _parse_proof(tokens, pos + 1)
        if pos >= len(tokens) or tokens[pos] != ">":
            raise ParseError("expected '>' closing synchronization proof", 1, pos + 1)
        return Syn(left, right), pos + 1
    if re.fullmatch(r"[a-z][a-z0-9_]*", tok):
        return Act(tok), pos + 1
    raise ParseError(f"unexpected token {tok!r} in proof term", 1, pos + 1)


def parse_proof_term(src: str) -> ProofTerm:
    tokens = _proof_tokens(src)
    term, pos = _parse_proof(tokens, 0)
    if pos != len(tokens):
        raise ParseError(f"trailing input in proof term: {tokens[pos:]!r}", 1, pos + 1)
    return term
