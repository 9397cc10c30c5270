"""Tokenizer for scene scripts.

Identifiers may embed loop-variable references (``leg$i``); such tokens
carry a parts list mixing literal strings and VarRef markers. Semicolons
and ``//`` line comments are trivia. Lexing never raises: every illegal
character becomes a diagnostic and scanning continues.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import CompileError

KEYWORDS = frozenset({"create", "set", "delete", "behavior", "on_interact", "repeat"})

PUNCT = {
    "{": "LBRACE",
    "}": "RBRACE",
    "(": "LPAREN",
    ")": "RPAREN",
    ",": "COMMA",
    "=": "EQUALS",
    "+": "PLUS",
    "-": "MINUS",
    "*": "STAR",
    "/": "SLASH",
}


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class Token:
    type: str  # KEYWORD IDENT NUMBER COLOR DOTDOT EOF or a PUNCT name
    value: object
    line: int
    column: int


_ASCII_DIGITS = "0123456789"


def _ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(text: str) -> tuple[list[Token], list[CompileError]]:
    tokens: list[Token] = []
    errors: list[CompileError] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def err(msg: str, at_line: int, at_col: int) -> None:
        errors.append(CompileError("lex", at_line, at_col, msg))

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r;":
            i += 1
            col += 1
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        start_line, start_col = line, col
        if _ident_start(ch) or ch == "$":
            parts: list[object] = []
            while i < n and (_ident_char(text[i]) or text[i] == "$"):
                if text[i] == "$":
                    i += 1
                    col += 1
                    name_start = i
                    while i < n and _ident_char(text[i]):
                        i += 1
                        col += 1
                    if i == name_start:
                        err("'$' must be followed by a loop-variable name", start_line, start_col)
                        break
                    parts.append(VarRef(text[name_start:i]))
                else:
                    run_start = i
                    while i < n and _ident_char(text[i]):
                        i += 1
                        col += 1
                    parts.append(text[run_start:i])
            if len(parts) == 1 and isinstance(parts[0], str) and parts[0] in KEYWORDS:
                tokens.append(Token("KEYWORD", parts[0], start_line, start_col))
            elif parts:
                tokens.append(Token("IDENT", tuple(parts), start_line, start_col))
            continue
        if ch in _ASCII_DIGITS:
            num_start = i
            while i < n and text[i] in _ASCII_DIGITS:
                i += 1
                col += 1
            if i < n and text[i] == "." and i + 1 < n and text[i + 1] in _ASCII_DIGITS:
                i += 1
                col += 1
                while i < n and text[i] in _ASCII_DIGITS:
                    i += 1
                    col += 1
            tokens.append(Token("NUMBER", float(text[num_start:i]), start_line, start_col))
            continue
        if ch == ".":
            if i + 1 < n and text[i + 1] == ".":
                tokens.append(Token("DOTDOT", "..", start_line, start_col))
                i += 2
                col += 2
            else:
                err("stray '.'", start_line, start_col)
                i += 1
                col += 1
            continue
        if ch == "#":
            lit = text[i : i + 7]
            if len(lit) == 7 and all(c in "0123456789abcdefABCDEF" for c in lit[1:]):
                rgb = tuple(int(lit[k : k + 2], 16) for k in (1, 3, 5))
                tokens.append(Token("COLOR", rgb, start_line, start_col))
                i += 7
                col += 7
            else:
                err("malformed color literal (expected #RRGGBB)", start_line, start_col)
                i += 1
                col += 1
            continue
        if ch in PUNCT:
            tokens.append(Token(PUNCT[ch], ch, start_line, start_col))
            i += 1
            col += 1
            continue
        err(f"illegal character {ch!r}", start_line, start_col)
        i += 1
        col += 1

    tokens.append(Token("EOF", None, line, max(col, 1)))
    return tokens, errors
