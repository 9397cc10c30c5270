"""Recursive-descent parser producing the pre-expansion syntax tree.

Collects every grammar violation instead of stopping at the first: on a
bad statement it records a diagnostic and resynchronizes at the next
statement keyword or closing brace. Expression and block nesting are
depth-capped so arbitrary inputs can never blow the interpreter stack.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .diagnostics import CompileError
from .lexer import Token, VarRef, tokenize

MAX_DEPTH = 64

SET_PROPS = ("position", "rotation", "scale", "color", "parent")

IdentTemplate = tuple  # of str | VarRef


# --- expression nodes -------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str
    line: int
    column: int


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"
    line: int
    column: int


Expr = Union[Num, Var, Neg, BinOp]


# --- value nodes -------------------------------------------------------------

@dataclass(frozen=True)
class VecValue:
    items: tuple[Expr, Expr, Expr]
    line: int
    column: int


@dataclass(frozen=True)
class NumberValue:
    expr: Expr
    line: int
    column: int


@dataclass(frozen=True)
class ColorValue:
    rgb: tuple[int, int, int]
    line: int
    column: int


@dataclass(frozen=True)
class IdentValue:
    template: IdentTemplate
    line: int
    column: int


Value = Union[VecValue, NumberValue, ColorValue, IdentValue]


# --- statement nodes ---------------------------------------------------------

@dataclass(frozen=True)
class CreateNode:
    name: IdentTemplate
    shape: IdentTemplate
    parent: Optional[IdentTemplate]
    line: int
    column: int


@dataclass(frozen=True)
class SetNode:
    name: IdentTemplate
    props: tuple  # of (prop_name, Value, line, column)
    line: int
    column: int


@dataclass(frozen=True)
class DeleteNode:
    name: IdentTemplate
    line: int
    column: int


@dataclass(frozen=True)
class BehaviorNode:
    name: IdentTemplate
    kind: IdentTemplate
    params: tuple  # of (key, Value, line, column)
    line: int
    column: int


@dataclass(frozen=True)
class HandlerNode:
    name: IdentTemplate
    body: tuple
    line: int
    column: int


@dataclass(frozen=True)
class RepeatNode:
    var: str
    low: Token
    high: Token
    low_negative: bool
    high_negative: bool
    body: tuple
    line: int
    column: int


Node = Union[CreateNode, SetNode, DeleteNode, BehaviorNode, HandlerNode, RepeatNode]


class _Bail(Exception):
    """Internal: abandon the current statement and resynchronize."""


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.errors: list[CompileError] = []

    # -- token plumbing --

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type != "EOF":
            self.pos += 1
        return tok

    def at(self, ttype: str) -> bool:
        return self.peek().type == ttype

    def error(self, msg: str, tok: Optional[Token] = None) -> None:
        tok = tok or self.peek()
        self.errors.append(CompileError("parse", tok.line, tok.column, msg))

    def bail(self, msg: str, tok: Optional[Token] = None) -> None:
        self.error(msg, tok)
        raise _Bail()

    def expect(self, ttype: str, what: str) -> Token:
        if self.at(ttype):
            return self.advance()
        self.bail(f"expected {what}")
        raise AssertionError  # unreachable

    def expect_ident(self, what: str) -> tuple:
        tok = self.expect("IDENT", what)
        return tok.value  # type: ignore[return-value]

    # -- grammar --

    def parse_program(self) -> list[Node]:
        nodes: list[Node] = []
        while not self.at("EOF"):
            node = self.parse_statement(depth=0)
            if node is not None:
                nodes.append(node)
        return nodes

    def synchronize(self, stop_at_rbrace: bool) -> None:
        while not self.at("EOF"):
            tok = self.peek()
            if tok.type == "KEYWORD":
                return
            if tok.type == "RBRACE" and stop_at_rbrace:
                return
            self.advance()

    def parse_statement(self, depth: int, in_block: bool = False) -> Optional[Node]:
        tok = self.peek()
        try:
            if tok.type != "KEYWORD":
                self.advance()
                self.bail(f"expected a statement keyword, found {_describe(tok)}", tok)
            if depth > MAX_DEPTH:
                self.advance()
                self.bail("statement nesting too deep", tok)
            kw = self.advance()
            if kw.value == "create":
                return self.parse_create(kw)
            if kw.value == "set":
                return self.parse_set(kw)
            if kw.value == "delete":
                name = self.expect_ident("entity name after 'delete'")
                return DeleteNode(name, kw.line, kw.column)
            if kw.value == "behavior":
                return self.parse_behavior(kw)
            if kw.value == "on_interact":
                return self.parse_handler(kw, depth)
            if kw.value == "repeat":
                return self.parse_repeat(kw, depth)
            raise AssertionError(kw)
        except _Bail:
            self.synchronize(stop_at_rbrace=in_block)
            return None

    def parse_create(self, kw: Token) -> CreateNode:
        name = self.expect_ident("entity name after 'create'")
        shape: Optional[tuple] = None
        parent: Optional[tuple] = None
        while self.at("IDENT") and self._next_is_equals():
            key_tok = self.advance()
            key = _template_text(key_tok.value)
            self.expect("EQUALS", "'='")
            if key == "shape":
                shape = self.expect_ident("a shape name")
            elif key == "parent":
                parent = self.expect_ident("a parent entity name")
            else:
                self.bail(f"unknown create argument {key!r} (expected shape= or parent=)", key_tok)
        if shape is None:
            self.bail("create requires shape=<shape>", kw)
        return CreateNode(name, shape, parent, kw.line, kw.column)

    def parse_set(self, kw: Token) -> SetNode:
        name = self.expect_ident("entity name after 'set'")
        props: list = []
        while self.at("IDENT") and self._next_is_equals():
            key_tok = self.advance()
            key = _template_text(key_tok.value)
            self.expect("EQUALS", "'='")
            value = self.parse_value()
            props.append((key, value, key_tok.line, key_tok.column))
        if not props:
            self.bail("set requires at least one property=value pair", kw)
        return SetNode(name, tuple(props), kw.line, kw.column)

    def parse_behavior(self, kw: Token) -> BehaviorNode:
        name = self.expect_ident("entity name after 'behavior'")
        kind = self.expect_ident("a behavior kind")
        params: list = []
        while self.at("IDENT") and self._next_is_equals():
            key_tok = self.advance()
            key = _template_text(key_tok.value)
            self.expect("EQUALS", "'='")
            value = self.parse_value()
            params.append((key, value, key_tok.line, key_tok.column))
        return BehaviorNode(name, kind, tuple(params), kw.line, kw.column)

    def parse_handler(self, kw: Token, depth: int) -> HandlerNode:
        name = self.expect_ident("entity name after 'on_interact'")
        self.expect("LBRACE", "'{'")
        body: list[Node] = []
        while not self.at("RBRACE") and not self.at("EOF"):
            node = self.parse_statement(depth + 1, in_block=True)
            if node is not None:
                body.append(node)
        self.expect("RBRACE", "'}' to close on_interact block")
        return HandlerNode(name, tuple(body), kw.line, kw.column)

    def parse_repeat(self, kw: Token, depth: int) -> RepeatNode:
        var_tok = self.expect("IDENT", "loop variable name after 'repeat'")
        var = _template_text(var_tok.value)
        if any(isinstance(p, VarRef) for p in var_tok.value):
            self.bail("loop variable must be a plain name", var_tok)
        low_neg = bool(self.at("MINUS") and self.advance())
        low = self.expect("NUMBER", "integer lower bound")
        self.expect("DOTDOT", "'..' between repeat bounds")
        high_neg = bool(self.at("MINUS") and self.advance())
        high = self.expect("NUMBER", "integer upper bound")
        self.expect("LBRACE", "'{'")
        body: list[Node] = []
        while not self.at("RBRACE") and not self.at("EOF"):
            node = self.parse_statement(depth + 1, in_block=True)
            if node is not None:
                body.append(node)
        self.expect("RBRACE", "'}' to close repeat block")
        return RepeatNode(var, low, high, low_neg, high_neg, tuple(body), kw.line, kw.column)

    def _next_is_equals(self) -> bool:
        return self.tokens[self.pos + 1].type == "EQUALS" if self.pos + 1 < len(self.tokens) else False

    # -- values and expressions --

    def parse_value(self) -> Value:
        tok = self.peek()
        if tok.type == "COLOR":
            self.advance()
            return ColorValue(tok.value, tok.line, tok.column)
        if tok.type == "IDENT":
            self.advance()
            return IdentValue(tok.value, tok.line, tok.column)
        if tok.type == "LPAREN":
            return self.parse_paren_value()
        expr = self.parse_expr(0)
        return NumberValue(expr, tok.line, tok.column)

    def parse_paren_value(self) -> Value:
        lparen = self.advance()
        first = self.parse_expr(0)
        if self.at("COMMA"):
            self.advance()
            second = self.parse_expr(0)
            self.expect("COMMA", "',' in vector")
            third = self.parse_expr(0)
            self.expect("RPAREN", "')' to close vector")
            return VecValue((first, second, third), lparen.line, lparen.column)
        self.expect("RPAREN", "')'")
        return NumberValue(first, lparen.line, lparen.column)

    def parse_expr(self, depth: int) -> Expr:
        if depth > MAX_DEPTH:
            self.bail("expression nesting too deep")
        left = self.parse_term(depth)
        while self.peek().type in ("PLUS", "MINUS"):
            op = self.advance()
            right = self.parse_term(depth)
            left = BinOp("+" if op.type == "PLUS" else "-", left, right, op.line, op.column)
        return left

    def parse_term(self, depth: int) -> Expr:
        left = self.parse_factor(depth)
        while self.peek().type in ("STAR", "SLASH"):
            op = self.advance()
            right = self.parse_factor(depth)
            left = BinOp("*" if op.type == "STAR" else "/", left, right, op.line, op.column)
        return left

    def parse_factor(self, depth: int) -> Expr:
        if depth > MAX_DEPTH:
            self.bail("expression nesting too deep")
        tok = self.peek()
        if tok.type == "NUMBER":
            self.advance()
            return Num(tok.value)
        if tok.type == "MINUS":
            self.advance()
            return Neg(self.parse_factor(depth + 1))
        if tok.type == "PLUS":
            self.advance()
            return self.parse_factor(depth + 1)
        if tok.type == "IDENT":
            parts = tok.value
            if len(parts) == 1 and isinstance(parts[0], VarRef):
                self.advance()
                return Var(parts[0].name, tok.line, tok.column)
            self.advance()
            self.bail(f"expected a number or $variable, found {_describe(tok)}", tok)
        if tok.type == "LPAREN":
            self.advance()
            inner = self.parse_expr(depth + 1)
            self.expect("RPAREN", "')'")
            return inner
        self.advance()
        self.bail(f"expected a number expression, found {_describe(tok)}", tok)
        raise AssertionError  # unreachable


def _template_text(parts: tuple) -> str:
    return "".join(p if isinstance(p, str) else f"${p.name}" for p in parts)


def _describe(tok: Token) -> str:
    if tok.type == "EOF":
        return "end of input"
    if tok.type == "IDENT":
        return f"'{_template_text(tok.value)}'"
    if tok.type == "KEYWORD":
        return f"keyword '{tok.value}'"
    return f"'{tok.value}'"


def parse(text: str) -> tuple[list[Node], list[CompileError]]:
    tokens, lex_errors = tokenize(text)
    parser = Parser(tokens)
    nodes = parser.parse_program()
    return nodes, lex_errors + parser.errors
