"""Static checking, constant folding, and repeat expansion.

The output program is a flat list of runtime commands: every loop is
unrolled with its variable substituted, every arithmetic expression is
folded to a literal, and every name/shape/keyword problem has been
reported. Runtime errors are therefore exclusively name and structure
errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from ..runtime.commands import AttachBehavior, AttachHandler, Command, Create, Delete, Set
from ..runtime.entities import BEHAVIOR_KINDS, SELF_NAME, SHAPES
from .diagnostics import CompileError
from .lexer import VarRef
from .parser import (
    BehaviorNode,
    BinOp,
    ColorValue,
    CreateNode,
    DeleteNode,
    Expr,
    HandlerNode,
    IdentValue,
    Neg,
    Node,
    Num,
    NumberValue,
    RepeatNode,
    SetNode,
    Value,
    VecValue,
    Var,
)

MAX_PROGRAM_STATEMENTS = 100_000

BEHAVIOR_PARAMS = {
    "spin": {"axis": "vec", "speed": "num"},
    "orbit": {"center": "ident", "radius": "num", "speed": "num"},
    "oscillate": {"axis": "vec", "amplitude": "num", "period": "num"},
    "follow": {"target": "ident", "speed": "num"},
}

HANDLER_BODY_KINDS = (CreateNode, SetNode, DeleteNode)


@dataclass
class Program:
    commands: list[Command] = field(default_factory=list)
    origins: list[tuple[int, int]] = field(default_factory=list)  # (line, column) per command
    source_id: str = ""

    def __len__(self) -> int:
        return len(self.commands)


class Checker:
    def __init__(self) -> None:
        self.errors: list[CompileError] = []
        self.program = Program()
        self.overflow = False

    def err(self, line: int, column: int, message: str) -> None:
        self.errors.append(CompileError("check", line, column, message))

    def emit(self, cmd: Command, line: int, column: int) -> None:
        if len(self.program.commands) >= MAX_PROGRAM_STATEMENTS:
            if not self.overflow:
                self.overflow = True
                self.err(line, column, f"program expands past {MAX_PROGRAM_STATEMENTS} statements")
            return
        self.program.commands.append(cmd)
        self.program.origins.append((line, column))

    # -- template and expression evaluation --

    def resolve_name(self, template: tuple, env: dict, line: int, column: int,
                     allow_self: bool = False) -> Optional[str]:
        out = []
        for part in template:
            if isinstance(part, VarRef):
                if part.name not in env:
                    self.err(line, column, f"undefined loop variable ${part.name}")
                    return None
                out.append(str(env[part.name]))
            else:
                out.append(part)
        name = "".join(out)
        if name == SELF_NAME:
            if allow_self:
                return name
            self.err(line, column, "'self' is reserved for on_interact bodies")
            return None
        if not (name[0].isalpha() or name[0] == "_") or not all(c.isalnum() or c == "_" for c in name):
            self.err(line, column, f"expanded name {name!r} is not a valid identifier")
            return None
        return name

    def eval_expr(self, expr: Expr, env: dict) -> Optional[float]:
        if isinstance(expr, Num):
            return expr.value
        if isinstance(expr, Var):
            if expr.name not in env:
                self.err(expr.line, expr.column, f"undefined loop variable ${expr.name}")
                return None
            return float(env[expr.name])
        if isinstance(expr, Neg):
            inner = self.eval_expr(expr.operand, env)
            return None if inner is None else -inner
        if isinstance(expr, BinOp):
            left = self.eval_expr(expr.left, env)
            right = self.eval_expr(expr.right, env)
            if left is None or right is None:
                return None
            if expr.op == "+":
                value = left + right
            elif expr.op == "-":
                value = left - right
            elif expr.op == "*":
                value = left * right
            else:
                if right == 0:
                    self.err(expr.line, expr.column, "division by zero in a constant expression")
                    return None
                value = left / right
            if not math.isfinite(value):
                self.err(expr.line, expr.column, "expression overflows to a non-finite value")
                return None
            return value
        raise AssertionError(expr)

    def eval_number(self, value: Value, env: dict, what: str) -> Optional[float]:
        if isinstance(value, NumberValue):
            return self.eval_expr(value.expr, env)
        self.err(value.line, value.column, f"{what} must be a number")
        return None

    def eval_vec(self, value: Value, env: dict, what: str) -> Optional[tuple]:
        if isinstance(value, VecValue):
            items = [self.eval_expr(e, env) for e in value.items]
            if any(v is None for v in items):
                return None
            return tuple(items)
        self.err(value.line, value.column, f"{what} must be a vector (x,y,z)")
        return None

    def eval_ident(self, value: Value, env: dict, what: str, allow_self: bool = False) -> Optional[str]:
        if isinstance(value, IdentValue):
            return self.resolve_name(value.template, env, value.line, value.column, allow_self)
        self.err(value.line, value.column, f"{what} must be an entity name")
        return None

    # -- statements --

    def check_program(self, nodes: list[Node]) -> None:
        for node in nodes:
            self.check_statement(node, env={}, handler_depth=0, sink=self.emit)

    def check_statement(self, node: Node, env: dict, handler_depth: int, sink) -> None:
        if isinstance(node, CreateNode):
            cmd = self.check_create(node, env, in_handler=handler_depth > 0)
        elif isinstance(node, SetNode):
            cmd = self.check_set(node, env, in_handler=handler_depth > 0)
        elif isinstance(node, DeleteNode):
            cmd = self.check_delete(node, env, in_handler=handler_depth > 0)
        elif isinstance(node, BehaviorNode):
            if handler_depth > 0:
                self.err(node.line, node.column, "behavior statements are not allowed inside on_interact")
                return
            cmd = self.check_behavior(node, env)
        elif isinstance(node, HandlerNode):
            if handler_depth > 0:
                self.err(node.line, node.column, "on_interact blocks cannot be nested")
                return
            cmd = self.check_handler(node, env)
        elif isinstance(node, RepeatNode):
            if handler_depth > 0:
                self.err(node.line, node.column, "repeat blocks are not allowed inside on_interact")
                return
            self.expand_repeat(node, env, sink)
            return
        else:
            raise AssertionError(node)
        if cmd is not None:
            sink(cmd, node.line, node.column)

    def check_create(self, node: CreateNode, env: dict, in_handler: bool) -> Optional[Create]:
        name = self.resolve_name(node.name, env, node.line, node.column)
        shape = self.resolve_name(node.shape, env, node.line, node.column)
        parent = None
        if node.parent is not None:
            parent = self.resolve_name(node.parent, env, node.line, node.column, allow_self=in_handler)
            if parent is None:
                return None
        if shape is not None and shape not in SHAPES:
            self.err(node.line, node.column, f"unknown shape {shape!r} (expected one of {', '.join(SHAPES)})")
            return None
        if name is None or shape is None:
            return None
        return Create(name=name, shape=shape, parent=parent)

    def check_set(self, node: SetNode, env: dict, in_handler: bool) -> Optional[Set]:
        name = self.resolve_name(node.name, env, node.line, node.column, allow_self=in_handler)
        updates: dict = {}
        ok = name is not None
        for prop, value, line, column in node.props:
            if prop in ("position", "rotation", "scale"):
                vec = self.eval_vec(value, env, prop)
                if vec is None:
                    ok = False
                    continue
                if prop == "scale" and any(c <= 0 for c in vec):
                    self.err(line, column, "scale components must be > 0")
                    ok = False
                    continue
                updates[prop] = vec
            elif prop == "color":
                if not isinstance(value, ColorValue):
                    self.err(line, column, "color must be a #RRGGBB literal")
                    ok = False
                    continue
                updates[prop] = value.rgb
            elif prop == "parent":
                target = self.eval_ident(value, env, "parent", allow_self=in_handler)
                if target is None:
                    ok = False
                    continue
                updates[prop] = target
            else:
                self.err(line, column, f"unknown property {prop!r} (expected one of position, rotation, scale, color, parent)")
                ok = False
        return Set(name=name, updates=updates) if ok and updates else None

    def check_delete(self, node: DeleteNode, env: dict, in_handler: bool) -> Optional[Delete]:
        name = self.resolve_name(node.name, env, node.line, node.column, allow_self=in_handler)
        return None if name is None else Delete(name=name)

    def check_behavior(self, node: BehaviorNode, env: dict) -> Optional[AttachBehavior]:
        name = self.resolve_name(node.name, env, node.line, node.column)
        kind = self.resolve_name(node.kind, env, node.line, node.column)
        if kind is not None and kind not in BEHAVIOR_KINDS:
            self.err(node.line, node.column,
                     f"unknown behavior {kind!r} (expected one of {', '.join(BEHAVIOR_KINDS)})")
            return None
        if name is None or kind is None:
            return None
        spec = BEHAVIOR_PARAMS[kind]
        params: dict = {}
        ok = True
        for key, value, line, column in node.params:
            if key not in spec:
                self.err(line, column, f"unknown parameter {key!r} for behavior {kind}")
                ok = False
                continue
            if spec[key] == "num":
                num = self.eval_number(value, env, key)
                if num is None:
                    ok = False
                    continue
                params[key] = num
            elif spec[key] == "vec":
                vec = self.eval_vec(value, env, key)
                if vec is None:
                    ok = False
                    continue
                if all(c == 0 for c in vec):
                    self.err(line, column, f"{key} must be a non-zero vector")
                    ok = False
                    continue
                params[key] = vec
            else:
                ident = self.eval_ident(value, env, key)
                if ident is None:
                    ok = False
                    continue
                params[key] = ident
        missing = [k for k in spec if k not in params]
        if missing and ok:
            self.err(node.line, node.column, f"behavior {kind} requires {', '.join(sorted(spec))}")
            ok = False
        if ok:
            if kind == "oscillate" and params["period"] <= 0:
                self.err(node.line, node.column, "oscillate period must be > 0")
                ok = False
            if kind == "follow" and params["speed"] < 0:
                self.err(node.line, node.column, "follow speed must be >= 0")
                ok = False
        return AttachBehavior(name=name, kind=kind, params=params) if ok else None

    def check_handler(self, node: HandlerNode, env: dict) -> Optional[AttachHandler]:
        name = self.resolve_name(node.name, env, node.line, node.column)
        body: list[Command] = []
        ok = name is not None

        def collect(cmd: Command, line: int, column: int) -> None:
            body.append(cmd)

        for stmt in node.body:
            if not isinstance(stmt, HANDLER_BODY_KINDS):
                self.err(stmt.line, stmt.column,
                         "on_interact bodies may only contain set, create, and delete statements")
                ok = False
                continue
            before = len(self.errors)
            self.check_statement(stmt, env, handler_depth=1, sink=collect)
            if len(self.errors) > before:
                ok = False
        return AttachHandler(name=name, body=tuple(body)) if ok else None

    def expand_repeat(self, node: RepeatNode, env: dict, sink) -> None:
        low = self.repeat_bound(node.low, node.low_negative)
        high = self.repeat_bound(node.high, node.high_negative)
        if low is None or high is None:
            return
        for i in range(low, high + 1):
            inner = dict(env)
            inner[node.var] = i
            for stmt in node.body:
                self.check_statement(stmt, inner, handler_depth=0, sink=sink)
            if self.overflow:
                return

    def repeat_bound(self, tok, negative: bool) -> Optional[int]:
        value = -tok.value if negative else tok.value
        if value != int(value):
            self.err(tok.line, tok.column, f"repeat bounds must be integers, got {value}")
            return None
        return int(value)


def check(nodes: list[Node], source_id: str = "") -> tuple[Program, list[CompileError]]:
    checker = Checker()
    checker.check_program(nodes)
    checker.program.source_id = source_id
    return checker.program, checker.errors
