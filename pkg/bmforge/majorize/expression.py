"""
Weight Expressions

A small arithmetic grammar for non-radial weights over coordinates:

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/' | '×' | '÷') unary)*
    unary  := ('-' | '−') unary | power
    power  := atom ('^' unary)?
    atom   := number | name | func '(' expr ')' | '(' expr ')'

Names are x1..xd, pi and e; functions are exp, log, sqrt, abs and norm,
where norm(x) is the Euclidean norm of the point. Expressions compile to
vectorized callables on arrays of shape (n, d).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from ..errors import EvaluationFailed, ParseError
from ..weights.profile import preset_log_weight

Evaluator = Callable[[np.ndarray], np.ndarray]

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|([A-Za-z_]\w*)|(.))")
_FUNCTIONS = {"exp": np.exp, "log": np.log, "sqrt": np.sqrt, "abs": np.abs}
_CONSTANTS = {"pi": np.pi, "e": np.e}


@dataclass
class _Token:
    kind: str
    text: str


def tokenize(source: str) -> List[_Token]:
    tokens: List[_Token] = []
    pos = 0
    source = source.strip()
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"cannot tokenize expression at position {pos}: {source!r}")
        number, name, op = m.groups()
        if number is not None:
            tokens.append(_Token("num", number))
        elif name is not None:
            tokens.append(_Token("name", name))
        elif op is not None and op.strip():
            tokens.append(_Token("op", op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: List[_Token], dim: int):
        self.tokens = tokens
        self.pos = 0
        self.dim = dim

    def peek(self) -> _Token:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else _Token("end", "")

    def take(self) -> _Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.take()
        if tok.text != text:
            raise ParseError(f"expected '{text}', found '{tok.text or 'end of input'}'")

    def parse(self) -> Evaluator:
        node = self.expr()
        if self.peek().kind != "end":
            raise ParseError(f"unexpected '{self.peek().text}' after expression")
        return node

    def expr(self) -> Evaluator:
        node = self.term()
        while self.peek().text in ("+", "-", "−"):
            op = self.take().text
            rhs = self.term()
            node = _binary(node, rhs, np.add if op == "+" else np.subtract)
        return node

    def term(self) -> Evaluator:
        node = self.unary()
        while self.peek().text in ("*", "/", "×", "÷"):
            op = self.take().text
            rhs = self.unary()
            node = _binary(node, rhs, np.multiply if op in ("*", "×") else np.divide)
        return node

    def unary(self) -> Evaluator:
        if self.peek().text in ("-", "−"):
            self.take()
            inner = self.unary()
            return lambda x: -inner(x)
        if self.peek().text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Evaluator:
        base = self.atom()
        if self.peek().text == "^":
            self.take()
            exponent = self.unary()
            return _binary(base, exponent, np.power)
        return base

    def atom(self) -> Evaluator:
        tok = self.take()
        if tok.kind == "num":
            value = float(tok.text)
            return lambda x: np.full(x.shape[0], value)
        if tok.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "name":
            return self.name(tok.text)
        raise ParseError(f"unexpected '{tok.text or 'end of input'}'")

    def name(self, text: str) -> Evaluator:
        if text == "norm":
            self.expect("(")
            arg = self.take()
            if arg.text != "x":
                raise ParseError("norm takes the point x as its argument")
            self.expect(")")
            return lambda x: np.linalg.norm(x, axis=1)
        if text in _FUNCTIONS:
            func = _FUNCTIONS[text]
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            return lambda x: func(inner(x))
        if text in _CONSTANTS:
            value = _CONSTANTS[text]
            return lambda x: np.full(x.shape[0], value)
        m = re.fullmatch(r"x(\d+)", text)
        if m:
            index = int(m.group(1))
            if not 1 <= index <= self.dim:
                raise ParseError(f"coordinate {text} outside dimension {self.dim}")
            return lambda x: x[:, index - 1]
        raise ParseError(f"unknown name '{text}'")


def _binary(lhs: Evaluator, rhs: Evaluator, op) -> Evaluator:
    return lambda x: op(lhs(x), rhs(x))


def compile_expression(source: str, dim: int) -> Evaluator:
    """Callable mapping points of shape (n, dim) to values of shape (n,)."""
    tokens = tokenize(source)
    if not tokens:
        raise ParseError("empty expression")
    return _Parser(tokens, dim).parse()


def _exp_argument(source: str):
    """The argument of a top-level exp(...), or None."""
    text = source.strip()
    if not (text.startswith("exp(") and text.endswith(")")):
        return None
    depth = 0
    for i, ch in enumerate(text[3:], start=3):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return text[4:-1] if i == len(text) - 1 else None
    return None


def _guarded(func: Evaluator) -> Evaluator:
    def _evaluate(x: np.ndarray) -> np.ndarray:
        try:
            with np.errstate(all="ignore"):
                out = np.asarray(func(x), dtype=float)
        except (ArithmeticError, ValueError, TypeError, IndexError) as exc:
            raise EvaluationFailed(f"weight evaluation failed: {exc}") from exc
        if out.shape != (x.shape[0],) or not np.all(np.isfinite(out)):
            raise EvaluationFailed("log-weight is not finite at every sample")
        return out

    return _evaluate


def log_weight_evaluator(spec: str, dim: int) -> Evaluator:
    """Omega = log(1/omega) for a radial preset or an expression over x1..xd.

    A top-level exp(E) is read as Omega = -E, so weights far below the
    float range stay finite in log form.
    """
    if spec in ("exp_sqrt", "const", "exp") or spec.startswith("power:"):
        preset_log_weight(spec, np.zeros(1))
        return _guarded(lambda x: preset_log_weight(spec, np.linalg.norm(x, axis=1)))
    inner = _exp_argument(spec)
    if inner is not None:
        exponent = compile_expression(inner, dim)
        return _guarded(lambda x: -exponent(x))
    weight = compile_expression(spec, dim)

    def _log(x: np.ndarray) -> np.ndarray:
        w = weight(x)
        if np.any(w <= 0):
            raise EvaluationFailed("weight must be positive at every sample")
        return -np.log(w)

    return _guarded(_log)
