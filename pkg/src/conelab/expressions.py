"""Minimal arithmetic expression language for configuration documents.

The grammar (see ``docs/grammar.md`` for the EBNF) allows numbers, the
constants ``pi`` and ``e``, coordinate names, ``+ - * / ^`` (``**`` is accepted
as a synonym for ``^``), unary minus, parentheses, and the functions ``exp``,
``sin``, ``cos``, ``log`` and ``sqrt``.

Expressions are parsed once with :mod:`ast` into a whitelisted tree and then
compiled to a closure, so evaluation works unchanged on floats, numpy arrays
and :class:`~conelab.jets.Jet` objects.
"""

import ast
import math

from . import jets
from .errors import ConfigurationError

FUNCTIONS = {
    "exp": jets.exp,
    "sin": jets.sin,
    "cos": jets.cos,
    "log": jets.log,
    "sqrt": jets.sqrt,
}
CONSTANTS = {"pi": math.pi, "e": math.e}

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a ** b,
}


def _compile(node, names):
    if isinstance(node, ast.Expression):
        return _compile(node.body, names)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        val = float(node.value)
        return lambda env: val
    if isinstance(node, ast.Name):
        if node.id in names:
            key = node.id
            return lambda env: env[key]
        if node.id in CONSTANTS:
            val = CONSTANTS[node.id]
            return lambda env: val
        raise ConfigurationError(f"unknown name {node.id!r} in expression")
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op = _BINOPS[type(node.op)]
        left, right = _compile(node.left, names), _compile(node.right, names)
        if isinstance(node.op, ast.Pow) and isinstance(node.right, ast.Constant):
            # keep small integer exponents integral so jets use exact repeated products
            exponent = node.right.value
            if float(exponent).is_integer() and exponent >= 0:
                k = int(exponent)
                return lambda env: left(env) ** k
        return lambda env: op(left(env), right(env))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _compile(node.operand, names)
        if isinstance(node.op, ast.USub):
            return lambda env: -inner(env)
        return inner
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
            and node.func.id in FUNCTIONS and len(node.args) == 1 and not node.keywords:
        fn = FUNCTIONS[node.func.id]
        arg = _compile(node.args[0], names)
        return lambda env: fn(arg(env))
    raise ConfigurationError(f"unsupported syntax in expression: {ast.dump(node)[:60]}")


class Expression:
    """A compiled expression over a fixed tuple of variable names."""

    def __init__(self, source, names):
        if isinstance(source, (int, float)) and not isinstance(source, bool):
            source = repr(float(source))
        if not isinstance(source, str) or not source.strip():
            raise ConfigurationError(f"expression must be a non-empty string, got {source!r}")
        self.source = source
        self.names = tuple(names)
        text = source.replace("^", "**")
        try:
            tree = ast.parse(text, mode="eval")
        except SyntaxError as exc:
            raise ConfigurationError(f"cannot parse expression {source!r}: {exc.msg}") from None
        self._fn = _compile(tree, set(self.names))

    def __call__(self, *args):
        if len(args) != len(self.names):
            raise ConfigurationError(f"expression {self.source!r} takes {len(self.names)} arguments")
        return self._fn(dict(zip(self.names, args)))

    def __repr__(self):
        return f"Expression({self.source!r}, names={self.names})"


def parse(source, names):
    """Compile ``source`` as a function of the variables ``names``."""
    return Expression(source, names)
