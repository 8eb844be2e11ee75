"""Lexer, parser, AST, and evaluator for the hybrid while-language.

The language is a small imperative core (assignment, sequencing, if,
while) plus blocks of differential equations that evolve a set of
variables either for a fixed duration or until a condition becomes true:

    x := 0; v := 2;
    a := [2, 4, 6, 8, 10];        // one simulation per listed value
    while true do {
      if v > 10 then a := -2;
      x' = v, v' = a for 1;
    }

Statements end with ';', blocks are brace-delimited, and '//' starts a
line comment. Array initializers ([v1, v2, ...] or [lo..hi] with
unit-step integer ranges) are only legal at top level before the first
while loop or differential block.

All variables hold reals. Boolean expressions (comparisons, &&, ||, !)
are legal as guards and analysis predicates but cannot be stored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    LexError,
    ParseError,
    RangeError,
    StructureError,
    TypeCheckError,
    EvalError,
    UndefinedVariable,
)

__all__ = [
    "Token", "tokenize", "expand_range", "parse", "parse_expression",
    "pretty_print", "ast_dump", "expr_to_str", "eval_expr", "free_vars",
    "expr_type",
    "Num", "Var", "Neg", "BinOp", "Sqrt", "Compare", "And", "Or", "Not",
    "Bool", "Assign", "AssignVariants", "Seq", "If", "While", "OdeBlock",
    "Duration", "Until", "Program",
]

KEYWORDS = {"if", "then", "else", "while", "do", "true", "false",
            "for", "until", "sqrt"}

Pos = tuple[int, int]


# ---------------------------------------------------------------------------
# Tokens

@dataclass(frozen=True)
class Token:
    kind: str            # 'NUM', 'IDENT', a keyword, or an operator lexeme
    text: str
    value: float | None
    line: int
    col: int

    @property
    def pos(self) -> Pos:
        return (self.line, self.col)


_NUM_RE = re.compile(r"\d+(\.\d+)?([eE][+-]?\d+)?", re.ASCII)
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*", re.ASCII)
_INT_LITERAL_RE = re.compile(r"-?\d+\Z", re.ASCII)

_TWO_CHAR = (":=", "==", "!=", "<=", ">=", "&&", "||", "..")
_ASCII_DIGITS = "0123456789"


def _is_ident_start(ch: str) -> bool:
    return "a" <= ch <= "z" or "A" <= ch <= "Z" or ch == "_"
_ONE_CHAR = "'=<>!+-*/()[]{},;@:"

# Tokens after which a '-' followed by a digit starts a negative number
# literal rather than a subtraction. Everything that can end an operand
# (numbers, identifiers, closing brackets, boolean literals) is absent.
_SIGN_STICKS_AFTER = set(_TWO_CHAR) | set("'=<>!+-*/([{,;@:") | (
    KEYWORDS - {"true", "false"})


def tokenize(source: str) -> list[Token]:
    """Split source text into tokens with 1-based line/col positions.

    Raises LexError at the first unknown character; tokens before the
    error are discarded with it.
    """
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            if j < 0:
                break
            col += j - i
            i = j
            continue
        if ch == "-" and i + 1 < n and source[i + 1] in _ASCII_DIGITS:
            prev = tokens[-1].kind if tokens else None
            if prev is None or prev in _SIGN_STICKS_AFTER:
                m = _NUM_RE.match(source, i + 1)
                text = "-" + m.group(0)
                tokens.append(Token("NUM", text, -float(m.group(0)), line, col))
                col += m.end() - i
                i = m.end()
                continue
        if ch in _ASCII_DIGITS:
            m = _NUM_RE.match(source, i)
            text = m.group(0)
            tokens.append(Token("NUM", text, float(text), line, col))
            col += len(text)
            i = m.end()
            continue
        if _is_ident_start(ch):
            m = _IDENT_RE.match(source, i)
            text = m.group(0)
            kind = text if text in KEYWORDS else "IDENT"
            tokens.append(Token(kind, text, None, line, col))
            col += len(text)
            i = m.end()
            continue
        two = source[i:i + 2]
        if two in _TWO_CHAR:
            tokens.append(Token(two, two, None, line, col))
            i += 2
            col += 2
            continue
        if ch in _ONE_CHAR:
            tokens.append(Token(ch, ch, None, line, col))
            i += 1
            col += 1
            continue
        raise LexError(f"unexpected character {ch!r}", (line, col))
    tokens.append(Token("EOF", "", None, line, col))
    return tokens


def expand_range(lo, hi) -> list[float]:
    """[lo, lo+1, ..., hi] with unit steps; bounds must be integers."""
    if lo != int(lo) or hi != int(hi):
        raise RangeError(f"range bounds must be integers, got [{lo}..{hi}]")
    if lo > hi:
        raise RangeError(f"descending range [{int(lo)}..{int(hi)}]")
    return [float(v) for v in range(int(lo), int(hi) + 1)]


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: float
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class BinOp:
    op: str              # '+', '-', '*', '/'
    left: "Expr"
    right: "Expr"
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Sqrt:
    operand: "Expr"
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Compare:
    op: str              # '==', '!=', '<', '<=', '>', '>='
    left: "Expr"
    right: "Expr"
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Not:
    operand: "Expr"
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Bool:
    value: bool
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


Expr = Num | Var | Neg | BinOp | Sqrt | Compare | And | Or | Not | Bool


@dataclass(frozen=True)
class Assign:
    name: str
    expr: Expr
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class AssignVariants:
    name: str
    values: tuple[float, ...]
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Seq:
    stmts: tuple["Stmt", ...]
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class If:
    guard: Expr
    then_body: "Stmt"
    else_body: "Stmt"
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class While:
    guard: Expr
    body: "Stmt"
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Duration:
    expr: Expr
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Until:
    condition: Expr      # evolution stops when this becomes true
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class OdeBlock:
    equations: tuple[tuple[str, Expr], ...]
    bound: Duration | Until
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


Stmt = Assign | AssignVariants | Seq | If | While | OdeBlock


@dataclass(frozen=True)
class Program:
    body: Seq
    source: str = field(default="", compare=False, repr=False)


# ---------------------------------------------------------------------------
# Parser

# Binding powers. '!' binds tighter than comparisons, which bind tighter
# than '&&', which binds tighter than '||'; '*'/'/' over '+'/'-'.
_BP_OR = 10
_BP_AND = 20
_BP_CMP = 30
_BP_ADD = 40
_BP_MUL = 50
_BP_PREFIX = 60

_CMP_OPS = ("==", "!=", "<", "<=", ">", ">=")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"expected {kind!r}, found {tok.text or 'end of input'!r}",
                tok.pos)
        return self.next()

    # -- statements ---------------------------------------------------------

    def program(self, source: str) -> Program:
        stmts = []
        while self.peek().kind != "EOF":
            stmts.append(self.statement())
        return Program(Seq(tuple(stmts)), source)

    def statement(self) -> Stmt:
        tok = self.peek()
        if tok.kind == "{":
            return self.block()
        if tok.kind == "if":
            return self.if_stmt()
        if tok.kind == "while":
            return self.while_stmt()
        if tok.kind == "IDENT":
            nxt = self.peek(1).kind
            if nxt == ":=":
                return self.assign()
            if nxt == "'":
                return self.ode_block()
            raise ParseError(
                f"expected ':=' or ''' after '{tok.text}'", self.peek(1).pos)
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)

    def block(self) -> Stmt:
        pos = self.expect("{").pos
        stmts = []
        while self.peek().kind not in ("}", "EOF"):
            stmts.append(self.statement())
        self.expect("}")
        if len(stmts) == 1:
            return stmts[0]          # braces around one statement are pure syntax
        return Seq(tuple(stmts), pos)

    def assign(self) -> Stmt:
        name_tok = self.expect("IDENT")
        self.expect(":=")
        if self.peek().kind == "[":
            stmt = self.array_initializer(name_tok)
        else:
            stmt = Assign(name_tok.text, self.expression(), name_tok.pos)
        self.expect(";")
        return stmt

    def array_initializer(self, name_tok: Token) -> AssignVariants:
        self.expect("[")
        first = self.expect("NUM")
        if self.peek().kind == "..":
            self.next()
            second = self.expect("NUM")
            for tok in (first, second):
                if not _INT_LITERAL_RE.match(tok.text):
                    raise RangeError(
                        f"range bounds must be integer literals, got {tok.text!r}",
                        tok.pos)
            try:
                values = expand_range(first.value, second.value)
            except RangeError as exc:
                raise RangeError(exc.message, first.pos) from None
        else:
            values = [first.value]
            while self.peek().kind == ",":
                self.next()
                values.append(self.expect("NUM").value)
        self.expect("]")
        return AssignVariants(name_tok.text, tuple(values), name_tok.pos)

    def if_stmt(self) -> Stmt:
        pos = self.expect("if").pos
        guard = self.expression()
        self.expect("then")
        then_body = self.statement()
        else_body: Stmt = Seq(())
        if self.peek().kind == "else":
            self.next()
            else_body = self.statement()
        return If(guard, then_body, else_body, pos)

    def while_stmt(self) -> Stmt:
        pos = self.expect("while").pos
        guard = self.expression()
        self.expect("do")
        return While(guard, self.statement(), pos)

    def ode_block(self) -> Stmt:
        equations = []
        seen = set()
        pos = self.peek().pos
        while True:
            name_tok = self.expect("IDENT")
            if name_tok.text in seen:
                raise ParseError(
                    f"variable '{name_tok.text}' has two differential equations",
                    name_tok.pos)
            seen.add(name_tok.text)
            self.expect("'")
            self.expect("=")
            equations.append((name_tok.text, self.expression()))
            if self.peek().kind == ",":
                self.next()
                continue
            break
        tok = self.peek()
        if tok.kind == "for":
            self.next()
            bound: Duration | Until = Duration(self.expression(), tok.pos)
        elif tok.kind == "until":
            self.next()
            bound = Until(self.expression(), tok.pos)
        else:
            raise ParseError(
                f"expected 'for' or 'until' to bound the equations, "
                f"found {tok.text!r}", tok.pos)
        self.expect(";")
        return OdeBlock(tuple(equations), bound, pos)

    # -- expressions (precedence climbing) ----------------------------------

    def expression(self, min_bp: int = 0) -> Expr:
        left = self.prefix()
        while True:
            tok = self.peek()
            bp = self.infix_bp(tok.kind)
            if bp is None or bp < min_bp:
                return left
            self.next()
            if tok.kind == "||":
                left = Or(left, self.expression(bp + 1), tok.pos)
            elif tok.kind == "&&":
                left = And(left, self.expression(bp + 1), tok.pos)
            elif tok.kind in _CMP_OPS:
                left = Compare(tok.kind, left, self.expression(bp + 1), tok.pos)
            else:
                left = BinOp(tok.kind, left, self.expression(bp + 1), tok.pos)

    @staticmethod
    def infix_bp(kind: str) -> int | None:
        if kind == "||":
            return _BP_OR
        if kind == "&&":
            return _BP_AND
        if kind in _CMP_OPS:
            return _BP_CMP
        if kind in ("+", "-"):
            return _BP_ADD
        if kind in ("*", "/"):
            return _BP_MUL
        return None

    def prefix(self) -> Expr:
        tok = self.next()
        if tok.kind == "NUM":
            return Num(tok.value, tok.pos)
        if tok.kind == "IDENT":
            if self.peek().kind == "(":
                raise ParseError(
                    f"'{tok.text}(...)': function calls are not supported "
                    f"(sqrt is the only builtin)", tok.pos)
            return Var(tok.text, tok.pos)
        if tok.kind in ("true", "false"):
            return Bool(tok.kind == "true", tok.pos)
        if tok.kind == "sqrt":
            self.expect("(")
            inner = self.expression()
            self.expect(")")
            return Sqrt(inner, tok.pos)
        if tok.kind == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        if tok.kind == "-":
            operand = self.expression(_BP_PREFIX)
            if isinstance(operand, Num):
                return Num(-operand.value, tok.pos)
            return Neg(operand, tok.pos)
        if tok.kind == "!":
            return Not(self.expression(_BP_PREFIX), tok.pos)
        raise ParseError(
            f"expected an expression, found {tok.text or 'end of input'!r}",
            tok.pos)


# ---------------------------------------------------------------------------
# Static checks

def expr_type(e: Expr) -> str:
    """'real' or 'bool'; raises TypeCheckError on misuse."""
    if isinstance(e, (Num, Var)):
        return "real"
    if isinstance(e, Bool):
        return "bool"
    if isinstance(e, (Neg, Sqrt)):
        _require(e.operand, "real", e.pos)
        return "real"
    if isinstance(e, BinOp):
        _require(e.left, "real", e.pos)
        _require(e.right, "real", e.pos)
        return "real"
    if isinstance(e, Compare):
        _require(e.left, "real", e.pos)
        _require(e.right, "real", e.pos)
        return "bool"
    if isinstance(e, (And, Or)):
        _require(e.left, "bool", e.pos)
        _require(e.right, "bool", e.pos)
        return "bool"
    if isinstance(e, Not):
        _require(e.operand, "bool", e.pos)
        return "bool"
    raise TypeError(f"not an expression: {e!r}")


def _require(e: Expr, expected: str, pos: Pos) -> None:
    actual = expr_type(e)
    if actual != expected:
        raise TypeCheckError(
            f"expected a {expected} expression, got a {actual} one",
            getattr(e, "pos", pos) or pos)


def _check_stmt_types(stmt: Stmt) -> None:
    if isinstance(stmt, Assign):
        _require(stmt.expr, "real", stmt.pos)
    elif isinstance(stmt, Seq):
        for s in stmt.stmts:
            _check_stmt_types(s)
    elif isinstance(stmt, If):
        _require(stmt.guard, "bool", stmt.pos)
        _check_stmt_types(stmt.then_body)
        _check_stmt_types(stmt.else_body)
    elif isinstance(stmt, While):
        _require(stmt.guard, "bool", stmt.pos)
        _check_stmt_types(stmt.body)
    elif isinstance(stmt, OdeBlock):
        for _, deriv in stmt.equations:
            _require(deriv, "real", stmt.pos)
        if isinstance(stmt.bound, Duration):
            _require(stmt.bound.expr, "real", stmt.bound.pos)
        else:
            _require(stmt.bound.condition, "bool", stmt.bound.pos)


def _check_structure(program: Program) -> None:
    """Variant arrays only at top level, before any while/ODE statement."""
    continuous_seen = False
    for stmt in program.body.stmts:
        if isinstance(stmt, AssignVariants):
            if continuous_seen:
                raise StructureError(
                    f"variant array for '{stmt.name}' must precede all "
                    f"while loops and differential blocks", stmt.pos)
        elif isinstance(stmt, (While, OdeBlock)):
            continuous_seen = True
            _forbid_nested_variants(stmt)
        else:
            _forbid_nested_variants(stmt)


def _forbid_nested_variants(stmt: Stmt) -> None:
    if isinstance(stmt, AssignVariants):
        raise StructureError(
            f"variant array for '{stmt.name}' is only allowed at top level",
            stmt.pos)
    if isinstance(stmt, Seq):
        for s in stmt.stmts:
            _forbid_nested_variants(s)
    elif isinstance(stmt, If):
        _forbid_nested_variants(stmt.then_body)
        _forbid_nested_variants(stmt.else_body)
    elif isinstance(stmt, While):
        _forbid_nested_variants(stmt.body)


def parse(source: str) -> Program:
    """Parse source text into a checked Program.

    Raises LexError, ParseError, TypeCheckError, or StructureError, all
    positioned; never returns a partially-checked tree.
    """
    parser = _Parser(tokenize(source))
    try:
        program = parser.program(source)
        _check_structure(program)
        _check_stmt_types(program.body)
    except RecursionError:
        raise ParseError("nesting too deep", parser.peek().pos) from None
    return program


def parse_expression(source: str) -> Expr:
    """Parse a single expression (either type), fully consumed and checked."""
    parser = _Parser(tokenize(source))
    try:
        expr = parser.expression()
        tok = parser.peek()
        if tok.kind != "EOF":
            raise ParseError(f"unexpected trailing {tok.text!r}", tok.pos)
        expr_type(expr)
    except RecursionError:
        raise ParseError("nesting too deep", parser.peek().pos) from None
    return expr


# ---------------------------------------------------------------------------
# Pretty printer

def fmt_num(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _prec(e: Expr) -> int:
    if isinstance(e, Or):
        return _BP_OR
    if isinstance(e, And):
        return _BP_AND
    if isinstance(e, Compare):
        return _BP_CMP
    if isinstance(e, BinOp):
        return _BP_ADD if e.op in ("+", "-") else _BP_MUL
    if isinstance(e, (Neg, Not)):
        return _BP_PREFIX
    return 100


def expr_to_str(e: Expr, parent_bp: int = 0) -> str:
    if isinstance(e, Num):
        out = fmt_num(e.value)
        # a leading '-' re-lexes as part of the literal in operand position
        return out
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Bool):
        return "true" if e.value else "false"
    if isinstance(e, Sqrt):
        return f"sqrt({expr_to_str(e.operand)})"
    if isinstance(e, Neg):
        out = "-" + expr_to_str(e.operand, _BP_PREFIX + 1)
        return f"({out})" if parent_bp > _BP_PREFIX else out
    if isinstance(e, Not):
        out = "!" + expr_to_str(e.operand, _BP_PREFIX + 1)
        return f"({out})" if parent_bp > _BP_PREFIX else out
    if isinstance(e, (BinOp, Compare)):
        op = e.op
    elif isinstance(e, And):
        op = "&&"
    else:
        op = "||"
    bp = _prec(e)
    out = (f"{expr_to_str(e.left, bp)} {op} "
           f"{expr_to_str(e.right, bp + 1)}")
    return f"({out})" if parent_bp > bp else out


def _stmt_lines(stmt: Stmt, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(stmt, Assign):
        return [f"{pad}{stmt.name} := {expr_to_str(stmt.expr)};"]
    if isinstance(stmt, AssignVariants):
        vals = stmt.values
        ints = [v for v in vals if v == int(v)]
        if (len(vals) > 1 and len(ints) == len(vals)
                and all(vals[k + 1] - vals[k] == 1 for k in range(len(vals) - 1))):
            inner = f"{fmt_num(vals[0])}..{fmt_num(vals[-1])}"
        else:
            inner = ", ".join(fmt_num(v) for v in vals)
        return [f"{pad}{stmt.name} := [{inner}];"]
    if isinstance(stmt, Seq):
        lines = [f"{pad}{{"]
        for s in stmt.stmts:
            lines.extend(_stmt_lines(s, indent + 1))
        lines.append(f"{pad}}}")
        return lines
    if isinstance(stmt, If):
        lines = [f"{pad}if {expr_to_str(stmt.guard)} then"]
        lines.extend(_braced(stmt.then_body, indent))
        if stmt.else_body != Seq(()):
            lines.append(f"{pad}else")
            lines.extend(_braced(stmt.else_body, indent))
        return lines
    if isinstance(stmt, While):
        lines = [f"{pad}while {expr_to_str(stmt.guard)} do"]
        lines.extend(_braced(stmt.body, indent))
        return lines
    if isinstance(stmt, OdeBlock):
        eqs = ", ".join(f"{v}' = {expr_to_str(d)}" for v, d in stmt.equations)
        if isinstance(stmt.bound, Duration):
            tail = f"for {expr_to_str(stmt.bound.expr)}"
        else:
            tail = f"until {expr_to_str(stmt.bound.condition)}"
        return [f"{pad}{eqs} {tail};"]
    raise TypeError(f"not a statement: {stmt!r}")


def _braced(stmt: Stmt, indent: int) -> list[str]:
    """Brace a branch/loop body so nesting never re-associates on re-parse."""
    pad = "  " * indent
    if isinstance(stmt, Seq):
        return _stmt_lines(stmt, indent)
    return [f"{pad}{{", *_stmt_lines(stmt, indent + 1), f"{pad}}}"]


def pretty_print(program: Program) -> str:
    lines: list[str] = []
    for stmt in program.body.stmts:
        lines.extend(_stmt_lines(stmt, 0))
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# AST dump (stable textual form for the CLI)

def ast_dump(node, indent: int = 0) -> str:
    pad = "  " * indent
    rec = lambda n: ast_dump(n, indent + 1)  # noqa: E731
    if isinstance(node, Program):
        if not node.body.stmts:
            return f"{pad}(program)"
        return f"{pad}(program\n" + "\n".join(
            rec(s) for s in node.body.stmts) + ")"
    if isinstance(node, Assign):
        return f"{pad}(assign {node.name}\n{rec(node.expr)})"
    if isinstance(node, AssignVariants):
        vals = " ".join(fmt_num(v) for v in node.values)
        return f"{pad}(variants {node.name} [{vals}])"
    if isinstance(node, Seq):
        if not node.stmts:
            return f"{pad}(seq)"
        return f"{pad}(seq\n" + "\n".join(rec(s) for s in node.stmts) + ")"
    if isinstance(node, If):
        return (f"{pad}(if\n{rec(node.guard)}\n"
                f"{rec(node.then_body)}\n{rec(node.else_body)})")
    if isinstance(node, While):
        return f"{pad}(while\n{rec(node.guard)}\n{rec(node.body)})"
    if isinstance(node, OdeBlock):
        eqs = "\n".join(f"{'  ' * (indent + 1)}(eq {v}\n{ast_dump(d, indent + 2)})"
                        for v, d in node.equations)
        if isinstance(node.bound, Duration):
            bound = f"{'  ' * (indent + 1)}(for\n{ast_dump(node.bound.expr, indent + 2)})"
        else:
            bound = (f"{'  ' * (indent + 1)}(until\n"
                     f"{ast_dump(node.bound.condition, indent + 2)})")
        return f"{pad}(ode\n{eqs}\n{bound})"
    if isinstance(node, Num):
        return f"{pad}(num {fmt_num(node.value)})"
    if isinstance(node, Var):
        return f"{pad}(var {node.name})"
    if isinstance(node, Bool):
        return f"{pad}(bool {'true' if node.value else 'false'})"
    if isinstance(node, Neg):
        return f"{pad}(neg\n{rec(node.operand)})"
    if isinstance(node, Not):
        return f"{pad}(not\n{rec(node.operand)})"
    if isinstance(node, Sqrt):
        return f"{pad}(sqrt\n{rec(node.operand)})"
    if isinstance(node, (BinOp, Compare)):
        return f"{pad}({node.op}\n{rec(node.left)}\n{rec(node.right)})"
    if isinstance(node, And):
        return f"{pad}(&&\n{rec(node.left)}\n{rec(node.right)})"
    if isinstance(node, Or):
        return f"{pad}(||\n{rec(node.left)}\n{rec(node.right)})"
    raise TypeError(f"cannot dump {node!r}")


# ---------------------------------------------------------------------------
# Evaluation

def free_vars(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Num, Bool)):
        return set()
    if isinstance(e, (Neg, Not, Sqrt)):
        return free_vars(e.operand)
    return free_vars(e.left) | free_vars(e.right)


def eval_expr(e: Expr, env: dict[str, float]):
    """Evaluate in IEEE double precision; '&&'/'||' short-circuit."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise UndefinedVariable(e.name, e.pos) from None
    if isinstance(e, Bool):
        return e.value
    if isinstance(e, Neg):
        return -eval_expr(e.operand, env)
    if isinstance(e, Sqrt):
        v = eval_expr(e.operand, env)
        if v < 0.0:
            raise EvalError(f"sqrt of negative value {v!r}", e.pos)
        return v ** 0.5
    if isinstance(e, BinOp):
        a = eval_expr(e.left, env)
        b = eval_expr(e.right, env)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b == 0.0:
            raise EvalError("division by zero", e.pos)
        return a / b
    if isinstance(e, Compare):
        a = eval_expr(e.left, env)
        b = eval_expr(e.right, env)
        return {"==": a == b, "!=": a != b, "<": a < b,
                "<=": a <= b, ">": a > b, ">=": a >= b}[e.op]
    if isinstance(e, And):
        return eval_expr(e.left, env) and eval_expr(e.right, env)
    if isinstance(e, Or):
        return eval_expr(e.left, env) or eval_expr(e.right, env)
    if isinstance(e, Not):
        return not eval_expr(e.operand, env)
    raise TypeError(f"cannot evaluate {e!r}")
