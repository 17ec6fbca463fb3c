"""OpenQASM 2 subset parser and emitter.

Covers the corpus language: version header, the standard include (resolved
against a built-in gate table, never read from disk), register
declarations, user gate definitions (inlined into known gates), opaque
declarations, gate application with register broadcasting, measure, reset,
barrier, and `if (creg==N)` conditions with arbitrary-precision integers.

OpenQASM 3 input is rejected with a distinct error; classical registers
wider than a configurable cap (default 512) are a clean error.
"""
from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass, field

from .circuit import Circuit, ClassicalCondition, const
from .gates import GATE_TABLE, GateKind

MAX_CREG_WIDTH = 512

# Gate names made available by the standard include.
QELIB1_GATES = (
    "u3", "u2", "u1", "cx", "id", "x", "y", "z", "h", "s", "sdg", "t", "tdg",
    "rx", "ry", "rz", "cz", "cy", "ch", "ccx", "crz", "cu1", "cu3", "swap",
    "sx", "sxdg",
)

_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
}


_RESERVED = {
    "OPENQASM", "include", "qreg", "creg", "gate", "opaque", "if",
    "measure", "reset", "barrier", "pi", "U", "CX",
}


class QasmError(ValueError):
    """Syntax or semantic error in an OpenQASM 2 program."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        if line:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)


class QasmVersionError(QasmError):
    """Program declares a version other than 2.0."""

    def __init__(self, version: str, line: int = 0, col: int = 0):
        self.version = version
        super().__init__(f"unsupported OpenQASM version '{version}' (only 2.0)", line, col)


class RegisterWidthError(QasmError):
    """Classical register exceeds the configured width cap."""


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*)
  | (?P<real>(\d+\.\d*|\.\d+)([eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"]*")
  | (?P<arrow>->)
  | (?P<eq>==)
  | (?P<sym>[{}()\[\],;+\-*/^])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[Token]:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise QasmError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    return tokens


@dataclass
class GateDefinition:
    """User `gate` block: formals and a body over known or user gates."""

    name: str
    params: list[str]
    qargs: list[str]
    body: list  # list of (name, [qarg names], [param ASTs], line, col)
    opaque: bool = False


@dataclass
class SourceProgram:
    """Resolved declarations of one parsed program."""

    qregs: list[tuple[str, int]] = field(default_factory=list)
    cregs: list[tuple[str, int]] = field(default_factory=list)
    gate_defs: dict[str, GateDefinition] = field(default_factory=dict)
    include_qelib1: bool = False


class _Parser:
    def __init__(self, tokens: list[Token], max_creg_width: int):
        self.tokens = tokens
        self.pos = 0
        self.max_creg_width = max_creg_width
        self.program = SourceProgram()
        self.qubit_offsets: dict[str, tuple[int, int]] = {}  # name -> (offset, size)
        self.num_qubits = 0
        self.circuit: Circuit | None = None
        self.opaque_kinds: dict[str, GateKind] = {}

    # -- token helpers ---------------------------------------------------

    def _peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self) -> Token:
        tok = self._peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("", "", 1, 1)
            raise QasmError("unexpected end of input", last.line, last.col)
        self.pos += 1
        return tok

    def _expect(self, text: str) -> Token:
        tok = self._next()
        if tok.text != text:
            raise QasmError(f"expected '{text}', found '{tok.text}'", tok.line, tok.col)
        return tok

    def _expect_kind(self, kind: str) -> Token:
        tok = self._next()
        if tok.kind != kind:
            raise QasmError(f"expected {kind}, found '{tok.text}'", tok.line, tok.col)
        return tok

    # -- top level ---------------------------------------------------------

    def parse(self) -> Circuit:
        tok = self._next()
        if tok.text != "OPENQASM":
            raise QasmError("program must start with OPENQASM 2.0", tok.line, tok.col)
        vtok = self._next()
        if vtok.text != "2.0":
            raise QasmVersionError(vtok.text, vtok.line, vtok.col)
        self._expect(";")

        # First pass over declarations; gate applications need registers, so
        # declarations and statements are handled in order.
        body_start = self.pos
        self._scan_declarations()
        self.circuit = Circuit(self.num_qubits, list(self.program.cregs))
        self.pos = body_start
        while self._peek() is not None:
            self._statement()
        return self.circuit

    def _scan_declarations(self) -> None:
        """Collect registers and gate definitions so indexing is known up front."""
        while self._peek() is not None:
            tok = self._next()
            if tok.text == "qreg":
                name = self._expect_kind("id").text
                self._expect("[")
                size = int(self._expect_kind("int").text)
                self._expect("]")
                self._expect(";")
                if name in self.qubit_offsets or any(n == name for n, _ in self.program.cregs):
                    raise QasmError(f"duplicate register '{name}'", tok.line, tok.col)
                if size < 1:
                    raise QasmError(f"register '{name}' must have positive size", tok.line, tok.col)
                self.qubit_offsets[name] = (self.num_qubits, size)
                self.program.qregs.append((name, size))
                self.num_qubits += size
            elif tok.text == "creg":
                name = self._expect_kind("id").text
                self._expect("[")
                size = int(self._expect_kind("int").text)
                self._expect("]")
                self._expect(";")
                if name in self.qubit_offsets or any(n == name for n, _ in self.program.cregs):
                    raise QasmError(f"duplicate register '{name}'", tok.line, tok.col)
                if size > self.max_creg_width:
                    raise RegisterWidthError(
                        f"creg '{name}' width {size} exceeds cap {self.max_creg_width}",
                        tok.line,
                        tok.col,
                    )
                self.program.cregs.append((name, size))
            elif tok.text == "gate":
                self._gate_definition()
            elif tok.text == "opaque":
                self._opaque_declaration()
            elif tok.text == "include":
                stok = self._expect_kind("string")
                self._expect(";")
                fname = stok.text.strip('"')
                if fname != "qelib1.inc":
                    raise QasmError(f"unknown include '{fname}'", stok.line, stok.col)
                self.program.include_qelib1 = True
            else:
                self._skip_statement(tok)

    def _skip_statement(self, first: Token) -> None:
        if first.text == "{":
            depth = 1
            while depth:
                t = self._next()
                if t.text == "{":
                    depth += 1
                elif t.text == "}":
                    depth -= 1
            return
        while True:
            if first.text == ";":
                return
            first = self._next()

    # -- declarations ------------------------------------------------------

    def _gate_definition(self) -> None:
        name_tok = self._expect_kind("id")
        name = name_tok.text
        params: list[str] = []
        if self._peek() and self._peek().text == "(":
            self._next()
            if self._peek().text != ")":
                params.append(self._expect_kind("id").text)
                while self._peek().text == ",":
                    self._next()
                    params.append(self._expect_kind("id").text)
            self._expect(")")
        qargs = [self._expect_kind("id").text]
        while self._peek().text == ",":
            self._next()
            qargs.append(self._expect_kind("id").text)
        self._expect("{")
        body = []
        while self._peek().text != "}":
            tok = self._next()
            if tok.text == "barrier":
                # Barriers inside definitions are dropped on inlining.
                while self._next().text != ";":
                    pass
                continue
            gname = tok.text
            if tok.kind != "id":
                raise QasmError(f"expected gate name, found '{tok.text}'", tok.line, tok.col)
            gparams: list = []
            if self._peek().text == "(":
                self._next()
                if self._peek().text != ")":
                    gparams.append(self._expr(params))
                    while self._peek().text == ",":
                        self._next()
                        gparams.append(self._expr(params))
                self._expect(")")
            gqargs = [self._expect_kind("id").text]
            while self._peek().text == ",":
                self._next()
                gqargs.append(self._expect_kind("id").text)
            self._expect(";")
            for q in gqargs:
                if q not in qargs:
                    raise QasmError(f"unknown qubit formal '{q}' in gate '{name}'", tok.line, tok.col)
            body.append((gname, gqargs, gparams, tok.line, tok.col))
        self._expect("}")
        if name in self.program.gate_defs or name in _RESERVED or (
            self.program.include_qelib1 and name in GATE_TABLE
        ):
            raise QasmError(f"duplicate gate definition '{name}'", name_tok.line, name_tok.col)
        self.program.gate_defs[name] = GateDefinition(name, params, qargs, body)

    def _opaque_declaration(self) -> None:
        name_tok = self._expect_kind("id")
        name = name_tok.text
        params: list[str] = []
        if self._peek() and self._peek().text == "(":
            self._next()
            if self._peek().text != ")":
                params.append(self._expect_kind("id").text)
                while self._peek().text == ",":
                    self._next()
                    params.append(self._expect_kind("id").text)
            self._expect(")")
        qargs = [self._expect_kind("id").text]
        while self._peek().text == ",":
            self._next()
            qargs.append(self._expect_kind("id").text)
        self._expect(";")
        if name in self.program.gate_defs or name in _RESERVED or (
            self.program.include_qelib1 and name in GATE_TABLE
        ):
            raise QasmError(f"duplicate gate declaration '{name}'", name_tok.line, name_tok.col)
        self.program.gate_defs[name] = GateDefinition(name, params, qargs, [], opaque=True)
        self.opaque_kinds[name] = GateKind(name, len(qargs), len(params))

    # -- statements ----------------------------------------------------------

    def _statement(self) -> None:
        tok = self._next()
        text = tok.text
        if text in ("qreg", "creg"):
            while self._next().text != ";":
                pass
            return
        if text == "include":
            self._next()
            self._expect(";")
            return
        if text == "gate":
            # Already collected; skip to matching brace.
            while self._next().text != "{":
                pass
            self._skip_statement(Token("sym", "{", tok.line, tok.col))
            return
        if text == "opaque":
            while self._next().text != ";":
                pass
            return
        if text == "if":
            self._if_statement(tok)
            return
        if text == "measure":
            self._measure(None)
            return
        if text == "reset":
            self._reset(None)
            return
        if text == "barrier":
            self._barrier()
            return
        if tok.kind == "id":
            self._apply_gate(tok, None)
            return
        raise QasmError(f"unexpected token '{text}'", tok.line, tok.col)

    def _if_statement(self, tok: Token) -> None:
        self._expect("(")
        reg = self._expect_kind("id").text
        widths = {n: w for n, w in self.program.cregs}
        if reg not in widths:
            raise QasmError(f"unknown classical register '{reg}'", tok.line, tok.col)
        self._expect_kind("eq")
        vtok = self._expect_kind("int")
        value = int(vtok.text)
        if value >= (1 << widths[reg]):
            raise QasmError(
                f"condition value does not fit register '{reg}' of width {widths[reg]}",
                vtok.line,
                vtok.col,
            )
        self._expect(")")
        condition = ClassicalCondition(reg, value)
        inner = self._next()
        if inner.text == "measure":
            self._measure(condition)
        elif inner.text == "reset":
            self._reset(condition)
        elif inner.kind == "id":
            self._apply_gate(inner, condition)
        else:
            raise QasmError(f"unexpected token '{inner.text}' after if", inner.line, inner.col)

    def _argument(self) -> tuple[str, int | None, Token]:
        tok = self._expect_kind("id")
        index = None
        if self._peek() and self._peek().text == "[":
            self._next()
            index = int(self._expect_kind("int").text)
            self._expect("]")
        return tok.text, index, tok

    def _qubits_for(self, name: str, index: int | None, tok: Token) -> list[int]:
        if name not in self.qubit_offsets:
            raise QasmError(f"unknown quantum register '{name}'", tok.line, tok.col)
        offset, size = self.qubit_offsets[name]
        if index is None:
            return list(range(offset, offset + size))
        if not 0 <= index < size:
            raise QasmError(f"index {index} out of range for '{name}[{size}]'", tok.line, tok.col)
        return [offset + index]

    def _broadcast(self, arg_lists: list[list[int]], tok: Token) -> list[tuple[int, ...]]:
        sizes = {len(a) for a in arg_lists if len(a) > 1}
        if len(sizes) > 1:
            raise QasmError("mismatched register sizes in broadcast", tok.line, tok.col)
        width = sizes.pop() if sizes else 1
        rows = []
        for i in range(width):
            rows.append(tuple(a[i] if len(a) > 1 else a[0] for a in arg_lists))
        return rows

    def _measure(self, condition: ClassicalCondition | None) -> None:
        qname, qidx, qtok = self._argument()
        self._expect_kind("arrow")
        cname, cidx, ctok = self._argument()
        self._expect(";")
        widths = {n: w for n, w in self.program.cregs}
        if cname not in widths:
            raise QasmError(f"unknown classical register '{cname}'", ctok.line, ctok.col)
        qubits = self._qubits_for(qname, qidx, qtok)
        if cidx is None:
            bits = list(range(widths[cname]))
        else:
            if not 0 <= cidx < widths[cname]:
                raise QasmError(f"index {cidx} out of range for '{cname}'", ctok.line, ctok.col)
            bits = [cidx]
        if len(qubits) != len(bits):
            if len(qubits) == 1:
                qubits = qubits * len(bits)
            elif len(bits) == 1:
                bits = bits * len(qubits)
            else:
                raise QasmError("measure operands have mismatched sizes", qtok.line, qtok.col)
        for q, b in zip(qubits, bits):
            self.circuit.add("measure", [q], condition=condition, creg_target=(cname, b))

    def _reset(self, condition: ClassicalCondition | None) -> None:
        name, idx, tok = self._argument()
        self._expect(";")
        for q in self._qubits_for(name, idx, tok):
            self.circuit.add("reset", [q], condition=condition)

    def _barrier(self) -> None:
        qubits: list[int] = []
        while True:
            name, idx, tok = self._argument()
            qubits.extend(self._qubits_for(name, idx, tok))
            nxt = self._next()
            if nxt.text == ";":
                break
            if nxt.text != ",":
                raise QasmError(f"expected ',' or ';', found '{nxt.text}'", nxt.line, nxt.col)
        self.circuit.add("barrier", qubits)

    def _apply_gate(self, name_tok: Token, condition: ClassicalCondition | None) -> None:
        name = name_tok.text
        params: list[float] = []
        if self._peek() and self._peek().text == "(":
            self._next()
            if self._peek().text != ")":
                params.append(self._eval_expr(self._expr([]), {}, name_tok))
                while self._peek().text == ",":
                    self._next()
                    params.append(self._eval_expr(self._expr([]), {}, name_tok))
            self._expect(")")
        arg_lists = []
        while True:
            rname, ridx, rtok = self._argument()
            arg_lists.append(self._qubits_for(rname, ridx, rtok))
            nxt = self._next()
            if nxt.text == ";":
                break
            if nxt.text != ",":
                raise QasmError(f"expected ',' or ';', found '{nxt.text}'", nxt.line, nxt.col)
        for row in self._broadcast(arg_lists, name_tok):
            self._emit_resolved(name, list(row), params, condition, name_tok, depth=0)

    def _emit_resolved(
        self,
        name: str,
        qubits: list[int],
        params: list[float],
        condition: ClassicalCondition | None,
        tok: Token,
        depth: int,
    ) -> None:
        if depth > 64:
            raise QasmError(f"gate '{name}' expands too deeply (recursive definition?)", tok.line, tok.col)
        if name == "U":
            name = "u3"
        elif name == "CX":
            name = "cx"
        if name in GATE_TABLE and (self.program.include_qelib1 or name in ("u3", "cx")):
            kind = GATE_TABLE[name]
            if len(params) != kind.num_params:
                raise QasmError(
                    f"gate '{name}' expects {kind.num_params} params, got {len(params)}",
                    tok.line,
                    tok.col,
                )
            self.circuit.add(name, qubits, tuple(const(p) for p in params), condition=condition)
            return
        gdef = self.program.gate_defs.get(name)
        if gdef is None:
            raise QasmError(f"unknown gate '{name}'", tok.line, tok.col)
        if len(params) != len(gdef.params):
            raise QasmError(
                f"gate '{name}' expects {len(gdef.params)} params, got {len(params)}",
                tok.line,
                tok.col,
            )
        if len(qubits) != len(gdef.qargs):
            raise QasmError(
                f"gate '{name}' expects {len(gdef.qargs)} qubits, got {len(qubits)}",
                tok.line,
                tok.col,
            )
        if gdef.opaque:
            kind = self.opaque_kinds[name]
            self.circuit.add(
                name, qubits, tuple(const(p) for p in params), condition=condition, gate=kind
            )
            return
        env = dict(zip(gdef.params, params))
        qmap = dict(zip(gdef.qargs, qubits))
        for gname, gqargs, gparams, line, col in gdef.body:
            sub_tok = Token("id", gname, line, col)
            sub_params = [self._eval_expr(ast, env, sub_tok) for ast in gparams]
            sub_qubits = [qmap[q] for q in gqargs]
            self._emit_resolved(gname, sub_qubits, sub_params, condition, sub_tok, depth + 1)

    # -- expressions --------------------------------------------------------

    def _expr(self, formals: list[str]):
        return self._additive(formals)

    def _additive(self, formals):
        node = self._multiplicative(formals)
        while self._peek() and self._peek().text in ("+", "-"):
            op = self._next().text
            node = ("binop", op, node, self._multiplicative(formals))
        return node

    def _multiplicative(self, formals):
        node = self._unary(formals)
        while self._peek() and self._peek().text in ("*", "/"):
            op = self._next().text
            node = ("binop", op, node, self._unary(formals))
        return node

    def _unary(self, formals):
        tok = self._peek()
        if tok and tok.text == "-":
            self._next()
            return ("neg", self._unary(formals))
        if tok and tok.text == "+":
            self._next()
            return self._unary(formals)
        return self._power(formals)

    def _power(self, formals):
        node = self._primary(formals)
        if self._peek() and self._peek().text == "^":
            self._next()
            return ("binop", "^", node, self._unary(formals))
        return node

    def _primary(self, formals):
        tok = self._next()
        if tok.kind in ("int", "real"):
            return ("num", float(tok.text))
        if tok.text == "pi":
            return ("num", math.pi)
        if tok.kind == "id" and tok.text in _FUNCTIONS:
            self._expect("(")
            inner = self._expr(formals)
            self._expect(")")
            return ("func", tok.text, inner)
        if tok.kind == "id":
            if tok.text in formals:
                return ("param", tok.text)
            raise QasmError(f"unknown identifier '{tok.text}' in expression", tok.line, tok.col)
        if tok.text == "(":
            inner = self._expr(formals)
            self._expect(")")
            return inner
        raise QasmError(f"unexpected token '{tok.text}' in expression", tok.line, tok.col)

    def _eval_expr(self, node, env: dict[str, float], tok: Token) -> float:
        kind = node[0]
        if kind == "num":
            return node[1]
        if kind == "param":
            if node[1] not in env:
                raise QasmError(f"unbound parameter '{node[1]}'", tok.line, tok.col)
            return env[node[1]]
        if kind == "neg":
            return -self._eval_expr(node[1], env, tok)
        if kind == "func":
            return _FUNCTIONS[node[1]](self._eval_expr(node[2], env, tok))
        if kind == "binop":
            _, op, left, right = node
            a = self._eval_expr(left, env, tok)
            b = self._eval_expr(right, env, tok)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "/":
                return a / b
            if op == "^":
                return a**b
        raise QasmError(f"bad expression node {node!r}", tok.line, tok.col)


def parse_qasm(text: str, max_creg_width: int = MAX_CREG_WIDTH) -> Circuit:
    """Parse OpenQASM 2 text into a Circuit with flattened qubit indexing.

    Multiple quantum registers are concatenated in declaration order.  The
    parse wall-time is recorded in ``metadata['qasm_load_time_s']``.
    """
    start = time.perf_counter()
    if re.search(r"OPENQASM\s+3", text):
        m = re.search(r"OPENQASM\s+([\d.]+)", text)
        raise QasmVersionError(m.group(1) if m else "3")
    tokens = _tokenize(text)
    circuit = _Parser(tokens, max_creg_width).parse()
    circuit.metadata["qasm_load_time_s"] = repr(time.perf_counter() - start)
    return circuit


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def emit_qasm(circuit: Circuit) -> str:
    """Serialize a circuit to OpenQASM 2 text.

    All parameters must be bound; angles are printed with 17 significant
    digits so floats round-trip exactly.  Gates outside the standard table
    get opaque declarations.
    """
    from .circuit import UnboundParameterError

    free = circuit.free_symbols
    if free:
        raise UnboundParameterError(f"cannot emit unbound parameters: {sorted(free)}")

    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";']
    opaque: dict[str, GateKind] = {}
    for ins in circuit.instructions:
        if ins.name not in GATE_TABLE:
            opaque.setdefault(ins.name, ins.gate)
    for name, kind in sorted(opaque.items()):
        formals = ", ".join(f"q{i}" for i in range(kind.num_qubits))
        if kind.num_params:
            ps = ", ".join(f"p{i}" for i in range(kind.num_params))
            lines.append(f"opaque {name}({ps}) {formals};")
        else:
            lines.append(f"opaque {name} {formals};")
    lines.append(f"qreg q[{max(circuit.num_qubits, 1)}];")
    for name, width in circuit.cregs:
        lines.append(f"creg {name}[{width}];")
    for ins in circuit.instructions:
        prefix = ""
        if ins.condition is not None:
            prefix = f"if ({ins.condition.register}=={ins.condition.value}) "
        if ins.name == "measure":
            reg, bit = ins.creg_target
            lines.append(f"{prefix}measure q[{ins.qubits[0]}] -> {reg}[{bit}];")
            continue
        if ins.name == "barrier":
            targets = ", ".join(f"q[{q}]" for q in ins.qubits) if ins.qubits else "q"
            lines.append(f"{prefix}barrier {targets};")
            continue
        name = ins.name
        if ins.params:
            args = ", ".join(_fmt(p.value()) for p in ins.params)
            name = f"{name}({args})"
        targets = ", ".join(f"q[{q}]" for q in ins.qubits)
        lines.append(f"{prefix}{name} {targets};")
    return "\n".join(lines) + "\n"
