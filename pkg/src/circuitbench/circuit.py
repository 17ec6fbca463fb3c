"""Circuit intermediate representation and the metrics computed over it.

A :class:`Circuit` is an ordered instruction list over indexed qubits and
named classical registers.  Instances are treated as immutable once built:
every transformation in the toolkit returns a new circuit, and all metric
functions here are pure.

The two-qubit metrics follow the convention that only gates of arity
exactly 2 count; barriers and measurements never count but still order
the dependency analysis, and classical conditions conservatively touch
every bit of their register.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .gates import GATE_TABLE, VARIADIC, GateKind


class CircuitError(ValueError):
    """Structural problem while building or validating a circuit."""


class MetricUndefinedError(CircuitError):
    """A metric's precondition is violated (e.g. arity >= 3 gate present)."""


class UnboundParameterError(CircuitError):
    """An operation required bound parameters but found free symbols."""


@dataclass(frozen=True)
class ParameterExpr:
    """Affine parameter expression: ``mult * symbol + const`` or a constant.

    A constant has ``symbol is None`` and its value is exactly ``const``.
    """

    const: float = 0.0
    symbol: str | None = None
    mult: float = 1.0

    @property
    def is_bound(self) -> bool:
        return self.symbol is None

    def value(self) -> float:
        if self.symbol is not None:
            raise UnboundParameterError(f"parameter '{self.symbol}' is unbound")
        return self.const

    def bind(self, assignment: dict[str, float]) -> "ParameterExpr":
        if self.symbol is None:
            return self
        if self.symbol not in assignment:
            raise UnboundParameterError(f"no value supplied for parameter '{self.symbol}'")
        return ParameterExpr(const=self.mult * assignment[self.symbol] + self.const)

    def __repr__(self) -> str:
        if self.symbol is None:
            return f"ParameterExpr({self.const!r})"
        return f"ParameterExpr({self.mult!r}*{self.symbol}+{self.const!r})"


def const(value: float) -> ParameterExpr:
    return ParameterExpr(const=float(value))


@dataclass(frozen=True)
class ClassicalCondition:
    """Equality condition on a classical register: fire iff register == value."""

    register: str
    value: int  # arbitrary precision, >= 0


@dataclass(frozen=True)
class Instruction:
    gate: GateKind
    qubits: tuple[int, ...]
    params: tuple[ParameterExpr, ...] = ()
    condition: ClassicalCondition | None = None
    # (register name, bit index) target for measure instructions.
    creg_target: tuple[str, int] | None = None

    @property
    def name(self) -> str:
        return self.gate.name

    def param_values(self) -> tuple[float, ...]:
        return tuple(p.value() for p in self.params)


@dataclass
class Circuit:
    """Ordered instruction list over ``num_qubits`` qubits and named cregs."""

    num_qubits: int
    cregs: list[tuple[str, int]] = field(default_factory=list)
    instructions: list[Instruction] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.num_qubits < 0:
            raise CircuitError("negative qubit count")
        names = [n for n, _ in self.cregs]
        if len(names) != len(set(names)):
            raise CircuitError("duplicate classical register name")

    # -- construction ---------------------------------------------------

    def creg_width(self, name: str) -> int:
        for n, w in self.cregs:
            if n == name:
                return w
        raise CircuitError(f"unknown classical register '{name}'")

    def add(
        self,
        name: str,
        qubits: list[int] | tuple[int, ...],
        params: tuple = (),
        condition: ClassicalCondition | None = None,
        creg_target: tuple[str, int] | None = None,
        gate: GateKind | None = None,
    ) -> "Circuit":
        """Append one instruction, validating it against this circuit."""
        kind = gate if gate is not None else GATE_TABLE.get(name)
        if kind is None:
            raise CircuitError(f"unknown gate '{name}' (pass an explicit GateKind for opaque gates)")
        qubits = tuple(int(q) for q in qubits)
        if kind.num_qubits != VARIADIC and len(qubits) != kind.num_qubits:
            raise CircuitError(f"{name} expects {kind.num_qubits} qubits, got {len(qubits)}")
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"duplicate qubit in {name} application")
        for q in qubits:
            if not 0 <= q < self.num_qubits:
                raise CircuitError(f"qubit index {q} out of range for width {self.num_qubits}")
        exprs = tuple(p if isinstance(p, ParameterExpr) else const(p) for p in params)
        if len(exprs) != kind.num_params:
            raise CircuitError(f"{name} expects {kind.num_params} params, got {len(exprs)}")
        if condition is not None:
            width = self.creg_width(condition.register)
            if condition.value < 0 or condition.value >= (1 << width):
                raise CircuitError(
                    f"condition value does not fit register '{condition.register}' of width {width}"
                )
        if kind.name == "measure":
            if creg_target is None:
                raise CircuitError("measure requires a classical target")
            reg, bit = creg_target
            if not 0 <= bit < self.creg_width(reg):
                raise CircuitError(f"classical bit {reg}[{bit}] out of range")
        self.instructions.append(
            Instruction(kind, qubits, exprs, condition=condition, creg_target=creg_target)
        )
        return self

    def copy_empty(self) -> "Circuit":
        return Circuit(self.num_qubits, list(self.cregs), [], dict(self.metadata))

    @property
    def free_symbols(self) -> set[str]:
        return {
            p.symbol
            for ins in self.instructions
            for p in ins.params
            if p.symbol is not None
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return (
            self.num_qubits == other.num_qubits
            and self.cregs == other.cregs
            and self.instructions == other.instructions
        )


# -- metrics -------------------------------------------------------------


def op_counts(circuit: Circuit) -> dict[str, int]:
    """Tally of instruction counts by gate name; absent gates are omitted."""
    counts: dict[str, int] = {}
    for ins in circuit.instructions:
        counts[ins.name] = counts.get(ins.name, 0) + 1
    return counts


def _is_counted_2q(ins: Instruction) -> bool:
    return not ins.gate.is_directive and len(ins.qubits) == 2


def _check_2q_metric_defined(circuit: Circuit) -> None:
    for i, ins in enumerate(circuit.instructions):
        if not ins.gate.is_directive and len(ins.qubits) >= 3:
            raise MetricUndefinedError(
                f"two-qubit metrics undefined: instruction {i} ({ins.name}) has arity {len(ins.qubits)}"
            )


def _resources(circuit: Circuit, ins: Instruction) -> list:
    """Dependency resources an instruction touches: qubits plus classical registers.

    Barriers with no explicit qubits touch every qubit; conditions and
    measures touch their whole register so classical flow is ordered.
    """
    res: list = list(ins.qubits)
    if ins.name == "barrier" and not ins.qubits:
        res = list(range(circuit.num_qubits))
    if ins.condition is not None:
        res.append(("c", ins.condition.register))
    if ins.creg_target is not None:
        res.append(("c", ins.creg_target[0]))
    return res


def two_qubit_gate_count(circuit: Circuit) -> int:
    """Number of arity-2 gate instructions; errors if any gate has arity >= 3."""
    _check_2q_metric_defined(circuit)
    return sum(1 for ins in circuit.instructions if _is_counted_2q(ins))


def two_qubit_depth(circuit: Circuit) -> int:
    """Longest dependency chain counting only two-qubit gates.

    Computed as a greedy as-soon-as-possible schedule where only 2Q gates
    advance the clock; equals the longest weighted path in the dependency
    DAG with 2Q gates weighted 1 and everything else 0.
    """
    _check_2q_metric_defined(circuit)
    clock: dict = {}
    best = 0
    for ins in circuit.instructions:
        res = _resources(circuit, ins)
        level = max((clock.get(r, 0) for r in res), default=0)
        if _is_counted_2q(ins):
            level += 1
        for r in res:
            clock[r] = level
        best = max(best, level)
    return best


def full_depth(circuit: Circuit) -> int:
    """Standard depth counting all gates; barriers separate layers but add none."""
    clock: dict = {}
    best = 0
    for ins in circuit.instructions:
        if ins.name == "barrier":
            # Full-width layer separator regardless of the qubits listed.
            level = max((clock.get(r, 0) for r in clock), default=0)
            for q in range(circuit.num_qubits):
                clock[q] = level
            continue
        res = _resources(circuit, ins)
        level = max((clock.get(r, 0) for r in res), default=0) + 1
        for r in res:
            clock[r] = level
        best = max(best, level)
    return best


def bind_parameters(circuit: Circuit, assignment: dict[str, float]) -> Circuit:
    """Substitute values for every free symbol; extra assignments are ignored."""
    missing = circuit.free_symbols - set(assignment)
    if missing:
        raise UnboundParameterError(f"missing values for parameters: {sorted(missing)}")
    out = circuit.copy_empty()
    for ins in circuit.instructions:
        out.instructions.append(
            Instruction(
                ins.gate,
                ins.qubits,
                tuple(p.bind(assignment) for p in ins.params),
                condition=ins.condition,
                creg_target=ins.creg_target,
            )
        )
    return out
