"""OpenQASM 2 parser and emitter tests."""
import math
import random
from pathlib import Path

import pytest

from circuitbench.circuit import Circuit, ClassicalCondition, UnboundParameterError, op_counts
from circuitbench.generators import gen_bv, gen_clifford_layers, gen_dtc, gen_ghz, gen_qv
from circuitbench.qasm import (
    QasmError,
    QasmVersionError,
    RegisterWidthError,
    emit_qasm,
    parse_qasm,
)

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


class TestParseBasics:
    def test_minimal_program(self):
        c = parse_qasm(HEADER + "qreg q[2];\ncx q[0],q[1];\n")
        assert c.num_qubits == 2
        assert op_counts(c) == {"cx": 1}

    def test_parse_records_load_time(self):
        c = parse_qasm(HEADER + "qreg q[1];\n")
        assert float(c.metadata["qasm_load_time_s"]) >= 0.0

    def test_version_3_rejected_distinctly(self):
        with pytest.raises(QasmVersionError):
            parse_qasm('OPENQASM 3.0;\nqubit[2] q;\n')

    def test_wrong_version(self):
        with pytest.raises(QasmVersionError):
            parse_qasm("OPENQASM 2.1;\nqreg q[1];\n")

    def test_syntax_error_carries_position(self):
        with pytest.raises(QasmError) as err:
            parse_qasm(HEADER + "qreg q[2];\ncx q[0] q[1];\n")
        assert err.value.line == 4

    def test_unknown_gate(self):
        with pytest.raises(QasmError, match="unknown gate"):
            parse_qasm(HEADER + "qreg q[1];\nwobble q[0];\n")

    def test_gates_need_include(self):
        with pytest.raises(QasmError, match="unknown gate"):
            parse_qasm("OPENQASM 2.0;\nqreg q[1];\nh q[0];\n")

    def test_primitives_work_without_include(self):
        c = parse_qasm("OPENQASM 2.0;\nqreg q[2];\nU(0.1,0.2,0.3) q[0];\nCX q[0],q[1];\n")
        assert op_counts(c) == {"u3": 1, "cx": 1}

    def test_multiple_qregs_flattened(self):
        c = parse_qasm(HEADER + "qreg a[2];\nqreg b[3];\nx a[1];\nx b[0];\n")
        assert c.num_qubits == 5
        assert c.instructions[0].qubits == (1,)
        assert c.instructions[1].qubits == (2,)

    def test_register_broadcast(self):
        c = parse_qasm(HEADER + "qreg q[3];\nh q;\n")
        assert op_counts(c) == {"h": 3}

    def test_two_register_broadcast(self):
        c = parse_qasm(HEADER + "qreg a[3];\nqreg b[3];\ncx a,b;\n")
        assert op_counts(c) == {"cx": 3}
        assert c.instructions[0].qubits == (0, 3)

    def test_expression_parameters(self):
        c = parse_qasm(HEADER + "qreg q[1];\nrz(pi/2) q[0];\nrz(-3*pi/4) q[0];\n")
        assert c.instructions[0].params[0].value() == pytest.approx(math.pi / 2)
        assert c.instructions[1].params[0].value() == pytest.approx(-3 * math.pi / 4)

    def test_measure_and_reset(self):
        c = parse_qasm(HEADER + "qreg q[2];\ncreg c[2];\nmeasure q -> c;\nreset q[0];\n")
        assert op_counts(c) == {"measure": 2, "reset": 1}
        assert c.instructions[0].creg_target == ("c", 0)

    def test_barrier(self):
        c = parse_qasm(HEADER + "qreg q[3];\nbarrier q[0], q[2];\nbarrier q;\n")
        assert c.instructions[0].qubits == (0, 2)
        assert c.instructions[1].qubits == (0, 1, 2)


class TestConditions:
    def test_condition_parses(self):
        c = parse_qasm(HEADER + "qreg q[1];\ncreg c[4];\nif (c==5) x q[0];\n")
        assert c.instructions[0].condition == ClassicalCondition("c", 5)

    def test_bigint_register(self):
        value = 2**300
        text = HEADER + f"qreg q[1];\ncreg c[301];\nif (c=={value}) x q[0];\n"
        c = parse_qasm(text)
        assert c.instructions[0].condition.value == value

    def test_condition_overflow(self):
        with pytest.raises(QasmError, match="does not fit"):
            parse_qasm(HEADER + "qreg q[1];\ncreg c[2];\nif (c==4) x q[0];\n")

    def test_creg_width_cap(self):
        text = HEADER + "qreg q[1];\ncreg c[513];\n"
        with pytest.raises(RegisterWidthError):
            parse_qasm(text)
        # configurable upward
        c = parse_qasm(text, max_creg_width=1024)
        assert c.cregs == [("c", 513)]

    def test_bigint_survives_roundtrip_to_512_bits(self):
        value = 2**511
        text = HEADER + f"qreg q[1];\ncreg c[512];\nif (c=={value}) x q[0];\n"
        c = parse_qasm(text)
        again = parse_qasm(emit_qasm(c))
        assert again.instructions[0].condition.value == value


class TestUserGates:
    def test_definition_inlined(self):
        text = HEADER + (
            "gate majority a,b,c { cx c,b; cx c,a; ccx a,b,c; }\n"
            "qreg q[3];\nmajority q[0],q[1],q[2];\n"
        )
        c = parse_qasm(text)
        assert op_counts(c) == {"cx": 2, "ccx": 1}
        assert c.instructions[0].qubits == (2, 1)

    def test_parameterized_definition(self):
        text = HEADER + (
            "gate rot(t) a { rz(2*t) a; rx(t+pi) a; }\n"
            "qreg q[1];\nrot(0.5) q[0];\n"
        )
        c = parse_qasm(text)
        assert c.instructions[0].params[0].value() == pytest.approx(1.0)
        assert c.instructions[1].params[0].value() == pytest.approx(0.5 + math.pi)

    def test_nested_definitions(self):
        text = HEADER + (
            "gate inner a { h a; }\n"
            "gate outer a,b { inner a; cx a,b; inner b; }\n"
            "qreg q[2];\nouter q[0],q[1];\n"
        )
        c = parse_qasm(text)
        assert op_counts(c) == {"h": 2, "cx": 1}

    def test_opaque_preserved(self):
        text = HEADER + "opaque mystery(t) a,b;\nqreg q[2];\nmystery(0.25) q[0],q[1];\n"
        c = parse_qasm(text)
        assert c.instructions[0].name == "mystery"
        assert c.instructions[0].gate.num_qubits == 2
        again = parse_qasm(emit_qasm(c))
        assert again.instructions == c.instructions

    def test_unknown_formal_rejected(self):
        text = HEADER + "gate bad a { h b; }\nqreg q[1];\n"
        with pytest.raises(QasmError, match="unknown qubit formal"):
            parse_qasm(text)


class TestEmit:
    def test_empty_one_qubit(self):
        assert emit_qasm(Circuit(1)) == HEADER + "qreg q[1];\n"

    def test_free_parameters_rejected(self):
        from circuitbench.circuit import ParameterExpr

        c = Circuit(1).add("rz", [0], (ParameterExpr(symbol="t"),))
        with pytest.raises(UnboundParameterError):
            emit_qasm(c)

    def test_angles_have_17_digits(self):
        c = Circuit(1).add("rz", [0], (1 / 3,))
        assert "0.33333333333333331" in emit_qasm(c)

    def test_emit_parse_fixpoint(self):
        c = gen_qv(4, 3, seed=2)
        once = emit_qasm(c)
        assert emit_qasm(parse_qasm(once)) == once

    def test_trotter_zz_statement_counts(self):
        from circuitbench.generators import Hamiltonian, PauliTerm, gen_trotter

        h = Hamiltonian(2, (PauliTerm("ZZ", 0.7),), "chemistry", "zz")
        text = emit_qasm(gen_trotter(h))
        lines = text.splitlines()
        assert sum(1 for ln in lines if ln.startswith("cx ")) == 2
        assert sum(1 for ln in lines if ln.startswith("rz(")) == 1


class TestRoundTrip:
    @pytest.mark.parametrize(
        "circuit",
        [
            gen_ghz(5),
            gen_bv("10110"),
            gen_qv(5, 5, seed=3),
            gen_clifford_layers(5, 4, seed=1),
            gen_dtc(4, 3, seed=2),
        ],
        ids=["ghz", "bv", "qv", "clifford", "dtc"],
    )
    def test_generator_roundtrip(self, circuit):
        assert parse_qasm(emit_qasm(circuit)) == circuit

    def test_roundtrip_with_measure_and_condition(self):
        c = Circuit(2, [("c", 2)])
        c.add("h", [0])
        c.add("measure", [0], creg_target=("c", 0))
        c.add("x", [1], condition=ClassicalCondition("c", 1))
        c.add("measure", [1], creg_target=("c", 1))
        assert parse_qasm(emit_qasm(c)) == c

    def test_random_roundtrips(self):
        from helpers import random_circuit

        rng = random.Random(21)
        for _ in range(25):
            c = random_circuit(rng, allow_directives=True, measure_free=False)
            assert parse_qasm(emit_qasm(c)) == c

    def test_bundled_corpus_roundtrips(self):
        from circuitbench.harness import DEFAULT_QASM_DIR

        files = sorted(Path(DEFAULT_QASM_DIR).glob("*.qasm"))[::7]
        assert files
        for path in files:
            text = path.read_text()
            c = parse_qasm(text)
            assert parse_qasm(emit_qasm(c)) == c
