"""Smoke test for the branchflow Python bindings."""

import json
import math
import pathlib

import branchflow_py as bf

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "tests" / "corpus"


def test_classical_run():
    states = bf.classical_run(3, [[("toffoli", [1, 2, 3])], [("not", [1])]], 0b011)
    assert states == [0b011, 0b111, 0b110], states


def test_ensemble():
    rows = bf.evolve_ensemble(
        3,
        [[("toffoli", [1, 2, 3])], [("cnot", [3, 1]), ("not", [2])]],
        [(0b001, 4), (0b010, 2), (0b100, 1), (0b110, 5)],
    )
    assert all(len(r) == 4 for r in rows)
    totals = {sum(int(n) for _, n, _ in r) for r in rows}
    assert totals == {12}, totals


def test_circuit_round_trip_and_run():
    text = (CORPUS / "interference.circ").read_text()
    circuit = bf.Circuit.parse(text)
    assert circuit.to_text() == text
    run = circuit.run()
    report = json.loads(run.emit("json"))
    assert report["schema_version"] == 1
    final = [r for r in run.rows() if r[1] == 4]
    assert len(final) == 1 and final[0][2] == 0b11 and math.isclose(final[0][3], 1.0)
    golden = CORPUS.parent / "golden" / "interference.dot"
    assert run.emit("dot") == golden.read_text()


def test_failed_check_is_visible():
    run = bf.Circuit.parse((CORPUS / "check_failure.circ").read_text()).run()
    assert not run.checks_hold
    assert run.analyses() == [("autonomy selector=z", "pass", False)]


def test_parse_error_is_located():
    try:
        bf.Circuit.parse("qubits 3\ninit basis 0b011\nstep toffoli 1 2 2\n")
    except ValueError as e:
        assert str(e).startswith("3:18:"), e
    else:
        raise AssertionError("expected a parse error")


def test_heisenberg_network():
    net = bf.HeisenbergNetwork(2, 0b01)
    net.step([("cnot", [1, 2])])
    assert math.isclose(net.expectation_z(2), 1.0)
    h = 1 / math.sqrt(2)
    net.apply_unitary([1], [[h, h], [h, -h]])
    p = net.probabilities()
    assert math.isclose(p[0b10], 0.5) and math.isclose(p[0b11], 0.5), p
    z = net.component(2, "z")
    assert len(z) == 4 and all(len(row) == 4 for row in z)
    assert net.time == 2


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok {t.__name__}")
