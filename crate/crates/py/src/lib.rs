//! Python bindings: circuit documents, classical and ensemble runs, and
//! Heisenberg-picture networks.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use branchflow::circuit::{self, CircuitDocument};
use branchflow::classical::{self, BitWord, ClassicalGate, NetworkProgram};
use branchflow::emit::{self, Format};
use branchflow::ensemble::{self, Ensemble};
use branchflow::heisenberg::{Axis, HeisenbergNetwork, QuantumGate};
use branchflow::orchestrate::{self, RunOptions, RunOutput};

/// A gate given as a name and its 1-based bit list, e.g. `("toffoli", [1, 2, 3])`.
pub type GateSpec = (String, Vec<usize>);

fn to_py(e: branchflow::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

pub fn gate_from_spec((name, bits): &GateSpec) -> branchflow::Result<ClassicalGate> {
    let arity = |n: usize| {
        if bits.len() == n {
            Ok(())
        } else {
            Err(branchflow::Error::Invalid(format!("{name} takes {n} bits, got {}", bits.len())))
        }
    };
    match name.as_str() {
        "toffoli" => arity(3).map(|_| ClassicalGate::Toffoli(bits[0], bits[1], bits[2])),
        "cnot" => arity(2).map(|_| ClassicalGate::CNot(bits[0], bits[1])),
        "swap" => arity(2).map(|_| ClassicalGate::Swap(bits[0], bits[1])),
        "not" => arity(1).map(|_| ClassicalGate::Not(bits[0])),
        "delay" => arity(1).map(|_| ClassicalGate::Delay(bits[0])),
        other => Err(branchflow::Error::Invalid(format!("unknown gate `{other}`"))),
    }
}

pub fn program_from_specs(width: usize, steps: &[Vec<GateSpec>]) -> branchflow::Result<NetworkProgram> {
    let layers = steps
        .iter()
        .map(|s| s.iter().map(gate_from_spec).collect::<branchflow::Result<Vec<_>>>())
        .collect::<branchflow::Result<Vec<_>>>()?;
    NetworkProgram::new(width, layers)
}

/// Multiplicities as `(state, numerator, denominator)`.
pub fn ensemble_rows(e: &Ensemble) -> Vec<(u64, String, String)> {
    e.entries()
        .map(|(b, m)| (b, m.numer().to_string(), m.denom().to_string()))
        .collect()
}

fn axis(name: &str) -> PyResult<Axis> {
    match name {
        "x" => Ok(Axis::X),
        "y" => Ok(Axis::Y),
        "z" => Ok(Axis::Z),
        other => Err(PyValueError::new_err(format!("axis must be x, y or z, got `{other}`"))),
    }
}

/// A parsed circuit document.
#[pyclass(name = "Circuit", frozen)]
pub struct PyCircuit {
    doc: CircuitDocument,
}

#[pymethods]
impl PyCircuit {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        circuit::parse(text).map(|doc| PyCircuit { doc }).map_err(to_py)
    }

    #[getter]
    fn width(&self) -> usize {
        self.doc.width
    }

    #[getter]
    fn steps(&self) -> usize {
        self.doc.steps.len()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.doc.warnings.clone()
    }

    /// Canonical text of the document.
    fn to_text(&self) -> String {
        circuit::print(&self.doc)
    }

    #[pyo3(signature = (tolerance=None, max_qubits=branchflow::config::DEFAULT_MAX_QUBITS))]
    fn run(&self, tolerance: Option<f64>, max_qubits: usize) -> PyResult<PyRun> {
        let mut options = RunOptions {
            max_qubits,
            ..RunOptions::default()
        };
        if let Some(t) = tolerance {
            options.tolerance = t;
        }
        orchestrate::orchestrate(&self.doc, &options)
            .map(|out| PyRun { out })
            .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Circuit(width={}, steps={})", self.doc.width, self.doc.steps.len())
    }
}

/// Traces and analysis outcomes of a circuit run.
#[pyclass(name = "Run", frozen)]
pub struct PyRun {
    out: RunOutput,
}

#[pymethods]
impl PyRun {
    /// `csv`, `dot` or `json` text.
    fn emit(&self, format: &str) -> PyResult<String> {
        let format = match format {
            "csv" => Format::Csv,
            "dot" => Format::Dot,
            "json" => Format::Json,
            other => return Err(PyValueError::new_err(format!("unknown format `{other}`"))),
        };
        Ok(emit::emit(&self.out, format))
    }

    #[getter]
    fn checks_hold(&self) -> bool {
        self.out.checks_hold()
    }

    #[getter]
    fn engines(&self) -> Vec<String> {
        self.out.engines.iter().map(|e| e.name().to_string()).collect()
    }

    /// Rows `(engine, t, b, weight, link)` of every trace.
    fn rows(&self) -> Vec<(String, usize, u64, f64, Option<u64>)> {
        self.out
            .traces
            .iter()
            .flat_map(|tr| tr.rows.iter().map(move |r| (tr.engine.name().to_string(), r.t, r.b, r.weight, r.link)))
            .collect()
    }

    /// `(name, expected, passed)` for each analysis.
    fn analyses(&self) -> Vec<(String, String, bool)> {
        self.out
            .analyses
            .iter()
            .map(|a| (a.name.clone(), a.expected.name().to_string(), a.passed))
            .collect()
    }
}

/// A quantum network in the Heisenberg picture, fed classical-analogue gates
/// or single-qubit unitaries.
#[pyclass(name = "HeisenbergNetwork")]
pub struct PyNetwork {
    net: HeisenbergNetwork,
}

#[pymethods]
impl PyNetwork {
    #[new]
    #[pyo3(signature = (width, initial=0))]
    fn new(width: usize, initial: u64) -> PyResult<Self> {
        let word = BitWord::new(initial, width).map_err(to_py)?;
        HeisenbergNetwork::new(word).map(|net| PyNetwork { net }).map_err(to_py)
    }

    #[getter]
    fn width(&self) -> usize {
        self.net.width()
    }

    #[getter]
    fn time(&self) -> usize {
        self.net.time()
    }

    /// Applies one synchronous step of classical-analogue gates.
    fn step(&mut self, gates: Vec<GateSpec>) -> PyResult<()> {
        let gates = gates
            .iter()
            .map(|g| gate_from_spec(g).map(QuantumGate::from))
            .collect::<branchflow::Result<Vec<_>>>()
            .map_err(to_py)?;
        self.net.step_mut(&gates).map_err(to_py)
    }

    /// Applies a unitary, given row-major, to the listed qubits.
    fn apply_unitary(&mut self, qubits: Vec<usize>, rows: Vec<Vec<Complex64>>) -> PyResult<()> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(PyValueError::new_err("matrix must be square"));
        }
        let flat: Vec<Complex64> = rows.into_iter().flatten().collect();
        let matrix = branchflow::linalg::Matrix::from_row_slice(dim, dim, &flat);
        self.net
            .step_mut(&[QuantumGate::Unitary { qubits, matrix }])
            .map_err(to_py)
    }

    /// A descriptor component as nested lists, row-major.
    fn component(&self, qubit: usize, axis_name: &str) -> PyResult<Vec<Vec<Complex64>>> {
        if qubit == 0 || qubit > self.net.width() {
            return Err(to_py(branchflow::Error::IndexOutOfRange {
                index: qubit,
                width: self.net.width(),
            }));
        }
        let m = self.net.component(qubit, axis(axis_name)?);
        Ok((0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect())
    }

    /// `<b_kz>` against the Heisenberg state.
    fn expectation_z(&self, qubit: usize) -> PyResult<f64> {
        if qubit == 0 || qubit > self.net.width() {
            return Err(to_py(branchflow::Error::IndexOutOfRange {
                index: qubit,
                width: self.net.width(),
            }));
        }
        self.net.expectation(&self.net.component(qubit, Axis::Z)).map_err(to_py)
    }

    fn probabilities(&self) -> Vec<f64> {
        self.net.probabilities()
    }
}

/// States of a single classical network at every time.
#[pyfunction]
fn classical_run(width: usize, steps: Vec<Vec<GateSpec>>, initial: u64) -> PyResult<Vec<u64>> {
    let program = program_from_specs(width, &steps).map_err(to_py)?;
    let b0 = BitWord::new(initial, width).map_err(to_py)?;
    classical::run(&program, b0)
        .map(|traj| traj.into_iter().map(BitWord::value).collect())
        .map_err(to_py)
}

/// Multiplicities `(state, numerator, denominator)` at every time, for an
/// ensemble given as `(state, count)` pairs.
#[pyfunction]
fn evolve_ensemble(
    width: usize,
    steps: Vec<Vec<GateSpec>>,
    counts: Vec<(u64, i64)>,
) -> PyResult<Vec<Vec<(u64, String, String)>>> {
    let program = program_from_specs(width, &steps).map_err(to_py)?;
    let e = Ensemble::from_counts(width, counts).map_err(to_py)?;
    ensemble::evolve_program(&e, &program)
        .map(|h| h.iter().map(ensemble_rows).collect())
        .map_err(to_py)
}

/// Canonical text of a document.
#[pyfunction]
fn format_document(text: &str) -> PyResult<String> {
    circuit::parse(text).map(|d| circuit::print(&d)).map_err(to_py)
}

#[pymodule]
fn branchflow_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyRun>()?;
    m.add_class::<PyNetwork>()?;
    m.add_function(wrap_pyfunction!(classical_run, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_ensemble, m)?)?;
    m.add_function(wrap_pyfunction!(format_document, m)?)?;
    Ok(())
}
