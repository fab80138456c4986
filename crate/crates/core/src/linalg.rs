//! Dense complex matrices over `N` qubits.
//!
//! Qubit `k` (1-based) is bit `k - 1` of a basis index. Local operators on a
//! list of qubits use the same convention: the first listed qubit is the
//! least significant bit of the local index.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Matrix = DMatrix<C64>;
pub type StateVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn identity(dim: usize) -> Matrix {
    Matrix::identity(dim, dim)
}

pub fn dagger(m: &Matrix) -> Matrix {
    m.adjoint()
}

/// Frobenius norm.
pub fn norm(m: &Matrix) -> f64 {
    m.norm()
}

/// `|| A - B ||_F`.
pub fn distance(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).norm()
}

/// Largest entrywise modulus of `A - B`.
pub fn max_entry_distance(a: &Matrix, b: &Matrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `|| U^dagger U - 1 ||_F`.
pub fn unitarity_residual(u: &Matrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    (u.adjoint() * u - identity(u.nrows())).norm()
}

pub fn hermiticity_residual(m: &Matrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    (m - m.adjoint()).norm()
}

/// `AB - BA`.
pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a * b - b * a
}

/// Pauli matrices, indexed x, y, z.
pub fn pauli(axis: usize) -> Matrix {
    match axis {
        0 => Matrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        1 => Matrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        _ => Matrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    }
}

/// Left-multiplies every column of `target` by the operator `local` acting
/// on `qubits`.
pub fn apply_local(local: &Matrix, qubits: &[usize], target: &mut Matrix) {
    let m = qubits.len();
    let sub = 1usize << m;
    debug_assert_eq!(local.nrows(), sub);
    let masks: Vec<usize> = qubits.iter().map(|&q| 1usize << (q - 1)).collect();
    let all: usize = masks.iter().sum();
    let offsets: Vec<usize> = (0..sub)
        .map(|i| {
            masks
                .iter()
                .enumerate()
                .filter(|(j, _)| (i >> j) & 1 == 1)
                .map(|(_, &mask)| mask)
                .sum()
        })
        .collect();
    let dim = target.nrows();
    let mut gathered = vec![ZERO; sub];
    for col in 0..target.ncols() {
        for base in (0..dim).filter(|b| b & all == 0) {
            for (i, &off) in offsets.iter().enumerate() {
                gathered[i] = target[(base + off, col)];
            }
            for (r, &off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (c, g) in gathered.iter().enumerate() {
                    acc += local[(r, c)] * g;
                }
                target[(base + off, col)] = acc;
            }
        }
    }
}

/// The full `2^n x 2^n` matrix of `local` acting on `qubits`, assembled entry
/// by entry.
pub fn embed_operator(local: &Matrix, qubits: &[usize], n: usize) -> Matrix {
    let dim = 1usize << n;
    let local_index = |full: usize| -> usize {
        qubits
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &q)| acc | (((full >> (q - 1)) & 1) << j))
    };
    let outside: usize = !qubits.iter().fold(0usize, |m, &q| m | 1 << (q - 1));
    Matrix::from_fn(dim, dim, |r, c| {
        if r & outside != c & outside {
            ZERO
        } else {
            local[(local_index(r), local_index(c))]
        }
    })
}

/// `kron(a, b)` with `b` on the less significant index.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

/// Permutation matrix `sum_b |f(b)><b|`.
pub fn permutation_matrix(table: &[u64]) -> Matrix {
    let dim = table.len();
    let mut m = Matrix::zeros(dim, dim);
    for (b, &fb) in table.iter().enumerate() {
        m[(fb as usize, b)] = ONE;
    }
    m
}

/// If `u` has exactly one entry of unit modulus per column (a permutation
/// times phases), the permutation as a table.
pub fn monomial_permutation(u: &Matrix, tol: f64) -> Option<Vec<u64>> {
    let mut table = Vec::with_capacity(u.ncols());
    for c in 0..u.ncols() {
        let mut hit = None;
        for r in 0..u.nrows() {
            let a = u[(r, c)].norm();
            if a > tol {
                if hit.is_some() || (a - 1.0).abs() > tol {
                    return None;
                }
                hit = Some(r as u64);
            }
        }
        table.push(hit?);
    }
    Some(table)
}

/// Formats a complex number as `(re,im)` with shortest round-trip floats.
pub fn format_complex(z: C64) -> String {
    format!("({},{})", fmt_float(z.re), fmt_float(z.im))
}

fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:?}").trim_end_matches(".0").to_string()
    }
}
