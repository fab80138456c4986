use serde::{Deserialize, Serialize};

use crate::linalg::{self, Matrix, C64, I};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// The Boolean observables `(b_x, b_y, b_z)` of one qubit at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct Descriptor {
    pub x: Matrix,
    pub y: Matrix,
    pub z: Matrix,
}

impl Descriptor {
    pub fn component(&self, axis: Axis) -> &Matrix {
        match axis {
            Axis::X => &self.x,
            Axis::Y => &self.y,
            Axis::Z => &self.z,
        }
    }

    pub fn dim(&self) -> usize {
        self.z.nrows()
    }

    /// `W^dagger d W` componentwise.
    pub fn conjugated(&self, w: &Matrix) -> Descriptor {
        let wd = w.adjoint();
        Descriptor {
            x: &wd * &self.x * w,
            y: &wd * &self.y * w,
            z: &wd * &self.z * w,
        }
    }

    /// Largest `|| b^2 - b ||` over the three components.
    pub fn idempotence_residual(&self) -> f64 {
        Axis::ALL
            .iter()
            .map(|&a| {
                let b = self.component(a);
                linalg::distance(&(b * b), b)
            })
            .fold(0.0, f64::max)
    }

    /// Largest residual of `(1 - 2 b_x)(1 - 2 b_y) = i (1 - 2 b_z)` and its
    /// cyclic permutations.
    pub fn pauli_residual(&self) -> f64 {
        let id = linalg::identity(self.dim());
        let sigma = |b: &Matrix| &id - b * C64::new(2.0, 0.0);
        let (sx, sy, sz) = (sigma(&self.x), sigma(&self.y), sigma(&self.z));
        [(&sx, &sy, &sz), (&sy, &sz, &sx), (&sz, &sx, &sy)]
            .iter()
            .map(|(a, b, c)| linalg::distance(&(*a * *b), &(*c * I)))
            .fold(0.0, f64::max)
    }

    /// Largest `|| [a_alpha, b_beta] ||` over component pairs of two qubits.
    pub fn commutation_residual(&self, other: &Descriptor) -> f64 {
        let mut worst: f64 = 0.0;
        for a in Axis::ALL {
            for b in Axis::ALL {
                let p = self.component(a) * other.component(b);
                // both Hermitian: [A, B] = AB - (AB)^dagger
                worst = worst.max(linalg::distance(&p, &p.adjoint()));
            }
        }
        worst
    }
}

/// Residuals of the three descriptor relations over a whole network.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RelationResiduals {
    pub commutation: f64,
    pub pauli: f64,
    pub idempotence: f64,
}

impl RelationResiduals {
    pub fn max(&self) -> f64 {
        self.commutation.max(self.pauli).max(self.idempotence)
    }
}

pub fn relation_residuals(descriptors: &[Descriptor]) -> RelationResiduals {
    let mut r = RelationResiduals::default();
    for (i, d) in descriptors.iter().enumerate() {
        r.pauli = r.pauli.max(d.pauli_residual());
        r.idempotence = r.idempotence.max(d.idempotence_residual());
        for e in &descriptors[i + 1..] {
            r.commutation = r.commutation.max(d.commutation_residual(e));
        }
    }
    r
}

fn two() -> C64 {
    C64::new(2.0, 0.0)
}

/// New descriptors of qubits `k`, `l` (controls) and `m` (target) after a
/// Toffoli gate, as polynomials in the old ones.
pub fn toffoli_closed_form(
    dk: &Descriptor,
    dl: &Descriptor,
    dm: &Descriptor,
) -> (Descriptor, Descriptor, Descriptor) {
    let (kx, ky, kz) = (&dk.x, &dk.y, &dk.z);
    let (lx, ly, lz) = (&dl.x, &dl.y, &dl.z);
    let (mx, my, mz) = (&dm.x, &dm.y, &dm.z);

    let lz_mx = lz * mx;
    let kz_mx = kz * mx;
    let kz_lz = kz * lz;

    let k = Descriptor {
        x: kx + &lz_mx - kx * &lz_mx * two(),
        y: ky + &lz_mx - ky * &lz_mx * two(),
        z: kz.clone(),
    };
    let l = Descriptor {
        x: lx + &kz_mx - kz * lx * mx * two(),
        y: ly + &kz_mx - kz * ly * mx * two(),
        z: lz.clone(),
    };
    let m = Descriptor {
        x: mx.clone(),
        y: my + &kz_lz - &kz_lz * my * two(),
        z: mz + &kz_lz - &kz_lz * mz * two(),
    };
    (k, l, m)
}

/// New descriptors of control `m` and target `n` after a controlled-not.
pub fn cnot_closed_form(dm: &Descriptor, dn: &Descriptor) -> (Descriptor, Descriptor) {
    let (mx, my, mz) = (&dm.x, &dm.y, &dm.z);
    let (nx, ny, nz) = (&dn.x, &dn.y, &dn.z);
    let m = Descriptor {
        x: nx + mx - nx * mx * two(),
        y: nx + my - nx * my * two(),
        z: mz.clone(),
    };
    let n = Descriptor {
        x: nx.clone(),
        y: ny + mz - ny * mz * two(),
        z: nz + mz - nz * mz * two(),
    };
    (m, n)
}
