//! Causal autonomy of descriptor families: whether the family at `t + 1` is
//! determined by the family at `t` alone.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::classical::StepPermutation;
use crate::error::{Error, Result};
use crate::heisenberg::{Axis, HeisenbergNetwork, QuantumGate, QuantumHistory};
use crate::linalg::{self, Matrix, C64};

use super::classicality::{search_sector_law, sector_projectors, Witness};

/// A family of observables built from the descriptors at one time.
#[derive(Clone, Debug, PartialEq)]
pub enum Selector {
    /// Every `b_kz`.
    AllZ,
    /// `b_cz b_kz` for every `k`; `k = c` contributes `b_cz`.
    ControlledZ { control: usize },
    /// `b_cz b_kx` for every `k != c`.
    ControlledX { control: usize },
    /// `S`, `S b_kz`, `S b_kx`, `S b_ky` with `S = 1 - b_cz`, for `k != c`.
    OffSector { control: usize },
    /// Products of components on distinct qubits, one product per member.
    Custom(Vec<Vec<(usize, Axis)>>),
}

impl Selector {
    fn control(&self) -> Option<usize> {
        match *self {
            Selector::ControlledZ { control }
            | Selector::ControlledX { control }
            | Selector::OffSector { control } => Some(control),
            _ => None,
        }
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        let check = |k: usize| {
            if k == 0 || k > width {
                Err(Error::IndexOutOfRange { index: k, width })
            } else {
                Ok(())
            }
        };
        if let Some(c) = self.control() {
            check(c)?;
            if width < 2 {
                return Err(Error::Invalid("a controlled selector needs two qubits".into()));
            }
        }
        if let Selector::Custom(members) = self {
            if members.is_empty() {
                return Err(Error::Invalid("empty custom selector".into()));
            }
            for m in members {
                let mut seen = Vec::new();
                for &(k, _) in m {
                    check(k)?;
                    if seen.contains(&k) {
                        return Err(Error::RepeatedIndex { index: k });
                    }
                    seen.push(k);
                }
            }
        }
        Ok(())
    }

    /// The members of the family at the time of `net`.
    pub fn family(&self, net: &HeisenbergNetwork) -> Result<Vec<Matrix>> {
        let width = net.width();
        self.validate(width)?;
        let others = |c: usize| (1..=width).filter(move |&k| k != c);
        Ok(match *self {
            Selector::AllZ => net.z_components(),
            Selector::ControlledZ { control } => {
                let s = net.component(control, Axis::Z);
                (1..=width)
                    .map(|k| if k == control { s.clone() } else { &s * net.component(k, Axis::Z) })
                    .collect()
            }
            Selector::ControlledX { control } => {
                let s = net.component(control, Axis::Z);
                others(control).map(|k| &s * net.component(k, Axis::X)).collect()
            }
            Selector::OffSector { control } => {
                let s = linalg::identity(net.dim()) - net.component(control, Axis::Z);
                let mut out = vec![s.clone()];
                for k in others(control) {
                    for axis in [Axis::Z, Axis::X, Axis::Y] {
                        out.push(&s * net.component(k, axis));
                    }
                }
                out
            }
            Selector::Custom(ref members) => members
                .iter()
                .map(|m| {
                    m.iter()
                        .fold(linalg::identity(net.dim()), |acc, &(k, a)| acc * net.component(k, a))
                })
                .collect(),
        })
    }

    /// The sector projector and the sector's z-family, for selectors that
    /// describe bits: all-z (the whole space) and controlled-z.
    pub fn z_sector(&self, family: &[Matrix]) -> Option<(Matrix, Vec<Matrix>)> {
        match *self {
            Selector::AllZ => Some((linalg::identity(family[0].nrows()), family.to_vec())),
            Selector::ControlledZ { control } => {
                let s = family[control - 1].clone();
                let zs = family
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != control - 1)
                    .map(|(_, m)| m.clone())
                    .collect();
                Some((s, zs))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::AllZ => write!(f, "z"),
            Selector::ControlledZ { control } => write!(f, "z{control}"),
            Selector::ControlledX { control } => write!(f, "x{control}"),
            Selector::OffSector { control } => write!(f, "off{control}"),
            Selector::Custom(members) => {
                let parts: Vec<String> = members
                    .iter()
                    .map(|m| {
                        m.iter()
                            .map(|(k, a)| format!("{k}{}", axis_letter(*a)))
                            .collect::<Vec<_>>()
                            .join("*")
                    })
                    .collect();
                write!(f, "{}", parts.join("+"))
            }
        }
    }
}

fn axis_letter(a: Axis) -> char {
    match a {
        Axis::X => 'x',
        Axis::Y => 'y',
        Axis::Z => 'z',
    }
}

/// Parses `z`, `z3`, `x3`, `off3` or a custom family such as `1z*2x+3y`.
/// A trailing `N` in place of the control number stands for the last
/// qubit; it is resolved by [`Selector::resolve`].
impl FromStr for Selector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let control = |rest: &str| -> std::result::Result<usize, String> {
            if rest == "N" {
                Ok(0)
            } else {
                rest.parse::<usize>()
                    .ok()
                    .filter(|&c| c > 0)
                    .ok_or_else(|| format!("bad control qubit `{rest}`"))
            }
        };
        if s == "z" {
            return Ok(Selector::AllZ);
        }
        if let Some(rest) = s.strip_prefix("off") {
            return Ok(Selector::OffSector { control: control(rest)? });
        }
        if !s.contains('*') && !s.contains('+') {
            if let Some(rest) = s.strip_prefix('z') {
                return Ok(Selector::ControlledZ { control: control(rest)? });
            }
            if let Some(rest) = s.strip_prefix('x') {
                return Ok(Selector::ControlledX { control: control(rest)? });
            }
        }
        let members = s
            .split('+')
            .map(|m| {
                m.split('*')
                    .map(|c| {
                        let cut = c.char_indices().last().map_or(0, |(i, _)| i);
                        let (k, a) = c.split_at(cut);
                        let axis = match a {
                            "x" => Axis::X,
                            "y" => Axis::Y,
                            "z" => Axis::Z,
                            _ => return Err(format!("bad component `{c}`")),
                        };
                        let k = k.parse::<usize>().map_err(|_| format!("bad component `{c}`"))?;
                        Ok((k, axis))
                    })
                    .collect::<std::result::Result<Vec<_>, String>>()
            })
            .collect::<std::result::Result<Vec<_>, String>>()?;
        Ok(Selector::Custom(members))
    }
}

impl Selector {
    /// Replaces a control written as `N` by the last qubit.
    pub fn resolve(self, width: usize) -> Selector {
        match self {
            Selector::ControlledZ { control: 0 } => Selector::ControlledZ { control: width },
            Selector::ControlledX { control: 0 } => Selector::ControlledX { control: width },
            Selector::OffSector { control: 0 } => Selector::OffSector { control: width },
            other => other,
        }
    }
}

/// Per-step prediction of the family at `t + 1` from the family at `t`.
/// `None` means the law has nothing to say about that step.
pub type DeclaredLaw = Box<dyn Fn(usize, &[Matrix]) -> Option<Vec<Matrix>> + Send + Sync>;

pub enum UpdateLaw {
    Declared(DeclaredLaw),
    /// Each member at `t + 1` lies in the algebra generated by the family
    /// at `t`: some polynomial of the family predicts it.
    GeneratedAlgebra,
}

impl fmt::Debug for UpdateLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpdateLaw::Declared(_) => write!(f, "Declared"),
            UpdateLaw::GeneratedAlgebra => write!(f, "GeneratedAlgebra"),
        }
    }
}

/// `sum_c bit_j(f(c)) P_c` for every bit `j` of the sector's z-family.
pub fn permuted_bits(sector: &Matrix, zs: &[Matrix], f: &StepPermutation) -> Vec<Matrix> {
    let projectors = sector_projectors(sector, zs);
    let dim = sector.nrows();
    (0..zs.len())
        .map(|j| {
            projectors
                .iter()
                .enumerate()
                .filter(|&(c, _)| (f.apply(c as u64) >> j) & 1 == 1)
                .fold(Matrix::zeros(dim, dim), |acc, (_, p)| acc + p)
        })
        .collect()
}

/// The classical update law of a bit-describing selector under step
/// permutations `laws[t]` (`None` where no law is known).
pub fn classical_law(selector: Selector, laws: Vec<Option<StepPermutation>>) -> Result<UpdateLaw> {
    if !matches!(selector, Selector::AllZ | Selector::ControlledZ { .. }) {
        return Err(Error::Invalid(format!("selector `{selector}` does not describe bits")));
    }
    Ok(UpdateLaw::Declared(Box::new(move |t, family| {
        let f = laws.get(t)?.as_ref()?;
        let (sector, zs) = selector.z_sector(family)?;
        if f.width() != zs.len() {
            return None;
        }
        let mut predicted = permuted_bits(&sector, &zs, f);
        if let Selector::ControlledZ { control } = selector {
            predicted.insert(control - 1, sector);
        }
        Some(predicted)
    })))
}

/// The classical law a step's gates give to a selector: the whole step's
/// basis permutation for all-z, the permutation applied when the control is
/// set for controlled-z.
pub fn gate_list_law(selector: &Selector, gates: &[QuantumGate], width: usize, tol: f64) -> Option<StepPermutation> {
    match *selector {
        Selector::AllZ => crate::heisenberg::step_candidate(gates, width, tol),
        Selector::ControlledZ { control } => {
            if let [QuantumGate::Conditional { control: c, f, .. }] = gates {
                if *c == control {
                    return StepPermutation::from_table(width - 1, f.clone()).ok();
                }
            }
            let full = crate::heisenberg::step_candidate(gates, width, tol)?;
            let bit = 1u64 << (control - 1);
            let squeeze = |v: u64| (v & (bit - 1)) | ((v >> control) << (control - 1));
            let table: Option<Vec<u64>> = (0..1u64 << (width - 1))
                .map(|c| {
                    let spread = (c & (bit - 1)) | ((c >> (control - 1)) << control) | bit;
                    let image = full.apply(spread);
                    (image & bit != 0).then(|| squeeze(image))
                })
                .collect();
            StepPermutation::from_table(width - 1, table?).ok()
        }
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AutonomyReport {
    pub selector: String,
    pub t0: usize,
    pub t1: usize,
    pub autonomous: bool,
    /// First step `t` whose prediction of `t + 1` fails, with its residual
    /// (infinite where the declared law gives no prediction).
    pub counterexample: Option<(usize, f64)>,
    /// Largest finite residual.
    pub max_residual: f64,
    /// Steps for which the declared law gives no prediction.
    pub undeclared_steps: Vec<usize>,
}

/// Orthonormal basis (Hilbert-Schmidt) of the unital algebra generated by
/// `generators`.
pub fn algebra_basis(generators: &[Matrix]) -> Vec<Matrix> {
    let dim = generators[0].nrows();
    let mut basis: Vec<Matrix> = Vec::new();
    let mut queue = vec![linalg::identity(dim)];
    queue.extend(generators.iter().cloned());
    let mut i = 0;
    while i < queue.len() {
        let m = queue[i].clone();
        i += 1;
        if let Some(q) = orthonormal_residue(&basis, &m) {
            basis.push(q.clone());
            if basis.len() == dim * dim {
                break;
            }
            for g in generators {
                queue.push(&q * g);
            }
        }
    }
    basis
}

fn inner(a: &Matrix, b: &Matrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn orthonormal_residue(basis: &[Matrix], m: &Matrix) -> Option<Matrix> {
    let scale = linalg::norm(m);
    if scale == 0.0 {
        return None;
    }
    let mut r = m.clone();
    for _ in 0..2 {
        for q in basis {
            let c = inner(q, &r);
            r -= q * c;
        }
    }
    let n = linalg::norm(&r);
    (n > 1e-9 * scale).then(|| r / C64::new(n, 0.0))
}

/// Distance from `m` to the span of an orthonormal basis.
pub fn distance_to_span(basis: &[Matrix], m: &Matrix) -> f64 {
    let mut r = m.clone();
    for _ in 0..2 {
        for q in basis {
            let c = inner(q, &r);
            r -= q * c;
        }
    }
    linalg::norm(&r)
}

fn scaled(tol: f64, m: &Matrix) -> f64 {
    tol * (1.0 + linalg::norm(m))
}

/// Checks the family over steps `t0 .. t1` (times `t0` to `t1`).
pub fn check_autonomy(
    history: &QuantumHistory,
    selector: &Selector,
    law: &UpdateLaw,
    t0: usize,
    t1: usize,
    tol: f64,
) -> Result<AutonomyReport> {
    if t0 > t1 || t1 >= history.snapshots.len() {
        return Err(Error::Invalid(format!(
            "interval [{t0}, {t1}] outside a history of {} times",
            history.snapshots.len()
        )));
    }
    let mut report = AutonomyReport {
        selector: selector.to_string(),
        t0,
        t1,
        autonomous: true,
        counterexample: None,
        max_residual: 0.0,
        undeclared_steps: Vec::new(),
    };
    let mut now = selector.family(history.at(t0))?;
    for t in t0..t1 {
        let next = selector.family(history.at(t + 1))?;
        let failures: Vec<(f64, bool)> = match law {
            UpdateLaw::Declared(f) => match f(t, &now) {
                Some(predicted) if predicted.len() == next.len() => predicted
                    .iter()
                    .zip(&next)
                    .map(|(p, n)| {
                        let r = linalg::distance(p, n);
                        (r, r > scaled(tol, n))
                    })
                    .collect(),
                _ => {
                    report.undeclared_steps.push(t);
                    vec![(f64::INFINITY, true)]
                }
            },
            UpdateLaw::GeneratedAlgebra => {
                let basis = algebra_basis(&now);
                next.iter()
                    .map(|n| {
                        let r = distance_to_span(&basis, n);
                        (r, r > scaled(tol, n))
                    })
                    .collect()
            }
        };
        for (r, failed) in failures {
            if r.is_finite() {
                report.max_residual = report.max_residual.max(r);
            }
            if failed && report.counterexample.is_none() {
                report.autonomous = false;
                report.counterexample = Some((t, r));
            }
        }
        now = next;
    }
    Ok(report)
}

/// The three families of a network of conditional gates sharing one control:
/// the controlled-z quarter, the off-control half and the controlled-x
/// quarter.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionalSectors {
    pub quarter: AutonomyReport,
    pub off_sector: AutonomyReport,
    /// Steps at which the off-control sector admits a classical law.
    pub off_sector_classical_steps: Vec<usize>,
    pub remaining_quarter: AutonomyReport,
}

pub fn conditional_sectors(
    history: &QuantumHistory,
    control: usize,
    laws: Vec<Option<StepPermutation>>,
    tol: f64,
) -> Result<ConditionalSectors> {
    let t1 = history.program.len();
    let quarter_sel = Selector::ControlledZ { control };
    let quarter = check_autonomy(history, &quarter_sel, &classical_law(quarter_sel.clone(), laws)?, 0, t1, tol)?;
    let off = Selector::OffSector { control };
    let off_sector = check_autonomy(history, &off, &UpdateLaw::GeneratedAlgebra, 0, t1, tol)?;
    let remaining_quarter = check_autonomy(
        history,
        &Selector::ControlledX { control },
        &UpdateLaw::GeneratedAlgebra,
        0,
        t1,
        tol,
    )?;
    let mut off_sector_classical_steps = Vec::new();
    for t in 0..t1 {
        if off_sector_law(history, control, t, tol).is_ok() {
            off_sector_classical_steps.push(t);
        }
    }
    Ok(ConditionalSectors {
        quarter,
        off_sector,
        off_sector_classical_steps,
        remaining_quarter,
    })
}

/// A classical law for the bits of the off-control sector at step `t`.
pub fn off_sector_law(
    history: &QuantumHistory,
    control: usize,
    t: usize,
    tol: f64,
) -> std::result::Result<StepPermutation, Witness> {
    let sector_family = |net: &HeisenbergNetwork| {
        let s = linalg::identity(net.dim()) - net.component(control, Axis::Z);
        let zs: Vec<Matrix> = (1..=net.width())
            .filter(|&k| k != control)
            .map(|k| &s * net.component(k, Axis::Z))
            .collect();
        (s, zs)
    };
    let (s, before) = sector_family(history.at(t));
    let (_, after) = sector_family(history.at(t + 1));
    search_sector_law(&s, &before, &after, tol)
}
