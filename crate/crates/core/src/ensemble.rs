//! Ensembles (multisets) of identical classical networks and their branches.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::classical::{run, BitWord, NetworkProgram, StepPermutation};
use crate::error::{Error, Result};

pub type Multiplicity = BigRational;

/// Multiplicities `mu_b` over the states of an `N`-bit network.
///
/// Integer multiplicities describe a multiset, fractional ones a proportion;
/// both share this type. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ensemble {
    width: usize,
    multiplicities: BTreeMap<u64, Multiplicity>,
}

impl Ensemble {
    pub fn new<I>(width: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Multiplicity)>,
    {
        let mut multiplicities: BTreeMap<u64, Multiplicity> = BTreeMap::new();
        for (b, mu) in entries {
            BitWord::new(b, width)?;
            if mu.is_negative() {
                return Err(Error::Invalid(format!("negative multiplicity {mu} for state {b}")));
            }
            if mu.is_zero() {
                continue;
            }
            *multiplicities.entry(b).or_insert_with(Zero::zero) += mu;
        }
        if multiplicities.is_empty() {
            return Err(Error::Invalid("ensemble has zero total multiplicity".into()));
        }
        Ok(Ensemble {
            width,
            multiplicities,
        })
    }

    /// Integer multiplicities, as in a multiset of `M` networks.
    pub fn from_counts<I>(width: usize, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, i64)>,
    {
        Ensemble::new(
            width,
            counts
                .into_iter()
                .map(|(b, c)| (b, BigRational::from_integer(c.into()))),
        )
    }

    pub fn homogeneous(b: BitWord) -> Self {
        let mut multiplicities = BTreeMap::new();
        multiplicities.insert(b.value(), BigRational::from_integer(1.into()));
        Ensemble {
            width: b.width(),
            multiplicities,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn multiplicity(&self, b: u64) -> Multiplicity {
        self.multiplicities.get(&b).cloned().unwrap_or_else(Zero::zero)
    }

    /// Present states and their multiplicities, in increasing state order.
    pub fn entries(&self) -> impl Iterator<Item = (u64, &Multiplicity)> {
        self.multiplicities.iter().map(|(&b, m)| (b, m))
    }

    pub fn total(&self) -> Multiplicity {
        self.multiplicities.values().fold(Zero::zero(), |acc: BigRational, m| acc + m)
    }

    /// `mu_b / M`.
    pub fn proportion(&self, b: u64) -> Multiplicity {
        self.multiplicity(b) / self.total()
    }

    pub fn branch_count(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn without_state(&self, b: u64) -> Result<Self> {
        Ensemble::new(
            self.width,
            self.multiplicities
                .iter()
                .filter(|(&s, _)| s != b)
                .map(|(&s, m)| (s, m.clone())),
        )
    }
}

/// `mu'_b = mu_{f^-1(b)}`.
pub fn evolve_multiplicities(e: &Ensemble, f: &StepPermutation) -> Result<Ensemble> {
    if e.width() != f.width() {
        return Err(Error::WidthMismatch {
            expected: f.width(),
            found: e.width(),
        });
    }
    let multiplicities = e
        .multiplicities
        .iter()
        .map(|(&b, m)| (f.apply(b), m.clone()))
        .collect();
    Ok(Ensemble {
        width: e.width,
        multiplicities,
    })
}

/// Multiplicity history of an ensemble under every step of `program`.
pub fn evolve_program(e: &Ensemble, program: &NetworkProgram) -> Result<Vec<Ensemble>> {
    let mut history = vec![e.clone()];
    for f in program.permutations()? {
        let next = evolve_multiplicities(history.last().unwrap(), &f)?;
        history.push(next);
    }
    Ok(history)
}

/// A sub-ensemble whose members all share one state at every time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub state_trajectory: Vec<BitWord>,
    pub multiplicity: Multiplicity,
}

pub fn branches(e: &Ensemble, program: &NetworkProgram) -> Result<Vec<Branch>> {
    e.entries()
        .map(|(b, m)| {
            Ok(Branch {
                state_trajectory: run(program, BitWord::new(b, e.width())?)?,
                multiplicity: m.clone(),
            })
        })
        .collect()
}
