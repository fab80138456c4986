//! Reversible classical networks.
//!
//! Bits are numbered from 1. Bit `k` of a network is bit `k - 1` of the
//! integer encoding of its state, so an `N`-bit state is the number
//! `2^(N-1) b_N + ... + 2 b_2 + b_1`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest width for which a full permutation table is materialised.
pub const MAX_TABLE_WIDTH: usize = 24;

/// Largest width of a [`BitWord`].
pub const MAX_WORD_WIDTH: usize = 63;

/// The computational state of an `N`-bit network: an element of `Z_{2^N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitWord {
    value: u64,
    width: usize,
}

impl BitWord {
    pub fn new(value: u64, width: usize) -> Result<Self> {
        if width == 0 || width > MAX_WORD_WIDTH {
            return Err(Error::Invalid(format!(
                "word width must be in 1..={MAX_WORD_WIDTH}, got {width}"
            )));
        }
        if value >> width != 0 {
            return Err(Error::ValueOutOfRange { value, width });
        }
        Ok(BitWord { value, width })
    }

    /// Builds a word from its bits, `bits[0]` being bit 1.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let value = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
        BitWord::new(value, bits.len())
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn width(self) -> usize {
        self.width
    }

    /// Value of bit `k` (1-based).
    pub fn bit(self, k: usize) -> bool {
        debug_assert!(k >= 1 && k <= self.width);
        (self.value >> (k - 1)) & 1 == 1
    }

    pub fn with_bit(self, k: usize, on: bool) -> Self {
        let mask = 1u64 << (k - 1);
        let value = if on { self.value | mask } else { self.value & !mask };
        BitWord { value, ..self }
    }

    pub fn bits(self) -> Vec<bool> {
        (1..=self.width).map(|k| self.bit(k)).collect()
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0b{:0width$b}", self.value, width = self.width)
    }
}

/// A reversible classical gate. Indices are 1-based bit numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassicalGate {
    /// Controls `k`, `l`; target `m`.
    Toffoli(usize, usize, usize),
    /// Control, target.
    CNot(usize, usize),
    Not(usize),
    Swap(usize, usize),
    Delay(usize),
}

impl ClassicalGate {
    pub fn bits(&self) -> Vec<usize> {
        match *self {
            ClassicalGate::Toffoli(k, l, m) => vec![k, l, m],
            ClassicalGate::CNot(m, n) | ClassicalGate::Swap(m, n) => vec![m, n],
            ClassicalGate::Not(k) | ClassicalGate::Delay(k) => vec![k],
        }
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        let bits = self.bits();
        let mut seen = HashSet::new();
        for &b in &bits {
            if b == 0 || b > width {
                return Err(Error::IndexOutOfRange { index: b, width });
            }
            if !seen.insert(b) {
                return Err(Error::RepeatedIndex { index: b });
            }
        }
        Ok(())
    }

    /// Applies the gate to an integer state without validation.
    pub fn apply_to_value(&self, v: u64) -> u64 {
        let bit = |k: usize| ((v >> (k - 1)) & 1) as i64;
        let set = |v: u64, k: usize, b: i64| {
            let mask = 1u64 << (k - 1);
            if b != 0 {
                v | mask
            } else {
                v & !mask
            }
        };
        match *self {
            ClassicalGate::Toffoli(k, l, m) => {
                let (bk, bl, bm) = (bit(k), bit(l), bit(m));
                set(v, m, bm + bk * bl - 2 * bk * bl * bm)
            }
            ClassicalGate::CNot(m, n) => {
                let (bm, bn) = (bit(m), bit(n));
                set(v, n, bn + bm - 2 * bn * bm)
            }
            ClassicalGate::Not(k) => set(v, k, 1 - bit(k)),
            ClassicalGate::Swap(k, l) => {
                let (bk, bl) = (bit(k), bit(l));
                set(set(v, k, bl), l, bk)
            }
            ClassicalGate::Delay(_) => v,
        }
    }
}

impl fmt::Display for ClassicalGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClassicalGate::Toffoli(k, l, m) => write!(f, "toffoli {k} {l} {m}"),
            ClassicalGate::CNot(m, n) => write!(f, "cnot {m} {n}"),
            ClassicalGate::Not(k) => write!(f, "not {k}"),
            ClassicalGate::Swap(k, l) => write!(f, "swap {k} {l}"),
            ClassicalGate::Delay(k) => write!(f, "delay {k}"),
        }
    }
}

pub fn apply_gate(gate: &ClassicalGate, b: BitWord) -> Result<BitWord> {
    gate.validate(b.width())?;
    Ok(BitWord {
        value: gate.apply_to_value(b.value()),
        width: b.width(),
    })
}

/// Checks that the gates of one step touch pairwise disjoint bits.
pub fn check_disjoint(gates: &[ClassicalGate], width: usize, step: usize) -> Result<()> {
    let mut used = HashSet::new();
    for g in gates {
        g.validate(width)?;
        for b in g.bits() {
            if !used.insert(b) {
                return Err(Error::OverlappingGates { step, index: b });
            }
        }
    }
    Ok(())
}

/// The invertible map `f_t` of one synchronous step, as a lookup table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepPermutation {
    width: usize,
    table: Vec<u64>,
    inverse: Vec<u64>,
    partition: Vec<Vec<usize>>,
}

impl StepPermutation {
    pub fn identity(width: usize) -> Result<Self> {
        check_table_width(width)?;
        let table: Vec<u64> = (0..1u64 << width).collect();
        Ok(StepPermutation {
            width,
            inverse: table.clone(),
            table,
            partition: (1..=width).map(|k| vec![k]).collect(),
        })
    }

    /// Wraps an explicit table; the touched partition is taken to be a single
    /// group holding every bit.
    pub fn from_table(width: usize, table: Vec<u64>) -> Result<Self> {
        check_table_width(width)?;
        let size = 1usize << width;
        if table.len() != size {
            return Err(Error::NotBijective(format!(
                "table has {} entries, expected {size}",
                table.len()
            )));
        }
        let inverse = invert_table(&table)?;
        Ok(StepPermutation {
            width,
            table,
            inverse,
            partition: vec![(1..=width).collect()],
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn inverse_table(&self) -> &[u64] {
        &self.inverse
    }

    /// Groups of bit indices that share a gate in this step; idle bits form
    /// singleton groups.
    pub fn touched_partition(&self) -> &[Vec<usize>] {
        &self.partition
    }

    pub fn apply(&self, v: u64) -> u64 {
        self.table[v as usize]
    }

    pub fn apply_inverse(&self, v: u64) -> u64 {
        self.inverse[v as usize]
    }

    pub fn inverted(&self) -> Self {
        StepPermutation {
            width: self.width,
            table: self.inverse.clone(),
            inverse: self.table.clone(),
            partition: self.partition.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &v)| i as u64 == v)
    }

    /// `self` after `first`.
    pub fn after(&self, first: &StepPermutation) -> Result<Self> {
        if self.width != first.width {
            return Err(Error::WidthMismatch {
                expected: first.width,
                found: self.width,
            });
        }
        let table = first.table.iter().map(|&v| self.apply(v)).collect();
        StepPermutation::from_table(self.width, table)
    }

    /// True when, for every group of the touched partition, the output bits
    /// of the group depend only on the input bits of the group.
    pub fn factorizes(&self) -> bool {
        for group in &self.partition {
            let inside: u64 = group.iter().fold(0, |m, &k| m | 1 << (k - 1));
            for v in 0..self.table.len() as u64 {
                let out = self.table[v as usize] & inside;
                for k in 1..=self.width {
                    let mask = 1u64 << (k - 1);
                    if inside & mask != 0 {
                        continue;
                    }
                    if self.table[(v ^ mask) as usize] & inside != out {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn check_table_width(width: usize) -> Result<()> {
    if width == 0 || width > MAX_TABLE_WIDTH {
        return Err(Error::ResourceLimit {
            what: "permutation table",
            requested: width,
            cap: MAX_TABLE_WIDTH,
        });
    }
    Ok(())
}

pub(crate) fn invert_table(table: &[u64]) -> Result<Vec<u64>> {
    let mut inverse = vec![u64::MAX; table.len()];
    for (i, &v) in table.iter().enumerate() {
        let slot = inverse
            .get_mut(v as usize)
            .ok_or_else(|| Error::NotBijective(format!("image {v} out of range")))?;
        if *slot != u64::MAX {
            return Err(Error::NotBijective(format!(
                "{} and {i} both map to {v}",
                *slot
            )));
        }
        *slot = i as u64;
    }
    Ok(inverse)
}

pub fn compose_step(gates: &[ClassicalGate], width: usize) -> Result<StepPermutation> {
    check_table_width(width)?;
    check_disjoint(gates, width, 0)?;
    let table: Vec<u64> = (0..1u64 << width)
        .map(|v| gates.iter().fold(v, |acc, g| g.apply_to_value(acc)))
        .collect();
    let inverse = invert_table(&table)?;
    let mut partition: Vec<Vec<usize>> = gates.iter().map(|g| g.bits()).collect();
    let touched: HashSet<usize> = partition.iter().flatten().copied().collect();
    partition.extend((1..=width).filter(|k| !touched.contains(k)).map(|k| vec![k]));
    partition.iter_mut().for_each(|g| g.sort_unstable());
    partition.sort();
    Ok(StepPermutation {
        width,
        table,
        inverse,
        partition,
    })
}

/// The structure of a network: one set of disjoint gates per step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkProgram {
    width: usize,
    steps: Vec<Vec<ClassicalGate>>,
}

impl NetworkProgram {
    pub fn new(width: usize, steps: Vec<Vec<ClassicalGate>>) -> Result<Self> {
        if width == 0 || width > MAX_WORD_WIDTH {
            return Err(Error::Invalid(format!("network width {width} out of range")));
        }
        for (t, gates) in steps.iter().enumerate() {
            check_disjoint(gates, width, t)?;
        }
        Ok(NetworkProgram { width, steps })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn steps(&self) -> &[Vec<ClassicalGate>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn step_permutation(&self, t: usize) -> Result<StepPermutation> {
        compose_step(&self.steps[t], self.width)
    }

    pub fn permutations(&self) -> Result<Vec<StepPermutation>> {
        (0..self.steps.len()).map(|t| self.step_permutation(t)).collect()
    }
}

/// Runs the program from `b0`; entry `t` of the result is the state at time `t`.
pub fn run(program: &NetworkProgram, b0: BitWord) -> Result<Vec<BitWord>> {
    if b0.width() != program.width() {
        return Err(Error::WidthMismatch {
            expected: program.width(),
            found: b0.width(),
        });
    }
    let mut trajectory = Vec::with_capacity(program.len() + 1);
    trajectory.push(b0);
    let mut v = b0.value();
    for gates in program.steps() {
        v = gates.iter().fold(v, |acc, g| g.apply_to_value(acc));
        trajectory.push(BitWord {
            value: v,
            width: b0.width(),
        });
    }
    Ok(trajectory)
}

/// Bits that may carry information confined to `start` at time `t0`, by
/// time `t1`: the closure of `start` under "shares a gate" over steps
/// `t0..t1`.
pub fn info_cone(
    program: &NetworkProgram,
    start: &BTreeSet<usize>,
    t0: usize,
    t1: usize,
) -> Result<BTreeSet<usize>> {
    if t0 > t1 || t1 > program.len() {
        return Err(Error::Invalid(format!(
            "interval [{t0}, {t1}] not within 0..={}",
            program.len()
        )));
    }
    if let Some(&k) = start.iter().find(|&&k| k == 0 || k > program.width()) {
        return Err(Error::IndexOutOfRange {
            index: k,
            width: program.width(),
        });
    }
    let mut cone = start.clone();
    for gates in &program.steps()[t0..t1] {
        let mut grown = cone.clone();
        for g in gates {
            let bits = g.bits();
            if bits.iter().any(|b| cone.contains(b)) {
                grown.extend(bits);
            }
        }
        cone = grown;
    }
    Ok(cone)
}

/// Least encoding among all rearrangements of identical disjoint blocks.
///
/// `blocks[i][j]` is the bit playing role `j` in block `i`; all blocks must
/// have the same length and be pairwise disjoint.
pub fn canonicalize_under_subnetwork_permutation(
    b: BitWord,
    blocks: &[Vec<usize>],
) -> Result<BitWord> {
    let Some(first) = blocks.first() else {
        return Ok(b);
    };
    let size = first.len();
    let mut seen = HashSet::new();
    for block in blocks {
        if block.len() != size {
            return Err(Error::Invalid(format!(
                "blocks of unequal size ({} vs {size})",
                block.len()
            )));
        }
        for &k in block {
            if k == 0 || k > b.width() {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    width: b.width(),
                });
            }
            if !seen.insert(k) {
                return Err(Error::Invalid(format!("bit {k} appears in two blocks")));
            }
        }
    }
    let contents: Vec<u64> = blocks
        .iter()
        .map(|block| {
            block
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &k)| acc | (u64::from(b.bit(k)) << j))
        })
        .collect();
    let place = |order: &[usize]| -> u64 {
        let mut v = b.value();
        for (slot, &src) in order.iter().enumerate() {
            for (j, &k) in blocks[slot].iter().enumerate() {
                let on = (contents[src] >> j) & 1 == 1;
                let mask = 1u64 << (k - 1);
                v = if on { v | mask } else { v & !mask };
            }
        }
        v
    };

    // When every block lies entirely above or below every other and roles
    // keep the same relative significance, the least word is obtained by
    // sorting contents so the most significant block gets the smallest.
    if blocks_are_ordered(blocks) {
        let mut slots: Vec<usize> = (0..blocks.len()).collect();
        slots.sort_by_key(|&i| std::cmp::Reverse(blocks[i][0]));
        let mut by_value: Vec<usize> = (0..blocks.len()).collect();
        by_value.sort_by_key(|&i| contents[i]);
        let mut order = vec![0; blocks.len()];
        for (slot, src) in slots.into_iter().zip(by_value) {
            order[slot] = src;
        }
        return BitWord::new(place(&order), b.width());
    }

    if blocks.len() > 9 {
        return Err(Error::ResourceLimit {
            what: "block permutation search",
            requested: blocks.len(),
            cap: 9,
        });
    }
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    let mut best = place(&order);
    while next_permutation(&mut order) {
        best = best.min(place(&order));
    }
    BitWord::new(best, b.width())
}

fn blocks_are_ordered(blocks: &[Vec<usize>]) -> bool {
    let roles_monotone = |block: &Vec<usize>| block.windows(2).all(|w| w[0] < w[1]);
    if !blocks.iter().all(roles_monotone) {
        return false;
    }
    let mut spans: Vec<(usize, usize)> = blocks
        .iter()
        .map(|b| (*b.first().unwrap(), *b.last().unwrap()))
        .collect();
    spans.sort_unstable();
    spans.windows(2).all(|w| w[0].1 < w[1].0)
}

pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
