//! The e-number algebra of an ensemble of `N`-bit networks.
//!
//! An [`ENumber`] is a vector of `2^N` exact coefficients together with a time
//! tag `t`: coefficient `b` multiplies the projector `P_b(t)`. The same
//! vector has different coordinates at different times; [`retime_forward`]
//! and [`retime_backward`] convert between adjacent bases using
//! `P_b(t+1) = P_{f_t^-1(b)}(t)`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::classical::StepPermutation;
use crate::ensemble::Ensemble;
use crate::error::{Error, Result};

pub type Scalar = BigRational;

/// Widest ensemble whose e-numbers are materialised.
pub const MAX_ENUMBER_WIDTH: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ENumber {
    time_tag: i64,
    width: usize,
    coeffs: Vec<Scalar>,
}

fn int(v: u64) -> Scalar {
    Scalar::from_integer(v.into())
}

fn check_width(width: usize) -> Result<()> {
    if width == 0 || width > MAX_ENUMBER_WIDTH {
        return Err(Error::ResourceLimit {
            what: "e-number",
            requested: width,
            cap: MAX_ENUMBER_WIDTH,
        });
    }
    Ok(())
}

impl ENumber {
    pub fn from_coeffs(width: usize, time_tag: i64, coeffs: Vec<Scalar>) -> Result<Self> {
        check_width(width)?;
        if coeffs.len() != 1 << width {
            return Err(Error::Invalid(format!(
                "e-number over {width} bits needs {} coefficients, got {}",
                1usize << width,
                coeffs.len()
            )));
        }
        Ok(ENumber {
            time_tag,
            width,
            coeffs,
        })
    }

    pub fn zero(width: usize, time_tag: i64) -> Result<Self> {
        check_width(width)?;
        ENumber::from_coeffs(width, time_tag, vec![Scalar::zero(); 1 << width])
    }

    /// `1 = sum_b P_b(t)`.
    pub fn unit(width: usize, time_tag: i64) -> Result<Self> {
        check_width(width)?;
        ENumber::from_coeffs(width, time_tag, vec![Scalar::one(); 1 << width])
    }

    /// The state e-number `b(t) = sum_b b P_b(t)`.
    pub fn state(width: usize, time_tag: i64) -> Result<Self> {
        check_width(width)?;
        ENumber::from_coeffs(width, time_tag, (0..1u64 << width).map(int).collect())
    }

    /// The constant e-number `mu`, expressed in the basis of time `time_tag`
    /// at which the ensemble has multiplicities `e`.
    pub fn multiplicities(e: &Ensemble, time_tag: i64) -> Result<Self> {
        let mut x = ENumber::zero(e.width(), time_tag)?;
        for (b, m) in e.entries() {
            x.coeffs[b as usize] = m.clone();
        }
        Ok(x)
    }

    pub fn time_tag(&self) -> i64 {
        self.time_tag
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, b: u64) -> &Scalar {
        &self.coeffs[b as usize]
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|x| x * c)
    }

    pub fn add(&self, other: &ENumber) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ENumber) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn map(&self, g: impl Fn(&Scalar) -> Scalar) -> Self {
        ENumber {
            time_tag: self.time_tag,
            width: self.width,
            coeffs: self.coeffs.iter().map(g).collect(),
        }
    }

    fn zip(&self, other: &ENumber, g: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        same_frame(self, other)?;
        Ok(ENumber {
            time_tag: self.time_tag,
            width: self.width,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| g(a, b)).collect(),
        })
    }
}

fn same_frame(x: &ENumber, y: &ENumber) -> Result<()> {
    if x.time_tag != y.time_tag {
        return Err(Error::TimeTagMismatch {
            left: x.time_tag,
            right: y.time_tag,
        });
    }
    if x.width != y.width {
        return Err(Error::WidthMismatch {
            expected: x.width,
            found: y.width,
        });
    }
    Ok(())
}

/// `P_b(t)`: the unit coordinate vector at `b`.
pub fn enumber_basis_projector(b: u64, width: usize, t: i64) -> Result<ENumber> {
    let mut x = ENumber::zero(width, t)?;
    let slot = x
        .coeffs
        .get_mut(b as usize)
        .ok_or(Error::ValueOutOfRange { value: b, width })?;
    *slot = Scalar::one();
    Ok(x)
}

/// `g(sum_b x_b P_b(t)) = sum_b g(x_b) P_b(t)`.
pub fn lift_function(g: impl Fn(&Scalar) -> Scalar, x: &ENumber) -> ENumber {
    x.map(g)
}

/// The scalar product `x . y`, for which `{P_b(t)}` is orthonormal.
pub fn scalar_product(x: &ENumber, y: &ENumber) -> Result<Scalar> {
    same_frame(x, y)?;
    Ok(x.coeffs
        .iter()
        .zip(&y.coeffs)
        .fold(Scalar::zero(), |acc, (a, b)| acc + a * b))
}

/// The e-number product: `P_a(t) P_b(t) = delta_ab P_a(t)`.
pub fn enumber_product(x: &ENumber, y: &ENumber) -> Result<ENumber> {
    x.zip(y, |a, b| a * b)
}

/// Combines e-numbers of two ensembles; `P_a (x) P_b = P_{a 2^N' + b}` where
/// `N'` is the width of `y`.
pub fn tensor(x: &ENumber, y: &ENumber) -> Result<ENumber> {
    if x.time_tag != y.time_tag {
        return Err(Error::TimeTagMismatch {
            left: x.time_tag,
            right: y.time_tag,
        });
    }
    let width = x.width + y.width;
    check_width(width)?;
    let mut coeffs = Vec::with_capacity(1 << width);
    for a in &x.coeffs {
        for b in &y.coeffs {
            coeffs.push(a * b);
        }
    }
    ENumber::from_coeffs(width, x.time_tag, coeffs)
}

/// Re-expresses `x` (tagged `t`) in the basis of time `t + 1`, where `f` is
/// the step taking `t` to `t + 1`.
pub fn retime_forward(x: &ENumber, f: &StepPermutation) -> Result<ENumber> {
    check_step(x, f)?;
    let mut coeffs = vec![Scalar::zero(); x.coeffs.len()];
    for (c, v) in x.coeffs.iter().enumerate() {
        coeffs[f.apply(c as u64) as usize] = v.clone();
    }
    ENumber::from_coeffs(x.width, x.time_tag + 1, coeffs)
}

/// Re-expresses `x` (tagged `t + 1`) in the basis of time `t`.
pub fn retime_backward(x: &ENumber, f: &StepPermutation) -> Result<ENumber> {
    check_step(x, f)?;
    let coeffs = (0..x.coeffs.len() as u64)
        .map(|c| x.coeffs[f.apply(c) as usize].clone())
        .collect();
    ENumber::from_coeffs(x.width, x.time_tag - 1, coeffs)
}

fn check_step(x: &ENumber, f: &StepPermutation) -> Result<()> {
    if x.width != f.width() {
        return Err(Error::WidthMismatch {
            expected: x.width,
            found: f.width(),
        });
    }
    Ok(())
}

/// `b(t+1) = f_t(b(t))`, returned in the coordinates of time `t` (the tag of
/// the input). Coefficients of `b_of_t` must be integer states of the network.
pub fn evolve_enumber(b_of_t: &ENumber, f: &StepPermutation) -> Result<ENumber> {
    check_step(b_of_t, f)?;
    let size = 1u64 << b_of_t.width;
    let mut coeffs = Vec::with_capacity(b_of_t.coeffs.len());
    for c in &b_of_t.coeffs {
        let state = c
            .is_integer()
            .then(|| c.to_integer().to_u64())
            .flatten()
            .filter(|&v| v < size)
            .ok_or_else(|| Error::Invalid(format!("coefficient {c} is not a network state")))?;
        coeffs.push(int(f.apply(state)));
    }
    ENumber::from_coeffs(b_of_t.width, b_of_t.time_tag, coeffs)
}

/// `P_b(t) = delta(b(t) - b 1)` for each present `b`, with the Kronecker
/// delta lifted componentwise.
pub fn reconstruct_projectors_from_algebra(
    b_of_t: &ENumber,
    states_present: &[u64],
) -> Result<BTreeMap<u64, ENumber>> {
    let unit = ENumber::unit(b_of_t.width, b_of_t.time_tag)?;
    states_present
        .iter()
        .map(|&b| {
            let shifted = b_of_t.sub(&unit.scale(&int(b)))?;
            let delta = lift_function(
                |v| if v.is_zero() { Scalar::one() } else { Scalar::zero() },
                &shifted,
            );
            Ok((b, delta))
        })
        .collect()
}

/// The e-number picture of an ensemble run: `mu` and `b(t)` in the basis of
/// every time, built only from retiming and lifting.
#[derive(Clone, Debug)]
pub struct ENumberHistory {
    /// `mu` expressed in the basis of time `t`.
    pub mu: Vec<ENumber>,
    /// `b(t)` expressed in the basis of time `t`.
    pub state: Vec<ENumber>,
}

pub fn enumber_history(initial: &Ensemble, steps: &[StepPermutation]) -> Result<ENumberHistory> {
    let width = initial.width();
    let mut mu = vec![ENumber::multiplicities(initial, 0)?];
    let mut state = vec![ENumber::state(width, 0)?];
    for f in steps {
        let next_mu = retime_forward(mu.last().unwrap(), f)?;
        let next_state = retime_forward(&evolve_enumber(state.last().unwrap(), f)?, f)?;
        mu.push(next_mu);
        state.push(next_state);
    }
    Ok(ENumberHistory { mu, state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{compose_step, ClassicalGate};

    #[test]
    fn projector_is_unit_vector() {
        let p = enumber_basis_projector(0, 1, 0).unwrap();
        assert_eq!(p.coeffs(), &[int(1), int(0)]);
        assert!(enumber_basis_projector(2, 1, 0).is_err());
    }

    #[test]
    fn projectors_sum_to_unit() {
        let mut sum = ENumber::zero(2, 3).unwrap();
        for b in 0..4 {
            sum = sum.add(&enumber_basis_projector(b, 2, 3).unwrap()).unwrap();
        }
        assert_eq!(sum, ENumber::unit(2, 3).unwrap());
    }

    #[test]
    fn retiming_follows_the_step() {
        let f = compose_step(&[ClassicalGate::Toffoli(1, 2, 3)], 3).unwrap();
        for b in 0..8 {
            let later = enumber_basis_projector(b, 3, 1).unwrap();
            let back = retime_backward(&later, &f).unwrap();
            assert_eq!(back, enumber_basis_projector(f.apply_inverse(b), 3, 0).unwrap());
            assert_eq!(retime_forward(&back, &f).unwrap(), later);
        }
    }

    #[test]
    fn lifting() {
        let b = ENumber::state(1, 0).unwrap();
        assert_eq!(lift_function(|v| v.clone(), &b), b);
        assert_eq!(lift_function(|v| v * v, &b).coeffs(), &[int(0), int(1)]);
        let two = ENumber::state(2, 0).unwrap();
        let shifted = two.sub(&ENumber::unit(2, 0).unwrap().scale(&int(2))).unwrap();
        let delta = lift_function(|v| if v.is_zero() { int(1) } else { int(0) }, &shifted);
        assert_eq!(delta, enumber_basis_projector(2, 2, 0).unwrap());
    }

    #[test]
    fn scalar_products() {
        let e = Ensemble::from_counts(2, [(0, 3), (3, 5)]).unwrap();
        let mu = ENumber::multiplicities(&e, 0).unwrap();
        for a in 0..4 {
            let pa = enumber_basis_projector(a, 2, 0).unwrap();
            assert_eq!(scalar_product(&mu, &pa).unwrap(), e.multiplicity(a));
            for b in 0..4 {
                let pb = enumber_basis_projector(b, 2, 0).unwrap();
                let expect = if a == b { int(1) } else { int(0) };
                assert_eq!(scalar_product(&pa, &pb).unwrap(), expect);
            }
        }
        assert_eq!(scalar_product(&mu, &ENumber::unit(2, 0).unwrap()).unwrap(), int(8));
        let other_time = ENumber::unit(2, 1).unwrap();
        assert_eq!(
            scalar_product(&mu, &other_time),
            Err(Error::TimeTagMismatch { left: 0, right: 1 })
        );
    }

    #[test]
    fn products() {
        let b = ENumber::state(2, 0).unwrap();
        let one = ENumber::unit(2, 0).unwrap();
        assert_eq!(enumber_product(&b, &one).unwrap(), b);
        let p1 = enumber_basis_projector(1, 2, 0).unwrap();
        let p2 = enumber_basis_projector(2, 2, 0).unwrap();
        assert_eq!(enumber_product(&p1, &p2).unwrap(), ENumber::zero(2, 0).unwrap());
        assert_eq!(enumber_product(&b, &b).unwrap(), lift_function(|v| v * v, &b));
        assert!(enumber_product(&b, &ENumber::unit(2, 1).unwrap()).is_err());
    }

    #[test]
    fn tensor_index_convention() {
        let one = tensor(&ENumber::unit(1, 0).unwrap(), &ENumber::unit(2, 0).unwrap()).unwrap();
        assert_eq!(one, ENumber::unit(3, 0).unwrap());
        let p = tensor(
            &enumber_basis_projector(1, 1, 0).unwrap(),
            &enumber_basis_projector(0, 1, 0).unwrap(),
        )
        .unwrap();
        assert_eq!(p, enumber_basis_projector(2, 2, 0).unwrap());
        for (a, b, c, d) in [(0, 1, 0, 1), (1, 0, 1, 1), (1, 1, 1, 1)] {
            let l = tensor(&enumber_basis_projector(a, 1, 0).unwrap(), &enumber_basis_projector(b, 1, 0).unwrap()).unwrap();
            let r = tensor(&enumber_basis_projector(c, 1, 0).unwrap(), &enumber_basis_projector(d, 1, 0).unwrap()).unwrap();
            let expect = if a == c && b == d { int(1) } else { int(0) };
            assert_eq!(scalar_product(&l, &r).unwrap(), expect);
        }
    }

    #[test]
    fn evolve_state_enumber_through_toffoli() {
        let f = compose_step(&[ClassicalGate::Toffoli(1, 2, 3)], 3).unwrap();
        let b = ENumber::state(3, 0).unwrap();
        let next = evolve_enumber(&b, &f).unwrap();
        assert_eq!(next.coeff(3), &int(7));
        assert_eq!(next.coeff(7), &int(3));
        let id = StepPermutation::identity(3).unwrap();
        assert_eq!(evolve_enumber(&b, &id).unwrap(), b);
        let bad = ENumber::unit(3, 0).unwrap().scale(&Scalar::new(1.into(), 2.into()));
        assert!(evolve_enumber(&bad, &f).is_err());
    }

    #[test]
    fn reconstructed_projectors_match_basis() {
        let b = ENumber::state(1, 0).unwrap();
        let ps = reconstruct_projectors_from_algebra(&b, &[1]).unwrap();
        assert_eq!(ps[&1].coeffs(), &[int(0), int(1)]);
    }
}
