//! Degrees in Γ×𝒜, the sign map ψ, and truncated formal series.
//!
//! Γ is ℕ^r and 𝒜 is a product of cyclic groups (modulus 0 means ℤ).
//! Series are truncated by total Γ-weight.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("parity vector has length {parity} but there are {moduli} group coordinates")]
    ParityLength { parity: usize, moduli: usize },
    #[error("coordinate {0} has odd modulus but parity -1")]
    OddModulusSign(usize),
    #[error("parity entries must be +1 or -1, got {0}")]
    BadParity(i8),
    #[error("degree has {got} gamma coordinates, expected {expected}")]
    GammaLength { got: usize, expected: usize },
    #[error("degree has {got} group coordinates, expected {expected}")]
    GroupLength { got: usize, expected: usize },
    #[error("residue {residue} out of range for modulus {modulus}")]
    Residue { residue: i64, modulus: u64 },
    #[error("degree has zero gamma part")]
    ZeroGamma,
    #[error("exp needs a series with zero constant term")]
    ExpConstant,
    #[error("log needs a series with constant term 1")]
    LogConstant,
    #[error("series over different gradings or bases")]
    Incompatible,
}

/// Shape of Γ×𝒜 together with ψ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradingSpec {
    pub gamma_rank: usize,
    pub group_moduli: Vec<u64>,
    pub parity: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree {
    pub gamma: Vec<u32>,
    pub acomp: Vec<i64>,
}

impl Degree {
    pub fn new(gamma: Vec<u32>, acomp: Vec<i64>) -> Self {
        Degree { gamma, acomp }
    }

    pub fn weight(&self) -> u32 {
        self.gamma.iter().sum()
    }

    pub fn is_zero_gamma(&self) -> bool {
        self.gamma.iter().all(|&g| g == 0)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gamma.iter().map(|x| x.to_string()).collect();
        write!(f, "({}", g.join(","))?;
        if !self.acomp.is_empty() {
            let a: Vec<String> = self.acomp.iter().map(|x| x.to_string()).collect();
            write!(f, ";{}", a.join(","))?;
        }
        write!(f, ")")
    }
}

impl GradingSpec {
    pub fn new(gamma_rank: usize, group_moduli: Vec<u64>, parity: Vec<i8>) -> Result<Self, GradingError> {
        if parity.len() != group_moduli.len() {
            return Err(GradingError::ParityLength { parity: parity.len(), moduli: group_moduli.len() });
        }
        for (i, (&m, &p)) in group_moduli.iter().zip(&parity).enumerate() {
            if p != 1 && p != -1 {
                return Err(GradingError::BadParity(p));
            }
            if p == -1 && m % 2 == 1 {
                return Err(GradingError::OddModulusSign(i));
            }
        }
        Ok(GradingSpec { gamma_rank, group_moduli, parity })
    }

    /// Γ = ℕ^r with trivial 𝒜.
    pub fn plain(gamma_rank: usize) -> Self {
        GradingSpec { gamma_rank, group_moduli: vec![], parity: vec![] }
    }

    /// Γ = ℕ^r with 𝒜 = ℤ₂ and odd generator.
    pub fn super_z2(gamma_rank: usize) -> Self {
        GradingSpec { gamma_rank, group_moduli: vec![2], parity: vec![-1] }
    }

    pub fn validate(&self, d: &Degree) -> Result<(), GradingError> {
        if d.gamma.len() != self.gamma_rank {
            return Err(GradingError::GammaLength { got: d.gamma.len(), expected: self.gamma_rank });
        }
        if d.acomp.len() != self.group_moduli.len() {
            return Err(GradingError::GroupLength { got: d.acomp.len(), expected: self.group_moduli.len() });
        }
        for (&a, &m) in d.acomp.iter().zip(&self.group_moduli) {
            if m > 0 && (a < 0 || a as u64 >= m) {
                return Err(GradingError::Residue { residue: a, modulus: m });
            }
        }
        Ok(())
    }

    pub fn zero(&self) -> Degree {
        Degree { gamma: vec![0; self.gamma_rank], acomp: vec![0; self.group_moduli.len()] }
    }

    fn reduce(&self, i: usize, a: i64) -> i64 {
        let m = self.group_moduli[i];
        if m == 0 {
            a
        } else {
            a.mod_floor(&(m as i64))
        }
    }

    pub fn add(&self, x: &Degree, y: &Degree) -> Degree {
        Degree {
            gamma: x.gamma.iter().zip(&y.gamma).map(|(a, b)| a + b).collect(),
            acomp: (0..self.group_moduli.len()).map(|i| self.reduce(i, x.acomp[i] + y.acomp[i])).collect(),
        }
    }

    pub fn scale(&self, k: u32, x: &Degree) -> Degree {
        Degree {
            gamma: x.gamma.iter().map(|a| a * k).collect(),
            acomp: (0..self.group_moduli.len()).map(|i| self.reduce(i, x.acomp[i] * k as i64)).collect(),
        }
    }

    /// `x - y` when the Γ-part stays in ℕ^r.
    pub fn sub(&self, x: &Degree, y: &Degree) -> Option<Degree> {
        let mut gamma = Vec::with_capacity(self.gamma_rank);
        for (a, b) in x.gamma.iter().zip(&y.gamma) {
            gamma.push(a.checked_sub(*b)?);
        }
        let acomp = (0..self.group_moduli.len()).map(|i| self.reduce(i, x.acomp[i] - y.acomp[i])).collect();
        Some(Degree { gamma, acomp })
    }
}

/// ψ(a) for the group part of `d`.
pub fn sign(spec: &GradingSpec, d: &Degree) -> Result<i32, GradingError> {
    spec.validate(d)?;
    Ok(sign_unchecked(spec, d))
}

pub(crate) fn sign_unchecked(spec: &GradingSpec, d: &Degree) -> i32 {
    let mut s = 1;
    for (&a, &p) in d.acomp.iter().zip(&spec.parity) {
        if p == -1 && a.rem_euclid(2) == 1 {
            s = -s;
        }
    }
    s
}

/// All (k, τb) with k·τb = d, including every torsion solution.
pub fn divisor_pairs(spec: &GradingSpec, d: &Degree) -> Result<Vec<(u32, Degree)>, GradingError> {
    spec.validate(d)?;
    if d.is_zero_gamma() {
        return Err(GradingError::ZeroGamma);
    }
    let g = d.gamma.iter().fold(0u32, |acc, &x| acc.gcd(&x));
    let mut out = Vec::new();
    for k in 1..=g {
        if g % k != 0 {
            continue;
        }
        let gamma: Vec<u32> = d.gamma.iter().map(|x| x / k).collect();
        let mut choices: Vec<Vec<i64>> = Vec::new();
        for (i, &a) in d.acomp.iter().enumerate() {
            let m = spec.group_moduli[i];
            let sols: Vec<i64> = if m == 0 {
                if a % k as i64 == 0 {
                    vec![a / k as i64]
                } else {
                    vec![]
                }
            } else {
                (0..m as i64).filter(|b| (b * k as i64 - a).rem_euclid(m as i64) == 0).collect()
            };
            choices.push(sols);
        }
        for acomp in cartesian(&choices) {
            out.push((k, Degree { gamma: gamma.clone(), acomp }));
        }
    }
    Ok(out)
}

fn cartesian(choices: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut acc: Vec<Vec<i64>> = vec![vec![]];
    for c in choices {
        let mut next = Vec::new();
        for prefix in &acc {
            for &x in c {
                let mut p = prefix.clone();
                p.push(x);
                next.push(p);
            }
        }
        acc = next;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// e^{(α,a)}
    Plain,
    /// E^{(α,a)} = ψ(a) e^{(α,a)}
    Signed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Exp,
    Log,
}

/// A truncated element of the completed group algebra of Γ×𝒜.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    pub spec: GradingSpec,
    pub bound: u32,
    pub basis: Basis,
    terms: BTreeMap<Degree, Q>,
}

impl FormalSeries {
    pub fn zero(spec: &GradingSpec, bound: u32, basis: Basis) -> Self {
        FormalSeries { spec: spec.clone(), bound, basis, terms: BTreeMap::new() }
    }

    pub fn one(spec: &GradingSpec, bound: u32, basis: Basis) -> Self {
        let mut s = Self::zero(spec, bound, basis);
        s.terms.insert(spec.zero(), Q::one());
        s
    }

    pub fn monomial(spec: &GradingSpec, bound: u32, basis: Basis, d: Degree, c: Q) -> Self {
        let mut s = Self::zero(spec, bound, basis);
        s.add_term(d, c);
        s
    }

    /// Adds `c` at `d`; silently drops terms above the bound.
    pub fn add_term(&mut self, d: Degree, c: Q) {
        if d.weight() > self.bound || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(d.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&d);
        }
    }

    pub fn coeff(&self, d: &Degree) -> Q {
        self.terms.get(d).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> &BTreeMap<Degree, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn constant(&self) -> Q {
        self.coeff(&self.spec.zero())
    }

    fn check(&self, other: &Self) -> Result<(), GradingError> {
        if self.spec != other.spec || self.basis != other.basis {
            Err(GradingError::Incompatible)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GradingError> {
        self.check(other)?;
        let bound = self.bound.min(other.bound);
        let mut out = Self::zero(&self.spec, bound, self.basis);
        for (d, c) in self.terms.iter().chain(other.terms.iter()) {
            if d.weight() <= bound {
                *out.terms.entry(d.clone()).or_insert_with(Q::zero) += c;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = self.clone();
        if c.is_zero() {
            out.terms.clear();
            return out;
        }
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GradingError> {
        self.add(&other.scale(&q(-1)))
    }

    /// Product truncated to the common bound.
    pub fn mul(&self, other: &Self) -> Result<Self, GradingError> {
        self.check(other)?;
        let bound = self.bound.min(other.bound);
        let mut acc: BTreeMap<Degree, Q> = BTreeMap::new();
        for (d1, c1) in &self.terms {
            let w1 = d1.weight();
            if w1 > bound {
                continue;
            }
            for (d2, c2) in &other.terms {
                if w1 + d2.weight() > bound {
                    continue;
                }
                *acc.entry(self.spec.add(d1, d2)).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(FormalSeries { spec: self.spec.clone(), bound, basis: self.basis, terms: acc })
    }

    /// Multiplies every coefficient at (α,a) by ψ(a) and flips the basis tag.
    pub fn basis_convert(&self) -> Self {
        let mut out = self.clone();
        for (d, v) in out.terms.iter_mut() {
            if sign_unchecked(&self.spec, d) == -1 {
                *v = -v.clone();
            }
        }
        out.basis = match self.basis {
            Basis::Plain => Basis::Signed,
            Basis::Signed => Basis::Plain,
        };
        out
    }

    fn has_zero_gamma_noise(&self) -> bool {
        let z = self.spec.zero();
        self.terms.keys().any(|d| d.is_zero_gamma() && *d != z)
    }

    pub fn exp(&self) -> Result<Self, GradingError> {
        if !self.constant().is_zero() || self.has_zero_gamma_noise() {
            return Err(GradingError::ExpConstant);
        }
        let mut result = Self::one(&self.spec, self.bound, self.basis);
        let mut power = Self::one(&self.spec, self.bound, self.basis);
        for n in 1..=self.bound {
            power = power.mul(self)?.scale(&Q::new(1.into(), (n as i64).into()));
            if power.is_zero() {
                break;
            }
            result = result.add(&power)?;
        }
        Ok(result)
    }

    pub fn log(&self) -> Result<Self, GradingError> {
        if !self.constant().is_one() || self.has_zero_gamma_noise() {
            return Err(GradingError::LogConstant);
        }
        let u = self.sub(&Self::one(&self.spec, self.bound, self.basis))?;
        let mut result = Self::zero(&self.spec, self.bound, self.basis);
        let mut power = Self::one(&self.spec, self.bound, self.basis);
        for n in 1..=self.bound {
            power = power.mul(&u)?;
            if power.is_zero() {
                break;
            }
            let c = Q::new(if n % 2 == 1 { 1.into() } else { (-1).into() }, (n as i64).into());
            result = result.add(&power.scale(&c))?;
        }
        Ok(result)
    }

    /// The inverse of a series with constant term 1.
    pub fn inverse(&self) -> Result<Self, GradingError> {
        let lg = self.log()?;
        lg.scale(&q(-1)).exp()
    }

    /// Lowest-weight degree where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Degree, Q, Q)> {
        let bound = self.bound.min(other.bound);
        let mut keys: Vec<&Degree> = self.terms.keys().chain(other.terms.keys()).filter(|d| d.weight() <= bound).collect();
        keys.sort_by(|a, b| a.weight().cmp(&b.weight()).then(a.cmp(b)));
        keys.dedup();
        for d in keys {
            let (a, b) = (self.coeff(d), other.coeff(d));
            if a != b {
                return Some((d.clone(), a, b));
            }
        }
        None
    }
}

pub fn series_exp_log(s: &FormalSeries, direction: Direction) -> Result<FormalSeries, GradingError> {
    match direction {
        Direction::Exp => s.exp(),
        Direction::Log => s.log(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d1(n: u32) -> Degree {
        Degree::new(vec![n], vec![])
    }

    #[test]
    fn sign_examples() {
        let plain = GradingSpec::new(1, vec![3], vec![1]).unwrap();
        assert_eq!(sign(&plain, &Degree::new(vec![1], vec![2])).unwrap(), 1);
        let z2 = GradingSpec::super_z2(1);
        assert_eq!(sign(&z2, &Degree::new(vec![1], vec![1])).unwrap(), -1);
        let two = GradingSpec::new(1, vec![2, 2], vec![-1, -1]).unwrap();
        assert_eq!(sign(&two, &Degree::new(vec![1], vec![1, 1])).unwrap(), 1);
    }

    #[test]
    fn rejects_odd_modulus_with_sign() {
        assert_eq!(GradingSpec::new(1, vec![3], vec![-1]), Err(GradingError::OddModulusSign(0)));
        assert!(sign(&GradingSpec::super_z2(1), &Degree::new(vec![1, 2], vec![0])).is_err());
    }

    #[test]
    fn convert_examples() {
        let z2 = GradingSpec::super_z2(1);
        let odd = Degree::new(vec![1], vec![1]);
        let s = FormalSeries::monomial(&z2, 4, Basis::Signed, odd.clone(), q(3));
        let t = s.basis_convert();
        assert_eq!(t.basis, Basis::Plain);
        assert_eq!(t.coeff(&odd), q(-3));
        assert_eq!(t.basis_convert(), s);
        let even = Degree::new(vec![2], vec![0]);
        let e = FormalSeries::monomial(&z2, 4, Basis::Signed, even.clone(), q(5));
        assert_eq!(e.basis_convert().coeff(&even), q(5));
    }

    #[test]
    fn exp_log_examples() {
        let spec = GradingSpec::plain(1);
        let zero = FormalSeries::zero(&spec, 6, Basis::Signed);
        assert_eq!(zero.exp().unwrap(), FormalSeries::one(&spec, 6, Basis::Signed));

        let one = FormalSeries::one(&spec, 6, Basis::Signed);
        let x = FormalSeries::monomial(&spec, 6, Basis::Signed, d1(2), q(1));
        let lg = one.sub(&x).unwrap().log().unwrap();
        for k in 1..=3u32 {
            assert_eq!(lg.coeff(&d1(2 * k)), Q::new((-1).into(), (k as i64).into()));
        }
        assert!(lg.coeff(&d1(1)).is_zero());

        let five = one.add(&x.scale(&q(5))).unwrap();
        assert_eq!(five.log().unwrap().exp().unwrap(), five);
        assert_eq!(one.exp(), Err(GradingError::ExpConstant));
        assert_eq!(x.log(), Err(GradingError::LogConstant));
    }

    #[test]
    fn divisor_pair_examples() {
        let spec = GradingSpec::plain(1);
        let ks: Vec<u32> = divisor_pairs(&spec, &d1(6)).unwrap().into_iter().map(|p| p.0).collect();
        assert_eq!(ks, vec![1, 2, 3, 6]);
        let spec2 = GradingSpec::plain(2);
        let ks: Vec<u32> = divisor_pairs(&spec2, &Degree::new(vec![2, 4], vec![])).unwrap().into_iter().map(|p| p.0).collect();
        assert_eq!(ks, vec![1, 2]);
        let z2 = GradingSpec::super_z2(1);
        let pairs = divisor_pairs(&z2, &Degree::new(vec![2], vec![1])).unwrap();
        assert_eq!(pairs, vec![(1, Degree::new(vec![2], vec![1]))]);
        // torsion: both residues halve an even residue
        let pairs = divisor_pairs(&z2, &Degree::new(vec![2], vec![0])).unwrap();
        assert_eq!(pairs.len(), 3);
    }
}
