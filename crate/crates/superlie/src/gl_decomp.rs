//! gl(k,l)-decomposition of the degree-n piece of the free Lie superalgebra
//! on the natural module V = V₀ ⊕ V₁ (dim V₀ = k, dim V₁ = l).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::{as_integer, divisors, factorial, mobius, q, qint, Q};
use crate::freelie::{graded_trace, Letter, OracleError, SuperAlphabet, DEFAULT_GUARD};
use crate::graded_series::{Degree, GradingSpec};
use crate::symfunc::{hook_schur, lr_coefficient, mn_character, Partition};

pub const MAX_DEGREE: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("weights {0} + {1} do not add up to {2}")]
    WeightMismatch(u32, u32, u32),
    #[error("{lambda} is not a ({k},{l})-hook partition")]
    NotHook { lambda: Partition, k: usize, l: usize },
    #[error("degree {0} is above the supported maximum {MAX_DEGREE}")]
    Guard(u32),
    #[error("non-integral multiplicity {0} for {1}")]
    NotIntegral(String, Partition),
    #[error("expected {0} eigenvalues, got {1}")]
    PointShape(usize, usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookDecomposition {
    pub n: u32,
    pub k: usize,
    pub l: usize,
    pub entries: BTreeMap<Partition, u64>,
}

fn chi_rect(lambda: &Partition, d: u32) -> i64 {
    if lambda.is_empty() {
        return 1;
    }
    mn_character(lambda, &Partition::rectangle(d, lambda.size() / d)).expect("weights agree")
}

/// Multiplicity of W_λ ⊗ W_μ (GL(k)×GL(l)) inside 𝔏_n.
pub fn a_coeff(lambda: &Partition, mu: &Partition, n: u32) -> Result<Q, DecompError> {
    let (a, b) = (lambda.size(), mu.size());
    if a + b != n {
        return Err(DecompError::WeightMismatch(a, b, n));
    }
    let mut total = Q::from_integer(0.into());
    for d in divisors(n as u64) {
        let d = d as u32;
        if a % d != 0 || b % d != 0 {
            continue;
        }
        let m = mobius(d as u64);
        if m == 0 {
            continue;
        }
        let multinom = factorial((n / d) as u64) / (factorial((a / d) as u64) * factorial((b / d) as u64));
        let sign = if ((d - 1) * (b / d)) % 2 == 0 { 1 } else { -1 };
        let chis = chi_rect(lambda, d) * chi_rect(mu, d);
        total += qint(&multinom) * q(m * sign * chis);
    }
    Ok(total / q(n as i64))
}

/// (1/n) Σ_{d|n} μ(d) χ_λ^{(d^{n/d})}, valid when l(λ) ≤ k.
pub fn closed_form(lambda: &Partition) -> Q {
    let n = lambda.size();
    let mut total = Q::from_integer(0.into());
    for d in divisors(n as u64) {
        total += q(mobius(d) * chi_rect(lambda, d as u32));
    }
    total / q(n as i64)
}

pub fn hook_partitions(k: usize, l: usize, n: u32) -> Vec<Partition> {
    Partition::all(n).into_iter().filter(|p| p.is_hook(k, l)).collect()
}

fn to_count(x: &Q, lambda: &Partition) -> Result<u64, DecompError> {
    as_integer(x)
        .and_then(|v| u64::try_from(v).ok())
        .ok_or_else(|| DecompError::NotIntegral(crate::arith::render(x), lambda.clone()))
}

/// All c_λ over H(k,l;n), in decreasing |λ₀|.
pub fn decompose(k: usize, l: usize, n: u32) -> Result<HookDecomposition, DecompError> {
    if n > MAX_DEGREE {
        return Err(DecompError::Guard(n));
    }
    let mut hooks = hook_partitions(k, l, n);
    hooks.sort_by_key(|p| std::cmp::Reverse(p.hook_split(k).0.size()));
    let mut entries: BTreeMap<Partition, u64> = BTreeMap::new();
    for lambda in &hooks {
        let (top, bottom) = lambda.hook_split(k);
        let mut c = a_coeff(&top, &bottom, n)?;
        let top_conj = top.conjugate();
        for (mu, &cm) in &entries {
            if cm == 0 || mu.hook_split(k).0.size() <= top.size() {
                continue;
            }
            let nlr = lr_coefficient(&mu.conjugate(), &top_conj, &bottom);
            c -= q((cm * nlr) as i64);
        }
        entries.insert(lambda.clone(), to_count(&c, lambda)?);
    }
    Ok(HookDecomposition { n, k, l, entries })
}

/// c_λ for a single hook partition.
pub fn c_multiplicity(lambda: &Partition, k: usize, l: usize) -> Result<u64, DecompError> {
    if !lambda.is_hook(k, l) {
        return Err(DecompError::NotHook { lambda: lambda.clone(), k, l });
    }
    if lambda.len() <= k {
        return to_count(&closed_form(lambda), lambda);
    }
    Ok(decompose(k, l, lambda.size())?.entries[lambda])
}

/// k even and l odd degree-1 letters with the given eigenvalues.
pub fn natural_alphabet(x: &[Q], y: &[Q]) -> SuperAlphabet {
    let spec = GradingSpec::super_z2(1);
    let mut letters = Vec::new();
    for (i, e) in x.iter().enumerate() {
        letters.push(Letter { name: format!("x{}", i + 1), degree: Degree::new(vec![1], vec![0]), eigenvalue: e.clone() });
    }
    for (i, e) in y.iter().enumerate() {
        letters.push(Letter { name: format!("y{}", i + 1), degree: Degree::new(vec![1], vec![1]), eigenvalue: e.clone() });
    }
    SuperAlphabet::new(&spec, letters).expect("degree-1 letters are valid")
}

/// Σ c_λ HS_λ(x,y) at a point.
pub fn character_value(dec: &HookDecomposition, x: &[Q], y: &[Q]) -> Q {
    dec.entries
        .iter()
        .filter(|(_, &c)| c > 0)
        .map(|(lam, &c)| hook_schur(lam, dec.k, dec.l).eval(x, y) * q(c as i64))
        .sum()
}

/// Plain trace tr(g|𝔏_n) from the brute-force oracle.
pub fn oracle_trace(n: u32, x: &[Q], y: &[Q]) -> Result<Q, DecompError> {
    let alphabet = natural_alphabet(x, y);
    let even = graded_trace(&alphabet, &Degree::new(vec![n], vec![0]), DEFAULT_GUARD)?;
    let odd = graded_trace(&alphabet, &Degree::new(vec![n], vec![1]), DEFAULT_GUARD)?;
    Ok(even - odd)
}

/// Checks tr(g|𝔏_n) = Σ c_λ HS_λ(x,y) at every point.
pub fn verify_trace_identity(k: usize, l: usize, n: u32, points: &[(Vec<Q>, Vec<Q>)]) -> Result<bool, DecompError> {
    let dec = decompose(k, l, n)?;
    for (x, y) in points {
        if x.len() != k || y.len() != l {
            return Err(DecompError::PointShape(k + l, x.len() + y.len()));
        }
        if character_value(&dec, x, y) != oracle_trace(n, x, y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn a_examples() {
        assert_eq!(a_coeff(&p(&[1]), &p(&[]), 1).unwrap(), q(1));
        assert_eq!(a_coeff(&p(&[1, 1]), &p(&[]), 2).unwrap(), q(1));
        assert_eq!(a_coeff(&p(&[]), &p(&[2]), 2).unwrap(), q(1));
        assert_eq!(a_coeff(&p(&[2]), &p(&[]), 2).unwrap(), q(0));
        assert!(a_coeff(&p(&[1]), &p(&[]), 2).is_err());
    }

    #[test]
    fn c_examples() {
        assert_eq!(c_multiplicity(&p(&[1, 1]), 2, 0).unwrap(), 1);
        assert_eq!(c_multiplicity(&p(&[2]), 1, 0).unwrap(), 0);
        assert_eq!(c_multiplicity(&p(&[1, 1]), 1, 1).unwrap(), 1);
        assert!(c_multiplicity(&p(&[2, 2]), 1, 1).is_err());
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(3, 0, 3).unwrap();
        let nonzero: Vec<(&Partition, &u64)> = d.entries.iter().filter(|(_, &c)| c > 0).collect();
        assert_eq!(nonzero, vec![(&p(&[2, 1]), &1)]);
        let d = decompose(1, 1, 2).unwrap();
        assert_eq!(d.entries.iter().filter(|(_, &c)| c > 0).collect::<Vec<_>>(), vec![(&p(&[1, 1]), &1)]);
        for (k, l) in [(1, 0), (2, 1), (3, 3)] {
            let d = decompose(k, l, 1).unwrap();
            assert_eq!(d.entries.len(), 1);
            assert_eq!(d.entries[&p(&[1])], 1);
        }
    }

    #[test]
    fn stability_in_k() {
        for n in 1..=6 {
            let base = decompose(n as usize, 0, n).unwrap();
            let bigger = decompose(n as usize + 2, 0, n).unwrap();
            assert_eq!(base.entries, bigger.entries);
        }
    }

    #[test]
    fn degree_one_trace() {
        assert!(verify_trace_identity(2, 1, 1, &[(vec![q(2), q(3)], vec![q(5)])]).unwrap());
    }
}
