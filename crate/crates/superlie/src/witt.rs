//! Witt partition functions and the Möbius-inverted supertrace formula.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{divisors, factorial, mobius, pow_q, qint, Q};
use crate::graded_series::{divisor_pairs, sign_unchecked, Basis, Degree, FormalSeries, GradingError, GradingSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error("no trace recorded for power {power} at degree {degree}")]
    MissingPower { power: u32, degree: Degree },
    #[error("partition does not sum to its target")]
    BadPartition,
}

/// str(gᵏ|V_d) for the degrees in `support`.
///
/// Each degree carries a list of values for powers 1, 2, ..; with a period
/// the power is reduced first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerTraceTable {
    pub spec: GradingSpec,
    pub period: Option<u32>,
    values: BTreeMap<Degree, Vec<Q>>,
}

impl PowerTraceTable {
    pub fn new(spec: &GradingSpec, period: Option<u32>) -> Self {
        PowerTraceTable { spec: spec.clone(), period, values: BTreeMap::new() }
    }

    /// Sets the power list for `d`, overwriting. Powers start at 1.
    pub fn insert(&mut self, d: Degree, powers: Vec<Q>) -> Result<(), GradingError> {
        self.spec.validate(&d)?;
        if d.is_zero_gamma() {
            return Err(GradingError::ZeroGamma);
        }
        if powers.iter().all(|v| v.is_zero()) && self.period.is_some() {
            self.values.remove(&d);
            return Ok(());
        }
        self.values.insert(d, powers);
        Ok(())
    }

    /// Trivial action: str(gᵏ|V_d) = sdim V_d for every k.
    pub fn identity(spec: &GradingSpec, sdims: &[(Degree, Q)]) -> Result<Self, GradingError> {
        let mut t = PowerTraceTable::new(spec, Some(1));
        for (d, v) in sdims {
            let prev = t.values.get(d).map(|p| p[0].clone()).unwrap_or_else(Q::zero);
            t.insert(d.clone(), vec![prev + v])?;
        }
        Ok(t)
    }

    /// Diagonal action on generators `(degree, eigenvalue)`, powers up to `depth`.
    pub fn diagonal(spec: &GradingSpec, letters: &[(Degree, Q)], depth: u32) -> Result<Self, GradingError> {
        let mut sums: BTreeMap<Degree, Vec<Q>> = BTreeMap::new();
        for (d, ev) in letters {
            spec.validate(d)?;
            let psi = Q::from_integer(sign_unchecked(spec, d).into());
            let entry = sums.entry(d.clone()).or_insert_with(|| vec![Q::zero(); depth as usize]);
            for k in 1..=depth {
                entry[(k - 1) as usize] += &psi * pow_q(ev, k as u64);
            }
        }
        let mut t = PowerTraceTable::new(spec, None);
        for (d, v) in sums {
            t.insert(d, v)?;
        }
        Ok(t)
    }

    pub fn support(&self) -> Vec<Degree> {
        self.values.keys().cloned().collect()
    }

    pub fn get(&self, power: u32, d: &Degree) -> Result<Q, TraceError> {
        let Some(list) = self.values.get(d) else {
            return Ok(Q::zero());
        };
        let k = match self.period {
            Some(p) => (power - 1) % p + 1,
            None => power,
        };
        list.get((k - 1) as usize)
            .cloned()
            .ok_or_else(|| TraceError::MissingPower { power, degree: d.clone() })
    }

    /// The table of gᵏ.
    pub fn power(&self, k: u32) -> PowerTraceTable {
        let mut out = PowerTraceTable::new(&self.spec, None);
        let depth = |len: usize| -> usize {
            match self.period {
                Some(p) => p as usize,
                None => len / k as usize,
            }
        };
        for (d, list) in &self.values {
            let n = depth(list.len());
            let v: Vec<Q> = (1..=n as u32).filter_map(|j| self.get(j * k, d).ok()).collect();
            out.values.insert(d.clone(), v);
        }
        if let Some(p) = self.period {
            out.period = Some(p);
        }
        out
    }

    /// Same data with every parity forced even and values turned into plain traces.
    pub fn plain(&self) -> PowerTraceTable {
        let spec = GradingSpec { parity: vec![1; self.spec.parity.len()], ..self.spec.clone() };
        let mut out = PowerTraceTable::new(&spec, self.period);
        for (d, list) in &self.values {
            let s = sign_unchecked(&self.spec, d);
            let v = list.iter().map(|x| if s == -1 { -x.clone() } else { x.clone() }).collect();
            out.values.insert(d.clone(), v);
        }
        out
    }
}

/// A multiset of support degrees, kept in support order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreePartition {
    pub parts: Vec<(Degree, u32)>,
}

impl DegreePartition {
    pub fn new(spec: &GradingSpec, target: &Degree, parts: Vec<(Degree, u32)>) -> Result<Self, TraceError> {
        let mut sum = spec.zero();
        for (d, m) in &parts {
            sum = spec.add(&sum, &spec.scale(*m, d));
        }
        if &sum != target {
            return Err(TraceError::BadPartition);
        }
        Ok(DegreePartition { parts })
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().map(|p| p.1).sum()
    }
}

/// T(target): every way of writing `target` as a sum of support degrees.
pub fn enumerate_partitions(spec: &GradingSpec, target: &Degree, support: &[Degree]) -> Result<Vec<DegreePartition>, TraceError> {
    spec.validate(target)?;
    if target.is_zero_gamma() {
        return Err(GradingError::ZeroGamma.into());
    }
    for d in support {
        spec.validate(d)?;
        if d.is_zero_gamma() {
            return Err(GradingError::ZeroGamma.into());
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    dfs(spec, support, 0, &target.gamma, &spec.zero().acomp, target, &mut current, &mut out);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    spec: &GradingSpec,
    support: &[Degree],
    idx: usize,
    remaining: &[u32],
    acc_a: &[i64],
    target: &Degree,
    current: &mut Vec<(Degree, u32)>,
    out: &mut Vec<DegreePartition>,
) {
    if remaining.iter().all(|&r| r == 0) {
        let reached = Degree { gamma: target.gamma.clone(), acomp: acc_a.to_vec() };
        if reached == *target {
            out.push(DegreePartition { parts: current.clone() });
        }
        return;
    }
    if idx == support.len() {
        return;
    }
    let d = &support[idx];
    let max_mult = d
        .gamma
        .iter()
        .zip(remaining)
        .filter(|(g, _)| **g > 0)
        .map(|(g, r)| r / g)
        .min()
        .unwrap_or(0);
    for m in (1..=max_mult).rev().chain(std::iter::once(0)) {
        if m == 0 {
            dfs(spec, support, idx + 1, remaining, acc_a, target, current, out);
            continue;
        }
        let rem: Vec<u32> = remaining.iter().zip(&d.gamma).map(|(r, g)| r - g * m).collect();
        let step = spec.scale(m, d);
        let a = spec.add(&Degree { gamma: vec![0; spec.gamma_rank], acomp: acc_a.to_vec() }, &step).acomp;
        current.push((d.clone(), m));
        dfs(spec, support, idx + 1, &rem, &a, target, current, out);
        current.pop();
    }
}

/// W_g(target) = Σ_s ((|s|−1)!/s!) ∏ str(g|·)^{s}.
pub fn witt_partition_function(g: &PowerTraceTable, target: &Degree) -> Result<Q, TraceError> {
    let support = g.support();
    let parts = enumerate_partitions(&g.spec, target, &support)?;
    let mut total = Q::zero();
    for s in parts {
        let mut term = Q::new(factorial((s.size() - 1) as u64), num_bigint::BigInt::one());
        for (d, m) in &s.parts {
            let v = g.get(1, d)?;
            term *= pow_q(&v, *m as u64);
            term /= qint(&factorial(*m as u64));
            if term.is_zero() {
                break;
            }
        }
        total += term;
    }
    Ok(total)
}

/// str(g|𝔏_target) by Möbius inversion over all (d, τb) with d·τb = target.
pub fn supertrace(g: &PowerTraceTable, target: &Degree) -> Result<Q, TraceError> {
    let mut total = Q::zero();
    for (d, tb) in divisor_pairs(&g.spec, target)? {
        let mu = mobius(d as u64);
        if mu == 0 {
            continue;
        }
        let w = witt_partition_function(&g.power(d), &tb)?;
        total += w * Q::new(mu.into(), (d as i64).into());
    }
    Ok(total)
}

/// Degrees of weight ≤ bound reachable as sums of support degrees.
pub fn reachable_degrees(spec: &GradingSpec, support: &[Degree], bound: u32) -> Vec<Degree> {
    let mut seen: BTreeSet<Degree> = BTreeSet::new();
    let mut frontier: Vec<Degree> = support.iter().filter(|d| d.weight() <= bound).cloned().collect();
    while let Some(d) = frontier.pop() {
        if !seen.insert(d.clone()) {
            continue;
        }
        for s in support {
            let n = spec.add(&d, s);
            if n.weight() <= bound && !seen.contains(&n) {
                frontier.push(n);
            }
        }
    }
    let mut v: Vec<Degree> = seen.into_iter().collect();
    v.sort_by(|a, b| a.weight().cmp(&b.weight()).then(a.cmp(b)));
    v
}

/// str(gᵏ|𝔏_d) for every reachable d and every k with k·|d| ≤ bound.
pub fn lie_table(h: &PowerTraceTable, bound: u32) -> Result<PowerTraceTable, TraceError> {
    let degrees = reachable_degrees(&h.spec, &h.support(), bound);
    let mut out = PowerTraceTable::new(&h.spec, None);
    let max_k = bound.max(1);
    let powers: Vec<PowerTraceTable> = (1..=max_k).map(|k| h.power(k)).collect();
    for d in degrees {
        let w = d.weight();
        let mut list = Vec::new();
        for k in 1..=bound / w {
            list.push(supertrace(&powers[(k - 1) as usize], &d)?);
        }
        out.values.insert(d, list);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenominatorReport {
    pub holds: bool,
    /// Lowest-weight mismatch as (degree, product side, sum side).
    pub discrepancy: Option<(Degree, Q, Q)>,
}

/// ∏ exp(−Σ_k (1/k) str(gᵏ|𝔏_d) E^{kd}) to the bound, in the E-basis.
pub fn product_side(lie: &PowerTraceTable, bound: u32) -> Result<FormalSeries, TraceError> {
    let spec = &lie.spec;
    let mut log = FormalSeries::zero(spec, bound, Basis::Signed);
    for d in lie.support() {
        let w = d.weight();
        if w > bound {
            continue;
        }
        for k in 1..=bound / w {
            let v = lie.get(k, &d)?;
            log.add_term(spec.scale(k, &d), -v / Q::from_integer((k as i64).into()));
        }
    }
    Ok(log.exp()?)
}

/// Compares both sides of the generalized denominator identity up to `bound`.
pub fn denominator_check(lie: &PowerTraceTable, h: &PowerTraceTable, bound: u32) -> Result<DenominatorReport, TraceError> {
    let lhs = product_side(lie, bound)?;
    let mut rhs = FormalSeries::one(&h.spec, bound, Basis::Signed);
    for d in h.support() {
        rhs.add_term(d.clone(), -h.get(1, &d)?);
    }
    let discrepancy = lhs.first_difference(&rhs);
    Ok(DenominatorReport { holds: discrepancy.is_none(), discrepancy })
}

/// Rebuilds str(g|𝔏_target) from plain free Lie traces: ψ(a)·tr(g|L) + Σ tr(g²|L_{(β,b)}) over odd halves.
pub fn super_vs_plain(v: &PowerTraceTable, target: &Degree) -> Result<Q, TraceError> {
    let spec = &v.spec;
    let plain = v.plain();
    let psi = sign_unchecked(spec, target);
    let mut total = supertrace(&plain, target)? * Q::from_integer(psi.into());
    let squared = plain.power(2);
    for (k, half) in divisor_pairs(spec, target)? {
        if k == 2 && sign_unchecked(spec, &half) == -1 {
            total += supertrace(&squared, &half)?;
        }
    }
    Ok(total)
}

/// (1/n) Σ_{d|n} μ(d) s_d^{n/d} where s_d = str(gᵈ|V) and V sits in degree 1.
pub fn single_degree_closed_form(power_traces: &[Q], n: u32) -> Result<Q, TraceError> {
    let mut total = Q::zero();
    for d in divisors(n as u64) {
        let m = mobius(d);
        if m == 0 {
            continue;
        }
        let s = power_traces.get(d as usize - 1).ok_or_else(|| TraceError::MissingPower {
            power: d as u32,
            degree: Degree::new(vec![1], vec![]),
        })?;
        total += pow_q(s, n as u64 / d) * Q::from_integer(m.into());
    }
    Ok(total / Q::from_integer((n as i64).into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qfrac};

    fn d(n: u32) -> Degree {
        Degree::new(vec![n], vec![])
    }

    #[test]
    fn partition_examples() {
        let spec = GradingSpec::plain(1);
        let p = enumerate_partitions(&spec, &d(3), &[d(1)]).unwrap();
        assert_eq!(p, vec![DegreePartition { parts: vec![(d(1), 3)] }]);
        let p = enumerate_partitions(&spec, &d(4), &[d(1), d(2)]).unwrap();
        assert_eq!(p.len(), 3);

        let spec2 = GradingSpec::plain(2);
        let support: Vec<Degree> = (1..=3).flat_map(|i| (1..=3).map(move |j| Degree::new(vec![i, j], vec![]))).collect();
        let p = enumerate_partitions(&spec2, &Degree::new(vec![2, 2], vec![]), &support).unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn witt_examples() {
        let spec = GradingSpec::plain(1);
        let t = PowerTraceTable::identity(&spec, &[(d(1), q(7))]).unwrap();
        assert_eq!(witt_partition_function(&t, &d(4)).unwrap(), qfrac(7 * 7 * 7 * 7, 4));
        let t = PowerTraceTable::identity(&spec, &[(d(1), q(2)), (d(2), q(1))]).unwrap();
        assert_eq!(witt_partition_function(&t, &d(2)).unwrap(), q(3));
    }

    #[test]
    fn two_even_generators_weight_six() {
        let spec = GradingSpec::plain(1);
        let t = PowerTraceTable::identity(&spec, &[(d(1), q(2))]).unwrap();
        assert_eq!(supertrace(&t, &d(6)).unwrap(), q(9));
        assert_eq!(supertrace(&t, &d(1)).unwrap(), q(2));
    }

    #[test]
    fn balanced_super_alphabet_vanishes() {
        // one even and one odd generator with trivial action
        let spec = GradingSpec::super_z2(1);
        let t = PowerTraceTable::identity(&spec, &[(Degree::new(vec![1], vec![0]), q(1)), (Degree::new(vec![1], vec![1]), q(-1))]).unwrap();
        for n in 2..=7 {
            let total: Q = (0..2).map(|a| supertrace(&t, &Degree::new(vec![n], vec![a])).unwrap()).sum();
            assert_eq!(total, q(0), "n = {n}");
        }
    }

    #[test]
    fn denominator_round_trip_and_detection() {
        let spec = GradingSpec::plain(1);
        let h = PowerTraceTable::identity(&spec, &[(d(1), q(2))]).unwrap();
        let lie = lie_table(&h, 6).unwrap();
        assert!(denominator_check(&lie, &h, 6).unwrap().holds);
        let mut bad = lie.clone();
        let mut v = bad.values.get(&d(3)).unwrap().clone();
        v[0] += q(1);
        bad.values.insert(d(3), v);
        let rep = denominator_check(&bad, &h, 6).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.discrepancy.unwrap().0, d(3));
    }

    #[test]
    fn odd_square_is_nonzero() {
        let spec = GradingSpec::super_z2(1);
        let v = PowerTraceTable::identity(&spec, &[(Degree::new(vec![1], vec![1]), q(-1))]).unwrap();
        let target = Degree::new(vec![2], vec![0]);
        assert_eq!(super_vs_plain(&v, &target).unwrap(), q(1));
        assert_eq!(supertrace(&v, &target).unwrap(), q(1));
    }

    #[test]
    fn missing_power_is_reported() {
        let spec = GradingSpec::plain(1);
        let t = PowerTraceTable::diagonal(&spec, &[(d(1), q(3))], 1).unwrap();
        assert!(matches!(supertrace(&t, &d(2)), Err(TraceError::MissingPower { .. })));
    }
}
