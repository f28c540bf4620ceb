//! Partitions, symmetric-group characters, Schur and hook Schur polynomials.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{pow_q, q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("parts {0:?} are not weakly decreasing")]
    NotDecreasing(Vec<u32>),
    #[error("weights differ: {0} vs {1}")]
    WeightMismatch(u32, u32),
    #[error("{inner} is not contained in {outer}")]
    NotContained { inner: Partition, outer: Partition },
}

/// Weakly decreasing positive parts; trailing zeros are stripped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", p.join(","))
    }
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, SymError> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(SymError::NotDecreasing(parts));
        }
        Ok(Partition(parts))
    }

    /// Sorts arbitrary parts.
    pub fn from_parts(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(vec![])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// λ_i with 1-based i; zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return u32::MAX;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.0.first().copied().unwrap_or(0);
        Partition((1..=m).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    pub fn contains(&self, inner: &Partition) -> bool {
        inner.len() <= self.len() && inner.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Dominance order, for equal weights.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let (mut a, mut b) = (0, 0);
        for i in 1..=self.len().max(other.len()) {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return false;
            }
        }
        true
    }

    /// λ_{k+1} ≤ l.
    pub fn is_hook(&self, k: usize, l: usize) -> bool {
        self.part(k + 1) as usize <= l
    }

    /// First k rows and the conjugate of the rest.
    pub fn hook_split(&self, k: usize) -> (Partition, Partition) {
        let top = Partition(self.0.iter().take(k).cloned().collect());
        let rest = Partition(self.0.iter().skip(k).cloned().collect());
        (top, rest.conjugate())
    }

    /// All partitions of n, in decreasing lexicographic order.
    pub fn all(n: u32) -> Vec<Partition> {
        fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                go(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Partitions contained in self.
    pub fn subpartitions(&self) -> Vec<Partition> {
        fn go(outer: &[u32], i: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            out.push(Partition::from_parts(cur.clone()));
            if i == outer.len() {
                return;
            }
            for p in 1..=outer[i].min(max) {
                cur.push(p);
                go(outer, i + 1, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(&self.0, 0, u32::MAX, &mut Vec::new(), &mut out);
        out
    }

    /// Centralizer size z_ρ = ∏ i^{m_i} m_i!.
    pub fn z(&self) -> num_bigint::BigInt {
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for &p in &self.0 {
            *counts.entry(p).or_default() += 1;
        }
        let mut z = num_bigint::BigInt::one();
        for (p, m) in counts {
            z *= num_traits::pow::pow(num_bigint::BigInt::from(p), m as usize);
            z *= crate::arith::factorial(m);
        }
        z
    }

    /// (dᵐ) as a partition.
    pub fn rectangle(d: u32, m: u32) -> Partition {
        Partition(vec![d; m as usize])
    }
}

/// χ_λ^ρ by repeatedly stripping rim hooks of size ρ₁, ρ₂, …
pub fn mn_character(lambda: &Partition, rho: &Partition) -> Result<i64, SymError> {
    if lambda.size() != rho.size() {
        return Err(SymError::WeightMismatch(lambda.size(), rho.size()));
    }
    let n = lambda.len();
    let beta: Vec<i64> = (0..n).map(|i| lambda.0[i] as i64 + (n - 1 - i) as i64).collect();
    Ok(mn_beta(&beta, rho.parts()))
}

fn mn_beta(beta: &[i64], rho: &[u32]) -> i64 {
    let Some((&r, rest)) = rho.split_first() else {
        return 1;
    };
    let r = r as i64;
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        let nb = b - r;
        if nb < 0 || beta.contains(&nb) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > nb && x < b).count();
        let mut next = beta.to_vec();
        next[i] = nb;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * mn_beta(&next, rest);
    }
    total
}

/// Polynomial in x₁..x_k, y₁..y_l with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultivarPolynomial {
    pub nx: usize,
    pub ny: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl MultivarPolynomial {
    pub fn zero(nx: usize, ny: usize) -> Self {
        MultivarPolynomial { nx, ny, terms: BTreeMap::new() }
    }

    pub fn one(nx: usize, ny: usize) -> Self {
        let mut p = Self::zero(nx, ny);
        p.terms.insert(vec![0; nx + ny], Q::one());
        p
    }

    pub fn monomial(nx: usize, ny: usize, exps: Vec<u32>, c: Q) -> Self {
        let mut p = Self::zero(nx, ny);
        p.add_term(exps, c);
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Q) {
        assert_eq!(exps.len(), self.nx + self.ny);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exps.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Q> {
        &self.terms
    }

    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.nx, self.ny);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!((self.nx, self.ny), (o.nx, o.ny));
        let mut out = Self::zero(self.nx, self.ny);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *out.terms.entry(e).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn eval(&self, x: &[Q], y: &[Q]) -> Q {
        assert_eq!((x.len(), y.len()), (self.nx, self.ny));
        let vals: Vec<&Q> = x.iter().chain(y).collect();
        let mut total = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in vals.iter().zip(e) {
                if k > 0 {
                    t *= pow_q(v, k as u64);
                }
            }
            total += t;
        }
        total
    }

    /// Places an x-only polynomial in the x block of a two-block ring.
    fn embed_x(&self, ny: usize) -> Self {
        let mut out = Self::zero(self.nx, ny);
        for (e, c) in &self.terms {
            let mut v = e.clone();
            v.extend(std::iter::repeat(0).take(ny));
            out.terms.insert(v, c.clone());
        }
        out
    }

    /// Places a polynomial in nvars into the y block.
    fn embed_y(&self, nx: usize) -> Self {
        let mut out = Self::zero(nx, self.nx);
        for (e, c) in &self.terms {
            let mut v = vec![0; nx];
            v.extend_from_slice(e);
            out.terms.insert(v, c.clone());
        }
        out
    }

    /// Swaps two variables of the combined list.
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        let mut out = Self::zero(self.nx, self.ny);
        for (e, c) in &self.terms {
            let mut v = e.clone();
            v.swap(i, j);
            out.terms.insert(v, c.clone());
        }
        out
    }
}

/// Semistandard fillings of λ/μ with entries 1..=nvars, as content vectors.
fn skew_tableau_contents(lambda: &Partition, mu: &Partition, nvars: usize) -> Vec<Vec<u32>> {
    let rows = lambda.len();
    let cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|r| (mu.part(r + 1) as usize..lambda.part(r + 1) as usize).map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<u32>> = (0..rows).map(|r| vec![0; lambda.part(r + 1) as usize]).collect();
    let mut out = Vec::new();
    fn go(
        idx: usize,
        cells: &[(usize, usize)],
        mu: &Partition,
        grid: &mut Vec<Vec<u32>>,
        nvars: usize,
        content: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if idx == cells.len() {
            out.push(content.clone());
            return;
        }
        let (r, c) = cells[idx];
        let mut lo = 1;
        if c > mu.part(r + 1) as usize {
            lo = lo.max(grid[r][c - 1]);
        }
        if r > 0 && c >= mu.part(r) as usize {
            lo = lo.max(grid[r - 1][c] + 1);
        }
        for v in lo..=nvars as u32 {
            grid[r][c] = v;
            content[(v - 1) as usize] += 1;
            go(idx + 1, cells, mu, grid, nvars, content, out);
            content[(v - 1) as usize] -= 1;
        }
        grid[r][c] = 0;
    }
    let mut content = vec![0; nvars];
    go(0, &cells, mu, &mut grid, nvars, &mut content, &mut out);
    out
}

/// S_λ(x₁..x_n) from semistandard tableaux.
pub fn schur_poly(lambda: &Partition, nvars: usize) -> MultivarPolynomial {
    skew_schur_tableaux(lambda, &Partition::empty(), nvars)
}

/// S_{λ/μ} as the generating function of skew semistandard tableaux.
pub fn skew_schur_tableaux(lambda: &Partition, mu: &Partition, nvars: usize) -> MultivarPolynomial {
    let mut p = MultivarPolynomial::zero(nvars, 0);
    if !lambda.contains(mu) {
        return p;
    }
    if nvars == 0 {
        return if lambda == mu { MultivarPolynomial::one(0, 0) } else { p };
    }
    for c in skew_tableau_contents(lambda, mu, nvars) {
        p.add_term(c, Q::one());
    }
    p
}

/// N^λ_{μν}: strict ν-expansions of μ reaching λ whose reading word is a lattice word.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if lambda.size() != mu.size() + nu.size() || !lambda.contains(mu) {
        return 0;
    }
    let rows = lambda.len();
    let mut labels: Vec<Vec<u32>> = (0..rows).map(|r| vec![0; lambda.part(r + 1) as usize]).collect();
    let shape: Vec<u32> = (0..rows).map(|r| mu.part(r + 1)).collect();
    let mut count = 0;
    expand(lambda, nu.parts(), 0, shape, &mut labels, &mut count);
    count
}

fn expand(lambda: &Partition, nu: &[u32], p: usize, shape: Vec<u32>, labels: &mut Vec<Vec<u32>>, count: &mut u64) {
    if p == nu.len() {
        if is_lattice(labels) {
            *count += 1;
        }
        return;
    }
    // distribute nu[p] boxes as a horizontal strip: new_i ≤ min(λ_i, old_{i−1})
    let rows = shape.len();
    fn strips(
        i: usize,
        left: u32,
        shape: &[u32],
        lambda: &Partition,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if i == shape.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let cap = if i == 0 { lambda.part(1) } else { lambda.part(i + 1).min(shape[i - 1]) };
        let max_add = cap.saturating_sub(shape[i]).min(left);
        for a in 0..=max_add {
            cur.push(shape[i] + a);
            strips(i + 1, left - a, shape, lambda, cur, out);
            cur.pop();
        }
    }
    let mut options = Vec::new();
    strips(0, nu[p], &shape, lambda, &mut Vec::new(), &mut options);
    for next in options {
        for r in 0..rows {
            for c in shape[r]..next[r] {
                labels[r][c as usize] = p as u32 + 1;
            }
        }
        expand(lambda, nu, p + 1, next.clone(), labels, count);
        for r in 0..rows {
            for c in shape[r]..next[r] {
                labels[r][c as usize] = 0;
            }
        }
    }
}

/// Rows top to bottom, each read right to left.
fn is_lattice(labels: &[Vec<u32>]) -> bool {
    let mut seen: Vec<u32> = Vec::new();
    for row in labels {
        for &v in row.iter().rev() {
            if v == 0 {
                continue;
            }
            let v = v as usize;
            if seen.len() < v {
                seen.resize(v, 0);
            }
            seen[v - 1] += 1;
            if v > 1 && seen[v - 1] > seen[v - 2] {
                return false;
            }
        }
    }
    true
}

/// S_{λ/μ} = Σ_ν N^λ_{μν} S_ν.
pub fn skew_schur(lambda: &Partition, mu: &Partition, nvars: usize) -> Result<MultivarPolynomial, SymError> {
    if !lambda.contains(mu) {
        return Err(SymError::NotContained { inner: mu.clone(), outer: lambda.clone() });
    }
    let mut out = MultivarPolynomial::zero(nvars, 0);
    if nvars == 0 {
        return Ok(if lambda == mu { MultivarPolynomial::one(0, 0) } else { out });
    }
    for nu in Partition::all(lambda.size() - mu.size()) {
        if nu.len() > nvars {
            continue;
        }
        let c = lr_coefficient(lambda, mu, &nu);
        if c > 0 {
            out = out.add(&schur_poly(&nu, nvars).scale(&q(c as i64)));
        }
    }
    Ok(out)
}

/// HS_λ(x,y) = Σ_{μ⊆λ} S_μ(x) S_{λ′/μ′}(y).
pub fn hook_schur(lambda: &Partition, k: usize, l: usize) -> MultivarPolynomial {
    let mut out = MultivarPolynomial::zero(k, l);
    let lc = lambda.conjugate();
    for mu in lambda.subpartitions() {
        if mu.len() > k {
            continue;
        }
        let sx = schur_poly(&mu, k).embed_x(l);
        let sy = skew_schur(&lc, &mu.conjugate(), l).expect("containment is preserved by conjugation").embed_y(k);
        out = out.add(&sx.mul(&sy));
    }
    out
}

pub fn power_sum(r: u32, nvars: usize) -> MultivarPolynomial {
    let mut p = MultivarPolynomial::zero(nvars, 0);
    for i in 0..nvars {
        let mut e = vec![0; nvars];
        e[i] = r;
        p.add_term(e, Q::one());
    }
    p
}

/// p_ρ = ∏ p_{ρ_i}.
pub fn power_sum_product(rho: &Partition, nvars: usize) -> MultivarPolynomial {
    rho.parts().iter().fold(MultivarPolynomial::one(nvars, 0), |acc, &r| acc.mul(&power_sum(r, nvars)))
}

/// Expansion of a symmetric polynomial in Schur polynomials of the same variables.
pub fn schur_expand(p: &MultivarPolynomial) -> BTreeMap<Partition, Q> {
    let n = p.nx + p.ny;
    let mut rest = p.clone();
    let mut out = BTreeMap::new();
    while let Some((e, c)) = rest.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        let lambda = Partition::from_parts(e.clone());
        let s = schur_poly(&lambda, n);
        let s = MultivarPolynomial { nx: p.nx, ny: p.ny, terms: s.terms };
        rest = rest.add(&s.scale(&-c.clone()));
        out.insert(lambda, c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn character_examples() {
        for rho in Partition::all(4) {
            assert_eq!(mn_character(&p(&[4]), &rho).unwrap(), 1);
        }
        assert_eq!(mn_character(&p(&[1, 1]), &p(&[2])).unwrap(), -1);
        assert_eq!(mn_character(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), 2);
        assert!(mn_character(&p(&[2]), &p(&[1])).is_err());
    }

    #[test]
    fn partition_basics() {
        let l = p(&[4, 2, 1]);
        assert_eq!(l.conjugate(), p(&[3, 2, 1, 1]));
        assert_eq!(l.conjugate().conjugate(), l);
        assert!(p(&[3, 1]).dominates(&p(&[2, 2])));
        assert!(!p(&[2, 2]).dominates(&p(&[3, 1])));
        assert_eq!(Partition::all(5).len(), 7);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(Partition::new(vec![2, 1, 0, 0]).unwrap(), p(&[2, 1]));
        assert_eq!(p(&[2, 1]).subpartitions().len(), 5);
    }

    #[test]
    fn schur_examples() {
        let s = schur_poly(&p(&[1]), 3);
        assert_eq!(s, power_sum(1, 3));
        let s = schur_poly(&p(&[1, 1]), 2);
        assert_eq!(s, MultivarPolynomial::monomial(2, 0, vec![1, 1], Q::one()));
        assert!(schur_poly(&p(&[1, 1, 1]), 2).is_zero());
    }

    #[test]
    fn lr_examples() {
        assert_eq!(lr_coefficient(&p(&[2, 1]), &p(&[1]), &p(&[1, 1])), 1);
        assert_eq!(lr_coefficient(&p(&[2, 2]), &p(&[1]), &p(&[1])), 0);
        assert_eq!(lr_coefficient(&p(&[3, 2, 1]), &p(&[2, 1]), &p(&[2, 1])), 2);
        for lam in Partition::all(4) {
            let expected = if lam.contains(&p(&[2, 1])) { 1 } else { 0 };
            assert_eq!(lr_coefficient(&lam, &p(&[2, 1]), &p(&[1])), expected, "{lam}");
        }
    }

    #[test]
    fn skew_examples() {
        let l = p(&[3, 1]);
        assert_eq!(skew_schur(&l, &l, 2).unwrap(), MultivarPolynomial::one(2, 0));
        assert_eq!(skew_schur(&p(&[2, 1]), &p(&[1]), 1).unwrap(), MultivarPolynomial::monomial(1, 0, vec![2], Q::one()));
        assert_eq!(skew_schur(&p(&[2]), &p(&[1]), 2).unwrap(), power_sum(1, 2));
        assert!(skew_schur(&p(&[1]), &p(&[2]), 2).is_err());
        for (lam, mu) in [(p(&[3, 2, 1]), p(&[2, 1])), (p(&[4, 2]), p(&[1])), (p(&[3, 3, 1]), p(&[2]))] {
            assert_eq!(skew_schur(&lam, &mu, 3).unwrap(), skew_schur_tableaux(&lam, &mu, 3));
        }
    }

    #[test]
    fn hook_examples() {
        let h = hook_schur(&p(&[1]), 2, 1);
        let mut expected = MultivarPolynomial::zero(2, 1);
        for i in 0..3 {
            let mut e = vec![0; 3];
            e[i] = 1;
            expected.add_term(e, Q::one());
        }
        assert_eq!(h, expected);

        let h = hook_schur(&p(&[1, 1]), 1, 1);
        let mut expected = MultivarPolynomial::zero(1, 1);
        expected.add_term(vec![1, 1], Q::one());
        expected.add_term(vec![0, 2], Q::one());
        assert_eq!(h, expected);

        assert!(hook_schur(&p(&[2, 2]), 1, 1).is_zero());
    }

    #[test]
    fn hook_degenerations() {
        for lam in Partition::all(4) {
            let h = hook_schur(&lam, 3, 0);
            let s = schur_poly(&lam, 3);
            assert_eq!(h.terms(), s.terms());
            let h = hook_schur(&lam, 0, 3);
            let s = schur_poly(&lam.conjugate(), 3);
            assert_eq!(h.terms(), s.terms());
        }
    }

    #[test]
    fn schur_is_symmetric_in_each_block() {
        let h = hook_schur(&p(&[3, 1, 1]), 2, 2);
        assert_eq!(h.swap_vars(0, 1), h);
        assert_eq!(h.swap_vars(2, 3), h);
        let s = schur_poly(&p(&[3, 2]), 4);
        for i in 0..3 {
            assert_eq!(s.swap_vars(i, i + 1), s);
        }
    }

    #[test]
    fn expansion_recovers_schur() {
        let s = schur_poly(&p(&[2, 1]), 3).add(&schur_poly(&p(&[3]), 3).scale(&q(4)));
        let e = schur_expand(&s);
        assert_eq!(e.len(), 2);
        assert_eq!(e[&p(&[3])], q(4));
        assert_eq!(e[&p(&[2, 1])], q(1));
    }
}
