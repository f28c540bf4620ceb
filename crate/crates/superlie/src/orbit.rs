//! Diagram automorphisms, orbit Lie superalgebras and twining characters.
//!
//! Q̂ elements are integer vectors in the basis b_ī = α̂_ī/(ε_i N_i).

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{as_integer, divisors, mobius, q, Q};
use crate::gkm::{positive_real_roots, weyl_character, BorcherdsCartanData, GkmError};
use crate::graded_series::{Basis, Degree, FormalSeries, GradingSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("not a diagram automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("cannot parse permutation: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("weight is not fixed by the automorphism")]
    NotFixed,
    #[error("degree must be a nonzero element of the positive cone")]
    BadDegree,
    #[error("no multiplicity table for the power {0}")]
    MissingTable(u32),
    #[error("fixed-point dimension {0} is not a nonnegative integer")]
    NotIntegral(String),
    #[error("matrix model check failed: {0}")]
    Model(String),
    #[error(transparent)]
    Gkm(#[from] GkmError),
}

/// A permutation σ of the index set (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    pub perm: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn identity(n: usize) -> Self {
        DiagramAutomorphism { perm: (0..n).collect() }
    }

    /// Cycles written with 1-based labels, e.g. "1 3" or "(1 3)(2 4)".
    pub fn parse(n: usize, text: &str) -> Result<Self, OrbitError> {
        let mut perm: Vec<usize> = (0..n).collect();
        let cleaned = text.replace(')', " ) ");
        let cleaned = cleaned.replace('(', " ");
        let mut cycle: Vec<usize> = Vec::new();
        let mut seen = vec![false; n];
        let close = |cycle: &mut Vec<usize>, perm: &mut Vec<usize>| {
            for k in 0..cycle.len() {
                perm[cycle[k]] = cycle[(k + 1) % cycle.len()];
            }
            cycle.clear();
        };
        for tok in cleaned.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            if tok == ")" {
                close(&mut cycle, &mut perm);
                continue;
            }
            let v: usize = tok.parse().map_err(|_| OrbitError::Parse(text.to_string()))?;
            if v == 0 || v > n || seen[v - 1] {
                return Err(OrbitError::Parse(text.to_string()));
            }
            seen[v - 1] = true;
            cycle.push(v - 1);
        }
        close(&mut cycle, &mut perm);
        Ok(DiagramAutomorphism { perm })
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn order(&self) -> u32 {
        let mut n = 1u32;
        for i in 0..self.perm.len() {
            n = n.lcm(&(self.orbit(i).len() as u32));
        }
        n
    }

    pub fn orbit(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let mut j = self.perm[i];
        while j != i {
            out.push(j);
            j = self.perm[j];
        }
        out
    }

    pub fn power(&self, k: u32) -> Self {
        let perm = (0..self.perm.len())
            .map(|i| {
                let mut j = i;
                for _ in 0..k {
                    j = self.perm[j];
                }
                j
            })
            .collect();
        DiagramAutomorphism { perm }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// σ*(α) on root coordinates.
    pub fn act(&self, coords: &[i64]) -> Vec<i64> {
        let mut out = vec![0; coords.len()];
        for (i, &c) in coords.iter().enumerate() {
            out[self.perm[i]] += c;
        }
        out
    }
}

/// Violations of the automorphism conditions; empty when σ is valid.
pub fn validate_automorphism(data: &BorcherdsCartanData, sigma: &DiagramAutomorphism) -> Vec<String> {
    let n = data.rank();
    let mut out = Vec::new();
    let mut hit = vec![false; n];
    if sigma.perm.len() != n {
        return vec![format!("permutation has length {}, expected {n}", sigma.perm.len())];
    }
    for &j in &sigma.perm {
        if j >= n || hit[j] {
            return vec!["not a permutation".to_string()];
        }
        hit[j] = true;
    }
    for i in 0..n {
        let si = sigma.apply(i);
        for j in 0..n {
            if data.a(i, j) != data.a(si, sigma.apply(j)) {
                out.push(format!("(i) a[{i}][{j}] != a[σ{i}][σ{j}]"));
            }
        }
        if data.parity[i] != data.parity[si] {
            out.push(format!("(ii) parity of {i} is not preserved"));
        }
        if data.charge[i] != data.charge[si] {
            out.push(format!("(iii) charge of {i} is not preserved"));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedData {
    /// Smallest element of each orbit.
    pub representatives: Vec<usize>,
    /// Position in `representatives` of each index's orbit.
    pub orbit_of: Vec<usize>,
    pub orbit_sizes: Vec<u32>,
    pub epsilon: Vec<Q>,
    /// Â over all representatives.
    pub matrix: Vec<Vec<Q>>,
    /// Positions (into `representatives`) passing the linking condition.
    pub restricted: Vec<usize>,
    pub charge: Vec<u64>,
    pub parity: Vec<i8>,
    pub symmetrizers: Vec<Q>,
    pub real: Vec<bool>,
}

impl FoldedData {
    pub fn rank(&self) -> usize {
        self.representatives.len()
    }

    /// ε_i N_i, the factor between α̂_ī and the lattice basis.
    pub fn scale(&self, pos: usize) -> Q {
        &self.epsilon[pos] * q(self.orbit_sizes[pos] as i64)
    }

    /// Borcherds–Cartan data of the orbit Lie superalgebra (indices Ĭ).
    pub fn orbit_algebra(&self, data: &BorcherdsCartanData) -> BorcherdsCartanData {
        let r = &self.restricted;
        BorcherdsCartanData {
            indices: r.iter().map(|&p| data.indices[self.representatives[p]].clone()).collect(),
            matrix: r.iter().map(|&p| r.iter().map(|&s| self.matrix[p][s].clone()).collect()).collect(),
            symmetrizers: r.iter().map(|&p| self.symmetrizers[p].clone()).collect(),
            charge: r.iter().map(|&p| self.charge[p]).collect(),
            parity: r.iter().map(|&p| self.parity[p]).collect(),
        }
    }

    /// α̂-coordinates over Ĭ to Q̂ lattice coordinates.
    pub fn hat_to_lattice(&self, coords: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.rank()];
        for (k, &p) in self.restricted.iter().enumerate() {
            let s = as_integer(&self.scale(p)).and_then(|v| i64::try_from(v).ok()).expect("integral scale");
            out[p] += coords[k] * s;
        }
        out
    }
}

pub fn fold(data: &BorcherdsCartanData, sigma: &DiagramAutomorphism) -> Result<FoldedData, OrbitError> {
    data.ensure_valid()?;
    let v = validate_automorphism(data, sigma);
    if !v.is_empty() {
        return Err(OrbitError::InvalidAutomorphism(v.join("; ")));
    }
    let n = data.rank();
    let mut representatives = Vec::new();
    let mut orbit_of = vec![usize::MAX; n];
    for i in 0..n {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let orb = sigma.orbit(i);
        let rep = *orb.iter().min().expect("nonempty");
        let pos = representatives.len();
        representatives.push(rep);
        for j in orb {
            orbit_of[j] = pos;
        }
    }
    let orbits: Vec<Vec<usize>> = representatives.iter().map(|&r| sigma.orbit(r)).collect();
    let orbit_sizes: Vec<u32> = orbits.iter().map(|o| o.len() as u32).collect();
    let epsilon: Vec<Q> = orbits
        .iter()
        .map(|o| {
            let j = o[0];
            Q::one() - o[1..].iter().map(|&k| data.a(j, k).clone()).sum::<Q>()
        })
        .collect();
    let r = representatives.len();
    let mut matrix = vec![vec![Q::zero(); r]; r];
    for (pi, &i) in representatives.iter().enumerate() {
        for (pj, orb) in orbits.iter().enumerate() {
            let s: Q = orb.iter().map(|&k| data.a(i, k).clone()).sum();
            matrix[pi][pj] = &epsilon[pj] * s;
        }
    }
    let real: Vec<bool> = representatives.iter().map(|&i| data.is_real(i)).collect();
    let restricted = (0..r)
        .filter(|&p| if real[p] { epsilon[p] <= q(2) } else { epsilon[p] == q(1) })
        .collect();
    let symmetrizers = (0..r)
        .map(|p| q(orbit_sizes[p] as i64) * &epsilon[p] * &data.symmetrizers[representatives[p]])
        .collect();
    Ok(FoldedData {
        charge: representatives.iter().map(|&i| data.charge[i]).collect(),
        parity: representatives.iter().map(|&i| data.parity[i]).collect(),
        representatives,
        orbit_of,
        orbit_sizes,
        epsilon,
        matrix,
        restricted,
        symmetrizers,
        real,
    })
}

/// φ: Q → Q̂, α_i ↦ b_ī.
pub fn phi_map(folded: &FoldedData, coords: &[i64]) -> Vec<i64> {
    let mut out = vec![0; folded.rank()];
    for (i, &c) in coords.iter().enumerate() {
        out[folded.orbit_of[i]] += c;
    }
    out
}

/// φ^d: Q̂(d) → Q̂, sending the σ^d-orbit basis vector to its σ-orbit.
pub fn phi_up(folded_d: &FoldedData, folded: &FoldedData, coords: &[i64]) -> Vec<i64> {
    let mut out = vec![0; folded.rank()];
    for (p, &c) in coords.iter().enumerate() {
        out[folded.orbit_of[folded_d.representatives[p]]] += c;
    }
    out
}

/// (λ|μ) against (φλ|φμ) under the folded form; inputs must be σ-fixed.
pub fn symmetric_form_check(
    data: &BorcherdsCartanData,
    sigma: &DiagramAutomorphism,
    folded: &FoldedData,
    lambda: &[i64],
    mu: &[i64],
) -> Result<bool, OrbitError> {
    if sigma.act(lambda) != lambda || sigma.act(mu) != mu {
        return Err(OrbitError::NotFixed);
    }
    let lhs = data.form(lambda, mu);
    let hat = |x: &[i64]| -> Vec<Q> {
        phi_map(folded, x).iter().enumerate().map(|(p, &c)| q(c) / folded.scale(p)).collect()
    };
    let (l, m) = (hat(lambda), hat(mu));
    let mut rhs = Q::zero();
    for i in 0..folded.rank() {
        for j in 0..folded.rank() {
            rhs += &l[i] * &m[j] * &folded.symmetrizers[i] * &folded.matrix[i][j];
        }
    }
    Ok(lhs == rhs)
}

type Mat = Vec<Vec<i64>>;

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn transpose(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

fn unit(n: usize, i: usize, j: usize) -> Mat {
    let mut m = vec![vec![0; n]; n];
    m[i][j] = 1;
    m
}

/// The single nonzero entry of a matrix unit multiple.
fn single_entry(m: &Mat) -> Option<(usize, usize, i64)> {
    let mut found = None;
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x != 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, j, x));
            }
        }
    }
    found
}

/// sl_{n+1} with σ realized as X ↦ −S Xᵀ S⁻¹ (or the identity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRootModel {
    pub n: usize,
    pub sigma: DiagramAutomorphism,
    pub signs: Vec<i64>,
    /// Positive roots; entry r covers both ±α_r.
    pub positive_roots: Vec<Vec<i64>>,
    /// σ*(α_r) as an index into `positive_roots`.
    pub image: Vec<usize>,
    /// σ(f_α) = c·f_{σα}.
    pub f_scalar: Vec<i64>,
    /// σ(e_α) = c·e_{σα}.
    pub e_scalar: Vec<i64>,
    /// σ on the Cartan basis H_i = E_ii − E_{i+1,i+1} (column i is σ(H_i)).
    pub cartan: Mat,
}

impl FiniteRootModel {
    pub fn type_a(n: usize, sigma: &DiagramAutomorphism) -> Result<Self, OrbitError> {
        let data = BorcherdsCartanData::type_a(n);
        let v = validate_automorphism(&data, sigma);
        if !v.is_empty() {
            return Err(OrbitError::InvalidAutomorphism(v.join("; ")));
        }
        let m = n + 1;
        let candidates: Vec<Vec<i64>> = if sigma.is_identity() {
            vec![vec![]]
        } else {
            (0..1u32 << m).map(|bits| (0..m).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect()).collect()
        };
        let apply = |signs: &Vec<i64>, x: &Mat| -> Mat {
            if signs.is_empty() {
                return x.clone();
            }
            let mut s = vec![vec![0; m]; m];
            for i in 0..m {
                s[i][m - 1 - i] = signs[i];
            }
            let sinv = transpose(&s);
            let y = mat_mul(&mat_mul(&s, &transpose(x)), &sinv);
            y.into_iter().map(|r| r.into_iter().map(|v| -v).collect()).collect()
        };
        let signs = candidates
            .into_iter()
            .find(|s| {
                (0..n).all(|i| {
                    let j = sigma.apply(i);
                    apply(s, &unit(m, i, i + 1)) == unit(m, j, j + 1) && apply(s, &unit(m, i + 1, i)) == unit(m, j + 1, j)
                })
            })
            .ok_or_else(|| OrbitError::Model("no sign pattern realizes σ on the generators".into()))?;
        // root α_a + … + α_{b−1} has f = E_{b,a}, e = E_{a,b}
        let mut pairs = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                pairs.push((a, b));
            }
        }
        pairs.sort_by_key(|&(a, b)| (b - a, a));
        let positive_roots: Vec<Vec<i64>> =
            pairs.iter().map(|&(a, b)| (0..n).map(|i| if i >= a && i < b { 1 } else { 0 }).collect()).collect();
        let index_of = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b));
        let mut image = Vec::new();
        let mut f_scalar = Vec::new();
        let mut e_scalar = Vec::new();
        for (r, &(a, b)) in pairs.iter().enumerate() {
            let (i, j, c) = single_entry(&apply(&signs, &unit(m, b, a))).ok_or_else(|| OrbitError::Model("f image".into()))?;
            let t = index_of(j, i).ok_or_else(|| OrbitError::Model("f image is not a negative root vector".into()))?;
            if positive_roots[t] != sigma.act(&positive_roots[r]) {
                return Err(OrbitError::Model("σ does not act on roots through σ*".into()));
            }
            image.push(t);
            f_scalar.push(c);
            let (i2, j2, c2) = single_entry(&apply(&signs, &unit(m, a, b))).ok_or_else(|| OrbitError::Model("e image".into()))?;
            if index_of(i2, j2) != Some(t) {
                return Err(OrbitError::Model("e and f images disagree".into()));
            }
            e_scalar.push(c2);
        }
        let mut cartan = vec![vec![0; n]; n];
        for i in 0..n {
            let mut h = vec![vec![0; m]; m];
            h[i][i] = 1;
            h[i + 1][i + 1] = -1;
            let y = apply(&signs, &h);
            let mut acc = 0;
            for k in 0..n {
                acc += y[k][k];
                cartan[k][i] = acc;
            }
        }
        Ok(FiniteRootModel { n, sigma: sigma.clone(), signs, positive_roots, image, f_scalar, e_scalar, cartan })
    }

    fn power_scalar(&self, r: usize, m: u32, scalars: &[i64]) -> Option<i64> {
        let mut c = 1;
        let mut cur = r;
        for _ in 0..m {
            c *= scalars[cur];
            cur = self.image[cur];
        }
        (cur == r).then_some(c)
    }

    /// tr(σᵐ|𝔤_{−α_r}) when σᵐ fixes α_r, else None.
    pub fn f_trace(&self, r: usize, m: u32) -> Option<i64> {
        self.power_scalar(r, m, &self.f_scalar)
    }

    pub fn e_trace(&self, r: usize, m: u32) -> Option<i64> {
        self.power_scalar(r, m, &self.e_scalar)
    }

    pub fn cartan_trace(&self, m: u32) -> i64 {
        let mut p: Mat = (0..self.n).map(|i| (0..self.n).map(|j| (i == j) as i64).collect()).collect();
        for _ in 0..m {
            p = mat_mul(&self.cartan, &p);
        }
        (0..self.n).map(|i| p[i][i]).sum()
    }

    /// str(σᵐ|𝔤_{(−α)}) over the σ-orbit of α_r.
    pub fn orbit_trace(&self, r: usize, m: u32) -> i64 {
        self.orbit(r).into_iter().filter_map(|t| self.f_trace(t, m)).sum()
    }

    pub fn orbit(&self, r: usize) -> Vec<usize> {
        let mut out = vec![r];
        let mut t = self.image[r];
        while t != r {
            out.push(t);
            t = self.image[t];
        }
        out
    }

    /// Negates σ on the root spaces ±α_r (for detection tests).
    pub fn flipped(&self, r: usize) -> Self {
        let mut m = self.clone();
        m.f_scalar[r] = -m.f_scalar[r];
        m.e_scalar[r] = -m.e_scalar[r];
        m
    }
}

fn lattice_spec(rank: usize) -> GradingSpec {
    GradingSpec::plain(rank)
}

fn to_degree(v: &[i64]) -> Degree {
    Degree::new(v.iter().map(|&x| x as u32).collect(), vec![])
}

/// φ(R_σ) = ∏_{α>0} exp(−Σ_m (1/(m N_α)) str(σᵐ|𝔤_{(−α)}) E^{−mφ(α)}), stored at −(exponent).
pub fn twining_denominator(model: &FiniteRootModel, folded: &FoldedData, bound: u32) -> FormalSeries {
    let mut log = FormalSeries::zero(&lattice_spec(folded.rank()), bound, Basis::Plain);
    for (r, root) in model.positive_roots.iter().enumerate() {
        let beta = phi_map(folded, root);
        let h: i64 = beta.iter().sum();
        let n_alpha = model.orbit(r).len() as i64;
        for m in 1..=(bound as i64 / h) as u32 {
            let t = model.orbit_trace(r, m);
            if t == 0 {
                continue;
            }
            let coords: Vec<i64> = beta.iter().map(|x| x * m as i64).collect();
            log.add_term(to_degree(&coords), -q(t) / q(m as i64 * n_alpha));
        }
    }
    log.exp().expect("plain grading")
}

/// The same product from per-degree traces str(σᵐ|𝔤_{[−β]}), m = 1..period.
pub fn twining_denominator_from_traces(rank: usize, traces: &BTreeMap<Vec<i64>, Vec<Q>>, bound: u32) -> FormalSeries {
    let mut log = FormalSeries::zero(&lattice_spec(rank), bound, Basis::Plain);
    for (beta, vals) in traces {
        let h: i64 = beta.iter().sum();
        if h <= 0 || vals.is_empty() {
            continue;
        }
        for m in 1..=(bound as i64 / h) as u32 {
            let t = &vals[((m - 1) as usize) % vals.len()];
            let coords: Vec<i64> = beta.iter().map(|x| x * m as i64).collect();
            log.add_term(to_degree(&coords), -t.clone() / q(m as i64));
        }
    }
    log.exp().expect("plain grading")
}

/// Positive roots of a finite-type orbit algebra, in Q̂ lattice coordinates.
pub fn finite_orbit_roots(data: &BorcherdsCartanData, folded: &FoldedData) -> Result<Vec<Vec<i64>>, OrbitError> {
    let alg = folded.orbit_algebra(data);
    if !alg.imaginary_indices().is_empty() {
        return Err(OrbitError::Unsupported("orbit algebra has imaginary simple roots".into()));
    }
    let roots = positive_real_roots(&alg, 200, 10_000)?;
    Ok(roots.iter().map(|r| folded.hat_to_lattice(r)).collect())
}

/// ∏_{α̂>0}(1 − E^{−α̂}) for the finite-type orbit algebra.
pub fn orbit_denominator(data: &BorcherdsCartanData, folded: &FoldedData, bound: u32) -> Result<FormalSeries, OrbitError> {
    let mut out = FormalSeries::one(&lattice_spec(folded.rank()), bound, Basis::Plain);
    for r in finite_orbit_roots(data, folded)? {
        let mut factor = FormalSeries::one(&lattice_spec(folded.rank()), bound, Basis::Plain);
        factor.add_term(to_degree(&r), q(-1));
        out = out.mul(&factor).expect("same grading");
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitMultiplicityReport {
    pub holds: bool,
    pub discrepancy: Option<(Vec<u32>, Q, Q)>,
}

/// φ(R_σ) against the orbit-algebra denominator, for σ on A_n.
pub fn orbit_multiplicity_check(n: usize, sigma: &DiagramAutomorphism, bound: u32) -> Result<OrbitMultiplicityReport, OrbitError> {
    let data = BorcherdsCartanData::type_a(n);
    let folded = fold(&data, sigma)?;
    let model = FiniteRootModel::type_a(n, sigma)?;
    let lhs = twining_denominator(&model, &folded, bound);
    let rhs = orbit_denominator(&data, &folded, bound)?;
    let d = lhs.first_difference(&rhs);
    Ok(OrbitMultiplicityReport { holds: d.is_none(), discrepancy: d.map(|(deg, a, b)| (deg.gamma, a, b)) })
}

/// sdim 𝔤(σʲ)_{[γ]^j} for j = 1..N, in σ-orbit lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTables {
    pub order: u32,
    pub tables: BTreeMap<u32, BTreeMap<Vec<i64>, Q>>,
}

impl OrbitTables {
    /// Finite-type tables: each orbit algebra's positive roots with multiplicity 1.
    pub fn finite_type(data: &BorcherdsCartanData, sigma: &DiagramAutomorphism) -> Result<Self, OrbitError> {
        let folded = fold(data, sigma)?;
        let order = sigma.order();
        let mut tables = BTreeMap::new();
        for j in 1..=order {
            let sj = sigma.power(j);
            let fj = fold(data, &sj)?;
            let mut t: BTreeMap<Vec<i64>, Q> = BTreeMap::new();
            for r in finite_orbit_roots(data, &fj)? {
                *t.entry(phi_up(&fj, &folded, &r)).or_insert_with(Q::zero) += q(1);
            }
            tables.insert(j, t);
        }
        Ok(OrbitTables { order, tables })
    }

    fn sdim(&self, j: u32, gamma: &[i64]) -> Result<Q, OrbitError> {
        let j = (j - 1) % self.order + 1;
        let t = self.tables.get(&j).ok_or(OrbitError::MissingTable(j))?;
        Ok(t.get(gamma).cloned().unwrap_or_else(Q::zero))
    }
}

fn content(beta: &[i64]) -> Result<u64, OrbitError> {
    if beta.iter().any(|&x| x < 0) || beta.iter().all(|&x| x == 0) {
        return Err(OrbitError::BadDegree);
    }
    Ok(beta.iter().fold(0u64, |g, &x| g.gcd(&(x as u64))))
}

/// str(σᵏ|𝔤_{[−β]}) = Σ_{ad|β} (1/ad) μ(d) sdim 𝔤(σ^{dk})_{[β/ad]}.
pub fn sigma_power_trace(tables: &OrbitTables, k: u32, beta: &[i64]) -> Result<Q, OrbitError> {
    let g = content(beta)?;
    let mut total = Q::zero();
    for e in divisors(g) {
        for d in divisors(e) {
            let mu = mobius(d);
            if mu == 0 {
                continue;
            }
            let gamma: Vec<i64> = beta.iter().map(|x| x / e as i64).collect();
            total += tables.sdim(d as u32 * k, &gamma)? * q(mu) / q(e as i64);
        }
    }
    Ok(total)
}

/// sdim 𝔤^σ_β as the average of the σᵏ traces.
pub fn fixed_point_sdim(tables: &OrbitTables, beta: &[i64]) -> Result<Q, OrbitError> {
    let mut total = Q::zero();
    for k in 1..=tables.order {
        total += sigma_power_trace(tables, k, beta)?;
    }
    Ok(total / q(tables.order as i64))
}

/// Fixed dimension of 𝔤^σ: both signs of every positive degree plus the fixed Cartan part.
pub fn total_fixed_dimension(tables: &OrbitTables, model: &FiniteRootModel, folded: &FoldedData) -> Result<Q, OrbitError> {
    let mut degrees: Vec<Vec<i64>> = model.positive_roots.iter().map(|r| phi_map(folded, r)).collect();
    degrees.sort();
    degrees.dedup();
    let mut total = Q::zero();
    for b in &degrees {
        let v = fixed_point_sdim(tables, b)?;
        if !v.is_integer() || v < Q::zero() {
            return Err(OrbitError::NotIntegral(crate::arith::render(&v)));
        }
        total += v * q(2);
    }
    let order = model.sigma.order();
    let cartan: i64 = (1..=order).map(|k| model.cartan_trace(k)).sum();
    Ok(total + q(cartan) / q(order as i64))
}

/// Direct trace of σᵏ on 𝔤_{[−β]} from the matrix model.
pub fn brute_force_trace(model: &FiniteRootModel, folded: &FoldedData, k: u32, beta: &[i64]) -> i64 {
    model
        .positive_roots
        .iter()
        .enumerate()
        .filter(|(_, r)| phi_map(folded, r) == beta)
        .filter_map(|(i, _)| model.f_trace(i, k))
        .sum()
}

/// Laurent polynomial in the Q̂ lattice.
pub type LatticeCharacter = BTreeMap<Vec<i64>, Q>;

/// φ(ch_σ 𝔤) over σ-fixed weights of the adjoint module.
pub fn adjoint_twining_character(model: &FiniteRootModel, folded: &FoldedData) -> LatticeCharacter {
    let mut out = LatticeCharacter::new();
    for (r, root) in model.positive_roots.iter().enumerate() {
        let b = phi_map(folded, root);
        if let Some(c) = model.e_trace(r, 1) {
            *out.entry(b.clone()).or_insert_with(Q::zero) += q(c);
        }
        if let Some(c) = model.f_trace(r, 1) {
            *out.entry(b.iter().map(|x| -x).collect()).or_insert_with(Q::zero) += q(c);
        }
    }
    *out.entry(vec![0; folded.rank()]).or_insert_with(Q::zero) += q(model.cartan_trace(1));
    out.retain(|_, v| !v.is_zero());
    out
}

/// ch V̆(ν) of the finite-type orbit algebra, ν given in Q̂ lattice coordinates.
pub fn orbit_character(data: &BorcherdsCartanData, folded: &FoldedData, nu: &[i64]) -> Result<LatticeCharacter, OrbitError> {
    let alg = folded.orbit_algebra(data);
    let r = &folded.restricted;
    if r.len() != folded.rank() {
        return Err(OrbitError::Unsupported("weights outside the restricted index set".into()));
    }
    let hat: Vec<Q> = r.iter().map(|&p| q(nu[p]) / folded.scale(p)).collect();
    let values: Vec<Q> =
        (0..alg.rank()).map(|i| (0..alg.rank()).map(|j| alg.a(i, j) * &hat[j]).sum()).collect();
    let bound: u32 = 4 * nu.iter().map(|x| x.unsigned_abs() as u32).sum::<u32>() + 4;
    let ch = weyl_character(&alg, &(0..alg.rank()).collect::<Vec<_>>(), &values, bound)?;
    let mut out = LatticeCharacter::new();
    for (d, c) in ch.terms() {
        let down = folded.hat_to_lattice(&d.gamma.iter().map(|&x| x as i64).collect::<Vec<_>>());
        let w: Vec<i64> = nu.iter().zip(&down).map(|(a, b)| a - b).collect();
        out.insert(w, c.clone());
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// φ(ch_σ 𝔤) = ch V̆(φ(θ)) for the adjoint module of A_n.
pub fn finite_adjoint_twining_check(data: &BorcherdsCartanData, model: &FiniteRootModel) -> Result<bool, OrbitError> {
    let folded = fold(data, &model.sigma)?;
    let theta = model.positive_roots.last().expect("nonempty").clone();
    let lhs = adjoint_twining_character(model, &folded);
    let rhs = orbit_character(data, &folded, &phi_map(&folded, &theta))?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> (BorcherdsCartanData, DiagramAutomorphism) {
        (BorcherdsCartanData::type_a(3), DiagramAutomorphism::parse(3, "1 3").unwrap())
    }

    #[test]
    fn parse_cycles() {
        assert_eq!(DiagramAutomorphism::parse(3, "1 3").unwrap().perm, vec![2, 1, 0]);
        assert_eq!(DiagramAutomorphism::parse(4, "(1 2)(3 4)").unwrap().perm, vec![1, 0, 3, 2]);
        assert!(DiagramAutomorphism::parse(3, "1 1").is_err());
        assert_eq!(DiagramAutomorphism::parse(3, "").unwrap(), DiagramAutomorphism::identity(3));
    }

    #[test]
    fn validation() {
        let (d, s) = a3();
        assert!(validate_automorphism(&d, &s).is_empty());
        assert!(validate_automorphism(&d, &DiagramAutomorphism::identity(3)).is_empty());
        let bad = DiagramAutomorphism::parse(3, "1 2").unwrap();
        assert!(!validate_automorphism(&d, &bad).is_empty());
        let mut odd = BorcherdsCartanData::from_int_matrix(&[vec![-2, -1], vec![-1, -2]]);
        odd.parity[1] = -1;
        let swap = DiagramAutomorphism::parse(2, "1 2").unwrap();
        assert!(validate_automorphism(&odd, &swap).iter().any(|v| v.starts_with("(ii)")));
    }

    #[test]
    fn fold_examples() {
        let (d, s) = a3();
        let f = fold(&d, &s).unwrap();
        assert_eq!(f.epsilon, vec![q(1), q(1)]);
        assert_eq!(f.matrix, vec![vec![q(2), q(-1)], vec![q(-2), q(2)]]);
        assert_eq!(f.restricted, vec![0, 1]);
        let a2 = BorcherdsCartanData::type_a(2);
        let f2 = fold(&a2, &DiagramAutomorphism::parse(2, "1 2").unwrap()).unwrap();
        assert_eq!(f2.epsilon, vec![q(2)]);
        assert_eq!(f2.matrix, vec![vec![q(2)]]);
        let id = fold(&d, &DiagramAutomorphism::identity(3)).unwrap();
        assert_eq!(id.matrix, d.matrix);
        assert_eq!(id.orbit_algebra(&d), d);
    }

    #[test]
    fn folded_form_is_symmetric() {
        let (d, s) = a3();
        let f = fold(&d, &s).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(&f.symmetrizers[i] * &f.matrix[i][j], &f.symmetrizers[j] * &f.matrix[j][i]);
            }
        }
        for &p in &f.restricted {
            assert_eq!(f.matrix[p][p], d.matrix[f.representatives[p]][f.representatives[p]]);
        }
    }

    #[test]
    fn phi_examples() {
        let (d, s) = a3();
        let f = fold(&d, &s).unwrap();
        assert_eq!(phi_map(&f, &[1, 0, 0]), vec![1, 0]);
        assert_eq!(phi_map(&f, &[0, 0, 1]), vec![1, 0]);
        assert_eq!(phi_map(&f, &[1, 1, 1]), vec![2, 1]);
        assert_eq!(f.hat_to_lattice(&[1, 1]), vec![2, 1]);
        let sq = fold(&d, &s.power(2)).unwrap();
        for r in [[1, 0, 0], [0, 1, 1], [1, 2, 3]] {
            assert_eq!(phi_up(&sq, &f, &phi_map(&sq, &r)), phi_map(&f, &r));
        }
    }

    #[test]
    fn folded_form_examples() {
        let (d, s) = a3();
        let f = fold(&d, &s).unwrap();
        assert!(symmetric_form_check(&d, &s, &f, &[1, 0, 1], &[1, 0, 1]).unwrap());
        assert_eq!(d.form(&[1, 0, 1], &[1, 0, 1]), q(4));
        assert!(symmetric_form_check(&d, &s, &f, &[0, 1, 0], &[0, 1, 0]).unwrap());
        assert_eq!(symmetric_form_check(&d, &s, &f, &[1, 0, 0], &[0, 1, 0]), Err(OrbitError::NotFixed));
    }

    #[test]
    fn model_realizes_sigma() {
        let (_, s) = a3();
        let m = FiniteRootModel::type_a(3, &s).unwrap();
        assert_eq!(m.positive_roots.len(), 6);
        assert_eq!(m.cartan_trace(1), 1);
        assert_eq!(m.cartan_trace(2), 3);
        let id = FiniteRootModel::type_a(2, &DiagramAutomorphism::identity(2)).unwrap();
        assert!(id.f_scalar.iter().all(|&c| c == 1));
    }

    #[test]
    fn a3_traces() {
        let (d, s) = a3();
        let f = fold(&d, &s).unwrap();
        let m = FiniteRootModel::type_a(3, &s).unwrap();
        let t = OrbitTables::finite_type(&d, &s).unwrap();
        assert_eq!(sigma_power_trace(&t, 1, &[1, 1]).unwrap(), q(0));
        assert_eq!(brute_force_trace(&m, &f, 1, &[1, 1]), 0);
        assert_eq!(sigma_power_trace(&t, 1, &[2, 1]).unwrap(), q(1));
        assert_eq!(brute_force_trace(&m, &f, 1, &[2, 1]), 1);
    }

    #[test]
    fn identity_recovers_dimensions() {
        let d = BorcherdsCartanData::type_a(2);
        let id = DiagramAutomorphism::identity(2);
        let t = OrbitTables::finite_type(&d, &id).unwrap();
        for b in [[1, 0], [0, 1], [1, 1]] {
            assert_eq!(fixed_point_sdim(&t, &b).unwrap(), q(1));
            assert_eq!(sigma_power_trace(&t, 1, &b).unwrap(), q(1));
        }
        assert_eq!(fixed_point_sdim(&t, &[2, 0]).unwrap(), q(0));
    }
}
