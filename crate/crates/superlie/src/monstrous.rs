//! Normalized q-series, Faber polynomials, replicability and supertraces of
//! Monstrous Lie superalgebras over II₁,₁.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{divisors, mobius, q, qint, Q};
use crate::gkm::{BorcherdsCartanData, ModuleWeight, Projection};
use crate::graded_series::{Basis, Degree, FormalSeries, GradingSpec};
use crate::witt::{supertrace, PowerTraceTable, TraceError};

const J_DATA: &str = include_str!("../data/j_function.json");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonsterError {
    #[error("q-series must start at q^-1 with f(-1) = 1 and f(0) = 0")]
    NotNormalized,
    #[error("coefficient {0} is not an integer")]
    BadCoefficient(String),
    #[error("need f({needed}) but the series stops at f({depth})")]
    InsufficientDepth { needed: u64, depth: u64 },
    #[error("no replicate F^({0}) supplied")]
    MissingReplicate(u32),
    #[error("malformed q-series file: {0}")]
    Parse(String),
    #[error("m and n must be positive")]
    BadCell,
    #[error("empty family")]
    EmptyFamily,
    #[error(transparent)]
    Trace(#[from] TraceError),
}

/// On-disk form: coefficients of q^start, q^(start+1), ...
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct QSeriesFile {
    pub start: i64,
    pub coeffs: Vec<String>,
}

/// F(q) = q⁻¹ + Σ_{n≥1} f(n)qⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

impl QSeries {
    /// `coeffs[n-1]` is f(n).
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        QSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        QSeries::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The normalized series q⁻¹.
    pub fn trivial(depth: usize) -> Self {
        QSeries::new(vec![BigInt::zero(); depth])
    }

    pub fn from_file(file: &QSeriesFile) -> Result<Self, MonsterError> {
        let mut vals = Vec::with_capacity(file.coeffs.len());
        for c in &file.coeffs {
            vals.push(c.trim().parse::<BigInt>().map_err(|_| MonsterError::BadCoefficient(c.clone()))?);
        }
        if file.start != -1 || vals.len() < 2 || !vals[0].is_one() || !vals[1].is_zero() {
            return Err(MonsterError::NotNormalized);
        }
        Ok(QSeries::new(vals.split_off(2)))
    }

    pub fn to_file(&self) -> QSeriesFile {
        let mut coeffs = vec!["1".to_string(), "0".to_string()];
        coeffs.extend(self.coeffs.iter().map(|c| c.to_string()));
        QSeriesFile { start: -1, coeffs }
    }

    pub fn from_json(text: &str) -> Result<Self, MonsterError> {
        let file: QSeriesFile = serde_json::from_str(text).map_err(|e| MonsterError::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    /// J(q) = j(q) − 744 from the bundled table.
    pub fn j_function() -> Self {
        Self::from_json(J_DATA).expect("bundled j data parses")
    }

    pub fn depth(&self) -> u64 {
        self.coeffs.len() as u64
    }

    pub fn f(&self, n: i64) -> Result<BigInt, MonsterError> {
        match n {
            -1 => Ok(BigInt::one()),
            0 => Ok(BigInt::zero()),
            n if n < -1 => Ok(BigInt::zero()),
            n => self
                .coeffs
                .get(n as usize - 1)
                .cloned()
                .ok_or(MonsterError::InsufficientDepth { needed: n as u64, depth: self.depth() }),
        }
    }

    pub fn with_coeff(&self, n: u64, value: BigInt) -> Self {
        let mut c = self.coeffs.clone();
        if c.len() < n as usize {
            c.resize(n as usize, BigInt::zero());
        }
        c[n as usize - 1] = value;
        QSeries::new(c)
    }
}

/// a ↦ F^{(a)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplicateFamily {
    members: BTreeMap<u32, QSeries>,
    /// Use F itself for every missing a.
    self_replicating: bool,
}

impl ReplicateFamily {
    pub fn new(members: BTreeMap<u32, QSeries>) -> Result<Self, MonsterError> {
        if !members.contains_key(&1) {
            return Err(MonsterError::MissingReplicate(1));
        }
        Ok(ReplicateFamily { members, self_replicating: false })
    }

    /// F^{(a)} = F for all a.
    pub fn self_replicating(f: QSeries) -> Self {
        ReplicateFamily { members: [(1, f)].into_iter().collect(), self_replicating: true }
    }

    pub fn base(&self) -> &QSeries {
        &self.members[&1]
    }

    pub fn get(&self, a: u32) -> Result<&QSeries, MonsterError> {
        match self.members.get(&a) {
            Some(s) => Ok(s),
            None if self.self_replicating => Ok(self.base()),
            None => Err(MonsterError::MissingReplicate(a)),
        }
    }

    pub fn set(&mut self, a: u32, s: QSeries) {
        self.members.insert(a, s);
    }
}

/// Coefficients of P_m, constant term first.
pub fn faber_polynomial(f: &QSeries, m: u32) -> Result<Vec<BigInt>, MonsterError> {
    if f.depth() < m as u64 {
        return Err(MonsterError::InsufficientDepth { needed: m as u64, depth: f.depth() });
    }
    let m = m as usize;
    if m == 0 {
        return Ok(vec![BigInt::one()]);
    }
    // exponents −m..=m, index = exponent + m; one exponent of accuracy is lost
    // at the top per multiplication, so exponents ≤ 0 stay exact
    let mi = m as i64;
    let width = 2 * m + 1;
    let mul = |a: &[BigInt]| -> Result<Vec<BigInt>, MonsterError> {
        let mut out = vec![BigInt::zero(); width];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let ei = i as i64 - mi;
            if ei - 1 >= -mi {
                out[(ei - 1 + mi) as usize] += x;
            }
            for n in 1..=(mi - ei).min(mi) {
                out[(ei + n + mi) as usize] += x * f.f(n)?;
            }
        }
        Ok(out)
    };
    let mut powers: Vec<Vec<BigInt>> = Vec::with_capacity(m + 1);
    let mut one = vec![BigInt::zero(); width];
    one[m] = BigInt::one();
    powers.push(one);
    for k in 1..=m {
        let next = mul(&powers[k - 1])?;
        powers.push(next);
    }
    let mut p = vec![BigInt::zero(); m + 1];
    p[m] = BigInt::one();
    let mut residual = powers[m].clone();
    for j in (0..m).rev() {
        let c = residual[m - j].clone();
        if c.is_zero() {
            continue;
        }
        p[j] -= &c;
        for (r, x) in residual.iter_mut().zip(&powers[j]) {
            *r -= &c * x;
        }
    }
    Ok(p)
}

fn pq_spec() -> GradingSpec {
    GradingSpec::plain(2)
}

fn pq(i: u32, j: u32) -> Degree {
    Degree::new(vec![i, j], vec![])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplicabilityReport {
    pub holds: bool,
    /// (i, j, product side, 1 − Σ side) at the lowest mismatch.
    pub discrepancy: Option<(u32, u32, Q, Q)>,
}

/// Compares both sides of the product identity on p^i q^j with i + j ≤ box.
pub fn replicability_check(family: &ReplicateFamily, box_bound: u32) -> Result<ReplicabilityReport, MonsterError> {
    let spec = pq_spec();
    let mut log = FormalSeries::zero(&spec, box_bound, Basis::Plain);
    for m in 1..box_bound {
        for n in 1..=box_bound - m {
            for k in 1..=box_bound / (m + n) {
                let c = family.get(k)?.f((m * n) as i64)?;
                if !c.is_zero() {
                    log.add_term(pq(k * m, k * n), -qint(&c) / q(k as i64));
                }
            }
        }
    }
    let lhs = log.exp().expect("plain grading");
    let mut rhs = FormalSeries::one(&spec, box_bound, Basis::Plain);
    let f = family.base();
    for i in 1..box_bound {
        for j in 1..=box_bound - i {
            rhs.add_term(pq(i, j), -qint(&f.f((i + j - 1) as i64)?));
        }
    }
    let d = lhs.first_difference(&rhs);
    Ok(ReplicabilityReport {
        holds: d.is_none(),
        discrepancy: d.map(|(deg, a, b)| (deg.gamma[0], deg.gamma[1], a, b)),
    })
}

/// g¹, g², … given by their supercharacters F_{gᵏ}; the list repeats with the order of g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GFamily {
    pub members: Vec<QSeries>,
}

impl GFamily {
    pub fn identity(f: QSeries) -> Self {
        GFamily { members: vec![f] }
    }

    pub fn order(&self) -> u32 {
        self.members.len() as u32
    }

    pub fn at(&self, k: u32) -> &QSeries {
        &self.members[((k - 1) % self.order()) as usize]
    }
}

/// Witt support (i, j) ↦ f_{gᵏ}(i + j − 1) for i + j ≤ m + n.
fn monster_table(family: &GFamily, m: u32, n: u32) -> Result<PowerTraceTable, MonsterError> {
    let spec = pq_spec();
    let mut t = PowerTraceTable::new(&spec, Some(family.order()));
    for i in 1..=m {
        for j in 1..=n {
            let vals = (1..=family.order())
                .map(|k| family.at(k).f((i + j - 1) as i64).map(|c| qint(&c)))
                .collect::<Result<Vec<_>, _>>()?;
            t.insert(pq(i, j), vals).expect("valid degree");
        }
    }
    Ok(t)
}

/// str(g|𝔏(F)_{(m,n)}) by the Möbius–Witt sum.
pub fn monstrous_supertrace(m: u32, n: u32, family: &GFamily) -> Result<Q, MonsterError> {
    if m == 0 || n == 0 {
        return Err(MonsterError::BadCell);
    }
    if family.members.is_empty() {
        return Err(MonsterError::EmptyFamily);
    }
    let table = monster_table(family, m, n)?;
    Ok(supertrace(&table, &pq(m, n))?)
}

/// Σ_{ad|(m,n)} (1/ad) μ(d) f^{(a)}_{g^d}(mn/(ad)²); `replicates[k-1]` belongs to gᵏ (cyclically).
pub fn monstrous_supertrace_replicable(m: u32, n: u32, replicates: &[ReplicateFamily]) -> Result<Q, MonsterError> {
    if m == 0 || n == 0 {
        return Err(MonsterError::BadCell);
    }
    if replicates.is_empty() {
        return Err(MonsterError::EmptyFamily);
    }
    let g = num_integer::gcd(m, n) as u64;
    let mut total = Q::zero();
    for e in divisors(g) {
        for d in divisors(e) {
            let mu = mobius(d);
            if mu == 0 {
                continue;
            }
            let a = (e / d) as u32;
            let fam = &replicates[((d - 1) % replicates.len() as u64) as usize];
            let idx = (m as u64 * n as u64) / (e * e);
            total += qint(&fam.get(a)?.f(idx as i64)?) * q(mu) / q(e as i64);
        }
    }
    Ok(total)
}

/// Borcherds–Cartan data on {−1, 1, …, depth}, dropping indices with f(i) = 0.
pub fn monster_data(f: &QSeries, depth: u32) -> Result<BorcherdsCartanData, MonsterError> {
    let mut labels = vec![-1i64];
    for i in 1..=depth as i64 {
        if !f.f(i)?.is_zero() {
            labels.push(i);
        }
    }
    let matrix = labels.iter().map(|&i| labels.iter().map(|&j| q(-(i + j))).collect()).collect();
    let mut charge = Vec::new();
    let mut parity = Vec::new();
    for &i in &labels {
        let c = f.f(i)?;
        charge.push(c.abs().try_into().unwrap_or(u64::MAX));
        parity.push(if c.is_negative() { -1 } else { 1 });
    }
    Ok(BorcherdsCartanData {
        indices: labels.iter().map(|i| i.to_string()).collect(),
        symmetrizers: vec![Q::one(); labels.len()],
        matrix,
        charge,
        parity,
    })
}

/// α_{−1} ↦ (1, −1), α_j ↦ (1, j).
pub fn monster_projection(data: &BorcherdsCartanData) -> Projection {
    let images = data
        .indices
        .iter()
        .map(|s| {
            let i: i64 = s.parse().expect("integer labels");
            if i == -1 {
                vec![1, -1]
            } else {
                vec![1, i]
            }
        })
        .collect();
    Projection { images }
}

/// Weight spaces of ⊕ V_J(−α_j) with g acting through f_{gᵏ}(j) on the whole f₋₁-string.
pub fn monster_module_weights(data: &BorcherdsCartanData, family: &GFamily) -> Result<Vec<ModuleWeight>, MonsterError> {
    let n = data.rank();
    let mut out = Vec::new();
    for (pos, s) in data.indices.iter().enumerate() {
        let j: i64 = s.parse().expect("integer labels");
        if j == -1 {
            continue;
        }
        let powers = (1..=family.order()).map(|k| family.at(k).f(j).map(|c| qint(&c))).collect::<Result<Vec<_>, _>>()?;
        for t in 0..j as u32 {
            let mut coords = vec![0u32; n];
            coords[pos] = 1;
            coords[0] = t;
            out.push(ModuleWeight { coords, powers: powers.clone() });
        }
    }
    Ok(out)
}
