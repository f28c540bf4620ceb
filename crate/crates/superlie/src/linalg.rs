//! Exact rank of integer vectors by fraction-free elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sparse integer vector, column → nonzero entry.
pub type SparseVec = BTreeMap<usize, BigInt>;

/// Incremental row echelon form over ℤ.
///
/// Rows are kept primitive (content 1) so entries stay small; every
/// elimination step is `p[c]·v − v[c]·p`, which never leaves ℤ.
#[derive(Default, Clone, Debug)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` and keeps it if it is independent. Returns whether it was.
    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        v.retain(|_, x| !x.is_zero());
        loop {
            let Some((&lead, _)) = v.iter().next() else {
                return false;
            };
            match self.pivots.get(&lead) {
                None => {
                    make_primitive(&mut v);
                    self.pivots.insert(lead, v);
                    return true;
                }
                Some(p) => {
                    let a = p[&lead].clone();
                    let b = v[&lead].clone();
                    let g = a.gcd(&b);
                    let (a, b) = (&a / &g, &b / &g);
                    let mut next = SparseVec::new();
                    for (c, x) in &v {
                        next.insert(*c, x * &a);
                    }
                    for (c, x) in p {
                        let e = next.entry(*c).or_insert_with(BigInt::zero);
                        *e -= x * &b;
                    }
                    next.retain(|_, x| !x.is_zero());
                    make_primitive(&mut next);
                    v = next;
                }
            }
        }
    }
}

fn make_primitive(v: &mut SparseVec) {
    let mut g = BigInt::zero();
    for x in v.values() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if let Some(first) = v.values().next() {
        if first.is_negative() {
            g = -g;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for x in v.values_mut() {
            *x = &*x / &g;
        }
    }
}

/// Small-integer elimination; `None` as soon as an entry leaves i128.
#[derive(Default, Clone, Debug)]
pub struct SmallEchelon {
    pivots: std::collections::HashMap<usize, Vec<(usize, i128)>>,
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

impl SmallEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `v` must be sorted by column with nonzero entries.
    pub fn insert(&mut self, mut v: Vec<(usize, i128)>) -> Option<bool> {
        loop {
            let Some(&(lead, b)) = v.first() else {
                return Some(false);
            };
            let Some(p) = self.pivots.get(&lead) else {
                primitive_small(&mut v);
                self.pivots.insert(lead, v);
                return Some(true);
            };
            let a = p[0].1;
            let g = gcd_i128(a, b);
            let (a, b) = (a / g, b / g);
            let mut next = Vec::with_capacity(v.len() + p.len());
            let (mut i, mut j) = (0, 0);
            while i < v.len() || j < p.len() {
                let ci = v.get(i).map(|e| e.0).unwrap_or(usize::MAX);
                let cj = p.get(j).map(|e| e.0).unwrap_or(usize::MAX);
                let (col, x) = if ci < cj {
                    i += 1;
                    (ci, v[i - 1].1.checked_mul(a)?)
                } else if cj < ci {
                    j += 1;
                    (cj, p[j - 1].1.checked_mul(b)?.checked_neg()?)
                } else {
                    i += 1;
                    j += 1;
                    (ci, v[i - 1].1.checked_mul(a)?.checked_sub(p[j - 1].1.checked_mul(b)?)?)
                };
                if x != 0 {
                    next.push((col, x));
                }
            }
            primitive_small(&mut next);
            v = next;
        }
    }
}

fn primitive_small(v: &mut [(usize, i128)]) {
    let mut g = 0;
    for e in v.iter() {
        g = gcd_i128(g, e.1);
        if g == 1 {
            return;
        }
    }
    if g > 1 {
        for e in v.iter_mut() {
            e.1 /= g;
        }
    }
}

/// Rank of sparse integer rows: small-integer pass first, big integers on overflow.
pub fn rank_sparse(rows: &[SparseVec]) -> usize {
    let mut small = SmallEchelon::new();
    let mut ok = true;
    for r in rows {
        let mut v = Vec::with_capacity(r.len());
        for (c, x) in r {
            match i128::try_from(x) {
                Ok(x) if x != 0 => v.push((*c, x)),
                Ok(_) => {}
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || small.insert(v).is_none() {
            ok = false;
            break;
        }
    }
    if ok {
        return small.rank();
    }
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r.clone());
    }
    e.rank()
}

/// Rank of a list of dense integer rows.
pub fn rank_dense(rows: &[Vec<BigInt>]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        let v: SparseVec = r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        e.insert(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank_dense(&[row(&[1, 2]), row(&[2, 4])]), 1);
        assert_eq!(rank_dense(&[row(&[1, 2, 3]), row(&[4, 5, 6]), row(&[7, 8, 9])]), 2);
        assert_eq!(rank_dense(&[row(&[0, 0]), row(&[0, 0])]), 0);
        assert_eq!(rank_dense(&[row(&[2, 0]), row(&[0, 3]), row(&[5, 7])]), 2);
    }

    #[test]
    fn overflow_falls_back() {
        let big: BigInt = BigInt::from(i128::MAX) * BigInt::from(4);
        let rows: Vec<SparseVec> = vec![
            [(0, big.clone()), (1, BigInt::from(1))].into_iter().collect(),
            [(0, BigInt::from(1)), (1, big.clone())].into_iter().collect(),
            [(0, big.clone() + 1), (1, big.clone() + 1)].into_iter().collect(),
        ];
        assert_eq!(rank_sparse(&rows), 2);
        let small: Vec<SparseVec> = vec![
            [(0, BigInt::from(3)), (2, BigInt::from(1))].into_iter().collect(),
            [(0, BigInt::from(6)), (2, BigInt::from(2))].into_iter().collect(),
        ];
        assert_eq!(rank_sparse(&small), 1);
    }
}
