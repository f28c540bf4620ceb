//! Brute-force free Lie superalgebras inside the tensor algebra.
//!
//! Graded pieces are spanned by left-normed brackets; their rank is computed
//! exactly. A diagonal group action is scalar on each letter-content block,
//! so traces come from block ranks.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{factorial, pow_q, Q};
use crate::graded_series::{sign_unchecked, Degree, GradingError, GradingSpec};
use crate::linalg::{rank_sparse, SparseVec};

pub const DEFAULT_GUARD: u64 = 60_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error("block with {words} words exceeds the guard of {guard}")]
    GuardExceeded { words: u64, guard: u64 },
    #[error("letter index {0} out of range")]
    NoSuchLetter(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub name: String,
    pub degree: Degree,
    pub eigenvalue: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperAlphabet {
    pub spec: GradingSpec,
    pub letters: Vec<Letter>,
}

impl SuperAlphabet {
    pub fn new(spec: &GradingSpec, letters: Vec<Letter>) -> Result<Self, OracleError> {
        for l in &letters {
            spec.validate(&l.degree)?;
            if l.degree.is_zero_gamma() {
                return Err(GradingError::ZeroGamma.into());
            }
        }
        Ok(SuperAlphabet { spec: spec.clone(), letters })
    }

    pub fn is_odd(&self, i: usize) -> bool {
        sign_unchecked(&self.spec, &self.letters[i].degree) == -1
    }
}

/// Binary bracket tree over letter indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketMonomial {
    Leaf(usize),
    Node(Box<BracketMonomial>, Box<BracketMonomial>),
}

impl BracketMonomial {
    pub fn bracket(a: BracketMonomial, b: BracketMonomial) -> Self {
        BracketMonomial::Node(Box::new(a), Box::new(b))
    }

    /// [[[w₀,w₁],w₂],…]
    pub fn left_normed(word: &[usize]) -> Self {
        let mut t = BracketMonomial::Leaf(word[0]);
        for &x in &word[1..] {
            t = BracketMonomial::bracket(t, BracketMonomial::Leaf(x));
        }
        t
    }

    pub fn mirror(&self) -> Self {
        match self {
            BracketMonomial::Leaf(i) => BracketMonomial::Leaf(*i),
            BracketMonomial::Node(a, b) => BracketMonomial::Node(b.clone(), a.clone()),
        }
    }

    fn leaves(&self, out: &mut Vec<usize>) {
        match self {
            BracketMonomial::Leaf(i) => out.push(*i),
            BracketMonomial::Node(a, b) => {
                a.leaves(out);
                b.leaves(out);
            }
        }
    }
}

pub type TensorVector = BTreeMap<Vec<usize>, BigInt>;

fn odd_count_parity(odd: &[bool], t: &BracketMonomial) -> bool {
    let mut ls = Vec::new();
    t.leaves(&mut ls);
    ls.iter().filter(|&&i| odd[i]).count() % 2 == 1
}

fn expand_with(odd: &[bool], t: &BracketMonomial) -> TensorVector {
    match t {
        BracketMonomial::Leaf(i) => {
            let mut v = TensorVector::new();
            v.insert(vec![*i], BigInt::from(1));
            v
        }
        BracketMonomial::Node(a, b) => {
            let u = expand_with(odd, a);
            let w = expand_with(odd, b);
            let eps: i64 = if odd_count_parity(odd, a) && odd_count_parity(odd, b) { -1 } else { 1 };
            let mut out = TensorVector::new();
            for (x, cx) in &u {
                for (y, cy) in &w {
                    let mut xy = x.clone();
                    xy.extend_from_slice(y);
                    *out.entry(xy).or_insert_with(BigInt::zero) += cx * cy;
                    let mut yx = y.clone();
                    yx.extend_from_slice(x);
                    *out.entry(yx).or_insert_with(BigInt::zero) -= cx * cy * eps;
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        }
    }
}

/// [u,v] = u⊗v − ε·v⊗u with ε = −1 exactly when both sides are odd.
pub fn expand_bracket(alphabet: &SuperAlphabet, tree: &BracketMonomial) -> Result<TensorVector, OracleError> {
    let mut ls = Vec::new();
    tree.leaves(&mut ls);
    if let Some(&bad) = ls.iter().find(|&&i| i >= alphabet.letters.len()) {
        return Err(OracleError::NoSuchLetter(bad));
    }
    let odd: Vec<bool> = (0..alphabet.letters.len()).map(|i| alphabet.is_odd(i)).collect();
    Ok(expand_with(&odd, tree))
}

/// Distinct arrangements of a multiset given as counts.
fn arrangements(counts: &mut Vec<u32>, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if counts.iter().all(|&c| c == 0) {
        out.push(current.clone());
        return;
    }
    for i in 0..counts.len() {
        if counts[i] > 0 {
            counts[i] -= 1;
            current.push(i);
            arrangements(counts, current, out);
            current.pop();
            counts[i] += 1;
        }
    }
}

fn multinomial(counts: &[u32]) -> u64 {
    let n: u32 = counts.iter().sum();
    let mut acc = factorial(n as u64);
    for &c in counts {
        acc /= factorial(c as u64);
    }
    u64::try_from(acc).unwrap_or(u64::MAX)
}

/// Which left-normed brackets span a content block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spanning {
    /// Every arrangement of the content.
    All,
    /// Arrangements starting with the first letter present; these already span.
    FixedFirst,
}

/// Rank of the content block with the given letter counts and parities.
pub fn block_rank(counts: &[u32], odd: &[bool], spanning: Spanning, guard: u64) -> Result<usize, OracleError> {
    let words = multinomial(counts);
    if words > guard {
        return Err(OracleError::GuardExceeded { words, guard });
    }
    let n: u32 = counts.iter().sum();
    if n == 0 {
        return Ok(0);
    }
    let mut seqs = Vec::new();
    let mut c = counts.to_vec();
    match spanning {
        Spanning::All => arrangements(&mut c, &mut Vec::new(), &mut seqs),
        Spanning::FixedFirst => {
            let first = c.iter().position(|&x| x > 0).unwrap();
            c[first] -= 1;
            arrangements(&mut c, &mut vec![first], &mut seqs);
        }
    }
    let mut columns: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut rows = Vec::with_capacity(seqs.len());
    for s in seqs {
        let v = expand_with(odd, &BracketMonomial::left_normed(&s));
        let mut sv = SparseVec::new();
        for (w, c) in v {
            let next = columns.len();
            let col = *columns.entry(w).or_insert(next);
            sv.insert(col, c);
        }
        rows.push(sv);
    }
    Ok(rank_sparse(&rows))
}

/// Letter-count vectors whose total degree is `target`.
fn contents(alphabet: &SuperAlphabet, target: &Degree) -> Vec<Vec<u32>> {
    let spec = &alphabet.spec;
    let mut out = Vec::new();
    fn go(a: &SuperAlphabet, idx: usize, acc: Degree, target: &Degree, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx == a.letters.len() {
            if &acc == target {
                out.push(cur.clone());
            }
            return;
        }
        let d = &a.letters[idx].degree;
        let mut acc = acc;
        let mut m = 0;
        loop {
            cur.push(m);
            go(a, idx + 1, acc.clone(), target, cur, out);
            cur.pop();
            acc = a.spec.add(&acc, d);
            m += 1;
            if acc.gamma.iter().zip(&target.gamma).any(|(x, t)| x > t) {
                break;
            }
        }
    }
    go(alphabet, 0, spec.zero(), target, &mut Vec::new(), &mut out);
    out
}

/// Block key: rank depends only on the multiset of (parity, count).
fn block_key(counts: &[u32], odd: &[bool]) -> (Vec<u32>, Vec<bool>) {
    let mut pairs: Vec<(bool, u32)> = counts.iter().zip(odd).filter(|(c, _)| **c > 0).map(|(c, o)| (*o, *c)).collect();
    pairs.sort();
    (pairs.iter().map(|p| p.1).collect(), pairs.iter().map(|p| p.0).collect())
}

type RankKey = (Vec<u32>, Vec<bool>);

fn rank_cache() -> &'static Mutex<HashMap<RankKey, usize>> {
    static CACHE: OnceLock<Mutex<HashMap<RankKey, usize>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Block ranks are shared across alphabets and actions within a process.
fn cached_rank(counts: &[u32], odd: &[bool], guard: u64) -> Result<usize, OracleError> {
    let key = (counts.to_vec(), odd.to_vec());
    if let Some(&r) = rank_cache().lock().unwrap().get(&key) {
        return Ok(r);
    }
    let r = block_rank(counts, odd, Spanning::FixedFirst, guard)?;
    rank_cache().lock().unwrap().insert(key, r);
    Ok(r)
}

fn block_ranks(alphabet: &SuperAlphabet, target: &Degree, guard: u64) -> Result<Vec<(Vec<u32>, usize)>, OracleError> {
    alphabet.spec.validate(target)?;
    if target.is_zero_gamma() {
        return Err(GradingError::ZeroGamma.into());
    }
    let odd: Vec<bool> = (0..alphabet.letters.len()).map(|i| alphabet.is_odd(i)).collect();
    let cs = contents(alphabet, target);
    let mut keys: Vec<(Vec<u32>, Vec<bool>)> = cs.iter().map(|c| block_key(c, &odd)).collect();
    keys.sort();
    keys.dedup();
    let ranks: Result<Vec<usize>, OracleError> = keys.par_iter().map(|(c, o)| cached_rank(c, o, guard)).collect();
    let table: BTreeMap<(Vec<u32>, Vec<bool>), usize> = keys.into_iter().zip(ranks?).collect();
    Ok(cs.into_iter().map(|c| {
        let r = table[&block_key(&c, &odd)];
        (c, r)
    }).collect())
}

/// dim of the free Lie superalgebra at `target`.
pub fn graded_dimension(alphabet: &SuperAlphabet, target: &Degree, guard: u64) -> Result<u64, OracleError> {
    Ok(block_ranks(alphabet, target, guard)?.iter().map(|(_, r)| *r as u64).sum())
}

/// ψ(target)·trace of the diagonal action at `target`.
pub fn graded_trace(alphabet: &SuperAlphabet, target: &Degree, guard: u64) -> Result<Q, OracleError> {
    let mut total = Q::zero();
    for (c, r) in block_ranks(alphabet, target, guard)? {
        if r == 0 {
            continue;
        }
        let mut ev = Q::from_integer((r as i64).into());
        for (i, &m) in c.iter().enumerate() {
            ev *= pow_q(&alphabet.letters[i].eigenvalue, m as u64);
        }
        total += ev;
    }
    if sign_unchecked(&alphabet.spec, target) == -1 {
        total = -total;
    }
    Ok(total)
}

/// Number of Lyndon words with the given letter counts.
pub fn lyndon_count(counts: &[u32]) -> u64 {
    let mut seqs = Vec::new();
    arrangements(&mut counts.to_vec(), &mut Vec::new(), &mut seqs);
    seqs.iter()
        .filter(|w| (1..w.len()).all(|i| {
            let rot: Vec<usize> = w[i..].iter().chain(&w[..i]).cloned().collect();
            **w < rot
        }))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn alphabet(even: usize, odd: usize, eigen: &[i64]) -> SuperAlphabet {
        let spec = GradingSpec::super_z2(1);
        let mut letters = Vec::new();
        for i in 0..even + odd {
            letters.push(Letter {
                name: format!("x{i}"),
                degree: Degree::new(vec![1], vec![(i >= even) as i64]),
                eigenvalue: q(*eigen.get(i).unwrap_or(&1)),
            });
        }
        SuperAlphabet::new(&spec, letters).unwrap()
    }

    fn deg(n: u32, a: i64) -> Degree {
        Degree::new(vec![n], vec![a])
    }

    #[test]
    fn bracket_examples() {
        let ev = alphabet(2, 0, &[]);
        let v = expand_bracket(&ev, &BracketMonomial::left_normed(&[0, 1])).unwrap();
        assert_eq!(v[&vec![0, 1]], BigInt::from(1));
        assert_eq!(v[&vec![1, 0]], BigInt::from(-1));

        let od = alphabet(0, 1, &[]);
        let v = expand_bracket(&od, &BracketMonomial::left_normed(&[0, 0])).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[&vec![0, 0]], BigInt::from(2));
        let t = BracketMonomial::bracket(BracketMonomial::Leaf(0), BracketMonomial::left_normed(&[0, 0]));
        assert!(expand_bracket(&od, &t).unwrap().is_empty());
    }

    #[test]
    fn mirror_sign() {
        let a = alphabet(1, 2, &[]);
        let trees = [
            BracketMonomial::left_normed(&[0, 1]),
            BracketMonomial::left_normed(&[1, 2]),
            BracketMonomial::bracket(BracketMonomial::left_normed(&[0, 1]), BracketMonomial::left_normed(&[2, 1])),
        ];
        for t in trees {
            let v = expand_bracket(&a, &t).unwrap();
            let m = expand_bracket(&a, &t.mirror()).unwrap();
            let BracketMonomial::Node(l, r) = &t else { unreachable!() };
            let odd: Vec<bool> = (0..3).map(|i| a.is_odd(i)).collect();
            let both_odd = odd_count_parity(&odd, l) && odd_count_parity(&odd, r);
            for (w, c) in &v {
                let expected = if both_odd { c.clone() } else { -c.clone() };
                assert_eq!(m.get(w).cloned().unwrap_or_default(), expected);
            }
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(graded_dimension(&alphabet(2, 0, &[]), &deg(2, 0), DEFAULT_GUARD).unwrap(), 1);
        assert_eq!(graded_dimension(&alphabet(0, 1, &[]), &deg(2, 0), DEFAULT_GUARD).unwrap(), 1);
        assert_eq!(graded_dimension(&alphabet(0, 1, &[]), &deg(3, 1), DEFAULT_GUARD).unwrap(), 0);
    }

    #[test]
    fn trace_examples() {
        let a = alphabet(2, 0, &[3, 5]);
        assert_eq!(graded_trace(&a, &deg(2, 0), DEFAULT_GUARD).unwrap(), q(15));
        let b = alphabet(1, 1, &[]);
        assert_eq!(graded_trace(&b, &deg(3, 1), DEFAULT_GUARD).unwrap(), -q(graded_dimension(&b, &deg(3, 1), DEFAULT_GUARD).unwrap() as i64));
    }

    #[test]
    fn fixed_first_spans_like_all() {
        for counts in [vec![2, 1], vec![2, 2], vec![3, 1, 1], vec![1, 2, 2]] {
            for mask in 0..(1u32 << counts.len()) {
                let odd: Vec<bool> = (0..counts.len()).map(|i| mask >> i & 1 == 1).collect();
                let all = block_rank(&counts, &odd, Spanning::All, DEFAULT_GUARD).unwrap();
                let fixed = block_rank(&counts, &odd, Spanning::FixedFirst, DEFAULT_GUARD).unwrap();
                assert_eq!(all, fixed, "{counts:?} {odd:?}");
            }
        }
    }

    #[test]
    fn lyndon_agrees_for_even_letters() {
        for counts in [vec![3, 2], vec![2, 2, 1], vec![4, 2], vec![1, 1, 1, 1]] {
            let odd = vec![false; counts.len()];
            let r = block_rank(&counts, &odd, Spanning::All, DEFAULT_GUARD).unwrap();
            assert_eq!(r as u64, lyndon_count(&counts), "{counts:?}");
        }
    }

    #[test]
    fn guard_trips() {
        assert!(matches!(block_rank(&[5, 5, 5], &[false; 3], Spanning::All, 1000), Err(OracleError::GuardExceeded { .. })));
    }
}
