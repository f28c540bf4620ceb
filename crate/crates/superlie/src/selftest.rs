//! The acceptance suite as data: each check yields report lines.

use std::collections::BTreeMap;
use std::error::Error;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::arith::{factorial, q, qfrac, qint, render, Q};
use crate::freelie::{graded_dimension, graded_trace, Letter, SuperAlphabet, DEFAULT_GUARD};
use crate::gkm::{
    self, gkm_supertrace_conjectural, gkm_supertrace_free_case, identity_module_weights, kostant_homology,
    positive_real_roots, BorcherdsCartanData, MultiplicityTable,
};
use crate::gl_decomp::{closed_form, decompose, natural_alphabet, verify_trace_identity};
use crate::graded_series::{Degree, GradingSpec};
use crate::monstrous::{
    monster_data, monster_projection, monstrous_supertrace, monstrous_supertrace_replicable, replicability_check,
    GFamily, QSeries, ReplicateFamily,
};
use crate::orbit::{
    brute_force_trace, finite_adjoint_twining_check, fixed_point_sdim, fold, phi_map, sigma_power_trace,
    symmetric_form_check, orbit_multiplicity_check, total_fixed_dimension, DiagramAutomorphism, FiniteRootModel, OrbitTables,
};
use crate::symfunc::{
    lr_coefficient, mn_character, power_sum, power_sum_product, schur_expand, schur_poly, MultivarPolynomial, Partition,
};
use crate::witt::{denominator_check, lie_table, single_degree_closed_form, super_vs_plain, supertrace, PowerTraceTable};

type Outcome = Result<(bool, String), Box<dyn Error + Send + Sync>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportLine {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub conjectural: bool,
    pub detail: String,
}

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "witt supertrace against the brute-force oracle"),
    (2, "single-degree closed form"),
    (3, "super traces from plain free Lie traces"),
    (4, "symmetric functions"),
    (5, "gl(k,l) decomposition"),
    (6, "denominator identities"),
    (7, "monstrous Lie superalgebras"),
    (8, "folding and orbit algebras"),
    (9, "conjecture gating"),
];

fn first_mismatch<T: std::fmt::Debug>(d: &Option<T>) -> String {
    match d {
        Some(v) => format!("first mismatch {v:?}"),
        None => "no mismatch".into(),
    }
}

fn line(criterion: u8, name: &str, conjectural: bool, outcome: Outcome) -> ReportLine {
    let (passed, detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    ReportLine { criterion, name: name.to_string(), passed, conjectural, detail }
}

/// Runs the given criteria (all of them when empty), in order.
pub fn run(criteria: &[u8]) -> Vec<ReportLine> {
    let all: Vec<u8> = if criteria.is_empty() { (1..=9).collect() } else { criteria.to_vec() };
    all.into_iter().flat_map(criterion).collect()
}

pub fn criterion(n: u8) -> Vec<ReportLine> {
    match n {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        _ => vec![line(n, "unknown criterion", false, Ok((false, format!("no criterion {n}"))))],
    }
}

/// Per-criterion verdicts: a criterion passes when all its lines do.
pub fn summary(lines: &[ReportLine]) -> Vec<(u8, bool)> {
    let mut out: BTreeMap<u8, bool> = BTreeMap::new();
    for l in lines {
        *out.entry(l.criterion).or_insert(true) &= l.passed;
    }
    out.into_iter().collect()
}

// free configurations shared by the Witt and denominator checks

const ALPHABETS: [(usize, usize); 6] = [(1, 0), (0, 1), (2, 0), (1, 1), (2, 1), (2, 2)];

fn actions() -> Vec<(&'static str, Vec<Q>)> {
    vec![
        ("identity", vec![q(1); 4]),
        ("diag(2,-1,3,1/2)", vec![q(2), q(-1), q(3), qfrac(1, 2)]),
        ("diag(-1,1/3,-2,5)", vec![q(-1), qfrac(1, 3), q(-2), q(5)]),
    ]
}

fn split(r: usize, s: usize, ev: &[Q]) -> (Vec<Q>, Vec<Q>) {
    (ev[..r].to_vec(), ev[r..r + s].to_vec())
}

fn free_table(x: &[Q], y: &[Q], depth: u32) -> Result<PowerTraceTable, Box<dyn Error + Send + Sync>> {
    let mut letters: Vec<(Degree, Q)> = x.iter().map(|e| (Degree::new(vec![1], vec![0]), e.clone())).collect();
    letters.extend(y.iter().map(|e| (Degree::new(vec![1], vec![1]), e.clone())));
    Ok(PowerTraceTable::diagonal(&GradingSpec::super_z2(1), &letters, depth)?)
}

fn c1() -> Vec<ReportLine> {
    let mut out = Vec::new();
    for (r, s) in ALPHABETS {
        for (name, ev) in actions() {
            let outcome = (|| -> Outcome {
                let (x, y) = split(r, s, &ev);
                let table = free_table(&x, &y, 8)?;
                let alphabet = natural_alphabet(&x, &y);
                let mut count = 0;
                for n in 1..=8u32 {
                    for a in 0..2i64 {
                        let d = Degree::new(vec![n], vec![a]);
                        let w = supertrace(&table, &d)?;
                        let o = graded_trace(&alphabet, &d, DEFAULT_GUARD)?;
                        if w != o {
                            return Ok((false, format!("degree {d}: witt {} oracle {}", render(&w), render(&o))));
                        }
                        count += 1;
                    }
                }
                Ok((true, format!("{count} degrees agree")))
            })();
            out.push(line(1, &format!("(r,s)=({r},{s}) {name}"), false, outcome));
        }
    }
    out
}

fn c2() -> Vec<ReportLine> {
    let mut out = Vec::new();
    // t_g = 4 + 1 = 5 on the even part, t_h = 2 on the odd part
    let x = vec![q(4), q(1)];
    let y = vec![q(2)];
    let outcome = (|| -> Outcome {
        let table = free_table(&x, &y, 8)?;
        let alphabet = natural_alphabet(&x, &y);
        let powers: Vec<Q> = (1..=8u32).map(|k| table.get(k, &Degree::new(vec![1], vec![0])).unwrap()
            + table.get(k, &Degree::new(vec![1], vec![1])).unwrap()).collect();
        if powers[0] != q(3) {
            return Ok((false, format!("t_g - t_h = {}", render(&powers[0]))));
        }
        let mut values = Vec::new();
        for n in 1..=8u32 {
            let closed = single_degree_closed_form(&powers, n)?;
            let d = |a: i64| Degree::new(vec![n], vec![a]);
            let witt = supertrace(&table, &d(0))? + supertrace(&table, &d(1))?;
            let oracle = graded_trace(&alphabet, &d(0), DEFAULT_GUARD)? + graded_trace(&alphabet, &d(1), DEFAULT_GUARD)?;
            if closed != witt || witt != oracle {
                return Ok((false, format!("n={n}: closed {} witt {} oracle {}", render(&closed), render(&witt), render(&oracle))));
            }
            values.push(render(&closed));
        }
        Ok((true, format!("str(L_n), n=1..8: {}", values.join(" "))))
    })();
    out.push(line(2, "t_g=5 t_h=2, closed form with power traces = witt = oracle", false, outcome));

    // the constant-trace form (t_g - t_h)^{n/d} is exact for the identity
    let outcome = (|| -> Outcome {
        let (x, y) = (vec![q(1), q(1)], vec![q(1)]);
        let table = free_table(&x, &y, 8)?;
        let alphabet = natural_alphabet(&x, &y);
        let constant = vec![q(1); 8];
        for n in 1..=8u32 {
            let closed = single_degree_closed_form(&constant, n)?;
            let d = |a: i64| Degree::new(vec![n], vec![a]);
            let witt = supertrace(&table, &d(0))? + supertrace(&table, &d(1))?;
            let oracle = graded_trace(&alphabet, &d(0), DEFAULT_GUARD)? + graded_trace(&alphabet, &d(1), DEFAULT_GUARD)?;
            if closed != witt || witt != oracle {
                return Ok((false, format!("n={n}: closed {} witt {} oracle {}", render(&closed), render(&witt), render(&oracle))));
            }
        }
        Ok((true, "identity, t_g - t_h = 1, n=1..8".into()))
    })();
    out.push(line(2, "identity, constant-trace closed form = witt = oracle", false, outcome));
    out
}

fn c3() -> Vec<ReportLine> {
    let mut out = Vec::new();
    let spec = GradingSpec::super_z2(1);
    // x even at weight 1, y odd at weight 2
    for (name, ex, ey) in [("identity", q(1), q(1)), ("diag(2,-3)", q(2), q(-3)), ("diag(1/2,3)", qfrac(1, 2), q(3))] {
        let outcome = (|| -> Outcome {
            let dx = Degree::new(vec![1], vec![0]);
            let dy = Degree::new(vec![2], vec![1]);
            let table = PowerTraceTable::diagonal(&spec, &[(dx.clone(), ex.clone()), (dy.clone(), ey.clone())], 16)?;
            let alphabet = SuperAlphabet::new(
                &spec,
                vec![
                    Letter { name: "x".into(), degree: dx, eigenvalue: ex.clone() },
                    Letter { name: "y".into(), degree: dy, eigenvalue: ey.clone() },
                ],
            )?;
            let mut count = 0;
            for n in 1..=8u32 {
                for a in 0..2i64 {
                    let d = Degree::new(vec![n], vec![a]);
                    let bridge = super_vs_plain(&table, &d)?;
                    let direct = supertrace(&table, &d)?;
                    let oracle = graded_trace(&alphabet, &d, DEFAULT_GUARD)?;
                    if bridge != direct || direct != oracle {
                        return Ok((false, format!("{d}: bridge {} direct {} oracle {}", render(&bridge), render(&direct), render(&oracle))));
                    }
                    count += 1;
                }
            }
            Ok((true, format!("{count} degrees agree")))
        })();
        out.push(line(3, &format!("x:(1,0) y:(2,1) {name}"), false, outcome));
    }
    out
}

type TSeries = Vec<MultivarPolynomial>;

fn tmul(a: &TSeries, b: &TSeries, top: usize) -> TSeries {
    let mut out = vec![MultivarPolynomial::zero(a[0].nx, 0); top + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= top && !x.is_zero() && !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    out
}

fn monomials(nvars: usize, degree: u32, squarefree: bool) -> MultivarPolynomial {
    let mut p = MultivarPolynomial::zero(nvars, 0);
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, nvars: usize, sf: bool, p: &mut MultivarPolynomial) {
        if i == nvars {
            if left == 0 {
                p.add_term(cur.clone(), q(1));
            }
            return;
        }
        let max = if sf { left.min(1) } else { left };
        for e in 0..=max {
            cur.push(e);
            go(i + 1, left - e, cur, nvars, sf, p);
            cur.pop();
        }
    }
    go(0, degree, &mut Vec::new(), nvars, squarefree, &mut p);
    p
}

fn lemma_power_sums(nvars: usize, top: usize) -> Outcome {
    let zero = MultivarPolynomial::zero(nvars, 0);
    let mut x: TSeries = vec![zero.clone(); top + 1];
    for r in 1..=top {
        x[r] = power_sum(r as u32, nvars).scale(&qfrac(1, r as i64));
    }
    let mut exp: TSeries = vec![zero.clone(); top + 1];
    exp[0] = MultivarPolynomial::one(nvars, 0);
    let mut term = exp.clone();
    for k in 1..=top {
        term = tmul(&term, &x, top).iter().map(|p| p.scale(&qfrac(1, k as i64))).collect();
        for i in 0..=top {
            exp[i] = exp[i].add(&term[i]);
        }
    }
    let h: TSeries = (0..=top).map(|n| monomials(nvars, n as u32, false)).collect();
    let e: TSeries = (0..=top)
        .map(|n| monomials(nvars, n as u32, true).scale(&q(if n % 2 == 0 { 1 } else { -1 })))
        .collect();
    for n in 0..=top {
        if exp[n] != h[n] {
            return Ok((false, format!("exp(sum p_r t^r/r) differs from h_{n}")));
        }
    }
    let prod = tmul(&h, &e, top);
    for (n, p) in prod.iter().enumerate() {
        let expected = if n == 0 { MultivarPolynomial::one(nvars, 0) } else { zero.clone() };
        if *p != expected {
            return Ok((false, format!("H(t)E(-t) differs from 1 at t^{n}")));
        }
    }
    Ok((true, format!("{nvars} variables to degree {top}")))
}

fn c4() -> Vec<ReportLine> {
    let mut out = vec![line(4, "exp of power sums = complete = inverse elementary", false, lemma_power_sums(4, 10))];

    let outcome = (|| -> Outcome {
        let mut count = 0;
        for n in 1..=6u32 {
            let nvars = n as usize;
            for rho in Partition::all(n) {
                let lhs = power_sum_product(&rho, nvars);
                let mut rhs = MultivarPolynomial::zero(nvars, 0);
                for lam in Partition::all(n) {
                    let chi = mn_character(&lam, &rho)?;
                    if chi != 0 {
                        rhs = rhs.add(&schur_poly(&lam, nvars).scale(&q(chi)));
                    }
                }
                if lhs != rhs {
                    return Ok((false, format!("p_{rho} mismatch")));
                }
                count += 1;
            }
        }
        Ok((true, format!("{count} power-sum products expanded")))
    })();
    out.push(line(4, "p_rho = sum chi S_lambda, n <= 6", false, outcome));

    let outcome = (|| -> Outcome {
        let mut count = 0;
        for a in 0..=6u32 {
            for b in 0..=6 - a {
                if a + b == 0 {
                    continue;
                }
                for mu in Partition::all(a) {
                    for nu in Partition::all(b) {
                        for lam in Partition::all(a + b) {
                            let nvars = (lam.len() + 1).max(4);
                            let prod = schur_poly(&mu, nvars).mul(&schur_poly(&nu, nvars));
                            let coeff = schur_expand(&prod).get(&lam).cloned().unwrap_or_else(|| q(0));
                            let lr = lr_coefficient(&lam, &mu, &nu);
                            if coeff != q(lr as i64) {
                                return Ok((false, format!("N^{lam}_{{{mu},{nu}}}: rule {lr} product {}", render(&coeff))));
                            }
                            count += 1;
                        }
                    }
                }
            }
        }
        Ok((true, format!("{count} coefficients agree")))
    })();
    out.push(line(4, "LR strict expansions = Schur products, |lambda| <= 6", false, outcome));

    let outcome = (|| -> Outcome {
        for n in 1..=5u32 {
            let parts = Partition::all(n);
            for l in &parts {
                for m in &parts {
                    let mut s = q(0);
                    for rho in &parts {
                        s += q(mn_character(l, rho)? * mn_character(m, rho)?) / qint(&rho.z());
                    }
                    let expected = if l == m { q(1) } else { q(0) };
                    if s != expected {
                        return Ok((false, format!("<chi_{l}, chi_{m}> = {}", render(&s))));
                    }
                }
            }
        }
        Ok((true, format!("orthonormal for n <= 5 ({} = 5!)", factorial(5))))
    })();
    out.push(line(4, "character orthogonality, n <= 5", false, outcome));
    out
}

fn c5() -> Vec<ReportLine> {
    let mut out = Vec::new();
    let mut rng = StdRng::seed_from_u64(55);
    for (k, l) in [(1usize, 1usize), (2, 1), (2, 2)] {
        let points: Vec<(Vec<Q>, Vec<Q>)> = (0..3)
            .map(|_| {
                let mut pick = || qfrac(rng.gen_range(-7..=7), rng.gen_range(1..=4));
                ((0..k).map(|_| pick()).collect(), (0..l).map(|_| pick()).collect())
            })
            .collect();
        let outcome = (|| -> Outcome {
            for n in 1..=5u32 {
                if !verify_trace_identity(k, l, n, &points)? {
                    return Ok((false, format!("n={n} fails")));
                }
            }
            let shown: Vec<String> = points
                .iter()
                .map(|(x, y)| {
                    let f = |v: &Vec<Q>| v.iter().map(render).collect::<Vec<_>>().join(",");
                    format!("({};{})", f(x), f(y))
                })
                .collect();
            Ok((true, format!("n=1..5 at {}", shown.join(" "))))
        })();
        out.push(line(5, &format!("trace identity gl({k},{l})"), false, outcome));
    }
    let outcome = (|| -> Outcome {
        let mut count = 0;
        for (k, l) in [(2usize, 1usize), (3, 0), (3, 2), (7, 0), (7, 1)] {
            for n in 1..=7u32 {
                let dec = decompose(k, l, n)?;
                for (lam, &c) in &dec.entries {
                    if lam.len() <= k {
                        if closed_form(lam) != q(c as i64) {
                            return Ok((false, format!("gl({k},{l}) {lam}: recursion {c} closed {}", render(&closed_form(lam)))));
                        }
                        count += 1;
                    }
                }
            }
        }
        Ok((true, format!("{count} multiplicities agree")))
    })();
    out.push(line(5, "closed form = recursion, n <= 7", false, outcome));
    out
}

fn c6() -> Vec<ReportLine> {
    let mut out = Vec::new();
    let outcome = (|| -> Outcome {
        let mut count = 0;
        for (r, s) in ALPHABETS {
            for (name, ev) in actions() {
                let (x, y) = split(r, s, &ev);
                let h = free_table(&x, &y, 8)?;
                let lie = lie_table(&h, 8)?;
                let rep = denominator_check(&lie, &h, 8)?;
                if !rep.holds {
                    return Ok((false, format!("({r},{s}) {name}: {:?}", rep.discrepancy)));
                }
                count += 1;
            }
        }
        Ok((true, format!("{count} free configurations, bound 8")))
    })();
    out.push(line(6, "free denominator identity round trip", false, outcome));

    for n in [1usize, 2] {
        let outcome = (|| -> Outcome {
            let data = BorcherdsCartanData::type_a(n);
            let mut m = MultiplicityTable::new();
            for root in positive_real_roots(&data, 8, 100)? {
                m.insert(root.iter().map(|&x| x as u32).collect(), q(1));
            }
            let rep = gkm::denominator_check(&data, &m, 8)?;
            Ok((rep.holds, format!("{} positive roots, bound 8, {}", m.len(), first_mismatch(&rep.discrepancy))))
        })();
        out.push(line(6, &format!("A{n} product = Weyl sum"), false, outcome));
    }

    let outcome = (|| -> Outcome {
        let data = BorcherdsCartanData {
            indices: vec!["1".into()],
            matrix: vec![vec![q(-2)]],
            symmetrizers: vec![q(1)],
            charge: vec![1],
            parity: vec![-1],
        };
        let spec = GradingSpec::super_z2(1);
        let alphabet = SuperAlphabet::new(
            &spec,
            vec![Letter { name: "f".into(), degree: Degree::new(vec![1], vec![1]), eigenvalue: q(1) }],
        )?;
        let mut m = MultiplicityTable::new();
        let mut dims = Vec::new();
        for n in 1..=8u32 {
            let d = graded_dimension(&alphabet, &Degree::new(vec![n], vec![(n % 2) as i64]), DEFAULT_GUARD)?;
            dims.push(d.to_string());
            if d > 0 {
                m.insert(vec![n], q(d as i64));
            }
        }
        let rep = gkm::denominator_check(&data, &m, 8)?;
        Ok((rep.holds, format!("a=-2, oracle dims {}, {}", dims.join(","), first_mismatch(&rep.discrepancy))))
    })();
    out.push(line(6, "rank-1 odd imaginary, product = Weyl sum", false, outcome));
    out
}

fn c7() -> Vec<ReportLine> {
    let j = QSeries::j_function();
    let mut out = Vec::new();
    let outcome = (|| -> Outcome {
        let rep = replicability_check(&ReplicateFamily::self_replicating(j.clone()), 8)?;
        Ok((rep.holds, format!("box 8, {}", first_mismatch(&rep.discrepancy))))
    })();
    out.push(line(7, "J replicable", false, outcome));
    let outcome = (|| -> Outcome {
        let direct = monstrous_supertrace(2, 2, &GFamily::identity(j.clone()))?;
        let (c1, c3) = (qint(&j.f(1)?), qint(&j.f(3)?));
        let closed = &c3 + (&c1 * &c1 - &c1) / q(2);
        let rep = monstrous_supertrace_replicable(2, 2, &[ReplicateFamily::self_replicating(j.clone())])?;
        Ok((direct == closed && closed == rep, format!("{} {} {}", render(&direct), render(&closed), render(&rep))))
    })();
    out.push(line(7, "str at (2,2): witt, closed, replicable", false, outcome));
    out
}

fn c8() -> Vec<ReportLine> {
    let mut out = Vec::new();
    for (n, cycle, expected) in [(3usize, "1 3", vec![vec![2, -1], vec![-2, 2]]), (2, "1 2", vec![vec![2]])] {
        let outcome = (|| -> Outcome {
            let f = fold(&BorcherdsCartanData::type_a(n), &DiagramAutomorphism::parse(n, cycle)?)?;
            let want: Vec<Vec<Q>> = expected.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
            let shown: Vec<String> =
                f.matrix.iter().map(|r| format!("[{}]", r.iter().map(render).collect::<Vec<_>>().join(","))).collect();
            Ok((f.matrix == want, format!("[{}]", shown.join(","))))
        })();
        out.push(line(8, &format!("fold A{n} ({cycle})"), false, outcome));
    }
    let mut rng = StdRng::seed_from_u64(81);
    for (n, cycle) in [(3usize, "1 3"), (2, "1 2")] {
        let outcome = (|| -> Outcome {
            let d = BorcherdsCartanData::type_a(n);
            let s = DiagramAutomorphism::parse(n, cycle)?;
            let f = fold(&d, &s)?;
            for _ in 0..100 {
                let mut pick = || {
                    let per: Vec<i64> = (0..f.rank()).map(|_| rng.gen_range(-5..=5)).collect();
                    (0..n).map(|i| per[f.orbit_of[i]]).collect::<Vec<i64>>()
                };
                let (l, m) = (pick(), pick());
                if !symmetric_form_check(&d, &s, &f, &l, &m)? {
                    return Ok((false, format!("{l:?} {m:?}")));
                }
            }
            Ok((true, "100 random symmetric pairs".into()))
        })();
        out.push(line(8, &format!("form preserved A{n} ({cycle})"), false, outcome));
    }
    for (n, cycle) in [(3usize, "1 3"), (2, "1 2")] {
        let outcome = (|| -> Outcome {
            let rep = orbit_multiplicity_check(n, &DiagramAutomorphism::parse(n, cycle)?, 6)?;
            Ok((rep.holds, format!("bound 6, {}", first_mismatch(&rep.discrepancy))))
        })();
        out.push(line(8, &format!("twining denominator A{n} ({cycle})"), false, outcome));
    }
    for (n, cycle, total) in [(3usize, "1 3", 10), (2, "1 2", 3)] {
        let outcome = (|| -> Outcome {
            let d = BorcherdsCartanData::type_a(n);
            let s = DiagramAutomorphism::parse(n, cycle)?;
            let f = fold(&d, &s)?;
            let m = FiniteRootModel::type_a(n, &s)?;
            let t = OrbitTables::finite_type(&d, &s)?;
            let got = total_fixed_dimension(&t, &m, &f)?;
            if got != q(total) {
                return Ok((false, format!("total {}", render(&got))));
            }
            let order = s.order();
            let mut degrees: Vec<Vec<i64>> = m.positive_roots.iter().map(|r| phi_map(&f, r)).collect();
            degrees.sort();
            degrees.dedup();
            let mut per = Vec::new();
            for b in &degrees {
                let mut brute = q(0);
                for k in 1..=order {
                    let bt = brute_force_trace(&m, &f, k, b);
                    if sigma_power_trace(&t, k, b)? != q(bt) {
                        return Ok((false, format!("sigma^{k} trace at {b:?}")));
                    }
                    brute += q(bt);
                }
                brute /= q(order as i64);
                let v = fixed_point_sdim(&t, b)?;
                if v != brute {
                    return Ok((false, format!("fixed dim at {b:?}: {} vs {}", render(&v), render(&brute))));
                }
                per.push(format!("{b:?}:{}", render(&v)));
            }
            Ok((true, format!("total {total}; {}", per.join(" "))))
        })();
        out.push(line(8, &format!("fixed dimension A{n} ({cycle})"), false, outcome));
    }
    let outcome = (|| -> Outcome {
        let s = DiagramAutomorphism::parse(3, "1 3")?;
        let ok = finite_adjoint_twining_check(&BorcherdsCartanData::type_a(3), &FiniteRootModel::type_a(3, &s)?)?;
        Ok((ok, "A3 adjoint twining character".into()))
    })();
    out.push(line(8, "adjoint twining character A3 (1 3)", false, outcome));
    out
}

fn c9() -> Vec<ReportLine> {
    let mut out = Vec::new();
    let mut flags_ok = true;

    // Kostant homology path
    let a2 = BorcherdsCartanData::type_a(2);
    let outcome = (|| -> Outcome {
        let h = kostant_homology(&a2, &[0], 6)?;
        let mut shown = Vec::new();
        for (coords, expected) in [(vec![0u32, 1], 1), (vec![1, 1], 1), (vec![0, 2], 0), (vec![1, 2], 0), (vec![2, 3], 0)] {
            let r = gkm_supertrace_conjectural(&a2, &[0], &h, &a2.root_degree(&coords))?;
            if !r.conjectural {
                return Ok((false, format!("{coords:?} not flagged")));
            }
            if r.value != q(expected) {
                return Ok((false, format!("{coords:?}: {}", render(&r.value))));
            }
            shown.push(format!("{coords:?}:{}", render(&r.value)));
        }
        Ok((true, shown.join(" ")))
    })();
    flags_ok &= outcome.as_ref().map(|(p, _)| *p).unwrap_or(false);
    out.push(line(9, "A2 with J={1} via Kostant homology", true, outcome));

    // free case
    let outcome = (|| -> Outcome {
        let f = QSeries::j_function();
        let data = monster_data(&f, 6)?;
        let proj = monster_projection(&data);
        let module = identity_module_weights(&data, &[0], 7)?;
        let g = GFamily::identity(f);
        for m in 1..6u32 {
            for n in 1..=6 - m {
                let target = Degree::new(vec![m, n], vec![0]);
                let r = gkm_supertrace_free_case(&data, &[0], &module, Some(&proj), &target)?;
                if r.conjectural {
                    return Ok((false, format!("({m},{n}) flagged")));
                }
                if r.value != monstrous_supertrace(m, n, &g)? {
                    return Ok((false, format!("({m},{n}): {}", render(&r.value))));
                }
            }
        }
        Ok((true, "monster data, m+n <= 6".into()))
    })();
    flags_ok &= outcome.as_ref().map(|(p, _)| *p).unwrap_or(false);
    out.push(line(9, "free case on monster data", false, outcome));

    out.push(line(
        9,
        "conjectural lines flagged, free-case lines not",
        false,
        Ok((flags_ok, if flags_ok { "ok".into() } else { "see above".into() })),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_requires_every_line() {
        let l = |c, p| ReportLine { criterion: c, name: String::new(), passed: p, conjectural: false, detail: String::new() };
        assert_eq!(summary(&[l(1, true), l(1, false), l(2, true)]), vec![(1, false), (2, true)]);
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!criterion(12)[0].passed);
    }
}
