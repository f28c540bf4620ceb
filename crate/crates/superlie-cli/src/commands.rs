use std::collections::BTreeSet;
use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::{json, Value};
use superlie::arith::{q, qfrac, render, Q};
use superlie::freelie::{graded_trace, OracleError};
use superlie::gkm::{
    self, gkm_supertrace_conjectural, gkm_supertrace_free_case, identity_module_weights, kostant_homology,
    positive_real_roots, weyl_sum_side, BorcherdsCartanData, MultiplicityTable, DEFAULT_WEYL_CAP,
};
use superlie::gl_decomp::{decompose, verify_trace_identity};
use superlie::graded_series::{sign, Basis, Degree, FormalSeries};
use superlie::monstrous::{
    monster_data, monster_projection, monstrous_supertrace, monstrous_supertrace_replicable, replicability_check,
    GFamily, ReplicateFamily,
};
use superlie::orbit::{
    brute_force_trace, fixed_point_sdim, phi_map, sigma_power_trace, total_fixed_dimension, DiagramAutomorphism,
    FiniteRootModel, OrbitTables,
};
use superlie::selftest;
use superlie::symfunc::hook_schur;
use superlie::witt::{lie_table, product_side, reachable_degrees, supertrace, PowerTraceTable};

use crate::input::{index_list, read_json, read_qseries, CartanFile, GeneratorFile, MultiplicityFile};
use crate::output::{tuple, Table};
use crate::{compute, CliError};

type Outcome = Result<(Table, bool), CliError>;

fn num(x: &Q) -> Value {
    Value::String(render(x))
}

fn diagonal_table(gens: &Path, depth: u32) -> Result<(superlie::freelie::SuperAlphabet, PowerTraceTable), CliError> {
    let file: GeneratorFile = read_json(gens)?;
    let alphabet = file.to_alphabet()?;
    let letters: Vec<(Degree, Q)> = alphabet.letters.iter().map(|l| (l.degree.clone(), l.eigenvalue.clone())).collect();
    let table = PowerTraceTable::diagonal(&alphabet.spec, &letters, depth).map_err(compute)?;
    Ok((alphabet, table))
}

pub fn free_lie(gens: &Path, max_weight: u32, oracle: bool, guard: u64) -> Outcome {
    let (alphabet, table) = diagonal_table(gens, max_weight)?;
    let degrees = reachable_degrees(&table.spec, &table.support(), max_weight);
    let rows: Vec<Result<Vec<Value>, CliError>> = degrees
        .par_iter()
        .map(|d| {
            let w = supertrace(&table, d).map_err(compute)?;
            let (o, m) = if oracle {
                match graded_trace(&alphabet, d, guard) {
                    Ok(o) => (num(&o), Value::Bool(o == w)),
                    Err(OracleError::GuardExceeded { .. }) => (Value::Null, Value::Null),
                    Err(e) => return Err(compute(e)),
                }
            } else {
                (Value::Null, Value::Null)
            };
            Ok(vec![Value::String(tuple(&d.gamma)), Value::String(tuple(&d.acomp)), num(&w), o, m])
        })
        .collect();
    let mut t = Table::new("free-lie", &["degree", "acomp", "supertrace", "oracle", "match"]);
    let mut ok = true;
    let mut skipped = 0;
    for r in rows {
        let r = r?;
        match r[4] {
            Value::Bool(false) => ok = false,
            Value::Null if oracle => skipped += 1,
            _ => {}
        }
        t.push(r);
    }
    t.note("max_weight", json!(max_weight));
    t.note("all_match", json!(ok));
    t.note("oracle_skipped", json!(skipped));
    Ok((t, ok))
}

pub fn gl_decomp(k: usize, l: usize, n: u32, check: bool) -> Outcome {
    let dec = decompose(k, l, n).map_err(compute)?;
    let ones_x = vec![q(1); k];
    let ones_y = vec![q(1); l];
    let mut t = Table::new("gl-decomp", &["partition", "multiplicity", "dimension"]);
    let mut total = q(0);
    for (lam, &c) in &dec.entries {
        let dim = hook_schur(lam, k, l).eval(&ones_x, &ones_y);
        total += &dim * q(c as i64);
        t.push(vec![Value::String(lam.to_string()), json!(c.to_string()), num(&dim)]);
    }
    t.note("k", json!(k));
    t.note("l", json!(l));
    t.note("n", json!(n));
    t.note("total_dimension", num(&total));
    let mut ok = true;
    if check {
        let mut rng = StdRng::seed_from_u64(n as u64);
        let mut points = vec![(ones_x.clone(), ones_y.clone())];
        for _ in 0..2 {
            let mut pick = || qfrac(rng.gen_range(-5..=5), rng.gen_range(1..=3));
            points.push(((0..k).map(|_| pick()).collect(), (0..l).map(|_| pick()).collect()));
        }
        ok = verify_trace_identity(k, l, n, &points).map_err(compute)?;
        t.note("trace_identity", json!(ok));
    }
    Ok((t, ok))
}

fn compare(t: &mut Table, lhs: &FormalSeries, rhs: &FormalSeries, extra: impl Fn(&Degree) -> Vec<Value>) -> bool {
    let keys: BTreeSet<&Degree> = lhs.terms().keys().chain(rhs.terms().keys()).collect();
    let mut keys: Vec<&Degree> = keys.into_iter().collect();
    keys.sort_by(|a, b| a.weight().cmp(&b.weight()).then(a.cmp(b)));
    let mut ok = true;
    for d in keys {
        let (a, b) = (lhs.coeff(d), rhs.coeff(d));
        ok &= a == b;
        let mut row = vec![Value::String(tuple(&d.gamma))];
        row.extend(extra(d));
        row.extend([num(&a), num(&b), Value::Bool(a == b)]);
        t.push(row);
    }
    ok
}

/// Height-bounded coordinate vectors.
fn boxed(rank: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let used: u32 = v.iter().sum();
                (0..=bound - used).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&x| x > 0));
    out
}

fn sub_data(data: &BorcherdsCartanData, j: &[usize]) -> BorcherdsCartanData {
    BorcherdsCartanData {
        indices: j.iter().map(|&i| data.indices[i].clone()).collect(),
        matrix: j.iter().map(|&a| j.iter().map(|&b| data.a(a, b).clone()).collect()).collect(),
        symmetrizers: j.iter().map(|&i| data.symmetrizers[i].clone()).collect(),
        charge: j.iter().map(|&i| data.charge[i]).collect(),
        parity: j.iter().map(|&i| data.parity[i]).collect(),
    }
}

fn finite_roots(data: &BorcherdsCartanData, bound: u32) -> Result<Vec<Vec<u32>>, CliError> {
    Ok(positive_real_roots(data, bound, DEFAULT_WEYL_CAP)
        .map_err(compute)?
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as u32).collect())
        .collect())
}

pub fn denominator(
    gens: Option<&Path>,
    data: Option<&Path>,
    mults: Option<&Path>,
    kostant: Option<&str>,
    bound: u32,
) -> Outcome {
    if let Some(gens) = gens {
        let (_, h) = diagonal_table(gens, bound)?;
        let lie = lie_table(&h, bound).map_err(compute)?;
        let lhs = product_side(&lie, bound).map_err(compute)?;
        let mut rhs = FormalSeries::one(&h.spec, bound, Basis::Signed);
        for d in h.support() {
            rhs.add_term(d.clone(), -h.get(1, &d).map_err(compute)?);
        }
        let mut t = Table::new("denominator", &["degree", "acomp", "product", "sum", "match"]);
        let ok = compare(&mut t, &lhs, &rhs, |d| vec![Value::String(tuple(&d.acomp))]);
        t.note("identity", json!("free"));
        t.note("holds", json!(ok));
        return Ok((t, ok));
    }
    let path = data.ok_or_else(|| CliError::Input("denominator needs --gens or --data".into()))?;
    let file: CartanFile = read_json(path)?;
    let data = file.to_data()?;
    let n = data.rank();
    let mut conjectural = false;
    let table: MultiplicityTable = if let Some(m) = mults {
        let f: MultiplicityFile = read_json(m)?;
        f.to_table(n)?
    } else if let Some(text) = kostant {
        conjectural = true;
        let j: Vec<usize> = index_list(text)?.into_iter().map(|i| i.wrapping_sub(1)).collect();
        if j.iter().any(|&i| i >= n) {
            return Err(CliError::Input(format!("--kostant indices must lie in 1..={n}")));
        }
        let mut t = MultiplicityTable::new();
        for r in finite_roots(&sub_data(&data, &j), bound)? {
            let mut full = vec![0u32; n];
            for (pos, &i) in j.iter().enumerate() {
                full[i] = r[pos];
            }
            t.insert(full, q(1));
        }
        let h = kostant_homology(&data, &j, bound).map_err(compute)?;
        let outside: Vec<Vec<u32>> =
            boxed(n, bound).into_iter().filter(|c| (0..n).any(|i| c[i] > 0 && !j.contains(&i))).collect();
        let vals: Vec<Result<(Vec<u32>, Q), CliError>> = outside
            .into_par_iter()
            .map(|c| {
                let d = data.root_degree(&c);
                let v = gkm_supertrace_conjectural(&data, &j, &h, &d).map_err(compute)?;
                let psi = sign(&data.root_spec(), &d).map_err(compute)?;
                Ok((c, v.value * q(psi as i64)))
            })
            .collect();
        for v in vals {
            let (c, dim) = v?;
            if dim != q(0) {
                t.insert(c, dim);
            }
        }
        t
    } else {
        if !data.imaginary_indices().is_empty() {
            return Err(CliError::Input("imaginary simple roots need --mults or --kostant".into()));
        }
        finite_roots(&data, bound)?.into_iter().map(|r| (r, q(1))).collect()
    };
    let lhs = gkm::product_side(&data, &table, bound).map_err(compute)?;
    let rhs = weyl_sum_side(&data, &vec![q(0); n], bound).map_err(compute)?;
    let mut t = Table::new("denominator", &["root", "multiplicity", "product", "weyl_sum", "match", "conjectural"]);
    let mut ok = true;
    let keys: BTreeSet<&Degree> = lhs.terms().keys().chain(rhs.terms().keys()).collect();
    let mut keys: Vec<&Degree> = keys.into_iter().collect();
    keys.sort_by(|a, b| a.weight().cmp(&b.weight()).then(a.cmp(b)));
    for d in keys {
        let (a, b) = (lhs.coeff(d), rhs.coeff(d));
        ok &= a == b;
        let m = table.get(&d.gamma).cloned().unwrap_or_else(|| q(0));
        t.push(vec![Value::String(tuple(&d.gamma)), num(&m), num(&a), num(&b), Value::Bool(a == b), Value::Bool(conjectural)]);
    }
    t.note("identity", json!("weyl-kac-borcherds"));
    t.note("holds", json!(ok));
    t.note("conjectural", json!(conjectural));
    Ok((t, ok))
}

pub fn monstrous(path: &Path, box_bound: u32) -> Outcome {
    let f = read_qseries(path)?;
    let fam = ReplicateFamily::self_replicating(f.clone());
    let rep = replicability_check(&fam, box_bound).map_err(compute)?;
    let g = GFamily::identity(f.clone());
    let data = monster_data(&f, box_bound).map_err(compute)?;
    let proj = monster_projection(&data);
    let module = identity_module_weights(&data, &[0], box_bound + 1).map_err(compute)?;
    let cells: Vec<(u32, u32)> = (1..box_bound).flat_map(|m| (1..=box_bound - m).map(move |n| (m, n))).collect();
    let rows: Vec<Result<Vec<Value>, CliError>> = cells
        .par_iter()
        .map(|&(m, n)| {
            let w = monstrous_supertrace(m, n, &g).map_err(compute)?;
            let r = monstrous_supertrace_replicable(m, n, std::slice::from_ref(&fam)).map_err(compute)?;
            let target = Degree::new(vec![m, n], vec![0]);
            let k = gkm_supertrace_free_case(&data, &[0], &module, Some(&proj), &target).map_err(compute)?;
            let agree = w == r && r == k.value;
            Ok(vec![json!(m), json!(n), num(&w), num(&r), num(&k.value), Value::Bool(agree), Value::Bool(k.conjectural)])
        })
        .collect();
    let mut t = Table::new("monstrous", &["m", "n", "witt", "replicable", "gkm", "match", "conjectural"]);
    let mut ok = rep.holds;
    for r in rows {
        let r = r?;
        ok &= r[5] == Value::Bool(true);
        t.push(r);
    }
    t.note("box", json!(box_bound));
    t.note("replicable", json!(rep.holds));
    if let Some((i, j, a, b)) = &rep.discrepancy {
        t.note("replicability_discrepancy", json!({ "m": i, "n": j, "product": render(a), "sum": render(b) }));
    }
    Ok((t, ok))
}

fn automorphism(file: &CartanFile, n: usize, sigma: Option<&str>) -> Result<DiagramAutomorphism, CliError> {
    let text = sigma.or(file.automorphism.as_deref()).unwrap_or("");
    DiagramAutomorphism::parse(n, text).map_err(|e| CliError::Input(e.to_string()))
}

pub fn fold(path: &Path, sigma: Option<&str>) -> Outcome {
    let file: CartanFile = read_json(path)?;
    let data = file.to_data()?;
    let s = automorphism(&file, data.rank(), sigma)?;
    let f = superlie::orbit::fold(&data, &s).map_err(|e| CliError::Input(e.to_string()))?;
    let orbit = f.orbit_algebra(&data);
    let mut t = Table::new("fold", &["row", "col", "a_hat"]);
    for (i, row) in orbit.matrix.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            t.push(vec![Value::String(orbit.indices[i].clone()), Value::String(orbit.indices[j].clone()), num(v)]);
        }
    }
    let rendered = |v: &[Q]| v.iter().map(render).collect::<Vec<_>>();
    t.note("indices", json!(orbit.indices));
    t.note("matrix", json!(orbit.matrix.iter().map(|r| rendered(r)).collect::<Vec<_>>()));
    t.note("symmetrizers", json!(rendered(&orbit.symmetrizers)));
    t.note("charge", json!(orbit.charge));
    t.note("parity", json!(orbit.parity));
    t.note(
        "orbits",
        json!(f
            .representatives
            .iter()
            .enumerate()
            .map(|(p, &r)| json!({
                "representative": data.indices[r],
                "size": f.orbit_sizes[p],
                "epsilon": render(&f.epsilon[p]),
                "linked": f.restricted.contains(&p),
            }))
            .collect::<Vec<_>>()),
    );
    Ok((t, true))
}

pub fn orbit_trace(path: &Path, sigma: Option<&str>) -> Outcome {
    let file: CartanFile = read_json(path)?;
    let data = file.to_data()?;
    let n = data.rank();
    let s = automorphism(&file, n, sigma)?;
    if !data.imaginary_indices().is_empty() {
        return Err(CliError::Input("orbit-trace needs finite-type data".into()));
    }
    let tables = OrbitTables::finite_type(&data, &s).map_err(compute)?;
    let folded = superlie::orbit::fold(&data, &s).map_err(compute)?;
    let model = if data.matrix == BorcherdsCartanData::type_a(n).matrix {
        Some(FiniteRootModel::type_a(n, &s).map_err(compute)?)
    } else {
        None
    };
    let mut degrees: Vec<Vec<i64>> = positive_real_roots(&data, 2 * n as u32 + 2, DEFAULT_WEYL_CAP)
        .map_err(compute)?
        .iter()
        .map(|r| phi_map(&folded, r))
        .collect();
    degrees.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then(a.cmp(b)));
    degrees.dedup();
    let order = s.order();
    let mut columns = vec!["degree".to_string()];
    columns.extend((1..=order).map(|k| format!("sigma^{k}")));
    columns.extend(["fixed".to_string(), "brute_force".to_string(), "match".to_string()]);
    let mut t = Table::new("orbit-trace", &[]);
    t.columns = columns;
    let mut ok = true;
    for b in &degrees {
        let mut row = vec![Value::String(tuple(b))];
        for k in 1..=order {
            row.push(num(&sigma_power_trace(&tables, k, b).map_err(compute)?));
        }
        let fixed = fixed_point_sdim(&tables, b).map_err(compute)?;
        row.push(num(&fixed));
        match &model {
            Some(m) => {
                let brute: i64 = (1..=order).map(|k| brute_force_trace(m, &folded, k, b)).sum();
                let brute = q(brute) / q(order as i64);
                ok &= brute == fixed;
                row.extend([num(&brute), Value::Bool(brute == fixed)]);
            }
            None => row.extend([Value::Null, Value::Null]),
        }
        t.push(row);
    }
    t.note("order", json!(order));
    if let Some(m) = &model {
        t.note("total_fixed_dimension", num(&total_fixed_dimension(&tables, m, &folded).map_err(compute)?));
    }
    Ok((t, ok))
}

pub fn selftest(criteria: Option<&str>) -> Outcome {
    let list: Vec<u8> = match criteria {
        Some(text) => index_list(text)?
            .into_iter()
            .map(|c| if (1..=9).contains(&c) { Ok(c as u8) } else { Err(CliError::Input(format!("no criterion {c}"))) })
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    let lines = selftest::run(&list);
    let mut t = Table::new("selftest", &["criterion", "name", "passed", "conjectural", "detail"]);
    for l in &lines {
        t.push(vec![json!(l.criterion), json!(l.name), json!(l.passed), json!(l.conjectural), json!(l.detail)]);
    }
    let verdicts = selftest::summary(&lines);
    t.note("criteria", json!(verdicts.iter().map(|(c, p)| json!({ "criterion": c, "passed": p })).collect::<Vec<_>>()));
    Ok((t, verdicts.iter().all(|(_, p)| *p)))
}
