use num_bigint::BigInt;
use superlie::arith::{q, qint};
use superlie::gkm::{gkm_supertrace_free_case, identity_module_weights};
use superlie::graded_series::Degree;
use superlie::monstrous::*;

fn j() -> QSeries {
    QSeries::j_function()
}

fn c(n: i64) -> BigInt {
    j().f(n).unwrap()
}

#[test]
fn j_is_replicable_to_box_8() {
    let fam = ReplicateFamily::self_replicating(j());
    let rep = replicability_check(&fam, 8).unwrap();
    assert!(rep.holds, "{:?}", rep.discrepancy);
}

#[test]
fn corrupted_replicate_is_detected() {
    let mut fam = ReplicateFamily::self_replicating(j());
    fam.set(2, j().with_coeff(1, c(1) + 1));
    let rep = replicability_check(&fam, 8).unwrap();
    assert!(!rep.holds);
    let (i, jj, _, _) = rep.discrepancy.unwrap();
    assert_eq!((i, jj), (2, 2));
}

#[test]
fn two_two_cell_three_ways() {
    let direct = monstrous_supertrace(2, 2, &GFamily::identity(j())).unwrap();
    let closed = qint(&c(3)) + (qint(&c(1)) * qint(&c(1)) - qint(&c(1))) / q(2);
    let rep = monstrous_supertrace_replicable(2, 2, &[ReplicateFamily::self_replicating(j())]).unwrap();
    assert_eq!(direct, closed);
    assert_eq!(direct, rep);
}

#[test]
fn witt_and_replicate_forms_agree_on_the_box() {
    let g = GFamily::identity(j());
    let fam = [ReplicateFamily::self_replicating(j())];
    for m in 1..8u32 {
        for n in 1..=8 - m {
            let a = monstrous_supertrace(m, n, &g).unwrap();
            assert_eq!(a, monstrous_supertrace_replicable(m, n, &fam).unwrap(), "({m},{n})");
            assert!(a.is_integer() && a >= q(0));
            assert_eq!(a, qint(&c((m * n) as i64)), "root multiplicity c(mn) at ({m},{n})");
            assert_eq!(a, monstrous_supertrace(n, m, &g).unwrap());
        }
    }
}

#[test]
fn gcd_one_cells_read_the_series() {
    let f = QSeries::from_i64(&[4, -2, 6, 1, -3, 8]);
    let fam = [ReplicateFamily::self_replicating(f.clone())];
    assert_eq!(monstrous_supertrace_replicable(2, 3, &fam).unwrap(), q(8));
    assert_eq!(monstrous_supertrace(2, 3, &GFamily::identity(f)).unwrap() != q(0), true);
}

#[test]
fn gkm_free_case_reproduces_monstrous_cells() {
    let f = j();
    let data = monster_data(&f, 6).unwrap();
    let proj = monster_projection(&data);
    let built = identity_module_weights(&data, &[0], 7).unwrap();
    let direct = monster_module_weights(&data, &GFamily::identity(f.clone())).unwrap();
    let g = GFamily::identity(f);
    for m in 1..6u32 {
        for n in 1..=6 - m {
            let target = Degree::new(vec![m, n], vec![0]);
            let expected = monstrous_supertrace(m, n, &g).unwrap();
            for module in [&built, &direct] {
                let r = gkm_supertrace_free_case(&data, &[0], module, Some(&proj), &target).unwrap();
                assert!(!r.conjectural);
                assert_eq!(r.value, expected, "({m},{n})");
            }
        }
    }
}

#[test]
fn twisted_family_matches_gkm() {
    // an order-2 element acting by a sign pattern on the V_j
    let f = QSeries::from_i64(&[3, 2, 5, 1, 4, 2]);
    let fg = QSeries::from_i64(&[-1, 2, -3, 1, 0, 2]);
    let fam = GFamily { members: vec![fg, f.clone()] };
    let data = monster_data(&f, 6).unwrap();
    let proj = monster_projection(&data);
    let module = monster_module_weights(&data, &fam).unwrap();
    for m in 1..6u32 {
        for n in 1..=6 - m {
            let target = Degree::new(vec![m, n], vec![0]);
            let a = monstrous_supertrace(m, n, &fam).unwrap();
            let b = gkm_supertrace_free_case(&data, &[0], &module, Some(&proj), &target).unwrap();
            assert_eq!(a, b.value, "({m},{n})");
        }
    }
}
