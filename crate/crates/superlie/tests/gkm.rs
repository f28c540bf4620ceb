use superlie::arith::{q, Q};
use superlie::freelie::{graded_trace, Letter, SuperAlphabet, DEFAULT_GUARD};
use superlie::gkm::*;
use superlie::graded_series::{Degree, GradingSpec};

fn two_odd() -> BorcherdsCartanData {
    BorcherdsCartanData {
        indices: vec!["1".into()],
        matrix: vec![vec![q(-2)]],
        symmetrizers: vec![q(1)],
        charge: vec![2],
        parity: vec![-1],
    }
}

fn oracle(eigen: &[i64], n: u32) -> Q {
    let spec = GradingSpec::super_z2(1);
    let letters = eigen
        .iter()
        .enumerate()
        .map(|(i, &e)| Letter { name: format!("y{i}"), degree: Degree::new(vec![1], vec![1]), eigenvalue: q(e) })
        .collect();
    let a = SuperAlphabet::new(&spec, letters).unwrap();
    graded_trace(&a, &Degree::new(vec![n], vec![(n % 2) as i64]), DEFAULT_GUARD).unwrap()
}

#[test]
fn order_two_action_on_odd_generators() {
    let data = two_odd();
    // negate one generator: str(g) = 0, str(g²) = −2
    let one = vec![ModuleWeight { coords: vec![1], powers: vec![q(0), q(-2)] }];
    // negate both: str(g) = 2, str(g²) = −2
    let both = vec![ModuleWeight { coords: vec![1], powers: vec![q(2), q(-2)] }];
    let trivial = vec![ModuleWeight { coords: vec![1], powers: vec![q(-2)] }];
    for n in 1..=6u32 {
        let d = data.root_degree(&[n]);
        let a = gkm_supertrace_free_case(&data, &[], &one, None, &d).unwrap().value;
        assert_eq!(a, oracle(&[-1, 1], n), "n = {n}");
        let b = gkm_supertrace_free_case(&data, &[], &both, None, &d).unwrap().value;
        let s = gkm_supertrace_free_case(&data, &[], &trivial, None, &d).unwrap().value;
        assert_eq!(b, oracle(&[-1, -1], n));
        let sign = if n % 2 == 1 { q(-1) } else { q(1) };
        assert_eq!(b, s * sign, "n = {n}");
    }
}

#[test]
fn free_case_rejects_orthogonal_imaginary_pairs() {
    let data = BorcherdsCartanData::from_int_matrix(&[vec![-2, 0], vec![0, -2]]);
    let r = gkm_supertrace_free_case(&data, &[], &[], None, &data.root_degree(&[1, 1]));
    assert!(matches!(r, Err(GkmError::Precondition(_))));
}

#[test]
fn free_case_is_order_independent() {
    let data = BorcherdsCartanData {
        indices: vec!["a".into(), "b".into()],
        matrix: vec![vec![q(-2), q(-1)], vec![q(-1), q(-2)]],
        symmetrizers: vec![q(1), q(1)],
        charge: vec![2, 1],
        parity: vec![1, -1],
    };
    let v = identity_module_weights(&data, &[], 6).unwrap();
    let mut rev = v.clone();
    rev.reverse();
    for a in 0..=3u32 {
        for b in 0..=3u32 {
            if a + b == 0 {
                continue;
            }
            let d = data.root_degree(&[a, b]);
            let x = gkm_supertrace_free_case(&data, &[], &v, None, &d).unwrap();
            let y = gkm_supertrace_free_case(&data, &[], &rev, None, &d).unwrap();
            assert_eq!(x, y);
        }
    }
}

#[test]
fn a3_weyl_sum_matches_product() {
    let a3 = BorcherdsCartanData::type_a(3);
    let mut m = MultiplicityTable::new();
    for r in positive_real_roots(&a3, 10, 100).unwrap() {
        m.insert(r.iter().map(|&x| x as u32).collect(), q(1));
    }
    assert_eq!(m.len(), 6);
    assert!(denominator_check(&a3, &m, 8).unwrap().holds);
}

#[test]
fn infinite_weyl_group_hits_the_cap() {
    let affine = BorcherdsCartanData::from_int_matrix(&[vec![2, -2], vec![-2, 2]]);
    let r = weyl_elements(&affine, &[0, 1], 10_000, 50);
    assert!(matches!(r, Err(GkmError::WeylCap(50))));
    let capped = weyl_elements(&affine, &[0, 1], 4, 50).unwrap();
    assert_eq!(capped.len(), 1 + 2 + 2 + 2 + 2);
}
