use proptest::prelude::*;
use superlie::arith::{q, Q};
use superlie::freelie::{graded_dimension, lyndon_count, Letter, SuperAlphabet, DEFAULT_GUARD};
use superlie::graded_series::{divisor_pairs, sign, Basis, Degree, FormalSeries, GradingSpec};
use superlie::witt::{supertrace, PowerTraceTable};

fn z4_z() -> GradingSpec {
    GradingSpec::new(2, vec![4, 0], vec![-1, -1]).unwrap()
}

fn series(spec: &GradingSpec, coeffs: &[i64], constant: i64) -> FormalSeries {
    let mut s = FormalSeries::one(spec, 4, Basis::Plain).scale(&q(constant));
    for (i, &c) in coeffs.iter().enumerate() {
        let (x, y) = ((i % 3) as u32, (i / 3) as u32);
        if x + y > 0 {
            s.add_term(Degree::new(vec![x, y], vec![]), q(c));
        }
    }
    s
}

proptest! {
    #[test]
    fn psi_is_a_homomorphism(a in 0i64..4, b in -5i64..5, c in 0i64..4, d in -5i64..5) {
        let spec = z4_z();
        let x = Degree::new(vec![1, 0], vec![a, b]);
        let y = Degree::new(vec![0, 1], vec![c, d]);
        let s = sign(&spec, &spec.add(&x, &y)).unwrap();
        prop_assert_eq!(s, sign(&spec, &x).unwrap() * sign(&spec, &y).unwrap());
    }

    #[test]
    fn divisor_pairs_are_exhaustive(g0 in 1u32..13, g1 in 0u32..13, a in 0i64..4, b in -6i64..7) {
        let spec = z4_z();
        let d = Degree::new(vec![g0, g1], vec![a, b]);
        let got = divisor_pairs(&spec, &d).unwrap();
        let mut brute = Vec::new();
        for k in 1..=g0 {
            if g0 % k != 0 || g1 % k != 0 {
                continue;
            }
            for x in 0..4i64 {
                for y in -6i64..=6 {
                    if (x * k as i64 - a).rem_euclid(4) == 0 && y * k as i64 == b {
                        brute.push((k, Degree::new(vec![g0 / k, g1 / k], vec![x, y])));
                    }
                }
            }
        }
        prop_assert_eq!(got, brute);
    }

    #[test]
    fn series_ring_laws(a in prop::collection::vec(-3i64..4, 9), b in prop::collection::vec(-3i64..4, 9), c in prop::collection::vec(-3i64..4, 9)) {
        let spec = GradingSpec::plain(2);
        let (x, y, z) = (series(&spec, &a, 1), series(&spec, &b, 2), series(&spec, &c, -1));
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.log().unwrap().exp().unwrap(), x);
    }

    #[test]
    fn identity_supertraces_are_integers(even in 0usize..3, odd in 0usize..3, w in 1u32..3) {
        prop_assume!(even + odd > 0);
        let spec = GradingSpec::super_z2(1);
        let sdims = vec![
            (Degree::new(vec![w], vec![0]), q(even as i64)),
            (Degree::new(vec![1], vec![1]), q(-(odd as i64))),
        ];
        let t = PowerTraceTable::identity(&spec, &sdims).unwrap();
        for n in 1..=8u32 {
            for a in 0..2 {
                let v: Q = supertrace(&t, &Degree::new(vec![n], vec![a])).unwrap();
                prop_assert!(v.is_integer());
            }
        }
    }
}

#[test]
fn even_dimensions_count_lyndon_words() {
    let spec = GradingSpec::plain(3);
    let unit = |i: usize| {
        let mut g = vec![0; 3];
        g[i] = 1;
        Degree::new(g, vec![])
    };
    let letters = (0..3).map(|i| Letter { name: format!("x{i}"), degree: unit(i), eigenvalue: q(1) }).collect();
    let alphabet = SuperAlphabet::new(&spec, letters).unwrap();
    for a in 0..=3u32 {
        for b in 0..=3u32 {
            for c in 0..=2u32 {
                if a + b + c == 0 {
                    continue;
                }
                let d = graded_dimension(&alphabet, &Degree::new(vec![a, b, c], vec![]), DEFAULT_GUARD).unwrap();
                assert_eq!(d, lyndon_count(&[a, b, c]), "({a},{b},{c})");
            }
        }
    }
}
