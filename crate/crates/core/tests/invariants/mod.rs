//! Randomized invariants with fixed seeds, shared by the `properties` and
//! `acceptance` test targets.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use murphy_toric::chern::MurphyRule;
use murphy_toric::divisor::{evaluate_support, is_cartier, TDivisor};
use murphy_toric::exact::linalg;
use murphy_toric::exact::{
    determinant, smith_decomposition, smith_normal_form, solve_integer_linear, Field, IntMatrix, PrimeField,
    RationalField,
};
use murphy_toric::fan::{
    is_complete, is_smooth, projective_fan, star_subdivide, validate_fan, Character, Cone, Fan, LatticeVector,
};
use murphy_toric::incidence::{enumerate_c_i, EnumOptions, IncidenceData, Strategy as Search};
use murphy_toric::klyachko::{check_compatibility, Filtration, RayFiltration, Subspace};
use murphy_toric::moduli::{generate_conditions, Atom, AtomKind, MurphyInstance};
use murphy_toric::murphy_fan::{build_murphy_fan, label_vector, BuildMode};

/// Randomized cases for the Smith form invariance check.
pub const SNF_CASES: u32 = 256;

fn config(cases: u32, seed: u64) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn matrix(rows: usize, cols: usize, range: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-range..=range, cols), rows)
}

fn big(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
}

/// Product of random elementary operations: a unimodular matrix.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3, any::<bool>()), 0..12).prop_map(move |ops| {
        let mut m = IntMatrix::identity(n).to_rows();
        for (i, j, k, swap) in ops {
            if i == j {
                continue;
            }
            if swap {
                m.swap(i, j);
            } else {
                let add: Vec<BigInt> = m[j].iter().map(|x| x * k).collect();
                m[i].iter_mut().zip(add).for_each(|(a, b)| *a += b);
            }
        }
        IntMatrix::from_rows(m).unwrap()
    })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Invariant factors as ratios of determinantal divisors D_k = gcd of k×k minors.
fn determinantal_factors(a: &IntMatrix) -> Vec<BigInt> {
    let (m, n) = (a.rows(), a.cols());
    let mut out = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=m.min(n) {
        let mut g = BigInt::zero();
        for rows in subsets(m, k) {
            for cols in subsets(n, k) {
                let minor: Vec<Vec<BigInt>> =
                    rows.iter().map(|&r| cols.iter().map(|&c| a[(r, c)].clone()).collect()).collect();
                g = g.gcd(&determinant(&IntMatrix::from_rows(minor).unwrap()).unwrap());
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

pub fn smith_form_is_unimodularly_invariant() {
    proptest!(config(SNF_CASES, 0x5eed_0001), |((a, u, v) in (1usize..=4, 1usize..=4).prop_flat_map(|(m, n)| (matrix(m, n, 9), unimodular(m), unimodular(n))))| {
        let a = big(&a);
        let moved = u.mul(&a).unwrap().mul(&v).unwrap();
        prop_assert_eq!(smith_normal_form(&moved), smith_normal_form(&a));
        prop_assert_eq!(smith_normal_form(&a), determinantal_factors(&a));

        let dec = smith_decomposition(&a);
        let diag = dec.left.mul(&a).unwrap().mul(&dec.right).unwrap();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let expected = if i == j { dec.diagonal[i].clone() } else { BigInt::zero() };
                prop_assert_eq!(diag[(i, j)].clone(), expected);
            }
        }
        prop_assert_eq!(determinant(&dec.left).unwrap().abs(), BigInt::from(1));
        prop_assert_eq!(determinant(&dec.right).unwrap().abs(), BigInt::from(1));
    });
}

pub fn integral_systems_are_solved() {
    proptest!(config(200, 0x5eed_0002), |(a in matrix(3, 3, 6), x in prop::collection::vec(-20i64..=20, 3))| {
        let a = big(&a);
        let x: Vec<BigInt> = x.into_iter().map(BigInt::from).collect();
        let b = a.mul_vec(&x);
        let sol = solve_integer_linear(&a, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(a.mul_vec(&sol), b);
    });
}

pub fn subspace_dimension_formula() {
    proptest!(config(200, 0x5eed_0002), |(u in matrix(2, 4, 2), w in matrix(3, 4, 2))| {
        let f = PrimeField::new(3).unwrap();
        let to_f = |m: &[Vec<i64>]| -> Vec<Vec<u32>> { m.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect() };
        let (u, w) = (to_f(&u), to_f(&w));
        let cap = linalg::intersect(&f, &u, &w, 4);
        let sum = linalg::sum(&f, &u, &w);
        prop_assert_eq!(sum.len() + cap.len(), linalg::rank(&f, &u) + linalg::rank(&f, &w));
        for v in &cap {
            prop_assert!(linalg::contains(&f, &u, v) && linalg::contains(&f, &w, v));
        }
    });
}

fn weighted_plane() -> Fan {
    Fan::new(
        2,
        vec![LatticeVector::from_i64s(&[1, 0]), LatticeVector::from_i64s(&[0, 1]), LatticeVector::from_i64s(&[-1, -2])],
        vec![vec![0, 1], vec![1, 2], vec![2, 0]],
    )
    .unwrap()
}

pub fn star_subdivision_keeps_a_smooth_complete_fan() {
    proptest!(config(128, 0x5eed_0003), |(pick in 0usize..1000, depth in 1usize..3)| {
        let mut fan = projective_fan(3).unwrap();
        for step in 0..depth {
            let faces: Vec<Vec<usize>> = fan.faces().iter().filter(|f| f.len() >= 2).cloned().collect();
            let face = &faces[(pick + 7 * step) % faces.len()];
            let cone = Cone::new(fan.cone_rays(face).into_iter().cloned().collect()).unwrap();
            let before = fan.rays().len();
            fan = star_subdivide(&fan, &cone).unwrap();
            prop_assert_eq!(fan.rays().len(), before + 1);
        }
        prop_assert_eq!(validate_fan(&fan), Ok(()));
        prop_assert!(is_smooth(&fan) && is_complete(&fan));
    });
}

pub fn cartier_property_is_stable_under_principal_divisors() {
    proptest!(config(128, 0x5eed_0003), |(coeffs in prop::collection::vec(-5i64..=5, 3), m in prop::collection::vec(-5i64..=5, 2))| {
        let fan = weighted_plane();
        let d = TDivisor::from_i64s(&coeffs);
        let p = TDivisor::principal(&fan, &Character::from_i64s(&m));
        let shifted = TDivisor::new(d.coefficients.iter().zip(&p.coefficients).map(|(a, b)| a + b).collect());
        prop_assert_eq!(is_cartier(&fan, &d).unwrap().is_ok(), is_cartier(&fan, &shifted).unwrap().is_ok());
        let principal = is_cartier(&fan, &p).unwrap().expect("principal divisors are Cartier");
        prop_assert!(principal.cones.iter().all(|(_, c)| *c == Character::from_i64s(&m)));
    });
}

pub fn support_functions_are_positively_homogeneous() {
    proptest!(config(128, 0x5eed_0003), |(coeffs in prop::collection::vec(-5i64..=5, 3), x in prop::collection::vec(-9i64..=9, 2), t in 0i64..=6)| {
        let fan = projective_fan(2).unwrap();
        let s = is_cartier(&fan, &TDivisor::from_i64s(&coeffs)).unwrap().unwrap();
        let q = |v: i64| BigRational::from_integer(v.into());
        let point: Vec<BigRational> = x.iter().map(|&v| q(v) / q(2)).collect();
        let scaled: Vec<BigRational> = point.iter().map(|v| v * q(t)).collect();
        let base = evaluate_support(&s, &fan, &point).unwrap();
        prop_assert_eq!(evaluate_support(&s, &fan, &scaled).unwrap(), base * q(t));
    });
}

pub fn line_bundles_are_always_compatible() {
    proptest!(config(128, 0x5eed_0003), |(a in prop::collection::vec(-4i64..=4, 4))| {
        let mut fan = projective_fan(2).unwrap();
        let face = fan.max_cones()[0].clone();
        fan = star_subdivide(&fan, &Cone::new(fan.cone_rays(&face).into_iter().cloned().collect()).unwrap()).unwrap();
        let rays = (0..4)
            .map(|r| (r, RayFiltration::new(&RationalField, 1, vec![(a[r] + 1, Subspace::zero(1))]).unwrap()))
            .collect::<BTreeMap<_, _>>();
        let filt = Filtration::new(RationalField, 1, rays).unwrap();
        let assignment = check_compatibility(&fan, &filt).unwrap();
        for (cone, chars) in &assignment.cones {
            prop_assert_eq!(chars.len(), 1);
            for &r in cone {
                prop_assert_eq!(chars[0].pair(&fan.rays()[r]), BigInt::from(a[r]));
            }
        }
    });
}

fn incidence(max_objects: usize) -> impl Strategy<Value = IncidenceData> {
    (3..=max_objects)
        .prop_flat_map(|total| (Just(total), 0..=total))
        .prop_flat_map(|(total, d)| {
            (Just(d), Just(total - d), prop::collection::vec(any::<bool>(), d * (total - d)))
        })
        .prop_map(|(d, l, mask)| {
            let pairs = (0..d * l).filter(|&k| mask[k]).map(|k| (k / l + 1, k % l + 1)).collect();
            IncidenceData::new(d, l, pairs).unwrap()
        })
}

pub fn conditions_follow_point_relabelling() {
    proptest!(config(64, 0x5eed_0004), |(inc in incidence(6), shift in 0usize..6)| {
        let d = inc.points();
        prop_assume!(d >= 2);
        let perm = |i: usize| (i - 1 + shift) % d + 1;
        let relabelled = IncidenceData::new(
            d,
            inc.lines(),
            inc.pairs().iter().map(|&(i, j)| (perm(i), j)).collect(),
        ).unwrap();
        let cs = generate_conditions(&MurphyInstance::new(inc, false).unwrap()).unwrap();
        let moved = generate_conditions(&MurphyInstance::new(relabelled, false).unwrap()).unwrap();
        let mut expected: Vec<Atom> = cs
            .atoms()
            .iter()
            .map(|a| match a.kind {
                AtomKind::Incident | AtomKind::NonIncident => Atom::new(a.kind, perm(a.i), a.j),
                AtomKind::DistinctPoints => Atom::new(a.kind, perm(a.i), perm(a.j)),
                AtomKind::DistinctLines => *a,
            })
            .collect();
        expected.sort();
        prop_assert_eq!(moved.atoms(), &expected[..]);
    });
}

pub fn one_atom_per_pair_and_incidences_round_trip() {
    proptest!(config(64, 0x5eed_0004), |(inc in incidence(8))| {
        let cs = generate_conditions(&MurphyInstance::new(inc.clone(), false).unwrap()).unwrap();
        let m = inc.objects();
        prop_assert_eq!(cs.atoms().len(), m * (m - 1) / 2);
        prop_assert_eq!(cs.incidence(), inc);
    });
}

pub fn backtracking_matches_brute_force() {
    proptest!(config(64, 0x5eed_0004), |(inc in incidence(4), p in prop::sample::select(vec![2u64, 3]))| {
        let f = PrimeField::new(p).unwrap();
        let brute = EnumOptions { strategy: Search::Brute, ..Default::default() };
        let back = EnumOptions { strategy: Search::Backtrack, ..Default::default() };
        prop_assert_eq!(enumerate_c_i(&inc, &f, &brute).unwrap(), enumerate_c_i(&inc, &f, &back).unwrap());
    });
}

pub fn rule_characters_vanish_on_composite_rays() {
    proptest!(config(64, 0x5eed_0004), |(inc in incidence(7), pick in 0usize..100_000)| {
        let n = inc.objects() - 1;
        let h = build_murphy_fan(n, BuildMode::Lazy).unwrap();
        let flags = h.flags();
        let flag = &flags[pick % flags.len()];
        let chars = MurphyRule::new(inc).characters(flag).unwrap();
        prop_assert_eq!(chars.len(), 3);
        for s in &flag.chain {
            let r = label_vector(n, *s);
            prop_assert!(chars.iter().all(|u| u.pair(&r).is_zero()));
        }
    });
}

#[allow(dead_code)]
pub const ALL: &[(&str, fn())] = &[
    ("smith_form_is_unimodularly_invariant", smith_form_is_unimodularly_invariant),
    ("integral_systems_are_solved", integral_systems_are_solved),
    ("subspace_dimension_formula", subspace_dimension_formula),
    ("star_subdivision_keeps_a_smooth_complete_fan", star_subdivision_keeps_a_smooth_complete_fan),
    ("cartier_property_is_stable_under_principal_divisors", cartier_property_is_stable_under_principal_divisors),
    ("support_functions_are_positively_homogeneous", support_functions_are_positively_homogeneous),
    ("line_bundles_are_always_compatible", line_bundles_are_always_compatible),
    ("conditions_follow_point_relabelling", conditions_follow_point_relabelling),
    ("one_atom_per_pair_and_incidences_round_trip", one_atom_per_pair_and_incidences_round_trip),
    ("backtracking_matches_brute_force", backtracking_matches_brute_force),
    ("rule_characters_vanish_on_composite_rays", rule_characters_vanish_on_composite_rays),
];
