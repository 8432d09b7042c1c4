use std::time::Instant;

use murphy_toric::exact::{Field, PrimeField};
use murphy_toric::incidence::{
    check_configuration, enumerate_c_i, projective_plane, solutions, verify_equivalence, Configuration, EnumOptions,
    IncidenceData, Strategy,
};
use murphy_toric::moduli::{generate_conditions, MurphyInstance};

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

/// Counts configurations by scanning every assignment of plane elements,
/// independently of both enumerators.
fn scan_count(inc: &IncidenceData, field: &PrimeField) -> usize {
    let plane = projective_plane(field);
    let total = inc.objects();
    let mut count = 0;
    let mut idx = vec![0usize; total];
    loop {
        let c = Configuration {
            points: idx[..inc.points()].iter().map(|&k| plane[k]).collect(),
            lines: idx[inc.points()..].iter().map(|&k| plane[k]).collect(),
        };
        if check_configuration(field, &c, inc) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == total {
                return count;
            }
            idx[k] += 1;
            if idx[k] < plane.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn point_on_line_counts_match_the_full_scan() {
    let inc = IncidenceData::new(2, 1, vec![(1, 1)]).unwrap();
    for (p, expected) in [(2, 84), (3, 468)] {
        let field = fp(p);
        assert_eq!(scan_count(&inc, &field), expected);
        let report = verify_equivalence(&inc, &field, &EnumOptions::default(), false).unwrap();
        assert!(report.equal);
        assert_eq!((report.moduli_count, report.incidence_count), (expected, expected));
    }
}

#[test]
fn two_points_on_a_line_and_a_free_line() {
    let inc = IncidenceData::new(2, 2, vec![(1, 1), (2, 1)]).unwrap();
    for p in [2, 3] {
        let field = fp(p);
        let report = verify_equivalence(&inc, &field, &EnumOptions::default(), false).unwrap();
        assert!(report.equal, "p = {p}: {report:?}");
        assert_eq!(report.incidence_count, scan_count(&inc, &field));
    }
}

#[test]
fn fano_plane_over_f2_and_f3() {
    let fano = IncidenceData::fano();
    let start = Instant::now();
    let over_f2 = enumerate_c_i(&fano, &fp(2), &EnumOptions::default()).unwrap();
    // every labelled realization is an element of GL_3(F_2) acting on one of them
    assert_eq!(over_f2.len(), 168);
    assert!(over_f2.iter().all(|c| check_configuration(&fp(2), c, &fano)));
    let over_f3 = enumerate_c_i(&fano, &fp(3), &EnumOptions::default()).unwrap();
    assert!(over_f3.is_empty());
    eprintln!("fano enumeration: {:?}", start.elapsed());
}

#[test]
fn moduli_solutions_match_incidence_schemes_for_small_data() {
    let opts = EnumOptions::default();
    let mut checked = 0;
    for p in [2, 3] {
        let field = fp(p);
        for total in 2..=5 {
            for d in 0..=total {
                for inc in IncidenceData::all(d, total - d) {
                    let report = verify_equivalence(&inc, &field, &opts, true).unwrap();
                    assert!(report.equal, "p = {p}, {inc:?}: {report:?}");
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, 2 * (4 + 206));
}

#[test]
fn backtracking_agrees_with_brute_force() {
    let brute = EnumOptions { strategy: Strategy::Brute, ..Default::default() };
    let back = EnumOptions { strategy: Strategy::Backtrack, ..Default::default() };
    for inc in IncidenceData::all(2, 2).into_iter().chain(IncidenceData::all(1, 3)) {
        for p in [2, 3] {
            assert_eq!(
                enumerate_c_i(&inc, &fp(p), &brute).unwrap(),
                enumerate_c_i(&inc, &fp(p), &back).unwrap()
            );
        }
    }
}

fn apply(field: &PrimeField, m: &[[u32; 3]; 3], v: &[u32; 3]) -> [u32; 3] {
    let row = |r: &[u32; 3]| field.dot(r, v);
    [row(&m[0]), row(&m[1]), row(&m[2])]
}

#[test]
fn counts_are_invariant_under_a_projective_transformation() {
    let field = fp(3);
    let g = [[1, 1, 0], [0, 1, 1], [1, 0, 1]];
    // the inverse transpose h (g·hᵀ = 1), found by search
    let pairing = |h: &[[u32; 3]; 3]| {
        (0..3).all(|i| {
            (0..3).all(|j| {
                let e = (0..3).fold(0, |acc, k| field.add(&acc, &field.mul(&g[i][k], &h[j][k])));
                e == u32::from(i == j)
            })
        })
    };
    let g_inv_t = (0..3u32.pow(9))
        .map(|code| {
            let mut h = [[0u32; 3]; 3];
            for k in 0..9 {
                h[k / 3][k % 3] = code / 3u32.pow(k as u32) % 3;
            }
            h
        })
        .find(|h| pairing(h))
        .expect("g is invertible");
    let inc = IncidenceData::new(3, 2, vec![(1, 1), (2, 1), (3, 2)]).unwrap();
    let configs = enumerate_c_i(&inc, &field, &EnumOptions::default()).unwrap();
    let moved: Vec<Configuration<u32>> = configs
        .iter()
        .map(|c| {
            Configuration::normalized(
                &field,
                c.points.iter().map(|v| apply(&field, &g, v)).collect(),
                c.lines.iter().map(|v| apply(&field, &g_inv_t, v)).collect(),
            )
            .unwrap()
        })
        .collect();
    assert!(moved.iter().all(|c| check_configuration(&field, c, &inc)));
    let mut sorted = moved;
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted, configs);
}

#[test]
fn compiled_conditions_are_solved_independently() {
    let inc = IncidenceData::new(2, 1, vec![(1, 1)]).unwrap();
    let cs = generate_conditions(&MurphyInstance::new(inc.clone(), false).unwrap()).unwrap();
    let sols = solutions(&cs, &fp(2), &EnumOptions::default()).unwrap();
    assert_eq!(sols, enumerate_c_i(&inc, &fp(2), &EnumOptions::default()).unwrap());
}
