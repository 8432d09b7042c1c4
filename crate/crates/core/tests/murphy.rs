use num_bigint::BigInt;
use num_rational::BigRational;

use murphy_toric::chern::{validate_chern, validate_murphy_sampled, MurphyRule};
use murphy_toric::exact::RationalField;
use murphy_toric::fan::{is_complete, is_smooth, validate_fan};
use murphy_toric::incidence::{check_configuration, Configuration, IncidenceData};
use murphy_toric::klyachko::{check_compatibility, forced_filtration};
use murphy_toric::moduli::{audit_pairwise, MurphyInstance};
use murphy_toric::murphy_fan::{build_murphy_fan, ray_count_formula, BuildMode, RayLabel};

#[test]
fn materialized_fans_have_the_expected_shape() {
    let h = build_murphy_fan(3, BuildMode::Materialized).unwrap();
    let fan = h.fan().unwrap();
    assert_eq!(fan.rays().len(), 8);
    assert_eq!(fan.max_cones().len(), 12);
    assert_eq!(validate_fan(fan), Ok(()));
    assert!(is_smooth(fan) && is_complete(fan));
    for n in 2..=6 {
        let h = build_murphy_fan(n, BuildMode::Materialized).unwrap();
        assert_eq!(h.fan().unwrap().rays().len() as u128, ray_count_formula(n), "n = {n}");
    }
    assert_eq!(ray_count_formula(4), 20);
}

#[test]
fn membership_oracle_matches_the_face_lattice() {
    for n in 3..=5 {
        let h = build_murphy_fan(n, BuildMode::Materialized).unwrap();
        let fan = h.fan().unwrap();
        let labels = h.ray_labels().unwrap();
        let m = labels.len();
        let mut checked = 0;
        for a in 0..m {
            for b in a..m {
                for c in b..m {
                    let mut idx = vec![a, b, c];
                    idx.dedup();
                    let ls: Vec<RayLabel> = idx.iter().map(|&i| labels[i]).collect();
                    assert_eq!(h.cone_membership(&ls).unwrap(), fan.contains_face(&idx), "n = {n}, {ls:?}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }
}

fn sample_incidences() -> Vec<IncidenceData> {
    vec![
        IncidenceData::new(2, 1, vec![(1, 1)]).unwrap(),
        IncidenceData::new(3, 0, vec![]).unwrap(),
        IncidenceData::new(0, 3, vec![]).unwrap(),
        IncidenceData::new(2, 2, vec![(1, 1), (2, 1)]).unwrap(),
        IncidenceData::new(1, 3, vec![(1, 2)]).unwrap(),
        IncidenceData::new(3, 2, vec![(1, 1), (2, 1), (3, 2)]).unwrap(),
        IncidenceData::new(4, 2, vec![(1, 1), (2, 1), (2, 2), (3, 2)]).unwrap(),
    ]
}

#[test]
fn rule_datum_is_compatible_everywhere_it_is_checked() {
    for inc in sample_incidences() {
        let n = inc.objects() - 1;
        let rule = MurphyRule::new(inc.clone());
        if n <= 3 {
            let h = build_murphy_fan(n, BuildMode::Materialized).unwrap();
            let c = rule.explicit_on(&h).unwrap();
            assert_eq!(validate_chern(h.fan().unwrap(), &c).unwrap(), Ok(()), "{inc:?}");
        } else {
            let h = build_murphy_fan(n, BuildMode::Lazy).unwrap();
            assert_eq!(validate_murphy_sampled(&rule, &h, 1000, 11).unwrap(), Ok(1000), "{inc:?}");
        }
    }
}

#[test]
fn atoms_do_not_depend_on_the_cone_consulted() {
    let h = build_murphy_fan(3, BuildMode::Lazy).unwrap();
    for inc in [
        IncidenceData::new(2, 2, vec![(1, 1)]).unwrap(),
        IncidenceData::new(1, 3, vec![(1, 1), (1, 3)]).unwrap(),
    ] {
        let rule = MurphyRule::new(inc);
        for a in 1..=4 {
            for b in a + 1..=4 {
                let (ra, rb) = (h.ray_vector(RayLabel::original(a)).unwrap(), h.ray_vector(RayLabel::original(b)).unwrap());
                let dims: Vec<usize> = h
                    .flags()
                    .into_iter()
                    .filter(|f| (f.a == a && f.b == b) || (f.a == b && f.b == a))
                    .map(|f| {
                        let one = BigInt::from(1);
                        rule.characters(&f)
                            .unwrap()
                            .iter()
                            .filter(|u| u.pair(&ra) >= one && u.pair(&rb) >= one)
                            .count()
                    })
                    .collect();
                assert!(dims.len() > 1);
                assert!(dims.windows(2).all(|w| w[0] == w[1]), "pair ({a}, {b}): {dims:?}");
            }
        }
    }
}

fn rational(v: [i64; 3]) -> [BigRational; 3] {
    v.map(|x| BigRational::from_integer(x.into()))
}

#[test]
fn forced_filtrations_recover_the_rule_datum() {
    let q = RationalField;
    let cases: Vec<(IncidenceData, Vec<[i64; 3]>, Vec<[i64; 3]>)> = vec![
        (IncidenceData::new(2, 1, vec![(1, 1)]).unwrap(), vec![[1, 0, 0], [0, 1, 0]], vec![[0, 1, 0]]),
        (
            IncidenceData::new(2, 2, vec![(1, 1)]).unwrap(),
            vec![[1, 0, 0], [0, 1, 0]],
            vec![[0, 1, 0], [1, 1, 1]],
        ),
        (
            IncidenceData::new(3, 2, vec![(1, 1), (2, 1), (3, 2)]).unwrap(),
            vec![[1, 0, 0], [0, 1, 0], [1, 2, 3]],
            vec![[0, 0, 1], [1, 1, -1]],
        ),
    ];
    for (inc, points, lines) in cases {
        let config = Configuration::normalized(
            &q,
            points.into_iter().map(rational).collect(),
            lines.into_iter().map(rational).collect(),
        )
        .unwrap();
        assert!(check_configuration(&q, &config, &inc), "{inc:?}");
        let n = inc.objects() - 1;
        let h = build_murphy_fan(n, BuildMode::Materialized).unwrap();
        let filt = forced_filtration(&q, &h, &config).unwrap();
        let assignment = check_compatibility(h.fan().unwrap(), &filt).unwrap();
        assert_eq!(assignment.to_chern(), MurphyRule::new(inc).explicit_on(&h).unwrap());
    }
}

#[test]
fn no_cone_holds_three_original_rays() {
    let h = build_murphy_fan(3, BuildMode::Materialized).unwrap();
    let inc = IncidenceData::new(2, 2, vec![(2, 2)]).unwrap();
    let m = MurphyInstance::with_handle(inc, h).unwrap();
    assert_eq!(audit_pairwise(&m).unwrap(), Ok(()));
    let fano = MurphyInstance::new(IncidenceData::fano(), false).unwrap();
    assert_eq!(fano.n(), 13);
    assert_eq!(audit_pairwise(&fano).unwrap(), Ok(()));
}
