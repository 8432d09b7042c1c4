//! Torus-invariant divisors: the Cartier test, support functions, and the
//! divisor class group as the cokernel of M → Z^{Σ(1)}.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exact::linalg;
use crate::exact::{smith_normal_form, solve_integer_linear, Field, IntMatrix, RationalField, SolveFailure};
use crate::fan::{Character, Fan};

/// A T-invariant Weil divisor Σ a_ρ D_ρ, one coefficient per ray of a fan
/// (in the fan's ray order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TDivisor {
    pub coefficients: Vec<BigInt>,
}

impl TDivisor {
    pub fn new(coefficients: Vec<BigInt>) -> Self {
        TDivisor { coefficients }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        TDivisor::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// The principal divisor ρ ↦ ⟨m, ρ⟩ of a character.
    pub fn principal(fan: &Fan, m: &Character) -> Self {
        TDivisor::new(fan.rays().iter().map(|r| m.pair(r)).collect())
    }

    pub fn scaled(&self, k: i64) -> Self {
        TDivisor::new(self.coefficients.iter().map(|c| c * k).collect())
    }
}

/// Per maximal cone, the character m_σ with ⟨m_σ, ρ⟩ = a_ρ on its rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportFunction {
    pub cones: Vec<(Vec<usize>, Character)>,
}

/// The divisor is not Cartier: on `cone` the local equations only have the
/// rational solution `obstruction`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotCartier {
    pub cone: Vec<usize>,
    pub obstruction: Option<Vec<BigRational>>,
}

/// Solves for the local characters; `Err(NotCartier)` names the first cone
/// without an integral solution.
pub fn is_cartier(fan: &Fan, d: &TDivisor) -> Result<std::result::Result<SupportFunction, NotCartier>> {
    if d.coefficients.len() != fan.rays().len() {
        return Err(Error::DimensionMismatch(format!(
            "divisor has {} coefficients, fan has {} rays",
            d.coefficients.len(),
            fan.rays().len()
        )));
    }
    let mut cones = Vec::with_capacity(fan.max_cones().len());
    for cone in fan.max_cones() {
        let a = IntMatrix::from_rows(cone.iter().map(|&i| fan.rays()[i].0.clone()).collect())?;
        let b: Vec<BigInt> = cone.iter().map(|&i| d.coefficients[i].clone()).collect();
        match solve_integer_linear(&a, &b)? {
            Ok(m) => cones.push((cone.clone(), Character(m))),
            Err(SolveFailure::NotIntegral(x)) => {
                return Ok(Err(NotCartier {
                    cone: cone.clone(),
                    obstruction: Some(x),
                }))
            }
            Err(SolveFailure::NoRationalSolution) => {
                return Ok(Err(NotCartier {
                    cone: cone.clone(),
                    obstruction: None,
                }))
            }
        }
    }
    Ok(Ok(SupportFunction { cones }))
}

/// Evaluates φ_D(x) = ⟨m_σ, x⟩ for a cone σ containing x.
pub fn evaluate_support(s: &SupportFunction, fan: &Fan, x: &[BigRational]) -> Result<BigRational> {
    if x.len() != fan.dim() {
        return Err(Error::DimensionMismatch("point and fan dimensions differ".into()));
    }
    for (cone, m) in &s.cones {
        if cone_contains_point(fan, cone, x) {
            return Ok(m.pair_rational(x));
        }
    }
    Err(Error::OutsideSupport)
}

/// Whether a simplicial cone of the fan contains x (nonnegative coordinates
/// in the cone's ray basis).
pub fn cone_contains_point(fan: &Fan, cone: &[usize], x: &[BigRational]) -> bool {
    let f = RationalField;
    let cols: Vec<Vec<BigRational>> = (0..fan.dim())
        .map(|r| cone.iter().map(|&i| f.from_int(&fan.rays()[i].0[r])).collect())
        .collect();
    match linalg::solve(&f, &cols, x) {
        Some(lambda) => {
            // solve returns one solution; for independent rays it is unique
            linalg::apply(&f, &cols, &lambda) == x && lambda.iter().all(|l| !l.is_negative())
        }
        None => false,
    }
}

/// Class group of the toric variety as (free rank, torsion coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Cokernel of the ray-evaluation map M → Z^{Σ(1)}. Refuses fans whose rays
/// do not span, where the sequence is not left exact.
pub fn class_group(fan: &Fan) -> Result<ClassGroup> {
    let eval = IntMatrix::from_rows(fan.rays().iter().map(|r| r.0.clone()).collect())?;
    let factors = smith_normal_form(&eval);
    if factors.len() < fan.dim() {
        return Err(Error::RaysDoNotSpan {
            rank: factors.len(),
            dim: fan.dim(),
        });
    }
    Ok(ClassGroup {
        rank: fan.rays().len() - factors.len(),
        torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::parse_rational;
    use crate::fan::{projective_fan, LatticeVector};

    fn p112() -> Fan {
        Fan::new(
            2,
            vec![
                LatticeVector::from_i64s(&[1, 0]),
                LatticeVector::from_i64s(&[0, 1]),
                LatticeVector::from_i64s(&[-1, -2]),
            ],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap()
    }

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn divisor_on(fan: &Fan, ray: &[i64], coeff: i64) -> TDivisor {
        let idx = fan.ray_index(&LatticeVector::from_i64s(ray)).unwrap();
        let mut c = vec![0; fan.rays().len()];
        c[idx] = coeff;
        TDivisor::from_i64s(&c)
    }

    #[test]
    fn every_ray_divisor_on_the_plane_is_cartier() {
        let p2 = projective_fan(2).unwrap();
        let d = divisor_on(&p2, &[1, 0], 1);
        assert!(is_cartier(&p2, &d).unwrap().is_ok());
    }

    #[test]
    fn weighted_plane_has_a_non_cartier_divisor() {
        let fan = p112();
        let d = divisor_on(&fan, &[1, 0], 1);
        let err = is_cartier(&fan, &d).unwrap().unwrap_err();
        let singular: Vec<usize> = {
            let mut v = vec![
                fan.ray_index(&LatticeVector::from_i64s(&[-1, -2])).unwrap(),
                fan.ray_index(&LatticeVector::from_i64s(&[1, 0])).unwrap(),
            ];
            v.sort();
            v
        };
        assert_eq!(err.cone, singular);
        assert_eq!(err.obstruction, Some(vec![q("1"), q("-1/2")]));

        let twice = is_cartier(&fan, &d.scaled(2)).unwrap().unwrap();
        let m = &twice.cones.iter().find(|(c, _)| *c == singular).unwrap().1;
        assert_eq!(m, &Character::from_i64s(&[2, -1]));
        // φ(-1,-2) = a_{(-1,-2)} = 0 and φ(1,0) = 2
        assert_eq!(evaluate_support(&twice, &fan, &[q("-1"), q("-2")]).unwrap(), q("0"));
        assert_eq!(evaluate_support(&twice, &fan, &[q("1"), q("0")]).unwrap(), q("2"));
        assert_eq!(evaluate_support(&twice, &fan, &[q("0"), q("-1/2")]).unwrap(), q("1/2"));
    }

    #[test]
    fn support_function_on_the_projective_line() {
        let p1 = projective_fan(1).unwrap();
        let d = divisor_on(&p1, &[1], 1);
        let s = is_cartier(&p1, &d).unwrap().unwrap();
        assert_eq!(evaluate_support(&s, &p1, &[q("2")]).unwrap(), q("2"));
        assert_eq!(evaluate_support(&s, &p1, &[q("-3")]).unwrap(), q("0"));
        assert_eq!(evaluate_support(&s, &p1, &[q("0")]).unwrap(), q("0"));
    }

    #[test]
    fn boundary_points_agree_across_cones() {
        let p2 = projective_fan(2).unwrap();
        let d = TDivisor::from_i64s(&[3, -1, 2]);
        let s = is_cartier(&p2, &d).unwrap().unwrap();
        let x = [q("0"), q("5/3")];
        let values: Vec<BigRational> = s
            .cones
            .iter()
            .filter(|(c, _)| cone_contains_point(&p2, c, &x))
            .map(|(_, m)| m.pair_rational(&x))
            .collect();
        assert_eq!(values.len(), 2);
        assert_eq!(values[0], values[1]);
    }

    #[test]
    fn outside_support() {
        let fan = Fan::new(
            2,
            vec![LatticeVector::from_i64s(&[1, 0]), LatticeVector::from_i64s(&[0, 1])],
            vec![vec![0, 1]],
        )
        .unwrap();
        let s = is_cartier(&fan, &TDivisor::from_i64s(&[1, 1])).unwrap().unwrap();
        assert_eq!(evaluate_support(&s, &fan, &[q("-1"), q("0")]), Err(Error::OutsideSupport));
    }

    #[test]
    fn class_groups() {
        for n in 1..=5 {
            let cl = class_group(&projective_fan(n).unwrap()).unwrap();
            assert_eq!(cl, ClassGroup { rank: 1, torsion: vec![] });
        }
        assert_eq!(class_group(&p112()).unwrap(), ClassGroup { rank: 1, torsion: vec![] });
        let line = Fan::new(
            2,
            vec![LatticeVector::from_i64s(&[1, 0]), LatticeVector::from_i64s(&[-1, 0])],
            vec![vec![0], vec![1]],
        )
        .unwrap();
        assert_eq!(class_group(&line), Err(Error::RaysDoNotSpan { rank: 1, dim: 2 }));
    }

    #[test]
    fn torsion_is_reported() {
        // P^2 / (Z/3): rays (1,0), (0,1), (-1,-1) in a lattice scaled so the
        // evaluation matrix has invariant factors (1, 3).
        let fan = Fan::new(
            2,
            vec![
                LatticeVector::from_i64s(&[1, 0]),
                LatticeVector::from_i64s(&[1, 3]),
                LatticeVector::from_i64s(&[-2, -3]),
            ],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap();
        let cl = class_group(&fan).unwrap();
        assert_eq!(cl.rank, 1);
        assert_eq!(cl.torsion, vec![BigInt::from(3)]);
    }
}
