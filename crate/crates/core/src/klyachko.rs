//! Klyachko filtrations of a fixed fiber and the compatibility check that
//! recovers, cone by cone, the characters and a common splitting basis.
//!
//! Filtrations are decreasing with the membership rule
//! dim E^ρ(j) = #{u ∈ u(σ) : ⟨u, ρ⟩ ≥ j}.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::chern::{ChernDatum, ExplicitChern, MurphyRule};
use crate::error::{Error, Result};
use crate::exact::linalg::{self, Row};
use crate::exact::{solve_integer_linear, Field, IntMatrix};
use crate::fan::{is_smooth, Character, Fan, LatticeVector};
use crate::incidence::Configuration;
use crate::murphy_fan::{label_vector, Flag, MurphyFanHandle, RayLabel};

/// A subspace of F^r held as its canonical (RREF) row basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Vec<Row<F>>,
}

impl<F: Field> Subspace<F> {
    pub fn new(field: &F, ambient: usize, rows: Vec<Row<F>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ambient) {
            return Err(Error::DimensionMismatch(format!("basis vectors must have length {ambient}")));
        }
        Ok(Subspace {
            ambient,
            basis: linalg::row_space(field, &rows),
        })
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: vec![] }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| (0..ambient).map(|k| if k == i { field.one() } else { field.zero() }).collect())
            .collect();
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Row<F>] {
        &self.basis
    }

    pub fn intersect(&self, field: &F, other: &Self) -> Self {
        Subspace {
            ambient: self.ambient,
            basis: linalg::intersect(field, &self.basis, &other.basis, self.ambient),
        }
    }

    pub fn contains_subspace(&self, field: &F, other: &Self) -> bool {
        other.basis.iter().all(|v| linalg::contains(field, &self.basis, v))
    }
}

/// Filtration of one ray: steps (j_k, V_k) with j_1 < j_2 < ... and
/// E(i) = V_k for j_k ≤ i < j_{k+1}, the full space for i < j_1. The last
/// step is always the zero subspace; input whose last listed subspace is
/// nonzero gets an implicit zero step one past its jump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayFiltration<F: Field> {
    rank: usize,
    steps: Vec<(i64, Subspace<F>)>,
}

impl<F: Field> RayFiltration<F> {
    pub fn new(field: &F, rank: usize, mut steps: Vec<(i64, Subspace<F>)>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidFiltration(m));
        if steps.is_empty() {
            return bad("a filtration needs at least one step".into());
        }
        let full = Subspace::full(field, rank);
        let mut prev_jump = i64::MIN;
        let mut prev = &full;
        for (j, v) in &steps {
            if v.ambient != rank {
                return bad(format!("subspace at jump {j} lives in dimension {}, rank is {rank}", v.ambient));
            }
            if *j <= prev_jump {
                return bad(format!("jumps must increase strictly, got {j} after {prev_jump}"));
            }
            if v.dim() >= prev.dim() || !prev.contains_subspace(field, v) {
                return bad(format!("subspace at jump {j} is not strictly inside the previous one"));
            }
            prev_jump = *j;
            prev = v;
        }
        let (last_jump, last) = steps.last().expect("nonempty");
        if last.dim() > 0 {
            let next = last_jump.checked_add(1).ok_or_else(|| Error::InvalidFiltration("jump overflow".into()))?;
            steps.push((next, Subspace::zero(rank)));
        }
        Ok(RayFiltration { rank, steps })
    }

    /// Full space for j ≤ 0 and zero from j = 1 on.
    pub fn trivial(rank: usize) -> Self {
        RayFiltration {
            rank,
            steps: vec![(1, Subspace::zero(rank))],
        }
    }

    /// Full space for j ≤ 0, `v` at j = 1, zero from j = 2 on.
    pub fn single(field: &F, v: Subspace<F>) -> Result<Self> {
        let rank = v.ambient;
        Self::new(field, rank, vec![(1, v)])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn steps(&self) -> &[(i64, Subspace<F>)] {
        &self.steps
    }

    /// E(j); `None` stands for the full space.
    pub fn at(&self, j: i64) -> Option<&Subspace<F>> {
        self.steps.iter().rev().find(|(jump, _)| *jump <= j).map(|(_, v)| v)
    }

    pub fn dim_at(&self, j: i64) -> usize {
        self.at(j).map_or(self.rank, Subspace::dim)
    }

    /// Values ⟨u, ρ⟩ that characters can take: one below each jump.
    pub fn candidate_values(&self) -> Vec<i64> {
        self.steps.iter().map(|(j, _)| j - 1).collect()
    }

    /// (jump, dim) at each jump.
    pub fn signature(&self) -> Vec<(i64, usize)> {
        self.steps.iter().map(|(j, v)| (*j, v.dim())).collect()
    }
}

/// Filtrations of a rank-r fiber indexed by the rays of a fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration<F: Field> {
    pub field: F,
    pub rank: usize,
    pub rays: BTreeMap<usize, RayFiltration<F>>,
}

impl<F: Field> Filtration<F> {
    pub fn new(field: F, rank: usize, rays: BTreeMap<usize, RayFiltration<F>>) -> Result<Self> {
        if let Some((r, _)) = rays.iter().find(|(_, f)| f.rank != rank) {
            return Err(Error::InvalidFiltration(format!("ray {r} has a filtration of another rank")));
        }
        Ok(Filtration { field, rank, rays })
    }

    pub fn trivial(field: F, fan: &Fan, rank: usize) -> Self {
        let rays = (0..fan.rays().len()).map(|i| (i, RayFiltration::trivial(rank))).collect();
        Filtration { field, rank, rays }
    }
}

/// Per maximal cone: the characters (sorted) and a splitting basis, where
/// `bases[σ][k]` is the vector L_u for the k-th character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterAssignment<F: Field> {
    pub rank: usize,
    pub cones: BTreeMap<Vec<usize>, Vec<Character>>,
    pub bases: BTreeMap<Vec<usize>, Vec<Row<F>>>,
}

impl<F: Field> CharacterAssignment<F> {
    pub fn to_chern(&self) -> ExplicitChern {
        ExplicitChern {
            rank: self.rank,
            cones: self.cones.clone(),
        }
    }
}

/// Multiplicities m(v) = Σ_ε (-1)^{|ε|} d(v + ε) over the product grid of
/// `axes`, for ε ∈ {0,1}^n. Only nonzero multiplicities are returned.
pub fn finite_differences(axes: &[Vec<i64>], mut d: impl FnMut(&[i64]) -> usize) -> BTreeMap<Vec<i64>, i64> {
    let n = axes.len();
    let mut out = BTreeMap::new();
    let mut cache: HashMap<Vec<i64>, usize> = HashMap::new();
    for cell in grid(axes) {
        let mut m = 0i64;
        for eps in 0u32..1 << n {
            let shifted: Vec<i64> = (0..n).map(|i| cell[i] + (eps >> i & 1) as i64).collect();
            let value = match cache.get(&shifted) {
                Some(&v) => v,
                None => {
                    let v = d(&shifted);
                    cache.insert(shifted, v);
                    v
                }
            };
            if eps.count_ones() % 2 == 0 {
                m += value as i64;
            } else {
                m -= value as i64;
            }
        }
        if m != 0 {
            out.insert(cell, m);
        }
    }
    out
}

fn grid(axes: &[Vec<i64>]) -> Vec<Vec<i64>> {
    axes.iter().fold(vec![vec![]], |acc, axis| {
        acc.into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect()
    })
}

/// ∩_i E^{r_i}(v_i) on a cone.
fn cell_space<F: Field>(field: &F, rank: usize, filts: &[&RayFiltration<F>], v: &[i64]) -> Subspace<F> {
    let mut acc: Option<Subspace<F>> = None;
    for (f, &j) in filts.iter().zip(v) {
        if let Some(s) = f.at(j) {
            acc = Some(match acc {
                None => s.clone(),
                Some(a) => a.intersect(field, s),
            });
        }
    }
    acc.unwrap_or_else(|| Subspace::full(field, rank))
}

/// Failure of the splitting construction at a grid cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitFailure {
    pub cell: Vec<i64>,
    pub reason: String,
}

/// Builds L_v for every cell with positive multiplicity, from the deepest
/// cells outward: the new vectors at v complete Σ_i W(v + e_i) inside W(v).
/// The result is then verified to be a basis reproducing every W on the
/// grid (including the cells one step past each candidate).
pub fn build_splitting_basis<F: Field>(
    field: &F,
    rank: usize,
    filts: &[&RayFiltration<F>],
    multiplicities: &BTreeMap<Vec<i64>, i64>,
) -> std::result::Result<Vec<(Vec<i64>, Row<F>)>, SplitFailure> {
    let n = filts.len();
    let mut cells: Vec<(&Vec<i64>, i64)> = multiplicities.iter().map(|(c, &m)| (c, m)).collect();
    cells.sort_by(|a, b| {
        let sa: i64 = a.0.iter().sum();
        let sb: i64 = b.0.iter().sum();
        sb.cmp(&sa).then_with(|| b.0.cmp(a.0))
    });
    let mut chosen: Vec<(Vec<i64>, Row<F>)> = Vec::with_capacity(rank);
    for (cell, m) in cells {
        if m < 0 {
            return Err(SplitFailure {
                cell: cell.clone(),
                reason: format!("negative multiplicity {m}"),
            });
        }
        let w = cell_space(field, rank, filts, cell);
        let mut span: Vec<Row<F>> = Vec::new();
        for i in 0..n {
            let mut up = cell.clone();
            up[i] += 1;
            span.extend(cell_space(field, rank, filts, &up).basis);
        }
        let mut span = linalg::row_space(field, &span);
        let mut added = Vec::new();
        for v in w.basis() {
            if !linalg::contains(field, &span, v) {
                span.push(v.clone());
                span = linalg::row_space(field, &span);
                added.push(v.clone());
            }
        }
        if added.len() as i64 != m {
            return Err(SplitFailure {
                cell: cell.clone(),
                reason: format!("W has {} new dimensions over the deeper cells, multiplicity is {m}", added.len()),
            });
        }
        chosen.extend(added.into_iter().map(|v| (cell.clone(), v)));
    }

    let all: Vec<Row<F>> = chosen.iter().map(|(_, v)| v.clone()).collect();
    if chosen.len() != rank || linalg::rank(field, &all) != rank {
        return Err(SplitFailure {
            cell: vec![],
            reason: format!("{} chosen vectors do not form a basis of the rank-{rank} fiber", chosen.len()),
        });
    }
    let axes: Vec<Vec<i64>> = filts
        .iter()
        .map(|f| {
            let mut a: Vec<i64> = f.candidate_values().iter().flat_map(|&c| [c, c + 1]).collect();
            a.sort_unstable();
            a.dedup();
            a
        })
        .collect();
    for w_cell in grid(&axes) {
        let expected = cell_space(field, rank, filts, &w_cell);
        let span: Vec<Row<F>> = chosen
            .iter()
            .filter(|(c, _)| c.iter().zip(&w_cell).all(|(a, b)| a >= b))
            .map(|(_, v)| v.clone())
            .collect();
        if linalg::row_space(field, &span) != expected.basis {
            return Err(SplitFailure {
                cell: w_cell,
                reason: "splitting basis does not reproduce the intersection".into(),
            });
        }
    }
    Ok(chosen)
}

/// Character with the given values on a Z-basis of rays.
fn dual_character(rays: &[&LatticeVector], values: &[i64]) -> Result<Character> {
    let a = IntMatrix::from_rows(rays.iter().map(|r| r.0.clone()).collect())?;
    let b: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
    solve_integer_linear(&a, &b)?
        .map(Character)
        .map_err(|e| Error::NoIntegralSolution(format!("character with values {values:?}: {e:?}")))
}

fn check_cone<F: Field>(
    fan: &Fan,
    filt: &Filtration<F>,
    cone: &[usize],
) -> Result<(Vec<Character>, Vec<Row<F>>)> {
    let field = &filt.field;
    let filts: Vec<&RayFiltration<F>> = cone
        .iter()
        .map(|r| {
            filt.rays
                .get(r)
                .ok_or_else(|| Error::InvalidFiltration(format!("no filtration on ray {r}")))
        })
        .collect::<Result<_>>()?;
    let axes: Vec<Vec<i64>> = filts.iter().map(|f| f.candidate_values()).collect();
    let mult = finite_differences(&axes, |v| cell_space(field, filt.rank, &filts, v).dim());
    if let Some((cell, m)) = mult.iter().find(|(_, &m)| m < 0) {
        return Err(Error::Incompatible {
            cone: cone.to_vec(),
            cell: cell.clone(),
            reason: format!("finite difference {m} is negative"),
        });
    }
    let total: i64 = mult.values().sum();
    if total != filt.rank as i64 {
        return Err(Error::Incompatible {
            cone: cone.to_vec(),
            cell: vec![],
            reason: format!("multiplicities sum to {total}, rank is {}", filt.rank),
        });
    }
    let basis = build_splitting_basis(field, filt.rank, &filts, &mult).map_err(|f| Error::Incompatible {
        cone: cone.to_vec(),
        cell: f.cell,
        reason: f.reason,
    })?;
    let rays = fan.cone_rays(cone);
    let mut pairs: Vec<(Character, Row<F>)> = basis
        .into_iter()
        .map(|(cell, v)| Ok((dual_character(&rays, &cell)?, v)))
        .collect::<Result<_>>()?;
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(pairs.into_iter().unzip())
}

/// Runs the compatibility check on every maximal cone of a smooth fan with
/// full-dimensional maximal cones.
pub fn check_compatibility<F: Field>(fan: &Fan, filt: &Filtration<F>) -> Result<CharacterAssignment<F>> {
    if !is_smooth(fan) {
        return Err(Error::NonSmoothFan);
    }
    if let Some(c) = fan.max_cones().iter().find(|c| c.len() != fan.dim()) {
        return Err(Error::NotFullDimensional(c.clone()));
    }
    if let Some(r) = (0..fan.rays().len()).find(|r| !filt.rays.contains_key(r)) {
        return Err(Error::InvalidFiltration(format!("no filtration on ray {r}")));
    }
    let results: Vec<(Vec<usize>, (Vec<Character>, Vec<Row<F>>))> = fan
        .max_cones()
        .par_iter()
        .map(|cone| Ok((cone.clone(), check_cone(fan, filt, cone)?)))
        .collect::<Result<_>>()?;
    let mut cones = BTreeMap::new();
    let mut bases = BTreeMap::new();
    for (cone, (chars, basis)) in results {
        cones.insert(cone.clone(), chars);
        bases.insert(cone, basis);
    }
    Ok(CharacterAssignment {
        rank: filt.rank,
        cones,
        bases,
    })
}

/// (jump, dim) steps of the filtration determined by character values on a
/// ray: at j = v + 1 for each distinct value v, dim = #{values ≥ j}.
pub fn signature_from_values(values: &[BigInt]) -> Vec<(i64, usize)> {
    let mut distinct: Vec<i64> = values
        .iter()
        .map(|v| i64::try_from(v).expect("character values fit in i64"))
        .collect();
    distinct.sort_unstable();
    distinct.dedup();
    distinct
        .into_iter()
        .map(|v| {
            let j = v + 1;
            (j, values.iter().filter(|x| **x >= BigInt::from(j)).count())
        })
        .collect()
}

/// Where a ray sits: an index into a materialized fan, or a label of Σ_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayRef {
    Index(usize),
    Label(RayLabel),
}

/// Filtration signature of a ray under a Chern datum, read off any maximal
/// cone containing the ray.
pub fn filtration_signature(
    c: &ChernDatum,
    fan: Option<&Fan>,
    handle: Option<&MurphyFanHandle>,
    ray: RayRef,
) -> Result<Vec<(i64, usize)>> {
    match (c, ray) {
        (ChernDatum::Explicit(e), RayRef::Index(r)) => {
            let fan = fan.ok_or_else(|| Error::InvalidChern("explicit datum needs its fan".into()))?;
            let v = fan.rays().get(r).ok_or_else(|| Error::RayNotInFan(r.to_string()))?;
            let (_, chars) = e
                .cones
                .iter()
                .find(|(cone, _)| cone.contains(&r))
                .ok_or_else(|| Error::RayNotInFan(r.to_string()))?;
            Ok(signature_from_values(&chars.iter().map(|u| u.pair(v)).collect::<Vec<_>>()))
        }
        (ChernDatum::Murphy(rule), RayRef::Label(label)) => {
            let handle = handle.ok_or_else(|| Error::InvalidChern("rule datum needs Σ_n".into()))?;
            label.validate(handle.n()).map_err(|_| Error::RayNotInFan(label.to_string()))?;
            murphy_signature(rule, handle, label)
        }
        (ChernDatum::Murphy(rule), RayRef::Index(r)) => {
            let handle = handle.ok_or_else(|| Error::InvalidChern("rule datum needs Σ_n".into()))?;
            let labels = handle
                .ray_labels()
                .ok_or_else(|| Error::InvalidChern("ray index needs a materialized fan".into()))?;
            let label = *labels.get(r).ok_or_else(|| Error::RayNotInFan(r.to_string()))?;
            murphy_signature(rule, handle, label)
        }
        (ChernDatum::Explicit(_), RayRef::Label(l)) => Err(Error::RayNotInFan(l.to_string())),
    }
}

fn murphy_signature(rule: &MurphyRule, handle: &MurphyFanHandle, label: RayLabel) -> Result<Vec<(i64, usize)>> {
    let flag: Flag = handle.flag_containing(&[label])?;
    let v = label_vector(handle.n(), label);
    let chars = rule.characters(&flag)?;
    Ok(signature_from_values(&chars.iter().map(|u| u.pair(&v)).collect::<Vec<_>>()))
}

/// The forced filtrations of a configuration on materialized Σ_n: y_i at
/// j = 1 on ρ_i (a point spans a line of F³, a line is the kernel of its
/// coordinates), trivial on composite rays.
pub fn forced_filtration<F: Field>(
    field: &F,
    handle: &MurphyFanHandle,
    config: &Configuration<F::Elem>,
) -> Result<Filtration<F>> {
    let labels = handle
        .ray_labels()
        .ok_or_else(|| Error::InvalidFiltration("forced filtrations need a materialized fan".into()))?;
    let d = config.points.len();
    if d + config.lines.len() != handle.n() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "{} objects do not match Σ_{}",
            d + config.lines.len(),
            handle.n()
        )));
    }
    let mut rays = BTreeMap::new();
    for (r, label) in labels.iter().enumerate() {
        let f = match label.original_index() {
            None => RayFiltration::trivial(3),
            Some(i) if i <= d => {
                RayFiltration::single(field, Subspace::new(field, 3, vec![config.points[i - 1].to_vec()])?)?
            }
            Some(i) => {
                let l = config.lines[i - d - 1].to_vec();
                let kernel = linalg::null_space(field, &[l], 3);
                RayFiltration::single(field, Subspace::new(field, 3, kernel)?)?
            }
        };
        rays.insert(r, f);
    }
    Filtration::new(field.clone(), 3, rays)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RationalField;
    use crate::fan::projective_fan;
    use crate::incidence::IncidenceData;
    use crate::murphy_fan::{build_murphy_fan, BuildMode};
    use num_rational::BigRational;

    type Q = RationalField;

    fn q(v: &[i64]) -> Row<Q> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    fn sub(rows: &[&[i64]]) -> Subspace<Q> {
        Subspace::new(&RationalField, rows.first().map_or(3, |r| r.len()), rows.iter().map(|r| q(r)).collect())
            .unwrap()
    }

    #[test]
    fn filtration_steps_and_dims() {
        let f = RayFiltration::single(&RationalField, sub(&[&[1, 0, 0]])).unwrap();
        assert_eq!(f.dim_at(0), 3);
        assert_eq!(f.dim_at(1), 1);
        assert_eq!(f.dim_at(2), 0);
        assert_eq!(f.signature(), vec![(1, 1), (2, 0)]);
        assert_eq!(f.candidate_values(), vec![0, 1]);
        let not_nested = RayFiltration::new(&RationalField, 3, vec![(1, sub(&[&[1, 0, 0]])), (2, sub(&[&[0, 1, 0]]))]);
        assert!(not_nested.is_err());
        let not_increasing =
            RayFiltration::new(&RationalField, 3, vec![(2, sub(&[&[1, 0, 0], &[0, 1, 0]])), (2, sub(&[&[1, 0, 0]]))]);
        assert!(not_increasing.is_err());
    }

    #[test]
    fn trivial_filtrations_give_zero_characters() {
        let p2 = projective_fan(2).unwrap();
        let f = Filtration::trivial(RationalField, &p2, 3);
        let a = check_compatibility(&p2, &f).unwrap();
        for chars in a.cones.values() {
            assert_eq!(chars, &vec![Character::zero(2); 3]);
        }
    }

    #[test]
    fn point_point_line_on_the_plane() {
        let p2 = projective_fan(2).unwrap();
        let e1 = p2.ray_index(&LatticeVector::from_i64s(&[1, 0])).unwrap();
        let e2 = p2.ray_index(&LatticeVector::from_i64s(&[0, 1])).unwrap();
        let e3 = p2.ray_index(&LatticeVector::from_i64s(&[-1, -1])).unwrap();
        let f = &RationalField;
        let mut rays = BTreeMap::new();
        rays.insert(e1, RayFiltration::single(f, sub(&[&[1, 0, 0]])).unwrap());
        rays.insert(e2, RayFiltration::single(f, sub(&[&[0, 1, 0]])).unwrap());
        rays.insert(e3, RayFiltration::single(f, sub(&[&[1, 0, 0], &[0, 0, 1]])).unwrap());
        let filt = Filtration::new(RationalField, 3, rays).unwrap();
        let a = check_compatibility(&p2, &filt).unwrap();
        let mut key = vec![e1, e2];
        key.sort();
        let r1 = &p2.rays()[e1];
        let r2 = &p2.rays()[e2];
        let mut pairs: Vec<(BigInt, BigInt)> = a.cones[&key].iter().map(|u| (u.pair(r1), u.pair(r2))).collect();
        pairs.sort();
        let expected: Vec<(BigInt, BigInt)> = [(0, 0), (0, 1), (1, 0)]
            .iter()
            .map(|&(x, y)| (BigInt::from(x), BigInt::from(y)))
            .collect();
        assert_eq!(pairs, expected);
    }

    #[test]
    fn three_lines_in_a_plane_are_incompatible() {
        let cone = Fan::new(
            3,
            vec![
                LatticeVector::from_i64s(&[1, 0, 0]),
                LatticeVector::from_i64s(&[0, 1, 0]),
                LatticeVector::from_i64s(&[0, 0, 1]),
            ],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        let f = &RationalField;
        let lines = [sub(&[&[1, 0]]), sub(&[&[0, 1]]), sub(&[&[1, 1]])];
        let rays = lines
            .into_iter()
            .enumerate()
            .map(|(i, l)| (i, RayFiltration::single(f, l).unwrap()))
            .collect();
        let filt = Filtration::new(RationalField, 2, rays).unwrap();
        match check_compatibility(&cone, &filt) {
            Err(Error::Incompatible { cell, .. }) => assert_eq!(cell, vec![0, 0, 0]),
            other => panic!("expected incompatibility, got {other:?}"),
        }
    }

    #[test]
    fn prescribed_grid_on_the_line_fails_to_split() {
        // two rays of P^1 carrying the same line of F^2, with a prescribed
        // grid that demands a zero-dimensional intersection at (1, 1)
        let f = &RationalField;
        let line = RayFiltration::single(f, sub(&[&[1, 0]])).unwrap();
        let filts = [&line, &line];
        let axes = vec![line.candidate_values(), line.candidate_values()];
        let prescribed = |v: &[i64]| match (v[0], v[1]) {
            (a, b) if a >= 2 || b >= 2 => 0,
            (1, 1) => 0,
            (1, _) | (_, 1) => 1,
            _ => 2,
        };
        let mult = finite_differences(&axes, prescribed);
        assert_eq!(mult.values().sum::<i64>(), 2);
        let err = build_splitting_basis(f, 2, &filts, &mult).unwrap_err();
        assert!(!err.cell.is_empty());

        // the true grid splits with one character at (0,0) and one at (1,1)
        let truth = finite_differences(&axes, |v| cell_space(f, 2, &filts, v).dim());
        assert_eq!(truth, BTreeMap::from([(vec![0, 0], 1), (vec![1, 1], 1)]));
        assert!(build_splitting_basis(f, 2, &filts, &truth).is_ok());
    }

    #[test]
    fn signatures() {
        let h = build_murphy_fan(3, BuildMode::Lazy).unwrap();
        let rule = MurphyRule::new(IncidenceData::new(2, 2, vec![(1, 1)]).unwrap());
        let c = ChernDatum::Murphy(rule);
        let sig = |l: RayLabel| filtration_signature(&c, None, Some(&h), RayRef::Label(l)).unwrap();
        assert_eq!(sig(RayLabel::original(1)), vec![(1, 1), (2, 0)]);
        assert_eq!(sig(RayLabel::original(4)), vec![(1, 2), (2, 0)]);
        assert_eq!(sig(RayLabel::from_members([1, 2, 4])), vec![(1, 0)]);
        assert!(filtration_signature(&c, None, Some(&h), RayRef::Label(RayLabel::from_members([1, 2, 3, 4, 5])))
            .is_err());

        let p2 = projective_fan(2).unwrap();
        let trivial = ChernDatum::Explicit(ExplicitChern::trivial(&p2, 3));
        assert_eq!(filtration_signature(&trivial, Some(&p2), None, RayRef::Index(0)).unwrap(), vec![(1, 0)]);
        assert!(matches!(
            filtration_signature(&trivial, Some(&p2), None, RayRef::Index(9)),
            Err(Error::RayNotInFan(_))
        ));
    }

    #[test]
    fn forced_filtrations_round_trip_to_the_rule() {
        let f = &RationalField;
        let inc = IncidenceData::new(2, 1, vec![(1, 1)]).unwrap();
        let config = Configuration::normalized(f, vec![q3(1, 0, 0), q3(0, 1, 0)], vec![q3(0, 1, 0)]).unwrap();
        let h = build_murphy_fan(2, BuildMode::Materialized).unwrap();
        let filt = forced_filtration(f, &h, &config).unwrap();
        let a = check_compatibility(h.fan().unwrap(), &filt).unwrap();
        assert_eq!(a.to_chern(), MurphyRule::new(inc).explicit_on(&h).unwrap());
    }

    fn q3(a: i64, b: i64, c: i64) -> [BigRational; 3] {
        [a, b, c].map(|x| BigRational::from_integer(x.into()))
    }
}
