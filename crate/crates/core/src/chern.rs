//! Equivariant Chern data: per-cone character multisets u(σ), the
//! restriction-compatibility check, elementary symmetric piecewise
//! polynomials, and the four-case rule attaching a datum to incidence data.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{solve_integer_linear, IntMatrix};
use crate::fan::{Character, Fan, LatticeVector};
use crate::incidence::{IncidenceData, ObjectKind};
use crate::murphy_fan::{label_vector, Flag, MurphyFanHandle, RayLabel};
use crate::poly::{elementary_symmetric, Polynomial};

/// Values (⟨u, ρ_a⟩, ⟨u, ρ_b⟩) of the three characters on a maximal cone
/// whose original rays carry the objects y_a and y_b. `incident` only
/// matters for a point/line pair.
pub fn value_pairs(a: ObjectKind, b: ObjectKind, incident: bool) -> [(i64, i64); 3] {
    use ObjectKind::*;
    match (a, b) {
        (Point, Point) => [(0, 0), (1, 0), (0, 1)],
        (Point, Line) if incident => [(0, 0), (0, 1), (1, 1)],
        (Point, Line) => [(1, 0), (0, 1), (0, 1)],
        (Line, Line) => [(1, 0), (0, 1), (1, 1)],
        (Line, Point) => {
            let [p, q, r] = value_pairs(Point, Line, incident);
            [(p.1, p.0), (q.1, q.0), (r.1, r.0)]
        }
    }
}

/// The rule-based rank-3 datum attached to incidence data on Σ_n with
/// n = d + d' - 1: original ray ρ_i carries y_i (points first, then lines).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MurphyRule {
    incidence: IncidenceData,
}

impl MurphyRule {
    pub fn new(incidence: IncidenceData) -> Self {
        MurphyRule { incidence }
    }

    pub fn incidence(&self) -> &IncidenceData {
        &self.incidence
    }

    /// n = d + d' - 1.
    pub fn n(&self) -> usize {
        self.incidence.objects().saturating_sub(1)
    }

    pub fn rank(&self) -> usize {
        3
    }

    /// Value pairs on (ρ_a, ρ_b) for original ray indices a, b.
    pub fn pair_values(&self, a: usize, b: usize) -> [(i64, i64); 3] {
        let ka = self.incidence.kind(a);
        let kb = self.incidence.kind(b);
        let incident = self.incidence.objects_incident(a, b);
        value_pairs(ka, kb, incident)
    }

    /// u(σ) for the maximal cone of a flag: the characters vanishing on the
    /// composite rays with the case-table values on (ρ_a, ρ_b), solved in
    /// the dual basis of the cone's rays. Sorted.
    pub fn characters(&self, flag: &Flag) -> Result<Vec<Character>> {
        let n = self.n();
        flag.validate(n)?;
        let rays: Vec<LatticeVector> = flag.labels().into_iter().map(|l| label_vector(n, l)).collect();
        let matrix = IntMatrix::from_rows(rays.iter().map(|r| r.0.clone()).collect())?;
        let mut out = Vec::with_capacity(3);
        for (va, vb) in self.pair_values(flag.a, flag.b) {
            let mut rhs = vec![BigInt::from(0); n];
            rhs[0] = va.into();
            rhs[1] = vb.into();
            let u = solve_integer_linear(&matrix, &rhs)?
                .map_err(|e| Error::InvalidChern(format!("cone {flag:?} is not unimodular: {e:?}")))?;
            out.push(Character(u));
        }
        out.sort();
        Ok(out)
    }

    /// The datum over a materialized Σ_n as an explicit cone table.
    pub fn explicit_on(&self, handle: &MurphyFanHandle) -> Result<ExplicitChern> {
        check_dimension(self, handle)?;
        let (fan, labels) = match (handle.fan(), handle.ray_labels()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(Error::InvalidChern("explicit datum needs a materialized fan".into())),
        };
        let mut cones = BTreeMap::new();
        for cone in fan.max_cones() {
            let cone_labels: Vec<RayLabel> = cone.iter().map(|&i| labels[i]).collect();
            let flag = Flag::from_labels(&cone_labels, handle.n())?;
            cones.insert(cone.clone(), self.characters(&flag)?);
        }
        Ok(ExplicitChern { rank: 3, cones })
    }
}

fn check_dimension(rule: &MurphyRule, handle: &MurphyFanHandle) -> Result<()> {
    if rule.incidence.objects() < 3 || rule.n() != handle.n() {
        return Err(Error::DimensionMismatch(format!(
            "incidence data with {} objects needs n = {}, fan has n = {}",
            rule.incidence.objects(),
            rule.incidence.objects() as i64 - 1,
            handle.n()
        )));
    }
    Ok(())
}

/// Per-maximal-cone character multisets, keyed by the cone's sorted ray indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitChern {
    pub rank: usize,
    pub cones: BTreeMap<Vec<usize>, Vec<Character>>,
}

impl ExplicitChern {
    /// All-zero characters on every maximal cone (the trivial bundle).
    pub fn trivial(fan: &Fan, rank: usize) -> Self {
        let cones = fan
            .max_cones()
            .iter()
            .map(|c| (c.clone(), vec![Character::zero(fan.dim()); rank]))
            .collect();
        ExplicitChern { rank, cones }
    }
}

/// An equivariant Chern datum, either as an explicit table or by rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChernDatum {
    Explicit(ExplicitChern),
    Murphy(MurphyRule),
}

/// Attaches the four-case datum to incidence data on Σ_n.
pub fn murphy_chern(incidence: &IncidenceData, handle: &MurphyFanHandle) -> Result<ChernDatum> {
    let rule = MurphyRule::new(incidence.clone());
    check_dimension(&rule, handle)?;
    Ok(ChernDatum::Murphy(rule))
}

/// Two maximal cones whose characters restrict differently to a shared face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernViolation {
    pub first: String,
    pub second: String,
    pub face: String,
    pub first_values: Vec<Vec<BigInt>>,
    pub second_values: Vec<Vec<BigInt>>,
}

impl fmt::Display for ChernViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cones {} and {} disagree on face {}: {:?} vs {:?}",
            self.first, self.second, self.face, self.first_values, self.second_values
        )
    }
}

/// Multiset of value vectors (⟨u, ρ⟩)_{ρ ∈ face} over u ∈ chars, sorted.
fn restriction(chars: &[Character], face: &[&LatticeVector]) -> Vec<Vec<BigInt>> {
    let mut values: Vec<Vec<BigInt>> = chars
        .iter()
        .map(|u| face.iter().map(|r| u.pair(r)).collect())
        .collect();
    values.sort();
    values
}

/// Checks restriction compatibility on every pair of maximal cones sharing
/// a nonzero face.
pub fn validate_chern(fan: &Fan, c: &ExplicitChern) -> Result<std::result::Result<(), ChernViolation>> {
    check_explicit_shape(fan, c)?;
    let cones = fan.max_cones();
    for (i, a) in cones.iter().enumerate() {
        for b in &cones[i + 1..] {
            let face: Vec<usize> = a.iter().filter(|x| b.contains(x)).copied().collect();
            if face.is_empty() {
                continue;
            }
            let face_rays = fan.cone_rays(&face);
            let ra = restriction(&c.cones[a], &face_rays);
            let rb = restriction(&c.cones[b], &face_rays);
            if ra != rb {
                return Ok(Err(ChernViolation {
                    first: format!("{a:?}"),
                    second: format!("{b:?}"),
                    face: format!("{face:?}"),
                    first_values: ra,
                    second_values: rb,
                }));
            }
        }
    }
    Ok(Ok(()))
}

fn check_explicit_shape(fan: &Fan, c: &ExplicitChern) -> Result<()> {
    for cone in fan.max_cones() {
        let chars = c
            .cones
            .get(cone)
            .ok_or_else(|| Error::InvalidChern(format!("no characters on cone {cone:?}")))?;
        if chars.len() != c.rank {
            return Err(Error::InvalidChern(format!(
                "cone {cone:?} has {} characters, rank is {}",
                chars.len(),
                c.rank
            )));
        }
        if chars.iter().any(|u| u.dim() != fan.dim()) {
            return Err(Error::InvalidChern(format!("character of wrong length on {cone:?}")));
        }
    }
    if c.cones.len() != fan.max_cones().len() {
        return Err(Error::InvalidChern("datum lists cones that are not maximal cones of the fan".into()));
    }
    Ok(())
}

/// Checks compatibility of the rule on a caller-chosen family of cone pairs.
pub fn validate_murphy_pairs(
    rule: &MurphyRule,
    handle: &MurphyFanHandle,
    pairs: &[(Flag, Flag)],
) -> Result<std::result::Result<(), ChernViolation>> {
    check_dimension(rule, handle)?;
    let n = handle.n();
    for (f1, f2) in pairs {
        let l1 = f1.labels();
        let l2 = f2.labels();
        let mut face: Vec<RayLabel> = l1.iter().filter(|l| l2.contains(l)).copied().collect();
        face.sort();
        if face.is_empty() {
            continue;
        }
        let face_rays: Vec<LatticeVector> = face.iter().map(|&l| label_vector(n, l)).collect();
        let face_refs: Vec<&LatticeVector> = face_rays.iter().collect();
        let r1 = restriction(&rule.characters(f1)?, &face_refs);
        let r2 = restriction(&rule.characters(f2)?, &face_refs);
        if r1 != r2 {
            return Ok(Err(ChernViolation {
                first: format!("{f1:?}"),
                second: format!("{f2:?}"),
                face: format!("{face:?}"),
                first_values: r1,
                second_values: r2,
            }));
        }
    }
    Ok(Ok(()))
}

/// Samples `samples` random pairs of facet-adjacent maximal cones of Σ_n
/// (reproducible from `seed`) and checks the rule on each.
pub fn validate_murphy_sampled(
    rule: &MurphyRule,
    handle: &MurphyFanHandle,
    samples: usize,
    seed: u64,
) -> Result<std::result::Result<usize, ChernViolation>> {
    check_dimension(rule, handle)?;
    let n = handle.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(samples);
    let indices: Vec<usize> = (1..=n + 1).collect();
    for _ in 0..samples {
        let flag = random_flag(n, &indices, &mut rng);
        let neighbors = handle.facet_neighbors(&flag)?;
        let other = neighbors.choose(&mut rng).expect("n >= 2 neighbors").clone();
        pairs.push((flag, other));
    }
    Ok(validate_murphy_pairs(rule, handle, &pairs)?.map(|()| pairs.len()))
}

/// A uniformly random maximal cone: a random ordering of the indices read
/// as pair-then-chain.
fn random_flag(n: usize, indices: &[usize], rng: &mut ChaCha8Rng) -> Flag {
    use rand::seq::SliceRandom;
    let mut order = indices.to_vec();
    order.shuffle(rng);
    let mut chain = Vec::with_capacity(n - 2);
    let mut current = RayLabel::from_members([order[0], order[1]]);
    for &i in &order[2..n] {
        current = RayLabel::from_members(current.members().into_iter().chain([i]));
        chain.push(current);
    }
    Flag::new(order[0], order[1], chain)
}

/// Exhaustive check on a materialized Σ_n, sampled otherwise.
pub fn validate_murphy(
    rule: &MurphyRule,
    handle: &MurphyFanHandle,
    samples: usize,
    seed: u64,
) -> Result<std::result::Result<usize, ChernViolation>> {
    if let Some(fan) = handle.fan() {
        let explicit = rule.explicit_on(handle)?;
        let pairs = fan.max_cones().len();
        return Ok(validate_chern(fan, &explicit)?.map(|()| pairs * (pairs - 1) / 2));
    }
    validate_murphy_sampled(rule, handle, samples, seed)
}

/// Per maximal cone, a polynomial in the coordinates x_1..x_n of N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePolynomial {
    pub cones: BTreeMap<Vec<usize>, Polynomial>,
}

impl PiecewisePolynomial {
    pub fn is_zero(&self) -> bool {
        self.cones.values().all(Polynomial::is_zero)
    }
}

/// c_i^T as the piecewise polynomial e_i(u(σ)), each character read as a
/// linear form. Checks compatibility of the datum and agreement of the
/// pieces on shared faces.
pub fn chern_polynomial(c: &ExplicitChern, fan: &Fan, i: usize) -> Result<PiecewisePolynomial> {
    if i == 0 || i > c.rank {
        return Err(Error::InvalidChern(format!("index {i} outside 1..={}", c.rank)));
    }
    if let Err(v) = validate_chern(fan, c)? {
        return Err(Error::InvalidChern(v.to_string()));
    }
    let n = fan.dim();
    let cones: BTreeMap<Vec<usize>, Polynomial> = c
        .cones
        .iter()
        .map(|(cone, chars)| {
            let forms: Vec<Polynomial> = chars.iter().map(|u| Polynomial::linear(&u.0)).collect();
            (cone.clone(), elementary_symmetric(n, &forms, i))
        })
        .collect();

    let keys: Vec<&Vec<usize>> = cones.keys().collect();
    for (k, a) in keys.iter().enumerate() {
        for b in &keys[k + 1..] {
            let face: Vec<usize> = a.iter().filter(|x| b.contains(x)).copied().collect();
            if face.is_empty() {
                continue;
            }
            // x = Σ_{ρ ∈ face} t_ρ ρ
            let params: Vec<Polynomial> = (0..n)
                .map(|coord| {
                    Polynomial::linear(
                        &face.iter().map(|&r| fan.rays()[r].0[coord].clone()).collect::<Vec<_>>(),
                    )
                })
                .collect();
            if cones[*a].compose(&params) != cones[*b].compose(&params) {
                return Err(Error::InvalidChern(format!(
                    "e_{i} pieces on {a:?} and {b:?} differ on face {face:?}"
                )));
            }
        }
    }
    Ok(PiecewisePolynomial { cones })
}
