//! Compiles the rank conditions of the Murphy Chern datum into pairwise
//! incidence, non-incidence and distinctness atoms, and audits that no
//! condition involves three or more configuration objects.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::chern::{value_pairs, MurphyRule};
use crate::error::{Error, Result};
use crate::fan::{Character, LatticeVector};
use crate::incidence::{IncidenceData, ObjectKind};
use crate::murphy_fan::{build_murphy_fan, label_vector, BuildMode, MurphyFanHandle, RayLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomKind {
    /// Σ_k P_{i,k} L_{j,k} = 0
    Incident,
    /// Σ_k P_{i,k} L_{j,k} ≠ 0
    NonIncident,
    /// some 2×2 minor of (P_i, P_i') is nonzero
    DistinctPoints,
    DistinctLines,
}

impl AtomKind {
    pub fn name(&self) -> &'static str {
        match self {
            AtomKind::Incident => "INCIDENT",
            AtomKind::NonIncident => "NON_INCIDENT",
            AtomKind::DistinctPoints => "DISTINCT_POINTS",
            AtomKind::DistinctLines => "DISTINCT_LINES",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Ok(match s {
            "INCIDENT" => AtomKind::Incident,
            "NON_INCIDENT" => AtomKind::NonIncident,
            "DISTINCT_POINTS" => AtomKind::DistinctPoints,
            "DISTINCT_LINES" => AtomKind::DistinctLines,
            _ => return Err(Error::Parse(format!("unknown atom kind '{s}'"))),
        })
    }
}

/// One condition on configuration coordinates. For (non-)incidence `i` is
/// a point and `j` a line; for distinctness both index the same kind and
/// `i < j`. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub kind: AtomKind,
    pub i: usize,
    pub j: usize,
}

impl Atom {
    pub fn new(kind: AtomKind, i: usize, j: usize) -> Self {
        match kind {
            AtomKind::DistinctPoints | AtomKind::DistinctLines => Atom { kind, i: i.min(j), j: i.max(j) },
            _ => Atom { kind, i, j },
        }
    }

    /// 0-based object slots (points first, then lines) of the two objects.
    pub fn slots(&self, points: usize) -> (usize, usize) {
        match self.kind {
            AtomKind::Incident | AtomKind::NonIncident => (self.i - 1, points + self.j - 1),
            AtomKind::DistinctPoints => (self.i - 1, self.j - 1),
            AtomKind::DistinctLines => (points + self.i - 1, points + self.j - 1),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.kind.name(), self.i, self.j)
    }
}

/// A deduplicated, consistent set of atoms over d points and d' lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionSet {
    points: usize,
    lines: usize,
    atoms: Vec<Atom>,
}

impl ConditionSet {
    pub fn new(points: usize, lines: usize, atoms: Vec<Atom>) -> Result<Self> {
        let mut atoms: Vec<Atom> = atoms.into_iter().map(|a| Atom::new(a.kind, a.i, a.j)).collect();
        for a in &atoms {
            let (ri, rj) = match a.kind {
                AtomKind::Incident | AtomKind::NonIncident => (points, lines),
                AtomKind::DistinctPoints => (points, points),
                AtomKind::DistinctLines => (lines, lines),
            };
            let distinct = matches!(a.kind, AtomKind::DistinctPoints | AtomKind::DistinctLines);
            if !(1..=ri).contains(&a.i) || !(1..=rj).contains(&a.j) || (distinct && a.i == a.j) {
                return Err(Error::InvalidIncidence(format!("atom {a} out of range")));
            }
        }
        atoms.sort_unstable();
        atoms.dedup();
        for a in &atoms {
            if a.kind == AtomKind::Incident
                && atoms.binary_search(&Atom::new(AtomKind::NonIncident, a.i, a.j)).is_ok()
            {
                return Err(Error::ContradictoryAtoms(a.i, a.j));
            }
        }
        Ok(ConditionSet { points, lines, atoms })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn count(&self, kind: AtomKind) -> usize {
        self.atoms.iter().filter(|a| a.kind == kind).count()
    }

    /// The incidence data read back from the INCIDENT atoms.
    pub fn incidence(&self) -> IncidenceData {
        let pairs = self
            .atoms
            .iter()
            .filter(|a| a.kind == AtomKind::Incident)
            .map(|a| (a.i, a.j))
            .collect();
        IncidenceData::new(self.points, self.lines, pairs).expect("atoms were range checked")
    }
}

/// Incidence data together with Σ_n (n = d + d' - 1) and the rule datum.
/// With d + d' = 2 there is no Σ_n; such instances exist only when built
/// with `allow_degenerate` and use the case table on the pair directly.
#[derive(Debug, Clone)]
pub struct MurphyInstance {
    rule: MurphyRule,
    handle: Option<MurphyFanHandle>,
}

impl MurphyInstance {
    pub fn new(incidence: IncidenceData, allow_degenerate: bool) -> Result<Self> {
        let objects = incidence.objects();
        let handle = match objects {
            0 | 1 => return Err(Error::DegenerateInstance(objects)),
            2 if !allow_degenerate => return Err(Error::DegenerateInstance(objects)),
            2 => None,
            _ => Some(build_murphy_fan(objects - 1, BuildMode::Lazy)?),
        };
        Ok(MurphyInstance {
            rule: MurphyRule::new(incidence),
            handle,
        })
    }

    /// Uses a caller-built handle (for example a materialized one).
    pub fn with_handle(incidence: IncidenceData, handle: MurphyFanHandle) -> Result<Self> {
        if incidence.objects() < 3 || incidence.objects() - 1 != handle.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} objects do not match Σ_{}",
                incidence.objects(),
                handle.n()
            )));
        }
        Ok(MurphyInstance {
            rule: MurphyRule::new(incidence),
            handle: Some(handle),
        })
    }

    pub fn incidence(&self) -> &IncidenceData {
        self.rule.incidence()
    }

    pub fn rule(&self) -> &MurphyRule {
        &self.rule
    }

    pub fn handle(&self) -> Option<&MurphyFanHandle> {
        self.handle.as_ref()
    }

    pub fn n(&self) -> usize {
        self.incidence().objects() - 1
    }
}

/// Forced filtration dimension of object y_k at jump j.
fn forced_dim(kind: ObjectKind, j: i64) -> usize {
    match (kind, j) {
        (_, j) if j <= 0 => 3,
        (ObjectKind::Point, 1) => 1,
        (ObjectKind::Line, 1) => 2,
        _ => 0,
    }
}

fn count_at_least(values: &[(BigInt, BigInt)], ja: i64, jb: i64) -> usize {
    values
        .iter()
        .filter(|(a, b)| *a >= BigInt::from(ja) && *b >= BigInt::from(jb))
        .count()
}

/// Value pairs (⟨u, ρ_a⟩, ⟨u, ρ_b⟩) on some maximal cone containing ρ_a and
/// ρ_b, after checking that every composite ray of that cone pairs to 0.
fn pair_values_from_cone(instance: &MurphyInstance, a: usize, b: usize) -> Result<Vec<(BigInt, BigInt)>> {
    let Some(handle) = instance.handle() else {
        let t = instance.rule().pair_values(a, b);
        return Ok(t.iter().map(|&(x, y)| (BigInt::from(x), BigInt::from(y))).collect());
    };
    let n = handle.n();
    let labels = [RayLabel::original(a), RayLabel::original(b)];
    if !handle.cone_membership(&labels)? {
        return Err(Error::InternalAudit(format!("ρ_{a} and ρ_{b} do not span a cone")));
    }
    let flag = handle.flag_containing(&labels)?;
    let chars: Vec<Character> = instance.rule().characters(&flag)?;
    for s in &flag.chain {
        let r = label_vector(n, *s);
        if chars.iter().any(|u| u.pair(&r) != BigInt::from(0)) {
            return Err(Error::InternalAudit(format!("a character is nonzero on composite ray ρ_{{{s}}}")));
        }
    }
    let (ra, rb): (LatticeVector, LatticeVector) = (label_vector(n, labels[0]), label_vector(n, labels[1]));
    Ok(chars.iter().map(|u| (u.pair(&ra), u.pair(&rb))).collect())
}

/// The atom for objects a < b, from the intersection dimension at jumps
/// (1, 1), after checking every other cell of the {0,1,2}² grid against
/// the forced filtrations.
fn atom_for_pair(instance: &MurphyInstance, a: usize, b: usize) -> Result<Atom> {
    let inc = instance.incidence();
    let (ka, kb) = (inc.kind(a), inc.kind(b));
    let values = pair_values_from_cone(instance, a, b)?;
    for ja in 0..=2 {
        for jb in 0..=2 {
            if (ja, jb) == (1, 1) {
                continue;
            }
            let expected = if ja >= 2 || jb >= 2 {
                0
            } else if ja <= 0 {
                forced_dim(kb, jb)
            } else {
                forced_dim(ka, ja)
            };
            let got = count_at_least(&values, ja, jb);
            if got != expected {
                return Err(Error::InternalAudit(format!(
                    "objects {a}, {b}: cell ({ja}, {jb}) has dimension {got}, forced filtrations give {expected}"
                )));
            }
        }
    }
    let dim = count_at_least(&values, 1, 1);
    let d = inc.points();
    let unexpected = || Error::InternalAudit(format!("objects {a}, {b}: intersection dimension {dim}"));
    use ObjectKind::*;
    Ok(match (ka, kb, dim) {
        (Point, Point, 0) => Atom::new(AtomKind::DistinctPoints, a, b),
        (Point, Line, 1) => Atom::new(AtomKind::Incident, a, b - d),
        (Point, Line, 0) => Atom::new(AtomKind::NonIncident, a, b - d),
        (Line, Line, 1) => Atom::new(AtomKind::DistinctLines, a - d, b - d),
        _ => return Err(unexpected()),
    })
}

/// Emits one atom per unordered pair of configuration objects. Triples of
/// original rays spanning a cone abort with an audit failure.
pub fn generate_conditions(instance: &MurphyInstance) -> Result<ConditionSet> {
    let inc = instance.incidence();
    let total = inc.objects();
    let pairs: Vec<(usize, usize)> = (1..=total)
        .flat_map(|a| (a + 1..=total).map(move |b| (a, b)))
        .collect();
    let atoms = pairs
        .par_iter()
        .map(|&(a, b)| atom_for_pair(instance, a, b))
        .collect::<Result<Vec<Atom>>>()?;
    if let Some(violation) = triple_violation(instance)? {
        return Err(Error::InternalAudit(violation.to_string()));
    }
    ConditionSet::new(inc.points(), inc.lines(), atoms)
}

/// Three or more configuration objects met by a single cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditViolation {
    pub objects: Vec<usize>,
}

impl fmt::Display for AuditViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "original rays {:?} lie in a common cone", self.objects)
    }
}

fn triple_violation(instance: &MurphyInstance) -> Result<Option<AuditViolation>> {
    let Some(handle) = instance.handle() else {
        return Ok(None);
    };
    let m = handle.n() + 1;
    for a in 1..=m {
        for b in a + 1..=m {
            for c in b + 1..=m {
                let labels = [RayLabel::original(a), RayLabel::original(b), RayLabel::original(c)];
                if handle.cone_membership(&labels)? {
                    return Ok(Some(AuditViolation { objects: vec![a, b, c] }));
                }
            }
        }
    }
    Ok(None)
}

/// Confirms that no cone holds three original rays (through the oracle, and
/// on the face lattice when the fan is materialized) and that every
/// compiled atom mentions at most two objects.
pub fn audit_pairwise(instance: &MurphyInstance) -> Result<std::result::Result<(), AuditViolation>> {
    if let Some(v) = triple_violation(instance)? {
        return Ok(Err(v));
    }
    if let Some(handle) = instance.handle() {
        if let (Some(fan), Some(labels)) = (handle.fan(), handle.ray_labels()) {
            let originals: Vec<Option<usize>> = labels.iter().map(|l| l.original_index()).collect();
            let faces: Vec<Vec<usize>> = fan.faces().iter().cloned().collect();
            if let Err(v) = audit_cones(&faces, &originals)? {
                return Ok(Err(v));
            }
        }
    }
    let cs = generate_conditions(instance)?;
    let d = cs.points();
    for atom in cs.atoms() {
        let (x, y) = atom.slots(d);
        if x == y {
            return Ok(Err(AuditViolation { objects: vec![x + 1] }));
        }
    }
    Ok(Ok(()))
}

/// Checks a list of cones (as ray indices) for one containing three or more
/// rays that carry configuration objects; `objects[r]` is the object index
/// attached to ray r, if any.
pub fn audit_cones(
    cones: &[Vec<usize>],
    objects: &[Option<usize>],
) -> Result<std::result::Result<(), AuditViolation>> {
    for cone in cones {
        let mut hit = Vec::new();
        for &r in cone {
            let o = objects
                .get(r)
                .ok_or_else(|| Error::InvalidFan(format!("ray index {r} out of range")))?;
            if let Some(o) = o {
                hit.push(*o);
            }
        }
        if hit.len() >= 3 {
            hit.sort_unstable();
            return Ok(Err(AuditViolation { objects: hit }));
        }
    }
    Ok(Ok(()))
}

/// The atom prescribed by the case table alone, for a pair of object kinds.
pub fn table_atom_dimension(a: ObjectKind, b: ObjectKind, incident: bool) -> usize {
    value_pairs(a, b, incident).iter().filter(|(x, y)| *x >= 1 && *y >= 1).count()
}
