//! Lattice vectors, cones and simplicial fans: validation, star subdivision,
//! smoothness and completeness checks, and orbit dimensions.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::field::gcd_all;
use crate::exact::linalg;
use crate::exact::{smith_decomposition, Field, IntMatrix, RationalField};

/// An element of the cocharacter lattice N = Z^n.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(pub Vec<BigInt>);

impl LatticeVector {
    pub fn from_i64s(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); n])
    }

    /// The standard basis vector e_i (0-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_primitive(&self) -> bool {
        gcd_all(&self.0).is_one()
    }

    /// Divides out the gcd of the coordinates; `None` for the zero vector.
    pub fn primitive(&self) -> Option<Self> {
        let g = gcd_all(&self.0);
        (!g.is_zero()).then(|| LatticeVector(self.0.iter().map(|c| c / &g).collect()))
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().map(|c| RationalField.from_int(c)).collect()
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An element of the character lattice M, paired with N by the dot product.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character(pub Vec<BigInt>);

impl Character {
    pub fn from_i64s(coords: &[i64]) -> Self {
        Character(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Character(vec![BigInt::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn pair(&self, v: &LatticeVector) -> BigInt {
        self.0.iter().zip(&v.0).map(|(a, b)| a * b).sum()
    }

    pub fn pair_rational(&self, x: &[BigRational]) -> BigRational {
        self.0
            .iter()
            .zip(x)
            .map(|(a, b)| BigRational::from_integer(a.clone()) * b)
            .sum()
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", LatticeVector(self.0.clone()))
    }
}

fn rational_rows(vectors: &[&LatticeVector]) -> Vec<Vec<BigRational>> {
    vectors.iter().map(|v| v.to_rational()).collect()
}

fn rank_of(vectors: &[&LatticeVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    linalg::rank(&RationalField, &rational_rows(vectors))
}

/// Solves `v = Σ λ_i g_i` for linearly independent `gens`; `None` if `v` is
/// not in their span.
fn coefficients(gens: &[&LatticeVector], v: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = v.len();
    // columns are generators
    let a: Vec<Vec<BigRational>> = (0..n)
        .map(|r| gens.iter().map(|g| RationalField.from_int(&g.0[r])).collect())
        .collect();
    let x = linalg::solve(&RationalField, &a, v)?;
    Some(x)
}

/// Membership of `v` in the cone generated by `gens` (any finite set).
///
/// By Carathéodory, `v` lies in the cone iff it is a nonnegative combination
/// of some linearly independent subset of the generators.
pub fn cone_contains(gens: &[LatticeVector], v: &[BigRational]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    let n = v.len();
    let k_max = gens.len().min(n);
    let mut subset = Vec::new();
    fn search(
        gens: &[LatticeVector],
        v: &[BigRational],
        start: usize,
        k_max: usize,
        subset: &mut Vec<usize>,
    ) -> bool {
        if !subset.is_empty() {
            let chosen: Vec<&LatticeVector> = subset.iter().map(|&i| &gens[i]).collect();
            if rank_of(&chosen) < chosen.len() {
                return false;
            }
            if let Some(x) = coefficients(&chosen, v) {
                if x.iter().all(|c| !c.is_negative()) {
                    return true;
                }
            }
        }
        if subset.len() == k_max {
            return false;
        }
        for i in start..gens.len() {
            subset.push(i);
            if search(gens, v, i + 1, k_max, subset) {
                return true;
            }
            subset.pop();
        }
        false
    }
    search(gens, v, 0, k_max, &mut subset)
}

/// A strongly convex rational polyhedral cone, stored by its minimal set of
/// primitive generators in lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cone {
    ambient: usize,
    generators: Vec<LatticeVector>,
}

impl Cone {
    /// Builds a cone from arbitrary nonzero generators: primitivizes,
    /// removes redundant generators and sorts. Rejects cones containing a line.
    pub fn new(generators: Vec<LatticeVector>) -> Result<Cone> {
        let first = generators.first().ok_or(Error::Empty("cone generators"))?;
        let n = first.dim();
        if generators.iter().any(|g| g.dim() != n) {
            return Err(Error::DimensionMismatch("cone generators of different lengths".into()));
        }
        let mut gens: Vec<LatticeVector> = generators
            .iter()
            .map(|g| g.primitive().ok_or(Error::ZeroGenerator))
            .collect::<Result<_>>()?;
        gens.sort();
        gens.dedup();

        // a line through g lies in the cone iff -g does
        for g in &gens {
            if cone_contains(&gens, &g.neg().to_rational()) {
                return Err(Error::NotStronglyConvex);
            }
        }

        let mut i = 0;
        while i < gens.len() {
            let others: Vec<LatticeVector> = gens
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .collect();
            if cone_contains(&others, &gens[i].to_rational()) {
                gens.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(Cone {
            ambient: n,
            generators: gens,
        })
    }

    pub fn from_i64s(generators: &[&[i64]]) -> Result<Cone> {
        Self::new(generators.iter().map(|g| LatticeVector::from_i64s(g)).collect())
    }

    /// The zero cone {0} in an n-dimensional lattice.
    pub fn zero(ambient: usize) -> Cone {
        Cone {
            ambient,
            generators: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        rank_of(&self.generators.iter().collect::<Vec<_>>())
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.generators.len()
    }

    /// True iff the generators extend to a basis of the lattice.
    pub fn is_smooth(&self) -> bool {
        generators_form_partial_basis(&self.generators.iter().collect::<Vec<_>>())
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        cone_contains(&self.generators, v)
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone{:?}", self.generators)
    }
}

/// Convenience wrapper matching the operation name used throughout the docs.
pub fn make_cone(generators: Vec<LatticeVector>) -> Result<Cone> {
    Cone::new(generators)
}

fn generators_form_partial_basis(gens: &[&LatticeVector]) -> bool {
    if gens.is_empty() {
        return true;
    }
    let rows = gens.iter().map(|g| g.0.clone()).collect();
    let Ok(m) = IntMatrix::from_rows(rows) else {
        return false;
    };
    let snf = smith_decomposition(&m);
    snf.rank == gens.len() && snf.invariant_factors().iter().all(One::is_one)
}

/// A simplicial fan: a ray table in lexicographic order and the maximal
/// cones as sorted lists of ray indices.
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Vec<usize>>,
    faces: OnceLock<BTreeSet<Vec<usize>>>,
}

impl Clone for Fan {
    fn clone(&self) -> Self {
        Fan {
            dim: self.dim,
            rays: self.rays.clone(),
            max_cones: self.max_cones.clone(),
            faces: OnceLock::new(),
        }
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.max_cones == other.max_cones
    }
}

impl Eq for Fan {}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fan")
            .field("dim", &self.dim)
            .field("rays", &self.rays)
            .field("max_cones", &self.max_cones)
            .finish()
    }
}

impl Fan {
    /// Builds a fan from structural data and puts it in canonical form
    /// (rays sorted lexicographically, cone index lists sorted).
    ///
    /// Only structural well-formedness is checked here; geometric validity
    /// is the job of [`validate_fan`].
    pub fn new(dim: usize, rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        if dim == 0 {
            return Err(Error::InvalidFan("ambient dimension must be positive".into()));
        }
        for r in &rays {
            if r.dim() != dim {
                return Err(Error::InvalidFan(format!("ray {r:?} has wrong length")));
            }
            if r.is_zero() || !r.is_primitive() {
                return Err(Error::InvalidFan(format!("ray {r:?} is not primitive")));
            }
        }
        let mut order: Vec<usize> = (0..rays.len()).collect();
        order.sort_by(|&a, &b| rays[a].cmp(&rays[b]));
        if order.windows(2).any(|w| rays[w[0]] == rays[w[1]]) {
            return Err(Error::InvalidFan("duplicate ray".into()));
        }
        let mut remap = vec![0; rays.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let sorted_rays: Vec<LatticeVector> = order.iter().map(|&i| rays[i].clone()).collect();

        let mut cones = Vec::with_capacity(max_cones.len());
        for cone in max_cones {
            if cone.is_empty() {
                return Err(Error::InvalidFan("empty maximal cone".into()));
            }
            let mut c = Vec::with_capacity(cone.len());
            for i in cone {
                if i >= rays.len() {
                    return Err(Error::InvalidFan(format!("ray index {i} out of range")));
                }
                c.push(remap[i]);
            }
            c.sort_unstable();
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidFan("repeated ray in a cone".into()));
            }
            cones.push(c);
        }
        cones.sort();
        cones.dedup();
        Ok(Fan {
            dim,
            rays: sorted_rays,
            max_cones: cones,
            faces: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn ray_index(&self, v: &LatticeVector) -> Option<usize> {
        self.rays.binary_search(v).ok()
    }

    pub fn cone_rays(&self, cone: &[usize]) -> Vec<&LatticeVector> {
        cone.iter().map(|&i| &self.rays[i]).collect()
    }

    /// All cones of the fan as sorted ray-index sets, including the zero cone.
    pub fn faces(&self) -> &BTreeSet<Vec<usize>> {
        self.faces.get_or_init(|| {
            let mut faces = BTreeSet::new();
            for cone in &self.max_cones {
                for mask in 0u64..(1u64 << cone.len()) {
                    let face: Vec<usize> = cone
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| mask >> k & 1 == 1)
                        .map(|(_, &i)| i)
                        .collect();
                    faces.insert(face);
                }
            }
            faces
        })
    }

    pub fn contains_face(&self, indices: &[usize]) -> bool {
        let mut key = indices.to_vec();
        key.sort_unstable();
        self.faces().contains(&key)
    }

    /// Locates a cone in the fan by its generators.
    pub fn cone_indices(&self, cone: &Cone) -> Result<Vec<usize>> {
        if cone.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch("cone and fan live in different lattices".into()));
        }
        let mut idx = Vec::with_capacity(cone.generators().len());
        for g in cone.generators() {
            idx.push(self.ray_index(g).ok_or(Error::ConeNotInFan)?);
        }
        idx.sort_unstable();
        if self.faces().contains(&idx) {
            Ok(idx)
        } else {
            Err(Error::ConeNotInFan)
        }
    }

    /// Maximal cones containing the given face.
    pub fn star(&self, face: &[usize]) -> Vec<usize> {
        (0..self.max_cones.len())
            .filter(|&c| face.iter().all(|i| self.max_cones[c].binary_search(i).is_ok()))
            .collect()
    }
}

/// Why a fan failed [`validate_fan`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FanViolation {
    /// Maximal cone whose rays are linearly dependent.
    NotSimplicial { cone: Vec<usize> },
    /// A maximal cone is a face of another one.
    NotMaximal { cone: Vec<usize>, container: Vec<usize> },
    /// Two cones whose intersection is not the common face spanned by their shared rays.
    BadIntersection {
        first: Vec<usize>,
        second: Vec<usize>,
        intersection: Vec<usize>,
    },
}

impl fmt::Display for FanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanViolation::NotSimplicial { cone } => write!(f, "cone {cone:?} is not simplicial"),
            FanViolation::NotMaximal { cone, container } => {
                write!(f, "cone {cone:?} is contained in {container:?}")
            }
            FanViolation::BadIntersection {
                first,
                second,
                intersection,
            } => write!(
                f,
                "cones {first:?} and {second:?} do not meet along their common face {intersection:?}"
            ),
        }
    }
}

/// True iff some nonzero nonnegative combination of `vectors` vanishes.
///
/// Checks every circuit (minimal dependent subset) for a one-signed kernel
/// vector; a nonnegative dependency exists iff such a circuit exists.
fn has_nonnegative_dependency(vectors: &[Vec<BigRational>]) -> bool {
    if vectors.iter().any(|v| v.iter().all(Zero::is_zero)) {
        return true;
    }
    let m = vectors.len();
    if m < 2 {
        return false;
    }
    let dim = vectors[0].len();
    let total_rank = linalg::rank(&RationalField, vectors);
    let max_size = m.min(total_rank + 1);
    let mut subset = Vec::new();

    fn search(
        vectors: &[Vec<BigRational>],
        dim: usize,
        start: usize,
        max_size: usize,
        subset: &mut Vec<usize>,
    ) -> bool {
        if subset.len() >= 2 {
            let cols: Vec<Vec<BigRational>> = (0..dim)
                .map(|r| subset.iter().map(|&c| vectors[c][r].clone()).collect())
                .collect();
            let kernel = linalg::null_space(&RationalField, &cols, subset.len());
            if kernel.len() == 1 {
                let k = &kernel[0];
                if k.iter().all(|x| x.is_positive()) || k.iter().all(|x| x.is_negative()) {
                    return true;
                }
            }
            if !kernel.is_empty() {
                // supersets of a dependent set are never circuits
                return false;
            }
        }
        if subset.len() == max_size {
            return false;
        }
        for i in start..vectors.len() {
            subset.push(i);
            if search(vectors, dim, i + 1, max_size, subset) {
                return true;
            }
            subset.pop();
        }
        false
    }
    search(vectors, dim, 0, max_size, &mut subset)
}

impl Fan {
    /// Decides whether the two simplicial cones meet exactly along the face
    /// spanned by their shared rays.
    fn meet_in_common_face(&self, a: &[usize], b: &[usize]) -> bool {
        let shared: Vec<usize> = a.iter().filter(|i| b.contains(i)).copied().collect();
        let only_a: Vec<usize> = a.iter().filter(|i| !shared.contains(i)).copied().collect();
        let only_b: Vec<usize> = b.iter().filter(|i| !shared.contains(i)).copied().collect();
        if only_a.is_empty() || only_b.is_empty() {
            return only_a.is_empty() && only_b.is_empty();
        }
        // work modulo the span of the shared rays
        let projector: Vec<Vec<BigRational>> = if shared.is_empty() {
            (0..self.dim)
                .map(|i| LatticeVector::unit(self.dim, i).to_rational())
                .collect()
        } else {
            let rows = rational_rows(&self.cone_rays(&shared));
            linalg::null_space(&RationalField, &rows, self.dim)
        };
        let project = |v: &LatticeVector, sign: i64| -> Vec<BigRational> {
            let x = v.to_rational();
            projector
                .iter()
                .map(|p| RationalField.dot(p, &x) * BigRational::from_integer(sign.into()))
                .collect()
        };
        let mut vectors: Vec<Vec<BigRational>> =
            only_a.iter().map(|&i| project(&self.rays[i], 1)).collect();
        vectors.extend(only_b.iter().map(|&i| project(&self.rays[i], -1)));
        !has_nonnegative_dependency(&vectors)
    }
}

/// Checks that every maximal cone is simplicial, none contains another, and
/// any two meet in a common face. Reports the first offending pair.
pub fn validate_fan(fan: &Fan) -> std::result::Result<(), FanViolation> {
    for cone in fan.max_cones() {
        if rank_of(&fan.cone_rays(cone)) != cone.len() {
            return Err(FanViolation::NotSimplicial { cone: cone.clone() });
        }
    }
    let cones = fan.max_cones();
    for (i, a) in cones.iter().enumerate() {
        for b in &cones[i + 1..] {
            if a.iter().all(|x| b.contains(x)) {
                return Err(FanViolation::NotMaximal {
                    cone: a.clone(),
                    container: b.clone(),
                });
            }
            if b.iter().all(|x| a.contains(x)) {
                return Err(FanViolation::NotMaximal {
                    cone: b.clone(),
                    container: a.clone(),
                });
            }
            if !fan.meet_in_common_face(a, b) {
                return Err(FanViolation::BadIntersection {
                    first: a.clone(),
                    second: b.clone(),
                    intersection: a.iter().filter(|x| b.contains(x)).copied().collect(),
                });
            }
        }
    }
    Ok(())
}

/// The fan of P^n: rays e_1, ..., e_n, -(e_1 + ... + e_n) and all n-subsets
/// of them as maximal cones.
pub fn projective_fan(n: usize) -> Result<Fan> {
    if n == 0 {
        return Err(Error::InvalidFan("projective space needs n >= 1".into()));
    }
    let mut rays: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    rays.push(LatticeVector(vec![-BigInt::one(); n]));
    let cones = (0..=n)
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .collect();
    Fan::new(n, rays, cones)
}

/// Star subdivision of a smooth cone: inserts the sum of its generators as
/// a new ray and replaces every cone containing it by the joins of the new
/// ray with its faces not containing the subdivided cone.
pub fn star_subdivide(fan: &Fan, cone: &Cone) -> Result<Fan> {
    let sigma = fan.cone_indices(cone)?;
    if sigma.len() < 2 {
        return Err(Error::ConeTooSmall(sigma.len()));
    }
    if !cone.is_smooth() {
        return Err(Error::NonSmoothCone);
    }
    let new_ray = cone
        .generators()
        .iter()
        .skip(1)
        .fold(cone.generators()[0].clone(), |acc, g| acc.add(g));
    let new_index = fan.rays().len();
    let mut rays = fan.rays().to_vec();
    rays.push(new_ray);

    let mut cones = Vec::with_capacity(fan.max_cones().len() + sigma.len());
    for c in fan.max_cones() {
        if sigma.iter().all(|i| c.binary_search(i).is_ok()) {
            for drop in &sigma {
                let mut joined: Vec<usize> = c.iter().filter(|&i| i != drop).copied().collect();
                joined.push(new_index);
                cones.push(joined);
            }
        } else {
            cones.push(c.clone());
        }
    }
    Fan::new(fan.dim(), rays, cones)
}

/// Every maximal cone's generators extend to a basis of the lattice.
pub fn is_smooth(fan: &Fan) -> bool {
    fan.max_cones()
        .iter()
        .all(|c| generators_form_partial_basis(&fan.cone_rays(c)))
}

/// Completeness of a pure simplicial fan: every codimension-one cone lies in
/// exactly two maximal cones and the maximal cones are connected through them.
pub fn is_complete(fan: &Fan) -> bool {
    let n = fan.dim();
    let cones = fan.max_cones();
    if cones.is_empty() || cones.iter().any(|c| c.len() != n) {
        return false;
    }
    if cones.iter().any(|c| rank_of(&fan.cone_rays(c)) != n) {
        return false;
    }
    let mut ridges: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (ci, c) in cones.iter().enumerate() {
        for drop in 0..c.len() {
            let mut ridge = c.clone();
            ridge.remove(drop);
            ridges.entry(ridge).or_default().push(ci);
        }
    }
    if ridges.values().any(|owners| owners.len() != 2) {
        return false;
    }
    let mut adjacency: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for owners in ridges.values() {
        adjacency.entry(owners[0]).or_default().push(owners[1]);
        adjacency.entry(owners[1]).or_default().push(owners[0]);
    }
    let mut seen = vec![false; cones.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(c) = queue.pop_front() {
        for &d in adjacency.get(&c).into_iter().flatten() {
            if !seen[d] {
                seen[d] = true;
                queue.push_back(d);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Dimension of the torus-orbit closure attached to a cone: n - dim(cone).
pub fn orbit_closure_dim(fan: &Fan, cone: &Cone) -> Result<usize> {
    let idx = fan.cone_indices(cone)?;
    Ok(fan.dim() - rank_of(&fan.cone_rays(&idx)))
}
