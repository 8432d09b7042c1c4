//! The fan of P^n blown up along every torus-invariant linear subspace of
//! codimension at least three, in materialized form for small n and as a
//! combinatorial membership oracle for any n.
//!
//! Rays are labelled by subsets of the original ray indices `1..=n+1`: a
//! singleton `{i}` is the original ray ρ_i, a subset `S` with
//! `3 <= |S| <= n` is the composite ray ρ_S = Σ_{i∈S} ρ_i. A maximal cone is
//! determined by a flag: a pair `{a, b}` together with a chain
//! `S_3 ⊂ S_4 ⊂ ... ⊂ S_n` with `|S_k| = k` and `{a, b} ⊂ S_3`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::fan::{projective_fan, star_subdivide, Cone, Fan, LatticeVector};

/// Largest n for which the full cone list is built.
pub const MATERIALIZE_LIMIT: usize = 6;

/// Largest n supported by the subset encoding of labels.
pub const MAX_N: usize = 30;

/// A ray of Σ_n, encoded as the bitmask of its index subset (bit i-1 for index i).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RayLabel(u32);

impl RayLabel {
    pub fn original(i: usize) -> Self {
        RayLabel(1 << (i - 1))
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Self {
        RayLabel(members.into_iter().fold(0, |m, i| m | 1 << (i - 1)))
    }

    pub fn bits(&self) -> u32 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_original(&self) -> bool {
        self.len() == 1
    }

    /// The index i of an original ray ρ_i.
    pub fn original_index(&self) -> Option<usize> {
        self.is_original().then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && self.0 >> (i - 1) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &RayLabel) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn members(&self) -> Vec<usize> {
        (0..32).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }

    fn with(&self, i: usize) -> Self {
        RayLabel(self.0 | 1 << (i - 1))
    }

    /// Checks that the label names a ray of Σ_n.
    pub fn validate(&self, n: usize) -> Result<()> {
        let universe = universe(n);
        let ok = self.0 != 0
            && self.0 & !universe == 0
            && (self.is_original() || (3..=n).contains(&self.len()));
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLabel(format!("{self} is not a ray label for n = {n}")))
        }
    }
}

fn universe(n: usize) -> u32 {
    if n + 1 >= 32 {
        u32::MAX
    } else {
        (1u32 << (n + 1)) - 1
    }
}

impl Ord for RayLabel {
    /// Originals first, then composites by size, then lexicographically by members.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members().cmp(&other.members()))
    }
}

impl PartialOrd for RayLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RayLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.members().iter().map(|i| i.to_string()).collect();
        write!(f, "{}", m.join(","))
    }
}

impl fmt::Debug for RayLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ρ{{{self}}}")
    }
}

impl FromStr for RayLabel {
    type Err = Error;

    /// Parses `"3"` or `"1,2,4"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut members = Vec::new();
        for part in s.trim().trim_start_matches('{').trim_end_matches('}').split(',') {
            let i: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::InvalidLabel(s.to_string()))?;
            if i == 0 || i > 32 {
                return Err(Error::InvalidLabel(s.to_string()));
            }
            members.push(i);
        }
        Ok(RayLabel::from_members(members))
    }
}

/// A maximal cone of Σ_n written as its flag.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    pub a: usize,
    pub b: usize,
    /// `S_3 ⊂ ... ⊂ S_n`, ascending.
    pub chain: Vec<RayLabel>,
}

impl fmt::Debug for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flag({}, {} | {:?})", self.a, self.b, self.chain)
    }
}

impl Flag {
    pub fn new(a: usize, b: usize, chain: Vec<RayLabel>) -> Self {
        Flag { a, b, chain }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidFlag(msg));
        if !(1..=n + 1).contains(&self.a) || !(1..=n + 1).contains(&self.b) || self.a == self.b {
            return bad(format!("pair ({}, {}) is not two distinct indices in 1..={}", self.a, self.b, n + 1));
        }
        if self.chain.len() != n.saturating_sub(2) {
            return bad(format!("chain has {} members, expected {}", self.chain.len(), n - 2));
        }
        let mut prev = RayLabel::from_members([self.a, self.b]);
        for (k, s) in self.chain.iter().enumerate() {
            s.validate(n).map_err(|e| Error::InvalidFlag(e.to_string()))?;
            if s.len() != k + 3 {
                return bad(format!("chain member {s} should have {} elements", k + 3));
            }
            if !prev.is_subset_of(s) {
                return bad(format!("{prev} is not contained in {s}"));
            }
            prev = *s;
        }
        Ok(())
    }

    /// Labels of the cone's rays in flag order: ρ_a, ρ_b, ρ_{S_3}, ..., ρ_{S_n}.
    pub fn labels(&self) -> Vec<RayLabel> {
        let mut out = vec![RayLabel::original(self.a), RayLabel::original(self.b)];
        out.extend(self.chain.iter().copied());
        out
    }

    /// Reads the flag back from the (unordered) ray labels of a maximal cone.
    pub fn from_labels(labels: &[RayLabel], n: usize) -> Result<Flag> {
        let originals: Vec<usize> = labels.iter().filter_map(|l| l.original_index()).collect();
        if originals.len() != 2 {
            return Err(Error::InvalidFlag(format!(
                "a maximal cone has exactly two original rays, got {labels:?}"
            )));
        }
        let mut chain: Vec<RayLabel> = labels.iter().filter(|l| !l.is_original()).copied().collect();
        chain.sort();
        let flag = Flag::new(originals[0].min(originals[1]), originals[0].max(originals[1]), chain);
        flag.validate(n)?;
        Ok(flag)
    }
}

/// Number of rays of Σ_n: (n+1) + Σ_{k=3}^{n} C(n+1, k).
pub fn ray_count_formula(n: usize) -> u128 {
    (n as u128 + 1) + (3..=n).map(|k| binomial(n + 1, k)).sum::<u128>()
}

/// Number of maximal cones of Σ_n: C(n+1, 2) · (n-1)!.
pub fn max_cone_count_formula(n: usize) -> u128 {
    binomial(n + 1, 2) * (1..n as u128).product::<u128>()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// k-subsets of `1..=m` in lexicographic order.
pub fn subsets_lex(m: usize, k: usize) -> Vec<RayLabel> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<RayLabel>) {
        if cur.len() == k {
            out.push(RayLabel::from_members(cur.iter().copied()));
            return;
        }
        for i in start..=m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, m, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, Copy, PartialEq, Eq)]
pub enum BuildMode {
    Materialized,
    Lazy,
}

#[derive(Clone, Debug)]
enum Storage {
    Materialized { fan: Fan, labels: Vec<RayLabel> },
    Lazy,
}

/// Handle on Σ_n.
#[derive(Clone, Debug)]
pub struct MurphyFanHandle {
    n: usize,
    storage: Storage,
}

/// Builds Σ_n. Materialized mode performs the star subdivisions (stage
/// k = n down to 3, subsets in lexicographic order) and is limited to
/// n <= [`MATERIALIZE_LIMIT`].
pub fn build_murphy_fan(n: usize, mode: BuildMode) -> Result<MurphyFanHandle> {
    build_with_order(n, mode, |_, _| {})
}

pub(crate) fn build_with_order(
    n: usize,
    mode: BuildMode,
    mut reorder: impl FnMut(usize, &mut Vec<RayLabel>),
) -> Result<MurphyFanHandle> {
    if n < 2 {
        return Err(Error::InvalidLabel(format!("Σ_n needs n >= 2, got {n}")));
    }
    if n > MAX_N {
        return Err(Error::InvalidLabel(format!("n = {n} exceeds the supported maximum {MAX_N}")));
    }
    let storage = match mode {
        BuildMode::Lazy => Storage::Lazy,
        BuildMode::Materialized => {
            if n > MATERIALIZE_LIMIT {
                return Err(Error::MaterializationTooLarge {
                    n,
                    limit: MATERIALIZE_LIMIT,
                });
            }
            let mut fan = projective_fan(n)?;
            for k in (3..=n).rev() {
                let mut stage = subsets_lex(n + 1, k);
                reorder(k, &mut stage);
                for s in stage {
                    let gens = s.members().into_iter().map(|i| original_ray(n, i)).collect();
                    fan = star_subdivide(&fan, &Cone::new(gens)?)?;
                }
            }
            let labels = fan
                .rays()
                .iter()
                .map(|r| label_of_vector(n, r))
                .collect::<Result<Vec<_>>>()?;
            Storage::Materialized { fan, labels }
        }
    };
    Ok(MurphyFanHandle { n, storage })
}

/// ρ_i: e_i for i <= n and -(e_1 + ... + e_n) for i = n + 1.
pub fn original_ray(n: usize, i: usize) -> LatticeVector {
    if i <= n {
        LatticeVector::unit(n, i - 1)
    } else {
        LatticeVector(vec![-BigInt::one(); n])
    }
}

/// ρ_S as a lattice vector.
pub fn label_vector(n: usize, label: RayLabel) -> LatticeVector {
    label
        .members()
        .into_iter()
        .map(|i| original_ray(n, i))
        .fold(LatticeVector::zero(n), |acc, v| acc.add(&v))
}

/// Recovers the label of a ray vector of Σ_n.
///
/// ρ_S has coordinate 1 on S∖{n+1} if n+1 ∉ S, and otherwise coordinate 0
/// on S∖{n+1} and -1 elsewhere.
fn label_of_vector(n: usize, v: &LatticeVector) -> Result<RayLabel> {
    let one = BigInt::one();
    let minus = -BigInt::one();
    let zero = BigInt::from(0);
    let coords = v.coords();
    let label = if coords.iter().all(|c| *c == zero || *c == one) {
        RayLabel::from_members((1..=n).filter(|&i| coords[i - 1] == one))
    } else if coords.iter().all(|c| *c == zero || *c == minus) {
        RayLabel::from_members((1..=n).filter(|&i| coords[i - 1] == zero)).with(n + 1)
    } else {
        return Err(Error::InvalidLabel(format!("{v:?} is not a ray of Σ_{n}")));
    };
    label.validate(n)?;
    Ok(label)
}

impl MurphyFanHandle {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_materialized(&self) -> bool {
        matches!(self.storage, Storage::Materialized { .. })
    }

    pub fn fan(&self) -> Option<&Fan> {
        match &self.storage {
            Storage::Materialized { fan, .. } => Some(fan),
            Storage::Lazy => None,
        }
    }

    /// Labels aligned with the materialized fan's ray table.
    pub fn ray_labels(&self) -> Option<&[RayLabel]> {
        match &self.storage {
            Storage::Materialized { labels, .. } => Some(labels),
            Storage::Lazy => None,
        }
    }

    pub fn ray_index(&self, label: RayLabel) -> Option<usize> {
        self.ray_labels()?.iter().position(|l| *l == label)
    }

    pub fn ray_vector(&self, label: RayLabel) -> Result<LatticeVector> {
        label.validate(self.n)?;
        Ok(label_vector(self.n, label))
    }

    /// All ray labels in canonical order (originals, then composites by size).
    pub fn all_labels(&self) -> Vec<RayLabel> {
        let mut out: Vec<RayLabel> = (1..=self.n + 1).map(RayLabel::original).collect();
        for k in 3..=self.n {
            out.extend(subsets_lex(self.n + 1, k));
        }
        out
    }

    /// Whether the labelled rays span a cone of Σ_n: at most two originals,
    /// composites totally ordered by inclusion, and every original inside
    /// the smallest composite present.
    pub fn cone_membership(&self, labels: &[RayLabel]) -> Result<bool> {
        for l in labels {
            l.validate(self.n)?;
        }
        let mut originals: Vec<RayLabel> = labels.iter().filter(|l| l.is_original()).copied().collect();
        originals.sort();
        originals.dedup();
        if originals.len() > 2 {
            return Ok(false);
        }
        let mut composites: Vec<RayLabel> =
            labels.iter().filter(|l| !l.is_original()).copied().collect();
        composites.sort();
        composites.dedup();
        for w in composites.windows(2) {
            if !w[0].is_subset_of(&w[1]) {
                return Ok(false);
            }
        }
        if let Some(smallest) = composites.first() {
            if !originals.iter().all(|o| o.is_subset_of(smallest)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Lattice vectors of the maximal cone of a flag, in flag order.
    pub fn maximal_cone_rays(&self, flag: &Flag) -> Result<Vec<LatticeVector>> {
        flag.validate(self.n)?;
        Ok(flag.labels().into_iter().map(|l| label_vector(self.n, l)).collect())
    }

    /// Some maximal cone containing the given cone.
    pub fn flag_containing(&self, labels: &[RayLabel]) -> Result<Flag> {
        if !self.cone_membership(labels)? {
            return Err(Error::InvalidFlag(format!("{labels:?} is not a cone of Σ_{}", self.n)));
        }
        let n = self.n;
        let mut originals: Vec<usize> = labels.iter().filter_map(|l| l.original_index()).collect();
        originals.sort_unstable();
        originals.dedup();
        let mut composites: Vec<RayLabel> =
            labels.iter().filter(|l| !l.is_original()).copied().collect();
        composites.sort();
        composites.dedup();

        let first_target = composites.first().copied().unwrap_or(RayLabel(universe(n)));
        while originals.len() < 2 {
            let next = first_target
                .members()
                .into_iter()
                .find(|i| !originals.contains(i))
                .expect("target has at least three members");
            originals.push(next);
        }
        let (a, b) = (originals[0], originals[1]);
        let mut current = RayLabel::from_members([a, b]);
        let mut chain = Vec::with_capacity(n.saturating_sub(2));
        let mut targets = composites.into_iter().peekable();
        for k in 3..=n {
            if targets.peek().is_some_and(|t| t.len() == k) {
                current = targets.next().expect("peeked");
            } else {
                let target = targets.peek().copied().unwrap_or(RayLabel(universe(n)));
                let add = target
                    .members()
                    .into_iter()
                    .find(|&i| !current.contains(i))
                    .expect("chain target strictly larger");
                current = current.with(add);
            }
            chain.push(current);
        }
        let flag = Flag::new(a, b, chain);
        flag.validate(n)?;
        Ok(flag)
    }

    /// All maximal cones as flags (with a < b), in canonical order.
    pub fn flags(&self) -> Vec<Flag> {
        let n = self.n;
        let mut out = Vec::new();
        // choose chains top-down: S_n ⊂ [n+1], ..., S_3
        fn rec(k: usize, top: RayLabel, chain: &mut Vec<RayLabel>, out: &mut Vec<Flag>) {
            if k < 3 {
                let s3 = chain.last().copied().unwrap_or(top);
                let m = s3.members();
                let mut asc = chain.clone();
                asc.reverse();
                for x in 0..m.len() {
                    for y in x + 1..m.len() {
                        out.push(Flag::new(m[x], m[y], asc.clone()));
                    }
                }
                return;
            }
            for drop in top.members() {
                let s = RayLabel(top.0 & !(1 << (drop - 1)));
                chain.push(s);
                rec(k - 1, s, chain, out);
                chain.pop();
            }
        }
        rec(n, RayLabel(universe(n)), &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// The n maximal cones sharing a facet with the given one, in the order
    /// of the ray removed (ρ_a, ρ_b, ρ_{S_3}, ...).
    pub fn facet_neighbors(&self, flag: &Flag) -> Result<Vec<Flag>> {
        flag.validate(self.n)?;
        let n = self.n;
        let mut out = Vec::with_capacity(n);
        if n == 2 {
            // P^2: the chain is empty and the third original ray is free
            let c = (1..=3).find(|&i| i != flag.a && i != flag.b).expect("three rays");
            out.push(Flag::new(c, flag.b, vec![]));
            out.push(Flag::new(flag.a, c, vec![]));
            return Ok(out);
        }
        let s3 = flag.chain[0];
        let c = s3
            .members()
            .into_iter()
            .find(|&i| i != flag.a && i != flag.b)
            .expect("S_3 has a third element");
        out.push(Flag::new(c, flag.b, flag.chain.clone()));
        out.push(Flag::new(flag.a, c, flag.chain.clone()));
        for k in 0..flag.chain.len() {
            let below = if k == 0 {
                RayLabel::from_members([flag.a, flag.b])
            } else {
                flag.chain[k - 1]
            };
            let above = flag.chain.get(k + 1).copied().unwrap_or(RayLabel(universe(n)));
            let gap = RayLabel(above.0 & !below.0);
            debug_assert_eq!(gap.len(), 2);
            let current_extra = RayLabel(flag.chain[k].0 & !below.0);
            let other_extra = RayLabel(gap.0 & !current_extra.0);
            let mut chain = flag.chain.clone();
            chain[k] = RayLabel(below.0 | other_extra.0);
            out.push(Flag::new(flag.a, flag.b, chain));
        }
        Ok(out)
    }
}
