//! Point/line incidence data, configurations in P² over exact fields, and
//! enumeration of incidence schemes over small prime fields.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{Field, PrimeField};
use crate::moduli::{generate_conditions, Atom, AtomKind, ConditionSet, MurphyInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectKind {
    Point,
    Line,
}

/// d points, d' lines and the set I of pairs (i, j) with x_i on l_j.
/// Indices are 1-based; I is kept sorted without repeats.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IncidenceData {
    points: usize,
    lines: usize,
    pairs: Vec<(usize, usize)>,
}

impl IncidenceData {
    pub fn new(points: usize, lines: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        for &(i, j) in &pairs {
            if !(1..=points).contains(&i) || !(1..=lines).contains(&j) {
                return Err(Error::InvalidIncidence(format!(
                    "pair ({i}, {j}) outside 1..={points} x 1..={lines}"
                )));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(IncidenceData { points, lines, pairs })
    }

    /// The Fano plane: line j holds the points j, j+1, j+3 (mod 7).
    pub fn fano() -> Self {
        let mut pairs = Vec::with_capacity(21);
        for j in 0..7 {
            for off in [0, 1, 3] {
                pairs.push(((j + off) % 7 + 1, j + 1));
            }
        }
        IncidenceData::new(7, 7, pairs).expect("indices in range")
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// d + d'.
    pub fn objects(&self) -> usize {
        self.points + self.lines
    }

    /// Kind of object y_k (points are y_1..y_d, lines follow).
    pub fn kind(&self, k: usize) -> ObjectKind {
        if k <= self.points {
            ObjectKind::Point
        } else {
            ObjectKind::Line
        }
    }

    pub fn is_incident(&self, i: usize, j: usize) -> bool {
        self.pairs.binary_search(&(i, j)).is_ok()
    }

    /// Whether y_a and y_b are a point and a line with the point on the line.
    pub fn objects_incident(&self, a: usize, b: usize) -> bool {
        match (self.kind(a), self.kind(b)) {
            (ObjectKind::Point, ObjectKind::Line) => self.is_incident(a, b - self.points),
            (ObjectKind::Line, ObjectKind::Point) => self.is_incident(b, a - self.points),
            _ => false,
        }
    }

    /// Every incidence data with the given numbers of points and lines.
    pub fn all(points: usize, lines: usize) -> Vec<IncidenceData> {
        let cells: Vec<(usize, usize)> = (1..=points)
            .flat_map(|i| (1..=lines).map(move |j| (i, j)))
            .collect();
        (0u64..1 << cells.len())
            .map(|mask| {
                let pairs = cells
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &c)| c)
                    .collect();
                IncidenceData::new(points, lines, pairs).expect("cells in range")
            })
            .collect()
    }
}

/// Normalized homogeneous coordinates of d points and d' lines. A point x
/// lies on a line l iff x·l = 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration<E> {
    pub points: Vec<[E; 3]>,
    pub lines: Vec<[E; 3]>,
}

/// Scales a triple so its first nonzero coordinate is 1; `None` for zero.
pub fn normalize<F: Field>(field: &F, v: &[F::Elem; 3]) -> Option<[F::Elem; 3]> {
    let lead = v.iter().find(|x| !field.is_zero(x))?;
    let inv = field.inv(lead)?;
    Some([field.mul(&v[0], &inv), field.mul(&v[1], &inv), field.mul(&v[2], &inv)])
}

impl<E: Clone> Configuration<E> {
    /// Normalizes every triple; fails on a zero triple.
    pub fn normalized<F: Field<Elem = E>>(field: &F, points: Vec<[E; 3]>, lines: Vec<[E; 3]>) -> Result<Self> {
        let norm = |v: &[E; 3]| {
            normalize(field, v).ok_or_else(|| Error::Parse("zero coordinate triple in configuration".into()))
        };
        Ok(Configuration {
            points: points.iter().map(norm).collect::<Result<_>>()?,
            lines: lines.iter().map(norm).collect::<Result<_>>()?,
        })
    }
}

fn dot<F: Field>(field: &F, a: &[F::Elem; 3], b: &[F::Elem; 3]) -> F::Elem {
    field.dot(a, b)
}

/// Whether two triples are proportional (all 2×2 minors vanish).
pub fn proportional<F: Field>(field: &F, a: &[F::Elem; 3], b: &[F::Elem; 3]) -> bool {
    (0..3).all(|r| {
        (r + 1..3).all(|s| {
            let m = field.sub(&field.mul(&a[r], &b[s]), &field.mul(&a[s], &b[r]));
            field.is_zero(&m)
        })
    })
}

/// True iff x_i·l_j = 0 exactly for (i, j) ∈ I, the points are pairwise
/// distinct and the lines are pairwise distinct.
pub fn check_configuration<F: Field>(field: &F, c: &Configuration<F::Elem>, inc: &IncidenceData) -> bool {
    let zero = |v: &[F::Elem; 3]| v.iter().all(|x| field.is_zero(x));
    if c.points.len() != inc.points() || c.lines.len() != inc.lines() {
        return false;
    }
    if c.points.iter().chain(&c.lines).any(zero) {
        return false;
    }
    for (i, x) in c.points.iter().enumerate() {
        for (j, l) in c.lines.iter().enumerate() {
            if field.is_zero(&dot(field, x, l)) != inc.is_incident(i + 1, j + 1) {
                return false;
            }
        }
    }
    let distinct = |vs: &[[F::Elem; 3]]| {
        (0..vs.len()).all(|a| (a + 1..vs.len()).all(|b| !proportional(field, &vs[a], &vs[b])))
    };
    distinct(&c.points) && distinct(&c.lines)
}

/// The points of P²(F_p) in normalized form and lexicographic order; the
/// same list indexes the lines.
pub fn projective_plane(field: &PrimeField) -> Vec<[u32; 3]> {
    let p = field.modulus();
    let mut out = Vec::with_capacity((p * p + p + 1) as usize);
    for a in 0..p {
        for b in 0..p {
            out.push([1, a, b]);
        }
    }
    for b in 0..p {
        out.push([0, 1, b]);
    }
    out.push([0, 0, 1]);
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Backtracking unless the instance is tiny.
    #[default]
    Auto,
    Backtrack,
    /// Full product scan with a check at the leaves.
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    pub strategy: Strategy,
    /// Cap on search nodes visited.
    pub budget: u64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            strategy: Strategy::Auto,
            budget: 200_000_000,
            workers: None,
        }
    }
}

/// Product sizes up to this many leaves are scanned directly in Auto mode.
const BRUTE_AUTO_LIMIT: u128 = 1 << 16;

struct Counter {
    visited: AtomicU64,
    found: AtomicU64,
    exceeded: AtomicBool,
    budget: u64,
}

impl Counter {
    fn new(budget: u64) -> Self {
        Counter {
            visited: AtomicU64::new(0),
            found: AtomicU64::new(0),
            exceeded: AtomicBool::new(false),
            budget,
        }
    }

    /// Records a visit; false once the budget is spent.
    fn tick(&self) -> bool {
        if self.exceeded.load(Ordering::Relaxed) {
            return false;
        }
        if self.visited.fetch_add(1, Ordering::Relaxed) + 1 > self.budget {
            self.exceeded.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn finish<T>(&self, mut results: Vec<T>) -> Result<Vec<T>>
    where
        T: Ord,
    {
        if self.exceeded.load(Ordering::Relaxed) {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
                visited: self.visited.load(Ordering::Relaxed),
                found: self.found.load(Ordering::Relaxed) as usize,
            });
        }
        results.sort_unstable();
        Ok(results)
    }
}

fn in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Parse(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Fixed-width bitset over indices of P²(F_p).
#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn full(n: usize) -> Self {
        let mut v = vec![u64::MAX; n.div_ceil(64)];
        if !n.is_multiple_of(64) {
            *v.last_mut().expect("n > 0") = (1u64 << (n % 64)) - 1;
        }
        Bits(v)
    }

    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn and(&mut self, o: &Bits) {
        self.0.iter_mut().zip(&o.0).for_each(|(a, b)| *a &= b);
    }

    fn and_not(&mut self, o: &Bits) {
        self.0.iter_mut().zip(&o.0).for_each(|(a, b)| *a &= !b);
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let t = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + t)
            })
        })
    }
}

/// Search order: repeatedly the unplaced object with the most incidences
/// to placed objects, then the most incidences overall, then lowest index.
fn search_order(inc: &IncidenceData) -> Vec<usize> {
    let total = inc.objects();
    let degree = |k: usize| (1..=total).filter(|&o| inc.objects_incident(k, o)).count();
    let mut placed: Vec<usize> = Vec::with_capacity(total);
    while placed.len() < total {
        let next = (1..=total)
            .filter(|k| !placed.contains(k))
            .max_by_key(|&k| {
                let linked = placed.iter().filter(|&&o| inc.objects_incident(k, o)).count();
                (linked, degree(k), std::cmp::Reverse(k))
            })
            .expect("an unplaced object remains");
        placed.push(next);
    }
    placed
}

struct Plane {
    coords: Vec<[u32; 3]>,
    /// on[l] = set of points on line l
    on: Vec<Bits>,
}

impl Plane {
    fn new(field: &PrimeField) -> Self {
        let coords = projective_plane(field);
        let n = coords.len();
        let on = (0..n)
            .map(|l| {
                let mut b = Bits::empty(n);
                for (x, c) in coords.iter().enumerate() {
                    if field.is_zero(&field.dot(c, &coords[l])) {
                        b.set(x);
                    }
                }
                b
            })
            .collect();
        Plane { coords, on }
    }

    fn size(&self) -> usize {
        self.coords.len()
    }
}

/// All configurations over F_p realizing I, in canonical order.
pub fn enumerate_c_i(
    inc: &IncidenceData,
    field: &PrimeField,
    opts: &EnumOptions,
) -> Result<Vec<Configuration<u32>>> {
    let plane = Plane::new(field);
    let leaves = (plane.size() as u128).checked_pow(inc.objects() as u32).unwrap_or(u128::MAX);
    let brute = match opts.strategy {
        Strategy::Brute => true,
        Strategy::Backtrack => false,
        Strategy::Auto => leaves <= BRUTE_AUTO_LIMIT,
    };
    let counter = Counter::new(opts.budget);
    let results = in_pool(opts.workers, || {
        if brute {
            brute_force(inc, field, &plane, &counter)
        } else {
            backtrack(inc, &plane, &counter)
        }
    })?;
    counter.finish(results)
}

fn assemble(inc: &IncidenceData, plane: &Plane, choice: &[usize]) -> Configuration<u32> {
    let d = inc.points();
    Configuration {
        points: choice[..d].iter().map(|&x| plane.coords[x]).collect(),
        lines: choice[d..].iter().map(|&x| plane.coords[x]).collect(),
    }
}

fn brute_force(inc: &IncidenceData, field: &PrimeField, plane: &Plane, counter: &Counter) -> Vec<Configuration<u32>> {
    let total = inc.objects();
    let size = plane.size();
    if total == 0 {
        return vec![Configuration { points: vec![], lines: vec![] }];
    }
    (0..size)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            let mut choice = vec![0usize; total];
            choice[0] = first;
            // odometer over the remaining coordinates
            loop {
                if !counter.tick() {
                    break;
                }
                let config = assemble(inc, plane, &choice);
                if check_configuration(field, &config, inc) {
                    counter.found.fetch_add(1, Ordering::Relaxed);
                    out.push(config);
                }
                let mut k = total;
                loop {
                    k -= 1;
                    if k == 0 {
                        return out;
                    }
                    choice[k] += 1;
                    if choice[k] < size {
                        break;
                    }
                    choice[k] = 0;
                }
            }
            out
        })
        .collect()
}

fn backtrack(inc: &IncidenceData, plane: &Plane, counter: &Counter) -> Vec<Configuration<u32>> {
    let total = inc.objects();
    if total == 0 {
        return vec![Configuration { points: vec![], lines: vec![] }];
    }
    let order = search_order(inc);
    let first = order[0];
    let size = plane.size();
    (0..size)
        .into_par_iter()
        .flat_map_iter(|start| {
            let mut out = Vec::new();
            // assignment indexed by object (1-based), usize::MAX = unplaced
            let mut assign = vec![usize::MAX; total + 1];
            assign[first] = start;
            if counter.tick() {
                extend(inc, plane, &order, 1, &mut assign, counter, &mut out);
            }
            out
        })
        .collect()
}

fn candidates(inc: &IncidenceData, plane: &Plane, order: &[usize], depth: usize, assign: &[usize]) -> Bits {
    let obj = order[depth];
    let kind = inc.kind(obj);
    let mut cand = Bits::full(plane.size());
    for &other in &order[..depth] {
        let at = assign[other];
        if inc.kind(other) == kind {
            cand.clear(at);
            continue;
        }
        // point/line duality: the points on line `at` are the lines through point `at`
        if inc.objects_incident(obj, other) {
            cand.and(&plane.on[at]);
        } else {
            cand.and_not(&plane.on[at]);
        }
    }
    cand
}

fn extend(
    inc: &IncidenceData,
    plane: &Plane,
    order: &[usize],
    depth: usize,
    assign: &mut Vec<usize>,
    counter: &Counter,
    out: &mut Vec<Configuration<u32>>,
) {
    if depth == order.len() {
        let choice: Vec<usize> = (1..=inc.objects()).map(|k| assign[k]).collect();
        counter.found.fetch_add(1, Ordering::Relaxed);
        out.push(assemble(inc, plane, &choice));
        return;
    }
    let obj = order[depth];
    for c in candidates(inc, plane, order, depth, assign).iter() {
        if !counter.tick() {
            return;
        }
        assign[obj] = c;
        extend(inc, plane, order, depth + 1, assign, counter, out);
    }
    assign[obj] = usize::MAX;
}

/// Whether an atom holds for the given coordinates of its two objects.
pub fn atom_holds<F: Field>(field: &F, atom: &Atom, first: &[F::Elem; 3], second: &[F::Elem; 3]) -> bool {
    match atom.kind {
        AtomKind::Incident => field.is_zero(&dot(field, first, second)),
        AtomKind::NonIncident => !field.is_zero(&dot(field, first, second)),
        AtomKind::DistinctPoints | AtomKind::DistinctLines => !proportional(field, first, second),
    }
}

/// All configurations over F_p satisfying every atom, in canonical order.
/// Objects are assigned in index order (points, then lines) and each atom
/// is evaluated as soon as both of its objects are placed.
pub fn solutions(cs: &ConditionSet, field: &PrimeField, opts: &EnumOptions) -> Result<Vec<Configuration<u32>>> {
    let plane = projective_plane(field);
    let d = cs.points();
    let total = d + cs.lines();
    // atoms grouped by the later of their two objects (0-based object slots)
    let mut due: Vec<Vec<(usize, usize, Atom)>> = vec![Vec::new(); total];
    for atom in cs.atoms() {
        let (a, b) = atom.slots(d);
        due[a.max(b)].push((a, b, *atom));
    }
    let counter = Counter::new(opts.budget);
    let results = in_pool(opts.workers, || {
        if total == 0 {
            return vec![Configuration { points: vec![], lines: vec![] }];
        }
        (0..plane.len())
            .into_par_iter()
            .flat_map_iter(|start| {
                let mut out = Vec::new();
                let mut slots = vec![[0u32; 3]; total];
                slots[0] = plane[start];
                if counter.tick() && due[0].is_empty() {
                    place(field, &plane, &due, 1, &mut slots, d, &counter, &mut out);
                }
                out
            })
            .collect::<Vec<_>>()
    })?;
    counter.finish(results)
}

#[allow(clippy::too_many_arguments)]
fn place(
    field: &PrimeField,
    plane: &[[u32; 3]],
    due: &[Vec<(usize, usize, Atom)>],
    k: usize,
    slots: &mut Vec<[u32; 3]>,
    d: usize,
    counter: &Counter,
    out: &mut Vec<Configuration<u32>>,
) {
    if k == slots.len() {
        counter.found.fetch_add(1, Ordering::Relaxed);
        out.push(Configuration {
            points: slots[..d].to_vec(),
            lines: slots[d..].to_vec(),
        });
        return;
    }
    for v in plane {
        if !counter.tick() {
            return;
        }
        slots[k] = *v;
        let ok = due[k].iter().all(|(a, b, atom)| atom_holds(field, atom, &slots[*a], &slots[*b]));
        if ok {
            place(field, plane, due, k + 1, slots, d, counter, out);
        }
    }
}

/// Outcome of comparing the compiled moduli conditions with C_I.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub incidence: IncidenceData,
    pub prime: u32,
    pub equal: bool,
    pub moduli_count: usize,
    pub incidence_count: usize,
    /// First configuration (in canonical order) found on one side only,
    /// tagged with the side it belongs to.
    pub first_discrepancy: Option<(Side, Configuration<u32>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    ModuliOnly,
    IncidenceOnly,
}

/// Builds the Murphy instance for I, compiles its conditions and compares
/// their solutions over F_p with the direct enumeration of C_I.
pub fn verify_equivalence(
    inc: &IncidenceData,
    field: &PrimeField,
    opts: &EnumOptions,
    allow_degenerate: bool,
) -> Result<EquivalenceReport> {
    let instance = MurphyInstance::new(inc.clone(), allow_degenerate)?;
    let cs = generate_conditions(&instance)?;
    let moduli = solutions(&cs, field, opts)?;
    let direct = enumerate_c_i(inc, field, opts)?;
    let first_discrepancy = first_difference(&moduli, &direct);
    Ok(EquivalenceReport {
        incidence: inc.clone(),
        prime: field.modulus(),
        equal: first_discrepancy.is_none(),
        moduli_count: moduli.len(),
        incidence_count: direct.len(),
        first_discrepancy,
    })
}

fn first_difference(a: &[Configuration<u32>], b: &[Configuration<u32>]) -> Option<(Side, Configuration<u32>)> {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return None,
            (Some(x), None) => return Some((Side::ModuliOnly, x.clone())),
            (None, Some(y)) => return Some((Side::IncidenceOnly, y.clone())),
            (Some(x), Some(y)) => match x.cmp(y) {
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Less => return Some((Side::ModuliOnly, x.clone())),
                std::cmp::Ordering::Greater => return Some((Side::IncidenceOnly, y.clone())),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RationalField;
    use num_rational::BigRational;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn pair() -> IncidenceData {
        IncidenceData::new(2, 1, vec![(1, 1)]).unwrap()
    }

    #[test]
    fn incidence_data_is_validated_and_sorted() {
        let i = IncidenceData::new(2, 2, vec![(2, 1), (1, 1), (2, 1)]).unwrap();
        assert_eq!(i.pairs(), &[(1, 1), (2, 1)]);
        assert!(IncidenceData::new(1, 1, vec![(2, 1)]).is_err());
        assert!(i.objects_incident(1, 3) && i.objects_incident(3, 2) && !i.objects_incident(1, 4));
        assert_eq!(IncidenceData::all(2, 2).len(), 16);
    }

    #[test]
    fn fano_has_three_points_per_line_and_lines_per_point() {
        let fano = IncidenceData::fano();
        assert_eq!(fano.pairs().len(), 21);
        for k in 1..=7 {
            assert_eq!(fano.pairs().iter().filter(|p| p.0 == k).count(), 3);
            assert_eq!(fano.pairs().iter().filter(|p| p.1 == k).count(), 3);
        }
        // any two lines meet in exactly one point
        for a in 1..=7 {
            for b in a + 1..=7 {
                let common = (1..=7).filter(|&i| fano.is_incident(i, a) && fano.is_incident(i, b)).count();
                assert_eq!(common, 1);
            }
        }
    }

    #[test]
    fn configuration_checks_by_hand() {
        let q = RationalField;
        let r = |v: [i64; 3]| v.map(|x| BigRational::from_integer(x.into()));
        let c = Configuration::normalized(&q, vec![r([1, 0, 0]), r([0, 1, 0])], vec![r([0, 1, 0])]).unwrap();
        assert!(check_configuration(&q, &c, &pair()));
        assert!(!check_configuration(&q, &c, &IncidenceData::new(2, 1, vec![]).unwrap()));
        let same = Configuration::normalized(&q, vec![r([1, 0, 0]), r([2, 0, 0])], vec![r([0, 1, 0])]).unwrap();
        assert!(!check_configuration(&q, &same, &pair()));
    }

    #[test]
    fn plane_sizes() {
        assert_eq!(projective_plane(&f(2)).len(), 7);
        assert_eq!(projective_plane(&f(3)).len(), 13);
        assert_eq!(projective_plane(&f(5)).len(), 31);
    }

    #[test]
    fn point_on_line_counts() {
        let opts = EnumOptions::default();
        // lines × points on the line × points off it
        assert_eq!(enumerate_c_i(&pair(), &f(2), &opts).unwrap().len(), 7 * 3 * 4);
        assert_eq!(enumerate_c_i(&pair(), &f(3), &opts).unwrap().len(), 13 * 4 * 9);
    }

    #[test]
    fn strategies_agree() {
        for inc in IncidenceData::all(2, 2) {
            let b = EnumOptions { strategy: Strategy::Brute, ..Default::default() };
            let t = EnumOptions { strategy: Strategy::Backtrack, ..Default::default() };
            assert_eq!(enumerate_c_i(&inc, &f(2), &b).unwrap(), enumerate_c_i(&inc, &f(2), &t).unwrap());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let opts = EnumOptions { budget: 10, ..Default::default() };
        assert!(matches!(
            enumerate_c_i(&IncidenceData::fano(), &f(2), &opts),
            Err(Error::BudgetExceeded { budget: 10, .. })
        ));
    }

    #[test]
    fn enumeration_is_independent_of_worker_count() {
        let inc = IncidenceData::new(2, 2, vec![(1, 1), (2, 1)]).unwrap();
        let one = EnumOptions { workers: Some(1), ..Default::default() };
        let four = EnumOptions { workers: Some(4), ..Default::default() };
        assert_eq!(enumerate_c_i(&inc, &f(3), &one).unwrap(), enumerate_c_i(&inc, &f(3), &four).unwrap());
    }

    #[test]
    fn unconstrained_point_ranges_over_the_plane() {
        let cs = ConditionSet::new(1, 0, vec![]).unwrap();
        assert_eq!(solutions(&cs, &f(2), &EnumOptions::default()).unwrap().len(), 7);
    }

    #[test]
    fn pair_equivalence() {
        let r = verify_equivalence(&pair(), &f(2), &EnumOptions::default(), false).unwrap();
        assert!(r.equal);
        assert_eq!((r.moduli_count, r.incidence_count), (84, 84));
    }

    #[test]
    fn first_difference_reports_the_side() {
        let a = Configuration { points: vec![[1, 0, 0]], lines: vec![] };
        let b = Configuration { points: vec![[0, 1, 0]], lines: vec![] };
        assert_eq!(first_difference(&[a.clone()], &[a.clone(), b.clone()]), Some((Side::IncidenceOnly, b.clone())));
        assert_eq!(first_difference(&[b.clone()], &[a]), Some((Side::ModuliOnly, b)));
    }
}
