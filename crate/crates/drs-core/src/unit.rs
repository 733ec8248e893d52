//! Finite relativized units and the set-algebra evaluator.
//!
//! A unit is a nonempty set of `n`-tuples over a finite labeled base; tail
//! coordinates beyond `n` are implicit and constant, so they never need to
//! be materialized.  Two points are `i`-related when they agree everywhere
//! except possibly at coordinate `i`; for `i >= n` the relation collapses to
//! identity because the tails coincide.  Cylindrification saturates a set
//! along those equivalence classes, relativized to the unit.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::term::{Term, TermNode};

/// Index of a point within its unit.
pub type PointId = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnitError {
    #[error("a unit must contain at least one point")]
    Empty,
    #[error("point {index} has {got} coordinates, expected {expected}")]
    BadArity { index: usize, got: usize, expected: u32 },
    #[error("point {index} uses base id {id} outside the base of size {base}")]
    BadBaseId { index: usize, id: u32, base: usize },
    #[error("duplicate point at index {0}")]
    Duplicate(usize),
    #[error("dimension must be at least 2, got {0}")]
    DimTooSmall(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unknown variable '{0}' in evaluation")]
    UnknownVariable(String),
}

/// A set of points of one unit, as a fixed-width bitset.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PointSet {
    words: Vec<u64>,
    universe: usize,
}

impl PointSet {
    pub fn empty(universe: usize) -> PointSet {
        PointSet { words: vec![0; universe.div_ceil(64)], universe }
    }

    pub fn full(universe: usize) -> PointSet {
        let mut s = PointSet::empty(universe);
        for p in 0..universe {
            s.insert(p as PointId);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, p: PointId) {
        self.words[p as usize / 64] |= 1 << (p as usize % 64);
    }

    pub fn contains(&self, p: PointId) -> bool {
        self.words[p as usize / 64] & (1 << (p as usize % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        debug_assert_eq!(self.universe, other.universe);
        PointSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
            universe: self.universe,
        }
    }

    pub fn intersect(&self, other: &PointSet) -> PointSet {
        debug_assert_eq!(self.universe, other.universe);
        PointSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            universe: self.universe,
        }
    }

    pub fn minus(&self, other: &PointSet) -> PointSet {
        debug_assert_eq!(self.universe, other.universe);
        PointSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
            universe: self.universe,
        }
    }

    /// Complement within the universe.
    pub fn complement(&self) -> PointSet {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.universe % 64;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        PointSet { words, universe: self.universe }
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = PointId> + '_ {
        (0..self.universe as u32).filter(|&p| self.contains(p))
    }

    /// Set from a membership mask (bit `j` selects point `j`).
    pub fn from_mask(universe: usize, mask: u64) -> PointSet {
        debug_assert!(universe <= 64);
        let mut s = PointSet::empty(universe);
        for p in 0..universe {
            if mask & (1 << p) != 0 {
                s.insert(p as PointId);
            }
        }
        s
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Variable evaluation: each variable denotes a set of points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Evaluation {
    map: BTreeMap<String, PointSet>,
}

impl Evaluation {
    pub fn new() -> Evaluation {
        Evaluation { map: BTreeMap::new() }
    }

    pub fn set(&mut self, var: impl Into<String>, points: PointSet) {
        self.map.insert(var.into(), points);
    }

    pub fn get(&self, var: &str) -> Option<&PointSet> {
        self.map.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &PointSet)> {
        self.map.iter()
    }
}

/// A finite unit: a labeled base and a set of `n`-tuples over it, with the
/// per-direction clique structure precomputed.
#[derive(Clone, Debug)]
pub struct Unit {
    n: u32,
    base: Vec<String>,
    points: Vec<Vec<u32>>,
    /// For each direction `i < n`: class id per point, then members per class.
    class_of: Vec<Vec<u32>>,
    class_members: Vec<Vec<Vec<PointId>>>,
    /// `0..len` — lets `clique` hand back one-point slices for `i >= n`.
    identity: Vec<PointId>,
}

impl Unit {
    pub fn new(n: u32, base: Vec<String>, points: Vec<Vec<u32>>) -> Result<Unit, UnitError> {
        if n < 2 {
            return Err(UnitError::DimTooSmall(n));
        }
        if points.is_empty() {
            return Err(UnitError::Empty);
        }
        for (idx, p) in points.iter().enumerate() {
            if p.len() != n as usize {
                return Err(UnitError::BadArity { index: idx, got: p.len(), expected: n });
            }
            for &c in p {
                if c as usize >= base.len() {
                    return Err(UnitError::BadBaseId { index: idx, id: c, base: base.len() });
                }
            }
        }
        let mut sorted: Vec<&Vec<u32>> = points.iter().collect();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                let idx = points.iter().position(|p| p == w[0]).unwrap();
                return Err(UnitError::Duplicate(idx));
            }
        }

        let mut class_of = Vec::with_capacity(n as usize);
        let mut class_members = Vec::with_capacity(n as usize);
        for i in 0..n as usize {
            let mut groups: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
            let mut of = vec![0u32; points.len()];
            let mut members: Vec<Vec<PointId>> = Vec::new();
            for (pid, p) in points.iter().enumerate() {
                let mut key = p.clone();
                key[i] = u32::MAX; // mask out coordinate i
                let next = members.len() as u32;
                let class = *groups.entry(key).or_insert(next);
                if class as usize == members.len() {
                    members.push(Vec::new());
                }
                of[pid] = class;
                members[class as usize].push(pid as PointId);
            }
            class_of.push(of);
            class_members.push(members);
        }
        let identity = (0..points.len() as PointId).collect();
        Ok(Unit { n, base, points, class_of, class_members, identity })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn base_size(&self) -> usize {
        self.base.len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, p: PointId) -> &[u32] {
        &self.points[p as usize]
    }

    pub fn points(&self) -> impl Iterator<Item = (PointId, &[u32])> {
        self.points.iter().enumerate().map(|(i, p)| (i as PointId, p.as_slice()))
    }

    /// The points `i`-related to `p` (including `p`); identity for `i >= n`.
    pub fn clique(&self, i: u32, p: PointId) -> &[PointId] {
        if i >= self.n {
            return &self.identity[p as usize..=p as usize];
        }
        let class = self.class_of[i as usize][p as usize];
        &self.class_members[i as usize][class as usize]
    }

    /// Whether `p` and `q` agree everywhere except possibly at `i`.
    pub fn related(&self, i: u32, p: PointId, q: PointId) -> bool {
        if i >= self.n {
            return p == q;
        }
        self.class_of[i as usize][p as usize] == self.class_of[i as usize][q as usize]
    }

    /// `C_i(s)`: all points `i`-related to a member of `s`.
    pub fn cylindrify(&self, i: u32, s: &PointSet) -> PointSet {
        if i >= self.n {
            return s.clone();
        }
        let mut out = PointSet::empty(self.len());
        for members in &self.class_members[i as usize] {
            if members.iter().any(|&p| s.contains(p)) {
                for &p in members {
                    out.insert(p);
                }
            }
        }
        out
    }
}

/// Interpret a term in the full algebra of the unit: Boolean operators are
/// set operations relativized to the unit, `c_i` saturates `i`-cliques.
/// Indices at or beyond the width act as identity.
pub fn evaluate(unit: &Unit, ev: &Evaluation, t: &Term) -> Result<PointSet, EvalError> {
    let mut memo: BTreeMap<usize, PointSet> = BTreeMap::new();
    eval_rec(unit, ev, t, &mut memo)
}

fn eval_rec(
    unit: &Unit,
    ev: &Evaluation,
    t: &Term,
    memo: &mut BTreeMap<usize, PointSet>,
) -> Result<PointSet, EvalError> {
    let key = t.node() as *const TermNode as usize;
    if let Some(s) = memo.get(&key) {
        return Ok(s.clone());
    }
    let out = match t.node() {
        TermNode::Zero => PointSet::empty(unit.len()),
        TermNode::One => PointSet::full(unit.len()),
        TermNode::Var(x) => ev
            .get(x)
            .cloned()
            .ok_or_else(|| EvalError::UnknownVariable(x.clone()))?,
        TermNode::Not(a) => eval_rec(unit, ev, a, memo)?.complement(),
        TermNode::Meet(a, b) => {
            eval_rec(unit, ev, a, memo)?.intersect(&eval_rec(unit, ev, b, memo)?)
        }
        TermNode::Join(a, b) => {
            eval_rec(unit, ev, a, memo)?.union(&eval_rec(unit, ev, b, memo)?)
        }
        TermNode::Cyl(i, a) => unit.cylindrify(*i, &eval_rec(unit, ev, a, memo)?),
    };
    memo.insert(key, out.clone());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_term;

    fn singleton() -> Unit {
        Unit::new(2, vec!["v0".into(), "v1".into()], vec![vec![0, 1]]).unwrap()
    }

    #[test]
    fn singleton_is_its_own_neighbor() {
        let u = singleton();
        let mut ev = Evaluation::new();
        ev.set("x", PointSet::full(1));
        let t = parse_term("c0 x").unwrap();
        let r = evaluate(&u, &ev, &t).unwrap();
        assert!(r.contains(0));
    }

    #[test]
    fn cyl_of_zero_is_zero() {
        let u = singleton();
        let ev = Evaluation::new();
        for i in 0..4 {
            let t = Term::cyl(i, &Term::zero());
            assert!(evaluate(&u, &ev, &t).unwrap().is_empty());
        }
    }

    #[test]
    fn indices_beyond_width_act_as_identity() {
        let u = singleton();
        let mut ev = Evaluation::new();
        ev.set("x", PointSet::full(1));
        let t = parse_term("c7 x").unwrap();
        assert_eq!(evaluate(&u, &ev, &t).unwrap(), PointSet::full(1));
    }

    #[test]
    fn commutation_fails_on_the_three_point_unit() {
        // V = {(a,b),(a,b'),(a',b')}, ev(x) = {(a',b')}
        let base = vec!["a".into(), "b".into(), "a'".into(), "b'".into()];
        let points = vec![vec![0, 1], vec![0, 3], vec![2, 3]];
        let u = Unit::new(2, base, points).unwrap();
        let mut ev = Evaluation::new();
        let mut x = PointSet::empty(3);
        x.insert(2);
        ev.set("x", x);
        let t10 = parse_term("c1 c0 x").unwrap();
        let t01 = parse_term("c0 c1 x").unwrap();
        let r10 = evaluate(&u, &ev, &t10).unwrap();
        let r01 = evaluate(&u, &ev, &t01).unwrap();
        assert!(r10.contains(0));
        assert!(!r01.contains(0));
    }

    #[test]
    fn frame_law_distinct_directions_intersect_in_identity() {
        let base = vec!["a".into(), "b".into(), "a'".into(), "b'".into()];
        let points = vec![vec![0, 1], vec![0, 3], vec![2, 3], vec![2, 1]];
        let u = Unit::new(2, base, points).unwrap();
        for p in 0..u.len() as u32 {
            for q in 0..u.len() as u32 {
                if u.related(0, p, q) && u.related(1, p, q) {
                    assert_eq!(p, q);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_units() {
        assert!(Unit::new(2, vec!["a".into()], vec![]).is_err());
        assert!(Unit::new(2, vec!["a".into()], vec![vec![0]]).is_err());
        assert!(Unit::new(2, vec!["a".into()], vec![vec![0, 1]]).is_err());
        assert!(Unit::new(2, vec!["a".into()], vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(Unit::new(1, vec!["a".into()], vec![vec![0]]).is_err());
    }

    #[test]
    fn unknown_variable_is_reported() {
        let u = singleton();
        let ev = Evaluation::new();
        let t = parse_term("y").unwrap();
        assert!(matches!(
            evaluate(&u, &ev, &t),
            Err(EvalError::UnknownVariable(_))
        ));
    }
}
