//! Interned normal forms of each degree.
//!
//! A degree-0 form fixes the sign of every variable (its positive part is
//! the `color`).  A degree-`k+1` form fixes a color and, for every direction
//! `i` below the dimension, the exact set `sub_i` of degree-`k` forms it
//! asserts reachable in direction `i`; every form outside `sub_i` is
//! asserted unreachable.  Forms of one degree partition every unit, which is
//! what makes the identity of interned nodes a disjointness test.
//!
//! Nodes are hash-consed inside a [`FormContext`]: interning structurally
//! equal data returns the identical `FormId`, so equality is O(1) and the
//! high-degree forms produced by model inspection stay shared DAGs.  The
//! full set of forms of a degree is only ever materialized below a
//! configurable cap; everything above arises lazily.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::term::{Term, TermNode};

/// Canonical identifier of an interned form, unique within its context.
pub type FormId = u32;

/// Errors from form construction and use.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("dimension must be at least 2, got {0}")]
    DimTooSmall(u32),
    #[error("at most 64 variables are supported, got {0}")]
    TooManyVars(usize),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("subs must have one entry per direction: expected {expected}, got {got}")]
    SubsArity { expected: u32, got: usize },
    #[error("subs members must all have the same degree")]
    MixedDegreeSubs,
    #[error("invalid form id {0}")]
    InvalidFormId(FormId),
    #[error("projection degree {requested} exceeds form degree {degree}")]
    ProjectionAboveDegree { degree: u32, requested: u32 },
    #[error("{count} forms exceed the configured cap of {cap}")]
    CapExceeded { count: FormCount, cap: u64 },
    #[error("form spans {nodes} interned nodes, beyond the printing cap of {cap}")]
    TermTooLarge { nodes: usize, cap: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// `|F_k(X;n)|` is always a power of two, so counts are carried as exact
/// exponents.  Degrees whose exponent itself overflows 128 bits are reported
/// as [`FormCount::Huge`]; no machine can materialize those values anyway.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormCount {
    /// Exactly `2^log2`.
    Exact { log2: u128 },
    /// At least `2^(2^127)`.
    Huge,
}

impl FormCount {
    /// The value itself, when it fits in 128 bits.
    pub fn as_u128(&self) -> Option<u128> {
        match self {
            FormCount::Exact { log2 } if *log2 <= 127 => Some(1u128 << *log2),
            _ => None,
        }
    }

    /// `count <= cap`.
    pub fn le(&self, cap: u64) -> bool {
        match self.as_u128() {
            Some(v) => v <= cap as u128,
            None => false,
        }
    }

    /// Exact decimal digits, for exponents small enough to print.
    pub fn to_decimal(&self) -> Option<String> {
        match self {
            FormCount::Exact { log2 } if *log2 <= 4096 => {
                // little-endian decimal doubling
                let mut digits = vec![1u8];
                for _ in 0..*log2 {
                    let mut carry = 0u8;
                    for d in digits.iter_mut() {
                        let v = *d * 2 + carry;
                        *d = v % 10;
                        carry = v / 10;
                    }
                    if carry > 0 {
                        digits.push(carry);
                    }
                }
                Some(digits.iter().rev().map(|d| (b'0' + d) as char).collect())
            }
            _ => None,
        }
    }
}

impl fmt::Display for FormCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_decimal() {
            Some(s) => f.write_str(&s),
            None => match self {
                FormCount::Exact { log2 } => write!(f, "2^{log2}"),
                FormCount::Huge => f.write_str("2^2^127 or more"),
            },
        }
    }
}

/// `|F_k(X;n)|` for `|X| = size_x`:  `|F_0| = 2^|X|` and
/// `|F_{k+1}| = 2^|X| * 2^(n*|F_k|)`.
pub fn count_forms(size_x: u32, n: u32, k: u32) -> Result<FormCount, FormError> {
    if n < 2 {
        return Err(FormError::DimTooSmall(n));
    }
    let mut log2: u128 = size_x as u128;
    for _ in 0..k {
        if log2 > 127 {
            return Ok(FormCount::Huge);
        }
        let prev = 1u128 << log2;
        let Some(scaled) = prev.checked_mul(n as u128) else {
            return Ok(FormCount::Huge);
        };
        let Some(next) = scaled.checked_add(size_x as u128) else {
            return Ok(FormCount::Huge);
        };
        log2 = next;
    }
    Ok(FormCount::Exact { log2 })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct FormNode {
    degree: u32,
    color: u64,
    /// One sorted, deduplicated member list per direction; `None` at degree 0.
    subs: Option<Vec<Vec<FormId>>>,
}

/// Complements are printed literally (one `-c_i σ` per missing form) only
/// while the full degree-below form set is this small; otherwise the
/// complement collapses to a single `-c_i -(σ_1 + ... + σ_m)` conjunct,
/// which denotes the same set in every unit because the forms of a degree
/// partition it.
const LITERAL_COMPLEMENT_MAX: u64 = 64;

/// Owner of all interned forms for one problem: the variable universe `X`,
/// the dimension `n`, the node arena, and the memo tables.
pub struct FormContext {
    vars: Vec<String>,
    dim: u32,
    form_cap: u64,
    nodes: Vec<FormNode>,
    intern: BTreeMap<FormNode, FormId>,
    consistent: Vec<Option<bool>>,
    proj_step: Vec<Option<FormId>>,
}

pub const DEFAULT_FORM_CAP: u64 = 100_000;

impl FormContext {
    /// A context over the given variables (sorted and deduplicated) in the
    /// given dimension.
    pub fn new(vars: &[&str], dim: u32) -> Result<FormContext, FormError> {
        if dim < 2 {
            return Err(FormError::DimTooSmall(dim));
        }
        let mut sorted: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        sorted.sort();
        sorted.dedup();
        if sorted.len() > 64 {
            return Err(FormError::TooManyVars(sorted.len()));
        }
        Ok(FormContext {
            vars: sorted,
            dim,
            form_cap: DEFAULT_FORM_CAP,
            nodes: Vec::new(),
            intern: BTreeMap::new(),
            consistent: Vec::new(),
            proj_step: Vec::new(),
        })
    }

    /// Context sized for the given terms: their variables, and the largest
    /// effective dimension among them (at least `min_dim`).
    pub fn for_terms(terms: &[&Term], min_dim: u32) -> Result<FormContext, FormError> {
        let mut vars: Vec<String> = Vec::new();
        let mut dim = min_dim.max(2);
        for t in terms {
            vars.extend(t.vars());
            dim = dim.max(t.effective_dim());
        }
        let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        FormContext::new(&refs, dim)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn form_cap(&self) -> u64 {
        self.form_cap
    }

    pub fn set_form_cap(&mut self, cap: u64) {
        self.form_cap = cap;
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn node(&self, f: FormId) -> &FormNode {
        &self.nodes[f as usize]
    }

    fn check_id(&self, f: FormId) -> Result<(), FormError> {
        if (f as usize) < self.nodes.len() {
            Ok(())
        } else {
            Err(FormError::InvalidFormId(f))
        }
    }

    pub fn degree(&self, f: FormId) -> u32 {
        self.node(f).degree
    }

    /// Positive-variable set as a bitmask over the context variables.
    pub fn color_mask(&self, f: FormId) -> u64 {
        self.node(f).color
    }

    /// Positive-variable names, ascending.
    pub fn color_names(&self, f: FormId) -> Vec<&str> {
        let mask = self.node(f).color;
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| v.as_str())
            .collect()
    }

    /// Per-direction successor sets, absent at degree 0.
    pub fn subs(&self, f: FormId) -> Option<&[Vec<FormId>]> {
        self.node(f).subs.as_deref()
    }

    /// `sub_i(f)`, sorted ascending.  Empty at degree 0.
    pub fn sub(&self, f: FormId, i: u32) -> &[FormId] {
        match &self.node(f).subs {
            Some(s) => &s[i as usize],
            None => &[],
        }
    }

    fn intern_node(&mut self, node: FormNode) -> FormId {
        if let Some(&id) = self.intern.get(&node) {
            return id;
        }
        let id = self.nodes.len() as FormId;
        self.intern.insert(node.clone(), id);
        self.nodes.push(node);
        self.consistent.push(None);
        self.proj_step.push(None);
        id
    }

    fn color_mask_of(&self, color: &[&str]) -> Result<u64, FormError> {
        let mut mask = 0u64;
        for name in color {
            let idx = self
                .vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| FormError::UnknownVariable(name.to_string()))?;
            mask |= 1 << idx;
        }
        Ok(mask)
    }

    /// Intern the form with the given color and per-direction successor
    /// sets (`None` for degree 0).  Idempotent: equal structure returns the
    /// identical node.
    pub fn intern_form(
        &mut self,
        color: &[&str],
        subs: Option<Vec<Vec<FormId>>>,
    ) -> Result<FormId, FormError> {
        let mask = self.color_mask_of(color)?;
        self.intern_form_masked(mask, subs)
    }

    pub(crate) fn intern_form_masked(
        &mut self,
        color: u64,
        subs: Option<Vec<Vec<FormId>>>,
    ) -> Result<FormId, FormError> {
        match subs {
            None => Ok(self.intern_node(FormNode { degree: 0, color, subs: None })),
            Some(mut subs) => {
                if subs.len() != self.dim as usize {
                    return Err(FormError::SubsArity {
                        expected: self.dim,
                        got: subs.len(),
                    });
                }
                let mut member_degree: Option<u32> = None;
                for set in subs.iter_mut() {
                    set.sort_unstable();
                    set.dedup();
                    for &m in set.iter() {
                        self.check_id(m)?;
                        let d = self.degree(m);
                        match member_degree {
                            None => member_degree = Some(d),
                            Some(prev) if prev != d => {
                                return Err(FormError::MixedDegreeSubs)
                            }
                            _ => {}
                        }
                    }
                }
                // A form with all-empty subs still has a well-defined degree
                // only relative to its members; take the empty case as
                // degree 1 over degree-0 members.
                let degree = member_degree.unwrap_or(0) + 1;
                Ok(self.intern_node(FormNode { degree, color, subs: Some(subs) }))
            }
        }
    }

    /// All of `F_k(X;n)` in a fixed lexicographic order (color ascending,
    /// then per-direction member masks ascending, last direction fastest).
    pub fn enumerate_forms(&mut self, k: u32) -> Result<Vec<FormId>, FormError> {
        let count = count_forms(self.vars.len() as u32, self.dim, k)?;
        if !count.le(self.form_cap) {
            return Err(FormError::CapExceeded { count, cap: self.form_cap });
        }
        let n_colors: u64 = 1 << self.vars.len();
        if k == 0 {
            let mut out = Vec::new();
            for color in 0..n_colors {
                out.push(self.intern_form_masked(color, None)?);
            }
            return Ok(out);
        }
        let below = self.enumerate_forms(k - 1)?;
        let m = below.len();
        debug_assert!(m <= 32);
        let n = self.dim as usize;
        let mut out = Vec::new();
        for color in 0..n_colors {
            let mut masks = vec![0u64; n];
            loop {
                let subs: Vec<Vec<FormId>> = masks
                    .iter()
                    .map(|&mask| {
                        (0..m).filter(|&j| mask & (1 << j) != 0).map(|j| below[j]).collect()
                    })
                    .collect();
                out.push(self.intern_form_masked(color, Some(subs))?);
                // odometer, last direction fastest
                let mut pos = n;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    masks[pos] += 1;
                    if masks[pos] < (1u64 << m) {
                        break;
                    }
                    masks[pos] = 0;
                }
                if masks.iter().all(|&x| x == 0) {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// One projection step: the unique form one degree down that lies above
    /// this one.  Color is preserved; each `sub_i` maps elementwise through
    /// projection to two degrees down.
    fn proj_one(&mut self, f: FormId) -> FormId {
        if let Some(p) = self.proj_step[f as usize] {
            return p;
        }
        let node = self.node(f).clone();
        debug_assert!(node.degree >= 1);
        let result = if node.degree == 1 {
            self.intern_node(FormNode { degree: 0, color: node.color, subs: None })
        } else {
            let subs = node
                .subs
                .as_ref()
                .unwrap()
                .iter()
                .map(|set| {
                    let mut projected: Vec<FormId> =
                        set.iter().map(|&m| self.proj_one(m)).collect();
                    projected.sort_unstable();
                    projected.dedup();
                    projected
                })
                .collect();
            self.intern_node(FormNode {
                degree: node.degree - 1,
                color: node.color,
                subs: Some(subs),
            })
        };
        self.proj_step[f as usize] = Some(result);
        result
    }

    /// The unique degree-`h` form above `f`; identity when `h` equals the
    /// degree of `f`.
    pub fn projection(&mut self, f: FormId, h: u32) -> Result<FormId, FormError> {
        self.check_id(f)?;
        let d = self.degree(f);
        if h > d {
            return Err(FormError::ProjectionAboveDegree { degree: d, requested: h });
        }
        let mut cur = f;
        for _ in h..d {
            cur = self.proj_one(cur);
        }
        Ok(cur)
    }

    /// Whether the form is nonzero, i.e. satisfiable in some finite unit.
    ///
    /// Degree 0 is always consistent.  At higher degrees the check demands,
    /// per direction: the form's own projection among the successors
    /// (points see themselves), successor sets that agree one level down
    /// across the direction (cylindrification is constant on a clique), and
    /// recursively consistent successors.  Every positive answer is backed
    /// by an actual witness model downstream.
    pub fn is_consistent(&mut self, f: FormId) -> bool {
        if let Some(v) = self.consistent[f as usize] {
            return v;
        }
        let v = self.compute_consistent(f);
        self.consistent[f as usize] = Some(v);
        v
    }

    fn compute_consistent(&mut self, f: FormId) -> bool {
        let degree = self.degree(f);
        if degree == 0 {
            return true;
        }
        let proj = self.proj_one(f);
        for i in 0..self.dim {
            let members: Vec<FormId> = self.sub(f, i).to_vec();
            // (C1) the point itself is an i-neighbor of itself.
            if members.binary_search(&proj).is_err() {
                return false;
            }
            for &m in &members {
                if !self.is_consistent(m) {
                    return false;
                }
            }
            // (C2) along an i-clique every member sees the same degree-(k-2)
            // forms in direction i.
            if degree >= 2 {
                let mut expected: Vec<FormId> =
                    members.iter().map(|&m| self.proj_one(m)).collect();
                expected.sort_unstable();
                expected.dedup();
                for &m in &members {
                    if self.sub(m, i) != expected.as_slice() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Whether every point satisfying the form satisfies the term.  Requires
    /// `depth(t) <= degree(f)`, variables inside the context, and effective
    /// dimension at most the context dimension.
    pub fn form_entails(&mut self, f: FormId, t: &Term) -> Result<bool, FormError> {
        self.check_id(f)?;
        if t.depth() > self.degree(f) {
            return Err(FormError::Precondition(format!(
                "term depth {} exceeds form degree {}",
                t.depth(),
                self.degree(f)
            )));
        }
        for v in t.vars() {
            if !self.vars.contains(&v) {
                return Err(FormError::UnknownVariable(v));
            }
        }
        if t.effective_dim() > self.dim {
            return Err(FormError::Precondition(format!(
                "term effective dimension {} exceeds context dimension {}",
                t.effective_dim(),
                self.dim
            )));
        }
        let mut memo = BTreeMap::new();
        Ok(self.entails_rec(f, t, &mut memo))
    }

    fn entails_rec(
        &mut self,
        f: FormId,
        t: &Term,
        memo: &mut BTreeMap<(FormId, usize), bool>,
    ) -> bool {
        let key = (f, t.node() as *const TermNode as usize);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let v = match t.node() {
            TermNode::Zero => false,
            TermNode::One => true,
            TermNode::Var(x) => {
                let idx = self.vars.iter().position(|w| w == x).expect("checked");
                self.color_mask(f) & (1 << idx) != 0
            }
            TermNode::Not(a) => !self.entails_rec(f, a, memo),
            TermNode::Meet(a, b) => {
                self.entails_rec(f, a, memo) && self.entails_rec(f, b, memo)
            }
            TermNode::Join(a, b) => {
                self.entails_rec(f, a, memo) || self.entails_rec(f, b, memo)
            }
            TermNode::Cyl(i, a) => {
                let members: Vec<FormId> = self.sub(f, *i).to_vec();
                members.iter().any(|&m| self.entails_rec(m, a, memo))
            }
        };
        memo.insert(key, v);
        v
    }

    /// The number of distinct forms reachable from `f` through subs.
    pub fn reachable_forms(&self, f: FormId) -> Vec<FormId> {
        let mut seen: Vec<bool> = vec![false; self.nodes.len()];
        let mut stack = vec![f];
        let mut out = Vec::new();
        while let Some(cur) = stack.pop() {
            if seen[cur as usize] {
                continue;
            }
            seen[cur as usize] = true;
            out.push(cur);
            if let Some(subs) = self.subs(cur) {
                for set in subs {
                    stack.extend(set.iter().copied());
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The defining conjunction of the form, as a term: signed variable
    /// literals for the color, one positive `c_i σ` per successor, and the
    /// complement either literally (small degree-below sets) or as a single
    /// collapsed conjunct.  Conjunct order is deterministic.
    pub fn form_to_term(&mut self, f: FormId) -> Result<Term, FormError> {
        self.check_id(f)?;
        let reachable = self.reachable_forms(f);
        if reachable.len() as u64 > self.form_cap {
            return Err(FormError::TermTooLarge {
                nodes: reachable.len(),
                cap: self.form_cap,
            });
        }
        let mut memo: BTreeMap<FormId, Term> = BTreeMap::new();
        self.form_term_rec(f, &mut memo)
    }

    fn form_term_rec(
        &mut self,
        f: FormId,
        memo: &mut BTreeMap<FormId, Term>,
    ) -> Result<Term, FormError> {
        if let Some(t) = memo.get(&f) {
            return Ok(t.clone());
        }
        let mut conjuncts: Vec<Term> = Vec::new();
        let color = self.color_mask(f);
        for (idx, name) in self.vars.clone().iter().enumerate() {
            let v = Term::var(name.clone());
            conjuncts.push(if color & (1 << idx) != 0 { v } else { Term::not(&v) });
        }
        let degree = self.degree(f);
        if degree > 0 {
            let literal = count_forms(self.vars.len() as u32, self.dim, degree - 1)?
                .le(LITERAL_COMPLEMENT_MAX);
            for i in 0..self.dim {
                let members: Vec<FormId> = self.sub(f, i).to_vec();
                let mut member_terms = Vec::new();
                for &m in &members {
                    let mt = self.form_term_rec(m, memo)?;
                    conjuncts.push(Term::cyl(i, &mt));
                    member_terms.push(mt);
                }
                if literal {
                    for below in self.enumerate_forms(degree - 1)? {
                        if members.binary_search(&below).is_err() {
                            let bt = self.form_term_rec(below, memo)?;
                            conjuncts.push(Term::not(&Term::cyl(i, &bt)));
                        }
                    }
                } else {
                    let union = Term::big_join(member_terms.iter());
                    conjuncts.push(Term::not(&Term::cyl(i, &Term::not(&union))));
                }
            }
        }
        let t = Term::big_meet(conjuncts.iter());
        memo.insert(f, t.clone());
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx1() -> FormContext {
        FormContext::new(&["x"], 2).unwrap()
    }

    #[test]
    fn counts_match_the_recurrence() {
        assert_eq!(count_forms(1, 2, 0).unwrap().as_u128(), Some(2));
        assert_eq!(count_forms(1, 2, 1).unwrap().as_u128(), Some(32));
        assert_eq!(count_forms(0, 2, 0).unwrap().as_u128(), Some(1));
        // 2 * 2^64
        let c = count_forms(1, 2, 2).unwrap();
        assert_eq!(c.as_u128(), Some(2u128 << 64));
        assert_eq!(c.to_decimal().unwrap(), "36893488147419103232");
        // (1,2,3) has an exponent near 2^66: representable as an exponent,
        // far beyond any cap.
        let d = count_forms(1, 2, 3).unwrap();
        assert!(d.as_u128().is_none());
        assert!(!d.le(u64::MAX));
        assert!(matches!(count_forms(1, 2, 5).unwrap(), FormCount::Huge));
        assert!(count_forms(1, 1, 0).is_err());
    }

    #[test]
    fn interning_is_idempotent() {
        let mut ctx = ctx1();
        let a = ctx.intern_form(&["x"], None).unwrap();
        let b = ctx.intern_form(&["x"], None).unwrap();
        assert_eq!(a, b);
        let e = ctx.intern_form(&[], None).unwrap();
        assert_ne!(a, e);
        assert_eq!(ctx.degree(a), 0);
        assert_eq!(ctx.color_names(a), ["x"]);
    }

    #[test]
    fn degree_one_interning() {
        let mut ctx = ctx1();
        let x = ctx.intern_form(&["x"], None).unwrap();
        let nx = ctx.intern_form(&[], None).unwrap();
        let f = ctx
            .intern_form(&["x"], Some(vec![vec![x, nx], vec![x]]))
            .unwrap();
        assert_eq!(ctx.degree(f), 1);
        assert_eq!(ctx.sub(f, 0), &[x.min(nx), x.max(nx)][..]);
        assert_eq!(ctx.sub(f, 1), &[x][..]);
        // arity error
        assert!(matches!(
            ctx.intern_form(&["x"], Some(vec![vec![x]])),
            Err(FormError::SubsArity { .. })
        ));
    }

    #[test]
    fn mixed_degree_subs_rejected() {
        let mut ctx = ctx1();
        let x = ctx.intern_form(&["x"], None).unwrap();
        let d1 = ctx.intern_form(&["x"], Some(vec![vec![x], vec![x]])).unwrap();
        assert!(matches!(
            ctx.intern_form(&[], Some(vec![vec![x, d1], vec![x]])),
            Err(FormError::MixedDegreeSubs)
        ));
    }

    #[test]
    fn enumerate_degree_zero_and_one() {
        let mut ctx = ctx1();
        let f0 = ctx.enumerate_forms(0).unwrap();
        assert_eq!(f0.len(), 2);
        // empty color first
        assert_eq!(ctx.color_mask(f0[0]), 0);
        assert_eq!(ctx.color_mask(f0[1]), 1);

        let f1 = ctx.enumerate_forms(1).unwrap();
        assert_eq!(f1.len(), 32);
        let mut distinct = f1.clone();
        distinct.sort_unstable();
        distinct.dedup();
        assert_eq!(distinct.len(), 32);
    }

    #[test]
    fn enumerate_cap() {
        let mut ctx = ctx1();
        assert!(matches!(
            ctx.enumerate_forms(2),
            Err(FormError::CapExceeded { .. })
        ));
    }

    #[test]
    fn empty_variable_set_has_one_degree_zero_form() {
        let mut ctx = FormContext::new(&[], 2).unwrap();
        let f0 = ctx.enumerate_forms(0).unwrap();
        assert_eq!(f0.len(), 1);
    }

    #[test]
    fn projection_preserves_color_and_is_identity_at_own_degree() {
        let mut ctx = ctx1();
        let f1 = ctx.enumerate_forms(1).unwrap();
        for &f in &f1 {
            assert_eq!(ctx.projection(f, 1).unwrap(), f);
            let p = ctx.projection(f, 0).unwrap();
            assert_eq!(ctx.degree(p), 0);
            assert_eq!(ctx.color_mask(p), ctx.color_mask(f));
        }
        assert!(ctx.projection(f1[0], 2).is_err());
    }

    #[test]
    fn exactly_eight_consistent_degree_one_forms() {
        let mut ctx = ctx1();
        let f1 = ctx.enumerate_forms(1).unwrap();
        let consistent: Vec<FormId> =
            f1.iter().copied().filter(|&f| ctx.is_consistent(f)).collect();
        assert_eq!(consistent.len(), 8);
        // each consistent form contains its own projection in every sub set
        for &f in &consistent {
            let p = ctx.projection(f, 0).unwrap();
            for i in 0..2 {
                assert!(ctx.sub(f, i).binary_search(&p).is_ok());
            }
        }
    }

    #[test]
    fn inconsistent_when_projection_missing() {
        let mut ctx = ctx1();
        let x = ctx.intern_form(&["x"], None).unwrap();
        let nx = ctx.intern_form(&[], None).unwrap();
        // color {x} but sub_0 lacks the x-form: entails x * -c0 x, which is 0.
        let f = ctx.intern_form(&["x"], Some(vec![vec![nx], vec![x]])).unwrap();
        assert!(!ctx.is_consistent(f));
    }

    #[test]
    fn entailment_examples() {
        let mut ctx = ctx1();
        let x = ctx.intern_form(&["x"], None).unwrap();
        let nx = ctx.intern_form(&[], None).unwrap();
        // x * c0 x * -c0 -x * c1 x * -c1 -x
        let tau = ctx.intern_form(&["x"], Some(vec![vec![x], vec![x]])).unwrap();
        assert!(ctx.form_entails(tau, &Term::cyl(0, &Term::var("x"))).unwrap());
        assert!(!ctx.form_entails(tau, &Term::not(&Term::var("x"))).unwrap());
        assert!(ctx.form_entails(tau, &Term::one()).unwrap());
        // depth precondition
        let deep = Term::cyl(0, &Term::cyl(1, &Term::var("x")));
        assert!(ctx.form_entails(tau, &deep).is_err());
        let _ = nx;
    }

    #[test]
    fn form_to_term_degree_zero_and_one() {
        let mut ctx = ctx1();
        let x = ctx.intern_form(&["x"], None).unwrap();
        let nx = ctx.intern_form(&[], None).unwrap();
        assert_eq!(ctx.form_to_term(x).unwrap(), Term::var("x"));
        assert_eq!(ctx.form_to_term(nx).unwrap(), Term::not(&Term::var("x")));

        let f = ctx
            .intern_form(&["x"], Some(vec![vec![x, nx], vec![x]]))
            .unwrap();
        let t = ctx.form_to_term(f).unwrap();
        // one var literal, three positive cyl conjuncts, one complemented
        // conjunct for the missing -x in direction 1
        let s = t.to_string();
        assert!(s.contains("c0"));
        assert!(s.contains("-c1"));
        assert_eq!(t.depth(), 1);
    }
}
