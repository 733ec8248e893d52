//! Independent brute-force semantic reference.
//!
//! Nothing here shares code with the decision procedure: units are
//! enumerated outright, terms are evaluated by a tiny stack machine over
//! bitmask sets, and formulas are evaluated directly on general assignment
//! models.  The oracle is the cross-check that keeps the clever path
//! honest, so correctness beats speed — bases are labeled and no
//! isomorphism reduction is attempted.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::rng::SplitMix64;
use crate::term::{Formula, FormulaNode, Term, TermNode};
use crate::term::atom_generator;
use crate::unit::{Evaluation, PointSet, Unit};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("dimension must be at least 2, got {0}")]
    DimTooSmall(u32),
    #[error("maxBase is capped at 4 for exhaustive enumeration, got {0}")]
    MaxBaseTooLarge(u32),
    #[error("exhaustive units are capped at 64 points, got {0}")]
    TooManyPoints(usize),
    #[error("term too large for the oracle compiler ({0} nodes)")]
    TermTooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GamError {
    #[error("a general assignment model needs a nonempty assignment set")]
    NoAssignments,
    #[error("assignment {index} has length {got}, expected the model width {expected}")]
    BadAssignmentWidth { index: usize, got: usize, expected: u32 },
    #[error("assignment {index} mentions domain element {id} outside the domain")]
    BadDomainId { index: usize, id: u32 },
    #[error("duplicate assignment at index {0}")]
    DuplicateAssignment(usize),
    #[error("relation '{relation}' mixes tuple ranks {first} and {other}")]
    MixedRank { relation: String, first: usize, other: usize },
    #[error("relation '{relation}' interprets an empty rank")]
    EmptyRank { relation: String },
    #[error("relation '{0}' is not interpreted by the model")]
    UnknownRelation(String),
    #[error("the assignment is not a member of the admissible set")]
    AssignmentNotAdmissible,
    #[error("variable v{0} is outside the model width")]
    VariableOutOfRange(u32),
    #[error("model width must be at least 2, got {0}")]
    WidthTooSmall(u32),
}

/// Lazy stream of all nonempty units over labeled bases of sizes
/// `1..=max_base`, ordered by base size, then point count, then the
/// combination itself.  Duplicates across base sizes (units not touching
/// the whole base) are kept; enumeration is of labeled structures.
pub struct UnitEnumerator {
    n: u32,
    max_base: u32,
    max_points: usize,
    base_size: u32,
    tuples: Vec<Vec<u32>>,
    size: usize,
    combo: Vec<usize>,
    done: bool,
}

/// All nonempty `V ⊆ ^nU` for base sizes `1..=max_base`, in a fixed order.
pub fn enumerate_units(max_base: u32, n: u32) -> Result<UnitEnumerator, OracleError> {
    enumerate_units_capped(max_base, n, usize::MAX)
}

/// Same stream restricted to units with at most `max_points` points.
pub fn enumerate_units_capped(
    max_base: u32,
    n: u32,
    max_points: usize,
) -> Result<UnitEnumerator, OracleError> {
    if n < 2 {
        return Err(OracleError::DimTooSmall(n));
    }
    if max_base == 0 || max_base > 4 {
        return Err(OracleError::MaxBaseTooLarge(max_base));
    }
    let mut e = UnitEnumerator {
        n,
        max_base,
        max_points,
        base_size: 0,
        tuples: Vec::new(),
        size: 0,
        combo: Vec::new(),
        done: false,
    };
    e.next_base_size();
    Ok(e)
}

impl UnitEnumerator {
    fn next_base_size(&mut self) {
        self.base_size += 1;
        if self.base_size > self.max_base {
            self.done = true;
            return;
        }
        // all n-tuples over the base, lexicographic
        let b = self.base_size;
        let mut tuples = Vec::new();
        let mut cur = vec![0u32; self.n as usize];
        loop {
            tuples.push(cur.clone());
            let mut pos = self.n as usize;
            loop {
                if pos == 0 {
                    self.tuples = tuples;
                    self.size = 0;
                    self.advance_size();
                    return;
                }
                pos -= 1;
                cur[pos] += 1;
                if cur[pos] < b {
                    break;
                }
                cur[pos] = 0;
            }
        }
    }

    fn advance_size(&mut self) {
        self.size += 1;
        if self.size > self.tuples.len() || self.size > self.max_points {
            self.next_base_size();
            return;
        }
        self.combo = (0..self.size).collect();
    }

    fn advance_combo(&mut self) {
        // next lexicographic combination of `size` indices out of tuples
        let k = self.size;
        let m = self.tuples.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.advance_size();
                return;
            }
            i -= 1;
            if self.combo[i] < m - (k - i) {
                self.combo[i] += 1;
                for j in i + 1..k {
                    self.combo[j] = self.combo[j - 1] + 1;
                }
                return;
            }
        }
    }
}

impl Iterator for UnitEnumerator {
    type Item = Unit;

    fn next(&mut self) -> Option<Unit> {
        if self.done {
            return None;
        }
        let base: Vec<String> = (0..self.base_size).map(|i| format!("u{i}")).collect();
        let points: Vec<Vec<u32>> =
            self.combo.iter().map(|&i| self.tuples[i].clone()).collect();
        let unit = Unit::new(self.n, base, points).expect("enumerated units are well-formed");
        self.advance_combo();
        Some(unit)
    }
}

// ---- compiled term evaluation over one-word point sets ----

#[derive(Debug, Clone, Copy)]
enum Op {
    Zero,
    One,
    Var(u16),
    Not,
    And,
    Or,
    Cyl(u16),
}

fn compile(t: &Term, vars: &[String], out: &mut Vec<Op>) -> Result<(), OracleError> {
    if out.len() > 100_000 {
        return Err(OracleError::TermTooLarge(out.len()));
    }
    match t.node() {
        TermNode::Zero => out.push(Op::Zero),
        TermNode::One => out.push(Op::One),
        TermNode::Var(x) => {
            let idx = vars.iter().position(|v| v == x).expect("vars cover the term");
            out.push(Op::Var(idx as u16));
        }
        TermNode::Not(a) => {
            compile(a, vars, out)?;
            out.push(Op::Not);
        }
        TermNode::Meet(a, b) => {
            compile(a, vars, out)?;
            compile(b, vars, out)?;
            out.push(Op::And);
        }
        TermNode::Join(a, b) => {
            compile(a, vars, out)?;
            compile(b, vars, out)?;
            out.push(Op::Or);
        }
        TermNode::Cyl(i, a) => {
            compile(a, vars, out)?;
            out.push(Op::Cyl(*i as u16));
        }
    }
    Ok(())
}

struct CompiledUnit {
    unit: Unit,
    full: u64,
    /// Per direction below the unit width: the clique membership masks.
    clique_masks: Vec<Vec<u64>>,
}

impl CompiledUnit {
    fn new(unit: Unit) -> Result<CompiledUnit, OracleError> {
        let len = unit.len();
        if len > 64 {
            return Err(OracleError::TooManyPoints(len));
        }
        let full = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        let mut clique_masks = Vec::new();
        for i in 0..unit.n() {
            let mut seen = vec![false; len];
            let mut masks = Vec::new();
            for p in 0..len as u32 {
                if seen[p as usize] {
                    continue;
                }
                let mut mask = 0u64;
                for &q in unit.clique(i, p) {
                    mask |= 1 << q;
                    seen[q as usize] = true;
                }
                masks.push(mask);
            }
            clique_masks.push(masks);
        }
        Ok(CompiledUnit { unit, full, clique_masks })
    }

    fn run(&self, prog: &[Op], var_masks: &[u64], stack: &mut Vec<u64>) -> u64 {
        stack.clear();
        for op in prog {
            match *op {
                Op::Zero => stack.push(0),
                Op::One => stack.push(self.full),
                Op::Var(v) => stack.push(var_masks[v as usize]),
                Op::Not => {
                    let a = stack.pop().unwrap();
                    stack.push(!a & self.full);
                }
                Op::And => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    stack.push(a & b);
                }
                Op::Or => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    stack.push(a | b);
                }
                Op::Cyl(i) => {
                    let a = stack.pop().unwrap();
                    if (i as u32) >= self.unit.n() {
                        stack.push(a);
                    } else {
                        let mut out = 0u64;
                        for &cm in &self.clique_masks[i as usize] {
                            if a & cm != 0 {
                                out |= cm;
                            }
                        }
                        stack.push(out);
                    }
                }
            }
        }
        stack.pop().unwrap()
    }
}

/// Search bounds for [`oracle_sat`].
#[derive(Debug, Clone)]
pub struct OracleBounds {
    pub max_base: u32,
    pub max_points: usize,
    /// Evaluations are exhaustive while `|V| * #vars <= exhaustive_bits`
    /// (i.e. at most `2^exhaustive_bits` evaluations per unit).
    pub exhaustive_bits: u32,
    /// Seeded sample count per unit beyond the exhaustive regime.
    pub samples: u32,
    pub seed: u64,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds {
            max_base: 3,
            max_points: 5,
            exhaustive_bits: 12,
            samples: 4096,
            seed: 0x5eed_0001,
        }
    }
}

/// Outcome of a bounded satisfiability search.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    /// First model in enumeration order, if any.
    pub model: Option<(Unit, Evaluation)>,
    /// Whether every (unit, evaluation) pair in bounds was tried.
    pub exhaustive: bool,
    pub units_checked: u64,
    pub evaluations: u64,
}

/// Brute-force satisfiability: walk every unit within bounds and every (or
/// a seeded sample of) variable evaluations, and return the first pair on
/// which the term denotes a nonempty set.  A `None` model with
/// `exhaustive = true` is a complete refutation within the bounds; with
/// `exhaustive = false` it is only a sampled claim.
pub fn oracle_sat(t: &Term, bounds: &OracleBounds) -> Result<OracleOutcome, OracleError> {
    let prepared = prepare_units(bounds.max_base, t.effective_dim(), bounds.max_points)?;
    oracle_sat_prepared(t, &prepared, bounds)
}

/// Pre-enumerated, pre-compiled units for repeated oracle calls.
pub struct PreparedUnits {
    units: Vec<CompiledUnit>,
}

pub fn prepare_units(
    max_base: u32,
    n: u32,
    max_points: usize,
) -> Result<PreparedUnits, OracleError> {
    let mut units = Vec::new();
    for unit in enumerate_units_capped(max_base, n, max_points)? {
        units.push(CompiledUnit::new(unit)?);
    }
    Ok(PreparedUnits { units })
}

/// [`oracle_sat`] against an existing unit list (amortizes enumeration
/// across many terms).
pub fn oracle_sat_prepared(
    t: &Term,
    prepared: &PreparedUnits,
    bounds: &OracleBounds,
) -> Result<OracleOutcome, OracleError> {
    let vars: Vec<String> = t.vars().into_iter().collect();
    let mut prog = Vec::new();
    compile(t, &vars, &mut prog)?;

    let mut exhaustive = true;
    let mut units_checked = 0u64;
    let mut evaluations = 0u64;
    let mut stack = Vec::with_capacity(prog.len());
    let mut masks = vec![0u64; vars.len()];

    for cu in &prepared.units {
        units_checked += 1;
        let v = cu.unit.len() as u32;
        let bits = v.saturating_mul(vars.len() as u32);
        let found = if bits <= bounds.exhaustive_bits {
            let total: u64 = 1u64 << bits;
            let mut hit = None;
            for counter in 0..total {
                for (j, m) in masks.iter_mut().enumerate() {
                    *m = (counter >> (j as u32 * v)) & cu.full;
                }
                evaluations += 1;
                if cu.run(&prog, &masks, &mut stack) != 0 {
                    hit = Some(masks.clone());
                    break;
                }
            }
            hit
        } else {
            exhaustive = false;
            let mut rng = SplitMix64::new(bounds.seed ^ units_checked);
            let mut hit = None;
            for _ in 0..bounds.samples {
                for m in masks.iter_mut() {
                    *m = rng.next_mask(v) & cu.full;
                }
                evaluations += 1;
                if cu.run(&prog, &masks, &mut stack) != 0 {
                    hit = Some(masks.clone());
                    break;
                }
            }
            hit
        };
        if let Some(masks) = found {
            let mut ev = Evaluation::new();
            for (j, name) in vars.iter().enumerate() {
                ev.set(name.clone(), PointSet::from_mask(cu.unit.len(), masks[j]));
            }
            return Ok(OracleOutcome {
                model: Some((cu.unit.clone(), ev)),
                exhaustive,
                units_checked,
                evaluations,
            });
        }
    }
    Ok(OracleOutcome { model: None, exhaustive, units_checked, evaluations })
}

// ---- axiom checking ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone)]
pub struct AxiomFailure {
    pub direction: u32,
    /// The offending set(s), as point lists.
    pub sets: Vec<Vec<u32>>,
}

#[derive(Debug, Clone)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub direction: u32,
    pub mode: CheckMode,
    pub samples: u64,
    pub failures: Vec<AxiomFailure>,
}

#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures.is_empty())
    }
}

#[derive(Debug, Clone)]
pub struct AxiomCheckOptions {
    /// Exhaustive over all subsets (pairs) while `|V| <= exhaustive_max`.
    pub exhaustive_max: usize,
    pub samples: u32,
    pub seed: u64,
}

impl Default for AxiomCheckOptions {
    fn default() -> Self {
        AxiomCheckOptions { exhaustive_max: 4, samples: 200, seed: 0x5eed_0002 }
    }
}

pub const AXIOM_NORMAL: &str = "c_i 0 = 0";
pub const AXIOM_INCREASING: &str = "x + c_i x = c_i x";
pub const AXIOM_LOCAL: &str = "c_i(x * c_i y) = c_i x * c_i y";
pub const FACT_IDEMPOTENT: &str = "c_i c_i x = c_i x";
pub const FACT_TOP: &str = "c_i 1 = 1";

/// Check the three operator axioms on every direction of the unit,
/// exhaustively over subsets for small units and with seeded sample pairs
/// otherwise.
pub fn check_axioms(unit: &Unit, opts: &AxiomCheckOptions) -> AxiomReport {
    check_axioms_with_op(unit, &|u, i, s| u.cylindrify(i, s), opts)
}

/// Same check against an arbitrary candidate operator; used to confirm the
/// checker rejects mutated operators.
pub fn check_axioms_with_op(
    unit: &Unit,
    op: &dyn Fn(&Unit, u32, &PointSet) -> PointSet,
    opts: &AxiomCheckOptions,
) -> AxiomReport {
    let mut report = AxiomReport::default();
    let v = unit.len();
    let exhaustive = v <= opts.exhaustive_max;
    for i in 0..unit.n() {
        // c_i 0 = 0: one instance.
        let zero = PointSet::empty(v);
        let mut failures = Vec::new();
        if !op(unit, i, &zero).is_empty() {
            failures.push(AxiomFailure { direction: i, sets: vec![Vec::new()] });
        }
        report.checks.push(AxiomCheck {
            axiom: AXIOM_NORMAL,
            direction: i,
            mode: CheckMode::Exhaustive,
            samples: 1,
            failures,
        });

        let mut incr_failures = Vec::new();
        let mut local_failures = Vec::new();
        let mut incr_samples = 0u64;
        let mut local_samples = 0u64;
        if exhaustive {
            for am in 0..(1u64 << v) {
                let a = PointSet::from_mask(v, am);
                incr_samples += 1;
                if !a.is_subset(&op(unit, i, &a)) {
                    incr_failures
                        .push(AxiomFailure { direction: i, sets: vec![a.iter().collect()] });
                }
                for bm in 0..(1u64 << v) {
                    let b = PointSet::from_mask(v, bm);
                    local_samples += 1;
                    if !local_law_holds(unit, i, op, &a, &b) {
                        local_failures.push(AxiomFailure {
                            direction: i,
                            sets: vec![a.iter().collect(), b.iter().collect()],
                        });
                    }
                }
            }
        } else {
            let mut rng = SplitMix64::new(opts.seed ^ (i as u64) << 32);
            for _ in 0..opts.samples {
                let a = random_set(&mut rng, v);
                let b = random_set(&mut rng, v);
                incr_samples += 1;
                local_samples += 1;
                if !a.is_subset(&op(unit, i, &a)) {
                    incr_failures
                        .push(AxiomFailure { direction: i, sets: vec![a.iter().collect()] });
                }
                if !local_law_holds(unit, i, op, &a, &b) {
                    local_failures.push(AxiomFailure {
                        direction: i,
                        sets: vec![a.iter().collect(), b.iter().collect()],
                    });
                }
            }
        }
        let mode = if exhaustive { CheckMode::Exhaustive } else { CheckMode::Sampled };
        report.checks.push(AxiomCheck {
            axiom: AXIOM_INCREASING,
            direction: i,
            mode,
            samples: incr_samples,
            failures: incr_failures,
        });
        report.checks.push(AxiomCheck {
            axiom: AXIOM_LOCAL,
            direction: i,
            mode,
            samples: local_samples,
            failures: local_failures,
        });
    }
    report
}

fn local_law_holds(
    unit: &Unit,
    i: u32,
    op: &dyn Fn(&Unit, u32, &PointSet) -> PointSet,
    a: &PointSet,
    b: &PointSet,
) -> bool {
    let lhs = op(unit, i, &a.intersect(&op(unit, i, b)));
    let rhs = op(unit, i, a).intersect(&op(unit, i, b));
    lhs == rhs
}

fn random_set(rng: &mut SplitMix64, v: usize) -> PointSet {
    let mut s = PointSet::empty(v);
    for p in 0..v {
        if rng.next_bool() {
            s.insert(p as u32);
        }
    }
    s
}

/// Closure-operator facts that follow from the axioms; checked the same
/// way, reported separately.
pub fn check_closure_facts(unit: &Unit, opts: &AxiomCheckOptions) -> AxiomReport {
    let mut report = AxiomReport::default();
    let v = unit.len();
    let exhaustive = v <= opts.exhaustive_max;
    for i in 0..unit.n() {
        let mut idem_failures = Vec::new();
        let mut samples = 0u64;
        let mut check = |a: PointSet| {
            let ca = unit.cylindrify(i, &a);
            if unit.cylindrify(i, &ca) != ca {
                idem_failures.push(AxiomFailure { direction: i, sets: vec![a.iter().collect()] });
            }
        };
        if exhaustive {
            for am in 0..(1u64 << v) {
                samples += 1;
                check(PointSet::from_mask(v, am));
            }
        } else {
            let mut rng = SplitMix64::new(opts.seed ^ 0xf00d ^ (i as u64));
            for _ in 0..opts.samples {
                samples += 1;
                check(random_set(&mut rng, v));
            }
        }
        let mode = if exhaustive { CheckMode::Exhaustive } else { CheckMode::Sampled };
        report.checks.push(AxiomCheck {
            axiom: FACT_IDEMPOTENT,
            direction: i,
            mode,
            samples,
            failures: idem_failures,
        });

        let top = PointSet::full(v);
        let mut top_failures = Vec::new();
        if unit.cylindrify(i, &top) != top {
            top_failures.push(AxiomFailure { direction: i, sets: vec![top.iter().collect()] });
        }
        report.checks.push(AxiomCheck {
            axiom: FACT_TOP,
            direction: i,
            mode: CheckMode::Exhaustive,
            samples: 1,
            failures: top_failures,
        });
    }
    report
}

// ---- general assignment models ----

/// A first-order model together with an arbitrary nonempty set of
/// admissible assignments; quantifiers range inside that set.
#[derive(Debug, Clone)]
pub struct GamModel {
    width: u32,
    domain: Vec<String>,
    interp: BTreeMap<String, BTreeSet<Vec<u32>>>,
    assignments: Vec<Vec<u32>>,
}

impl GamModel {
    pub fn new(
        width: u32,
        domain: Vec<String>,
        interp: BTreeMap<String, BTreeSet<Vec<u32>>>,
        assignments: Vec<Vec<u32>>,
    ) -> Result<GamModel, GamError> {
        if width < 2 {
            return Err(GamError::WidthTooSmall(width));
        }
        if assignments.is_empty() {
            return Err(GamError::NoAssignments);
        }
        for (index, s) in assignments.iter().enumerate() {
            if s.len() != width as usize {
                return Err(GamError::BadAssignmentWidth {
                    index,
                    got: s.len(),
                    expected: width,
                });
            }
            for &id in s {
                if id as usize >= domain.len() {
                    return Err(GamError::BadDomainId { index, id });
                }
            }
            if assignments[..index].contains(s) {
                return Err(GamError::DuplicateAssignment(index));
            }
        }
        for (relation, tuples) in &interp {
            let mut rank: Option<usize> = None;
            for t in tuples {
                match rank {
                    None => {
                        if t.is_empty() {
                            return Err(GamError::EmptyRank { relation: relation.clone() });
                        }
                        rank = Some(t.len());
                    }
                    Some(r) if r != t.len() => {
                        return Err(GamError::MixedRank {
                            relation: relation.clone(),
                            first: r,
                            other: t.len(),
                        })
                    }
                    _ => {}
                }
                for &id in t {
                    if id as usize >= domain.len() {
                        return Err(GamError::BadDomainId { index: usize::MAX, id });
                    }
                }
            }
        }
        Ok(GamModel { width, domain, interp, assignments })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn assignments(&self) -> &[Vec<u32>] {
        &self.assignments
    }

    pub fn interp(&self) -> &BTreeMap<String, BTreeSet<Vec<u32>>> {
        &self.interp
    }
}

/// Direct recursive evaluation of a formula at an admissible assignment,
/// with quantifiers relativized to the assignment set.
pub fn gam_eval(m: &GamModel, f: &Formula, s: &[u32]) -> Result<bool, GamError> {
    if !m.assignments.iter().any(|t| t == s) {
        return Err(GamError::AssignmentNotAdmissible);
    }
    gam_eval_rec(m, f, s)
}

fn gam_eval_rec(m: &GamModel, f: &Formula, s: &[u32]) -> Result<bool, GamError> {
    match f.node() {
        FormulaNode::Atom(r, args) => {
            let tuples =
                m.interp.get(r).ok_or_else(|| GamError::UnknownRelation(r.clone()))?;
            let mut tuple = Vec::with_capacity(args.len());
            for &a in args {
                if a >= m.width {
                    return Err(GamError::VariableOutOfRange(a));
                }
                tuple.push(s[a as usize]);
            }
            Ok(tuples.contains(&tuple))
        }
        FormulaNode::Not(a) => Ok(!gam_eval_rec(m, a, s)?),
        FormulaNode::And(a, b) => Ok(gam_eval_rec(m, a, s)? && gam_eval_rec(m, b, s)?),
        FormulaNode::Or(a, b) => Ok(gam_eval_rec(m, a, s)? || gam_eval_rec(m, b, s)?),
        FormulaNode::Implies(a, b) => Ok(!gam_eval_rec(m, a, s)? || gam_eval_rec(m, b, s)?),
        FormulaNode::Exists(i, a) => {
            if *i >= m.width {
                return Err(GamError::VariableOutOfRange(*i));
            }
            for t in &m.assignments {
                if agree_except(s, t, *i) && gam_eval_rec(m, a, t)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        FormulaNode::Forall(i, a) => {
            if *i >= m.width {
                return Err(GamError::VariableOutOfRange(*i));
            }
            for t in &m.assignments {
                if agree_except(s, t, *i) && !gam_eval_rec(m, a, t)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

fn agree_except(s: &[u32], t: &[u32], i: u32) -> bool {
    s.iter()
        .zip(t.iter())
        .enumerate()
        .all(|(j, (a, b))| j == i as usize || a == b)
}

/// The unit induced by a general assignment model, with each distinct atom
/// of the formula evaluated into a generator set.  This is the other route
/// of the translation-coherence equation.
pub fn gam_to_unit(m: &GamModel, f: &Formula) -> Result<(Unit, Evaluation), GamError> {
    let unit = Unit::new(m.width, m.domain.clone(), m.assignments.clone())
        .expect("validated assignments form a unit");
    let mut ev = Evaluation::new();
    for (relation, args) in f.atoms() {
        let tuples = m
            .interp
            .get(&relation)
            .ok_or_else(|| GamError::UnknownRelation(relation.clone()))?;
        let mut set = PointSet::empty(unit.len());
        for (p, s) in m.assignments.iter().enumerate() {
            let mut tuple = Vec::with_capacity(args.len());
            for &a in &args {
                if a >= m.width {
                    return Err(GamError::VariableOutOfRange(a));
                }
                tuple.push(s[a as usize]);
            }
            if tuples.contains(&tuple) {
                set.insert(p as u32);
            }
        }
        ev.set(atom_generator(&relation, &args), set);
    }
    Ok((unit, ev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_formula, parse_term};
    use crate::term::formula_to_term;
    use crate::unit::evaluate;

    #[test]
    fn unit_counts() {
        assert_eq!(enumerate_units(1, 2).unwrap().count(), 1);
        assert_eq!(enumerate_units(2, 2).unwrap().count(), 16);
    }

    #[test]
    fn streams_are_deterministic() {
        let a: Vec<Vec<Vec<u32>>> = enumerate_units(2, 2)
            .unwrap()
            .map(|u| u.points().map(|(_, c)| c.to_vec()).collect())
            .collect();
        let b: Vec<Vec<Vec<u32>>> = enumerate_units(2, 2)
            .unwrap()
            .map(|u| u.points().map(|(_, c)| c.to_vec()).collect())
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(enumerate_units(5, 2).is_err());
        assert!(enumerate_units(0, 2).is_err());
        assert!(enumerate_units(2, 1).is_err());
    }

    #[test]
    fn every_enumerated_unit_passes_the_axioms() {
        for unit in enumerate_units(2, 2).unwrap() {
            let report = check_axioms(&unit, &AxiomCheckOptions::default());
            assert!(report.passed());
            assert!(check_closure_facts(&unit, &AxiomCheckOptions::default()).passed());
        }
    }

    #[test]
    fn mutated_operator_fails_increasing_axiom() {
        let unit = enumerate_units(2, 2).unwrap().nth(3).unwrap();
        let report = check_axioms_with_op(
            &unit,
            &|u, i, s| u.cylindrify(i, s).complement(),
            &AxiomCheckOptions::default(),
        );
        assert!(report
            .checks
            .iter()
            .any(|c| c.axiom == AXIOM_INCREASING && !c.failures.is_empty()));
    }

    #[test]
    fn oracle_finds_and_refutes() {
        let bounds = OracleBounds::default();
        let sat = oracle_sat(&parse_term("x").unwrap(), &bounds).unwrap();
        assert!(sat.model.is_some());
        // first model: singleton unit, ev(x) = V
        let (unit, ev) = sat.model.unwrap();
        assert_eq!(unit.len(), 1);
        assert_eq!(ev.get("x").unwrap().len(), 1);

        let unsat = oracle_sat(&parse_term("x * -x").unwrap(), &bounds).unwrap();
        assert!(unsat.model.is_none());
        assert!(unsat.exhaustive);
    }

    #[test]
    fn oracle_commutation_countermodel() {
        let t = parse_term("c0 c1 x * -c1 c0 x").unwrap();
        let out = oracle_sat(&t, &OracleBounds::default()).unwrap();
        let (unit, ev) = out.model.expect("within bounds");
        // Three points are necessary (a two-point unit forces the chain to
        // collapse); two base elements already suffice.
        assert_eq!(unit.len(), 3);
        assert_eq!(unit.base_size(), 2);
        let r = evaluate(&unit, &ev, &t).unwrap();
        assert!(!r.is_empty());
    }

    #[test]
    fn gam_atom_and_quantifier_clauses() {
        let mut interp = BTreeMap::new();
        interp.insert(
            "R".to_string(),
            [vec![0u32, 1u32]].into_iter().collect::<BTreeSet<_>>(),
        );
        let m = GamModel::new(
            2,
            vec!["a".into(), "b".into()],
            interp,
            vec![vec![0, 1], vec![1, 1]],
        )
        .unwrap();
        let atom = parse_formula("R(v0,v1)").unwrap();
        assert!(gam_eval(&m, &atom, &[0, 1]).unwrap());
        assert!(!gam_eval(&m, &atom, &[1, 1]).unwrap());
        // exists v0: (1,1) ~_0 (0,1) which satisfies R
        let ex = parse_formula("exists v0. R(v0,v1)").unwrap();
        assert!(gam_eval(&m, &ex, &[1, 1]).unwrap());
        // s must be admissible
        assert!(matches!(
            gam_eval(&m, &atom, &[0, 0]),
            Err(GamError::AssignmentNotAdmissible)
        ));
    }

    #[test]
    fn gam_singleton_quantifier_collapses() {
        let mut interp = BTreeMap::new();
        interp.insert(
            "R".to_string(),
            [vec![0u32]].into_iter().collect::<BTreeSet<_>>(),
        );
        let m = GamModel::new(2, vec!["a".into()], interp, vec![vec![0, 0]]).unwrap();
        let f = parse_formula("exists v0. R(v0)").unwrap();
        let g = parse_formula("R(v0)").unwrap();
        assert_eq!(
            gam_eval(&m, &f, &[0, 0]).unwrap(),
            gam_eval(&m, &g, &[0, 0]).unwrap()
        );
    }

    #[test]
    fn translation_coherence_on_a_hand_model() {
        let mut interp = BTreeMap::new();
        interp.insert(
            "R".to_string(),
            [vec![0u32, 1u32], vec![1, 0]].into_iter().collect::<BTreeSet<_>>(),
        );
        let m = GamModel::new(
            2,
            vec!["a".into(), "b".into()],
            interp,
            vec![vec![0, 0], vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let f = parse_formula("exists v0. R(v0,v1) -> R(v1,v0)").unwrap();
        let (unit, ev) = gam_to_unit(&m, &f).unwrap();
        let t = formula_to_term(&f);
        let sem = evaluate(&unit, &ev, &t).unwrap();
        for (p, s) in m.assignments().iter().enumerate() {
            assert_eq!(gam_eval(&m, &f, s).unwrap(), sem.contains(p as u32));
        }
    }
}
