//! The decision procedure and the certificate-producing free-algebra
//! operations.
//!
//! Satisfiability is decided by a label search over the complement-closed
//! subterm set of the input.  A label assigns a sign to every reachable
//! subterm; the search keeps labels partial, propagates Boolean and
//! reflexivity constraints, and branches only where a determined value
//! lacks support.  A positively labeled `c_i`-subterm is discharged by an
//! `i`-clique child that shares the determined `c_i`-literals of its parent
//! and is never re-expanded in its creation direction; nesting depth bounds
//! the recursion, which is what the normal-form theory licenses.  When a
//! direction resists the shared-literal negotiation, the engine falls back
//! to enumerating complete sign vectors for that direction's
//! `c_i`-literals, which restores exhaustiveness whenever the direction has
//! few of them (always true at cross-checked scale).
//!
//! A successful search assembles a finite unit with fresh coordinates, one
//! per clique child, and the verdict is returned only after the root
//! re-checks under the plain evaluator, so `Sat`/`Invalid` answers are
//! self-certifying.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::forms::{FormContext, FormError};
use crate::term::{Term, TermNode};
use crate::unit::{evaluate, Evaluation, PointId, PointSet, Unit};
use crate::witness::{
    bridge, build_witness, extend_plus, point_form, zigzag, PointClass, WitnessError,
    WitnessModel,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("variable '{0}' is outside the context")]
    UnknownVariable(String),
    #[error("the input is unsatisfiable")]
    UnsatInput,
    #[error("the input has no variables; the splitting argument needs a free generator")]
    ClosedTerm,
    #[error("'{0}' already occurs in the term; pick a fresh variable")]
    VariableNotFresh(String),
    #[error("internal error: a certificate failed to re-check ({0})")]
    CertificateFailure(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
}

/// Search statistics attached to verdicts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Fully supported labels examined during the search.
    pub labels_explored: u64,
    pub points: usize,
    pub base_size: usize,
}

/// One explored label in an unsatisfiability trace.
#[derive(Debug, Clone)]
pub struct TraceEntry {
    pub banned_direction: Option<u32>,
    pub depth: u32,
    /// Determined subterm signs, as (subterm text, sign) pairs.
    pub literals: Vec<(String, bool)>,
}

/// Replayable record of an exhausted label search.
#[derive(Debug, Clone, Default)]
pub struct UnsatTrace {
    pub entries: Vec<TraceEntry>,
    pub truncated: bool,
}

/// Decision outcome with a machine-checkable certificate.
#[derive(Debug, Clone)]
pub enum Verdict {
    Sat { model: WitnessModel, root: PointId, stats: SearchStats },
    Unsat { trace: UnsatTrace, stats: SearchStats },
    Valid { stats: SearchStats },
    Invalid { model: WitnessModel, point: PointId, side: InvalidSide, stats: SearchStats },
}

/// Which inclusion a countermodel refutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvalidSide {
    LeftNotBelowRight,
    RightNotBelowLeft,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat { .. })
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat { .. })
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, Verdict::Invalid { .. })
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            Verdict::Sat { stats, .. }
            | Verdict::Unsat { stats, .. }
            | Verdict::Valid { stats }
            | Verdict::Invalid { stats, .. } => stats,
        }
    }
}

/// Engine knobs; the defaults match the documented behavior.
#[derive(Debug, Clone)]
pub struct DecideOptions {
    /// Complete per-direction sign enumeration is attempted while a
    /// direction has at most this many undetermined `c_i`-literals.
    pub tier2_max_bits: u32,
    /// Cap on recorded trace entries.
    pub trace_cap: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { tier2_max_bits: 12, trace_cap: 512 }
    }
}

// ---- term graph ----

const VAL_F: u8 = 0;
const VAL_T: u8 = 1;
const VAL_U: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum GKind {
    Zero,
    One,
    Var(u32),
    Not(u32),
    Meet(u32, u32),
    Join(u32, u32),
    Cyl(u32, u32),
}

struct Graph {
    kinds: Vec<GKind>,
    parents: Vec<Vec<u32>>,
    cyl_by_dir: Vec<Vec<u32>>,
    vars: Vec<String>,
    n: u32,
}

impl Graph {
    /// Hash-consed graph of the given terms; returns the node id of each.
    fn build(roots: &[&Term], n: u32) -> (Graph, Vec<u32>) {
        let mut g = Graph {
            kinds: Vec::new(),
            parents: Vec::new(),
            cyl_by_dir: vec![Vec::new(); n as usize],
            vars: Vec::new(),
            n,
        };
        let mut structural: BTreeMap<GKind, u32> = BTreeMap::new();
        let mut by_ptr: BTreeMap<usize, u32> = BTreeMap::new();
        let ids = roots.iter().map(|t| g.add(t, &mut structural, &mut by_ptr)).collect();
        (g, ids)
    }

    fn add(
        &mut self,
        t: &Term,
        structural: &mut BTreeMap<GKind, u32>,
        by_ptr: &mut BTreeMap<usize, u32>,
    ) -> u32 {
        let ptr = t.node() as *const TermNode as usize;
        if let Some(&id) = by_ptr.get(&ptr) {
            return id;
        }
        let kind = match t.node() {
            TermNode::Zero => GKind::Zero,
            TermNode::One => GKind::One,
            TermNode::Var(x) => {
                let v = match self.vars.iter().position(|w| w == x) {
                    Some(i) => i as u32,
                    None => {
                        self.vars.push(x.clone());
                        (self.vars.len() - 1) as u32
                    }
                };
                GKind::Var(v)
            }
            TermNode::Not(a) => GKind::Not(self.add(a, structural, by_ptr)),
            TermNode::Meet(a, b) => {
                let x = self.add(a, structural, by_ptr);
                let y = self.add(b, structural, by_ptr);
                GKind::Meet(x, y)
            }
            TermNode::Join(a, b) => {
                let x = self.add(a, structural, by_ptr);
                let y = self.add(b, structural, by_ptr);
                GKind::Join(x, y)
            }
            TermNode::Cyl(i, a) => GKind::Cyl(*i, self.add(a, structural, by_ptr)),
        };
        let id = match structural.get(&kind) {
            Some(&id) => id,
            None => {
                let id = self.kinds.len() as u32;
                self.kinds.push(kind);
                self.parents.push(Vec::new());
                match kind {
                    GKind::Not(a) | GKind::Cyl(_, a) => self.parents[a as usize].push(id),
                    GKind::Meet(a, b) | GKind::Join(a, b) => {
                        self.parents[a as usize].push(id);
                        if a != b {
                            self.parents[b as usize].push(id);
                        }
                    }
                    _ => {}
                }
                if let GKind::Cyl(i, _) = kind {
                    if (i as usize) < self.cyl_by_dir.len() {
                        self.cyl_by_dir[i as usize].push(id);
                    }
                }
                structural.insert(kind, id);
                id
            }
        };
        by_ptr.insert(ptr, id);
        id
    }

    fn len(&self) -> usize {
        self.kinds.len()
    }

    /// Short rendering of a node for traces.
    fn render(&self, u: u32, budget: &mut usize, out: &mut String) {
        if *budget == 0 {
            return;
        }
        *budget -= 1;
        match self.kinds[u as usize] {
            GKind::Zero => out.push('0'),
            GKind::One => out.push('1'),
            GKind::Var(v) => out.push_str(&self.vars[v as usize]),
            GKind::Not(a) => {
                out.push('-');
                self.render(a, budget, out);
            }
            GKind::Meet(a, b) => {
                out.push('(');
                self.render(a, budget, out);
                out.push_str(" * ");
                self.render(b, budget, out);
                out.push(')');
            }
            GKind::Join(a, b) => {
                out.push('(');
                self.render(a, budget, out);
                out.push_str(" + ");
                self.render(b, budget, out);
                out.push(')');
            }
            GKind::Cyl(i, a) => {
                out.push_str(&format!("c{i} "));
                self.render(a, budget, out);
            }
        }
        if *budget == 0 {
            out.push('…');
        }
    }

    fn render_node(&self, u: u32) -> String {
        let mut s = String::new();
        let mut budget = 24usize;
        self.render(u, &mut budget, &mut s);
        s
    }
}

// ---- label state and propagation ----

struct Conflict;

fn set_val(
    a: &mut [u8],
    queue: &mut Vec<u32>,
    node: u32,
    val: u8,
) -> Result<(), Conflict> {
    match a[node as usize] {
        VAL_U => {
            a[node as usize] = val;
            queue.push(node);
            Ok(())
        }
        cur if cur == val => Ok(()),
        _ => Err(Conflict),
    }
}

fn examine(g: &Graph, a: &mut [u8], queue: &mut Vec<u32>, u: u32) -> Result<(), Conflict> {
    let val = a[u as usize];
    match g.kinds[u as usize] {
        GKind::Zero => set_val(a, queue, u, VAL_F),
        GKind::One => set_val(a, queue, u, VAL_T),
        GKind::Var(_) => Ok(()),
        GKind::Not(x) => {
            let xv = a[x as usize];
            if xv != VAL_U {
                set_val(a, queue, u, 1 - xv)?;
            }
            if val != VAL_U {
                set_val(a, queue, x, 1 - val)?;
            }
            Ok(())
        }
        GKind::Meet(x, y) => {
            let (xv, yv) = (a[x as usize], a[y as usize]);
            if xv == VAL_T && yv == VAL_T {
                set_val(a, queue, u, VAL_T)?;
            }
            if xv == VAL_F || yv == VAL_F {
                set_val(a, queue, u, VAL_F)?;
            }
            if val == VAL_T {
                set_val(a, queue, x, VAL_T)?;
                set_val(a, queue, y, VAL_T)?;
            }
            if val == VAL_F {
                if xv == VAL_T {
                    set_val(a, queue, y, VAL_F)?;
                }
                if yv == VAL_T {
                    set_val(a, queue, x, VAL_F)?;
                }
            }
            Ok(())
        }
        GKind::Join(x, y) => {
            let (xv, yv) = (a[x as usize], a[y as usize]);
            if xv == VAL_F && yv == VAL_F {
                set_val(a, queue, u, VAL_F)?;
            }
            if xv == VAL_T || yv == VAL_T {
                set_val(a, queue, u, VAL_T)?;
            }
            if val == VAL_F {
                set_val(a, queue, x, VAL_F)?;
                set_val(a, queue, y, VAL_F)?;
            }
            if val == VAL_T {
                if xv == VAL_F {
                    set_val(a, queue, y, VAL_T)?;
                }
                if yv == VAL_F {
                    set_val(a, queue, x, VAL_T)?;
                }
            }
            Ok(())
        }
        GKind::Cyl(_, x) => {
            // reflexivity: x <= c_i x
            if a[x as usize] == VAL_T {
                set_val(a, queue, u, VAL_T)?;
            }
            if val == VAL_F {
                set_val(a, queue, x, VAL_F)?;
            }
            // normality: the operand 0 is empty everywhere, so c_i 0 = 0
            if matches!(g.kinds[x as usize], GKind::Zero) {
                set_val(a, queue, u, VAL_F)?;
            }
            Ok(())
        }
    }
}

fn propagate(g: &Graph, a: &mut [u8], queue: &mut Vec<u32>) -> Result<(), Conflict> {
    while let Some(u) = queue.pop() {
        examine(g, a, queue, u)?;
        let parents = g.parents[u as usize].clone();
        for p in parents {
            examine(g, a, queue, p)?;
        }
    }
    Ok(())
}

/// A determined composite whose value is not yet justified by its children.
fn find_unsupported(g: &Graph, a: &[u8]) -> Option<(u32, u32, u32, bool)> {
    for (u, kind) in g.kinds.iter().enumerate() {
        match *kind {
            GKind::Meet(x, y)
                if a[u] == VAL_F && a[x as usize] == VAL_U && a[y as usize] == VAL_U =>
            {
                // branch: x = F, or x = T (then y = F by propagation)
                return Some((u as u32, x, y, false));
            }
            GKind::Join(x, y)
                if a[u] == VAL_T && a[x as usize] == VAL_U && a[y as usize] == VAL_U =>
            {
                return Some((u as u32, x, y, true));
            }
            _ => {}
        }
    }
    None
}

// ---- solver ----

struct Tree {
    assignment: Vec<u8>,
    children: Vec<(u32, Vec<Tree>)>,
}

/// Raw trace row: banned direction, depth, determined (node, sign) pairs.
type RawTraceEntry = (Option<u32>, u32, Vec<(u32, bool)>);

struct Solver<'g> {
    g: &'g Graph,
    opts: DecideOptions,
    labels_explored: u64,
    trace: Vec<RawTraceEntry>,
    trace_truncated: bool,
}

impl<'g> Solver<'g> {
    fn new(g: &'g Graph, opts: DecideOptions) -> Solver<'g> {
        Solver { g, opts, labels_explored: 0, trace: Vec::new(), trace_truncated: false }
    }

    fn record_trace(&mut self, banned: Option<u32>, depth: u32, a: &[u8]) {
        if self.trace.len() >= self.opts.trace_cap {
            self.trace_truncated = true;
            return;
        }
        let literals: Vec<(u32, bool)> = a
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != VAL_U)
            .map(|(u, &v)| (u as u32, v == VAL_T))
            .collect();
        self.trace.push((banned, depth, literals));
    }

    /// Solve from a seeded assignment: propagate, complete Boolean support,
    /// then discharge every unbanned direction.
    fn solve(
        &mut self,
        mut a: Vec<u8>,
        seeds: &[(u32, u8)],
        banned: Option<u32>,
        depth: u32,
    ) -> Option<Tree> {
        let mut queue: Vec<u32> = (0..self.g.len() as u32).collect();
        for &(node, val) in seeds {
            if set_val(&mut a, &mut queue, node, val).is_err() {
                return None;
            }
        }
        if propagate(self.g, &mut a, &mut queue).is_err() {
            return None;
        }
        self.bool_dfs(a, banned, depth)
    }

    fn bool_dfs(&mut self, a: Vec<u8>, banned: Option<u32>, depth: u32) -> Option<Tree> {
        if let Some((_, x, y, join)) = find_unsupported(self.g, &a) {
            // Two-way cover: first child x takes the "deciding" sign, else
            // the other operand decides.
            let first: &[(u32, u8)] =
                &[(x, if join { VAL_T } else { VAL_F })];
            let second: &[(u32, u8)] = &[
                (x, if join { VAL_F } else { VAL_T }),
                (y, if join { VAL_T } else { VAL_F }),
            ];
            for seeds in [first, second] {
                let mut a2 = a.clone();
                let mut queue = Vec::new();
                let mut ok = true;
                for &(node, val) in seeds {
                    if set_val(&mut a2, &mut queue, node, val).is_err() {
                        ok = false;
                        break;
                    }
                }
                if ok && propagate(self.g, &mut a2, &mut queue).is_ok() {
                    if let Some(t) = self.bool_dfs(a2, banned, depth) {
                        return Some(t);
                    }
                }
            }
            return None;
        }
        self.labels_explored += 1;
        self.record_trace(banned, depth, &a);
        self.expand(a, banned, depth)
    }

    fn expand(&mut self, a: Vec<u8>, banned: Option<u32>, depth: u32) -> Option<Tree> {
        let mut children: Vec<(u32, Vec<Tree>)> = Vec::new();
        for i in 0..self.g.n {
            if banned == Some(i) {
                continue;
            }
            match self.clique_tier1(&a, i, depth) {
                Tier1::Done(trees) => children.push((i, trees)),
                Tier1::NeedBits(bits) => {
                    // Clique children determined additional shared literals;
                    // commit them to this node and restart it (a
                    // `c_i`-literal is constant across an i-clique).  The
                    // committed values came from one child branch, so when
                    // the restart fails, fall back to the complete
                    // per-direction enumeration on the original assignment.
                    if let Some(t) = self.solve(a.clone(), &bits, banned, depth) {
                        return Some(t);
                    }
                    return self.tier2(a, i, banned, depth);
                }
                Tier1::Fail => {
                    return self.tier2(a, i, banned, depth);
                }
            }
        }
        Some(Tree { assignment: a, children })
    }

    /// Negotiated clique expansion: children inherit the parent's
    /// determined direction-`i` literals; any new ones they derive are
    /// reported back for a restart.
    fn clique_tier1(&mut self, a: &[u8], i: u32, depth: u32) -> Tier1 {
        let cyls = &self.g.cyl_by_dir[i as usize];
        let shared: Vec<(u32, u8)> = cyls
            .iter()
            .filter(|&&cn| a[cn as usize] != VAL_U)
            .map(|&cn| (cn, a[cn as usize]))
            .collect();
        let mut obligations: Vec<u32> = Vec::new();
        for &cn in cyls {
            if a[cn as usize] == VAL_T {
                if let GKind::Cyl(_, x) = self.g.kinds[cn as usize] {
                    if a[x as usize] != VAL_T && !obligations.contains(&x) {
                        obligations.push(x);
                    }
                }
            }
        }
        if obligations.is_empty() {
            return Tier1::Done(Vec::new());
        }
        if depth == 0 {
            return Tier1::Fail;
        }
        let mut trees: Vec<Tree> = Vec::new();
        let mut new_bits: Vec<(u32, u8)> = Vec::new();
        for x in obligations {
            if trees.iter().any(|t| t.assignment[x as usize] == VAL_T) {
                continue;
            }
            let mut seeds = shared.clone();
            seeds.push((x, VAL_T));
            let fresh = vec![VAL_U; self.g.len()];
            match self.solve(fresh, &seeds, Some(i), depth - 1) {
                None => return Tier1::Fail,
                Some(tree) => {
                    for &cn in cyls {
                        let cv = tree.assignment[cn as usize];
                        if cv != VAL_U
                            && a[cn as usize] == VAL_U
                            && !new_bits.iter().any(|&(n, _)| n == cn)
                        {
                            new_bits.push((cn, cv));
                        }
                    }
                    trees.push(tree);
                }
            }
        }
        if !new_bits.is_empty() {
            return Tier1::NeedBits(new_bits);
        }
        Tier1::Done(trees)
    }

    /// Complete fallback: enumerate total sign vectors for the direction's
    /// undetermined `c_i`-literals.  Exhaustive whenever the direction has
    /// at most `tier2_max_bits` of them.
    fn tier2(&mut self, a: Vec<u8>, i: u32, banned: Option<u32>, depth: u32) -> Option<Tree> {
        let unknown: Vec<u32> = self.g.cyl_by_dir[i as usize]
            .iter()
            .copied()
            .filter(|&cn| a[cn as usize] == VAL_U)
            .collect();
        if unknown.is_empty() || unknown.len() as u32 > self.opts.tier2_max_bits {
            return None;
        }
        for mask in 0u64..(1u64 << unknown.len()) {
            let seeds: Vec<(u32, u8)> = unknown
                .iter()
                .enumerate()
                .map(|(j, &cn)| (cn, if mask & (1 << j) != 0 { VAL_T } else { VAL_F }))
                .collect();
            if let Some(t) = self.solve(a.clone(), &seeds, banned, depth) {
                return Some(t);
            }
        }
        None
    }
}

enum Tier1 {
    Done(Vec<Tree>),
    NeedBits(Vec<(u32, u8)>),
    Fail,
}

// ---- assembly ----

fn assemble(
    ctx: &mut FormContext,
    g: &Graph,
    tree: &Tree,
    n: u32,
) -> Result<WitnessModel, DecideError> {
    let mut base: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut coords: Vec<Vec<u32>> = vec![(0..n).collect()];
    let mut levels: Vec<u32> = vec![0];
    let mut classes: Vec<PointClass> = vec![PointClass::Root];
    let mut assignments: Vec<&Tree> = vec![tree];

    // breadth-first materialization keeps ids stable and readable
    let mut frontier: Vec<(u32, &Tree)> = vec![(0, tree)];
    let mut level = 0u32;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for (pid, node) in frontier {
            for (dir, kids) in &node.children {
                for (ord, kid) in kids.iter().enumerate() {
                    let fresh = base.len() as u32;
                    base.push(format!("u{level}_{dir}_{pid}_{ord}"));
                    let mut c = coords[pid as usize].clone();
                    c[*dir as usize] = fresh;
                    let id = coords.len() as u32;
                    coords.push(c);
                    levels.push(level);
                    classes.push(PointClass::Created(*dir));
                    assignments.push(kid);
                    next.push((id, kid));
                }
            }
        }
        frontier = next;
    }

    let unit = Unit::new(n, base, coords).map_err(WitnessError::from)?;
    let mut ev = Evaluation::new();
    let mut colors: Vec<u64> = vec![0; unit.len()];
    for (vi, name) in ctx.vars().iter().enumerate() {
        let mut set = PointSet::empty(unit.len());
        if let Some(node) = g
            .vars
            .iter()
            .position(|w| w == name)
            .and_then(|gv| g.kinds.iter().position(|k| *k == GKind::Var(gv as u32)))
        {
            for (p, t) in assignments.iter().enumerate() {
                if t.assignment[node] == VAL_T {
                    set.insert(p as PointId);
                    colors[p] |= 1 << vi;
                }
            }
        }
        ev.set(name.clone(), set);
    }
    let mut tags = Vec::with_capacity(unit.len());
    for &color in &colors {
        tags.push(ctx.intern_form_masked(color, None)?);
    }
    Ok(WitnessModel::from_parts(unit, levels, classes, tags, ev, 0))
}

// ---- public operations ----

fn check_context(ctx: &FormContext, t: &Term) -> Result<(), DecideError> {
    for v in t.vars() {
        if !ctx.vars().contains(&v) {
            return Err(DecideError::UnknownVariable(v));
        }
    }
    Ok(())
}

/// Decide satisfiability of a term over units of the context dimension.
/// `Sat` verdicts carry a witness model whose root has been re-checked
/// under [`evaluate`]; `Unsat` verdicts carry the exhausted label trace.
pub fn decide_sat(ctx: &mut FormContext, t: &Term) -> Result<Verdict, DecideError> {
    decide_sat_opts(ctx, t, &DecideOptions::default())
}

pub fn decide_sat_opts(
    ctx: &mut FormContext,
    t: &Term,
    opts: &DecideOptions,
) -> Result<Verdict, DecideError> {
    check_context(ctx, t)?;
    let n = ctx.dim().max(t.effective_dim());
    let (g, roots) = Graph::build(&[t], n);
    let root_node = roots[0];
    let mut solver = Solver::new(&g, opts.clone());
    let seeds = [(root_node, VAL_T)];
    let fresh = vec![VAL_U; g.len()];
    match solver.solve(fresh, &seeds, None, t.depth()) {
        Some(tree) => {
            let model = assemble(ctx, &g, &tree, n)?;
            let sem = evaluate(model.unit(), model.ev(), t)
                .map_err(|e| DecideError::CertificateFailure(e.to_string()))?;
            if !sem.contains(model.root()) {
                return Err(DecideError::CertificateFailure(
                    "assembled witness does not satisfy the input at its root".to_string(),
                ));
            }
            let stats = SearchStats {
                labels_explored: solver.labels_explored,
                points: model.len(),
                base_size: model.unit().base_size(),
            };
            Ok(Verdict::Sat { root: model.root(), model, stats })
        }
        None => {
            let entries = solver
                .trace
                .iter()
                .map(|(banned, depth, lits)| TraceEntry {
                    banned_direction: *banned,
                    depth: *depth,
                    literals: lits
                        .iter()
                        .map(|&(u, sgn)| (g.render_node(u), sgn))
                        .collect(),
                })
                .collect();
            Ok(Verdict::Unsat {
                trace: UnsatTrace { entries, truncated: solver.trace_truncated },
                stats: SearchStats {
                    labels_explored: solver.labels_explored,
                    points: 0,
                    base_size: 0,
                },
            })
        }
    }
}

/// Decide the equation `s = t`: valid iff both difference terms are
/// unsatisfiable; otherwise the countermodel separates the sides at its
/// root.
pub fn decide_eq(ctx: &mut FormContext, s: &Term, t: &Term) -> Result<Verdict, DecideError> {
    let left_minus_right = Term::meet(s, &Term::not(t));
    let mut labels = 0;
    match decide_sat(ctx, &left_minus_right)? {
        Verdict::Sat { model, root, stats } => {
            return Ok(Verdict::Invalid {
                model,
                point: root,
                side: InvalidSide::LeftNotBelowRight,
                stats,
            })
        }
        Verdict::Unsat { stats, .. } => labels += stats.labels_explored,
        _ => unreachable!("decide_sat yields Sat/Unsat"),
    }
    let right_minus_left = Term::meet(t, &Term::not(s));
    match decide_sat(ctx, &right_minus_left)? {
        Verdict::Sat { model, root, stats } => Ok(Verdict::Invalid {
            model,
            point: root,
            side: InvalidSide::RightNotBelowLeft,
            stats,
        }),
        Verdict::Unsat { stats, .. } => Ok(Verdict::Valid {
            stats: SearchStats {
                labels_explored: labels + stats.labels_explored,
                points: 0,
                base_size: 0,
            },
        }),
        _ => unreachable!("decide_sat yields Sat/Unsat"),
    }
}

/// The split of a satisfiable term with variables into two disjoint
/// satisfiable refinements below it — the atomlessness step.
///
/// The witness root's form at the smallest even degree at or above the
/// term's depth is realized, zig-zagged to a degree-0 point, and extended
/// by one fresh point carrying the least other degree-0 form; the two
/// degree-(k+1) root forms of the original and extended models are the
/// returned pair.
pub fn split(ctx: &mut FormContext, t: &Term) -> Result<(Term, Term), DecideError> {
    if t.vars().is_empty() {
        return Err(DecideError::ClosedTerm);
    }
    let w0 = match decide_sat(ctx, t)? {
        Verdict::Sat { model, .. } => model,
        _ => return Err(DecideError::UnsatInput),
    };
    let k = t.depth() + t.depth() % 2;
    let tau = point_form(ctx, w0.unit(), w0.ev(), w0.root(), k);
    if !ctx.is_consistent(tau) {
        return Err(DecideError::CertificateFailure(
            "root form of a checked witness is inconsistent".to_string(),
        ));
    }
    if !ctx.form_entails(tau, t)? {
        return Err(DecideError::CertificateFailure(
            "root form does not entail the input".to_string(),
        ));
    }

    let w = build_witness(ctx, tau)?;
    let zz = zigzag(ctx, &w)?;
    let end_tag = w.tag(zz[0]);
    // least degree-0 form different from the zig-zag end's tag
    let mut sigma0 = None;
    for mask in 0..(1u64 << ctx.vars().len()) {
        let f = ctx.intern_form_masked(mask, None)?;
        if f != end_tag {
            sigma0 = Some(f);
            break;
        }
    }
    let sigma0 = sigma0.expect("a nonempty variable set has at least two degree-0 forms");
    let wp = extend_plus(ctx, &w, sigma0)?;

    let left_form = point_form(ctx, w.unit(), w.ev(), w.root(), k + 1);
    let right_form = point_form(ctx, wp.unit(), wp.ev(), wp.root(), k + 1);
    if left_form == right_form {
        return Err(DecideError::CertificateFailure(
            "extension did not separate the root forms".to_string(),
        ));
    }
    debug_assert_eq!(ctx.projection(left_form, k)?, tau);
    debug_assert_eq!(ctx.projection(right_form, k)?, tau);
    let left = ctx.form_to_term(left_form)?;
    let right = ctx.form_to_term(right_form)?;
    Ok((left, right))
}

/// `(t*y, t*-y)` for a fresh variable `y`: both satisfiable, disjoint by
/// construction.
pub fn fresh_split(
    ctx: &mut FormContext,
    t: &Term,
    y: &str,
) -> Result<(Term, Term), DecideError> {
    if t.vars().contains(y) {
        return Err(DecideError::VariableNotFresh(y.to_string()));
    }
    if !decide_sat(ctx, t)?.is_sat() {
        return Err(DecideError::UnsatInput);
    }
    let yv = Term::var(y);
    Ok((Term::meet(t, &yv), Term::meet(t, &Term::not(&yv))))
}

/// Outcome of the zero-dimensionality refutation.
#[derive(Debug, Clone)]
pub enum ZeroDimOutcome {
    /// The term is 0 or 1, the only zero-dimensional elements.
    ZeroDimensional(ZeroDimReason),
    /// A bridged model, an index word, and a point satisfying
    /// `-t * c_{i_0} ... c_{i_{l-1}} t`.
    Refuted { indices: Vec<u32>, model: Box<WitnessModel>, point: PointId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroDimReason {
    IsZero,
    IsOne,
}

/// For a term strictly between 0 and 1, exhibit an index word along which
/// cylindrifications move `-t` into `t`: the certificate that `t` is not
/// zero-dimensional.  The word is found breadth-first over words of length
/// at most `2k + n` on the bridged double model and re-checks by
/// evaluation.
pub fn zero_dim_witness(
    ctx: &mut FormContext,
    t: &Term,
) -> Result<ZeroDimOutcome, DecideError> {
    let w_t = match decide_sat(ctx, t)? {
        Verdict::Sat { model, .. } => model,
        _ => return Ok(ZeroDimOutcome::ZeroDimensional(ZeroDimReason::IsZero)),
    };
    let not_t = Term::not(t);
    let w_not = match decide_sat(ctx, &not_t)? {
        Verdict::Sat { model, .. } => model,
        _ => return Ok(ZeroDimOutcome::ZeroDimensional(ZeroDimReason::IsOne)),
    };

    let k = t.depth() + t.depth() % 2;
    let tau = point_form(ctx, w_t.unit(), w_t.ev(), w_t.root(), k);
    let sigma = point_form(ctx, w_not.unit(), w_not.ev(), w_not.root(), k);
    let w_tau = build_witness(ctx, tau)?;
    let w_sigma = build_witness(ctx, sigma)?;
    let bridged = bridge(ctx, &w_tau, &w_sigma)?;
    let point = bridged.co_root().expect("bridge sets the co-root");

    let n = ctx.dim().max(t.effective_dim());
    let max_len = 2 * k + n;
    let mut words: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..=max_len {
        let mut next = Vec::new();
        for word in &words {
            let mut chained = t.clone();
            for &i in word.iter().rev() {
                chained = Term::cyl(i, &chained);
            }
            let candidate = Term::meet(&not_t, &chained);
            let sem = evaluate(bridged.unit(), bridged.ev(), &candidate)
                .map_err(|e| DecideError::CertificateFailure(e.to_string()))?;
            if sem.contains(point) {
                return Ok(ZeroDimOutcome::Refuted {
                    indices: word.clone(),
                    model: Box::new(bridged),
                    point,
                });
            }
            for i in 0..n {
                let mut w2 = word.clone();
                w2.push(i);
                next.push(w2);
            }
        }
        words = next;
    }
    Err(DecideError::CertificateFailure(format!(
        "no index word of length <= {max_len} connects the bridged components"
    )))
}

/// The dimension set: directions in which cylindrification changes the
/// term.  Indices at or beyond the effective dimension never qualify.
pub fn dimension_set(ctx: &mut FormContext, t: &Term) -> Result<BTreeSet<u32>, DecideError> {
    let mut out = BTreeSet::new();
    for i in 0..t.effective_dim() {
        let ci = Term::cyl(i, t);
        if decide_eq(ctx, &ci, t)?.is_invalid() {
            out.insert(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_term;

    fn ctx_for(terms: &[&Term]) -> FormContext {
        FormContext::for_terms(terms, 2).unwrap()
    }

    fn sat(input: &str) -> bool {
        let t = parse_term(input).unwrap();
        let mut ctx = ctx_for(&[&t]);
        decide_sat(&mut ctx, &t).unwrap().is_sat()
    }

    #[test]
    fn basic_verdicts() {
        assert!(sat("x"));
        assert!(sat("1"));
        assert!(!sat("0"));
        assert!(!sat("x * -x"));
        assert!(!sat("x * -c0 x"));
        assert!(sat("x * c0 -x"));
        assert!(sat("c0 c1 x * -c1 c0 x"));
        assert!(!sat("c0 (x * c0 y) * -(c0 x * c0 y)"));
        assert!(!sat("(c0 x * c0 y) * -c0 (x * c0 y)"));
    }

    #[test]
    fn sat_witness_is_singleton_for_a_variable() {
        let t = parse_term("x").unwrap();
        let mut ctx = ctx_for(&[&t]);
        match decide_sat(&mut ctx, &t).unwrap() {
            Verdict::Sat { model, root, .. } => {
                assert_eq!(model.len(), 1);
                assert!(model.ev().get("x").unwrap().contains(root));
            }
            other => panic!("expected Sat, got {other:?}"),
        }
    }

    #[test]
    fn commutation_countermodel_is_three_points() {
        let s = parse_term("c0 c1 x").unwrap();
        let t = parse_term("c1 c0 x").unwrap();
        let mut ctx = ctx_for(&[&s, &t]);
        match decide_eq(&mut ctx, &s, &t).unwrap() {
            Verdict::Invalid { model, point, .. } => {
                assert!(model.len() <= 3);
                // the countermodel separates the sides at the point
                let sl = evaluate(model.unit(), model.ev(), &s).unwrap();
                let tl = evaluate(model.unit(), model.ev(), &t).unwrap();
                assert_ne!(sl.contains(point), tl.contains(point));
            }
            other => panic!("expected Invalid, got {other:?}"),
        }
    }

    #[test]
    fn local_distribution_is_valid() {
        let s = parse_term("c0 (x * c0 y)").unwrap();
        let t = parse_term("c0 x * c0 y").unwrap();
        let mut ctx = ctx_for(&[&s, &t]);
        assert!(decide_eq(&mut ctx, &s, &t).unwrap().is_valid());
        assert!(decide_eq(&mut ctx, &s, &s).unwrap().is_valid());
    }

    #[test]
    fn unsat_trace_is_replayable() {
        let t = parse_term("x * -c0 x").unwrap();
        let mut ctx = ctx_for(&[&t]);
        match decide_sat(&mut ctx, &t).unwrap() {
            Verdict::Unsat { trace, stats } => {
                assert!(stats.labels_explored >= 1 || trace.entries.is_empty());
            }
            other => panic!("expected Unsat, got {other:?}"),
        }
    }

    #[test]
    fn split_on_a_variable_matches_the_trace() {
        let t = parse_term("x").unwrap();
        let mut ctx = ctx_for(&[&t]);
        let (a, b) = split(&mut ctx, &t).unwrap();
        assert!(decide_sat(&mut ctx, &a).unwrap().is_sat());
        assert!(decide_sat(&mut ctx, &b).unwrap().is_sat());
        assert!(decide_sat(&mut ctx, &Term::meet(&a, &b)).unwrap().is_unsat());
        assert!(decide_eq(&mut ctx, &Term::meet(&a, &t), &a).unwrap().is_valid());
        assert!(decide_eq(&mut ctx, &Term::meet(&b, &t), &b).unwrap().is_valid());
        // The halves differ exactly on the reachability of -x in direction 0.
        let expect_a = parse_term("x * c0 x * -c0 -x * c1 x * -c1 -x").unwrap();
        let expect_b = parse_term("x * c0 x * c0 -x * c1 x * -c1 -x").unwrap();
        assert!(decide_eq(&mut ctx, &a, &expect_a).unwrap().is_valid());
        assert!(decide_eq(&mut ctx, &b, &expect_b).unwrap().is_valid());
    }

    #[test]
    fn split_rejects_closed_and_unsat_inputs() {
        let closed = parse_term("c0 1").unwrap();
        let mut ctx = ctx_for(&[&closed]);
        assert!(matches!(split(&mut ctx, &closed), Err(DecideError::ClosedTerm)));
        let bot = parse_term("x * -x").unwrap();
        let mut ctx = ctx_for(&[&bot]);
        assert!(matches!(split(&mut ctx, &bot), Err(DecideError::UnsatInput)));
    }

    #[test]
    fn fresh_split_behaves() {
        let t = parse_term("c0 x").unwrap();
        let mut ctx = FormContext::new(&["x", "y"], 2).unwrap();
        let (a, b) = fresh_split(&mut ctx, &t, "y").unwrap();
        assert!(decide_sat(&mut ctx, &a).unwrap().is_sat());
        assert!(decide_sat(&mut ctx, &b).unwrap().is_sat());
        assert!(decide_sat(&mut ctx, &Term::meet(&a, &b)).unwrap().is_unsat());

        assert!(matches!(
            fresh_split(&mut ctx, &t, "x"),
            Err(DecideError::VariableNotFresh(_))
        ));
        let bot = parse_term("x * -x").unwrap();
        assert!(matches!(
            fresh_split(&mut ctx, &bot, "y"),
            Err(DecideError::UnsatInput)
        ));
    }

    #[test]
    fn zero_dim_on_a_variable() {
        let t = parse_term("x").unwrap();
        let mut ctx = ctx_for(&[&t]);
        match zero_dim_witness(&mut ctx, &t).unwrap() {
            ZeroDimOutcome::Refuted { indices, model, point } => {
                // The breadth-first search returns the shortest valid word.
                // The bridge point is colored like the first component's
                // zig-zag end, so one step in direction 1 already reaches an
                // x-point; the two-step word through the far root is valid
                // too but longer.
                assert_eq!(indices, vec![1]);
                assert_eq!(model.len(), 3);
                let mut chained = t.clone();
                for &i in indices.iter().rev() {
                    chained = Term::cyl(i, &chained);
                }
                let cert = Term::meet(&Term::not(&t), &chained);
                let sem = evaluate(model.unit(), model.ev(), &cert).unwrap();
                assert!(sem.contains(point));
            }
            other => panic!("expected Refuted, got {other:?}"),
        }
    }

    #[test]
    fn zero_dim_constants_are_reported() {
        let one = parse_term("1").unwrap();
        let mut ctx = ctx_for(&[&one]);
        assert!(matches!(
            zero_dim_witness(&mut ctx, &one).unwrap(),
            ZeroDimOutcome::ZeroDimensional(ZeroDimReason::IsOne)
        ));
        let zero = parse_term("x * -x").unwrap();
        let mut ctx = ctx_for(&[&zero]);
        assert!(matches!(
            zero_dim_witness(&mut ctx, &zero).unwrap(),
            ZeroDimOutcome::ZeroDimensional(ZeroDimReason::IsZero)
        ));
    }

    #[test]
    fn dimension_sets() {
        let mut ctx = FormContext::new(&["x"], 2).unwrap();
        let zero = parse_term("x * -x").unwrap();
        let one = parse_term("x + -x").unwrap();
        assert!(dimension_set(&mut ctx, &zero).unwrap().is_empty());
        assert!(dimension_set(&mut ctx, &one).unwrap().is_empty());

        let x = parse_term("x").unwrap();
        assert_eq!(
            dimension_set(&mut ctx, &x).unwrap().into_iter().collect::<Vec<_>>(),
            vec![0, 1]
        );
        let c0x = parse_term("c0 x").unwrap();
        assert_eq!(
            dimension_set(&mut ctx, &c0x).unwrap().into_iter().collect::<Vec<_>>(),
            vec![1]
        );
    }

    #[test]
    fn renaming_invariance() {
        let t1 = parse_term("c0 (x * -y) + c1 y").unwrap();
        let t2 = parse_term("c0 (a * -b) + c1 b").unwrap();
        let mut ctx1 = ctx_for(&[&t1]);
        let mut ctx2 = ctx_for(&[&t2]);
        assert_eq!(
            decide_sat(&mut ctx1, &t1).unwrap().is_sat(),
            decide_sat(&mut ctx2, &t2).unwrap().is_sat()
        );
    }
}
