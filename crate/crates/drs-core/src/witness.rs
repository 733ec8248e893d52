//! Labeled witness models and the model surgeries.
//!
//! `build_witness` realizes a consistent normal form in a finite unit built
//! level by level: a single tagged root, then, per level, one fresh
//! `i`-neighbor for every form the current point asserts reachable in
//! direction `i`.  Children are never re-expanded in their creation
//! direction, which terminates the construction at the tag degree.  The
//! evaluation sends a variable to the points whose tag is colored by it.
//!
//! On top of that sit the surgeries used by the free-algebra results: the
//! zig-zag descent to a degree-0 point, the one-point extension that flips
//! one reachability literal at the zig-zag end, the bridged double model
//! connecting two witnesses through a chain of mixed-coordinate points, and
//! the disjoint-union product unit with its isomorphism checker.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::forms::{FormContext, FormError, FormId};
use crate::unit::{Evaluation, PointId, PointSet, Unit, UnitError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("the form is inconsistent; it has no witness model")]
    InconsistentForm,
    #[error("the root tag degree {0} is odd; the zig-zag needs an even degree")]
    OddDegree(u32),
    #[error("the construction needs at least one variable")]
    EmptyVars,
    #[error("expected a degree-0 form")]
    NotDegreeZero,
    #[error("the chosen form equals the tag of the zig-zag end; pick a different one")]
    ForbiddenForm,
    #[error("dimensions differ: {0} vs {1}")]
    DimMismatch(u32, u32),
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Unit(#[from] UnitError),
}

/// How a point entered the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    /// The unique level-0 point.
    Root,
    /// Allocated as a fresh neighbor in the given direction.
    Created(u32),
    /// A mixed-coordinate point of a bridged double model.
    Bridge,
}

/// A finite unit with level structure, per-point normal-form tags, and the
/// color-induced evaluation.
#[derive(Debug, Clone)]
pub struct WitnessModel {
    unit: Unit,
    levels: Vec<u32>,
    classes: Vec<PointClass>,
    tags: Vec<FormId>,
    ev: Evaluation,
    root: PointId,
    /// For bridged double models: the root of the second component.
    co_root: Option<PointId>,
}

impl WitnessModel {
    pub fn unit(&self) -> &Unit {
        &self.unit
    }

    pub fn ev(&self) -> &Evaluation {
        &self.ev
    }

    pub fn root(&self) -> PointId {
        self.root
    }

    pub fn co_root(&self) -> Option<PointId> {
        self.co_root
    }

    pub fn tag(&self, p: PointId) -> FormId {
        self.tags[p as usize]
    }

    pub fn level(&self, p: PointId) -> u32 {
        self.levels[p as usize]
    }

    pub fn class(&self, p: PointId) -> PointClass {
        self.classes[p as usize]
    }

    pub fn len(&self) -> usize {
        self.unit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unit.is_empty()
    }

    /// Assemble a model from parts; used by the decision engine, which
    /// builds its own units.
    pub(crate) fn from_parts(
        unit: Unit,
        levels: Vec<u32>,
        classes: Vec<PointClass>,
        tags: Vec<FormId>,
        ev: Evaluation,
        root: PointId,
    ) -> WitnessModel {
        WitnessModel { unit, levels, classes, tags, ev, root, co_root: None }
    }
}

/// The evaluation induced by tags: a variable denotes the points whose tag
/// color contains it.
fn ev_from_tags(ctx: &FormContext, unit: &Unit, tags: &[FormId]) -> Evaluation {
    let mut ev = Evaluation::new();
    for (idx, name) in ctx.vars().iter().enumerate() {
        let mut set = PointSet::empty(unit.len());
        for (p, &tag) in tags.iter().enumerate() {
            if ctx.color_mask(tag) & (1 << idx) != 0 {
                set.insert(p as PointId);
            }
        }
        ev.set(name.clone(), set);
    }
    ev
}

/// The degree-`d` form satisfied by a point of an arbitrary evaluated unit:
/// color from the evaluation, successor sets from the clique structure one
/// degree down.
pub fn point_form(
    ctx: &mut FormContext,
    unit: &Unit,
    ev: &Evaluation,
    p: PointId,
    d: u32,
) -> FormId {
    let mut memo = BTreeMap::new();
    point_form_rec(ctx, unit, ev, p, d, &mut memo)
}

fn point_form_rec(
    ctx: &mut FormContext,
    unit: &Unit,
    ev: &Evaluation,
    p: PointId,
    d: u32,
    memo: &mut BTreeMap<(PointId, u32), FormId>,
) -> FormId {
    if let Some(&f) = memo.get(&(p, d)) {
        return f;
    }
    let mut color = 0u64;
    for (idx, name) in ctx.vars().iter().enumerate() {
        if ev.get(name).is_some_and(|s| s.contains(p)) {
            color |= 1 << idx;
        }
    }
    let f = if d == 0 {
        ctx.intern_form_masked(color, None).expect("degree-0 interning is total")
    } else {
        let n = ctx.dim();
        let mut subs = Vec::with_capacity(n as usize);
        for i in 0..n {
            let members: Vec<FormId> = unit
                .clique(i, p)
                .to_vec()
                .into_iter()
                .map(|q| point_form_rec(ctx, unit, ev, q, d - 1, memo))
                .collect();
            subs.push(members);
        }
        ctx.intern_form_masked(color, Some(subs))
            .expect("uniform-degree subs interning is total")
    };
    memo.insert((p, d), f);
    f
}

/// Build the witness model of a consistent form, level by level.
///
/// The base starts with one element per coordinate; each new point replaces
/// exactly one coordinate of its parent by a fresh base element named
/// `u<level>_<direction>_<parent>_<ordinal>`, so runs are byte-reproducible.
pub fn build_witness(ctx: &mut FormContext, tau: FormId) -> Result<WitnessModel, WitnessError> {
    if !ctx.is_consistent(tau) {
        return Err(WitnessError::InconsistentForm);
    }
    let n = ctx.dim();
    let k = ctx.degree(tau);

    let mut base: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut coords: Vec<Vec<u32>> = vec![(0..n).collect()];
    let mut levels: Vec<u32> = vec![0];
    let mut classes: Vec<PointClass> = vec![PointClass::Root];
    let mut tags: Vec<FormId> = vec![tau];

    let mut frontier: Vec<PointId> = vec![0];
    for level in 0..k {
        let mut next = Vec::new();
        for &p in &frontier {
            let tag = tags[p as usize];
            for i in 0..n {
                if let PointClass::Created(j) = classes[p as usize] {
                    if i == j {
                        continue;
                    }
                }
                let members: Vec<FormId> = ctx.sub(tag, i).to_vec();
                for (ord, sigma) in members.into_iter().enumerate() {
                    let fresh = base.len() as u32;
                    base.push(format!("u{}_{}_{}_{}", level + 1, i, p, ord));
                    let mut c = coords[p as usize].clone();
                    c[i as usize] = fresh;
                    let id = coords.len() as PointId;
                    coords.push(c);
                    levels.push(level + 1);
                    classes.push(PointClass::Created(i));
                    tags.push(sigma);
                    next.push(id);
                }
            }
        }
        frontier = next;
    }

    let unit = Unit::new(n, base, coords)?;
    let ev = ev_from_tags(ctx, &unit, &tags);
    Ok(WitnessModel { unit, levels, classes, tags, ev, root: 0, co_root: None })
}

/// The zig-zag sequence `v_0, ..., v_k` with `v_k` the root: tags descend
/// through the projections, and consecutive points alternate directions
/// (`v_h ~_0 v_{h+1}` for odd `h`, `v_h ~_1 v_{h+1}` for even `h`).
pub fn zigzag(ctx: &mut FormContext, model: &WitnessModel) -> Result<Vec<PointId>, WitnessError> {
    let tau = model.tag(model.root());
    let k = ctx.degree(tau);
    if !k.is_multiple_of(2) {
        return Err(WitnessError::OddDegree(k));
    }
    let mut seq = vec![model.root()];
    let mut cur = model.root();
    for h in (0..k).rev() {
        let dir = if h % 2 == 1 { 0 } else { 1 };
        let target = ctx.projection(tau, h)?;
        let level = k - h;
        let found = model
            .unit
            .clique(dir, cur)
            .iter()
            .copied()
            .find(|&q| {
                q != cur
                    && model.level(q) == level
                    && model.class(q) == PointClass::Created(dir)
                    && model.tag(q) == target
            })
            .ok_or_else(|| {
                WitnessError::Malformed(format!(
                    "no direction-{dir} child tagged with the degree-{h} projection"
                ))
            })?;
        seq.push(found);
        cur = found;
    }
    seq.reverse();
    Ok(seq)
}

/// Extend the model by one fresh point: the zig-zag end with coordinate 0
/// replaced by a brand-new base element, tagged by the given degree-0 form.
/// All old points still satisfy their tags; the zig-zag end's higher-degree
/// behavior changes, which is the whole point.
pub fn extend_plus(
    ctx: &mut FormContext,
    model: &WitnessModel,
    sigma0: FormId,
) -> Result<WitnessModel, WitnessError> {
    if ctx.vars().is_empty() {
        return Err(WitnessError::EmptyVars);
    }
    if ctx.degree(sigma0) != 0 {
        return Err(WitnessError::NotDegreeZero);
    }
    let zz = zigzag(ctx, model)?;
    let v0 = zz[0];
    let forbidden = ctx.projection(model.tag(v0), 0)?;
    if sigma0 == forbidden {
        return Err(WitnessError::ForbiddenForm);
    }

    let mut base: Vec<String> = model.unit.base().to_vec();
    let fresh = base.len() as u32;
    base.push("z".to_string());
    let mut coords: Vec<Vec<u32>> = model.unit.points().map(|(_, p)| p.to_vec()).collect();
    let mut c = model.unit.point(v0).to_vec();
    c[0] = fresh;
    coords.push(c);

    let mut levels = model.levels.clone();
    levels.push(model.level(v0) + 1);
    let mut classes = model.classes.clone();
    classes.push(PointClass::Created(0));
    let mut tags = model.tags.clone();
    tags.push(sigma0);

    let unit = Unit::new(model.unit.n(), base, coords)?;
    let ev = ev_from_tags(ctx, &unit, &tags);
    Ok(WitnessModel { unit, levels, classes, tags, ev, root: model.root, co_root: None })
}

/// Bridge two witness models: disjoint renamed bases, a chain of mixed
/// points joining the two zig-zag ends coordinate by coordinate.  In width
/// 2 the single bridge point is colored like the first model's zig-zag end;
/// in higher widths the bridge points carry no color.  Only the chain's
/// connectivity is used downstream.
pub fn bridge(
    ctx: &mut FormContext,
    w_tau: &WitnessModel,
    w_sigma: &WitnessModel,
) -> Result<WitnessModel, WitnessError> {
    let n = w_tau.unit.n();
    if n != w_sigma.unit.n() {
        return Err(WitnessError::DimMismatch(n, w_sigma.unit.n()));
    }
    for m in [w_tau, w_sigma] {
        let d = ctx.degree(m.tag(m.root()));
        if !d.is_multiple_of(2) {
            return Err(WitnessError::OddDegree(d));
        }
    }
    let zz_tau = zigzag(ctx, w_tau)?;
    let zz_sigma = zigzag(ctx, w_sigma)?;

    let mut base: Vec<String> = w_tau.unit.base().iter().map(|b| format!("t_{b}")).collect();
    let offset_base = base.len() as u32;
    base.extend(w_sigma.unit.base().iter().map(|b| format!("s_{b}")));

    let mut coords: Vec<Vec<u32>> = w_tau.unit.points().map(|(_, p)| p.to_vec()).collect();
    let offset_points = coords.len() as PointId;
    coords.extend(
        w_sigma
            .unit
            .points()
            .map(|(_, p)| p.iter().map(|&c| c + offset_base).collect::<Vec<u32>>()),
    );

    let mut levels: Vec<u32> = w_tau.levels.clone();
    levels.extend(w_sigma.levels.iter().copied());
    let mut classes = w_tau.classes.clone();
    classes.extend(w_sigma.classes.iter().copied());
    let mut tags = w_tau.tags.clone();
    tags.extend(w_sigma.tags.iter().copied());

    let v0_tau = zz_tau[0];
    let v0_sigma_coords: Vec<u32> = w_sigma
        .unit
        .point(zz_sigma[0])
        .iter()
        .map(|&c| c + offset_base)
        .collect();

    // w_1 replaces coordinate 0 of the first end; each later bridge point
    // replaces the next coordinate, so w_n coincides with the second end.
    let bridge_tag = if n == 2 {
        w_tau.tag(v0_tau)
    } else {
        ctx.intern_form_masked(0, None)?
    };
    let empty_tag = ctx.intern_form_masked(0, None)?;
    let mut chain = w_tau.unit.point(v0_tau).to_vec();
    let max_level = levels.iter().copied().max().unwrap_or(0);
    for j in 0..(n - 1) as usize {
        chain[j] = v0_sigma_coords[j];
        coords.push(chain.clone());
        levels.push(max_level + 1);
        classes.push(PointClass::Bridge);
        tags.push(if j + 1 == (n - 1) as usize { bridge_tag } else { empty_tag });
    }

    let unit = Unit::new(n, base, coords)?;
    let ev = ev_from_tags(ctx, &unit, &tags);
    Ok(WitnessModel {
        unit,
        levels,
        classes,
        tags,
        ev,
        root: w_tau.root,
        co_root: Some(offset_points + w_sigma.root),
    })
}

/// The union unit of two width-matched units over disjointly renamed bases,
/// together with a checker for the pairing `(A, B) -> A ∪ B`.
pub fn product_unit(u1: &Unit, u2: &Unit) -> Result<(Unit, ProductIso), WitnessError> {
    if u1.n() != u2.n() {
        return Err(WitnessError::DimMismatch(u1.n(), u2.n()));
    }
    let mut base: Vec<String> = u1.base().iter().map(|b| format!("p_{b}")).collect();
    let offset_base = base.len() as u32;
    base.extend(u2.base().iter().map(|b| format!("q_{b}")));

    let mut coords: Vec<Vec<u32>> = u1.points().map(|(_, p)| p.to_vec()).collect();
    coords.extend(
        u2.points()
            .map(|(_, p)| p.iter().map(|&c| c + offset_base).collect::<Vec<u32>>()),
    );
    let union = Unit::new(u1.n(), base, coords)?;
    let iso = ProductIso { left: u1.clone(), right: u2.clone(), union: union.clone() };
    Ok((union, iso))
}

/// On-demand checker that the pairing map preserves all operations.
pub struct ProductIso {
    left: Unit,
    right: Unit,
    union: Unit,
}

impl ProductIso {
    pub fn union_unit(&self) -> &Unit {
        &self.union
    }

    /// `psi(A, B) = A ∪ B`, with the second component shifted past the first.
    pub fn psi(&self, a: &PointSet, b: &PointSet) -> PointSet {
        let mut out = PointSet::empty(self.union.len());
        for p in a.iter() {
            out.insert(p);
        }
        let off = self.left.len() as PointId;
        for p in b.iter() {
            out.insert(p + off);
        }
        out
    }

    /// Verify that the pairing preserves meet, join, difference, and every
    /// cylindrification on one pair of element pairs.
    pub fn check_pair(
        &self,
        (a, b): (&PointSet, &PointSet),
        (a2, b2): (&PointSet, &PointSet),
    ) -> bool {
        if self.psi(&a.intersect(a2), &b.intersect(b2))
            != self.psi(a, b).intersect(&self.psi(a2, b2))
        {
            return false;
        }
        if self.psi(&a.union(a2), &b.union(b2)) != self.psi(a, b).union(&self.psi(a2, b2)) {
            return false;
        }
        if self.psi(&a.minus(a2), &b.minus(b2)) != self.psi(a, b).minus(&self.psi(a2, b2)) {
            return false;
        }
        for i in 0..self.union.n() {
            let componentwise =
                self.psi(&self.left.cylindrify(i, a), &self.right.cylindrify(i, b));
            let joint = self.union.cylindrify(i, &self.psi(a, b));
            if componentwise != joint {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::FormContext;
    use crate::parser::parse_term;
    use crate::unit::evaluate;

    fn ctx1() -> FormContext {
        FormContext::new(&["x"], 2).unwrap()
    }

    #[test]
    fn degree_zero_witness_is_a_singleton() {
        let mut ctx = ctx1();
        let x = ctx.intern_form(&["x"], None).unwrap();
        let w = build_witness(&mut ctx, x).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.unit().base_size(), 2);
        let t = ctx.form_to_term(x).unwrap();
        let r = evaluate(w.unit(), w.ev(), &t).unwrap();
        assert!(r.contains(w.root()));
    }

    #[test]
    fn degree_one_witness_matches_the_construction_trace() {
        let mut ctx = ctx1();
        let x = ctx.intern_form(&["x"], None).unwrap();
        let nx = ctx.intern_form(&[], None).unwrap();
        // color {x}, sub_0 = {x, -x}, sub_1 = {x}
        let tau = ctx.intern_form(&["x"], Some(vec![vec![x, nx], vec![x]])).unwrap();
        assert!(ctx.is_consistent(tau));
        let w = build_witness(&mut ctx, tau).unwrap();
        assert_eq!(w.len(), 4); // root + 2 children dir 0 + 1 child dir 1
        assert_eq!(w.unit().base_size(), 2 + 2 + 1);
        let t = ctx.form_to_term(tau).unwrap();
        let r = evaluate(w.unit(), w.ev(), &t).unwrap();
        assert!(r.contains(w.root()));
    }

    #[test]
    fn inconsistent_form_is_rejected() {
        let mut ctx = ctx1();
        let x = ctx.intern_form(&["x"], None).unwrap();
        let nx = ctx.intern_form(&[], None).unwrap();
        let bad = ctx.intern_form(&["x"], Some(vec![vec![nx], vec![x]])).unwrap();
        assert!(matches!(build_witness(&mut ctx, bad), Err(WitnessError::InconsistentForm)));
    }

    #[test]
    fn point_form_round_trips_through_the_witness() {
        let mut ctx = ctx1();
        let forms = ctx.enumerate_forms(1).unwrap();
        for f in forms {
            if !ctx.is_consistent(f) {
                continue;
            }
            let w = build_witness(&mut ctx, f).unwrap();
            let back = point_form(&mut ctx, w.unit(), w.ev(), w.root(), 1);
            assert_eq!(back, f);
        }
    }

    #[test]
    fn every_point_satisfies_its_tag() {
        let mut ctx = ctx1();
        let forms = ctx.enumerate_forms(1).unwrap();
        for f in forms {
            if !ctx.is_consistent(f) {
                continue;
            }
            let w = build_witness(&mut ctx, f).unwrap();
            for (p, _) in w.unit().points() {
                let d = ctx.degree(w.tag(p));
                let pf = point_form(&mut ctx, w.unit(), w.ev(), p, d);
                assert_eq!(pf, w.tag(p), "point {p} fails its tag");
            }
        }
    }

    #[test]
    fn singleton_point_form_degree_one() {
        let mut ctx = ctx1();
        let x = ctx.intern_form(&["x"], None).unwrap();
        let w = build_witness(&mut ctx, x).unwrap();
        let f = point_form(&mut ctx, w.unit(), w.ev(), w.root(), 1);
        // x * c0 x * -c0 -x * c1 x * -c1 -x
        assert_eq!(ctx.degree(f), 1);
        assert_eq!(ctx.sub(f, 0), &[x][..]);
        assert_eq!(ctx.sub(f, 1), &[x][..]);
    }

    #[test]
    fn zigzag_trivial_and_degree_two() {
        let mut ctx = ctx1();
        let x = ctx.intern_form(&["x"], None).unwrap();
        let w0 = build_witness(&mut ctx, x).unwrap();
        assert_eq!(zigzag(&mut ctx, &w0).unwrap(), vec![w0.root()]);

        // a consistent degree-2 form: the root form of the singleton model
        let tau2 = point_form(&mut ctx, w0.unit(), w0.ev(), w0.root(), 2);
        assert!(ctx.is_consistent(tau2));
        let w = build_witness(&mut ctx, tau2).unwrap();
        let zz = zigzag(&mut ctx, &w).unwrap();
        assert_eq!(zz.len(), 3);
        assert_eq!(zz[2], w.root());
        for (h, &p) in zz.iter().enumerate() {
            assert_eq!(ctx.degree(w.tag(p)), h as u32);
            let t = ctx.form_to_term(w.tag(p)).unwrap();
            let r = evaluate(w.unit(), w.ev(), &t).unwrap();
            assert!(r.contains(p), "zig-zag point {p} fails its tag");
        }
        // links: v1 ~_0 v2 (h=1 odd), v0 ~_1 v1 (h=0 even)
        assert!(w.unit().related(0, zz[1], zz[2]));
        assert!(w.unit().related(1, zz[0], zz[1]));

        // odd degree is rejected
        let tau1 = point_form(&mut ctx, w0.unit(), w0.ev(), w0.root(), 1);
        let w1 = build_witness(&mut ctx, tau1).unwrap();
        assert!(matches!(zigzag(&mut ctx, &w1), Err(WitnessError::OddDegree(1))));
    }

    #[test]
    fn extend_plus_flips_one_reachability_literal() {
        let mut ctx = ctx1();
        let x = ctx.intern_form(&["x"], None).unwrap();
        let nx = ctx.intern_form(&[], None).unwrap();
        let w = build_witness(&mut ctx, x).unwrap();
        let wp = extend_plus(&mut ctx, &w, nx).unwrap();
        assert_eq!(wp.len(), 2);
        // ev+(x) is exactly the old root
        assert!(wp.ev().get("x").unwrap().contains(w.root()));
        assert_eq!(wp.ev().get("x").unwrap().len(), 1);

        let before = point_form(&mut ctx, w.unit(), w.ev(), w.root(), 1);
        let after = point_form(&mut ctx, wp.unit(), wp.ev(), wp.root(), 1);
        assert_ne!(before, after);
        // they differ exactly on the direction-0 successor set
        assert_eq!(ctx.sub(before, 0), &[x][..]);
        assert_eq!(ctx.sub(after, 0), &[nx.min(x), nx.max(x)][..]);
        assert_eq!(ctx.sub(before, 1), ctx.sub(after, 1));

        // old points keep their tags, checked by evaluate
        for (p, _) in w.unit().points() {
            let t = ctx.form_to_term(w.tag(p)).unwrap();
            let r = evaluate(wp.unit(), wp.ev(), &t).unwrap();
            assert!(r.contains(p));
        }

        // the forbidden degree-0 form is rejected
        assert!(matches!(extend_plus(&mut ctx, &w, x), Err(WitnessError::ForbiddenForm)));
    }

    #[test]
    fn extend_plus_needs_variables() {
        let mut ctx = FormContext::new(&[], 2).unwrap();
        let one = ctx.intern_form(&[], None).unwrap();
        let w = build_witness(&mut ctx, one).unwrap();
        assert!(matches!(extend_plus(&mut ctx, &w, one), Err(WitnessError::EmptyVars)));
    }

    #[test]
    fn bridge_of_two_singletons() {
        let mut ctx = ctx1();
        let x = ctx.intern_form(&["x"], None).unwrap();
        let nx = ctx.intern_form(&[], None).unwrap();
        let wt = build_witness(&mut ctx, x).unwrap();
        let ws = build_witness(&mut ctx, nx).unwrap();
        let b = bridge(&mut ctx, &wt, &ws).unwrap();
        assert_eq!(b.len(), 3);
        let sigma_root = b.co_root().unwrap();

        // the bridge point is colored like the tau-side end
        let w1 = (b.len() - 1) as PointId;
        assert!(b.ev().get("x").unwrap().contains(w1));

        // the sigma-side root satisfies -x * c1 c0 x
        let t = parse_term("-x * c1 c0 x").unwrap();
        let r = evaluate(b.unit(), b.ev(), &t).unwrap();
        assert!(r.contains(sigma_root));

        // old points keep their tags
        for (p, _) in wt.unit().points() {
            let t = ctx.form_to_term(wt.tag(p)).unwrap();
            assert!(evaluate(b.unit(), b.ev(), &t).unwrap().contains(p));
        }
        for (p, _) in ws.unit().points() {
            let t = ctx.form_to_term(ws.tag(p)).unwrap();
            let shifted = p + wt.len() as PointId;
            assert!(evaluate(b.unit(), b.ev(), &t).unwrap().contains(shifted));
        }
    }

    #[test]
    fn product_unit_preserves_operations() {
        let u1 = Unit::new(2, vec!["a".into(), "b".into()], vec![vec![0, 1]]).unwrap();
        let u2 =
            Unit::new(2, vec!["c".into(), "d".into()], vec![vec![0, 1], vec![0, 0]]).unwrap();
        let (union, iso) = product_unit(&u1, &u2).unwrap();
        assert_eq!(union.len(), 3);

        // psi({p}, {}) = {p}; the kernel is the empty pair
        let mut a = PointSet::empty(1);
        a.insert(0);
        let empty2 = PointSet::empty(2);
        assert_eq!(iso.psi(&a, &empty2).len(), 1);
        assert!(iso.psi(&PointSet::empty(1), &empty2).is_empty());

        for am in 0..2u64 {
            for bm in 0..4u64 {
                for am2 in 0..2u64 {
                    for bm2 in 0..4u64 {
                        let a = PointSet::from_mask(1, am);
                        let b = PointSet::from_mask(2, bm);
                        let a2 = PointSet::from_mask(1, am2);
                        let b2 = PointSet::from_mask(2, bm2);
                        assert!(iso.check_pair((&a, &b), (&a2, &b2)));
                    }
                }
            }
        }
    }
}
