//! Abstract syntax for algebraic terms and for first-order formulas without
//! equality, plus the formula-to-term translation.
//!
//! Terms are immutable trees with shared substructure (`Arc` children), so
//! cloning is cheap and large machine-generated terms stay compact as DAGs.
//! Cylindrification depth and the largest cylindrification index are cached
//! at construction time; the derived accessors are total.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// One node of a term.  Obtain it from [`Term::node`].
#[derive(Debug)]
pub enum TermNode {
    Zero,
    One,
    Var(String),
    Not(Term),
    Meet(Term, Term),
    Join(Term, Term),
    Cyl(u32, Term),
}

/// A term over variables, Boolean connectives, and the indexed
/// cylindrifications `c_i`.
#[derive(Clone)]
pub struct Term {
    node: Arc<TermNode>,
    depth: u32,
    max_index: Option<u32>,
}

impl Term {
    pub fn zero() -> Term {
        Term { node: Arc::new(TermNode::Zero), depth: 0, max_index: None }
    }

    pub fn one() -> Term {
        Term { node: Arc::new(TermNode::One), depth: 0, max_index: None }
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term { node: Arc::new(TermNode::Var(name.into())), depth: 0, max_index: None }
    }

    pub fn not(t: &Term) -> Term {
        Term {
            depth: t.depth,
            max_index: t.max_index,
            node: Arc::new(TermNode::Not(t.clone())),
        }
    }

    pub fn meet(a: &Term, b: &Term) -> Term {
        Term {
            depth: a.depth.max(b.depth),
            max_index: max_opt(a.max_index, b.max_index),
            node: Arc::new(TermNode::Meet(a.clone(), b.clone())),
        }
    }

    pub fn join(a: &Term, b: &Term) -> Term {
        Term {
            depth: a.depth.max(b.depth),
            max_index: max_opt(a.max_index, b.max_index),
            node: Arc::new(TermNode::Join(a.clone(), b.clone())),
        }
    }

    pub fn cyl(index: u32, t: &Term) -> Term {
        Term {
            depth: t.depth + 1,
            max_index: max_opt(Some(index), t.max_index),
            node: Arc::new(TermNode::Cyl(index, t.clone())),
        }
    }

    /// Meet of all given terms; the empty product is `1`.
    pub fn big_meet<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Term {
        let mut it = terms.into_iter();
        match it.next() {
            None => Term::one(),
            Some(first) => it.fold(first.clone(), |acc, t| Term::meet(&acc, t)),
        }
    }

    /// Join of all given terms; the empty sum is `0`.
    pub fn big_join<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Term {
        let mut it = terms.into_iter();
        match it.next() {
            None => Term::zero(),
            Some(first) => it.fold(first.clone(), |acc, t| Term::join(&acc, t)),
        }
    }

    pub fn node(&self) -> &TermNode {
        &self.node
    }

    /// Maximal nesting of cylindrifications.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Largest cylindrification index, or `None` when no `c_i` occurs.
    pub fn max_cyl_index(&self) -> Option<u32> {
        self.max_index
    }

    /// `max(2, max_cyl_index + 1)` — the least dimension the term lives in.
    pub fn effective_dim(&self) -> u32 {
        match self.max_index {
            Some(i) => (i + 1).max(2),
            None => 2,
        }
    }

    /// The set of variable names occurring in the term.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut seen = BTreeSet::new();
        self.collect_vars(&mut out, &mut seen);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>, seen: &mut BTreeSet<usize>) {
        // Shared subtrees are visited once.
        if !seen.insert(Arc::as_ptr(&self.node) as usize) {
            return;
        }
        match self.node.as_ref() {
            TermNode::Zero | TermNode::One => {}
            TermNode::Var(x) => {
                out.insert(x.clone());
            }
            TermNode::Not(a) | TermNode::Cyl(_, a) => a.collect_vars(out, seen),
            TermNode::Meet(a, b) | TermNode::Join(a, b) => {
                a.collect_vars(out, seen);
                b.collect_vars(out, seen);
            }
        }
    }
}

fn max_opt(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.node, &other.node) {
            return true;
        }
        if self.depth != other.depth || self.max_index != other.max_index {
            return false;
        }
        match (self.node.as_ref(), other.node.as_ref()) {
            (TermNode::Zero, TermNode::Zero) => true,
            (TermNode::One, TermNode::One) => true,
            (TermNode::Var(x), TermNode::Var(y)) => x == y,
            (TermNode::Not(a), TermNode::Not(b)) => a == b,
            (TermNode::Meet(a, b), TermNode::Meet(c, d)) => a == c && b == d,
            (TermNode::Join(a, b), TermNode::Join(c, d)) => a == c && b == d,
            (TermNode::Cyl(i, a), TermNode::Cyl(j, b)) => i == j && a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({self})")
    }
}

// Rendering.  The canonical text re-parses to a structurally equal term:
//   join level:  a + b     meet level:  a * b     unary: -a, c0 a
// A right operand at the same binary level is parenthesized so that the
// default left association reproduces the original shape.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, Prec::Join)
    }
}

impl Term {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, level: Prec) -> fmt::Result {
        match self.node.as_ref() {
            TermNode::Zero => f.write_str("0"),
            TermNode::One => f.write_str("1"),
            TermNode::Var(x) => f.write_str(x),
            TermNode::Not(a) => {
                f.write_str("-")?;
                a.fmt_prec(f, Prec::Unary)
            }
            TermNode::Cyl(i, a) => {
                write!(f, "c{i} ")?;
                a.fmt_prec(f, Prec::Unary)
            }
            TermNode::Meet(a, b) => {
                let parens = level > Prec::Meet;
                if parens {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, Prec::Meet)?;
                f.write_str(" * ")?;
                b.fmt_prec(f, Prec::Unary)?;
                if parens {
                    f.write_str(")")?;
                }
                Ok(())
            }
            TermNode::Join(a, b) => {
                let parens = level > Prec::Join;
                if parens {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, Prec::Join)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, Prec::Meet)?;
                if parens {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Join,
    Meet,
    Unary,
}

/// Canonical text of a term; `parse_term(render(t))` is structurally equal
/// to `t`.
pub fn render(t: &Term) -> String {
    t.to_string()
}

/// Canonical text of a formula; `parse_formula(render_formula(f))` is
/// structurally equal to `f`.
pub fn render_formula(f: &Formula) -> String {
    f.to_string()
}

/// One node of a first-order formula without equality.
#[derive(Debug)]
pub enum FormulaNode {
    /// Relation applied to a nonempty tuple of variable indices.
    Atom(String, Vec<u32>),
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
    Implies(Formula, Formula),
    Exists(u32, Formula),
    Forall(u32, Formula),
}

/// A first-order formula without equality.  There is no equality atom; the
/// identity relation is not part of the language.
#[derive(Clone)]
pub struct Formula {
    node: Arc<FormulaNode>,
}

impl Formula {
    pub fn atom(relation: impl Into<String>, args: Vec<u32>) -> Formula {
        assert!(!args.is_empty(), "atom argument list must be nonempty");
        Formula { node: Arc::new(FormulaNode::Atom(relation.into(), args)) }
    }

    pub fn not(a: &Formula) -> Formula {
        Formula { node: Arc::new(FormulaNode::Not(a.clone())) }
    }

    pub fn and(a: &Formula, b: &Formula) -> Formula {
        Formula { node: Arc::new(FormulaNode::And(a.clone(), b.clone())) }
    }

    pub fn or(a: &Formula, b: &Formula) -> Formula {
        Formula { node: Arc::new(FormulaNode::Or(a.clone(), b.clone())) }
    }

    pub fn implies(a: &Formula, b: &Formula) -> Formula {
        Formula { node: Arc::new(FormulaNode::Implies(a.clone(), b.clone())) }
    }

    pub fn exists(index: u32, a: &Formula) -> Formula {
        Formula { node: Arc::new(FormulaNode::Exists(index, a.clone())) }
    }

    pub fn forall(index: u32, a: &Formula) -> Formula {
        Formula { node: Arc::new(FormulaNode::Forall(index, a.clone())) }
    }

    pub fn node(&self) -> &FormulaNode {
        &self.node
    }

    /// Largest variable index mentioned (free or bound), if any.
    pub fn max_var_index(&self) -> Option<u32> {
        match self.node.as_ref() {
            FormulaNode::Atom(_, args) => args.iter().copied().max(),
            FormulaNode::Not(a) => a.max_var_index(),
            FormulaNode::And(a, b) | FormulaNode::Or(a, b) | FormulaNode::Implies(a, b) => {
                max_opt(a.max_var_index(), b.max_var_index())
            }
            FormulaNode::Exists(i, a) | FormulaNode::Forall(i, a) => {
                max_opt(Some(*i), a.max_var_index())
            }
        }
    }

    /// Distinct (relation, argument tuple) pairs, each with its generator
    /// name, in first-occurrence order.
    pub fn atoms(&self) -> Vec<(String, Vec<u32>)> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<(String, Vec<u32>)>) {
        match self.node.as_ref() {
            FormulaNode::Atom(r, args) => {
                let key = (r.clone(), args.clone());
                if !out.contains(&key) {
                    out.push(key);
                }
            }
            FormulaNode::Not(a) => a.collect_atoms(out),
            FormulaNode::And(a, b) | FormulaNode::Or(a, b) | FormulaNode::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            FormulaNode::Exists(_, a) | FormulaNode::Forall(_, a) => a.collect_atoms(out),
        }
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.node, &other.node) {
            return true;
        }
        match (self.node.as_ref(), other.node.as_ref()) {
            (FormulaNode::Atom(r, a), FormulaNode::Atom(s, b)) => r == s && a == b,
            (FormulaNode::Not(a), FormulaNode::Not(b)) => a == b,
            (FormulaNode::And(a, b), FormulaNode::And(c, d)) => a == c && b == d,
            (FormulaNode::Or(a, b), FormulaNode::Or(c, d)) => a == c && b == d,
            (FormulaNode::Implies(a, b), FormulaNode::Implies(c, d)) => a == c && b == d,
            (FormulaNode::Exists(i, a), FormulaNode::Exists(j, b)) => i == j && a == b,
            (FormulaNode::Forall(i, a), FormulaNode::Forall(j, b)) => i == j && a == b,
            _ => false,
        }
    }
}

impl Eq for Formula {}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({self})")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, FPrec::Quant)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum FPrec {
    Quant,
    Implies,
    Or,
    And,
    Unary,
}

impl Formula {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, level: FPrec) -> fmt::Result {
        match self.node.as_ref() {
            FormulaNode::Atom(r, args) => {
                write!(f, "{r}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "v{a}")?;
                }
                f.write_str(")")
            }
            FormulaNode::Not(a) => {
                f.write_str("~")?;
                a.fmt_prec(f, FPrec::Unary)
            }
            FormulaNode::Exists(i, a) | FormulaNode::Forall(i, a) => {
                let parens = level > FPrec::Quant;
                if parens {
                    f.write_str("(")?;
                }
                let word = match self.node.as_ref() {
                    FormulaNode::Exists(..) => "exists",
                    _ => "forall",
                };
                write!(f, "{word} v{i}. ")?;
                a.fmt_prec(f, FPrec::Quant)?;
                if parens {
                    f.write_str(")")?;
                }
                Ok(())
            }
            FormulaNode::Implies(a, b) => {
                let parens = level > FPrec::Implies;
                if parens {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, FPrec::Or)?;
                f.write_str(" -> ")?;
                b.fmt_prec(f, FPrec::Implies)?;
                if parens {
                    f.write_str(")")?;
                }
                Ok(())
            }
            FormulaNode::Or(a, b) => {
                let parens = level > FPrec::Or;
                if parens {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, FPrec::Or)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, FPrec::And)?;
                if parens {
                    f.write_str(")")?;
                }
                Ok(())
            }
            FormulaNode::And(a, b) => {
                let parens = level > FPrec::And;
                if parens {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, FPrec::And)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, FPrec::Unary)?;
                if parens {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// The generator name for an atom occurrence: `R` applied to indices
/// `i1..ik` becomes the term variable `R@i1,...,ik`, so the same relation
/// on different variable tuples yields different generators.
pub fn atom_generator(relation: &str, args: &[u32]) -> String {
    let mut s = String::from(relation);
    s.push('@');
    for (k, a) in args.iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        s.push_str(&format!("{a}"));
    }
    s
}

/// Translate a formula to a term: atoms become generators, `exists i`
/// becomes `c_i`, `forall i` becomes `-c_i -`, and Boolean connectives map
/// homomorphically (`->` as `-a + b`).
pub fn formula_to_term(f: &Formula) -> Term {
    match f.node.as_ref() {
        FormulaNode::Atom(r, args) => Term::var(atom_generator(r, args)),
        FormulaNode::Not(a) => Term::not(&formula_to_term(a)),
        FormulaNode::And(a, b) => Term::meet(&formula_to_term(a), &formula_to_term(b)),
        FormulaNode::Or(a, b) => Term::join(&formula_to_term(a), &formula_to_term(b)),
        FormulaNode::Implies(a, b) => {
            Term::join(&Term::not(&formula_to_term(a)), &formula_to_term(b))
        }
        FormulaNode::Exists(i, a) => Term::cyl(*i, &formula_to_term(a)),
        FormulaNode::Forall(i, a) => {
            Term::not(&Term::cyl(*i, &Term::not(&formula_to_term(a))))
        }
    }
}
