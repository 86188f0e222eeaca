//! Generalized Conway algebras of type 1 over Laurent polynomials.
//!
//! An algebra carries four binary operations (`∘`, `/`, `*`, `//`) and the
//! unit sequence `a_n`. Every bundled instance is affine in its arguments,
//! `op(a, b) = left·a + right·b + constant`, so an instance is stored as four
//! coefficient triples plus the recurrence `a_{n+1} = factor·a_n + offset`.
//!
//! The `nonlinear` instance stores k-th powers of its formal elements. On
//! those stored values its operations are the gen-conway ones, so `k` only
//! changes how values are rendered (see [`ConwayAlgebra::to_formal`]).

use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::One;
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly, VarTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unknown algebra `{0}` (expected classic3, homflypt, gen-conway, gen-homflypt or nonlinear)")]
    UnknownAlgebra(String),
    #[error("nonlinear algebra needs k >= 1, got {0}")]
    InvalidK(u32),
    #[error("the nonlinear algebra needs a k parameter")]
    MissingK,
    #[error("algebra `{0}` takes no k parameter")]
    UnexpectedK(String),
    #[error("unit index must be at least 1")]
    ZeroUnitIndex,
    #[error("`{0}` is a linear algebra; formal roots only exist for nonlinear")]
    NotNonlinear(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    /// `∘`, used at positive self crossings.
    Circ,
    /// `/`, right inverse of `∘`.
    Slash,
    /// `*`, used at positive mixed crossings.
    Star,
    /// `//`, right inverse of `*`.
    SSlash,
}

impl OpKind {
    pub const ALL: [OpKind; 4] = [OpKind::Circ, OpKind::Slash, OpKind::Star, OpKind::SSlash];

    fn index(self) -> usize {
        match self {
            OpKind::Circ => 0,
            OpKind::Slash => 1,
            OpKind::Star => 2,
            OpKind::SSlash => 3,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            OpKind::Circ => "∘",
            OpKind::Slash => "/",
            OpKind::Star => "*",
            OpKind::SSlash => "//",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    Linear,
    NonlinearK(u32),
}

/// `op(a, b) = left·a + right·b + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineOp {
    pub left: LaurentPoly,
    pub right: LaurentPoly,
    pub constant: LaurentPoly,
}

impl AffineOp {
    fn embed(&self, vars: &Arc<VarTable>) -> Result<AffineOp, LaurentError> {
        Ok(AffineOp {
            left: self.left.embed(vars)?,
            right: self.right.embed(vars)?,
            constant: self.constant.embed(vars)?,
        })
    }
}

/// `a_1 = 1`, `a_{n+1} = factor·a_n + offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitRecurrence {
    pub factor: LaurentPoly,
    pub offset: LaurentPoly,
}

pub struct ConwayAlgebra {
    name: String,
    kind: AlgebraKind,
    vars: Arc<VarTable>,
    ops: [AffineOp; 4],
    recurrence: UnitRecurrence,
    units: Mutex<Vec<LaurentPoly>>,
}

impl Clone for ConwayAlgebra {
    fn clone(&self) -> Self {
        let units = self.units.lock().expect("unit memo poisoned").clone();
        ConwayAlgebra {
            name: self.name.clone(),
            kind: self.kind,
            vars: self.vars.clone(),
            ops: self.ops.clone(),
            recurrence: self.recurrence.clone(),
            units: Mutex::new(units),
        }
    }
}

impl fmt::Debug for ConwayAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConwayAlgebra")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("vars", &self.vars.names())
            .finish()
    }
}

pub const ALGEBRA_NAMES: [&str; 5] = ["classic3", "homflypt", "gen-conway", "gen-homflypt", "nonlinear"];

fn p(vars: &Arc<VarTable>, text: &str) -> LaurentPoly {
    LaurentPoly::parse(vars, text).expect("built-in coefficient")
}

fn op(vars: &Arc<VarTable>, left: &str, right: &str, constant: &str) -> AffineOp {
    AffineOp { left: p(vars, left), right: p(vars, right), constant: p(vars, constant) }
}

/// Builds one of the bundled algebras by name.
pub fn make_algebra(name: &str, k: Option<u32>) -> Result<ConwayAlgebra, AlgebraError> {
    if name != "nonlinear" && k.is_some() && ALGEBRA_NAMES.contains(&name) {
        return Err(AlgebraError::UnexpectedK(name.to_string()));
    }
    let alg = match name {
        "classic3" => {
            let t = VarTable::new(&["p", "q", "z"])?;
            let circ = op(&t, "p", "q", "z");
            let slash = op(&t, "p^-1", "-p^-1*q", "-p^-1*z");
            let rec = UnitRecurrence { factor: p(&t, "q^-1 - p*q^-1"), offset: p(&t, "-q^-1*z") };
            ConwayAlgebra::from_parts(name, AlgebraKind::Linear, t, [circ.clone(), slash.clone(), circ, slash], rec)
        }
        "homflypt" => {
            let t = VarTable::new(&["v", "z"])?;
            let circ = op(&t, "v^2", "v*z", "0");
            let slash = op(&t, "v^-2", "-v^-1*z", "0");
            let rec = UnitRecurrence { factor: p(&t, "v^-1*z^-1 - v*z^-1"), offset: p(&t, "0") };
            ConwayAlgebra::from_parts(name, AlgebraKind::Linear, t, [circ.clone(), slash.clone(), circ, slash], rec)
        }
        "gen-conway" => gen_conway_shaped(name, AlgebraKind::Linear)?,
        "gen-homflypt" => {
            let t = VarTable::new(&["v", "z", "w"])?;
            let ops = [
                op(&t, "v^2", "v*w", "0"),
                op(&t, "v^-2", "-v^-1*w", "0"),
                op(&t, "v^2", "v*z", "0"),
                op(&t, "v^-2", "-v^-1*z", "0"),
            ];
            let rec = UnitRecurrence { factor: p(&t, "v^-1*w^-1 - v*w^-1"), offset: p(&t, "0") };
            ConwayAlgebra::from_parts(name, AlgebraKind::Linear, t, ops, rec)
        }
        "nonlinear" => match k {
            None => return Err(AlgebraError::MissingK),
            Some(0) => return Err(AlgebraError::InvalidK(0)),
            Some(k) => gen_conway_shaped(name, AlgebraKind::NonlinearK(k))?,
        },
        other => return Err(AlgebraError::UnknownAlgebra(other.to_string())),
    };
    Ok(alg)
}

fn gen_conway_shaped(name: &str, kind: AlgebraKind) -> Result<ConwayAlgebra, AlgebraError> {
    let t = VarTable::new(&["p", "q", "r"])?;
    let ops = [
        op(&t, "p", "q", "0"),
        op(&t, "p^-1", "-p^-1*q", "0"),
        op(&t, "p", "r", "0"),
        op(&t, "p^-1", "-p^-1*r", "0"),
    ];
    let rec = UnitRecurrence { factor: p(&t, "q^-1 - p*q^-1"), offset: p(&t, "0") };
    Ok(ConwayAlgebra::from_parts(name, kind, t, ops, rec))
}

impl ConwayAlgebra {
    /// Assembles an algebra from explicit operations. Used for the bundled
    /// instances and for deliberately broken instances in tests.
    pub fn from_parts(
        name: &str,
        kind: AlgebraKind,
        vars: Arc<VarTable>,
        ops: [AffineOp; 4],
        recurrence: UnitRecurrence,
    ) -> Self {
        let one = LaurentPoly::one(&vars);
        ConwayAlgebra { name: name.to_string(), kind, vars, ops, recurrence, units: Mutex::new(vec![one]) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Name plus parameter, e.g. `nonlinear(k=2)`; used in reports and cache keys.
    pub fn label(&self) -> String {
        match self.kind {
            AlgebraKind::Linear => self.name.clone(),
            AlgebraKind::NonlinearK(k) => format!("{}(k={})", self.name, k),
        }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn op(&self, kind: OpKind) -> &AffineOp {
        &self.ops[kind.index()]
    }

    /// Replaces one operation, keeping everything else.
    pub fn with_op(mut self, kind: OpKind, new: AffineOp) -> Self {
        self.ops[kind.index()] = new;
        self
    }

    /// The same algebra over `vars ++ extra`, for symbolic identity checks.
    pub fn extended(&self, extra: &[&str]) -> Result<ConwayAlgebra, AlgebraError> {
        let t = self.vars.extended(extra)?;
        let ops = [
            self.ops[0].embed(&t)?,
            self.ops[1].embed(&t)?,
            self.ops[2].embed(&t)?,
            self.ops[3].embed(&t)?,
        ];
        let rec = UnitRecurrence { factor: self.recurrence.factor.embed(&t)?, offset: self.recurrence.offset.embed(&t)? };
        Ok(ConwayAlgebra::from_parts(&self.name, self.kind, t, ops, rec))
    }

    pub fn apply(&self, kind: OpKind, a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
        let o = self.op(kind);
        let lhs = scale(&o.left, a)?;
        let rhs = scale(&o.right, b)?;
        let mut out = lhs.checked_add(&rhs)?;
        if !o.constant.is_zero() {
            out = out.checked_add(&o.constant)?;
        }
        Ok(out)
    }

    /// The element `a_n` (`n >= 1`), memoized.
    pub fn unit(&self, n: usize) -> Result<LaurentPoly, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::ZeroUnitIndex);
        }
        let mut units = self.units.lock().expect("unit memo poisoned");
        while units.len() < n {
            let last = units.last().expect("a_1 is always present");
            let next = scale(&self.recurrence.factor, last)?.checked_add(&self.recurrence.offset)?;
            units.push(next);
        }
        Ok(units[n - 1].clone())
    }

    /// Renders a stored value in the algebra's surface syntax: `root(k, P)`
    /// for the nonlinear instance with `k >= 2`, the plain polynomial for `k = 1`.
    pub fn to_formal(&self, stored: &LaurentPoly) -> Result<String, AlgebraError> {
        match self.kind {
            AlgebraKind::Linear => Err(AlgebraError::NotNonlinear(self.name.clone())),
            AlgebraKind::NonlinearK(1) => Ok(stored.to_text()),
            AlgebraKind::NonlinearK(k) => Ok(format!("root({}, {})", k, stored.to_text())),
        }
    }
}

fn scale(coeff: &LaurentPoly, x: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
    if coeff.is_zero() || x.is_zero() {
        return Ok(LaurentPoly::zero(x.vars()));
    }
    if let Some((m, c)) = coeff.as_single_term() {
        if coeff.vars() != x.vars() {
            return Err(LaurentError::VarMismatch);
        }
        if c.is_one() && m.exps().iter().all(|&e| e == 0) {
            return Ok(x.clone());
        }
        return x.scale_monomial(c, m);
    }
    coeff.checked_mul(x)
}

/// Which identity an [`IdentityCheck`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    /// `(a∘b)/(c∘d) = (a/c)∘(b/d)`
    RemarkCircSlash,
    /// `(a/b)/(c/d) = (a/c)/(b/d)`
    RemarkSlashSlash,
    /// `a_n = a_n / a_{n+1}`
    RemarkUnitSlash,
}

impl Axiom {
    pub const ALL: [Axiom; 10] = [
        Axiom::A,
        Axiom::B,
        Axiom::C,
        Axiom::D,
        Axiom::E,
        Axiom::F,
        Axiom::G,
        Axiom::RemarkCircSlash,
        Axiom::RemarkSlashSlash,
        Axiom::RemarkUnitSlash,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Axiom::A => "(A)",
            Axiom::B => "(B)",
            Axiom::C => "(C)",
            Axiom::D => "(D)",
            Axiom::E => "(E)",
            Axiom::F => "(F)",
            Axiom::G => "(G)",
            Axiom::RemarkCircSlash => "(R1)",
            Axiom::RemarkSlashSlash => "(R2)",
            Axiom::RemarkUnitSlash => "(R3)",
        }
    }
}

/// One symbolic identity `lhs = rhs` with its difference `lhs - rhs`.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub axiom: Axiom,
    pub statement: String,
    pub difference: LaurentPoly,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.difference.is_zero()
    }
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub algebra: String,
    pub checks: Vec<IdentityCheck>,
}

impl AxiomReport {
    pub fn verdict(&self, axiom: Axiom) -> bool {
        self.checks.iter().filter(|c| c.axiom == axiom).all(IdentityCheck::passed)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn first_failure(&self, axiom: Axiom) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.axiom == axiom && !c.passed())
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "axioms for {}", self.algebra)?;
        for ax in Axiom::ALL {
            match self.first_failure(ax) {
                None => {
                    let n = self.checks.iter().filter(|c| c.axiom == ax).count();
                    writeln!(f, "  {:<5} PASS ({} identities)", ax.label(), n)?;
                }
                Some(c) => writeln!(f, "  {:<5} FAIL {}: difference {}", ax.label(), c.statement, c.difference)?,
            }
        }
        Ok(())
    }
}

/// Levels of `n` used for the unit-sequence identities.
pub const UNIT_CHECK_DEPTH: usize = 6;

/// Checks (A)–(G) and the three derived identities symbolically over fresh
/// indeterminates `a, b, c, d`.
pub fn check_axioms(alg: &ConwayAlgebra) -> Result<AxiomReport, AlgebraError> {
    use OpKind::*;
    let ext = alg.extended(&["a", "b", "c", "d"])?;
    let t = ext.vars().clone();
    let [a, b, c, d] = ["a", "b", "c", "d"].map(|n| LaurentPoly::var(&t, n).expect("adjoined variable"));
    let ap = |k: OpKind, x: &LaurentPoly, y: &LaurentPoly| ext.apply(k, x, y);

    let mut checks = Vec::new();
    let mut push = |axiom: Axiom, statement: String, lhs: LaurentPoly, rhs: LaurentPoly| -> Result<(), AlgebraError> {
        checks.push(IdentityCheck { axiom, statement, difference: lhs.checked_sub(&rhs)? });
        Ok(())
    };

    push(Axiom::A, "(a∘b)/b = a".into(), ap(Slash, &ap(Circ, &a, &b)?, &b)?, a.clone())?;
    push(Axiom::A, "(a/b)∘b = a".into(), ap(Circ, &ap(Slash, &a, &b)?, &b)?, a.clone())?;
    push(Axiom::A, "(a*b)//b = a".into(), ap(SSlash, &ap(Star, &a, &b)?, &b)?, a.clone())?;
    push(Axiom::A, "(a//b)*b = a".into(), ap(Star, &ap(SSlash, &a, &b)?, &b)?, a.clone())?;

    for n in 1..=UNIT_CHECK_DEPTH {
        let an = ext.unit(n)?;
        let an1 = ext.unit(n + 1)?;
        push(Axiom::B, format!("a_{n} = a_{n}∘a_{}", n + 1), an.clone(), ap(Circ, &an, &an1)?)?;
    }

    let interchange = |outer_l: OpKind, outer_r: OpKind, inner: OpKind| -> Result<(LaurentPoly, LaurentPoly), AlgebraError> {
        // (a ol b) inner (c or d)  vs  (a inner c) ol (b or d)
        let lhs = ap(inner, &ap(outer_l, &a, &b)?, &ap(outer_r, &c, &d)?)?;
        let rhs = ap(outer_l, &ap(inner, &a, &c)?, &ap(outer_r, &b, &d)?)?;
        Ok((lhs, rhs))
    };
    let (l, r) = interchange(Circ, Circ, Circ)?;
    push(Axiom::C, "(a∘b)∘(c∘d) = (a∘c)∘(b∘d)".into(), l, r)?;
    let (l, r) = interchange(Star, Star, Star)?;
    push(Axiom::D, "(a*b)*(c*d) = (a*c)*(b*d)".into(), l, r)?;
    let (l, r) = interchange(Circ, Star, Circ)?;
    push(Axiom::E, "(a∘b)∘(c*d) = (a∘c)∘(b*d)".into(), l, r)?;
    let (l, r) = interchange(Star, Circ, Star)?;
    push(Axiom::F, "(a*b)*(c∘d) = (a*c)*(b∘d)".into(), l, r)?;

    let lhs = ap(Star, &ap(Circ, &a, &b)?, &ap(Circ, &c, &d)?)?;
    let rhs = ap(Circ, &ap(Star, &a, &c)?, &ap(Star, &b, &d)?)?;
    push(Axiom::G, "(a∘b)*(c∘d) = (a*c)∘(b*d)".into(), lhs, rhs)?;

    let lhs = ap(Slash, &ap(Circ, &a, &b)?, &ap(Circ, &c, &d)?)?;
    let rhs = ap(Circ, &ap(Slash, &a, &c)?, &ap(Slash, &b, &d)?)?;
    push(Axiom::RemarkCircSlash, "(a∘b)/(c∘d) = (a/c)∘(b/d)".into(), lhs, rhs)?;
    let lhs = ap(Slash, &ap(Slash, &a, &b)?, &ap(Slash, &c, &d)?)?;
    let rhs = ap(Slash, &ap(Slash, &a, &c)?, &ap(Slash, &b, &d)?)?;
    push(Axiom::RemarkSlashSlash, "(a/b)/(c/d) = (a/c)/(b/d)".into(), lhs, rhs)?;
    for n in 1..=UNIT_CHECK_DEPTH {
        let an = ext.unit(n)?;
        let an1 = ext.unit(n + 1)?;
        push(Axiom::RemarkUnitSlash, format!("a_{n} = a_{n}/a_{}", n + 1), an.clone(), ap(Slash, &an, &an1)?)?;
    }

    Ok(AxiomReport { algebra: alg.label(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(alg: &ConwayAlgebra, s: &str) -> LaurentPoly {
        LaurentPoly::parse(alg.vars(), s).unwrap()
    }

    #[test]
    fn gen_conway_second_unit() {
        let g = make_algebra("gen-conway", None).unwrap();
        assert_eq!(g.unit(2).unwrap(), poly(&g, "q^-1 - p*q^-1"));
    }

    #[test]
    fn homflypt_first_unit() {
        let h = make_algebra("homflypt", None).unwrap();
        assert!(h.unit(1).unwrap().is_one());
    }

    #[test]
    fn classic3_second_unit_uses_recurrence() {
        let c = make_algebra("classic3", None).unwrap();
        assert_eq!(c.unit(2).unwrap(), poly(&c, "q^-1 - p*q^-1 - q^-1*z"));
        // (1 - p) a_n = q a_{n+1} + z
        for n in 1..5 {
            let lhs = &(&LaurentPoly::one(c.vars()) - &poly(&c, "p")) * &c.unit(n).unwrap();
            let rhs = &(&poly(&c, "q") * &c.unit(n + 1).unwrap()) + &poly(&c, "z");
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn homflypt_units_match_closed_form() {
        let h = make_algebra("homflypt", None).unwrap();
        let base = poly(&h, "v^-1*z^-1 - v*z^-1");
        for n in 1..6 {
            assert_eq!(h.unit(n).unwrap(), base.checked_pow(n as i32 - 1).unwrap());
        }
    }

    #[test]
    fn unit_zero_is_rejected() {
        let h = make_algebra("homflypt", None).unwrap();
        assert_eq!(h.unit(0), Err(AlgebraError::ZeroUnitIndex));
    }

    #[test]
    fn circ_on_one_and_zero() {
        let g = make_algebra("gen-conway", None).unwrap();
        let one = LaurentPoly::one(g.vars());
        let zero = LaurentPoly::zero(g.vars());
        assert_eq!(g.apply(OpKind::Circ, &one, &zero).unwrap(), poly(&g, "p"));
    }

    #[test]
    fn slash_inverts_circ_symbolically() {
        let g = make_algebra("gen-conway", None).unwrap().extended(&["a", "b"]).unwrap();
        let a = poly(&g, "a");
        let b = poly(&g, "b");
        let ab = g.apply(OpKind::Circ, &a, &b).unwrap();
        assert_eq!(g.apply(OpKind::Slash, &ab, &b).unwrap(), a);
    }

    #[test]
    fn star_of_second_unit() {
        // p·a_2 + r·1, expanded by hand
        let g = make_algebra("gen-conway", None).unwrap();
        let v = g.apply(OpKind::Star, &g.unit(2).unwrap(), &LaurentPoly::one(g.vars())).unwrap();
        assert_eq!(v, poly(&g, "p*q^-1 - p^2*q^-1 + r"));
    }

    #[test]
    fn bad_names_and_parameters() {
        assert_eq!(make_algebra("jones", None).unwrap_err(), AlgebraError::UnknownAlgebra("jones".into()));
        assert_eq!(make_algebra("nonlinear", Some(0)).unwrap_err(), AlgebraError::InvalidK(0));
        assert_eq!(make_algebra("nonlinear", None).unwrap_err(), AlgebraError::MissingK);
        assert_eq!(make_algebra("homflypt", Some(2)).unwrap_err(), AlgebraError::UnexpectedK("homflypt".into()));
    }

    #[test]
    fn all_bundled_instances_satisfy_axioms() {
        for name in ALGEBRA_NAMES {
            let k = (name == "nonlinear").then_some(3);
            let alg = make_algebra(name, k).unwrap();
            let report = check_axioms(&alg).unwrap();
            assert!(report.all_passed(), "{report}");
        }
    }

    #[test]
    fn mutated_circ_breaks_unit_axiom() {
        let g = make_algebra("gen-conway", None).unwrap();
        let t = g.vars().clone();
        let broken = g.with_op(
            OpKind::Circ,
            AffineOp {
                left: LaurentPoly::parse(&t, "p").unwrap(),
                right: LaurentPoly::parse(&t, "q").unwrap(),
                constant: LaurentPoly::one(&t),
            },
        );
        let report = check_axioms(&broken).unwrap();
        assert!(!report.verdict(Axiom::B));
        let fail = report.first_failure(Axiom::B).unwrap();
        // a_1 - (p a_1 + q a_2 + 1) = 1 - p - (1 - p) - 1 = -1
        assert_eq!(fail.difference.to_text(), "-1");
    }

    #[test]
    fn formal_roots() {
        let n1 = make_algebra("nonlinear", Some(1)).unwrap();
        let n2 = make_algebra("nonlinear", Some(2)).unwrap();
        let pq = poly(&n1, "p + q");
        assert_eq!(n1.to_formal(&pq).unwrap(), "1*p + 1*q");
        assert_eq!(n2.to_formal(&LaurentPoly::one(n2.vars())).unwrap(), "root(2, 1)");
        assert_eq!(n2.to_formal(&pq).unwrap(), "root(2, 1*p + 1*q)");
        let g = make_algebra("gen-conway", None).unwrap();
        assert!(matches!(g.to_formal(&pq), Err(AlgebraError::NotNonlinear(_))));
    }

    #[test]
    fn nonlinear_ops_are_k_independent() {
        let base = make_algebra("gen-conway", None).unwrap().extended(&["a", "b"]).unwrap();
        let a = poly(&base, "a");
        let b = poly(&base, "b");
        for k in 1..5 {
            let n = make_algebra("nonlinear", Some(k)).unwrap().extended(&["a", "b"]).unwrap();
            for kind in OpKind::ALL {
                assert_eq!(n.apply(kind, &a, &b).unwrap(), base.apply(kind, &a, &b).unwrap());
            }
        }
    }

    #[test]
    fn gen_homflypt_specializes_to_homflypt() {
        let gh = make_algebra("gen-homflypt", None).unwrap().extended(&["a", "b"]).unwrap();
        let h = make_algebra("homflypt", None).unwrap().extended(&["a", "b"]).unwrap();
        let w = poly(&gh, "w");
        for kind in OpKind::ALL {
            let lhs = gh.apply(kind, &poly(&gh, "a"), &poly(&gh, "b")).unwrap();
            let lhs = lhs.substitute("z", &w).unwrap().project(h.vars(), &[("w", "z"), ("z", "z")]).unwrap();
            let rhs = h.apply(kind, &poly(&h, "a"), &poly(&h, "b")).unwrap();
            assert_eq!(lhs, rhs, "{kind:?}");
        }
    }

    #[test]
    fn gen_conway_collapses_when_r_is_q() {
        let g = make_algebra("gen-conway", None).unwrap().extended(&["a", "b"]).unwrap();
        let q = poly(&g, "q");
        let (a, b) = (poly(&g, "a"), poly(&g, "b"));
        let star = g.apply(OpKind::Star, &a, &b).unwrap().substitute("r", &q).unwrap();
        let circ = g.apply(OpKind::Circ, &a, &b).unwrap();
        assert_eq!(star, circ);
        let sslash = g.apply(OpKind::SSlash, &a, &b).unwrap().substitute("r", &q).unwrap();
        assert_eq!(sslash, g.apply(OpKind::Slash, &a, &b).unwrap());
    }
}
