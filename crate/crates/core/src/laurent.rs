//! Exact multivariate Laurent polynomials over the integers.
//!
//! Every value produced by the algebras and the skein engine lives here.
//! A polynomial is a map from exponent vectors to nonzero [`BigInt`]
//! coefficients over a shared, ordered [`VarTable`]; storing only nonzero
//! coefficients makes structural equality coincide with polynomial equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("polynomials are built over different variable tables")]
    VarMismatch,
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("substituting for `{0}` would invert a non-unit")]
    NonUnitInverse(String),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Ordered list of variable names shared by a family of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, LaurentError> {
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if out.iter().any(|m| m == n) {
                return Err(LaurentError::DuplicateVariable(n.to_string()));
            }
            out.push(n.to_string());
        }
        Ok(Arc::new(VarTable { names: out }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// A new table with `extra` appended after the existing variables.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Arc<Self>, LaurentError> {
        let mut all: Vec<&str> = self.names.iter().map(String::as_str).collect();
        all.extend(extra.iter().map(AsRef::as_ref));
        VarTable::new(&all)
    }
}

fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Exponent vector indexed by a [`VarTable`].
///
/// Ordered by total degree first, then by descending lexicographic order
/// of the exponents; this is the printing order of [`LaurentPoly`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[i32]>);

impl Monomial {
    pub fn unit(len: usize) -> Self {
        Monomial(vec![0; len].into_boxed_slice())
    }

    pub fn from_exps(exps: Vec<i32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    fn checked_mul(&self, other: &Monomial) -> Result<Monomial, LaurentError> {
        let exps = self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_add(*b).ok_or(LaurentError::ExponentOverflow))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Monomial::from_exps(exps))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    vars: Arc<VarTable>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self)
    }
}

impl LaurentPoly {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        LaurentPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Arc<VarTable>) -> Self {
        Self::constant(vars, 1)
    }

    pub fn constant(vars: &Arc<VarTable>, c: i64) -> Self {
        let mut p = Self::zero(vars);
        if c != 0 {
            p.terms.insert(Monomial::unit(vars.len()), BigInt::from(c));
        }
        p
    }

    pub fn var(vars: &Arc<VarTable>, name: &str) -> Result<Self, LaurentError> {
        Self::monomial(vars, 1, &[(name, 1)])
    }

    /// `coeff * prod(name^exp)`.
    pub fn monomial(vars: &Arc<VarTable>, coeff: i64, powers: &[(&str, i32)]) -> Result<Self, LaurentError> {
        let mut exps = vec![0i32; vars.len()];
        for &(name, e) in powers {
            let i = vars.index_of(name).ok_or_else(|| LaurentError::UnknownVariable(name.to_string()))?;
            exps[i] = exps[i].checked_add(e).ok_or(LaurentError::ExponentOverflow)?;
        }
        let mut p = Self::zero(vars);
        if coeff != 0 {
            p.terms.insert(Monomial::from_exps(exps), BigInt::from(coeff));
        }
        Ok(p)
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(vars: &Arc<VarTable>, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            if m.0.len() != vars.len() {
                return Err(LaurentError::VarMismatch);
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(m, c)| m.0.iter().all(|&e| e == 0) && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (printing) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &LaurentPoly) -> Result<(), LaurentError> {
        if same_table(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(LaurentError::VarMismatch)
        }
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_vars(other)?;
        let (mut acc, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            acc.add_term(m.clone(), c.clone());
        }
        Ok(acc)
    }

    pub fn checked_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_vars(other)?;
        let mut acc = self.clone();
        for (m, c) in &other.terms {
            acc.add_term(m.clone(), -c);
        }
        Ok(acc)
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_vars(other)?;
        let mut acc = LaurentPoly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.add_term(ma.checked_mul(mb)?, ca * cb);
            }
        }
        Ok(acc)
    }

    /// Non-negative powers of any polynomial; negative powers of unit monomials.
    pub fn checked_pow(&self, e: i32) -> Result<LaurentPoly, LaurentError> {
        if e < 0 {
            let inv = self.unit_inverse().ok_or_else(|| LaurentError::NonUnitInverse("<pow>".into()))?;
            return inv.checked_pow(e.checked_neg().ok_or(LaurentError::ExponentOverflow)?);
        }
        let mut acc = LaurentPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Inverse inside the Laurent ring, which exists only for `±monomial`.
    pub fn unit_inverse(&self) -> Option<LaurentPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        if !c.abs().is_one() {
            return None;
        }
        let exps = m.0.iter().map(|e| e.checked_neg()).collect::<Option<Vec<_>>>()?;
        let mut p = LaurentPoly::zero(&self.vars);
        p.terms.insert(Monomial::from_exps(exps), c.clone());
        Some(p)
    }

    /// Replaces every occurrence of `var` by `value`.
    ///
    /// Negative powers of `var` are only allowed when `value` is a unit
    /// monomial, so the result stays inside the Laurent ring.
    pub fn substitute(&self, var: &str, value: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_vars(value)?;
        let idx = self.vars.index_of(var).ok_or_else(|| LaurentError::UnknownVariable(var.to_string()))?;
        let inverse = value.unit_inverse();
        let mut powers: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        let mut acc = LaurentPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            let pw = match powers.get(&e) {
                Some(p) => p.clone(),
                None => {
                    let p = if e >= 0 {
                        value.checked_pow(e)?
                    } else {
                        let inv = inverse.as_ref().ok_or_else(|| LaurentError::NonUnitInverse(var.to_string()))?;
                        inv.checked_pow(e.checked_neg().ok_or(LaurentError::ExponentOverflow)?)?
                    };
                    powers.insert(e, p.clone());
                    p
                }
            };
            let mut rest = m.0.to_vec();
            rest[idx] = 0;
            let rest = Monomial::from_exps(rest);
            for (pm, pc) in &pw.terms {
                acc.add_term(pm.checked_mul(&rest)?, pc * c);
            }
        }
        Ok(acc)
    }

    /// Re-expresses the polynomial over `target`, mapping variable names through
    /// `rename` first. Variables that occur with a nonzero exponent must exist in
    /// `target`.
    pub fn project(&self, target: &Arc<VarTable>, rename: &[(&str, &str)]) -> Result<LaurentPoly, LaurentError> {
        let mut map = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            let to = rename.iter().find(|(f, _)| f == name).map(|(_, t)| *t).unwrap_or(name.as_str());
            map.push((to.to_string(), target.index_of(to)));
        }
        let mut acc = LaurentPoly::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0i32; target.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].1.ok_or_else(|| LaurentError::UnknownVariable(map[i].0.clone()))?;
                exps[j] = exps[j].checked_add(e).ok_or(LaurentError::ExponentOverflow)?;
            }
            acc.add_term(Monomial::from_exps(exps), c.clone());
        }
        Ok(acc)
    }

    /// Embeds into a table that starts with this polynomial's variables.
    pub fn embed(&self, target: &Arc<VarTable>) -> Result<LaurentPoly, LaurentError> {
        if same_table(&self.vars, target) {
            return Ok(self.clone());
        }
        if target.len() < self.vars.len() || target.names()[..self.vars.len()] != self.vars.names()[..] {
            return Err(LaurentError::VarMismatch);
        }
        let pad = target.len() - self.vars.len();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.0.to_vec();
            e.extend(std::iter::repeat_n(0, pad));
            (Monomial::from_exps(e), c.clone())
        });
        LaurentPoly::from_terms(target, terms)
    }

    /// Multiplies by `coeff * m` without the generic product loop.
    pub fn scale_monomial(&self, coeff: &BigInt, m: &Monomial) -> Result<LaurentPoly, LaurentError> {
        let mut p = LaurentPoly::zero(&self.vars);
        if coeff.is_zero() {
            return Ok(p);
        }
        for (tm, tc) in &self.terms {
            p.terms.insert(tm.checked_mul(m)?, tc * coeff);
        }
        Ok(p)
    }

    /// If this is a single term, returns it.
    pub fn as_single_term(&self) -> Option<(&Monomial, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Canonical text form, e.g. `2*v^2 - 1*v^4 + 1*v^2*z^2`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.terms
            .iter()
            .map(|(m, c)| JsonTerm {
                coeff: serde_json::Number::from_str(&c.to_string()).expect("integer literal"),
                exps: m
                    .0
                    .iter()
                    .zip(self.vars.names())
                    .filter(|(e, _)| **e != 0)
                    .map(|(e, n)| (n.clone(), *e))
                    .collect(),
            })
            .collect()
    }

    pub fn from_json_terms(vars: &Arc<VarTable>, terms: &[JsonTerm]) -> Result<LaurentPoly, LaurentError> {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let c = BigInt::from_str(&t.coeff.to_string()).map_err(|e| LaurentError::Parse(e.to_string()))?;
            let mut exps = vec![0i32; vars.len()];
            for (name, e) in &t.exps {
                let i = vars.index_of(name).ok_or_else(|| LaurentError::UnknownVariable(name.clone()))?;
                exps[i] = *e;
            }
            out.push((Monomial::from_exps(exps), c));
        }
        LaurentPoly::from_terms(vars, out)
    }

    /// Parses the flat term syntax produced by `to_text`, e.g.
    /// `2*v^2 - v^4 + v^2*z^2`. Coefficients are optional; parentheses are not
    /// supported.
    pub fn parse(vars: &Arc<VarTable>, text: &str) -> Result<LaurentPoly, LaurentError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(LaurentError::Parse("empty input".into()));
        }
        let mut acc = LaurentPoly::zero(vars);
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut i = 0;
        let mut chunks = Vec::new();
        while i <= bytes.len() {
            let at_split = i == bytes.len()
                || ((bytes[i] == b'+' || bytes[i] == b'-') && i > start && bytes[i - 1] != b'^');
            if at_split {
                chunks.push(&s[start..i]);
                start = i;
            }
            i += 1;
        }
        for chunk in chunks {
            let (neg, body) = match chunk.as_bytes()[0] {
                b'-' => (true, &chunk[1..]),
                b'+' => (false, &chunk[1..]),
                _ => (false, chunk),
            };
            if body.is_empty() {
                return Err(LaurentError::Parse(format!("dangling sign in `{text}`")));
            }
            let mut coeff = BigInt::one();
            let mut exps = vec![0i32; vars.len()];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(LaurentError::Parse(format!("empty factor in `{text}`")));
                }
                if factor.as_bytes()[0].is_ascii_digit() {
                    let c = BigInt::from_str(factor).map_err(|e| LaurentError::Parse(e.to_string()))?;
                    coeff *= c;
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<i32>().map_err(|e| LaurentError::Parse(e.to_string()))?),
                    None => (factor, 1),
                };
                let idx = vars.index_of(name).ok_or_else(|| LaurentError::UnknownVariable(name.to_string()))?;
                exps[idx] = exps[idx].checked_add(e).ok_or(LaurentError::ExponentOverflow)?;
            }
            if neg {
                coeff = -coeff;
            }
            acc.add_term(Monomial::from_exps(exps), coeff);
        }
        Ok(acc)
    }
}

/// One entry of the JSON term list: `{"coeff": int, "exps": {"v": int, ...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: serde_json::Number,
    pub exps: BTreeMap<String, i32>,
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let abs = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{}", abs)?;
            for (e, name) in m.0.iter().zip(self.vars.names()) {
                match *e {
                    0 => {}
                    1 => write!(f, "*{}", name)?,
                    e => write!(f, "*{}^{}", name, e)?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("LaurentPoly addition")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("LaurentPoly subtraction")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("LaurentPoly multiplication")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pqr() -> Arc<VarTable> {
        VarTable::new(&["p", "q", "r"]).unwrap()
    }

    fn vz() -> Arc<VarTable> {
        VarTable::new(&["v", "z"]).unwrap()
    }

    #[test]
    fn add_distinct_monomials() {
        let t = pqr();
        let s = &LaurentPoly::var(&t, "p").unwrap() + &LaurentPoly::var(&t, "q").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_text(), "1*p + 1*q");
    }

    #[test]
    fn additive_inverse_is_empty() {
        let t = pqr();
        let p = LaurentPoly::var(&t, "p").unwrap();
        let z = &p + &(-&p);
        assert!(z.is_zero());
        assert_eq!(z.to_text(), "0");
    }

    #[test]
    fn trefoil_terms_sum() {
        let t = vz();
        let a = LaurentPoly::monomial(&t, 2, &[("v", 2)]).unwrap();
        let b = LaurentPoly::monomial(&t, 1, &[("v", 2), ("z", 2)]).unwrap();
        let c = LaurentPoly::monomial(&t, -1, &[("v", 4)]).unwrap();
        let s = &(&a + &b) + &c;
        assert_eq!(s, LaurentPoly::parse(&t, "2*v^2 - v^4 + v^2*z^2").unwrap());
        assert_eq!(s.to_text(), "2*v^2 - 1*v^4 + 1*v^2*z^2");
    }

    #[test]
    fn laurent_unit() {
        let t = pqr();
        let p = LaurentPoly::var(&t, "p").unwrap();
        let pinv = LaurentPoly::monomial(&t, 1, &[("p", -1)]).unwrap();
        assert!((&p * &pinv).is_one());
    }

    #[test]
    fn distribution() {
        let t = pqr();
        let lhs = &LaurentPoly::parse(&t, "1 - p").unwrap() * &LaurentPoly::parse(&t, "q^-1").unwrap();
        assert_eq!(lhs, LaurentPoly::parse(&t, "q^-1 - p*q^-1").unwrap());
    }

    #[test]
    fn commutative_product() {
        let t = pqr();
        let a = LaurentPoly::parse(&t, "p + q").unwrap();
        let b = LaurentPoly::parse(&t, "p + r").unwrap();
        assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn mismatched_tables_rejected() {
        let a = LaurentPoly::var(&pqr(), "p").unwrap();
        let b = LaurentPoly::var(&vz(), "v").unwrap();
        assert_eq!(a.checked_add(&b), Err(LaurentError::VarMismatch));
        assert_eq!(a.checked_mul(&b), Err(LaurentError::VarMismatch));
    }

    #[test]
    fn exponent_overflow_is_an_error() {
        let t = pqr();
        let big = LaurentPoly::monomial(&t, 1, &[("p", i32::MAX)]).unwrap();
        let p = LaurentPoly::var(&t, "p").unwrap();
        assert_eq!(big.checked_mul(&p), Err(LaurentError::ExponentOverflow));
    }

    #[test]
    fn substitute_renaming() {
        let t = VarTable::new(&["p", "q", "r", "a", "b"]).unwrap();
        let f = LaurentPoly::parse(&t, "p*a + q*b").unwrap();
        let g = f.substitute("q", &LaurentPoly::var(&t, "r").unwrap()).unwrap();
        assert_eq!(g, LaurentPoly::parse(&t, "p*a + r*b").unwrap());
    }

    #[test]
    fn substitute_into_homflypt_form() {
        let t = VarTable::new(&["p", "q", "v", "w", "a", "b"]).unwrap();
        let f = LaurentPoly::parse(&t, "p*a + q*b").unwrap();
        let g = f
            .substitute("p", &LaurentPoly::parse(&t, "v^2").unwrap())
            .unwrap()
            .substitute("q", &LaurentPoly::parse(&t, "v*w").unwrap())
            .unwrap();
        assert_eq!(g, LaurentPoly::parse(&t, "v^2*a + v*w*b").unwrap());
    }

    #[test]
    fn substitute_zero() {
        let t = VarTable::new(&["p", "q", "z", "a", "b"]).unwrap();
        let f = LaurentPoly::parse(&t, "p*a + q*b + z").unwrap();
        let g = f.substitute("z", &LaurentPoly::zero(&t)).unwrap();
        assert_eq!(g, LaurentPoly::parse(&t, "p*a + q*b").unwrap());
    }

    #[test]
    fn substitute_rejects_non_unit_inverse() {
        let t = pqr();
        let f = LaurentPoly::parse(&t, "q^-1").unwrap();
        let err = f.substitute("q", &LaurentPoly::parse(&t, "p + r").unwrap());
        assert_eq!(err, Err(LaurentError::NonUnitInverse("q".into())));
        let ok = f.substitute("q", &LaurentPoly::parse(&t, "-p^2").unwrap()).unwrap();
        assert_eq!(ok, LaurentPoly::parse(&t, "-p^-2").unwrap());
    }

    #[test]
    fn canonical_order_matches_examples() {
        let t = pqr();
        let a2sq = LaurentPoly::parse(&t, "p^2*q^-2 - 2*p*q^-2 + q^-2").unwrap();
        assert_eq!(a2sq.to_text(), "1*q^-2 - 2*p*q^-2 + 1*p^2*q^-2");
        let hopf = LaurentPoly::parse(&t, "r - p^2*q^-1 + p*q^-1").unwrap();
        assert_eq!(hopf.to_text(), "1*p*q^-1 - 1*p^2*q^-1 + 1*r");
    }

    #[test]
    fn text_round_trip() {
        let t = vz();
        let f = LaurentPoly::parse(&t, "-3*v^-2*z + 7 - v^5").unwrap();
        assert_eq!(LaurentPoly::parse(&t, &f.to_text()).unwrap(), f);
    }

    #[test]
    fn json_round_trip_with_big_coefficients() {
        let t = vz();
        let f = LaurentPoly::parse(&t, "123456789012345678901234567890*v^-3 - 2*z").unwrap();
        let json = serde_json::to_string(&f.to_json_terms()).unwrap();
        assert!(json.contains("\"coeff\":123456789012345678901234567890"));
        let back: Vec<JsonTerm> = serde_json::from_str(&json).unwrap();
        assert_eq!(LaurentPoly::from_json_terms(&t, &back).unwrap(), f);
    }

    #[test]
    fn project_renames_and_checks() {
        let gen = VarTable::new(&["v", "z", "w"]).unwrap();
        let hom = vz();
        let f = LaurentPoly::parse(&gen, "v^2*w - v").unwrap();
        let g = f.project(&hom, &[("w", "z"), ("z", "_unused")]).unwrap();
        assert_eq!(g, LaurentPoly::parse(&hom, "v^2*z - v").unwrap());
        let bad = LaurentPoly::parse(&gen, "w").unwrap().project(&hom, &[]);
        assert_eq!(bad, Err(LaurentError::UnknownVariable("w".into())));
    }
}
