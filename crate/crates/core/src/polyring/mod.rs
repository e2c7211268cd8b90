//! Sparse multivariate polynomials with integer coefficients over a weighted
//! generator signature.
//!
//! Grading is by codimension: every generator carries a positive degree and the
//! degree of a monomial is the weighted sum of its exponents. The reserved
//! generator [`EQUIVARIANT_PARAMETER`] (`t`, degree 1) is always last when
//! present.
//!
//! Terms are printed in the canonical order: higher degree first, then
//! lexicographically with the *last* generator most significant, so `t`
//! leads. Factors inside a monomial are printed in the same priority order,
//! e.g. `24*t^2 + 24*y^2` and `t*y` over the signature `[y, t]`.

pub mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use parse::{parse_polynomial, ParseError};

/// Name of the equivariant parameter.
pub const EQUIVARIANT_PARAMETER: &str = "t";

/// Exponent vector, one entry per generator of the signature.
pub type Monomial = Vec<u32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: String, right: String },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have positive degree")]
    NonPositiveDegree(String),
    #[error("the equivariant parameter `t` must be the last generator and have degree 1")]
    MisplacedParameter,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("no image given for generator `{0}`")]
    MissingImage(String),
    #[error("not divisible by t: term `{0}` has no t factor")]
    NotDivisible(String),
    #[error("signature has no equivariant parameter `t`")]
    NoParameter,
    #[error("generator `{name}` has degree {found} in the target but {expected} in the source")]
    DegreeConflict { name: String, expected: u32, found: u32 },
}

/// Ordered generator names with their degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenSignature {
    names: Vec<String>,
    degrees: Vec<u32>,
}

impl GenSignature {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, u32)>) -> Result<Self, PolyError> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for (name, deg) in gens {
            let name = name.into();
            if names.contains(&name) {
                return Err(PolyError::DuplicateGenerator(name));
            }
            if deg == 0 {
                return Err(PolyError::NonPositiveDegree(name));
            }
            names.push(name);
            degrees.push(deg);
        }
        if let Some(i) = names.iter().position(|n| n == EQUIVARIANT_PARAMETER) {
            if i + 1 != names.len() || degrees[i] != 1 {
                return Err(PolyError::MisplacedParameter);
            }
        }
        Ok(GenSignature { names, degrees })
    }

    /// The signature of `Z` (no generators).
    pub fn point() -> Self {
        GenSignature { names: Vec::new(), degrees: Vec::new() }
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

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn t_index(&self) -> Option<usize> {
        match self.names.last() {
            Some(n) if n == EQUIVARIANT_PARAMETER => Some(self.names.len() - 1),
            _ => None,
        }
    }

    /// This signature with extra generators appended.
    pub fn extended<S: Into<String> + Clone>(&self, extra: &[(S, u32)]) -> Result<Self, PolyError> {
        let gens = self
            .names
            .iter()
            .cloned()
            .zip(self.degrees.iter().copied())
            .chain(extra.iter().map(|(n, d)| (n.clone().into(), *d)));
        GenSignature::new(gens)
    }

    /// This signature with `t` appended.
    pub fn with_t(&self) -> Result<Self, PolyError> {
        self.extended(&[(EQUIVARIANT_PARAMETER, 1)])
    }

    pub fn monomial_degree(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.degrees).map(|(e, d)| e * d).sum()
    }

    /// Canonical order: degree first, then lexicographic from the last generator.
    pub fn cmp_monomials(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.monomial_degree(a).cmp(&self.monomial_degree(b)).then_with(|| a.iter().rev().cmp(b.iter().rev()))
    }

    /// Every monomial of weighted degree `d`, in descending canonical order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.len()];
        self.fill_monomials(self.len(), d, &mut cur, &mut out);
        out
    }

    // Fills exponents from the most significant generator (the last) down, so
    // the output comes out in descending order.
    fn fill_monomials(&self, k: usize, rem: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if k == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let i = k - 1;
        let deg = self.degrees[i];
        for e in (0..=rem / deg).rev() {
            cur[i] = e;
            self.fill_monomials(i, rem - e * deg, cur, out);
        }
        cur[i] = 0;
    }

    pub fn display_monomial(&self, m: &[u32]) -> String {
        let mut parts = Vec::new();
        for i in (0..self.len()).rev() {
            match m[i] {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                e => parts.push(format!("{}^{}", self.names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for GenSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.names.iter().zip(&self.degrees).map(|(n, d)| format!("{n}:{d}")).collect();
        write!(f, "[{}]", gens.join(", "))
    }
}

/// A polynomial with integer coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    sig: Arc<GenSignature>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPolynomial {
    pub fn zero(sig: &Arc<GenSignature>) -> Self {
        IntPolynomial { sig: Arc::clone(sig), terms: BTreeMap::new() }
    }

    pub fn constant(sig: &Arc<GenSignature>, c: impl Into<BigInt>) -> Self {
        Self::monomial(sig, vec![0; sig.len()], c.into())
    }

    pub fn one(sig: &Arc<GenSignature>) -> Self {
        Self::constant(sig, 1)
    }

    pub fn monomial(sig: &Arc<GenSignature>, exps: Monomial, coeff: BigInt) -> Self {
        assert_eq!(exps.len(), sig.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        IntPolynomial { sig: Arc::clone(sig), terms }
    }

    pub fn generator(sig: &Arc<GenSignature>, name: &str) -> Result<Self, PolyError> {
        let i = sig.index_of(name).ok_or_else(|| PolyError::UnknownGenerator(name.to_string()))?;
        let mut exps = vec![0; sig.len()];
        exps[i] = 1;
        Ok(Self::monomial(sig, exps, BigInt::one()))
    }

    /// The parameter `t`; fails when the signature does not carry it.
    pub fn t(sig: &Arc<GenSignature>) -> Result<Self, PolyError> {
        if sig.t_index().is_none() {
            return Err(PolyError::NoParameter);
        }
        Self::generator(sig, EQUIVARIANT_PARAMETER)
    }

    pub fn from_terms(sig: &Arc<GenSignature>, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero(sig);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn sig(&self) -> &Arc<GenSignature> {
        &self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Terms in descending canonical order.
    pub fn terms(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| self.sig.cmp_monomials(b.0, a.0));
        v
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        debug_assert_eq!(m.len(), self.sig.len());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_sig(&self, other: &IntPolynomial) -> Result<(), PolyError> {
        if self.sig != other.sig {
            return Err(PolyError::SignatureMismatch { left: self.sig.to_string(), right: other.sig.to_string() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
        self.check_sig(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
        self.check_sig(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    /// Exact product.
    pub fn multiply(&self, other: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
        self.check_sig(other)?;
        let mut out = Self::zero(&self.sig);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntPolynomial {
        if c.is_zero() {
            return Self::zero(&self.sig);
        }
        IntPolynomial {
            sig: Arc::clone(&self.sig),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> IntPolynomial {
        let mut acc = Self::one(&self.sig);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Weighted degree of the highest-degree term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.sig.monomial_degree(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| self.sig.monomial_degree(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Homogeneous components keyed by degree; zero components omitted.
    pub fn components(&self) -> BTreeMap<u32, IntPolynomial> {
        let mut out: BTreeMap<u32, IntPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = self.sig.monomial_degree(m);
            out.entry(d).or_insert_with(|| Self::zero(&self.sig)).add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn component(&self, d: u32) -> IntPolynomial {
        IntPolynomial {
            sig: Arc::clone(&self.sig),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.sig.monomial_degree(m) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops every component of degree above `d`.
    pub fn truncate(&self, d: u32) -> IntPolynomial {
        IntPolynomial {
            sig: Arc::clone(&self.sig),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.sig.monomial_degree(m) <= d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Evaluates every generator at its image (indexed like the signature).
    /// All images must share `target`.
    pub fn substitute_indexed(
        &self,
        target: &Arc<GenSignature>,
        images: &[IntPolynomial],
    ) -> Result<IntPolynomial, PolyError> {
        assert_eq!(images.len(), self.sig.len(), "one image per generator");
        for img in images {
            if img.sig != *target {
                return Err(PolyError::SignatureMismatch { left: img.sig.to_string(), right: target.to_string() });
            }
        }
        let mut powers: HashMap<(usize, u32), IntPolynomial> = HashMap::new();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers.entry((i, e)).or_insert_with(|| images[i].pow(e));
                term = &term * &*p;
                if term.is_zero() {
                    break;
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Evaluates generators by name. Every generator of the source signature
    /// needs an image.
    pub fn substitute(
        &self,
        target: &Arc<GenSignature>,
        images: &HashMap<String, IntPolynomial>,
    ) -> Result<IntPolynomial, PolyError> {
        let imgs = self
            .sig
            .names()
            .iter()
            .map(|n| images.get(n).cloned().ok_or_else(|| PolyError::MissingImage(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.substitute_indexed(target, &imgs)
    }

    /// Re-expresses the polynomial over `target`, matching generators by name.
    /// Generators absent from `target` must not occur in any term.
    pub fn embed(&self, target: &Arc<GenSignature>) -> Result<IntPolynomial, PolyError> {
        if self.sig == *target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.sig.len());
        for (name, &deg) in self.sig.names.iter().zip(&self.sig.degrees) {
            match target.index_of(name) {
                Some(j) if target.degrees[j] != deg => {
                    return Err(PolyError::DegreeConflict {
                        name: name.clone(),
                        expected: deg,
                        found: target.degrees[j],
                    })
                }
                j => map.push(j),
            }
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &x) in m.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] = x,
                    None => return Err(PolyError::UnknownGenerator(self.sig.names[i].clone())),
                }
            }
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// `f / t`, requiring every term to carry a factor of `t`.
    pub fn exact_div_t(&self) -> Result<IntPolynomial, PolyError> {
        let ti = self.sig.t_index().ok_or(PolyError::NoParameter)?;
        let mut out = Self::zero(&self.sig);
        for (m, c) in &self.terms {
            if m[ti] == 0 {
                return Err(PolyError::NotDivisible(self.sig.display_monomial(m)));
            }
            let mut e = m.clone();
            e[ti] -= 1;
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// `f` with `t ↦ 0`; the identity when the signature has no `t`.
    pub fn eval_t_zero(&self) -> IntPolynomial {
        match self.sig.t_index() {
            None => self.clone(),
            Some(ti) => IntPolynomial {
                sig: Arc::clone(&self.sig),
                terms: self.terms.iter().filter(|(m, _)| m[ti] == 0).map(|(m, c)| (m.clone(), c.clone())).collect(),
            },
        }
    }

    /// Coefficients `f = Σ_j c_j t^j`, each `c_j` t-free and over the same
    /// signature. Empty for zero.
    pub fn t_coefficients(&self) -> Result<Vec<IntPolynomial>, PolyError> {
        let ti = self.sig.t_index().ok_or(PolyError::NoParameter)?;
        let mut out: Vec<IntPolynomial> = Vec::new();
        for (m, c) in &self.terms {
            let j = m[ti] as usize;
            while out.len() <= j {
                out.push(Self::zero(&self.sig));
            }
            let mut e = m.clone();
            e[ti] = 0;
            out[j].add_term(e, c.clone());
        }
        Ok(out)
    }

    /// Smallest exponent of `t` among the terms (`None` for zero).
    pub fn min_t_exponent(&self) -> Option<u32> {
        let ti = self.sig.t_index()?;
        self.terms.keys().map(|m| m[ti]).min()
    }
}

impl<'a> std::ops::Add<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    /// Panics on signature mismatch; use [`IntPolynomial::checked_add`] otherwise.
    fn add(self, rhs: &'a IntPolynomial) -> IntPolynomial {
        self.checked_add(rhs).expect("polynomial signatures differ")
    }
}

impl<'a> std::ops::Sub<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &'a IntPolynomial) -> IntPolynomial {
        self.checked_sub(rhs).expect("polynomial signatures differ")
    }
}

impl<'a> std::ops::Mul<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &'a IntPolynomial) -> IntPolynomial {
        self.multiply(rhs).expect("polynomial signatures differ")
    }
}

impl std::ops::Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        self.scale(&BigInt::from(-1))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let is_const = m.iter().all(|&e| e == 0);
            if is_const {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", self.sig.display_monomial(m))?;
            } else {
                write!(f, "{}*{}", mag, self.sig.display_monomial(m))?;
            }
        }
        Ok(())
    }
}
