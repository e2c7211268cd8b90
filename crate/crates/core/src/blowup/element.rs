//! The pair model `A^k(Ỹ) = (A^k(Y) ⊕ t·A^{k-1}(X̃)) / mixed rows`.
//!
//! Coordinates of a degree-`k` element list the exceptional block first
//! (monomials of `q/t` in `A^{k-1}(X̃)`), then the `A^k(Y)` block.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{BlowupError, BlowupSetup};
use crate::gring::GradedPiece;
use crate::intlat::{hermite_normal_form, smith_invariants, HnfBasis, IntMatrix, SmithForm};
use crate::polyring::IntPolynomial;

/// A pair `(β, q)` with `β ∈ A(Y)` and `q ∈ t·A(X)[t]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupElement {
    y: IntPolynomial,
    exc: IntPolynomial,
}

impl BlowupElement {
    pub fn y_part(&self) -> &IntPolynomial {
        &self.y
    }

    pub fn exc_part(&self) -> &IntPolynomial {
        &self.exc
    }

    pub fn is_zero(&self) -> bool {
        self.y.is_zero() && self.exc.is_zero()
    }

    /// Degrees with a nonzero component, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.y.components().into_keys().chain(self.exc.components().into_keys()).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn component(&self, d: u32) -> BlowupElement {
        BlowupElement { y: self.y.component(d), exc: self.exc.component(d) }
    }

    pub fn scale(&self, c: &BigInt) -> BlowupElement {
        BlowupElement { y: self.y.scale(c), exc: self.exc.scale(c) }
    }
}

impl std::ops::Add for &BlowupElement {
    type Output = BlowupElement;
    fn add(self, o: &BlowupElement) -> BlowupElement {
        BlowupElement { y: &self.y + &o.y, exc: &self.exc + &o.exc }
    }
}

impl std::ops::Sub for &BlowupElement {
    type Output = BlowupElement;
    fn sub(self, o: &BlowupElement) -> BlowupElement {
        BlowupElement { y: &self.y - &o.y, exc: &self.exc - &o.exc }
    }
}

impl std::ops::Neg for &BlowupElement {
    type Output = BlowupElement;
    fn neg(self) -> BlowupElement {
        BlowupElement { y: -&self.y, exc: -&self.exc }
    }
}

impl fmt::Display for BlowupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.y, self.exc)
    }
}

/// Degree-`k` piece of the pair model.
#[derive(Debug)]
pub struct PairPiece {
    degree: u32,
    exc: Option<Arc<GradedPiece>>,
    y: Arc<GradedPiece>,
    lattice: HnfBasis,
    smith: SmithForm,
}

impl PairPiece {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exc_len(&self) -> usize {
        self.exc.as_ref().map_or(0, |p| p.len())
    }

    pub fn y_len(&self) -> usize {
        self.y.len()
    }

    pub fn len(&self) -> usize {
        self.exc_len() + self.y_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lattice(&self) -> &HnfBasis {
        &self.lattice
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    pub(crate) fn exc_piece(&self) -> Option<&Arc<GradedPiece>> {
        self.exc.as_ref()
    }

    pub(crate) fn y_piece(&self) -> &Arc<GradedPiece> {
        &self.y
    }
}

impl BlowupSetup {
    /// Builds `(β, q)`; `q` must be divisible by `t`.
    pub fn element(&self, y: IntPolynomial, exc: IntPolynomial) -> Result<BlowupElement, BlowupError> {
        if y.sig() != self.ry().sig() {
            return Err(BlowupError::Foreign(format!("`{y}` is not an element of A(Y)")));
        }
        if exc.sig() != self.rxt().sig() {
            return Err(BlowupError::Foreign(format!("`{exc}` is not an element of A(X)[t]")));
        }
        if !exc.eval_t_zero().is_zero() {
            return Err(BlowupError::Foreign(format!("exceptional part `{exc}` is not divisible by t")));
        }
        Ok(BlowupElement { y, exc })
    }

    pub fn from_y(&self, y: IntPolynomial) -> Result<BlowupElement, BlowupError> {
        self.element(y, IntPolynomial::zero(self.rxt().sig()))
    }

    pub fn from_exc(&self, exc: IntPolynomial) -> Result<BlowupElement, BlowupError> {
        self.element(IntPolynomial::zero(self.ry().sig()), exc)
    }

    pub fn unit(&self) -> BlowupElement {
        BlowupElement { y: IntPolynomial::one(self.ry().sig()), exc: IntPolynomial::zero(self.rxt().sig()) }
    }

    /// `(0, t)`.
    pub fn t_element(&self) -> BlowupElement {
        BlowupElement { y: IntPolynomial::zero(self.ry().sig()), exc: IntPolynomial::t(self.rxt().sig()).expect("t") }
    }

    /// `[X̃] = (0, -t)`.
    pub fn exceptional_divisor(&self) -> BlowupElement {
        -&self.t_element()
    }

    pub fn pair_piece(&self, k: u32) -> Result<Arc<PairPiece>, BlowupError> {
        self.check_degree(k)?;
        if let Some(p) = self.pair_cache.read().expect("pair cache poisoned").get(&k) {
            return Ok(Arc::clone(p));
        }
        let piece = Arc::new(self.compute_pair_piece(k)?);
        let mut cache = self.pair_cache.write().expect("pair cache poisoned");
        Ok(Arc::clone(cache.entry(k).or_insert(piece)))
    }

    fn compute_pair_piece(&self, k: u32) -> Result<PairPiece, BlowupError> {
        let y = self.ry().piece(k);
        let exc = (k >= 1).then(|| self.exceptional_ring().piece(k - 1));
        let ne = exc.as_ref().map_or(0, |p| p.len());
        let width = ne + y.len();
        let mut rows = IntMatrix::zeros(0, width);
        let pad = |front: usize, v: &[BigInt]| {
            let mut row = vec![BigInt::zero(); width];
            row[front..front + v.len()].clone_from_slice(v);
            row
        };
        if let Some(e) = &exc {
            for r in 0..e.relation_lattice().rank() {
                rows.push_row(pad(0, e.relation_lattice().matrix().row(r)))?;
            }
        }
        for r in 0..y.relation_lattice().rank() {
            rows.push_row(pad(ne, y.relation_lattice().matrix().row(r)))?;
        }
        if let (Some(e), true) = (&exc, k >= self.codim()) {
            for m in self.rx().sig().monomials_of_degree(k - self.codim()) {
                let alpha = IntPolynomial::monomial(self.rx().sig(), m, BigInt::from(1));
                let f_shriek = self.delta() * &alpha.embed(self.rxt().sig())?;
                let push = self.pushforward_apply(&alpha)?;
                let mut row = e.coords(&f_shriek);
                row.extend(y.coords(&push));
                rows.push_row(row)?;
            }
        }
        let lattice = hermite_normal_form(&rows);
        let smith = smith_invariants(lattice.matrix());
        Ok(PairPiece { degree: k, exc, y, lattice, smith })
    }

    /// Coordinates of the degree-`k` component.
    pub fn pair_coords(&self, u: &BlowupElement, k: u32) -> Result<Vec<BigInt>, BlowupError> {
        let piece = self.pair_piece(k)?;
        let mut v = match piece.exc_piece() {
            Some(e) => e.coords(&u.exc.component(k).exact_div_t()?),
            None => Vec::new(),
        };
        v.extend(piece.y_piece().coords(&u.y.component(k)));
        Ok(v)
    }

    fn element_from_coords(&self, piece: &PairPiece, v: &[BigInt]) -> BlowupElement {
        let ne = piece.exc_len();
        let t = IntPolynomial::t(self.rxt().sig()).expect("t");
        let exc = match piece.exc_piece() {
            Some(e) => &e.poly(self.rxt().sig(), &v[..ne]) * &t,
            None => IntPolynomial::zero(self.rxt().sig()),
        };
        BlowupElement { y: piece.y_piece().poly(self.ry().sig(), &v[ne..]), exc }
    }

    /// Canonical representative modulo the full relation lattice.
    pub fn element_normal_form(&self, u: &BlowupElement) -> Result<BlowupElement, BlowupError> {
        let mut out =
            BlowupElement { y: IntPolynomial::zero(self.ry().sig()), exc: IntPolynomial::zero(self.rxt().sig()) };
        for k in u.degrees() {
            let piece = self.pair_piece(k)?;
            let reduced = crate::intlat::reduce_mod_lattice(&self.pair_coords(u, k)?, piece.lattice())?;
            out = &out + &self.element_from_coords(&piece, &reduced);
        }
        Ok(out)
    }

    /// Equality in `A(Ỹ)`.
    pub fn be_eq(&self, u: &BlowupElement, v: &BlowupElement) -> Result<bool, BlowupError> {
        Ok(self.element_normal_form(&(u - v))?.is_zero())
    }

    /// `(β₁,q₁)·(β₂,q₂) = (β₁β₂, i*(β₁)q₂ + i*(β₂)q₁ + q₁q₂)` with each part
    /// reduced in its own ring.
    pub fn be_mul(&self, u: &BlowupElement, v: &BlowupElement) -> Result<BlowupElement, BlowupError> {
        let top = |e: &BlowupElement| e.degrees().last().copied().unwrap_or(0);
        if !u.is_zero() && !v.is_zero() {
            self.check_degree(top(u) + top(v))?;
        }
        let y = self.ry().mul(&u.y, &v.y)?;
        let exc = &(&(&self.pull_to_rxt(&u.y)? * &v.exc) + &(&self.pull_to_rxt(&v.y)? * &u.exc)) + &(&u.exc * &v.exc);
        let t = IntPolynomial::t(self.rxt().sig()).expect("t");
        let exc = &self.exceptional_ring().normal_form(&exc.exact_div_t()?)? * &t;
        Ok(BlowupElement { y, exc })
    }

    /// Smith data of `A^k(Ỹ)` from the pair model.
    pub fn blowup_graded_piece(&self, k: u32) -> Result<SmithForm, BlowupError> {
        Ok(self.pair_piece(k)?.smith().clone())
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn m12_equalities() {
        let s = m12();
        let u = s.from_exc(poly(s.rxt(), "24*t^2")).unwrap();
        let v = s.from_y(poly(s.ry(), "-24*y^2")).unwrap();
        assert!(s.be_eq(&u, &v).unwrap());
        assert!(s.be_eq(&u, &u.clone()).unwrap());
        let y = s.from_y(poly(s.ry(), "y")).unwrap();
        assert!(!s.be_eq(&y, &s.t_element()).unwrap());
    }

    #[test]
    fn products() {
        let s = m12();
        let y = s.from_y(poly(s.ry(), "y")).unwrap();
        let prod = s.be_mul(&y, &s.t_element()).unwrap();
        assert!(prod.is_zero());
        let e = s.exceptional_divisor();
        let sq = s.be_mul(&e, &e).unwrap();
        assert_eq!(sq, s.from_exc(poly(s.rxt(), "t^2")).unwrap());

        let s = toric();
        let h = s.from_y(poly(s.ry(), "h")).unwrap();
        let ht = s.be_mul(&h, &s.t_element()).unwrap();
        assert_eq!(ht, s.from_exc(poly(s.rxt(), "x*t")).unwrap());
        assert!(matches!(
            s.be_mul(&s.from_y(poly(s.ry(), "h^3")).unwrap(), &s.from_y(poly(s.ry(), "h^4")).unwrap()),
            Err(BlowupError::TruncationExceeded { degree: 7, .. })
        ));
    }

    #[test]
    fn m12_pieces() {
        let s = m12();
        let shown: Vec<String> = (0..=8).map(|k| s.blowup_graded_piece(k).unwrap().to_string()).collect();
        // Z[y,t]/(ty, 24(t^2+y^2)): degree 2 is Z^3/<(0,1,0), (24,0,24)>; in degree
        // k >= 3 only t^k, y^k survive, killed by t^{k-2}Q and y^{k-2}Q respectively.
        let mut expected = vec!["Z", "Z^2", "Z + Z/24"];
        expected.extend(["Z/24 + Z/24"; 6]);
        assert_eq!(shown, expected);
    }

    #[test]
    fn element_rejects_foreign_parts() {
        let s = toric();
        assert!(s.element(poly(s.ry(), "h"), poly(s.rxt(), "x")).is_err());
        assert!(s.from_y(poly(s.rxt(), "t")).is_err());
    }
}
