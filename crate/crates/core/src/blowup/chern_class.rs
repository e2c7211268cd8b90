//! Total Chern class of the blow-up: `c(Ỹ) = f^*c(Y) · S` with
//! `S = (1 - t)·Q(t)·Q(0)^{-1}` placed in the exceptional block.

use num_traits::One;

use super::{BlowupElement, BlowupError, BlowupSetup};
use crate::polyring::IntPolynomial;

#[derive(Clone, Debug, PartialEq)]
pub struct ChernResult {
    /// `S(t)`, truncated at the setup's degree bound.
    pub correction: IntPolynomial,
    /// `(c(Y), i^*c(Y)·(S - 1))`.
    pub class: BlowupElement,
}

impl BlowupSetup {
    /// `S(t) = (1 - t)·Q(t)·Q(0)^{-1}` in `A(X)[t]` through degree `D`.
    pub fn chern_correction(&self) -> Result<IntPolynomial, BlowupError> {
        let d = self.truncation();
        let rxt = self.rxt();
        let sig = rxt.sig();
        let q = self.bundle().total_chern();
        let q0 = q.eval_t_zero();
        let one = IntPolynomial::one(sig);
        // Q(0) = 1 + N with N nilpotent up to degree D
        let n = q0.checked_sub(&one)?;
        let mut inv = one.clone();
        let mut power = one.clone();
        for _ in 0..d {
            power = rxt.normal_form(&(-&(&power * &n)).truncate(d))?;
            if power.is_zero() {
                break;
            }
            inv = &inv + &power;
        }
        let t = IntPolynomial::t(sig)?;
        let s = &(&(&one - &t) * &q).truncate(d) * &inv;
        let s = rxt.normal_form(&s.truncate(d))?;
        if !rxt.is_zero(&s.checked_sub(&one)?.eval_t_zero())? {
            return Err(BlowupError::Internal(format!("correction factor {s} does not restrict to 1 at t = 0")));
        }
        Ok(s)
    }

    /// Total Chern class of `Ỹ` from that of `Y`, through degree `D`.
    pub fn total_chern_blowup(&self, cy: &IntPolynomial) -> Result<ChernResult, BlowupError> {
        if cy.sig() != self.ry().sig() {
            return Err(BlowupError::Foreign(format!("`{cy}` is not an element of A(Y)")));
        }
        if !cy.component(0).coeff(&vec![0; cy.sig().len()]).is_one() || cy.component(0).num_terms() != 1 {
            return Err(BlowupError::NotUnital(cy.to_string()));
        }
        let d = self.truncation();
        let s = self.chern_correction()?;
        let one = IntPolynomial::one(self.rxt().sig());
        let cy = self.ry().normal_form(&cy.truncate(d))?;
        let exc = (&self.pull_to_rxt(&cy)? * &s.checked_sub(&one)?).truncate(d);
        let exc = self.rxt().normal_form(&exc)?;
        let class = self.element(cy, exc)?;
        Ok(ChernResult { correction: s, class: self.element_normal_form(&class)? })
    }
}
