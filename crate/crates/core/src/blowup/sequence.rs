//! Degreewise check of the key sequence
//!
//! ```text
//! A^{k-d}(X) --(f^!, -i_*)--> A^{k-1}(X̃) ⊕ A^k(Y) --(j_* + f^*)--> A^k(Ỹ) --> 0
//! ```
//!
//! against an independently derived presentation of `A(Ỹ)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{BlowupError, BlowupSetup, Presentation, PresentationKind};
use crate::intlat::{hermite_normal_form, left_kernel, HnfBasis, IntMatrix};
use crate::polyring::IntPolynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub degree: u32,
    pub target: PresentationKind,
    pub surjective: bool,
    pub well_defined: bool,
    pub exact: bool,
    /// Rank of `ker(j_* + f^*)` inside the domain coordinates.
    pub kernel_rank: usize,
    /// Rank of `im(f^!, -i_*)` plus the domain relations.
    pub image_rank: usize,
}

impl ExactnessReport {
    pub fn holds(&self) -> bool {
        self.surjective && self.well_defined && self.exact
    }
}

impl fmt::Display for ExactnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            return write!(f, "degree {}: exact ({} presentation)", self.degree, self.target);
        }
        let mut what = Vec::new();
        if !self.surjective {
            what.push("j_* + f^* is not surjective".to_string());
        }
        if !self.well_defined {
            what.push("j_* + f^* does not respect the relations of its domain".to_string());
        }
        if !self.exact {
            what.push(format!(
                "kernel of j_* + f^* (rank {}) differs from the image of (f^!, -i_*) (rank {})",
                self.kernel_rank, self.image_rank
            ));
        }
        write!(
            f,
            "degree {}: NOT exact ({} presentation): {}. The sequence is exact for every valid setup, so this is an implementation bug.",
            self.degree,
            self.target,
            what.join("; ")
        )
    }
}

fn spans_everything(h: &HnfBasis) -> bool {
    h.is_full() && (0..h.rank()).all(|r| h.matrix().get(r, h.pivots()[r]) == &BigInt::from(1))
}

impl BlowupSetup {
    /// Verifies degree `k` against the automatically chosen presentation.
    pub fn verify_key_sequence(&self, k: u32) -> Result<ExactnessReport, BlowupError> {
        let pres = self.presentation()?;
        self.verify_key_sequence_with(&pres, k)
    }

    pub fn verify_key_sequence_with(&self, pres: &Presentation, k: u32) -> Result<ExactnessReport, BlowupError> {
        self.check_degree(k)?;
        let target = pres.ring.piece(k);
        let y = self.ry().piece(k);
        let exc = (k >= 1).then(|| self.exceptional_ring().piece(k - 1));
        let ne = exc.as_ref().map_or(0, |p| p.len());
        let width = ne + y.len();
        let pad = |front: usize, v: &[BigInt]| {
            let mut row = vec![BigInt::zero(); width];
            row[front..front + v.len()].clone_from_slice(v);
            row
        };

        // j_* + f^*, one row per domain basis vector
        let mut psi = IntMatrix::zeros(0, target.len());
        if let Some(e) = &exc {
            let t = IntPolynomial::t(self.rxt().sig())?;
            for m in e.monomials() {
                let x = IntPolynomial::monomial(self.rxt().sig(), m.clone(), BigInt::from(1));
                let j = -&self.lift_exceptional(pres, &(&x * &t))?;
                psi.push_row(target.coords(&j))?;
            }
        }
        for m in y.monomials() {
            let b = IntPolynomial::monomial(self.ry().sig(), m.clone(), BigInt::from(1));
            psi.push_row(target.coords(&b.embed(pres.ring.sig())?))?;
        }
        let target_lattice = target.relation_lattice();

        let mut domain = IntMatrix::zeros(0, width);
        if let Some(e) = &exc {
            for r in 0..e.relation_lattice().rank() {
                domain.push_row(pad(0, e.relation_lattice().matrix().row(r)))?;
            }
        }
        for r in 0..y.relation_lattice().rank() {
            domain.push_row(pad(ne, y.relation_lattice().matrix().row(r)))?;
        }

        let surjective = spans_everything(&hermite_normal_form(&psi.stack(target_lattice.matrix())?));
        let mut well_defined = true;
        for r in 0..domain.rows() {
            let img = psi.left_mul_vec(domain.row(r))?;
            if !target_lattice.contains(&img)? {
                well_defined = false;
                break;
            }
        }

        let kernel = {
            let lk = left_kernel(&psi.stack(target_lattice.matrix())?);
            let mut proj = IntMatrix::zeros(0, width);
            for r in 0..lk.rank() {
                proj.push_row(lk.matrix().row(r)[..width].to_vec())?;
            }
            hermite_normal_form(&proj)
        };

        let mut image = domain;
        if let (Some(e), true) = (&exc, k >= self.codim()) {
            for m in self.rx().sig().monomials_of_degree(k - self.codim()) {
                let alpha = IntPolynomial::monomial(self.rx().sig(), m, BigInt::from(1));
                let f_shriek = self.delta() * &alpha.embed(self.rxt().sig())?;
                let push = -&self.pushforward_apply(&alpha)?;
                let mut row = e.coords(&f_shriek);
                row.extend(y.coords(&push));
                image.push_row(row)?;
            }
        }
        let image = hermite_normal_form(&image);

        Ok(ExactnessReport {
            degree: k,
            target: pres.kind,
            surjective,
            well_defined,
            exact: image == kernel,
            kernel_rank: kernel.rank(),
            image_rank: image.rank(),
        })
    }
}
