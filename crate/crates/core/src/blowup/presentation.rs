//! Ring presentations of `A(Ỹ)` derived from the pair model.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::{BlowupElement, BlowupError, BlowupSetup};
use crate::gring::{ideal_rows, GradedRing};
use crate::intlat::{hermite_normal_form, left_kernel, IntMatrix};
use crate::polyring::{GenSignature, IntPolynomial, Monomial, PolyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresentationKind {
    /// `A(Y)[t] / (t·ker i^*, Q(t))`, available when `i^*` is surjective.
    Keel,
    /// Generated by `A(Y)`, `t` and `t·μ_l`, with relations found degree by
    /// degree; only certified through the truncation degree.
    General,
}

impl fmt::Display for PresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationKind::Keel => write!(f, "keel"),
            PresentationKind::General => write!(f, "general"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub kind: PresentationKind,
    pub ring: Arc<GradedRing>,
    /// Degree through which the relations are known to be complete.
    pub valid_through: u32,
    /// Candidate relations that were implied by the kept ones.
    pub redundant: Vec<IntPolynomial>,
    /// Image of `(0, t·μ_l)` for each module generator.
    exc_images: Vec<IntPolynomial>,
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring)
    }
}

/// Keeps each relation unless it already lies in the ideal of the kept ones
/// (tested in its own degree). Stable in degree order.
fn minimize(
    sig: &Arc<GenSignature>,
    mut rels: Vec<IntPolynomial>,
) -> Result<(Vec<IntPolynomial>, Vec<IntPolynomial>), BlowupError> {
    rels.sort_by_key(|r| r.degree().unwrap_or(0));
    let mut kept: Vec<IntPolynomial> = Vec::new();
    let mut dropped = Vec::new();
    for r in rels {
        if r.is_zero() || kept.contains(&r) {
            continue;
        }
        if GradedRing::ideal_contains(sig, &kept, &r)? {
            dropped.push(r);
        } else {
            kept.push(r);
        }
    }
    Ok((kept, dropped))
}

impl BlowupSetup {
    /// First degree `≤ D` where `i^*` misses something, with a witness.
    pub fn surjectivity_failure(&self) -> Option<(u32, IntPolynomial)> {
        (0..=self.truncation()).find_map(|e| self.pullback().surjectivity_witness(e).map(|w| (e, w)))
    }

    pub fn is_pullback_surjective(&self) -> bool {
        self.surjectivity_failure().is_none()
    }

    /// `A(Y)[t] / (rels_Y, t·ker i^*, P̃(t) - P̃(0) + [X])`, with redundant
    /// relations removed.
    pub fn keel_presentation(&self) -> Result<Presentation, BlowupError> {
        if let Some((degree, w)) = self.surjectivity_failure() {
            return Err(BlowupError::NotSurjective { degree, witness: w.to_string() });
        }
        let sig = Arc::new(self.ry().sig().with_t()?);
        let t = IntPolynomial::t(&sig)?;
        let mut rels: Vec<IntPolynomial> =
            self.ry().relations().iter().map(|r| r.embed(&sig)).collect::<Result<_, _>>()?;
        for e in 0..self.truncation() {
            for k in self.pullback().kernel_in_degree(e) {
                rels.push(&t * &k.embed(&sig)?);
            }
        }
        let mut q = self.fundamental_class().embed(&sig)?;
        for (j, c) in self.top_chern().t_coefficients()?.iter().enumerate().skip(1) {
            let pre = self.preimage(c)?;
            q = &q + &(&pre.embed(&sig)? * &t.pow(j as u32));
        }
        rels.push(q);
        let (kept, redundant) = minimize(&sig, rels)?;
        let ring = Arc::new(GradedRing::new(Arc::clone(&sig), kept)?);
        let exc_images = self
            .pushforward()
            .generators()
            .iter()
            .map(|mu| Ok(&t * &self.preimage(&mu.embed(self.rxt().sig())?)?.embed(&sig)?))
            .collect::<Result<Vec<_>, BlowupError>>()?;
        Ok(Presentation { kind: PresentationKind::Keel, ring, valid_through: self.truncation(), redundant, exc_images })
    }

    /// Canonical `i^*`-preimage of a `t`-free element of `A(X)[t]`.
    fn preimage(&self, c: &IntPolynomial) -> Result<IntPolynomial, BlowupError> {
        let c = c.embed(self.rx().sig())?;
        self.pullback()
            .preimage(&c)?
            .ok_or_else(|| BlowupError::NotSurjective { degree: c.degree().unwrap_or(0), witness: c.to_string() })
    }

    /// Names of the extra generators `t·μ_l` (`l ≥ 2`).
    pub fn exceptional_generator_names(&self) -> Vec<String> {
        self.pushforward().names().iter().skip(1).map(|n| format!("t_{n}")).collect()
    }

    /// Presentation on the generators of `A(Y)`, `t·μ_l` for `l ≥ 2`, and
    /// `t`, with a minimal set of relations through degree `D`.
    pub fn general_presentation(&self) -> Result<Presentation, BlowupError> {
        let ny = self.ry().sig().len();
        let mut gens: Vec<(String, u32)> =
            self.ry().sig().names().iter().cloned().zip(self.ry().sig().degrees().iter().copied()).collect();
        let extra = self.exceptional_generator_names();
        for (name, mu) in extra.iter().zip(&self.pushforward().generators()[1..]) {
            gens.push((name.clone(), mu.degree().unwrap_or(0) + 1));
        }
        gens.push(("t".to_string(), 1));
        let sig = Arc::new(GenSignature::new(gens).map_err(|e| match e {
            PolyError::DuplicateGenerator(n) => BlowupError::NameCollision(n),
            other => other.into(),
        })?);
        let mus: Vec<IntPolynomial> =
            self.pushforward().generators().iter().map(|m| m.embed(self.rxt().sig())).collect::<Result<_, _>>()?;
        let t_x = IntPolynomial::t(self.rxt().sig())?;

        let mut kept: Vec<IntPolynomial> = Vec::new();
        for k in 1..=self.truncation() {
            let monos = sig.monomials_of_degree(k);
            let index: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let pair = self.pair_piece(k)?;
            let mut stacked = IntMatrix::zeros(0, pair.len());
            for m in &monos {
                let img = self.generator_monomial_image(m, ny, &mus, &t_x)?;
                stacked.push_row(self.pair_coords(&img, k)?)?;
            }
            let span = hermite_normal_form(&stacked.stack(pair.lattice().matrix())?);
            if !(span.rank() == pair.len()
                && (0..span.rank()).all(|r| span.matrix().get(r, span.pivots()[r]) == &BigInt::from(1)))
            {
                return Err(BlowupError::Internal(format!(
                    "generators of the general presentation do not span degree {k}"
                )));
            }
            let stacked = stacked.stack(pair.lattice().matrix())?;
            let kernel = left_kernel(&stacked);
            let mut ker = IntMatrix::zeros(0, monos.len());
            for r in 0..kernel.rank() {
                ker.push_row(kernel.matrix().row(r)[..monos.len()].to_vec())?;
            }
            let ker = hermite_normal_form(&ker);
            let mut current = hermite_normal_form(&ideal_rows(&sig, &kept, k, &index));
            for r in 0..ker.rank() {
                let row = ker.matrix().row(r);
                if current.contains(row)? {
                    continue;
                }
                let rel = IntPolynomial::from_terms(&sig, monos.iter().cloned().zip(row.iter().cloned()));
                kept.push(rel);
                current = hermite_normal_form(&ideal_rows(&sig, &kept, k, &index));
            }
        }
        let ring = Arc::new(GradedRing::new(Arc::clone(&sig), kept)?);
        let t = IntPolynomial::t(&sig)?;
        let mut exc_images = vec![t];
        for name in &extra {
            exc_images.push(IntPolynomial::generator(&sig, name)?);
        }
        Ok(Presentation {
            kind: PresentationKind::General,
            ring,
            valid_through: self.truncation(),
            redundant: Vec::new(),
            exc_images,
        })
    }

    /// Pair-model image of a monomial in the general generators.
    fn generator_monomial_image(
        &self,
        m: &[u32],
        ny: usize,
        mus: &[IntPolynomial],
        t_x: &IntPolynomial,
    ) -> Result<BlowupElement, BlowupError> {
        let mut b = vec![0; ny];
        b.copy_from_slice(&m[..ny]);
        let beta = IntPolynomial::monomial(self.ry().sig(), b, BigInt::from(1));
        let e_exps = &m[ny..m.len() - 1];
        let t_exp = m[m.len() - 1];
        let r = t_exp + e_exps.iter().sum::<u32>();
        if r == 0 {
            return self.from_y(beta);
        }
        let mut q = &self.pull_to_rxt(&beta)? * &t_x.pow(r);
        for (e, mu) in e_exps.iter().zip(&mus[1..]) {
            q = &q * &mu.pow(*e);
        }
        self.from_exc(q)
    }

    /// Automatic choice: Keel when `i^*` is surjective through `D`.
    pub fn presentation(&self) -> Result<Presentation, BlowupError> {
        if self.is_pullback_surjective() {
            self.keel_presentation()
        } else {
            self.general_presentation()
        }
    }

    /// Image of `q ∈ t·A(X)[t]` in a presentation: `t^j·i^*(β)·μ_l` goes to
    /// `β·t^{j-1}·(image of t·μ_l)`.
    pub fn lift_exceptional(&self, pres: &Presentation, q: &IntPolynomial) -> Result<IntPolynomial, BlowupError> {
        let sig = pres.ring.sig();
        let t = IntPolynomial::t(sig)?;
        let mut out = IntPolynomial::zero(sig);
        for (j, c) in q.t_coefficients()?.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j == 0 {
                return Err(BlowupError::Foreign(format!("`{q}` is not divisible by t")));
            }
            let betas = self.pushforward().decompose(self.pullback(), &c.embed(self.rx().sig())?)?;
            for (beta, img) in betas.iter().zip(&pres.exc_images) {
                out = &out + &(&(&beta.embed(sig)? * &t.pow(j as u32 - 1)) * img);
            }
        }
        Ok(pres.ring.normal_form(&out)?)
    }

    /// Image of a pair-model element in a presentation.
    pub fn to_presentation(&self, pres: &Presentation, u: &BlowupElement) -> Result<IntPolynomial, BlowupError> {
        let y = u.y_part().embed(pres.ring.sig())?;
        let lifted = self.lift_exceptional(pres, u.exc_part())?;
        Ok(pres.ring.normal_form(&(&y + &lifted))?)
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn keel_examples() {
        let s = m12();
        let k = s.keel_presentation().unwrap();
        assert_eq!(k.to_string(), "Z[y,t]/(t*y, 24*t^2 + 24*y^2)");
        assert!(k.redundant.contains(&poly(&k.ring, "24*y^3")));

        assert_eq!(p11().keel_presentation().unwrap().to_string(), "Z[y,t]/(t*y, t^2 + y^2)");
        assert_eq!(ptad().keel_presentation().unwrap().to_string(), "Z[x1,x2,t]/(6*t^2 + 2*t*x2 + 3*t*x1 + x2*x1)");
        assert!(matches!(conic().keel_presentation(), Err(BlowupError::NotSurjective { degree: 1, .. })));
    }

    #[test]
    fn general_matches_keel_and_pairs() {
        for s in [m12(), toric(), p11(), ptad()] {
            let keel = s.keel_presentation().unwrap();
            let general = s.general_presentation().unwrap();
            for k in 0..=s.truncation() {
                let pair = s.blowup_graded_piece(k).unwrap();
                assert!(keel.ring.smith(k).same_group(&pair), "keel degree {k}");
                assert!(general.ring.smith(k).same_group(&pair), "general degree {k}");
            }
        }
    }

    #[test]
    fn conic_general_presentation() {
        let s = conic();
        let g = s.general_presentation().unwrap();
        assert_eq!(g.ring.sig().names(), &["y", "t_mu2", "t"]);
        for k in 0..=s.truncation() {
            assert!(g.ring.smith(k).same_group(&s.blowup_graded_piece(k).unwrap()), "degree {k}");
        }
    }

    #[test]
    fn elements_map_into_presentations() {
        let s = m12();
        let k = s.keel_presentation().unwrap();
        let e = s.exceptional_divisor();
        assert_eq!(s.to_presentation(&k, &e).unwrap(), poly(&k.ring, "-t"));
        let u = s.from_exc(poly(s.rxt(), "24*t^2")).unwrap();
        assert_eq!(s.to_presentation(&k, &u).unwrap(), k.ring.normal_form(&poly(&k.ring, "-24*y^2")).unwrap());
    }
}
