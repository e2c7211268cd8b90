//! Equivariant Chern classes of split weighted bundles.
//!
//! A bundle is given by its homogeneous pieces `E_i`, each with a positive
//! weight `a_i`, a rank `n_i`, and ordinary Chern classes `c_1..c_{n_i}` in
//! the base ring. The `G_m`-equivariant classes live in `A(X)[t]`:
//!
//! ```text
//! P(t) = prod_i sum_k c_{n_i - k}(E_i) a_i^k t^k
//! Q(t) = prod_i sum_k c_k(E_i) (1 + a_i t)^{n_i - k}
//! ```

use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::gring::{GradedRing, RingError};
use crate::polyring::{IntPolynomial, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChernError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("bundle component {0} has weight 0; weights must be positive")]
    NonPositiveWeight(usize),
    #[error("bundle component {0} has rank 0")]
    ZeroRank(usize),
    #[error("bundle component {index} has rank {rank} but {given} Chern classes")]
    TooManyChernClasses { index: usize, rank: u32, given: usize },
    #[error("c_{k} of bundle component {index} must be homogeneous of degree {k}, got `{class}`")]
    ChernDegree { index: usize, k: usize, class: String },
}

impl From<PolyError> for ChernError {
    fn from(e: PolyError) -> Self {
        ChernError::Ring(e.into())
    }
}

/// One homogeneous piece `E_i`. Missing trailing Chern classes are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleComponent {
    pub weight: u32,
    pub rank: u32,
    pub chern: Vec<IntPolynomial>,
}

impl BundleComponent {
    /// A piece with vanishing Chern classes.
    pub fn trivial(weight: u32, rank: u32) -> Self {
        BundleComponent { weight, rank, chern: Vec::new() }
    }

    /// `c_k` with `c_0 = 1`.
    fn class(&self, k: usize, one: &IntPolynomial) -> IntPolynomial {
        match k {
            0 => one.clone(),
            _ => self.chern.get(k - 1).cloned().unwrap_or_else(|| IntPolynomial::zero(one.sig())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightedBundle {
    base: Arc<GradedRing>,
    ext: Arc<GradedRing>,
    components: Vec<BundleComponent>,
}

impl WeightedBundle {
    pub fn new(base: Arc<GradedRing>, components: Vec<BundleComponent>) -> Result<Self, ChernError> {
        let mut comps = Vec::with_capacity(components.len());
        for (index, mut c) in components.into_iter().enumerate() {
            if c.weight == 0 {
                return Err(ChernError::NonPositiveWeight(index));
            }
            if c.rank == 0 {
                return Err(ChernError::ZeroRank(index));
            }
            if c.chern.len() > c.rank as usize {
                return Err(ChernError::TooManyChernClasses { index, rank: c.rank, given: c.chern.len() });
            }
            for (i, cl) in c.chern.iter_mut().enumerate() {
                *cl = base.normal_form(&cl.embed(base.sig())?)?;
                if !cl.is_zero() && !(cl.is_homogeneous() && cl.degree() == Some(i as u32 + 1)) {
                    return Err(ChernError::ChernDegree { index, k: i + 1, class: cl.to_string() });
                }
            }
            comps.push(c);
        }
        let ext = Arc::new(base.adjoin_t()?);
        Ok(WeightedBundle { base, ext, components: comps })
    }

    pub fn base(&self) -> &Arc<GradedRing> {
        &self.base
    }

    /// `A(X)[t]` without the bundle relation.
    pub fn extended_base(&self) -> &Arc<GradedRing> {
        &self.ext
    }

    pub fn components(&self) -> &[BundleComponent] {
        &self.components
    }

    pub fn rank(&self) -> u32 {
        self.components.iter().map(|c| c.rank).sum()
    }

    /// Direct sum of two bundles over the same base.
    pub fn direct_sum(&self, other: &WeightedBundle) -> Result<WeightedBundle, ChernError> {
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().cloned());
        WeightedBundle::new(Arc::clone(&self.base), comps)
    }

    fn lift(&self, c: &IntPolynomial) -> IntPolynomial {
        c.embed(self.ext.sig()).expect("base embeds in base[t]")
    }

    /// `P(t)`, homogeneous of degree `rank`, in normal form over `A(X)[t]`.
    pub fn top_chern(&self) -> IntPolynomial {
        let sig = self.ext.sig();
        let one = IntPolynomial::one(self.base.sig());
        let t = IntPolynomial::t(sig).expect("extended signature has t");
        let mut out = IntPolynomial::one(sig);
        for comp in &self.components {
            let at = t.scale(&BigInt::from(comp.weight));
            let n = comp.rank as usize;
            let mut factor = IntPolynomial::zero(sig);
            for k in 0..=n {
                factor = &factor + &(&self.lift(&comp.class(n - k, &one)) * &at.pow(k as u32));
            }
            out = &out * &factor;
        }
        self.ext.normal_form(&out).expect("same signature")
    }

    /// `Q(t)`, inhomogeneous with constant term 1, in normal form over `A(X)[t]`.
    pub fn total_chern(&self) -> IntPolynomial {
        let sig = self.ext.sig();
        let one = IntPolynomial::one(self.base.sig());
        let t = IntPolynomial::t(sig).expect("extended signature has t");
        let mut out = IntPolynomial::one(sig);
        for comp in &self.components {
            let shift = &IntPolynomial::one(sig) + &t.scale(&BigInt::from(comp.weight));
            let n = comp.rank as usize;
            let mut factor = IntPolynomial::zero(sig);
            for k in 0..=n {
                factor = &factor + &(&self.lift(&comp.class(k, &one)) * &shift.pow((n - k) as u32));
            }
            out = &out * &factor;
        }
        self.ext.normal_form(&out).expect("same signature")
    }

    /// Ordinary total Chern class `c(N) = Q(0)`, in the base signature.
    pub fn classical_total_chern(&self) -> IntPolynomial {
        let q0 = self.total_chern().eval_t_zero();
        q0.embed(self.base.sig()).expect("t-free polynomial restricts to the base")
    }
}

/// `δ(t) = (P(t) - P(0)) / t`.
pub fn difference_quotient(p: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
    p.checked_sub(&p.eval_t_zero())?.exact_div_t()
}
