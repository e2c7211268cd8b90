//! Weighted blow-ups `f: Ỹ → Y` along a regular embedding `i: X → Y`.
//!
//! Sign conventions used throughout: `t = -[X̃]`, the pushforward from the
//! exceptional divisor is `j_* = -t·`, and `f^! = δ(t)·` with
//! `δ = (P(t) - P(0)) / t`. In the pair model an element is `(β, q)` with
//! `β ∈ A(Y)` and `q ∈ t·A(X)[t]`, subject to `(i_*α, 0) ~ (0, -t·δ·α)`.

mod chern_class;
mod element;
mod presentation;
mod sequence;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

pub use chern_class::ChernResult;
pub use element::{BlowupElement, PairPiece};
pub use presentation::{Presentation, PresentationKind};
pub use sequence::ExactnessReport;

use crate::chern::{difference_quotient, ChernError, WeightedBundle};
use crate::gring::{GradedRing, PushforwardData, RingError, RingMap};
use crate::intlat::{IntLatError, SmithForm};
use crate::polyring::{IntPolynomial, PolyError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BlowupError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error("invalid setup:\n{0}")]
    Invalid(ValidationReport),
    #[error("degree {degree} exceeds the truncation degree {max}")]
    TruncationExceeded { degree: u32, max: u32 },
    #[error("i* is not surjective in degree {degree}: `{witness}` has no preimage")]
    NotSurjective { degree: u32, witness: String },
    #[error("total Chern class must have constant term 1, got `{0}`")]
    NotUnital(String),
    #[error("{0}")]
    Foreign(String),
    #[error("generator name `{0}` is already used by A(Y)")]
    NameCollision(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<IntLatError> for BlowupError {
    fn from(e: IntLatError) -> Self {
        BlowupError::Ring(e.into())
    }
}

impl From<PolyError> for BlowupError {
    fn from(e: PolyError) -> Self {
        BlowupError::Ring(e.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub outcome: CheckOutcome,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn record(&mut self, name: &'static str, outcome: Result<(), String>) -> bool {
        let ok = outcome.is_ok();
        let outcome = match outcome {
            Ok(()) => CheckOutcome::Pass,
            Err(e) => CheckOutcome::Fail(e),
        };
        self.checks.push(Check { name, outcome });
        ok
    }

    fn skip(&mut self, names: &[&'static str]) {
        for &name in names {
            self.checks.push(Check { name, outcome: CheckOutcome::Skipped });
        }
    }

    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.outcome == CheckOutcome::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&'static str, &str)> {
        self.checks.iter().filter_map(|c| match &c.outcome {
            CheckOutcome::Fail(m) => Some((c.name, m.as_str())),
            _ => None,
        })
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.checks.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            match &c.outcome {
                CheckOutcome::Pass => write!(f, "  ok      {}", c.name)?,
                CheckOutcome::Fail(m) => write!(f, "  FAILED  {}: {m}", c.name)?,
                CheckOutcome::Skipped => write!(f, "  skipped {}", c.name)?,
            }
        }
        Ok(())
    }
}

const DEGREEWISE: [&str; 4] =
    ["pushforward degrees", "self-intersection", "decomposability", "pushforward well-defined"];

/// Runs every setup check through degree `truncation`. Later checks are
/// skipped once a structural one fails.
pub fn validate_setup(
    pullback: &RingMap,
    push: &PushforwardData,
    bundle: &WeightedBundle,
    codim: u32,
    truncation: u32,
) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let rx = pullback.target();
    let ry = pullback.source();
    let mut ok = true;
    ok &= rep.record("codimension", if codim >= 1 { Ok(()) } else { Err("codimension must be at least 1".into()) });
    ok &= rep.record(
        "truncation",
        if truncation >= codim {
            Ok(())
        } else {
            Err(format!("truncation degree {truncation} is below the codimension {codim}"))
        },
    );
    ok &= rep.record(
        "bundle base",
        if **bundle.base() == **rx { Ok(()) } else { Err("bundle is not defined over A(X)".into()) },
    );
    ok &= rep.record(
        "bundle rank",
        if bundle.rank() == codim {
            Ok(())
        } else {
            Err(format!("bundle rank {} differs from the codimension {codim}", bundle.rank()))
        },
    );
    if !ok {
        rep.skip(&DEGREEWISE);
        return rep;
    }

    let degrees = (|| {
        if push.shift() != codim {
            return Err(format!("pushforward shift {} differs from the codimension {codim}", push.shift()));
        }
        for ((name, mu), img) in push.names().iter().zip(push.generators()).zip(push.images()) {
            if mu.sig() != rx.sig() {
                return Err(format!("module generator `{name}` is not an element of A(X)"));
            }
            if img.sig() != ry.sig() {
                return Err(format!("image of `{name}` is not an element of A(Y)"));
            }
            let expected = mu.degree().unwrap_or(0) + codim;
            if !img.is_zero() && (!img.is_homogeneous() || img.degree() != Some(expected)) {
                return Err(format!(
                    "i_*({name}) = {img} has degree {}, expected {expected} (degree of {name} plus codimension)",
                    img.degree().unwrap_or(0)
                ));
            }
        }
        Ok(())
    })();
    if !rep.record("pushforward degrees", degrees) {
        rep.skip(&DEGREEWISE[1..]);
        return rep;
    }

    let selfint = (|| {
        let lhs = pullback.apply(push.fundamental_class()).map_err(|e| e.to_string())?;
        let p0 = bundle.top_chern().eval_t_zero().embed(rx.sig()).map_err(|e| e.to_string())?;
        let rhs = rx.normal_form(&p0).map_err(|e| e.to_string())?;
        if rx.equal(&lhs, &rhs).map_err(|e| e.to_string())? {
            Ok(())
        } else {
            Err(format!("degree {codim}: i*([X]) = {lhs} but the top Chern class of the normal bundle is {rhs}"))
        }
    })();
    rep.record("self-intersection", selfint);

    let decomp = (0..=truncation).try_for_each(|e| push.check_decomposable(pullback, e).map_err(|err| err.to_string()));
    let decomp_ok = rep.record("decomposability", decomp);
    if decomp_ok {
        let wd = (0..=truncation)
            .try_for_each(|e| push.check_well_defined(pullback, e).map_err(|err| format!("degree {e}: {err}")));
        rep.record("pushforward well-defined", wd);
    } else {
        rep.skip(&["pushforward well-defined"]);
    }
    rep
}

/// Validated blow-up data, immutable after construction.
pub struct BlowupSetup {
    pullback: RingMap,
    pushforward: PushforwardData,
    bundle: WeightedBundle,
    codim: u32,
    truncation: u32,
    top: IntPolynomial,
    delta: IntPolynomial,
    exceptional: Arc<GradedRing>,
    pair_cache: RwLock<HashMap<u32, Arc<PairPiece>>>,
}

impl fmt::Debug for BlowupSetup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlowupSetup")
            .field("Y", &self.ry().to_string())
            .field("X", &self.rx().to_string())
            .field("codim", &self.codim)
            .field("truncation", &self.truncation)
            .field("P", &self.top.to_string())
            .finish()
    }
}

impl BlowupSetup {
    pub fn new(
        pullback: RingMap,
        pushforward: PushforwardData,
        bundle: WeightedBundle,
        codim: u32,
        truncation: u32,
    ) -> Result<Self, BlowupError> {
        let report = validate_setup(&pullback, &pushforward, &bundle, codim, truncation);
        if !report.is_ok() {
            return Err(BlowupError::Invalid(report));
        }
        let top = bundle.top_chern();
        let delta = difference_quotient(&top)?;
        let exceptional = Arc::new(bundle.extended_base().with_relations([top.clone()])?);
        Ok(BlowupSetup {
            pullback,
            pushforward,
            bundle,
            codim,
            truncation,
            top,
            delta,
            exceptional,
            pair_cache: RwLock::default(),
        })
    }

    /// The same data validated against a different truncation degree.
    pub fn with_truncation(&self, truncation: u32) -> Result<Self, BlowupError> {
        BlowupSetup::new(self.pullback.clone(), self.pushforward.clone(), self.bundle.clone(), self.codim, truncation)
    }

    pub fn ry(&self) -> &Arc<GradedRing> {
        self.pullback.source()
    }

    pub fn rx(&self) -> &Arc<GradedRing> {
        self.pullback.target()
    }

    /// `A(X)[t]`.
    pub fn rxt(&self) -> &Arc<GradedRing> {
        self.bundle.extended_base()
    }

    pub fn pullback(&self) -> &RingMap {
        &self.pullback
    }

    pub fn pushforward(&self) -> &PushforwardData {
        &self.pushforward
    }

    pub fn bundle(&self) -> &WeightedBundle {
        &self.bundle
    }

    pub fn codim(&self) -> u32 {
        self.codim
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// `P(t)`.
    pub fn top_chern(&self) -> &IntPolynomial {
        &self.top
    }

    /// `δ(t)`.
    pub fn delta(&self) -> &IntPolynomial {
        &self.delta
    }

    /// `[X] = i_*(1)`.
    pub fn fundamental_class(&self) -> &IntPolynomial {
        self.pushforward.fundamental_class()
    }

    /// `A(X̃) = A(X)[t] / (P(t))`.
    pub fn exceptional_ring(&self) -> &Arc<GradedRing> {
        &self.exceptional
    }

    pub(crate) fn check_degree(&self, degree: u32) -> Result<(), BlowupError> {
        if degree > self.truncation {
            return Err(BlowupError::TruncationExceeded { degree, max: self.truncation });
        }
        Ok(())
    }

    /// `i^*` followed by the inclusion `A(X) → A(X)[t]`.
    pub(crate) fn pull_to_rxt(&self, beta: &IntPolynomial) -> Result<IntPolynomial, BlowupError> {
        Ok(self.pullback.apply(beta)?.embed(self.rxt().sig())?)
    }

    /// `i_*`.
    pub fn pushforward_apply(&self, alpha: &IntPolynomial) -> Result<IntPolynomial, BlowupError> {
        Ok(self.pushforward.apply(&self.pullback, alpha)?)
    }

    /// `f^!(α) = δ(t)·α` in `A(X̃)`.
    pub fn gysin_pullback(&self, alpha: &IntPolynomial) -> Result<IntPolynomial, BlowupError> {
        if alpha.sig() != self.rx().sig() {
            return Err(BlowupError::Foreign(format!("`{alpha}` is not an element of A(X)")));
        }
        if let Some(top) = alpha.components().keys().last() {
            self.check_degree(top + self.codim - 1)?;
        }
        let lifted = alpha.embed(self.rxt().sig())?;
        Ok(self.exceptional.normal_form(&(&self.delta * &lifted))?)
    }

    /// Smith data of `A^k(X̃)`.
    pub fn exceptional_piece(&self, k: u32) -> Result<SmithForm, BlowupError> {
        self.check_degree(k)?;
        Ok(self.exceptional.smith(k))
    }
}
