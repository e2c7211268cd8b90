//! Property bodies shared by the proptest suites and the acceptance run.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use wblow::blowup::BlowupSetup;
use wblow::intlat::{hermite_normal_form, lattice_solve, reduce_mod_lattice, smith_invariants, IntMatrix};
use wblow::polyring::{GenSignature, IntPolynomial};

use super::{homogeneous, naive_cokernel};

pub type Rows = (usize, Vec<Vec<i64>>);

pub fn matrix() -> impl Strategy<Value = Rows> {
    (1usize..6).prop_flat_map(|cols| (Just(cols), prop::collection::vec(prop::collection::vec(-30i64..30, cols), 0..7)))
}

fn to_matrix((cols, rows): &Rows) -> IntMatrix {
    IntMatrix::from_rows(*cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
        .expect("rectangular")
}

fn big_rows((_, rows): &Rows) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// HNF spans the input lattice, is in canonical echelon shape, and is a
/// fixed point.
pub fn check_hnf(input: &Rows) -> Result<(), TestCaseError> {
    let m = to_matrix(input);
    let h = hermite_normal_form(&m);
    for r in 0..m.rows() {
        prop_assert!(h.contains(m.row(r)).unwrap(), "input row {r} not in HNF lattice");
    }
    for r in 0..h.rank() {
        prop_assert!(lattice_solve(h.matrix().row(r), &m).unwrap().is_some(), "HNF row {r} not in input lattice");
    }
    let piv = h.pivots();
    prop_assert!(piv.windows(2).all(|w| w[0] < w[1]));
    for (i, &p) in piv.iter().enumerate() {
        let lead = h.matrix().get(i, p);
        prop_assert!(*lead > BigInt::zero());
        for c in 0..p {
            prop_assert!(h.matrix().get(i, c).is_zero());
        }
        for above in 0..i {
            let e = h.matrix().get(above, p);
            prop_assert!(*e >= BigInt::zero() && e < lead, "entry above pivot not reduced");
        }
    }
    prop_assert_eq!(&hermite_normal_form(h.matrix()), &h);
    let mut rev = input.clone();
    rev.1.reverse();
    prop_assert_eq!(&hermite_normal_form(&to_matrix(&rev)), &h);
    Ok(())
}

/// Reduction modulo the lattice is idempotent, lands in the same coset,
/// and ignores lattice translates.
pub fn check_reduction(input: &Rows, v: &[i64], mult: &[i64]) -> Result<(), TestCaseError> {
    let m = to_matrix(input);
    let h = hermite_normal_form(&m);
    let cols = input.0;
    let v: Vec<BigInt> = (0..cols).map(|i| BigInt::from(v[i % v.len()])).collect();
    let r = reduce_mod_lattice(&v, &h).unwrap();
    prop_assert_eq!(&reduce_mod_lattice(&r, &h).unwrap(), &r);
    let diff: Vec<BigInt> = v.iter().zip(&r).map(|(a, b)| a - b).collect();
    prop_assert!(h.contains(&diff).unwrap());
    let mut shifted = v.clone();
    for (i, row) in input.1.iter().enumerate() {
        let c = BigInt::from(mult[i % mult.len()]);
        for (s, x) in shifted.iter_mut().zip(row) {
            *s += &c * x;
        }
    }
    prop_assert_eq!(&reduce_mod_lattice(&shifted, &h).unwrap(), &r);
    Ok(())
}

/// Smith divisors form a divisibility chain, match an independent
/// elimination, and do not depend on row order.
pub fn check_snf(input: &Rows) -> Result<(), TestCaseError> {
    let m = to_matrix(input);
    let s = smith_invariants(&m);
    prop_assert!(s.divisors.iter().all(|d| *d > BigInt::zero()));
    prop_assert!(s.divisors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()), "not a divisibility chain");
    prop_assert_eq!(s.free_rank + s.divisors.len(), input.0);
    prop_assert_eq!(s.divisors.len(), hermite_normal_form(&m).rank());
    let (free, torsion) = naive_cokernel(&big_rows(input), input.0);
    prop_assert_eq!(s.free_rank, free);
    prop_assert_eq!(s.torsion(), torsion);
    let mut rot = input.clone();
    let shift = rot.1.len().min(1);
    rot.1.rotate_left(shift);
    prop_assert!(smith_invariants(&to_matrix(&rot)).same_group(&s));
    Ok(())
}

pub fn poly_sig() -> Arc<GenSignature> {
    super::sig(&[("x", 1), ("y", 2), ("z", 1)])
}

pub type Terms = Vec<((u32, u32, u32), i64)>;

pub fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -9i64..10), 0..6)
}

pub fn to_poly(sig: &Arc<GenSignature>, t: &Terms) -> IntPolynomial {
    IntPolynomial::from_terms(sig, t.iter().map(|&((a, b, c), k)| (vec![a, b, c], BigInt::from(k))))
}

/// Commutative ring axioms plus degree additivity and substitution being a
/// homomorphism.
pub fn check_ring_axioms(a: &Terms, b: &Terms, c: &Terms) -> Result<(), TestCaseError> {
    let s = poly_sig();
    let (a, b, c) = (to_poly(&s, a), to_poly(&s, b), to_poly(&s, c));
    let zero = IntPolynomial::zero(&s);
    let one = IntPolynomial::one(&s);
    prop_assert_eq!(&(&a + &b), &(&b + &a));
    prop_assert_eq!(&(&(&a + &b) + &c), &(&a + &(&b + &c)));
    prop_assert_eq!(&(&a * &b), &(&b * &a));
    prop_assert_eq!(&(&(&a * &b) * &c), &(&a * &(&b * &c)));
    prop_assert_eq!(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)));
    prop_assert_eq!(&(&a * &one), &a);
    prop_assert_eq!(&(&a + &zero), &a);
    prop_assert!((&a + &(-&a)).is_zero());
    prop_assert_eq!(&(&a - &b), &(&a + &(-&b)));
    prop_assert_eq!(&a.pow(2), &(&a * &a));
    if let (Some(da), Some(db)) = (a.degree(), b.degree()) {
        prop_assert_eq!((&a * &b).degree(), Some(da + db));
    }
    let sum: IntPolynomial = a.components().values().fold(zero.clone(), |acc, p| &acc + p);
    prop_assert_eq!(&sum, &a);
    let images = [("x", &b), ("y", &c), ("z", &one)];
    let images: std::collections::HashMap<String, IntPolynomial> =
        images.iter().map(|(n, p)| (n.to_string(), (*p).clone())).collect();
    let sub = |p: &IntPolynomial| p.substitute(&s, &images).unwrap();
    prop_assert_eq!(&sub(&(&a * &c)), &(&sub(&a) * &sub(&c)));
    prop_assert_eq!(&sub(&(&a + &c)), &(&sub(&a) + &sub(&c)));
    let reparsed = wblow::polyring::parse_polynomial(&a.to_string(), &s).unwrap();
    prop_assert_eq!(&reparsed, &a);
    Ok(())
}

/// Random input for the projection formula: degrees of `β` and `α` plus
/// coefficient pools.
pub type ProjInput = (u32, u32, Vec<i64>, Vec<i64>, Vec<i64>);

pub fn proj_input() -> impl Strategy<Value = ProjInput> {
    (
        0u32..4,
        0u32..4,
        prop::collection::vec(-6i64..7, 1..8),
        prop::collection::vec(-6i64..7, 1..8),
        prop::collection::vec(-6i64..7, 1..8),
    )
}

/// `i_*(i^*β·α) = β·i_*α` in `A(Y)`, and in the blow-up
/// `f^*β·(0, q) = (0, i^*β·q)`.
pub fn check_projection_formula(s: &BlowupSetup, input: &ProjInput) -> Result<(), TestCaseError> {
    let (db, da, bc, ac, qc) = input;
    let d = s.truncation();
    let (db, da) = (db % (d + 1), da % (d + 1));
    let beta = homogeneous(s.ry().sig(), db, bc);
    let alpha = homogeneous(s.rx().sig(), da, ac);
    if db + da + s.codim() <= d {
        let lhs = s.pushforward_apply(&s.rx().mul(&s.pullback().apply(&beta).unwrap(), &alpha).unwrap()).unwrap();
        let rhs = s.ry().mul(&beta, &s.pushforward_apply(&alpha).unwrap()).unwrap();
        prop_assert!(s.ry().equal(&lhs, &rhs).unwrap(), "i_*(i^*b a) = {lhs}, b i_*a = {rhs}");
    }
    if db + da < d {
        let t = IntPolynomial::t(s.rxt().sig()).unwrap();
        let q = &homogeneous(s.rxt().sig(), da, qc) * &t;
        let fb = s.from_y(beta.clone()).unwrap();
        let lhs = s.be_mul(&fb, &s.from_exc(q.clone()).unwrap()).unwrap();
        let pulled = s.pullback().apply(&beta).unwrap().embed(s.rxt().sig()).unwrap();
        let rhs = s.from_exc(&pulled * &q).unwrap();
        prop_assert!(s.be_eq(&lhs, &rhs).unwrap());
    }
    Ok(())
}

/// `f^*i_*α = j_*f^!α`, checked in the pair model and after mapping both
/// sides into the presentation.
pub fn check_key_square(
    s: &BlowupSetup,
    pres: &wblow::blowup::Presentation,
    da: u32,
    ac: &[i64],
) -> Result<(), TestCaseError> {
    let d = s.truncation();
    let da = da % (d - s.codim() + 1);
    let alpha = homogeneous(s.rx().sig(), da, ac);
    let t = IntPolynomial::t(s.rxt().sig()).unwrap();
    let lhs = s.from_y(s.pushforward_apply(&alpha).unwrap()).unwrap();
    let rhs = s.from_exc(-&(&t * &s.gysin_pullback(&alpha).unwrap())).unwrap();
    prop_assert!(s.be_eq(&lhs, &rhs).unwrap(), "alpha = {alpha}");
    let (pl, pr) = (s.to_presentation(pres, &lhs).unwrap(), s.to_presentation(pres, &rhs).unwrap());
    prop_assert!(pres.ring.equal(&pl, &pr).unwrap(), "{pl} != {pr} in the presentation");
    Ok(())
}
