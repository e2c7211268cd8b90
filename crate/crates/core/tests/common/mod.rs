#![allow(dead_code)]

pub mod props;

use std::path::PathBuf;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use wblow::blowup::{BlowupElement, BlowupSetup};
use wblow::iface::parse_setup;
use wblow::polyring::{parse_polynomial, GenSignature, IntPolynomial};

pub const FIXTURES: [&str; 6] = ["m12", "wps234", "toric", "p11", "ptad", "conic"];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.wb"))
}

pub fn fixture(name: &str) -> BlowupSetup {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    parse_setup(&text).unwrap_or_else(|e| panic!("{name}: {}:{}: {}", e.line, e.col, e.message))
}

pub fn sig(gens: &[(&str, u32)]) -> Arc<GenSignature> {
    Arc::new(GenSignature::new(gens.iter().copied()).expect("signature"))
}

pub fn poly(sig: &Arc<GenSignature>, s: &str) -> IntPolynomial {
    parse_polynomial(s, sig).expect("polynomial")
}

/// Homogeneous polynomial of degree `d` whose coefficients are drawn from
/// `coeffs` in monomial order, cycling if there are more monomials.
pub fn homogeneous(sig: &Arc<GenSignature>, d: u32, coeffs: &[i64]) -> IntPolynomial {
    let mons = sig.monomials_of_degree(d);
    if coeffs.is_empty() {
        return IntPolynomial::zero(sig);
    }
    IntPolynomial::from_terms(
        sig,
        mons.into_iter().enumerate().map(|(i, m)| (m, BigInt::from(coeffs[i % coeffs.len()]))),
    )
}

/// A random degree-`k` element of the pair model.
pub fn element(s: &BlowupSetup, k: u32, ys: &[i64], es: &[i64]) -> BlowupElement {
    let y = homogeneous(s.ry().sig(), k, ys);
    let exc = if k == 0 {
        IntPolynomial::zero(s.rxt().sig())
    } else {
        let t = IntPolynomial::t(s.rxt().sig()).expect("t");
        &homogeneous(s.rxt().sig(), k - 1, es) * &t
    };
    s.element(y, exc).expect("element")
}

/// Rows `m·r` for every relation `r` and monomial `m` of the complementary
/// degree, as dense coordinate vectors over the degree-`d` monomials.
pub fn relation_rows(sig: &Arc<GenSignature>, relations: &[IntPolynomial], d: u32) -> (usize, Vec<Vec<BigInt>>) {
    let basis = sig.monomials_of_degree(d);
    let mut rows = Vec::new();
    for r in relations {
        let Some(e) = r.degree() else { continue };
        if e > d {
            continue;
        }
        for m in sig.monomials_of_degree(d - e) {
            let p = &IntPolynomial::monomial(sig, m, BigInt::one()) * r;
            rows.push(basis.iter().map(|b| p.coeff(b)).collect());
        }
    }
    (basis.len(), rows)
}

/// Invariant factors of an integer matrix by plain elimination with a
/// smallest-entry pivot. Returns the nonzero diagonal, ascending under
/// divisibility.
pub fn naive_smith(rows: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let n_rows = a.len();
    let mut diag = Vec::new();
    let mut top = 0;
    while top < n_rows && top < cols {
        let mut best: Option<(usize, usize)> = None;
        for i in top..n_rows {
            for j in top..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(top, pi);
        for row in a.iter_mut() {
            row.swap(top, pj);
        }
        loop {
            let p = a[top][top].clone();
            let mut dirty = false;
            for i in top + 1..n_rows {
                let q = a[i][top].div_floor(&p);
                if !q.is_zero() {
                    let pivot_row = a[top].clone();
                    for (x, y) in a[i].iter_mut().zip(&pivot_row).skip(top) {
                        *x -= y * &q;
                    }
                }
                dirty |= !a[i][top].is_zero();
            }
            for j in top + 1..cols {
                let q = a[top][j].div_floor(&p);
                if !q.is_zero() {
                    for row in a.iter_mut().skip(top) {
                        let v = &row[top] * &q;
                        row[j] -= v;
                    }
                }
                dirty |= !a[top][j].is_zero();
            }
            if !dirty {
                // Divisibility: fold a row holding a non-multiple into the pivot row.
                let bad = (top + 1..n_rows).find(|&i| (top + 1..cols).any(|j| !(&a[i][j] % &p).is_zero()));
                match bad {
                    Some(i) => {
                        let other = a[i].clone();
                        for (x, y) in a[top].iter_mut().zip(&other).skip(top) {
                            *x += y;
                        }
                    }
                    None => break,
                }
                continue;
            }
            // Move the smallest nonzero entry of the pivot row/column to the corner.
            let mut best = (top, top);
            for i in top..n_rows {
                if !a[i][top].is_zero() && a[i][top].abs() < a[best.0][best.1].abs() {
                    best = (i, top);
                }
            }
            for j in top..cols {
                if !a[top][j].is_zero() && a[top][j].abs() < a[best.0][best.1].abs() {
                    best = (top, j);
                }
            }
            a.swap(top, best.0);
            for row in a.iter_mut() {
                row.swap(top, best.1);
            }
        }
        diag.push(a[top][top].abs());
        top += 1;
    }
    diag
}

/// `(free rank, torsion)` of the cokernel of the rows.
pub fn naive_cokernel(rows: &[Vec<BigInt>], cols: usize) -> (usize, Vec<BigInt>) {
    let diag = naive_smith(rows, cols);
    let free = cols - diag.len();
    (free, diag.into_iter().filter(|d| !d.is_one()).collect())
}

/// Degree-`d` piece of `Z[sig]/(relations)` computed without the library's
/// lattice code.
pub fn oracle_piece(sig: &Arc<GenSignature>, relations: &[IntPolynomial], d: u32) -> (usize, Vec<BigInt>) {
    let (cols, rows) = relation_rows(sig, relations, d);
    naive_cokernel(&rows, cols)
}

/// Two row sets span the same lattice iff they and their union have equal
/// rank and equal product of invariant factors.
pub fn same_span(a: &[Vec<BigInt>], b: &[Vec<BigInt>], cols: usize) -> bool {
    let both: Vec<Vec<BigInt>> = a.iter().chain(b).cloned().collect();
    let fp = |rows: &[Vec<BigInt>]| {
        let d = naive_smith(rows, cols);
        (d.len(), d.iter().product::<BigInt>())
    };
    let (fa, fb, fu) = (fp(a), fp(b), fp(&both));
    fa == fu && fb == fu
}

pub fn bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
