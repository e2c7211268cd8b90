//! Exact integer linear algebra over row lattices.
//!
//! Every lattice in this crate is the row span of an [`IntMatrix`]. Canonical
//! forms are row Hermite normal forms: pivots strictly increase left to right,
//! each pivot is positive, and the entries above a pivot lie in `[0, pivot)`.
//! All arithmetic is arbitrary precision.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntLatError {
    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self, IntLatError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(IntLatError::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r);
        }
        Ok(IntMatrix { rows: n, cols, data })
    }

    /// Convenience constructor for small literal matrices.
    pub fn from_i64(cols: usize, rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(cols, rows).expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: Vec<BigInt>) -> Result<(), IntLatError> {
        if row.len() != self.cols {
            return Err(IntLatError::DimensionMismatch { expected: self.cols, found: row.len() });
        }
        self.data.extend(row);
        self.rows += 1;
        Ok(())
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &IntMatrix) -> Result<IntMatrix, IntLatError> {
        if self.cols != other.cols {
            return Err(IntLatError::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, IntLatError> {
        if self.cols != other.rows {
            return Err(IntLatError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `v · self` for a row vector `v`.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, IntLatError> {
        if v.len() != self.rows {
            return Err(IntLatError::DimensionMismatch { expected: self.rows, found: v.len() });
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(self.row(i)) {
                *o += c * x;
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = self.data[src * self.cols + c].clone();
            if !s.is_zero() {
                self.data[dst * self.cols + c] -= q * s;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn sub_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = self.data[r * self.cols + src].clone();
            if !s.is_zero() {
                self.data[r * self.cols + dst] -= q * s;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = std::mem::take(&mut self.data[r * self.cols + c]);
            self.data[r * self.cols + c] = -v;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A row lattice in Hermite normal form. Zero rows are removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfBasis {
    matrix: IntMatrix,
    pivots: Vec<usize>,
}

impl HnfBasis {
    pub fn empty(cols: usize) -> Self {
        HnfBasis { matrix: IntMatrix::zeros(0, cols), pivots: Vec::new() }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols
    }

    /// True when the lattice is all of `Z^cols`.
    pub fn is_full(&self) -> bool {
        self.rank() == self.cols() && (0..self.rank()).all(|i| self.matrix.get(i, i).is_one())
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool, IntLatError> {
        Ok(reduce_mod_lattice(v, self)?.iter().all(Zero::is_zero))
    }

    /// True when every row of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &HnfBasis) -> Result<bool, IntLatError> {
        for r in 0..other.rank() {
            if !self.contains(other.matrix.row(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Result of a row reduction with the unimodular transform recorded:
/// `transform · input = reduced`, where the first `rank` rows of `reduced`
/// form the HNF and the remaining rows are zero.
struct Reduction {
    reduced: IntMatrix,
    transform: IntMatrix,
    pivots: Vec<usize>,
}

fn reduce_rows(m: &IntMatrix, track: bool) -> Reduction {
    let rows = m.rows;
    let mut a = m.clone();
    let mut u = if track { IntMatrix::identity(rows) } else { IntMatrix::zeros(0, 0) };
    let mut pivots = Vec::new();
    let mut prow = 0;
    for c in 0..m.cols {
        if prow == rows {
            break;
        }
        let mut found = false;
        loop {
            // smallest nonzero magnitude, ties to the smallest row index
            let mut best: Option<usize> = None;
            for i in prow..rows {
                let x = a.get(i, c);
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some(b) if a.get(b, c).abs() <= x.abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else { break };
            found = true;
            a.swap_rows(prow, b);
            if track {
                u.swap_rows(prow, b);
            }
            let p = a.get(prow, c).clone();
            let mut clean = true;
            for i in prow + 1..rows {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let q = a.get(i, c).div_floor(&p);
                a.sub_row_multiple(i, prow, &q);
                if track {
                    u.sub_row_multiple(i, prow, &q);
                }
                if !a.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if a.get(prow, c).is_negative() {
            a.negate_row(prow);
            if track {
                u.negate_row(prow);
            }
        }
        let p = a.get(prow, c).clone();
        for i in 0..prow {
            let q = a.get(i, c).div_floor(&p);
            a.sub_row_multiple(i, prow, &q);
            if track {
                u.sub_row_multiple(i, prow, &q);
            }
        }
        pivots.push(c);
        prow += 1;
    }
    Reduction { reduced: a, transform: u, pivots }
}

fn basis_from_reduction(red: &Reduction) -> HnfBasis {
    let rank = red.pivots.len();
    let cols = red.reduced.cols;
    let data = red.reduced.data[..rank * cols].to_vec();
    HnfBasis { matrix: IntMatrix { rows: rank, cols, data }, pivots: red.pivots.clone() }
}

/// Row Hermite normal form of `m`. The output is unique for a given lattice.
pub fn hermite_normal_form(m: &IntMatrix) -> HnfBasis {
    basis_from_reduction(&reduce_rows(m, false))
}

/// HNF of the sum of several lattices in the same ambient space.
pub fn lattice_sum(parts: &[&IntMatrix]) -> Result<HnfBasis, IntLatError> {
    let Some(first) = parts.first() else {
        return Ok(HnfBasis::empty(0));
    };
    let mut all = (*first).clone();
    for p in &parts[1..] {
        all = all.stack(p)?;
    }
    Ok(hermite_normal_form(&all))
}

/// Canonical representative of `v` modulo the row lattice of `b`.
pub fn reduce_mod_lattice(v: &[BigInt], b: &HnfBasis) -> Result<Vec<BigInt>, IntLatError> {
    if v.len() != b.cols() {
        return Err(IntLatError::DimensionMismatch { expected: b.cols(), found: v.len() });
    }
    let mut out = v.to_vec();
    for (i, &p) in b.pivots.iter().enumerate() {
        if out[p].is_zero() {
            continue;
        }
        let q = out[p].div_floor(b.matrix.get(i, p));
        if q.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b.matrix.row(i)).skip(p) {
            if !x.is_zero() {
                *o -= &q * x;
            }
        }
    }
    Ok(out)
}

/// Integer coefficients `c` with `c · m = v`, or `None` if `v` is not in the
/// row lattice of `m`.
pub fn lattice_solve(v: &[BigInt], m: &IntMatrix) -> Result<Option<Vec<BigInt>>, IntLatError> {
    if v.len() != m.cols {
        return Err(IntLatError::DimensionMismatch { expected: m.cols, found: v.len() });
    }
    let red = reduce_rows(m, true);
    let mut rest = v.to_vec();
    let mut coeffs = vec![BigInt::zero(); m.rows];
    for (i, &p) in red.pivots.iter().enumerate() {
        let piv = red.reduced.get(i, p);
        let (q, r) = rest[p].div_rem(piv);
        if !r.is_zero() {
            return Ok(None);
        }
        if q.is_zero() {
            continue;
        }
        for (c, r) in rest.iter_mut().enumerate().skip(p) {
            let x = red.reduced.get(i, c);
            if !x.is_zero() {
                *r -= &q * x;
            }
        }
        coeffs[i] = q;
    }
    if rest.iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    // coefficients on the reduced rows, pulled back through the transform
    let out = red.transform.left_mul_vec(&coeffs)?;
    Ok(Some(out))
}

/// Basis (in HNF) of `{ c : c · m = 0 }`.
pub fn left_kernel(m: &IntMatrix) -> HnfBasis {
    let red = reduce_rows(m, true);
    let rank = red.pivots.len();
    let n = m.rows;
    let mut k = IntMatrix::zeros(0, n);
    for r in rank..n {
        k.push_row(red.transform.row(r).to_vec()).expect("kernel row length");
    }
    hermite_normal_form(&k)
}

/// Invariant factors of the cokernel `Z^cols / rowspan(m)`.
///
/// `divisors` lists every nonzero diagonal entry of the Smith form, units
/// included, so `divisors.len()` is the rank of `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub divisors: Vec<BigInt>,
    pub free_rank: usize,
}

impl SmithForm {
    /// The nontrivial invariant factors (those greater than one).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    /// Same abelian group up to isomorphism.
    pub fn same_group(&self, other: &SmithForm) -> bool {
        self.free_rank == other.free_rank && self.torsion() == other.torsion()
    }
}

impl fmt::Display for SmithForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        for d in self.torsion() {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn smith_invariants(m: &IntMatrix) -> SmithForm {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((r0, c0)) = min_nonzero(&a, t..rows, t..cols) else { break };
        a.swap_rows(t, r0);
        a.swap_cols(t, c0);
        loop {
            let p = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if !a.get(i, t).is_zero() {
                    let q = a.get(i, t).div_floor(&p);
                    a.sub_row_multiple(i, t, &q);
                    clean &= a.get(i, t).is_zero();
                }
            }
            for j in t + 1..cols {
                if !a.get(t, j).is_zero() {
                    let q = a.get(t, j).div_floor(&p);
                    a.sub_col_multiple(j, t, &q);
                    clean &= a.get(t, j).is_zero();
                }
            }
            if !clean {
                // a smaller remainder sits in row t or column t
                let mut best = (t, t);
                for i in t + 1..rows {
                    let x = a.get(i, t);
                    if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = a.get(t, j);
                    if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                a.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                continue;
            }
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_zero() && !a.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    a.sub_row_multiple(t, i, &minus_one);
                }
                None => break,
            }
        }
        t += 1;
    }
    let divisors = (0..t).map(|i| a.get(i, i).abs()).collect();
    SmithForm { divisors, free_rank: cols - t }
}

fn min_nonzero(a: &IntMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a.get(bi, bj).abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}
