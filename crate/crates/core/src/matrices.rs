//! The regular representation and the block-array constructions.
//!
//! All matrices hold exact `i64` entries; determinants are evaluated by
//! fraction-free Bareiss elimination in arbitrary-precision integers, so the
//! D-optimal determinant checks are exact. Rows and columns of regular
//! representations are labelled by group elements in enumeration order,
//! which makes the emitted matrices reproducible byte for byte.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// A dense square integer matrix (entries are +-1 for sign matrices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    entries: Vec<i64>,
}

impl Matrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("matrix must be square".into()));
        }
        Ok(Matrix { n, entries: rows.iter().flatten().copied().collect() })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix { n, entries: vec![0; n * n] };
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn all_ones(n: usize) -> Self {
        Matrix { n, entries: vec![1; n * n] }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.entries[i * self.n + j] = value;
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix { n: self.n, entries: vec![0; self.n * self.n] };
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[j * self.n + i] = self.entries[i * self.n + j];
            }
        }
        out
    }

    pub fn neg(&self) -> Matrix {
        Matrix { n: self.n, entries: self.entries.iter().map(|&x| -x).collect() }
    }

    pub fn scale(&self, s: i64) -> Matrix {
        Matrix { n: self.n, entries: self.entries.iter().map(|&x| s * x).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch { expected: self.n, got: other.n });
        }
        Ok(Matrix { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.neg())
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch { expected: self.n, got: other.n });
        }
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                let row = &other.entries[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(Matrix { n, entries: out })
    }

    pub fn gram(&self) -> Matrix {
        self.matmul(&self.transpose()).expect("same order")
    }

    pub fn is_sign_matrix(&self) -> bool {
        self.entries.iter().all(|&x| x == 1 || x == -1)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `c I + d J` of the same order; handy for Gram comparisons.
    pub fn ci_plus_dj(n: usize, c: i64, d: i64) -> Matrix {
        let mut m = Matrix { n, entries: vec![d; n * n] };
        for i in 0..n {
            m.entries[i * n + i] += c;
        }
        m
    }

    /// Assembles a square matrix from a square grid of equally sized blocks.
    pub fn from_blocks(blocks: &[Vec<Matrix>]) -> Result<Matrix> {
        let rows = blocks.len();
        if rows == 0 || blocks.iter().any(|r| r.len() != rows) {
            return Err(Error::Parse("block grid must be square".into()));
        }
        let b = blocks[0][0].n;
        if blocks.iter().flatten().any(|m| m.n != b) {
            return Err(Error::ShapeMismatch { expected: b, got: 0 });
        }
        let n = rows * b;
        let mut out = Matrix { n, entries: vec![0; n * n] };
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, m) in row.iter().enumerate() {
                for i in 0..b {
                    for j in 0..b {
                        out.entries[(bi * b + i) * n + (bj * b + j)] = m.entries[i * b + j];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact determinant via fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::from(1);
        }
        let mut a: Vec<BigInt> = self.entries.iter().map(|&x| BigInt::from(x)).collect();
        let mut prev = BigInt::from(1);
        let mut sign = 1i64;
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let pivot = (k + 1..n).find(|&r| !a[r * n + k].is_zero());
                match pivot {
                    Some(r) => {
                        for j in 0..n {
                            a.swap(k * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = num / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        let det = a[(n - 1) * n + (n - 1)].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// Text format: one row per line of `+`/`-` characters, preceded by an
    /// `order N` header. Only sign matrices can be rendered.
    pub fn to_text(&self) -> Result<String> {
        if !self.is_sign_matrix() {
            return Err(Error::Parse("text format requires a +-1 matrix".into()));
        }
        let mut out = String::with_capacity(self.n * (self.n + 1) + 16);
        out.push_str(&format!("order {}\n", self.n));
        for i in 0..self.n {
            for j in 0..self.n {
                out.push(if self.get(i, j) == 1 { '+' } else { '-' });
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_text(text: &str) -> Result<Matrix> {
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with("order") {
                continue;
            }
            let row: Vec<i64> = line
                .chars()
                .map(|c| match c {
                    '+' => Ok(1),
                    '-' => Ok(-1),
                    other => Err(Error::Parse(format!("unexpected matrix character {other:?}"))),
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        Matrix::from_rows(&rows)
    }
}

/// The regular representation of an integer algebra element: the matrix with
/// entry `A_{x y^{-1}}` at position `(x, y)`. It is G-invariant and satisfies
/// `Mat(AB) = Mat(A) Mat(B)` and `Mat(A*) = Mat(A)^T`.
pub fn regular_rep(a: &AlgebraElement<i64>) -> Matrix {
    let g = a.group();
    let v = g.order();
    let mut coeffs = vec![0i64; v];
    for (x, &c) in a.terms() {
        coeffs[g.index_unchecked(x)] = c;
    }
    let mut m = Matrix { n: v, entries: vec![0; v * v] };
    for x in 0..v {
        for y in 0..v {
            let z = g.compose_idx(x, g.inverse_idx(y));
            m.entries[x * v + y] = coeffs[z];
        }
    }
    m
}

/// The involutory permutation matrix with `r_{x,y} = 1` iff `x y = e`. For
/// any G-invariant `A` it satisfies `R A R = A^T`.
pub fn r_matrix(g: &GroupSpec) -> Matrix {
    let v = g.order();
    let mut m = Matrix { n: v, entries: vec![0; v * v] };
    for x in 0..v {
        m.entries[x * v + g.inverse_idx(x)] = 1;
    }
    m
}

fn check_blocks_sign(blocks: &[&Matrix]) -> Result<usize> {
    let v = blocks[0].order();
    for b in blocks {
        if b.order() != v {
            return Err(Error::ShapeMismatch { expected: v, got: b.order() });
        }
        if !b.is_sign_matrix() {
            return Err(Error::KindPrecondition("blocks must be +-1 matrices".into()));
        }
    }
    Ok(v)
}

fn check_gram(blocks: &[&Matrix], expected: &Matrix, context: &str) -> Result<()> {
    let mut sum = Matrix { n: expected.order(), entries: vec![0; expected.order() * expected.order()] };
    for b in blocks {
        sum = sum.add(&b.gram())?;
    }
    if sum != *expected {
        return Err(Error::GramPrecondition(context.into()));
    }
    Ok(())
}

/// The Goethals-Seidel array: four suitable blocks and the R matrix assemble
/// into a Hadamard matrix of order `4v`.
///
/// Requires `sum A_i A_i^T = 4v I` and G-invariant blocks; the result is
/// verified to be Hadamard before it is returned.
pub fn gs_array(a0: &Matrix, a1: &Matrix, a2: &Matrix, a3: &Matrix, r: &Matrix) -> Result<Matrix> {
    let v = check_blocks_sign(&[a0, a1, a2, a3])?;
    if r.order() != v {
        return Err(Error::ShapeMismatch { expected: v, got: r.order() });
    }
    check_gram(&[a0, a1, a2, a3], &Matrix::identity(v).scale(4 * v as i64), "sum A_i A_i^T must equal 4v I")?;
    let a1r = a1.matmul(r)?;
    let a2r = a2.matmul(r)?;
    let a3r = a3.matmul(r)?;
    let a1tr = a1.transpose().matmul(r)?;
    let a2tr = a2.transpose().matmul(r)?;
    let a3tr = a3.transpose().matmul(r)?;
    let h = Matrix::from_blocks(&[
        vec![a0.clone(), a1r.clone(), a2r.clone(), a3r.clone()],
        vec![a1r.neg(), a0.clone(), a3tr.neg(), a2tr.clone()],
        vec![a2r.neg(), a3tr.clone(), a0.clone(), a1tr.neg()],
        vec![a3r.neg(), a2tr.neg(), a1tr.clone(), a0.clone()],
    ])?;
    let report = verify(&h, MatrixProperty::Hadamard);
    if !report.pass {
        return Err(Error::GramPrecondition("blocks do not assemble into a Hadamard matrix".into()));
    }
    Ok(h)
}

/// The two-block D-optimal array of order `2v`.
///
/// Requires `A_1 A_1^T + A_2 A_2^T = (2v-2) I + 2 J`. With `symmetric` the
/// variant `[[A1, A2], [A2^T, -A1^T]]` is produced, which is a symmetric
/// matrix when `A_1` is symmetric; otherwise `[[A1, A2], [-A2^T, A1^T]]`.
/// For `v <= 9` the absolute determinant is checked exactly against the
/// maximal-determinant bound `2^v (2v-1) (v-1)^{v-1}`.
pub fn do_array(a1: &Matrix, a2: &Matrix, symmetric: bool) -> Result<Matrix> {
    let v = check_blocks_sign(&[a1, a2])?;
    check_gram(
        &[a1, a2],
        &Matrix::ci_plus_dj(v, 2 * v as i64 - 2, 2),
        "A1 A1^T + A2 A2^T must equal (2v-2) I + 2 J",
    )?;
    if symmetric && !a1.is_symmetric() {
        return Err(Error::KindPrecondition("symmetric variant requires a symmetric leading block".into()));
    }
    let h = if symmetric {
        Matrix::from_blocks(&[
            vec![a1.clone(), a2.clone()],
            vec![a2.transpose(), a1.transpose().neg()],
        ])?
    } else {
        Matrix::from_blocks(&[
            vec![a1.clone(), a2.clone()],
            vec![a2.transpose().neg(), a1.transpose()],
        ])?
    };
    if v <= 9 {
        let report = verify(&h, MatrixProperty::DoBound);
        if !report.pass {
            return Err(Error::GramPrecondition("determinant does not meet the maximal-determinant bound".into()));
        }
    }
    Ok(h)
}

/// Which bordered Legendre array to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegendreKind {
    Symmetric,
    Skew,
}

/// The bordered array turning a Legendre pair into a Hadamard matrix of
/// order `2v + 2`; symmetric or skew depending on the kind and the first
/// block.
///
/// The symmetric kind requires `A_1` symmetric; the skew kind requires the
/// first block to be skew, i.e. `A_1 + A_1^T = 2I`.
pub fn legendre_array(a1: &Matrix, a2: &Matrix, kind: LegendreKind) -> Result<Matrix> {
    let v = check_blocks_sign(&[a1, a2])?;
    check_gram(
        &[a1, a2],
        &Matrix::ci_plus_dj(v, 2 * v as i64 + 2, -2),
        "A1 A1^T + A2 A2^T must equal (2v+2) I - 2 J",
    )?;
    match kind {
        LegendreKind::Symmetric => {
            if !a1.is_symmetric() {
                return Err(Error::KindPrecondition("symmetric Legendre array requires a symmetric first block".into()));
            }
        }
        LegendreKind::Skew => {
            let skew_type = a1.add(&a1.transpose()).map(|s| s == Matrix::identity(v).scale(2)).unwrap_or(false);
            if !skew_type {
                return Err(Error::KindPrecondition("skew Legendre array requires a skew first block".into()));
            }
        }
    }
    let n = 2 * v + 2;
    let mut h = Matrix { n, entries: vec![0; n * n] };
    // border signs per kind
    let (c00, c01, r1c0, b1c0, b1c1, b2c0, b2c1) = match kind {
        LegendreKind::Symmetric => (-1, -1, -1, 1, 1, 1, -1),
        LegendreKind::Skew => (1, 1, -1, -1, -1, -1, 1),
    };
    h.set(0, 0, c00);
    h.set(0, 1, c01);
    h.set(1, 0, r1c0);
    h.set(1, 1, 1);
    for j in 0..v {
        h.set(0, 2 + j, 1);
        h.set(0, 2 + v + j, 1);
        h.set(1, 2 + j, 1);
        h.set(1, 2 + v + j, -1);
    }
    let (b11, b12, b21, b22) = match kind {
        LegendreKind::Symmetric => (a1.clone(), a2.clone(), a2.transpose(), a1.transpose().neg()),
        LegendreKind::Skew => (a1.clone(), a2.clone(), a2.transpose().neg(), a1.transpose()),
    };
    for i in 0..v {
        h.set(2 + i, 0, b1c0);
        h.set(2 + i, 1, b1c1);
        h.set(2 + v + i, 0, b2c0);
        h.set(2 + v + i, 1, b2c1);
        for j in 0..v {
            h.set(2 + i, 2 + j, b11.get(i, j));
            h.set(2 + i, 2 + v + j, b12.get(i, j));
            h.set(2 + v + i, 2 + j, b21.get(i, j));
            h.set(2 + v + i, 2 + v + j, b22.get(i, j));
        }
    }
    let report = verify(&h, MatrixProperty::Hadamard);
    if !report.pass {
        return Err(Error::GramPrecondition("blocks do not assemble into a Hadamard matrix".into()));
    }
    Ok(h)
}

/// The two-block array `[[A2, A1], [A1^T, -A2^T]]` of order `2v`; a Hadamard
/// matrix whenever `A_1 A_1^T + A_2 A_2^T = 2v I`, and symmetric when `A_2`
/// is symmetric.
pub fn golay_array(a1: &Matrix, a2: &Matrix) -> Result<Matrix> {
    let v = check_blocks_sign(&[a1, a2])?;
    check_gram(&[a1, a2], &Matrix::identity(v).scale(2 * v as i64), "A1 A1^T + A2 A2^T must equal 2v I")?;
    let h = Matrix::from_blocks(&[
        vec![a2.clone(), a1.clone()],
        vec![a1.transpose(), a2.transpose().neg()],
    ])?;
    let report = verify(&h, MatrixProperty::Hadamard);
    if !report.pass {
        return Err(Error::GramPrecondition("blocks do not assemble into a Hadamard matrix".into()));
    }
    Ok(h)
}

/// Matrix properties the exact verifier understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixProperty {
    /// `H H^T = order * I`.
    Hadamard,
    /// `H = H^T`.
    Symmetric,
    /// `H + H^T = 2I`.
    Skew,
    /// Bush type with the given block size `m`: order `m^2`, diagonal blocks
    /// all-ones, off-diagonal blocks with zero row and column sums.
    Bush { m: usize },
    /// `|det H|` equals the maximal-determinant bound `2^v (2v-1)(v-1)^{v-1}`
    /// for order `2v`.
    DoBound,
}

/// Result of one exact property check.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub property: MatrixProperty,
    pub pass: bool,
    pub detail: String,
}

/// The maximal-determinant bound for a +-1 matrix of order `2v`, `v` odd.
pub fn do_determinant_bound(v: usize) -> BigInt {
    BigInt::from(2).pow(v as u32) * BigInt::from(2 * v as i64 - 1) * BigInt::from(v as i64 - 1).pow(v as u32 - 1)
}

/// Runs one exact integer check against the matrix.
pub fn verify(h: &Matrix, property: MatrixProperty) -> PropertyReport {
    let n = h.order();
    let fail = |detail: String| PropertyReport { property, pass: false, detail };
    if !h.is_sign_matrix() {
        return fail("entries are not all +-1".into());
    }
    match property {
        MatrixProperty::Hadamard => {
            let pass = h.gram() == Matrix::identity(n).scale(n as i64);
            PropertyReport { property, pass, detail: format!("H H^T == {n} I: {pass}") }
        }
        MatrixProperty::Symmetric => {
            let pass = h.is_symmetric();
            PropertyReport { property, pass, detail: format!("H == H^T: {pass}") }
        }
        MatrixProperty::Skew => {
            let pass = h.add(&h.transpose()).map(|s| s == Matrix::identity(n).scale(2)).unwrap_or(false);
            PropertyReport { property, pass, detail: format!("H + H^T == 2I: {pass}") }
        }
        MatrixProperty::Bush { m } => {
            if m * m != n {
                return fail(format!("order {n} is not {m}^2"));
            }
            for bi in 0..m {
                for bj in 0..m {
                    if bi == bj {
                        for i in 0..m {
                            for j in 0..m {
                                if h.get(bi * m + i, bj * m + j) != 1 {
                                    return fail(format!("diagonal block ({bi},{bj}) is not all-ones"));
                                }
                            }
                        }
                    } else {
                        for i in 0..m {
                            let row_sum: i64 = (0..m).map(|j| h.get(bi * m + i, bj * m + j)).sum();
                            if row_sum != 0 {
                                return fail(format!("off-diagonal block ({bi},{bj}) row {i} sums to {row_sum}"));
                            }
                        }
                        for j in 0..m {
                            let col_sum: i64 = (0..m).map(|i| h.get(bi * m + i, bj * m + j)).sum();
                            if col_sum != 0 {
                                return fail(format!("off-diagonal block ({bi},{bj}) column {j} sums to {col_sum}"));
                            }
                        }
                    }
                }
            }
            PropertyReport { property, pass: true, detail: format!("Bush conditions hold with m = {m}") }
        }
        MatrixProperty::DoBound => {
            if n % 2 != 0 || (n / 2) % 2 == 0 {
                return fail(format!("order {n} is not 2v with v odd"));
            }
            let v = n / 2;
            let det = h.determinant();
            let bound = do_determinant_bound(v);
            let pass = det.abs() == bound;
            PropertyReport { property, pass, detail: format!("|det| = {} vs bound {}", det.abs(), bound) }
        }
    }
}
