//! Dense exact matrices over the rationals and the integers.
//!
//! Everything here is exact: determinants and inverses run Gaussian
//! elimination over [`Rat`], and the integer matrices provide Hermite and
//! Smith normal forms with transformation tracking. Sizes stay at desk scale
//! (rank <= ~25), so no effort is spent on asymptotics.

use crate::error::{Error, Result};
use crate::rat::{is_integer, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| crate::rat::format_rat(self.at(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::rat::rat_int(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(is_integer)
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j).clone();
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    /// `self * other^t`, the Gram-style product.
    pub fn mul_transpose(&self, other: &RatMat) -> RatMat {
        self.mul(&other.transpose())
    }

    pub fn block_diag(blocks: &[&RatMat]) -> RatMat {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = RatMat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.at(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Exact determinant via Gaussian elimination with pivoting.
    pub fn det(&self) -> Rat {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.at(r, col).is_zero());
            let Some(p) = pivot else {
                return Rat::zero();
            };
            if p != col {
                for j in 0..n {
                    let tmp = a.at(p, j).clone();
                    a.set(p, j, a.at(col, j).clone());
                    a.set(col, j, tmp);
                }
                det = -det;
            }
            let piv = a.at(col, col).clone();
            det *= piv.clone();
            for r in col + 1..n {
                let factor = a.at(r, col) / &piv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.at(r, j) - &factor * a.at(col, j);
                    a.set(r, j, v);
                }
            }
        }
        det
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMat::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if p != col {
                for j in 0..n {
                    let tmp = a.at(p, j).clone();
                    a.set(p, j, a.at(col, j).clone());
                    a.set(col, j, tmp);
                    let tmp = inv.at(p, j).clone();
                    inv.set(p, j, inv.at(col, j).clone());
                    inv.set(col, j, tmp);
                }
            }
            let piv = a.at(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.at(col, j) / &piv);
                inv.set(col, j, inv.at(col, j) / &piv);
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let factor = a.at(r, col).clone();
                for j in 0..n {
                    let v = a.at(r, j) - &factor * a.at(col, j);
                    a.set(r, j, v);
                    let v = inv.at(r, j) - &factor * inv.at(col, j);
                    inv.set(r, j, v);
                }
            }
        }
        Some(inv)
    }

    /// Positive definiteness by the exact leading-principal-minor test.
    ///
    /// Returns `Err` naming the first non-positive minor. Requires symmetry.
    pub fn check_positive_definite(&self) -> Result<()> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.rows;
        let mut a = self.clone();
        // Symmetric Gaussian elimination without pivoting: the k-th pivot is
        // minor_k / minor_{k-1}, so all pivots > 0 iff all minors > 0.
        for k in 0..n {
            let piv = a.at(k, k).clone();
            if piv <= Rat::zero() {
                return Err(Error::NotPositiveDefinite { minor: k + 1 });
            }
            for r in k + 1..n {
                let factor = a.at(r, k) / &piv;
                if factor.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = a.at(r, j) - &factor * a.at(k, j);
                    a.set(r, j, v);
                }
            }
        }
        Ok(())
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        let mut d = BigInt::one();
        for x in &self.data {
            d = d.lcm(x.denom());
        }
        d
    }

    /// Scales by the common denominator: returns `(A, d)` with `self = A / d`.
    pub fn to_scaled_int(&self) -> (IntMat, BigInt) {
        let d = self.common_denominator();
        let mut m = IntMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.at(i, j);
                m.set(i, j, x.numer() * (&d / x.denom()));
            }
        }
        (m, d)
    }

    /// Conversion to an integer matrix; `None` if any entry is fractional.
    pub fn to_int(&self) -> Option<IntMat> {
        if !self.is_integral() {
            return None;
        }
        let mut m = IntMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.at(i, j).numer().clone());
            }
        }
        Some(m)
    }

    pub fn lex_cmp(&self, other: &RatMat) -> Ordering {
        (self.rows, self.cols, &self.data).cmp(&(other.rows, other.cols, &other.data))
    }
}

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_rat(&self) -> RatMat {
        let mut m = RatMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, Rat::from_integer(self.at(i, j).clone()));
            }
        }
        m
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j).clone();
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    pub fn det(&self) -> BigInt {
        let d = self.to_rat().det();
        debug_assert!(is_integer(&d));
        d.numer().clone()
    }

    /// Exact integer inverse; `None` unless `|det| = 1`.
    pub fn unimodular_inverse(&self) -> Option<IntMat> {
        let inv = self.to_rat().inverse()?;
        inv.to_int()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.at(dst, j) + c * self.at(src, j);
            self.set(dst, j, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.at(r, j).clone();
            self.set(r, j, v);
        }
    }

    /// Row-style Hermite normal form.
    ///
    /// Returns the echelon matrix (zero rows dropped); its rows are a basis of
    /// the row span with positive pivots and reduced entries above them.
    pub fn hnf(&self) -> IntMat {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            // Clear column c below row r down to a single pivot via gcd steps.
            loop {
                let mut best: Option<usize> = None;
                for i in r..rows {
                    if !m.at(i, c).is_zero() {
                        best = match best {
                            None => Some(i),
                            Some(b) => {
                                if m.at(i, c).abs() < m.at(b, c).abs() {
                                    Some(i)
                                } else {
                                    Some(b)
                                }
                            }
                        };
                    }
                }
                let Some(b) = best else {
                    break;
                };
                m.swap_rows(r, b);
                let piv = m.at(r, c).clone();
                let mut done = true;
                for i in r + 1..rows {
                    if m.at(i, c).is_zero() {
                        continue;
                    }
                    // Round-to-nearest quotient keeps entries small.
                    let q = nearest_div(m.at(i, c), &piv);
                    m.add_row_multiple(i, r, &(-q));
                    if !m.at(i, c).is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if m.at(r, c).is_zero() {
                continue;
            }
            if m.at(r, c).is_negative() {
                m.negate_row(r);
            }
            let piv = m.at(r, c).clone();
            for i in 0..r {
                let q = m.at(i, c).div_floor(&piv);
                m.add_row_multiple(i, r, &(-q));
            }
            r += 1;
        }
        IntMat::from_rows((0..r).map(|i| m.row(i).to_vec()).collect())
    }

    /// Smith normal form with left-transform tracking.
    ///
    /// Produces diagonal `d_1 | d_2 | ...` and a unimodular `U` such that
    /// `U * self * V` is that diagonal for some (untracked) unimodular `V`.
    pub fn snf(&self) -> Snf {
        let mut a = self.clone();
        let (rows, cols) = (a.rows, a.cols);
        let mut u = IntMat::identity(rows);
        let n = rows.min(cols);
        let mut t = 0;
        while t < n {
            // Find the nonzero entry of least magnitude in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a.at(i, j).is_zero() {
                        best = match best {
                            None => Some((i, j)),
                            Some((bi, bj)) => {
                                if a.at(i, j).abs() < a.at(bi, bj).abs() {
                                    Some((i, j))
                                } else {
                                    Some((bi, bj))
                                }
                            }
                        };
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            a.swap_rows(t, bi);
            u.swap_rows(t, bi);
            swap_cols(&mut a, t, bj);

            // Clear row and column t; restart whenever a remainder survives.
            let mut dirty = false;
            let piv = a.at(t, t).clone();
            for i in t + 1..rows {
                if a.at(i, t).is_zero() {
                    continue;
                }
                let q = nearest_div(a.at(i, t), &piv);
                a.add_row_multiple(i, t, &(-q.clone()));
                u.add_row_multiple(i, t, &(-q));
                if !a.at(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a.at(t, j).is_zero() {
                    continue;
                }
                let q = nearest_div(a.at(t, j), &piv);
                add_col_multiple(&mut a, j, t, &(-q));
                if !a.at(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: pivot must divide the whole trailing block.
            let piv = a.at(t, t).clone();
            let mut fixed = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(a.at(i, j) % &piv).is_zero() {
                        a.add_row_multiple(t, i, &BigInt::one());
                        u.add_row_multiple(t, i, &BigInt::one());
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if !fixed {
                continue;
            }
            if a.at(t, t).is_negative() {
                a.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        let divisors: Vec<BigInt> = (0..t).map(|i| a.at(i, i).clone()).collect();
        let left_inv = u
            .unimodular_inverse()
            .expect("left transform is unimodular by construction");
        Snf {
            divisors,
            left: u,
            left_inv,
        }
    }

    pub fn lex_cmp(&self, other: &IntMat) -> Ordering {
        (self.rows, self.cols, &self.data).cmp(&(other.rows, other.cols, &other.data))
    }
}

/// Result of a Smith normal form computation.
#[derive(Debug, Clone)]
pub struct Snf {
    /// Nonzero diagonal entries, each dividing the next.
    pub divisors: Vec<BigInt>,
    /// Row transform `U` with `U * A * V` diagonal.
    pub left: IntMat,
    /// `U^{-1}`.
    pub left_inv: IntMat,
}

fn swap_cols(m: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.nrows() {
        let x = m.at(i, a).clone();
        let y = m.at(i, b).clone();
        m.set(i, a, y);
        m.set(i, b, x);
    }
}

/// col[dst] += c * col[src]
fn add_col_multiple(m: &mut IntMat, dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for i in 0..m.nrows() {
        let v = m.at(i, dst) + c * m.at(i, src);
        m.set(i, dst, v);
    }
}

/// Quotient rounded to nearest (ties toward floor), so remainders stay small.
fn nearest_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    if BigInt::from(2) * r.abs() > b.abs() {
        q + BigInt::one()
    } else {
        q
    }
}

/// Exact dot product of integer vectors.
pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    let mut s = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    #[test]
    fn det_and_inverse() {
        let a2 = RatMat::from_i64(&[&[2, -1], &[-1, 2]]);
        assert_eq!(a2.det(), rat_int(3));
        let inv = a2.inverse().unwrap();
        assert_eq!(a2.mul(&inv), RatMat::identity(2));
        let singular = RatMat::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det(), rat_int(0));
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn positive_definite_check() {
        assert!(RatMat::from_i64(&[&[2, -1], &[-1, 2]])
            .check_positive_definite()
            .is_ok());
        assert!(matches!(
            RatMat::from_i64(&[&[2, 1], &[1, 0]]).check_positive_definite(),
            Err(Error::NotPositiveDefinite { minor: 2 })
        ));
        assert!(matches!(
            RatMat::from_i64(&[&[2, 1], &[3, 2]]).check_positive_definite(),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn hnf_basic() {
        let m = IntMat::from_i64(&[&[2, 4], &[1, 3], &[3, 7]]);
        let h = m.hnf();
        assert_eq!(h, IntMat::from_i64(&[&[1, 1], &[0, 2]]));

        let m = IntMat::from_i64(&[&[4, 0], &[0, 6], &[2, 2]]);
        let h = m.hnf();
        // The span works out to 2Z x 2Z.
        assert_eq!(h, IntMat::from_i64(&[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn snf_of_gram_matrices() {
        // A2: Z/3
        let a2 = IntMat::from_i64(&[&[2, -1], &[-1, 2]]);
        let s = a2.snf();
        assert_eq!(s.divisors, vec![BigInt::from(1), BigInt::from(3)]);
        // D4: (Z/2)^2
        let d4 = IntMat::from_i64(&[
            &[2, 0, -1, 0],
            &[0, 2, -1, 0],
            &[-1, -1, 2, -1],
            &[0, 0, -1, 2],
        ]);
        let s = d4.snf();
        assert_eq!(
            s.divisors,
            vec![
                BigInt::from(1),
                BigInt::from(1),
                BigInt::from(2),
                BigInt::from(2)
            ]
        );
        // U * A * V diagonal: check U is unimodular and U^{-1} correct.
        assert_eq!(s.left.det().abs(), BigInt::one());
        assert_eq!(s.left.mul(&s.left_inv), IntMat::identity(4));
    }

    #[test]
    fn snf_divisibility_chain() {
        let m = IntMat::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let s = m.snf();
        for w in s.divisors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        let prod: BigInt = s.divisors.iter().product();
        assert_eq!(prod, m.det().abs());
    }
}
