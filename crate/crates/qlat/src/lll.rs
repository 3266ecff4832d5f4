//! Exact LLL reduction on Gram matrices.
//!
//! The reduction works on the Gram matrix alone (no ambient coordinates are
//! needed) and tracks the unimodular basis change. All Gram-Schmidt data is
//! computed over the rationals with delta = 3/4, so the output is a genuine
//! LLL-reduced Gram matrix, not a floating-point approximation.

use crate::mat::{IntMat, RatMat};
use crate::rat::{rat, round_to_int, Rat};
use num_bigint::BigInt;
use num_traits::Zero;

/// Result of reducing a Gram matrix: `gram = u * original * u^t`.
#[derive(Debug, Clone)]
pub struct ReducedGram {
    pub gram: RatMat,
    pub u: IntMat,
}

struct Gso {
    /// mu[i][j] for j < i
    mu: Vec<Vec<Rat>>,
    /// squared lengths of the Gram-Schmidt vectors
    b: Vec<Rat>,
}

fn gso(g: &RatMat) -> Gso {
    let n = g.nrows();
    let mut mu = vec![vec![Rat::zero(); n]; n];
    let mut b = vec![Rat::zero(); n];
    for i in 0..n {
        for j in 0..i {
            // <b_i, b*_j> = g[i][j] - sum_{k<j} mu[j][k] mu[i][k] b[k]
            let mut s = g.at(i, j).clone();
            for k in 0..j {
                s -= &mu[j][k] * &mu[i][k] * &b[k];
            }
            mu[i][j] = s / &b[j];
        }
        let mut s = g.at(i, i).clone();
        for k in 0..i {
            s -= &mu[i][k] * &mu[i][k] * &b[k];
        }
        b[i] = s;
    }
    Gso { mu, b }
}

/// Applies the row operation `b_i <- b_i + c * b_j` to Gram and transform.
fn row_op(g: &mut RatMat, u: &mut IntMat, i: usize, j: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    let n = g.nrows();
    let cr = Rat::from_integer(c.clone());
    for k in 0..n {
        let v = g.at(i, k) + &cr * g.at(j, k);
        g.set(i, k, v);
    }
    for k in 0..n {
        let v = g.at(k, i) + &cr * g.at(k, j);
        g.set(k, i, v);
    }
    for k in 0..u.ncols() {
        let v = u.at(i, k) + c * u.at(j, k);
        u.set(i, k, v);
    }
}

fn swap_basis(g: &mut RatMat, u: &mut IntMat, i: usize, j: usize) {
    let n = g.nrows();
    for k in 0..n {
        let a = g.at(i, k).clone();
        let b = g.at(j, k).clone();
        g.set(i, k, b);
        g.set(j, k, a);
    }
    for k in 0..n {
        let a = g.at(k, i).clone();
        let b = g.at(k, j).clone();
        g.set(k, i, b);
        g.set(k, j, a);
    }
    for k in 0..u.ncols() {
        let a = u.at(i, k).clone();
        let b = u.at(j, k).clone();
        u.set(i, k, b);
        u.set(j, k, a);
    }
}

/// Exact Gram-Schmidt data `(mu, b)` of a Gram matrix: `mu[i][j]` for `j < i`
/// and squared lengths `b[i]` of the orthogonalized vectors.
pub(crate) fn gso_public(g: &RatMat) -> (Vec<Vec<Rat>>, Vec<Rat>) {
    let gs = gso(g);
    (gs.mu, gs.b)
}

/// LLL-reduces a positive definite Gram matrix with delta = 3/4.
pub fn lll_reduce(gram: &RatMat) -> ReducedGram {
    let n = gram.nrows();
    let mut g = gram.clone();
    let mut u = IntMat::identity(n);
    if n <= 1 {
        return ReducedGram { gram: g, u };
    }
    let delta = rat(3, 4);
    let mut gs = gso(&g);
    let mut k = 1;
    while k < n {
        // Size-reduce b_k against b_{k-1}, ..., b_0.
        for j in (0..k).rev() {
            let q = round_to_int(&gs.mu[k][j]);
            if !q.is_zero() {
                row_op(&mut g, &mut u, k, j, &(-q.clone()));
                let qr = Rat::from_integer(q);
                for l in 0..j {
                    let v = &gs.mu[k][l] - &qr * &gs.mu[j][l];
                    gs.mu[k][l] = v;
                }
                gs.mu[k][j] = &gs.mu[k][j] - &qr;
            }
        }
        // Lovasz condition.
        let lhs = gs.b[k].clone();
        let rhs = (&delta - &gs.mu[k][k - 1] * &gs.mu[k][k - 1]) * &gs.b[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            swap_basis(&mut g, &mut u, k, k - 1);
            gs = gso(&g);
            k = k.max(2) - 1;
        }
    }
    ReducedGram { gram: g, u }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;
    use num_traits::{One, Signed};

    fn check_reduction(gram: &RatMat) {
        let red = lll_reduce(gram);
        // Unimodular transform and exact congruence.
        assert_eq!(red.u.det().abs(), BigInt::one());
        let back = red.u.to_rat().mul(gram).mul_transpose(&red.u.to_rat());
        assert_eq!(back, red.gram);
        // Size reduction and Lovasz condition hold in the output.
        let gs = gso(&red.gram);
        let n = gram.nrows();
        for i in 0..n {
            for j in 0..i {
                assert!(gs.mu[i][j].abs() <= rat(1, 2), "mu not size reduced");
            }
        }
        for i in 1..n {
            let lhs = gs.b[i].clone();
            let rhs = (rat(3, 4) - &gs.mu[i][i - 1] * &gs.mu[i][i - 1]) * &gs.b[i - 1];
            assert!(lhs >= rhs, "Lovasz condition violated");
        }
    }

    #[test]
    fn reduces_skewed_basis() {
        // Badly conditioned Gram of Z^2 with basis (1,0), (100,1).
        let g = RatMat::from_i64(&[&[1, 100], &[100, 10001]]);
        check_reduction(&g);
        let red = lll_reduce(&g);
        assert_eq!(red.gram, RatMat::identity(2));
    }

    #[test]
    fn preserves_determinant() {
        let g = RatMat::from_i64(&[&[4, 1, 2], &[1, 5, 3], &[2, 3, 9]]);
        check_reduction(&g);
        let red = lll_reduce(&g);
        assert_eq!(red.gram.det(), g.det());
    }

    #[test]
    fn rank_one_is_noop() {
        let g = RatMat::from_rows(vec![vec![rat_int(7)]]);
        let red = lll_reduce(&g);
        assert_eq!(red.gram, g);
    }
}
