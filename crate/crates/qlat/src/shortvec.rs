//! Complete short-vector enumeration, minima, roots, and represented-integer
//! tables.
//!
//! The enumerator is Fincke-Pohst on an exactly LLL-reduced Gram matrix. A
//! floating-point quadratic completion prunes the tree with an additive
//! safety slack; every surviving candidate is then re-verified in exact
//! integer arithmetic, so the reported vectors and norms are exact. One
//! representative per +/- pair is reported, the one whose first nonzero
//! coordinate (in the original basis) is positive.

use crate::error::{Error, Result};
use crate::lattice::{self, Lattice};
use crate::lll::{self, ReducedGram};
use crate::mat::{dot_int, IntMat, RatMat};
use crate::rat::{self, Rat};
use crate::Limits;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// A nonzero lattice vector with its exact norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortVector {
    /// Integer coordinates in the lattice basis (dual basis for dual queries).
    pub coords: Vec<BigInt>,
    /// `Q(coords)`, recomputed exactly.
    pub norm: Rat,
}

struct FloatForm {
    c: Vec<f64>,
    m: Vec<Vec<f64>>,
}

/// Quadratic completion `Q(x) ~ sum_i c_i (x_i + sum_{j>i} m_ij x_j)^2`.
fn float_completion(g: &RatMat) -> FloatForm {
    let n = g.nrows();
    let mut a = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = rat::to_f64(g.at(i, j));
        }
    }
    let mut c = vec![0.0f64; n];
    let mut m = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        c[i] = a[i][i];
        for j in i + 1..n {
            m[i][j] = a[i][j] / c[i];
        }
        for k in i + 1..n {
            for l in k..n {
                a[k][l] -= c[i] * m[i][k] * m[i][l];
                a[l][k] = a[k][l];
            }
        }
    }
    FloatForm { c, m }
}

struct EnumState<'a> {
    n: usize,
    form: FloatForm,
    bound_f: f64,
    bound: &'a Rat,
    gram_num: IntMat,
    gram_den: BigInt,
    nodes: u64,
    budget: u64,
    x: Vec<i64>,
    out: Vec<(Vec<i64>, Rat)>,
}

impl EnumState<'_> {
    fn exact_norm(&self, x: &[i64]) -> Rat {
        let xv: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let mut num = BigInt::zero();
        for i in 0..self.n {
            if xv[i].is_zero() {
                continue;
            }
            num += &xv[i] * dot_int(self.gram_num.row(i), &xv);
        }
        Rat::new(num, self.gram_den.clone())
    }

    /// DFS over levels n-1 .. 0. `partial` is the float norm contribution of
    /// the already-assigned coordinates; `zero_above` restricts to the
    /// canonical half-space (highest-index nonzero coordinate positive).
    fn descend(&mut self, level: usize, partial: f64, zero_above: bool) -> Result<()> {
        let i = level;
        let mut t = 0.0f64;
        for j in i + 1..self.n {
            t += self.form.m[i][j] * self.x[j] as f64;
        }
        let room = (self.bound_f - partial) / self.form.c[i];
        if room < 0.0 {
            return Ok(());
        }
        let r = room.sqrt() + 1e-9;
        if !r.is_finite() || r > 1e12 {
            return Err(Error::BoundTooLargeForBudget {
                budget: self.budget,
            });
        }
        let lo = if zero_above { 0 } else { (-t - r).ceil() as i64 };
        let hi = (-t + r).floor() as i64;
        for v in lo..=hi {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BoundTooLargeForBudget {
                    budget: self.budget,
                });
            }
            let d = v as f64 + t;
            let term = self.form.c[i] * d * d;
            if partial + term > self.bound_f {
                continue;
            }
            self.x[i] = v;
            if i == 0 {
                if self.x.iter().any(|&c| c != 0) {
                    let norm = self.exact_norm(&self.x);
                    if !norm.is_zero() && norm <= *self.bound {
                        self.out.push((self.x.clone(), norm));
                    }
                }
            } else {
                self.descend(i - 1, partial + term, zero_above && v == 0)?;
            }
        }
        self.x[i] = 0;
        Ok(())
    }
}

/// Enumerates all nonzero vectors of norm <= `bound` for a reduced Gram
/// matrix, one per +/- pair, coordinates in the reduced basis.
fn enumerate_reduced(g: &RatMat, bound: &Rat, budget: u64) -> Result<Vec<(Vec<i64>, Rat)>> {
    let n = g.nrows();
    if bound < &Rat::zero() {
        return Err(Error::InvalidParameter("negative enumeration bound".into()));
    }
    if bound.is_zero() || n == 0 {
        return Ok(Vec::new());
    }
    let (gram_num, gram_den) = g.to_scaled_int();
    let bound_f = rat::to_f64(bound);
    let slack = 1e-7 * (1.0 + bound_f);
    let mut st = EnumState {
        n,
        form: float_completion(g),
        bound_f: bound_f + slack,
        bound,
        gram_num,
        gram_den,
        nodes: 0,
        budget,
        x: vec![0; n],
        out: Vec::new(),
    };
    st.descend(n - 1, 0.0, true)?;
    Ok(st.out)
}

fn map_to_original(y: &[i64], u: &IntMat) -> Vec<BigInt> {
    let n = u.nrows();
    let mut out = vec![BigInt::zero(); u.ncols()];
    for i in 0..n {
        if y[i] == 0 {
            continue;
        }
        let yi = BigInt::from(y[i]);
        for j in 0..u.ncols() {
            out[j] += &yi * u.at(i, j);
        }
    }
    out
}

fn sign_normalize(v: &mut [BigInt]) {
    for x in v.iter() {
        if x.is_zero() {
            continue;
        }
        if x.is_negative() {
            for y in v.iter_mut() {
                *y = -y.clone();
            }
        }
        return;
    }
}

/// All nonzero vectors with `Q(v) <= bound`, one per +/- pair, sorted by
/// (norm, lexicographic coordinates). Norms are exact.
pub fn short_vectors(l: &Lattice, bound: &Rat, limits: &Limits) -> Result<Vec<ShortVector>> {
    let red = lll::lll_reduce(l.gram());
    short_vectors_prereduced(&red, bound, limits)
}

fn short_vectors_prereduced(
    red: &ReducedGram,
    bound: &Rat,
    limits: &Limits,
) -> Result<Vec<ShortVector>> {
    let raw = enumerate_reduced(&red.gram, bound, limits.enumeration_nodes)?;
    let mut out: Vec<ShortVector> = raw
        .into_iter()
        .map(|(y, norm)| {
            let mut coords = map_to_original(&y, &red.u);
            sign_normalize(&mut coords);
            ShortVector { coords, norm }
        })
        .collect();
    out.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| a.coords.cmp(&b.coords)));
    Ok(out)
}

/// Least nonzero norm. A basis vector of the reduced Gram is a witness bound,
/// so one enumeration up to the least diagonal entry suffices.
pub fn minimum(l: &Lattice, limits: &Limits) -> Result<Rat> {
    let red = lll::lll_reduce(l.gram());
    let bound = (0..l.rank())
        .map(|i| red.gram.at(i, i).clone())
        .min()
        .expect("rank >= 1");
    let vecs = short_vectors_prereduced(&red, &bound, limits)?;
    Ok(vecs
        .into_iter()
        .map(|v| v.norm)
        .min()
        .expect("a reduced basis vector attains the bound"))
}

/// Minimum of the dual lattice `L^#`.
pub fn dual_minimum(l: &Lattice, limits: &Limits) -> Result<Rat> {
    if !lattice::is_integral(l) {
        return Err(Error::NotIntegral);
    }
    minimum(&lattice::dual(l), limits)
}

/// Least norm over dual vectors that are not in `L`.
///
/// A dual vector with dual coordinates `y` lies in `L` iff `y * G^{-1}` is an
/// integer vector. Errors for unimodular lattices (the dual equals `L`).
pub fn dual_minimum_outside(l: &Lattice, limits: &Limits) -> Result<Rat> {
    if !lattice::is_integral(l) {
        return Err(Error::NotIntegral);
    }
    let disc = lattice::discriminant(l);
    if disc == Rat::one() {
        return Err(Error::InvalidParameter(
            "unimodular lattice: every dual vector lies in the lattice".into(),
        ));
    }
    let d = lattice::dual(l);
    let red = lll::lll_reduce(l.gram());
    // Reduce one representative of each nonzero coset modulo L; the least of
    // their norms is an upper bound attained by an actual outside vector.
    let group = lattice::discriminant_group(l)?;
    let ginv = l.gram().inverse().expect("posdef");
    let mut cap: Option<Rat> = None;
    for rep in &group.coset_reps {
        let basis_coords = RatMat::from_rows(vec![rep.clone()]).mul(&ginv);
        if basis_coords.is_integral() {
            continue; // the zero coset
        }
        let reduced = babai_reduce(&red, basis_coords.row(0));
        let norm = norm_in_basis(l.gram(), &reduced);
        cap = Some(match cap {
            None => norm,
            Some(c) => c.min(norm),
        });
    }
    let cap = cap.expect("non-unimodular lattice has a nonzero coset");
    let vecs = short_vectors(&d, &cap, limits)?;
    let mut best: Option<Rat> = None;
    for v in vecs {
        let coords: Vec<Rat> = v.coords.iter().cloned().map(Rat::from_integer).collect();
        let basis_coords = RatMat::from_rows(vec![coords]).mul(d.gram());
        if basis_coords.is_integral() {
            continue; // inside L
        }
        best = Some(match best {
            None => v.norm,
            Some(b) => b.min(v.norm),
        });
    }
    Ok(best.expect("the reduced coset representative is enumerated"))
}

fn norm_in_basis(gram: &RatMat, coords: &[Rat]) -> Rat {
    let row = RatMat::from_rows(vec![coords.to_vec()]);
    row.mul(gram).mul_transpose(&row).at(0, 0).clone()
}

/// Babai nearest-plane: subtracts a lattice vector from `target` (rational
/// coordinates in the original basis) and returns the short residue.
pub(crate) fn babai_reduce(red: &ReducedGram, target: &[Rat]) -> Vec<Rat> {
    let n = red.gram.nrows();
    let uinv = red
        .u
        .unimodular_inverse()
        .expect("LLL transform is unimodular");
    // Coordinates w.r.t. the reduced basis.
    let mut t: Vec<Rat> = (0..n)
        .map(|j| {
            let mut s = Rat::zero();
            for (k, targ) in target.iter().enumerate() {
                s += targ * &Rat::from_integer(uinv.at(k, j).clone());
            }
            s
        })
        .collect();
    let gs = lll::gso_public(&red.gram);
    for i in (0..n).rev() {
        // <t, b*_i> / B*_i = t_i + sum_{j>i} t_j mu_{ji}
        let mut mu = t[i].clone();
        for j in i + 1..n {
            mu += &t[j] * &gs.0[j][i];
        }
        let c = rat::round_to_int(&mu);
        if !c.is_zero() {
            t[i] -= Rat::from_integer(c);
        }
    }
    // Back to original-basis coordinates: x = t * U.
    (0..red.u.ncols())
        .map(|j| {
            let mut s = Rat::zero();
            for (i, ti) in t.iter().enumerate() {
                if !ti.is_zero() {
                    s += ti * &Rat::from_integer(red.u.at(i, j).clone());
                }
            }
            s
        })
        .collect()
}

/// All roots: nonzero vectors with `Q(v) <= 2`, one per +/- pair.
pub fn roots(l: &Lattice, limits: &Limits) -> Result<Vec<ShortVector>> {
    if !lattice::is_integral(l) {
        return Err(Error::NotIntegral);
    }
    short_vectors(l, &rat::rat_int(2), limits)
}

/// Sublattice generated by the roots, or `None` when there are none.
pub fn root_sublattice(l: &Lattice, limits: &Limits) -> Result<Option<Lattice>> {
    let rts = roots(l, limits)?;
    if rts.is_empty() {
        return Ok(None);
    }
    let rows: Vec<Vec<BigInt>> = rts.into_iter().map(|v| v.coords).collect();
    let basis = IntMat::from_rows(rows).hnf();
    let b = basis.to_rat();
    let gram = b.mul(l.gram()).mul_transpose(&b);
    Ok(Some(Lattice::new(gram)?))
}

/// The set `{ m <= bound : some vector of L has norm m }`.
pub fn represented_integers(l: &Lattice, bound: u64, limits: &Limits) -> Result<BTreeSet<BigInt>> {
    if !lattice::is_integral(l) {
        return Err(Error::NotIntegral);
    }
    if bound < 1 {
        return Err(Error::InvalidParameter("bound must be >= 1".into()));
    }
    let vecs = short_vectors(l, &rat::rat_int(bound as i64), limits)?;
    Ok(vecs
        .into_iter()
        .map(|v| v.norm.to_integer())
        .collect())
}

/// Multiset of norms up to `bound` as (norm, count) pairs, sorted by norm.
/// Isometry invariant used as a cheap pre-filter.
pub fn norm_histogram(l: &Lattice, bound: &Rat, limits: &Limits) -> Result<Vec<(Rat, usize)>> {
    let vecs = short_vectors(l, bound, limits)?;
    let mut out: Vec<(Rat, usize)> = Vec::new();
    for v in vecs {
        match out.last_mut() {
            Some((n, c)) if *n == v.norm => *c += 1,
            _ => out.push((v.norm, 1)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn lat(rows: &[&[i64]]) -> Lattice {
        Lattice::new(RatMat::from_i64(rows)).unwrap()
    }

    fn a2() -> Lattice {
        lat(&[&[2, -1], &[-1, 2]])
    }

    /// Independent oracle: naive box search with exact coordinate bounds
    /// `x_i^2 <= bound * (G^{-1})_{ii}`.
    fn box_search(l: &Lattice, bound: &Rat) -> Vec<(Vec<BigInt>, Rat)> {
        let n = l.rank();
        let mut out: Vec<(Vec<BigInt>, Rat)> = Vec::new();
        let ginv = l.gram().inverse().unwrap();
        let caps: Vec<i64> = (0..n)
            .map(|i| {
                let m = bound * ginv.at(i, i);
                let mut k = 0i64;
                while Rat::from_integer(BigInt::from((k + 1) * (k + 1))) <= m {
                    k += 1;
                }
                k
            })
            .collect();
        let mut x: Vec<i64> = caps.iter().map(|&c| -c).collect();
        loop {
            let coords: Vec<Rat> = x.iter().map(|&v| rat_int(v)).collect();
            let norm = l.norm_of(&coords);
            if !norm.is_zero() && norm <= *bound {
                // Canonical representative: first nonzero positive.
                if x.iter().find(|&&v| v != 0).map(|&v| v > 0) == Some(true) {
                    out.push((x.iter().map(|&v| BigInt::from(v)).collect(), norm));
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
                    return out;
                }
                x[i] += 1;
                if x[i] <= caps[i] {
                    break;
                }
                x[i] = -caps[i];
                i += 1;
            }
        }
    }

    fn check_against_oracle(l: &Lattice, bound: &Rat) {
        let got = short_vectors(l, bound, &Limits::default()).unwrap();
        let want = box_search(l, bound);
        let got: Vec<(Vec<BigInt>, Rat)> = got.into_iter().map(|v| (v.coords, v.norm)).collect();
        assert_eq!(got, want, "enumeration disagrees with box search");
    }

    #[test]
    fn a2_matches_box_oracle() {
        check_against_oracle(&a2(), &rat_int(2));
        check_against_oracle(&a2(), &rat_int(10));
        let got = short_vectors(&a2(), &rat_int(2), &Limits::default()).unwrap();
        assert_eq!(got.len(), 3);
        assert!(got.iter().all(|v| v.norm == rat_int(2)));
    }

    #[test]
    fn skewed_lattices_match_box_oracle() {
        check_against_oracle(&lat(&[&[1, 0], &[0, 7]]), &rat_int(9));
        check_against_oracle(&lat(&[&[4, 1, 2], &[1, 5, 3], &[2, 3, 9]]), &rat_int(12));
        check_against_oracle(
            &lat(&[&[2, 1, 0, 0], &[1, 2, 1, 1], &[0, 1, 3, 0], &[0, 1, 0, 4]]),
            &rat_int(8),
        );
    }

    #[test]
    fn rank_one() {
        let i1 = lat(&[&[1]]);
        let vecs = short_vectors(&i1, &rat_int(4), &Limits::default()).unwrap();
        let coords: Vec<Vec<BigInt>> = vecs.iter().map(|v| v.coords.clone()).collect();
        assert_eq!(
            coords,
            vec![vec![BigInt::from(1)], vec![BigInt::from(2)]]
        );
        assert_eq!(vecs[0].norm, rat_int(1));
        assert_eq!(vecs[1].norm, rat_int(4));
    }

    #[test]
    fn minimum_examples() {
        assert_eq!(minimum(&lat(&[&[1]]), &Limits::default()).unwrap(), rat_int(1));
        let i3 = Lattice::new(RatMat::identity(3)).unwrap();
        assert_eq!(minimum(&i3, &Limits::default()).unwrap(), rat_int(1));
        let scaled = lat(&[&[4, -2], &[-2, 4]]);
        assert_eq!(minimum(&scaled, &Limits::default()).unwrap(), rat_int(4));
    }

    #[test]
    fn dual_minimum_of_selfdual() {
        let i4 = Lattice::new(RatMat::identity(4)).unwrap();
        assert_eq!(dual_minimum(&i4, &Limits::default()).unwrap(), rat_int(1));
        assert!(dual_minimum_outside(&i4, &Limits::default()).is_err());
    }

    #[test]
    fn dual_minimum_outside_simple() {
        // <2>: dual is (1/2)Z with gram [[1/2]]; vectors outside Z<z>:
        // odd multiples of z/2, least norm 1/2.
        let l = lat(&[&[2]]);
        assert_eq!(
            dual_minimum_outside(&l, &Limits::default()).unwrap(),
            rat(1, 2)
        );
        // A2: dual min is 2/3 (glue vector), attained outside A2.
        assert_eq!(
            dual_minimum_outside(&a2(), &Limits::default()).unwrap(),
            rat(2, 3)
        );
        assert_eq!(dual_minimum(&a2(), &Limits::default()).unwrap(), rat(2, 3));
    }

    #[test]
    fn roots_and_root_sublattice() {
        let three = lat(&[&[3]]);
        assert!(roots(&three, &Limits::default()).unwrap().is_empty());
        assert!(root_sublattice(&three, &Limits::default())
            .unwrap()
            .is_none());
        let rts = roots(&a2(), &Limits::default()).unwrap();
        assert_eq!(rts.len(), 3);
        let sub = root_sublattice(&a2(), &Limits::default())
            .unwrap()
            .unwrap();
        assert_eq!(crate::lattice::discriminant(&sub), rat_int(3));
    }

    #[test]
    fn represented_integers_examples() {
        let i3 = Lattice::new(RatMat::identity(3)).unwrap();
        let got = represented_integers(&i3, 20, &Limits::default()).unwrap();
        let want: BTreeSet<BigInt> = (1..=20)
            .filter(|&m| m != 7 && m != 15)
            .map(BigInt::from)
            .collect();
        assert_eq!(got, want);

        let two = lat(&[&[2]]);
        let got = represented_integers(&two, 20, &Limits::default()).unwrap();
        let want: BTreeSet<BigInt> = [2, 8, 18].into_iter().map(BigInt::from).collect();
        assert_eq!(got, want);

        let got = represented_integers(&a2(), 10, &Limits::default()).unwrap();
        let want: BTreeSet<BigInt> = [2, 6, 8].into_iter().map(BigInt::from).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn budget_is_enforced() {
        let tight = Limits {
            enumeration_nodes: 3,
            search_nodes: 3,
        };
        let i3 = Lattice::new(RatMat::identity(3)).unwrap();
        assert!(matches!(
            short_vectors(&i3, &rat_int(50), &tight),
            Err(Error::BoundTooLargeForBudget { .. })
        ));
    }

    #[test]
    fn isometry_invariance_of_norm_multisets() {
        // Same lattice under a unimodular basis change.
        let g = RatMat::from_i64(&[&[2, 1, 0], &[1, 4, 1], &[0, 1, 6]]);
        let u = IntMat::from_i64(&[&[1, 2, 0], &[0, 1, 3], &[1, 2, 1]]);
        assert_eq!(u.det().abs(), BigInt::one());
        let g2 = u.to_rat().mul(&g).mul_transpose(&u.to_rat());
        let l1 = Lattice::new(g).unwrap();
        let l2 = Lattice::new(g2).unwrap();
        for bound in [rat_int(4), rat_int(9)] {
            let h1 = norm_histogram(&l1, &bound, &Limits::default()).unwrap();
            let h2 = norm_histogram(&l2, &bound, &Limits::default()).unwrap();
            assert_eq!(h1, h2);
        }
    }

    #[test]
    fn minimum_of_orthogonal_sum() {
        let l = lat(&[&[3]]);
        let m = a2();
        let s = crate::lattice::orthogonal_sum(&l, &m);
        let lim = Limits::default();
        assert_eq!(
            minimum(&s, &lim).unwrap(),
            minimum(&l, &lim).unwrap().min(minimum(&m, &lim).unwrap())
        );
    }
}
