//! The fundamental lattice value type and its basic invariants.
//!
//! A [`Lattice`] is an immutable value: a positive definite symmetric Gram
//! matrix over the rationals, optionally together with ambient coordinates
//! recording how it sits inside an orthogonal-sum ambient space. Equality is
//! Gram equality; isometry is a separate operation in [`crate::morphisms`].

use crate::error::{Error, Result};
use crate::mat::{IntMat, RatMat};
use crate::rat::{self, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Ambient coordinates: `generators * gram_ambient * generators^t = gram`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambient {
    /// One row per basis vector, in ambient coordinates.
    pub generators: RatMat,
    /// Gram matrix of the ambient space.
    pub gram: RatMat,
}

/// A positive definite lattice given by an exact Gram matrix.
#[derive(Debug, Clone)]
pub struct Lattice {
    rank: usize,
    gram: RatMat,
    ambient: Option<Ambient>,
    label: Option<String>,
}

impl PartialEq for Lattice {
    /// Lattices are equal when their Gram matrices are equal entrywise.
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl Eq for Lattice {}

/// Validates symmetry and positive definiteness, then wraps the Gram matrix.
pub fn make_lattice(gram: RatMat) -> Result<Lattice> {
    Lattice::new(gram)
}

impl Lattice {
    pub fn new(gram: RatMat) -> Result<Self> {
        if !gram.is_square() || gram.nrows() == 0 {
            return Err(Error::InvalidParameter(
                "Gram matrix must be square and nonempty".into(),
            ));
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        gram.check_positive_definite()?;
        Ok(Lattice {
            rank: gram.nrows(),
            gram,
            ambient: None,
            label: None,
        })
    }

    pub fn with_ambient(mut self, ambient: Ambient) -> Result<Self> {
        let check = ambient
            .generators
            .mul(&ambient.gram)
            .mul_transpose(&ambient.generators);
        if check != self.gram {
            return Err(Error::InvalidParameter(
                "ambient coordinates do not reproduce the Gram matrix".into(),
            ));
        }
        self.ambient = Some(ambient);
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &RatMat {
        &self.gram
    }

    pub fn ambient(&self) -> Option<&Ambient> {
        self.ambient.as_ref()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// `Q(x) = x * gram * x^t` for a coordinate vector.
    pub fn norm_of(&self, coords: &[Rat]) -> Rat {
        let row = RatMat::from_rows(vec![coords.to_vec()]);
        row.mul(&self.gram).mul_transpose(&row).at(0, 0).clone()
    }

    /// `B(x, y)` for coordinate vectors.
    pub fn inner(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let xr = RatMat::from_rows(vec![x.to_vec()]);
        let yr = RatMat::from_rows(vec![y.to_vec()]);
        xr.mul(&self.gram).mul_transpose(&yr).at(0, 0).clone()
    }

    /// Integer Gram matrix; errors unless the lattice is integral.
    pub fn gram_int(&self) -> Result<IntMat> {
        self.gram.to_int().ok_or(Error::NotIntegral)
    }
}

/// Exact determinant of the Gram matrix.
pub fn discriminant(l: &Lattice) -> Rat {
    l.gram().det()
}

/// Positive generator of the ideal of all inner products: the gcd of the
/// Gram entries.
pub fn scale(l: &Lattice) -> Rat {
    let mut g = Rat::zero();
    for i in 0..l.rank() {
        for j in 0..=i {
            g = rat::rat_gcd(&g, l.gram().at(i, j));
        }
    }
    g
}

/// True iff all inner products are integers.
pub fn is_integral(l: &Lattice) -> bool {
    l.gram().is_integral()
}

/// True iff integral with all diagonal entries even.
pub fn is_even(l: &Lattice) -> bool {
    if !is_integral(l) {
        return false;
    }
    (0..l.rank()).all(|i| l.gram().at(i, i).numer().is_even())
}

/// The dual lattice: Gram matrix of the dual basis is the inverse Gram.
pub fn dual(l: &Lattice) -> Lattice {
    let inv = l
        .gram()
        .inverse()
        .expect("positive definite Gram is invertible");
    let mut out = Lattice::new(inv.clone()).expect("inverse of posdef Gram is posdef");
    if let Some(a) = l.ambient() {
        let gens = inv.mul(&a.generators);
        out = out
            .with_ambient(Ambient {
                generators: gens,
                gram: a.gram.clone(),
            })
            .expect("dual basis coordinates are consistent");
    }
    out
}

/// Block-diagonal orthogonal sum.
pub fn orthogonal_sum(l: &Lattice, m: &Lattice) -> Lattice {
    let gram = RatMat::block_diag(&[l.gram(), m.gram()]);
    let mut out = Lattice::new(gram).expect("block diagonal of posdef is posdef");
    if let (Some(a), Some(b)) = (l.ambient(), m.ambient()) {
        let gens = RatMat::block_diag(&[&a.generators, &b.generators]);
        let agram = RatMat::block_diag(&[&a.gram, &b.gram]);
        out = out
            .with_ambient(Ambient {
                generators: gens,
                gram: agram,
            })
            .expect("block ambient is consistent");
    }
    if let (Some(x), Some(y)) = (l.label(), m.label()) {
        out = out.with_label(format!("perp({x}, {y})"));
    }
    out
}

/// The quotient `L^# / L` of an integral lattice.
///
/// Coset representatives are given in dual-basis coordinates (so an element
/// with coordinates `y` is the vector `y * G^{-1}` in lattice-basis
/// coordinates).
#[derive(Debug, Clone)]
pub struct DiscriminantGroup {
    /// Elementary divisors > 1, each dividing the next.
    pub elementary_divisors: Vec<BigInt>,
    /// One representative per coset, in dual coordinates; `order` entries.
    pub coset_reps: Vec<Vec<Rat>>,
    /// Group order = discriminant of the lattice.
    pub order: BigInt,
}

/// Computes `L^#/L` from the Smith normal form of the integer Gram matrix.
pub fn discriminant_group(l: &Lattice) -> Result<DiscriminantGroup> {
    let a = l.gram_int()?;
    let snf = a.snf();
    let order: BigInt = snf.divisors.iter().product();
    // In dual coordinates L^# = Z^n and L is the row/column span of the Gram
    // matrix, so L^#/L is the cokernel of G. With U G V = D the generator of
    // the i-th cyclic factor is the i-th column of U^{-1}, of order d_i.
    let n = l.rank();
    let gens: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|r| snf.left_inv.at(r, i).clone()).collect())
        .collect();
    let nontrivial: Vec<usize> = (0..n).filter(|&i| !snf.divisors[i].is_one()).collect();
    let mut reps: Vec<Vec<Rat>> = Vec::new();
    let mut counters: Vec<BigInt> = vec![BigInt::zero(); nontrivial.len()];
    loop {
        let mut rep = vec![BigInt::zero(); n];
        for (slot, &gi) in nontrivial.iter().enumerate() {
            for r in 0..n {
                rep[r] += &counters[slot] * &gens[gi][r];
            }
        }
        reps.push(rep.into_iter().map(Rat::from_integer).collect());
        // Odometer increment over prod [0, d_i).
        let mut slot = 0;
        loop {
            if slot == nontrivial.len() {
                let divisors = nontrivial
                    .iter()
                    .map(|&i| snf.divisors[i].clone())
                    .collect();
                debug_assert_eq!(BigInt::from(reps.len()), order);
                return Ok(DiscriminantGroup {
                    elementary_divisors: divisors,
                    coset_reps: reps,
                    order,
                });
            }
            counters[slot] += 1;
            if counters[slot] < snf.divisors[nontrivial[slot]] {
                break;
            }
            counters[slot] = BigInt::zero();
            slot += 1;
        }
    }
}

/// Order of a dual vector's coset in `L^#/L`: the least `f >= 1` with
/// `f * v` in `L`, where `v` is given in dual coordinates.
pub fn coset_order(l: &Lattice, dual_coords: &[Rat]) -> Result<BigInt> {
    let ginv = l
        .gram()
        .inverse()
        .expect("positive definite Gram is invertible");
    let row = RatMat::from_rows(vec![dual_coords.to_vec()]);
    let basis_coords = row.mul(&ginv);
    if !row.is_integral() {
        return Err(Error::InvalidParameter(
            "vector is not in the dual lattice (non-integer dual coordinates)".into(),
        ));
    }
    let mut f = BigInt::one();
    for j in 0..basis_coords.ncols() {
        f = f.lcm(basis_coords.at(0, j).denom());
    }
    Ok(f)
}

// --- JSON interchange -------------------------------------------------------

/// Serializes to `{"rank": n, "gram": [["p/q", ...], ...], "label": ...}`,
/// with integral entries written as plain decimal integer strings.
pub fn lattice_to_json(l: &Lattice) -> serde_json::Value {
    let gram: Vec<Vec<String>> = (0..l.rank())
        .map(|i| {
            (0..l.rank())
                .map(|j| rat::format_rat(l.gram().at(i, j)))
                .collect()
        })
        .collect();
    let mut obj = serde_json::Map::new();
    obj.insert("rank".into(), serde_json::json!(l.rank()));
    obj.insert("gram".into(), serde_json::json!(gram));
    if let Some(label) = l.label() {
        obj.insert("label".into(), serde_json::json!(label));
    }
    serde_json::Value::Object(obj)
}

pub fn lattice_from_json(text: &str) -> Result<Lattice> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::InvalidJson(e.to_string()))?;
    lattice_from_json_value(&v)
}

pub fn lattice_from_json_value(v: &serde_json::Value) -> Result<Lattice> {
    let rank = v
        .get("rank")
        .and_then(|r| r.as_u64())
        .ok_or_else(|| Error::InvalidJson("missing rank".into()))? as usize;
    let gram_val = v
        .get("gram")
        .and_then(|g| g.as_array())
        .ok_or_else(|| Error::InvalidJson("missing gram".into()))?;
    if gram_val.len() != rank {
        return Err(Error::InvalidJson("gram has wrong number of rows".into()));
    }
    let mut rows = Vec::with_capacity(rank);
    for row in gram_val {
        let row = row
            .as_array()
            .ok_or_else(|| Error::InvalidJson("gram row is not an array".into()))?;
        if row.len() != rank {
            return Err(Error::InvalidJson("gram row has wrong length".into()));
        }
        let mut out = Vec::with_capacity(rank);
        for entry in row {
            let s = entry
                .as_str()
                .ok_or_else(|| Error::InvalidJson("gram entry is not a string".into()))?;
            out.push(rat::parse_rat(s).map_err(|e| Error::InvalidJson(e.to_string()))?);
        }
        rows.push(out);
    }
    let mut l = Lattice::new(RatMat::from_rows(rows))?;
    if let Some(label) = v.get("label").and_then(|s| s.as_str()) {
        l = l.with_label(label);
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn a2() -> Lattice {
        Lattice::new(RatMat::from_i64(&[&[2, -1], &[-1, 2]])).unwrap()
    }

    #[test]
    fn make_lattice_validates() {
        assert_eq!(discriminant(&a2()), rat_int(3));
        let i1 = Lattice::new(RatMat::from_i64(&[&[1]])).unwrap();
        assert_eq!(discriminant(&i1), rat_int(1));
        assert!(matches!(
            Lattice::new(RatMat::from_i64(&[&[2, 1], &[1, 0]])),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(matches!(
            Lattice::new(RatMat::from_i64(&[&[2, 1], &[0, 2]])),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn scale_and_integrality() {
        assert_eq!(scale(&a2()), rat_int(1));
        assert!(is_integral(&a2()));
        let two = Lattice::new(RatMat::from_i64(&[&[2]])).unwrap();
        assert_eq!(scale(&two), rat_int(2));
        let half = Lattice::new(RatMat::from_rows(vec![vec![rat(1, 2)]])).unwrap();
        assert_eq!(scale(&half), rat(1, 2));
        assert!(!is_integral(&half));
    }

    #[test]
    fn dual_involution_and_disc() {
        let l = a2();
        let d = dual(&l);
        assert_eq!(discriminant(&d), rat(1, 3));
        assert_eq!(dual(&d), l);
        let two = Lattice::new(RatMat::from_i64(&[&[2]])).unwrap();
        assert_eq!(dual(&two).gram(), &RatMat::from_rows(vec![vec![rat(1, 2)]]));
    }

    #[test]
    fn orthogonal_sum_multiplicativity() {
        let l = a2();
        let s = Lattice::new(RatMat::from_i64(&[&[5]])).unwrap();
        let sum = orthogonal_sum(&l, &s);
        assert_eq!(sum.rank(), 3);
        assert_eq!(discriminant(&sum), rat_int(15));
    }

    #[test]
    fn discriminant_group_a2() {
        let g = discriminant_group(&a2()).unwrap();
        assert_eq!(g.order, BigInt::from(3));
        assert_eq!(g.elementary_divisors, vec![BigInt::from(3)]);
        assert_eq!(g.coset_reps.len(), 3);
        // All reps pairwise non-congruent mod L: distinct fractional parts of
        // basis coordinates.
        let ginv = a2().gram().inverse().unwrap();
        let mut keys = std::collections::BTreeSet::new();
        for rep in &g.coset_reps {
            let row = RatMat::from_rows(vec![rep.clone()]);
            let bc = row.mul(&ginv);
            let key: Vec<Rat> = (0..2).map(|j| bc.at(0, j) - bc.at(0, j).floor()).collect();
            assert!(keys.insert(key));
        }
    }

    #[test]
    fn discriminant_group_unimodular_is_trivial() {
        let i3 = Lattice::new(RatMat::identity(3)).unwrap();
        let g = discriminant_group(&i3).unwrap();
        assert_eq!(g.order, BigInt::from(1));
        assert!(g.elementary_divisors.is_empty());
        assert_eq!(g.coset_reps.len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let l = a2().with_label("A(2)");
        let json = lattice_to_json(&l).to_string();
        let back = lattice_from_json(&json).unwrap();
        assert_eq!(back, l);
        assert_eq!(back.label(), Some("A(2)"));
        // Integral entries are plain integer strings.
        assert!(json.contains("\"2\"") && json.contains("\"-1\""));
        let half = Lattice::new(RatMat::from_rows(vec![vec![rat(1, 2)]])).unwrap();
        let json = lattice_to_json(&half).to_string();
        assert!(json.contains("\"1/2\""));
        assert_eq!(lattice_from_json(&json).unwrap(), half);
    }

    #[test]
    fn coset_order_of_dual_vector() {
        // Dual coords (0,1) in A2: order 3 (generator of Z/3).
        let f = coset_order(&a2(), &[rat_int(0), rat_int(1)]).unwrap();
        assert_eq!(f, BigInt::from(3));
        // A lattice vector has order 1: dual coords of basis vector = Gram row.
        let f = coset_order(&a2(), &[rat_int(2), rat_int(-1)]).unwrap();
        assert_eq!(f, BigInt::from(1));
    }
}
