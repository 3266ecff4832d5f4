//! Root lattices, glue vectors, the one-generator glue construction, the
//! named lattices built from it, and the primitive-overlattice classifier.
//!
//! The glue construction takes integral lattices `L_1, ..., L_t` and one dual
//! vector `x_i` per component, and returns the lattice generated by
//! `L_1 perp ... perp L_t` together with `x_1 + ... + x_t`. The result is
//! integral exactly when `Q(x_1 + ... + x_t)` is an integer. Glue elements
//! are always given in dual coordinates of their component, so membership in
//! the dual is simply integrality of the coordinates.

use crate::error::{Error, Result};
use crate::lattice::{self, Ambient, Lattice};
use crate::lll;
use crate::mat::RatMat;
use crate::rat::{self, Rat};
use crate::shortvec;
use crate::Limits;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Families of root lattices used by the constructions.
///
/// `DPlus` is the unimodular overlattice `D_n + Z[1]`, defined for `4 | n`.
/// E6 carries no glue data here and has no constructor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootFamily {
    I,
    A,
    D,
    E7,
    E8,
    DPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootLatticeId {
    pub family: RootFamily,
    pub n: usize,
}

impl RootLatticeId {
    pub fn new(family: RootFamily, n: usize) -> Self {
        RootLatticeId { family, n }
    }

    pub fn label(&self) -> String {
        match self.family {
            RootFamily::I => format!("I({})", self.n),
            RootFamily::A => format!("A({})", self.n),
            RootFamily::D => format!("D({})", self.n),
            RootFamily::E7 => "E7".to_string(),
            RootFamily::E8 => "E8".to_string(),
            RootFamily::DPlus => format!("Dplus({})", self.n),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        match self.family {
            RootFamily::I | RootFamily::A => {
                if self.n == 0 {
                    return bad("rank parameter must be >= 1");
                }
            }
            RootFamily::D => {
                if self.n < 4 {
                    return bad("D(n) requires n >= 4");
                }
            }
            RootFamily::DPlus => {
                if self.n < 4 || self.n % 4 != 0 {
                    return bad("Dplus(n) requires n >= 4 with n divisible by 4");
                }
            }
            RootFamily::E7 => {
                if self.n != 7 {
                    return bad("E7 has rank 7");
                }
            }
            RootFamily::E8 => {
                if self.n != 8 {
                    return bad("E8 has rank 8");
                }
            }
        }
        Ok(())
    }
}

/// The lattice spanned by (possibly dependent, rational) generator rows
/// inside the quadratic space with Gram matrix `space_gram`, reduced to a
/// basis by exact Hermite normal form.
///
/// Returns the lattice together with its basis rows in space coordinates.
pub fn span_lattice(space_gram: &RatMat, gens: &RatMat) -> Result<(Lattice, RatMat)> {
    let (ints, den) = gens.to_scaled_int();
    let h = ints.hnf();
    let inv_den = Rat::new(BigInt::one(), den);
    let mut basis = h.to_rat();
    for i in 0..basis.nrows() {
        for j in 0..basis.ncols() {
            let v = basis.at(i, j) * &inv_den;
            basis.set(i, j, v);
        }
    }
    let gram = basis.mul(space_gram).mul_transpose(&basis);
    let l = Lattice::new(gram)?;
    Ok((l, basis))
}

fn unit_row(n: usize, i: usize) -> Vec<Rat> {
    let mut row = vec![Rat::zero(); n];
    row[i] = rat::rat_int(1);
    row
}

fn generator_rows(id: &RootLatticeId) -> RatMat {
    let n = id.n;
    match id.family {
        RootFamily::I => RatMat::identity(n),
        RootFamily::A => {
            // a_0 + ... + a_n = 0 inside Z^{n+1}; basis e_i - e_{i+1}.
            let dim = n + 1;
            let mut rows = Vec::with_capacity(n);
            for i in 0..n {
                let mut r = vec![Rat::zero(); dim];
                r[i] = rat::rat_int(1);
                r[i + 1] = rat::rat_int(-1);
                rows.push(r);
            }
            RatMat::from_rows(rows)
        }
        RootFamily::D | RootFamily::DPlus => {
            // a_1 + ... + a_n even inside Z^n; basis e_1 + e_2, e_1 - e_2,
            // e_2 - e_3, ..., e_{n-1} - e_n; DPlus adds (1/2, ..., 1/2).
            let mut rows = Vec::with_capacity(n + 1);
            let mut r = vec![Rat::zero(); n];
            r[0] = rat::rat_int(1);
            r[1] = rat::rat_int(1);
            rows.push(r);
            let mut r = vec![Rat::zero(); n];
            r[0] = rat::rat_int(1);
            r[1] = rat::rat_int(-1);
            rows.push(r);
            for i in 1..n - 1 {
                let mut r = vec![Rat::zero(); n];
                r[i] = rat::rat_int(1);
                r[i + 1] = rat::rat_int(-1);
                rows.push(r);
            }
            if id.family == RootFamily::DPlus {
                rows.push(vec![rat::rat(1, 2); n]);
            }
            RatMat::from_rows(rows)
        }
        RootFamily::E8 => {
            // Even coordinate system: D_8 plus the glue vector (1/2, ..., 1/2).
            let d8 = generator_rows(&RootLatticeId::new(RootFamily::D, 8));
            let mut rows: Vec<Vec<Rat>> = (0..d8.nrows()).map(|i| d8.row(i).to_vec()).collect();
            rows.push(vec![rat::rat(1, 2); 8]);
            RatMat::from_rows(rows)
        }
        RootFamily::E7 => {
            // Coordinate-sum-zero sublattice of E8 in the even system:
            // generated by e_i - e_{i+1} and the half vector
            // (1/2,1/2,1/2,1/2,-1/2,-1/2,-1/2,-1/2).
            let mut rows = Vec::with_capacity(8);
            for i in 0..7 {
                let mut r = vec![Rat::zero(); 8];
                r[i] = rat::rat_int(1);
                r[i + 1] = rat::rat_int(-1);
                rows.push(r);
            }
            let mut half = vec![rat::rat(1, 2); 8];
            for x in half.iter_mut().skip(4) {
                *x = rat::rat(-1, 2);
            }
            rows.push(half);
            RatMat::from_rows(rows)
        }
    }
}

/// Builds a root lattice with ambient coordinates, per its defining
/// coordinate model.
pub fn root_lattice(id: RootLatticeId) -> Result<Lattice> {
    id.validate()?;
    let gens = generator_rows(&id);
    let space = RatMat::identity(gens.ncols());
    let (l, basis) = span_lattice(&space, &gens)?;
    if l.rank() != id.n {
        return Err(Error::InvalidParameter(format!(
            "generators of {} span rank {} instead of {}",
            id.label(),
            l.rank(),
            id.n
        )));
    }
    l.with_ambient(Ambient {
        generators: basis,
        gram: space,
    })
    .map(|l| l.with_label(id.label()))
}

/// Glue vector `[i]` of a root lattice, converted to dual coordinates of the
/// basis produced by [`root_lattice`].
pub fn glue_vector(id: RootLatticeId, index: i64) -> Result<Vec<Rat>> {
    id.validate()?;
    let n = id.n;
    let out_of_range = || Error::IndexOutOfRange {
        family: id.label(),
        rank: n,
        index,
    };
    let ambient: Vec<Rat> = match id.family {
        RootFamily::I | RootFamily::E8 | RootFamily::DPlus => {
            if index != 0 {
                return Err(out_of_range());
            }
            vec![Rat::zero(); n]
        }
        RootFamily::A => {
            if index < 0 || index as usize > n {
                return Err(out_of_range());
            }
            let i = index as usize;
            let j = n + 1 - i;
            let dim = n + 1;
            let mut v = Vec::with_capacity(dim);
            for _ in 0..j {
                v.push(Rat::new(BigInt::from(i), BigInt::from(dim)));
            }
            for _ in 0..i {
                v.push(-Rat::new(BigInt::from(j), BigInt::from(dim)));
            }
            v
        }
        RootFamily::D => match index {
            0 => vec![Rat::zero(); n],
            1 => vec![rat::rat(1, 2); n],
            2 => {
                let mut v = vec![Rat::zero(); n];
                v[n - 1] = rat::rat_int(1);
                v
            }
            3 => {
                let mut v = vec![rat::rat(1, 2); n];
                v[n - 1] = rat::rat(-1, 2);
                v
            }
            _ => return Err(out_of_range()),
        },
        RootFamily::E7 => match index {
            0 => vec![Rat::zero(); 8],
            1 => {
                let mut v = vec![rat::rat(1, 4); 8];
                v[6] = rat::rat(-3, 4);
                v[7] = rat::rat(-3, 4);
                v
            }
            _ => return Err(out_of_range()),
        },
    };
    let l = root_lattice(id)?;
    let amb = l.ambient().expect("root lattices carry ambient coordinates");
    let row = RatMat::from_rows(vec![ambient]);
    let dual_coords = row.mul(&amb.gram).mul_transpose(&amb.generators);
    debug_assert!(
        dual_coords.is_integral(),
        "glue vector must pair integrally with the lattice"
    );
    Ok(dual_coords.row(0).to_vec())
}

/// One component of a glue specification.
#[derive(Debug, Clone)]
pub enum GlueComponent {
    /// A lattice with a glue element given in dual coordinates.
    Piece { lattice: Lattice, element: Vec<Rat> },
    /// Shorthand for the rank-1 lattice `<a>` with glue element `z/m`.
    Scalar { a: BigInt, m: BigInt },
}

impl GlueComponent {
    pub fn piece(lattice: Lattice, element: Vec<Rat>) -> Self {
        GlueComponent::Piece { lattice, element }
    }

    pub fn scalar(a: i64, m: i64) -> Self {
        GlueComponent::Scalar {
            a: BigInt::from(a),
            m: BigInt::from(m),
        }
    }

    /// Desugars to (lattice, glue element in dual coordinates).
    fn resolve(&self) -> Result<(Lattice, Vec<Rat>)> {
        match self {
            GlueComponent::Piece { lattice, element } => {
                if element.len() != lattice.rank() {
                    return Err(Error::MalformedSpec(
                        "glue element length differs from component rank".into(),
                    ));
                }
                if element.iter().any(|c| !rat::is_integer(c)) {
                    return Err(Error::MalformedSpec(
                        "glue element is not in the dual lattice (it pairs \
                         non-integrally with the component)"
                            .into(),
                    ));
                }
                Ok((lattice.clone(), element.clone()))
            }
            GlueComponent::Scalar { a, m } => {
                if a <= &BigInt::zero() || m <= &BigInt::zero() {
                    return Err(Error::MalformedSpec(
                        "scalar glue shorthand needs a >= 1 and m >= 1".into(),
                    ));
                }
                if !(a % m).is_zero() {
                    return Err(Error::MalformedSpec(format!(
                        "z/{m} is not in the dual of <{a}> (m must divide a)"
                    )));
                }
                let l = scalar_lattice(a.clone())?;
                let c = Rat::new(a.clone(), m.clone());
                Ok((l, vec![c]))
            }
        }
    }
}

/// A glue specification: components plus one dual-vector element each.
#[derive(Debug, Clone)]
pub struct GlueSpec {
    pub components: Vec<GlueComponent>,
}

impl GlueSpec {
    pub fn new(components: Vec<GlueComponent>) -> Self {
        GlueSpec { components }
    }
}

/// The rank-1 lattice `<a>`.
pub fn scalar_lattice(a: BigInt) -> Result<Lattice> {
    if a <= BigInt::zero() {
        return Err(Error::InvalidParameter(
            "scalar lattice needs a >= 1".into(),
        ));
    }
    let label = format!("s({a})");
    let gram = RatMat::from_rows(vec![vec![Rat::from_integer(a)]]);
    Lattice::new(gram.clone())?
        .with_ambient(Ambient {
            generators: RatMat::identity(1),
            gram,
        })
        .map(|l| l.with_label(label))
}

struct ResolvedGlue {
    lattices: Vec<Lattice>,
    /// Glue vector in joint-basis coordinates.
    glue_basis_coords: Vec<Rat>,
    joint_gram: RatMat,
    norm: Rat,
}

fn resolve_spec(spec: &GlueSpec) -> Result<ResolvedGlue> {
    if spec.components.is_empty() {
        return Err(Error::MalformedSpec(
            "glue needs at least one component".into(),
        ));
    }
    let mut lattices = Vec::new();
    let mut glue_coords = Vec::new();
    let mut norm = Rat::zero();
    for comp in &spec.components {
        let (l, element) = comp.resolve()?;
        if !lattice::is_integral(&l) {
            return Err(Error::MalformedSpec(
                "glue components must be integral lattices".into(),
            ));
        }
        let ginv = l.gram().inverse().expect("posdef");
        let row = RatMat::from_rows(vec![element.clone()]);
        let basis_coords = row.mul(&ginv);
        norm += basis_coords
            .mul(l.gram())
            .mul_transpose(&basis_coords)
            .at(0, 0)
            .clone();
        glue_coords.extend(basis_coords.row(0).to_vec());
        lattices.push(l);
    }
    let grams: Vec<&RatMat> = lattices.iter().map(|l| l.gram()).collect();
    let joint_gram = RatMat::block_diag(&grams);
    Ok(ResolvedGlue {
        lattices,
        glue_basis_coords: glue_coords,
        joint_gram,
        norm,
    })
}

/// `Q(x_1 + ... + x_t)` of the glue vector of a specification.
pub fn glue_norm(spec: &GlueSpec) -> Result<Rat> {
    Ok(resolve_spec(spec)?.norm)
}

/// The individual `Q(x_i)` of each component's glue element.
pub fn glue_component_norms(spec: &GlueSpec) -> Result<Vec<Rat>> {
    spec.components
        .iter()
        .map(|comp| {
            let (l, element) = comp.resolve()?;
            let ginv = l.gram().inverse().expect("posdef");
            let row = RatMat::from_rows(vec![element]);
            let bc = row.mul(&ginv);
            Ok(bc.mul(l.gram()).mul_transpose(&bc).at(0, 0).clone())
        })
        .collect()
}

/// Order of the glue vector's coset in the joint discriminant group.
pub fn glue_coset_order(spec: &GlueSpec) -> Result<BigInt> {
    let r = resolve_spec(spec)?;
    let mut f = BigInt::one();
    for c in &r.glue_basis_coords {
        f = f.lcm(c.denom());
    }
    Ok(f)
}

/// The glue construction: the lattice generated by the orthogonal sum of the
/// components together with the glue vector.
///
/// Errors with [`Error::NonIntegralResult`] when `Q` of the glue vector is
/// not an integer.
pub fn glue(spec: &GlueSpec) -> Result<Lattice> {
    let r = resolve_spec(spec)?;
    if !rat::is_integer(&r.norm) {
        return Err(Error::NonIntegralResult { q: r.norm });
    }
    let n: usize = r.lattices.iter().map(|l| l.rank()).sum();
    let mut rows: Vec<Vec<Rat>> = (0..n).map(|i| unit_row(n, i)).collect();
    rows.push(r.glue_basis_coords.clone());
    let gens = RatMat::from_rows(rows);
    let (l, basis) = span_lattice(&r.joint_gram, &gens)?;
    debug_assert!(lattice::is_integral(&l));
    // Carry ambient coordinates when every component has them.
    if r.lattices.iter().all(|c| c.ambient().is_some()) {
        let gen_blocks: Vec<&RatMat> = r
            .lattices
            .iter()
            .map(|c| &c.ambient().unwrap().generators)
            .collect();
        let gram_blocks: Vec<&RatMat> = r
            .lattices
            .iter()
            .map(|c| &c.ambient().unwrap().gram)
            .collect();
        let joint_gens = RatMat::block_diag(&gen_blocks);
        let joint_space = RatMat::block_diag(&gram_blocks);
        let new_gens = basis.mul(&joint_gens);
        return l.with_ambient(Ambient {
            generators: new_gens,
            gram: joint_space,
        });
    }
    Ok(l)
}

// --- Named lattices ---------------------------------------------------------

/// `A_n k(n+1) [i 1/(n+1)]`, the generic primitive rank-(n+1) overlattice of
/// `A_n`. The glue index is normalized to `i <= floor((n+1)/2)`, which gives
/// an isometric lattice; the label records the canonical form.
pub fn an_scaled_glue(n: usize, k: u64, i: usize) -> Result<Lattice> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter(
            "scaled glue over A(n) requires n >= 1 and k >= 1".into(),
        ));
    }
    if i > n {
        return Err(Error::InvalidParameter(format!(
            "glue index {i} out of range for A({n})"
        )));
    }
    let i_canonical = i.min(n + 1 - i);
    let m = (n + 1) as i64;
    let a = (k as i64) * m;
    let spec = GlueSpec::new(vec![
        GlueComponent::piece(
            root_lattice(RootLatticeId::new(RootFamily::A, n))?,
            glue_vector(RootLatticeId::new(RootFamily::A, n), i_canonical as i64)?,
        ),
        GlueComponent::scalar(a, m),
    ]);
    Ok(glue(&spec)?.with_label(format!("glue(A({n}), s({a}); [{i_canonical}], 1/{m})")))
}

/// `M_c = A_4 (25c - 20) [1 1/5]`, discriminant `5c - 4`.
pub fn named_m(c: u64) -> Result<Lattice> {
    if c == 0 {
        return Err(Error::InvalidParameter("M(c) requires c >= 1".into()));
    }
    Ok(an_scaled_glue(4, 5 * c - 4, 1)?.with_label(format!("M({c})")))
}

/// `K_d = A_4 (25d - 5) [2 1/5]`, discriminant `5d - 1`.
pub fn named_k(d: u64) -> Result<Lattice> {
    if d == 0 {
        return Err(Error::InvalidParameter("K(d) requires d >= 1".into()));
    }
    Ok(an_scaled_glue(4, 5 * d - 1, 2)?.with_label(format!("K({d})")))
}

/// `A(k, i) = A_8 9(9k + i^2) [i 1/9]`, discriminant `9k + i^2`.
/// `k = -1` is permitted only for `i = 4`.
pub fn named_aki(k: i64, i: u64) -> Result<Lattice> {
    if !(1..=4).contains(&i) {
        return Err(Error::InvalidParameter(
            "A(k,i) requires 1 <= i <= 4".into(),
        ));
    }
    let disc = 9 * k + (i * i) as i64;
    if disc < 1 || k < -1 || (k == -1 && i != 4) {
        return Err(Error::InvalidParameter(
            "A(k,i) requires 9k + i^2 >= 1 (k = -1 only for i = 4)".into(),
        ));
    }
    Ok(an_scaled_glue(8, disc as u64, i as usize)?.with_label(format!("Aki({k},{i})")))
}

pub fn l12_spec() -> Result<GlueSpec> {
    Ok(GlueSpec::new(vec![
        GlueComponent::piece(
            root_lattice(RootLatticeId::new(RootFamily::E7, 7))?,
            glue_vector(RootLatticeId::new(RootFamily::E7, 7), 1)?,
        ),
        GlueComponent::piece(
            root_lattice(RootLatticeId::new(RootFamily::A, 5))?,
            glue_vector(RootLatticeId::new(RootFamily::A, 5), 3)?,
        ),
    ]))
}

/// `L12 = E7 A5 [1 3]`: rank 12, discriminant 3.
pub fn l12() -> Result<Lattice> {
    Ok(glue(&l12_spec()?)?.with_label("L12"))
}

pub fn l16_spec() -> Result<GlueSpec> {
    Ok(GlueSpec::new(vec![
        GlueComponent::piece(
            root_lattice(RootLatticeId::new(RootFamily::A, 11))?,
            glue_vector(RootLatticeId::new(RootFamily::A, 11), 2)?,
        ),
        GlueComponent::piece(
            root_lattice(RootLatticeId::new(RootFamily::A, 5))?,
            glue_vector(RootLatticeId::new(RootFamily::A, 5), 2)?,
        ),
    ]))
}

/// `L16 = A11 A5 [2 2]`: rank 16, discriminant 2.
pub fn l16() -> Result<Lattice> {
    Ok(glue(&l16_spec()?)?.with_label("L16"))
}

pub fn m14_spec() -> Result<GlueSpec> {
    Ok(GlueSpec::new(vec![
        GlueComponent::piece(
            root_lattice(RootLatticeId::new(RootFamily::A, 13))?,
            glue_vector(RootLatticeId::new(RootFamily::A, 13), 4)?,
        ),
        GlueComponent::scalar(7, 7),
    ]))
}

/// `M14 = A13 7 [4 1/7]`: rank 14, discriminant 2.
pub fn m14() -> Result<Lattice> {
    Ok(glue(&m14_spec()?)?.with_label("M14"))
}

/// The minimal dual vector `u = [1] + (2/7) z` of `M14`, in dual coordinates
/// of the basis produced by [`m14`]. `Q(u) = 3/2`.
pub fn m14_minimal_dual_vector() -> Result<(Lattice, Vec<Rat>)> {
    let m = m14()?;
    let amb = m.ambient().expect("glued lattice carries ambient");
    // Ambient of M14 is Z^14 perp <7>; u = [1] of A13 followed by (2/7) z.
    let mut u = vec![rat::rat(1, 14); 15];
    u[13] = rat::rat(-13, 14);
    u[14] = rat::rat(2, 7);
    let row = RatMat::from_rows(vec![u]);
    let q = row.mul(&amb.gram).mul_transpose(&row).at(0, 0).clone();
    if q != rat::rat(3, 2) {
        return Err(Error::MalformedSpec(format!(
            "expected Q(u) = 3/2 for the minimal dual vector of M14, got {q}"
        )));
    }
    let dual_coords = row.mul(&amb.gram).mul_transpose(&amb.generators);
    if !dual_coords.is_integral() {
        return Err(Error::MalformedSpec(
            "u does not pair integrally with M14".into(),
        ));
    }
    Ok((m, dual_coords.row(0).to_vec()))
}

pub fn m_family_spec(k: u64) -> Result<GlueSpec> {
    if k < 2 {
        return Err(Error::InvalidParameter("Mbig(k) requires k >= 2".into()));
    }
    let (m, u) = m14_minimal_dual_vector()?;
    let dn = (4 * k - 2) as usize;
    Ok(GlueSpec::new(vec![
        GlueComponent::piece(m, u),
        GlueComponent::piece(
            root_lattice(RootLatticeId::new(RootFamily::D, dn))?,
            glue_vector(RootLatticeId::new(RootFamily::D, dn), 1)?,
        ),
    ]))
}

/// `M_{4(k+3)} = M14 D_{4k-2} [u 1]` for `k >= 2`: rank `4(k+3)`,
/// discriminant 2.
pub fn m_family(k: u64) -> Result<Lattice> {
    Ok(glue(&m_family_spec(k)?)?.with_label(format!("Mbig({k})")))
}

// --- Coset geometry and overlattices ----------------------------------------

/// A nonzero coset of `L^#/L` with its minimal-norm representative.
#[derive(Debug, Clone)]
pub struct MinimalCosetRep {
    /// Dual coordinates of a vector of least norm in the coset.
    pub dual_coords: Vec<Rat>,
    /// Order of the coset in `L^#/L`.
    pub order: BigInt,
    /// Norm of the representative.
    pub norm: Rat,
}

fn coset_key(basis_coords: &[Rat]) -> Vec<Rat> {
    basis_coords.iter().map(|x| x - x.floor()).collect()
}

fn norm_of_basis_coords(l: &Lattice, coords: &[Rat]) -> Rat {
    let row = RatMat::from_rows(vec![coords.to_vec()]);
    row.mul(l.gram()).mul_transpose(&row).at(0, 0).clone()
}

/// Minimal-norm representatives of every nonzero coset of `L^#/L`.
///
/// Representatives are first reduced modulo `L` by Babai's nearest-plane
/// rounding; one dual enumeration up to the largest reduced norm then refines
/// each coset to its true minimum.
pub fn minimal_coset_reps(l: &Lattice, limits: &Limits) -> Result<Vec<MinimalCosetRep>> {
    if !lattice::is_integral(l) {
        return Err(Error::NotIntegral);
    }
    let group = lattice::discriminant_group(l)?;
    let ginv = l.gram().inverse().expect("posdef");
    let red = lll::lll_reduce(l.gram());
    let mut best: BTreeMap<Vec<Rat>, (Vec<Rat>, Rat)> = BTreeMap::new();
    let mut cap: Option<Rat> = None;
    for rep in &group.coset_reps {
        let basis_coords = RatMat::from_rows(vec![rep.clone()]).mul(&ginv);
        if basis_coords.is_integral() {
            continue; // zero coset
        }
        let reduced = shortvec::babai_reduce(&red, basis_coords.row(0));
        let norm = norm_of_basis_coords(l, &reduced);
        cap = Some(match cap {
            None => norm.clone(),
            Some(c) => c.max(norm.clone()),
        });
        best.insert(coset_key(&reduced), (reduced, norm));
    }
    let Some(cap) = cap else {
        return Ok(Vec::new()); // unimodular
    };
    let dual_vecs = shortvec::short_vectors(&lattice::dual(l), &cap, limits)?;
    for v in dual_vecs {
        let dual_coords: Vec<Rat> = v.coords.iter().cloned().map(Rat::from_integer).collect();
        let basis_coords = RatMat::from_rows(vec![dual_coords]).mul(&ginv);
        for sign in [1i64, -1] {
            let bc: Vec<Rat> = basis_coords
                .row(0)
                .iter()
                .map(|x| x * rat::rat_int(sign))
                .collect();
            if let Some((rep, norm)) = best.get_mut(&coset_key(&bc)) {
                if v.norm < *norm {
                    *rep = bc;
                    *norm = v.norm.clone();
                }
            }
        }
    }
    let mut out = Vec::new();
    for (_, (reduced, norm)) in best {
        let row = RatMat::from_rows(vec![reduced]);
        let dual_coords = row.mul(l.gram());
        let order = lattice::coset_order(l, dual_coords.row(0))?;
        out.push(MinimalCosetRep {
            dual_coords: dual_coords.row(0).to_vec(),
            order,
            norm,
        });
    }
    Ok(out)
}

/// All integral rank-(m+1) lattices containing `M` primitively whose
/// orthogonal-complement generator `z` satisfies `Q(z) <= qmax`, deduplicated
/// up to isometry.
///
/// For the zero coset this is `M perp <a>`; for a coset of order `f` with
/// minimal vector `y'` it is the glue of `M` (element `y'`) with the scalar
/// `Q(z) = f^2 (a - Q(y'))` and fraction `1/f`, for every integer glue norm
/// `a > Q(y')`.
pub fn primitive_extensions(m: &Lattice, qmax: &Rat, limits: &Limits) -> Result<Vec<Lattice>> {
    if !lattice::is_integral(m) {
        return Err(Error::NotIntegral);
    }
    if *qmax < Rat::one() {
        return Err(Error::InvalidParameter("qmax must be >= 1".into()));
    }
    let mut found: Vec<Lattice> = Vec::new();
    let top = rat::floor_to_int(qmax);
    let mut a = BigInt::one();
    while a <= top {
        found.push(lattice::orthogonal_sum(m, &scalar_lattice(a.clone())?));
        a += 1;
    }
    for rep in minimal_coset_reps(m, limits)? {
        let f = Rat::from_integer(rep.order.clone());
        let mut target = Rat::from_integer(rat::floor_to_int(&rep.norm) + BigInt::one());
        loop {
            let qz = &f * &f * (&target - &rep.norm);
            if qz > *qmax {
                break;
            }
            debug_assert!(rat::is_integer(&qz) && qz > Rat::zero());
            let spec = GlueSpec::new(vec![
                GlueComponent::piece(m.clone(), rep.dual_coords.clone()),
                GlueComponent::Scalar {
                    a: qz.to_integer(),
                    m: rep.order.clone(),
                },
            ]);
            found.push(glue(&spec)?);
            target += Rat::one();
        }
    }
    found.sort_by(|x, y| {
        lattice::discriminant(x)
            .cmp(&lattice::discriminant(y))
            .then_with(|| x.gram().lex_cmp(y.gram()))
    });
    // Distinct families can collide, so deduplicate by full isometry.
    let mut out: Vec<Lattice> = Vec::new();
    for cand in found {
        let mut dup = false;
        for kept in &out {
            if crate::morphisms::is_isometric(kept, &cand, limits)?.is_some() {
                dup = true;
                break;
            }
        }
        if !dup {
            out.push(cand);
        }
    }
    Ok(out)
}

/// All proper integral overlattices of `L` inside its rational span,
/// enumerated through subgroups of the discriminant group.
///
/// Supports discriminant groups with at most two invariant factors, which
/// covers every root-lattice case used here.
pub fn integral_overlattices(l: &Lattice) -> Result<Vec<Lattice>> {
    if !lattice::is_integral(l) {
        return Err(Error::NotIntegral);
    }
    let group = lattice::discriminant_group(l)?;
    if group.elementary_divisors.len() > 2 {
        return Err(Error::RankUnsupported(group.elementary_divisors.len()));
    }
    let ginv = l.gram().inverse().expect("posdef");
    let elements: Vec<Vec<Rat>> = group
        .coset_reps
        .iter()
        .map(|rep| {
            let row = RatMat::from_rows(vec![rep.clone()]);
            coset_key(row.mul(&ginv).row(0))
        })
        .collect();
    let n = l.rank();
    let add_mod = |x: &[Rat], y: &[Rat]| -> Vec<Rat> {
        coset_key(&(0..n).map(|j| &x[j] + &y[j]).collect::<Vec<Rat>>())
    };
    let zero_key = vec![Rat::zero(); n];
    let closure = |gens: &[&Vec<Rat>]| -> BTreeSet<Vec<Rat>> {
        let mut set: BTreeSet<Vec<Rat>> = [zero_key.clone()].into_iter().collect();
        loop {
            let mut grew = false;
            let current: Vec<Vec<Rat>> = set.iter().cloned().collect();
            for x in &current {
                for g in gens {
                    if set.insert(add_mod(x, g)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return set;
            }
        }
    };
    let mut seen: BTreeSet<Vec<Vec<Rat>>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut consider = |subgroup: BTreeSet<Vec<Rat>>, out: &mut Vec<Lattice>| -> Result<()> {
        if subgroup.len() <= 1 {
            return Ok(());
        }
        let key: Vec<Vec<Rat>> = subgroup.iter().cloned().collect();
        if !seen.insert(key) {
            return Ok(());
        }
        for x in &subgroup {
            for y in &subgroup {
                let b = {
                    let xr = RatMat::from_rows(vec![x.clone()]);
                    let yr = RatMat::from_rows(vec![y.clone()]);
                    xr.mul(l.gram()).mul_transpose(&yr).at(0, 0).clone()
                };
                if !rat::is_integer(&b) {
                    return Ok(()); // lift would not be integral
                }
            }
        }
        let mut rows: Vec<Vec<Rat>> = (0..n).map(|i| unit_row(n, i)).collect();
        rows.extend(subgroup.iter().cloned());
        let (lat, _) = span_lattice(l.gram(), &RatMat::from_rows(rows))?;
        debug_assert!(lattice::is_integral(&lat));
        out.push(lat);
        Ok(())
    };
    for g1 in &elements {
        consider(closure(&[g1]), &mut out)?;
        for g2 in &elements {
            consider(closure(&[g1, g2]), &mut out)?;
        }
    }
    out.sort_by(|x, y| {
        lattice::discriminant(x)
            .cmp(&lattice::discriminant(y))
            .then_with(|| x.gram().lex_cmp(y.gram()))
    });
    out.dedup_by(|x, y| x.gram() == y.gram());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{discriminant, is_even, is_integral};
    use crate::rat::{rat, rat_int};

    fn root(f: RootFamily, n: usize) -> Lattice {
        root_lattice(RootLatticeId::new(f, n)).unwrap()
    }

    #[test]
    fn root_lattice_discriminants() {
        for n in 1..=12 {
            assert_eq!(discriminant(&root(RootFamily::A, n)), rat_int(n as i64 + 1));
        }
        for n in 4..=10 {
            assert_eq!(discriminant(&root(RootFamily::D, n)), rat_int(4));
        }
        assert_eq!(discriminant(&root(RootFamily::E7, 7)), rat_int(2));
        assert_eq!(discriminant(&root(RootFamily::E8, 8)), rat_int(1));
        assert!(is_even(&root(RootFamily::E8, 8)));
        assert_eq!(discriminant(&root(RootFamily::DPlus, 8)), rat_int(1));
        assert!(is_even(&root(RootFamily::DPlus, 8)));
        assert!(!is_even(&root(RootFamily::DPlus, 4)));
    }

    #[test]
    fn invalid_root_parameters() {
        assert!(root_lattice(RootLatticeId::new(RootFamily::D, 3)).is_err());
        assert!(root_lattice(RootLatticeId::new(RootFamily::DPlus, 6)).is_err());
        assert!(root_lattice(RootLatticeId::new(RootFamily::A, 0)).is_err());
        assert!(root_lattice(RootLatticeId::new(RootFamily::E7, 8)).is_err());
    }

    fn glue_q(id: RootLatticeId, i: i64) -> Rat {
        let l = root_lattice(id).unwrap();
        let c = glue_vector(id, i).unwrap();
        let ginv = l.gram().inverse().unwrap();
        let row = RatMat::from_rows(vec![c]);
        let bc = row.mul(&ginv);
        bc.mul(l.gram()).mul_transpose(&bc).at(0, 0).clone()
    }

    #[test]
    fn glue_vector_norms() {
        assert_eq!(glue_q(RootLatticeId::new(RootFamily::A, 2), 1), rat(2, 3));
        for n in 4..=8 {
            assert_eq!(
                glue_q(RootLatticeId::new(RootFamily::D, n), 1),
                Rat::new(BigInt::from(n), BigInt::from(4))
            );
        }
        assert_eq!(glue_q(RootLatticeId::new(RootFamily::D, 5), 2), rat_int(1));
        assert_eq!(glue_q(RootLatticeId::new(RootFamily::E7, 7), 1), rat(3, 2));
        assert!(glue_vector(RootLatticeId::new(RootFamily::A, 2), 3).is_err());
        assert!(glue_vector(RootLatticeId::new(RootFamily::D, 5), 4).is_err());
        assert!(glue_vector(RootLatticeId::new(RootFamily::E8, 8), 1).is_err());
    }

    #[test]
    fn an_glue_symmetry() {
        // [i] + [j] lies in A_n when i + j = n + 1.
        for n in [2usize, 4, 5] {
            for i in 1..=n / 2 {
                let id = RootLatticeId::new(RootFamily::A, n);
                let l = root_lattice(id).unwrap();
                let gi = glue_vector(id, i as i64).unwrap();
                let gj = glue_vector(id, (n + 1 - i) as i64).unwrap();
                let sum: Vec<Rat> = gi.iter().zip(&gj).map(|(a, b)| a + b).collect();
                let ginv = l.gram().inverse().unwrap();
                let bc = RatMat::from_rows(vec![sum]).mul(&ginv);
                assert!(bc.is_integral(), "[{i}] + [{}] not in A_{n}", n + 1 - i);
            }
        }
    }

    #[test]
    fn glue_norm_examples() {
        // L16: Q(x1 + x2) = 3; L12: 3/2 + 3/2 = 3.
        assert_eq!(glue_norm(&l16_spec().unwrap()).unwrap(), rat_int(3));
        assert_eq!(glue_norm(&l12_spec().unwrap()).unwrap(), rat_int(3));
        // Non-integral glue: A2 3 [1 1/3] over <3> has Q = 2/3 + 1/3 = 1, so
        // pick <6> with 1/3: Q = 2/3 + 6/9 = 4/3, non-integral.
        let spec = GlueSpec::new(vec![
            GlueComponent::piece(
                root(RootFamily::A, 2),
                glue_vector(RootLatticeId::new(RootFamily::A, 2), 1).unwrap(),
            ),
            GlueComponent::scalar(6, 3),
        ]);
        match glue(&spec) {
            Err(Error::NonIntegralResult { q }) => assert_eq!(q, rat(4, 3)),
            other => panic!("expected NonIntegralResult, got {other:?}"),
        }
        // A2 3 [1 1/3] itself is integral with disc 1.
        let spec = GlueSpec::new(vec![
            GlueComponent::piece(
                root(RootFamily::A, 2),
                glue_vector(RootLatticeId::new(RootFamily::A, 2), 1).unwrap(),
            ),
            GlueComponent::scalar(3, 3),
        ]);
        let l = glue(&spec).unwrap();
        assert_eq!(l.rank(), 3);
        assert_eq!(discriminant(&l), rat_int(1));
    }

    #[test]
    fn glue_discriminant_law() {
        // disc(glue) * f^2 = product of component discriminants.
        for (spec, expected_disc) in [
            (l12_spec().unwrap(), rat_int(3)),
            (l16_spec().unwrap(), rat_int(2)),
        ] {
            let l = glue(&spec).unwrap();
            let f = glue_coset_order(&spec).unwrap();
            let prod: Rat = spec
                .components
                .iter()
                .map(|c| match c {
                    GlueComponent::Piece { lattice, .. } => discriminant(lattice),
                    GlueComponent::Scalar { a, .. } => Rat::from_integer(a.clone()),
                })
                .product();
            let f2 = Rat::from_integer(&f * &f);
            assert_eq!(discriminant(&l) * f2, prod);
            assert_eq!(discriminant(&l), expected_disc);
        }
    }

    #[test]
    fn named_lattice_invariants() {
        for c in 1..=3u64 {
            let m = named_m(c).unwrap();
            assert_eq!(m.rank(), 5);
            assert_eq!(discriminant(&m), rat_int(5 * c as i64 - 4));
        }
        for d in 1..=3u64 {
            let k = named_k(d).unwrap();
            assert_eq!(k.rank(), 5);
            assert_eq!(discriminant(&k), rat_int(5 * d as i64 - 1));
        }
        let m = m14().unwrap();
        assert_eq!(m.rank(), 14);
        assert_eq!(discriminant(&m), rat_int(2));
        for (k, i, disc) in [(0i64, 1u64, 1i64), (1, 1, 10), (0, 2, 4), (-1, 4, 7)] {
            let a = named_aki(k, i).unwrap();
            assert_eq!(a.rank(), 9);
            assert_eq!(discriminant(&a), rat_int(disc));
        }
        assert!(named_aki(-1, 3).is_err());
        assert!(named_aki(0, 5).is_err());
    }

    #[test]
    fn m_family_rank_and_discriminant() {
        let m20 = m_family(2).unwrap();
        assert_eq!(m20.rank(), 20);
        assert_eq!(discriminant(&m20), rat_int(2));
        assert!(is_integral(&m20));
        assert!(m_family(1).is_err());
    }

    #[test]
    fn minimal_reps_match_glue_vectors() {
        // Glue vectors of A_n and D_n are minimal in their cosets.
        let lim = Limits::default();
        for n in [2usize, 3, 4] {
            let id = RootLatticeId::new(RootFamily::A, n);
            let l = root_lattice(id).unwrap();
            let reps = minimal_coset_reps(&l, &lim).unwrap();
            assert_eq!(reps.len(), n); // n nonzero cosets
            for i in 1..=n {
                let q = glue_q(id, i as i64);
                assert!(
                    reps.iter().any(|r| r.norm == q),
                    "no coset of A_{n} attains Q([{i}]) = {q}"
                );
            }
        }
        let id = RootLatticeId::new(RootFamily::D, 5);
        let l = root_lattice(id).unwrap();
        let reps = minimal_coset_reps(&l, &lim).unwrap();
        assert_eq!(reps.len(), 3);
        let norms: Vec<Rat> = reps.iter().map(|r| r.norm.clone()).collect();
        assert!(norms.contains(&rat(5, 4)));
        assert!(norms.contains(&rat_int(1)));
        // Orders: [1], [3] have order 4; [2] has order 2.
        let mut orders: Vec<BigInt> = reps.iter().map(|r| r.order.clone()).collect();
        orders.sort();
        assert_eq!(
            orders,
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(4)]
        );
    }

    #[test]
    fn extensions_of_e8_are_orthogonal_sums() {
        let e8 = root(RootFamily::E8, 8);
        let exts = primitive_extensions(&e8, &rat_int(5), &Limits::default()).unwrap();
        assert_eq!(exts.len(), 5);
        for (idx, l) in exts.iter().enumerate() {
            assert_eq!(l.rank(), 9);
            assert_eq!(discriminant(l), rat_int(idx as i64 + 1));
        }
    }

    #[test]
    fn overlattices_of_root_lattices() {
        // A3 has exactly one proper integral overlattice (unimodular, rank 3).
        let a3 = root(RootFamily::A, 3);
        let over = integral_overlattices(&a3).unwrap();
        assert_eq!(over.len(), 1);
        assert_eq!(discriminant(&over[0]), rat_int(1));
        // A4 has none: prime discriminant, all glue norms fractional.
        let a4 = root(RootFamily::A, 4);
        assert!(integral_overlattices(&a4).unwrap().is_empty());
        // D4 has the three unimodular lifts (all isometric to I4).
        let d4 = root(RootFamily::D, 4);
        let over = integral_overlattices(&d4).unwrap();
        assert_eq!(over.len(), 3);
        assert!(over.iter().all(|l| discriminant(l) == rat_int(1)));
        // D5 and D6: only [2] lifts integrally.
        for n in [5usize, 6] {
            let dn = root(RootFamily::D, n);
            let over = integral_overlattices(&dn).unwrap();
            assert_eq!(over.len(), 1, "D{n}");
            assert_eq!(discriminant(&over[0]), rat_int(1));
        }
    }

    #[test]
    fn scalar_shorthand_validation() {
        assert!(matches!(
            GlueComponent::scalar(7, 5).resolve(),
            Err(Error::MalformedSpec(_))
        ));
        assert!(GlueComponent::scalar(25, 5).resolve().is_ok());
        assert!(matches!(
            GlueComponent::scalar(0, 1).resolve(),
            Err(Error::MalformedSpec(_))
        ));
    }
}
