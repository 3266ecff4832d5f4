//! Representation (embedding) search, primitivity, isometry, orthogonal
//! decomposition, sum-of-squares tests, and additive-indecomposability
//! certificates.
//!
//! The embedding search is a backtracking search: basis vectors of the source
//! are processed in decreasing norm order, candidate images are drawn from
//! precomputed short-vector tables of the target keyed by exact norm, and
//! partial assignments are pruned by exact inner-product consistency. Every
//! returned matrix is re-verified exactly.

use crate::construct::{self, GlueComponent, GlueSpec, RootFamily, RootLatticeId};
use crate::error::{Error, Result};
use crate::lattice::{self, Lattice};
use crate::lll;
use crate::mat::{dot_int, IntMat};
use crate::rat::{self, Rat};
use crate::shortvec;
use crate::Limits;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// An embedding witness: `matrix * gram(target) * matrix^t = gram(source)`,
/// rows being the images of the source basis vectors in target coordinates.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub source: Lattice,
    pub target: Lattice,
    pub matrix: IntMat,
}

impl Embedding {
    /// Exact re-verification of the defining equation.
    pub fn verify(&self) -> bool {
        let t = self.matrix.to_rat();
        &t.mul(self.target.gram()).mul_transpose(&t) == self.source.gram()
    }

    /// Whether the image is a primitive sublattice of the target: all
    /// elementary divisors of the matrix are 1.
    pub fn is_primitive(&self) -> bool {
        let snf = self.matrix.snf();
        snf.divisors.iter().all(|d| d.is_one())
    }

    /// Composes `outer: M -> L` with `inner: N -> M` into `N -> L`.
    pub fn compose(outer: &Embedding, inner: &Embedding) -> Embedding {
        Embedding {
            source: inner.source.clone(),
            target: outer.target.clone(),
            matrix: inner.matrix.mul(&outer.matrix),
        }
    }
}

struct SearchCtx<'a> {
    target_gram: &'a IntMat,
    /// Slot order: indices into the reduced source basis, decreasing norm.
    order: &'a [usize],
    /// Reduced source Gram as integers.
    source_gram: &'a IntMat,
    /// Norm-keyed candidate tables (both signs, sorted).
    table: &'a BTreeMap<BigInt, Vec<Vec<BigInt>>>,
    /// Target is a cubic lattice I_N: the first slot may be restricted to
    /// one candidate per signed-permutation orbit.
    identity_target: bool,
    nodes: u64,
    budget: u64,
}

/// Canonical orbit representative under signed coordinate permutations:
/// entries nonnegative and non-increasing.
fn is_signed_perm_canonical(v: &[BigInt]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1]) && v.last().map_or(true, |x| !x.is_negative())
}

impl SearchCtx<'_> {
    /// DFS over slots; calls `on_found` with rows in reduced-basis order.
    /// Returns `Ok(false)` when the caller asked to stop early.
    fn descend(
        &mut self,
        placed: &mut Vec<(usize, Vec<BigInt>, Vec<BigInt>)>,
        on_found: &mut dyn FnMut(Vec<Vec<BigInt>>) -> bool,
    ) -> Result<bool> {
        let slot = placed.len();
        if slot == self.order.len() {
            let n = self.order.len();
            let mut rows = vec![Vec::new(); n];
            for (idx, v, _) in placed.iter() {
                rows[*idx] = v.clone();
            }
            return Ok(on_found(rows));
        }
        let row = self.order[slot];
        let needed = self.source_gram.at(row, row);
        let Some(bucket) = self.table.get(needed) else {
            return Ok(true);
        };
        'cand: for v in bucket {
            // Quotient by Aut(I_N) = signed permutations on the first slot.
            if slot == 0 && self.identity_target && !is_signed_perm_canonical(v) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::SearchBudgetExceeded {
                    budget: self.budget,
                });
            }
            for (prev_row, _, glw) in placed.iter() {
                if &dot_int(v, glw) != self.source_gram.at(row, *prev_row) {
                    continue 'cand;
                }
            }
            // A consistent candidate: precompute gram * v for later dots.
            let glw: Vec<BigInt> = (0..self.target_gram.nrows())
                .map(|r| dot_int(self.target_gram.row(r), v))
                .collect();
            placed.push((row, v.clone(), glw));
            let keep_going = self.descend(placed, on_found)?;
            placed.pop();
            if !keep_going {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Core backtracking search over embeddings of `m` into `l`. Calls
/// `on_found` for each witness (deterministic order); stop by returning
/// `false` from the callback.
fn search_embeddings(
    m: &Lattice,
    l: &Lattice,
    limits: &Limits,
    on_found: &mut dyn FnMut(IntMat) -> bool,
) -> Result<()> {
    if !lattice::is_integral(m) || !lattice::is_integral(l) {
        return Err(Error::NotIntegral);
    }
    if m.rank() > l.rank() {
        return Ok(());
    }
    if m.rank() == l.rank() {
        // Full rank: the index t satisfies disc(M) = t^2 disc(L).
        let ratio = lattice::discriminant(m) / lattice::discriminant(l);
        if !rat::is_integer(&ratio) || !is_perfect_square(&ratio.to_integer()) {
            return Ok(());
        }
    }
    let target_gram = l.gram_int()?;
    let red = lll::lll_reduce(m.gram());
    let source_gram = red.gram.to_int().expect("integral source stays integral");
    let n = m.rank();
    // Slot order: decreasing norm, then greedily most-connected to the
    // already-placed slots, so inner-product constraints bite early.
    let mut by_norm: Vec<usize> = (0..n).collect();
    by_norm.sort_by(|&a, &b| {
        source_gram
            .at(b, b)
            .cmp(source_gram.at(a, a))
            .then(a.cmp(&b))
    });
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut remaining = by_norm;
    order.push(remaining.remove(0));
    while !remaining.is_empty() {
        let mut best_pos = 0;
        let mut best_key: Option<(usize, BigInt, std::cmp::Reverse<usize>)> = None;
        for (pos, &idx) in remaining.iter().enumerate() {
            let connections = order
                .iter()
                .filter(|&&p| !source_gram.at(idx, p).is_zero())
                .count();
            let key = (
                connections,
                source_gram.at(idx, idx).clone(),
                std::cmp::Reverse(idx),
            );
            if best_key.as_ref().map_or(true, |b| key > *b) {
                best_key = Some(key);
                best_pos = pos;
            }
        }
        order.push(remaining.remove(best_pos));
    }
    let max_norm = order
        .iter()
        .map(|&i| source_gram.at(i, i).clone())
        .max()
        .expect("rank >= 1");
    let vecs = shortvec::short_vectors(l, &Rat::from_integer(max_norm), limits)?;
    let mut table: BTreeMap<BigInt, Vec<Vec<BigInt>>> = BTreeMap::new();
    for v in vecs {
        let neg: Vec<BigInt> = v.coords.iter().map(|x| -x.clone()).collect();
        let key = v.norm.to_integer();
        let bucket = table.entry(key).or_default();
        bucket.push(v.coords);
        bucket.push(neg);
    }
    for bucket in table.values_mut() {
        bucket.sort();
    }
    let uinv = red
        .u
        .unimodular_inverse()
        .expect("LLL transform is unimodular");
    let mut ctx = SearchCtx {
        target_gram: &target_gram,
        order: &order,
        source_gram: &source_gram,
        table: &table,
        identity_target: l.gram() == &crate::RatMat::identity(l.rank()),
        nodes: 0,
        budget: limits.search_nodes,
    };
    let mut wrapped = |rows: Vec<Vec<BigInt>>| -> bool {
        let t_reduced = IntMat::from_rows(rows);
        let t = uinv.mul(&t_reduced);
        debug_assert!(
            {
                let tr = t.to_rat();
                &tr.mul(l.gram()).mul_transpose(&tr) == m.gram()
            },
            "witness failed exact re-verification"
        );
        on_found(t)
    };
    ctx.descend(&mut Vec::new(), &mut wrapped)?;
    Ok(())
}

fn is_perfect_square(x: &BigInt) -> bool {
    if x.is_negative() {
        return false;
    }
    let r = x.sqrt();
    &(&r * &r) == x
}

/// Up to `limit` embeddings of `m` into `l`, each exactly re-verified.
/// Complete: returns empty only when no embedding exists.
pub fn find_representations(
    m: &Lattice,
    l: &Lattice,
    limit: usize,
    limits: &Limits,
) -> Result<Vec<Embedding>> {
    let mut out = Vec::new();
    search_embeddings(m, l, limits, &mut |t| {
        out.push(Embedding {
            source: m.clone(),
            target: l.clone(),
            matrix: t,
        });
        out.len() < limit
    })?;
    debug_assert!(out.iter().all(Embedding::verify));
    Ok(out)
}

/// Whether some embedding of `m` into `l` exists.
pub fn represents(m: &Lattice, l: &Lattice, limits: &Limits) -> Result<bool> {
    Ok(!find_representations(m, l, 1, limits)?.is_empty())
}

/// Whether an embedding with primitive image exists.
///
/// At equal rank the image is primitive iff the discriminants agree, so no
/// image enumeration is needed there; otherwise embeddings are enumerated and
/// tested via the Smith normal form of the witness matrix.
pub fn primitively_represents(m: &Lattice, l: &Lattice, limits: &Limits) -> Result<bool> {
    if m.rank() == l.rank() {
        if lattice::discriminant(m) != lattice::discriminant(l) {
            return Ok(false);
        }
        return represents(m, l, limits);
    }
    let mut found = false;
    search_embeddings(m, l, limits, &mut |t| {
        let e = Embedding {
            source: m.clone(),
            target: l.clone(),
            matrix: t,
        };
        if e.is_primitive() {
            found = true;
            return false;
        }
        true
    })?;
    Ok(found)
}

/// Isometry test with witness: `Some(T)` maps `m` bijectively onto `l`.
///
/// Pre-filters by rank, discriminant, component structure, and norm
/// histograms before searching. At equal rank and discriminant any embedding
/// has `|det| = 1`, so the first witness found is an isometry.
pub fn is_isometric(l: &Lattice, m: &Lattice, limits: &Limits) -> Result<Option<Embedding>> {
    if l.rank() != m.rank() || lattice::discriminant(l) != lattice::discriminant(m) {
        return Ok(None);
    }
    if l.gram() == m.gram() {
        return Ok(Some(Embedding {
            source: m.clone(),
            target: l.clone(),
            matrix: IntMat::identity(l.rank()),
        }));
    }
    if !lattice::is_integral(l) || !lattice::is_integral(m) {
        return Err(Error::NotIntegral);
    }
    let dl = decompose_with_bases(l, limits)?;
    let dm = decompose_with_bases(m, limits)?;
    // Orthogonal decomposition into indecomposables is unique up to order,
    // so the component multisets must match.
    if dl.len() != dm.len() {
        return Ok(None);
    }
    if dl.len() == 1 {
        let hist_bound = rat::rat_int(6);
        if shortvec::norm_histogram(l, &hist_bound, limits)?
            != shortvec::norm_histogram(m, &hist_bound, limits)?
        {
            return Ok(None);
        }
        let mut witness = None;
        search_embeddings(m, l, limits, &mut |t| {
            witness = Some(t);
            false
        })?;
        return Ok(witness.map(|t| Embedding {
            source: m.clone(),
            target: l.clone(),
            matrix: t,
        }));
    }
    // Match components pairwise, then assemble the block witness.
    let k = dl.len();
    let mut used = vec![false; k];
    let mut pairing: Vec<Option<(usize, Embedding)>> = vec![None; k];
    fn match_components(
        i: usize,
        dl: &[(Lattice, IntMat)],
        dm: &[(Lattice, IntMat)],
        used: &mut Vec<bool>,
        pairing: &mut Vec<Option<(usize, Embedding)>>,
        limits: &Limits,
    ) -> Result<bool> {
        if i == dm.len() {
            return Ok(true);
        }
        for j in 0..dl.len() {
            if used[j] {
                continue;
            }
            if let Some(w) = is_isometric(&dl[j].0, &dm[i].0, limits)? {
                used[j] = true;
                pairing[i] = Some((j, w));
                if match_components(i + 1, dl, dm, used, pairing, limits)? {
                    return Ok(true);
                }
                used[j] = false;
                pairing[i] = None;
            }
        }
        Ok(false)
    }
    if !match_components(0, &dl, &dm, &mut used, &mut pairing, limits)? {
        return Ok(None);
    }
    let n = l.rank();
    // Stacked component bases are unimodular (index-1 regeneration).
    let s = IntMat::from_rows(dl.iter().flat_map(|(_, b)| b.rows_vec()).collect());
    let r = IntMat::from_rows(dm.iter().flat_map(|(_, b)| b.rows_vec()).collect());
    let col_offsets: Vec<usize> = dl
        .iter()
        .scan(0, |acc, (c, _)| {
            let out = *acc;
            *acc += c.rank();
            Some(out)
        })
        .collect();
    let mut t_blocks = IntMat::zeros(n, n);
    let mut row_off = 0;
    for (i, entry) in pairing.iter().enumerate() {
        let (j, w) = entry.as_ref().expect("complete matching");
        let rows = dm[i].0.rank();
        for a in 0..rows {
            for b in 0..dl[*j].0.rank() {
                t_blocks.set(row_off + a, col_offsets[*j] + b, w.matrix.at(a, b).clone());
            }
        }
        row_off += rows;
    }
    let rinv = r.unimodular_inverse().expect("component bases stack to a basis");
    let t = rinv.mul(&t_blocks).mul(&s);
    let e = Embedding {
        source: m.clone(),
        target: l.clone(),
        matrix: t,
    };
    if !e.verify() {
        return Err(Error::CounterexampleFound(
            "assembled isometry witness failed re-verification".into(),
        ));
    }
    Ok(Some(e))
}

/// Orthogonal decomposition into indecomposable components, sorted by
/// (rank, discriminant, Gram).
pub fn orthogonal_decomposition(l: &Lattice, limits: &Limits) -> Result<Vec<Lattice>> {
    Ok(decompose_with_bases(l, limits)?
        .into_iter()
        .map(|(c, _)| c)
        .collect())
}

/// Decomposition with the basis rows of each component in `l` coordinates.
/// The stacked bases form a basis of `l`.
pub(crate) fn decompose_with_bases(
    l: &Lattice,
    limits: &Limits,
) -> Result<Vec<(Lattice, IntMat)>> {
    if !lattice::is_integral(l) {
        return Err(Error::NotIntegral);
    }
    let red = lll::lll_reduce(l.gram());
    let bound = (0..l.rank())
        .map(|i| red.gram.at(i, i).clone())
        .max()
        .expect("rank >= 1");
    let vecs = shortvec::short_vectors(l, &bound, limits)?;
    let gram = l.gram_int()?;
    let n = vecs.len();
    let gl: Vec<Vec<BigInt>> = vecs
        .iter()
        .map(|v| {
            (0..l.rank())
                .map(|r| dot_int(gram.row(r), &v.coords))
                .collect()
        })
        .collect();
    // Keep only indecomposable vectors: v splits as x + (v - x) with
    // orthogonal parts iff some shorter x has |B(x, v)| = Q(x). The
    // indecomposable ones still generate (split any other recursively), and
    // their non-orthogonality classes span the indecomposable components.
    let norms: Vec<BigInt> = vecs.iter().map(|v| v.norm.to_integer()).collect();
    let indecomposable: Vec<usize> = (0..n)
        .filter(|&i| {
            !(0..n).any(|j| {
                norms[j] < norms[i] && dot_int(&vecs[j].coords, &gl[i]).abs() == norms[j]
            })
        })
        .collect();
    let mut parent: Vec<usize> = (0..indecomposable.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for a in 0..indecomposable.len() {
        for b in a + 1..indecomposable.len() {
            let (i, j) = (indecomposable[a], indecomposable[b]);
            if !dot_int(&vecs[i].coords, &gl[j]).is_zero() {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<Vec<BigInt>>> = BTreeMap::new();
    for (a, &i) in indecomposable.iter().enumerate() {
        let r = find(&mut parent, a);
        classes.entry(r).or_default().push(vecs[i].coords.clone());
    }
    let mut comps: Vec<(Lattice, IntMat)> = Vec::new();
    for (_, members) in classes {
        let basis = IntMat::from_rows(members).hnf();
        let b = basis.to_rat();
        let g = b.mul(l.gram()).mul_transpose(&b);
        comps.push((Lattice::new(g)?, basis));
    }
    comps.sort_by(|(a, _), (b, _)| {
        a.rank()
            .cmp(&b.rank())
            .then_with(|| lattice::discriminant(a).cmp(&lattice::discriminant(b)))
            .then_with(|| a.gram().lex_cmp(b.gram()))
    });
    // The generating set contains a reduced basis, so the component bases
    // stack to a basis of l.
    let stacked = IntMat::from_rows(comps.iter().flat_map(|(_, b)| b.rows_vec()).collect());
    assert!(
        stacked.det().abs().is_one(),
        "decomposition did not regenerate the lattice at index 1"
    );
    Ok(comps)
}

/// Identifies an indecomposable root lattice by rank, discriminant and
/// isometry, if `l` is isometric to one.
pub fn identify_indecomposable_root(
    l: &Lattice,
    limits: &Limits,
) -> Result<Option<RootLatticeId>> {
    if !lattice::is_integral(l) {
        return Ok(None);
    }
    let disc = lattice::discriminant(l);
    let n = l.rank();
    let candidate = if n == 1 && disc == rat::rat_int(1) {
        Some(RootLatticeId::new(RootFamily::I, 1))
    } else if disc == rat::rat_int(n as i64 + 1) {
        Some(RootLatticeId::new(RootFamily::A, n))
    } else if n >= 4 && disc == rat::rat_int(4) {
        Some(RootLatticeId::new(RootFamily::D, n))
    } else if n == 7 && disc == rat::rat_int(2) {
        Some(RootLatticeId::new(RootFamily::E7, 7))
    } else if n == 8 && disc == rat::rat_int(1) {
        Some(RootLatticeId::new(RootFamily::E8, 8))
    } else {
        None
    };
    let Some(id) = candidate else {
        return Ok(None);
    };
    let root = construct::root_lattice(id)?;
    Ok(is_isometric(&root, l, limits)?.map(|_| id))
}

/// Whether `l` embeds into some cubic lattice `I_N`.
///
/// Fast negative: if a cubic embedding exists, the orthogonal projections of
/// the `N` unit vectors onto the span of the image are dual vectors of norm
/// at most 1, not all zero, so `min(L^#) <= 1`. Hence `min(L^#) > 1` decides
/// negatively without search; otherwise an exhaustive search into `I_N` with
/// `N` = trace of the LLL-reduced Gram matrix decides (any cubic embedding
/// can be compacted into that many coordinates by deleting all-zero ones).
pub fn embeds_in_cubic(l: &Lattice, limits: &Limits) -> Result<bool> {
    if !lattice::is_integral(l) {
        return Err(Error::NotIntegral);
    }
    if shortvec::dual_minimum(l, limits)? > rat::rat_int(1) {
        return Ok(false);
    }
    Ok(cubic_embedding_search(l, limits)?.is_some())
}

/// Exhaustive embedding search into `I_N`, `N` = trace of the LLL-reduced
/// Gram matrix. Also used to cross-validate the fast path.
pub fn cubic_embedding_search(l: &Lattice, limits: &Limits) -> Result<Option<Embedding>> {
    if !lattice::is_integral(l) {
        return Err(Error::NotIntegral);
    }
    let red = lll::lll_reduce(l.gram());
    let mut trace = BigInt::zero();
    for i in 0..l.rank() {
        trace += red.gram.at(i, i).numer();
    }
    let n: usize = trace
        .try_into()
        .map_err(|_| Error::InvalidParameter("cubic target rank too large".into()))?;
    if n > 128 {
        return Err(Error::InvalidParameter(format!(
            "cubic target rank {n} exceeds the supported cap of 128"
        )));
    }
    let target = construct::root_lattice(RootLatticeId::new(RootFamily::I, n))?;
    Ok(find_representations(l, &target, 1, limits)?.into_iter().next())
}

/// Verdict of an additive-indecomposability certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertVerdict {
    AdditivelyIndecomposable,
    RepresentedBySumOfSquares,
    Unknown,
}

/// Certificate evidence; every cited quantity is recomputable from the
/// lattice alone.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub verdict: CertVerdict,
    /// `min(L^#)`, the necessary-condition quantity.
    pub dual_minimum: Rat,
    /// `Q(x_i)` of the decomposition used, when one was supplied.
    pub glue_norms: Option<Vec<Rat>>,
    /// How each component of the decomposition was certified.
    pub component_notes: Vec<String>,
    /// Explicit witness when represented by a sum of squares.
    pub cubic_embedding: Option<Embedding>,
}

fn certify_component(c: &Lattice, limits: &Limits) -> Result<Option<String>> {
    if let Some(id) = identify_indecomposable_root(c, limits)? {
        return Ok(Some(format!("indecomposable root lattice {}", id.label())));
    }
    // M14 is carried as an established additively indecomposable base case;
    // its necessary conditions are re-verified here from the lattice alone.
    if c.rank() == 14 && lattice::discriminant(c) == rat::rat_int(2) {
        let m = construct::m14()?;
        if is_isometric(&m, c, limits)?.is_some() {
            let dm = shortvec::dual_minimum(c, limits)?;
            if dm <= rat::rat_int(1) {
                return Ok(None);
            }
            return Ok(Some(format!(
                "M14 (established base case; min of the dual re-verified as {dm} > 1)"
            )));
        }
    }
    // Lattices with a registered two-component glue decomposition certify
    // recursively.
    for (name, spec) in [("L12", construct::l12_spec()?), ("L16", construct::l16_spec()?)] {
        let rebuilt = construct::glue(&spec)?;
        if c.rank() == rebuilt.rank()
            && lattice::discriminant(c) == lattice::discriminant(&rebuilt)
            && is_isometric(&rebuilt, c, limits)?.is_some()
        {
            let cert = additive_certificate(c, Some(&spec), limits)?;
            if cert.verdict == CertVerdict::AdditivelyIndecomposable {
                return Ok(Some(format!("{name} (certified recursively)")));
            }
        }
    }
    Ok(None)
}

/// Certificate rule for additive indecomposability.
///
/// If `L = L1 L2 [x1 x2]` with `Q(x1)` or `Q(x2)` non-integral, both
/// components certified (as indecomposable root lattices, recursively, or as
/// an established base case), and no cubic embedding exists, the glue is
/// additively indecomposable. `min(L^#) <= 1` refutes additive
/// indecomposability outright; everything else is an honest `Unknown`.
pub fn additive_certificate(
    l: &Lattice,
    decomposition: Option<&GlueSpec>,
    limits: &Limits,
) -> Result<Certificate> {
    if !lattice::is_integral(l) {
        return Err(Error::NotIntegral);
    }
    let dm = shortvec::dual_minimum(l, limits)?;
    if dm <= rat::rat_int(1) {
        // Necessary condition fails: not additively indecomposable. Decide
        // the sum-of-squares alternative by explicit search.
        let cubic = cubic_embedding_search(l, limits)?;
        let verdict = if cubic.is_some() {
            CertVerdict::RepresentedBySumOfSquares
        } else {
            CertVerdict::Unknown
        };
        return Ok(Certificate {
            verdict,
            dual_minimum: dm,
            glue_norms: None,
            component_notes: vec!["min of the dual is <= 1".into()],
            cubic_embedding: cubic,
        });
    }
    // dm > 1: no cubic embedding exists (fast-negative projection argument).
    let Some(spec) = decomposition else {
        return Ok(Certificate {
            verdict: CertVerdict::Unknown,
            dual_minimum: dm,
            glue_norms: None,
            component_notes: vec!["no glue decomposition supplied".into()],
            cubic_embedding: None,
        });
    };
    if spec.components.len() != 2 {
        return Err(Error::MalformedSpec(
            "the certificate rule applies to two-component glue decompositions".into(),
        ));
    }
    let rebuilt = construct::glue(spec)?;
    if is_isometric(l, &rebuilt, limits)?.is_none() {
        return Err(Error::MalformedSpec(
            "decomposition does not reconstruct the lattice".into(),
        ));
    }
    let norms = construct::glue_component_norms(spec)?;
    if norms.iter().all(rat::is_integer) {
        return Ok(Certificate {
            verdict: CertVerdict::Unknown,
            dual_minimum: dm,
            glue_norms: Some(norms),
            component_notes: vec!["all glue norms are integral; rule not applicable".into()],
            cubic_embedding: None,
        });
    }
    let mut notes = Vec::new();
    for comp in &spec.components {
        let c = match comp {
            GlueComponent::Piece { lattice, .. } => lattice.clone(),
            GlueComponent::Scalar { a, .. } => construct::scalar_lattice(a.clone())?,
        };
        match certify_component(&c, limits)? {
            Some(note) => notes.push(note),
            None => {
                notes.push(format!(
                    "component of rank {} could not be certified",
                    c.rank()
                ));
                return Ok(Certificate {
                    verdict: CertVerdict::Unknown,
                    dual_minimum: dm,
                    glue_norms: Some(norms),
                    component_notes: notes,
                    cubic_embedding: None,
                });
            }
        }
    }
    Ok(Certificate {
        verdict: CertVerdict::AdditivelyIndecomposable,
        dual_minimum: dm,
        glue_norms: Some(norms),
        component_notes: notes,
        cubic_embedding: None,
    })
}

// --- Representations among scaled glue lattices over A_n --------------------

/// Arithmetic representation criterion between `A_n k(n+1) [i 1/(n+1)]` and
/// `A_n l(n+1) [j 1/(n+1)]`: representation holds iff some positive integer
/// `t` satisfies `j t = +-i mod n+1` and `k = l t^2`.
pub fn check_anrep(n: usize, k: u64, i: usize, ell: u64, j: usize) -> Result<bool> {
    validate_anrep_params(n, k, i)?;
    validate_anrep_params(n, ell, j)?;
    if k % ell != 0 {
        return Ok(false);
    }
    let t2 = k / ell;
    let t = (t2 as f64).sqrt().round() as u64;
    if t * t != t2 {
        return Ok(false);
    }
    let m = (n + 1) as u64;
    let jt = (j as u64 * t) % m;
    let i_mod = (i as u64) % m;
    Ok(jt == i_mod || (jt + i_mod) % m == 0)
}

fn validate_anrep_params(n: usize, k: u64, i: usize) -> Result<()> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter("need n >= 1 and k >= 1".into()));
    }
    if i > (n + 1) / 2 {
        return Err(Error::InvalidParameter(format!(
            "glue index {i} exceeds floor((n+1)/2)"
        )));
    }
    let m = (n + 1) as u64;
    if k % m != ((i * i) as u64) % m {
        return Err(Error::InvalidParameter(format!(
            "k = {k} is not congruent to i^2 = {} mod {m}; the glue is not integral",
            i * i
        )));
    }
    Ok(())
}

/// The root-sublattice precondition: the scaled glue lattice over `A_n` has
/// root sublattice exactly `A_n`.
pub fn anrep_precondition(n: usize, k: u64, i: usize, limits: &Limits) -> Result<bool> {
    validate_anrep_params(n, k, i)?;
    let l = construct::an_scaled_glue(n, k, i)?;
    let Some(rs) = shortvec::root_sublattice(&l, limits)? else {
        return Ok(false);
    };
    if rs.rank() != n {
        return Ok(false);
    }
    let an = construct::root_lattice(RootLatticeId::new(RootFamily::A, n))?;
    Ok(is_isometric(&an, &rs, limits)?.is_some())
}

/// Representation decided by explicit embedding search on the two
/// constructed lattices. Must agree with [`check_anrep`] whenever the
/// root-sublattice precondition holds for both sides.
pub fn anrep_bruteforce(
    n: usize,
    k: u64,
    i: usize,
    ell: u64,
    j: usize,
    limits: &Limits,
) -> Result<bool> {
    if !anrep_precondition(n, k, i, limits)? || !anrep_precondition(n, ell, j, limits)? {
        return Err(Error::PreconditionViolated(
            "a root sublattice is strictly larger than A_n".into(),
        ));
    }
    let small = construct::an_scaled_glue(n, k, i)?;
    let big = construct::an_scaled_glue(n, ell, j)?;
    represents(&small, &big, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{
        glue, glue_vector, l12, l12_spec, l16, named_k, named_m, root_lattice, scalar_lattice,
    };
    use crate::lattice::orthogonal_sum;
    use crate::rat::{rat, rat_int};

    fn lim() -> Limits {
        Limits::default()
    }

    fn root(f: RootFamily, n: usize) -> Lattice {
        root_lattice(RootLatticeId::new(f, n)).unwrap()
    }

    #[test]
    fn a2_embeds_in_i3() {
        let a2 = root(RootFamily::A, 2);
        let i3 = root(RootFamily::I, 3);
        let e = find_representations(&a2, &i3, 1, &lim()).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].verify());
    }

    #[test]
    fn odd_scalar_not_in_a2() {
        let three = scalar_lattice(3.into()).unwrap();
        let a2 = root(RootFamily::A, 2);
        assert!(!represents(&three, &a2, &lim()).unwrap());
    }

    #[test]
    fn m4_is_represented_by_k1() {
        let m4 = named_m(4).unwrap();
        let k1 = named_k(1).unwrap();
        let e = find_representations(&m4, &k1, 1, &lim()).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].verify());
        // Index-2 embedding, so not primitive.
        assert!(!e[0].is_primitive());
    }

    #[test]
    fn a8_in_e8_imprimitively() {
        let a8 = root(RootFamily::A, 8);
        let e8 = root(RootFamily::E8, 8);
        assert!(represents(&a8, &e8, &lim()).unwrap());
        assert!(!primitively_represents(&a8, &e8, &lim()).unwrap());
    }

    #[test]
    fn direct_summand_is_primitive() {
        let d4 = root(RootFamily::D, 4);
        let sum = orthogonal_sum(&d4, &scalar_lattice(1.into()).unwrap());
        assert!(primitively_represents(&d4, &sum, &lim()).unwrap());
    }

    #[test]
    fn small_m_c_not_in_k1() {
        let k1 = named_k(1).unwrap();
        for c in 1..=3 {
            let mc = named_m(c).unwrap();
            assert!(!represents(&mc, &k1, &lim()).unwrap(), "M({c}) in K(1)");
        }
    }

    #[test]
    fn glue_isometries() {
        // A3 4 [2 1/2] = D4.
        let d4_glue = glue(&GlueSpec::new(vec![
            GlueComponent::piece(
                root(RootFamily::A, 3),
                glue_vector(RootLatticeId::new(RootFamily::A, 3), 2).unwrap(),
            ),
            GlueComponent::scalar(4, 2),
        ]))
        .unwrap();
        let w = is_isometric(&root(RootFamily::D, 4), &d4_glue, &lim())
            .unwrap()
            .expect("isometric to D4");
        assert!(w.verify());
        // A3 20 [1 1/4] = A4.
        let a4_glue = construct::an_scaled_glue(3, 5, 1).unwrap();
        assert!(is_isometric(&root(RootFamily::A, 4), &a4_glue, &lim())
            .unwrap()
            .is_some());
        // A2 perp <1> vs I3: discriminants 3 vs 1.
        let l = orthogonal_sum(&root(RootFamily::A, 2), &scalar_lattice(1.into()).unwrap());
        assert!(is_isometric(&l, &root(RootFamily::I, 3), &lim())
            .unwrap()
            .is_none());
    }

    #[test]
    fn decomposition_components() {
        let a2 = root(RootFamily::A, 2);
        let five = scalar_lattice(5.into()).unwrap();
        let l = orthogonal_sum(&orthogonal_sum(&a2, &a2), &five);
        let comps = orthogonal_decomposition(&l, &lim()).unwrap();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[0].rank(), 1);
        assert_eq!(lattice::discriminant(&comps[0]), rat_int(5));
        assert_eq!(comps[1].rank(), 2);
        assert_eq!(comps[2].rank(), 2);

        let e8 = root(RootFamily::E8, 8);
        assert_eq!(orthogonal_decomposition(&e8, &lim()).unwrap().len(), 1);
    }

    #[test]
    fn decomposition_is_sound() {
        let l = orthogonal_sum(&root(RootFamily::A, 3), &scalar_lattice(4.into()).unwrap());
        let comps = decompose_with_bases(&l, &lim()).unwrap();
        // Pairwise orthogonal blocks.
        for (i, (_, bi)) in comps.iter().enumerate() {
            for (_, bj) in comps.iter().skip(i + 1) {
                let cross = bi
                    .to_rat()
                    .mul(l.gram())
                    .mul_transpose(&bj.to_rat());
                for r in 0..cross.nrows() {
                    for c in 0..cross.ncols() {
                        assert!(cross.at(r, c).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn cubic_embeddings() {
        // A2 embeds into I3.
        assert!(embeds_in_cubic(&root(RootFamily::A, 2), &lim()).unwrap());
        // <7> = 4 + 1 + 1 + 1.
        assert!(embeds_in_cubic(&scalar_lattice(7.into()).unwrap(), &lim()).unwrap());
        // E7 is refuted by the fast path: min(E7^#) = 3/2 > 1.
        assert_eq!(
            shortvec::dual_minimum(&root(RootFamily::E7, 7), &lim()).unwrap(),
            rat(3, 2)
        );
        assert!(!embeds_in_cubic(&root(RootFamily::E7, 7), &lim()).unwrap());
    }

    #[test]
    fn certificate_for_l12() {
        let l = l12().unwrap();
        let cert = additive_certificate(&l, Some(&l12_spec().unwrap()), &lim()).unwrap();
        assert_eq!(cert.verdict, CertVerdict::AdditivelyIndecomposable);
        assert_eq!(cert.dual_minimum, rat(4, 3));
        let norms = cert.glue_norms.unwrap();
        assert_eq!(norms, vec![rat(3, 2), rat(3, 2)]);
    }

    #[test]
    fn certificate_for_i2_is_sum_of_squares() {
        let i2 = root(RootFamily::I, 2);
        let cert = additive_certificate(&i2, None, &lim()).unwrap();
        assert_eq!(cert.verdict, CertVerdict::RepresentedBySumOfSquares);
        assert!(cert.cubic_embedding.unwrap().verify());
    }

    #[test]
    fn certificate_without_decomposition_is_unknown() {
        let l = l16().unwrap();
        let cert = additive_certificate(&l, None, &lim()).unwrap();
        assert_eq!(cert.verdict, CertVerdict::Unknown);
        assert_eq!(cert.dual_minimum, rat(3, 2));
    }

    #[test]
    fn anrep_criterion_examples() {
        // K_d contains M_{4d}: n = 4, l = 5d-1, j = 2, k = 4(5d-1), i = 1,
        // t = 2: jt = 4 = -1 mod 5.
        assert!(check_anrep(4, 16, 1, 4, 2).unwrap());
        // Self representation: t = 1.
        assert!(check_anrep(2, 7, 1, 7, 1).unwrap());
        // n = 2: k = 9, i = 0 vs l = 1, j = 1: t = 3, jt = 0 != +-0? 3*3=9=0
        // mod 3 comparing against i=0: holds; instead take l = 9, j = 0,
        // k = 9, i = 0: t = 1, works.
        assert!(check_anrep(2, 9, 0, 9, 0).unwrap());
        // Congruence failure: n = 2, k = 4 (i = 1), l = 1 (j = 1): t = 2,
        // jt = 2 = -1 mod 3: holds. Take instead k = 16, l = 1: t = 4,
        // jt = 1 = +1 mod 3: holds again. k = 9, i = 0, l = 1, j = 1: t = 3,
        // jt = 0 = 0 = i: holds. Use k = 36, i = 0, l = 4, j = 1: t = 3.
        assert!(check_anrep(2, 36, 0, 4, 1).unwrap());
        // No integer square ratio.
        assert!(!check_anrep(2, 7, 1, 4, 1).unwrap());
        // Inadmissible parameters error.
        assert!(check_anrep(2, 5, 1, 1, 1).is_err());
        assert!(check_anrep(4, 5, 3, 5, 1).is_err());
    }

    #[test]
    fn anrep_precondition_filters() {
        let l = lim();
        // A2 3 [1 1/3] = I3: roots span all of I3.
        assert!(!anrep_precondition(2, 1, 1, &l).unwrap());
        // A2 21 [1 1/3]: no extra roots.
        assert!(anrep_precondition(2, 7, 1, &l).unwrap());
        // A2 perp <3> (k = 9, i = 0): scalar part has no roots.
        assert!(anrep_precondition(2, 9, 0, &l).unwrap());
        // A2 12 [1 1/3] = A3: bigger root lattice.
        assert!(!anrep_precondition(2, 4, 1, &l).unwrap());
        assert!(matches!(
            anrep_bruteforce(2, 1, 1, 1, 1, &l),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn witnesses_compose() {
        let a2 = root(RootFamily::A, 2);
        let i3 = root(RootFamily::I, 3);
        let i5 = root(RootFamily::I, 5);
        let e1 = find_representations(&i3, &i5, 1, &lim()).unwrap().remove(0);
        let e2 = find_representations(&a2, &i3, 1, &lim()).unwrap().remove(0);
        let composite = Embedding::compose(&e1, &e2);
        assert!(composite.verify());
        assert_eq!(composite.source.gram(), a2.gram());
    }

    #[test]
    fn search_budget_is_reported() {
        let tight = Limits {
            enumeration_nodes: crate::DEFAULT_BUDGET,
            search_nodes: 1,
        };
        let d4 = root(RootFamily::D, 4);
        let e8 = root(RootFamily::E8, 8);
        assert!(matches!(
            find_representations(&d4, &e8, 1, &tight),
            Err(Error::SearchBudgetExceeded { .. })
        ));
    }
}
