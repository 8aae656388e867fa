//! Bounded complexes of free modules, Koszul complexes of (powered) regular
//! sequences, homology by exact linear algebra on graded or filtered slices,
//! Hom complexes into form modules, and the zero test for Ext classes
//! presented by Koszul data (generalized fractions).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactla::{quotient_reps, Rat, RatMatrix};
use crate::kaehler::{combinations, AForm, MixedFormContext};
use crate::polyalg::{
    groebner, monomials_up_to, APoly, ArtinAlgebra, Monomial, Poly, PolyContext,
};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("empty sequence")]
    EmptySequence,
    #[error("context mismatch between Koszul data and target")]
    ContextMismatch,
    #[error("operation requires a free coefficient context")]
    NotFree,
    #[error("operation requires plain (untwisted) sequence entries")]
    NotPlain,
    #[error("graded slice computation requires homogeneous data")]
    NotHomogeneous,
}

/// Sparse matrix with entries in patch ⊗ A.
#[derive(Debug, Clone)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), APoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn set(&mut self, r: usize, c: usize, v: APoly) {
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&APoly> {
        self.entries.get(&(r, c))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = PolyMatrix::zeros(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            for (&(k2, j), b) in &other.entries {
                if k2 != k {
                    continue;
                }
                let prod = a.mul(b);
                match out.entries.get_mut(&(i, j)) {
                    Some(cur) => {
                        let s = cur.add(&prod);
                        if s.is_zero() {
                            out.entries.remove(&(i, j));
                        } else {
                            *cur = s;
                        }
                    }
                    None => {
                        if !prod.is_zero() {
                            out.entries.insert((i, j), prod);
                        }
                    }
                }
            }
        }
        out
    }
}

/// A bounded chain complex of free modules over patch ⊗ A; diffs[i] maps
/// degree i+1 to degree i. d ∘ d = 0 is checked symbolically on
/// construction.
#[derive(Debug, Clone)]
pub struct PolyComplex {
    pub ctx: Arc<PolyContext>,
    pub algebra: Arc<ArtinAlgebra>,
    pub ranks: Vec<usize>,
    pub diffs: Vec<PolyMatrix>,
}

impl PolyComplex {
    pub fn new(
        ctx: Arc<PolyContext>,
        algebra: Arc<ArtinAlgebra>,
        ranks: Vec<usize>,
        diffs: Vec<PolyMatrix>,
    ) -> Self {
        assert_eq!(diffs.len() + 1, ranks.len().max(1));
        for (i, d) in diffs.iter().enumerate() {
            assert_eq!(d.cols, ranks[i + 1], "differential {} column mismatch", i);
            assert_eq!(d.rows, ranks[i], "differential {} row mismatch", i);
        }
        for i in 0..diffs.len().saturating_sub(1) {
            assert!(
                diffs[i].mul(&diffs[i + 1]).is_zero(),
                "d∘d != 0 between degrees {} and {}",
                i + 2,
                i
            );
        }
        PolyComplex { ctx, algebra, ranks, diffs }
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }
}

/// Koszul presentation data: a sequence with exponent levels. Exponents are
/// the colimit levels of the generalized-fraction calculus.
#[derive(Debug, Clone)]
pub struct KoszulData {
    pub ctx: Arc<PolyContext>,
    pub algebra: Arc<ArtinAlgebra>,
    pub sequence: Vec<APoly>,
    pub exponents: Vec<u32>,
}

impl KoszulData {
    pub fn plain(ctx: &Arc<PolyContext>, seq: &[Poly]) -> Self {
        let algebra = ArtinAlgebra::rational();
        let sequence = seq.iter().map(|f| APoly::from_poly(algebra.clone(), f)).collect();
        KoszulData {
            ctx: ctx.clone(),
            algebra,
            sequence,
            exponents: vec![1; seq.len()],
        }
    }

    pub fn with_algebra(ctx: &Arc<PolyContext>, algebra: &Arc<ArtinAlgebra>, seq: Vec<APoly>) -> Self {
        let exps = vec![1; seq.len()];
        KoszulData { ctx: ctx.clone(), algebra: algebra.clone(), sequence: seq, exponents: exps }
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn powered(&self, t: usize) -> APoly {
        self.sequence[t].pow(self.exponents[t])
    }

    pub fn powered_all(&self) -> Vec<APoly> {
        (0..self.len()).map(|t| self.powered(t)).collect()
    }

    /// Plain polynomial generators, when the sequence is untwisted.
    pub fn plain_powered(&self) -> Result<Vec<Poly>, ComplexError> {
        self.sequence
            .iter()
            .zip(&self.exponents)
            .map(|(f, &e)| {
                if f.is_plain() {
                    Ok(f.augment().pow(e))
                } else {
                    Err(ComplexError::NotPlain)
                }
            })
            .collect()
    }

    pub fn max_powered_degree(&self) -> u32 {
        (0..self.len()).map(|t| self.powered(t).total_x_degree()).max().unwrap_or(1).max(1)
    }
}

/// The Koszul complex with the fixed sign convention
/// ∂(e_{j1}∧…∧e_{ji}) = Σ_t (−1)^{t+1} f_{jt}^{a_{jt}} e_{…ĵt…}.
pub fn koszul(data: &KoszulData) -> Result<PolyComplex, ComplexError> {
    koszul_signed(data, false)
}

/// Internal fault-injection variant: `flip` negates the sign pattern to
/// (−1)^t, which still squares to zero but breaks the fundamental-class
/// identity. Used only by the self-test suite.
pub fn koszul_signed(data: &KoszulData, flip: bool) -> Result<PolyComplex, ComplexError> {
    if data.is_empty() {
        return Err(ComplexError::EmptySequence);
    }
    let p = data.len();
    let subsets: Vec<Vec<Vec<usize>>> = (0..=p).map(|i| combinations(p, i)).collect();
    let ranks: Vec<usize> = subsets.iter().map(|s| s.len()).collect();
    let powered = data.powered_all();
    let mut diffs = Vec::new();
    for i in 1..=p {
        let src = &subsets[i];
        let dst = &subsets[i - 1];
        let index: BTreeMap<&Vec<usize>, usize> =
            dst.iter().enumerate().map(|(k, v)| (v, k)).collect();
        let mut m = PolyMatrix::zeros(dst.len(), src.len());
        for (c, t_set) in src.iter().enumerate() {
            for (pos, &t) in t_set.iter().enumerate() {
                let mut reduced = t_set.clone();
                reduced.remove(pos);
                let r = index[&reduced];
                let base_sign = if pos % 2 == 0 { 1i32 } else { -1 };
                let sign = if flip { -base_sign } else { base_sign };
                let entry = powered[t].scale(&Rat::from_integer(sign.into()));
                let acc = match m.get(r, c) {
                    Some(old) => old.add(&entry),
                    None => entry,
                };
                m.set(r, c, acc);
            }
        }
        diffs.push(m);
    }
    // store as diffs[k]: degree k+1 -> degree k
    Ok(PolyComplex::new(data.ctx.clone(), data.algebra.clone(), ranks, diffs))
}

// ---------------------------------------------------------------------------
// Truncated module bases
// ---------------------------------------------------------------------------

struct TruncBasis {
    monos: Vec<Monomial>,
    mono_index: BTreeMap<Monomial, usize>,
    alg_dim: usize,
    subsets: Vec<Vec<usize>>,
}

impl TruncBasis {
    fn new(nvars: usize, cap: u32, alg_dim: usize, subsets: Vec<Vec<usize>>) -> Self {
        let monos = monomials_up_to(nvars, cap);
        let mono_index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        TruncBasis { monos, mono_index, alg_dim, subsets }
    }

    fn dim(&self) -> usize {
        self.subsets.len() * self.monos.len() * self.alg_dim
    }

    fn index(&self, subset_idx: usize, mono: &Monomial, alg: usize) -> Option<usize> {
        let mi = self.mono_index.get(mono)?;
        Some((subset_idx * self.monos.len() + mi) * self.alg_dim + alg)
    }
}

/// Matrix of the Koszul differential from the degree-i truncation at
/// `cap_src` to the degree-(i-1) truncation at `cap_dst`.
fn koszul_diff_truncated(
    data: &KoszulData,
    i: usize,
    src: &TruncBasis,
    dst: &TruncBasis,
) -> RatMatrix {
    let powered = data.powered_all();
    let dst_index: BTreeMap<&Vec<usize>, usize> =
        dst.subsets.iter().enumerate().map(|(k, v)| (v, k)).collect();
    let alg = &data.algebra;
    let mut m = RatMatrix::zeros(dst.dim(), src.dim());
    let _ = i;
    for (si, t_set) in src.subsets.iter().enumerate() {
        for (pos, &t) in t_set.iter().enumerate() {
            let mut reduced = t_set.clone();
            reduced.remove(pos);
            let di = dst_index[&reduced];
            let sign = if pos % 2 == 0 { Rat::one() } else { -Rat::one() };
            for (mi, mono) in src.monos.iter().enumerate() {
                for a in 0..src.alg_dim {
                    let col = (si * src.monos.len() + mi) * src.alg_dim + a;
                    // (f_t^{a_t}) * (mono ⊗ alg_a)
                    for (c, comp) in powered[t].comps().iter().enumerate() {
                        if comp.is_zero() {
                            continue;
                        }
                        for (m2, coeff) in comp.terms() {
                            let target_mono = mono.mul(m2);
                            for (d, cd) in alg.mul_basis(c, a) {
                                if let Some(row) = dst.index(di, &target_mono, *d) {
                                    m.add_to(row, col, &(coeff * cd * &sign));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    m
}

#[derive(Debug, Clone)]
pub struct FilteredHomology {
    pub dim: usize,
    pub bound: u32,
    pub slack: u32,
}

/// Homology of the Koszul complex in homological degree i, on cycles of
/// internal degree <= bound, with boundary witnesses allowed up to
/// bound + slack. Exact for the reported window.
pub fn koszul_homology_filtered(data: &KoszulData, i: usize, bound: u32) -> FilteredHomology {
    assert!(i >= 1, "filtered homology is for positive homological degrees");
    let p = data.len();
    let n = data.ctx.nvars();
    let alg_dim = data.algebra.dim();
    let slack = data.max_powered_degree();
    let dim = if i > p {
        0
    } else {
        let src = TruncBasis::new(n, bound, alg_dim, combinations(p, i));
        let dst = TruncBasis::new(n, bound + slack, alg_dim, combinations(p, i.saturating_sub(1)));
        let d_i = koszul_diff_truncated(data, i, &src, &dst);
        let cycles = d_i.kernel_basis();
        if cycles.dim() == 0 {
            0
        } else if i == p {
            cycles.dim()
        } else {
            let wit_src = TruncBasis::new(n, bound + slack, alg_dim, combinations(p, i + 1));
            let wit_dst =
                TruncBasis::new(n, bound + 2 * slack, alg_dim, combinations(p, i));
            let b = koszul_diff_truncated(data, i + 1, &wit_src, &wit_dst);
            // embed the cycles into the larger truncation
            let embed: Vec<Vec<Rat>> = cycles
                .basis()
                .iter()
                .map(|v| {
                    let mut out = vec![Rat::zero(); wit_dst.dim()];
                    for (idx, c) in v.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let a = idx % alg_dim;
                        let rest = idx / alg_dim;
                        let mi = rest % src.monos.len();
                        let si = rest / src.monos.len();
                        let row = wit_dst
                            .index(si, &src.monos[mi], a)
                            .expect("small truncation embeds");
                        out[row] = c.clone();
                    }
                    out
                })
                .collect();
            // dim Z - dim(Z ∩ im B), by reducing the cycles against one
            // sparse elimination of the boundary columns
            crate::exactla::dim_modulo_image(&embed, &b)
        }
    };
    FilteredHomology { dim, bound, slack }
}

/// True when H_i vanishes through the bound for every i >= 1.
pub fn koszul_positive_homology_vanishes(
    ctx: &Arc<PolyContext>,
    seq: &[APoly],
    bound: u32,
) -> bool {
    if seq.is_empty() {
        return false;
    }
    let algebra = seq[0].algebra().clone();
    let data = KoszulData {
        ctx: ctx.clone(),
        algebra,
        sequence: seq.to_vec(),
        exponents: vec![1; seq.len()],
    };
    for i in 1..=data.len() {
        if koszul_homology_filtered(&data, i, bound).dim != 0 {
            return false;
        }
    }
    true
}

/// Graded Koszul homology: dim H_i per internal degree 0..=bound. Requires
/// a plain homogeneous sequence (and homogeneous context relations), where
/// internal degrees are exact. Degree bookkeeping shifts each exterior
/// generator by the degree of its powered sequence entry.
pub fn koszul_homology_graded(
    data: &KoszulData,
    i: usize,
    bound: u32,
) -> Result<Vec<usize>, ComplexError> {
    let plain = data.plain_powered()?;
    if !plain.iter().all(|f| f.is_homogeneous())
        || !data.ctx.relations().iter().all(|r| r.is_homogeneous())
    {
        return Err(ComplexError::NotHomogeneous);
    }
    if plain.iter().any(|f| f.is_zero()) {
        return Err(ComplexError::NotHomogeneous);
    }
    let p = data.len();
    let n = data.ctx.nvars();
    let degs: Vec<u32> = plain.iter().map(|f| f.total_degree()).collect();
    let shift = |t_set: &[usize]| -> u32 { t_set.iter().map(|&t| degs[t]).sum() };
    let lts = data.ctx.leading_monomials();
    let standard: Vec<Monomial> = monomials_up_to(n, bound)
        .into_iter()
        .filter(|m| !lts.iter().any(|lt| lt.divides(m)))
        .collect();

    // basis of slice e in homological degree k: (subset T, standard m) with
    // |m| + shift(T) = e
    let slice_basis = |k: usize, e: u32| -> Vec<(usize, usize)> {
        let subsets = combinations(p, k);
        let mut out = Vec::new();
        for (si, t_set) in subsets.iter().enumerate() {
            let s = shift(t_set);
            if s > e {
                continue;
            }
            for (mi, m) in standard.iter().enumerate() {
                if m.degree() == e - s {
                    out.push((si, mi));
                }
            }
        }
        out
    };

    let diff_slice = |k: usize, e: u32| -> RatMatrix {
        // degree k slice e -> degree k-1 slice e
        let src = slice_basis(k, e);
        let dst = slice_basis(k - 1, e);
        let dst_idx: BTreeMap<(usize, usize), usize> =
            dst.iter().enumerate().map(|(r, key)| (*key, r)).collect();
        let src_subsets = combinations(p, k);
        let dst_subsets = combinations(p, k - 1);
        let dst_sub_idx: BTreeMap<&Vec<usize>, usize> =
            dst_subsets.iter().enumerate().map(|(x, v)| (v, x)).collect();
        let std_idx: BTreeMap<&Monomial, usize> =
            standard.iter().enumerate().map(|(x, m)| (m, x)).collect();
        let mut out = RatMatrix::zeros(dst.len(), src.len());
        for (c, &(si, mi)) in src.iter().enumerate() {
            let t_set = &src_subsets[si];
            for (pos, &t) in t_set.iter().enumerate() {
                let mut reduced = t_set.clone();
                reduced.remove(pos);
                let di = dst_sub_idx[&reduced];
                let sign = if pos % 2 == 0 { Rat::one() } else { -Rat::one() };
                let prod = data
                    .ctx
                    .normal_form(&plain[t].mul(&Poly::from_monomial(n, standard[mi].clone())));
                for (m2, coeff) in prod.terms() {
                    if let Some(&smi) = std_idx.get(m2) {
                        if let Some(&row) = dst_idx.get(&(di, smi)) {
                            out.add_to(row, c, &(coeff * &sign));
                        }
                    }
                }
            }
        }
        out
    };

    let mut dims = Vec::new();
    for e in 0..=bound {
        let z = if i == 0 {
            slice_basis(0, e).len()
        } else {
            let d_i = diff_slice(i, e);
            d_i.kernel_basis().dim()
        };
        let b = if i + 1 <= p {
            diff_slice(i + 1, e).rank()
        } else {
            0
        };
        dims.push(z - b);
    }
    Ok(dims)
}

// ---------------------------------------------------------------------------
// Hom complexes into form modules
// ---------------------------------------------------------------------------

/// The cochain complex Hom(Koszul, T) for a form module target T = Ω^q over
/// patch ⊗ A: modules T^{C(p,i)}, differentials transpose contraction by the
/// powered sequence. Stored with plain polynomial scalars acting diagonally
/// on the target's free basis over Q[x].
#[derive(Debug)]
pub struct HomComplex {
    pub data: KoszulData,
    pub target_degree: usize,
    pub target_rank: usize,
    /// ranks[i] = C(p,i) (module rank counted in copies of T).
    pub ranks: Vec<usize>,
    /// diffs[i]: degree i -> i+1, entries are plain polynomials.
    pub diffs: Vec<Vec<((usize, usize), Poly)>>,
}

/// Hom(Koszul(f^a), Ω^q) as a cochain complex. Requires a plain sequence;
/// the target must live over the same patch and algebra.
pub fn hom_into(
    data: &KoszulData,
    target: &Arc<MixedFormContext>,
    target_degree: usize,
) -> Result<HomComplex, ComplexError> {
    if !target.patch().same_as(&data.ctx) || !target.algebra().same_as(&data.algebra) {
        return Err(ComplexError::ContextMismatch);
    }
    let plain = data.plain_powered()?;
    let p = data.len();
    let subsets: Vec<Vec<Vec<usize>>> = (0..=p).map(|i| combinations(p, i)).collect();
    let ranks: Vec<usize> = subsets.iter().map(|s| s.len()).collect();
    let mut diffs = Vec::new();
    for i in 0..p {
        let src = &subsets[i];
        let dst = &subsets[i + 1];
        let src_idx: BTreeMap<&Vec<usize>, usize> =
            src.iter().enumerate().map(|(k, v)| (v, k)).collect();
        let mut entries = Vec::new();
        for (r, t_set) in dst.iter().enumerate() {
            for (pos, &t) in t_set.iter().enumerate() {
                let mut reduced = t_set.clone();
                reduced.remove(pos);
                let c = src_idx[&reduced];
                let sign = if pos % 2 == 0 { Rat::one() } else { -Rat::one() };
                entries.push(((r, c), plain[t].scale(&sign)));
            }
        }
        diffs.push(entries);
    }
    Ok(HomComplex {
        data: data.clone(),
        target_degree,
        target_rank: target.rank(target_degree),
        ranks,
        diffs,
    })
}

impl HomComplex {
    /// Cohomology dimension per internal degree 0..=bound, for homogeneous
    /// plain data over a free patch. The target's free basis columns sit in
    /// internal degree 0.
    pub fn cohomology_dims_graded(&self, i: usize, bound: u32) -> Result<Vec<usize>, ComplexError> {
        if !self.data.ctx.is_free() {
            return Err(ComplexError::NotFree);
        }
        let plain = self.data.plain_powered()?;
        if !plain.iter().all(|f| f.is_homogeneous() && !f.is_zero()) {
            return Err(ComplexError::NotHomogeneous);
        }
        let p = self.data.len();
        let n = self.data.ctx.nvars();
        let degs: Vec<u32> = plain.iter().map(|f| f.total_degree()).collect();
        let monos = monomials_up_to(n, bound);
        // dual grading: Hom(e_T, -) sits in degree -shift(T); a cochain slice
        // of degree e in module i collects (T, m, col) with |m| = e + ... we
        // grade so that the differential preserves e: deg(T, m) = |m| - shift(T)
        // can be negative; shift everything by the max shift instead.
        let total_shift: u32 = degs.iter().sum();
        let subsets: Vec<Vec<Vec<usize>>> = (0..=p).map(|k| combinations(p, k)).collect();
        let shift = |t_set: &[usize]| -> u32 { t_set.iter().map(|&t| degs[t]).sum() };
        let slice_basis = |k: usize, e: u32| -> Vec<(usize, usize, usize)> {
            // (subset, mono, target column); internal degree = |m| + (total - shift(T))
            let mut out = Vec::new();
            for (si, t_set) in subsets[k].iter().enumerate() {
                let s = total_shift - shift(t_set);
                if s > e {
                    continue;
                }
                for (mi, m) in monos.iter().enumerate() {
                    if m.degree() == e - s {
                        for col in 0..self.target_rank {
                            out.push((si, mi, col));
                        }
                    }
                }
            }
            out
        };
        let mono_idx: BTreeMap<&Monomial, usize> =
            monos.iter().enumerate().map(|(x, m)| (m, x)).collect();
        let diff_slice = |k: usize, e: u32| -> RatMatrix {
            // cochain degree k slice e -> degree k+1 slice e
            let src = slice_basis(k, e);
            let dst = slice_basis(k + 1, e);
            let dst_idx: BTreeMap<(usize, usize, usize), usize> =
                dst.iter().enumerate().map(|(r, key)| (*key, r)).collect();
            let src_sub: BTreeMap<&Vec<usize>, usize> =
                subsets[k].iter().enumerate().map(|(x, v)| (v, x)).collect();
            let mut out = RatMatrix::zeros(dst.len(), src.len());
            for (c, &(si, mi, col)) in src.iter().enumerate() {
                let t_set = &subsets[k][si];
                // delta(phi)(e_{T'}) = sum signs f_t phi(e_{T' minus t})
                for (di, t_big) in subsets[k + 1].iter().enumerate() {
                    for (pos, &t) in t_big.iter().enumerate() {
                        let mut reduced = t_big.clone();
                        reduced.remove(pos);
                        if &reduced != t_set {
                            continue;
                        }
                        debug_assert_eq!(src_sub[&reduced], si);
                        let sign = if pos % 2 == 0 { Rat::one() } else { -Rat::one() };
                        let prod = plain[t].mul(&Poly::from_monomial(n, monos[mi].clone()));
                        for (m2, coeff) in prod.terms() {
                            if let Some(&m2i) = mono_idx.get(m2) {
                                if let Some(&row) = dst_idx.get(&(di, m2i, col)) {
                                    out.add_to(row, c, &(coeff * &sign));
                                }
                            }
                        }
                    }
                }
            }
            out
        };
        let p_len = self.data.len();
        let mut dims = Vec::new();
        for e in 0..=bound {
            let z = if i < p_len {
                diff_slice(i, e).kernel_basis().dim()
            } else {
                slice_basis(i, e).len()
            };
            let b = if i == 0 { 0 } else { diff_slice(i - 1, e).rank() };
            dims.push(z - b);
        }
        Ok(dims)
    }

    /// Dims of target/(f^a)target per internal degree: the top cohomology
    /// presentation, computed independently from the quotient ring slices.
    pub fn top_presentation_dims(&self, bound: u32) -> Result<Vec<usize>, ComplexError> {
        let plain = self.data.plain_powered()?;
        let mut gens = self.data.ctx.relations().to_vec();
        gens.extend(plain);
        let gb = groebner(&gens, self.data.ctx.order());
        let lts: Vec<Monomial> =
            gb.basis.iter().filter_map(|g| g.leading_term(gb.order).map(|(m, _)| m.clone())).collect();
        let mut dims = vec![0usize; bound as usize + 1];
        for m in monomials_up_to(self.data.ctx.nvars(), bound) {
            if !lts.iter().any(|lt| lt.divides(&m)) {
                dims[m.degree() as usize] += self.target_rank;
            }
        }
        Ok(dims)
    }
}

// ---------------------------------------------------------------------------
// Ext-class zero test
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ExtComponentReport {
    pub component: String,
    pub value: String,
    pub poly: Poly,
    pub member: bool,
    /// Cofactors against the powered generators (zero verdict).
    pub cofactors: Option<Vec<Poly>>,
    /// Nonzero normal form (nonzero verdict).
    pub normal_form: Option<Poly>,
}

#[derive(Debug, Clone)]
pub struct ExtZeroReport {
    pub zero: bool,
    pub components: Vec<ExtComponentReport>,
    /// Extra saturation power of the auxiliary denominator that was applied
    /// before membership held, if any.
    pub saturation_power: u32,
    /// The powered generators every membership was tested against.
    pub generators: Vec<Poly>,
}

/// Decides whether the generalized fraction [numerator / (f_1^{a_1}, ...,
/// f_p^{a_p})] is zero: componentwise ideal membership of the numerator in
/// the powered ideal, with cofactor certificates on success and nonzero
/// normal forms on failure.
pub fn ext_class_is_zero(data: &KoszulData, numerator: &AForm) -> Result<ExtZeroReport, ComplexError> {
    if !data.ctx.is_free() {
        return Err(ComplexError::NotFree);
    }
    let gens = data.plain_powered()?;
    let gb = groebner(&gens, data.ctx.order());
    let mut zero = true;
    let mut components = Vec::new();
    let xvars = data.ctx.vars();
    for (key, poly) in numerator.comps() {
        let m = gb.membership(poly);
        if !m.member {
            zero = false;
        }
        components.push(ExtComponentReport {
            component: numerator.component_name(key),
            value: poly.format(xvars),
            poly: poly.clone(),
            member: m.member,
            cofactors: m.cofactors,
            normal_form: if m.member { None } else { Some(m.normal_form) },
        });
    }
    Ok(ExtZeroReport { zero, components, saturation_power: 0, generators: gens })
}

/// Variant for classes defined off V(g): decides zero in the localization by
/// saturating with powers of g up to `max_extra`.
pub fn ext_class_is_zero_saturated(
    data: &KoszulData,
    numerator: &AForm,
    g: &Poly,
    max_extra: u32,
) -> Result<ExtZeroReport, ComplexError> {
    let mut current = numerator.clone();
    for n in 0..=max_extra {
        let rep = ext_class_is_zero(data, &current)?;
        if rep.zero || n == max_extra {
            return Ok(ExtZeroReport { saturation_power: n, ..rep });
        }
        current = current.mul_plain(g);
    }
    unreachable!()
}

/// Standard transition map between exponent levels: multiply the numerator
/// by prod f_t^{to_t - from_t}.
pub fn ext_transition(
    data: &KoszulData,
    numerator: &AForm,
    to_exponents: &[u32],
) -> Result<(KoszulData, AForm), ComplexError> {
    assert_eq!(to_exponents.len(), data.len());
    let mut out = numerator.clone();
    for (t, (&from, &to)) in data.exponents.iter().zip(to_exponents).enumerate() {
        assert!(to >= from, "transition maps only raise exponent levels");
        if to > from {
            let f = &data.sequence[t];
            if !f.is_plain() {
                return Err(ComplexError::NotPlain);
            }
            out = out.mul_plain(&f.augment().pow(to - from));
        }
    }
    let mut new_data = data.clone();
    new_data.exponents = to_exponents.to_vec();
    Ok((new_data, out))
}

/// Verifies a cofactor certificate by re-expansion.
pub fn verify_cofactors(gens: &[Poly], cofactors: &[Poly], value: &Poly) -> bool {
    let mut acc = Poly::zero(value.nvars());
    for (c, g) in cofactors.iter().zip(gens) {
        acc = acc.add(&c.mul(g));
    }
    acc == *value
}

// ---------------------------------------------------------------------------
// Finite-dimensional chain helpers (shared with the homology modules)
// ---------------------------------------------------------------------------

/// Representatives of ker(d_out)/im(d_in) for one degree of a Q-complex.
#[derive(Debug)]
pub struct HomologySpace {
    pub reps: Vec<Vec<Rat>>,
    pub cycle_dim: usize,
    pub boundary_rank: usize,
    boundary_cols: Vec<Vec<Rat>>,
}

impl HomologySpace {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of a cycle's homology class against the representative
    /// basis (solving modulo boundaries). None when the vector is not a
    /// combination of reps and boundaries (i.e. not a cycle of this degree).
    pub fn class_coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let ambient = v.len();
        let mut cols: Vec<Vec<Rat>> = self.reps.clone();
        cols.extend(self.boundary_cols.iter().cloned());
        let m = RatMatrix::from_columns(ambient, &cols);
        let x = m.solve(v)?;
        Some(x[..self.reps.len()].to_vec())
    }
}

/// Homology at the degree with outgoing differential `d_out` (C_n -> C_{n-1})
/// and incoming `d_in` (C_{n+1} -> C_n).
pub fn homology_space(d_out: &RatMatrix, d_in: &RatMatrix) -> HomologySpace {
    let cycles = d_out.kernel_basis();
    let boundary_cols: Vec<Vec<Rat>> = (0..d_in.cols()).map(|c| d_in.column(c)).collect();
    let boundary_rank = d_in.rank();
    let reps = quotient_reps(cycles.basis(), &boundary_cols);
    HomologySpace { reps, cycle_dim: cycles.dim(), boundary_rank, boundary_cols }
}

/// Same, from explicit spanning sets of cycles and boundaries.
pub fn homology_from_parts(cycle_cols: Vec<Vec<Rat>>, boundary_cols: Vec<Vec<Rat>>) -> HomologySpace {
    let ambient = cycle_cols
        .first()
        .or_else(|| boundary_cols.first())
        .map_or(0, |v| v.len());
    let cycle_dim = if cycle_cols.is_empty() {
        0
    } else {
        RatMatrix::from_columns(ambient, &cycle_cols).rank()
    };
    let boundary_rank = if boundary_cols.is_empty() {
        0
    } else {
        RatMatrix::from_columns(ambient, &boundary_cols).rank()
    };
    let reps = quotient_reps(&cycle_cols, &boundary_cols);
    HomologySpace { reps, cycle_dim, boundary_rank, boundary_cols }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse_poly;

    fn free3() -> Arc<PolyContext> {
        PolyContext::free_named(&["x", "y", "z"])
    }

    fn free2() -> Arc<PolyContext> {
        PolyContext::free_named(&["x", "y"])
    }

    fn plain_data(ctx: &Arc<PolyContext>, seq: &[&str]) -> KoszulData {
        let polys: Vec<Poly> = seq.iter().map(|s| ctx.parse(s).unwrap()).collect();
        KoszulData::plain(ctx, &polys)
    }

    #[test]
    fn koszul_ranks_and_signs() {
        let ctx = free2();
        let data = plain_data(&ctx, &["x", "y"]);
        let c = koszul(&data).unwrap();
        assert_eq!(c.ranks, vec![1, 2, 1]);
        // M1 = (x, y)
        let m1 = &c.diffs[0];
        assert_eq!(m1.get(0, 0).unwrap().augment(), ctx.parse("x").unwrap());
        assert_eq!(m1.get(0, 1).unwrap().augment(), ctx.parse("y").unwrap());
        // M2 = (-y, x)^T
        let m2 = &c.diffs[1];
        assert_eq!(m2.get(0, 0).unwrap().augment(), ctx.parse("-y").unwrap());
        assert_eq!(m2.get(1, 0).unwrap().augment(), ctx.parse("x").unwrap());

        let ctx3 = free3();
        let c3 = koszul(&plain_data(&ctx3, &["x", "y", "z"])).unwrap();
        assert_eq!(c3.ranks, vec![1, 3, 3, 1]);
    }

    #[test]
    fn koszul_single_element() {
        let ctx = PolyContext::free_named(&["x"]);
        let c = koszul(&plain_data(&ctx, &["x"])).unwrap();
        assert_eq!(c.ranks, vec![1, 1]);
    }

    #[test]
    fn graded_homology_regular_vs_irregular() {
        let ctx = free2();
        // (x, y): H_1 = 0 in all degrees
        let dims = koszul_homology_graded(&plain_data(&ctx, &["x", "y"]), 1, 6).unwrap();
        assert!(dims.iter().all(|&d| d == 0));
        // (x, x): H_1 nonzero (e1 - e2 is a cycle, never a boundary)
        let dims = koszul_homology_graded(&plain_data(&ctx, &["x", "x"]), 1, 6).unwrap();
        assert!(dims.iter().any(|&d| d > 0));
        // H_0 slices are the quotient ring slices
        let dims = koszul_homology_graded(&plain_data(&ctx, &["x", "y"]), 0, 4).unwrap();
        assert_eq!(dims, vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn filtered_matches_graded_on_regular_sequences() {
        let ctx = free2();
        let data = plain_data(&ctx, &["x*y", "x + y"]);
        for i in 1..=2 {
            assert_eq!(koszul_homology_filtered(&data, i, 8).dim, 0, "H_{} should vanish", i);
        }
        let bad = plain_data(&ctx, &["x", "x"]);
        assert!(koszul_homology_filtered(&bad, 1, 6).dim > 0);
    }

    #[test]
    fn hom_complex_self_duality() {
        // p=2, target Ω^2 of Q[x,y]: H^2 = Ω^2/(x,y)Ω^2, H^i = 0 for i < 2
        let ctx = free2();
        let data = plain_data(&ctx, &["x", "y"]);
        let q = ArtinAlgebra::rational();
        let mfc = MixedFormContext::new(ctx.clone(), q);
        let hc = hom_into(&data, &mfc, 2).unwrap();
        assert_eq!(hc.target_rank, 1);
        for i in 0..2 {
            let dims = hc.cohomology_dims_graded(i, 5).unwrap();
            assert!(dims.iter().all(|&d| d == 0), "H^{} = {:?}", i, dims);
        }
        let top = hc.cohomology_dims_graded(2, 5).unwrap();
        let expected = hc.top_presentation_dims(5).unwrap();
        assert_eq!(top, expected);
    }

    #[test]
    fn hom_complex_with_powers() {
        // exponents (2,1): H^2 = Ω^2/(x^2, y)Ω^2
        let ctx = free2();
        let polys: Vec<Poly> = vec![ctx.parse("x").unwrap(), ctx.parse("y").unwrap()];
        let mut data = KoszulData::plain(&ctx, &polys);
        data.exponents = vec![2, 1];
        let q = ArtinAlgebra::rational();
        let mfc = MixedFormContext::new(ctx.clone(), q);
        let hc = hom_into(&data, &mfc, 2).unwrap();
        let top = hc.cohomology_dims_graded(2, 5).unwrap();
        let expected = hc.top_presentation_dims(5).unwrap();
        assert_eq!(top, expected);
    }

    #[test]
    fn ext_zero_spec_examples() {
        let ctx = free2();
        let data = plain_data(&ctx, &["x", "y"]);
        let q = ArtinAlgebra::rational();
        let mfc = MixedFormContext::new(ctx.clone(), q.clone());
        // x dx∧dy is zero (x ∈ (x,y)); dx∧dy is not
        let mut num = AForm::zero(mfc.clone(), 2);
        num.add_term((vec![0, 1], 0), &ctx.parse("x").unwrap());
        let rep = ext_class_is_zero(&data, &num).unwrap();
        assert!(rep.zero);
        let gens = data.plain_powered().unwrap();
        let comp = &rep.components[0];
        assert!(verify_cofactors(&gens, comp.cofactors.as_ref().unwrap(), &ctx.parse("x").unwrap()));

        let mut num2 = AForm::zero(mfc, 2);
        num2.add_term((vec![0, 1], 0), &Poly::one(2));
        let rep2 = ext_class_is_zero(&data, &num2).unwrap();
        assert!(!rep2.zero);
        assert_eq!(rep2.components[0].normal_form.as_ref().unwrap(), &Poly::one(2));
    }

    #[test]
    fn ext_transition_consistency() {
        // y dx∧dy at level (1,1) vs its transition image at level (1,2)
        let ctx = free2();
        let data = plain_data(&ctx, &["x", "y"]);
        let q = ArtinAlgebra::rational();
        let mfc = MixedFormContext::new(ctx.clone(), q);
        let mut num = AForm::zero(mfc, 2);
        num.add_term((vec![0, 1], 0), &ctx.parse("y").unwrap());
        let before = ext_class_is_zero(&data, &num).unwrap();
        let (data2, num2) = ext_transition(&data, &num, &[1, 2]).unwrap();
        let after = ext_class_is_zero(&data2, &num2).unwrap();
        assert_eq!(before.zero, after.zero);
        assert!(before.zero);
    }
}
