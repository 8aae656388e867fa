//! The deformation-of-cycles pipeline: subvariety germs given by regular
//! sequences, their infinitesimal deformations over artinian algebras, the
//! Koszul representative of a deformation, local fundamental classes,
//! Newton/Ext classes, the Cousin-boundary vanishing test deciding whether a
//! deformation is a Milnor K-theoretic cycle, and naturality of the induced
//! transformation.

use std::sync::Arc;

use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::complexes::{
    ext_class_is_zero, ext_class_is_zero_saturated, koszul, koszul_positive_homology_vanishes,
    ComplexError, ExtZeroReport, KoszulData, PolyComplex, PolyMatrix,
};
use crate::exactla::{Rat, RatMatrix};
use crate::kaehler::{d_of_apoly, AForm, MixedFormContext};
use crate::polyalg::{
    default_degree_bound, groebner, AlgebraMorphism, APoly, ArtinAlgebra, Poly, PolyContext,
    RegularityReport,
};

#[derive(Debug, Error)]
pub enum CycleError {
    #[error("sequence is not certified regular: {reason}")]
    NotRegular { reason: String },
    #[error("deformation entry {index} does not reduce to the base sequence under augmentation")]
    AugmentationMismatch { index: usize },
    #[error("denominator lies in the base ideal")]
    DenominatorInIdeal,
    #[error("deformation arity mismatch: base has {base}, got {got}")]
    ArityMismatch { base: usize, got: usize },
    #[error("extension element lies in the base ideal")]
    ExtensionInIdeal,
    #[error("extended sequence is not regular")]
    ExtensionNotRegular,
    #[error("morphism is not graded")]
    MorphismNotGraded,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Poly(#[from] crate::polyalg::PolyError),
}

/// A codimension-p germ: a certified regular sequence on a smooth patch.
#[derive(Debug, Clone)]
pub struct SubvarietyGerm {
    pub ctx: Arc<PolyContext>,
    pub sequence: Vec<Poly>,
    pub report: RegularityReport,
}

impl SubvarietyGerm {
    pub fn new(ctx: &Arc<PolyContext>, sequence: Vec<Poly>) -> Result<Self, CycleError> {
        if !ctx.is_free() {
            return Err(CycleError::Complex(ComplexError::NotFree));
        }
        let report = crate::polyalg::regularity_report(ctx, &sequence, None)?;
        if !report.regular {
            return Err(CycleError::NotRegular { reason: "base sequence".into() });
        }
        Ok(SubvarietyGerm { ctx: ctx.clone(), sequence, report })
    }

    pub fn codim(&self) -> usize {
        self.sequence.len()
    }
}

/// A polynomial (or denominator-cleared) element of fraction calculus:
/// num / g^pow with respect to one fixed denominator g.
#[derive(Debug, Clone)]
struct FracPoly {
    num: APoly,
    pow: u32,
}

impl FracPoly {
    fn plain(num: APoly) -> Self {
        FracPoly { num, pow: 0 }
    }

    fn mul(&self, other: &FracPoly) -> FracPoly {
        FracPoly { num: self.num.mul(&other.num), pow: self.pow + other.pow }
    }

    fn sub(&self, other: &FracPoly, g: &Poly) -> FracPoly {
        let pow = self.pow.max(other.pow);
        let a = self.num.mul_plain(&g.pow(pow - self.pow));
        let b = other.num.mul_plain(&g.pow(pow - other.pow));
        FracPoly { num: a.sub(&b), pow }
    }

    fn add(&self, other: &FracPoly, g: &Poly) -> FracPoly {
        let pow = self.pow.max(other.pow);
        let a = self.num.mul_plain(&g.pow(pow - self.pow));
        let b = other.num.mul_plain(&g.pow(pow - other.pow));
        FracPoly { num: a.add(&b), pow }
    }

    fn eq_cleared(&self, other: &FracPoly, g: &Poly) -> bool {
        self.sub(other, g).num.is_zero()
    }
}

#[derive(Debug, Clone)]
struct FracForm {
    num: AForm,
    pow: u32,
}

impl FracForm {
    fn wedge(&self, other: &FracForm) -> FracForm {
        FracForm { num: self.num.wedge(&other.num), pow: self.pow + other.pow }
    }

    fn sub(&self, other: &FracForm, g: &Poly) -> FracForm {
        let pow = self.pow.max(other.pow);
        let a = self.num.mul_plain(&g.pow(pow - self.pow));
        let b = other.num.mul_plain(&g.pow(pow - other.pow));
        FracForm { num: a.sub(&b), pow }
    }

    fn scale_frac(&self, c: &FracPoly) -> FracForm {
        FracForm { num: self.num.mul_apoly(&c.num), pow: self.pow + c.pow }
    }
}

/// d(num/g^pow) by the quotient rule, staying in cleared form.
fn frac_d(mfc: &Arc<MixedFormContext>, f: &FracPoly, g: &Poly) -> FracForm {
    if f.pow == 0 {
        return FracForm { num: d_of_apoly(mfc, &f.num), pow: 0 };
    }
    let dnum = d_of_apoly(mfc, &f.num).mul_plain(g);
    let dg = d_of_apoly(mfc, &APoly::from_poly(f.num.algebra().clone(), g));
    let correction = dg.mul_apoly(&f.num).scale(&Rat::from_integer((f.pow as i64).into()));
    FracForm { num: dnum.sub(&correction), pow: f.pow + 1 }
}

/// An element of Hilb(A) in generic form: a deformed regular sequence over
/// context ⊗ A, optionally defined off V(g). With a denominator, entry i is
/// the fraction deformed[i] / g^{den_powers[i]} and deformed holds the
/// cleared numerators.
#[derive(Debug)]
pub struct Deformation {
    pub base: SubvarietyGerm,
    pub algebra: Arc<ArtinAlgebra>,
    pub deformed: Vec<APoly>,
    pub denominator: Option<Poly>,
    pub den_powers: Vec<u32>,
    pub mfc: Arc<MixedFormContext>,
    pub report: RegularityReport,
}

impl Deformation {
    pub fn new(
        base: SubvarietyGerm,
        algebra: &Arc<ArtinAlgebra>,
        deformed: Vec<APoly>,
        denominator: Option<(Poly, Vec<u32>)>,
        bound: Option<u32>,
    ) -> Result<Self, CycleError> {
        let p = base.codim();
        if deformed.len() != p {
            return Err(CycleError::ArityMismatch { base: p, got: deformed.len() });
        }
        let (den, powers) = match denominator {
            Some((g, pw)) => {
                if pw.len() != p {
                    return Err(CycleError::ArityMismatch { base: p, got: pw.len() });
                }
                (Some(g), pw)
            }
            None => (None, vec![0; p]),
        };
        // augmentation must recover the base (times the clearing power)
        for (i, fa) in deformed.iter().enumerate() {
            let expected = match &den {
                Some(g) => g.pow(powers[i]).mul(&base.sequence[i]),
                None => base.sequence[i].clone(),
            };
            if fa.augment() != expected {
                return Err(CycleError::AugmentationMismatch { index: i });
            }
        }
        // the denominator must avoid the base ideal
        if let Some(g) = &den {
            let gb = groebner(&base.sequence, base.ctx.order());
            if gb.membership(g).member {
                return Err(CycleError::DenominatorInIdeal);
            }
        }
        // regularity of the cleared deformed sequence over context ⊗ A
        let b = bound.unwrap_or_else(|| {
            default_degree_bound(deformed.iter().map(|f| f.total_x_degree()), p)
        });
        let regular = koszul_positive_homology_vanishes(&base.ctx, &deformed, b);
        if !regular {
            return Err(CycleError::NotRegular { reason: "deformed sequence".into() });
        }
        let report = RegularityReport {
            regular,
            method: crate::polyalg::RegularityMethod::TruncatedKoszul { bound: b },
        };
        let mfc = MixedFormContext::new(base.ctx.clone(), algebra.clone());
        Ok(Deformation {
            base,
            algebra: algebra.clone(),
            deformed,
            denominator: den,
            den_powers: powers,
            mfc,
            report,
        })
    }

    pub fn trivial(base: SubvarietyGerm, algebra: &Arc<ArtinAlgebra>) -> Result<Self, CycleError> {
        let deformed: Vec<APoly> =
            base.sequence.iter().map(|f| APoly::from_poly(algebra.clone(), f)).collect();
        Deformation::new(base, algebra, deformed, None, None)
    }

    pub fn codim(&self) -> usize {
        self.base.codim()
    }

    fn denominator_or_one(&self) -> Poly {
        self.denominator.clone().unwrap_or_else(|| Poly::one(self.base.ctx.nvars()))
    }

    fn entry_fraction(&self, i: usize) -> FracPoly {
        FracPoly { num: self.deformed[i].clone(), pow: self.den_powers[i] }
    }
}

/// α_A: the Koszul complex of the deformed sequence, the K-theoretic
/// representative of the deformation.
pub fn alpha(def: &Deformation) -> Result<PolyComplex, CycleError> {
    let data = KoszulData::with_algebra(&def.base.ctx, &def.algebra, def.deformed.clone());
    Ok(koszul(&data)?)
}

/// The Ext-class of a deformation, presented by Koszul data on the base
/// sequence with a transported numerator.
///
/// `numerator` is the class representative at exponent level K (the
/// nilpotency order of m_A): the chain transport that makes the class
/// independent of the chosen presentation of the deformed subscheme.
/// `display_numerator` is the level-one difference of wedges
/// d f^A_1 ∧ ... ∧ d f^A_p − d f_1 ∧ ... ∧ d f_p used in reports.
#[derive(Debug)]
pub struct ExtClass {
    pub koszul: KoszulData,
    pub numerator: AForm,
    pub denominator: Option<Poly>,
    pub denominator_power: u32,
    pub display_numerator: AForm,
    pub display_power: u32,
}

impl ExtClass {
    /// Zero test with certificates; saturates by the denominator when one is
    /// present.
    pub fn is_zero(&self) -> Result<ExtZeroReport, ComplexError> {
        match &self.denominator {
            None => ext_class_is_zero(&self.koszul, &self.numerator),
            Some(g) => {
                let extra = 2 * self.denominator_power.max(1) + 2;
                ext_class_is_zero_saturated(&self.koszul, &self.numerator, g, extra)
            }
        }
    }
}

/// Newton class of a deformation: the relative local fundamental class
/// β̄^A = d f^A_1 ∧ ... ∧ d f^A_p − d f_1 ∧ ... ∧ d f_p, stored with the
/// level-K transport that makes the class well-defined on the Grothendieck
/// group.
pub fn newton_class(def: &Deformation) -> Result<ExtClass, CycleError> {
    let p = def.codim();
    let g = def.denominator_or_one();
    let k = def.algebra.nilpotency_order();
    let mfc = &def.mfc;

    // base forms and fractions
    let base_fracs: Vec<FracPoly> = def
        .base
        .sequence
        .iter()
        .map(|f| FracPoly::plain(APoly::from_poly(def.algebra.clone(), f)))
        .collect();
    let def_fracs: Vec<FracPoly> = (0..p).map(|i| def.entry_fraction(i)).collect();

    // transport cofactors c_i with c_i * f^A_i = f_i^K: the finite geometric
    // series sum_{j<K} (-nu_i)^j f_i^{K-1-j} for nu_i = f^A_i - f_i nilpotent
    let lifts: Vec<FracPoly> = (0..p)
        .map(|i| {
            let nu = def_fracs[i].sub(&base_fracs[i], &g);
            let mut nu_pow =
                FracPoly::plain(APoly::from_poly(def.algebra.clone(), &Poly::one(def.base.ctx.nvars())));
            let mut acc = FracPoly::plain(APoly::zero(def.algebra.clone(), def.base.ctx.nvars()));
            for j in 0..k {
                let f_pow = def.base.sequence[i].pow(k - 1 - j);
                let sign = if j % 2 == 0 { Rat::one() } else { -Rat::one() };
                let term =
                    FracPoly { num: nu_pow.num.mul_plain(&f_pow).scale(&sign), pow: nu_pow.pow };
                acc = acc.add(&term, &g);
                nu_pow = nu_pow.mul(&nu);
            }
            // sanity: c_i * f^A_i = f_i^K up to the denominator power
            let check = acc.mul(&def_fracs[i]);
            let target = FracPoly::plain(APoly::from_poly(
                def.algebra.clone(),
                &def.base.sequence[i].pow(k),
            ));
            debug_assert!(check.eq_cleared(&target, &g), "transport cofactor failed");
            acc
        })
        .collect();

    // wedge of the deformed differentials, as a fraction form
    let mut wedge_def: Option<FracForm> = None;
    for frac in &def_fracs {
        let d = frac_d(mfc, frac, &g);
        wedge_def = Some(match wedge_def {
            None => d,
            Some(w) => w.wedge(&d),
        });
    }
    let wedge_def = wedge_def.expect("nonempty sequence");
    let mut wedge_base: Option<AForm> = None;
    for f in &def.base.sequence {
        let d = d_of_apoly(mfc, &APoly::from_poly(def.algebra.clone(), f));
        wedge_base = Some(match wedge_base {
            None => d,
            Some(w) => w.wedge(&d),
        });
    }
    let wedge_base = wedge_base.expect("nonempty sequence");

    // display numerator: level-one difference
    let display = wedge_def.sub(&FracForm { num: wedge_base.clone(), pow: 0 }, &g);

    // transported numerator at level K
    let mut transported = wedge_def;
    for c in &lifts {
        transported = transported.scale_frac(c);
    }
    let base_scale: Poly = def
        .base
        .sequence
        .iter()
        .fold(Poly::one(def.base.ctx.nvars()), |acc, f| acc.mul(&f.pow(k - 1)));
    let base_t = FracForm { num: wedge_base.mul_plain(&base_scale), pow: 0 };
    let num = transported.sub(&base_t, &g);
    debug_assert!(num.num.is_relative(), "Newton numerator must be relative");

    let data = KoszulData {
        ctx: def.base.ctx.clone(),
        algebra: def.algebra.clone(),
        sequence: def
            .base
            .sequence
            .iter()
            .map(|f| APoly::from_poly(def.algebra.clone(), f))
            .collect(),
        exponents: vec![k; p],
    };
    Ok(ExtClass {
        koszul: data,
        numerator: num.num,
        denominator: if num.pow > 0 { def.denominator.clone() } else { None },
        denominator_power: num.pow,
        display_numerator: display.num,
        display_power: display.pow,
    })
}

// ---------------------------------------------------------------------------
// Local fundamental classes of complexes
// ---------------------------------------------------------------------------

/// Matrix with 1-form entries: the entrywise differential of a complex map.
pub type FormMatrix = Vec<Vec<AForm>>;

fn d_matrix(mfc: &Arc<MixedFormContext>, m: &PolyMatrix) -> FormMatrix {
    let mut out =
        vec![vec![AForm::zero(mfc.clone(), 1); m.cols]; m.rows];
    for (&(r, c), v) in &m.entries {
        out[r][c] = d_of_apoly(mfc, v);
    }
    out
}

fn form_matrix_mul(a: &FormMatrix, b: &FormMatrix, mfc: &Arc<MixedFormContext>) -> FormMatrix {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner > 0 { b[0].len() } else { 0 };
    let deg = if rows > 0 && inner > 0 && cols > 0 {
        a[0][0].degree() + b[0][0].degree()
    } else {
        0
    };
    let mut out = vec![vec![AForm::zero(mfc.clone(), deg.max(1)); cols]; rows];
    for i in 0..rows {
        for j in 0..cols {
            let mut acc = AForm::zero(mfc.clone(), deg.max(1));
            for (k, row_b) in b.iter().enumerate() {
                acc = acc.add(&a[i][k].wedge(&row_b[j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

/// The local fundamental class of a complex: for each window j the matrix of
/// p-forms (1/p!) dM_j ∘ dM_{j+1} ∘ ... ∘ dM_{j+p-1}, and for Koszul-type
/// complexes the top composite as a single p-form.
#[derive(Debug)]
pub struct FundamentalClass {
    pub windows: Vec<FormMatrix>,
    /// The top composite entry when the ends have rank one.
    pub top: Option<AForm>,
}

/// The fixed global sign: the top composite of a Koszul complex equals
/// sign(p) · df_1 ∧ ... ∧ df_p.
pub fn fundamental_sign(p: usize) -> i64 {
    if (p * (p - 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn local_fundamental_class(
    mfc: &Arc<MixedFormContext>,
    complex: &PolyComplex,
) -> FundamentalClass {
    let p = complex.top_degree();
    let dms: Vec<FormMatrix> =
        complex.diffs.iter().map(|m| d_matrix(mfc, m)).collect();
    // window j composes dM_j ... dM_{j+p-1}; with diffs[i]: degree i+1 -> i
    // there is exactly one full window for a length-p complex and more for
    // longer ones
    let mut windows = Vec::new();
    if dms.len() >= p && p >= 1 {
        for j in 0..=(dms.len() - p) {
            let mut acc = dms[j].clone();
            for t in 1..p {
                acc = form_matrix_mul(&acc, &dms[j + t], mfc);
            }
            let inv_fact = {
                let mut f = Rat::one();
                for t in 2..=p {
                    f = f * Rat::from_integer((t as i64).into());
                }
                Rat::one() / f
            };
            let scaled: FormMatrix = acc
                .into_iter()
                .map(|row| row.into_iter().map(|e| e.scale(&inv_fact)).collect())
                .collect();
            windows.push(scaled);
        }
    }
    let top = windows.first().and_then(|w| {
        if w.len() == 1 && w[0].len() == 1 {
            Some(w[0][0].clone())
        } else {
            None
        }
    });
    FundamentalClass { windows, top }
}

/// Conjugates a complex by constant invertible basis changes, one per
/// degree: M'_j = U_{j-1}^{-1} M_j U_j.
pub fn conjugate_complex(
    complex: &PolyComplex,
    us: &[RatMatrix],
) -> Result<PolyComplex, CycleError> {
    assert_eq!(us.len(), complex.ranks.len());
    let inverses: Vec<RatMatrix> = us
        .iter()
        .map(|u| u.inverse().ok_or(CycleError::NotRegular { reason: "singular basis change".into() }))
        .collect::<Result<_, _>>()?;
    let to_poly = |m: &RatMatrix| -> PolyMatrix {
        let mut out = PolyMatrix::zeros(m.rows(), m.cols());
        for (&(r, c), v) in m.entries() {
            out.set(
                r,
                c,
                APoly::from_poly(
                    complex.algebra.clone(),
                    &Poly::constant(complex.ctx.nvars(), v.clone()),
                ),
            );
        }
        out
    };
    let mut diffs = Vec::new();
    for (j, d) in complex.diffs.iter().enumerate() {
        // d: degree j+1 -> j
        let left = to_poly(&inverses[j]);
        let right = to_poly(&us[j + 1]);
        diffs.push(left.mul(d).mul(&right));
    }
    Ok(PolyComplex::new(
        complex.ctx.clone(),
        complex.algebra.clone(),
        complex.ranks.clone(),
        diffs,
    ))
}

/// Top fundamental-class value of a conjugated Koszul complex, transported
/// back through the end trivializations (scalars, since the end ranks are
/// one).
pub fn fundamental_top_transported(
    mfc: &Arc<MixedFormContext>,
    complex: &PolyComplex,
    u_bottom: &Rat,
    u_top: &Rat,
) -> Option<AForm> {
    let fc = local_fundamental_class(mfc, complex);
    fc.top.map(|t| t.scale(&(u_bottom / u_top)))
}

// ---------------------------------------------------------------------------
// Cousin boundary and the Milnor-cycle verdict
// ---------------------------------------------------------------------------

/// Extends the class one codimension deeper along g, following the proof's
/// clearing manipulation: with a matching denominator g^k the fraction
/// clears to the stored numerator; a polynomial class picks up one factor
/// of g.
pub fn cousin_boundary(cls: &ExtClass, g: &Poly) -> Result<(ExtClass, ExtZeroReport), CycleError> {
    let base: Vec<Poly> = cls
        .koszul
        .sequence
        .iter()
        .map(|f| f.augment())
        .collect();
    let ctx = &cls.koszul.ctx;
    // g must avoid the ideal and extend it to a regular sequence
    let gb = groebner(&base, ctx.order());
    if gb.membership(g).member {
        return Err(CycleError::ExtensionInIdeal);
    }
    let mut extended = base.clone();
    extended.push(g.clone());
    let ereport = crate::polyalg::regularity_report(ctx, &extended, None)?;
    if !ereport.regular {
        return Err(CycleError::ExtensionNotRegular);
    }

    let mut sequence = cls.koszul.sequence.clone();
    sequence.push(APoly::from_poly(cls.koszul.algebra.clone(), g));
    let mut exponents = cls.koszul.exponents.clone();

    let (numerator, leftover_den, leftover_pow) = match (&cls.denominator, cls.denominator_power) {
        (Some(h), k) if h == g && k > 0 => {
            // the fraction ω/g^k clears against the new denominator slot
            exponents.push(k.max(1));
            (cls.numerator.clone(), None, 0)
        }
        (den, k) => {
            // multiply by one factor of g (the f/f manipulation)
            exponents.push(1);
            (cls.numerator.mul_plain(g), den.clone(), k)
        }
    };
    let data = KoszulData {
        ctx: ctx.clone(),
        algebra: cls.koszul.algebra.clone(),
        sequence,
        exponents,
    };
    let out = ExtClass {
        koszul: data,
        numerator: numerator.clone(),
        denominator: leftover_den,
        denominator_power: leftover_pow,
        display_numerator: numerator,
        display_power: leftover_pow,
    };
    let report = out.is_zero()?;
    Ok((out, report))
}

/// Per-extension certificate of the obstruction test.
#[derive(Debug)]
pub struct BoundaryCertificate {
    pub element: Poly,
    pub vanishes: bool,
    pub report: ExtZeroReport,
}

#[derive(Debug)]
pub struct MilnorReport {
    pub is_cycle: bool,
    pub certificates: Vec<BoundaryCertificate>,
    pub class_report: ExtZeroReport,
}

/// Coordinate variables that extend the base sequence to a regular sequence:
/// the automatic sampling of deeper points.
pub fn default_extensions(def: &Deformation) -> Vec<Poly> {
    let ctx = &def.base.ctx;
    let gb = groebner(&def.base.sequence, ctx.order());
    let mut out = Vec::new();
    for i in 0..ctx.nvars() {
        let v = Poly::var(ctx.nvars(), i);
        if gb.membership(&v).member {
            continue;
        }
        let mut ext = def.base.sequence.clone();
        ext.push(v.clone());
        if ext.len() > ctx.nvars() {
            continue;
        }
        if let Ok(rep) = crate::polyalg::regularity_report(ctx, &ext, None) {
            if rep.regular {
                out.push(v);
            }
        }
    }
    out
}

/// Decides whether α_A of the deformation is a Milnor K-theoretic cycle:
/// every sampled Cousin boundary must vanish, with certificates either way.
/// Extension elements are the caller's plus the automatic coordinate set.
pub fn is_milnor_cycle(def: &Deformation, extensions: &[Poly]) -> Result<MilnorReport, CycleError> {
    let cls = newton_class(def)?;
    let class_report = cls.is_zero()?;
    let mut elements: Vec<Poly> = extensions.to_vec();
    for v in default_extensions(def) {
        if !elements.contains(&v) {
            elements.push(v);
        }
    }
    let certificates: Vec<Result<BoundaryCertificate, CycleError>> = elements
        .par_iter()
        .map(|g| {
            let (_, report) = cousin_boundary(&cls, g)?;
            Ok(BoundaryCertificate { element: g.clone(), vanishes: report.zero, report })
        })
        .collect();
    let mut certs = Vec::new();
    for c in certificates {
        certs.push(c?);
    }
    let is_cycle = certs.iter().all(|c| c.vanishes);
    Ok(MilnorReport { is_cycle, certificates: certs, class_report })
}

// ---------------------------------------------------------------------------
// Naturality and the tangent map
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct NaturalityReport {
    pub commutes: bool,
    pub difference_report: ExtZeroReport,
}

/// Pushes a deformation forward along a graded algebra morphism.
pub fn pushforward(def: &Deformation, phi: &AlgebraMorphism) -> Result<Deformation, CycleError> {
    let deformed: Vec<APoly> = def
        .deformed
        .iter()
        .map(|f| map_apoly_algebra(f, phi))
        .collect();
    Deformation::new(
        def.base.clone(),
        phi.target(),
        deformed,
        def.denominator.clone().map(|g| (g, def.den_powers.clone())),
        def.report.certified_bound(),
    )
}

fn map_apoly_algebra(f: &APoly, phi: &AlgebraMorphism) -> APoly {
    let mut out = APoly::zero(phi.target().clone(), f.nvars());
    for (k, p) in f.comps().iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let img = phi.apply(&phi.source().basis_elem(k));
        out = out.add(&APoly::from_parts(phi.target().clone(), p, &img));
    }
    out
}

/// Verifies that the Newton class of the pushed-forward deformation agrees
/// with the morphism image of the source's Newton class (the commuting
/// square on representatives). Requires a graded morphism.
pub fn naturality_check(
    phi: &AlgebraMorphism,
    def_c: &Deformation,
) -> Result<NaturalityReport, CycleError> {
    if !phi.is_graded() {
        return Err(CycleError::MorphismNotGraded);
    }
    let def_a = pushforward(def_c, phi)?;
    let cls_a = newton_class(&def_a)?;
    let cls_c = newton_class(def_c)?;

    // push the C-side numerator through phi, then align exponent levels
    let mapped = cls_c.numerator.map_algebra(phi, &def_a.mfc);
    let k_c = cls_c.koszul.exponents[0];
    let k_a = cls_a.koszul.exponents[0];
    let (level, a_num, c_num) = if k_a == k_c {
        (k_c, cls_a.numerator.clone(), mapped)
    } else if k_a < k_c {
        // raise the A-side to level K_C via the transition map
        let factor: Poly = def_c
            .base
            .sequence
            .iter()
            .fold(Poly::one(def_c.base.ctx.nvars()), |acc, f| acc.mul(&f.pow(k_c - k_a)));
        (k_c, cls_a.numerator.mul_plain(&factor), mapped)
    } else {
        let factor: Poly = def_c
            .base
            .sequence
            .iter()
            .fold(Poly::one(def_c.base.ctx.nvars()), |acc, f| acc.mul(&f.pow(k_a - k_c)));
        (k_a, cls_a.numerator.clone(), mapped.mul_plain(&factor))
    };
    // denominators must agree to compare directly
    let g = def_c.denominator.clone().unwrap_or_else(|| Poly::one(def_c.base.ctx.nvars()));
    let pow_a = cls_a.denominator_power;
    let pow_c = cls_c.denominator_power;
    let pow = pow_a.max(pow_c);
    let a_num = a_num.mul_plain(&g.pow(pow - pow_a));
    let c_num = c_num.mul_plain(&g.pow(pow - pow_c));
    let diff = a_num.sub(&c_num);

    let data = KoszulData {
        ctx: def_c.base.ctx.clone(),
        algebra: def_a.algebra.clone(),
        sequence: def_c
            .base
            .sequence
            .iter()
            .map(|f| APoly::from_poly(def_a.algebra.clone(), f))
            .collect(),
        exponents: vec![level; def_c.codim()],
    };
    let difference_report = if pow > 0 {
        ext_class_is_zero_saturated(&data, &diff, &g, 2 * pow + 2)?
    } else {
        ext_class_is_zero(&data, &diff)?
    };
    Ok(NaturalityReport { commutes: difference_report.zero, difference_report })
}

/// A fresh variable name not clashing with the patch variables.
fn fresh_var(ctx: &PolyContext, base: &str) -> String {
    let mut name = base.to_string();
    while ctx.vars().contains(&name) {
        name.insert(0, '_');
    }
    name
}

#[derive(Debug)]
pub struct TangentReport {
    pub class: ExtClass,
    pub report: ExtZeroReport,
    pub deformation: Deformation,
}

/// The first-order (dual numbers) tangent map: the Newton class of
/// f_i + ε g_i.
pub fn dual_numbers_tangent(
    base: &SubvarietyGerm,
    normals: &[Poly],
) -> Result<TangentReport, CycleError> {
    assert_eq!(normals.len(), base.codim(), "one normal datum per sequence entry");
    let var = fresh_var(&base.ctx, "eps");
    let vars = vec![var.clone()];
    let rel = crate::polyalg::parse_poly(&format!("{}^2", var), &vars).expect("epsilon relation");
    let actx = PolyContext::new(vars, crate::polyalg::MonomialOrder::DegRevLex, vec![rel]);
    let dual = crate::polyalg::quotient_algebra(&actx)?;
    let deformed: Vec<APoly> = base
        .sequence
        .iter()
        .zip(normals)
        .map(|(f, g)| {
            APoly::from_poly(dual.clone(), f).add(&APoly::from_parts(
                dual.clone(),
                g,
                &dual.basis_elem(1),
            ))
        })
        .collect();
    let def = Deformation::new(base.clone(), &dual, deformed, None, None)?;
    let class = newton_class(&def)?;
    let report = class.is_zero()?;
    Ok(TangentReport { class, report, deformation: def })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::quotient_algebra;
    use crate::polyalg::MonomialOrder;

    fn dual(var: &str) -> Arc<ArtinAlgebra> {
        let vars = vec![var.to_string()];
        let rel = crate::polyalg::parse_poly(&format!("{}^2", var), &vars).unwrap();
        quotient_algebra(&PolyContext::new(vars, MonomialOrder::DegRevLex, vec![rel])).unwrap()
    }

    fn trunc3(var: &str) -> Arc<ArtinAlgebra> {
        let vars = vec![var.to_string()];
        let rel = crate::polyalg::parse_poly(&format!("{}^3", var), &vars).unwrap();
        quotient_algebra(&PolyContext::new(vars, MonomialOrder::DegRevLex, vec![rel])).unwrap()
    }

    fn germ_xy() -> SubvarietyGerm {
        let ctx = PolyContext::free_named(&["x", "y", "z"]);
        SubvarietyGerm::new(&ctx, vec![ctx.parse("x").unwrap(), ctx.parse("y").unwrap()]).unwrap()
    }

    fn eps_shift_deformation() -> Deformation {
        // (x, y) -> (x + eps, y)
        let germ = germ_xy();
        let a = dual("eps");
        let f1 = APoly::from_poly(a.clone(), &germ.ctx.parse("x").unwrap()).add(&APoly::from_parts(
            a.clone(),
            &Poly::one(3),
            &a.basis_elem(1),
        ));
        let f2 = APoly::from_poly(a.clone(), &germ.ctx.parse("y").unwrap());
        Deformation::new(germ, &a, vec![f1, f2], None, None).unwrap()
    }

    #[test]
    fn alpha_gives_koszul_ranks() {
        let def = eps_shift_deformation();
        let c = alpha(&def).unwrap();
        assert_eq!(c.ranks, vec![1, 2, 1]);
    }

    #[test]
    fn trivial_deformation_class_is_zero() {
        for a in [dual("eps"), trunc3("delta")] {
            let germ = germ_xy();
            let def = Deformation::trivial(germ, &a).unwrap();
            let cls = newton_class(&def).unwrap();
            assert!(cls.display_numerator.is_zero());
            assert!(cls.is_zero().unwrap().zero);
        }
    }

    #[test]
    fn eps_shift_class_is_nonzero() {
        let def = eps_shift_deformation();
        let cls = newton_class(&def).unwrap();
        // display numerator is d(eps) ∧ dy
        assert_eq!(cls.display_power, 0);
        assert!(!cls.display_numerator.is_zero());
        let rep = cls.is_zero().unwrap();
        assert!(!rep.zero, "the shifted point is obstructed at the class level");
    }

    #[test]
    fn square_deformation_class_is_zero() {
        // (x + eps*y^2, y): numerator y^2 deps ∧ dy, zero by membership
        let germ = germ_xy();
        let a = dual("eps");
        let f1 = APoly::from_poly(a.clone(), &germ.ctx.parse("x").unwrap()).add(&APoly::from_parts(
            a.clone(),
            &germ.ctx.parse("y^2").unwrap(),
            &a.basis_elem(1),
        ));
        let f2 = APoly::from_poly(a.clone(), &germ.ctx.parse("y").unwrap());
        let def = Deformation::new(germ, &a, vec![f1, f2], None, None).unwrap();
        let cls = newton_class(&def).unwrap();
        assert!(cls.is_zero().unwrap().zero);
    }

    #[test]
    fn radial_presentation_gives_zero_class() {
        // (1+eps)x presents the trivial deformation of (x); the transported
        // class must vanish even though the naive level-one numerator does
        // not lie in (x)Ω
        let ctx = PolyContext::free_named(&["x"]);
        let germ = SubvarietyGerm::new(&ctx, vec![ctx.parse("x").unwrap()]).unwrap();
        let report = dual_numbers_tangent(&germ, &[ctx.parse("x").unwrap()]).unwrap();
        assert!(report.report.zero, "radial deformation must give the zero class");
        assert!(!report.class.display_numerator.is_zero());
    }

    #[test]
    fn tangent_spec_examples() {
        // p=1, f=x, g=1: numerator deps, nonzero
        let ctx = PolyContext::free_named(&["x"]);
        let germ = SubvarietyGerm::new(&ctx, vec![ctx.parse("x").unwrap()]).unwrap();
        let rep = dual_numbers_tangent(&germ, &[Poly::one(1)]).unwrap();
        assert!(!rep.report.zero);

        // p=2, f=(x,y), g=(y,0): numerator y deps ∧ dy, zero by membership
        let ctx = PolyContext::free_named(&["x", "y"]);
        let germ =
            SubvarietyGerm::new(&ctx, vec![ctx.parse("x").unwrap(), ctx.parse("y").unwrap()])
                .unwrap();
        let rep = dual_numbers_tangent(&germ, &[ctx.parse("y").unwrap(), Poly::zero(2)]).unwrap();
        assert!(rep.report.zero);
    }

    #[test]
    fn tangent_additivity() {
        // numerator of (g+g')-tangent = sum of numerators, at the level of
        // the stored representatives
        let ctx = PolyContext::free_named(&["x", "y"]);
        let germ =
            SubvarietyGerm::new(&ctx, vec![ctx.parse("x").unwrap(), ctx.parse("y").unwrap()])
                .unwrap();
        let g1 = vec![ctx.parse("y").unwrap(), ctx.parse("x").unwrap()];
        let g2 = vec![ctx.parse("x^2").unwrap(), Poly::zero(2)];
        let sum: Vec<Poly> = g1.iter().zip(&g2).map(|(a, b)| a.add(b)).collect();
        let t1 = dual_numbers_tangent(&germ, &g1).unwrap();
        let t2 = dual_numbers_tangent(&germ, &g2).unwrap();
        let ts = dual_numbers_tangent(&germ, &sum).unwrap();
        let lhs = ts.class.numerator.clone();
        let rhs = t1.class.numerator.add(&t2.class.numerator);
        // both tangents live at level K = 2 over the same base data
        assert!(lhs.sub(&rhs).is_zero(), "tangent numerators must be additive");
    }

    #[test]
    fn fundamental_class_signs() {
        // (1/p!) dM_1 ... dM_p = sign(p) df_1 ∧ ... ∧ df_p for p = 1, 2, 3
        let ctx = PolyContext::free_named(&["x", "y", "z"]);
        let q = ArtinAlgebra::rational();
        let mfc = MixedFormContext::new(ctx.clone(), q.clone());
        for p in 1..=3usize {
            let seq: Vec<Poly> = (0..p).map(|i| Poly::var(3, i)).collect();
            let data = KoszulData::plain(&ctx, &seq);
            let complex = koszul(&data).unwrap();
            let fc = local_fundamental_class(&mfc, &complex);
            let top = fc.top.expect("rank-one ends");
            let mut expected: Option<AForm> = None;
            for f in &seq {
                let d = d_of_apoly(&mfc, &APoly::from_poly(q.clone(), f));
                expected = Some(match expected {
                    None => d,
                    Some(w) => w.wedge(&d),
                });
            }
            let expected = expected
                .unwrap()
                .scale(&Rat::from_integer(fundamental_sign(p).into()));
            assert!(
                top.sub(&expected).is_zero(),
                "sign mismatch at p = {}: top = {}, expected = {}",
                p,
                top.render(),
                expected.render()
            );
        }
    }

    #[test]
    fn cousin_boundary_spec_examples() {
        // polynomial deformation: boundary along z vanishes with certificate
        let def = eps_shift_deformation();
        let cls = newton_class(&def).unwrap();
        let g = def.base.ctx.parse("z").unwrap();
        let (gamma, report) = cousin_boundary(&cls, &g).unwrap();
        assert!(report.zero);
        assert_eq!(gamma.koszul.exponents.len(), 3);

        // trivial class: boundary zero
        let tdef = Deformation::trivial(germ_xy(), &dual("eps")).unwrap();
        let tcls = newton_class(&tdef).unwrap();
        let (_, treport) = cousin_boundary(&tcls, &g).unwrap();
        assert!(treport.zero);
    }

    #[test]
    fn denominator_deformation_is_obstructed() {
        // (x + eps/z, y): cleared entry (x z + eps)/z; the boundary at the
        // (x,y,z)-point carries a nonzero certificate
        let germ = germ_xy();
        let ctx = germ.ctx.clone();
        let a = dual("eps");
        let f1 = APoly::from_poly(a.clone(), &ctx.parse("x*z").unwrap()).add(&APoly::from_parts(
            a.clone(),
            &Poly::one(3),
            &a.basis_elem(1),
        ));
        let f2 = APoly::from_poly(a.clone(), &ctx.parse("y").unwrap());
        let g = ctx.parse("z").unwrap();
        let def =
            Deformation::new(germ, &a, vec![f1, f2], Some((g.clone(), vec![1, 0])), None).unwrap();
        let cls = newton_class(&def).unwrap();
        assert!(cls.denominator_power > 0);
        let (_, report) = cousin_boundary(&cls, &g).unwrap();
        assert!(!report.zero, "the denominator deformation must be obstructed");
        // certificates carry nonzero normal forms
        assert!(report
            .components
            .iter()
            .any(|c| !c.member && c.normal_form.is_some()));
    }

    #[test]
    fn milnor_cycle_verdicts() {
        // graded polynomial deformation: cycle
        let def = eps_shift_deformation();
        let rep = is_milnor_cycle(&def, &[]).unwrap();
        assert!(rep.is_cycle);
        assert!(!rep.certificates.is_empty());

        // trivial deformation over Q: cycle trivially
        let q = ArtinAlgebra::rational();
        let tdef = Deformation::trivial(germ_xy(), &q).unwrap();
        let trep = is_milnor_cycle(&tdef, &[]).unwrap();
        assert!(trep.is_cycle);
        assert!(trep.class_report.zero);
    }

    #[test]
    fn basis_change_invariance() {
        let def = eps_shift_deformation();
        let complex = alpha(&def).unwrap();
        let mfc = def.mfc.clone();
        let direct = local_fundamental_class(&mfc, &complex).top.unwrap();
        // a nontrivial constant conjugation with transported end scalars
        let us = vec![
            RatMatrix::from_rows(vec![vec![Rat::from_integer(3.into())]]),
            RatMatrix::from_rows(vec![
                vec![Rat::from_integer(1.into()), Rat::from_integer(2.into())],
                vec![Rat::from_integer(1.into()), Rat::from_integer(3.into())],
            ]),
            RatMatrix::from_rows(vec![vec![Rat::from_integer(5.into())]]),
        ];
        let conj = conjugate_complex(&complex, &us).unwrap();
        let transported = fundamental_top_transported(
            &mfc,
            &conj,
            &Rat::from_integer(3.into()),
            &Rat::from_integer(5.into()),
        )
        .unwrap();
        let diff = transported.sub(&direct);
        // the difference class must vanish (here it is exactly zero)
        let rep = ext_class_is_zero(
            &KoszulData::plain(
                &def.base.ctx,
                &def.base.sequence,
            ),
            &diff,
        )
        .unwrap();
        assert!(rep.zero);
    }

    #[test]
    fn naturality_square_commutes() {
        // delta -> eps pushes (x + delta, y) to (x + eps, y)
        let germ = germ_xy();
        let c = trunc3("delta");
        let a = dual("eps");
        let f1 = APoly::from_poly(c.clone(), &germ.ctx.parse("x").unwrap()).add(&APoly::from_parts(
            c.clone(),
            &Poly::one(3),
            &c.basis_elem(1),
        ));
        let f2 = APoly::from_poly(c.clone(), &germ.ctx.parse("y").unwrap());
        let def_c = Deformation::new(germ, &c, vec![f1, f2], None, None).unwrap();
        let phi = AlgebraMorphism::new(
            c.clone(),
            a.clone(),
            vec![crate::polyalg::parse_poly("eps", &["eps".into()]).unwrap()],
        )
        .unwrap();
        let rep = naturality_check(&phi, &def_c).unwrap();
        assert!(rep.commutes);

        // identity morphism commutes trivially
        let id = AlgebraMorphism::identity(&c);
        assert!(naturality_check(&id, &def_c).unwrap().commutes);

        // augmentation to Q sends the class to zero
        let aug = AlgebraMorphism::augmentation(&c);
        assert!(naturality_check(&aug, &def_c).unwrap().commutes);
    }
}
