use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::exactla::Rat;
use crate::polyalg::{APoly, AlgebraMorphism, ArtinAlgebra, Poly, PolyContext};

use super::finite::{combinations, insert_signed, merge_signed, omega_finite, FiniteFormSpace};

/// Form context for a smooth patch tensored with an artinian algebra:
/// Ω^p of Q[x_1..x_n] ⊗ A splits as a sum over a + b = p of free x-form
/// pieces with coefficients in the finite spaces Ω^b_A.
#[derive(Debug)]
pub struct MixedFormContext {
    patch: Arc<PolyContext>,
    algebra: Arc<ArtinAlgebra>,
    alg_spaces: Vec<FiniteFormSpace>,
}

impl MixedFormContext {
    pub fn new(patch: Arc<PolyContext>, algebra: Arc<ArtinAlgebra>) -> Arc<Self> {
        assert!(patch.is_free(), "mixed forms live over a free patch");
        let max_b = algebra.ctx().nvars();
        let alg_spaces = (0..=max_b).map(|b| omega_finite(&algebra, b)).collect();
        Arc::new(MixedFormContext { patch, algebra, alg_spaces })
    }

    pub fn patch(&self) -> &Arc<PolyContext> {
        &self.patch
    }

    pub fn algebra(&self) -> &Arc<ArtinAlgebra> {
        &self.algebra
    }

    pub fn alg_space(&self, b: usize) -> Option<&FiniteFormSpace> {
        self.alg_spaces.get(b)
    }

    /// Number of free-module basis columns of Ω^p over Q[x]: pairs of an
    /// x-wedge and a finite basis class.
    pub fn rank(&self, p: usize) -> usize {
        let n = self.patch.nvars();
        (0..=p)
            .map(|a| {
                let b = p - a;
                let alg_dim = self.alg_space(b).map_or(0, |s| s.dim());
                combinations(n, a).len() * alg_dim
            })
            .sum()
    }
}

type Key = (Vec<usize>, usize);

/// A p-form over patch ⊗ A: polynomial coefficients on keys
/// (x-wedge I, basis class of Ω^{p-|I|}_A). x-factors are written first, so
/// a key renders as e.g. `dx^dy^deps` with its polynomial coefficient.
#[derive(Debug, Clone)]
pub struct AForm {
    mfc: Arc<MixedFormContext>,
    degree: usize,
    comps: BTreeMap<Key, Poly>,
}

impl AForm {
    pub fn zero(mfc: Arc<MixedFormContext>, degree: usize) -> Self {
        AForm { mfc, degree, comps: BTreeMap::new() }
    }

    pub fn mfc(&self) -> &Arc<MixedFormContext> {
        &self.mfc
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn comps(&self) -> &BTreeMap<Key, Poly> {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add_term(&mut self, key: Key, p: &Poly) {
        if p.is_zero() {
            return;
        }
        debug_assert!(key.0.len() <= self.degree);
        let b = self.degree - key.0.len();
        debug_assert!(self.mfc.alg_space(b).map_or(false, |s| key.1 < s.dim()));
        let entry = self.comps.entry(key.clone()).or_insert_with(|| Poly::zero(p.nvars()));
        *entry = entry.add(p);
        if entry.is_zero() {
            self.comps.remove(&key);
        }
    }

    pub fn add(&self, other: &AForm) -> AForm {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (k, p) in &other.comps {
            out.add_term(k.clone(), p);
        }
        out
    }

    pub fn sub(&self, other: &AForm) -> AForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AForm {
        AForm {
            mfc: self.mfc.clone(),
            degree: self.degree,
            comps: self.comps.iter().map(|(k, p)| (k.clone(), p.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> AForm {
        if s.is_zero() {
            return AForm::zero(self.mfc.clone(), self.degree);
        }
        AForm {
            mfc: self.mfc.clone(),
            degree: self.degree,
            comps: self.comps.iter().map(|(k, p)| (k.clone(), p.scale(s))).collect(),
        }
    }

    pub fn mul_plain(&self, q: &Poly) -> AForm {
        let mut out = AForm::zero(self.mfc.clone(), self.degree);
        for (k, p) in &self.comps {
            out.add_term(k.clone(), &p.mul(q));
        }
        out
    }

    /// Multiplication by an element of patch ⊗ A: the algebra part acts on
    /// the finite form classes.
    pub fn mul_apoly(&self, f: &APoly) -> AForm {
        let mut out = AForm::zero(self.mfc.clone(), self.degree);
        for (alg_idx, poly) in f.comps().iter().enumerate() {
            if poly.is_zero() {
                continue;
            }
            let elem = self.mfc.algebra.basis_elem(alg_idx);
            for ((i, j), c) in &self.comps {
                let b = self.degree - i.len();
                let space = self.mfc.alg_space(b).unwrap();
                let mut coords = space.zero_coords();
                coords[*j] = Rat::one();
                let acted = space.act(&elem, &coords);
                for (j2, ac) in acted.into_iter().enumerate() {
                    if !ac.is_zero() {
                        out.add_term((i.clone(), j2), &c.mul(poly).scale(&ac));
                    }
                }
            }
        }
        out
    }

    pub fn wedge(&self, other: &AForm) -> AForm {
        let deg = self.degree + other.degree;
        let mut out = AForm::zero(self.mfc.clone(), deg);
        for ((i1, j1), p1) in &self.comps {
            let b1 = self.degree - i1.len();
            for ((i2, j2), p2) in &other.comps {
                let b2 = other.degree - i2.len();
                let Some((xsign, merged)) = merge_signed(i1, i2) else { continue };
                // move the finite part of the first factor past dx_{I2}
                let cross = if (b1 * i2.len()) % 2 == 0 { 1i32 } else { -1 };
                let s1 = self.mfc.alg_space(b1).unwrap();
                let s2 = self.mfc.alg_space(b2).unwrap();
                let Some(st) = self.mfc.alg_space(b1 + b2) else { continue };
                if st.dim() == 0 {
                    continue;
                }
                let mut c1 = s1.zero_coords();
                c1[*j1] = Rat::one();
                let mut c2 = s2.zero_coords();
                c2[*j2] = Rat::one();
                let prod = s1.wedge(&c1, s2, &c2, st);
                let scale = Rat::from_integer((xsign * cross).into());
                let pp = p1.mul(p2).scale(&scale);
                for (j3, c) in prod.into_iter().enumerate() {
                    if !c.is_zero() {
                        out.add_term((merged.clone(), j3), &pp.scale(&c));
                    }
                }
            }
        }
        out
    }

    /// de Rham differential: x-part on the polynomial coefficient plus the
    /// finite de Rham on the algebra part, with the Koszul sign.
    pub fn de_rham(&self) -> AForm {
        let mut out = AForm::zero(self.mfc.clone(), self.degree + 1);
        let n = self.mfc.patch.nvars();
        for ((i, j), p) in &self.comps {
            let b = self.degree - i.len();
            // d on the polynomial coefficient
            for t in 0..n {
                let dp = p.partial(t);
                if dp.is_zero() {
                    continue;
                }
                if let Some((sign, merged)) = insert_signed(t, i) {
                    out.add_term((merged, *j), &dp.scale(&Rat::from_integer(sign.into())));
                }
            }
            // d on the finite part, signed past dx_I
            if let (Some(src), Some(tgt)) = (self.mfc.alg_space(b), self.mfc.alg_space(b + 1)) {
                if tgt.dim() > 0 {
                    let dmat = src.de_rham_matrix(tgt);
                    let sgn = if i.len() % 2 == 0 { Rat::one() } else { -Rat::one() };
                    for ((r, c), v) in dmat.entries() {
                        if *c == *j {
                            out.add_term((i.clone(), *r), &p.scale(&(v * &sgn)));
                        }
                    }
                }
            }
        }
        out
    }

    /// Image under the augmentation to plain x-forms: keeps the b = 0
    /// components along the algebra's unit.
    pub fn augment(&self) -> BTreeMap<Vec<usize>, Poly> {
        let mut out = BTreeMap::new();
        for ((i, j), p) in &self.comps {
            if i.len() == self.degree && *j == 0 {
                // b = 0, class of the basis monomial 1
                out.insert(i.clone(), p.clone());
            }
        }
        out
    }

    /// Lies in the relative part (kernel of the augmentation)?
    pub fn is_relative(&self) -> bool {
        self.augment().values().all(|p| p.is_zero())
    }

    /// Pushes the algebra part through a morphism of artinian algebras.
    pub fn map_algebra(&self, phi: &AlgebraMorphism, target: &Arc<MixedFormContext>) -> AForm {
        assert!(phi.source().same_as(&self.mfc.algebra));
        assert!(phi.target().same_as(&target.algebra));
        let mut out = AForm::zero(target.clone(), self.degree);
        for ((i, j), p) in &self.comps {
            let b = self.degree - i.len();
            let src = self.mfc.alg_space(b).unwrap();
            let Some(tgt) = target.alg_space(b) else { continue };
            if tgt.dim() == 0 {
                continue;
            }
            let m = src.induced_map(phi, tgt);
            for r in 0..tgt.dim() {
                let c = m.get(r, *j);
                if !c.is_zero() {
                    out.add_term((i.clone(), r), &p.scale(&c));
                }
            }
        }
        out
    }

    pub fn component_name(&self, key: &Key) -> String {
        let (i, j) = key;
        let b = self.degree - i.len();
        let space = self.mfc.alg_space(b).unwrap();
        let (mono, mut dterms) = space.name_parts(*j);
        let xvars = self.mfc.patch.vars();
        let mut parts: Vec<String> = i.iter().map(|&t| format!("d{}", xvars[t])).collect();
        parts.append(&mut dterms);
        let wedge = parts.join("^");
        if wedge.is_empty() {
            mono
        } else if mono == "1" {
            wedge
        } else {
            format!("{}*{}", mono, wedge)
        }
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let xvars = self.mfc.patch.vars();
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(k, p)| {
                let coeff = p.format(xvars);
                let name = self.component_name(k);
                if coeff == "1" {
                    name
                } else if p.num_terms() == 1 && !coeff.starts_with('-') {
                    format!("{}*{}", coeff, name)
                } else {
                    format!("({})*{}", coeff, name)
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// d of an element of patch ⊗ A as a 1-form.
pub fn d_of_apoly(mfc: &Arc<MixedFormContext>, f: &APoly) -> AForm {
    let mut out = AForm::zero(mfc.clone(), 1);
    let n = mfc.patch.nvars();
    let s0 = mfc.alg_space(0).unwrap();
    let s1 = mfc.alg_space(1);
    let dmat = s1.filter(|s| s.dim() > 0).map(|s| s0.de_rham_matrix(s));
    for (k, p) in f.comps().iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        // x-part: the coefficient a_k rides along as a 0-form class
        for t in 0..n {
            let dp = p.partial(t);
            if !dp.is_zero() {
                out.add_term((vec![t], k), &dp);
            }
        }
        // algebra part: p * d(a_k)
        if let (Some(m), Some(s1)) = (&dmat, s1) {
            for r in 0..s1.dim() {
                let c = m.get(r, k);
                if !c.is_zero() {
                    out.add_term((Vec::new(), r), &p.scale(&c));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{quotient_algebra, MonomialOrder};

    fn dual_numbers() -> Arc<ArtinAlgebra> {
        let v: Vec<String> = vec!["eps".into()];
        quotient_algebra(&PolyContext::new(
            v.clone(),
            MonomialOrder::DegRevLex,
            vec![crate::polyalg::parse_poly("eps^2", &v).unwrap()],
        ))
        .unwrap()
    }

    fn mfc() -> Arc<MixedFormContext> {
        MixedFormContext::new(PolyContext::free_named(&["x", "y"]), dual_numbers())
    }

    #[test]
    fn d_squares_to_zero_on_mixed_forms() {
        let m = mfc();
        let a = m.algebra().clone();
        let f = APoly::from_parts(
            a.clone(),
            &m.patch().parse("x*y").unwrap(),
            &a.basis_elem(1),
        )
        .add(&APoly::from_poly(a.clone(), &m.patch().parse("x^2").unwrap()));
        let df = d_of_apoly(&m, &f);
        assert!(df.de_rham().is_zero());
    }

    #[test]
    fn leibniz_on_products() {
        let m = mfc();
        let a = m.algebra().clone();
        let x = APoly::from_poly(a.clone(), &m.patch().parse("x").unwrap());
        let eps = APoly::from_parts(a.clone(), &Poly::one(2), &a.basis_elem(1));
        let prod = x.mul(&eps);
        let lhs = d_of_apoly(&m, &prod);
        // d(x*eps) = eps dx + x deps
        let rhs = d_of_apoly(&m, &x).mul_apoly(&eps).add(&d_of_apoly(&m, &eps).mul_apoly(&x));
        let diff = lhs.sub(&rhs);
        assert!(diff.is_zero(), "difference: {}", diff.render());
    }

    #[test]
    fn newton_numerator_of_linear_deformation() {
        // d(x+eps) ∧ dy - dx ∧ dy = deps ∧ dy, with x-first storage -dy^deps
        let m = mfc();
        let a = m.algebra().clone();
        let x = APoly::from_poly(a.clone(), &m.patch().parse("x").unwrap());
        let y = APoly::from_poly(a.clone(), &m.patch().parse("y").unwrap());
        let eps = APoly::from_parts(a.clone(), &Poly::one(2), &a.basis_elem(1));
        let fa = x.add(&eps);
        let num = d_of_apoly(&m, &fa)
            .wedge(&d_of_apoly(&m, &y))
            .sub(&d_of_apoly(&m, &x).wedge(&d_of_apoly(&m, &y)));
        assert!(num.is_relative());
        assert_eq!(num.comps().len(), 1);
        let ((i, _), p) = num.comps().iter().next().unwrap();
        assert_eq!(i, &vec![1usize]); // the dy slot
        // deps ∧ dy = -dy ∧ deps
        assert_eq!(p, &Poly::constant(2, crate::exactla::rat_int(-1)));
        assert_eq!(num.render(), "(-1)*dy^deps");
    }

    #[test]
    fn wedge_is_graded_commutative() {
        let m = mfc();
        let a = m.algebra().clone();
        let x = APoly::from_poly(a.clone(), &m.patch().parse("x").unwrap());
        let eps = APoly::from_parts(a.clone(), &Poly::one(2), &a.basis_elem(1));
        let u = d_of_apoly(&m, &x.mul(&eps));
        let v = d_of_apoly(&m, &APoly::from_poly(a.clone(), &m.patch().parse("y^2").unwrap()));
        let uv = u.wedge(&v);
        let vu = v.wedge(&u);
        assert!(uv.sub(&vu.neg()).is_zero());
    }
}
