use std::sync::Arc;

use num_traits::Zero;

use crate::exactla::{quotient_reps, Rat, RatMatrix};
use crate::polyalg::{Monomial, Poly, RelativePair};

use super::finite::{insert_signed, omega_finite, FiniteFormSpace};

/// Ω^p_{S,I} = ker(Ω^p_S -> Ω^p_R) for a split pair S = R ⊗ A, with the
/// explicit kernel basis in the coordinates of the Ω^p_S quotient basis.
#[derive(Debug)]
pub struct RelativeFormGroup {
    pair: Arc<RelativePair>,
    degree: usize,
    s_space: FiniteFormSpace,
    r_space: FiniteFormSpace,
    kernel: Vec<Vec<Rat>>,
}

impl RelativeFormGroup {
    pub fn dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn s_space(&self) -> &FiniteFormSpace {
        &self.s_space
    }

    pub fn r_space(&self) -> &FiniteFormSpace {
        &self.r_space
    }

    pub fn kernel(&self) -> &[Vec<Rat>] {
        &self.kernel
    }

    pub fn pair(&self) -> &Arc<RelativePair> {
        &self.pair
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// Matrix of the induced map Ω^p_S -> Ω^p_R: kill differentials of the
/// A-variables and project coefficients along the augmentation of A.
pub fn projection_matrix(
    pair: &RelativePair,
    s_space: &FiniteFormSpace,
    r_space: &FiniteFormSpace,
) -> RatMatrix {
    let n_r = pair.r().ctx().nvars();
    let mut m = RatMatrix::zeros(r_space.dim(), s_space.dim());
    for i in 0..s_space.dim() {
        // ambient representative: (wedge K over S vars, S-basis monomial)
        let pos = s_space_rep(s_space, i);
        let (w, k) = s_space.ambient_parts(pos);
        let wedge = &s_space.wedges()[w];
        if wedge.iter().any(|&v| v >= n_r) {
            continue; // carries a dv of an A-variable
        }
        let (ri, ai) = pair.pair_of_s(k);
        if ai != 0 {
            continue; // coefficient dies under the augmentation
        }
        // land on the same wedge over R with coefficient monomial ri
        let rw = r_space.wedges().iter().position(|x| x == wedge).expect("wedge exists over R");
        let mut ambient = vec![Rat::zero(); r_space.ambient_dim()];
        ambient[rw * pair.r().dim() + ri] = num_traits::One::one();
        let col = r_space.reduce(ambient);
        for (r, c) in col.into_iter().enumerate() {
            if !c.is_zero() {
                m.set(r, i, c);
            }
        }
    }
    m
}

fn s_space_rep(space: &FiniteFormSpace, i: usize) -> usize {
    // free position of the i-th basis class
    space_free_position(space, i)
}

fn space_free_position(space: &FiniteFormSpace, i: usize) -> usize {
    // reconstruct from rep_ambient: the unit position
    let rep = space.rep_ambient(i);
    rep.iter().position(|c| !c.is_zero()).expect("unit representative")
}

/// Kernel of Ω^p_S -> Ω^p_R.
pub fn relative_forms(pair: &Arc<RelativePair>, p: usize) -> RelativeFormGroup {
    let s_space = omega_finite(pair.s(), p);
    let r_space = omega_finite(pair.r(), p);
    let m = projection_matrix(pair, &s_space, &r_space);
    let kernel = m.kernel_basis().basis().to_vec();
    RelativeFormGroup { pair: pair.clone(), degree: p, s_space, r_space, kernel }
}

/// The group Ω^1_{S,I} / dI with a representative basis; by the theorem it
/// computes K_2(S,I)_Q.
#[derive(Debug)]
pub struct BlochGroup {
    pub dim: usize,
    /// Representatives in Ω^1_S coordinates.
    pub reps: Vec<Vec<Rat>>,
    pub relative_dim: usize,
    pub di_dim: usize,
    pub forms: RelativeFormGroup,
}

impl BlochGroup {
    pub fn rep_names(&self) -> Vec<String> {
        self.reps.iter().map(|r| self.forms.s_space().render(r)).collect()
    }
}

pub fn bloch_group(pair: &Arc<RelativePair>) -> BlochGroup {
    let forms = relative_forms(pair, 1);
    let s = pair.s();
    let n = s.ctx().nvars();
    // dI: differentials of the I-basis monomials, reduced into Ω^1_S
    let mut di: Vec<Vec<Rat>> = Vec::new();
    for &si in pair.i_basis() {
        let mono: &Monomial = &s.basis()[si];
        let mut ambient = vec![Rat::zero(); forms.s_space.ambient_dim()];
        for j in 0..n {
            let e = mono.0[j];
            if e == 0 {
                continue;
            }
            let mut d = mono.clone();
            d.0[j] = e - 1;
            let coeff = Poly::from_monomial(n, d).scale(&Rat::from_integer(e.into()));
            // ambient slot: wedge {j}
            let (sign, merged) = insert_signed(j, &[]).unwrap();
            debug_assert_eq!(sign, 1);
            let w = forms
                .s_space
                .wedges()
                .iter()
                .position(|x| *x == merged)
                .expect("degree-1 wedge");
            let coords = s.elem_from_poly(&coeff);
            for (k, c) in coords.iter().enumerate() {
                if !c.is_zero() {
                    ambient[w * s.dim() + k] += c;
                }
            }
        }
        let v = forms.s_space.reduce(ambient);
        if v.iter().any(|c| !c.is_zero()) {
            di.push(v);
        }
    }
    // dI sits inside the relative kernel; quotient there
    let di_dim = if di.is_empty() {
        0
    } else {
        RatMatrix::from_columns(forms.s_space.dim(), &di).rank()
    };
    let reps = quotient_reps(&forms.kernel, &di);
    let dim = reps.len();
    debug_assert_eq!(dim + di_dim, forms.dim(), "dI must lie inside the relative forms");
    BlochGroup { dim, reps, relative_dim: forms.dim(), di_dim, forms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{quotient_algebra, tensor_pair, ArtinAlgebra, MonomialOrder, PolyContext};

    fn alg(vars: &[&str], rels: &[&str]) -> Arc<ArtinAlgebra> {
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels: Vec<Poly> =
            rels.iter().map(|r| crate::polyalg::parse_poly(r, &v).unwrap()).collect();
        quotient_algebra(&PolyContext::new(v, MonomialOrder::DegRevLex, rels)).unwrap()
    }

    fn dual() -> Arc<ArtinAlgebra> {
        alg(&["eps"], &["eps^2"])
    }

    #[test]
    fn relative_forms_spec_examples() {
        let q = ArtinAlgebra::rational();
        // R=Q: Ω^1_{S,I} = Ω^1_S = Q·deps
        let pair = tensor_pair(&q, &dual()).unwrap();
        let rel = relative_forms(&pair, 1);
        assert_eq!(rel.dim(), 1);

        // R=Q[x]/(x^2): kernel of the dim-4 -> dim-1 map has dim 3
        let r = alg(&["x"], &["x^2"]);
        let pair = tensor_pair(&r, &dual()).unwrap();
        let rel = relative_forms(&pair, 1);
        assert_eq!(rel.s_space().dim(), 4);
        assert_eq!(rel.r_space().dim(), 1);
        assert_eq!(rel.dim(), 3);

        // A=Q: kernel = 0
        let pair = tensor_pair(&r, &q).unwrap();
        assert_eq!(relative_forms(&pair, 1).dim(), 0);
    }

    #[test]
    fn split_exactness_of_forms() {
        // Ω^p_S ≅ Ω^p_{S,I} ⊕ Ω^p_R as Q-spaces
        let r = alg(&["x"], &["x^3"]);
        let pair = tensor_pair(&r, &dual()).unwrap();
        for p in 1..=2 {
            let rel = relative_forms(&pair, p);
            assert_eq!(
                rel.s_space().dim(),
                rel.dim() + rel.r_space().dim(),
                "split exactness fails in degree {}",
                p
            );
        }
    }

    #[test]
    fn bloch_group_spec_examples() {
        let q = ArtinAlgebra::rational();
        let pair = tensor_pair(&q, &dual()).unwrap();
        let b = bloch_group(&pair);
        assert_eq!(b.dim, 0);

        let r = alg(&["x"], &["x^2"]);
        let pair = tensor_pair(&r, &dual()).unwrap();
        let b = bloch_group(&pair);
        assert_eq!(b.dim, 1);
        assert_eq!(b.rep_names(), vec!["eps*dx".to_string()]);

        let r3 = alg(&["x"], &["x^3"]);
        let pair = tensor_pair(&r3, &dual()).unwrap();
        assert_eq!(bloch_group(&pair).dim, 2);
    }

    #[test]
    fn van_der_kallen_identity_over_catalog() {
        // dim Ω^1_{S,I}/dI = dim Ω^1_{R/Q} for A the dual numbers
        let catalog: Vec<Arc<ArtinAlgebra>> = vec![
            ArtinAlgebra::rational(),
            alg(&["x"], &["x^2"]),
            alg(&["x"], &["x^3"]),
            alg(&["x", "y"], &["x^2", "x*y", "y^2"]),
            alg(&["x"], &["x^4"]),
        ];
        for r in catalog {
            let pair = tensor_pair(&r, &dual()).unwrap();
            let b = bloch_group(&pair);
            let omega1_r = omega_finite(&r, 1).dim();
            assert_eq!(b.dim, omega1_r, "van der Kallen fails for R = {}", r.label());
        }
    }
}
