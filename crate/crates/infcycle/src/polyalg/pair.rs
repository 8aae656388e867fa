use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::artin::{AlgElem, ArtinAlgebra};
use super::context::PolyError;
use super::monomial::Monomial;
use super::poly::Poly;

/// The split pair S = R ⊗ A with projection id ⊗ aug, section r -> r ⊗ 1 and
/// relative ideal I = R ⊗ m_A. The S-basis is indexed by pairs of an R-basis
/// monomial and an A-basis monomial.
#[derive(Debug)]
pub struct RelativePair {
    s: Arc<ArtinAlgebra>,
    r: Arc<ArtinAlgebra>,
    a: Arc<ArtinAlgebra>,
    /// For each S-basis index, the (R-basis, A-basis) indices it factors into.
    pair_of_s: Vec<(usize, usize)>,
    s_of_pair: BTreeMap<(usize, usize), usize>,
    /// S-basis indices spanning I (those whose A-part is not 1).
    i_basis: Vec<usize>,
}

impl RelativePair {
    pub fn s(&self) -> &Arc<ArtinAlgebra> {
        &self.s
    }

    pub fn r(&self) -> &Arc<ArtinAlgebra> {
        &self.r
    }

    pub fn a(&self) -> &Arc<ArtinAlgebra> {
        &self.a
    }

    pub fn i_basis(&self) -> &[usize] {
        &self.i_basis
    }

    pub fn pair_of_s(&self, si: usize) -> (usize, usize) {
        self.pair_of_s[si]
    }

    /// projection S -> R on coordinates (kills every basis monomial with a
    /// nontrivial A-part).
    pub fn project(&self, v: &AlgElem) -> AlgElem {
        let mut out = self.r.zero_elem();
        for (si, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (ri, ai) = self.pair_of_s[si];
            if ai == 0 {
                out[ri] += c;
            }
        }
        out
    }

    /// section R -> S.
    pub fn section(&self, v: &AlgElem) -> AlgElem {
        let mut out = self.s.zero_elem();
        for (ri, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out[self.s_of_pair[&(ri, 0)]] = c.clone();
            }
        }
        out
    }

    /// Is the pair graded on both sides (A graded; R graded or trivial)?
    pub fn is_graded(&self) -> bool {
        self.a.is_graded() && self.r.is_graded()
    }

    pub fn label(&self) -> String {
        format!("(R={}, A={})", self.r.label(), self.a.label())
    }
}

/// S = R ⊗ A with the canonical split structure. Variable names of R and A
/// must be disjoint.
pub fn tensor_pair(
    r: &Arc<ArtinAlgebra>,
    a: &Arc<ArtinAlgebra>,
) -> Result<Arc<RelativePair>, PolyError> {
    let s = r.tensor(a)?;
    let n_r = r.ctx().nvars();
    let n_a = a.ctx().nvars();
    let mut pair_of_s = Vec::with_capacity(s.dim());
    let mut s_of_pair = BTreeMap::new();
    for (si, m) in s.basis().iter().enumerate() {
        let (er, ea) = m.0.split_at(n_r);
        let mr = Monomial(er.to_vec());
        let ma = Monomial(ea.to_vec());
        debug_assert_eq!(ea.len(), n_a);
        let ri = r.basis().iter().position(|b| *b == mr).expect("R basis factor");
        let ai = a.basis().iter().position(|b| *b == ma).expect("A basis factor");
        pair_of_s.push((ri, ai));
        s_of_pair.insert((ri, ai), si);
    }
    let i_basis: Vec<usize> =
        (0..s.dim()).filter(|&si| pair_of_s[si].1 != 0).collect();
    let pair = RelativePair { s, r: r.clone(), a: a.clone(), pair_of_s, s_of_pair, i_basis };

    // projection ∘ section = identity on R
    for ri in 0..r.dim() {
        let back = pair.project(&pair.section(&r.basis_elem(ri)));
        assert_eq!(back, r.basis_elem(ri), "projection/section mismatch");
    }
    Ok(Arc::new(pair))
}

/// A Q-algebra morphism between artinian algebras, given by images of the
/// source presentation variables. Constructor checks that relations map to
/// zero and that augmentations are respected.
#[derive(Debug)]
pub struct AlgebraMorphism {
    source: Arc<ArtinAlgebra>,
    target: Arc<ArtinAlgebra>,
    var_images: Vec<Poly>,
    /// basis_images[i] = coordinates in the target of the i-th source basis
    /// monomial's image.
    basis_images: Vec<AlgElem>,
    graded: bool,
}

impl AlgebraMorphism {
    pub fn new(
        source: Arc<ArtinAlgebra>,
        target: Arc<ArtinAlgebra>,
        var_images: Vec<Poly>,
    ) -> Result<Self, PolyError> {
        if var_images.len() != source.ctx().nvars() {
            return Err(PolyError::NotLocal {
                reason: format!(
                    "expected {} variable images, got {}",
                    source.ctx().nvars(),
                    var_images.len()
                ),
            });
        }
        let tn = target.ctx().nvars();
        // augmentation compatibility: variables of the source generate m, so
        // their images must lie in the target's maximal ideal
        for (i, img) in var_images.iter().enumerate() {
            let nf = target.ctx().normal_form(img);
            if !nf.constant_term().is_zero() {
                return Err(PolyError::NotLocal {
                    reason: format!(
                        "image of '{}' does not respect augmentations",
                        source.ctx().vars()[i]
                    ),
                });
            }
        }
        // relations must map to zero
        for rel in source.ctx().relations() {
            let image = rel.substitute(&var_images, tn);
            if !target.ctx().normal_form(&image).is_zero() {
                return Err(PolyError::NotLocal {
                    reason: format!(
                        "relation {} does not map to zero",
                        source.ctx().poly_string(rel)
                    ),
                });
            }
        }
        let basis_images: Vec<AlgElem> = source
            .basis()
            .iter()
            .map(|m| {
                let p = Poly::from_monomial(source.ctx().nvars(), m.clone());
                target.elem_from_poly(&p.substitute(&var_images, tn))
            })
            .collect();
        // graded when both sides are graded and images are weight-homogeneous
        let graded = match (source.grading(), target.grading()) {
            (Some(sw), Some(tw)) => {
                source.ctx().vars().iter().enumerate().all(|(i, _)| {
                    let w = sw
                        .iter()
                        .zip(source.basis())
                        .find(|(_, m)| **m == Monomial::var(source.ctx().nvars(), i))
                        .map(|(w, _)| *w);
                    let img = target.ctx().normal_form(&var_images[i]);
                    img.is_zero()
                        || w.map_or(false, |w| {
                            img.terms().all(|(m, _)| {
                                let vw: u32 = m
                                    .0
                                    .iter()
                                    .enumerate()
                                    .map(|(j, &e)| {
                                        e * tw
                                            .iter()
                                            .zip(target.basis())
                                            .find(|(_, bm)| {
                                                **bm == Monomial::var(target.ctx().nvars(), j)
                                            })
                                            .map(|(w, _)| *w)
                                            .unwrap_or(1)
                                    })
                                    .sum();
                                vw == w
                            })
                        })
                })
            }
            _ => false,
        };
        Ok(AlgebraMorphism { source, target, var_images, basis_images, graded })
    }

    pub fn identity(alg: &Arc<ArtinAlgebra>) -> Self {
        let vars: Vec<Poly> =
            (0..alg.ctx().nvars()).map(|i| Poly::var(alg.ctx().nvars(), i)).collect();
        AlgebraMorphism::new(alg.clone(), alg.clone(), vars).expect("identity is a morphism")
    }

    /// The augmentation source -> Q as a morphism.
    pub fn augmentation(alg: &Arc<ArtinAlgebra>) -> Self {
        let target = ArtinAlgebra::rational();
        let zeros: Vec<Poly> = (0..alg.ctx().nvars()).map(|_| Poly::zero(0)).collect();
        AlgebraMorphism::new(alg.clone(), target, zeros).expect("augmentation is a morphism")
    }

    pub fn source(&self) -> &Arc<ArtinAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ArtinAlgebra> {
        &self.target
    }

    pub fn var_images(&self) -> &[Poly] {
        &self.var_images
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn apply(&self, v: &AlgElem) -> AlgElem {
        let mut out = self.target.zero_elem();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, t) in self.basis_images[i].iter().enumerate() {
                if !t.is_zero() {
                    out[k] += t * c;
                }
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let imgs: Vec<String> = self
            .source
            .ctx()
            .vars()
            .iter()
            .zip(&self.var_images)
            .map(|(v, p)| format!("{} -> {}", v, p.format(self.target.ctx().vars())))
            .collect();
        format!("{{{}}}", imgs.join(", "))
    }
}

pub fn check_pair_dims(pair: &RelativePair) -> bool {
    pair.s().dim() == pair.r().dim() * pair.a().dim()
        && pair.i_basis().len() == pair.r().dim() * (pair.a().dim() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::artin::quotient_algebra;
    use crate::polyalg::context::PolyContext;
    use crate::polyalg::monomial::MonomialOrder;
    use crate::polyalg::parse::parse_poly;

    fn alg(vars: &[&str], rels: &[&str]) -> Arc<ArtinAlgebra> {
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels: Vec<Poly> = rels.iter().map(|r| parse_poly(r, &v).unwrap()).collect();
        quotient_algebra(&PolyContext::new(v, MonomialOrder::DegRevLex, rels)).unwrap()
    }

    #[test]
    fn pair_spec_examples() {
        let q = ArtinAlgebra::rational();
        let dual = alg(&["eps"], &["eps^2"]);
        let pair = tensor_pair(&q, &dual).unwrap();
        assert_eq!(pair.s().dim(), 2);
        assert_eq!(pair.i_basis().len(), 1);

        let r = alg(&["x"], &["x^2"]);
        let pair = tensor_pair(&r, &dual).unwrap();
        assert_eq!(pair.s().dim(), 4);
        assert_eq!(pair.i_basis().len(), 2);
        assert!(check_pair_dims(&pair));

        let trivial = tensor_pair(&q, &q).unwrap();
        assert_eq!(trivial.i_basis().len(), 0);
    }

    #[test]
    fn morphism_validation() {
        let c = alg(&["delta"], &["delta^3"]);
        let a = alg(&["eps"], &["eps^2"]);
        // delta -> eps works since eps^3 = 0
        let phi =
            AlgebraMorphism::new(c.clone(), a.clone(), vec![parse_poly("eps", &["eps".into()]).unwrap()])
                .unwrap();
        assert!(phi.is_graded());
        let d2 = c.elem_from_poly(&parse_poly("delta^2", &["delta".into()]).unwrap());
        let img = phi.apply(&d2);
        assert!(img.iter().all(|v| v.is_zero())); // eps^2 = 0

        // eps -> delta fails: delta^2 != 0
        assert!(AlgebraMorphism::new(
            a.clone(),
            c.clone(),
            vec![parse_poly("delta", &["delta".into()]).unwrap()]
        )
        .is_err());

        // constant-term images break augmentation compatibility
        assert!(AlgebraMorphism::new(
            c,
            a,
            vec![parse_poly("1 + eps", &["eps".into()]).unwrap()]
        )
        .is_err());
    }
}
