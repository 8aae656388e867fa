use std::sync::Arc;

use num_traits::Zero;

use crate::exactla::Rat;

use super::artin::{AlgElem, ArtinAlgebra};
use super::poly::Poly;

/// Polynomial with coefficients in an artinian algebra A: an element of
/// (Q[x_1..x_n]) ⊗ A, stored as one plain polynomial per A-basis element.
/// The trivial algebra recovers ordinary polynomials.
#[derive(Debug, Clone)]
pub struct APoly {
    algebra: Arc<ArtinAlgebra>,
    nvars: usize,
    comps: Vec<Poly>,
}

impl PartialEq for APoly {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.same_as(&other.algebra) && self.comps == other.comps
    }
}

impl APoly {
    pub fn zero(algebra: Arc<ArtinAlgebra>, nvars: usize) -> Self {
        let comps = vec![Poly::zero(nvars); algebra.dim()];
        APoly { algebra, nvars, comps }
    }

    pub fn from_poly(algebra: Arc<ArtinAlgebra>, p: &Poly) -> Self {
        let mut out = APoly::zero(algebra, p.nvars());
        out.comps[0] = p.clone();
        out
    }

    /// p ⊗ a for an algebra element a.
    pub fn from_parts(algebra: Arc<ArtinAlgebra>, p: &Poly, a: &AlgElem) -> Self {
        let mut out = APoly::zero(algebra, p.nvars());
        for (k, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out.comps[k] = p.scale(c);
            }
        }
        out
    }

    pub fn algebra(&self) -> &Arc<ArtinAlgebra> {
        &self.algebra
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn comp(&self, k: usize) -> &Poly {
        &self.comps[k]
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|p| p.is_zero())
    }

    /// True when the element lies in Q[x] ⊗ 1.
    pub fn is_plain(&self) -> bool {
        self.comps[1..].iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &APoly) -> APoly {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &APoly) -> APoly {
        self.zip(other, |a, b| a.sub(b))
    }

    fn zip(&self, other: &APoly, f: impl Fn(&Poly, &Poly) -> Poly) -> APoly {
        assert!(self.algebra.same_as(&other.algebra), "algebra mismatch");
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect();
        APoly { algebra: self.algebra.clone(), nvars: self.nvars, comps }
    }

    pub fn neg(&self) -> APoly {
        APoly {
            algebra: self.algebra.clone(),
            nvars: self.nvars,
            comps: self.comps.iter().map(|p| p.neg()).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> APoly {
        APoly {
            algebra: self.algebra.clone(),
            nvars: self.nvars,
            comps: self.comps.iter().map(|p| p.scale(s)).collect(),
        }
    }

    pub fn mul_plain(&self, p: &Poly) -> APoly {
        APoly {
            algebra: self.algebra.clone(),
            nvars: self.nvars,
            comps: self.comps.iter().map(|c| c.mul(p)).collect(),
        }
    }

    pub fn mul(&self, other: &APoly) -> APoly {
        assert!(self.algebra.same_as(&other.algebra), "algebra mismatch");
        let mut out = APoly::zero(self.algebra.clone(), self.nvars);
        for (i, pi) in self.comps.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            for (j, qj) in other.comps.iter().enumerate() {
                if qj.is_zero() {
                    continue;
                }
                let prod = pi.mul(qj);
                for (k, c) in self.algebra.mul_basis(i, j) {
                    out.comps[*k] = out.comps[*k].add(&prod.scale(c));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> APoly {
        let mut out = APoly::from_poly(self.algebra.clone(), &Poly::one(self.nvars));
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Image under the augmentation A -> Q.
    pub fn augment(&self) -> Poly {
        self.comps[0].clone()
    }

    pub fn partial(&self, i: usize) -> APoly {
        APoly {
            algebra: self.algebra.clone(),
            nvars: self.nvars,
            comps: self.comps.iter().map(|p| p.partial(i)).collect(),
        }
    }

    pub fn total_x_degree(&self) -> u32 {
        self.comps.iter().map(|p| p.total_degree()).max().unwrap_or(0)
    }

    pub fn format(&self, xvars: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, p) in self.comps.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let ps = p.format(xvars);
            if k == 0 {
                parts.push(ps);
            } else {
                let name = self.algebra.basis_name(k);
                if ps == "1" {
                    parts.push(name);
                } else if p.num_terms() == 1 && !ps.contains(' ') {
                    parts.push(format!("{}*{}", name, ps));
                } else {
                    parts.push(format!("{}*({})", name, ps));
                }
            }
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::artin::quotient_algebra;
    use crate::polyalg::context::PolyContext;
    use crate::polyalg::monomial::MonomialOrder;
    use crate::polyalg::parse::parse_poly;

    #[test]
    fn arithmetic_with_dual_numbers() {
        let v: Vec<String> = vec!["eps".into()];
        let a = quotient_algebra(&PolyContext::new(
            v.clone(),
            MonomialOrder::DegRevLex,
            vec![parse_poly("eps^2", &v).unwrap()],
        ))
        .unwrap();
        let xv: Vec<String> = vec!["x".into()];
        let x = APoly::from_poly(a.clone(), &parse_poly("x", &xv).unwrap());
        let eps = APoly::from_parts(a.clone(), &Poly::one(1), &a.basis_elem(1));
        // (x + eps)^2 = x^2 + 2x*eps
        let s = x.add(&eps);
        let sq = s.mul(&s);
        assert_eq!(sq.comp(0), &parse_poly("x^2", &xv).unwrap());
        assert_eq!(sq.comp(1), &parse_poly("2*x", &xv).unwrap());
        assert_eq!(sq.augment(), parse_poly("x^2", &xv).unwrap());
    }
}
