use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::exactla::{Rat, RatMatrix};

use super::context::{PolyContext, PolyError};
use super::monomial::{Monomial, MonomialOrder};
use super::poly::Poly;

/// A finite-dimensional commutative Q-algebra presented as a polynomial
/// quotient, with a monomial basis, structure constants, the augmentation
/// "evaluate at the origin", and an optional grading by total degree.
///
/// The basis always starts with the monomial 1, and the maximal ideal
/// ker(augmentation) is spanned by the remaining basis monomials; the
/// constructor certifies that it is nilpotent.
#[derive(Debug)]
pub struct ArtinAlgebra {
    label: String,
    ctx: Arc<PolyContext>,
    basis: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    /// mult[i][j] = coordinates of basis[i] * basis[j].
    mult: Vec<Vec<Vec<(usize, Rat)>>>,
    grading: Option<Vec<u32>>,
}

pub type AlgElem = Vec<Rat>;

impl ArtinAlgebra {
    /// The ground field Q as an algebra (no variables).
    pub fn rational() -> Arc<Self> {
        quotient_algebra(&PolyContext::free(Vec::new())).expect("Q is artinian")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(self: Arc<Self>, label: &str) -> Arc<Self> {
        let mut a = ArtinAlgebra {
            label: label.to_string(),
            ctx: self.ctx.clone(),
            basis: self.basis.clone(),
            index: self.index.clone(),
            mult: self.mult.clone(),
            grading: self.grading.clone(),
        };
        a.label = label.to_string();
        Arc::new(a)
    }

    pub fn ctx(&self) -> &Arc<PolyContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn basis_name(&self, i: usize) -> String {
        self.basis[i].format(self.ctx.vars())
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 1
    }

    pub fn grading(&self) -> Option<&[u32]> {
        self.grading.as_deref()
    }

    pub fn is_graded(&self) -> bool {
        self.grading.is_some()
    }

    /// Structural equivalence: same presentation, hence same basis and
    /// structure constants.
    pub fn same_as(&self, other: &ArtinAlgebra) -> bool {
        self.ctx.same_as(&other.ctx)
    }

    /// Smallest N >= 1 with m^N = 0 for the maximal ideal m. The ground
    /// field has order 1; constructors certify N <= dim.
    pub fn nilpotency_order(&self) -> u32 {
        let dim = self.dim();
        if dim == 1 {
            return 1;
        }
        let mut power: Vec<AlgElem> = (1..dim).map(|i| self.basis_elem(i)).collect();
        let mut n = 1u32;
        loop {
            let mut next: Vec<AlgElem> = Vec::new();
            for i in 1..dim {
                for v in &power {
                    let w = self.mul_elems(&self.basis_elem(i), v);
                    if w.iter().any(|c| !c.is_zero()) {
                        next.push(w);
                    }
                }
            }
            n += 1;
            if next.is_empty() {
                return n;
            }
            power = next;
            assert!(n as usize <= dim, "constructor certified nilpotency");
        }
    }

    pub fn zero_elem(&self) -> AlgElem {
        vec![Rat::zero(); self.dim()]
    }

    pub fn one_elem(&self) -> AlgElem {
        let mut v = self.zero_elem();
        v[0] = Rat::one();
        v
    }

    pub fn basis_elem(&self, i: usize) -> AlgElem {
        let mut v = self.zero_elem();
        v[i] = Rat::one();
        v
    }

    /// Augmentation: the coefficient of the basis monomial 1.
    pub fn aug(&self, v: &AlgElem) -> Rat {
        v[0].clone()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, Rat)] {
        &self.mult[i][j]
    }

    pub fn mul_elems(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let mut out = self.zero_elem();
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let f = ca * cb;
                for (k, c) in &self.mult[i][j] {
                    out[*k] += c * &f;
                }
            }
        }
        out
    }

    /// Coordinates of a polynomial's normal form.
    pub fn elem_from_poly(&self, p: &Poly) -> AlgElem {
        let nf = self.ctx.normal_form(p);
        let mut v = self.zero_elem();
        for (m, c) in nf.terms() {
            let i = *self.index.get(m).expect("normal form not a standard monomial");
            v[i] = c.clone();
        }
        v
    }

    pub fn poly_from_elem(&self, v: &AlgElem) -> Poly {
        let mut p = Poly::zero(self.ctx.nvars());
        for (i, c) in v.iter().enumerate() {
            p.add_term(&self.basis[i], c);
        }
        p
    }

    pub fn elem_name(&self, v: &AlgElem) -> String {
        self.poly_from_elem(v).format(self.ctx.vars())
    }

    /// Matrix of multiplication by basis element i on the algebra.
    pub fn mult_matrix(&self, i: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.dim(), self.dim());
        for j in 0..self.dim() {
            for (k, c) in &self.mult[i][j] {
                m.set(*k, j, c.clone());
            }
        }
        m
    }

    /// Combined presentation of self ⊗ other over a merged variable list.
    pub fn tensor(&self, other: &ArtinAlgebra) -> Result<Arc<ArtinAlgebra>, PolyError> {
        let mut vars = self.ctx.vars().to_vec();
        for v in other.ctx.vars() {
            if vars.contains(v) {
                return Err(PolyError::VariableClash(v.clone()));
            }
            vars.push(v.clone());
        }
        let n = vars.len();
        let n1 = self.ctx.nvars();
        let embed_left = |p: &Poly| -> Poly {
            let mut out = Poly::zero(n);
            for (m, c) in p.terms() {
                let mut e = m.0.clone();
                e.resize(n, 0);
                out.add_term(&Monomial(e), c);
            }
            out
        };
        let embed_right = |p: &Poly| -> Poly {
            let mut out = Poly::zero(n);
            for (m, c) in p.terms() {
                let mut e = vec![0u32; n1];
                e.extend_from_slice(&m.0);
                out.add_term(&Monomial(e), c);
            }
            out
        };
        let mut relations: Vec<Poly> = self.ctx.relations().iter().map(embed_left).collect();
        relations.extend(other.ctx.relations().iter().map(embed_right));
        let ctx = PolyContext::new(vars, MonomialOrder::DegRevLex, relations);
        let t = quotient_algebra(&ctx)?;
        if t.dim() != self.dim() * other.dim() {
            return Err(PolyError::NotLocal {
                reason: format!(
                    "tensor dimension {} differs from {}*{}",
                    t.dim(),
                    self.dim(),
                    other.dim()
                ),
            });
        }
        Ok(t.with_label(&format!("{} (x) {}", self.label, other.label)))
    }
}

/// Builds the artinian quotient algebra of a zero-dimensional polynomial
/// context: basis = standard monomials, structure constants by normal-form
/// multiplication, grading attached when all relations are homogeneous.
pub fn quotient_algebra(ctx: &Arc<PolyContext>) -> Result<Arc<ArtinAlgebra>, PolyError> {
    let basis = ctx.standard_monomials()?;
    // augmentation at the origin must kill every relation
    for g in ctx.groebner_basis() {
        if !g.constant_term().is_zero() {
            return Err(PolyError::NotLocal {
                reason: format!("relation with nonzero constant term: {}", ctx.poly_string(g)),
            });
        }
    }
    let index: BTreeMap<Monomial, usize> =
        basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let dim = basis.len();
    let mut mult = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let prod = ctx.normal_form(&Poly::from_monomial(ctx.nvars(), basis[i].mul(&basis[j])));
            let mut row: Vec<(usize, Rat)> = Vec::new();
            for (m, c) in prod.terms() {
                let k = *index.get(m).expect("product normal form must be standard");
                row.push((k, c.clone()));
            }
            mult[i][j] = row;
        }
    }
    let grading = if ctx.relations().iter().all(|r| r.is_homogeneous()) {
        Some(basis.iter().map(|m| m.degree()).collect())
    } else {
        None
    };
    let label = if ctx.nvars() == 0 {
        "Q".to_string()
    } else {
        let rels: Vec<String> = ctx.relations().iter().map(|r| ctx.poly_string(r)).collect();
        format!("Q[{}]/({})", ctx.vars().join(","), rels.join(","))
    };
    let alg = ArtinAlgebra { label, ctx: ctx.clone(), basis, index, mult, grading };

    // commutativity and associativity on all basis triples
    for i in 0..dim {
        for j in 0..dim {
            let ij = alg.mul_elems(&alg.basis_elem(i), &alg.basis_elem(j));
            let ji = alg.mul_elems(&alg.basis_elem(j), &alg.basis_elem(i));
            if ij != ji {
                return Err(PolyError::NotLocal { reason: "multiplication not commutative".into() });
            }
            for k in 0..dim {
                let a = alg.mul_elems(&ij, &alg.basis_elem(k));
                let jk = alg.mul_elems(&alg.basis_elem(j), &alg.basis_elem(k));
                let b = alg.mul_elems(&alg.basis_elem(i), &jk);
                if a != b {
                    return Err(PolyError::NotLocal {
                        reason: "multiplication not associative".into(),
                    });
                }
            }
        }
    }

    // the maximal ideal (non-constant basis monomials) must be nilpotent
    let mut power: Vec<AlgElem> = (1..dim).map(|i| alg.basis_elem(i)).collect();
    let mut steps = 0usize;
    while !power.is_empty() {
        steps += 1;
        if steps > dim {
            return Err(PolyError::NotLocal {
                reason: "maximal ideal is not nilpotent".into(),
            });
        }
        let mut next: Vec<AlgElem> = Vec::new();
        for i in 1..dim {
            for v in &power {
                let w = alg.mul_elems(&alg.basis_elem(i), v);
                if w.iter().any(|c| !c.is_zero()) {
                    next.push(w);
                }
            }
        }
        // reduce to an independent spanning set to keep the iteration small
        if !next.is_empty() {
            let mat = RatMatrix::from_columns(dim, &next);
            let rref = mat.transpose().rref();
            next = (0..rref.pivots.len())
                .map(|r| (0..dim).map(|c| rref.matrix.get(r, c)).collect())
                .collect();
        }
        if next.len() == power.len()
            && next.iter().zip(&power).all(|(a, b)| a == b)
            && !next.is_empty()
        {
            return Err(PolyError::NotLocal { reason: "maximal ideal is not nilpotent".into() });
        }
        power = next;
    }

    Ok(Arc::new(alg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse::parse_poly;

    fn alg(vars: &[&str], rels: &[&str]) -> Arc<ArtinAlgebra> {
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels: Vec<Poly> = rels.iter().map(|r| parse_poly(r, &v).unwrap()).collect();
        quotient_algebra(&PolyContext::new(v, MonomialOrder::DegRevLex, rels)).unwrap()
    }

    #[test]
    fn dual_numbers() {
        let a = alg(&["eps"], &["eps^2"]);
        assert_eq!(a.dim(), 2);
        assert_eq!(a.basis_name(0), "1");
        assert_eq!(a.basis_name(1), "eps");
        assert_eq!(a.grading(), Some(&[0u32, 1][..]));
        let e = a.basis_elem(1);
        assert_eq!(a.mul_elems(&e, &e), a.zero_elem());
    }

    #[test]
    fn truncated_cubic() {
        let a = alg(&["x"], &["x^3"]);
        assert_eq!(a.dim(), 3);
        let x = a.basis_elem(1);
        let x2 = a.mul_elems(&x, &x);
        assert_eq!(x2, a.basis_elem(2));
        assert_eq!(a.mul_elems(&x2, &x), a.zero_elem());
    }

    #[test]
    fn fat_point_dimension() {
        let a = alg(&["x", "y"], &["x^2", "x*y", "y^2"]);
        assert_eq!(a.dim(), 3);
    }

    #[test]
    fn non_local_rejected() {
        let v: Vec<String> = vec!["x".into()];
        let rels = vec![parse_poly("x^2 - 1", &v).unwrap()];
        let ctx = PolyContext::new(v, MonomialOrder::DegRevLex, rels);
        assert!(matches!(quotient_algebra(&ctx), Err(PolyError::NotLocal { .. })));

        // x^2 = y, y^2 = x has finite basis but a non-nilpotent maximal ideal
        let v: Vec<String> = vec!["x".into(), "y".into()];
        let rels = vec![
            parse_poly("x^2 - y", &v).unwrap(),
            parse_poly("y^2 - x", &v).unwrap(),
        ];
        let ctx = PolyContext::new(v, MonomialOrder::DegRevLex, rels);
        assert!(matches!(quotient_algebra(&ctx), Err(PolyError::NotLocal { .. })));
    }

    #[test]
    fn tensor_of_quotients() {
        let r = alg(&["x"], &["x^2"]);
        let a = alg(&["eps"], &["eps^2"]);
        let s = r.tensor(&a).unwrap();
        assert_eq!(s.dim(), 4);
        assert!(s.is_graded());
    }

    #[test]
    fn rational_base_algebra() {
        let q = ArtinAlgebra::rational();
        assert_eq!(q.dim(), 1);
        assert!(q.is_graded());
    }
}
