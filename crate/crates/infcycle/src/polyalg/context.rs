use std::sync::Arc;

use thiserror::Error;

use super::groebner::{self, GroebnerBasis, Membership};
use super::monomial::{Monomial, MonomialOrder};
use super::parse::{parse_poly, ExprError};
use super::poly::Poly;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("not artinian: the quotient is infinite-dimensional (no pure power of '{var}' in the leading term ideal)")]
    NotArtinian { var: String },
    #[error("the relation ideal is the unit ideal")]
    UnitIdeal,
    #[error("not a local algebra: {reason}")]
    NotLocal { reason: String },
    #[error("variable name clash: '{0}'")]
    VariableClash(String),
    #[error("empty sequence")]
    EmptySequence,
    #[error("sequence longer than the number of variables ({len} > {nvars})")]
    SequenceTooLong { len: usize, nvars: usize },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// A polynomial ring over Q together with an ideal and its cached reduced
/// Groebner basis. Immutable once constructed, so it can be shared freely
/// across threads.
#[derive(Debug, Clone)]
pub struct PolyContext {
    vars: Vec<String>,
    order: MonomialOrder,
    relations: Vec<Poly>,
    gb: GroebnerBasis,
}

impl PolyContext {
    pub fn new(vars: Vec<String>, order: MonomialOrder, relations: Vec<Poly>) -> Arc<Self> {
        for r in &relations {
            assert_eq!(r.nvars(), vars.len(), "relation arity mismatch");
        }
        let gb = groebner::groebner(&relations, order);
        Arc::new(PolyContext { vars, order, relations, gb })
    }

    pub fn free(vars: Vec<String>) -> Arc<Self> {
        PolyContext::new(vars, MonomialOrder::DegRevLex, Vec::new())
    }

    pub fn free_named(names: &[&str]) -> Arc<Self> {
        PolyContext::free(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn groebner_basis(&self) -> &[Poly] {
        &self.gb.basis
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    /// Structural equivalence: same variables and the same reduced basis.
    pub fn same_as(&self, other: &PolyContext) -> bool {
        self.vars == other.vars && self.gb.basis == other.gb.basis
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        if self.relations.is_empty() {
            p.clone()
        } else {
            self.gb.normal_form(p)
        }
    }

    pub fn membership(&self, p: &Poly) -> Membership {
        self.gb.membership(p)
    }

    pub fn parse(&self, input: &str) -> Result<Poly, ExprError> {
        parse_poly(input, &self.vars)
    }

    pub fn poly_string(&self, p: &Poly) -> String {
        p.format(&self.vars)
    }

    /// Leading monomials of the relation ideal's reduced basis.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.gb.leading_monomials()
    }

    /// A monomial is standard when no leading monomial of the ideal divides
    /// it; the standard monomials form a basis of the quotient.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leading_monomials().iter().any(|lt| lt.divides(m))
    }

    /// All standard monomials, sorted by (degree, storage order), when there
    /// are finitely many.
    pub fn standard_monomials(&self) -> Result<Vec<Monomial>, PolyError> {
        if self.gb.is_unit_ideal() {
            return Err(PolyError::UnitIdeal);
        }
        let lts = self.leading_monomials();
        let n = self.nvars();
        // finiteness: some pure power of every variable must lead the ideal
        let mut bound = vec![0u32; n];
        for i in 0..n {
            let pure = lts.iter().find(|m| {
                m.0.iter().enumerate().all(|(j, &e)| (j == i) == (e > 0))
            });
            match pure {
                Some(m) => bound[i] = m.0[i],
                None => {
                    return Err(PolyError::NotArtinian { var: self.vars[i].clone() });
                }
            }
        }
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        loop {
            let m = Monomial(cur.clone());
            if !lts.iter().any(|lt| lt.divides(&m)) {
                out.push(m);
            }
            // odometer over the exponent box
            let mut i = 0;
            loop {
                if i == n {
                    out.sort_by_key(|m| (m.degree(), m.clone()));
                    return Ok(out);
                }
                if cur[i] + 1 < bound[i].max(1) {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// Dimensions of the graded slices of the quotient ring up to `max_deg`,
    /// counted on standard monomials (valid for homogeneous ideals).
    pub fn quotient_slice_dims(&self, max_deg: u32) -> Vec<usize> {
        let lts = self.leading_monomials();
        let mut dims = vec![0usize; max_deg as usize + 1];
        for m in monomials_up_to(self.nvars(), max_deg) {
            if !lts.iter().any(|lt| lt.divides(&m)) {
                dims[m.degree() as usize] += 1;
            }
        }
        dims
    }
}

/// Enumerates the monomials in `nvars` variables of total degree <= bound,
/// in (degree, storage) order.
pub fn monomials_up_to(nvars: usize, bound: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    fn rec(prefix: &mut Vec<u32>, remaining: u32, left: usize, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial(prefix.clone()));
            return;
        }
        for e in 0..=remaining {
            prefix.push(e);
            rec(prefix, remaining - e, left - 1, out);
            prefix.pop();
        }
    }
    let mut prefix = Vec::new();
    rec(&mut prefix, bound, nvars, &mut out);
    out.sort_by_key(|m| (m.degree(), m.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_monomials_of_fat_point() {
        let ctx = PolyContext::new(
            vec!["x".into(), "y".into()],
            MonomialOrder::DegRevLex,
            vec![
                parse_poly("x^2", &["x".into(), "y".into()]).unwrap(),
                parse_poly("x*y", &["x".into(), "y".into()]).unwrap(),
                parse_poly("y^2", &["x".into(), "y".into()]).unwrap(),
            ],
        );
        let sm = ctx.standard_monomials().unwrap();
        assert_eq!(sm.len(), 3);
        assert!(sm[0].is_one());
    }

    #[test]
    fn infinite_quotient_rejected() {
        let vars = vec!["x".into(), "y".into()];
        let ctx = PolyContext::new(
            vars.clone(),
            MonomialOrder::DegRevLex,
            vec![parse_poly("x^2", &vars).unwrap()],
        );
        assert!(matches!(ctx.standard_monomials(), Err(PolyError::NotArtinian { .. })));
    }

    #[test]
    fn monomial_enumeration_count() {
        // C(2+3,3) monomials of degree <= 2 in 3 vars is 10
        assert_eq!(monomials_up_to(3, 2).len(), 10);
    }
}
