//! Multivariate polynomials over Q, ideals with Groebner bases, artinian
//! quotient algebras, tensor pairs S = R ⊗ A, and regular-sequence
//! certification.

mod apoly;
mod artin;
mod context;
mod groebner;
mod hilbert;
mod monomial;
mod parse;
mod pair;
mod poly;

pub use apoly::APoly;
pub use artin::{quotient_algebra, AlgElem, ArtinAlgebra};
pub use context::{monomials_up_to, PolyContext, PolyError};
pub use groebner::{div_rem, groebner, GroebnerBasis, Membership};
pub use hilbert::{hilbert_numerator, one_minus_t_pow, zpoly_mul};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_poly, ExprError};
pub use pair::{check_pair_dims, tensor_pair, AlgebraMorphism, RelativePair};
pub use poly::{format_rat, Poly};

use std::sync::Arc;

/// How a regularity verdict was certified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegularityMethod {
    /// Exact Hilbert-series comparison (homogeneous data only).
    HilbertSeries,
    /// Koszul homology vanishing checked through the given internal degree.
    TruncatedKoszul { bound: u32 },
}

#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub regular: bool,
    pub method: RegularityMethod,
}

impl RegularityReport {
    pub fn certified_bound(&self) -> Option<u32> {
        match self.method {
            RegularityMethod::HilbertSeries => None,
            RegularityMethod::TruncatedKoszul { bound } => Some(bound),
        }
    }
}

/// Default internal-degree bound for inhomogeneous certification:
/// 2 * (max degree) * (sequence length), floored at 8.
pub fn default_degree_bound(seq_degrees: impl Iterator<Item = u32>, len: usize) -> u32 {
    let maxdeg = seq_degrees.max().unwrap_or(1).max(1);
    (2 * maxdeg * len as u32).max(8)
}

fn validate_sequence(ctx: &PolyContext, seq: &[Poly]) -> Result<(), PolyError> {
    if seq.is_empty() {
        return Err(PolyError::EmptySequence);
    }
    if seq.len() > ctx.nvars() {
        return Err(PolyError::SequenceTooLong { len: seq.len(), nvars: ctx.nvars() });
    }
    Ok(())
}

/// Certifies whether (f_1, ..., f_p) is a regular sequence on the quotient
/// ring of `ctx`, in the Koszul sense: H_i vanishes for i >= 1.
///
/// Homogeneous data (relations and sequence) get the exact route: the
/// quotient by a regular sequence must have Hilbert series
/// H(S/I) * prod(1 - t^{d_i}), and any failure of exactness shows up as a
/// discrepancy. Inhomogeneous data fall back to Koszul homology through an
/// internal degree bound, reported in the method tag.
pub fn regularity_report(
    ctx: &Arc<PolyContext>,
    seq: &[Poly],
    bound: Option<u32>,
) -> Result<RegularityReport, PolyError> {
    validate_sequence(ctx, seq)?;
    if seq.iter().any(|f| f.is_zero()) {
        return Ok(RegularityReport { regular: false, method: RegularityMethod::HilbertSeries });
    }
    let homogeneous =
        seq.iter().all(|f| f.is_homogeneous()) && ctx.relations().iter().all(|r| r.is_homogeneous());
    if homogeneous {
        // constants of degree 0 are units; they never obstruct regularity
        let nontrivial: Vec<&Poly> = seq.iter().filter(|f| !f.is_constant()).collect();
        if nontrivial.len() < seq.len() {
            // a unit makes the quotient vanish; every later element is
            // trivially regular, and so were the earlier ones iff they were
            // regular on their own. Handle the common case: sequence with a
            // unit is regular precisely when the rest is.
            if nontrivial.is_empty() {
                return Ok(RegularityReport {
                    regular: true,
                    method: RegularityMethod::HilbertSeries,
                });
            }
        }
        let mut combined: Vec<Poly> = ctx.relations().to_vec();
        combined.extend(seq.iter().cloned());
        let gb_all = groebner(&combined, ctx.order());
        let n = ctx.nvars();
        if gb_all.is_unit_ideal() {
            // unit ideal from homogeneous positive-degree elements means a
            // degree-0 unit was present
            return Ok(RegularityReport {
                regular: seq.iter().any(|f| f.is_constant()),
                method: RegularityMethod::HilbertSeries,
            });
        }
        let numerator_quotient = hilbert_numerator(&gb_all.leading_monomials(), n);
        let mut expected = hilbert_numerator(&ctx.leading_monomials(), n);
        for f in seq {
            expected = zpoly_mul(&expected, &one_minus_t_pow(f.total_degree()));
        }
        Ok(RegularityReport {
            regular: numerator_quotient == expected,
            method: RegularityMethod::HilbertSeries,
        })
    } else {
        let b = bound
            .unwrap_or_else(|| default_degree_bound(seq.iter().map(|f| f.total_degree()), seq.len()));
        let q = ArtinAlgebra::rational();
        let aseq: Vec<APoly> = seq.iter().map(|f| APoly::from_poly(q.clone(), f)).collect();
        let regular = crate::complexes::koszul_positive_homology_vanishes(ctx, &aseq, b);
        Ok(RegularityReport { regular, method: RegularityMethod::TruncatedKoszul { bound: b } })
    }
}

pub fn is_regular_sequence(ctx: &Arc<PolyContext>, seq: &[Poly]) -> Result<bool, PolyError> {
    regularity_report(ctx, seq, None).map(|r| r.regular)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx2() -> Arc<PolyContext> {
        PolyContext::free_named(&["x", "y"])
    }

    fn p(ctx: &PolyContext, s: &str) -> Poly {
        ctx.parse(s).unwrap()
    }

    #[test]
    fn regularity_spec_examples() {
        let ctx = ctx2();
        assert!(is_regular_sequence(&ctx, &[p(&ctx, "x"), p(&ctx, "y")]).unwrap());
        assert!(!is_regular_sequence(&ctx, &[p(&ctx, "x"), p(&ctx, "x")]).unwrap());
        assert!(is_regular_sequence(&ctx, &[p(&ctx, "x*y"), p(&ctx, "x + y")]).unwrap());
    }

    #[test]
    fn regularity_validations() {
        let ctx = ctx2();
        assert!(matches!(
            is_regular_sequence(&ctx, &[]),
            Err(PolyError::EmptySequence)
        ));
        assert!(matches!(
            is_regular_sequence(&ctx, &[p(&ctx, "x"), p(&ctx, "y"), p(&ctx, "x + y")]),
            Err(PolyError::SequenceTooLong { .. })
        ));
        assert!(!is_regular_sequence(&ctx, &[Poly::zero(2)]).unwrap());
    }

    #[test]
    fn inhomogeneous_certification() {
        let ctx = ctx2();
        let rep = regularity_report(&ctx, &[p(&ctx, "x + y^2"), p(&ctx, "y + 1")], None).unwrap();
        assert!(rep.regular);
        assert!(matches!(rep.method, RegularityMethod::TruncatedKoszul { .. }));
        // x(1-x), y(1-x) drops rank on the hyperplane x = 1
        let rep = regularity_report(
            &ctx,
            &[p(&ctx, "x*(1 - x)"), p(&ctx, "y*(1 - x)")],
            None,
        )
        .unwrap();
        assert!(!rep.regular);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn normal_form_is_multiplicative(ax in -3i64..4, ay in -3i64..4, bx in -3i64..4, by in -3i64..4) {
            // in Q[x,y]/(x^2, y^2): nf(p*q) = nf(nf(p)*nf(q))
            let vars: Vec<String> = vec!["x".into(), "y".into()];
            let ctx = PolyContext::new(
                vars.clone(),
                MonomialOrder::DegRevLex,
                vec![parse_poly("x^2", &vars).unwrap(), parse_poly("y^2", &vars).unwrap()],
            );
            let p = parse_poly(&format!("({})*x + ({})*y + x*y", ax, ay), &vars).unwrap();
            let q = parse_poly(&format!("({})*x^2 + ({})*y + 1", bx, by), &vars).unwrap();
            let lhs = ctx.normal_form(&p.mul(&q));
            let rhs = ctx.normal_form(&ctx.normal_form(&p).mul(&ctx.normal_form(&q)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
