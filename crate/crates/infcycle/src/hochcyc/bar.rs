use std::sync::Arc;

use thiserror::Error;

use crate::exactla::{Rat, RatMatrix};
use crate::polyalg::ArtinAlgebra;

#[derive(Debug, Error)]
pub enum HochError {
    #[error("bar budget exceeded: dim(A)^(n_max+1) = {required} > {budget}")]
    BudgetExceeded { required: usize, budget: usize },
    #[error("degree {n} requires bar depth at least {required} (built with {available})")]
    TruncationInsufficient { n: usize, required: usize, available: usize },
    #[error("eulerian idempotents limited to n <= {max}, got {n}")]
    IdempotentRange { n: usize, max: usize },
    #[error("requires a graded artinian algebra")]
    NotGraded,
    #[error("Bloch/Goodwillie disagreement: dim K_2(S,I) pipelines give {bloch} vs {goodwillie}")]
    BlochGoodwillie { bloch: usize, goodwillie: usize },
}

pub const DEFAULT_BAR_BUDGET: usize = 20_000;

/// Index helper for tuples (i_0; i_1..i_n) with i_0 < d and 1 <= i_k < d.
#[derive(Debug, Clone)]
pub struct TupleSpace {
    pub d: usize,
    pub n: usize,
    pub dim: usize,
}

impl TupleSpace {
    pub fn new(d: usize, n: usize) -> Self {
        let dim = d * (d - 1).pow(n as u32);
        TupleSpace { d, n, dim }
    }

    pub fn index(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.n + 1);
        let mut idx = tuple[0];
        for &t in &tuple[1..] {
            debug_assert!(t >= 1 && t < self.d);
            idx = idx * (self.d - 1) + (t - 1);
        }
        idx
    }

    pub fn tuple(&self, mut idx: usize) -> Vec<usize> {
        let mut rev = Vec::with_capacity(self.n + 1);
        for _ in 0..self.n {
            rev.push(idx % (self.d - 1) + 1);
            idx /= self.d - 1;
        }
        rev.push(idx);
        rev.reverse();
        rev
    }
}

/// The normalized bar complex of an artinian algebra through a fixed depth:
/// modules A ⊗ Ā^{⊗n} with Ā spanned by the non-unit basis monomials, the
/// Hochschild boundary, and the Connes operator.
#[derive(Debug)]
pub struct NormalizedBar {
    pub algebra: Arc<ArtinAlgebra>,
    pub n_max: usize,
    pub spaces: Vec<TupleSpace>,
    /// b[k]: degree k+1 -> degree k, for k in 0..n_max.
    pub b: Vec<RatMatrix>,
    /// bb[k]: Connes operator degree k -> k+1, for k in 0..n_max.
    pub bb: Vec<RatMatrix>,
}

impl NormalizedBar {
    pub fn dim(&self, n: usize) -> usize {
        self.spaces[n].dim
    }

    pub fn b_from(&self, n: usize) -> &RatMatrix {
        &self.b[n - 1]
    }

    pub fn b_into(&self, n: usize) -> Option<&RatMatrix> {
        self.b.get(n)
    }

    pub fn connes_from(&self, n: usize) -> &RatMatrix {
        &self.bb[n]
    }
}

pub fn normalized_bar(
    algebra: &Arc<ArtinAlgebra>,
    n_max: usize,
    budget: usize,
) -> Result<NormalizedBar, HochError> {
    let d = algebra.dim();
    let required = d.checked_pow(n_max as u32 + 1).unwrap_or(usize::MAX);
    if required > budget {
        return Err(HochError::BudgetExceeded { required, budget });
    }
    let spaces: Vec<TupleSpace> = (0..=n_max).map(|n| TupleSpace::new(d, n)).collect();
    let mut b = Vec::new();
    for n in 1..=n_max {
        b.push(normalized_boundary(algebra, &spaces[n], &spaces[n - 1]));
    }
    let mut bb = Vec::new();
    for n in 0..n_max {
        bb.push(normalized_connes(algebra, &spaces[n], &spaces[n + 1]));
    }
    Ok(NormalizedBar { algebra: algebra.clone(), n_max, spaces, b, bb })
}

fn normalized_boundary(
    algebra: &ArtinAlgebra,
    src: &TupleSpace,
    dst: &TupleSpace,
) -> RatMatrix {
    let n = src.n;
    let mut m = RatMatrix::zeros(dst.dim, src.dim);
    for col in 0..src.dim {
        let t = src.tuple(col);
        // face 0: multiply slots 0 and 1 (result may be any basis element)
        {
            let prod = algebra.mul_basis(t[0], t[1]);
            for (k, c) in prod {
                let mut out = Vec::with_capacity(n);
                out.push(*k);
                out.extend_from_slice(&t[2..]);
                m.add_to(dst.index(&out), col, c);
            }
        }
        // middle faces: multiply slots j and j+1, dropping unit components
        for j in 1..n {
            let sign = if j % 2 == 0 { Rat::from_integer(1.into()) } else { -Rat::from_integer(1.into()) };
            let prod = algebra.mul_basis(t[j], t[j + 1]);
            for (k, c) in prod {
                if *k == 0 {
                    continue;
                }
                let mut out = Vec::with_capacity(n);
                out.extend_from_slice(&t[..j]);
                out.push(*k);
                out.extend_from_slice(&t[j + 2..]);
                m.add_to(dst.index(&out), col, &(c * &sign));
            }
        }
        // cyclic face: multiply last into slot 0
        {
            let sign = if n % 2 == 0 { Rat::from_integer(1.into()) } else { -Rat::from_integer(1.into()) };
            let prod = algebra.mul_basis(t[n], t[0]);
            for (k, c) in prod {
                let mut out = Vec::with_capacity(n);
                out.push(*k);
                out.extend_from_slice(&t[1..n]);
                m.add_to(dst.index(&out), col, &(c * &sign));
            }
        }
    }
    m
}

/// Connes operator on the normalized complex:
/// B(a_0 ⊗ ... ⊗ a_n) = Σ_i (−1)^{in} 1 ⊗ a_i ⊗ ... ⊗ a_n ⊗ a_0 ⊗ ... ⊗ a_{i−1},
/// which vanishes whenever a_0 = 1 lands in a middle slot.
fn normalized_connes(algebra: &ArtinAlgebra, src: &TupleSpace, dst: &TupleSpace) -> RatMatrix {
    let n = src.n;
    let _ = algebra;
    let mut m = RatMatrix::zeros(dst.dim, src.dim);
    for col in 0..src.dim {
        let t = src.tuple(col);
        if t[0] == 0 {
            continue; // a_0 = 1 dies in every middle slot
        }
        for i in 0..=n {
            let sign = if (i * n) % 2 == 0 {
                Rat::from_integer(1.into())
            } else {
                -Rat::from_integer(1.into())
            };
            let mut out = Vec::with_capacity(n + 2);
            out.push(0usize);
            out.extend_from_slice(&t[i..]);
            out.extend_from_slice(&t[..i]);
            m.add_to(dst.index(&out), col, &sign);
        }
    }
    m
}

/// The raw (unnormalized) bar complex with modules A^{⊗(n+1)}; kept for the
/// defining-identity tests. B = (1 - t) s N.
#[derive(Debug)]
pub struct RawBar {
    pub algebra: Arc<ArtinAlgebra>,
    pub n_max: usize,
    pub dims: Vec<usize>,
    pub b: Vec<RatMatrix>,
    pub bb: Vec<RatMatrix>,
}

pub fn raw_bar(algebra: &Arc<ArtinAlgebra>, n_max: usize, budget: usize) -> Result<RawBar, HochError> {
    let d = algebra.dim();
    let required = d.checked_pow(n_max as u32 + 1).unwrap_or(usize::MAX);
    if required > budget {
        return Err(HochError::BudgetExceeded { required, budget });
    }
    let dims: Vec<usize> = (0..=n_max).map(|n| d.pow(n as u32 + 1)).collect();
    let index = |t: &[usize]| -> usize {
        let mut idx = 0usize;
        for &x in t {
            idx = idx * d + x;
        }
        idx
    };
    let tuple = |mut idx: usize, n: usize| -> Vec<usize> {
        let mut rev = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            rev.push(idx % d);
            idx /= d;
        }
        rev.reverse();
        rev
    };
    let mut b = Vec::new();
    for n in 1..=n_max {
        let mut m = RatMatrix::zeros(dims[n - 1], dims[n]);
        for col in 0..dims[n] {
            let t = tuple(col, n);
            for j in 0..n {
                let sign = if j % 2 == 0 {
                    Rat::from_integer(1.into())
                } else {
                    -Rat::from_integer(1.into())
                };
                for (k, c) in algebra.mul_basis(t[j], t[j + 1]) {
                    let mut out = Vec::with_capacity(n);
                    out.extend_from_slice(&t[..j]);
                    out.push(*k);
                    out.extend_from_slice(&t[j + 2..]);
                    m.add_to(index(&out), col, &(c * &sign));
                }
            }
            let sign = if n % 2 == 0 {
                Rat::from_integer(1.into())
            } else {
                -Rat::from_integer(1.into())
            };
            for (k, c) in algebra.mul_basis(t[n], t[0]) {
                let mut out = Vec::with_capacity(n);
                out.push(*k);
                out.extend_from_slice(&t[1..n]);
                m.add_to(index(&out), col, &(c * &sign));
            }
        }
        b.push(m);
    }
    // B = (1 - t) s N with t the signed cyclic operator
    let cyclic = |n: usize| -> RatMatrix {
        let mut m = RatMatrix::zeros(dims[n], dims[n]);
        let sign = if n % 2 == 0 { Rat::from_integer(1.into()) } else { -Rat::from_integer(1.into()) };
        for col in 0..dims[n] {
            let t = tuple(col, n);
            let mut out = Vec::with_capacity(n + 1);
            out.push(t[n]);
            out.extend_from_slice(&t[..n]);
            m.add_to(index(&out), col, &sign);
        }
        m
    };
    let mut bb = Vec::new();
    for n in 0..n_max {
        // N = 1 + t + ... + t^n on degree n
        let t_n = cyclic(n);
        let mut nmat = RatMatrix::identity(dims[n]);
        let mut acc = RatMatrix::identity(dims[n]);
        for _ in 0..n {
            acc = t_n.mul(&acc);
            nmat = nmat.add(&acc);
        }
        // s: prepend a unit slot
        let mut s = RatMatrix::zeros(dims[n + 1], dims[n]);
        for col in 0..dims[n] {
            let t = tuple(col, n);
            let mut out = Vec::with_capacity(n + 2);
            out.push(0usize);
            out.extend_from_slice(&t);
            s.add_to(index(&out), col, &Rat::from_integer(1.into()));
        }
        let t_next = cyclic(n + 1);
        let one_minus_t = RatMatrix::identity(dims[n + 1]).sub(&t_next);
        bb.push(one_minus_t.mul(&s).mul(&nmat));
    }
    Ok(RawBar { algebra: algebra.clone(), n_max, dims, b, bb })
}

/// Checks b² = 0, B² = 0 and bB + Bb = 0 through the built depth. Returns
/// the first violated identity, if any.
pub fn mixed_identities_hold(b: &[RatMatrix], bb: &[RatMatrix]) -> Result<(), String> {
    for k in 0..b.len().saturating_sub(1) {
        if !b[k].mul(&b[k + 1]).is_zero() {
            return Err(format!("b∘b != 0 out of degree {}", k + 2));
        }
    }
    for k in 0..bb.len().saturating_sub(1) {
        if !bb[k + 1].mul(&bb[k]).is_zero() {
            return Err(format!("B∘B != 0 out of degree {}", k));
        }
    }
    // bB + Bb = 0 on degrees 1..: B_{n-1} after b_n plus b_{n+1} after B_n
    for n in 1..b.len() {
        let left = bb[n - 1].mul(&b[n - 1]);
        let right = b[n].mul(&bb[n]);
        if !left.add(&right).is_zero() {
            return Err(format!("bB + Bb != 0 in degree {}", n));
        }
    }
    // degree 0: b_1 B_0 = 0 on its own
    if !b.is_empty() && !bb.is_empty() {
        if !b[0].mul(&bb[0]).is_zero() {
            return Err("bB != 0 in degree 0".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{quotient_algebra, MonomialOrder, Poly, PolyContext};

    fn alg(vars: &[&str], rels: &[&str]) -> Arc<ArtinAlgebra> {
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels: Vec<Poly> =
            rels.iter().map(|r| crate::polyalg::parse_poly(r, &v).unwrap()).collect();
        quotient_algebra(&PolyContext::new(v, MonomialOrder::DegRevLex, rels)).unwrap()
    }

    #[test]
    fn normalized_dims_dual_numbers() {
        let a = alg(&["eps"], &["eps^2"]);
        let nb = normalized_bar(&a, 3, DEFAULT_BAR_BUDGET).unwrap();
        assert_eq!((0..=3).map(|n| nb.dim(n)).collect::<Vec<_>>(), vec![2, 2, 2, 2]);
    }

    #[test]
    fn raw_dims_dual_numbers() {
        let a = alg(&["eps"], &["eps^2"]);
        let rb = raw_bar(&a, 3, DEFAULT_BAR_BUDGET).unwrap();
        assert_eq!(rb.dims, vec![2, 4, 8, 16]);
    }

    #[test]
    fn identities_on_normalized_and_raw() {
        for a in [
            alg(&["eps"], &["eps^2"]),
            alg(&["x"], &["x^3"]),
            alg(&["x", "y"], &["x^2", "x*y", "y^2"]),
        ] {
            let nb = normalized_bar(&a, 4, DEFAULT_BAR_BUDGET).unwrap();
            mixed_identities_hold(&nb.b, &nb.bb).unwrap();
            let rb = raw_bar(&a, 4, DEFAULT_BAR_BUDGET).unwrap();
            mixed_identities_hold(&rb.b, &rb.bb).unwrap();
        }
    }

    #[test]
    fn budget_is_enforced() {
        let a = alg(&["x", "y"], &["x^2", "x*y", "y^2"]);
        let err = normalized_bar(&a, 12, 1000).unwrap_err();
        match err {
            HochError::BudgetExceeded { required, budget } => {
                assert!(required > budget);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
