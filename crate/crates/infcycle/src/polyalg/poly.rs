use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exactla::Rat;

use super::monomial::{Monomial, MonomialOrder};

/// Multivariate polynomial over Q with sparse term storage. Terms are keyed
/// by the monomial's storage order, so iteration is deterministic regardless
/// of the term order in play.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Poly::from_monomial(nvars, Monomial::var(nvars, i))
    }

    pub fn from_monomial(nvars: usize, m: Monomial) -> Self {
        let mut p = Poly::zero(nvars);
        p.terms.insert(m, Rat::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: Vec<(Monomial, Rat)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            p.add_term(&m, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&Monomial::one(self.nvars)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: &Monomial, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let nv = match self.terms.get(m) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if nv.is_zero() {
            self.terms.remove(m);
        } else {
            self.terms.insert(m.clone(), nv);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, &-c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(&m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            out.add_term(&m1.mul(m), &(c1 * c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().max_by(|(a, _), (b, _)| order.cmp(a, b))
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut d = m.clone();
                d.0[i] = e - 1;
                out.add_term(&d, &(c * Rat::from_integer(e.into())));
            }
        }
        out
    }

    /// Substitute each variable by the given polynomial (all in the target
    /// variable set).
    pub fn substitute(&self, images: &[Poly], target_nvars: usize) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let mut out = Poly::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target_nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e));
                }
            }
            out = out.add(&term);
        }
        out
    }

    pub fn format(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        // display with larger terms first under degrevlex for readability
        let mut ts: Vec<(&Monomial, &Rat)> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| MonomialOrder::DegRevLex.cmp(b, a));
        let mut out = String::new();
        for (i, (m, c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_one = abs.is_one();
            if m.is_one() {
                out.push_str(&format_rat(&abs));
            } else if coeff_one {
                out.push_str(&m.format(vars));
            } else {
                out.push_str(&format_rat(&abs));
                out.push('*');
                out.push_str(&m.format(vars));
            }
        }
        out
    }
}

pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i)).collect();
        write!(f, "{}", self.format(&vars))
    }
}
