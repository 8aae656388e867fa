use std::cmp::Ordering;

/// Exponent vector of a monomial. The derived `Ord` (lexicographic on the
/// exponent vector) is only a storage order; term-order comparisons go
/// through [`MonomialOrder`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    pub fn format(&self, vars: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 1 {
                parts.push(vars[i].clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", vars[i], e));
            }
        }
        parts.join("*")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    DegRevLex,
    Lex,
}

impl MonomialOrder {
    /// Compares monomials in this term order; `Greater` means "larger term".
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => {
                for (x, y) in a.0.iter().zip(&b.0) {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::DegRevLex => {
                match a.degree().cmp(&b.degree()) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                // ties: smaller exponent in the last differing variable wins
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn degrevlex_order() {
        let o = MonomialOrder::DegRevLex;
        // x^2 > xy > y^2 > x > y > 1 in two variables
        assert_eq!(o.cmp(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1]), &m(&[0, 2])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 1]), &m(&[0, 0])), Ordering::Greater);
    }

    #[test]
    fn lex_order() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1]), &m(&[1, 0])), Ordering::Greater);
    }
}
