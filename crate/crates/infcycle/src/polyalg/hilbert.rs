use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::Monomial;

/// Integer polynomial in one variable t, dense coefficient vector, used for
/// Hilbert series numerators N(t) with H(t) = N(t) / (1-t)^nvars.
pub type ZPoly = Vec<BigInt>;

pub fn zpoly_trim(p: &mut ZPoly) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

pub fn zpoly_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zpoly_trim(&mut out);
    out
}

pub fn zpoly_sub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    zpoly_trim(&mut out);
    out
}

/// 1 - t^d
pub fn one_minus_t_pow(d: u32) -> ZPoly {
    let mut p = vec![BigInt::zero(); d as usize + 1];
    p[0] = BigInt::one();
    p[d as usize] -= BigInt::one();
    zpoly_trim(&mut p);
    p
}

fn minimalize(gens: &[Monomial]) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    let mut sorted = gens.to_vec();
    sorted.sort_by_key(|m| (m.degree(), m.clone()));
    for m in sorted {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Numerator of the Hilbert series of S/(gens) for a monomial ideal, over the
/// denominator (1-t)^nvars. Classical colon recursion: splitting off one
/// generator m gives N(I) = N(I') - t^{deg m} N(I' : m).
pub fn hilbert_numerator(gens: &[Monomial], _nvars: usize) -> ZPoly {
    let gens = minimalize(gens);
    if gens.is_empty() {
        return vec![BigInt::one()];
    }
    if gens.iter().any(|m| m.is_one()) {
        return Vec::new(); // unit ideal: zero module
    }
    let m = gens.last().unwrap().clone();
    let rest: Vec<Monomial> = gens[..gens.len() - 1].to_vec();
    let n_rest = hilbert_numerator(&rest, _nvars);
    let colon: Vec<Monomial> = rest.iter().map(|g| g.gcd(&m).div_into(g)).collect();
    let n_colon = hilbert_numerator(&colon, _nvars);
    let mut shifted = vec![BigInt::zero(); m.degree() as usize];
    shifted.extend(n_colon);
    zpoly_sub(&n_rest, &shifted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    fn ints(v: &[i64]) -> ZPoly {
        let mut out: ZPoly = v.iter().map(|&x| BigInt::from(x)).collect();
        zpoly_trim(&mut out);
        out
    }

    #[test]
    fn numerator_of_regular_monomial_ideals() {
        // (x, y) in 2 vars: N = (1-t)^2
        let n = hilbert_numerator(&[m(&[1, 0]), m(&[0, 1])], 2);
        assert_eq!(n, ints(&[1, -2, 1]));
        // (x^2, y^3): N = (1-t^2)(1-t^3)
        let n = hilbert_numerator(&[m(&[2, 0]), m(&[0, 3])], 2);
        assert_eq!(n, zpoly_mul(&one_minus_t_pow(2), &one_minus_t_pow(3)));
    }

    #[test]
    fn numerator_detects_irregularity() {
        // (x^2, xy) in 2 vars is not a complete intersection
        let n = hilbert_numerator(&[m(&[2, 0]), m(&[1, 1])], 2);
        let expected = zpoly_mul(&one_minus_t_pow(2), &one_minus_t_pow(2));
        assert_ne!(n, expected);
    }
}
