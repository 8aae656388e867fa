use num_traits::{One, Zero};

use crate::exactla::{Rat, RatMatrix};

use super::bar::{HochError, TupleSpace};

pub const MAX_IDEMPOTENT_DEGREE: usize = 6;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn descents(p: &[usize]) -> usize {
    (0..p.len().saturating_sub(1)).filter(|&i| p[i] > p[i + 1]).count()
}

fn sign(p: &[usize]) -> i32 {
    let mut inv = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Coefficients c_j(σ) with Σ_j c_j(σ) x^j = binom(x - d(σ) + n - 1, n):
/// the generating identity for the Eulerian idempotents in Q[S_n].
fn eulerian_coefficients(n: usize, desc: usize) -> Vec<Rat> {
    // expand prod_{k=0}^{n-1} (x + (n - 1 - desc - k)) / n!
    let mut coeffs: Vec<Rat> = vec![Rat::one()]; // polynomial 1
    for k in 0..n {
        let c = Rat::from_integer((n as i64 - 1 - desc as i64 - k as i64).into());
        let mut next = vec![Rat::zero(); coeffs.len() + 1];
        for (i, a) in coeffs.iter().enumerate() {
            next[i + 1] += a; // x * a x^i
            next[i] += a * &c;
        }
        coeffs = next;
    }
    let mut fact = Rat::one();
    for k in 2..=n {
        fact = fact * Rat::from_integer((k as i64).into());
    }
    coeffs.into_iter().map(|c| c / &fact).collect()
}

/// The j-th Eulerian idempotent e_n^{(j)} as a matrix on the degree-n module
/// of the normalized bar complex: the symmetric group permutes the n reduced
/// slots through the signed place-permutation action.
///
/// e_n^{(j)} = Σ_σ [x^j] binom(x - d(σ) + n - 1, n) · sgn(σ) · P_σ.
pub fn eulerian_matrix(space: &TupleSpace, j: usize) -> Result<RatMatrix, HochError> {
    let n = space.n;
    if n > MAX_IDEMPOTENT_DEGREE {
        return Err(HochError::IdempotentRange { n, max: MAX_IDEMPOTENT_DEGREE });
    }
    let mut m = RatMatrix::zeros(space.dim, space.dim);
    if n == 0 {
        // e^{(0)} = id in degree 0; higher idempotents vanish
        if j == 0 {
            return Ok(RatMatrix::identity(space.dim));
        }
        return Ok(m);
    }
    if j == 0 || j > n {
        return Ok(m);
    }
    for perm in permutations(n) {
        let c = {
            let cs = eulerian_coefficients(n, descents(&perm));
            cs.get(j).cloned().unwrap_or_else(Rat::zero)
        };
        if c.is_zero() {
            continue;
        }
        let coeff = c * Rat::from_integer(sign(&perm).into());
        for col in 0..space.dim {
            let t = space.tuple(col);
            // place permutation on slots 1..=n: slot k receives t[perm^{-1}(k)];
            // equivalently slot perm[i] receives t[i+1]
            let mut out = t.clone();
            for (i, &pi) in perm.iter().enumerate() {
                out[pi + 1] = t[i + 1];
            }
            m.add_to(space.index(&out), col, &coeff);
        }
    }
    Ok(m)
}

/// All idempotents e_n^{(1)}..e_n^{(n)} for a degree.
pub fn eulerian_family(space: &TupleSpace) -> Result<Vec<RatMatrix>, HochError> {
    (1..=space.n.max(1)).map(|j| eulerian_matrix(space, j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;

    #[test]
    fn coefficients_match_small_cases() {
        // n = 1: binom(x, 1) = x
        let c = eulerian_coefficients(1, 0);
        assert_eq!(c, vec![rat(0, 1), rat(1, 1)]);
        // n = 2, identity (desc 0): binom(x+1, 2) = (x^2 + x)/2
        let c = eulerian_coefficients(2, 0);
        assert_eq!(c, vec![rat(0, 1), rat(1, 2), rat(1, 2)]);
        // n = 2, transposition (desc 1): binom(x, 2) = (x^2 - x)/2
        let c = eulerian_coefficients(2, 1);
        assert_eq!(c, vec![rat(0, 1), rat(-1, 2), rat(1, 2)]);
    }

    #[test]
    fn n2_projectors_are_the_swap_pair() {
        // On the two swap slots: e^{(1)} and e^{(2)} are (1 ∓ swap)/2 for the
        // signed action; orthogonal idempotents summing to the identity.
        let space = TupleSpace::new(3, 2);
        let e1 = eulerian_matrix(&space, 1).unwrap();
        let e2 = eulerian_matrix(&space, 2).unwrap();
        assert_eq!(e1.mul(&e1), e1);
        assert_eq!(e2.mul(&e2), e2);
        assert!(e1.mul(&e2).is_zero());
        assert!(e2.mul(&e1).is_zero());
        assert_eq!(e1.add(&e2), RatMatrix::identity(space.dim));
    }

    #[test]
    fn partition_of_unity_degree3() {
        let space = TupleSpace::new(3, 3);
        let fam = eulerian_family(&space).unwrap();
        let mut acc = RatMatrix::zeros(space.dim, space.dim);
        for e in &fam {
            acc = acc.add(e);
        }
        assert_eq!(acc, RatMatrix::identity(space.dim));
        for (i, a) in fam.iter().enumerate() {
            for (j, b) in fam.iter().enumerate() {
                let prod = a.mul(b);
                if i == j {
                    assert_eq!(prod, *a);
                } else {
                    assert!(prod.is_zero());
                }
            }
        }
    }

    #[test]
    fn range_limit() {
        let space = TupleSpace::new(2, 7);
        assert!(matches!(
            eulerian_matrix(&space, 1),
            Err(HochError::IdempotentRange { .. })
        ));
    }
}
