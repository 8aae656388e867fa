use num_traits::One;

use crate::exactla::Rat;

use super::monomial::{Monomial, MonomialOrder};
use super::poly::Poly;

/// Multivariate division: returns quotients against `divisors` (in order)
/// and the remainder. The remainder has no term divisible by any divisor's
/// leading term.
pub fn div_rem(p: &Poly, divisors: &[Poly], order: MonomialOrder) -> (Vec<Poly>, Poly) {
    let nvars = p.nvars();
    let mut quotients = vec![Poly::zero(nvars); divisors.len()];
    let mut rem = Poly::zero(nvars);
    let mut cur = p.clone();
    let lts: Vec<Option<(Monomial, Rat)>> = divisors
        .iter()
        .map(|d| d.leading_term(order).map(|(m, c)| (m.clone(), c.clone())))
        .collect();
    while !cur.is_zero() {
        let (lm, lc) = {
            let (m, c) = cur.leading_term(order).unwrap();
            (m.clone(), c.clone())
        };
        let mut divided = false;
        for (i, lt) in lts.iter().enumerate() {
            if let Some((dm, dc)) = lt {
                if dm.divides(&lm) {
                    let qm = dm.div_into(&lm);
                    let qc = &lc / dc;
                    quotients[i].add_term(&qm, &qc);
                    cur = cur.sub(&divisors[i].mul_term(&qm, &qc));
                    divided = true;
                    break;
                }
            }
        }
        if !divided {
            rem.add_term(&lm, &lc);
            let mut stripped = cur;
            stripped.add_term(&lm, &-lc);
            cur = stripped;
        }
    }
    (quotients, rem)
}

/// Reduced Groebner basis along with an expression of each basis element as a
/// combination of the original generators (the transform rows), so that ideal
/// membership can be certified against the generators the caller supplied.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub order: MonomialOrder,
    pub gens: Vec<Poly>,
    pub basis: Vec<Poly>,
    /// transform[j][i] is the coefficient of gens[i] in basis[j].
    pub transform: Vec<Vec<Poly>>,
}

#[derive(Debug, Clone)]
pub struct Membership {
    pub member: bool,
    /// Cofactors against the original generators when member.
    pub cofactors: Option<Vec<Poly>>,
    /// The (possibly zero) normal form.
    pub normal_form: Poly,
}

impl GroebnerBasis {
    pub fn is_unit_ideal(&self) -> bool {
        self.basis.iter().any(|g| g.is_constant() && !g.is_zero())
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        div_rem(p, &self.basis, self.order).1
    }

    pub fn membership(&self, p: &Poly) -> Membership {
        let (quotients, rem) = div_rem(p, &self.basis, self.order);
        if rem.is_zero() {
            let nvars = p.nvars();
            let mut cof = vec![Poly::zero(nvars); self.gens.len()];
            for (j, q) in quotients.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                for (i, t) in self.transform[j].iter().enumerate() {
                    cof[i] = cof[i].add(&q.mul(t));
                }
            }
            Membership { member: true, cofactors: Some(cof), normal_form: rem }
        } else {
            Membership { member: false, cofactors: None, normal_form: rem }
        }
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().filter_map(|g| g.leading_term(self.order).map(|(m, _)| m.clone())).collect()
    }
}

struct Tracked {
    poly: Poly,
    transform: Vec<Poly>,
}

fn reduce_tracked(t: &Tracked, basis: &[Tracked], order: MonomialOrder, nvars: usize) -> Tracked {
    let polys: Vec<Poly> = basis.iter().map(|b| b.poly.clone()).collect();
    let (quotients, rem) = div_rem(&t.poly, &polys, order);
    let mut transform = t.transform.clone();
    for (j, q) in quotients.iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        for (i, bt) in basis[j].transform.iter().enumerate() {
            transform[i] = transform[i].sub(&q.mul(bt));
        }
    }
    let _ = nvars;
    Tracked { poly: rem, transform }
}

/// Buchberger's algorithm with the coprime-leading-term criterion, followed
/// by inter-reduction to the unique reduced basis (monic, sorted by leading
/// monomial).
pub fn groebner(gens: &[Poly], order: MonomialOrder) -> GroebnerBasis {
    let nvars = gens.first().map_or(0, |g| g.nvars());
    let unit = |i: usize| -> Vec<Poly> {
        (0..gens.len())
            .map(|k| if k == i { Poly::one(nvars) } else { Poly::zero(nvars) })
            .collect()
    };
    let mut basis: Vec<Tracked> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if !g.is_zero() {
            basis.push(Tracked { poly: g.clone(), transform: unit(i) });
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (lm_i, lc_i) = {
            let (m, c) = basis[i].poly.leading_term(order).unwrap();
            (m.clone(), c.clone())
        };
        let (lm_j, lc_j) = {
            let (m, c) = basis[j].poly.leading_term(order).unwrap();
            (m.clone(), c.clone())
        };
        let lcm = lm_i.lcm(&lm_j);
        if lcm == lm_i.mul(&lm_j) {
            continue; // coprime leading terms: S-polynomial reduces to zero
        }
        let mi = lm_i.div_into(&lcm);
        let mj = lm_j.div_into(&lcm);
        let ci = Rat::one() / lc_i;
        let cj = Rat::one() / lc_j;
        let spoly = basis[i].poly.mul_term(&mi, &ci).sub(&basis[j].poly.mul_term(&mj, &cj));
        let mut transform = vec![Poly::zero(nvars); gens.len()];
        for (k, t) in basis[i].transform.iter().enumerate() {
            transform[k] = transform[k].add(&t.mul_term(&mi, &ci));
        }
        for (k, t) in basis[j].transform.iter().enumerate() {
            transform[k] = transform[k].sub(&t.mul_term(&mj, &cj));
        }
        let reduced = reduce_tracked(&Tracked { poly: spoly, transform }, &basis, order, nvars);
        if !reduced.poly.is_zero() {
            let new_idx = basis.len();
            basis.push(reduced);
            for k in 0..new_idx {
                pairs.push((k, new_idx));
            }
        }
    }

    // minimalize: drop elements whose leading term is divisible by another's
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let lm_i = basis[i].poly.leading_term(order).unwrap().0.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let lm_j = basis[j].poly.leading_term(order).unwrap().0.clone();
            if lm_j.divides(&lm_i) && (lm_j != lm_i || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut kept: Vec<Tracked> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(t, k)| if k { Some(t) } else { None })
        .collect();

    // inter-reduce tails until stable
    loop {
        let mut changed = false;
        for i in 0..kept.len() {
            let others: Vec<Tracked> = kept
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, t)| Tracked { poly: t.poly.clone(), transform: t.transform.clone() })
                .collect();
            let cur = Tracked { poly: kept[i].poly.clone(), transform: kept[i].transform.clone() };
            let red = reduce_tracked(&cur, &others, order, nvars);
            if red.poly != kept[i].poly {
                changed = true;
                kept[i] = red;
            }
        }
        if !changed {
            break;
        }
    }

    // normalize to monic and sort by leading monomial (ascending)
    for t in kept.iter_mut() {
        let lc = t.poly.leading_term(order).unwrap().1.clone();
        let inv = Rat::one() / lc;
        t.poly = t.poly.scale(&inv);
        for tr in t.transform.iter_mut() {
            *tr = tr.scale(&inv);
        }
    }
    kept.sort_by(|a, b| {
        order.cmp(a.poly.leading_term(order).unwrap().0, b.poly.leading_term(order).unwrap().0)
    });

    GroebnerBasis {
        order,
        gens: gens.to_vec(),
        basis: kept.iter().map(|t| t.poly.clone()).collect(),
        transform: kept.into_iter().map(|t| t.transform).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse::parse_poly;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn polys(exprs: &[&str], v: &[String]) -> Vec<Poly> {
        exprs.iter().map(|e| parse_poly(e, v).unwrap()).collect()
    }

    fn check_transform(gb: &GroebnerBasis) {
        for (j, b) in gb.basis.iter().enumerate() {
            let mut acc = Poly::zero(b.nvars());
            for (i, g) in gb.gens.iter().enumerate() {
                acc = acc.add(&gb.transform[j][i].mul(g));
            }
            assert_eq!(&acc, b, "transform row {} does not re-expand", j);
        }
    }

    #[test]
    fn already_reduced() {
        let v = vars(&["x", "y"]);
        let gb = groebner(&polys(&["x^2", "y^2"], &v), MonomialOrder::DegRevLex);
        assert_eq!(gb.basis.len(), 2);
        check_transform(&gb);
    }

    #[test]
    fn lex_with_one_reduction() {
        let v = vars(&["x", "y"]);
        let gb = groebner(&polys(&["x - y", "y^2"], &v), MonomialOrder::Lex);
        let rendered: Vec<String> = gb.basis.iter().map(|p| p.format(&v)).collect();
        assert_eq!(rendered, vec!["y^2", "x - y"]);
        check_transform(&gb);
    }

    #[test]
    fn unit_ideal() {
        let v = vars(&["x"]);
        let gb = groebner(&polys(&["1"], &v), MonomialOrder::DegRevLex);
        assert!(gb.is_unit_ideal());
        assert_eq!(gb.basis.len(), 1);
    }

    #[test]
    fn membership_with_cofactors() {
        let v = vars(&["x", "y"]);
        let gens = polys(&["x^2", "y^2"], &v);
        let gb = groebner(&gens, MonomialOrder::DegRevLex);
        let p = parse_poly("x^2*y", &v).unwrap();
        let m = gb.membership(&p);
        assert!(m.member);
        let cof = m.cofactors.unwrap();
        let mut acc = Poly::zero(2);
        for (c, g) in cof.iter().zip(&gens) {
            acc = acc.add(&c.mul(g));
        }
        assert_eq!(acc, p);

        let one = parse_poly("1", &v).unwrap();
        let gens2 = polys(&["x", "y"], &v);
        let gb2 = groebner(&gens2, MonomialOrder::DegRevLex);
        let m2 = gb2.membership(&one);
        assert!(!m2.member);
        assert_eq!(m2.normal_form, one);
    }

    #[test]
    fn membership_after_elimination() {
        // y^2 lies in (x+y, x-y)
        let v = vars(&["x", "y"]);
        let gens = polys(&["x + y", "x - y"], &v);
        let gb = groebner(&gens, MonomialOrder::DegRevLex);
        let p = parse_poly("y^2", &v).unwrap();
        let m = gb.membership(&p);
        assert!(m.member);
        let cof = m.cofactors.unwrap();
        let mut acc = Poly::zero(2);
        for (c, g) in cof.iter().zip(&gens) {
            acc = acc.add(&c.mul(g));
        }
        assert_eq!(acc, p);
    }
}
