//! The fixed test catalog (algebras, pairs, morphisms) and the named check
//! batteries shared by the acceptance suite and the command-line self test.

use std::sync::Arc;


use crate::complexes::{
    ext_class_is_zero, koszul_homology_graded, koszul_signed, verify_cofactors,
    KoszulData,
};
use crate::cycles::{
    conjugate_complex, cousin_boundary, dual_numbers_tangent, fundamental_sign,
    fundamental_top_transported, is_milnor_cycle, local_fundamental_class, newton_class, Deformation,
    SubvarietyGerm,
};
use crate::exactla::{Rat, RatMatrix};
use crate::hochcyc::{hodge, mixed_identities_hold, raw_bar, BarComplex, Flavor, PairBars};
use crate::kaehler::{bloch_group, d_of_apoly, jacobian_omega1_dim, omega_finite, MixedFormContext};
use crate::polyalg::{
    is_regular_sequence, parse_poly, quotient_algebra, tensor_pair, AlgebraMorphism, APoly,
    ArtinAlgebra, MonomialOrder, Poly, PolyContext, RelativePair,
};

pub fn algebra(vars: &[&str], rels: &[&str]) -> Arc<ArtinAlgebra> {
    let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let rels: Vec<Poly> = rels.iter().map(|r| parse_poly(r, &v).unwrap()).collect();
    quotient_algebra(&PolyContext::new(v, MonomialOrder::DegRevLex, rels)).unwrap()
}

pub fn rational() -> Arc<ArtinAlgebra> {
    ArtinAlgebra::rational()
}

pub fn dual_numbers() -> Arc<ArtinAlgebra> {
    algebra(&["eps"], &["eps^2"])
}

pub fn delta_cubed() -> Arc<ArtinAlgebra> {
    algebra(&["delta"], &["delta^3"])
}

pub fn qx2() -> Arc<ArtinAlgebra> {
    algebra(&["x"], &["x^2"])
}

pub fn qx3() -> Arc<ArtinAlgebra> {
    algebra(&["x"], &["x^3"])
}

pub fn fat_point() -> Arc<ArtinAlgebra> {
    algebra(&["x", "y"], &["x^2", "x*y", "y^2"])
}

/// The fixed algebra catalog.
pub fn algebra_catalog() -> Vec<Arc<ArtinAlgebra>> {
    vec![
        rational(),
        dual_numbers(),
        qx3(),
        fat_point(),
        qx2().tensor(&dual_numbers()).unwrap(),
    ]
}

/// The catalog pairs (R, A) of the Bloch-consistency criterion.
pub fn pair_catalog() -> Vec<Arc<RelativePair>> {
    vec![
        tensor_pair(&rational(), &dual_numbers()).unwrap(),
        tensor_pair(&qx2(), &dual_numbers()).unwrap(),
        tensor_pair(&qx3(), &dual_numbers()).unwrap(),
        tensor_pair(&qx2(), &delta_cubed()).unwrap(),
    ]
}

/// Graded morphisms between catalog algebras.
pub fn morphism_catalog() -> Vec<AlgebraMorphism> {
    let eps = dual_numbers();
    let delta = delta_cubed();
    let eps_vars: Vec<String> = vec!["eps".into()];
    let delta_vars: Vec<String> = vec!["delta".into()];
    vec![
        AlgebraMorphism::new(delta.clone(), eps.clone(), vec![parse_poly("eps", &eps_vars).unwrap()])
            .unwrap(),
        AlgebraMorphism::new(delta.clone(), eps.clone(), vec![parse_poly("2*eps", &eps_vars).unwrap()])
            .unwrap(),
        AlgebraMorphism::new(delta.clone(), eps.clone(), vec![parse_poly("0", &eps_vars).unwrap()])
            .unwrap(),
        AlgebraMorphism::new(eps.clone(), eps.clone(), vec![parse_poly("3*eps", &eps_vars).unwrap()])
            .unwrap(),
        AlgebraMorphism::new(
            delta.clone(),
            delta.clone(),
            vec![parse_poly("2*delta", &delta_vars).unwrap()],
        )
        .unwrap(),
        AlgebraMorphism::augmentation(&eps),
    ]
}

/// Small deterministic PRNG (xorshift*) so the randomized batteries are
/// reproducible byte for byte.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

pub type CheckResult = Result<String, String>;

fn fail(msg: impl Into<String>) -> CheckResult {
    Err(msg.into())
}

// ---------------------------------------------------------------------------
// Check batteries
// ---------------------------------------------------------------------------

/// Bloch consistency: dim Ω^1_{S,I}/dI equals dim HC_1(S,I) on every catalog
/// pair, and equals dim Ω^1_{R/Q} in the dual-numbers cases.
pub fn check_bloch_pairs() -> CheckResult {
    let expected_vdk = [Some(0usize), Some(1), Some(2), None];
    let expected_dim = [0usize, 1, 2, 2];
    let mut lines = Vec::new();
    for (idx, pair) in pair_catalog().into_iter().enumerate() {
        let b = bloch_group(&pair);
        let bars = PairBars::build(&pair, 2).map_err(|e| e.to_string())?;
        let hc1 = bars.relative(1, Flavor::HC, None).map_err(|e| e.to_string())?;
        if b.dim != hc1.dim {
            return fail(format!(
                "pair {}: forms pipeline gives {}, mixed-complex pipeline gives {}",
                pair.label(),
                b.dim,
                hc1.dim
            ));
        }
        if b.dim != expected_dim[idx] {
            return fail(format!(
                "pair {}: expected dim {}, got {}",
                pair.label(),
                expected_dim[idx],
                b.dim
            ));
        }
        if let Some(vdk) = expected_vdk[idx] {
            let omega_r = omega_finite(pair.r(), 1).dim();
            if b.dim != omega_r || omega_r != vdk {
                return fail(format!(
                    "pair {}: van der Kallen identity fails ({} vs Ω^1_R = {})",
                    pair.label(),
                    b.dim,
                    omega_r
                ));
            }
        }
        // the Jacobian count is an independent oracle for Ω^1 of S
        let s1 = omega_finite(pair.s(), 1).dim();
        if s1 != jacobian_omega1_dim(pair.s()) {
            return fail(format!("pair {}: Jacobian oracle disagrees on Ω^1_S", pair.label()));
        }
        lines.push(format!("{}: dim {}", pair.label(), b.dim));
    }
    Ok(lines.join("; "))
}

/// Hodge decomposition identities for every catalog algebra through degree 3.
pub fn check_hodge() -> CheckResult {
    let mut count = 0;
    for a in algebra_catalog() {
        let bar = BarComplex::build(&a, 4).map_err(|e| e.to_string())?;
        for n in 0..=3usize {
            for flavor in [Flavor::HH, Flavor::HC] {
                let h = hodge(&bar, n, flavor).map_err(|e| e.to_string())?;
                let sum: usize = h.pieces.iter().map(|(_, d)| d).sum();
                if sum != h.total {
                    return fail(format!(
                        "{}: piece dims of {:?}_{} sum to {} != {}",
                        a.label(),
                        flavor,
                        n,
                        sum,
                        h.total
                    ));
                }
                if !h.top_piece_matches_forms() {
                    return fail(format!(
                        "{}: {:?}_{}^({}) = {} but the form side has dim {}",
                        a.label(),
                        flavor,
                        n,
                        n,
                        h.piece_dim(n),
                        h.omega_comparison
                    ));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{} decompositions verified", count))
}

/// b² = 0, B² = 0, bB + Bb = 0 on raw and normalized complexes through
/// depth 4 for the catalog algebras of dimension <= 4.
pub fn check_mixed_identities() -> CheckResult {
    let mut count = 0;
    for a in algebra_catalog() {
        if a.dim() > 4 {
            continue;
        }
        let bar = BarComplex::build(&a, 4).map_err(|e| e.to_string())?;
        mixed_identities_hold(&bar.norm.b, &bar.norm.bb)
            .map_err(|e| format!("{} (normalized): {}", a.label(), e))?;
        let raw = raw_bar(&a, 4, crate::hochcyc::DEFAULT_BAR_BUDGET).map_err(|e| e.to_string())?;
        mixed_identities_hold(&raw.b, &raw.bb)
            .map_err(|e| format!("{} (raw): {}", a.label(), e))?;
        count += 1;
    }
    Ok(format!("identities hold on {} algebras (raw and normalized)", count))
}

/// SBI splitting on graded pairs for weights 1 and 2.
pub fn check_sbi() -> CheckResult {
    let pairs = [
        tensor_pair(&rational(), &dual_numbers()).unwrap(),
        tensor_pair(&qx2(), &dual_numbers()).unwrap(),
        tensor_pair(&qx3(), &dual_numbers()).unwrap(),
        tensor_pair(&rational(), &delta_cubed()).unwrap(),
    ];
    let mut lines = Vec::new();
    for pair in &pairs {
        for l in 1..=2usize {
            let bars = PairBars::build(pair, l + 1).map_err(|e| e.to_string())?;
            let rep = bars.sbi_split_check(l).map_err(|e| e.to_string())?;
            if !rep.exact {
                return fail(format!(
                    "{} at weight {}: dims ({}, {}, {}), inj {}, surj {}, IB=0 {}",
                    pair.label(),
                    l,
                    rep.left_dim,
                    rep.middle_dim,
                    rep.right_dim,
                    rep.b_injective,
                    rep.i_surjective,
                    rep.composite_zero
                ));
            }
            lines.push(format!("{} l={}: {}+{}={}", pair.label(), l, rep.left_dim, rep.right_dim, rep.middle_dim));
        }
    }
    Ok(lines.join("; "))
}

/// Agreement of the regularity verdict with direct Koszul homology on a
/// seeded battery of regular and engineered-irregular sequences.
pub fn check_regularity_battery() -> CheckResult {
    let ctx = PolyContext::free_named(&["x", "y", "z"]);
    let mut rng = TestRng::new(0x5eed_0001);
    let mut cases: Vec<(Vec<Poly>, bool)> = Vec::new();
    let vars = |i: usize| Poly::var(3, i);
    // ten regular: distinct pure powers and triangular homogeneous mixes
    for k in 0..10 {
        let a = 1 + (rng.below(2) as u32);
        let b = 1 + (rng.below(2) as u32);
        let f1 = vars(0).pow(a);
        let mix = vars(0).pow(b).scale(&Rat::from_integer(rng.int_in(-2, 2).into()));
        let f2 = vars(1).pow(b).add(&mix);
        if k % 3 == 0 {
            let c = 1 + (rng.below(2) as u32);
            cases.push((vec![f1, f2, vars(2).pow(c)], true));
        } else {
            cases.push((vec![f1, f2], true));
        }
    }
    // ten engineered-irregular: common factors and repetitions
    for k in 0..10 {
        let h = if k % 2 == 0 { vars(0).add(&vars(1)) } else { vars(2) };
        let f1 = vars(0).mul(&h);
        let f2 = vars(1).mul(&h);
        if k % 3 == 0 {
            cases.push((vec![f1.clone(), f1], false));
        } else {
            cases.push((vec![f1, f2], false));
        }
    }
    for (seq, expected) in &cases {
        let verdict = is_regular_sequence(&ctx, seq).map_err(|e| e.to_string())?;
        if verdict != *expected {
            return fail(format!(
                "is_regular_sequence gave {} on an engineered case (expected {})",
                verdict, expected
            ));
        }
        // oracle: graded Koszul homology vanishing for i >= 1
        let data = KoszulData::plain(&ctx, seq);
        let bound = 2 + seq.iter().map(|f| f.total_degree()).sum::<u32>();
        let mut vanishes = true;
        for i in 1..=seq.len() {
            let dims = koszul_homology_graded(&data, i, bound).map_err(|e| e.to_string())?;
            if dims.iter().any(|&d| d > 0) {
                vanishes = false;
            }
        }
        if vanishes != verdict {
            return fail(format!(
                "Koszul oracle ({}) disagrees with is_regular_sequence ({})",
                vanishes, verdict
            ));
        }
    }
    Ok(format!("{} sequences, verdicts and Koszul oracle agree", cases.len()))
}

/// The local fundamental class formula: (1/p!) dM_1 ... dM_p equals
/// sign(p) df_1 ∧ ... ∧ df_p, symbolically, for p = 1, 2, 3.
/// `flip` corrupts the Koszul sign convention (self-test fault hook).
pub fn check_fundamental_sign(flip: bool) -> CheckResult {
    let ctx = PolyContext::free_named(&["x", "y", "z"]);
    let q = rational();
    let mfc = MixedFormContext::new(ctx.clone(), q.clone());
    let mut batteries: Vec<Vec<Poly>> = vec![
        vec![Poly::var(3, 0)],
        vec![Poly::var(3, 0), Poly::var(3, 1)],
        vec![Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2)],
    ];
    batteries.push(vec![
        ctx.parse("x^2").unwrap(),
        ctx.parse("x*y + z").unwrap(),
    ]);
    for seq in &batteries {
        let p = seq.len();
        let data = KoszulData::plain(&ctx, seq);
        let complex = koszul_signed(&data, flip).map_err(|e| e.to_string())?;
        let fc = local_fundamental_class(&mfc, &complex);
        let top = fc.top.ok_or("missing top composite")?;
        let mut wedge: Option<crate::kaehler::AForm> = None;
        for f in seq {
            let d = d_of_apoly(&mfc, &APoly::from_poly(q.clone(), f));
            wedge = Some(match wedge {
                None => d,
                Some(w) => w.wedge(&d),
            });
        }
        let expected = wedge.unwrap().scale(&Rat::from_integer(fundamental_sign(p).into()));
        if !top.sub(&expected).is_zero() {
            return fail(format!(
                "fundamental class sign violated at p = {}: got {}, expected {}",
                p,
                top.render(),
                expected.render()
            ));
        }
    }
    Ok("top composites match ±df_1∧...∧df_p for p = 1, 2, 3".into())
}

fn eps_linear_deformation(ctx: &Arc<PolyContext>) -> Deformation {
    let germ = SubvarietyGerm::new(
        ctx,
        vec![ctx.parse("x").unwrap(), ctx.parse("y").unwrap()],
    )
    .unwrap();
    let a = dual_numbers();
    let f1 = APoly::from_poly(a.clone(), &ctx.parse("x").unwrap()).add(&APoly::from_parts(
        a.clone(),
        &ctx.parse("y").unwrap(),
        &a.basis_elem(1),
    ));
    let f2 = APoly::from_poly(a.clone(), &ctx.parse("y").unwrap());
    Deformation::new(germ, &a, vec![f1, f2], None, None).unwrap()
}

/// Ten seeded invertible constant basis changes leave the Newton Ext class
/// unchanged (difference class zero by membership).
pub fn check_basis_change() -> CheckResult {
    let ctx = PolyContext::free_named(&["x", "y", "z"]);
    let def = eps_linear_deformation(&ctx);
    let complex = crate::cycles::alpha(&def).map_err(|e| e.to_string())?;
    let mfc = def.mfc.clone();
    let direct = local_fundamental_class(&mfc, &complex).top.ok_or("no top composite")?;
    let mut rng = TestRng::new(0x5eed_0007);
    let mut tested = 0;
    while tested < 10 {
        let u0 = Rat::from_integer(rng.int_in(1, 5).into());
        let up = Rat::from_integer(rng.int_in(1, 5).into());
        let mid = RatMatrix::from_rows(vec![
            vec![
                Rat::from_integer(rng.int_in(-3, 3).into()),
                Rat::from_integer(rng.int_in(-3, 3).into()),
            ],
            vec![
                Rat::from_integer(rng.int_in(-3, 3).into()),
                Rat::from_integer(rng.int_in(-3, 3).into()),
            ],
        ]);
        if mid.inverse().is_none() {
            continue;
        }
        let us = vec![
            RatMatrix::from_rows(vec![vec![u0.clone()]]),
            mid,
            RatMatrix::from_rows(vec![vec![up.clone()]]),
        ];
        let conj = conjugate_complex(&complex, &us).map_err(|e| e.to_string())?;
        let transported = fundamental_top_transported(&mfc, &conj, &u0, &up)
            .ok_or("no transported top composite")?;
        let diff = transported.sub(&direct);
        let rep = ext_class_is_zero(&KoszulData::plain(&ctx, &def.base.sequence), &diff)
            .map_err(|e| e.to_string())?;
        if !rep.zero {
            return fail("basis change moved the Newton class".to_string());
        }
        tested += 1;
    }
    Ok("10 constant basis changes, class unchanged".into())
}

fn random_poly(rng: &mut TestRng, nvars: usize, max_deg: u32) -> Poly {
    let monos = crate::polyalg::monomials_up_to(nvars, max_deg);
    let mut p = Poly::zero(nvars);
    for m in monos {
        if rng.below(3) == 0 {
            let c = rng.int_in(-2, 2);
            if c != 0 {
                p.add_term(&m, &Rat::from_integer(c.into()));
            }
        }
    }
    p
}

/// The graded obstruction battery: seeded polynomial deformations over the
/// dual numbers and over Q[delta]/(delta^3), codimension 1 and 2 germs in
/// Q[x,y,z], each tested against at least two extension elements. Every
/// Cousin boundary must vanish with a verifiable cofactor certificate.
pub fn check_obstruction_battery(count: usize) -> CheckResult {
    let ctx = PolyContext::free_named(&["x", "y", "z"]);
    let mut rng = TestRng::new(0x5eed_0042);
    let germ_pool: Vec<Vec<&str>> = vec![
        vec!["x"],
        vec!["y"],
        vec!["x + y"],
        vec!["x", "y"],
        vec!["x + z", "y"],
        vec!["x", "y + z"],
        vec!["x + y", "z"],
    ];
    let mut done = 0;
    let mut boundaries = 0;
    while done < count {
        let germ_spec = &germ_pool[rng.below(germ_pool.len() as u64) as usize];
        let base: Vec<Poly> = germ_spec.iter().map(|s| ctx.parse(s).unwrap()).collect();
        let germ = SubvarietyGerm::new(&ctx, base.clone()).map_err(|e| e.to_string())?;
        let a = if done % 2 == 0 { dual_numbers() } else { delta_cubed() };
        let m_basis: Vec<usize> = (1..a.dim()).collect();
        let deformed: Vec<APoly> = base
            .iter()
            .map(|f| {
                let mut fa = APoly::from_poly(a.clone(), f);
                for &mi in &m_basis {
                    let g = random_poly(&mut rng, 3, 2);
                    fa = fa.add(&APoly::from_parts(a.clone(), &g, &a.basis_elem(mi)));
                }
                fa
            })
            .collect();
        let def = match Deformation::new(germ, &a, deformed, None, None) {
            Ok(d) => d,
            Err(crate::cycles::CycleError::NotRegular { .. }) => continue,
            Err(e) => return fail(e.to_string()),
        };
        // at least two explicit extension elements on top of the defaults
        let extras = [ctx.parse("x + y + z").unwrap(), ctx.parse("y + z").unwrap()];
        let usable: Vec<Poly> = extras
            .iter()
            .filter(|g| {
                let mut ext = def.base.sequence.clone();
                ext.push((*g).clone());
                ext.len() <= 3
                    && crate::polyalg::regularity_report(&ctx, &ext, None)
                        .map(|r| r.regular)
                        .unwrap_or(false)
                    && !crate::polyalg::groebner(&def.base.sequence, ctx.order())
                        .membership(g)
                        .member
            })
            .cloned()
            .collect();
        let rep = is_milnor_cycle(&def, &usable).map_err(|e| e.to_string())?;
        if rep.certificates.len() < 2 {
            return fail("battery produced fewer than two extension elements".to_string());
        }
        if !rep.is_cycle {
            return fail(format!(
                "graded deformation #{} is not a cycle (algebra {})",
                done,
                a.label()
            ));
        }
        // every vanishing certificate must re-expand exactly
        for cert in &rep.certificates {
            boundaries += 1;
            for comp in &cert.report.components {
                if let Some(cof) = &comp.cofactors {
                    if !verify_cofactors(&cert.report.generators, cof, &comp.poly) {
                        return fail("boundary cofactor certificate does not re-expand".to_string());
                    }
                }
            }
        }
        done += 1;
    }
    Ok(format!("{} deformations, {} vanishing boundaries", done, boundaries))
}

/// The denominator contrast: (x + eps/z, y) has a nonzero boundary
/// certificate at the (x, y, z)-point.
pub fn check_denominator_contrast() -> CheckResult {
    let ctx = PolyContext::free_named(&["x", "y", "z"]);
    let germ = SubvarietyGerm::new(
        &ctx,
        vec![ctx.parse("x").unwrap(), ctx.parse("y").unwrap()],
    )
    .map_err(|e| e.to_string())?;
    let a = dual_numbers();
    let f1 = APoly::from_poly(a.clone(), &ctx.parse("x*z").unwrap()).add(&APoly::from_parts(
        a.clone(),
        &Poly::one(3),
        &a.basis_elem(1),
    ));
    let f2 = APoly::from_poly(a.clone(), &ctx.parse("y").unwrap());
    let g = ctx.parse("z").unwrap();
    let def = Deformation::new(germ, &a, vec![f1, f2], Some((g.clone(), vec![1, 0])), None)
        .map_err(|e| e.to_string())?;
    let cls = newton_class(&def).map_err(|e| e.to_string())?;
    let (_, report) = cousin_boundary(&cls, &g).map_err(|e| e.to_string())?;
    if report.zero {
        return fail("denominator deformation unexpectedly unobstructed".to_string());
    }
    let nonzero = report
        .components
        .iter()
        .find(|c| !c.member)
        .ok_or("missing nonzero certificate")?;
    Ok(format!(
        "nonzero boundary certificate at component {} (normal form {})",
        nonzero.component,
        nonzero.normal_form.as_ref().map(|p| p.format(ctx.vars())).unwrap_or_default()
    ))
}

/// Naturality of the Newton class along the catalog morphisms.
pub fn check_naturality() -> CheckResult {
    let ctx = PolyContext::free_named(&["x", "y", "z"]);
    let mut count = 0;
    for phi in morphism_catalog() {
        let src = phi.source().clone();
        // a linear deformation over the source algebra
        let germ = SubvarietyGerm::new(
            &ctx,
            vec![ctx.parse("x").unwrap(), ctx.parse("y").unwrap()],
        )
        .map_err(|e| e.to_string())?;
        let mut f1 = APoly::from_poly(src.clone(), &ctx.parse("x").unwrap());
        for mi in 1..src.dim() {
            f1 = f1.add(&APoly::from_parts(src.clone(), &ctx.parse("y").unwrap(), &src.basis_elem(mi)));
        }
        let f2 = APoly::from_poly(src.clone(), &ctx.parse("y").unwrap());
        let def = Deformation::new(germ, &src, vec![f1, f2], None, None).map_err(|e| e.to_string())?;
        let rep = crate::cycles::naturality_check(&phi, &def).map_err(|e| e.to_string())?;
        if !rep.commutes {
            return fail(format!("square fails to commute for {}", phi.label()));
        }
        count += 1;
    }
    Ok(format!("{} morphisms, all squares commute", count))
}

/// Tangent-map checks: the documented first-order examples and additivity.
pub fn check_tangent() -> CheckResult {
    let ctx1 = PolyContext::free_named(&["x"]);
    let germ1 = SubvarietyGerm::new(&ctx1, vec![ctx1.parse("x").unwrap()]).map_err(|e| e.to_string())?;
    let t = dual_numbers_tangent(&germ1, &[Poly::one(1)]).map_err(|e| e.to_string())?;
    if t.report.zero {
        return fail("tangent of x + eps should be nonzero".to_string());
    }
    let radial = dual_numbers_tangent(&germ1, &[ctx1.parse("x").unwrap()]).map_err(|e| e.to_string())?;
    if !radial.report.zero {
        return fail("radial tangent should be the zero class".to_string());
    }
    let ctx2 = PolyContext::free_named(&["x", "y"]);
    let germ2 = SubvarietyGerm::new(
        &ctx2,
        vec![ctx2.parse("x").unwrap(), ctx2.parse("y").unwrap()],
    )
    .map_err(|e| e.to_string())?;
    let t2 = dual_numbers_tangent(&germ2, &[ctx2.parse("y").unwrap(), Poly::zero(2)])
        .map_err(|e| e.to_string())?;
    if !t2.report.zero {
        return fail("tangent along (y, 0) should be the zero class".to_string());
    }
    Ok("documented tangent verdicts reproduced".into())
}

/// Certificate round trip: cofactors re-expand to the tested component.
pub fn check_certificates() -> CheckResult {
    let ctx = PolyContext::free_named(&["x", "y"]);
    let data = KoszulData::plain(&ctx, &[ctx.parse("x").unwrap(), ctx.parse("y").unwrap()]);
    let q = rational();
    let mfc = MixedFormContext::new(ctx.clone(), q);
    let mut num = crate::kaehler::AForm::zero(mfc, 2);
    num.add_term((vec![0, 1], 0), &ctx.parse("x^2 + x*y").unwrap());
    let rep = ext_class_is_zero(&data, &num).map_err(|e| e.to_string())?;
    if !rep.zero {
        return fail("membership expected".to_string());
    }
    for comp in &rep.components {
        if !verify_cofactors(&rep.generators, comp.cofactors.as_ref().unwrap(), &comp.poly) {
            return fail("cofactors do not re-expand".to_string());
        }
    }
    Ok("cofactor certificates re-expand exactly".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shapes() {
        assert_eq!(algebra_catalog().len(), 5);
        assert_eq!(pair_catalog().len(), 4);
        assert!(morphism_catalog().len() >= 5);
        for phi in morphism_catalog() {
            assert!(phi.is_graded(), "catalog morphism {} must be graded", phi.label());
        }
    }

    #[test]
    fn rng_is_deterministic() {
        let mut a = TestRng::new(7);
        let mut b = TestRng::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
