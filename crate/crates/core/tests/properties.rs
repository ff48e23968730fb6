use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stablepoly::construct::{bezout, det_pencil, random_pencil, random_stable, Recipe, TailKind};
use stablepoly::interlace::{check_relation, Relation};
use stablepoly::poly::{AffineSubstitution, Rotation, VarRule};
use stablepoly::preservers::{apply_mixed, exp_mixed};
use stablepoly::stability::{decide, verify_witness, SamplerConfig, StabilityVerdict};
use stablepoly::{MultiPoly, UniPoly, C64};

fn cfg(seed: u64) -> SamplerConfig {
    SamplerConfig::default().with_trials(256).with_seed(seed)
}

fn certified(nvars: usize, seed: u64) -> MultiPoly {
    let recipe = Recipe::ALL[(seed % Recipe::ALL.len() as u64) as usize];
    let degree = 1 + (seed / 7 % 3) as usize;
    random_stable(nvars, degree, seed, recipe).unwrap().0
}

/// Fails on a refutation; a refutation must carry a verified witness or a
/// failed necessary condition.
fn not_refuted(p: &MultiPoly, seed: u64) -> Result<(), TestCaseError> {
    if p.is_zero() {
        return Ok(());
    }
    match decide(p, &cfg(seed), None).unwrap() {
        StabilityVerdict::Unstable { witness, reason, .. } => {
            if let Some(w) = witness {
                prop_assert!(w.iter().all(|z| z.re > 0.0));
                prop_assert!(verify_witness(p, &w));
            }
            Err(TestCaseError::fail(format!("refuted: {reason}")))
        }
        _ => Ok(()),
    }
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize) -> MultiPoly {
    let terms: Vec<(Vec<u32>, C64)> = (0..rng.gen_range(1..6))
        .map(|_| {
            let e = (0..nvars).map(|_| rng.gen_range(0..4)).collect();
            (e, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        })
        .collect();
    MultiPoly::from_terms(nvars, terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eval_is_multiplicative(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(&mut rng, 3);
        let g = random_poly(&mut rng, 3);
        let p: Vec<C64> = (0..3).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let lhs = f.mul(&g).unwrap().eval(&p).unwrap();
        let rhs = f.eval(&p).unwrap() * g.eval(&p).unwrap();
        let scale = f.coefficient_scale() * g.coefficient_scale() * 64.0;
        prop_assert!((lhs - rhs).norm() <= 1e-10 * scale.max(1.0));
    }

    #[test]
    fn parity_parts_sum_to_input(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(&mut rng, 2);
        let (e, o) = f.even_odd_parts();
        prop_assert_eq!(e.add(&o).unwrap(), f);
    }

    #[test]
    fn reversal_is_an_involution(seed in 0u64..1_000_000, j in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(&mut rng, 2).add(&MultiPoly::one(2)).unwrap();
        prop_assume!(!f.coefficient_slice(j, 0).unwrap().is_zero());
        prop_assert_eq!(f.reverse_in_var(j).unwrap().reverse_in_var(j).unwrap(), f);
    }

    #[test]
    fn rotation_round_trip(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(&mut rng, 2);
        let back = f.rotate_halfplane(Rotation::StableToUpper).rotate_halfplane(Rotation::UpperToStable);
        prop_assert!(back.sub(&f).unwrap().coefficient_scale() <= 1e-12 * f.coefficient_scale());
    }

    #[test]
    fn closure_under_products_derivatives_and_reversal(seed in 0u64..1_000_000, j in 0usize..2) {
        let f = certified(2, seed);
        let g = certified(2, seed.wrapping_add(1));
        not_refuted(&f.mul(&g).unwrap(), seed)?;
        not_refuted(&f.partial_derivative(j).unwrap(), seed)?;
        not_refuted(&f.reverse_in_var(j).unwrap(), seed)?;
        for s in f.slices(j).unwrap() {
            not_refuted(&s, seed)?;
        }
    }

    #[test]
    fn imaginary_substitution_is_stable_or_zero(seed in 0u64..1_000_000, a in -3.0f64..3.0) {
        let f = certified(3, seed);
        let sub = AffineSubstitution::identity(3).with(0, VarRule::FixImaginary(a));
        not_refuted(&f.affine_substitute(&sub).unwrap(), seed)?;
    }

    #[test]
    fn h_interlacing_is_symmetric(seed in 0u64..1_000_000, a in 0.0f64..3.0, b in 0.0f64..3.0) {
        let f = certified(1, seed);
        let g = f.partial_derivative(0).unwrap().scale_real(a).add(&f.scale_real(b)).unwrap();
        prop_assume!(!g.is_zero());
        let fwd = check_relation(&f, &g, Relation::HInterlace, &cfg(seed)).unwrap();
        let bwd = check_relation(&g, &f, Relation::HInterlace, &cfg(seed)).unwrap();
        prop_assert!(fwd.accepted());
        prop_assert_eq!(fwd.accepted(), bwd.accepted());
    }

    #[test]
    fn positive_interlacing_implies_the_weaker_relations(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=4);
        let mut pts: Vec<f64> = (0..2 * n).map(|_| -rng.gen_range(0.05..8.0)).collect();
        pts.sort_by(|a, b| b.total_cmp(a));
        prop_assume!(pts.windows(2).all(|w| w[0] - w[1] > 1e-3));
        let fr: Vec<f64> = pts.iter().step_by(2).copied().collect();
        let gr: Vec<f64> = pts.iter().skip(1).step_by(2).copied().collect();
        let f = MultiPoly::from_univariate(&UniPoly::from_real_roots(&fr), 1, 0).unwrap();
        let g = MultiPoly::from_univariate(&UniPoly::from_real_roots(&gr), 1, 0).unwrap();
        for rel in [Relation::PInterlace, Relation::PSim, Relation::HInterlace, Relation::HSim] {
            prop_assert!(check_relation(&f, &g, rel, &cfg(seed)).unwrap().accepted(), "{}", rel);
        }
    }

    #[test]
    fn real_tail_pencils_have_positive_coefficients(seed in 0u64..1_000_000, n in 1usize..=4, d in 1usize..=3, skew in any::<bool>()) {
        let tail = if skew { TailKind::Skew } else { TailKind::None };
        let (p, _) = det_pencil(&random_pencil(n, d, tail, seed).unwrap()).unwrap();
        prop_assert!(p.has_positive_coefficients(1e-12));
        prop_assert!(p.degree().unwrap() as usize <= n);
        for j in 0..d {
            prop_assert!(p.degree_in(j).unwrap().unwrap_or(0) as usize <= n);
        }
    }

    #[test]
    fn bezoutian_is_symmetric(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = UniPoly::from_real(&(0..rng.gen_range(2..6)).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>());
        let g = UniPoly::from_real(&(0..rng.gen_range(1..6)).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>());
        prop_assume!(f.degree().unwrap_or(0) >= 1 && !g.is_zero());
        let Ok(b) = bezout(&f, &g) else { return Ok(()) };
        let t = b.embed(2, &[1, 0]).unwrap();
        prop_assert!(t.sub(&b).unwrap().coefficient_scale() <= 1e-12 * b.coefficient_scale());
    }

    #[test]
    fn mixed_operators_preserve_stability(seed in 0u64..1_000_000) {
        let fsym = certified(2, seed);
        let g = certified(1, seed.wrapping_add(3));
        not_refuted(&apply_mixed(&fsym, &g).unwrap(), seed)?;
        not_refuted(&exp_mixed(&fsym).unwrap(), seed)?;
    }
}
