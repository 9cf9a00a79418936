mod common;

use common::*;
use rand::Rng;
use zakfiber::oracle::{brute_membership, dense_fiber_ranks, dense_frame_bounds, dense_riesz_bounds};
use zakfiber::{
    bracket, frame_check, membership, parseval_decompose, project, range_of, riesz_check, single_generator_report,
    verify_decomposition, Action64, Tolerances64, Zak64, C64,
};

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// A random element of the space generated by `gens`.
fn random_member(r: &mut impl Rng, a: &Action64, gens: &[Vec<C64>]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.size()];
    for phi in gens {
        for g in a.group().elements() {
            let c = C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            out = add(&out, &scale(&a.apply_rep(&g, phi).unwrap(), c));
        }
    }
    out
}

/// 25 generator sets spread over the fixture actions, some of them with
/// deliberately dependent generators.
fn random_cases() -> Vec<(Action64, Vec<Vec<C64>>)> {
    let mut r = rng(20);
    let actions = fixture_actions();
    (0..25)
        .map(|k| {
            let a = actions[k % actions.len()].1.clone();
            let count = 1 + k % 3;
            let mut gens: Vec<Vec<C64>> = (0..count).map(|_| random_vec(&mut r, a.size())).collect();
            if k % 4 == 3 {
                let dependent = random_member(&mut r, &a, &gens[..1]);
                gens.push(dependent);
            }
            if k % 5 == 4 {
                // supported on few fibers: project a random vector onto one character
                let z = Zak64::new(&a).unwrap();
                let mut phi = z.forward(&gens[0]).unwrap();
                let keep = k % a.group().order();
                let fibers: Vec<Vec<C64>> = (0..phi.num_fibers())
                    .map(|al| if al == keep { phi.fiber(al).to_vec() } else { vec![C64::new(0.0, 0.0); phi.fiber(al).len()] })
                    .collect();
                phi = zakfiber::FiberedVector::new(z.layout().clone(), fibers).unwrap();
                gens[0] = z.inverse(&phi).unwrap();
            }
            (a, gens)
        })
        .collect()
}

#[test]
fn frame_and_riesz_bounds_match_dense_oracle() {
    let tol = Tolerances64::default();
    for (i, (a, gens)) in random_cases().into_iter().enumerate() {
        let z = Zak64::new(&a).unwrap();
        let fr = frame_check(&z, &gens, &tol).unwrap();
        let (fa, fb) = fr.bounds().unwrap();
        let (oa, ob) = dense_frame_bounds(&a, &gens).unwrap().unwrap();
        assert!(rel_close(fa, oa, 1e-8) && rel_close(fb, ob, 1e-8), "case {i}: {fa} {fb} vs {oa} {ob}");

        let rr = riesz_check(&z, &gens, &tol).unwrap();
        let dense = dense_riesz_bounds(&a, &gens).unwrap().unwrap();
        assert_eq!(rr.is_riesz, dense.independent, "case {i}");
        let (ra, rb) = rr.bounds().unwrap();
        assert!(rel_close(rb, dense.upper, 1e-8), "case {i}");
        if dense.independent {
            assert!(rel_close(ra, dense.lower, 1e-8), "case {i}: {ra} vs {}", dense.lower);
        } else {
            assert!(ra <= 1e-9 * rb && dense.lower <= 1e-9 * dense.upper, "case {i}");
        }
        assert!(!rr.is_riesz || fr.is_frame);
        assert!(fr.is_parseval == (fr.is_frame && (fa - 1.0).abs() <= 1e-10 && (fb - 1.0).abs() <= 1e-10));
    }
}

#[test]
fn length_matches_dense_isotypic_ranks() {
    let tol = Tolerances64::default();
    for (i, (a, gens)) in random_cases().into_iter().enumerate() {
        let z = Zak64::new(&a).unwrap();
        let j = range_of(&z, &gens, &tol).unwrap();
        let dense = dense_fiber_ranks(&a, &gens).unwrap();
        assert_eq!(j.dims(), dense, "case {i}");
        assert_eq!(j.length(), *dense.iter().max().unwrap());
        assert!(j.length() <= gens.len());
    }
}

#[test]
fn membership_agrees_with_least_squares() {
    let tol = Tolerances64::default();
    let mut r = rng(21);
    for (i, (a, gens)) in random_cases().into_iter().enumerate() {
        let z = Zak64::new(&a).unwrap();
        let j = range_of(&z, &gens, &tol).unwrap();
        for k in 0..8 {
            let f = if k % 2 == 0 { random_member(&mut r, &a, &gens) } else { random_vec(&mut r, a.size()) };
            let fiber = membership(&z, &f, &j, &tol).unwrap();
            let (dense_member, dense_residual) = brute_membership(&a, &f, &gens).unwrap();
            assert_eq!(fiber.member, dense_member, "case {i} probe {k}");
            assert!((fiber.residual - dense_residual).abs() <= 1e-9 * dense_residual.max(1.0));
            if k % 2 == 0 {
                assert!(fiber.member);
            }
        }
    }
}

#[test]
fn membership_is_translation_invariant() {
    let tol = Tolerances64::default();
    let mut r = rng(22);
    for (a, gens) in random_cases().into_iter().take(10) {
        let z = Zak64::new(&a).unwrap();
        let j = range_of(&z, &gens, &tol).unwrap();
        let f = random_vec(&mut r, a.size());
        let base = membership(&z, &f, &j, &tol).unwrap();
        for g in a.group().elements() {
            let moved = membership(&z, &a.apply_rep(&g, &f).unwrap(), &j, &tol).unwrap();
            assert_eq!(moved.member, base.member);
            assert!((moved.residual - base.residual).abs() <= 1e-10);
        }
    }
}

#[test]
fn projection_is_idempotent_and_orthogonal() {
    let tol = Tolerances64::default();
    let mut r = rng(23);
    for (a, gens) in random_cases() {
        let z = Zak64::new(&a).unwrap();
        let j = range_of(&z, &gens, &tol).unwrap();
        let f = random_vec(&mut r, a.size());
        let p = project(&z, &f, &j).unwrap();
        let pp = project(&z, &p, &j).unwrap();
        assert!(max_dev(&p, &pp) <= 1e-10);
        assert!(membership(&z, &p, &j, &tol).unwrap().member);
        let resid: Vec<C64> = f.iter().zip(&p).map(|(x, y)| x - y).collect();
        for phi in &gens {
            for g in a.group().elements() {
                let v = a.apply_rep(&g, phi).unwrap();
                assert!(a.space().inner(&resid, &v).norm() <= 1e-10 * a.space().norm_sqr(&v).sqrt().max(1.0));
            }
        }
    }
}

#[test]
fn brackets_are_hermitian_and_integrate_to_inner_products() {
    let mut r = rng(24);
    for (_, a) in fixture_actions() {
        let z = Zak64::new(&a).unwrap();
        let (psi, phi) = (random_vec(&mut r, a.size()), random_vec(&mut r, a.size()));
        let b1 = bracket(&z, &psi, &phi).unwrap();
        let b2 = bracket(&z, &phi, &psi).unwrap();
        for (x, y) in b1.values().iter().zip(b2.values()) {
            assert!((x - y.conj()).norm() <= 1e-12);
        }
        assert!((b1.integral() - a.space().inner(&psi, &phi)).norm() <= 1e-10 * b1.integral().norm().max(1.0));
        let bb = bracket(&z, &psi, &psi).unwrap();
        assert!(bb.values().iter().all(|v| v.im.abs() <= 1e-12 && v.re >= -1e-12));
        let n = a.space().norm_sqr(&psi);
        assert!((bb.integral().re - n).abs() <= 1e-10 * n);
    }
}

#[test]
fn single_generator_report_agrees_with_frame_check() {
    let tol = Tolerances64::default();
    let mut r = rng(25);
    for (_, a) in fixture_actions() {
        let z = Zak64::new(&a).unwrap();
        for _ in 0..10 {
            let psi = random_vec(&mut r, a.size());
            let (single, _) = single_generator_report(&z, &psi, &tol).unwrap();
            let multi = frame_check(&z, std::slice::from_ref(&psi), &tol).unwrap();
            let ((sa, sb), (ma, mb)) = (single.bounds().unwrap(), multi.bounds().unwrap());
            assert!(rel_close(sa, ma, 1e-12) && rel_close(sb, mb, 1e-12));
            assert_eq!(single.support, multi.support);
            assert_eq!(single.is_riesz, multi.is_riesz);
        }
    }
}

#[test]
fn bounds_scale_quadratically() {
    let tol = Tolerances64::default();
    for (a, gens) in random_cases().into_iter().take(10) {
        let z = Zak64::new(&a).unwrap();
        let base = frame_check(&z, &gens, &tol).unwrap();
        for c in [C64::new(2.0, 0.0), C64::new(0.0, -0.5), C64::new(1.5, 1.5)] {
            let scaled: Vec<Vec<C64>> = gens.iter().map(|g| scale(g, c)).collect();
            let rep = frame_check(&z, &scaled, &tol).unwrap();
            let ((a0, b0), (a1, b1)) = (base.bounds().unwrap(), rep.bounds().unwrap());
            let f = c.norm_sqr();
            assert!(rel_close(a1, f * a0, 1e-10) && rel_close(b1, f * b0, 1e-10));
            assert_eq!((rep.is_frame, rep.is_riesz), (base.is_frame, base.is_riesz));
        }
    }
}

#[test]
fn modulating_a_generator_keeps_fiber_spectra() {
    let tol = Tolerances64::default();
    for (a, gens) in random_cases().into_iter().take(10) {
        let z = Zak64::new(&a).unwrap();
        let base = frame_check(&z, &gens, &tol).unwrap();
        let last = a.group().element(a.group().order() - 1);
        let mut moved = gens.clone();
        moved[0] = a.apply_rep(&last, &gens[0]).unwrap();
        let rep = frame_check(&z, &moved, &tol).unwrap();
        for (f0, f1) in base.fibers.iter().zip(&rep.fibers) {
            assert!((f0.smax2 - f1.smax2).abs() <= 1e-12 * f0.smax2.max(1.0));
            assert!((f0.full_smin2 - f1.full_smin2).abs() <= 1e-12 * f0.smax2.max(1.0));
            assert_eq!(f0.dim, f1.dim);
        }
    }
}

#[test]
fn decomposition_properties() {
    let tol = Tolerances64::default();
    for (i, (a, gens)) in random_cases().into_iter().enumerate() {
        let z = Zak64::new(&a).unwrap();
        let parts = parseval_decompose(&z, &gens, &tol).unwrap();
        let report = verify_decomposition(&z, &gens, &parts, &tol).unwrap();
        assert!(report.passed(), "case {i}: {report:?}");
        assert_eq!(parts.len(), range_of(&z, &gens, &tol).unwrap().length());
        let union = frame_check(&z, &parts, &tol).unwrap();
        let (ua, ub) = union.bounds().unwrap();
        assert!((ua - 1.0).abs() <= 1e-10 && (ub - 1.0).abs() <= 1e-10, "case {i}");
        let again = parseval_decompose(&z, &parts, &tol).unwrap();
        assert_eq!(range_of(&z, &again, &tol).unwrap().dims(), range_of(&z, &parts, &tol).unwrap().dims());
    }
}
