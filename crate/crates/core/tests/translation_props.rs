mod common;

use common::*;
use zakfiber::fixtures::{delta, s3};
use zakfiber::{frame_check, range_of, FiniteAbelianGroup, Tolerances64, TranslationScenario, Zak64, C64};

fn scenarios() -> Vec<(&'static str, TranslationScenario)> {
    let z12 = FiniteAbelianGroup::cyclic(12).unwrap();
    let g46 = FiniteAbelianGroup::new(vec![4, 6]).unwrap();
    vec![
        ("S3", s3()),
        ("full", TranslationScenario::build(z12.clone(), &[vec![1]]).unwrap()),
        ("trivial", TranslationScenario::build(z12, &[]).unwrap()),
        ("Z4xZ6", TranslationScenario::build(g46, &[vec![2, 3], vec![0, 2]]).unwrap()),
    ]
}

fn translate(s: &TranslationScenario, f: &[C64], h: usize) -> Vec<C64> {
    let g = s.group();
    (0..g.order()).map(|x| f[g.add_idx(x, g.neg_idx(h))]).collect()
}

#[test]
fn scenario_invariants() {
    for (name, s) in scenarios() {
        let (g, h, hs) = (s.group().order(), s.subgroup().order(), s.annihilator().order());
        assert_eq!(h * hs, g, "{name}");
        assert_eq!(s.section().len(), g / h);
        assert_eq!(s.dual_section().len(), h);
        let n = s.normalization::<f64>();
        assert!((n.annihilator * n.dual_section - n.dual).abs() < 1e-15);
    }
}

#[test]
fn weil_formula_holds_exactly() {
    let mut r = rng(30);
    for (name, s) in scenarios() {
        for _ in 0..100 {
            let f = random_vec(&mut r, s.group().order());
            assert!(s.weil_check(&f).unwrap().deviation <= 1e-12, "{name}");
        }
    }
}

#[test]
fn zak_map_is_isometric_and_intertwines() {
    let mut r = rng(31);
    for (name, s) in scenarios() {
        for _ in 0..20 {
            let f = random_vec(&mut r, s.group().order());
            let zf = s.zak_forward(&f).unwrap();
            let n: f64 = f.iter().map(|v| v.norm_sqr()).sum();
            assert!((zf.norm_sqr() - n).abs() <= 1e-12 * n, "{name}");
            assert!(max_dev(&s.zak_inverse(&zf).unwrap(), &f) <= 1e-12, "{name}");
            for &h in s.subgroup().members() {
                let moved = s.zak_forward(&translate(&s, &f, h)).unwrap();
                for (i, &w) in s.dual_section().iter().enumerate() {
                    let chi: C64 = s.group().character(&s.group().element(h), &s.group().element(w)).unwrap();
                    let want: Vec<C64> = zf.fiber(i).iter().map(|v| v * chi).collect();
                    assert!(max_dev(moved.fiber(i), &want) <= 1e-12, "{name}");
                }
            }
        }
    }
}

#[test]
fn duality_with_fiberization() {
    let mut r = rng(32);
    for (name, s) in scenarios() {
        for _ in 0..100 {
            let f = random_vec(&mut r, s.group().order());
            assert!(s.duality_check(&f).unwrap() <= 1e-12, "{name}");
        }
        for _ in 0..50 {
            let f = random_vec(&mut r, s.group().order());
            let g = random_vec(&mut r, s.group().order());
            assert!(s.gramian_check(&f, &g).unwrap() <= 1e-12, "{name}");
        }
    }
}

#[test]
fn translation_action_reproduces_ti_analysis() {
    let tol = Tolerances64::default();
    let mut r = rng(33);
    for (name, s) in scenarios() {
        let bridge = s.as_action::<f64>().unwrap();
        assert!(bridge.action.validate().ok);
        let z = Zak64::new(&bridge.action).unwrap();
        assert_eq!(z.transversal().points(), s.section(), "{name}");
        let n = s.group().order();
        let cases = vec![
            vec![delta(n, 0)],
            vec![add(&delta(n, 0), &delta(n, 1 % n))],
            vec![random_vec(&mut r, n), random_vec(&mut r, n)],
        ];
        for gens in cases {
            let ti = s.ti_analyze(&gens, &tol).unwrap();
            let generic = range_of(&z, &gens, &tol).unwrap();
            let frame = frame_check(&z, &gens, &tol).unwrap();
            for (i, &alpha) in bridge.omega_to_dual.iter().enumerate() {
                assert_eq!(ti.range.dim(i), generic.dim(alpha), "{name}");
                let zf = s.zak_forward(&gens[0]).unwrap();
                let za = z.forward(&gens[0]).unwrap();
                assert!(max_dev(zf.fiber(i), za.fiber(alpha)) <= 1e-10, "{name}");
            }
            let ((a0, b0), (a1, b1)) = (ti.frame.bounds().unwrap(), frame.bounds().unwrap());
            assert!((a0 - a1).abs() <= 1e-10 * a1.max(1.0) && (b0 - b1).abs() <= 1e-10 * b1.max(1.0), "{name}");
        }
    }
}

#[test]
fn full_group_range_functions_are_zero_or_everything() {
    let mut r = rng(34);
    let s = TranslationScenario::build(FiniteAbelianGroup::new(vec![2, 6]).unwrap(), &[vec![1, 0], vec![0, 1]]).unwrap();
    assert_eq!(s.section().len(), 1);
    let tol = Tolerances64::default();
    let ti = s.ti_analyze(&[delta(12, 0)], &tol).unwrap();
    assert!(ti.frame.is_parseval && ti.riesz.is_riesz);
    for _ in 0..10 {
        let gens = vec![random_vec(&mut r, 12), random_vec(&mut r, 12)];
        let ti = s.ti_analyze(&gens, &tol).unwrap();
        assert!(ti.range.dims().iter().all(|&d| d <= 1));
    }
}
