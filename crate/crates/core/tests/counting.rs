use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shearlet_core::boxes::{
    boxes_intersect, brute_force_count, cover_bounds, cover_intersection_count, family_count, hap_radius,
    lattice_point, locate_in_cover, separation_check, BoxSpec,
};
use shearlet_core::density::{estimate_density, CenterSpec, Source};
use shearlet_core::params::{generate, DiagonalRule, FamilyKind, FamilySpec, ParamSet, WeightedPoint, Window};
use shearlet_core::{box_contains, weighted_count, GroupElement};

const E: f64 = std::f64::consts::E;

fn element() -> impl Strategy<Value = GroupElement> {
    (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0)
        .prop_map(|(l, s, t1, t2)| GroupElement::from_log(l, s, [t1, t2]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn cover_location_is_total(g in element(), hi in 0usize..3) {
        let h = [0.5, 1.0, 2.0][hi];
        let c = locate_in_cover(&g, h).unwrap();
        prop_assert!(box_contains(&GroupElement::IDENTITY, h, &c.residual));
        let back = lattice_point(c.j, c.k, c.m, h).compose(&c.residual);
        prop_assert!(back.rel_diff(&g) < 1e-9);
    }

    #[test]
    fn membership_left_invariance(c in element(), g in element()) {
        prop_assert_eq!(box_contains(&c, 1.5, &g), box_contains(&GroupElement::IDENTITY, 1.5, &c.inverse().compose(&g)));
    }
}

fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<WeightedPoint> {
    (0..n)
        .map(|_| {
            let g = GroupElement::from_log(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
            )
            .unwrap();
            WeightedPoint::new(g, rng.gen_range(0.5..2.0)).unwrap()
        })
        .collect()
}

#[test]
fn counting_left_invariance_and_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pts = random_points(&mut rng, 3000);
    for _ in 0..50 {
        let g = GroupElement::from_log(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).unwrap();
        let moved: Vec<WeightedPoint> = pts.iter().map(|p| WeightedPoint { g: g.inverse().compose(&p.g), w: p.w }).collect();
        let a = brute_force_count(&pts, &BoxSpec::new(g, 1.5).unwrap());
        let b = brute_force_count(&moved, &BoxSpec::new(GroupElement::IDENTITY, 1.5).unwrap());
        assert_eq!(a.points, b.points);
        let small = weighted_count(&pts, &BoxSpec::new(g, 0.7).unwrap());
        assert!(small <= a.weighted + 1e-12);
    }
}

fn families() -> Vec<FamilySpec> {
    vec![
        FamilySpec::new(FamilyKind::Regular, E, 1.0, 1.0).unwrap(),
        FamilySpec::new(FamilyKind::OversampledDiagonal, 2.0, 0.5, 1.0)
            .unwrap()
            .with_diagonal(DiagonalRule::Constant { r1: 2.0, r2: 2.0 })
            .unwrap(),
        FamilySpec::new(FamilyKind::OversampledShear, 2.0, 0.5, 1.0).unwrap(),
        FamilySpec::new(FamilyKind::Coshearlet, E, 1.0, 1.0).unwrap(),
        FamilySpec::new(FamilyKind::TildeRegular, E, 1.0, 1.0).unwrap(),
    ]
}

/// Centers whose boxes fit the brute-force window below.
fn centers(kind: FamilyKind, rng: &mut ChaCha8Rng, n: usize) -> Vec<GroupElement> {
    (0..n)
        .map(|_| {
            let l = if kind == FamilyKind::Coshearlet { rng.gen_range(2.0..4.0) } else { rng.gen_range(-1.0..1.0) };
            GroupElement::from_log(l, rng.gen_range(-0.3..0.3), [rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)]).unwrap()
        })
        .collect()
}

#[test]
fn enumeration_equals_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for fam in families() {
        for &h in &[1.0, 2.0, 4.0, 8.0] {
            let window = match fam.kind {
                FamilyKind::Coshearlet => Window::new((-3, 9), (-6, 6), (-220, 220), (-40, 40)).unwrap(),
                FamilyKind::OversampledDiagonal | FamilyKind::OversampledShear => {
                    Window::new((-8, 9), (-20, 20), (-420, 420), (-40, 40)).unwrap()
                }
                _ => Window::new((-6, 6), (-10, 10), (-120, 120), (-25, 25)).unwrap(),
            };
            if h < 8.0 && fam.kind == FamilyKind::Coshearlet && h > 4.0 {
                continue;
            }
            let ps = generate(&fam, &window).unwrap();
            for c in centers(fam.kind, &mut rng, 4) {
                let bx = BoxSpec::new(c, h).unwrap();
                let fast = family_count(&fam, &bx).unwrap();
                // the window check inside Source::Points guarantees brute force saw every candidate
                let checked = Source::Points(&ps).count(&bx).unwrap();
                let slow = brute_force_count(&ps.points, &bx);
                assert_eq!(checked, slow);
                assert_eq!(fast.points, slow.points, "{:?} h={h} c={c}", fam.kind);
                assert!((fast.weighted - slow.weighted).abs() <= 1e-12 * slow.weighted.max(1.0));
            }
        }
    }
}

#[test]
fn regular_counts_at_h16_are_exact() {
    let fam = FamilySpec::new(FamilyKind::Regular, E, 1.0, 1.0).unwrap();
    let est = estimate_density(Source::Family(&fam), &[16.0], &CenterSpec::Random { count: 100, seed: 3 }).unwrap();
    assert!((est.rows[0].min_norm_count - 1.0).abs() < 1e-12);
    assert!((est.rows[0].max_norm_count - 1.0).abs() < 1e-12);
}

#[test]
fn coshearlet_extremes_at_h8() {
    let fam = FamilySpec::new(FamilyKind::Coshearlet, 2.0, 1.0, 1.0).unwrap();
    let baseline = 1.0 / 2f64.ln();
    let ladder = CenterSpec::Ladder { ln_x: (-4..=4).map(|i| 2.0 * i as f64).collect(), per_scale: 0, seed: 0 };
    let est = estimate_density(Source::Family(&fam), &[8.0], &ladder).unwrap();
    let row = &est.rows[0];
    assert!(row.max_norm_count >= 10.0 * baseline, "{row:?}");
    assert!(row.min_norm_count <= 0.1 * baseline, "{row:?}");
}

#[test]
fn cover_counts_between_bounds_at_unit_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for &r in &[1.0, 2.0] {
        let (n, nt) = cover_bounds(r, 1.0).unwrap();
        for _ in 0..40 {
            let c = GroupElement::from_log(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]).unwrap();
            let k = cover_intersection_count(&c, r, 1.0) as f64;
            assert!(k <= n && k >= nt, "r={r} k={k}");
        }
    }
}

#[test]
fn lattice_separation() {
    let h = 1.0;
    let mut pts = Vec::new();
    for j in -2..=2 {
        for k in -2..=2 {
            for m1 in -2..=2 {
                for m2 in -2..=2 {
                    pts.push(WeightedPoint::new(lattice_point(j, k, [m1, m2], h), 1.0).unwrap());
                }
            }
        }
    }
    assert!(separation_check(&pts, h / 4.0).unwrap().separated);
    let shifted: Vec<WeightedPoint> = pts
        .iter()
        .map(|p| WeightedPoint { g: p.g.compose(&GroupElement::new(1.01, 0.01, [0.01, 0.01]).unwrap()), w: 1.0 })
        .collect();
    let mut both = pts.clone();
    both.extend(shifted);
    let rep = separation_check(&both, h / 4.0).unwrap();
    assert!(!rep.separated);
    assert_eq!(rep.partition.len(), 2);
}

#[test]
fn hap_geometry_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (delta, rp) = (1.0, 2.0);
    let r = hap_radius(delta, rp).unwrap();
    let mut straddling = 0;
    while straddling < 2000 {
        let span = r / 2.0 + 2.0 * delta;
        let p = GroupElement::from_log(rng.gen_range(-span..span), rng.gen_range(-span..span), [rng.gen_range(-span..span), rng.gen_range(-span..span)]).unwrap();
        let outside = (0..16).any(|_| {
            let q = GroupElement::from_log(rng.gen_range(-delta / 2.0..delta / 2.0), rng.gen_range(-delta / 2.0..delta / 2.0), [rng.gen_range(-delta / 2.0..delta / 2.0), rng.gen_range(-delta / 2.0..delta / 2.0)]).unwrap();
            !box_contains(&GroupElement::IDENTITY, r, &p.compose(&q))
        });
        if outside {
            straddling += 1;
            assert!(!boxes_intersect(&p, delta, &GroupElement::IDENTITY, rp), "p={p}");
        }
    }
}

#[test]
fn paramset_file_roundtrip() {
    let fam = FamilySpec::new(FamilyKind::Regular, 2.0, 1.0, 0.7).unwrap();
    let ps = generate(&fam, &Window::new((-2, 2), (-4, 4), (-2, 2), (-2, 2)).unwrap()).unwrap();
    assert!(ps.len() >= 1000);
    let mut buf = Vec::new();
    shearlet_core::params::write_paramset(&ps, &mut buf).unwrap();
    let back = shearlet_core::params::read_paramset(buf.as_slice()).unwrap();
    assert_eq!(back.points, ps.points);
}

#[test]
fn family_identities() {
    let w = Window::new((-2, 2), (-3, 3), (-2, 2), (-2, 2)).unwrap();
    let reg = generate(&FamilySpec::new(FamilyKind::Regular, 2.0, 0.5, 0.3).unwrap(), &w).unwrap();
    let diag = generate(&FamilySpec::new(FamilyKind::OversampledDiagonal, 2.0, 0.5, 0.3).unwrap(), &w).unwrap();
    assert_eq!(reg.points, diag.points);

    let co = FamilySpec::new(FamilyKind::Coshearlet, 2.0, 0.5, 0.3).unwrap();
    for j in -2..=2 {
        for k in -3..=3 {
            for m in [[1, 0], [0, 1], [-2, 3]] {
                let p = co.point(j, k, m);
                let aj = 2f64.powi(j as i32);
                let bk = 0.5 * k as f64;
                let cm = [0.3 * m[0] as f64, 0.3 * m[1] as f64];
                let want = [aj * cm[0] + bk * aj.sqrt() * cm[1], aj.sqrt() * cm[1]];
                assert!((p.g.t()[0] - want[0]).abs() < 1e-12 && (p.g.t()[1] - want[1]).abs() < 1e-12);
            }
        }
    }

    let tilde = FamilySpec::new(FamilyKind::TildeRegular, 2.0, 0.5, 0.3).unwrap();
    for j in -2..=2 {
        for k in -3..=3 {
            let m = [2, -1];
            let phi = tilde.point(j, k, m).g.phi();
            assert!(phi.rel_diff(&tilde.tilde_coordinates(j, k, m)) < 1e-12);
        }
    }
}

#[test]
fn raw_points_without_metadata_are_counted() {
    let ps = ParamSet::from_points(vec![WeightedPoint::new(GroupElement::IDENTITY, 2.5).unwrap()]);
    let est = estimate_density(Source::Points(&ps), &[1.0], &CenterSpec::Explicit(vec![GroupElement::IDENTITY])).unwrap();
    assert_eq!(est.rows[0].max_norm_count, 2.5);
}
