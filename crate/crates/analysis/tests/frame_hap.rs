use shearlet_analysis::frame::{frame_bounds, Band, FrameEstimate, IterationBudget, Surrogate};
use shearlet_analysis::hap::{comparison_constant, hap_profile, ElementSampler, HapProfile, HapSystem, SpanKind, TailSpec};
use shearlet_analysis::{GeneratorParams, ShearletGenerator};
use shearlet_core::{FamilyKind, FamilySpec};

fn gen() -> ShearletGenerator {
    ShearletGenerator::new(GeneratorParams::default()).unwrap()
}

fn hap_surrogate() -> Surrogate {
    Surrogate::new(2.0, 32, Band { xi1_min: 0.875, xi1_max: 2.25, xi2_max: 1.5 }).unwrap()
}

#[test]
fn fine_regular_family_has_moderate_condition() {
    let gen = gen();
    let fam = FamilySpec::new(FamilyKind::Regular, 2f64.powf(0.25), 0.25, 0.25).unwrap();
    let sur = Surrogate::new(2.0, 32, Band { xi1_min: 1.0, xi1_max: 2.5, xi2_max: 1.5 }).unwrap();
    let pts = sur.family_points(&gen, &fam).unwrap().points;
    let est = frame_bounds(&sur.frame_operator(&gen, &pts), &IterationBudget::default()).unwrap();
    assert!(est.converged());
    assert!(est.a_est > 0.0 && est.b_est / est.a_est < 100.0, "{est:?}");
    let back: FrameEstimate = serde_json::from_str(&serde_json::to_string(&est).unwrap()).unwrap();
    assert_eq!(back, est);
}

#[test]
fn hap_profile_decays_and_respects_the_bound() {
    let gen = gen();
    let fam = FamilySpec::new(FamilyKind::Regular, 2f64.sqrt(), 0.5, 0.5).unwrap();
    let sur = hap_surrogate();
    let pts = sur.family_points(&gen, &fam).unwrap().points;
    let sys = HapSystem::new(sur, &gen, pts, &IterationBudget::default()).unwrap();
    let ps = ElementSampler { ln_a: (-0.12, 0.11), s: (-0.2, 0.2), t: (-2.0, 2.0) }.sample(4, 9);
    let prof = hap_profile(&gen, &gen, &fam, &ps, &[1.0, 2.0, 4.0, 8.0], &TailSpec::default(), Some((&sys, SpanKind::Dual))).unwrap();
    assert!(prof.eps_nonincreasing(1e-9) && prof.dist_nonincreasing(1e-9));
    assert!(prof.eps_max[3] <= 0.01 * prof.eps_max[0]);
    assert!(prof.bound_ratio_max.unwrap() <= 1.1);
    let csv = prof.to_csv();
    assert!(csv.starts_with("R,eps_max,dist_max\n") && csv.lines().count() == 5);
    let back: HapProfile = serde_json::from_str(&serde_json::to_string(&prof).unwrap()).unwrap();
    assert_eq!(back, prof);
}

#[test]
fn comparison_factor_decreases_in_r_and_b() {
    let base = comparison_constant(1.0, 1.0, 0.5, 1.0).unwrap();
    let far = comparison_constant(1.0, 1.0, 0.5, 2.0).unwrap();
    let loud = comparison_constant(2.0, 1.0, 0.5, 1.0).unwrap();
    assert!(far.statement < base.statement && far.proof < base.proof);
    assert!(loud.statement < base.statement);
    assert!(comparison_constant(1.0, 1.0, 1.0, 1.0).is_err());
}
