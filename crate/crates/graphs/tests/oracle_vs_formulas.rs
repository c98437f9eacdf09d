//! The oracle's measurements on constructed graphs against the closed-form
//! predictions of the parameter calculus.

use geodrg_core::filters::Status;
use geodrg_core::rational::to_i64;
use geodrg_core::{array_to_geometric, classical_eigenvalues, classical_geometric, classical_to_array};
use geodrg_graphs::families::{bilinear_embedding, build_bilinear, build_grassmann, build_grid, clique_extension, Family};
use geodrg_graphs::oracle::{
    measure_phi, measure_tau, verify_all, verify_drg, DistanceData, DrgOutcome, LineGeometry, VerifyOptions,
};
use proptest::prelude::*;

/// Measured array, φ and τ against the classical-parameter predictions.
fn round_trip(fam: Family) {
    let cp = fam.classical().expect("classical family");
    let (g, cover) = fam.build().unwrap();
    let cover = cover.unwrap();
    let dist = DistanceData::new(&g).unwrap();
    let arr = match verify_drg(&g, &dist).unwrap() {
        DrgOutcome::Regular(a) => a,
        DrgOutcome::Violation(v) => panic!("{fam:?}: {v}"),
    };
    assert_eq!(arr, classical_to_array(&cp).unwrap(), "{fam:?}");
    // closed form where it applies, otherwise the array inverted at r = -θ_min
    let geo = classical_geometric(&cp).unwrap_or_else(|_| {
        let theta = classical_eigenvalues(&cp).unwrap().theta_min().exact().cloned().unwrap();
        array_to_geometric(&arr, -to_i64(&theta).unwrap()).unwrap()
    });
    let geom = LineGeometry::new(&dist, &cover);
    let phi = measure_phi(&dist, &geom, &cover).unwrap();
    let tau = measure_tau(&dist, &geom, &cover).unwrap();
    assert_eq!(&phi[..arr.diameter()], geo.phis(), "{fam:?}");
    assert_eq!(tau, geo.taus(), "{fam:?}");
}

#[test]
fn named_families_match_formulas() {
    for (name, args) in [
        ("johnson", &[6u64, 3][..]),
        ("johnson", &[8, 3]),
        ("johnson", &[9, 4]),
        ("hamming", &[3, 3]),
        ("hamming", &[4, 2]),
        ("bilinear", &[2, 2, 2]),
        ("bilinear", &[2, 3, 2]),
        ("bilinear", &[2, 2, 3]),
        ("grassmann", &[2, 4, 2]),
        ("grassmann", &[3, 4, 2]),
        ("grassmann", &[2, 5, 2]),
    ] {
        round_trip(Family::from_args(name, args).unwrap());
    }
}

#[test]
fn full_runs_pass_and_respect_implications() {
    for (name, args) in [("johnson", &[8u64, 3][..]), ("hamming", &[3, 3]), ("bilinear", &[2, 2, 2]), ("johnson", &[7, 3])] {
        let (g, c) = Family::from_args(name, args).unwrap().build().unwrap();
        let r = verify_all(&g, c.as_ref(), &VerifyOptions { sigma_cap: None, ..Default::default() });
        assert_eq!(r.overall, Status::Pass, "{name} {args:?}: {:#?}", r.failures().collect::<Vec<_>>());
        let st = |n: &str| r.check(n).unwrap().status;
        let phi1 = r.derived.geometric.as_ref().unwrap().phi(1);
        if st("els") == Status::Pass && phi1 >= 2 {
            assert_eq!(st("dual_pasch"), Status::Pass, "{name}");
        }
    }
}

#[test]
fn clique_extension_is_not_distance_regular() {
    let g = clique_extension(&build_grid(3, 3).unwrap(), 2).unwrap();
    let r = verify_all(&g, None, &VerifyOptions::default());
    assert_eq!(r.overall, Status::Fail);
    assert_eq!(r.checks.last().unwrap().name, "distance_regular");
}

#[test]
fn bilinear_forms_sit_inside_grassmann() {
    let (bil, _) = build_bilinear(2, 2, 2).unwrap();
    let (grass, _) = build_grassmann(2, 4, 2).unwrap();
    let map = bilinear_embedding(&bil, &grass, 2, 2).unwrap();
    for (a, b) in bil.edges() {
        assert!(grass.adjacent(map[a as usize], map[b as usize]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn johnson_round_trip(n in 4usize..=10, d in 2usize..=5) {
        prop_assume!(n >= 2 * d);
        round_trip(Family::Johnson { n, d });
    }

    #[test]
    fn hamming_round_trip(d in 2usize..=4, e in 2usize..=4) {
        round_trip(Family::Hamming { d, e });
    }

    #[test]
    fn bilinear_round_trip(e in 2usize..=3, q in prop::sample::select(vec![2u64, 3])) {
        round_trip(Family::Bilinear { d: 2, e, q });
    }
}
