mod common;

use common::*;
use finmm::number::{int, ratio};
use finmm::*;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn space_file_round_trips(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = rng(seed);
        let x = random_mm(&mut rng, n);
        let text = SpaceDoc::from_mm(&x).to_text();
        let back = SpaceDoc::parse(&text).unwrap().to_mm().unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(SpaceDoc::from_mm(&back).to_text(), text);
    }

    #[test]
    fn certificate_file_round_trips(seed in any::<u64>(), a in 1usize..3, b in 1usize..3) {
        let mut rng = rng(seed);
        let (x, y) = (random_mm(&mut rng, a), random_mm(&mut rng, b));
        let res = box_exact(&x, &y).unwrap();
        let cert = Certificate { pi: res.coupling, s: res.relation, claimed_value: res.value.clone() };
        let back = Certificate::parse(&cert.to_text()).unwrap();
        prop_assert_eq!(&back, &cert);
        let check = back.check(&x, &y).unwrap();
        prop_assert!(check.holds());
        prop_assert_eq!(check.recomputed, res.value);
    }

    #[test]
    fn gh_is_relabeling_invariant_and_bounded_by_diameters(seed in any::<u64>(), a in 1usize..5, b in 1usize..5) {
        let mut rng = rng(seed);
        let (x, y) = (random_metric(&mut rng, a), random_metric(&mut rng, b));
        let sigma = random_perm(&mut rng, a);
        let v = gh_exact(&x, &y).unwrap().value;
        prop_assert_eq!(&gh_exact(&relabel_metric(&x, &sigma), &y).unwrap().value, &v);
        let half = ratio(1, 2);
        prop_assert!(v >= (x.diameter() - y.diameter()).abs() * &half);
        prop_assert!(v <= x.diameter().max(y.diameter()) * &half);
    }

    #[test]
    fn gh_pruning_does_not_change_the_value(seed in any::<u64>(), a in 1usize..6, b in 1usize..6) {
        let mut rng = rng(seed);
        let (x, y) = (random_metric(&mut rng, a), random_metric(&mut rng, b));
        let plain = gh_exact(&x, &y).unwrap();
        let pruned = gh_exact_with(&x, &y, &GhOptions { branch_and_bound: true, ..GhOptions::default() }).unwrap();
        prop_assert_eq!(&plain.value, &pruned.value);
        prop_assert!(is_correspondence(&pruned.witness, a, b));
        prop_assert_eq!(distortion(&pruned.witness, &x, &y).unwrap() * ratio(1, 2), pruned.value);
    }

    #[test]
    fn box_is_relabeling_invariant_and_at_most_one(seed in any::<u64>(), a in 1usize..4, b in 1usize..4) {
        let mut rng = rng(seed);
        let (x, y) = (random_mm(&mut rng, a), random_mm(&mut rng, b));
        let v = box_exact(&x, &y).unwrap().value;
        let sigma = random_perm(&mut rng, b);
        prop_assert_eq!(&box_exact(&x, &relabel_mm(&y, &sigma)).unwrap().value, &v);
        prop_assert!(v <= Real::one());
        prop_assert!(v >= Real::zero());
    }

    #[test]
    fn prokhorov_is_a_metric_bounded_by_one(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = rng(seed);
        let z = random_metric(&mut rng, n);
        let (a, b, c) = (random_mass(&mut rng, n), random_mass(&mut rng, n), random_mass(&mut rng, n));
        let ab = prokhorov(&a, &b, &z).unwrap();
        prop_assert_eq!(&ab, &prokhorov(&b, &a, &z).unwrap());
        prop_assert_eq!(&ab, &prokhorov_candidates(&a, &b, &z));
        prop_assert!(ab <= Real::one());
        let ac = prokhorov(&a, &c, &z).unwrap();
        let bc = prokhorov(&b, &c, &z).unwrap();
        prop_assert!(ac <= &ab + &bc);
    }

    #[test]
    fn comb_certificates_hold(seed in any::<u64>(), depth in 1usize..4, mesh in 1usize..5) {
        let mut rng = rng(seed);
        let mut param = || (0..depth).map(|_| ratio(rng.gen_range(0..=8), 8)).collect::<Vec<_>>();
        let (s, t) = (param(), param());
        let w = comb_witness(&s, &t, mesh, None).unwrap();
        prop_assert_eq!(w.mass(), int(1));
        prop_assert!(w.distortion <= w.eps_bound);
        let cs = build_comb(&CombParams::new(s, mesh).unwrap());
        let ct = build_comb(&CombParams::new(t, mesh).unwrap());
        prop_assert_eq!(cs.len(), depth * mesh + 1);
        prop_assert!(is_coupling(&w.coupling, cs.mass(), ct.mass()));
        let cert = Certificate { pi: w.coupling.clone(), s: w.relation.clone(), claimed_value: w.certified_value() };
        prop_assert!(cert.check(&cs, &ct).unwrap().holds());
    }
}

#[test]
fn gh_between_combs_is_at_most_their_hausdorff_distance() {
    let mut rng = rng(31);
    for _ in 0..20 {
        let depth = rng.gen_range(1..=2);
        let mesh = rng.gen_range(1..=2);
        let mut param = || (0..depth).map(|_| ratio(rng.gen_range(0..=4), 4)).collect::<Vec<_>>();
        let cs = build_comb(&CombParams::new(param(), mesh).unwrap());
        let ct = build_comb(&CombParams::new(param(), mesh).unwrap());
        let gh = gh_exact(cs.space(), ct.space()).unwrap().value;
        assert!(gh <= hausdorff_l1(cs.space(), ct.space()).unwrap());
    }
}

#[test]
fn identical_combs_have_zero_hausdorff_and_box_distance() {
    let t = vec![ratio(1, 2), ratio(1, 4)];
    let c = build_comb(&CombParams::new(t.clone(), 2).unwrap());
    assert!(hausdorff_l1(c.space(), c.space()).unwrap().is_zero());
    assert!(box_exact(&c, &c).unwrap().value.is_zero());
}

#[test]
fn lifts_of_isometric_spaces_are_at_box_distance_zero() {
    let mut rng = rng(77);
    for n in 1..=3 {
        let x = random_metric(&mut rng, n);
        let sigma = random_perm(&mut rng, n);
        let y = relabel_metric(&x, &sigma);
        assert!(box_exact(&uniform_lift(&x), &uniform_lift(&y)).unwrap().value.is_zero());
    }
}
