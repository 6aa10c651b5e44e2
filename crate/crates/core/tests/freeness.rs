use ncprob::fixtures::{base_of_dim, boxed_counterexample, random_free_pair, rng, search_boxed_counterexample, BOXED_COUNTEREXAMPLE_BITS};
use ncprob::freemodel::*;
use ncprob::multifunc::CumulantFamily;
use ncprob::rational::{frac, q};
use ncprob::series::{add, boxed_amalgamated, boxed_scalar, BSeries, SeriesKind};
use ncprob::Error;
use proptest::prelude::*;

fn pair(seed: u64, degree: usize, d: usize) -> (CumulantSpec, CumulantSpec) {
    let u = random_free_pair(&mut rng(seed), 1, degree, d).unwrap();
    (u.restrict(&[0]).unwrap(), u.restrict(&[1]).unwrap())
}

fn series(seed: u64, s: usize, n: usize, d: usize) -> BSeries {
    BSeries::new(SeriesKind::RTransform, CumulantFamily::random(&mut rng(seed), s, n, base_of_dim(d).unwrap())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn free_add_two_paths_agree(seed in any::<u64>(), d in 1usize..=2) {
        let (x, y) = pair(seed, if d == 1 { 5 } else { 4 }, d);
        prop_assert_eq!(free_add(&x, &y).unwrap().cumulant_family().unwrap(), free_add_via_moments(&x, &y).unwrap().cumulant_family().unwrap());
    }

    #[test]
    fn free_mul_two_paths_agree(seed in any::<u64>(), d in 1usize..=2) {
        let (x, y) = pair(seed, if d == 1 { 5 } else { 4 }, d);
        prop_assert_eq!(free_mul(&x, &y).unwrap().cumulant_family().unwrap(), free_mul_via_moments(&x, &y).unwrap().cumulant_family().unwrap());
    }

    #[test]
    fn union_is_free_until_a_mixed_cumulant_moves(seed in any::<u64>(), d in 1usize..=2, which in 0usize..4) {
        let u = random_free_pair(&mut rng(seed), 1, 3, d).unwrap();
        prop_assert!(are_free(&u, &[vec![0], vec![1]]).unwrap());
        let mixed = [vec![0, 1], vec![1, 0], vec![0, 0, 1], vec![1, 0, 1]][which].clone();
        let mut f = u.cumulant_family().unwrap();
        let c = f.coeffs.get_mut(&mixed).unwrap();
        c.table[0].0[0] += q(1);
        let perturbed = CumulantSpec::from_family(f, Some(u.labels.clone())).unwrap();
        prop_assert!(!are_free(&perturbed, &[vec![0], vec![1]]).unwrap());
    }

    #[test]
    fn relabeling_keeps_the_distribution(seed in any::<u64>()) {
        let u = random_free_pair(&mut rng(seed), 1, 3, 2).unwrap();
        let mut v = u.clone();
        v.labels = vec!["a".into(), "b".into()];
        prop_assert_eq!(u.moment_family().unwrap(), v.moment_family().unwrap());
        prop_assert_eq!(v.index_of("b").unwrap(), 1);
    }

    #[test]
    fn series_addition_is_a_commutative_monoid(seed in any::<u64>(), d in 1usize..=2) {
        let (f, g, h) = (series(seed, 2, 3, d), series(seed ^ 1, 2, 3, d), series(seed ^ 2, 2, 3, d));
        let zero = BSeries::new(SeriesKind::RTransform, CumulantFamily::zero(2, 3, base_of_dim(d).unwrap())).unwrap();
        prop_assert_eq!(add(&add(&f, &g).unwrap(), &h).unwrap().family, add(&f, &add(&g, &h).unwrap()).unwrap().family);
        prop_assert_eq!(add(&f, &g).unwrap().family, add(&g, &f).unwrap().family);
        prop_assert_eq!(&add(&f, &zero).unwrap().family, &f.family);
    }

    #[test]
    fn degree_one_boxed_product_is_coefficientwise(seed in any::<u64>()) {
        let (f, g) = (series(seed, 2, 1, 1), series(seed ^ 7, 2, 1, 1));
        let h = boxed_scalar(&f, &g).unwrap();
        for i in 0..2 {
            let w = vec![i];
            let expect = &f.family.coeffs[&w].table[0].0[0] * &g.family.coeffs[&w].table[0].0[0];
            prop_assert_eq!(&h.family.coeffs[&w].table[0].0[0], &expect);
        }
    }

    #[test]
    fn free_pair_identities(seed in any::<u64>(), d in 1usize..=2) {
        let u = random_free_pair(&mut rng(seed), 1, 4, d).unwrap();
        let r = verify_free_pair(&u, &[0], &[1]).unwrap();
        prop_assert!(r.pass, "{}", r.to_text());
    }
}

#[test]
fn amalgamated_boxed_product_needs_a_trivial_right_factor() {
    let (f, g) = (series(3, 1, 3, 2), series(4, 1, 3, 2));
    assert!(matches!(boxed_amalgamated(&f, &g), Err(Error::Contract(_))));
    assert!(boxed_amalgamated(&f, &g.trivial()).is_ok());
}

#[test]
fn counterexample_search_is_reproducible() {
    assert_eq!(search_boxed_counterexample().unwrap(), BOXED_COUNTEREXAMPLE_BITS);
    let c = boxed_counterexample().unwrap();
    assert_ne!(c.actual, c.unrestricted);
    assert_eq!(c.spec.base.dim(), 2);
}

#[test]
fn projection_moments_are_alpha() {
    let base = base_of_dim(1).unwrap();
    let x = CumulantSpec::from_family(CumulantFamily::zero(1, 3, base), None).unwrap();
    let s = adjoin_projection(&x, &frac(2, 3), "p").unwrap();
    let p = s.index_of("p").unwrap();
    for n in 1..=3 {
        let one = vec![s.base.one(); n - 1];
        assert_eq!(s.joint_moment(&vec![p; n], &one).unwrap().0[0], frac(2, 3));
    }
    assert!(adjoin_projection(&x, &q(0), "p").is_err());
}
