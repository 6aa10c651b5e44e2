use std::collections::BTreeSet;

use ncprob::nclattice::*;
use ncprob::oracle;
use ncprob::rational::{q, Q};
use proptest::prelude::*;

const CATALAN: [usize; 8] = [1, 2, 5, 14, 42, 132, 429, 1430];

#[test]
fn counts_match_brute_force() {
    for n in 1..=8 {
        let ours: BTreeSet<Vec<Vec<usize>>> = enumerate_nc(n).unwrap().iter().map(|p| p.blocks().to_vec()).collect();
        let brute: BTreeSet<Vec<Vec<usize>>> = oracle::noncrossing_partitions(n).into_iter().collect();
        assert_eq!(ours.len(), CATALAN[n - 1]);
        assert_eq!(ours, brute, "n = {n}");
    }
}

#[test]
fn leq_is_a_partial_order_with_extremes() {
    for n in 1..=5 {
        let ps = enumerate_nc(n).unwrap();
        let (zero, one) = (NcPartition::zero(n), NcPartition::one(n));
        for a in &ps {
            assert!(leq(&zero, a).unwrap() && leq(a, &one).unwrap());
            assert!(leq(a, a).unwrap());
            for b in &ps {
                if a != b && leq(a, b).unwrap() {
                    assert!(!leq(b, a).unwrap());
                }
                for c in &ps {
                    if leq(a, b).unwrap() && leq(b, c).unwrap() {
                        assert!(leq(a, c).unwrap());
                    }
                }
            }
        }
    }
}

/// μ(θ, π) via the defining recursion Σ_{θ ≤ σ ≤ π} μ(θ, σ) = δ(θ, π).
#[test]
fn mobius_satisfies_its_recursion() {
    for n in 1..=5 {
        let lat = lattice(n).unwrap();
        let m = lat.len();
        for a in 0..m {
            for b in 0..m {
                if !lat.leq_idx(a, b) {
                    continue;
                }
                let sum: Q = (0..m).filter(|&s| lat.leq_idx(a, s) && lat.leq_idx(s, b)).map(|s| lat.mobius_idx(a, s)).sum();
                assert_eq!(sum, q(i64::from(a == b)), "n={n}");
            }
        }
    }
}

#[test]
fn mobius_zero_to_one_is_signed_catalan() {
    for n in 1..=8 {
        let c = if n == 1 { q(1) } else { q(CATALAN[n - 2] as i64) };
        let sign = if n % 2 == 1 { q(1) } else { q(-1) };
        assert_eq!(mobius(&NcPartition::zero(n), &NcPartition::one(n)).unwrap(), sign * c, "n={n}");
    }
}

#[test]
fn zeta_and_mobius_are_inverse() {
    for n in 1..=6 {
        let (mu, zeta, delta) = (IncidenceFunction::mobius(n).unwrap(), IncidenceFunction::zeta(n).unwrap(), IncidenceFunction::delta(n).unwrap());
        assert_eq!(mu.convolve(&zeta).unwrap(), delta);
        assert_eq!(zeta.convolve(&mu).unwrap(), delta);
    }
}

#[test]
fn kreweras_is_an_order_reversing_bijection() {
    for n in 1..=7 {
        let lat = lattice(n).unwrap();
        let image: BTreeSet<usize> = (0..lat.len()).map(|i| lat.kreweras_idx(i)).collect();
        assert_eq!(image.len(), lat.len(), "bijective on NC({n})");
        for i in 0..lat.len() {
            assert_eq!(lat.partitions()[i].len() + lat.partitions()[lat.kreweras_idx(i)].len(), n + 1);
        }
        if n <= 5 {
            for a in 0..lat.len() {
                for b in 0..lat.len() {
                    if lat.leq_idx(a, b) {
                        assert!(lat.leq_idx(lat.kreweras_idx(b), lat.kreweras_idx(a)));
                    }
                }
            }
        }
    }
}

#[test]
fn kreweras_examples() {
    let kr = |n, s: &str| kreweras(&NcPartition::parse(n, s).unwrap()).unwrap().to_string();
    assert_eq!(kr(3, "[[1],[2],[3]]"), "[[1,2,3]]");
    assert_eq!(kr(3, "[[1,2,3]]"), "[[1],[2],[3]]");
    assert_eq!(kr(4, "[[1,4],[2,3]]"), "[[1,3],[2],[4]]");
    assert_eq!(kr(4, "[[1,3],[2],[4]]"), "[[1,2],[3,4]]");
}

fn random_incidence(n: usize, seed: u64) -> IncidenceFunction {
    IncidenceFunction::from_fn(n, |a, b| {
        let h = (seed ^ (a as u64) << 20 ^ b as u64).wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        q(((h >> 33) % 7) as i64 - 3)
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn convolution_is_associative_and_unital(n in 1usize..=5, s in any::<u64>()) {
        let (f, g, h) = (random_incidence(n, s), random_incidence(n, s ^ 1), random_incidence(n, s ^ 2));
        let delta = IncidenceFunction::delta(n).unwrap();
        prop_assert_eq!(f.convolve(&g).unwrap().convolve(&h).unwrap(), f.convolve(&g.convolve(&h).unwrap()).unwrap());
        prop_assert_eq!(&f.convolve(&delta).unwrap(), &f);
        prop_assert_eq!(&delta.convolve(&f).unwrap(), &f);
    }

    #[test]
    fn kreweras_size_identity(n in 1usize..=7, pick in any::<prop::sample::Index>()) {
        let ps = enumerate_nc(n).unwrap();
        let p = &ps[pick.index(ps.len())];
        prop_assert_eq!(p.len() + kreweras(p).unwrap().len(), n + 1);
    }
}
