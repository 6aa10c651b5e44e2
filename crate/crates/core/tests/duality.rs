use std::sync::Arc;

use ncprob::exactalg::{Elem, FiniteAlgebra};
use ncprob::fixtures::{base_of_dim, rng};
use ncprob::multifunc::*;
use ncprob::nclattice::{enumerate_nc, NcPartition};
use ncprob::rational::{frac, q};
use proptest::prelude::*;

fn family(seed: u64, s: usize, n: usize, d: usize) -> CumulantFamily {
    CumulantFamily::random(&mut rng(seed), s, n, base_of_dim(d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn round_trip_is_identity(seed in any::<u64>(), s in 1usize..=2, n in 1usize..=4, d in 1usize..=2) {
        let f = family(seed, s, n, d);
        prop_assert_eq!(&moments_to_cumulants(&cumulants_to_moments(&f).unwrap()).unwrap(), &f);
        prop_assert_eq!(&cumulants_to_moments(&moments_to_cumulants(&f).unwrap()).unwrap(), &f);
    }

    /// Each slot of a coefficient is additive and homogeneous.
    #[test]
    fn coefficients_are_multilinear(seed in any::<u64>(), slot in 0usize..3) {
        let f = family(seed, 1, 4, 2);
        let c = &f.coeffs[&vec![0, 0, 0, 0]];
        let mut r = rng(seed ^ 0x55);
        let args: Vec<Elem> = (0..3).map(|_| random_elem(&mut r, 2)).collect();
        let extra = random_elem(&mut r, 2);
        let t = random_q(&mut r);
        let mut summed = args.clone();
        summed[slot] = args[slot].add(&extra.scale(&t));
        let mut alone = args.clone();
        alone[slot] = extra;
        let lhs = c.eval(&summed).unwrap();
        let rhs = c.eval(&args).unwrap().add(&c.eval(&alone).unwrap().scale(&t));
        prop_assert_eq!(lhs, rhs);
    }

    /// Over ℚ nested evaluation is the product over blocks.
    #[test]
    fn scalar_partition_eval_is_block_product(seed in any::<u64>(), n in 1usize..=5) {
        let f = family(seed, 2, n, 1);
        let word: Vec<usize> = (0..n).map(|i| (seed as usize >> i) & 1).collect();
        let ones = vec![Elem(vec![q(1)]); n - 1];
        for pi in enumerate_nc(n).unwrap() {
            let expect = pi.blocks().iter().fold(q(1), |acc, b| {
                let w: Vec<usize> = b.iter().map(|&i| word[i - 1]).collect();
                acc * f.coeffs[&w].eval(&vec![Elem(vec![q(1)]); w.len() - 1]).unwrap().0[0].clone()
            });
            prop_assert_eq!(&partition_eval(&f, &pi, &word, &ones).unwrap().0[0], &expect);
        }
    }
}

#[test]
fn round_trip_over_a_noncommutative_base() {
    let m2 = Arc::new(FiniteAlgebra::full_matrix(2));
    let f = CumulantFamily::random(&mut rng(9), 1, 3, m2);
    assert_eq!(moments_to_cumulants(&cumulants_to_moments(&f).unwrap()).unwrap(), f);
}

#[test]
fn closed_forms_at_extreme_partitions() {
    let d2 = base_of_dim(2).unwrap();
    let f = CumulantFamily::random(&mut rng(4), 1, 3, d2.clone());
    let b = vec![Elem(vec![q(2), frac(-1, 3)]), Elem(vec![frac(1, 2), q(5)])];
    let w = vec![0, 0, 0];
    // 1ₙ: the coefficient itself
    assert_eq!(partition_eval(&f, &NcPartition::one(3), &w, &b).unwrap(), f.coeffs[&w].eval(&b).unwrap());
    // 0ₙ: c₁ b₂ c₁ b₃ c₁
    let c1 = f.coeffs[&vec![0]].eval(&[]).unwrap();
    let expect = d2.mul_all([&c1, &b[0], &c1, &b[1], &c1]);
    assert_eq!(partition_eval(&f, &NcPartition::zero(3), &w, &b).unwrap(), expect);
}

#[test]
fn semicircle_cumulants_from_catalan_moments() {
    let base = base_of_dim(1).unwrap();
    let catalan = [0, 1, 0, 2, 0, 5];
    let m = CumulantFamily::from_fn(1, 5, base, |w, _| Ok(Elem(vec![q(catalan[w.len() - 1])]))).unwrap();
    let c = moments_to_cumulants(&m).unwrap();
    for (w, coeff) in &c.coeffs {
        let expect = q(i64::from(w.len() == 2));
        assert_eq!(coeff.table[0].0[0], expect, "κ_{}", w.len());
    }
}

#[test]
fn degree_cap_is_enforced() {
    let base = base_of_dim(1).unwrap();
    let f = CumulantFamily::random(&mut rng(1), 1, 9, base);
    assert!(cumulants_to_moments(&f).is_err());
}
