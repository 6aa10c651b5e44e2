use ncprob::exactalg::{chain_lemma_violations, chain_tower, ConditionalExpectation, Elem, Tower};
use ncprob::fixtures::*;
use ncprob::multifunc::{all_words, random_elem};
use ncprob::rational::{frac, q, Q};
use ncprob::towerops::*;
use proptest::prelude::*;

/// φ(b x b′) = b φ(x) b′ at random points, independent of the basis sweep.
fn bimodule_holds(phi: &ConditionalExpectation, seed: u64) -> bool {
    let mut r = rng(seed);
    let (a, b) = (&phi.source, &phi.target);
    let x = Elem((0..a.dim()).map(|_| ncprob::multifunc::random_q(&mut r)).collect());
    let (u, v) = (random_elem(&mut r, b.dim()), random_elem(&mut r, b.dim()));
    let inside = a.mul_all([&phi.include(&u).unwrap(), &x, &phi.include(&v).unwrap()]);
    phi.apply(&inside).unwrap() == b.mul_all([&u, &phi.apply(&x).unwrap(), &v]) && phi.apply(&phi.include(&u).unwrap()).unwrap() == u
}

fn towers(seed: u64) -> Vec<Tower> {
    let mut r = rng(seed);
    let mut out = vec![tower3().unwrap(), random_two_level_tower(&mut r, 1).unwrap(), random_two_level_tower(&mut r, 2).unwrap()];
    for fx in chain_fixtures().unwrap() {
        out.push(chain_tower(&fx.phi, &fx.chain, &fx.phi0).unwrap().0);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn expectations_are_bimodule_maps(seed in any::<u64>()) {
        for t in towers(seed) {
            prop_assert!(t.violations().is_empty(), "{:?}", t.violations());
            for (j, m) in t.maps.iter().enumerate().skip(1) {
                prop_assert!(bimodule_holds(m, seed ^ j as u64));
            }
        }
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        for t in towers(seed) {
            let d = t.depth();
            for k in 1..=d {
                for i in k + 1..=d {
                    for j in i..=d {
                        let split = t.compose_expectations(k, i - 1).unwrap().after(&t.compose_expectations(i, j).unwrap()).unwrap();
                        prop_assert!(split.same_map(&t.compose_expectations(k, j).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn lemma_holds_on_random_towers(seed in any::<u64>(), d in 1usize..=2) {
        let mut r = rng(seed);
        let t = random_two_level_tower(&mut r, d).unwrap();
        let xs = random_elements(&mut r, &t.levels[2], 2);
        for w in all_words(2, 3) {
            let rep = verify_lemma_e(&t, 1, &xs, &w).unwrap();
            prop_assert!(rep.pass, "{}", rep.to_text());
        }
    }

    #[test]
    fn compatibility_on_random_towers(seed in any::<u64>(), d in 1usize..=2) {
        let t = random_two_level_tower(&mut rng(seed), d).unwrap();
        prop_assert!(verify_compatibility(&t, 1, 2, 2).unwrap().pass);
    }

    /// The direct, symm(b₀) and NC′(n+1) routes agree; only the literal
    /// printed product form may fail, and only for α ≠ 1.
    #[test]
    fn compression_routes_agree(seed in any::<u64>(), d in 1usize..=2, which in 0usize..3) {
        let (alpha, degree) = ([q(1), frac(1, 2), frac(2, 3)][which].clone(), if d == 1 { 4 } else { 3 });
        let s = compression_spec(seed, d, degree, &alpha).unwrap();
        let p = s.index_of("p").unwrap();
        let r = verify_compression(&s, &[0], &[1], p).unwrap();
        for c in &r.checks {
            prop_assert!(c.pass || (c.identity.contains("(as printed)") && alpha != q(1)), "{}", c.identity);
        }
    }

    #[test]
    fn lift_at_unit_arguments_is_scalar_times_unit(seed in any::<u64>(), w in 0i64..=4) {
        let mut r = rng(seed);
        let spec = random_spec(&mut r, &["x", "y"], 3, base_of_dim(1).unwrap()).unwrap();
        let phi0 = diagonal_state(frac(w, 4)).unwrap();
        let lifted = lift_scalar_cumulants(&spec, &phi0).unwrap();
        let (sc, lc) = (spec.cumulant_family().unwrap(), lifted.cumulant_family().unwrap());
        for (word, c) in &sc.coeffs {
            let ones = vec![lifted.base.one(); word.len() - 1];
            let k: &Q = &c.table[0].0[0];
            prop_assert_eq!(lc.coeffs[word].eval(&ones).unwrap(), lifted.base.scalar(k));
        }
    }
}

#[test]
fn chain_corners_satisfy_the_lemmas_and_telescope() {
    for fx in chain_fixtures().unwrap() {
        let a = &fx.phi.source;
        assert!(chain_lemma_violations(a, &fx.chain).unwrap().is_empty(), "{}", fx.name);
        let (t, alphas) = chain_tower(&fx.phi, &fx.chain, &fx.phi0).unwrap();
        assert_eq!(alphas.len(), fx.chain.len());
        // φ_{j+1} φ_{j+2} (x) = p_j x p_j
        for j in 1..t.depth().saturating_sub(1) {
            let e = t.compose_expectations(j + 1, j + 2).unwrap();
            let pm = a.to_matrix(&fx.chain[j - 1]);
            for (i, x) in t.levels[j + 2].basis.iter().enumerate() {
                let direct = t.levels[j].coords_of(&pm.mul(x).unwrap().mul(&pm).unwrap()).unwrap();
                assert_eq!(e.apply(&t.levels[j + 2].basis_elem(i)).unwrap(), direct, "{} j={j}", fx.name);
            }
        }
    }
}

#[test]
fn chain_tower_reports_pass() {
    for fx in chain_fixtures().unwrap() {
        let r = verify_chain_tower(&fx.phi, &fx.chain, &fx.phi0).unwrap();
        assert!(r.pass, "{}", r.to_text());
    }
}

#[test]
fn ladder_fixture_and_its_perturbation() {
    let (good, alphas) = diagonal_ladder().unwrap();
    assert_eq!(alphas, vec![frac(1, 2), frac(3, 4)]);
    assert!(verify_ladder(&good).unwrap().pass);
    let (bad, _) = perturbed_ladder().unwrap();
    assert!(!verify_ladder(&bad).unwrap().pass);
    assert!(matches!(ladder_expectation(&bad, 0, 1), Err(ncprob::Error::Contract(_))));
    assert!(ladder_expectation(&bad, 0, 2).is_ok(), "the perturbed rung sits outside the (0, 2) square");
}

#[test]
fn level_theorems_separate_free_from_dependent() {
    let (x, y) = (vec![0], vec![1]);
    assert!(verify_scalar_levels(&scalar_layers_free().unwrap(), &x, &y, 1, 2).unwrap().pass);
    assert!(!verify_scalar_levels(&scalar_layers_dependent().unwrap(), &x, &y, 1, 2).unwrap().pass);
    assert!(verify_amalgamated_levels(&amalgamated_layers_free().unwrap(), &x, &y, 1, 1, 2).unwrap().pass);
    assert!(!verify_amalgamated_levels(&amalgamated_layers_dependent().unwrap(), &x, &y, 1, 1, 2).unwrap().pass);
}

/// Low-order tower cumulants against moments taken directly from E₂.
#[test]
fn scalar_cumulants_match_direct_moments() {
    let (t, xs) = lemma_fixture(LEMMA_SEEDS[0].0, LEMMA_SEEDS[0].1).unwrap();
    let e = t.scalar_functional(2).unwrap();
    let a = &t.levels[2];
    let m = |w: &[usize]| e.apply(&a.mul_all(w.iter().map(|&i| &xs[i]))).unwrap().0[0].clone();
    let k2 = scalar_tower_cumulant(&t, 1, &xs, &[0, 1]).unwrap();
    assert_eq!(k2, m(&[0, 1]) - m(&[0]) * m(&[1]));
    assert_eq!(scalar_tower_cumulant(&t, 1, &xs, &[1]).unwrap(), m(&[1]));
}
