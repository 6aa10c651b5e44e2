//! Variables free from B under a scalar state φ₀: their B-valued cumulants
//! factor as (Π φ₀(b_t))·k_n·1_B. Lifting a scalar cumulant model this way
//! and checking the lift against scalar free-product moments and against
//! the freeness calculus over B.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{ConditionalExpectation, Elem, FiniteAlgebra};
use crate::freemodel::{
    composite_moment_family, first_mixed_nonzero, Component, CompositeMoments, CumulantSpec, Poly,
};
use crate::multifunc::{all_words, basis_words, cumulants_to_moments, fmt_word, moments_to_cumulants, CumulantFamily, MultiCoeff};
use crate::nclattice::lattice;
use crate::rational::{fmt_q, Q};
use crate::report::Report;
use crate::series::{add, boxed_amalgamated, boxed_scalar, concat_union, BSeries, SeriesKind};

fn check_state(phi0: &ConditionalExpectation) -> Result<()> {
    if phi0.target.dim() != 1 {
        return Err(Error::Dimension("φ₀ must be scalar-valued".into()));
    }
    let v = phi0.apply(&phi0.source.one())?;
    if v != phi0.target.one() {
        return Err(Error::Contract(format!("φ₀(1) = {} but must be 1", fmt_q(&v.0[0]))));
    }
    Ok(())
}

fn scalar(e: &Elem) -> Q {
    e.0[0].clone()
}

/// φ₀ of every basis element of B.
fn state_values(phi0: &ConditionalExpectation) -> Result<Vec<Q>> {
    (0..phi0.source.dim()).map(|i| phi0.apply(&phi0.source.basis_elem(i)).map(|e| scalar(&e))).collect()
}

/// The table (Π φ₀(e_{j_t}))·k·1_B for each scalar coefficient k.
pub fn lift_family(family: &CumulantFamily, phi0: &ConditionalExpectation) -> Result<CumulantFamily> {
    if family.base.dim() != 1 {
        return Err(Error::Dimension("only scalar families lift".into()));
    }
    check_state(phi0)?;
    let b = phi0.source.clone();
    let vals = state_values(phi0)?;
    let mut coeffs = BTreeMap::new();
    for (w, c) in &family.coeffs {
        let k = scalar(&c.table[0]);
        let mc = MultiCoeff::from_fn(w.len(), b.dim(), |bw| {
            let f = bw.iter().fold(k.clone(), |acc, &j| acc * &vals[j]);
            Ok(b.scalar(&f))
        })?;
        coeffs.insert(w.clone(), mc);
    }
    Ok(CumulantFamily { s: family.s, degree: family.degree, base: b, coeffs })
}

/// The B-valued model of scalar variables free from B under φ₀, one table
/// component per scalar component so that freeness carries over.
pub fn lift_scalar_cumulants(spec: &CumulantSpec, phi0: &ConditionalExpectation) -> Result<CumulantSpec> {
    if spec.base.dim() != 1 {
        return Err(Error::Dimension("lift needs a scalar-valued model".into()));
    }
    let comps = spec
        .components
        .iter()
        .map(|c| match c {
            Component::Table(f) => Ok(Component::Table(lift_family(f, phi0)?)),
            Component::Chain(_) => Err(Error::Contract("projections do not lift; adjoin them after lifting".into())),
        })
        .collect::<Result<_>>()?;
    CumulantSpec::new(spec.labels.clone(), phi0.source.clone(), spec.degree, comps)
}

/// φ₀(x₁ b₁ x₂ b₂ ⋯ xₙ bₙ) for x free from B: Σ_π κ_π[x] · φ₀_{Kr(π)}[b],
/// with bₙ = 1. The base must be commutative for block products to be
/// order independent; blocks are multiplied in increasing order anyway.
fn free_product_moment(scalar_cumulants: &CumulantFamily, b: &FiniteAlgebra, phi0: &ConditionalExpectation, word: &[usize], bs: &[Elem]) -> Result<Q> {
    let n = word.len();
    let lat = lattice(n)?;
    let mut acc = Q::zero();
    for (i, pi) in lat.partitions().iter().enumerate() {
        let mut term = Q::one();
        for blk in pi.blocks() {
            let w: Vec<usize> = blk.iter().map(|&v| word[v - 1]).collect();
            term *= scalar(&scalar_cumulants.coeffs[&w].table[0]);
        }
        if term.is_zero() {
            continue;
        }
        let kr = &lat.partitions()[lat.kreweras_idx(i)];
        for blk in kr.blocks() {
            let prod = b.mul_all(blk.iter().map(|&v| &bs[v - 1]));
            term *= scalar(&phi0.apply(&prod)?);
        }
        acc += term;
    }
    Ok(acc)
}

/// Factorization of lifted cumulants checked two ways: at the all-unit
/// basis word the lift is k·1_B, and φ₀ of every lifted B-valued moment
/// equals the scalar moment of x's free from B.
pub fn verify_lift(spec: &CumulantSpec, phi0: &ConditionalExpectation) -> Result<Report> {
    let lifted = lift_scalar_cumulants(spec, phi0)?;
    let b = lifted.base.clone();
    let sc = spec.cumulant_family()?;
    let lc = lifted.cumulant_family()?;
    let lm = cumulants_to_moments(&lc)?;
    let mut r = Report::new("scalar lift factorization");

    let mut unit_diff = None;
    for w in all_words(spec.s(), spec.degree) {
        let ones = vec![b.one(); w.len() - 1];
        if lc.coeffs[&w].eval(&ones)? != b.scalar(&scalar(&sc.coeffs[&w].table[0])) {
            unit_diff = Some(format!("word {}", fmt_word(&w)));
            break;
        }
    }
    r.flag("lifted cumulant at unit arguments = k·1_B", unit_diff.is_none(), unit_diff);

    let mut moment_diff = None;
    'words: for w in all_words(spec.s(), spec.degree) {
        for bw in basis_words(b.dim(), w.len() - 1) {
            let args: Vec<Elem> = bw.iter().map(|&j| b.basis_elem(j)).collect();
            let lhs = scalar(&phi0.apply(&lm.coeffs[&w].eval(&args)?)?);
            let mut shifted = args.clone();
            shifted.push(b.one());
            let rhs = free_product_moment(&sc, &b, phi0, &w, &shifted)?;
            if lhs != rhs {
                let at: Vec<String> = bw.iter().map(|j| format!("e{}", j + 1)).collect();
                moment_diff = Some(format!("word {} at ({}): {} vs {}", fmt_word(&w), at.join(","), fmt_q(&lhs), fmt_q(&rhs)));
                break 'words;
            }
        }
    }
    r.flag("φ₀ of lifted moments = scalar moments with B free", moment_diff.is_none(), moment_diff);
    Ok(r)
}

fn r_of(spec: &CumulantSpec, polys: Vec<Poly>) -> Result<BSeries> {
    let m = composite_moment_family(&CompositeMoments::new(spec, polys)?, spec.degree)?;
    BSeries::new(SeriesKind::RTransform, moments_to_cumulants(&m)?)
}

/// Freeness over B of lifted X, Y and the B-valued sum and product rules,
/// each also compared with the lift of the scalar calculus.
pub fn verify_lifted_freeness(spec: &CumulantSpec, xs: &[usize], ys: &[usize], phi0: &ConditionalExpectation) -> Result<Report> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::Dimension(format!("{} x-variables vs {} y-variables", xs.len(), ys.len())));
    }
    let lifted = lift_scalar_cumulants(spec, phi0)?;
    let s = xs.len();
    let both: Vec<usize> = xs.iter().chain(ys).copied().collect();
    let groups = [(0..s).collect::<Vec<_>>(), (s..2 * s).collect()];
    let mut r = Report::new("lifted freeness over B");

    let scalar_joint = spec.restrict(&both)?.cumulant_family()?;
    let hyp = first_mixed_nonzero(&scalar_joint, &groups)?;
    r.flag("X and Y free under φ₀", hyp.is_none(), hyp.map(|w| format!("mixed cumulant at {}", fmt_word(&w))));
    let joint = lifted.restrict(&both)?.cumulant_family()?;
    let mixed = first_mixed_nonzero(&joint, &groups)?;
    r.flag("lifted X and Y free over B", mixed.is_none(), mixed.map(|w| format!("mixed cumulant at {}", fmt_word(&w))));

    let series = |f: CumulantFamily| BSeries::new(SeriesKind::RTransform, f);
    let rx = series(lifted.restrict(xs)?.cumulant_family()?)?;
    let ry = series(lifted.restrict(ys)?.cumulant_family()?)?;
    r.families("R of X ∪ Y = R_X + R_Y", &joint, &concat_union(&rx, &ry)?.family);

    let sums: Vec<Poly> = (0..s).map(|i| Poly::sum(&Poly::var(xs[i]), &Poly::var(ys[i]))).collect();
    let rsum = r_of(&lifted, sums.clone())?;
    r.families("R of x+y = R_X + R_Y", &rsum.family, &add(&rx, &ry)?.family);
    r.families("R of x+y = lift of scalar r of x+y", &rsum.family, &lift_family(&r_of(spec, sums)?.family, phi0)?);

    let prods: Vec<Poly> = (0..s).map(|i| Poly::monomial(vec![xs[i], ys[i]])).collect();
    let rprod = r_of(&lifted, prods)?;
    r.families("R of xy = R_X boxed R_Y trivial", &rprod.family, &boxed_amalgamated(&rx, &ry.trivial())?.family);
    let sx = series(spec.restrict(xs)?.cumulant_family()?)?;
    let sy = series(spec.restrict(ys)?.cumulant_family()?)?;
    r.families("R of xy = lift of scalar r_X boxed r_Y", &rprod.family, &lift_family(&boxed_scalar(&sx, &sy)?.family, phi0)?);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::rational::{frac, q};
    use std::sync::Arc;

    fn weighted_state(w: Q) -> ConditionalExpectation {
        let b = Arc::new(FiniteAlgebra::diagonal(2));
        let c = Arc::new(FiniteAlgebra::scalars());
        let m = Matrix::from_rows(vec![vec![w.clone(), Q::one() - w]]).unwrap();
        let inc = Matrix::from_rows(vec![vec![q(1)], vec![q(1)]]).unwrap();
        ConditionalExpectation::new(b, c, m, inc).unwrap()
    }

    #[test]
    fn first_coordinate_state_gives_explicit_tensor() {
        let mut f = CumulantFamily::zero(1, 3, Arc::new(FiniteAlgebra::scalars()));
        f.coeffs.get_mut(&vec![0, 0]).unwrap().table[0] = Elem(vec![q(5)]);
        let l = lift_family(&f, &weighted_state(q(1))).unwrap();
        let t = &l.coeffs[&vec![0, 0]].table;
        assert_eq!(t[0], Elem(vec![q(5), q(5)]));
        assert_eq!(t[1], Elem(vec![q(0), q(0)]));
    }

    #[test]
    fn non_unital_state_is_rejected() {
        let f = CumulantFamily::zero(1, 2, Arc::new(FiniteAlgebra::scalars()));
        let mut bad = weighted_state(frac(1, 2));
        bad.matrix = bad.matrix.scale(&q(2));
        assert!(matches!(lift_family(&f, &bad), Err(Error::Contract(_))));
    }
}
