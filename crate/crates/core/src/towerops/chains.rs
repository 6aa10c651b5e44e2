//! Scalar-valued chains of projections p₁ ≤ p₂ ≤ … with φ(p_j) = α_j·1_B.
//!
//! Concretely: the tower B ⊂ p₁Ap₁ ⊂ p₂Ap₂ ⊂ … and its corner lemmas.
//! Abstractly: p_jXp_j and p_jYp_j under ψ_k(z) = α_{k+1}⁻¹ φ(p_{k+1} z p_{k+1}),
//! the B-valued reading of α_{k+1}⁻¹ E_{k+1,j} (k = 0 gives α₁⁻¹ E_{1,j}).

use crate::error::{Error, Result};
use crate::exactalg::{chain_lemma_violations, chain_tower, ConditionalExpectation, Elem};
use crate::freemodel::{first_mixed_nonzero, Component, CumulantSpec, Poly};
use crate::linalg::Matrix;
use crate::multifunc::fmt_word;
use crate::report::Report;
use crate::series::{add, boxed_amalgamated, concat_union, BSeries, SeriesKind};

use super::compression::{compressed_cumulants, projection_value, sandwich, scaled_arguments};

/// Tower invariants, corner lemmas, telescoping φ_{j+1}φ_{j+2}(x) = p_j x p_j,
/// and E_{1,j}(p₁⋯p_j) = E_{1,j}(p₁) = φ(p₁) in the unnormalized convention.
pub fn verify_chain_tower(phi: &ConditionalExpectation, chain: &[Elem], phi0: &ConditionalExpectation) -> Result<Report> {
    let (tower, alphas) = chain_tower(phi, chain, phi0)?;
    let a = &phi.source;
    let mut r = Report::new(format!("chain tower of depth {}", tower.depth()));
    let v = tower.violations();
    r.flag("every level map is a conditional expectation", v.is_empty(), v.first().cloned());
    let v = chain_lemma_violations(a, chain)?;
    r.flag("corner lemmas: px = xp, p_i p_j = p_min, (p_j⋯p_N)A(p_j⋯p_N) = p_jAp_j", v.is_empty(), v.first().cloned());

    for j in 1..tower.depth().saturating_sub(1) {
        let e = tower.compose_expectations(j + 1, j + 2)?;
        let (hi, lo) = (&tower.levels[j + 2], &tower.levels[j]);
        let pm = a.to_matrix(&chain[j - 1]);
        let cols: Vec<_> = hi
            .basis
            .iter()
            .map(|x| Ok(lo.coords_of(&pm.mul(x)?.mul(&pm)?)?.0))
            .collect::<Result<_>>()?;
        let direct = Matrix::from_columns(lo.dim(), &cols);
        let pass = e.matrix == direct;
        r.flag(format!("φ_{}φ_{}(x) = p_{j} x p_{j}", j + 1, j + 2), pass, (!pass).then(|| "maps differ".into()));
    }

    let alpha1 = &alphas[0];
    let phi_p1 = phi.apply(&chain[0])?;
    for j in 1..=tower.depth() {
        let e = tower.compose_expectations(1, j)?;
        let level = &tower.levels[j];
        let as_level = |x: &Elem| level.coords_of(&a.to_matrix(x));
        let prod = a.mul_all(chain[..j].iter());
        // chain_tower normalizes level 1, so rescale by α₁
        let lhs = e.apply(&as_level(&prod)?)?.scale(alpha1);
        let mid = e.apply(&as_level(&chain[0])?)?.scale(alpha1);
        r.elems(format!("E_(1,{j})(p_1⋯p_{j}) = E_(1,{j})(p_1)"), &lhs, &mid);
        r.elems(format!("E_(1,{j})(p_1) = φ(p_1) = α_1"), &mid, &phi_p1);
    }
    Ok(r)
}

fn chain_positions(spec: &CumulantSpec, chain: &[usize]) -> Result<usize> {
    let (c0, _) = spec.locate(*chain.first().ok_or_else(|| Error::Contract("empty chain".into()))?)?;
    if !matches!(spec.components[c0], Component::Chain(_)) {
        return Err(Error::Contract(format!("{} is not a projection", spec.labels[chain[0]])));
    }
    let mut last = None;
    for &p in chain {
        let (ci, li) = spec.locate(p)?;
        if ci != c0 || last.is_some_and(|l| l >= li) {
            return Err(Error::Contract("chain letters must increase within one chain".into()));
        }
        last = Some(li);
    }
    Ok(c0)
}

fn series(f: crate::multifunc::CumulantFamily) -> Result<BSeries> {
    BSeries::new(SeriesKind::RTransform, f)
}

/// p_jXp_j and p_jYp_j under ψ_k: normalization, freeness transfer, the
/// reduction to compression by p_{k+1}, and the joint/sum/product rules,
/// including the product against R_Y^{(φ):t} as printed.
pub fn verify_chain_compression(
    spec: &CumulantSpec,
    xs: &[usize],
    ys: &[usize],
    chain: &[usize],
    j: usize,
    k: usize,
) -> Result<Report> {
    chain_positions(spec, chain)?;
    if !(k < j && j <= chain.len()) {
        return Err(Error::Range(format!("need 0 ≤ k < j ≤ {}, got k={k}, j={j}", chain.len())));
    }
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::Dimension(format!("{} x-variables vs {} y-variables", xs.len(), ys.len())));
    }
    let (q, pj) = (chain[k], chain[j - 1]);
    let base = spec.base.clone();
    let s = xs.len();
    let mut vars: Vec<usize> = xs.iter().chain(ys).copied().collect();
    let nv = vars.len();
    vars.extend(chain);
    let joint = spec.restrict(&vars)?.cumulant_family()?;
    if first_mixed_nonzero(&joint, &[(0..nv).collect(), (nv..vars.len()).collect()])?.is_some() {
        return Err(Error::Contract("the chain is not free from X ∪ Y".into()));
    }
    let alpha = projection_value(spec, q)?;
    let mut r = Report::new(format!("chain compression j={j}, k={k}"));

    let mut word = vec![q];
    word.extend(&chain[k..j]);
    word.push(q);
    let ones = vec![base.one(); word.len() - 1];
    r.elems(format!("E_({},{j})(p_{}⋯p_{j}) = α_{}", k + 1, k + 1, k + 1), &spec.joint_moment(&word, &ones)?, &alpha);

    let groups = [(0..s).collect::<Vec<_>>(), (s..2 * s).collect()];
    let hyp = first_mixed_nonzero(&spec.restrict(&vars[..nv])?.cumulant_family()?, &groups)?;
    r.flag("X and Y free over B under φ", hyp.is_none(), hyp.map(|w| format!("mixed cumulant at {}", fmt_word(&w))));

    let dx = compressed_cumulants(spec, sandwich(xs, pj), q)?;
    let dy = compressed_cumulants(spec, sandwich(ys, pj), q)?;
    let dxy = compressed_cumulants(spec, sandwich(&vars[..nv], pj), q)?;
    let mixed = first_mixed_nonzero(&dxy, &groups)?;
    r.flag(
        format!("p_{j}Xp_{j} and p_{j}Yp_{j} free over B under ψ_{k}"),
        mixed.is_none(),
        mixed.map(|w| format!("mixed cumulant at {}", fmt_word(&w))),
    );
    let cx = spec.restrict(xs)?.cumulant_family()?;
    // interior p_j's contribute φ(p_j), not the normalizing α_{k+1}
    let alpha_j = projection_value(spec, pj)?;
    r.families(format!("R of p_{j}Xp_{j} under ψ_{k} = c(x, α_{j} b x, ...)"), &dx, &scaled_arguments(&cx, &alpha_j)?);

    let (sx, sy) = (series(dx)?, series(dy)?);
    r.families("joint R = union of R's", &dxy, &concat_union(&sx, &sy)?.family);
    let sums: Vec<Poly> = (0..s)
        .map(|i| Poly::sum(&Poly::monomial(vec![pj, xs[i], pj]), &Poly::monomial(vec![pj, ys[i], pj])))
        .collect();
    r.families("R of sum = sum of R's", &compressed_cumulants(spec, sums, q)?, &add(&sx, &sy)?.family);
    let prods: Vec<Poly> = (0..s).map(|i| Poly::monomial(vec![pj, xs[i], pj, pj, ys[i], pj])).collect();
    let rprod = compressed_cumulants(spec, prods, q)?;
    r.families("R of product = R_pXp boxed R_pYp trivial", &rprod, &boxed_amalgamated(&sx, &sy.trivial())?.family);
    let cy = series(spec.restrict(ys)?.cumulant_family()?)?;
    r.families("R of product = R_pXp boxed R_Y trivial (as printed)", &rprod, &boxed_amalgamated(&sx, &cy.trivial())?.family);
    Ok(r)
}
