//! Compression by a projection p free from the variables: cumulants of
//! pxp under φ_p = φ(p)⁻¹ φ|_{pAp}, computed three independent ways, and the
//! freeness and R-transform identities they satisfy.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::{Elem, FiniteAlgebra};
use crate::freemodel::{
    composite_moment_family, first_mixed_nonzero, Component, CompositeMoments, CumulantSpec, Poly,
};
use crate::multifunc::{all_words, basis_words, moments_to_cumulants, partition_eval, CoefficientSource, CumulantFamily, MultiCoeff};
use crate::nclattice::{alternating_union, kreweras, nc_prime};
use crate::report::Report;
use crate::series::{add, boxed_amalgamated, concat_union, BSeries, SeriesKind};

/// φ(p) for a chain letter.
pub fn projection_value(spec: &CumulantSpec, p: usize) -> Result<Elem> {
    let (ci, li) = spec.locate(p)?;
    match &spec.components[ci] {
        Component::Chain(b0s) => Ok(b0s[li].clone()),
        Component::Table(_) => Err(Error::Contract(format!("{} is not a projection", spec.labels[p]))),
    }
}

/// Monomials q·v·q for each variable.
pub fn sandwich(vars: &[usize], q: usize) -> Vec<Poly> {
    vars.iter().map(|&v| Poly::monomial(vec![q, v, q])).collect()
}

/// Cumulants of polynomial variables under z ↦ φ(state)⁻¹ φ(state·z·state).
pub fn compressed_cumulants(spec: &CumulantSpec, polys: Vec<Poly>, state: usize) -> Result<CumulantFamily> {
    let src = CompositeMoments::new(spec, polys)?.compressed(state)?;
    moments_to_cumulants(&composite_moment_family(&src, spec.degree)?)
}

/// The family w ↦ c(w; b₀b₂, …, b₀bₙ) at every basis word.
pub fn scaled_arguments(family: &CumulantFamily, b0: &Elem) -> Result<CumulantFamily> {
    let base = family.base.clone();
    base.check(b0)?;
    CumulantFamily::from_fn(family.s, family.degree, base.clone(), |w, args| {
        let scaled: Vec<Elem> = args.iter().map(|a| base.mul(b0, a)).collect();
        family.coeff(w, &scaled)
    })
}

/// Letters: 0 the unit, 1 the projection, 2.. the x-variables.
struct UnitProjectionSource<'a> {
    cumulants: &'a CumulantFamily,
    b0: &'a Elem,
}

impl CoefficientSource for UnitProjectionSource<'_> {
    fn base(&self) -> &FiniteAlgebra {
        &self.cumulants.base
    }
    fn coeff(&self, letters: &[usize], args: &[Elem]) -> Result<Elem> {
        let b = &self.cumulants.base;
        match letters[0] {
            0 if letters.len() == 1 => Ok(b.one()),
            0 => Err(Error::Invariant("unit letter outside a singleton".into())),
            1 => Ok(args.iter().fold(self.b0.clone(), |acc, a| b.mul(&acc, a))),
            _ => {
                let w: Vec<usize> = letters.iter().map(|l| l - 2).collect();
                self.cumulants.coeff(&w, args)
            }
        }
    }
}

/// Moments φ_p(px₁p ⊗ b₂px₂p ⊗ …) as b₀⁻¹ Σ over partitions of {1..n+1}
/// with {1} a singleton: x-cumulants on π, p-moments on Kr(π).
pub fn unit_singleton_moments(cumulants: &CumulantFamily, b0: &Elem) -> Result<CumulantFamily> {
    let base = cumulants.base.clone();
    let inv = base.inverse(b0).ok_or_else(|| Error::Contract("φ(p) is not invertible".into()))?;
    let src = UnitProjectionSource { cumulants, b0 };
    let d = base.dim();
    let mut coeffs = BTreeMap::new();
    for w in all_words(cumulants.s, cumulants.degree) {
        let n = w.len();
        let unions: Vec<_> = nc_prime(n)?
            .into_iter()
            .map(|(pi, _)| alternating_union(&pi, &kreweras(&pi)?))
            .collect::<Result<_>>()?;
        let mut letters = vec![0, 1];
        for &v in &w {
            letters.push(v + 2);
            letters.push(1);
        }
        let table = basis_words(d, n - 1)
            .iter()
            .map(|bw| {
                let mut args = vec![base.one(), base.one(), base.one()];
                for &j in bw {
                    args.push(base.basis_elem(j));
                    args.push(base.one());
                }
                let mut acc = base.zero();
                for u in &unions {
                    acc = acc.add(&partition_eval(&src, u, &letters, &args)?);
                }
                Ok(base.mul(&inv, &acc))
            })
            .collect::<Result<_>>()?;
        coeffs.insert(w, MultiCoeff { n, b_dim: d, table });
    }
    Ok(CumulantFamily { s: cumulants.s, degree: cumulants.degree, base, coeffs })
}

fn series(f: CumulantFamily) -> Result<BSeries> {
    BSeries::new(SeriesKind::RTransform, f)
}

/// Trivial-slice comparison recorded as a check.
fn slices(r: &mut Report, identity: &str, lhs: &BSeries, rhs: &BSeries) -> Result<()> {
    let diff = lhs.first_difference(rhs)?;
    let (a, b) = (lhs.values()?, rhs.values()?);
    let show = |m: &BTreeMap<Vec<usize>, Elem>| {
        serde_json::Value::Array(m.values().map(crate::report::elem_json).collect())
    };
    let detail = diff.map(|(w, _)| format!("word {}", crate::multifunc::fmt_word(&w)));
    r.push(identity, detail.is_none(), detail, show(&a), show(&b));
    Ok(())
}

/// Checks the compression identities for X (and, when `ys` is nonempty,
/// the freeness transfer and sum/product rules for X, Y) under φ_p.
pub fn verify_compression(spec: &CumulantSpec, xs: &[usize], ys: &[usize], p: usize) -> Result<Report> {
    let b0 = projection_value(spec, p)?;
    let mut vars: Vec<usize> = xs.iter().chain(ys).copied().collect();
    vars.push(p);
    let joint = spec.restrict(&vars)?.cumulant_family()?;
    let last = vars.len() - 1;
    if first_mixed_nonzero(&joint, &[(0..last).collect(), vec![last]])?.is_some() {
        return Err(Error::Contract("p is not free from the variables".into()));
    }
    let base = spec.base.clone();
    let mut r = Report::new(format!("compression by {}", spec.labels[p]));

    let cx = spec.restrict(xs)?.cumulant_family()?;
    let direct = compressed_cumulants(spec, sandwich(xs, p), p)?;
    let symm = series(cx.clone())?.symmetric(b0.clone())?;
    slices(&mut r, "trivial compressed R of pXp = symm(b0) R of X", &series(direct.clone())?.trivial(), &symm)?;
    r.families("compressed R of pXp = c(x, b0 b x, ...)", &direct, &scaled_arguments(&cx, &b0)?);
    let third = moments_to_cumulants(&unit_singleton_moments(&cx, &b0)?)?;
    r.families("direct route = unit-singleton partition route", &direct, &third);
    slices(&mut r, "unit-singleton route trivial slice = symm(b0) R of X", &series(third)?.trivial(), &symm)?;
    if b0 == base.one() {
        slices(&mut r, "φ(p) = 1: trivial compressed R = trivial R", &series(direct.clone())?.trivial(), &series(cx.clone())?.trivial())?;
    }
    if ys.is_empty() {
        return Ok(r);
    }
    if xs.len() != ys.len() {
        return Err(Error::Dimension(format!("{} x-variables vs {} y-variables", xs.len(), ys.len())));
    }
    let s = xs.len();
    let cy = spec.restrict(ys)?.cumulant_family()?;
    let dy = compressed_cumulants(spec, sandwich(ys, p), p)?;
    let both: Vec<usize> = xs.iter().chain(ys).copied().collect();
    let dxy = compressed_cumulants(spec, sandwich(&both, p), p)?;
    let mixed = first_mixed_nonzero(&dxy, &[(0..s).collect(), (s..2 * s).collect()])?;
    r.flag(
        "pXp and pYp free over B under φ_p",
        mixed.is_none(),
        mixed.map(|w| format!("mixed cumulant at {}", crate::multifunc::fmt_word(&w))),
    );
    let (sx, sy) = (series(direct.clone())?, series(dy.clone())?);
    r.families("joint compressed R = union of compressed R's", &dxy, &concat_union(&sx, &sy)?.family);
    let sums: Vec<Poly> = (0..s)
        .map(|i| Poly::sum(&Poly::monomial(vec![p, xs[i], p]), &Poly::monomial(vec![p, ys[i], p])))
        .collect();
    r.families("compressed R of pxp+pyp = sum of compressed R's", &compressed_cumulants(spec, sums, p)?, &add(&sx, &sy)?.family);
    let prods: Vec<Poly> = (0..s).map(|i| Poly::monomial(vec![p, xs[i], p, p, ys[i], p])).collect();
    let rprod = compressed_cumulants(spec, prods, p)?;
    r.families("compressed R of (pxp)(pyp) = R_pXp boxed R_pYp trivial", &rprod, &boxed_amalgamated(&sx, &sy.trivial())?.family);
    r.families(
        "compressed R of (pxp)(pyp) = R_pXp boxed R_Y trivial (as printed)",
        &rprod,
        &boxed_amalgamated(&sx, &series(cy.clone())?.trivial())?.family,
    );
    r.families(
        "compressed R of (pxp)(pyp) = R_pXp boxed symm(b0)-scaled R_Y",
        &rprod,
        &boxed_amalgamated(&sx, &series(scaled_arguments(&cy, &b0)?)?.trivial())?.family,
    );
    Ok(r)
}
