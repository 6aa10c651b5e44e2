//! Commuting ladders: every square i_k E_{k+1,j} = E′_{k+1,j} i_j, every
//! subladder, and the compressed-ladder expectation F_{k+1,j} = i_k E_{k+1,j}
//! with its freeness calculus run in the abstract chain model.

use crate::error::{Error, Result};
use crate::exactalg::{ConditionalExpectation, Ladder};
use crate::freemodel::{first_mixed_nonzero, CumulantSpec};
use crate::multifunc::fmt_word;
use crate::rational::{fmt_q, Q};
use crate::report::Report;

use super::chains::verify_chain_compression;
use super::compression::{compressed_cumulants, projection_value, sandwich};

fn square_name(k: Option<usize>, j: usize) -> String {
    match k {
        None => format!("E'_{j} i_{j} = E_{j}"),
        Some(k) => format!("i_{k} E_({},{j}) = E'_({},{j}) i_{j}", k + 1, k + 1),
    }
}

/// Rung invariants, all commuting squares, and every subladder.
pub fn verify_ladder(ladder: &Ladder) -> Result<Report> {
    let mut r = Report::new(format!("commuting ladder of depth {}", ladder.upper.depth()));
    let v = ladder.violations();
    r.flag("both towers and all rungs are conditional expectations", v.is_empty(), v.first().cloned());
    for sq in ladder.verify_commuting_ladder()? {
        r.flag(square_name(sq.k, sq.j), sq.pass, (!sq.pass).then(|| "maps differ".into()));
    }
    let t = ladder.upper.depth();
    for mask in 1u32..(1 << (t + 1)) {
        let seq: Vec<usize> = (0..=t).filter(|i| mask >> i & 1 == 1).collect();
        if seq.len() < 2 {
            continue;
        }
        let bad = ladder.verify_subladder(&seq)?.into_iter().find(|s| !s.pass);
        let name = seq.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        r.flag(format!("subladder ({name}) commutes"), bad.is_none(), bad.map(|s| square_name(s.k, s.j)));
    }
    Ok(r)
}

/// F_{k+1,j} = i_k ∘ E_{k+1,j} : A_j → A′_k, after checking the interchange
/// square it relies on.
pub fn ladder_expectation(ladder: &Ladder, k: usize, j: usize) -> Result<ConditionalExpectation> {
    let e = ladder.upper.compose_expectations(k + 1, j)?;
    let e2 = ladder.lower.compose_expectations(k + 1, j)?;
    let lhs = ladder.rungs[k].matrix.mul(&e.matrix)?;
    if lhs != e2.matrix.mul(&ladder.rungs[j].matrix)? {
        return Err(Error::Contract(format!("interchange i_{k} E_({},{j}) = E'_({},{j}) i_{j} fails", k + 1, k + 1)));
    }
    let lower_k = &ladder.lower.levels[k];
    let inclusion = ladder.upper.inclusion(k, j)?.mul(&ladder.upper.levels[k].inclusion_of(lower_k)?)?;
    ConditionalExpectation::new(e.source.clone(), lower_k.clone(), lhs, inclusion)
}

/// Ladder-compressed freeness and R-transform rules.
///
/// Concretely: the interchange square, F_{k+1,j} as a conditional
/// expectation, and i_k fixing B so B-valued coefficients pass through F
/// unchanged. Abstractly (chain values matching the ladder's α's): freeness
/// of X, Y holds iff it holds for p_jXp_j, p_jYp_j under F, and the chain
/// identities hold under F.
pub fn verify_ladder_compression(
    ladder: &Ladder,
    alphas: &[Q],
    spec: &CumulantSpec,
    xs: &[usize],
    ys: &[usize],
    chain: &[usize],
    k: usize,
    j: usize,
) -> Result<Report> {
    if chain.len() != alphas.len() {
        return Err(Error::Dimension(format!("{} chain letters for {} ladder projections", chain.len(), alphas.len())));
    }
    if spec.base.dim() != ladder.upper.base().dim() {
        return Err(Error::Dimension("spec base and ladder base differ".into()));
    }
    let mut r = Report::new(format!("ladder compression k={k}, j={j}"));
    let f = ladder_expectation(ladder, k, j)?;
    r.flag(format!("i_{k} E_({},{j}) = E'_({},{j}) i_{j}", k + 1, k + 1), true, None);
    let v = f.violations();
    r.flag(format!("F_({},{j}) is a conditional expectation onto A'_{k}", k + 1), v.is_empty(), v.first().cloned());
    let through = ladder.rungs[k].matrix.mul(&ladder.upper.inclusion(0, k)?)?;
    let pass = through == ladder.lower.inclusion(0, k)?;
    r.flag(format!("i_{k} fixes B"), pass, (!pass).then(|| "rung moves B".into()));

    for (i, (&p, a)) in chain.iter().zip(alphas).enumerate() {
        let v = projection_value(spec, p)?;
        let pass = v == spec.base.scalar(a);
        r.flag(format!("model φ(p_{}) = ladder α_{} = {}", i + 1, i + 1, fmt_q(a)), pass, (!pass).then(|| "values differ".into()));
    }

    let s = xs.len();
    let groups = [(0..s).collect::<Vec<_>>(), (s..2 * s).collect()];
    let both: Vec<usize> = xs.iter().chain(ys).copied().collect();
    let hyp = first_mixed_nonzero(&spec.restrict(&both)?.cumulant_family()?, &groups)?;
    let pj = chain[j - 1];
    let concl = first_mixed_nonzero(&compressed_cumulants(spec, sandwich(&both, pj), chain[k])?, &groups)?;
    let describe = |w: &Option<Vec<usize>>| w.as_ref().map_or("free".to_string(), |w| format!("mixed cumulant at {}", fmt_word(w)));
    r.flag(
        format!("X, Y free iff p_{j}Xp_{j}, p_{j}Yp_{j} free under F_({},{j})", k + 1),
        hyp.is_none() == concl.is_none(),
        (hyp.is_none() != concl.is_none()).then(|| format!("{} / {}", describe(&hyp), describe(&concl))),
    );
    r.absorb(&format!("under F_({},{j})", k + 1), verify_chain_compression(spec, xs, ys, chain, j, k)?);
    Ok(r)
}
