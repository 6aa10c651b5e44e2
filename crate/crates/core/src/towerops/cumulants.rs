//! Cumulants of a tower's levels: A_j-valued cumulants of φ_{j+1} and the
//! scalar cumulants of E_{j+1} = φ₀ ∘ ⋯ ∘ φ_{j+1}.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{ConditionalExpectation, Elem, Tower};
use crate::multifunc::{partition_eval, CoefficientSource, CumulantsOf, ModelMoments};
use crate::nclattice::{lattice, NcPartition};
use crate::rational::Q;
use crate::report::Report;

fn check_level(tower: &Tower, j: usize, elements: &[Elem]) -> Result<()> {
    if j + 1 > tower.depth() {
        return Err(Error::Range(format!("level {} exceeds depth {}", j + 1, tower.depth())));
    }
    for x in elements {
        tower.levels[j + 1].check(x).map_err(|_| Error::Membership(format!("element not in A_{}", j + 1)))?;
    }
    Ok(())
}

fn scalar_of(e: &Elem) -> Q {
    e.0[0].clone()
}

/// ĉ_{j+1}(x_{w₁} ⊗ b₂x_{w₂} ⊗ …), valued in A_j.
pub fn level_cumulant(tower: &Tower, j: usize, elements: &[Elem], word: &[usize], b_args: &[Elem]) -> Result<Elem> {
    check_level(tower, j, elements)?;
    let src = ModelMoments::new(&tower.maps[j + 1], elements.to_vec())?;
    CumulantsOf(src).coeff(word, b_args)
}

/// Scalar cumulant of E_{j+1} on a word in elements of A_{j+1}.
pub fn scalar_tower_cumulant(tower: &Tower, j: usize, elements: &[Elem], word: &[usize]) -> Result<Q> {
    check_level(tower, j, elements)?;
    let e = tower.scalar_functional(j + 1)?;
    let src = ModelMoments::new(&e, elements.to_vec())?;
    let ones = vec![e.target.one(); word.len() - 1];
    Ok(scalar_of(&CumulantsOf(src).coeff(word, &ones)?))
}

/// One term of Σ_π μ(π,1ₙ) Π_V E_{j+1}(x_V).
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTerm {
    pub partition: NcPartition,
    pub mobius: Q,
    pub value: Q,
}

/// Every term of the scalar cumulant's Möbius expansion, in lattice order.
pub fn cumulant_expansion(tower: &Tower, j: usize, elements: &[Elem], word: &[usize]) -> Result<Vec<ExpansionTerm>> {
    check_level(tower, j, elements)?;
    let e = tower.scalar_functional(j + 1)?;
    let src = ModelMoments::new(&e, elements.to_vec())?;
    let lat = lattice(word.len())?;
    let mu = lat.mobius_to_top();
    lat.partitions()
        .iter()
        .enumerate()
        .map(|(i, pi)| {
            let mut value = Q::one();
            for blk in pi.blocks() {
                let w: Vec<usize> = blk.iter().map(|&v| word[v - 1]).collect();
                let ones = vec![e.target.one(); w.len() - 1];
                value *= scalar_of(&src.coeff(&w, &ones)?);
            }
            Ok(ExpansionTerm { partition: pi.clone(), mobius: mu[i].clone(), value })
        })
        .collect()
}

/// Terms μ(π,1ₙ)·φ̂_{j+1}(π)(x ⊗ 1x ⊗ …) of the trivial A_j-valued cumulant.
pub fn trivial_expansion(
    tower: &Tower,
    j: usize,
    elements: &[Elem],
    word: &[usize],
) -> Result<Vec<(NcPartition, Q, Elem)>> {
    check_level(tower, j, elements)?;
    let src = ModelMoments::new(&tower.maps[j + 1], elements.to_vec())?;
    let ones = vec![tower.levels[j].one(); word.len() - 1];
    let lat = lattice(word.len())?;
    let mu = lat.mobius_to_top();
    lat.partitions()
        .iter()
        .enumerate()
        .map(|(i, pi)| Ok((pi.clone(), mu[i].clone(), partition_eval(&src, pi, word, &ones)?)))
        .collect()
}

/// The E_{j+1}-cumulant three ways: Möbius inversion of E_{j+1} moments;
/// Σ_π μ Π_V Σ_θ E_j(trivial θ-cumulant of φ_{j+1}); Σ_π μ Π_V E_j(φ_{j+1}(x_V)).
pub fn verify_lemma_e(tower: &Tower, j: usize, elements: &[Elem], word: &[usize]) -> Result<Report> {
    let lhs = scalar_tower_cumulant(tower, j, elements, word)?;
    let ej: ConditionalExpectation = tower.scalar_functional(j)?;
    let phi = &tower.maps[j + 1];
    let moments = ModelMoments::new(phi, elements.to_vec())?;
    let cumulants = CumulantsOf(ModelMoments::new(phi, elements.to_vec())?);
    let a_j = &tower.levels[j];

    let lat = lattice(word.len())?;
    let mu = lat.mobius_to_top();
    let (mut lemma, mut corollary) = (Q::zero(), Q::zero());
    for (i, pi) in lat.partitions().iter().enumerate() {
        if mu[i].is_zero() {
            continue;
        }
        let (mut pl, mut pc) = (Q::one(), Q::one());
        for blk in pi.blocks() {
            let w: Vec<usize> = blk.iter().map(|&v| word[v - 1]).collect();
            let ones = vec![a_j.one(); w.len() - 1];
            let mut inner = a_j.zero();
            for theta in lattice(w.len())?.partitions() {
                inner = inner.add(&partition_eval(&cumulants, theta, &w, &ones)?);
            }
            pl *= scalar_of(&ej.apply(&inner)?);
            pc *= scalar_of(&ej.apply(&moments.coeff(&w, &ones)?)?);
        }
        lemma += &mu[i] * pl;
        corollary += &mu[i] * pc;
    }
    let mut r = Report::new(format!("E_{}-cumulant formula", j + 1));
    r.scalars("cumulant = sum over blocks of E_j of trivial block cumulants", &lhs, &lemma);
    r.scalars("cumulant = sum over blocks of E_j(φ_{j+1}(x_V))", &lhs, &corollary);
    Ok(r)
}
