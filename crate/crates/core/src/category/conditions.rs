//! Finite probes of the compactness of the unit: `Hom(1, -)` must commute
//! with the colimits the engine builds.

use std::sync::Arc;

use serde::Serialize;

use super::object::{CMorphism, CObject, CatInstance};
use super::ops::{cokernel, coords_in, hom_space, kernel};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// A chain `X -f-> X -f-> ...` (repeated map) or an explicitly finite chain
/// `X_0 -> X_1 -> ... -> X_k`.
#[derive(Clone, Debug)]
pub enum ChainProbe {
    Repeated(CMorphism),
    Finite(Vec<CMorphism>),
}

/// Categorical colimit of a repeated chain together with stabilization data.
#[derive(Clone, Debug)]
pub struct EndoColimit {
    pub object: CObject,
    pub projection: CMorphism,
    pub index: usize,
}

/// Colimit of `X -f-> X -f-> ...` computed as `X / ker f^N`, where `N` is the
/// largest per-site stabilization index.
pub fn endo_chain_colimit(f: &CMorphism) -> Result<EndoColimit> {
    if f.source().dims() != f.target().dims() {
        return Err(Error::input("chain colimit needs an endomorphism"));
    }
    let mut index = 0;
    for c in f.components() {
        index = index.max(c.chain_colimit()?.index);
    }
    let mut power = CMorphism::identity(f.source());
    for _ in 0..index {
        power = f.compose(&power);
    }
    let (_, incl) = kernel(&power);
    let (object, projection) = cokernel(&incl);
    Ok(EndoColimit {
        object,
        projection,
        index,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeOutcome {
    pub probe: usize,
    pub pass: bool,
    /// Dimensions of `Hom(1, X_k)` along the chain (repeated chains: ranks
    /// of the induced map on global sections).
    pub hom_trace: Vec<usize>,
    pub colimit_hom_dim: usize,
    pub hom_colimit_dim: usize,
    /// True when a finite chain ended before visibly stabilizing.
    pub truncated: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionsReport {
    pub pass: bool,
    pub outcomes: Vec<ProbeOutcome>,
}

/// Matrix of `φ ↦ f ∘ φ` on `Hom(1, X) -> Hom(1, Y)` in the canonical bases.
fn induced_on_global(f: &CMorphism) -> Result<(Matrix, Vec<CMorphism>, Vec<CMorphism>)> {
    let one = CObject::unit(f.source().instance());
    let src = hom_space(&one, f.source())?;
    let dst = hom_space(&one, f.target())?;
    let field = f.field();
    let cols: Vec<_> = src
        .iter()
        .map(|phi| coords_in(&dst, &f.compose(phi)).expect("f ∘ φ is a morphism 1 -> Y"))
        .collect();
    Ok((Matrix::from_columns(field, dst.len(), &cols), src, dst))
}

/// Compares `Hom(1, colim)` with `colim Hom(1, -)` for a repeated chain,
/// given a claimed colimit projection `p: X -> C`.
pub fn compare_repeated(f: &CMorphism, claimed: &CMorphism) -> Result<ProbeOutcome> {
    let (fstar, src, _) = induced_on_global(f)?;
    let hom_colim = fstar.chain_colimit()?;
    let one = CObject::unit(f.source().instance());
    let into_colim = hom_space(&one, claimed.target())?;
    // Canonical comparison Hom(1, X) -> Hom(1, C), φ ↦ p ∘ φ.
    let cols: Vec<_> = src
        .iter()
        .map(|phi| coords_in(&into_colim, &claimed.compose(phi)).expect("p ∘ φ: 1 -> C"))
        .collect();
    let cmp = Matrix::from_columns(f.field(), into_colim.len(), &cols);
    let surjective = cmp.rows() == 0 || cmp.is_surjective();
    let same_kernel = cmp.kernel_basis().same_span(&hom_colim.stable_kernel);
    let pass = surjective && same_kernel && into_colim.len() == hom_colim.dim;
    Ok(ProbeOutcome {
        probe: 0,
        pass,
        hom_trace: hom_colim.rank_trace.clone(),
        colimit_hom_dim: into_colim.len(),
        hom_colimit_dim: hom_colim.dim,
        truncated: false,
        detail: if pass {
            "Hom(1, -) commutes with the chain colimit".into()
        } else {
            format!(
                "Hom(1, colim) has dimension {} but colim Hom(1, -) has {} (surjective: {surjective}, kernels agree: {same_kernel})",
                into_colim.len(),
                hom_colim.dim
            )
        },
    })
}

fn check_finite(maps: &[CMorphism]) -> Result<ProbeOutcome> {
    let Some(first) = maps.first() else {
        return Err(Error::input("empty chain probe"));
    };
    let mut comp = CMorphism::identity(first.source());
    let mut trace = Vec::new();
    let one = CObject::unit(first.source().instance());
    trace.push(hom_space(&one, first.source())?.len());
    for (i, m) in maps.iter().enumerate() {
        if m.source().dims() != comp.target().dims() {
            return Err(Error::input(format!("chain map {i} does not compose")));
        }
        comp = m.compose(&comp);
        trace.push(hom_space(&one, m.target())?.len());
    }
    let (fstar, _, _) = induced_on_global(&comp)?;
    let last = maps.last().expect("nonempty");
    let truncated = !last.is_iso();
    // The colimit of a finite chain is its last object; Hom(1, -) of it must
    // equal the last term of the hom chain.
    let colimit_hom_dim = *trace.last().expect("nonempty");
    let hom_colimit_dim = fstar.rows();
    let pass = colimit_hom_dim == hom_colimit_dim;
    Ok(ProbeOutcome {
        probe: 0,
        pass,
        hom_trace: trace,
        colimit_hom_dim,
        hom_colimit_dim,
        truncated,
        detail: if truncated {
            "finite chain ended before stabilizing; colimit taken at the last stage".into()
        } else {
            "finite chain stabilized".into()
        },
    })
}

/// Runs every probe, using the engine's own colimit construction.
pub fn verify_instance_conditions(
    inst: &Arc<CatInstance>,
    probes: &[ChainProbe],
) -> Result<ConditionsReport> {
    let mut outcomes = Vec::with_capacity(probes.len());
    for (i, probe) in probes.iter().enumerate() {
        let mut outcome = match probe {
            ChainProbe::Repeated(f) => {
                if f.source().instance().as_ref() != inst.as_ref() {
                    return Err(Error::input(format!("probe {i} lives in another instance")));
                }
                let colim = endo_chain_colimit(f)?;
                compare_repeated(f, &colim.projection)?
            }
            ChainProbe::Finite(maps) => check_finite(maps)?,
        };
        outcome.probe = i;
        outcomes.push(outcome);
    }
    Ok(ConditionsReport {
        pass: outcomes.iter().all(|o| o.pass),
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::category::FiniteSpace;
    use crate::linalg::Field;

    const Q: Field = Field::Rational;

    #[test]
    fn identity_chain_passes() {
        let inst = CatInstance::finvect(Q);
        let x = CObject::finvect(inst.clone(), 3);
        let report =
            verify_instance_conditions(&inst, &[ChainProbe::Repeated(CMorphism::identity(&x))]).unwrap();
        assert!(report.pass);
        assert_eq!(report.outcomes[0].colimit_hom_dim, 3);
    }

    #[test]
    fn presheaf_chain_records_trace() {
        let inst = CatInstance::presheaf(Q, FiniteSpace::sierpinski());
        let mut res = BTreeMap::new();
        res.insert((1, 2), Matrix::from_ints(Q, &[&[1, 0]]));
        let x = CObject::new(inst.clone(), vec![0, 1, 2], res).unwrap();
        // Kills the second global coordinate, fixes the first.
        let f = CMorphism::new(
            x.clone(),
            x.clone(),
            vec![
                Matrix::zeros(Q, 0, 0),
                Matrix::identity(Q, 1),
                Matrix::from_ints(Q, &[&[1, 0], &[0, 0]]),
            ],
        )
        .unwrap();
        let report = verify_instance_conditions(&inst, &[ChainProbe::Repeated(f)]).unwrap();
        assert!(report.pass);
        assert_eq!(report.outcomes[0].hom_trace, vec![2, 1, 1]);
        assert_eq!(report.outcomes[0].colimit_hom_dim, 1);
    }

    #[test]
    fn doctored_colimit_fails() {
        let inst = CatInstance::finvect(Q);
        let x = CObject::finvect(inst.clone(), 2);
        let f = CMorphism::finvect(&x, &x, Matrix::from_ints(Q, &[&[1, 0], &[0, 0]])).unwrap();
        // Claim the colimit is all of X: wrong, the second coordinate dies.
        let outcome = compare_repeated(&f, &CMorphism::identity(&x)).unwrap();
        assert!(!outcome.pass);
    }

    #[test]
    fn truncated_finite_chain_is_flagged() {
        let inst = CatInstance::finvect(Q);
        let x = CObject::finvect(inst.clone(), 2);
        let nil = CMorphism::finvect(&x, &x, Matrix::from_ints(Q, &[&[0, 0], &[1, 0]])).unwrap();
        let report = verify_instance_conditions(&inst, &[ChainProbe::Finite(vec![nil])]).unwrap();
        assert!(report.outcomes[0].truncated);
        assert!(report.pass);
    }
}
