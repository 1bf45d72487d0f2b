//! Three-class separability of three-mode Gaussian states: fully
//! inseparable (some single-mode partial transpose is unphysical),
//! biseparable (PPT across every single mode but not fully separable) and
//! fully separable.

mod boundary;
mod feasibility;
mod schur;

pub use boundary::{
    asymptotic_intersection_expression, bisep_boundary, fully_sep_boundary, intersection_condition,
    intersection_expression, ppt_symmetric_condition, ppt_symmetric_expression, weak_bisep_boundary,
    weak_bisep_boundary_eta, SEAM_TOLERANCE,
};
pub use feasibility::{
    fully_separable_test, section_feasibility, FeasibilityMethod, FeasibilityOutcome, FeasibilityProblem,
};
pub use schur::{schur_complements, HermitianEntries, SchurPair, MAX_CONDITION};

use std::fmt;

use crate::error::{invalid, Result};
use crate::evolution::{build_symmetric_gamma, symmetric_entries, SymmetricFamily};
use crate::gaussian::{min_eigenvalue_hermitian, partial_transpose, uncertainty_margin, CovarianceMatrix, SymplecticForm};
use crate::scalar::{to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeparabilityClass {
    FullyInseparable,
    Biseparable,
    FullySeparable,
}

impl SeparabilityClass {
    pub fn label(&self) -> &'static str {
        match self {
            Self::FullyInseparable => "FullyInseparable",
            Self::Biseparable => "Biseparable",
            Self::FullySeparable => "FullySeparable",
        }
    }
}

impl fmt::Display for SeparabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A class plus whether the deciding quantity lay within tolerance of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub class: SeparabilityClass,
    pub marginal: bool,
}

/// Everything computed on the way to a [`Classification`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport<T: Real> {
    pub class: SeparabilityClass,
    pub marginal: bool,
    /// `min eig(gamma~_j + iJ)` for each mode `j`, when computed spectrally.
    pub ppt_margins: Vec<T>,
    pub feasibility: Option<FeasibilityOutcome<T>>,
}

impl<T: Real> ClassificationReport<T> {
    pub fn summary(&self) -> Classification {
        Classification { class: self.class, marginal: self.marginal }
    }
}

/// `min eig(Lambda_j gamma Lambda_j + iJ)`.
pub fn ppt_margin<T: Real>(gamma: &CovarianceMatrix<T>, j: usize) -> Result<T> {
    let pt = partial_transpose(gamma, j)?;
    let form = SymplecticForm::new(gamma.modes())?;
    min_eigenvalue_hermitian(&pt.with_form(&form))
}

/// Positive partial transpose with respect to mode `j` (1-based).
pub fn ppt_test<T: Real>(gamma: &CovarianceMatrix<T>, j: usize, tol: T) -> Result<bool> {
    Ok(ppt_margin(gamma, j)? >= -tol)
}

pub fn classify<T: Real>(gamma: &CovarianceMatrix<T>, tol: T) -> Result<Classification> {
    classify_detailed(gamma, tol).map(|r| r.summary())
}

pub fn classify_detailed<T: Real>(gamma: &CovarianceMatrix<T>, tol: T) -> Result<ClassificationReport<T>> {
    if gamma.modes() != 3 {
        return invalid("classification needs a three-mode covariance matrix");
    }
    let margin = uncertainty_margin(gamma)?;
    if margin < -tol {
        return invalid(format!("covariance matrix is not physical (min eig(gamma + iJ) = {:e})", to_f64(margin)));
    }
    let margins = (1..=3).map(|j| ppt_margin(gamma, j)).collect::<Result<Vec<T>>>()?;
    let worst = margins.iter().copied().reduce(|a, b| a.min(b)).unwrap();
    let ppt_marginal = worst.abs() < tol;
    if worst < -tol {
        return Ok(ClassificationReport {
            class: SeparabilityClass::FullyInseparable,
            marginal: ppt_marginal,
            ppt_margins: margins,
            feasibility: None,
        });
    }
    let pair = schur_complements(gamma)?;
    let outcome = fully_separable_test(&pair, tol);
    let class = if outcome.feasible { SeparabilityClass::FullySeparable } else { SeparabilityClass::Biseparable };
    Ok(ClassificationReport {
        class,
        marginal: ppt_marginal || outcome.marginal,
        ppt_margins: margins,
        feasibility: Some(outcome),
    })
}

/// Classifies a member of the symmetric family.
///
/// Finite covariance matrices (any finite `t'`, or `t' = inf` with damping
/// dominating) go through the spectral and feasibility tests. At `t' = inf`
/// with a growing collective mode the closed-form boundaries decide.
pub fn classify_family<T: Real>(family: &SymmetricFamily<T>, tol: T) -> Result<ClassificationReport<T>> {
    let entries = symmetric_entries(family)?;
    if entries.is_finite() {
        let gamma = build_symmetric_gamma(&entries, T::one())?;
        return classify_detailed(&gamma, tol);
    }
    let n2 = family.n_prime() * family.n_prime();
    let (z0, z1) = (family.zeta0(), family.zeta1());
    let bisep = bisep_boundary(z0, z1)?;
    let full = fully_sep_boundary(z0, z1);
    let near = |b: T| (n2 - b).abs() < tol;
    let (class, marginal) = match bisep {
        Some(b) if n2 < b - tol => (SeparabilityClass::FullyInseparable, near(b)),
        _ if n2 >= full - tol => (SeparabilityClass::FullySeparable, near(full) || bisep.is_some_and(near)),
        _ => (SeparabilityClass::Biseparable, near(full) || bisep.is_some_and(near)),
    };
    Ok(ClassificationReport { class, marginal, ppt_margins: Vec::new(), feasibility: None })
}
