//! Constructive replay of the main majorization.
//!
//! Zero-distance branch: pinch `M` to `A ⊕ B`, then pinch `J (A ⊕ B) J*` to
//! `H ⊕ H` with `H = (A+B)/2`.
//!
//! Positive-distance branch: rotate `X` so that `Re X' >= dI`, pinch
//! `J M' J*` to `(H - Re X') ⊕ (H + Re X')`, and finish with the two-by-two
//! lemma applied to `H >= Re X' >= dI`.

use serde::Serialize;

use super::{maj, Instance, TheoremError};
use crate::majorize::{block_diag_pinch, lemma1_direct_sum, pinch_to_diagonal, MajorizationReport};
use crate::matcore::{is_positive_semidefinite, j_congruence, phase_rotate_block, real_part, HermitianMatrix};
use crate::numrange::ZeroVerdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    ZeroDistance,
    PositiveDistance,
}

impl Branch {
    pub fn describe(self) -> &'static str {
        match self {
            Branch::ZeroDistance => "d = 0 (block pinching and J-congruence)",
            Branch::PositiveDistance => "d > 0 (rotation, J-congruence, two-by-two lemma)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofStep {
    pub index: usize,
    pub name: String,
    pub statement: String,
    /// `>= -tol` iff the step holds.
    pub slack: f64,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<MajorizationReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofTrace {
    pub branch: Branch,
    pub theta_star: Option<f64>,
    /// Distance value used by the conclusion.
    pub d: f64,
    pub steps: Vec<ProofStep>,
}

/// The chain `(X+dI) ⊕ (X-dI) ≺ D+ ⊕ D- ≺ (X+Y) ⊕ (X-Y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Report {
    pub delta: f64,
    /// Eigenvalues of `X` in the order of the chosen eigenbasis.
    pub eigenvalues: Vec<f64>,
    /// `<e_k, (X+Y) e_k>`.
    pub d_plus: Vec<f64>,
    /// `<e_k, (X-Y) e_k>`.
    pub d_minus: Vec<f64>,
    /// Built from the per-k two-by-two majorizations.
    pub first: MajorizationReport,
    /// Pinching of `(X+Y) ⊕ (X-Y)` to its diagonal.
    pub second: MajorizationReport,
    /// End-to-end comparison.
    pub composite: MajorizationReport,
}

impl Lemma2Report {
    pub fn holds(&self) -> bool {
        self.first.holds() && self.second.holds() && self.composite.holds()
    }

    pub fn slack(&self) -> f64 {
        self.first.slack().min(self.second.slack()).min(self.composite.slack())
    }
}

fn require_psd(h: &HermitianMatrix, what: &str, tol: f64) -> Result<(), TheoremError> {
    let v = is_positive_semidefinite(h, 0.0)?;
    if v.lambda_min < -tol {
        return Err(TheoremError::HypothesisFailed {
            what: what.into(),
            lambda_min: v.lambda_min,
        });
    }
    Ok(())
}

/// Builds the diagonals `D+` and `D-` of `X ± Y` in an eigenbasis of `X` and
/// verifies the majorization chain. Requires `X >= Y >= delta I`, `delta > 0`.
pub fn lemma2_construct(
    x: &HermitianMatrix,
    y: &HermitianMatrix,
    delta: f64,
    tol: f64,
) -> Result<Lemma2Report, TheoremError> {
    let n = x.order();
    if y.order() != n {
        return Err(crate::majorize::MajorizeError::OrderMismatch {
            left: n,
            right: y.order(),
        }
        .into());
    }
    if !(delta > 0.0) {
        return Err(TheoremError::HypothesisFailed {
            what: "delta > 0".into(),
            lambda_min: delta,
        });
    }
    require_psd(&x.sub(y), "X >= Y", tol)?;
    require_psd(&y.shift(-delta), "Y >= delta I", tol)?;

    let eig = x.eig()?;
    let lambda = eig.values.into_values();
    let plus = x.add(y);
    let minus = x.sub(y);
    let d_plus = pinch_to_diagonal(&plus, &eig.vectors)?.diagonal();
    let d_minus = pinch_to_diagonal(&minus, &eig.vectors)?.diagonal();

    let pairs: Vec<(HermitianMatrix, HermitianMatrix)> = (0..n)
        .map(|k| {
            (
                HermitianMatrix::from_real_diagonal(&[lambda[k] + delta, lambda[k] - delta]),
                HermitianMatrix::from_real_diagonal(&[d_plus[k], d_minus[k]]),
            )
        })
        .collect();
    let first = lemma1_direct_sum(&pairs, tol)?;

    let diag: Vec<f64> = d_plus.iter().chain(&d_minus).copied().collect();
    let mut target = plus.eigenvalues()?.into_values();
    target.extend(minus.eigenvalues()?.into_values());
    let second = maj(&diag, &target, tol);

    let shifted: Vec<f64> = lambda
        .iter()
        .map(|l| l + delta)
        .chain(lambda.iter().map(|l| l - delta))
        .collect();
    let composite = maj(&shifted, &target, tol);

    Ok(Lemma2Report {
        delta,
        eigenvalues: lambda,
        d_plus,
        d_minus,
        first,
        second,
        composite,
    })
}

struct Recorder {
    tol: f64,
    steps: Vec<ProofStep>,
}

impl Recorder {
    fn push(
        &mut self,
        name: &str,
        statement: String,
        slack: f64,
        value: Option<f64>,
        report: Option<MajorizationReport>,
    ) -> Result<(), TheoremError> {
        let index = self.steps.len() + 1;
        let holds = slack >= -self.tol;
        self.steps.push(ProofStep {
            index,
            name: name.into(),
            statement,
            slack,
            holds,
            value,
            report: report.clone(),
        });
        if holds {
            Ok(())
        } else {
            Err(TheoremError::StepFailed {
                index,
                name: name.into(),
                slack,
                report: report.map(Box::new),
            })
        }
    }

    fn majorization(&mut self, name: &str, statement: &str, rep: MajorizationReport) -> Result<(), TheoremError> {
        let slack = rep.slack();
        self.push(name, statement.into(), slack, None, Some(rep))
    }
}

fn block_residual(m: &HermitianMatrix, start: usize, want: &HermitianMatrix) -> f64 {
    m.sub_block(start, want.order())
        .as_matrix()
        .max_abs_diff(want.as_matrix())
}

impl Instance {
    /// Replays the proof, re-verifying every intermediate majorization.
    /// "Undecided" zero membership takes the zero-distance branch.
    pub fn proof_trace(&self) -> Result<ProofTrace, TheoremError> {
        let mut rec = Recorder {
            tol: self.check_tol(),
            steps: Vec::new(),
        };
        let n = self.n();
        let full = self.block().assemble();
        let h = self.half_sum().clone();

        if self.distance().contains_zero != ZeroVerdict::No {
            let pinched = block_diag_pinch(&full)?;
            rec.majorization(
                "block-pinch",
                "A ⊕ B ≺ M",
                maj(pinched.eigenvalues()?.values(), self.full_spectrum().values(), rec.tol),
            )?;

            let direct = self.block().a().direct_sum(self.block().b());
            let mixed = j_congruence(&direct)?;
            let residual = block_residual(&mixed, 0, &h).max(block_residual(&mixed, n, &h));
            rec.push(
                "j-congruence",
                "J (A ⊕ B) J* has both diagonal blocks equal to (A+B)/2".into(),
                -residual,
                Some(residual),
                None,
            )?;

            let halves = h.direct_sum(&h);
            rec.majorization(
                "j-pinch",
                "(A+B)/2 ⊕ (A+B)/2 ≺ A ⊕ B",
                maj(halves.eigenvalues()?.values(), mixed.eigenvalues()?.values(), rec.tol),
            )?;

            rec.majorization(
                "conclusion",
                "(A+B)/2 ⊕ (A+B)/2 ≺ M",
                maj(&self.shifted_spectrum(0.0), self.full_spectrum().values(), rec.tol),
            )?;
            return Ok(ProofTrace {
                branch: Branch::ZeroDistance,
                theta_star: None,
                d: 0.0,
                steps: rec.steps,
            });
        }

        let theta = self.distance().angle;
        let d = self.d_lower();
        let rotated = phase_rotate_block(self.block(), -theta);
        let rotated_full = rotated.assemble();
        let rotated_spec = rotated_full.eigenvalues()?;
        let drift = rotated_spec
            .values()
            .iter()
            .zip(self.full_spectrum().values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        rec.push(
            "rotation",
            format!("X' = e^(-i theta*) X with theta* = {theta}; spectrum of M unchanged"),
            -drift,
            Some(theta),
            None,
        )?;

        let re = real_part(rotated.x())?;
        let re_min = re.eigenvalues()?.min();
        rec.push(
            "real-part-bound",
            format!("Re X' >= d I with d = {d}"),
            re_min - d,
            Some(re_min),
            None,
        )?;

        let mixed = j_congruence(&rotated_full)?;
        let residual = block_residual(&mixed, 0, &h.sub(&re)).max(block_residual(&mixed, n, &h.add(&re)));
        rec.push(
            "j-congruence",
            "J M' J* has diagonal blocks (A+B)/2 - Re X' and (A+B)/2 + Re X'".into(),
            -residual,
            Some(residual),
            None,
        )?;

        let pinched = block_diag_pinch(&mixed)?;
        rec.majorization(
            "j-pinch",
            "((A+B)/2 - Re X') ⊕ ((A+B)/2 + Re X') ≺ M",
            maj(pinched.eigenvalues()?.values(), self.full_spectrum().values(), rec.tol),
        )?;

        match lemma2_construct(&h, &re, d, rec.tol) {
            Ok(l2) => {
                let slack = l2.slack();
                rec.push(
                    "two-by-two-lemma",
                    "((A+B)/2 + dI) ⊕ ((A+B)/2 - dI) ≺ D+ ⊕ D- ≺ ((A+B)/2 + Re X') ⊕ ((A+B)/2 - Re X')".into(),
                    slack,
                    Some(d),
                    Some(l2.composite),
                )?;
            }
            Err(TheoremError::HypothesisFailed { what, lambda_min }) => {
                rec.push(
                    "two-by-two-lemma",
                    format!("hypothesis {what} fails"),
                    lambda_min,
                    Some(lambda_min),
                    None,
                )?;
            }
            Err(e) => return Err(e),
        }

        rec.majorization(
            "conclusion",
            "((A+B)/2 + dI) ⊕ ((A+B)/2 - dI) ≺ M",
            maj(&self.shifted_spectrum(d), self.full_spectrum().values(), rec.tol),
        )?;
        Ok(ProofTrace {
            branch: Branch::PositiveDistance,
            theta_star: Some(theta),
            d,
            steps: rec.steps,
        })
    }
}
