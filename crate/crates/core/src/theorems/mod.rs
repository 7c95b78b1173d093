//! Checkers for the eigenvalue inequalities satisfied by a positive block
//! matrix `M = [A X; X* B]`, the constructive two-by-two majorization lemma
//! and a step-by-step replay of the proof of the main majorization
//!
//! ```text
//! ((A+B)/2 + dI) ⊕ ((A+B)/2 - dI)  ≺  M,      d = dist(0, W(X)).
//! ```
//!
//! `d` and the width of `W(X)` are only known through brackets. Each check
//! consumes the endpoint that makes the claim weaker: `d_lower` for every
//! statement involving `d`, `width_upper` for the width bound. A pass is
//! therefore a genuine verification.

mod functions;
mod proof;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::majorize::{antinorm_dominance_of_spectra, majorization_of_spectra, MajorizationReport, MajorizeError};
use crate::matcore::{BlockPsd, HermitianMatrix, MatError, Spectrum};
use crate::numrange::{analyze_range, DistanceBracket, RangeError, RangeSummary, WidthBracket, ZeroVerdict};

pub use functions::{concave_menu, convex_menu, identity_function, FunctionMenuItem, Shape};
pub use proof::{lemma2_construct, Branch, Lemma2Report, ProofStep, ProofTrace};

/// Relative factor of the default check tolerance `1e-8 * max(1, trace M)`.
pub const CHECK_REL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TheoremError {
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Range(#[from] RangeError),
    #[error(transparent)]
    Majorize(#[from] MajorizeError),
    #[error("function `{name}` rejected: {reason}")]
    InvalidFunction { name: String, reason: String },
    #[error("rho is undefined: distance bracket [{d_lower}, {d_upper}] does not exclude 0")]
    RhoUndefined { d_lower: f64, d_upper: f64 },
    #[error("hypothesis {what} fails: smallest eigenvalue {lambda_min:.6e}")]
    HypothesisFailed { what: String, lambda_min: f64 },
    #[error("off-diagonal block is not Hermitian (residual {residual:.3e})")]
    NotHermitianX { residual: f64 },
    #[error("proof step {index} ({name}) fails with slack {slack:.3e}")]
    StepFailed {
        index: usize,
        name: String,
        slack: f64,
        report: Option<Box<MajorizationReport>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

/// Inputs a report depends on, sufficient to reproduce it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InputDigest {
    pub n: usize,
    pub seed: Option<u64>,
    pub m: usize,
    pub d_lower: f64,
    pub d_upper: f64,
    pub width_lower: f64,
    pub width_upper: f64,
    pub contains_zero: ZeroVerdict,
    pub check_tol: f64,
}

/// Outcome of one claim on one instance. `slack >= -tol` iff the claim holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub claim: String,
    pub digest: InputDigest,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub slack: f64,
    pub tol: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub majorization: Option<MajorizationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<ProofStep>,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Diameter difference and ratio for the distance-to-spread comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoReport {
    pub digest: InputDigest,
    /// Spread of the full matrix.
    pub diam_full: f64,
    /// Spread of `A ⊕ B`.
    pub diam_direct_sum: f64,
    pub difference: f64,
    /// `difference / (2 d_lower)`.
    pub rho: f64,
    pub notes: Vec<String>,
}

/// A validated block matrix with everything the checkers share: spectra of
/// `M` and of `(A+B)/2`, and the brackets for `d` and the width of `W(X)`.
#[derive(Debug, Clone)]
pub struct Instance {
    block: BlockPsd,
    seed: Option<u64>,
    full: Spectrum,
    half: HermitianMatrix,
    half_spec: Spectrum,
    distance: DistanceBracket,
    width: WidthBracket,
    summary: RangeSummary,
    check_rel: f64,
}

fn maj(left: &[f64], right: &[f64], tol: f64) -> MajorizationReport {
    majorization_of_spectra(left, right, tol).expect("spectra of equal non-zero length")
}

fn anti(left: &[f64], right: &[f64], tol: f64) -> MajorizationReport {
    antinorm_dominance_of_spectra(left, right, tol).expect("spectra of equal non-zero length")
}

const D_LOWER_NOTE: &str = "consumes d_lower";

impl Instance {
    pub fn new(block: BlockPsd, m: usize) -> Result<Self, TheoremError> {
        let full = block.assemble().eigenvalues()?;
        let half = block.half_sum();
        let half_spec = half.eigenvalues()?;
        let analysis = analyze_range(block.x(), m)?;
        Ok(Self {
            block,
            seed: None,
            full,
            half,
            half_spec,
            distance: analysis.distance,
            width: analysis.width,
            summary: analysis.summary,
            check_rel: CHECK_REL,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Replaces the relative factor of the check tolerance.
    pub fn with_check_rel(mut self, rel: f64) -> Self {
        self.check_rel = rel;
        self
    }

    pub fn block(&self) -> &BlockPsd {
        &self.block
    }

    pub fn n(&self) -> usize {
        self.block.n()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn full_spectrum(&self) -> &Spectrum {
        &self.full
    }

    pub fn half_sum(&self) -> &HermitianMatrix {
        &self.half
    }

    pub fn half_sum_spectrum(&self) -> &Spectrum {
        &self.half_spec
    }

    pub fn distance(&self) -> &DistanceBracket {
        &self.distance
    }

    pub fn width(&self) -> &WidthBracket {
        &self.width
    }

    pub fn range_summary(&self) -> &RangeSummary {
        &self.summary
    }

    pub fn d_lower(&self) -> f64 {
        self.distance.lower
    }

    pub fn d_upper(&self) -> f64 {
        self.distance.upper
    }

    /// `check_rel * max(1, trace M)`.
    pub fn check_tol(&self) -> f64 {
        self.check_rel * self.full.sum().max(1.0)
    }

    /// Tolerance for sums of function values: never below `check_tol`, and
    /// relative to the magnitude of the compared values.
    fn function_tol(&self, values: &[f64]) -> f64 {
        let mass: f64 = values.iter().map(|v| v.abs()).sum();
        self.check_tol().max(self.check_rel * mass)
    }

    pub fn digest(&self) -> InputDigest {
        InputDigest {
            n: self.n(),
            seed: self.seed,
            m: self.summary.m,
            d_lower: self.distance.lower,
            d_upper: self.distance.upper,
            width_lower: self.width.lower,
            width_upper: self.width.upper,
            contains_zero: self.distance.contains_zero,
            check_tol: self.check_tol(),
        }
    }

    fn report(&self, claim: impl Into<String>, left: Vec<f64>, right: Vec<f64>, slack: f64, tol: f64) -> CheckReport {
        CheckReport {
            claim: claim.into(),
            digest: self.digest(),
            left,
            right,
            slack,
            tol,
            verdict: if slack >= -tol { Verdict::Holds } else { Verdict::Fails },
            notes: Vec::new(),
            diagnostics: BTreeMap::new(),
            majorization: None,
            steps: Vec::new(),
        }
    }

    fn majorization_report(&self, claim: &str, rep: MajorizationReport, slack: f64) -> CheckReport {
        let mut r = self.report(
            claim,
            rep.k_partial_sums_left.clone(),
            rep.k_partial_sums_right.clone(),
            slack,
            rep.tol,
        );
        r.majorization = Some(rep);
        r
    }

    /// Eigenvalues of `((A+B)/2 + dI) ⊕ ((A+B)/2 - dI)`.
    pub fn shifted_spectrum(&self, d: f64) -> Vec<f64> {
        let h = self.half_spec.values();
        h.iter().map(|&mu| mu + d).chain(h.iter().map(|&mu| mu - d)).collect()
    }

    /// Ky Fan norms of `M` are bounded by those of `(A+B+wI) ⊕ 0` with `w = width_upper`.
    pub fn theorem1(&self) -> CheckReport {
        let mut r = self.theorem1_at(self.width.upper);
        r.notes.push("consumes width_upper".into());
        r
    }

    pub fn theorem1_at(&self, omega: f64) -> CheckReport {
        let n = self.n();
        let mut right: Vec<f64> = self
            .block
            .partial_trace()
            .eigenvalues()
            .map(|s| s.into_values())
            .unwrap_or_else(|_| self.half_spec.values().iter().map(|v| 2.0 * v).collect());
        right.iter_mut().for_each(|v| *v += omega);
        right.extend(std::iter::repeat_n(0.0, n));
        let rep = maj(self.full.values(), &right, self.check_tol());
        let slack = rep.min_slack;
        let mut r = self.majorization_report("theorem1", rep, slack);
        r.diagnostics.insert("omega".into(), omega);
        r
    }

    /// `((A+B)/2 + dI) ⊕ ((A+B)/2 - dI) ≺ M` with `d = d_lower`, plus the
    /// same comparison at `d_upper` as a tightness diagnostic.
    pub fn main(&self) -> CheckReport {
        let mut r = self.main_at(self.d_lower());
        let tight = self.main_at(self.d_upper());
        r.notes.push(D_LOWER_NOTE.into());
        r.notes
            .push("slack_at_d_upper reruns the claim with d_upper; it may be negative by the bracket gap".into());
        r.diagnostics.insert("slack_at_d_upper".into(), tight.slack);
        r.diagnostics
            .insert("bracket_gap".into(), self.d_upper() - self.d_lower());
        r
    }

    pub fn main_at(&self, d: f64) -> CheckReport {
        let rep = maj(&self.shifted_spectrum(d), self.full.values(), self.check_tol());
        let slack = rep.slack();
        let mut r = self.majorization_report("main", rep, slack);
        r.diagnostics.insert("d".into(), d);
        r
    }

    /// `lambda_min((A+B)/2) >= d_lower`.
    pub fn half_sum_dominates_d(&self) -> CheckReport {
        let mut r = self.half_sum_dominates_d_at(self.d_lower());
        r.notes.push(D_LOWER_NOTE.into());
        r
    }

    pub fn half_sum_dominates_d_at(&self, d: f64) -> CheckReport {
        let low = self.half_spec.min();
        self.report("half-sum-dominates-d", vec![low], vec![d], low - d, self.check_tol())
    }

    fn require_shape(&self, f: &FunctionMenuItem, shape: Shape) -> Result<(), TheoremError> {
        if f.shape() != shape {
            return Err(TheoremError::InvalidFunction {
                name: f.name().into(),
                reason: format!("expected a {shape:?} function"),
            });
        }
        f.validate(self.full.max())
    }

    /// `Tr g(H + dI) + Tr g(H - dI) <= Tr g(M)` for convex `g`, `H = (A+B)/2`.
    pub fn trace_convex(&self, g: &FunctionMenuItem) -> Result<CheckReport, TheoremError> {
        let mut r = self.trace_convex_at(g, self.d_lower())?;
        r.notes.push(D_LOWER_NOTE.into());
        Ok(r)
    }

    pub fn trace_convex_at(&self, g: &FunctionMenuItem, d: f64) -> Result<CheckReport, TheoremError> {
        self.require_shape(g, Shape::Convex)?;
        let left_vals = g.apply(&self.shifted_spectrum(d));
        let right_vals = g.apply(self.full.values());
        let left: f64 = left_vals.iter().sum();
        let right: f64 = right_vals.iter().sum();
        let tol = self.function_tol(&right_vals);
        Ok(self.report(
            format!("trace-convex[{}]", g.name()),
            vec![left],
            vec![right],
            right - left,
            tol,
        ))
    }

    /// Every Ky Fan anti-norm of `(H + dI) ⊕ (H - dI)` dominates that of `M`.
    pub fn antinorm(&self) -> CheckReport {
        let mut r = self.antinorm_at(self.d_lower());
        r.notes.push(D_LOWER_NOTE.into());
        r
    }

    pub fn antinorm_at(&self, d: f64) -> CheckReport {
        let rep = anti(&self.shifted_spectrum(d), self.full.values(), self.check_tol());
        let slack = rep.min_slack;
        self.majorization_report("antinorm", rep, slack)
    }

    /// `lambda_max(M) - lambda_max(H) >= d` and `lambda_min(H) - lambda_min(M) >= d`.
    pub fn maxmin(&self) -> CheckReport {
        let mut r = self.maxmin_at(self.d_lower());
        r.notes.push(D_LOWER_NOTE.into());
        r
    }

    pub fn maxmin_at(&self, d: f64) -> CheckReport {
        let top = self.full.max() - self.half_spec.max();
        let bottom = self.half_spec.min() - self.full.min();
        self.report(
            "maxmin",
            vec![top, bottom],
            vec![d, d],
            (top - d).min(bottom - d),
            self.check_tol(),
        )
    }

    /// `diam W(M) - diam W(H) >= 2d`; both diameters are spectral spreads.
    pub fn diameter(&self) -> CheckReport {
        let mut r = self.diameter_at(self.d_lower());
        r.notes.push(D_LOWER_NOTE.into());
        r
    }

    pub fn diameter_at(&self, d: f64) -> CheckReport {
        let diff = self.full.spread() - self.half_spec.spread();
        self.report("diameter", vec![diff], vec![2.0 * d], diff - 2.0 * d, self.check_tol())
    }

    /// `det(H^2 - d^2 I) >= det M`, compared in the log domain when both
    /// sides exceed `check_tol`.
    pub fn det(&self) -> CheckReport {
        let mut r = self.det_at(self.d_lower());
        r.notes.push(D_LOWER_NOTE.into());
        r
    }

    pub fn det_at(&self, d: f64) -> CheckReport {
        let tol = self.check_tol();
        let left: f64 = self
            .half_spec
            .values()
            .iter()
            .map(|&mu| ((mu + d).max(0.0)) * ((mu - d).max(0.0)))
            .product();
        let right: f64 = self.full.values().iter().map(|l| l.max(0.0)).product();
        let log_domain = left > tol && right > tol;
        let slack = if log_domain {
            left.ln() - right.ln()
        } else {
            left - right
        };
        let mut r = self.report("det", vec![left], vec![right], slack, tol);
        r.notes.push(if log_domain {
            "log-domain comparison".into()
        } else {
            "direct comparison".into()
        });
        r
    }

    /// Anti-norm dominance after applying a nonnegative concave `f` spectrally.
    pub fn concave_antinorm(&self, f: &FunctionMenuItem) -> Result<CheckReport, TheoremError> {
        let mut r = self.concave_antinorm_at(f, self.d_lower())?;
        r.notes.push(D_LOWER_NOTE.into());
        Ok(r)
    }

    pub fn concave_antinorm_at(&self, f: &FunctionMenuItem, d: f64) -> Result<CheckReport, TheoremError> {
        self.require_shape(f, Shape::ConcaveNonnegative)?;
        let left = f.apply(&self.shifted_spectrum(d));
        let right = f.apply(self.full.values());
        let rep = anti(&left, &right, self.function_tol(&right));
        let slack = rep.min_slack;
        Ok(self.majorization_report(&format!("concave-antinorm[{}]", f.name()), rep, slack))
    }

    /// `M ≺ (A+B) ⊕ 0` for Hermitian `X`.
    pub fn theorem2_consequence(&self) -> Result<CheckReport, TheoremError> {
        if !self.block.x_is_hermitian() {
            return Err(TheoremError::NotHermitianX {
                residual: self.block.x().hermitian_residual(),
            });
        }
        let mut right = self.block.partial_trace().eigenvalues()?.into_values();
        right.extend(std::iter::repeat_n(0.0, self.n()));
        let rep = maj(self.full.values(), &right, self.check_tol());
        let slack = rep.slack();
        Ok(self.majorization_report("theorem2-consequence", rep, slack))
    }

    /// `rho = (diam W(M) - diam W(A ⊕ B)) / (2 d_lower)`.
    pub fn rho(&self) -> Result<RhoReport, TheoremError> {
        let d = self.d_lower();
        if !(d > 0.0) {
            return Err(TheoremError::RhoUndefined {
                d_lower: d,
                d_upper: self.d_upper(),
            });
        }
        let direct = self.block.a().direct_sum(self.block.b()).eigenvalues()?;
        let diam_full = self.full.spread();
        let diam_direct_sum = direct.spread();
        let difference = diam_full - diam_direct_sum;
        Ok(RhoReport {
            digest: self.digest(),
            diam_full,
            diam_direct_sum,
            difference,
            rho: difference / (2.0 * d),
            notes: vec![
                D_LOWER_NOTE.into(),
                "for the alpha family the difference is 2/alpha and rho = 1/alpha; \
                 a value of 2/alpha quoted for rho is the difference, a factor 2 larger"
                    .into(),
            ],
        })
    }

    /// Replays the proof and packages it as a report; a failing step gives
    /// a failing report rather than an error.
    pub fn proof_report(&self) -> CheckReport {
        match self.proof_trace() {
            Ok(trace) => {
                let slack = trace.steps.iter().map(|s| s.slack).fold(f64::INFINITY, f64::min);
                let mut r = self.report("proof-trace", vec![], vec![], slack, self.check_tol());
                r.notes.push(format!("branch: {}", trace.branch.describe()));
                if let Some(theta) = trace.theta_star {
                    r.diagnostics.insert("theta_star".into(), theta);
                }
                r.diagnostics.insert("d".into(), trace.d);
                r.steps = trace.steps;
                r
            }
            Err(e) => {
                let slack = match &e {
                    TheoremError::StepFailed { slack, .. } => *slack,
                    _ => f64::NEG_INFINITY,
                };
                let mut r = self.report("proof-trace", vec![], vec![], slack, self.check_tol());
                r.verdict = Verdict::Fails;
                r.notes.push(e.to_string());
                if let TheoremError::StepFailed { report: Some(rep), .. } = e {
                    r.majorization = Some(*rep);
                }
                r
            }
        }
    }

    /// Every checker with its menu; Hermitian `X` adds the decomposition consequence.
    pub fn run_all(&self) -> Result<Vec<CheckReport>, TheoremError> {
        let mut out = vec![self.theorem1(), self.main(), self.half_sum_dominates_d()];
        for g in convex_menu(self.full.max()) {
            out.push(self.trace_convex(&g)?);
        }
        out.extend([self.antinorm(), self.maxmin(), self.diameter(), self.det()]);
        for f in concave_menu(self.median()) {
            out.push(self.concave_antinorm(&f)?);
        }
        if self.block.x_is_hermitian() {
            out.push(self.theorem2_consequence()?);
        }
        out.push(self.proof_report());
        Ok(out)
    }

    /// Median eigenvalue of `M` (lower median for even orders).
    pub fn median(&self) -> f64 {
        let v = self.full.values();
        v[v.len() / 2]
    }
}

macro_rules! free_checker {
    ($(#[$doc:meta])* $name:ident => $method:ident) => {
        $(#[$doc])*
        pub fn $name(b: &BlockPsd, m: usize) -> Result<CheckReport, TheoremError> {
            Ok(Instance::new(b.clone(), m)?.$method())
        }
    };
}

free_checker!(verify_theorem1 => theorem1);
free_checker!(verify_main => main);
free_checker!(check_half_sum_dominates_d => half_sum_dominates_d);
free_checker!(verify_antinorm => antinorm);
free_checker!(verify_maxmin => maxmin);
free_checker!(verify_diameter => diameter);
free_checker!(verify_det => det);

pub fn verify_trace_convex(b: &BlockPsd, g: &FunctionMenuItem, m: usize) -> Result<CheckReport, TheoremError> {
    Instance::new(b.clone(), m)?.trace_convex(g)
}

pub fn verify_concave_antinorm(b: &BlockPsd, f: &FunctionMenuItem, m: usize) -> Result<CheckReport, TheoremError> {
    Instance::new(b.clone(), m)?.concave_antinorm(f)
}

pub fn compute_rho(b: &BlockPsd, m: usize) -> Result<RhoReport, TheoremError> {
    Instance::new(b.clone(), m)?.rho()
}

pub fn proof_trace(b: &BlockPsd, m: usize) -> Result<ProofTrace, TheoremError> {
    Instance::new(b.clone(), m)?.proof_trace()
}

/// `M ≺ (A+B) ⊕ 0` for Hermitian `X`, without the range analysis.
pub fn theorem2_consequence(b: &BlockPsd, tol: f64) -> Result<MajorizationReport, TheoremError> {
    if !b.x_is_hermitian() {
        return Err(TheoremError::NotHermitianX {
            residual: b.x().hermitian_residual(),
        });
    }
    let full = b.assemble().eigenvalues()?.into_values();
    let mut right = b.partial_trace().eigenvalues()?.into_values();
    right.extend(std::iter::repeat_n(0.0, b.n()));
    Ok(majorization_of_spectra(&full, &right, tol)?)
}

#[cfg(test)]
mod tests;
