//! Moment operators of the detector, intrinsic noise, the `r^-2` residual
//! law, exponential-moment bounds and determinacy probes.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{HdError, Result};
use crate::fock::{rotated_quadrature, FockVector, HermitianOperator, C64};
use crate::homodyne::{homodyne_distribution, BasisDilation, LatticeDistribution};
use crate::quadrature::quadrature_moment;
use crate::state::SignalStateSpec;

/// Largest `deficit * max|x|^k` an empirical moment tolerates.
pub const TAIL_BOUND: f64 = 1e-8;

/// Default cap on moment orders.
pub const DEFAULT_KMAX: u32 = 8;

/// `sum_j p_j x_j^k`, refused when the unrepresented mass could move it by
/// more than [`TAIL_BOUND`].
pub fn empirical_moment(dist: &LatticeDistribution, k: u32) -> Result<f64> {
    let edge = dist.kmin.unsigned_abs().max(dist.kmax.unsigned_abs()) as f64 * dist.spacing;
    if k > 0 && dist.deficit * edge.powi(k as i32) >= TAIL_BOUND {
        return Err(HdError::TailDominated {
            order: k,
            deficit: dist.deficit,
            max_abs_x: edge,
        });
    }
    Ok(dist.raw_moment(k))
}

/// Size of the leading block on which truncated operator identities of
/// order `k` are exact: indices `n` with `n + k + 2 < dim`.
pub fn low_fock_block(dim: usize, k: u32) -> usize {
    dim.saturating_sub(k as usize + 2)
}

/// `(Q_theta)^k` on the first `dim` levels without truncation error,
/// computed from a matrix `k` levels larger.
pub fn quadrature_power(theta: f64, k: u32, dim: usize) -> Result<DMatrix<C64>> {
    let big = dim + k as usize + 1;
    let q = rotated_quadrature(theta, big.max(2))?.into_entries();
    let mut p = DMatrix::<C64>::identity(big, big);
    for _ in 0..k {
        p = &p * &q;
    }
    Ok(p.view((0, 0), (dim, dim)).into_owned())
}

/// `sum_k x_k^order E^z({x_k})` on the first `dim` levels.
pub fn moment_operator_matrix(r: f64, theta: f64, k: u32, dim: usize) -> Result<HermitianOperator> {
    Ok(BasisDilation::new(r, theta, dim)?.integrate(|x| x.powi(k as i32)))
}

/// Moment operators of orders `0..=kmax` sharing one dilation.
pub fn moment_operators(r: f64, theta: f64, kmax: u32, dim: usize) -> Result<Vec<HermitianOperator>> {
    let dil = BasisDilation::new(r, theta, dim)?;
    Ok((0..=kmax).map(|k| dil.integrate(|x| x.powi(k as i32))).collect())
}

/// `M_2 - M_1^2`, which the detector makes equal to `N/(2 r^2)`.
pub fn intrinsic_noise_matrix(r: f64, theta: f64, dim: usize) -> Result<HermitianOperator> {
    // One extra level keeps the tridiagonal product exact on the block.
    let ops = moment_operators(r, theta, 2, dim + 1)?;
    let m1 = ops[1].entries();
    let noise = ops[2].entries() - m1 * m1;
    let block = noise.view((0, 0), (dim, dim)).into_owned();
    HermitianOperator::new((&block + block.adjoint()) * C64::new(0.5, 0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub r: f64,
    pub k: u32,
    pub value: f64,
}

/// `|<psi|(M_k(r) - Q_theta^k)|phi>|` for each `r`.
pub fn residual_scaling_probe(
    k: u32,
    theta: f64,
    r_list: &[f64],
    phi: &FockVector,
    psi: &FockVector,
) -> Result<Vec<ResidualEntry>> {
    if let Some(r) = r_list.iter().find(|&&r| !(r >= 1.0 && r.is_finite())) {
        return Err(HdError::invalid(format!("residual probe needs r >= 1, got {r}")));
    }
    let dim = phi.support().max(psi.support()) + k as usize + 3;
    let q = quadrature_power(theta, k, dim)?;
    r_list
        .iter()
        .map(|&r| {
            let m = moment_operator_matrix(r, theta, k, dim)?;
            let diff = HermitianOperator::from_hermitian_part(m.entries() - &q);
            Ok(ResidualEntry {
                r,
                k,
                value: diff.matrix_element(psi, phi).norm(),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpBound {
    pub a: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `sum_k p_k e^{a|x_k|}` for `|beta>` against
/// `exp[(|beta|^2 + r^2)(e^{a/(sqrt 2 r)} - 1)]`.
pub fn exp_moment_bound_check(beta: C64, r: f64, theta: f64, a: f64) -> Result<ExpBound> {
    if !(a.is_finite() && a > 0.0) {
        return Err(HdError::invalid(format!("exponent a must be positive, got {a}")));
    }
    let dist = homodyne_distribution(&SignalStateSpec::coherent(beta)?, r, theta)?;
    let lhs = dist.expectation(|x| (a * x.abs()).exp());
    let rhs = exp_bound_rhs(beta, r, a);
    Ok(ExpBound { a, lhs, rhs, holds: lhs <= rhs + 1e-9 })
}

pub fn exp_bound_rhs(beta: C64, r: f64, a: f64) -> f64 {
    let s = a / (std::f64::consts::SQRT_2 * r);
    ((beta.norm_sqr() + r * r) * s.exp_m1()).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeterminacyVerdict {
    ConsistentWithDeterminacy,
    IndeterminateSuspect,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeterminacyProbe {
    /// `s_k = M_{2k}^{1/(2k)} / (2k)` for `k = 1..=K`.
    pub statistic: Vec<f64>,
    pub running_min: Vec<f64>,
    pub verdict: DeterminacyVerdict,
}

/// Growth statistic of the even moments in `moments = [M_0, ..., M_{2K}]`.
///
/// Flagged as diverging when the last three values strictly increase and
/// end above `s_1`.
pub fn determinacy_probe(moments: &[f64]) -> Result<DeterminacyProbe> {
    let kk = moments.len().saturating_sub(1) / 2;
    if kk < 4 {
        return Err(HdError::invalid("determinacy probe needs even moments up to order 8"));
    }
    let mut statistic = Vec::with_capacity(kk);
    for k in 1..=kk {
        let m = moments[2 * k];
        if !(m.is_finite() && m >= 0.0) {
            return Err(HdError::invalid(format!("even moment M_{} = {m} is not finite and nonnegative", 2 * k)));
        }
        statistic.push(m.powf(1.0 / (2 * k) as f64) / (2 * k) as f64);
    }
    let running_min = statistic
        .iter()
        .scan(f64::INFINITY, |acc, &s| {
            *acc = acc.min(s);
            Some(*acc)
        })
        .collect();
    let tail = &statistic[kk - 3..];
    let rising = tail.windows(2).all(|w| w[1] > w[0]);
    let verdict = if rising && statistic[kk - 1] > statistic[0] {
        DeterminacyVerdict::IndeterminateSuspect
    } else {
        DeterminacyVerdict::ConsistentWithDeterminacy
    };
    Ok(DeterminacyProbe { statistic, running_min, verdict })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentTables {
    pub empirical: Vec<f64>,
    pub operator: Vec<f64>,
}

/// Moment report for one state at one oscillator amplitude.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub r: f64,
    pub theta: f64,
    pub kmax: u32,
    pub moments: MomentTables,
    /// Distance of the operator moments from the quadrature moments.
    pub residuals: Vec<ResidualEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exp_bound: Option<ExpBound>,
    pub deficit: f64,
    pub tail_bound: f64,
}

pub fn moment_report(
    state: &SignalStateSpec,
    r: f64,
    theta: f64,
    kmax: u32,
    exp_a: Option<f64>,
) -> Result<MomentReport> {
    let dist = homodyne_distribution(state, r, theta)?;
    let empirical = (0..=kmax)
        .map(|k| empirical_moment(&dist, k).map_err(|e| e.at(format!("k={k}"))))
        .collect::<Result<Vec<_>>>()?;
    let ops = moment_operators(r, theta, kmax, state.max_dim())?;
    let operator: Vec<f64> = ops
        .iter()
        .map(|op| {
            state
                .components()
                .iter()
                .map(|c| c.weight * op.expectation(&c.vector))
                .sum()
        })
        .collect();
    let residuals = operator
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let k = k as u32;
            Ok(ResidualEntry { r, k, value: (m - quadrature_moment(state, theta, k)?).abs() })
        })
        .collect::<Result<Vec<_>>>()?;
    let exp_bound = match exp_a {
        None => None,
        Some(a) => {
            let beta = state
                .coherent_amplitude()
                .ok_or_else(|| HdError::invalid("exponential bound needs a coherent state"))?;
            Some(exp_moment_bound_check(beta, r, theta, a)?)
        }
    };
    Ok(MomentReport {
        r,
        theta,
        kmax,
        moments: MomentTables { empirical, operator },
        residuals,
        exp_bound,
        deficit: dist.deficit,
        tail_bound: TAIL_BOUND,
    })
}
