//! Spectral statistics of the rotated quadrature `Q_theta`.
//!
//! Coherent states have the Gaussian law with mean
//! `sqrt 2 Re(e^{-i theta} beta)` and variance `1/2`. General states use
//! the Hermite-function position representation.

use serde::Serialize;
use libm::erf;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{HdError, Result};
use crate::fock::{position_wavefunction, wavefunction_at, FockVector, C64};
use crate::special::{gauss_legendre, max_dim};
use crate::state::SignalStateSpec;

/// Variance of every coherent-state quadrature law.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Tail mass a density grid may leave uncovered.
pub const GRID_TAIL_TOL: f64 = 1e-8;

const PANEL_WIDTH: f64 = 0.05;
const PANEL_NODES: usize = 8;

/// A law on the real line, either closed-form Gaussian or tabulated.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ContinuousDistribution {
    Gaussian {
        mean: f64,
        variance: f64,
    },
    Grid {
        xgrid: Vec<f64>,
        density: Vec<f64>,
        trunc_deficit: f64,
    },
}

impl ContinuousDistribution {
    pub fn gaussian(mean: f64, variance: f64) -> Result<Self> {
        if !(mean.is_finite() && variance.is_finite() && variance > 0.0) {
            return Err(HdError::invalid("gaussian needs finite mean and positive variance"));
        }
        Ok(Self::Gaussian { mean, variance })
    }

    pub fn density(&self, x: f64) -> f64 {
        match self {
            Self::Gaussian { mean, variance } => {
                (-(x - mean).powi(2) / (2.0 * variance)).exp() / (2.0 * PI * variance).sqrt()
            }
            Self::Grid { xgrid, density, .. } => interpolate(xgrid, density, x),
        }
    }

    /// `P(X <= x)`; trapezoid-accumulated for grids.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Self::Gaussian { mean, variance } => 0.5 * (1.0 + erf((x - mean) / (2.0 * variance).sqrt())),
            Self::Grid { xgrid, density, .. } => {
                let mut acc = 0.0;
                for i in 1..xgrid.len() {
                    let (a, b) = (xgrid[i - 1], xgrid[i]);
                    if x <= a {
                        break;
                    }
                    let hi = b.min(x);
                    let fhi = interpolate(xgrid, density, hi);
                    acc += 0.5 * (density[i - 1] + fhi) * (hi - a);
                }
                acc
            }
        }
    }

    /// Total mass: one for Gaussians, trapezoid integral for grids.
    pub fn integral(&self) -> f64 {
        match self {
            Self::Gaussian { .. } => 1.0,
            Self::Grid { xgrid, density, .. } => trapezoid(xgrid, density),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Gaussian { mean, .. } => *mean,
            Self::Grid { xgrid, density, .. } => {
                let xf: Vec<f64> = xgrid.iter().zip(density).map(|(x, f)| x * f).collect();
                trapezoid(xgrid, &xf) / trapezoid(xgrid, density)
            }
        }
    }

    /// Mass of a single point: zero, the law being absolutely continuous.
    pub fn point_mass(&self, _x: f64) -> f64 {
        0.0
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if xs.is_empty() || x < xs[0] || x > xs[xs.len() - 1] {
        return 0.0;
    }
    let i = xs.partition_point(|&g| g <= x).min(xs.len() - 1).max(1);
    let (x0, x1) = (xs[i - 1], xs[i]);
    if x1 == x0 {
        return ys[i];
    }
    let t = (x - x0) / (x1 - x0);
    ys[i - 1] + t * (ys[i] - ys[i - 1])
}

fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (y[0] + y[1]) * (x[1] - x[0]))
        .sum()
}

/// Gaussian law of `Q_theta` in the coherent state `|beta>`.
pub fn coherent_quadrature_law(beta: C64, theta: f64) -> Result<ContinuousDistribution> {
    if !(beta.re.is_finite() && beta.im.is_finite()) {
        return Err(HdError::invalid("coherent amplitude must be finite"));
    }
    ContinuousDistribution::gaussian(coherent_quadrature_mean(beta, theta), VACUUM_VARIANCE)
}

pub fn coherent_quadrature_mean(beta: C64, theta: f64) -> f64 {
    std::f64::consts::SQRT_2 * (C64::from_polar(1.0, -theta) * beta).re
}

/// Half-width around zero a density grid must cover so that the uncovered
/// mass stays below [`GRID_TAIL_TOL`].
pub fn required_half_width(mean_photon_number: f64) -> f64 {
    4.5 + 2.0 * mean_photon_number.max(0.0).sqrt()
}

/// 2001 uniform points over `[q - 10, q + 10]` widened by `4 sqrt<N>`.
pub fn default_grid(state: &SignalStateSpec, theta: f64) -> Result<Vec<f64>> {
    let q = quadrature_moment(state, theta, 1)?;
    let w = 10.0 + 4.0 * state.mean_photon_number().sqrt();
    let n = 2001;
    Ok((0..n)
        .map(|i| q - w + 2.0 * w * i as f64 / (n - 1) as f64)
        .collect())
}

/// Density `sum_j t_j |psi_j(x)|^2` of `Q_theta` on `xgrid`.
pub fn quadrature_density(state: &SignalStateSpec, theta: f64, xgrid: &[f64]) -> Result<ContinuousDistribution> {
    let need = required_half_width(state.mean_photon_number());
    let (lo, hi) = match (xgrid.first(), xgrid.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(HdError::invalid("density grid is empty")),
    };
    if xgrid.windows(2).any(|w| w[1] < w[0]) {
        return Err(HdError::invalid("density grid must be nondecreasing"));
    }
    if lo > -need || hi < need {
        return Err(HdError::GridTooNarrow {
            lo,
            hi,
            need_lo: -need,
            need_hi: need,
        });
    }
    let mut density = vec![0.0; xgrid.len()];
    for c in state.components() {
        let psi = position_wavefunction(&c.vector, theta, xgrid)?;
        for (d, p) in density.iter_mut().zip(psi) {
            *d += c.weight * p.norm_sqr();
        }
    }
    Ok(ContinuousDistribution::Grid {
        xgrid: xgrid.to_vec(),
        density,
        trunc_deficit: state.trunc_deficit(),
    })
}

/// `<phi|Q_theta^k|phi>`, averaged over mixture components.
///
/// The power is applied to an exactly padded vector, so no truncation edge
/// enters; the padded dimension must fit the budget.
pub fn quadrature_moment(state: &SignalStateSpec, theta: f64, k: u32) -> Result<f64> {
    state
        .components()
        .iter()
        .map(|c| Ok(c.weight * vector_quadrature_moment(&c.vector, theta, k)?))
        .sum()
}

/// `<phi|Q_theta^k|phi>` for one vector.
pub fn vector_quadrature_moment(phi: &FockVector, theta: f64, k: u32) -> Result<f64> {
    let support = phi.support();
    let need = support + k as usize;
    if need > max_dim() {
        return Err(HdError::TruncationTooSmall {
            dim: max_dim(),
            order: k,
            support,
        });
    }
    let base: Vec<C64> = phi.amps()[..support.max(1)].to_vec();
    let half = k / 2;
    let left = (0..half).fold(base.clone(), |v, _| apply_quadrature(&v, theta));
    let right = (0..k - 2 * half).fold(left.clone(), |v, _| apply_quadrature(&v, theta));
    let mut acc = C64::new(0.0, 0.0);
    for (l, r) in left.iter().zip(&right) {
        acc += l.conj() * r;
    }
    Ok(acc.re)
}

/// `Q_theta v` on the untruncated space; output grows by one level.
fn apply_quadrature(v: &[C64], theta: f64) -> Vec<C64> {
    let down = C64::from_polar(FRAC_1_SQRT_2, -theta);
    let up = down.conj();
    let mut out = vec![C64::new(0.0, 0.0); v.len() + 1];
    for (n, &a) in v.iter().enumerate() {
        // a|n> = sqrt(n)|n-1>, a*|n> = sqrt(n+1)|n+1>
        if n > 0 {
            out[n - 1] += down * (n as f64).sqrt() * a;
        }
        out[n + 1] += up * ((n + 1) as f64).sqrt() * a;
    }
    out
}

/// Raw moment `E[X^k]` of a Gaussian.
pub fn gaussian_raw_moment(mean: f64, variance: f64, k: u32) -> f64 {
    // sum_j C(k, 2j) mean^{k-2j} variance^j (2j-1)!!
    let mut acc = 0.0;
    let mut binom = 1.0;
    let mut dfact = 1.0;
    for j in 0..=(k / 2) {
        if j > 0 {
            let (kk, jj) = (k as f64, j as f64);
            binom *= (kk - 2.0 * jj + 2.0) * (kk - 2.0 * jj + 1.0) / ((2.0 * jj - 1.0) * (2.0 * jj));
            dfact *= 2.0 * jj - 1.0;
        }
        acc += binom * mean.powi((k - 2 * j) as i32) * variance.powi(j as i32) * dfact;
    }
    acc
}

/// Total mass a continuous law puts on a countable set of atoms.
pub fn gaussian_lattice_mass(law: &ContinuousDistribution, atoms: impl IntoIterator<Item = f64>) -> f64 {
    atoms.into_iter().map(|x| law.point_mass(x)).sum()
}

#[derive(Clone, Debug)]
enum LawPart {
    Gaussian { weight: f64, mean: f64 },
    Tabulated(Tabulated),
}

#[derive(Clone, Debug)]
struct Tabulated {
    weight: f64,
    amps: Vec<C64>,
    lo: f64,
    width: f64,
    cumulative: Vec<f64>,
}

/// Law of `Q_theta` for a signal state with an accurate CDF.
///
/// Coherent components use the closed form. Other components integrate
/// `|psi|^2` with Gauss-Legendre panels over `<Q> +- (12 + 4 sqrt<N>)`.
#[derive(Clone, Debug)]
pub struct QuadratureLaw {
    parts: Vec<LawPart>,
    nodes: Vec<f64>,
    gl_weights: Vec<f64>,
}

impl QuadratureLaw {
    pub fn new(state: &SignalStateSpec, theta: f64) -> Result<Self> {
        let (nodes, gl_weights) = gauss_legendre(PANEL_NODES);
        let mut parts = Vec::new();
        for c in state.components() {
            if let Some(beta) = c.coherent {
                parts.push(LawPart::Gaussian {
                    weight: c.weight,
                    mean: coherent_quadrature_mean(beta, theta),
                });
                continue;
            }
            let rotated = c.vector.phase_rotated(-theta);
            let amps = rotated.amps()[..rotated.support().max(1)].to_vec();
            let q = vector_quadrature_moment(&rotated, 0.0, 1)?;
            let half = 12.0 + 4.0 * rotated.mean_photon_number().sqrt();
            let lo = q - half;
            let panels = (2.0 * half / PANEL_WIDTH).ceil() as usize;
            let width = 2.0 * half / panels as f64;
            let mut cumulative = Vec::with_capacity(panels + 1);
            cumulative.push(0.0);
            let mut acc = 0.0;
            for p in 0..panels {
                let a = lo + p as f64 * width;
                acc += gl_integrate(&nodes, &gl_weights, a, a + width, |x| {
                    wavefunction_at(&amps, x).norm_sqr()
                });
                cumulative.push(acc);
            }
            parts.push(LawPart::Tabulated(Tabulated {
                weight: c.weight,
                amps,
                lo,
                width,
                cumulative,
            }));
        }
        Ok(Self { parts, nodes, gl_weights })
    }

    pub fn density(&self, x: f64) -> f64 {
        self.parts
            .iter()
            .map(|p| match p {
                LawPart::Gaussian { weight, mean } => weight * (-(x - mean).powi(2)).exp() / PI.sqrt(),
                LawPart::Tabulated(t) => t.weight * wavefunction_at(&t.amps, x).norm_sqr(),
            })
            .sum()
    }

    /// `P(Q_theta <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.parts
            .iter()
            .map(|p| match p {
                LawPart::Gaussian { weight, mean } => weight * 0.5 * (1.0 + erf(x - mean)),
                LawPart::Tabulated(t) => t.weight * self.tabulated_cdf(t, x),
            })
            .sum()
    }

    fn tabulated_cdf(&self, t: &Tabulated, x: f64) -> f64 {
        let panels = t.cumulative.len() - 1;
        if x <= t.lo {
            return 0.0;
        }
        let pos = (x - t.lo) / t.width;
        if pos >= panels as f64 {
            return t.cumulative[panels];
        }
        let p = pos.floor() as usize;
        let a = t.lo + p as f64 * t.width;
        t.cumulative[p]
            + gl_integrate(&self.nodes, &self.gl_weights, a, x, |y| {
                wavefunction_at(&t.amps, y).norm_sqr()
            })
    }

    /// Probability of an interval; endpoint closedness is immaterial.
    pub fn mass(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        self.cdf(hi) - self.cdf(lo)
    }

    /// `int f dE`, by panel quadrature over each component's support.
    pub fn expectation(&self, f: impl Fn(f64) -> f64) -> f64 {
        let mut total = 0.0;
        for p in &self.parts {
            match p {
                LawPart::Gaussian { weight, mean } => {
                    let (lo, w) = (mean - 12.0, PANEL_WIDTH);
                    let panels = (24.0 / w).round() as usize;
                    let mut acc = 0.0;
                    for i in 0..panels {
                        let a = lo + i as f64 * w;
                        acc += gl_integrate(&self.nodes, &self.gl_weights, a, a + w, |x| {
                            f(x) * (-(x - mean).powi(2)).exp()
                        });
                    }
                    total += weight * acc / PI.sqrt();
                }
                LawPart::Tabulated(t) => {
                    let panels = t.cumulative.len() - 1;
                    let mut acc = 0.0;
                    for i in 0..panels {
                        let a = t.lo + i as f64 * t.width;
                        acc += gl_integrate(&self.nodes, &self.gl_weights, a, a + t.width, |x| {
                            f(x) * wavefunction_at(&t.amps, x).norm_sqr()
                        });
                    }
                    total += t.weight * acc;
                }
            }
        }
        total
    }

    /// Total represented mass (one minus truncation losses).
    pub fn total(&self) -> f64 {
        self.parts
            .iter()
            .map(|p| match p {
                LawPart::Gaussian { weight, .. } => *weight,
                LawPart::Tabulated(t) => t.weight * t.cumulative[t.cumulative.len() - 1],
            })
            .sum()
    }

    /// Interval `[lo, hi]` outside of which every component is negligible.
    pub fn support_hint(&self) -> (f64, f64) {
        self.parts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| match p {
            LawPart::Gaussian { mean, .. } => (a.min(mean - 12.0), b.max(mean + 12.0)),
            LawPart::Tabulated(t) => {
                let hi = t.lo + t.width * (t.cumulative.len() - 1) as f64;
                (a.min(t.lo), b.max(hi))
            }
        })
    }
}

fn gl_integrate(nodes: &[f64], weights: &[f64], a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    nodes
        .iter()
        .zip(weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// `sup_x |F_a(x) - F_b(x)|` between two quadrature laws, scanned on a
/// `step`-spaced grid over both supports.
pub fn law_ks_distance(a: &QuadratureLaw, b: &QuadratureLaw, step: f64) -> f64 {
    let (la, ha) = a.support_hint();
    let (lb, hb) = b.support_hint();
    let (lo, hi) = (la.min(lb), ha.max(hb));
    let n = ((hi - lo) / step).ceil() as usize;
    (0..=n)
        .map(|i| {
            let x = lo + i as f64 * step;
            (a.cdf(x) - b.cdf(x)).abs()
        })
        .fold(0.0, f64::max)
}
