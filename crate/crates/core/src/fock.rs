//! Single-mode truncated Fock space.
//!
//! States are amplitude vectors in the photon-number basis `|0>, |1>, ...,
//! |d-1>`. Every vector carries a truncation deficit: the squared norm that
//! the exact (infinite) state has beyond the last retained level.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{HdError, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Slack allowed on unit-norm checks.
pub const NORM_SLACK: f64 = 1e-9;

/// Amplitudes of a single-mode state in the photon-number basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amps: Vec<C64>,
    trunc_deficit: f64,
}

impl FockVector {
    /// Builds a vector with an explicit truncation deficit.
    pub fn new(amps: Vec<C64>, trunc_deficit: f64) -> Result<Self> {
        if amps.is_empty() {
            return Err(HdError::invalid("Fock vector must have dimension >= 1"));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(HdError::invalid("Fock amplitudes must be finite"));
        }
        if !(trunc_deficit.is_finite() && trunc_deficit >= 0.0) {
            return Err(HdError::invalid("truncation deficit must be finite and >= 0"));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm > 1.0 + NORM_SLACK {
            return Err(HdError::invalid(format!("squared norm {norm} exceeds 1")));
        }
        Ok(Self {
            amps,
            trunc_deficit,
        })
    }

    /// Interprets `amps` as a truncated unit vector. Vectors within
    /// [`NORM_SLACK`] of unit norm are renormalized exactly; shorter vectors
    /// keep their norm and report the missing mass as deficit.
    pub fn from_amplitudes(mut amps: Vec<C64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm == 0.0 {
            return Err(HdError::invalid("zero vector is not a state"));
        }
        if (norm - 1.0).abs() <= NORM_SLACK {
            let s = norm.sqrt().recip();
            amps.iter_mut().for_each(|a| *a *= s);
            return Self::new(amps, 0.0);
        }
        Self::new(amps, (1.0 - norm).max(0.0))
    }

    /// Number state `|n>` in a space of dimension `dim`.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(HdError::invalid(format!("level {n} outside dimension {dim}")));
        }
        let mut amps = vec![ZERO; dim];
        amps[n] = C64::new(1.0, 0.0);
        Self::new(amps, 0.0)
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::fock(0, dim)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn trunc_deficit(&self) -> f64 {
        self.trunc_deficit
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Highest level with a nonzero amplitude, plus one.
    pub fn support(&self) -> usize {
        self.amps
            .iter()
            .rposition(|a| a.norm_sqr() > 0.0)
            .map_or(0, |i| i + 1)
    }

    /// `<self|other>`, zero-padding the shorter vector.
    pub fn inner(&self, other: &FockVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `e^{i angle N}` applied to the vector.
    pub fn phase_rotated(&self, angle: f64) -> FockVector {
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(n, a)| a * C64::from_polar(1.0, angle * n as f64))
            .collect();
        FockVector {
            amps,
            trunc_deficit: self.trunc_deficit,
        }
    }

    /// Zero-pads (never truncates) to `dim`.
    pub fn padded(&self, dim: usize) -> FockVector {
        let mut amps = self.amps.clone();
        if dim > amps.len() {
            amps.resize(dim, ZERO);
        }
        FockVector {
            amps,
            trunc_deficit: self.trunc_deficit,
        }
    }

    /// `<N>` over the retained levels.
    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }
}

/// Truncation dimension for a Poisson photon distribution of mean `mu`:
/// `ceil(mu + 10 sqrt(mu) + 20)`. The tail beyond it is below 1e-12.
pub fn auto_dim(mu: f64) -> usize {
    (mu + 10.0 * mu.sqrt() + 20.0).ceil() as usize
}

/// Coherent state `|beta>` truncated to `dim` levels.
///
/// Amplitudes come from the recurrence `c_{n+1} = c_n beta / sqrt(n+1)`
/// so no factorial is ever formed. The deficit is the Poisson(|beta|^2)
/// tail mass at levels `>= dim`, summed directly rather than by
/// subtraction from one.
pub fn coherent_state(beta: C64, dim: usize) -> Result<FockVector> {
    if dim == 0 {
        return Err(HdError::invalid("dimension must be >= 1"));
    }
    if !(beta.re.is_finite() && beta.im.is_finite()) {
        return Err(HdError::invalid("coherent amplitude must be finite"));
    }
    let mu = beta.norm_sqr();
    if mu > 1400.0 {
        return Err(HdError::invalid(format!(
            "|beta|^2 = {mu} underflows the amplitude recurrence"
        )));
    }
    let mut amps = Vec::with_capacity(dim);
    let mut c = C64::new((-0.5 * mu).exp(), 0.0);
    for n in 0..dim {
        amps.push(c);
        c = c * beta / ((n + 1) as f64).sqrt();
    }
    let deficit = poisson_tail(mu, dim);
    FockVector::new(amps, deficit)
}

/// Coherent state at the automatic truncation dimension.
pub fn coherent_auto(beta: C64) -> Result<FockVector> {
    coherent_state(beta, auto_dim(beta.norm_sqr()).max(2))
}

/// P(Poisson(mu) >= from).
pub(crate) fn poisson_tail(mu: f64, from: usize) -> f64 {
    if mu == 0.0 {
        return if from == 0 { 1.0 } else { 0.0 };
    }
    if (from as f64) < mu {
        // bulk: subtract the head, which is then the small part
        let mut p = (-mu).exp();
        let mut head = 0.0;
        for n in 0..from {
            head += p;
            p *= mu / (n + 1) as f64;
        }
        return (1.0 - head).max(0.0);
    }
    let lf: f64 = (1..=from).map(|k| (k as f64).ln()).sum();
    let mut p = (-mu + from as f64 * mu.ln() - lf).exp();
    let mut tail = 0.0;
    let mut n = from;
    while p > 0.0 && p > tail * 1e-18 {
        tail += p;
        n += 1;
        p *= mu / n as f64;
    }
    tail
}

/// Dense Hermitian matrix on a truncated single-mode space.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    entries: DMatrix<C64>,
}

impl HermitianOperator {
    /// Hermiticity tolerance `1e-12 * dim`.
    pub fn tol_herm(dim: usize) -> f64 {
        1e-12 * dim as f64
    }

    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(HdError::invalid("operator matrix must be square and non-empty"));
        }
        let d = entries.nrows();
        let dev = hermitian_defect(&entries);
        if dev > Self::tol_herm(d) {
            return Err(HdError::invalid(format!(
                "matrix is not Hermitian (defect {dev:e})"
            )));
        }
        Ok(Self { entries })
    }

    /// Symmetrizes `(M + M*)/2`; used for matrices that are Hermitian by
    /// construction up to rounding.
    pub(crate) fn from_hermitian_part(m: DMatrix<C64>) -> Self {
        let sym = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        Self { entries: sym }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn entry(&self, m: usize, n: usize) -> C64 {
        self.entries[(m, n)]
    }

    /// `<psi|self|phi>` with both vectors zero-padded or cut to `dim`.
    pub fn matrix_element(&self, psi: &FockVector, phi: &FockVector) -> C64 {
        let d = self.dim();
        let mut acc = ZERO;
        for (m, a) in psi.amps().iter().enumerate().take(d) {
            if *a == ZERO {
                continue;
            }
            let row: C64 = phi
                .amps()
                .iter()
                .enumerate()
                .take(d)
                .map(|(n, b)| self.entries[(m, n)] * b)
                .sum();
            acc += a.conj() * row;
        }
        acc
    }

    pub fn expectation(&self, phi: &FockVector) -> f64 {
        self.matrix_element(phi, phi).re
    }

    /// Top-left `n x n` block.
    pub fn block(&self, n: usize) -> DMatrix<C64> {
        let n = n.min(self.dim());
        self.entries.view((0, 0), (n, n)).into_owned()
    }

    /// Largest entrywise modulus of `self - other` on the top-left
    /// `block x block` corner.
    pub fn max_abs_diff(&self, other: &DMatrix<C64>, block: usize) -> f64 {
        let n = block.min(self.dim()).min(other.nrows()).min(other.ncols());
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entries[(i, j)] - other[(i, j)]).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

pub(crate) fn hermitian_defect(m: &DMatrix<C64>) -> f64 {
    let d = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in i..d {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Truncated annihilation, creation and number matrices.
#[derive(Clone, Debug)]
pub struct LadderOps {
    pub annihilation: DMatrix<C64>,
    pub creation: DMatrix<C64>,
    pub number: DMatrix<C64>,
}

pub fn ladder_ops(dim: usize) -> Result<LadderOps> {
    if dim < 2 {
        return Err(HdError::invalid("ladder operators need dimension >= 2"));
    }
    let mut a = DMatrix::from_element(dim, dim, ZERO);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    let creation = a.adjoint();
    let number = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            C64::new(i as f64, 0.0)
        } else {
            ZERO
        }
    });
    Ok(LadderOps {
        annihilation: a,
        creation,
        number,
    })
}

/// Truncation of `Q_theta = (e^{-i theta} a + e^{i theta} a*) / sqrt 2`.
pub fn rotated_quadrature(theta: f64, dim: usize) -> Result<HermitianOperator> {
    if dim < 2 {
        return Err(HdError::invalid("quadrature needs dimension >= 2"));
    }
    let mut q = DMatrix::from_element(dim, dim, ZERO);
    for n in 1..dim {
        let s = (n as f64).sqrt() * FRAC_1_SQRT_2;
        // <n-1| e^{-i theta} a |n>  and its adjoint
        q[(n - 1, n)] = C64::from_polar(s, -theta);
        q[(n, n - 1)] = C64::from_polar(s, theta);
    }
    Ok(HermitianOperator { entries: q })
}

/// `<z|z'> = exp(-(|z|^2 + |z'|^2)/2 + conj(z) z')`.
pub fn coherent_overlap(z: C64, zp: C64) -> C64 {
    (-(z.norm_sqr() + zp.norm_sqr()) * 0.5 + z.conj() * zp).exp()
}

/// Hermite functions `h_0(x) .. h_{count-1}(x)` by the normalized
/// three-term recurrence.
pub fn hermite_functions(count: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(count);
    if count == 0 {
        return h;
    }
    h.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if count > 1 {
        h.push(std::f64::consts::SQRT_2 * x * h[0]);
    }
    for n in 1..count.saturating_sub(1) {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * h[n] - (nf / (nf + 1.0)).sqrt() * h[n - 1];
        h.push(next);
    }
    h
}

/// Position-representation wavefunction of `e^{-i theta N} state`, i.e.
/// `sum_n amps_n e^{-i theta n} h_n(x)` on each grid point.
pub fn position_wavefunction(state: &FockVector, theta: f64, xgrid: &[f64]) -> Result<Vec<C64>> {
    if xgrid.iter().any(|x| !x.is_finite()) {
        return Err(HdError::invalid("position grid must be finite"));
    }
    let rotated = state.phase_rotated(-theta);
    Ok(xgrid
        .iter()
        .map(|&x| wavefunction_at(rotated.amps(), x))
        .collect())
}

pub(crate) fn wavefunction_at(amps: &[C64], x: f64) -> C64 {
    hermite_functions(amps.len(), x)
        .iter()
        .zip(amps)
        .map(|(h, a)| a * *h)
        .sum()
}
