//! Two-mode truncated space and the 50-50 beam splitter.
//!
//! Conventions: the first mode is the signal (`a`), the second the
//! auxiliary oscillator mode (`b`). The splitter acts on creation operators
//! as `a* -> (a* + b*)/sqrt 2`, `b* -> (b* - a*)/sqrt 2`, so that
//! `U |beta, z> = |(beta - z)/sqrt 2, (beta + z)/sqrt 2>`. The photon
//! difference is `N_- = N_aux - N_signal`, i.e. outcome `k = n2 - n1`.

use nalgebra::DMatrix;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{HdError, Result};
use crate::fock::{FockVector, C64};
use crate::special::{binomial_amplitude, ln_factorials, max_dim, pascal_i128};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Largest photon-number sector the exact-integer splitter coefficients
/// support (Pascal entries must fit in i128).
pub const MAX_EXACT_SECTOR: usize = 126;

/// Relative tail mass at which oscillator-frame rows are trimmed.
const FRAME_TAIL_TOL: f64 = 1e-20;

/// Tail allowed at the dimension cap before the budget counts as exhausted.
const FRAME_BUDGET_TOL: f64 = 1e-12;

/// Amplitudes indexed by photon-number pairs `(n1, n2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeVector {
    amps: DMatrix<C64>,
    trunc_deficit: f64,
}

impl TwoModeVector {
    pub fn new(amps: DMatrix<C64>, trunc_deficit: f64) -> Result<Self> {
        if amps.nrows() == 0 || amps.ncols() == 0 {
            return Err(HdError::invalid("two-mode dimensions must be >= 1"));
        }
        if !(trunc_deficit.is_finite() && trunc_deficit >= 0.0) {
            return Err(HdError::invalid("truncation deficit must be finite and >= 0"));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm.is_finite() || norm > 1.0 + crate::fock::NORM_SLACK {
            return Err(HdError::invalid(format!("squared norm {norm} exceeds 1")));
        }
        Ok(Self {
            amps,
            trunc_deficit,
        })
    }

    /// `|n1, n2>` in a `dim1 x dim2` space.
    pub fn basis(n1: usize, n2: usize, dim1: usize, dim2: usize) -> Result<Self> {
        if n1 >= dim1 || n2 >= dim2 {
            return Err(HdError::invalid("basis index outside dimensions"));
        }
        let mut amps = DMatrix::from_element(dim1, dim2, ZERO);
        amps[(n1, n2)] = C64::new(1.0, 0.0);
        Self::new(amps, 0.0)
    }

    /// `signal ⊗ aux`.
    pub fn product(signal: &FockVector, aux: &FockVector) -> Self {
        let amps = DMatrix::from_fn(signal.dim(), aux.dim(), |i, j| {
            signal.amps()[i] * aux.amps()[j]
        });
        let n1 = signal.norm_sqr();
        let n2 = aux.norm_sqr();
        let deficit = signal.trunc_deficit() * n2 + aux.trunc_deficit() * n1
            + signal.trunc_deficit() * aux.trunc_deficit();
        Self {
            amps,
            trunc_deficit: deficit,
        }
    }

    pub fn dim1(&self) -> usize {
        self.amps.nrows()
    }

    pub fn dim2(&self) -> usize {
        self.amps.ncols()
    }

    pub fn amps(&self) -> &DMatrix<C64> {
        &self.amps
    }

    pub fn get(&self, n1: usize, n2: usize) -> C64 {
        if n1 < self.dim1() && n2 < self.dim2() {
            self.amps[(n1, n2)]
        } else {
            ZERO
        }
    }

    pub fn trunc_deficit(&self) -> f64 {
        self.trunc_deficit
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`, treating missing entries as zero.
    pub fn inner(&self, other: &TwoModeVector) -> C64 {
        let d1 = self.dim1().min(other.dim1());
        let d2 = self.dim2().min(other.dim2());
        let mut acc = ZERO;
        for j in 0..d2 {
            for i in 0..d1 {
                acc += self.amps[(i, j)].conj() * other.amps[(i, j)];
            }
        }
        acc
    }

    /// Euclidean distance, treating missing entries as zero.
    pub fn distance(&self, other: &TwoModeVector) -> f64 {
        let d1 = self.dim1().max(other.dim1());
        let d2 = self.dim2().max(other.dim2());
        let mut acc = 0.0;
        for j in 0..d2 {
            for i in 0..d1 {
                acc += (self.get(i, j) - other.get(i, j)).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Largest total photon number carrying any amplitude.
    pub fn max_sector(&self) -> usize {
        let mut s = 0;
        for j in 0..self.dim2() {
            for i in 0..self.dim1() {
                if self.amps[(i, j)] != ZERO {
                    s = s.max(i + j);
                }
            }
        }
        s
    }
}

/// Exact sector blocks of the splitter: `blocks[s][(p, n)]` is
/// `<p, s-p| U |n, s-n>`.
///
/// Each entry is `2^{-s/2} sqrt(p! q! / (n! m!)) K` with the Krawtchouk
/// sum `K = sum_i C(n,i) C(m,p-i) (-1)^{p-i}` evaluated in exact integer
/// arithmetic, so the alternating binomial sum never cancels in floating
/// point.
fn sector_blocks(max_sector: usize) -> Vec<DMatrix<f64>> {
    let pascal = pascal_i128(max_sector);
    let lf = ln_factorials(max_sector + 1);
    (0..=max_sector)
        .map(|s| {
            DMatrix::from_fn(s + 1, s + 1, |p, n| {
                let m = s - n;
                let lo = p.saturating_sub(m);
                let hi = n.min(p);
                let mut k: i128 = 0;
                for i in lo..=hi {
                    let term = pascal[n][i] * pascal[m][p - i];
                    if (p - i) % 2 == 0 {
                        k += term;
                    } else {
                        k -= term;
                    }
                }
                if k == 0 {
                    return 0.0;
                }
                let q = s - p;
                let log_pref = 0.5 * (lf[p] + lf[q] - lf[n] - lf[m])
                    - 0.5 * s as f64 * std::f64::consts::LN_2;
                k as f64 * log_pref.exp()
            })
        })
        .collect()
}

fn apply_sector_map(input: &TwoModeVector, inverse: bool) -> Result<TwoModeVector> {
    let s_max = input.dim1() + input.dim2() - 2;
    let out_dim = s_max + 1;
    let cap = max_dim().min(MAX_EXACT_SECTOR + 1);
    if out_dim > cap {
        return Err(HdError::BudgetExhausted {
            needed: out_dim,
            cap,
        });
    }
    let blocks = sector_blocks(s_max);
    let mut out = DMatrix::from_element(out_dim, out_dim, ZERO);
    for (s, block) in blocks.iter().enumerate() {
        // input amplitudes of sector s indexed by mode-a count
        let n_lo = s.saturating_sub(input.dim2() - 1);
        let n_hi = s.min(input.dim1() - 1);
        if n_lo > n_hi {
            continue;
        }
        for p in 0..=s {
            let mut acc = ZERO;
            for n in n_lo..=n_hi {
                let c = if inverse { block[(n, p)] } else { block[(p, n)] };
                acc += input.amps[(n, s - n)] * c;
            }
            out[(p, s - p)] = acc;
        }
    }
    TwoModeVector::new(out, input.trunc_deficit)
}

/// `U` applied to an arbitrary two-mode vector.
///
/// The output has dimension `dim1 + dim2 - 1` in each mode, enough to hold
/// every sector the input touches, so no amplitude is lost. Sectors above
/// [`MAX_EXACT_SECTOR`] (or the `HD_MAX_DIM` cap) are rejected.
pub fn apply_beamsplitter(input: &TwoModeVector) -> Result<TwoModeVector> {
    apply_sector_map(input, false)
}

/// `U^{-1}` applied to a two-mode vector; `U` is real orthogonal on each
/// sector, so this is the transposed block.
pub fn apply_inverse_beamsplitter(input: &TwoModeVector) -> Result<TwoModeVector> {
    apply_sector_map(input, true)
}

/// Matrix elements `<m|D(alpha)|n>` for `m < rows`, `n < cols`.
///
/// Uses the associated-Laguerre closed form with the polynomial evaluated
/// by forward recurrence in the degree, and the prefactor
/// `sqrt(n!/m!) |alpha|^{m-n} e^{-|alpha|^2/2}` in log space.
pub(crate) fn displacement_block(alpha: C64, rows: usize, cols: usize) -> DMatrix<C64> {
    let mut out = DMatrix::from_element(rows, cols, ZERO);
    let x = alpha.norm_sqr();
    if x == 0.0 {
        for i in 0..rows.min(cols) {
            out[(i, i)] = C64::new(1.0, 0.0);
        }
        return out;
    }
    let lf = ln_factorials(rows.max(cols) + 1);
    let ln_abs = x.sqrt().ln();
    let phase = alpha / x.sqrt();
    let neg_conj_phase = -phase.conj();

    // m = n + k, k >= 0: sqrt(n!/m!) alpha^k e^{-x/2} L_n^{(k)}(x)
    for k in 0..rows {
        let ph = phase.powu(k as u32);
        let kf = k as f64;
        let (mut l_prev, mut l_cur) = (0.0, 1.0);
        for n in 0..cols {
            let m = n + k;
            if m >= rows {
                break;
            }
            if n > 0 {
                let nf = n as f64;
                let next = ((2.0 * nf - 1.0 + kf - x) * l_cur - (nf - 1.0 + kf) * l_prev) / nf;
                l_prev = l_cur;
                l_cur = next;
            }
            let pref = (0.5 * (lf[n] - lf[m]) + kf * ln_abs - 0.5 * x).exp();
            out[(m, n)] = ph * (pref * l_cur);
        }
    }
    // n = m + k, k >= 1: sqrt(m!/n!) (-conj alpha)^k e^{-x/2} L_m^{(k)}(x)
    for k in 1..cols {
        let ph = neg_conj_phase.powu(k as u32);
        let kf = k as f64;
        let (mut l_prev, mut l_cur) = (0.0, 1.0);
        for m in 0..rows {
            let n = m + k;
            if n >= cols {
                break;
            }
            if m > 0 {
                let mf = m as f64;
                let next = ((2.0 * mf - 1.0 + kf - x) * l_cur - (mf - 1.0 + kf) * l_prev) / mf;
                l_prev = l_cur;
                l_cur = next;
            }
            let pref = (0.5 * (lf[m] - lf[n]) + kf * ln_abs - 0.5 * x).exp();
            out[(m, n)] = ph * (pref * l_cur);
        }
    }
    out
}

/// Expansion coefficients of `U(signal ⊗ |0>)` in the displaced frame:
/// `psi[(j, l)] = c_{j+l} sqrt(C(j+l, j)) 2^{-(j+l)/2}`.
fn binomial_coefficients(amps: &[C64], dim: usize, lf: &[f64]) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |j, l| {
        let n = j + l;
        match amps.get(n) {
            Some(c) if n < dim => *c * binomial_amplitude(lf, n, j),
            _ => ZERO,
        }
    })
}

/// Per-row mass `Re(row · W · row^H)` of a displacement block.
fn row_masses(disp: &DMatrix<C64>, weight: &DMatrix<C64>, conj_rows: bool) -> Vec<f64> {
    let cols = disp.ncols();
    (0..disp.nrows())
        .map(|p| {
            let row: Vec<C64> = (0..cols)
                .map(|j| {
                    let v = disp[(p, j)];
                    if conj_rows {
                        v.conj()
                    } else {
                        v
                    }
                })
                .collect();
            let mut acc = ZERO;
            for (i, ri) in row.iter().enumerate() {
                if *ri == ZERO {
                    continue;
                }
                let mut inner = ZERO;
                for (j, rj) in row.iter().enumerate() {
                    inner += weight[(i, j)] * rj.conj();
                }
                acc += ri * inner;
            }
            acc.re.max(0.0)
        })
        .collect()
}

/// Smallest `d` whose suffix mass is within `tol`, plus that suffix mass.
fn trim(masses: &[f64], tol: f64) -> (usize, f64) {
    let mut suffix = 0.0;
    let mut d = masses.len();
    for (i, m) in masses.iter().enumerate().rev() {
        if suffix + m > tol {
            break;
        }
        suffix += m;
        d = i;
    }
    (d.max(1), suffix)
}

/// The local-oscillator side of the dilation for a fixed `z` and signal
/// truncation.
///
/// With `alpha = -z/sqrt 2` and `gamma = z/sqrt 2`,
/// `U(|n> ⊗ |z>) = D_a(alpha) D_b(gamma) sum_j sqrt(C(n,j)) 2^{-n/2} |j, n-j>`,
/// because `a* + b*` commutes through the product displacement (the two
/// shifts cancel). Every output is therefore `D_a Psi D_b^T` with bounded,
/// sign-free coefficients `Psi`; no alternating binomial sum is formed.
#[derive(Clone, Debug)]
pub struct OscillatorFrame {
    z: C64,
    signal_dim: usize,
    disp_signal: DMatrix<C64>,
    disp_aux: DMatrix<C64>,
    tail: f64,
    lf: Vec<f64>,
}

impl OscillatorFrame {
    /// Frame sized for one particular signal vector.
    pub fn for_state(signal: &FockVector, z: C64) -> Result<Self> {
        let j = signal.dim().max(1);
        let lf = ln_factorials(2 * j + 2);
        let psi = binomial_coefficients(signal.amps(), j, &lf);
        let wa = &psi * psi.adjoint();
        let wb = psi.adjoint() * &psi;
        Self::build(z, j, &wa, &wb)
    }

    /// Frame sized for every basis state `|0> .. |dim-1>`.
    pub fn for_basis(dim: usize, z: C64) -> Result<Self> {
        if dim == 0 {
            return Err(HdError::invalid("signal dimension must be >= 1"));
        }
        let lf = ln_factorials(2 * dim + 2);
        let mut wa = DMatrix::from_element(dim, dim, ZERO);
        let mut wb = DMatrix::from_element(dim, dim, ZERO);
        // Psi_n has one entry per row on the anti-diagonal j + l = n, so
        // both Gram sums are diagonal.
        for n in 0..dim {
            for j in 0..=n {
                let b2 = binomial_amplitude(&lf, n, j).powi(2);
                wa[(j, j)] += b2;
                wb[(n - j, n - j)] += b2;
            }
        }
        Self::build(z, dim, &wa, &wb)
    }

    fn build(z: C64, j: usize, wa: &DMatrix<C64>, wb: &DMatrix<C64>) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(HdError::invalid("oscillator amplitude must be finite"));
        }
        let x = 0.5 * z.norm_sqr();
        let jm = (j - 1) as f64;
        let ceiling = (x + jm + 10.0 * (x * (2.0 * jm + 1.0) + jm).sqrt() + 20.0).ceil() as usize;
        let cap = max_dim();
        let big = ceiling.min(cap).max(j);
        let alpha = -z * FRAC_1_SQRT_2;
        let gamma = z * FRAC_1_SQRT_2;
        let da = displacement_block(alpha, big, j);
        let db = displacement_block(gamma, big, j);

        let total = wa.trace().re.max(f64::MIN_POSITIVE);
        let ma = row_masses(&da, wa, false);
        let mb = row_masses(&db, wb, true);
        let (d1, ta) = trim(&ma, FRAME_TAIL_TOL * total);
        let (d2, tb) = trim(&mb, FRAME_TAIL_TOL * total);
        if ceiling > cap {
            let last_a: f64 = ma.iter().rev().take(4).sum();
            let last_b: f64 = mb.iter().rev().take(4).sum();
            if (last_a + last_b) > FRAME_BUDGET_TOL * total {
                return Err(HdError::BudgetExhausted {
                    needed: ceiling,
                    cap,
                });
            }
        }
        Ok(Self {
            z,
            signal_dim: j,
            disp_signal: da.rows(0, d1).into_owned(),
            disp_aux: db.rows(0, d2).into_owned(),
            tail: ta + tb,
            lf: ln_factorials(2 * j + 2),
        })
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    pub fn signal_dim(&self) -> usize {
        self.signal_dim
    }

    /// Output dimensions `(signal mode, aux mode)`.
    pub fn output_dims(&self) -> (usize, usize) {
        (self.disp_signal.nrows(), self.disp_aux.nrows())
    }

    /// Mass trimmed from the output arrays, summed over the inputs the frame
    /// was sized for.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// `U(signal ⊗ |z>)`. The signal must fit in the frame.
    pub fn output(&self, signal: &FockVector) -> Result<TwoModeVector> {
        if signal.support() > self.signal_dim {
            return Err(HdError::invalid(format!(
                "signal support {} exceeds frame dimension {}",
                signal.support(),
                self.signal_dim
            )));
        }
        let psi = binomial_coefficients(signal.amps(), self.signal_dim, &self.lf);
        let amps = &self.disp_signal * psi * self.disp_aux.transpose();
        let tail = self.tail.min(signal.norm_sqr());
        TwoModeVector::new(amps, signal.trunc_deficit() + tail)
    }
}

/// `U(signal ⊗ |z>)`, with the oscillator frame sized for this signal.
pub fn signal_with_oscillator(signal: &FockVector, z: C64) -> Result<TwoModeVector> {
    OscillatorFrame::for_state(signal, z)?.output(signal)
}

/// `sum_{n2 - n1 = k} |amps(n1, n2)|^2`.
pub fn difference_projection_mass(v: &TwoModeVector, k: i64) -> f64 {
    let mut acc = 0.0;
    for n1 in 0..v.dim1() {
        let n2 = n1 as i64 + k;
        if n2 >= 0 && (n2 as usize) < v.dim2() {
            acc += v.amps[(n1, n2 as usize)].norm_sqr();
        }
    }
    acc
}

/// Masses of every photon-difference sector. Index `i` holds
/// `k = i - (dim1 - 1)`.
pub fn difference_masses(v: &TwoModeVector) -> Vec<f64> {
    let offset = v.dim1() - 1;
    let mut out = vec![0.0; v.dim1() + v.dim2() - 1];
    for n2 in 0..v.dim2() {
        for n1 in 0..v.dim1() {
            out[n2 + offset - n1] += v.amps[(n1, n2)].norm_sqr();
        }
    }
    out
}

/// Row-major two-mode index of `|n1, n2>`.
pub fn two_mode_index(n1: usize, n2: usize, dim2: usize) -> usize {
    n1 * dim2 + n2
}

/// Truncation of `A = (a ⊗ b* + a* ⊗ b)/sqrt 2` on the `dim1 x dim2` space,
/// indexed by [`two_mode_index`].
pub fn dilation_generator(dim1: usize, dim2: usize) -> Result<DMatrix<C64>> {
    if dim1 < 2 || dim2 < 2 {
        return Err(HdError::invalid("dilation generator needs dimensions >= 2"));
    }
    let size = dim1 * dim2;
    let mut a = DMatrix::from_element(size, size, ZERO);
    for n1 in 1..dim1 {
        for n2 in 0..dim2 - 1 {
            // (a ⊗ b*) |n1, n2> = sqrt(n1 (n2+1)) |n1-1, n2+1>
            let v = ((n1 * (n2 + 1)) as f64).sqrt() * FRAC_1_SQRT_2;
            let from = two_mode_index(n1, n2, dim2);
            let to = two_mode_index(n1 - 1, n2 + 1, dim2);
            a[(to, from)] = C64::new(v, 0.0);
            a[(from, to)] = C64::new(v, 0.0);
        }
    }
    Ok(a)
}

/// Flattens a two-mode vector into the [`two_mode_index`] layout of a
/// `dim1 x dim2` space, dropping anything outside it.
pub fn flatten(v: &TwoModeVector, dim1: usize, dim2: usize) -> Vec<C64> {
    let mut out = vec![ZERO; dim1 * dim2];
    for n1 in 0..v.dim1().min(dim1) {
        for n2 in 0..v.dim2().min(dim2) {
            out[two_mode_index(n1, n2, dim2)] = v.amps[(n1, n2)];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_auto, coherent_state};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn vacuum_is_fixed() {
        let v = TwoModeVector::basis(0, 0, 1, 1).unwrap();
        let out = apply_beamsplitter(&v).unwrap();
        assert_eq!(out.get(0, 0), c(1.0, 0.0));
        assert_eq!(out.dim1(), 1);
    }

    #[test]
    fn single_photon_splits_evenly() {
        // U|1,0> = (|1,0> + |0,1>)/sqrt 2, U|0,1> = (|0,1> - |1,0>)/sqrt 2
        let v = TwoModeVector::basis(1, 0, 2, 2).unwrap();
        let out = apply_beamsplitter(&v).unwrap();
        assert!((out.get(1, 0) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((out.get(0, 1) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let w = TwoModeVector::basis(0, 1, 2, 2).unwrap();
        let out = apply_beamsplitter(&w).unwrap();
        assert!((out.get(1, 0) + c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((out.get(0, 1) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hong_ou_mandel_dip() {
        // |1,1> has no |1,1> component after a balanced splitter
        let v = TwoModeVector::basis(1, 1, 2, 2).unwrap();
        let out = apply_beamsplitter(&v).unwrap();
        assert!(out.get(1, 1).norm() < 1e-15);
        assert!((out.get(2, 0).norm_sqr() - 0.5).abs() < 1e-15);
        assert!((out.get(0, 2).norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sector_blocks_are_orthogonal() {
        for (s, b) in sector_blocks(MAX_EXACT_SECTOR).iter().enumerate().step_by(25) {
            let g = b.transpose() * b;
            let dev = (g - DMatrix::identity(s + 1, s + 1)).abs().max();
            assert!(dev < 1e-12, "sector {s}: {dev}");
        }
    }

    #[test]
    fn inverse_recovers_input() {
        let beta = coherent_state(c(0.3, 0.2), 6).unwrap();
        let z = coherent_state(c(-0.1, 0.4), 5).unwrap();
        let v = TwoModeVector::product(&beta, &z);
        let back = apply_inverse_beamsplitter(&apply_beamsplitter(&v).unwrap()).unwrap();
        assert!(back.distance(&v) < 1e-12);
    }

    #[test]
    fn rejects_oversized_sector() {
        let v = TwoModeVector::basis(0, 0, 80, 80).unwrap();
        assert!(matches!(
            apply_beamsplitter(&v),
            Err(HdError::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn displacement_columns_are_unit_and_match_coherent() {
        let alpha = c(1.3, -0.7);
        let d = displacement_block(alpha, 80, 6);
        let coh = coherent_state(alpha, 80).unwrap();
        for m in 0..80 {
            assert!((d[(m, 0)] - coh.amps()[m]).norm() < 1e-15);
        }
        for n in 0..6 {
            let norm: f64 = d.column(n).iter().map(|v| v.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-13);
        }
        // <0|D(alpha)|1> = -conj(alpha) e^{-|alpha|^2/2}
        let expect = -alpha.conj() * (-0.5 * alpha.norm_sqr()).exp();
        assert!((d[(0, 1)] - expect).norm() < 1e-15);
    }

    #[test]
    fn oscillator_on_vacuum_is_coherent_product() {
        let z = c(2.0, 0.0);
        let v = signal_with_oscillator(&FockVector::vacuum(1).unwrap(), z).unwrap();
        let s = std::f64::consts::SQRT_2;
        let a = coherent_state(c(-s, 0.0), v.dim1()).unwrap();
        let b = coherent_state(c(s, 0.0), v.dim2()).unwrap();
        let expect = TwoModeVector::product(&a, &b);
        assert!(v.distance(&expect) < 1e-13);
        let v0 = signal_with_oscillator(&FockVector::vacuum(3).unwrap(), c(0.0, 0.0)).unwrap();
        assert!((v0.get(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((v0.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn oscillator_path_matches_generic_splitter() {
        let signal = FockVector::fock(1, 2).unwrap();
        let z = c(1.0, 0.0);
        let fast = signal_with_oscillator(&signal, z).unwrap();
        let aux = coherent_auto(z).unwrap();
        let slow = apply_beamsplitter(&TwoModeVector::product(&signal, &aux)).unwrap();
        assert!(fast.distance(&slow) < 1e-9);
    }

    #[test]
    fn difference_masses_match_projection() {
        let signal = coherent_state(c(0.5, 0.5), 12).unwrap();
        let v = signal_with_oscillator(&signal, c(1.5, 0.3)).unwrap();
        let all = difference_masses(&v);
        let offset = v.dim1() as i64 - 1;
        for (i, m) in all.iter().enumerate() {
            assert!((m - difference_projection_mass(&v, i as i64 - offset)).abs() < 1e-15);
        }
        let base = TwoModeVector::basis(0, 0, 1, 1).unwrap();
        assert_eq!(difference_projection_mass(&base, 0), 1.0);
        assert_eq!(difference_projection_mass(&base, 1), 0.0);
    }

    #[test]
    fn generator_element_and_symmetry() {
        let a = dilation_generator(3, 3).unwrap();
        let from = two_mode_index(1, 0, 3);
        let to = two_mode_index(0, 1, 3);
        assert!((a[(to, from)] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-16);
        assert_eq!(a, a.adjoint());
    }
}
