//! The detector observable `E^z`: lattice statistics and effects.
//!
//! Outcomes live on the lattice `x_k = k / (sqrt 2 r)` with
//! `k = n_aux - n_signal`. The oscillator phase is folded into the signal,
//! so distributions are always computed at real `z = r`.

use nalgebra::DMatrix;
use serde::Serialize;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use crate::beamsplitter::{difference_masses, OscillatorFrame, TwoModeVector};
use crate::error::{HdError, Result};
use crate::fock::{FockVector, HermitianOperator, C64};
use crate::state::SignalStateSpec;

/// Atom spacing `1/(sqrt 2 r)`.
pub fn lattice_spacing(r: f64) -> f64 {
    1.0 / (std::f64::consts::SQRT_2 * r)
}

/// Retained outcome range `|k| <= ceil(mu + 12 sqrt mu)` for total mean
/// photon number `mu`.
pub fn k_range(mu_total: f64) -> i64 {
    let mu = mu_total.max(0.0);
    (mu + 12.0 * mu.sqrt()).ceil().max(1.0) as i64
}

fn check_r(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(HdError::invalid(format!("oscillator amplitude r must be positive, got {r}")))
    }
}

/// Probability weights on the atoms `x_k`, `kmin <= k <= kmax`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeDistribution {
    pub r: f64,
    pub theta: f64,
    pub spacing: f64,
    pub kmin: i64,
    pub kmax: i64,
    pub weights: Vec<f64>,
    /// Mass not represented by `weights`: outcomes outside the range plus
    /// every truncation loss.
    pub deficit: f64,
}

impl LatticeDistribution {
    /// Builds a distribution from raw weights. Used for fixtures and by the
    /// detector itself.
    pub fn new(r: f64, theta: f64, kmin: i64, weights: Vec<f64>, deficit: f64) -> Result<Self> {
        check_r(r)?;
        if weights.is_empty() {
            return Err(HdError::invalid("lattice distribution needs at least one atom"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(HdError::invalid("lattice weights must be finite and nonnegative"));
        }
        let kmax = kmin + weights.len() as i64 - 1;
        Ok(Self {
            r,
            theta,
            spacing: lattice_spacing(r),
            kmin,
            kmax,
            weights,
            deficit: deficit.max(0.0),
        })
    }

    pub fn ks(&self) -> RangeInclusive<i64> {
        self.kmin..=self.kmax
    }

    pub fn atom(&self, k: i64) -> f64 {
        k as f64 * self.spacing
    }

    pub fn weight(&self, k: i64) -> f64 {
        if k < self.kmin || k > self.kmax {
            0.0
        } else {
            self.weights[(k - self.kmin) as usize]
        }
    }

    /// `(k, x_k, p_k)` triples in increasing `k`.
    pub fn atoms(&self) -> impl Iterator<Item = (i64, f64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, &p)| {
                let k = self.kmin + i as i64;
                (k, self.atom(k), p)
            })
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Largest `|x_k|` carrying weight.
    pub fn max_abs_atom(&self) -> f64 {
        self.atoms()
            .filter(|a| a.2 > 0.0)
            .map(|a| a.1.abs())
            .fold(0.0, f64::max)
    }

    /// `sum p_k f(x_k)`.
    pub fn expectation(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.atoms().map(|(_, x, p)| p * f(x)).sum()
    }

    /// Raw moment `sum p_k x_k^k` without a tail check.
    pub fn raw_moment(&self, order: u32) -> f64 {
        self.expectation(|x| x.powi(order as i32))
    }

    pub fn mean(&self) -> f64 {
        self.raw_moment(1)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.expectation(|x| (x - m) * (x - m))
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms().filter(|a| a.1 <= x).map(|a| a.2).sum()
    }

    /// `P(X < x)`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        self.atoms().filter(|a| a.1 < x).map(|a| a.2).sum()
    }

    pub fn mass(&self, set: &Interval) -> f64 {
        self.atoms().filter(|a| set.contains(a.1)).map(|a| a.2).sum()
    }

    /// `sum p_k e^{i t x_k}`.
    pub fn characteristic(&self, t: f64) -> C64 {
        self.atoms()
            .map(|(_, x, p)| C64::from_polar(p, t * x))
            .sum()
    }

    /// CSV with header `k,x,p` and a trailing `# deficit=` line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,x,p\n");
        for (k, x, p) in self.atoms() {
            let _ = writeln!(out, "{k},{x:.16e},{p:.16e}");
        }
        let _ = writeln!(out, "# deficit={:.16e}", self.deficit);
        out
    }
}

/// A real interval with explicit endpoint closedness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    /// `[a, b)`, the default convention.
    pub fn half_open(a: f64, b: f64) -> Self {
        Self { lo: a, hi: b, lo_closed: true, hi_closed: false }
    }

    pub fn closed(a: f64, b: f64) -> Self {
        Self { lo: a, hi: b, lo_closed: true, hi_closed: true }
    }

    pub fn open(a: f64, b: f64) -> Self {
        Self { lo: a, hi: b, lo_closed: false, hi_closed: false }
    }

    /// `(-inf, c]`.
    pub fn at_most(c: f64) -> Self {
        Self { lo: f64::NEG_INFINITY, hi: c, lo_closed: false, hi_closed: true }
    }

    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn point(x: f64) -> Self {
        Self::closed(x, x)
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let h = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{h}", self.lo, self.hi)
    }
}

/// The standard battery `(-inf, c]` for `c` in `{-2, -1, -0.5, 0, 0.5, 1, 2}`
/// plus `[-1, 1)`.
pub fn interval_battery() -> Vec<Interval> {
    let mut out: Vec<Interval> = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]
        .iter()
        .map(|&c| Interval::at_most(c))
        .collect();
    out.push(Interval::half_open(-1.0, 1.0));
    out
}

/// A finite union of lattice atoms (by index `k`) and real intervals.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OutcomeSet {
    pub atoms: Vec<i64>,
    pub intervals: Vec<Interval>,
}

impl OutcomeSet {
    pub fn all() -> Self {
        Self::from_intervals(vec![Interval::real_line()])
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = i64>) -> Self {
        Self { atoms: atoms.into_iter().collect(), intervals: Vec::new() }
    }

    pub fn from_intervals(intervals: Vec<Interval>) -> Self {
        Self { atoms: Vec::new(), intervals }
    }

    pub fn contains(&self, k: i64, spacing: f64) -> bool {
        let x = k as f64 * spacing;
        self.atoms.contains(&k) || self.intervals.iter().any(|i| i.contains(x))
    }
}

/// Exact lattice statistics of `E^z`, `z = r e^{i theta}`.
pub fn homodyne_distribution(state: &SignalStateSpec, r: f64, theta: f64) -> Result<LatticeDistribution> {
    check_r(r)?;
    if !theta.is_finite() {
        return Err(HdError::invalid("theta must be finite"));
    }
    let kk = k_range(state.mean_photon_number() + r * r);
    let mut weights = vec![0.0; (2 * kk + 1) as usize];
    let mut deficit = 0.0;
    for c in state.components() {
        let folded = c.vector.phase_rotated(-theta);
        let v = OscillatorFrame::for_state(&folded, C64::new(r, 0.0))
            .and_then(|f| f.output(&folded))
            .map_err(|e| e.at(format!("state {} at r={r}", c.label)))?;
        let (inside, outside) = accumulate(&v, kk);
        for (w, p) in weights.iter_mut().zip(inside) {
            *w += c.weight * p;
        }
        deficit += c.weight * (outside + v.trunc_deficit());
    }
    LatticeDistribution::new(r, theta, -kk, weights, deficit)
}

/// Sector masses for `|k| <= kk` and the directly summed outside mass.
fn accumulate(v: &TwoModeVector, kk: i64) -> (Vec<f64>, f64) {
    let masses = difference_masses(v);
    let offset = v.dim1() as i64 - 1;
    let mut inside = vec![0.0; (2 * kk + 1) as usize];
    let mut outside = 0.0;
    for (i, m) in masses.into_iter().enumerate() {
        let k = i as i64 - offset;
        if k.abs() <= kk {
            inside[(k + kk) as usize] = m;
        } else {
            outside += m;
        }
    }
    (inside, outside)
}

/// `sum weights + deficit`, which the detector makes one for every state
/// and every `r`: the whole measure sits on the lattice.
pub fn lattice_mass(state: &SignalStateSpec, r: f64, theta: f64) -> Result<f64> {
    let d = homodyne_distribution(state, r, theta)?;
    Ok(d.total_mass() + d.deficit)
}

/// `U(|n> ⊗ |z>)` for every basis vector `n < dim`, the data behind effect
/// matrices.
#[derive(Clone, Debug)]
pub struct BasisDilation {
    r: f64,
    theta: f64,
    dim: usize,
    outputs: Vec<TwoModeVector>,
    tail: f64,
}

impl BasisDilation {
    pub fn new(r: f64, theta: f64, dim: usize) -> Result<Self> {
        check_r(r)?;
        let z = C64::from_polar(r, theta);
        let frame = OscillatorFrame::for_basis(dim, z)?;
        let outputs = (0..dim)
            .map(|n| frame.output(&FockVector::fock(n, dim)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { r, theta, dim, outputs, tail: frame.tail() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        lattice_spacing(self.r)
    }

    /// Total output mass trimmed from the basis images.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// Outcomes reachable by the stored outputs.
    pub fn k_bounds(&self) -> (i64, i64) {
        let (d1, d2) = (self.outputs[0].dim1() as i64, self.outputs[0].dim2() as i64);
        (1 - d1, d2 - 1)
    }

    pub fn output(&self, n: usize) -> &TwoModeVector {
        &self.outputs[n]
    }

    /// `E^z(S)` as the Gram matrix of the basis images restricted to the
    /// sectors in `S`.
    pub fn effect(&self, set: &OutcomeSet) -> HermitianOperator {
        let spacing = self.spacing();
        let (d1, d2) = (self.outputs[0].dim1(), self.outputs[0].dim2());
        let cells: Vec<(usize, usize)> = (0..d1)
            .flat_map(|n1| (0..d2).map(move |n2| (n1, n2)))
            .filter(|&(n1, n2)| set.contains(n2 as i64 - n1 as i64, spacing))
            .collect();
        self.gram(&cells)
    }

    /// `E^z({x_k})` for each `k` in `ks`, sharing one pass over the outputs.
    pub fn atom_effects(&self, ks: RangeInclusive<i64>) -> Vec<HermitianOperator> {
        let (d1, d2) = (self.outputs[0].dim1() as i64, self.outputs[0].dim2() as i64);
        ks.map(|k| {
            let cells: Vec<(usize, usize)> = (0..d1)
                .filter_map(|n1| {
                    let n2 = n1 + k;
                    (0..d2).contains(&n2).then_some((n1 as usize, n2 as usize))
                })
                .collect();
            self.gram(&cells)
        })
        .collect()
    }

    fn gram(&self, cells: &[(usize, usize)]) -> HermitianOperator {
        let m = DMatrix::from_fn(cells.len(), self.dim, |i, n| {
            let (a, b) = cells[i];
            self.outputs[n].get(a, b)
        });
        HermitianOperator::from_hermitian_part(m.adjoint() * m)
    }

    /// `sum_k f(x_k) E^z({x_k})`, the operator integral of `f`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let spacing = self.spacing();
        let (d1, d2) = (self.outputs[0].dim1(), self.outputs[0].dim2());
        let cells: Vec<(usize, usize, f64)> = (0..d1)
            .flat_map(|n1| (0..d2).map(move |n2| (n1, n2)))
            .filter_map(|(n1, n2)| {
                let w = f((n2 as f64 - n1 as f64) * spacing);
                (w != 0.0).then_some((n1, n2, w))
            })
            .collect();
        let m = DMatrix::from_fn(cells.len(), self.dim, |i, n| {
            let (a, b, _) = cells[i];
            self.outputs[n].get(a, b)
        });
        let mut fm = m.clone();
        for (i, &(_, _, w)) in cells.iter().enumerate() {
            fm.row_mut(i).scale_mut(w);
        }
        HermitianOperator::from_hermitian_part(m.adjoint() * fm)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// `E^z(S)` on the first `dim` Fock levels, `z = r e^{i theta}`.
pub fn effect_matrix(set: &OutcomeSet, r: f64, theta: f64, dim: usize) -> Result<HermitianOperator> {
    Ok(BasisDilation::new(r, theta, dim)?.effect(set))
}

/// `<v| Pi_S |w>` where `Pi_S` projects onto the photon-difference sectors
/// whose atoms lie in `S`.
pub fn projected_inner(v: &TwoModeVector, w: &TwoModeVector, set: &OutcomeSet, spacing: f64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for n1 in 0..v.dim1().min(w.dim1()) {
        for n2 in 0..v.dim2().min(w.dim2()) {
            if set.contains(n2 as i64 - n1 as i64, spacing) {
                acc += v.get(n1, n2).conj() * w.get(n1, n2);
            }
        }
    }
    acc
}
