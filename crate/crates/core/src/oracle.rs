//! Truncated Fock-space reference implementation.
//!
//! States are built literally from their definitions, `D(η) A |α⟩` as an
//! amplitude vector and `D(η) A ρ_th A† D(η)` as a diagonal of weights, then
//! queried by direct contraction. Nothing here calls into the closed forms.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{StateSpec, SupParams, DEGENERACY_THRESHOLD};
use crate::witnesses::{neumaier_sum, MomentProvider};

pub const MAX_CUTOFF: usize = 100_000;
pub const CUTOFF_MARGIN: usize = 4;
pub const MAX_QUADRATURE_POWER: usize = 12;
const LINEAR_AMPLITUDE_LIMIT: f64 = 1000.0;
const TAIL_TOLERANCE: f64 = 1e-16;

/// Pure state `Σ c_n |n⟩`, `n = 0..=cutoff`, normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<Complex64>,
    raw_norm: f64,
}

/// Fock-diagonal mixed state with weights `w_r`, `r = 0..=cutoff`, summing to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct FockDiagonal {
    weights: Vec<f64>,
    raw_norm: f64,
}

impl FockVector {
    /// Normalizes `amplitudes`; the squared norm before scaling is kept.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("empty amplitude vector".into()));
        }
        let raw_norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !raw_norm.is_finite() || raw_norm <= DEGENERACY_THRESHOLD {
            return Err(Error::DegenerateState(raw_norm));
        }
        let scale = raw_norm.sqrt().recip();
        Ok(FockVector {
            amplitudes: amplitudes.into_iter().map(|a| a * scale).collect(),
            raw_norm,
        })
    }

    /// `|n⟩` in a space of dimension `cutoff + 1`.
    pub fn fock(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(Error::InvalidArgument(format!("Fock index {n} exceeds cutoff {cutoff}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        amps[n] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(amps)
    }

    pub fn vacuum(cutoff: usize) -> Result<Self> {
        Self::fock(0, cutoff)
    }

    /// Truncated coherent state `|α⟩`.
    pub fn coherent(alpha: Complex64, cutoff: usize) -> Result<Self> {
        Self::from_amplitudes(coherent_amplitudes(alpha, 1.0, cutoff, |_| 1.0))
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `Σ |c_n|²` before normalization.
    pub fn raw_norm(&self) -> f64 {
        self.raw_norm
    }
}

impl FockDiagonal {
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("empty weight vector".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidArgument("weights must be finite and non-negative".into()));
        }
        let raw_norm: f64 = weights.iter().sum();
        if raw_norm <= DEGENERACY_THRESHOLD {
            return Err(Error::DegenerateState(raw_norm));
        }
        Ok(FockDiagonal {
            weights: weights.into_iter().map(|w| w / raw_norm).collect(),
            raw_norm,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn raw_norm(&self) -> f64 {
        self.raw_norm
    }
}

/// `e^{-|α|²/2} (wα)^n / √n! · f(n)`. The modulus recursion runs in the
/// linear domain while `e^{-|α|²/2}` is representable, in logs otherwise.
fn coherent_amplitudes<F>(alpha: Complex64, w: f64, cutoff: usize, f: F) -> Vec<Complex64>
where
    F: Fn(usize) -> f64,
{
    let x = alpha.norm_sqr();
    let r = alpha.norm() * w;
    let phase = alpha.arg();
    let linear = x < LINEAR_AMPLITUDE_LIMIT;
    let mut out = Vec::with_capacity(cutoff + 1);
    let mut ln_mod = -0.5 * x;
    let mut modulus = ln_mod.exp();
    for n in 0..=cutoff {
        if n > 0 {
            if r == 0.0 {
                out.push(Complex64::new(0.0, 0.0));
                continue;
            }
            if linear {
                modulus *= r / (n as f64).sqrt();
            } else {
                ln_mod += r.ln() - 0.5 * (n as f64).ln();
                modulus = ln_mod.exp();
            }
        }
        out.push(Complex64::from_polar(modulus, phase * n as f64) * f(n));
    }
    out
}

/// `ln` of the un-normalized Fock weights of `spec`, `None` where a weight is 0.
fn ln_weight_fn(spec: &StateSpec) -> impl FnMut(usize) -> Option<f64> {
    let sup = spec.sup();
    let w = spec.detector().attenuation();
    let (x, ln_q, ln_pref, coherent) = match spec {
        StateSpec::Socs { coherent, .. } => {
            let x = coherent.intensity();
            (x, (x * w * w).ln(), -x, true)
        }
        StateSpec::Sots { thermal, .. } => {
            let nbar = thermal.nbar();
            (nbar, (thermal.ratio() * w * w).ln(), -nbar.ln_1p(), false)
        }
    };
    let mut ln_fact = vec![0.0f64];
    move |n: usize| {
        while ln_fact.len() <= n {
            let j = ln_fact.len();
            ln_fact.push(ln_fact[j - 1] + (j as f64).ln());
        }
        let g = sup.g(n as f64);
        if g == 0.0 || (n > 0 && (x == 0.0 || w == 0.0)) {
            return None;
        }
        let mut lw = ln_pref + 2.0 * g.abs().ln();
        if n > 0 {
            lw += n as f64 * ln_q;
            if coherent {
                lw -= ln_fact[n];
            }
        }
        Some(lw)
    }
}

/// `(k+1)(k+2)⋯(k+j)` when it stays comfortably finite.
fn rising(k: usize, j: usize) -> Option<f64> {
    let mut p = 1.0f64;
    for i in 1..=j {
        p *= (k + i) as f64;
        if p > 1e300 {
            return None;
        }
    }
    Some(p)
}

fn ln_rising(k: usize, j: usize) -> f64 {
    (1..=j).map(|i| ((k + i) as f64).ln()).sum()
}

fn sup_monotone(sup: &SupParams, n: usize) -> bool {
    let (a, b) = (sup.g(n as f64), sup.g(n as f64 + 1.0));
    a * b > 0.0 && b.abs() >= a.abs()
}

/// Smallest index `K` past which the tail of `w_n (1+n)^order` is below
/// `1e-16` of the partial sum, through a geometric bound once the term ratio
/// is decreasing; the cutoff is `K + order + 4`.
pub fn choose_cutoff(spec: &StateSpec, max_order: usize) -> Result<usize> {
    let mut ln_w = ln_weight_fn(spec);
    let sup = spec.sup();
    // coherent: x w² = 0; thermal: μ w² = 0
    let single = match spec {
        StateSpec::Socs { coherent, detector, .. } => {
            coherent.intensity() * detector.attenuation().powi(2) == 0.0
        }
        StateSpec::Sots { thermal, detector, .. } => {
            thermal.ratio() * detector.attenuation().powi(2) == 0.0
        }
    };
    let mut ln_u = |n: usize| ln_w(n).map(|lw| lw + max_order as f64 * (1.0 + n as f64).ln());
    let mut k = 0usize;
    if !single {
        // sum of u_n kept as exp(ln_scale) * sum, rescaled as the terms grow
        let mut sum = 0.0f64;
        let mut ln_scale = f64::NEG_INFINITY;
        let mut n = 0usize;
        loop {
            if n >= MAX_CUTOFF {
                return Err(Error::CutoffInfeasible(MAX_CUTOFF));
            }
            if let Some(lu) = ln_u(n) {
                if lu > ln_scale {
                    sum *= (ln_scale - lu).exp();
                    ln_scale = lu;
                }
                sum += (lu - ln_scale).exp();
                if let Some(ln_next) = ln_u(n + 1) {
                    let rho = (ln_next - lu).exp();
                    if sup_monotone(&sup, n) && rho < 1.0 {
                        let tail = (lu - ln_scale).exp() * rho / (1.0 - rho);
                        if tail <= TAIL_TOLERANCE * sum {
                            k = n;
                            break;
                        }
                    }
                }
            }
            n += 1;
        }
    } else if ln_w(0).is_none() {
        return Err(Error::DegenerateState(0.0));
    }
    let cutoff = k + max_order + CUTOFF_MARGIN;
    if cutoff > MAX_CUTOFF {
        return Err(Error::CutoffInfeasible(MAX_CUTOFF));
    }
    Ok(cutoff)
}

/// `D(η) A |α⟩` truncated at `cutoff`.
pub fn build_socs(spec: &StateSpec, cutoff: usize) -> Result<FockVector> {
    let StateSpec::Socs { sup, coherent, detector } = spec else {
        return Err(Error::InvalidArgument("build_socs needs a coherent-state spec".into()));
    };
    let amps = coherent_amplitudes(coherent.alpha(), detector.attenuation(), cutoff, |n| {
        sup.g(n as f64)
    });
    FockVector::from_amplitudes(amps)
}

/// `D(η) A ρ_th A† D(η)` truncated at `cutoff`.
pub fn build_sots(spec: &StateSpec, cutoff: usize) -> Result<FockDiagonal> {
    let StateSpec::Sots { sup, thermal, detector } = spec else {
        return Err(Error::InvalidArgument("build_sots needs a thermal-state spec".into()));
    };
    let nbar = thermal.nbar();
    let q = thermal.ratio() * detector.attenuation().powi(2);
    let mut weights = Vec::with_capacity(cutoff + 1);
    let mut ln_a = -nbar.ln_1p();
    for r in 0..=cutoff {
        if r > 0 {
            if q == 0.0 {
                weights.push(0.0);
                continue;
            }
            ln_a += q.ln();
        }
        weights.push(ln_a.exp() * sup.g(r as f64).powi(2));
    }
    FockDiagonal::from_weights(weights)
}

/// A built reference state plus the moment order its cutoff was sized for.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleState {
    Vector { state: FockVector, max_order: usize },
    Diagonal { state: FockDiagonal, max_order: usize },
}

impl OracleState {
    /// Builds `spec` with a cutoff from [`choose_cutoff`].
    pub fn from_spec(spec: &StateSpec, max_order: usize) -> Result<Self> {
        let cutoff = choose_cutoff(spec, max_order)?;
        Self::from_spec_with_cutoff(spec, max_order, cutoff)
    }

    pub fn from_spec_with_cutoff(spec: &StateSpec, max_order: usize, cutoff: usize) -> Result<Self> {
        if cutoff < max_order + CUTOFF_MARGIN {
            return Err(Error::OrderLimit {
                order: max_order,
                bound: cutoff.saturating_sub(CUTOFF_MARGIN),
            });
        }
        Ok(match spec {
            StateSpec::Socs { .. } => OracleState::Vector {
                state: build_socs(spec, cutoff)?,
                max_order,
            },
            StateSpec::Sots { .. } => OracleState::Diagonal {
                state: build_sots(spec, cutoff)?,
                max_order,
            },
        })
    }

    /// Unoperated coherent state, sized like a coherent input of the same `α`.
    pub fn coherent(alpha: Complex64, max_order: usize) -> Result<Self> {
        let spec = StateSpec::socs(SupParams::new(1.0, 0.0)?, alpha)?;
        let cutoff = choose_cutoff(&spec, max_order)?;
        Ok(OracleState::Vector {
            state: FockVector::coherent(alpha, cutoff)?,
            max_order,
        })
    }

    pub fn fock(n: usize, max_order: usize) -> Result<Self> {
        Ok(OracleState::Vector {
            state: FockVector::fock(n, n + max_order + CUTOFF_MARGIN)?,
            max_order,
        })
    }

    pub fn cutoff(&self) -> usize {
        match self {
            OracleState::Vector { state, .. } => state.cutoff(),
            OracleState::Diagonal { state, .. } => state.cutoff(),
        }
    }

    pub fn raw_norm(&self) -> f64 {
        match self {
            OracleState::Vector { state, .. } => state.raw_norm(),
            OracleState::Diagonal { state, .. } => state.raw_norm(),
        }
    }

    fn check_order(&self, order: usize) -> Result<()> {
        let bound = self.cutoff().saturating_sub(CUTOFF_MARGIN);
        if order > bound {
            return Err(Error::OrderLimit { order, bound });
        }
        Ok(())
    }

    /// `⟨a†^m a^n⟩` by direct contraction, divided by the stored norm so a
    /// rounding offset in the normalization does not grow with the order.
    pub fn moment(&self, m: usize, n: usize) -> Result<Complex64> {
        self.check_order(m.max(n))?;
        match self {
            OracleState::Vector { state, .. } => {
                let amps = state.amplitudes();
                let top = amps.len() - m.max(n);
                let (mut re, mut im) = (Vec::with_capacity(top), Vec::with_capacity(top));
                for k in 0..top {
                    let (am, an) = (amps[k + m], amps[k + n]);
                    if am.norm_sqr() == 0.0 || an.norm_sqr() == 0.0 {
                        continue;
                    }
                    let term = match (rising(k, m), rising(k, n)) {
                        (Some(pm), Some(pn)) => am.conj() * an * (pm * pn).sqrt(),
                        _ => {
                            let ln_mod =
                                am.norm().ln() + an.norm().ln() + 0.5 * (ln_rising(k, m) + ln_rising(k, n));
                            Complex64::from_polar(ln_mod.exp(), an.arg() - am.arg())
                        }
                    };
                    re.push(term.re);
                    im.push(term.im);
                }
                let norm = neumaier_sum(amps.iter().map(|a| a.norm_sqr()));
                Ok(Complex64::new(neumaier_sum(re), neumaier_sum(im)) / norm)
            }
            OracleState::Diagonal { state, .. } => {
                if m != n {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let terms = state.weights().iter().enumerate().skip(n).filter(|(_, &w)| w != 0.0).map(
                    |(r, &w)| match rising(r - n, n) {
                        Some(p) => w * p,
                        None => (w.ln() + ln_rising(r - n, n)).exp(),
                    },
                );
                let norm = neumaier_sum(state.weights().iter().copied());
                Ok(Complex64::new(neumaier_sum(terms) / norm, 0.0))
            }
        }
    }

    pub fn photon_prob(&self, m: usize) -> Result<f64> {
        if m > self.cutoff() {
            return Err(Error::OrderLimit {
                order: m,
                bound: self.cutoff(),
            });
        }
        Ok(match self {
            OracleState::Vector { state, .. } => state.amplitudes()[m].norm_sqr(),
            OracleState::Diagonal { state, .. } => state.weights()[m],
        })
    }

    /// `Q(β) = ⟨β|ρ|β⟩ / π` with `⟨β|n⟩ = e^{-|β|²/2} β*^n / √n!`.
    pub fn husimi(&self, beta: Complex64) -> f64 {
        let nc = self.cutoff();
        let y = beta.norm_sqr();
        let ln_b = |n: usize, ln_fact: f64| {
            let power = if n == 0 { 0.0 } else { n as f64 * beta.norm().ln() };
            -0.5 * y + power - 0.5 * ln_fact
        };
        let mut ln_fact = 0.0;
        match self {
            OracleState::Vector { state, .. } => {
                let mut overlap = Complex64::new(0.0, 0.0);
                for (n, &c) in state.amplitudes().iter().enumerate() {
                    if n > 0 {
                        ln_fact += (n as f64).ln();
                    }
                    if c.norm_sqr() == 0.0 || (n > 0 && y == 0.0) {
                        continue;
                    }
                    let bn = Complex64::from_polar(ln_b(n, ln_fact).exp(), -beta.arg() * n as f64);
                    overlap += bn * c;
                }
                debug_assert!(nc + 1 == state.amplitudes().len());
                overlap.norm_sqr() / std::f64::consts::PI
            }
            OracleState::Diagonal { state, .. } => {
                let mut acc = 0.0;
                for (r, &w) in state.weights().iter().enumerate() {
                    if r > 0 {
                        ln_fact += (r as f64).ln();
                    }
                    if w == 0.0 || (r > 0 && y == 0.0) {
                        continue;
                    }
                    acc += w * (2.0 * ln_b(r, ln_fact)).exp();
                }
                acc / std::f64::consts::PI
            }
        }
    }

    /// `⟨X^k⟩` and, with `shift`, `⟨(X - shift)^k⟩`, from the tridiagonal
    /// matrix of `X = (a + a†)/√2` on a space padded so no action is truncated.
    pub fn quadrature_moment_shifted(&self, k: usize, shift: f64) -> Result<f64> {
        if k > MAX_QUADRATURE_POWER {
            return Err(Error::SizeLimit {
                what: "quadrature power",
                limit: MAX_QUADRATURE_POWER,
                got: k,
            });
        }
        self.check_order(k)?;
        let split = |v: Vec<Complex64>| -> f64 {
            let lo = apply_x_power(&v, k / 2, shift);
            let hi = apply_x_power(&v, k - k / 2, shift);
            lo.iter().zip(&hi).map(|(a, b)| (a.conj() * b).re).sum()
        };
        Ok(match self {
            OracleState::Vector { state, .. } => split(state.amplitudes().to_vec()),
            OracleState::Diagonal { state, .. } => {
                let dim = state.weights().len();
                let mut acc = 0.0;
                for (r, &w) in state.weights().iter().enumerate() {
                    if w == 0.0 {
                        continue;
                    }
                    let mut basis = vec![Complex64::new(0.0, 0.0); dim];
                    basis[r] = Complex64::new(1.0, 0.0);
                    acc += w * split(basis);
                }
                acc
            }
        })
    }

    pub fn quadrature_moment(&self, k: usize) -> Result<f64> {
        self.quadrature_moment_shifted(k, 0.0)
    }

    /// `⟨(X - ⟨X⟩)^k⟩` with the mean from the same matrix path.
    pub fn central_quadrature_moment(&self, k: usize) -> Result<f64> {
        let mean = self.quadrature_moment(1)?;
        self.quadrature_moment_shifted(k, mean)
    }

    /// `Σ_n p_n (n - ⟨N⟩)^l` straight from the photon distribution.
    pub fn central_number_moment(&self, l: usize) -> f64 {
        let probs: Vec<f64> = (0..=self.cutoff())
            .map(|n| self.photon_prob(n).expect("index within cutoff"))
            .collect();
        let mean: f64 = probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        probs
            .iter()
            .enumerate()
            .map(|(n, p)| p * (n as f64 - mean).powi(l as i32))
            .sum()
    }

    /// Line-oriented dump: `n,re,im` rows for vectors, `r,weight` for diagonals.
    pub fn dump<W: Write>(&self, mut out: W) -> Result<()> {
        match self {
            OracleState::Vector { state, .. } => {
                writeln!(out, "n,re,im")?;
                for (n, a) in state.amplitudes().iter().enumerate() {
                    writeln!(out, "{n},{:.16e},{:.16e}", a.re, a.im)?;
                }
            }
            OracleState::Diagonal { state, .. } => {
                writeln!(out, "r,weight")?;
                for (r, w) in state.weights().iter().enumerate() {
                    writeln!(out, "{r},{w:.16e}")?;
                }
            }
        }
        Ok(())
    }
}

/// `(X - shift)^p v` on a space grown by one level per application.
fn apply_x_power(v: &[Complex64], p: usize, shift: f64) -> Vec<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut cur = v.to_vec();
    for _ in 0..p {
        let mut next = vec![Complex64::new(0.0, 0.0); cur.len() + 1];
        for (n, &c) in cur.iter().enumerate() {
            // a|n⟩ = √n |n-1⟩, a†|n⟩ = √(n+1) |n+1⟩
            if n > 0 {
                next[n - 1] += c * ((n as f64).sqrt() * h);
            }
            next[n + 1] += c * (((n + 1) as f64).sqrt() * h);
            next[n] -= c * shift;
        }
        cur = next;
    }
    cur
}

impl MomentProvider for OracleState {
    fn moment(&self, m: usize, n: usize) -> Result<Complex64> {
        OracleState::moment(self, m, n)
    }

    fn photon_prob(&self, m: usize) -> Result<f64> {
        OracleState::photon_prob(self, m)
    }

    fn order_bound(&self) -> usize {
        match self {
            OracleState::Vector { max_order, .. } | OracleState::Diagonal { max_order, .. } => *max_order,
        }
    }
}
