//! SUP-operated coherent and thermal states in closed form.
//!
//! The SUP operator `A = s a a† + t a† a = s + (s+t) N` is diagonal in the Fock
//! basis with eigenvalue `g(n) = s + (s+t) n`. Every quantity below is built
//! from that fact plus the Poisson / geometric photon statistics of the input.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::algebra::{ln_factorial, ln_falling};
use crate::error::{Error, Result};
use crate::witnesses::MomentProvider;

/// Normalizations at or below this are treated as the zero vector.
pub const DEGENERACY_THRESHOLD: f64 = 1e-300;
/// Largest `m` or `n` accepted by the closed-form moments.
pub const MAX_MOMENT_ORDER: usize = 64;
pub const MAX_PHOTON_INDEX: usize = 4096;
const SERIES_TOLERANCE: f64 = 1e-16;
const SERIES_TERM_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupParams {
    s: f64,
    t: f64,
}

impl SupParams {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        if !s.is_finite() || !t.is_finite() || (s * s + t * t - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "SUP parameters need s^2 + t^2 = 1, got s = {s}, t = {t}"
            )));
        }
        Ok(SupParams { s, t })
    }

    /// `t = +sqrt(1 - s^2)`.
    pub fn with_positive_t(s: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&s) {
            return Err(Error::InvalidArgument(format!("|s| must be <= 1, got {s}")));
        }
        Self::new(s, (1.0 - s * s).sqrt())
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `s + t`, the slope of the eigenvalue in the photon number.
    pub fn slope(&self) -> f64 {
        self.s + self.t
    }

    /// Eigenvalue of `A` on `|n⟩`.
    pub fn g(&self, n: f64) -> f64 {
        self.s + (self.s + self.t) * n
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentSpec {
    alpha: Complex64,
}

impl CoherentSpec {
    pub fn new(alpha: Complex64) -> Result<Self> {
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::InvalidArgument("coherent amplitude must be finite".into()));
        }
        Ok(CoherentSpec { alpha })
    }

    pub fn from_polar(modulus: f64, phase: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(modulus, phase))
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn intensity(&self) -> f64 {
        self.alpha.norm_sqr()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalSpec {
    nbar: f64,
}

impl ThermalSpec {
    pub fn new(nbar: f64) -> Result<Self> {
        if !nbar.is_finite() || nbar < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "mean photon number must be finite and >= 0, got {nbar}"
            )));
        }
        Ok(ThermalSpec { nbar })
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    /// Geometric ratio `n̄ / (1 + n̄)`.
    pub fn ratio(&self) -> f64 {
        self.nbar / (1.0 + self.nbar)
    }

    /// Thermal occupation `a_r = (1/(1+n̄)) (n̄/(1+n̄))^r`.
    pub fn weight(&self, r: u64) -> f64 {
        if r == 0 {
            return 1.0 / (1.0 + self.nbar);
        }
        if self.nbar == 0.0 {
            return 0.0;
        }
        (r as f64 * self.ratio().ln() - self.nbar.ln_1p()).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectorSpec {
    eta: f64,
}

impl Default for DetectorSpec {
    fn default() -> Self {
        DetectorSpec { eta: 0.0 }
    }
}

impl DetectorSpec {
    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidArgument(format!(
                "detector efficiency must lie in [0, 1], got {eta}"
            )));
        }
        Ok(DetectorSpec { eta })
    }

    pub fn ideal() -> Self {
        Self::default()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Per-photon attenuation `w = 1 - η` of `D(η) = (1-η)^{a†a}`.
    pub fn attenuation(&self) -> f64 {
        1.0 - self.eta
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateSpec {
    Socs {
        sup: SupParams,
        coherent: CoherentSpec,
        detector: DetectorSpec,
    },
    Sots {
        sup: SupParams,
        thermal: ThermalSpec,
        detector: DetectorSpec,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Socs,
    Sots,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Socs => "socs",
            Family::Sots => "sots",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "socs" => Ok(Family::Socs),
            "sots" => Ok(Family::Sots),
            other => Err(Error::InvalidArgument(format!("unknown state family {other:?}"))),
        }
    }
}

impl StateSpec {
    pub fn socs(sup: SupParams, alpha: Complex64) -> Result<Self> {
        Ok(StateSpec::Socs {
            sup,
            coherent: CoherentSpec::new(alpha)?,
            detector: DetectorSpec::ideal(),
        })
    }

    pub fn sots(sup: SupParams, nbar: f64) -> Result<Self> {
        Ok(StateSpec::Sots {
            sup,
            thermal: ThermalSpec::new(nbar)?,
            detector: DetectorSpec::ideal(),
        })
    }

    /// Builds a state from the figure-axis variable `γ` (`|α|` or `n̄`).
    pub fn from_gamma(
        family: Family,
        sup: SupParams,
        gamma: f64,
        phase: f64,
        detector: DetectorSpec,
    ) -> Result<Self> {
        Ok(match family {
            Family::Socs => StateSpec::Socs {
                sup,
                coherent: CoherentSpec::from_polar(gamma, phase)?,
                detector,
            },
            Family::Sots => StateSpec::Sots {
                sup,
                thermal: ThermalSpec::new(gamma)?,
                detector,
            },
        })
    }

    pub fn with_detector(self, detector: DetectorSpec) -> Self {
        match self {
            StateSpec::Socs { sup, coherent, .. } => StateSpec::Socs {
                sup,
                coherent,
                detector,
            },
            StateSpec::Sots { sup, thermal, .. } => StateSpec::Sots {
                sup,
                thermal,
                detector,
            },
        }
    }

    pub fn family(&self) -> Family {
        match self {
            StateSpec::Socs { .. } => Family::Socs,
            StateSpec::Sots { .. } => Family::Sots,
        }
    }

    pub fn sup(&self) -> SupParams {
        match self {
            StateSpec::Socs { sup, .. } | StateSpec::Sots { sup, .. } => *sup,
        }
    }

    pub fn detector(&self) -> DetectorSpec {
        match self {
            StateSpec::Socs { detector, .. } | StateSpec::Sots { detector, .. } => *detector,
        }
    }

    /// `|α|` or `n̄`.
    pub fn gamma(&self) -> f64 {
        match self {
            StateSpec::Socs { coherent, .. } => coherent.alpha().norm(),
            StateSpec::Sots { thermal, .. } => thermal.nbar(),
        }
    }

    pub fn normalization(&self) -> Result<f64> {
        match effective_state(self) {
            StateSpec::Socs { sup, coherent, .. } => normalization_socs(&sup, &coherent),
            StateSpec::Sots { sup, thermal, .. } => normalization_sots(&sup, &thermal),
        }
    }
}

/// Folds a non-ideal detector into the input state.
///
/// `A` and `D(η)` are both functions of `a†a`, so they commute:
/// `D(η) A |α⟩ ∝ A |(1-η) α⟩` and the thermal ratio `μ` becomes `μ (1-η)^2`.
pub fn effective_state(spec: &StateSpec) -> StateSpec {
    let w = spec.detector().attenuation();
    if w == 1.0 {
        return *spec;
    }
    match *spec {
        StateSpec::Socs { sup, coherent, .. } => StateSpec::Socs {
            sup,
            coherent: CoherentSpec {
                alpha: coherent.alpha() * w,
            },
            detector: DetectorSpec::ideal(),
        },
        StateSpec::Sots { sup, thermal, .. } => {
            let nbar = thermal.nbar();
            let w2 = w * w;
            // μ' = μ w², n̄' = μ' / (1 - μ')
            let nbar_eff = nbar * w2 / (1.0 + nbar - nbar * w2);
            StateSpec::Sots {
                sup,
                thermal: ThermalSpec { nbar: nbar_eff },
                detector: DetectorSpec::ideal(),
            }
        }
    }
}

fn check_norm(norm: f64) -> Result<f64> {
    if norm.is_finite() && norm > DEGENERACY_THRESHOLD {
        Ok(norm)
    } else {
        Err(Error::DegenerateState(norm))
    }
}

fn check_order(m: usize, n: usize) -> Result<()> {
    let order = m.max(n);
    if order > MAX_MOMENT_ORDER {
        return Err(Error::SizeLimit {
            what: "moment order",
            limit: MAX_MOMENT_ORDER,
            got: order,
        });
    }
    Ok(())
}

/// `N₁ = s² + (1 + 2s² + 4st)|α|² + (1 + 2st)|α|⁴`.
pub fn normalization_socs(p: &SupParams, c: &CoherentSpec) -> Result<f64> {
    let (s, t) = (p.s(), p.t());
    let x = c.intensity();
    check_norm(s * s + (1.0 + 2.0 * s * s + 4.0 * s * t) * x + (1.0 + 2.0 * s * t) * x * x)
}

/// `N₂ = s²(1+n̄)(1+2n̄) + 4st n̄(1+n̄) + t² n̄(1+2n̄)`.
pub fn normalization_sots(p: &SupParams, th: &ThermalSpec) -> Result<f64> {
    let (s, t) = (p.s(), p.t());
    let n = th.nbar();
    check_norm(
        s * s * (1.0 + n) * (1.0 + 2.0 * n) + 4.0 * s * t * n * (1.0 + n) + t * t * n * (1.0 + 2.0 * n),
    )
}

/// `α*^m α^n` via the polar form.
fn alpha_power(alpha: Complex64, m: usize, n: usize) -> Complex64 {
    if m + n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let r = alpha.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let phase = alpha.arg() * (n as f64 - m as f64);
    Complex64::from_polar(r.powi((m + n) as i32), phase)
}

/// `⟨a†^m a^n⟩` for the SUP-operated coherent state.
pub fn moment_socs(m: usize, n: usize, p: &SupParams, c: &CoherentSpec) -> Result<Complex64> {
    check_order(m, n)?;
    let norm = normalization_socs(p, c)?;
    if m == 0 && n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let (s, d) = (p.s(), p.slope());
    let x = c.intensity();
    let (mf, nf) = (m as f64, n as f64);
    let bracket = d * d * (mf * nf + (mf + nf + 1.0) * x + x * x)
        + s * d * (mf + nf + 2.0 * x)
        + s * s;
    Ok(alpha_power(c.alpha(), m, n) * (bracket / norm))
}

/// Sums `Σ_r a_r r!/(r-n)! g(r)² f(r)` with `0 <= f(r) <= 1`.
///
/// Terminates once the geometric bound on the tail of the un-weighted series
/// drops below `1e-16` of the accumulated un-weighted sum. The bound is only
/// applied once the term ratio is provably non-increasing: `r > n` and `|g|`
/// growing without a sign change.
pub(crate) fn thermal_series<F>(p: &SupParams, th: &ThermalSpec, n: usize, factor: F) -> Result<f64>
where
    F: Fn(u64) -> f64,
{
    let nbar = th.nbar();
    let n = n as u64;
    if nbar == 0.0 {
        return Ok(if n == 0 {
            th.weight(0) * p.g(0.0).powi(2) * factor(0)
        } else {
            0.0
        });
    }
    let ln_mu = th.ratio().ln();
    let ln_norm = nbar.ln_1p();
    let ln_term = |r: u64| -> Option<f64> {
        let g = p.g(r as f64).abs();
        if g == 0.0 {
            return None;
        }
        Some(r as f64 * ln_mu - ln_norm + ln_falling(r, n) + 2.0 * g.ln())
    };

    let mut weighted = 0.0;
    let mut plain = 0.0;
    let mut comp_w = 0.0;
    let mut comp_p = 0.0;
    let mut r = n;
    loop {
        if r - n > SERIES_TERM_CAP {
            return Err(Error::Numerical(format!(
                "thermal series did not converge within {SERIES_TERM_CAP} terms"
            )));
        }
        let here = ln_term(r);
        if let Some(lt) = here {
            let term = lt.exp();
            kahan_add(&mut plain, &mut comp_p, term);
            kahan_add(&mut weighted, &mut comp_w, term * factor(r));
        }
        let next = ln_term(r + 1);
        if let (Some(lt), Some(ln_next)) = (here, next) {
            let g_here = p.g(r as f64);
            let g_next = p.g(r as f64 + 1.0);
            let monotone = r > n && g_here * g_next > 0.0 && g_next.abs() >= g_here.abs();
            let ratio = (ln_next - lt).exp();
            if monotone && ratio < 1.0 {
                let tail = lt.exp() * ratio / (1.0 - ratio);
                if tail <= SERIES_TOLERANCE * plain {
                    break;
                }
            }
        }
        r += 1;
    }
    Ok(weighted + comp_w)
}

fn kahan_add(sum: &mut f64, comp: &mut f64, x: f64) {
    // Neumaier variant
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

/// `⟨a†^m a^n⟩` for the SUP-operated thermal state; zero off the diagonal.
pub fn moment_sots(m: usize, n: usize, p: &SupParams, th: &ThermalSpec) -> Result<f64> {
    check_order(m, n)?;
    let norm = normalization_sots(p, th)?;
    if m != n {
        return Ok(0.0);
    }
    if n == 0 {
        return Ok(1.0);
    }
    Ok(thermal_series(p, th, n, |_| 1.0)? / norm)
}

/// Photon-number probability `p_m = ⟨m|ρ|m⟩`; detector losses are folded in
/// through [`effective_state`].
pub fn photon_probability(spec: &StateSpec, m: usize) -> Result<f64> {
    if m > MAX_PHOTON_INDEX {
        return Err(Error::SizeLimit {
            what: "photon number",
            limit: MAX_PHOTON_INDEX,
            got: m,
        });
    }
    let eff = effective_state(spec);
    let sup = eff.sup();
    let g = sup.g(m as f64);
    match eff {
        StateSpec::Socs { coherent, .. } => {
            let norm = normalization_socs(&sup, &coherent)?;
            let x = coherent.intensity();
            if x == 0.0 || g == 0.0 {
                return Ok(if m == 0 { sup.s() * sup.s() / norm } else { 0.0 });
            }
            let ln_p = -x + m as f64 * x.ln() - ln_factorial(m as u64) + 2.0 * g.abs().ln() - norm.ln();
            Ok(ln_p.exp())
        }
        StateSpec::Sots { thermal, .. } => {
            let norm = normalization_sots(&sup, &thermal)?;
            Ok(thermal.weight(m as u64) * g * g / norm)
        }
    }
}

/// Closed-form Husimi function `Q(β) = ⟨β|ρ|β⟩ / π`.
pub fn husimi(spec: &StateSpec, beta: Complex64) -> Result<f64> {
    let eff = effective_state(spec);
    let sup = eff.sup();
    let (s, d) = (sup.s(), sup.slope());
    match eff {
        StateSpec::Socs { coherent, .. } => {
            let norm = normalization_socs(&sup, &coherent)?;
            let alpha = coherent.alpha();
            let overlap = s + d * alpha * beta.conj();
            // -|α|² - |β|² + αβ* + α*β = -|α - β|²
            let gauss = (-(alpha - beta).norm_sqr()).exp();
            Ok(overlap.norm_sqr() * gauss / (PI * norm))
        }
        StateSpec::Sots { thermal, .. } => {
            let norm = normalization_sots(&sup, &thermal)?;
            let nbar = thermal.nbar();
            let y = beta.norm_sqr() * nbar / (1.0 + nbar);
            let bracket = (s + d * y).powi(2) + d * d * y;
            let gauss = (-beta.norm_sqr() / (1.0 + nbar)).exp();
            Ok(bracket * gauss / (PI * (1.0 + nbar) * norm))
        }
    }
}

/// Closed-form backend: moments of a state after its detector is folded in.
#[derive(Clone, Copy, Debug)]
pub struct ClosedForm {
    spec: StateSpec,
}

impl ClosedForm {
    pub fn new(spec: &StateSpec) -> Result<Self> {
        let eff = effective_state(spec);
        eff.normalization()?;
        Ok(ClosedForm { spec: eff })
    }

    /// The detector-free state this provider evaluates.
    pub fn spec(&self) -> &StateSpec {
        &self.spec
    }
}

impl MomentProvider for ClosedForm {
    fn moment(&self, m: usize, n: usize) -> Result<Complex64> {
        match &self.spec {
            StateSpec::Socs { sup, coherent, .. } => moment_socs(m, n, sup, coherent),
            StateSpec::Sots { sup, thermal, .. } => {
                moment_sots(m, n, sup, thermal).map(|v| Complex64::new(v, 0.0))
            }
        }
    }

    fn photon_prob(&self, m: usize) -> Result<f64> {
        photon_probability(&self.spec, m)
    }

    fn order_bound(&self) -> usize {
        MAX_MOMENT_ORDER
    }
}

/// The η-dependent closed forms exactly as printed alongside the detector
/// model. They do not reduce to the η = 0 expressions, so they are only used
/// for side-by-side reporting against the definition-based path.
pub mod printed {
    use super::*;

    fn socs_block(s: f64, d: f64, x: f64) -> f64 {
        (s + d * x).powi(2) + d * d * x
    }

    /// Printed `N₁^η`.
    pub fn normalization_socs_eta(p: &SupParams, c: &CoherentSpec, det: &DetectorSpec) -> Result<f64> {
        let (s, d) = (p.s(), p.slope());
        let x = c.intensity();
        let (eta, w) = (det.eta(), det.attenuation());
        let value = socs_block(s, d, x)
            + socs_block(s, d, w * x) * (-eta * x).exp()
            + socs_block(s, d, w * w * x) * ((eta * eta - 2.0 * eta) * x).exp();
        if value.abs() <= DEGENERACY_THRESHOLD || !value.is_finite() {
            return Err(Error::DegenerateDenominator("printed DSOCS normalization"));
        }
        Ok(value)
    }

    /// Printed `N₂^η`, with `μ = n̄/(1+n̄)`, `θ = μ(1-η)`, `ζ = μ(1-η)²`.
    pub fn normalization_sots_eta(p: &SupParams, th: &ThermalSpec, det: &DetectorSpec) -> Result<f64> {
        let (s, d) = (p.s(), p.slope());
        let mu = th.ratio();
        let w = det.attenuation();
        let theta = mu * w;
        let zeta = mu * w * w;
        let block = |u: f64| ((s + d * u * u).powi(2) + d * d * u * u) * u.exp();
        let value = (block(mu) - 2.0 * block(theta) + block(zeta)) / (1.0 + th.nbar());
        if value.abs() <= DEGENERACY_THRESHOLD || !value.is_finite() {
            return Err(Error::DegenerateDenominator("printed DSOTS normalization"));
        }
        Ok(value)
    }

    /// Printed DSOCS moment `⟨a†^m a^n⟩₁^η`.
    pub fn moment_socs_eta(
        m: usize,
        n: usize,
        p: &SupParams,
        c: &CoherentSpec,
        det: &DetectorSpec,
    ) -> Result<Complex64> {
        check_order(m, n)?;
        let norm = normalization_socs_eta(p, c, det)?;
        let (s, d) = (p.s(), p.slope());
        let x = c.intensity();
        let (eta, w) = (det.eta(), det.attenuation());
        let bracket = socs_block(s, d, x)
            + (w.powi(m as i32) + w.powi(n as i32)) * socs_block(s, d, w * x) * (-eta * x).exp()
            + w.powi((m + n) as i32) * socs_block(s, d, w * w * x) * ((eta * eta - 2.0 * eta) * x).exp();
        Ok(alpha_power(c.alpha(), m, n) * (bracket / norm))
    }

    /// Printed DSOTS diagonal moment `⟨a†^n a^n⟩₂^η`.
    pub fn moment_sots_eta(n: usize, p: &SupParams, th: &ThermalSpec, det: &DetectorSpec) -> Result<f64> {
        check_order(n, n)?;
        let norm = normalization_sots_eta(p, th, det)?;
        let w = det.attenuation();
        let sum = thermal_series(p, th, n, |r| (1.0 - w.powi(r as i32)).powi(2))?;
        Ok(sum / norm)
    }
}
