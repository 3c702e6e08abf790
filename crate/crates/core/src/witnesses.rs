//! Nonclassicality witnesses over a generic moment backend.
//!
//! Each criterion only talks to a [`MomentProvider`], so the closed-form
//! backend and the truncated Fock-space oracle are interchangeable.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::algebra::{binomial, pochhammer_half, quadrature_powers, ratio_to_f64, stirling2_row};
use crate::error::{Error, Result};
use crate::states::{effective_state, husimi, StateSpec};

pub const MAX_NUMBER_ORDER: usize = 16;
pub const MAX_QUADRATURE_ORDER: usize = 12;
pub const MAX_HOSPS_ORDER: usize = 12;
pub const MAX_KLYSHKO_INDEX: usize = 4094;

/// Below this mean photon number the Mandel parameter has no denominator.
const MIN_MEAN_PHOTONS: f64 = 1e-12;
const IMAGINARY_RESIDUE: f64 = 1e-10;
const POLE_TOLERANCE: f64 = 1e-12;
const NUMBER_STATE_TOLERANCE: f64 = 1e-12;
const HUSIMI_ZERO_TOLERANCE: f64 = 1e-12;

/// Source of normal-ordered moments `⟨a†^m a^n⟩` and photon-number
/// probabilities for one state.
pub trait MomentProvider {
    fn moment(&self, m: usize, n: usize) -> Result<Complex64>;

    fn photon_prob(&self, m: usize) -> Result<f64>;

    /// Largest `m`/`n` this provider answers reliably.
    fn order_bound(&self) -> usize;

    /// `⟨X⟩` with `X = (a + a†)/√2`.
    fn quadrature_mean(&self) -> Result<Complex64> {
        Ok((self.moment(1, 0)? + self.moment(0, 1)?) * std::f64::consts::FRAC_1_SQRT_2)
    }
}

impl<P: MomentProvider + ?Sized> MomentProvider for &P {
    fn moment(&self, m: usize, n: usize) -> Result<Complex64> {
        (**self).moment(m, n)
    }

    fn photon_prob(&self, m: usize) -> Result<f64> {
        (**self).photon_prob(m)
    }

    fn order_bound(&self) -> usize {
        (**self).order_bound()
    }
}

impl<P: MomentProvider + ?Sized> MomentProvider for Box<P> {
    fn moment(&self, m: usize, n: usize) -> Result<Complex64> {
        (**self).moment(m, n)
    }

    fn photon_prob(&self, m: usize) -> Result<f64> {
        (**self).photon_prob(m)
    }

    fn order_bound(&self) -> usize {
        (**self).order_bound()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Criterion {
    MandelQ,
    Hoa,
    Hosps,
    Hos,
    AgarwalTara,
    Klyshko,
    Husimi,
}

impl Criterion {
    pub const ALL: [Criterion; 7] = [
        Criterion::MandelQ,
        Criterion::Hoa,
        Criterion::Hosps,
        Criterion::Hos,
        Criterion::AgarwalTara,
        Criterion::Klyshko,
        Criterion::Husimi,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Criterion::MandelQ => "q",
            Criterion::Hoa => "hoa",
            Criterion::Hosps => "hosps",
            Criterion::Hos => "hos",
            Criterion::AgarwalTara => "a3",
            Criterion::Klyshko => "klyshko",
            Criterion::Husimi => "husimi",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .iter()
            .copied()
            .find(|c| c.tag() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown criterion {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Note {
    /// `A₃` evaluated on top of its pole; no verdict.
    Singular,
    /// `A₃` of a photon-number eigenstate, where both determinants vanish.
    NumberStateLimit,
}

impl fmt::Display for Note {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Note::Singular => "singular",
            Note::NumberStateLimit => "number-state limit",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessResult {
    pub criterion: Criterion,
    /// `l` for moment criteria, `m` for Klyshko, 0 for Husimi.
    pub order: usize,
    pub value: f64,
    /// Negative value for the sign-based criteria; a located zero for Husimi.
    pub nonclassical: bool,
    pub note: Option<Note>,
}

impl WitnessResult {
    fn signed(criterion: Criterion, order: usize, value: f64) -> Self {
        WitnessResult {
            criterion,
            order,
            value,
            nonclassical: value < 0.0,
            note: None,
        }
    }

    /// `None` when the value sits on a pole.
    pub fn verdict(&self) -> Option<bool> {
        match self.note {
            Some(Note::Singular) => None,
            _ => Some(self.nonclassical),
        }
    }
}

/// Normal-ordered moments `m_j = ⟨a†^j a^j⟩` and power moments
/// `μ_j = ⟨(a†a)^j⟩` for `j = 0..=j_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumberMoments {
    pub factorial: Vec<f64>,
    pub power: Vec<f64>,
}

impl NumberMoments {
    pub fn mean(&self) -> f64 {
        self.power.get(1).copied().unwrap_or(0.0)
    }
}

fn check_provider_order<P: MomentProvider + ?Sized>(mp: &P, order: usize) -> Result<()> {
    if order > mp.order_bound() {
        return Err(Error::OrderLimit {
            order,
            bound: mp.order_bound(),
        });
    }
    Ok(())
}

fn real_part(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() > IMAGINARY_RESIDUE * z.re.abs().max(1.0) {
        return Err(Error::InconsistentProvider(format!(
            "{what} has imaginary part {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

pub fn number_moments<P: MomentProvider + ?Sized>(mp: &P, j_max: usize) -> Result<NumberMoments> {
    if j_max > MAX_NUMBER_ORDER {
        return Err(Error::SizeLimit {
            what: "number-moment order",
            limit: MAX_NUMBER_ORDER,
            got: j_max,
        });
    }
    check_provider_order(mp, j_max)?;
    let factorial = (0..=j_max)
        .map(|j| real_part(mp.moment(j, j)?, "diagonal moment"))
        .collect::<Result<Vec<_>>>()?;
    let power = (0..=j_max)
        .map(|j| {
            let row = stirling2_row(j)?;
            Ok(neumaier_sum(
                row.iter().zip(&factorial).map(|(&s, &m)| s as f64 * m),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NumberMoments { factorial, power })
}

pub(crate) fn neumaier_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `Σ_k C(l,k) raw_k (-shift)^{l-k}`.
fn central_from_raw(raw: &[f64], shift: f64, l: usize) -> Result<f64> {
    let terms = (0..=l)
        .map(|k| Ok(binomial(l, k)? as f64 * raw[k] * (-shift).powi((l - k) as i32)))
        .collect::<Result<Vec<_>>>()?;
    Ok(neumaier_sum(terms))
}

fn check_number_order(l: usize, min: usize, max: usize) -> Result<()> {
    if l < min {
        return Err(Error::InvalidArgument(format!("order must be >= {min}, got {l}")));
    }
    if l > max {
        return Err(Error::SizeLimit {
            what: "witness order",
            limit: max,
            got: l,
        });
    }
    Ok(())
}

/// `⟨(ΔN)^l⟩` from the power moments.
pub fn central_number_moment<P: MomentProvider + ?Sized>(mp: &P, l: usize) -> Result<f64> {
    check_number_order(l, 1, MAX_NUMBER_ORDER)?;
    let nm = number_moments(mp, l)?;
    if l == 1 {
        return Ok(0.0);
    }
    central_from_raw(&nm.power, nm.mean(), l)
}

/// Central moments of a Poisson distribution with mean `lambda`, through the
/// cumulant recursion `c_n = Σ_{k<n-1} C(n-1,k) λ c_k` (all cumulants are `λ`).
pub fn poisson_central_moments(lambda: f64, l_max: usize) -> Result<Vec<f64>> {
    let mut c = vec![0.0; l_max + 1];
    c[0] = 1.0;
    for n in 2..=l_max {
        let terms = (0..n - 1)
            .map(|k| Ok(binomial(n - 1, k)? as f64 * lambda * c[k]))
            .collect::<Result<Vec<_>>>()?;
        c[n] = neumaier_sum(terms);
    }
    Ok(c)
}

/// Higher-order Mandel parameter `⟨(ΔN)^l⟩ / ⟨N⟩ - 1`.
pub fn mandel_q<P: MomentProvider + ?Sized>(mp: &P, l: usize) -> Result<WitnessResult> {
    check_number_order(l, 2, MAX_NUMBER_ORDER)?;
    let nm = number_moments(mp, l)?;
    let mean = nm.mean();
    if mean <= MIN_MEAN_PHOTONS {
        return Err(Error::UndefinedWitness(format!(
            "Mandel parameter needs <N> > 0, got {mean:e}"
        )));
    }
    let central = central_from_raw(&nm.power, mean, l)?;
    Ok(WitnessResult::signed(Criterion::MandelQ, l, central / mean - 1.0))
}

/// Higher-order antibunching `⟨a†^l a^l⟩ - ⟨a†a⟩^l`.
pub fn hoa<P: MomentProvider + ?Sized>(mp: &P, l: usize) -> Result<WitnessResult> {
    check_number_order(l, 2, MAX_NUMBER_ORDER)?;
    check_provider_order(mp, l)?;
    let ml = real_part(mp.moment(l, l)?, "diagonal moment")?;
    let m1 = real_part(mp.moment(1, 1)?, "diagonal moment")?;
    Ok(WitnessResult::signed(Criterion::Hoa, l, ml - m1.powi(l as i32)))
}

/// Higher-order sub-Poissonian statistics: `⟨(ΔN)^l⟩` minus the same central
/// moment of a Poisson distribution with equal mean.
///
/// Expanded through the antibunching differences `d_f = m_f - m_1^f`:
/// `Σ_e C(l,e) (-m_1)^{l-e} Σ_{f<=e} S(e,f) d_f`, using standard Stirling
/// numbers and the sign `(-1)^{l-e}`.
pub fn hosps<P: MomentProvider + ?Sized>(mp: &P, l: usize) -> Result<WitnessResult> {
    check_number_order(l, 2, MAX_HOSPS_ORDER)?;
    let nm = number_moments(mp, l)?;
    let m1 = nm.factorial[1];
    let d: Vec<f64> = (0..=l)
        .map(|f| nm.factorial[f] - m1.powi(f as i32))
        .collect();
    let mut terms = Vec::new();
    for e in 0..=l {
        let row = stirling2_row(e)?;
        let inner = neumaier_sum((1..=e).map(|f| row[f] as f64 * d[f]));
        terms.push(binomial(l, e)? as f64 * (-m1).powi((l - e) as i32) * inner);
    }
    Ok(WitnessResult::signed(Criterion::Hosps, l, neumaier_sum(terms)))
}

/// Central quadrature moment `⟨(ΔX)^l⟩` from normal-ordered powers of `X`.
pub fn central_quadrature_moment<P: MomentProvider + ?Sized>(mp: &P, l: usize) -> Result<f64> {
    if l > MAX_QUADRATURE_ORDER {
        return Err(Error::SizeLimit {
            what: "quadrature order",
            limit: MAX_QUADRATURE_ORDER,
            got: l,
        });
    }
    check_provider_order(mp, l)?;
    let powers = quadrature_powers(l)?;
    let raw = powers
        .iter()
        .map(|p| real_part(p.expectation(|m, n| mp.moment(m, n))?, "quadrature moment"))
        .collect::<Result<Vec<_>>>()?;
    let mean = real_part(mp.quadrature_mean()?, "quadrature mean")?;
    central_from_raw(&raw, mean, l)
}

/// Hong–Mandel squeezing `(⟨(ΔX)^l⟩ - (1/2)_{l/2}) / (1/2)_{l/2}`, even `l`.
pub fn hos<P: MomentProvider + ?Sized>(mp: &P, l: usize) -> Result<WitnessResult> {
    if !l.is_multiple_of(2) || l < 2 {
        return Err(Error::InvalidArgument(format!(
            "squeezing order must be even and >= 2, got {l}"
        )));
    }
    let central = central_quadrature_moment(mp, l)?;
    let coherent = ratio_to_f64(&pochhammer_half(l)?);
    Ok(WitnessResult::signed(Criterion::Hos, l, (central - coherent) / coherent))
}

fn diff_of_products(a: f64, b: f64, c: f64, d: f64) -> f64 {
    // a*b - c*d with one rounding (Kahan)
    let cd = c * d;
    let err = (-c).mul_add(d, cd);
    let dop = a.mul_add(b, -cd);
    dop + err
}

/// 3×3 Hankel determinant of `[v0 v1 v2; v1 v2 v3; v2 v3 v4]`.
fn hankel_det3(v: &[f64]) -> f64 {
    let minor0 = diff_of_products(v[2], v[4], v[3], v[3]);
    let minor1 = diff_of_products(v[1], v[4], v[3], v[2]);
    let minor2 = diff_of_products(v[1], v[3], v[2], v[2]);
    neumaier_sum([v[0] * minor0, -v[1] * minor1, v[2] * minor2])
}

/// Agarwal–Tara `A₃ = det m / (det μ - det m)`.
///
/// Photon-number eigenstates make both determinants vanish; they are assigned
/// their limiting values (0 for vacuum, -1 otherwise). A denominator lost in
/// rounding relative to the determinants is reported as singular.
pub fn agarwal_tara<P: MomentProvider + ?Sized>(mp: &P) -> Result<WitnessResult> {
    let nm = number_moments(mp, 4)?;
    let mean = nm.mean();
    let variance = nm.power[2] - mean * mean;
    if variance.abs() <= NUMBER_STATE_TOLERANCE * mean.powi(2).max(1.0) {
        let value = if mean < 0.5 { 0.0 } else { -1.0 };
        return Ok(WitnessResult {
            criterion: Criterion::AgarwalTara,
            order: 3,
            value,
            nonclassical: value < 0.0,
            note: Some(Note::NumberStateLimit),
        });
    }
    let det_m = hankel_det3(&nm.factorial);
    let det_mu = hankel_det3(&nm.power);
    let denom = det_mu - det_m;
    let value = det_m / denom;
    let scale = det_mu.abs().max(det_m.abs());
    if denom == 0.0 || denom.abs() < POLE_TOLERANCE * scale {
        return Ok(WitnessResult {
            criterion: Criterion::AgarwalTara,
            order: 3,
            value,
            nonclassical: false,
            note: Some(Note::Singular),
        });
    }
    Ok(WitnessResult::signed(Criterion::AgarwalTara, 3, value))
}

/// Denominator `det μ - det m` of `A₃`; its sign changes bracket the poles.
pub fn agarwal_tara_denominator<P: MomentProvider + ?Sized>(mp: &P) -> Result<f64> {
    let nm = number_moments(mp, 4)?;
    Ok(hankel_det3(&nm.power) - hankel_det3(&nm.factorial))
}

/// Klyshko `B(m) = (m+2) p_m p_{m+2} - (m+1) p_{m+1}²`.
pub fn klyshko<P: MomentProvider + ?Sized>(mp: &P, m: usize) -> Result<WitnessResult> {
    if m > MAX_KLYSHKO_INDEX {
        return Err(Error::SizeLimit {
            what: "Klyshko index",
            limit: MAX_KLYSHKO_INDEX,
            got: m,
        });
    }
    let p0 = mp.photon_prob(m)?;
    let p1 = mp.photon_prob(m + 1)?;
    let p2 = mp.photon_prob(m + 2)?;
    let value = diff_of_products((m + 2) as f64 * p0, p2, (m + 1) as f64 * p1, p1);
    Ok(WitnessResult::signed(Criterion::Klyshko, m, value))
}

/// The closed-form Klyshko expressions in their printed shape: the common
/// prefactor times `(m+2) g_m² g_{m+2}² - (m+1) g_{m+1}⁴`.
///
/// For thermal input this equals [`klyshko`] exactly. For coherent input the
/// printed shape leaves out the `1/(m!(m+1)!)`-type factorial weights of
/// Poisson statistics, so it is not proportional to `B(m)`.
pub fn klyshko_printed(spec: &StateSpec, m: usize) -> Result<f64> {
    let eff = effective_state(spec);
    let sup = eff.sup();
    let g = |k: usize| sup.g(k as f64);
    let bracket = (m + 2) as f64 * g(m).powi(2) * g(m + 2).powi(2)
        - (m + 1) as f64 * g(m + 1).powi(4);
    match eff {
        StateSpec::Socs { coherent, .. } => {
            let norm = crate::states::normalization_socs(&sup, &coherent)?;
            let x = coherent.intensity();
            Ok(x.powi(2 * m as i32 + 2) / (norm * norm) * bracket)
        }
        StateSpec::Sots { thermal, .. } => {
            let norm = crate::states::normalization_sots(&sup, &thermal)?;
            let a = 1.0 / (1.0 + thermal.nbar());
            let mu = thermal.ratio();
            Ok(a * a * mu.powi(2 * m as i32 + 2) / (norm * norm) * bracket)
        }
    }
}

/// Locates a zero of the closed-form Husimi function inside `|β| <= radius`.
pub fn husimi_zero_locus(spec: &StateSpec, radius: f64) -> Result<Option<Complex64>> {
    husimi_zero_locus_with(spec, radius, |b| husimi(spec, b))
}

/// Zero search against an arbitrary evaluation `q` of the same state.
///
/// Coherent input can only vanish where `s + (s+t) α β* = 0`, so that point is
/// tested directly; thermal input is rotationally symmetric and is minimized
/// along `|β|`. A point counts as a zero when `q` there is at most `1e-12` of
/// the largest sampled value.
pub fn husimi_zero_locus_with<F>(spec: &StateSpec, radius: f64, q: F) -> Result<Option<Complex64>>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let eff = effective_state(spec);
    eff.normalization()?;
    let sup = eff.sup();
    let peak = husimi_peak(radius, &q)?;
    match eff {
        StateSpec::Socs { coherent, .. } => {
            let alpha = coherent.alpha();
            let d = sup.slope();
            if alpha.norm() == 0.0 || d == 0.0 {
                // Q ∝ s² e^{-|β|²} has no zero
                return Ok(None);
            }
            let beta = -(sup.s() / (d * alpha.conj()));
            if beta.norm() > radius {
                return Ok(None);
            }
            Ok((q(beta)? <= HUSIMI_ZERO_TOLERANCE * peak).then_some(beta))
        }
        StateSpec::Sots { .. } => {
            let qr = |r: f64| q(Complex64::new(r, 0.0));
            let samples = 2001;
            let h = radius / (samples - 1) as f64;
            let mut best = (0usize, f64::INFINITY);
            for i in 0..samples {
                let v = qr(h * i as f64)?;
                if v < best.1 {
                    best = (i, v);
                }
            }
            // a minimum on the rim is the Gaussian tail, not a zero
            if best.0 + 1 == samples {
                return Ok(None);
            }
            let best = (h * best.0 as f64, best.1);
            // golden-section refinement around the best sample
            let (mut lo, mut hi) = ((best.0 - h).max(0.0), (best.0 + h).min(radius));
            let phi = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..80 {
                let a = hi - phi * (hi - lo);
                let b = lo + phi * (hi - lo);
                if qr(a)? < qr(b)? {
                    hi = b;
                } else {
                    lo = a;
                }
            }
            let mid = 0.5 * (lo + hi);
            let at_mid = qr(mid)?;
            let (r, v) = if at_mid < best.1 { (mid, at_mid) } else { best };
            Ok((v <= HUSIMI_ZERO_TOLERANCE * peak).then_some(Complex64::new(r, 0.0)))
        }
    }
}

fn husimi_peak<F>(radius: f64, q: &F) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let steps = 40;
    let mut peak = 0.0f64;
    for i in 0..=steps {
        for j in 0..=steps {
            let beta = Complex64::new(
                -radius + 2.0 * radius * i as f64 / steps as f64,
                -radius + 2.0 * radius * j as f64 / steps as f64,
            );
            if beta.norm() <= radius {
                peak = peak.max(q(beta)?);
            }
        }
    }
    Ok(peak)
}

/// Husimi witness on the closed form.
pub fn husimi_witness(spec: &StateSpec, radius: f64) -> Result<WitnessResult> {
    husimi_witness_with(spec, radius, |b| husimi(spec, b))
}

/// Husimi witness: value is `Q` at the located zero, or the smallest sampled
/// `Q` on the disc when there is none.
pub fn husimi_witness_with<F>(spec: &StateSpec, radius: f64, q: F) -> Result<WitnessResult>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let zero = husimi_zero_locus_with(spec, radius, &q)?;
    let value = match zero {
        Some(beta) => q(beta)?,
        None => husimi_disc_minimum(radius, &q)?,
    };
    Ok(WitnessResult {
        criterion: Criterion::Husimi,
        order: 0,
        value,
        nonclassical: zero.is_some(),
        note: None,
    })
}

fn husimi_disc_minimum<F>(radius: f64, q: &F) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let steps = 200;
    let mut best = f64::INFINITY;
    for i in 0..=steps {
        for j in 0..=steps {
            let beta = Complex64::new(
                -radius + 2.0 * radius * i as f64 / steps as f64,
                -radius + 2.0 * radius * j as f64 / steps as f64,
            );
            if beta.norm() <= radius {
                best = best.min(q(beta)?);
            }
        }
    }
    Ok(best)
}

/// `∫ Q d²β` by the trapezoid rule on the square `[-radius, radius]²`.
pub fn husimi_integral<F>(radius: f64, step: f64, q: F) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let n = (2.0 * radius / step).ceil() as usize;
    let h = 2.0 * radius / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let wi = if i == 0 || i == n { 0.5 } else { 1.0 };
        for j in 0..=n {
            let wj = if j == 0 || j == n { 0.5 } else { 1.0 };
            let beta = Complex64::new(-radius + h * i as f64, -radius + h * j as f64);
            acc += wi * wj * q(beta)?;
        }
    }
    Ok(acc * h * h)
}

/// Default search radius for Husimi zeros and plane integrals.
pub fn husimi_radius(spec: &StateSpec) -> f64 {
    8.0 + 2.0 * spec.gamma()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Diagonal provider over an explicit photon-number distribution.
    struct Diagonal(Vec<f64>);

    impl MomentProvider for Diagonal {
        fn moment(&self, m: usize, n: usize) -> Result<Complex64> {
            if m != n {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let v = self
                .0
                .iter()
                .enumerate()
                .map(|(k, p)| p * (0..n).map(|j| k as f64 - j as f64).product::<f64>())
                .sum();
            Ok(Complex64::new(v, 0.0))
        }

        fn photon_prob(&self, m: usize) -> Result<f64> {
            Ok(self.0.get(m).copied().unwrap_or(0.0))
        }

        fn order_bound(&self) -> usize {
            16
        }
    }

    fn fock(n: usize) -> Diagonal {
        let mut p = vec![0.0; n + 1];
        p[n] = 1.0;
        Diagonal(p)
    }

    #[test]
    fn vacuum_number_moments() {
        let nm = number_moments(&fock(0), 5).unwrap();
        assert_eq!(nm.factorial, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(nm.power, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn single_photon_number_moments() {
        let nm = number_moments(&fock(1), 6).unwrap();
        assert_eq!(nm.factorial[1], 1.0);
        assert!(nm.factorial[2..].iter().all(|&m| m == 0.0));
        assert!(nm.power.iter().all(|&mu| mu == 1.0));
    }

    #[test]
    fn order_limits() {
        assert!(matches!(number_moments(&fock(1), 17), Err(Error::SizeLimit { .. })));
        assert!(matches!(mandel_q(&fock(1), 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(hos(&fock(1), 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(hosps(&fock(2), 13), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn central_moment_first_order_is_zero() {
        assert_eq!(central_number_moment(&fock(3), 1).unwrap(), 0.0);
    }

    #[test]
    fn mandel_undefined_for_vacuum() {
        assert!(matches!(mandel_q(&fock(0), 2), Err(Error::UndefinedWitness(_))));
    }

    #[test]
    fn fock_state_witnesses() {
        assert_eq!(hoa(&fock(1), 2).unwrap().value, -1.0);
        let a3 = agarwal_tara(&fock(1)).unwrap();
        assert_eq!(a3.value, -1.0);
        assert_eq!(a3.note, Some(Note::NumberStateLimit));
        let a3 = agarwal_tara(&fock(3)).unwrap();
        assert!((a3.value + 1.0).abs() < 1e-12);
        assert_eq!(agarwal_tara(&fock(0)).unwrap().value, 0.0);
    }

    #[test]
    fn poisson_central_moments_known_values() {
        let c = poisson_central_moments(2.0, 6).unwrap();
        // λ, λ, λ + 3λ², λ + 10λ², λ + 25λ² + 15λ³
        assert_eq!(&c[..2], &[1.0, 0.0]);
        assert!((c[2] - 2.0).abs() < 1e-14);
        assert!((c[3] - 2.0).abs() < 1e-14);
        assert!((c[4] - 14.0).abs() < 1e-13);
        assert!((c[5] - 42.0).abs() < 1e-13);
        assert!((c[6] - (2.0 + 100.0 + 120.0)).abs() < 1e-12);
    }

    #[test]
    fn klyshko_of_fock_one() {
        // p = (0, 1, 0): B(0) = 2·0·0 - 1·1 = -1
        assert_eq!(klyshko(&fock(1), 0).unwrap().value, -1.0);
        assert!(klyshko(&fock(1), 4095).is_err());
    }

    #[test]
    fn criterion_tags_round_trip() {
        for c in Criterion::ALL {
            assert_eq!(c.tag().parse::<Criterion>().unwrap(), c);
        }
        assert!("wigner".parse::<Criterion>().is_err());
    }
}
