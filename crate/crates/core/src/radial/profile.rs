//! Radial profile families and their `D = (1/r) d/dr` iterates.

use serde::{Deserialize, Serialize};

use super::bessel::{j_scaled, y_scaled};
use super::jet::Jet;
use crate::error::{Error, Result};

/// Number of `D`-iterates (beyond the value) provided by closed-form families.
pub const MAX_ORDER: usize = 5;

/// Radius below which the cosine sinc part is considered singular.
pub const SINC_COS_MIN_RADIUS: f64 = 1e-3;

/// Relative radius below which tabulated profiles freeze their derivatives.
pub const ORIGIN_EPS: f64 = 1e-4;

/// One term `(coeff + rate·t) r^power` of a polynomial profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub power: u32,
    pub coeff: f64,
    #[serde(default)]
    pub rate: f64,
}

/// Shape of the compactly supported bump on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpTemplate {
    /// `exp(-1/(s(1-s)))`
    #[default]
    Canonical,
    Zero,
}

/// A scalar function of `r = |x|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum RadialProfile {
    /// `α sin(λr)/r + β cos(λr)/r`
    SincPair { lambda: f64, alpha: f64, beta: f64 },
    Polynomial { terms: Vec<PolyTerm> },
    /// `α sin(jr) + β cos(jr)`, only evaluated for `r ≥ r_min`.
    TrigPeriodic { j: f64, alpha: f64, beta: f64, r_min: f64 },
    /// `a exp(-r²/w²)`
    Gaussian { amplitude: f64, width: f64 },
    /// `a Φ(r/Ra)` with `Φ` supported in `(0, 1)`.
    CompactBump {
        amplitude: f64,
        ra: f64,
        #[serde(default)]
        template: BumpTemplate,
    },
    Tabulated(TabulatedProfile),
}

impl RadialProfile {
    pub fn sinc(lambda: f64, alpha: f64, beta: f64) -> Self {
        RadialProfile::SincPair { lambda, alpha, beta }
    }

    /// Polynomial from `(power, coefficient)` pairs.
    pub fn poly(terms: &[(u32, f64)]) -> Self {
        RadialProfile::Polynomial {
            terms: terms
                .iter()
                .map(|&(power, coeff)| PolyTerm { power, coeff, rate: 0.0 })
                .collect(),
        }
    }

    pub fn gaussian(amplitude: f64, width: f64) -> Self {
        RadialProfile::Gaussian { amplitude, width }
    }

    pub fn bump(amplitude: f64, ra: f64) -> Self {
        RadialProfile::CompactBump {
            amplitude,
            ra,
            template: BumpTemplate::Canonical,
        }
    }

    pub fn trig(j: f64, alpha: f64, beta: f64, r_min: f64) -> Self {
        RadialProfile::TrigPeriodic { j, alpha, beta, r_min }
    }

    pub fn zero() -> Self {
        RadialProfile::Polynomial { terms: Vec::new() }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            RadialProfile::SincPair { .. } => "sinc_pair",
            RadialProfile::Polynomial { .. } => "polynomial",
            RadialProfile::TrigPeriodic { .. } => "trig_periodic",
            RadialProfile::Gaussian { .. } => "gaussian",
            RadialProfile::CompactBump { .. } => "compact_bump",
            RadialProfile::Tabulated(_) => "tabulated",
        }
    }

    /// Checks parameter ranges.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidProfile(m));
        match self {
            RadialProfile::SincPair { lambda, alpha, beta } => {
                if *lambda == 0.0 || !lambda.is_finite() {
                    return bad(format!("sinc wavenumber must be nonzero, got {lambda}"));
                }
                if !(alpha.is_finite() && beta.is_finite()) {
                    return bad("sinc amplitudes must be finite".into());
                }
            }
            RadialProfile::Polynomial { terms } => {
                if terms.iter().any(|t| !t.coeff.is_finite() || !t.rate.is_finite()) {
                    return bad("polynomial coefficients must be finite".into());
                }
            }
            RadialProfile::TrigPeriodic { j, r_min, .. } => {
                if !(*j > 0.0) {
                    return bad(format!("trig wavenumber must be positive, got {j}"));
                }
                if !(*r_min > 0.0) {
                    return bad("trig profile needs r_min > 0".into());
                }
            }
            RadialProfile::Gaussian { width, .. } => {
                if !(*width > 0.0) {
                    return bad(format!("gaussian width must be positive, got {width}"));
                }
            }
            RadialProfile::CompactBump { ra, .. } => {
                if !(*ra > 0.0) {
                    return bad(format!("bump radius must be positive, got {ra}"));
                }
            }
            RadialProfile::Tabulated(_) => {}
        }
        Ok(())
    }

    /// Highest `D`-iterate available.
    pub fn max_order(&self) -> usize {
        match self {
            RadialProfile::Tabulated(_) => 3,
            _ => MAX_ORDER,
        }
    }

    /// Characteristic length of the profile.
    pub fn scale(&self) -> f64 {
        match self {
            RadialProfile::SincPair { lambda, .. } => 1.0 / lambda.abs(),
            RadialProfile::Polynomial { .. } => 1.0,
            RadialProfile::TrigPeriodic { j, .. } => 1.0 / j,
            RadialProfile::Gaussian { width, .. } => *width,
            RadialProfile::CompactBump { ra, .. } => *ra,
            RadialProfile::Tabulated(t) => t.r_max(),
        }
    }

    /// Radii `[min, max]` where evaluation is allowed.
    pub fn valid_range(&self) -> (f64, f64) {
        match self {
            RadialProfile::SincPair { beta, .. } if *beta != 0.0 => {
                (SINC_COS_MIN_RADIUS, f64::INFINITY)
            }
            RadialProfile::TrigPeriodic { r_min, .. } => (*r_min, f64::INFINITY),
            RadialProfile::Tabulated(t) => (0.0, t.r_max()),
            _ => (0.0, f64::INFINITY),
        }
    }

    /// Whether the profile decays at infinity (needed for the heat kernel).
    pub fn decays(&self) -> bool {
        match self {
            RadialProfile::Polynomial { terms } => terms.iter().all(|t| t.coeff == 0.0),
            RadialProfile::TrigPeriodic { .. } => false,
            _ => true,
        }
    }

    /// Freezes time-dependent polynomial coefficients at `t`.
    pub fn at_time(&self, t: f64) -> RadialProfile {
        match self {
            RadialProfile::Polynomial { terms } => RadialProfile::Polynomial {
                terms: terms
                    .iter()
                    .map(|p| PolyTerm {
                        power: p.power,
                        coeff: p.coeff + p.rate * t,
                        rate: 0.0,
                    })
                    .collect(),
            },
            other => other.clone(),
        }
    }

    /// Coefficients `(c0, c2, c4)` if this is an even polynomial of degree ≤ 4.
    pub fn quartic_coeffs(&self) -> Option<[f64; 3]> {
        let RadialProfile::Polynomial { terms } = self else {
            return None;
        };
        let mut c = [0.0; 3];
        for t in terms {
            match t.power {
                0 | 2 | 4 => c[t.power as usize / 2] += t.coeff,
                _ if t.coeff == 0.0 => {}
                _ => return None,
            }
        }
        Some(c)
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        Ok(self.d_powers(r, 0)?[0])
    }

    /// `[f, Df, ..., D^5 f]` at `r` with `D = (1/r) d/dr`; entries above
    /// `order` are left at zero.
    pub fn d_powers(&self, r: f64, order: usize) -> Result<[f64; MAX_ORDER + 1]> {
        if order > self.max_order() {
            return Err(Error::UnsupportedOrder {
                family: self.family_name(),
                requested: order,
                available: self.max_order(),
            });
        }
        let (lo, hi) = self.valid_range();
        if !(r >= lo && r <= hi) {
            return Err(Error::OutOfRange { r, min: lo, max: hi });
        }
        let mut out = [0.0; MAX_ORDER + 1];
        match self {
            RadialProfile::SincPair { lambda, alpha, beta } => {
                let l = lambda.abs();
                let a = alpha * lambda.signum();
                let z = l * r;
                let mut lk = l;
                for (k, slot) in out.iter_mut().enumerate().take(order + 1) {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let mut v = 0.0;
                    if a != 0.0 {
                        v += a * lk * sign * j_scaled(k, z);
                    }
                    if *beta != 0.0 {
                        v -= beta * lk * sign * y_scaled(k, z);
                    }
                    *slot = v;
                    lk *= l * l;
                }
            }
            RadialProfile::Polynomial { terms } => {
                for t in terms {
                    let p = t.power as i32;
                    let mut c = t.coeff;
                    for (k, slot) in out.iter_mut().enumerate().take(order + 1) {
                        if c == 0.0 {
                            break;
                        }
                        let e = p - 2 * k as i32;
                        if e == 0 {
                            *slot += c;
                        } else if r == 0.0 {
                            if e < 0 {
                                return Err(Error::OutOfRange { r, min: f64::MIN_POSITIVE, max: hi });
                            }
                        } else {
                            *slot += c * r.powi(e);
                        }
                        c *= e as f64;
                    }
                }
            }
            RadialProfile::Gaussian { amplitude, width } => {
                let c = -2.0 / (width * width);
                let mut v = amplitude * (-(r * r) / (width * width)).exp();
                for slot in out.iter_mut().take(order + 1) {
                    *slot = v;
                    v *= c;
                }
            }
            RadialProfile::TrigPeriodic { j, alpha, beta, .. } => {
                let d = Jet::trig(r, *j, *alpha, *beta).d_powers(r);
                out[..=order].copy_from_slice(&d[..=order]);
            }
            RadialProfile::CompactBump { amplitude, ra, template } => {
                let s = r / ra;
                if *template == BumpTemplate::Zero || s <= ORIGIN_EPS || s >= 1.0 {
                    return Ok(out);
                }
                if order == 0 {
                    let q = s * (1.0 - s);
                    out[0] = amplitude * (-1.0 / q).exp();
                    return Ok(out);
                }
                let x = Jet::variable(r).scale(1.0 / ra);
                let q = x * (Jet::constant(1.0) - x);
                let g = -q.recip();
                if g.value() < -700.0 {
                    return Ok(out);
                }
                let d = g.exp().scale(*amplitude).d_powers(r);
                out[..=order].copy_from_slice(&d[..=order]);
            }
            RadialProfile::Tabulated(t) => {
                let d = t.d_powers(r);
                out[..=order].copy_from_slice(&d[..=order]);
            }
        }
        Ok(out)
    }
}

/// Samples `(r_i, f_i)` on `[0, r_max]` interpolated by a cubic spline built
/// on the mirror-extended data, so the interpolant is even in `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableData", into = "TableData")]
pub struct TabulatedProfile {
    r: Vec<f64>,
    values: Vec<f64>,
    knots: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TableData {
    r: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<TableData> for TabulatedProfile {
    type Error = Error;
    fn try_from(t: TableData) -> Result<Self> {
        TabulatedProfile::new(t.r, t.values)
    }
}

impl From<TabulatedProfile> for TableData {
    fn from(t: TabulatedProfile) -> Self {
        TableData { r: t.r, values: t.values }
    }
}

impl TabulatedProfile {
    pub fn new(r: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if r.len() != values.len() || r.len() < 4 {
            return Err(Error::InvalidProfile(
                "tabulated profile needs at least 4 matching (r, value) pairs".into(),
            ));
        }
        if r[0] < 0.0 || r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile(
                "tabulated radii must be non-negative and strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("tabulated values must be finite".into()));
        }
        let skip = usize::from(r[0] == 0.0);
        let mut knots: Vec<f64> = r[skip..].iter().rev().map(|v| -v).collect();
        let mut y: Vec<f64> = values[skip..].iter().rev().copied().collect();
        knots.extend_from_slice(&r);
        y.extend_from_slice(&values);
        let m = natural_spline(&knots, &y);
        Ok(Self { r, values, knots, y, m })
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn r_max(&self) -> f64 {
        *self.r.last().unwrap()
    }

    /// Spline value and its first three derivatives.
    fn spline(&self, x: f64) -> [f64; 4] {
        let n = self.knots.len();
        let i = match self.knots.partition_point(|&k| k <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        let (y0, y1, m0, m1) = (self.y[i], self.y[i + 1], self.m[i], self.m[i + 1]);
        [
            a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0,
            (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1,
            a * m0 + b * m1,
            (m1 - m0) / h,
        ]
    }

    fn d_powers(&self, r: f64) -> [f64; MAX_ORDER + 1] {
        let value = self.spline(r)[0];
        let re = r.max(ORIGIN_EPS * self.r_max());
        let [_, f1, f2, f3] = self.spline(re);
        let d1 = f1 / re;
        let d2 = (f2 - d1) / (re * re);
        let d3 = (f3 - 3.0 * re * d2) / (re * re * re);
        [value, d1, d2, d3, 0.0, 0.0]
    }
}

fn natural_spline(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    // Thomas algorithm on the interior equations
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
        c[i] = h1 / diag;
        let rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        d[i] = (rhs - h0 * d[i - 1]) / diag;
    }
    for i in (1..n - 1).rev() {
        m[i] = d[i] - c[i] * m[i + 1];
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_r2() {
        let p = RadialProfile::poly(&[(2, 1.0)]);
        let d = p.d_powers(0.0, 5).unwrap();
        assert_eq!(d, [0.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
        let d = p.d_powers(1.3, 5).unwrap();
        assert!((d[0] - 1.69).abs() < 1e-15);
    }

    #[test]
    fn odd_polynomial_is_singular_at_origin() {
        let p = RadialProfile::poly(&[(3, 1.0)]);
        assert!(p.d_powers(0.0, 2).is_err());
        let d = p.d_powers(2.0, 2).unwrap();
        assert!((d[1] - 6.0).abs() < 1e-14);
        assert!((d[2] - 1.5).abs() < 1e-14);
    }

    #[test]
    fn sinc_origin_value_is_lambda() {
        let p = RadialProfile::sinc(2.5, 1.0, 0.0);
        let d = p.d_powers(0.0, 5).unwrap();
        assert!((d[0] - 2.5).abs() < 1e-15);
        // D sin(λr)/r at 0 = -λ³/3
        assert!((d[1] + 2.5f64.powi(3) / 3.0).abs() < 1e-13);
    }

    #[test]
    fn negative_lambda_flips_sine_part() {
        let a = RadialProfile::sinc(-1.5, 1.0, 0.3).d_powers(0.7, 5).unwrap();
        let b = RadialProfile::sinc(1.5, -1.0, 0.3).d_powers(0.7, 5).unwrap();
        for k in 0..6 {
            assert!((a[k] - b[k]).abs() < 1e-13 * a[k].abs().max(1.0));
        }
    }

    #[test]
    fn cosine_sinc_excluded_near_origin() {
        let p = RadialProfile::sinc(1.0, 0.0, 1.0);
        assert!(matches!(p.d_powers(1e-4, 1), Err(Error::OutOfRange { .. })));
        assert!(p.d_powers(1e-2, 5).is_ok());
    }

    #[test]
    fn bump_support() {
        let p = RadialProfile::bump(1.0, 1.0);
        assert_eq!(p.d_powers(1.0, 5).unwrap(), [0.0; 6]);
        assert_eq!(p.d_powers(1.5, 5).unwrap(), [0.0; 6]);
        assert_eq!(p.d_powers(0.0, 5).unwrap(), [0.0; 6]);
        let v = p.value(0.5).unwrap();
        assert!((v - (-4.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn tabulated_order_limit() {
        let r: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let v = r.iter().map(|x| (-x * x).exp()).collect();
        let t = RadialProfile::Tabulated(TabulatedProfile::new(r, v).unwrap());
        assert!(t.d_powers(1.0, 3).is_ok());
        assert!(matches!(
            t.d_powers(1.0, 4),
            Err(Error::UnsupportedOrder { requested: 4, available: 3, .. })
        ));
        let d = t.d_powers(1.0, 2).unwrap();
        assert!((d[0] - (-1.0f64).exp()).abs() < 1e-5);
        assert!((d[1] + 2.0 * (-1.0f64).exp()).abs() < 1e-3);
    }

    #[test]
    fn descriptor_json_round_trip() {
        let p = RadialProfile::sinc(2.0, 1.0, 0.0);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"family":"sinc_pair","params":{"lambda":2.0,"alpha":1.0,"beta":0.0}}"#);
        let q: RadialProfile = serde_json::from_str(
            r#"{"family":"tabulated","params":{"r":[0,1,2,3],"values":[1,0.5,0.2,0.1]}}"#,
        )
        .unwrap();
        assert_eq!(q.family_name(), "tabulated");
        let b: RadialProfile =
            serde_json::from_str(r#"{"family":"compact_bump","params":{"amplitude":1,"ra":2}}"#).unwrap();
        assert_eq!(b, RadialProfile::bump(1.0, 2.0));
    }
}
