//! Truncated Taylor series in a local offset `h`, enough to apply
//! `D = (1/r) d/dr` five times to profiles without closed forms.

use std::ops::{Add, Mul, Neg, Sub};

pub(crate) const ORDER: usize = 5;
const LEN: usize = ORDER + 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Jet(pub [f64; LEN]);

impl Jet {
    pub fn constant(c: f64) -> Self {
        let mut a = [0.0; LEN];
        a[0] = c;
        Jet(a)
    }

    /// The independent variable `r + h` expanded about `r`.
    pub fn variable(r: f64) -> Self {
        let mut a = [0.0; LEN];
        a[0] = r;
        a[1] = 1.0;
        Jet(a)
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    pub fn scale(self, s: f64) -> Self {
        Jet(self.0.map(|v| v * s))
    }

    pub fn recip(self) -> Self {
        let a = self.0;
        let mut b = [0.0; LEN];
        b[0] = 1.0 / a[0];
        for k in 1..LEN {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += a[i] * b[k - i];
            }
            b[k] = -acc * b[0];
        }
        Jet(b)
    }

    pub fn exp(self) -> Self {
        let a = self.0;
        let mut e = [0.0; LEN];
        e[0] = a[0].exp();
        for k in 1..LEN {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += i as f64 * a[i] * e[k - i];
            }
            e[k] = acc / k as f64;
        }
        Jet(e)
    }

    /// d/dh; the top coefficient is lost.
    pub fn deriv(self) -> Self {
        let mut d = [0.0; LEN];
        for i in 0..ORDER {
            d[i] = (i + 1) as f64 * self.0[i + 1];
        }
        Jet(d)
    }

    /// Applies `(1/r) d/dr` given the jet of `1/(r+h)`.
    pub fn d_over_r(self, inv_r: &Jet) -> Self {
        self.deriv() * *inv_r
    }

    /// `[f, Df, ..., D^ORDER f]` at the expansion point.
    pub fn d_powers(self, r: f64) -> [f64; LEN] {
        let inv = Jet::variable(r).recip();
        let mut out = [0.0; LEN];
        let mut cur = self;
        for slot in out.iter_mut() {
            *slot = cur.value();
            cur = cur.d_over_r(&inv);
        }
        out
    }

    /// Jet of `α sin(j(r+h)) + β cos(j(r+h))`.
    pub fn trig(r: f64, j: f64, alpha: f64, beta: f64) -> Self {
        let (s, c) = (j * r).sin_cos();
        let mut a = [0.0; LEN];
        let mut fact = 1.0;
        let mut jp = 1.0;
        for (i, slot) in a.iter_mut().enumerate() {
            if i > 0 {
                fact *= i as f64;
                jp *= j;
            }
            // i-th derivative cycles through sin, cos, -sin, -cos
            let (ds, dc) = match i % 4 {
                0 => (s, c),
                1 => (c, -s),
                2 => (-s, -c),
                _ => (-c, s),
            };
            *slot = jp * (alpha * ds + beta * dc) / fact;
        }
        Jet(a)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(o.0) {
            *x += y;
        }
        Jet(a)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet(self.0.map(|v| -v))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [0.0; LEN];
        for i in 0..LEN {
            for j in 0..LEN - i {
                c[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_powers_of_gaussian_match_closed_form() {
        let r = 0.8;
        let x = Jet::variable(r);
        let g = (-(x * x)).exp();
        let d = g.d_powers(r);
        let e = (-r * r).exp();
        for (k, v) in d.iter().enumerate() {
            let expect = (-2.0f64).powi(k as i32) * e;
            assert!((v - expect).abs() < 1e-12 * expect.abs().max(1.0), "k={k}");
        }
    }

    #[test]
    fn recip_times_self_is_one() {
        let x = Jet::variable(1.7) * Jet::variable(1.7) + Jet::constant(0.3);
        let p = x * x.recip();
        assert!((p.0[0] - 1.0).abs() < 1e-15);
        for v in &p.0[1..] {
            assert!(v.abs() < 1e-14);
        }
    }
}
