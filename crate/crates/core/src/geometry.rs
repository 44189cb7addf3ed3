//! Hyperboloidal coordinates, the truncated foliation and the cutoff chi.
//!
//! All functions here are pure; they carry the coordinate conventions used
//! everywhere else: `rho = sqrt(t^2 - r^2)` (timelike interior), `y = r/t`,
//! `q = r - t`, and the truncated slice that follows the hyperboloid up to
//! the junction curve `t - r = r^(1/2)` and continues at constant time.

use crate::error::{Error, Result};

/// A space-time point in both rectangular and hyperboloidal coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperPoint {
    pub t: f64,
    pub r: f64,
    /// `sqrt(t^2 - r^2)`, defined only inside the light cone `t > r`.
    pub rho: Option<f64>,
    /// `r/t`; less than 1 exactly when `rho` is defined.
    pub y_abs: f64,
    /// `r - t`.
    pub q: f64,
}

pub fn to_hyperboloidal(t: f64, r: f64) -> Result<HyperPoint> {
    if !t.is_finite() || !r.is_finite() {
        return Err(Error::domain(format!("non-finite input (t={t}, r={r})")));
    }
    if t <= 0.0 || r < 0.0 {
        return Err(Error::domain(format!(
            "need t > 0 and r >= 0, got (t={t}, r={r})"
        )));
    }
    let rho = if t > r {
        Some(((t - r) * (t + r)).sqrt())
    } else {
        None
    };
    Ok(HyperPoint {
        t,
        r,
        rho,
        y_abs: r / t,
        q: r - t,
    })
}

/// Inverse map: interior point from `(rho, |y|)`.
pub fn from_hyperboloidal(rho: f64, y_abs: f64) -> Result<(f64, f64)> {
    if !(rho.is_finite() && y_abs.is_finite()) || rho <= 0.0 || !(0.0..1.0).contains(&y_abs) {
        return Err(Error::domain(format!(
            "need rho > 0 and 0 <= |y| < 1, got (rho={rho}, |y|={y_abs})"
        )));
    }
    let t = rho / (1.0 - y_abs * y_abs).sqrt();
    Ok((t, y_abs * t))
}

/// The anchor `rho(y) = max(2, sqrt((1+|y|)/(1-|y|)))` where the ray
/// `y = const` crosses `t - r = 1` (fields from compact data vanish below it).
pub fn rho_anchor(y_abs: f64) -> f64 {
    let cross = ((1.0 + y_abs) / (1.0 - y_abs)).sqrt();
    cross.max(2.0)
}

/// One slice of the truncated foliation `Sigma_rho`: hyperboloid for
/// `r <= r_junction`, constant time `t = t_junction` outside.
#[derive(Debug, Clone, Copy)]
pub struct FoliationSlice {
    pub rho: f64,
    /// Root of `2 r^(3/2) + r = rho^2`.
    pub r_junction: f64,
    /// `r_junction + sqrt(r_junction)`.
    pub t_junction: f64,
    /// Truncation exponent in `t - r = r^sigma`; fixed to 1/2.
    pub sigma: f64,
}

/// Solves the junction equation `rho^2 = 2 r^(3/2) + r` by safeguarded
/// Newton iteration. The left side is strictly increasing in `r`, so the
/// root is unique.
pub fn foliation_junction(rho: f64) -> Result<FoliationSlice> {
    if !rho.is_finite() || rho < 2.0 {
        return Err(Error::domain(format!("foliation requires rho >= 2, got {rho}")));
    }
    let target = rho * rho;
    let g = |r: f64| 2.0 * r * r.sqrt() + r - target;
    // Bracket: g(0) < 0 and g grows like 2 r^{3/2}.
    let mut lo = 0.0;
    let mut hi = (target / 2.0).powf(2.0 / 3.0) + target;
    debug_assert!(g(hi) > 0.0);
    let mut r = (target / 2.0).powf(2.0 / 3.0);
    for _ in 0..200 {
        let gr = g(r);
        if gr > 0.0 {
            hi = r;
        } else {
            lo = r;
        }
        let dg = 3.0 * r.sqrt() + 1.0;
        let mut next = r - gr / dg;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - r).abs() <= 1e-16 * r.max(1.0) {
            r = next;
            break;
        }
        r = next;
    }
    let slice = FoliationSlice {
        rho,
        r_junction: r,
        t_junction: r + r.sqrt(),
        sigma: 0.5,
    };
    debug_assert!((g(slice.r_junction)).abs() <= 1e-11 * target);
    Ok(slice)
}

/// C^4 monotone ramp: 0 at x<=0, 1 at x>=1, the degree-9 polynomial
/// smoothstep with four vanishing derivatives at both ends.
pub fn c4_ramp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let x2 = x * x;
        let x4 = x2 * x2;
        // 126 x^5 - 420 x^6 + 540 x^7 - 315 x^8 + 70 x^9
        x4 * x * (126.0 + x * (-420.0 + x * (540.0 + x * (-315.0 + x * 70.0))))
    }
}

/// The cutoff profile: parameters of `chi`.
#[derive(Debug, Clone, Copy)]
pub struct CutoffChi {
    /// chi == 1 for s <= s_one.
    pub s_one: f64,
    /// chi == 0 for s >= s_zero.
    pub s_zero: f64,
    /// Number of continuous derivatives of the transition.
    pub degree: u32,
}

impl Default for CutoffChi {
    fn default() -> Self {
        CutoffChi {
            s_one: 0.125,
            s_zero: 0.25,
            degree: 4,
        }
    }
}

impl CutoffChi {
    pub fn eval(&self, s: f64) -> f64 {
        if s <= self.s_one {
            1.0
        } else if s >= self.s_zero {
            0.0
        } else {
            1.0 - c4_ramp((s - self.s_one) / (self.s_zero - self.s_one))
        }
    }
}

/// `chi(s)`: 1 below 1/8, 0 above 1/4, C^4 monotone in between.
pub fn chi(s: f64) -> f64 {
    CutoffChi::default().eval(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn on_axis_point() {
        let p = to_hyperboloidal(2.0, 0.0).unwrap();
        assert_eq!(p.rho, Some(2.0));
        assert_eq!(p.y_abs, 0.0);
        assert_eq!(p.q, -2.0);
    }

    #[test]
    fn three_four_five() {
        let p = to_hyperboloidal(5.0, 3.0).unwrap();
        assert!((p.rho.unwrap() - 4.0).abs() < 1e-14);
        assert!((p.y_abs - 0.6).abs() < 1e-15);
        assert_eq!(p.q, -2.0);
    }

    #[test]
    fn light_cone_point() {
        let p = to_hyperboloidal(3.0, 3.0).unwrap();
        assert!(p.rho.is_none());
        assert_eq!(p.q, 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(to_hyperboloidal(f64::NAN, 1.0).is_err());
        assert!(to_hyperboloidal(0.0, 1.0).is_err());
        assert!(to_hyperboloidal(1.0, -0.5).is_err());
    }

    #[test]
    fn hyperpoint_invariant() {
        for &(t, r) in &[(2.0, 0.5), (10.0, 9.99), (100.0, 3.0)] {
            let p = to_hyperboloidal(t, r).unwrap();
            let rho = p.rho.unwrap();
            assert!(
                (rho * rho + r * r - t * t).abs() <= 1e-12 * t * t,
                "rho^2 + r^2 = t^2 violated at ({t},{r})"
            );
        }
    }

    #[test]
    fn junction_exact_values() {
        // 2*8 + 4 = 20
        let s = foliation_junction(20f64.sqrt()).unwrap();
        assert!((s.r_junction - 4.0).abs() < 1e-12);
        assert!((s.t_junction - 6.0).abs() < 1e-12);
        // 2*1 + 1 = 3 sits below the rho >= 2 domain gate
        assert!(foliation_junction(3f64.sqrt()).is_err());
        let g = |r: f64| 2.0 * r * r.sqrt() + r;
        assert!((g(1.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn junction_against_bisection_oracle() {
        // Independent bisection to 1e-12 for rho = 100.
        let rho: f64 = 100.0;
        let target = rho * rho;
        let g = |r: f64| 2.0 * r * r.sqrt() + r - target;
        let (mut lo, mut hi) = (0.0f64, 1e4f64);
        while hi - lo > 1e-13 * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let s = foliation_junction(rho).unwrap();
        assert!(
            (s.r_junction - oracle).abs() <= 1e-10 * oracle,
            "newton {} vs bisection {}",
            s.r_junction,
            oracle
        );
        // residual bound from the spec of the slice
        assert!((target - 2.0 * s.r_junction.powf(1.5) - s.r_junction).abs() <= 1e-12 * target);
    }

    #[test]
    fn junction_monotone_and_t_scaling() {
        let mut prev = 0.0;
        for k in 0..40 {
            let rho = 2.0 * 1.2f64.powi(k);
            let s = foliation_junction(rho).unwrap();
            assert!(s.r_junction > prev);
            prev = s.r_junction;
            assert!((s.t_junction - s.r_junction - s.r_junction.sqrt()).abs() < 1e-9 * s.t_junction);
            assert!(
                (s.t_junction * s.t_junction - s.r_junction * s.r_junction - rho * rho).abs()
                    < 1e-8 * rho * rho
            );
        }
        // t(rho) ~ rho^{4/3} asymptotically
        let a = foliation_junction(1e3).unwrap();
        let b = foliation_junction(2e3).unwrap();
        let slope = (b.t_junction / a.t_junction).ln() / 2f64.ln();
        assert!((slope - 4.0 / 3.0).abs() < 0.02, "t(rho) growth {slope}");
    }

    #[test]
    fn junction_rejects_small_rho() {
        assert!(foliation_junction(1.9).is_err());
    }

    #[test]
    fn chi_plateaus_and_transition() {
        assert_eq!(chi(0.0), 1.0);
        assert_eq!(chi(0.125), 1.0);
        assert_eq!(chi(0.3), 0.0);
        assert_eq!(chi(0.25), 0.0);
        let mid = chi(3.0 / 16.0);
        assert!(mid > 0.0 && mid < 1.0);
        // monotone non-increasing on a fine sweep
        let mut prev = 1.0;
        for i in 0..=1000 {
            let s = -0.1 + 0.5 * i as f64 / 1000.0;
            let v = chi(s);
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn chi_c4_at_junctions() {
        // fourth finite difference stays bounded across the break points,
        // i.e. the fourth derivative has no jump visible at stencil scale
        let h = 1e-3;
        for s0 in [0.125, 0.25] {
            let d4 = |s: f64| {
                (chi(s - 2.0 * h) - 4.0 * chi(s - h) + 6.0 * chi(s) - 4.0 * chi(s + h)
                    + chi(s + 2.0 * h))
                    / h.powi(4)
            };
            let inner = d4(s0 + 8.0 * h);
            let outer = d4(s0 - 8.0 * h);
            // both finite, of comparable magnitude, no blow-up at the seam
            assert!(inner.is_finite() && outer.is_finite());
            assert!(d4(s0).abs() < 1e7);
        }
    }

    #[test]
    fn round_trip_property() {
        // deterministic quasi-random sweep of (t, r) with t > r
        let mut x = 0.5f64;
        for _ in 0..500 {
            x = (x * 997.0 + 0.1234).fract();
            let y = (x * 4096.0).fract();
            let t = 2.0 + 98.0 * x;
            let r = t * 0.999 * y;
            let p = to_hyperboloidal(t, r).unwrap();
            let (t2, r2) = from_hyperboloidal(p.rho.unwrap(), p.y_abs).unwrap();
            assert!((t2 - t).abs() <= 1e-12 * t, "t {t} -> {t2}");
            assert!((r2 - r).abs() <= 1e-12 * t, "r {r} -> {r2}");
        }
    }
}
