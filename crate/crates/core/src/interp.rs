//! Interpolation helpers: local cubic Lagrange on uniform grids, cubic
//! Hermite in time (snapshots carry exact time derivatives), and a natural
//! cubic spline for sampled radial profiles that later get differentiated.

/// Value of the local 4-point Lagrange interpolant on a uniform grid.
/// `x0` is the coordinate of `values[0]`, `dx` the spacing.
pub fn lagrange4(x0: f64, dx: f64, values: &[f64], x: f64) -> f64 {
    debug_assert!(values.len() >= 2);
    if values.len() < 4 {
        // linear fallback for very short grids
        let s = ((x - x0) / dx).clamp(0.0, (values.len() - 1) as f64);
        let j = (s.floor() as usize).min(values.len() - 2);
        let f = s - j as f64;
        return values[j] * (1.0 - f) + values[j + 1] * f;
    }
    let n = values.len();
    let s = (x - x0) / dx;
    let j = (s.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let u = s - j as f64; // in [1,2] for interior points
    let (f0, f1, f2, f3) = (values[j], values[j + 1], values[j + 2], values[j + 3]);
    let c0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    let c1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    let c2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    let c3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    f0 * c0 + f1 * c1 + f2 * c2 + f3 * c3
}

/// Derivative of the same local cubic.
pub fn lagrange4_d1(x0: f64, dx: f64, values: &[f64], x: f64) -> f64 {
    let n = values.len();
    if n < 4 {
        let s = ((x - x0) / dx).clamp(0.0, (n - 1) as f64);
        let j = (s.floor() as usize).min(n - 2);
        return (values[j + 1] - values[j]) / dx;
    }
    let s = (x - x0) / dx;
    let j = (s.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let u = s - j as f64;
    let (f0, f1, f2, f3) = (values[j], values[j + 1], values[j + 2], values[j + 3]);
    let d0 = -(3.0 * u * u - 12.0 * u + 11.0) / 6.0;
    let d1 = (3.0 * u * u - 10.0 * u + 6.0) / 2.0;
    let d2 = -(3.0 * u * u - 8.0 * u + 3.0) / 2.0;
    let d3 = (3.0 * u * u - 6.0 * u + 2.0) / 6.0;
    (f0 * d0 + f1 * d1 + f2 * d2 + f3 * d3) / dx
}

/// Cubic Hermite on `[t0, t1]` with values and derivatives at both ends.
pub fn hermite(t0: f64, t1: f64, f0: f64, f1: f64, d0: f64, d1: f64, t: f64) -> f64 {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    f0 * (2.0 * s3 - 3.0 * s2 + 1.0)
        + d0 * h * (s3 - 2.0 * s2 + s)
        + f1 * (-2.0 * s3 + 3.0 * s2)
        + d1 * h * (s3 - s2)
}

/// d/dt of the Hermite cubic.
pub fn hermite_d1(t0: f64, t1: f64, f0: f64, f1: f64, d0: f64, d1: f64, t: f64) -> f64 {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let s2 = s * s;
    (f0 * (6.0 * s2 - 6.0 * s) + f1 * (6.0 * s - 6.0 * s2)) / h
        + d0 * (3.0 * s2 - 4.0 * s + 1.0)
        + d1 * (3.0 * s2 - 2.0 * s)
}

/// d2/dt2 of the Hermite cubic.
pub fn hermite_d2(t0: f64, t1: f64, f0: f64, f1: f64, d0: f64, d1: f64, t: f64) -> f64 {
    let h = t1 - t0;
    let s = (t - t0) / h;
    (f0 * (12.0 * s - 6.0) + f1 * (6.0 - 12.0 * s)) / (h * h)
        + (d0 * (6.0 * s - 4.0) + d1 * (6.0 * s - 2.0)) / h
}

/// Natural cubic spline through `(xs, ys)`; `xs` strictly increasing.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// second derivatives at the knots
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && ys.len() == n, "spline needs matching knots");
        let mut m = vec![0.0; n];
        if n > 2 {
            // tridiagonal system for natural boundary conditions
            let mut sub = vec![0.0; n];
            let mut diag = vec![0.0; n];
            let mut sup = vec![0.0; n];
            let mut rhs = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                sub[i] = h0 / 6.0;
                diag[i] = (h0 + h1) / 3.0;
                sup[i] = h1 / 6.0;
                rhs[i] = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
            }
            // Thomas algorithm on rows 1..n-1
            for i in 2..n - 1 {
                let w = sub[i] / diag[i - 1];
                diag[i] -= w * sup[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            if n >= 3 {
                m[n - 2] = rhs[n - 2] / diag[n - 2];
                for i in (1..n - 2).rev() {
                    m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
                }
            }
        }
        CubicSpline { xs, ys, m }
    }

    fn locate(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self
            .xs
            .binary_search_by(|v| v.partial_cmp(&x).unwrap())
        {
            Ok(i) => i.min(n - 2),
            Err(i) => i.clamp(1, n - 1) - 1,
        }
    }

    pub fn min_x(&self) -> f64 {
        self.xs[0]
    }
    pub fn max_x(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    /// Spline value; constant extrapolation by the end values.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= *self.xs.last().unwrap() {
            return *self.ys.last().unwrap();
        }
        let i = self.locate(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    pub fn eval_d1(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let x = x.clamp(self.xs[0], self.xs[n - 1]);
        let i = self.locate(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        (self.ys[i + 1] - self.ys[i]) / h
            + ((3.0 * b * b - 1.0) * self.m[i + 1] - (3.0 * a * a - 1.0) * self.m[i]) * h / 6.0
    }

    pub fn eval_d2(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let x = x.clamp(self.xs[0], self.xs[n - 1]);
        let i = self.locate(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.m[i] + b * self.m[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrange_reproduces_cubics() {
        let xs0 = 0.0;
        let dx = 0.25;
        let f = |x: f64| 1.0 + x * (2.0 + x * (-1.5 + 0.5 * x));
        let df = |x: f64| 2.0 + x * (-3.0 + 1.5 * x);
        let values: Vec<f64> = (0..20).map(|j| f(xs0 + dx * j as f64)).collect();
        for &x in &[0.13, 1.0, 2.31, 4.6] {
            assert!((lagrange4(xs0, dx, &values, x) - f(x)).abs() < 1e-12);
            assert!((lagrange4_d1(xs0, dx, &values, x) - df(x)).abs() < 1e-10);
        }
    }

    #[test]
    fn hermite_matches_endpoints_and_order() {
        let f = |t: f64| (1.3 * t).sin();
        let d = |t: f64| 1.3 * (1.3 * t).cos();
        let (t0, t1) = (0.4, 0.5);
        let mid = 0.46;
        let v = hermite(t0, t1, f(t0), f(t1), d(t0), d(t1), mid);
        assert!((v - f(mid)).abs() < 2e-6);
        let vd = hermite_d1(t0, t1, f(t0), f(t1), d(t0), d(t1), mid);
        assert!((vd - d(mid)).abs() < 1e-4);
    }

    #[test]
    fn spline_interpolates_smooth_function() {
        let xs: Vec<f64> = (0..200).map(|i| -3.0 + 6.0 * i as f64 / 199.0).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| (-x * x / 2.0f64).exp()).collect();
        let sp = CubicSpline::new(xs, ys);
        for &x in &[-2.3, -0.77, 0.0, 1.45, 2.9] {
            let exact = (-x * x / 2.0f64).exp();
            assert!((sp.eval(x) - exact).abs() < 1e-6, "at {x}");
            let d_exact = -x * exact;
            assert!((sp.eval_d1(x) - d_exact).abs() < 1e-4, "d1 at {x}");
        }
    }
}
