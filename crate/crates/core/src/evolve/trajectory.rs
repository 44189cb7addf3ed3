//! Gridded evolution output: snapshots of a radial field and its time
//! derivative, with cubic-Hermite evaluation between snapshots.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::evolve::GridSpec;
use crate::interp::{hermite, hermite_d1, hermite_d2, lagrange4, lagrange4_d1};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Wave,
    KleinGordon,
}

/// Snapshots of `u(t_i, r_j)` and `dt u(t_i, r_j)`, `r_j = j * dr`.
/// Evolution runs on `w = r u`; stored samples are the regular field `u`
/// with `u(t, 0)` recovered by the L'Hopital stencil.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: GridSpec,
    pub kind: FieldKind,
    /// strictly increasing snapshot times
    pub times: Vec<f64>,
    /// row-major `[snapshot][radial index]`
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
    /// field is identically zero for `t >= zero_above` (backward runs)
    pub zero_above: Option<f64>,
}

impl Trajectory {
    pub fn n_points(&self) -> usize {
        self.grid.n_r + 1
    }

    pub fn t_min(&self) -> f64 {
        self.times[0]
    }

    pub fn t_max(&self) -> f64 {
        self.zero_above
            .map(|z| z.max(*self.times.last().unwrap()))
            .unwrap_or(*self.times.last().unwrap())
    }

    pub fn covers(&self, t: f64, r: f64) -> bool {
        t >= self.t_min() - 1e-9
            && t <= self.t_max() + 1e-9
            && r >= 0.0
            && r <= self.grid.r_max + 1e-9
    }

    fn row(&self, i: usize) -> (&[f64], &[f64]) {
        let n = self.n_points();
        (&self.u[i * n..(i + 1) * n], &self.ut[i * n..(i + 1) * n])
    }

    /// Index of the snapshot interval containing `t`.
    fn bracket(&self, t: f64) -> Result<usize> {
        let times = &self.times;
        if t < times[0] - 1e-9 || t > *times.last().unwrap() + 1e-9 {
            return Err(Error::range(format!(
                "t = {t} outside trajectory coverage [{}, {}]",
                times[0],
                times.last().unwrap()
            )));
        }
        let i = match times.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        Ok(i.min(times.len() - 2))
    }

    /// Field value at an arbitrary interior point (Hermite in t, local
    /// cubic in r).
    pub fn eval(&self, t: f64, r: f64) -> f64 {
        self.eval_checked(t, r).unwrap_or(0.0)
    }

    pub fn eval_checked(&self, t: f64, r: f64) -> Result<f64> {
        if let Some(z) = self.zero_above {
            if t >= z {
                return Ok(0.0);
            }
        }
        let i = self.bracket(t)?;
        let (u0, ut0) = self.row(i);
        let (u1, ut1) = self.row(i + 1);
        let dr = self.grid.dr();
        let f0 = lagrange4(0.0, dr, u0, r);
        let f1 = lagrange4(0.0, dr, u1, r);
        let d0 = lagrange4(0.0, dr, ut0, r);
        let d1 = lagrange4(0.0, dr, ut1, r);
        Ok(hermite(self.times[i], self.times[i + 1], f0, f1, d0, d1, t))
    }

    /// Time derivative at an arbitrary point.
    pub fn eval_dt(&self, t: f64, r: f64) -> f64 {
        if let Some(z) = self.zero_above {
            if t >= z {
                return 0.0;
            }
        }
        let Ok(i) = self.bracket(t) else { return 0.0 };
        let (u0, ut0) = self.row(i);
        let (u1, ut1) = self.row(i + 1);
        let dr = self.grid.dr();
        let f0 = lagrange4(0.0, dr, u0, r);
        let f1 = lagrange4(0.0, dr, u1, r);
        let d0 = lagrange4(0.0, dr, ut0, r);
        let d1 = lagrange4(0.0, dr, ut1, r);
        hermite_d1(self.times[i], self.times[i + 1], f0, f1, d0, d1, t)
    }

    /// Radial derivative at an arbitrary point.
    pub fn eval_dr(&self, t: f64, r: f64) -> f64 {
        if let Some(z) = self.zero_above {
            if t >= z {
                return 0.0;
            }
        }
        let Ok(i) = self.bracket(t) else { return 0.0 };
        let (u0, ut0) = self.row(i);
        let (u1, ut1) = self.row(i + 1);
        let dr = self.grid.dr();
        let f0 = lagrange4_d1(0.0, dr, u0, r);
        let f1 = lagrange4_d1(0.0, dr, u1, r);
        let d0 = lagrange4_d1(0.0, dr, ut0, r);
        let d1 = lagrange4_d1(0.0, dr, ut1, r);
        hermite(self.times[i], self.times[i + 1], f0, f1, d0, d1, t)
    }

    /// Second time derivative (from the Hermite cubic; O(h^2) accurate).
    pub fn eval_dtt(&self, t: f64, r: f64) -> f64 {
        if let Some(z) = self.zero_above {
            if t >= z {
                return 0.0;
            }
        }
        let Ok(i) = self.bracket(t) else { return 0.0 };
        let (u0, ut0) = self.row(i);
        let (u1, ut1) = self.row(i + 1);
        let dr = self.grid.dr();
        let f0 = lagrange4(0.0, dr, u0, r);
        let f1 = lagrange4(0.0, dr, u1, r);
        let d0 = lagrange4(0.0, dr, ut0, r);
        let d1 = lagrange4(0.0, dr, ut1, r);
        hermite_d2(self.times[i], self.times[i + 1], f0, f1, d0, d1, t)
    }

    /// Mixed derivative d/dr d/dt.
    pub fn eval_dtr(&self, t: f64, r: f64) -> f64 {
        if let Some(z) = self.zero_above {
            if t >= z {
                return 0.0;
            }
        }
        let Ok(i) = self.bracket(t) else { return 0.0 };
        let (u0, ut0) = self.row(i);
        let (u1, ut1) = self.row(i + 1);
        let dr = self.grid.dr();
        let f0 = lagrange4_d1(0.0, dr, u0, r);
        let f1 = lagrange4_d1(0.0, dr, u1, r);
        let d0 = lagrange4_d1(0.0, dr, ut0, r);
        let d1 = lagrange4_d1(0.0, dr, ut1, r);
        hermite_d1(self.times[i], self.times[i + 1], f0, f1, d0, d1, t)
    }

    /// Second radial derivative via a 5-point stencil on interpolated values.
    pub fn eval_drr(&self, t: f64, r: f64) -> f64 {
        let h = self.grid.dr();
        let rm = (r - h).max(0.0);
        let rp = r + h;
        (self.eval(t, rm) - 2.0 * self.eval(t, r) + self.eval(t, rp)) / (h * h)
    }

    /// Max |u| over all stored samples.
    pub fn sup_abs(&self) -> f64 {
        self.u.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// Writes the snapshot dump: header `t,r,value,dt_value`, row-major by
    /// snapshot. `stride` keeps every `stride`-th snapshot (1 = all).
    pub fn dump_csv(&self, path: &Path, stride: usize) -> Result<()> {
        let stride = stride.max(1);
        let file = std::fs::File::create(path)?;
        let mut out = std::io::BufWriter::new(file);
        writeln!(out, "t,r,value,dt_value")?;
        let n = self.n_points();
        let dr = self.grid.dr();
        for (i, &t) in self.times.iter().enumerate() {
            if i % stride != 0 && i + 1 != self.times.len() {
                continue;
            }
            let (u, ut) = self.row(i);
            for j in 0..n {
                writeln!(
                    out,
                    "{:.12e},{:.12e},{:.12e},{:.12e}",
                    t,
                    j as f64 * dr,
                    u[j],
                    ut[j]
                )?;
            }
        }
        Ok(())
    }

    /// Builds a trajectory by sampling closed forms for the field and its
    /// time derivative on the grid of `spec` with `n_snaps` snapshots.
    pub fn from_closed_form(
        grid: GridSpec,
        kind: FieldKind,
        n_snaps: usize,
        f: impl Fn(f64, f64) -> f64 + Sync,
        ft: impl Fn(f64, f64) -> f64 + Sync,
    ) -> Trajectory {
        use rayon::prelude::*;
        let n = grid.n_r + 1;
        let n_snaps = n_snaps.max(2);
        let dr = grid.dr();
        let times: Vec<f64> = (0..n_snaps)
            .map(|i| grid.t0 + (grid.t_end - grid.t0) * i as f64 / (n_snaps - 1) as f64)
            .collect();
        let rows: Vec<(Vec<f64>, Vec<f64>)> = times
            .par_iter()
            .map(|&t| {
                let mut u = vec![0.0; n];
                let mut ut = vec![0.0; n];
                for j in 0..n {
                    let r = j as f64 * dr;
                    u[j] = f(t, r);
                    ut[j] = ft(t, r);
                }
                (u, ut)
            })
            .collect();
        let mut u = Vec::with_capacity(n * n_snaps);
        let mut ut = Vec::with_capacity(n * n_snaps);
        for (ru, rut) in rows {
            u.extend_from_slice(&ru);
            ut.extend_from_slice(&rut);
        }
        Trajectory {
            grid,
            kind,
            times,
            u,
            ut,
            zero_above: None,
        }
    }
}
