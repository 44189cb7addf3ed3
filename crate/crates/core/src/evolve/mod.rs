//! Second-order leapfrog evolution of radial wave and Klein-Gordon fields.
//!
//! The evolved variable is `w = r u`, which pins `w(t, 0) = 0` and removes
//! the coordinate singularity of the radial Laplacian; `u` is recovered as
//! `w/r` with the L'Hopital stencil at the origin. With the convention
//! `-Box u + m^2 u = S` (`Box = -dt^2 + Laplace`), the evolved equation is
//!
//! ```text
//!   dt^2 w = dr^2 w - l(l+1) w / r^2 - m^2 w + r S.
//! ```
//!
//! Time stepping is the explicit three-level leapfrog with all couplings
//! evaluated at the center level; the same kernel runs forward and backward
//! (negative step).

mod trajectory;

pub use trajectory::{FieldKind, Trajectory};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::chi;

/// Grid and scheme parameters for one evolution.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub r_max: f64,
    pub n_r: usize,
    pub t0: f64,
    pub t_end: f64,
    pub cfl: f64,
    pub mode_l: u32,
}

impl GridSpec {
    pub fn new(r_max: f64, n_r: usize, t_end: f64) -> Self {
        GridSpec {
            r_max,
            n_r,
            t0: 2.0,
            t_end,
            cfl: 0.5,
            mode_l: 0,
        }
    }

    pub fn dr(&self) -> f64 {
        self.r_max / self.n_r as f64
    }

    pub fn dt(&self) -> f64 {
        self.cfl * self.dr()
    }

    /// `r_max >= t_end - t0 + 1`: outer boundary causally disconnected from
    /// the light cone of data supported in `r <= 1`.
    pub fn causally_sized(&self) -> bool {
        self.r_max >= self.t_end - self.t0 + 1.0 - 1e-9
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_max.is_finite() && self.t0.is_finite() && self.t_end.is_finite()) {
            return Err(Error::config("non-finite grid parameter"));
        }
        if self.n_r < 8 || self.r_max <= 0.0 {
            return Err(Error::config(format!(
                "need n_r >= 8 and r_max > 0, got n_r={}, r_max={}",
                self.n_r, self.r_max
            )));
        }
        if self.t_end <= self.t0 {
            return Err(Error::config(format!(
                "need t_end > t0, got t0={}, t_end={}",
                self.t0, self.t_end
            )));
        }
        let l = self.mode_l as f64;
        let cfl_cap = 0.95 * 2.0 / (4.0 + l * (l + 1.0)).sqrt();
        if !(self.cfl > 0.0 && self.cfl <= 1.0) || self.cfl > cfl_cap {
            return Err(Error::config(format!(
                "CFL violation: cfl={} exceeds stable bound {:.3} for mode l={}",
                self.cfl, cfl_cap, self.mode_l
            )));
        }
        Ok(())
    }
}

/// Compactly supported C^4 data at `t = t0`, all components vanishing for
/// `r >= 1`, with sup norms scaling linearly in the amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub amplitude: f64,
    pub seed: u64,
    pub u0: Vec<f64>,
    pub ut0: Vec<f64>,
    pub phi0: Vec<f64>,
    pub phit0: Vec<f64>,
}

impl InitialData {
    /// Zero data on the grid of `spec`.
    pub fn zero(spec: &GridSpec) -> Self {
        let n = spec.n_r + 1;
        InitialData {
            amplitude: 0.0,
            seed: 0,
            u0: vec![0.0; n],
            ut0: vec![0.0; n],
            phi0: vec![0.0; n],
            phit0: vec![0.0; n],
        }
    }

    /// Arbitrary sampled components (manufactured-solution harness).
    pub fn from_components(
        amplitude: f64,
        u0: Vec<f64>,
        ut0: Vec<f64>,
        phi0: Vec<f64>,
        phit0: Vec<f64>,
    ) -> Self {
        InitialData {
            amplitude,
            seed: 0,
            u0,
            ut0,
            phi0,
            phit0,
        }
    }
}

/// Reproducible bump data: sums of `(1 - r^2)_+^(5+k)` with seeded
/// coefficients, supported in `r <= 1`, C^4 at the support edge.
pub fn make_initial_data(spec: &GridSpec, amplitude: f64, seed: u64) -> Result<InitialData> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(Error::domain(format!("amplitude must be >= 0, got {amplitude}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = [[0.0f64; 3]; 4];
    for comp in coeffs.iter_mut() {
        for c in comp.iter_mut() {
            *c = rng.gen_range(0.5..1.5);
        }
    }
    let profile = |c: &[f64; 3], r: f64| -> f64 {
        let s = 1.0 - r * r;
        if s <= 0.0 {
            return 0.0;
        }
        let s5 = s.powi(5);
        s5 * (c[0] + s * (c[1] + s * c[2]))
    };
    let n = spec.n_r + 1;
    let dr = spec.dr();
    let mut data = InitialData::zero(spec);
    data.amplitude = amplitude;
    data.seed = seed;
    for j in 0..n {
        let r = j as f64 * dr;
        data.u0[j] = amplitude * profile(&coeffs[0], r);
        data.ut0[j] = amplitude * profile(&coeffs[1], r);
        data.phi0[j] = amplitude * profile(&coeffs[2], r);
        data.phit0[j] = amplitude * profile(&coeffs[3], r);
    }
    Ok(data)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OuterBc {
    /// Quadratic interpolation along the outgoing characteristic
    /// (transparent for `(dt + dr) w = 0`).
    Outflow,
    /// `w(r_max) = 0`; exact under causal sizing.
    Zero,
}

/// Snapshot-count budget: bounded by the spec cap of 2000 and by memory.
fn snapshot_stride(n_steps: usize, n_points: usize) -> usize {
    let cap = (4_000_000 / n_points).clamp(300, 2000);
    (n_steps / cap).max(1)
}

struct Recorder {
    times: Vec<f64>,
    u: Vec<f64>,
    ut: Vec<f64>,
    n: usize,
    dr: f64,
    guard: f64,
}

impl Recorder {
    fn new(n: usize, dr: f64, capacity: usize) -> Self {
        Recorder {
            times: Vec::with_capacity(capacity),
            u: Vec::with_capacity(capacity * n),
            ut: Vec::with_capacity(capacity * n),
            n,
            dr,
            guard: 1.0 / dr,
        }
    }

    /// Converts `w`-levels to `u` samples and records them; errors on the
    /// scale-aware blow-up guard `|u| > 1/dr`.
    fn push(&mut self, t: f64, w: &[f64], wt: &[f64]) -> Result<()> {
        self.times.push(t);
        let base = self.u.len();
        self.u.resize(base + self.n, 0.0);
        self.ut.resize(base + self.n, 0.0);
        let u_row = &mut self.u[base..];
        u_row[0] = (4.0 * w[1] - w[2]) / (2.0 * self.dr);
        for j in 1..self.n {
            u_row[j] = w[j] / (j as f64 * self.dr);
        }
        let mut sup = 0.0f64;
        for &v in u_row.iter() {
            if !v.is_finite() {
                sup = f64::INFINITY;
                break;
            }
            sup = sup.max(v.abs());
        }
        if sup > self.guard {
            return Err(Error::Divergence { time: t });
        }
        let base = self.ut.len() - self.n;
        let ut_row = &mut self.ut[base..];
        ut_row[0] = (4.0 * wt[1] - wt[2]) / (2.0 * self.dr);
        for j in 1..self.n {
            ut_row[j] = wt[j] / (j as f64 * self.dr);
        }
        Ok(())
    }
}

/// One leapfrog update of `w`: returns the level `t + dt` given levels at
/// `t` and `t - dt`. `src` holds `r S` at the center level.
#[inline]
fn leap_step(
    w_prev: &[f64],
    w_cur: &[f64],
    w_next: &mut [f64],
    src: &[f64],
    dr: f64,
    dt: f64,
    mode_l: u32,
    mass_sq: f64,
    bc: OuterBc,
) {
    let n = w_cur.len();
    let inv_dr2 = 1.0 / (dr * dr);
    let dt2 = dt * dt;
    let ll1 = (mode_l * (mode_l + 1)) as f64;
    w_next[0] = 0.0;
    for j in 1..n - 1 {
        let lap = (w_cur[j - 1] - 2.0 * w_cur[j] + w_cur[j + 1]) * inv_dr2;
        let r = j as f64 * dr;
        let centrifugal = if ll1 > 0.0 { ll1 * w_cur[j] / (r * r) } else { 0.0 };
        w_next[j] =
            2.0 * w_cur[j] - w_prev[j] + dt2 * (lap - centrifugal - mass_sq * w_cur[j] + src[j]);
    }
    match bc {
        OuterBc::Zero => w_next[n - 1] = 0.0,
        OuterBc::Outflow => {
            // w(t+|dt|, r_max) = w(t, r_max - |dt|) for outgoing solutions
            let s = dt.abs() / dr;
            w_next[n - 1] = w_cur[n - 1] * (1.0 - s) * (2.0 - s) / 2.0
                + w_cur[n - 2] * s * (2.0 - s)
                - w_cur[n - 3] * s * (1.0 - s) / 2.0;
        }
    }
}

fn u_from_w(w: &[f64], dr: f64, j: usize) -> f64 {
    if j == 0 {
        (4.0 * w[1] - w[2]) / (2.0 * dr)
    } else {
        w[j] / (j as f64 * dr)
    }
}

/// Coupled semilinear system, forward from `t0`:
/// `-Box u = (dt phi)^2 + phi^2`, `-Box phi + phi = u phi`.
pub fn solve_forward(spec: &GridSpec, data: &InitialData) -> Result<(Trajectory, Trajectory)> {
    solve_forward_with_forcing(spec, data, None, None)
}

/// Same system with optional manufactured forcing added to each equation:
/// `-Box u = (dt phi)^2 + phi^2 + f_u`, `-Box phi + phi = u phi + f_phi`.
pub fn solve_forward_with_forcing(
    spec: &GridSpec,
    data: &InitialData,
    f_u: Option<&(dyn Fn(f64, f64) -> f64 + Sync)>,
    f_phi: Option<&(dyn Fn(f64, f64) -> f64 + Sync)>,
) -> Result<(Trajectory, Trajectory)> {
    spec.validate()?;
    if spec.mode_l != 0 {
        return Err(Error::config("nonlinear system is radial: mode_l must be 0"));
    }
    if !spec.causally_sized() {
        return Err(Error::config(format!(
            "causal sizing violated: r_max={} < t_end - t0 + 1 = {}",
            spec.r_max,
            spec.t_end - spec.t0 + 1.0
        )));
    }
    let n = spec.n_r + 1;
    let dr = spec.dr();
    let dt = spec.dt();
    let n_steps = ((spec.t_end - spec.t0) / dt - 1e-9).ceil() as usize;
    let stride = snapshot_stride(n_steps, n);

    // w-levels for both fields
    let to_w = |u: &[f64]| -> Vec<f64> {
        (0..n).map(|j| u[j] * (j as f64 * dr)).collect()
    };
    let mut wu_cur = to_w(&data.u0);
    let wut_cur = to_w(&data.ut0);
    let mut wp_cur = to_w(&data.phi0);
    let wpt_cur = to_w(&data.phit0);

    let mut rec_u = Recorder::new(n, dr, n_steps / stride + 2);
    let mut rec_p = Recorder::new(n, dr, n_steps / stride + 2);

    // sources at t0 (r * S)
    let mut src_p = vec![0.0; n];
    let mut src_u = vec![0.0; n];
    let fill_sources_initial = |src_p: &mut [f64], src_u: &mut [f64]| {
        for j in 0..n {
            let r = j as f64 * dr;
            let u = data.u0[j];
            let phi = data.phi0[j];
            let phit = data.phit0[j];
            let mut sp = u * phi;
            let mut su = phit * phit + phi * phi;
            if let Some(f) = f_phi {
                sp += f(spec.t0, r);
            }
            if let Some(f) = f_u {
                su += f(spec.t0, r);
            }
            src_p[j] = r * sp;
            src_u[j] = r * su;
        }
    };
    fill_sources_initial(&mut src_p, &mut src_u);

    // Taylor start to the first level
    let taylor = |w: &[f64], wt: &[f64], src: &[f64], mass_sq: f64| -> Vec<f64> {
        let mut out = vec![0.0; n];
        let inv_dr2 = 1.0 / (dr * dr);
        for j in 1..n - 1 {
            let lap = (w[j - 1] - 2.0 * w[j] + w[j + 1]) * inv_dr2;
            out[j] = w[j] + dt * wt[j] + 0.5 * dt * dt * (lap - mass_sq * w[j] + src[j]);
        }
        out[0] = 0.0;
        out[n - 1] = 0.0;
        out
    };

    let mut wp_prev = wp_cur.clone();
    let mut wu_prev = wu_cur.clone();
    let mut wp_next = taylor(&wp_cur, &wpt_cur, &src_p, 1.0);
    let mut wu_next = taylor(&wu_cur, &wut_cur, &src_u, 0.0);

    rec_p.push(spec.t0, &wp_cur, &wpt_cur)?;
    rec_u.push(spec.t0, &wu_cur, &wut_cur)?;

    std::mem::swap(&mut wp_prev, &mut wp_cur);
    std::mem::swap(&mut wp_cur, &mut wp_next);
    std::mem::swap(&mut wu_prev, &mut wu_cur);
    std::mem::swap(&mut wu_cur, &mut wu_next);

    let mut dtphi = vec![0.0; n];
    for step in 1..=n_steps {
        let t = spec.t0 + step as f64 * dt;
        // KG source at the center level
        for j in 0..n {
            let r = j as f64 * dr;
            let u = u_from_w(&wu_cur, dr, j);
            let phi = u_from_w(&wp_cur, dr, j);
            let mut sp = u * phi;
            if let Some(f) = f_phi {
                sp += f(t, r);
            }
            src_p[j] = r * sp;
        }
        leap_step(&wp_prev, &wp_cur, &mut wp_next, &src_p, dr, dt, 0, 1.0, OuterBc::Zero);
        // centered time derivative of phi at the center level
        for j in 0..n {
            dtphi[j] = (wp_next[j] - wp_prev[j]) / (2.0 * dt);
        }
        // wave source at the center level
        for j in 0..n {
            let r = j as f64 * dr;
            let phit = if j == 0 {
                (4.0 * dtphi[1] - dtphi[2]) / (2.0 * dr)
            } else {
                dtphi[j] / r
            };
            let phi = u_from_w(&wp_cur, dr, j);
            let mut su = phit * phit + phi * phi;
            if let Some(f) = f_u {
                su += f(t, r);
            }
            src_u[j] = r * su;
        }
        leap_step(&wu_prev, &wu_cur, &mut wu_next, &src_u, dr, dt, 0, 0.0, OuterBc::Outflow);

        if step % stride == 0 || step == n_steps {
            let wut: Vec<f64> = (0..n).map(|j| (wu_next[j] - wu_prev[j]) / (2.0 * dt)).collect();
            rec_p.push(t, &wp_cur, &dtphi)?;
            rec_u.push(t, &wu_cur, &wut)?;
        }

        std::mem::swap(&mut wp_prev, &mut wp_cur);
        std::mem::swap(&mut wp_cur, &mut wp_next);
        std::mem::swap(&mut wu_prev, &mut wu_cur);
        std::mem::swap(&mut wu_cur, &mut wu_next);
    }

    let traj_u = Trajectory {
        grid: *spec,
        kind: FieldKind::Wave,
        times: rec_u.times,
        u: rec_u.u,
        ut: rec_u.ut,
        zero_above: None,
    };
    let traj_p = Trajectory {
        grid: *spec,
        kind: FieldKind::KleinGordon,
        times: rec_p.times,
        u: rec_p.u,
        ut: rec_p.ut,
        zero_above: None,
    };
    Ok((traj_u, traj_p))
}

/// Linear wave solver core: `-Box u + m^2 u = S` for spherical-harmonic mode
/// `l`, marching from `t_from` to `t_to` (either direction) with given data.
pub fn solve_linear_wave(
    spec: &GridSpec,
    source: &(dyn Fn(f64, f64) -> f64 + Sync),
    mass_sq: f64,
    init_u: &[f64],
    init_ut: &[f64],
    t_from: f64,
    t_to: f64,
    bc_outflow: bool,
) -> Result<Trajectory> {
    spec.validate()?;
    let n = spec.n_r + 1;
    let dr = spec.dr();
    let dt_mag = spec.dt();
    let backward = t_to < t_from;
    let dt = if backward { -dt_mag } else { dt_mag };
    let n_steps = (((t_to - t_from) / dt) - 1e-9).ceil().max(1.0) as usize;
    let stride = snapshot_stride(n_steps, n);
    let bc = if bc_outflow { OuterBc::Outflow } else { OuterBc::Zero };

    let mut w_cur: Vec<f64> = (0..n).map(|j| init_u[j] * (j as f64 * dr)).collect();
    let wt_cur: Vec<f64> = (0..n).map(|j| init_ut[j] * (j as f64 * dr)).collect();

    let mut rec = Recorder::new(n, dr, n_steps / stride + 2);

    let mut src = vec![0.0; n];
    let fill_src = |src: &mut [f64], t: f64| {
        for (j, s) in src.iter_mut().enumerate() {
            let r = j as f64 * dr;
            *s = r * source(t, r);
        }
    };
    fill_src(&mut src, t_from);

    // Taylor start
    let mut w_next = vec![0.0; n];
    {
        let inv_dr2 = 1.0 / (dr * dr);
        let ll1 = (spec.mode_l * (spec.mode_l + 1)) as f64;
        for j in 1..n - 1 {
            let lap = (w_cur[j - 1] - 2.0 * w_cur[j] + w_cur[j + 1]) * inv_dr2;
            let r = j as f64 * dr;
            let cf = if ll1 > 0.0 { ll1 * w_cur[j] / (r * r) } else { 0.0 };
            w_next[j] = w_cur[j]
                + dt * wt_cur[j]
                + 0.5 * dt * dt * (lap - cf - mass_sq * w_cur[j] + src[j]);
        }
        w_next[0] = 0.0;
        match bc {
            OuterBc::Zero => w_next[n - 1] = 0.0,
            OuterBc::Outflow => {
                let s = dt.abs() / dr;
                w_next[n - 1] = w_cur[n - 1] * (1.0 - s) * (2.0 - s) / 2.0
                    + w_cur[n - 2] * s * (2.0 - s)
                    - w_cur[n - 3] * s * (1.0 - s) / 2.0;
            }
        }
    }
    rec.push(t_from, &w_cur, &wt_cur)?;

    let mut w_prev = w_cur.clone();
    std::mem::swap(&mut w_prev, &mut w_cur);
    std::mem::swap(&mut w_cur, &mut w_next);

    let mut wt = vec![0.0; n];
    for step in 1..=n_steps {
        let t = t_from + step as f64 * dt;
        fill_src(&mut src, t);
        leap_step(
            &w_prev,
            &w_cur,
            &mut w_next,
            &src,
            dr,
            dt,
            spec.mode_l,
            mass_sq,
            bc,
        );
        if step % stride == 0 || step == n_steps {
            for j in 0..n {
                wt[j] = (w_next[j] - w_prev[j]) / (2.0 * dt);
            }
            rec.push(t, &w_cur, &wt)?;
        }
        std::mem::swap(&mut w_prev, &mut w_cur);
        std::mem::swap(&mut w_cur, &mut w_next);
    }

    let mut times = rec.times;
    let mut u = rec.u;
    let mut ut = rec.ut;
    if backward {
        // store with strictly increasing times
        let rows = times.len();
        times.reverse();
        let mut u_rev = Vec::with_capacity(u.len());
        let mut ut_rev = Vec::with_capacity(ut.len());
        for i in (0..rows).rev() {
            u_rev.extend_from_slice(&u[i * n..(i + 1) * n]);
            ut_rev.extend_from_slice(&ut[i * n..(i + 1) * n]);
        }
        u = u_rev;
        ut = ut_rev;
    }
    Ok(Trajectory {
        grid: *spec,
        kind: if mass_sq == 0.0 {
            FieldKind::Wave
        } else {
            FieldKind::KleinGordon
        },
        times,
        u,
        ut,
        zero_above: None,
    })
}

/// Linear wave equation `-Box u = S` for mode `l`, vanishing data at `t0`.
pub fn solve_wave_source(
    spec: &GridSpec,
    source: &(dyn Fn(f64, f64) -> f64 + Sync),
    mode_l: u32,
) -> Result<Trajectory> {
    let mut spec = *spec;
    spec.mode_l = mode_l;
    let n = spec.n_r + 1;
    let zeros = vec![0.0; n];
    solve_linear_wave(
        &spec,
        source,
        0.0,
        &zeros,
        &zeros,
        spec.t0,
        spec.t_end,
        true,
    )
}

/// Coefficient fields of the backward remainder system. Implementations
/// provide the approximate solution evaluated anywhere on the grid.
pub trait RemainderCoeffs: Sync {
    fn phi0(&self, t: f64, r: f64) -> f64;
    fn dt_phi0(&self, t: f64, r: f64) -> f64;
    /// `u0 = u1 + u2 + u3 + psi01`
    fn u0(&self, t: f64, r: f64) -> f64;
    /// `u2 + u3 + psi01`
    fn u23_psi(&self, t: f64, r: f64) -> f64;
    fn box_psi01(&self, t: f64, r: f64) -> f64;
    fn r0(&self, t: f64, r: f64) -> f64;
}

/// Backward evolution of the cutoff remainder system from vanishing data
/// at `t = t_final`:
///
/// ```text
///   -Box v = chi(t/T) (2 (dt phi0)(dt w) + (dt w)^2 + 2 phi0 w + w^2 + Box psi01)
///   -Box w + w = chi(t/T) ((u2+u3+psi01) phi0 + u0 w + phi0 v + v w + R0)
/// ```
///
/// Both fields are identically zero while `chi(t/T) = 0` (t >= T/4); the
/// march short-circuits that segment, which is bit-identical to stepping
/// through it.
pub fn solve_backward_remainder(
    t_final: f64,
    coeffs: &dyn RemainderCoeffs,
    spec: &GridSpec,
) -> Result<(Trajectory, Trajectory)> {
    spec.validate()?;
    if t_final > spec.t_end + 1e-9 {
        return Err(Error::config(format!(
            "t_final = {t_final} exceeds grid t_end = {}",
            spec.t_end
        )));
    }
    if t_final <= spec.t0 {
        return Err(Error::config("t_final must exceed t0"));
    }
    let n = spec.n_r + 1;
    let dr = spec.dr();
    let dt = -spec.dt();
    let n_steps_total = ((t_final - spec.t0) / spec.dt() - 1e-9).ceil() as usize;

    // First level (marching down from t_final) where chi(t/T) > 0.
    let mut k_start = 0usize;
    while k_start < n_steps_total {
        let t = t_final + k_start as f64 * dt;
        if chi(t / t_final) > 0.0 {
            break;
        }
        k_start += 1;
    }
    let k_start = k_start.saturating_sub(1); // keep one zero level above
    let t_start = t_final + k_start as f64 * dt;
    // centers run from t_start down to t0 (inclusive when aligned)
    let n_centers = (((t_start - spec.t0) / spec.dt()) + 1e-9).floor() as usize + 1;
    let stride = snapshot_stride(n_centers, n);

    let mut wv_prev = vec![0.0; n];
    let mut wv_cur = vec![0.0; n];
    let mut wv_next = vec![0.0; n];
    let mut ww_prev = vec![0.0; n];
    let mut ww_cur = vec![0.0; n];
    let mut ww_next = vec![0.0; n];
    let mut src_w = vec![0.0; n];
    let mut src_v = vec![0.0; n];
    let mut dtw = vec![0.0; n];

    let mut rec_v = Recorder::new(n, dr, n_centers / stride + 2);
    let mut rec_w = Recorder::new(n, dr, n_centers / stride + 2);

    for step in 1..=n_centers {
        let t = t_start + (step - 1) as f64 * dt; // center level
        let cut = chi(t / t_final);
        // KG remainder source at center level
        if cut > 0.0 {
            for j in 0..n {
                let r = j as f64 * dr;
                let w = u_from_w(&ww_cur, dr, j);
                let v = u_from_w(&wv_cur, dr, j);
                let phi0 = coeffs.phi0(t, r);
                let s = (coeffs.u23_psi(t, r)) * phi0
                    + coeffs.u0(t, r) * w
                    + phi0 * v
                    + v * w
                    + coeffs.r0(t, r);
                src_w[j] = r * cut * s;
            }
        } else {
            src_w.iter_mut().for_each(|s| *s = 0.0);
        }
        leap_step(&ww_prev, &ww_cur, &mut ww_next, &src_w, dr, dt, 0, 1.0, OuterBc::Zero);
        for j in 0..n {
            dtw[j] = (ww_prev[j] - ww_next[j]) / (2.0 * dt.abs());
        }
        // dtw currently holds d/dt of w-variable (note sign handling below)
        if cut > 0.0 {
            for j in 0..n {
                let r = j as f64 * dr;
                // time derivative of the field w (not the w-variable)
                let w_t = if j == 0 {
                    (4.0 * dtw[1] - dtw[2]) / (2.0 * dr)
                } else {
                    dtw[j] / r
                };
                let w = u_from_w(&ww_cur, dr, j);
                let s = 2.0 * coeffs.dt_phi0(t, r) * w_t
                    + w_t * w_t
                    + 2.0 * coeffs.phi0(t, r) * w
                    + w * w
                    + coeffs.box_psi01(t, r);
                src_v[j] = r * cut * s;
            }
        } else {
            src_v.iter_mut().for_each(|s| *s = 0.0);
        }
        leap_step(&wv_prev, &wv_cur, &mut wv_next, &src_v, dr, dt, 0, 0.0, OuterBc::Outflow);

        if step == 1 || step % stride == 0 || step == n_centers {
            let wvt: Vec<f64> = (0..n)
                .map(|j| (wv_prev[j] - wv_next[j]) / (2.0 * dt.abs()))
                .collect();
            rec_w.push(t, &ww_cur, &dtw)?;
            rec_v.push(t, &wv_cur, &wvt)?;
        }

        std::mem::swap(&mut ww_prev, &mut ww_cur);
        std::mem::swap(&mut ww_cur, &mut ww_next);
        std::mem::swap(&mut wv_prev, &mut wv_cur);
        std::mem::swap(&mut wv_cur, &mut wv_next);
    }
    // reverse to increasing time
    let reorder = |rec: Recorder| -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let rows = rec.times.len();
        let mut times = rec.times;
        times.reverse();
        let mut u_rev = Vec::with_capacity(rec.u.len());
        let mut ut_rev = Vec::with_capacity(rec.ut.len());
        for i in (0..rows).rev() {
            u_rev.extend_from_slice(&rec.u[i * n..(i + 1) * n]);
            ut_rev.extend_from_slice(&rec.ut[i * n..(i + 1) * n]);
        }
        (times, u_rev, ut_rev)
    };
    let (times_v, u_v, ut_v) = reorder(rec_v);
    let (times_w, u_w, ut_w) = reorder(rec_w);
    let traj_v = Trajectory {
        grid: *spec,
        kind: FieldKind::Wave,
        times: times_v,
        u: u_v,
        ut: ut_v,
        zero_above: Some(t_start),
    };
    let traj_w = Trajectory {
        grid: *spec,
        kind: FieldKind::KleinGordon,
        times: times_w,
        u: u_w,
        ut: ut_w,
        zero_above: Some(t_start),
    };
    Ok((traj_v, traj_w))
}
