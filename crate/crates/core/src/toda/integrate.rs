//! Adaptive Dormand-Prince 5(4) integration with blow-up detection.

use super::{rhs_into, state_invariants, TodaState};
use crate::atlas::blowup_transition;
use crate::error::{Error, Result};
use crate::rootsys::RootSystem;

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrateOptions {
    pub t_end: f64,
    /// Absolute and relative tolerance of the local error estimate.
    pub tol: f64,
    /// `|b_i|` must exceed this for a blow-up to be reported.
    pub blowup_threshold: f64,
    /// The accepted step must be shorter than this for a blow-up to be reported.
    pub collapse_step: f64,
    /// Number of consecutive accepted steps over which `|b_i|` must grow.
    pub monotone_steps: usize,
    /// Steps shorter than this end the run.
    pub step_floor: f64,
    /// Invariant drift is only measured while every `|a_i|`, `|b_i|` stays below this.
    pub drift_window: f64,
    pub max_steps: usize,
}

impl IntegrateOptions {
    pub fn new(t_end: f64, tol: f64) -> Self {
        IntegrateOptions {
            t_end,
            tol,
            blowup_threshold: 1e8,
            collapse_step: 1e-10,
            monotone_steps: 5,
            step_floor: 1e-13,
            drift_window: 1e3,
            max_steps: 20_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupEvent {
    /// 0-based index of the coordinate `b_i` that diverges.
    pub index: usize,
    /// Extrapolated time at which `|b_i|` becomes infinite.
    pub t_star: f64,
    /// Time of the last accepted step.
    pub t_detected: f64,
    /// Sign vector of the component entered after the blow-up.
    pub epsilon_after: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// States at every accepted step, starting with the initial state.
    pub samples: Vec<TodaState>,
    derivs: Vec<Vec<f64>>,
    pub events: Vec<BlowupEvent>,
    /// Characteristic-polynomial invariants at `t = 0` (type `A` only).
    pub initial_invariants: Option<Vec<f64>>,
    /// Largest `|I_k(t) - I_k(0)| / max(1, |I_k(0)|)` seen inside the drift window.
    pub invariant_drift: Option<f64>,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &TodaState {
        self.samples
            .last()
            .expect("trajectory has its initial state")
    }

    /// Cubic Hermite interpolation between accepted steps.
    pub fn state_at(&self, t: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let first = self.samples.first()?.t;
        if t < first || t > self.last().t {
            return None;
        }
        let k = self.samples.partition_point(|s| s.t <= t).max(1) - 1;
        let k = k.min(self.samples.len().saturating_sub(2));
        if self.samples.len() == 1 {
            let s = &self.samples[0];
            return Some((s.a.clone(), s.b.clone()));
        }
        let (s0, s1) = (&self.samples[k], &self.samples[k + 1]);
        let h = s1.t - s0.t;
        let u = (t - s0.t) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u),
            u * (1.0 - u) * (1.0 - u),
            u * u * (3.0 - 2.0 * u),
            u * u * (u - 1.0),
        );
        let l = s0.a.len();
        let y0: Vec<f64> = s0.a.iter().chain(&s0.b).copied().collect();
        let y1: Vec<f64> = s1.a.iter().chain(&s1.b).copied().collect();
        let y: Vec<f64> = (0..2 * l)
            .map(|i| {
                h00 * y0[i]
                    + h10 * h * self.derivs[k][i]
                    + h01 * y1[i]
                    + h11 * h * self.derivs[k + 1][i]
            })
            .collect();
        Some((y[..l].to_vec(), y[l..].to_vec()))
    }

    /// States on the uniform grid `0, dt, 2dt, ...` up to the last sample.
    pub fn resample(&self, dt: f64) -> Vec<TodaState> {
        let eps = self.samples[0].epsilon.clone();
        let end = self.last().t;
        let mut out = Vec::new();
        let mut k = 0u64;
        loop {
            let t = self.samples[0].t + k as f64 * dt;
            if t > end {
                break;
            }
            let (a, b) = self.state_at(t).expect("inside the trajectory");
            out.push(TodaState {
                a,
                b,
                epsilon: eps.clone(),
                t,
            });
            k += 1;
        }
        out
    }
}

// Dormand-Prince 5(4) tableau; the system is autonomous, so the nodes are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order weights minus the embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct System<'a> {
    cartan: &'a [Vec<i32>],
    l: usize,
}

impl System<'_> {
    fn eval(&self, y: &[f64], dy: &mut [f64]) {
        let (a, b) = y.split_at(self.l);
        let (da, db) = dy.split_at_mut(self.l);
        rhs_into(self.cartan, a, b, da, db);
    }
}

/// Integrates from `state0` until `t_end` or the first blow-up.
pub fn integrate(
    rs: &RootSystem,
    state0: &TodaState,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    if opts.tol.is_nan() || opts.tol <= 0.0 || !opts.t_end.is_finite() {
        return Err(Error::InvalidArgument(
            "tolerance must be positive and t_end finite".into(),
        ));
    }
    let l = rs.rank();
    if state0.rank() != l {
        return Err(Error::LengthMismatch {
            expected: l,
            got: state0.rank(),
        });
    }
    let sys = System {
        cartan: rs.cartan(),
        l,
    };
    let n = 2 * l;
    let mut t = state0.t;
    let mut y: Vec<f64> = state0.a.iter().chain(&state0.b).copied().collect();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    sys.eval(&y, &mut k[0]);

    let initial_invariants = rs
        .is_type_a()
        .then(|| state_invariants(&state0.a, &state0.b));
    let mut drift: Option<f64> = initial_invariants.as_ref().map(|_| 0.0);

    let mut traj = Trajectory {
        samples: vec![TodaState {
            t,
            ..state0.clone()
        }],
        derivs: vec![k[0].clone()],
        events: Vec::new(),
        initial_invariants: initial_invariants.clone(),
        invariant_drift: None,
        rejected_steps: 0,
    };

    let scale = |y: &[f64], i: usize| opts.tol + opts.tol * y[i].abs();
    let mut h = {
        let d0 = (0..n)
            .map(|i| (y[i] / scale(&y, i)).powi(2))
            .sum::<f64>()
            .sqrt();
        let d1 = (0..n)
            .map(|i| (k[0][i] / scale(&y, i)).powi(2))
            .sum::<f64>()
            .sqrt();
        if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        }
    }
    .min((opts.t_end - t).max(0.0));

    let mut stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut steps = 0usize;
    while t < opts.t_end {
        if steps >= opts.max_steps {
            return Err(Error::ToleranceUnreachable { t, floor: h });
        }
        if h < opts.step_floor {
            if let Some(ev) = detect_blowup(rs, &traj, opts, None) {
                traj.events.push(ev);
                break;
            }
            return Err(Error::ToleranceUnreachable {
                t,
                floor: opts.step_floor,
            });
        }
        let final_step = h >= opts.t_end - t;
        if final_step {
            h = opts.t_end - t;
        }
        for s in 1..7 {
            for i in 0..n {
                stage[i] = y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
            }
            sys.eval(&stage, &mut k[s]);
        }
        // The last stage is evaluated at the fifth-order solution.
        y_new.copy_from_slice(&stage);
        let mut err = 0.0;
        let mut finite = true;
        for i in 0..n {
            let e = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            let sc = opts.tol + opts.tol * y[i].abs().max(y_new[i].abs());
            err += (e / sc).powi(2);
            finite &= y_new[i].is_finite() && k[6][i].is_finite();
        }
        let err = (err / n.max(1) as f64).sqrt();
        steps += 1;
        if !finite || err.is_nan() {
            h *= 0.2;
            traj.rejected_steps += 1;
            continue;
        }
        if err <= 1.0 {
            t = if final_step { opts.t_end } else { t + h };
            y.copy_from_slice(&y_new);
            let deriv = k[6].clone();
            k[0].copy_from_slice(&deriv);
            let (a, b) = y.split_at(l);
            traj.samples.push(TodaState {
                a: a.to_vec(),
                b: b.to_vec(),
                epsilon: state0.epsilon.clone(),
                t,
            });
            traj.derivs.push(deriv);
            if let (Some(i0), Some(d)) = (&initial_invariants, drift.as_mut()) {
                if y.iter().all(|v| v.abs() <= opts.drift_window) {
                    let now = state_invariants(a, b);
                    for (x, x0) in now.iter().zip(i0) {
                        *d = d.max((x - x0).abs() / x0.abs().max(1.0));
                    }
                }
            }
            if let Some(ev) = detect_blowup(rs, &traj, opts, Some(h)) {
                traj.events.push(ev);
                break;
            }
            let fac = if err == 0.0 {
                5.0
            } else {
                0.9 * err.powf(-0.2)
            };
            h *= fac.clamp(0.2, 5.0);
        } else {
            traj.rejected_steps += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
    }
    traj.invariant_drift = drift;
    Ok(traj)
}

/// Looks for a coordinate with the blow-up signature at the end of `traj`.
/// `accepted_step` is `None` when the step size has already hit the floor.
fn detect_blowup(
    rs: &RootSystem,
    traj: &Trajectory,
    opts: &IntegrateOptions,
    accepted_step: Option<f64>,
) -> Option<BlowupEvent> {
    if accepted_step.is_some_and(|h| h >= opts.collapse_step) {
        return None;
    }
    let m = opts.monotone_steps;
    if traj.samples.len() < m + 1 {
        return None;
    }
    let tail = &traj.samples[traj.samples.len() - m - 1..];
    let last = tail.last().unwrap();
    let index = (0..last.b.len())
        .filter(|&i| last.b[i].abs() > opts.blowup_threshold)
        .filter(|&i| tail.windows(2).all(|w| w[1].b[i].abs() > w[0].b[i].abs()))
        .max_by(|&i, &j| last.b[i].abs().total_cmp(&last.b[j].abs()))?;
    // Near a double pole |b|^{-1/2} is linear in t; extrapolate it to zero.
    let (p, q) = (&tail[m - 1], &tail[m]);
    let (yp, yq) = (p.b[index].abs().powf(-0.5), q.b[index].abs().powf(-0.5));
    let t_star = if yp > yq {
        q.t + yq * (q.t - p.t) / (yp - yq)
    } else {
        q.t
    };
    Some(BlowupEvent {
        index,
        t_star,
        t_detected: q.t,
        epsilon_after: blowup_transition(rs, &last.epsilon, index).ok()?,
    })
}
