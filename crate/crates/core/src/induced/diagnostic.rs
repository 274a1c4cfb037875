//! Truncated tail sums `R_{psi,T}(phi - beta psi)`.
//!
//! For each `T`, the sum runs over lengths `n <= N_max(T) = ceil(4T / min psi)`
//! and over cylinders of depth `n + m - 1` (where `S_n` is constant) whose
//! `psi` sum exceeds `T`. A prefix whose `psi` sum first exceeds `T` after `j`
//! windows contributes all of its extensions at once through a precomputed
//! tail table, so only prefixes with `S_j psi <= T` are ever enumerated.

use crate::error::{Error, Result};
use crate::pressure::{perron_eigendata, TransferMatrix};

use super::{bs_dimension_with, InducedProblem, SolverSettings};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Bounded,
    Growing,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Bounded => "bounded",
            Verdict::Growing => "growing",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RSample {
    pub t: f64,
    pub value: f64,
    /// Truncation horizon `N_max(T)`.
    pub horizon: usize,
    /// Smallest `n` with a cylinder of `psi` sum above `T` (min of `G_T`).
    pub first_length: Option<usize>,
    /// Geometric bound on the omitted lengths `n > N_max`; present only when
    /// `P(phi - beta psi) < 0`.
    pub tail_bound: Option<f64>,
    pub words_visited: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RDiagnosticReport {
    pub beta: f64,
    /// `P(phi - beta psi)`.
    pub pressure: f64,
    pub samples: Vec<RSample>,
    pub verdict: Verdict,
}

/// Memory-at-most-2 presentation of `chi = phi - beta psi` and of `psi`, with
/// one value per edge (memory 2) or per symbol (memory 1).
struct Weights {
    memory: usize,
    k: usize,
    succ: Vec<Vec<usize>>,
    chi: Vec<f64>,
    psi: Vec<f64>,
}

impl Weights {
    #[inline]
    fn slot(&self, s: usize, t: usize) -> usize {
        if self.memory == 1 {
            t
        } else {
            s * self.k + t
        }
    }

    /// `step[s][t]`: weight of appending symbol `t` after `s`.
    fn step_matrix(&self) -> TransferMatrix {
        let rows: Vec<Vec<f64>> = (0..self.k)
            .map(|s| {
                (0..self.k)
                    .map(|t| {
                        if self.succ[s].contains(&t) {
                            self.chi[self.slot(s, t)].exp()
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        TransferMatrix::from_rows(&rows).expect("finite nonnegative weights")
    }
}

/// Node budget that [`default_t_grid`] sizes the largest `T` for.
pub const DEFAULT_NODE_BUDGET: f64 = 1e6;

/// `points` evenly spaced levels up to `min(20 / min psi, ln(budget) / delta)`,
/// where `delta` is the BS dimension of `psi`: prefixes with `S psi <= T`
/// number about `exp(delta T)`.
pub fn default_t_grid(prob: &InducedProblem, points: usize, settings: &SolverSettings) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::InvalidArgument("need at least one grid point".into()));
    }
    let delta = bs_dimension_with(prob.sft(), prob.psi(), settings)?;
    let mut t_max = 20.0 / prob.psi().min_value();
    if delta > 0.0 {
        t_max = t_max.min(DEFAULT_NODE_BUDGET.ln() / delta);
    }
    Ok((1..=points).map(|i| t_max * i as f64 / points as f64).collect())
}

/// Runs the tail-sum diagnostic at `beta` over an increasing grid of `T`.
pub fn r_diagnostic(
    prob: &InducedProblem,
    beta: f64,
    t_grid: &[f64],
    settings: &SolverSettings,
) -> Result<RDiagnosticReport> {
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("T grid is empty".into()));
    }
    if t_grid.iter().any(|t| !(*t > 0.0) || !t.is_finite()) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "T grid must be positive and strictly increasing".into(),
        ));
    }
    let view = prob.markov_view(settings.cap)?;
    let p = &view.problem;
    let sft = p.sft();
    let memory = p.memory();
    let k = sft.alphabet_size();
    let chi_pot = p.combined(beta)?;
    let slots = if memory == 1 { k } else { k * k };
    let mut chi = vec![0.0; slots];
    let mut psi = vec![0.0; slots];
    for (word, v) in chi_pot.entries() {
        let s = word.symbols();
        let idx = if memory == 1 { s[0] } else { s[0] * k + s[1] };
        chi[idx] = v;
    }
    let psi_lifted = p.psi().lift(sft, memory)?;
    for (word, v) in psi_lifted.entries() {
        let s = word.symbols();
        let idx = if memory == 1 { s[0] } else { s[0] * k + s[1] };
        psi[idx] = v;
    }
    let weights = Weights {
        memory,
        k,
        succ: (0..k).map(|a| sft.successors(a).to_vec()).collect(),
        chi,
        psi,
    };

    let step = weights.step_matrix();
    let spectral = perron_eigendata(&step, settings.spectral.tol, settings.spectral.max_iters)?;
    let lambda = spectral.eigenvalue;
    let pressure = lambda.ln();
    let r_min = spectral.right_vector.iter().copied().fold(f64::INFINITY, f64::min);
    // Z_n <= c * lambda^n for the total weight of all cylinders with n windows.
    let c = if memory == 1 {
        (0..k)
            .map(|a| weights.chi[a].exp() * spectral.right_vector[a])
            .sum::<f64>()
            / (r_min * lambda)
    } else {
        spectral.right_vector.iter().sum::<f64>() / r_min
    };

    let min_psi = p.psi().min_value();
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let horizon = (4.0 * t / min_psi).ceil() as usize;
        let (value, first_length, visited) = tail_sum(&weights, t, horizon, settings.cap.0)?;
        let tail_bound = (pressure < 0.0).then(|| c * lambda.powi(horizon as i32 + 1) / (1.0 - lambda));
        samples.push(RSample {
            t,
            value,
            horizon,
            first_length,
            tail_bound,
            words_visited: visited,
        });
    }

    Ok(RDiagnosticReport {
        beta,
        pressure,
        verdict: classify(&samples),
        samples,
    })
}

/// Bounded: from the first third on, each value is at most the previous one
/// plus that one's truncation remainder (the untruncated sums are
/// non-increasing in `T`), and the last remainder is under 1% of its value.
fn classify(samples: &[RSample]) -> Verdict {
    let first = samples[0].value;
    let last = samples[samples.len() - 1];
    let start = samples.len() / 3;
    let non_increasing = samples[start..].windows(2).all(|w| {
        let slack = w[0].tail_bound.unwrap_or(0.0);
        w[1].value <= (w[0].value + slack) * (1.0 + 1e-12)
    });
    let tail_small = last.tail_bound.is_some_and(|b| b < 0.01 * last.value);
    if non_increasing && tail_small {
        Verdict::Bounded
    } else if last.value >= 10.0 * first {
        Verdict::Growing
    } else {
        Verdict::Inconclusive
    }
}

/// Returns `(R_T, min G_T, nodes visited)`.
fn tail_sum(w: &Weights, t: f64, horizon: usize, cap: u64) -> Result<(f64, Option<usize>, u64)> {
    let k = w.k;
    // cumulative[r][s] = sum_{i=0}^{r} (weight of all i-window extensions after s)
    let mut tail = vec![1.0f64; k];
    let mut cumulative = Vec::with_capacity(horizon + 1);
    cumulative.push(tail.clone());
    for _ in 0..horizon {
        let next: Vec<f64> = (0..k)
            .map(|s| w.succ[s].iter().map(|&u| w.chi[w.slot(s, u)].exp() * tail[u]).sum())
            .collect();
        let prev = cumulative.last().expect("non-empty");
        let cum: Vec<f64> = prev.iter().zip(&next).map(|(a, b)| a + b).collect();
        cumulative.push(cum);
        tail = next;
    }

    let mut total = 0.0;
    let mut first: Option<usize> = None;
    let mut visited: u64 = 0;
    // (last symbol, windows so far, S psi, S chi, successor cursor)
    let mut stack: Vec<(usize, usize, f64, f64, usize)> = Vec::new();
    for a in 0..k {
        let (j, sp, sc) = if w.memory == 1 {
            (1, w.psi[a], w.chi[a])
        } else {
            (0, 0.0, 0.0)
        };
        stack.push((a, j, sp, sc, 0));
        visited += 1;
        if j >= 1 && sp > t {
            total += sc.exp() * cumulative[horizon - j][a];
            first = Some(first.map_or(j, |f| f.min(j)));
            stack.pop();
            continue;
        }
        while let Some(top) = stack.last_mut() {
            let (s, j, sp, sc, cursor) = *top;
            if j >= horizon || cursor >= w.succ[s].len() {
                stack.pop();
                continue;
            }
            top.4 += 1;
            let u = w.succ[s][cursor];
            visited += 1;
            if visited > cap {
                return Err(Error::CapExceeded {
                    count: u128::from(visited),
                    cap,
                });
            }
            let slot = w.slot(s, u);
            let (nj, nsp, nsc) = (j + 1, sp + w.psi[slot], sc + w.chi[slot]);
            if nsp > t {
                total += nsc.exp() * cumulative[horizon - nj][u];
                first = Some(first.map_or(nj, |f| f.min(nj)));
            } else {
                stack.push((u, nj, nsp, nsc, 0));
            }
        }
    }
    Ok((total, first, visited))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::LocallyConstantPotential;
    use crate::sft::Sft;

    fn unit_problem(sft: &Sft) -> InducedProblem {
        InducedProblem::new(
            sft.clone(),
            LocallyConstantPotential::constant(sft, 0.0).unwrap(),
            LocallyConstantPotential::constant(sft, 1.0).unwrap(),
        )
        .unwrap()
    }

    fn grid() -> Vec<f64> {
        (1..=10).map(|i| 2.0 * i as f64).collect()
    }

    #[test]
    fn full_shift_above_root_is_bounded() {
        let prob = unit_problem(&Sft::full(2).unwrap());
        let report = r_diagnostic(&prob, 2f64.ln() + 0.5, &grid(), &SolverSettings::default()).unwrap();
        assert!((report.pressure + 0.5).abs() < 1e-10);
        assert_eq!(report.verdict, Verdict::Bounded);
    }

    #[test]
    fn full_shift_below_root_grows() {
        let prob = unit_problem(&Sft::full(2).unwrap());
        let report = r_diagnostic(&prob, 2f64.ln() - 0.5, &grid(), &SolverSettings::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Growing);
        assert!(report.samples.iter().all(|s| s.tail_bound.is_none()));
    }

    #[test]
    fn single_symbol_geometric_series() {
        let prob = unit_problem(&Sft::full(1).unwrap());
        let beta = 0.1;
        let report = r_diagnostic(&prob, beta, &grid(), &SolverSettings::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Bounded);
        for s in &report.samples {
            // Y_n nonempty iff n > T, so R_T = sum_{n = floor(T)+1}^{4T} e^{-beta n}
            let lo = s.t.floor() as usize + 1;
            let exact: f64 = (lo..=s.horizon).map(|n| (-beta * n as f64).exp()).sum();
            assert!((s.value - exact).abs() < 1e-12 * exact);
            assert_eq!(s.first_length, Some(lo));
        }
    }

    #[test]
    fn matches_brute_force_on_golden_mean_memory2() {
        let gm = Sft::golden_mean();
        let phi = LocallyConstantPotential::from_fn(&gm, 2, |w| 0.3 * w[0] as f64 - 0.2 * w[1] as f64).unwrap();
        let psi = LocallyConstantPotential::from_fn(&gm, 2, |w| 1.0 + 0.5 * (w[0] + w[1]) as f64).unwrap();
        let prob = InducedProblem::new(gm.clone(), phi.clone(), psi.clone()).unwrap();
        let beta = 0.7;
        let t = 2.5;
        let report = r_diagnostic(&prob, beta, &[t], &SolverSettings::default()).unwrap();
        let horizon = report.samples[0].horizon;
        let mut brute = 0.0;
        for n in 1..=horizon {
            gm.for_each_word(n + 1, |w| {
                let sp = psi.birkhoff_sum(w, Some(n)).unwrap();
                if sp > t {
                    let sc = phi.birkhoff_sum(w, Some(n)).unwrap() - beta * sp;
                    brute += sc.exp();
                }
            });
        }
        let got = report.samples[0].value;
        assert!((got - brute).abs() < 1e-10 * brute, "{got} vs {brute}");
    }

    #[test]
    fn truncation_steps_do_not_break_boundedness() {
        // psi = 2 on a unit grid: the horizon grows faster than the lower
        // cutoff, so truncated sums step up between even levels.
        let full = Sft::full(2).unwrap();
        let prob = InducedProblem::new(
            full.clone(),
            LocallyConstantPotential::from_symbol_values(&full, &[0.3f64.ln(), 0.7f64.ln()]).unwrap(),
            LocallyConstantPotential::constant(&full, 2.0).unwrap(),
        )
        .unwrap();
        let unit: Vec<f64> = (1..=10).map(f64::from).collect();
        let report = r_diagnostic(&prob, 0.2, &unit, &SolverSettings::default()).unwrap();
        assert!(report.samples.windows(2).any(|w| w[1].value > w[0].value));
        assert_eq!(report.verdict, Verdict::Bounded);
    }

    #[test]
    fn default_grid_respects_budget() {
        let prob = unit_problem(&Sft::full(2).unwrap());
        let grid = default_t_grid(&prob, 10, &SolverSettings::default()).unwrap();
        assert_eq!(grid.len(), 10);
        assert!((grid[9] - DEFAULT_NODE_BUDGET.ln() / 2f64.ln()).abs() < 1e-6);
        let one = unit_problem(&Sft::full(1).unwrap());
        assert_eq!(
            default_t_grid(&one, 4, &SolverSettings::default()).unwrap(),
            vec![5.0, 10.0, 15.0, 20.0]
        );
    }

    #[test]
    fn rejects_bad_grids() {
        let prob = unit_problem(&Sft::full(2).unwrap());
        let s = SolverSettings::default();
        assert!(r_diagnostic(&prob, 1.0, &[], &s).is_err());
        assert!(r_diagnostic(&prob, 1.0, &[2.0, 1.0], &s).is_err());
        assert!(r_diagnostic(&prob, 1.0, &[0.0, 1.0], &s).is_err());
    }
}
