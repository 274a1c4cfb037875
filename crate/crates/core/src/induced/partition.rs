//! Finite-`T` partition sums over the crossing families `X_n`.
//!
//! A word `w` of length `n + M` (`M` the larger memory) witnesses `n` at level
//! `T` when `S_n psi(w) <= T < S_{n+1} psi(w)`. Both sums below walk the word
//! tree once in lexicographic order, pruning any prefix whose `psi` sum has
//! already passed `T`.
//!
//! - Spanning convention: one term `exp(S_n phi)` per distinct prefix of
//!   length `n + m_phi - 1` that has a witnessing extension.
//! - Separated convention: one term per `n`-cylinder containing a witness,
//!   taking the largest `exp(S_n phi)` over its witnesses.
//!
//! The separated sum never exceeds the spanning sum and is at least a
//! `k^{-(m_phi - 1)}` fraction of it.

use crate::error::{Error, Result};
use crate::sft::EnumerationCap;

use super::InducedProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyConvention {
    Spanning,
    Separated,
}

/// Contribution of a single length `n` in `S_T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthTerm {
    pub n: usize,
    pub cylinders: u64,
    pub sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSumReport {
    pub t: f64,
    pub convention: FamilyConvention,
    /// One entry per `n` in `S_T`, increasing.
    pub per_n: Vec<LengthTerm>,
    pub total: f64,
    /// `log(total) / T`; `-inf` when `S_T` is empty.
    pub log_rate: f64,
    /// Nodes of the word tree visited to produce the report.
    pub words_visited: u64,
}

impl PartitionSumReport {
    /// The set `S_T` of lengths with at least one witness.
    pub fn s_set(&self) -> Vec<usize> {
        self.per_n.iter().map(|t| t.n).collect()
    }

    fn from_terms(t: f64, convention: FamilyConvention, terms: &[(u64, f64)], visited: u64) -> Self {
        let per_n: Vec<LengthTerm> = terms
            .iter()
            .enumerate()
            .filter(|(_, (count, _))| *count > 0)
            .map(|(n, &(cylinders, sum))| LengthTerm { n, cylinders, sum })
            .collect();
        let total: f64 = per_n.iter().map(|t| t.sum).sum();
        PartitionSumReport {
            t,
            convention,
            per_n,
            total,
            log_rate: total.ln() / t,
            words_visited: visited,
        }
    }
}

struct Frame {
    symbol: usize,
    cursor: usize,
    descend: bool,
}

/// Computes both conventions in one walk; returns `(spanning, separated)`.
pub fn partition_sums(
    prob: &InducedProblem,
    t: f64,
    cap: EnumerationCap,
) -> Result<(PartitionSumReport, PartitionSumReport)> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "T must be positive and finite, got {t}"
        )));
    }
    let sft = prob.sft();
    let (phi, psi) = (prob.phi(), prob.psi());
    let (m_phi, m_psi) = (phi.memory(), psi.memory());
    let big_m = m_phi.max(m_psi);
    let n_max = (t / psi.min_value()).floor() as usize + 1;
    let max_len = n_max + big_m;

    // psi_cum[j] = S_j psi of the current prefix, accumulated left to right.
    let mut psi_cum: Vec<f64> = vec![0.0];
    let mut phi_cum: Vec<f64> = vec![0.0];
    let mut word: Vec<usize> = Vec::with_capacity(max_len);
    // indexed by depth (word length)
    let mut witnessed = vec![false; max_len + 1];
    let mut best: Vec<Option<f64>> = vec![None; max_len + 1];
    let mut spanning = vec![(0u64, 0.0f64); n_max + 1];
    let mut separated = vec![(0u64, 0.0f64); n_max + 1];
    let mut visited: u64 = 0;
    let mut stack: Vec<Frame> = Vec::with_capacity(max_len);

    let mut enter = |symbol: usize,
                     word: &mut Vec<usize>,
                     psi_cum: &mut Vec<f64>,
                     phi_cum: &mut Vec<f64>,
                     witnessed: &mut [bool],
                     best: &mut [Option<f64>]|
     -> Result<bool> {
        visited += 1;
        if visited > cap.0 {
            return Err(Error::CapExceeded {
                count: u128::from(visited),
                cap: cap.0,
            });
        }
        word.push(symbol);
        let len = word.len();
        if len >= m_psi {
            let v = psi.value(&word[len - m_psi..]);
            psi_cum.push(psi_cum.last().copied().unwrap_or(0.0) + v);
        }
        if len >= m_phi {
            let v = phi.value(&word[len - m_phi..]);
            phi_cum.push(phi_cum.last().copied().unwrap_or(0.0) + v);
        }
        witnessed[len] = false;
        best[len] = None;
        if len > big_m {
            let n = len - big_m;
            if psi_cum[n] <= t && t < psi_cum[n + 1] {
                witnessed[n + m_phi - 1] = true;
            }
        }
        // children have length len + 1 and can only witness n >= len + 1 - M
        let next_n = (len + 1).saturating_sub(big_m);
        let descend = len < max_len && (next_n == 0 || psi_cum[next_n] <= t);
        Ok(descend)
    };

    let leave = |word: &mut Vec<usize>,
                 psi_cum: &mut Vec<f64>,
                 phi_cum: &mut Vec<f64>,
                 witnessed: &[bool],
                 best: &mut [Option<f64>],
                 spanning: &mut [(u64, f64)],
                 separated: &mut [(u64, f64)]| {
        let len = word.len();
        if witnessed[len] && len + 1 > m_phi {
            let n = len + 1 - m_phi;
            let weight = phi_cum[n].exp();
            spanning[n].0 += 1;
            spanning[n].1 += weight;
            best[n] = Some(best[n].map_or(weight, |b: f64| b.max(weight)));
        }
        if len <= n_max {
            if let Some(w) = best[len] {
                separated[len].0 += 1;
                separated[len].1 += w;
            }
        }
        if len >= m_psi {
            psi_cum.pop();
        }
        if len >= m_phi {
            phi_cum.pop();
        }
        word.pop();
    };

    for a in 0..sft.alphabet_size() {
        let descend = enter(a, &mut word, &mut psi_cum, &mut phi_cum, &mut witnessed, &mut best)?;
        stack.push(Frame {
            symbol: a,
            cursor: 0,
            descend,
        });
        while let Some(top) = stack.last_mut() {
            let succ = sft.successors(top.symbol);
            if top.descend && top.cursor < succ.len() {
                let b = succ[top.cursor];
                top.cursor += 1;
                let descend = enter(b, &mut word, &mut psi_cum, &mut phi_cum, &mut witnessed, &mut best)?;
                stack.push(Frame {
                    symbol: b,
                    cursor: 0,
                    descend,
                });
            } else {
                leave(
                    &mut word,
                    &mut psi_cum,
                    &mut phi_cum,
                    &witnessed,
                    &mut best,
                    &mut spanning,
                    &mut separated,
                );
                stack.pop();
            }
        }
    }

    Ok((
        PartitionSumReport::from_terms(t, FamilyConvention::Spanning, &spanning, visited),
        PartitionSumReport::from_terms(t, FamilyConvention::Separated, &separated, visited),
    ))
}

/// Spanning-convention sum `Q_{psi,T}` at the cylinder scale.
pub fn q_partition_sum(prob: &InducedProblem, t: f64, cap: EnumerationCap) -> Result<PartitionSumReport> {
    Ok(partition_sums(prob, t, cap)?.0)
}

/// Separated-convention sum `P_{psi,T}` at the cylinder scale.
pub fn p_partition_sum(prob: &InducedProblem, t: f64, cap: EnumerationCap) -> Result<PartitionSumReport> {
    Ok(partition_sums(prob, t, cap)?.1)
}

/// `log_rate` over a grid of `T` and the tail maximum used as a stand-in for
/// the `limsup`.
#[derive(Debug, Clone, PartialEq)]
pub struct DefinitionalEstimate {
    /// `(T, log_rate)` for each grid point that was computed.
    pub samples: Vec<(f64, f64)>,
    /// Maximum `log_rate` over the last third of the computed grid.
    pub estimate: f64,
    /// The enumeration cap stopped the grid early.
    pub partial: bool,
}

/// Evaluates `Q_{psi,T}` on `T = t_step, 2 t_step, ..., t_max` and returns
/// the maximum rate over the final third of the grid.
pub fn induced_pressure_definitional(
    prob: &InducedProblem,
    t_max: f64,
    t_step: f64,
    cap: EnumerationCap,
) -> Result<DefinitionalEstimate> {
    if !(t_step > 0.0) || !(t_max >= t_step) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < t_step <= t_max, got t_step={t_step}, t_max={t_max}"
        )));
    }
    let points = (t_max / t_step + 1e-9).floor() as usize;
    let mut samples = Vec::with_capacity(points);
    let mut partial = false;
    for i in 1..=points {
        let t = i as f64 * t_step;
        match q_partition_sum(prob, t, cap) {
            Ok(report) => samples.push((t, report.log_rate)),
            Err(Error::CapExceeded { count, cap: c }) => {
                if samples.is_empty() {
                    return Err(Error::CapExceeded { count, cap: c });
                }
                partial = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let tail = samples.len().div_ceil(3);
    let estimate = samples[samples.len() - tail..]
        .iter()
        .map(|&(_, r)| r)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(DefinitionalEstimate {
        samples,
        estimate,
        partial,
    })
}
