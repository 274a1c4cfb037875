//! Invariant Markov measures, equilibrium states and the variational search.
//!
//! Every measure here is a 1-step Markov chain on the alphabet of the
//! problem's memory-at-most-2 presentation ([`InducedProblem::markov_view`]).
//! When recoding was needed, that alphabet is the set of admissible blocks and
//! the chain is a higher-step Markov measure on the original shift.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::induced::{induced_pressure_root_with, InducedProblem, SolverSettings};
use crate::potential::LocallyConstantPotential;
use crate::pressure::PressurePencil;
use crate::sft::{EnumerationCap, Sft};

/// Row sums and stationarity are held to this.
pub const STOCHASTIC_TOL: f64 = 1e-12;
const STATIONARY_TOL: f64 = 1e-14;
const STATIONARY_MAX_ITERS: usize = 1_000_000;

/// Row-stochastic `P` supported on the shift's edges, with stationary `pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMeasure {
    sft: Sft,
    transition: Vec<f64>,
    stationary: Vec<f64>,
}

impl MarkovMeasure {
    /// Rows are renormalised after validation; they must already sum to 1
    /// within `1e-9`.
    pub fn new(sft: &Sft, rows: &[Vec<f64>]) -> Result<Self> {
        let k = sft.alphabet_size();
        if rows.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: rows.len(),
            });
        }
        let mut transition = vec![0.0; k * k];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: row.len(),
                });
            }
            let mut sum = 0.0;
            for (j, &p) in row.iter().enumerate() {
                if !(p >= 0.0) || !p.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "transition entry ({}, {}) = {p} is not a probability",
                        i + 1,
                        j + 1
                    )));
                }
                if p > 0.0 && !sft.allows(i, j) {
                    return Err(Error::InvalidArgument(format!(
                        "transition {} -> {} has mass but is not allowed",
                        i + 1,
                        j + 1
                    )));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!("row {} sums to {sum}", i + 1)));
            }
            for (j, &p) in row.iter().enumerate() {
                transition[i * k + j] = p / sum;
            }
        }
        let stationary = stationary_vector(k, &transition)?;
        Ok(MarkovMeasure {
            sft: sft.clone(),
            transition,
            stationary,
        })
    }

    /// Bernoulli measure on the full shift with the given symbol weights.
    pub fn bernoulli(probs: &[f64]) -> Result<Self> {
        let sft = Sft::full(probs.len())?;
        let rows = vec![probs.to_vec(); probs.len()];
        Self::new(&sft, &rows)
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn alphabet_size(&self) -> usize {
        self.sft.alphabet_size()
    }

    #[inline]
    pub fn transition(&self, i: usize, j: usize) -> f64 {
        self.transition[i * self.alphabet_size() + j]
    }

    pub fn transition_rows(&self) -> Vec<Vec<f64>> {
        self.transition
            .chunks(self.alphabet_size())
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// `pi_{w_0} prod P_{w_i w_{i+1}}`; zero for inadmissible words.
    pub fn cylinder_mass(&self, word: &[usize]) -> f64 {
        match word.split_first() {
            None => 1.0,
            Some((&first, _)) => word
                .windows(2)
                .fold(self.stationary[first], |m, w| m * self.transition(w[0], w[1])),
        }
    }

    /// `||pi P - pi||_inf`.
    pub fn stationarity_residual(&self) -> f64 {
        let k = self.alphabet_size();
        (0..k)
            .map(|j| {
                let v: f64 = (0..k).map(|i| self.stationary[i] * self.transition(i, j)).sum();
                (v - self.stationary[j]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Kolmogorov-Sinai entropy `-sum pi_i P_ij log P_ij`.
    pub fn entropy(&self) -> f64 {
        markov_entropy(self)
    }

    pub fn integrate(&self, p: &LocallyConstantPotential) -> Result<f64> {
        integrate(self, p)
    }
}

/// Stationary vector by power iteration on the lazy chain `(P + I) / 2`,
/// which shares it with `P` and is aperiodic.
fn stationary_vector(k: usize, p: &[f64]) -> Result<Vec<f64>> {
    let mut x = vec![1.0 / k as f64; k];
    let mut next = vec![0.0; k];
    let mut residual = f64::INFINITY;
    for _ in 0..STATIONARY_MAX_ITERS {
        residual = 0.0;
        for j in 0..k {
            let xp: f64 = (0..k).map(|i| x[i] * p[i * k + j]).sum();
            residual = f64::max(residual, (xp - x[j]).abs());
            next[j] = 0.5 * (xp + x[j]);
        }
        let s: f64 = next.iter().sum();
        x.iter_mut().zip(&next).for_each(|(a, b)| *a = b / s);
        if residual <= STATIONARY_TOL {
            return Ok(x);
        }
    }
    Err(Error::NotConverged {
        what: "stationary vector",
        iterations: STATIONARY_MAX_ITERS,
        residual,
    })
}

/// Equilibrium (Gibbs) measure of `phi - beta* psi` and the root `beta*`.
///
/// The chain is `P_ij = L_ij r_j / (lambda r_i)` for the transfer matrix `L`
/// of the zero-pressure potential on the problem's Markov view.
pub fn gibbs_measure(prob: &InducedProblem, settings: &SolverSettings) -> Result<(MarkovMeasure, f64)> {
    match prob.sft().period() {
        None => return Err(Error::NotIrreducible),
        Some(p) if p > 1 => return Err(Error::NotMixing(p)),
        Some(_) => {}
    }
    let root = induced_pressure_root_with(prob, settings)?;
    let view = prob.markov_view(settings.cap)?;
    let v = &view.problem;
    let pencil = PressurePencil::new(v.sft(), v.phi(), v.psi(), settings.spectral, settings.cap)?;
    let data = pencil.eigendata(root.beta)?;
    let l = pencil.transfer_matrix(root.beta);
    let r = &data.right_vector;
    let rows: Vec<Vec<f64>> = (0..l.dim())
        .map(|i| {
            let row: Vec<f64> = (0..l.dim())
                .map(|j| l.get(i, j) * r[j] / (data.eigenvalue * r[i]))
                .collect();
            let s: f64 = row.iter().sum();
            row.into_iter().map(|p| p / s).collect()
        })
        .collect();
    Ok((MarkovMeasure::new(pencil.sft(), &rows)?, root.beta))
}

pub fn markov_entropy(mu: &MarkovMeasure) -> f64 {
    let k = mu.alphabet_size();
    let mut h = 0.0;
    for i in 0..k {
        for j in 0..k {
            let p = mu.transition(i, j);
            if p > 0.0 {
                h -= mu.stationary[i] * p * p.ln();
            }
        }
    }
    h.max(0.0)
}

/// `int p dmu` for `p` on the measure's alphabet with memory at most 2.
pub fn integrate(mu: &MarkovMeasure, p: &LocallyConstantPotential) -> Result<f64> {
    let k = mu.alphabet_size();
    if p.alphabet_size() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: p.alphabet_size(),
        });
    }
    match p.memory() {
        1 => Ok((0..k).map(|i| mu.stationary[i] * p.value(&[i])).sum()),
        2 => {
            let mut total = 0.0;
            for i in 0..k {
                for &j in mu.sft.successors(i) {
                    let w = mu.stationary[i] * mu.transition(i, j);
                    if w > 0.0 {
                        total += w * p.value(&[i, j]);
                    }
                }
            }
            Ok(total)
        }
        m => Err(Error::MemoryMismatch { found: m, max: 2 }),
    }
}

/// `(h(mu) + int phi) / int psi`.
pub fn pressure_quotient(
    mu: &MarkovMeasure,
    phi: &LocallyConstantPotential,
    psi: &LocallyConstantPotential,
) -> Result<f64> {
    Ok((markov_entropy(mu) + integrate(mu, phi)?) / integrate(mu, psi)?)
}

/// Quotient of `mu` against the root, on the problem's Markov view.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumReport {
    pub quotient: f64,
    pub beta_star: f64,
    /// `quotient - beta_star`; never meaningfully positive.
    pub gap: f64,
    pub passed: bool,
}

pub fn equilibrium_check(
    mu: &MarkovMeasure,
    prob: &InducedProblem,
    tol: f64,
    settings: &SolverSettings,
) -> Result<EquilibriumReport> {
    let root = induced_pressure_root_with(prob, settings)?;
    let view = prob.markov_view(settings.cap)?;
    let quotient = pressure_quotient(mu, view.problem.phi(), view.problem.psi())?;
    let gap = quotient - root.beta;
    Ok(EquilibriumReport {
        quotient,
        beta_star: root.beta,
        gap,
        passed: gap.abs() <= tol,
    })
}

/// Range of `mu(C) / exp(S_n phi - beta* S_n psi)` over the cylinders of one
/// depth and the points inside them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsBand {
    pub depth: usize,
    pub min: f64,
    pub max: f64,
}

impl GibbsBand {
    pub fn spread(&self) -> f64 {
        self.max / self.min
    }
}

/// Gibbs ratio bands for depths `1..=n_max` on the problem's Markov view.
/// Dependence on the point inside a cylinder is covered by taking every
/// admissible extension by `M - 1` symbols.
pub fn gibbs_constant_estimate(
    mu: &MarkovMeasure,
    prob: &InducedProblem,
    beta_star: f64,
    n_max: usize,
    cap: EnumerationCap,
) -> Result<Vec<GibbsBand>> {
    let view = prob.markov_view(cap)?;
    let v = &view.problem;
    if v.sft().alphabet_size() != mu.alphabet_size() {
        return Err(Error::DimensionMismatch {
            expected: v.sft().alphabet_size(),
            found: mu.alphabet_size(),
        });
    }
    let chi = v.combined(beta_star)?;
    let m = chi.memory();
    let mut bands = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let len = n + m - 1;
        cap.check(v.sft().count_words(len)?)?;
        let mut band = GibbsBand {
            depth: n,
            min: f64::INFINITY,
            max: 0.0,
        };
        v.sft().for_each_word(len, |w| {
            let ratio = mu.cylinder_mass(&w[..n]) / chi.birkhoff_unchecked(w, n).exp();
            band.min = band.min.min(ratio);
            band.max = band.max.max(ratio);
        });
        bands.push(band);
    }
    Ok(bands)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStage {
    Sample,
    Injected,
    Refine,
}

impl SearchStage {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStage::Sample => "sample",
            SearchStage::Injected => "injected",
            SearchStage::Refine => "refine",
        }
    }
}

/// One evaluated candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchStep {
    pub stage: SearchStage,
    pub index: usize,
    pub quotient: f64,
    pub accepted: bool,
    pub best: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariationalReport {
    pub best_quotient: f64,
    pub best: MarkovMeasure,
    /// Largest quotient among random and refined candidates only.
    pub max_sampled: f64,
    pub trajectory: Vec<SearchStep>,
}

/// Settings for [`variational_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSettings {
    pub samples: usize,
    pub refine_steps: usize,
    pub seed: u64,
    /// Initial log-step of the multiplicative refinement.
    pub step: f64,
    pub cap: EnumerationCap,
}

impl SearchSettings {
    pub fn new(samples: usize, refine_steps: usize, seed: u64) -> Self {
        SearchSettings {
            samples,
            refine_steps,
            seed,
            step: 0.5,
            cap: EnumerationCap::default(),
        }
    }
}

/// Random search for the supremum of the pressure quotient over Markov
/// measures on the problem's Markov view.
///
/// Rows are drawn from the symmetric Dirichlet(1) law on each row's support,
/// then the best candidate is refined by multiplying one random allowed entry
/// by `exp(+-step)` and keeping the result only if the quotient improves. The
/// step halves after 20 consecutive rejections. `inject` joins the pool as an
/// extra candidate before refinement.
pub fn variational_search(
    prob: &InducedProblem,
    settings: &SearchSettings,
    inject: Option<&MarkovMeasure>,
) -> Result<VariationalReport> {
    if settings.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let view = prob.markov_view(settings.cap)?;
    let v = &view.problem;
    let sft = v.sft();
    let k = sft.alphabet_size();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let quotient = |mu: &MarkovMeasure| pressure_quotient(mu, v.phi(), v.psi());

    let mut pool = Pool {
        best: None,
        trajectory: Vec::with_capacity(settings.samples + settings.refine_steps + 1),
    };
    let mut max_sampled = f64::NEG_INFINITY;

    for index in 0..settings.samples {
        let rows: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                let mut row = vec![0.0; k];
                for &j in sft.successors(i) {
                    row[j] = rng.sample::<f64, _>(Exp1);
                }
                let s: f64 = row.iter().sum();
                row.iter_mut().for_each(|p| *p /= s);
                row
            })
            .collect();
        let mu = MarkovMeasure::new(sft, &rows)?;
        let q = quotient(&mu)?;
        max_sampled = max_sampled.max(q);
        pool.consider(SearchStage::Sample, index, q, rows, mu);
    }
    if let Some(g) = inject {
        if g.sft() != sft {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: g.alphabet_size(),
            });
        }
        let q = quotient(g)?;
        pool.consider(SearchStage::Injected, 0, q, g.transition_rows(), g.clone());
    }

    let edges: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| sft.successors(i).iter().map(move |&j| (i, j)))
        .filter(|&(i, _)| sft.successors(i).len() > 1)
        .collect();
    let mut step = settings.step;
    let mut rejections = 0;
    for index in 0..settings.refine_steps {
        if edges.is_empty() {
            break;
        }
        let (i, j) = edges[rng.random_range(0..edges.len())];
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let mut rows = pool.best.as_ref().expect("at least one sample").1.clone();
        rows[i][j] *= (sign * step).exp();
        let s: f64 = rows[i].iter().sum();
        rows[i].iter_mut().for_each(|p| *p /= s);
        let mu = MarkovMeasure::new(sft, &rows)?;
        let q = quotient(&mu)?;
        max_sampled = max_sampled.max(q);
        if pool.consider(SearchStage::Refine, index, q, rows, mu) {
            rejections = 0;
        } else {
            rejections += 1;
            if rejections == 20 {
                step *= 0.5;
                rejections = 0;
            }
        }
    }

    let (best_quotient, _, best) = pool.best.expect("at least one sample");
    Ok(VariationalReport {
        best_quotient,
        best,
        max_sampled,
        trajectory: pool.trajectory,
    })
}

struct Pool {
    best: Option<(f64, Vec<Vec<f64>>, MarkovMeasure)>,
    trajectory: Vec<SearchStep>,
}

impl Pool {
    fn consider(&mut self, stage: SearchStage, index: usize, q: f64, rows: Vec<Vec<f64>>, mu: MarkovMeasure) -> bool {
        let accepted = self.best.as_ref().is_none_or(|(b, _, _)| q > *b);
        if accepted {
            self.best = Some((q, rows, mu));
        }
        let best = self.best.as_ref().map(|(b, _, _)| *b).expect("best set");
        self.trajectory.push(SearchStep {
            stage,
            index,
            quotient: q,
            accepted,
            best,
        });
        accepted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::induced::induced_pressure_root;

    const GOLDEN: f64 = 1.618_033_988_749_895;

    fn constant(sft: &Sft, c: f64) -> LocallyConstantPotential {
        LocallyConstantPotential::constant(sft, c).unwrap()
    }

    fn problem(sft: &Sft, phi: &[f64], psi: &[f64]) -> InducedProblem {
        InducedProblem::new(
            sft.clone(),
            LocallyConstantPotential::from_symbol_values(sft, phi).unwrap(),
            LocallyConstantPotential::from_symbol_values(sft, psi).unwrap(),
        )
        .unwrap()
    }

    fn bernoulli_problem() -> InducedProblem {
        problem(&Sft::full(2).unwrap(), &[0.3f64.ln(), 0.7f64.ln()], &[1.0, 1.0])
    }

    #[test]
    fn constructor_validates() {
        let gm = Sft::golden_mean();
        assert!(MarkovMeasure::new(&gm, &[vec![0.5, 0.5], vec![0.5, 0.5]]).is_err());
        assert!(MarkovMeasure::new(&gm, &[vec![0.5, 0.6], vec![1.0, 0.0]]).is_err());
        assert!(MarkovMeasure::new(&gm, &[vec![0.5, 0.5]]).is_err());
        assert!(MarkovMeasure::new(&gm, &[vec![-0.5, 1.5], vec![1.0, 0.0]]).is_err());
        let mu = MarkovMeasure::new(&gm, &[vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        assert!(mu.stationarity_residual() <= STOCHASTIC_TOL);
        assert!((mu.stationary()[0] - 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn periodic_chain_has_stationary_vector() {
        let flip = Sft::new(&[vec![0, 1], vec![1, 0]]).unwrap();
        let mu = MarkovMeasure::new(&flip, &[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(mu.stationary(), &[0.5, 0.5]);
        assert_eq!(mu.entropy(), 0.0);
    }

    #[test]
    fn gibbs_examples() {
        let s = SolverSettings::default();
        let (mu, beta) = gibbs_measure(&bernoulli_problem(), &s).unwrap();
        assert!(beta.abs() < 1e-9);
        for i in 0..2 {
            assert!((mu.transition(i, 0) - 0.3).abs() < 1e-9);
            assert!((mu.transition(i, 1) - 0.7).abs() < 1e-9);
        }
        assert!((mu.stationary()[0] - 0.3).abs() < 1e-9);

        let full = Sft::full(2).unwrap();
        let (mu, beta) = gibbs_measure(&problem(&full, &[0.0, 0.0], &[1.0, 1.0]), &s).unwrap();
        assert!((beta - 2f64.ln()).abs() < 1e-9);
        assert!((mu.transition(1, 0) - 0.5).abs() < 1e-12);

        let gm = Sft::golden_mean();
        let (mu, beta) = gibbs_measure(&problem(&gm, &[0.0, 0.0], &[1.0, 1.0]), &s).unwrap();
        assert!((beta - GOLDEN.ln()).abs() < 1e-9);
        let g2 = GOLDEN * GOLDEN;
        assert!((mu.transition(0, 0) - 1.0 / GOLDEN).abs() < 1e-9);
        assert!((mu.transition(0, 1) - 1.0 / g2).abs() < 1e-9);
        assert_eq!(mu.transition(1, 0), 1.0);
        assert!((mu.stationary()[0] - g2 / (1.0 + g2)).abs() < 1e-9);
        assert!(mu.stationarity_residual() <= STOCHASTIC_TOL);
    }

    #[test]
    fn gibbs_requires_mixing() {
        let flip = Sft::new(&[vec![0, 1], vec![1, 0]]).unwrap();
        let prob = problem(&flip, &[0.0, 0.0], &[1.0, 1.0]);
        assert_eq!(
            gibbs_measure(&prob, &SolverSettings::default()),
            Err(Error::NotMixing(2))
        );
        let reducible = Sft::new(&[vec![1, 1], vec![0, 1]]).unwrap();
        let prob = problem(&reducible, &[0.0, 0.0], &[1.0, 1.0]);
        assert_eq!(
            gibbs_measure(&prob, &SolverSettings::default()),
            Err(Error::NotIrreducible)
        );
    }

    #[test]
    fn entropy_examples() {
        let h = MarkovMeasure::bernoulli(&[0.5, 0.5]).unwrap().entropy();
        assert!((h - 2f64.ln()).abs() < 1e-15);
        let h = MarkovMeasure::bernoulli(&[0.3, 0.7]).unwrap().entropy();
        assert!((h - 0.610_864_302_054_894).abs() < 1e-12);
        let gm = Sft::golden_mean();
        let (parry, _) = gibbs_measure(&problem(&gm, &[0.0, 0.0], &[1.0, 1.0]), &SolverSettings::default()).unwrap();
        assert!((parry.entropy() - GOLDEN.ln()).abs() < 1e-9);
    }

    #[test]
    fn integrate_examples() {
        let full = Sft::full(2).unwrap();
        let mu = MarkovMeasure::bernoulli(&[0.3, 0.7]).unwrap();
        assert!((mu.integrate(&constant(&full, 2.5)).unwrap() - 2.5).abs() < 1e-14);
        let p = LocallyConstantPotential::from_symbol_values(&full, &[1.0, 2.0]).unwrap();
        assert!((mu.integrate(&p).unwrap() - 1.7).abs() < 1e-14);
        let pair = LocallyConstantPotential::from_fn(&full, 2, |w| (w[0] * 2 + w[1]) as f64).unwrap();
        // E[2 X_0 + X_1] = 3 * 0.7
        assert!((mu.integrate(&pair).unwrap() - 2.1).abs() < 1e-14);
        let triple = LocallyConstantPotential::from_fn(&full, 3, |_| 1.0).unwrap();
        assert_eq!(mu.integrate(&triple), Err(Error::MemoryMismatch { found: 3, max: 2 }));
        let three = constant(&Sft::full(3).unwrap(), 1.0);
        assert!(mu.integrate(&three).is_err());

        let gm = Sft::golden_mean();
        let (parry, _) = gibbs_measure(&problem(&gm, &[0.0, 0.0], &[1.0, 1.0]), &SolverSettings::default()).unwrap();
        let first = LocallyConstantPotential::from_symbol_values(&gm, &[1.0, 0.0]).unwrap();
        assert!((parry.integrate(&first).unwrap() - 0.723_606_797_749_979).abs() < 1e-9);
    }

    #[test]
    fn quotient_and_equilibrium() {
        let s = SolverSettings::default();
        let one = Sft::full(1).unwrap();
        let prob = problem(&one, &[0.7], &[1.3]);
        let mu = MarkovMeasure::new(&one, &[vec![1.0]]).unwrap();
        let q = pressure_quotient(&mu, prob.phi(), prob.psi()).unwrap();
        assert!((q - 0.7 / 1.3).abs() < 1e-15);
        assert!(equilibrium_check(&mu, &prob, 1e-9, &s).unwrap().passed);

        let full = Sft::full(2).unwrap();
        let prob = problem(&full, &[0.0, 0.0], &[1.0, 1.0]);
        let fair = MarkovMeasure::bernoulli(&[0.5, 0.5]).unwrap();
        assert!((pressure_quotient(&fair, prob.phi(), prob.psi()).unwrap() - 2f64.ln()).abs() < 1e-15);
        let skew = MarkovMeasure::bernoulli(&[0.9, 0.1]).unwrap();
        let report = equilibrium_check(&skew, &prob, 1e-6, &s).unwrap();
        assert!(!report.passed);
        assert!((report.quotient - 0.325_082_973_391_448).abs() < 1e-12);
        assert!(report.gap < 0.0);

        let bern = bernoulli_problem();
        let mu = MarkovMeasure::bernoulli(&[0.3, 0.7]).unwrap();
        assert!(pressure_quotient(&mu, bern.phi(), bern.psi()).unwrap().abs() < 1e-14);
    }

    #[test]
    fn gibbs_measure_is_equilibrium_after_recoding() {
        let gm = Sft::golden_mean();
        let phi = LocallyConstantPotential::from_fn(&gm, 3, |w| 0.2 * w[0] as f64 - 0.1 * w[2] as f64).unwrap();
        let psi = LocallyConstantPotential::from_fn(&gm, 2, |w| 1.0 + 0.3 * w[1] as f64).unwrap();
        let prob = InducedProblem::new(gm, phi, psi).unwrap();
        let s = SolverSettings::default();
        let (mu, beta) = gibbs_measure(&prob, &s).unwrap();
        assert_eq!(mu.alphabet_size(), 3);
        let report = equilibrium_check(&mu, &prob, 1e-9, &s).unwrap();
        assert!(report.passed, "{report:?}");
        assert!((report.beta_star - beta).abs() < 1e-15);
    }

    #[test]
    fn bernoulli_gibbs_ratio_is_one() {
        let prob = bernoulli_problem();
        let mu = MarkovMeasure::bernoulli(&[0.3, 0.7]).unwrap();
        for band in gibbs_constant_estimate(&mu, &prob, 0.0, 10, EnumerationCap::default()).unwrap() {
            assert!((band.min - 1.0).abs() < 1e-12 && (band.max - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn parry_ratio_depends_on_end_symbols() {
        let gm = Sft::golden_mean();
        let prob = problem(&gm, &[0.0, 0.0], &[1.0, 1.0]);
        let (mu, beta) = gibbs_measure(&prob, &SolverSettings::default()).unwrap();
        let bands = gibbs_constant_estimate(&mu, &prob, beta, 12, EnumerationCap::default()).unwrap();
        // Ratio is l_first r_last * g: spread g until 2..2 words appear at depth 3.
        assert!((bands[1].spread() - GOLDEN).abs() < 1e-9);
        for band in &bands[2..] {
            assert!((band.spread() - GOLDEN * GOLDEN).abs() < 1e-9);
        }
    }

    #[test]
    fn search_respects_upper_bound_and_finds_gibbs() {
        let gm = Sft::golden_mean();
        let prob = problem(&gm, &[0.0, 0.0], &[1.0, 1.0]);
        let s = SolverSettings::default();
        let beta = induced_pressure_root(&prob, 1e-12, 1e-13).unwrap().beta;
        let (gibbs, _) = gibbs_measure(&prob, &s).unwrap();
        let report = variational_search(&prob, &SearchSettings::new(200, 200, 7), Some(&gibbs)).unwrap();
        assert!(report.max_sampled <= beta + 1e-8);
        assert!((report.best_quotient - beta).abs() < 1e-6);
        assert!(report.trajectory.iter().all(|t| t.quotient <= beta + 1e-8));
        assert_eq!(report.trajectory.len(), 401);
    }

    #[test]
    fn search_is_deterministic() {
        let prob = problem(&Sft::full(2).unwrap(), &[0.1, -0.4], &[1.0, 2.5]);
        let a = variational_search(&prob, &SearchSettings::new(50, 50, 42), None).unwrap();
        let b = variational_search(&prob, &SearchSettings::new(50, 50, 42), None).unwrap();
        assert_eq!(a, b);
        let c = variational_search(&prob, &SearchSettings::new(50, 50, 43), None).unwrap();
        assert_ne!(a.trajectory, c.trajectory);
    }

    #[test]
    fn single_symbol_search() {
        let one = Sft::full(1).unwrap();
        let prob = problem(&one, &[0.7], &[1.3]);
        let report = variational_search(&prob, &SearchSettings::new(3, 10, 1), None).unwrap();
        assert!((report.best_quotient - 0.7 / 1.3).abs() < 1e-15);
    }
}
