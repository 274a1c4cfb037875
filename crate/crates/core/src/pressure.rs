//! Classical topological pressure: transfer matrices, Perron eigendata by
//! power iteration warm-started by repeated squaring, and the finite-`n` partition-sum estimator.

use crate::error::{Error, Result};
use crate::potential::{recode_to_memory2, LocallyConstantPotential};
use crate::sft::{EnumerationCap, Sft};

/// Power-iteration controls shared by every spectral computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSettings {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SpectralSettings {
    fn default() -> Self {
        SpectralSettings {
            tol: 1e-12,
            max_iters: 100_000,
        }
    }
}

/// Nonnegative `k x k` matrix `L_ij = t_ij exp(phi(ij))`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl TransferMatrix {
    /// Wraps explicit entries; they must be finite and nonnegative.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            for &v in row {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "transfer matrix entries must be finite and nonnegative, got {v}"
                    )));
                }
                entries.push(v);
            }
        }
        Ok(TransferMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.entries[i * self.dim..(i + 1) * self.dim];
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn apply_transpose(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, &xi) in x.iter().enumerate() {
            let row = &self.entries[i * self.dim..(i + 1) * self.dim];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * xi;
            }
        }
    }

    fn support(&self) -> Result<Sft> {
        let rows: Vec<Vec<u8>> = self
            .entries
            .chunks(self.dim)
            .map(|r| r.iter().map(|&v| u8::from(v > 0.0)).collect())
            .collect();
        Sft::new(&rows).map_err(|_| Error::NotIrreducible)
    }
}

/// Perron eigenvalue with positive right/left eigenvectors.
///
/// Normalized so that `sum(r) = 1` and `sum(l_i r_i) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub eigenvalue: f64,
    pub right_vector: Vec<f64>,
    pub left_vector: Vec<f64>,
    /// Larger of the two relative residuals `|Lr - λr|_∞ / (λ |r|_∞)`.
    pub residual: f64,
    pub iterations: usize,
}

/// Builds the transfer matrix of a potential with memory at most 2.
///
/// Memory-1 potentials use the row-indexed convention `L_ij = t_ij e^{phi(i)}`.
pub fn build_transfer_matrix(sft: &Sft, phi: &LocallyConstantPotential) -> Result<TransferMatrix> {
    if phi.memory() > 2 {
        return Err(Error::MemoryMismatch {
            found: phi.memory(),
            max: 2,
        });
    }
    if phi.alphabet_size() != sft.alphabet_size() {
        return Err(Error::DimensionMismatch {
            expected: sft.alphabet_size(),
            found: phi.alphabet_size(),
        });
    }
    let k = sft.alphabet_size();
    let mut entries = vec![0.0; k * k];
    for i in 0..k {
        for &j in sft.successors(i) {
            let v = if phi.memory() == 1 {
                phi.value(&[i])
            } else {
                phi.value(&[i, j])
            };
            entries[i * k + j] = v.exp();
        }
    }
    Ok(TransferMatrix { dim: k, entries })
}

/// One-sided power iteration; returns the normalized eigenvector, eigenvalue,
/// relative residual and iteration count.
fn power_iterate(
    l: &TransferMatrix,
    transpose: bool,
    shift: f64,
    start: Vec<f64>,
    settings: SpectralSettings,
) -> Result<(Vec<f64>, f64, f64, usize)> {
    let k = l.dim;
    let mut x = start;
    let mut lx = vec![0.0; k];
    let mut prev = f64::NAN;
    let total: f64 = l.entries.iter().sum();
    let floor = 8.0 * k as f64 * f64::EPSILON * (total + shift);
    let mut residual = f64::INFINITY;
    for iter in 1..=settings.max_iters {
        if transpose {
            l.apply_transpose(&x, &mut lx);
        } else {
            l.apply(&x, &mut lx);
        }
        let sum_lx: f64 = lx.iter().sum();
        // x sums to 1, so this is the 1-norm growth factor.
        let lambda = sum_lx;
        if !(lambda > 0.0) {
            return Err(Error::InvalidArgument(
                "transfer matrix annihilates the positive cone".into(),
            ));
        }
        let xmax = x.iter().fold(0.0, |a: f64, &b| a.max(b));
        residual = lx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - lambda * b).abs())
            .fold(0.0, f64::max)
            / (lambda * xmax);
        let settled = (lambda - prev).abs() <= settings.tol * lambda;
        if settled && residual * lambda * xmax <= settings.tol * lambda * xmax + floor {
            return Ok((x, lambda, residual, iter));
        }
        prev = lambda;
        for (xi, &v) in x.iter_mut().zip(&lx) {
            *xi = (v + shift * *xi) / (sum_lx + shift);
        }
    }
    Err(Error::NotConverged {
        what: "power iteration",
        iterations: settings.max_iters,
        residual,
    })
}

/// Starting vectors from repeated squaring of `L + σI`: the normalized power
/// `(L + σI)^(2^s)` approaches `r l^T`, so its row and column sums give
/// `(r, l)` even when the spectral gap is too small for plain iteration.
/// Each returned vector sums to 1.
fn squaring_start(l: &TransferMatrix, shift: f64) -> (Vec<f64>, Vec<f64>) {
    const MAX_SQUARINGS: usize = 64;
    let k = l.dim;
    let normalize = |m: &mut Vec<f64>| {
        let top = m.iter().fold(0.0, |a: f64, &b| a.max(b));
        m.iter_mut().for_each(|v| *v /= top);
    };
    let mut m = l.entries.clone();
    for i in 0..k {
        m[i * k + i] += shift;
    }
    normalize(&mut m);
    let mut next = vec![0.0; k * k];
    for _ in 0..MAX_SQUARINGS {
        next.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..k {
            for t in 0..k {
                let a = m[i * k + t];
                if a != 0.0 {
                    for j in 0..k {
                        next[i * k + j] += a * m[t * k + j];
                    }
                }
            }
        }
        normalize(&mut next);
        let change = next.iter().zip(&m).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut m, &mut next);
        if change <= 4.0 * f64::EPSILON {
            break;
        }
    }
    let unit = |v: Vec<f64>| {
        let s: f64 = v.iter().sum();
        if s > 0.0 && s.is_finite() {
            v.iter().map(|x| x / s).collect()
        } else {
            vec![1.0 / k as f64; k]
        }
    };
    let rows = (0..k).map(|i| m[i * k..(i + 1) * k].iter().sum()).collect();
    let cols = (0..k).map(|j| (0..k).map(|i| m[i * k + j]).sum()).collect();
    (unit(rows), unit(cols))
}

/// Perron eigendata of an irreducible nonnegative matrix.
///
/// Iterates `L + σI` with `σ` the mean row sum, warm-started from
/// [`squaring_start`]. The shift keeps the same eigenvectors and pushes every
/// other eigenvalue strictly inside the spectral circle, which matters both
/// for periodic supports and for aperiodic ones dominated by a periodic cycle.
pub fn perron_eigendata(l: &TransferMatrix, tol: f64, max_iters: usize) -> Result<SpectralData> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    if l.dim == 0 || l.entries.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidArgument("zero transfer matrix".into()));
    }
    if !l.support()?.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let shift = l.entries.iter().sum::<f64>() / l.dim as f64;
    let settings = SpectralSettings { tol, max_iters };
    let (r0, l0) = squaring_start(l, shift);
    let (mut r, mu_r, res_r, it_r) = power_iterate(l, false, shift, r0, settings)?;
    let (mut left, _mu_l, res_l, it_l) = power_iterate(l, true, shift, l0, settings)?;
    let eigenvalue = mu_r;
    let sr: f64 = r.iter().sum();
    r.iter_mut().for_each(|v| *v /= sr);
    let dot: f64 = left.iter().zip(&r).map(|(a, b)| a * b).sum();
    left.iter_mut().for_each(|v| *v /= dot);
    Ok(SpectralData {
        eigenvalue,
        right_vector: r,
        left_vector: left,
        residual: res_r.max(res_l),
        iterations: it_r.max(it_l),
    })
}

/// `P(phi) = log λ` of the transfer matrix, after recoding to memory at most 2.
pub fn pressure_spectral(sft: &Sft, phi: &LocallyConstantPotential, tol: f64) -> Result<f64> {
    pressure_spectral_with(
        sft,
        phi,
        SpectralSettings {
            tol,
            ..SpectralSettings::default()
        },
        EnumerationCap::default(),
    )
}

pub fn pressure_spectral_with(
    sft: &Sft,
    phi: &LocallyConstantPotential,
    settings: SpectralSettings,
    cap: EnumerationCap,
) -> Result<f64> {
    if !sft.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let recoded = recode_to_memory2(sft, std::slice::from_ref(phi), cap)?;
    let l = build_transfer_matrix(&recoded.sft, &recoded.potentials[0])?;
    let data = perron_eigendata(&l, settings.tol, settings.max_iters)?;
    Ok(data.eigenvalue.ln())
}

/// `(1/n) log Σ exp(S_n phi(w))` over admissible words of length `n + m - 1`.
pub fn pressure_definitional(sft: &Sft, phi: &LocallyConstantPotential, n: usize, cap: EnumerationCap) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !phi.is_defined_over(sft) {
        return Err(Error::InvalidPotential(
            "potential is not defined over the shift".into(),
        ));
    }
    let len = n + phi.memory() - 1;
    let count = sft.count_words(len).unwrap_or(u128::MAX);
    cap.check(count)?;
    let mut total = 0.0;
    sft.for_each_word(len, |w| total += phi.birkhoff_unchecked(w, n).exp());
    Ok(total.ln() / n as f64)
}

/// The one-parameter family `beta -> P(phi - beta psi)` with the recoding and
/// edge values prepared once.
#[derive(Debug, Clone)]
pub struct PressurePencil {
    sft: Sft,
    edges: Vec<(usize, usize)>,
    phi: Vec<f64>,
    psi: Vec<f64>,
    settings: SpectralSettings,
}

impl PressurePencil {
    pub fn new(
        sft: &Sft,
        phi: &LocallyConstantPotential,
        psi: &LocallyConstantPotential,
        settings: SpectralSettings,
        cap: EnumerationCap,
    ) -> Result<Self> {
        if !sft.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let recoded = recode_to_memory2(sft, &[phi.clone(), psi.clone()], cap)?;
        let rs = recoded.sft;
        let edge_value = |p: &LocallyConstantPotential, i: usize, j: usize| {
            if p.memory() == 1 {
                p.value(&[i])
            } else {
                p.value(&[i, j])
            }
        };
        let mut edges = Vec::with_capacity(rs.edge_count());
        let mut phi_vals = Vec::with_capacity(rs.edge_count());
        let mut psi_vals = Vec::with_capacity(rs.edge_count());
        for i in 0..rs.alphabet_size() {
            for &j in rs.successors(i) {
                edges.push((i, j));
                phi_vals.push(edge_value(&recoded.potentials[0], i, j));
                psi_vals.push(edge_value(&recoded.potentials[1], i, j));
            }
        }
        Ok(PressurePencil {
            sft: rs,
            edges,
            phi: phi_vals,
            psi: psi_vals,
            settings,
        })
    }

    /// Shift the matrices live on (the block shift when recoding was needed).
    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn transfer_matrix(&self, beta: f64) -> TransferMatrix {
        let k = self.sft.alphabet_size();
        let mut entries = vec![0.0; k * k];
        for ((&(i, j), &a), &b) in self.edges.iter().zip(&self.phi).zip(&self.psi) {
            entries[i * k + j] = (a - beta * b).exp();
        }
        TransferMatrix { dim: k, entries }
    }

    /// `L(beta) e^{-m}` with `m` the largest exponent, and `m` itself. Allowed
    /// edges that would underflow are clamped to the smallest normal float so
    /// the support stays that of the shift.
    fn scaled_matrix(&self, beta: f64) -> (TransferMatrix, f64) {
        let k = self.sft.alphabet_size();
        let exps: Vec<f64> = self.phi.iter().zip(&self.psi).map(|(a, b)| a - beta * b).collect();
        let m = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut entries = vec![0.0; k * k];
        for (&(i, j), &x) in self.edges.iter().zip(&exps) {
            entries[i * k + j] = (x - m).exp().max(f64::MIN_POSITIVE);
        }
        (TransferMatrix { dim: k, entries }, m)
    }

    /// Eigendata of `L(beta)`. Vectors are computed on the rescaled matrix, so
    /// they stay finite even when the eigenvalue itself overflows.
    pub fn eigendata(&self, beta: f64) -> Result<SpectralData> {
        let (l, m) = self.scaled_matrix(beta);
        let mut data = perron_eigendata(&l, self.settings.tol, self.settings.max_iters)?;
        data.eigenvalue *= m.exp();
        Ok(data)
    }

    /// `P(phi - beta psi)`.
    pub fn pressure(&self, beta: f64) -> Result<f64> {
        let (l, m) = self.scaled_matrix(beta);
        let data = perron_eigendata(&l, self.settings.tol, self.settings.max_iters)?;
        Ok(data.eigenvalue.ln() + m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: f64 = 1.618_033_988_749_895;

    #[test]
    fn transfer_matrix_examples() {
        let full = Sft::full(2).unwrap();
        let zero = LocallyConstantPotential::constant(&full, 0.0).unwrap();
        assert_eq!(
            build_transfer_matrix(&full, &zero).unwrap().rows(),
            vec![vec![1.0, 1.0], vec![1.0, 1.0]]
        );
        let gm = Sft::golden_mean();
        let zero_gm = LocallyConstantPotential::constant(&gm, 0.0).unwrap();
        assert_eq!(
            build_transfer_matrix(&gm, &zero_gm).unwrap().rows(),
            vec![vec![1.0, 1.0], vec![1.0, 0.0]]
        );
        let p = LocallyConstantPotential::from_symbol_values(&full, &[0.3f64.ln(), 0.7f64.ln()]).unwrap();
        let rows = build_transfer_matrix(&full, &p).unwrap().rows();
        assert!((rows[0][0] - 0.3).abs() < 1e-15 && (rows[0][1] - 0.3).abs() < 1e-15);
        assert!((rows[1][0] - 0.7).abs() < 1e-15 && (rows[1][1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn transfer_matrix_rejects_memory3() {
        let full = Sft::full(2).unwrap();
        let p = LocallyConstantPotential::from_fn(&full, 3, |_| 0.0).unwrap();
        assert!(matches!(
            build_transfer_matrix(&full, &p),
            Err(Error::MemoryMismatch { found: 3, max: 2 })
        ));
    }

    #[test]
    fn eigendata_examples() {
        let ones = TransferMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let d = perron_eigendata(&ones, 1e-12, 1000).unwrap();
        assert!((d.eigenvalue - 2.0).abs() < 1e-12);
        for (r, l) in d.right_vector.iter().zip(&d.left_vector) {
            assert!((r - 0.5).abs() < 1e-12);
            assert!((l - 1.0).abs() < 1e-12);
        }

        let gm = TransferMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let d = perron_eigendata(&gm, 1e-12, 1000).unwrap();
        assert!((d.eigenvalue - GOLDEN).abs() < 1e-11);
        assert!(d.residual <= 1e-12);

        let bern = TransferMatrix::from_rows(&[vec![0.3, 0.3], vec![0.7, 0.7]]).unwrap();
        let d = perron_eigendata(&bern, 1e-12, 1000).unwrap();
        assert!((d.eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn periodic_matrix_converges() {
        let swap = TransferMatrix::from_rows(&[vec![0.0, 2.0], vec![0.5, 0.0]]).unwrap();
        let d = perron_eigendata(&swap, 1e-12, 1000).unwrap();
        assert!((d.eigenvalue - 1.0).abs() < 1e-12);
        // three-cycle with unequal weights: λ = (2 * 3 * 0.25)^(1/3)
        let cyc = TransferMatrix::from_rows(&[vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 3.0], vec![0.25, 0.0, 0.0]]).unwrap();
        let d = perron_eigendata(&cyc, 1e-12, 10_000).unwrap();
        assert!((d.eigenvalue - 1.5f64.cbrt()).abs() < 1e-11);
    }

    #[test]
    fn eigendata_errors() {
        let zero = TransferMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(perron_eigendata(&zero, 1e-12, 10).is_err());
        let reducible = TransferMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(perron_eigendata(&reducible, 1e-12, 10), Err(Error::NotIrreducible));
        let gm = TransferMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            perron_eigendata(&gm, 1e-15, 1),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    fn spectral_pressure_examples() {
        let full = Sft::full(2).unwrap();
        let zero = LocallyConstantPotential::constant(&full, 0.0).unwrap();
        assert!((pressure_spectral(&full, &zero, 1e-12).unwrap() - 2f64.ln()).abs() < 1e-12);
        let gm = Sft::golden_mean();
        let zero_gm = LocallyConstantPotential::constant(&gm, 0.0).unwrap();
        assert!((pressure_spectral(&gm, &zero_gm, 1e-12).unwrap() - GOLDEN.ln()).abs() < 1e-11);
        let p = LocallyConstantPotential::from_symbol_values(&full, &[0.3f64.ln(), 0.7f64.ln()]).unwrap();
        assert!(pressure_spectral(&full, &p, 1e-12).unwrap().abs() < 1e-12);
    }

    #[test]
    fn reducible_shift_is_rejected() {
        let tri = Sft::new(&[vec![1, 1], vec![0, 1]]).unwrap();
        let zero = LocallyConstantPotential::constant(&tri, 0.0).unwrap();
        assert_eq!(pressure_spectral(&tri, &zero, 1e-12), Err(Error::NotIrreducible));
    }

    #[test]
    fn definitional_examples() {
        let cap = EnumerationCap::default();
        let full = Sft::full(2).unwrap();
        let zero = LocallyConstantPotential::constant(&full, 0.0).unwrap();
        let v = pressure_definitional(&full, &zero, 10, cap).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-14);

        let gm = Sft::golden_mean();
        let zero_gm = LocallyConstantPotential::constant(&gm, 0.0).unwrap();
        let v = pressure_definitional(&gm, &zero_gm, 12, cap).unwrap();
        assert!((v - 377f64.ln() / 12.0).abs() < 1e-14);
        assert!((v - GOLDEN.ln()).abs() < 0.0132);

        let one = Sft::full(1).unwrap();
        let c = LocallyConstantPotential::constant(&one, -0.4).unwrap();
        for n in 1..6 {
            assert!((pressure_definitional(&one, &c, n, cap).unwrap() + 0.4).abs() < 1e-14);
        }
        assert!(matches!(
            pressure_definitional(&full, &zero, 30, cap),
            Err(Error::CapExceeded { .. })
        ));
    }
}
