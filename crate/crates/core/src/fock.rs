//! Truncated Fock-space states.
//!
//! A [`FockVector`] holds real amplitudes `c_n` over number states `|0>..|N>`.
//! Everything here is computed from the amplitudes alone, so this module is the
//! first-principles reference for the closed forms in [`crate::families`].

use crate::error::{Error, Result};

/// Largest missing probability mass allowed in a truncated state.
pub const TAIL_TOL: f64 = 1e-12;

/// Tail bound the builders aim for when the cap allows it. Amplitudes below
/// `sqrt(TAIL_TARGET)` are beneath double precision relative to 1.
pub const TAIL_TARGET: f64 = 1e-32;

/// Default hard cap on the Fock cutoff index.
pub const DEFAULT_MAX_CUTOFF: usize = 4096;

/// Environment variable that overrides [`DEFAULT_MAX_CUTOFF`].
pub const MAX_CUTOFF_ENV: &str = "FIDBOUND_MAX_CUTOFF";

/// Current cutoff cap: `FIDBOUND_MAX_CUTOFF` if set to a positive integer, else 4096.
pub fn max_cutoff() -> usize {
    std::env::var(MAX_CUTOFF_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_CUTOFF)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coeffs: Vec<f64>,
}

impl FockVector {
    /// Wraps amplitudes `c_0..c_N`, checking finiteness and that the norm lies
    /// within [`TAIL_TOL`] of one.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidState("no coefficients".into()));
        }
        if let Some(n) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidState(format!(
                "non-finite amplitude at n = {n}"
            )));
        }
        let norm: f64 = coeffs.iter().map(|c| c * c).sum();
        if (norm - 1.0).abs() > TAIL_TOL {
            return Err(Error::InvalidState(format!(
                "norm {norm:.15} outside 1 +/- {TAIL_TOL:e}"
            )));
        }
        Ok(Self { coeffs })
    }

    /// The number state `|n>`.
    pub fn number_state(n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Self { coeffs }
    }

    pub fn vacuum() -> Self {
        Self::number_state(0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Largest stored photon number.
    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Photon-number probabilities `c_n^2`.
    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.coeffs.iter().map(|c| c * c)
    }
}

/// Squared overlap of two pure states, `(sum_n a_n b_n)^2`.
///
/// The shorter vector is treated as zero-padded.
pub fn fidelity_fock(a: &FockVector, b: &FockVector) -> f64 {
    let overlap: f64 = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * y).sum();
    (overlap * overlap).min(1.0)
}

/// Mean oscillator energy `1/2 + <n>` in units of the quantum.
pub fn mean_energy(a: &FockVector) -> f64 {
    0.5 + photon_moments(a).0
}

/// Mean and variance of the photon number.
pub fn photon_moments(a: &FockVector) -> (f64, f64) {
    let (mut m1, mut m2) = (0.0, 0.0);
    for (n, p) in a.probabilities().enumerate() {
        let n = n as f64;
        m1 += n * p;
        m2 += n * n * p;
    }
    (m1, m2 - m1 * m1)
}

/// Mandel's `Q = Var(n)/<n> - 1`. Undefined for the vacuum.
pub fn mandel_q(a: &FockVector) -> Result<f64> {
    let (mean, var) = photon_moments(a);
    if mean <= 0.0 {
        return Err(Error::Domain(
            "Mandel Q undefined for zero mean photon number".into(),
        ));
    }
    Ok(var / mean - 1.0)
}

/// True when `Q > 1 + 2<n>`, the regime beyond squeezed-vacuum statistics.
pub fn is_hyper_poissonian(a: &FockVector) -> Result<bool> {
    let q = mandel_q(a)?;
    let (mean, _) = photon_moments(a);
    Ok(q > 1.0 + 2.0 * mean)
}

/// Description of a nonnegative series `w_k = c_{k*stride}^2` generated by its
/// log-ratios, used to build states with an adaptive cutoff.
pub(crate) struct WeightSeries<'a> {
    /// Photon-number step between consecutive nonzero terms.
    pub stride: usize,
    /// `ln w_0`.
    pub log_w0: f64,
    /// `ln(w_{k+1} / w_k)`.
    pub log_ratio: &'a dyn Fn(usize) -> f64,
    /// An upper bound on `w_{j+1} / w_j` for every `j >= k`.
    pub ratio_sup: &'a dyn Fn(usize) -> f64,
    /// Index of the last term for finite series.
    pub last: Option<usize>,
}

impl WeightSeries<'_> {
    /// Sums terms until a geometric bound puts both the missing mass and the
    /// missing first moment below [`TAIL_TARGET`]. If the cap comes first, the
    /// truncation is accepted as long as both bounds are under [`TAIL_TOL`].
    pub(crate) fn build(&self, cap: usize) -> Result<FockVector> {
        let mut weights: Vec<f64> = Vec::new();
        let mut lw = self.log_w0;
        let mut k = 0usize;
        let mut tail_ok = false;
        loop {
            let index = k * self.stride;
            if index > cap {
                if tail_ok {
                    break;
                }
                let mass: f64 = weights.iter().sum();
                return Err(Error::CutoffExceeded {
                    cap,
                    reason: format!("tail mass {:.3e} remains", (1.0 - mass).max(0.0)),
                });
            }
            weights.push(lw.exp());
            if self.last == Some(k) {
                break;
            }
            let lw_next = lw + (self.log_ratio)(k);
            let w_next = lw_next.exp();
            let r = (self.ratio_sup)(k + 1);
            if r < 1.0 {
                let s = self.stride as f64;
                let tail_mass = w_next / (1.0 - r);
                let tail_moment =
                    s * w_next * ((k + 1) as f64 / (1.0 - r) + r / ((1.0 - r) * (1.0 - r)));
                if tail_mass < TAIL_TARGET && tail_moment < TAIL_TARGET {
                    break;
                }
                tail_ok = tail_mass < TAIL_TOL && tail_moment < TAIL_TOL;
            } else {
                tail_ok = false;
            }
            lw = lw_next;
            k += 1;
        }
        let mut coeffs = vec![0.0; (weights.len() - 1) * self.stride + 1];
        for (k, w) in weights.into_iter().enumerate() {
            coeffs[k * self.stride] = w.sqrt();
        }
        FockVector::new(coeffs)
    }
}
