//! Parametric state families with their closed-form pairwise fidelity and
//! mean energy, and the builders that expand them in the Fock basis.
//!
//! All parameters are real and nonnegative (phases aligned). Squeezed and
//! negative binomial states are evaluated through `1 - zeta` so that pairs
//! close to the `zeta -> 1` boundary keep full relative precision.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::fock::{self, fidelity_fock, mean_energy, FockVector, WeightSeries};

/// Largest `zeta` accepted by the closed-form operations.
pub const ZETA_MAX_CLOSED: f64 = 1.0 - 1e-15;

/// `zeta` at or above this value is never expanded in the Fock basis.
pub const ZETA_MAX_FOCK: f64 = 1.0 - 1e-9;

/// A family of states together with its fixed hyper-parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Coherent,
    Squeezed,
    NegBin { mu: f64 },
    Binomial { big_m: u32 },
}

impl Family {
    pub fn negbin(mu: f64) -> Result<Self> {
        let f = Family::NegBin { mu };
        f.validate()?;
        Ok(f)
    }

    pub fn binomial(big_m: u32) -> Result<Self> {
        let f = Family::Binomial { big_m };
        f.validate()?;
        Ok(f)
    }

    /// Coherent phase states: negative binomial with `mu = 1`.
    pub fn phase() -> Self {
        Family::NegBin { mu: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::NegBin { mu } if !(mu > 0.0 && mu.is_finite()) => Err(Error::HyperParam(
                format!("mu must be positive and finite, got {mu}"),
            )),
            Family::Binomial { big_m } if big_m < 1 => {
                Err(Error::HyperParam("M must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Coherent => "coherent",
            Family::Squeezed => "squeezed",
            Family::NegBin { .. } => "negbin",
            Family::Binomial { .. } => "binomial",
        }
    }

    /// The hyper-parameter as a real number, if the family has one.
    pub fn hyper(&self) -> Option<f64> {
        match *self {
            Family::NegBin { mu } => Some(mu),
            Family::Binomial { big_m } => Some(big_m as f64),
            _ => None,
        }
    }

    /// The family member with scalar parameter `x` (alpha, zeta or p).
    pub fn member(&self, x: f64) -> Result<FamilyParam> {
        let p = match *self {
            Family::Coherent => FamilyParam::Coherent { alpha: x },
            Family::Squeezed => FamilyParam::Squeezed { zeta: x },
            Family::NegBin { mu } => FamilyParam::NegBin { zeta: x, mu },
            Family::Binomial { big_m } => FamilyParam::Binomial { p: x, big_m },
        };
        p.validate()?;
        Ok(p)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::NegBin { mu } => write!(f, "negbin(mu={mu})"),
            Family::Binomial { big_m } => write!(f, "binomial(M={big_m})"),
            other => f.write_str(other.name()),
        }
    }
}

/// One state from one of the supported families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParam {
    Coherent {
        alpha: f64,
    },
    Squeezed {
        zeta: f64,
    },
    NegBin {
        zeta: f64,
        mu: f64,
    },
    Binomial {
        p: f64,
        big_m: u32,
    },
    /// `sqrt(1 - beta^2)|n> + beta|m>`
    FockPair {
        n: u32,
        m: u32,
        beta: f64,
    },
}

fn check_zeta(zeta: f64) -> Result<()> {
    if !(0.0..=ZETA_MAX_CLOSED).contains(&zeta) {
        return Err(domain(format!("zeta must lie in [0, 1), got {zeta}")));
    }
    Ok(())
}

impl FamilyParam {
    pub fn coherent(alpha: f64) -> Result<Self> {
        Self::Coherent { alpha }.checked()
    }

    pub fn squeezed(zeta: f64) -> Result<Self> {
        Self::Squeezed { zeta }.checked()
    }

    pub fn negbin(zeta: f64, mu: f64) -> Result<Self> {
        Self::NegBin { zeta, mu }.checked()
    }

    pub fn binomial(p: f64, big_m: u32) -> Result<Self> {
        Self::Binomial { p, big_m }.checked()
    }

    pub fn fock_pair(n: u32, m: u32, beta: f64) -> Result<Self> {
        Self::FockPair { n, m, beta }.checked()
    }

    fn checked(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FamilyParam::Coherent { alpha } => {
                if !(alpha >= 0.0 && alpha.is_finite()) {
                    return Err(domain(format!(
                        "alpha must be finite and >= 0, got {alpha}"
                    )));
                }
            }
            FamilyParam::Squeezed { zeta } => check_zeta(zeta)?,
            FamilyParam::NegBin { zeta, mu } => {
                Family::NegBin { mu }.validate()?;
                check_zeta(zeta)?;
            }
            FamilyParam::Binomial { p, big_m } => {
                Family::Binomial { big_m }.validate()?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(domain(format!("p must lie in [0, 1], got {p}")));
                }
            }
            FamilyParam::FockPair { n, m, beta } => {
                if n == m {
                    return Err(domain("Fock pair needs n != m"));
                }
                if !(beta.abs() <= 1.0) {
                    return Err(domain(format!("|beta| must be <= 1, got {beta}")));
                }
            }
        }
        Ok(())
    }

    /// The family and hyper-parameter, or `None` for a Fock pair.
    pub fn family(&self) -> Option<Family> {
        match *self {
            FamilyParam::Coherent { .. } => Some(Family::Coherent),
            FamilyParam::Squeezed { .. } => Some(Family::Squeezed),
            FamilyParam::NegBin { mu, .. } => Some(Family::NegBin { mu }),
            FamilyParam::Binomial { big_m, .. } => Some(Family::Binomial { big_m }),
            FamilyParam::FockPair { .. } => None,
        }
    }
}

// Closed forms written in terms of the complements u = 1 - zeta.

pub(crate) fn squeezed_fidelity_c(u1: f64, u2: f64) -> f64 {
    // 1 - zeta^2 = u (2 - u), 1 - zeta1 zeta2 = u1 + u2 - u1 u2
    let q1 = u1 * (2.0 - u1);
    let q2 = u2 * (2.0 - u2);
    let den = u1 + u2 - u1 * u2;
    ((q1 * q2).sqrt() / den).min(1.0)
}

pub(crate) fn squeezed_energy_c(u: f64) -> f64 {
    let z = 1.0 - u;
    (1.0 + z * z) / (2.0 * u * (2.0 - u))
}

pub(crate) fn negbin_fidelity_c(u1: f64, u2: f64, mu: f64) -> f64 {
    let (z1, z2) = (1.0 - u1, 1.0 - u2);
    let root = (z1 * z2).sqrt();
    // 1 - sqrt(z1 z2) = (1 - z1 z2) / (1 + sqrt(z1 z2))
    let gap = (u1 + u2 - u1 * u2) / (1.0 + root);
    ((u1 / gap) * (u2 / gap)).min(1.0).powf(mu)
}

pub(crate) fn negbin_energy_c(u: f64, mu: f64) -> f64 {
    0.5 + mu * (1.0 - u) / u
}

pub(crate) fn coherent_fidelity(a1: f64, a2: f64) -> f64 {
    let d = a2 - a1;
    (-d * d).exp()
}

pub(crate) fn binomial_fidelity(p1: f64, p2: f64, big_m: u32) -> f64 {
    // Amplitude overlap raised to 2M: the fidelity is the squared overlap.
    let overlap = (p1 * p2).sqrt() + ((1.0 - p1) * (1.0 - p2)).sqrt();
    overlap.min(1.0).powf(2.0 * big_m as f64)
}

/// Closed-form fidelity between two members of the same family.
pub fn fidelity_closed(a: &FamilyParam, b: &FamilyParam) -> Result<f64> {
    a.validate()?;
    b.validate()?;
    use FamilyParam::*;
    let f = match (*a, *b) {
        _ if a == b => 1.0,
        (Coherent { alpha: a1 }, Coherent { alpha: a2 }) => coherent_fidelity(a1, a2),
        (Squeezed { zeta: z1 }, Squeezed { zeta: z2 }) => squeezed_fidelity_c(1.0 - z1, 1.0 - z2),
        (NegBin { zeta: z1, mu: m1 }, NegBin { zeta: z2, mu: m2 }) => {
            if m1 != m2 {
                return Err(Error::FamilyMismatch(format!("mu differs: {m1} vs {m2}")));
            }
            negbin_fidelity_c(1.0 - z1, 1.0 - z2, m1)
        }
        (Binomial { p: p1, big_m: m1 }, Binomial { p: p2, big_m: m2 }) => {
            if m1 != m2 {
                return Err(Error::FamilyMismatch(format!("M differs: {m1} vs {m2}")));
            }
            binomial_fidelity(p1, p2, m1)
        }
        (
            FockPair {
                n: n1,
                m: m1,
                beta: b1,
            },
            FockPair {
                n: n2,
                m: m2,
                beta: b2,
            },
        ) => {
            if (n1, m1) != (n2, m2) {
                return Err(Error::FamilyMismatch(
                    "Fock pairs on different levels".into(),
                ));
            }
            let overlap = ((1.0 - b1 * b1) * (1.0 - b2 * b2)).sqrt() + b1 * b2;
            (overlap * overlap).min(1.0)
        }
        _ => {
            return Err(Error::FamilyMismatch(format!(
                "cannot compare {:?} with {:?}",
                a.family(),
                b.family()
            )))
        }
    };
    Ok(f)
}

/// Closed-form mean energy `1/2 + <n>`.
pub fn energy_closed(param: &FamilyParam) -> Result<f64> {
    param.validate()?;
    Ok(match *param {
        FamilyParam::Coherent { alpha } => 0.5 + alpha * alpha,
        FamilyParam::Squeezed { zeta } => squeezed_energy_c(1.0 - zeta),
        FamilyParam::NegBin { zeta, mu } => negbin_energy_c(1.0 - zeta, mu),
        FamilyParam::Binomial { p, big_m } => 0.5 + big_m as f64 * p,
        FamilyParam::FockPair { n, m, beta } => {
            let b2 = beta * beta;
            0.5 + (1.0 - b2) * n as f64 + b2 * m as f64
        }
    })
}

/// Expands `param` in the Fock basis with the cap from [`fock::max_cutoff`].
pub fn build_state(param: &FamilyParam) -> Result<FockVector> {
    build_state_capped(param, fock::max_cutoff())
}

/// Expands `param` in the Fock basis, truncating once the missing mass and
/// first moment are both below [`fock::TAIL_TOL`].
pub fn build_state_capped(param: &FamilyParam, cap: usize) -> Result<FockVector> {
    param.validate()?;
    match *param {
        FamilyParam::Coherent { alpha } => {
            if alpha == 0.0 {
                return Ok(FockVector::vacuum());
            }
            let a2 = alpha * alpha;
            let la2 = a2.ln();
            let lr = move |k: usize| la2 - ((k + 1) as f64).ln();
            let sup = move |k: usize| a2 / (k + 1) as f64;
            WeightSeries {
                stride: 1,
                log_w0: -a2,
                log_ratio: &lr,
                ratio_sup: &sup,
                last: None,
            }
            .build(cap)
        }
        FamilyParam::Squeezed { zeta } => {
            check_fock_zeta(zeta, cap)?;
            if zeta == 0.0 {
                return Ok(FockVector::vacuum());
            }
            let z2 = zeta * zeta;
            let lz2 = z2.ln();
            let u = 1.0 - zeta;
            // w_k = c_{2k}^2, ratio zeta^2 (2k+1)/(2k+2)
            let lr = move |k: usize| lz2 + ((2 * k + 1) as f64).ln() - ((2 * k + 2) as f64).ln();
            let sup = move |_k: usize| z2;
            WeightSeries {
                stride: 2,
                log_w0: 0.5 * (u * (2.0 - u)).ln(),
                log_ratio: &lr,
                ratio_sup: &sup,
                last: None,
            }
            .build(cap)
        }
        FamilyParam::NegBin { zeta, mu } => {
            check_fock_zeta(zeta, cap)?;
            if zeta == 0.0 {
                return Ok(FockVector::vacuum());
            }
            let lz = zeta.ln();
            let lr = move |k: usize| lz + (mu + k as f64).ln() - ((k + 1) as f64).ln();
            let sup = move |k: usize| zeta * ((mu + k as f64) / (k + 1) as f64).max(1.0);
            WeightSeries {
                stride: 1,
                log_w0: mu * (1.0 - zeta).ln(),
                log_ratio: &lr,
                ratio_sup: &sup,
                last: None,
            }
            .build(cap)
        }
        FamilyParam::Binomial { p, big_m } => {
            let m = big_m as usize;
            if m > cap {
                return Err(Error::CutoffExceeded {
                    cap,
                    reason: format!("M = {m} exceeds the cap"),
                });
            }
            if p == 0.0 || p == 1.0 {
                let mut c = vec![0.0; m + 1];
                c[if p == 0.0 { 0 } else { m }] = 1.0;
                return FockVector::new(c);
            }
            let lodds = p.ln() - (1.0 - p).ln();
            let mf = big_m as f64;
            let lr = move |k: usize| lodds + (mf - k as f64).ln() - ((k + 1) as f64).ln();
            let sup = |_k: usize| f64::INFINITY;
            WeightSeries {
                stride: 1,
                log_w0: mf * (1.0 - p).ln(),
                log_ratio: &lr,
                ratio_sup: &sup,
                last: Some(m),
            }
            .build(cap)
        }
        FamilyParam::FockPair { n, m, beta } => {
            let (n, m) = (n as usize, m as usize);
            let top = n.max(m);
            if top > cap {
                return Err(Error::CutoffExceeded {
                    cap,
                    reason: format!("level {top} exceeds the cap"),
                });
            }
            let mut c = vec![0.0; top + 1];
            c[n] = (1.0 - beta * beta).sqrt();
            c[m] = beta;
            FockVector::new(c)
        }
    }
}

fn check_fock_zeta(zeta: f64, cap: usize) -> Result<()> {
    if zeta >= ZETA_MAX_FOCK {
        return Err(Error::CutoffExceeded {
            cap,
            reason: format!("zeta = {zeta} too close to 1 for a Fock expansion"),
        });
    }
    Ok(())
}

/// Fidelity and energy gap between `|n>` and `sqrt(1 - beta^2)|n> + beta|m>`,
/// both computed from the explicit number-state expansion.
///
/// The energy gap is `beta^2 (m - n)`; the fidelity `1 - beta^2` does not
/// depend on `m`.
pub fn fock_pair_tradeoff(n: u32, m: u32, beta: f64) -> Result<(f64, f64)> {
    let pair = FamilyParam::fock_pair(n, m, beta)?;
    let cap = (n.max(m) as usize).max(1);
    let base = FockVector::number_state(n as usize);
    let mixed = build_state_capped(&pair, cap)?;
    Ok((
        fidelity_fock(&base, &mixed),
        mean_energy(&mixed) - mean_energy(&base),
    ))
}

/// The gap expression `beta*m - (1 - sqrt(1 - beta^2))*n`, kept only for
/// comparison with [`fock_pair_tradeoff`]; it does not match the expectation
/// value of the number operator in the mixed state.
pub fn fock_pair_delta_e_linear_form(n: u32, m: u32, beta: f64) -> f64 {
    beta * m as f64 - (1.0 - (1.0 - beta * beta).sqrt()) * n as f64
}
