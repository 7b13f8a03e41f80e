//! Closed-form maximal fidelity at a fixed energy gap.
//!
//! Every bound is keyed on the symmetric gap `Y = |E2 - E1| / sqrt(E1 E2)`,
//! which is invariant under exchanging the two states. The relative gap
//! `E = (E2 - E1) / E1` maps to `Y` through [`y_from_e`] and back through
//! [`e_from_y`] once a sign is chosen.

use std::fmt;

use crate::error::{domain, Result};
use crate::families::Family;

/// Sign of the relative energy gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn of(rel: f64) -> Self {
        if rel < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

/// An energy gap expressed both ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyGap {
    /// `E = (E2 - E1) / E1`, always `> -1`.
    pub rel: f64,
    /// `Y = |E| / sqrt(1 + E)`.
    pub sym: f64,
    pub sign: Sign,
}

impl EnergyGap {
    pub fn from_rel(rel: f64) -> Result<Self> {
        Ok(Self {
            rel,
            sym: y_from_e(rel)?,
            sign: Sign::of(rel),
        })
    }

    pub fn from_sym(sym: f64, sign: Sign) -> Result<Self> {
        Ok(Self {
            rel: e_from_y(sym, sign)?,
            sym,
            sign,
        })
    }

    /// Absolute gap `E2 - E1` for a first-state energy `e1`.
    pub fn delta_e(&self, e1: f64) -> f64 {
        self.rel * e1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// The maximum sits inside the parameter domain.
    Interior,
    /// The maximum is a supremum approached as `zeta -> 1`.
    BoundarySupremum,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Interior => "interior",
            Branch::BoundarySupremum => "boundary-supremum",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub f_max: f64,
    /// Maximizing first-state parameter, or `1` for a boundary supremum.
    pub extremal_param: f64,
    pub branch: Branch,
}

/// `Y = |E| / sqrt(1 + E)`.
pub fn y_from_e(rel: f64) -> Result<f64> {
    if !(rel > -1.0) || !rel.is_finite() {
        return Err(domain(format!(
            "relative energy gap must be finite and > -1, got {rel}"
        )));
    }
    Ok(rel.abs() / (1.0 + rel).sqrt())
}

/// Inverse of [`y_from_e`] on the branch with the given sign.
///
/// Both branches are roots of `E^2 = Y^2 (1 + E)`; the negative one is taken
/// as `-Y^2 / E_+` to avoid cancellation.
pub fn e_from_y(sym: f64, sign: Sign) -> Result<f64> {
    if !(sym >= 0.0) || !sym.is_finite() {
        return Err(domain(format!(
            "symmetric energy gap must be finite and >= 0, got {sym}"
        )));
    }
    let root = (1.0 + 0.25 * sym * sym).sqrt();
    match sign {
        Sign::Positive => Ok(sym * root + 0.5 * sym * sym),
        Sign::Negative => {
            let e = -sym / (root + 0.5 * sym);
            if e <= -1.0 {
                return Err(domain(format!(
                    "Y = {sym} has no representable negative branch"
                )));
            }
            Ok(e)
        }
    }
}

/// Largest `Y` reachable within binomial states of order `M`.
pub fn binomial_y_limit(big_m: u32) -> f64 {
    let m = big_m as f64;
    2.0 * m / (2.0 * m + 1.0).sqrt()
}

/// Relative gaps reachable within binomial states: `[-2M/(2M+1), 2M]`.
pub fn binomial_rel_range(big_m: u32) -> (f64, f64) {
    let m = big_m as f64;
    (-2.0 * m / (2.0 * m + 1.0), 2.0 * m)
}

/// `(1 + (2mu - 1) Y^2 / (4 mu^2))^(-mu)` for any real `mu != 0`.
///
/// For `mu >= 1` this is the negative binomial bound; at `mu = -M` it
/// reproduces the binomial bound.
pub fn negbin_bound_expression(mu: f64, sym: f64) -> f64 {
    let base = 1.0 + (2.0 * mu - 1.0) * sym * sym / (4.0 * mu * mu);
    base.powf(-mu)
}

fn check_sym(family: &Family, sym: f64) -> Result<()> {
    family.validate()?;
    if !(sym >= 0.0) || !sym.is_finite() {
        return Err(domain(format!(
            "symmetric energy gap must be finite and >= 0, got {sym}"
        )));
    }
    if let Family::Binomial { big_m } = *family {
        let lim = binomial_y_limit(big_m);
        if sym > lim {
            return Err(domain(format!(
                "binomial M = {big_m} allows Y <= {lim}, got {sym}"
            )));
        }
    }
    Ok(())
}

fn check_rel(family: &Family, rel: f64) -> Result<()> {
    family.validate()?;
    y_from_e(rel)?;
    if let Family::Binomial { big_m } = *family {
        let (lo, hi) = binomial_rel_range(big_m);
        if rel < lo || rel > hi {
            return Err(domain(format!(
                "binomial M = {big_m} allows relative gaps in [{lo}, {hi}], got {rel}"
            )));
        }
    }
    Ok(())
}

/// Whether the family's maximum is only approached at `zeta -> 1`.
pub fn branch_of(family: &Family) -> Branch {
    match *family {
        Family::Squeezed => Branch::BoundarySupremum,
        Family::NegBin { mu } if mu <= 1.0 => Branch::BoundarySupremum,
        _ => Branch::Interior,
    }
}

fn fmax_value(family: &Family, sym: f64) -> f64 {
    let y2 = sym * sym;
    match *family {
        Family::Coherent => (-0.5 * y2).exp(),
        Family::Squeezed => (1.0 + 0.25 * y2).sqrt().recip(),
        Family::NegBin { mu: 1.0 } => (1.0 + 0.25 * y2).recip(),
        Family::NegBin { mu } if mu > 1.0 => {
            (-mu * ((2.0 * mu - 1.0) * y2 / (4.0 * mu * mu)).ln_1p()).exp()
        }
        Family::NegBin { mu } => (-mu * (0.25 * y2).ln_1p()).exp(),
        Family::Binomial { big_m } => {
            let m = big_m as f64;
            let a = ((2.0 * m + 1.0) * y2 / (4.0 * m * m)).min(1.0);
            (m * (-a).ln_1p()).exp()
        }
    }
}

/// Maximal fidelity within `family` at symmetric gap `sym`.
///
/// The extremal parameter is the one for the positive relative gap
/// `e_from_y(sym, Positive)`; use [`fmax_for_rel`] for a specific sign.
pub fn fmax(family: &Family, sym: f64) -> Result<BoundResult> {
    check_sym(family, sym)?;
    let mut rel = e_from_y(sym, Sign::Positive)?;
    if let Family::Binomial { big_m } = *family {
        // sym is in range; only the conversion can round past the end.
        rel = rel.min(binomial_rel_range(big_m).1);
    }
    let (extremal_param, branch) = extremal_param(family, rel)?;
    Ok(BoundResult {
        f_max: fmax_value(family, sym),
        extremal_param,
        branch,
    })
}

/// [`fmax`] keyed on the relative gap, with the extremal parameter for that sign.
pub fn fmax_for_rel(family: &Family, rel: f64) -> Result<BoundResult> {
    check_rel(family, rel)?;
    let sym = y_from_e(rel)?;
    check_sym(family, sym)?;
    let (extremal_param, branch) = extremal_param(family, rel)?;
    Ok(BoundResult {
        f_max: fmax_value(family, sym),
        extremal_param,
        branch,
    })
}

/// Largest `Y` compatible with fidelity `f`: the exact inverse of [`fmax`].
pub fn ymax_for_fidelity(family: &Family, f: f64) -> Result<f64> {
    family.validate()?;
    if !(f > 0.0 && f <= 1.0) {
        return Err(domain(format!("fidelity must lie in (0, 1], got {f}")));
    }
    let lf = f.ln();
    Ok(match *family {
        Family::Coherent => (-2.0 * lf).sqrt(),
        Family::Squeezed => 2.0 * (-2.0 * lf).exp_m1().sqrt(),
        Family::NegBin { mu } if mu >= 1.0 => {
            2.0 * mu * ((-lf / mu).exp_m1() / (2.0 * mu - 1.0)).sqrt()
        }
        Family::NegBin { mu } => 2.0 * (-lf / mu).exp_m1().sqrt(),
        Family::Binomial { big_m } => {
            let m = big_m as f64;
            2.0 * m * (-(lf / m).exp_m1() / (2.0 * m + 1.0)).sqrt()
        }
    })
}

/// Location of the maximum over the first-state parameter at relative gap `rel`.
pub fn extremal_param(family: &Family, rel: f64) -> Result<(f64, Branch)> {
    check_rel(family, rel)?;
    let branch = branch_of(family);
    let value = match *family {
        Family::Coherent => (2.0 * (1.0 + rel)).sqrt().recip(),
        Family::Squeezed => 1.0,
        Family::NegBin { mu } if mu <= 1.0 => 1.0,
        Family::NegBin { mu } => {
            let e_mu = rel / (2.0 * mu);
            let kappa = 2.0 * mu - 1.0;
            (1.0 + e_mu) / (kappa * (1.0 + e_mu * kappa))
        }
        Family::Binomial { big_m } => {
            let m = big_m as f64;
            (2.0 * m - rel) / (4.0 * m * (m + 1.0) * (1.0 + rel))
        }
    };
    Ok((value, branch))
}

/// Coefficients of `A^2 zeta^2 + 2 B zeta + C^2 = 0`, the condition for the
/// bracketed base of the negative binomial fidelity to equal `beta` at fixed
/// `e_mu = E / (2 mu)` and `kappa = 2 mu - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegBinQuadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl NegBinQuadratic {
    pub fn new(beta: f64, e_mu: f64, kappa: f64) -> Self {
        let b2 = beta * beta;
        let gk = 1.0 + e_mu * kappa;
        let g1 = 1.0 + e_mu;
        Self {
            a: b2 * gk - 1.0,
            c: b2 * g1 - 1.0,
            b: b2 * b2 * gk * g1 - b2 * e_mu * (1.0 + kappa) - 1.0,
        }
    }

    pub fn residual(&self, zeta: f64) -> f64 {
        self.a * self.a * zeta * zeta + 2.0 * self.b * zeta + self.c * self.c
    }
}

/// `beta_*^2`, the value at which the quadratic has a double root with `B = -AC`.
pub fn negbin_beta_star_sq(e_mu: f64, kappa: f64) -> f64 {
    (1.0 + e_mu * (1.0 + kappa)) / ((1.0 + e_mu) * (1.0 + e_mu * kappa))
}

/// The double root `zeta_* = C / A` at `beta = beta_*`.
pub fn negbin_zeta_star(e_mu: f64, kappa: f64) -> f64 {
    (1.0 + e_mu) / (kappa * (1.0 + e_mu * kappa))
}
