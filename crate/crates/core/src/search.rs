//! Brute-force maximization of the pairwise fidelity at a fixed relative
//! energy gap, used as an oracle for [`crate::bounds`].
//!
//! The second state is eliminated through the energy constraint, leaving a
//! one-dimensional problem in the first-state parameter. The objective uses
//! only the pairwise closed forms from [`crate::families`]; nothing here
//! reads the bound formulas except to fill in the comparison columns of the
//! report.

use crate::bounds::{self, binomial_rel_range, Branch, Sign};
use crate::error::{domain, Error, Result};
use crate::families::{
    binomial_fidelity, coherent_fidelity, negbin_fidelity_c, squeezed_fidelity_c, Family,
    ZETA_MAX_CLOSED,
};

/// Interior maxima must agree with the closed form to this absolute gap.
pub const INTERIOR_F_TOL: f64 = 1e-8;
/// Interior maximizers must agree with the closed form to this distance.
pub const INTERIOR_PARAM_TOL: f64 = 1e-5;
/// The value at `zeta = 1 - 1e-8` must be this close to a boundary supremum.
pub const BOUNDARY_F_TOL: f64 = 1e-6;
/// The oracle may exceed the closed form by at most this much.
pub const ORACLE_EXCESS_TOL: f64 = 1e-9;
/// Slack, relative to the value, when checking the boundary approach is nondecreasing.
pub const MONOTONE_SLACK: f64 = 4.0 * f64::EPSILON;
/// Number of points `zeta = 1 - 10^-k`, `k = 1..=BOUNDARY_STEPS`, in the boundary sub-grid.
pub const BOUNDARY_STEPS: i32 = 8;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub coarse_points: usize,
    /// Bracket width at which golden-section refinement stops.
    pub refine_tol: f64,
    /// Distance kept from an open domain end (`zeta < 1`).
    pub boundary_margin: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            coarse_points: 10_001,
            refine_tol: 1e-12,
            boundary_margin: 1e-9,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_points < 3 {
            return Err(domain("grid needs at least 3 coarse points"));
        }
        if !(self.refine_tol > 0.0 && self.refine_tol < 1.0) {
            return Err(domain("refine_tol must lie in (0, 1)"));
        }
        if !(self.boundary_margin > 0.0 && self.boundary_margin < 1e-3) {
            return Err(domain("boundary_margin must lie in (0, 1e-3)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub family: Family,
    pub rel: f64,
    pub f_closed: f64,
    pub f_oracle: f64,
    pub param_closed: f64,
    pub param_oracle: f64,
    pub abs_gap: f64,
    pub branch: Branch,
    pub grid: GridSpec,
    /// Coarse points skipped because the partner left the family domain.
    pub infeasible_points: usize,
    /// `(zeta, fidelity)` at `zeta = 1 - 10^-k`; empty for interior branches.
    pub boundary_approach: Vec<(f64, f64)>,
    pub boundary_monotone: bool,
}

impl VerifyReport {
    /// Fidelity at the point of the boundary sub-grid closest to `zeta = 1`.
    pub fn boundary_tip(&self) -> Option<f64> {
        self.boundary_approach.last().map(|&(_, f)| f)
    }

    /// Whether the oracle confirms the closed form at the pinned tolerances,
    /// or at `tol` in place of the fidelity tolerance when given.
    pub fn passes_with(&self, tol: Option<f64>) -> bool {
        if self.f_oracle > self.f_closed + ORACLE_EXCESS_TOL {
            return false;
        }
        match self.branch {
            Branch::Interior => {
                let param_ok = self.rel == 0.0
                    || (self.param_oracle - self.param_closed).abs() <= INTERIOR_PARAM_TOL;
                self.abs_gap <= tol.unwrap_or(INTERIOR_F_TOL) && param_ok
            }
            Branch::BoundarySupremum => {
                let tip_ok = self
                    .boundary_tip()
                    .is_some_and(|f| (f - self.f_closed).abs() <= tol.unwrap_or(BOUNDARY_F_TOL));
                tip_ok && self.boundary_monotone
            }
        }
    }

    pub fn passes(&self) -> bool {
        self.passes_with(None)
    }
}

/// A first-state parameter together with its complement `1 - x`, kept
/// separately so `zeta` near one is represented exactly.
#[derive(Debug, Clone, Copy)]
struct Point {
    x: f64,
    comp: f64,
}

impl Point {
    fn at(x: f64) -> Self {
        Self { x, comp: 1.0 - x }
    }
}

fn check_rel(family: &Family, rel: f64) -> Result<()> {
    family.validate()?;
    bounds::y_from_e(rel)?;
    if let Family::Binomial { big_m } = *family {
        let (lo, hi) = binomial_rel_range(big_m);
        if rel < lo || rel > hi {
            return Err(domain(format!(
                "relative gap {rel} outside binomial range [{lo}, {hi}]"
            )));
        }
    }
    Ok(())
}

/// Partner of `first` at relative gap `rel`, as `(value, complement)`.
fn partner(family: &Family, first: Point, rel: f64) -> Option<Point> {
    match *family {
        Family::Coherent => {
            let a2 = first.x * first.x * (1.0 + rel) + 0.5 * rel;
            (a2 >= 0.0).then(|| Point::at(a2.sqrt()))
        }
        Family::Squeezed => {
            let u = first.comp;
            let q = u * (2.0 - u); // 1 - zeta^2
            let z = 1.0 - q;
            let e = 0.5 * rel;
            let den = 1.0 + e * (1.0 + z);
            let num = z + e * (1.0 + z);
            if !(den > 0.0 && num >= 0.0) {
                return None;
            }
            let z2 = num / den;
            let q2 = q / den;
            let zeta2 = z2.sqrt();
            Some(Point {
                x: zeta2,
                comp: q2 / (1.0 + zeta2),
            })
        }
        Family::NegBin { mu } => {
            let kappa = 2.0 * mu - 1.0;
            let t = rel / (2.0 * mu) * (1.0 + kappa * first.x);
            let den = 1.0 + t;
            let num = first.x + t;
            if !(den > 0.0 && num >= 0.0) {
                return None;
            }
            Some(Point {
                x: num / den,
                comp: first.comp / den,
            })
        }
        Family::Binomial { big_m } => {
            let p2 = first.x * (1.0 + rel) + rel / (2.0 * big_m as f64);
            (0.0..=1.0).contains(&p2).then(|| Point::at(p2))
        }
    }
}

fn pair_fidelity(family: &Family, a: Point, b: Point) -> f64 {
    match *family {
        Family::Coherent => coherent_fidelity(a.x, b.x),
        Family::Squeezed => squeezed_fidelity_c(a.comp, b.comp),
        Family::NegBin { mu } => negbin_fidelity_c(a.comp, b.comp, mu),
        Family::Binomial { big_m } => binomial_fidelity(a.x, b.x, big_m),
    }
}

fn objective(family: &Family, first: Point, rel: f64) -> Option<f64> {
    let second = partner(family, first, rel)?;
    if matches!(family, Family::Squeezed | Family::NegBin { .. }) && !(second.comp > 0.0) {
        return None;
    }
    Some(pair_fidelity(family, first, second))
}

/// Second-state parameter giving exactly relative gap `rel` from `param1`.
pub fn constrained_partner(family: &Family, param1: f64, rel: f64) -> Result<f64> {
    check_rel(family, rel)?;
    family.member(param1)?;
    let out = partner(family, Point::at(param1), rel).ok_or_else(|| {
        Error::PartnerOutOfDomain(format!("{family} with parameter {param1} at gap {rel}"))
    })?;
    let in_domain = match family {
        Family::Squeezed | Family::NegBin { .. } => out.x <= ZETA_MAX_CLOSED && out.comp > 0.0,
        _ => true,
    };
    if !in_domain {
        return Err(Error::PartnerOutOfDomain(format!(
            "partner zeta {} of {param1} at gap {rel} rounds to the boundary",
            out.x
        )));
    }
    Ok(out.x)
}

fn search_interval(family: &Family, rel: f64, grid: &GridSpec) -> (f64, f64) {
    match family {
        // No natural upper end: the fidelity at fixed gap decays once alpha
        // outgrows the energy scale set by 1 + rel.
        Family::Coherent => (0.0, 10.0 * (1.0 + rel).sqrt().recip().max(1.0)),
        Family::Squeezed | Family::NegBin { .. } => (0.0, 1.0 - grid.boundary_margin),
        Family::Binomial { .. } => (0.0, 1.0),
    }
}

struct Best {
    x: f64,
    f: f64,
}

impl Best {
    fn offer(&mut self, x: f64, f: f64) {
        if f > self.f || (f == self.f && x < self.x) {
            self.x = x;
            self.f = f;
        }
    }
}

/// Maximizes the fidelity over the first-state parameter at relative gap
/// `rel` and compares the result with [`bounds::fmax_for_rel`].
pub fn oracle_max_fidelity(family: &Family, rel: f64, grid: &GridSpec) -> Result<VerifyReport> {
    check_rel(family, rel)?;
    grid.validate()?;
    let closed = bounds::fmax_for_rel(family, rel)?;

    let (lo, hi) = search_interval(family, rel, grid);
    let n = grid.coarse_points;
    let step = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect();
    let vals: Vec<Option<f64>> = xs
        .iter()
        .map(|&x| objective(family, Point::at(x), rel))
        .collect();
    let infeasible_points = vals.iter().filter(|v| v.is_none()).count();

    let mut best_i = None;
    for (i, v) in vals.iter().enumerate() {
        if let Some(f) = *v {
            if best_i.is_none_or(|j: usize| f > vals[j].unwrap()) {
                best_i = Some(i);
            }
        }
    }
    let i = best_i.ok_or_else(|| Error::NoFeasiblePoint(format!("{family} at gap {rel}")))?;
    let mut best = Best {
        x: xs[i],
        f: vals[i].unwrap(),
    };

    let eval = |x: f64| objective(family, Point::at(x), rel).unwrap_or(f64::NEG_INFINITY);
    let (mut a, mut b) = (xs[i.saturating_sub(1)], xs[(i + 1).min(n - 1)]);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    while b - a > grid.refine_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d);
        }
        best.offer(c, fc);
        best.offer(d, fd);
    }

    let mut boundary_approach = Vec::new();
    let mut boundary_monotone = true;
    if closed.branch == Branch::BoundarySupremum {
        for k in 1..=BOUNDARY_STEPS {
            let comp = 10f64.powi(-k);
            let p = Point {
                x: 1.0 - comp,
                comp,
            };
            let Some(f) = objective(family, p, rel) else {
                boundary_monotone = false;
                continue;
            };
            if let Some(&(_, prev)) = boundary_approach.last() {
                if f < prev - MONOTONE_SLACK * prev {
                    boundary_monotone = false;
                }
            }
            boundary_approach.push((p.x, f));
            best.offer(p.x, f);
        }
    }

    Ok(VerifyReport {
        family: *family,
        rel,
        f_closed: closed.f_max,
        f_oracle: best.f,
        param_closed: closed.extremal_param,
        param_oracle: best.x,
        abs_gap: (closed.f_max - best.f).abs(),
        branch: closed.branch,
        grid: *grid,
        infeasible_points,
        boundary_approach,
        boundary_monotone,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRecord {
    pub sym: f64,
    /// Relative gap on the positive branch.
    pub rel_pos: f64,
    pub f_max: f64,
    pub extremal_param: f64,
    pub branch: Branch,
}

/// Closed-form bound at each symmetric gap in `sym_values`.
pub fn scan_tradeoff(family: &Family, sym_values: &[f64]) -> Result<Vec<ScanRecord>> {
    sym_values
        .iter()
        .map(|&sym| {
            let r = bounds::fmax(family, sym)?;
            Ok(ScanRecord {
                sym,
                rel_pos: bounds::e_from_y(sym, Sign::Positive)?,
                f_max: r.f_max,
                extremal_param: r.extremal_param,
                branch: r.branch,
            })
        })
        .collect()
}
