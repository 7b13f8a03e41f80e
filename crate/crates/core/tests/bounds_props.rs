use approx::assert_abs_diff_eq;
use fidbound::bounds::{
    binomial_rel_range, binomial_y_limit, e_from_y, extremal_param, fmax, fmax_for_rel,
    negbin_beta_star_sq, negbin_bound_expression, negbin_zeta_star, y_from_e, ymax_for_fidelity,
    NegBinQuadratic,
};
use fidbound::{Branch, EnergyGap, Error, Family, Sign};
use proptest::prelude::*;

fn families() -> Vec<Family> {
    let mut v = vec![Family::Coherent, Family::Squeezed, Family::phase()];
    for mu in [0.1, 0.5, 0.9, 2.0, 10.0] {
        v.push(Family::negbin(mu).unwrap());
    }
    for m in [1, 2, 5, 20] {
        v.push(Family::binomial(m).unwrap());
    }
    v
}

fn y_top(fam: &Family) -> f64 {
    match fam {
        Family::Binomial { big_m } => binomial_y_limit(*big_m),
        _ => 20.0,
    }
}

#[test]
fn energy_gap_examples() {
    assert_eq!(y_from_e(0.0).unwrap(), 0.0);
    assert_abs_diff_eq!(y_from_e(0.1).unwrap(), 0.0953463, epsilon = 1e-7);
    assert_abs_diff_eq!(
        y_from_e(-0.5).unwrap(),
        0.5 / 0.5f64.sqrt(),
        epsilon = 1e-15
    );
    assert_eq!(e_from_y(0.0, Sign::Positive).unwrap(), 0.0);
    assert_eq!(e_from_y(0.0, Sign::Negative).unwrap(), 0.0);
    assert_abs_diff_eq!(
        e_from_y(0.0953463, Sign::Positive).unwrap(),
        0.1,
        epsilon = 1e-7
    );
    let e = e_from_y(2.0, Sign::Negative).unwrap();
    assert_abs_diff_eq!(e, -0.828427, epsilon = 1e-6);
    assert_abs_diff_eq!(e * e - 4.0 * (1.0 + e), 0.0, epsilon = 1e-14);
    assert!(matches!(y_from_e(-1.0), Err(Error::Domain(_))));
    assert!(matches!(
        e_from_y(-0.1, Sign::Positive),
        Err(Error::Domain(_))
    ));
}

proptest! {
    #[test]
    fn gap_conversions_round_trip(rel in -0.999f64..100.0) {
        let g = EnergyGap::from_rel(rel).unwrap();
        prop_assert!((g.sym - rel.abs() / (1.0 + rel).sqrt()).abs() <= 1e-14 * g.sym.max(1.0));
        let back = e_from_y(g.sym, g.sign).unwrap();
        prop_assert!((back - rel).abs() <= 1e-12 * rel.abs().max(1.0), "{rel} -> {} -> {back}", g.sym);
    }

    #[test]
    fn negative_branch_stays_above_minus_one(sym in 0.0f64..1e6) {
        let e = e_from_y(sym, Sign::Negative).unwrap();
        prop_assert!(e > -1.0 && e <= 0.0);
    }

    #[test]
    fn coherent_never_beats_squeezed(y in 0.0f64..50.0) {
        let c = fmax(&Family::Coherent, y).unwrap().f_max;
        let s = fmax(&Family::Squeezed, y).unwrap().f_max;
        prop_assert!(c <= s);
    }

    #[test]
    fn branches_meet_at_mu_one(y in 0.0f64..20.0) {
        let below = fmax(&Family::negbin(1.0 - 1e-13).unwrap(), y).unwrap().f_max;
        let above = fmax(&Family::negbin(1.0 + 1e-13).unwrap(), y).unwrap().f_max;
        let phase = 1.0 / (1.0 + y * y / 4.0);
        prop_assert!((below - phase).abs() <= 1e-12);
        prop_assert!((above - phase).abs() <= 1e-12);
        prop_assert_eq!(fmax(&Family::phase(), y).unwrap().f_max, phase);
    }
}

#[test]
fn fmax_examples() {
    for fam in families() {
        let r = fmax(&fam, 0.0).unwrap();
        assert_eq!(r.f_max, 1.0, "{fam}");
    }
    let coh = fmax(&Family::Coherent, y_from_e(0.1).unwrap())
        .unwrap()
        .f_max;
    assert!(coh > 0.995);
    assert_abs_diff_eq!(coh, 0.995464, epsilon = 1e-6);
    let b = Family::binomial(3).unwrap();
    assert_eq!(fmax(&b, 6.0 / 7f64.sqrt()).unwrap().f_max, 0.0);
    assert!(matches!(fmax(&b, 2.27), Err(Error::Domain(_))));
    let half = fmax(&Family::negbin(0.5).unwrap(), 2.0).unwrap().f_max;
    assert_abs_diff_eq!(half, 2f64.powf(-0.5), epsilon = 1e-15);
    assert_abs_diff_eq!(
        half,
        fmax(&Family::Squeezed, 2.0).unwrap().f_max,
        epsilon = 1e-15
    );
    assert!(matches!(Family::negbin(0.0), Err(Error::HyperParam(_))));
    assert!(matches!(Family::binomial(0), Err(Error::HyperParam(_))));
}

#[test]
fn branch_tags() {
    assert_eq!(
        fmax(&Family::Squeezed, 1.0).unwrap().branch,
        Branch::BoundarySupremum
    );
    assert_eq!(
        fmax(&Family::negbin(0.3).unwrap(), 1.0).unwrap().branch,
        Branch::BoundarySupremum
    );
    assert_eq!(
        fmax(&Family::Coherent, 1.0).unwrap().branch,
        Branch::Interior
    );
    assert_eq!(
        fmax(&Family::negbin(2.0).unwrap(), 1.0).unwrap().branch,
        Branch::Interior
    );
    assert_eq!(
        fmax(&Family::binomial(4).unwrap(), 1.0).unwrap().branch,
        Branch::Interior
    );
}

#[test]
fn fmax_strictly_decreasing() {
    for fam in families() {
        let top = y_top(&fam);
        let mut prev = fmax(&fam, 0.0).unwrap().f_max;
        for i in 1..=1000 {
            let y = (top * i as f64 / 1000.0).min(top);
            let f = fmax(&fam, y).unwrap().f_max;
            assert!(f < prev, "{fam} not decreasing at y={y}: {f} >= {prev}");
            prev = f;
        }
    }
}

#[test]
fn fmax_inverse_round_trip() {
    for fam in families() {
        assert_eq!(ymax_for_fidelity(&fam, 1.0).unwrap(), 0.0);
        for f in [0.5, 0.9, 0.99, 0.999] {
            let y = ymax_for_fidelity(&fam, f).unwrap();
            let back = fmax(&fam, y).unwrap().f_max;
            assert!((back - f).abs() <= 1e-12, "{fam} f={f}: y={y} back={back}");
        }
        assert!(matches!(
            ymax_for_fidelity(&fam, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            ymax_for_fidelity(&fam, 1.5),
            Err(Error::Domain(_))
        ));
    }
}

#[test]
fn ymax_examples() {
    let y = ymax_for_fidelity(&Family::Coherent, 0.995464).unwrap();
    assert_abs_diff_eq!(y, 0.0953463, epsilon = 2e-5);
    let exact = fmax(&Family::Coherent, y_from_e(0.1).unwrap())
        .unwrap()
        .f_max;
    assert_abs_diff_eq!(
        ymax_for_fidelity(&Family::Coherent, exact).unwrap(),
        y_from_e(0.1).unwrap(),
        epsilon = 1e-12
    );

    // Small-mu approximation 2 sqrt((1 - F)/mu) against the exact inverse.
    let fam = Family::negbin(0.01).unwrap();
    let y = ymax_for_fidelity(&fam, 0.99).unwrap();
    assert_abs_diff_eq!(
        y,
        2.0 * (0.99f64.powf(-100.0) - 1.0).sqrt(),
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(y, 2.6321087, epsilon = 1e-7);
    let rel = e_from_y(y, Sign::Positive).unwrap();
    assert_abs_diff_eq!(rel, 7.8145473, epsilon = 1e-7);
}

#[test]
fn extremal_param_examples() {
    let (a, br) = extremal_param(&Family::Coherent, 0.0).unwrap();
    assert_abs_diff_eq!(a, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    assert_eq!(br, Branch::Interior);
    let (z, _) = extremal_param(&Family::negbin(2.0).unwrap(), 1.0).unwrap();
    assert_abs_diff_eq!(z, 1.25 / (3.0 * 1.75), epsilon = 1e-15);
    let (p, _) = extremal_param(&Family::binomial(2).unwrap(), 1.0).unwrap();
    assert_abs_diff_eq!(p, 0.0625, epsilon = 1e-15);
    for fam in [
        Family::Squeezed,
        Family::negbin(0.4).unwrap(),
        Family::phase(),
    ] {
        assert_eq!(
            extremal_param(&fam, 0.7).unwrap(),
            (1.0, Branch::BoundarySupremum)
        );
    }
}

#[test]
fn binomial_extremum_stays_in_unit_interval() {
    for m in 1..=50u32 {
        let lim = binomial_y_limit(m);
        for i in 0..=200 {
            let y = (lim * i as f64 / 200.0).min(lim);
            for sign in [Sign::Positive, Sign::Negative] {
                let (lo, hi) = binomial_rel_range(m);
                let rel = e_from_y(y, sign).unwrap().clamp(lo, hi);
                let (p, _) = extremal_param(&Family::binomial(m).unwrap(), rel).unwrap();
                assert!(
                    (-1e-12..=1.0 + 1e-12).contains(&p),
                    "M={m} rel={rel} p*={p}"
                );
            }
        }
    }
}

#[test]
fn taylor_coefficients() {
    let y = 1e-4;
    let mut cases: Vec<(Family, f64)> = vec![
        (Family::Coherent, 0.5),
        (Family::Squeezed, 0.125),
        (Family::phase(), 0.25),
    ];
    for mu in [2.0, 10.0] {
        cases.push((Family::negbin(mu).unwrap(), (2.0 * mu - 1.0) / (4.0 * mu)));
    }
    for mu in [0.1, 0.5] {
        cases.push((Family::negbin(mu).unwrap(), mu / 4.0));
    }
    for m in [1u32, 5] {
        let mf = m as f64;
        cases.push((Family::binomial(m).unwrap(), (2.0 * mf + 1.0) / (4.0 * mf)));
    }
    for (fam, want) in cases {
        let got = (1.0 - fmax(&fam, y).unwrap().f_max) / (y * y);
        assert!(
            ((got - want) / want).abs() <= 1e-4,
            "{fam}: {got} vs {want}"
        );
    }
}

#[test]
fn limits_and_substitution() {
    let coh = fmax(&Family::Coherent, 1.0).unwrap().f_max;
    assert_abs_diff_eq!(
        fmax(&Family::negbin(1e6).unwrap(), 1.0).unwrap().f_max,
        coh,
        epsilon = 1e-5
    );
    assert_abs_diff_eq!(
        fmax(&Family::binomial(1_000_000).unwrap(), 1.0)
            .unwrap()
            .f_max,
        coh,
        epsilon = 1e-5
    );
    for m in [1u32, 2, 5] {
        let fam = Family::binomial(m).unwrap();
        let lim = binomial_y_limit(m);
        for i in 0..=100 {
            let y = (lim * i as f64 / 100.0).min(lim);
            let direct = fmax(&fam, y).unwrap().f_max;
            let subst = negbin_bound_expression(-(m as f64), y);
            assert!(
                (direct - subst).abs() <= 1e-12,
                "M={m} y={y}: {direct} vs {subst}"
            );
        }
    }
}

#[test]
fn negbin_quadratic_machinery() {
    for mu in [2.0f64, 10.0] {
        let kappa = 2.0 * mu - 1.0;
        for rel in [0.3, 1.0, 3.0] {
            let e_mu = rel / (2.0 * mu);
            let beta = negbin_beta_star_sq(e_mu, kappa).sqrt();
            let q = NegBinQuadratic::new(beta, e_mu, kappa);
            assert!((q.b + q.a * q.c).abs() <= 1e-12);
            let zeta = negbin_zeta_star(e_mu, kappa);
            assert!(q.residual(zeta).abs() <= 1e-10);
            let (z, _) = extremal_param(&Family::negbin(mu).unwrap(), rel).unwrap();
            assert_abs_diff_eq!(z, zeta, epsilon = 1e-15);
        }
    }
    let q = NegBinQuadratic::new(1.0, 0.0, 3.0);
    assert_eq!((q.a, q.b, q.c), (0.0, 0.0, 0.0));
    assert_eq!(q.residual(0.4), 0.0);
}

#[test]
fn fmax_for_rel_agrees_with_sym_entry() {
    for fam in families() {
        for rel in [0.05, 0.3, 1.0] {
            let a = fmax_for_rel(&fam, rel).unwrap().f_max;
            let b = fmax(&fam, y_from_e(rel).unwrap()).unwrap().f_max;
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }
}
