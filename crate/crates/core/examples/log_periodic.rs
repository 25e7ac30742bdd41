//! Recovering a log-periodic modulation from a synthetic power law on a
//! 16-per-decade grid.

use std::f64::consts::PI;

use fracdrum::harness::{fit_power_law, log_period, log_periodic_extract, TimeGrid};
use fracdrum::geometry::Domain;

fn main() -> fracdrum::Result<()> {
    let alpha = 1.5;
    let period = log_period(&Domain::cantor(None), alpha).unwrap();
    let grid = TimeGrid {
        t_min: 1e-4,
        t_max: 1e-1,
        per_decade: 16,
    };
    let pts: Vec<_> = grid
        .points()
        .into_iter()
        .map(|t| (t, t.powf(0.25) * (1.0 + 0.1 * (2.0 * PI * t.ln() / period).sin()), 0.0))
        .collect();
    let fit = fit_power_law(&pts)?;
    let lp = log_periodic_extract(&pts, period)?;
    println!("expected period α ln 3 = {period:.5}");
    println!("power law: exponent {:.4}, amplitude {:.4}", fit.exponent, fit.amplitude);
    println!(
        "log-periodic: period {:.5}, amplitude {:.4}, phase {:.3}, F = {:.1}, p = {:.2e}",
        lp.period, lp.amplitude, lp.phase, lp.f_statistic, lp.p_value
    );
    Ok(())
}
