//! Monte Carlo spectral and regional heat contents of (0,1) next to the
//! quadrature oracle and the SKBM eigenfunction series.

use fracdrum::analytic::{rhc_interval_oracle, skbm_interval_series, QuadratureConfig};
use fracdrum::geometry::Domain;
use fracdrum::simulate::{rhc, shc, skbm_shc, McConfig, StableParams};

fn main() -> fracdrum::Result<()> {
    let unit = Domain::interval(0.0, 1.0)?;
    let cfg = McConfig::new(100_000, 5);
    let q = QuadratureConfig::default();
    println!("{:>4} {:>6}  {:>22}  {:>10}  {:>22}  {:>22}", "α", "t", "RHC (MC)", "RHC oracle", "SHC (MC)", "SKBM (MC)");
    for alpha in [0.7, 1.0, 1.5] {
        let p = StableParams::new(alpha, 1)?;
        for t in [1e-3, 1e-2, 1e-1] {
            let r = rhc(&unit, p, t, &cfg)?;
            let o = rhc_interval_oracle(alpha, t, &q)?;
            let s = shc(&unit, p, t, &cfg)?;
            let k = skbm_shc(&unit, p, t, &cfg)?;
            println!(
                "{alpha:>4} {t:>6}  {:>10.6} ± {:<9.2e}  {:>10.6}  {:>10.6} ± {:<9.2e}  {:>10.6} ± {:<9.2e}",
                r.value, r.stderr, o.value, s.value, s.stderr, k.value, k.stderr
            );
        }
    }
    let series = skbm_interval_series(1.0, 0.01, 10_000)?;
    println!("\nSKBM series at α = 1, t = 0.01: {:.10}", series.value);
    Ok(())
}
