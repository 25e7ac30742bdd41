//! Spectral heat content of the Sierpiński gasket drum for α on both sides of
//! d − b, where the deficit changes from t^{(d−b)/α} to t.
//!
//! Slow: run with `--release`.

use fracdrum::geometry::Domain;
use fracdrum::harness::{fit_power_law, TimeGrid};
use fracdrum::simulate::{shc, McConfig, StableParams};

fn main() -> fracdrum::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let gasket = Domain::gasket(None, 0.0)?;
    let volume = gasket.volume()?;
    let b = gasket.boundary_dimension().unwrap();
    println!("gasket: volume {volume:.6}, b = {b:.6}, d − b = {:.6}", 2.0 - b);
    for alpha in [0.3, 1.0, 1.8] {
        let p = StableParams::new(alpha, 2)?;
        // The t-linear deficit for small α is unresolved below t ≈ 1e-3.
        let t_max = if alpha < 2.0 - b { 1e-1 } else { 1e-3 };
        let grid = TimeGrid {
            t_min: t_max * 1e-2,
            t_max,
            per_decade: 3,
        };
        let mut pts = Vec::new();
        for t in grid.points() {
            let e = shc(&gasket, p, t, &McConfig::new(n, 21))?;
            pts.push((t, volume - e.value, e.stderr));
        }
        let predicted = if alpha > 2.0 - b { (2.0 - b) / alpha } else { 1.0 };
        match fit_power_law(&pts) {
            Ok(f) => println!("α = {alpha}: exponent {:.3} ± {:.3} (predicted {predicted:.3})", f.exponent, f.exponent_stderr),
            Err(e) => println!("α = {alpha}: no fit ({e})"),
        }
    }
    Ok(())
}
