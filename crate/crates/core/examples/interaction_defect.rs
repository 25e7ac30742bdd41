//! Interaction defect of two intervals: heat lost to the union minus the
//! heat lost by the pieces, with common random numbers.

use fracdrum::geometry::parse_domain;
use fracdrum::simulate::{interaction_defect, McConfig, StableParams};

fn main() -> fracdrum::Result<()> {
    let p = StableParams::new(1.5, 1)?;
    for gap in ["0.4,0.6", "0.45,0.55", "0.49,0.51"] {
        let (a, b) = gap.split_once(',').unwrap();
        let d = parse_domain(&format!("union:0,{a};{b},1"))?;
        for t in [1e-3, 1e-2] {
            let e = interaction_defect(&d, p, t, &McConfig::new(100_000, 3))?;
            println!("gap ({gap})  t = {t:<6} defect = {:.4e} ± {:.1e}", e.value, e.stderr);
        }
    }
    Ok(())
}
