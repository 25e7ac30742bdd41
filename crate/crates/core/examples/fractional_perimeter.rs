//! Fractional perimeters of (0,1) and of finite unions of Cantor gaps.

use fracdrum::analytic::{cantor_gap_perimeter, per_alpha_interval};

fn main() -> fracdrum::Result<()> {
    for alpha in [0.3, 0.5, 0.9] {
        let interval = per_alpha_interval(0.0, 1.0, alpha)?;
        println!("α = {alpha}: Per((0,1)) = {interval:.10}");
        println!("  {:>5} {:>16} {:>16}", "level", "total", "exterior part");
        for level in [1, 2, 4, 8, 16, 30] {
            let p = cantor_gap_perimeter(level, alpha)?;
            println!("  {level:>5} {:>16.10} {:>16.10}", p.total, p.exterior);
        }
    }
    Ok(())
}
