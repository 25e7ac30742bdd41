//! The drum constant C₁ and the log-periodic amplitude function for the
//! Cantor drum, from a sampled remainder profile ℛ(u).

use fracdrum::renewal::{amplitude_function, c1_constant, ForcingFunction};

fn main() -> fracdrum::Result<()> {
    let ratios = [1.0 / 3.0; 2];
    let alpha = 1.5;
    // A toy remainder with ℛ(e^{−z}) = e^{−|z|}.
    let samples: Vec<(f64, f64)> = (-400..=400)
        .map(|k| {
            let z = k as f64 * 0.05;
            ((-z).exp(), (-z.abs()).exp())
        })
        .collect();
    let c1 = c1_constant(&samples, &ratios, 1, alpha)?;
    println!(
        "C1 = {:.8} (integral {:.8} / denominator {:.8}, tail share {:.1e})",
        c1.value, c1.integral, c1.denominator, c1.tail_share
    );

    let f = amplitude_function(&ForcingFunction::exp_abs(), 3f64.ln(), alpha, &ratios, 1)?;
    println!("amplitude function: period {:.6}, mean {:.8}", f.period(), f.mean()?);
    for k in 0..8 {
        let z = k as f64 * f.period() / 8.0;
        println!("  z = {z:.4}  f = {:.8}", f.eval(z));
    }
    Ok(())
}
