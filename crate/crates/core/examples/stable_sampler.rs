//! Empirical characteristic function of the isotropic stable sampler against
//! `exp(−|ξ|^α)`.

use fracdrum::simulate::{IsotropicStable, SeedPlan, StableParams};

fn main() -> fracdrum::Result<()> {
    let n = 200_000;
    println!("{:>5} {:>5} {:>12} {:>12} {:>8}", "α", "ξ", "empirical", "exact", "z");
    for alpha in [0.3, 0.8, 1.0, 1.5, 1.9] {
        let sampler = IsotropicStable::new(StableParams::new(alpha, 1)?);
        let mut rng = SeedPlan::new(7).stream(0);
        let xs: Vec<f64> = (0..n)
            .map(|_| {
                let mut x = [0.0];
                sampler.sample_unit(&mut rng, &mut x);
                x[0]
            })
            .collect();
        for xi in [0.5f64, 1.0, 2.0] {
            let c: Vec<f64> = xs.iter().map(|x| (xi * x).cos()).collect();
            let mean = c.iter().sum::<f64>() / n as f64;
            let var = c.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let exact = (-xi.powf(alpha)).exp();
            println!("{alpha:>5} {xi:>5} {mean:>12.6} {exact:>12.6} {:>8.2}", (mean - exact) / (var / n as f64).sqrt());
        }
    }
    Ok(())
}
