//! Similarity dimensions and drum validation for the built-in drums and a
//! non-uniform one-dimensional drum.

use fracdrum::geometry::{solve_dimension, validate_drum, DrumSpec};

fn main() -> fracdrum::Result<()> {
    let cantor = DrumSpec::cantor();
    let gasket = DrumSpec::gasket(0.0)?;
    println!("cantor  b = {:.15}  (ln2/ln3 = {:.15})", cantor.dimension(), 2f64.ln() / 3f64.ln());
    println!("gasket  b = {:.15}  (ln3/ln2 = {:.15})", gasket.dimension(), 3f64.ln() / 2f64.ln());

    let uneven = solve_dimension(&[0.5, 0.25], 1)?;
    println!("ratios 1/2, 1/4  b = {uneven:.15}  (golden: {:.15})", ((1.0 + 5f64.sqrt()) / 2.0).ln() / 2f64.ln());

    for spec in [&cantor, &gasket] {
        let report = validate_drum(spec.dim(), spec.maps(), spec.generator());
        println!("\n{}: {}", spec.name(), if report.passed() { "valid" } else { "invalid" });
        for c in &report.checks {
            println!("  {:<24} {:?}  {}", c.name, c.status, c.detail);
        }
    }
    Ok(())
}
