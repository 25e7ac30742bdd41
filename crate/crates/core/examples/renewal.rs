//! The renewal equation f(z) = Σ c_j f(z − γ_j) + φ(z): a manufactured
//! solution, a non-arithmetic limit and an arithmetic periodic limit.

use fracdrum::renewal::{
    asymptote_arithmetic, asymptote_nonarithmetic, detect_arithmetic, solve_series, ForcingFunction,
    RenewalEquation, ZGrid,
};

fn main() -> fracdrum::Result<()> {
    let eq = RenewalEquation::new(vec![0.3, 0.7], vec![0.5, 1.2])?;
    let g = ForcingFunction::sech();
    let phi = ForcingFunction::manufactured(&eq, &g)?;
    let span = detect_arithmetic(eq.shifts(), 1e-9)?;
    let grid = ZGrid::for_equation(&eq, &span, -10.0, 20.0)?;
    let sol = solve_series(&eq, &phi, &grid, 1e-10)?;
    let err = grid.points().map(|z| (sol.eval(z) - g.eval(z)).abs()).fold(0.0, f64::max);
    println!("manufactured sech: max error {err:.2e}, residual {:.2e}", sol.residual);

    let eq = RenewalEquation::new(vec![0.5, 0.5], vec![2f64.ln(), 3f64.ln()])?;
    let limit = asymptote_nonarithmetic(&eq, &ForcingFunction::exp_abs())?;
    println!("shifts ln2, ln3: f(∞) = {limit:.12} (4/ln6 = {:.12})", 4.0 / 6f64.ln());

    let eq = RenewalEquation::new(vec![0.5, 0.5], vec![1.0, 2.0])?;
    let span = detect_arithmetic(eq.shifts(), 1e-9)?;
    let f = asymptote_arithmetic(&eq, &ForcingFunction::exp_abs(), span.span.unwrap())?;
    println!("shifts 1, 2: periodic limit with period {}, mean {:.12}", f.period(), f.mean()?);
    for k in 0..4 {
        let z = k as f64 / 4.0;
        println!("  f~({z:.2}) = {:.12}", f.eval(z));
    }
    Ok(())
}
