//! Arithmetic or not: lattice spans of shift sets, including drums whose
//! ratios are powers of a common base.

use fracdrum::renewal::detect_arithmetic;

fn main() -> fracdrum::Result<()> {
    let cases: [(&str, Vec<f64>); 5] = [
        ("1, 2", vec![1.0, 2.0]),
        ("ln 3 (Cantor)", vec![3f64.ln()]),
        ("ln 2, ln 4, ln 8", vec![2f64.ln(), 4f64.ln(), 8f64.ln()]),
        ("ln 2, ln 3", vec![2f64.ln(), 3f64.ln()]),
        ("1, √2", vec![1.0, 2f64.sqrt()]),
    ];
    for (label, shifts) in cases {
        let s = detect_arithmetic(&shifts, 1e-9)?;
        match s.span {
            Some(span) => println!("{label:<18} arithmetic, span {span:.12}, multipliers {:?}", s.multipliers),
            None => println!("{label:<18} non-arithmetic after {} Euclid steps", s.steps),
        }
    }
    Ok(())
}
