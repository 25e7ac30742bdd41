//! Gamma function by the Lanczos approximation (g = 7, 9 coefficients) with
//! the reflection formula below 1/2. Relative error is below 1e-14 on the
//! real line away from the poles.

use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1−x) = π / sin(πx)
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = COEF[0];
        let t = x + G + 0.5;
        for (i, c) in COEF.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference values from a 30-digit arbitrary-precision evaluation.
    const REFERENCE: [(f64, f64); 30] = [
        (0.05, 19.470085311255511756),
        (0.1, 9.5135076986687312858),
        (0.15, 6.2202728740498778598),
        (0.25, 3.6256099082219083119),
        (0.3, 2.9915689876875907446),
        (1.0 / 3.0, 2.6789385347077477889),
        (0.5, 1.7724538509055160273),
        (0.65, 1.3847951020265099607),
        (0.75, 1.2254167024651776451),
        (0.85, 1.1124837369484652673),
        (1.0, 1.0),
        (1.05, 0.97350426556277562168),
        (1.15, 0.93304093110748167197),
        (1.25, 0.90640247705547707798),
        (1.35, 0.89115144202430080063),
        (1.5, 0.88622692545275801365),
        (1.6, 0.89351534928769027144),
        (1.75, 0.91906252684888323385),
        (1.95, 0.97988065127258056939),
        (2.0, 1.0),
        (2.5, 1.3293403881791370205),
        (3.3, 2.6834373819557683003),
        (4.75, 16.586206539225939611),
        (7.5, 1871.2543057977883465),
        (10.25, 639232.59877957679428),
        (-0.25, -4.9016668098607105805),
        (-0.5, -3.5449077018110320546),
        (-1.5, 2.3632718012073547031),
        (-2.3, -1.4471073942559181166),
        (0.001, 999.4237724845954453),
    ];

    #[test]
    fn matches_reference_values() {
        for (x, want) in REFERENCE {
            let got = gamma(x);
            let rel = ((got - want) / want).abs();
            assert!(rel < 1e-13, "Γ({x}) = {got}, want {want}, rel {rel:e}");
        }
    }

    #[test]
    fn recurrence() {
        for i in 1..100 {
            let x = 0.037 * i as f64;
            let rel = (gamma(x + 1.0) / (x * gamma(x)) - 1.0).abs();
            assert!(rel < 1e-13, "x = {x}");
        }
    }
}
