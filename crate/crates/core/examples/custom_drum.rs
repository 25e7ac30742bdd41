//! Loading a drum from a plain-text file and estimating its heat content.

use fracdrum::geometry::{drum_file, Domain};
use fracdrum::simulate::{rhc, shc, McConfig, StableParams};

const TEXT: &str = "schema = 1
# two unequal copies: ratios 1/2 and 1/4 with a gap generator
dim = 1
r_1 = 1/2
translate_1 = 0
r_2 = 1/4
translate_2 = 3/4
generator = interval 1/2 3/4
";

fn main() -> fracdrum::Result<()> {
    let spec = drum_file::parse(TEXT, "uneven")?;
    println!("{}: ratios {:?}, b = {:.10}", spec.name(), spec.ratios(), spec.dimension());
    let domain = Domain::drum(spec, None);
    println!("volume {}", domain.volume()?);
    let p = StableParams::new(1.2, 1)?;
    for t in [1e-3, 1e-2] {
        let cfg = McConfig::new(20_000, 4);
        let s = shc(&domain, p, t, &cfg)?;
        let r = rhc(&domain, p, t, &cfg)?;
        println!("t = {t:<6} SHC {:.5} ± {:.1e}   RHC {:.5} ± {:.1e}", s.value, s.stderr, r.value, r.stderr);
    }
    Ok(())
}
