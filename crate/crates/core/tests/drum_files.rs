use fracdrum::geometry::{drum_file, parse_domain, solve_dimension, Domain, DrumSpec};

const CANTOR: &str = "schema = 1
# middle-thirds Cantor complement
dim = 1
r_1 = 1/3
translate_1 = 0
r_2 = 1/3
translate_2 = 2/3
generator = interval 1/3 2/3
";

#[test]
fn cantor_file_matches_builtin() {
    let spec = drum_file::parse(CANTOR, "cantor").unwrap();
    let builtin = DrumSpec::cantor();
    assert_eq!(spec.ratios(), builtin.ratios());
    assert!((spec.dimension() - 2f64.ln() / 3f64.ln()).abs() < 1e-15);
    let (a, b) = (Domain::drum(spec, None), Domain::cantor(None));
    for k in 0..=1000 {
        let x = [k as f64 / 1000.0];
        assert_eq!(a.contains(&x, 12), b.contains(&x, 12), "x = {}", x[0]);
    }
}

#[test]
fn load_from_disk_through_domain_syntax() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cantor.drum");
    std::fs::write(&path, CANTOR).unwrap();
    let d = parse_domain(&format!("drum:@{}", path.display())).unwrap();
    assert!(d.is_fractal());
    assert!((d.volume().unwrap() - 1.0).abs() < 1e-12);
    assert!((d.boundary_dimension().unwrap() - solve_dimension(&[1.0 / 3.0; 2], 1).unwrap()).abs() < 1e-15);
}

#[test]
fn gasket_file_in_the_plane() {
    let text = "schema = 1
dim = 2
r_1 = 1/2
translate_1 = 0 0
r_2 = 1/2
translate_2 = 1/2 0
r_3 = 1/2
translate_3 = 1/4 0.4330127018922193
generator = triangle 0.5 0 0.25 0.4330127018922193 0.75 0.4330127018922193
";
    let spec = drum_file::parse(text, "gasket").unwrap();
    assert!((spec.dimension() - 3f64.ln() / 2f64.ln()).abs() < 1e-14);
    assert_eq!(spec.dim(), 2);
}

#[test]
fn malformed_files_are_rejected() {
    assert!(drum_file::parse("dim = 1\nr_1 = 1/3\n", "x").is_err());
    assert!(drum_file::parse(&CANTOR.replace("r_2 = 1/3", "r_2 = 3/2"), "x").is_err());
    assert!(drum_file::parse(&CANTOR.replace("generator = interval 1/3 2/3", "generator = blob"), "x").is_err());
}
