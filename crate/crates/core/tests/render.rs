use num_rational::BigRational;
use proptest::prelude::*;

use diophlab::foliation::{orbit_sample, render, RenderFormat, RenderOptions};
use diophlab::matrixdioph::RealMatrix;
use diophlab::Config;

fn units(k: usize, v: i64) -> Vec<BigRational> {
    vec![BigRational::from_integer(v.into()); k]
}

#[test]
fn csv_has_one_line_per_point() {
    let cfg = Config::default();
    let theta = RealMatrix::parse(r#"[["sqrt(2)","sqrt(3)"]]"#).unwrap();
    let sample = orbit_sample(&theta, 25, &units(2, 0), &units(2, 1), &cfg).unwrap();
    let csv = render(&sample, RenderFormat::Csv, RenderOptions::default()).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,x1,x2,x3");
    assert_eq!(lines.len(), 26);
    assert!(lines[1].starts_with("0,"));
}

#[test]
fn svg_needs_a_pair_beyond_two_dimensions() {
    let cfg = Config::default();
    let theta = RealMatrix::parse(r#"[["sqrt(2)","sqrt(3)"]]"#).unwrap();
    let sample = orbit_sample(&theta, 10, &units(2, 0), &units(2, 1), &cfg).unwrap();
    assert!(render(&sample, RenderFormat::Svg, RenderOptions::default()).is_err());
    let svg = render(&sample, RenderFormat::Svg, RenderOptions { project: Some((0, 2)) }).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn points_stay_in_the_unit_cube(n in 1usize..200, lit in prop::sample::select(vec!["sqrt(2)", "pi", "log(3)", "3/7"])) {
        let cfg = Config::default();
        let theta = RealMatrix::parse(&format!(r#"[["{lit}"]]"#)).unwrap();
        let sample = orbit_sample(&theta, n, &units(1, 0), &units(1, 1), &cfg).unwrap();
        prop_assert_eq!(sample.points.len(), n);
        prop_assert!(sample.points.iter().flatten().all(|x| (0.0..1.0).contains(x)));
        let svg = render(&sample, RenderFormat::Svg, RenderOptions::default()).unwrap();
        prop_assert_eq!(svg.matches("<circle").count(), n);
    }
}
