use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::OrbitSample;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RenderFormat {
    Csv,
    Svg,
}

impl std::str::FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(RenderFormat::Csv),
            "svg" => Ok(RenderFormat::Svg),
            _ => Err(Error::Parse(format!("unknown render format '{s}' (csv or svg)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RenderOptions {
    /// Zero-based coordinate pair drawn by the SVG chart.
    pub project: Option<(usize, usize)>,
}

const SIZE: f64 = 512.0;

/// CSV with header `k,x1,...` or a 512x512 SVG chart of the unit square.
pub fn render(sample: &OrbitSample, format: RenderFormat, options: RenderOptions) -> Result<String> {
    let dim = sample.dimension();
    match format {
        RenderFormat::Csv => {
            let mut out = String::from("k");
            for i in 1..=dim {
                write!(out, ",x{i}").unwrap();
            }
            out.push('\n');
            for (k, p) in sample.points.iter().enumerate() {
                write!(out, "{k}").unwrap();
                for v in p {
                    write!(out, ",{v}").unwrap();
                }
                out.push('\n');
            }
            Ok(out)
        }
        RenderFormat::Svg => {
            let (a, b) = match options.project {
                Some((a, b)) if a < dim && b < dim && a != b => (a, b),
                Some((a, b)) => return Err(Error::UnsupportedProjection(format!("coordinates {},{} of a {dim}-dimensional sample", a + 1, b + 1))),
                None if dim == 2 => (0, 1),
                None => return Err(Error::UnsupportedProjection(format!("a {dim}-dimensional sample needs a coordinate pair"))),
            };
            let mut out = String::new();
            writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="512" height="512" viewBox="0 0 512 512">"#).unwrap();
            writeln!(out, r#"<rect x="0" y="0" width="512" height="512" fill="white" stroke="black"/>"#).unwrap();
            for p in &sample.points {
                writeln!(out, r#"<circle cx="{:.3}" cy="{:.3}" r="0.75"/>"#, p[a] * SIZE, (1.0 - p[b]) * SIZE).unwrap();
            }
            out.push_str("</svg>\n");
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn sample(points: Vec<Vec<f64>>, rows: usize, cols: usize) -> OrbitSample {
        OrbitSample {
            rows,
            cols,
            n: points.len(),
            start: vec![BigRational::from_integer(0.into()); cols],
            step: vec![BigRational::from_integer(1.into()); cols],
            points,
        }
    }

    #[test]
    fn csv_contract() {
        let empty = sample(vec![], 1, 1);
        assert_eq!(render(&empty, RenderFormat::Csv, RenderOptions::default()).unwrap(), "k,x1,x2\n");
        let s = sample(vec![vec![0.0, 0.5], vec![0.0, 0.25]], 1, 1);
        assert_eq!(render(&s, RenderFormat::Csv, RenderOptions::default()).unwrap(), "k,x1,x2\n0,0,0.5\n1,0,0.25\n");
    }

    #[test]
    fn svg_contract() {
        let s = sample(vec![vec![0.0, 0.5], vec![0.5, 0.25], vec![0.75, 0.125]], 1, 1);
        let a = render(&s, RenderFormat::Svg, RenderOptions::default()).unwrap();
        assert!(a.contains(r#"width="512" height="512""#));
        assert_eq!(a.matches("<circle").count(), 3);
        assert!(a.contains(r#"<circle cx="256.000" cy="384.000" r="0.75"/>"#));
        assert_eq!(a, render(&s, RenderFormat::Svg, RenderOptions::default()).unwrap());
        let wide = sample(vec![vec![0.0, 0.5, 0.1]], 2, 1);
        assert!(matches!(render(&wide, RenderFormat::Svg, RenderOptions::default()), Err(Error::UnsupportedProjection(_))));
        assert!(render(&wide, RenderFormat::Svg, RenderOptions { project: Some((1, 2)) }).is_ok());
        assert!(render(&wide, RenderFormat::Svg, RenderOptions { project: Some((1, 3)) }).is_err());
    }
}
