//! Membership in the open region D = {|x − y| < √(π/2) − √(2/π)·x·y}, z = x + iy,
//! and its decomposition into a central square and two opposite corners.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Complex;

/// √(π/2), the half-width of the central square.
pub const HALF_WIDTH: f64 = 1.253_314_137_315_500_3;
const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;
/// Points with |margin| at or below this are on the boundary (and not inside).
pub const BOUNDARY_BAND: f64 = 1e-12;
/// Disagreements between the two membership tests are tolerated inside this band.
pub const CONSISTENCY_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    CentralSquare,
    LowerRight,
    UpperLeft,
    Boundary,
    Outside,
}

impl Component {
    pub fn as_str(self) -> &'static str {
        match self {
            Component::CentralSquare => "central_square",
            Component::LowerRight => "lower_right",
            Component::UpperLeft => "upper_left",
            Component::Boundary => "boundary",
            Component::Outside => "outside",
        }
    }

    pub fn is_inside(self) -> bool {
        matches!(self, Component::CentralSquare | Component::LowerRight | Component::UpperLeft)
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub inside: bool,
    pub component_label: Component,
    /// Signed slack of the defining condition; positive inside.
    pub margin: f64,
}

impl RegionVerdict {
    fn from_margin(margin: f64, interior: Component) -> Self {
        let label = if margin.abs() <= BOUNDARY_BAND {
            Component::Boundary
        } else if margin > 0.0 {
            interior
        } else {
            Component::Outside
        };
        Self { inside: label.is_inside(), component_label: label, margin }
    }
}

/// Which of the three pieces a point would belong to, judged by coordinates alone.
fn piece(x: f64, y: f64) -> Component {
    if x > HALF_WIDTH && y < -HALF_WIDTH {
        Component::LowerRight
    } else if x < -HALF_WIDTH && y > HALF_WIDTH {
        Component::UpperLeft
    } else {
        Component::CentralSquare
    }
}

/// Verdict from the defining inequality; margin = RHS − LHS.
pub fn in_d_inequality(z: Complex) -> RegionVerdict {
    let (x, y) = (z.re, z.im);
    let margin = HALF_WIDTH - SQRT_2_OVER_PI * x * y - (x - y).abs();
    RegionVerdict::from_margin(margin, piece(x, y))
}

/// Verdict from membership in the union of the square and the two corners.
/// The margin is the largest, over the three sets, of the smallest edge slack.
pub fn in_d_decomposition(z: Complex) -> RegionVerdict {
    let (x, y) = (z.re, z.im);
    let c = HALF_WIDTH;
    let square = (c - x.abs()).min(c - y.abs());
    let lower_right = (x - c).min(-y - c);
    let upper_left = (-x - c).min(y - c);
    let (margin, label) =
        [(square, Component::CentralSquare), (lower_right, Component::LowerRight), (upper_left, Component::UpperLeft)]
            .into_iter()
            .fold((f64::NEG_INFINITY, Component::Outside), |best, cur| if cur.0 > best.0 { cur } else { best });
    RegionVerdict::from_margin(margin, label)
}

/// Membership with the cross-check applied; errors if the routes disagree off the band.
pub fn classify(z: Complex) -> Result<RegionVerdict> {
    let a = in_d_inequality(z);
    let b = in_d_decomposition(z);
    if a.inside != b.inside && a.margin.abs() > CONSISTENCY_BAND {
        return Err(Error::Consistency(z));
    }
    Ok(a)
}

/// Membership requirement for the limit and integral routines: strictly inside.
pub fn require_inside(z: Complex) -> Result<()> {
    if classify(z)?.inside {
        Ok(())
    } else {
        Err(Error::Region(z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridNode {
    pub z: Complex,
    pub verdict: RegionVerdict,
}

fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

/// Classify every node of a rectangular grid, row-major with y as the outer index.
pub fn region_grid(x_min: f64, x_max: f64, y_min: f64, y_max: f64, step: f64) -> Result<Vec<GridNode>> {
    region_grid_par(x_min, x_max, y_min, y_max, step, 1)
}

/// As [`region_grid`], splitting rows across `workers` threads; output order is unchanged.
pub fn region_grid_par(
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    step: f64,
    workers: usize,
) -> Result<Vec<GridNode>> {
    if !(step > 0.0 && step.is_finite()) || !(x_min < x_max) || !(y_min < y_max) {
        return Err(Error::Parameter("grid needs step > 0, x_min < x_max, y_min < y_max".into()));
    }
    if workers == 0 {
        return Err(Error::Parameter("workers must be at least 1".into()));
    }
    let xs = axis(x_min, x_max, step);
    let ys = axis(y_min, y_max, step);
    let row = |y: f64| -> Result<Vec<GridNode>> {
        xs.iter()
            .map(|&x| {
                let z = Complex::new(x, y);
                classify(z).map(|verdict| GridNode { z, verdict })
            })
            .collect()
    };
    let chunk = ys.len().div_ceil(workers);
    let rows: Vec<Result<Vec<Vec<GridNode>>>> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            ys.chunks(chunk).map(|ys| scope.spawn(|| ys.iter().map(|&y| row(y)).collect::<Result<Vec<_>>>())).collect();
        handles.into_iter().map(|h| h.join().expect("region worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for block in rows {
        for r in block? {
            out.extend(r);
        }
    }
    Ok(out)
}

/// CSV with columns x, y, inside (0/1), label, margin.
pub fn write_grid_csv<W: Write>(nodes: &[GridNode], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Parameter(format!("csv output failed: {e}"));
    w.write_record(["x", "y", "inside", "label", "margin"]).map_err(io)?;
    for n in nodes {
        w.write_record([
            format!("{}", n.z.re),
            format!("{}", n.z.im),
            (n.verdict.inside as u8).to_string(),
            n.verdict.component_label.to_string(),
            format!("{:e}", n.verdict.margin),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parameter(format!("csv output failed: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn named_points() {
        let v = in_d_inequality(c(0.0, 0.0));
        assert!(v.inside);
        assert_eq!(v.component_label, Component::CentralSquare);
        let v = in_d_inequality(c(2.0, -2.0));
        assert_eq!(v.component_label, Component::LowerRight);
        let v = in_d_decomposition(c(1.0, 1.0));
        assert_eq!(v.component_label, Component::CentralSquare);
        let v = in_d_decomposition(c(-2.0, 2.0));
        assert_eq!(v.component_label, Component::UpperLeft);
        assert!(!in_d_inequality(c(2.0, 2.0)).inside);
        assert!(!in_d_decomposition(c(2.0, 2.0)).inside);
    }

    #[test]
    fn edges_and_vertices_are_not_inside() {
        for v in [in_d_inequality(c(HALF_WIDTH, 0.0)), in_d_decomposition(c(HALF_WIDTH, 0.0))] {
            assert!(!v.inside);
            assert_eq!(v.component_label, Component::Boundary);
        }
        for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let z = c(sx * HALF_WIDTH, sy * HALF_WIDTH);
            assert!(!in_d_inequality(z).inside, "{z}");
            assert!(!in_d_decomposition(z).inside, "{z}");
        }
    }

    #[test]
    fn margin_factorizes() {
        // For x ≥ y the margin equals (c − x)(c + y)/c.
        for &(x, y) in &[(0.3, -0.2), (2.0, -3.0), (1.0, 0.5), (-0.5, -2.0)] {
            let m = in_d_inequality(c(x, y)).margin;
            let f = (HALF_WIDTH - x) * (HALF_WIDTH + y) / HALF_WIDTH;
            assert!((m - f).abs() < 1e-14, "{x},{y}");
        }
    }

    #[test]
    fn grid_is_row_major_and_parallel_invariant() {
        let a = region_grid(-1.0, 1.0, -0.5, 0.5, 0.5).unwrap();
        assert_eq!(a.len(), 5 * 3);
        assert_eq!(a[1].z, c(-0.5, -0.5));
        assert_eq!(a[5].z, c(-1.0, 0.0));
        let b = region_grid_par(-1.0, 1.0, -0.5, 0.5, 0.5, 3).unwrap();
        assert_eq!(a, b);
        assert!(region_grid(1.0, 0.0, 0.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn require_inside_reports_the_point() {
        assert!(require_inside(c(0.5, 0.2)).is_ok());
        assert_eq!(require_inside(c(2.0, 2.0)), Err(Error::Region(c(2.0, 2.0))));
    }

    #[test]
    fn csv_columns() {
        let nodes = region_grid(0.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&nodes, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,y,inside,label,margin"));
        assert!(lines.next().unwrap().starts_with("0,0,1,central_square,"));
    }
}
