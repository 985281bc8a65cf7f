//! Sign-change scanning and bisection on the critical line.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::settings::EvalSettings;
use crate::shifts::{f_z_critical_scaled, ShiftConfig};

/// Grid values below this magnitude count as zeros sitting on a node.
pub const ON_NODE_ZERO: f64 = 1e-13;
pub const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroBracket<T = f64> {
    pub t_lo: T,
    pub t_hi: T,
    pub f_lo: T,
    pub f_hi: T,
}

impl<T: Real> ZeroBracket<T> {
    /// A zero found exactly on a grid node.
    pub fn is_on_node(&self) -> bool {
        self.t_lo == self.t_hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroEstimate<T = f64> {
    pub t: T,
    pub residual: T,
    pub iterations: usize,
}

fn wrap<T: Real>(t: T, e: Error) -> Error {
    match e {
        e @ Error::Evaluation { .. } => e,
        e => Error::Evaluation { t: t.to_f64().unwrap_or(f64::NAN), source: Box::new(e) },
    }
}

fn check_grid<T: Real>(t_lo: T, t_hi: T, step: T) -> Result<()> {
    if !(step > T::zero() && step.is_finite()) {
        return Err(Error::Parameter("scan step must be positive".into()));
    }
    if !(t_lo < t_hi && t_lo.is_finite() && t_hi.is_finite()) {
        return Err(Error::Parameter("scan needs finite t_lo < t_hi".into()));
    }
    Ok(())
}

/// Nodes t_i = t_lo + i·step up to t_hi; t_hi itself is appended when it is off the grid.
pub fn grid_nodes<T: Real>(t_lo: T, t_hi: T, step: T) -> Vec<T> {
    let span = (t_hi - t_lo) / step;
    let n = (span + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
    let mut nodes: Vec<T> = (0..=n).map(|i| t_lo + step * T::count(i)).collect();
    if span - T::count(n) > T::lit(1e-9) {
        nodes.push(t_hi);
    }
    nodes
}

/// Brackets among consecutive nodes `ts[k], ts[k+1]`, tagged with the global index of their left node.
fn brackets_in<T: Real>(first_index: usize, ts: &[T], fs: &[T]) -> Vec<(usize, ZeroBracket<T>)> {
    let tiny = T::lit(ON_NODE_ZERO);
    let mut out = Vec::new();
    for k in 0..ts.len() {
        if fs[k].abs() < tiny {
            out.push((first_index + k, ZeroBracket { t_lo: ts[k], t_hi: ts[k], f_lo: fs[k], f_hi: fs[k] }));
            continue;
        }
        if k + 1 < ts.len() && fs[k + 1].abs() >= tiny && fs[k] * fs[k + 1] < T::zero() {
            out.push((first_index + k, ZeroBracket { t_lo: ts[k], t_hi: ts[k + 1], f_lo: fs[k], f_hi: fs[k + 1] }));
        }
    }
    out
}

/// All strict sign changes of `f` between consecutive grid nodes, plus on-node zeros.
pub fn scan<T, F>(t_lo: T, t_hi: T, step: T, mut f: F) -> Result<Vec<ZeroBracket<T>>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    check_grid(t_lo, t_hi, step)?;
    let ts = grid_nodes(t_lo, t_hi, step);
    let fs = ts.iter().map(|&t| f(t).map_err(|e| wrap(t, e))).collect::<Result<Vec<T>>>()?;
    Ok(brackets_in(0, &ts, &fs).into_iter().map(|(_, b)| b).collect())
}

/// Bisect until the bracket is at most `tol` wide; returns the midpoint.
pub fn bisect<T, F>(b: &ZeroBracket<T>, mut f: F, tol: T) -> Result<ZeroEstimate<T>>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if !(tol > T::zero()) {
        return Err(Error::Parameter("bisection tolerance must be positive".into()));
    }
    if b.is_on_node() {
        return Ok(ZeroEstimate { t: b.t_lo, residual: b.f_lo.abs(), iterations: 0 });
    }
    if !(b.t_lo < b.t_hi && b.f_lo * b.f_hi < T::zero()) {
        return Err(Error::Parameter("bracket must satisfy t_lo < t_hi and f_lo·f_hi < 0".into()));
    }
    let (mut lo, mut hi, mut f_lo) = (b.t_lo, b.t_hi, b.f_lo);
    let half = T::lit(0.5);
    let mut iterations = 0;
    while hi - lo > tol {
        if iterations == MAX_BISECTIONS {
            return Err(Error::MaxIter(MAX_BISECTIONS));
        }
        let mid = (lo + hi) * half;
        if !(lo < mid && mid < hi) {
            break;
        }
        let fm = f(mid).map_err(|e| wrap(mid, e))?;
        iterations += 1;
        if fm == T::zero() {
            return Ok(ZeroEstimate { t: mid, residual: T::zero(), iterations });
        }
        if (fm < T::zero()) == (f_lo < T::zero()) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    let t = (lo + hi) * half;
    let residual = f(t).map_err(|e| wrap(t, e))?.abs();
    Ok(ZeroEstimate { t, residual, iterations })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub config_digest: String,
    pub settings: EvalSettings,
    pub range: (f64, f64),
    pub grid_step: f64,
    pub tol: f64,
    pub brackets: Vec<ZeroBracket>,
    pub zeros: Vec<ZeroEstimate>,
}

fn split_ranges(len: usize, parts: usize) -> Vec<(usize, usize)> {
    // Half-open ranges of node indices; neighbours share one node.
    let parts = parts.clamp(1, len.max(1));
    let base = len / parts;
    let extra = len % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for p in 0..parts {
        let size = base + usize::from(p < extra);
        let end = (start + size + 1).min(len);
        out.push((start, end));
        start += size;
    }
    out
}

/// Scan the normalized critical-line function e^{π|t|/4}F_z(½+it) and refine every bracket.
///
/// The node range is cut into `workers` chunks that overlap by one node, so
/// no sign change at a chunk boundary is lost; per-chunk brackets are merged
/// by node index. The report does not depend on `workers`.
pub fn scan_fz(
    cfg: &ShiftConfig,
    t_lo: f64,
    t_hi: f64,
    step: f64,
    tol: f64,
    workers: usize,
    settings: &EvalSettings,
) -> Result<ScanReport> {
    let settings = settings.validated()?;
    check_grid(t_lo, t_hi, step)?;
    if workers == 0 {
        return Err(Error::Parameter("workers must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Parameter("tol must be positive".into()));
    }
    let f = |t: f64| f_z_critical_scaled(t, cfg, &settings);
    let ts = grid_nodes(t_lo, t_hi, step);
    let n_nodes = ts.len();
    let ranges = split_ranges(n_nodes, workers);

    let per_chunk: Vec<Result<Vec<(usize, ZeroBracket)>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(a, b)| {
                let nodes = &ts[a..b];
                scope.spawn(move || {
                    let fs = nodes.iter().map(|&t| f(t).map_err(|e| wrap(t, e))).collect::<Result<Vec<_>>>()?;
                    // The last node belongs to the next chunk unless this is the final one.
                    let mut found = brackets_in(a, nodes, &fs);
                    if b < n_nodes {
                        found.retain(|(i, br)| !(br.is_on_node() && *i == b - 1));
                    }
                    Ok(found)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
    });
    let mut tagged = Vec::new();
    for chunk in per_chunk {
        tagged.extend(chunk?);
    }
    tagged.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.is_on_node().cmp(&y.1.is_on_node()).reverse()));
    tagged.dedup_by(|x, y| x.0 == y.0 && x.1 == y.1);
    let brackets: Vec<ZeroBracket> = tagged.into_iter().map(|(_, b)| b).collect();

    let chunk_len = brackets.len().div_ceil(workers).max(1);
    let refined: Vec<Result<Vec<ZeroEstimate>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = brackets
            .chunks(chunk_len)
            .map(|chunk| scope.spawn(move || chunk.iter().map(|br| bisect(br, f, tol)).collect::<Result<Vec<_>>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("bisection worker panicked")).collect()
    });
    let mut zeros = Vec::with_capacity(brackets.len());
    for r in refined {
        zeros.extend(r?);
    }
    Ok(ScanReport {
        schema_version: 1,
        config_digest: cfg.digest(),
        settings,
        range: (t_lo, t_hi),
        grid_step: step,
        tol,
        brackets,
        zeros,
    })
}

impl ScanReport {
    /// CSV with columns t_lo, t_hi, t_zero, f_residual, iterations.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Parameter(format!("csv output failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t_lo", "t_hi", "t_zero", "f_residual", "iterations"]).map_err(io)?;
        for (b, z) in self.brackets.iter().zip(&self.zeros) {
            w.write_record([
                b.t_lo.to_string(),
                b.t_hi.to_string(),
                z.t.to_string(),
                format!("{:e}", z.residual),
                z.iterations.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Parameter(format!("csv output failed: {e}")))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parameter(format!("json output failed: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::big_xi;

    #[test]
    fn grid_construction() {
        assert_eq!(grid_nodes(0.0, 1.0, 0.25), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(grid_nodes(0.0, 1.0, 0.4), vec![0.0, 0.4, 0.8, 1.0]);
        assert_eq!(split_ranges(10, 3), vec![(0, 5), (4, 8), (7, 10)]);
        assert_eq!(split_ranges(2, 8), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn simple_scans() {
        assert!(scan(0.0, 10.0, 0.5, |_| Ok(1.0)).unwrap().is_empty());
        let b = scan(10.0, 20.0, 1.0, |t| Ok(t - 15.0)).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0].is_on_node() && b[0].t_lo == 15.0);
        assert!(scan(1.0, 0.0, 0.1, Ok).is_err());
    }

    #[test]
    fn evaluation_errors_carry_t() {
        let r = scan(0.0, 1.0, 0.25, |t| if t > 0.6 { Err(Error::Overflow("x")) } else { Ok(t) });
        match r {
            Err(Error::Evaluation { t, source }) => {
                assert_eq!(t, 0.75);
                assert_eq!(*source, Error::Overflow("x"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bisection() {
        let b = ZeroBracket { t_lo: -1.0f64, t_hi: 2.0, f_lo: -1.0, f_hi: 2.0 };
        let z = bisect(&b, Ok, 1e-10).unwrap();
        assert!(z.t.abs() <= 1e-10);
        let b3 = ZeroBracket { t_lo: -1.0, t_hi: 2.0, f_lo: -1.0, f_hi: 8.0 };
        let z = bisect(&b3, |t: f64| Ok(t.powi(3)), 1e-10).unwrap();
        assert!(z.t.abs() <= 1e-10 && z.residual < 1e-29);
        let bf = ZeroBracket { t_lo: -1.0f32, t_hi: 2.0, f_lo: -1.0, f_hi: 2.0 };
        assert!(bisect(&bf, Ok, 1e-5).unwrap().t.abs() <= 1e-5);
        let bad = ZeroBracket { t_lo: 0.0, t_hi: 1.0, f_lo: 1.0, f_hi: 1.0 };
        assert!(bisect(&bad, Ok, 1e-3).is_err());
        assert!(matches!(bisect(&b, Ok, 1e-300), Ok(_) | Err(Error::MaxIter(_))));
    }

    #[test]
    fn xi_zeros() {
        let s = EvalSettings::default();
        let f = |t: f64| big_xi(t, &s);
        let b = scan(10.0, 30.0, 0.05, f).unwrap();
        assert_eq!(b.len(), 3);
        let z = bisect(&b[0], f, 1e-8).unwrap();
        assert!((z.t - 14.134_725_141_734_694).abs() < 1e-8);
    }
}
