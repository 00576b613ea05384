//! CSV grids of `|φ|`, resolvent norms and the `Λ` indicator.

use rayon::prelude::*;

use dsk_core::riesz::{lambda_indicator, resolvent_norm, MatrixOperator};
use dsk_core::DomainError;

use crate::scenario::{GridExport, Quantity, Scenario, Task};
use crate::RunError;

fn matrix(task: &Task) -> Option<&MatrixOperator> {
    match task {
        Task::RieszSplit(p) => Some(&p.matrix),
        Task::LevelSetScan(p) => Some(&p.matrix),
        _ => None,
    }
}

/// Values at every grid point, in the order of [`GridExport::points`].
pub fn grid_values(s: &Scenario, g: &GridExport) -> Result<Vec<f64>, RunError> {
    let points = g.points();
    let mismatch = |q: &str| RunError::Usage(format!("quantity {q} is not available for this scenario kind"));
    match g.quantity {
        Quantity::Modulus => {
            let Task::InnerEval(p) = &s.task else {
                return Err(mismatch("modulus"));
            };
            p.function.validate().map_err(|e| RunError::Usage(e.to_string()))?;
            points
                .par_iter()
                .map(|&z| {
                    if z.norm() > 1.0 {
                        return Err(RunError::Usage(DomainError::OutsideDisc(z).to_string()));
                    }
                    let v = if z.norm() < 1.0 { p.function.eval(z) } else { p.function.eval_closed(z) };
                    v.map(|v| v.norm()).map_err(|e| RunError::Usage(e.to_string()))
                })
                .collect()
        }
        Quantity::ResolventNorm => {
            let t = matrix(&s.task).ok_or_else(|| mismatch("resolvent_norm"))?;
            Ok(points.par_iter().map(|&z| resolvent_norm(t, z)).collect())
        }
        Quantity::LambdaIndicator => {
            let Task::LevelSetScan(p) = &s.task else {
                return Err(mismatch("lambda_indicator"));
            };
            let m = p
                .m
                .or_else(|| p.matrix.polynomial_bound())
                .ok_or_else(|| RunError::Usage("no polynomial bound M is known; pass `m`".into()))?;
            Ok(points
                .par_iter()
                .map(|&z| if lambda_indicator(&p.matrix, p.c, m, p.k, z) { 1.0 } else { 0.0 })
                .collect())
        }
    }
}

/// `re,im,value` rows; infinite values are written as `inf`.
pub fn grid_csv(s: &Scenario) -> Result<String, RunError> {
    let g = s.grid.as_ref().ok_or_else(|| RunError::Usage("scenario has no `grid` section".into()))?;
    let values = grid_values(s, g)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["re", "im", "value"]).expect("in-memory write");
    for (z, v) in g.points().into_iter().zip(values) {
        w.write_record([z.re.to_string(), z.im.to_string(), v.to_string()]).expect("in-memory write");
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii csv"))
}
