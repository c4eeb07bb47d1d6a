use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{format_error, format_sig12, HarnessError, StudySpec};
use crate::dg::{l2_error, project_initial, solve_advection, UniformMesh2D};
use crate::filtering::{filter_field, FilterConfig, FilterKind, Sampling};

/// Errors below this sit at the rounding floor; their orders are noise.
pub const NEAR_EPSILON: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub k: usize,
    pub n: usize,
    /// `None` for the unfiltered DG solution.
    pub filter: Option<FilterConfig>,
    pub l2_error: f64,
    /// `log(e_coarse / e_fine) / log(N_fine / N_coarse)` against the next
    /// coarser N with the same k and filter.
    pub order: Option<f64>,
}

impl ConvergenceRow {
    fn same_case(&self, k: usize, filter: Option<&FilterConfig>) -> bool {
        self.k == k && self.filter.as_ref() == filter
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub spec: StudySpec,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn find(&self, k: usize, n: usize, filter: Option<&FilterConfig>) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.n == n && r.same_case(k, filter))
    }

    /// Header `k,N,filter,theta,mu,l2_error,order`; blank cells where a
    /// column does not apply.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,N,filter,theta,mu,l2_error,order\n");
        for r in &self.rows {
            let (kind, theta, mu) = match &r.filter {
                None => ("none", String::new(), String::new()),
                Some(f) => match f.kind {
                    FilterKind::Line => ("line", format_sig12(f.theta), format_sig12(f.mu)),
                    FilterKind::Tensor => ("tensor", String::new(), format_sig12(f.mu)),
                },
            };
            let order = r.order.map(|o| format!("{o:.4}")).unwrap_or_default();
            let _ = writeln!(out, "{},{},{kind},{theta},{mu},{},{order}", r.k, r.n, format_error(r.l2_error));
        }
        out
    }

    /// Run configuration and rounding-floor warnings, kept out of the CSV.
    pub fn meta(&self) -> String {
        let s = &self.spec;
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let mut out = String::new();
        let _ = writeln!(out, "ic = {}", s.ic);
        let _ = writeln!(out, "tfinal = {}", s.tfinal);
        let _ = writeln!(out, "dt_rule = {}", s.dt_rule.describe());
        let _ = writeln!(out, "k = {}", list(&s.degrees));
        let _ = writeln!(out, "n = {}", list(&s.sizes));
        let filters: Vec<String> = s.filters.iter().map(FilterConfig::describe).collect();
        let _ = writeln!(out, "filters = {}", filters.join("; "));
        for r in self.rows.iter().filter(|r| r.l2_error < NEAR_EPSILON) {
            let name = r.filter.map(|f| f.describe()).unwrap_or_else(|| "none".into());
            let _ = writeln!(
                out,
                "near_epsilon: k={} N={} filter={name} error={}",
                r.k,
                r.n,
                format_error(r.l2_error)
            );
        }
        out
    }

    /// Writes `study.csv` and `study_meta.txt` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<(), HarnessError> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        fs::write(dir.join("study.csv"), self.to_csv())?;
        fs::write(dir.join("study_meta.txt"), self.meta())?;
        Ok(())
    }
}

/// Solves every `(k, N)` case to `tfinal`, then measures the unfiltered and
/// filtered errors on the shared `(k+3)²` error grid.
pub fn run_convergence_study(spec: &StudySpec) -> Result<ConvergenceReport, HarnessError> {
    spec.validate()?;
    let mut sizes = spec.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let exact = spec.ic.exact(spec.tfinal);
    let u0 = spec.ic.exact(0.0);
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &k in &spec.degrees {
        for &n in &sizes {
            let case = format!("k={k} N={n}");
            let run = || -> Result<Vec<(Option<FilterConfig>, f64)>, HarnessError> {
                let mesh = UniformMesh2D::square(n)?;
                let field0 = project_initial(&mesh, k, u0)?;
                let field = solve_advection(&field0, spec.tfinal, spec.dt_rule)?;
                let mut errs = vec![(None, l2_error(&field, exact))];
                for f in &spec.filters {
                    let sampled = filter_field(&field, f, Sampling::ErrorGrid)?;
                    errs.push((Some(*f), sampled.l2_error(exact)));
                }
                Ok(errs)
            };
            for (filter, err) in run().map_err(|e| e.in_case(case))? {
                let coarse = rows.iter().rev().find(|r| r.same_case(k, filter.as_ref()));
                let order = coarse.map(|c| (c.l2_error / err).ln() / (n as f64 / c.n as f64).ln());
                rows.push(ConvergenceRow {
                    k,
                    n,
                    filter,
                    l2_error: err,
                    order,
                });
            }
        }
    }
    Ok(ConvergenceReport {
        spec: spec.clone(),
        rows,
    })
}
