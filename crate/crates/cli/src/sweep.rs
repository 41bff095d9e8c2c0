//! `sweep-delta-plus`: commutator magnitudes over an (s, rapidity) grid.

use qsplit_core::fieldnum::{spacelike_grid, sweep, IntervalKind, IntervalPoint, Method, QuadratureConfig, SweepRow};
use qsplit_core::scenarios::ScenarioReport;

use crate::error::CliError;
use crate::params::{Kind, ParamSpec, Params};

pub const NAME: &str = "sweep_delta_plus";

pub const PARAMS: &[ParamSpec] = &[
    ParamSpec { key: "masses", kind: Kind::RealList, default: "0.5,1,2", help: "field masses" },
    ParamSpec { key: "s_min", kind: Kind::Real, default: "0.3", help: "smallest proper separation" },
    ParamSpec { key: "s_max", kind: Kind::Real, default: "2", help: "largest proper separation" },
    ParamSpec { key: "n_s", kind: Kind::Int, default: "10", help: "separations" },
    ParamSpec { key: "eta_min", kind: Kind::Real, default: "-1.5", help: "smallest rapidity" },
    ParamSpec { key: "eta_max", kind: Kind::Real, default: "1.5", help: "largest rapidity" },
    ParamSpec { key: "n_eta", kind: Kind::Int, default: "10", help: "rapidities" },
    ParamSpec { key: "method", kind: Kind::Text, default: "quadrature", help: "quadrature or closed_form" },
    ParamSpec { key: "eps", kind: Kind::Real, default: "0.01", help: "largest damping factor of the quadrature ladder" },
    ParamSpec { key: "timelike", kind: Kind::Bool, default: "false", help: "add the mirrored timelike points t = s cosh η, r = s |sinh η|" },
];

pub fn run(p: &Params, tol: f64) -> Result<(ScenarioReport, Vec<SweepRow>), CliError> {
    let method: Method = p.text("method").parse()?;
    let s_range = (p.real("s_min"), p.real("s_max"));
    let eta_range = (p.real("eta_min"), p.real("eta_max"));
    if !(s_range.0 > 0.0 && s_range.1 >= s_range.0) {
        return Err(CliError::Config("need 0 < s_min ≤ s_max".into()));
    }
    let mut points = spacelike_grid(p.real_list("masses"), s_range, eta_range, p.usize("n_s")?, p.usize("n_eta")?);
    if p.bool("timelike") {
        let mirrored: Vec<IntervalPoint> = points
            .iter()
            .map(|q| IntervalPoint::new(q.r, q.t.abs(), q.m))
            .collect::<Result<_, _>>()?;
        points.extend(mirrored);
    }
    let rows = sweep(&points, method, &QuadratureConfig::with_eps(p.real("eps")))?;

    let mut r = ScenarioReport::new(NAME);
    let spacelike = rows.iter().filter(|row| row.kind == IntervalKind::Spacelike);
    let max_antisym = spacelike.clone().map(|row| row.antisym_abs).fold(0.0, f64::max);
    let min_sym = spacelike.map(|row| row.sym_abs).fold(f64::INFINITY, f64::min);
    r.observe("points", rows.len() as f64);
    if min_sym.is_finite() {
        r.expect_at_most("max_spacelike_antisym_abs", max_antisym, 0.0, tol.max(1e-8));
        r.expect_at_least("min_spacelike_sym_abs", min_sym, 1e-4);
    }
    Ok((r, rows))
}
