use std::collections::BTreeMap;

use qwalk_core::analytic::{
    default_num_k, evolve_fourier, limiting_pdd, stationary_pdd, BetaVector,
};
use qwalk_core::classify::{
    classify_distribution, classify_snapshot, symmetry_defect, table_probes, transport_report,
};
use qwalk_core::observables::{
    mean_and_variance, pdd, position_entropy, shannon_entropy, PddSnapshot,
};
use qwalk_core::state::WalkerState;
use qwalk_core::walk::{run_recorded, WalkParams, Walker};
use qwalk_core::NORM_TOL;
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::settings::{Point, Settings, POINT_COLUMNS};
use crate::table::{emit, Cell, Table};

/// Observables of one state.
#[derive(Debug, Clone, PartialEq)]
struct Metrics {
    mean: f64,
    variance: f64,
    shannon: f64,
    von_neumann: f64,
    class: &'static str,
}

fn metrics(state: &WalkerState, snap: &PddSnapshot, s: &Settings) -> CliResult<Metrics> {
    let drift = (state.norm_sqr() - 1.0).abs();
    if drift > NORM_TOL * state.step().max(1) as f64 {
        return Err(CliError::Domain(format!(
            "norm drift {drift:e} at step {}",
            state.step()
        )));
    }
    let (mean, variance) = mean_and_variance(snap);
    Ok(Metrics {
        mean,
        variance,
        shannon: shannon_entropy(snap),
        von_neumann: position_entropy(state)?,
        class: classify_snapshot(snap, &s.classifier.config()).kind.name(),
    })
}

fn params(s: &Settings, p: &Point, steps: usize) -> WalkParams {
    WalkParams::new(p.coin(), p.init(s.family), steps)
}

fn point_columns() -> Vec<String> {
    std::iter::once("init")
        .chain(POINT_COLUMNS)
        .map(String::from)
        .collect()
}

fn point_cells(s: &Settings, p: &Point) -> Vec<Cell> {
    std::iter::once(Cell::text(s.family.name()))
        .chain(p.values().into_iter().map(Cell::Real))
        .collect()
}

pub fn run(s: &Settings) -> CliResult<()> {
    let p = s.single_point("run")?;
    let t = s.single_steps("run")?;
    if s.record_states && s.output.is_none() {
        return Err(CliError::usage("--record-states needs --output"));
    }
    let mut columns: Vec<String> = [
        "step",
        "mean",
        "variance",
        "shannon_entropy",
        "von_neumann_entropy",
        "class",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    let radius = t as i64;
    columns.extend((-radius..=radius).map(|x| format!("p({x})")));
    let mut series = Table::new(columns);
    let mut states = Table::new(["step", "x", "coin", "re", "im"]);
    for state in Walker::new(&params(s, &p, t))? {
        let snap = pdd(&state);
        let m = metrics(&state, &snap, s)?;
        let mut row = vec![
            Cell::Int(state.step() as i64),
            Cell::Real(m.mean),
            Cell::Real(m.variance),
            Cell::Real(m.shannon),
            Cell::Real(m.von_neumann),
            Cell::text(m.class),
        ];
        row.extend((-radius..=radius).map(|x| Cell::Real(snap.get(x))));
        series.push(row);
        if s.record_states {
            for (x, amps) in state.iter() {
                for (z, a) in amps.iter().enumerate() {
                    states.push(vec![
                        Cell::Int(state.step() as i64),
                        Cell::Int(x),
                        Cell::text(["00", "01", "10", "11"][z]),
                        Cell::Real(a.re),
                        Cell::Real(a.im),
                    ]);
                }
            }
        }
    }
    let companions = if s.record_states {
        vec![("states", states)]
    } else {
        Vec::new()
    };
    emit(s, "run", &series, &companions)
}

fn sweep_point(s: &Settings, p: &Point) -> CliResult<Vec<Metrics>> {
    let wanted: BTreeMap<usize, ()> = s.steps.iter().map(|&t| (t, ())).collect();
    let mut found = BTreeMap::new();
    for state in Walker::new(&params(s, p, s.max_steps()))? {
        if wanted.contains_key(&state.step()) {
            let snap = pdd(&state);
            found.insert(state.step(), metrics(&state, &snap, s)?);
        }
    }
    Ok(s.steps.iter().map(|t| found[t].clone()).collect())
}

/// Grid evaluation shared by `sweep` and `entropy`.
pub fn sweep(s: &Settings, entropy_only: bool) -> CliResult<()> {
    let points = s.points();
    let results: Vec<Vec<Metrics>> = s.pool()?.install(|| {
        points
            .par_iter()
            .map(|p| sweep_point(s, p))
            .collect::<CliResult<_>>()
    })?;
    let mut columns = point_columns();
    columns.push("step".into());
    if entropy_only {
        columns.extend(["shannon_entropy", "von_neumann_entropy"].map(String::from));
    } else {
        columns.extend(
            [
                "variance",
                "shannon_entropy",
                "von_neumann_entropy",
                "class",
            ]
            .map(String::from),
        );
    }
    let mut table = Table::new(columns);
    for (p, per_step) in points.iter().zip(&results) {
        for (t, m) in s.steps.iter().zip(per_step) {
            let mut row = point_cells(s, p);
            row.push(Cell::Int(*t as i64));
            if !entropy_only {
                row.push(Cell::Real(m.variance));
            }
            row.push(Cell::Real(m.shannon));
            row.push(Cell::Real(m.von_neumann));
            if !entropy_only {
                row.push(Cell::text(m.class));
            }
            table.push(row);
        }
    }
    emit(
        s,
        if entropy_only { "entropy" } else { "sweep" },
        &table,
        &[],
    )
}

/// The closed form needs identical rotation sub-coins.
fn limit_point(s: &Settings, command: &str) -> CliResult<Point> {
    let p = s.single_point(command)?;
    if p.gamma != p.theta {
        return Err(CliError::usage(format!(
            "{command} needs identical sub-coins (gamma = theta)"
        )));
    }
    if [p.xi1, p.zeta1, p.xi2, p.zeta2].iter().any(|&v| v != 0.0) {
        return Err(CliError::usage(format!(
            "{command} needs rotation sub-coins (xi = zeta = 0)"
        )));
    }
    Ok(p)
}

pub fn limit(s: &Settings) -> CliResult<()> {
    let p = limit_point(s, "limit")?;
    let lim = limiting_pdd(p.theta, BetaVector::from_spec(&p.init(s.family))?)?;
    let mut table = Table::new(["x", "p"]);
    let r = s.x_max as i64;
    for x in -r..=r {
        table.push(vec![Cell::Int(x), Cell::Real(lim.p(x))]);
    }
    emit(s, "limit", &table, &[])
}

pub fn compare(s: &Settings) -> CliResult<()> {
    let p = limit_point(s, "compare")?;
    let t = s.single_steps("compare")?;
    if s.avg_window > t {
        return Err(CliError::usage("--avg-window must not exceed --steps"));
    }
    let init = p.init(s.family);
    let lim = limiting_pdd(p.theta, BetaVector::from_spec(&init)?)?;
    let params = params(s, &p, t);
    let r = s.x_max as i64;
    let width = 2 * s.x_max + 1;
    let mut avg = vec![0.0; width];
    let mut last = None;
    for state in Walker::new(&params)? {
        if state.step() + s.avg_window >= t {
            let snap = pdd(&state);
            for (i, x) in (-r..=r).enumerate() {
                avg[i] += snap.get(x);
            }
            last = Some(snap);
        }
    }
    let last = last.expect("walker yields the final step");
    let n_avg = (s.avg_window + 1) as f64;
    let fourier = evolve_fourier(&params, s.num_k.unwrap_or_else(|| default_num_k(t)))?;
    let stat = stationary_pdd(
        p.coin(),
        &init,
        s.x_max,
        s.num_k.unwrap_or(crate::settings::DEFAULT_STATIONARY_K),
    )?;
    let mut table = Table::new([
        "x",
        "simulated_avg",
        "simulated_final",
        "fourier_final",
        "stationary",
        "analytic",
        "dev_avg_analytic",
        "dev_stationary_analytic",
        "dev_fourier_simulated",
    ]);
    for (i, x) in (-r..=r).enumerate() {
        let sim = avg[i] / n_avg;
        let fin = last.get(x);
        let fou = fourier.get(x);
        let st = stat.get(x);
        let an = lim.p(x);
        table.push(vec![
            Cell::Int(x),
            Cell::Real(sim),
            Cell::Real(fin),
            Cell::Real(fou),
            Cell::Real(st),
            Cell::Real(an),
            Cell::Real((sim - an).abs()),
            Cell::Real((st - an).abs()),
            Cell::Real((fou - fin).abs()),
        ]);
    }
    emit(s, "compare", &table, &[])
}

fn opt_real(v: Option<f64>) -> Cell {
    v.map_or(Cell::Null, Cell::Real)
}

pub fn classify(s: &Settings) -> CliResult<()> {
    let t = s.single_steps("classify")?;
    let cfg = s.classifier.config();
    if s.suite.is_some() {
        let probes = table_probes();
        let observed: Vec<_> = s.pool()?.install(|| {
            probes
                .par_iter()
                .map(|pr| {
                    let traj = run_recorded(&WalkParams::new(pr.coin, pr.init, t), false)?;
                    Ok(classify_distribution(&traj, &cfg)?)
                })
                .collect::<CliResult<Vec<_>>>()
        })?;
        let mut table = Table::new([
            "table",
            "row",
            "init",
            "eta",
            "alpha",
            "beta",
            "phi",
            "theta",
            "gamma",
            "step",
            "expected",
            "observed",
            "match",
            "outer_peaks",
            "tv_distance",
        ]);
        let mut hits = 0;
        for (pr, c) in probes.iter().zip(&observed) {
            let ok = pr.expected.contains(&c.kind);
            hits += usize::from(ok);
            let expected: Vec<&str> = pr.expected.iter().map(|k| k.name()).collect();
            table.push(vec![
                Cell::text(pr.table.name()),
                Cell::text(pr.row),
                Cell::text(pr.init.family.name()),
                Cell::Real(pr.init.eta),
                Cell::Real(pr.init.alpha),
                Cell::Real(pr.init.beta),
                Cell::Real(pr.init.phi),
                Cell::Real(pr.coin.theta()),
                Cell::Real(pr.coin.gamma()),
                Cell::Int(t as i64),
                Cell::text(expected.join("|")),
                Cell::text(c.kind.name()),
                Cell::Bool(ok),
                Cell::Int(c.peaks.len() as i64),
                opt_real(c.gaussian_fit.map(|f| f.tv_distance)),
            ]);
        }
        eprintln!("{hits}/{} probes match their table rows", probes.len());
        return emit(s, "classify", &table, &[]);
    }

    let points = s.points();
    let rows: Vec<Vec<Cell>> = s.pool()?.install(|| {
        points
            .par_iter()
            .map(|p| {
                let traj = run_recorded(&params(s, p, t), false)?;
                let c = classify_distribution(&traj, &cfg)?;
                let tr = transport_report(&traj, &cfg);
                let mut row = point_cells(s, p);
                row.extend([
                    Cell::Int(t as i64),
                    Cell::text(c.kind.name()),
                    Cell::Int(c.peaks.len() as i64),
                    opt_real(c.gaussian_fit.map(|f| f.tv_distance)),
                    Cell::Real(symmetry_defect(traj.last())),
                    Cell::Bool(c.stable),
                    Cell::Real(tr.trapped_mass),
                    Cell::Real(tr.front_mass),
                    Cell::Bool(tr.self_trapped),
                    Cell::Bool(tr.partially_trapped),
                    Cell::Bool(tr.perfect_transfer),
                ]);
                Ok(row)
            })
            .collect::<CliResult<_>>()
    })?;
    let mut columns = point_columns();
    columns.extend(
        [
            "step",
            "class",
            "outer_peaks",
            "tv_distance",
            "symmetry_defect",
            "stable",
            "trapped_mass",
            "front_mass",
            "self_trapped",
            "partially_trapped",
            "perfect_transfer",
        ]
        .map(String::from),
    );
    let mut table = Table::new(columns);
    for row in rows {
        table.push(row);
    }
    emit(s, "classify", &table, &[])
}
