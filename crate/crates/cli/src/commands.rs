use std::fmt::Write as _;

use serde::Serialize;
use spindemag_core::entanglement::{classify_point, phase_boundary, SpinPair, ENTANGLEMENT_THRESHOLD};
use spindemag_core::hamiltonian::{build_h, build_hdd, build_hz, local_field, ChainGeometry, FieldSpec};
use spindemag_core::isentrope::{
    AdSchedule, SweepTable, Trajectory, TrajectoryPoint, Truncation, TruncationReason,
};
use spindemag_core::spectrum::diagonalize;
use spindemag_core::spin::OperatorMatrix;
use spindemag_core::MAX_SPINS;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::format::number;

/// Largest chain whose matrices are printed in full.
pub const MATRIX_PRINT_MAX_SPINS: usize = 4;

/// Relative change of successive maxima below which the sweep reports a
/// crossover to N-independence.
pub const CROSSOVER_REL_TOL: f64 = 0.01;

const BASE_COLUMNS: &str = "omega0,beta,entropy,heat_capacity_per_spin,polarization";

fn geometry(cfg: &RunConfig, n: usize) -> CliResult<ChainGeometry> {
    Ok(ChainGeometry::new(n, cfg.theta, cfg.phi)?)
}

fn schedule(cfg: &RunConfig, omega0_init: f64, beta_init: f64) -> CliResult<AdSchedule> {
    Ok(AdSchedule::with_spacing(
        omega0_init,
        beta_init,
        cfg.omega0_final,
        cfg.grid_points,
        cfg.grid_spacing.into(),
    )?)
}

fn pair_columns(pairs: &[SpinPair]) -> String {
    pairs.iter().map(|p| format!(",C_{}_{}", p.m, p.n)).collect()
}

fn row(out: &mut String, p: &TrajectoryPoint, n: usize, pairs: &[SpinPair]) {
    let _ = write!(
        out,
        "{},{},{},{},{}",
        number(p.omega0),
        number(p.beta),
        number(p.entropy),
        number(p.heat_capacity / n as f64),
        number(p.polarization)
    );
    for &pair in pairs {
        out.push(',');
        if let Some(c) = p.concurrence_of(pair) {
            out.push_str(&number(c));
        }
    }
    out.push('\n');
}

fn trace(cfg: &RunConfig, n: usize, pairs: &[SpinPair]) -> CliResult<Trajectory> {
    let sched = schedule(cfg, cfg.omega0_init()?, cfg.beta_init()?)?;
    let table = SweepTable::build(&geometry(cfg, n)?, sched.omega0_init(), sched.grid(), pairs)?;
    Ok(table.trace(sched.beta_init())?)
}

/// Adiabatic demagnetization run of one chain.
pub fn ad(cfg: &RunConfig) -> CliResult<String> {
    let n = cfg.n_spins()?;
    let traj = trace(cfg, n, &cfg.pairs)?;
    let mut out = format!("# config {}\n", cfg.echo());
    let _ = writeln!(out, "# initial_entropy={}", number(traj.initial_entropy));
    let _ = writeln!(out, "{BASE_COLUMNS}{}", pair_columns(&cfg.pairs));
    for p in &traj.points {
        row(&mut out, p, n, &cfg.pairs);
    }
    if let Some(t) = traj.truncation {
        let _ = writeln!(out, "# truncated: {}", truncation_text(&t));
    }
    Ok(out)
}

fn truncation_text(t: &Truncation) -> String {
    let w = number(t.omega0);
    match t.reason {
        TruncationReason::EntropyFloor { floor, degeneracy } => format!(
            "omega0={w} reason=entropy_floor degeneracy={degeneracy} floor={}",
            number(floor)
        ),
        TruncationReason::BetaLimit { beta_max } => {
            format!("omega0={w} reason=beta_limit beta_max={}", number(beta_max))
        }
    }
}

/// Same rows as [`ad`] for several chain lengths, with a leading `n_spins`
/// column. Pairs outside a chain leave their fields empty.
pub fn sweep(cfg: &RunConfig) -> CliResult<String> {
    if cfg.n_list.is_empty() {
        return Err(CliError::Config("sweep needs a non-empty n_list".into()));
    }
    if let Some(&bad) = cfg.n_list.iter().find(|&&n| !(2..=MAX_SPINS).contains(&n)) {
        return Err(CliError::Config(format!(
            "chain length {bad} outside 2..={MAX_SPINS}"
        )));
    }
    let mut out = format!("# config {}\n", cfg.echo());
    let _ = writeln!(out, "n_spins,{BASE_COLUMNS}{}", pair_columns(&cfg.pairs));
    let mut trailer = String::new();
    let mut maxima: Vec<Vec<(usize, f64)>> = vec![Vec::new(); cfg.pairs.len()];
    for &n in &cfg.n_list {
        let valid: Vec<SpinPair> = cfg.pairs.iter().copied().filter(|p| p.n <= n).collect();
        let traj = trace(cfg, n, &valid)?;
        let _ = writeln!(
            trailer,
            "# n_spins={n} initial_entropy={}",
            number(traj.initial_entropy)
        );
        for p in &traj.points {
            let _ = write!(out, "{n},");
            row(&mut out, p, n, &cfg.pairs);
        }
        if let Some(t) = traj.truncation {
            let _ = writeln!(trailer, "# n_spins={n} truncated: {}", truncation_text(&t));
        }
        for (k, &pair) in cfg.pairs.iter().enumerate() {
            if pair.n > n {
                continue;
            }
            let curve = traj.concurrence_curve(pair);
            let peak = curve.iter().copied().fold(0.0, f64::max);
            let peaks = local_maxima(&curve);
            let _ = writeln!(
                trailer,
                "# n_spins={n} pair={pair} max_concurrence={} local_maxima={peaks}",
                number(peak)
            );
            maxima[k].push((n, peak));
        }
    }
    for (pair, series) in cfg.pairs.iter().zip(&maxima) {
        let _ = match crossover(series) {
            Some(n) => writeln!(trailer, "# crossover pair={pair} n_spins={n}"),
            None => writeln!(trailer, "# crossover pair={pair} none"),
        };
    }
    out.push_str(&trailer);
    Ok(out)
}

/// Number of interior local maxima (plateaus count once) with positive value.
pub fn local_maxima(c: &[f64]) -> usize {
    let mut count = 0;
    let mut i = 1;
    while i + 1 < c.len() {
        let mut j = i;
        while j + 1 < c.len() && c[j + 1] == c[i] {
            j += 1;
        }
        if j + 1 < c.len() && c[i] > ENTANGLEMENT_THRESHOLD && c[i - 1] < c[i] && c[j + 1] < c[i] {
            count += 1;
        }
        i = j + 1;
    }
    count
}

/// First N from which every later maximum differs from its predecessor by
/// less than [`CROSSOVER_REL_TOL`].
pub fn crossover(series: &[(usize, f64)]) -> Option<usize> {
    if series.len() < 2 {
        return None;
    }
    let settled = |w: &[(usize, f64)]| {
        let (a, b) = (w[0].1, w[1].1);
        (b - a).abs() <= CROSSOVER_REL_TOL * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    };
    let mut start = None;
    for (i, w) in series.windows(2).enumerate() {
        if settled(w) {
            start.get_or_insert(series[i].0);
        } else {
            start = None;
        }
    }
    start
}

/// Entangled/separable boundary of a single pair, with probe classification.
pub fn boundary(cfg: &RunConfig) -> CliResult<String> {
    let n = cfg.n_spins()?;
    let [pair] = cfg.pairs[..] else {
        return Err(CliError::Config("boundary takes exactly one pair".into()));
    };
    let geo = geometry(cfg, n)?;
    let omega0_init = cfg.omega0_init()?;
    let grid = AdSchedule::with_spacing(
        omega0_init,
        0.0,
        cfg.omega0_final,
        cfg.grid_points,
        cfg.grid_spacing.into(),
    )?;
    let points = phase_boundary(&geo, pair, grid.grid())?;
    let mut out = format!("# config {}\n", cfg.echo());
    for probe in &cfg.probes {
        let side = classify_point(&geo, pair, probe.omega0, probe.beta)?;
        let _ = write!(
            out,
            "# probe omega0={} beta={} side={side}",
            number(probe.omega0),
            number(probe.beta)
        );
        if probe.omega0 > cfg.omega0_final {
            let sched = schedule(cfg, probe.omega0, probe.beta)?;
            let table = SweepTable::build(&geo, probe.omega0, sched.grid(), &[pair])?;
            let traj = table.trace(probe.beta)?;
            let windows = entangled_windows(&traj, pair);
            let _ = write!(out, " ad_entangled=");
            if windows.is_empty() {
                out.push_str("none");
            }
            let spans: Vec<String> = windows
                .iter()
                .map(|(hi, lo)| format!("[{},{}]", number(*hi), number(*lo)))
                .collect();
            out.push_str(&spans.join(";"));
            if let Some(t) = traj.truncation {
                let _ = write!(out, " ad_truncated_at={}", number(t.omega0));
            }
        }
        out.push('\n');
    }
    out.push_str("omega0,beta_star\n");
    for p in &points {
        let beta = p.beta_star.map(number).unwrap_or_default();
        let _ = writeln!(out, "{},{beta}", number(p.omega0));
    }
    Ok(out)
}

/// Field intervals `(high, low)` along a trajectory where the pair is entangled.
fn entangled_windows(traj: &Trajectory, pair: SpinPair) -> Vec<(f64, f64)> {
    let mut windows: Vec<(f64, f64)> = Vec::new();
    let mut open = false;
    for p in &traj.points {
        let on = p.concurrence_of(pair).is_some_and(|c| c > ENTANGLEMENT_THRESHOLD);
        match (on, open) {
            (true, false) => windows.push((p.omega0, p.omega0)),
            (true, true) => windows.last_mut().expect("open window").1 = p.omega0,
            _ => {}
        }
        open = on;
    }
    windows
}

#[derive(Serialize)]
struct HamiltonianDump {
    n_spins: usize,
    theta: f64,
    phi: f64,
    omega0: f64,
    h_loc: f64,
    eigenvalues: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h_z: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h_dd: Option<Vec<Vec<[f64; 2]>>>,
}

fn entries(m: &OperatorMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.dim())
        .map(|i| {
            (0..m.dim())
                .map(|j| {
                    let z = m.get(i, j);
                    [z.re + 0.0, z.im + 0.0]
                })
                .collect()
        })
        .collect()
}

fn complex_text(re: f64, im: f64) -> String {
    if im == 0.0 {
        number(re)
    } else if re == 0.0 {
        format!("{}i", number(im))
    } else if im < 0.0 {
        format!("{}-{}i", number(re), number(-im))
    } else {
        format!("{}+{}i", number(re), number(im))
    }
}

fn matrix_text(out: &mut String, name: &str, m: &[Vec<[f64; 2]>]) {
    let _ = writeln!(out, "{name}:");
    for r in m {
        let cells: Vec<String> = r.iter().map(|z| complex_text(z[0], z[1])).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
}

/// Hamiltonian inspection at `omega0_init` (zero field when unset).
pub fn hamiltonian(cfg: &RunConfig, json: bool) -> CliResult<String> {
    let n = cfg.n_spins()?;
    let geo = geometry(cfg, n)?;
    let field = FieldSpec::new(cfg.omega0_init.unwrap_or(0.0))?;
    let spectrum = diagonalize(&build_h(&geo, field))?;
    let full = n <= MATRIX_PRINT_MAX_SPINS;
    let dump = HamiltonianDump {
        n_spins: n,
        theta: cfg.theta,
        phi: cfg.phi,
        omega0: field.omega0(),
        h_loc: local_field(&geo),
        eigenvalues: spectrum.eigenvalues().iter().map(|e| e + 0.0).collect(),
        h_z: full.then(|| entries(&build_hz(&geo, field))),
        h_dd: full.then(|| entries(&build_hdd(&geo))),
    };
    if json {
        let mut s = serde_json::to_string_pretty(&dump)
            .map_err(|e| CliError::Numeric(format!("json encoding failed: {e}")))?;
        s.push('\n');
        return Ok(s);
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "n_spins={n} theta={} phi={} omega0={}",
        number(dump.theta),
        number(dump.phi),
        number(dump.omega0)
    );
    match (&dump.h_z, &dump.h_dd) {
        (Some(hz), Some(hdd)) => {
            matrix_text(&mut out, "H_z", hz);
            matrix_text(&mut out, "H_dd", hdd);
        }
        _ => {
            let _ = writeln!(
                out,
                "matrices omitted for n_spins > {MATRIX_PRINT_MAX_SPINS}"
            );
        }
    }
    let eig: Vec<String> = dump.eigenvalues.iter().map(|&e| number(e)).collect();
    let _ = writeln!(out, "eigenvalues: {}", eig.join(" "));
    let _ = writeln!(out, "h_loc: {}", number(dump.h_loc));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_interior_maxima() {
        assert_eq!(local_maxima(&[0.0, 0.1, 0.3, 0.2, 0.0]), 1);
        assert_eq!(local_maxima(&[0.0, 0.2, 0.0, 0.0, 0.1, 0.3, 0.1]), 2);
        assert_eq!(local_maxima(&[0.0, 0.1, 0.2, 0.2, 0.1]), 1);
        assert_eq!(local_maxima(&[0.0, 0.1, 0.2, 0.3]), 0);
        assert_eq!(local_maxima(&[0.3, 0.2, 0.1]), 0);
        assert_eq!(local_maxima(&[0.0; 5]), 0);
        assert_eq!(local_maxima(&[0.1, 0.3, 0.2, 0.25, 0.1]), 2);
    }

    #[test]
    fn crossover_needs_settled_tail() {
        let s = [(3, 0.5), (4, 0.4), (5, 0.398), (6, 0.397)];
        assert_eq!(crossover(&s), Some(4));
        let s = [(3, 0.5), (4, 0.499), (5, 0.3)];
        assert_eq!(crossover(&s), None);
        assert_eq!(crossover(&[(3, 0.5)]), None);
    }

    #[test]
    fn complex_rendering() {
        assert_eq!(complex_text(0.5, 0.0), "0.5");
        assert_eq!(complex_text(0.0, -0.75), "-0.75i");
        assert_eq!(complex_text(1.0, -2.0), "1-2i");
        assert_eq!(complex_text(1.0, 2.0), "1+2i");
    }
}
