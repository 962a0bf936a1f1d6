//! Adiabatic demagnetization as a constant-entropy field sweep.
//!
//! The entropy is fixed at the starting point `(omega0_init, beta_init)`.
//! At every field of the schedule the Hamiltonian is diagonalized once and
//! the inverse temperature that restores the starting entropy is found by a
//! safeguarded root search; all observables at that point reuse the same
//! diagonalization.

use std::f64::consts::LN_2;

use crate::entanglement::{concurrence, PairBlocks, SpinPair};
use crate::error::{Error, Result};
use crate::hamiltonian::{add_zeeman, build_hdd, ChainGeometry, FieldSpec};
use crate::spectrum::{diagonalize, Spectrum, DEGENERACY_TOL};
use crate::spin::OperatorMatrix;
use crate::thermo::{iz_expectations, magnetization_from, Boltzmann, BETA_MAX};

/// Default number of field points in a sweep.
pub const DEFAULT_GRID_POINTS: usize = 400;
/// Default final field of a sweep.
pub const DEFAULT_OMEGA0_FINAL: f64 = 1e-2;

/// Convergence threshold on `|S - S_target|`, per spin.
const ENTROPY_TOL_PER_SPIN: f64 = 1e-12;
/// Isentropy guaranteed along every trajectory, per spin.
pub const ISENTROPY_TOL_PER_SPIN: f64 = 1e-10;
const MAX_SOLVER_ITERATIONS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridSpacing {
    Linear,
    Logarithmic,
}

/// Starting point and descending field grid of a demagnetization run.
#[derive(Clone, Debug, PartialEq)]
pub struct AdSchedule {
    omega0_init: f64,
    beta_init: f64,
    grid: Vec<f64>,
}

impl AdSchedule {
    pub fn new(omega0_init: f64, beta_init: f64, grid: Vec<f64>) -> Result<Self> {
        FieldSpec::new(omega0_init)?;
        crate::thermo::check_beta(beta_init)?;
        if grid.len() < 2 {
            return Err(Error::param("field grid needs at least two points"));
        }
        if grid.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::param("field grid values must be finite and >= 0"));
        }
        if grid[0] > omega0_init {
            return Err(Error::param(format!(
                "grid starts at {} above the initial field {omega0_init}",
                grid[0]
            )));
        }
        if grid.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::param("field grid must be strictly descending"));
        }
        Ok(Self {
            omega0_init,
            beta_init,
            grid,
        })
    }

    /// Grid of `points` fields from `omega0_init` down to `omega0_final`.
    pub fn with_spacing(
        omega0_init: f64,
        beta_init: f64,
        omega0_final: f64,
        points: usize,
        spacing: GridSpacing,
    ) -> Result<Self> {
        if points < 2 {
            return Err(Error::param("field grid needs at least two points"));
        }
        if !(omega0_final < omega0_init) {
            return Err(Error::param(format!(
                "final field {omega0_final} must be below initial field {omega0_init}"
            )));
        }
        let last = (points - 1) as f64;
        let grid = match spacing {
            GridSpacing::Linear => (0..points)
                .map(|i| omega0_init + (omega0_final - omega0_init) * i as f64 / last)
                .collect(),
            GridSpacing::Logarithmic => {
                if !(omega0_final > 0.0) {
                    return Err(Error::param("logarithmic grid needs a final field > 0"));
                }
                let (a, b) = (omega0_init.ln(), omega0_final.ln());
                (0..points)
                    .map(|i| match i {
                        0 => omega0_init,
                        i if i == points - 1 => omega0_final,
                        _ => (a + (b - a) * i as f64 / last).exp(),
                    })
                    .collect()
            }
        };
        Self::new(omega0_init, beta_init, grid)
    }

    /// 400 logarithmic points down to `omega0 = 0.01`.
    pub fn standard(omega0_init: f64, beta_init: f64) -> Result<Self> {
        Self::with_spacing(
            omega0_init,
            beta_init,
            DEFAULT_OMEGA0_FINAL,
            DEFAULT_GRID_POINTS,
            GridSpacing::Logarithmic,
        )
    }

    pub fn omega0_init(&self) -> f64 {
        self.omega0_init
    }

    pub fn beta_init(&self) -> f64 {
        self.beta_init
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
}

/// One sample of a demagnetization trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub omega0: f64,
    pub beta: f64,
    /// `S / k_B`
    pub entropy: f64,
    /// `C / k_B` for the whole chain.
    pub heat_capacity: f64,
    pub polarization: f64,
    /// Concurrence of each requested pair, in request order.
    pub concurrence: Vec<(SpinPair, f64)>,
}

impl TrajectoryPoint {
    pub fn concurrence_of(&self, pair: SpinPair) -> Option<f64> {
        self.concurrence
            .iter()
            .find(|(p, _)| *p == pair)
            .map(|(_, c)| *c)
    }
}

/// Why the starting entropy could not be matched at some field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TruncationReason {
    /// The entropy lies at or below `ln g0` of a degenerate ground level.
    EntropyFloor { floor: f64, degeneracy: usize },
    /// The ground level is split so weakly that the required β exceeds the
    /// supported maximum.
    BetaLimit { beta_max: f64 },
}

/// Where and why a trajectory stopped before the end of its grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub omega0: f64,
    pub reason: TruncationReason,
}

impl std::fmt::Display for Truncation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.reason {
            TruncationReason::EntropyFloor { floor, degeneracy } => write!(
                f,
                "entropy floor at omega0={}: ground degeneracy {degeneracy}, ln g0 = {floor}",
                self.omega0
            ),
            TruncationReason::BetaLimit { beta_max } => write!(
                f,
                "entropy not reachable below beta={beta_max:e} at omega0={}",
                self.omega0
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub initial_entropy: f64,
    pub points: Vec<TrajectoryPoint>,
    pub truncation: Option<Truncation>,
}

impl Trajectory {
    /// Concurrence curve of one pair along the trajectory.
    pub fn concurrence_curve(&self, pair: SpinPair) -> Vec<f64> {
        self.points
            .iter()
            .filter_map(|p| p.concurrence_of(pair))
            .collect()
    }

    pub fn betas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.beta).collect()
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.omega0).collect()
    }
}

/// Inverse temperature at which `spectrum` has entropy `s_target`.
pub fn solve_beta(spectrum: &Spectrum, s_target: f64) -> Result<f64> {
    solve_beta_levels(spectrum.eigenvalues(), s_target)
}

fn ground_degeneracy(levels: &[f64]) -> usize {
    let e0 = levels[0];
    levels.iter().take_while(|&&e| e - e0 < DEGENERACY_TOL).count()
}

/// Acceptable `|S - S_target|`: `1e-12 N`, tightened to `1e-12 S_target`
/// for targets below `N` so that nearly pure starting states stay resolved.
fn entropy_tolerance(n_spins: f64, s_target: f64) -> f64 {
    ENTROPY_TOL_PER_SPIN * n_spins.min(s_target)
}

/// [`solve_beta`] on ascending eigenvalues.
///
/// The root is searched on `ln S(β) - ln S_target`, which stays well scaled
/// when the target entropy is exponentially small.
pub(crate) fn solve_beta_levels(levels: &[f64], s_target: f64) -> Result<f64> {
    if !s_target.is_finite() {
        return Err(Error::param(format!("target entropy {s_target} is not finite")));
    }
    let n_spins = levels.len().trailing_zeros() as f64;
    let s_max = n_spins * LN_2;
    if s_target > s_max + ENTROPY_TOL_PER_SPIN * n_spins {
        return Err(Error::EntropyAbove {
            target: s_target,
            max: s_max,
        });
    }
    if s_target >= s_max - ENTROPY_TOL_PER_SPIN * n_spins {
        return Ok(0.0);
    }
    let degeneracy = ground_degeneracy(levels);
    let floor = (degeneracy as f64).ln();
    if s_target <= floor * (1.0 + 1e-12) {
        return Err(Error::EntropyFloor {
            target: s_target,
            floor,
            degeneracy,
        });
    }
    let tol = entropy_tolerance(n_spins, s_target);
    let log_target = s_target.ln();

    // (ln S - ln S_target, S - S_target)
    let eval = |beta: f64| -> Result<(f64, f64)> {
        let s = Boltzmann::new(levels, beta)?.entropy(beta);
        Ok((s.ln() - log_target, s - s_target))
    };

    // Bracket: g(lo) > 0 > g(hi).
    let (mut lo, mut g_lo) = (0.0, s_max.ln() - log_target);
    let mut hi = 1.0;
    let (mut g_hi, mut d_hi) = eval(hi)?;
    while g_hi > 0.0 {
        if d_hi.abs() <= tol {
            return Ok(hi);
        }
        if hi >= BETA_MAX {
            return Err(Error::BetaLimit {
                target: s_target,
                beta_max: BETA_MAX,
            });
        }
        lo = hi;
        g_lo = g_hi;
        hi = (2.0 * hi).min(BETA_MAX);
        (g_hi, d_hi) = eval(hi)?;
    }
    if d_hi.abs() <= tol {
        return Ok(hi);
    }

    // Illinois-modified regula falsi; a bisection step is forced whenever
    // an iteration fails to halve the bracket.
    let mut side = 0i8;
    let mut best = (hi, d_hi.abs());
    for _ in 0..MAX_SOLVER_ITERATIONS {
        let width = hi - lo;
        let mut x = hi - g_hi * width / (g_hi - g_lo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let (gx, dx) = eval(x)?;
        if dx.abs() < best.1 {
            best = (x, dx.abs());
        }
        if dx.abs() <= tol {
            return Ok(x);
        }
        if gx > 0.0 {
            lo = x;
            g_lo = gx;
            if side == 1 {
                g_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = x;
            g_hi = gx;
            if side == -1 {
                g_lo *= 0.5;
            }
            side = -1;
        }
        if hi - lo > 0.5 * width {
            let mid = 0.5 * (lo + hi);
            let (gm, dm) = eval(mid)?;
            if dm.abs() < best.1 {
                best = (mid, dm.abs());
            }
            if dm.abs() <= tol {
                return Ok(mid);
            }
            if gm > 0.0 {
                lo = mid;
                g_lo = gm;
            } else {
                hi = mid;
                g_hi = gm;
            }
            side = 0;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    // Bracket collapsed to the float resolution of beta.
    if best.1 <= ISENTROPY_TOL_PER_SPIN * n_spins {
        Ok(best.0)
    } else {
        Err(Error::numeric(format!(
            "entropy root search stalled at beta = {} (residual {:.3e})",
            best.0, best.1
        )))
    }
}

/// Everything needed to evaluate observables at one field without the
/// eigenvectors.
#[derive(Clone, Debug)]
pub struct FieldPoint {
    pub omega0: f64,
    eigenvalues: Vec<f64>,
    iz: Vec<f64>,
    blocks: Vec<PairBlocks>,
}

impl FieldPoint {
    fn compute(
        geometry: &ChainGeometry,
        hdd: &OperatorMatrix,
        omega0: f64,
        pairs: &[SpinPair],
    ) -> Result<Self> {
        let mut h = hdd.clone();
        add_zeeman(&mut h, geometry.n_spins(), FieldSpec::new(omega0)?);
        let spectrum = diagonalize(&h)?;
        let blocks = pairs
            .iter()
            .map(|&p| PairBlocks::new(&spectrum, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            omega0,
            iz: iz_expectations(&spectrum),
            eigenvalues: spectrum.eigenvalues().to_vec(),
            blocks,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn entropy(&self, beta: f64) -> Result<f64> {
        Ok(Boltzmann::new(&self.eigenvalues, beta)?.entropy(beta))
    }

    fn observe(&self, beta: f64, n_spins: usize) -> Result<TrajectoryPoint> {
        let b = Boltzmann::new(&self.eigenvalues, beta)?;
        let m = magnetization_from(&b.weights, &self.iz, n_spins);
        let concurrence = self
            .blocks
            .iter()
            .map(|blk| Ok((blk.pair(), concurrence(&blk.reduce(&b.weights)?)?.value)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TrajectoryPoint {
            omega0: self.omega0,
            beta,
            entropy: b.entropy(beta),
            heat_capacity: b.heat_capacity(&self.eigenvalues, beta),
            polarization: m.polarization,
            concurrence,
        })
    }
}

/// Diagonalized field grid for one geometry; can be traced from any
/// starting inverse temperature at `omega0_init`.
#[derive(Clone, Debug)]
pub struct SweepTable {
    geometry: ChainGeometry,
    pairs: Vec<SpinPair>,
    initial: FieldPoint,
    points: Vec<FieldPoint>,
}

impl SweepTable {
    pub fn build(
        geometry: &ChainGeometry,
        omega0_init: f64,
        grid: &[f64],
        pairs: &[SpinPair],
    ) -> Result<Self> {
        // validates the grid; beta is irrelevant here
        AdSchedule::new(omega0_init, 0.0, grid.to_vec())?;
        for p in pairs {
            p.check(geometry.n_spins())?;
        }
        let hdd = build_hdd(geometry);
        let points = grid
            .iter()
            .map(|&w| FieldPoint::compute(geometry, &hdd, w, pairs))
            .collect::<Result<Vec<_>>>()?;
        let initial = if grid[0] == omega0_init {
            points[0].clone()
        } else {
            FieldPoint::compute(geometry, &hdd, omega0_init, &[])?
        };
        Ok(Self {
            geometry: *geometry,
            pairs: pairs.to_vec(),
            initial,
            points,
        })
    }

    pub fn geometry(&self) -> &ChainGeometry {
        &self.geometry
    }

    pub fn pairs(&self) -> &[SpinPair] {
        &self.pairs
    }

    pub fn field_points(&self) -> &[FieldPoint] {
        &self.points
    }

    /// Entropy of the starting state at `omega0_init`.
    pub fn initial_entropy(&self, beta_init: f64) -> Result<f64> {
        self.initial.entropy(beta_init)
    }

    /// Isentrope through `(omega0_init, beta_init)`.
    pub fn trace(&self, beta_init: f64) -> Result<Trajectory> {
        let s_in = self.initial_entropy(beta_init)?;
        self.trace_entropy(s_in)
    }

    /// Isentrope at a given entropy.
    pub fn trace_entropy(&self, s_in: f64) -> Result<Trajectory> {
        let n = self.geometry.n_spins();
        let mut points = Vec::with_capacity(self.points.len());
        let mut truncation = None;
        for fp in &self.points {
            match solve_beta_levels(&fp.eigenvalues, s_in) {
                Ok(beta) => points.push(fp.observe(beta, n)?),
                Err(Error::EntropyFloor {
                    floor, degeneracy, ..
                }) => {
                    truncation = Some(Truncation {
                        omega0: fp.omega0,
                        reason: TruncationReason::EntropyFloor { floor, degeneracy },
                    });
                    break;
                }
                Err(Error::BetaLimit { beta_max, .. }) => {
                    truncation = Some(Truncation {
                        omega0: fp.omega0,
                        reason: TruncationReason::BetaLimit { beta_max },
                    });
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        Ok(Trajectory {
            initial_entropy: s_in,
            points,
            truncation,
        })
    }
}

/// Runs a demagnetization sweep and samples the requested pair concurrences.
pub fn run_ad(
    geometry: &ChainGeometry,
    schedule: &AdSchedule,
    pairs: &[SpinPair],
) -> Result<Trajectory> {
    SweepTable::build(geometry, schedule.omega0_init, &schedule.grid, pairs)?
        .trace(schedule.beta_init)
}

/// Isentrope of the second-order high-temperature expansion, on which
/// `β² (ω0² + h_loc²)` is conserved.
pub fn ht_beta(beta_in: f64, omega_in: f64, omega: f64, h_loc: f64) -> f64 {
    debug_assert!(beta_in >= 0.0 && omega_in >= 0.0 && omega >= 0.0 && h_loc >= 0.0);
    let h2 = h_loc * h_loc;
    beta_in * ((omega_in * omega_in + h2) / (omega * omega + h2)).sqrt()
}

/// Leading-order (Curie law) polarization `β ω0 / 2` per spin.
pub fn ht_polarization(beta: f64, omega0: f64) -> f64 {
    0.5 * beta * omega0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_h, local_field};
    use crate::thermo::entropy;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn schedule_validation() {
        assert!(AdSchedule::new(5.0, 1.0, vec![5.0]).is_err());
        assert!(AdSchedule::new(5.0, 1.0, vec![6.0, 1.0]).is_err());
        assert!(AdSchedule::new(5.0, 1.0, vec![4.0, 4.0]).is_err());
        assert!(AdSchedule::new(5.0, 1.0, vec![4.0, -1.0]).is_err());
        assert!(AdSchedule::new(5.0, -1.0, vec![4.0, 1.0]).is_err());
        assert!(AdSchedule::with_spacing(5.0, 1.0, 0.0, 10, GridSpacing::Logarithmic).is_err());
        let lin = AdSchedule::with_spacing(5.0, 1.0, 0.0, 6, GridSpacing::Linear).unwrap();
        assert_eq!(lin.grid(), &[5.0, 4.0, 3.0, 2.0, 1.0, 0.0]);
        let std = AdSchedule::standard(40.0, 0.1).unwrap();
        assert_eq!(std.grid().len(), 400);
        assert_eq!(std.grid()[0], 40.0);
        assert_eq!(*std.grid().last().unwrap(), 0.01);
    }

    #[test]
    fn solve_beta_infinite_temperature() {
        let s = Spectrum::from_diagonal(&[-1.0, 0.2, 0.3, 0.5]).unwrap();
        assert_eq!(solve_beta(&s, 2.0 * LN_2).unwrap(), 0.0);
    }

    #[test]
    fn solve_beta_inverts_two_level_entropy() {
        let s = Spectrum::from_diagonal(&[-0.5, 0.5]).unwrap();
        let x: f64 = 0.5;
        let target = (2.0 * x.cosh()).ln() - x * x.tanh();
        close(solve_beta(&s, target).unwrap(), 1.0, 1e-10);
        close(solve_beta(&s, 0.58221).unwrap(), 1.0, 1e-4);
    }

    #[test]
    fn solve_beta_errors() {
        let s = Spectrum::from_diagonal(&[-0.5, -0.5, 0.0, 1.0]).unwrap();
        assert!(matches!(
            solve_beta(&s, LN_2),
            Err(Error::EntropyFloor { degeneracy: 2, .. })
        ));
        assert!(matches!(
            solve_beta(&s, 1.5),
            Err(Error::EntropyAbove { .. })
        ));
    }

    #[test]
    fn solve_beta_meets_tolerance_across_range() {
        let g = ChainGeometry::new(4, 1.1, 0.3).unwrap();
        let s = diagonalize(&build_h(&g, FieldSpec::new(0.7).unwrap())).unwrap();
        for &beta in &[0.01, 0.3, 1.0, 4.0, 20.0, 150.0] {
            let target = entropy(&s, beta).unwrap();
            let b = solve_beta(&s, target).unwrap();
            assert!((entropy(&s, b).unwrap() - target).abs() <= 4e-12);
            if beta <= 4.0 {
                close(b, beta, 1e-6 * beta);
            }
        }
    }

    #[test]
    fn zero_beta_start_stays_at_infinite_temperature() {
        let g = ChainGeometry::perpendicular(3).unwrap();
        let sched = AdSchedule::with_spacing(5.0, 0.0, 0.1, 10, GridSpacing::Logarithmic).unwrap();
        let pairs = [SpinPair::new(1, 2).unwrap(), SpinPair::new(1, 3).unwrap()];
        let t = run_ad(&g, &sched, &pairs).unwrap();
        assert_eq!(t.points.len(), 10);
        for p in &t.points {
            assert_eq!(p.beta, 0.0);
            assert!(p.concurrence.iter().all(|(_, c)| *c == 0.0));
        }
    }

    #[test]
    fn isentropy_and_cooling() {
        let g = ChainGeometry::perpendicular(4).unwrap();
        let sched = AdSchedule::with_spacing(20.0, 0.05, 0.01, 60, GridSpacing::Logarithmic).unwrap();
        let t = run_ad(&g, &sched, &[SpinPair::new(1, 2).unwrap()]).unwrap();
        assert!(t.truncation.is_none());
        for p in &t.points {
            assert!((p.entropy - t.initial_entropy).abs() <= 1e-10 * 4.0);
        }
        assert!(t.betas().windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn high_temperature_limit() {
        close(ht_beta(0.3, 4.0, 4.0, 0.9), 0.3, 1e-15);
        close(ht_beta(0.3, 4.0, 0.0, 0.9), 0.3 * (16.81f64).sqrt() / 0.9, 1e-14);
        close(ht_beta(0.1, 20.0, 5.0, 0.866), 0.3945, 1e-4);
        assert_eq!(ht_polarization(0.0, 3.0), 0.0);
        // isolated spin: exact tanh(βω/2) vs Curie law at βω = 0.1
        let exact = (0.05f64).tanh();
        close(exact, 0.049958, 1e-6);
        assert!((ht_polarization(0.1, 1.0) - exact).abs() / exact < 1e-3);
    }

    #[test]
    fn full_solver_tracks_high_temperature_isentrope() {
        let g = ChainGeometry::perpendicular(4).unwrap();
        let h = local_field(&g);
        // β_in √(ω_in² + h²) = 0.1
        let beta_in = 0.1 / (400.0 + h * h).sqrt();
        let sched = AdSchedule::with_spacing(20.0, beta_in, 5.0, 4, GridSpacing::Linear).unwrap();
        let t = run_ad(&g, &sched, &[]).unwrap();
        let last = t.points.last().unwrap();
        let ht = ht_beta(beta_in, 20.0, 5.0, h);
        assert!((last.beta - ht).abs() / ht < 0.02, "{} vs {ht}", last.beta);
    }

    #[test]
    fn curie_law_at_small_beta() {
        let g = ChainGeometry::perpendicular(6).unwrap();
        let s = diagonalize(&build_h(&g, FieldSpec::new(10.0).unwrap())).unwrap();
        let m = crate::thermo::magnetization(&s, 0.01, &g).unwrap();
        let ht = ht_polarization(0.01, 10.0);
        assert!((m.polarization - ht).abs() / ht < 0.02);
    }

    #[test]
    fn truncates_when_ground_doublet_needs_huge_beta() {
        let g = ChainGeometry::perpendicular(4).unwrap();
        let sched = AdSchedule::with_spacing(20.0, 0.2, 0.01, 60, GridSpacing::Logarithmic).unwrap();
        let t = run_ad(&g, &sched, &[]).unwrap();
        let tr = t.truncation.expect("beta limit reached");
        assert!(matches!(tr.reason, TruncationReason::BetaLimit { .. }));
        assert!(tr.omega0 > 0.01 && tr.omega0 < 1.0);
        assert!(t.points.iter().all(|p| p.omega0 > tr.omega0 && p.beta <= BETA_MAX));
    }

    #[test]
    fn truncates_at_entropy_floor() {
        // A degenerate ground level at omega0 = 0 can make the starting entropy unreachable.
        let g = ChainGeometry::perpendicular(2).unwrap();
        let sched = AdSchedule::new(3.0, 3.0, vec![3.0, 1.0, 0.0]).unwrap();
        let t = run_ad(&g, &sched, &[]).unwrap();
        let s_in = t.initial_entropy;
        assert!(s_in < LN_2);
        let tr = t.truncation.expect("entropy floor reached");
        assert_eq!(tr.omega0, 0.0);
        assert!(matches!(
            tr.reason,
            TruncationReason::EntropyFloor { degeneracy: 2, .. }
        ));
        assert_eq!(t.points.len(), 2);
    }
}
