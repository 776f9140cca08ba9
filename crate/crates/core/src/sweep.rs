//! Parameter sweeps: per-`g` zero-momentum spectra with entanglement and
//! scar tracking, neighbourhood statistics near the scar, and the
//! perturbation experiment.
//!
//! A sweep is split into a sequential [`SweepPlan::prepare`] (the complement
//! basis chain) and independent [`SweepPlan::evaluate`] calls, so callers with
//! threads can fan the second half out.

use alloc::vec::Vec;

#[allow(unused_imports)] // redundant whenever std is in the dependency graph
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chain::{self, ChainStep, DEFAULT_CHAIN_START, DEFAULT_CHAIN_STEP};
use crate::embedding::{self, CoefficientScheme, ComplementBasis, SchemeKind, DEFAULT_GHZ_A};
use crate::hamiltonian::{self, SparseHamiltonian};
use crate::linalg;
use crate::mps::{self, Family, MpsDefinition, StateVector};
use crate::spectral::{self, MomentumBasis, ScarIdentification};
use crate::{CMatrix, Error, Result};

/// Energy window around the scar, as a fraction of the spectral range.
pub const DEFAULT_ENERGY_WINDOW: f64 = 0.05;
/// States with `S < fraction * S_Page` count as low-entropy.
pub const DEFAULT_LOW_ENTROPY_FRACTION: f64 = 0.5;
/// Scar energies beyond this are an invariant violation.
pub const SCAR_ENERGY_TOLERANCE: f64 = 1e-9;
/// `||H psi|| / ||psi||` beyond this is an invariant violation.
pub const ANNIHILATION_TOLERANCE: f64 = 1e-10;

/// Source of the local complement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplementMode {
    /// Closed-form GHZ states (GHZ family only).
    Analytic,
    /// Numerical null space, Procrustes-aligned along a chain.
    Numerical,
}

impl ComplementMode {
    pub fn default_for(family: Family) -> Self {
        match family {
            Family::Ghz => ComplementMode::Analytic,
            Family::Z2 => ComplementMode::Numerical,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: Family,
    pub scheme: SchemeKind,
    pub sites: usize,
    pub g_min: f64,
    pub g_max: f64,
    pub steps: usize,
    /// GHZ complement parameter.
    pub a: f64,
    pub complement: ComplementMode,
    /// Procrustes step; `None` means a quarter of the grid spacing.
    pub chain_step: Option<f64>,
    pub chain_start: f64,
    pub seed: u64,
    pub energy_window: f64,
    pub low_entropy_fraction: f64,
}

impl SweepConfig {
    pub fn new(family: Family, scheme: SchemeKind, sites: usize) -> Self {
        Self {
            family,
            scheme,
            sites,
            g_min: -1.0,
            g_max: 1.0,
            steps: 41,
            a: DEFAULT_GHZ_A,
            complement: ComplementMode::default_for(family),
            chain_step: None,
            chain_start: DEFAULT_CHAIN_START,
            seed: 0,
            energy_window: DEFAULT_ENERGY_WINDOW,
            low_entropy_fraction: DEFAULT_LOW_ENTROPY_FRACTION,
        }
    }

    pub fn with_range(mut self, g_min: f64, g_max: f64, steps: usize) -> Self {
        self.g_min = g_min;
        self.g_max = g_max;
        self.steps = steps;
        self
    }

    /// A single point.
    pub fn at(self, g: f64) -> Self {
        self.with_range(g, g, 1)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.g_min.is_finite() || !self.g_max.is_finite() {
            return Err(Error::invalid("g range", "bounds must be finite"));
        }
        if self.steps == 0 {
            return Err(Error::invalid("steps", "need at least one point"));
        }
        if self.steps >= 2 && !(self.g_min < self.g_max) {
            return Err(Error::invalid("g range", "need g_min < g_max"));
        }
        if self.steps == 1 && self.g_min > self.g_max {
            return Err(Error::invalid("g range", "need g_min <= g_max"));
        }
        if !(self.a > 0.0 && self.a < 1.0) {
            return Err(Error::invalid("a", "must lie in (0, 1)"));
        }
        if self.sites < 4 || self.sites % 2 != 0 {
            return Err(Error::invalid("sites", "need an even chain of at least 4 sites"));
        }
        if self.sites > 20 {
            return Err(Error::invalid("sites", "full sector diagonalization is limited to 20 sites"));
        }
        if self.scheme == SchemeKind::Custom {
            return Err(Error::invalid("scheme", "sweeps use the scar or ground scheme"));
        }
        if self.family == Family::Z2 && self.complement == ComplementMode::Analytic {
            return Err(Error::invalid("complement", "the analytic basis exists only for the GHZ family"));
        }
        if let Some(step) = self.chain_step {
            if !(step > 0.0) {
                return Err(Error::invalid("chain step", "must be positive"));
            }
        }
        if !(self.energy_window >= 0.0) || !(self.low_entropy_fraction >= 0.0) {
            return Err(Error::invalid("thresholds", "must be non-negative"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        linspace(self.g_min, self.g_max, self.steps)
    }

    pub fn effective_chain_step(&self) -> f64 {
        match self.chain_step {
            Some(step) => step,
            None if self.steps >= 2 => (self.g_max - self.g_min) / (self.steps - 1) as f64 / 4.0,
            None => DEFAULT_CHAIN_STEP,
        }
    }

    pub fn coefficient_scheme(&self) -> CoefficientScheme {
        CoefficientScheme::new(self.scheme, 4)
    }

    pub fn page_entropy(&self) -> f64 {
        spectral::page_entropy(self.sites)
    }

    pub fn low_entropy_threshold(&self) -> f64 {
        self.low_entropy_fraction * self.page_entropy()
    }
}

/// `n` evenly spaced values with exact endpoints.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => (0..n)
            .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

/// Complement basis prepared for one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedPoint {
    pub g: f64,
    pub basis: ComplementBasis,
    pub continuity_lost: bool,
    pub rank_deficient: bool,
}

/// Result of the sequential preparation stage.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub config: SweepConfig,
    pub points: Vec<PreparedPoint>,
    /// Procrustes log; empty for analytic bases.
    pub chain_steps: Vec<ChainStep>,
    sector: MomentumBasis,
}

impl SweepPlan {
    pub fn prepare(config: &SweepConfig) -> Result<Self> {
        config.validate()?;
        let grid = config.grid();
        let (points, chain_steps) = match config.complement {
            ComplementMode::Analytic => {
                let mut points = Vec::with_capacity(grid.len());
                for &g in &grid {
                    let subspace = embedding::build_a_subspace(&MpsDefinition::model(config.family, g)?)?;
                    points.push(PreparedPoint {
                        g,
                        basis: embedding::ghz_analytic_complement(g, config.a)?,
                        continuity_lost: false,
                        rank_deficient: !subspace.is_full_rank(),
                    });
                }
                (points, Vec::new())
            }
            ComplementMode::Numerical => {
                let chain = chain::run_chain(config.family, config.chain_start, &grid, config.effective_chain_step())?;
                let mut points = Vec::with_capacity(grid.len());
                for &g in &grid {
                    let point = chain
                        .point_at(g)
                        .ok_or_else(|| Error::invalid("chain", "grid point missing from the chain"))?;
                    points.push(PreparedPoint {
                        g,
                        basis: point.basis.clone(),
                        continuity_lost: point.continuity_lost,
                        rank_deficient: point.rank_deficient,
                    });
                }
                (points, chain.steps)
            }
        };
        Ok(Self {
            config: config.clone(),
            points,
            chain_steps,
            sector: MomentumBasis::zero_momentum(config.sites)?,
        })
    }

    /// Reuses previously prepared bases (e.g. a cached chain). The points
    /// must sit on the configured grid.
    pub fn from_prepared(config: &SweepConfig, points: Vec<PreparedPoint>, chain_steps: Vec<ChainStep>) -> Result<Self> {
        config.validate()?;
        let grid = config.grid();
        if points.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: points.len(),
            });
        }
        for (p, g) in points.iter().zip(&grid) {
            if (p.g - g).abs() > 1e-12 || (p.basis.g - g).abs() > 1e-12 {
                return Err(Error::invalid("prepared points", "do not match the sweep grid"));
            }
            if p.basis.states.nrows() != 8 || p.basis.len() != 4 {
                return Err(Error::DimensionMismatch {
                    expected: 4,
                    found: p.basis.len(),
                });
            }
        }
        Ok(Self {
            config: config.clone(),
            points,
            chain_steps,
            sector: MomentumBasis::zero_momentum(config.sites)?,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn sector(&self) -> &MomentumBasis {
        &self.sector
    }

    pub fn hamiltonian(&self, index: usize) -> Result<SparseHamiltonian> {
        let local = embedding::build_local_operator(&self.points[index].basis, &self.config.coefficient_scheme())?;
        hamiltonian::assemble(&local, self.config.sites)
    }

    /// Diagonalizes the zero-momentum sector at grid point `index`.
    pub fn evaluate(&self, index: usize) -> Result<PointResult> {
        let h = self.hamiltonian(index)?;
        evaluate_point(&self.config, &self.sector, &self.points[index], &h)
    }
}

/// One eigenstate at one `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub g: f64,
    pub state_index: usize,
    pub energy: f64,
    pub entropy: f64,
    pub mps_overlap: f64,
    pub is_scar: bool,
    pub is_low_entropy: bool,
    /// The scar was resolved through the zero-energy eigenspace.
    pub degenerate: bool,
    pub continuity_lost: bool,
    pub rank_deficient: bool,
}

/// Everything computed at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub g: f64,
    pub records: Vec<SweepRecord>,
    /// Ascending sector energies (same order as `records`).
    pub energies: Vec<f64>,
    pub scar_index: usize,
    pub scar_overlap: f64,
    pub scar_energy: f64,
    pub scar_entropy: f64,
    /// Entropy of the materialized MPS itself.
    pub mps_entropy: f64,
    pub degenerate: bool,
    /// `||H psi|| / ||psi||` under the streamed apply.
    pub annihilation_residual: f64,
    pub eig_residual: f64,
    pub spectral_range: f64,
    pub continuity_lost: bool,
    pub rank_deficient: bool,
}

impl PointResult {
    pub fn scar_record(&self) -> &SweepRecord {
        &self.records[self.scar_index]
    }

    /// `E_n - E_0`.
    pub fn excited_gap(&self, n: usize) -> Option<f64> {
        Some(self.energies.get(n)? - self.energies.first()?)
    }

    /// Invariant breaches at this point, as `(check, observed, bound)`.
    pub fn violations(&self, scheme: SchemeKind) -> Vec<(&'static str, f64, f64)> {
        let mut out = Vec::new();
        if !(self.annihilation_residual < ANNIHILATION_TOLERANCE) {
            out.push(("annihilation", self.annihilation_residual, ANNIHILATION_TOLERANCE));
        }
        if !(self.scar_energy.abs() < SCAR_ENERGY_TOLERANCE) {
            out.push(("scar energy", self.scar_energy.abs(), SCAR_ENERGY_TOLERANCE));
        }
        let residual_bound = 1e-8 * self.spectral_range.max(1.0);
        if !(self.eig_residual < residual_bound) {
            out.push(("eigen residual", self.eig_residual, residual_bound));
        }
        if scheme == SchemeKind::Ground {
            let lowest = self.energies.first().copied().unwrap_or(0.0);
            if lowest < -1e-10 {
                out.push(("ground positivity", lowest, -1e-10));
            }
        }
        out
    }
}

fn evaluate_point(
    config: &SweepConfig,
    sector: &MomentumBasis,
    point: &PreparedPoint,
    h: &SparseHamiltonian,
) -> Result<PointResult> {
    let psi = MpsDefinition::model(config.family, point.g)?.materialize(config.sites)?;
    let annihilation_residual = h.apply(&psi)?.norm() / psi.norm();
    let mps_entropy = spectral::half_chain_entropy(&psi)?;
    let psi_sector = sector.project_state(&psi)?;

    let mut decomp = spectral::diagonalize_sector(h, sector)?;
    let clusters = spectral::canonicalize_degenerate(&mut decomp, sector, Some(&psi_sector))?;
    let mut scar: ScarIdentification = spectral::find_scar_state(&decomp, &psi_sector)?;
    scar.degenerate |= clusters.iter().any(|r| r.contains(&scar.index));
    let overlaps = decomp.vectors.adjoint() * &psi_sector;
    let threshold = config.low_entropy_threshold();

    let mut records = Vec::with_capacity(decomp.len());
    for k in 0..decomp.len() {
        let full = sector.lift_to_full(&decomp.vector(k))?;
        let entropy = spectral::half_chain_entropy(&full)?;
        records.push(SweepRecord {
            g: point.g,
            state_index: k,
            energy: decomp.energies[k],
            entropy,
            mps_overlap: overlaps[k].norm(),
            is_scar: false,
            is_low_entropy: entropy < threshold,
            degenerate: scar.degenerate,
            continuity_lost: point.continuity_lost,
            rank_deficient: point.rank_deficient,
        });
    }
    let scar_entropy = if scar.degenerate {
        spectral::half_chain_entropy(&sector.lift_to_full(&scar.state)?)?
    } else {
        records[scar.index].entropy
    };
    let scar_energy = if scar.degenerate { 0.0 } else { scar.energy };
    {
        let record = &mut records[scar.index];
        record.is_scar = true;
        record.entropy = scar_entropy;
        record.mps_overlap = scar.overlap;
        record.energy = scar_energy;
        record.is_low_entropy = scar_entropy < threshold;
    }

    Ok(PointResult {
        g: point.g,
        energies: decomp.energies.clone(),
        scar_index: scar.index,
        scar_overlap: scar.overlap,
        scar_energy,
        scar_entropy,
        mps_entropy,
        degenerate: scar.degenerate,
        annihilation_residual,
        eig_residual: decomp.residual,
        spectral_range: decomp.spectral_range(),
        continuity_lost: point.continuity_lost,
        rank_deficient: point.rank_deficient,
        records,
    })
}

/// A completed sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub config: SweepConfig,
    /// In grid order.
    pub points: Vec<PointResult>,
    pub chain_steps: Vec<ChainStep>,
}

impl SweepResult {
    pub fn records(&self) -> impl Iterator<Item = &SweepRecord> {
        self.points.iter().flat_map(|p| p.records.iter())
    }

    pub fn violations(&self) -> Vec<(f64, &'static str, f64, f64)> {
        let mut out = Vec::new();
        for p in &self.points {
            for (check, observed, bound) in p.violations(self.config.scheme) {
                out.push((p.g, check, observed, bound));
            }
        }
        out
    }
}

/// Sequential sweep. See [`SweepPlan`] for the parallel-friendly split.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    let plan = SweepPlan::prepare(config)?;
    let points = (0..plan.len()).map(|i| plan.evaluate(i)).collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        config: plan.config,
        points,
        chain_steps: plan.chain_steps,
    })
}

/// Scar neighbourhood statistics at one `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSummary {
    pub g: f64,
    pub scar_energy: f64,
    /// Smallest `|E_scar - E|` over the other states.
    pub min_gap: f64,
    /// Non-scar low-entropy states within the energy window of the scar.
    pub low_entropy_neighbors: usize,
    /// Lowest entropy among non-scar states in the window (`inf` if none).
    pub min_neighbor_entropy: f64,
    pub spectral_range: f64,
    pub window: f64,
}

/// Groups consecutive records of equal `g` and summarizes each group.
/// `window_fraction` scales the per-`g` spectral range.
pub fn gap_and_entropy_track(records: &[SweepRecord], window_fraction: f64) -> Vec<GapSummary> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < records.len() {
        let g = records[start].g;
        let mut end = start;
        while end < records.len() && records[end].g == g {
            end += 1;
        }
        let group = &records[start..end];
        start = end;
        let Some(scar) = group.iter().find(|r| r.is_scar) else {
            continue;
        };
        let (lo, hi) = group
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.energy), hi.max(r.energy)));
        let spectral_range = hi - lo;
        let window = window_fraction * spectral_range;
        let mut min_gap = f64::INFINITY;
        let mut neighbors = 0;
        let mut min_neighbor_entropy = f64::INFINITY;
        for r in group.iter().filter(|r| !r.is_scar) {
            let distance = (r.energy - scar.energy).abs();
            min_gap = min_gap.min(distance);
            if distance <= window {
                min_neighbor_entropy = min_neighbor_entropy.min(r.entropy);
                if r.is_low_entropy {
                    neighbors += 1;
                }
            }
        }
        out.push(GapSummary {
            g,
            scar_energy: scar.energy,
            min_gap,
            low_entropy_neighbors: neighbors,
            min_neighbor_entropy,
            spectral_range,
            window,
        });
    }
    out
}

/// Where a perturbation acts on the three-site space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationKind {
    /// Random Hermitian combination of `|psi_n><psi_m|`; the MPS stays exact.
    WithinComplement,
    /// Random Hermitian operator on the whole local space.
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSpec {
    pub kind: PerturbationKind,
    pub epsilon: f64,
    pub seed: u64,
}

impl PerturbationSpec {
    pub fn new(kind: PerturbationKind, epsilon: f64, seed: u64) -> Result<Self> {
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::invalid("epsilon", "must be finite and non-negative"));
        }
        Ok(Self { kind, epsilon, seed })
    }

    /// Local perturbation `V` with unit spectral norm, fixed by the seed.
    pub fn local_operator(&self, basis: &ComplementBasis) -> Result<CMatrix> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let v = match self.kind {
            PerturbationKind::WithinComplement => {
                let r = linalg::random_hermitian(basis.len(), &mut rng);
                &basis.states * r * basis.states.adjoint()
            }
            PerturbationKind::Generic => linalg::random_hermitian(basis.states.nrows(), &mut rng),
        };
        let v = (&v + v.adjoint()).map(|z| z * 0.5);
        let norm = linalg::spectral_norm_hermitian(&v)?;
        if norm == 0.0 {
            return Err(Error::DegenerateInput);
        }
        Ok(v.map(|z| z / norm))
    }
}

/// Response of the spectrum to a perturbation at one `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationReport {
    pub g: f64,
    pub epsilon: f64,
    pub kind: PerturbationKind,
    /// Largest `|<psi|v_k>|` over eigenvectors.
    pub max_overlap: f64,
    pub index: usize,
    /// Energy of that eigenvector; the shift from the unperturbed zero.
    pub energy: f64,
    /// `||(H + eps V) psi|| / ||psi||`.
    pub residual: f64,
}

/// Adds `epsilon V` to every local term and rediagonalizes at each grid point.
pub fn perturbation_experiment(config: &SweepConfig, spec: &PerturbationSpec) -> Result<Vec<PerturbationReport>> {
    let plan = SweepPlan::prepare(config)?;
    let mut out = Vec::with_capacity(plan.len());
    for point in &plan.points {
        let local = embedding::build_local_operator(&point.basis, &config.coefficient_scheme())?;
        let v = spec.local_operator(&point.basis)?;
        let perturbed = &local.matrix + v.map(|z| z * spec.epsilon);
        let h = SparseHamiltonian::from_local(perturbed, config.sites)?;
        let psi = MpsDefinition::model(config.family, point.g)?.materialize(config.sites)?;
        let residual = h.apply(&psi)?.norm() / psi.norm();
        let psi_sector = plan.sector().project_state(&psi)?;
        let mut decomp = spectral::diagonalize_sector(&h, plan.sector())?;
        spectral::canonicalize_degenerate(&mut decomp, plan.sector(), Some(&psi_sector))?;
        let overlaps = decomp.vectors.adjoint() * psi_sector;
        let (index, max_overlap) = overlaps
            .iter()
            .map(|z| z.norm())
            .enumerate()
            .fold((0, -1.0), |best, (k, o)| if o > best.1 { (k, o) } else { best });
        out.push(PerturbationReport {
            g: point.g,
            epsilon: spec.epsilon,
            kind: spec.kind,
            max_overlap,
            index,
            energy: decomp.energies[index],
            residual,
        });
    }
    Ok(out)
}

/// One row of the `<sigma_x>` comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaXRow {
    pub g: f64,
    pub closed_form: f64,
    pub closed_form_variant: f64,
    pub finite: f64,
}

impl SigmaXRow {
    pub fn difference(&self) -> f64 {
        self.closed_form - self.finite
    }
}

/// Closed forms against the finite-ring transfer-matrix value.
pub fn sigma_x_curve(family: Family, grid: &[f64], sites: usize) -> Result<Vec<SigmaXRow>> {
    grid.iter()
        .map(|&g| {
            Ok(SigmaXRow {
                g,
                closed_form: mps::sigma_x_closed_form(g),
                closed_form_variant: mps::sigma_x_closed_form_variant(g),
                finite: mps::sigma_x_finite(family, g, sites)?,
            })
        })
        .collect()
}

/// `<sigma_x>` on site 1 of an explicit state.
pub fn sigma_x_dense(state: &StateVector) -> f64 {
    state.site_expectation(&mps::ops::pauli_x(), 0).re / state.norm().powi(2)
}
