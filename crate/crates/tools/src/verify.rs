//! Invariant suite behind `scarmps verify`.

use std::fmt;

use scarmps_core::chain;
use scarmps_core::embedding::{self, CoefficientScheme, SchemeKind};
use scarmps_core::hamiltonian::DEFAULT_DENSE_CAP;
use scarmps_core::linalg;
use scarmps_core::mps::{Family, MpsDefinition};
use scarmps_core::spectral::{self, MomentumBasis};
use scarmps_core::sweep::{linspace, SweepConfig, SweepPlan};
use scarmps_core::{CVector, Complex64};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub family: Family,
    pub a: f64,
    pub sites: Vec<usize>,
    pub g_points: usize,
    pub page_samples: usize,
    pub seed: u64,
    /// Negative control: builds the local operator from non-Hermitian
    /// coefficients.
    pub inject_non_hermitian: bool,
}

impl VerifyOptions {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            a: embedding::DEFAULT_GHZ_A,
            sites: vec![6, 8, 10],
            g_points: 9,
            page_samples: 100,
            seed: 0,
            inject_non_hermitian: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    /// Human-readable bound, e.g. `< 1e-10`.
    pub expected: String,
    pub passed: bool,
}

impl Check {
    fn below(name: String, observed: f64, bound: f64) -> Self {
        Self {
            name,
            observed,
            expected: format!("< {bound:e}"),
            passed: observed < bound,
        }
    }

    fn at_least(name: String, observed: f64, bound: f64) -> Self {
        Self {
            name,
            observed,
            expected: format!(">= {bound:e}"),
            passed: observed >= bound,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: observed {:.3e}, expected {}", self.name, self.observed, self.expected)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        let failed = self.failures().count();
        writeln!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

pub fn run_verify(options: &VerifyOptions) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let family = options.family;
    let grid = linspace(-1.0, 1.0, options.g_points.max(2));

    // Hermiticity of the local operator.
    let scheme = if options.inject_non_hermitian {
        let mut c = CoefficientScheme::scar(4).coefficients;
        c[(0, 1)] = Complex64::new(0.5, 0.0);
        CoefficientScheme::custom(c)
    } else {
        CoefficientScheme::scar(4)
    };
    let probe = embedding::ghz_analytic_complement(0.5, options.a)?;
    let defect = match embedding::build_local_operator(&probe, &scheme) {
        Ok(h) => scheme.hermiticity_defect().max(h.hermiticity_defect()),
        Err(scarmps_core::Error::NonHermitian(d)) => d,
        Err(e) => return Err(e.into()),
    };
    report.checks.push(Check::below("hermiticity of c and h".into(), defect, 1e-12));

    // Complement orthogonality and, for the numerical chain, Procrustes.
    let bases = match family {
        Family::Ghz => grid
            .iter()
            .map(|&g| embedding::ghz_analytic_complement(g, options.a))
            .collect::<scarmps_core::Result<Vec<_>>>()?,
        Family::Z2 => {
            let chain = chain::run_chain(family, chain::DEFAULT_CHAIN_START, &grid, chain::DEFAULT_CHAIN_STEP)?;
            report.checks.push(Check::below(
                "procrustes unitarity".into(),
                chain.max_unitarity_defect(),
                1e-12,
            ));
            let lost = chain.steps.iter().filter(|s| s.continuity_lost).count();
            report.checks.push(Check::below("procrustes continuity losses".into(), lost as f64, 0.5));
            chain.points.into_iter().map(|p| p.basis).collect()
        }
    };
    let mut overlap = 0.0f64;
    let mut orthonormality = 0.0f64;
    for basis in &bases {
        let subspace = embedding::build_a_subspace(&MpsDefinition::model(family, basis.g)?)?;
        overlap = overlap.max(basis.max_overlap_with(&subspace));
        orthonormality = orthonormality.max(linalg::unitarity_defect(&basis.states));
    }
    report.checks.push(Check::below("complement orthogonal to block space".into(), overlap, 1e-12));
    report.checks.push(Check::below("complement orthonormal".into(), orthonormality, 1e-12));

    for &sites in &options.sites {
        for scheme in [SchemeKind::Scar, SchemeKind::Ground] {
            let mut cfg = SweepConfig::new(family, scheme, sites).with_range(-1.0, 1.0, grid.len());
            cfg.a = options.a;
            let plan = SweepPlan::prepare(&cfg)?;
            let mut annihilation = 0.0f64;
            let mut lowest = f64::INFINITY;
            let mut entropy_low = f64::INFINITY;
            let mut entropy_high = f64::NEG_INFINITY;
            for i in 0..plan.len() {
                let point = plan.evaluate(i)?;
                annihilation = annihilation.max(point.annihilation_residual);
                for r in &point.records {
                    entropy_low = entropy_low.min(r.entropy);
                    entropy_high = entropy_high.max(r.entropy);
                }
                if scheme == SchemeKind::Ground {
                    let all = spectral::all_sector_energies(&plan.hamiltonian(i)?)?;
                    lowest = lowest.min(all[0]);
                }
            }
            report
                .checks
                .push(Check::below(format!("annihilation (L={sites}, {scheme})"), annihilation, 1e-10));
            let cap = sites as f64 / 2.0 * std::f64::consts::LN_2 + 1e-10;
            report
                .checks
                .push(Check::at_least(format!("entropy >= 0 (L={sites}, {scheme})"), entropy_low, -1e-12));
            report
                .checks
                .push(Check::below(format!("entropy <= (L/2) ln 2 (L={sites}, {scheme})"), entropy_high, cap));
            if scheme == SchemeKind::Ground {
                report
                    .checks
                    .push(Check::at_least(format!("ground positivity (L={sites})"), lowest, -1e-10));
            }
        }

        // Sector spectra against the dense spectrum at one generic point.
        let mut cfg = SweepConfig::new(family, SchemeKind::Scar, sites).at(0.5);
        cfg.a = options.a;
        let plan = SweepPlan::prepare(&cfg)?;
        let h = plan.hamiltonian(0)?;
        if h.dimension() <= DEFAULT_DENSE_CAP {
            let dense_matrix = h.dense_matrix(DEFAULT_DENSE_CAP)?;
            let dense = spectral::hermitian_eig(&dense_matrix)?.energies;
            let zero = spectral::diagonalize_sector(&h, &MomentumBasis::zero_momentum(sites)?)?.energies;
            let containment = zero
                .iter()
                .map(|e| dense.iter().map(|d| (d - e).abs()).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max);
            report
                .checks
                .push(Check::below(format!("k=0 spectrum within dense (L={sites})"), containment, 1e-8));
            let union = spectral::all_sector_energies(&h)?;
            let mismatch = if union.len() == dense.len() {
                union.iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            report
                .checks
                .push(Check::below(format!("sector union equals dense (L={sites})"), mismatch, 1e-8));
            if sites == options.sites[0] {
                let v = CVector::from_fn(h.dimension(), |k, _| {
                    Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos())
                });
                let streamed = h.apply_slice(v.as_slice())?;
                let multiplied = &dense_matrix * &v;
                report.checks.push(Check::below(
                    format!("streamed apply equals dense (L={sites})"),
                    (streamed - multiplied).norm() / v.norm(),
                    1e-12,
                ));
            }
        }
    }

    let page_sites = 10;
    let mean = spectral::haar_mean_entropy(page_sites, options.page_samples.max(1), options.seed)?;
    report.checks.push(Check::below(
        format!("Haar mean entropy vs Page (L={page_sites})"),
        (mean - spectral::page_entropy(page_sites)).abs(),
        0.02,
    ));
    Ok(report)
}
