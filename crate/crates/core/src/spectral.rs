//! Momentum sectors, Hermitian eigendecomposition, half-chain entanglement
//! and scar identification.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)] // redundant whenever std is in the dependency graph
use num_traits::Float;
use rand::{Rng, SeedableRng};

use crate::hamiltonian::SparseHamiltonian;
use crate::lattice;
use crate::linalg::{self, c};
use crate::mps::StateVector;
use crate::{CMatrix, CVector, Complex64, Error, Result};

/// Eigenvalues below this are dropped from entanglement spectra.
pub const SCHMIDT_CUTOFF: f64 = 1e-14;
/// Below this overlap the scar search falls back to the zero-energy
/// eigenspace.
pub const SCAR_OVERLAP_THRESHOLD: f64 = 0.999;

const NOT_IN_SECTOR: u32 = u32::MAX;

/// Symmetry-adapted basis of one lattice-momentum sector.
///
/// State `a` is `R_a^{-1/2} sum_{j<R_a} e^{-i k j} T^j |r_a>` with `k = 2 pi
/// momentum / L`, `r_a` the smallest configuration of its orbit and `R_a`
/// the orbit period.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumBasis {
    sites: usize,
    momentum: usize,
    representatives: Vec<usize>,
    periods: Vec<usize>,
    /// Per configuration: sector index (or `NOT_IN_SECTOR`) and the power `j`
    /// with `config = T^j rep`.
    slot: Vec<u32>,
    power: Vec<u8>,
}

impl MomentumBasis {
    pub fn new(sites: usize, momentum: usize) -> Result<Self> {
        if sites < 3 {
            return Err(Error::ChainTooShort { sites, support: 3 });
        }
        if sites > 30 {
            return Err(Error::invalid("sites", "at most 30 sites"));
        }
        if momentum >= sites {
            return Err(Error::invalid("momentum", "must be below L"));
        }
        let dim = 1usize << sites;
        let mut slot = vec![NOT_IN_SECTOR; dim];
        let mut power = vec![0u8; dim];
        let mut representatives = Vec::new();
        let mut periods = Vec::new();
        for config in 0..dim {
            let (rep, _, period) = lattice::orbit_representative(config, sites);
            if rep != config {
                continue;
            }
            if (momentum * period) % sites != 0 {
                continue;
            }
            let index = representatives.len() as u32;
            representatives.push(rep);
            periods.push(period);
            let mut member = rep;
            for j in 0..period {
                slot[member] = index;
                power[member] = j as u8;
                member = lattice::translate(member, sites);
            }
        }
        Ok(Self {
            sites,
            momentum,
            representatives,
            periods,
            slot,
            power,
        })
    }

    /// The zero-momentum sector, where every orbit contributes one state.
    pub fn zero_momentum(sites: usize) -> Result<Self> {
        Self::new(sites, 0)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }
    pub fn momentum(&self) -> usize {
        self.momentum
    }
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }
    pub fn periods(&self) -> &[usize] {
        &self.periods
    }

    /// Normalization weights `R_a^{-1/2}`.
    pub fn norms(&self) -> Vec<f64> {
        self.periods.iter().map(|&r| 1.0 / (r as f64).sqrt()).collect()
    }

    fn phase(&self, j: usize) -> Complex64 {
        let angle = 2.0 * core::f64::consts::PI * (self.momentum * j) as f64 / self.sites as f64;
        c(angle.cos(), -angle.sin())
    }

    /// `<config|a>` if `config` belongs to a sector orbit.
    pub fn component(&self, config: usize) -> Option<(usize, Complex64)> {
        let a = self.slot[config];
        if a == NOT_IN_SECTOR {
            return None;
        }
        let a = a as usize;
        let weight = 1.0 / (self.periods[a] as f64).sqrt();
        Some((a, self.phase(self.power[config] as usize) * weight))
    }

    /// Sector coefficients `<a|v>`.
    pub fn project_state(&self, v: &StateVector) -> Result<CVector> {
        if v.sites() != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                found: v.sites(),
            });
        }
        let mut out = CVector::zeros(self.dim());
        for (config, amp) in v.amplitudes().iter().enumerate() {
            if let Some((a, overlap)) = self.component(config) {
                out[a] += overlap.conj() * amp;
            }
        }
        Ok(out)
    }

    /// Expands sector coefficients into the configuration basis.
    pub fn lift_to_full(&self, coefficients: &CVector) -> Result<StateVector> {
        if coefficients.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: coefficients.len(),
            });
        }
        let mut amplitudes = CVector::zeros(1 << self.sites);
        for config in 0..amplitudes.len() {
            if let Some((a, overlap)) = self.component(config) {
                amplitudes[config] = overlap * coefficients[a];
            }
        }
        StateVector::from_amplitudes(self.sites, amplitudes)
    }
}

/// Number of binary necklaces `(1/L) sum_{d|L} phi(d) 2^{L/d}`, the dimension
/// of the zero-momentum sector.
pub fn necklace_count(sites: usize) -> usize {
    let mut total = 0usize;
    for d in 1..=sites {
        if sites % d == 0 {
            total += euler_phi(d) << (sites / d);
        }
    }
    total / sites
}

fn euler_phi(mut n: usize) -> usize {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// `M_ab = <a|H|b>` in a momentum sector. Checks translation covariance of
/// `H` on a pseudo-random vector first.
pub fn project_to_sector(h: &SparseHamiltonian, basis: &MomentumBasis) -> Result<CMatrix> {
    if h.sites() != basis.sites() {
        return Err(Error::DimensionMismatch {
            expected: basis.sites(),
            found: h.sites(),
        });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let probe: Vec<Complex64> = (0..h.dimension()).map(|_| linalg::complex_gaussian(&mut rng)).collect();
    let probe_norm = probe.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let scale = linalg::frobenius(h.local()).max(1.0) * probe_norm;
    let defect = h.translation_defect(&probe)?;
    if defect > 1e-8 * scale {
        return Err(Error::SymmetryViolation(defect / scale));
    }

    let n = basis.dim();
    let mut m = CMatrix::zeros(n, n);
    for (b, &rep) in basis.representatives().iter().enumerate() {
        let weight = (basis.periods()[b] as f64).sqrt();
        for (target, value) in h.apply_to_config(rep) {
            if let Some((a, overlap)) = basis.component(target) {
                m[(a, b)] += overlap.conj() * value * weight;
            }
        }
    }
    Ok(m)
}

/// Full Hermitian eigendecomposition with ascending energies.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub energies: Vec<f64>,
    /// Orthonormal eigenvectors as columns.
    pub vectors: CMatrix,
    /// `max_k ||M v_k - E_k v_k||`.
    pub residual: f64,
    /// `||V^H V - 1||_F`.
    pub orthonormality_defect: f64,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }

    pub fn spectral_range(&self) -> f64 {
        match (self.energies.first(), self.energies.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0.0,
        }
    }
}

/// Diagonalizes a Hermitian matrix (deviation from Hermiticity must stay
/// below `1e-10` relative to its largest entry).
pub fn hermitian_eig(m: &CMatrix) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let scale = m.iter().fold(1.0f64, |acc, z| acc.max(z.norm()));
    let defect = linalg::hermiticity_defect(m);
    if defect > 1e-10 * scale {
        return Err(Error::NonHermitian(defect));
    }
    let symmetric = (m + m.adjoint()).map(|z| z * 0.5);
    let (energies, vectors) = linalg::eigh(&symmetric)?;
    let mut residual = 0.0f64;
    let mv = &symmetric * &vectors;
    for (k, &e) in energies.iter().enumerate() {
        let r = (mv.column(k) - vectors.column(k) * c(e, 0.0)).norm();
        residual = residual.max(r);
    }
    let orthonormality_defect = linalg::unitarity_defect(&vectors);
    Ok(EigenDecomposition {
        energies,
        vectors,
        residual,
        orthonormality_defect,
    })
}

/// Projects `H` into the sector and diagonalizes it.
pub fn diagonalize_sector(h: &SparseHamiltonian, basis: &MomentumBasis) -> Result<EigenDecomposition> {
    hermitian_eig(&project_to_sector(h, basis)?)
}

/// Sorted eigenvalues closer than this times `max(1, range)` form one
/// degenerate cluster.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Index ranges of degenerate clusters (two or more states) in an
/// ascending spectrum.
pub fn degenerate_clusters(energies: &[f64]) -> Vec<core::ops::Range<usize>> {
    let range = match (energies.first(), energies.last()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => return Vec::new(),
    };
    let tolerance = DEGENERACY_TOLERANCE * range.max(1.0);
    let mut clusters = Vec::new();
    let mut start = 0;
    for k in 1..=energies.len() {
        if k == energies.len() || energies[k] - energies[k - 1] > tolerance {
            if k - start > 1 {
                clusters.push(start..k);
            }
            start = k;
        }
    }
    clusters
}

/// Orbit-diagonal, translation-invariant tiebreak: magnetization, then
/// domain walls, then the representative itself.
fn tiebreak_weight(rep: usize, sites: usize) -> f64 {
    let mask = (1usize << sites) - 1;
    let rotated = ((rep << 1) | (rep >> (sites - 1))) & mask;
    let walls = (rep ^ rotated).count_ones() as f64;
    1.0 + rep.count_ones() as f64 + 1e-3 * walls + 1e-6 * rep as f64 / mask as f64
}

/// Fixes the eigenbasis inside every degenerate cluster so the reported
/// eigenvectors do not depend on solver rounding. When `anchor` has a
/// non-negligible projection onto a cluster, that normalized projection
/// becomes the cluster's first vector; the rest of the cluster diagonalizes
/// the tiebreak operator. Returns the clusters.
pub fn canonicalize_degenerate(
    decomp: &mut EigenDecomposition,
    basis: &MomentumBasis,
    anchor: Option<&CVector>,
) -> Result<Vec<core::ops::Range<usize>>> {
    if decomp.vectors.nrows() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: decomp.vectors.nrows(),
        });
    }
    let weights: Vec<f64> = basis
        .representatives()
        .iter()
        .map(|&r| tiebreak_weight(r, basis.sites()))
        .collect();
    let clusters = degenerate_clusters(&decomp.energies);
    let base_residual = decomp.residual;
    for cluster in &clusters {
        let width = cluster.len();
        let block = decomp.vectors.columns(cluster.start, width).into_owned();
        let mut tiebreak = block.adjoint() * CMatrix::from_fn(block.nrows(), width, |i, j| block[(i, j)] * weights[i]);
        if let Some(anchor) = anchor {
            let mut u = block.adjoint() * anchor;
            let norm = u.norm();
            if norm > 1e-8 * anchor.norm() {
                u /= c(norm, 0.0);
                // Move the anchor direction below every tiebreak eigenvalue (all >= 1).
                let outer = &u * u.adjoint();
                let keep = CMatrix::identity(width, width) - &outer;
                tiebreak = &keep * tiebreak * &keep - outer;
            }
        }
        let (_, rotation) = linalg::eigh(&((&tiebreak + tiebreak.adjoint()).map(|z| z * 0.5)))?;
        decomp.vectors.columns_mut(cluster.start, width).copy_from(&(block * rotation));
        let spread = decomp.energies[cluster.end - 1] - decomp.energies[cluster.start];
        decomp.residual = decomp.residual.max(base_residual + spread);
    }
    if !clusters.is_empty() {
        decomp.orthonormality_defect = linalg::unitarity_defect(&decomp.vectors);
    }
    Ok(clusters)
}

/// Schmidt weights across the cut between sites `L/2` and `L/2 + 1`.
pub fn half_chain_schmidt_weights(v: &StateVector) -> Result<Vec<f64>> {
    let sites = v.sites();
    if sites % 2 != 0 {
        return Err(Error::OddLength(sites));
    }
    let half = 1usize << (sites / 2);
    let amps = v.amplitudes();
    // rows: sites 1..L/2 (high bits), columns: the rest
    let m: CMatrix = DMatrix::from_fn(half, half, |left, right| amps[left * half + right]);
    let singular = m.singular_values();
    Ok(singular.iter().map(|s| s * s).filter(|&w| w > SCHMIDT_CUTOFF).collect())
}

/// Von Neumann entropy (nats) of the contiguous block of sites `1..L/2`.
pub fn half_chain_entropy(v: &StateVector) -> Result<f64> {
    let weights = half_chain_schmidt_weights(v)?;
    Ok(weights.iter().map(|&w| -w * w.ln()).sum::<f64>().max(0.0))
}

/// Mean half-chain entropy of a Haar-random state, `ln m - m / (2n)` with
/// `m <= n` the two block dimensions; `(L/2) ln 2 - 1/2` for even `L`.
pub fn page_entropy(sites: usize) -> f64 {
    let small = sites / 2;
    let large = sites - small;
    let ln2 = core::f64::consts::LN_2;
    small as f64 * ln2 - 0.5 * 2f64.powi(small as i32 - large as i32)
}

/// Normalized complex-Gaussian (Haar-distributed) state.
pub fn haar_random_state<R: Rng + ?Sized>(sites: usize, rng: &mut R) -> Result<StateVector> {
    let amplitudes = CVector::from_fn(1 << sites, |_, _| linalg::complex_gaussian(rng));
    StateVector::from_amplitudes(sites, amplitudes)?.normalized()
}

/// Mean half-chain entropy over `samples` Haar-random states drawn from a
/// seeded generator.
pub fn haar_mean_entropy(sites: usize, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::invalid("samples", "need at least one sample"));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for _ in 0..samples {
        total += half_chain_entropy(&haar_random_state(sites, &mut rng)?)?;
    }
    Ok(total / samples as f64)
}

/// Where the embedded state sits in a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct ScarIdentification {
    /// Eigenvector with the largest overlap.
    pub index: usize,
    /// `|<psi|v_index>|`, or the norm of the projection onto the zero-energy
    /// eigenspace when `degenerate`.
    pub overlap: f64,
    pub energy: f64,
    /// The best single overlap was below the threshold and the zero-energy
    /// eigenspace had several states.
    pub degenerate: bool,
    /// Indices spanning the zero-energy eigenspace used for the fallback.
    pub zero_space: Vec<usize>,
    /// Sector vector representing the scar: the eigenvector, or the
    /// normalized projection in the degenerate case.
    pub state: CVector,
}

/// Locates the eigenvector closest to the embedded state.
pub fn find_scar_state(decomp: &EigenDecomposition, mps_in_sector: &CVector) -> Result<ScarIdentification> {
    if mps_in_sector.len() != decomp.vectors.nrows() {
        return Err(Error::DimensionMismatch {
            expected: decomp.vectors.nrows(),
            found: mps_in_sector.len(),
        });
    }
    if decomp.is_empty() {
        return Err(Error::invalid("decomposition", "empty spectrum"));
    }
    let overlaps = decomp.vectors.adjoint() * mps_in_sector;
    let mut index = 0;
    for k in 1..overlaps.len() {
        if overlaps[k].norm() > overlaps[index].norm() {
            index = k;
        }
    }
    let best = overlaps[index].norm();
    let energy = decomp.energies[index];
    if best >= SCAR_OVERLAP_THRESHOLD {
        return Ok(ScarIdentification {
            index,
            overlap: best,
            energy,
            degenerate: false,
            zero_space: vec![index],
            state: decomp.vector(index),
        });
    }
    let tolerance = 1e-9 * decomp.spectral_range().max(1.0);
    let zero_space: Vec<usize> = (0..decomp.len())
        .filter(|&k| decomp.energies[k].abs() <= tolerance)
        .collect();
    if zero_space.len() < 2 {
        return Ok(ScarIdentification {
            index,
            overlap: best,
            energy,
            degenerate: false,
            zero_space,
            state: decomp.vector(index),
        });
    }
    let mut projection = CVector::zeros(mps_in_sector.len());
    for &k in &zero_space {
        projection += decomp.vectors.column(k) * overlaps[k];
    }
    let overlap = projection.norm();
    if overlap > 0.0 {
        projection /= c(overlap, 0.0);
    }
    Ok(ScarIdentification {
        index,
        overlap,
        energy,
        degenerate: true,
        zero_space,
        state: projection,
    })
}

/// Per-eigenstate energy, entanglement and overlap with the embedded state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyRow {
    pub state_index: usize,
    pub energy: f64,
    pub entropy: f64,
    pub mps_overlap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub sites: usize,
    pub momentum: usize,
    pub page_entropy: f64,
    pub rows: Vec<EntropyRow>,
}

/// Entropy and overlap for every eigenvector of a sector decomposition.
pub fn entropy_report(
    decomp: &EigenDecomposition,
    basis: &MomentumBasis,
    mps_in_sector: &CVector,
) -> Result<EntropyReport> {
    let overlaps = decomp.vectors.adjoint() * mps_in_sector;
    let mut rows = Vec::with_capacity(decomp.len());
    for k in 0..decomp.len() {
        let full = basis.lift_to_full(&decomp.vector(k))?;
        rows.push(EntropyRow {
            state_index: k,
            energy: decomp.energies[k],
            entropy: half_chain_entropy(&full)?,
            mps_overlap: overlaps[k].norm(),
        });
    }
    Ok(EntropyReport {
        sites: basis.sites(),
        momentum: basis.momentum(),
        page_entropy: page_entropy(basis.sites()),
        rows,
    })
}

/// Sector energies of every momentum, concatenated and sorted.
pub fn all_sector_energies(h: &SparseHamiltonian) -> Result<Vec<f64>> {
    let mut energies = Vec::with_capacity(h.dimension());
    for k in 0..h.sites() {
        let basis = MomentumBasis::new(h.sites(), k)?;
        energies.extend(diagonalize_sector(h, &basis)?.energies);
    }
    energies.sort_by(f64::total_cmp);
    Ok(energies)
}
