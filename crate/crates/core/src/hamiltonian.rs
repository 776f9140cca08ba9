//! Translation-invariant sums of a `D`-site operator on a periodic ring.
//!
//! Only the local block is stored; the global operator exists through
//! [`SparseHamiltonian::apply`], which streams each placed term over the
//! configuration basis.

use alloc::vec;
use alloc::vec::Vec;

use crate::embedding::LocalAnnihilator;
use crate::lattice::{self, site_mask};
use crate::linalg::ZERO;
use crate::mps::StateVector;
use crate::{CMatrix, CVector, Complex64, Error, Result};

/// Default cap on the dimension of explicit dense matrices (`2^14`).
pub const DEFAULT_DENSE_CAP: usize = 1 << 14;

/// Nonzero entries of the local block, grouped by input column.
#[derive(Debug, Clone, PartialEq)]
struct LocalStencil {
    columns: Vec<Vec<(usize, Complex64)>>,
}

impl LocalStencil {
    fn new(local: &CMatrix) -> Self {
        let columns = (0..local.ncols())
            .map(|j| {
                (0..local.nrows())
                    .filter(|&i| local[(i, j)] != ZERO)
                    .map(|i| (i, local[(i, j)]))
                    .collect()
            })
            .collect();
        Self { columns }
    }
}

/// The local operator placed on sites `site, site+1, ..., site+D-1` (mod L).
#[derive(Debug, Clone, Copy)]
pub struct SiteEmbeddedOperator<'a> {
    pub site: usize,
    pub sites: usize,
    hamiltonian: &'a SparseHamiltonian,
}

impl SiteEmbeddedOperator<'_> {
    /// Sites touched by this term (0-based, wrapped).
    pub fn support(&self) -> Vec<usize> {
        (0..self.hamiltonian.locality).map(|k| (self.site + k) % self.sites).collect()
    }

    /// Bitmask of the supported sites.
    pub fn support_mask(&self) -> usize {
        self.support().into_iter().fold(0, |m, s| m | site_mask(s, self.sites))
    }

    /// `out += h_site * input`.
    pub fn apply_add(&self, input: &[Complex64], out: &mut [Complex64]) {
        let masks: Vec<usize> = self.support().into_iter().map(|s| site_mask(s, self.sites)).collect();
        let support = self.support_mask();
        let d = masks.len();
        let stencil = &self.hamiltonian.stencil;
        for (config, &amp) in input.iter().enumerate() {
            if amp == ZERO {
                continue;
            }
            let mut local = 0;
            for &m in &masks {
                local = (local << 1) | usize::from(config & m != 0);
            }
            let rest = config & !support;
            for &(row, value) in &stencil.columns[local] {
                let mut target = rest;
                for (k, &m) in masks.iter().enumerate() {
                    if (row >> (d - 1 - k)) & 1 == 1 {
                        target |= m;
                    }
                }
                out[target] += value * amp;
            }
        }
    }
}

/// `H = sum_i h_i` on a periodic chain, stored as one dense local block.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHamiltonian {
    sites: usize,
    locality: usize,
    local: CMatrix,
    stencil: LocalStencil,
}

impl SparseHamiltonian {
    /// Places a `2^D x 2^D` block at every site of an `L`-site ring.
    pub fn from_local(local: CMatrix, sites: usize) -> Result<Self> {
        let size = local.nrows();
        if local.ncols() != size || !size.is_power_of_two() || size < 2 {
            return Err(Error::DimensionMismatch {
                expected: size.next_power_of_two().max(2),
                found: local.ncols(),
            });
        }
        let locality = size.trailing_zeros() as usize;
        if sites < locality || sites < 3 {
            return Err(Error::ChainTooShort {
                sites,
                support: locality.max(3),
            });
        }
        if sites >= usize::BITS as usize - 1 {
            return Err(Error::invalid("sites", "chain too long for a dense state"));
        }
        let stencil = LocalStencil::new(&local);
        Ok(Self {
            sites,
            locality,
            local,
            stencil,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }
    pub fn locality(&self) -> usize {
        self.locality
    }
    pub fn dimension(&self) -> usize {
        1 << self.sites
    }
    pub fn local(&self) -> &CMatrix {
        &self.local
    }

    pub fn term(&self, site: usize) -> SiteEmbeddedOperator<'_> {
        SiteEmbeddedOperator {
            site: site % self.sites,
            sites: self.sites,
            hamiltonian: self,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = SiteEmbeddedOperator<'_>> {
        (0..self.sites).map(move |i| self.term(i))
    }

    /// `H v` on raw amplitudes.
    pub fn apply_slice(&self, input: &[Complex64]) -> Result<CVector> {
        if input.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: input.len(),
            });
        }
        let mut out = vec![ZERO; input.len()];
        for term in self.terms() {
            term.apply_add(input, &mut out);
        }
        Ok(CVector::from_vec(out))
    }

    /// `H v`, never forming the `2^L x 2^L` matrix.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.sites() != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                found: v.sites(),
            });
        }
        StateVector::from_amplitudes(self.sites, self.apply_slice(v.amplitudes().as_slice())?)
    }

    /// `H` applied to the basis configuration `config`, as `(target, value)`
    /// pairs (targets may repeat).
    pub fn apply_to_config(&self, config: usize) -> Vec<(usize, Complex64)> {
        let mut out = Vec::new();
        for term in self.terms() {
            let masks: Vec<usize> = term.support().into_iter().map(|s| site_mask(s, self.sites)).collect();
            let rest = config & !term.support_mask();
            let mut local = 0;
            for &m in &masks {
                local = (local << 1) | usize::from(config & m != 0);
            }
            for &(row, value) in &self.stencil.columns[local] {
                let mut target = rest;
                for (k, &m) in masks.iter().enumerate() {
                    if (row >> (self.locality - 1 - k)) & 1 == 1 {
                        target |= m;
                    }
                }
                out.push((target, value));
            }
        }
        out
    }

    /// Explicit matrix; refuses dimensions above `cap`.
    pub fn dense_matrix(&self, cap: usize) -> Result<CMatrix> {
        let dim = self.dimension();
        if dim > cap {
            return Err(Error::DenseCapExceeded { dim, cap });
        }
        let mut m = CMatrix::zeros(dim, dim);
        for config in 0..dim {
            for (target, value) in self.apply_to_config(config) {
                m[(target, config)] += value;
            }
        }
        Ok(m)
    }

    /// `||T H v - H T v||` for the one-site translation `T`.
    pub fn translation_defect(&self, v: &[Complex64]) -> Result<f64> {
        let shifted = translate_amplitudes(v, self.sites);
        let h_then_t = translate_amplitudes(self.apply_slice(v)?.as_slice(), self.sites);
        let t_then_h = self.apply_slice(&shifted)?;
        Ok((CVector::from_vec(h_then_t) - t_then_h).norm())
    }
}

/// `H = sum_i h_i` from an annihilator; fails for `L < D`.
pub fn assemble(local: &LocalAnnihilator, sites: usize) -> Result<SparseHamiltonian> {
    SparseHamiltonian::from_local(local.matrix.clone(), sites)
}

/// Amplitudes of `T|v>` where `T` moves site `i` to `i + 1`.
pub fn translate_amplitudes(v: &[Complex64], sites: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; v.len()];
    for (config, &amp) in v.iter().enumerate() {
        out[lattice::translate(config, sites)] = amp;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{
        build_a_subspace, build_local_operator, ghz_analytic_complement, CoefficientScheme, DEFAULT_GHZ_A,
    };
    use crate::linalg::{self, complex_gaussian};
    use crate::mps::{Family, MpsDefinition};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ghz_hamiltonian(g: f64, scar: bool, sites: usize) -> SparseHamiltonian {
        let basis = ghz_analytic_complement(g, DEFAULT_GHZ_A).unwrap();
        let scheme = if scar { CoefficientScheme::scar(4) } else { CoefficientScheme::ground(4) };
        assemble(&build_local_operator(&basis, &scheme).unwrap(), sites).unwrap()
    }

    fn random_vector(dim: usize, rng: &mut ChaCha8Rng) -> CVector {
        CVector::from_fn(dim, |_, _| complex_gaussian(rng))
    }

    #[test]
    fn zero_operator_gives_zero() {
        let h = SparseHamiltonian::from_local(CMatrix::zeros(8, 8), 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = random_vector(256, &mut rng);
        assert_eq!(h.apply_slice(v.as_slice()).unwrap().norm(), 0.0);
    }

    #[test]
    fn short_chain_rejected() {
        assert!(matches!(
            SparseHamiltonian::from_local(CMatrix::zeros(8, 8), 2),
            Err(Error::ChainTooShort { .. })
        ));
        assert!(SparseHamiltonian::from_local(CMatrix::zeros(6, 6), 6).is_err());
    }

    #[test]
    fn streamed_apply_matches_dense() {
        let h = ghz_hamiltonian(0.3, true, 6);
        let dense = h.dense_matrix(DEFAULT_DENSE_CAP).unwrap();
        assert!(linalg::hermiticity_defect(&dense) < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let v = random_vector(64, &mut rng);
            let streamed = h.apply_slice(v.as_slice()).unwrap();
            assert!((streamed - &dense * &v).norm() < 1e-12);
        }
        assert!(matches!(h.dense_matrix(32), Err(Error::DenseCapExceeded { dim: 64, cap: 32 })));
    }

    #[test]
    fn mps_is_annihilated() {
        for scar in [true, false] {
            let h = ghz_hamiltonian(0.5, scar, 8);
            let psi = MpsDefinition::model(Family::Ghz, 0.5).unwrap().materialize(8).unwrap();
            assert!(h.apply(&psi).unwrap().norm() < 1e-12);
            let dense = h.dense_matrix(DEFAULT_DENSE_CAP).unwrap();
            assert!((&dense * psi.amplitudes()).norm() < 1e-12);
        }
    }

    #[test]
    fn hermitian_and_translation_covariant() {
        let h = ghz_hamiltonian(-0.4, true, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let u = random_vector(128, &mut rng);
            let v = random_vector(128, &mut rng);
            let uhv = u.dotc(&h.apply_slice(v.as_slice()).unwrap());
            let vhu = v.dotc(&h.apply_slice(u.as_slice()).unwrap());
            assert!((uhv - vhu.conj()).norm() < 1e-10);
            assert!(h.translation_defect(u.as_slice()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn ground_scheme_is_positive() {
        let h = ghz_hamiltonian(0.7, false, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let v = random_vector(256, &mut rng);
            let rayleigh = v.dotc(&h.apply_slice(v.as_slice()).unwrap()).re / v.norm_squared();
            assert!(rayleigh >= -1e-10);
        }
    }

    #[test]
    fn single_term_is_local() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let local = linalg::random_hermitian(8, &mut rng);
        let h = SparseHamiltonian::from_local(local, 6).unwrap();
        for site in 0..6 {
            let term = h.term(site);
            let support = term.support_mask();
            assert_eq!(support.count_ones(), 3);
            for config in [0usize, 0b101101, 0b111111, 0b010010] {
                let mut input = vec![ZERO; 64];
                input[config] = linalg::ONE;
                let mut out = vec![ZERO; 64];
                term.apply_add(&input, &mut out);
                for (target, z) in out.iter().enumerate() {
                    if *z != ZERO {
                        assert_eq!((target ^ config) & !support, 0);
                    }
                }
            }
        }
        // wrap-around term touches sites 5, 0, 1
        assert_eq!(h.term(5).support(), [5, 0, 1]);
    }

    #[test]
    fn z2_blocks_annihilated_on_ring() {
        let mps = MpsDefinition::model(Family::Z2, -0.3).unwrap();
        let sub = build_a_subspace(&mps).unwrap();
        let comp = crate::embedding::numerical_complement(&sub).unwrap();
        let local = build_local_operator(&comp, &CoefficientScheme::scar(4)).unwrap();
        let h = assemble(&local, 10).unwrap();
        let psi = mps.materialize(10).unwrap();
        assert!(h.apply(&psi).unwrap().norm() < 1e-10);
    }
}
