//! Local block space of an MPS, its orthogonal complement, and the Hermitian
//! annihilators built from the complement.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // redundant whenever std is in the dependency graph
use num_traits::Float;

use crate::linalg::{self, c, ZERO};
use crate::mps::{ops, MpsDefinition};
use crate::{CMatrix, CVector, Error, Result};

/// Default free parameter of the analytic GHZ complement.
pub const DEFAULT_GHZ_A: f64 = 0.009;
/// Relative singular-value threshold separating the block space from its
/// complement.
pub const NULL_SPACE_THRESHOLD: f64 = 1e-12;
/// Procrustes overlaps with a singular value below this lose continuity.
pub const CONTINUITY_THRESHOLD: f64 = 1e-12;

/// Smallest `D` with `d^D > chi^2`.
pub fn minimal_locality(phys_dim: usize, bond_dim: usize) -> usize {
    let target = bond_dim * bond_dim;
    let mut locality = 1;
    let mut size = phys_dim;
    while size <= target {
        locality += 1;
        size *= phys_dim;
    }
    locality
}

/// Complete basis of `chi x chi` matrices used to span the block space. For
/// `chi = 2` this is `{1/sqrt2, sigma+, sigma-, sigma_z/sqrt2}`; larger bond
/// dimensions use matrix units.
pub fn matrix_basis(bond_dim: usize) -> Vec<CMatrix> {
    if bond_dim == 2 {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        return alloc::vec![
            ops::identity() * c(h, 0.0),
            ops::sigma_plus(),
            ops::sigma_minus(),
            ops::pauli_z() * c(h, 0.0),
        ];
    }
    let mut out = Vec::with_capacity(bond_dim * bond_dim);
    for i in 0..bond_dim {
        for j in 0..bond_dim {
            let mut m = CMatrix::zeros(bond_dim, bond_dim);
            m[(i, j)] = c(1.0, 0.0);
            out.push(m);
        }
    }
    out
}

/// The span of all `D`-site MPS blocks `sum tr(X A^{s_1}...A^{s_D}) |s_1...s_D>`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSubspace {
    pub locality: usize,
    pub phys_dim: usize,
    pub bond_dim: usize,
    pub g: f64,
    /// One column per basis matrix `X`; not orthonormal in general.
    pub states: CMatrix,
    pub singular_values: Vec<f64>,
    pub numerical_rank: usize,
}

impl LocalSubspace {
    /// `chi^2`, the dimension of the block space when it has full rank.
    pub fn expected_rank(&self) -> usize {
        self.bond_dim * self.bond_dim
    }

    pub fn is_full_rank(&self) -> bool {
        self.numerical_rank == self.expected_rank()
    }

    pub fn local_dim(&self) -> usize {
        self.states.nrows()
    }

    /// Orthonormal frame of the complement, whatever its dimension.
    pub fn complement_frame(&self) -> Result<CMatrix> {
        let (q, _) = linalg::column_space(&self.states, NULL_SPACE_THRESHOLD);
        linalg::orthogonal_complement(&q)
    }
}

/// Builds the block space on the minimal locality `D` (3 for the shipped
/// models). The numerical rank is reported; a rank below `chi^2` is a
/// warning here and becomes an error in [`numerical_complement`].
pub fn build_a_subspace(mps: &MpsDefinition) -> Result<LocalSubspace> {
    let d = mps.phys_dim();
    let chi = mps.bond_dim();
    let locality = minimal_locality(d, chi);
    let local_dim = d.pow(locality as u32);
    let basis = matrix_basis(chi);
    let mut states = CMatrix::zeros(local_dim, basis.len());
    let mut digits = alloc::vec![0usize; locality];
    for config in 0..local_dim {
        let mut rest = config;
        for slot in (0..locality).rev() {
            digits[slot] = rest % d;
            rest /= d;
        }
        let mut product = CMatrix::identity(chi, chi);
        for &s in &digits {
            product *= mps.matrix(s);
        }
        for (k, x) in basis.iter().enumerate() {
            states[(config, k)] = (x * &product).trace();
        }
    }
    let (q, singular_values) = linalg::column_space(&states, NULL_SPACE_THRESHOLD);
    Ok(LocalSubspace {
        locality,
        phys_dim: d,
        bond_dim: chi,
        g: mps.g(),
        states,
        singular_values,
        numerical_rank: q.ncols(),
    })
}

/// How a complement basis was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    /// The closed-form GHZ states with free parameter `a`.
    AnalyticGhz { a: f64 },
    /// Singular-value null space, possibly Procrustes-aligned.
    Numerical,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::AnalyticGhz { a } => write!(f, "analytic_ghz(a={a})"),
            Provenance::Numerical => f.write_str("numerical_procrustes"),
        }
    }
}

/// Basis of the local complement, one state per column.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementBasis {
    pub g: f64,
    pub states: CMatrix,
    pub provenance: Provenance,
}

impl ComplementBasis {
    pub fn len(&self) -> usize {
        self.states.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.states.ncols() == 0
    }

    pub fn state(&self, n: usize) -> CVector {
        self.states.column(n).into_owned()
    }

    /// Gram matrix `Psi^H Psi`.
    pub fn gram(&self) -> CMatrix {
        self.states.adjoint() * &self.states
    }

    /// Orthogonal projector onto the span (assumes orthonormal columns).
    pub fn projector(&self) -> CMatrix {
        &self.states * self.states.adjoint()
    }

    /// Largest `|<a|psi_n>|` against the normalized block states.
    pub fn max_overlap_with(&self, subspace: &LocalSubspace) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..subspace.states.ncols() {
            let block = subspace.states.column(k);
            let norm = block.norm();
            if norm == 0.0 {
                continue;
            }
            for n in 0..self.len() {
                worst = worst.max(self.states.column(n).dotc(&block).norm() / norm);
            }
        }
        worst
    }
}

/// Orthonormal complement from the singular value decomposition of the block
/// states. Fails when the complement does not have dimension `d^D - chi^2`.
pub fn numerical_complement(subspace: &LocalSubspace) -> Result<ComplementBasis> {
    let frame = subspace.complement_frame()?;
    let expected = subspace.local_dim() - subspace.expected_rank();
    if frame.ncols() != expected {
        return Err(Error::ComplementRank {
            expected,
            found: frame.ncols(),
            rank: subspace.numerical_rank,
        });
    }
    Ok(ComplementBasis {
        g: subspace.g,
        states: frame,
        provenance: Provenance::Numerical,
    })
}

/// The four closed-form GHZ complement states, each normalized, ordered
/// `psi_1 .. psi_4`. Requires `0 < a < 1`; at the endpoints the embedded
/// state becomes degenerate with other zero-energy states.
pub fn ghz_analytic_complement(g: f64, a: f64) -> Result<ComplementBasis> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::invalid(
            "a",
            format!("{a} outside (0, 1); a = 0 or 1 leaves a zero-energy degeneracy"),
        ));
    }
    if !g.is_finite() {
        return Err(Error::invalid("g", "must be finite"));
    }
    Ok(ghz_analytic_complement_unchecked(g, a))
}

/// [`ghz_analytic_complement`] without the range check on `a`, for studying
/// the degenerate endpoints.
pub fn ghz_analytic_complement_unchecked(g: f64, a: f64) -> ComplementBasis {
    let q = 0.5 * (1.0 + g * g);
    let b = 1.0 - a;
    // Columns indexed |s1 s2 s3> with up = 0: uuu, uud, udu, udd, duu, dud, ddu, ddd.
    let columns: [[f64; 8]; 4] = [
        [-g, -1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, -1.0, -1.0, 1.0, g],
        [-g * a, a * q, a, -a * q, -b * q, b, b * q, -g * b],
        [-g * b, b * q, b, -b * q, a * q, -a, -a * q, g * a],
    ];
    let mut states = CMatrix::zeros(8, 4);
    for (n, column) in columns.iter().enumerate() {
        let norm = column.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (r, &x) in column.iter().enumerate() {
            states[(r, n)] = c(x / norm, 0.0);
        }
    }
    ComplementBasis {
        g,
        states,
        provenance: Provenance::AnalyticGhz { a },
    }
}

/// Result of aligning one complement basis to another.
#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    pub basis: ComplementBasis,
    /// The minimizing unitary (or isometry, when aligning into a larger
    /// frame).
    pub rotation: CMatrix,
    pub singular_values: Vec<f64>,
    /// Set when the overlap matrix is numerically singular; the rotation is
    /// then not unique and continuity is not guaranteed.
    pub continuity_lost: bool,
}

impl Alignment {
    pub fn min_singular(&self) -> f64 {
        self.singular_values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Solves `min_U ||previous - current U||_F` over unitaries via the polar
/// factor of `current^H previous`, and returns `current U`.
///
/// `current` may have more columns than `previous` (a rank-deficient point
/// whose null space is larger); `U` is then the optimal isometry and the
/// result the closest frame of the right size inside `current`.
pub fn procrustes_align(previous: &ComplementBasis, current: &ComplementBasis) -> Result<Alignment> {
    if previous.states.nrows() != current.states.nrows() {
        return Err(Error::DimensionMismatch {
            expected: previous.states.nrows(),
            found: current.states.nrows(),
        });
    }
    if current.len() < previous.len() {
        return Err(Error::DimensionMismatch {
            expected: previous.len(),
            found: current.len(),
        });
    }
    let overlap = current.states.adjoint() * &previous.states;
    let (rotation, singular_values) = linalg::polar_factor(&overlap);
    let continuity_lost = singular_values.iter().any(|&s| s < CONTINUITY_THRESHOLD);
    Ok(Alignment {
        basis: ComplementBasis {
            g: current.g,
            states: &current.states * &rotation,
            provenance: current.provenance,
        },
        rotation,
        singular_values,
        continuity_lost,
    })
}

/// Which coefficient pattern a scheme uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// `c_nm = (-1)^n delta_nm` with `n` counted from 1.
    Scar,
    /// `c_nm = delta_nm`; the embedded state is a ground state.
    Ground,
    Custom,
}

impl SchemeKind {
    pub fn label(self) -> &'static str {
        match self {
            SchemeKind::Scar => "scar",
            SchemeKind::Ground => "ground",
            SchemeKind::Custom => "custom",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "scar" => Ok(SchemeKind::Scar),
            "ground" => Ok(SchemeKind::Ground),
            _ => Err(Error::UnknownScheme(s.into())),
        }
    }
}

/// Coefficients `c_nm` of `h = sum c_nm |psi_n><psi_m|`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientScheme {
    pub kind: SchemeKind,
    pub coefficients: CMatrix,
}

impl CoefficientScheme {
    pub fn new(kind: SchemeKind, size: usize) -> Self {
        let coefficients = match kind {
            SchemeKind::Scar => CMatrix::from_fn(size, size, |i, j| {
                if i != j {
                    ZERO
                } else if i % 2 == 0 {
                    c(-1.0, 0.0)
                } else {
                    c(1.0, 0.0)
                }
            }),
            SchemeKind::Ground | SchemeKind::Custom => CMatrix::identity(size, size),
        };
        Self { kind, coefficients }
    }

    pub fn scar(size: usize) -> Self {
        Self::new(SchemeKind::Scar, size)
    }

    pub fn ground(size: usize) -> Self {
        Self::new(SchemeKind::Ground, size)
    }

    /// Arbitrary coefficients. Hermiticity is checked when the operator is
    /// built, not here.
    pub fn custom(coefficients: CMatrix) -> Self {
        Self {
            kind: SchemeKind::Custom,
            coefficients,
        }
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(&self.coefficients)
    }
}

/// A Hermitian operator on `D` sites that annihilates every MPS block.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalAnnihilator {
    pub matrix: CMatrix,
    pub scheme: SchemeKind,
    pub g: f64,
}

impl LocalAnnihilator {
    /// Largest `||h a|| / ||a||` over the block states.
    pub fn annihilation_residual(&self, subspace: &LocalSubspace) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..subspace.states.ncols() {
            let block = subspace.states.column(k);
            let norm = block.norm();
            if norm > 0.0 {
                worst = worst.max((&self.matrix * block).norm() / norm);
            }
        }
        worst
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(&self.matrix)
    }

    /// Ascending eigenvalues of the local operator.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(linalg::eigh(&self.matrix)?.0)
    }
}

/// `h = sum_{n,m} c_nm |psi_n><psi_m|`.
pub fn build_local_operator(
    basis: &ComplementBasis,
    scheme: &CoefficientScheme,
) -> Result<LocalAnnihilator> {
    let k = basis.len();
    if scheme.coefficients.nrows() != k || scheme.coefficients.ncols() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: scheme.coefficients.nrows(),
        });
    }
    let defect = scheme.hermiticity_defect();
    if defect > 1e-12 {
        return Err(Error::NonHermitian(defect));
    }
    let h = &basis.states * &scheme.coefficients * basis.states.adjoint();
    let h = (&h + h.adjoint()).map(|z| z * 0.5);
    Ok(LocalAnnihilator {
        matrix: h,
        scheme: scheme.kind,
        g: basis.g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mps::Family;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn subspace(family: Family, g: f64) -> LocalSubspace {
        build_a_subspace(&MpsDefinition::model(family, g).unwrap()).unwrap()
    }

    #[test]
    fn locality_condition() {
        assert_eq!(minimal_locality(2, 2), 3);
        assert_eq!(minimal_locality(2, 1), 1);
        assert_eq!(minimal_locality(3, 2), 2);
        let sub = subspace(Family::Z2, 0.3);
        assert_eq!((sub.states.nrows(), sub.states.ncols()), (8, 4));
        assert_eq!(sub.locality, 3);
    }

    #[test]
    fn blocks_follow_trace_formula() {
        let mps = MpsDefinition::model(Family::Z2, -0.6).unwrap();
        let sub = build_a_subspace(&mps).unwrap();
        let basis = matrix_basis(2);
        for config in 0..8 {
            let digits = [config >> 2 & 1, config >> 1 & 1, config & 1];
            let product = mps.matrix(digits[0]) * mps.matrix(digits[1]) * mps.matrix(digits[2]);
            for (k, x) in basis.iter().enumerate() {
                assert!((sub.states[(config, k)] - (x * &product).trace()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn ghz_block_space_at_zero() {
        // At g = 0 the blocks of |uuu> and |ddd> survive.
        let sub = subspace(Family::Ghz, 0.0);
        let (q, _) = linalg::column_space(&sub.states, NULL_SPACE_THRESHOLD);
        let projector = &q * q.adjoint();
        for config in [0usize, 7] {
            let mut e = CVector::zeros(8);
            e[config] = c(1.0, 0.0);
            assert!(((&projector * &e) - &e).norm() < 1e-12);
        }
        assert_eq!(subspace(Family::Ghz, 0.5).numerical_rank, 4);
    }

    #[test]
    fn rank_deficient_points_are_reported() {
        let ghz = subspace(Family::Ghz, 0.0);
        assert_eq!(ghz.numerical_rank, 3);
        assert!(matches!(
            numerical_complement(&ghz),
            Err(Error::ComplementRank { expected: 4, found: 5, rank: 3 })
        ));
        let z2 = subspace(Family::Z2, 0.0);
        assert_eq!(z2.numerical_rank, 2);
        assert!(numerical_complement(&z2).is_err());
        assert_eq!(z2.complement_frame().unwrap().ncols(), 6);
    }

    #[test]
    fn numerical_complement_is_orthonormal_and_orthogonal() {
        for (family, g) in [(Family::Z2, -1.0), (Family::Z2, 0.4), (Family::Ghz, -0.7)] {
            let sub = subspace(family, g);
            let comp = numerical_complement(&sub).unwrap();
            assert_eq!(comp.len(), 4);
            assert!(linalg::unitarity_defect(&comp.states) < 1e-12);
            assert!(comp.max_overlap_with(&sub) < 1e-12);
        }
    }

    #[test]
    fn analytic_ghz_complement() {
        for g in [-1.0, -0.3, 0.0, 0.5, 1.0] {
            let comp = ghz_analytic_complement(g, DEFAULT_GHZ_A).unwrap();
            assert!(linalg::unitarity_defect(&comp.states) < 1e-12);
            assert!(comp.max_overlap_with(&subspace(Family::Ghz, g)) < 1e-12);
        }
        let comp = ghz_analytic_complement(0.0, DEFAULT_GHZ_A).unwrap();
        let third = 1.0 / 3.0f64.sqrt();
        let expected = [0.0, -third, third, third, 0.0, 0.0, 0.0, 0.0];
        for (r, x) in expected.iter().enumerate() {
            assert!((comp.states[(r, 0)] - c(*x, 0.0)).norm() < 1e-15);
        }
        assert!(ghz_analytic_complement(0.2, 0.0).is_err());
        assert!(ghz_analytic_complement(0.2, 1.0).is_err());
    }

    #[test]
    fn analytic_matches_numerical_span() {
        for g in [-0.9, -0.5, 0.25, 0.5, 0.75] {
            let analytic = ghz_analytic_complement(g, DEFAULT_GHZ_A).unwrap();
            let numerical = numerical_complement(&subspace(Family::Ghz, g)).unwrap();
            let distance = linalg::frobenius(&(analytic.projector() - numerical.projector()));
            assert!(distance < 1e-10, "g = {g}: {distance}");
        }
    }

    #[test]
    fn procrustes_identity_and_recovery() {
        let comp = numerical_complement(&subspace(Family::Z2, -0.2)).unwrap();
        let same = procrustes_align(&comp, &comp).unwrap();
        assert!(linalg::frobenius(&(same.rotation.clone() - CMatrix::identity(4, 4))) < 1e-12);
        assert!(linalg::frobenius(&(same.basis.states - &comp.states)) < 1e-12);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let (_, v) = linalg::eigh(&linalg::random_hermitian(4, &mut rng)).unwrap();
        let rotated = ComplementBasis {
            states: &comp.states * &v,
            ..comp.clone()
        };
        let aligned = procrustes_align(&comp, &rotated).unwrap();
        assert!(linalg::frobenius(&(aligned.basis.states - &comp.states)) < 1e-12);
        assert!(linalg::unitarity_defect(&aligned.rotation) < 1e-12);
        assert!(!aligned.continuity_lost);
    }

    #[test]
    fn orthogonal_bases_lose_continuity() {
        let mut first = CMatrix::zeros(8, 4);
        let mut second = CMatrix::zeros(8, 4);
        for k in 0..4 {
            first[(k, k)] = c(1.0, 0.0);
            second[(k + 4, k)] = c(1.0, 0.0);
        }
        let a = ComplementBasis { g: 0.0, states: first, provenance: Provenance::Numerical };
        let b = ComplementBasis { g: 0.1, states: second, provenance: Provenance::Numerical };
        assert!(procrustes_align(&a, &b).unwrap().continuity_lost);
    }

    #[test]
    fn local_operator_spectra() {
        let comp = numerical_complement(&subspace(Family::Z2, 0.3)).unwrap();
        let ground = build_local_operator(&comp, &CoefficientScheme::ground(4)).unwrap();
        let values = ground.eigenvalues().unwrap();
        for (v, e) in values.iter().zip([0., 0., 0., 0., 1., 1., 1., 1.]) {
            assert!((v - e).abs() < 1e-12);
        }
        let scar = build_local_operator(&comp, &CoefficientScheme::scar(4)).unwrap();
        let values = scar.eigenvalues().unwrap();
        for (v, e) in values.iter().zip([-1., -1., 0., 0., 0., 0., 1., 1.]) {
            assert!((v - e).abs() < 1e-12);
        }
        assert_eq!(
            CoefficientScheme::scar(4).coefficients.diagonal().iter().map(|z| z.re).collect::<Vec<_>>(),
            [-1.0, 1.0, -1.0, 1.0]
        );
    }

    #[test]
    fn non_hermitian_scheme_is_rejected() {
        let comp = ghz_analytic_complement(0.5, DEFAULT_GHZ_A).unwrap();
        let mut coefficients = CMatrix::identity(4, 4);
        coefficients[(0, 1)] = c(0.5, 0.0);
        let err = build_local_operator(&comp, &CoefficientScheme::custom(coefficients)).unwrap_err();
        assert!(matches!(err, Error::NonHermitian(_)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn annihilators_kill_blocks(g in -1.5f64..1.5, z2 in any::<bool>(), scar in any::<bool>()) {
            let family = if z2 { Family::Z2 } else { Family::Ghz };
            let sub = subspace(family, g);
            let comp = match family {
                Family::Ghz => ghz_analytic_complement(g, DEFAULT_GHZ_A).unwrap(),
                Family::Z2 => {
                    prop_assume!(sub.is_full_rank());
                    numerical_complement(&sub).unwrap()
                }
            };
            let scheme = if scar { CoefficientScheme::scar(4) } else { CoefficientScheme::ground(4) };
            let h = build_local_operator(&comp, &scheme).unwrap();
            prop_assert!(h.hermiticity_defect() < 1e-14);
            prop_assert!(h.annihilation_residual(&sub) < 1e-10);
            let values = h.eigenvalues().unwrap();
            if scar {
                prop_assert!(values[0] < -0.5 && values[7] > 0.5);
            } else {
                prop_assert!(values[0] > -1e-12);
            }
        }
    }
}
