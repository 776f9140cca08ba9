//! Continuity-tracked complement bases along the control parameter.
//!
//! The numerical complement is only defined up to a unitary rotation at each
//! `g`. Marching in small steps and aligning every new basis to the previous
//! one by orthogonal Procrustes yields bases, and hence Hamiltonians, that vary
//! continuously with `g`. The march is inherently sequential.
//!
//! Where the block space loses rank the null space grows; the chain then picks
//! the frame inside it closest to the previous basis and flags the point.

use alloc::vec::Vec;

#[allow(unused_imports)] // redundant whenever std is in the dependency graph
use num_traits::Float;

use crate::embedding::{self, ComplementBasis};
use crate::linalg;
use crate::mps::{Family, MpsDefinition};
use crate::{Error, Result};

/// Chains start here unless told otherwise.
pub const DEFAULT_CHAIN_START: f64 = -1.0;
/// Default march step.
pub const DEFAULT_CHAIN_STEP: f64 = 0.005;

const SAME_G: f64 = 1e-12;

/// One Procrustes step of the march.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainStep {
    pub g_from: f64,
    pub g_to: f64,
    /// `||B_from - B_to U||_F` after alignment.
    pub distance: f64,
    /// `||U^H U - 1||_F`.
    pub unitarity_defect: f64,
    pub min_singular: f64,
    pub continuity_lost: bool,
    pub rank_deficient: bool,
}

/// Aligned basis at a requested parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainPoint {
    pub basis: ComplementBasis,
    /// Some step since the previous requested point lost continuity.
    pub continuity_lost: bool,
    /// The block space at this `g` has less than full rank.
    pub rank_deficient: bool,
}

impl ChainPoint {
    pub fn g(&self) -> f64 {
        self.basis.g
    }
}

/// Complement bases at the requested points plus the full step log.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisChain {
    pub family: Family,
    pub start: f64,
    pub max_step: f64,
    /// Sorted by `g`, one per distinct target.
    pub points: Vec<ChainPoint>,
    /// In march order: the upward leg first, then the downward leg.
    pub steps: Vec<ChainStep>,
}

impl BasisChain {
    pub fn point_at(&self, g: f64) -> Option<&ChainPoint> {
        self.points.iter().find(|p| (p.g() - g).abs() <= SAME_G)
    }

    pub fn basis_at(&self, g: f64) -> Option<&ComplementBasis> {
        self.point_at(g).map(|p| &p.basis)
    }

    pub fn max_unitarity_defect(&self) -> f64 {
        self.steps.iter().map(|s| s.unitarity_defect).fold(0.0, f64::max)
    }

    pub fn continuity_lost(&self) -> bool {
        self.steps.iter().any(|s| s.continuity_lost)
    }
}

/// Starts from the numerical complement at `start` and marches to every
/// target (upward for targets above `start`, downward from `start` for the
/// rest), never taking a step longer than `max_step`.
pub fn run_chain(family: Family, start: f64, targets: &[f64], max_step: f64) -> Result<BasisChain> {
    if !(max_step > 0.0) || !start.is_finite() {
        return Err(Error::invalid("chain step", "need a finite start and step > 0"));
    }
    if targets.iter().any(|g| !g.is_finite()) {
        return Err(Error::invalid("targets", "must be finite"));
    }
    let mut sorted: Vec<f64> = targets.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup_by(|a, b| (*a - *b).abs() <= SAME_G);

    let origin_sub = embedding::build_a_subspace(&MpsDefinition::model(family, start)?)?;
    let origin = embedding::numerical_complement(&origin_sub)?;

    let mut points = Vec::with_capacity(sorted.len());
    let mut steps = Vec::new();

    let upward: Vec<f64> = sorted.iter().copied().filter(|&g| g >= start - SAME_G).collect();
    let downward: Vec<f64> = sorted.iter().rev().copied().filter(|&g| g < start - SAME_G).collect();
    for leg in [upward, downward] {
        let mut current = origin.clone();
        for target in leg {
            let (next, lost, deficient) = march(family, &current, target, max_step, &mut steps)?;
            current = next.clone();
            points.push(ChainPoint {
                basis: next,
                continuity_lost: lost,
                rank_deficient: deficient,
            });
        }
    }
    points.sort_by(|a, b| a.g().total_cmp(&b.g()));
    Ok(BasisChain {
        family,
        start,
        max_step,
        points,
        steps,
    })
}

fn march(
    family: Family,
    from: &ComplementBasis,
    target: f64,
    max_step: f64,
    log: &mut Vec<ChainStep>,
) -> Result<(ComplementBasis, bool, bool)> {
    let span = target - from.g;
    if span.abs() <= SAME_G {
        let deficient = !embedding::build_a_subspace(&MpsDefinition::model(family, target)?)?.is_full_rank();
        return Ok((ComplementBasis { g: target, ..from.clone() }, false, deficient));
    }
    let count = ((span.abs() / max_step) - 1e-9).ceil().max(1.0) as usize;
    let origin = from.g;
    let mut current = from.clone();
    let mut lost_any = false;
    let mut deficient = false;
    for k in 1..=count {
        let g = if k == count { target } else { origin + span * k as f64 / count as f64 };
        let (next, step) = step_to(family, &current, g)?;
        lost_any |= step.continuity_lost;
        deficient = step.rank_deficient;
        log.push(step);
        current = next;
    }
    Ok((current, lost_any, deficient))
}

/// One aligned step from `previous` to parameter `g`.
pub fn step_to(family: Family, previous: &ComplementBasis, g: f64) -> Result<(ComplementBasis, ChainStep)> {
    let subspace = embedding::build_a_subspace(&MpsDefinition::model(family, g)?)?;
    let frame = subspace.complement_frame()?;
    let fresh = ComplementBasis {
        g,
        states: frame,
        provenance: previous.provenance,
    };
    let rank_deficient = !subspace.is_full_rank();
    let alignment = embedding::procrustes_align(previous, &fresh)?;
    let unitarity_defect = linalg::unitarity_defect(&alignment.rotation);
    let min_singular = alignment.min_singular();
    let basis = if alignment.continuity_lost {
        // Restart from the unaligned frame.
        let columns = previous.len();
        ComplementBasis {
            states: fresh.states.columns(0, columns).into_owned(),
            ..fresh
        }
    } else {
        alignment.basis
    };
    let distance = linalg::frobenius(&(&previous.states - &basis.states));
    let step = ChainStep {
        g_from: previous.g,
        g_to: g,
        distance,
        unitarity_defect,
        min_singular,
        continuity_lost: alignment.continuity_lost,
        rank_deficient,
    };
    Ok((basis, step))
}
