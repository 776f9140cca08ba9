//! Independently constructed special states, used to check the MPS families
//! at their special parameter values.


use crate::lattice::site_bit;
use crate::linalg::c;
use crate::mps::StateVector;
use crate::CVector;

fn state(sites: usize, amplitude: impl Fn(usize) -> f64) -> StateVector {
    let amplitudes = CVector::from_fn(1 << sites, |config, _| c(amplitude(config), 0.0));
    StateVector::from_amplitudes(sites, amplitudes)
        .and_then(StateVector::normalized)
        .expect("reference states are nonzero")
}

/// `(|up...up> + |down...down>) / sqrt 2`.
pub fn ghz_state(sites: usize) -> StateVector {
    let all_down = (1 << sites) - 1;
    state(sites, |config| if config == 0 || config == all_down { 1.0 } else { 0.0 })
}

/// Equal-weight cat of the two Neel configurations (even `L`).
pub fn neel_cat(sites: usize) -> StateVector {
    let pattern: usize = (0..sites).filter(|i| i % 2 == 1).map(|i| 1 << (sites - 1 - i)).sum();
    let partner = pattern ^ ((1 << sites) - 1);
    state(sites, |config| if config == pattern || config == partner { 1.0 } else { 0.0 })
}

/// `|+>^L`, fully polarized along x.
pub fn x_polarized(sites: usize) -> StateVector {
    state(sites, |_| 1.0)
}

/// Ring cluster state `prod_i CZ_{i,i+1} |->^L`: every amplitude has equal
/// magnitude and sign `(-1)^(#down + #adjacent down-down pairs)`.
pub fn cluster_state(sites: usize) -> StateVector {
    state(sites, |config| {
        let mut exponent = 0;
        for i in 0..sites {
            let here = site_bit(config, i, sites);
            let next = site_bit(config, (i + 1) % sites, sites);
            exponent += here + here * next;
        }
        if exponent % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    })
}

/// `|<a|b>|`.
pub fn overlap(a: &StateVector, b: &StateVector) -> f64 {
    a.inner(b).norm()
}
