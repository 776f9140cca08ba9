//! Bit-level helpers for spin-1/2 configurations on a periodic ring.
//!
//! Site `0` (site 1 in physics numbering) is the most significant of the `L`
//! low bits; a set bit means spin down.

/// Mask selecting the bit of `site` (0-based) in a chain of `sites`.
#[inline]
pub fn site_mask(site: usize, sites: usize) -> usize {
    1 << (sites - 1 - site)
}

#[inline]
pub fn site_bit(config: usize, site: usize, sites: usize) -> usize {
    (config >> (sites - 1 - site)) & 1
}

/// One-site translation `T`: the content of site `i` moves to site `i + 1`
/// (mod L). With site 0 as the top bit this is a right rotation.
#[inline]
pub fn translate(config: usize, sites: usize) -> usize {
    let low = config & 1;
    (config >> 1) | (low << (sites - 1))
}

/// `T^shift` applied to `config`.
pub fn translate_by(config: usize, shift: usize, sites: usize) -> usize {
    let shift = shift % sites;
    if shift == 0 {
        return config;
    }
    let mask = (1usize << sites) - 1;
    ((config >> shift) | (config << (sites - shift))) & mask
}

/// Smallest integer in the translation orbit of `config`, the number of
/// translations `m` with `T^m config == rep` (first hit), and the orbit period.
pub fn orbit_representative(config: usize, sites: usize) -> (usize, usize, usize) {
    let mut best = config;
    let mut best_shift = 0;
    let mut current = config;
    let mut period = sites;
    for m in 1..=sites {
        current = translate(current, sites);
        if current == config {
            period = m;
            break;
        }
        if current < best {
            best = current;
            best_shift = m;
        }
    }
    (best, best_shift, period)
}

/// Spin configuration of `config` as a list of physical indices, site 1 first.
pub fn config_digits(config: usize, sites: usize) -> alloc::vec::Vec<usize> {
    (0..sites).map(|s| site_bit(config, s, sites)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation_moves_first_site_to_second() {
        // sites: [1,0,0,0] -> [0,1,0,0]
        assert_eq!(translate(0b1000, 4), 0b0100);
        assert_eq!(translate(0b0001, 4), 0b1000);
        assert_eq!(translate_by(0b1000, 3, 4), 0b0001);
        assert_eq!(translate_by(0b1011, 4, 4), 0b1011);
    }

    #[test]
    fn representative_is_orbit_minimum() {
        let (rep, shift, period) = orbit_representative(0b1010, 4);
        assert_eq!((rep, period), (0b0101, 2));
        assert_eq!(translate_by(0b1010, shift, 4), rep);
        let (rep, _, period) = orbit_representative(0, 6);
        assert_eq!((rep, period), (0, 1));
        let (rep, shift, period) = orbit_representative(0b100000, 6);
        assert_eq!((rep, period), (1, 6));
        assert_eq!(translate_by(0b100000, shift, 6), 1);
    }
}
