//! Big-endian wire/bit index helpers.

use crate::{Error, Result};

#[inline]
pub(crate) fn mask(wire: usize, n_wires: usize) -> usize {
    1usize << (n_wires - 1 - wire)
}

#[inline]
pub(crate) fn bit(index: usize, wire: usize, n_wires: usize) -> usize {
    (index >> (n_wires - 1 - wire)) & 1
}

/// Packs the bits of `index` on `wires` into a sub-index; `wires[0]` is the
/// most significant bit of the result.
#[inline]
pub(crate) fn gather(index: usize, wires: &[usize], n_wires: usize) -> usize {
    wires
        .iter()
        .fold(0, |acc, &w| (acc << 1) | bit(index, w, n_wires))
}

/// Inverse of [`gather`]: spreads a sub-index over `wires`, all other bits zero.
#[inline]
pub(crate) fn scatter(sub: usize, wires: &[usize], n_wires: usize) -> usize {
    let k = wires.len();
    wires.iter().enumerate().fold(0, |acc, (j, &w)| {
        if (sub >> (k - 1 - j)) & 1 == 1 {
            acc | mask(w, n_wires)
        } else {
            acc
        }
    })
}

pub(crate) fn check_wires(wires: &[usize], n_wires: usize) -> Result<()> {
    let mut seen = vec![false; n_wires];
    for &w in wires {
        if w >= n_wires {
            return Err(Error::WireOutOfRange { wire: w, n_wires });
        }
        if seen[w] {
            return Err(Error::DuplicateWire(w));
        }
        seen[w] = true;
    }
    Ok(())
}

/// Wires of `0..n_wires` that are in neither list, ascending.
pub(crate) fn complement(n_wires: usize, a: &[usize], b: &[usize]) -> Vec<usize> {
    (0..n_wires)
        .filter(|w| !a.contains(w) && !b.contains(w))
        .collect()
}

pub(crate) fn to_bits(value: usize, width: usize) -> Vec<u8> {
    (0..width)
        .map(|j| ((value >> (width - 1 - j)) & 1) as u8)
        .collect()
}
