//! Word-level helpers for packed coordinate masks.

/// Gathers the bits of `x` selected by `mask` into the low bits of the result,
/// preserving order (a software `pext`).
#[inline]
pub fn gather(x: u32, mask: u32) -> u32 {
    let mut out = 0u32;
    let mut m = mask;
    let mut k = 0;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if x & low != 0 {
            out |= 1 << k;
        }
        k += 1;
        m &= m - 1;
    }
    out
}

/// Inverse of [`gather`]: spreads the low bits of `v` onto the positions of `mask`.
#[inline]
pub fn scatter(v: u32, mask: u32) -> u32 {
    let mut out = 0u32;
    let mut m = mask;
    let mut k = 0;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if v & (1 << k) != 0 {
            out |= low;
        }
        k += 1;
        m &= m - 1;
    }
    out
}

/// Mask with the low `n` bits set.
#[inline]
pub fn low_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Packs 1-based coordinates into a mask.
pub fn mask_of(coords: &[usize]) -> u32 {
    coords.iter().fold(0, |m, &c| m | (1 << (c - 1)))
}

/// 1-based coordinates of the set bits of `mask`, ascending.
pub fn coords_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

/// Within-word masks: bit `p` of `IN_WORD[i]` is set iff bit `i` of `p` is 0.
pub(crate) const IN_WORD: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gather_examples() {
        assert_eq!(gather(0b1011, 0b1010), 0b11);
        assert_eq!(gather(0b0001, 0b1010), 0);
        assert_eq!(scatter(0b11, 0b1010), 0b1010);
        assert_eq!(coords_of(mask_of(&[1, 4, 7])), vec![1, 4, 7]);
    }

    proptest! {
        #[test]
        fn scatter_inverts_gather(x in any::<u32>(), mask in any::<u32>()) {
            prop_assert_eq!(scatter(gather(x, mask), mask), x & mask);
        }
    }
}
