//! Lanes: fixed-width byte blocks standing in for a single code bit.
//!
//! Every parity equation acts on lanes elementwise, so a lane of width `L`
//! carries `8 * L` independent copies of the binary code.

use std::fmt;
use std::ops::{BitXorAssign, Deref, DerefMut};

/// Default lane width for arrays built by the library.
pub const DEFAULT_LANE_WIDTH: usize = 64;

/// Tally of lane XORs performed by one measured run.
///
/// Counting is explicit: every routine that XORs lanes takes a
/// `&mut XorCounter`, so each measurement owns its accumulator.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct XorCounter {
    count: u64,
}

impl XorCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn add(&mut self, n: u64) {
        self.count += n;
    }
}

/// `dst ^= src`, counted as one lane XOR.
#[inline]
pub fn xor_into(dst: &mut [u8], src: &[u8], counter: &mut XorCounter) {
    debug_assert_eq!(dst.len(), src.len());
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
    counter.count += 1;
}

/// An owned lane.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lane(Box<[u8]>);

impl Lane {
    pub fn zero(width: usize) -> Self {
        Lane(vec![0u8; width].into_boxed_slice())
    }

    pub fn from_bytes(bytes: &[u8]) -> Self {
        Lane(bytes.into())
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// `self ^= other`, counted.
    pub fn xor_counted(&mut self, other: &[u8], counter: &mut XorCounter) {
        xor_into(&mut self.0, other, counter);
    }
}

impl Deref for Lane {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl DerefMut for Lane {
    fn deref_mut(&mut self) -> &mut [u8] {
        &mut self.0
    }
}

impl BitXorAssign<&[u8]> for Lane {
    fn bitxor_assign(&mut self, rhs: &[u8]) {
        debug_assert_eq!(self.0.len(), rhs.len());
        for (d, s) in self.0.iter_mut().zip(rhs) {
            *d ^= s;
        }
    }
}

impl BitXorAssign<&Lane> for Lane {
    fn bitxor_assign(&mut self, rhs: &Lane) {
        *self ^= &rhs.0[..];
    }
}

impl fmt::Debug for Lane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lane(")?;
        for b in self.0.iter().take(16) {
            write!(f, "{b:02x}")?;
        }
        if self.0.len() > 16 {
            write!(f, "..")?;
        }
        write!(f, ")")
    }
}
