//! The `tau(p-1) x (k+2)` code array.

use std::collections::BTreeSet;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::lane::{Lane, DEFAULT_LANE_WIDTH};
use crate::params::CodeParams;

/// Row-major grid of lanes. Columns `0..k` hold information, column `k`
/// the row parity and column `k + 1` the diagonal parity.
#[derive(Clone, PartialEq, Eq)]
pub struct CodeArray {
    params: CodeParams,
    lane_width: usize,
    data: Vec<u8>,
    zero: Box<[u8]>,
}

impl CodeArray {
    /// All-zero array with the given lane width.
    pub fn new(params: CodeParams, lane_width: usize) -> Result<Self> {
        if lane_width == 0 {
            return Err(Error::ZeroLaneWidth);
        }
        let len = params.rows() * params.columns() * lane_width;
        Ok(CodeArray {
            params,
            lane_width,
            data: vec![0u8; len],
            zero: vec![0u8; lane_width].into_boxed_slice(),
        })
    }

    /// All-zero array with [`DEFAULT_LANE_WIDTH`].
    pub fn with_default_width(params: CodeParams) -> Self {
        Self::new(params, DEFAULT_LANE_WIDTH).expect("default width is nonzero")
    }

    /// Array whose information cells are filled from `rng`; parity zero.
    pub fn random<R: RngCore + ?Sized>(
        params: CodeParams,
        lane_width: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let mut array = Self::new(params, lane_width)?;
        for i in 0..params.rows() {
            for j in 0..params.k() {
                rng.fill_bytes(array.cell_mut(i, j));
            }
        }
        Ok(array)
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn lane_width(&self) -> usize {
        self.lane_width
    }

    /// The zero lane of this array's width.
    pub fn zero_lane(&self) -> &[u8] {
        &self.zero
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.params.rows() && j < self.params.columns());
        (i * self.params.columns() + j) * self.lane_width
    }

    /// Stored cell `(i, j)`; `i` must be a real row.
    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> &[u8] {
        let o = self.offset(i, j);
        &self.data[o..o + self.lane_width]
    }

    #[inline]
    pub fn cell_mut(&mut self, i: usize, j: usize) -> &mut [u8] {
        let o = self.offset(i, j);
        let w = self.lane_width;
        &mut self.data[o..o + w]
    }

    pub fn set_cell(&mut self, i: usize, j: usize, value: &[u8]) -> Result<()> {
        if i >= self.params.rows() || j >= self.params.columns() {
            return Err(Error::IndexOutOfRing { row: i, col: j });
        }
        if value.len() != self.lane_width {
            return Err(Error::LaneWidthMismatch {
                expected: self.lane_width,
                got: value.len(),
            });
        }
        self.cell_mut(i, j).copy_from_slice(value);
        Ok(())
    }

    /// Information cell `(i, j)` for a ring index `i`; virtual rows read as
    /// the zero lane.
    pub fn virtual_read(&self, i: usize, j: usize) -> Result<&[u8]> {
        if i >= self.params.ring() || j >= self.params.k() {
            return Err(Error::IndexOutOfRing { row: i, col: j });
        }
        Ok(self.info(i, j))
    }

    /// Unchecked form of [`virtual_read`](Self::virtual_read).
    #[inline]
    pub(crate) fn info(&self, i: usize, j: usize) -> &[u8] {
        if i < self.params.rows() {
            self.cell(i, j)
        } else {
            &self.zero
        }
    }

    /// Copy of column `j`, one lane per real row.
    pub fn column(&self, j: usize) -> Vec<Lane> {
        (0..self.params.rows())
            .map(|i| Lane::from_bytes(self.cell(i, j)))
            .collect()
    }

    pub fn set_column(&mut self, j: usize, lanes: &[Lane]) -> Result<()> {
        if lanes.len() != self.params.rows() {
            return Err(Error::InvalidParams(format!(
                "column has {} lanes, expected {}",
                lanes.len(),
                self.params.rows()
            )));
        }
        for (i, lane) in lanes.iter().enumerate() {
            self.set_cell(i, j, lane)?;
        }
        Ok(())
    }

    /// Overwrites every cell of column `j` with zeros.
    pub fn clear_column(&mut self, j: usize) {
        for i in 0..self.params.rows() {
            self.cell_mut(i, j).fill(0);
        }
    }

    /// Information cells in row-major order, concatenated.
    pub fn info_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.params.info_cells() * self.lane_width);
        for i in 0..self.params.rows() {
            for j in 0..self.params.k() {
                out.extend_from_slice(self.cell(i, j));
            }
        }
        out
    }

    /// Fills the information cells from `bytes` in row-major order,
    /// zero-padding when `bytes` is short.
    pub fn load_info(&mut self, bytes: &[u8]) {
        let w = self.lane_width;
        let mut chunks = bytes.chunks(w);
        for i in 0..self.params.rows() {
            for j in 0..self.params.k() {
                let cell = self.cell_mut(i, j);
                match chunks.next() {
                    Some(chunk) => {
                        cell[..chunk.len()].copy_from_slice(chunk);
                        cell[chunk.len()..].fill(0);
                    }
                    None => cell.fill(0),
                }
            }
        }
    }

    /// XOR of two arrays with the same shape.
    pub fn xor_with(&mut self, other: &CodeArray) {
        assert_eq!(self.params, other.params);
        assert_eq!(self.lane_width, other.lane_width);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&b| b == 0)
    }
}

impl std::fmt::Debug for CodeArray {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CodeArray")
            .field("params", &self.params)
            .field("lane_width", &self.lane_width)
            .finish_non_exhaustive()
    }
}

/// Free-function form of [`CodeArray::virtual_read`].
pub fn virtual_read(array: &CodeArray, i: usize, j: usize) -> Result<&[u8]> {
    array.virtual_read(i, j)
}

/// Canonical representative of `x` modulo `tau * p`.
pub fn mod_ring(params: &CodeParams, x: i64) -> usize {
    params.mod_ring(x)
}

/// The set of erased columns, one or two distinct indices in `0..=k+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasurePattern {
    erased: BTreeSet<usize>,
}

impl ErasurePattern {
    pub fn new(params: &CodeParams, columns: &[usize]) -> Result<Self> {
        let erased: BTreeSet<usize> = columns.iter().copied().collect();
        if erased.len() != columns.len() || erased.is_empty() {
            return Err(Error::InvalidPattern);
        }
        if erased.len() > 2 {
            return Err(Error::TooManyErasures(erased.len()));
        }
        if let Some(&col) = erased.iter().find(|&&c| c >= params.columns()) {
            return Err(Error::ColumnOutOfRange {
                col,
                columns: params.columns(),
            });
        }
        Ok(ErasurePattern { erased })
    }

    /// Erased columns in increasing order.
    pub fn columns(&self) -> Vec<usize> {
        self.erased.iter().copied().collect()
    }

    pub fn contains(&self, col: usize) -> bool {
        self.erased.contains(&col)
    }

    pub fn len(&self) -> usize {
        self.erased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }
}
