//! Splitting one matrix axis into contiguous blocks.

use std::fmt;
use std::str::FromStr;

use crate::error::{CurError, Result};

/// Matrix axis along which indices are selected or blocks are cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Rows = 0,
    Cols = 1,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Rows => "rows",
            Axis::Cols => "cols",
        })
    }
}

impl FromStr for Axis {
    type Err = CurError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rows" | "row" | "0" => Ok(Axis::Rows),
            "cols" | "col" | "columns" | "1" => Ok(Axis::Cols),
            other => Err(CurError::InvalidArgument(format!("unknown axis `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub start: usize,
    pub len: usize,
}

impl Block {
    #[inline]
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

/// `b` contiguous, ordered, non-empty blocks covering `[0, dim_size)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    axis: Axis,
    dim_size: usize,
    blocks: Vec<Block>,
}

/// Splits `dim_size` indices into `b` blocks; the first `dim_size % b`
/// blocks get one extra index.
pub fn partition(dim_size: usize, b: usize, axis: Axis) -> Result<BlockPartition> {
    if b == 0 || b > dim_size {
        return Err(CurError::InvalidPartition {
            dim_size,
            blocks: b,
        });
    }
    let base = dim_size / b;
    let extra = dim_size % b;
    let mut blocks = Vec::with_capacity(b);
    let mut start = 0;
    for k in 0..b {
        let len = base + usize::from(k < extra);
        blocks.push(Block { start, len });
        start += len;
    }
    debug_assert_eq!(start, dim_size);
    Ok(BlockPartition {
        axis,
        dim_size,
        blocks,
    })
}

impl BlockPartition {
    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn dim_size(&self) -> usize {
        self.dim_size
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len).collect()
    }

    /// Maps a global index to `(block, offset within block)`.
    pub fn locate(&self, global: usize) -> Option<(usize, usize)> {
        if global >= self.dim_size {
            return None;
        }
        let k = self.blocks.partition_point(|b| b.end() <= global);
        Some((k, global - self.blocks[k].start))
    }
}
