//! Column-grid rendering of a colouring as a binary PPM (P6).
//!
//! Integer `n` sits in column `(n-1) / h`, row `(n-1) % h` counted upward
//! from the bottom, so positions climb each column and then move right.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::triples::{enumerate_triples, UpperBound};

pub const GREY: [u8; 3] = [128, 128, 128];
pub const BLACK: [u8; 3] = [0, 0, 0];
pub const WHITE: [u8; 3] = [255, 255, 255];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pixmap {
    pub width: usize,
    pub height: usize,
    /// Row-major RGB, top row first.
    pub data: Vec<u8>,
}

impl Pixmap {
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let o = 3 * (y * self.width + x);
        [self.data[o], self.data[o + 1], self.data[o + 2]]
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_ppm()).map_err(|e| Error::io(path, e))
    }
}

/// Pixel coordinates `(x, y)` of integer `n` (y = 0 is the top row).
pub fn cell_position(n: u32, column_height: usize) -> (usize, usize) {
    let i = (n - 1) as usize;
    (i / column_height, column_height - 1 - i % column_height)
}

/// Default column height, `ceil(sqrt(bound))`.
pub fn default_height(bound: UpperBound) -> usize {
    let n = u64::from(bound.get());
    let r = n.isqrt();
    (if r * r == n { r } else { r + 1 }) as usize
}

/// Integers occurring in some triple with all entries `<= bound`.
pub fn in_scope(bound: UpperBound) -> BTreeSet<u32> {
    enumerate_triples(bound)
        .iter()
        .flat_map(|t| t.as_array())
        .collect()
}

/// Renders one pixel per integer `1..=bound`. Out-of-scope or uncoloured
/// integers and padding cells are white.
pub fn render(bound: UpperBound, coloring: &Coloring, column_height: usize) -> Pixmap {
    let h = column_height.max(1);
    let n = bound.get() as usize;
    let width = n.div_ceil(h);
    let mut data = WHITE.repeat(width * h);
    let scope = in_scope(bound);
    for k in 1..=bound.get() {
        if !scope.contains(&k) {
            continue;
        }
        let colour = match coloring.get(k) {
            Some(true) => BLACK,
            Some(false) => GREY,
            None => continue,
        };
        let (x, y) = cell_position(k, h);
        let o = 3 * (y * width + x);
        data[o..o + 3].copy_from_slice(&colour);
    }
    Pixmap { width, height: h, data }
}
