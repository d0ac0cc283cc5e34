//! Pythagorean triple enumeration.
//!
//! Triples are generated with Dickson's method: for every pair `s <= t`
//! with `2st` a perfect square `r^2`, the numbers `(r+s, r+t, r+s+t)` form a
//! Pythagorean triple, and every triple arises this way.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ascending Pythagorean triple `a < b < c`, `a^2 + b^2 = c^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u64; 3]", into = "[u32; 3]")]
pub struct Triple {
    a: u32,
    b: u32,
    c: u32,
}

impl Triple {
    pub fn new(a: u64, b: u64, c: u64) -> Result<Self> {
        let ok = a > 0
            && a < b
            && b < c
            && c <= u64::from(u32::MAX)
            && a.checked_mul(a)
                .zip(b.checked_mul(b))
                .and_then(|(x, y)| x.checked_add(y))
                == c.checked_mul(c);
        if !ok {
            return Err(Error::NotATriple(a, b, c));
        }
        Ok(Triple {
            a: a as u32,
            b: b as u32,
            c: c as u32,
        })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    /// The hypotenuse, which is also the maximum.
    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn as_array(&self) -> [u32; 3] {
        [self.a, self.b, self.c]
    }

    pub fn gcd(&self) -> u32 {
        gcd(gcd(self.a, self.b), self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd() == 1
    }
}

impl TryFrom<[u64; 3]> for Triple {
    type Error = Error;

    fn try_from([a, b, c]: [u64; 3]) -> Result<Self> {
        Triple::new(a, b, c)
    }
}

impl From<Triple> for [u32; 3] {
    fn from(t: Triple) -> Self {
        t.as_array()
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Inclusive cap on the hypotenuse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UpperBound(u32);

impl UpperBound {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::TripleFile("upper bound must be at least 1".into()));
        }
        Ok(UpperBound(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for UpperBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn gcd(mut x: u32, mut y: u32) -> u32 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// All Pythagorean triples with `c <= bound`, sorted lexicographically.
pub fn enumerate_triples(bound: UpperBound) -> Vec<Triple> {
    let n = u64::from(bound.get());
    let mut found = BTreeSet::new();
    let mut s = 1u64;
    // The smallest hypotenuse reachable from s is at t = s.
    while 2 * s + (2 * s * s).isqrt() <= n {
        let mut t = s;
        loop {
            let two_st = 2 * s * t;
            let r = two_st.isqrt();
            // z only grows with t, so the floor bound is a valid cutoff.
            if r + s + t > n {
                break;
            }
            if r * r == two_st {
                let (x, y, z) = (r + s, r + t, r + s + t);
                found.insert(Triple::new(x, y, z).expect("Dickson parameters yield a triple"));
            }
            t += 1;
        }
        s += 1;
    }
    found.into_iter().collect()
}

/// The primitive (`gcd = 1`) members of [`enumerate_triples`].
pub fn enumerate_primitive(bound: UpperBound) -> Vec<Triple> {
    enumerate_triples(bound)
        .into_iter()
        .filter(Triple::is_primitive)
        .collect()
}

/// Writes a triple list as a JSON array of 3-element arrays.
pub fn save_triples(triples: &[Triple], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string(triples)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_triples(path: impl AsRef<Path>) -> Result<Vec<Triple>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_triples(&text)
}

pub fn parse_triples(text: &str) -> Result<Vec<Triple>> {
    serde_json::from_str(text).map_err(|e| Error::TripleFile(e.to_string()))
}
