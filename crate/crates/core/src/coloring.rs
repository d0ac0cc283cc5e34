//! Partial 2-colourings of positive integers.
//!
//! `true` is drawn black and `false` grey; integers absent from the map are
//! uncoloured (white).

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Edge;
use crate::Vertex;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring(BTreeMap<Vertex, bool>);

impl Coloring {
    pub fn new() -> Self {
        Coloring::default()
    }

    pub fn get(&self, v: Vertex) -> Option<bool> {
        self.0.get(&v).copied()
    }

    pub fn set(&mut self, v: Vertex, colour: bool) {
        self.0.insert(v, colour);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, bool)> + '_ {
        self.0.iter().map(|(&v, &c)| (v, c))
    }

    /// All three vertices coloured and not all equal.
    pub fn is_bichromatic(&self, e: &Edge) -> bool {
        let [x, y, z] = e.vertices();
        match (self.get(x), self.get(y), self.get(z)) {
            (Some(a), Some(b), Some(c)) => !(a == b && b == c),
            _ => false,
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, serde_json::to_string(self)?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

impl FromIterator<(Vertex, bool)> for Coloring {
    fn from_iter<I: IntoIterator<Item = (Vertex, bool)>>(iter: I) -> Self {
        Coloring(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bichromatic_needs_all_coloured() {
        let e = Edge::new(3, 4, 5).unwrap();
        let mut c = Coloring::from_iter([(3, true), (4, false)]);
        assert!(!c.is_bichromatic(&e));
        c.set(5, true);
        assert!(c.is_bichromatic(&e));
        c.set(4, true);
        assert!(!c.is_bichromatic(&e));
    }

    #[test]
    fn json_shape() {
        let c = Coloring::from_iter([(3, true), (10, false)]);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"3":true,"10":false}"#);
        assert_eq!(serde_json::from_str::<Coloring>(&text).unwrap(), c);
    }
}
