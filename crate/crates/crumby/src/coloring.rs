//! Red/blue vertex colorings, possibly partial, with a stable JSON encoding
//! `{"n": <int>, "colors": "<one char per vertex: R, B, or . for unset>"}`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Blue => 'B',
        }
    }
}

/// Vertex coloring with one optional slot per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    slots: Vec<Option<Color>>,
}

impl Coloring {
    pub fn uncolored(n: usize) -> Self {
        Coloring {
            slots: vec![None; n],
        }
    }

    /// Parses strings such as `"RRBB"`; `.` leaves a vertex unset.
    pub fn from_str_colors(s: &str) -> Result<Self, String> {
        let mut slots = Vec::with_capacity(s.len());
        for (i, ch) in s.chars().enumerate() {
            slots.push(match ch {
                'R' => Some(Color::Red),
                'B' => Some(Color::Blue),
                '.' => None,
                other => return Err(format!("bad color char {other:?} at position {i}")),
            });
        }
        Ok(Coloring { slots })
    }

    pub fn n(&self) -> usize {
        self.slots.len()
    }

    pub fn get(&self, v: usize) -> Option<Color> {
        self.slots[v]
    }

    pub fn set(&mut self, v: usize, c: Color) {
        self.slots[v] = Some(c);
    }

    pub fn unset(&mut self, v: usize) {
        self.slots[v] = None;
    }

    pub fn is_total(&self) -> bool {
        self.slots.iter().all(Option::is_some)
    }

    pub fn colored_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn vertices_with(&self, c: Color) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.get(v) == Some(c)).collect()
    }

    pub fn to_color_string(&self) -> String {
        self.slots
            .iter()
            .map(|s| match s {
                Some(c) => c.as_char(),
                None => '.',
            })
            .collect()
    }

    /// Subgraph induced by one color class, with its vertex relabeling.
    /// Returns the induced graph and the original ids of its vertices.
    pub fn color_class_subgraph(&self, g: &Graph, c: Color) -> (Graph, Vec<usize>) {
        let keep = self.vertices_with(c);
        let mut index = vec![usize::MAX; g.n()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut sub = Graph::empty(keep.len());
        for &v in &keep {
            for &w in g.neighbors(v) {
                if v < w && index[w] != usize::MAX {
                    sub.add_edge(index[v], index[w]).unwrap();
                }
            }
        }
        (sub, keep)
    }
}

impl Serialize for Coloring {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            n: usize,
            colors: &'a str,
        }
        Repr {
            n: self.n(),
            colors: &self.to_color_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            colors: String,
        }
        let repr = Repr::deserialize(deserializer)?;
        let coloring = Coloring::from_str_colors(&repr.colors).map_err(D::Error::custom)?;
        if coloring.n() != repr.n {
            return Err(D::Error::custom(format!(
                "n = {} does not match colors length {}",
                repr.n,
                coloring.n()
            )));
        }
        Ok(coloring)
    }
}
