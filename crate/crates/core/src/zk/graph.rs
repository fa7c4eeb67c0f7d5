//! Small undirected graphs, vertex permutations, and graph-isomorphism instances.
//!
//! Text form of a graph: the vertex count on the first line, then one `i j`
//! line per edge. An instance file holds two graph blocks separated by a
//! blank line, optionally followed by a witness block: one line of vertex
//! images.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

/// Largest vertex count accepted anywhere in this module.
pub const MAX_VERTICES: usize = 64;

/// Largest vertex count for which brute-force isomorphism search is allowed.
pub const MAX_SEARCH_VERTICES: usize = 9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("{0} vertices exceeds the limit of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) out of range")]
    OutOfRange(usize, usize),
    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("witness does not map G0 onto G1")]
    InvalidWitness,
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("no non-isomorphic partner found after {0} attempts")]
    NoPartner(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(v: usize) -> Self {
        Self((0..v).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, GraphError> {
        let v = images.len();
        let mut seen = vec![false; v];
        for &i in &images {
            if i >= v || std::mem::replace(&mut seen[i], true) {
                return Err(GraphError::NotPermutation(v));
            }
        }
        Ok(Self(images))
    }

    pub fn random<R: Rng + ?Sized>(v: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..v).collect();
        images.shuffle(rng);
        Self(images)
    }

    /// Every permutation of `0..v` in lexicographic order of image lists.
    pub fn all(v: usize) -> Vec<Self> {
        fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation(prefix.clone()));
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i);
                    extend(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        extend(&mut Vec::with_capacity(v), &mut vec![false; v], &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.0)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// An undirected simple graph on vertices `0..v`, edges kept as sorted `(i, j)`
/// pairs with `i < j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    v: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Normalizes edge orientation and drops duplicates.
    pub fn new(v: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        if v > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(v));
        }
        let mut out = Vec::new();
        for (i, j) in edges {
            if i >= v || j >= v {
                return Err(GraphError::OutOfRange(i, j));
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            out.push((i.min(j), i.max(j)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(Self { v, edges: out })
    }

    /// A uniformly random graph with exactly `m` edges.
    pub fn random<R: Rng + ?Sized>(v: usize, m: usize, rng: &mut R) -> Result<Self, GraphError> {
        let all: Vec<(usize, usize)> = (0..v).flat_map(|i| (i + 1..v).map(move |j| (i, j))).collect();
        let m = m.min(all.len());
        Self::new(v, all.choose_multiple(rng, m).copied())
    }

    pub fn vertices(&self) -> usize {
        self.v
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i.min(j), i.max(j))).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.v];
        for &(i, j) in &self.edges {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }

    /// The graph with every vertex `i` renamed to `pi(i)`.
    pub fn permute(&self, pi: &Permutation) -> Graph {
        assert_eq!(pi.len(), self.v, "permutation size must match the vertex count");
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (pi.apply(i), pi.apply(j));
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        Graph { v: self.v, edges }
    }

    /// Brute force over all vertex permutations.
    pub fn find_isomorphism(&self, other: &Graph) -> Option<Permutation> {
        assert!(self.v <= MAX_SEARCH_VERTICES, "isomorphism search is exhaustive");
        if self.v != other.v || self.edges.len() != other.edges.len() {
            return None;
        }
        let mut d0 = self.degrees();
        let mut d1 = other.degrees();
        d0.sort_unstable();
        d1.sort_unstable();
        if d0 != d1 {
            return None;
        }
        Permutation::all(self.v).into_iter().find(|pi| self.permute(pi) == *other)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.v);
        for (i, j) in &self.edges {
            s.push_str(&format!("{i} {j}\n"));
        }
        s
    }

    fn parse_block(lines: &[(usize, &str)]) -> Result<Graph, GraphError> {
        let parse_err = |line: usize, reason: &str| GraphError::Parse { line, reason: reason.to_string() };
        let (first_line, first) = lines.first().ok_or_else(|| parse_err(0, "empty graph block"))?;
        let v: usize = first.trim().parse().map_err(|_| parse_err(*first_line, "bad vertex count"))?;
        let mut edges = Vec::new();
        for &(n, line) in &lines[1..] {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(i)), Some(Ok(j)), None) => edges.push((i, j)),
                _ => return Err(parse_err(n, "expected `i j`")),
            }
        }
        Graph::new(v, edges)
    }

    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let lines: Vec<(usize, &str)> =
            text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty()).collect();
        Self::parse_block(&lines)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}, {:?})", self.v, self.edges)
    }
}

/// The instance `x = (G0, G1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GiInstance {
    pub g0: Graph,
    pub g1: Graph,
}

/// A permutation `w` with `w(G0) = G1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GiWitness(pub Permutation);

impl GiInstance {
    pub fn new(g0: Graph, g1: Graph) -> Result<Self, GraphError> {
        if g0.vertices() != g1.vertices() {
            return Err(GraphError::Parse { line: 0, reason: "graphs differ in vertex count".into() });
        }
        Ok(Self { g0, g1 })
    }

    pub fn vertices(&self) -> usize {
        self.g0.vertices()
    }

    pub fn graph(&self, c: bool) -> &Graph {
        if c {
            &self.g1
        } else {
            &self.g0
        }
    }

    pub fn check(&self, w: &GiWitness) -> bool {
        w.0.len() == self.vertices() && self.g0.permute(&w.0) == self.g1
    }

    /// A random graph with `m` edges and a random relabelling of it.
    pub fn random_isomorphic<R: Rng + ?Sized>(v: usize, m: usize, rng: &mut R) -> Result<(Self, GiWitness), GraphError> {
        let g0 = Graph::random(v, m, rng)?;
        let w = Permutation::random(v, rng);
        let g1 = g0.permute(&w);
        Ok((Self { g0, g1 }, GiWitness(w)))
    }

    /// Two graphs with the same degree sequence that are not isomorphic.
    /// The partner is produced by random degree-preserving edge swaps.
    pub fn random_non_isomorphic<R: Rng + ?Sized>(v: usize, m: usize, rng: &mut R) -> Result<Self, GraphError> {
        const ATTEMPTS: usize = 200;
        for _ in 0..ATTEMPTS {
            let g0 = Graph::random(v, m, rng)?;
            let mut edges = g0.edges.clone();
            for _ in 0..4 * m.max(1) {
                if edges.len() < 2 {
                    break;
                }
                let x = rng.gen_range(0..edges.len());
                let y = rng.gen_range(0..edges.len());
                let (a, b) = edges[x];
                let (c, d) = if rng.gen() { edges[y] } else { (edges[y].1, edges[y].0) };
                let current = Graph::new(v, edges.iter().copied())?;
                if x == y || a == d || c == b || current.has_edge(a, d) || current.has_edge(c, b) {
                    continue;
                }
                edges[x] = (a, d);
                edges[y] = (c, b);
            }
            let g1 = Graph::new(v, edges)?;
            if g0.find_isomorphism(&g1).is_none() {
                let w = Permutation::random(v, rng);
                return Ok(Self { g0, g1: g1.permute(&w) });
            }
        }
        Err(GraphError::NoPartner(ATTEMPTS))
    }

    pub fn to_text(&self, witness: Option<&GiWitness>) -> String {
        let mut s = format!("{}\n{}", self.g0.to_text(), self.g1.to_text());
        if let Some(w) = witness {
            s.push_str(&format!("\n{}\n", w.0));
        }
        s
    }

    /// Parses an instance file; the witness block is optional.
    pub fn parse(text: &str) -> Result<(Self, Option<GiWitness>), GraphError> {
        let mut blocks: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                if !blocks.last().unwrap().is_empty() {
                    blocks.push(Vec::new());
                }
            } else {
                blocks.last_mut().unwrap().push((i + 1, line));
            }
        }
        if blocks.last().is_some_and(|b| b.is_empty()) {
            blocks.pop();
        }
        if blocks.len() < 2 || blocks.len() > 3 {
            return Err(GraphError::Parse { line: 0, reason: format!("expected 2 or 3 blocks, found {}", blocks.len()) });
        }
        let x = Self::new(Graph::parse_block(&blocks[0])?, Graph::parse_block(&blocks[1])?)?;
        let witness = match blocks.get(2) {
            None => None,
            Some(block) => {
                let (line, text) = block[0];
                let images = text
                    .split_whitespace()
                    .map(str::parse::<usize>)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| GraphError::Parse { line, reason: "bad witness".into() })?;
                let w = GiWitness(Permutation::from_images(images)?);
                if !x.check(&w) {
                    return Err(GraphError::InvalidWitness);
                }
                Some(w)
            }
        };
        Ok((x, witness))
    }
}
