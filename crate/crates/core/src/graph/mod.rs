//! Multigraphs over a small terminal set.
//!
//! A [`Multigraph`] stores one nonnegative multiplicity per unordered pair
//! of terminals, so the reciprocity of shared strings is structural. Terminal
//! indices are zero-based in the API; text formats and reports are one-based.

mod file;
mod sets;

pub use file::{parse_graph_file, write_graph_file, GraphFile};
pub use sets::{enumerate_constraint_sets, enumerate_partitions, Partition, TerminalSet};

use crate::error::{Error, Result};

pub type Terminal = usize;

/// Hard limit imposed by the bitset representation of [`TerminalSet`].
pub const MAX_TERMINALS: usize = 32;

/// Number of unordered pairs among `m` terminals.
pub fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multigraph {
    m: usize,
    mult: Vec<u64>,
}

impl std::fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .map(|(i, j, e)| format!("{}-{}:{}", i + 1, j + 1, e))
            .collect();
        write!(f, "Multigraph(m={}, [{}])", self.m, edges.join(" "))
    }
}

impl Multigraph {
    /// Edgeless multigraph on `m` terminals.
    pub fn empty(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::TooFewTerminals(m));
        }
        if m > MAX_TERMINALS {
            return Err(Error::TooManyTerminals { m, cap: MAX_TERMINALS });
        }
        Ok(Self { m, mult: vec![0; pair_count(m)] })
    }

    /// Builds a multigraph from zero-based `(i, j, multiplicity)` entries.
    /// Repeated pairs accumulate.
    pub fn from_edges(m: usize, edges: &[(Terminal, Terminal, i64)]) -> Result<Self> {
        let mut g = Self::empty(m)?;
        for &(i, j, e) in edges {
            for index in [i, j] {
                if index >= m {
                    return Err(Error::VertexOutOfRange { index, m });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if e < 0 {
                return Err(Error::NegativeMultiplicity { i, j, multiplicity: e });
            }
            let p = g.pair_index(i, j);
            g.mult[p] += e as u64;
        }
        Ok(g)
    }

    /// Builds a multigraph from multiplicities listed in canonical pair order.
    pub fn from_multiplicities(m: usize, mult: Vec<u64>) -> Result<Self> {
        let g = Self::empty(m)?;
        if mult.len() != g.mult.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} multiplicities for {} pairs",
                mult.len(),
                g.mult.len()
            )));
        }
        Ok(Self { m, mult })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terminals(&self) -> TerminalSet {
        TerminalSet::full(self.m)
    }

    /// Canonical index of the unordered pair `{i, j}`: pairs are ordered
    /// `(0,1), (0,2), …, (0,m-1), (1,2), …`.
    pub fn pair_index(&self, i: Terminal, j: Terminal) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(i != j && j < self.m);
        i * (2 * self.m - i - 1) / 2 + (j - i - 1)
    }

    pub fn pair_at(&self, index: usize) -> (Terminal, Terminal) {
        let mut rest = index;
        for i in 0..self.m {
            let row = self.m - i - 1;
            if rest < row {
                return (i, i + 1 + rest);
            }
            rest -= row;
        }
        panic!("pair index {index} out of range");
    }

    pub fn num_pairs(&self) -> usize {
        self.mult.len()
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.mult
    }

    pub fn multiplicity(&self, i: Terminal, j: Terminal) -> u64 {
        if i == j {
            0
        } else {
            self.mult[self.pair_index(i, j)]
        }
    }

    pub fn set_multiplicity(&mut self, i: Terminal, j: Terminal, e: u64) {
        let p = self.pair_index(i, j);
        self.mult[p] = e;
    }

    /// All pairs in canonical order, including those with zero multiplicity.
    pub fn pairs(&self) -> impl Iterator<Item = (Terminal, Terminal, u64)> + '_ {
        (0..self.mult.len()).map(move |p| {
            let (i, j) = self.pair_at(p);
            (i, j, self.mult[p])
        })
    }

    /// Pairs with positive multiplicity.
    pub fn edges(&self) -> impl Iterator<Item = (Terminal, Terminal, u64)> + '_ {
        self.pairs().filter(|&(_, _, e)| e > 0)
    }

    /// Indices of pairs with positive multiplicity.
    pub fn support(&self) -> Vec<usize> {
        (0..self.mult.len()).filter(|&p| self.mult[p] > 0).collect()
    }

    /// |E|, counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.mult.iter().sum()
    }

    pub fn degree(&self, i: Terminal) -> Result<u64> {
        if i >= self.m {
            return Err(Error::VertexOutOfRange { index: i, m: self.m });
        }
        Ok((0..self.m).map(|j| self.multiplicity(i, j)).sum())
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut d = vec![0; self.m];
        for (i, j, e) in self.pairs() {
            d[i] += e;
            d[j] += e;
        }
        d
    }

    /// e_G(B): edges with both endpoints in `b`.
    pub fn internal_edges(&self, b: TerminalSet) -> u64 {
        self.pairs()
            .filter(|&(i, j, _)| b.contains(i) && b.contains(j))
            .map(|(_, _, e)| e)
            .sum()
    }

    /// Edges whose endpoints lie in different atoms of `partition`.
    pub fn crossing_count(&self, partition: &Partition) -> u64 {
        let label = partition.labels(self.m);
        self.pairs()
            .filter(|&(i, j, _)| label[i] != label[j])
            .map(|(_, _, e)| e)
            .sum()
    }

    /// Edges crossing the cut `(c, c^c)`.
    pub fn cut_count(&self, c: TerminalSet) -> u64 {
        self.pairs()
            .filter(|&(i, j, _)| c.contains(i) != c.contains(j))
            .map(|(_, _, e)| e)
            .sum()
    }

    /// Connected component of `start` in the support graph.
    pub fn component_of(&self, start: Terminal) -> TerminalSet {
        let mut seen = TerminalSet::singleton(start);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..self.m {
                if !seen.contains(j) && self.multiplicity(i, j) > 0 {
                    seen.insert(j);
                    stack.push(j);
                }
            }
        }
        seen
    }

    /// Whether the support graph on all terminals is connected.
    pub fn is_connected(&self) -> bool {
        self.component_of(0).len() == self.m
    }

    /// Whether every member of `set` lies in a single support component.
    pub fn connects(&self, set: TerminalSet) -> bool {
        match set.iter().next() {
            None => true,
            Some(first) => self.component_of(first).is_superset_of(set),
        }
    }

    /// Every degree even.
    pub fn is_eulerian(&self) -> bool {
        self.degrees().iter().all(|d| d % 2 == 0)
    }

    /// G^(n): every multiplicity multiplied by `n`.
    pub fn blow_up(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroBlowUp);
        }
        Ok(Self { m: self.m, mult: self.mult.iter().map(|e| e * n).collect() })
    }

    /// G^{uv}: removes one `(u, h)` edge and one `(v, h)` edge and adds a
    /// direct `(u, v)` edge.
    pub fn split_off(&self, u: Terminal, v: Terminal, h: Terminal) -> Result<Self> {
        for index in [u, v, h] {
            if index >= self.m {
                return Err(Error::VertexOutOfRange { index, m: self.m });
            }
        }
        if u == v || u == h || v == h {
            return Err(Error::Precondition(format!(
                "split-off needs distinct terminals, got ({}, {}, {})",
                u + 1,
                v + 1,
                h + 1
            )));
        }
        for x in [u, v] {
            if self.multiplicity(x, h) == 0 {
                return Err(Error::InsufficientMultiplicity { i: x.min(h), j: x.max(h) });
            }
        }
        let mut g = self.clone();
        let (uh, vh, uv) = (g.pair_index(u, h), g.pair_index(v, h), g.pair_index(u, v));
        g.mult[uh] -= 1;
        g.mult[vh] -= 1;
        g.mult[uv] += 1;
        Ok(g)
    }

    /// The sub-multigraph induced on terminals `0..k`.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k > self.m {
            return Err(Error::VertexOutOfRange { index: k, m: self.m });
        }
        let mut g = Self::empty(k)?;
        for (i, j, e) in self.pairs() {
            if j < k {
                g.set_multiplicity(i, j, e);
            }
        }
        Ok(g)
    }
}
