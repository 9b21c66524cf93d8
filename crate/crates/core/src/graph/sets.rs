use std::fmt;

use crate::error::{Error, Result};

use super::Terminal;

/// A set of terminals, stored as a bitmask over zero-based indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TerminalSet(u32);

impl TerminalSet {
    pub const EMPTY: Self = Self(0);

    pub fn from_bits(bits: u32) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// `{0, …, m-1}`.
    pub fn full(m: usize) -> Self {
        if m >= 32 {
            Self(u32::MAX)
        } else {
            Self((1u32 << m) - 1)
        }
    }

    pub fn singleton(i: Terminal) -> Self {
        Self(1 << i)
    }

    pub fn contains(self, i: Terminal) -> bool {
        i < 32 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: Terminal) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: Terminal) {
        self.0 &= !(1 << i);
    }

    pub fn with(self, i: Terminal) -> Self {
        Self(self.0 | 1 << i)
    }

    pub fn without(self, i: Terminal) -> Self {
        Self(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn complement(self, m: usize) -> Self {
        Self(!self.0 & Self::full(m).0)
    }

    pub fn is_superset_of(self, other: Self) -> bool {
        other.0 & !self.0 == 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        other.is_superset_of(self)
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    /// Largest member plus one, or zero for the empty set.
    pub fn bound(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = Terminal> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn members(self) -> Vec<Terminal> {
        self.iter().collect()
    }
}

impl FromIterator<Terminal> for TerminalSet {
    fn from_iter<I: IntoIterator<Item = Terminal>>(iter: I) -> Self {
        let mut s = Self::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl<const N: usize> From<[Terminal; N]> for TerminalSet {
    fn from(members: [Terminal; N]) -> Self {
        members.into_iter().collect()
    }
}

/// One-based, e.g. `{1,3}`.
impl fmt::Display for TerminalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for TerminalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A partition of `{0, …, m-1}` into nonempty disjoint atoms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    atoms: Vec<TerminalSet>,
}

impl Partition {
    pub fn new(m: usize, atoms: Vec<TerminalSet>) -> Result<Self> {
        let mut seen = TerminalSet::EMPTY;
        for atom in &atoms {
            if atom.is_empty() {
                return Err(Error::InvalidPartition("empty atom".into()));
            }
            if atom.intersects(seen) {
                return Err(Error::InvalidPartition(format!("atom {atom} overlaps another")));
            }
            seen = seen.union(*atom);
        }
        if seen != TerminalSet::full(m) {
            return Err(Error::InvalidPartition(format!(
                "atoms cover {seen}, expected all {m} terminals"
            )));
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[TerminalSet] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Atom index of every terminal.
    pub fn labels(&self, m: usize) -> Vec<usize> {
        let mut label = vec![usize::MAX; m];
        for (k, atom) in self.atoms.iter().enumerate() {
            for i in atom.iter() {
                label[i] = k;
            }
        }
        label
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// Every partition of `{0, …, m-1}`, ordered by number of atoms and then by
/// restricted growth string.
pub fn enumerate_partitions(m: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let mut rgs = vec![0usize; m];
    loop {
        let blocks = rgs.iter().max().map_or(0, |b| b + 1);
        let mut atoms = vec![TerminalSet::EMPTY; blocks];
        for (i, &b) in rgs.iter().enumerate() {
            atoms[b].insert(i);
        }
        out.push(Partition { atoms });

        // Next restricted growth string: bump the rightmost position that can
        // grow, reset everything after it to zero.
        let mut k = m - 1;
        loop {
            if k == 0 {
                out.sort_by_key(Partition::len);
                return out;
            }
            let prefix_max = rgs[..k].iter().copied().max().unwrap_or(0);
            if rgs[k] <= prefix_max {
                rgs[k] += 1;
                for x in rgs[k + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
            k -= 1;
        }
    }
}

/// Nonempty proper subsets `B` of `{0, …, m-1}` with `B ⊉ A`, ordered by size
/// and then lexicographically by member list.
pub fn enumerate_constraint_sets(m: usize, a: TerminalSet) -> Vec<TerminalSet> {
    let full = TerminalSet::full(m);
    let mut sets: Vec<TerminalSet> = (1..full.bits())
        .map(TerminalSet::from_bits)
        .filter(|b| !b.is_superset_of(a))
        .collect();
    sets.sort_by_cached_key(|b| (b.len(), b.members()));
    sets
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = TerminalSet::from([0, 2]);
        assert_eq!(a.len(), 2);
        assert!(a.contains(2) && !a.contains(1));
        assert_eq!(a.complement(4), TerminalSet::from([1, 3]));
        assert!(TerminalSet::full(3).is_superset_of(a));
        assert_eq!(a.to_string(), "{1,3}");
        assert_eq!(a.bound(), 3);
        assert_eq!(a.members(), vec![0, 2]);
    }

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877];
        for (m, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(enumerate_partitions(m).len(), b, "m = {m}");
        }
    }

    #[test]
    fn partitions_are_valid_and_distinct() {
        let parts = enumerate_partitions(5);
        let mut seen = std::collections::HashSet::new();
        for p in &parts {
            assert!(Partition::new(5, p.atoms().to_vec()).is_ok());
            let mut key: Vec<u32> = p.atoms().iter().map(|a| a.bits()).collect();
            key.sort();
            assert!(seen.insert(key));
        }
        assert!(parts.windows(2).all(|w| w[0].len() <= w[1].len()));
    }

    #[test]
    fn invalid_partitions() {
        assert!(Partition::new(3, vec![[0, 1].into()]).is_err());
        assert!(Partition::new(3, vec![[0, 1].into(), [1, 2].into()]).is_err());
        assert!(Partition::new(3, vec![[0, 1, 2].into(), TerminalSet::EMPTY]).is_err());
    }

    #[test]
    fn constraint_set_examples() {
        let all = enumerate_constraint_sets(3, TerminalSet::full(3));
        assert_eq!(all.len(), 6);
        let pair = enumerate_constraint_sets(3, [0, 1].into());
        let expected: Vec<TerminalSet> =
            vec![[0].into(), [1].into(), [2].into(), [0, 2].into(), [1, 2].into()];
        assert_eq!(pair, expected);
        let two = enumerate_constraint_sets(2, [0, 1].into());
        assert_eq!(two, vec![TerminalSet::from([0]), TerminalSet::from([1])]);
    }
}
