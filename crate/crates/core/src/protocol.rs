//! Linear noninteractive communication over pairwise-shared bits.
//!
//! The global source vector holds every shared bit once: pair `(i, j)`
//! contributes `n·e_ij` coordinates, pairs in canonical order and copies in
//! increasing order. Terminal `i` observes the coordinates of its incident
//! pairs, in the same order, and broadcasts `L_i` applied to them.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::graph::{Multigraph, Terminal, TerminalSet};
use crate::packing::{mu, IntegerPacking, SteinerTree};
use crate::rational::{int, ratio, Rational};

/// Default bound on the number of source bits the exhaustive verifier
/// will enumerate.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 24;
/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5eed_2008;

/// The default slack added to each omniscience rate, `1/10`.
pub fn default_epsilon() -> Rational {
    ratio(1, 10)
}

/// Where every shared bit lives in the global source vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceLayout {
    m: usize,
    n: u64,
    pairs: Vec<(Terminal, Terminal)>,
    lens: Vec<usize>,
    offsets: Vec<usize>,
}

impl SourceLayout {
    /// Layout of `G^(n)`.
    pub fn new(g: &Multigraph, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroBlowUp);
        }
        let lens = g.multiplicities().iter().map(|&e| (e * n) as usize).collect();
        Self::from_lengths(g.m(), n, lens)
    }

    /// Layout from per-pair bit counts in canonical pair order.
    pub fn from_lengths(m: usize, n: u64, lens: Vec<usize>) -> Result<Self> {
        let g = Multigraph::empty(m)?;
        if lens.len() != g.num_pairs() {
            return Err(Error::DimensionMismatch(format!(
                "{} pair lengths for {} pairs",
                lens.len(),
                g.num_pairs()
            )));
        }
        let pairs = (0..g.num_pairs()).map(|p| g.pair_at(p)).collect();
        let mut offsets = Vec::with_capacity(lens.len());
        let mut total = 0;
        for &l in &lens {
            offsets.push(total);
            total += l;
        }
        Ok(Self { m, n, pairs, lens, offsets })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Total number of shared bits.
    pub fn total(&self) -> usize {
        self.lens.iter().sum()
    }

    pub fn pair_lengths(&self) -> &[usize] {
        &self.lens
    }

    pub fn pair(&self, p: usize) -> (Terminal, Terminal) {
        self.pairs[p]
    }

    /// Global coordinate of copy `copy` of pair `p`.
    pub fn index(&self, p: usize, copy: usize) -> usize {
        assert!(copy < self.lens[p], "copy {copy} of pair {p} out of range");
        self.offsets[p] + copy
    }

    /// The pair and copy behind a global coordinate.
    pub fn locate(&self, col: usize) -> (usize, usize) {
        assert!(col < self.total(), "coordinate {col} out of range");
        // The last pair starting at or before `col` is never empty.
        let p = self.offsets.partition_point(|&o| o <= col) - 1;
        (p, col - self.offsets[p])
    }

    /// Global coordinates observed by terminal `i`, in observation order.
    pub fn observed(&self, i: Terminal) -> Vec<usize> {
        let mut cols = Vec::new();
        for (p, &(a, b)) in self.pairs.iter().enumerate() {
            if a == i || b == i {
                cols.extend(self.offsets[p]..self.offsets[p] + self.lens[p]);
            }
        }
        cols
    }

    /// Lifts a row over terminal `i`'s observation to the global vector.
    pub fn lift(&self, i: Terminal, local: &BitVector) -> BitVector {
        let cols = self.observed(i);
        assert_eq!(local.len(), cols.len(), "observation length");
        let mut row = BitVector::zeros(self.total());
        for k in local.ones_positions() {
            row.set(cols[k], true);
        }
        row
    }

    /// Rows selecting each bit observed by `i`.
    fn selector(&self, i: Terminal) -> BitMatrix {
        let rows = self.observed(i).into_iter().map(|c| BitVector::unit(self.total(), c)).collect();
        BitMatrix::from_rows(self.total(), rows).expect("unit rows")
    }
}

/// One realisation of every shared bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceRealization {
    pub bits: BitVector,
}

impl SourceRealization {
    pub fn new(layout: &SourceLayout, bits: BitVector) -> Result<Self> {
        if bits.len() != layout.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} bits for a layout of {}",
                bits.len(),
                layout.total()
            )));
        }
        Ok(Self { bits })
    }

    /// Realisation number `value`, coordinate `k` taken from bit `k`.
    pub fn from_index(layout: &SourceLayout, value: u64) -> Self {
        Self { bits: BitVector::from_u64(value, layout.total()) }
    }

    /// Terminal `i`'s observation.
    pub fn observation(&self, layout: &SourceLayout, i: Terminal) -> BitVector {
        self.bits.select(&layout.observed(i))
    }
}

/// Per-terminal broadcast matrices `L_i`, each acting on the terminal's own
/// observation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearScheme {
    layout: SourceLayout,
    matrices: Vec<BitMatrix>,
}

impl LinearScheme {
    pub fn new(layout: SourceLayout, matrices: Vec<BitMatrix>) -> Result<Self> {
        if matrices.len() != layout.m() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for {} terminals",
                matrices.len(),
                layout.m()
            )));
        }
        for (i, l) in matrices.iter().enumerate() {
            let cols = layout.observed(i).len();
            if l.num_cols() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "terminal {} observes {cols} bits but its matrix has {} columns",
                    i + 1,
                    l.num_cols()
                )));
            }
        }
        Ok(Self { layout, matrices })
    }

    /// The scheme in which nobody speaks.
    pub fn silent(layout: SourceLayout) -> Self {
        let matrices = (0..layout.m()).map(|i| BitMatrix::zeros(0, layout.observed(i).len())).collect();
        Self { layout, matrices }
    }

    /// Every terminal broadcasts everything it observes.
    pub fn broadcast_all(layout: SourceLayout) -> Self {
        let matrices = (0..layout.m()).map(|i| BitMatrix::identity(layout.observed(i).len())).collect();
        Self { layout, matrices }
    }

    pub fn layout(&self) -> &SourceLayout {
        &self.layout
    }

    pub fn matrices(&self) -> &[BitMatrix] {
        &self.matrices
    }

    /// `b_i` for every terminal.
    pub fn lengths(&self) -> Vec<usize> {
        self.matrices.iter().map(BitMatrix::num_rows).collect()
    }

    pub fn total_length(&self) -> usize {
        self.lengths().iter().sum()
    }

    /// All broadcasts as one map on the global source vector, terminals in
    /// order.
    pub fn stacked(&self) -> BitMatrix {
        let mut s = BitMatrix::zeros(0, self.layout.total());
        for (i, l) in self.matrices.iter().enumerate() {
            for r in l.rows() {
                s.push_row(self.layout.lift(i, r));
            }
        }
        s
    }

    pub fn transmit(&self, x: &SourceRealization) -> Transcript {
        let parts = self
            .matrices
            .iter()
            .enumerate()
            .map(|(i, l)| l.mul_vec(&x.observation(&self.layout, i)))
            .collect();
        Transcript { parts }
    }
}

/// The public messages, one block per terminal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub parts: Vec<BitVector>,
}

impl Transcript {
    pub fn concatenated(&self) -> BitVector {
        self.parts.iter().fold(BitVector::zeros(0), |acc, p| acc.concat(p))
    }

    pub fn len(&self) -> usize {
        self.parts.iter().map(BitVector::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Linear map from the global source vector to the key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyMap {
    pub matrix: BitMatrix,
}

impl KeyMap {
    pub fn key_len(&self) -> usize {
        self.matrix.num_rows()
    }

    pub fn apply(&self, x: &SourceRealization) -> BitVector {
        self.matrix.mul_vec(&x.bits)
    }
}

/// A parity bit `e_first ⊕ e_second` broadcast by `sender`, the vertex the
/// two edges share. Edges are indices into the tree's edge list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParityCheck {
    pub sender: Terminal,
    pub first: usize,
    pub second: usize,
}

/// `|T| − 1` parity checks whose common null space over edge labelings is
/// `{all-zero, all-one}`.
///
/// Peels a leaf edge at a time and pairs it with another edge at the
/// leaf's neighbour; the checks are returned in the order the tree would be
/// rebuilt, smallest subtree first.
pub fn tree_lc(tree: &SteinerTree) -> Vec<ParityCheck> {
    let edges = tree.edges();
    let mut alive = vec![true; edges.len()];
    let mut checks = Vec::with_capacity(edges.len().saturating_sub(1));
    let incident = |alive: &[bool], v: Terminal| -> Vec<usize> {
        (0..edges.len()).filter(|&k| alive[k] && (edges[k].0 == v || edges[k].1 == v)).collect()
    };
    for _ in 1..edges.len() {
        let leaf = tree
            .vertices()
            .iter()
            .find(|&v| incident(&alive, v).len() == 1)
            .expect("a tree with two or more edges has a leaf");
        let outer = incident(&alive, leaf)[0];
        let (a, b) = edges[outer];
        let hub = if a == leaf { b } else { a };
        let inner = incident(&alive, hub)
            .into_iter()
            .find(|&k| k != outer)
            .expect("the neighbour of a leaf has another edge");
        checks.push(ParityCheck { sender: hub, first: inner, second: outer });
        alive[outer] = false;
    }
    checks.reverse();
    checks
}

/// The checks of [`tree_lc`] as a matrix over the tree's edge labelings.
pub fn tree_lc_matrix(tree: &SteinerTree) -> BitMatrix {
    let rows = tree_lc(tree)
        .into_iter()
        .map(|c| {
            let mut r = BitVector::zeros(tree.len());
            r.set(c.first, true);
            r.set(c.second, true);
            r
        })
        .collect();
    BitMatrix::from_rows(tree.len(), rows).expect("rows have tree length")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingProtocol {
    pub scheme: LinearScheme,
    pub key_map: KeyMap,
    pub packing: IntegerPacking,
    /// The global coordinate holding the key bit of each packed tree.
    pub key_columns: Vec<usize>,
}

/// Tree parities for a maximum packing of `G^(n)` plus raw broadcast of
/// every leftover bit; one key bit per packed tree, taken at the tree's
/// smallest global coordinate.
pub fn packing_protocol(g: &Multigraph, a: TerminalSet, n: u64) -> Result<PackingProtocol> {
    let layout = SourceLayout::new(g, n)?;
    let packing = mu(&g.blow_up(n)?, a)?;
    let total = layout.total();
    let mut next_copy = vec![0usize; g.num_pairs()];
    let mut used = vec![false; total];
    let mut rows: Vec<Vec<BitVector>> = vec![Vec::new(); g.m()];
    let mut key_columns = Vec::new();

    for (tree, count) in &packing.trees {
        for _ in 0..*count {
            let cols: Vec<usize> = tree
                .pair_indices(g)
                .into_iter()
                .map(|p| {
                    let c = layout.index(p, next_copy[p]);
                    next_copy[p] += 1;
                    c
                })
                .collect();
            for &c in &cols {
                used[c] = true;
            }
            for check in tree_lc(tree) {
                let mut r = BitVector::zeros(total);
                r.set(cols[check.first], true);
                r.set(cols[check.second], true);
                rows[check.sender].push(r);
            }
            key_columns.push(*cols.iter().min().expect("trees have edges"));
        }
    }
    for c in (0..total).filter(|&c| !used[c]) {
        let (p, _) = layout.locate(c);
        rows[layout.pair(p).0].push(BitVector::unit(total, c));
    }

    let matrices = rows
        .into_iter()
        .enumerate()
        .map(|(i, global)| {
            let observed = layout.observed(i);
            let local = global.iter().map(|r| r.select(&observed)).collect();
            BitMatrix::from_rows(observed.len(), local).expect("selected rows")
        })
        .collect();
    let scheme = LinearScheme::new(layout, matrices)?;
    let key_rows = key_columns.iter().map(|&c| BitVector::unit(total, c)).collect();
    let key_map = KeyMap { matrix: BitMatrix::from_rows(total, key_rows)? };
    Ok(PackingProtocol { scheme, key_map, packing, key_columns })
}

/// Lengths `⌈n(R_i + ε)⌉` from an omniscience rate vector.
pub fn omniscience_lengths(rates: &[Rational], n: u64, epsilon: &Rational) -> Vec<usize> {
    rates
        .iter()
        .map(|r| {
            let v = (r + epsilon) * int(n as i64);
            crate::rational::ceil_i64(&v).max(0) as usize
        })
        .collect()
}

/// Why a scheme fails to give omniscience: terminal `terminal` cannot
/// distinguish `vector` from zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcoWitness {
    pub terminal: Terminal,
    pub vector: BitVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcoVerdict {
    pub accepted: bool,
    pub witness: Option<LcoWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RandomLco {
    Accepted(LinearScheme),
    Rejected { scheme: LinearScheme, witness: LcoWitness },
}

impl RandomLco {
    pub fn is_accepted(&self) -> bool {
        matches!(self, RandomLco::Accepted(_))
    }

    pub fn scheme(&self) -> &LinearScheme {
        match self {
            RandomLco::Accepted(s) | RandomLco::Rejected { scheme: s, .. } => s,
        }
    }
}

fn check_layout(scheme: &LinearScheme, g: &Multigraph, n: u64) -> Result<()> {
    if *scheme.layout() != SourceLayout::new(g, n)? {
        return Err(Error::DimensionMismatch("scheme layout does not match the graph".into()));
    }
    Ok(())
}

/// Vectors terminal `j` cannot tell from zero: in the kernel of every `L_i`
/// and zero on `j`'s own bits.
pub fn lco_kernel(scheme: &LinearScheme, j: Terminal) -> Vec<BitVector> {
    scheme.stacked().vstack(&scheme.layout.selector(j)).kernel()
}

/// Whether every terminal of `A` recovers the whole source from its own
/// bits and the transcript.
pub fn is_lco(scheme: &LinearScheme, g: &Multigraph, a: TerminalSet, n: u64) -> Result<LcoVerdict> {
    check_layout(scheme, g, n)?;
    for j in a.iter() {
        if let Some(vector) = lco_kernel(scheme, j).into_iter().next() {
            return Ok(LcoVerdict { accepted: false, witness: Some(LcoWitness { terminal: j, vector }) });
        }
    }
    Ok(LcoVerdict { accepted: true, witness: None })
}

/// Draws every `L_i` with independent fair-coin entries, terminal by
/// terminal in row-major order, and checks it with [`is_lco`].
pub fn random_lco(
    g: &Multigraph,
    a: TerminalSet,
    n: u64,
    lengths: &[usize],
    seed: u64,
) -> Result<RandomLco> {
    let layout = SourceLayout::new(g, n)?;
    if lengths.len() != g.m() {
        return Err(Error::DimensionMismatch(format!("{} lengths for {} terminals", lengths.len(), g.m())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrices = lengths
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let cols = layout.observed(i).len();
            let rows = (0..b)
                .map(|_| BitVector::from_bools(&(0..cols).map(|_| rng.gen::<bool>()).collect::<Vec<_>>()))
                .collect();
            BitMatrix::from_rows(cols, rows).expect("generated rows")
        })
        .collect();
    let scheme = LinearScheme::new(layout, matrices)?;
    let verdict = is_lco(&scheme, g, a, n)?;
    Ok(match verdict.witness {
        None => RandomLco::Accepted(scheme),
        Some(witness) => RandomLco::Rejected { scheme, witness },
    })
}

/// Key coordinates complementary to the transcript: the non-pivot columns
/// of the reduced stacked map. Any vector in the row space is nonzero on
/// some pivot column, so these coordinates are independent of it.
pub fn extract_key(scheme: &LinearScheme) -> KeyMap {
    let total = scheme.layout.total();
    let pivots = scheme.stacked().echelon().pivots;
    let mut is_pivot = vec![false; total];
    for p in pivots {
        is_pivot[p] = true;
    }
    let rows = (0..total).filter(|&c| !is_pivot[c]).map(|c| BitVector::unit(total, c)).collect();
    KeyMap { matrix: BitMatrix::from_rows(total, rows).expect("unit rows") }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub transcript: Transcript,
    pub key: BitVector,
    /// Each terminal of `A` with its key estimate.
    pub decoded: Vec<(Terminal, BitVector)>,
}

/// Runs the scheme on `x` and lets every terminal of `A` decode the key by
/// elimination on its own bits plus the transcript.
pub fn run(
    scheme: &LinearScheme,
    key_map: &KeyMap,
    a: TerminalSet,
    x: &SourceRealization,
) -> Result<RunOutcome> {
    let layout = &scheme.layout;
    if x.bits.len() != layout.total() || key_map.matrix.num_cols() != layout.total() {
        return Err(Error::DimensionMismatch("realisation or key map length".into()));
    }
    let transcript = scheme.transmit(x);
    let key = key_map.apply(x);
    let stacked = scheme.stacked();
    let mut decoded = Vec::new();
    for j in a.iter() {
        let system = stacked.vstack(&layout.selector(j));
        let rhs = transcript.concatenated().concat(&x.observation(layout, j));
        let guess = system.solve(&rhs).expect("the true source solves the system");
        if system.kernel().iter().any(|z| !key_map.matrix.mul_vec(z).is_zero()) {
            return Err(Error::DecodingAmbiguity(j));
        }
        decoded.push((j, key_map.matrix.mul_vec(&guess)));
    }
    Ok(RunOutcome { transcript, key, decoded })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SecrecyWitness {
    /// Two realisations that look the same to `terminal` but carry
    /// different keys.
    Unrecoverable { terminal: Terminal, first: BitVector, second: BitVector, transcript: BitVector },
    /// A transcript under which the key is not uniform.
    SkewedConditional { transcript: BitVector, distinct_keys: u64, min_count: u64, max_count: u64 },
    /// The key map has dependent rows.
    KeyRankDeficient { rank: usize, key_len: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecrecyReport {
    pub source_bits: usize,
    pub transcript_bits: usize,
    pub key_bits: usize,
    pub recoverable: Vec<(Terminal, bool)>,
    pub uniform_conditional: bool,
    pub key_length_consistent: bool,
    pub security_index_zero: bool,
    /// `log|𝒦| − H(K|F)` in bits, computed in floating point only when the
    /// exact check fails.
    pub security_index: Option<f64>,
    pub witnesses: Vec<SecrecyWitness>,
}

impl SecrecyReport {
    pub fn passed(&self) -> bool {
        self.security_index_zero && self.recoverable.iter().all(|&(_, ok)| ok)
    }
}

fn masks(m: &BitMatrix) -> Vec<u64> {
    m.rows().iter().map(BitVector::to_u64).collect()
}

fn apply_masks(masks: &[u64], x: u64) -> u128 {
    masks
        .iter()
        .enumerate()
        .fold(0u128, |acc, (k, &r)| acc | (((r & x).count_ones() & 1) as u128) << k)
}

/// Enumerates all `2^N` equally likely realisations and checks exact
/// recoverability at every terminal of `A` and exact uniformity of the key
/// given each transcript.
pub fn verify_perfect_secrecy(
    scheme: &LinearScheme,
    key_map: &KeyMap,
    a: TerminalSet,
    cap: usize,
) -> Result<SecrecyReport> {
    let layout = &scheme.layout;
    let total = layout.total();
    if total > cap.min(63) {
        return Err(Error::BruteForceCap { bits: total, cap });
    }
    let key_len = key_map.key_len();
    if key_map.matrix.num_cols() != total {
        return Err(Error::DimensionMismatch("key map width".into()));
    }
    let stacked = scheme.stacked();
    // Transcripts are compared through a row basis of the stacked map when
    // they are too long to pack; two realisations share a transcript
    // exactly when they agree on that basis.
    let transcript_rows =
        if stacked.num_rows() <= 128 { stacked.clone() } else { stacked.echelon().matrix };
    let t_masks = masks(&transcript_rows);
    let k_masks = masks(&key_map.matrix);
    let own: Vec<(Terminal, u64)> =
        a.iter().map(|j| (j, layout.observed(j).iter().fold(0u64, |acc, &c| acc | 1 << c))).collect();

    let mut seen: Vec<HashMap<(u64, u128), (u128, u64)>> = vec![HashMap::new(); own.len()];
    let mut recoverable: Vec<(Terminal, bool)> = own.iter().map(|&(j, _)| (j, true)).collect();
    let mut witnesses = Vec::new();
    let mut per_transcript: HashMap<u128, (u64, HashMap<u128, u64>)> = HashMap::new();

    for x in 0..1u64 << total {
        let t = apply_masks(&t_masks, x);
        let k = apply_masks(&k_masks, x);
        for (slot, &(j, mask)) in own.iter().enumerate() {
            if !recoverable[slot].1 {
                continue;
            }
            let prior = *seen[slot].entry((x & mask, t)).or_insert((k, x));
            if prior.0 != k {
                recoverable[slot].1 = false;
                witnesses.push(SecrecyWitness::Unrecoverable {
                    terminal: j,
                    first: BitVector::from_u64(prior.1, total),
                    second: BitVector::from_u64(x, total),
                    transcript: stacked.mul_vec(&BitVector::from_u64(x, total)),
                });
            }
        }
        let entry = per_transcript.entry(t).or_default();
        entry.0 += 1;
        *entry.1.entry(k).or_insert(0) += 1;
    }

    let key_space = 1u64 << key_len;
    let mut transcripts: Vec<_> = per_transcript.into_iter().collect();
    transcripts.sort_by_key(|(t, _)| *t);
    let mut uniform = true;
    let mut conditional_entropy = 0.0f64;
    let realizations = (1u64 << total) as f64;
    for (t, (count, keys)) in &transcripts {
        let min = keys.values().copied().min().unwrap_or(0);
        let max = keys.values().copied().max().unwrap_or(0);
        let h: f64 = keys
            .values()
            .map(|&c| {
                let p = c as f64 / *count as f64;
                -p * p.log2()
            })
            .sum();
        conditional_entropy += *count as f64 / realizations * h;
        if uniform && (keys.len() as u64 != key_space || min != max) {
            uniform = false;
            let witness_x = (0..1u64 << total)
                .find(|&x| apply_masks(&t_masks, x) == *t)
                .expect("transcript occurs");
            witnesses.push(SecrecyWitness::SkewedConditional {
                transcript: stacked.mul_vec(&BitVector::from_u64(witness_x, total)),
                distinct_keys: keys.len() as u64,
                min_count: min,
                max_count: max,
            });
        }
    }

    let rank = key_map.matrix.rank();
    let key_length_consistent = rank == key_len;
    if !key_length_consistent {
        witnesses.push(SecrecyWitness::KeyRankDeficient { rank, key_len });
    }
    let security_index_zero = uniform && key_length_consistent;
    Ok(SecrecyReport {
        source_bits: total,
        transcript_bits: stacked.num_rows(),
        key_bits: key_len,
        recoverable,
        uniform_conditional: uniform,
        key_length_consistent,
        security_index_zero,
        security_index: (!security_index_zero).then_some(key_len as f64 - conditional_entropy),
        witnesses,
    })
}

/// Text form of a scheme and, optionally, its key map.
///
/// ```text
/// scheme m 3 n 1
/// pairs 1-2:1 1-3:0 2-3:1
/// L 1 0 1
/// L 2 1 2
/// 11
/// L 3 0 1
/// K 1 2
/// 10
/// ```
///
/// `pairs` lists every pair in canonical order with its bit count; each
/// `L i rows cols` or `K rows cols` header is followed by its rows as `0`/`1`
/// strings. `L_i` columns follow terminal `i`'s observation order and `K`
/// columns the global order.
pub fn write_scheme(scheme: &LinearScheme, key: Option<&KeyMap>) -> String {
    let layout = &scheme.layout;
    let mut out = format!("scheme m {} n {}\npairs", layout.m(), layout.n());
    for (p, &len) in layout.lens.iter().enumerate() {
        let (i, j) = layout.pair(p);
        out.push_str(&format!(" {}-{}:{}", i + 1, j + 1, len));
    }
    out.push('\n');
    for (i, l) in scheme.matrices.iter().enumerate() {
        out.push_str(&format!("L {} {} {}\n{}", i + 1, l.num_rows(), l.num_cols(), l));
    }
    if let Some(k) = key {
        out.push_str(&format!("K {} {}\n{}", k.matrix.num_rows(), k.matrix.num_cols(), k.matrix));
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (k, raw) in self.inner.by_ref() {
            let line = raw.trim();
            if !line.is_empty() && !line.starts_with('#') {
                self.last = k + 1;
                return Some((k + 1, line));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next().ok_or_else(|| Error::Parse { line: self.last + 1, message: format!("expected {what}") })
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_num<T: std::str::FromStr>(token: Option<&str>, line: usize, what: &str) -> Result<T> {
    token
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(line, format!("expected {what}")))
}

fn parse_rows(lines: &mut Lines<'_>, rows: usize, cols: usize) -> Result<BitMatrix> {
    let mut out = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (line, text) = lines.expect("a matrix row")?;
        let row: BitVector = text.parse().map_err(|_| parse_err(line, "row must be 0/1 characters"))?;
        if row.len() != cols {
            return Err(parse_err(line, format!("row has {} bits, expected {cols}", row.len())));
        }
        out.push(row);
    }
    BitMatrix::from_rows(cols, out)
}

pub fn parse_scheme(text: &str) -> Result<(LinearScheme, Option<KeyMap>)> {
    let mut lines = Lines { inner: text.lines().enumerate(), last: 0 };
    let (line, header) = lines.expect("`scheme m <m> n <n>`")?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != "scheme" || tokens[1] != "m" || tokens[3] != "n" {
        return Err(parse_err(line, "expected `scheme m <m> n <n>`"));
    }
    let m: usize = parse_num(Some(tokens[2]), line, "a terminal count")?;
    let n: u64 = parse_num(Some(tokens[4]), line, "a blow-up factor")?;
    let shape = Multigraph::empty(m).map_err(|e| parse_err(line, e.to_string()))?;

    let (line, pairs) = lines.expect("a `pairs` line")?;
    let mut tokens = pairs.split_whitespace();
    if tokens.next() != Some("pairs") {
        return Err(parse_err(line, "expected `pairs`"));
    }
    let mut lens = Vec::new();
    for (p, token) in tokens.enumerate() {
        let (i, j) = shape.pair_at(p.min(shape.num_pairs().saturating_sub(1)));
        let expected = format!("{}-{}:", i + 1, j + 1);
        let len = token
            .strip_prefix(&expected)
            .filter(|_| p < shape.num_pairs())
            .and_then(|l| l.parse().ok())
            .ok_or_else(|| parse_err(line, format!("expected `{expected}<bits>`, got {token:?}")))?;
        lens.push(len);
    }
    if lens.len() != shape.num_pairs() {
        return Err(parse_err(line, format!("{} pairs listed, expected {}", lens.len(), shape.num_pairs())));
    }
    let layout = SourceLayout::from_lengths(m, n, lens).map_err(|e| parse_err(line, e.to_string()))?;

    let mut matrices = Vec::with_capacity(m);
    for i in 0..m {
        let (line, head) = lines.expect(&format!("`L {} <rows> <cols>`", i + 1))?;
        let mut t = head.split_whitespace();
        if t.next() != Some("L") || t.next() != Some((i + 1).to_string().as_str()) {
            return Err(parse_err(line, format!("expected `L {} <rows> <cols>`", i + 1)));
        }
        let rows: usize = parse_num(t.next(), line, "a row count")?;
        let cols: usize = parse_num(t.next(), line, "a column count")?;
        if cols != layout.observed(i).len() {
            return Err(parse_err(line, format!("terminal {} observes {} bits", i + 1, layout.observed(i).len())));
        }
        matrices.push(parse_rows(&mut lines, rows, cols)?);
    }
    let key = match lines.next() {
        None => None,
        Some((line, head)) => {
            let mut t = head.split_whitespace();
            if t.next() != Some("K") {
                return Err(parse_err(line, "expected `K <rows> <cols>`"));
            }
            let rows: usize = parse_num(t.next(), line, "a row count")?;
            let cols: usize = parse_num(t.next(), line, "a column count")?;
            if cols != layout.total() {
                return Err(parse_err(line, format!("key map needs {} columns", layout.total())));
            }
            Some(KeyMap { matrix: parse_rows(&mut lines, rows, cols)? })
        }
    };
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "trailing content"));
    }
    Ok((LinearScheme::new(layout, matrices)?, key))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Multigraph {
        Multigraph::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap()
    }

    fn tree(edges: &[(usize, usize)]) -> SteinerTree {
        SteinerTree::new(edges.to_vec()).unwrap()
    }

    fn null_space(m: &BitMatrix) -> Vec<u64> {
        (0..1u64 << m.num_cols())
            .filter(|&x| m.mul_vec(&BitVector::from_u64(x, m.num_cols())).is_zero())
            .collect()
    }

    #[test]
    fn tree_checks() {
        let path = tree(&[(0, 1), (1, 2)]);
        let checks = tree_lc(&path);
        assert_eq!(checks, vec![ParityCheck { sender: 1, first: 1, second: 0 }]);
        assert_eq!(null_space(&tree_lc_matrix(&path)), vec![0b00, 0b11]);
        let star = tree(&[(0, 3), (1, 3), (2, 3)]);
        assert_eq!(null_space(&tree_lc_matrix(&star)), vec![0b000, 0b111]);
        assert!(tree_lc(&tree(&[(0, 1)])).is_empty());
    }

    #[test]
    fn p3_packing_protocol() {
        let proto = packing_protocol(&p3(), [0, 2].into(), 1).unwrap();
        assert_eq!(proto.scheme.lengths(), vec![0, 1, 0]);
        assert_eq!(proto.key_map.key_len(), 1);
        assert_eq!(proto.key_columns, vec![0]);
        let layout = proto.scheme.layout().clone();
        let x = SourceRealization::new(&layout, "10".parse().unwrap()).unwrap();
        let out = run(&proto.scheme, &proto.key_map, [0, 2].into(), &x).unwrap();
        assert_eq!(out.transcript.concatenated().to_string(), "1");
        assert_eq!(out.key.to_string(), "1");
        assert!(out.decoded.iter().all(|(_, k)| k.to_string() == "1"));
        let report = verify_perfect_secrecy(&proto.scheme, &proto.key_map, [0, 2].into(), 24).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn lco_checks() {
        let g = p3();
        let a = TerminalSet::from([0, 2]);
        let layout = SourceLayout::new(&g, 1).unwrap();
        let silent = LinearScheme::silent(layout.clone());
        let v = is_lco(&silent, &g, a, 1).unwrap();
        assert!(!v.accepted);
        assert_eq!(lco_kernel(&silent, 2), vec!["10".parse().unwrap()]);

        let ones = BitMatrix::from_rows(2, vec!["11".parse().unwrap()]).unwrap();
        let scheme = LinearScheme::new(
            layout.clone(),
            vec![BitMatrix::zeros(0, 1), ones, BitMatrix::zeros(0, 1)],
        )
        .unwrap();
        assert!(is_lco(&scheme, &g, a, 1).unwrap().accepted);
        assert_eq!(extract_key(&scheme).key_len(), 1);
        assert!(is_lco(&LinearScheme::broadcast_all(layout.clone()), &g, a, 1).unwrap().accepted);
        assert_eq!(extract_key(&LinearScheme::broadcast_all(layout.clone())).key_len(), 0);
        assert_eq!(extract_key(&silent).key_len(), 2);
        assert!(matches!(random_lco(&g, a, 1, &[0, 0, 0], 7).unwrap(), RandomLco::Rejected { .. }));
        let wrong = SourceLayout::new(&g, 2).unwrap();
        assert!(is_lco(&LinearScheme::silent(wrong), &g, a, 1).is_err());
    }

    #[test]
    fn broken_protocol_leaks() {
        let g = p3();
        let a = TerminalSet::from([0, 2]);
        let layout = SourceLayout::new(&g, 1).unwrap();
        // Terminal 2 announces x12 and also the parity, and the key is x12.
        let l2 = BitMatrix::from_rows(2, vec!["10".parse().unwrap(), "11".parse().unwrap()]).unwrap();
        let scheme =
            LinearScheme::new(layout, vec![BitMatrix::zeros(0, 1), l2, BitMatrix::zeros(0, 1)]).unwrap();
        let key = KeyMap { matrix: BitMatrix::from_rows(2, vec!["10".parse().unwrap()]).unwrap() };
        let r = verify_perfect_secrecy(&scheme, &key, a, 24).unwrap();
        assert!(!r.security_index_zero);
        assert!(r.witnesses.iter().any(|w| matches!(w, SecrecyWitness::SkewedConditional { .. })));
        assert_eq!(r.security_index, Some(1.0));
    }

    #[test]
    fn text_round_trip() {
        let proto = packing_protocol(&p3(), [0, 2].into(), 2).unwrap();
        let text = write_scheme(&proto.scheme, Some(&proto.key_map));
        let (scheme, key) = parse_scheme(&text).unwrap();
        assert_eq!(scheme, proto.scheme);
        assert_eq!(key, Some(proto.key_map.clone()));
        assert!(matches!(parse_scheme("scheme m 3 n 1\npairs 1-2:1\n"), Err(Error::Parse { line: 2, .. })));
        let bad_row = text.replacen("L 2 2 4\n", "L 2 2 4\n01x1\n", 1);
        assert!(matches!(parse_scheme(&bad_row), Err(Error::Parse { .. })));
    }

    #[test]
    fn verifier_cap() {
        let g = Multigraph::from_edges(2, &[(0, 1, 5)]).unwrap();
        let layout = SourceLayout::new(&g, 1).unwrap();
        let scheme = LinearScheme::silent(layout);
        let key = extract_key(&scheme);
        assert_eq!(
            verify_perfect_secrecy(&scheme, &key, TerminalSet::full(2), 4).unwrap_err(),
            Error::BruteForceCap { bits: 5, cap: 4 }
        );
    }
}
