//! Propositions as set systems: a list of labelled leaves together with a
//! family of leaf sets (the resolutions) closed under double orthogonality.
//!
//! Two leaf sets are orthogonal when they intersect in exactly one leaf. The
//! constants are `1 = (∅, ∅)` and `0 = (∅, {∅})`; negation dualises labels
//! and swaps resolutions for coresolutions; disjunction takes pairwise unions
//! of resolutions; conjunction is the De Morgan composite.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::formula::{Formula, Literal};

/// Hard cap on leaf counts wherever a `2^n` orthogonality enumeration runs.
pub const MAX_ORTHOGONAL_LEAVES: usize = 22;

/// A set of leaf ids, stored as a bitmask. Ordering is lexicographic on the
/// ascending id sequence, which is also the canonical serialisation order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LeafSet(u32);

impl LeafSet {
    pub const EMPTY: LeafSet = LeafSet(0);

    pub fn singleton(id: usize) -> LeafSet {
        LeafSet::EMPTY.with(id)
    }

    pub fn full(n: usize) -> LeafSet {
        assert!(n <= 32);
        if n == 32 {
            LeafSet(u32::MAX)
        } else {
            LeafSet((1u32 << n) - 1)
        }
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(ids: I) -> LeafSet {
        ids.into_iter().fold(LeafSet::EMPTY, LeafSet::with)
    }

    pub fn with(self, id: usize) -> LeafSet {
        assert!(id < 32, "leaf id out of range");
        LeafSet(self.0 | 1 << id)
    }

    pub fn contains(self, id: usize) -> bool {
        id < 32 && self.0 >> id & 1 == 1
    }

    pub fn union(self, other: LeafSet) -> LeafSet {
        LeafSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LeafSet) -> LeafSet {
        LeafSet(self.0 & other.0)
    }

    pub fn minus(self, other: LeafSet) -> LeafSet {
        LeafSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: LeafSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn ids(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits >> i & 1 == 1)
    }

    /// Re-indexes every id upward, for placing a second summand after a first.
    pub fn shifted(self, by: usize) -> LeafSet {
        assert!(by == 0 || self.0.leading_zeros() as usize >= by, "shift overflow");
        LeafSet(self.0 << by)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn from_bits(bits: u32) -> LeafSet {
        LeafSet(bits)
    }
}

impl Ord for LeafSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut a, mut b) = (self.0, other.0);
        while a != 0 && b != 0 {
            match a.trailing_zeros().cmp(&b.trailing_zeros()) {
                Ordering::Equal => {
                    a &= a - 1;
                    b &= b - 1;
                }
                ord => return ord,
            }
        }
        (a != 0).cmp(&(b != 0))
    }
}

impl PartialOrd for LeafSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LeafSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ids()).finish()
    }
}

/// `|s ∩ t| = 1`.
pub fn orthogonal_pair(s: LeafSet, t: LeafSet) -> bool {
    s.intersection(t).len() == 1
}

fn check_orthogonal_bound(n: usize) -> Result<()> {
    if n > MAX_ORTHOGONAL_LEAVES {
        return Err(Error::Bound {
            what: "orthogonal leaf count",
            limit: MAX_ORTHOGONAL_LEAVES,
            actual: n,
        });
    }
    Ok(())
}

/// `S⊥` over `n` leaves by enumerating all `2^n` subsets. The reference
/// implementation; `orthogonal_pruned` must agree with it everywhere.
pub fn orthogonal(n: usize, sets: &BTreeSet<LeafSet>) -> Result<BTreeSet<LeafSet>> {
    check_orthogonal_bound(n)?;
    let sets: Vec<u32> = sets.iter().map(|s| s.0).collect();
    let mut out = BTreeSet::new();
    for t in 0..1u64 << n {
        let t = t as u32;
        if sets.iter().all(|s| (s & t).count_ones() == 1) {
            out.insert(LeafSet(t));
        }
    }
    Ok(out)
}

/// `S⊥` by depth-first search: pick exactly one leaf from each resolution,
/// then pad with arbitrary subsets of the leaves no resolution covers.
pub fn orthogonal_pruned(n: usize, sets: &BTreeSet<LeafSet>) -> Result<BTreeSet<LeafSet>> {
    check_orthogonal_bound(n)?;
    let sets: Vec<u32> = sets.iter().map(|s| s.0).collect();
    let covered = sets.iter().fold(0u32, |acc, s| acc | s);
    let free = LeafSet::full(n).0 & !covered;

    let mut cores = Vec::new();
    fn dfs(sets: &[u32], idx: usize, current: u32, cores: &mut Vec<u32>) {
        if idx == sets.len() {
            cores.push(current);
            return;
        }
        let s = sets[idx];
        match (current & s).count_ones() {
            1 => dfs(sets, idx + 1, current, cores),
            0 => {
                let mut rest = s;
                while rest != 0 {
                    let xbit = rest & rest.wrapping_neg();
                    rest &= rest - 1;
                    if sets[..idx].iter().all(|p| p & xbit == 0) {
                        dfs(sets, idx + 1, current | xbit, cores);
                    }
                }
            }
            _ => {}
        }
    }
    dfs(&sets, 0, 0, &mut cores);

    let mut out = BTreeSet::new();
    for core in cores {
        let mut sub = free;
        loop {
            out.insert(LeafSet(core | sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    Ok(out)
}

/// Whether a candidate family of resolutions over `leaf_count` leaves is
/// closed under double orthogonality. Out-of-range ids simply fail.
pub fn is_abstract_prop(leaf_count: usize, resolutions: &BTreeSet<LeafSet>) -> Result<bool> {
    let range = LeafSet::full(leaf_count.min(32));
    if resolutions.iter().any(|r| !r.is_subset_of(range)) {
        return Ok(false);
    }
    let once = orthogonal_pruned(leaf_count, resolutions)?;
    let twice = orthogonal_pruned(leaf_count, &once)?;
    Ok(&twice == resolutions)
}

/// A proposition: labelled leaves plus resolutions closed under double
/// orthogonality. Coresolutions are computed on first use and cached;
/// the value is immutable afterwards, so the cache is write-once.
#[derive(Clone)]
pub struct AbstractProp {
    leaves: Vec<Literal>,
    resolutions: BTreeSet<LeafSet>,
    cores: OnceLock<BTreeSet<LeafSet>>,
}

impl PartialEq for AbstractProp {
    fn eq(&self, other: &Self) -> bool {
        self.leaves == other.leaves && self.resolutions == other.resolutions
    }
}

impl Eq for AbstractProp {}

impl PartialOrd for AbstractProp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AbstractProp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.leaves
            .cmp(&other.leaves)
            .then_with(|| self.resolutions.cmp(&other.resolutions))
    }
}

impl std::hash::Hash for AbstractProp {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.leaves.hash(state);
        for r in &self.resolutions {
            r.0.hash(state);
        }
    }
}

impl fmt::Debug for AbstractProp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.leaves.iter().map(|l| l.to_string()).collect();
        write!(f, "AbstractProp[{}; {:?}]", labels.join(","), self.resolutions)
    }
}

impl AbstractProp {
    /// Validating constructor: ids must be in range, the leaf count within the
    /// orthogonality bound, and the resolutions doubly orthogonal.
    pub fn try_new(leaves: Vec<Literal>, resolutions: BTreeSet<LeafSet>) -> Result<AbstractProp> {
        let range = LeafSet::full(leaves.len().min(32));
        if let Some(bad) = resolutions.iter().find(|r| !r.is_subset_of(range)) {
            return Err(Error::InvalidProp(format!(
                "resolution {bad:?} mentions leaves outside 0..{}",
                leaves.len()
            )));
        }
        if !is_abstract_prop(leaves.len(), &resolutions)? {
            return Err(Error::InvalidProp(
                "resolutions are not closed under double orthogonality".to_string(),
            ));
        }
        Ok(AbstractProp {
            leaves,
            resolutions,
            cores: OnceLock::new(),
        })
    }

    /// For operations that preserve the invariant by construction.
    pub(crate) fn from_parts(leaves: Vec<Literal>, resolutions: BTreeSet<LeafSet>) -> AbstractProp {
        AbstractProp {
            leaves,
            resolutions,
            cores: OnceLock::new(),
        }
    }

    /// `1 = (∅, ∅)`: no leaves, no resolutions.
    pub fn unit_true() -> AbstractProp {
        AbstractProp::from_parts(Vec::new(), BTreeSet::new())
    }

    /// `0 = (∅, {∅})`: no leaves, one empty resolution.
    pub fn unit_false() -> AbstractProp {
        let mut resolutions = BTreeSet::new();
        resolutions.insert(LeafSet::EMPTY);
        AbstractProp::from_parts(Vec::new(), resolutions)
    }

    /// A single leaf whose only resolution is that leaf.
    pub fn literal(l: Literal) -> AbstractProp {
        let mut resolutions = BTreeSet::new();
        resolutions.insert(LeafSet::singleton(0));
        AbstractProp::from_parts(vec![l], resolutions)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn leaves(&self) -> &[Literal] {
        &self.leaves
    }

    pub fn label(&self, id: usize) -> &Literal {
        &self.leaves[id]
    }

    pub fn resolutions(&self) -> &BTreeSet<LeafSet> {
        &self.resolutions
    }

    /// `S⊥`, cached after the first computation.
    pub fn coresolutions(&self) -> Result<&BTreeSet<LeafSet>> {
        check_orthogonal_bound(self.leaves.len())?;
        if self.cores.get().is_none() {
            let computed = orthogonal_pruned(self.leaves.len(), &self.resolutions)?;
            let _ = self.cores.set(computed);
        }
        Ok(self.cores.get().expect("just published"))
    }

    /// `¬(X, S) = (X̄, S⊥)`: dual labels, coresolutions as resolutions.
    pub fn neg(&self) -> Result<AbstractProp> {
        let leaves = self.leaves.iter().map(Literal::dual).collect();
        let resolutions = self.coresolutions()?.clone();
        let out = AbstractProp::from_parts(leaves, resolutions);
        // S⊥⊥ = S for a valid proposition, so the negation's coresolutions
        // are already known.
        let _ = out.cores.set(self.resolutions.clone());
        Ok(out)
    }

    /// `(X,S) ∨ (Y,T) = (X+Y, {s+t | s ∈ S, t ∈ T})` with `Y` re-indexed
    /// after `X`. No bound check; any later orthogonality computation on an
    /// oversized result reports the bound error.
    pub fn sum(&self, other: &AbstractProp) -> AbstractProp {
        let mut leaves = self.leaves.clone();
        leaves.extend(other.leaves.iter().cloned());
        let shift = self.leaves.len();
        let mut resolutions = BTreeSet::new();
        for s in &self.resolutions {
            for t in &other.resolutions {
                resolutions.insert(s.union(t.shifted(shift)));
            }
        }
        AbstractProp::from_parts(leaves, resolutions)
    }

    /// `A ∧ B = ¬(¬A ∨ ¬B)`, exactly the De Morgan composite.
    pub fn product(&self, other: &AbstractProp) -> Result<AbstractProp> {
        self.neg()?.sum(&other.neg()?).neg()
    }

    /// Abstract truth: every resolution contains a pair of dual leaves.
    /// Vacuously true when there are no resolutions.
    pub fn is_true(&self) -> bool {
        self.resolutions.iter().all(|r| self.has_dual_pair(*r))
    }

    fn has_dual_pair(&self, r: LeafSet) -> bool {
        let ids: Vec<usize> = r.ids().collect();
        for (k, &i) in ids.iter().enumerate() {
            for &j in &ids[k + 1..] {
                if self.leaves[i].is_dual_of(&self.leaves[j]) {
                    return true;
                }
            }
        }
        false
    }

    /// One or more leaves, every singleton a resolution and nothing else.
    pub fn is_pure_product(&self) -> bool {
        !self.leaves.is_empty()
            && self.resolutions.len() == self.leaves.len()
            && (0..self.leaves.len()).all(|i| self.resolutions.contains(&LeafSet::singleton(i)))
    }

    /// One or more leaves, the full leaf set as the only resolution.
    pub fn is_pure_sum(&self) -> bool {
        !self.leaves.is_empty()
            && self.resolutions.len() == 1
            && self.resolutions.contains(&LeafSet::full(self.leaves.len()))
    }
}

/// The meet-graph of a formula: vertices are leaf occurrences, with an edge
/// wherever two leaves meet at a conjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeetGraph {
    adj: Vec<LeafSet>,
}

impl MeetGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<MeetGraph> {
        let mut adj = vec![LeafSet::EMPTY; n];
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::Shape(format!("edge ({i},{j}) outside 0..{n}")));
            }
            if i == j {
                return Err(Error::Shape(format!("self-loop on vertex {i}")));
            }
            adj[i] = adj[i].with(j);
            adj[j] = adj[j].with(i);
        }
        Ok(MeetGraph { adj })
    }

    /// Builds the meet-graph and the leaf labelling of a constant-free
    /// formula. Constants have no graph form.
    pub fn of_formula(f: &Formula) -> Result<(MeetGraph, Vec<Literal>)> {
        let mut leaves = Vec::new();
        let mut adj = Vec::new();
        build_meet(f, &mut leaves, &mut adj)?;
        Ok((MeetGraph { adj }, leaves))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    /// All maximal stable (independent) sets, as maximal cliques of the
    /// complement graph via Bron–Kerbosch with pivoting.
    pub fn maximal_stable_sets(&self) -> Result<BTreeSet<LeafSet>> {
        let n = self.adj.len();
        check_orthogonal_bound(n)?;
        let full = LeafSet::full(n).0;
        let comp: Vec<u32> = (0..n)
            .map(|i| full & !self.adj[i].0 & !(1u32 << i))
            .collect();
        let mut out = BTreeSet::new();
        bron_kerbosch(&comp, 0, full, 0, &mut out);
        Ok(out)
    }
}

fn build_meet(f: &Formula, leaves: &mut Vec<Literal>, adj: &mut Vec<LeafSet>) -> Result<LeafSet> {
    match f {
        Formula::Lit(l) => {
            let id = leaves.len();
            leaves.push(l.clone());
            adj.push(LeafSet::EMPTY);
            Ok(LeafSet::singleton(id))
        }
        Formula::True | Formula::False => Err(Error::Shape(
            "constants have no meet-graph form".to_string(),
        )),
        Formula::And(l, r) => {
            let a = build_meet(l, leaves, adj)?;
            let b = build_meet(r, leaves, adj)?;
            for i in a.ids() {
                adj[i] = adj[i].union(b);
            }
            for j in b.ids() {
                adj[j] = adj[j].union(a);
            }
            Ok(a.union(b))
        }
        Formula::Or(l, r) => {
            let a = build_meet(l, leaves, adj)?;
            let b = build_meet(r, leaves, adj)?;
            Ok(a.union(b))
        }
    }
}

fn bron_kerbosch(comp: &[u32], r: u32, mut p: u32, mut x: u32, out: &mut BTreeSet<LeafSet>) {
    if p == 0 && x == 0 {
        out.insert(LeafSet(r));
        return;
    }
    let pivot = {
        let mut best = usize::MAX;
        let mut best_score = 0;
        let mut cand = p | x;
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let score = (p & comp[u]).count_ones();
            if best == usize::MAX || score > best_score {
                best = u;
                best_score = score;
            }
        }
        best
    };
    let mut rest = p & !comp[pivot];
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        let vbit = 1u32 << v;
        rest &= rest - 1;
        bron_kerbosch(comp, r | vbit, p & comp[v], x & comp[v], out);
        p &= !vbit;
        x |= vbit;
    }
}

fn has_constants(f: &Formula) -> bool {
    match f {
        Formula::Lit(_) => false,
        Formula::True | Formula::False => true,
        Formula::And(l, r) | Formula::Or(l, r) => has_constants(l) || has_constants(r),
    }
}

/// Compiles a formula to a proposition: leaves are the literal occurrences in
/// source order; on constant-free formulas the resolutions are the maximal
/// stable sets of the meet-graph, and constants take the recursive route
/// through `1`, `0`, sums and products.
pub fn compile(f: &Formula) -> Result<AbstractProp> {
    if f.leaf_count() > MAX_ORTHOGONAL_LEAVES {
        return Err(Error::Bound {
            what: "compile leaf count",
            limit: MAX_ORTHOGONAL_LEAVES,
            actual: f.leaf_count(),
        });
    }
    compile_inner(f)
}

fn compile_inner(f: &Formula) -> Result<AbstractProp> {
    if !has_constants(f) {
        return compile_via_graph(f);
    }
    match f {
        Formula::Lit(l) => Ok(AbstractProp::literal(l.clone())),
        Formula::True => Ok(AbstractProp::unit_true()),
        Formula::False => Ok(AbstractProp::unit_false()),
        Formula::And(l, r) => compile_inner(l)?.product(&compile_inner(r)?),
        Formula::Or(l, r) => Ok(compile_inner(l)?.sum(&compile_inner(r)?)),
    }
}

/// The meet-graph route alone; errors on constants.
pub fn compile_via_graph(f: &Formula) -> Result<AbstractProp> {
    let (graph, leaves) = MeetGraph::of_formula(f)?;
    let resolutions = graph.maximal_stable_sets()?;
    Ok(AbstractProp::from_parts(leaves, resolutions))
}

/// The purely recursive route: literals, units, sums and De Morgan products,
/// never consulting the meet-graph. Agrees with `compile` everywhere; kept
/// separate so the two routes can be checked against each other.
pub fn compile_recursive(f: &Formula) -> Result<AbstractProp> {
    if f.leaf_count() > MAX_ORTHOGONAL_LEAVES {
        return Err(Error::Bound {
            what: "compile leaf count",
            limit: MAX_ORTHOGONAL_LEAVES,
            actual: f.leaf_count(),
        });
    }
    match f {
        Formula::Lit(l) => Ok(AbstractProp::literal(l.clone())),
        Formula::True => Ok(AbstractProp::unit_true()),
        Formula::False => Ok(AbstractProp::unit_false()),
        Formula::And(l, r) => compile_recursive(l)?.product(&compile_recursive(r)?),
        Formula::Or(l, r) => Ok(compile_recursive(l)?.sum(&compile_recursive(r)?)),
    }
}

/// Label-preserving bijection between leaves carrying resolutions onto
/// resolutions, found by backtracking.
pub fn isomorphic(a: &AbstractProp, b: &AbstractProp) -> bool {
    let n = a.leaf_count();
    if n != b.leaf_count() || a.resolutions.len() != b.resolutions.len() {
        return false;
    }
    let mut la: Vec<&Literal> = a.leaves.iter().collect();
    let mut lb: Vec<&Literal> = b.leaves.iter().collect();
    la.sort();
    lb.sort();
    if la != lb {
        return false;
    }
    let sig = |p: &AbstractProp, i: usize| -> Vec<usize> {
        let mut sizes: Vec<usize> = p
            .resolutions
            .iter()
            .filter(|r| r.contains(i))
            .map(|r| r.len())
            .collect();
        sizes.sort();
        sizes
    };
    let sig_a: Vec<Vec<usize>> = (0..n).map(|i| sig(a, i)).collect();
    let sig_b: Vec<Vec<usize>> = (0..n).map(|i| sig(b, i)).collect();

    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    backtrack_iso(a, b, &sig_a, &sig_b, &mut perm, &mut used, 0)
}

fn backtrack_iso(
    a: &AbstractProp,
    b: &AbstractProp,
    sig_a: &[Vec<usize>],
    sig_b: &[Vec<usize>],
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    i: usize,
) -> bool {
    let n = perm.len();
    if i == n {
        let mapped: BTreeSet<LeafSet> = a
            .resolutions
            .iter()
            .map(|r| LeafSet::from_ids(r.ids().map(|x| perm[x])))
            .collect();
        return mapped == b.resolutions;
    }
    for j in 0..n {
        if !used[j] && a.leaves[i] == b.leaves[j] && sig_a[i] == sig_b[j] {
            perm[i] = j;
            used[j] = true;
            if backtrack_iso(a, b, sig_a, sig_b, perm, used, i + 1) {
                return true;
            }
            used[j] = false;
            perm[i] = usize::MAX;
        }
    }
    false
}
