//! Morphisms between propositions: relations on leaves that respect labels,
//! judged by resolution conditions.
//!
//! The strict condition asks that preimages of resolutions are resolutions
//! and images of coresolutions are coresolutions; its edge-counting form asks
//! for exactly one related pair inside every coresolution × resolution
//! rectangle. The lax pair of conditions weakens "equals" to "contains" and
//! "exactly one" to "at least one". On compiled propositions each pair of
//! formulations coincides.

use std::collections::BTreeSet;

use crate::absprop::{AbstractProp, LeafSet};
use crate::error::{Error, Result};
use crate::formula::Literal;

/// Relation searches enumerate subsets of the label-respecting pairs; more
/// than this many candidate pairs is out of desk range.
pub const MAX_ENUMERATION_PAIRS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Which of the four resolution conditions to judge a relation by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    Strict,
    StrictEdge,
    Lax,
    LaxEdge,
}

/// A label-respecting relation between the leaves of two propositions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Morphism {
    source: AbstractProp,
    target: AbstractProp,
    pairs: BTreeSet<(usize, usize)>,
}

/// First failure found while checking a condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionWitness {
    /// A target resolution whose preimage is not (does not contain) a source
    /// resolution.
    Preimage { resolution: LeafSet, preimage: LeafSet },
    /// A source coresolution whose image is not (does not contain) a target
    /// coresolution.
    Image { coresolution: LeafSet, image: LeafSet },
    /// A coresolution × resolution rectangle holding the wrong number of
    /// pairs.
    Rectangle {
        coresolution: LeafSet,
        resolution: LeafSet,
        pairs: usize,
    },
}

/// Verdicts for all four conditions, with a witness for the first failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub strict: bool,
    pub strict_edge: bool,
    pub lax: bool,
    pub lax_edge: bool,
    pub witness: Option<ConditionWitness>,
}

impl Morphism {
    /// Validates id ranges and that related leaves carry the same literal.
    pub fn new(
        source: AbstractProp,
        target: AbstractProp,
        pairs: BTreeSet<(usize, usize)>,
    ) -> Result<Morphism> {
        for &(x, y) in &pairs {
            if x >= source.leaf_count() || y >= target.leaf_count() {
                return Err(Error::Shape(format!(
                    "pair ({x},{y}) outside {}×{}",
                    source.leaf_count(),
                    target.leaf_count()
                )));
            }
            if source.label(x) != target.label(y) {
                return Err(Error::Label(format!(
                    "pair ({x},{y}) relates `{}` to `{}`",
                    source.label(x),
                    target.label(y)
                )));
            }
        }
        Ok(Morphism {
            source,
            target,
            pairs,
        })
    }

    pub(crate) fn from_parts(
        source: AbstractProp,
        target: AbstractProp,
        pairs: BTreeSet<(usize, usize)>,
    ) -> Morphism {
        Morphism {
            source,
            target,
            pairs,
        }
    }

    pub fn source(&self) -> &AbstractProp {
        &self.source
    }

    pub fn target(&self) -> &AbstractProp {
        &self.target
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    /// The diagonal relation on a proposition's own leaves.
    pub fn identity(a: &AbstractProp) -> Morphism {
        let pairs = (0..a.leaf_count()).map(|i| (i, i)).collect();
        Morphism::from_parts(a.clone(), a.clone(), pairs)
    }

    /// Relational composition. The middle objects must agree structurally.
    pub fn compose(&self, g: &Morphism) -> Result<Morphism> {
        if self.target != g.source {
            return Err(Error::ObjectMismatch(
                "target of the first morphism differs from source of the second".to_string(),
            ));
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); g.source.leaf_count()];
        for &(m, y) in &g.pairs {
            out[m].push(y);
        }
        let mut pairs = BTreeSet::new();
        for &(x, m) in &self.pairs {
            for &y in &out[m] {
                pairs.insert((x, y));
            }
        }
        Ok(Morphism::from_parts(
            self.source.clone(),
            g.target.clone(),
            pairs,
        ))
    }

    /// Contravariant De Morgan dual: the transposed relation between the
    /// negated propositions.
    pub fn dual(&self) -> Result<Morphism> {
        let pairs = self.pairs.iter().map(|&(x, y)| (y, x)).collect();
        Ok(Morphism::from_parts(
            self.target.neg()?,
            self.source.neg()?,
            pairs,
        ))
    }

    /// Source leaves related to anything inside `t`.
    pub fn preimage(&self, t: LeafSet) -> LeafSet {
        let mut out = LeafSet::EMPTY;
        for &(x, y) in &self.pairs {
            if t.contains(y) {
                out = out.with(x);
            }
        }
        out
    }

    /// Target leaves related to anything inside `s`.
    pub fn image(&self, s: LeafSet) -> LeafSet {
        let mut out = LeafSet::EMPTY;
        for &(x, y) in &self.pairs {
            if s.contains(x) {
                out = out.with(y);
            }
        }
        out
    }

    fn rectangle_count(&self, coresolution: LeafSet, resolution: LeafSet) -> usize {
        self.pairs
            .iter()
            .filter(|&&(x, y)| coresolution.contains(x) && resolution.contains(y))
            .count()
    }

    /// Preimages of target resolutions are source resolutions; images of
    /// source coresolutions are target coresolutions.
    pub fn check_strict(&self) -> Result<bool> {
        Ok(self.strict_witness()?.is_none())
    }

    /// First failure of the strict condition, if any: a target resolution
    /// whose preimage is not a source resolution, or a source coresolution
    /// whose image is not a target coresolution.
    pub fn strict_witness(&self) -> Result<Option<ConditionWitness>> {
        for &t in self.target.resolutions() {
            let pre = self.preimage(t);
            if !self.source.resolutions().contains(&pre) {
                return Ok(Some(ConditionWitness::Preimage {
                    resolution: t,
                    preimage: pre,
                }));
            }
        }
        let tgt_cores = self.target.coresolutions()?;
        for &s in self.source.coresolutions()? {
            let img = self.image(s);
            if !tgt_cores.contains(&img) {
                return Ok(Some(ConditionWitness::Image {
                    coresolution: s,
                    image: img,
                }));
            }
        }
        Ok(None)
    }

    /// Exactly one pair inside every coresolution × resolution rectangle.
    pub fn check_strict_edge(&self) -> Result<bool> {
        Ok(self.edge_witness(true)?.is_none())
    }

    fn edge_witness(&self, exact: bool) -> Result<Option<ConditionWitness>> {
        let cores = self.source.coresolutions()?.clone();
        for &s in &cores {
            for &t in self.target.resolutions() {
                let n = self.rectangle_count(s, t);
                let ok = if exact { n == 1 } else { n >= 1 };
                if !ok {
                    return Ok(Some(ConditionWitness::Rectangle {
                        coresolution: s,
                        resolution: t,
                        pairs: n,
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Preimages of target resolutions contain source resolutions; images of
    /// source coresolutions contain target coresolutions.
    pub fn check_lax(&self) -> Result<bool> {
        Ok(self.lax_witness()?.is_none())
    }

    /// First failure of the lax condition, if any: a target resolution whose
    /// preimage contains no source resolution, or a source coresolution
    /// whose image contains no target coresolution.
    pub fn lax_witness(&self) -> Result<Option<ConditionWitness>> {
        for &t in self.target.resolutions() {
            let pre = self.preimage(t);
            if !self.source.resolutions().iter().any(|s| s.is_subset_of(pre)) {
                return Ok(Some(ConditionWitness::Preimage {
                    resolution: t,
                    preimage: pre,
                }));
            }
        }
        let tgt_cores = self.target.coresolutions()?.clone();
        for &s in self.source.coresolutions()? {
            let img = self.image(s);
            if !tgt_cores.iter().any(|t| t.is_subset_of(img)) {
                return Ok(Some(ConditionWitness::Image {
                    coresolution: s,
                    image: img,
                }));
            }
        }
        Ok(None)
    }

    /// At least one pair inside every coresolution × resolution rectangle.
    pub fn check_lax_edge(&self) -> Result<bool> {
        Ok(self.edge_witness(false)?.is_none())
    }

    /// All four verdicts plus the first failure witness, in the order strict,
    /// strict edge, lax, lax edge.
    pub fn condition_report(&self) -> Result<ConditionReport> {
        let strict_w = self.strict_witness()?;
        let strict_edge_w = self.edge_witness(true)?;
        let lax_w = self.lax_witness()?;
        let lax_edge_w = self.edge_witness(false)?;
        let witness = strict_w
            .clone()
            .or(strict_edge_w.clone())
            .or(lax_w.clone())
            .or(lax_edge_w.clone());
        Ok(ConditionReport {
            strict: strict_w.is_none(),
            strict_edge: strict_edge_w.is_none(),
            lax: lax_w.is_none(),
            lax_edge: lax_edge_w.is_none(),
            witness,
        })
    }

    pub fn check(&self, condition: Condition) -> Result<bool> {
        match condition {
            Condition::Strict => self.check_strict(),
            Condition::StrictEdge => self.check_strict_edge(),
            Condition::Lax => self.check_lax(),
            Condition::LaxEdge => self.check_lax_edge(),
        }
    }
}

/// Whether the set-theoretic and edge-counting strict conditions agree here.
pub fn coincide_strict(m: &Morphism) -> Result<bool> {
    Ok(m.check_strict()? == m.check_strict_edge()?)
}

/// Whether the set-theoretic and edge-counting lax conditions agree here.
pub fn coincide_lax(m: &Morphism) -> Result<bool> {
    Ok(m.check_lax()? == m.check_lax_edge()?)
}

fn shift_pairs(
    pairs: &BTreeSet<(usize, usize)>,
    dx: usize,
    dy: usize,
) -> impl Iterator<Item = (usize, usize)> + '_ {
    pairs.iter().map(move |&(x, y)| (x + dx, y + dy))
}

/// `π`: A∧B → A (left) or B (right).
pub fn projection(a: &AbstractProp, b: &AbstractProp, side: Side) -> Result<Morphism> {
    let source = a.product(b)?;
    let (target, pairs) = match side {
        Side::Left => (a.clone(), (0..a.leaf_count()).map(|i| (i, i)).collect()),
        Side::Right => (
            b.clone(),
            (0..b.leaf_count()).map(|j| (a.leaf_count() + j, j)).collect(),
        ),
    };
    Ok(Morphism::from_parts(source, target, pairs))
}

/// `ι`: A (left) or B (right) → A∨B.
pub fn injection(a: &AbstractProp, b: &AbstractProp, side: Side) -> Result<Morphism> {
    let target = a.sum(b);
    let (source, pairs) = match side {
        Side::Left => (a.clone(), (0..a.leaf_count()).map(|i| (i, i)).collect()),
        Side::Right => (
            b.clone(),
            (0..b.leaf_count()).map(|j| (j, a.leaf_count() + j)).collect(),
        ),
    };
    Ok(Morphism::from_parts(source, target, pairs))
}

/// `Δ`: A → A∧A, each leaf related to both copies.
pub fn diagonal(a: &AbstractProp) -> Result<Morphism> {
    let n = a.leaf_count();
    let target = a.product(a)?;
    let pairs = (0..n).flat_map(|i| [(i, i), (i, n + i)]).collect();
    Ok(Morphism::from_parts(a.clone(), target, pairs))
}

/// `∇`: A∨A → A, both copies related back.
pub fn codiagonal(a: &AbstractProp) -> Result<Morphism> {
    let n = a.leaf_count();
    let source = a.sum(a);
    let pairs = (0..n).flat_map(|i| [(i, i), (n + i, i)]).collect();
    Ok(Morphism::from_parts(source, a.clone(), pairs))
}

/// `⟨f,g⟩`: C → A∧B from f: C → A and g: C → B.
pub fn pairing(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    if f.source != g.source {
        return Err(Error::ObjectMismatch(
            "pairing needs a common source".to_string(),
        ));
    }
    let target = f.target.product(&g.target)?;
    let mut pairs = f.pairs.clone();
    pairs.extend(shift_pairs(&g.pairs, 0, f.target.leaf_count()));
    Ok(Morphism::from_parts(f.source.clone(), target, pairs))
}

/// `[f,g]`: A∨B → C from f: A → C and g: B → C.
pub fn copairing(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    if f.target != g.target {
        return Err(Error::ObjectMismatch(
            "copairing needs a common target".to_string(),
        ));
    }
    let source = f.source.sum(&g.source);
    let mut pairs = f.pairs.clone();
    pairs.extend(shift_pairs(&g.pairs, f.source.leaf_count(), 0));
    Ok(Morphism::from_parts(source, f.target.clone(), pairs))
}

/// `f∧g`: A∧B → C∧D componentwise.
pub fn and_par(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    let source = f.source.product(&g.source)?;
    let target = f.target.product(&g.target)?;
    let mut pairs = f.pairs.clone();
    pairs.extend(shift_pairs(&g.pairs, f.source.leaf_count(), f.target.leaf_count()));
    Ok(Morphism::from_parts(source, target, pairs))
}

/// `f∨g`: A∨B → C∨D componentwise.
pub fn or_par(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    let source = f.source.sum(&g.source);
    let target = f.target.sum(&g.target);
    let mut pairs = f.pairs.clone();
    pairs.extend(shift_pairs(&g.pairs, f.source.leaf_count(), f.target.leaf_count()));
    Ok(Morphism::from_parts(source, target, pairs))
}

/// `d`: A∧(B∨C) → (A∧B)∨(A∧C). Every A-leaf is related to both of its
/// copies; B- and C-leaves go where they go.
pub fn distribution(a: &AbstractProp, b: &AbstractProp, c: &AbstractProp) -> Result<Morphism> {
    let (na, nb, nc) = (a.leaf_count(), b.leaf_count(), c.leaf_count());
    let source = a.product(&b.sum(c))?;
    let target = a.product(b)?.sum(&a.product(c)?);
    let mut pairs = BTreeSet::new();
    for i in 0..na {
        pairs.insert((i, i));
        pairs.insert((i, na + nb + i));
    }
    for j in 0..nb {
        pairs.insert((na + j, na + j));
    }
    for k in 0..nc {
        pairs.insert((na + nb + k, 2 * na + nb + k));
    }
    Ok(Morphism::from_parts(source, target, pairs))
}

/// `l`: A∧(B∨C) → (A∧B)∨C, the identity on leaves.
pub fn linear_distribution(
    a: &AbstractProp,
    b: &AbstractProp,
    c: &AbstractProp,
) -> Result<Morphism> {
    let source = a.product(&b.sum(c))?;
    let target = a.product(b)?.sum(c);
    let pairs = (0..source.leaf_count()).map(|i| (i, i)).collect();
    Ok(Morphism::from_parts(source, target, pairs))
}

/// `(A∧B)∧C → A∧(B∧C)`; the two objects are equal on the nose, so this is an
/// identity relation.
pub fn assoc_and(a: &AbstractProp, b: &AbstractProp, c: &AbstractProp) -> Result<Morphism> {
    let source = a.product(b)?.product(c)?;
    let target = a.product(&b.product(c)?)?;
    let pairs = (0..source.leaf_count()).map(|i| (i, i)).collect();
    Ok(Morphism::from_parts(source, target, pairs))
}

/// `(A∨B)∨C → A∨(B∨C)`; likewise an identity relation.
pub fn assoc_or(a: &AbstractProp, b: &AbstractProp, c: &AbstractProp) -> Result<Morphism> {
    let source = a.sum(b).sum(c);
    let target = a.sum(&b.sum(c));
    let pairs = (0..source.leaf_count()).map(|i| (i, i)).collect();
    Ok(Morphism::from_parts(source, target, pairs))
}

/// `mix`: A∧B → A∨B, the identity on leaves.
pub fn mix(a: &AbstractProp, b: &AbstractProp) -> Result<Morphism> {
    let source = a.product(b)?;
    let target = a.sum(b);
    let pairs = (0..source.leaf_count()).map(|i| (i, i)).collect();
    Ok(Morphism::from_parts(source, target, pairs))
}

/// Mix as the composite A∧B → A∧(Z∨B) → (A∧Z)∨(A∧B) → A∨B through an
/// auxiliary nonempty proposition Z. Equal to `mix(a, b)` for every choice
/// of Z.
pub fn mix_via_z(a: &AbstractProp, b: &AbstractProp, z: &AbstractProp) -> Result<Morphism> {
    if z.leaf_count() == 0 {
        return Err(Error::Shape("auxiliary proposition must be nonempty".to_string()));
    }
    let step1 = and_par(&Morphism::identity(a), &injection(z, b, Side::Right)?)?;
    let step2 = distribution(a, z, b)?;
    let step3 = or_par(&projection(a, z, Side::Left)?, &projection(a, b, Side::Right)?)?;
    step1.compose(&step2)?.compose(&step3)
}

/// The label-respecting pair space between two propositions, with the
/// per-pair bookkeeping needed to judge many subsets quickly. Subsets are
/// given as bitmasks over the candidate list.
pub struct CandidateSpace {
    source: AbstractProp,
    target: AbstractProp,
    cands: Vec<(usize, usize)>,
    src_res: Vec<u32>,
    tgt_res: Vec<u32>,
    src_cores: Vec<u32>,
    tgt_cores: Vec<u32>,
    src_res_sorted: Vec<u32>,
    tgt_cores_sorted: Vec<u32>,
    cand_src_bit: Vec<u32>,
    in_tgt_res: Vec<u32>,
    cand_tgt_bit: Vec<u32>,
    in_src_core: Vec<u32>,
}

impl CandidateSpace {
    pub fn new(a: &AbstractProp, b: &AbstractProp) -> Result<CandidateSpace> {
        let mut cands = Vec::new();
        for x in 0..a.leaf_count() {
            for y in 0..b.leaf_count() {
                if a.label(x) == b.label(y) {
                    cands.push((x, y));
                }
            }
        }
        if cands.len() > 32 {
            return Err(Error::Bound {
                what: "label-respecting pair count",
                limit: 32,
                actual: cands.len(),
            });
        }
        let src_res: Vec<u32> = a.resolutions().iter().map(|r| r.bits()).collect();
        let tgt_res: Vec<u32> = b.resolutions().iter().map(|r| r.bits()).collect();
        let src_cores: Vec<u32> = a.coresolutions()?.iter().map(|r| r.bits()).collect();
        let tgt_cores: Vec<u32> = b.coresolutions()?.iter().map(|r| r.bits()).collect();
        let mut src_res_sorted = src_res.clone();
        src_res_sorted.sort_unstable();
        let mut tgt_cores_sorted = tgt_cores.clone();
        tgt_cores_sorted.sort_unstable();

        let cand_src_bit: Vec<u32> = cands.iter().map(|&(x, _)| 1u32 << x).collect();
        let cand_tgt_bit: Vec<u32> = cands.iter().map(|&(_, y)| 1u32 << y).collect();
        let in_tgt_res: Vec<u32> = tgt_res
            .iter()
            .map(|t| {
                cands
                    .iter()
                    .enumerate()
                    .filter(|(_, &(_, y))| t >> y & 1 == 1)
                    .fold(0u32, |acc, (i, _)| acc | 1 << i)
            })
            .collect();
        let in_src_core: Vec<u32> = src_cores
            .iter()
            .map(|s| {
                cands
                    .iter()
                    .enumerate()
                    .filter(|(_, &(x, _))| s >> x & 1 == 1)
                    .fold(0u32, |acc, (i, _)| acc | 1 << i)
            })
            .collect();
        Ok(CandidateSpace {
            source: a.clone(),
            target: b.clone(),
            cands,
            src_res,
            tgt_res,
            src_cores,
            tgt_cores,
            src_res_sorted,
            tgt_cores_sorted,
            cand_src_bit,
            in_tgt_res,
            cand_tgt_bit,
            in_src_core,
        })
    }

    pub fn candidate_count(&self) -> usize {
        self.cands.len()
    }

    pub fn candidates(&self) -> &[(usize, usize)] {
        &self.cands
    }

    pub fn relation(&self, mask: u32) -> BTreeSet<(usize, usize)> {
        self.cands
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect()
    }

    pub fn morphism(&self, mask: u32) -> Morphism {
        Morphism::from_parts(self.source.clone(), self.target.clone(), self.relation(mask))
    }

    fn fold_bits(selected: u32, bits: &[u32]) -> u32 {
        let mut acc = 0u32;
        let mut rest = selected;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc |= bits[i];
        }
        acc
    }

    pub fn strict(&self, mask: u32) -> bool {
        for (ti, _) in self.tgt_res.iter().enumerate() {
            let pre = Self::fold_bits(mask & self.in_tgt_res[ti], &self.cand_src_bit);
            if self.src_res_sorted.binary_search(&pre).is_err() {
                return false;
            }
        }
        for (si, _) in self.src_cores.iter().enumerate() {
            let img = Self::fold_bits(mask & self.in_src_core[si], &self.cand_tgt_bit);
            if self.tgt_cores_sorted.binary_search(&img).is_err() {
                return false;
            }
        }
        true
    }

    pub fn lax(&self, mask: u32) -> bool {
        for (ti, _) in self.tgt_res.iter().enumerate() {
            let pre = Self::fold_bits(mask & self.in_tgt_res[ti], &self.cand_src_bit);
            if !self.src_res.iter().any(|&s| s & !pre == 0) {
                return false;
            }
        }
        for (si, _) in self.src_cores.iter().enumerate() {
            let img = Self::fold_bits(mask & self.in_src_core[si], &self.cand_tgt_bit);
            if !self.tgt_cores.iter().any(|&t| t & !img == 0) {
                return false;
            }
        }
        true
    }

    pub fn strict_edge(&self, mask: u32) -> bool {
        for &core in &self.in_src_core {
            for &res in &self.in_tgt_res {
                if (mask & core & res).count_ones() != 1 {
                    return false;
                }
            }
        }
        true
    }

    pub fn lax_edge(&self, mask: u32) -> bool {
        for &core in &self.in_src_core {
            for &res in &self.in_tgt_res {
                if mask & core & res == 0 {
                    return false;
                }
            }
        }
        true
    }

    pub fn check(&self, mask: u32, condition: Condition) -> bool {
        match condition {
            Condition::Strict => self.strict(mask),
            Condition::StrictEdge => self.strict_edge(mask),
            Condition::Lax => self.lax(mask),
            Condition::LaxEdge => self.lax_edge(mask),
        }
    }
}

/// Every relation between the two propositions that satisfies the condition,
/// in canonical order.
pub fn enumerate(
    a: &AbstractProp,
    b: &AbstractProp,
    condition: Condition,
) -> Result<Vec<Morphism>> {
    let space = CandidateSpace::new(a, b)?;
    let k = space.candidate_count();
    if k > MAX_ENUMERATION_PAIRS {
        return Err(Error::Bound {
            what: "enumeration candidate pairs",
            limit: MAX_ENUMERATION_PAIRS,
            actual: k,
        });
    }
    let mut found = Vec::new();
    for mask in 0..1u64 << k {
        if space.check(mask as u32, condition) {
            found.push(space.morphism(mask as u32));
        }
    }
    found.sort_by(|m, n| m.pairs.cmp(&n.pairs));
    Ok(found)
}

/// Factors a lax m: A∧(B∨C) → D through the distribution
/// d: A∧(B∨C) → (A∧B)∨(A∧C), duplicating the pairs out of every A-leaf.
/// The returned residual satisfies `d; residual = m`.
pub fn factor_distribution(
    m: &Morphism,
    a: &AbstractProp,
    b: &AbstractProp,
    c: &AbstractProp,
) -> Result<Morphism> {
    let expected = a.product(&b.sum(c))?;
    if m.source != expected {
        return Err(Error::Shape(
            "source is not the product of A with the sum of B and C".to_string(),
        ));
    }
    if !m.check_lax()? {
        return Err(Error::Condition("morphism is not lax".to_string()));
    }
    let (na, nb) = (a.leaf_count(), b.leaf_count());
    let residual_source = a.product(b)?.sum(&a.product(c)?);
    // Residual source leaves run [A, B, A-copy, C]; a C-leaf at source
    // position x lands at x + |A|.
    let mut pairs = BTreeSet::new();
    for &(x, y) in m.pairs() {
        if x < na {
            pairs.insert((x, y));
            pairs.insert((na + nb + x, y));
        } else if x < na + nb {
            pairs.insert((x, y));
        } else {
            pairs.insert((x + na, y));
        }
    }
    Ok(Morphism::from_parts(
        residual_source,
        m.target.clone(),
        pairs,
    ))
}

/// How a lax morphism from a pure product to a pure sum factors one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MixSoftFactor {
    /// The identity on a single leaf; nothing to do.
    IdentityLeaf,
    /// A source leaf is unrelated: `projection; residual` recovers the
    /// morphism.
    ThroughProjection {
        dropped: usize,
        projection: Morphism,
        residual: Morphism,
    },
    /// A target leaf is unrelated: `residual; injection` recovers the
    /// morphism.
    ThroughInjection {
        dropped: usize,
        injection: Morphism,
        residual: Morphism,
    },
    /// Every leaf is related: `mix; residual` (source split) or
    /// `residual; mix` (target split) recovers the morphism.
    ThroughMix {
        split_source: bool,
        mix: Morphism,
        residual: Morphism,
    },
}

fn pure_product_of(leaves: Vec<Literal>) -> AbstractProp {
    let res = (0..leaves.len()).map(LeafSet::singleton).collect();
    AbstractProp::from_parts(leaves, res)
}

fn pure_sum_of(leaves: Vec<Literal>) -> AbstractProp {
    let n = leaves.len();
    let mut res = BTreeSet::new();
    res.insert(LeafSet::full(n));
    AbstractProp::from_parts(leaves, res)
}

/// One factorisation step for a lax morphism from a pure product to a pure
/// sum: drop an unrelated leaf through a projection or injection (sources
/// first, lowest id first), or split off the first leaf through mix.
pub fn mix_soft_factor(m: &Morphism) -> Result<MixSoftFactor> {
    if !m.source.is_pure_product() {
        return Err(Error::Shape("source is not a pure product".to_string()));
    }
    if !m.target.is_pure_sum() {
        return Err(Error::Shape("target is not a pure sum".to_string()));
    }
    if !m.check_lax()? {
        return Err(Error::Condition("morphism is not lax".to_string()));
    }
    let (ns, nt) = (m.source.leaf_count(), m.target.leaf_count());
    let covered_src: BTreeSet<usize> = m.pairs.iter().map(|&(x, _)| x).collect();
    let covered_tgt: BTreeSet<usize> = m.pairs.iter().map(|&(_, y)| y).collect();

    if let Some(dropped) = (0..ns).find(|i| !covered_src.contains(i)) {
        let kept: Vec<Literal> = (0..ns)
            .filter(|&i| i != dropped)
            .map(|i| m.source.label(i).clone())
            .collect();
        let reduced = pure_product_of(kept);
        let reindex = |x: usize| if x < dropped { x } else { x - 1 };
        let proj_pairs = (0..ns)
            .filter(|&i| i != dropped)
            .map(|i| (i, reindex(i)))
            .collect();
        let projection = Morphism::from_parts(m.source.clone(), reduced.clone(), proj_pairs);
        let res_pairs = m.pairs.iter().map(|&(x, y)| (reindex(x), y)).collect();
        let residual = Morphism::from_parts(reduced, m.target.clone(), res_pairs);
        return Ok(MixSoftFactor::ThroughProjection {
            dropped,
            projection,
            residual,
        });
    }
    if let Some(dropped) = (0..nt).find(|j| !covered_tgt.contains(j)) {
        let kept: Vec<Literal> = (0..nt)
            .filter(|&j| j != dropped)
            .map(|j| m.target.label(j).clone())
            .collect();
        let reduced = pure_sum_of(kept);
        let reindex = |y: usize| if y < dropped { y } else { y - 1 };
        let inj_pairs = (0..nt)
            .filter(|&j| j != dropped)
            .map(|j| (reindex(j), j))
            .collect();
        let injection = Morphism::from_parts(reduced.clone(), m.target.clone(), inj_pairs);
        let res_pairs = m.pairs.iter().map(|&(x, y)| (x, reindex(y))).collect();
        let residual = Morphism::from_parts(m.source.clone(), reduced, res_pairs);
        return Ok(MixSoftFactor::ThroughInjection {
            dropped,
            injection,
            residual,
        });
    }
    if ns == 1 && nt == 1 {
        return Ok(MixSoftFactor::IdentityLeaf);
    }
    if ns > 1 {
        let head = pure_product_of(vec![m.source.label(0).clone()]);
        let tail = pure_product_of(m.source.leaves()[1..].to_vec());
        let mix_m = mix(&head, &tail)?;
        let residual = Morphism::from_parts(head.sum(&tail), m.target.clone(), m.pairs.clone());
        Ok(MixSoftFactor::ThroughMix {
            split_source: true,
            mix: mix_m,
            residual,
        })
    } else {
        let head = pure_sum_of(vec![m.target.label(0).clone()]);
        let tail = pure_sum_of(m.target.leaves()[1..].to_vec());
        let mix_m = mix(&head, &tail)?;
        let residual = Morphism::from_parts(m.source.clone(), head.product(&tail)?, m.pairs.clone());
        Ok(MixSoftFactor::ThroughMix {
            split_source: false,
            mix: mix_m,
            residual,
        })
    }
}

/// How a strict A∧B → C∨D avoids one of its four corners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SoftnessWitness {
    /// No pair leaves the other factor: `projection; residual` recovers the
    /// morphism.
    Projection {
        side: Side,
        projection: Morphism,
        residual: Morphism,
    },
    /// No pair lands in the other summand: `residual; injection` recovers
    /// the morphism.
    Injection {
        side: Side,
        injection: Morphism,
        residual: Morphism,
    },
}

/// Exhibits softness for a strict m: A∧B → C∨D: all pairs leave a single
/// factor or land in a single summand. Preference order: projection before
/// injection, left before right.
///
/// Between constant-free compiled propositions a strict morphism always
/// avoids a side: edges A–C and B–D together would put two pairs into one
/// coresolution × resolution rectangle. That argument needs every leaf to
/// sit in some resolution and some coresolution, so it does not extend to
/// unit-degenerate propositions (a summand with an empty resolution family
/// leaves the sum without resolutions, and every leaf subset of the target
/// is then a coresolution); for those the error is reachable and reports
/// that no factoring exists.
pub fn softness_witness(
    m: &Morphism,
    a: &AbstractProp,
    b: &AbstractProp,
    c: &AbstractProp,
    d: &AbstractProp,
) -> Result<SoftnessWitness> {
    if m.source != a.product(b)? {
        return Err(Error::Shape("source is not A∧B".to_string()));
    }
    if m.target != c.sum(d) {
        return Err(Error::Shape("target is not C∨D".to_string()));
    }
    if !m.check_strict()? {
        return Err(Error::Condition("morphism is not strict".to_string()));
    }
    let na = a.leaf_count();
    let nc = c.leaf_count();
    if m.pairs.iter().all(|&(x, _)| x < na) {
        let residual = Morphism::from_parts(a.clone(), m.target.clone(), m.pairs.clone());
        return Ok(SoftnessWitness::Projection {
            side: Side::Left,
            projection: projection(a, b, Side::Left)?,
            residual,
        });
    }
    if m.pairs.iter().all(|&(x, _)| x >= na) {
        let pairs = m.pairs.iter().map(|&(x, y)| (x - na, y)).collect();
        let residual = Morphism::from_parts(b.clone(), m.target.clone(), pairs);
        return Ok(SoftnessWitness::Projection {
            side: Side::Right,
            projection: projection(a, b, Side::Right)?,
            residual,
        });
    }
    if m.pairs.iter().all(|&(_, y)| y < nc) {
        let residual = Morphism::from_parts(m.source.clone(), c.clone(), m.pairs.clone());
        return Ok(SoftnessWitness::Injection {
            side: Side::Left,
            injection: injection(c, d, Side::Left)?,
            residual,
        });
    }
    if m.pairs.iter().all(|&(_, y)| y >= nc) {
        let pairs = m.pairs.iter().map(|&(x, y)| (x, y - nc)).collect();
        let residual = Morphism::from_parts(m.source.clone(), d.clone(), pairs);
        return Ok(SoftnessWitness::Injection {
            side: Side::Right,
            injection: injection(c, d, Side::Right)?,
            residual,
        });
    }
    Err(Error::Internal(
        "strict morphism touches both factors and both summands".to_string(),
    ))
}
