//! Shared fixtures for the integration suites: compiled-proposition
//! families, independent brute-force oracles, and seeded random generators.

#![allow(dead_code)]
// The coresolution cache inside AbstractProp is interior-mutable but takes
// no part in comparisons, so set membership stays stable.
#![allow(clippy::mutable_key_type)]

use std::collections::BTreeSet;

use orthoprop::absprop::{compile, AbstractProp, LeafSet};
use orthoprop::formula::{and, lit, nlit, or, Formula};
use orthoprop::morphism::Morphism;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn prop(text: &str) -> AbstractProp {
    compile(&Formula::parse(text).unwrap()).unwrap()
}

/// Deterministic rng; `SEED` in the environment overrides the default.
pub fn rng(default_seed: u64) -> ChaCha8Rng {
    let seed = std::env::var("SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(default_seed);
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every proposition reachable from literals and units by sums and products
/// within the leaf budget. This is exactly the set of compiled propositions
/// over those atoms, since compilation is a fold of sums and products.
pub fn compiled_family(atoms: &[&str], max_leaves: usize) -> Vec<AbstractProp> {
    let mut family: BTreeSet<AbstractProp> = BTreeSet::new();
    family.insert(AbstractProp::unit_true());
    family.insert(AbstractProp::unit_false());
    for atom in atoms {
        family.insert(prop(atom));
        family.insert(prop(&format!("~{atom}")));
    }
    let mut frontier: Vec<AbstractProp> = family.iter().cloned().collect();
    while !frontier.is_empty() {
        let known: Vec<AbstractProp> = family.iter().cloned().collect();
        let mut next = Vec::new();
        let mut add = |family: &mut BTreeSet<AbstractProp>, p: AbstractProp| {
            if family.insert(p.clone()) {
                next.push(p);
            }
        };
        for a in &frontier {
            for b in &known {
                if a.leaf_count() + b.leaf_count() <= max_leaves {
                    add(&mut family, a.sum(b));
                    add(&mut family, a.product(b).unwrap());
                    add(&mut family, b.sum(a));
                    add(&mut family, b.product(a).unwrap());
                }
            }
        }
        frontier = next;
    }
    family.into_iter().collect()
}

/// Like [`compiled_family`] but without the units, so every member has a
/// nonempty resolution family and fully covered leaves. This is the constant
/// free fragment, where the softness argument applies.
pub fn constant_free_family(atoms: &[&str], max_leaves: usize) -> Vec<AbstractProp> {
    let mut family: BTreeSet<AbstractProp> = BTreeSet::new();
    for atom in atoms {
        family.insert(prop(atom));
        family.insert(prop(&format!("~{atom}")));
    }
    let mut frontier: Vec<AbstractProp> = family.iter().cloned().collect();
    while !frontier.is_empty() {
        let known: Vec<AbstractProp> = family.iter().cloned().collect();
        let mut next = Vec::new();
        let mut add = |family: &mut BTreeSet<AbstractProp>, p: AbstractProp| {
            if family.insert(p.clone()) {
                next.push(p);
            }
        };
        for a in &frontier {
            for b in &known {
                if a.leaf_count() + b.leaf_count() <= max_leaves {
                    add(&mut family, a.sum(b));
                    add(&mut family, a.product(b).unwrap());
                    add(&mut family, b.sum(a));
                    add(&mut family, b.product(a).unwrap());
                }
            }
        }
        frontier = next;
    }
    family.into_iter().collect()
}

/// Brute-force orthogonal of a family: every subset of the leaf space that
/// meets each member in exactly one point.
pub fn oracle_orthogonal(n: usize, sets: &BTreeSet<LeafSet>) -> BTreeSet<LeafSet> {
    assert!(n <= 22);
    let mut out = BTreeSet::new();
    for bits in 0..(1u32 << n) {
        let t = LeafSet::from_bits(bits);
        if sets.iter().all(|s| s.intersection(t).len() == 1) {
            out.insert(t);
        }
    }
    out
}

/// The label-respecting pair candidates between two propositions.
pub fn candidates(a: &AbstractProp, b: &AbstractProp) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..a.leaf_count() {
        for j in 0..b.leaf_count() {
            if a.label(i) == b.label(j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// The edge conditions on rectangles, recomputed from scratch: for each
/// coresolution `c` of the source (via the brute-force orthogonal) and each
/// resolution `r` of the target, count the related pairs inside `c × r`.
/// Returns (every rectangle holds exactly one, every rectangle holds at
/// least one).
pub fn oracle_edge_conditions(
    source: &AbstractProp,
    target: &AbstractProp,
    pairs: &BTreeSet<(usize, usize)>,
) -> (bool, bool) {
    let cores = oracle_orthogonal(source.leaf_count(), source.resolutions());
    let mut exactly = true;
    let mut at_least = true;
    for c in &cores {
        for r in target.resolutions() {
            let count = pairs
                .iter()
                .filter(|&&(x, y)| c.contains(x) && r.contains(y))
                .count();
            exactly &= count == 1;
            at_least &= count >= 1;
        }
    }
    (exactly, at_least)
}

/// A random subset of the label-respecting candidates; `density` is the
/// per-pair keep probability.
pub fn random_relation(
    rng: &mut ChaCha8Rng,
    a: &AbstractProp,
    b: &AbstractProp,
    density: f64,
) -> Morphism {
    let pairs: BTreeSet<(usize, usize)> = candidates(a, b)
        .into_iter()
        .filter(|_| rng.gen_bool(density))
        .collect();
    Morphism::new(a.clone(), b.clone(), pairs).unwrap()
}

/// A random formula tree with leaves drawn from the atoms (both polarities)
/// and the units.
pub fn random_formula(rng: &mut ChaCha8Rng, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..=atoms.len() * 2 + 1) {
            0 => Formula::True,
            1 => Formula::False,
            k => {
                let atom = atoms[(k - 2) / 2];
                if k % 2 == 0 {
                    lit(atom)
                } else {
                    nlit(atom)
                }
            }
        };
    }
    let left = random_formula(rng, atoms, depth - 1);
    let right = random_formula(rng, atoms, depth - 1);
    if rng.gen_bool(0.5) {
        and(left, right)
    } else {
        or(left, right)
    }
}

pub fn random_literal(rng: &mut impl Rng) -> orthoprop::formula::Literal {
    let atom = ["p", "q", "r"].choose(rng).unwrap();
    orthoprop::formula::Literal::new(atom, rng.gen_bool(0.5)).unwrap()
}

/// Right fold of literal props under the product, so the resolutions are
/// exactly the singletons.
pub fn random_pure_product(rng: &mut impl Rng, len: usize) -> AbstractProp {
    (0..len).fold(AbstractProp::unit_true(), |acc, _| {
        acc.product(&AbstractProp::literal(random_literal(rng))).unwrap()
    })
}

/// Right fold of literal props under the sum, so the full leaf set is the
/// only resolution.
pub fn random_pure_sum(rng: &mut impl Rng, len: usize) -> AbstractProp {
    (0..len).fold(AbstractProp::unit_false(), |acc, _| {
        acc.sum(&AbstractProp::literal(random_literal(rng)))
    })
}
