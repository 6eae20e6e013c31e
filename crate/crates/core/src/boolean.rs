//! Three ways to organise proofs into a category: against one ambient stock
//! of axioms, carrying axioms and cuts along in the proof itself, or as bare
//! linkings composed by chasing alternating paths.

use std::collections::BTreeSet;

use crate::absprop::AbstractProp;
use crate::error::{Error, Result};
use crate::formula::Literal;
use crate::morphism::{
    and_par, copairing, injection, linear_distribution, or_par, pairing, projection,
    CandidateSpace, Morphism, Side, MAX_ENUMERATION_PAIRS,
};

pub const MAX_CONTEXT_ATOMS: usize = 8;

/// `p∨~p` as an abstract proposition: leaves `[p, ~p]`, one resolution.
pub fn axiom_for(atom: &str) -> Result<AbstractProp> {
    let pos = AbstractProp::literal(Literal::positive(atom)?);
    let neg = AbstractProp::literal(Literal::negative(atom)?);
    Ok(pos.sum(&neg))
}

/// `~p∧p` as an abstract proposition: the negation of [`axiom_for`], leaves
/// `[~p, p]` and a resolution per leaf.
pub fn cut_for(atom: &str) -> Result<AbstractProp> {
    axiom_for(atom)?.neg()
}

/// Product of the axioms named by `atoms`, in order; `1` when empty.
pub fn axiom_product<S: AsRef<str>>(atoms: &[S]) -> Result<AbstractProp> {
    let mut acc = AbstractProp::unit_true();
    for atom in atoms {
        acc = acc.product(&axiom_for(atom.as_ref())?)?;
    }
    Ok(acc)
}

/// Sum of the cuts named by `atoms`, in order; `0` when empty.
pub fn cut_sum<S: AsRef<str>>(atoms: &[S]) -> Result<AbstractProp> {
    let mut acc = AbstractProp::unit_false();
    for atom in atoms {
        acc = acc.sum(&cut_for(atom.as_ref())?);
    }
    Ok(acc)
}

/// A fixed stock of axioms: `AX` is the product of `p∨~p` over the listed
/// atoms and `CUT` is its negation. Proofs over the context are judged
/// against these two propositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalContext {
    atoms: Vec<String>,
    ax: AbstractProp,
    cut: AbstractProp,
}

impl UniversalContext {
    pub fn new<S: AsRef<str>>(atoms: &[S]) -> Result<UniversalContext> {
        if atoms.is_empty() {
            return Err(Error::Shape("context needs at least one atom".to_string()));
        }
        if atoms.len() > MAX_CONTEXT_ATOMS {
            return Err(Error::Bound {
                what: "context atoms",
                limit: MAX_CONTEXT_ATOMS,
                actual: atoms.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for atom in atoms {
            if !seen.insert(atom.as_ref()) {
                return Err(Error::Shape(format!(
                    "duplicate context atom `{}`",
                    atom.as_ref()
                )));
            }
        }
        let ax = axiom_product(atoms)?;
        let cut = ax.neg()?;
        Ok(UniversalContext {
            atoms: atoms.iter().map(|a| a.as_ref().to_string()).collect(),
            ax,
            cut,
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn ax(&self) -> &AbstractProp {
        &self.ax
    }

    pub fn cut(&self) -> &AbstractProp {
        &self.cut
    }
}

/// A proof of `B` from `A` over a universal context: a relation
/// `AX∧A → B∨CUT`, judged by the lax condition via [`BuMorphism::check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuMorphism {
    ctx: UniversalContext,
    source: AbstractProp,
    target: AbstractProp,
    body: Morphism,
}

impl BuMorphism {
    /// Validates that the body runs `AX∧source → target∨CUT`.
    pub fn new(
        ctx: UniversalContext,
        source: AbstractProp,
        target: AbstractProp,
        body: Morphism,
    ) -> Result<BuMorphism> {
        let expected_src = ctx.ax.product(&source)?;
        let expected_tgt = target.sum(&ctx.cut);
        if *body.source() != expected_src {
            return Err(Error::ObjectMismatch(
                "body source is not AX∧A".to_string(),
            ));
        }
        if *body.target() != expected_tgt {
            return Err(Error::ObjectMismatch(
                "body target is not B∨CUT".to_string(),
            ));
        }
        Ok(BuMorphism {
            ctx,
            source,
            target,
            body,
        })
    }

    pub fn context(&self) -> &UniversalContext {
        &self.ctx
    }

    pub fn source(&self) -> &AbstractProp {
        &self.source
    }

    pub fn target(&self) -> &AbstractProp {
        &self.target
    }

    pub fn body(&self) -> &Morphism {
        &self.body
    }

    /// Lax condition on the body.
    pub fn check(&self) -> Result<bool> {
        self.body.check_lax()
    }
}

/// Identity on `A`: the body relates each `A`-leaf of `AX∧A` to its copy in
/// `A∨CUT` and touches neither `AX` nor `CUT`.
pub fn bu_id(ctx: &UniversalContext, a: &AbstractProp) -> Result<BuMorphism> {
    let nax = ctx.ax.leaf_count();
    let pairs = (0..a.leaf_count()).map(|i| (nax + i, i)).collect();
    let body = Morphism::new(ctx.ax.product(a)?, a.sum(&ctx.cut), pairs)?;
    BuMorphism::new(ctx.clone(), a.clone(), a.clone(), body)
}

/// Composition over a shared context. The axioms are copied into both halves
/// by the pairing with `π₁`, the linear distribution regroups, and the
/// copairing with `ι₂` forwards cuts already spent by `f`:
/// `⟨π₁,f⟩ ; l ; [g,ι₂]`.
pub fn bu_compose(f: &BuMorphism, g: &BuMorphism) -> Result<BuMorphism> {
    if f.ctx != g.ctx {
        return Err(Error::ObjectMismatch(
            "composition needs a shared context".to_string(),
        ));
    }
    if f.target != g.source {
        return Err(Error::ObjectMismatch(
            "target of the first proof differs from source of the second".to_string(),
        ));
    }
    let ctx = &f.ctx;
    let step1 = pairing(&projection(&ctx.ax, &f.source, Side::Left)?, &f.body)?;
    let step2 = linear_distribution(&ctx.ax, &f.target, &ctx.cut)?;
    let step3 = copairing(&g.body, &injection(&g.target, &ctx.cut, Side::Right)?)?;
    let body = step1.compose(&step2)?.compose(&step3)?;
    BuMorphism::new(ctx.clone(), f.source.clone(), g.target.clone(), body)
}

/// Searches for a proof `1 → a` over the context: first the full
/// label-respecting relation from `AX` into `a` alone, then every relation
/// `AX∧1 → a∨CUT` if that guess fails. `None` means the whole space was
/// swept without finding a lax body.
pub fn witness_proof(ctx: &UniversalContext, a: &AbstractProp) -> Result<Option<BuMorphism>> {
    let src = ctx.ax.product(&AbstractProp::unit_true())?;
    let tgt = a.sum(&ctx.cut);

    let mut pairs = BTreeSet::new();
    for i in 0..ctx.ax.leaf_count() {
        for j in 0..a.leaf_count() {
            if ctx.ax.label(i) == a.label(j) {
                pairs.insert((i, j));
            }
        }
    }
    let guess = Morphism::new(src.clone(), tgt.clone(), pairs)?;
    if guess.check_lax()? {
        let proof = BuMorphism::new(ctx.clone(), AbstractProp::unit_true(), a.clone(), guess)?;
        return Ok(Some(proof));
    }

    let space = CandidateSpace::new(&src, &tgt)?;
    let k = space.candidate_count();
    if k > MAX_ENUMERATION_PAIRS {
        return Err(Error::Bound {
            what: "proof search candidate pairs",
            limit: MAX_ENUMERATION_PAIRS,
            actual: k,
        });
    }
    for mask in 0..1u64 << k {
        if space.lax(mask as u32) {
            let body = space.morphism(mask as u32);
            let proof =
                BuMorphism::new(ctx.clone(), AbstractProp::unit_true(), a.clone(), body)?;
            return Ok(Some(proof));
        }
    }
    Ok(None)
}

/// A proof of `B` from `A` that carries its own resources: a relation
/// `P∧A → B∨S` where `P` is the product of the listed axioms and `S` the sum
/// of the listed cuts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaMorphism {
    source: AbstractProp,
    target: AbstractProp,
    axioms: Vec<String>,
    cuts: Vec<String>,
    body: Morphism,
}

impl BaMorphism {
    /// Validates that the body runs `P∧source → target∨S` for the lists
    /// given.
    pub fn new(
        source: AbstractProp,
        target: AbstractProp,
        axioms: Vec<String>,
        cuts: Vec<String>,
        body: Morphism,
    ) -> Result<BaMorphism> {
        let expected_src = axiom_product(&axioms)?.product(&source)?;
        let expected_tgt = target.sum(&cut_sum(&cuts)?);
        if *body.source() != expected_src {
            return Err(Error::ObjectMismatch(
                "body source is not the axiom product with A".to_string(),
            ));
        }
        if *body.target() != expected_tgt {
            return Err(Error::ObjectMismatch(
                "body target is not B with the cut sum".to_string(),
            ));
        }
        Ok(BaMorphism {
            source,
            target,
            axioms,
            cuts,
            body,
        })
    }

    pub fn source(&self) -> &AbstractProp {
        &self.source
    }

    pub fn target(&self) -> &AbstractProp {
        &self.target
    }

    pub fn axioms(&self) -> &[String] {
        &self.axioms
    }

    pub fn cuts(&self) -> &[String] {
        &self.cuts
    }

    pub fn body(&self) -> &Morphism {
        &self.body
    }

    /// Lax condition on the body.
    pub fn check(&self) -> Result<bool> {
        self.body.check_lax()
    }
}

/// Identity on `A` with empty axiom and cut lists; `1∧A` and `A∨0` collapse
/// to `A`, so the body is the identity relation.
pub fn ba_id(a: &AbstractProp) -> Result<BaMorphism> {
    BaMorphism::new(
        a.clone(),
        a.clone(),
        Vec::new(),
        Vec::new(),
        Morphism::identity(a),
    )
}

/// Composition that concatenates resources: the composite uses `g`'s axioms
/// and cuts first, then `f`'s. The body is
/// `id∧f ; l ; g∨id` read between the regrouped endpoints, which match
/// because products and sums associate on the nose.
pub fn ba_compose(f: &BaMorphism, g: &BaMorphism) -> Result<BaMorphism> {
    if f.target != g.source {
        return Err(Error::ObjectMismatch(
            "target of the first proof differs from source of the second".to_string(),
        ));
    }
    let p_g = axiom_product(&g.axioms)?;
    let s_f = cut_sum(&f.cuts)?;
    let step1 = and_par(&Morphism::identity(&p_g), &f.body)?;
    let step2 = linear_distribution(&p_g, &f.target, &s_f)?;
    let step3 = or_par(&g.body, &Morphism::identity(&s_f))?;
    let body = step1.compose(&step2)?.compose(&step3)?;

    let mut axioms = g.axioms.clone();
    axioms.extend(f.axioms.iter().cloned());
    let mut cuts = g.cuts.clone();
    cuts.extend(f.cuts.iter().cloned());
    BaMorphism::new(f.source.clone(), g.target.clone(), axioms, cuts, body)
}

/// One edge of a linking, in source/target coordinates: `Cross` joins a
/// source leaf to a target leaf with the same label, the intra variants join
/// two dual leaves of one side. Read on `¬A∨B`, all three join dual leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Edge {
    Cross(usize, usize),
    SourceDual(usize, usize),
    TargetDual(usize, usize),
}

/// A proof of `B` from `A` presented with no relation at all: a set of edges
/// on the leaves of `¬A∨B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linking {
    source: AbstractProp,
    target: AbstractProp,
    edges: BTreeSet<Edge>,
}

impl Linking {
    /// Validates ranges and labels; intra edges are stored with the smaller
    /// leaf first.
    pub fn new(
        source: AbstractProp,
        target: AbstractProp,
        edges: BTreeSet<Edge>,
    ) -> Result<Linking> {
        let (na, nb) = (source.leaf_count(), target.leaf_count());
        let mut normalized = BTreeSet::new();
        for e in edges {
            let e = match e {
                Edge::SourceDual(i, j) if i > j => Edge::SourceDual(j, i),
                Edge::TargetDual(i, j) if i > j => Edge::TargetDual(j, i),
                e => e,
            };
            match e {
                Edge::Cross(i, j) => {
                    if i >= na || j >= nb {
                        return Err(Error::Shape(format!(
                            "edge ({i},{j}) outside {na}×{nb}"
                        )));
                    }
                    if source.label(i) != target.label(j) {
                        return Err(Error::Label(format!(
                            "cross edge relates `{}` to `{}`",
                            source.label(i),
                            target.label(j)
                        )));
                    }
                }
                Edge::SourceDual(i, j) => {
                    if i == j {
                        return Err(Error::Shape(format!("edge joins leaf {i} to itself")));
                    }
                    if j >= na {
                        return Err(Error::Shape(format!("source edge ({i},{j}) outside {na}")));
                    }
                    if !source.label(i).is_dual_of(source.label(j)) {
                        return Err(Error::Label(format!(
                            "source edge joins `{}` and `{}`",
                            source.label(i),
                            source.label(j)
                        )));
                    }
                }
                Edge::TargetDual(i, j) => {
                    if i == j {
                        return Err(Error::Shape(format!("edge joins leaf {i} to itself")));
                    }
                    if j >= nb {
                        return Err(Error::Shape(format!("target edge ({i},{j}) outside {nb}")));
                    }
                    if !target.label(i).is_dual_of(target.label(j)) {
                        return Err(Error::Label(format!(
                            "target edge joins `{}` and `{}`",
                            target.label(i),
                            target.label(j)
                        )));
                    }
                }
            }
            normalized.insert(e);
        }
        Ok(Linking {
            source,
            target,
            edges: normalized,
        })
    }

    /// One cross edge per leaf.
    pub fn identity(a: &AbstractProp) -> Linking {
        let edges = (0..a.leaf_count()).map(|i| Edge::Cross(i, i)).collect();
        Linking {
            source: a.clone(),
            target: a.clone(),
            edges,
        }
    }

    pub fn source(&self) -> &AbstractProp {
        &self.source
    }

    pub fn target(&self) -> &AbstractProp {
        &self.target
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    /// Correctness criterion: every resolution of `¬A∨B` contains both
    /// endpoints of some edge.
    pub fn check(&self) -> Result<bool> {
        let frame = self.source.neg()?.sum(&self.target);
        let na = self.source.leaf_count();
        for r in frame.resolutions() {
            let hit = self.edges.iter().any(|e| {
                let (u, v) = match *e {
                    Edge::Cross(i, j) => (i, na + j),
                    Edge::SourceDual(i, j) => (i, j),
                    Edge::TargetDual(i, j) => (na + i, na + j),
                };
                r.contains(u) && r.contains(v)
            });
            if !hit {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Composes by chasing walks through the middle object that strictly
    /// alternate between edges of `self` and edges of `g`; a walk joining
    /// two leaves outside the middle becomes one composite edge.
    /// Alternation is what keeps the endpoints of every such walk dual in
    /// `¬A∨C`, and walk concatenation is what makes this composition
    /// associative. Walks that die in the middle, alternating cycles, and
    /// walks returning to their own starting leaf contribute nothing.
    ///
    /// Implemented as reachability over states `(middle leaf, which linking
    /// moves next)`, one search per outer endpoint.
    pub fn compose(&self, g: &Linking) -> Result<Linking> {
        if self.target != g.source {
            return Err(Error::ObjectMismatch(
                "target of the first linking differs from source of the second".to_string(),
            ));
        }
        let nb = self.target.leaf_count();
        // Per middle leaf: outer ends reachable in one step, and middle
        // moves. An f move lands where g moves next and vice versa.
        let mut f_out: Vec<Vec<usize>> = vec![Vec::new(); nb];
        let mut f_mid: Vec<Vec<usize>> = vec![Vec::new(); nb];
        let mut g_out: Vec<Vec<usize>> = vec![Vec::new(); nb];
        let mut g_mid: Vec<Vec<usize>> = vec![Vec::new(); nb];
        let mut edges = BTreeSet::new();
        for e in &self.edges {
            match *e {
                Edge::Cross(a, b) => f_out[b].push(a),
                Edge::TargetDual(b, b2) => {
                    f_mid[b].push(b2);
                    f_mid[b2].push(b);
                }
                // Entirely inside A: already a complete walk.
                Edge::SourceDual(i, j) => {
                    edges.insert(Edge::SourceDual(i, j));
                }
            }
        }
        for e in &g.edges {
            match *e {
                Edge::Cross(b, c) => g_out[b].push(c),
                Edge::SourceDual(b, b2) => {
                    g_mid[b].push(b2);
                    g_mid[b2].push(b);
                }
                Edge::TargetDual(i, j) => {
                    edges.insert(Edge::TargetDual(i, j));
                }
            }
        }

        // States: (b, false) = an f edge moves next, (b, true) = a g edge
        // moves next.
        let reach = |seeds: Vec<(usize, bool)>| -> (BTreeSet<usize>, BTreeSet<usize>) {
            let mut seen = vec![[false; 2]; nb];
            let mut queue: Vec<(usize, bool)> = Vec::new();
            for (b, side) in seeds {
                if !seen[b][side as usize] {
                    seen[b][side as usize] = true;
                    queue.push((b, side));
                }
            }
            let (mut in_a, mut in_c) = (BTreeSet::new(), BTreeSet::new());
            while let Some((b, g_next)) = queue.pop() {
                let (out, mid) = if g_next {
                    (&g_out[b], &g_mid[b])
                } else {
                    (&f_out[b], &f_mid[b])
                };
                for &o in out {
                    if g_next {
                        in_c.insert(o);
                    } else {
                        in_a.insert(o);
                    }
                }
                for &b2 in mid {
                    if !seen[b2][(!g_next) as usize] {
                        seen[b2][(!g_next) as usize] = true;
                        queue.push((b2, !g_next));
                    }
                }
            }
            (in_a, in_c)
        };

        let mut a_seeds: Vec<Vec<(usize, bool)>> = vec![Vec::new(); self.source.leaf_count()];
        for e in &self.edges {
            if let Edge::Cross(a, b) = *e {
                a_seeds[a].push((b, true));
            }
        }
        for (a, seeds) in a_seeds.into_iter().enumerate() {
            if seeds.is_empty() {
                continue;
            }
            let (in_a, in_c) = reach(seeds);
            for a2 in in_a {
                if a2 != a {
                    edges.insert(Edge::SourceDual(a.min(a2), a.max(a2)));
                }
            }
            for c in in_c {
                edges.insert(Edge::Cross(a, c));
            }
        }
        let mut c_seeds: Vec<Vec<(usize, bool)>> = vec![Vec::new(); g.target.leaf_count()];
        for e in &g.edges {
            if let Edge::Cross(b, c) = *e {
                c_seeds[c].push((b, false));
            }
        }
        for (c, seeds) in c_seeds.into_iter().enumerate() {
            if seeds.is_empty() {
                continue;
            }
            let (_, in_c) = reach(seeds);
            for c2 in in_c {
                if c2 != c {
                    edges.insert(Edge::TargetDual(c.min(c2), c.max(c2)));
                }
            }
        }

        Linking::new(self.source.clone(), g.target.clone(), edges)
            .map_err(|e| Error::Internal(format!("composite linking invalid: {e}")))
    }
}

/// Composes and then insists that correctness survives: if both linkings
/// pass [`Linking::check`] but the composite does not, that is reported
/// rather than returned.
pub fn bl_compose_checked(f: &Linking, g: &Linking) -> Result<Linking> {
    let h = f.compose(g)?;
    if f.check()? && g.check()? && !h.check()? {
        return Err(Error::Preservation(
            "composite linking fails the correctness criterion".to_string(),
        ));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absprop::compile;
    use crate::formula::Formula;

    fn prop(text: &str) -> AbstractProp {
        compile(&Formula::parse(text).unwrap()).unwrap()
    }

    fn labels(p: &AbstractProp) -> Vec<String> {
        p.leaves().iter().map(|l| l.to_string()).collect()
    }

    #[test]
    fn context_shape() {
        let ctx = UniversalContext::new(&["p", "q"]).unwrap();
        assert_eq!(labels(ctx.ax()), ["p", "~p", "q", "~q"]);
        assert!(ctx.ax().is_true());
        assert_eq!(labels(ctx.cut()), ["~p", "p", "~q", "q"]);
        assert_eq!(ctx.ax().resolutions().len(), 2);
        // CUT resolutions are the transversals of the AX ones.
        assert_eq!(ctx.cut().resolutions().len(), 4);
    }

    #[test]
    fn context_limits() {
        assert!(matches!(
            UniversalContext::new::<&str>(&[]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            UniversalContext::new(&["p", "p"]),
            Err(Error::Shape(_))
        ));
        let nine: Vec<String> = (0..9).map(|i| format!("a{i}")).collect();
        assert!(matches!(
            UniversalContext::new(&nine),
            Err(Error::Bound { .. })
        ));
    }

    #[test]
    fn bu_id_is_lax() {
        let ctx = UniversalContext::new(&["p", "q"]).unwrap();
        for text in ["p", "p&q", "p|~q", "(p|~p)&q"] {
            let id = bu_id(&ctx, &prop(text)).unwrap();
            assert!(id.check().unwrap(), "bu_id on {text}");
        }
    }

    #[test]
    fn bu_unit_laws() {
        let ctx = UniversalContext::new(&["p"]).unwrap();
        let a = prop("p");
        let b = prop("p|~p");
        // A proof p → p∨~p: relate the p-leaf of AX∧A to the p-leaf of B.
        let body = Morphism::new(
            ctx.ax().product(&a).unwrap(),
            b.sum(ctx.cut()),
            [(2, 0)].into_iter().collect(),
        )
        .unwrap();
        let f = BuMorphism::new(ctx.clone(), a.clone(), b.clone(), body).unwrap();
        assert!(f.check().unwrap());
        assert_eq!(bu_compose(&bu_id(&ctx, &a).unwrap(), &f).unwrap(), f);
        assert_eq!(bu_compose(&f, &bu_id(&ctx, &b).unwrap()).unwrap(), f);
    }

    #[test]
    fn bu_compose_is_associative() {
        let ctx = UniversalContext::new(&["p"]).unwrap();
        let (a, b) = (prop("p"), prop("p|~p"));
        let f = bu_id(&ctx, &a).unwrap();
        let g = BuMorphism::new(
            ctx.clone(),
            a.clone(),
            b.clone(),
            Morphism::new(
                ctx.ax().product(&a).unwrap(),
                b.sum(ctx.cut()),
                [(2, 0)].into_iter().collect(),
            )
            .unwrap(),
        )
        .unwrap();
        let h = bu_id(&ctx, &b).unwrap();
        let left = bu_compose(&bu_compose(&f, &g).unwrap(), &h).unwrap();
        let right = bu_compose(&f, &bu_compose(&g, &h).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn witness_for_tautology() {
        let ctx = UniversalContext::new(&["p"]).unwrap();
        let proof = witness_proof(&ctx, &prop("p|~p")).unwrap().unwrap();
        assert!(proof.check().unwrap());
        // The full relation already works: both AX-leaves link over.
        assert_eq!(
            proof.body().pairs().iter().copied().collect::<Vec<_>>(),
            [(0, 0), (1, 1)]
        );
    }

    #[test]
    fn no_witness_for_non_tautology() {
        let ctx = UniversalContext::new(&["p"]).unwrap();
        assert!(witness_proof(&ctx, &prop("p")).unwrap().is_none());
        let ctx2 = UniversalContext::new(&["p", "q"]).unwrap();
        assert!(witness_proof(&ctx2, &prop("p|q")).unwrap().is_none());
    }

    #[test]
    fn witness_needs_matching_context() {
        // q∨~q is provable, but not from a context that only stocks p.
        let ctx = UniversalContext::new(&["p"]).unwrap();
        assert!(witness_proof(&ctx, &prop("q|~q")).unwrap().is_none());
        let ctx2 = UniversalContext::new(&["p", "q"]).unwrap();
        assert!(witness_proof(&ctx2, &prop("q|~q")).unwrap().is_some());
    }

    #[test]
    fn ba_resource_props() {
        assert_eq!(axiom_product::<&str>(&[]), Ok(AbstractProp::unit_true()));
        assert_eq!(cut_sum::<&str>(&[]), Ok(AbstractProp::unit_false()));
        let ctx = UniversalContext::new(&["p", "q"]).unwrap();
        assert_eq!(axiom_product(&["p", "q"]).unwrap(), *ctx.ax());
        assert_eq!(cut_sum(&["p", "q"]).unwrap(), *ctx.cut());
    }

    #[test]
    fn ba_id_and_units() {
        let a = prop("p&q");
        let id = ba_id(&a).unwrap();
        assert!(id.check().unwrap());

        // An axiom introduction 1 → p∨~p spending one axiom.
        let b = prop("p|~p");
        let f = BaMorphism::new(
            AbstractProp::unit_true(),
            b.clone(),
            vec!["p".to_string()],
            Vec::new(),
            Morphism::identity(&b),
        )
        .unwrap();
        assert!(f.check().unwrap());
        let left = ba_compose(&ba_id(&AbstractProp::unit_true()).unwrap(), &f).unwrap();
        let right = ba_compose(&f, &ba_id(&b).unwrap()).unwrap();
        assert_eq!(left, f);
        assert_eq!(right, f);
    }

    #[test]
    fn ba_compose_concatenates_resources() {
        let b = prop("p|~p");
        let f = BaMorphism::new(
            AbstractProp::unit_true(),
            b.clone(),
            vec!["p".to_string()],
            Vec::new(),
            Morphism::identity(&b),
        )
        .unwrap();
        // g: p∨~p → p∨~p through a fresh axiom on q that it ignores.
        let g = BaMorphism::new(
            b.clone(),
            b.clone(),
            vec!["q".to_string()],
            Vec::new(),
            Morphism::new(
                axiom_product(&["q"]).unwrap().product(&b).unwrap(),
                b.clone(),
                [(2, 0), (3, 1)].into_iter().collect(),
            )
            .unwrap(),
        )
        .unwrap();
        assert!(g.check().unwrap());
        let h = ba_compose(&f, &g).unwrap();
        assert_eq!(h.axioms(), ["q", "p"]);
        assert!(h.cuts().is_empty());
        assert!(h.check().unwrap());
        assert_eq!(*h.source(), AbstractProp::unit_true());
        assert_eq!(*h.target(), b);
    }

    #[test]
    fn linking_validation() {
        let p = prop("p");
        let q = prop("q");
        assert!(matches!(
            Linking::new(
                p.clone(),
                q.clone(),
                [Edge::Cross(0, 0)].into_iter().collect()
            ),
            Err(Error::Label(_))
        ));
        assert!(matches!(
            Linking::new(p.clone(), q, [Edge::Cross(0, 7)].into_iter().collect()),
            Err(Error::Shape(_))
        ));
        // Intra edges normalise to smaller-first.
        let ax = prop("p|~p");
        let l = Linking::new(
            AbstractProp::unit_true(),
            ax,
            [Edge::TargetDual(1, 0)].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(
            l.edges().iter().copied().collect::<Vec<_>>(),
            [Edge::TargetDual(0, 1)]
        );
        assert!(l.check().unwrap());
    }

    #[test]
    fn linking_identity_checks() {
        for text in ["p", "p&q", "p|~p", "(p|q)&~r"] {
            let id = Linking::identity(&prop(text));
            assert!(id.check().unwrap(), "identity linking on {text}");
        }
        // The empty linking between distinct atoms proves nothing.
        let none = Linking::new(prop("p"), prop("q"), BTreeSet::new()).unwrap();
        assert!(!none.check().unwrap());
    }

    #[test]
    fn linking_identity_composition() {
        let a = prop("p|~p");
        let id = Linking::identity(&a);
        assert_eq!(id.compose(&id).unwrap(), id);
    }

    #[test]
    fn zigzag_composes_to_one_edge() {
        // f matches p∨~p to itself; g closes it with one dual edge. The
        // three-edge alternating path leaves a single edge inside A.
        let a = prop("p|~p");
        let f = Linking::new(
            a.clone(),
            a.clone(),
            [Edge::Cross(0, 0), Edge::Cross(1, 1)].into_iter().collect(),
        )
        .unwrap();
        let g = Linking::new(
            a.clone(),
            AbstractProp::unit_true(),
            [Edge::SourceDual(0, 1)].into_iter().collect(),
        )
        .unwrap();
        let h = f.compose(&g).unwrap();
        assert_eq!(
            h.edges().iter().copied().collect::<Vec<_>>(),
            [Edge::SourceDual(0, 1)]
        );
        assert!(bl_compose_checked(&f, &g).unwrap().check().unwrap());
    }

    #[test]
    fn dead_end_paths_drop() {
        // f links into the middle but g never picks the path up.
        let p = prop("p");
        let f = Linking::new(
            p.clone(),
            p.clone(),
            [Edge::Cross(0, 0)].into_iter().collect(),
        )
        .unwrap();
        let g = Linking::new(p.clone(), prop("p&p"), BTreeSet::new()).unwrap();
        let h = f.compose(&g).unwrap();
        assert!(h.edges().is_empty());
    }

    #[test]
    fn axiom_linking_proves_excluded_middle() {
        let one = AbstractProp::unit_true();
        let ax = prop("p|~p");
        let l = Linking::new(
            one,
            ax,
            [Edge::TargetDual(0, 1)].into_iter().collect(),
        )
        .unwrap();
        assert!(l.check().unwrap());
    }
}
