//! JSON encoding for every value the command-line tool passes around.
//! Output is canonical: `serde_json` keeps object keys sorted, ids are
//! ascending, and edge lists come out in their stored order.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::absprop::{compile, AbstractProp, LeafSet};
use crate::boolean::{BaMorphism, BuMorphism, Edge, Linking, UniversalContext};
use crate::error::{Error, Result};
use crate::formula::{Formula, Literal};
use crate::morphism::Morphism;

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Json(format!("missing field `{key}`")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Json(format!("{what} must be an array")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::Json(format!("{what} must be a string")))
}

fn as_id(v: &Value, what: &str) -> Result<usize> {
    let n = v
        .as_u64()
        .ok_or_else(|| Error::Json(format!("{what} must be a non-negative integer")))?;
    usize::try_from(n).map_err(|_| Error::Json(format!("{what} does not fit")))
}

pub fn formula_to_json(f: &Formula) -> Value {
    match f {
        Formula::Lit(l) => json!({"op": "lit", "literal": l.to_string()}),
        Formula::True => json!({"op": "true"}),
        Formula::False => json!({"op": "false"}),
        Formula::And(l, r) => {
            json!({"op": "and", "left": formula_to_json(l), "right": formula_to_json(r)})
        }
        Formula::Or(l, r) => {
            json!({"op": "or", "left": formula_to_json(l), "right": formula_to_json(r)})
        }
    }
}

pub fn formula_from_json(v: &Value) -> Result<Formula> {
    match as_str(field(v, "op")?, "op")? {
        "lit" => Ok(Formula::Lit(Literal::parse(as_str(
            field(v, "literal")?,
            "literal",
        )?)?)),
        "true" => Ok(Formula::True),
        "false" => Ok(Formula::False),
        op @ ("and" | "or") => {
            let left = formula_from_json(field(v, "left")?)?;
            let right = formula_from_json(field(v, "right")?)?;
            Ok(if op == "and" {
                Formula::And(Box::new(left), Box::new(right))
            } else {
                Formula::Or(Box::new(left), Box::new(right))
            })
        }
        other => Err(Error::Json(format!("unknown op `{other}`"))),
    }
}

/// Leaves carry explicit dense ids; resolutions are sorted ascending
/// internally and lexicographically across the list, so equal props print
/// identical bytes.
pub fn prop_to_json(p: &AbstractProp) -> Value {
    let leaves: Vec<Value> = p
        .leaves()
        .iter()
        .enumerate()
        .map(|(i, l)| json!({"id": i, "label": l.to_string()}))
        .collect();
    let mut resolutions: Vec<Vec<usize>> = p
        .resolutions()
        .iter()
        .map(|r| r.ids().collect())
        .collect();
    resolutions.sort();
    json!({"leaves": leaves, "resolutions": resolutions})
}

/// Accepts a formula as a string or an `{"op", ...}` tree, either of which
/// is compiled, or an explicit `{"leaves", "resolutions"}` object, which is
/// validated.
pub fn prop_from_json(v: &Value) -> Result<AbstractProp> {
    if let Value::String(text) = v {
        return compile(&Formula::parse(text)?);
    }
    if v.get("op").is_some() {
        return compile(&formula_from_json(v)?);
    }
    let mut leaves = Vec::new();
    for (index, leaf) in as_array(field(v, "leaves")?, "leaves")?.iter().enumerate() {
        let id = as_id(field(leaf, "id")?, "leaf id")?;
        if id != index {
            return Err(Error::Json(format!(
                "leaf ids must be dense and ascending: found {id} at position {index}"
            )));
        }
        leaves.push(Literal::parse(as_str(field(leaf, "label")?, "label")?)?);
    }
    let mut resolutions = BTreeSet::new();
    for r in as_array(field(v, "resolutions")?, "resolutions")? {
        let mut set = LeafSet::EMPTY;
        for id in as_array(r, "resolution")? {
            let id = as_id(id, "leaf id")?;
            if id >= leaves.len() || id >= 32 {
                return Err(Error::Json(format!(
                    "leaf id {id} outside 0..{}",
                    leaves.len()
                )));
            }
            set = set.with(id);
        }
        resolutions.insert(set);
    }
    AbstractProp::try_new(leaves, resolutions)
}

pub fn morphism_to_json(m: &Morphism) -> Value {
    json!({
        "source": prop_to_json(m.source()),
        "target": prop_to_json(m.target()),
        "pairs": m.pairs().iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>(),
    })
}

pub fn morphism_from_json(v: &Value) -> Result<Morphism> {
    let source = prop_from_json(field(v, "source")?)?;
    let target = prop_from_json(field(v, "target")?)?;
    let mut pairs = BTreeSet::new();
    for p in as_array(field(v, "pairs")?, "pairs")? {
        let p = as_array(p, "pair")?;
        if p.len() != 2 {
            return Err(Error::Json("pair must have two entries".to_string()));
        }
        pairs.insert((as_id(&p[0], "pair")?, as_id(&p[1], "pair")?));
    }
    Morphism::new(source, target, pairs)
}

fn edge_to_json(e: &Edge) -> Value {
    let (side_u, u, side_v, v) = match *e {
        Edge::Cross(i, j) => ("src", i, "tgt", j),
        Edge::SourceDual(i, j) => ("src", i, "src", j),
        Edge::TargetDual(i, j) => ("tgt", i, "tgt", j),
    };
    json!({"side_u": side_u, "u": u, "side_v": side_v, "v": v})
}

pub fn linking_to_json(l: &Linking) -> Value {
    json!({
        "source": prop_to_json(l.source()),
        "target": prop_to_json(l.target()),
        "edges": l.edges().iter().map(edge_to_json).collect::<Vec<_>>(),
    })
}

pub fn linking_from_json(v: &Value) -> Result<Linking> {
    let source = prop_from_json(field(v, "source")?)?;
    let target = prop_from_json(field(v, "target")?)?;
    let mut edges = BTreeSet::new();
    for e in as_array(field(v, "edges")?, "edges")? {
        let side = |key: &str| -> Result<bool> {
            match as_str(field(e, key)?, key)? {
                "src" => Ok(true),
                "tgt" => Ok(false),
                other => Err(Error::Json(format!("side must be src or tgt, got `{other}`"))),
            }
        };
        let u = as_id(field(e, "u")?, "u")?;
        let v = as_id(field(e, "v")?, "v")?;
        let edge = match (side("side_u")?, side("side_v")?) {
            (true, false) => Edge::Cross(u, v),
            (false, true) => Edge::Cross(v, u),
            (true, true) => Edge::SourceDual(u, v),
            (false, false) => Edge::TargetDual(u, v),
        };
        edges.insert(edge);
    }
    Linking::new(source, target, edges)
}

pub fn context_to_json(c: &UniversalContext) -> Value {
    json!({
        "atoms": c.atoms(),
        "ax": prop_to_json(c.ax()),
        "cut": prop_to_json(c.cut()),
    })
}

/// Only `atoms` is read; the derived propositions are rebuilt.
pub fn context_from_json(v: &Value) -> Result<UniversalContext> {
    let atoms: Vec<&str> = as_array(field(v, "atoms")?, "atoms")?
        .iter()
        .map(|a| as_str(a, "atom"))
        .collect::<Result<_>>()?;
    UniversalContext::new(&atoms)
}

pub fn bu_to_json(m: &BuMorphism) -> Value {
    json!({
        "context": context_to_json(m.context()),
        "source": prop_to_json(m.source()),
        "target": prop_to_json(m.target()),
        "body": morphism_to_json(m.body()),
    })
}

pub fn bu_from_json(v: &Value) -> Result<BuMorphism> {
    let ctx = context_from_json(field(v, "context")?)?;
    let source = prop_from_json(field(v, "source")?)?;
    let target = prop_from_json(field(v, "target")?)?;
    let body = morphism_from_json(field(v, "body")?)?;
    BuMorphism::new(ctx, source, target, body)
}

pub fn ba_to_json(m: &BaMorphism) -> Value {
    json!({
        "source": prop_to_json(m.source()),
        "target": prop_to_json(m.target()),
        "axioms": m.axioms(),
        "cuts": m.cuts(),
        "body": morphism_to_json(m.body()),
    })
}

pub fn ba_from_json(v: &Value) -> Result<BaMorphism> {
    let source = prop_from_json(field(v, "source")?)?;
    let target = prop_from_json(field(v, "target")?)?;
    let axioms: Vec<String> = as_array(field(v, "axioms")?, "axioms")?
        .iter()
        .map(|a| Ok(as_str(a, "axiom")?.to_string()))
        .collect::<Result<_>>()?;
    let cuts: Vec<String> = as_array(field(v, "cuts")?, "cuts")?
        .iter()
        .map(|a| Ok(as_str(a, "cut")?.to_string()))
        .collect::<Result<_>>()?;
    let body = morphism_from_json(field(v, "body")?)?;
    BaMorphism::new(source, target, axioms, cuts, body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::{bu_id, witness_proof};

    fn prop(text: &str) -> AbstractProp {
        compile(&Formula::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn prop_round_trip() {
        for text in ["p", "p&q", "(p|~p)&q", "1", "0", "p|1"] {
            let p = prop(text);
            assert_eq!(prop_from_json(&prop_to_json(&p)).unwrap(), p, "{text}");
        }
    }

    #[test]
    fn prop_from_formula_string() {
        assert_eq!(prop_from_json(&json!("p&q")).unwrap(), prop("p&q"));
    }

    #[test]
    fn formula_tree_round_trip() {
        for text in ["p", "~q", "1", "0", "(p|~p)&(q|0)", "p&q&r"] {
            let f = Formula::parse(text).unwrap();
            assert_eq!(formula_from_json(&formula_to_json(&f)).unwrap(), f, "{text}");
        }
        assert!(matches!(
            formula_from_json(&json!({"op": "xor"})),
            Err(Error::Json(_))
        ));
    }

    #[test]
    fn prop_from_formula_tree() {
        let tree = json!({
            "op": "and",
            "left": {"op": "lit", "literal": "p"},
            "right": {"op": "or",
                      "left": {"op": "lit", "literal": "q"},
                      "right": {"op": "false"}},
        });
        assert_eq!(prop_from_json(&tree).unwrap(), prop("p&(q|0)"));
    }

    #[test]
    fn prop_rejects_non_closed_family() {
        // {∅} over one leaf: nothing meets ∅ in one point, so the double
        // orthogonal balloons to every subset.
        let v = json!({"leaves": [{"id": 0, "label": "p"}], "resolutions": [[]]});
        assert!(matches!(prop_from_json(&v), Err(Error::InvalidProp(_))));
    }

    #[test]
    fn prop_rejects_bad_ids() {
        let v = json!({"leaves": [{"id": 0, "label": "p"}], "resolutions": [[4]]});
        assert!(matches!(prop_from_json(&v), Err(Error::Json(_))));
    }

    #[test]
    fn prop_rejects_sparse_leaf_ids() {
        let v = json!({
            "leaves": [{"id": 0, "label": "p"}, {"id": 2, "label": "q"}],
            "resolutions": [[0], [1]],
        });
        assert!(matches!(prop_from_json(&v), Err(Error::Json(_))));
    }

    #[test]
    fn canonical_output_is_stable() {
        let p = prop("p&q");
        let text = serde_json::to_string(&prop_to_json(&p)).unwrap();
        assert_eq!(
            text,
            r#"{"leaves":[{"id":0,"label":"p"},{"id":1,"label":"q"}],"resolutions":[[0],[1]]}"#
        );
    }

    #[test]
    fn resolutions_print_in_lexicographic_order() {
        // {1} precedes {0,1} as a bitmask but follows it lexicographically.
        let p = AbstractProp::try_new(
            vec![Literal::parse("p").unwrap(), Literal::parse("p").unwrap()],
            [LeafSet::from_ids([1]), LeafSet::from_ids([0, 1])]
                .into_iter()
                .collect(),
        )
        .unwrap();
        assert_eq!(prop_to_json(&p)["resolutions"], json!([[0, 1], [1]]));
        assert_eq!(prop_from_json(&prop_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn morphism_round_trip() {
        let m = Morphism::new(
            prop("p"),
            prop("p|p"),
            [(0, 0), (0, 1)].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(morphism_from_json(&morphism_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn linking_round_trip() {
        let l = Linking::new(
            prop("p|~p"),
            prop("p|~p"),
            [Edge::Cross(0, 0), Edge::SourceDual(0, 1)]
                .into_iter()
                .collect(),
        )
        .unwrap();
        assert_eq!(linking_from_json(&linking_to_json(&l)).unwrap(), l);
    }

    #[test]
    fn linking_edges_use_sided_endpoints() {
        let l = Linking::new(
            prop("p"),
            prop("p"),
            [Edge::Cross(0, 0)].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(
            linking_to_json(&l)["edges"][0],
            json!({"side_u": "src", "u": 0, "side_v": "tgt", "v": 0})
        );
        // A cross edge written target-side first parses to the same linking.
        let flipped = json!({
            "source": "p",
            "target": "p",
            "edges": [{"side_u": "tgt", "u": 0, "side_v": "src", "v": 0}],
        });
        assert_eq!(linking_from_json(&flipped).unwrap(), l);
    }

    #[test]
    fn context_and_proofs_round_trip() {
        let ctx = UniversalContext::new(&["p", "q"]).unwrap();
        assert_eq!(context_from_json(&context_to_json(&ctx)).unwrap(), ctx);

        let id = bu_id(&ctx, &prop("p&q")).unwrap();
        assert_eq!(bu_from_json(&bu_to_json(&id)).unwrap(), id);

        let proof = witness_proof(&ctx, &prop("p|~p")).unwrap().unwrap();
        assert_eq!(bu_from_json(&bu_to_json(&proof)).unwrap(), proof);

        let ba = crate::boolean::ba_id(&prop("p")).unwrap();
        assert_eq!(ba_from_json(&ba_to_json(&ba)).unwrap(), ba);
    }
}
