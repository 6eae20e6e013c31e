//! Command-line front end: compile and inspect propositions, check and
//! compose proofs, decide truth, enumerate morphisms, emit DOT.
//!
//! Exit codes partition outcomes: 0 success (and "true"/"pass"/"provable"),
//! 1 negative verdicts ("false"/"fail"/"unprovable"), 2 usage and input
//! errors, 3 exceeded search bounds. Errors go to stderr as one JSON object
//! with `code` and `message`; stdout is canonical JSON (or DOT) so that
//! identical invocations are byte-identical.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use orthoprop::absprop::{compile, compile_via_graph, orthogonal, orthogonal_pruned, AbstractProp, LeafSet};
use orthoprop::boolean::{ba_compose, bl_compose_checked, bu_compose, witness_proof, UniversalContext};
use orthoprop::dot::{linking_to_dot, morphism_to_dot, prop_to_dot};
use orthoprop::formula::{and, lit, nlit, or, Formula};
use orthoprop::json::{
    ba_from_json, ba_to_json, bu_from_json, bu_to_json, linking_from_json, linking_to_json,
    morphism_from_json, morphism_to_json, prop_to_json,
};
use orthoprop::morphism::{
    enumerate, factor_distribution, mix_soft_factor, Condition, ConditionWitness, MixSoftFactor,
    Morphism,
};
use orthoprop::{Error, Result};

#[derive(Parser)]
#[command(name = "orthoprop", disable_help_subcommand = true)]
#[command(about = "Propositions as set systems, proofs as relations")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckCondition {
    Strict,
    Lax,
}

#[derive(Clone, Copy, ValueEnum)]
enum Category {
    /// Plain morphisms, relational composition.
    G,
    /// Proofs against a universal context of axioms.
    Bu,
    /// Proofs carrying their own axiom and cut lists.
    Ba,
    /// Linkings, composed by chasing alternating paths.
    Bl,
}

#[derive(Clone, Copy, ValueEnum)]
enum FactorKind {
    Distribution,
    Mixsoft,
}

#[derive(Subcommand)]
enum Verb {
    /// Compile a formula to its canonical proposition JSON.
    Compile { formula: String },
    /// Decide abstract truth; on "false" print a falsifying resolution.
    Truth { formula: String },
    /// Check a morphism against the strict or lax condition.
    Check {
        #[arg(long, value_enum)]
        condition: CheckCondition,
        morphism: String,
    },
    /// Compose two proofs (diagrammatic order: f then g).
    Compose {
        f: String,
        g: String,
        #[arg(long, value_enum, default_value = "g")]
        category: Category,
    },
    /// List every morphism between two compiled formulas.
    Enumerate {
        source: String,
        target: String,
        #[arg(long, value_enum)]
        condition: CheckCondition,
    },
    /// Search for a proof of the formula from the universal axioms.
    Prove {
        formula: String,
        /// Atoms of the universal context; defaults to the formula's own.
        #[arg(long, value_delimiter = ',')]
        atoms: Option<Vec<String>>,
    },
    /// Factor a morphism through distribution or the mix rule.
    Factor {
        #[arg(long, value_enum)]
        kind: FactorKind,
        morphism: String,
        /// Leaf counts of the A, B, C components, as "na,nb,nc".
        #[arg(long, value_delimiter = ',')]
        shape: Option<Vec<usize>>,
    },
    /// Render a proposition, morphism, or linking JSON file as DOT.
    Dot { object: String },
    /// Run the built-in randomized cross-checks; SEED fixes the sampling.
    Selftest,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let message = e.render().to_string();
                eprintln!("{}", json!({"code": "usage", "message": message}));
                return ExitCode::from(2);
            }
            // --help and --version print to stdout and succeed.
            write_out(&e.to_string());
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.verb) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", json!({"code": e.code(), "message": e.to_string()}));
            match e {
                Error::Bound { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

/// Writes to stdout, treating a closed pipe as a normal early exit.
fn write_out(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout();
    if out.write_all(text.as_bytes()).and_then(|()| out.flush()).is_err() {
        std::process::exit(0);
    }
}

fn emit(v: &Value) {
    write_out(&format!("{}\n", serde_json::to_string_pretty(v).unwrap()));
}

fn read_json(path: &str) -> Result<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Json(format!("cannot read `{path}`: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Json(format!("`{path}`: {e}")))
}

/// Formula arguments take the text grammar or, when starting with `{`, the
/// JSON tree encoding.
fn parse_formula_arg(text: &str) -> Result<Formula> {
    if text.trim_start().starts_with('{') {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::Json(format!("formula: {e}")))?;
        return orthoprop::json::formula_from_json(&v);
    }
    Formula::parse(text)
}

fn set_ids(s: LeafSet) -> Value {
    Value::Array(s.ids().map(|i| json!(i)).collect())
}

fn witness_to_json(w: &ConditionWitness) -> Value {
    match *w {
        ConditionWitness::Preimage {
            resolution,
            preimage,
        } => json!({
            "kind": "preimage",
            "resolution": set_ids(resolution),
            "preimage": set_ids(preimage),
        }),
        ConditionWitness::Image {
            coresolution,
            image,
        } => json!({
            "kind": "image",
            "coresolution": set_ids(coresolution),
            "image": set_ids(image),
        }),
        ConditionWitness::Rectangle {
            coresolution,
            resolution,
            pairs,
        } => json!({
            "kind": "rectangle",
            "coresolution": set_ids(coresolution),
            "resolution": set_ids(resolution),
            "pairs": pairs,
        }),
    }
}

fn run(verb: Verb) -> Result<u8> {
    match verb {
        Verb::Compile { formula } => {
            let p = compile(&parse_formula_arg(&formula)?)?;
            emit(&prop_to_json(&p));
            Ok(0)
        }
        Verb::Truth { formula } => run_truth(&formula),
        Verb::Check { condition, morphism } => {
            let m = morphism_from_json(&read_json(&morphism)?)?;
            let witness = match condition {
                CheckCondition::Strict => m.strict_witness()?,
                CheckCondition::Lax => m.lax_witness()?,
            };
            match witness {
                None => {
                    emit(&json!({"verdict": "pass"}));
                    Ok(0)
                }
                Some(w) => {
                    emit(&json!({"verdict": "fail", "witness": witness_to_json(&w)}));
                    Ok(1)
                }
            }
        }
        Verb::Compose { f, g, category } => {
            let f = read_json(&f)?;
            let g = read_json(&g)?;
            let composite = match category {
                Category::G => {
                    morphism_to_json(&morphism_from_json(&f)?.compose(&morphism_from_json(&g)?)?)
                }
                Category::Bu => bu_to_json(&bu_compose(&bu_from_json(&f)?, &bu_from_json(&g)?)?),
                Category::Ba => ba_to_json(&ba_compose(&ba_from_json(&f)?, &ba_from_json(&g)?)?),
                Category::Bl => linking_to_json(&bl_compose_checked(
                    &linking_from_json(&f)?,
                    &linking_from_json(&g)?,
                )?),
            };
            emit(&composite);
            Ok(0)
        }
        Verb::Enumerate {
            source,
            target,
            condition,
        } => {
            let a = compile(&parse_formula_arg(&source)?)?;
            let b = compile(&parse_formula_arg(&target)?)?;
            let condition = match condition {
                CheckCondition::Strict => Condition::Strict,
                CheckCondition::Lax => Condition::Lax,
            };
            let found = enumerate(&a, &b, condition)?;
            emit(&json!({
                "count": found.len(),
                "morphisms": found.iter().map(morphism_to_json).collect::<Vec<_>>(),
            }));
            Ok(0)
        }
        Verb::Prove { formula, atoms } => {
            let f = parse_formula_arg(&formula)?;
            let atoms: Vec<String> = match atoms {
                Some(list) => list,
                None => f.atoms().into_iter().collect(),
            };
            for atom in f.atoms() {
                if !atoms.contains(&atom) {
                    return Err(Error::MissingAtom(atom));
                }
            }
            let ctx = UniversalContext::new(&atoms)?;
            let a = compile(&f)?;
            match witness_proof(&ctx, &a)? {
                Some(proof) => {
                    emit(&bu_to_json(&proof));
                    Ok(0)
                }
                None => {
                    write_out("unprovable\n");
                    Ok(1)
                }
            }
        }
        Verb::Factor {
            kind,
            morphism,
            shape,
        } => {
            let m = morphism_from_json(&read_json(&morphism)?)?;
            match kind {
                FactorKind::Distribution => {
                    let shape = shape.ok_or_else(|| {
                        Error::Shape("distribution needs --shape na,nb,nc".to_string())
                    })?;
                    run_factor_distribution(&m, &shape)
                }
                FactorKind::Mixsoft => run_factor_mixsoft(&m),
            }
        }
        Verb::Dot { object } => {
            let v = read_json(&object)?;
            let text = if v.is_string() || v.get("leaves").is_some() {
                prop_to_dot(&orthoprop::json::prop_from_json(&v)?)
            } else if v.get("edges").is_some() {
                linking_to_dot(&linking_from_json(&v)?)
            } else if v.get("pairs").is_some() {
                morphism_to_dot(&morphism_from_json(&v)?)
            } else {
                return Err(Error::Json(
                    "object is not a proposition, morphism, or linking".to_string(),
                ));
            };
            write_out(&text);
            Ok(0)
        }
        Verb::Selftest => run_selftest(),
    }
}

/// A resolution without a dual pair of leaves falsifies the formula: set
/// every literal in it false (consistent exactly because no two are dual),
/// and the evaluation is cross-checked before printing.
fn run_truth(formula: &str) -> Result<u8> {
    let f = parse_formula_arg(formula)?;
    let p = compile(&f)?;
    if p.is_true() {
        println!("true");
        return Ok(0);
    }
    let witness = p
        .resolutions()
        .iter()
        .find(|&&r| {
            let ids: Vec<usize> = r.ids().collect();
            ids.iter().enumerate().all(|(k, &i)| {
                ids[k + 1..]
                    .iter()
                    .all(|&j| !p.label(i).is_dual_of(p.label(j)))
            })
        })
        .copied()
        .ok_or_else(|| Error::Internal("false proposition without a plain resolution".to_string()))?;
    let mut assignment: Vec<(String, bool)> = Vec::new();
    for i in witness.ids() {
        let l = p.label(i);
        let pair = (l.atom().to_string(), !l.is_positive());
        if !assignment.contains(&pair) {
            assignment.push(pair);
        }
    }
    let value = f.evaluate(&|name: &str| {
        Some(
            assignment
                .iter()
                .find(|(atom, _)| atom == name)
                .map(|&(_, v)| v)
                .unwrap_or(false),
        )
    })?;
    if value {
        return Err(Error::Internal(
            "witness resolution does not falsify the formula".to_string(),
        ));
    }
    write_out("false\n");
    emit(&json!({
        "resolution": set_ids(witness),
        "literals": witness.ids().map(|i| p.label(i).to_string()).collect::<Vec<_>>(),
        "falsifying": assignment.iter().map(|(a, v)| json!([a, v])).collect::<Vec<_>>(),
    }));
    Ok(1)
}

/// Rebuilds the A, B, C components of a source shaped A∧(B∨C) from their
/// leaf counts. A product's resolutions are the disjoint union of its
/// operands' and a sum's are the pairwise unions, so each source
/// resolution is either wholly an A resolution or a union of one B and one
/// C resolution. The rebuilt components are validated by the factoring
/// itself, which recomposes them and compares against the actual source.
fn run_factor_distribution(m: &Morphism, shape: &[usize]) -> Result<u8> {
    let source = m.source();
    let [na, nb, nc] = *shape else {
        return Err(Error::Shape("--shape needs exactly three counts".to_string()));
    };
    if na + nb + nc != source.leaf_count() {
        return Err(Error::Shape(format!(
            "shape {na}+{nb}+{nc} does not partition {} leaves",
            source.leaf_count()
        )));
    }
    let slice = |from: usize, len: usize| source.leaves()[from..from + len].to_vec();
    let restrict = |r: LeafSet, from: usize, len: usize| {
        LeafSet::from_ids(
            r.ids()
                .filter(|&i| i >= from && i < from + len)
                .map(|i| i - from),
        )
    };
    let mut res_a = std::collections::BTreeSet::new();
    let mut res_b = std::collections::BTreeSet::new();
    let mut res_c = std::collections::BTreeSet::new();
    for &r in source.resolutions() {
        let a_part = restrict(r, 0, na);
        if a_part.len() == r.len() {
            res_a.insert(a_part);
        } else if a_part.is_empty() {
            res_b.insert(restrict(r, na, nb));
            res_c.insert(restrict(r, na + nb, nc));
        } else {
            return Err(Error::Shape(
                "a resolution straddles A and the B∨C side".to_string(),
            ));
        }
    }
    let a = AbstractProp::try_new(slice(0, na), res_a)?;
    let b = AbstractProp::try_new(slice(na, nb), res_b)?;
    let c = AbstractProp::try_new(slice(na + nb, nc), res_c)?;
    let residual = factor_distribution(m, &a, &b, &c)?;
    emit(&json!({
        "kind": "distribution",
        "components": [prop_to_json(&a), prop_to_json(&b), prop_to_json(&c)],
        "residual": morphism_to_json(&residual),
    }));
    Ok(0)
}

fn run_factor_mixsoft(m: &Morphism) -> Result<u8> {
    let step = match mix_soft_factor(m)? {
        MixSoftFactor::IdentityLeaf => json!({"kind": "identity-leaf"}),
        MixSoftFactor::ThroughProjection {
            dropped,
            projection,
            residual,
        } => json!({
            "kind": "through-projection",
            "dropped": dropped,
            "projection": morphism_to_json(&projection),
            "residual": morphism_to_json(&residual),
        }),
        MixSoftFactor::ThroughInjection {
            dropped,
            injection,
            residual,
        } => json!({
            "kind": "through-injection",
            "dropped": dropped,
            "injection": morphism_to_json(&injection),
            "residual": morphism_to_json(&residual),
        }),
        MixSoftFactor::ThroughMix {
            split_source,
            mix,
            residual,
        } => json!({
            "kind": "through-mix",
            "split_source": split_source,
            "mix": morphism_to_json(&mix),
            "residual": morphism_to_json(&residual),
        }),
    };
    emit(&step);
    Ok(0)
}

fn random_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    let atoms = ["p", "q", "r"];
    if depth == 0 || rng.gen_bool(0.3) {
        let atom = atoms.choose(rng).unwrap();
        return match rng.gen_range(0..4) {
            0 => Formula::True,
            1 => Formula::False,
            2 => lit(atom),
            _ => nlit(atom),
        };
    }
    let left = random_formula(rng, depth - 1);
    let right = random_formula(rng, depth - 1);
    if rng.gen_bool(0.5) {
        and(left, right)
    } else {
        or(left, right)
    }
}

/// Cross-checks independent implementations against each other on random
/// inputs: the two compilation routes, the two orthogonal-complement
/// searches, the set-level and edge-counting proof conditions, and abstract
/// truth against the truth table.
fn run_selftest() -> Result<u8> {
    let seed: u64 = std::env::var("SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fail = |what: &str, detail: String| Err(Error::Internal(format!("{what}: {detail}")));

    fn constant_free(f: &Formula) -> bool {
        match f {
            Formula::True | Formula::False => false,
            Formula::Lit(_) => true,
            Formula::And(l, r) | Formula::Or(l, r) => constant_free(l) && constant_free(r),
        }
    }

    let mut compiles = 0usize;
    let mut truths = 0usize;
    let mut props: Vec<AbstractProp> = Vec::new();
    for _ in 0..200 {
        let f = random_formula(&mut rng, 3);
        let p = compile(&f)?;
        // The meet-graph route is only defined on constant-free formulas.
        if constant_free(&f) {
            if compile_via_graph(&f)? != p {
                return fail("compilation routes disagree", f.render());
            }
            compiles += 1;
        }
        let atoms: Vec<String> = f.atoms().into_iter().collect();
        let table = (0..(1u32 << atoms.len())).all(|bits| {
            f.evaluate(&|name: &str| {
                atoms.iter().position(|a| a == name).map(|i| bits >> i & 1 == 1)
            })
            .unwrap()
        });
        if p.is_true() != table {
            return fail("abstract truth disagrees with the truth table", f.render());
        }
        truths += 1;
        if p.leaf_count() <= 8 {
            props.push(p);
        }
    }

    let mut orthogonals = 0usize;
    for _ in 0..200 {
        let n = rng.gen_range(0..=10);
        let sets: std::collections::BTreeSet<LeafSet> = (0..rng.gen_range(0..=5))
            .map(|_| LeafSet::from_bits(rng.gen_range(0..(1u32 << n))))
            .collect();
        if orthogonal(n, &sets)? != orthogonal_pruned(n, &sets)? {
            return fail("orthogonal searches disagree", format!("n={n} {sets:?}"));
        }
        orthogonals += 1;
    }

    let mut conditions = 0usize;
    for _ in 0..400 {
        let a = props.choose(&mut rng).unwrap();
        let b = props.choose(&mut rng).unwrap();
        let mut pairs = std::collections::BTreeSet::new();
        for x in 0..a.leaf_count() {
            for y in 0..b.leaf_count() {
                if a.label(x) == b.label(y) && rng.gen_bool(0.5) {
                    pairs.insert((x, y));
                }
            }
        }
        let m = Morphism::new(a.clone(), b.clone(), pairs)?;
        if m.check_strict()? != m.check_strict_edge()? || m.check_lax()? != m.check_lax_edge()? {
            return fail("proof conditions disagree", format!("{m:?}"));
        }
        conditions += 1;
    }

    emit(&json!({
        "seed": seed,
        "compilations": compiles,
        "truth_checks": truths,
        "orthogonal_systems": orthogonals,
        "condition_checks": conditions,
    }));
    Ok(0)
}
