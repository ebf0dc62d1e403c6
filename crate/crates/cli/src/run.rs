//! Command execution and the JSON result document.

use std::time::Instant;

use nilprod_core::exactlin::{tensor_fgab, FgAbGroup, IntMatrix, QMatrix, Q};
use nilprod_core::homology::{
    ce_homology, central_extension_validate, exactness_check, ganea_sequence, lcs_ganea_application, GANEA_TERMS,
};
use nilprod_core::nilgrp::{bilinear_product_gp, nil2_coproduct, symmetry_gp};
use nilprod_core::nonassoc::{
    abelian_extension_analysis, bilinear_product_sc, birkhoff_reflect, check_identity, commute_nil_birkhoff_test,
    higgins_commutator, lower_central_series, nilpotentisation, rep_tensor_lie, Reflector, SCAlgebra, Subspace,
};
use nilprod_core::operad2::{
    bilinear2, coproduct2, cosmash2, cosmash_kernel_structure, format_structure, j_filtration2, lcs2, symmetry2,
    validate_algebra, Nil2Algebra,
};
use nilprod_core::xmod::{pxmod_comparison, xmod_abelianize, xmod_symmetry, xmod_tensor, AbCrossedModule};
use nilprod_core::Variety;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::build::{parse_ring, Env, Object};
use crate::manifest::{format_q, Command, Manifest};
use crate::suites::{run_suite, Suite, SuiteReport};
use crate::table1::table1;

pub const SCHEMA: &str = "nilprod.result/1";

#[derive(Clone, Debug, Serialize)]
pub struct CommandResult {
    pub line: usize,
    pub command: String,
    /// `None` for pure computations
    pub verdict: Option<bool>,
    pub output: Json,
    pub error: Option<String>,
    pub elapsed_ms: u128,
}

impl CommandResult {
    pub fn failed(&self) -> bool {
        self.error.is_some() || self.verdict == Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultDocument {
    pub schema: &'static str,
    pub seed: u64,
    pub results: Vec<CommandResult>,
    pub passed: bool,
}

impl ResultDocument {
    pub fn new(seed: u64, results: Vec<CommandResult>) -> Self {
        let passed = results.iter().all(|r| !r.failed());
        ResultDocument { schema: SCHEMA, seed, results, passed }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable")
    }
}

pub fn q_json(x: &Q) -> Json {
    Json::String(format_q(x))
}

pub fn vec_json(v: &[Q]) -> Json {
    Json::Array(v.iter().map(q_json).collect())
}

/// Row-major nested arrays of rational strings.
pub fn matrix_json(m: &QMatrix) -> Json {
    Json::Array((0..m.rows()).map(|i| vec_json(m.row(i))).collect())
}

pub fn int_matrix_json(m: &IntMatrix) -> Json {
    Json::Array((0..m.rows()).map(|i| Json::Array(m.row(i).iter().map(|x| Json::String(x.to_string())).collect())).collect())
}

pub fn group_json(g: &FgAbGroup) -> Json {
    json!({ "factors": g.factors().iter().map(|x| x.to_string()).collect::<Vec<_>>(), "display": g.to_string() })
}

/// Dimension and basis vectors (as columns) of a subspace.
pub fn subspace_json(s: &Subspace) -> Json {
    json!({ "dim": s.dim(), "basis": s.vectors().iter().map(|v| vec_json(v)).collect::<Vec<_>>() })
}

fn nil2_json(a: &Nil2Algebra) -> Json {
    let ring = a.ring();
    json!({
        "ring": ring.to_string(),
        "structure": format_structure(ring, &a.structure()),
        "decomposables": a.decomposables.cols(),
    })
}

fn xmod_json(m: &AbCrossedModule) -> Json {
    let (k, c) = m.boundary_invariants();
    json!({
        "g": group_json(&m.g),
        "a": group_json(&m.a),
        "d": int_matrix_json(&m.d),
        "kernel": group_json(&k),
        "cokernel": group_json(&c),
    })
}

pub fn suite_json(r: &SuiteReport) -> Json {
    json!({
        "suite": r.suite.name(),
        "cases": r.cases,
        "passed": r.passed,
        "failures": r.failures.iter().take(5).map(|f| json!({"case": f.case, "detail": f.detail})).collect::<Vec<_>>(),
    })
}

/// The output of a command and its verdict, if it makes a claim.
type Outcome = Result<(Json, Option<bool>), String>;

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

fn nil2(env: &mut Env, name: &str) -> Result<Nil2Algebra, String> {
    match env.get(name).map_err(err)? {
        Object::Nil2Alg(a) => Ok(a),
        _ => Err(format!("`{name}` is not a nil2alg")),
    }
}

fn fgab(env: &mut Env, name: &str) -> Result<FgAbGroup, String> {
    match env.get(name).map_err(err)? {
        Object::Fgab(g) => Ok(g),
        _ => Err(format!("`{name}` is not an fgab")),
    }
}

fn xmod(env: &mut Env, name: &str) -> Result<AbCrossedModule, String> {
    match env.get(name).map_err(err)? {
        Object::Xmod(m) => Ok(m),
        _ => Err(format!("`{name}` is not an xmod")),
    }
}

fn algebra(env: &mut Env, name: &str) -> Result<SCAlgebra, String> {
    env.algebra(name).map_err(err)
}

/// A subspace declaration, checked against the algebra it is used with.
fn subspace(env: &mut Env, name: &str, alg: &str) -> Result<Subspace, String> {
    match env.get(name).map_err(err)? {
        Object::Subspace { algebra, space } if algebra == alg => Ok(space),
        Object::Subspace { algebra, .. } => Err(format!("`{name}` lives in `{algebra}`, not `{alg}`")),
        _ => Err(format!("`{name}` is not a subspace")),
    }
}

fn int(word: &str) -> Result<usize, String> {
    word.parse().map_err(|_| format!("`{word}` is not a nonnegative integer"))
}

fn execute(env: &mut Env, cmd: &Command, seed: u64) -> Outcome {
    let w: Vec<&str> = cmd.words.iter().map(String::as_str).collect();
    match w.as_slice() {
        ["tensor", "fgab", x, y] => {
            let t = tensor_fgab(&fgab(env, x)?, &fgab(env, y)?);
            Ok((group_json(&t), None))
        }
        ["tensor", "gp", x, y] => {
            let (Object::Gp(px), Object::Gp(py)) = (env.get(x).map_err(err)?, env.get(y).map_err(err)?) else {
                return Err("expected two gp declarations".into());
            };
            let b = bilinear_product_gp(&px, &py);
            Ok((json!({"ab_x": group_json(&b.ab_x), "ab_y": group_json(&b.ab_y), "product": group_json(&b.product)}), None))
        }
        ["nil2", x, y] => {
            let (a, b) = (fgab(env, x)?, fgab(env, y)?);
            let g = nil2_coproduct(&a, &b);
            let center = g.center().map_err(err)?;
            let class = g.class().map_err(err)?;
            Ok((
                json!({
                    "a": group_json(&g.a),
                    "b": group_json(&g.b),
                    "t": group_json(&g.t),
                    "order": g.order().map(|o| o.to_string()),
                    "class": class,
                    "center": group_json(&center.structure),
                }),
                None,
            ))
        }
        ["symmetry", x, y] => {
            let (a, b) = (fgab(env, x)?, fgab(env, y)?);
            let s = symmetry_gp(&a, &b);
            let back = symmetry_gp(&b, &a);
            let t = tensor_fgab(&a, &b);
            let sq = back.mul(&s);
            let involution = (0..sq.cols()).all(|c| {
                let mut v = sq.col(c);
                v[c] -= 1;
                t.is_zero_element(&v)
            });
            Ok((json!({"matrix": int_matrix_json(&s), "involution": involution}), Some(involution)))
        }
        ["cosmash", x, y] => {
            let (a, b) = (nil2(env, x)?, nil2(env, y)?);
            let c = cosmash2(&a, &b).map_err(err)?;
            let direct = cosmash_kernel_structure(&a, &b).map_err(err)?;
            let agrees = c.algebra.structure() == direct;
            let ring = a.ring();
            Ok((
                json!({
                    "structure": format_structure(ring, &c.algebra.structure()),
                    "comparison_kernel": format_structure(ring, &direct),
                    "inclusion": matrix_json(&c.inclusion),
                }),
                Some(agrees),
            ))
        }
        ["coproduct", x, y] => {
            let cp = coproduct2(&nil2(env, x)?, &nil2(env, y)?).map_err(err)?;
            let valid = validate_algebra(&cp.algebra).valid;
            Ok((json!({"algebra": nil2_json(&cp.algebra), "valid": valid}), Some(valid)))
        }
        ["symmetry2", x, y] => {
            let (a, b) = (nil2(env, x)?, nil2(env, y)?);
            let s = symmetry2(&a, &b).map_err(err)?;
            let back = symmetry2(&b, &a).map_err(err)?;
            let ring = a.ring();
            let sq = ring.mul(&back.matrix, &s.matrix);
            let involution = ring.is_zero_map(&s.source.module, &sq.sub(&QMatrix::identity(sq.rows())));
            Ok((json!({"matrix": matrix_json(&s.matrix), "involution": involution}), Some(involution)))
        }
        ["validate", x] => {
            let r = validate_algebra(&nil2(env, x)?);
            Ok((serde_json::to_value(&r).map_err(err)?, Some(r.valid)))
        }
        ["filtration2", x] => {
            let a = nil2(env, x)?;
            let ring = a.ring();
            let (j, g) = (j_filtration2(&a), lcs2(&a));
            let agrees = (0..3).all(|n| ring.span_eq(&a.module, &j[n], &g[n]));
            let levels: Vec<String> = j.iter().map(|m| format_structure(ring, &ring.structure(&ring.submodule(&a.module, m).module))).collect();
            Ok((json!({"levels": levels}), Some(agrees)))
        }
        ["bilinear", x, y] => match (env.get(x).map_err(err)?, env.get(y).map_err(err)?) {
            (Object::Nil2Alg(a), Object::Nil2Alg(b)) => {
                let p = bilinear2(&a, &b).map_err(err)?;
                Ok((nil2_json(&p), None))
            }
            (Object::Sc(a), Object::Sc(b)) => {
                let r = bilinear_product_sc(&a, &b).map_err(err)?;
                let agrees = r.operad_dim.map(|d| d == r.dim);
                Ok((serde_json::to_value(&r).map_err(err)?, agrees))
            }
            _ => Err("both arguments must be nil2alg or both structure-constant algebras".into()),
        },
        ["lcs", x] => {
            let l = lower_central_series(&algebra(env, x)?);
            Ok((json!({"dims": l.dims(), "nilpotent": l.nilpotent, "class": l.class, "stable_index": l.stable_index}), None))
        }
        ["identity", x] => {
            let a = algebra(env, x)?;
            let v = a.variety.ok_or_else(|| format!("`{x}` has no variety to check"))?;
            let r = check_identity(&a, v);
            Ok((serde_json::to_value(&r).map_err(err)?, Some(r.holds)))
        }
        ["reflect", x] => {
            let a = algebra(env, x)?;
            let target = match a.variety {
                Some(Variety::Leib) => Reflector::LieFromLeib,
                Some(Variety::Assoc) => Reflector::CommFromAssoc,
                _ => return Err("reflect needs a leib or assoc algebra".into()),
            };
            let q = birkhoff_reflect(&a, target).map_err(err)?;
            Ok((json!({"dim": q.algebra.dim, "kernel": subspace_json(&q.kernel)}), None))
        }
        ["center", x] => Ok((subspace_json(&algebra(env, x)?.center()), None)),
        ["nilpotentise", x, n] => {
            let q = nilpotentisation(&algebra(env, x)?, int(n)?).map_err(err)?;
            let l = lower_central_series(&q.algebra);
            Ok((json!({"dim": q.algebra.dim, "kernel": subspace_json(&q.kernel), "class": l.class}), None))
        }
        ["commute", x, n] => {
            let r = commute_nil_birkhoff_test(&algebra(env, x)?, int(n)?).map_err(err)?;
            Ok((json!({"dims": [r.dims.0, r.dims.1], "isomorphic": r.isomorphic}), Some(r.isomorphic)))
        }
        ["homology", x, n] => {
            let h = ce_homology(&algebra(env, x)?, int(n)?).map_err(err)?;
            Ok((json!({"degree": h.degree, "dim": h.dim(), "representatives": matrix_json(&h.representatives)}), None))
        }
        ["lcsganea", x, n] => {
            let n = int(n)?;
            if n < 2 {
                return Err("lcsganea needs n >= 2".into());
            }
            let r = lcs_ganea_application(&algebra(env, x)?, n).map_err(err)?;
            let ok = r.fragment_exact && r.sequence.exact;
            Ok((serde_json::to_value(&r).map_err(err)?, Some(ok)))
        }
        ["higgins", x, k, l] => {
            let a = algebra(env, x)?;
            let r = higgins_commutator(&a, &subspace(env, k, x)?, &subspace(env, l, x)?).map_err(err)?;
            Ok((subspace_json(&r), None))
        }
        ["ternary", x, k, l, m] => {
            let a = algebra(env, x)?;
            let (k, l, m) = (subspace(env, k, x)?, subspace(env, l, x)?, subspace(env, m, x)?);
            let r = nilprod_core::nonassoc::ternary_commutator(&a, &k, &l, &m).map_err(err)?;
            Ok((subspace_json(&r), None))
        }
        ["abext", x, k] => {
            let a = algebra(env, x)?;
            let r = abelian_extension_analysis(&a, &subspace(env, k, x)?).map_err(err)?;
            Ok((
                json!({
                    "aa": subspace_json(&r.aa),
                    "aax": subspace_json(&r.aax),
                    "abelian_extension": r.abelian_extension,
                    "quotient_dim": r.quotient.algebra.dim,
                }),
                None,
            ))
        }
        ["ganea", x, k] => {
            let b = algebra(env, x)?;
            let e = central_extension_validate(&b, &subspace(env, k, x)?).map_err(err)?;
            let s = ganea_sequence(&e).map_err(err)?;
            let r = exactness_check(&s);
            let terms: Vec<Json> = GANEA_TERMS.iter().zip(s.dims).map(|(t, d)| json!({"term": t, "dim": d})).collect();
            Ok((
                json!({
                    "terms": terms,
                    "dims": s.dims,
                    "maps": s.maps.iter().map(matrix_json).collect::<Vec<_>>(),
                    "exactness": r,
                    "characteristic_two": s.characteristic_two,
                }),
                Some(r.exact),
            ))
        }
        ["kronecker", x, y] => {
            let (Object::LieRep(a), Object::LieRep(b)) = (env.get(x).map_err(err)?, env.get(y).map_err(err)?) else {
                return Err("expected two lierep declarations".into());
            };
            let t = rep_tensor_lie(&a, &b).map_err(err)?;
            let ok = crate::suites::representation_defect(&t).is_none();
            Ok((json!({"dim": t.dim(), "rho": t.rho.iter().map(matrix_json).collect::<Vec<_>>()}), Some(ok)))
        }
        ["xmod", x, y] => {
            let t = xmod_tensor(&xmod(env, x)?, &xmod(env, y)?).map_err(err)?;
            Ok((xmod_json(&t.module), Some(t.well_defined)))
        }
        ["pxmod", x, y] => {
            let c = pxmod_comparison(&xmod(env, x)?, &xmod(env, y)?).map_err(err)?;
            let ok = c.surjective && c.boundary_compatible && c.kernel_matches;
            Ok((
                json!({
                    "map": int_matrix_json(&c.map),
                    "surjective": c.surjective,
                    "boundary_compatible": c.boundary_compatible,
                    "kernel": group_json(&c.kernel),
                }),
                Some(ok),
            ))
        }
        ["xmodsym", x, y] => {
            let s = xmod_symmetry(&xmod(env, x)?, &xmod(env, y)?).map_err(err)?;
            let ok = s.isomorphism && s.commutes;
            Ok((
                json!({"top": int_matrix_json(&s.top), "middle": int_matrix_json(&s.middle), "isomorphism": s.isomorphism, "commutes": s.commutes}),
                Some(ok),
            ))
        }
        ["abelianize", x] => {
            let Object::GXmod(g) = env.get(x).map_err(err)? else {
                return Err("expected a gxmod declaration".into());
            };
            Ok((xmod_json(&xmod_abelianize(&g).map_err(err)?), None))
        }
        ["table1", ring, a, b] => {
            let r = parse_ring(ring).ok_or_else(|| format!("unknown ring `{ring}`"))?;
            let t = table1(&r, &[int(a)?], &[int(b)?], false).map_err(err)?;
            let ok = t.agrees();
            Ok((serde_json::to_value(&t).map_err(err)?, Some(ok)))
        }
        ["check", suite, cases] => {
            let s = Suite::parse(suite).map_err(err)?;
            let r = run_suite(s, int(cases)?, seed);
            Ok((suite_json(&r), Some(r.ok())))
        }
        _ => Err(format!("unsupported command `{}`", cmd.words.join(" "))),
    }
}

/// Runs the commands in order; failures are recorded per command.
pub fn run(manifest: &Manifest, seed: u64) -> ResultDocument {
    let mut env = Env::new(manifest);
    let mut results = vec![];
    for cmd in &manifest.commands {
        let start = Instant::now();
        let (output, verdict, error) = match execute(&mut env, cmd, seed) {
            Ok((o, v)) => (o, v, None),
            Err(e) => (Json::Null, None, Some(e)),
        };
        results.push(CommandResult {
            line: cmd.line.0,
            command: cmd.words.join(" "),
            verdict,
            output,
            error,
            elapsed_ms: start.elapsed().as_millis(),
        });
    }
    ResultDocument::new(seed, results)
}

/// A document for `nilprod check`: one result per suite.
pub fn check_suites(suites: &[Suite], cases: usize, seed: u64) -> ResultDocument {
    let results = suites
        .iter()
        .map(|&s| {
            let r = run_suite(s, cases, seed);
            CommandResult {
                line: 0,
                command: format!("check {s} {cases}"),
                verdict: Some(r.ok()),
                output: suite_json(&r),
                error: None,
                elapsed_ms: r.elapsed_ms,
            }
        })
        .collect();
    ResultDocument::new(seed, results)
}

/// Removes timing fields so documents can be compared.
pub fn without_timing(doc: &ResultDocument) -> Json {
    let mut v = serde_json::to_value(doc).expect("serialisable");
    if let Some(rs) = v.get_mut("results").and_then(Json::as_array_mut) {
        for r in rs {
            if let Some(o) = r.as_object_mut() {
                o.remove("elapsed_ms");
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifest::parse_manifest;

    fn run_text(src: &str) -> ResultDocument {
        run(&parse_manifest(src).unwrap(), 1)
    }

    #[test]
    fn tensor_of_cyclic_groups() {
        let doc = run_text("[fgab a]\nfactors = [4]\n[fgab b]\nfactors = [6]\n[commands]\ntensor fgab a b\n");
        assert!(doc.passed);
        assert_eq!(doc.results[0].output["factors"], json!(["2"]));
    }

    #[test]
    fn heisenberg_ganea() {
        let doc = run_text("[lie h]\npreset = heisenberg\n[central z]\nalgebra = h\nspan = e3\n[commands]\nganea h z\n");
        let r = &doc.results[0];
        assert_eq!(r.error, None);
        assert_eq!(r.output["dims"], json!([2, 2, 1, 1, 2, 2]));
        assert_eq!(r.verdict, Some(true));
    }

    #[test]
    fn errors_are_embedded() {
        let doc = run_text("[lie h]\npreset = heisenberg\n[commands]\nlcsganea h 1\ncenter h\n");
        assert!(doc.results[0].error.is_some());
        assert_eq!(doc.results[1].output["dim"], json!(1));
        assert!(!doc.passed);
    }

    #[test]
    fn rationals_render_as_strings() {
        let m = QMatrix::from_rows(vec![vec![Q::new(1.into(), 2.into()), Q::from_integer((-3).into())]], 2);
        assert_eq!(matrix_json(&m), json!([["1/2", "-3"]]));
    }
}
