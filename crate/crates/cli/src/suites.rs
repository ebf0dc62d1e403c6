//! Randomized property suites. Every case draws from its own stream of a
//! seeded generator, so reports do not depend on scheduling.

use std::fmt;
use std::time::Instant;

use nilprod_core::exactlin::{Field, FgAbGroup, Q};
use nilprod_core::homology::{central_extension_validate, exactness_check, ganea_sequence, GaneaSequence};
use nilprod_core::nilgrp::{symmetry_gp, twist_matrix};
use nilprod_core::nonassoc::library::{heisenberg, sl2};
use nilprod_core::nonassoc::rep::standard_sl2;
use nilprod_core::nonassoc::{
    commute_nil_birkhoff_test, j_filtration, left_normed_chain, rep_tensor_lie, LieRep, Subspace,
};
use nilprod_core::operad2::{
    coproduct2, cosmash2, j_filtration2, lcs2, preset_operad, product2, right_exactness2, symmetry2, BaseRing,
    Nil2Algebra, RModule,
};
use nilprod_core::random::{
    random_ab_xmod, random_lie_central_extension, random_nil2_algebra, random_rep_pair, random_sc_algebra,
    random_surjection, seeded,
};
use nilprod_core::xmod::{pxmod_comparison, xmod_symmetry, xmod_tensor};
use nilprod_core::Variety;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuiteError {
    #[error("unknown suite `{0}`; expected one of {names}", names = Suite::ALL.map(|s| s.name()).join(", "))]
    Unknown(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Suite {
    Bilinearity,
    RightExact,
    Symmetry,
    Gamma,
    Ganea,
    Birkhoff,
    Kronecker,
    Xmod,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Bilinearity,
        Suite::RightExact,
        Suite::Symmetry,
        Suite::Gamma,
        Suite::Ganea,
        Suite::Birkhoff,
        Suite::Kronecker,
        Suite::Xmod,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bilinearity => "bilinearity",
            Suite::RightExact => "rightexact",
            Suite::Symmetry => "symmetry",
            Suite::Gamma => "gamma",
            Suite::Ganea => "ganea",
            Suite::Birkhoff => "birkhoff",
            Suite::Kronecker => "kronecker",
            Suite::Xmod => "xmod",
        }
    }

    pub fn parse(s: &str) -> Result<Suite, SuiteError> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| SuiteError::Unknown(s.to_string()))
    }

    /// One case; `Err` carries a description of the failure.
    pub fn run_case(self, rng: &mut ChaCha8Rng, case: usize) -> Result<(), String> {
        match self {
            Suite::Bilinearity => bilinearity_case(rng),
            Suite::RightExact => right_exact_case(rng, case),
            Suite::Symmetry => symmetry_case(rng),
            Suite::Gamma => gamma_case(rng, case),
            Suite::Ganea => ganea_case(rng, case),
            Suite::Birkhoff => birkhoff_case(rng),
            Suite::Kronecker => kronecker_case(rng, case),
            Suite::Xmod => xmod_case(rng),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseFailure {
    pub case: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<CaseFailure>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The generator for case `case`: the seed fixes the key, the case the stream.
pub fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    let mut rng = seeded(seed);
    rng.set_stream(case as u64);
    rng
}

pub fn run_suite(suite: Suite, cases: usize, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let failures: Vec<CaseFailure> = (0..cases)
        .into_par_iter()
        .filter_map(|case| {
            let mut rng = case_rng(seed, case);
            suite.run_case(&mut rng, case).err().map(|detail| CaseFailure { case, detail })
        })
        .collect();
    SuiteReport { suite, cases, passed: cases - failures.len(), failures, elapsed_ms: start.elapsed().as_millis() }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const PRESETS: [Variety; 4] = [Variety::Comm, Variety::Assoc, Variety::Lie, Variety::Leib];

fn rings() -> [BaseRing; 2] {
    [BaseRing::Field(Field::Rational), BaseRing::Integers]
}

/// `(A + B) <> C` against `(A <> C) x (B <> C)` for every preset over Q and Z.
fn bilinearity_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for ring in rings() {
        for v in PRESETS {
            let op = preset_operad(v, &ring).map_err(|e| e.to_string())?;
            let a = random_nil2_algebra(rng, &op, 3);
            let b = random_nil2_algebra(rng, &op, 3);
            let c = random_nil2_algebra(rng, &op, 3);
            let ab = coproduct2(&a, &b).map_err(|e| e.to_string())?.algebra;
            let lhs = cosmash2(&ab, &c).map_err(|e| e.to_string())?.algebra;
            let ac = cosmash2(&a, &c).map_err(|e| e.to_string())?.algebra;
            let bc = cosmash2(&b, &c).map_err(|e| e.to_string())?.algebra;
            let rhs = product2(&ac, &bc).map_err(|e| e.to_string())?.algebra;
            ensure(lhs.structure() == rhs.structure(), || {
                format!("{v} over {ring}: {:?} vs {:?}", lhs.structure(), rhs.structure())
            })?;
        }
    }
    Ok(())
}

fn right_exact_case(rng: &mut ChaCha8Rng, case: usize) -> Result<(), String> {
    let v = PRESETS[case % PRESETS.len()];
    let op = preset_operad(v, &BaseRing::Integers).map_err(|e| e.to_string())?;
    let x = random_nil2_algebra(rng, &op, 3);
    let (b, a, f) = random_surjection(rng, &BaseRing::Integers, 3);
    let r = right_exactness2(&x, &b, &a, &f).map_err(|e| e.to_string())?;
    ensure(r.exact(), || format!("{v}: {r:?}"))
}

/// The group symmetry is the negated twist; the Comm symmetry is the plain one.
fn symmetry_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let na = rng.gen_range(1..=3);
    let nb = rng.gen_range(1..=3);
    let (ga, gb) = (FgAbGroup::free(na), FgAbGroup::free(nb));
    let twist = twist_matrix(&ga, &gb, false);
    ensure(symmetry_gp(&ga, &gb) == twist.neg(), || format!("group symmetry on Z^{na} x Z^{nb}"))?;
    let op = preset_operad(Variety::Comm, &BaseRing::Integers).map_err(|e| e.to_string())?;
    let a = Nil2Algebra::abelian(&op, &RModule::free(na));
    let b = Nil2Algebra::abelian(&op, &RModule::free(nb));
    let s = symmetry2(&a, &b).map_err(|e| e.to_string())?.matrix;
    let same = s.shape() == twist.shape()
        && (0..twist.rows()).all(|r| (0..twist.cols()).all(|c| s[(r, c)] == Q::from_integer(twist[(r, c)].clone())));
    ensure(same, || format!("Comm symmetry on Z^{na} x Z^{nb}"))
}

/// All-bracketings filtration against the left-normed chain; the operad
/// engine's `J` against `[A, D, 0]`.
fn gamma_case(rng: &mut ChaCha8Rng, case: usize) -> Result<(), String> {
    let variety = [Variety::Lie, Variety::Leib, Variety::Assoc][case % 3];
    let field = if (case / 3).is_multiple_of(2) { Field::Rational } else { Field::prime(5).expect("5 is prime") };
    let a = random_sc_algebra(rng, &field, variety, 5);
    let j = j_filtration(&a, 4);
    let l = left_normed_chain(&a, 4);
    ensure(j == l, || {
        let dims = |s: &[Subspace]| s.iter().map(Subspace::dim).collect::<Vec<_>>();
        format!("{variety} over {field}, dim {}: {:?} vs {:?}", a.dim, dims(&j), dims(&l))
    })?;
    let ring = if case.is_multiple_of(2) { BaseRing::Integers } else { BaseRing::Field(field) };
    let op = preset_operad(PRESETS[case % PRESETS.len()], &ring).map_err(|e| e.to_string())?;
    let x = random_nil2_algebra(rng, &op, 4);
    let (jx, gx) = (j_filtration2(&x), lcs2(&x));
    for n in 0..3 {
        let eq = ring.span_eq(&x.module, &jx[n], &gx[n]);
        ensure(eq, || format!("operad filtration differs at level {}", n + 1))?;
    }
    Ok(())
}

/// The Heisenberg extension `0 -> Z -> h3 -> Q^2 -> 0`.
pub fn heisenberg_ganea(field: &Field) -> GaneaSequence {
    let h = heisenberg(field);
    let z = h.center();
    let e = central_extension_validate(&h, &z).expect("the center is a central ideal");
    ganea_sequence(&e).expect("Lie algebra")
}

/// A copy with `g3 : H2(A) -> K` replaced by zero, which must break
/// exactness at `K` whenever `g3` was nonzero.
pub fn corrupt(s: &GaneaSequence) -> GaneaSequence {
    let mut bad = s.clone();
    let m = &s.maps[2];
    bad.maps[2] = nilprod_core::exactlin::QMatrix::zeros(m.rows(), m.cols());
    bad
}

fn ganea_case(rng: &mut ChaCha8Rng, case: usize) -> Result<(), String> {
    if case == 0 {
        let s = heisenberg_ganea(&Field::Rational);
        ensure(s.dims == [2, 2, 1, 1, 2, 2], || format!("Heisenberg dims {:?}", s.dims))?;
        ensure(exactness_check(&s).exact, || "Heisenberg sequence is not exact".into())?;
        ensure(!exactness_check(&corrupt(&s)).exact, || "corrupted sequence passed".into())?;
        return Ok(());
    }
    let (b, k) = random_lie_central_extension(rng, &Field::Rational, 6, true);
    let e = central_extension_validate(&b, &k).map_err(|e| e.to_string())?;
    let s = ganea_sequence(&e).map_err(|e| e.to_string())?;
    let r = exactness_check(&s);
    ensure(r.exact, || format!("dim {} by {}: {:?}", b.dim, k.dim(), r))
}

fn birkhoff_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let a = random_sc_algebra(rng, &Field::Rational, Variety::Leib, 5);
    for n in [1, 2] {
        let r = commute_nil_birkhoff_test(&a, n).map_err(|e| e.to_string())?;
        ensure(r.isomorphic, || format!("n = {n}, dim {}: quotient dims {:?}", a.dim, r.dims))?;
    }
    Ok(())
}

/// `rho([x, y]) = [rho(x), rho(y)]` on basis pairs, recomputed here.
pub fn representation_defect(r: &LieRep) -> Option<(usize, usize)> {
    let g = &r.algebra;
    let f = &g.field;
    for i in 0..g.dim {
        for j in 0..g.dim {
            let (x, y) = (&r.rho[i], &r.rho[j]);
            let comm = f.reduce_matrix(&x.mul(y).sub(&y.mul(x)));
            if comm != r.act(&g.basis_product(i, j)) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Generalised eigenvalue multiplicities of `rho(h)` on `V_2 (x) V_2`.
pub fn sl2_weights(field: &Field) -> Vec<(i64, usize)> {
    let v = standard_sl2(field);
    let t = rep_tensor_lie(&v, &v).expect("same algebra");
    let h = t.act(&sl2(field).unit(2));
    [2, 0, -2].into_iter().map(|w| (w, field.generalized_eigenspace_dim(&h, &field.from_i64(w)))).collect()
}

fn kronecker_case(rng: &mut ChaCha8Rng, case: usize) -> Result<(), String> {
    if case == 0 {
        let w = sl2_weights(&Field::Rational);
        ensure(w == [(2, 1), (0, 2), (-2, 1)], || format!("sl2 weights {w:?}"))?;
    }
    let field = if case.is_multiple_of(2) { Field::Rational } else { Field::prime(5).expect("5 is prime") };
    let (x, y) = random_rep_pair(rng, &field);
    let t = rep_tensor_lie(&x, &y).map_err(|e| e.to_string())?;
    ensure(t.dim() == x.dim() * y.dim(), || "wrong dimension".into())?;
    ensure(representation_defect(&t).is_none(), || format!("axiom fails at {:?}", representation_defect(&t)))
}

fn xmod_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let m1 = random_ab_xmod(rng);
    let m2 = random_ab_xmod(rng);
    let t = xmod_tensor(&m1, &m2).map_err(|e| e.to_string())?;
    ensure(t.well_defined, || "epsilon does not vanish on the image of alpha".into())?;
    let s = xmod_symmetry(&m1, &m2).map_err(|e| e.to_string())?;
    ensure(s.isomorphism && s.commutes, || format!("symmetry: {s:?}"))?;
    let c = pxmod_comparison(&m1, &m2).map_err(|e| e.to_string())?;
    ensure(c.surjective && c.boundary_compatible && c.kernel_matches, || format!("comparison: {c:?}"))
}
