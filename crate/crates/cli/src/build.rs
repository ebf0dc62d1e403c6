//! Turning declarations into engine values.

use std::collections::HashMap;

use nilprod_core::exactlin::{FgAbGroup, Field, IntMatrix, Matrix, QMatrix, Q};
use nilprod_core::nilgrp::{parse_word, FpGroupPresentation};
use nilprod_core::nonassoc::library;
use nilprod_core::nonassoc::rep::standard_sl2;
use nilprod_core::nonassoc::{LieRep, SCAlgebra, Subspace};
use nilprod_core::operad2::{module_operad, operad_from_bifunctor_data, preset_operad, BaseRing, Nil2Algebra, Nil2Operad, RModule};
use nilprod_core::xmod::{AbCrossedModule, GroupXModInput};
use nilprod_core::Variety;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::manifest::{basis_index, parse_lincomb, Declaration, Entry, Kind, Manifest, ManifestError, Value};

#[derive(Clone, Debug)]
pub enum Object {
    Fgab(FgAbGroup),
    Gp(FpGroupPresentation),
    Operad(Nil2Operad),
    Nil2Alg(Nil2Algebra),
    Sc(SCAlgebra),
    LieRep(LieRep),
    Xmod(AbCrossedModule),
    GXmod(GroupXModInput),
    /// a subspace of a declared algebra; `central` declarations are checked later
    Subspace { algebra: String, space: Subspace },
}

fn invalid(line: usize, msg: impl Into<String>) -> ManifestError {
    ManifestError::Invalid { line, msg: msg.into() }
}

fn required<'a>(d: &'a Declaration, key: &str) -> Result<&'a Entry, ManifestError> {
    d.get(key).ok_or_else(|| invalid(d.line.0, format!("[{} {}] needs `{key}`", d.kind, d.name)))
}

fn text(e: &Entry) -> Result<&str, ManifestError> {
    match &e.value {
        Value::Text(s) => Ok(s),
        v => Err(invalid(e.line.0, format!("`{}` expects text, found {v}", e.key))),
    }
}

fn list(e: &Entry) -> Result<&[Q], ManifestError> {
    match &e.value {
        Value::List(xs) => Ok(xs),
        v => Err(invalid(e.line.0, format!("`{}` expects a list, found {v}", e.key))),
    }
}

fn integers(e: &Entry) -> Result<Vec<BigInt>, ManifestError> {
    list(e)?
        .iter()
        .map(|x| x.is_integer().then(|| x.to_integer()).ok_or_else(|| invalid(e.line.0, format!("`{}` entries must be integers", e.key))))
        .collect()
}

fn usize_of(e: &Entry) -> Result<usize, ManifestError> {
    text(e)?.trim().parse().map_err(|_| invalid(e.line.0, format!("`{}` must be a nonnegative integer", e.key)))
}

/// A matrix value; `[]` stands for a matrix with no rows.
fn matrix(e: &Entry, rows: usize, cols: usize) -> Result<QMatrix, ManifestError> {
    let m = match &e.value {
        Value::Matrix(r) => Matrix::from_rows(r.clone(), r.first().map_or(0, |x| x.len())),
        Value::List(xs) if xs.is_empty() => QMatrix::zeros(0, cols),
        v => return Err(invalid(e.line.0, format!("`{}` expects a matrix, found {v}", e.key))),
    };
    if m.shape() != (rows, cols) {
        return Err(invalid(e.line.0, format!("`{}` must be {rows} x {cols}, found {} x {}", e.key, m.rows(), m.cols())));
    }
    Ok(m)
}

fn int_matrix(m: &QMatrix, line: usize) -> Result<IntMatrix, ManifestError> {
    if m.data().iter().any(|x| !x.is_integer()) {
        return Err(invalid(line, "integer matrix expected"));
    }
    Ok(Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_integer()))
}

pub fn parse_field(s: &str) -> Option<Field> {
    match s.trim() {
        "Q" => Some(Field::Rational),
        f => f.strip_prefix('F').and_then(|p| p.parse().ok()).and_then(|p| Field::prime(p).ok()),
    }
}

pub fn parse_ring(s: &str) -> Option<BaseRing> {
    match s.trim() {
        "Z" => Some(BaseRing::Integers),
        other => parse_field(other).map(BaseRing::Field),
    }
}

fn field_of(d: &Declaration) -> Result<Field, ManifestError> {
    match d.get("field") {
        None => Ok(Field::Rational),
        Some(e) => parse_field(text(e)?).ok_or_else(|| invalid(e.line.0, "field must be Q or Fp for a prime p")),
    }
}

fn variety_of(kind: Kind) -> Option<Variety> {
    match kind {
        Kind::Lie => Some(Variety::Lie),
        Kind::Leib => Some(Variety::Leib),
        Kind::Assoc => Some(Variety::Assoc),
        Kind::Comm => Some(Variety::Comm),
        _ => None,
    }
}

pub fn parse_variety(s: &str) -> Option<Variety> {
    match s.trim().to_ascii_lowercase().as_str() {
        "comm" => Some(Variety::Comm),
        "assoc" => Some(Variety::Assoc),
        "lie" => Some(Variety::Lie),
        "leib" => Some(Variety::Leib),
        _ => None,
    }
}

/// Splits on commas outside brackets, so `[a, b], a^2` has two items.
fn comma_list(s: &str) -> Vec<String> {
    let mut items = vec![];
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                items.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    items.push(cur);
    items.into_iter().map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

/// Lazily built values of a manifest's declarations.
pub struct Env<'m> {
    pub manifest: &'m Manifest,
    cache: HashMap<String, Object>,
}

impl<'m> Env<'m> {
    pub fn new(manifest: &'m Manifest) -> Self {
        Env { manifest, cache: HashMap::new() }
    }

    pub fn get(&mut self, name: &str) -> Result<Object, ManifestError> {
        if let Some(o) = self.cache.get(name) {
            return Ok(o.clone());
        }
        let d = self
            .manifest
            .declaration(name)
            .ok_or_else(|| ManifestError::UnresolvedReference { name: name.to_string(), line: 0 })?;
        let o = self.build(d)?;
        self.cache.insert(name.to_string(), o.clone());
        Ok(o)
    }

    pub fn algebra(&mut self, name: &str) -> Result<SCAlgebra, ManifestError> {
        match self.get(name)? {
            Object::Sc(a) => Ok(a),
            _ => Err(invalid(0, format!("`{name}` is not an algebra"))),
        }
    }

    fn build(&mut self, d: &Declaration) -> Result<Object, ManifestError> {
        let line = d.line.0;
        Ok(match d.kind {
            Kind::Fgab => {
                if let Some(e) = d.get("factors") {
                    let f = integers(e)?;
                    Object::Fgab(FgAbGroup::from_invariant_factors(f).map_err(|err| invalid(e.line.0, err.to_string()))?)
                } else {
                    let e = required(d, "orders")?;
                    Object::Fgab(FgAbGroup::from_cyclic_orders(&integers(e)?))
                }
            }
            Kind::Gp => Object::Gp(self.build_gp(d)?),
            Kind::Operad => Object::Operad(build_operad(d)?),
            Kind::Nil2Alg => {
                let e = required(d, "operad")?;
                let Object::Operad(op) = self.get(text(e)?)? else {
                    return Err(invalid(e.line.0, "`operad` must name an operad"));
                };
                Object::Nil2Alg(build_nil2(d, &op)?)
            }
            k if k.is_algebra() => Object::Sc(build_sc(d, variety_of(k))?),
            Kind::LieRep => {
                let e = required(d, "algebra")?;
                let g = self.algebra(text(e)?)?;
                Object::LieRep(build_rep(d, &g)?)
            }
            Kind::Xmod => {
                let g = FgAbGroup::from_invariant_factors(integers(required(d, "g")?)?)
                    .map_err(|err| invalid(line, err.to_string()))?;
                let a = FgAbGroup::from_invariant_factors(integers(required(d, "a")?)?)
                    .map_err(|err| invalid(line, err.to_string()))?;
                let de = required(d, "d")?;
                let m = int_matrix(&matrix(de, g.ngens(), a.ngens())?, de.line.0)?;
                Object::Xmod(AbCrossedModule::new(g, a, m).map_err(|err| invalid(de.line.0, err.to_string()))?)
            }
            Kind::GXmod => {
                let ge = required(d, "g")?;
                let ae = required(d, "a")?;
                let Object::Gp(g) = self.get(text(ge)?)? else { unreachable!("checked by the parser") };
                let Object::Gp(a) = self.get(text(ae)?)? else { unreachable!("checked by the parser") };
                let ab = nilprod_core::nilgrp::abelianization_gp(&a);
                let n = ab.ngens();
                let mut action = vec![IntMatrix::identity(n); g.generators.len()];
                for e in d.all("action") {
                    let [gen] = e.args.as_slice() else {
                        return Err(invalid(e.line.0, "write `action <generator> = matrix`"));
                    };
                    let idx = g
                        .generators
                        .iter()
                        .position(|x| x == gen)
                        .ok_or_else(|| invalid(e.line.0, format!("`{gen}` is not a generator of G")))?;
                    action[idx] = int_matrix(&matrix(e, n, n)?, e.line.0)?;
                }
                let be = required(d, "boundary")?;
                let words = comma_list(text(be)?);
                if words.len() != a.generators.len() {
                    return Err(invalid(be.line.0, "one boundary word per generator of A"));
                }
                let boundary = words
                    .iter()
                    .map(|w| parse_word(w, &g.generators).map_err(|err| invalid(be.line.0, err.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                Object::GXmod(GroupXModInput { g, a, action, boundary })
            }
            Kind::Central | Kind::Ideal => {
                let e = required(d, "algebra")?;
                let name = text(e)?.to_string();
                let alg = self.algebra(&name)?;
                let se = d.get("span").or_else(|| d.get("kernel")).ok_or_else(|| invalid(line, "needs `span`"))?;
                let vecs = comma_list(text(se)?)
                    .iter()
                    .map(|t| parse_lincomb(t, alg.dim, se.line.0))
                    .collect::<Result<Vec<_>, _>>()?;
                Object::Subspace { algebra: name, space: Subspace::from_vectors(&alg.field, alg.dim, &vecs) }
            }
            _ => unreachable!("every kind is handled"),
        })
    }

    fn build_gp(&mut self, d: &Declaration) -> Result<FpGroupPresentation, ManifestError> {
        if let Some(e) = d.get("cyclic") {
            let n = usize_of(e)?;
            return Ok(FpGroupPresentation::cyclic(n as i64));
        }
        if let Some(e) = d.get("free") {
            return Ok(FpGroupPresentation::free(usize_of(e)?));
        }
        let ge = required(d, "generators")?;
        let gens: Vec<String> = text(ge)?.replace(',', " ").split_whitespace().map(String::from).collect();
        let rels = match d.get("relators") {
            Some(e) => comma_list(text(e)?),
            None => vec![],
        };
        let g: Vec<&str> = gens.iter().map(String::as_str).collect();
        let r: Vec<&str> = rels.iter().map(String::as_str).collect();
        FpGroupPresentation::parse(&g, &r).map_err(|err| invalid(d.line.0, err.to_string()))
    }
}

fn build_operad(d: &Declaration) -> Result<Nil2Operad, ManifestError> {
    let ring = match d.get("ring") {
        None => BaseRing::Field(Field::Rational),
        Some(e) => parse_ring(text(e)?).ok_or_else(|| invalid(e.line.0, "ring must be Z, Q or Fp"))?,
    };
    if let Some(e) = d.get("preset") {
        let name = text(e)?;
        if name.eq_ignore_ascii_case("mod") {
            return Ok(module_operad(&ring));
        }
        let v = parse_variety(name).ok_or_else(|| invalid(e.line.0, format!("unknown preset `{name}`")))?;
        return preset_operad(v, &ring).map_err(|err| invalid(e.line.0, err.to_string()));
    }
    let pe = required(d, "p2")?;
    let p2 = RModule { orders: integers(pe)? };
    let te = required(d, "t")?;
    let t = matrix(te, p2.ngens(), p2.ngens())?;
    operad_from_bifunctor_data(&ring, &p2, &t).map_err(|err| invalid(te.line.0, err.to_string()))
}

fn build_nil2(d: &Declaration, op: &Nil2Operad) -> Result<Nil2Algebra, ManifestError> {
    let me = required(d, "module")?;
    let module = RModule { orders: integers(me)? };
    let n = module.ngens();
    let decomposables = match d.get("decomposables") {
        Some(e) => {
            let cols = match &e.value {
                Value::Matrix(r) => r.first().map_or(0, |x| x.len()),
                _ => 0,
            };
            matrix(e, n, cols)?
        }
        None => QMatrix::zeros(n, 0),
    };
    let p = op.p2_dim();
    let mut products = QMatrix::zeros(n, n * n * p);
    let mut given = vec![false; n * n * p];
    let mut entries = vec![];
    for e in d.all("product") {
        let (i, j, x) = match e.args.as_slice() {
            [a, b] => (a, b, 0),
            [a, b, x] => {
                let k: usize = x
                    .strip_prefix('x')
                    .and_then(|s| s.parse().ok())
                    .filter(|&k| k >= 1 && k <= p)
                    .ok_or_else(|| invalid(e.line.0, format!("`{x}` is not an operation x1..x{p}")))?;
                (a, b, k - 1)
            }
            _ => return Err(invalid(e.line.0, "write `product eI eJ [xK] = combination`")),
        };
        if p == 0 {
            return Err(invalid(e.line.0, "this operad has no binary operations"));
        }
        let bi = basis_index(i, n).ok_or_else(|| invalid(e.line.0, format!("`{i}` is not a generator")))?;
        let bj = basis_index(j, n).ok_or_else(|| invalid(e.line.0, format!("`{j}` is not a generator")))?;
        let v = parse_lincomb(text(e)?, n, e.line.0)?;
        let col = (bi * n + bj) * p + x;
        for r in 0..n {
            products[(r, col)] = v[r].clone();
        }
        given[col] = true;
        entries.push((bi, bj, x, v));
    }
    // fill mu(e_j, e_i; t x) = mu(e_i, e_j; x) where not stated
    for (bi, bj, x, v) in entries {
        for y in 0..p {
            let c = &op.t[(y, x)];
            let col = (bj * n + bi) * p + y;
            if c.is_zero() || given[col] {
                continue;
            }
            for r in 0..n {
                products[(r, col)] += c * &v[r];
            }
        }
    }
    Nil2Algebra::from_products(op, &module, &decomposables, &products).map_err(|err| invalid(d.line.0, err.to_string()))
}

fn library_algebra(name: &str, field: &Field) -> Option<SCAlgebra> {
    Some(match name {
        "sl2" => library::sl2(field),
        "heisenberg" => library::heisenberg(field),
        "r2" => library::r2(field),
        "scaling3" => library::scaling3(field),
        "leibniz_square" => library::leibniz_square(field),
        "upper_triangular" => library::upper_triangular(field),
        "matrices2" => library::matrices2(field),
        "idempotent" => library::idempotent(field),
        "dual_numbers" => library::dual_numbers(field),
        other => {
            let n: usize = other.strip_prefix("filiform")?.parse().ok().filter(|&n| n >= 2)?;
            library::filiform(field, n)
        }
    })
}

fn build_sc(d: &Declaration, variety: Option<Variety>) -> Result<SCAlgebra, ManifestError> {
    let field = field_of(d)?;
    if let Some(e) = d.get("preset") {
        let a = library_algebra(text(e)?, &field).ok_or_else(|| invalid(e.line.0, format!("unknown algebra `{}`", text(e).unwrap_or(""))))?;
        let v = variety.or(a.variety);
        return a.with_variety(v).map_err(|err| invalid(e.line.0, err.to_string()));
    }
    let dim = usize_of(required(d, "dim")?)?;
    let mut products = vec![];
    for e in d.entries.iter().filter(|e| e.key == "bracket" || e.key == "product") {
        let [i, j] = e.args.as_slice() else {
            return Err(invalid(e.line.0, format!("write `{} eI eJ = combination`", e.key)));
        };
        let bi = basis_index(i, dim).ok_or_else(|| invalid(e.line.0, format!("`{i}` is not a basis vector")))?;
        let bj = basis_index(j, dim).ok_or_else(|| invalid(e.line.0, format!("`{j}` is not a basis vector")))?;
        let v = parse_lincomb(text(e)?, dim, e.line.0)?;
        if variety == Some(Variety::Comm) && bi != bj {
            products.push((bj, bi, v.clone()));
        }
        products.push((bi, bj, v));
    }
    SCAlgebra::from_products(&field, dim, &products, variety).map_err(|err| invalid(d.line.0, err.to_string()))
}

fn build_rep(d: &Declaration, g: &SCAlgebra) -> Result<LieRep, ManifestError> {
    let fail = |line: usize| move |err: nilprod_core::nonassoc::NonassocError| invalid(line, err.to_string());
    if let Some(e) = d.get("preset") {
        return match text(e)? {
            "adjoint" => LieRep::adjoint(g).map_err(fail(e.line.0)),
            "standard" => Ok(standard_sl2(&g.field)),
            "trivial" => {
                let dim = d.get("dim").map(usize_of).transpose()?.unwrap_or(1);
                LieRep::trivial(g, dim).map_err(fail(e.line.0))
            }
            other => Err(invalid(e.line.0, format!("unknown representation `{other}`"))),
        };
    }
    let dim = usize_of(required(d, "dim")?)?;
    let mut rho = vec![QMatrix::zeros(dim, dim); g.dim];
    for e in d.all("rho") {
        let [x] = e.args.as_slice() else {
            return Err(invalid(e.line.0, "write `rho eI = matrix`"));
        };
        let i = basis_index(x, g.dim).ok_or_else(|| invalid(e.line.0, format!("`{x}` is not a basis vector")))?;
        rho[i] = matrix(e, dim, dim)?.map(|v| g.field.norm(v.clone()));
    }
    LieRep::new(g, rho).map_err(fail(d.line.0))
}
