//! Groups: abelianisation of presentations, the class-2 coproduct `A +2 B` of
//! abelian groups, cosmash products, commutators and the twisted symmetry.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactlin::{
    fgab_from_presentation, hom_kernel, tensor_element, tensor_fgab, ExactError, FgAbGroup,
    IntMatrix, Matrix, Subgroup,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NilgrpError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed word `{word}`: {reason}")]
    BadWord { word: String, reason: String },
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// One letter of a word: generator index and whether it is inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

pub type Word = Vec<Letter>;

pub fn invert_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| Letter { gen: l.gen, inverse: !l.inverse }).collect()
}

fn power_word(w: &[Letter], k: i64) -> Word {
    let base = if k < 0 { invert_word(w) } else { w.to_vec() };
    let mut out = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
    for _ in 0..k.unsigned_abs() {
        out.extend_from_slice(&base);
    }
    out
}

/// A finitely presented group `<generators | relators>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FpGroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl FpGroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, NilgrpError> {
        for w in &relators {
            for l in w {
                if l.gen >= generators.len() {
                    return Err(NilgrpError::UnknownGenerator(format!("#{}", l.gen)));
                }
            }
        }
        Ok(FpGroupPresentation { generators, relators })
    }

    /// Parses relators written as words such as `a^2`, `(a b)^-3`, `[a, b]` or `1`.
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self, NilgrpError> {
        let generators: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let relators = relators
            .iter()
            .map(|r| parse_word(r, &generators))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FpGroupPresentation { generators, relators })
    }

    pub fn free(rank: usize) -> Self {
        FpGroupPresentation {
            generators: (1..=rank).map(|i| format!("x{i}")).collect(),
            relators: vec![],
        }
    }

    pub fn cyclic(n: i64) -> Self {
        let x = Letter { gen: 0, inverse: false };
        FpGroupPresentation { generators: vec!["x".into()], relators: vec![power_word(&[x], n)] }
    }

    /// Relator-by-generator matrix of exponent sums.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let n = self.generators.len();
        let mut m = IntMatrix::zeros(self.relators.len(), n);
        for (r, w) in self.relators.iter().enumerate() {
            for l in w {
                let delta = if l.inverse { -BigInt::one() } else { BigInt::one() };
                m[(r, l.gen)] += delta;
            }
        }
        m
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|l| {
                let name = &self.generators[l.gen];
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

struct WordParser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
    generators: &'a [String],
}

impl WordParser<'_> {
    fn err(&self, reason: &str) -> NilgrpError {
        NilgrpError::BadWord { word: self.src.to_string(), reason: reason.to_string() }
    }

    fn skip(&mut self) {
        while self.pos < self.chars.len() && (self.chars[self.pos].is_whitespace() || self.chars[self.pos] == '*') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip();
        self.chars.get(self.pos).copied()
    }

    fn word(&mut self, stop: &[char]) -> Result<Word, NilgrpError> {
        let mut out = vec![];
        loop {
            match self.peek() {
                None => return Ok(out),
                Some(c) if stop.contains(&c) => return Ok(out),
                Some(_) => {
                    let f = self.factor()?;
                    out.extend(f);
                }
            }
        }
    }

    fn factor(&mut self) -> Result<Word, NilgrpError> {
        let atom = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.int()?;
            return Ok(power_word(&atom, k));
        }
        Ok(atom)
    }

    fn int(&mut self) -> Result<i64, NilgrpError> {
        self.skip();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| self.err("expected an integer exponent"))
    }

    fn atom(&mut self) -> Result<Word, NilgrpError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word(&[')'])?;
                if self.peek() != Some(')') {
                    return Err(self.err("unclosed parenthesis"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some('[') => {
                self.pos += 1;
                let x = self.word(&[','])?;
                if self.peek() != Some(',') {
                    return Err(self.err("commutator needs two entries"));
                }
                self.pos += 1;
                let y = self.word(&[']'])?;
                if self.peek() != Some(']') {
                    return Err(self.err("unclosed commutator"));
                }
                self.pos += 1;
                let mut w = x.clone();
                w.extend(y.iter().copied());
                w.extend(invert_word(&x));
                w.extend(invert_word(&y));
                Ok(w)
            }
            Some('1') => {
                self.pos += 1;
                Ok(vec![])
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let gen = self
                    .generators
                    .iter()
                    .position(|g| *g == name)
                    .ok_or(NilgrpError::UnknownGenerator(name))?;
                Ok(vec![Letter { gen, inverse: false }])
            }
            Some(c) => Err(self.err(&format!("unexpected character `{c}`"))),
            None => Err(self.err("unexpected end of word")),
        }
    }
}

pub fn parse_word(src: &str, generators: &[String]) -> Result<Word, NilgrpError> {
    let mut p = WordParser { src, chars: src.chars().collect(), pos: 0, generators };
    let w = p.word(&[])?;
    if p.pos < p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(w)
}

/// `X / [X, X]` as the cokernel of the exponent-sum matrix.
pub fn abelianization_gp(p: &FpGroupPresentation) -> FgAbGroup {
    fgab_from_presentation(&p.exponent_matrix())
}

/// `X (x) Y = ab(X) (x) ab(Y)`; the result's witness labels generator pairs.
#[derive(Clone, Debug)]
pub struct BilinearGp {
    pub ab_x: FgAbGroup,
    pub ab_y: FgAbGroup,
    pub product: FgAbGroup,
}

pub fn bilinear_product_gp(x: &FpGroupPresentation, y: &FpGroupPresentation) -> BilinearGp {
    let ab_x = abelianization_gp(x);
    let ab_y = abelianization_gp(y);
    let product = tensor_fgab(&ab_x, &ab_y);
    BilinearGp { ab_x, ab_y, product }
}

/// Normal form `i1(a) i2(b) c` with `c = t` central.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Nil2Element {
    pub a: Vec<BigInt>,
    pub b: Vec<BigInt>,
    pub t: Vec<BigInt>,
}

impl fmt::Display for Nil2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({}; {}; {})", show(&self.a), show(&self.b), show(&self.t))
    }
}

/// `A +2 B`: carrier `A x B x (A (x) B)` with
/// `(a,b,t)(a',b',t') = (a+a', b+b', t+t' - a' (x) b)`.
#[derive(Clone, Debug)]
pub struct Nil2CoproductGroup {
    pub a: FgAbGroup,
    pub b: FgAbGroup,
    pub t: FgAbGroup,
}

fn add(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    x.iter().zip(y).map(|(p, q)| p + q).collect()
}

fn sub(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    x.iter().zip(y).map(|(p, q)| p - q).collect()
}

fn neg(x: &[BigInt]) -> Vec<BigInt> {
    x.iter().map(|p| -p).collect()
}

fn scale(x: &[BigInt], k: &BigInt) -> Vec<BigInt> {
    x.iter().map(|p| p * k).collect()
}

pub fn nil2_coproduct(a: &FgAbGroup, b: &FgAbGroup) -> Nil2CoproductGroup {
    let t = tensor_fgab(a, b);
    Nil2CoproductGroup { a: a.clone(), b: b.clone(), t }
}

impl Nil2CoproductGroup {
    pub fn element(&self, a: &[BigInt], b: &[BigInt], t: &[BigInt]) -> Result<Nil2Element, NilgrpError> {
        if a.len() != self.a.ngens() || b.len() != self.b.ngens() || t.len() != self.t.ngens() {
            return Err(NilgrpError::GroupMismatch);
        }
        Ok(Nil2Element { a: self.a.reduce(a), b: self.b.reduce(b), t: self.t.reduce(t) })
    }

    fn check(&self, g: &Nil2Element) -> Result<(), NilgrpError> {
        if g.a.len() != self.a.ngens() || g.b.len() != self.b.ngens() || g.t.len() != self.t.ngens() {
            return Err(NilgrpError::GroupMismatch);
        }
        Ok(())
    }

    pub fn identity(&self) -> Nil2Element {
        Nil2Element {
            a: vec![BigInt::zero(); self.a.ngens()],
            b: vec![BigInt::zero(); self.b.ngens()],
            t: vec![BigInt::zero(); self.t.ngens()],
        }
    }

    pub fn i1(&self, a: &[BigInt]) -> Nil2Element {
        Nil2Element { a: self.a.reduce(a), ..self.identity() }
    }

    pub fn i2(&self, b: &[BigInt]) -> Nil2Element {
        Nil2Element { b: self.b.reduce(b), ..self.identity() }
    }

    pub fn central(&self, t: &[BigInt]) -> Nil2Element {
        Nil2Element { t: self.t.reduce(t), ..self.identity() }
    }

    /// Canonical coordinates of `a (x) b` in `T`.
    pub fn tensor(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        tensor_element(&self.t, a, b)
    }

    pub fn mul(&self, g: &Nil2Element, h: &Nil2Element) -> Result<Nil2Element, NilgrpError> {
        self.check(g)?;
        self.check(h)?;
        let cross = self.tensor(&h.a, &g.b);
        Ok(Nil2Element {
            a: self.a.reduce(&add(&g.a, &h.a)),
            b: self.b.reduce(&add(&g.b, &h.b)),
            t: self.t.reduce(&sub(&add(&g.t, &h.t), &cross)),
        })
    }

    pub fn inv(&self, g: &Nil2Element) -> Result<Nil2Element, NilgrpError> {
        self.check(g)?;
        let ab = self.tensor(&g.a, &g.b);
        Ok(Nil2Element {
            a: self.a.reduce(&neg(&g.a)),
            b: self.b.reduce(&neg(&g.b)),
            t: self.t.reduce(&sub(&neg(&g.t), &ab)),
        })
    }

    /// `g^n = (n a, n b, n t - C(n,2) a (x) b)`, valid for every integer `n`.
    pub fn pow(&self, g: &Nil2Element, n: &BigInt) -> Result<Nil2Element, NilgrpError> {
        self.check(g)?;
        let binom = n * (n - BigInt::one()) / BigInt::from(2);
        let ab = self.tensor(&g.a, &g.b);
        Ok(Nil2Element {
            a: self.a.reduce(&scale(&g.a, n)),
            b: self.b.reduce(&scale(&g.b, n)),
            t: self.t.reduce(&sub(&scale(&g.t, n), &scale(&ab, &binom))),
        })
    }

    /// `g h g^-1 h^-1`.
    pub fn commutator(&self, g: &Nil2Element, h: &Nil2Element) -> Result<Nil2Element, NilgrpError> {
        let gh = self.mul(g, h)?;
        let gi = self.inv(g)?;
        let hi = self.inv(h)?;
        self.mul(&self.mul(&gh, &gi)?, &hi)
    }

    /// The retraction onto `A x B`.
    pub fn retraction(&self, g: &Nil2Element) -> (Vec<BigInt>, Vec<BigInt>) {
        (g.a.clone(), g.b.clone())
    }

    pub fn generators(&self) -> Vec<Nil2Element> {
        let mut out = vec![];
        for k in 0..self.a.ngens() {
            let mut e = vec![BigInt::zero(); self.a.ngens()];
            e[k] = BigInt::one();
            out.push(self.i1(&e));
        }
        for k in 0..self.b.ngens() {
            let mut e = vec![BigInt::zero(); self.b.ngens()];
            e[k] = BigInt::one();
            out.push(self.i2(&e));
        }
        out
    }

    pub fn order(&self) -> Option<BigInt> {
        Some(self.a.order()? * self.b.order()? * self.t.order()?)
    }

    /// All elements of a finite coproduct.
    pub fn elements(&self) -> Option<Vec<Nil2Element>> {
        let (ea, eb, et) = (self.a.elements()?, self.b.elements()?, self.t.elements()?);
        let mut out = Vec::with_capacity(ea.len() * eb.len() * et.len());
        for a in &ea {
            for b in &eb {
                for t in &et {
                    out.push(Nil2Element { a: a.clone(), b: b.clone(), t: t.clone() });
                }
            }
        }
        Some(out)
    }

    pub fn is_central(&self, g: &Nil2Element) -> Result<bool, NilgrpError> {
        for h in self.generators() {
            if self.commutator(g, &h)? != self.identity() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The center as `K_A x K_B x T`, where `K_A` is the kernel of
    /// `a -> (a (x) e_l)_l` and `K_B` the kernel of `b -> (e_k (x) b)_k`.
    pub fn center(&self) -> Result<CenterGp, NilgrpError> {
        let na = self.a.ngens();
        let nb = self.b.ngens();
        let nt = self.t.ngens();
        let t_sum: Vec<BigInt> =
            (0..nb.max(na)).flat_map(|_| self.t.factors().iter().cloned()).collect();
        let unit = |n: usize, i: usize| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            e
        };
        let fa = Matrix::from_fn(nt * nb, na, |r, c| {
            let (l, k) = (r / nt, r % nt);
            self.tensor(&unit(na, c), &unit(nb, l))[k].clone()
        });
        let fb = Matrix::from_fn(nt * na, nb, |r, c| {
            let (l, k) = (r / nt, r % nt);
            self.tensor(&unit(na, l), &unit(nb, c))[k].clone()
        });
        let target_a = FgAbGroup::from_cyclic_orders(&t_sum[..nt * nb]);
        let target_b = FgAbGroup::from_cyclic_orders(&t_sum[..nt * na]);
        let ka = hom_kernel(&target_a.to_canonical().mul(&fa), &self.a, &target_a)?;
        let kb = hom_kernel(&target_b.to_canonical().mul(&fb), &self.b, &target_b)?;
        let structure = ka.structure.direct_sum(&kb.structure).direct_sum(&self.t);
        Ok(CenterGp { a_part: ka, b_part: kb, structure })
    }

    /// Nilpotency class: 0 for the trivial group, 1 if abelian, otherwise 2.
    pub fn class(&self) -> Result<usize, NilgrpError> {
        if self.order() == Some(BigInt::one()) {
            return Ok(0);
        }
        let gens = self.generators();
        let d = higgins_commutator_nil2(self, &gens, &gens)?;
        Ok(if d.subgroup.structure.is_trivial() { 1 } else { 2 })
    }
}

#[derive(Clone, Debug)]
pub struct CenterGp {
    pub a_part: Subgroup,
    pub b_part: Subgroup,
    pub structure: FgAbGroup,
}

/// `A <> B`: the kernel `{(0, 0, t)}` of the retraction, identified with `A (x) B`.
#[derive(Clone, Debug)]
pub struct CosmashGp {
    pub coproduct: Nil2CoproductGroup,
    pub group: FgAbGroup,
}

impl CosmashGp {
    pub fn include(&self, t: &[BigInt]) -> Nil2Element {
        self.coproduct.central(t)
    }
}

pub fn cosmash_gp(a: &FgAbGroup, b: &FgAbGroup) -> CosmashGp {
    let coproduct = nil2_coproduct(a, b);
    let group = coproduct.t.clone();
    CosmashGp { coproduct, group }
}

/// `[K, L]` inside a class-2 group: generated by the central elements `[k, l]`.
#[derive(Clone, Debug)]
pub struct HigginsNil2 {
    pub generators: Vec<Nil2Element>,
    /// the subgroup of `T` they generate
    pub subgroup: Subgroup,
}

pub fn higgins_commutator_nil2(
    g: &Nil2CoproductGroup,
    k_gens: &[Nil2Element],
    l_gens: &[Nil2Element],
) -> Result<HigginsNil2, NilgrpError> {
    let mut generators = vec![];
    for k in k_gens {
        for l in l_gens {
            let c = g.commutator(k, l)?;
            debug_assert!(c.a.iter().chain(&c.b).all(|x| x.is_zero()));
            generators.push(c);
        }
    }
    let cols: Vec<Vec<BigInt>> = generators.iter().map(|c| c.t.clone()).collect();
    let subgroup = Subgroup::generated_by(&g.t, &IntMatrix::from_cols(&cols, g.t.ngens()));
    Ok(HigginsNil2 { generators, subgroup })
}

/// `a (x) b -> -(b (x) a)` from `A (x) B` to `B (x) A` in canonical coordinates.
pub fn symmetry_gp(a: &FgAbGroup, b: &FgAbGroup) -> IntMatrix {
    twist_matrix(a, b, true)
}

/// The plain twist `a (x) b -> b (x) a` (or its negative).
pub fn twist_matrix(a: &FgAbGroup, b: &FgAbGroup, negate: bool) -> IntMatrix {
    let ab = tensor_fgab(a, b);
    let ba = tensor_fgab(b, a);
    let (na, nb) = (a.ngens(), b.ngens());
    let perm: Vec<usize> = (0..na * nb).map(|idx| (idx % nb) * na + idx / nb).collect();
    let swap = IntMatrix::permutation(&perm);
    let m = ba.to_canonical().mul(&swap).mul(&ab.from_canonical());
    let m = if negate { m.neg() } else { m };
    ba.reduce_columns(&m)
}

/// Product of canonical generators `g_1^{n_1} ... g_k^{n_k}` in order.
pub fn evaluate_power_product(
    g: &Nil2CoproductGroup,
    gens: &[Nil2Element],
    exps: &[BigInt],
) -> Result<Nil2Element, NilgrpError> {
    let mut acc = g.identity();
    for (x, n) in gens.iter().zip(exps) {
        acc = g.mul(&acc, &g.pow(x, n)?)?;
    }
    Ok(acc)
}

/// Membership in the subgroup generated by `gens`: solve on `A x B`, then in `T`.
pub fn subgroup_contains(
    g: &Nil2CoproductGroup,
    gens: &[Nil2Element],
    x: &Nil2Element,
) -> Result<bool, NilgrpError> {
    let na = g.a.ngens();
    let nb = g.b.ngens();
    let orders: Vec<BigInt> = g.a.factors().iter().chain(g.b.factors()).cloned().collect();
    let cols: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|h| h.a.iter().chain(&h.b).cloned().collect())
        .collect();
    let gm = IntMatrix::from_cols(&cols, na + nb);
    let rel = IntMatrix::diagonal(&orders);
    let full = gm.hstack(&rel);
    let target: Vec<BigInt> = x.a.iter().chain(&x.b).cloned().collect();
    let Some(sol) = crate::exactlin::solve_int(&full, &target) else {
        return Ok(false);
    };
    let base = evaluate_power_product(g, gens, &sol[..gens.len()])?;
    let rest = g.mul(&g.inv(&base)?, x)?;
    // H intersected with T: commutators plus images of relations among the generators
    let mut central = higgins_commutator_nil2(g, gens, gens)?.generators;
    let kernel = crate::exactlin::int_kernel(&full);
    for c in kernel.columns() {
        central.push(evaluate_power_product(g, gens, &c[..gens.len()])?);
    }
    let tcols: Vec<Vec<BigInt>> = central.iter().map(|c| c.t.clone()).collect();
    let sub = Subgroup::generated_by(&g.t, &IntMatrix::from_cols(&tcols, g.t.ngens()));
    Ok(sub.contains(&rest.t))
}

pub fn is_negative_identity(m: &IntMatrix, group: &FgAbGroup) -> bool {
    let n = group.ngens();
    m.shape() == (n, n)
        && (0..n).all(|j| {
            let mut e = vec![BigInt::zero(); n];
            e[j] = -BigInt::one();
            group.reduce(&m.col(j)) == group.reduce(&e)
        })
}

pub fn abs_vec(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| x.abs()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn zs(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| z(x)).collect()
    }

    fn factor_list(g: &FgAbGroup) -> Vec<BigInt> {
        g.factors().to_vec()
    }

    #[test]
    fn abelianizations() {
        let p = FpGroupPresentation::parse(&["x"], &["x^4"]).unwrap();
        assert_eq!(factor_list(&abelianization_gp(&p)), zs(&[4]));
        let s3 = FpGroupPresentation::parse(&["a", "b"], &["a^2", "b^3", "(a b)^2"]).unwrap();
        assert_eq!(s3.exponent_matrix(), IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3], &[2, 2]]));
        assert_eq!(factor_list(&abelianization_gp(&s3)), zs(&[2]));
        assert_eq!(factor_list(&abelianization_gp(&FpGroupPresentation::free(2))), zs(&[0, 0]));
    }

    #[test]
    fn word_parser() {
        let gens: Vec<String> = vec!["a".into(), "b".into()];
        let w = parse_word("[a, b]", &gens).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(parse_word("1", &gens).unwrap(), vec![]);
        assert_eq!(parse_word("(a b^-1)^-2", &gens).unwrap().len(), 4);
        assert!(matches!(parse_word("c", &gens), Err(NilgrpError::UnknownGenerator(_))));
        assert!(parse_word("(a", &gens).is_err());
    }

    #[test]
    fn quaternion_bilinear() {
        let q8 = FpGroupPresentation::parse(&["i", "j"], &["i^4", "i^2 j^-2", "i j i j^-1"]).unwrap();
        let r = bilinear_product_gp(&q8, &q8);
        assert_eq!(factor_list(&r.ab_x), zs(&[2, 2]));
        assert_eq!(factor_list(&r.product), zs(&[2, 2, 2, 2]));
        let trivial = FpGroupPresentation::parse(&["x"], &["x"]).unwrap();
        assert!(bilinear_product_gp(&q8, &trivial).product.is_trivial());
    }

    #[test]
    fn law_examples() {
        let c2 = FgAbGroup::cyclic(2);
        let g = nil2_coproduct(&c2, &c2);
        let x = g.i1(&zs(&[1]));
        let y = g.i2(&zs(&[1]));
        assert_eq!(g.mul(&x, &y).unwrap(), g.element(&zs(&[1]), &zs(&[1]), &zs(&[0])).unwrap());
        assert_eq!(g.mul(&y, &x).unwrap(), g.element(&zs(&[1]), &zs(&[1]), &zs(&[-1])).unwrap());
        assert_eq!(g.commutator(&x, &y).unwrap(), g.central(&zs(&[1])));
    }

    #[test]
    fn commutator_signs_over_z() {
        let z1 = FgAbGroup::free(1);
        let g = nil2_coproduct(&z1, &z1);
        let x = g.i1(&zs(&[3]));
        let y = g.i2(&zs(&[5]));
        assert_eq!(g.commutator(&x, &y).unwrap(), g.central(&zs(&[15])));
        assert_eq!(g.commutator(&y, &x).unwrap(), g.central(&zs(&[-15])));
        assert_eq!(g.commutator(&x, &x).unwrap(), g.identity());
    }

    #[test]
    fn heisenberg_relations_and_center() {
        let z1 = FgAbGroup::free(1);
        let g = nil2_coproduct(&z1, &z1);
        let x = g.i1(&zs(&[1]));
        let y = g.i2(&zs(&[1]));
        let c = g.commutator(&x, &y).unwrap();
        assert_eq!(g.commutator(&x, &c).unwrap(), g.identity());
        assert_eq!(g.commutator(&y, &c).unwrap(), g.identity());
        let center = g.center().unwrap();
        assert_eq!(factor_list(&center.structure), zs(&[0]));
        assert!(center.a_part.structure.is_trivial());
        assert_eq!(g.class().unwrap(), 2);
    }

    #[test]
    fn unit_coproduct() {
        let g = nil2_coproduct(&FgAbGroup::trivial(), &FgAbGroup::cyclic(5));
        assert_eq!(g.order(), Some(z(5)));
        assert_eq!(g.class().unwrap(), 1);
    }

    #[test]
    fn power_formula_matches_repeated_product() {
        let z1 = FgAbGroup::free(1);
        let g = nil2_coproduct(&z1, &z1);
        let h = g.element(&zs(&[2]), &zs(&[-3]), &zs(&[1])).unwrap();
        let mut acc = g.identity();
        for n in 1..6 {
            acc = g.mul(&acc, &h).unwrap();
            assert_eq!(g.pow(&h, &z(n)).unwrap(), acc);
        }
        let inv = g.inv(&h).unwrap();
        assert_eq!(g.pow(&h, &z(-1)).unwrap(), inv);
        assert_eq!(g.pow(&h, &z(-2)).unwrap(), g.mul(&inv, &inv).unwrap());
    }

    #[test]
    fn higgins_examples() {
        let z1 = FgAbGroup::free(1);
        let g = nil2_coproduct(&z1, &z1);
        let gens = g.generators();
        let d = higgins_commutator_nil2(&g, &gens, &gens).unwrap();
        assert_eq!(factor_list(&d.subgroup.structure), zs(&[0]));
        let center = vec![g.central(&zs(&[1]))];
        assert!(higgins_commutator_nil2(&g, &center, &gens).unwrap().subgroup.structure.is_trivial());
        let k = vec![g.i1(&zs(&[1]))];
        let l = vec![g.i2(&zs(&[1]))];
        assert_eq!(higgins_commutator_nil2(&g, &k, &l).unwrap().subgroup.structure, g.t);
    }

    #[test]
    fn cosmash_examples() {
        assert!(cosmash_gp(&FgAbGroup::cyclic(2), &FgAbGroup::cyclic(3)).group.is_trivial());
        assert!(cosmash_gp(&FgAbGroup::cyclic(7), &FgAbGroup::trivial()).group.is_trivial());
        let c = cosmash_gp(&FgAbGroup::free(1), &FgAbGroup::free(1));
        let g = &c.coproduct;
        assert_eq!(g.commutator(&g.i1(&zs(&[1])), &g.i2(&zs(&[1]))).unwrap(), c.include(&zs(&[1])));
    }

    #[test]
    fn symmetry_signs() {
        let z1 = FgAbGroup::free(1);
        assert_eq!(symmetry_gp(&z1, &z1), IntMatrix::from_i64_rows(&[&[-1]]));
        let c2 = FgAbGroup::cyclic(2);
        assert_eq!(symmetry_gp(&c2, &c2), twist_matrix(&c2, &c2, false));
        let a = FgAbGroup::from_cyclic_orders(&zs(&[0, 6]));
        let b = FgAbGroup::from_cyclic_orders(&zs(&[4, 0]));
        let back = symmetry_gp(&b, &a).mul(&symmetry_gp(&a, &b));
        let ab = tensor_fgab(&a, &b);
        assert_eq!(ab.reduce_columns(&back), ab.reduce_columns(&IntMatrix::identity(ab.ngens())));
    }

    #[test]
    fn subgroup_membership() {
        let z1 = FgAbGroup::free(1);
        let g = nil2_coproduct(&z1, &z1);
        let x2 = g.i1(&zs(&[2]));
        let y = g.i2(&zs(&[1]));
        let gens = vec![x2.clone(), y.clone()];
        // [x^2, y] = central 2 lies in <x^2, y>, central 1 does not
        assert!(subgroup_contains(&g, &gens, &g.central(&zs(&[2]))).unwrap());
        assert!(!subgroup_contains(&g, &gens, &g.central(&zs(&[1]))).unwrap());
        assert!(!subgroup_contains(&g, &gens, &g.i1(&zs(&[1]))).unwrap());
        let prod = g.mul(&y, &x2).unwrap();
        assert!(subgroup_contains(&g, &gens, &prod).unwrap());
    }
}
