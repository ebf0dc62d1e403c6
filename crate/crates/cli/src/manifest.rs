//! Line-oriented manifests.
//!
//! ```text
//! # comment
//! [fgab A]
//! factors = [4]
//!
//! [lie h3]
//! dim = 3
//! bracket e1 e2 = e3
//!
//! [commands]
//! tensor fgab A A
//! ```
//!
//! A section `[kind name]` holds `key args = value` lines. Values are rational
//! lists `[1, -1/2]`, matrices `[[1, 0], [0, 1]]` or free text interpreted by
//! the declaration. `[commands]` holds whitespace-separated command lines.

use std::collections::HashMap;
use std::fmt;

use nilprod_core::exactlin::Q;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ManifestError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: `{name}` is already declared on line {first}")]
    DuplicateName { name: String, line: usize, first: usize },
    #[error("line {line}: `{name}` is not declared")]
    UnresolvedReference { name: String, line: usize },
    #[error("line {line}: `{name}` is a {found} declaration, expected {expected}")]
    KindMismatch { name: String, line: usize, expected: String, found: String },
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
}

impl ManifestError {
    pub fn line(&self) -> usize {
        match self {
            ManifestError::Syntax { line, .. }
            | ManifestError::DuplicateName { line, .. }
            | ManifestError::UnresolvedReference { line, .. }
            | ManifestError::KindMismatch { line, .. }
            | ManifestError::Invalid { line, .. } => *line,
        }
    }
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ManifestError {
    ManifestError::Syntax { line, col, msg: msg.into() }
}

/// Source line of an item. Positions are diagnostics only and never take
/// part in equality.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Line(pub usize);

impl PartialEq for Line {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    Fgab,
    Gp,
    Operad,
    Nil2Alg,
    Sc,
    Lie,
    Leib,
    Assoc,
    Comm,
    LieRep,
    Xmod,
    GXmod,
    Central,
    Ideal,
}

impl Kind {
    pub const ALL: [Kind; 14] = [
        Kind::Fgab,
        Kind::Gp,
        Kind::Operad,
        Kind::Nil2Alg,
        Kind::Sc,
        Kind::Lie,
        Kind::Leib,
        Kind::Assoc,
        Kind::Comm,
        Kind::LieRep,
        Kind::Xmod,
        Kind::GXmod,
        Kind::Central,
        Kind::Ideal,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Fgab => "fgab",
            Kind::Gp => "gp",
            Kind::Operad => "operad",
            Kind::Nil2Alg => "nil2alg",
            Kind::Sc => "sc",
            Kind::Lie => "lie",
            Kind::Leib => "leib",
            Kind::Assoc => "assoc",
            Kind::Comm => "comm",
            Kind::LieRep => "lierep",
            Kind::Xmod => "xmod",
            Kind::GXmod => "gxmod",
            Kind::Central => "central",
            Kind::Ideal => "ideal",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.keyword() == s)
    }

    /// Structure-constant algebras of any tag.
    pub fn is_algebra(self) -> bool {
        matches!(self, Kind::Sc | Kind::Lie | Kind::Leib | Kind::Assoc | Kind::Comm)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Value {
    List(Vec<Q>),
    Matrix(Vec<Vec<Q>>),
    Text(String),
}

pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn format_list(xs: &[Q]) -> String {
    format!("[{}]", xs.iter().map(format_q).collect::<Vec<_>>().join(", "))
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::List(xs) => f.write_str(&format_list(xs)),
            Value::Matrix(rows) => {
                write!(f, "[{}]", rows.iter().map(|r| format_list(r)).collect::<Vec<_>>().join(", "))
            }
            Value::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub key: String,
    pub args: Vec<String>,
    pub value: Value,
    pub line: Line,
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, " = {}", self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Declaration {
    pub kind: Kind,
    pub name: String,
    pub entries: Vec<Entry>,
    pub line: Line,
}

impl Declaration {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.entries.iter().filter(move |e| e.key == key)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Command {
    pub words: Vec<String>,
    pub line: Line,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.words.join(" "))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Manifest {
    pub declarations: Vec<Declaration>,
    pub commands: Vec<Command>,
}

impl Manifest {
    pub fn declaration(&self, name: &str) -> Option<&Declaration> {
        self.declarations.iter().find(|d| d.name == name)
    }
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.declarations {
            writeln!(f, "[{} {}]", d.kind, d.name)?;
            for e in &d.entries {
                writeln!(f, "{e}")?;
            }
            writeln!(f)?;
        }
        if !self.commands.is_empty() {
            writeln!(f, "[commands]")?;
            for c in &self.commands {
                writeln!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
}

/// Parses `-3`, `7`, `2/5`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

struct ValueParser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    _src: &'a str,
}

impl ValueParser<'_> {
    fn err(&self, msg: &str) -> ManifestError {
        syntax(self.line, self.col0 + self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ManifestError> {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn number(&mut self) -> Result<Q, ManifestError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && !matches!(self.chars[self.pos], ',' | ']' | '[') {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        parse_rational(&text).ok_or_else(|| syntax(self.line, self.col0 + start, format!("`{}` is not a number", text.trim())))
    }

    fn list(&mut self) -> Result<Vec<Q>, ManifestError> {
        self.expect('[')?;
        let mut out = vec![];
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&']') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            self.skip_ws();
            match self.chars.get(self.pos) {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected `,` or `]`")),
            }
        }
    }

    fn matrix(&mut self) -> Result<Vec<Vec<Q>>, ManifestError> {
        self.expect('[')?;
        let mut rows = vec![];
        loop {
            rows.push(self.list()?);
            self.skip_ws();
            match self.chars.get(self.pos) {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected `,` or `]`")),
            }
        }
        if rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(self.err("matrix rows differ in length"));
        }
        Ok(rows)
    }
}

fn parse_value(text: &str, line: usize, col0: usize) -> Result<Value, ManifestError> {
    let t = text.trim();
    let lead = text.len() - text.trim_start().len();
    if t.is_empty() {
        return Err(syntax(line, col0 + lead, "missing value"));
    }
    if !t.starts_with('[') {
        return Ok(Value::Text(t.to_string()));
    }
    let mut p = ValueParser { chars: t.chars().collect(), pos: 0, line, col0: col0 + lead, _src: t };
    let is_matrix = t[1..].trim_start().starts_with('[');
    let v = if is_matrix { Value::Matrix(p.matrix()?) } else { Value::List(p.list()?) };
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("trailing characters after value"));
    }
    Ok(v)
}

/// Keys whose values are words or combinations even when they start with `[`.
pub const WORD_KEYS: [&str; 5] = ["generators", "relators", "boundary", "span", "kernel"];

fn parse_entry(text: &str, line: usize, col0: usize) -> Result<Entry, ManifestError> {
    let Some(eq) = text.find('=') else {
        return Err(syntax(line, col0, "expected `key = value`"));
    };
    let lhs: Vec<&str> = text[..eq].split_whitespace().collect();
    let Some((key, args)) = lhs.split_first() else {
        return Err(syntax(line, col0, "missing key before `=`"));
    };
    if !is_identifier(key) {
        return Err(syntax(line, col0, format!("`{key}` is not a valid key")));
    }
    let rhs = &text[eq + 1..];
    let value = if WORD_KEYS.contains(key) && !rhs.trim().is_empty() {
        Value::Text(rhs.trim().to_string())
    } else {
        parse_value(rhs, line, col0 + eq + 1)?
    };
    Ok(Entry {
        key: key.to_string(),
        args: args.iter().map(|s| s.to_string()).collect(),
        value,
        line: Line(line),
    })
}

enum Section {
    None,
    Decl(usize),
    Commands,
}

fn strip_comment(raw: &str) -> &str {
    match raw.find('#') {
        Some(i) => &raw[..i],
        None => raw,
    }
}

/// Parses and checks a manifest: syntax, unique names, resolvable references
/// and kinds.
pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    let mut m = Manifest::default();
    let mut section = Section::None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = strip_comment(raw);
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = body.len() - trimmed.len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(close) = rest.find(']') else {
                return Err(syntax(line, indent + 1, "unclosed section header"));
            };
            let header: Vec<&str> = rest[..close].split_whitespace().collect();
            let tail = &rest[close + 1..];
            match header.as_slice() {
                ["commands"] => {
                    section = Section::Commands;
                    if !tail.trim().is_empty() {
                        m.commands.push(Command {
                            words: tail.split_whitespace().map(String::from).collect(),
                            line: Line(line),
                        });
                    }
                }
                [kind, name] => {
                    let Some(kind) = Kind::from_keyword(kind) else {
                        return Err(syntax(line, indent + 2, format!("unknown kind `{kind}`")));
                    };
                    if !is_identifier(name) {
                        return Err(syntax(line, indent + 2, format!("`{name}` is not a valid name")));
                    }
                    if let Some(prev) = m.declaration(name) {
                        return Err(ManifestError::DuplicateName {
                            name: name.to_string(),
                            line,
                            first: prev.line.0,
                        });
                    }
                    m.declarations.push(Declaration {
                        kind,
                        name: name.to_string(),
                        entries: vec![],
                        line: Line(line),
                    });
                    section = Section::Decl(m.declarations.len() - 1);
                    if !tail.trim().is_empty() {
                        let col = indent + close + 3;
                        let e = parse_entry(tail, line, col)?;
                        m.declarations.last_mut().expect("just pushed").entries.push(e);
                    }
                }
                _ => return Err(syntax(line, indent + 1, "expected `[kind name]` or `[commands]`")),
            }
            continue;
        }
        match section {
            Section::None => return Err(syntax(line, indent + 1, "content before the first section")),
            Section::Decl(i) => {
                let e = parse_entry(body, line, 1)?;
                m.declarations[i].entries.push(e);
            }
            Section::Commands => m.commands.push(Command {
                words: trimmed.split_whitespace().map(String::from).collect(),
                line: Line(line),
            }),
        }
    }
    check_references(&m)?;
    Ok(m)
}

/// What a command argument must be.
#[derive(Clone, Copy, Debug)]
pub enum Arg {
    Ref(&'static [Kind]),
    Int,
    Word,
}

const ALGEBRAS: &[Kind] = &[Kind::Sc, Kind::Lie, Kind::Leib, Kind::Assoc, Kind::Comm];
const LIE_LIKE: &[Kind] = &[Kind::Lie, Kind::Sc];

/// Argument signature of each command, after its name.
pub fn command_signature(words: &[String]) -> Option<Vec<Arg>> {
    use Arg::*;
    let sig = match words.first()?.as_str() {
        "tensor" => match words.get(1).map(String::as_str) {
            Some("fgab") => vec![Word, Ref(&[Kind::Fgab]), Ref(&[Kind::Fgab])],
            Some("gp") => vec![Word, Ref(&[Kind::Gp]), Ref(&[Kind::Gp])],
            _ => return None,
        },
        "nil2" | "symmetry" => vec![Ref(&[Kind::Fgab]), Ref(&[Kind::Fgab])],
        "cosmash" | "coproduct" | "symmetry2" => vec![Ref(&[Kind::Nil2Alg]), Ref(&[Kind::Nil2Alg])],
        "validate" | "filtration2" => vec![Ref(&[Kind::Nil2Alg])],
        "bilinear" => {
            const BOTH: &[Kind] = &[Kind::Nil2Alg, Kind::Sc, Kind::Lie, Kind::Leib, Kind::Assoc, Kind::Comm];
            vec![Ref(BOTH), Ref(BOTH)]
        }
        "lcs" | "identity" | "reflect" | "center" => vec![Ref(ALGEBRAS)],
        "nilpotentise" => vec![Ref(ALGEBRAS), Int],
        "commute" => vec![Ref(&[Kind::Leib, Kind::Lie, Kind::Sc]), Int],
        "homology" | "lcsganea" => vec![Ref(LIE_LIKE), Int],
        "higgins" => vec![Ref(ALGEBRAS), Ref(&[Kind::Ideal, Kind::Central]), Ref(&[Kind::Ideal, Kind::Central])],
        "ternary" => vec![
            Ref(ALGEBRAS),
            Ref(&[Kind::Ideal, Kind::Central]),
            Ref(&[Kind::Ideal, Kind::Central]),
            Ref(&[Kind::Ideal, Kind::Central]),
        ],
        "abext" => vec![Ref(ALGEBRAS), Ref(&[Kind::Ideal, Kind::Central])],
        "ganea" => vec![Ref(LIE_LIKE), Ref(&[Kind::Central, Kind::Ideal])],
        "kronecker" => vec![Ref(&[Kind::LieRep]), Ref(&[Kind::LieRep])],
        "xmod" | "pxmod" | "xmodsym" => vec![Ref(&[Kind::Xmod]), Ref(&[Kind::Xmod])],
        "abelianize" => vec![Ref(&[Kind::GXmod])],
        "table1" => vec![Word, Int, Int],
        "check" => vec![Word, Int],
        _ => return None,
    };
    Some(sig)
}

/// Keys that name other declarations, by declaration kind.
fn reference_keys(kind: Kind) -> &'static [(&'static str, &'static [Kind])] {
    match kind {
        Kind::Nil2Alg => &[("operad", &[Kind::Operad])],
        Kind::LieRep => &[("algebra", LIE_LIKE)],
        Kind::Central | Kind::Ideal => &[("algebra", ALGEBRAS)],
        Kind::GXmod => &[("g", &[Kind::Gp]), ("a", &[Kind::Gp])],
        _ => &[],
    }
}

fn expect_kind(m: &HashMap<&str, Kind>, name: &str, allowed: &[Kind], line: usize) -> Result<(), ManifestError> {
    let Some(&found) = m.get(name) else {
        return Err(ManifestError::UnresolvedReference { name: name.to_string(), line });
    };
    if !allowed.contains(&found) {
        let expected = allowed.iter().map(|k| k.keyword()).collect::<Vec<_>>().join(" or ");
        return Err(ManifestError::KindMismatch { name: name.to_string(), line, expected, found: found.to_string() });
    }
    Ok(())
}

fn check_references(m: &Manifest) -> Result<(), ManifestError> {
    let kinds: HashMap<&str, Kind> = m.declarations.iter().map(|d| (d.name.as_str(), d.kind)).collect();
    for d in &m.declarations {
        for (key, allowed) in reference_keys(d.kind) {
            if let Some(e) = d.get(key) {
                let Value::Text(name) = &e.value else {
                    return Err(ManifestError::Invalid { line: e.line.0, msg: format!("`{key}` must name a declaration") });
                };
                expect_kind(&kinds, name, allowed, e.line.0)?;
            }
        }
    }
    for c in &m.commands {
        let line = c.line.0;
        let Some(sig) = command_signature(&c.words) else {
            return Err(syntax(line, 1, format!("unknown command `{}`", c)));
        };
        let args = &c.words[1..];
        if args.len() != sig.len() {
            return Err(syntax(line, 1, format!("`{}` takes {} arguments, found {}", c.words[0], sig.len(), args.len())));
        }
        for (a, s) in args.iter().zip(&sig) {
            match s {
                Arg::Ref(allowed) => expect_kind(&kinds, a, allowed, line)?,
                Arg::Int => {
                    if a.parse::<usize>().is_err() {
                        return Err(ManifestError::Invalid { line, msg: format!("`{a}` is not a nonnegative integer") });
                    }
                }
                Arg::Word => {}
            }
        }
    }
    Ok(())
}

/// Parses `e1 + 2 e3 - 1/2 e2` (1-based basis indices) into a vector.
pub fn parse_lincomb(text: &str, dim: usize, line: usize) -> Result<Vec<Q>, ManifestError> {
    let bad = |msg: String| ManifestError::Invalid { line, msg };
    let mut out = vec![Q::zero(); dim];
    let t = text.trim();
    if t == "0" {
        return Ok(out);
    }
    let normalised = t.replace('-', "+-");
    for term in normalised.split('+') {
        let term = term.trim();
        if term.is_empty() {
            continue;
        }
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-Q::one(), b.trim()),
            None => (Q::one(), term),
        };
        let body = body.replace('*', " ");
        let parts: Vec<&str> = body.split_whitespace().collect();
        let (coeff, basis) = match parts.as_slice() {
            [b] => (Q::one(), *b),
            [c, b] => (parse_rational(c).ok_or_else(|| bad(format!("`{c}` is not a coefficient")))?, *b),
            _ => return Err(bad(format!("cannot read term `{term}`"))),
        };
        let idx = basis_index(basis, dim).ok_or_else(|| bad(format!("`{basis}` is not a basis vector e1..e{dim}")))?;
        out[idx] += sign * coeff;
    }
    Ok(out)
}

/// `e3` -> `2` (zero-based), checked against `dim`.
pub fn basis_index(s: &str, dim: usize) -> Option<usize> {
    let k: usize = s.strip_prefix('e')?.parse().ok()?;
    (k >= 1 && k <= dim).then(|| k - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_line_declaration() {
        let m = parse_manifest("[fgab A] factors = [4]").unwrap();
        assert_eq!(m.declarations.len(), 1);
        assert_eq!(m.declarations[0].get("factors").unwrap().value, Value::List(vec![Q::from_integer(4.into())]));
    }

    #[test]
    fn heisenberg() {
        let m = parse_manifest("[lie h3]\ndim = 3\nbracket e1 e2 = e3\n").unwrap();
        let e = m.declarations[0].get("bracket").unwrap();
        assert_eq!(e.args, vec!["e1", "e2"]);
        assert_eq!(e.value, Value::Text("e3".into()));
    }

    #[test]
    fn unresolved_reference_reports_line() {
        let err = parse_manifest("[fgab A] factors = [2]\n\n[commands]\ntensor fgab A B\n").unwrap_err();
        assert_eq!(err, ManifestError::UnresolvedReference { name: "B".into(), line: 4 });
    }

    #[test]
    fn kind_mismatch_and_duplicates() {
        let err = parse_manifest("[fgab A] factors = [2]\n[commands]\nlcs A\n").unwrap_err();
        assert!(matches!(err, ManifestError::KindMismatch { line: 3, .. }));
        let err = parse_manifest("[fgab A] factors = [2]\n[gp A]\ncyclic = 3\n").unwrap_err();
        assert_eq!(err, ManifestError::DuplicateName { name: "A".into(), line: 2, first: 1 });
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let err = parse_manifest("[fgab A]\nfactors = [4, x]\n").unwrap_err();
        assert_eq!(err, ManifestError::Syntax { line: 2, col: 15, msg: "`x` is not a number".into() });
        assert!(matches!(parse_manifest("dim = 3"), Err(ManifestError::Syntax { line: 1, col: 1, .. })));
        assert!(matches!(parse_manifest("[widget w]"), Err(ManifestError::Syntax { .. })));
    }

    #[test]
    fn lincomb() {
        let v = parse_lincomb("e1 - 1/2 e3 + 2*e2", 3, 1).unwrap();
        assert_eq!(v, vec![Q::one(), Q::from_integer(2.into()), Q::new((-1).into(), 2.into())]);
        assert!(parse_lincomb("e4", 3, 1).is_err());
    }
}
