//! SMT-LIB v2 QF_NRA scripts to polynomial sets.
//!
//! Every arithmetic atom `p ρ q` reachable from an `assert` contributes the
//! polynomial `p − q`, whatever Boolean structure surrounds it. Supported:
//! `set-logic QF_NRA`, `set-info`, `set-option`, nullary `declare-fun` and
//! `declare-const` of sort `Real`, `assert`, `check-sat`, `get-model`,
//! `exit`; connectives `and or not =>`, `let`; relations
//! `< <= > >= = distinct`; arithmetic `+ - * /` (division by numeric
//! constants only) and `^` with a literal exponent. Anything else is an
//! error naming the construct and its position.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::polyarith::{PolySet, Polynomial, Variables};

const MAX_DEPTH: usize = 512;
const MAX_EXPONENT: u32 = 256;
const MAX_TERMS: usize = 100_000;
const MAX_DEGREE: u64 = 10_000;
const MAX_BITS: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct SmtError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SmtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SMT-LIB line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

fn fail<T>(pos: Pos, message: impl Into<String>) -> Result<T, SmtError> {
    Err(SmtError { line: pos.line, column: pos.column, message: message.into() })
}

/// A parsed problem: its identifier, variables in declaration order and
/// the polynomial set of its atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    pub problem_id: String,
    pub variables: Variables,
    pub polys: PolySet,
}

#[derive(Clone, Debug, PartialEq)]
enum Atom {
    Symbol(String),
    Keyword(String),
    Numeral(BigInt),
    /// Decimal literal as numerator over a power of ten.
    Decimal(BigInt, BigInt),
    Str,
}

#[derive(Clone, Debug)]
enum SExpr {
    Atom(Atom, Pos),
    List(Vec<SExpr>, Pos),
}

impl SExpr {
    fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    fn symbol(&self) -> Option<&str> {
        match self {
            SExpr::Atom(Atom::Symbol(s), _) => Some(s),
            _ => None,
        }
    }
}

struct Reader<'a> {
    src: &'a [u8],
    text: &'a str,
    i: usize,
    line: usize,
    column: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader { src: text.as_bytes(), text, i: 0, line: 1, column: 1 }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, column: self.column }
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.i];
        self.i += 1;
        if c == b'\n' {
            self.line += 1;
            self.column = 1;
        } else if c & 0xC0 != 0x80 {
            self.column += 1;
        }
        c
    }

    fn skip_trivia(&mut self) {
        while self.i < self.src.len() {
            match self.src[self.i] {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.bump();
                }
                b';' => {
                    while self.i < self.src.len() && self.src[self.i] != b'\n' {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn next(&mut self, depth: usize) -> Result<Option<SExpr>, SmtError> {
        self.skip_trivia();
        if self.i >= self.src.len() {
            return Ok(None);
        }
        let pos = self.pos();
        if depth > MAX_DEPTH {
            return fail(pos, "expression nested too deeply");
        }
        match self.src[self.i] {
            b'(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    if self.i >= self.src.len() {
                        return fail(pos, "unclosed `(`");
                    }
                    if self.src[self.i] == b')' {
                        self.bump();
                        return Ok(Some(SExpr::List(items, pos)));
                    }
                    match self.next(depth + 1)? {
                        Some(e) => items.push(e),
                        None => return fail(pos, "unclosed `(`"),
                    }
                }
            }
            b')' => fail(pos, "unexpected `)`"),
            b'"' => {
                self.bump();
                loop {
                    if self.i >= self.src.len() {
                        return fail(pos, "unterminated string literal");
                    }
                    if self.bump() == b'"' {
                        // "" is an escaped quote
                        if self.i < self.src.len() && self.src[self.i] == b'"' {
                            self.bump();
                            continue;
                        }
                        return Ok(Some(SExpr::Atom(Atom::Str, pos)));
                    }
                }
            }
            b'|' => {
                self.bump();
                let start = self.i;
                while self.i < self.src.len() && self.src[self.i] != b'|' {
                    self.bump();
                }
                if self.i >= self.src.len() {
                    return fail(pos, "unterminated quoted symbol");
                }
                let name = self.text[start..self.i].to_string();
                self.bump();
                Ok(Some(SExpr::Atom(Atom::Symbol(name), pos)))
            }
            _ => {
                let start = self.i;
                while self.i < self.src.len() {
                    let c = self.src[self.i];
                    if matches!(c, b' ' | b'\t' | b'\r' | b'\n' | b'(' | b')' | b';' | b'"' | b'|') {
                        break;
                    }
                    self.bump();
                }
                let tok = &self.text[start..self.i];
                Ok(Some(SExpr::Atom(classify(tok, pos)?, pos)))
            }
        }
    }
}

fn classify(tok: &str, pos: Pos) -> Result<Atom, SmtError> {
    let bytes = tok.as_bytes();
    if bytes[0].is_ascii_digit() {
        if let Some((int, frac)) = tok.split_once('.') {
            if int.is_empty() || frac.is_empty() || !(int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())) {
                return fail(pos, format!("malformed decimal `{tok}`"));
            }
            let num: BigInt = format!("{int}{frac}").parse().expect("digits");
            let den = num_traits::pow(BigInt::from(10), frac.len());
            return Ok(Atom::Decimal(num, den));
        }
        if !bytes.iter().all(u8::is_ascii_digit) {
            return fail(pos, format!("malformed numeral `{tok}`"));
        }
        return Ok(Atom::Numeral(tok.parse().expect("digits")));
    }
    if let Some(kw) = tok.strip_prefix(':') {
        return Ok(Atom::Keyword(kw.to_string()));
    }
    if tok.starts_with('#') {
        return fail(pos, format!("unsupported literal `{tok}`"));
    }
    Ok(Atom::Symbol(tok.to_string()))
}

/// Rational polynomial `num / den` with `den > 0`.
#[derive(Clone, Debug)]
struct RatPoly {
    num: Polynomial,
    den: BigInt,
}

impl RatPoly {
    fn int(p: Polynomial) -> Self {
        RatPoly { num: p, den: BigInt::one() }
    }

    fn reduced(num: Polynomial, den: BigInt) -> Self {
        let g = num.integer_content().gcd(&den);
        if g.is_zero() || g.is_one() {
            return RatPoly { num, den };
        }
        RatPoly { num: num.div_integer(&g), den: &den / &g }
    }

    fn add(&self, o: &RatPoly) -> RatPoly {
        let num = &self.num.scale(&o.den) + &o.num.scale(&self.den);
        RatPoly::reduced(num, &self.den * &o.den)
    }

    fn neg(&self) -> RatPoly {
        RatPoly { num: -&self.num, den: self.den.clone() }
    }

    fn mul(&self, o: &RatPoly, pos: Pos) -> Result<RatPoly, SmtError> {
        if self.num.num_terms().saturating_mul(o.num.num_terms()) > MAX_TERMS
            || self.num.total_degree() + o.num.total_degree() > MAX_DEGREE
            || self.bits() + o.bits() > MAX_BITS
        {
            return fail(pos, "polynomial too large");
        }
        let num = &self.num * &o.num;
        if num.num_terms() > MAX_TERMS {
            return fail(pos, "polynomial too large");
        }
        Ok(RatPoly::reduced(num, &self.den * &o.den))
    }

    fn bits(&self) -> u64 {
        let coeff = self.num.terms().map(|(_, c)| c.bits()).max().unwrap_or(0);
        coeff + self.den.bits()
    }

    /// `(num, den)` of a constant.
    fn as_constant(&self) -> Option<(BigInt, BigInt)> {
        self.num.constant_value().map(|c| (c, self.den.clone()))
    }
}

#[derive(Clone, Debug)]
enum Value {
    Arith(RatPoly),
    /// Atom polynomials collected from a formula.
    Bool(BTreeSet<Polynomial>),
}

struct Script {
    decls: Vec<String>,
    positions: HashMap<String, usize>,
    atoms: BTreeSet<Polynomial>,
}

type Env = Vec<HashMap<String, Value>>;

impl Script {
    fn command(&mut self, e: &SExpr) -> Result<(), SmtError> {
        let SExpr::List(items, pos) = e else {
            return fail(e.pos(), "expected a command");
        };
        let Some(head) = items.first().and_then(SExpr::symbol) else {
            return fail(*pos, "expected a command name");
        };
        match head {
            "set-logic" => match items.get(1).and_then(SExpr::symbol) {
                Some("QF_NRA") => Ok(()),
                Some(other) => fail(*pos, format!("unsupported logic `{other}` (only QF_NRA)")),
                None => fail(*pos, "set-logic needs a logic name"),
            },
            "set-info" | "set-option" | "check-sat" | "get-model" | "exit" => Ok(()),
            "declare-fun" => {
                let (name, args, sort) = match &items[1..] {
                    [n, SExpr::List(args, _), s] => (n, args, s),
                    _ => return fail(*pos, "malformed declare-fun"),
                };
                if !args.is_empty() {
                    return fail(*pos, "uninterpreted functions are not supported");
                }
                self.declare(name, sort)
            }
            "declare-const" => match &items[1..] {
                [n, s] => self.declare(n, s),
                _ => fail(*pos, "malformed declare-const"),
            },
            "assert" => match &items[1..] {
                [f] => {
                    let mut env = Env::new();
                    let atoms = self.formula(f, &mut env, 0)?;
                    self.atoms.extend(atoms);
                    Ok(())
                }
                _ => fail(*pos, "assert takes one formula"),
            },
            "push" | "pop" => fail(*pos, format!("incremental command `{head}` is not supported")),
            other => fail(*pos, format!("unsupported command `{other}`")),
        }
    }

    fn declare(&mut self, name: &SExpr, sort: &SExpr) -> Result<(), SmtError> {
        let Some(name) = name.symbol() else {
            return fail(name.pos(), "expected a symbol");
        };
        match sort.symbol() {
            Some("Real") => {}
            _ => return fail(sort.pos(), format!("variable `{name}` has a non-Real sort")),
        }
        if self.positions.contains_key(name) {
            return fail(sort.pos(), format!("`{name}` declared twice"));
        }
        self.positions.insert(name.to_string(), self.decls.len());
        self.decls.push(name.to_string());
        Ok(())
    }

    fn formula(&self, e: &SExpr, env: &mut Env, depth: usize) -> Result<BTreeSet<Polynomial>, SmtError> {
        match self.eval(e, env, depth)? {
            Value::Bool(atoms) => Ok(atoms),
            Value::Arith(_) => fail(e.pos(), "expected a formula, found an arithmetic term"),
        }
    }

    fn term(&self, e: &SExpr, env: &mut Env, depth: usize) -> Result<RatPoly, SmtError> {
        match self.eval(e, env, depth)? {
            Value::Arith(p) => Ok(p),
            Value::Bool(_) => fail(e.pos(), "expected an arithmetic term, found a formula"),
        }
    }

    fn eval(&self, e: &SExpr, env: &mut Env, depth: usize) -> Result<Value, SmtError> {
        if depth > MAX_DEPTH {
            return fail(e.pos(), "expression nested too deeply");
        }
        let depth = depth + 1;
        match e {
            SExpr::Atom(atom, pos) => match atom {
                Atom::Numeral(n) => Ok(Value::Arith(RatPoly::int(Polynomial::constant(n.clone())))),
                Atom::Decimal(n, d) => {
                    Ok(Value::Arith(RatPoly::reduced(Polynomial::constant(n.clone()), d.clone())))
                }
                Atom::Symbol(s) => {
                    if let Some(v) = env.iter().rev().find_map(|scope| scope.get(s)) {
                        return Ok(v.clone());
                    }
                    match s.as_str() {
                        "true" | "false" => Ok(Value::Bool(BTreeSet::new())),
                        _ => match self.positions.get(s) {
                            Some(&k) => Ok(Value::Arith(RatPoly::int(Polynomial::var(k)))),
                            None => fail(*pos, format!("undeclared symbol `{s}`")),
                        },
                    }
                }
                Atom::Keyword(k) => fail(*pos, format!("unexpected keyword `:{k}`")),
                Atom::Str => fail(*pos, "unexpected string literal"),
            },
            SExpr::List(items, pos) => {
                let pos = *pos;
                let Some(head) = items.first() else {
                    return fail(pos, "empty application");
                };
                let Some(op) = head.symbol() else {
                    return fail(head.pos(), "unsupported application head");
                };
                let args = &items[1..];
                match op {
                    "and" | "or" | "not" | "=>" => {
                        if op == "not" && args.len() != 1 {
                            return fail(pos, "`not` takes one argument");
                        }
                        let mut atoms = BTreeSet::new();
                        for a in args {
                            atoms.extend(self.formula(a, env, depth)?);
                        }
                        Ok(Value::Bool(atoms))
                    }
                    "<" | "<=" | ">" | ">=" | "=" | "distinct" => self.relation(op, args, env, depth, pos),
                    "let" => self.let_expr(args, env, depth, pos),
                    "+" | "-" | "*" | "/" | "^" => self.arith(op, args, env, depth, pos).map(Value::Arith),
                    "forall" | "exists" => fail(pos, format!("quantifier `{op}` is not supported")),
                    "ite" => fail(pos, "`ite` is not supported"),
                    other => fail(pos, format!("unsupported function symbol `{other}`")),
                }
            }
        }
    }

    fn relation(
        &self,
        op: &str,
        args: &[SExpr],
        env: &mut Env,
        depth: usize,
        pos: Pos,
    ) -> Result<Value, SmtError> {
        if args.len() < 2 {
            return fail(pos, format!("`{op}` needs at least two arguments"));
        }
        let values = args
            .iter()
            .map(|a| self.eval(a, env, depth))
            .collect::<Result<Vec<_>, _>>()?;
        let mut atoms = BTreeSet::new();
        if values.iter().all(|v| matches!(v, Value::Bool(_))) && matches!(op, "=" | "distinct") {
            for v in values {
                if let Value::Bool(a) = v {
                    atoms.extend(a);
                }
            }
            return Ok(Value::Bool(atoms));
        }
        let terms = values
            .into_iter()
            .zip(args)
            .map(|(v, a)| match v {
                Value::Arith(p) => Ok(p),
                Value::Bool(_) => fail(a.pos(), format!("`{op}` mixes formulas and terms")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut add_atom = |a: &RatPoly, b: &RatPoly| {
            let diff = a.add(&b.neg());
            if !diff.num.is_constant() {
                atoms.insert(diff.num.primitive_normal_form());
            }
        };
        if op == "distinct" {
            for i in 0..terms.len() {
                for j in i + 1..terms.len() {
                    add_atom(&terms[i], &terms[j]);
                }
            }
        } else {
            for w in terms.windows(2) {
                add_atom(&w[0], &w[1]);
            }
        }
        Ok(Value::Bool(atoms))
    }

    fn let_expr(&self, args: &[SExpr], env: &mut Env, depth: usize, pos: Pos) -> Result<Value, SmtError> {
        let [SExpr::List(bindings, _), body] = args else {
            return fail(pos, "malformed let");
        };
        let mut scope = HashMap::new();
        for b in bindings {
            match b {
                SExpr::List(pair, bpos) if pair.len() == 2 => {
                    let Some(name) = pair[0].symbol() else {
                        return fail(*bpos, "let binding needs a symbol");
                    };
                    let value = self.eval(&pair[1], env, depth)?;
                    scope.insert(name.to_string(), value);
                }
                other => return fail(other.pos(), "malformed let binding"),
            }
        }
        env.push(scope);
        let out = self.eval(body, env, depth);
        env.pop();
        out
    }

    fn arith(&self, op: &str, args: &[SExpr], env: &mut Env, depth: usize, pos: Pos) -> Result<RatPoly, SmtError> {
        if args.is_empty() {
            return fail(pos, format!("`{op}` needs arguments"));
        }
        if op == "^" {
            let [base, exp] = args else {
                return fail(pos, "`^` takes a base and an exponent");
            };
            let base = self.term(base, env, depth)?;
            let e = match exp {
                SExpr::Atom(Atom::Numeral(n), _) => match u32::try_from(n) {
                    Ok(e) if e <= MAX_EXPONENT => e,
                    _ => return fail(exp.pos(), format!("exponent exceeds {MAX_EXPONENT}")),
                },
                _ => return fail(exp.pos(), "exponent must be a non-negative integer literal"),
            };
            let mut acc = RatPoly::int(Polynomial::one());
            for _ in 0..e {
                acc = acc.mul(&base, pos)?;
            }
            return Ok(acc);
        }
        let mut terms = Vec::with_capacity(args.len());
        for a in args {
            terms.push(self.term(a, env, depth)?);
        }
        let mut iter = terms.into_iter();
        let first = iter.next().expect("nonempty");
        match op {
            "+" => Ok(iter.fold(first, |acc, t| acc.add(&t))),
            "-" if args.len() == 1 => Ok(first.neg()),
            "-" => Ok(iter.fold(first, |acc, t| acc.add(&t.neg()))),
            "*" => iter.try_fold(first, |acc, t| acc.mul(&t, pos)),
            "/" => {
                let mut acc = first;
                for (t, a) in iter.zip(&args[1..]) {
                    let Some((n, d)) = t.as_constant() else {
                        return fail(a.pos(), "division by a non-constant term is not supported");
                    };
                    if n.is_zero() {
                        return fail(a.pos(), "division by zero");
                    }
                    // acc / (n/d) = acc · d / n
                    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
                    let num = acc.num.scale(&(&d * &sign));
                    acc = RatPoly::reduced(num, &acc.den * n.abs());
                }
                Ok(acc)
            }
            _ => unreachable!("arith called with {op}"),
        }
    }
}

/// Parses an SMT-LIB script into a [`ProblemInstance`].
///
/// Variables keep their declaration order; those that occur in no atom are
/// dropped with a warning.
pub fn parse_smtlib(problem_id: &str, text: &str) -> Result<ProblemInstance, SmtError> {
    let mut reader = Reader::new(text);
    let mut script = Script { decls: Vec::new(), positions: HashMap::new(), atoms: BTreeSet::new() };
    while let Some(cmd) = reader.next(0)? {
        script.command(&cmd)?;
    }

    let used: Vec<usize> = (0..script.decls.len())
        .filter(|&k| script.atoms.iter().any(|p| p.contains_var(k)))
        .collect();
    for (k, name) in script.decls.iter().enumerate() {
        if !used.contains(&k) {
            log::warn!("{problem_id}: variable `{name}` occurs in no polynomial and is dropped");
        }
    }
    let mut map = vec![0; script.decls.len()];
    for (new, &old) in used.iter().enumerate() {
        map[old] = new;
    }
    let variables = Variables::new(used.iter().map(|&k| script.decls[k].clone()))
        .expect("declarations are unique");
    let polys = PolySet::from_polys(used.len(), script.atoms.iter().map(|p| p.remap(&map)));
    Ok(ProblemInstance { problem_id: problem_id.to_string(), variables, polys })
}
