//! Label algebras: the monoids, commutative monoids and rigs whose elements
//! label edges and serve as homology coefficients.
//!
//! An algebra is either a finite table, checked exhaustively by
//! [`LabelAlgebra::validate`], or one of a handful of exact infinite
//! builtins. Every algebra exposes two operations:
//!
//! * `mul`/`unit`, the monoid operation (for a rig, multiplication);
//! * `add`/`zero`, the commutative-monoid operation used for sums over
//!   fibers and for chains (for a rig, addition; otherwise the same as
//!   `mul`/`unit`).

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::Verdict;

/// Largest monoid accepted by [`power_rig`].
pub const POWER_RIG_LIMIT: usize = 5;

/// An element of some label algebra.
///
/// Finite tables use `Idx`; integer builtins use `Int`; rational builtins
/// use `Rat`. `TrivialOne` has the single element `Idx(0)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    Idx(usize),
    Int(BigInt),
    Rat(BigRational),
}

impl Elem {
    pub fn int(n: i64) -> Self {
        Elem::Int(BigInt::from(n))
    }

    pub fn rat(p: i64, q: i64) -> Self {
        Elem::Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }
}

/// The exact infinite (or one-point) algebras shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    /// The one-element monoid.
    TrivialOne,
    /// (ℕ, +, 0).
    NatAdd,
    /// (ℤ, +, 0).
    IntAdd,
    /// (ℚ, +, 0).
    RatAdd,
    /// The rig (ℕ, +, ·, 0, 1).
    NatRig,
    /// (ℚ, ·, 1), a commutative monoid that is not cancellative.
    RatMulMonoid,
}

impl Builtin {
    pub const ALL: [Builtin; 6] = [
        Builtin::TrivialOne,
        Builtin::NatAdd,
        Builtin::IntAdd,
        Builtin::RatAdd,
        Builtin::NatRig,
        Builtin::RatMulMonoid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::TrivialOne => "TrivialOne",
            Builtin::NatAdd => "NatAdd",
            Builtin::IntAdd => "IntAdd",
            Builtin::RatAdd => "RatAdd",
            Builtin::NatRig => "NatRig",
            Builtin::RatMulMonoid => "RatMulMonoid",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    fn flags(self) -> Flags {
        Flags {
            commutative: true,
            cancellative: !matches!(self, Builtin::RatMulMonoid),
        }
    }
}

/// Declared properties of an algebra. They are checked by
/// [`LabelAlgebra::validate`], never trusted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Flags {
    pub commutative: bool,
    pub cancellative: bool,
}

/// Which of the two operations a statement is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Mul,
    Add,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Mul => "multiplication",
            Op::Add => "addition",
        })
    }
}

/// The data of a finite algebra. Tables are row-major: `mul[a][b] = a·b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tables {
    pub elements: Vec<String>,
    pub mul: Vec<Vec<usize>>,
    pub unit: usize,
    /// Present exactly for rigs.
    pub rig: Option<RigTables>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RigTables {
    pub add: Vec<Vec<usize>>,
    pub zero: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Table(Tables),
    Builtin(Builtin),
}

/// A monoid, commutative monoid or rig of polarities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelAlgebra {
    name: String,
    repr: Repr,
    flags: Flags,
}

/// One failed axiom instance. Elements are given by display name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Associativity { op: Op, a: String, b: String, c: String },
    Unit { op: Op, element: String },
    Commutativity { op: Op, a: String, b: String },
    LeftDistributivity { r: String, s: String, t: String },
    RightDistributivity { r: String, s: String, t: String },
    Absorption { r: String },
    Cancellativity { c: String, d: String, e: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Associativity { op, a, b, c } => {
                write!(f, "{op} is not associative at ({a},{b},{c})")
            }
            Violation::Unit { op, element } => {
                write!(f, "unit law for {op} fails at {element}")
            }
            Violation::Commutativity { op, a, b } => {
                write!(f, "{op} is not commutative at ({a},{b})")
            }
            Violation::LeftDistributivity { r, s, t } => {
                write!(f, "{r}·({s}+{t}) differs from {r}·{s}+{r}·{t}")
            }
            Violation::RightDistributivity { r, s, t } => {
                write!(f, "({s}+{t})·{r} differs from {s}·{r}+{t}·{r}")
            }
            Violation::Absorption { r } => write!(f, "zero does not absorb {r}"),
            Violation::Cancellativity { c, d, e } => {
                write!(f, "declared cancellative but {c}+{e} = {d}+{e}")
            }
        }
    }
}

/// Result of [`LabelAlgebra::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub algebra: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "{}: all axioms and declared flags hold", self.algebra);
        }
        write!(f, "{}: {} violation(s)", self.algebra, self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

fn check_square(what: &'static str, table: &[Vec<usize>], n: usize) -> Result<()> {
    if table.len() != n {
        return Err(Error::malformed(what, format!("{} rows for {n} elements", table.len())));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::malformed(what, format!("row {i} has {} entries, expected {n}", row.len())));
        }
        if let Some(&x) = row.iter().find(|&&x| x >= n) {
            return Err(Error::malformed(what, format!("row {i} refers to element {x}")));
        }
    }
    Ok(())
}

fn symmetric(t: &[Vec<usize>]) -> bool {
    (0..t.len()).all(|a| (0..a).all(|b| t[a][b] == t[b][a]))
}

fn cancel_witness(t: &[Vec<usize>]) -> Option<(usize, usize, usize)> {
    let n = t.len();
    for c in 0..n {
        for d in (c + 1)..n {
            for e in 0..n {
                if t[c][e] == t[d][e] {
                    return Some((c, d, e));
                }
            }
        }
    }
    None
}

fn normalize_name(s: &str) -> String {
    s.trim().replace('\u{2212}', "-")
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{whole_digits}{frac}");
        let mut num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(num, den));
    }
    BigInt::from_str(s).ok().map(BigRational::from_integer)
}

impl LabelAlgebra {
    /// A finite monoid given by its multiplication table.
    pub fn from_table(
        name: impl Into<String>,
        elements: Vec<String>,
        mul: Vec<Vec<usize>>,
        unit: usize,
        flags: Flags,
    ) -> Result<Self> {
        Self::build(name.into(), elements, mul, unit, None, flags)
    }

    /// A finite rig given by addition and multiplication tables.
    pub fn rig_from_tables(
        name: impl Into<String>,
        elements: Vec<String>,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        zero: usize,
        unit: usize,
        flags: Flags,
    ) -> Result<Self> {
        Self::build(name.into(), elements, mul, unit, Some(RigTables { add, zero }), flags)
    }

    fn build(
        name: String,
        elements: Vec<String>,
        mul: Vec<Vec<usize>>,
        unit: usize,
        rig: Option<RigTables>,
        flags: Flags,
    ) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::malformed("algebra", "no elements"));
        }
        let distinct: BTreeSet<&String> = elements.iter().collect();
        if distinct.len() != n {
            return Err(Error::malformed("algebra", "duplicate element names"));
        }
        check_square("multiplication table", &mul, n)?;
        if unit >= n {
            return Err(Error::malformed("algebra", format!("unit index {unit} out of range")));
        }
        if let Some(r) = &rig {
            check_square("addition table", &r.add, n)?;
            if r.zero >= n {
                return Err(Error::malformed("algebra", format!("zero index {} out of range", r.zero)));
            }
        }
        Ok(LabelAlgebra { name, repr: Repr::Table(Tables { elements, mul, unit, rig }), flags })
    }

    /// Builds a table by evaluating `op` on names, with flags computed
    /// from the resulting table.
    fn from_fn(
        name: &str,
        names: &[&str],
        unit: &str,
        op: impl Fn(&str, &str) -> String,
    ) -> LabelAlgebra {
        let idx = |s: &str| names.iter().position(|n| *n == s).expect("name in list");
        let mul: Vec<Vec<usize>> = names
            .iter()
            .map(|a| names.iter().map(|b| idx(&op(a, b))).collect())
            .collect();
        let elements = names.iter().map(|s| s.to_string()).collect();
        let flags = Flags { commutative: symmetric(&mul), cancellative: cancel_witness(&mul).is_none() };
        LabelAlgebra::from_table(name, elements, mul, idx(unit), flags).expect("well-formed")
    }

    pub fn builtin(b: Builtin) -> Self {
        LabelAlgebra { name: b.name().to_string(), repr: Repr::Builtin(b), flags: b.flags() }
    }

    /// The sign group {+,−} under multiplication.
    pub fn sign() -> Self {
        Self::from_fn("SIGN", &["+", "-"], "+", |a, b| if a == b { "+" } else { "-" }.into())
    }

    /// Signs with an absorbing 0 adjoined.
    pub fn sign_zero() -> Self {
        Self::from_fn("SIGN0", &["+", "0", "-"], "+", |a, b| {
            match (a, b) {
                ("0", _) | (_, "0") => "0",
                _ if a == b => "+",
                _ => "-",
            }
            .into()
        })
    }

    /// Signs with a new identity `I` ("necessary stimulation") adjoined.
    pub fn sign_identity() -> Self {
        Self::from_fn("SIGN_I", &["I", "+", "-"], "I", |a, b| match (a, b) {
            ("I", x) | (x, "I") => x.to_string(),
            _ if a == b => "+".into(),
            _ => "-".into(),
        })
    }

    /// Signs with both an absorbing 0 and a new identity `I`.
    pub fn sign_identity_zero() -> Self {
        Self::from_fn("SIGN_I0", &["I", "+", "0", "-"], "I", |a, b| match (a, b) {
            ("I", x) | (x, "I") => x.to_string(),
            ("0", _) | (_, "0") => "0".into(),
            _ if a == b => "+".into(),
            _ => "-".into(),
        })
    }

    /// The rig S = {1, 0, −1, i} of definite and indeterminate effects.
    pub fn s_rig() -> Self {
        let elements = ["1", "0", "-1", "i"].map(String::from).to_vec();
        let add = vec![vec![0, 0, 3, 3], vec![0, 1, 2, 3], vec![3, 2, 2, 3], vec![3, 3, 3, 3]];
        let mul = vec![vec![0, 1, 2, 3], vec![1, 1, 1, 1], vec![2, 1, 0, 3], vec![3, 1, 3, 3]];
        let flags = Flags { commutative: true, cancellative: false };
        Self::rig_from_tables("S", elements, add, mul, 1, 0, flags).expect("well-formed")
    }

    /// The boolean rig: addition is `or`, multiplication is `and`.
    pub fn boolean_rig() -> Self {
        let elements = vec!["0".to_string(), "1".to_string()];
        let add = vec![vec![0, 1], vec![1, 1]];
        let mul = vec![vec![0, 0], vec![0, 1]];
        let flags = Flags { commutative: true, cancellative: false };
        Self::rig_from_tables("BOOL", elements, add, mul, 0, 1, flags).expect("well-formed")
    }

    /// ({0,1}, and, 1), the multiplicative monoid of the boolean rig.
    pub fn boolean_and() -> Self {
        Self::from_fn("BOOL_AND", &["0", "1"], "1", |a, b| {
            if a == "1" && b == "1" { "1" } else { "0" }.into()
        })
    }

    /// ({0,1}, or, 0), the additive monoid of the boolean rig.
    pub fn boolean_or() -> Self {
        Self::from_fn("BOOL_OR", &["0", "1"], "0", |a, b| {
            if a == "1" || b == "1" { "1" } else { "0" }.into()
        })
    }

    /// The cyclic group ℤ/n written additively.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::malformed("algebra", "Z/0 has no elements"));
        }
        let elements = (0..n).map(|i| i.to_string()).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let flags = Flags { commutative: true, cancellative: true };
        Self::from_table(format!("Z/{n}"), elements, mul, 0, flags)
    }

    /// Looks up a named algebra: builtins, the sign family, `S`, `BOOL`,
    /// `BOOL_AND`, `BOOL_OR` and `Z/n`.
    pub fn by_name(name: &str) -> Option<Self> {
        if let Some(b) = Builtin::from_name(name) {
            return Some(Self::builtin(b));
        }
        match name {
            "SIGN" => Some(Self::sign()),
            "SIGN0" => Some(Self::sign_zero()),
            "SIGN_I" => Some(Self::sign_identity()),
            "SIGN_I0" => Some(Self::sign_identity_zero()),
            "S" => Some(Self::s_rig()),
            "BOOL" => Some(Self::boolean_rig()),
            "BOOL_AND" => Some(Self::boolean_and()),
            "BOOL_OR" => Some(Self::boolean_or()),
            _ => name
                .strip_prefix("Z/")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| (1..=256).contains(&n))
                .and_then(|n| Self::cyclic(n).ok()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn tables(&self) -> Option<&Tables> {
        match &self.repr {
            Repr::Table(t) => Some(t),
            Repr::Builtin(_) => None,
        }
    }

    pub fn as_builtin(&self) -> Option<Builtin> {
        match &self.repr {
            Repr::Builtin(b) => Some(*b),
            Repr::Table(_) => None,
        }
    }

    pub fn is_rig(&self) -> bool {
        match &self.repr {
            Repr::Table(t) => t.rig.is_some(),
            Repr::Builtin(b) => *b == Builtin::NatRig,
        }
    }

    /// Number of elements, or `None` for infinite builtins.
    pub fn size(&self) -> Option<usize> {
        match &self.repr {
            Repr::Table(t) => Some(t.elements.len()),
            Repr::Builtin(Builtin::TrivialOne) => Some(1),
            Repr::Builtin(_) => None,
        }
    }

    /// All elements in index order, for finite algebras.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        self.size().map(|n| (0..n).map(Elem::Idx).collect())
    }

    /// Whether the monoid operation is actually commutative. Exhaustive
    /// for tables; for builtins, the declared flag.
    pub fn is_commutative(&self) -> bool {
        match &self.repr {
            Repr::Table(t) => symmetric(&t.mul),
            Repr::Builtin(b) => b.flags().commutative,
        }
    }

    /// Whether the additive operation is actually commutative.
    pub fn is_additively_commutative(&self) -> bool {
        match &self.repr {
            Repr::Table(t) => symmetric(t.rig.as_ref().map_or(&t.mul, |r| &r.add)),
            Repr::Builtin(b) => b.flags().commutative,
        }
    }

    pub fn contains(&self, x: &Elem) -> bool {
        match (&self.repr, x) {
            (Repr::Table(t), Elem::Idx(i)) => *i < t.elements.len(),
            (Repr::Builtin(Builtin::TrivialOne), Elem::Idx(i)) => *i == 0,
            (Repr::Builtin(Builtin::NatAdd | Builtin::NatRig), Elem::Int(n)) => !n.is_negative(),
            (Repr::Builtin(Builtin::IntAdd), Elem::Int(_)) => true,
            (Repr::Builtin(Builtin::RatAdd | Builtin::RatMulMonoid), Elem::Rat(_)) => true,
            _ => false,
        }
    }

    fn foreign(&self, x: &Elem) -> ! {
        panic!("{x:?} is not an element of algebra {}", self.name)
    }

    fn idx(&self, x: &Elem) -> usize {
        match x {
            Elem::Idx(i) if self.contains(x) => *i,
            _ => self.foreign(x),
        }
    }

    fn table_op(&self, op: Op) -> Option<&Vec<Vec<usize>>> {
        self.tables().map(|t| match (op, &t.rig) {
            (Op::Add, Some(r)) => &r.add,
            _ => &t.mul,
        })
    }

    fn apply(&self, op: Op, a: &Elem, b: &Elem) -> Elem {
        if let Some(t) = self.table_op(op) {
            return Elem::Idx(t[self.idx(a)][self.idx(b)]);
        }
        let b_kind = self.as_builtin().expect("builtin");
        if !self.contains(a) {
            self.foreign(a)
        }
        if !self.contains(b) {
            self.foreign(b)
        }
        match (b_kind, op, a, b) {
            (Builtin::TrivialOne, _, _, _) => Elem::Idx(0),
            (Builtin::NatRig, Op::Mul, Elem::Int(x), Elem::Int(y)) => Elem::Int(x * y),
            (_, _, Elem::Int(x), Elem::Int(y)) => Elem::Int(x + y),
            (Builtin::RatMulMonoid, _, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (_, _, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            _ => unreachable!("membership checked above"),
        }
    }

    /// The monoid operation. Panics if an argument is not an element of
    /// this algebra; labeled graphs and chains check membership up front.
    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.apply(Op::Mul, a, b)
    }

    /// The commutative-monoid operation (rig addition, or `mul` for a
    /// non-rig). Same panic contract as [`mul`](Self::mul).
    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.apply(Op::Add, a, b)
    }

    pub fn op(&self, op: Op, a: &Elem, b: &Elem) -> Elem {
        self.apply(op, a, b)
    }

    pub fn unit(&self) -> Elem {
        match &self.repr {
            Repr::Table(t) => Elem::Idx(t.unit),
            Repr::Builtin(b) => match b {
                Builtin::TrivialOne => Elem::Idx(0),
                Builtin::NatAdd | Builtin::IntAdd => Elem::Int(BigInt::zero()),
                Builtin::NatRig => Elem::Int(BigInt::one()),
                Builtin::RatAdd => Elem::Rat(BigRational::zero()),
                Builtin::RatMulMonoid => Elem::Rat(BigRational::one()),
            },
        }
    }

    pub fn zero(&self) -> Elem {
        match &self.repr {
            Repr::Table(t) => Elem::Idx(t.rig.as_ref().map_or(t.unit, |r| r.zero)),
            Repr::Builtin(Builtin::NatRig) => Elem::Int(BigInt::zero()),
            Repr::Builtin(_) => self.unit(),
        }
    }

    pub fn identity_of(&self, op: Op) -> Elem {
        match op {
            Op::Mul => self.unit(),
            Op::Add => self.zero(),
        }
    }

    /// `n·x`, the n-fold sum of `x`, by doubling.
    pub fn scale(&self, n: &BigInt, x: &Elem) -> Elem {
        assert!(!n.is_negative(), "scale by a negative count");
        let mut acc = self.zero();
        let mut base = x.clone();
        let mut k = n.clone();
        let two = BigInt::from(2);
        while !k.is_zero() {
            if (&k % &two).is_one() {
                acc = self.add(&acc, &base);
            }
            k /= &two;
            if !k.is_zero() {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    /// Sum of an iterator of elements, starting from zero.
    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a Elem>) -> Elem {
        xs.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Parses a display name, accepting U+2212 as a minus sign.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let unknown = || Error::UnknownElement { algebra: self.name.clone(), name: s.to_string() };
        let key = normalize_name(s);
        match &self.repr {
            Repr::Table(t) => t
                .elements
                .iter()
                .position(|e| normalize_name(e) == key)
                .map(Elem::Idx)
                .ok_or_else(unknown),
            Repr::Builtin(Builtin::TrivialOne) => match key.as_str() {
                "1" => Ok(Elem::Idx(0)),
                _ => Err(unknown()),
            },
            Repr::Builtin(Builtin::NatAdd | Builtin::NatRig | Builtin::IntAdd) => {
                let n = BigInt::from_str(&key).map_err(|_| unknown())?;
                let x = Elem::Int(n);
                if self.contains(&x) { Ok(x) } else { Err(unknown()) }
            }
            Repr::Builtin(Builtin::RatAdd | Builtin::RatMulMonoid) => {
                parse_rational(&key).map(Elem::Rat).ok_or_else(unknown)
            }
        }
    }

    /// Display name of an element.
    pub fn show(&self, x: &Elem) -> String {
        match (&self.repr, x) {
            (Repr::Table(t), Elem::Idx(i)) if *i < t.elements.len() => t.elements[*i].clone(),
            (Repr::Builtin(Builtin::TrivialOne), Elem::Idx(0)) => "1".to_string(),
            (_, Elem::Int(n)) => n.to_string(),
            (_, Elem::Rat(q)) if q.is_integer() => q.numer().to_string(),
            (_, Elem::Rat(q)) => format!("{}/{}", q.numer(), q.denom()),
            (_, Elem::Idx(i)) => format!("#{i}"),
        }
    }

    /// Checks every axiom and every declared flag.
    ///
    /// Finite tables are checked exhaustively; builtins are checked on a
    /// fixed pseudo-random sample of exact elements.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        match &self.repr {
            Repr::Table(t) => self.validate_table(t, &mut v),
            Repr::Builtin(b) => self.validate_builtin(*b, &mut v),
        }
        ValidationReport { algebra: self.name.clone(), violations: v }
    }

    fn validate_table(&self, t: &Tables, v: &mut Vec<Violation>) {
        let n = t.elements.len();
        let name = |i: usize| t.elements[i].clone();
        let mut ops = vec![(Op::Mul, &t.mul, t.unit, self.flags.commutative)];
        if let Some(r) = &t.rig {
            ops.push((Op::Add, &r.add, r.zero, true));
        }
        for &(op, m, u, comm) in &ops {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if m[m[a][b]][c] != m[a][m[b][c]] {
                            v.push(Violation::Associativity { op, a: name(a), b: name(b), c: name(c) });
                        }
                    }
                }
            }
            for a in 0..n {
                if m[u][a] != a || m[a][u] != a {
                    v.push(Violation::Unit { op, element: name(a) });
                }
            }
            if comm {
                for a in 0..n {
                    for b in (a + 1)..n {
                        if m[a][b] != m[b][a] {
                            v.push(Violation::Commutativity { op, a: name(a), b: name(b) });
                        }
                    }
                }
            }
        }
        if let Some(r) = &t.rig {
            let (add, mul, z) = (&r.add, &t.mul, r.zero);
            for x in 0..n {
                for s in 0..n {
                    for u in 0..n {
                        if mul[x][add[s][u]] != add[mul[x][s]][mul[x][u]] {
                            v.push(Violation::LeftDistributivity { r: name(x), s: name(s), t: name(u) });
                        }
                        if mul[add[s][u]][x] != add[mul[s][x]][mul[u][x]] {
                            v.push(Violation::RightDistributivity { r: name(x), s: name(s), t: name(u) });
                        }
                    }
                }
                if mul[z][x] != z || mul[x][z] != z {
                    v.push(Violation::Absorption { r: name(x) });
                }
            }
        }
        if self.flags.cancellative {
            let additive = t.rig.as_ref().map_or(&t.mul, |r| &r.add);
            if let Some((c, d, e)) = cancel_witness(additive) {
                v.push(Violation::Cancellativity { c: name(c), d: name(d), e: name(e) });
            }
        }
    }

    /// Exact sample elements of a builtin, deterministic in `seed`.
    pub fn sample_elements(&self, count: usize, seed: u64) -> Vec<Elem> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = match self.as_builtin() {
            Some(b) => b,
            None => {
                let n = self.size().unwrap_or(1);
                return (0..count).map(|_| Elem::Idx(rng.gen_range(0..n))).collect();
            }
        };
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let x = match b {
                Builtin::TrivialOne => Elem::Idx(0),
                Builtin::NatAdd | Builtin::NatRig => Elem::int(if i < 2 { i as i64 } else { rng.gen_range(0..1000) }),
                Builtin::IntAdd => Elem::int(if i < 3 { i as i64 - 1 } else { rng.gen_range(-1000..1000) }),
                Builtin::RatAdd | Builtin::RatMulMonoid => {
                    if i < 3 {
                        Elem::rat(i as i64 - 1, 1)
                    } else {
                        Elem::rat(rng.gen_range(-200..200), rng.gen_range(1..50))
                    }
                }
            };
            out.push(x);
        }
        out
    }

    fn validate_builtin(&self, b: Builtin, v: &mut Vec<Violation>) {
        let xs = self.sample_elements(12, 0x5eed);
        let mut ops = vec![Op::Mul];
        if self.is_rig() {
            ops.push(Op::Add);
        }
        for &op in &ops {
            let u = self.identity_of(op);
            for a in &xs {
                if self.op(op, &u, a) != *a || self.op(op, a, &u) != *a {
                    v.push(Violation::Unit { op, element: self.show(a) });
                }
                for bb in &xs {
                    if self.op(op, a, bb) != self.op(op, bb, a) {
                        v.push(Violation::Commutativity { op, a: self.show(a), b: self.show(bb) });
                    }
                    for c in &xs {
                        let l = self.op(op, &self.op(op, a, bb), c);
                        let r = self.op(op, a, &self.op(op, bb, c));
                        if l != r {
                            v.push(Violation::Associativity {
                                op,
                                a: self.show(a),
                                b: self.show(bb),
                                c: self.show(c),
                            });
                        }
                    }
                }
            }
        }
        if b == Builtin::NatRig {
            let z = self.zero();
            for r in &xs {
                if self.mul(&z, r) != z || self.mul(r, &z) != z {
                    v.push(Violation::Absorption { r: self.show(r) });
                }
                for s in &xs {
                    for t in &xs {
                        let l = self.mul(r, &self.add(s, t));
                        if l != self.add(&self.mul(r, s), &self.mul(r, t)) {
                            v.push(Violation::LeftDistributivity {
                                r: self.show(r),
                                s: self.show(s),
                                t: self.show(t),
                            });
                        }
                    }
                }
            }
        }
        if self.flags.cancellative {
            if let Ok(Verdict::Fails((c, d, e))) = self.is_cancellative() {
                v.push(Violation::Cancellativity { c: self.show(&c), d: self.show(&d), e: self.show(&e) });
            }
        }
    }

    /// Whether `c + e = d + e` implies `c = d` for the additive operation.
    ///
    /// On failure the witness `(c, d, e)` has `c ≠ d` and `c + e = d + e`.
    pub fn is_cancellative(&self) -> Result<Verdict<(Elem, Elem, Elem)>> {
        match &self.repr {
            Repr::Table(t) => {
                let additive = t.rig.as_ref().map_or(&t.mul, |r| &r.add);
                Ok(match cancel_witness(additive) {
                    None => Verdict::Holds,
                    Some((c, d, e)) => Verdict::Fails((Elem::Idx(c), Elem::Idx(d), Elem::Idx(e))),
                })
            }
            Repr::Builtin(Builtin::RatMulMonoid) => {
                Ok(Verdict::Fails((Elem::rat(1, 1), Elem::rat(2, 1), Elem::rat(0, 1))))
            }
            Repr::Builtin(_) => Ok(Verdict::Holds),
        }
    }

    fn finite_tables(&self, what: &str) -> Result<&Tables> {
        self.tables()
            .ok_or_else(|| Error::Unsupported(format!("{what} needs a finite-table algebra, got {}", self.name)))
    }
}

fn fresh_name(taken: &[String], base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

fn derived_flags(mul: &[Vec<usize>], additive: &[Vec<usize>]) -> Flags {
    Flags { commutative: symmetric(mul), cancellative: cancel_witness(additive).is_none() }
}

/// Adjoins a new absorbing element `0` to a finite monoid.
///
/// Existing products are unchanged and the new element is appended last.
pub fn adjoin_zero(m: &LabelAlgebra) -> Result<LabelAlgebra> {
    let t = m.finite_tables("adjoin_zero")?;
    if t.rig.is_some() {
        return Err(Error::Unsupported("adjoin_zero on a rig".into()));
    }
    let n = t.elements.len();
    let mut elements = t.elements.clone();
    elements.push(fresh_name(&t.elements, "0"));
    let mut mul: Vec<Vec<usize>> = t.mul.iter().map(|row| {
        let mut row = row.clone();
        row.push(n);
        row
    }).collect();
    mul.push(vec![n; n + 1]);
    let flags = derived_flags(&mul, &mul);
    LabelAlgebra::from_table(format!("{}+0", m.name()), elements, mul, t.unit, flags)
}

/// Adjoins a new identity element `I` to a finite monoid.
///
/// The old unit keeps its old products; the new element is appended last
/// and becomes the unit.
pub fn adjoin_identity(m: &LabelAlgebra) -> Result<LabelAlgebra> {
    let t = m.finite_tables("adjoin_identity")?;
    if t.rig.is_some() {
        return Err(Error::Unsupported("adjoin_identity on a rig".into()));
    }
    let n = t.elements.len();
    let mut elements = t.elements.clone();
    elements.push(fresh_name(&t.elements, "I"));
    let mut mul: Vec<Vec<usize>> = t.mul.iter().enumerate().map(|(a, row)| {
        let mut row = row.clone();
        row.push(a);
        row
    }).collect();
    mul.push((0..=n).collect());
    let flags = derived_flags(&mul, &mul);
    LabelAlgebra::from_table(format!("{}+I", m.name()), elements, mul, n, flags)
}

/// The product of two finite algebras, with elements named `(a,b)` in
/// lexicographic order. Two rigs give a rig; otherwise only the monoid
/// operations are combined.
pub fn product_algebra(m1: &LabelAlgebra, m2: &LabelAlgebra) -> Result<LabelAlgebra> {
    let t1 = m1.finite_tables("product_algebra")?;
    let t2 = m2.finite_tables("product_algebra")?;
    let (n1, n2) = (t1.elements.len(), t2.elements.len());
    let pair = |a: usize, b: usize| a * n2 + b;
    let combine = |x: &[Vec<usize>], y: &[Vec<usize>]| -> Vec<Vec<usize>> {
        (0..n1 * n2)
            .map(|p| (0..n1 * n2).map(|q| pair(x[p / n2][q / n2], y[p % n2][q % n2])).collect())
            .collect()
    };
    let elements = (0..n1 * n2)
        .map(|p| format!("({},{})", t1.elements[p / n2], t2.elements[p % n2]))
        .collect();
    let mul = combine(&t1.mul, &t2.mul);
    let name = format!("{}x{}", m1.name(), m2.name());
    let unit = pair(t1.unit, t2.unit);
    match (&t1.rig, &t2.rig) {
        (Some(r1), Some(r2)) => {
            let add = combine(&r1.add, &r2.add);
            let flags = derived_flags(&mul, &add);
            LabelAlgebra::rig_from_tables(name, elements, add, mul, pair(r1.zero, r2.zero), unit, flags)
        }
        _ => {
            let flags = derived_flags(&mul, &mul);
            LabelAlgebra::from_table(name, elements, mul, unit, flags)
        }
    }
}

/// The rig of subsets of a finite monoid: union as addition and the
/// setwise product `XY = {xy}` as multiplication.
///
/// Elements are the subsets in bitmask order, named like `{}` or `{+,-}`.
pub fn power_rig(m: &LabelAlgebra) -> Result<LabelAlgebra> {
    let t = m.finite_tables("power_rig")?;
    let n = t.elements.len();
    if n > POWER_RIG_LIMIT {
        return Err(Error::GuardExceeded { what: "power_rig monoid size", limit: POWER_RIG_LIMIT as u64 });
    }
    let size = 1usize << n;
    let members = |mask: usize| (0..n).filter(move |i| mask >> i & 1 == 1);
    let elements = (0..size)
        .map(|mask| {
            let names: Vec<&str> = members(mask).map(|i| t.elements[i].as_str()).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    let add = (0..size).map(|x| (0..size).map(|y| x | y).collect()).collect();
    let mul: Vec<Vec<usize>> = (0..size)
        .map(|x| {
            (0..size)
                .map(|y| {
                    members(x).fold(0usize, |acc, a| members(y).fold(acc, |acc, b| acc | 1 << t.mul[a][b]))
                })
                .collect()
        })
        .collect();
    let flags = Flags { commutative: symmetric(&mul), cancellative: false };
    LabelAlgebra::rig_from_tables(format!("P({})", m.name()), elements, add, mul, 0, 1 << t.unit, flags)
}

/// Searches for an isomorphism between two finite algebras, preserving
/// unit, multiplication and (when both are rigs) zero and addition.
///
/// Returns the image index of each element of `a`.
pub fn find_isomorphism(a: &LabelAlgebra, b: &LabelAlgebra) -> Option<Vec<usize>> {
    let (ta, tb) = (a.tables()?, b.tables()?);
    let n = ta.elements.len();
    if n != tb.elements.len() || ta.rig.is_some() != tb.rig.is_some() {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn consistent(ta: &Tables, tb: &Tables, map: &[usize], x: usize) -> bool {
        let ok = |ma: &[Vec<usize>], mb: &[Vec<usize>]| {
            (0..map.len()).filter(|&y| map[y] != usize::MAX).all(|y| {
                let checks = [(x, y), (y, x)];
                checks.iter().all(|&(p, q)| {
                    let r = ma[p][q];
                    map[r] == usize::MAX || map[r] == mb[map[p]][map[q]]
                })
            })
        };
        ok(&ta.mul, &tb.mul)
            && match (&ta.rig, &tb.rig) {
                (Some(ra), Some(rb)) => ok(&ra.add, &rb.add),
                _ => true,
            }
    }
    fn go(ta: &Tables, tb: &Tables, map: &mut Vec<usize>, used: &mut Vec<bool>, x: usize) -> bool {
        let n = map.len();
        if x == n {
            // All pairs were checked as they became fully assigned.
            return (0..n).all(|p| (0..n).all(|q| tb.mul[map[p]][map[q]] == map[ta.mul[p][q]]))
                && match (&ta.rig, &tb.rig) {
                    (Some(ra), Some(rb)) => (0..n)
                        .all(|p| (0..n).all(|q| rb.add[map[p]][map[q]] == map[ra.add[p][q]])),
                    _ => true,
                };
        }
        if map[x] != usize::MAX {
            return go(ta, tb, map, used, x + 1);
        }
        for y in 0..n {
            if used[y] {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if consistent(ta, tb, map, x) && go(ta, tb, map, used, x + 1) {
                return true;
            }
            map[x] = usize::MAX;
            used[y] = false;
        }
        false
    }
    map[ta.unit] = tb.unit;
    used[tb.unit] = true;
    if let (Some(ra), Some(rb)) = (&ta.rig, &tb.rig) {
        if ra.zero == ta.unit {
            if rb.zero != tb.unit {
                return None;
            }
        } else {
            if rb.zero == tb.unit {
                return None;
            }
            map[ra.zero] = rb.zero;
            used[rb.zero] = true;
        }
    }
    go(ta, tb, &mut map, &mut used, 0).then_some(map)
}

/// How a homomorphism acts on elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomMap {
    Identity,
    /// Image of each source element, by index. Finite sources only.
    Table(Vec<Elem>),
    /// ℚ under multiplication onto {+, 0, −} by sign.
    Sign,
    /// Every element to the unit of the target.
    Collapse,
    /// Apply the first map, then the second.
    Then(Box<MonoidHom>, Box<MonoidHom>),
}

/// A map between label algebras, checked by [`MonoidHom::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidHom {
    source: Arc<LabelAlgebra>,
    target: Arc<LabelAlgebra>,
    map: HomMap,
}

/// One failed homomorphism law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomViolation {
    OutsideTarget { element: String },
    Unit { op: Op },
    Product { op: Op, a: String, b: String },
}

impl fmt::Display for HomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomViolation::OutsideTarget { element } => write!(f, "image of {element} is not in the target"),
            HomViolation::Unit { op } => write!(f, "identity of {op} is not preserved"),
            HomViolation::Product { op, a, b } => write!(f, "{op} of ({a},{b}) is not preserved"),
        }
    }
}

impl MonoidHom {
    pub fn identity(a: Arc<LabelAlgebra>) -> Self {
        MonoidHom { source: a.clone(), target: a, map: HomMap::Identity }
    }

    /// A map given by the image of every element of a finite source.
    pub fn from_table(source: Arc<LabelAlgebra>, target: Arc<LabelAlgebra>, images: Vec<Elem>) -> Result<Self> {
        let n = source
            .size()
            .ok_or_else(|| Error::Unsupported("table homomorphism from an infinite algebra".into()))?;
        if images.len() != n {
            return Err(Error::malformed("homomorphism", format!("{} images for {n} elements", images.len())));
        }
        if let Some(x) = images.iter().find(|x| !target.contains(x)) {
            return Err(Error::malformed("homomorphism", format!("image {x:?} is not in {}", target.name())));
        }
        Ok(MonoidHom { source, target, map: HomMap::Table(images) })
    }

    /// Like [`from_table`](Self::from_table) with images given by name.
    pub fn from_names(source: Arc<LabelAlgebra>, target: Arc<LabelAlgebra>, images: &[&str]) -> Result<Self> {
        let images = images.iter().map(|s| target.parse_elem(s)).collect::<Result<Vec<_>>>()?;
        Self::from_table(source, target, images)
    }

    /// The sign map ℚ(·) → {+, 0, −}.
    pub fn sign() -> Self {
        MonoidHom {
            source: Arc::new(LabelAlgebra::builtin(Builtin::RatMulMonoid)),
            target: Arc::new(LabelAlgebra::sign_zero()),
            map: HomMap::Sign,
        }
    }

    /// The embedding {+, 0, −} → ℚ(·) sending signs to 1, 0, −1.
    pub fn sign_embedding() -> Self {
        let source = Arc::new(LabelAlgebra::sign_zero());
        let target = Arc::new(LabelAlgebra::builtin(Builtin::RatMulMonoid));
        let images = source
            .elements()
            .expect("finite")
            .iter()
            .map(|x| match source.show(x).as_str() {
                "+" => Elem::rat(1, 1),
                "0" => Elem::rat(0, 1),
                _ => Elem::rat(-1, 1),
            })
            .collect();
        Self::from_table(source, target, images).expect("well-formed")
    }

    /// The map discarding all labels.
    pub fn collapse(source: Arc<LabelAlgebra>) -> Self {
        MonoidHom { source, target: Arc::new(LabelAlgebra::builtin(Builtin::TrivialOne)), map: HomMap::Collapse }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MonoidHom) -> Result<Self> {
        if *self.target != *next.source {
            return Err(Error::AlgebraMismatch {
                expected: self.target.name().to_string(),
                found: next.source.name().to_string(),
            });
        }
        Ok(MonoidHom {
            source: self.source.clone(),
            target: next.target.clone(),
            map: HomMap::Then(Box::new(self.clone()), Box::new(next.clone())),
        })
    }

    pub fn source(&self) -> &Arc<LabelAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LabelAlgebra> {
        &self.target
    }

    pub fn map(&self) -> &HomMap {
        &self.map
    }

    pub fn apply(&self, x: &Elem) -> Result<Elem> {
        if !self.source.contains(x) {
            return Err(Error::UnknownElement { algebra: self.source.name().to_string(), name: format!("{x:?}") });
        }
        Ok(match &self.map {
            HomMap::Identity => x.clone(),
            HomMap::Table(images) => match x {
                Elem::Idx(i) => images[*i].clone(),
                _ => unreachable!("finite sources have index elements"),
            },
            HomMap::Collapse => self.target.unit(),
            HomMap::Sign => {
                let q = match x {
                    Elem::Rat(q) => q,
                    _ => unreachable!("sign is defined on rationals"),
                };
                let name = if q.is_positive() {
                    "+"
                } else if q.is_zero() {
                    "0"
                } else {
                    "-"
                };
                self.target.parse_elem(name)?
            }
            HomMap::Then(f, g) => g.apply(&f.apply(x)?)?,
        })
    }

    /// Checks the homomorphism laws for `mul`, and also for `add` when
    /// `additive` is set. Exhaustive on finite sources, sampled otherwise.
    pub fn validate(&self, additive: bool) -> Vec<HomViolation> {
        let xs = match self.source.elements() {
            Some(xs) => xs,
            None => self.source.sample_elements(40, 0xface),
        };
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(xs.len());
        for x in &xs {
            match self.apply(x) {
                Ok(y) if self.target.contains(&y) => images.push(y),
                _ => {
                    out.push(HomViolation::OutsideTarget { element: self.source.show(x) });
                    return out;
                }
            }
        }
        let mut ops = vec![Op::Mul];
        if additive {
            ops.push(Op::Add);
        }
        for op in ops {
            match self.apply(&self.source.identity_of(op)) {
                Ok(y) if y == self.target.identity_of(op) => {}
                _ => out.push(HomViolation::Unit { op }),
            }
            for (a, fa) in xs.iter().zip(&images) {
                for (b, fb) in xs.iter().zip(&images) {
                    let lhs = self.apply(&self.source.op(op, a, b));
                    if lhs.ok() != Some(self.target.op(op, fa, fb)) {
                        out.push(HomViolation::Product { op, a: self.source.show(a), b: self.source.show(b) });
                    }
                }
            }
        }
        out
    }
}

/// Index lookup from element names, used by table constructors in tests
/// and parsers.
pub fn name_index(elements: &[String]) -> HashMap<String, usize> {
    elements.iter().enumerate().map(|(i, s)| (normalize_name(s), i)).collect()
}
