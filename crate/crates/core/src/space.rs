//! Ambient space V = span(ε₁..ε_m, δ₁..δ_n, δ), the two bilinear forms,
//! support and sign.
//!
//! Coordinates are arbitrary-precision integers over the fixed ordered basis
//! (ε₁..ε_m, δ₁..δ_n, δ); the same order is used by the text and JSON
//! serializations. In text, ε_i is written `e<i>`, δ_p is `d<p>` and the null
//! element δ is `D`.

use crate::error::Error;
use crate::Int;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// The four twisted families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// A(2m,2n−1)^(2), requires n ≥ 1.
    AEvenOdd2,
    /// A(2m−1,2n−1)^(2), requires m,n ≥ 1 and (m,n) ≠ (1,1).
    AOddOdd2,
    /// A(2m,2n)^(4), requires (m,n) ≠ (0,0).
    AEvenEven4,
    /// D(m+1,n)^(2), requires n ≥ 1.
    D2,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::AEvenOdd2,
        Family::AOddOdd2,
        Family::AEvenEven4,
        Family::D2,
    ];

    /// CLI slug, stable across serializations.
    pub fn slug(self) -> &'static str {
        match self {
            Family::AEvenOdd2 => "a-2m-2n1-2",
            Family::AOddOdd2 => "a-2m1-2n1-2",
            Family::AEvenEven4 => "a-2m-2n-4",
            Family::D2 => "d-2",
        }
    }

    pub fn from_slug(s: &str) -> Result<Family, Error> {
        Family::ALL
            .into_iter()
            .find(|f| f.slug() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family slug `{s}`")))
    }

    /// Human-readable type name.
    pub fn name(self) -> &'static str {
        match self {
            Family::AEvenOdd2 => "A(2m,2n-1)^(2)",
            Family::AOddOdd2 => "A(2m-1,2n-1)^(2)",
            Family::AEvenEven4 => "A(2m,2n)^(4)",
            Family::D2 => "D(m+1,n)^(2)",
        }
    }

    /// Period of the δ-shift lattice for the constrained rows (2 for the
    /// order-2 twists, 4 for A(2m,2n)^(4)).
    pub fn period(self) -> i64 {
        match self {
            Family::AEvenEven4 => 4,
            _ => 2,
        }
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.slug())
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Family::from_slug(&s).map_err(D::Error::custom)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

/// One of the four families together with its (m, n) parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemDescriptor {
    pub family: Family,
    pub m: usize,
    pub n: usize,
}

impl SystemDescriptor {
    pub fn new(family: Family, m: usize, n: usize) -> Result<Self, Error> {
        let bad = |msg: &str| Err(Error::InvalidDescriptor(format!("{}: {msg}", family.name())));
        match family {
            Family::AEvenOdd2 | Family::D2 => {
                if n == 0 {
                    return bad("requires n >= 1");
                }
            }
            Family::AOddOdd2 => {
                if m == 0 || n == 0 {
                    return bad("requires m >= 1 and n >= 1");
                }
                if (m, n) == (1, 1) {
                    return bad("requires (m,n) != (1,1)");
                }
            }
            Family::AEvenEven4 => {
                if (m, n) == (0, 0) {
                    return bad("requires (m,n) != (0,0)");
                }
            }
        }
        Ok(SystemDescriptor { family, m, n })
    }

    /// Rank ℓ = m + n of the underlying finite part.
    pub fn rank(&self) -> usize {
        self.m + self.n
    }

    /// Dimension m + n + 1 of the ambient space.
    pub fn dim(&self) -> usize {
        self.m + self.n + 1
    }

    pub fn check_compatible(&self, v: &Vector) -> Result<(), Error> {
        if v.eps.len() != self.m || v.del.len() != self.n {
            return Err(Error::DimensionMismatch {
                got_m: v.eps.len(),
                got_n: v.del.len(),
                want_m: self.m,
                want_n: self.n,
            });
        }
        Ok(())
    }

    /// All symbols ε₁..ε_m, δ₁..δ_n in basis order.
    pub fn symbols(&self) -> Vec<Symbol> {
        let eps = (1..=self.m).map(Symbol::eps);
        let del = (1..=self.n).map(Symbol::del);
        eps.chain(del).collect()
    }
}

impl fmt::Display for SystemDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[m={},n={}]", self.family.slug(), self.m, self.n)
    }
}

/// ε-kind or δ-odd-kind basis symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Eps,
    Del,
}

/// A basis symbol ε_i or δ_p (never the null element δ). Index is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub index: usize,
}

impl Symbol {
    pub fn eps(index: usize) -> Symbol {
        Symbol { kind: SymbolKind::Eps, index }
    }

    pub fn del(index: usize) -> Symbol {
        Symbol { kind: SymbolKind::Del, index }
    }

    pub fn check_in(&self, sys: &SystemDescriptor) -> Result<(), Error> {
        let bound = match self.kind {
            SymbolKind::Eps => sys.m,
            SymbolKind::Del => sys.n,
        };
        if self.index == 0 || self.index > bound {
            return Err(Error::SymbolOutOfRange(format!(
                "{self} in {sys}"
            )));
        }
        Ok(())
    }

    /// The unit vector for this symbol, in the given dimensions.
    pub fn to_vector(&self, m: usize, n: usize) -> Vector {
        let mut v = Vector::zero(m, n);
        match self.kind {
            SymbolKind::Eps => v.eps[self.index - 1] = Int::from(1),
            SymbolKind::Del => v.del[self.index - 1] = Int::from(1),
        }
        v
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Eps => write!(f, "e{}", self.index),
            SymbolKind::Del => write!(f, "d{}", self.index),
        }
    }
}

/// ±1, used for signed symbols and global base signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Result<Sign, Error> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("sign must be 1 or -1, got {v}"))),
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.as_i64())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_i64(v).map_err(D::Error::custom)
    }
}

/// ±ε_i or ±δ_p: an atom of the canonical parameterizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedSymbol {
    pub sign: Sign,
    pub symbol: Symbol,
}

impl SignedSymbol {
    pub fn plus(symbol: Symbol) -> SignedSymbol {
        SignedSymbol { sign: Sign::Plus, symbol }
    }

    pub fn minus(symbol: Symbol) -> SignedSymbol {
        SignedSymbol { sign: Sign::Minus, symbol }
    }

    pub fn negate(self) -> SignedSymbol {
        SignedSymbol { sign: self.sign.flip(), symbol: self.symbol }
    }

    pub fn to_vector(&self, m: usize, n: usize) -> Vector {
        let v = self.symbol.to_vector(m, n);
        match self.sign {
            Sign::Plus => v,
            Sign::Minus => -&v,
        }
    }
}

impl fmt::Display for SignedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Plus => write!(f, "{}", self.symbol),
            Sign::Minus => write!(f, "-{}", self.symbol),
        }
    }
}

impl Serialize for SignedSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            kind: &'a str,
            idx: usize,
            sign: i64,
        }
        let kind = match self.symbol.kind {
            SymbolKind::Eps => "e",
            SymbolKind::Del => "d",
        };
        Repr { kind, idx: self.symbol.index, sign: self.sign.as_i64() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignedSymbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            kind: String,
            idx: usize,
            sign: i64,
        }
        let r = Repr::deserialize(d)?;
        let kind = match r.kind.as_str() {
            "e" => SymbolKind::Eps,
            "d" => SymbolKind::Del,
            other => return Err(D::Error::custom(format!("symbol kind must be `e` or `d`, got `{other}`"))),
        };
        Ok(SignedSymbol {
            sign: Sign::from_i64(r.sign).map_err(D::Error::custom)?,
            symbol: Symbol { kind, index: r.idx },
        })
    }
}

/// Exact integer coordinate vector over (ε₁..ε_m, δ₁..δ_n, δ).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    pub eps: Vec<Int>,
    pub del: Vec<Int>,
    pub delta: Int,
}

impl Vector {
    pub fn zero(m: usize, n: usize) -> Vector {
        Vector {
            eps: vec![Int::zero(); m],
            del: vec![Int::zero(); n],
            delta: Int::zero(),
        }
    }

    /// kδ in the given dimensions.
    pub fn delta_mult(m: usize, n: usize, k: i64) -> Vector {
        let mut v = Vector::zero(m, n);
        v.delta = Int::from(k);
        v
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.eps.len(), self.del.len())
    }

    pub fn is_zero(&self) -> bool {
        self.delta.is_zero() && self.eps.iter().all(Zero::is_zero) && self.del.iter().all(Zero::is_zero)
    }

    /// Coefficient of a basis symbol.
    pub fn coeff(&self, sym: Symbol) -> &Int {
        match sym.kind {
            SymbolKind::Eps => &self.eps[sym.index - 1],
            SymbolKind::Del => &self.del[sym.index - 1],
        }
    }

    pub fn set_coeff(&mut self, sym: Symbol, value: Int) {
        match sym.kind {
            SymbolKind::Eps => self.eps[sym.index - 1] = value,
            SymbolKind::Del => self.del[sym.index - 1] = value,
        }
    }

    pub fn scaled(&self, k: i64) -> Vector {
        let k = Int::from(k);
        Vector {
            eps: self.eps.iter().map(|c| c * &k).collect(),
            del: self.del.iter().map(|c| c * &k).collect(),
            delta: &self.delta * &k,
        }
    }

    pub fn shifted(&self, dk: i64) -> Vector {
        let mut v = self.clone();
        v.delta += Int::from(dk);
        v
    }

    /// Exact halving; None when any coordinate is odd.
    pub fn halved(&self) -> Option<Vector> {
        let two = Int::from(2);
        let half = |c: &Int| -> Option<Int> {
            if (c % &two).is_zero() {
                Some(c / &two)
            } else {
                None
            }
        };
        Some(Vector {
            eps: self.eps.iter().map(half).collect::<Option<_>>()?,
            del: self.del.iter().map(half).collect::<Option<_>>()?,
            delta: half(&self.delta)?,
        })
    }

    fn same_dims(&self, other: &Vector) -> Result<(), Error> {
        if self.dims() != other.dims() {
            let (want_m, want_n) = self.dims();
            let (got_m, got_n) = other.dims();
            return Err(Error::DimensionMismatch { got_m, got_n, want_m, want_n });
        }
        Ok(())
    }

    /// Compact text form used inside reflection words: `2d1+2D`, `e1-e2`.
    pub fn compact(&self) -> String {
        self.format(false)
    }

    fn format(&self, spaced: bool) -> String {
        let mut out = String::new();
        let push = |coeff: &Int, sym: &str, out: &mut String| {
            if coeff.is_zero() {
                return;
            }
            let neg = coeff.is_negative();
            let mag = coeff.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else if spaced {
                out.push_str(if neg { " - " } else { " + " });
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            if mag != Int::from(1) {
                out.push_str(&mag.to_string());
                if spaced {
                    out.push('*');
                }
            }
            out.push_str(sym);
        };
        for (i, c) in self.eps.iter().enumerate() {
            push(c, &format!("e{}", i + 1), &mut out);
        }
        for (p, c) in self.del.iter().enumerate() {
            push(c, &format!("d{}", p + 1), &mut out);
        }
        push(&self.delta, "D", &mut out);
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parse the text form in the given dimensions. Accepts both the spaced
    /// style `2*e1 - d2 + 3*D` and the compact style `2e1-d2+3D`.
    pub fn parse(text: &str, m: usize, n: usize) -> Result<Vector, Error> {
        let mut v = Vector::zero(m, n);
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty vector text".into()));
        }
        if s == "0" {
            return Ok(v);
        }
        let bytes = s.as_bytes();
        let mut i = 0usize;
        let err = |at: usize| Error::Parse(format!("bad vector text `{text}` near byte {at}"));
        while i < bytes.len() {
            let mut sign = 1i64;
            while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: Int = if start == i {
                Int::from(1)
            } else {
                s[start..i].parse().map_err(|_| err(start))?
            };
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            if i >= bytes.len() {
                return Err(err(i));
            }
            let signed = Int::from(sign) * coeff;
            match bytes[i] {
                b'D' => {
                    i += 1;
                    v.delta += signed;
                }
                b'e' | b'd' => {
                    let kind = if bytes[i] == b'e' { SymbolKind::Eps } else { SymbolKind::Del };
                    i += 1;
                    let digits = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if digits == i {
                        return Err(err(i));
                    }
                    let index: usize = s[digits..i].parse().map_err(|_| err(digits))?;
                    let sym = Symbol { kind, index };
                    let bound = match kind {
                        SymbolKind::Eps => m,
                        SymbolKind::Del => n,
                    };
                    if index == 0 || index > bound {
                        return Err(Error::SymbolOutOfRange(format!("{sym} with m={m}, n={n}")));
                    }
                    let cur = v.coeff(sym).clone();
                    v.set_coeff(sym, cur + signed);
                }
                _ => return Err(err(i)),
            }
        }
        Ok(v)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(true))
    }
}

// Canonical order: δ-coordinate first, then lexicographic coordinates.
impl Ord for Vector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.delta
            .cmp(&other.delta)
            .then_with(|| self.eps.cmp(&other.eps))
            .then_with(|| self.del.cmp(&other.del))
    }
}

impl PartialOrd for Vector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dims(), rhs.dims());
        Vector {
            eps: self.eps.iter().zip(&rhs.eps).map(|(a, b)| a + b).collect(),
            del: self.del.iter().zip(&rhs.del).map(|(a, b)| a + b).collect(),
            delta: &self.delta + &rhs.delta,
        }
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dims(), rhs.dims());
        Vector {
            eps: self.eps.iter().zip(&rhs.eps).map(|(a, b)| a - b).collect(),
            del: self.del.iter().zip(&rhs.del).map(|(a, b)| a - b).collect(),
            delta: &self.delta - &rhs.delta,
        }
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector {
            eps: self.eps.iter().map(|c| -c).collect(),
            del: self.del.iter().map(|c| -c).collect(),
            delta: -&self.delta,
        }
    }
}

// JSON form: {"eps":[...],"del":[...],"delta":k}; coefficients are plain JSON
// integers, falling back to decimal strings past the i64 range.
impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            eps: Vec<IntRepr>,
            del: Vec<IntRepr>,
            delta: IntRepr,
        }
        Repr {
            eps: self.eps.iter().map(IntRepr::from_int).collect(),
            del: self.del.iter().map(IntRepr::from_int).collect(),
            delta: IntRepr::from_int(&self.delta),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            eps: Vec<IntRepr>,
            del: Vec<IntRepr>,
            delta: IntRepr,
        }
        let r = Repr::deserialize(d)?;
        let conv = |v: Vec<IntRepr>| -> Result<Vec<Int>, D::Error> {
            v.into_iter().map(|x| x.to_int().map_err(D::Error::custom)).collect()
        };
        Ok(Vector {
            eps: conv(r.eps)?,
            del: conv(r.del)?,
            delta: r.delta.to_int().map_err(D::Error::custom)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn from_int(v: &Int) -> IntRepr {
        match i64::try_from(v) {
            Ok(x) => IntRepr::Small(x),
            Err(_) => IntRepr::Big(v.to_string()),
        }
    }

    fn to_int(&self) -> Result<Int, Error> {
        match self {
            IntRepr::Small(x) => Ok(Int::from(*x)),
            IntRepr::Big(s) => s.parse().map_err(|_| Error::Parse(format!("bad integer `{s}`"))),
        }
    }
}

/// Invariant form κ: (ε_i,ε_j) = δ_ij, (δ_p,δ_q) = −δ_pq, (ε_i,δ_p) = 0,
/// (δ,V) = 0.
pub fn form_kappa(u: &Vector, v: &Vector) -> Result<Int, Error> {
    u.same_dims(v)?;
    let eps: Int = u.eps.iter().zip(&v.eps).map(|(a, b)| a * b).sum();
    let del: Int = u.del.iter().zip(&v.del).map(|(a, b)| a * b).sum();
    Ok(eps - del)
}

/// Auxiliary positive semidefinite form: like κ but with (δ_p,δ_q)_* = +δ_pq;
/// its radical on the root span is exactly span{δ}.
pub fn form_star(u: &Vector, v: &Vector) -> Result<Int, Error> {
    u.same_dims(v)?;
    let eps: Int = u.eps.iter().zip(&v.eps).map(|(a, b)| a * b).sum();
    let del: Int = u.del.iter().zip(&v.del).map(|(a, b)| a * b).sum();
    Ok(eps + del)
}

/// Basis symbols with nonzero coefficient; δ is never part of the support.
pub fn support(v: &Vector) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    for (i, c) in v.eps.iter().enumerate() {
        if !c.is_zero() {
            out.insert(Symbol::eps(i + 1));
        }
    }
    for (p, c) in v.del.iter().enumerate() {
        if !c.is_zero() {
            out.insert(Symbol::del(p + 1));
        }
    }
    out
}

/// Sign of the coefficient of `sym` in `v`; defined only on the support.
pub fn sgn(sym: Symbol, v: &Vector) -> Result<Sign, Error> {
    let c = match sym.kind {
        SymbolKind::Eps => v.eps.get(sym.index - 1),
        SymbolKind::Del => v.del.get(sym.index - 1),
    }
    .ok_or_else(|| Error::SymbolOutOfRange(format!("{sym} in a vector of dims {:?}", v.dims())))?;
    if c.is_zero() {
        return Err(Error::SymbolNotInSupport {
            symbol: sym.to_string(),
            vector: v.to_string(),
        });
    }
    Ok(if c.is_positive() { Sign::Plus } else { Sign::Minus })
}
