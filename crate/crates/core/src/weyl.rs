//! Even reflections, quasi-reflections, reflection words, and the
//! R-preserving operator words of the A(2m−1,2n−1)^(2) analysis.
//!
//! A word stores its generating roots, not matrices: the normalization and
//! conjugation constructions are all given as explicit products of named
//! reflections, and the inverse word is just the reversed letter sequence.

use crate::error::Error;
use crate::rootsys::contains;
use crate::space::{form_kappa, form_star, Family, SignedSymbol, SymbolKind, SystemDescriptor, Vector};
use crate::Int;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which bilinear form a reflection uses: κ gives the even reflections σ_α,
/// the auxiliary form gives the quasi-reflections r_α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormTag {
    #[serde(rename = "k")]
    Kappa,
    #[serde(rename = "*")]
    Star,
}

impl FormTag {
    pub fn apply(self, u: &Vector, v: &Vector) -> Result<Int, Error> {
        match self {
            FormTag::Kappa => form_kappa(u, v),
            FormTag::Star => form_star(u, v),
        }
    }
}

/// One reflection: a root plus the form it reflects with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Letter {
    pub root: Vector,
    pub tag: FormTag,
}

impl Letter {
    /// Rejects axes that are isotropic for the tagged form.
    pub fn new(root: Vector, tag: FormTag) -> Result<Letter, Error> {
        if tag.apply(&root, &root)?.is_zero() {
            return Err(Error::IsotropicReflection(root));
        }
        Ok(Letter { root, tag })
    }

    pub fn star(root: Vector) -> Result<Letter, Error> {
        Letter::new(root, FormTag::Star)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.tag {
            FormTag::Kappa => "rk",
            FormTag::Star => "r*",
        };
        write!(f, "{tag}[{}]", self.root.compact())
    }
}

/// Finite product of reflections, applied right-to-left.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReflectionWord {
    pub letters: Vec<Letter>,
}

impl ReflectionWord {
    pub fn identity() -> ReflectionWord {
        ReflectionWord { letters: Vec::new() }
    }

    pub fn single(letter: Letter) -> ReflectionWord {
        ReflectionWord { letters: vec![letter] }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Each reflection is an involution, so the inverse is the reverse word.
    pub fn inverse(&self) -> ReflectionWord {
        ReflectionWord {
            letters: self.letters.iter().rev().cloned().collect(),
        }
    }

    /// self ∘ other: `other` acts first.
    pub fn compose(&self, other: &ReflectionWord) -> ReflectionWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        ReflectionWord { letters }
    }

    pub fn parse(text: &str, m: usize, n: usize) -> Result<ReflectionWord, Error> {
        let t = text.trim();
        if t.is_empty() || t == "id" {
            return Ok(ReflectionWord::identity());
        }
        let mut letters = Vec::new();
        for part in t.split('.') {
            let part = part.trim();
            let (tag, rest) = if let Some(rest) = part.strip_prefix("r*") {
                (FormTag::Star, rest)
            } else if let Some(rest) = part.strip_prefix("rk") {
                (FormTag::Kappa, rest)
            } else {
                return Err(Error::Parse(format!("bad letter `{part}`: expected r*[..] or rk[..]")));
            };
            let inner = rest
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("bad letter `{part}`: missing [..]")))?;
            letters.push(Letter::new(Vector::parse(inner, m, n)?, tag)?);
        }
        Ok(ReflectionWord { letters })
    }
}

impl fmt::Display for ReflectionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self.letters.iter().map(Letter::to_string).collect();
        f.write_str(&parts.join(" . "))
    }
}

/// Reflection of `v` at `axis` with respect to the tagged form:
/// v − 2·(v,α)/(α,α) · α, exactly.
pub fn reflect(axis: &Vector, tag: FormTag, v: &Vector) -> Result<Vector, Error> {
    let norm = tag.apply(axis, axis)?;
    if norm.is_zero() {
        return Err(Error::IsotropicReflection(axis.clone()));
    }
    let t = Int::from(2) * tag.apply(v, axis)?;
    let scale = |vc: &Int, ac: &Int| -> Result<Int, Error> {
        let num = &t * ac;
        if (&num % &norm).is_zero() {
            Ok(vc - num / &norm)
        } else {
            Err(Error::NonIntegralImage(axis.clone()))
        }
    };
    Ok(Vector {
        eps: v
            .eps
            .iter()
            .zip(&axis.eps)
            .map(|(vc, ac)| scale(vc, ac))
            .collect::<Result<_, _>>()?,
        del: v
            .del
            .iter()
            .zip(&axis.del)
            .map(|(vc, ac)| scale(vc, ac))
            .collect::<Result<_, _>>()?,
        delta: scale(&v.delta, &axis.delta)?,
    })
}

/// Apply a word to a vector, rightmost letter first.
pub fn apply_word(word: &ReflectionWord, v: &Vector) -> Result<Vector, Error> {
    let mut cur = v.clone();
    for letter in word.letters.iter().rev() {
        cur = reflect(&letter.root, letter.tag, &cur)?;
    }
    Ok(cur)
}

/// Apply a word to every element of a set.
pub fn apply_word_all(word: &ReflectionWord, vs: &[Vector]) -> Result<Vec<Vector>, Error> {
    vs.iter().map(|v| apply_word(word, v)).collect()
}

/// The guaranteed R-preserving operators for A(2m−1,2n−1)^(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BelongTo {
    /// r_{2ζ+pδ}; p even for δ-kind ζ, odd for ε-kind ζ.
    I { zeta: SignedSymbol, p: i64 },
    /// r_{ζ−η+pδ} with ζ, η of the same kind.
    J { zeta: SignedSymbol, eta: SignedSymbol, p: i64 },
    /// r_{ζ−η+pδ} · r_{ζ−η+qδ}.
    S { zeta: SignedSymbol, eta: SignedSymbol, p: i64, q: i64 },
    /// r_{ζ+η+pδ} · r_{ζ−η+qδ}.
    T { zeta: SignedSymbol, eta: SignedSymbol, p: i64, q: i64 },
}

fn symbol_letter(sys: &SystemDescriptor, v: Vector) -> Result<Letter, Error> {
    debug_assert!(contains(sys, &v).unwrap().is_some());
    Letter::star(v)
}

/// Build the operator's word, validating the corollary's argument
/// constraints.
pub fn belongto_operator(sys: &SystemDescriptor, op: BelongTo) -> Result<ReflectionWord, Error> {
    if sys.family != Family::AOddOdd2 {
        return Err(Error::OutOfScope(format!(
            "the guaranteed operators are stated for {} only",
            Family::AOddOdd2.name()
        )));
    }
    let check_pair = |zeta: &SignedSymbol, eta: &SignedSymbol| -> Result<(), Error> {
        zeta.symbol.check_in(sys)?;
        eta.symbol.check_in(sys)?;
        if zeta.symbol == eta.symbol {
            return Err(Error::InvalidOperator("requires zeta != ±eta".into()));
        }
        Ok(())
    };
    let (m, n) = (sys.m, sys.n);
    match op {
        BelongTo::I { zeta, p } => {
            zeta.symbol.check_in(sys)?;
            let want_odd = zeta.symbol.kind == SymbolKind::Eps;
            if (p.rem_euclid(2) == 1) != want_odd {
                return Err(Error::InvalidOperator(format!(
                    "I requires p {} for {}-kind zeta",
                    if want_odd { "odd" } else { "even" },
                    if want_odd { "eps" } else { "del" },
                )));
            }
            let v = &zeta.to_vector(m, n).scaled(2) + &Vector::delta_mult(m, n, p);
            Ok(ReflectionWord::single(symbol_letter(sys, v)?))
        }
        BelongTo::J { zeta, eta, p } => {
            check_pair(&zeta, &eta)?;
            if zeta.symbol.kind != eta.symbol.kind {
                return Err(Error::InvalidOperator("J requires zeta, eta of the same kind".into()));
            }
            let v = &(&zeta.to_vector(m, n) - &eta.to_vector(m, n)) + &Vector::delta_mult(m, n, p);
            Ok(ReflectionWord::single(symbol_letter(sys, v)?))
        }
        BelongTo::S { zeta, eta, p, q } => {
            check_pair(&zeta, &eta)?;
            let diff = &zeta.to_vector(m, n) - &eta.to_vector(m, n);
            let first = symbol_letter(sys, &diff + &Vector::delta_mult(m, n, p))?;
            let second = symbol_letter(sys, &diff + &Vector::delta_mult(m, n, q))?;
            Ok(ReflectionWord { letters: vec![first, second] })
        }
        BelongTo::T { zeta, eta, p, q } => {
            check_pair(&zeta, &eta)?;
            let sum = &zeta.to_vector(m, n) + &eta.to_vector(m, n);
            let diff = &zeta.to_vector(m, n) - &eta.to_vector(m, n);
            let first = symbol_letter(sys, &sum + &Vector::delta_mult(m, n, p))?;
            let second = symbol_letter(sys, &diff + &Vector::delta_mult(m, n, q))?;
            Ok(ReflectionWord { letters: vec![first, second] })
        }
    }
}

/// Bounded certificate: do the word and its inverse map every root of the
/// kmax window back into the root system?
pub fn check_preserves_r(word: &ReflectionWord, sys: &SystemDescriptor, kmax: u32) -> bool {
    let window = crate::rootsys::enumerate(sys, kmax);
    for dir in [word.clone(), word.inverse()] {
        for v in &window {
            if v.is_zero() {
                continue;
            }
            match apply_word(&dir, v) {
                Ok(img) => {
                    if contains(sys, &img).map(|c| c.is_none()).unwrap_or(true) {
                        return false;
                    }
                }
                Err(_) => return false,
            }
        }
    }
    true
}
