//! Candidate bases: exact decomposition of roots, verification, positive
//! roots.
//!
//! A base is a linearly independent set of m+n+1 roots over which every root
//! decomposes integrally with all coefficients of one sign. The finite check
//! windows the infinite system by |δ-coordinate| ≤ kmax; the upgrade from
//! "verified at cutoff" to "certified" goes through canonical-form
//! recognition, which is complete for these systems.

use crate::canon::{self, CanonicalParams};
use crate::error::Error;
use crate::rootsys::{contains, enumerate, RootClass};
use crate::solve;
use crate::space::{SystemDescriptor, Vector};
use crate::Rat;
use num_traits::Signed;
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;

/// Sign pattern of a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompSign {
    Positive,
    Negative,
    Zero,
    Mixed,
}

/// Exact rational coordinates of a vector over a base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub coefficients: Vec<Rat>,
    pub integral: bool,
    pub sign: DecompSign,
}

impl Decomposition {
    fn classify(coefficients: Vec<Rat>) -> Decomposition {
        let integral = solve::all_integral(&coefficients);
        let (pos, neg, zero) = solve::sign_pattern(&coefficients);
        let sign = if zero {
            DecompSign::Zero
        } else if pos && neg {
            DecompSign::Mixed
        } else if pos {
            DecompSign::Positive
        } else {
            DecompSign::Negative
        };
        Decomposition { coefficients, integral, sign }
    }

    /// Integral with a uniform sign: what membership in span_{ℤ≥0} or
    /// span_{ℤ≤0} requires of a nonzero root.
    pub fn is_uniform(&self) -> bool {
        self.integral && matches!(self.sign, DecompSign::Positive | DecompSign::Negative)
    }
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            coefficients: Vec<String>,
            integral: bool,
            sign: &'a DecompSign,
        }
        Repr {
            coefficients: self.coefficients.iter().map(|c| c.to_string()).collect(),
            integral: self.integral,
            sign: &self.sign,
        }
        .serialize(s)
    }
}

/// An ordered candidate base for a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Base {
    pub sys: SystemDescriptor,
    pub elements: Vec<Vector>,
}

impl Base {
    pub fn new(sys: SystemDescriptor, elements: Vec<Vector>) -> Result<Base, Error> {
        for e in &elements {
            sys.check_compatible(e)?;
        }
        Ok(Base { sys, elements })
    }

    pub fn element_set(&self) -> BTreeSet<Vector> {
        self.elements.iter().cloned().collect()
    }

    pub fn negated(&self) -> Base {
        Base {
            sys: self.sys,
            elements: self.elements.iter().map(|e| -e).collect(),
        }
    }

    /// Default verification cutoff: 2·(max |δ-coefficient| + family period),
    /// at least 4.
    pub fn default_kmax(&self) -> u32 {
        let max_delta = self
            .elements
            .iter()
            .map(|e| e.delta.abs())
            .max()
            .and_then(|b| u32::try_from(&b).ok())
            .unwrap_or(0);
        (2 * (max_delta + self.sys.family.period() as u32)).max(4)
    }
}

/// Why a candidate fails to be a base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RejectReason {
    WrongCardinality { got: usize, expected: usize },
    NotARoot { element: Vector },
    ImaginaryElement { element: Vector },
    DoubledRoot { element: Vector },
    Dependent,
    BadDecomposition { root: Vector, decomposition: Decomposition },
}

impl RejectReason {
    pub fn to_error(&self) -> Error {
        match self {
            RejectReason::WrongCardinality { got, expected } => {
                Error::WrongCardinality { got: *got, expected: *expected }
            }
            RejectReason::NotARoot { element } => Error::NotARoot(element.clone()),
            RejectReason::ImaginaryElement { element } | RejectReason::DoubledRoot { element } => {
                Error::UnverifiedBase { witness: element.clone() }
            }
            RejectReason::Dependent => Error::Dependent,
            RejectReason::BadDecomposition { root, .. } => {
                Error::UnverifiedBase { witness: root.clone() }
            }
        }
    }
}

/// Verification verdict. A cutoff check alone never certifies; certification
/// additionally requires canonical-form recognition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Certified { kmax: u32, params: CanonicalParams },
    VerifiedAtCutoff { kmax: u32 },
    Rejected { reason: RejectReason },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified { .. })
    }

    pub fn is_rejected(&self) -> bool {
        matches!(self, Verdict::Rejected { .. })
    }
}

/// Unique rational coordinates of `v` over the base.
pub fn decompose(base: &Base, v: &Vector) -> Result<Decomposition, Error> {
    base.sys.check_compatible(v)?;
    if base.elements.len() != base.sys.dim() {
        return Err(Error::WrongCardinality {
            got: base.elements.len(),
            expected: base.sys.dim(),
        });
    }
    let x = solve::solve_columns(&base.elements, v).ok_or(Error::Dependent)?;
    Ok(Decomposition::classify(x))
}

/// Element-level checks: cardinality, rootness, the Π∩ℤδ = Π∩2R = ∅ filters,
/// independence.
pub fn structural_check(base: &Base) -> Option<RejectReason> {
    let expected = base.sys.dim();
    if base.elements.len() != expected {
        return Some(RejectReason::WrongCardinality { got: base.elements.len(), expected });
    }
    for e in &base.elements {
        match contains(&base.sys, e).ok()? {
            None => return Some(RejectReason::NotARoot { element: e.clone() }),
            Some(RootClass::Imaginary) => {
                return Some(RejectReason::ImaginaryElement { element: e.clone() })
            }
            Some(_) => {}
        }
        if let Some(half) = e.halved() {
            if contains(&base.sys, &half).ok()?.is_some() {
                return Some(RejectReason::DoubledRoot { element: e.clone() });
            }
        }
    }
    if !solve::independent(&base.elements) {
        return Some(RejectReason::Dependent);
    }
    None
}

/// Decompose every vector of `window` over the base; collect the positive
/// ones. The first failure in canonical order is the reported witness.
///
/// Hot path: with the base's integer adjugate precomputed, each root costs
/// one exact matrix-vector product; the rational solver only runs to build a
/// witness or when coordinates outgrow i128.
pub fn verify_over_window(base: &Base, window: &[Vector]) -> Result<BTreeSet<Vector>, RejectReason> {
    if base.elements.len() == base.sys.dim() {
        if let Some(dec) = solve::IntDecomposer::try_new(&base.elements) {
            return verify_fast(base, window, &dec);
        }
    }
    let mut positives = BTreeSet::new();
    for v in window {
        if v.is_zero() {
            continue;
        }
        let d = match decompose(base, v) {
            Ok(d) => d,
            Err(Error::Dependent) => return Err(RejectReason::Dependent),
            Err(e) => unreachable!("window vectors share the system dimensions: {e}"),
        };
        if !d.is_uniform() {
            return Err(RejectReason::BadDecomposition { root: v.clone(), decomposition: d });
        }
        if d.sign == DecompSign::Positive {
            positives.insert(v.clone());
        }
    }
    Ok(positives)
}

fn verify_fast(
    base: &Base,
    window: &[Vector],
    dec: &solve::IntDecomposer,
) -> Result<BTreeSet<Vector>, RejectReason> {
    let det = dec.det();
    let det_pos = det > 0;
    let witness = |v: &Vector| -> RejectReason {
        let d = decompose(base, v).expect("decomposer exists, so the base is invertible");
        RejectReason::BadDecomposition { root: v.clone(), decomposition: d }
    };
    let mut positives = BTreeSet::new();
    for v in window {
        if v.is_zero() {
            continue;
        }
        let Some(nums) = dec.numerators(v) else {
            // Coordinates outgrew i128: decide this root exactly instead.
            let d = decompose(base, v).expect("decomposer exists, so the base is invertible");
            if !d.is_uniform() {
                return Err(RejectReason::BadDecomposition { root: v.clone(), decomposition: d });
            }
            if d.sign == DecompSign::Positive {
                positives.insert(v.clone());
            }
            continue;
        };
        let mut any_pos = false;
        let mut any_neg = false;
        let mut integral = true;
        for &num in &nums {
            if num % det != 0 {
                integral = false;
            }
            if num != 0 {
                if (num > 0) == det_pos {
                    any_pos = true;
                } else {
                    any_neg = true;
                }
            }
        }
        if !integral || any_pos == any_neg {
            return Err(witness(v));
        }
        if any_pos {
            positives.insert(v.clone());
        }
    }
    Ok(positives)
}

/// Three-valued base verification at the given cutoff.
pub fn is_base(base: &Base, kmax: u32) -> Verdict {
    if let Some(reason) = structural_check(base) {
        return Verdict::Rejected { reason };
    }
    let window = enumerate(&base.sys, kmax);
    if let Err(reason) = verify_over_window(base, &window) {
        return Verdict::Rejected { reason };
    }
    match canon::match_canonical(base) {
        Some(params) => Verdict::Certified { kmax, params },
        None => Verdict::VerifiedAtCutoff { kmax },
    }
}

/// R⁺(Π) windowed at the cutoff. Errors if the base does not verify there.
pub fn positive_roots(base: &Base, kmax: u32) -> Result<BTreeSet<Vector>, Error> {
    if let Some(reason) = structural_check(base) {
        return Err(reason.to_error());
    }
    let window = enumerate(&base.sys, kmax);
    verify_over_window(base, &window).map_err(|r| r.to_error())
}
