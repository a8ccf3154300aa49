//! Twisted affine root supersystems of types A(2m,2n−1)^(2), A(2m−1,2n−1)^(2),
//! A(2m,2n)^(4) and D(m+1,n)^(2): exact root membership and enumeration, base
//! verification by integral decomposition, canonical base construction and
//! recognition, quasi-Weyl normalization, and brute-force cross-checks.
//!
//! All arithmetic is exact: integer coordinates, rational linear solves, no
//! tolerances anywhere.
//!
//! ```
//! use rootsuper::{bases, canon, rootsys, Family, SystemDescriptor, Vector};
//!
//! let sys = SystemDescriptor::new(Family::AOddOdd2, 2, 1)?;
//! // {−2d1, d1−e1, e1−e2, 2e2+D} is a base; recognition certifies it.
//! let elements = ["-2d1", "d1-e1", "e1-e2", "2e2+D"]
//!     .iter()
//!     .map(|t| Vector::parse(t, sys.m, sys.n))
//!     .collect::<Result<Vec<_>, _>>()?;
//! let base = bases::Base::new(sys, elements)?;
//! let verdict = bases::is_base(&base, 6);
//! assert!(verdict.is_certified());
//! let params = canon::match_canonical(&base).unwrap();
//! assert_eq!(params.form.tag(), "B4");
//! // Every root in a window decomposes with one sign over a base.
//! assert!(rootsys::enumerate(&sys, 4).len() > bases::positive_roots(&base, 4)?.len());
//! # Ok::<(), rootsuper::Error>(())
//! ```

pub mod bases;
pub mod canon;
pub mod error;
pub mod oracle;
pub mod rootsys;
pub mod space;
mod solve;
pub mod weyl;

pub use bases::{Base, DecompSign, Decomposition, RejectReason, Verdict};
pub use canon::{CanonicalForm, CanonicalParams};
pub use error::Error;
pub use rootsys::{AuxSystem, RootClass};
pub use space::{Family, Sign, SignedSymbol, Symbol, SymbolKind, SystemDescriptor, Vector};
pub use weyl::{BelongTo, FormTag, Letter, ReflectionWord};

/// Exact integer coefficient type used throughout.
pub type Int = num_bigint::BigInt;
/// Exact rational type used by internal linear solves.
pub type Rat = num_rational::BigRational;
