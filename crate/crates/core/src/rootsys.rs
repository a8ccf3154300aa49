//! Root membership, classification and bounded enumeration for the four
//! families.
//!
//! Per family the real/nonsingular roots are unions of shifted finite shapes:
//! single-symbol roots ±ζ + kδ ("short"), two-symbol roots ±ζ±ξ + kδ ("long"
//! when the symbols have equal kind, "nonsingular" when mixed), and doubled
//! roots ±2ζ + kδ ("extra-long"); which δ-levels k are allowed is the only
//! thing that varies between families.

use crate::error::Error;
use crate::space::{support, Family, Symbol, SymbolKind, SystemDescriptor, Vector};
use crate::Int;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// Classification of a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootClass {
    /// Nonzero element of ℤδ.
    Imaginary,
    /// ±ζ + kδ.
    Short,
    /// ±ζ±ξ + kδ with ζ, ξ of equal kind.
    Long,
    /// ±2ζ + kδ.
    ExtraLong,
    /// ±ε_i±δ_p + kδ; κ-isotropic but not imaginary.
    Nonsingular,
}

impl RootClass {
    /// Real roots are the κ-anisotropic ones.
    pub fn is_real(self) -> bool {
        matches!(self, RootClass::Short | RootClass::Long | RootClass::ExtraLong)
    }

    /// Spec-level tag collapsing the per-family length sub-tags.
    pub fn tag(self) -> &'static str {
        match self {
            RootClass::Imaginary => "imaginary",
            RootClass::Short => "short-real",
            RootClass::Long | RootClass::ExtraLong => "long-real",
            RootClass::Nonsingular => "nonsingular",
        }
    }
}

impl std::fmt::Display for RootClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RootClass::Imaginary => "imaginary",
            RootClass::Short => "short",
            RootClass::Long => "long",
            RootClass::ExtraLong => "extra-long",
            RootClass::Nonsingular => "nonsingular",
        };
        f.write_str(s)
    }
}

fn is_even(x: &Int) -> bool {
    (x % Int::from(2)).is_zero()
}

fn mod4(x: &Int) -> i64 {
    i64::try_from(x.mod_floor(&Int::from(4))).unwrap()
}

/// Does the family contain single-symbol roots ±ζ + ℤδ?
fn has_singles(family: Family) -> bool {
    !matches!(family, Family::AOddOdd2)
}

/// δ-levels allowed for two-symbol roots.
fn pair_level_ok(family: Family, k: &Int) -> bool {
    match family {
        Family::AEvenOdd2 | Family::AOddOdd2 => true,
        Family::AEvenEven4 | Family::D2 => is_even(k),
    }
}

/// δ-levels allowed for ±2ζ roots of the given symbol kind.
fn doubled_level_ok(family: Family, kind: SymbolKind, k: &Int) -> bool {
    match (family, kind) {
        (Family::AEvenOdd2 | Family::AOddOdd2, SymbolKind::Eps) => !is_even(k),
        (Family::AEvenOdd2 | Family::AOddOdd2, SymbolKind::Del) => is_even(k),
        (Family::AEvenEven4, SymbolKind::Eps) => mod4(k) == 2,
        (Family::AEvenEven4, SymbolKind::Del) => mod4(k) == 0,
        (Family::D2, SymbolKind::Eps) => false,
        (Family::D2, SymbolKind::Del) => is_even(k),
    }
}

/// Membership test: the class of `v` in the root system of `sys`, or `None`.
/// Zero is reported as absent; callers handle 0 explicitly.
pub fn contains(sys: &SystemDescriptor, v: &Vector) -> Result<Option<RootClass>, Error> {
    sys.check_compatible(v)?;
    if v.is_zero() {
        return Ok(None);
    }
    let supp: Vec<Symbol> = support(v).into_iter().collect();
    let class = match supp.len() {
        0 => Some(RootClass::Imaginary),
        1 => {
            let sym = supp[0];
            let c = v.coeff(sym).abs();
            if c == Int::from(1) {
                has_singles(sys.family).then_some(RootClass::Short)
            } else if c == Int::from(2) {
                doubled_level_ok(sys.family, sym.kind, &v.delta).then_some(RootClass::ExtraLong)
            } else {
                None
            }
        }
        2 => {
            let unit = supp.iter().all(|s| v.coeff(*s).abs() == Int::from(1));
            if unit && pair_level_ok(sys.family, &v.delta) {
                if supp[0].kind == supp[1].kind {
                    Some(RootClass::Long)
                } else {
                    Some(RootClass::Nonsingular)
                }
            } else {
                None
            }
        }
        _ => None,
    };
    Ok(class)
}

/// True iff `v` is an extra-long root (±2ζ shape) of `sys`.
pub fn is_long_like(sys: &SystemDescriptor, v: &Vector) -> Result<bool, Error> {
    match contains(sys, v)? {
        None => Err(Error::NotARoot(v.clone())),
        Some(class) => Ok(class == RootClass::ExtraLong),
    }
}

/// All roots with |δ-coordinate| ≤ kmax, plus 0; sorted in canonical order.
pub fn enumerate(sys: &SystemDescriptor, kmax: u32) -> Vec<Vector> {
    let (m, n) = (sys.m, sys.n);
    let symbols = sys.symbols();
    let mut out = Vec::new();
    for k in -(kmax as i64)..=(kmax as i64) {
        let level = Int::from(k);
        out.push(Vector::delta_mult(m, n, k));
        if has_singles(sys.family) {
            for &s in &symbols {
                for sign in [1, -1] {
                    let mut v = Vector::delta_mult(m, n, k);
                    v.set_coeff(s, Int::from(sign));
                    out.push(v);
                }
            }
        }
        if pair_level_ok(sys.family, &level) {
            for (a, &sa) in symbols.iter().enumerate() {
                for &sb in symbols.iter().skip(a + 1) {
                    for (ca, cb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        let mut v = Vector::delta_mult(m, n, k);
                        v.set_coeff(sa, Int::from(ca));
                        v.set_coeff(sb, Int::from(cb));
                        out.push(v);
                    }
                }
            }
        }
        for &s in &symbols {
            if doubled_level_ok(sys.family, s.kind, &level) {
                for sign in [2, -2] {
                    let mut v = Vector::delta_mult(m, n, k);
                    v.set_coeff(s, Int::from(sign));
                    out.push(v);
                }
            }
        }
    }
    out.sort();
    out
}

/// The auxiliary systems of the A(2m,2n−1)^(2) analysis: S is the twist-free
/// part (all single- and two-symbol shapes at every level), T adds all ±2ζ at
/// odd levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuxSystem {
    S,
    T,
}

/// Membership in the auxiliary system (defined on A(2m,2n−1)^(2) descriptors).
pub fn contains_aux(sys: &SystemDescriptor, aux: AuxSystem, v: &Vector) -> Result<bool, Error> {
    if sys.family != Family::AEvenOdd2 {
        return Err(Error::OutOfScope(format!(
            "auxiliary systems S/T are defined for {} only",
            Family::AEvenOdd2.name()
        )));
    }
    sys.check_compatible(v)?;
    if v.is_zero() {
        return Ok(false);
    }
    let supp: Vec<Symbol> = support(v).into_iter().collect();
    let ok = match supp.len() {
        0 => true,
        1 => {
            let c = v.coeff(supp[0]).abs();
            c == Int::from(1)
                || (c == Int::from(2) && aux == AuxSystem::T && !is_even(&v.delta))
        }
        2 => supp.iter().all(|s| v.coeff(*s).abs() == Int::from(1)),
        _ => false,
    };
    Ok(ok)
}

/// Roots of the auxiliary system with |δ-coordinate| ≤ kmax, plus 0.
pub fn enumerate_aux(sys: &SystemDescriptor, aux: AuxSystem, kmax: u32) -> Result<Vec<Vector>, Error> {
    if sys.family != Family::AEvenOdd2 {
        return Err(Error::OutOfScope(format!(
            "auxiliary systems S/T are defined for {} only",
            Family::AEvenOdd2.name()
        )));
    }
    let (m, n) = (sys.m, sys.n);
    let symbols = sys.symbols();
    let mut out = Vec::new();
    for k in -(kmax as i64)..=(kmax as i64) {
        out.push(Vector::delta_mult(m, n, k));
        for &s in &symbols {
            for sign in [1, -1] {
                let mut v = Vector::delta_mult(m, n, k);
                v.set_coeff(s, Int::from(sign));
                out.push(v);
            }
            if aux == AuxSystem::T && k.rem_euclid(2) == 1 {
                for sign in [2, -2] {
                    let mut v = Vector::delta_mult(m, n, k);
                    v.set_coeff(s, Int::from(sign));
                    out.push(v);
                }
            }
        }
        for (a, &sa) in symbols.iter().enumerate() {
            for &sb in symbols.iter().skip(a + 1) {
                for (ca, cb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut v = Vector::delta_mult(m, n, k);
                    v.set_coeff(sa, Int::from(ca));
                    v.set_coeff(sb, Int::from(cb));
                    out.push(v);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Family;

    fn sys(f: Family, m: usize, n: usize) -> SystemDescriptor {
        SystemDescriptor::new(f, m, n).unwrap()
    }

    fn v(text: &str, s: &SystemDescriptor) -> Vector {
        Vector::parse(text, s.m, s.n).unwrap()
    }

    #[test]
    fn membership_examples() {
        let a21 = sys(Family::AEvenOdd2, 1, 1);
        // 2δ₁+2δ is extra-long (2δ at even levels); 2ε₁+2δ needs an odd level.
        assert_eq!(contains(&a21, &v("2d1+2D", &a21)).unwrap(), Some(RootClass::ExtraLong));
        assert_eq!(contains(&a21, &v("2e1+2D", &a21)).unwrap(), None);
        assert_eq!(contains(&a21, &v("2e1+D", &a21)).unwrap(), Some(RootClass::ExtraLong));
        // D2 has no 2ε roots at all.
        let d2 = sys(Family::D2, 1, 1);
        assert_eq!(contains(&d2, &v("2e1", &d2)).unwrap(), None);
        // ℤδ is imaginary in every family; 0 is absent.
        for f in Family::ALL {
            let s = if f == Family::AOddOdd2 { sys(f, 2, 1) } else { sys(f, 1, 1) };
            assert_eq!(contains(&s, &v("5D", &s)).unwrap(), Some(RootClass::Imaginary));
            assert_eq!(contains(&s, &Vector::zero(s.m, s.n)).unwrap(), None);
        }
    }

    #[test]
    fn membership_classes() {
        let a44 = sys(Family::AEvenEven4, 1, 1);
        assert_eq!(contains(&a44, &v("e1+3D", &a44)).unwrap(), Some(RootClass::Short));
        assert_eq!(contains(&a44, &v("e1+d1", &a44)).unwrap(), Some(RootClass::Nonsingular));
        assert_eq!(contains(&a44, &v("e1+d1+D", &a44)).unwrap(), None);
        assert_eq!(contains(&a44, &v("2e1+2D", &a44)).unwrap(), Some(RootClass::ExtraLong));
        assert_eq!(contains(&a44, &v("2e1+4D", &a44)).unwrap(), None);
        assert_eq!(contains(&a44, &v("2d1+4D", &a44)).unwrap(), Some(RootClass::ExtraLong));
        assert_eq!(contains(&a44, &v("2d1+2D", &a44)).unwrap(), None);
        let a22 = sys(Family::AEvenEven4, 2, 0);
        assert_eq!(contains(&a22, &v("e1-e2+2D", &a22)).unwrap(), Some(RootClass::Long));
        assert_eq!(contains(&a22, &v("e1-e2+D", &a22)).unwrap(), None);
        // A(2m−1,2n−1)^(2) has no single-symbol roots.
        let a11 = sys(Family::AOddOdd2, 2, 1);
        assert_eq!(contains(&a11, &v("e1", &a11)).unwrap(), None);
        assert_eq!(contains(&a11, &v("e1-d1+5D", &a11)).unwrap(), Some(RootClass::Nonsingular));
        assert_eq!(contains(&a11, &v("3e1", &a11)).unwrap(), None);
    }

    #[test]
    fn nonsingular_iff_kappa_isotropic() {
        let s = sys(Family::AEvenOdd2, 2, 1);
        for root in enumerate(&s, 2) {
            let Some(class) = contains(&s, &root).unwrap() else { continue };
            if class == RootClass::Imaginary {
                continue;
            }
            let norm = crate::space::form_kappa(&root, &root).unwrap();
            assert_eq!(class == RootClass::Nonsingular, norm.is_zero(), "{root}");
        }
    }

    #[test]
    fn enumerate_a4_tiny_window() {
        // A(0,2)^(4), kmax = 0: hand-enumerated {0, ±δ₁, ±2δ₁}.
        let s = sys(Family::AEvenEven4, 0, 1);
        let got = enumerate(&s, 0);
        let want: Vec<Vector> = ["0", "d1", "-d1", "2d1", "-2d1"]
            .iter()
            .map(|t| v(t, &s))
            .collect();
        let mut want = want;
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn enumerate_matches_scan_oracle() {
        // Independent oracle: scan every integer vector with coordinates in
        // [−2,2]² × [−kmax,kmax] and filter through `contains`.
        let s = sys(Family::AEvenOdd2, 1, 1);
        let kmax = 1u32;
        let mut scanned = Vec::new();
        for e in -2i64..=2 {
            for d in -2i64..=2 {
                for k in -(kmax as i64)..=(kmax as i64) {
                    let mut w = Vector::delta_mult(1, 1, k);
                    w.set_coeff(Symbol::eps(1), Int::from(e));
                    w.set_coeff(Symbol::del(1), Int::from(d));
                    if w.is_zero() || contains(&s, &w).unwrap().is_some() {
                        scanned.push(w);
                    }
                }
            }
        }
        scanned.sort();
        assert_eq!(enumerate(&s, kmax), scanned);
        assert_eq!(scanned.len(), 33);
    }

    #[test]
    fn enumerate_closed_under_negation() {
        for (f, m, n) in [
            (Family::AEvenOdd2, 1, 2),
            (Family::AOddOdd2, 2, 1),
            (Family::AEvenEven4, 1, 1),
            (Family::D2, 2, 1),
        ] {
            let s = sys(f, m, n);
            let roots = enumerate(&s, 2);
            let mut negated: Vec<Vector> = roots.iter().map(|r| -r).collect();
            negated.sort();
            assert_eq!(roots, negated);
            for r in &roots {
                assert_eq!(
                    contains(&s, r).unwrap(),
                    contains(&s, &-r).unwrap(),
                    "negation class mismatch at {r}"
                );
            }
        }
    }

    #[test]
    fn long_like_examples() {
        let a11 = sys(Family::AOddOdd2, 2, 1);
        assert!(is_long_like(&a11, &v("-2d1", &a11)).unwrap());
        assert!(!is_long_like(&a11, &v("e1-e2", &a11)).unwrap());
        assert!(matches!(
            is_long_like(&a11, &v("e1", &a11)),
            Err(Error::NotARoot(_))
        ));
        let a44 = sys(Family::AEvenEven4, 1, 1);
        assert!(is_long_like(&a44, &v("2e1+2D", &a44)).unwrap());
    }

    #[test]
    fn aux_systems() {
        let s = sys(Family::AEvenOdd2, 1, 1);
        // 2δ₁+δ ∈ T \ R, 2δ₁ ∈ R \ T, both handled by the auxiliary view.
        assert!(contains_aux(&s, AuxSystem::T, &v("2d1+D", &s)).unwrap());
        assert!(!contains_aux(&s, AuxSystem::S, &v("2d1+D", &s)).unwrap());
        assert!(!contains_aux(&s, AuxSystem::T, &v("2d1", &s)).unwrap());
        assert!(contains_aux(&s, AuxSystem::S, &v("e1-d1+3D", &s)).unwrap());
        let t_window = enumerate_aux(&s, AuxSystem::T, 1).unwrap();
        for w in &t_window {
            assert!(w.is_zero() || contains_aux(&s, AuxSystem::T, w).unwrap(), "{w}");
        }
        let s_window = enumerate_aux(&s, AuxSystem::S, 1).unwrap();
        assert!(s_window.iter().all(|w| t_window.contains(w)));
        let d2 = sys(Family::D2, 1, 1);
        assert!(contains_aux(&d2, AuxSystem::S, &v("e1", &d2)).is_err());
    }
}
