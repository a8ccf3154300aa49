//! Dual-route classification check on small instances: the set of bases the
//! exhaustive search finds must coincide exactly with the set of row
//! instances whose elements fit the same entry window.

use num_traits::Signed;
use rootsuper::oracle::{forms_for, search_bases, SearchConfig};
use rootsuper::space::{Sign, SignedSymbol, Symbol, SymbolKind};
use rootsuper::{canon, CanonicalParams, Family, Int, SystemDescriptor, Vector};
use std::collections::BTreeSet;

fn permutations(symbols: &[Symbol]) -> Vec<Vec<Symbol>> {
    if symbols.len() <= 1 {
        return vec![symbols.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &head) in symbols.iter().enumerate() {
        let rest: Vec<Symbol> = symbols
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, s)| *s)
            .collect();
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn k_vectors(rank: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        let mut next = Vec::new();
        for prefix in &out {
            for k in -bound..=bound {
                let mut p = prefix.clone();
                p.push(k);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Every row instance of the system whose elements all have |δ-coeff| ≤
/// `window`, as element sets.
fn all_row_instances(sys: &SystemDescriptor, window: u32) -> BTreeSet<BTreeSet<Vector>> {
    let mut out = BTreeSet::new();
    let bound = Int::from(window);
    for form in forms_for(sys) {
        for perm in permutations(&sys.symbols()) {
            for signs in 0..(1u32 << sys.rank()) {
                let zetas: Vec<SignedSymbol> = perm
                    .iter()
                    .enumerate()
                    .map(|(i, &symbol)| SignedSymbol {
                        sign: if signs >> i & 1 == 0 { Sign::Plus } else { Sign::Minus },
                        symbol,
                    })
                    .collect();
                for ks in k_vectors(sys.rank(), 3) {
                    for global in [Sign::Plus, Sign::Minus] {
                        let p = CanonicalParams::new(form, zetas.clone(), ks.clone(), global);
                        if p.validate(sys).is_err() {
                            continue;
                        }
                        let base = canon::build_base(sys, &p).unwrap();
                        if base.elements.iter().all(|e| e.delta.abs() <= bound) {
                            out.insert(base.element_set());
                        }
                    }
                }
            }
        }
    }
    out
}

fn check_instance(sys: SystemDescriptor) {
    let found = search_bases(&sys, &SearchConfig::new(6, 1)).unwrap();
    let found_sets: BTreeSet<BTreeSet<Vector>> =
        found.iter().map(|f| f.elements.iter().cloned().collect()).collect();
    assert_eq!(found_sets.len(), found.len(), "search must not repeat a base");
    let expected = all_row_instances(&sys, 1);
    assert_eq!(
        found_sets, expected,
        "search and row enumeration disagree on {sys}: search {} vs rows {}",
        found_sets.len(),
        expected.len()
    );
}

#[test]
fn search_equals_row_enumeration_a_odd_odd_2_1() {
    check_instance(SystemDescriptor::new(Family::AOddOdd2, 2, 1).unwrap());
}

#[test]
fn search_equals_row_enumeration_a_even_odd_1_1() {
    check_instance(SystemDescriptor::new(Family::AEvenOdd2, 1, 1).unwrap());
}

#[test]
fn search_equals_row_enumeration_d2_and_a4() {
    check_instance(SystemDescriptor::new(Family::D2, 1, 1).unwrap());
    check_instance(SystemDescriptor::new(Family::AEvenEven4, 1, 1).unwrap());
    check_instance(SystemDescriptor::new(Family::AEvenEven4, 0, 1).unwrap());
}

/// The k-grid in `all_row_instances` is wide enough: chain elements pin
/// successive shifts within 1 of each other and each row anchors an absolute
/// bound, so |k_i| ≤ 3 covers every window-1 instance. Spot-check by
/// widening.
#[test]
fn k_bound_is_saturated() {
    let sys = SystemDescriptor::new(Family::AOddOdd2, 2, 1).unwrap();
    let with_3: BTreeSet<_> = all_row_instances(&sys, 1);
    // Widening the symbol-shift grid must not add new window-1 instances.
    let mut wide = BTreeSet::new();
    for form in forms_for(&sys) {
        for perm in permutations(&sys.symbols()) {
            for ks in k_vectors(sys.rank(), 4) {
                let zetas: Vec<SignedSymbol> =
                    perm.iter().map(|&symbol| SignedSymbol::plus(symbol)).collect();
                let p = CanonicalParams::new(form, zetas, ks, Sign::Plus);
                if p.validate(&sys).is_err() {
                    continue;
                }
                let base = canon::build_base(&sys, &p).unwrap();
                if base.elements.iter().all(|e| e.delta.abs() <= Int::from(1u32)) {
                    wide.insert(base.element_set());
                }
            }
        }
    }
    assert!(wide.is_subset(&with_3));
}
