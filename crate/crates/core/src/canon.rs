//! Canonical bases: construction from (form, ζ-sequence, k-sequence)
//! parameters, closed-form positive roots, fine/admissible normalization,
//! canonical-form recognition, and conjugacy.
//!
//! Every row is a chain pattern: simple roots θ_i − θ_{i+1} for
//! θ_i = ζ_i + k_i δ, closed off at the ends by a row-specific pair of
//! elements. Recognition reverses the construction: classify elements by
//! shape, anchor the distinguished ends, rebuild the θ-chain, and accept only
//! if rebuilding from the recovered parameters reproduces the input exactly.

use crate::bases::{self, Base};
use crate::error::Error;
use crate::space::{
    support, Family, Sign, SignedSymbol, Symbol, SymbolKind, SystemDescriptor, Vector,
};
use crate::weyl::{apply_word_all, Letter, ReflectionWord};
use crate::Int;
use num_traits::Signed as _;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// The rows of the classification table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CanonicalForm {
    /// A(2m,2n)^(4): {θ_i−θ_{i+1}, θ_ℓ, δ−θ_1}, k_i ≡ k_j (mod 2).
    #[serde(rename = "T2-A4")]
    T2A4,
    /// D(m+1,n)^(2): {θ_i−θ_{i+1}, θ_ℓ, δ−θ_1}, k_i ≡ k_j (mod 2).
    #[serde(rename = "T2-D2")]
    T2D2,
    /// A(2m,2n−1)^(2): {−2θ_1+δ, θ_i−θ_{i+1}, θ_ℓ}, supp(θ_1) ⊆ {ε_i}.
    #[serde(rename = "T2-A2-long")]
    T2A2Long,
    /// A(2m,2n−1)^(2): {δ−(θ_1+θ_2), θ_i−θ_{i+1}, θ_ℓ}, supp(θ_1) ⊆ {δ_p}.
    #[serde(rename = "T2-A2-nolong")]
    T2A2NoLong,
    /// A(2m−1,2n−1)^(2): {δ−(θ_1+θ_2), θ_i−θ_{i+1}, θ_{ℓ−1}+θ_ℓ}.
    B1,
    /// A(2m−1,2n−1)^(2): {−2θ_1, θ_i−θ_{i+1}, θ_{ℓ−1}+θ_ℓ+δ}.
    B2,
    /// A(2m−1,2n−1)^(2): {−2θ_1+δ, θ_i−θ_{i+1}, θ_{ℓ−1}+θ_ℓ}.
    B3,
    /// A(2m−1,2n−1)^(2): {−2θ_1, θ_i−θ_{i+1}, 2θ_ℓ+δ}.
    B4,
}

impl CanonicalForm {
    pub const ALL: [CanonicalForm; 8] = [
        CanonicalForm::T2A4,
        CanonicalForm::T2D2,
        CanonicalForm::T2A2Long,
        CanonicalForm::T2A2NoLong,
        CanonicalForm::B1,
        CanonicalForm::B2,
        CanonicalForm::B3,
        CanonicalForm::B4,
    ];

    pub fn family(self) -> Family {
        match self {
            CanonicalForm::T2A4 => Family::AEvenEven4,
            CanonicalForm::T2D2 => Family::D2,
            CanonicalForm::T2A2Long | CanonicalForm::T2A2NoLong => Family::AEvenOdd2,
            CanonicalForm::B1 | CanonicalForm::B2 | CanonicalForm::B3 | CanonicalForm::B4 => {
                Family::AOddOdd2
            }
        }
    }

    pub fn is_b_form(self) -> bool {
        matches!(
            self,
            CanonicalForm::B1 | CanonicalForm::B2 | CanonicalForm::B3 | CanonicalForm::B4
        )
    }

    pub fn tag(self) -> &'static str {
        match self {
            CanonicalForm::T2A4 => "T2-A4",
            CanonicalForm::T2D2 => "T2-D2",
            CanonicalForm::T2A2Long => "T2-A2-long",
            CanonicalForm::T2A2NoLong => "T2-A2-nolong",
            CanonicalForm::B1 => "B1",
            CanonicalForm::B2 => "B2",
            CanonicalForm::B3 => "B3",
            CanonicalForm::B4 => "B4",
        }
    }

    /// Kind constraints on the chain ends, when the row imposes them.
    pub(crate) fn end_kinds(self) -> (Option<SymbolKind>, Option<SymbolKind>) {
        match self {
            CanonicalForm::T2A4 | CanonicalForm::T2D2 => (None, None),
            CanonicalForm::T2A2Long => (Some(SymbolKind::Eps), None),
            CanonicalForm::T2A2NoLong => (Some(SymbolKind::Del), None),
            CanonicalForm::B1 => (Some(SymbolKind::Del), Some(SymbolKind::Eps)),
            CanonicalForm::B2 => (Some(SymbolKind::Del), Some(SymbolKind::Del)),
            CanonicalForm::B3 => (Some(SymbolKind::Eps), Some(SymbolKind::Eps)),
            CanonicalForm::B4 => (Some(SymbolKind::Del), Some(SymbolKind::Eps)),
        }
    }
}

impl std::fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// One row instance: the ζ-sequence, the δ-shifts, and the overall ±.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalParams {
    pub form: CanonicalForm,
    pub zetas: Vec<SignedSymbol>,
    pub ks: Vec<i64>,
    #[serde(rename = "sign")]
    pub global_sign: Sign,
}

impl CanonicalParams {
    pub fn new(
        form: CanonicalForm,
        zetas: Vec<SignedSymbol>,
        ks: Vec<i64>,
        global_sign: Sign,
    ) -> CanonicalParams {
        CanonicalParams { form, zetas, ks, global_sign }
    }

    pub fn rank(&self) -> usize {
        self.zetas.len()
    }

    /// θ_i = ζ_i + k_i δ.
    pub fn theta(&self, i: usize, sys: &SystemDescriptor) -> Vector {
        let mut v = self.zetas[i].to_vector(sys.m, sys.n);
        v.delta = Int::from(self.ks[i]);
        v
    }

    pub fn thetas(&self, sys: &SystemDescriptor) -> Vec<Vector> {
        (0..self.rank()).map(|i| self.theta(i, sys)).collect()
    }

    /// Check every row invariant, naming the violated clause.
    pub fn validate(&self, sys: &SystemDescriptor) -> Result<(), Error> {
        let clause = |msg: String| Err(Error::InvalidParams(msg));
        if self.form.family() != sys.family {
            return clause(format!(
                "form {} belongs to {}, not {}",
                self.form,
                self.form.family().name(),
                sys.family.name()
            ));
        }
        let l = sys.rank();
        if self.zetas.len() != l || self.ks.len() != l {
            return clause(format!(
                "expected {} zetas and ks for m+n = {}, got {} and {}",
                l,
                l,
                self.zetas.len(),
                self.ks.len()
            ));
        }
        for z in &self.zetas {
            z.symbol.check_in(sys)?;
        }
        let symbols: BTreeSet<Symbol> = self.zetas.iter().map(|z| z.symbol).collect();
        if symbols.len() != l {
            return clause("zetas must satisfy zeta_i != ±zeta_j".into());
        }
        match self.form {
            CanonicalForm::T2A4 | CanonicalForm::T2D2 => {
                if self.ks.windows(2).any(|w| (w[0] - w[1]).rem_euclid(2) != 0) {
                    return clause("k_i ≡ k_j (mod 2) is required".into());
                }
            }
            CanonicalForm::T2A2NoLong if l < 2 => {
                return clause("this row needs m+n >= 2".into());
            }
            _ => {}
        }
        let (start, end) = self.form.end_kinds();
        if let Some(kind) = start {
            if self.zetas[0].symbol.kind != kind {
                return clause(format!(
                    "supp(theta_1) must be of {}-kind for {}",
                    if kind == SymbolKind::Eps { "eps" } else { "del" },
                    self.form
                ));
            }
        }
        if let Some(kind) = end {
            if self.zetas[l - 1].symbol.kind != kind {
                return clause(format!(
                    "supp(theta_l) must be of {}-kind for {}",
                    if kind == SymbolKind::Eps { "eps" } else { "del" },
                    self.form
                ));
            }
        }
        Ok(())
    }

    /// Fine in the A(2m−1,2n−1)^(2) sense: every ζ_i carries a plus sign.
    pub fn is_fine(&self) -> bool {
        self.zetas.iter().all(|z| z.sign == Sign::Plus)
    }

    /// t-admissible: k_1 = … = k_t = 0.
    pub fn admissible_level(&self) -> usize {
        self.ks.iter().take_while(|k| **k == 0).count()
    }

    /// Resolve the documented parameterization ambiguities to the
    /// representative that recognition returns.
    pub fn canonicalized(&self) -> CanonicalParams {
        let mut p = self.clone();
        let l = p.zetas.len();
        let flip_end_zero = |p: &mut CanonicalParams| {
            // θ_ℓ ↔ −θ_ℓ leaves {θ_{ℓ−1}−θ_ℓ, θ_{ℓ−1}+θ_ℓ} unchanged.
            if p.zetas[l - 1].sign == Sign::Minus {
                p.zetas[l - 1] = p.zetas[l - 1].negate();
                p.ks[l - 1] = -p.ks[l - 1];
            }
        };
        let flip_start_affine = |p: &mut CanonicalParams| {
            // θ₁ ↔ δ−θ₁ swaps δ−(θ₁+θ₂) with θ₁−θ₂.
            if p.zetas[0].sign == Sign::Minus {
                p.zetas[0] = p.zetas[0].negate();
                p.ks[0] = 1 - p.ks[0];
            }
        };
        match p.form {
            CanonicalForm::B2 => {
                // θ_ℓ ↔ −θ_ℓ−δ swaps θ_{ℓ−1}−θ_ℓ with θ_{ℓ−1}+θ_ℓ+δ.
                if p.zetas[l - 1].sign == Sign::Minus {
                    p.zetas[l - 1] = p.zetas[l - 1].negate();
                    p.ks[l - 1] = -p.ks[l - 1] - 1;
                }
            }
            CanonicalForm::B3 => flip_end_zero(&mut p),
            CanonicalForm::B1 => {
                flip_start_affine(&mut p);
                flip_end_zero(&mut p);
            }
            CanonicalForm::T2A2NoLong => flip_start_affine(&mut p),
            CanonicalForm::T2A4 | CanonicalForm::T2D2 => {
                // Mirror θ'_i = δ−θ_{ℓ+1−i} reverses the chain; take the
                // lexicographically smaller reading.
                let mirror = CanonicalParams {
                    form: p.form,
                    zetas: p.zetas.iter().rev().map(|z| z.negate()).collect(),
                    ks: p.ks.iter().rev().map(|k| 1 - k).collect(),
                    global_sign: p.global_sign,
                };
                if (mirror.zetas.clone(), mirror.ks.clone()) < (p.zetas.clone(), p.ks.clone()) {
                    p = mirror;
                }
            }
            CanonicalForm::B4 | CanonicalForm::T2A2Long => {}
        }
        p
    }
}

/// Build the row's m+n+1 elements (chain first, then the distinguished ends),
/// multiplied by the global sign.
pub fn build_base(sys: &SystemDescriptor, params: &CanonicalParams) -> Result<Base, Error> {
    params.validate(sys)?;
    let l = params.rank();
    let thetas = params.thetas(sys);
    let delta = Vector::delta_mult(sys.m, sys.n, 1);
    let mut elements: Vec<Vector> = Vec::with_capacity(l + 1);
    match params.form {
        CanonicalForm::T2A4 | CanonicalForm::T2D2 => {
            for i in 0..l - 1 {
                elements.push(&thetas[i] - &thetas[i + 1]);
            }
            elements.push(thetas[l - 1].clone());
            elements.push(&delta - &thetas[0]);
        }
        CanonicalForm::T2A2Long => {
            elements.push(&delta - &thetas[0].scaled(2));
            for i in 0..l - 1 {
                elements.push(&thetas[i] - &thetas[i + 1]);
            }
            elements.push(thetas[l - 1].clone());
        }
        CanonicalForm::T2A2NoLong => {
            elements.push(&(&delta - &thetas[0]) - &thetas[1]);
            for i in 0..l - 1 {
                elements.push(&thetas[i] - &thetas[i + 1]);
            }
            elements.push(thetas[l - 1].clone());
        }
        CanonicalForm::B1 => {
            elements.push(&(&delta - &thetas[0]) - &thetas[1]);
            for i in 0..l - 1 {
                elements.push(&thetas[i] - &thetas[i + 1]);
            }
            elements.push(&thetas[l - 2] + &thetas[l - 1]);
        }
        CanonicalForm::B2 => {
            elements.push(thetas[0].scaled(-2));
            for i in 0..l - 1 {
                elements.push(&thetas[i] - &thetas[i + 1]);
            }
            elements.push(&(&thetas[l - 2] + &thetas[l - 1]) + &delta);
        }
        CanonicalForm::B3 => {
            elements.push(&delta - &thetas[0].scaled(2));
            for i in 0..l - 1 {
                elements.push(&thetas[i] - &thetas[i + 1]);
            }
            elements.push(&thetas[l - 2] + &thetas[l - 1]);
        }
        CanonicalForm::B4 => {
            elements.push(thetas[0].scaled(-2));
            for i in 0..l - 1 {
                elements.push(&thetas[i] - &thetas[i + 1]);
            }
            elements.push(&thetas[l - 1].scaled(2) + &delta);
        }
    }
    if params.global_sign == Sign::Minus {
        elements = elements.iter().map(|e| -e).collect();
    }
    Base::new(*sys, elements)
}

// ---------------------------------------------------------------------------
// Recognition
// ---------------------------------------------------------------------------

fn single_unit_symbol(v: &Vector) -> Option<Symbol> {
    let supp: Vec<Symbol> = support(v).into_iter().collect();
    if supp.len() == 1 && v.coeff(supp[0]).abs() == Int::from(1) {
        Some(supp[0])
    } else {
        None
    }
}

#[derive(PartialEq)]
enum Shape {
    Single,
    Pair,
    Extra(SymbolKind),
}

fn shape(v: &Vector) -> Option<Shape> {
    let supp: Vec<Symbol> = support(v).into_iter().collect();
    match supp.len() {
        1 => {
            let c = v.coeff(supp[0]).abs();
            if c == Int::from(1) {
                Some(Shape::Single)
            } else if c == Int::from(2) {
                Some(Shape::Extra(supp[0].kind))
            } else {
                None
            }
        }
        2 if supp.iter().all(|s| v.coeff(*s).abs() == Int::from(1)) => Some(Shape::Pair),
        _ => None,
    }
}

struct Sorted {
    singles: Vec<Vector>,
    pairs: Vec<Vector>,
    extras: Vec<Vector>,
}

fn sort_shapes(xs: &[Vector]) -> Option<Sorted> {
    let mut out = Sorted { singles: vec![], pairs: vec![], extras: vec![] };
    for v in xs {
        match shape(v)? {
            Shape::Single => out.singles.push(v.clone()),
            Shape::Pair => out.pairs.push(v.clone()),
            Shape::Extra(_) => out.extras.push(v.clone()),
        }
    }
    Some(out)
}

/// Consume from `pool` the unique pair containing the support symbol of
/// `theta` with the same sign; the next θ is theta − pair.
fn step_forward(theta: &Vector, pool: &mut Vec<Vector>) -> Option<Vector> {
    let sym = single_unit_symbol(theta)?;
    let want = theta.coeff(sym).clone();
    let mut found = None;
    for (i, c) in pool.iter().enumerate() {
        if *c.coeff(sym) == want {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    let c = pool.remove(found?);
    let next = theta - &c;
    single_unit_symbol(&next)?;
    Some(next)
}

/// Backward variant: the unique pair containing the symbol with the opposite
/// sign; the previous θ is pair + theta.
fn step_backward(theta: &Vector, pool: &mut Vec<Vector>) -> Option<Vector> {
    let sym = single_unit_symbol(theta)?;
    let want = -theta.coeff(sym).clone();
    let mut found = None;
    for (i, c) in pool.iter().enumerate() {
        if *c.coeff(sym) == want {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    let c = pool.remove(found?);
    let prev = &c + theta;
    single_unit_symbol(&prev)?;
    Some(prev)
}

/// Resolve a doubled chain end {θ_{ℓ−1}−θ_ℓ, θ_{ℓ−1}+θ_ℓ+cδ}: both members
/// carry θ_{ℓ−1}'s sign on its symbol, so θ_ℓ is only determined up to the
/// documented flip; prefer the positive reading.
fn resolve_end_pair(theta_prev: &Vector, pool: &[Vector], closing_shift: i64) -> Option<Vector> {
    debug_assert_eq!(pool.len(), 2);
    let sym = single_unit_symbol(theta_prev)?;
    let want = theta_prev.coeff(sym).clone();
    let (m, n) = theta_prev.dims();
    let mut fallback = None;
    for i in 0..2 {
        let chain = &pool[i];
        let closing = &pool[1 - i];
        if *chain.coeff(sym) != want {
            continue;
        }
        let theta_last = theta_prev - chain;
        let Some(last_sym) = single_unit_symbol(&theta_last) else { continue };
        if last_sym == sym {
            continue;
        }
        let expect = &(theta_prev + &theta_last) + &Vector::delta_mult(m, n, closing_shift);
        if *closing != expect {
            continue;
        }
        if theta_last.coeff(last_sym).is_positive() {
            return Some(theta_last);
        }
        fallback.get_or_insert(theta_last);
    }
    fallback
}

/// Resolve a doubled chain start {δ−(θ₁+θ₂), θ₁−θ₂}: θ₁ is determined up to
/// θ₁ ↔ δ−θ₁; prefer the positive reading.
fn resolve_start_pair(theta2: &Vector, pool: &[Vector]) -> Option<Vector> {
    debug_assert_eq!(pool.len(), 2);
    let sym2 = single_unit_symbol(theta2)?;
    let (m, n) = theta2.dims();
    let delta = Vector::delta_mult(m, n, 1);
    let mut fallback = None;
    for i in 0..2 {
        let chain = &pool[i];
        let affine = &pool[1 - i];
        let theta1 = chain + theta2;
        let Some(sym1) = single_unit_symbol(&theta1) else { continue };
        if sym1 == sym2 {
            continue;
        }
        let expect = &(&delta - &theta1) - theta2;
        if *affine != expect {
            continue;
        }
        if theta1.coeff(sym1).is_positive() {
            return Some(theta1);
        }
        fallback.get_or_insert(theta1);
    }
    fallback
}

fn thetas_to_params(thetas: &[Vector]) -> Option<(Vec<SignedSymbol>, Vec<i64>)> {
    let mut zetas = Vec::with_capacity(thetas.len());
    let mut ks = Vec::with_capacity(thetas.len());
    for t in thetas {
        let sym = single_unit_symbol(t)?;
        let sign = if t.coeff(sym).is_positive() { Sign::Plus } else { Sign::Minus };
        zetas.push(SignedSymbol { sign, symbol: sym });
        ks.push(i64::try_from(&t.delta).ok()?);
    }
    Some((zetas, ks))
}

/// Parse the affine chain row {θ_i−θ_{i+1}, θ_ℓ, δ−θ_1}; both chain
/// orientations can succeed (the δ−θ mirror), so collect all candidates.
fn parse_t2_affine(sys: &SystemDescriptor, xs: &[Vector]) -> Vec<Vec<Vector>> {
    let l = sys.rank();
    let Some(sorted) = sort_shapes(xs) else { return vec![] };
    if !sorted.extras.is_empty() || sorted.singles.len() != 2 || sorted.pairs.len() != l - 1 {
        return vec![];
    }
    let delta = Vector::delta_mult(sys.m, sys.n, 1);
    let mut results = Vec::new();
    for (end, aff) in [(0usize, 1usize), (1, 0)] {
        let theta1 = &delta - &sorted.singles[aff];
        if single_unit_symbol(&theta1).is_none() {
            continue;
        }
        let mut pool = sorted.pairs.clone();
        let mut thetas = vec![theta1];
        let mut ok = true;
        for _ in 0..l - 1 {
            match step_forward(thetas.last().unwrap(), &mut pool) {
                Some(next) => thetas.push(next),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && thetas[l - 1] == sorted.singles[end] {
            results.push(thetas);
        }
    }
    results
}

/// Parse {−2θ_1+rδ, θ_i−θ_{i+1}, <end>} rows (T2-A2-long, B3 share the
/// anchor shape; B2, B4 anchor at −2θ_1 with r = 0).
fn parse_anchored(
    sys: &SystemDescriptor,
    xs: &[Vector],
    form: CanonicalForm,
) -> Option<Vec<Vector>> {
    let l = sys.rank();
    let sorted = sort_shapes(xs)?;
    let delta = Vector::delta_mult(sys.m, sys.n, 1);
    match form {
        CanonicalForm::T2A2Long => {
            // −2θ₁+δ, chain, θ_ℓ.
            if sorted.extras.len() != 1 || sorted.singles.len() != 1 || sorted.pairs.len() != l - 1
            {
                return None;
            }
            let theta1 = (&delta - &sorted.extras[0]).halved()?;
            single_unit_symbol(&theta1)?;
            let mut pool = sorted.pairs.clone();
            let mut thetas = vec![theta1];
            for _ in 0..l - 1 {
                thetas.push(step_forward(thetas.last().unwrap(), &mut pool)?);
            }
            (thetas[l - 1] == sorted.singles[0]).then_some(thetas)
        }
        CanonicalForm::T2A2NoLong => {
            // δ−(θ₁+θ₂), chain, θ_ℓ: walk backward from the single.
            if !sorted.extras.is_empty() || sorted.singles.len() != 1 || sorted.pairs.len() != l {
                return None;
            }
            let mut pool = sorted.pairs.clone();
            let mut rev = vec![sorted.singles[0].clone()];
            for _ in 0..l - 2 {
                rev.push(step_backward(rev.last().unwrap(), &mut pool)?);
            }
            let theta2 = rev.last().unwrap().clone();
            let theta1 = resolve_start_pair(&theta2, &pool)?;
            let mut thetas = vec![theta1];
            thetas.extend(rev.into_iter().rev());
            Some(thetas)
        }
        CanonicalForm::B2 | CanonicalForm::B3 | CanonicalForm::B4 => {
            let (anchor_shift, want_kind) = match form {
                CanonicalForm::B2 => (0i64, SymbolKind::Del),
                CanonicalForm::B3 => (1, SymbolKind::Eps),
                CanonicalForm::B4 => (0, SymbolKind::Del),
                _ => unreachable!(),
            };
            let extras_needed = if form == CanonicalForm::B4 { 2 } else { 1 };
            if sorted.extras.len() != extras_needed || !sorted.singles.is_empty() {
                return None;
            }
            let pair_count = if form == CanonicalForm::B4 { l - 1 } else { l };
            if sorted.pairs.len() != pair_count {
                return None;
            }
            let find_extra = |kind: SymbolKind| -> Option<&Vector> {
                sorted.extras.iter().find(|e| {
                    support(e).first().map(|s| s.kind) == Some(kind)
                })
            };
            let anchor = find_extra(want_kind)?;
            // −2θ₁ + anchor_shift·δ = anchor.
            let theta1 =
                (&Vector::delta_mult(sys.m, sys.n, anchor_shift) - anchor).halved()?;
            single_unit_symbol(&theta1)?;
            let mut pool = sorted.pairs.clone();
            let mut thetas = vec![theta1];
            if form == CanonicalForm::B4 {
                let closer = find_extra(SymbolKind::Eps)?;
                let theta_last = (closer - &delta).halved()?;
                single_unit_symbol(&theta_last)?;
                for _ in 0..l - 1 {
                    thetas.push(step_forward(thetas.last().unwrap(), &mut pool)?);
                }
                (thetas[l - 1] == theta_last).then_some(thetas)
            } else {
                for _ in 0..l - 2 {
                    thetas.push(step_forward(thetas.last().unwrap(), &mut pool)?);
                }
                let shift = if form == CanonicalForm::B2 { 1 } else { 0 };
                let theta_last = resolve_end_pair(thetas.last().unwrap(), &pool, shift)?;
                thetas.push(theta_last);
                Some(thetas)
            }
        }
        _ => unreachable!("handled elsewhere"),
    }
}

/// Parse B1 = {δ−(θ₁+θ₂), θ_i−θ_{i+1}, θ_{ℓ−1}+θ_ℓ}: every element is a
/// pair; the two doubled-support groups anchor the ends, distinguished by the
/// parity of their sums (δ−2θ₂ is odd, 2θ_{ℓ−1} is even).
fn parse_b1(sys: &SystemDescriptor, xs: &[Vector]) -> Option<Vec<Vector>> {
    let l = sys.rank();
    let sorted = sort_shapes(xs)?;
    if !sorted.extras.is_empty() || !sorted.singles.is_empty() || sorted.pairs.len() != l + 1 {
        return None;
    }
    let mut groups: BTreeMap<Vec<Symbol>, Vec<Vector>> = BTreeMap::new();
    for p in &sorted.pairs {
        groups
            .entry(support(p).into_iter().collect())
            .or_default()
            .push(p.clone());
    }
    let doubled: Vec<&Vec<Vector>> = groups.values().filter(|g| g.len() == 2).collect();
    if doubled.len() != 2 || groups.values().any(|g| g.len() > 2) {
        return None;
    }
    let parity = |g: &Vec<Vector>| -> i64 {
        let sum = &g[0] + &g[1];
        if (&sum.delta % Int::from(2)) == Int::from(0) { 0 } else { 1 }
    };
    let (start, end) = match (parity(doubled[0]), parity(doubled[1])) {
        (1, 0) => (doubled[0], doubled[1]),
        (0, 1) => (doubled[1], doubled[0]),
        _ => return None,
    };
    let delta = Vector::delta_mult(sys.m, sys.n, 1);
    let theta2 = (&delta - &(&start[0] + &start[1])).halved()?;
    single_unit_symbol(&theta2)?;
    let theta_prev = (&end[0] + &end[1]).halved()?;
    single_unit_symbol(&theta_prev)?;

    // Middle chain from θ₂ up to θ_{ℓ−1}.
    let mut pool: Vec<Vector> = groups
        .values()
        .filter(|g| g.len() == 1)
        .map(|g| g[0].clone())
        .collect();
    let mut middle = vec![theta2.clone()];
    for _ in 0..l.checked_sub(3)? {
        middle.push(step_forward(middle.last().unwrap(), &mut pool)?);
    }
    if *middle.last().unwrap() != theta_prev {
        return None;
    }
    let theta1 = resolve_start_pair(&theta2, start)?;
    let theta_last = resolve_end_pair(&theta_prev, end, 0)?;
    let mut thetas = vec![theta1];
    thetas.extend(middle);
    thetas.push(theta_last);
    Some(thetas)
}

fn finish(
    sys: &SystemDescriptor,
    xs: &[Vector],
    form: CanonicalForm,
    thetas: Vec<Vector>,
    sign: Sign,
) -> Option<CanonicalParams> {
    let (zetas, ks) = thetas_to_params(&thetas)?;
    let params = CanonicalParams::new(form, zetas, ks, Sign::Plus);
    params.validate(sys).ok()?;
    let rebuilt = build_base(sys, &params).ok()?;
    let got: BTreeSet<Vector> = xs.iter().cloned().collect();
    if rebuilt.element_set() != got {
        return None;
    }
    Some(CanonicalParams { global_sign: sign, ..params })
}

/// Recognize a canonical row, reconstructing its parameters; `None` when no
/// row matches.
pub fn match_canonical(base: &Base) -> Option<CanonicalParams> {
    let sys = base.sys;
    let l = sys.rank();
    if base.elements.len() != l + 1 {
        return None;
    }
    for sign in [Sign::Plus, Sign::Minus] {
        let xs: Vec<Vector> = match sign {
            Sign::Plus => base.elements.clone(),
            Sign::Minus => base.elements.iter().map(|e| -e).collect(),
        };
        let found = match sys.family {
            Family::AEvenEven4 | Family::D2 => {
                let form = if sys.family == Family::AEvenEven4 {
                    CanonicalForm::T2A4
                } else {
                    CanonicalForm::T2D2
                };
                let mut candidates: Vec<CanonicalParams> = parse_t2_affine(&sys, &xs)
                    .into_iter()
                    .filter_map(|thetas| finish(&sys, &xs, form, thetas, sign))
                    .collect();
                candidates.sort_by(|a, b| (&a.zetas, &a.ks).cmp(&(&b.zetas, &b.ks)));
                candidates.into_iter().next()
            }
            Family::AEvenOdd2 => [CanonicalForm::T2A2Long, CanonicalForm::T2A2NoLong]
                .into_iter()
                .find_map(|form| {
                    let thetas = parse_anchored(&sys, &xs, form)?;
                    finish(&sys, &xs, form, thetas, sign)
                }),
            Family::AOddOdd2 => {
                // The extra-long census picks the row: 0 → B1, 1 → B2/B3 by
                // kind, 2 → B4.
                let extras: Vec<SymbolKind> = xs
                    .iter()
                    .filter_map(|v| match shape(v) {
                        Some(Shape::Extra(kind)) => Some(kind),
                        _ => None,
                    })
                    .collect();
                let form = match extras.as_slice() {
                    [] => Some(CanonicalForm::B1),
                    [SymbolKind::Del] => Some(CanonicalForm::B2),
                    [SymbolKind::Eps] => Some(CanonicalForm::B3),
                    [a, b] if a != b => Some(CanonicalForm::B4),
                    _ => None,
                };
                form.and_then(|form| {
                    let thetas = if form == CanonicalForm::B1 {
                        parse_b1(&sys, &xs)?
                    } else {
                        parse_anchored(&sys, &xs, form)?
                    };
                    finish(&sys, &xs, form, thetas, sign)
                })
            }
        };
        if let Some(p) = found {
            return Some(p);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Predicted positive roots
// ---------------------------------------------------------------------------

/// The closed-form positive set of the row, windowed at |δ-coeff| ≤ kmax.
/// The affine chain rows (T2-A4, T2-D2) have no printed closed form and are
/// answered through the decomposition engine instead.
pub fn predicted_positive_roots(
    sys: &SystemDescriptor,
    params: &CanonicalParams,
    kmax: u32,
) -> Result<BTreeSet<Vector>, Error> {
    params.validate(sys)?;
    if matches!(params.form, CanonicalForm::T2A4 | CanonicalForm::T2D2) {
        let base = build_base(sys, params)?;
        return bases::positive_roots(&base, kmax);
    }
    let l = params.rank();
    let thetas = params.thetas(sys);
    let is_del = |i: usize| params.zetas[i].symbol.kind == SymbolKind::Del;
    let is_eps = |i: usize| params.zetas[i].symbol.kind == SymbolKind::Eps;
    let kbound = kmax as i64 + 2 * params.ks.iter().map(|k| k.abs()).max().unwrap_or(0) + 4;

    let mut out: BTreeSet<Vector> = BTreeSet::new();
    let mut put = |v: Vector| {
        if v.delta.abs() <= Int::from(kmax) {
            out.insert(v);
        }
    };

    // Level-zero heads, per row.
    match params.form {
        CanonicalForm::T2A2Long | CanonicalForm::T2A2NoLong => {
            for i in 0..l {
                put(thetas[i].clone());
                if is_del(i) {
                    put(thetas[i].scaled(2));
                }
                for j in i + 1..l {
                    put(&thetas[i] + &thetas[j]);
                    put(&thetas[i] - &thetas[j]);
                }
            }
        }
        CanonicalForm::B1 | CanonicalForm::B3 => {
            for i in 0..l {
                if is_del(i) {
                    put(thetas[i].scaled(2));
                }
                for j in i + 1..l {
                    put(&thetas[i] + &thetas[j]);
                    put(&thetas[i] - &thetas[j]);
                }
            }
        }
        CanonicalForm::B2 | CanonicalForm::B4 => {
            for i in 0..l {
                if is_del(i) {
                    put(thetas[i].scaled(-2));
                }
                for j in i + 1..l {
                    put(&thetas[i].scaled(-1) - &thetas[j]);
                    put(&thetas[i] - &thetas[j]);
                }
            }
        }
        _ => unreachable!(),
    }

    // Common positive-level tails.
    let singles_at_levels = matches!(
        params.form,
        CanonicalForm::T2A2Long | CanonicalForm::T2A2NoLong
    );
    for k in 1..=kbound {
        put(Vector::delta_mult(sys.m, sys.n, k));
        for i in 0..l {
            if singles_at_levels {
                put(thetas[i].shifted(k));
                put((-&thetas[i]).shifted(k));
            }
            for j in i + 1..l {
                for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    put(&(&thetas[i].scaled(si) + &thetas[j].scaled(sj))
                        + &Vector::delta_mult(sys.m, sys.n, k));
                }
            }
        }
    }
    // ±2θ_i + 2ℤ^{≥0}δ + δ for ε-kind, ±2θ_i + 2ℤ^{>0}δ for δ-kind.
    for (i, theta) in thetas.iter().enumerate() {
        for s in [2i64, -2] {
            if is_eps(i) {
                let mut k = 1i64;
                while k <= kbound {
                    put(theta.scaled(s).shifted(k));
                    k += 2;
                }
            } else {
                let mut k = 2i64;
                while k <= kbound {
                    put(theta.scaled(s).shifted(k));
                    k += 2;
                }
            }
        }
    }

    if params.global_sign == Sign::Minus {
        out = out.iter().map(|v| -v).collect();
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Normalization: fine, then t-admissible
// ---------------------------------------------------------------------------

fn recognized_b_form(base: &Base) -> Result<CanonicalParams, Error> {
    let params = match_canonical(base).ok_or(Error::Uncertified)?;
    if !params.form.is_b_form() {
        return Err(Error::OutOfScope(format!(
            "normalization lemmas cover the B-forms of {}, got {}",
            Family::AOddOdd2.name(),
            params.form
        )));
    }
    Ok(params)
}

fn rebuilt_output(base: &Base, word: &ReflectionWord) -> Result<Base, Error> {
    let elements = apply_word_all(word, &base.elements)?;
    Base::new(base.sys, elements)
}

/// Flip every negative ζ with r_{2υ_t} (δ-kind) or r_{2υ_t+δ} (ε-kind); the
/// letters commute and each one is an R-preserving doubled-root reflection.
pub fn make_fine(base: &Base) -> Result<(ReflectionWord, Base), Error> {
    let params = recognized_b_form(base)?;
    let (m, n) = (base.sys.m, base.sys.n);
    let mut letters = Vec::new();
    for z in &params.zetas {
        if z.sign == Sign::Plus {
            continue;
        }
        let axis = match z.symbol.kind {
            SymbolKind::Del => z.symbol.to_vector(m, n).scaled(2),
            SymbolKind::Eps => &z.symbol.to_vector(m, n).scaled(2) + &Vector::delta_mult(m, n, 1),
        };
        letters.push(Letter::star(axis)?);
    }
    let word = ReflectionWord { letters };
    let out = rebuilt_output(base, &word)?;
    debug_assert!(match_canonical(&out).is_some_and(|p| p.form == params.form && p.is_fine()));
    Ok((word, out))
}

/// Zero out the δ-shifts of a fine base: k₁..k_{ℓ−1} by chain-transposition
/// pairs, k_ℓ by the per-form doubled-root step (B2–B4); B1 stops at
/// (ℓ−1)-admissible.
pub fn make_admissible(base: &Base) -> Result<(ReflectionWord, Base), Error> {
    let params = recognized_b_form(base)?;
    if !params.is_fine() {
        return Err(Error::OutOfScope(
            "make_admissible expects a fine base; run make_fine first".into(),
        ));
    }
    let (m, n) = (base.sys.m, base.sys.n);
    let l = params.rank();
    let upsilon: Vec<Symbol> = params.zetas.iter().map(|z| z.symbol).collect();
    let mut ks = params.ks.clone();

    let sym = |s: Symbol| s.to_vector(m, n);
    let dl = |k: i64| Vector::delta_mult(m, n, k);
    // Stages in application order; the composed word reverses them.
    let mut stages: Vec<Vec<Letter>> = Vec::new();

    for t in 0..l - 1 {
        if ks[t] == 0 {
            continue;
        }
        let axis = &sym(upsilon[t]) - &sym(upsilon[t + 1]);
        stages.push(vec![
            Letter::star(axis.clone())?,
            Letter::star(&axis + &dl(ks[t]))?,
        ]);
        ks[t + 1] += ks[t];
        ks[t] = 0;
    }
    let kl = ks[l - 1];
    if params.form != CanonicalForm::B1 && kl != 0 {
        let last = upsilon[l - 1];
        let odd = kl.rem_euclid(2) == 1;
        let stage = match (params.form, odd) {
            (CanonicalForm::B2, true) => vec![Letter::star(&sym(last).scaled(2) + &dl(kl + 1))?],
            (CanonicalForm::B2, false) => vec![
                Letter::star(sym(last).scaled(2))?,
                Letter::star(&sym(last).scaled(2) + &dl(kl))?,
            ],
            (CanonicalForm::B3, true) => vec![Letter::star(&sym(last).scaled(2) + &dl(kl))?],
            (CanonicalForm::B3, false) => vec![
                Letter::star(&sym(last).scaled(2) + &dl(1))?,
                Letter::star(&sym(last).scaled(2) + &dl(kl + 1))?,
            ],
            (CanonicalForm::B4, true) => vec![
                Letter::star(sym(upsilon[0]).scaled(2))?,
                Letter::star(&sym(upsilon[0]) - &sym(last))?,
                Letter::star(&sym(upsilon[0]) + &sym(last))?,
                Letter::star(&sym(last).scaled(2) + &dl(kl))?,
            ],
            (CanonicalForm::B4, false) => vec![
                Letter::star(&sym(last).scaled(2) + &dl(1))?,
                Letter::star(&sym(last).scaled(2) + &dl(kl + 1))?,
            ],
            _ => unreachable!(),
        };
        stages.push(stage);
        ks[l - 1] = 0;
    }

    let mut letters = Vec::new();
    for stage in stages.iter().rev() {
        letters.extend(stage.iter().cloned());
    }
    let word = ReflectionWord { letters };
    let out = rebuilt_output(base, &word)?;
    debug_assert!(match_canonical(&out).is_some_and(|p| {
        p.form == params.form
            && p.is_fine()
            && p.admissible_level() >= if p.form == CanonicalForm::B1 { l - 1 } else { l }
    }));
    Ok((word, out))
}

// ---------------------------------------------------------------------------
// Conjugacy
// ---------------------------------------------------------------------------

/// Row-level conjugacy: same form tag, with ± collapsed.
pub fn are_conjugate(a: &Base, b: &Base) -> Result<bool, Error> {
    if a.sys != b.sys {
        return Err(Error::OutOfScope("bases live in different systems".into()));
    }
    let pa = match_canonical(a).ok_or(Error::Uncertified)?;
    let pb = match_canonical(b).ok_or(Error::Uncertified)?;
    Ok(pa.form == pb.form)
}

fn require_admissible(p: &CanonicalParams, who: &str) -> Result<(), Error> {
    if !(p.is_fine() && p.ks.iter().all(|k| *k == 0)) {
        return Err(Error::OutOfScope(format!(
            "{who} must be a fine l-admissible base; normalize with make_fine + make_admissible"
        )));
    }
    Ok(())
}

/// A quasi-Weyl word sending B' onto B, for fine ℓ-admissible bases of equal
/// form B2–B4 and equal global sign: align both ends, then sort the middle by
/// symbol transpositions.
pub fn conjugacy_word(b: &Base, b_prime: &Base) -> Result<ReflectionWord, Error> {
    if b.sys != b_prime.sys {
        return Err(Error::OutOfScope("bases live in different systems".into()));
    }
    let pa = match_canonical(b).ok_or(Error::Uncertified)?;
    let pb = match_canonical(b_prime).ok_or(Error::Uncertified)?;
    if pa.form != pb.form {
        return Err(Error::NotConjugate(format!(
            "different rows: {} vs {}",
            pa.form, pb.form
        )));
    }
    if !matches!(pa.form, CanonicalForm::B2 | CanonicalForm::B3 | CanonicalForm::B4) {
        return Err(Error::OutOfScope(format!(
            "the conjugating-word construction covers B2..B4, got {}",
            pa.form
        )));
    }
    if pa.global_sign != pb.global_sign {
        return Err(Error::NotConjugate(
            "opposite global signs; ±-conjugacy is not asserted".into(),
        ));
    }
    require_admissible(&pa, "left base")?;
    require_admissible(&pb, "right base")?;

    let (m, n) = (b.sys.m, b.sys.n);
    let target: Vec<Symbol> = pa.zetas.iter().map(|z| z.symbol).collect();
    let mut cur: Vec<Symbol> = pb.zetas.iter().map(|z| z.symbol).collect();
    let l = target.len();

    // Letters in application order; each one transposes two symbols.
    let mut applied: Vec<Letter> = Vec::new();
    let mut transpose = |cur: &mut Vec<Symbol>, want: Symbol, have: Symbol| -> Result<(), Error> {
        // r_α = r_{−α}: store the axis with the basis-smaller symbol positive.
        let (lo, hi) = if want < have { (want, have) } else { (have, want) };
        let axis = &lo.to_vector(m, n) - &hi.to_vector(m, n);
        applied.push(Letter::star(axis)?);
        for s in cur.iter_mut() {
            if *s == want {
                *s = have;
            } else if *s == have {
                *s = want;
            }
        }
        Ok(())
    };

    // End alignment first (cor2 Case 2), then the Case 1 sweep.
    let have0 = cur[0];
    if have0 != target[0] {
        transpose(&mut cur, target[0], have0)?;
    }
    let have_last = cur[l - 1];
    if have_last != target[l - 1] {
        transpose(&mut cur, target[l - 1], have_last)?;
    }
    for idx in 1..l.saturating_sub(1) {
        let have = cur[idx];
        if have != target[idx] {
            transpose(&mut cur, target[idx], have)?;
        }
    }
    debug_assert_eq!(cur, target);

    let word = ReflectionWord { letters: applied.into_iter().rev().collect() };
    debug_assert_eq!(
        apply_word_all(&word, &b_prime.elements)
            .map(|els| els.into_iter().collect::<BTreeSet<_>>())
            .ok(),
        Some(b.element_set())
    );
    Ok(word)
}
