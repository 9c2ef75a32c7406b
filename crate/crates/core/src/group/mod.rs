//! Group presentations, canonical group elements, and the second-neighbour
//! set Δ₂ that indexes the coin condition equations.
//!
//! Five presentation kinds are supported, each with its own canonical form:
//!
//! | kind | canonical element |
//! |------|-------------------|
//! | free group | reduced word of syllables `(generator, exponent ≠ 0)` |
//! | free abelian ℤⁿ | exponent vector |
//! | hypercube (ℤ₂)ⁿ | bit vector |
//! | free product of cyclic groups | alternating syllables with exponents in `[1, q-1]` |
//! | ℤ² with `d1² = d2²` | pair `d1^a d2^b` with `b ∈ {0, 1}` |
//!
//! Presentations are written as short spec strings:
//!
//! ```text
//! free:a,b            Δ = {a, b}                (free group on a, b)
//! free:a,a^-1,b,b^-1  symmetric Δ
//! free:d,d^-1,e       Δ may contain the identity
//! abelian:n=2         ℤ², Δ = {d1, d1^-1, d2, d2^-1}
//! abelian:n=1,lazy    ℤ,  Δ = {d1, d1^-1, e}
//! hypercube:n=5       (ℤ₂)⁵, Δ = {d1, …, d5}
//! cyclicprod:q=2,2,3  ℤ₂ * ℤ₂ * ℤ₃, Δ = {d1, d2, d3, d3^-1}
//! abelianrel:sq       ℤ² / (d1² = d2²), Δ = {d1, d1^-1, d2, d2^-1}
//! ```
//!
//! The order of Δ is part of the presentation and fixes the order of every
//! equation and report row derived from it.

mod parse;
mod realization;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub use realization::{GraphRealization, RealizationParams, Topology};

/// One element of Δ: a base generator, the inverse of one, or the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSymbol {
    pub name: String,
    /// Index into the presentation's base generators; `None` for the identity.
    pub base: Option<usize>,
    pub is_inverse: bool,
}

impl GeneratorSymbol {
    pub fn is_identity(&self) -> bool {
        self.base.is_none()
    }

    fn identity() -> Self {
        Self {
            name: "e".to_string(),
            base: None,
            is_inverse: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Free,
    FreeAbelian,
    Hypercube,
    /// Orders `q_i ≥ 2` of the cyclic factors.
    CyclicFreeProduct(Vec<u32>),
    /// ℤ² with the extra relation `d1² = d2²`.
    AbelianWithRelation,
}

/// A letter of a word: base generator index raised to an integer power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub base: usize,
    pub exp: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    /// Reduced syllable word (free groups and free products of cyclic groups).
    Word(Vec<(usize, i64)>),
    /// Exponent vector in ℤⁿ.
    Exponents(Vec<i64>),
    /// Bit vector in (ℤ₂)ⁿ.
    Bits(u64),
    /// `d1^d1 d2^d2` with `d2 ∈ {0, 1}`.
    Relation { d1: i64, d2: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    kind: GroupKind,
    base_names: Vec<String>,
    delta: Vec<GeneratorSymbol>,
}

pub(crate) const MAX_HYPERCUBE_RANK: usize = 64;

fn valid_base_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && chars.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
        && name != "e"
}

impl GroupPresentation {
    /// Free group whose Δ is exactly the listed symbols (`a`, `a^-1`, or `e`).
    /// Base generators are taken in order of first appearance.
    pub fn free(symbols: &[&str]) -> Result<Self> {
        let mut base_names: Vec<String> = Vec::new();
        let mut delta = Vec::with_capacity(symbols.len());
        for &sym in symbols {
            if sym == "e" {
                delta.push(GeneratorSymbol::identity());
                continue;
            }
            let (base, is_inverse) = match sym.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (sym, false),
            };
            if !valid_base_name(base) {
                return Err(Error::InvalidPresentation(format!(
                    "`{sym}` is not a valid generator symbol"
                )));
            }
            let idx = match base_names.iter().position(|n| n == base) {
                Some(i) => i,
                None => {
                    base_names.push(base.to_string());
                    base_names.len() - 1
                }
            };
            delta.push(GeneratorSymbol {
                name: sym.to_string(),
                base: Some(idx),
                is_inverse,
            });
        }
        Self::new(GroupKind::Free, base_names, delta)
    }

    /// ℤⁿ with the symmetric generating set `d1, d1^-1, …, dn, dn^-1`,
    /// optionally followed by the identity.
    pub fn free_abelian(n: usize, with_identity: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPresentation("free abelian rank must be ≥ 1".into()));
        }
        let base_names: Vec<String> = (1..=n).map(|i| format!("d{i}")).collect();
        let mut delta = symmetric_delta(&base_names);
        if with_identity {
            delta.push(GeneratorSymbol::identity());
        }
        Self::new(GroupKind::FreeAbelian, base_names, delta)
    }

    /// (ℤ₂)ⁿ; every generator is its own inverse so Δ = {d1, …, dn}.
    pub fn hypercube(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_HYPERCUBE_RANK {
            return Err(Error::InvalidPresentation(format!(
                "hypercube rank must be in 1..={MAX_HYPERCUBE_RANK}, got {n}"
            )));
        }
        let base_names: Vec<String> = (1..=n).map(|i| format!("d{i}")).collect();
        let delta = base_names
            .iter()
            .enumerate()
            .map(|(i, name)| GeneratorSymbol {
                name: name.clone(),
                base: Some(i),
                is_inverse: false,
            })
            .collect();
        Self::new(GroupKind::Hypercube, base_names, delta)
    }

    /// Free product of cyclic groups of the given orders. Δ holds each
    /// generator and, for orders above 2, its inverse.
    pub fn cyclic_free_product(orders: &[u32]) -> Result<Self> {
        if orders.is_empty() || orders.iter().any(|&q| q < 2) {
            return Err(Error::InvalidPresentation(
                "cyclic orders must be a non-empty list of integers ≥ 2".into(),
            ));
        }
        let base_names: Vec<String> = (1..=orders.len()).map(|i| format!("d{i}")).collect();
        let mut delta = Vec::new();
        for (i, name) in base_names.iter().enumerate() {
            delta.push(GeneratorSymbol {
                name: name.clone(),
                base: Some(i),
                is_inverse: false,
            });
            if orders[i] > 2 {
                delta.push(GeneratorSymbol {
                    name: format!("{name}^-1"),
                    base: Some(i),
                    is_inverse: true,
                });
            }
        }
        Self::new(GroupKind::CyclicFreeProduct(orders.to_vec()), base_names, delta)
    }

    /// ℤ² with `d1² = d2²` and Δ = {d1, d1^-1, d2, d2^-1}.
    pub fn abelian_with_relation() -> Self {
        let base_names = vec!["d1".to_string(), "d2".to_string()];
        let delta = symmetric_delta(&base_names);
        Self::new(GroupKind::AbelianWithRelation, base_names, delta).expect("fixed presentation is valid")
    }

    /// Parses a presentation spec string such as `abelian:n=2`.
    pub fn parse(spec: &str) -> Result<Self> {
        parse::parse_presentation(spec)
    }

    fn new(kind: GroupKind, base_names: Vec<String>, delta: Vec<GeneratorSymbol>) -> Result<Self> {
        if delta.is_empty() {
            return Err(Error::InvalidPresentation("Δ must not be empty".into()));
        }
        let mut seen = HashMap::new();
        for (k, sym) in delta.iter().enumerate() {
            if seen.insert(sym.name.clone(), k).is_some() {
                return Err(Error::InvalidPresentation(format!(
                    "generator `{}` listed twice",
                    sym.name
                )));
            }
            if let Some(b) = sym.base {
                if b >= base_names.len() {
                    return Err(Error::InvalidPresentation(format!(
                        "generator `{}` refers to a missing base generator",
                        sym.name
                    )));
                }
            }
        }
        Ok(Self {
            kind,
            base_names,
            delta,
        })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn base_names(&self) -> &[String] {
        &self.base_names
    }

    pub fn rank(&self) -> usize {
        self.base_names.len()
    }

    /// The ordered generating set Δ used for the Cayley graph.
    pub fn delta(&self) -> &[GeneratorSymbol] {
        &self.delta
    }

    pub fn delta_index(&self, name: &str) -> Option<usize> {
        self.delta.iter().position(|s| s.name == name)
    }

    pub fn has_identity_in_delta(&self) -> bool {
        self.delta.iter().any(GeneratorSymbol::is_identity)
    }

    /// Canonical spec string; `parse(p.spec()) == p`.
    pub fn spec(&self) -> String {
        match &self.kind {
            GroupKind::Free => {
                let names: Vec<&str> = self.delta.iter().map(|s| s.name.as_str()).collect();
                format!("free:{}", names.join(","))
            }
            GroupKind::FreeAbelian => {
                if self.has_identity_in_delta() {
                    format!("abelian:n={},lazy", self.rank())
                } else {
                    format!("abelian:n={}", self.rank())
                }
            }
            GroupKind::Hypercube => format!("hypercube:n={}", self.rank()),
            GroupKind::CyclicFreeProduct(q) => {
                let qs: Vec<String> = q.iter().map(u32::to_string).collect();
                format!("cyclicprod:q={}", qs.join(","))
            }
            GroupKind::AbelianWithRelation => "abelianrel:sq".to_string(),
        }
    }

    // ----- element arithmetic -------------------------------------------

    pub fn identity_element(&self) -> GroupElement {
        match &self.kind {
            GroupKind::Free | GroupKind::CyclicFreeProduct(_) => GroupElement::Word(Vec::new()),
            GroupKind::FreeAbelian => GroupElement::Exponents(vec![0; self.rank()]),
            GroupKind::Hypercube => GroupElement::Bits(0),
            GroupKind::AbelianWithRelation => GroupElement::Relation { d1: 0, d2: 0 },
        }
    }

    /// The canonical element for `base^exp`.
    pub fn letter_element(&self, letter: Letter) -> Result<GroupElement> {
        let Letter { base, exp } = letter;
        if base >= self.rank() {
            return Err(Error::UnknownSymbol(format!("#{base}")));
        }
        Ok(match &self.kind {
            GroupKind::Free => {
                if exp == 0 {
                    GroupElement::Word(Vec::new())
                } else {
                    GroupElement::Word(vec![(base, exp)])
                }
            }
            GroupKind::CyclicFreeProduct(q) => {
                let r = exp.rem_euclid(q[base] as i64);
                if r == 0 {
                    GroupElement::Word(Vec::new())
                } else {
                    GroupElement::Word(vec![(base, r)])
                }
            }
            GroupKind::FreeAbelian => {
                let mut v = vec![0; self.rank()];
                v[base] = exp;
                GroupElement::Exponents(v)
            }
            GroupKind::Hypercube => GroupElement::Bits(if exp.rem_euclid(2) == 1 { 1u64 << base } else { 0 }),
            GroupKind::AbelianWithRelation => {
                if base == 0 {
                    GroupElement::Relation { d1: exp, d2: 0 }
                } else {
                    // d2^(2m + r) = d1^(2m) d2^r
                    let r = exp.rem_euclid(2);
                    GroupElement::Relation {
                        d1: exp - r,
                        d2: r as u8,
                    }
                }
            }
        })
    }

    pub fn symbol_element(&self, sym: &GeneratorSymbol) -> GroupElement {
        match sym.base {
            None => self.identity_element(),
            Some(b) => self
                .letter_element(Letter {
                    base: b,
                    exp: if sym.is_inverse { -1 } else { 1 },
                })
                .expect("symbol of this presentation"),
        }
    }

    /// Canonical element of the Δ entry at `index`.
    pub fn delta_element(&self, index: usize) -> GroupElement {
        self.symbol_element(&self.delta[index])
    }

    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        match (x, y) {
            (GroupElement::Word(a), GroupElement::Word(b)) => {
                let mut out = a.clone();
                for &(g, e) in b {
                    self.push_syllable(&mut out, g, e);
                }
                GroupElement::Word(out)
            }
            (GroupElement::Exponents(a), GroupElement::Exponents(b)) => {
                GroupElement::Exponents(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (GroupElement::Bits(a), GroupElement::Bits(b)) => GroupElement::Bits(a ^ b),
            (GroupElement::Relation { d1: a1, d2: b1 }, GroupElement::Relation { d1: a2, d2: b2 }) => {
                let b = *b1 + *b2;
                if b == 2 {
                    GroupElement::Relation { d1: a1 + a2 + 2, d2: 0 }
                } else {
                    GroupElement::Relation { d1: a1 + a2, d2: b }
                }
            }
            _ => panic!("multiplying elements of different group kinds"),
        }
    }

    fn push_syllable(&self, word: &mut Vec<(usize, i64)>, g: usize, e: i64) {
        let reduce = |e: i64| match &self.kind {
            GroupKind::CyclicFreeProduct(q) => e.rem_euclid(q[g] as i64),
            _ => e,
        };
        let e = reduce(e);
        if e == 0 {
            return;
        }
        match word.last_mut() {
            Some((last_g, last_e)) if *last_g == g => {
                let merged = reduce(*last_e + e);
                if merged == 0 {
                    word.pop();
                } else {
                    *last_e = merged;
                }
            }
            _ => word.push((g, e)),
        }
    }

    pub fn inverse(&self, x: &GroupElement) -> GroupElement {
        match x {
            GroupElement::Word(w) => {
                let mut out = Vec::with_capacity(w.len());
                for &(g, e) in w.iter().rev() {
                    self.push_syllable(&mut out, g, -e);
                }
                GroupElement::Word(out)
            }
            GroupElement::Exponents(v) => GroupElement::Exponents(v.iter().map(|e| -e).collect()),
            GroupElement::Bits(b) => GroupElement::Bits(*b),
            GroupElement::Relation { d1, d2 } => {
                let a = self.letter_element(Letter { base: 0, exp: -d1 }).unwrap();
                let b = self
                    .letter_element(Letter {
                        base: 1,
                        exp: -(*d2 as i64),
                    })
                    .unwrap();
                self.multiply(&a, &b)
            }
        }
    }

    pub fn is_identity(&self, x: &GroupElement) -> bool {
        *x == self.identity_element()
    }

    /// Canonical form of a word.
    pub fn canonicalize(&self, word: &[Letter]) -> Result<GroupElement> {
        let mut acc = self.identity_element();
        for &letter in word {
            let g = self.letter_element(letter)?;
            acc = self.multiply(&acc, &g);
        }
        Ok(acc)
    }

    /// Parses a whitespace-separated word (`a a^-1 b`, `d1^3 e d2^-2`) over
    /// the base generators, their inverses and `e`.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Letter>> {
        parse::parse_word(self, text)
    }

    pub fn canonicalize_str(&self, text: &str) -> Result<GroupElement> {
        let word = self.parse_word(text)?;
        self.canonicalize(&word)
    }

    /// Canonical word of an element as text, `e` for the identity.
    pub fn format_element(&self, x: &GroupElement) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut push = |g: usize, e: i64| {
            let name = &self.base_names[g];
            if e == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{e}"));
            }
        };
        match x {
            GroupElement::Word(w) => w.iter().for_each(|&(g, e)| push(g, e)),
            GroupElement::Exponents(v) => v
                .iter()
                .enumerate()
                .filter(|(_, e)| **e != 0)
                .for_each(|(g, &e)| push(g, e)),
            GroupElement::Bits(b) => (0..self.rank()).filter(|i| b >> i & 1 == 1).for_each(|g| push(g, 1)),
            GroupElement::Relation { d1, d2 } => {
                if *d1 != 0 {
                    push(0, *d1);
                }
                if *d2 != 0 {
                    push(1, *d2 as i64);
                }
            }
        }
        if parts.is_empty() {
            "e".to_string()
        } else {
            parts.join(" ")
        }
    }

    /// Word length of a canonical element in the base generators (used as a
    /// cheap upper bound for distances on quotients).
    pub fn word_length(&self, x: &GroupElement) -> u64 {
        match x {
            GroupElement::Word(w) => w.iter().map(|(_, e)| e.unsigned_abs()).sum(),
            GroupElement::Exponents(v) => v.iter().map(|e| e.unsigned_abs()).sum(),
            GroupElement::Bits(b) => b.count_ones() as u64,
            GroupElement::Relation { d1, d2 } => d1.unsigned_abs() + *d2 as u64,
        }
    }

    // ----- Δ₂ ------------------------------------------------------------

    /// `δ δ'⁻¹` for the Δ entries at `i`, `j`.
    pub fn left_quotient_of(&self, i: usize, j: usize) -> GroupElement {
        let a = self.delta_element(i);
        let b = self.delta_element(j);
        self.multiply(&a, &self.inverse(&b))
    }

    /// `δ⁻¹ δ'` for the Δ entries at `i`, `j`.
    pub fn right_quotient_of(&self, i: usize, j: usize) -> GroupElement {
        let a = self.delta_element(i);
        let b = self.delta_element(j);
        self.multiply(&self.inverse(&a), &b)
    }

    /// Δ₂ = { δ δ'⁻¹ : δ, δ' ∈ Δ }, deduplicated, in order of first
    /// appearance over the lexicographic enumeration of index pairs. The
    /// identity is always the first entry.
    pub fn delta2_set(&self) -> Vec<GroupElement> {
        group_pairs(self.delta.len(), |i, j| self.left_quotient_of(i, j))
            .into_iter()
            .map(|(u, _)| u)
            .collect()
    }

    /// Ordered pairs `(δ₁, δ₂)` (as Δ indices) with `δ₁ δ₂⁻¹ = u`.
    pub fn alternating_pairs(&self, u: &GroupElement) -> Result<Vec<(usize, usize)>> {
        group_pairs(self.delta.len(), |i, j| self.left_quotient_of(i, j))
            .into_iter()
            .find(|(v, _)| v == u)
            .map(|(_, pairs)| pairs)
            .ok_or_else(|| Error::NotInDelta2(self.format_element(u)))
    }

    /// Every element of Δ₂ with its pair list, in Δ₂ order.
    pub fn left_condition_groups(&self) -> Vec<(GroupElement, Vec<(usize, usize)>)> {
        group_pairs(self.delta.len(), |i, j| self.left_quotient_of(i, j))
    }

    /// Pair groups for the mirrored (`W W†`) conditions, indexed by
    /// `δ₁⁻¹ δ₂`. Coincides with the left grouping for abelian groups.
    pub fn right_condition_groups(&self) -> Vec<(GroupElement, Vec<(usize, usize)>)> {
        group_pairs(self.delta.len(), |i, j| self.right_quotient_of(i, j))
    }
}

fn symmetric_delta(base_names: &[String]) -> Vec<GeneratorSymbol> {
    let mut delta = Vec::with_capacity(2 * base_names.len());
    for (i, name) in base_names.iter().enumerate() {
        delta.push(GeneratorSymbol {
            name: name.clone(),
            base: Some(i),
            is_inverse: false,
        });
        delta.push(GeneratorSymbol {
            name: format!("{name}^-1"),
            base: Some(i),
            is_inverse: true,
        });
    }
    delta
}

fn group_pairs<F>(n: usize, key: F) -> Vec<(GroupElement, Vec<(usize, usize)>)>
where
    F: Fn(usize, usize) -> GroupElement,
{
    let mut groups: Vec<(GroupElement, Vec<(usize, usize)>)> = Vec::new();
    let mut index: HashMap<GroupElement, usize> = HashMap::new();
    // Diagonal pairs first so the identity row leads.
    let order = (0..n)
        .map(|i| (i, i))
        .chain((0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))));
    for (i, j) in order {
        let u = key(i, j);
        match index.get(&u) {
            Some(&k) => groups[k].1.push((i, j)),
            None => {
                index.insert(u.clone(), groups.len());
                groups.push((u, vec![(i, j)]));
            }
        }
    }
    for (_, pairs) in &mut groups {
        pairs.sort_unstable();
    }
    groups
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fmt_set(p: &GroupPresentation, set: &[GroupElement]) -> Vec<String> {
        set.iter().map(|u| p.format_element(u)).collect()
    }

    #[test]
    fn free_reduction() {
        let p = GroupPresentation::free(&["a", "b"]).unwrap();
        let x = p.canonicalize_str("a a^-1 b").unwrap();
        assert_eq!(p.format_element(&x), "b");
        let y = p.canonicalize_str("a b b^-1 a").unwrap();
        assert_eq!(p.format_element(&y), "a^2");
    }

    #[test]
    fn hypercube_bits() {
        let p = GroupPresentation::hypercube(3).unwrap();
        let x = p.canonicalize_str("d1 d2 d1").unwrap();
        assert_eq!(x, GroupElement::Bits(0b010));
    }

    #[test]
    fn commutator_is_identity_in_free_abelian() {
        let p = GroupPresentation::free_abelian(2, false).unwrap();
        let x = p.canonicalize_str("d1 d2 d1^-1 d2^-1").unwrap();
        assert!(p.is_identity(&x));
        assert_eq!(x, GroupElement::Exponents(vec![0, 0]));
    }

    #[test]
    fn unknown_symbol_is_named() {
        let p = GroupPresentation::free(&["a", "b"]).unwrap();
        match p.canonicalize_str("a c") {
            Err(Error::UnknownSymbol(s)) => assert_eq!(s, "c"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cyclic_product_normal_form() {
        let p = GroupPresentation::cyclic_free_product(&[2, 3]).unwrap();
        let x = p.canonicalize_str("d2 d2 d2 d1 d1 d2^-1").unwrap();
        assert_eq!(x, GroupElement::Word(vec![(1, 2)]));
        assert_eq!(p.format_element(&x), "d2^2");
    }

    #[test]
    fn relation_group_identifies_squares() {
        let p = GroupPresentation::abelian_with_relation();
        let a = p.canonicalize_str("d1 d1").unwrap();
        let b = p.canonicalize_str("d2 d2").unwrap();
        assert_eq!(a, b);
        let c = p.canonicalize_str("d1 d2^-1 d1 d2^-1").unwrap();
        assert!(p.is_identity(&c));
        let x = p.canonicalize_str("d2^-1").unwrap();
        assert_eq!(p.multiply(&x, &p.inverse(&x)), p.identity_element());
    }

    #[test]
    fn delta2_free() {
        let p = GroupPresentation::free(&["a", "b"]).unwrap();
        assert_eq!(fmt_set(&p, &p.delta2_set()), ["e", "a b^-1", "b a^-1"]);
    }

    #[test]
    fn delta2_one_dimensional() {
        let p = GroupPresentation::free_abelian(1, false).unwrap();
        assert_eq!(fmt_set(&p, &p.delta2_set()), ["e", "d1^2", "d1^-2"]);
    }

    #[test]
    fn delta2_hypercube_two() {
        let p = GroupPresentation::hypercube(2).unwrap();
        assert_eq!(fmt_set(&p, &p.delta2_set()), ["e", "d1 d2"]);
    }

    #[test]
    fn alternating_pairs_abelian() {
        let p = GroupPresentation::free_abelian(2, false).unwrap();
        let u = p.canonicalize_str("d1 d2^-1").unwrap();
        let pairs = p.alternating_pairs(&u).unwrap();
        let named: Vec<(&str, &str)> = pairs
            .iter()
            .map(|&(i, j)| (p.delta()[i].name.as_str(), p.delta()[j].name.as_str()))
            .collect();
        assert_eq!(named, [("d1", "d2"), ("d2^-1", "d1^-1")]);
    }

    #[test]
    fn alternating_pairs_free_and_hypercube() {
        let p = GroupPresentation::free(&["a", "b"]).unwrap();
        let u = p.canonicalize_str("a b^-1").unwrap();
        assert_eq!(p.alternating_pairs(&u).unwrap(), [(0, 1)]);

        let h = GroupPresentation::hypercube(3).unwrap();
        let u = h.canonicalize_str("d1 d2").unwrap();
        assert_eq!(h.alternating_pairs(&u).unwrap(), [(0, 1), (1, 0)]);
    }

    #[test]
    fn alternating_pairs_identity_is_diagonal() {
        let p = GroupPresentation::free_abelian(2, false).unwrap();
        let e = p.identity_element();
        assert_eq!(p.alternating_pairs(&e).unwrap(), [(0, 0), (1, 1), (2, 2), (3, 3)]);
    }

    #[test]
    fn alternating_pairs_rejects_outsiders() {
        let p = GroupPresentation::free(&["a", "b"]).unwrap();
        let u = p.canonicalize_str("a a").unwrap();
        assert!(matches!(p.alternating_pairs(&u), Err(Error::NotInDelta2(_))));
    }

    #[test]
    fn right_groups_differ_for_nonabelian() {
        let p = GroupPresentation::free(&["a", "b"]).unwrap();
        let right: Vec<String> = p
            .right_condition_groups()
            .iter()
            .map(|(u, _)| p.format_element(u))
            .collect();
        assert_eq!(right, ["e", "a^-1 b", "b^-1 a"]);
    }

    #[test]
    fn spec_round_trip() {
        for s in [
            "free:a,b",
            "free:a,a^-1,b,b^-1,e",
            "abelian:n=3",
            "abelian:n=1,lazy",
            "hypercube:n=5",
            "cyclicprod:q=2,2,3",
            "abelianrel:sq",
        ] {
            let p = GroupPresentation::parse(s).unwrap();
            assert_eq!(p.spec(), s);
            assert_eq!(GroupPresentation::parse(&p.spec()).unwrap(), p);
        }
    }
}
