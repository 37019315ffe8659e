//! Sets of ordinals as codes for sets, the machine's native data format.
//!
//! A [`SetCode`] is a finite set of ordinals `members` together with a
//! designated `root`. It induces the relation `E = {(b, g) : pair(b, g) ∈
//! members}`, read as "point `b` is a member of point `g`". When `E` is
//! well-founded and extensional on the part reachable from the root, the code
//! denotes the Mostowski collapse of the root, a hereditarily finite set.
//!
//! The same members-as-pairs reading, with the root ignored, makes a set of
//! ordinals a code for a binary relation; [`is_well_order`] and
//! [`order_type`] work on that reading.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::{pair, unpair, Ordinal};

/// A hereditarily finite set value: the ground-truth world that codes decode
/// into. The derived `Ord` is an arbitrary but fixed total order, used as the
/// tie-breaker in canonical enumerations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HfSet {
    elements: BTreeSet<HfSet>,
}

impl HfSet {
    pub fn empty() -> Self {
        HfSet::default()
    }

    pub fn singleton(x: HfSet) -> Self {
        HfSet {
            elements: BTreeSet::from([x]),
        }
    }

    pub fn from_elements(elems: impl IntoIterator<Item = HfSet>) -> Self {
        HfSet {
            elements: elems.into_iter().collect(),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = &HfSet> {
        self.elements.iter()
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.elements.contains(x)
    }

    pub fn insert(&mut self, x: HfSet) {
        self.elements.insert(x);
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Set-theoretic rank: 0 for ∅, otherwise 1 + max rank of elements.
    pub fn rank(&self) -> usize {
        self.elements.iter().map(|e| e.rank() + 1).max().unwrap_or(0)
    }

    pub fn is_subset(&self, other: &HfSet) -> bool {
        self.elements.is_subset(&other.elements)
    }

    pub fn union(&self, other: &HfSet) -> HfSet {
        HfSet {
            elements: self.elements.union(&other.elements).cloned().collect(),
        }
    }

    /// ⋃self: union of all elements.
    pub fn union_all(&self) -> HfSet {
        let mut out = HfSet::empty();
        for e in &self.elements {
            out = out.union(e);
        }
        out
    }

    pub fn powerset(&self) -> HfSet {
        let elems: Vec<&HfSet> = self.elements.iter().collect();
        let mut subsets = BTreeSet::new();
        for mask in 0u64..(1u64 << elems.len()) {
            let mut s = HfSet::empty();
            for (i, e) in elems.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s.insert((*e).clone());
                }
            }
            subsets.insert(s);
        }
        HfSet { elements: subsets }
    }

    /// Kuratowski pair {{a}, {a, b}}.
    pub fn kuratowski(a: HfSet, b: HfSet) -> HfSet {
        let first = HfSet::singleton(a.clone());
        let both = HfSet::from_elements([a, b]);
        HfSet::from_elements([first, both])
    }

    /// Inverse of [`HfSet::kuratowski`], when the shape matches.
    pub fn as_kuratowski(&self) -> Option<(HfSet, HfSet)> {
        let parts: Vec<&HfSet> = self.elements.iter().collect();
        match parts.as_slice() {
            [s] => {
                // {{a}} is the pair (a, a)
                let inner: Vec<&HfSet> = s.elements.iter().collect();
                match inner.as_slice() {
                    [a] => Some(((*a).clone(), (*a).clone())),
                    _ => None,
                }
            }
            [p, q] => {
                let (small, big) = if p.len() <= q.len() { (p, q) } else { (q, p) };
                let a = match small.elements.iter().collect::<Vec<_>>().as_slice() {
                    [a] => (*a).clone(),
                    _ => return None,
                };
                if !big.contains(&a) || big.len() != 2 {
                    return None;
                }
                let b = big.elements.iter().find(|x| **x != a)?;
                Some((a, b.clone()))
            }
            _ => None,
        }
    }

    /// Reads a set of Kuratowski pairs as a function graph. `None` when an
    /// element is not a pair or a left component repeats.
    pub fn as_function(&self) -> Option<BTreeMap<HfSet, HfSet>> {
        let mut map = BTreeMap::new();
        for e in &self.elements {
            let (a, b) = e.as_kuratowski()?;
            if map.insert(a, b).is_some() {
                return None;
            }
        }
        Some(map)
    }

    /// A compact numeral: ∅ for 0, otherwise the pair (low bit, rest) with
    /// the bit a von Neumann 0 or 1. Unlike von Neumann ordinals, whose
    /// structural tree grows exponentially with the value, numerals stay
    /// logarithmic, so they are the number representation of choice inside
    /// large coded structures such as formula codes.
    pub fn numeral(n: u64) -> HfSet {
        if n == 0 {
            return HfSet::empty();
        }
        HfSet::kuratowski(HfSet::von_neumann(n & 1), HfSet::numeral(n >> 1))
    }

    /// Inverse of [`HfSet::numeral`].
    pub fn as_numeral(&self) -> Option<u64> {
        if self.is_empty() {
            return Some(0);
        }
        let (bit, rest) = self.as_kuratowski()?;
        let bit = bit.as_von_neumann()?;
        if bit > 1 {
            return None;
        }
        let rest = rest.as_numeral()?;
        // the leading bit of a nonzero numeral is 1, so the encoding is
        // canonical
        if rest == 0 && bit == 0 {
            return None;
        }
        Some(bit + 2 * rest)
    }

    /// The von Neumann natural n = {0, 1, ..., n-1}.
    pub fn von_neumann(n: u64) -> HfSet {
        let mut out = HfSet::empty();
        for _ in 0..n {
            let mut next = out.clone();
            next.insert(out);
            out = next;
        }
        out
    }

    /// Inverse of [`HfSet::von_neumann`], when this set is an ordinal.
    pub fn as_von_neumann(&self) -> Option<u64> {
        let mut expected = HfSet::empty();
        for _ in 0..self.len() {
            if !self.contains(&expected) {
                return None;
            }
            let mut next = expected.clone();
            next.insert(expected);
            expected = next;
        }
        Some(self.len() as u64)
    }

    /// Elements of the cumulative level Vₙ, canonically ordered.
    pub fn v_level(n: usize) -> Vec<HfSet> {
        let mut carrier: BTreeSet<HfSet> = BTreeSet::new();
        for _ in 0..n {
            let snapshot: Vec<HfSet> = carrier.iter().cloned().collect();
            let mut next = BTreeSet::new();
            for mask in 0u64..(1u64 << snapshot.len()) {
                let mut s = HfSet::empty();
                for (i, e) in snapshot.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        s.insert(e.clone());
                    }
                }
                next.insert(s);
            }
            carrier = next;
        }
        carrier.into_iter().collect()
    }

    /// Transitive closure of {self}: this set and every set hereditarily
    /// reachable from it.
    pub fn transitive_closure_with_self(&self) -> BTreeSet<HfSet> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(s) = stack.pop() {
            if seen.contains(&s) {
                continue;
            }
            stack.extend(s.elements.iter().cloned());
            seen.insert(s);
        }
        seen
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("hf-set syntax error at byte {position}: {message}")]
pub struct ParseHfSetError {
    pub position: usize,
    pub message: String,
}

impl FromStr for HfSet {
    type Err = ParseHfSetError;

    /// Parses brace notation: `{}`, `{{},{{}}}`. Whitespace is free.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        fn skip(s: &str, mut p: usize) -> usize {
            while s[p..].starts_with(|c: char| c.is_ascii_whitespace()) {
                p += 1;
            }
            p
        }
        fn parse_at(s: &str, mut pos: usize) -> Result<(HfSet, usize), ParseHfSetError> {
            let err = |position: usize, m: &str| ParseHfSetError {
                position,
                message: m.to_string(),
            };
            pos = skip(s, pos);
            if !s[pos..].starts_with('{') {
                return Err(err(pos, "expected `{`"));
            }
            pos = skip(s, pos + 1);
            let mut out = HfSet::empty();
            if s[pos..].starts_with('}') {
                return Ok((out, pos + 1));
            }
            loop {
                let (elem, next) = parse_at(s, pos)?;
                out.insert(elem);
                pos = skip(s, next);
                if s[pos..].starts_with(',') {
                    pos = skip(s, pos + 1);
                } else if s[pos..].starts_with('}') {
                    return Ok((out, pos + 1));
                } else {
                    return Err(err(pos, "expected `,` or `}`"));
                }
            }
        }
        let (set, end) = parse_at(s, 0)?;
        if !s[end..].trim().is_empty() {
            return Err(ParseHfSetError {
                position: end,
                message: "trailing input".to_string(),
            });
        }
        Ok(set)
    }
}

/// A set of ordinals coding a set, plus the designated root point.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetCode {
    #[serde(default = "Ordinal::zero")]
    pub root: Ordinal,
    #[serde(default)]
    pub members: BTreeSet<Ordinal>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("code is not well-founded: membership cycle through point {0}")]
    NotWellFounded(Ordinal),
    #[error("code is not extensional: points {0} and {1} decode to the same set")]
    NotExtensional(Ordinal, Ordinal),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("the coded relation is not a well-order")]
pub struct NotAWellOrder;

impl SetCode {
    pub fn new(root: Ordinal, members: impl IntoIterator<Item = Ordinal>) -> Self {
        SetCode {
            root,
            members: members.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        SetCode::new(Ordinal::zero(), [])
    }

    /// The induced membership edges `(b, g)` with `pair(b, g) ∈ members`,
    /// read "b is a member of g".
    pub fn edges(&self) -> Vec<(Ordinal, Ordinal)> {
        self.members.iter().map(unpair).collect()
    }

    /// All point labels occurring in the induced relation.
    pub fn field(&self) -> BTreeSet<Ordinal> {
        let mut out = BTreeSet::new();
        for (a, b) in self.edges() {
            out.insert(a);
            out.insert(b);
        }
        out
    }

    /// Members-of map of the induced relation.
    fn children(&self) -> BTreeMap<Ordinal, BTreeSet<Ordinal>> {
        let mut map: BTreeMap<Ordinal, BTreeSet<Ordinal>> = BTreeMap::new();
        for (b, g) in self.edges() {
            map.entry(g).or_default().insert(b);
        }
        map
    }

    /// Points reachable from the root, children before parents. Errors on a
    /// membership cycle.
    fn reachable_postorder(&self) -> Result<Vec<Ordinal>, CodeError> {
        let children = self.children();
        let empty = BTreeSet::new();
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            Open,
            Done,
        }
        let mut color: BTreeMap<Ordinal, Color> = BTreeMap::new();
        let mut order = Vec::new();
        let mut stack: Vec<(Ordinal, bool)> = vec![(self.root.clone(), false)];
        while let Some((p, expanded)) = stack.pop() {
            if expanded {
                color.insert(p.clone(), Color::Done);
                order.push(p);
                continue;
            }
            match color.get(&p) {
                Some(Color::Done) => continue,
                Some(Color::Open) => return Err(CodeError::NotWellFounded(p)),
                None => {}
            }
            color.insert(p.clone(), Color::Open);
            stack.push((p.clone(), true));
            for c in children.get(&p).unwrap_or(&empty) {
                match color.get(c) {
                    Some(Color::Open) => return Err(CodeError::NotWellFounded(c.clone())),
                    Some(Color::Done) => {}
                    None => stack.push((c.clone(), false)),
                }
            }
        }
        Ok(order)
    }

    /// Relabels every point through `f`; `f` must be injective for the
    /// result to code the same set.
    pub fn relabel(&self, f: impl Fn(&Ordinal) -> Ordinal) -> SetCode {
        let members = self
            .edges()
            .iter()
            .map(|(a, b)| pair(&f(a), &f(b)))
            .collect();
        SetCode {
            root: f(&self.root),
            members,
        }
    }
}

impl fmt::Debug for SetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetCode(root {} | ", self.root)?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for SetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let json = serde_json::to_string(self).map_err(|_| fmt::Error)?;
        write!(f, "{json}")
    }
}

/// Canonical code of a hereditarily finite set: the root gets label 0 and the
/// members of tc(x) get consecutive naturals in (rank, canonical) order.
pub fn encode(x: &HfSet) -> SetCode {
    let tc = x.transitive_closure_with_self();
    // ranks bottom-up over the closure, elements before containers
    let mut ranks: HashMap<&HfSet, usize> = HashMap::new();
    let mut remaining: Vec<&HfSet> = tc.iter().collect();
    while !remaining.is_empty() {
        let mut next_round = Vec::new();
        for s in remaining {
            let ranked = s
                .elements()
                .map(|e| ranks.get(e).map(|r| r + 1))
                .collect::<Option<Vec<_>>>();
            match ranked {
                Some(rs) => {
                    ranks.insert(s, rs.into_iter().max().unwrap_or(0));
                }
                None => next_round.push(s),
            }
        }
        remaining = next_round;
    }
    let mut rest: Vec<&HfSet> = tc.iter().filter(|s| *s != x).collect();
    rest.sort_by(|a, b| (ranks[*a], *a).cmp(&(ranks[*b], *b)));
    let mut index: HashMap<&HfSet, u64> = HashMap::new();
    index.insert(x, 0);
    for (i, s) in rest.iter().enumerate() {
        index.insert(s, i as u64 + 1);
    }
    let mut members = BTreeSet::new();
    for s in &tc {
        let parent = Ordinal::from_nat(index[s]);
        for e in s.elements() {
            let child = Ordinal::from_nat(index[e]);
            members.insert(pair(&child, &parent));
        }
    }
    SetCode {
        root: Ordinal::zero(),
        members,
    }
}

/// Mostowski collapse of the reachable part of a valid code.
pub fn decode(c: &SetCode) -> Result<HfSet, CodeError> {
    let order = c.reachable_postorder()?;
    let children = c.children();
    let empty = BTreeSet::new();
    let mut value: BTreeMap<&Ordinal, HfSet> = BTreeMap::new();
    for p in &order {
        let elems: BTreeSet<HfSet> = children
            .get(p)
            .unwrap_or(&empty)
            .iter()
            .map(|ch| value[ch].clone())
            .collect();
        value.insert(p, HfSet { elements: elems });
    }
    // extensionality = injectivity of the collapse on the reachable part
    let mut seen: BTreeMap<&HfSet, &Ordinal> = BTreeMap::new();
    for (p, v) in &value {
        if let Some(q) = seen.insert(v, p) {
            return Err(CodeError::NotExtensional(q.clone(), (*p).clone()));
        }
    }
    Ok(value
        .get(&c.root)
        .cloned()
        .expect("root is always reachable"))
}

fn validate(c: &SetCode) -> Result<(), CodeError> {
    decode(c).map(|_| ())
}

/// Valuation of every reachable point of a valid code: which set each point
/// collapses to.
pub fn decode_points(c: &SetCode) -> Result<BTreeMap<Ordinal, HfSet>, CodeError> {
    let order = c.reachable_postorder()?;
    let children = c.children();
    let empty = BTreeSet::new();
    let mut value: BTreeMap<Ordinal, HfSet> = BTreeMap::new();
    for p in order {
        let elems: BTreeSet<HfSet> = children
            .get(&p)
            .unwrap_or(&empty)
            .iter()
            .map(|ch| value[ch].clone())
            .collect();
        value.insert(p, HfSet { elements: elems });
    }
    let mut seen: BTreeMap<&HfSet, &Ordinal> = BTreeMap::new();
    for (p, v) in &value {
        if let Some(q) = seen.insert(v, p) {
            return Err(CodeError::NotExtensional(q.clone(), p.clone()));
        }
    }
    Ok(value)
}

/// Restriction of a code to a chosen subset of the root's members: the kept
/// children, their downward closures, and the root edges onto them. Point
/// labels are inherited from the input, so the result's field is a subset of
/// the input's field. This is the separation oracle's output encoding.
pub fn restrict_root_children(c: &SetCode, keep: impl Fn(&Ordinal) -> bool) -> SetCode {
    let children = c.children();
    let empty = BTreeSet::new();
    let kept: BTreeSet<Ordinal> = children
        .get(&c.root)
        .unwrap_or(&empty)
        .iter()
        .filter(|p| keep(p))
        .cloned()
        .collect();
    // downward closure of the kept children
    let mut closure: BTreeSet<Ordinal> = BTreeSet::new();
    let mut stack: Vec<Ordinal> = kept.iter().cloned().collect();
    while let Some(p) = stack.pop() {
        if !closure.insert(p.clone()) {
            continue;
        }
        for ch in children.get(&p).unwrap_or(&empty) {
            stack.push(ch.clone());
        }
    }
    let members = c
        .members
        .iter()
        .filter(|m| {
            let (b, g) = unpair(m);
            (g == c.root && kept.contains(&b))
                || (closure.contains(&b) && closure.contains(&g))
        })
        .cloned()
        .collect();
    SetCode {
        root: c.root.clone(),
        members,
    }
}

/// Whether two valid codes code the same set, decided by extensional
/// bisimulation on the coded relations; no collapse is built.
pub fn same_set(c: &SetCode, d: &SetCode) -> Result<bool, CodeError> {
    validate(c)?;
    validate(d)?;
    let ch_c = c.children();
    let ch_d = d.children();
    let empty = BTreeSet::new();

    fn bisim(
        a: &Ordinal,
        b: &Ordinal,
        ch_c: &BTreeMap<Ordinal, BTreeSet<Ordinal>>,
        ch_d: &BTreeMap<Ordinal, BTreeSet<Ordinal>>,
        empty: &BTreeSet<Ordinal>,
        memo: &mut HashMap<(Ordinal, Ordinal), bool>,
    ) -> bool {
        if let Some(&v) = memo.get(&(a.clone(), b.clone())) {
            return v;
        }
        let ca = ch_c.get(a).unwrap_or(empty);
        let cb = ch_d.get(b).unwrap_or(empty);
        let forward = ca
            .iter()
            .all(|x| cb.iter().any(|y| bisim(x, y, ch_c, ch_d, empty, memo)));
        let backward = cb
            .iter()
            .all(|y| ca.iter().any(|x| bisim(x, y, ch_c, ch_d, empty, memo)));
        let v = forward && backward;
        memo.insert((a.clone(), b.clone()), v);
        v
    }

    let mut memo = HashMap::new();
    Ok(bisim(&c.root, &d.root, &ch_c, &ch_d, &empty, &mut memo))
}

/// Whether the coded relation is a strict linear well-order of its field.
/// On a finite field that is exactly: irreflexive, transitive, and total.
pub fn is_well_order(c: &SetCode) -> bool {
    let edges: BTreeSet<(Ordinal, Ordinal)> = c.edges().into_iter().collect();
    let field: Vec<Ordinal> = c.field().into_iter().collect();
    for (a, b) in &edges {
        if a == b {
            return false;
        }
        for (b2, c2) in &edges {
            if b == b2 && !edges.contains(&(a.clone(), c2.clone())) {
                return false;
            }
        }
    }
    for (i, a) in field.iter().enumerate() {
        for b in &field[i + 1..] {
            if !edges.contains(&(a.clone(), b.clone())) && !edges.contains(&(b.clone(), a.clone()))
            {
                return false;
            }
        }
    }
    true
}

/// Order type of a coded well-order; on finite fields this is the field size
/// as an ordinal.
pub fn order_type(c: &SetCode) -> Result<Ordinal, NotAWellOrder> {
    if !is_well_order(c) {
        return Err(NotAWellOrder);
    }
    Ok(Ordinal::from_nat(c.field().len() as u64))
}

/// Code of the Kuratowski product decode(c) × decode(d).
pub fn product_code(c: &SetCode, d: &SetCode) -> Result<SetCode, CodeError> {
    let x = decode(c)?;
    let y = decode(d)?;
    let mut prod = HfSet::empty();
    for a in x.elements() {
        for b in y.elements() {
            prod.insert(HfSet::kuratowski(a.clone(), b.clone()));
        }
    }
    Ok(encode(&prod))
}

/// Packs component codes into one set of ordinals: member `m` of component
/// `i` becomes `pair(i, m)`. Components are assumed to use root 0, which all
/// canonically encoded values do; the machine-level oracle convention relies
/// on this.
pub fn tuple_code(components: &[SetCode]) -> SetCode {
    let mut members = BTreeSet::new();
    for (i, c) in components.iter().enumerate() {
        let tag = Ordinal::from_nat(i as u64);
        for m in &c.members {
            members.insert(pair(&tag, m));
        }
    }
    SetCode {
        root: Ordinal::zero(),
        members,
    }
}

/// Inverse of [`tuple_code`] for a known arity.
pub fn untuple_code(code: &SetCode, arity: usize) -> Vec<SetCode> {
    let mut out = vec![SetCode::empty(); arity];
    for m in &code.members {
        let (tag, inner) = unpair(m);
        if let Some(i) = tag.nat_value() {
            if (i as usize) < arity {
                out[i as usize].members.insert(inner);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hf(s: &str) -> HfSet {
        s.parse().unwrap()
    }

    fn nat(n: u64) -> Ordinal {
        Ordinal::from_nat(n)
    }

    #[test]
    fn encode_canonical_examples() {
        assert_eq!(encode(&HfSet::empty()), SetCode::empty());
        // {∅}: members {pair(1,0)} = {2}
        assert_eq!(encode(&hf("{{}}")), SetCode::new(nat(0), [nat(2)]));
        // {∅,{∅}}: indices 0 ↦ x, 1 ↦ ∅, 2 ↦ {∅}
        let expected = SetCode::new(
            nat(0),
            [
                pair(&nat(1), &nat(0)),
                pair(&nat(2), &nat(0)),
                pair(&nat(1), &nat(2)),
            ],
        );
        assert_eq!(encode(&hf("{{},{{}}}")), expected);
    }

    #[test]
    fn decode_inverts_encode_on_v4() {
        for x in HfSet::v_level(4) {
            assert_eq!(decode(&encode(&x)).unwrap(), x, "roundtrip of {x}");
        }
    }

    #[test]
    fn decode_examples_and_errors() {
        assert_eq!(decode(&SetCode::new(nat(0), [nat(2)])).unwrap(), hf("{{}}"));
        // self-membership pair(0,0) = 0
        assert_eq!(
            decode(&SetCode::new(nat(0), [pair(&nat(0), &nat(0))])),
            Err(CodeError::NotWellFounded(nat(0)))
        );
        // two distinct empty points under the root: not extensional
        let twins = SetCode::new(nat(0), [pair(&nat(1), &nat(0)), pair(&nat(2), &nat(0))]);
        assert!(matches!(
            decode(&twins),
            Err(CodeError::NotExtensional(_, _))
        ));
    }

    #[test]
    fn same_set_is_label_independent() {
        let c = encode(&hf("{{}}"));
        // relabeled isomorphic code: base point 7 instead of 1
        let d = SetCode::new(nat(0), [pair(&nat(7), &nat(0))]);
        assert!(same_set(&c, &d).unwrap());
        assert!(!same_set(&encode(&HfSet::empty()), &c).unwrap());
        assert!(same_set(&c, &c).unwrap());
        // a thorough relabeling through a gappy injection
        let x = hf("{{},{{}},{{},{{}}}}");
        let c = encode(&x);
        let shifted = c.relabel(|o| o.add(&nat(5)).add(o));
        assert!(same_set(&c, &shifted).unwrap());
        assert_eq!(decode(&shifted).unwrap(), x);
    }

    #[test]
    fn well_order_checker_examples() {
        // the relation 2<3<1 on field {1,2,3}
        let r = SetCode::new(
            nat(0),
            [
                pair(&nat(2), &nat(3)),
                pair(&nat(3), &nat(1)),
                pair(&nat(2), &nat(1)),
            ],
        );
        assert!(is_well_order(&r));
        assert_eq!(order_type(&r).unwrap(), nat(3));
        // a 2-cycle
        let cyc = SetCode::new(nat(0), [pair(&nat(1), &nat(2)), pair(&nat(2), &nat(1))]);
        assert!(!is_well_order(&cyc));
        assert_eq!(order_type(&cyc), Err(NotAWellOrder));
        // the empty relation well-orders the empty field
        assert_eq!(order_type(&SetCode::empty()).unwrap(), nat(0));
    }

    #[test]
    fn product_code_counts() {
        let empty = encode(&HfSet::empty());
        let one = encode(&hf("{{}}"));
        assert!(same_set(&product_code(&empty, &one).unwrap(), &empty).unwrap());
        // {∅} × {∅} = {⟨∅,∅⟩}
        let pair_set = HfSet::singleton(HfSet::kuratowski(HfSet::empty(), HfSet::empty()));
        assert!(same_set(&product_code(&one, &one).unwrap(), &encode(&pair_set)).unwrap());
        // |x| = 2, |y| = 3 gives 6 decoded elements
        let x = hf("{{},{{}}}");
        let y = hf("{{},{{}},{{{}}}}");
        let p = product_code(&encode(&x), &encode(&y)).unwrap();
        assert_eq!(decode(&p).unwrap().len(), 6);
    }

    #[test]
    fn kuratowski_roundtrip() {
        let a = hf("{{}}");
        let b = hf("{{},{{}}}");
        let p = HfSet::kuratowski(a.clone(), b.clone());
        assert_eq!(p.as_kuratowski(), Some((a.clone(), b)));
        let q = HfSet::kuratowski(a.clone(), a.clone());
        assert_eq!(q.as_kuratowski(), Some((a.clone(), a)));
        assert_eq!(hf("{{}}").as_kuratowski(), None);
    }

    #[test]
    fn von_neumann_naturals() {
        assert_eq!(HfSet::von_neumann(0), HfSet::empty());
        assert_eq!(HfSet::von_neumann(2), hf("{{},{{}}}"));
        assert_eq!(HfSet::von_neumann(3).as_von_neumann(), Some(3));
        assert_eq!(hf("{{{}}}").as_von_neumann(), None);
    }

    #[test]
    fn v_levels_have_iterated_powerset_sizes() {
        assert_eq!(HfSet::v_level(0).len(), 0);
        assert_eq!(HfSet::v_level(1).len(), 1);
        assert_eq!(HfSet::v_level(2).len(), 2);
        assert_eq!(HfSet::v_level(3).len(), 4);
        assert_eq!(HfSet::v_level(4).len(), 16);
    }

    #[test]
    fn tuple_code_roundtrip() {
        let parts = vec![
            encode(&hf("{{}}")),
            encode(&HfSet::empty()),
            encode(&hf("{{},{{}}}")),
        ];
        let packed = tuple_code(&parts);
        let unpacked = untuple_code(&packed, 3);
        for (orig, back) in parts.iter().zip(&unpacked) {
            assert_eq!(&orig.members, &back.members);
        }
    }

    #[test]
    fn setcode_json_shape() {
        let c = SetCode::new(nat(0), [nat(2), "w".parse().unwrap()]);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"root":"0","members":["2","w"]}"#);
        let back: SetCode = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        let defaulted: SetCode = serde_json::from_str("{}").unwrap();
        assert_eq!(defaulted, SetCode::empty());
    }
}
