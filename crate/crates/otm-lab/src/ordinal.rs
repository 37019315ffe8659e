//! Ordinals below ε₀ in Cantor normal form, with the Gödel pairing function.
//!
//! An ordinal is kept as its CNF term list `ω^e1·c1 + ω^e2·c2 + ...` with
//! strictly decreasing exponents (themselves ordinals) and positive integer
//! coefficients. The empty list is 0. This representation is unique, so
//! structural equality is ordinal equality.
//!
//! The pairing function is the Gödel pairing: order pairs by maximum, then
//! lexicographically, and let `pair(a, b)` be the rank of `(a, b)` in that
//! well-order. `unpair` inverts it exactly.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An ordinal below ε₀ in Cantor normal form.
///
/// `terms` holds `(exponent, coefficient)` pairs with strictly decreasing
/// exponents and coefficients ≥ 1; no term for 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from_nat(1)
    }

    pub fn omega() -> Self {
        Ordinal::one().omega_power()
    }

    /// ω^self.
    pub fn omega_power(&self) -> Ordinal {
        Ordinal {
            terms: vec![(self.clone(), 1)],
        }
    }

    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(Ordinal::zero(), n)],
            }
        }
    }

    /// The natural number this ordinal denotes, if it is finite.
    pub fn nat_value(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff this is a limit ordinal (nonzero with no finite part).
    /// 0 is not a limit by convention.
    pub fn is_limit(&self) -> bool {
        match self.terms.last() {
            None => false,
            Some((e, _)) => !e.is_zero(),
        }
    }

    pub fn is_successor(&self) -> bool {
        !self.is_zero() && !self.is_limit()
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// Predecessor of a successor ordinal; `None` for 0 and limits.
    pub fn pred(&self) -> Option<Ordinal> {
        let (e, c) = self.terms.last()?;
        if !e.is_zero() {
            return None;
        }
        let mut terms = self.terms.clone();
        if *c == 1 {
            terms.pop();
        } else {
            terms.last_mut().unwrap().1 = c - 1;
        }
        Some(Ordinal { terms })
    }

    /// Ordinal sum. Terms of `self` below `other`'s leading exponent are
    /// absorbed, per CNF addition.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some((lead, lead_coef)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> = Vec::new();
        for (e, c) in &self.terms {
            match e.cmp(lead) {
                Ordering::Greater => terms.push((e.clone(), *c)),
                Ordering::Equal => {
                    terms.push((e.clone(), c + lead_coef));
                    terms.extend(other.terms[1..].iter().cloned());
                    return Ordinal { terms };
                }
                Ordering::Less => break,
            }
        }
        terms.extend(other.terms.iter().cloned());
        Ordinal { terms }
    }

    /// Left subtraction: the unique `c` with `self + c == other`, or `None`
    /// when `other < self`.
    pub fn sub_from(&self, other: &Ordinal) -> Option<Ordinal> {
        let a = &self.terms;
        let b = &other.terms;
        for i in 0..a.len() {
            let Some(bt) = b.get(i) else {
                // a has strictly more identical-prefix terms -> a > b
                return None;
            };
            let at = &a[i];
            if at == bt {
                continue;
            }
            return match at.0.cmp(&bt.0) {
                Ordering::Less => Some(Ordinal {
                    terms: b[i..].to_vec(),
                }),
                Ordering::Greater => None,
                Ordering::Equal => {
                    if at.1 < bt.1 {
                        let mut terms = vec![(at.0.clone(), bt.1 - at.1)];
                        terms.extend(b[i + 1..].iter().cloned());
                        Some(Ordinal { terms })
                    } else {
                        None
                    }
                }
            };
        }
        Some(Ordinal {
            terms: b[a.len()..].to_vec(),
        })
    }

    /// The least limit ordinal strictly above `self`.
    pub fn next_limit(&self) -> Ordinal {
        self.next_limit_at(1)
    }

    /// The least multiple of ω^k strictly above `self`, for k ≥ 1.
    pub fn next_limit_at(&self, k: u32) -> Ordinal {
        let threshold = Ordinal::from_nat(u64::from(k));
        let terms = self
            .terms
            .iter()
            .take_while(|(e, _)| e >= &threshold)
            .cloned()
            .collect();
        Ordinal { terms }.add(&threshold.omega_power())
    }

    /// Ordinal product, kept internal: only the pairing machinery needs it.
    fn mul(&self, other: &Ordinal) -> Ordinal {
        if self.is_zero() || other.is_zero() {
            return Ordinal::zero();
        }
        let lead_exp = &self.terms[0].0;
        let mut acc = Ordinal::zero();
        for (f, d) in &other.terms {
            if f.is_zero() {
                // a·d = ω^e1·(c1·d) + tail(a)
                let mut terms = self.terms.clone();
                let c = u128::from(terms[0].1) * u128::from(*d);
                terms[0].1 = u64::try_from(c).expect("coefficient overflow in ordinal product");
                acc = acc.add(&Ordinal { terms });
            } else {
                // a·ω^f·d = ω^(e1+f)·d
                let t = Ordinal {
                    terms: vec![(lead_exp.add(f), *d)],
                };
                acc = acc.add(&t);
            }
        }
        acc
    }

    /// Order type of the set of Gödel-ordered pairs `(x, y)` with
    /// `max(x, y) < self` (the "Gödel square" of this ordinal).
    fn godel_square(&self) -> Ordinal {
        if self.is_zero() {
            return Ordinal::zero();
        }
        let (alpha, c) = (&self.terms[0].0, self.terms[0].1);
        if alpha.is_zero() {
            // finite m = c: square is c²
            let sq = u128::from(c) * u128::from(c);
            return Ordinal::from_nat(u64::try_from(sq).expect("coefficient overflow in pairing"));
        }
        // g(ω^α·c) = g(ω^α) + ω^(α·2)·(c-1)
        let mut out = godel_square_of_power(alpha);
        if c > 1 {
            let alpha2 = alpha.add(alpha);
            out = out.add(&Ordinal {
                terms: vec![(alpha2, c - 1)],
            });
        }
        // remainder ρ < ω^α contributes Σ_{ξ<ρ} ((ω^α·c + ξ)·2 + 1)
        //   = ω^α·2c·ρ, plus ρ itself when ρ is a successor
        let rho = Ordinal {
            terms: self.terms[1..].to_vec(),
        };
        if !rho.is_zero() {
            let theta = Ordinal {
                terms: vec![(alpha.clone(), 2 * c)],
            };
            out = out.add(&theta.mul(&rho));
            if rho.is_successor() {
                out = out.add(&rho);
            }
        }
        out
    }
}

/// g(ω^α): 1 for α = 0; ω^(α₀·2+1) for α = α₀+1; ω^(sup_{β<α} β·2) at limits.
fn godel_square_of_power(alpha: &Ordinal) -> Ordinal {
    if alpha.is_zero() {
        return Ordinal::one();
    }
    if let Some(a0) = alpha.pred() {
        let exp = a0.add(&a0).succ();
        return exp.omega_power();
    }
    exp_sup_double(alpha).omega_power()
}

/// sup_{β<α} β·2 for a limit ordinal α.
fn exp_sup_double(alpha: &Ordinal) -> Ordinal {
    let (e, d) = (&alpha.terms[0].0, alpha.terms[0].1);
    let sigma = Ordinal {
        terms: alpha.terms[1..].to_vec(),
    };
    if sigma.is_zero() {
        if d == 1 {
            // ω^e is additively closed
            alpha.clone()
        } else {
            Ordinal {
                terms: vec![(e.clone(), 2 * d - 1)],
            }
        }
    } else {
        Ordinal {
            terms: vec![(e.clone(), 2 * d)],
        }
        .add(&sigma)
    }
}

/// Comparison outcome of [`compare`]; a plain re-export of `Ordering` under
/// domain naming is not worth a new type.
pub fn compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

impl Default for Ordinal {
    fn default() -> Self {
        Ordinal::zero()
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (x, y) in self.terms.iter().zip(other.terms.iter()) {
            match x.0.cmp(&y.0) {
                Ordering::Equal => {}
                ord => return ord,
            }
            match x.1.cmp(&y.1) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

/// Gödel pairing: the rank of `(a, b)` among all ordinal pairs ordered by
/// maximum, then lexicographically.
pub fn pair(a: &Ordinal, b: &Ordinal) -> Ordinal {
    if a < b {
        // block of pairs with max = b starts with (x, b) for x < b
        b.godel_square().add(a)
    } else {
        // (a, y) entries sit after the a-many pairs (x, a), x < a
        a.godel_square().add(a).add(b)
    }
}

/// Exact inverse of [`pair`].
pub fn unpair(z: &Ordinal) -> (Ordinal, Ordinal) {
    // m = the largest ordinal with g(m) <= z
    let m = max_ordinal_satisfying(z, &|cand| &cand.godel_square() <= z);
    let offset = m
        .godel_square()
        .sub_from(z)
        .expect("godel square exceeds pairing value");
    if offset < m {
        (offset, m)
    } else {
        let second = m.sub_from(&offset).expect("pairing offset out of block");
        (m, second)
    }
}

/// Largest `m <= hi` satisfying an antitone predicate (one closed downward:
/// `pred(m)` and `m' <= m` imply `pred(m')`). `pred(0)` must hold.
fn max_ordinal_satisfying(hi: &Ordinal, pred: &dyn Fn(&Ordinal) -> bool) -> Ordinal {
    debug_assert!(pred(&Ordinal::zero()));
    let mut acc = Ordinal::zero();
    let mut exp_cap: Option<Ordinal> = None;
    loop {
        // largest next exponent e (strictly below the previous term's) such
        // that acc + ω^e stays within bounds and satisfies pred
        let exp_ok = |e: &Ordinal| -> bool {
            if let Some(cap) = &exp_cap {
                if e >= cap {
                    return false;
                }
            }
            let cand = acc.add(&e.omega_power());
            &cand <= hi && pred(&cand)
        };
        if !exp_ok(&Ordinal::zero()) {
            return acc;
        }
        let e_hi = match hi.terms.first() {
            None => return acc,
            Some((e, _)) => e.clone(),
        };
        let e = max_ordinal_satisfying(&e_hi, &exp_ok);
        // largest coefficient for this exponent, by doubling then bisection
        let coef_ok = |c: u64| -> bool {
            let cand = acc.add(&Ordinal {
                terms: vec![(e.clone(), c)],
            });
            &cand <= hi && pred(&cand)
        };
        let mut lo = 1u64;
        let mut step = 1u64;
        while coef_ok(lo + step) {
            lo += step;
            step = step.saturating_mul(2);
        }
        let mut bad = lo + step;
        while bad - lo > 1 {
            let mid = lo + (bad - lo) / 2;
            if coef_ok(mid) {
                lo = mid;
            } else {
                bad = mid;
            }
        }
        acc = acc.add(&Ordinal {
            terms: vec![(e.clone(), lo)],
        });
        exp_cap = Some(e);
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("ordinal syntax error at byte {position}: {message}")]
pub struct ParseOrdinalError {
    pub position: usize,
    pub message: String,
}

struct OrdinalParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> OrdinalParser<'a> {
    fn new(src: &'a str) -> Self {
        OrdinalParser { src, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> ParseOrdinalError {
        ParseOrdinalError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, ParseOrdinalError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.error("number too large"))
    }

    fn ordinal(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.eat('+') {
                self.skip_ws();
                let t = self.term()?;
                acc = acc.add(&t);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        self.skip_ws();
        match self.peek() {
            Some('w') => {
                self.pos += 1;
                let exp = if self.eat('^') {
                    self.exponent()?
                } else {
                    Ordinal::one()
                };
                let coef = if self.eat('*') { self.nat()? } else { 1 };
                if coef == 0 {
                    return Err(self.error("coefficient must be positive"));
                }
                if exp.is_zero() {
                    return Ok(Ordinal::from_nat(coef));
                }
                Ok(Ordinal {
                    terms: vec![(exp, coef)],
                })
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::from_nat(self.nat()?)),
            _ => Err(self.error("expected `w` or a number")),
        }
    }

    fn exponent(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.ordinal()?;
                self.skip_ws();
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some('w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::from_nat(self.nat()?)),
            _ => Err(self.error("expected exponent")),
        }
    }
}

impl FromStr for Ordinal {
    type Err = ParseOrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = OrdinalParser::new(s);
        let out = p.ordinal()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(out)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            if e == &Ordinal::one() {
                write!(f, "w")?;
            } else if let Some(n) = e.nat_value() {
                write!(f, "w^{n}")?;
            } else if e == &Ordinal::omega() {
                write!(f, "w^w")?;
            } else {
                write!(f, "w^({e})")?;
            }
            if *c != 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
