//! Surface syntax for ∈-formulas.
//!
//! ASCII grammar, loosest binding first: `<->`, `->`, `|`, `&`, `~`, atoms.
//! Quantifiers are written `A v.` / `E v.` / `A v in t.` / `E v in t.` and
//! their body extends as far right as possible. Atoms are `x = y`, `x in y`,
//! and the sugar `x sub y`, which desugars to a bounded universal.

use thiserror::Error;

use super::{Formula, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("formula syntax error at byte {position}: {message}")]
pub struct ParseFormulaError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    KwA,
    KwE,
    KwIn,
    KwSub,
    Eq,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Dot,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>, ParseFormulaError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '=' => {
                i += 1;
                Token::Eq
            }
            '~' => {
                i += 1;
                Token::Not
            }
            '&' => {
                i += 1;
                Token::And
            }
            '|' => {
                i += 1;
                Token::Or
            }
            '.' => {
                i += 1;
                Token::Dot
            }
            '(' => {
                i += 1;
                Token::LParen
            }
            ')' => {
                i += 1;
                Token::RParen
            }
            '-' => {
                if src[i..].starts_with("->") {
                    i += 2;
                    Token::Implies
                } else {
                    return Err(ParseFormulaError {
                        position: i,
                        message: "stray `-`".into(),
                    });
                }
            }
            '<' => {
                if src[i..].starts_with("<->") {
                    i += 3;
                    Token::Iff
                } else {
                    return Err(ParseFormulaError {
                        position: i,
                        message: "stray `<`".into(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                match &src[start..i] {
                    "A" => Token::KwA,
                    "E" => Token::KwE,
                    "in" => Token::KwIn,
                    "sub" => Token::KwSub,
                    ident => Token::Ident(ident.to_string()),
                }
            }
            other => {
                return Err(ParseFormulaError {
                    position: i,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, start));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> ParseFormulaError {
        ParseFormulaError {
            position: self.here(),
            message: message.into(),
        }
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Token, what: &str) -> Result<(), ParseFormulaError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn var(&mut self) -> Result<Var, ParseFormulaError> {
        match self.advance() {
            Some(Token::Ident(s)) => Ok(Var::new(s)),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error("expected a variable"))
            }
        }
    }

    // expr := iff-chain; quantifiers appear at the unary level with maximal
    // body scope, so `A x. a & b` binds the whole conjunction.
    fn expr(&mut self) -> Result<Formula, ParseFormulaError> {
        let mut lhs = self.implies_expr()?;
        while self.peek() == Some(&Token::Iff) {
            self.pos += 1;
            let rhs = self.implies_expr()?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn implies_expr(&mut self) -> Result<Formula, ParseFormulaError> {
        let lhs = self.or_expr()?;
        if self.peek() == Some(&Token::Implies) {
            self.pos += 1;
            let rhs = self.implies_expr()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> Result<Formula, ParseFormulaError> {
        let mut lhs = self.and_expr()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            let rhs = self.and_expr()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Formula, ParseFormulaError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseFormulaError> {
        match self.peek() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(self.unary()?.not())
            }
            Some(Token::KwA) | Some(Token::KwE) => self.quantifier(),
            _ => self.atom(),
        }
    }

    fn quantifier(&mut self) -> Result<Formula, ParseFormulaError> {
        let universal = matches!(self.advance(), Some(Token::KwA));
        let v = self.var()?;
        let bound = if self.peek() == Some(&Token::KwIn) {
            self.pos += 1;
            Some(self.var()?)
        } else {
            None
        };
        self.expect(Token::Dot, "`.` after quantifier")?;
        let body = self.expr()?;
        Ok(match (universal, bound) {
            (true, None) => Formula::forall(v, body),
            (false, None) => Formula::exists(v, body),
            (true, Some(t)) => Formula::forall_in(v, t, body),
            (false, Some(t)) => Formula::exists_in(v, t, body),
        })
    }

    fn atom(&mut self) -> Result<Formula, ParseFormulaError> {
        if self.peek() == Some(&Token::LParen) {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect(Token::RParen, "`)`")?;
            return Ok(inner);
        }
        let a = self.var()?;
        match self.advance() {
            Some(Token::Eq) => Ok(Formula::Eq(a, self.var()?)),
            Some(Token::KwIn) => Ok(Formula::In(a, self.var()?)),
            Some(Token::KwSub) => Ok(Formula::subset(a, self.var()?)),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error("expected `=`, `in`, or `sub`"))
            }
        }
    }
}

pub fn parse(src: &str) -> Result<Formula, ParseFormulaError> {
    let tokens = tokenize(src)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: src.len(),
    };
    let f = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

/// Canonical rendering; `parse(render(f))` returns `f` structurally.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    render_prec(f, 1, &mut out);
    out
}

// binding strengths: quantifiers 0, <-> 1, -> 2, | 3, & 4, ~ 5, atoms 6
fn render_prec(f: &Formula, parent: u8, out: &mut String) {
    let own = match f {
        Formula::ForAll(..) | Formula::Exists(..) | Formula::ForAllIn(..) | Formula::ExistsIn(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(..) => 5,
        Formula::Eq(..) | Formula::In(..) => 6,
    };
    let parens = own < parent;
    if parens {
        out.push('(');
    }
    match f {
        Formula::Eq(a, b) => {
            out.push_str(&format!("{a} = {b}"));
        }
        Formula::In(a, b) => {
            out.push_str(&format!("{a} in {b}"));
        }
        Formula::Not(s) => {
            out.push('~');
            out.push(' ');
            render_prec(s, 5, out);
        }
        Formula::And(a, b) => {
            render_prec(a, 4, out);
            out.push_str(" & ");
            render_prec(b, 5, out);
        }
        Formula::Or(a, b) => {
            render_prec(a, 3, out);
            out.push_str(" | ");
            render_prec(b, 4, out);
        }
        Formula::Implies(a, b) => {
            render_prec(a, 3, out);
            out.push_str(" -> ");
            render_prec(b, 2, out);
        }
        Formula::Iff(a, b) => {
            render_prec(a, 1, out);
            out.push_str(" <-> ");
            render_prec(b, 2, out);
        }
        Formula::ForAll(v, s) => {
            out.push_str(&format!("A {v}. "));
            render_prec(s, 0, out);
        }
        Formula::Exists(v, s) => {
            out.push_str(&format!("E {v}. "));
            render_prec(s, 0, out);
        }
        Formula::ForAllIn(v, t, s) => {
            out.push_str(&format!("A {v} in {t}. "));
            render_prec(s, 0, out);
        }
        Formula::ExistsIn(v, t, s) => {
            out.push_str(&format!("E {v} in {t}. "));
            render_prec(s, 0, out);
        }
    }
    if parens {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sub_desugars_to_bounded_forall() {
        let f = parse("A z. (z in y <-> z sub x)").unwrap();
        let expected = Formula::forall(
            "z",
            Formula::elem("z", "y").iff(Formula::forall_in("u", "z", Formula::elem("u", "x"))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("a in b & c in d | e = f").unwrap(),
            parse("(a in b & c in d) | e = f").unwrap()
        );
        assert_eq!(
            parse("a = b -> c = d -> e = f").unwrap(),
            parse("a = b -> (c = d -> e = f)").unwrap()
        );
        assert_eq!(
            parse("~ a = b & c = d").unwrap(),
            parse("(~ a = b) & c = d").unwrap()
        );
    }

    #[test]
    fn quantifier_scope_is_maximal() {
        assert_eq!(
            parse("A x. x = x & x in y").unwrap(),
            parse("A x. (x = x & x in y)").unwrap()
        );
    }

    #[test]
    fn roundtrip_is_stable() {
        let samples = [
            "A z. (z in y <-> z sub x)",
            "E f. (f in x & ~ f = y)",
            "(A x. x = x) -> (E y. y in q)",
            "a = b <-> (c in d | ~ e = f)",
            "A v in t. E w. v in w",
        ];
        for s in samples {
            let f = parse(s).unwrap();
            let r = render(&f);
            let g = parse(&r).unwrap();
            assert_eq!(f, g, "roundtrip through `{r}`");
            assert_eq!(render(&g), r, "second render is stable");
        }
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse("E f. f : b <-> a").unwrap_err();
        assert_eq!(err.position, 7);
        assert!(parse("").is_err());
        assert!(parse("x =").is_err());
        assert!(parse("A . x = x").is_err());
        assert!(parse("x in y)").is_err());
    }
}
