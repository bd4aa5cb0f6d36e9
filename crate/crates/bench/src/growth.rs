//! Growth expressions in one variable `n`, such as `100 n^2 ln n` or
//! `2n ln(2n) + n ln^3 n`.
//!
//! Grammar: sums of products; juxtaposition multiplies; `^` binds tightest;
//! `ln`/`log` are natural logarithms, `lg` is base 2, `sqrt` is the square
//! root. A function name may carry a power (`ln^3 n` means `(ln n)^3`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse growth expression {text:?}: {reason}")]
pub struct GrowthError {
    pub text: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Num(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Func {
    Ln,
    Lg,
    Sqrt,
}

impl Expr {
    fn eval(&self, n: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => n,
            Expr::Add(a, b) => a.eval(n) + b.eval(n),
            Expr::Mul(a, b) => a.eval(n) * b.eval(n),
            Expr::Pow(a, b) => a.eval(n).powf(b.eval(n)),
            Expr::Call(Func::Ln, a) => a.eval(n).ln(),
            Expr::Call(Func::Lg, a) => a.eval(n).log2(),
            Expr::Call(Func::Sqrt, a) => a.eval(n).sqrt(),
        }
    }
}

/// A parsed expression that keeps its source text for display and serialization.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Growth {
    text: String,
    expr: Expr,
}

impl PartialEq for Growth {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Growth {
    pub fn constant(v: u64) -> Self {
        Self {
            text: v.to_string(),
            expr: Expr::Num(v as f64),
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn eval(&self, n: f64) -> f64 {
        self.expr.eval(n)
    }

    /// Value rounded up to an integer, saturating at the type's bounds.
    pub fn eval_ceil(&self, n: f64) -> u64 {
        let v = self.eval(n).ceil();
        if v.is_nan() || v <= 0.0 {
            0
        } else if v >= u64::MAX as f64 {
            u64::MAX
        } else {
            v as u64
        }
    }

    /// Resolves common aliases (`nlogn`, `n2logn`, ...) before parsing.
    pub fn parse_bound(text: &str) -> Result<Self, GrowthError> {
        let aliased = match text.trim() {
            "nlogn" | "n log n" => "n ln n",
            "n2" => "n^2",
            "n2logn" => "n^2 ln n",
            "n3" => "n^3",
            other => other,
        };
        let mut g: Growth = aliased.parse()?;
        g.text = text.trim().to_string();
        Ok(g)
    }
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl From<Growth> for String {
    fn from(g: Growth) -> String {
        g.text
    }
}

impl TryFrom<String> for Growth {
    type Error = GrowthError;

    fn try_from(s: String) -> Result<Self, GrowthError> {
        s.parse()
    }
}

impl FromStr for Growth {
    type Err = GrowthError;

    fn from_str(s: &str) -> Result<Self, GrowthError> {
        let err = |reason: String| GrowthError {
            text: s.to_string(),
            reason,
        };
        let tokens = tokenize(s).map_err(err)?;
        let mut p = Parser { tokens, pos: 0 };
        let expr = p.sum().map_err(err)?;
        if p.pos != p.tokens.len() {
            return Err(err(format!("unexpected {:?}", p.tokens[p.pos])));
        }
        Ok(Self {
            text: s.trim().to_string(),
            expr,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Var,
    Func(Func),
    Plus,
    Star,
    Caret,
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\u{b7}' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::Open);
                i += 1;
            }
            ')' => {
                out.push(Token::Close);
                i += 1;
            }
            d if d.is_ascii_digit() || d == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == 'e' && i + 1 < chars.len() && chars[i + 1].is_ascii_digit()) {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token::Num(text.parse().map_err(|_| format!("bad number {text:?}"))?));
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(match word.as_str() {
                    "n" => Token::Var,
                    "ln" | "log" => Token::Func(Func::Ln),
                    "lg" => Token::Func(Func::Lg),
                    "sqrt" => Token::Func(Func::Sqrt),
                    // `nln` and similar run-together forms are not accepted.
                    _ => return Err(format!("unknown word {word:?}")),
                });
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    if out.is_empty() {
        return Err("empty expression".into());
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn sum(&mut self) -> Result<Expr, String> {
        let mut e = self.product()?;
        while self.peek() == Some(&Token::Plus) {
            self.pos += 1;
            e = Expr::Add(Box::new(e), Box::new(self.product()?));
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<Expr, String> {
        let mut e = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    e = Expr::Mul(Box::new(e), Box::new(self.power()?));
                }
                Some(Token::Num(_) | Token::Var | Token::Func(_) | Token::Open) => {
                    e = Expr::Mul(Box::new(e), Box::new(self.power()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn power(&mut self) -> Result<Expr, String> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let exp = self.atom()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        let tok = self.peek().cloned().ok_or("expression ends early")?;
        self.pos += 1;
        match tok {
            Token::Num(v) => Ok(Expr::Num(v)),
            Token::Var => Ok(Expr::Var),
            Token::Open => {
                let e = self.sum()?;
                if self.peek() != Some(&Token::Close) {
                    return Err("missing ')'".into());
                }
                self.pos += 1;
                Ok(e)
            }
            Token::Func(f) => {
                let mut power = None;
                if self.peek() == Some(&Token::Caret) {
                    self.pos += 1;
                    power = Some(self.atom()?);
                }
                let arg = self.power()?;
                let call = Expr::Call(f, Box::new(arg));
                Ok(match power {
                    Some(p) => Expr::Pow(Box::new(call), Box::new(p)),
                    None => call,
                })
            }
            other => Err(format!("unexpected {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Growth {
        s.parse().unwrap()
    }

    #[test]
    fn evaluates_common_forms() {
        let n = 64.0f64;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1.0);
        assert!(close(g("100 n^2 ln n").eval(n), 100.0 * n * n * n.ln()));
        assert!(close(g("n ln^3 n").eval(n), n * n.ln().powi(3)));
        assert!(close(g("2n ln(2n) + n ln^3 n").eval(n), 2.0 * n * (2.0 * n).ln() + n * n.ln().powi(3)));
        assert!(close(g("n^2.5").eval(n), n.powf(2.5)));
        assert!(close(g("2.5 lg n").eval(n), 15.0));
        assert!(close(g("64 n^4 2^3").eval(2.0), 64.0 * 16.0 * 8.0));
        assert!(close(g("3 * (n + 1)").eval(n), 195.0));
        assert_eq!(g("1e5").eval_ceil(n), 100_000);
        assert_eq!(g("n ln n").eval_ceil(1.0), 0);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "n +", "(n", "foo n", "n $"] {
            assert!(bad.parse::<Growth>().is_err(), "{bad}");
        }
    }

    #[test]
    fn aliases() {
        let n = 100.0f64;
        assert_eq!(Growth::parse_bound("nlogn").unwrap().eval(n), n * n.ln());
        assert_eq!(Growth::parse_bound("n2").unwrap().eval(n), n * n);
        assert_eq!(Growth::parse_bound("nlogn").unwrap().text(), "nlogn");
    }
}
