//! Layered tensor terms over the signature `{id, mu, alpha, sigma, eta}`.
//!
//! A term is a sequence of layers, each a tensor word of generators; layer
//! boundaries carry the wires. Two terms denote the same plane diagram when
//! they differ by sliding independent boxes across layers (the interchange
//! law); [`Term::normal_form`] computes a canonical representative, so
//! normalized terms compare by plain equality.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TermError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("arity mismatch: layer expects {expected} wires, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("boundary mismatch: {0}")]
    Boundary(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("term is not a plane diagram")]
    NotPlanar,
}

/// Generators: identity wire, multiplication, the twisting map, the wire
/// swap, and the distinguished unit element.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Gen {
    Id,
    Mu,
    Alpha,
    Sigma,
    Eta,
}

impl Gen {
    pub fn arity(self) -> (usize, usize) {
        match self {
            Gen::Id => (1, 1),
            Gen::Mu => (2, 1),
            Gen::Alpha => (1, 1),
            Gen::Sigma => (2, 2),
            Gen::Eta => (0, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gen::Id => "id",
            Gen::Mu => "mu",
            Gen::Alpha => "alpha",
            Gen::Sigma => "sigma",
            Gen::Eta => "eta",
        }
    }

    fn from_name(s: &str) -> Option<Gen> {
        match s {
            "id" => Some(Gen::Id),
            "mu" => Some(Gen::Mu),
            "alpha" => Some(Gen::Alpha),
            "sigma" => Some(Gen::Sigma),
            "eta" => Some(Gen::Eta),
            _ => None,
        }
    }
}

/// A layered tensor term. `inputs` is the wire count entering the first
/// layer; each layer consumes the wires of the previous boundary.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term {
    inputs: usize,
    layers: Vec<Vec<Gen>>,
}

impl Term {
    /// Validates the layer chain against the input arity.
    pub fn new(inputs: usize, layers: Vec<Vec<Gen>>) -> Result<Self, TermError> {
        let mut wires = inputs;
        for layer in &layers {
            let consumed: usize = layer.iter().map(|g| g.arity().0).sum();
            if consumed != wires {
                return Err(TermError::Arity {
                    expected: wires,
                    got: consumed,
                });
            }
            wires = layer.iter().map(|g| g.arity().1).sum();
        }
        Ok(Term { inputs, layers })
    }

    /// The identity on `k` wires (no layers).
    pub fn identity(k: usize) -> Self {
        Term {
            inputs: k,
            layers: Vec::new(),
        }
    }

    /// A single generator as a one-layer term.
    pub fn generator(g: Gen) -> Self {
        Term {
            inputs: g.arity().0,
            layers: vec![vec![g]],
        }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.layers
            .last()
            .map(|l| l.iter().map(|g| g.arity().1).sum())
            .unwrap_or(self.inputs)
    }

    pub fn layers(&self) -> &[Vec<Gen>] {
        &self.layers
    }

    /// Number of non-identity generator occurrences.
    pub fn size(&self) -> usize {
        self.layers
            .iter()
            .flatten()
            .filter(|g| !matches!(g, Gen::Id))
            .count()
    }

    /// Horizontal juxtaposition.
    pub fn tensor(&self, other: &Term) -> Term {
        // pad the shorter factor with identity layers at the top
        let depth = self.layers.len().max(other.layers.len());
        let mut layers = Vec::with_capacity(depth);
        let mut left_wires = self.inputs;
        let mut right_wires = other.inputs;
        for level in 0..depth {
            let mut layer = Vec::new();
            match self.layers.get(level) {
                Some(l) => {
                    layer.extend(l.iter().copied());
                    left_wires = l.iter().map(|g| g.arity().1).sum();
                }
                None => layer.extend(std::iter::repeat_n(Gen::Id, left_wires)),
            }
            match other.layers.get(level) {
                Some(l) => {
                    layer.extend(l.iter().copied());
                    right_wires = l.iter().map(|g| g.arity().1).sum();
                }
                None => layer.extend(std::iter::repeat_n(Gen::Id, right_wires)),
            }
            layers.push(layer);
        }
        Term {
            inputs: self.inputs + other.inputs,
            layers,
        }
    }

    /// Vertical composition, `self` first.
    pub fn then(&self, other: &Term) -> Result<Term, TermError> {
        if self.outputs() != other.inputs {
            return Err(TermError::Boundary(format!(
                "{} outputs into {} inputs",
                self.outputs(),
                other.inputs
            )));
        }
        let mut layers = self.layers.clone();
        layers.extend(other.layers.iter().cloned());
        Ok(Term {
            inputs: self.inputs,
            layers,
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.layers.is_empty() {
            let ids = vec!["id"; self.inputs];
            return write!(f, "{}", ids.join(" # "));
        }
        let rendered: Vec<String> = self
            .layers
            .iter()
            .map(|layer| {
                let words: Vec<&str> = layer.iter().map(|g| g.name()).collect();
                if layer.len() == 1 {
                    words[0].to_string()
                } else {
                    format!("({})", words.join(" # "))
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" ; "))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}->{}] {}", self.inputs, self.outputs(), self)
    }
}

/// Parses the term grammar: generator names, `;` for sequential composition
/// (binds tighter) and `#` for tensoring, with parentheses. Input arities of
/// bare `id`/`alpha`/... are their generator arities.
pub fn parse_term(text: &str) -> Result<Term, TermError> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let term = parse_tensor(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(TermError::Parse(format!(
            "unexpected token {:?}",
            tokens[pos]
        )));
    }
    Ok(term)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Name(String),
    Semi,
    Hash,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Token>, TermError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            ';' => {
                chars.next();
                out.push(Token::Semi);
            }
            '#' => {
                chars.next();
                out.push(Token::Hash);
            }
            '(' => {
                chars.next();
                out.push(Token::Open);
            }
            ')' => {
                chars.next();
                out.push(Token::Close);
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Name(name));
            }
            other => return Err(TermError::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

/// tensor := seq ('#' seq)*
fn parse_tensor(tokens: &[Token], pos: &mut usize) -> Result<Term, TermError> {
    let mut acc = parse_seq(tokens, pos)?;
    while tokens.get(*pos) == Some(&Token::Hash) {
        *pos += 1;
        let rhs = parse_seq(tokens, pos)?;
        acc = acc.tensor(&rhs);
    }
    Ok(acc)
}

/// seq := atom (';' atom)*
fn parse_seq(tokens: &[Token], pos: &mut usize) -> Result<Term, TermError> {
    let mut acc = parse_atom(tokens, pos)?;
    while tokens.get(*pos) == Some(&Token::Semi) {
        *pos += 1;
        let rhs = parse_atom(tokens, pos)?;
        acc = acc.then(&rhs)?;
    }
    Ok(acc)
}

fn parse_atom(tokens: &[Token], pos: &mut usize) -> Result<Term, TermError> {
    match tokens.get(*pos) {
        Some(Token::Name(name)) => {
            *pos += 1;
            let g =
                Gen::from_name(name).ok_or_else(|| TermError::UnknownGenerator(name.clone()))?;
            Ok(Term::generator(g))
        }
        Some(Token::Open) => {
            *pos += 1;
            let inner = parse_tensor(tokens, pos)?;
            if tokens.get(*pos) != Some(&Token::Close) {
                return Err(TermError::Parse("missing closing parenthesis".into()));
            }
            *pos += 1;
            Ok(inner)
        }
        other => Err(TermError::Parse(format!(
            "expected a term, found {other:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_arities() {
        let t = parse_term("mu").unwrap();
        assert_eq!((t.inputs(), t.outputs()), (2, 1));

        let t = parse_term("(mu # id) ; mu").unwrap();
        assert_eq!((t.inputs(), t.outputs()), (3, 1));

        // sequential composition binds tighter than tensor
        let t = parse_term("(mu ; alpha # id) ; mu").unwrap();
        assert_eq!((t.inputs(), t.outputs()), (3, 1));

        let t = parse_term("sigma ; sigma").unwrap();
        assert_eq!((t.inputs(), t.outputs()), (2, 2));

        assert!(parse_term("mu ; sigma ; mu").is_err()); // 1 into 2
        assert!(parse_term("bogus").is_err());
        assert!(parse_term("(mu").is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in ["mu", "(mu # id) ; mu", "(mu ; alpha # id) ; mu", "eta # id"] {
            let t = parse_term(text).unwrap();
            let again = parse_term(&t.to_string()).unwrap();
            assert_eq!(t, again, "{text}");
        }
    }
}
