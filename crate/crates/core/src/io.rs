//! Preorder input formats.
//!
//! Text: a first line `n <int>`, then one `i j` pair per line (1-based);
//! blank lines and lines starting with `#` are ignored. JSON:
//! `{"n": int, "pairs": [[i, j], ...]}`, also 1-based.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{Closure, PosetError, Preorder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}: `{token}`")]
    Token { line: usize, token: String, message: &'static str },
    #[error("missing `n <int>` header")]
    MissingHeader,
    #[error("invalid JSON preorder: {0}")]
    Json(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

#[derive(Debug, Serialize, Deserialize)]
struct PreorderJson {
    n: usize,
    pairs: Vec<[usize; 2]>,
}

fn token_error(line: usize, token: &str, message: &'static str) -> ParseError {
    ParseError::Token {
        line,
        token: token.to_string(),
        message,
    }
}

fn to_zero_based(n: usize, i: usize, line: usize, token: &str) -> Result<usize, ParseError> {
    if i == 0 || i > n {
        return Err(token_error(line, token, "index out of range"));
    }
    Ok(i - 1)
}

pub fn parse_preorder_text(input: &str) -> Result<Closure, ParseError> {
    let mut n: Option<usize> = None;
    let mut pairs = Vec::new();
    for (k, raw) in input.lines().enumerate() {
        let line = k + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let Some(size) = n else {
            if tokens[0] != "n" {
                return Err(token_error(line, tokens[0], "expected `n`"));
            }
            let tok = tokens.get(1).ok_or(ParseError::MissingHeader)?;
            if tokens.len() > 2 {
                return Err(token_error(line, tokens[2], "unexpected token"));
            }
            let size: usize = tok.parse().map_err(|_| token_error(line, tok, "expected a positive integer"))?;
            if size == 0 {
                return Err(token_error(line, tok, "expected a positive integer"));
            }
            n = Some(size);
            continue;
        };
        if tokens.len() != 2 {
            let tok = tokens.get(2).unwrap_or(&tokens[0]);
            return Err(token_error(line, tok, "expected a pair `i j`"));
        }
        let mut pair = [0; 2];
        for (slot, tok) in pair.iter_mut().zip(&tokens) {
            let i: usize = tok.parse().map_err(|_| token_error(line, tok, "expected an integer"))?;
            *slot = to_zero_based(size, i, line, tok)?;
        }
        pairs.push((pair[0], pair[1]));
    }
    let n = n.ok_or(ParseError::MissingHeader)?;
    Ok(Preorder::closure(n, &pairs)?)
}

pub fn parse_preorder_json(input: &str) -> Result<Closure, ParseError> {
    let raw: PreorderJson = serde_json::from_str(input).map_err(|e| ParseError::Json(e.to_string()))?;
    if raw.n == 0 {
        return Err(ParseError::Poset(PosetError::EmptyGroundSet));
    }
    let mut pairs = Vec::with_capacity(raw.pairs.len());
    for (k, [i, j]) in raw.pairs.into_iter().enumerate() {
        for x in [i, j] {
            if x == 0 || x > raw.n {
                return Err(ParseError::Json(format!("pair {}: index {x} out of range 1..={}", k + 1, raw.n)));
            }
        }
        pairs.push((i - 1, j - 1));
    }
    Ok(Preorder::closure(raw.n, &pairs)?)
}

/// JSON when the first non-blank character is `{`, text otherwise.
pub fn parse_preorder(input: &str) -> Result<Closure, ParseError> {
    if input.trim_start().starts_with('{') {
        parse_preorder_json(input)
    } else {
        parse_preorder_text(input)
    }
}

/// Text form listing every non-diagonal related pair.
pub fn preorder_to_text(p: &Preorder) -> String {
    let mut out = format!("n {}\n", p.n());
    for (i, j) in p.pairs() {
        if i != j {
            out.push_str(&format!("{} {}\n", i + 1, j + 1));
        }
    }
    out
}

pub fn preorder_to_json(p: &Preorder) -> String {
    let raw = PreorderJson {
        n: p.n(),
        pairs: p.pairs().into_iter().filter(|(i, j)| i != j).map(|(i, j)| [i + 1, j + 1]).collect(),
    };
    serde_json::to_string(&raw).expect("plain data serializes")
}
