//! Parsers for presentation spec strings and words.

use super::{GroupKind, GroupPresentation, Letter};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn error<T>(&self, expected: &str) -> Result<T> {
        let found = match self.rest().chars().next() {
            Some(ch) => format!("`{ch}`"),
            None => "end of input".to_string(),
        };
        Err(Error::Parse {
            position: self.pos,
            expected: expected.to_string(),
            found,
        })
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.error(&format!("`{token}`"))
        }
    }

    fn take_while<F: Fn(char) -> bool>(&mut self, pred: F) -> &'a str {
        let start = self.pos;
        while let Some(ch) = self.rest().chars().next() {
            if !pred(ch) {
                break;
            }
            self.pos += ch.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn ident(&mut self) -> Result<&'a str> {
        let first_ok = matches!(self.rest().chars().next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_');
        if !first_ok {
            return self.error("generator name");
        }
        Ok(self.take_while(|ch| ch.is_ascii_alphanumeric() || ch == '_'))
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        let digits = self.take_while(|ch| ch.is_ascii_digit());
        if digits.is_empty() {
            return self.error("unsigned integer");
        }
        digits.parse().map_err(|_| Error::Parse {
            position: start,
            expected: "integer that fits in 64 bits".into(),
            found: digits.to_string(),
        })
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        let start = self.pos;
        let v = self.uint()?;
        let v = i64::try_from(v).map_err(|_| Error::Parse {
            position: start,
            expected: "integer in range".into(),
            found: v.to_string(),
        })?;
        Ok(if neg { -v } else { v })
    }

    fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.error("end of input")
        }
    }
}

pub(super) fn parse_presentation(spec: &str) -> Result<GroupPresentation> {
    let mut cur = Cursor::new(spec.trim());
    let kind_start = cur.pos;
    let kind = cur.take_while(|ch| ch.is_ascii_alphabetic());
    cur.expect(":")?;
    let p = match kind {
        "free" => {
            let mut symbols: Vec<String> = Vec::new();
            loop {
                let name = cur.ident()?;
                if cur.eat("^") {
                    cur.expect("-1")?;
                    symbols.push(format!("{name}^-1"));
                } else {
                    symbols.push(name.to_string());
                }
                if !cur.eat(",") {
                    break;
                }
            }
            cur.finish()?;
            let refs: Vec<&str> = symbols.iter().map(String::as_str).collect();
            GroupPresentation::free(&refs)?
        }
        "abelian" => {
            cur.expect("n=")?;
            let n = cur.uint()? as usize;
            let lazy = if cur.eat(",") {
                cur.expect("lazy")?;
                true
            } else {
                false
            };
            cur.finish()?;
            GroupPresentation::free_abelian(n, lazy)?
        }
        "hypercube" => {
            cur.expect("n=")?;
            let n = cur.uint()? as usize;
            cur.finish()?;
            GroupPresentation::hypercube(n)?
        }
        "cyclicprod" => {
            cur.expect("q=")?;
            let mut q = vec![cur.uint()?];
            while cur.eat(",") {
                q.push(cur.uint()?);
            }
            cur.finish()?;
            let q: Vec<u32> = q
                .into_iter()
                .map(|x| u32::try_from(x).map_err(|_| Error::InvalidPresentation(format!("order {x} too large"))))
                .collect::<Result<_>>()?;
            GroupPresentation::cyclic_free_product(&q)?
        }
        "abelianrel" => {
            cur.expect("sq")?;
            cur.finish()?;
            GroupPresentation::abelian_with_relation()
        }
        _ => {
            return Err(Error::Parse {
                position: kind_start,
                expected: "one of `free`, `abelian`, `hypercube`, `cyclicprod`, `abelianrel`".into(),
                found: format!("`{kind}`"),
            })
        }
    };
    debug_assert!(!matches!(p.kind(), GroupKind::Free) || !p.delta().is_empty());
    Ok(p)
}

pub(super) fn parse_word(p: &GroupPresentation, text: &str) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    for token in text.split_whitespace() {
        let (name, exp) = match token.split_once('^') {
            Some((name, e)) => {
                let mut cur = Cursor::new(e);
                let exp = cur.int().map_err(|_| Error::UnknownSymbol(token.to_string()))?;
                if !cur.at_end() {
                    return Err(Error::UnknownSymbol(token.to_string()));
                }
                (name, exp)
            }
            None => (token, 1),
        };
        if name == "e" {
            continue;
        }
        let base = p
            .base_names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        out.push(Letter { base, exp });
    }
    Ok(out)
}
