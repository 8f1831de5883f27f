//! Text form of an index: `N=<int>;m=<int>;n=<int>(,<int>)*;xi=<int>(,<int>)*`,
//! where `xi` lists the `d+1` twist exponents of `ζ_N`.

use crate::error::{Error, Result};
use crate::harmonic::MhsIndex;

pub fn render_index(index: &MhsIndex) -> String {
    let join = |v: Vec<String>| v.join(",");
    format!(
        "N={};m={};n={};xi={}",
        index.level(),
        index.bound(),
        join(index.weights().iter().map(u32::to_string).collect()),
        join(index.twist_exponents().iter().map(u64::to_string).collect()),
    )
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn expect(&mut self, literal: &str) -> Result<()> {
        if self.text[self.pos..].starts_with(literal) {
            self.pos += literal.len();
            Ok(())
        } else {
            self.err(format!("expected `{literal}`"))
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn int(&mut self, allow_negative: bool) -> Result<(usize, i64)> {
        let start = self.pos;
        let rest = &self.text[self.pos..];
        let mut len = 0;
        if allow_negative && rest.starts_with('-') {
            len = 1;
        }
        len += rest[len..].bytes().take_while(u8::is_ascii_digit).count();
        let token = &rest[..len];
        if token.is_empty() || token == "-" {
            return self.err("expected an integer");
        }
        match token.parse::<i64>() {
            Ok(v) => {
                self.pos += len;
                Ok((start, v))
            }
            Err(_) => self.err(format!("integer `{token}` out of range")),
        }
    }

    fn positive(&mut self, what: &str) -> Result<u64> {
        let (at, v) = self.int(false)?;
        if v <= 0 {
            return Err(Error::Parse {
                position: at,
                message: format!("{what} must be a positive integer"),
            });
        }
        Ok(v as u64)
    }

    fn list(&mut self, allow_negative: bool) -> Result<Vec<(usize, i64)>> {
        let mut out = vec![self.int(allow_negative)?];
        while self.peek() == Some(',') {
            self.pos += 1;
            out.push(self.int(allow_negative)?);
        }
        Ok(out)
    }
}

pub fn parse_index(text: &str) -> Result<MhsIndex> {
    let mut c = Cursor { text, pos: 0 };
    c.expect("N=")?;
    let level = c.positive("N")?;
    c.expect(";m=")?;
    let bound = c.positive("m")?;
    c.expect(";n=")?;
    let weights_at = c.pos;
    let mut weights = Vec::new();
    for (at, n) in c.list(false)? {
        if n <= 0 || n > u32::MAX as i64 {
            return Err(Error::Parse {
                position: at,
                message: "weights must be positive integers".into(),
            });
        }
        weights.push(n as u32);
    }
    c.expect(";xi=")?;
    let twists_at = c.pos;
    let twists: Vec<i64> = c.list(true)?.into_iter().map(|(_, k)| k).collect();
    if c.pos != text.len() {
        return c.err("unexpected trailing input");
    }
    if twists.len() != weights.len() + 1 {
        return Err(Error::Parse {
            position: twists_at,
            message: format!(
                "{} weights require {} twist exponents, got {}",
                weights.len(),
                weights.len() + 1,
                twists.len()
            ),
        });
    }
    MhsIndex::new(level, weights, &twists, bound).map_err(|e| Error::Parse {
        position: weights_at,
        message: e.to_string(),
    })
}
