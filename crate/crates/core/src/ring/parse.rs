// SPDX-License-Identifier: Apache-2.0

//! Ring-spec grammar:
//!
//! ```text
//! ring  := local ( "*" local )*
//! local := "Z" uint | "F" uint | "F" uint "[x]/(x^" uint ")"
//! ```

use super::local::LocalRingSpec;
use super::numtheory::{factorize, is_prime, prime_power};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an unsigned integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .or_else(|_| self.err("integer too large"))
    }

    fn local(&mut self, out: &mut Vec<LocalRingSpec>) -> Result<()> {
        if self.eat("Z") {
            let n = self.uint()?;
            if n < 2 {
                return self.err("Z_n needs n >= 2");
            }
            for (p, a) in factorize(n) {
                out.push(LocalRingSpec::zmod(p, a)?);
            }
            Ok(())
        } else if self.eat("F") {
            let q = self.uint()?;
            if self.eat("[x]/(x^") {
                let k = self.uint()?;
                if !self.eat(")") {
                    return self.err("expected ')'");
                }
                if !is_prime(q) {
                    return Err(Error::NotPrime(q));
                }
                if k == 0 || k > u32::MAX as u64 {
                    return self.err("truncation degree must be at least 1");
                }
                out.push(if k == 1 {
                    LocalRingSpec::field(q, 1)?
                } else {
                    LocalRingSpec::truncated(q, k as u32)?
                });
                Ok(())
            } else {
                let (p, s) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
                out.push(LocalRingSpec::field(p, s)?);
                Ok(())
            }
        } else {
            self.err("expected 'Z' or 'F'")
        }
    }
}

/// Parse a ring spec into unsorted local factors (`Z_n` already CRT-split).
pub(crate) fn parse_factors(text: &str) -> Result<Vec<LocalRingSpec>> {
    let mut cur = Cursor {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    cur.skip_ws();
    cur.local(&mut out)?;
    loop {
        cur.skip_ws();
        if cur.pos == cur.src.len() {
            break;
        }
        if !cur.eat("*") {
            return cur.err("expected '*' or end of input");
        }
        cur.skip_ws();
        cur.local(&mut out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::LocalKind;

    #[test]
    fn crt_split() {
        let f = parse_factors("Z45").unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!((f[0].kind, f[0].order()), (LocalKind::ZmodPK, 9));
        assert_eq!((f[1].kind, f[1].order()), (LocalKind::ZmodPK, 5));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_factors("F6"), Err(Error::NotPrimePower(6)));
        assert_eq!(parse_factors("F9[x]/(x^2)"), Err(Error::NotPrime(9)));
        assert!(matches!(parse_factors("G5"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_factors("F5*"), Err(Error::Parse { .. })));
        assert!(matches!(parse_factors("F5 F7"), Err(Error::Parse { .. })));
        assert!(matches!(parse_factors("Z1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_factors(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn whitespace_and_truncated() {
        let f = parse_factors(" F3 *  F5[x]/(x^2) ").unwrap();
        assert_eq!(f[1].kind, LocalKind::TruncatedPoly);
        assert_eq!(f[1].order(), 25);
        // even rings parse
        assert!(parse_factors("F4*Z8").is_ok());
    }
}
