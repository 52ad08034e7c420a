//! Textual syntax shared by the CLI and the tests: `a<j>` for accumulation
//! points, `r<j>:<k>` for regular points, `[p, q]` for arcs, and
//! `[arc; arc; ...]` for objects. Whitespace between tokens is ignored and
//! printing round-trips through parsing.

use thiserror::Error;

use crate::surface::{Arc, MarkedPoint, Obj};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("ParseError at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Cursor<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Cursor { input, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.input[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.bump() == Some(c) {
            Ok(())
        } else {
            self.pos = self.pos.saturating_sub(1);
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') || self.peek() == Some('+') {
            self.bump();
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.input[start..self.pos]
            .parse::<i64>()
            .map_err(|_| self.error("expected an integer"))
    }

    fn point(&mut self) -> Result<MarkedPoint, ParseError> {
        self.skip_ws();
        match self.bump() {
            Some('a') => {
                let j = self.integer()?;
                let j = u32::try_from(j).map_err(|_| self.error("interval index out of range"))?;
                Ok(MarkedPoint::acc(j))
            }
            Some('r') => {
                let j = self.integer()?;
                let j = u32::try_from(j).map_err(|_| self.error("interval index out of range"))?;
                self.expect(':')?;
                let k = self.integer()?;
                Ok(MarkedPoint::reg(j, k))
            }
            _ => Err(self.error("expected a point (a<j> or r<j>:<k>)")),
        }
    }

    fn arc(&mut self) -> Result<Arc, ParseError> {
        self.expect('[')?;
        let p = self.point()?;
        self.expect(',')?;
        let q = self.point()?;
        self.expect(']')?;
        Arc::new(p, q).map_err(|e| self.error(e.to_string()))
    }

    fn obj(&mut self) -> Result<Obj, ParseError> {
        self.expect('[')?;
        self.skip_ws();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(Obj::zero());
        }
        let mut arcs = vec![self.arc()?];
        loop {
            self.skip_ws();
            match self.bump() {
                Some(';') => arcs.push(self.arc()?),
                Some(']') => return Ok(Obj::from_arcs(arcs)),
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    return Err(self.error("expected ';' or ']'"));
                }
            }
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos == self.input.len() {
            Ok(())
        } else {
            Err(self.error("trailing input"))
        }
    }
}

pub fn parse_point(input: &str) -> Result<MarkedPoint, ParseError> {
    let mut c = Cursor::new(input);
    let p = c.point()?;
    c.finish()?;
    Ok(p)
}

pub fn parse_arc(input: &str) -> Result<Arc, ParseError> {
    let mut c = Cursor::new(input);
    let a = c.arc()?;
    c.finish()?;
    Ok(a)
}

pub fn parse_obj(input: &str) -> Result<Obj, ParseError> {
    let mut c = Cursor::new(input);
    let o = c.obj()?;
    c.finish()?;
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points() {
        assert_eq!(parse_point("a1"), Ok(MarkedPoint::acc(1)));
        assert_eq!(parse_point("r0:-3"), Ok(MarkedPoint::reg(0, -3)));
        assert_eq!(parse_point(" r2:14 "), Ok(MarkedPoint::reg(2, 14)));
        assert!(parse_point("b1").is_err());
        assert!(parse_point("r1").is_err());
        assert!(parse_point("a1 junk").is_err());
    }

    #[test]
    fn arcs_and_objects() {
        let a = parse_arc("[a1, r0:3]").unwrap();
        assert_eq!(a, Arc::new(MarkedPoint::acc(1), MarkedPoint::reg(0, 3)).unwrap());
        assert_eq!(parse_arc("[ r0:3 ,a1 ]").unwrap(), a);
        assert!(parse_arc("[r0:0, r0:1]").is_err());
        let o = parse_obj("[[a0,r1:0];[a0,r0:0]]").unwrap();
        assert_eq!(o.summands().len(), 2);
        assert_eq!(parse_obj("[]").unwrap(), Obj::zero());
        assert!(parse_obj("[[a0,r1:0];;]").is_err());
    }

    #[test]
    fn display_round_trip() {
        for text in ["a0", "r1:-7"] {
            let p = parse_point(text).unwrap();
            assert_eq!(parse_point(&p.to_string()), Ok(p));
        }
        let arc = parse_arc("[r0:2, a1]").unwrap();
        assert_eq!(parse_arc(&arc.to_string()), Ok(arc));
        let obj = parse_obj("[[r0:2, a1]; [a0, a1]; [r1:0, r1:4]]").unwrap();
        assert_eq!(parse_obj(&obj.to_string()), Ok(obj));
        assert_eq!(parse_obj(&Obj::zero().to_string()), Ok(Obj::zero()));
    }
}
