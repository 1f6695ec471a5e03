use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An integer partition `n_1 >= n_2 >= ... >= n_k >= 1`.
///
/// Indexes the monomial symmetric function obtained by symmetrizing
/// `x_1^{n_1} ... x_k^{n_k}`. The derived `Ord` is the lexicographic order
/// from the left with zero padding: parts are positive, so a missing part
/// compares below any present one.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Checked constructor; parts must be positive and non-increasing.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid("partition parts must be non-increasing".into()));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p != 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// `((n)^r)`
    pub fn rectangle(n: u32, r: usize) -> Self {
        if n == 0 {
            return Partition::empty();
        }
        Partition(vec![n; r])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Distinct parts with multiplicities, largest part first: the
    /// `((n_1)^{r_1}, ..., (n_k)^{r_k})` form.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((v, c)) if *v == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition((1..=first).map(|i| self.0.iter().filter(|&&p| p >= i).count() as u32).collect())
    }

    pub fn scaled(&self, factor: u32) -> Partition {
        Partition(self.0.iter().map(|&p| p * factor).collect())
    }

    /// Power notation, e.g. `((2)^2,(1)^3)`.
    pub fn to_power_notation(&self) -> String {
        if self.is_empty() {
            return "()".to_string();
        }
        let inner: Vec<String> = self.multiplicities().iter().map(|(n, r)| format!("({n})^{r}")).collect();
        format!("({})", inner.join(","))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let p = cur.partition()?;
        cur.skip_ws();
        if !cur.at_end() {
            return Err(cur.err("trailing input after partition"));
        }
        Ok(p)
    }
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    text.parse()
}

/// Byte cursor shared by the partition and symmetric-function parsers.
pub(crate) struct Cursor<'a> {
    src: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(s: &'a str) -> Self {
        Cursor { src: s.as_bytes(), pos: 0 }
    }

    pub(crate) fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub(crate) fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    pub(crate) fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    pub(crate) fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    /// Unsigned decimal digits, returned as text.
    pub(crate) fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            std::str::from_utf8(&self.src[start..self.pos]).ok()
        }
    }

    fn positive(&mut self) -> Result<u32> {
        let d = self.digits().ok_or_else(|| self.err("expected a positive integer"))?;
        match d.parse::<u32>() {
            Ok(0) => Err(self.err("parts must be positive")),
            Ok(v) if v <= MAX_PART => Ok(v),
            _ => Err(self.err("integer out of range")),
        }
    }

    pub(crate) fn partition(&mut self) -> Result<Partition> {
        self.expect(b'(')?;
        if self.eat(b')') {
            return Ok(Partition::empty());
        }
        self.skip_ws();
        if self.peek() == Some(b'(') {
            return self.power_tail();
        }
        let mut parts = vec![self.positive()?];
        while self.eat(b',') {
            let v = self.positive()?;
            if v > *parts.last().unwrap() {
                return Err(self.err("parts must be non-increasing"));
            }
            parts.push(v);
        }
        self.expect(b')')?;
        check_size(&parts).map_err(|m| self.err(m))?;
        Ok(Partition(parts))
    }

    fn power_tail(&mut self) -> Result<Partition> {
        let mut parts = Vec::new();
        let mut last: Option<u32> = None;
        loop {
            self.expect(b'(')?;
            let n = self.positive()?;
            self.expect(b')')?;
            self.expect(b'^')?;
            let r = self.positive()?;
            if let Some(prev) = last {
                if n >= prev {
                    return Err(self.err("power notation requires strictly decreasing bases"));
                }
            }
            last = Some(n);
            if parts.len() + r as usize > MAX_PARTS {
                return Err(self.err("partition too long"));
            }
            parts.extend(std::iter::repeat_n(n, r as usize));
            if !self.eat(b',') {
                break;
            }
        }
        self.expect(b')')?;
        check_size(&parts).map_err(|m| self.err(m))?;
        Ok(Partition(parts))
    }
}

/// Input guards; products and power operations grow quickly with weight.
const MAX_PART: u32 = 1 << 16;
const MAX_PARTS: usize = 4096;

fn check_size(parts: &[u32]) -> std::result::Result<(), &'static str> {
    if parts.len() > MAX_PARTS {
        return Err("partition too long");
    }
    if parts.iter().map(|&p| p as u64).sum::<u64>() > MAX_PART as u64 {
        return Err("partition weight too large");
    }
    Ok(())
}

/// All partitions of `w`, in decreasing lexicographic order.
pub fn partitions_of(w: u32) -> Vec<Partition> {
    partitions_bounded(w, w)
}

/// Partitions of `w` with largest part at most `max_part`, decreasing lex order.
pub fn partitions_bounded(w: u32, max_part: u32) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=max.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(w, max_part, &mut Vec::new(), &mut out);
    out
}

/// All partitions of weight at most `w`, grouped by weight.
pub fn partitions_up_to(w: u32) -> Vec<Partition> {
    (0..=w).flat_map(partitions_of).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn parse_both_notations() {
        assert_eq!(p("(2,1,1)").parts(), &[2, 1, 1]);
        assert_eq!(p("((1)^3)").parts(), &[1, 1, 1]);
        assert_eq!(p("()"), Partition::empty());
        assert_eq!(p("((2)^2,(1)^3)"), p("(2,2,1,1,1)"));
        assert_eq!(p(" ( 3 , 2 ) "), p("(3,2)"));
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "(", "(1,2)", "(0)", "((1)^2,(2)^1)", "((2)^1,(2)^1)", "(2,1", "(2,1))", "((2)^0)", "(a)", "2,1"] {
            assert!(bad.parse::<Partition>().is_err(), "{bad:?} should fail");
        }
        match "((1)^2,(3)^1)".parse::<Partition>() {
            Err(Error::Syntax { .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lex_order() {
        assert_eq!(p("(2,1)").cmp(&p("(2,1)")), Ordering::Equal);
        assert_eq!(p("(1,1,1)").cmp(&p("(2)")), Ordering::Less);
        assert_eq!(p("(3,2,2)").cmp(&p("(3,2,1,1)")), Ordering::Greater);
        assert_eq!(p("(2,1)").cmp(&p("(2,1,1)")), Ordering::Less);
        assert!(Partition::empty() < p("(1)"));
    }

    #[test]
    fn shapes() {
        assert_eq!(p("(3,1)").conjugate(), p("(2,1,1)"));
        assert_eq!(p("(2,2,1,1,1)").multiplicities(), vec![(2, 2), (1, 3)]);
        assert_eq!(p("(2,2,1,1,1)").to_power_notation(), "((2)^2,(1)^3)");
        assert_eq!(Partition::rectangle(1, 3).to_string(), "(1,1,1)");
        let counts: Vec<usize> = (0..10).map(|w| partitions_of(w).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
        let ps = partitions_of(5);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
    }
}
