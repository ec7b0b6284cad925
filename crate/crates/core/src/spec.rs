//! Group specifications and their text grammar.
//!
//! ```text
//! expr    := term (("x" | "*") term)*
//! term    := primary ("^" int)*
//! primary := "C" int | "D" int | "Q" int | "SD(" int "," int ")"
//!          | "Perm[" cycles (";" cycles)* "]" | "(" expr ")"
//! cycles  := ("(" int* ")")*
//! ```
//!
//! Whitespace between tokens is ignored. `Q` takes the group order.
//! Products associate to the left.

use std::fmt;

use crate::error::{Error, Result};

/// One permutation in cycle notation over points `1..=degree`.
pub type Cycles = Vec<Vec<usize>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(usize),
    /// Dihedral group of order `2n`.
    Dihedral(usize),
    /// Generalized quaternion group of the given order.
    GeneralizedQuaternion(usize),
    /// Non-abelian `C_q ⋊ C_p`.
    SemidirectPQ {
        q: usize,
        p: usize,
    },
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Power(Box<GroupSpec>, u32),
    PermGroup(Vec<Cycles>),
}

pub(crate) fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl GroupSpec {
    pub fn product(left: GroupSpec, right: GroupSpec) -> GroupSpec {
        GroupSpec::Product(Box::new(left), Box::new(right))
    }

    pub fn power(base: GroupSpec, e: u32) -> GroupSpec {
        GroupSpec::Power(Box::new(base), e)
    }

    /// Checks the parameter constraints of every node.
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidSpec(msg));
        match self {
            GroupSpec::Cyclic(n) if *n == 0 => invalid("C0: cyclic order must be positive".into()),
            GroupSpec::Cyclic(_) => Ok(()),
            GroupSpec::Dihedral(n) if *n < 3 => invalid(format!("D{n}: dihedral parameter must be at least 3")),
            GroupSpec::Dihedral(_) => Ok(()),
            GroupSpec::GeneralizedQuaternion(m) => {
                if *m >= 8 && m.is_power_of_two() {
                    Ok(())
                } else {
                    invalid(format!("Q{m}: order must be a power of two, at least 8"))
                }
            }
            GroupSpec::SemidirectPQ { q, p } => {
                if !is_prime(*p) || !is_prime(*q) {
                    invalid(format!("SD({q},{p}): both parameters must be prime"))
                } else if p >= q {
                    invalid(format!("SD({q},{p}): need p < q"))
                } else if (q - 1) % p != 0 {
                    invalid(format!("SD({q},{p}): {p} does not divide {}", q - 1))
                } else {
                    Ok(())
                }
            }
            GroupSpec::Product(l, r) => {
                l.validate()?;
                r.validate()
            }
            GroupSpec::Power(b, e) => {
                if *e == 0 {
                    return invalid("exponent must be at least 1".into());
                }
                b.validate()
            }
            GroupSpec::PermGroup(gens) => {
                for (i, g) in gens.iter().enumerate() {
                    let mut seen = std::collections::HashSet::new();
                    for c in g {
                        for &pt in c {
                            if pt == 0 {
                                return invalid(format!("generator {}: points start at 1", i + 1));
                            }
                            if !seen.insert(pt) {
                                return invalid(format!("generator {}: point {pt} repeated, not a bijection", i + 1));
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Order of the group this spec denotes, when known without construction.
    /// Saturates instead of overflowing.
    pub fn predicted_order(&self) -> Option<usize> {
        match self {
            GroupSpec::Cyclic(n) => Some(*n),
            GroupSpec::Dihedral(n) => Some(n.saturating_mul(2)),
            GroupSpec::GeneralizedQuaternion(m) => Some(*m),
            GroupSpec::SemidirectPQ { q, p } => Some(q.saturating_mul(*p)),
            GroupSpec::Product(l, r) => Some(l.predicted_order()?.saturating_mul(r.predicted_order()?)),
            GroupSpec::Power(b, e) => {
                let base = b.predicted_order()?;
                Some((0..*e).fold(1usize, |acc, _| acc.saturating_mul(base)))
            }
            GroupSpec::PermGroup(_) => None,
        }
    }

    /// Largest point moved or mentioned by a permutation spec.
    pub fn perm_degree(gens: &[Cycles]) -> usize {
        gens.iter().flat_map(|g| g.iter().flatten()).copied().max().unwrap_or(0)
    }

    fn needs_parens_as_power_base(&self) -> bool {
        matches!(self, GroupSpec::Product(..) | GroupSpec::Power(..))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Dihedral(n) => write!(f, "D{n}"),
            GroupSpec::GeneralizedQuaternion(m) => write!(f, "Q{m}"),
            GroupSpec::SemidirectPQ { q, p } => write!(f, "SD({q},{p})"),
            GroupSpec::Product(l, r) => {
                write!(f, "{l} x ")?;
                if matches!(**r, GroupSpec::Product(..)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            GroupSpec::Power(b, e) => {
                if b.needs_parens_as_power_base() {
                    write!(f, "({b})^{e}")
                } else {
                    write!(f, "{b}^{e}")
                }
            }
            GroupSpec::PermGroup(gens) => {
                f.write_str("Perm[")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    if g.is_empty() {
                        f.write_str("()")?;
                    }
                    for c in g {
                        f.write_str("(")?;
                        for (j, pt) in c.iter().enumerate() {
                            if j > 0 {
                                f.write_str(" ")?;
                            }
                            write!(f, "{pt}")?;
                        }
                        f.write_str(")")?;
                    }
                }
                f.write_str("]")
            }
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

/// Parses and validates a group specification.
pub fn parse_spec(text: &str) -> Result<GroupSpec> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let spec = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    spec.validate()?;
    Ok(spec)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", b as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                message: "integer out of range".into(),
            })
    }

    fn expr(&mut self) -> Result<GroupSpec> {
        let mut acc = self.term()?;
        while matches!(self.peek(), Some(b'x' | b'*')) {
            self.pos += 1;
            let rhs = self.term()?;
            acc = GroupSpec::product(acc, rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<GroupSpec> {
        let mut base = self.primary()?;
        while self.eat(b'^') {
            let at = self.pos;
            let e = self.int()?;
            let e = u32::try_from(e).map_err(|_| Error::Parse {
                offset: at,
                message: "exponent out of range".into(),
            })?;
            base = GroupSpec::power(base, e);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<GroupSpec> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'S') if self.keyword("SD") => {
                self.expect(b'(')?;
                let q = self.int()?;
                self.expect(b',')?;
                let p = self.int()?;
                self.expect(b')')?;
                Ok(GroupSpec::SemidirectPQ { q, p })
            }
            Some(b'P') if self.keyword("Perm") => {
                self.expect(b'[')?;
                let mut gens = Vec::new();
                if !self.eat(b']') {
                    loop {
                        gens.push(self.cycles()?);
                        if self.eat(b']') {
                            break;
                        }
                        self.expect(b';')?;
                    }
                }
                Ok(GroupSpec::PermGroup(gens))
            }
            Some(b'C') => {
                self.pos += 1;
                Ok(GroupSpec::Cyclic(self.int()?))
            }
            Some(b'D') => {
                self.pos += 1;
                Ok(GroupSpec::Dihedral(self.int()?))
            }
            Some(b'Q') => {
                self.pos += 1;
                Ok(GroupSpec::GeneralizedQuaternion(self.int()?))
            }
            Some(_) => Err(self.error("expected a group atom (C, D, Q, SD, Perm or '(')")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn cycles(&mut self) -> Result<Cycles> {
        let mut out = Vec::new();
        while self.eat(b'(') {
            let mut cycle = Vec::new();
            loop {
                if self.eat(b')') {
                    break;
                }
                cycle.push(self.int()?);
                self.eat(b',');
            }
            if !cycle.is_empty() {
                out.push(cycle);
            }
        }
        Ok(out)
    }
}
