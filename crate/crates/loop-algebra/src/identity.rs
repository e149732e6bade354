//! A small language of loop identities.
//!
//! An identity is two terms joined by `=`. Terms are built from single
//! lowercase variables, the constant `e`, the binary `*`, parentheses, and
//! the postfix inverses `^l`, `^r`, and `^-1`. The `*` operator is not
//! associative, so `a*b*c` is rejected; write `(a*b)*c` or `a*(b*c)`.
//! An identity holds on a loop when every assignment of elements to its
//! variables makes both sides equal.

use crate::error::{Error, Result};
use crate::table::{Element, LoopTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(char),
    Neutral,
    Mul(Box<Expr>, Box<Expr>),
    LeftInv(Box<Expr>),
    RightInv(Box<Expr>),
    Inv(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub lhs: Expr,
    pub rhs: Expr,
}

/// Outcome of checking one identity against one loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// The lexicographically first failing assignment, by variable name.
    Fails(Vec<(char, Element)>),
    /// The identity uses `^-1` but the loop has a one-sided inverse.
    Inapplicable { element: Element },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

impl Identity {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let lhs = p.expr()?;
        p.expect(b'=', "'='")?;
        let rhs = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("end of input"));
        }
        Ok(Identity { lhs, rhs })
    }

    /// The identity's variables, sorted and deduplicated.
    pub fn variables(&self) -> Vec<char> {
        let mut vars = Vec::new();
        collect_vars(&self.lhs, &mut vars);
        collect_vars(&self.rhs, &mut vars);
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    pub fn uses_two_sided_inverse(&self) -> bool {
        uses_inv(&self.lhs) || uses_inv(&self.rhs)
    }

    /// Checks the identity on every assignment, returning the first
    /// counterexample in lexicographic order of the variable tuple.
    pub fn check(&self, t: &LoopTable) -> Verdict {
        if self.uses_two_sided_inverse() {
            for x in t.elements() {
                let (l, r) = t.inverses(x);
                if l != r {
                    return Verdict::Inapplicable { element: x };
                }
            }
        }
        let vars = self.variables();
        let n = t.order();
        let mut vals = vec![0; vars.len()];
        loop {
            if eval(&self.lhs, t, &vars, &vals) != eval(&self.rhs, t, &vars, &vals) {
                return Verdict::Fails(vars.iter().copied().zip(vals).collect());
            }
            let mut i = vals.len();
            loop {
                if i == 0 {
                    return Verdict::Holds;
                }
                i -= 1;
                vals[i] += 1;
                if vals[i] < n {
                    break;
                }
                vals[i] = 0;
            }
        }
    }

    pub fn holds_on(&self, t: &LoopTable) -> bool {
        self.check(t).holds()
    }
}

fn collect_vars(e: &Expr, out: &mut Vec<char>) {
    match e {
        Expr::Var(c) => out.push(*c),
        Expr::Neutral => {}
        Expr::Mul(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Expr::LeftInv(a) | Expr::RightInv(a) | Expr::Inv(a) => collect_vars(a, out),
    }
}

fn uses_inv(e: &Expr) -> bool {
    match e {
        Expr::Var(_) | Expr::Neutral => false,
        Expr::Mul(a, b) => uses_inv(a) || uses_inv(b),
        Expr::LeftInv(a) | Expr::RightInv(a) => uses_inv(a),
        Expr::Inv(_) => true,
    }
}

fn eval(e: &Expr, t: &LoopTable, vars: &[char], vals: &[Element]) -> Element {
    match e {
        Expr::Var(c) => vals[vars.iter().position(|v| v == c).unwrap()],
        Expr::Neutral => 0,
        Expr::Mul(a, b) => t.mul(eval(a, t, vars, vals), eval(b, t, vars, vals)),
        Expr::LeftInv(a) => t.rdiv(0, eval(a, t, vars, vals)),
        Expr::RightInv(a) => t.ldiv(eval(a, t, vars, vals), 0),
        Expr::Inv(a) => t.rdiv(0, eval(a, t, vars, vals)),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, expected: &str) -> Error {
        Error::Syntax { position: self.pos, expected: expected.into() }
    }

    fn expect(&mut self, byte: u8, expected: &str) -> Result<()> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(expected))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let lhs = self.atom()?;
        if self.peek() != Some(b'*') {
            return Ok(lhs);
        }
        self.pos += 1;
        let rhs = self.atom()?;
        if self.peek() == Some(b'*') {
            return Err(self.err("parentheses ('*' is not associative)"));
        }
        Ok(Expr::Mul(Box::new(lhs), Box::new(rhs)))
    }

    fn atom(&mut self) -> Result<Expr> {
        let mut e = self.primary()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            e = match self.peek() {
                Some(b'l') => {
                    self.pos += 1;
                    Expr::LeftInv(Box::new(e))
                }
                Some(b'r') => {
                    self.pos += 1;
                    Expr::RightInv(Box::new(e))
                }
                Some(b'-') => {
                    self.pos += 1;
                    self.expect(b'1', "'1'")?;
                    Expr::Inv(Box::new(e))
                }
                _ => return Err(self.err("'l', 'r', or '-1'")),
            };
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')', "')'")?;
                Ok(e)
            }
            Some(b'e') => {
                self.pos += 1;
                Ok(Expr::Neutral)
            }
            Some(c) if c.is_ascii_lowercase() => {
                self.pos += 1;
                Ok(Expr::Var(c as char))
            }
            _ => Err(self.err("a variable, 'e', or '('")),
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn operand(e: &Expr, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            if matches!(e, Expr::Mul(..)) {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Var(c) => write!(f, "{c}"),
            Expr::Neutral => write!(f, "e"),
            Expr::Mul(a, b) => {
                operand(a, f)?;
                write!(f, "*")?;
                operand(b, f)
            }
            Expr::LeftInv(a) => {
                operand(a, f)?;
                write!(f, "^l")
            }
            Expr::RightInv(a) => {
                operand(a, f)?;
                write!(f, "^r")
            }
            Expr::Inv(a) => {
                operand(a, f)?;
                write!(f, "^-1")
            }
        }
    }
}

impl std::fmt::Display for Identity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl std::str::FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::parse(s)
    }
}

/// Named identities usable wherever a formula is accepted.
pub const REGISTRY: &[(&str, &str)] = &[
    ("lc", "(x*x)*(y*z) = (x*(x*y))*z"),
    ("lc.alt", "x*(y*(y*z)) = (x*(y*y))*z"),
    ("rc", "(z*y)*(x*x) = z*((y*x)*x)"),
    ("rc.alt", "((z*y)*y)*x = z*((y*y)*x)"),
    ("c", "x*(y*(y*z)) = ((x*y)*y)*z"),
    ("lip", "x^l*(x*y) = y"),
    ("rip", "(y*x)*x^r = y"),
    ("wip", "y*(x*y)^r = x^r"),
    ("cip", "(x*y)*x^r = y"),
    ("cip.alt", "(x^-1*y)*x = y"),
    ("aip", "(x*y)^-1 = x^-1*y^-1"),
    ("aaip", "(x*y)^-1 = y^-1*x^-1"),
    ("lalt", "x*(x*y) = (x*x)*y"),
    ("ralt", "(y*x)*x = y*(x*x)"),
    ("flexible", "(x*y)*x = x*(y*x)"),
    ("commutative", "x*y = y*x"),
    ("associative", "(x*y)*z = x*(y*z)"),
    ("lbol", "x*(y*(x*z)) = (x*(y*x))*z"),
    ("rbol", "((z*x)*y)*x = z*((x*y)*x)"),
    ("moufang", "(x*y)*(z*x) = (x*(y*z))*x"),
    ("extra", "x*(y*(z*x)) = ((x*y)*z)*x"),
    ("steiner.sq", "x*x = e"),
    ("steiner.cancel", "(y*x)*x = y"),
    ("steiner.comm", "x*y = y*x"),
];

/// Looks up a named identity from the registry.
pub fn lookup(name: &str) -> Result<Identity> {
    if name == "lm" || name == "rm" {
        return Err(Error::UnknownName(format!(
            "{name} (reserved for a middle-translation identity with no agreed formula)"
        )));
    }
    REGISTRY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, formula)| Identity::parse(formula).expect("registry formulas parse"))
        .ok_or_else(|| Error::UnknownName(name.into()))
}

/// Resolves either a registry name or a literal formula.
pub fn resolve(text: &str) -> Result<Identity> {
    match lookup(text) {
        Ok(id) => Ok(id),
        Err(Error::UnknownName(_)) if text.contains('=') => Identity::parse(text),
        Err(e) => Err(e),
    }
}
