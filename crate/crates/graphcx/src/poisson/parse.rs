//! Expressions such as `[1,2]^3` or `[[1,3],2]^4`.

use super::{PoissonElement, PoissonError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Letter(u8),
    Bracket(Box<Expr>, Box<Expr>),
    Product(Vec<Expr>),
}

impl Expr {
    fn letters(&self, out: &mut Vec<u8>) {
        match self {
            Expr::Letter(l) => out.push(*l),
            Expr::Bracket(a, b) => {
                a.letters(out);
                b.letters(out);
            }
            Expr::Product(fs) => fs.iter().for_each(|f| f.letters(out)),
        }
    }

    /// `N` if the letters are exactly `1..N`, each used once.
    pub fn arity(&self) -> Result<usize, PoissonError> {
        let mut ls = Vec::new();
        self.letters(&mut ls);
        ls.sort_unstable();
        if ls.iter().enumerate().any(|(i, &l)| l as usize != i + 1) {
            return Err(PoissonError::Arity(format!("letters {ls:?} are not 1..{} used once each", ls.len())));
        }
        Ok(ls.len())
    }

    /// The element of `Poiss_n` in forest normal form.
    pub fn to_poisson(&self, n: i64) -> Result<PoissonElement, PoissonError> {
        super::graphs::normal_form(self, n)
    }
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, PoissonError> {
        Err(PoissonError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.text.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.text.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn product(&mut self) -> Result<Expr, PoissonError> {
        let mut fs = vec![self.factor()?];
        while self.eat(b'^') {
            fs.push(self.factor()?);
        }
        Ok(if fs.len() == 1 { fs.pop().expect("one factor") } else { Expr::Product(fs) })
    }

    fn factor(&mut self) -> Result<Expr, PoissonError> {
        if self.eat(b'[') {
            let a = self.product()?;
            if !self.eat(b',') {
                return self.err("expected ','");
            }
            let b = self.product()?;
            if !self.eat(b']') {
                return self.err("expected ']'");
            }
            return Ok(Expr::Bracket(Box::new(a), Box::new(b)));
        }
        if self.eat(b'(') {
            let e = self.product()?;
            if !self.eat(b')') {
                return self.err("expected ')'");
            }
            return Ok(e);
        }
        self.skip_ws();
        let start = self.pos;
        while self.text.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a letter, '[' or '('");
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).expect("digits are ascii");
        match s.parse::<u8>() {
            Ok(l) if l > 0 => Ok(Expr::Letter(l)),
            _ => Err(PoissonError::Parse { pos: start, msg: format!("letter {s} out of range") }),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, PoissonError> {
    let mut p = Parser { text: text.as_bytes(), pos: 0 };
    let e = p.product()?;
    p.skip_ws();
    if p.pos != text.len() {
        return p.err("trailing input");
    }
    Ok(e)
}
