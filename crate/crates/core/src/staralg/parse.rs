//! Expression language.
//!
//! ```text
//! expr    := ['+' | '-'] term (('+' | '-') term)*
//! term    := factor (['·'] factor)*          juxtaposition multiplies
//! factor  := primary '*'*                     postfix adjoint
//! primary := INT | 'e' '[' INT ',' INT ']' | 's' '[' INT ']' | '(' expr ')'
//! ```
//!
//! `e[j,k]` is `e_{j,k} ⊗ 1`, `s[m]` is `1 ⊗ s_m`, an integer is that
//! multiple of the unit. Everything after `#` on a line is a comment.

use num_bigint::BigInt;

use super::{StarAlgebra, StarError, StarPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    E,
    S,
    LBracket,
    RBracket,
    Comma,
    Star,
    Dot,
    LParen,
    RParen,
    Plus,
    Minus,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn syntax(column: usize, message: impl Into<String>) -> StarError {
    StarError::Syntax { column, message: message.into() }
}

impl Lexer {
    fn new(text: &str) -> Result<Self, StarError> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(digits.parse().expect("ascii digits")), col));
                continue;
            }
            let tok = match c {
                'e' => Tok::E,
                's' => Tok::S,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                '*' => Tok::Star,
                '·' => Tok::Dot,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '+' => Tok::Plus,
                '-' | '−' => Tok::Minus,
                other => return Err(syntax(col, format!("unexpected character '{other}'"))),
            };
            toks.push((tok, col));
            i += 1;
        }
        toks.push((Tok::End, chars.len() + 1));
        Ok(Lexer { toks })
    }
}

struct Parser<'a> {
    alg: &'a StarAlgebra,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), StarError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.column(), format!("expected {what}")))
        }
    }

    fn index(&mut self) -> Result<(usize, usize), StarError> {
        let col = self.column();
        match self.bump() {
            Tok::Int(v) => {
                let i = usize::try_from(&v).map_err(|_| StarError::Index { column: col, message: format!("index {v} is too large") })?;
                Ok((i, col))
            }
            _ => Err(syntax(col, "expected an index")),
        }
    }

    fn expr(&mut self) -> Result<StarPoly, StarError> {
        let negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = self.alg.neg(&acc);
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.alg.add(&acc, &t)?;
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.alg.sub(&acc, &t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Int(_) | Tok::E | Tok::S | Tok::LParen)
    }

    fn term(&mut self) -> Result<StarPoly, StarError> {
        let mut acc = self.factor()?;
        loop {
            if *self.peek() == Tok::Dot {
                self.bump();
            } else if !self.starts_factor() {
                return Ok(acc);
            }
            let f = self.factor()?;
            acc = self.alg.mul(&acc, &f)?;
        }
    }

    fn factor(&mut self) -> Result<StarPoly, StarError> {
        let mut p = self.primary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            p = self.alg.adjoint(&p)?;
        }
        Ok(p)
    }

    fn primary(&mut self) -> Result<StarPoly, StarError> {
        let col = self.column();
        match self.bump() {
            Tok::Int(v) => Ok(self.alg.integer(v)),
            Tok::E => {
                self.expect(Tok::LBracket, "'[' after 'e'")?;
                let (j, cj) = self.index()?;
                self.expect(Tok::Comma, "','")?;
                let (k, ck) = self.index()?;
                self.expect(Tok::RBracket, "']'")?;
                for (i, c) in [(j, cj), (k, ck)] {
                    if !(1..=self.alg.r).contains(&i) {
                        return Err(StarError::Index {
                            column: c,
                            message: format!("matrix index {i} outside 1..={}", self.alg.r),
                        });
                    }
                }
                self.alg.e(j, k)
            }
            Tok::S => {
                self.expect(Tok::LBracket, "'[' after 's'")?;
                let (m, cm) = self.index()?;
                self.expect(Tok::RBracket, "']'")?;
                if !(1..=self.alg.n).contains(&m) {
                    return Err(StarError::Index {
                        column: cm,
                        message: format!("isometry index {m} outside 1..={}", self.alg.n),
                    });
                }
                self.alg.s(m)
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::End => Err(syntax(col, "unexpected end of expression")),
            other => Err(syntax(col, format!("unexpected {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Int(_) => "integer",
        Tok::E => "'e'",
        Tok::S => "'s'",
        Tok::LBracket => "'['",
        Tok::RBracket => "']'",
        Tok::Comma => "','",
        Tok::Star => "'*'",
        Tok::Dot => "'·'",
        Tok::LParen => "'('",
        Tok::RParen => "')'",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::End => "end of input",
    }
}

impl StarAlgebra {
    /// Parses one expression (a `#` comment may follow) into normal form.
    pub fn parse(&self, text: &str) -> Result<StarPoly, StarError> {
        let lexer = Lexer::new(text)?;
        let mut p = Parser { alg: self, toks: lexer.toks, pos: 0 };
        if *p.peek() == Tok::End {
            return Err(syntax(1, "empty expression"));
        }
        let out = p.expr()?;
        if *p.peek() != Tok::End {
            let col = p.column();
            return Err(syntax(col, format!("unexpected {}", describe(p.peek()))));
        }
        Ok(out)
    }
}

/// True iff the line holds nothing but whitespace and comments.
pub fn is_blank(line: &str) -> bool {
    line.split('#').next().is_none_or(|s| s.trim().is_empty())
}
