//! Tokens and expression evaluation shared by every section of a presentation file.

use num_bigint::BigInt;

use crate::dga::FormElement;
use crate::ncalg::{AlgElement, Presentation, TensorElement, Word};
use crate::scalars::{param_index, ScalarRF};

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    At,
    Dot,
    Comma,
    Semi,
    Colon,
    Assign,
    Arrow,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub col: usize,
}

/// Splits a line into tokens. Names in `long_names` (form names such as `w-`)
/// win over ordinary identifiers when they match at a position.
pub fn lex(text: &str, line: usize, col0: usize, long_names: &[String]) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let ident_char = |c: char| c.is_ascii_alphanumeric() || c == '_';
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let long = long_names
                .iter()
                .filter(|n| {
                    let nc: Vec<char> = n.chars().collect();
                    chars[i..].starts_with(&nc) && chars.get(i + nc.len()).is_none_or(|&x| !ident_char(x))
                })
                .max_by_key(|n| n.chars().count());
            let len = match long {
                Some(n) => n.chars().count(),
                None => chars[i..].iter().take_while(|&&x| ident_char(x)).count(),
            };
            out.push(Token { tok: Tok::Ident(chars[i..i + len].iter().collect()), col });
            i += len;
            continue;
        }
        if c.is_ascii_digit() {
            let len = chars[i..].iter().take_while(|x| x.is_ascii_digit()).count();
            let s: String = chars[i..i + len].iter().collect();
            out.push(Token { tok: Tok::Num(s.parse().expect("digits")), col });
            i += len;
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, w) = match (c, two.as_str()) {
            (_, ":=") => (Tok::Assign, 2),
            (_, "->") => (Tok::Arrow, 2),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('/', _) => (Tok::Slash, 1),
            ('^', _) => (Tok::Caret, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            ('@', _) => (Tok::At, 1),
            ('.', _) => (Tok::Dot, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            (':', _) => (Tok::Colon, 1),
            ('=', _) => (Tok::Eq, 1),
            _ => return Err(ParseError::new(line, col, "a token")),
        };
        out.push(Token { tok, col });
        i += w;
    }
    Ok(out)
}

/// Names visible to an expression.
#[derive(Clone, Copy, Default)]
pub struct Scope<'a> {
    pub params: &'a [String],
    pub gens: &'a [String],
    pub forms: &'a [String],
    /// Products reduce through this presentation; without it words just concatenate.
    pub pres: Option<&'a Presentation>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(ScalarRF),
    Alg(AlgElement),
    Tensor(TensorElement),
    Form(FormElement),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Alg(_) => "algebra element",
            Value::Tensor(_) => "tensor",
            Value::Form(_) => "form",
        }
    }

    fn is_zero_scalar(&self) -> bool {
        matches!(self, Value::Scalar(c) if c.is_zero())
    }
}

/// A cursor over one line's tokens.
pub struct Cursor<'t> {
    toks: &'t [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'t> Cursor<'t> {
    pub fn new(toks: &'t [Token], line: usize, end_col: usize) -> Self {
        Cursor { toks, pos: 0, line, end_col }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    pub fn err(&self, expected: &str) -> ParseError {
        ParseError::new(self.line, self.col(), expected)
    }

    pub fn line(&self) -> usize {
        self.line
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    pub fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err(what)),
        }
    }

    pub fn int(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat(&Tok::Minus);
        match self.peek() {
            Some(Tok::Num(n)) => {
                let v: i64 = n.try_into().map_err(|_| self.err("a small integer"))?;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err("an integer")),
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("end of line"))
        }
    }

    /// True when the next tokens start a list element terminator.
    fn at_stop(&self) -> bool {
        matches!(self.peek(), None | Some(Tok::Comma | Tok::Semi | Tok::RParen | Tok::RBracket | Tok::Assign | Tok::Eq | Tok::Arrow))
    }

    pub fn expr(&mut self, sc: &Scope) -> Result<Value, ParseError> {
        let mut acc = self.tensor_term(sc)?;
        loop {
            let neg = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            let col = self.col();
            self.pos += 1;
            let mut rhs = self.tensor_term(sc)?;
            if neg {
                rhs = scale(rhs, &-ScalarRF::one());
            }
            acc = add(acc, rhs).map_err(|e| ParseError::new(self.line, col, &e))?;
        }
        Ok(acc)
    }

    fn tensor_term(&mut self, sc: &Scope) -> Result<Value, ParseError> {
        let left = self.product(sc)?;
        if !self.eat(&Tok::At) {
            return Ok(left);
        }
        let col = self.col();
        let right = self.product(sc)?;
        let as_alg = |v: Value| match v {
            Value::Scalar(c) => Ok(AlgElement::scalar(c)),
            Value::Alg(a) => Ok(a),
            _ => Err(ParseError::new(self.line, col, "algebra elements around `@`")),
        };
        let mut t = TensorElement::zero();
        t.add_product(&as_alg(left)?, &as_alg(right)?, &ScalarRF::one());
        Ok(Value::Tensor(t))
    }

    fn product(&mut self, sc: &Scope) -> Result<Value, ParseError> {
        let mut acc = self.unary(sc)?;
        loop {
            let div = match self.peek() {
                Some(Tok::Star) => false,
                Some(Tok::Slash) => true,
                _ => break,
            };
            let col = self.col();
            self.pos += 1;
            let rhs = self.unary(sc)?;
            acc = if div { divide(acc, rhs) } else { multiply(sc, acc, rhs) }.map_err(|e| ParseError::new(self.line, col, &e))?;
        }
        Ok(acc)
    }

    fn unary(&mut self, sc: &Scope) -> Result<Value, ParseError> {
        if self.eat(&Tok::Minus) {
            return Ok(scale(self.unary(sc)?, &-ScalarRF::one()));
        }
        let base = self.atom(sc)?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let col = self.col();
        let e = self.int()?;
        power(sc, base, e).map_err(|m| ParseError::new(self.line, col, &m))
    }

    fn atom(&mut self, sc: &Scope) -> Result<Value, ParseError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Num(n)) => Ok(Value::Scalar(ScalarRF::from_bigint(n))),
            Some(Tok::LParen) => {
                let v = self.expr(sc)?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => {
                if let Some(k) = sc.forms.iter().position(|f| *f == name) {
                    let mut w = vec![k];
                    while self.eat(&Tok::Dot) {
                        let c = self.col();
                        let n = self.ident("a form name")?;
                        w.push(sc.forms.iter().position(|f| *f == n).ok_or_else(|| ParseError::new(self.line, c, "a declared form name"))?);
                    }
                    return Ok(Value::Form(FormElement::basis(Word::from_letters(w), AlgElement::one())));
                }
                if let Some(g) = sc.gens.iter().position(|x| *x == name) {
                    return Ok(Value::Alg(AlgElement::word(Word::letter(g))));
                }
                if sc.params.contains(&name) {
                    return Ok(Value::Scalar(ScalarRF::param_pow(param_index(&name), 1)));
                }
                Err(ParseError::new(self.line, col, "a declared parameter, generator or form"))
            }
            _ => {
                self.pos -= 1;
                Err(self.err("an operand"))
            }
        }
    }

    pub fn scalar(&mut self, sc: &Scope) -> Result<ScalarRF, ParseError> {
        let col = self.col();
        match self.expr(sc)? {
            Value::Scalar(c) => Ok(c),
            v => Err(ParseError::new(self.line, col, &format!("a scalar, found {}", v.kind()))),
        }
    }

    pub fn element(&mut self, sc: &Scope) -> Result<AlgElement, ParseError> {
        let col = self.col();
        match self.expr(sc)? {
            Value::Scalar(c) => Ok(AlgElement::scalar(c)),
            Value::Alg(a) => Ok(a),
            v => Err(ParseError::new(self.line, col, &format!("an algebra element, found {}", v.kind()))),
        }
    }

    pub fn tensor(&mut self, sc: &Scope) -> Result<TensorElement, ParseError> {
        let col = self.col();
        match self.expr(sc)? {
            Value::Tensor(t) => Ok(t),
            v if v.is_zero_scalar() => Ok(TensorElement::zero()),
            v => Err(ParseError::new(self.line, col, &format!("a tensor `a @ b`, found {}", v.kind()))),
        }
    }

    /// A form of the given degree (or any degree when None); `0` is accepted.
    pub fn form(&mut self, sc: &Scope, degree: Option<usize>) -> Result<FormElement, ParseError> {
        let col = self.col();
        let f = match self.expr(sc)? {
            Value::Form(f) => f,
            v if v.is_zero_scalar() => FormElement::zero(degree.unwrap_or(0)),
            v => return Err(ParseError::new(self.line, col, &format!("a form, found {}", v.kind()))),
        };
        match degree {
            Some(d) if d != f.degree() => Err(ParseError::new(self.line, col, &format!("a form of degree {d}"))),
            _ => Ok(f),
        }
    }

    /// A bare form word such as `w-.w0`, or `1` for the empty word.
    pub fn form_word(&mut self, sc: &Scope) -> Result<Word, ParseError> {
        if let Some(Tok::Num(n)) = self.peek() {
            if *n == BigInt::from(1) {
                self.pos += 1;
                return Ok(Word::empty());
            }
        }
        let mut w = Vec::new();
        loop {
            let c = self.col();
            let n = self.ident("a form name")?;
            w.push(sc.forms.iter().position(|f| *f == n).ok_or_else(|| ParseError::new(self.line, c, "a declared form name"))?);
            if !self.eat(&Tok::Dot) {
                return Ok(Word::from_letters(w));
            }
        }
    }

    /// Comma-separated items up to the end of the line or a closing bracket.
    pub fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        if self.at_stop() {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }
}

fn scale(v: Value, c: &ScalarRF) -> Value {
    match v {
        Value::Scalar(x) => Value::Scalar(&x * c),
        Value::Alg(a) => Value::Alg(a.scale(c)),
        Value::Tensor(t) => {
            let mut out = TensorElement::zero();
            for ((a, b), x) in t.terms() {
                out.add_term(a.clone(), b.clone(), x * c);
            }
            Value::Tensor(out)
        }
        Value::Form(f) => Value::Form(f.scale(c)),
    }
}

fn add(x: Value, y: Value) -> Result<Value, String> {
    if y.is_zero_scalar() {
        return Ok(x);
    }
    if x.is_zero_scalar() {
        return Ok(y);
    }
    Ok(match (x, y) {
        (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(&a + &b),
        (Value::Scalar(a), Value::Alg(b)) | (Value::Alg(b), Value::Scalar(a)) => Value::Alg(b.plus(&AlgElement::scalar(a))),
        (Value::Alg(a), Value::Alg(b)) => Value::Alg(a.plus(&b)),
        (Value::Tensor(a), Value::Tensor(b)) => {
            let mut out = a;
            for ((u, v), c) in b.terms() {
                out.add_term(u.clone(), v.clone(), c.clone());
            }
            Value::Tensor(out)
        }
        (Value::Form(a), Value::Form(b)) if a.degree() == b.degree() => Value::Form(a.plus(&b)),
        (a, b) => return Err(format!("terms of one kind, not {} and {}", a.kind(), b.kind())),
    })
}

fn mul_alg(sc: &Scope, a: &AlgElement, b: &AlgElement) -> AlgElement {
    match sc.pres {
        Some(p) => p.mul(a, b),
        None => {
            let mut out = AlgElement::zero();
            for (u, c) in a.terms() {
                for (v, d) in b.terms() {
                    out.add_term(u.concat(v), c * d);
                }
            }
            out
        }
    }
}

fn multiply(sc: &Scope, x: Value, y: Value) -> Result<Value, String> {
    Ok(match (x, y) {
        (Value::Scalar(a), v) | (v, Value::Scalar(a)) => scale(v, &a),
        (Value::Alg(a), Value::Alg(b)) => Value::Alg(mul_alg(sc, &a, &b)),
        (Value::Alg(a), Value::Form(f)) => {
            let mut out = FormElement::zero(f.degree());
            for (w, c) in f.coords() {
                out.add(w.clone(), &mul_alg(sc, &a, c));
            }
            Value::Form(out)
        }
        (a, b) => return Err(format!("a product with a coefficient on the left, not {} * {}", a.kind(), b.kind())),
    })
}

fn divide(x: Value, y: Value) -> Result<Value, String> {
    match y {
        Value::Scalar(c) => {
            let inv = c.inv().map_err(|_| "a nonzero divisor".to_string())?;
            Ok(scale(x, &inv))
        }
        v => Err(format!("a scalar divisor, not {}", v.kind())),
    }
}

fn power(sc: &Scope, base: Value, e: i64) -> Result<Value, String> {
    let e32 = i32::try_from(e).map_err(|_| "a small exponent".to_string())?;
    match base {
        Value::Scalar(c) => {
            if c.is_zero() && e < 0 {
                return Err("a nonzero base".into());
            }
            Ok(Value::Scalar(c.pow(e32)))
        }
        Value::Alg(a) if e >= 0 => {
            let mut out = AlgElement::one();
            for _ in 0..e {
                out = mul_alg(sc, &out, &a);
            }
            Ok(Value::Alg(out))
        }
        v => Err(format!("a nonnegative exponent on {}", v.kind())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn eval(text: &str, sc: &Scope) -> Result<Value, ParseError> {
        let toks = lex(text, 1, 1, sc.forms)?;
        let mut c = Cursor::new(&toks, 1, text.len() + 1);
        let v = c.expr(sc)?;
        c.finish()?;
        Ok(v)
    }

    #[test]
    fn scalars() {
        let params = names(&["q", "p"]);
        let sc = Scope { params: &params, ..Default::default() };
        let q = ScalarRF::q_pow;
        let v = eval("(q - q^-1)/(q^2 - q^-2)", &sc).unwrap();
        assert_eq!(v, Value::Scalar((&q(1) - &q(-1)).checked_div(&(&q(2) - &q(-2))).unwrap()));
        assert_eq!(eval("-2*q^-1", &sc).unwrap(), Value::Scalar(&ScalarRF::from_int(-2) * &q(-1)));
        assert_eq!(eval("1/2", &sc).unwrap(), Value::Scalar(ScalarRF::from_ratio(1, 2)));
        assert!(eval("1/0", &sc).is_err());
    }

    #[test]
    fn forms_with_signs_in_names() {
        let params = names(&["q"]);
        let forms = names(&["w-", "w0", "w+"]);
        let sc = Scope { params: &params, forms: &forms, ..Default::default() };
        let Value::Form(f) = eval("w+.w- - q^2*w-.w+", &sc).unwrap() else { panic!() };
        assert_eq!(f.coeff(&Word::from_letters([2, 0])), AlgElement::one());
        assert_eq!(f.coeff(&Word::from_letters([0, 2])), AlgElement::scalar(-ScalarRF::q_pow(2)));
    }

    #[test]
    fn errors_carry_columns() {
        let params = names(&["q"]);
        let gens = names(&["x", "y"]);
        let sc = Scope { params: &params, gens: &gens, ..Default::default() };
        let e = eval("q^-1 *", &sc).unwrap_err();
        assert_eq!((e.line, e.col), (1, 7));
        let e = eval("x + z", &sc).unwrap_err();
        assert_eq!(e.col, 5);
        assert!(eval("x $ y", &sc).is_err());
    }

    #[test]
    fn free_products_and_tensors() {
        let params = names(&["q"]);
        let gens = names(&["x", "y"]);
        let sc = Scope { params: &params, gens: &gens, ..Default::default() };
        assert_eq!(eval("y*x", &sc).unwrap(), Value::Alg(AlgElement::word(Word::from_letters([1, 0]))));
        assert_eq!(eval("x^2", &sc).unwrap(), Value::Alg(AlgElement::word(Word::from_letters([0, 0]))));
        let Value::Tensor(t) = eval("x @ y + 1 @ x", &sc).unwrap() else { panic!() };
        assert_eq!(t.terms().count(), 2);
    }
}
