use std::f64::consts::PI;

use super::lexer::{tokenize, Tok, Token};
use super::ParseError;
use crate::ir::{Circuit, GateKind, GateOp, SourceSpan};

/// A register operand: either one element or a whole register.
#[derive(Debug, Clone)]
struct Operand {
    name: String,
    index: Option<usize>,
    line: usize,
    column: usize,
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    origin: &'a str,
    qregs: Vec<(String, usize)>,
    cregs: Vec<(String, usize)>,
    circuit: Option<Circuit>,
}

pub fn parse_named(text: &str, origin: &str) -> Result<Circuit, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        origin,
        qregs: Vec::new(),
        cregs: Vec::new(),
        circuit: None,
    };
    p.header()?;
    while p.peek().tok != Tok::Eof {
        p.statement()?;
    }
    let eof = p.peek().clone();
    p.circuit_mut(&eof).map(|c| c.clone())
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err(&self, tok: &Token, message: impl Into<String>) -> ParseError {
        ParseError::new(message, tok.line, tok.column, &tok.tok.describe())
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, ParseError> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            Err(self.err(&t, format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t)),
            _ => Err(self.err(&t, format!("expected {what}"))),
        }
    }

    fn int(&mut self, what: &str) -> Result<usize, ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Int(v) => usize::try_from(v).map_err(|_| self.err(&t, "integer too large")),
            _ => Err(self.err(&t, format!("expected {what}"))),
        }
    }

    fn header(&mut self) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok != Tok::Ident("OPENQASM".into()) {
            return Err(self.err(&t, "malformed header: expected `OPENQASM 2.0;`"));
        }
        let v = self.next();
        match v.tok {
            Tok::Real(2.0) => {}
            Tok::Int(2) => {}
            _ => return Err(self.err(&v, "malformed header: only OPENQASM 2.0 is supported")),
        }
        self.expect(Tok::Semi, "`;` after header")?;
        Ok(())
    }

    fn circuit_mut(&mut self, at: &Token) -> Result<&mut Circuit, ParseError> {
        if self.circuit.is_none() {
            if self.qregs.is_empty() {
                return Err(self.err(at, "no qreg declared"));
            }
            let c = Circuit::from_registers(&self.qregs, &self.cregs)
                .map_err(|e| self.err(at, e.to_string()))?
                .with_label(self.origin);
            self.circuit = Some(c);
        }
        Ok(self.circuit.as_mut().expect("just created"))
    }

    fn statement(&mut self) -> Result<(), ParseError> {
        let head = self.peek().clone();
        match &head.tok {
            Tok::BreakDirective => {
                self.next();
                let span = SourceSpan::new(self.origin, head.line, head.column);
                let circuit = self.circuit_mut(&head)?;
                let all: Vec<usize> = (0..circuit.num_qubits()).collect();
                circuit
                    .push(GateKind::BreakBarrier, &all, &[], span)
                    .map_err(|e| ParseError::new(e.to_string(), head.line, head.column, "breakbarrier"))?;
                Ok(())
            }
            Tok::Ident(word) => match word.as_str() {
                "include" => {
                    self.next();
                    let t = self.next();
                    match &t.tok {
                        Tok::Str(s) if s == "qelib1.inc" => {}
                        Tok::Str(_) => return Err(self.err(&t, "only qelib1.inc may be included")),
                        _ => return Err(self.err(&t, "expected file name")),
                    }
                    self.expect(Tok::Semi, "`;`")?;
                    Ok(())
                }
                "qreg" | "creg" => self.declaration(word == "qreg"),
                "measure" => self.measure(),
                "OPENQASM" => Err(self.err(&head, "duplicate header")),
                "gate" | "opaque" | "if" | "reset" => {
                    Err(self.err(&head, format!("`{word}` is not supported")))
                }
                _ => self.gate(),
            },
            _ => Err(self.err(&head, "expected a statement")),
        }
    }

    fn declaration(&mut self, quantum: bool) -> Result<(), ParseError> {
        let kw = self.next();
        if self.circuit.is_some() {
            return Err(self.err(&kw, "register declarations must precede operations"));
        }
        let (name, name_tok) = self.ident("register name")?;
        self.expect(Tok::LBracket, "`[`")?;
        let size = self.int("register size")?;
        self.expect(Tok::RBracket, "`]`")?;
        self.expect(Tok::Semi, "`;`")?;
        if size == 0 {
            return Err(self.err(&name_tok, "register size must be positive"));
        }
        if self.qregs.iter().chain(&self.cregs).any(|(n, _)| n == &name) {
            return Err(self.err(&name_tok, format!("register `{name}` already declared")));
        }
        if quantum {
            self.qregs.push((name, size));
        } else {
            self.cregs.push((name, size));
        }
        Ok(())
    }

    fn operand(&mut self) -> Result<Operand, ParseError> {
        let (name, t) = self.ident("register operand")?;
        let index = if self.peek().tok == Tok::LBracket {
            self.next();
            let i = self.int("index")?;
            self.expect(Tok::RBracket, "`]`")?;
            Some(i)
        } else {
            None
        };
        Ok(Operand {
            name,
            index,
            line: t.line,
            column: t.column,
        })
    }

    /// Flat indices for an operand; whole registers expand to every element.
    fn resolve(&self, op: &Operand, quantum: bool) -> Result<Vec<usize>, ParseError> {
        let regs = if quantum { &self.qregs } else { &self.cregs };
        let mut offset = 0;
        for (name, size) in regs {
            if *name == op.name {
                return match op.index {
                    Some(i) if i < *size => Ok(vec![offset + i]),
                    Some(i) => Err(ParseError::new(
                        format!("index {i} out of range for `{}` of size {size}", op.name),
                        op.line,
                        op.column,
                        &op.name,
                    )),
                    None => Ok((offset..offset + size).collect()),
                };
            }
            offset += size;
        }
        let kind = if quantum { "quantum" } else { "classical" };
        Err(ParseError::new(
            format!("undeclared {kind} register `{}`", op.name),
            op.line,
            op.column,
            &op.name,
        ))
    }

    fn operand_list(&mut self) -> Result<Vec<Operand>, ParseError> {
        let mut ops = vec![self.operand()?];
        while self.peek().tok == Tok::Comma {
            self.next();
            ops.push(self.operand()?);
        }
        Ok(ops)
    }

    /// Expands register broadcasting into per-application qubit lists.
    fn broadcast(
        &self,
        operands: &[Operand],
        at: &Token,
    ) -> Result<Vec<Vec<usize>>, ParseError> {
        let resolved = operands
            .iter()
            .map(|o| Ok((o.index.is_none(), self.resolve(o, true)?)))
            .collect::<Result<Vec<_>, ParseError>>()?;
        let width = resolved
            .iter()
            .filter(|(whole, _)| *whole)
            .map(|(_, v)| v.len())
            .max()
            .unwrap_or(1);
        if resolved
            .iter()
            .any(|(whole, v)| *whole && v.len() != width)
        {
            return Err(self.err(at, "broadcast registers differ in size"));
        }
        Ok((0..width)
            .map(|k| {
                resolved
                    .iter()
                    .map(|(whole, v)| if *whole { v[k] } else { v[0] })
                    .collect()
            })
            .collect())
    }

    fn gate(&mut self) -> Result<(), ParseError> {
        let (name, head) = self.ident("gate name")?;
        let kind = GateKind::from_name(&name)
            .filter(|k| k.is_unitary() || *k == GateKind::Barrier)
            .ok_or_else(|| self.err(&head, format!("unknown gate `{name}`")))?;
        let mut angles = Vec::new();
        if self.peek().tok == Tok::LParen {
            self.next();
            if self.peek().tok != Tok::RParen {
                angles.push(self.expr()?);
                while self.peek().tok == Tok::Comma {
                    self.next();
                    angles.push(self.expr()?);
                }
            }
            self.expect(Tok::RParen, "`)`")?;
        }
        if angles.len() != kind.angle_arity() {
            return Err(self.err(
                &head,
                format!(
                    "gate `{name}` takes {} parameter(s), got {}",
                    kind.angle_arity(),
                    angles.len()
                ),
            ));
        }
        let operands = self.operand_list()?;
        self.expect(Tok::Semi, "`;`")?;
        let span = SourceSpan::new(self.origin, head.line, head.column);

        if kind == GateKind::Barrier {
            let mut qubits = Vec::new();
            for o in &operands {
                for q in self.resolve(o, true)? {
                    if !qubits.contains(&q) {
                        qubits.push(q);
                    }
                }
            }
            return self.emit(kind, &qubits, &angles, span, &head);
        }
        let expected = kind.qubit_arity().expect("unitary kinds have fixed arity");
        if operands.len() != expected {
            return Err(self.err(
                &head,
                format!(
                    "gate `{name}` expects {expected} qubit(s), got {}",
                    operands.len()
                ),
            ));
        }
        for qubits in self.broadcast(&operands, &head)? {
            self.emit(kind, &qubits, &angles, span.clone(), &head)?;
        }
        Ok(())
    }

    fn emit(
        &mut self,
        kind: GateKind,
        qubits: &[usize],
        angles: &[f64],
        span: SourceSpan,
        at: &Token,
    ) -> Result<(), ParseError> {
        let name = kind.qasm_name();
        let (line, column) = (at.line, at.column);
        let circuit = self.circuit_mut(at)?;
        circuit
            .push(kind, qubits, angles, span)
            .map_err(|e| ParseError::new(e.to_string(), line, column, name))?;
        Ok(())
    }

    fn measure(&mut self) -> Result<(), ParseError> {
        let head = self.next();
        let q = self.operand()?;
        self.expect(Tok::Arrow, "`->`")?;
        let c = self.operand()?;
        self.expect(Tok::Semi, "`;`")?;
        let qs = self.resolve(&q, true)?;
        let cs = self.resolve(&c, false)?;
        if qs.len() != cs.len() {
            return Err(self.err(&head, "measure operands differ in size"));
        }
        let span = SourceSpan::new(self.origin, head.line, head.column);
        let circuit = self.circuit_mut(&head)?;
        for (q, c) in qs.into_iter().zip(cs) {
            let op = GateOp {
                kind: GateKind::Measure,
                angles: Vec::new(),
                qubits: vec![circuit
                    .qubit_ref(q)
                    .map_err(|e| ParseError::new(e.to_string(), head.line, head.column, "measure"))?],
                clbits: vec![circuit
                    .clbit_ref(c)
                    .map_err(|e| ParseError::new(e.to_string(), head.line, head.column, "measure"))?],
                span: span.clone(),
            };
            circuit
                .add_gate(op)
                .map_err(|e| ParseError::new(e.to_string(), head.line, head.column, "measure"))?;
        }
        Ok(())
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<f64, ParseError> {
        let mut v = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    v += self.term()?;
                }
                Tok::Minus => {
                    self.next();
                    v -= self.term()?;
                }
                _ => return Ok(v),
            }
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<f64, ParseError> {
        let mut v = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    v *= self.unary()?;
                }
                Tok::Slash => {
                    let t = self.next();
                    let d = self.unary()?;
                    if d == 0.0 {
                        return Err(self.err(&t, "division by zero"));
                    }
                    v /= d;
                }
                _ => return Ok(v),
            }
        }
    }

    fn unary(&mut self) -> Result<f64, ParseError> {
        match self.peek().tok {
            Tok::Minus => {
                self.next();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    // power := primary ('^' unary)?
    fn power(&mut self) -> Result<f64, ParseError> {
        let base = self.primary()?;
        if self.peek().tok == Tok::Caret {
            let t = self.next();
            let exp = self.unary()?;
            if exp.fract() != 0.0 {
                return Err(self.err(&t, "only integer powers are supported"));
            }
            return Ok(base.powi(exp as i32));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<f64, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(v) => Ok(*v as f64),
            Tok::Real(v) => Ok(*v),
            Tok::Ident(s) if s == "pi" => Ok(PI),
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(v)
            }
            _ => Err(self.err(&t, "expected an angle expression")),
        }
    }
}
