//! Recursive-descent parser over the token stream.

use crate::calculus::{BinOp, Expression, Payload, Process, UnOp, Value};
use crate::ids::{Label, Level, Participant, Topic, TypeVar};
use crate::types::{AnnotatedSort, GlobalType, SessionType, Sort, TypeBranch};

use super::lexer::{Spanned, Tok};
use super::DslError;

/// One top-level item of a model file.
#[derive(Clone, Debug)]
pub enum Item {
    Lattice {
        levels: Vec<Level>,
        below: Vec<(Level, Level)>,
    },
    Topics {
        topics: Vec<Topic>,
        indep: Vec<(Topic, Topic)>,
    },
    ReadDefault(Level),
    Read(Participant, Topic, Level),
    Proc(String, Process),
    Session(String, Vec<(Participant, Process)>),
    Global(String, GlobalType),
}

pub struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    pub fn new(toks: Vec<Spanned>) -> Self {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1))
    }

    fn error(&self, msg: impl Into<String>) -> DslError {
        let (line, col) = self.here();
        DslError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), DslError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected {}, found {}", want.describe(), t.describe()))),
            None => Err(self.error(format!("expected {}, found end of input", want.describe()))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, DslError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            Some(t) => Err(self.error(format!("expected {what}, found {}", t.describe()))),
            None => Err(self.error(format!("expected {what}, found end of input"))),
        }
    }

    /// A non-keyword identifier for names of participants, labels, levels
    /// and topics.
    fn name(&mut self, what: &str) -> Result<String, DslError> {
        let s = self.ident(what)?;
        if is_keyword(&s) {
            self.pos -= 1;
            return Err(self.error(format!("expected {what}, found keyword `{s}`")));
        }
        Ok(s)
    }

    fn at_ident(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn eat_ident(&mut self, kw: &str) -> bool {
        if self.at_ident(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn expect_end(&self) -> Result<(), DslError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!(
                "expected end of input, found {}",
                self.peek().unwrap().describe()
            )))
        }
    }

    // ---- top level -------------------------------------------------------

    pub fn items(&mut self) -> Result<Vec<Item>, DslError> {
        let mut out = Vec::new();
        while !self.at_end() {
            out.push(self.item()?);
        }
        Ok(out)
    }

    fn item(&mut self) -> Result<Item, DslError> {
        if self.eat_ident("lattice") {
            self.lattice_block()
        } else if self.eat_ident("topics") {
            self.topics_block()
        } else if self.eat_ident("read") {
            self.read_line()
        } else if self.eat_ident("proc") {
            let name = self.name("process name")?;
            self.expect(Tok::Assign)?;
            let p = self.process()?;
            self.expect(Tok::Semi)?;
            Ok(Item::Proc(name, p))
        } else if self.eat_ident("session") {
            let name = self.name("session name")?;
            self.expect(Tok::Assign)?;
            let mut members = Vec::new();
            loop {
                let participant = Participant::new(self.name("participant")?);
                self.expect(Tok::Colon)?;
                let p = self.process()?;
                members.push((participant, p));
                if !matches!(self.peek(), Some(Tok::Pipe)) {
                    break;
                }
                self.pos += 1;
            }
            self.expect(Tok::Semi)?;
            Ok(Item::Session(name, members))
        } else if self.eat_ident("global") {
            let name = self.name("global type name")?;
            self.expect(Tok::Assign)?;
            let g = self.global()?;
            self.expect(Tok::Semi)?;
            Ok(Item::Global(name, g))
        } else {
            Err(self.error(match self.peek() {
                Some(t) => format!("expected a declaration, found {}", t.describe()),
                None => "expected a declaration".into(),
            }))
        }
    }

    fn lattice_block(&mut self) -> Result<Item, DslError> {
        self.expect(Tok::LBrace)?;
        if !self.eat_ident("levels") {
            return Err(self.error("expected `levels`"));
        }
        let mut levels = Vec::new();
        while !matches!(self.peek(), Some(Tok::Semi)) {
            levels.push(Level::new(self.name("level")?));
        }
        self.expect(Tok::Semi)?;
        if levels.is_empty() {
            return Err(self.error("a lattice needs at least one level"));
        }
        let mut below = Vec::new();
        while self.eat_ident("below") {
            let a = Level::new(self.name("level")?);
            let b = Level::new(self.name("level")?);
            self.expect(Tok::Semi)?;
            below.push((a, b));
        }
        self.expect(Tok::RBrace)?;
        Ok(Item::Lattice { levels, below })
    }

    fn topics_block(&mut self) -> Result<Item, DslError> {
        self.expect(Tok::LBrace)?;
        let mut topics = Vec::new();
        while !matches!(self.peek(), Some(Tok::Semi)) {
            topics.push(Topic::new(self.name("topic")?));
        }
        self.expect(Tok::Semi)?;
        if topics.is_empty() {
            return Err(self.error("a topic universe needs at least one topic"));
        }
        let mut indep = Vec::new();
        while self.eat_ident("indep") {
            let a = Topic::new(self.name("topic")?);
            let b = Topic::new(self.name("topic")?);
            self.expect(Tok::Semi)?;
            indep.push((a, b));
        }
        self.expect(Tok::RBrace)?;
        Ok(Item::Topics { topics, indep })
    }

    fn read_line(&mut self) -> Result<Item, DslError> {
        if self.eat_ident("default") {
            self.expect(Tok::Assign)?;
            let l = Level::new(self.name("level")?);
            self.expect(Tok::Semi)?;
            return Ok(Item::ReadDefault(l));
        }
        let p = Participant::new(self.name("participant")?);
        let t = Topic::new(self.name("topic")?);
        self.expect(Tok::Assign)?;
        let l = Level::new(self.name("level")?);
        self.expect(Tok::Semi)?;
        Ok(Item::Read(p, t, l))
    }

    // ---- processes -------------------------------------------------------

    pub fn process(&mut self) -> Result<Process, DslError> {
        let mut acc = self.process_unit()?;
        loop {
            match self.peek() {
                Some(Tok::OPlus) => {
                    self.pos += 1;
                    let rhs = self.process_unit()?;
                    acc = Process::InternalChoice(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.process_unit()?;
                    acc = Process::ExternalChoice(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn process_unit(&mut self) -> Result<Process, DslError> {
        if self.eat_ident("end") {
            return Ok(Process::Inact);
        }
        if self.eat_ident("rec") {
            let var = self.process_var()?;
            let annotation = if matches!(self.peek(), Some(Tok::Colon)) {
                self.pos += 1;
                Some(self.session_type()?)
            } else {
                None
            };
            self.expect(Tok::Dot)?;
            let body = self.process_unit()?;
            return Ok(Process::Rec {
                var,
                annotation,
                body: Box::new(body),
            });
        }
        if matches!(self.peek(), Some(Tok::LParen)) {
            self.pos += 1;
            let p = self.process()?;
            self.expect(Tok::RParen)?;
            return Ok(p);
        }
        match (self.peek(), self.peek2()) {
            (Some(Tok::Ident(_)), Some(Tok::Bang)) => {
                let to = Participant::new(self.name("participant")?);
                self.pos += 1; // `!`
                let label = Label::new(self.name("label")?);
                self.expect(Tok::LParen)?;
                let expr = self.expression()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                let cont = self.process_unit()?;
                Ok(Process::Output {
                    to,
                    label,
                    expr,
                    cont: Box::new(cont),
                })
            }
            (Some(Tok::Ident(_)), Some(Tok::Question)) => {
                let from = Participant::new(self.name("participant")?);
                self.pos += 1; // `?`
                let label = Label::new(self.name("label")?);
                self.expect(Tok::LParen)?;
                let var = self.name("variable")?;
                let annotation = if matches!(self.peek(), Some(Tok::Colon)) {
                    self.pos += 1;
                    Some(self.annotated_sort()?)
                } else {
                    None
                };
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                let cont = self.process_unit()?;
                Ok(Process::Input {
                    from,
                    label,
                    var,
                    annotation,
                    cont: Box::new(cont),
                })
            }
            (Some(Tok::Ident(_)), _) => self.process_var().map(Process::Var),
            (Some(t), _) => {
                let msg = format!("expected a process, found {}", t.describe());
                Err(self.error(msg))
            }
            (None, _) => Err(self.error("expected a process, found end of input")),
        }
    }

    /// Process variables (and named process references) are capitalized;
    /// a lowercase bare identifier in process position is an expression
    /// leaking into process syntax.
    fn process_var(&mut self) -> Result<String, DslError> {
        let here = self.here();
        let s = self.name("process variable")?;
        if s.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
            Ok(s)
        } else {
            Err(DslError::Syntax {
                line: here.0,
                col: here.1,
                msg: format!("expected a process, found expression `{s}`"),
            })
        }
    }

    // ---- expressions -----------------------------------------------------

    pub fn expression(&mut self) -> Result<Expression, DslError> {
        self.expr_or()
    }

    fn expr_or(&mut self) -> Result<Expression, DslError> {
        let mut acc = self.expr_and()?;
        while self.at_ident("or") {
            self.pos += 1;
            let rhs = self.expr_and()?;
            acc = Expression::Bin(BinOp::Or, Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn expr_and(&mut self) -> Result<Expression, DslError> {
        let mut acc = self.expr_cmp()?;
        while self.at_ident("and") {
            self.pos += 1;
            let rhs = self.expr_cmp()?;
            acc = Expression::Bin(BinOp::And, Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn expr_cmp(&mut self) -> Result<Expression, DslError> {
        let mut acc = self.expr_add()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Lt) => BinOp::Lt,
                Some(Tok::EqEq) => BinOp::Eq,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.expr_add()?;
            acc = Expression::Bin(op, Box::new(acc), Box::new(rhs));
        }
    }

    fn expr_add(&mut self) -> Result<Expression, DslError> {
        let mut acc = self.expr_mul()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                Some(Tok::PlusPlus) => BinOp::Concat,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.expr_mul()?;
            acc = Expression::Bin(op, Box::new(acc), Box::new(rhs));
        }
    }

    fn expr_mul(&mut self) -> Result<Expression, DslError> {
        let mut acc = self.expr_unary()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.pos += 1;
            let rhs = self.expr_unary()?;
            acc = Expression::Bin(BinOp::Mul, Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn expr_unary(&mut self) -> Result<Expression, DslError> {
        if self.at_ident("not") {
            self.pos += 1;
            let inner = self.expr_unary()?;
            return Ok(Expression::Un(UnOp::Not, Box::new(inner)));
        }
        self.expr_atom()
    }

    fn expr_atom(&mut self) -> Result<Expression, DslError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expression()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Nat(n)) => {
                self.pos += 1;
                self.annotated_literal(Payload::Nat(n))
            }
            Some(Tok::Int(n)) => {
                self.pos += 1;
                self.annotated_literal(Payload::Int(n))
            }
            Some(Tok::Minus) => {
                // A leading minus in atom position is a negative integer
                // literal.
                self.pos += 1;
                match self.bump() {
                    Some(Tok::Int(n)) => self.annotated_literal(Payload::Int(-n)),
                    _ => {
                        self.pos -= 1;
                        Err(self.error("expected an integer literal after `-`"))
                    }
                }
            }
            Some(Tok::Str(s)) => {
                self.pos += 1;
                self.annotated_literal(Payload::Str(s))
            }
            Some(Tok::Ident(s)) if s == "true" || s == "false" => {
                self.pos += 1;
                self.annotated_literal(Payload::Bool(s == "true"))
            }
            Some(Tok::Ident(s)) if !is_keyword(&s) => {
                self.pos += 1;
                Ok(Expression::Var(s))
            }
            Some(t) => {
                let msg = format!("expected an expression, found {}", t.describe());
                Err(self.error(msg))
            }
            None => Err(self.error("expected an expression, found end of input")),
        }
    }

    /// The mandatory `^{level,topic}` annotation of a literal.
    fn annotated_literal(&mut self, payload: Payload) -> Result<Expression, DslError> {
        let (level, topic) = self.annotation()?;
        Ok(Expression::Lit(Value::new(payload, level, topic)))
    }

    fn annotation(&mut self) -> Result<(Level, Topic), DslError> {
        self.expect(Tok::Caret)?;
        self.expect(Tok::LBrace)?;
        let level = Level::new(self.name("level")?);
        self.expect(Tok::Comma)?;
        let topic = Topic::new(self.name("topic")?);
        self.expect(Tok::RBrace)?;
        Ok((level, topic))
    }

    pub fn annotated_sort(&mut self) -> Result<AnnotatedSort, DslError> {
        let sort = match self.ident("sort")?.as_str() {
            "nat" => Sort::Nat,
            "int" => Sort::Int,
            "bool" => Sort::Bool,
            "str" => Sort::Str,
            other => {
                self.pos -= 1;
                return Err(self.error(format!("unknown sort `{other}`")));
            }
        };
        let (level, topic) = self.annotation()?;
        Ok(AnnotatedSort::new(sort, level, topic))
    }

    // ---- session types ---------------------------------------------------

    pub fn session_type(&mut self) -> Result<SessionType, DslError> {
        if self.eat_ident("end") {
            return Ok(SessionType::End);
        }
        if self.eat_ident("rec") {
            let var = TypeVar::new(self.name("type variable")?);
            self.expect(Tok::Dot)?;
            let body = self.session_type()?;
            return Ok(SessionType::Rec {
                var,
                body: Box::new(body),
            });
        }
        if matches!(self.peek(), Some(Tok::LParen)) {
            self.pos += 1;
            let t = self.session_type()?;
            self.expect(Tok::RParen)?;
            return Ok(t);
        }
        match (self.peek(), self.peek2()) {
            (Some(Tok::Ident(_)), Some(Tok::Bang)) => {
                let to = Participant::new(self.name("participant")?);
                self.pos += 1;
                let branches = self.type_branches()?;
                Ok(SessionType::Out { to, branches })
            }
            (Some(Tok::Ident(_)), Some(Tok::Question)) => {
                let from = Participant::new(self.name("participant")?);
                self.pos += 1;
                let branches = self.type_branches()?;
                Ok(SessionType::In { from, branches })
            }
            (Some(Tok::Ident(_)), _) => {
                Ok(SessionType::Var(TypeVar::new(self.name("type variable")?)))
            }
            (Some(t), _) => {
                let msg = format!("expected a session type, found {}", t.describe());
                Err(self.error(msg))
            }
            (None, _) => Err(self.error("expected a session type, found end of input")),
        }
    }

    fn type_branches(&mut self) -> Result<Vec<TypeBranch<SessionType>>, DslError> {
        if matches!(self.peek(), Some(Tok::LBrace)) {
            self.pos += 1;
            let mut out = vec![self.type_branch()?];
            while matches!(self.peek(), Some(Tok::Comma)) {
                self.pos += 1;
                out.push(self.type_branch()?);
            }
            self.expect(Tok::RBrace)?;
            Ok(out)
        } else {
            Ok(vec![self.type_branch()?])
        }
    }

    fn type_branch(&mut self) -> Result<TypeBranch<SessionType>, DslError> {
        let label = Label::new(self.name("label")?);
        self.expect(Tok::LParen)?;
        let payload = self.annotated_sort()?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::Dot)?;
        let cont = self.session_type()?;
        Ok(TypeBranch {
            label,
            payload,
            cont,
        })
    }

    // ---- global types ----------------------------------------------------

    pub fn global(&mut self) -> Result<GlobalType, DslError> {
        if self.eat_ident("end") {
            return Ok(GlobalType::End);
        }
        if self.eat_ident("rec") {
            let var = TypeVar::new(self.name("type variable")?);
            self.expect(Tok::Dot)?;
            let body = self.global()?;
            return Ok(GlobalType::Rec {
                var,
                body: Box::new(body),
            });
        }
        if matches!(self.peek(), Some(Tok::LParen)) {
            self.pos += 1;
            let g = self.global()?;
            self.expect(Tok::RParen)?;
            return Ok(g);
        }
        match (self.peek(), self.peek2()) {
            (Some(Tok::Ident(_)), Some(Tok::Arrow)) => {
                let from = Participant::new(self.name("participant")?);
                self.pos += 1;
                let to = Participant::new(self.name("participant")?);
                self.expect(Tok::Colon)?;
                let branches = if matches!(self.peek(), Some(Tok::LBrace)) {
                    self.pos += 1;
                    let mut out = vec![self.global_branch()?];
                    while matches!(self.peek(), Some(Tok::Comma)) {
                        self.pos += 1;
                        out.push(self.global_branch()?);
                    }
                    self.expect(Tok::RBrace)?;
                    out
                } else {
                    vec![self.global_branch()?]
                };
                Ok(GlobalType::Comm { from, to, branches })
            }
            (Some(Tok::Ident(_)), _) => {
                Ok(GlobalType::Var(TypeVar::new(self.name("type variable")?)))
            }
            (Some(t), _) => {
                let msg = format!("expected a global type, found {}", t.describe());
                Err(self.error(msg))
            }
            (None, _) => Err(self.error("expected a global type, found end of input")),
        }
    }

    fn global_branch(&mut self) -> Result<TypeBranch<GlobalType>, DslError> {
        let label = Label::new(self.name("label")?);
        self.expect(Tok::LParen)?;
        let payload = self.annotated_sort()?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::Dot)?;
        let cont = self.global()?;
        Ok(TypeBranch {
            label,
            payload,
            cont,
        })
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(
        s,
        "lattice"
            | "levels"
            | "below"
            | "topics"
            | "indep"
            | "read"
            | "default"
            | "proc"
            | "session"
            | "global"
            | "rec"
            | "end"
            | "and"
            | "or"
            | "not"
    )
}
