//! Recursive descent parser (one token lookahead) for the `.bhdl` grammar.

use super::lexer::{Token, TokenKind};
use crate::error::{Error, Result};
use crate::expr::{BinOp, Expr, ParamType, ParamValue};
use crate::path::{Path, Segment};
use crate::quantity::{apply_suffix, build_quantity, Tolerance};

#[derive(Debug)]
pub struct AstFile {
    pub blocks: Vec<AstBlock>,
}

#[derive(Debug)]
pub struct AstBlock {
    pub name: String,
    pub parent: Option<String>,
    pub abstract_: bool,
    pub stmts: Vec<AstStmt>,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug)]
pub enum AstStmt {
    Port {
        name: String,
        kind: String,
        size: Option<usize>,
        args: Vec<(String, Expr)>,
    },
    Param {
        name: String,
        ty: ParamType,
        expr: Option<Expr>,
    },
    Inst {
        name: String,
        def: String,
        args: Vec<(String, Expr)>,
        line: usize,
        column: usize,
    },
    Connect {
        refs: Vec<Path>,
    },
    Export {
        port: String,
        target: Path,
    },
    Check {
        expr: Expr,
    },
}

pub fn parse_design(tokens: &[Token]) -> Result<AstFile> {
    let mut p = Parser { tokens, pos: 0 };
    let mut blocks = Vec::new();
    while !p.at_end() {
        blocks.push(p.block_decl()?);
    }
    Ok(AstFile { blocks })
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn at_end(&self) -> bool {
        self.peek().kind == TokenKind::End
    }

    fn advance(&mut self) -> &Token {
        let t = &self.tokens[self.pos];
        if t.kind != TokenKind::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        let t = self.peek();
        let found = if t.kind == TokenKind::End {
            "end of input".to_string()
        } else {
            t.text.clone()
        };
        Error::Parse {
            expected: expected.to_string(),
            found,
            line: t.line,
            column: t.column,
        }
    }

    fn expect_punct(&mut self, text: &str) -> Result<()> {
        if self.peek().kind == TokenKind::Punct && self.peek().text == text {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&format!("`{text}`")))
        }
    }

    fn eat_punct(&mut self, text: &str) -> bool {
        if self.peek().kind == TokenKind::Punct && self.peek().text == text {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.peek().kind == TokenKind::Keyword && self.peek().text == kw {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&format!("`{kw}`")))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.peek().kind == TokenKind::Keyword && self.peek().text == kw {
            self.advance();
            true
        } else {
            false
        }
    }

    fn identifier(&mut self, what: &str) -> Result<String> {
        if self.peek().kind == TokenKind::Identifier {
            Ok(self.advance().text.clone())
        } else {
            Err(self.error(what))
        }
    }

    fn integer(&mut self) -> Result<usize> {
        if self.peek().kind == TokenKind::Number {
            let t = self.advance();
            t.text.parse().map_err(|_| Error::Parse {
                expected: "integer".to_string(),
                found: t.text.clone(),
                line: t.line,
                column: t.column,
            })
        } else {
            Err(self.error("integer"))
        }
    }

    fn block_decl(&mut self) -> Result<AstBlock> {
        let abstract_ = self.eat_keyword("abstract");
        let start = self.peek().clone();
        self.expect_keyword("block")?;
        let name = self.identifier("block name")?;
        let parent = if self.eat_keyword("extends") {
            Some(self.identifier("parent block name")?)
        } else {
            None
        };
        self.expect_punct("{")?;
        let mut stmts = Vec::new();
        while !self.eat_punct("}") {
            if self.at_end() {
                return Err(self.error("`}`"));
            }
            stmts.push(self.stmt()?);
        }
        Ok(AstBlock {
            name,
            parent,
            abstract_,
            stmts,
            line: start.line,
            column: start.column,
        })
    }

    fn stmt(&mut self) -> Result<AstStmt> {
        if self.eat_keyword("port") {
            return self.port_decl();
        }
        if self.eat_keyword("param") {
            return self.param_decl();
        }
        if self.eat_keyword("connect") {
            return self.connect_stmt();
        }
        if self.eat_keyword("export") {
            return self.export_stmt();
        }
        if self.eat_keyword("check") {
            self.expect_punct("(")?;
            let expr = self.expr()?;
            self.expect_punct(")")?;
            return Ok(AstStmt::Check { expr });
        }
        // instance declaration
        let t = self.peek().clone();
        let name = self.identifier("statement")?;
        self.expect_punct("=")?;
        let def = self.identifier("definition name")?;
        self.expect_punct("(")?;
        let args = self.args_until_close()?;
        Ok(AstStmt::Inst {
            name,
            def,
            args,
            line: t.line,
            column: t.column,
        })
    }

    fn port_decl(&mut self) -> Result<AstStmt> {
        let name = self.identifier("port name")?;
        self.expect_punct(":")?;
        let kind = self.identifier("port kind")?;
        let size = if self.eat_punct("[") {
            let n = self.integer()?;
            self.expect_punct("]")?;
            Some(n)
        } else {
            None
        };
        let args = if self.eat_punct("(") {
            self.args_until_close()?
        } else {
            Vec::new()
        };
        Ok(AstStmt::Port {
            name,
            kind,
            size,
            args,
        })
    }

    fn param_decl(&mut self) -> Result<AstStmt> {
        let name = self.identifier("parameter name")?;
        self.expect_punct(":")?;
        let ty = if self.eat_keyword("interval") {
            ParamType::Interval
        } else if self.eat_keyword("bool") {
            ParamType::Bool
        } else if self.eat_keyword("int") {
            ParamType::Int
        } else if self.eat_keyword("text") {
            ParamType::Text
        } else {
            return Err(self.error("parameter type"));
        };
        let expr = if self.eat_punct("=") {
            Some(self.expr()?)
        } else {
            None
        };
        Ok(AstStmt::Param { name, ty, expr })
    }

    fn connect_stmt(&mut self) -> Result<AstStmt> {
        self.expect_punct("(")?;
        let mut refs = vec![self.portref()?];
        while self.eat_punct(",") {
            refs.push(self.portref()?);
        }
        self.expect_punct(")")?;
        if refs.len() < 2 {
            return Err(self.error("at least two port references"));
        }
        Ok(AstStmt::Connect { refs })
    }

    fn export_stmt(&mut self) -> Result<AstStmt> {
        let port = self.identifier("port name")?;
        self.expect_punct("=")?;
        let target = self.portref()?;
        Ok(AstStmt::Export { port, target })
    }

    fn args_until_close(&mut self) -> Result<Vec<(String, Expr)>> {
        let mut args = Vec::new();
        if self.eat_punct(")") {
            return Ok(args);
        }
        loop {
            let name = self.identifier("argument name")?;
            self.expect_punct("=")?;
            let expr = self.expr()?;
            args.push((name, expr));
            if self.eat_punct(",") {
                continue;
            }
            self.expect_punct(")")?;
            return Ok(args);
        }
    }

    fn portref(&mut self) -> Result<Path> {
        let mut segments = Vec::new();
        loop {
            let name = self.identifier("port reference")?;
            let index = if self.eat_punct("[") {
                let n = self.integer()?;
                self.expect_punct("]")?;
                Some(n)
            } else {
                None
            };
            segments.push(Segment { name, index });
            if !self.eat_punct(".") {
                break;
            }
        }
        Path::new(segments)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.peek().kind == TokenKind::Punct && self.peek().text == "+" {
                BinOp::Add
            } else if self.peek().kind == TokenKind::Punct && self.peek().text == "-" {
                BinOp::Sub
            } else {
                break;
            };
            self.advance();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.primary()?;
        loop {
            let op = if self.peek().kind == TokenKind::Punct && self.peek().text == "*" {
                BinOp::Mul
            } else if self.peek().kind == TokenKind::Punct && self.peek().text == "/" {
                BinOp::Div
            } else {
                break;
            };
            self.advance();
            let rhs = self.primary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Expr> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Number => self.quantity(),
            TokenKind::Str => {
                self.advance();
                Ok(Expr::Lit(ParamValue::Text(t.text)))
            }
            TokenKind::Keyword if t.text == "true" => {
                self.advance();
                Ok(Expr::Lit(ParamValue::Bool(true)))
            }
            TokenKind::Keyword if t.text == "false" => {
                self.advance();
                Ok(Expr::Lit(ParamValue::Bool(false)))
            }
            TokenKind::Keyword if t.text == "range" => {
                self.advance();
                self.expect_punct("(")?;
                let a = self.expr()?;
                self.expect_punct(",")?;
                let b = self.expr()?;
                self.expect_punct(")")?;
                Ok(Expr::Range(Box::new(a), Box::new(b)))
            }
            TokenKind::Punct if t.text == "(" => {
                self.advance();
                let e = self.expr()?;
                self.expect_punct(")")?;
                Ok(e)
            }
            TokenKind::Identifier => {
                // function call or path reference
                if self.tokens[self.pos + 1].kind == TokenKind::Punct
                    && self.tokens[self.pos + 1].text == "("
                {
                    self.advance();
                    self.expect_punct("(")?;
                    let a = self.expr()?;
                    self.expect_punct(",")?;
                    let b = self.expr()?;
                    self.expect_punct(")")?;
                    let (a, b) = (Box::new(a), Box::new(b));
                    return Ok(match t.text.as_str() {
                        "min" => Expr::Min(a, b),
                        "max" => Expr::Max(a, b),
                        "hull" => Expr::Hull(a, b),
                        "intersect" => Expr::Intersect(a, b),
                        "subset_of" => Expr::SubsetOf(a, b),
                        "contains" => Expr::Contains(a, b),
                        _ => {
                            return Err(Error::Parse {
                                expected: "function name".to_string(),
                                found: t.text,
                                line: t.line,
                                column: t.column,
                            })
                        }
                    });
                }
                let path = self.portref()?;
                Ok(Expr::Ref(path))
            }
            _ => Err(self.error("expression")),
        }
    }

    /// Quantity literal. An integer with no unit suffix is an `int` literal;
    /// anything with a unit, a decimal point or a tolerance is an interval.
    fn quantity(&mut self) -> Result<Expr> {
        let num_tok = self.advance().clone();
        let value: f64 = num_tok.text.parse().map_err(|_| Error::Parse {
            expected: "number".to_string(),
            found: num_tok.text.clone(),
            line: num_tok.line,
            column: num_tok.column,
        })?;
        let suffix = if self.peek().kind == TokenKind::UnitSuffix {
            Some(self.advance().text.clone())
        } else {
            None
        };
        let has_tol = self.peek().kind == TokenKind::Punct && self.peek().text == "+-";
        if suffix.is_none() && !has_tol {
            let is_integral = !num_tok.text.contains('.') && !num_tok.text.contains('e');
            if is_integral {
                return Ok(Expr::Lit(ParamValue::Int(num_tok.text.parse().map_err(
                    |_| Error::Parse {
                        expected: "integer".to_string(),
                        found: num_tok.text.clone(),
                        line: num_tok.line,
                        column: num_tok.column,
                    },
                )?)));
            }
        }
        let center = apply_suffix(value, suffix.as_deref().unwrap_or(""))?;
        let tol = if has_tol {
            self.advance();
            let tol_tok = self.peek().clone();
            if tol_tok.kind != TokenKind::Number {
                return Err(self.error("tolerance value"));
            }
            self.advance();
            let tval: f64 = tol_tok.text.parse().map_err(|_| Error::Parse {
                expected: "number".to_string(),
                found: tol_tok.text.clone(),
                line: tol_tok.line,
                column: tol_tok.column,
            })?;
            if self.peek().kind == TokenKind::UnitSuffix {
                let s = self.advance().text.clone();
                if s == "%" {
                    Some(Tolerance::Percent(tval))
                } else {
                    Some(Tolerance::Absolute(apply_suffix(tval, &s)?))
                }
            } else {
                Some(Tolerance::Absolute(apply_suffix(tval, "")?))
            }
        } else {
            None
        };
        Ok(Expr::lit_interval(build_quantity(center, tol)?))
    }
}
