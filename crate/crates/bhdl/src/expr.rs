//! Parameter value expressions: pure trees evaluated bottom-up against an
//! environment of solved parameters.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::path::Path;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamType {
    Interval,
    Bool,
    Int,
    Text,
}

impl fmt::Display for ParamType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParamType::Interval => "interval",
            ParamType::Bool => "bool",
            ParamType::Int => "int",
            ParamType::Text => "text",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Interval(Interval),
    Bool(bool),
    Int(i64),
    Text(String),
}

impl ParamValue {
    pub fn type_of(&self) -> ParamType {
        match self {
            ParamValue::Interval(_) => ParamType::Interval,
            ParamValue::Bool(_) => ParamType::Bool,
            ParamValue::Int(_) => ParamType::Int,
            ParamValue::Text(_) => ParamType::Text,
        }
    }

    pub fn as_interval(&self) -> Result<&Interval> {
        match self {
            ParamValue::Interval(i) => Ok(i),
            other => Err(Error::ArgType(format!(
                "expected interval, got {}",
                other.type_of()
            ))),
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Interval(i) => write!(f, "{i}"),
            ParamValue::Bool(b) => write!(f, "{b}"),
            ParamValue::Int(i) => write!(f, "{i}"),
            ParamValue::Text(t) => write!(f, "{t:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Lit(ParamValue),
    /// Reference to a parameter, relative to the evaluation base path.
    Ref(Path),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    Hull(Box<Expr>, Box<Expr>),
    Intersect(Box<Expr>, Box<Expr>),
    Range(Box<Expr>, Box<Expr>),
    SubsetOf(Box<Expr>, Box<Expr>),
    Contains(Box<Expr>, Box<Expr>),
    /// Sum of the named parameter over the sink endpoints of the link this
    /// expression is attached to.
    SumOverSinks(String),
}

impl Expr {
    pub fn lit_interval(i: Interval) -> Expr {
        Expr::Lit(ParamValue::Interval(i))
    }

    pub fn reference(p: Path) -> Expr {
        Expr::Ref(p)
    }
}

/// Evaluation context: where relative refs resolve from, how parameter
/// values are looked up, and (for link rules) the sink endpoint list.
pub struct EvalCtx<'a> {
    pub base: Option<&'a Path>,
    pub lookup: &'a dyn Fn(&Path) -> Option<ParamValue>,
    pub sinks: Option<&'a [Path]>,
}

impl<'a> EvalCtx<'a> {
    pub fn resolve(&self, rel: &Path) -> Path {
        match self.base {
            Some(base) => base.join(rel),
            None => rel.clone(),
        }
    }
}

/// Absolute paths of every parameter the expression reads.
pub fn collect_refs(expr: &Expr, base: Option<&Path>, sinks: Option<&[Path]>) -> Vec<Path> {
    let mut out = Vec::new();
    collect_refs_into(expr, base, sinks, &mut out);
    out.sort();
    out.dedup();
    out
}

fn collect_refs_into(
    expr: &Expr,
    base: Option<&Path>,
    sinks: Option<&[Path]>,
    out: &mut Vec<Path>,
) {
    match expr {
        Expr::Lit(_) => {}
        Expr::Ref(p) => out.push(match base {
            Some(b) => b.join(p),
            None => p.clone(),
        }),
        Expr::Bin(_, a, b)
        | Expr::Min(a, b)
        | Expr::Max(a, b)
        | Expr::Hull(a, b)
        | Expr::Intersect(a, b)
        | Expr::Range(a, b)
        | Expr::SubsetOf(a, b)
        | Expr::Contains(a, b) => {
            collect_refs_into(a, base, sinks, out);
            collect_refs_into(b, base, sinks, out);
        }
        Expr::SumOverSinks(param) => {
            if let Some(sinks) = sinks {
                for sink in sinks {
                    out.push(sink.child(param.clone()));
                }
            }
        }
    }
}

fn to_interval(v: ParamValue) -> Result<Interval> {
    match v {
        ParamValue::Interval(i) => Ok(i),
        ParamValue::Int(n) => Ok(Interval::scalar(n as f64)),
        other => Err(Error::ArgType(format!(
            "expected interval, got {}",
            other.type_of()
        ))),
    }
}

pub fn eval(expr: &Expr, ctx: &EvalCtx) -> Result<ParamValue> {
    match expr {
        Expr::Lit(v) => Ok(v.clone()),
        Expr::Ref(p) => {
            let abs = ctx.resolve(p);
            (ctx.lookup)(&abs).ok_or(Error::UnsolvedRef {
                param: abs.clone(),
                missing: abs,
            })
        }
        Expr::Bin(op, a, b) => {
            let a = eval(a, ctx)?;
            let b = eval(b, ctx)?;
            match (&a, &b) {
                (ParamValue::Int(x), ParamValue::Int(y)) => {
                    let v = match op {
                        BinOp::Add => x + y,
                        BinOp::Sub => x - y,
                        BinOp::Mul => x * y,
                        BinOp::Div => {
                            if *y == 0 {
                                return Err(Error::DivZero);
                            }
                            x / y
                        }
                    };
                    Ok(ParamValue::Int(v))
                }
                _ => {
                    let a = to_interval(a)?;
                    let b = to_interval(b)?;
                    let r = match op {
                        BinOp::Add => a.add(&b)?,
                        BinOp::Sub => a.sub(&b)?,
                        BinOp::Mul => a.mul(&b)?,
                        BinOp::Div => a.div(&b)?,
                    };
                    Ok(ParamValue::Interval(r))
                }
            }
        }
        Expr::Min(a, b) => binary_interval(a, b, ctx, |x, y| x.min(&y)),
        Expr::Max(a, b) => binary_interval(a, b, ctx, |x, y| x.max(&y)),
        Expr::Hull(a, b) => binary_interval(a, b, ctx, |x, y| x.hull(&y)),
        Expr::Intersect(a, b) => binary_interval(a, b, ctx, |x, y| x.intersect(&y)),
        Expr::Range(a, b) => {
            let a = to_interval(eval(a, ctx)?)?;
            let b = to_interval(eval(b, ctx)?)?;
            if a.dim() != b.dim() {
                return Err(Error::DimMismatch(a.dim().to_string(), b.dim().to_string()));
            }
            match (a.bounds(), b.bounds()) {
                (Some((lo, _)), Some((_, hi))) => {
                    Ok(ParamValue::Interval(Interval::new(lo, hi, a.dim())?))
                }
                _ => Ok(ParamValue::Interval(Interval::empty(a.dim()))),
            }
        }
        Expr::SubsetOf(a, b) => {
            let a = to_interval(eval(a, ctx)?)?;
            let b = to_interval(eval(b, ctx)?)?;
            Ok(ParamValue::Bool(a.subset_of(&b)?))
        }
        Expr::Contains(a, b) => {
            let a = to_interval(eval(a, ctx)?)?;
            let b = to_interval(eval(b, ctx)?)?;
            Ok(ParamValue::Bool(a.contains(&b)?))
        }
        Expr::SumOverSinks(param) => {
            let sinks = ctx
                .sinks
                .ok_or_else(|| Error::Domain("sum_over_sinks used outside a link rule".into()))?;
            let mut acc: Option<Interval> = None;
            for sink in sinks {
                let p = sink.child(param.clone());
                let v = (ctx.lookup)(&p).ok_or(Error::UnsolvedRef {
                    param: p.clone(),
                    missing: p,
                })?;
                let v = to_interval(v)?;
                acc = Some(match acc {
                    None => v,
                    Some(a) => a.add(&v)?,
                });
            }
            acc.map(ParamValue::Interval)
                .ok_or_else(|| Error::Domain("sum_over_sinks on a link with no sinks".into()))
        }
    }
}

fn binary_interval(
    a: &Expr,
    b: &Expr,
    ctx: &EvalCtx,
    f: impl Fn(Interval, Interval) -> Result<Interval>,
) -> Result<ParamValue> {
    let a = to_interval(eval(a, ctx)?)?;
    let b = to_interval(eval(b, ctx)?)?;
    Ok(ParamValue::Interval(f(a, b)?))
}

/// Render the expression with refs absolutized against `base`, for reports.
pub fn render(expr: &Expr, base: Option<&Path>) -> String {
    match expr {
        Expr::Lit(v) => v.to_string(),
        Expr::Ref(p) => match base {
            Some(b) => b.join(p).to_string(),
            None => p.to_string(),
        },
        Expr::Bin(op, a, b) => {
            format!("({} {} {})", render(a, base), op.symbol(), render(b, base))
        }
        Expr::Min(a, b) => format!("min({}, {})", render(a, base), render(b, base)),
        Expr::Max(a, b) => format!("max({}, {})", render(a, base), render(b, base)),
        Expr::Hull(a, b) => format!("hull({}, {})", render(a, base), render(b, base)),
        Expr::Intersect(a, b) => {
            format!("intersect({}, {})", render(a, base), render(b, base))
        }
        Expr::Range(a, b) => format!("range({}, {})", render(a, base), render(b, base)),
        Expr::SubsetOf(a, b) => {
            format!("subset_of({}, {})", render(a, base), render(b, base))
        }
        Expr::Contains(a, b) => {
            format!("contains({}, {})", render(a, base), render(b, base))
        }
        Expr::SumOverSinks(p) => format!("sum_over_sinks({p})"),
    }
}
