use crate::path::Path;
use thiserror::Error;

/// All failure modes of the compiler pipeline. Each variant maps to a stable
/// diagnostic code via [`Error::code`], which the CLI prints as
/// `error[E_CODE] at <loc>: message`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed path `{0}`")]
    PathSyntax(String),
    #[error("malformed quantity `{0}`")]
    QtySyntax(String),
    #[error("unknown unit `{0}`")]
    UnitUnknown(String),
    #[error("tolerance unit does not match value unit in `{0}`")]
    UnitMismatch(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(String, String),
    #[error("value out of domain: {0}")]
    Domain(String),
    #[error("division by an interval containing zero")]
    DivZero,

    #[error("illegal character `{ch}`")]
    Lex {
        ch: char,
        line: usize,
        column: usize,
    },
    #[error("expected {expected}, found `{found}`")]
    Parse {
        expected: String,
        found: String,
        line: usize,
        column: usize,
    },

    #[error("unknown block `{0}`")]
    UnknownBlock(String),
    #[error("duplicate definition `{0}`")]
    DupDef(String),
    #[error("unknown port `{0}`")]
    UnknownPort(String),
    #[error("argument type mismatch: {0}")]
    ArgType(String),
    #[error("invalid definition: {0}")]
    DefInvalid(String),

    #[error("`{candidate}` is not a subtype of `{declared}`")]
    BadRefinement { candidate: String, declared: String },
    #[error("`{0}` is abstract and no refinement was provided")]
    AbstractUnrefined(String),
    #[error("ports cannot form a legal link: {0}")]
    ConnectKind(String),

    #[error("generator cannot produce a valid subcircuit: {0}")]
    GenInfeasible(String),
    #[error("no generator can make progress; stuck: {0}")]
    GenStuck(String),
    #[error("elaboration did not converge within {0} iterations")]
    MaxIter(usize),

    #[error("parameter dependency cycle: {0}")]
    ParamCycle(String),
    #[error("parameter `{param}` references unsolved `{missing}`")]
    UnsolvedRef { param: Path, missing: Path },

    #[error("refinement config: {0}")]
    ConfigSyntax(String),
    #[error("{0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::PathSyntax(_) => "E_PATH_SYNTAX",
            Error::QtySyntax(_) => "E_QTY_SYNTAX",
            Error::UnitUnknown(_) => "E_UNIT_UNKNOWN",
            Error::UnitMismatch(_) => "E_UNIT_MISMATCH",
            Error::DimMismatch(..) => "E_DIM_MISMATCH",
            Error::Domain(_) => "E_DOMAIN",
            Error::DivZero => "E_DIV_ZERO",
            Error::Lex { .. } => "E_LEX",
            Error::Parse { .. } => "E_PARSE",
            Error::UnknownBlock(_) => "E_UNKNOWN_BLOCK",
            Error::DupDef(_) => "E_DUP_DEF",
            Error::UnknownPort(_) => "E_UNKNOWN_PORT",
            Error::ArgType(_) => "E_ARG_TYPE",
            Error::DefInvalid(_) => "E_DEF_INVALID",
            Error::BadRefinement { .. } => "E_BAD_REFINEMENT",
            Error::AbstractUnrefined(_) => "E_ABSTRACT_UNREFINED",
            Error::ConnectKind(_) => "E_CONNECT_KIND",
            Error::GenInfeasible(_) => "E_GEN_INFEASIBLE",
            Error::GenStuck(_) => "E_GEN_STUCK",
            Error::MaxIter(_) => "E_MAX_ITER",
            Error::ParamCycle(_) => "E_PARAM_CYCLE",
            Error::UnsolvedRef { .. } => "E_UNSOLVED_REF",
            Error::ConfigSyntax(_) => "E_CONFIG_SYNTAX",
            Error::Io(_) => "E_IO",
        }
    }

    /// Source location for lexer/parser diagnostics, if any.
    pub fn location(&self) -> Option<(usize, usize)> {
        match self {
            Error::Lex { line, column, .. } | Error::Parse { line, column, .. } => {
                Some((*line, *column))
            }
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
