//! Surface syntax: lexer, parser, and lowering into library definitions.

pub mod lexer;
mod lower;
pub mod parser;

pub use lower::lower_file;

use crate::error::Result;
use crate::stdlib::Library;

/// Parse `.bhdl` source and add its block definitions to `lib`. Returns the
/// defined names in declaration order.
pub fn load_design(source: &str, lib: &mut Library) -> Result<Vec<String>> {
    let tokens = lexer::tokenize(source)?;
    let ast = parser::parse_design(&tokens)?;
    lower_file(&ast, lib)
}
