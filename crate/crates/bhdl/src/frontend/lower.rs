//! Lowering from the AST into `BlockDefinition`s registered in a library.
//!
//! Blocks may reference library blocks or blocks defined earlier in the same
//! file; forward references are rejected. Structural validity that needs the
//! fully expanded tree (port refs inside children, link kinds) is left to
//! elaboration.

use super::parser::{AstBlock, AstFile, AstStmt};
use crate::error::{Error, Result};
use crate::expr::{Expr, ParamValue};
use crate::model::{BlockBody, BlockDefinition, ParamDecl, PortDecl, PortKind, StructuralBody};
use crate::stdlib::Library;

pub fn lower_file(ast: &AstFile, lib: &mut Library) -> Result<Vec<String>> {
    let mut names = Vec::new();
    for block in &ast.blocks {
        let def = lower_block(block, lib)?;
        names.push(def.name.clone());
        lib.add(def)?;
    }
    Ok(names)
}

fn lower_block(block: &AstBlock, lib: &Library) -> Result<BlockDefinition> {
    let parent = block.parent.clone().unwrap_or_else(|| "Block".to_string());
    lib.lookup(&parent)?;

    let mut ports = Vec::new();
    let mut params = Vec::new();
    let mut body = StructuralBody::empty();

    for stmt in &block.stmts {
        match stmt {
            AstStmt::Port {
                name,
                kind,
                size,
                args,
            } => {
                let kind = PortKind::from_name(kind).ok_or_else(|| {
                    Error::DefInvalid(format!(
                        "`{}` declares port `{name}` with unknown kind `{kind}`",
                        block.name
                    ))
                })?;
                if ports.iter().any(|(n, _)| n == name) {
                    return Err(Error::DefInvalid(format!(
                        "`{}` declares port `{name}` twice",
                        block.name
                    )));
                }
                let schema = kind.params();
                for (arg, _) in args {
                    if !schema.iter().any(|(n, _)| n == arg) {
                        return Err(Error::ArgType(format!(
                            "port `{name}` of kind {} has no parameter `{arg}`",
                            kind.name()
                        )));
                    }
                }
                ports.push((
                    name.clone(),
                    PortDecl {
                        kind,
                        size: size.unwrap_or(1),
                        args: args.clone(),
                    },
                ));
            }
            AstStmt::Param { name, ty, expr } => {
                if params.iter().any(|(n, _)| n == name) {
                    return Err(Error::DefInvalid(format!(
                        "`{}` declares parameter `{name}` twice",
                        block.name
                    )));
                }
                params.push((
                    name.clone(),
                    ParamDecl {
                        ty: *ty,
                        expr: expr.clone(),
                    },
                ));
            }
            AstStmt::Inst {
                name, def, args, ..
            } => {
                let target = lib.lookup(def)?;
                if body.instances.iter().any(|(n, _, _)| n == name) {
                    return Err(Error::DefInvalid(format!(
                        "`{}` declares instance `{name}` twice",
                        block.name
                    )));
                }
                let declared = lib.effective_params(&target.name)?;
                for (arg, expr) in args {
                    let decl = declared
                        .iter()
                        .find(|(n, _)| n == arg)
                        .map(|(_, d)| d)
                        .ok_or_else(|| {
                            Error::ArgType(format!("`{def}` has no parameter `{arg}`"))
                        })?;
                    // literal arguments can be type-checked right away
                    if let Expr::Lit(v) = expr {
                        let vt = v.type_of();
                        if vt != decl.ty
                            && !matches!(
                                (v, decl.ty),
                                (ParamValue::Int(_), crate::expr::ParamType::Interval)
                            )
                        {
                            return Err(Error::ArgType(format!(
                                "argument `{arg}` of `{def}` expects {:?}, got {vt:?}",
                                decl.ty
                            )));
                        }
                    }
                }
                body.instances
                    .push((name.clone(), def.clone(), args.clone()));
            }
            AstStmt::Connect { refs } => body.connects.push(refs.clone()),
            AstStmt::Export { port, target } => {
                if !ports.iter().any(|(n, _)| n == port) {
                    return Err(Error::UnknownPort(format!("{}.{port}", block.name)));
                }
                body.exports.push((port.clone(), target.clone()));
            }
            AstStmt::Check { expr } => body.checks.push(expr.clone()),
        }
    }

    Ok(BlockDefinition {
        name: block.name.clone(),
        parent: Some(parent),
        abstract_: block.abstract_,
        default_refinement: None,
        ports,
        params,
        body: BlockBody::Structural(body),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::load_design;

    #[test]
    fn lowers_blinky() {
        let mut lib = Library::standard();
        let names = load_design(
            "block Blinky {\n  mcu = MagicMcu()\n  led = IndicatorLed(current = 5mA +- 1mA)\n  connect(mcu.gnd, led.gnd)\n  connect(mcu.digital[0], led.io)\n}\n",
            &mut lib,
        )
        .unwrap();
        assert_eq!(names, vec!["Blinky"]);
        let def = lib.lookup("Blinky").unwrap();
        assert_eq!(def.parent.as_deref(), Some("Block"));
        match &def.body {
            BlockBody::Structural(b) => {
                assert_eq!(b.instances.len(), 2);
                assert_eq!(b.connects.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_instance_definition() {
        let mut lib = Library::standard();
        let err = load_design("block X { a = Nothing() }", &mut lib).unwrap_err();
        assert_eq!(err.code(), "E_UNKNOWN_BLOCK");
    }

    #[test]
    fn forward_reference_rejected_backward_allowed() {
        let mut lib = Library::standard();
        let err = load_design("block A { b = B() }\nblock B { }", &mut lib).unwrap_err();
        assert_eq!(err.code(), "E_UNKNOWN_BLOCK");

        let mut lib = Library::standard();
        load_design("block B { }\nblock A { b = B() }", &mut lib).unwrap();
    }

    #[test]
    fn duplicate_block_name() {
        let mut lib = Library::standard();
        let err = load_design("block A { }\nblock A { }", &mut lib).unwrap_err();
        assert_eq!(err.code(), "E_DUP_DEF");

        let mut lib = Library::standard();
        let err = load_design("block Resistor { }", &mut lib).unwrap_err();
        assert_eq!(err.code(), "E_DUP_DEF");
    }

    #[test]
    fn bad_argument_name_and_type() {
        let mut lib = Library::standard();
        let err = load_design("block X { r = Resistor(ohms = 100Ohm) }", &mut lib).unwrap_err();
        assert_eq!(err.code(), "E_ARG_TYPE");

        let mut lib = Library::standard();
        let err =
            load_design("block X { r = Resistor(resistance = \"big\") }", &mut lib).unwrap_err();
        assert_eq!(err.code(), "E_ARG_TYPE");
    }

    #[test]
    fn export_requires_declared_port() {
        let mut lib = Library::standard();
        let err = load_design("block X { r = Resistor() export p = r.p1 }", &mut lib).unwrap_err();
        assert_eq!(err.code(), "E_UNKNOWN_PORT");
    }
}
