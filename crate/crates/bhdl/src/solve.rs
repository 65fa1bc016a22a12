//! Single-assignment dataflow solver. Every parameter has at most one
//! producer (a defining expression); solving is a worklist fixpoint that
//! evaluates producers whose inputs are available. The result is independent
//! of evaluation order because no parameter is ever written twice.

use crate::error::{Error, Result};
use crate::expr::{collect_refs, eval, EvalCtx, Expr, ParamValue};
use crate::model::{DesignInstance, LinkKind};
use crate::path::Path;
use crate::stdlib::Library;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone)]
pub struct Producer {
    pub target: Path,
    pub expr: Expr,
    /// Base path for relative refs; `None` means refs are absolute.
    pub base: Option<Path>,
    /// Sink endpoints, for link rules using `sum_over_sinks`.
    pub sinks: Option<Vec<Path>>,
}

/// Gather every parameter producer in the elaborated tree. Precedence for
/// the same target (later wins): declaration default, port argument, export
/// alias, instance argument, generator write.
pub fn collect_producers(root: &DesignInstance, lib: &Library) -> Result<Vec<Producer>> {
    let mut by_target: BTreeMap<Path, Producer> = BTreeMap::new();
    let mut put = |p: Producer| {
        by_target.insert(p.target.clone(), p);
    };

    for inst in root.all_instances() {
        for (name, decl) in lib.effective_params(&inst.def_name)? {
            if let Some(expr) = decl.expr {
                put(Producer {
                    target: inst.path.child(name),
                    expr,
                    base: Some(inst.path.clone()),
                    sinks: None,
                });
            }
        }
        for (pname, decl) in lib.effective_ports(&inst.def_name)? {
            for i in 0..decl.size {
                let element = if decl.size == 1 {
                    inst.path.child(pname.clone())
                } else {
                    inst.path.child_indexed(pname.clone(), i)
                };
                for (arg, expr) in &decl.args {
                    put(Producer {
                        target: element.child(arg.clone()),
                        expr: expr.clone(),
                        base: Some(inst.path.clone()),
                        sinks: None,
                    });
                }
            }
        }
        for (outer, inner) in &inst.exports {
            let port_name = outer.last().name.clone();
            let decl = lib.port_decl(&inst.def_name, &port_name)?;
            for (param, _) in decl.kind.params() {
                put(Producer {
                    target: outer.child(*param),
                    expr: Expr::Ref(inner.child(*param)),
                    base: None,
                    sinks: None,
                });
            }
        }
        for (name, expr) in &inst.args {
            put(Producer {
                target: inst.path.child(name.clone()),
                expr: expr.clone(),
                base: inst.args_base.clone(),
                sinks: None,
            });
        }
        for link in &inst.links {
            if link.kind == LinkKind::PassiveNet {
                continue;
            }
            if let Some(source) = link.source() {
                put(Producer {
                    target: link.id.child("voltage"),
                    expr: Expr::Ref(source.child("voltage_out")),
                    base: None,
                    sinks: None,
                });
            }
            put(Producer {
                target: link.id.child("current_draw"),
                expr: Expr::SumOverSinks("current_draw".into()),
                base: None,
                sinks: Some(link.sinks()),
            });
        }
        for (target, value) in &inst.gen_writes {
            put(Producer {
                target: target.clone(),
                expr: Expr::Lit(value.clone()),
                base: None,
                sinks: None,
            });
        }
    }
    Ok(by_target.into_values().collect())
}

/// Run the fixpoint. In tolerant mode (mid-elaboration) unsolvable
/// producers are simply left out of the result; in strict mode they are
/// diagnosed as a dependency cycle or a dangling reference.
pub fn solve(producers: &[Producer], strict: bool) -> Result<BTreeMap<Path, ParamValue>> {
    let targets: BTreeSet<&Path> = producers.iter().map(|p| &p.target).collect();
    let mut solved: BTreeMap<Path, ParamValue> = BTreeMap::new();
    let mut remaining: Vec<&Producer> = producers.iter().collect();

    loop {
        let mut next = Vec::new();
        let mut progress = false;
        for p in remaining {
            let refs = collect_refs(&p.expr, p.base.as_ref(), p.sinks.as_deref());
            if refs.iter().all(|r| solved.contains_key(r)) {
                let lookup = |path: &Path| solved.get(path).cloned();
                let ctx = EvalCtx {
                    base: p.base.as_ref(),
                    lookup: &lookup,
                    sinks: p.sinks.as_deref(),
                };
                let value = eval(&p.expr, &ctx)?;
                solved.insert(p.target.clone(), value);
                progress = true;
            } else {
                next.push(p);
            }
        }
        remaining = next;
        if remaining.is_empty() || !progress {
            break;
        }
    }

    if remaining.is_empty() || !strict {
        return Ok(solved);
    }

    // Every stuck producer whose missing inputs all have producers is part
    // of a cycle; a missing input with no producer is a dangling reference.
    for p in &remaining {
        let refs = collect_refs(&p.expr, p.base.as_ref(), p.sinks.as_deref());
        for r in refs {
            if !solved.contains_key(&r) && !targets.contains(&r) {
                return Err(Error::UnsolvedRef {
                    param: p.target.clone(),
                    missing: r,
                });
            }
        }
    }
    let members: Vec<String> = remaining.iter().map(|p| p.target.to_string()).collect();
    Err(Error::ParamCycle(members.join(" -> ")))
}
