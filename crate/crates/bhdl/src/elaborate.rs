//! Elaboration: turn a top definition into an instance tree. Structural
//! bodies expand recursively at creation; generator bodies are fired in
//! rounds once their declared dependencies solve. Refinement substitutes
//! subtypes for declared (possibly abstract) definitions before expansion.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::model::{
    BlockBody, CheckKind, CheckSpec, Design, DesignInstance, GeneratorContext, GeneratorSpec, Link,
    LinkKind, PortKind,
};
use crate::path::Path;
use crate::solve::{collect_producers, solve};
use crate::stdlib::Library;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const DEFAULT_MAX_ITERATIONS: usize = 100;

/// Refinement choices loaded from a JSON config: instance-path overrides
/// and per-declared-class substitutions.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefinementConfig {
    #[serde(default)]
    pub path: BTreeMap<String, String>,
    #[serde(default)]
    pub class: BTreeMap<String, String>,
}

impl RefinementConfig {
    pub fn from_json(text: &str) -> Result<RefinementConfig> {
        serde_json::from_str(text).map_err(|e| Error::ConfigSyntax(e.to_string()))
    }

    pub fn validate(&self, lib: &Library) -> Result<()> {
        for (key, target) in &self.path {
            key.parse::<Path>()
                .map_err(|_| Error::ConfigSyntax(format!("bad instance path `{key}`")))?;
            lib.lookup(target)?;
        }
        for (declared, target) in &self.class {
            lib.lookup(declared)?;
            lib.lookup(target)?;
            if !lib.is_subtype(target, declared)? {
                return Err(Error::BadRefinement {
                    candidate: target.clone(),
                    declared: declared.clone(),
                });
            }
        }
        Ok(())
    }
}

pub fn elaborate(
    lib: &Library,
    top: &str,
    config: &RefinementConfig,
    max_iterations: usize,
) -> Result<Design> {
    config.validate(lib)?;
    let el = Elaborator { lib, config };
    let root_path = Path::root(top.to_lowercase());
    let mut root = el.make_instance(root_path, top, Vec::new(), None)?;

    let mut round = 0;
    loop {
        round += 1;
        if round > max_iterations {
            return Err(Error::MaxIter(max_iterations));
        }
        let producers = collect_producers(&root, lib)?;
        let bindings = solve(&producers, false)?;

        let mut pending: Vec<Path> = root
            .all_instances()
            .iter()
            .filter(|i| i.pending_generator)
            .map(|i| i.path.clone())
            .collect();
        if pending.is_empty() {
            break;
        }
        pending.sort();

        let mut ready = Vec::new();
        for path in &pending {
            if let Some(deps) = generator_deps(&root, lib, path, &bindings)? {
                ready.push((path.clone(), deps));
            }
        }
        if ready.is_empty() {
            let stuck: Vec<String> = pending.iter().map(|p| p.to_string()).collect();
            return Err(Error::GenStuck(stuck.join(", ")));
        }

        for (path, deps) in ready {
            let spec = generator_spec(&root, lib, &path)?;
            let ctx = GeneratorContext {
                instance_path: path.clone(),
                deps,
            };
            let body = (spec.generate)(&ctx)?;
            let inst = find_mut(&mut root, &path).expect("generator instance exists");
            inst.pending_generator = false;
            el.apply_generated(inst, body)?;
        }
    }

    let producers = collect_producers(&root, lib)?;
    let bindings = solve(&producers, true)?;
    Ok(Design { root, bindings })
}

fn find_mut<'a>(inst: &'a mut DesignInstance, path: &Path) -> Option<&'a mut DesignInstance> {
    if &inst.path == path {
        return Some(inst);
    }
    if !path.starts_with(&inst.path) {
        return None;
    }
    inst.children.iter_mut().find_map(|c| find_mut(c, path))
}

fn generator_spec(root: &DesignInstance, lib: &Library, path: &Path) -> Result<GeneratorSpec> {
    let inst = root.find(path).expect("generator instance exists");
    match &lib.lookup(&inst.def_name)?.body {
        BlockBody::Generator(spec) => Ok(spec.clone()),
        _ => unreachable!("pending instance is not a generator"),
    }
}

/// Resolve a generator's dependency values, or `None` if any are not yet
/// solved (including ports not attached to any link yet).
fn generator_deps(
    root: &DesignInstance,
    lib: &Library,
    path: &Path,
    bindings: &BTreeMap<Path, crate::expr::ParamValue>,
) -> Result<Option<BTreeMap<String, crate::expr::ParamValue>>> {
    let inst = root.find(path).expect("generator instance exists");
    let spec = generator_spec(root, lib, path)?;
    let mut deps = BTreeMap::new();
    for dep in &spec.deps {
        let (key, target) = match dep {
            crate::model::GenDep::OwnParam(p) => (p.to_string(), inst.path.child(*p)),
            crate::model::GenDep::PortLinkParam { port, param } => {
                let port_path = inst.path.child(*port);
                let link = root
                    .all_instances()
                    .iter()
                    .flat_map(|i| i.links.iter())
                    .find(|l| l.endpoints.contains(&port_path))
                    .map(|l| l.id.clone());
                let Some(link_id) = link else {
                    return Ok(None);
                };
                (format!("{port}.link.{param}"), link_id.child(*param))
            }
        };
        match bindings.get(&target) {
            Some(v) => {
                deps.insert(key, v.clone());
            }
            None => return Ok(None),
        }
    }
    Ok(Some(deps))
}

struct Elaborator<'a> {
    lib: &'a Library,
    config: &'a RefinementConfig,
}

impl<'a> Elaborator<'a> {
    /// Precedence: per-path override, per-class substitution, the declared
    /// definition's default refinement (abstract only), the declaration
    /// itself. The result must be a subtype of the declaration and concrete.
    fn resolve_refinement(&self, path: &Path, declared: &str) -> Result<String> {
        let declared_def = self.lib.lookup(declared)?;
        let chosen = self
            .config
            .path
            .get(&path.to_string())
            .or_else(|| self.config.class.get(declared))
            .cloned()
            .or_else(|| {
                if declared_def.abstract_ {
                    declared_def.default_refinement.clone()
                } else {
                    None
                }
            });
        let name = match chosen {
            Some(candidate) => {
                self.lib.lookup(&candidate)?;
                if !self.lib.is_subtype(&candidate, declared)? {
                    return Err(Error::BadRefinement {
                        candidate,
                        declared: declared.to_string(),
                    });
                }
                candidate
            }
            None => declared.to_string(),
        };
        Ok(name)
    }

    fn make_instance(
        &self,
        path: Path,
        declared: &str,
        args: Vec<(String, Expr)>,
        args_base: Option<Path>,
    ) -> Result<DesignInstance> {
        let def_name = self.resolve_refinement(&path, declared)?;
        let def = self.lib.lookup(&def_name)?.clone();
        if def.abstract_ {
            return Err(Error::AbstractUnrefined(def_name));
        }
        let mut inst = DesignInstance {
            path,
            def_name,
            args,
            args_base,
            children: Vec::new(),
            links: Vec::new(),
            exports: Vec::new(),
            checks: Vec::new(),
            pending_generator: false,
            gen_writes: Vec::new(),
        };
        match &def.body {
            BlockBody::Structural(body) => {
                for (name, decl_def, child_args) in &body.instances {
                    let child = self.make_instance(
                        inst.path.child(name.clone()),
                        decl_def,
                        child_args.clone(),
                        Some(inst.path.clone()),
                    )?;
                    inst.children.push(child);
                }
                for refs in &body.connects {
                    self.add_link(&mut inst, refs)?;
                }
                for (port, target) in &body.exports {
                    self.add_export(&mut inst, port, target)?;
                }
                for (i, expr) in body.checks.iter().enumerate() {
                    inst.checks.push(CheckSpec {
                        name: format!("check{}", i + 1),
                        kind: CheckKind::User,
                        expr: expr.clone(),
                    });
                }
            }
            BlockBody::Generator(_) => inst.pending_generator = true,
            BlockBody::Leaf(_) => {}
        }
        Ok(inst)
    }

    fn apply_generated(
        &self,
        inst: &mut DesignInstance,
        body: crate::model::GeneratedBody,
    ) -> Result<()> {
        for (name, decl_def, child_args) in &body.instances {
            let child = self.make_instance(
                inst.path.child(name.clone()),
                decl_def,
                child_args.clone(),
                Some(inst.path.clone()),
            )?;
            inst.children.push(child);
        }
        for refs in &body.connects {
            self.add_link(inst, refs)?;
        }
        for (rel, value) in body.param_writes {
            inst.gen_writes.push((inst.path.join(&rel), value));
        }
        for (name, expr) in body.checks {
            inst.checks.push(CheckSpec {
                name,
                kind: CheckKind::Generator,
                expr,
            });
        }
        Ok(())
    }

    /// A port element reference inside `inst`: either `port` (own port) or
    /// `child.port`, with an index selecting an array element.
    fn resolve_port_element(&self, inst: &DesignInstance, rel: &Path) -> Result<(Path, PortKind)> {
        let (owner_path, owner_def, port_seg) = match rel.len() {
            1 => (inst.path.clone(), inst.def_name.clone(), rel.first()),
            2 => {
                let child_name = &rel.first().name;
                if rel.first().index.is_some() {
                    return Err(Error::UnknownPort(rel.to_string()));
                }
                let child = inst
                    .children
                    .iter()
                    .find(|c| &c.path.last().name == child_name)
                    .ok_or_else(|| Error::UnknownPort(format!("{}.{rel}", inst.path)))?;
                (
                    child.path.clone(),
                    child.def_name.clone(),
                    &rel.segments()[1],
                )
            }
            _ => return Err(Error::UnknownPort(rel.to_string())),
        };
        let decl = self
            .lib
            .port_decl(&owner_def, &port_seg.name)
            .map_err(|_| Error::UnknownPort(format!("{}.{rel}", inst.path)))?;
        let abs = match (decl.size, port_seg.index) {
            (1, None) => owner_path.child(port_seg.name.clone()),
            (1, Some(_)) => return Err(Error::UnknownPort(format!("`{rel}` is not an array"))),
            (n, Some(i)) if i < n => owner_path.child_indexed(port_seg.name.clone(), i),
            (_, Some(_)) => {
                return Err(Error::UnknownPort(format!("index out of range in `{rel}`")))
            }
            (_, None) => {
                return Err(Error::UnknownPort(format!(
                    "`{rel}` needs an element index"
                )))
            }
        };
        Ok((abs, decl.kind))
    }

    fn add_link(&self, inst: &mut DesignInstance, refs: &[Path]) -> Result<()> {
        let mut endpoints = Vec::new();
        let mut kinds = Vec::new();
        for r in refs {
            let (p, k) = self.resolve_port_element(inst, r)?;
            endpoints.push(p);
            kinds.push(k);
        }
        let (kind, driver) = infer_link_kind(&kinds).map_err(|e| {
            let refs: Vec<String> = refs.iter().map(|r| r.to_string()).collect();
            Error::ConnectKind(format!(
                "connect({}) in {}: {e}",
                refs.join(", "),
                inst.path
            ))
        })?;
        let first = refs[0].last();
        let base_name = match first.index {
            Some(i) => format!("{}_{i}_net", first.name),
            None => format!("{}_net", first.name),
        };
        let mut id = inst.path.child(base_name.clone());
        let mut n = 2;
        while inst.links.iter().any(|l| l.id == id) {
            id = inst.path.child(format!("{base_name}_{n}"));
            n += 1;
        }
        inst.links.push(Link {
            id,
            kind,
            endpoints,
            driver,
            endpoint_kinds: kinds,
        });
        Ok(())
    }

    fn add_export(&self, inst: &mut DesignInstance, port: &str, target: &Path) -> Result<()> {
        let outer = self.lib.port_decl(&inst.def_name, port)?;
        if target.len() != 2 || target.first().index.is_some() {
            return Err(Error::UnknownPort(target.to_string()));
        }
        let child_name = &target.first().name;
        let child = inst
            .children
            .iter()
            .find(|c| &c.path.last().name == child_name)
            .ok_or_else(|| Error::UnknownPort(format!("{}.{target}", inst.path)))?;
        let port_seg = &target.segments()[1];
        let inner = self.lib.port_decl(&child.def_name, &port_seg.name)?;
        if outer.kind != inner.kind {
            return Err(Error::DefInvalid(format!(
                "export {port} = {target} changes port kind ({} vs {})",
                outer.kind.name(),
                inner.kind.name()
            )));
        }
        match port_seg.index {
            Some(i) => {
                if outer.size != 1 || i >= inner.size {
                    return Err(Error::DefInvalid(format!(
                        "export {port} = {target}: size mismatch"
                    )));
                }
                inst.exports.push((
                    inst.path.child(port),
                    child.path.child_indexed(port_seg.name.clone(), i),
                ));
            }
            None => {
                if outer.size != inner.size {
                    return Err(Error::DefInvalid(format!(
                        "export {port} = {target}: size mismatch"
                    )));
                }
                if outer.size == 1 {
                    inst.exports.push((
                        inst.path.child(port),
                        child.path.child(port_seg.name.clone()),
                    ));
                } else {
                    for i in 0..outer.size {
                        inst.exports.push((
                            inst.path.child_indexed(port, i),
                            child.path.child_indexed(port_seg.name.clone(), i),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Classify a connect statement. Any passive endpoint makes the whole net
/// passive (no electrical model); otherwise the endpoints must form either
/// a power net (one voltage source) or a digital net (one driver).
fn infer_link_kind(kinds: &[PortKind]) -> Result<(LinkKind, Option<usize>)> {
    if kinds.iter().any(|k| *k == PortKind::Passive) {
        return Ok((LinkKind::PassiveNet, None));
    }
    let digital = kinds.iter().any(|k| k.is_digital());
    let voltage = kinds
        .iter()
        .any(|k| matches!(k, PortKind::VoltageSource | PortKind::VoltageSink));
    if digital && voltage {
        return Err(Error::ConnectKind(
            "digital and plain voltage ports on one net".into(),
        ));
    }
    if digital {
        let sources: Vec<usize> = kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| **k == PortKind::DigitalSource)
            .map(|(i, _)| i)
            .collect();
        match sources.as_slice() {
            [i] => Ok((LinkKind::Digital, Some(*i))),
            [] => {
                let bidirs: Vec<usize> = kinds
                    .iter()
                    .enumerate()
                    .filter(|(_, k)| **k == PortKind::DigitalBidir)
                    .map(|(i, _)| i)
                    .collect();
                match bidirs.as_slice() {
                    [i] => Ok((LinkKind::Digital, Some(*i))),
                    [] => Err(Error::ConnectKind("digital net with no driver".into())),
                    _ => Err(Error::ConnectKind(
                        "digital net with multiple bidirectional candidates".into(),
                    )),
                }
            }
            _ => Err(Error::ConnectKind(
                "digital net with multiple drivers".into(),
            )),
        }
    } else {
        let sources: Vec<usize> = kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| **k == PortKind::VoltageSource)
            .map(|(i, _)| i)
            .collect();
        match sources.as_slice() {
            [i] => Ok((LinkKind::Power, Some(*i))),
            [] => Err(Error::ConnectKind("power net with no source".into())),
            _ => Err(Error::ConnectKind("power net with multiple sources".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::load_design;

    const BLINKY: &str = "block Blinky {\n  mcu = MagicMcu()\n  led = IndicatorLed(current = 5mA +- 1mA)\n  connect(mcu.gnd, led.gnd)\n  connect(mcu.digital[0], led.io)\n}\n";

    fn build(src: &str, top: &str) -> Result<(Library, Design)> {
        let mut lib = Library::standard();
        load_design(src, &mut lib)?;
        let design = elaborate(
            &lib,
            top,
            &RefinementConfig::default(),
            DEFAULT_MAX_ITERATIONS,
        )?;
        Ok((lib, design))
    }

    fn interval_at(design: &Design, path: &str) -> (f64, f64) {
        let v = design
            .lookup(&path.parse().unwrap())
            .unwrap_or_else(|| panic!("no binding for {path}"))
            .as_interval()
            .unwrap();
        v.bounds().unwrap()
    }

    #[test]
    fn blinky_elaborates() {
        let (_, design) = build(BLINKY, "Blinky").unwrap();
        let root = &design.root;
        assert_eq!(root.path.to_string(), "blinky");
        assert_eq!(root.children.len(), 2);
        let led = root.find(&"blinky.led".parse().unwrap()).unwrap();
        assert!(!led.pending_generator);
        let names: Vec<String> = led
            .children
            .iter()
            .map(|c| c.path.last().name.clone())
            .collect();
        assert_eq!(names, vec!["D", "R"]);

        // the generator sized the resistor for (3.3 - 2.0) / 5mA -> E24 up
        let (rlo, rhi) = interval_at(&design, "blinky.led.R.resistance");
        assert!((rlo - 270.0).abs() < 1e-9 && (rhi - 270.0).abs() < 1e-9);

        // realized current from interval endpoints of rail and Vf
        let (ilo, ihi) = interval_at(&design, "blinky.led.actual_current");
        assert!((ilo - (3.3 - 2.2) / 270.0).abs() < 1e-12);
        assert!((ihi - (3.3 - 1.8) / 270.0).abs() < 1e-12);

        // link ids and solved link params
        let links: Vec<String> = design
            .all_links()
            .iter()
            .map(|l| l.id.to_string())
            .collect();
        assert!(links.contains(&"blinky.gnd_net".to_string()), "{links:?}");
        assert!(
            links.contains(&"blinky.digital_0_net".to_string()),
            "{links:?}"
        );
        let (vlo, vhi) = interval_at(&design, "blinky.digital_0_net.voltage");
        assert!((vlo - 3.3).abs() < 1e-12 && (vhi - 3.3).abs() < 1e-12);
        let (_, draw_hi) = interval_at(&design, "blinky.digital_0_net.current_draw");
        assert!((draw_hi - (3.3 - 1.8) / 270.0).abs() < 1e-12);
    }

    #[test]
    fn default_refinement_picks_concrete_buck() {
        let src = "block Board {\n  supply = IdealSupply(voltage = 12V)\n  conv = BuckConverter(output_voltage = 3.3V)\n  connect(supply.pwr, conv.pwr_in)\n  connect(supply.gnd, conv.gnd)\n}\n";
        let (_, design) = build(src, "Board").unwrap();
        let conv = design.root.find(&"board.conv".parse().unwrap()).unwrap();
        assert_eq!(conv.def_name, "Tps561201Buck");
        let ctl = design
            .root
            .find(&"board.conv.ctl".parse().unwrap())
            .unwrap();
        assert_eq!(ctl.def_name, "Tps561201");
    }

    #[test]
    fn class_refinement_overrides_default() {
        let src = "block Board {\n  supply = IdealSupply(voltage = 24V)\n  conv = BuckConverter(output_voltage = 3.3V)\n  connect(supply.pwr, conv.pwr_in)\n  connect(supply.gnd, conv.gnd)\n}\n";
        let mut lib = Library::standard();
        load_design(src, &mut lib).unwrap();
        let config =
            RefinementConfig::from_json("{\"class\": {\"BuckConverter\": \"Tps54360Buck\"}}")
                .unwrap();
        let design = elaborate(&lib, "Board", &config, DEFAULT_MAX_ITERATIONS).unwrap();
        let conv = design.root.find(&"board.conv".parse().unwrap()).unwrap();
        assert_eq!(conv.def_name, "Tps54360Buck");
    }

    #[test]
    fn path_refinement_beats_class_refinement() {
        let src = "block Board {\n  supply = IdealSupply(voltage = 12V)\n  conv = BuckConverter(output_voltage = 3.3V)\n  connect(supply.pwr, conv.pwr_in)\n  connect(supply.gnd, conv.gnd)\n}\n";
        let mut lib = Library::standard();
        load_design(src, &mut lib).unwrap();
        let config = RefinementConfig::from_json(
            "{\"path\": {\"board.conv\": \"Tps561201Buck\"}, \"class\": {\"BuckConverter\": \"Tps54360Buck\"}}",
        )
        .unwrap();
        let design = elaborate(&lib, "Board", &config, DEFAULT_MAX_ITERATIONS).unwrap();
        let conv = design.root.find(&"board.conv".parse().unwrap()).unwrap();
        assert_eq!(conv.def_name, "Tps561201Buck");
    }

    #[test]
    fn refinement_must_be_subtype() {
        let mut lib = Library::standard();
        load_design(BLINKY, &mut lib).unwrap();
        let config =
            RefinementConfig::from_json("{\"path\": {\"blinky.led\": \"Resistor\"}}").unwrap();
        let err = elaborate(&lib, "Blinky", &config, DEFAULT_MAX_ITERATIONS).unwrap_err();
        assert_eq!(err.code(), "E_BAD_REFINEMENT");
    }

    #[test]
    fn abstract_without_refinement() {
        let src = "block Board {\n  supply = IdealSupply()\n  conv = PowerConverter()\n  connect(supply.pwr, conv.pwr_in)\n  connect(supply.gnd, conv.gnd)\n}\n";
        let err = build(src, "Board").unwrap_err();
        assert_eq!(err.code(), "E_ABSTRACT_UNREFINED");
    }

    #[test]
    fn bad_connect_kind() {
        let src =
            "block Bad {\n  a = IdealSupply()\n  b = IdealSupply()\n  connect(a.pwr, b.pwr)\n}\n";
        let err = build(src, "Bad").unwrap_err();
        assert_eq!(err.code(), "E_CONNECT_KIND");
    }

    #[test]
    fn unknown_port_in_connect() {
        let src = "block Bad {\n  r = Resistor()\n  c = Capacitor()\n  connect(r.p1, c.p9)\n}\n";
        let err = build(src, "Bad").unwrap_err();
        assert_eq!(err.code(), "E_UNKNOWN_PORT");
    }

    #[test]
    fn generators_stuck_on_mutual_dependency() {
        let src = "block Loop {\n  a = VoltageFollower()\n  b = VoltageFollower()\n  connect(a.out, b.inp)\n  connect(b.out, a.inp)\n}\n";
        let err = build(src, "Loop").unwrap_err();
        assert_eq!(err.code(), "E_GEN_STUCK");
    }

    #[test]
    fn iteration_budget_enforced() {
        let src = "block Chain {\n  mcu = MagicMcu()\n  chain = LedChain(count = 150)\n  connect(mcu.digital[0], chain.io)\n}\n";
        let err = build(src, "Chain").unwrap_err();
        assert_eq!(err.code(), "E_MAX_ITER");

        // a short chain converges within the default budget
        let src = "block Chain {\n  mcu = MagicMcu()\n  chain = LedChain(count = 3)\n  connect(mcu.digital[0], chain.io)\n}\n";
        let (_, design) = build(src, "Chain").unwrap();
        let leds = design
            .root
            .all_instances()
            .iter()
            .filter(|i| i.def_name == "Led")
            .count();
        assert_eq!(leds, 3);
    }

    #[test]
    fn malformed_config_rejected() {
        assert_eq!(
            RefinementConfig::from_json("{").unwrap_err().code(),
            "E_CONFIG_SYNTAX"
        );
        assert_eq!(
            RefinementConfig::from_json("{\"paths\": {}}")
                .unwrap_err()
                .code(),
            "E_CONFIG_SYNTAX"
        );
        let lib = Library::standard();
        let config = RefinementConfig::from_json("{\"path\": {\"..\": \"Resistor\"}}").unwrap();
        assert_eq!(config.validate(&lib).unwrap_err().code(), "E_CONFIG_SYNTAX");
        let config =
            RefinementConfig::from_json("{\"class\": {\"BuckConverter\": \"Nope\"}}").unwrap();
        assert_eq!(config.validate(&lib).unwrap_err().code(), "E_UNKNOWN_BLOCK");
    }

    #[test]
    fn divider_generator_end_to_end() {
        let src = "block Div {\n  supply = IdealSupply(voltage = 5V)\n  div = VoltageDivider(ratio = 0.5, impedance = 10kOhm)\n  connect(supply.pwr, div.input)\n  connect(supply.gnd, div.gnd)\n}\n";
        let (_, design) = build(src, "Div").unwrap();
        let (rlo, _) = {
            let v = design
                .lookup(&"div.div.r_top.resistance".parse().unwrap())
                .unwrap()
                .as_interval()
                .unwrap();
            v.bounds().unwrap()
        };
        assert!((rlo - 20_000.0).abs() < 1e-6);
        let vout = design
            .lookup(&"div.div.output.voltage_out".parse().unwrap())
            .unwrap()
            .as_interval()
            .unwrap();
        let (lo, hi) = vout.bounds().unwrap();
        assert!((lo - 2.5).abs() < 1e-9 && (hi - 2.5).abs() < 1e-9);
    }
}
