//! The built-in block library: subtype hierarchy, leaf components with
//! footprints, and the generator families (indicator LED, resistor divider,
//! buck converters), plus an abstract power converter with concrete
//! alternatives to exercise refinement.

pub mod generators;
pub mod series;

use crate::dims::{AMPERE, FARAD, HENRY, HERTZ, OHM, VOLT};
use crate::error::{Error, Result};
use crate::expr::{Expr, ParamType, ParamValue};
use crate::interval::Interval;
use crate::model::{
    BlockBody, BlockDefinition, GenDep, GeneratorSpec, LeafBody, LeafValue, ParamDecl, PortDecl,
    PortKind, StructuralBody,
};
use crate::path::Path;
use std::collections::BTreeMap;

pub use series::{nearest_standard_value, RoundMode, StandardSeries};

/// Immutable registry of block definitions with a precomputed parent
/// relation. Built once from the standard library, then extended with the
/// lowered user design.
#[derive(Debug, Clone, Default)]
pub struct Library {
    defs: BTreeMap<String, BlockDefinition>,
}

impl Library {
    pub fn standard() -> Library {
        let mut lib = Library::default();
        for def in standard_definitions() {
            lib.add(def).expect("standard library is well formed");
        }
        lib
    }

    pub fn lookup(&self, name: &str) -> Result<&BlockDefinition> {
        self.defs
            .get(name)
            .ok_or_else(|| Error::UnknownBlock(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.defs.contains_key(name)
    }

    /// Names in sorted order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(|s| s.as_str())
    }

    pub fn add(&mut self, def: BlockDefinition) -> Result<()> {
        if self.defs.contains_key(&def.name) {
            return Err(Error::DupDef(def.name.clone()));
        }
        if def.abstract_ && matches!(def.body, BlockBody::Leaf(_)) {
            return Err(Error::DefInvalid(format!(
                "abstract definition `{}` cannot be a leaf",
                def.name
            )));
        }
        if let Some(parent) = &def.parent {
            let parent_ports = self.effective_ports(parent)?;
            let parent_params = self.effective_params(parent)?;
            for (name, decl) in &def.ports {
                if let Some((_, pdecl)) = parent_ports.iter().find(|(n, _)| n == name) {
                    if pdecl.kind != decl.kind || pdecl.size != decl.size {
                        return Err(Error::DefInvalid(format!(
                            "`{}` redeclares port `{}` with a different kind or size",
                            def.name, name
                        )));
                    }
                }
            }
            for (name, decl) in &def.params {
                if let Some((_, pdecl)) = parent_params.iter().find(|(n, _)| n == name) {
                    if pdecl.ty != decl.ty {
                        return Err(Error::DefInvalid(format!(
                            "`{}` redeclares parameter `{}` with a different type",
                            def.name, name
                        )));
                    }
                }
            }
        }
        self.defs.insert(def.name.clone(), def);
        Ok(())
    }

    /// True iff `candidate` reaches `base` by following parent edges
    /// (reflexive).
    pub fn is_subtype(&self, candidate: &str, base: &str) -> Result<bool> {
        self.lookup(base)?;
        let mut current = Some(candidate.to_string());
        while let Some(name) = current {
            let def = self.lookup(&name)?;
            if def.name == base {
                return Ok(true);
            }
            current = def.parent.clone();
        }
        Ok(false)
    }

    /// Ports including inherited ones, parent's first, child declarations
    /// overriding same-named ones.
    pub fn effective_ports(&self, name: &str) -> Result<Vec<(String, PortDecl)>> {
        let chain = self.parent_chain(name)?;
        let mut out: Vec<(String, PortDecl)> = Vec::new();
        for def_name in chain {
            let def = self.lookup(&def_name)?;
            for (pname, decl) in &def.ports {
                if let Some(slot) = out.iter_mut().find(|(n, _)| n == pname) {
                    slot.1 = decl.clone();
                } else {
                    out.push((pname.clone(), decl.clone()));
                }
            }
        }
        Ok(out)
    }

    pub fn effective_params(&self, name: &str) -> Result<Vec<(String, ParamDecl)>> {
        let chain = self.parent_chain(name)?;
        let mut out: Vec<(String, ParamDecl)> = Vec::new();
        for def_name in chain {
            let def = self.lookup(&def_name)?;
            for (pname, decl) in &def.params {
                if let Some(slot) = out.iter_mut().find(|(n, _)| n == pname) {
                    slot.1 = decl.clone();
                } else {
                    out.push((pname.clone(), decl.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Root-first chain of definition names ending at `name`.
    fn parent_chain(&self, name: &str) -> Result<Vec<String>> {
        let mut chain = Vec::new();
        let mut current = Some(name.to_string());
        while let Some(n) = current {
            let def = self.lookup(&n)?;
            chain.push(n);
            current = def.parent.clone();
        }
        chain.reverse();
        Ok(chain)
    }

    pub fn port_decl(&self, def_name: &str, port: &str) -> Result<PortDecl> {
        self.effective_ports(def_name)?
            .into_iter()
            .find(|(n, _)| n == port)
            .map(|(_, d)| d)
            .ok_or_else(|| Error::UnknownPort(format!("{def_name}.{port}")))
    }
}

fn volts(lo: f64, hi: f64) -> Expr {
    Expr::lit_interval(Interval::new(lo, hi, VOLT).unwrap())
}

fn amps(lo: f64, hi: f64) -> Expr {
    Expr::lit_interval(Interval::new(lo, hi, AMPERE).unwrap())
}

fn reference(text: &str) -> Expr {
    Expr::Ref(text.parse::<Path>().expect("static path"))
}

fn port(kind: PortKind, args: Vec<(&str, Expr)>) -> PortDecl {
    PortDecl {
        kind,
        size: 1,
        args: args.into_iter().map(|(n, e)| (n.to_string(), e)).collect(),
    }
}

fn port_array(kind: PortKind, size: usize, args: Vec<(&str, Expr)>) -> PortDecl {
    PortDecl {
        kind,
        size,
        args: args.into_iter().map(|(n, e)| (n.to_string(), e)).collect(),
    }
}

fn param(ty: ParamType, expr: Option<Expr>) -> ParamDecl {
    ParamDecl { ty, expr }
}

fn interval_param(expr: Expr) -> ParamDecl {
    param(ParamType::Interval, Some(expr))
}

struct DefBuilder {
    def: BlockDefinition,
}

fn def(name: &str, parent: Option<&str>, body: BlockBody) -> DefBuilder {
    DefBuilder {
        def: BlockDefinition {
            name: name.to_string(),
            parent: parent.map(|s| s.to_string()),
            abstract_: false,
            default_refinement: None,
            ports: Vec::new(),
            params: Vec::new(),
            body,
        },
    }
}

impl DefBuilder {
    fn abstract_(mut self) -> Self {
        self.def.abstract_ = true;
        self
    }

    fn default_refinement(mut self, name: &str) -> Self {
        self.def.default_refinement = Some(name.to_string());
        self
    }

    fn port(mut self, name: &str, decl: PortDecl) -> Self {
        self.def.ports.push((name.to_string(), decl));
        self
    }

    fn param(mut self, name: &str, decl: ParamDecl) -> Self {
        self.def.params.push((name.to_string(), decl));
        self
    }

    fn build(self) -> BlockDefinition {
        self.def
    }
}

fn leaf(footprint: &str, prefix: &str, value: LeafValue, pins: &[(&str, u32)]) -> BlockBody {
    BlockBody::Leaf(LeafBody {
        footprint: footprint.to_string(),
        refdes_prefix: prefix.to_string(),
        value,
        pins: pins.iter().map(|(n, p)| (n.to_string(), *p)).collect(),
    })
}

fn standard_definitions() -> Vec<BlockDefinition> {
    let mut defs = Vec::new();

    // the root of the subtype hierarchy
    defs.push(
        def(
            "Block",
            None,
            BlockBody::Structural(StructuralBody::empty()),
        )
        .abstract_()
        .build(),
    );

    defs.push(
        def(
            "Resistor",
            Some("Block"),
            leaf(
                "R_0603",
                "R",
                LeafValue::Param("resistance".into()),
                &[("p1", 1), ("p2", 2)],
            ),
        )
        .port("p1", port(PortKind::Passive, vec![]))
        .port("p2", port(PortKind::Passive, vec![]))
        .param(
            "resistance",
            interval_param(Expr::lit_interval(Interval::point(1000.0, OHM))),
        )
        .build(),
    );

    defs.push(
        def(
            "Led",
            Some("Block"),
            leaf(
                "LED_0603",
                "D",
                LeafValue::Fixed("LED".into()),
                &[("anode", 1), ("cathode", 2)],
            ),
        )
        .port("anode", port(PortKind::Passive, vec![]))
        .port("cathode", port(PortKind::Passive, vec![]))
        .param("forward_voltage", interval_param(volts(1.8, 2.2)))
        .param("current_limits", interval_param(amps(0.001, 0.020)))
        .build(),
    );

    defs.push(
        def(
            "Capacitor",
            Some("Block"),
            leaf(
                "C_0603",
                "C",
                LeafValue::Param("capacitance".into()),
                &[("p1", 1), ("p2", 2)],
            ),
        )
        .port("p1", port(PortKind::Passive, vec![]))
        .port("p2", port(PortKind::Passive, vec![]))
        .param(
            "capacitance",
            interval_param(Expr::lit_interval(Interval::point(100e-9, FARAD))),
        )
        .build(),
    );

    defs.push(
        def(
            "Inductor",
            Some("Block"),
            leaf(
                "L_0603",
                "L",
                LeafValue::Param("inductance".into()),
                &[("p1", 1), ("p2", 2)],
            ),
        )
        .port("p1", port(PortKind::Passive, vec![]))
        .port("p2", port(PortKind::Passive, vec![]))
        .param(
            "inductance",
            interval_param(Expr::lit_interval(Interval::point(10e-6, HENRY))),
        )
        .build(),
    );

    // The microcontroller chip is self-powered ("magic"): its ground is an
    // ideal voltage source at 0 V and its digital outputs sit on an
    // internal rail, so a two-block design passes checks without a power
    // supply subcircuit.
    defs.push(
        def(
            "MagicMcuChip",
            Some("Block"),
            leaf(
                "QFN-16",
                "U",
                LeafValue::Fixed("MagicMcu".into()),
                &[
                    ("digital[0]", 1),
                    ("digital[1]", 2),
                    ("digital[2]", 3),
                    ("digital[3]", 4),
                    ("gnd", 5),
                ],
            ),
        )
        .port(
            "gnd",
            port(
                PortKind::VoltageSource,
                vec![
                    ("voltage_out", volts(0.0, 0.0)),
                    ("current_limits", amps(0.0, 0.5)),
                ],
            ),
        )
        .port(
            "digital",
            port_array(
                PortKind::DigitalSource,
                4,
                vec![
                    ("voltage_out", reference("rail")),
                    ("output_thresholds", volts(0.4, 2.9)),
                    ("current_limits", amps(0.0, 0.020)),
                ],
            ),
        )
        .param("rail", interval_param(volts(3.3, 3.3)))
        .build(),
    );

    defs.push({
        let mut body = StructuralBody::empty();
        body.instances.push((
            "ic".into(),
            "MagicMcuChip".into(),
            vec![("rail".into(), reference("rail"))],
        ));
        body.exports.push(("gnd".into(), "ic.gnd".parse().unwrap()));
        body.exports
            .push(("digital".into(), "ic.digital".parse().unwrap()));
        def("MagicMcu", Some("Block"), BlockBody::Structural(body))
            .port("gnd", port(PortKind::VoltageSource, vec![]))
            .port("digital", port_array(PortKind::DigitalSource, 4, vec![]))
            .param("rail", interval_param(volts(3.3, 3.3)))
            .build()
    });

    defs.push(
        def(
            "IndicatorLed",
            Some("Block"),
            BlockBody::Generator(GeneratorSpec {
                deps: vec![
                    GenDep::PortLinkParam {
                        port: "io",
                        param: "voltage",
                    },
                    GenDep::OwnParam("current"),
                    GenDep::OwnParam("forward_voltage"),
                ],
                generate: generators::indicator_led_generate,
            }),
        )
        .port(
            "io",
            port(
                PortKind::DigitalSink,
                vec![
                    ("voltage_limits", volts(0.0, 6.0)),
                    ("input_thresholds", volts(0.8, 2.0)),
                ],
            ),
        )
        .port(
            "gnd",
            port(
                PortKind::VoltageSink,
                vec![("voltage_limits", volts(0.0, 0.0))],
            ),
        )
        .param(
            "current",
            interval_param(Expr::lit_interval(
                Interval::new(0.004, 0.006, AMPERE).unwrap(),
            )),
        )
        .param("forward_voltage", interval_param(volts(1.8, 2.2)))
        .param("actual_current", param(ParamType::Interval, None))
        .build(),
    );

    defs.push(
        def(
            "VoltageDivider",
            Some("Block"),
            BlockBody::Generator(GeneratorSpec {
                deps: vec![
                    GenDep::PortLinkParam {
                        port: "input",
                        param: "voltage",
                    },
                    GenDep::OwnParam("ratio"),
                    GenDep::OwnParam("impedance"),
                ],
                generate: generators::voltage_divider_generate,
            }),
        )
        .port(
            "input",
            port(
                PortKind::VoltageSink,
                vec![("voltage_limits", volts(0.0, 100.0))],
            ),
        )
        .port("output", port(PortKind::VoltageSource, vec![]))
        .port(
            "gnd",
            port(
                PortKind::VoltageSink,
                vec![("voltage_limits", volts(0.0, 0.0))],
            ),
        )
        .param(
            "ratio",
            interval_param(Expr::lit_interval(Interval::point(
                0.5,
                crate::dims::DIMENSIONLESS,
            ))),
        )
        .param(
            "impedance",
            interval_param(Expr::lit_interval(Interval::point(10_000.0, OHM))),
        )
        .build(),
    );

    defs.push(
        def(
            "PowerConverter",
            Some("Block"),
            BlockBody::Structural(StructuralBody::empty()),
        )
        .abstract_()
        .port(
            "pwr_in",
            port(
                PortKind::VoltageSink,
                vec![("voltage_limits", volts(0.0, 100.0))],
            ),
        )
        .port("pwr_out", port(PortKind::VoltageSource, vec![]))
        .port(
            "gnd",
            port(
                PortKind::VoltageSink,
                vec![("voltage_limits", volts(0.0, 0.0))],
            ),
        )
        .build(),
    );

    defs.push(
        def(
            "BuckConverter",
            Some("PowerConverter"),
            BlockBody::Structural(StructuralBody::empty()),
        )
        .abstract_()
        .default_refinement("Tps561201Buck")
        .param("output_voltage", interval_param(volts(3.3, 3.3)))
        .param("output_current", interval_param(amps(0.0, 1.0)))
        .param(
            "frequency",
            interval_param(Expr::lit_interval(Interval::point(500e3, HERTZ))),
        )
        .param(
            "ripple_ratio",
            interval_param(Expr::lit_interval(Interval::point(
                0.3,
                crate::dims::DIMENSIONLESS,
            ))),
        )
        .build(),
    );

    // controller chips; the concrete buck subtypes differ only in these
    defs.push(
        def(
            "Tps561201",
            Some("Block"),
            leaf(
                "SOT-23-6",
                "U",
                LeafValue::Fixed("TPS561201".into()),
                &[("vin", 1), ("sw", 2), ("gnd", 3)],
            ),
        )
        .port("vin", port(PortKind::Passive, vec![]))
        .port("sw", port(PortKind::Passive, vec![]))
        .port("gnd", port(PortKind::Passive, vec![]))
        .param("input_rating", interval_param(volts(4.5, 17.0)))
        .build(),
    );

    defs.push(
        def(
            "Tps54360",
            Some("Block"),
            leaf(
                "SO-8",
                "U",
                LeafValue::Fixed("TPS54360".into()),
                &[("vin", 1), ("sw", 2), ("gnd", 3)],
            ),
        )
        .port("vin", port(PortKind::Passive, vec![]))
        .port("sw", port(PortKind::Passive, vec![]))
        .port("gnd", port(PortKind::Passive, vec![]))
        .param("input_rating", interval_param(volts(4.0, 36.0)))
        .build(),
    );

    let buck_deps = vec![
        GenDep::PortLinkParam {
            port: "pwr_in",
            param: "voltage",
        },
        GenDep::OwnParam("output_voltage"),
        GenDep::OwnParam("output_current"),
        GenDep::OwnParam("frequency"),
        GenDep::OwnParam("ripple_ratio"),
    ];

    defs.push(
        def(
            "Tps561201Buck",
            Some("BuckConverter"),
            BlockBody::Generator(GeneratorSpec {
                deps: buck_deps.clone(),
                generate: generators::tps561201_buck_generate,
            }),
        )
        .build(),
    );

    defs.push(
        def(
            "Tps54360Buck",
            Some("BuckConverter"),
            BlockBody::Generator(GeneratorSpec {
                deps: buck_deps,
                generate: generators::tps54360_buck_generate,
            }),
        )
        .build(),
    );

    defs.push(
        def(
            "IdealSupply",
            Some("Block"),
            leaf(
                "Conn_1x02",
                "J",
                LeafValue::Fixed("Supply".into()),
                &[("pwr", 1), ("gnd", 2)],
            ),
        )
        .port(
            "pwr",
            port(
                PortKind::VoltageSource,
                vec![
                    ("voltage_out", reference("voltage")),
                    ("current_limits", reference("current_limit")),
                ],
            ),
        )
        .port(
            "gnd",
            port(
                PortKind::VoltageSource,
                vec![
                    ("voltage_out", volts(0.0, 0.0)),
                    ("current_limits", reference("current_limit")),
                ],
            ),
        )
        .param("voltage", interval_param(volts(5.0, 5.0)))
        .param("current_limit", interval_param(amps(0.0, 2.0)))
        .build(),
    );

    defs.push(
        def(
            "Load",
            Some("Block"),
            leaf(
                "Load_THT",
                "U",
                LeafValue::Fixed("Load".into()),
                &[("pwr", 1), ("gnd", 2)],
            ),
        )
        .port(
            "pwr",
            port(
                PortKind::VoltageSink,
                vec![
                    ("voltage_limits", reference("voltage_limits")),
                    ("current_draw", reference("current")),
                ],
            ),
        )
        .port(
            "gnd",
            port(
                PortKind::VoltageSink,
                vec![
                    ("voltage_limits", volts(0.0, 0.0)),
                    ("current_draw", reference("current")),
                ],
            ),
        )
        .param("voltage_limits", interval_param(volts(2.0, 5.5)))
        .param("current", interval_param(amps(0.0, 0.010)))
        .build(),
    );

    defs.push(
        def(
            "BufferChip",
            Some("Block"),
            leaf(
                "SOT-23-5",
                "U",
                LeafValue::Fixed("Buffer".into()),
                &[("a", 1), ("y", 2)],
            ),
        )
        .port("a", port(PortKind::Passive, vec![]))
        .port("y", port(PortKind::Passive, vec![]))
        .build(),
    );

    defs.push(
        def(
            "VoltageFollower",
            Some("Block"),
            BlockBody::Generator(GeneratorSpec {
                deps: vec![GenDep::PortLinkParam {
                    port: "inp",
                    param: "voltage",
                }],
                generate: generators::voltage_follower_generate,
            }),
        )
        .port(
            "inp",
            port(
                PortKind::VoltageSink,
                vec![("voltage_limits", volts(0.0, 100.0))],
            ),
        )
        .port("out", port(PortKind::VoltageSource, vec![]))
        .build(),
    );

    defs.push(
        def(
            "LedChain",
            Some("Block"),
            BlockBody::Generator(GeneratorSpec {
                deps: vec![GenDep::OwnParam("count")],
                generate: generators::led_chain_generate,
            }),
        )
        .port(
            "io",
            port(
                PortKind::DigitalSink,
                vec![
                    ("voltage_limits", volts(0.0, 6.0)),
                    ("input_thresholds", volts(0.8, 2.0)),
                ],
            ),
        )
        .port("gnd", port(PortKind::Passive, vec![]))
        .param(
            "count",
            param(ParamType::Int, Some(Expr::Lit(ParamValue::Int(1)))),
        )
        .build(),
    );

    defs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_lookup() {
        let lib = Library::standard();
        let led = lib.lookup("IndicatorLed").unwrap();
        assert!(matches!(led.body, BlockBody::Generator(_)));
        let ports: Vec<String> = lib
            .effective_ports("IndicatorLed")
            .unwrap()
            .into_iter()
            .map(|(n, _)| n)
            .collect();
        assert_eq!(ports, vec!["io", "gnd"]);

        let mcu = lib.lookup("MagicMcu").unwrap();
        assert!(matches!(mcu.body, BlockBody::Structural(_)));
        let digital = lib.port_decl("MagicMcu", "digital").unwrap();
        assert_eq!(digital.kind, PortKind::DigitalSource);
        assert_eq!(digital.size, 4);

        assert_eq!(lib.lookup("Bogus").unwrap_err().code(), "E_UNKNOWN_BLOCK");
    }

    #[test]
    fn subtype_relation() {
        let lib = Library::standard();
        assert!(lib.is_subtype("Tps561201Buck", "BuckConverter").unwrap());
        assert!(lib.is_subtype("Tps561201Buck", "PowerConverter").unwrap());
        assert!(lib.is_subtype("BuckConverter", "BuckConverter").unwrap());
        assert!(!lib.is_subtype("IndicatorLed", "BuckConverter").unwrap());
        assert!(lib.is_subtype("Nope", "Block").is_err());
    }

    #[test]
    fn buck_inherits_converter_ports() {
        let lib = Library::standard();
        let ports: Vec<String> = lib
            .effective_ports("Tps561201Buck")
            .unwrap()
            .into_iter()
            .map(|(n, _)| n)
            .collect();
        assert_eq!(ports, vec!["pwr_in", "pwr_out", "gnd"]);
        let params: Vec<String> = lib
            .effective_params("Tps54360Buck")
            .unwrap()
            .into_iter()
            .map(|(n, _)| n)
            .collect();
        assert!(params.contains(&"output_voltage".to_string()));
    }

    #[test]
    fn leaf_definitions_have_total_pin_maps() {
        let lib = Library::standard();
        for name in lib.names().map(String::from).collect::<Vec<_>>() {
            let def = lib.lookup(&name).unwrap();
            if let BlockBody::Leaf(leaf) = &def.body {
                assert!(!leaf.footprint.is_empty(), "{name} missing footprint");
                assert!(!leaf.refdes_prefix.is_empty(), "{name} missing prefix");
                let mut elements = Vec::new();
                for (pname, decl) in lib.effective_ports(&name).unwrap() {
                    if decl.size == 1 {
                        elements.push(pname.clone());
                    } else {
                        for i in 0..decl.size {
                            elements.push(format!("{pname}[{i}]"));
                        }
                    }
                }
                for el in &elements {
                    assert!(
                        leaf.pins.iter().any(|(n, _)| n == el),
                        "{name} pin map misses {el}"
                    );
                }
            }
        }
    }

    #[test]
    fn duplicate_definition_rejected() {
        let mut lib = Library::standard();
        let dup = lib.lookup("Resistor").unwrap().clone();
        assert_eq!(lib.add(dup).unwrap_err().code(), "E_DUP_DEF");
    }
}
