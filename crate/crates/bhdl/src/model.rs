//! The intermediate representation shared by all pipeline stages: port and
//! block definitions, elaborated instances and links.

use crate::dims::{Dimension, AMPERE, VOLT};
use crate::error::{Error, Result};
use crate::expr::{Expr, ParamType, ParamValue};
use crate::path::Path;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortKind {
    VoltageSource,
    VoltageSink,
    DigitalSource,
    DigitalSink,
    DigitalBidir,
    Passive,
}

impl PortKind {
    pub fn from_name(name: &str) -> Option<PortKind> {
        Some(match name {
            "VoltageSource" => PortKind::VoltageSource,
            "VoltageSink" => PortKind::VoltageSink,
            "DigitalSource" => PortKind::DigitalSource,
            "DigitalSink" => PortKind::DigitalSink,
            "DigitalBidir" => PortKind::DigitalBidir,
            "Passive" => PortKind::Passive,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            PortKind::VoltageSource => "VoltageSource",
            PortKind::VoltageSink => "VoltageSink",
            PortKind::DigitalSource => "DigitalSource",
            PortKind::DigitalSink => "DigitalSink",
            PortKind::DigitalBidir => "DigitalBidir",
            PortKind::Passive => "Passive",
        }
    }

    /// Parameter schema for the kind: name and expected dimension.
    pub fn params(self) -> &'static [(&'static str, Dimension)] {
        match self {
            PortKind::VoltageSource => &[("voltage_out", VOLT), ("current_limits", AMPERE)],
            PortKind::VoltageSink => &[("voltage_limits", VOLT), ("current_draw", AMPERE)],
            PortKind::DigitalSource => &[
                ("voltage_out", VOLT),
                ("output_thresholds", VOLT),
                ("current_limits", AMPERE),
            ],
            PortKind::DigitalSink => &[
                ("voltage_limits", VOLT),
                ("input_thresholds", VOLT),
                ("current_draw", AMPERE),
            ],
            PortKind::DigitalBidir => &[
                ("voltage_out", VOLT),
                ("output_thresholds", VOLT),
                ("current_limits", AMPERE),
                ("voltage_limits", VOLT),
                ("input_thresholds", VOLT),
                ("current_draw", AMPERE),
            ],
            PortKind::Passive => &[],
        }
    }

    pub fn is_digital(self) -> bool {
        matches!(
            self,
            PortKind::DigitalSource | PortKind::DigitalSink | PortKind::DigitalBidir
        )
    }
}

#[derive(Debug, Clone)]
pub struct PortDecl {
    pub kind: PortKind,
    /// Declared array size; 1 means a scalar port.
    pub size: usize,
    /// Parameter-defining expressions, evaluated relative to the owning
    /// instance. Applied to every array element.
    pub args: Vec<(String, Expr)>,
}

#[derive(Debug, Clone)]
pub struct ParamDecl {
    pub ty: ParamType,
    /// Default defining expression; instance arguments override it. A param
    /// with neither is expected to be written by a generator.
    pub expr: Option<Expr>,
}

#[derive(Debug, Clone)]
pub struct StructuralBody {
    /// (instance name, declared definition name, keyword arguments).
    pub instances: Vec<(String, String, Vec<(String, Expr)>)>,
    /// Each connect statement: port refs relative to this block.
    pub connects: Vec<Vec<Path>>,
    /// (own port name, child port ref). Whole arrays allowed when sizes match.
    pub exports: Vec<(String, Path)>,
    pub checks: Vec<Expr>,
}

impl StructuralBody {
    pub fn empty() -> StructuralBody {
        StructuralBody {
            instances: Vec::new(),
            connects: Vec::new(),
            exports: Vec::new(),
            checks: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LeafBody {
    pub footprint: String,
    pub refdes_prefix: String,
    pub value: LeafValue,
    /// Port element (rendered as path text, e.g. `digital[0]`) to pin number.
    pub pins: Vec<(String, u32)>,
}

#[derive(Debug, Clone)]
pub enum LeafValue {
    /// Fixed value text.
    Fixed(String),
    /// Render the named interval parameter's magnitude with an SI prefix.
    Param(String),
}

/// What a generator needs solved before it can run.
#[derive(Debug, Clone)]
pub enum GenDep {
    OwnParam(&'static str),
    /// A computed parameter of the link attached to the named scalar port.
    PortLinkParam {
        port: &'static str,
        param: &'static str,
    },
}

/// Subtree additions produced by a generator run. Paths and exprs are
/// relative to the generator instance.
#[derive(Debug, Default)]
pub struct GeneratedBody {
    pub instances: Vec<(String, String, Vec<(String, Expr)>)>,
    pub connects: Vec<Vec<Path>>,
    /// Direct parameter bindings (own params or own port params).
    pub param_writes: Vec<(Path, ParamValue)>,
    /// (check name, expr) registered on the instance.
    pub checks: Vec<(String, Expr)>,
}

pub struct GeneratorContext {
    pub instance_path: Path,
    /// Solved dependency values keyed by dependency label: own params by
    /// name, link params as `<port>.link.<param>`.
    pub deps: BTreeMap<String, ParamValue>,
}

impl GeneratorContext {
    pub fn interval(&self, key: &str) -> Result<crate::interval::Interval> {
        let v = self
            .deps
            .get(key)
            .ok_or_else(|| Error::Domain(format!("missing generator dependency `{key}`")))?;
        Ok(*v.as_interval()?)
    }

    pub fn int(&self, key: &str) -> Result<i64> {
        match self.deps.get(key) {
            Some(ParamValue::Int(n)) => Ok(*n),
            _ => Err(Error::Domain(format!(
                "missing integer generator dependency `{key}`"
            ))),
        }
    }
}

pub type GeneratorFn = fn(&GeneratorContext) -> Result<GeneratedBody>;

#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    pub deps: Vec<GenDep>,
    pub generate: GeneratorFn,
}

#[derive(Debug, Clone)]
pub enum BlockBody {
    Structural(StructuralBody),
    Generator(GeneratorSpec),
    Leaf(LeafBody),
}

#[derive(Debug, Clone)]
pub struct BlockDefinition {
    pub name: String,
    pub parent: Option<String>,
    pub abstract_: bool,
    pub default_refinement: Option<String>,
    pub ports: Vec<(String, PortDecl)>,
    pub params: Vec<(String, ParamDecl)>,
    pub body: BlockBody,
}

impl BlockDefinition {
    pub fn kind_name(&self) -> &'static str {
        if self.abstract_ {
            return "abstract";
        }
        match self.body {
            BlockBody::Structural(_) => "structural",
            BlockBody::Generator(_) => "generator",
            BlockBody::Leaf(_) => "leaf",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    Power,
    Digital,
    PassiveNet,
}

#[derive(Debug, Clone)]
pub struct Link {
    /// Absolute path: owning block path plus a derived name segment.
    pub id: Path,
    pub kind: LinkKind,
    /// Absolute port element paths, in connect order.
    pub endpoints: Vec<Path>,
    /// Index into `endpoints` of the source/driver (Power and Digital only).
    pub driver: Option<usize>,
    /// Kinds resolved at link creation, parallel to `endpoints`.
    pub endpoint_kinds: Vec<PortKind>,
}

impl Link {
    /// Sink endpoints: everything that declares a `current_draw` param and
    /// is not the driver.
    pub fn sinks(&self) -> Vec<Path> {
        self.endpoints
            .iter()
            .zip(&self.endpoint_kinds)
            .enumerate()
            .filter(|(i, (_, kind))| {
                Some(*i) != self.driver
                    && matches!(
                        kind,
                        PortKind::VoltageSink | PortKind::DigitalSink | PortKind::DigitalBidir
                    )
            })
            .map(|(_, (p, _))| p.clone())
            .collect()
    }

    pub fn source(&self) -> Option<&Path> {
        self.driver.map(|i| &self.endpoints[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    LinkVoltage,
    LinkCurrent,
    Threshold,
    Generator,
    User,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::LinkVoltage => "link-voltage",
            CheckKind::LinkCurrent => "link-current",
            CheckKind::Threshold => "threshold",
            CheckKind::Generator => "generator",
            CheckKind::User => "user",
        }
    }
}

/// A check registered on an instance (user `check(...)` statements and
/// generator-emitted checks). Link checks are derived from links directly.
#[derive(Debug, Clone)]
pub struct CheckSpec {
    pub name: String,
    pub kind: CheckKind,
    pub expr: Expr,
}

#[derive(Debug)]
pub struct DesignInstance {
    pub path: Path,
    /// Definition name after refinement.
    pub def_name: String,
    /// Keyword arguments, evaluated in the parent scope.
    pub args: Vec<(String, Expr)>,
    pub args_base: Option<Path>,
    pub children: Vec<DesignInstance>,
    pub links: Vec<Link>,
    /// (outer port element, inner port element), absolute paths.
    pub exports: Vec<(Path, Path)>,
    pub checks: Vec<CheckSpec>,
    pub pending_generator: bool,
    /// Values pinned by a generator run (absolute paths).
    pub gen_writes: Vec<(Path, ParamValue)>,
}

impl DesignInstance {
    pub fn find(&self, path: &Path) -> Option<&DesignInstance> {
        if &self.path == path {
            return Some(self);
        }
        if !path.starts_with(&self.path) {
            return None;
        }
        self.children.iter().find_map(|c| c.find(path))
    }

    pub fn walk<'a>(&'a self, out: &mut Vec<&'a DesignInstance>) {
        out.push(self);
        for c in &self.children {
            c.walk(out);
        }
    }

    pub fn all_instances(&self) -> Vec<&DesignInstance> {
        let mut out = Vec::new();
        self.walk(&mut out);
        out
    }
}

/// A fully elaborated and solved design.
#[derive(Debug)]
pub struct Design {
    pub root: DesignInstance,
    pub bindings: BTreeMap<Path, ParamValue>,
}

impl Design {
    pub fn lookup(&self, path: &Path) -> Option<&ParamValue> {
        self.bindings.get(path)
    }

    pub fn all_links(&self) -> Vec<&Link> {
        let mut links: Vec<&Link> = self
            .root
            .all_instances()
            .into_iter()
            .flat_map(|i| i.links.iter())
            .collect();
        links.sort_by(|a, b| a.id.cmp(&b.id));
        links
    }
}
