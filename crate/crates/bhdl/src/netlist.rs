//! Flatten the elaborated hierarchy to components and pin-level nets, and
//! serialize them deterministically (KiCad-style S-expression, JSON, DOT).

use crate::error::{Error, Result};
use crate::model::{BlockBody, Design, DesignInstance, LeafValue};
use crate::path::Path;
use crate::stdlib::Library;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub definition: String,
    pub footprint: String,
    pub path: String,
    pub refdes: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub pin: u32,
    #[serde(rename = "ref")]
    pub refdes: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Net {
    pub name: String,
    pub nodes: Vec<Node>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Netlist {
    pub components: Vec<Component>,
    /// Leaf pins that ended up alone on a net; warnings, not errors.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dangling: Vec<String>,
    pub nets: Vec<Net>,
}

/// Union-find over port element paths.
struct UnionFind {
    index: BTreeMap<Path, usize>,
    parent: Vec<usize>,
}

impl UnionFind {
    fn new() -> UnionFind {
        UnionFind {
            index: BTreeMap::new(),
            parent: Vec::new(),
        }
    }

    fn id(&mut self, p: &Path) -> usize {
        if let Some(i) = self.index.get(p) {
            return *i;
        }
        let i = self.parent.len();
        self.parent.push(i);
        self.index.insert(p.clone(), i);
        i
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: &Path, b: &Path) {
        let (a, b) = (self.id(a), self.id(b));
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

struct Leaf<'a> {
    inst: &'a DesignInstance,
    refdes: String,
    footprint: String,
    value: String,
    /// (pin element path, pin number)
    pins: Vec<(Path, u32)>,
}

fn collect_leaves<'a>(design: &'a Design, lib: &Library) -> Result<Vec<Leaf<'a>>> {
    let mut leaves = Vec::new();
    // depth-first pre-order; children are stored in declaration order
    for inst in design.root.all_instances() {
        let def = lib.lookup(&inst.def_name)?;
        let BlockBody::Leaf(leaf) = &def.body else {
            continue;
        };
        let value = match &leaf.value {
            LeafValue::Fixed(text) => text.clone(),
            LeafValue::Param(name) => {
                let path = inst.path.child(name.clone());
                let v = design
                    .lookup(&path)
                    .ok_or_else(|| Error::Domain(format!("no solved value for {path}")))?;
                let iv = v.as_interval()?;
                render_engineering(iv.midpoint())
            }
        };
        let mut pins = Vec::new();
        for (element, number) in &leaf.pins {
            let rel: Path = element.parse()?;
            pins.push((inst.path.join(&rel), *number));
        }
        leaves.push(Leaf {
            inst,
            refdes: String::new(),
            footprint: leaf.footprint.clone(),
            value,
            pins,
        });
    }
    // refdes: per-prefix ordinals over the pre-order traversal
    let mut counters: BTreeMap<String, usize> = BTreeMap::new();
    for leaf in &mut leaves {
        let def = lib.lookup(&leaf.inst.def_name)?;
        let BlockBody::Leaf(body) = &def.body else {
            unreachable!()
        };
        let n = counters.entry(body.refdes_prefix.clone()).or_insert(0);
        *n += 1;
        leaf.refdes = format!("{}{}", body.refdes_prefix, n);
    }
    Ok(leaves)
}

/// Render a magnitude in engineering notation with an SI prefix letter,
/// board-tool style: `270`, `20k`, `2.7u`.
pub fn render_engineering(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    let sign = if value < 0.0 { "-" } else { "" };
    let v = value.abs();
    let mut exp3 = (v.log10().floor() as i32).div_euclid(3) * 3;
    exp3 = exp3.clamp(-12, 9);
    let mut mantissa = v / 10f64.powi(exp3);
    // absorb float dust like 269.99999999 -> 270
    mantissa = (mantissa * 1e6).round() / 1e6;
    if mantissa >= 1000.0 && exp3 < 9 {
        mantissa /= 1000.0;
        exp3 += 3;
    }
    let prefix = match exp3 {
        -12 => "p",
        -9 => "n",
        -6 => "u",
        -3 => "m",
        0 => "",
        3 => "k",
        6 => "M",
        9 => "G",
        _ => unreachable!(),
    };
    let mut text = format!("{mantissa:.6}");
    while text.contains('.') && (text.ends_with('0') || text.ends_with('.')) {
        text.pop();
    }
    format!("{sign}{text}{prefix}")
}

pub fn flatten(design: &Design, lib: &Library) -> Result<Netlist> {
    let leaves = collect_leaves(design, lib)?;
    let mut uf = UnionFind::new();
    for leaf in &leaves {
        for (pin, _) in &leaf.pins {
            uf.id(pin);
        }
    }
    for inst in design.root.all_instances() {
        for link in &inst.links {
            for pair in link.endpoints.windows(2) {
                uf.union(&pair[0], &pair[1]);
            }
        }
        for (outer, inner) in &inst.exports {
            uf.union(outer, inner);
        }
    }

    // group leaf pins by their net representative
    let mut groups: BTreeMap<usize, Vec<(Path, String, u32)>> = BTreeMap::new();
    for leaf in &leaves {
        for (pin, number) in &leaf.pins {
            let i = uf.id(pin);
            let root = uf.find(i);
            groups
                .entry(root)
                .or_default()
                .push((pin.clone(), leaf.refdes.clone(), *number));
        }
    }

    // net name: shallowest contributing link, lexicographic tie-break
    let all_links: Vec<_> = design.all_links();
    let mut member_root: BTreeMap<usize, Vec<&crate::model::Link>> = BTreeMap::new();
    for link in &all_links {
        for endpoint in &link.endpoints {
            if let Some(i) = uf.index.get(endpoint).copied() {
                let root = uf.find(i);
                member_root.entry(root).or_default().push(link);
            }
        }
    }

    let mut nets = Vec::new();
    let mut dangling = Vec::new();
    for (root, mut pins) in groups {
        if pins.len() < 2 {
            for (pin, _, _) in pins {
                dangling.push(pin.to_string());
            }
            continue;
        }
        let name = member_root
            .get(&root)
            .and_then(|links| {
                links
                    .iter()
                    .map(|l| (l.id.len(), l.id.to_string()))
                    .min()
                    .map(|(_, name)| name)
            })
            .unwrap_or_else(|| pins[0].0.to_string());
        pins.sort_by(|a, b| (&a.1, a.2).cmp(&(&b.1, b.2)));
        nets.push(Net {
            name,
            nodes: pins
                .into_iter()
                .map(|(_, refdes, pin)| Node { pin, refdes })
                .collect(),
        });
    }
    nets.sort_by(|a, b| a.name.cmp(&b.name));
    dangling.sort();

    let mut components: Vec<Component> = leaves
        .iter()
        .map(|l| Component {
            definition: l.inst.def_name.clone(),
            footprint: l.footprint.clone(),
            path: l.inst.path.to_string(),
            refdes: l.refdes.clone(),
            value: l.value.clone(),
        })
        .collect();
    components.sort_by_key(|c| refdes_key(&c.refdes));

    Ok(Netlist {
        components,
        nets,
        dangling,
    })
}

/// Sort key: alphabetical prefix, then numeric ordinal.
fn refdes_key(refdes: &str) -> (String, usize) {
    let split = refdes
        .find(|c: char| c.is_ascii_digit())
        .unwrap_or(refdes.len());
    let ordinal = refdes[split..].parse().unwrap_or(0);
    (refdes[..split].to_string(), ordinal)
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn emit_kicad(netlist: &Netlist) -> String {
    let mut out = String::from("(export (version D)\n");
    if netlist.components.is_empty() {
        out.push_str("  (components)\n");
    } else {
        out.push_str("  (components\n");
        for (i, c) in netlist.components.iter().enumerate() {
            out.push_str(&format!(
                "    (comp (ref {}) (value \"{}\") (footprint \"{}\")){}\n",
                c.refdes,
                escape(&c.value),
                escape(&c.footprint),
                if i + 1 == netlist.components.len() {
                    ")"
                } else {
                    ""
                },
            ));
        }
    }
    if netlist.nets.is_empty() {
        out.push_str("  (nets))\n");
    } else {
        out.push_str("  (nets\n");
        for (i, net) in netlist.nets.iter().enumerate() {
            let nodes: Vec<String> = net
                .nodes
                .iter()
                .map(|n| format!(" (node (ref {}) (pin {}))", n.refdes, n.pin))
                .collect();
            out.push_str(&format!(
                "    (net (code {}) (name \"{}\"){}){}\n",
                i + 1,
                escape(&net.name),
                nodes.join(""),
                if i + 1 == netlist.nets.len() {
                    "))"
                } else {
                    ""
                },
            ));
        }
    }
    out
}

pub fn emit_json(netlist: &Netlist) -> String {
    let mut text = serde_json::to_string_pretty(netlist).expect("netlist serializes");
    text.push('\n');
    text
}

/// DOT rendering with clusters for non-leaf blocks down to `depth` levels
/// (0 = unlimited) and one edge bundle per link.
pub fn emit_dot(design: &Design, lib: &Library, depth: usize) -> Result<String> {
    let mut out = String::from("digraph design {\n  rankdir=LR;\n");
    // node_for maps every rendered-subtree root to its node id
    let mut nodes: Vec<Path> = Vec::new();
    let mut cluster_counter = 0usize;
    emit_dot_block(
        &design.root,
        lib,
        depth,
        1,
        &mut out,
        &mut nodes,
        &mut cluster_counter,
    )?;
    let mut edges: Vec<String> = Vec::new();
    for link in design.all_links() {
        let mut members: Vec<&Path> = Vec::new();
        for endpoint in &link.endpoints {
            if let Some(node) = nodes.iter().find(|n| endpoint.starts_with(n)) {
                if !members.contains(&node) {
                    members.push(node);
                }
            }
        }
        let label = link.id.last().name.clone();
        for m in members.iter().skip(1) {
            edges.push(format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                members[0], m, label
            ));
        }
    }
    edges.sort();
    for e in edges {
        out.push_str(&e);
    }
    out.push_str("}\n");
    Ok(out)
}

fn emit_dot_block(
    inst: &DesignInstance,
    lib: &Library,
    depth: usize,
    level: usize,
    out: &mut String,
    nodes: &mut Vec<Path>,
    cluster_counter: &mut usize,
) -> Result<()> {
    let indent = "  ".repeat(level);
    let def = lib.lookup(&inst.def_name)?;
    let is_leaf = matches!(def.body, BlockBody::Leaf(_)) || inst.children.is_empty();
    let at_cutoff = depth != 0 && level > depth;
    if is_leaf || at_cutoff {
        out.push_str(&format!(
            "{indent}\"{}\" [shape=box, label=\"{}\\n{}\"];\n",
            inst.path,
            inst.path.last(),
            inst.def_name
        ));
        nodes.push(inst.path.clone());
        return Ok(());
    }
    if level == 1 {
        // the root block is the graph itself
        for child in &inst.children {
            emit_dot_block(child, lib, depth, level + 1, out, nodes, cluster_counter)?;
        }
        return Ok(());
    }
    *cluster_counter += 1;
    out.push_str(&format!(
        "{indent}subgraph cluster_{} {{\n{indent}  label=\"{} ({})\";\n",
        cluster_counter,
        inst.path.last(),
        inst.def_name
    ));
    for child in &inst.children {
        emit_dot_block(child, lib, depth, level + 1, out, nodes, cluster_counter)?;
    }
    out.push_str(&format!("{indent}}}\n"));
    Ok(())
}
