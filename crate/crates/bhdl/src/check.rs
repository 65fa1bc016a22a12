//! Electrical rule checks over the solved design: auto-generated link
//! checks (sink voltage limits, source current budget, digital thresholds)
//! plus user and generator assertions, reported as pass/fail/unresolved.

use crate::expr::{collect_refs, eval, render, EvalCtx, Expr, ParamValue};
use crate::model::{CheckKind, Design, LinkKind, PortKind};
use crate::path::Path;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unresolved,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub kind: String,
    pub status: Status,
    pub expr: String,
    pub observed: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unresolved: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub summary: Summary,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

/// All checks, sorted by id, with summary counts. Never fails: unresolved
/// or ill-typed expressions become `Unresolved` results rather than errors.
pub fn run_checks(design: &Design) -> Report {
    let mut pending: Vec<(String, CheckKind, Expr, Option<Path>)> = Vec::new();

    for link in design.all_links() {
        if link.kind == LinkKind::PassiveNet {
            continue;
        }
        let voltage = Expr::Ref(link.id.child("voltage"));
        for sink in link.sinks() {
            pending.push((
                format!("{}:voltage:{sink}", link.id),
                CheckKind::LinkVoltage,
                Expr::SubsetOf(
                    Box::new(voltage.clone()),
                    Box::new(Expr::Ref(sink.child("voltage_limits"))),
                ),
                None,
            ));
        }
        if let Some(source) = link.source() {
            pending.push((
                format!("{}:current", link.id),
                CheckKind::LinkCurrent,
                Expr::SubsetOf(
                    Box::new(Expr::Ref(link.id.child("current_draw"))),
                    Box::new(Expr::Ref(source.child("current_limits"))),
                ),
                None,
            ));
            if link.kind == LinkKind::Digital {
                for (endpoint, kind) in link.endpoints.iter().zip(&link.endpoint_kinds) {
                    let is_listener =
                        matches!(kind, PortKind::DigitalSink | PortKind::DigitalBidir)
                            && endpoint != source;
                    if is_listener {
                        pending.push((
                            format!("{}:threshold:{endpoint}", link.id),
                            CheckKind::Threshold,
                            Expr::Contains(
                                Box::new(Expr::Ref(source.child("output_thresholds"))),
                                Box::new(Expr::Ref(endpoint.child("input_thresholds"))),
                            ),
                            None,
                        ));
                    }
                }
            }
        }
    }

    for inst in design.root.all_instances() {
        for check in &inst.checks {
            pending.push((
                format!("{}:{}", inst.path, check.name),
                check.kind,
                check.expr.clone(),
                Some(inst.path.clone()),
            ));
        }
    }

    let mut checks: Vec<CheckResult> = pending
        .into_iter()
        .map(|(id, kind, expr, base)| evaluate(design, id, kind, &expr, base.as_ref()))
        .collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));

    let mut summary = Summary::default();
    for c in &checks {
        match c.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Unresolved => summary.unresolved += 1,
        }
    }
    Report { summary, checks }
}

fn evaluate(
    design: &Design,
    id: String,
    kind: CheckKind,
    expr: &Expr,
    base: Option<&Path>,
) -> CheckResult {
    let refs = collect_refs(expr, base, None);
    let mut observed = BTreeMap::new();
    let mut unresolved = false;
    for r in &refs {
        match design.lookup(r) {
            Some(v) => {
                if matches!(v, ParamValue::Interval(i) if i.is_empty()) {
                    unresolved = true;
                }
                observed.insert(r.to_string(), v.to_string());
            }
            None => unresolved = true,
        }
    }
    let status = if unresolved {
        Status::Unresolved
    } else {
        let lookup = |p: &Path| design.lookup(p).cloned();
        let ctx = EvalCtx {
            base,
            lookup: &lookup,
            sinks: None,
        };
        match eval(expr, &ctx) {
            Ok(ParamValue::Bool(true)) => Status::Pass,
            Ok(ParamValue::Bool(false)) => Status::Fail,
            _ => Status::Unresolved,
        }
    };
    CheckResult {
        id,
        kind: kind.name().to_string(),
        status,
        expr: render(expr, base),
        observed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elaborate::{elaborate, RefinementConfig, DEFAULT_MAX_ITERATIONS};
    use crate::frontend::load_design;
    use crate::stdlib::Library;

    fn compile(src: &str, top: &str) -> Report {
        let mut lib = Library::standard();
        load_design(src, &mut lib).unwrap();
        let design = elaborate(
            &lib,
            top,
            &RefinementConfig::default(),
            DEFAULT_MAX_ITERATIONS,
        )
        .unwrap();
        run_checks(&design)
    }

    #[test]
    fn blinky_all_pass() {
        let report = compile(
            "block Blinky {\n  mcu = MagicMcu()\n  led = IndicatorLed(current = 5mA +- 1mA)\n  connect(mcu.gnd, led.gnd)\n  connect(mcu.digital[0], led.io)\n}\n",
            "Blinky",
        );
        assert_eq!(report.summary.fail, 0);
        assert_eq!(report.summary.unresolved, 0);
        assert!(report.summary.pass >= 4, "{:?}", report.checks);
        let kinds: Vec<&str> = report.checks.iter().map(|c| c.kind.as_str()).collect();
        assert!(kinds.contains(&"link-voltage"));
        assert!(kinds.contains(&"link-current"));
        assert!(kinds.contains(&"threshold"));
        assert!(kinds.contains(&"generator"));
    }

    #[test]
    fn overvoltage_single_fail() {
        let report = compile(
            "block Hot {\n  supply = IdealSupply(voltage = 12V)\n  load = Load()\n  connect(supply.pwr, load.pwr)\n  connect(supply.gnd, load.gnd)\n}\n",
            "Hot",
        );
        assert_eq!(report.summary.fail, 1, "{:?}", report.checks);
        let fail = report
            .checks
            .iter()
            .find(|c| c.status == Status::Fail)
            .unwrap();
        assert_eq!(fail.kind, "link-voltage");
        let volts = fail
            .observed
            .get("hot.pwr_net.voltage")
            .unwrap_or_else(|| panic!("observed map: {:?}", fail.observed));
        assert_eq!(volts, "[12, 12] V");
    }

    #[test]
    fn unresolved_user_check() {
        let report = compile(
            "block Odd {\n  r = Resistor()\n  check(subset_of(r.resistance, ghost))\n}\n",
            "Odd",
        );
        assert_eq!(report.summary.unresolved, 1);
        let c = &report.checks[0];
        assert_eq!(c.kind, "user");
        assert_eq!(c.status, Status::Unresolved);
    }

    #[test]
    fn report_shape_and_order() {
        let report = compile(
            "block Blinky {\n  mcu = MagicMcu()\n  led = IndicatorLed()\n  connect(mcu.gnd, led.gnd)\n  connect(mcu.digital[0], led.io)\n}\n",
            "Blinky",
        );
        let ids: Vec<&str> = report.checks.iter().map(|c| c.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);

        let json = report.to_json();
        let summary_pos = json.find("\"summary\"").unwrap();
        let checks_pos = json.find("\"checks\"").unwrap();
        assert!(summary_pos < checks_pos);
        let parsed: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.summary.pass, report.summary.pass);
    }

    #[test]
    fn rerun_is_identical() {
        let mut lib = Library::standard();
        load_design(
            "block Hot {\n  supply = IdealSupply(voltage = 12V)\n  load = Load()\n  connect(supply.pwr, load.pwr)\n  connect(supply.gnd, load.gnd)\n}\n",
            &mut lib,
        )
        .unwrap();
        let design = elaborate(
            &lib,
            "Hot",
            &RefinementConfig::default(),
            DEFAULT_MAX_ITERATIONS,
        )
        .unwrap();
        assert_eq!(run_checks(&design).to_json(), run_checks(&design).to_json());
    }
}
