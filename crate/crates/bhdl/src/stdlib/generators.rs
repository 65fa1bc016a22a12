//! Generator procedures: native code that sizes components from solved
//! parameters and emits a subcircuit. The sizing rules are exposed as pure
//! functions so they can be exercised directly.

use super::series::{nearest_standard_value, RoundMode, StandardSeries};
use crate::dims::{AMPERE, DIMENSIONLESS, FARAD, HENRY, OHM};
use crate::error::{Error, Result};
use crate::expr::{Expr, ParamValue};
use crate::interval::Interval;
use crate::model::{GeneratedBody, GeneratorContext};
use crate::path::Path;

#[derive(Debug, Clone, Copy)]
pub struct LedSizing {
    pub resistance: f64,
    pub realized_current: Interval,
}

/// Size the LED current-limiting resistor: target resistance from midpoint
/// link voltage and midpoint target current, rounded up to E24 so the
/// realized current never exceeds the target at nominal voltage.
pub fn size_led_resistor(
    link_voltage: Interval,
    forward_voltage: Interval,
    target_current: Interval,
) -> Result<LedSizing> {
    let v_mid = link_voltage.midpoint();
    let vf_mid = forward_voltage.midpoint();
    let i_mid = target_current.midpoint();
    if i_mid <= 0.0 {
        return Err(Error::GenInfeasible(format!(
            "target LED current must be positive, got {target_current}"
        )));
    }
    let target_r = (v_mid - vf_mid) / i_mid;
    if target_r <= 0.0 {
        return Err(Error::GenInfeasible(format!(
            "link voltage {link_voltage} is below the LED forward voltage {forward_voltage}"
        )));
    }
    let resistance = nearest_standard_value(target_r, StandardSeries::E24, RoundMode::RoundUp)?;
    let lo = ((link_voltage.lo() - forward_voltage.hi()) / resistance).max(0.0);
    let hi = ((link_voltage.hi() - forward_voltage.lo()) / resistance).max(0.0);
    Ok(LedSizing {
        resistance,
        realized_current: Interval::new(lo, hi, AMPERE)?,
    })
}

pub fn indicator_led_generate(ctx: &GeneratorContext) -> Result<GeneratedBody> {
    let link_v = ctx.interval("io.link.voltage")?;
    let target_i = ctx.interval("current")?;
    let vf = ctx.interval("forward_voltage")?;
    let sizing = size_led_resistor(link_v, vf, target_i)?;
    let realized = ParamValue::Interval(sizing.realized_current);

    let mut body = GeneratedBody::default();
    body.instances.push((
        "D".into(),
        "Led".into(),
        vec![("forward_voltage".into(), Expr::lit_interval(vf))],
    ));
    body.instances.push((
        "R".into(),
        "Resistor".into(),
        vec![(
            "resistance".into(),
            Expr::lit_interval(Interval::point(sizing.resistance, OHM)),
        )],
    ));
    body.connects.push(vec![path("io"), path("D.anode")]);
    body.connects.push(vec![path("D.cathode"), path("R.p1")]);
    body.connects.push(vec![path("R.p2"), path("gnd")]);
    body.param_writes
        .push((path("actual_current"), realized.clone()));
    body.param_writes
        .push((path("io.current_draw"), realized.clone()));
    body.param_writes.push((path("gnd.current_draw"), realized));
    body.checks.push((
        "led_current".into(),
        Expr::SubsetOf(
            Box::new(Expr::Ref(path("actual_current"))),
            Box::new(Expr::Ref(path("D.current_limits"))),
        ),
    ));
    Ok(body)
}

#[derive(Debug, Clone, Copy)]
pub struct DividerSizing {
    pub r_top: f64,
    pub r_bot: f64,
    pub achieved_ratio: f64,
    pub vout: Interval,
}

/// Size a resistor divider for `ratio = Vout/Vin` and parallel impedance
/// `Z = R1*R2/(R1+R2)`: the exact solution is `R1 = Z/r`, `R2 = Z/(1-r)`
/// at the parameter midpoints, each snapped to the nearest E24 value.
pub fn size_divider(vin: Interval, ratio: Interval, impedance: Interval) -> Result<DividerSizing> {
    let r = ratio.midpoint();
    let z = impedance.midpoint();
    if r <= 0.0 || r >= 1.0 {
        return Err(Error::GenInfeasible(format!(
            "divider ratio midpoint {r} is outside (0, 1)"
        )));
    }
    if z <= 0.0 {
        return Err(Error::GenInfeasible(format!(
            "divider impedance midpoint {z} must be positive"
        )));
    }
    let r_top = nearest_standard_value(z / r, StandardSeries::E24, RoundMode::Nearest)?;
    let r_bot = nearest_standard_value(z / (1.0 - r), StandardSeries::E24, RoundMode::Nearest)?;
    let achieved = r_bot / (r_top + r_bot);
    let vout = vin.mul(&Interval::point(achieved, DIMENSIONLESS))?;
    Ok(DividerSizing {
        r_top,
        r_bot,
        achieved_ratio: achieved,
        vout,
    })
}

pub fn voltage_divider_generate(ctx: &GeneratorContext) -> Result<GeneratedBody> {
    let vin = ctx.interval("input.link.voltage")?;
    let ratio = ctx.interval("ratio")?;
    let impedance = ctx.interval("impedance")?;
    let sizing = size_divider(vin, ratio, impedance)?;
    let series_total = sizing.r_top + sizing.r_bot;

    let mut body = GeneratedBody::default();
    body.instances.push((
        "r_top".into(),
        "Resistor".into(),
        vec![(
            "resistance".into(),
            Expr::lit_interval(Interval::point(sizing.r_top, OHM)),
        )],
    ));
    body.instances.push((
        "r_bot".into(),
        "Resistor".into(),
        vec![(
            "resistance".into(),
            Expr::lit_interval(Interval::point(sizing.r_bot, OHM)),
        )],
    ));
    body.connects.push(vec![path("input"), path("r_top.p1")]);
    body.connects
        .push(vec![path("r_top.p2"), path("r_bot.p1"), path("output")]);
    body.connects.push(vec![path("r_bot.p2"), path("gnd")]);
    body.param_writes.push((
        path("output.voltage_out"),
        ParamValue::Interval(sizing.vout),
    ));
    body.param_writes.push((
        path("output.current_limits"),
        ParamValue::Interval(Interval::new(
            0.0,
            vin.midpoint().abs() / series_total,
            AMPERE,
        )?),
    ));
    let through = Interval::new(0.0, vin.hi().abs() / series_total, AMPERE)?;
    body.param_writes
        .push((path("input.current_draw"), ParamValue::Interval(through)));
    body.param_writes
        .push((path("gnd.current_draw"), ParamValue::Interval(through)));
    body.checks.push((
        "ratio".into(),
        Expr::SubsetOf(
            Box::new(Expr::lit_interval(Interval::point(
                sizing.achieved_ratio,
                DIMENSIONLESS,
            ))),
            Box::new(Expr::Ref(path("ratio"))),
        ),
    ));
    Ok(body)
}

#[derive(Debug, Clone, Copy)]
pub struct BuckSizing {
    pub l_ideal: f64,
    pub inductance: f64,
    pub c_ideal: f64,
    pub capacitance: f64,
    pub duty: f64,
}

/// First-order CCM buck sizing: inductor from the ripple-ratio rule and
/// output capacitor for 1% output voltage ripple, both snapped up to E12.
pub fn size_buck(
    vin: Interval,
    vout: Interval,
    iout: Interval,
    frequency: Interval,
    ripple_ratio: Interval,
) -> Result<BuckSizing> {
    let vin_mid = vin.midpoint();
    let vout_mid = vout.midpoint();
    let freq = frequency.midpoint();
    let rho = ripple_ratio.midpoint();
    let i_peak = iout.hi();
    if vout_mid >= vin_mid {
        return Err(Error::GenInfeasible(format!(
            "buck output {vout} is not below input {vin}"
        )));
    }
    if freq <= 0.0 {
        return Err(Error::GenInfeasible(
            "switching frequency must be positive".into(),
        ));
    }
    if rho <= 0.0 || rho > 1.0 {
        return Err(Error::GenInfeasible(format!(
            "ripple ratio {rho} is outside (0, 1]"
        )));
    }
    if i_peak <= 0.0 {
        return Err(Error::GenInfeasible(
            "output current limit must be positive".into(),
        ));
    }
    let duty = vout_mid / vin_mid;
    if duty <= 0.0 {
        return Err(Error::GenInfeasible(
            "buck output voltage must be positive".into(),
        ));
    }
    let l_ideal = vout_mid * (vin_mid - vout_mid) / (vin_mid * freq * rho * i_peak);
    let inductance = nearest_standard_value(l_ideal, StandardSeries::E12, RoundMode::RoundUp)?;
    let v_ripple = 0.01 * vout_mid;
    let c_ideal = rho * i_peak / (8.0 * freq * v_ripple);
    let capacitance = nearest_standard_value(c_ideal, StandardSeries::E12, RoundMode::RoundUp)?;
    Ok(BuckSizing {
        l_ideal,
        inductance,
        c_ideal,
        capacitance,
        duty,
    })
}

fn buck_generate(ctx: &GeneratorContext, controller: &str) -> Result<GeneratedBody> {
    let vin = ctx.interval("pwr_in.link.voltage")?;
    let vout = ctx.interval("output_voltage")?;
    let iout = ctx.interval("output_current")?;
    let freq = ctx.interval("frequency")?;
    let rho = ctx.interval("ripple_ratio")?;
    let sizing = size_buck(vin, vout, iout, freq, rho)?;

    let mut body = GeneratedBody::default();
    body.instances
        .push(("ctl".into(), controller.to_string(), vec![]));
    body.instances.push((
        "l".into(),
        "Inductor".into(),
        vec![(
            "inductance".into(),
            Expr::lit_interval(Interval::point(sizing.inductance, HENRY)),
        )],
    ));
    body.instances.push((
        "c_in".into(),
        "Capacitor".into(),
        vec![(
            "capacitance".into(),
            // input bulk capacitance follows the output capacitor choice
            Expr::lit_interval(Interval::point(sizing.capacitance, FARAD)),
        )],
    ));
    body.instances.push((
        "c_out".into(),
        "Capacitor".into(),
        vec![(
            "capacitance".into(),
            Expr::lit_interval(Interval::point(sizing.capacitance, FARAD)),
        )],
    ));
    body.connects
        .push(vec![path("pwr_in"), path("ctl.vin"), path("c_in.p1")]);
    body.connects.push(vec![
        path("gnd"),
        path("ctl.gnd"),
        path("c_in.p2"),
        path("c_out.p2"),
    ]);
    body.connects.push(vec![path("ctl.sw"), path("l.p1")]);
    body.connects
        .push(vec![path("l.p2"), path("c_out.p1"), path("pwr_out")]);
    body.param_writes
        .push((path("pwr_out.voltage_out"), ParamValue::Interval(vout)));
    body.param_writes.push((
        path("pwr_out.current_limits"),
        ParamValue::Interval(Interval::new(0.0, iout.hi(), AMPERE)?),
    ));
    let draw = Interval::new(0.0, iout.hi(), AMPERE)?;
    body.param_writes
        .push((path("pwr_in.current_draw"), ParamValue::Interval(draw)));
    body.param_writes
        .push((path("gnd.current_draw"), ParamValue::Interval(draw)));
    body.checks.push((
        "input_rating".into(),
        Expr::SubsetOf(
            Box::new(Expr::lit_interval(vin)),
            Box::new(Expr::Ref(path("ctl.input_rating"))),
        ),
    ));
    body.checks.push((
        "duty".into(),
        Expr::SubsetOf(
            Box::new(Expr::lit_interval(Interval::point(
                sizing.duty,
                DIMENSIONLESS,
            ))),
            Box::new(Expr::lit_interval(
                Interval::new(0.0, 1.0, DIMENSIONLESS).unwrap(),
            )),
        ),
    ));
    Ok(body)
}

pub fn tps561201_buck_generate(ctx: &GeneratorContext) -> Result<GeneratedBody> {
    buck_generate(ctx, "Tps561201")
}

pub fn tps54360_buck_generate(ctx: &GeneratorContext) -> Result<GeneratedBody> {
    buck_generate(ctx, "Tps54360")
}

/// Ideal unity-gain buffer: output rail mirrors the input link voltage.
pub fn voltage_follower_generate(ctx: &GeneratorContext) -> Result<GeneratedBody> {
    let vin = ctx.interval("inp.link.voltage")?;
    let mut body = GeneratedBody::default();
    body.instances
        .push(("buf".into(), "BufferChip".into(), vec![]));
    body.connects.push(vec![path("inp"), path("buf.a")]);
    body.connects.push(vec![path("buf.y"), path("out")]);
    body.param_writes
        .push((path("out.voltage_out"), ParamValue::Interval(vin)));
    body.param_writes.push((
        path("out.current_limits"),
        ParamValue::Interval(Interval::new(0.0, 1.0, AMPERE)?),
    ));
    body.param_writes.push((
        path("inp.current_draw"),
        ParamValue::Interval(Interval::new(0.0, 0.001, AMPERE)?),
    ));
    Ok(body)
}

/// Series LED chain; each stage generates one LED and recursively the rest
/// of the chain, so an `n`-stage chain takes `n` elaboration rounds.
pub fn led_chain_generate(ctx: &GeneratorContext) -> Result<GeneratedBody> {
    let count = ctx.int("count")?;
    if count < 1 {
        return Err(Error::GenInfeasible(format!(
            "LED chain length must be >= 1, got {count}"
        )));
    }
    let mut body = GeneratedBody::default();
    body.instances.push(("D".into(), "Led".into(), vec![]));
    body.connects.push(vec![path("io"), path("D.anode")]);
    if count > 1 {
        body.instances.push((
            "rest".into(),
            "LedChain".into(),
            vec![("count".into(), Expr::Lit(ParamValue::Int(count - 1)))],
        ));
        body.connects.push(vec![path("D.cathode"), path("rest.io")]);
        body.connects.push(vec![path("rest.gnd"), path("gnd")]);
    } else {
        body.connects.push(vec![path("D.cathode"), path("gnd")]);
    }
    body.param_writes.push((
        path("io.current_draw"),
        ParamValue::Interval(Interval::new(0.0, 0.001, AMPERE)?),
    ));
    Ok(body)
}

fn path(text: &str) -> Path {
    text.parse().expect("static path")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::VOLT;

    fn volts(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi, VOLT).unwrap()
    }

    fn amps(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi, AMPERE).unwrap()
    }

    #[test]
    fn led_sizing_point_values() {
        let s = size_led_resistor(volts(3.3, 3.3), volts(2.0, 2.0), amps(0.004, 0.006)).unwrap();
        assert!((s.resistance - 270.0).abs() < 1e-9);
        let nominal = (3.3 - 2.0) / 270.0;
        assert!((s.realized_current.lo() - nominal).abs() < 1e-12);
        assert!((s.realized_current.hi() - nominal).abs() < 1e-12);
    }

    #[test]
    fn led_sizing_interval_voltage() {
        let s = size_led_resistor(volts(3.2, 3.4), volts(2.0, 2.0), amps(0.005, 0.005)).unwrap();
        assert!((s.resistance - 270.0).abs() < 1e-9);
        assert!((s.realized_current.lo() - 1.2 / 270.0).abs() < 1e-12);
        assert!((s.realized_current.hi() - 1.4 / 270.0).abs() < 1e-12);
    }

    #[test]
    fn led_sizing_infeasible_below_forward_voltage() {
        let err =
            size_led_resistor(volts(1.5, 1.5), volts(2.0, 2.0), amps(0.004, 0.006)).unwrap_err();
        assert_eq!(err.code(), "E_GEN_INFEASIBLE");
    }

    #[test]
    fn divider_midpoint_sizing() {
        let z = Interval::point(10_000.0, OHM);
        let s = size_divider(
            volts(10.0, 10.0),
            Interval::new(0.48, 0.52, DIMENSIONLESS).unwrap(),
            z,
        )
        .unwrap();
        assert!((s.r_top - 20_000.0).abs() < 1e-6);
        assert!((s.r_bot - 20_000.0).abs() < 1e-6);
        assert!((s.achieved_ratio - 0.5).abs() < 1e-12);
        assert!((s.vout.lo() - 5.0).abs() < 1e-12);
        assert!((s.vout.hi() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn divider_scales_interval_input() {
        let s = size_divider(
            volts(4.9, 5.1),
            Interval::point(0.5, DIMENSIONLESS),
            Interval::point(10_000.0, OHM),
        )
        .unwrap();
        assert!((s.vout.lo() - 2.45).abs() < 1e-12);
        assert!((s.vout.hi() - 2.55).abs() < 1e-12);
    }

    #[test]
    fn divider_ratio_out_of_range() {
        let err = size_divider(
            volts(10.0, 10.0),
            Interval::point(1.2, DIMENSIONLESS),
            Interval::point(10_000.0, OHM),
        )
        .unwrap_err();
        assert_eq!(err.code(), "E_GEN_INFEASIBLE");
    }

    #[test]
    fn buck_reference_sizing() {
        let s = size_buck(
            volts(12.0, 12.0),
            volts(3.3, 3.3),
            amps(0.0, 1.0),
            Interval::point(500e3, crate::dims::HERTZ),
            Interval::point(0.3, DIMENSIONLESS),
        )
        .unwrap();
        let l_expected = 3.3 * (12.0 - 3.3) / (12.0 * 500e3 * 0.3 * 1.0);
        assert!((s.l_ideal - l_expected).abs() / l_expected < 1e-12);
        assert!((s.inductance - 18e-6).abs() / 18e-6 < 1e-9);
        let c_expected = 0.3 * 1.0 / (8.0 * 500e3 * 0.033);
        assert!((s.c_ideal - c_expected).abs() / c_expected < 1e-12);
        assert!((s.capacitance - 2.7e-6).abs() / 2.7e-6 < 1e-9);
    }

    #[test]
    fn buck_duty_over_one() {
        let err = size_buck(
            volts(12.0, 12.0),
            volts(15.0, 15.0),
            amps(0.0, 1.0),
            Interval::point(500e3, crate::dims::HERTZ),
            Interval::point(0.3, DIMENSIONLESS),
        )
        .unwrap_err();
        assert_eq!(err.code(), "E_GEN_INFEASIBLE");
    }
}
