//! CSV and SVG writers. Floats are written as `{:.16e}` (17 significant
//! digits), which round-trips every `f64`.

use std::fmt::Write as _;
use std::io::{self, Write};

use pulsecouple_core::analysis::{StroboscopicFrame, TwoCliqueState};

pub fn strobe_header(out: &mut impl Write, n: usize) -> io::Result<()> {
    let mut line = String::from("k,t_k");
    for i in 0..n {
        write!(line, ",phi_{i}").unwrap();
    }
    writeln!(out, "{line}")
}

pub fn strobe_row(out: &mut impl Write, frame: &StroboscopicFrame) -> io::Result<()> {
    let mut line = String::with_capacity(24 * (frame.phases.len() + 2));
    write!(line, "{},{:.16e}", frame.k, frame.t_k).unwrap();
    for p in &frame.phases {
        write!(line, ",{p:.16e}").unwrap();
    }
    writeln!(out, "{line}")
}

pub const ORBIT_HEADER: &str = "step,theta,p,q,oracle_delta";

pub fn orbit_row(out: &mut impl Write, step: usize, s: &TwoCliqueState, oracle_delta: Option<f64>) -> io::Result<()> {
    write!(out, "{step},{:.16e},{},{},", s.theta, s.p, s.q)?;
    match oracle_delta {
        Some(d) => writeln!(out, "{d:.16e}"),
        None => writeln!(out),
    }
}

pub const TRACE_HEADER: &str = "t,phi_0,phi_1,synchronized";

pub fn trace_row(out: &mut impl Write, t: f64, phases: &[f64], synchronized: bool) -> io::Result<()> {
    write!(out, "{t:.16e}")?;
    for p in phases {
        write!(out, ",{p:.16e}")?;
    }
    writeln!(out, ",{}", u8::from(synchronized))
}

/// Scatter of phase against frame index, one dot per oscillator per frame.
pub fn strobe_svg(out: &mut impl Write, frames: &[StroboscopicFrame]) -> io::Result<()> {
    const W: f64 = 800.0;
    const H: f64 = 400.0;
    const PAD: f64 = 40.0;
    let k_min = frames.first().map_or(0, |f| f.k) as f64;
    let k_max = frames.last().map_or(1, |f| f.k) as f64;
    let span = (k_max - k_min).max(1.0);
    let x = |k: u64| PAD + (k as f64 - k_min) / span * (W - 2.0 * PAD);
    let y = |p: f64| H - PAD - p * (H - 2.0 * PAD);

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )?;
    writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#)?;
    writeln!(
        out,
        r#"<path d="M{PAD} {PAD}V{b}H{r}" fill="none" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    )?;
    writeln!(out, r#"<text x="{}" y="{}" font-size="12">k</text>"#, W / 2.0, H - 10.0)?;
    writeln!(out, r#"<text x="8" y="{}" font-size="12">phase</text>"#, H / 2.0)?;
    writeln!(out, r#"<g fill="black">"#)?;
    for f in frames {
        for &p in &f.phases {
            writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="1"/>"#, x(f.k), y(p))?;
        }
    }
    writeln!(out, "</g>\n</svg>")
}
