//! Deterministic SVG rendering of `Re σ̂(ω)` with peak markers.

use std::fmt::Write;

use spinprobe::Peak;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;

/// Ticks at multiples of 1, 2 or 5 times a power of ten.
fn nice_ticks(lo: f64, hi: f64, target: usize) -> (Vec<f64>, usize) {
    let raw = (hi - lo) / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let first = (lo / step - 1e-9).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    ((first..=last).map(|k| k as f64 * step).collect(), decimals)
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, v: f64) -> f64 {
        LEFT + (v - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - (v - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn frame(omegas: &[f64], re: &[f64]) -> Frame {
    if omegas.is_empty() {
        return Frame {
            x: (-1.0, 1.0),
            y: (-1.0, 1.0),
        };
    }
    let (xmin, xmax) = (omegas[0], omegas[omegas.len() - 1]);
    let ymin = re.iter().copied().fold(0.0f64, f64::min);
    let ymax = re.iter().copied().fold(0.0f64, f64::max);
    let x = if xmax > xmin { (xmin, xmax) } else { (xmin - 1.0, xmin + 1.0) };
    let y = if ymax > ymin {
        let pad = 0.05 * (ymax - ymin);
        (ymin - pad, ymax + pad)
    } else {
        (-1.0, 1.0)
    };
    Frame { x, y }
}

/// SVG of the spectrum. An empty spectrum yields the axes alone.
pub fn render_svg(omegas: &[f64], re: &[f64], peaks: &[Peak]) -> String {
    let f = frame(omegas, re);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        s,
        r#"<path class="axes" d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" stroke="black" fill="none"/>"#
    );

    let (xt, xd) = nice_ticks(f.x.0, f.x.1, 8);
    for v in xt {
        let x = f.px(v);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{v:.xd$}</text>"#,
            y0 + 5.0,
            y0 + 18.0
        );
    }
    let (yt, yd) = nice_ticks(f.y.0, f.y.1, 6);
    for v in yt {
        let y = f.py(v);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.yd$}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0
        );
    }
    if f.y.0 < 0.0 && f.y.1 > 0.0 {
        let y = f.py(0.0);
        let _ = writeln!(
            s,
            r##"<line class="zero" x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="#999999" stroke-dasharray="4 3"/>"##
        );
    }
    let _ = writeln!(
        s,
        r#"<text class="xlabel" x="{:.2}" y="{:.2}" text-anchor="middle">ω</text>"#,
        0.5 * (x0 + x1),
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text class="ylabel" x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">Re σ̂(ω)</text>"#,
        0.5 * (y0 + y1),
        0.5 * (y0 + y1)
    );

    if !omegas.is_empty() {
        s.push_str(r##"<polyline class="spectrum" fill="none" stroke="#1f4e9a" stroke-width="1" points=""##);
        for (i, (&w, &v)) in omegas.iter().zip(re).enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{:.2},{:.2}", f.px(w), f.py(v));
        }
        s.push_str("\"/>\n");
        for p in peaks {
            let (x, y) = (f.px(p.omega_center), f.py(p.amplitude));
            let _ = writeln!(
                s,
                r##"<circle class="peak" cx="{x:.2}" cy="{y:.2}" r="4" fill="none" stroke="#c0392b" stroke-width="1.5"/><text class="peak-label" x="{x:.2}" y="{:.2}" text-anchor="middle" fill="#c0392b">{:.3}</text>"##,
                y - 8.0,
                p.omega_center
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
