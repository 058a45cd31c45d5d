//! File formats: window text files, CSV tables and SVG figures.
//!
//! Window files look like
//!
//! ```text
//! # two cells
//! anchor -1/2 -1/2
//! cell 0 0
//! cell 1 0
//! ```
//!
//! The anchor line is optional and defaults to `(-1/2, -1/2)`. Anchors are
//! exact rationals; decimal anchors are rejected. A line `connectivity off`
//! allows disconnected cell sets.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_rational::Ratio;

use crate::autocorr::AutocorrCoefficient;
use crate::cutproject::{ModelSetPatch, PatchPoint, WindowPlacement};
use crate::diffraction::PeakList;
use crate::error::{Error, Result};
use crate::homometry::HomometricPairReport;
use crate::quad::{direct_image, to_f64_pair, LatticeVector, Rational};
use crate::window::{CovariogramGrid, DifferenceBody, Polyomino};

/// Parse `p/q` or a plain integer.
pub fn parse_rational(s: &str) -> Option<Ratio<i64>> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse::<i64>().ok()?, q.trim().parse::<i64>().ok()?),
        None => (s.trim().parse::<i64>().ok()?, 1),
    };
    (q != 0).then(|| Ratio::new(p, q))
}

/// Parse a positive grid step given as `p/q`, an integer, or a terminating
/// decimal such as `0.25` (converted exactly).
pub fn parse_step(s: &str) -> Result<Ratio<i64>> {
    let bad = || Error::InvalidParameter(format!("invalid step {s:?}"));
    let r = match parse_rational(s) {
        Some(r) => r,
        None => {
            let (int, frac) = s.trim().split_once('.').ok_or_else(bad)?;
            if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let den = 10i64.pow(frac.len() as u32);
            let neg = int.starts_with('-');
            let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
            let f: i64 = frac.parse().map_err(|_| bad())?;
            let mag = whole.abs() * den + f;
            Ratio::new(if neg { -mag } else { mag }, den)
        }
    };
    if r <= Ratio::from_integer(0) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {s}")));
    }
    Ok(r)
}

/// Parse the window text format into a polyomino carrying its anchor.
pub fn parse_window_str(text: &str) -> Result<Polyomino> {
    let mut anchor = None;
    let mut connected = true;
    let mut cells = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let err = |message: String| Error::Parse { line, message };
        match tokens.as_slice() {
            [] => {}
            ["anchor", x, y] => {
                if anchor.is_some() {
                    return Err(err("second anchor line".into()));
                }
                let px = parse_rational(x).ok_or_else(|| err(format!("bad rational {x:?}")))?;
                let py = parse_rational(y).ok_or_else(|| err(format!("bad rational {y:?}")))?;
                anchor = Some([px, py]);
            }
            ["cell", x, y] => {
                let cx: i64 = x.parse().map_err(|_| err(format!("bad integer {x:?}")))?;
                let cy: i64 = y.parse().map_err(|_| err(format!("bad integer {y:?}")))?;
                if !cells.insert([cx, cy]) {
                    return Err(Error::DuplicateCell { line, cell: [cx, cy] });
                }
            }
            ["connectivity", "on"] => connected = true,
            ["connectivity", "off"] => connected = false,
            [kw, ..] => return Err(err(format!("unexpected {kw:?} line"))),
        }
    }
    if cells.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let p = Polyomino::new(cells, connected)?;
    Ok(p.with_anchor(anchor.unwrap_or_else(Polyomino::default_anchor)))
}

pub fn read_polyomino(path: &Path) -> Result<Polyomino> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_window_str(&text)
}

pub fn parse_window(path: &Path) -> Result<WindowPlacement> {
    read_polyomino(path).map(WindowPlacement::new)
}

pub fn write_window(p: &Polyomino) -> String {
    let [ax, ay] = p.anchor();
    let mut s = format!("anchor {}/{} {}/{}\n", ax.numer(), ax.denom(), ay.numer(), ay.denom());
    if !p.connectivity_enforced() {
        s.push_str("connectivity off\n");
    }
    for c in p.cells() {
        let _ = writeln!(s, "cell {} {}", c[0], c[1]);
    }
    s
}

pub fn save(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Plain decimal with 17 significant digits, independent of locale.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    let exp = x.abs().log10().floor() as i32;
    let prec = (16 - exp).clamp(0, 340) as usize;
    format!("{x:.prec$}")
}

fn rational_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn lattice_cols(n: LatticeVector) -> String {
    let [a, b, c, d] = n.0;
    format!("{a},{b},{c},{d}")
}

pub fn patch_csv(p: &ModelSetPatch) -> String {
    let mut s = String::from("n1,n2,n3,n4,x,y,xstar,ystar\n");
    for q in &p.points {
        push_patch_row(&mut s, q);
    }
    s
}

fn push_patch_row(s: &mut String, q: &PatchPoint) {
    let x = to_f64_pair(q.x);
    let st = to_f64_pair(q.star);
    let _ = writeln!(
        s,
        "{},{},{},{},{}",
        lattice_cols(q.n),
        fmt17(x[0]),
        fmt17(x[1]),
        fmt17(st[0]),
        fmt17(st[1])
    );
}

/// Covariogram samples with the exact value as a rational and a float view.
pub fn grid_csv(g: &CovariogramGrid) -> String {
    let mut s = String::from("vx,vy,g_exact,g\n");
    for sample in &g.samples {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt17(rational_f64(sample.v[0])),
            fmt17(rational_f64(sample.v[1])),
            sample.value,
            fmt17(rational_f64(sample.value))
        );
    }
    s
}

/// One row per coefficient, paired with its empirical weight.
pub fn autocorr_csv(rows: &[(AutocorrCoefficient, f64)]) -> String {
    let mut s = String::from("n1,n2,n3,n4,dx,dy,eta,empirical\n");
    for (c, emp) in rows {
        let d = to_f64_pair(direct_image(c.location));
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            lattice_cols(c.location),
            fmt17(d[0]),
            fmt17(d[1]),
            fmt17(c.approx),
            fmt17(*emp)
        );
    }
    s
}

pub fn peaks_csv(peaks: &PeakList) -> String {
    let mut s = String::from("n1,n2,n3,n4,kx,ky,intensity\n");
    for p in &peaks.peaks {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            lattice_cols(p.module_vector),
            fmt17(p.position[0]),
            fmt17(p.position[1]),
            fmt17(p.intensity)
        );
    }
    s
}

/// Shared autocorrelation counts of a homometric pair.
pub fn certificate_text(r: &HomometricPairReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# shared discrete autocorrelation N(d), one offset per line");
    let _ = writeln!(s, "cells {}", r.left.area());
    let _ = writeln!(s, "congruent {}", r.congruent);
    let _ = writeln!(s, "offsets {}", r.certificate.counts().len());
    for (d, n) in r.certificate.iter() {
        let _ = writeln!(s, "{} {} {}", d[0], d[1], n);
    }
    s
}

/// Write `left.win`, `right.win` and `certificate.txt` into `dir`.
pub fn write_pair_report(dir: &Path, r: &HomometricPairReport) -> Result<()> {
    save(&dir.join("left.win"), &write_window(&r.left))?;
    save(&dir.join("right.win"), &write_window(&r.right))?;
    save(&dir.join("certificate.txt"), &certificate_text(r))
}

/// Fixed-size SVG canvas mapping a square data region to pixels, y up.
struct Canvas {
    body: String,
    center: [f64; 2],
    half: f64,
    size: f64,
}

impl Canvas {
    const SIZE: f64 = 800.0;

    fn new(center: [f64; 2], half: f64) -> Self {
        Canvas {
            body: String::new(),
            center,
            half: half.max(1e-9),
            size: Self::SIZE,
        }
    }

    fn scale(&self) -> f64 {
        self.size / (2.0 * self.half)
    }

    fn px(&self, p: [f64; 2]) -> [f64; 2] {
        let s = self.scale();
        [
            (p[0] - self.center[0] + self.half) * s,
            (self.center[1] + self.half - p[1]) * s,
        ]
    }

    fn circle(&mut self, p: [f64; 2], r: f64, style: &str) {
        let [x, y] = self.px(p);
        let _ = writeln!(self.body, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{r:.3}" {style}/>"#);
    }

    fn line(&mut self, a: [f64; 2], b: [f64; 2], style: &str) {
        let [x1, y1] = self.px(a);
        let [x2, y2] = self.px(b);
        let _ = writeln!(
            self.body,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" {style}/>"#
        );
    }

    fn rect(&mut self, lo: [f64; 2], hi: [f64; 2], style: &str) {
        let [x, y] = self.px([lo[0], hi[1]]);
        let s = self.scale();
        let (w, h) = ((hi[0] - lo[0]) * s, (hi[1] - lo[1]) * s);
        let _ = writeln!(
            self.body,
            r#"<rect x="{x:.3}" y="{y:.3}" width="{w:.3}" height="{h:.3}" {style}/>"#
        );
    }

    fn finish(self, title: &str) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n\
             <title>{title}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            s = self.size
        )
    }
}

/// Heat map of the covariogram with the difference-body boundary drawn on
/// top.
pub fn covariogram_svg(grid: &CovariogramGrid, body: &DifferenceBody) -> String {
    let (lo, hi) = body.bounding_box();
    let half = (hi[0].max(-lo[0]).max(hi[1]).max(-lo[1]) + 1) as f64 + 0.5;
    let mut c = Canvas::new([0.0, 0.0], half);
    let peak = grid
        .samples
        .iter()
        .map(|s| rational_f64(s.value))
        .fold(0.0, f64::max)
        .max(1e-300);
    let step = rational_f64(Rational::new(*grid.step.numer() as i128, *grid.step.denom() as i128));
    for s in &grid.samples {
        let v = rational_f64(s.value) / peak;
        if v <= 0.0 {
            continue;
        }
        let [x, y] = s.v.map(rational_f64);
        // White to dark blue.
        let shade = |full: f64| (255.0 - v * (255.0 - full)).round() as u8;
        let style = format!(r#"fill="rgb({},{},{})""#, shade(20.0), shade(40.0), shade(140.0));
        c.rect([x - step / 2.0, y - step / 2.0], [x + step / 2.0, y + step / 2.0], &style);
    }
    for (a, b) in body.boundary_segments() {
        c.line(a.map(|t| t as f64), b.map(|t| t as f64), r#"stroke="crimson" stroke-width="2""#);
    }
    c.finish("covariogram")
}

fn patch_extent(p: &ModelSetPatch) -> f64 {
    p.radius * 1.05
}

pub fn patch_svg(p: &ModelSetPatch) -> String {
    let mut c = Canvas::new([0.0, 0.0], patch_extent(p));
    let r = (c.scale() * 0.12).clamp(0.6, 6.0);
    for q in &p.points {
        c.circle(q.position(), r, r#"fill="black""#);
    }
    c.finish("model set patch")
}

/// Common points as large dots, points only in `b` as open circles, points
/// only in `a` as small dots.
pub fn difference_svg(a: &ModelSetPatch, b: &ModelSetPatch) -> Result<String> {
    if a.radius != b.radius {
        return Err(Error::InvalidParameter(format!(
            "patch radii differ: {} and {}",
            a.radius, b.radius
        )));
    }
    let in_a = a.lattice_vectors();
    let in_b = b.lattice_vectors();
    let mut c = Canvas::new([0.0, 0.0], patch_extent(a));
    let r = (c.scale() * 0.12).clamp(0.8, 6.0);
    for q in &a.points {
        if in_b.contains(&q.n) {
            c.circle(q.position(), r, r#"fill="black""#);
        } else {
            c.circle(q.position(), r * 0.45, r#"fill="black""#);
        }
    }
    for q in b.points.iter().filter(|q| !in_a.contains(&q.n)) {
        c.circle(q.position(), r, r#"fill="none" stroke="black" stroke-width="0.8""#);
    }
    Ok(c.finish("patch difference"))
}

/// Bragg peaks as disks with area proportional to intensity.
pub fn peaks_svg(peaks: &PeakList) -> String {
    let mut c = Canvas::new([0.0, 0.0], peaks.k_max * 1.05);
    let max_i = peaks.peaks.iter().map(|p| p.intensity).fold(0.0, f64::max).max(1e-300);
    let r_max = c.scale() * 0.12;
    for p in &peaks.peaks {
        c.circle(p.position, r_max * (p.intensity / max_i).sqrt(), r#"fill="black""#);
    }
    c.finish("diffraction")
}

/// Cells of a window at its anchor, for pair reports.
pub fn window_svg(p: &Polyomino) -> String {
    let anchor = p.anchor().map(|a| *a.numer() as f64 / *a.denom() as f64);
    let (lo, hi) = p.bounding_box();
    let center = [
        (lo[0] + hi[0] + 1) as f64 / 2.0 + anchor[0],
        (lo[1] + hi[1] + 1) as f64 / 2.0 + anchor[1],
    ];
    let half = ((hi[0] - lo[0]).max(hi[1] - lo[1]) + 1) as f64 / 2.0 + 0.5;
    let mut c = Canvas::new(center, half);
    for cell in p.cells() {
        let x = cell[0] as f64 + anchor[0];
        let y = cell[1] as f64 + anchor[1];
        c.rect([x, y], [x + 1.0, y + 1.0], r#"fill="lightsteelblue" stroke="black" stroke-width="1""#);
    }
    c.circle([0.0, 0.0], 3.0, r#"fill="crimson""#);
    c.finish("window")
}
