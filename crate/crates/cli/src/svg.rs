//! Self-contained SVG region map with the analytic boundary curves.

use std::fmt::Write;

use crate::records::ScanRecord;

pub const SUBNORMAL_FILL: &str = "#4c78a8";
pub const NOT_SUBNORMAL_FILL: &str = "#f58518";

/// Parameter points marked on every map.
pub const REFERENCE_POINTS: [(f64, f64); 6] =
    [(1.0, 1.0), (15.0, 10.0), (1.5, 25.0), (6.0, 6.0), (8.0, 12.0), (2.0, 2.0)];

/// A plot window `[x0, x1] x [y0, y1]` in parameter coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    fn contains(&self, (x, y): (f64, f64)) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }
}

/// A boundary curve as polyline pieces lying inside the window.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: &'static str,
    pub segments: Vec<Vec<(f64, f64)>>,
}

/// `3(x + y) = x y`
pub fn three_sum_curve(x: f64) -> Option<f64> {
    (x > 3.0).then(|| 3.0 * x / (x - 3.0))
}

/// `x + y = x y`
pub fn sum_product_curve(x: f64) -> Option<f64> {
    (x > 1.0).then(|| x / (x - 1.0))
}

/// The two branches of `(3(x + y) - x y)^2 = 24 x y`, defined for `x >= 1`.
pub fn discriminant_curves(x: f64) -> (Option<f64>, Option<f64>) {
    if x < 1.0 {
        return (None, None);
    }
    let r = 2.0 * (2.0 * (x - 1.0)).sqrt();
    let lower = 3.0 * x / (1.0 + x + r);
    let upper = (x != 3.0).then(|| 3.0 * x * (1.0 + x + r) / ((3.0 - x) * (3.0 - x)));
    (Some(lower), upper)
}

fn sample<F: Fn(f64) -> Option<f64>>(label: &'static str, f: F, window: &Window, samples: usize) -> Curve {
    let point = |x: f64| f(x).map(|y| (x, y)).filter(|p| window.contains(*p));
    let (w, h) = (window.x1 - window.x0, window.y1 - window.y0);
    // bisect until consecutive points are close in normalized plot units
    let max_gap = 1.0 / samples as f64;
    let mut segments = Vec::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    let xs: Vec<f64> = (0..=samples).map(|i| window.x0 + w * i as f64 / samples as f64).collect();
    for pair in xs.windows(2) {
        let mut stack = vec![(pair[0], pair[1], 0u32)];
        while let Some((a, b, depth)) = stack.pop() {
            let (pa, pb) = (point(a), point(b));
            let far = match (pa, pb) {
                (Some(p), Some(q)) => ((q.0 - p.0) / w).hypot((q.1 - p.1) / h) > max_gap,
                (None, None) => false,
                _ => true,
            };
            if far && depth < 24 {
                let mid = 0.5 * (a + b);
                stack.push((mid, b, depth + 1));
                stack.push((a, mid, depth + 1));
                continue;
            }
            for p in [pa, pb] {
                match p {
                    Some(p) if current.last() != Some(&p) => current.push(p),
                    Some(_) => {}
                    None if !current.is_empty() => segments.push(std::mem::take(&mut current)),
                    None => {}
                }
            }
        }
    }
    if !current.is_empty() {
        segments.push(current);
    }
    segments.retain(|s| s.len() > 1);
    Curve { label, segments }
}

pub fn boundary_curves(window: &Window, samples: usize) -> Vec<Curve> {
    vec![
        sample("3s=p", three_sum_curve, window, samples),
        sample("s=p", sum_product_curve, window, samples),
        sample("disc=0 lower", |x| discriminant_curves(x).0, window, samples),
        sample("disc=0 upper", |x| discriminant_curves(x).1, window, samples),
    ]
}

fn segment_intersection(p: (f64, f64), q: (f64, f64), r: (f64, f64), s: (f64, f64)) -> Option<(f64, f64)> {
    let d = (q.0 - p.0) * (s.1 - r.1) - (q.1 - p.1) * (s.0 - r.0);
    if d == 0.0 {
        return None;
    }
    let u = ((r.0 - p.0) * (s.1 - r.1) - (r.1 - p.1) * (s.0 - r.0)) / d;
    let v = ((r.0 - p.0) * (q.1 - p.1) - (r.1 - p.1) * (q.0 - p.0)) / d;
    ((0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v)).then_some((p.0 + u * (q.0 - p.0), p.1 + u * (q.1 - p.1)))
}

/// All crossings between two polylines.
pub fn intersections(a: &Curve, b: &Curve) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for sa in &a.segments {
        for sb in &b.segments {
            for pa in sa.windows(2) {
                for pb in sb.windows(2) {
                    if let Some(x) = segment_intersection(pa[0], pa[1], pb[0], pb[1]) {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

/// A horizontal run of same-verdict cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRun {
    pub y: f64,
    pub x_start: f64,
    pub x_end: f64,
    pub subnormal: bool,
}

/// Merges each row of the scan into runs. Records must be sorted by
/// `(s1, s2)`; cells are centred on grid points.
pub fn cell_runs(records: &[ScanRecord], step_x: f64) -> Vec<CellRun> {
    let mut rows: Vec<(f64, Vec<(f64, bool)>)> = Vec::new();
    for r in records {
        let (x, y) = (parse(&r.s1), parse(&r.s2));
        match rows.iter_mut().find(|(ry, _)| *ry == y) {
            Some((_, row)) => row.push((x, r.subnormal)),
            None => rows.push((y, vec![(x, r.subnormal)])),
        }
    }
    let mut runs = Vec::new();
    for (y, mut row) in rows {
        row.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut iter = row.into_iter();
        let Some((x, s)) = iter.next() else { continue };
        let mut run = CellRun { y, x_start: x - step_x / 2.0, x_end: x + step_x / 2.0, subnormal: s };
        for (x, s) in iter {
            if s == run.subnormal {
                run.x_end = x + step_x / 2.0;
            } else {
                runs.push(run.clone());
                run = CellRun { y, x_start: x - step_x / 2.0, x_end: x + step_x / 2.0, subnormal: s };
            }
        }
        runs.push(run);
    }
    runs
}

fn parse(text: &str) -> f64 {
    match text.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap_or(f64::NAN) / d.parse::<f64>().unwrap_or(f64::NAN),
        None => text.parse().unwrap_or(f64::NAN),
    }
}

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// Maps parameter coordinates to SVG pixels and back.
#[derive(Debug, Clone, Copy)]
pub struct Canvas {
    pub window: Window,
}

impl Canvas {
    pub fn to_px(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let w = &self.window;
        (MARGIN + (x - w.x0) / (w.x1 - w.x0) * SIZE, MARGIN + (w.y1 - y) / (w.y1 - w.y0) * SIZE)
    }

    pub fn from_px(&self, (px, py): (f64, f64)) -> (f64, f64) {
        let w = &self.window;
        (w.x0 + (px - MARGIN) / SIZE * (w.x1 - w.x0), w.y1 - (py - MARGIN) / SIZE * (w.y1 - w.y0))
    }
}

fn attr<'a>(element: &'a str, name: &str) -> Option<&'a str> {
    let start = element.find(&format!(" {name}=\""))? + name.len() + 3;
    let len = element[start..].find('"')?;
    Some(&element[start..start + len])
}

/// Reads the boundary polylines back out of a rendered map, in parameter
/// coordinates, one segment per `<polyline>`.
pub fn curves_from_svg(text: &str, canvas: &Canvas) -> Vec<(String, Vec<(f64, f64)>)> {
    text.lines()
        .filter(|l| l.trim_start().starts_with("<polyline"))
        .filter_map(|l| {
            let label = attr(l, "data-curve")?.to_string();
            let pts = attr(l, "points")?
                .split_whitespace()
                .filter_map(|p| {
                    let (x, y) = p.split_once(',')?;
                    Some(canvas.from_px((x.parse().ok()?, y.parse().ok()?)))
                })
                .collect();
            Some((label, pts))
        })
        .collect()
}

pub fn render(records: &[ScanRecord], window: &Window, step_x: f64, step_y: f64) -> String {
    let canvas = Canvas { window: *window };
    let total = SIZE + 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
    );
    let _ = writeln!(out, r#"<rect width="{total}" height="{total}" fill="white"/>"#);
    let _ = writeln!(out, r#"<g id="cells" shape-rendering="crispEdges">"#);
    for run in cell_runs(records, step_x) {
        let fill = if run.subnormal { SUBNORMAL_FILL } else { NOT_SUBNORMAL_FILL };
        let (x0, y0) = canvas.to_px((run.x_start, run.y + step_y / 2.0));
        let (x1, y1) = canvas.to_px((run.x_end, run.y - step_y / 2.0));
        let _ = writeln!(
            out,
            r#"<rect x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}" fill="{fill}"/>"#,
            x1 - x0,
            y1 - y0
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g id="curves" fill="none" stroke="black" stroke-width="1.5">"#);
    for curve in boundary_curves(window, 1000) {
        for seg in &curve.segments {
            let pts: Vec<String> = seg
                .iter()
                .map(|&p| {
                    let (px, py) = canvas.to_px(p);
                    format!("{px:.3},{py:.3}")
                })
                .collect();
            let _ = writeln!(out, r#"<polyline data-curve="{}" points="{}"/>"#, curve.label, pts.join(" "));
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g id="points" font-family="sans-serif" font-size="11">"#);
    for (x, y) in REFERENCE_POINTS.into_iter().filter(|p| window.contains(*p)) {
        let (px, py) = canvas.to_px((x, y));
        let _ = writeln!(out, r#"<circle cx="{px:.3}" cy="{py:.3}" r="4" fill="white" stroke="black"/>"#);
        let _ = writeln!(out, r#"<text x="{:.3}" y="{:.3}">({x}, {y})</text>"#, px + 7.0, py - 7.0);
    }
    let _ = writeln!(out, "</g>");
    let mid = MARGIN + SIZE / 2.0;
    let _ = writeln!(
        out,
        r#"<text x="{mid}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">s1</text>"#,
        total - 10.0
    );
    let _ = writeln!(
        out,
        r#"<text x="12" y="{mid}" font-family="sans-serif" font-size="12" transform="rotate(-90 12 {mid})">s2</text>"#
    );
    out.push_str("</svg>\n");
    out
}
