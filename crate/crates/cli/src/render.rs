//! Vector scenes of disks and filled outlines, written as SVG or rasterized
//! to PNG at a requested width.

use std::fmt::Write as _;

use image::{Rgb, RgbImage};

pub type Color = [u8; 3];

#[derive(Debug, Clone)]
pub enum Shape {
    Disk { cx: f64, cy: f64, r: f64 },
    /// Closed polygon; with `complement` the outside is filled instead.
    Region { outline: Vec<(f64, f64)>, complement: bool },
}

#[derive(Debug, Clone)]
pub struct Item {
    pub shape: Shape,
    pub fill: Color,
    pub stroke: Option<Color>,
}

#[derive(Debug, Clone)]
pub struct Scene {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub items: Vec<Item>,
}

/// Well separated colors for small indices.
pub fn palette(i: usize) -> Color {
    const P: [Color; 10] = [
        [230, 159, 0],
        [86, 180, 233],
        [0, 158, 115],
        [240, 228, 66],
        [0, 114, 178],
        [213, 94, 0],
        [204, 121, 167],
        [120, 120, 120],
        [150, 80, 200],
        [90, 200, 120],
    ];
    P[i % P.len()]
}

fn hex(c: Color) -> String {
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

impl Scene {
    /// Empty scene whose window holds all given disks with a 5% margin.
    pub fn around(disks: impl IntoIterator<Item = (f64, f64, f64)>) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (cx, cy, r) in disks {
            if !(cx.is_finite() && cy.is_finite() && r.is_finite()) {
                continue;
            }
            x0 = x0.min(cx - r);
            x1 = x1.max(cx + r);
            y0 = y0.min(cy - r);
            y1 = y1.max(cy + r);
        }
        if !(x0 < x1 && y0 < y1) {
            (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
        }
        let m = 0.05 * (x1 - x0).max(y1 - y0);
        Self {
            xmin: x0 - m,
            xmax: x1 + m,
            ymin: y0 - m,
            ymax: y1 + m,
            items: Vec::new(),
        }
    }

    pub fn height_for(&self, width: usize) -> usize {
        ((width as f64) * (self.ymax - self.ymin) / (self.xmax - self.xmin)).round().max(1.0) as usize
    }

    fn to_px(&self, width: usize, height: usize, x: f64, y: f64) -> (f64, f64) {
        (
            (x - self.xmin) / (self.xmax - self.xmin) * width as f64,
            (self.ymax - y) / (self.ymax - self.ymin) * height as f64,
        )
    }

    pub fn to_svg(&self, width: usize) -> String {
        let height = self.height_for(width);
        let scale = width as f64 / (self.xmax - self.xmin);
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
        );
        let _ = writeln!(s, "<rect width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>");
        for item in &self.items {
            let stroke = match item.stroke {
                Some(c) => format!(" stroke=\"{}\" stroke-width=\"0.5\"", hex(c)),
                None => String::new(),
            };
            match &item.shape {
                Shape::Disk { cx, cy, r } => {
                    let (x, y) = self.to_px(width, height, *cx, *cy);
                    let _ = writeln!(
                        s,
                        "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{:.3}\" fill=\"{}\"{stroke}/>",
                        r * scale,
                        hex(item.fill)
                    );
                }
                Shape::Region { outline, complement } => {
                    let mut d = String::new();
                    if *complement {
                        let _ = write!(d, "M0 0H{width}V{height}H0Z ");
                    }
                    for (i, &(px, py)) in outline.iter().enumerate() {
                        let (x, y) = self.to_px(width, height, px, py);
                        let _ = write!(d, "{}{x:.3} {y:.3}", if i == 0 { "M" } else { "L" });
                    }
                    d.push('Z');
                    let _ = writeln!(s, "<path d=\"{d}\" fill=\"{}\" fill-rule=\"evenodd\"{stroke}/>", hex(item.fill));
                }
            }
        }
        s.push_str("</svg>\n");
        s
    }

    /// Scanline rasterization of the same scene, sampling pixel centers.
    pub fn rasterize(&self, width: usize) -> RgbImage {
        let height = self.height_for(width);
        let mut img = RgbImage::from_pixel(width as u32, height as u32, Rgb([255, 255, 255]));
        let scale = width as f64 / (self.xmax - self.xmin);
        let fill_span = |img: &mut RgbImage, row: usize, a: f64, b: f64, c: Color| {
            let lo = (a - 0.5).ceil().max(0.0) as usize;
            let hi = (b - 0.5).floor().min(width as f64 - 1.0);
            if hi < 0.0 {
                return;
            }
            for col in lo..=hi as usize {
                img.put_pixel(col as u32, row as u32, Rgb(c));
            }
        };
        for item in &self.items {
            match &item.shape {
                Shape::Disk { cx, cy, r } => {
                    let (x, y) = self.to_px(width, height, *cx, *cy);
                    let r = r * scale;
                    let r0 = (y - r - 0.5).ceil().max(0.0) as usize;
                    let r1 = (y + r - 0.5).floor().min(height as f64 - 1.0);
                    if r1 < 0.0 {
                        continue;
                    }
                    for row in r0..=r1 as usize {
                        let dy = row as f64 + 0.5 - y;
                        let h = (r * r - dy * dy).max(0.0).sqrt();
                        fill_span(&mut img, row, x - h, x + h, item.fill);
                    }
                }
                Shape::Region { outline, complement } => {
                    let pts: Vec<(f64, f64)> = outline.iter().map(|&(a, b)| self.to_px(width, height, a, b)).collect();
                    for row in 0..height {
                        let yc = row as f64 + 0.5;
                        let mut xs: Vec<f64> = Vec::new();
                        for i in 0..pts.len() {
                            let (p, q) = (pts[i], pts[(i + 1) % pts.len()]);
                            if (p.1 <= yc) != (q.1 <= yc) {
                                xs.push(p.0 + (yc - p.1) / (q.1 - p.1) * (q.0 - p.0));
                            }
                        }
                        xs.sort_by(f64::total_cmp);
                        if *complement {
                            let mut bounds = vec![f64::NEG_INFINITY];
                            bounds.extend(xs);
                            bounds.push(f64::INFINITY);
                            xs = bounds;
                        }
                        for pair in xs.chunks_exact(2) {
                            fill_span(&mut img, row, pair[0], pair[1], item.fill);
                        }
                    }
                }
            }
        }
        img
    }
}
