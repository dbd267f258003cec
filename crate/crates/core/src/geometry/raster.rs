//! Point sets to pixels. Binary PPM (P6) is byte-exact; SVG draws one square
//! per marked pixel.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::bounds::SolverBounds;
use crate::error::{Error, Result};
use crate::subset::Subset;
use crate::value::{Rat, Value};

/// Plane rectangle shown on the canvas, `x0 < x1`, `y0 < y1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Viewport {
    pub x0: Rat,
    pub y0: Rat,
    pub x1: Rat,
    pub y1: Rat,
}

impl Viewport {
    pub fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Viewport {
        let r = Rat::from_integer;
        Viewport { x0: r(x0), y0: r(y0), x1: r(x1), y1: r(y1) }
    }

    /// The integer window of the bounds, in both axes.
    pub fn of_window(b: &SolverBounds) -> Viewport {
        Viewport::new(b.int_min, b.int_min, b.int_max, b.int_max)
    }

    pub fn parse(s: &str) -> Result<Viewport> {
        let parts: Vec<i64> = s
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("viewport {s:?} is not x0,y0,x1,y1")))?;
        match parts[..] {
            [x0, y0, x1, y1] => Ok(Viewport::new(x0, y0, x1, y1)),
            _ => Err(Error::Parse(format!("viewport {s:?} is not x0,y0,x1,y1"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Style {
    pub fg: [u8; 3],
    pub bg: [u8; 3],
}

impl Default for Style {
    fn default() -> Self {
        Style { fg: [0, 0, 0], bg: [255, 255, 255] }
    }
}

/// Row-major marks, row 0 at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub marks: Vec<bool>,
}

impl Image {
    pub fn get(&self, col: usize, row: usize) -> bool {
        self.marks[row * self.width + col]
    }

    pub fn count(&self) -> usize {
        self.marks.iter().filter(|&&m| m).count()
    }

    pub fn to_ppm(&self, style: &Style) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        for &m in &self.marks {
            out.extend_from_slice(if m { &style.fg } else { &style.bg });
        }
        out
    }

    pub fn to_svg(&self, style: &Style) -> String {
        let hex = |c: [u8; 3]| format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2]);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#,
            w = self.width,
            h = self.height
        );
        let _ = writeln!(s, r#"<rect width="{}" height="{}" fill="{}"/>"#, self.width, self.height, hex(style.bg));
        for row in 0..self.height {
            for col in 0..self.width {
                if self.get(col, row) {
                    let _ = writeln!(s, r#"<rect x="{col}" y="{row}" width="1" height="1" fill="{}"/>"#, hex(style.fg));
                }
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

fn round(r: Rat) -> i64 {
    (r + Rat::new(1, 2)).floor().to_integer()
}

/// Marks the pixel nearest to each point inside the viewport; corners of the
/// viewport land on corner pixels.
pub fn rasterize(s: &Subset, width: usize, height: usize, vp: &Viewport, b: &SolverBounds) -> Result<Image> {
    if width == 0 || height == 0 || vp.x0 >= vp.x1 || vp.y0 >= vp.y1 {
        return Err(Error::DegenerateCanvas(format!("{width}x{height}")));
    }
    let pts: BTreeSet<Value> = s.normalize(b)?.values().cloned().unwrap_or_default();
    let mut img = Image { width, height, marks: vec![false; width * height] };
    let (w, h) = (Rat::from_integer(width as i64 - 1), Rat::from_integer(height as i64 - 1));
    for p in pts {
        let Some([x, y]) = p.as_tuple().map(|t| t.to_vec()).and_then(|t| <[Value; 2]>::try_from(t).ok()) else {
            return Err(Error::Domain(format!("{p} is not a plane point")));
        };
        let (Some(x), Some(y)) = (x.as_rat(), y.as_rat()) else {
            return Err(Error::Domain(format!("{p} is not a plane point")));
        };
        if x < vp.x0 || x > vp.x1 || y < vp.y0 || y > vp.y1 {
            continue;
        }
        let col = round((x - vp.x0) * w / (vp.x1 - vp.x0)) as usize;
        let row = round((vp.y1 - y) * h / (vp.y1 - vp.y0)) as usize;
        img.marks[row * width + col] = true;
    }
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::Universe;

    #[test]
    fn origin_lands_in_the_middle() {
        let b = SolverBounds::default().with_int_window(-5, 5);
        let s = Subset::ext(&Universe::int2(), [Value::int_pair(0, 0)]).unwrap();
        let img = rasterize(&s, 3, 3, &Viewport::of_window(&b), &b).unwrap();
        assert_eq!(img.count(), 1);
        assert!(img.get(1, 1));
    }

    #[test]
    fn empty_set_is_blank() {
        let b = SolverBounds::default();
        let img = rasterize(&Subset::empty(&Universe::int2()), 4, 2, &Viewport::new(0, 0, 3, 1), &b).unwrap();
        assert_eq!(img.count(), 0);
        let ppm = img.to_ppm(&Style::default());
        assert!(ppm.starts_with(b"P6\n4 2\n255\n"));
        assert_eq!(ppm.len(), 11 + 4 * 2 * 3);
        assert!(ppm[11..].iter().all(|&x| x == 255));
    }

    #[test]
    fn degenerate_canvas() {
        let b = SolverBounds::default();
        let s = Subset::empty(&Universe::int2());
        assert!(matches!(rasterize(&s, 0, 3, &Viewport::new(0, 0, 1, 1), &b), Err(Error::DegenerateCanvas(_))));
        assert!(matches!(rasterize(&s, 3, 3, &Viewport::new(1, 0, 1, 1), &b), Err(Error::DegenerateCanvas(_))));
    }
}
