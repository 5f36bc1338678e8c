//! Rasterization of the twin dragon and its line intersections into
//! plain portable pixmaps with deterministic bytes.

use crate::buchi::BuchiAutomaton;
use crate::cns::Rational;
use crate::geometry::{full_k_automaton, tail_bound};
use crate::line::{build_line_automaton, LineParams};
use crate::{Error, Result};

pub const MAX_RENDER_DEPTH: usize = 14;

/// Rational bounding box of the rendered region. Must contain K's
/// bounding box x ∈ [−13/15, 7/15], y ∈ [−14/15, 11/15].
#[derive(Clone, Copy, Debug)]
pub struct Viewport {
    pub x_min: Rational,
    pub x_max: Rational,
    pub y_min: Rational,
    pub y_max: Rational,
}

impl Viewport {
    pub fn new(x_min: Rational, x_max: Rational, y_min: Rational, y_max: Rational) -> Result<Self> {
        if x_min >= x_max || y_min >= y_max {
            return Err(Error::InvalidArgument("viewport degenerate".into()));
        }
        let checks = [
            (x_min <= Rational::new(-13, 15)?, "x_min"),
            (x_max >= Rational::new(7, 15)?, "x_max"),
            (y_min <= Rational::new(-14, 15)?, "y_min"),
            (y_max >= Rational::new(11, 15)?, "y_max"),
        ];
        for (ok, which) in checks {
            if !ok {
                return Err(Error::InvalidArgument(format!(
                    "viewport {which} does not cover the dragon's bounding box"
                )));
            }
        }
        Ok(Viewport {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    pub fn default_view() -> Self {
        Viewport {
            x_min: Rational::new(-1, 1).unwrap(),
            x_max: Rational::new(3, 5).unwrap(),
            y_min: Rational::new(-1, 1).unwrap(),
            y_max: Rational::new(4, 5).unwrap(),
        }
    }
}

/// Occupancy grid: 0 = background, 1 = K, 2+i = i-th line overlay.
#[derive(Clone, Debug)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub viewport: Viewport,
    cells: Vec<u8>,
}

impl Raster {
    fn new(width: usize, height: usize, viewport: Viewport) -> Result<Self> {
        if width == 0 || height == 0 || width > 8192 || height > 8192 {
            return Err(Error::InvalidArgument(format!(
                "unsupported raster size {width}x{height}"
            )));
        }
        Ok(Raster {
            width,
            height,
            viewport,
            cells: vec![0; width * height],
        })
    }

    fn bounds_f64(&self) -> (f64, f64, f64, f64) {
        (
            self.viewport.x_min.to_f64(),
            self.viewport.x_max.to_f64(),
            self.viewport.y_min.to_f64(),
            self.viewport.y_max.to_f64(),
        )
    }

    /// Pixel column/row of a point, or None when outside the viewport.
    fn pixel_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let (x0, x1, y0, y1) = self.bounds_f64();
        if x < x0 || x >= x1 || y <= y0 || y > y1 {
            return None;
        }
        let col = ((x - x0) / (x1 - x0) * self.width as f64) as usize;
        let row = ((y1 - y) / (y1 - y0) * self.height as f64) as usize;
        Some((col.min(self.width - 1), row.min(self.height - 1)))
    }

    /// Axis-aligned rectangle of a pixel in plane coordinates.
    fn pixel_rect(&self, col: usize, row: usize) -> (f64, f64, f64, f64) {
        let (x0, x1, y0, y1) = self.bounds_f64();
        let pw = (x1 - x0) / self.width as f64;
        let ph = (y1 - y0) / self.height as f64;
        let left = x0 + col as f64 * pw;
        let top = y1 - row as f64 * ph;
        (left, left + pw, top - ph, top)
    }

    fn mark(&mut self, x: f64, y: f64, value: u8) {
        if let Some((col, row)) = self.pixel_of(x, y) {
            self.cells[row * self.width + col] = value;
        }
    }

    pub fn occupied_cells(&self) -> usize {
        self.cells.iter().filter(|&&c| c != 0).count()
    }

    pub fn cell(&self, col: usize, row: usize) -> u8 {
        self.cells[row * self.width + col]
    }

    /// Plain PPM (P3) serialization; byte-identical for equal inputs.
    pub fn to_ppm(&self) -> String {
        const PALETTE: [(u8, u8, u8); 6] = [
            (255, 255, 255),
            (60, 60, 60),
            (220, 40, 40),
            (40, 80, 220),
            (30, 160, 70),
            (210, 140, 20),
        ];
        let mut out = String::with_capacity(self.cells.len() * 12 + 32);
        out.push_str(&format!("P3\n{} {}\n255\n", self.width, self.height));
        for row in self.cells.chunks(self.width) {
            let mut line = String::new();
            for (i, &c) in row.iter().enumerate() {
                let (r, g, b) = PALETTE[(c as usize).min(PALETTE.len() - 1)];
                if i > 0 {
                    line.push(' ');
                }
                line.push_str(&format!("{r} {g} {b}"));
            }
            line.push('\n');
            out.push_str(&line);
        }
        out
    }
}

/// Marks every depth-n prefix point of the automaton, pruning subtrees
/// whose remaining-tail disk already fits inside a single pixel (or
/// lies entirely outside the viewport). The occupied cells equal those
/// of the unpruned enumeration exactly.
fn plot_automaton(raster: &mut Raster, a: &BuchiAutomaton, depth: usize, value: u8) {
    let digits: Vec<(f64, f64)> = (0..a.alphabet().len())
        .map(|l| {
            let d = a.alphabet().digit(l);
            (d.re as f64, d.im as f64)
        })
        .collect();
    let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); a.state_count()];
    for (s, l, d) in a.edges() {
        out[s].push((l, d));
    }
    struct Ctx<'a> {
        raster: &'a mut Raster,
        out: Vec<Vec<(usize, usize)>>,
        digits: Vec<(f64, f64)>,
        value: u8,
    }
    fn rec(ctx: &mut Ctx, state: usize, x: f64, y: f64, consumed: usize, depth: usize) {
        let tail = tail_bound(consumed);
        let (x0, x1, y0, y1) = ctx.raster.bounds_f64();
        if x + tail < x0 || x - tail > x1 || y + tail < y0 || y - tail > y1 {
            return;
        }
        if consumed == depth {
            ctx.raster.mark(x, y, ctx.value);
            return;
        }
        if let Some((col, row)) = ctx.raster.pixel_of(x, y) {
            let (l, r, b, t) = ctx.raster.pixel_rect(col, row);
            if x - tail >= l && x + tail < r && y - tail > b && y + tail <= t {
                ctx.raster.mark(x, y, ctx.value);
                return;
            }
        }
        let scale = (-0.25f64).powi(consumed as i32 + 1);
        for i in 0..ctx.out[state].len() {
            let (letter, dst) = ctx.out[state][i];
            let (dre, dim) = ctx.digits[letter];
            rec(ctx, dst, x + dre * scale, y + dim * scale, consumed + 1, depth);
        }
    }
    let initial: Vec<usize> = a.initial().collect();
    let mut ctx = Ctx {
        raster,
        out,
        digits,
        value,
    };
    for s0 in initial {
        rec(&mut ctx, s0, 0.0, 0.0, 0, depth);
    }
}

/// Renders K at the given depth with the line intersections overlaid
/// in distinct colors (in argument order, later lines on top).
pub fn render(
    depth: usize,
    lines: &[LineParams],
    viewport: Viewport,
    width: usize,
    height: usize,
) -> Result<Raster> {
    if depth > MAX_RENDER_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "depth {depth} exceeds the maximum of {MAX_RENDER_DEPTH}"
        )));
    }
    let mut raster = Raster::new(width, height, viewport)?;
    plot_automaton(&mut raster, &full_k_automaton(), depth, 1);
    for (i, l) in lines.iter().enumerate() {
        let aut = build_line_automaton(l)?;
        plot_automaton(&mut raster, &aut, depth, 2 + (i % 250) as u8);
    }
    Ok(raster)
}
