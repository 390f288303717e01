//! Finitely windowed functions on ℤ² and the difference operators
//! `δ_x`, `δ_y` and `D̄ = (1 - i)δ_x + (1 + i)δ_y + δ_xδ_y`.
//!
//! Every operator returns a function on a smaller window: `δ_x` drops the
//! rightmost column, `δ_y` the top row, `D̄` both.

use std::fmt::Write as _;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{gr_string, GaussianRational};

/// Closed integer rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWindow")]
pub struct Window {
    pub x_min: i64,
    pub x_max: i64,
    pub y_min: i64,
    pub y_max: i64,
}

#[derive(Deserialize)]
struct RawWindow {
    x_min: i64,
    x_max: i64,
    y_min: i64,
    y_max: i64,
}

impl TryFrom<RawWindow> for Window {
    type Error = Error;
    fn try_from(r: RawWindow) -> Result<Self> {
        Window::new(r.x_min, r.x_max, r.y_min, r.y_max)
    }
}

impl Window {
    pub fn new(x_min: i64, x_max: i64, y_min: i64, y_max: i64) -> Result<Self> {
        if x_min > x_max || y_min > y_max {
            return Err(Error::DegenerateWindow(format!(
                "[{x_min}, {x_max}] x [{y_min}, {y_max}] is empty"
            )));
        }
        Ok(Self { x_min, x_max, y_min, y_max })
    }

    /// `[0, width-1] × [0, height-1]`.
    pub fn anchored(width: usize, height: usize) -> Result<Self> {
        Self::new(0, width as i64 - 1, 0, height as i64 - 1)
    }

    pub fn width(&self) -> usize {
        (self.x_max - self.x_min + 1) as usize
    }

    pub fn height(&self) -> usize {
        (self.y_max - self.y_min + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        (self.x_min..=self.x_max).contains(&x) && (self.y_min..=self.y_max).contains(&y)
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        self.contains(other.x_min, other.y_min) && self.contains(other.x_max, other.y_max)
    }

    /// Row-major position of `(x, y)`: rows run over `y`, columns over `x`.
    pub fn index(&self, x: i64, y: i64) -> Option<usize> {
        self.contains(x, y)
            .then(|| ((y - self.y_min) as usize) * self.width() + (x - self.x_min) as usize)
    }

    /// Points in storage order (`y` outer, `x` inner).
    pub fn points(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.y_min..=self.y_max).flat_map(move |y| (self.x_min..=self.x_max).map(move |x| (x, y)))
    }

    pub fn intersect(&self, other: &Window) -> Result<Window> {
        Window::new(
            self.x_min.max(other.x_min),
            self.x_max.min(other.x_max),
            self.y_min.max(other.y_min),
            self.y_max.min(other.y_max),
        )
    }

    fn without_last_column(&self) -> Result<Window> {
        if self.width() < 2 {
            return Err(Error::DegenerateWindow("width 1 leaves nothing after δ_x".into()));
        }
        Ok(Window { x_max: self.x_max - 1, ..*self })
    }

    fn without_top_row(&self) -> Result<Window> {
        if self.height() < 2 {
            return Err(Error::DegenerateWindow("height 1 leaves nothing after δ_y".into()));
        }
        Ok(Window { y_max: self.y_max - 1, ..*self })
    }
}

/// `XMIN:XMAX,YMIN:YMAX`, the same syntax [`FromStr`](std::str::FromStr) accepts.
impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{},{}:{}", self.x_min, self.x_max, self.y_min, self.y_max)
    }
}

impl std::str::FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("window {s:?} is not of the form XMIN:XMAX,YMIN:YMAX"));
        let (xs, ys) = s.trim().split_once(',').ok_or_else(bad)?;
        let range = |r: &str| -> Result<(i64, i64)> {
            let (a, b) = r.split_once(':').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        };
        let ((x0, x1), (y0, y1)) = (range(xs)?, range(ys)?);
        Window::new(x0, x1, y0, y1)
    }
}

/// A function on a [`Window`] with exact values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLattice")]
pub struct LatticeFunction {
    window: Window,
    #[serde(with = "gr_string::vec")]
    values: Vec<GaussianRational>,
}

#[derive(Deserialize)]
struct RawLattice {
    window: Window,
    values: Vec<GaussianRational>,
}

impl TryFrom<RawLattice> for LatticeFunction {
    type Error = Error;
    fn try_from(r: RawLattice) -> Result<Self> {
        LatticeFunction::new(r.window, r.values)
    }
}

/// Outcome of a discrete-analyticity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyticityReport {
    pub analytic: bool,
    /// First point, in storage order, where `D̄f ≠ 0`, with the residual there.
    pub witness: Option<(i64, i64, GaussianRational)>,
}

impl LatticeFunction {
    pub fn new(window: Window, values: Vec<GaussianRational>) -> Result<Self> {
        if values.len() != window.len() {
            return Err(Error::ShapeMismatch { expected: window.len(), found: values.len() });
        }
        Ok(Self { window, values })
    }

    pub fn from_fn(window: Window, mut f: impl FnMut(i64, i64) -> GaussianRational) -> Self {
        let values = window.points().map(|(x, y)| f(x, y)).collect();
        Self { window, values }
    }

    pub fn constant(window: Window, c: GaussianRational) -> Self {
        Self { window, values: vec![c; window.len()] }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn values(&self) -> &[GaussianRational] {
        &self.values
    }

    pub fn get(&self, x: i64, y: i64) -> Result<&GaussianRational> {
        self.window
            .index(x, y)
            .map(|k| &self.values[k])
            .ok_or(Error::OutOfWindow { x, y })
    }

    /// In-window access for internal loops whose bounds are already checked.
    fn at(&self, x: i64, y: i64) -> &GaussianRational {
        &self.values[self.window.index(x, y).expect("point inside window")]
    }

    pub fn restrict(&self, w: &Window) -> Result<Self> {
        if !self.window.contains_window(w) {
            return Err(Error::DegenerateWindow(format!(
                "{w:?} is not contained in {:?}",
                self.window
            )));
        }
        Ok(Self::from_fn(*w, |x, y| self.at(x, y).clone()))
    }

    pub fn map(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Self {
        Self { window: self.window, values: self.values.iter().map(f).collect() }
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        self.map(|v| v * k)
    }

    /// Pointwise combination on the intersection of both windows.
    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational,
    ) -> Result<Self> {
        let w = self.window.intersect(&other.window)?;
        Ok(Self::from_fn(w, |x, y| f(self.at(x, y), other.at(x, y))))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// `(δ_x f)(x, y) = f(x+1, y) - f(x, y)`.
    pub fn delta_x(&self) -> Result<Self> {
        let w = self.window.without_last_column()?;
        Ok(Self::from_fn(w, |x, y| self.at(x + 1, y) - self.at(x, y)))
    }

    /// `(δ_y f)(x, y) = f(x, y+1) - f(x, y)`.
    pub fn delta_y(&self) -> Result<Self> {
        let w = self.window.without_top_row()?;
        Ok(Self::from_fn(w, |x, y| self.at(x, y + 1) - self.at(x, y)))
    }

    /// `D̄f`, expanded as `f(x+1,y+1) - i f(x+1,y) + i f(x,y+1) - f(x,y)`.
    pub fn dbar(&self) -> Result<Self> {
        let w = self.window.without_last_column()?.without_top_row()?;
        let i = GaussianRational::i();
        Ok(Self::from_fn(w, |x, y| {
            let cross = self.at(x, y + 1) - self.at(x + 1, y);
            &(self.at(x + 1, y + 1) - self.at(x, y)) + &(&i * &cross)
        }))
    }

    /// `D̄f` assembled literally from the operators `δ_x`, `δ_y`, `δ_xδ_y`.
    pub fn dbar_from_differences(&self) -> Result<Self> {
        let dx = self.delta_x()?;
        let dy = self.delta_y()?;
        let dxy = dy.delta_x()?;
        let a = GaussianRational::from_integers(1, -1);
        let b = GaussianRational::from_integers(1, 1);
        dx.scale(&a).add(&dy.scale(&b))?.add(&dxy)
    }

    /// The defining difference-quotient relation, as a residual per point:
    /// `(f(x+1,y+1) - f(x,y)) / (1+i) - (f(x+1,y) - f(x,y+1)) / (1-i)`.
    pub fn quotient_form_residual(&self) -> Result<Self> {
        let w = self.window.without_last_column()?.without_top_row()?;
        let inv_1pi = GaussianRational::from_integers(1, 1).inv()?;
        let inv_1mi = GaussianRational::from_integers(1, -1).inv()?;
        Ok(Self::from_fn(w, |x, y| {
            let diag = self.at(x + 1, y + 1) - self.at(x, y);
            let anti = self.at(x + 1, y) - self.at(x, y + 1);
            &(&diag * &inv_1pi) - &(&anti * &inv_1mi)
        }))
    }

    pub fn is_discrete_analytic(&self) -> Result<AnalyticityReport> {
        let d = self.dbar()?;
        let witness = d
            .window
            .points()
            .zip(d.values.iter())
            .find(|(_, v)| !v.is_zero())
            .map(|((x, y), v)| (x, y, v.clone()));
        Ok(AnalyticityReport { analytic: witness.is_none(), witness })
    }

    /// CSV with header `x,y,re,im`; exact rationals unless `float` is set.
    pub fn to_csv(&self, float: bool) -> String {
        let mut out = String::from("x,y,re,im\n");
        for ((x, y), v) in self.window.points().zip(&self.values) {
            let (re, im) = format_parts(v, float);
            let _ = writeln!(out, "{x},{y},{re},{im}");
        }
        out
    }
}

/// Real and imaginary parts as `p/q` strings, or as floats.
pub fn format_parts(v: &GaussianRational, float: bool) -> (String, String) {
    if float {
        let c = v.to_complex64();
        (format!("{:e}", c.re), format!("{:e}", c.im))
    } else {
        (
            format!("{}/{}", v.re().numer(), v.re().denom()),
            format!("{}/{}", v.im().numer(), v.im().denom()),
        )
    }
}
