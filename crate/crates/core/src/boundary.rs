//! Closed-form trade-off curves, tangent constructions, the four-piece
//! optimal double-violation boundary, and upper-envelope machinery for
//! shared-randomness mixing.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;

use crate::{Error, Result};

/// Upper end of the S1 axis.
pub const S1_MAX: f64 = 2.0 * SQRT_2;

/// Bisection tolerance for tangency searches.
const TANGENT_TOL: f64 = 1e-12;
/// Residual bound for accepted common tangents.
const COMMON_TANGENT_RESIDUAL: f64 = 1e-10;
/// Hard cap on root-finding iterations.
const MAX_ITERS: usize = 200;
/// Allowed continuity gap at piece breakpoints.
const BREAKPOINT_TOL: f64 = 1e-9;

type CurveFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A concave trade-off curve over an S1 interval.
///
/// The analytic subinterval carries the strictly concave expression;
/// left of it the curve extends flat at its left-endpoint value (the
/// trivially achievable trade-off). Tangency searches operate on the
/// analytic subinterval only.
#[derive(Clone)]
pub struct Curve {
    label: String,
    domain: [f64; 2],
    analytic: [f64; 2],
    f: CurveFn,
    df: CurveFn,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("analytic", &self.analytic)
            .finish()
    }
}

fn check_s1_axis(s1: f64) -> Result<()> {
    if s1.is_finite() && (-1e-12..=S1_MAX + 1e-12).contains(&s1) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "s1 = {s1} outside [0, 2*sqrt(2)]"
        )))
    }
}

impl Curve {
    pub fn from_fn(
        label: impl Into<String>,
        domain: [f64; 2],
        analytic: [f64; 2],
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let ok = domain[0].is_finite()
            && analytic[1].is_finite()
            && domain[0] <= analytic[0]
            && analytic[0] < analytic[1]
            && analytic[1] <= domain[1]
            && domain[0] >= -1e-12
            && domain[1] <= S1_MAX + 1e-12;
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "curve intervals {domain:?} / {analytic:?} are not nested in [0, 2*sqrt(2)]"
            )));
        }
        Ok(Self {
            label: label.into(),
            domain,
            analytic,
            f: Arc::new(f),
            df: Arc::new(df),
        })
    }

    /// S2 = (S1 + sqrt(8 - S1^2)) / 2 on [2, 2*sqrt(2)], flat 2 below.
    pub fn case_i() -> Self {
        Self::from_fn(
            "case_i",
            [0.0, S1_MAX],
            [2.0, S1_MAX],
            |x| 0.5 * (x + (8.0 - x * x).max(0.0).sqrt()),
            |x| 0.5 * (1.0 - x / (8.0 - x * x).max(f64::MIN_POSITIVE).sqrt()),
        )
        .expect("static intervals")
    }

    /// S2 = S1 + sqrt(4 - S1^2) / 2 on [4/sqrt(5), 2], flat sqrt(5) below.
    pub fn case_iii() -> Self {
        let lo = 4.0 / 5.0_f64.sqrt();
        Self::from_fn(
            "case_iii",
            [0.0, 2.0],
            [lo, 2.0],
            |x| x + 0.5 * (4.0 - x * x).max(0.0).sqrt(),
            |x| 1.0 - 0.5 * x / (4.0 - x * x).max(f64::MIN_POSITIVE).sqrt(),
        )
        .expect("static intervals")
    }

    /// Relayed-basis trade-off on a partially entangled state; reduces to
    /// [`Curve::case_i`] at ent_angle = pi/4.
    pub fn partial_i(ent_angle: f64) -> Result<Self> {
        if !(ent_angle.is_finite() && ent_angle > 0.0 && ent_angle <= std::f64::consts::FRAC_PI_4)
        {
            return Err(Error::InvalidArgument(format!(
                "ent_angle = {ent_angle} outside (0, pi/4]"
            )));
        }
        let m = (2.0 * ent_angle).sin();
        let c = 1.0 + m * m;
        let hi = 2.0 * c.sqrt();
        Self::from_fn(
            format!("partial_i({ent_angle:.6})"),
            [0.0, hi],
            [2.0 * m, hi],
            move |x| (x + m * (4.0 * c - x * x).max(0.0).sqrt()) / c,
            move |x| (1.0 - m * x / (4.0 * c - x * x).max(f64::MIN_POSITIVE).sqrt()) / c,
        )
    }

    /// Locus S2 = sqrt(8 - S1^2) traced by the trivial-relay strategies
    /// over all entanglement angles.
    pub fn partial_ii_locus() -> Self {
        Self::from_fn(
            "partial_ii_locus",
            [0.0, 2.0],
            [0.0, 2.0],
            |x| (8.0 - x * x).max(0.0).sqrt(),
            |x| -x / (8.0 - x * x).max(f64::MIN_POSITIVE).sqrt(),
        )
        .expect("static intervals")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> [f64; 2] {
        self.domain
    }

    pub fn analytic_domain(&self) -> [f64; 2] {
        self.analytic
    }

    /// Curve value at `s1`, including the flat extension.
    pub fn value(&self, s1: f64) -> Result<f64> {
        check_s1_axis(s1)?;
        if s1 < self.domain[0] - 1e-12 || s1 > self.domain[1] + 1e-12 {
            return Err(Error::OutOfDomain(format!(
                "s1 = {s1} outside the curve domain [{}, {}]",
                self.domain[0], self.domain[1]
            )));
        }
        Ok((self.f)(s1.clamp(self.analytic[0], self.analytic[1])))
    }

    /// Derivative on the analytic subinterval.
    pub fn slope(&self, s1: f64) -> Result<f64> {
        if s1 < self.analytic[0] - 1e-12 || s1 > self.analytic[1] + 1e-12 {
            return Err(Error::OutOfDomain(format!(
                "s1 = {s1} outside the analytic interval [{}, {}]",
                self.analytic[0], self.analytic[1]
            )));
        }
        Ok((self.df)(s1.clamp(self.analytic[0], self.analytic[1])))
    }
}

/// One interval of a piecewise curve.
#[derive(Clone)]
pub struct Piece {
    interval: [f64; 2],
    provenance: String,
    f: CurveFn,
}

impl Piece {
    pub fn new(
        interval: [f64; 2],
        provenance: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            interval,
            provenance: provenance.into(),
            f: Arc::new(f),
        }
    }

    pub fn interval(&self) -> [f64; 2] {
        self.interval
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn value(&self, s1: f64) -> f64 {
        (self.f)(s1)
    }
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Piece")
            .field("interval", &self.interval)
            .field("provenance", &self.provenance)
            .finish()
    }
}

/// Contiguous concave pieces; continuous at breakpoints within 1e-9.
#[derive(Clone, Debug)]
pub struct PiecewiseCurve {
    pieces: Vec<Piece>,
}

impl PiecewiseCurve {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidArgument("piecewise curve needs pieces".into()));
        }
        for piece in &pieces {
            let [lo, hi] = piece.interval;
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidArgument(format!(
                    "bad piece interval [{lo}, {hi}]"
                )));
            }
        }
        for pair in pieces.windows(2) {
            let gap = (pair[1].interval[0] - pair[0].interval[1]).abs();
            if gap > BREAKPOINT_TOL {
                return Err(Error::InvalidArgument(format!(
                    "pieces not contiguous: gap {gap} at {}",
                    pair[0].interval[1]
                )));
            }
            let x = pair[0].interval[1];
            let jump = (pair[0].value(x) - pair[1].value(pair[1].interval[0])).abs();
            if jump > BREAKPOINT_TOL {
                return Err(Error::InvalidArgument(format!(
                    "discontinuity {jump} at breakpoint {x}"
                )));
            }
        }
        Ok(Self { pieces })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn span(&self) -> [f64; 2] {
        [
            self.pieces[0].interval[0],
            self.pieces[self.pieces.len() - 1].interval[1],
        ]
    }

    /// Interior breakpoints, ascending.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.pieces[..self.pieces.len() - 1]
            .iter()
            .map(|p| p.interval[1])
            .collect()
    }

    fn piece_at(&self, s1: f64) -> Result<&Piece> {
        check_s1_axis(s1)?;
        let [lo, hi] = self.span();
        if s1 < lo - 1e-12 || s1 > hi + 1e-12 {
            return Err(Error::OutOfDomain(format!(
                "s1 = {s1} outside the covered interval [{lo}, {hi}]"
            )));
        }
        let idx = self
            .pieces
            .partition_point(|p| p.interval[1] < s1)
            .min(self.pieces.len() - 1);
        Ok(&self.pieces[idx])
    }

    pub fn value(&self, s1: f64) -> Result<f64> {
        let piece = self.piece_at(s1)?;
        let [lo, hi] = piece.interval;
        Ok(piece.value(s1.clamp(lo, hi)))
    }

    pub fn provenance_at(&self, s1: f64) -> Result<&str> {
        Ok(self.piece_at(s1)?.provenance())
    }

    /// CSV rows `s1,s2,provenance`, 12 decimals, s1 ascending.
    pub fn to_csv(&self, samples: usize) -> Result<String> {
        if samples < 2 {
            return Err(Error::InvalidArgument("need at least 2 samples".into()));
        }
        let [lo, hi] = self.span();
        let mut out = String::from("s1,s2,provenance\n");
        for k in 0..samples {
            let x = if hi > lo {
                lo + (hi - lo) * k as f64 / (samples - 1) as f64
            } else {
                lo
            };
            let y = self.value(x)?;
            let label = self.provenance_at(x)?;
            writeln!(out, "{x:.12},{y:.12},{label}").expect("string write");
        }
        Ok(out)
    }
}

/// The four-piece boundary of the double-violation region reachable from
/// the maximally entangled state: a tangent from (0, 2*sqrt(2)) to the
/// case (iii) curve, the curve itself, the common tangent to case (i),
/// and the case (i) curve.
pub fn optimal_boundary() -> PiecewiseCurve {
    let b1 = (7.0 / 2.0_f64).sqrt();
    let b2 = 3.0 * (2.0 / 5.0_f64).sqrt();
    let b3 = 4.0 * (2.0 / 5.0_f64).sqrt();
    PiecewiseCurve::new(vec![
        Piece::new([0.0, b1], "mix(point,case_iii)", |x| {
            (1.0 - 7.0_f64.sqrt() / 2.0) * x + 2.0 * SQRT_2
        }),
        Piece::new([b1, b2], "case_iii", |x| {
            x + 0.5 * (4.0 - x * x).max(0.0).sqrt()
        }),
        Piece::new([b2, b3], "mix(case_iii,case_i)", |x| 10.0_f64.sqrt() - 0.5 * x),
        Piece::new([b3, S1_MAX], "case_i", |x| {
            0.5 * (x + (8.0 - x * x).max(0.0).sqrt())
        }),
    ])
    .expect("boundary pieces are contiguous and continuous")
}

/// Which closed-form curve to evaluate.
#[derive(Clone, Copy, Debug)]
pub enum CurveKind {
    CaseI,
    CaseIii,
    OptimalBoundary,
    PartialI { ent_angle: f64 },
    PartialIiLocus,
}

pub fn curve_value(which: CurveKind, s1: f64) -> Result<f64> {
    match which {
        CurveKind::CaseI => Curve::case_i().value(s1),
        CurveKind::CaseIii => Curve::case_iii().value(s1),
        CurveKind::OptimalBoundary => optimal_boundary().value(s1),
        CurveKind::PartialI { ent_angle } => Curve::partial_i(ent_angle)?.value(s1),
        CurveKind::PartialIiLocus => Curve::partial_ii_locus().value(s1),
    }
}

/// A line s2 = slope * s1 + intercept touching a curve at `touch`.
#[derive(Clone, Copy, Debug)]
pub struct Tangent {
    pub slope: f64,
    pub intercept: f64,
    pub touch: f64,
}

impl Tangent {
    pub fn at(&self, s1: f64) -> f64 {
        self.slope * s1 + self.intercept
    }
}

/// Tangent to `curve` through the outside point (px, py).
///
/// The touch point is found by bisection (tolerance 1e-12) on the
/// residual of the tangency condition; if the point admits two tangents
/// the rightmost touch is returned.
pub fn tangent_from_point(px: f64, py: f64, curve: &Curve) -> Result<Tangent> {
    if !(px.is_finite() && py.is_finite()) {
        return Err(Error::InvalidArgument("tangent point must be finite".into()));
    }
    let [lo, hi] = curve.analytic;
    if px >= curve.domain[0] - 1e-12 && px <= curve.domain[1] + 1e-12 {
        let at = curve.value(px)?;
        if py < at - 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "point ({px}, {py}) lies below the curve"
            )));
        }
        if (py - at).abs() <= 1e-12 && px >= lo && px <= hi {
            let slope = curve.slope(px)?;
            if !slope.is_finite() {
                return Err(Error::Numerical(format!(
                    "curve slope diverges at s1 = {px}"
                )));
            }
            return Ok(Tangent {
                slope,
                intercept: py - slope * px,
                touch: px,
            });
        }
    }

    // Tangent line at x, evaluated at px, minus py.
    let residual = |x: f64| (curve.f)(x) + (curve.df)(x) * (px - x) - py;
    let inset = 1e-12 * (hi - lo).max(1.0);
    let (a, b) = (lo + inset, hi - inset);

    // Scan for the rightmost sign change.
    const SCAN: usize = 512;
    let node = |k: usize| a + (b - a) * k as f64 / SCAN as f64;
    let mut bracket = None;
    let mut prev = residual(node(0));
    for k in 1..=SCAN {
        let next = residual(node(k));
        if prev == 0.0 || prev.signum() != next.signum() {
            bracket = Some((node(k - 1), node(k), prev));
        }
        prev = next;
    }
    // No interior sign change: the tangency may sit exactly on an
    // endpoint of the analytic interval, where the residual only grazes
    // zero. Scale by the local residual slope.
    if bracket.is_none() {
        for x in [hi, lo] {
            let scale = 1e-6 * (1.0 + (curve.df)(x).abs()) * (hi - lo).max(1.0);
            if residual(x).abs() <= scale {
                let slope = (curve.df)(x);
                return Ok(Tangent {
                    slope,
                    intercept: py - slope * px,
                    touch: x,
                });
            }
        }
    }
    let (mut xa, mut xb, ra) = match bracket {
        Some(found) => found,
        None => {
            return Err(Error::NotFound(format!(
                "no tangent from ({px}, {py}) touches the curve"
            )));
        }
    };
    let mut ra = ra;
    for _ in 0..MAX_ITERS {
        if xb - xa <= TANGENT_TOL {
            break;
        }
        let mid = 0.5 * (xa + xb);
        let rm = residual(mid);
        if rm == 0.0 {
            xa = mid;
            xb = mid;
            break;
        }
        if rm.signum() == ra.signum() {
            xa = mid;
            ra = rm;
        } else {
            xb = mid;
        }
    }
    let mut touch = 0.5 * (xa + xb);

    // Newton polish with a numerical derivative of the residual.
    let h = 1e-7 * (hi - lo).max(1.0);
    for _ in 0..4 {
        let r = residual(touch);
        let dr = (residual((touch + h).min(b)) - residual((touch - h).max(a))) / (2.0 * h);
        if !dr.is_finite() || dr.abs() < 1e-300 {
            break;
        }
        let next = touch - r / dr;
        if next <= a || next >= b || residual(next).abs() >= r.abs() {
            break;
        }
        touch = next;
    }

    let slope = (curve.df)(touch);
    Ok(Tangent {
        slope,
        intercept: py - slope * px,
        touch,
    })
}

/// Inverts the decreasing derivative of a concave curve by bisection,
/// clamping to the analytic interval when the slope is out of range.
fn invert_slope(curve: &Curve, s: f64) -> f64 {
    let [lo, hi] = curve.analytic;
    let inset = 1e-13 * (hi - lo).max(1.0);
    let mut a = lo + inset;
    let mut b = hi - inset;
    if (curve.df)(a) <= s {
        return a;
    }
    if (curve.df)(b) >= s {
        return b;
    }
    for _ in 0..MAX_ITERS {
        if b - a <= 1e-14 * (hi - lo).max(1.0) {
            break;
        }
        let mid = 0.5 * (a + b);
        if (curve.df)(mid) > s {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Common tangent of two concave curves.
#[derive(Clone, Copy, Debug)]
pub struct CommonTangent {
    pub slope: f64,
    pub intercept: f64,
    pub touch_a: f64,
    pub touch_b: f64,
}

impl CommonTangent {
    pub fn at(&self, s1: f64) -> f64 {
        self.slope * s1 + self.intercept
    }
}

/// Line tangent to both curves: slope-matched by construction, the
/// intercept gap driven to zero by bisection over the first curve's
/// touch point, then Newton-polished.
pub fn common_tangent(a: &Curve, b: &Curve) -> Result<CommonTangent> {
    let [alo, ahi] = a.analytic;
    let inset = 1e-12 * (ahi - alo).max(1.0);
    // Intercept difference of the two slope-matched tangent lines.
    let gap = |x1: f64| {
        let s = (a.df)(x1);
        let x2 = invert_slope(b, s);
        ((a.f)(x1) - s * x1) - ((b.f)(x2) - s * x2)
    };
    let (x1_lo, x1_hi) = (alo + inset, ahi - inset);
    let d_lo = gap(x1_lo);
    let d_hi = gap(x1_hi);

    const DEGENERATE: f64 = 1e-11;
    let mut x1 = if d_lo.abs() <= DEGENERATE && d_hi.abs() <= DEGENERATE {
        return Err(Error::NotFound(
            "curves admit no isolated common tangent".into(),
        ));
    } else if d_lo.abs() <= DEGENERATE {
        x1_lo
    } else if d_hi.abs() <= DEGENERATE {
        x1_hi
    } else if d_lo.signum() == d_hi.signum() {
        return Err(Error::NotFound(
            "no common tangent within the analytic intervals".into(),
        ));
    } else {
        let (mut xa, mut xb, mut da) = (x1_lo, x1_hi, d_lo);
        for _ in 0..MAX_ITERS {
            if xb - xa <= TANGENT_TOL {
                break;
            }
            let mid = 0.5 * (xa + xb);
            let dm = gap(mid);
            if dm == 0.0 {
                xa = mid;
                xb = mid;
                break;
            }
            if dm.signum() == da.signum() {
                xa = mid;
                da = dm;
            } else {
                xb = mid;
            }
        }
        0.5 * (xa + xb)
    };

    // Newton polish on the intercept gap.
    let h = 1e-7 * (ahi - alo).max(1.0);
    for _ in 0..4 {
        let g = gap(x1);
        let dg = (gap((x1 + h).min(x1_hi)) - gap((x1 - h).max(x1_lo))) / (2.0 * h);
        if !dg.is_finite() || dg.abs() < 1e-300 {
            break;
        }
        let next = x1 - g / dg;
        if next <= x1_lo || next >= x1_hi || gap(next).abs() >= g.abs() {
            break;
        }
        x1 = next;
    }

    let slope = (a.df)(x1);
    let x2 = invert_slope(b, slope);
    let intercept = (a.f)(x1) - slope * x1;
    let line_residual = ((b.f)(x2) + slope * (x1 - x2)) - (a.f)(x1);
    let slope_residual = slope - (b.df)(x2);
    if line_residual.abs() > COMMON_TANGENT_RESIDUAL
        || slope_residual.abs() > COMMON_TANGENT_RESIDUAL
    {
        return Err(Error::NotFound(format!(
            "common tangent residuals too large: {line_residual:.3e}, {slope_residual:.3e}"
        )));
    }
    Ok(CommonTangent {
        slope,
        intercept,
        touch_a: x1,
        touch_b: x2,
    })
}

/// Upper concave envelope of isolated points and sampled curves, as a
/// piecewise-linear curve built by a monotone-chain hull over `grid`
/// samples per curve.
pub fn upper_envelope(
    points: &[[f64; 2]],
    curves: &[Curve],
    grid: usize,
) -> Result<PiecewiseCurve> {
    if grid < 2 {
        return Err(Error::InvalidArgument("grid must be at least 2".into()));
    }
    if points.is_empty() && curves.is_empty() {
        return Err(Error::InvalidArgument("empty envelope input".into()));
    }
    let mut candidates: Vec<(f64, f64, String)> = Vec::new();
    for p in points {
        check_s1_axis(p[0])?;
        if !p[1].is_finite() {
            return Err(Error::InvalidArgument(format!(
                "point ({}, {}) is not finite",
                p[0], p[1]
            )));
        }
        candidates.push((p[0], p[1], "point".into()));
    }
    for curve in curves {
        let [lo, hi] = curve.domain;
        for k in 0..grid {
            let x = lo + (hi - lo) * k as f64 / (grid - 1) as f64;
            candidates.push((x, curve.value(x)?, curve.label.clone()));
        }
    }
    candidates.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    // Same abscissa: keep only the highest candidate.
    candidates.dedup_by(|next, kept| {
        if (next.0 - kept.0).abs() <= 1e-15 {
            kept.1 = kept.1.max(next.1);
            true
        } else {
            false
        }
    });

    let cross = |o: &(f64, f64, String), a: &(f64, f64, String), b: &(f64, f64, String)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64, String)> = Vec::new();
    for cand in candidates {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &cand) >= 0.0
        {
            hull.pop();
        }
        hull.push(cand);
    }

    if hull.len() == 1 {
        let (x, y, label) = hull.pop().expect("one vertex");
        return PiecewiseCurve::new(vec![Piece::new([x, x], label, move |_| y)]);
    }
    let mut pieces = Vec::with_capacity(hull.len() - 1);
    for pair in hull.windows(2) {
        let (x1, y1, ref l1) = pair[0];
        let (x2, y2, ref l2) = pair[1];
        let slope = if x2 > x1 { (y2 - y1) / (x2 - x1) } else { 0.0 };
        let provenance = if l1 == l2 {
            l1.clone()
        } else {
            format!("mix({l1},{l2})")
        };
        pieces.push(Piece::new([x1, x2], provenance, move |x| {
            y1 + slope * (x - x1)
        }));
    }
    PiecewiseCurve::new(pieces)
}

/// S2 reached by the half-trivial strategy on |psi_ent> whose first CHSH
/// value is pinned to `s1`.
pub fn type_iii_tradeoff(s1: f64, ent_angle: f64) -> Result<f64> {
    if !(ent_angle.is_finite() && ent_angle > 0.0 && ent_angle <= std::f64::consts::FRAC_PI_4)
    {
        return Err(Error::InvalidArgument(format!(
            "ent_angle = {ent_angle} outside (0, pi/4]"
        )));
    }
    if !(s1.is_finite() && (0.0..=2.0).contains(&s1)) {
        return Err(Error::OutOfDomain(format!(
            "s1 = {s1} outside [0, 2] for half-trivial strategies"
        )));
    }
    let m = (2.0 * ent_angle).sin();
    let c = (2.0 * ent_angle).cos();
    let half = 0.5 * s1;
    Ok(m * (1.0 - half * half).max(0.0).sqrt() * (1.0 - 2.0 * c)
        + half * (2.0 * m * m + c))
}

/// Validity window of [`type_iii_optimal_ent_angle`].
pub const TYPE_III_WINDOW: [f64; 2] = [1.8, 2.0];

/// Entanglement angle maximizing [`type_iii_tradeoff`] at fixed `s1`.
///
/// Evaluates the closed-form root of the quartic optimality condition;
/// the intermediate cube root is complex below s1 = 2 and the imaginary
/// parts cancel.
pub fn type_iii_optimal_ent_angle(s1: f64) -> Result<f64> {
    if !(s1.is_finite() && (TYPE_III_WINDOW[0]..=TYPE_III_WINDOW[1]).contains(&s1)) {
        return Err(Error::OutOfDomain(format!(
            "s1 = {s1} outside the validity window [{}, {}]",
            TYPE_III_WINDOW[0], TYPE_III_WINDOW[1]
        )));
    }
    let x2 = s1 * s1;
    let disc = Complex64::new(x2 * x2 + 117.0 * x2 - 484.0, 0.0).sqrt();
    let inner = Complex64::new(8.0 * x2 * x2 - 396.0 * x2 + 1331.0, 0.0)
        + 8.0 * x2 * disc;
    let h = inner.powf(1.0 / 3.0);
    let g = Complex64::new(11.0, 0.0) + h + Complex64::new(121.0 - 24.0 * x2, 0.0) / h;
    if g.im.abs() > 1e-9 * (1.0 + g.re.abs()) {
        return Err(Error::OutOfDomain(format!(
            "complex residue {} in the optimality condition at s1 = {s1}",
            g.im
        )));
    }
    let g = g.re;
    if g <= 0.0 {
        return Err(Error::OutOfDomain(format!("g(s1) = {g} not positive")));
    }
    let root_g = g.sqrt();
    let nested = 33.0 - g + 8.0 * x2 / root_g;
    if nested < 0.0 {
        return Err(Error::OutOfDomain(format!(
            "negative nested radicand {nested} at s1 = {s1}"
        )));
    }
    let arg = 0.25 * (9.0 - root_g + nested.sqrt()).max(0.0).sqrt();
    if !(0.0..=1.0).contains(&arg) {
        return Err(Error::OutOfDomain(format!(
            "arccos argument {arg} outside [0, 1] at s1 = {s1}"
        )));
    }
    let phi = arg.acos();
    if phi <= 0.0 || phi > std::f64::consts::FRAC_PI_4 + 1e-12 {
        return Err(Error::OutOfDomain(format!(
            "optimal angle {phi} is not an entanglement angle"
        )));
    }
    Ok(phi)
}

/// S1 below which the trivial-relay locus sqrt(8 - S1^2) beats the first
/// boundary row, found by bisection; equals 8*sqrt(2)*(7*sqrt(7)-2)/113.
pub fn type_ii_crossover() -> Result<f64> {
    let locus = Curve::partial_ii_locus();
    let row1 = |x: f64| (1.0 - 7.0_f64.sqrt() / 2.0) * x + 2.0 * SQRT_2;
    let diff = |x: f64| locus.value(x).map(|y| y - row1(x));
    let mut lo = 1.0;
    let mut hi = 2.0;
    let d_lo = diff(lo)?;
    let d_hi = diff(hi)?;
    if d_lo <= 0.0 || d_hi >= 0.0 {
        return Err(Error::Numerical(
            "crossover bracket [1, 2] does not straddle the sign change".into(),
        ));
    }
    for _ in 0..MAX_ITERS {
        if hi - lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if diff(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
