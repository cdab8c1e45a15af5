//! (1+ε)-approximate piecewise-linear replacements of a generator, and their
//! conversion into a small set of gadget parameters.

use crate::error::{Error, Result};
use crate::reduction::combine::{asymmetric_coefficients, GadgetCombination, GadgetMode, GadgetTerm};

/// Relative slack used when testing `value ≤ (1+ε)·g`.
const COVER_TOL: f64 = 1e-12;
const BISECT_TOL: f64 = 1e-10;
const MAX_PIECES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn new(slope: f64, intercept: f64) -> Self {
        Line { slope, intercept }
    }

    /// Line through two points with distinct abscissae.
    pub fn through(p: (f64, f64), q: (f64, f64)) -> Self {
        let slope = (q.1 - p.1) / (q.0 - p.0);
        Line {
            slope,
            intercept: p.1 - slope * p.0,
        }
    }

    pub fn at(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Lower envelope of `lines` on `[lo, hi]` as `(start, line index)` runs,
/// left to right.
pub fn lower_envelope(lines: &[Line], lo: f64, hi: f64) -> Vec<(f64, usize)> {
    if lines.is_empty() {
        return Vec::new();
    }
    let pick = |x: f64, candidates: &mut dyn Iterator<Item = usize>| {
        candidates.min_by(|&i, &j| {
            lines[i]
                .at(x)
                .total_cmp(&lines[j].at(x))
                .then(lines[i].slope.total_cmp(&lines[j].slope))
        })
    };
    let mut current = pick(lo, &mut (0..lines.len())).unwrap();
    let mut runs = vec![(lo, current)];
    let mut x = lo;
    loop {
        let cur = lines[current];
        let mut best: Option<(f64, usize)> = None;
        for (j, l) in lines.iter().enumerate() {
            if l.slope >= cur.slope {
                continue;
            }
            let cross = (l.intercept - cur.intercept) / (cur.slope - l.slope);
            let cross = cross.max(x);
            let better = match best {
                None => true,
                Some((bx, bj)) => cross < bx || (cross == bx && l.slope < lines[bj].slope),
            };
            if better {
                best = Some((cross, j));
            }
        }
        match best {
            Some((cross, j)) if cross < hi => {
                if cross > x {
                    runs.push((cross, j));
                } else {
                    runs.last_mut().unwrap().1 = j;
                }
                x = cross;
                current = j;
            }
            _ => break,
        }
    }
    runs
}

/// `ĝ(x) = min_i (mᵢx + dᵢ)` with slopes strictly decreasing to 0 and
/// intercepts strictly increasing from 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    pieces: Vec<Line>,
}

impl PiecewiseLinear {
    pub fn new(pieces: Vec<Line>) -> Result<Self> {
        let bad = |msg: String| Err(Error::MalformedEnvelope(msg));
        let (first, last) = match (pieces.first(), pieces.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return bad("no pieces".into()),
        };
        if first.intercept != 0.0 {
            return bad(format!("first intercept is {}", first.intercept));
        }
        if last.slope != 0.0 {
            return bad(format!("last slope is {}", last.slope));
        }
        for (i, p) in pieces.iter().enumerate() {
            if !(p.slope >= 0.0 && p.intercept >= 0.0 && p.slope.is_finite() && p.intercept.is_finite()) {
                return bad(format!("piece {i} has slope {} and intercept {}", p.slope, p.intercept));
            }
        }
        for (i, w) in pieces.windows(2).enumerate() {
            if !(w[1].slope < w[0].slope && w[1].intercept > w[0].intercept) {
                return bad(format!("pieces {i} and {} are not strictly ordered", i + 1));
            }
        }
        Ok(PiecewiseLinear { pieces })
    }

    /// Envelope of the lines active somewhere on `[0, ∞)`.
    pub fn from_lines(lines: &[Line]) -> Result<Self> {
        let runs = lower_envelope(lines, 0.0, f64::INFINITY);
        let mut pieces: Vec<Line> = runs.iter().map(|&(_, i)| lines[i]).collect();
        if let Some(first) = pieces.first_mut() {
            if first.intercept.abs() <= 1e-12 * first.slope.abs().max(1.0) {
                first.intercept = 0.0;
            }
        }
        PiecewiseLinear::new(pieces)
    }

    pub fn pieces(&self) -> &[Line] {
        &self.pieces
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.pieces.iter().map(|p| p.at(x)).fold(f64::INFINITY, f64::min)
    }

    /// Abscissae where consecutive pieces meet.
    pub fn crossovers(&self) -> Vec<f64> {
        self.pieces
            .windows(2)
            .map(|w| (w[1].intercept - w[0].intercept) / (w[0].slope - w[1].slope))
            .collect()
    }
}

pub fn eval_pwl(p: &PiecewiseLinear, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::DomainError {
            x,
            upper: f64::INFINITY,
        });
    }
    Ok(p.eval(x))
}

fn covered(value: f64, g: f64, eps: f64) -> bool {
    value <= (1.0 + eps) * g * (1.0 + COVER_TOL)
}

fn check_points(points: &[(f64, f64)]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::MalformedEnvelope("no points to approximate".into()));
    }
    let mut prev = (0.0, 0.0);
    let mut prev_slope = f64::INFINITY;
    for (i, &(q, g)) in points.iter().enumerate() {
        if !(q > prev.0) || !(g > 0.0) || !q.is_finite() || !g.is_finite() {
            return Err(Error::NonConcavePoints(i));
        }
        let slope = (g - prev.1) / (q - prev.0);
        let slack = 1e-9 * slope.abs().max(prev_slope.abs().min(1e300)).max(1.0);
        if slope > prev_slope + slack || slope < -slack {
            return Err(Error::NonConcavePoints(i));
        }
        prev = (q, g);
        prev_slope = slope;
    }
    Ok(())
}

/// Greedy minimum-piece envelope with `g(q) ≤ ĝ(q) ≤ (1+ε)g(q)` on the given
/// points. `points` are `(q, g(q))`, ascending in `q`, positive and
/// concave-consistent with `(0, 0)`.
pub fn sparsify_discrete(points: &[(f64, f64)], eps: f64) -> Result<PiecewiseLinear> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidConfig(format!("epsilon {eps} must be non-negative")));
    }
    check_points(points)?;
    let n = points.len();
    let (q, g): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    let horizontal = Line::new(0.0, g[n - 1]);
    let mut lines = vec![Line::new(g[0] / q[0], 0.0)];
    let first_uncovered = |lines: &[Line], from: usize| {
        (from..n).find(|&j| {
            let v = lines.iter().map(|l| l.at(q[j])).fold(f64::INFINITY, f64::min);
            !covered(v, g[j], eps)
        })
    };
    let mut from = 0;
    while let Some(l) = first_uncovered(&lines, from) {
        if l + 1 >= n || covered(g[n - 1], g[l], eps) {
            break;
        }
        let target = (1.0 + eps) * g[l];
        // h_i joins points i and i+1
        let h_at = |i: usize| Line::through((q[i], g[i]), (q[i + 1], g[i + 1])).at(q[l]);
        let star = (l + 1..n - 1)
            .find(|&i| h_at(i) > target * (1.0 + COVER_TOL))
            .unwrap_or(n - 1);
        lines.push(Line::through((q[l], target), (q[star], g[star])));
        from = l + 1;
    }
    lines.push(horizontal);
    PiecewiseLinear::from_lines(&lines)
}

fn bisect(mut lo: f64, mut hi: f64, mut left: impl FnMut(f64) -> bool) -> f64 {
    let tol = BISECT_TOL.min(1e-13 * hi.abs().max(1.0));
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if left(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Envelope with ratio at most `1+ε` everywhere on `[0, half]`. `g` must be
/// concave and nondecreasing there with `g(0) = 0`; `slope` gives its right
/// derivative.
pub fn sparsify_continuous(
    g: impl Fn(f64) -> f64,
    slope: impl Fn(f64) -> f64,
    half: f64,
    eps: f64,
) -> Result<PiecewiseLinear> {
    if !(eps > 0.0) {
        return Err(Error::InvalidConfig(format!("epsilon {eps} must be positive")));
    }
    if !(half > 0.0) || !half.is_finite() {
        return Err(Error::DomainError { x: half, upper: f64::INFINITY });
    }
    let m0 = slope(0.0);
    if !m0.is_finite() {
        return Err(Error::InfiniteInitialSlope);
    }
    if !(m0 > 0.0) {
        return Err(Error::NoTangentFound(format!("initial slope {m0} is not positive")));
    }
    let top = g(half);
    let mut lines = vec![Line::new(m0, 0.0)];
    let mut start = 0.0;
    loop {
        if lines.len() > MAX_PIECES {
            return Err(Error::NoTangentFound("piece limit exceeded".into()));
        }
        let cur = *lines.last().unwrap();
        let phi = |x: f64| cur.at(x) - (1.0 + eps) * g(x);
        if phi(half) <= 0.0 {
            break;
        }
        let z = bisect(start, half, |x| phi(x) <= 0.0);
        let y0 = (1.0 + eps) * g(z);
        if top <= y0 {
            break;
        }
        let psi = |t: f64| g(t) + slope(t) * (z - t) - y0;
        let next = if psi(half) < 0.0 {
            Line::through((z, y0), (half, top))
        } else {
            let t = bisect(z, half, |t| psi(t) < 0.0);
            if !(t > z) || !psi(t).is_finite() {
                return Err(Error::NoTangentFound(format!("no tangent point beyond {z}")));
            }
            Line::through((z, y0), (t, g(t)))
        };
        if !(next.slope < cur.slope) {
            return Err(Error::NoTangentFound(format!("stalled at {z}")));
        }
        lines.push(next);
        start = z;
    }
    lines.push(Line::new(0.0, top));
    PiecewiseLinear::from_lines(&lines)
}

/// `(aᵢ, bᵢ)` with `ĝ(x) = Σ aᵢ·min{x, bᵢ}`.
pub fn pwl_to_gadget_params(p: &PiecewiseLinear) -> Result<Vec<(f64, f64)>> {
    let pieces = p.pieces();
    let mut out = Vec::with_capacity(pieces.len().saturating_sub(1));
    let mut prev_b = 0.0;
    for w in pieces.windows(2) {
        let a = w[0].slope - w[1].slope;
        let b = (w[1].intercept - w[0].intercept) / a;
        if !(a > 0.0) || !(b > prev_b) {
            return Err(Error::MalformedEnvelope(format!("piece pair yields a={a}, b={b}")));
        }
        prev_b = b;
        out.push((a, b));
    }
    Ok(out)
}

/// Symmetric gadget combination realising `p` on `[0, Γ/2]`.
pub fn envelope_to_symmetric(edge: &str, gamma_total: f64, p: &PiecewiseLinear) -> Result<GadgetCombination> {
    let terms = pwl_to_gadget_params(p)?
        .into_iter()
        .map(|(scale, breakpoint)| GadgetTerm { scale, breakpoint })
        .collect();
    Ok(GadgetCombination {
        edge: edge.to_string(),
        mode: GadgetMode::Symmetric,
        terms,
        gamma_total,
    })
}

/// Asymmetric approximation from points `(q, g(q))` over `(0, Γ)`: the
/// points are split at their maximum, each side (the right one mirrored) is
/// sparsified independently, and the combined envelope is converted to
/// asymmetric gadget terms.
pub fn sparsify_asymmetric(edge: &str, points: &[(f64, f64)], gamma_total: f64, eps: f64) -> Result<GadgetCombination> {
    if points.is_empty() {
        return Err(Error::MalformedEnvelope("no points to approximate".into()));
    }
    let peak = points
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .unwrap();
    let left = sparsify_discrete(&points[..=peak], eps)?;
    let mirrored: Vec<(f64, f64)> = points[peak..].iter().rev().map(|&(q, g)| (gamma_total - q, g)).collect();
    let right = sparsify_discrete(&mirrored, eps)?;
    let mut lines: Vec<Line> = left.pieces().to_vec();
    lines.extend(
        right
            .pieces()
            .iter()
            .filter(|l| l.slope > 0.0)
            .map(|l| Line::new(-l.slope, l.slope * gamma_total + l.intercept)),
    );
    let runs = lower_envelope(&lines, 0.0, gamma_total);
    let kinks: Vec<f64> = runs[1..].iter().map(|&(x, _)| x).collect();
    let values: Vec<f64> = runs[1..].iter().map(|&(x, i)| lines[i].at(x)).collect();
    let raw = asymmetric_coefficients(&kinks, &values, gamma_total);
    GadgetCombination::from_coefficients(edge, GadgetMode::Asymmetric, gamma_total, &kinks, &raw)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxReport {
    pub piece_count: usize,
    /// Largest `ĝ/g` over checked points with `g > 0`.
    pub max_ratio: f64,
    /// Smallest `ĝ − g` over checked points.
    pub min_gap: f64,
    pub epsilon: f64,
}

impl ApproxReport {
    pub fn passed(&self) -> bool {
        self.min_gap >= -1e-12 && self.max_ratio <= (1.0 + self.epsilon) * (1.0 + 1e-9)
    }
}

/// Sandwich check of `approx` against `g` at `points`.
pub fn verify_approximation(
    approx: impl Fn(f64) -> f64,
    piece_count: usize,
    g: impl Fn(f64) -> f64,
    points: &[f64],
    eps: f64,
) -> ApproxReport {
    let mut max_ratio: f64 = 1.0;
    let mut min_gap = f64::INFINITY;
    for &x in points {
        let (a, v) = (approx(x), g(x));
        min_gap = min_gap.min(a - v);
        if v > 0.0 {
            max_ratio = max_ratio.max(a / v);
        }
    }
    ApproxReport {
        piece_count,
        max_ratio,
        min_gap,
        epsilon: eps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(x: f64) -> f64 {
        -0.125 * x * x + 2.0 * x
    }

    fn quad_slope(x: f64) -> f64 {
        2.0 - 0.25 * x
    }

    fn reference_envelope() -> PiecewiseLinear {
        PiecewiseLinear::new(vec![Line::new(2.0, 0.0), Line::new(1.2727, 1.0579), Line::new(0.0, 8.0)]).unwrap()
    }

    #[test]
    fn eval_reference_envelope() {
        let p = reference_envelope();
        assert_eq!(eval_pwl(&p, 1.0).unwrap(), 2.0);
        assert!((eval_pwl(&p, 4.0).unwrap() - 6.1487).abs() < 1e-12);
        assert_eq!(eval_pwl(&p, 8.0).unwrap(), 8.0);
        assert!(eval_pwl(&p, -1.0).is_err());
    }

    #[test]
    fn malformed_envelopes_are_rejected() {
        assert!(PiecewiseLinear::new(vec![]).is_err());
        assert!(PiecewiseLinear::new(vec![Line::new(1.0, 0.5), Line::new(0.0, 2.0)]).is_err());
        assert!(PiecewiseLinear::new(vec![Line::new(1.0, 0.0), Line::new(0.5, 1.0)]).is_err());
        assert!(PiecewiseLinear::new(vec![Line::new(1.0, 0.0), Line::new(2.0, 1.0), Line::new(0.0, 3.0)]).is_err());
    }

    #[test]
    fn continuous_first_two_pieces_match_figure() {
        let p = sparsify_continuous(quad, quad_slope, 8.0, 0.1).unwrap();
        let pieces = p.pieces();
        assert_eq!(pieces[0], Line::new(2.0, 0.0));
        assert!((pieces[1].slope - 1.2727).abs() < 1e-3);
        assert!((pieces[1].intercept - 1.0579).abs() < 1e-3);
        let cross = p.crossovers();
        assert!((cross[0] - 1.4545).abs() < 1e-3);
        // the second piece reaches (1+ε)g at 5.2894
        let z = bisect(cross[0] + 1e-6, 8.0, |x| pieces[1].at(x) <= 1.1 * quad(x));
        assert!((z - 5.2894).abs() < 1e-3);
        assert_eq!(pieces.last().unwrap(), &Line::new(0.0, 8.0));
        let grid: Vec<f64> = (0..=8000).map(|i| i as f64 / 1000.0).collect();
        let report = verify_approximation(|x| p.eval(x), p.piece_count(), quad, &grid, 0.1);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn reference_envelope_exceeds_tolerance() {
        // between 5.2894 and the point where 8 ≤ 1.1 g(x) no piece of the
        // three-piece envelope is within the 1.1 ratio
        let p = reference_envelope();
        let report = verify_approximation(|x| p.eval(x), 3, quad, &[5.45], 0.1);
        assert!(report.max_ratio > 1.1);
    }

    #[test]
    fn continuous_linear_and_min() {
        let p = sparsify_continuous(|x| 3.0 * x, |_| 3.0, 5.0, 0.1).unwrap();
        assert_eq!(p.pieces(), &[Line::new(3.0, 0.0), Line::new(0.0, 15.0)]);
        let p = sparsify_continuous(|x: f64| x.min(2.0), |x| if x < 2.0 { 1.0 } else { 0.0 }, 5.0, 0.01).unwrap();
        assert_eq!(p.pieces(), &[Line::new(1.0, 0.0), Line::new(0.0, 2.0)]);
        assert_eq!(
            sparsify_continuous(f64::sqrt, |x| 0.5 / x.sqrt(), 4.0, 0.1),
            Err(Error::InfiniteInitialSlope)
        );
        assert!(matches!(
            sparsify_continuous(|x| x * x, |x| 2.0 * x, 4.0, 0.1),
            Err(Error::NoTangentFound(_))
        ));
    }

    #[test]
    fn discrete_examples() {
        let p = sparsify_discrete(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)], 0.0).unwrap();
        assert_eq!(p.pieces(), &[Line::new(1.0, 0.0), Line::new(0.0, 3.0)]);
        let pts: Vec<(f64, f64)> = (1..=8).map(|i| (i as f64, quad(i as f64))).collect();
        let p = sparsify_discrete(&pts, 10.0).unwrap();
        assert_eq!(p.piece_count(), 2);
        assert!(matches!(
            sparsify_discrete(&[(1.0, 1.0), (2.0, 3.0)], 0.1),
            Err(Error::NonConcavePoints(1))
        ));
    }

    #[test]
    fn discrete_zero_eps_interpolates() {
        let pts: Vec<(f64, f64)> = (1..=8).map(|i| (i as f64 * 0.7, quad(i as f64 * 0.7))).collect();
        let p = sparsify_discrete(&pts, 0.0).unwrap();
        for &(q, g) in &pts {
            assert!((p.eval(q) - g).abs() < 1e-12);
        }
    }

    #[test]
    fn gadget_params_from_figure() {
        let params = pwl_to_gadget_params(&reference_envelope()).unwrap();
        assert!((params[0].0 - 0.7273).abs() < 1e-4 && (params[0].1 - 1.4545).abs() < 1e-3);
        assert!((params[1].0 - 1.2727).abs() < 1e-4 && (params[1].1 - 5.4546).abs() < 1e-3);
        let two = PiecewiseLinear::new(vec![Line::new(2.0, 0.0), Line::new(0.0, 3.0)]).unwrap();
        assert_eq!(pwl_to_gadget_params(&two).unwrap(), vec![(2.0, 1.5)]);
    }

    #[test]
    fn dropped_middle_piece_fails_verification() {
        let p = sparsify_continuous(quad, quad_slope, 8.0, 0.1).unwrap();
        let mut lines = p.pieces().to_vec();
        lines.remove(1);
        let q = PiecewiseLinear::from_lines(&lines).unwrap();
        let grid: Vec<f64> = (1..=800).map(|i| i as f64 / 100.0).collect();
        let report = verify_approximation(|x| q.eval(x), q.piece_count(), quad, &grid, 0.1);
        assert!(!report.passed() && report.max_ratio > 1.1);
    }

    #[test]
    fn asymmetric_sandwich() {
        let total = 6.0;
        let g = |x: f64| (2.0 * x).min(total - x);
        let pts: Vec<(f64, f64)> = (1..12).map(|i| i as f64 * 0.5).map(|q| (q, g(q))).collect();
        let comb = sparsify_asymmetric("e", &pts, total, 0.0).unwrap();
        for &(q, v) in &pts {
            assert!((comb.value_at(q) - v).abs() < 1e-9, "{q}");
        }
        let comb = sparsify_asymmetric("e", &pts, total, 0.5).unwrap();
        for &(q, v) in &pts {
            let a = comb.value_at(q);
            assert!(a >= v - 1e-9 && a <= 1.5 * v + 1e-9, "{q}: {a} vs {v}");
        }
    }

    use proptest::prelude::*;

    /// All lines touching `(q, g)` or the origin and passing through another
    /// anchor, including the `(1+ε)g` lifts.
    fn candidate_lines(pts: &[(f64, f64)], eps: f64) -> Vec<Line> {
        let mut touch = vec![(0.0, 0.0)];
        touch.extend_from_slice(pts);
        let mut other = touch.clone();
        other.extend(pts.iter().map(|&(q, g)| (q, (1.0 + eps) * g)));
        let mut out = Vec::new();
        for &p in &touch {
            for &o in &other {
                if o.0 != p.0 {
                    let l = Line::through(p, o);
                    if l.slope > 0.0 && l.intercept >= -1e-12 {
                        out.push(l);
                    }
                }
            }
        }
        out
    }

    fn sandwiches(lines: &[Line], pts: &[(f64, f64)], eps: f64) -> bool {
        pts.iter().all(|&(q, g)| {
            let v = lines.iter().map(|l| l.at(q)).fold(f64::INFINITY, f64::min);
            v >= g - 1e-9 && v <= (1.0 + eps) * g * (1.0 + 1e-9)
        })
    }

    fn brute_min_pieces(pts: &[(f64, f64)], eps: f64) -> usize {
        let cands = candidate_lines(pts, eps);
        let horizontal = Line::new(0.0, pts.last().unwrap().1);
        let origin: Vec<usize> = (0..cands.len()).filter(|&i| cands[i].intercept.abs() < 1e-12).collect();
        for k in 0..=2 {
            let mut idx = vec![0usize; k];
            let total = cands.len().pow(k as u32);
            for code in 0..total {
                let mut c = code;
                for slot in idx.iter_mut() {
                    *slot = c % cands.len();
                    c /= cands.len();
                }
                for &o in &origin {
                    let mut lines = vec![cands[o], horizontal];
                    lines.extend(idx.iter().map(|&i| cands[i]));
                    if sandwiches(&lines, pts, eps) {
                        return k + 2;
                    }
                }
            }
        }
        usize::MAX
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn discrete_is_minimal_on_small_sets(
            raw in prop::collection::vec(0.05f64..1.0, 2..=8),
            eps in prop::sample::select(vec![0.01, 0.1, 0.5]),
        ) {
            // concave points from g(x) = x(T−x) sampled on increasing q ≤ T/2
            let mut q: Vec<f64> = raw.iter().scan(0.0, |s, d| { *s += d; Some(*s) }).collect();
            let t = 2.0 * q.last().unwrap() + 0.1;
            q.dedup();
            let pts: Vec<(f64, f64)> = q.iter().map(|&x| (x, x * (t - x))).collect();
            let p = sparsify_discrete(&pts, eps).unwrap();
            prop_assert!(sandwiches(p.pieces(), &pts, eps));
            let best = brute_min_pieces(&pts, eps);
            if best != usize::MAX {
                prop_assert!(p.piece_count() <= best, "greedy {} vs brute {}", p.piece_count(), best);
            }
        }

        #[test]
        fn gadget_params_round_trip(
            drops in prop::collection::vec(0.01f64..3.0, 1..6),
            gaps in prop::collection::vec(0.01f64..3.0, 6),
        ) {
            let mut b = 0.0;
            let params: Vec<(f64, f64)> = drops.iter().zip(&gaps).map(|(&a, &gap)| { b += gap; (a, b) }).collect();
            let mut lines = Vec::new();
            let mut m: f64 = params.iter().map(|p| p.0).sum();
            let mut d = 0.0;
            lines.push(Line::new(m, d));
            for (i, &(a, bi)) in params.iter().enumerate() {
                m -= a;
                d += a * bi;
                lines.push(Line::new(if i + 1 == params.len() { 0.0 } else { m }, d));
            }
            let p = PiecewiseLinear::new(lines).unwrap();
            let back = pwl_to_gadget_params(&p).unwrap();
            for i in 0..=1000 {
                let x = b * 1.2 * i as f64 / 1000.0;
                let rebuilt: f64 = back.iter().map(|&(a, bi)| a * x.min(bi)).sum();
                prop_assert!((rebuilt - p.eval(x)).abs() <= 1e-9 * p.eval(x).max(1.0));
            }
        }
    }
}
