//! One-dimensional golden-section search.

/// `1/φ`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimises a unimodal `f` on `[lo, hi]` until the bracket is narrower than
/// `tol`. Returns `(argmin, min)`; the endpoints are also checked so a
/// minimum sitting on the boundary is not lost.
pub fn golden_section_min<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    // each step shrinks the bracket by 1/φ; 200 steps is far past f64 resolution
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = (mid, f(mid));
    for x in [c, d, lo, hi] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Maximising counterpart of [`golden_section_min`].
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (x, neg) = golden_section_min(|x| -f(x), lo, hi, tol);
    (x, -neg)
}

/// Maximises `f` on `[lo, hi]`: a coarse scan of `coarse` intervals picks the
/// best bracket, then golden-section refines inside it.
pub fn bracketed_max<F>(f: F, lo: f64, hi: f64, coarse: usize, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let n = coarse.max(2);
    let step = (hi - lo) / n as f64;
    let mut best_k = 0;
    let mut best_f = f64::NEG_INFINITY;
    for k in 0..=n {
        let fx = f(lo + step * k as f64);
        if fx > best_f {
            best_f = fx;
            best_k = k;
        }
    }
    let a = lo + step * best_k.saturating_sub(1) as f64;
    let b = (lo + step * (best_k + 1) as f64).min(hi);
    let refined = golden_section_max(&f, a, b, tol);
    if refined.1 >= best_f {
        refined
    } else {
        (lo + step * best_k as f64, best_f)
    }
}
