//! Planar convex kernels shared by every 2-D shape pair: separating-axis
//! gap between convex polygons and signed point-to-polygon distance.

pub(crate) type V2 = [f64; 2];

fn sub(a: V2, b: V2) -> V2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot(a: V2, b: V2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn project(poly: &[V2], axis: V2) -> (f64, f64) {
    poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| {
        let t = dot(p, axis);
        (lo.min(t), hi.max(t))
    })
}

/// Largest gap between the projections of `a` and `b` over all edge normals
/// of both polygons. Positive means a separating axis exists; negative is the
/// smallest overlap over all candidate axes.
pub(crate) fn sat_gap(a: &[V2], b: &[V2]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for poly in [a, b] {
        let n = poly.len();
        for i in 0..n {
            let e = sub(poly[(i + 1) % n], poly[i]);
            let len = e[0].hypot(e[1]);
            if len == 0.0 {
                continue;
            }
            let axis = [-e[1] / len, e[0] / len];
            let (alo, ahi) = project(a, axis);
            let (blo, bhi) = project(b, axis);
            best = best.max((alo - bhi).max(blo - ahi));
        }
    }
    best
}

fn segment_distance(p: V2, a: V2, b: V2) -> f64 {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len2 = dot(ab, ab);
    let t = if len2 == 0.0 {
        0.0
    } else {
        (dot(ap, ab) / len2).clamp(0.0, 1.0)
    };
    let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
    let d = sub(p, q);
    d[0].hypot(d[1])
}

/// Signed Euclidean distance from `p` to the boundary of a counter-clockwise
/// convex polygon: negative inside, positive outside.
pub(crate) fn signed_distance(p: V2, poly: &[V2]) -> f64 {
    let n = poly.len();
    let mut inside = true;
    let mut dist = f64::INFINITY;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = sub(b, a);
        let cross = e[0] * (p[1] - a[1]) - e[1] * (p[0] - a[0]);
        if cross < 0.0 {
            inside = false;
        }
        dist = dist.min(segment_distance(p, a, b));
    }
    if inside {
        -dist
    } else {
        dist
    }
}
