//! Marching squares on a rectangular grid.

use std::collections::BTreeMap;

use serde::Serialize;

/// A contour line at `level`; closed when the first and last points coincide.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polyline {
    pub level: f64,
    pub points: Vec<(f64, f64)>,
}

/// Grid edge: lower-left node and direction (0 along `x`, 1 along `y`).
type EdgeKey = (usize, usize, u8);

/// Contours of `values` (row-major, `xs` outer) at `level`, chained into
/// polylines. Cells touching a non-finite value are skipped; saddles are
/// resolved with the cell-centre average.
pub fn marching_squares(xs: &[f64], ys: &[f64], values: &[f64], level: f64) -> Vec<Polyline> {
    let (nx, ny) = (xs.len(), ys.len());
    assert_eq!(values.len(), nx * ny, "grid size mismatch");
    let v = |i: usize, j: usize| values[i * ny + j];
    let point = |e: EdgeKey| -> (f64, f64) {
        let (i, j, d) = e;
        let (i2, j2) = if d == 0 { (i + 1, j) } else { (i, j + 1) };
        let (v0, v1) = (v(i, j), v(i2, j2));
        let t = if v1 == v0 { 0.5 } else { (level - v0) / (v1 - v0) };
        (xs[i] + t * (xs[i2] - xs[i]), ys[j] + t * (ys[j2] - ys[j]))
    };

    let mut segments: Vec<[EdgeKey; 2]> = Vec::new();
    for i in 0..nx.saturating_sub(1) {
        for j in 0..ny.saturating_sub(1) {
            let c = [v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)];
            if c.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let inside: Vec<bool> = c.iter().map(|&x| x >= level).collect();
            // bottom, right, top, left
            let edges: [EdgeKey; 4] = [(i, j, 0), (i + 1, j, 1), (i, j + 1, 0), (i, j, 1)];
            let crossed: Vec<usize> = (0..4).filter(|&k| inside[k] != inside[(k + 1) % 4]).collect();
            match crossed.len() {
                2 => segments.push([edges[crossed[0]], edges[crossed[1]]]),
                4 => {
                    let centre = c.iter().sum::<f64>() / 4.0 >= level;
                    // pair edges around corners 1 and 3 or around corners 0 and 2
                    let around_odd = inside[0] == centre;
                    if around_odd {
                        segments.push([edges[0], edges[1]]);
                        segments.push([edges[2], edges[3]]);
                    } else {
                        segments.push([edges[3], edges[0]]);
                        segments.push([edges[1], edges[2]]);
                    }
                }
                _ => {}
            }
        }
    }

    let mut at: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (s, seg) in segments.iter().enumerate() {
        for e in seg {
            at.entry(*e).or_default().push(s);
        }
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    let walk = |start: usize, from: EdgeKey, used: &mut Vec<bool>| {
        let mut keys = vec![from];
        let (mut s, mut cur) = (start, from);
        loop {
            used[s] = true;
            let next = if segments[s][0] == cur { segments[s][1] } else { segments[s][0] };
            keys.push(next);
            cur = next;
            match at[&cur].iter().find(|&&t| !used[t]) {
                Some(&t) => s = t,
                None => break,
            }
        }
        Polyline { level, points: keys.into_iter().map(point).collect() }
    };
    // open lines start at boundary edges, then the remaining closed loops
    for (key, segs) in &at {
        if segs.len() == 1 && !used[segs[0]] {
            out.push(walk(segs[0], *key, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            out.push(walk(s, segments[s][0], &mut used));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_contour_is_closed_and_on_radius() {
        let xs: Vec<f64> = (0..41).map(|i| -2.0 + 0.1 * i as f64).collect();
        let vals: Vec<f64> = xs.iter().flat_map(|&x| xs.iter().map(move |&y| x * x + y * y)).collect();
        let lines = marching_squares(&xs, &xs, &vals, 1.0);
        assert_eq!(lines.len(), 1);
        let p = &lines[0].points;
        assert_eq!(p.first(), p.last());
        for &(x, y) in p {
            assert!(((x * x + y * y).sqrt() - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn plane_gives_one_open_line() {
        let xs: Vec<f64> = (0..5).map(|i| i as f64).collect();
        let vals: Vec<f64> = xs.iter().flat_map(|&x| xs.iter().map(move |&y| x + y)).collect();
        let lines = marching_squares(&xs, &xs, &vals, 3.5);
        assert_eq!(lines.len(), 1);
        for &(x, y) in &lines[0].points {
            assert!((x + y - 3.5).abs() < 1e-12);
        }
        assert!(marching_squares(&xs, &xs, &vals, 100.0).is_empty());
    }
}
