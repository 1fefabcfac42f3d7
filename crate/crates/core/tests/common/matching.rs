//! Exhaustive matching oracles for diagram distances: enumerate every way of
//! matching points across two small diagrams (unmatched points go to the
//! diagonal) and take the best. Only finite pairs participate; essential
//! handling is covered by unit tests.

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn diag(p: (f64, f64)) -> f64 {
    (p.1 - p.0).abs() / 2.0
}

/// Minimum over all partial matchings of the maximum cost.
pub fn oracle_bottleneck(d1: &[(f64, f64)], d2: &[(f64, f64)]) -> f64 {
    let mut best = f64::INFINITY;
    let mut used = vec![false; d2.len()];
    recurse_bottleneck(d1, d2, 0, &mut used, 0.0, &mut best);
    best
}

fn recurse_bottleneck(
    d1: &[(f64, f64)],
    d2: &[(f64, f64)],
    i: usize,
    used: &mut [bool],
    current_max: f64,
    best: &mut f64,
) {
    if current_max >= *best {
        return;
    }
    if i == d1.len() {
        // Remaining d2 points go to the diagonal.
        let mut total = current_max;
        for (j, &u) in used.iter().enumerate() {
            if !u {
                total = total.max(diag(d2[j]));
            }
        }
        if total < *best {
            *best = total;
        }
        return;
    }
    // Match d1[i] to the diagonal.
    recurse_bottleneck(d1, d2, i + 1, used, current_max.max(diag(d1[i])), best);
    // Or to any unused d2 point.
    for j in 0..d2.len() {
        if !used[j] {
            used[j] = true;
            recurse_bottleneck(
                d1,
                d2,
                i + 1,
                used,
                current_max.max(linf(d1[i], d2[j])),
                best,
            );
            used[j] = false;
        }
    }
}

/// Minimum over all partial matchings of `(sum cost^p)^(1/p)`.
pub fn oracle_wasserstein(d1: &[(f64, f64)], d2: &[(f64, f64)], p: f64) -> f64 {
    let mut best = f64::INFINITY;
    let mut used = vec![false; d2.len()];
    recurse_wasserstein(d1, d2, p, 0, &mut used, 0.0, &mut best);
    best.powf(1.0 / p)
}

fn recurse_wasserstein(
    d1: &[(f64, f64)],
    d2: &[(f64, f64)],
    p: f64,
    i: usize,
    used: &mut [bool],
    current_sum: f64,
    best: &mut f64,
) {
    if current_sum >= *best {
        return;
    }
    if i == d1.len() {
        let mut total = current_sum;
        for (j, &u) in used.iter().enumerate() {
            if !u {
                total += diag(d2[j]).powf(p);
            }
        }
        if total < *best {
            *best = total;
        }
        return;
    }
    recurse_wasserstein(
        d1,
        d2,
        p,
        i + 1,
        used,
        current_sum + diag(d1[i]).powf(p),
        best,
    );
    for j in 0..d2.len() {
        if !used[j] {
            used[j] = true;
            recurse_wasserstein(
                d1,
                d2,
                p,
                i + 1,
                used,
                current_sum + linf(d1[i], d2[j]).powf(p),
                best,
            );
            used[j] = false;
        }
    }
}
