//! Minimum-cost perfect matching on a square cost matrix (Hungarian method
//! with shortest augmenting paths, O(n³)).

/// Optimal assignment plus the dual potentials that certify it.
#[derive(Debug, Clone)]
pub struct Assignment {
    /// `perm[row]` is the column assigned to `row`.
    pub perm: Vec<usize>,
    /// Row potentials; `cost[i][j] - row_dual[i] - col_dual[j] >= 0`.
    pub row_dual: Vec<f64>,
    pub col_dual: Vec<f64>,
}

/// Solves the assignment problem for a row-major `n x n` matrix of finite
/// costs.
pub fn solve(cost: &[f64], n: usize) -> Assignment {
    assert_eq!(cost.len(), n * n, "cost matrix must be n x n");
    let at = |i: usize, j: usize| cost[(i - 1) * n + (j - 1)];

    // 1-based; column 0 is the virtual source of each augmenting search
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = at(i0, j) - u[i0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut perm = vec![0; n];
    for j in 1..=n {
        perm[owner[j] - 1] = j - 1;
    }
    Assignment {
        perm,
        row_dual: u[1..].to_vec(),
        col_dual: v[1..].to_vec(),
    }
}

/// Total cost of `perm`, summed in row order.
pub fn total_cost(cost: &[f64], n: usize, perm: &[usize]) -> f64 {
    perm.iter()
        .enumerate()
        .fold(0.0, |acc, (i, &j)| acc + cost[i * n + j])
}

/// Minimum-cost assignment under `primary`; among assignments that are
/// optimal for `primary`, prefers one with low `secondary` cost.
///
/// Optimal assignments are exactly the perfect matchings on edges that are
/// tight under the primary duals, so the secondary problem is solved on that
/// edge set. The secondary answer is used only if its primary cost does not
/// exceed the first solution's.
pub fn solve_lexicographic(primary: &[f64], secondary: &[f64], n: usize) -> Vec<usize> {
    let first = solve(primary, n);
    if n < 2 {
        return first.perm;
    }
    let scale = primary.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
    let tol = 1e-9 * scale;
    let tight = |i: usize, j: usize| primary[i * n + j] - first.row_dual[i] - first.col_dual[j] <= tol;

    let max_secondary = secondary.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let blocked = 2.0 * n as f64 * max_secondary + 1.0;
    let restricted: Vec<f64> = (0..n * n)
        .map(|k| {
            if tight(k / n, k % n) {
                secondary[k]
            } else {
                blocked
            }
        })
        .collect();
    let second = solve(&restricted, n).perm;

    let uses_blocked = second.iter().enumerate().any(|(i, &j)| !tight(i, j));
    if !uses_blocked && total_cost(primary, n, &second) <= total_cost(primary, n, &first.perm) {
        second
    } else {
        first.perm
    }
}
