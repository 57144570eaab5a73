//! Integer linear algebra over small dense matrices: column Hermite form,
//! integer kernels, integer solving and lattice reduction of vectors.

pub type Vector = Vec<i128>;
pub type Matrix = Vec<Vector>;

/// Column echelon form `A U = H` with `U` unimodular.
pub struct ColumnForm {
    pub h: Matrix,
    /// `u[r][c]`: row-major `n x n` unimodular matrix.
    pub u: Matrix,
    /// `(row, column)` of each pivot; pivot columns are `0..rank`.
    pub pivots: Vec<(usize, usize)>,
}

fn col_axpy(m: &mut Matrix, dst: usize, src: usize, k: i128) {
    for row in m.iter_mut() {
        row[dst] -= k * row[src];
    }
}

fn col_swap(m: &mut Matrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn col_neg(m: &mut Matrix, a: usize) {
    for row in m.iter_mut() {
        row[a] = -row[a];
    }
}

pub fn column_form(a: &Matrix, n: usize) -> ColumnForm {
    let mut h: Matrix = a.clone();
    let mut u: Matrix = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let mut pivots = vec![];
    let mut p = 0;
    for i in 0..h.len() {
        if p == n {
            break;
        }
        loop {
            let best = (p..n).filter(|&j| h[i][j] != 0).min_by_key(|&j| h[i][j].abs());
            let j = match best {
                Some(j) => j,
                None => break,
            };
            if j != p {
                col_swap(&mut h, j, p);
                col_swap(&mut u, j, p);
            }
            let mut done = true;
            for j in p + 1..n {
                if h[i][j] != 0 {
                    let k = h[i][j].div_euclid(h[i][p]);
                    col_axpy(&mut h, j, p, k);
                    col_axpy(&mut u, j, p, k);
                    if h[i][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[i][p] != 0 {
            if h[i][p] < 0 {
                col_neg(&mut h, p);
                col_neg(&mut u, p);
            }
            pivots.push((i, p));
            p += 1;
        }
    }
    ColumnForm { h, u, pivots }
}

/// Integer basis of `{x : A x = 0}` (vectors of length `n`).
pub fn kernel(a: &Matrix, n: usize) -> Vec<Vector> {
    let cf = column_form(a, n);
    let r = cf.pivots.len();
    let mut basis: Vec<Vector> = (r..n).map(|c| cf.u.iter().map(|row| row[c]).collect()).collect();
    size_reduce(&mut basis);
    basis
}

/// Some integer `x` with `A x = b`, if one exists.
pub fn solve(a: &Matrix, n: usize, b: &[i128]) -> Option<Vector> {
    let cf = column_form(a, n);
    let mut y = vec![0i128; n];
    for &(i, k) in &cf.pivots {
        let res = b[i] - cf.h[i][..k].iter().zip(&y).map(|(h, x)| h * x).sum::<i128>();
        if res % cf.h[i][k] != 0 {
            return None;
        }
        y[k] = res / cf.h[i][k];
    }
    for (i, row) in cf.h.iter().enumerate() {
        let s: i128 = row.iter().zip(&y).map(|(x, z)| x * z).sum();
        if s != b[i] {
            return None;
        }
    }
    Some((0..n).map(|r| (0..n).map(|c| cf.u[r][c] * y[c]).sum()).collect())
}

/// Greedy pairwise size reduction (keeps the generated lattice).
pub fn size_reduce(basis: &mut [Vector]) {
    let norm = |v: &Vector| v.iter().map(|x| x.abs()).sum::<i128>();
    let mut changed = true;
    let mut rounds = 0;
    while changed && rounds < 100 {
        changed = false;
        rounds += 1;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                for s in [1i128, -1] {
                    let cand: Vector = basis[i].iter().zip(&basis[j]).map(|(a, b)| a - s * b).collect();
                    if norm(&cand) < norm(&basis[i]) {
                        basis[i] = cand;
                        changed = true;
                    }
                }
            }
        }
    }
}

/// Row echelon basis of the lattice spanned by `vecs`: pivot columns strictly
/// increasing, pivots positive, entries above each pivot reduced into `[0, pivot)`.
pub fn echelon(vecs: &[Vector], n: usize) -> Vec<Vector> {
    let mut rows: Vec<Vector> = vecs.iter().filter(|v| v.iter().any(|&x| x != 0)).cloned().collect();
    let mut out: Vec<Vector> = vec![];
    for col in 0..n {
        loop {
            let best = rows.iter().enumerate().filter(|(_, r)| r[col] != 0).min_by_key(|(_, r)| r[col].abs()).map(|(i, _)| i);
            let bi = match best {
                Some(i) => i,
                None => break,
            };
            let piv = rows.swap_remove(bi);
            let mut rest = vec![];
            for r in rows.drain(..) {
                if r[col] != 0 {
                    let k = r[col].div_euclid(piv[col]);
                    let nr: Vector = r.iter().zip(&piv).map(|(a, b)| a - k * b).collect();
                    if nr.iter().any(|&x| x != 0) {
                        rest.push(nr);
                    }
                } else {
                    rest.push(r);
                }
            }
            rows = rest;
            if rows.iter().all(|r| r[col] == 0) {
                let piv = if piv[col] < 0 { piv.iter().map(|x| -x).collect() } else { piv };
                out.push(piv);
                break;
            } else {
                rows.push(piv);
            }
        }
    }
    // reduce entries above pivots
    for i in 0..out.len() {
        let pc = pivot_col(&out[i]).unwrap();
        for j in 0..i {
            let k = out[j][pc].div_euclid(out[i][pc]);
            if k != 0 {
                let pi = out[i].clone();
                for (a, b) in out[j].iter_mut().zip(&pi) {
                    *a -= k * b;
                }
            }
        }
    }
    out
}

pub fn pivot_col(v: &Vector) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

/// Reduce `v` modulo the lattice with echelon basis `ech`; the result is
/// zero exactly when `v` lies in the lattice.
pub fn reduce(v: &Vector, ech: &[Vector]) -> Vector {
    let mut v = v.clone();
    for row in ech {
        let pc = pivot_col(row).unwrap();
        let k = v[pc].div_euclid(row[pc]);
        if k != 0 {
            for (a, b) in v.iter_mut().zip(row) {
                *a -= k * b;
            }
        }
    }
    v
}

pub fn contains(v: &Vector, ech: &[Vector]) -> bool {
    reduce(v, ech).iter().all(|&x| x == 0)
}

/// Echelon basis whose pivots sit at the last nonzero coordinate instead of
/// the first (so reduction eliminates trailing coordinates).
pub fn echelon_trailing(vecs: &[Vector], n: usize) -> Vec<Vector> {
    let rev: Vec<Vector> = vecs.iter().map(|v| v.iter().rev().cloned().collect()).collect();
    echelon(&rev, n).into_iter().map(|v| v.into_iter().rev().collect()).collect()
}

pub fn reduce_trailing(v: &Vector, ech: &[Vector]) -> Vector {
    let rv: Vector = v.iter().rev().cloned().collect();
    let re: Vec<Vector> = ech.iter().map(|e| e.iter().rev().cloned().collect()).collect();
    reduce(&rv, &re).into_iter().rev().collect()
}

pub fn mat_vec(a: &Matrix, x: &[i128]) -> Vector {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}
