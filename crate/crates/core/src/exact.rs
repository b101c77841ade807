//! Exact rational linear algebra used by the signature, kernel and cone
//! feasibility routines. Matrix eliminations run over big-integer rationals
//! so intermediate values never overflow; the small `Rat` type is used for
//! scalar quantities with bounded denominators.

use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

pub type Rat = Ratio<i64>;

/// Serializes a rational as the exact string `p/q` (or `p` when integral).
pub fn serialize_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// Serializes a list of rationals as exact `p/q` strings.
pub fn serialize_rats<S: serde::Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&r.to_string())?;
    }
    seq.end()
}

fn to_big_matrix(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect()
}

/// Inertia `(positive, negative, zero)` of a symmetric integer matrix,
/// computed by symmetric Gaussian elimination over the rationals.
///
/// When every remaining diagonal entry vanishes but some off-diagonal entry
/// does not, the corresponding row and column are first added symmetrically
/// to bring a nonzero entry onto the diagonal; this is a congruence, so the
/// inertia is unchanged.
pub fn inertia(sym: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = sym.len();
    for row in sym {
        assert_eq!(row.len(), n, "inertia requires a square matrix");
    }
    for i in 0..n {
        for j in 0..i {
            assert_eq!(sym[i][j], sym[j][i], "inertia requires a symmetric matrix");
        }
    }
    let mut a = to_big_matrix(sym);
    let mut alive: Vec<usize> = (0..n).collect();
    let (mut pos, mut neg) = (0usize, 0usize);
    loop {
        if alive.is_empty() {
            break;
        }
        let pivot = alive.iter().copied().find(|&i| !a[i][i].is_zero());
        let i = match pivot {
            Some(i) => i,
            None => {
                // all diagonal entries vanish; look for q_ij != 0
                let mut found = None;
                'outer: for (ai, &i) in alive.iter().enumerate() {
                    for &j in &alive[ai + 1..] {
                        if !a[i][j].is_zero() {
                            found = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                match found {
                    None => break, // zero block; the rest is radical
                    Some((i, j)) => {
                        // symmetric add of row/col j into row/col i puts
                        // 2 q_ij on the diagonal
                        for k in 0..n {
                            let t = a[j][k].clone();
                            a[i][k] += t;
                        }
                        for row in a.iter_mut() {
                            let t = row[j].clone();
                            row[i] += t;
                        }
                        i
                    }
                }
            }
        };
        let d = a[i][i].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        alive.retain(|&k| k != i);
        // symmetric elimination of row/column i
        for &j in &alive {
            if a[j][i].is_zero() {
                continue;
            }
            let f = &a[j][i] / &d;
            for &k in &alive {
                let t = &f * &a[i][k];
                a[j][k] -= t;
            }
            a[j][i].set_zero();
            a[i][j].set_zero();
        }
    }
    (pos, neg, n - pos - neg)
}

/// Basis of the rational kernel of an integer matrix (not necessarily
/// symmetric), by row reduction.
pub fn kernel_basis(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    if m.is_empty() {
        return vec![];
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a = to_big_matrix(m);
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let d = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x /= d.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..cols {
                    let t = &f * &a[r][k];
                    a[i][k] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = vec![];
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Whether `v` and the integer vector `w` span the same line.
pub fn parallel_to_integral(v: &[BigRational], w: &[i64]) -> bool {
    if v.len() != w.len() {
        return false;
    }
    let wq: Vec<BigRational> = w.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    let Some(i) = v.iter().position(|x| !x.is_zero()) else {
        return wq.iter().all(Zero::is_zero);
    };
    if wq[i].is_zero() {
        return false;
    }
    let f = &wq[i] / &v[i];
    v.iter().zip(&wq).all(|(a, b)| a * &f == *b)
}

/// Exact feasibility of `sum_g a_g G_g = target` with all `a_g >= 0`,
/// decided by a phase-one simplex with Bland's rule.
pub fn nonneg_combination(generators: &[Vec<i64>], target: &[i64]) -> bool {
    let dim = target.len();
    let ng = generators.len();
    for g in generators {
        assert_eq!(g.len(), dim, "generator dimension mismatch");
    }
    if target.iter().all(|&t| t == 0) {
        return true; // the zero combination
    }
    if ng == 0 {
        return false;
    }
    // tableau: rows = dim constraints, columns = ng structural variables
    // plus dim artificials plus the rhs; minimize the sum of artificials.
    let big = |x: i64| BigRational::from_integer(x.into());
    let cols = ng + dim + 1;
    let mut t = vec![vec![BigRational::zero(); cols]; dim];
    for (r, row) in t.iter_mut().enumerate() {
        let sign = if target[r] < 0 { -1 } else { 1 };
        for (g, gen) in generators.iter().enumerate() {
            row[g] = big(sign * gen[r]);
        }
        row[ng + r] = BigRational::one();
        row[cols - 1] = big(sign * target[r]);
    }
    let mut basis: Vec<usize> = (ng..ng + dim).collect();
    // objective row for minimizing the artificial sum, expressed in terms of
    // the non-basic variables
    let mut obj = vec![BigRational::zero(); cols];
    for row in &t {
        for (c, v) in row.iter().enumerate() {
            obj[c] += v.clone();
        }
    }
    for a in ng..ng + dim {
        obj[a].set_zero();
    }
    loop {
        // Bland: entering variable = lowest index with positive reduced cost
        let Some(enter) = (0..cols - 1).find(|&c| !basis.contains(&c) && obj[c].is_positive())
        else {
            break;
        };
        // ratio test, ties broken by lowest basis variable index
        let mut leave: Option<(usize, BigRational)> = None;
        for (r, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[cols - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, lv)) => ratio < *lv || (ratio == *lv && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((lr, _)) = leave else {
            break; // unbounded direction cannot happen in phase one
        };
        // pivot
        let d = t[lr][enter].clone();
        for x in t[lr].iter_mut() {
            *x /= d.clone();
        }
        for r in 0..dim {
            if r != lr && !t[r][enter].is_zero() {
                let f = t[r][enter].clone();
                for c in 0..cols {
                    let x = &f * &t[lr][c];
                    t[r][c] -= x;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for c in 0..cols {
                let x = &f * &t[lr][c];
                obj[c] -= x;
            }
        }
        basis[lr] = enter;
    }
    // feasible iff every artificial left in the basis carries value zero
    basis
        .iter()
        .enumerate()
        .all(|(r, &b)| b < ng || t[r][cols - 1].is_zero())
}
