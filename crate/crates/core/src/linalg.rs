//! Exact Gaussian elimination over [`TowerScalar`].

use crate::scalar::TowerScalar;

pub type Vector = Vec<TowerScalar>;

pub fn dot(a: &[TowerScalar], b: &[TowerScalar]) -> TowerScalar {
    a.iter()
        .zip(b)
        .fold(TowerScalar::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

pub fn scale(v: &[TowerScalar], s: &TowerScalar) -> Vector {
    v.iter().map(|x| x.mul(s)).collect()
}

pub fn add(a: &[TowerScalar], b: &[TowerScalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn sub(a: &[TowerScalar], b: &[TowerScalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn is_zero(v: &[TowerScalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vector]) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.to_vec();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        m[r] = scale(&m[r], &inv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row = scale(&m[r], &f);
                m[i] = sub(&m[i], &row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vector]) -> usize {
    rref(rows).0.len()
}

/// Basis of `{v : row · v = 0 for every row}` in `ncols` dimensions.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    if rows.is_empty() {
        return (0..ncols).map(|i| unit(ncols, i)).collect();
    }
    let (m, pivots) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![TowerScalar::zero(); ncols];
            v[f] = TowerScalar::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = row[f].neg();
            }
            v
        })
        .collect()
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![TowerScalar::zero(); n];
    v[i] = TowerScalar::one();
    v
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vector], v: &[TowerScalar]) -> bool {
    if is_zero(v) {
        return true;
    }
    let mut rows = basis.to_vec();
    let r = rank(&rows);
    rows.push(v.to_vec());
    rank(&rows) == r
}

/// A solution of `A y = b`, if one exists.
pub fn solve(a: &[Vector], b: &[TowerScalar]) -> Option<Vector> {
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let aug: Vec<Vector> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut y = vec![TowerScalar::zero(); ncols];
    for (row, &p) in m.iter().zip(&pivots) {
        y[p] = row[ncols].clone();
    }
    Some(y)
}

/// Determinant by elimination.
pub fn det(a: &[Vector]) -> TowerScalar {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = TowerScalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return TowerScalar::zero();
        };
        if p != c {
            m.swap(p, c);
            d = d.neg();
        }
        d = d.mul(&m[c][c]);
        let inv = m[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = m[i][c].mul(&inv);
                let row = scale(&m[c], &f);
                m[i] = sub(&m[i], &row);
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| TowerScalar::from_int(x)).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let rows = vec![v(&[1, -1, 0]), v(&[0, 1, -1]), v(&[1, 0, -1])];
        assert_eq!(rank(&rows), 2);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns, vec![v(&[1, 1, 1])]);
    }

    #[test]
    fn solving_and_determinants() {
        let a = vec![v(&[2, 1]), v(&[1, 3])];
        assert_eq!(det(&a), TowerScalar::from_int(5));
        let y = solve(&a, &v(&[3, 4])).unwrap();
        assert_eq!(y, v(&[1, 1]));
        let sing = vec![v(&[1, 1]), v(&[2, 2])];
        assert!(solve(&sing, &v(&[1, 3])).is_none());
        assert!(in_span(&[v(&[1, 1, 0])], &v(&[2, 2, 0])));
        assert!(!in_span(&[v(&[1, 1, 0])], &v(&[2, 1, 0])));
    }
}
