//! Small dense matrices over a polynomial ring.

use super::poly::{Ambient, MPoly};
use super::scalar::Field;

/// Row-major square matrix of polynomials.
pub type PolyMatrix<F> = Vec<Vec<MPoly<F>>>;

pub fn identity<F: Field>(ambient: &Ambient, n: usize) -> PolyMatrix<F> {
    (0..n).map(|i| (0..n).map(|j| if i == j { MPoly::one(ambient) } else { MPoly::zero(ambient) }).collect()).collect()
}

fn minor<F: Field>(m: &PolyMatrix<F>, skip_row: usize, skip_col: usize) -> PolyMatrix<F> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != skip_col).map(|(_, e)| e.clone()).collect())
        .collect()
}

/// Determinant by cofactor expansion along the first row. Sizes here never
/// exceed five.
pub fn det<F: Field>(m: &PolyMatrix<F>, ambient: &Ambient) -> MPoly<F> {
    let n = m.len();
    match n {
        0 => MPoly::one(ambient),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = MPoly::zero(ambient);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let term = &m[0][j] * &det(&minor(m, 0, j), ambient);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Classical adjugate: `adj(m) * m = m * adj(m) = det(m) * I`.
pub fn adjugate<F: Field>(m: &PolyMatrix<F>, ambient: &Ambient) -> PolyMatrix<F> {
    let n = m.len();
    if n == 1 {
        return vec![vec![MPoly::one(ambient)]];
    }
    let mut adj = vec![vec![MPoly::zero(ambient); n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = det(&minor(m, i, j), ambient);
            adj[j][i] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    adj
}

pub fn mat_vec<F: Field>(m: &PolyMatrix<F>, v: &[MPoly<F>], ambient: &Ambient) -> Vec<MPoly<F>> {
    m.iter().map(|row| row.iter().zip(v).fold(MPoly::zero(ambient), |acc, (a, b)| &acc + &(a * b))).collect()
}

pub fn eval_matrix<F: Field>(m: &PolyMatrix<F>, point: &[F]) -> Vec<Vec<F>> {
    m.iter().map(|row| row.iter().map(|e| e.eval(point)).collect()).collect()
}

/// Sum of all `k x k` principal minors, i.e. the coefficient of `t^k` in
/// `det(I + t M)`.
pub fn principal_minor_sum<F: Field>(m: &PolyMatrix<F>, k: usize, ambient: &Ambient) -> MPoly<F> {
    let n = m.len();
    if k == 0 {
        return MPoly::one(ambient);
    }
    let mut acc = MPoly::zero(ambient);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let sub: PolyMatrix<F> = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect();
        acc = &acc + &det(&sub, ambient);
        // next k-subset in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return acc;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::Poly;

    #[test]
    fn adjugate_inverts_up_to_determinant() {
        let a = Ambient::new(&["z", "w"]);
        let p = |s: &str| -> Poly { parse_poly(s, &a).unwrap() };
        let m = vec![vec![p("z"), p("z^2"), p("1")], vec![p("w"), p("-w^2"), p("z")], vec![p("2"), p("w"), p("z*w")]];
        let d = det(&m, &a);
        let adj = adjugate(&m, &a);
        for i in 0..3 {
            for j in 0..3 {
                let e = (0..3).fold(Poly::zero(&a), |acc, k| &acc + &(&adj[i][k] * &m[k][j]));
                assert_eq!(e, if i == j { d.clone() } else { Poly::zero(&a) });
            }
        }
    }

    #[test]
    fn principal_minors_of_diagonal() {
        let a = Ambient::new(&["a", "b", "c"]);
        let p = |s: &str| -> Poly { parse_poly(s, &a).unwrap() };
        let z = Poly::zero(&a);
        let m =
            vec![vec![p("a"), z.clone(), z.clone()], vec![z.clone(), p("b"), z.clone()], vec![z.clone(), z, p("c")]];
        assert_eq!(principal_minor_sum(&m, 1, &a), p("a+b+c"));
        assert_eq!(principal_minor_sum(&m, 2, &a), p("a*b+a*c+b*c"));
        assert_eq!(principal_minor_sum(&m, 3, &a), p("a*b*c"));
    }
}
