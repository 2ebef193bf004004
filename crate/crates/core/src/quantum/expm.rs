//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! (Higham 2005 degree selection).

use super::{CMatrix, C64};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn norm1(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn solve_pade(u: CMatrix, v: CMatrix) -> CMatrix {
    let p = &v + &u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular inside the degree thresholds")
}

fn pade_low(a: &CMatrix, b: &[f64]) -> CMatrix {
    let n = a.nrows();
    let ident = CMatrix::identity(n, n);
    let a2 = a * a;
    // powers of A² up to the required degree
    let mut even_pows = vec![ident.clone()];
    let m = b.len() - 1;
    for _ in 1..=m / 2 {
        let next = even_pows.last().unwrap() * &a2;
        even_pows.push(next);
    }
    let mut u_inner = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    for (k, pow) in even_pows.iter().enumerate() {
        if 2 * k < m {
            u_inner += pow * re(b[2 * k + 1]);
        }
        if 2 * k <= m {
            v += pow * re(b[2 * k]);
        }
    }
    solve_pade(a * u_inner, v)
}

fn pade13(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let ident = CMatrix::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |i: usize| re(B13[i]);
    let u_hi = &a6 * b(13) + &a4 * b(11) + &a2 * b(9);
    let u = a * (&a6 * u_hi + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &ident * b(1));
    let v_hi = &a6 * b(12) + &a4 * b(10) + &a2 * b(8);
    let v = &a6 * v_hi + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &ident * b(0);
    solve_pade(u, v)
}

/// exp(A) for a square complex matrix.
pub fn expm(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "expm needs a square matrix");
    let norm = norm1(a);
    if norm == 0.0 {
        return CMatrix::identity(a.nrows(), a.ncols());
    }
    for &(degree, theta) in &THETA {
        if norm <= theta {
            return match degree {
                3 => pade_low(a, &B3),
                5 => pade_low(a, &B5),
                7 => pade_low(a, &B7),
                _ => pade_low(a, &B9),
            };
        }
    }
    let s = ((norm / THETA_13).log2().ceil()).max(0.0) as i32;
    let scaled = a * re(0.5_f64.powi(s));
    let mut r = pade13(&scaled);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor(a: &CMatrix, terms: usize) -> CMatrix {
        let n = a.nrows();
        let mut sum = CMatrix::identity(n, n);
        let mut term = CMatrix::identity(n, n);
        for k in 1..terms {
            term = &term * a * re(1.0 / k as f64);
            sum += &term;
        }
        sum
    }

    #[test]
    fn zero_matrix_gives_identity() {
        let z = CMatrix::zeros(3, 3);
        assert_eq!(expm(&z), CMatrix::identity(3, 3));
    }

    #[test]
    fn rotation_generator() {
        // exp(θ [[0,-1],[1,0]]) = [[cos,-sin],[sin,cos]]
        let theta = 2.3;
        let a = CMatrix::from_row_slice(2, 2, &[re(0.0), re(-theta), re(theta), re(0.0)]);
        let e = expm(&a);
        assert!((e[(0, 0)].re - theta.cos()).abs() < 1e-14);
        assert!((e[(1, 0)].re - theta.sin()).abs() < 1e-14);
    }

    #[test]
    fn matches_taylor_across_degree_thresholds() {
        for scale in [1e-3, 0.1, 0.5, 1.5, 4.0, 20.0] {
            let a = CMatrix::from_fn(4, 4, |i, j| {
                C64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0)
                    * re(scale / 4.0)
            });
            // Taylor on a scaled-down argument, then square.
            let s = 12;
            let small = &a * re(0.5_f64.powi(s));
            let mut t = taylor(&small, 20);
            for _ in 0..s {
                t = &t * &t;
            }
            let e = expm(&a);
            let err = (&e - &t).iter().fold(0.0_f64, |m, z| m.max(z.norm()));
            let mag = e.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
            assert!(err / mag < 1e-11, "scale {scale}: rel err {}", err / mag);
        }
    }
}
