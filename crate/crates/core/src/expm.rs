//! Matrix exponential by scaling and squaring with Padé approximants
//! (Higham 2005, degrees 3/5/7/9/13).

use faer::{c64, Mat, MatRef};

use crate::linalg::{self, Factored, ONE};

const THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_230e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
    (13, 5.371_920_351_148_152e0),
];

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
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
const PADE13: [f64; 14] = [
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

/// `exp(A)` for a square complex matrix.
pub fn expm(a: MatRef<'_, c64>) -> Mat<c64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return Mat::zeros(0, 0);
    }
    let norm = linalg::norm_1(a);
    if norm == 0.0 {
        return linalg::identity(n);
    }
    for &(m, theta) in &THETA[..4] {
        if norm <= theta {
            let coeffs: &[f64] = match m {
                3 => &PADE3,
                5 => &PADE5,
                7 => &PADE7,
                _ => &PADE9,
            };
            return pade_low(a, coeffs);
        }
    }
    let theta13 = THETA[4].1;
    let s = (norm / theta13).log2().ceil().max(0.0) as i32;
    let scaled = linalg::scaled(&a.to_owned(), c64::new(2f64.powi(-s), 0.0));
    let mut r = pade13(scaled.as_ref());
    for _ in 0..s {
        r = linalg::mul(r.as_ref(), r.as_ref(), ONE);
    }
    r
}

fn rational(u: Mat<c64>, v: Mat<c64>) -> Mat<c64> {
    let p = &v + &u;
    let q = &v - &u;
    Factored::new(q.as_ref()).solve(p.as_ref())
}

fn pade_low(a: MatRef<'_, c64>, b: &[f64]) -> Mat<c64> {
    let n = a.nrows();
    let a2 = linalg::mul(a, a, ONE);
    // even powers A^0, A^2, A^4, ...
    let mut powers = vec![linalg::identity(n), a2.clone()];
    while powers.len() - 1 < (b.len() - 1) / 2 {
        let next = linalg::mul(powers.last().unwrap().as_ref(), a2.as_ref(), ONE);
        powers.push(next);
    }
    let mut u_inner = Mat::<c64>::zeros(n, n);
    let mut v = Mat::<c64>::zeros(n, n);
    for (j, &c) in b.iter().enumerate() {
        let p = &powers[j / 2];
        if j % 2 == 0 {
            v = linalg::axpy(&v, c64::new(c, 0.0), p);
        } else {
            u_inner = linalg::axpy(&u_inner, c64::new(c, 0.0), p);
        }
    }
    let u = linalg::mul(a, u_inner.as_ref(), ONE);
    rational(u, v)
}

fn pade13(a: MatRef<'_, c64>) -> Mat<c64> {
    let b = PADE13.map(|c| c64::new(c, 0.0));
    let n = a.nrows();
    let id = linalg::identity(n);
    let a2 = linalg::mul(a, a, ONE);
    let a4 = linalg::mul(a2.as_ref(), a2.as_ref(), ONE);
    let a6 = linalg::mul(a4.as_ref(), a2.as_ref(), ONE);
    let comb = |c6: c64, c4: c64, c2: c64, c0: Option<c64>| {
        Mat::from_fn(n, n, |i, j| {
            let mut s = c6 * a6[(i, j)] + c4 * a4[(i, j)] + c2 * a2[(i, j)];
            if let Some(c0) = c0 {
                s += c0 * id[(i, j)];
            }
            s
        })
    };
    let u_hi = comb(b[13], b[11], b[9], None);
    let u_lo = comb(b[7], b[5], b[3], Some(b[1]));
    let u_inner = &linalg::mul(a6.as_ref(), u_hi.as_ref(), ONE) + &u_lo;
    let u = linalg::mul(a, u_inner.as_ref(), ONE);
    let v_hi = comb(b[12], b[10], b[8], None);
    let v_lo = comb(b[6], b[4], b[2], Some(b[0]));
    let v = &linalg::mul(a6.as_ref(), v_hi.as_ref(), ONE) + &v_lo;
    rational(u, v)
}
