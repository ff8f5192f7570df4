//! One-sided (Hestenes) Jacobi SVD for 4×4 complex matrices.

use crate::algebra::C64;

pub type Matrix4 = [[C64; 4]; 4];

pub(crate) struct Svd {
    /// Descending.
    pub singular_values: [f64; 4],
    /// Right singular vectors as columns, ordered like `singular_values`.
    pub v: Matrix4,
}

const MAX_SWEEPS: usize = 64;

fn identity() -> Matrix4 {
    let mut m = [[C64::new(0.0, 0.0); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    m
}

/// Applies the 2×2 unitary `[[c, s], [−s, c]]` preceded by a phase on column
/// `q` to columns `p`, `q` of `m`.
fn rotate(m: &mut Matrix4, p: usize, q: usize, phase: C64, cs: f64, sn: f64) {
    for row in m.iter_mut() {
        let a = row[p];
        let b = row[q] * phase;
        row[p] = a * cs - b * sn;
        row[q] = a * sn + b * cs;
    }
}

pub(crate) fn jacobi_svd(a: &Matrix4) -> Svd {
    let mut u = *a;
    let mut v = identity();
    let scale = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
    if scale == 0.0 {
        return Svd { singular_values: [0.0; 4], v };
    }

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..4 {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for row in u.iter() {
                    alpha += row[p].norm_sqr();
                    beta += row[q].norm_sqr();
                    gamma += row[p].conj() * row[q];
                }
                let g = gamma.norm();
                if g <= f64::EPSILON * libm::sqrt(alpha * beta) || g <= 1e-300 * scale {
                    continue;
                }
                rotated = true;
                // Bring the Gram off-diagonal to the real axis, then a real rotation.
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let cs = 1.0 / libm::sqrt(1.0 + t * t);
                let sn = cs * t;
                rotate(&mut u, p, q, phase, cs, sn);
                rotate(&mut v, p, q, phase, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma = [0.0; 4];
    for (j, s) in sigma.iter_mut().enumerate() {
        *s = libm::sqrt(u.iter().map(|row| row[j].norm_sqr()).sum::<f64>());
    }
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));

    let mut singular_values = [0.0; 4];
    let mut sorted_v = [[C64::new(0.0, 0.0); 4]; 4];
    for (k, &j) in order.iter().enumerate() {
        singular_values[k] = sigma[j];
        for r in 0..4 {
            sorted_v[r][k] = v[r][j];
        }
    }
    Svd { singular_values, v: sorted_v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
        let mut out = [[C64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    fn random_matrix(rng: &mut ChaCha8Rng) -> Matrix4 {
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        for row in m.iter_mut() {
            for z in row.iter_mut() {
                *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        m
    }

    #[test]
    fn v_is_unitary_and_av_has_orthogonal_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = random_matrix(&mut rng);
            let svd = jacobi_svd(&a);
            let av = mul(&a, &svd.v);
            for i in 0..4 {
                for j in 0..4 {
                    let vv: C64 = (0..4).map(|r| svd.v[r][i].conj() * svd.v[r][j]).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((vv - expect).norm() < 1e-13);
                    let g: C64 = (0..4).map(|r| av[r][i].conj() * av[r][j]).sum();
                    let expect = if i == j { svd.singular_values[i].powi(2) } else { 0.0 };
                    assert!((g - expect).norm() < 1e-12, "{g} vs {expect}");
                }
            }
            assert!(svd.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rank_deficient_matrix_has_zero_singular_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut a = random_matrix(&mut rng);
        // last column = 2·first − i·second
        for row in a.iter_mut() {
            row[3] = row[0] * 2.0 - row[1] * C64::new(0.0, 1.0);
        }
        let svd = jacobi_svd(&a);
        assert!(svd.singular_values[3] < 1e-14);
        assert!(svd.singular_values[2] > 1e-3);
        // the null vector really is one
        let x: [C64; 4] = core::array::from_fn(|r| svd.v[r][3]);
        for row in a.iter() {
            let y: C64 = row.iter().zip(x.iter()).map(|(p, q)| p * q).sum();
            assert!(y.norm() < 1e-14);
        }
    }

    #[test]
    fn zero_matrix() {
        let svd = jacobi_svd(&[[C64::new(0.0, 0.0); 4]; 4]);
        assert_eq!(svd.singular_values, [0.0; 4]);
    }
}
