use ncforce::algebra::levi_civita;
use ncforce::green::{curl_electric_green, electric_green, magnetic_green};
use ncforce::{ComplexTensor3, RealTensor3, Vector3};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `(curl G)_{ij} = eps_{jkl} d_k G_{il}` by central differences.
fn fd_curl(k: f64, r: Vector3, h: f64) -> ComplexTensor3 {
    let mut grad = [[[Complex64::new(0.0, 0.0); 3]; 3]; 3];
    for (d, e) in [Vector3::X, Vector3::Y, Vector3::Z].into_iter().enumerate() {
        let p = electric_green(k, r + e * h).unwrap();
        let m = electric_green(k, r - e * h).unwrap();
        for i in 0..3 {
            for l in 0..3 {
                grad[d][i][l] = (p.0[i][l] - m.0[i][l]) / (2.0 * h);
            }
        }
    }
    let mut out = ComplexTensor3::zero();
    for i in 0..3 {
        for j in 0..3 {
            for kk in 0..3 {
                for l in 0..3 {
                    out.0[i][j] += levi_civita(j, kk, l) * grad[kk][i][l];
                }
            }
        }
    }
    out
}

#[test]
fn curl_identity_by_finite_differences() {
    let k = 1.7;
    let dir = Vector3::new(0.36, -0.48, 0.8);
    for kr in [1.0, 3.0, 10.0] {
        let r = dir.scale(kr / k);
        let an = curl_electric_green(k, r).unwrap();
        let fd = fd_curl(k, r, 1e-5 * r.norm());
        assert!(fd.sub(&an).max_abs() <= 1e-6 * an.max_abs(), "kr = {kr}");
    }
}

#[test]
fn curl_is_i_k_magnetic_scalar_times_levi_civita() {
    let k = 0.8;
    let r = Vector3::new(1.0, 2.0, -2.0);
    let an = curl_electric_green(k, r).unwrap();
    let s = Complex64::new(0.0, k) * magnetic_green(k, r.norm()).unwrap();
    let want = ComplexTensor3::from_real(&RealTensor3::levi_civita_dot(r.scale(1.0 / r.norm())), s);
    assert!(an.sub(&want).max_abs() <= 1e-15 * want.max_abs());
}

#[test]
fn imaginary_part_approaches_isotropic_limit_quadratically() {
    let k = 2.0;
    let dir = Vector3::new(0.0, 0.6, 0.8);
    let limit = RealTensor3::identity().scale(-k / (6.0 * PI));
    let err = |x: f64| {
        let g = electric_green(k, dir.scale(x / k)).unwrap().im();
        g.axpy(-1.0, &limit).max_abs() / limit.max_abs()
    };
    assert!(err(1e-3) < 1e-6);
    let xs: Vec<f64> = (0..9).map(|i| 10f64.powf(-4.0 + 0.25 * i as f64)).collect();
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs.iter().map(|&x| (x.ln(), err(x).ln())).unzip();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let slope = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
}
