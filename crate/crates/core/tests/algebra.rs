use num_complex::Complex64;
use proptest::prelude::*;

use nonclassical::algebra::{
    binomial, double_factorial, normal_order, pochhammer_half, quadrature_power_expansion, ratio_to_f64, stirling2,
    Letter,
};

/// Counts set partitions of `{0..e}` into `f` blocks via restricted growth strings.
fn partitions(e: usize, f: usize) -> u64 {
    fn walk(pos: usize, e: usize, blocks: usize, f: usize) -> u64 {
        if pos == e {
            return (blocks == f) as u64;
        }
        (0..=blocks.min(f.saturating_sub(1)))
            .map(|b| walk(pos + 1, e, blocks.max(b + 1), f))
            .sum()
    }
    if e == 0 {
        return (f == 0) as u64;
    }
    walk(0, e, 0, f)
}

#[test]
fn stirling_counts_partitions() {
    assert_eq!(stirling2(7, 3).unwrap(), 301);
    for e in 0..=9 {
        for f in 0..=e {
            assert_eq!(stirling2(e, f).unwrap() as u64, partitions(e, f), "S({e},{f})");
        }
    }
}

#[test]
fn stirling_converts_powers_to_falling_factorials() {
    // x^e = Σ_f S(e,f) x(x-1)…(x-f+1)
    for x in 0u128..8 {
        for e in 0..10 {
            let rhs: u128 = (0..=e)
                .map(|f| stirling2(e, f).unwrap() * (0..f as u128).map(|i| x.saturating_sub(i)).product::<u128>())
                .sum();
            assert_eq!(x.pow(e as u32), rhs, "x={x} e={e}");
        }
    }
}

#[test]
fn pochhammer_half_is_double_factorial_ratio() {
    // (1/2)(3/2)…(l/2 - 1/2), multiplied out in floats
    for l in (2..=16).step_by(2) {
        let expected: f64 = (0..l / 2).map(|i| 0.5 + i as f64).product();
        assert!((ratio_to_f64(&pochhammer_half(l).unwrap()) - expected).abs() < 1e-12 * expected);
    }
    assert!(pochhammer_half(0).is_err());
    assert!(pochhammer_half(3).is_err());
    assert_eq!(binomial(10, 3).unwrap(), 120);
}

const DIM: usize = 28;
type Mat = Vec<Vec<f64>>;

fn annihilate() -> Mat {
    let mut a = vec![vec![0.0; DIM]; DIM];
    for n in 1..DIM {
        a[n - 1][n] = (n as f64).sqrt();
    }
    a
}

fn transpose(m: &Mat) -> Mat {
    (0..DIM).map(|i| (0..DIM).map(|j| m[j][i]).collect()).collect()
}

fn mul(x: &Mat, y: &Mat) -> Mat {
    (0..DIM)
        .map(|i| (0..DIM).map(|j| (0..DIM).map(|k| x[i][k] * y[k][j]).sum()).collect())
        .collect()
}

fn identity() -> Mat {
    (0..DIM).map(|i| (0..DIM).map(|j| (i == j) as u8 as f64).collect()).collect()
}

fn power(m: &Mat, k: usize) -> Mat {
    (0..k).fold(identity(), |acc, _| mul(&acc, m))
}

/// Compares on the low block where truncation of `a†` cannot reach.
fn assert_close_low_block(x: &Mat, y: &Mat, depth: usize) {
    for i in 0..DIM - depth {
        for j in 0..DIM - depth {
            assert!((x[i][j] - y[i][j]).abs() < 1e-8 * (1.0 + x[i][j].abs()), "({i},{j}): {} vs {}", x[i][j], y[i][j]);
        }
    }
}

fn word_matrix(word: &[Letter]) -> Mat {
    let a = annihilate();
    let ad = transpose(&a);
    word.iter().fold(identity(), |acc, l| match l {
        Letter::Annihilate => mul(&acc, &a),
        Letter::Create => mul(&acc, &ad),
    })
}

fn polynomial_matrix(word: &[Letter]) -> Mat {
    let a = annihilate();
    let ad = transpose(&a);
    let mut out = vec![vec![0.0; DIM]; DIM];
    for ((m, n), c) in normal_order(word).unwrap().terms() {
        assert_eq!(c.im, 0.0);
        let t = mul(&power(&ad, m), &power(&a, n));
        for i in 0..DIM {
            for j in 0..DIM {
                out[i][j] += c.re * t[i][j];
            }
        }
    }
    out
}

#[test]
fn number_operator_square() {
    // (a†a)² = a†² a² + a†a
    let p = normal_order(&Letter::parse_word("a† a a† a").unwrap()).unwrap();
    assert_eq!(p.len(), 2);
    assert_eq!(p.coeff(2, 2), Complex64::new(1.0, 0.0));
    assert_eq!(p.coeff(1, 1), Complex64::new(1.0, 0.0));
}

#[test]
fn vacuum_quadrature_fourth_moment() {
    // ⟨0|X⁴|0⟩ = 3/4: only the constant term survives on vacuum
    let p = quadrature_power_expansion(4).unwrap();
    let v = p
        .expectation(|m, n| Ok(Complex64::new(((m, n) == (0, 0)) as u8 as f64, 0.0)))
        .unwrap();
    assert!((v.re - 0.75).abs() < 1e-15);
}

#[test]
fn coherent_quadrature_moments_are_gaussian() {
    // |α⟩ with real α: X ~ N(√2 α, 1/2)
    let alpha = 0.7f64;
    let mu = std::f64::consts::SQRT_2 * alpha;
    for k in 0..=8 {
        let p = quadrature_power_expansion(k).unwrap();
        let v = p.expectation(|m, n| Ok(Complex64::new(alpha.powi((m + n) as i32), 0.0))).unwrap();
        // E[(μ + Z/√2)^k], Z standard normal
        let expected: f64 = (0..=k)
            .step_by(2)
            .map(|j| {
                let dfac = if j == 0 { 1.0 } else { double_factorial(j as i64 - 1).unwrap() as f64 };
                binomial(k, j).unwrap() as f64 * mu.powi((k - j) as i32) * dfac / 2f64.powi(j as i32 / 2)
            })
            .sum();
        assert!((v.re - expected).abs() < 1e-12 * expected.max(1.0), "k={k}");
    }
}

#[test]
fn quadrature_expansion_matches_matrix_power() {
    let a = annihilate();
    let ad = transpose(&a);
    let x: Mat = (0..DIM)
        .map(|i| (0..DIM).map(|j| (a[i][j] + ad[i][j]) * std::f64::consts::FRAC_1_SQRT_2).collect())
        .collect();
    for k in 0..=6 {
        let xk = power(&x, k);
        let ad_ = transpose(&a);
        let mut poly = vec![vec![0.0; DIM]; DIM];
        for ((m, n), c) in quadrature_power_expansion(k).unwrap().terms() {
            let t = mul(&power(&ad_, m), &power(&a, n));
            for i in 0..DIM {
                for j in 0..DIM {
                    poly[i][j] += c.re * t[i][j];
                }
            }
        }
        assert_close_low_block(&xk, &poly, k + 1);
    }
}

proptest! {
    #[test]
    fn normal_order_matches_matrices(bits in proptest::collection::vec(any::<bool>(), 0..7)) {
        let word: Vec<Letter> = bits.iter().map(|&b| if b { Letter::Create } else { Letter::Annihilate }).collect();
        assert_close_low_block(&word_matrix(&word), &polynomial_matrix(&word), word.len() + 1);
    }

    #[test]
    fn commutator_is_identity_in_normal_form(prefix in proptest::collection::vec(any::<bool>(), 0..5)) {
        // w a a† - w a† a = w
        let word: Vec<Letter> = prefix.iter().map(|&b| if b { Letter::Create } else { Letter::Annihilate }).collect();
        let mut left = word.clone();
        left.extend([Letter::Annihilate, Letter::Create]);
        let mut right = word.clone();
        right.extend([Letter::Create, Letter::Annihilate]);
        let diff = normal_order(&left).unwrap().add(&normal_order(&right).unwrap().scale(Complex64::new(-1.0, 0.0)));
        prop_assert_eq!(diff, normal_order(&word).unwrap());
    }
}
