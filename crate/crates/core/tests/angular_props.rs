use proptest::prelude::*;
use rydpol_core::angular::*;

fn h(t: i32) -> HalfInt {
    HalfInt::from_twice(t)
}

/// Three magnitudes (doubled) satisfying the triangle rule with integer sum,
/// plus projections summing to zero.
fn three_j_strategy() -> impl Strategy<Value = ThreeJ> {
    (0i32..=6, 0i32..=6, 0i32..=12)
        .prop_filter("triangle", |&(a, b, c)| c >= (a - b).abs() && c <= a + b && (a + b + c) % 2 == 0)
        .prop_flat_map(|(a, b, c)| {
            let ma = (0..=a).prop_map(move |k| -a + 2 * k);
            let mb = (0..=b).prop_map(move |k| -b + 2 * k);
            (Just((a, b, c)), ma, mb)
        })
        .prop_filter("m3 in range", |&((_, _, c), ma, mb)| (ma + mb).abs() <= c)
        .prop_map(|((a, b, c), ma, mb)| ThreeJ::new(h(a), h(b), h(c), h(ma), h(mb), h(-ma - mb)))
}

fn six_j_strategy() -> impl Strategy<Value = SixJ> {
    prop::array::uniform6(0i32..=6).prop_map(|v| SixJ::new(h(v[0]), h(v[1]), h(v[2]), h(v[3]), h(v[4]), h(v[5])))
}

fn sign_of_sum(t: &ThreeJ) -> f64 {
    let twice: i32 = t.j.iter().map(|j| j.twice()).sum();
    if (twice / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn six_j_valid(s: &SixJ) -> bool {
    // Each triad must have an integer sum for the symbol to be defined.
    let [a, b, c] = s.upper;
    let [d, e, f] = s.lower;
    [(a, b, c), (a, e, f), (d, b, f), (d, e, c)].iter().all(|(x, y, z)| (x.twice() + y.twice() + z.twice()) % 2 == 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn three_j_column_symmetries(t in three_j_strategy()) {
        let v: f64 = t.value().unwrap();
        prop_assert!(v.abs() <= 1.0 + 1e-12);
        let sgn = sign_of_sum(&t);
        for perm in [[1, 2, 0], [2, 0, 1]] {
            let w: f64 = t.permuted(perm).value().unwrap();
            prop_assert!((w - v).abs() < 1e-12);
        }
        for perm in [[1, 0, 2], [0, 2, 1], [2, 1, 0]] {
            let w: f64 = t.permuted(perm).value().unwrap();
            prop_assert!((w - sgn * v).abs() < 1e-12);
        }
        let w: f64 = t.with_negated_m().value().unwrap();
        prop_assert!((w - sgn * v).abs() < 1e-12);
    }

    #[test]
    fn six_j_symmetries(s in six_j_strategy().prop_filter("integer triads", six_j_valid)) {
        let v: f64 = s.value().unwrap();
        for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let w: f64 = s.permuted_columns(perm).value().unwrap();
            prop_assert!((w - v).abs() < 1e-12);
        }
        for keep in 0..3 {
            let w: f64 = s.flipped_except(keep).value().unwrap();
            prop_assert!((w - v).abs() < 1e-12);
        }
    }

    #[test]
    fn three_j_orthogonality(j1 in 0i32..=4, j2 in 0i32..=4, k3 in 0i32..=8, k3p in 0i32..=8, m3i in 0i32..=8) {
        let lo = (j1 - j2).abs();
        let hi = j1 + j2;
        let j3 = lo + 2 * (k3 % ((hi - lo) / 2 + 1));
        let j3p = lo + 2 * (k3p % ((hi - lo) / 2 + 1));
        let m3 = -j3 + 2 * (m3i % (j3 + 1));
        let mut sum = 0.0;
        for m1 in (-j1..=j1).step_by(2) {
            for m2 in (-j2..=j2).step_by(2) {
                if m1 + m2 != m3 || m3.abs() > j3p {
                    continue;
                }
                let a: f64 = wigner3j(h(j1), h(j2), h(j3), h(m1), h(m2), h(-m3)).unwrap();
                let b: f64 = wigner3j(h(j1), h(j2), h(j3p), h(m1), h(m2), h(-m3)).unwrap();
                sum += (j3 + 1) as f64 * a * b;
            }
        }
        let want = if j3 == j3p { 1.0 } else { 0.0 };
        prop_assert!((sum - want).abs() < 1e-12, "sum={sum} j3={j3} j3'={j3p}");
    }
}

#[test]
fn branch_closed_forms_match_generic_evaluation() {
    for l in 0..=5u32 {
        for p in [1, 0, -1] {
            if p == -1 && l == 0 {
                continue;
            }
            let j = if p >= 0 { h(2 * l as i32 + 1) } else { h(2 * l as i32 - 1) };
            let (r1, r2) = branch_levels(j, p).unwrap();
            for m in r1.j.projections() {
                for mp in r2.j.projections() {
                    for q in -1..=1 {
                        let a: f64 = dipole_angular_factor(j, p, m, mp, q).unwrap();
                        let b: f64 = dipole_element(r2, mp, r1, m, q).unwrap();
                        assert!((a - b).abs() < 1e-12, "L={l} p={p} m={m} m'={mp} q={q}: {a} vs {b}");
                    }
                }
            }
        }
    }
}

#[test]
fn angular_factor_has_no_radial_input() {
    // Same call, same bits: the factor is a pure function of the angular labels.
    let a: f64 = dipole_angular_factor(h(3), 1, h(1), h(3), 1).unwrap();
    let b: f64 = dipole_angular_factor(h(3), 1, h(1), h(3), 1).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
}
