//! Cross-module consistency on 2×3×3 tensors, checked against an
//! independent classical oracle.
//!
//! A tensor with two 3×3 slices `A`, `B` determines the binary cubic
//! `det(xA + yB)`; the discriminant of that cubic is a degree-12 polynomial
//! in the entries that is invariant under the group action, and this shape
//! has a one-dimensional space of degree-12 invariants. Consequences tested
//! here, all in exact arithmetic where it matters:
//!
//! * membership verdicts from scaling match "discriminant = 0";
//! * every sampled degree-12 spanning invariant is proportional to the
//!   discriminant, with a ratio that depends only on the permutation data;
//! * on tensors with vanishing discriminant every sampled invariant is
//!   exactly zero.

use nullcone_core::invariants::{schur_weyl_eval_exact, SpanningInvariant};
use nullcone_core::scaling::scale;
use nullcone_core::{RatComplex, Tensor};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Entries of the two slices as i64, row-major: `slices[s][3*i + j]`.
fn slices(x: &Tensor) -> [[i64; 9]; 2] {
    let exact = x.exact_entries().expect("integral test tensors");
    let mut out = [[0i64; 9]; 2];
    for s in 0..2 {
        for k in 0..9 {
            let v = &exact[s * 9 + k];
            assert!(v.im.is_zero(), "test tensors are real");
            assert!(v.re.is_integer());
            out[s][k] = i64::try_from(v.re.to_integer()).expect("small entries");
        }
    }
    out
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Coefficients c0..c3 of det(x·A + y·B) = Σ c_k x^{3−k} y^k, computed by
/// expanding over the 8 ways of picking each row from A or B.
fn pencil_coefficients(x: &Tensor) -> [i64; 4] {
    let sl = slices(x);
    let mut c = [0i64; 4];
    for pick in 0..8u32 {
        let mut m = [[0i64; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            let s = (pick >> i & 1) as usize;
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = sl[s][3 * i + j];
            }
        }
        c[pick.count_ones() as usize] += det3(&m);
    }
    c
}

/// Discriminant of the binary cubic with coefficients c0..c3.
fn cubic_discriminant(c: &[i64; 4]) -> BigInt {
    let [c0, c1, c2, c3] = c.map(BigInt::from);
    &c1 * &c1 * &c2 * &c2 - 4 * &c0 * &c2 * &c2 * &c2 - 4 * &c1 * &c1 * &c1 * &c3
        + 18 * &c0 * &c1 * &c2 * &c3
        - 27 * &c0 * &c0 * &c3 * &c3
}

fn random_tensor(rng: &mut ChaCha8Rng) -> Tensor {
    let mut x = Tensor::zeros(&[1, 2, 3, 3]).unwrap();
    for s in 0..2 {
        for i in 0..3 {
            for j in 0..3 {
                x.set_int(&[0, s, i, j], rng.gen_range(-3..=3), 0).unwrap();
            }
        }
    }
    x
}

fn random_invariant(rng: &mut ChaCha8Rng) -> SpanningInvariant {
    let m = 12;
    let perms: Vec<Vec<usize>> = (0..3)
        .map(|_| {
            let mut p: Vec<usize> = (0..m).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    SpanningInvariant {
        m,
        perms,
        idx: vec![0; m],
    }
}

fn eval(x: &Tensor, inv: &SpanningInvariant) -> RatComplex {
    schur_weyl_eval_exact(x, inv.m, &inv.perms, &inv.idx).expect("exact entries")
}

#[test]
fn scaling_verdicts_match_the_pencil_discriminant() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0C0C01);
    let mut zero_disc = 0;
    for _ in 0..40 {
        let x = random_tensor(&mut rng);
        if x.is_zero() {
            continue;
        }
        let disc = cubic_discriminant(&pencil_coefficients(&x));
        if disc.is_zero() {
            zero_disc += 1;
        }
        let member = scale(&x, 1e-2, None).unwrap().in_null_cone();
        assert_eq!(
            member,
            disc.is_zero(),
            "scaling verdict disagreed with the discriminant oracle"
        );
    }
    // Constructed members: pencils xA + yB that stay singular.
    for k in 0..10 {
        let mut x = random_tensor(&mut rng);
        match k % 3 {
            0 => {
                // Second slice equals the first: det(xA + yA) = (x+y)³ det A
                // has a triple root.
                let sl = slices(&x);
                for i in 0..3 {
                    for j in 0..3 {
                        x.set_int(&[0, 1, i, j], sl[0][3 * i + j], 0).unwrap();
                    }
                }
            }
            1 => {
                // Both slices share a zero column, so every pencil member
                // is singular.
                for s in 0..2 {
                    for i in 0..3 {
                        x.set_int(&[0, s, i, 0], 0, 0).unwrap();
                    }
                }
            }
            _ => {
                // Zero second slice: det(xA) = x³ det A.
                for i in 0..3 {
                    for j in 0..3 {
                        x.set_int(&[0, 1, i, j], 0, 0).unwrap();
                    }
                }
            }
        }
        if x.is_zero() {
            continue;
        }
        let disc = cubic_discriminant(&pencil_coefficients(&x));
        assert!(disc.is_zero(), "construction {k} should have zero discriminant");
        assert!(
            scale(&x, 1e-2, None).unwrap().in_null_cone(),
            "zero-discriminant tensor was not certified a member"
        );
        zero_disc += 1;
    }
    assert!(zero_disc >= 10, "oracle saw too few members to be meaningful");
}

#[test]
fn sampled_degree_twelve_invariants_are_discriminant_multiples() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0C0C02);
    // Fixed invariants, random test tensors with nonzero discriminant.
    let invariants: Vec<SpanningInvariant> =
        (0..3).map(|_| random_invariant(&mut rng)).collect();
    let tensors: Vec<(Tensor, BigInt)> = std::iter::from_fn(|| Some(random_tensor(&mut rng)))
        .filter_map(|x| {
            let disc = cubic_discriminant(&pencil_coefficients(&x));
            (!disc.is_zero()).then_some((x, disc))
        })
        .take(8)
        .collect();

    let mut nonzero_ratios = 0;
    for (pi, inv) in invariants.iter().enumerate() {
        let mut ratio: Option<RatComplex> = None;
        for (x, disc) in &tensors {
            let value = eval(x, inv);
            let disc_rat = RatComplex::new(
                BigRational::from_integer(disc.clone()),
                BigRational::zero(),
            );
            let current = &value / &disc_rat;
            match &ratio {
                None => ratio = Some(current),
                Some(prev) => assert_eq!(
                    *prev, current,
                    "invariant {pi}: ratio to the discriminant changed between tensors"
                ),
            }
        }
        if !ratio.expect("eight tensors evaluated").is_zero() {
            nonzero_ratios += 1;
        }
    }
    assert!(
        nonzero_ratios >= 1,
        "every sampled invariant was identically zero; the sampler is useless"
    );
}

#[test]
fn sampled_invariants_vanish_exactly_on_zero_discriminant_tensors() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0C0C03);
    let mut checked = 0;
    while checked < 5 {
        let mut x = random_tensor(&mut rng);
        // Duplicate-slice members (discriminant zero by the triple root).
        let sl = slices(&x);
        for i in 0..3 {
            for j in 0..3 {
                x.set_int(&[0, 1, i, j], sl[0][3 * i + j], 0).unwrap();
            }
        }
        if x.is_zero() {
            continue;
        }
        assert!(cubic_discriminant(&pencil_coefficients(&x)).is_zero());
        for _ in 0..6 {
            let inv = random_invariant(&mut rng);
            assert!(
                eval(&x, &inv).is_zero(),
                "an invariant was nonzero on a member"
            );
        }
        checked += 1;
    }
}
