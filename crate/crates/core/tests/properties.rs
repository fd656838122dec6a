use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use nilrad::blockstruct::{enumerate_shapes, normalize_seq, random_seq, BlockSeq, Constraint, SeqSampler, Shape};
use nilrad::exactla::{Field, Matrix, Scalar, Subspace};
use nilrad::nilradical::{generate_nilradical, lower_central_series, rank_table};

const Q: Field = Field::Rational;

fn matrix(n: usize, field: Field) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
        Matrix::from_vector(n, field, v.into_iter().map(|x| field.from_i64(x)).collect()).unwrap()
    })
}

fn rect(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-4i64..=4, rows * cols).prop_map(move |v| {
        let rows: Vec<Vec<Scalar>> = v.chunks(cols).map(|r| r.iter().map(|&x| Q.from_i64(x)).collect()).collect();
        Matrix::from_rows_in(rows, cols, Q).unwrap()
    })
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Q), Just(Field::prime(2).unwrap()), Just(Field::prime(3).unwrap()), Just(Field::prime(7).unwrap())]
}

fn small_shape() -> impl Strategy<Value = Shape> {
    prop::collection::vec(1usize..=3, 2..=4).prop_map(|d| Shape::new(d).unwrap())
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(big(n), big(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_arithmetic_matches_bigrational(a in any::<i64>(), b in 1i64..=i64::MAX, c in any::<i64>(), d in 1i64..=i64::MAX) {
        let x = Q.from_ratio(&big(a), &big(b)).unwrap();
        let y = Q.from_ratio(&big(c), &big(d)).unwrap();
        let (rx, ry) = (ratio(a, b), ratio(c, d));
        prop_assert_eq!((&x + &y).to_string(), (&rx + &ry).to_string());
        prop_assert_eq!((&x * &y).to_string(), (&rx * &ry).to_string());
        prop_assert_eq!((&x - &y).to_string(), (&rx - &ry).to_string());
        prop_assert_eq!(Scalar::parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn jacobi(f in field(), a in matrix(3, Q), b in matrix(3, Q), c in matrix(3, Q)) {
        let conv = |m: &Matrix| Matrix::from_vector(3, f, m.entries().iter().map(|s| {
            let r = s.as_rational().unwrap();
            f.from_ratio(&r.numer(), &r.denom()).unwrap()
        }).collect()).unwrap();
        let (a, b, c) = (conv(&a), conv(&b), conv(&c));
        let t1 = a.bracket(&b.bracket(&c).unwrap()).unwrap();
        let t2 = b.bracket(&c.bracket(&a).unwrap()).unwrap();
        let t3 = c.bracket(&a.bracket(&b).unwrap()).unwrap();
        prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().is_zero());
    }

    #[test]
    fn rank_agrees_with_transpose_and_echelon(m in rect(4, 6)) {
        let r = m.rank();
        prop_assert_eq!(r, m.transpose().rank());
        prop_assert_eq!(r, m.rref().1.len());
        prop_assert_eq!(m.nullspace().len(), m.cols() - r);
    }

    #[test]
    fn subspace_is_insertion_order_independent(vs in prop::collection::vec(prop::collection::vec(-2i64..=2, 9), 1..6), seed in any::<u64>()) {
        let vecs: Vec<Vec<Scalar>> = vs.iter().map(|v| v.iter().map(|&x| Q.from_i64(x)).collect()).collect();
        let mut a = Subspace::for_matrices(3, Q);
        for v in &vecs {
            a.insert(v);
        }
        let mut order: Vec<usize> = (0..vecs.len()).collect();
        order.rotate_left((seed as usize) % vecs.len());
        order.reverse();
        let mut b = Subspace::for_matrices(3, Q);
        for &i in &order {
            b.insert(&vecs[i]);
        }
        prop_assert_eq!(a, b);
    }

    #[test]
    fn phi_is_an_involutive_automorphism(a in matrix(4, Q), b in matrix(4, Q)) {
        let lhs = a.bracket(&b).unwrap().phi().unwrap();
        let rhs = a.phi().unwrap().bracket(&b.phi().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.phi().unwrap().phi().unwrap(), a);
    }

    #[test]
    fn normal_form_is_a_conjugation_invariant(shape in small_shape(), seed in any::<u64>()) {
        let sampler = SeqSampler::new(seed, 4, Constraint::None, Q).unwrap();
        let seq = sampler.sample(&shape, 0).unwrap();
        let norm = normalize_seq(&seq).unwrap();
        prop_assert!(norm.normal.is_normalized());
        prop_assert_eq!(norm.gauge.conjugate(&seq).unwrap(), norm.normal.clone());
        prop_assert_eq!(&normalize_seq(&norm.normal).unwrap().normal, &norm.normal);
        let p = sampler.sample_group(&shape, 1);
        let moved = p.conjugate(&seq).unwrap();
        prop_assert_eq!(normalize_seq(&moved).unwrap().normal, norm.normal);
    }

    #[test]
    fn degree_is_at_least_canonical(shape in small_shape(), seed in any::<u64>()) {
        let seq = random_seq(&shape, Q, seed, 3, Constraint::None).unwrap();
        let general = generate_nilradical(&seq).unwrap();
        let canonical = generate_nilradical(&BlockSeq::canonical(&shape, Q)).unwrap();
        prop_assert!(general.degree >= canonical.degree);
        prop_assert!(general.dim() >= canonical.dim());
    }

    #[test]
    fn series_by_definition_matches(shape in small_shape(), seed in any::<u64>()) {
        let seq = random_seq(&shape, Q, seed, 2, Constraint::None).unwrap();
        let r = generate_nilradical(&seq).unwrap();
        prop_assert_eq!(lower_central_series(&r.basis, &r.generators).unwrap(), r.lcs);
    }

    #[test]
    fn seq_json_round_trip(shape in small_shape(), seed in any::<u64>(), f in field()) {
        let sampler = SeqSampler::new(seed, 6, Constraint::None, f).unwrap();
        let seq = sampler.sample(&shape, 0).unwrap();
        let s = seq.to_json_string();
        prop_assert_eq!(BlockSeq::from_json_str(&s).unwrap(), seq);
    }
}

#[test]
fn antidiagonal_vanishes_for_phi_invariant_sequences() {
    for s in ["1,3,1", "2,1,2", "2,3,2", "1,2,1,2,1", "3,1,1,1,3", "1,2,3,2,1"] {
        let shape = Shape::parse(s).unwrap();
        let d = shape.d();
        for i in 0..5 {
            let seq = SeqSampler::new(17, 4, Constraint::NormalizedPhiInvariant, Q)
                .unwrap()
                .sample(&shape, i)
                .unwrap();
            let r = generate_nilradical(&seq).unwrap();
            for m in r.basis_matrices() {
                for row in 1..=(d - 1) / 2 {
                    assert!(m.get(row - 1, d - row).is_zero(), "{s} position ({row},{})", d + 1 - row);
                }
            }
        }
    }
}

/// A whole diagonal of zero ranks, at least two entries long, only happens
/// on all-ones shapes.
#[test]
fn vanishing_rank_diagonals_force_all_ones() {
    for shape in enumerate_shapes(2, 5, 3, 10) {
        let t = rank_table(&shape, Q).unwrap();
        let k = shape.k();
        for l in 1..k - 1 {
            if (1..=k - l).all(|i| t.get(i, i + l) == Some(0)) {
                assert!(shape.is_all_ones(), "{shape} l={l}");
            }
        }
    }
}

#[test]
fn surviving_generators_over_prime_fields() {
    let f3 = Field::prime(3).unwrap();
    let shape = Shape::parse("3,3").unwrap();
    let r = generate_nilradical(&BlockSeq::canonical(&shape, f3)).unwrap();
    // (ad J)^3 = 0 in characteristic 3
    assert_eq!(r.independent_generators, 3);
    assert_eq!(r.generators.len(), shape.rho() + 1);
    let rq = generate_nilradical(&BlockSeq::canonical(&shape, Q)).unwrap();
    assert_eq!(rq.independent_generators, shape.rho() + 1);
}
