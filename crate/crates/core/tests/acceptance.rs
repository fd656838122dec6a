//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use nilrad::blockstruct::{enumerate_shapes, normalize_seq, BlockSeq, Constraint, SeqSampler, Shape};
use nilrad::exactla::{Field, Matrix, Subspace};
use nilrad::nilradical::{generate_nilradical, rank_table_of, NilReport, RankTable};
use nilrad::reps::{self, build_rep, ClassMode, SeqFamily};
use nilrad::theory::{self, free_profile, witt_dim, FreeProfile, FreeVerdict};

const Q: Field = Field::Rational;
const SEED: u64 = 20240607;

type Outcome = Result<String, String>;

fn sh(s: &str) -> Shape {
    Shape::parse(s).unwrap()
}

/// The sweep family: `2 <= k <= 6`, `1 <= d_i <= 4`, `|d| <= 14`.
fn family() -> Vec<Shape> {
    enumerate_shapes(2, 6, 4, 14)
}

struct Computed {
    report: NilReport,
    table: RankTable,
    free: FreeProfile,
}

/// Canonical computations over the family, shared by several criteria.
fn canonical_family() -> &'static [Computed] {
    static CELL: OnceLock<Vec<Computed>> = OnceLock::new();
    CELL.get_or_init(|| {
        family()
            .iter()
            .map(|shape| {
                let c = BlockSeq::canonical(shape, Q);
                let report = generate_nilradical(&c).unwrap();
                let table = rank_table_of(&report).unwrap();
                let free = free_profile(&report, c.is_phi_invariant());
                Computed { report, table, free }
            })
            .collect()
    })
}

fn summarize(bad: &[String]) -> String {
    const SHOWN: usize = 12;
    let mut s = bad.iter().take(SHOWN).cloned().collect::<Vec<_>>().join("; ");
    if bad.len() > SHOWN {
        s.push_str(&format!("; ... ({} total)", bad.len()));
    }
    s
}

fn verdict(checked: usize, bad: Vec<String>, what: &str) -> Outcome {
    if bad.is_empty() {
        Ok(format!("{checked} {what}"))
    } else {
        Err(format!("{} of {checked} {what} failed: {}", bad.len(), summarize(&bad)))
    }
}

fn canonical_degrees() -> Outcome {
    let fam = canonical_family();
    let mut bad = Vec::new();
    for c in fam {
        let predicted = theory::predict_degree_canonical(&c.report.shape).predicted_degree;
        if c.report.degree != predicted {
            bad.push(format!("{} computed {} predicted {predicted}", c.report.shape, c.report.degree));
        }
    }
    verdict(fam.len(), bad, "shapes")
}

fn r1k_trichotomy() -> Outcome {
    let fam = canonical_family();
    let mut bad = Vec::new();
    for c in fam {
        let shape = &c.report.shape;
        let predicted = theory::predict_r1k(shape);
        if c.table.r1k() != predicted {
            bad.push(format!("{shape} r_1k computed {} predicted {predicted}", c.table.r1k()));
        }
        for i in 1..shape.k() {
            if c.table.get(i, i + 1) != Some(1) {
                bad.push(format!("{shape} r_({i},{}) = {:?}", i + 1, c.table.get(i, i + 1)));
            }
        }
        for ((i, j), r) in c.table.entries() {
            if r > 2 {
                bad.push(format!("{shape} r_({i},{j}) = {r}"));
            }
        }
    }
    verdict(fam.len(), bad, "shapes")
}

fn general_s() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut check = |seq: &BlockSeq, expected: usize, label: &str| {
        checked += 1;
        let computed = generate_nilradical(seq).unwrap().degree;
        let predicted = theory::predict_degree(seq).unwrap().predicted_degree;
        if computed != expected || predicted != expected {
            bad.push(format!("{label} on {}: computed {computed} predicted {predicted} expected {expected}", seq.shape()));
        }
    };
    for s in ["1,3,1", "1,2,1,2,1", "1,4,1,4,1", "1,1,3,1,1"] {
        let shape = sh(s);
        let k = shape.k();
        let inv = SeqSampler::new(SEED, 4, Constraint::NormalizedPhiInvariant, Q).unwrap();
        for i in 0..20 {
            check(&inv.sample(&shape, i).unwrap(), k - 2, "phi-invariant");
        }
        let generic = SeqSampler::new(SEED, 4, Constraint::Normalized, Q).unwrap();
        let mut drawn = 0;
        for i in 0.. {
            if drawn == 20 {
                break;
            }
            let seq = generic.sample(&shape, i).unwrap();
            if seq.is_phi_invariant() {
                continue;
            }
            drawn += 1;
            check(&seq, k - 1, "generic");
        }
    }
    let any = SeqSampler::new(SEED, 4, Constraint::None, Q).unwrap();
    for s in ["1,2,2", "2,3,1,2", "3,5,3,4", "1,2,1,2", "2,1,3"] {
        let shape = sh(s);
        assert!(!shape.is_symmetric());
        for i in 0..20 {
            check(&any.sample(&shape, i).unwrap(), shape.k() - 1, "unnormalized");
        }
    }
    verdict(checked, bad, "samples")
}

fn corner_vanishes_everywhere(report: &NilReport) -> bool {
    let d = report.shape.d();
    report.basis.basis().iter().all(|v| v[d - 1].is_zero())
}

fn weakly_normalized_equivalence() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    let inv = SeqSampler::new(SEED, 4, Constraint::WeaklyNormalizedPhiInvariant, Q).unwrap();
    let weak = SeqSampler::new(SEED, 4, Constraint::WeaklyNormalized, Q).unwrap();
    let mut phi_count = 0;
    for s in ["1,3,1", "2,1,2", "2,3,2", "3,1,3", "1,2,1,2,1", "2,1,1,1,2", "1,1,3,1,1"] {
        let shape = sh(s);
        for i in 0..20 {
            for sampler in [&inv, &weak] {
                let seq = sampler.sample(&shape, i).unwrap();
                assert!(seq.is_weakly_normalized());
                let corner = corner_vanishes_everywhere(&generate_nilradical(&seq).unwrap());
                let phi = seq.is_phi_invariant();
                phi_count += phi as usize;
                checked += 1;
                if corner != phi {
                    bad.push(format!("{shape} sample {i}: A_1d = 0 is {corner}, phi-invariant is {phi}"));
                }
            }
        }
    }
    verdict(checked, bad, "samples").map(|s| format!("{s} ({phi_count} phi-invariant)"))
}

fn free_classification() -> Outcome {
    let mut bad = Vec::new();
    let dims = |seq: &BlockSeq| generate_nilradical(seq).unwrap().lcs_quotient_dims();

    let inv = SeqSampler::new(SEED, 4, Constraint::NormalizedPhiInvariant, Q).unwrap();
    for i in 0..5 {
        let seq = inv.sample(&sh("1,2,1,2,1"), i).unwrap();
        let p = theory::free_check(&seq).unwrap();
        if p.lcs_quotient_dims != [2, 1, 2] || p.verdict != FreeVerdict::Free {
            bad.push(format!("(1,2,1,2,1) phi-invariant sample {i}: {:?} {:?}", p.lcs_quotient_dims, p.verdict));
        }
    }
    let c = BlockSeq::canonical(&sh("2,1,2,1,2"), Q);
    if dims(&c) != [2, 1, 2, 3] {
        bad.push(format!("(2,1,2,1,2): {:?}", dims(&c)));
    }

    let mut expect_free = |s: &str, g: usize, n: usize| {
        let p = theory::free_check(&BlockSeq::canonical(&sh(s), Q)).unwrap();
        if p.verdict != FreeVerdict::Free || (p.rho_gen, p.steps) != (g, n) {
            bad.push(format!("({s}): {:?} (g,N) = ({},{})", p.verdict, p.rho_gen, p.steps));
        }
    };
    for s in ["2,1,1,2", "2,1,2,1", "1,2,1,2"] {
        expect_free(s, 2, 3);
    }
    expect_free("2,1,2,1,2", 2, 4);
    for d in 2..=4 {
        for s in [
            format!("{d},1,{d}"),
            format!("{},2,{}", d - 1, d - 1),
            format!("{d},1,{}", d - 1),
            format!("{},1,{d}", d - 1),
        ] {
            expect_free(&s, d, 2);
        }
    }
    let r = generate_nilradical(&BlockSeq::canonical(&sh("3,1,1,3"), Q)).unwrap();
    let top = r.lcs_dims[r.degree - 1];
    let p = free_profile(&r, true);
    if p.verdict != FreeVerdict::NotFree || top >= 8 {
        bad.push(format!("(3,1,1,3): {:?} with dim n^2 = {top}", p.verdict));
    }

    // every shape of the family outside the classification list is not free
    let fam = canonical_family();
    for c in fam {
        if c.free.predicted.is_none() && c.free.verdict == FreeVerdict::Free {
            bad.push(format!(
                "{} unlisted but free: (g,N) = ({},{}) quotients {:?}",
                c.report.shape, c.free.rho_gen, c.free.steps, c.free.lcs_quotient_dims
            ));
        }
        if c.free.predicted.is_some() && c.free.verdict != FreeVerdict::Free {
            bad.push(format!("{} listed but not free", c.report.shape));
        }
    }
    verdict(fam.len() + 21, bad, "shapes and fixtures")
}

fn witt_values() -> Outcome {
    let mut bad = Vec::new();
    for (g, m, expected) in [(2, 3, 2), (3, 3, 8), (2, 4, 3)] {
        if witt_dim(g, m) != expected {
            bad.push(format!("witt({g},{m}) = {}", witt_dim(g, m)));
        }
    }
    for g in 1..=6 {
        if witt_dim(g, 1) != g {
            bad.push(format!("witt({g},1) = {}", witt_dim(g, 1)));
        }
    }
    verdict(9, bad, "values")
}

/// 12x12 matrix over F2 with the given blocks of the `(2,3,2,3,2)` shape.
fn f2_matrix(shape: &Shape, blocks: &[((usize, usize), &[&[i64]])]) -> Matrix {
    let f2 = Field::prime(2).unwrap();
    let mut m = Matrix::zeros(shape.d(), shape.d(), f2);
    for &((i, j), rows) in blocks {
        let b = Matrix::from_i64_rows(f2, rows);
        m.set_submatrix(shape.offset(i - 1), shape.offset(j - 1), &b);
    }
    m
}

fn char_p_fixtures() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        let field = Field::prime(p).unwrap();
        for k in 2..=5 {
            checked += 1;
            let shape = Shape::new(vec![p as usize; k]).unwrap();
            let r = generate_nilradical(&BlockSeq::canonical(&shape, field)).unwrap();
            if r.degree != 1 {
                bad.push(format!("{shape} over Fp:{p}: degree {}", r.degree));
            }
        }
    }

    let shape = sh("2,3,2,3,2");
    let f2 = Field::prime(2).unwrap();
    let r = generate_nilradical(&BlockSeq::canonical(&shape, f2)).unwrap();
    checked += 1;
    if r.dim() != 8 || r.degree != 3 {
        bad.push(format!("(2,3,2,3,2) over F2: dim {} degree {}", r.dim(), r.degree));
    }
    let listed = [
        f2_matrix(
            &shape,
            &[
                ((1, 2), &[&[0, 0, 0], &[1, 0, 0]]),
                ((2, 3), &[&[0, 0], &[0, 0], &[1, 0]]),
                ((3, 4), &[&[0, 0, 0], &[1, 0, 0]]),
                ((4, 5), &[&[0, 0], &[0, 0], &[1, 0]]),
            ],
        ),
        f2_matrix(
            &shape,
            &[
                ((1, 2), &[&[1, 0, 0], &[0, 1, 0]]),
                ((2, 3), &[&[0, 0], &[1, 0], &[0, 1]]),
                ((3, 4), &[&[1, 0, 0], &[0, 1, 0]]),
                ((4, 5), &[&[0, 0], &[1, 0], &[0, 1]]),
            ],
        ),
        f2_matrix(
            &shape,
            &[
                ((1, 2), &[&[0, 0, 0], &[0, 0, 1]]),
                ((2, 3), &[&[1, 0], &[0, 0], &[0, 0]]),
                ((3, 4), &[&[0, 0, 0], &[0, 0, 1]]),
                ((4, 5), &[&[1, 0], &[0, 0], &[0, 0]]),
            ],
        ),
        f2_matrix(
            &shape,
            &[
                ((1, 2), &[&[0, 0, 1], &[0, 0, 0]]),
                ((2, 3), &[&[0, 1], &[0, 0], &[0, 0]]),
                ((3, 4), &[&[0, 0, 1], &[0, 0, 0]]),
                ((4, 5), &[&[0, 1], &[0, 0], &[0, 0]]),
            ],
        ),
        f2_matrix(
            &shape,
            &[
                ((1, 3), &[&[1, 0], &[0, 1]]),
                ((2, 4), &[&[1, 0, 0], &[0, 0, 0], &[0, 0, 1]]),
                ((3, 5), &[&[1, 0], &[0, 1]]),
            ],
        ),
        f2_matrix(&shape, &[((2, 4), &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])]),
        f2_matrix(&shape, &[((1, 4), &[&[0, 0, 0], &[0, 1, 0]]), ((2, 5), &[&[0, 0], &[1, 0], &[0, 0]])]),
        f2_matrix(&shape, &[((1, 4), &[&[0, 1, 0], &[0, 0, 1]]), ((2, 5), &[&[1, 0], &[0, 1], &[0, 0]])]),
    ];
    let mut expected = Subspace::for_matrices(shape.d(), f2);
    for m in &listed {
        expected.insert_matrix(m);
    }
    checked += 1;
    if expected.dim() != 8 || expected != r.basis {
        bad.push(format!("(2,3,2,3,2) over F2: echelon basis differs from the listed span (listed dim {})", expected.dim()));
    }
    verdict(checked, bad, "fixtures")
}

fn representations() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    let one = Q.one();
    let zero = Q.zero();
    for n in 2..=4 {
        for total in 2..=9 {
            for rec in reps::enumerate_shapes(n, total, ClassMode::FreeAlg).unwrap() {
                let shape = &rec.shape;
                let constraint = match rec.family {
                    SeqFamily::PhiInvariant => Constraint::NormalizedPhiInvariant,
                    SeqFamily::Any | SeqFamily::NotPhiInvariant => Constraint::Normalized,
                };
                let sampler = SeqSampler::new(SEED ^ n as u64, 3, constraint, Q).unwrap();
                let seq = (0..)
                    .map(|i| sampler.sample(shape, i).unwrap())
                    .find(|s| rec.family != SeqFamily::NotPhiInvariant || !s.is_phi_invariant())
                    .unwrap();
                checked += 1;
                let rep = build_rep(n, &one, &zero, &seq).unwrap();
                let oracle = theory::predict_degree(&seq).unwrap().predicted_degree;
                let level = rep.quotient_level().unwrap();
                if !rep.relations_hold() || !rep.top_vanishes() || !rep.verify_uniserial() || level != oracle || level != rec.ell {
                    bad.push(format!(
                        "n={n} {shape}: relations {} top {} uniserial {} level {level} oracle {oracle} record {}",
                        rep.relations_hold(),
                        rep.top_vanishes(),
                        rep.verify_uniserial(),
                        rec.ell
                    ));
                }
            }
        }
    }
    let count = reps::enumerate_shapes(2, 4, ClassMode::FreeAlg)
        .unwrap()
        .iter()
        .map(|r| r.shape.key())
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    if count != 3 {
        bad.push(format!("n=2, dim 4: {count} shapes"));
    }
    verdict(checked, bad, "representations")
}

fn normalization() -> Outcome {
    let mut bad = Vec::new();
    let shapes = ["1,3,1", "2,3,2", "3,5,3,4", "1,2,1,2,1", "2,2", "4,1,2", "1,2,3,2", "2,1,2,1,2", "3,3", "1,4,1,4,1"];
    let sampler = SeqSampler::new(SEED, 5, Constraint::None, Q).unwrap();
    let mut checked = 0;
    for s in shapes {
        let shape = sh(s);
        for i in 0..10 {
            let seq = sampler.sample(&shape, i).unwrap();
            let p = sampler.sample_group(&shape, i);
            let conj = p.conjugate(&seq).unwrap();
            checked += 1;
            let a = normalize_seq(&seq).unwrap().normal.to_json_string();
            let b = normalize_seq(&conj).unwrap().normal.to_json_string();
            if a != b {
                bad.push(format!("{shape} triple {i}: normal forms differ"));
            }
            let da = generate_nilradical(&seq).unwrap().degree;
            let db = generate_nilradical(&conj).unwrap().degree;
            if da != db {
                bad.push(format!("{shape} triple {i}: degree {da} vs {db}"));
            }
        }
    }
    verdict(checked, bad, "triples")
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("canonical degree theorem", canonical_degrees),
        ("r_1k trichotomy and rank table bounds", r1k_trichotomy),
        ("general-S degree dichotomy", general_s),
        ("weakly normalized corner equivalence", weakly_normalized_equivalence),
        ("free nilpotent classification", free_classification),
        ("Witt dimensions", witt_values),
        ("prime characteristic fixtures", char_p_fixtures),
        ("representation relations and enumeration", representations),
        ("normalization under conjugation", normalization),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| *f == id) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id} PASS [{name}] {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} FAIL [{name}] {detail} ({secs:.1}s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
