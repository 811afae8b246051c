//! Acceptance criteria. Each check prints a single `PASS`/`FAIL` line with
//! the measured values; the process fails if any criterion does.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use framescale::scaling::{
    brute_force_minimal_scalings, check_mbound, enumerate_minimal_scalings, verify_john_decomposition,
};
use framescale::structure::{
    affine_dependence_flag, affine_dependence_report, all_orthogonal_decompositions, ec_pairwise_disjoint,
    empty_cover, factor_poset, is_prime_scaling, reconstruct_poset, POSET_CAP,
};
use framescale::{Field, IndexSet, Rational, ScalingVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CORPUS_SEED: u64 = 20_160_301;

fn report(id: &str, ok: bool, detail: String) {
    println!("{} criterion {id}: {detail}", if ok { "PASS" } else { "FAIL" });
}

fn listed_as_rational() -> Vec<(IndexSet, Vec<Rational>)> {
    let mut v: Vec<(IndexSet, Vec<Rational>)> = sixvec_listed()
        .into_iter()
        .map(|w| {
            let support = w.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, _)| i).collect();
            (support, w.into_iter().map(Rational::from_i64).collect())
        })
        .collect();
    v.sort();
    v
}

fn criterion_1_six_vector_minimal_scalings() -> bool {
    let start = Instant::now();
    let exact = enumerate_minimal_scalings(&sixvec_exact()).unwrap();
    let float = enumerate_minimal_scalings(&sixvec_float()).unwrap();
    let elapsed = start.elapsed();
    let listed = listed_as_rational();
    let mut got = as_pairs(exact.vertices());
    got.sort();
    let exact_ok = got == listed;
    let float_ok = float.len() == listed.len()
        && listed.iter().all(|(s, w)| {
            float.vertices().iter().any(|v| {
                v.support() == s && v.weights().iter().zip(w).all(|(a, b)| (a - b.to_f64()).abs() <= 1e-7)
            })
        });
    let ok = exact_ok && float_ok && elapsed < Duration::from_secs(1);
    report(
        "1",
        ok,
        format!(
            "exact |M|={} match={exact_ok}, float |M|={} match={float_ok}, {:?}",
            exact.len(),
            float.len(),
            elapsed
        ),
    );
    ok
}

fn criterion_2_two_orthogonal_decompositions() -> bool {
    let start = Instant::now();
    let f = sixvec_exact();
    let m = enumerate_minimal_scalings(&f).unwrap();
    let c = ScalingVector::new(vec![q(1, 3); 6], 0.0).unwrap();
    let all = all_orthogonal_decompositions(&f, &c, &m).unwrap();
    let prime = is_prime_scaling(&f, &c).unwrap();
    let elapsed = start.elapsed();

    let listed = sixvec_listed();
    let position = |v: &Vec<i64>| {
        let s: IndexSet = v.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, _)| i).collect();
        m.position_of_support(&s).unwrap()
    };
    let structure = |ids: [usize; 3]| {
        let mut p: Vec<usize> = ids.iter().map(|&i| position(&listed[i - 1])).collect();
        p.sort();
        p
    };
    let wanted = [structure([1, 2, 3]), structure([1, 4, 5])];
    let found: Vec<bool> = wanted
        .iter()
        .map(|w| {
            all.iter().any(|d| {
                let mut used: Vec<usize> = d.vertex_blocks().concat();
                used.sort();
                &used == w
                    && d.blocks.iter().all(|b| {
                        b.lambda == q(3, 1)
                            && b.coefficient == q(1, 3)
                            && b.vertices.len() == 1
                            && b.vertices[0].1 == q(1, 1)
                    })
            })
        })
        .collect();
    let ok = found.iter().all(|&x| x) && !prime && elapsed < Duration::from_secs(1);
    report(
        "2",
        ok,
        format!(
            "{} decompositions, {{v1,v2,v3}} found={}, {{v1,v4,v5}} found={}, prime={prime}, {:?}",
            all.len(),
            found[0],
            found[1],
            elapsed
        ),
    );
    ok
}

fn criterion_3a_contact_point_vertex_count() -> bool {
    let start = Instant::now();
    let m = enumerate_minimal_scalings(&contact_frame()).unwrap();
    let brute = brute_force_minimal_scalings(&contact_frame()).unwrap();
    let elapsed = start.elapsed();
    let ok = m.len() == 16 && elapsed < Duration::from_secs(5);
    report(
        "3a",
        ok,
        format!(
            "|M(F)|={} (brute force {}), expected 16; the six points span only 3 directions, {:?}",
            m.len(),
            brute.len(),
            elapsed
        ),
    );
    ok
}

fn criterion_3b_contact_point_john_decomposition() -> bool {
    let start = Instant::now();
    let f = contact_frame();
    let m = enumerate_minimal_scalings(&f).unwrap();
    let worst = m
        .vertices()
        .iter()
        .map(|v| f.frame_operator_deviation(v.weights()))
        .fold(0.0, f64::max);
    let vertices_ok = !m.is_empty() && worst <= 1e-9;
    let [c1, c2, c3] = contact_weights();
    let closed = ScalingVector::new(vec![c1, c2, c3, 0.0, 0.0, 0.0], 1e-9).unwrap();
    let closed_dev = f.frame_operator_deviation(closed.weights());
    let closed_ok = verify_john_decomposition(&f, &closed).unwrap() && closed_dev <= 1e-9;
    let elapsed = start.elapsed();
    let ok = vertices_ok && closed_ok && elapsed < Duration::from_secs(5);
    report(
        "3b",
        ok,
        format!(
            "max vertex deviation {worst:.3e} over {} vertices, closed form ({c1:.6}, {c2:.6}, {c3:.6}) deviation {closed_dev:.3e}, {:?}",
            m.len(),
            elapsed
        ),
    );
    ok
}

fn criterion_4_cross_frame_poset() -> bool {
    let start = Instant::now();
    let f = cross_float();
    let p = factor_poset(&f, None, POSET_CAP).unwrap();
    let ec = empty_cover(&p);
    let rebuilt = reconstruct_poset(&ec);
    let elapsed = start.elapsed();
    let sets = |v: &[&[usize]]| v.iter().map(|s| IndexSet::from_one_based(s)).collect::<Vec<_>>();
    let poset_ok = p.members() == sets(&[&[], &[1, 2], &[1, 4], &[2, 3], &[3, 4], &[1, 2, 3, 4]]).as_slice();
    let ec_ok = ec.members() == sets(&[&[1, 2], &[1, 4], &[2, 3], &[3, 4]]).as_slice();
    let ok = poset_ok && ec_ok && rebuilt == p && elapsed < Duration::from_secs(1);
    report(
        "4",
        ok,
        format!("poset={poset_ok}, ec={ec_ok}, reconstruction={}, {:?}", rebuilt == p, elapsed),
    );
    ok
}

fn criterion_5_oracle_equivalence() -> bool {
    let start = Instant::now();
    let corpus = corpus(50, CORPUS_SEED);
    let mut discrepancies = 0;
    let mut oracle_discrepancies = 0;
    for frame in &corpus {
        let m = enumerate_minimal_scalings(&frame.exact).unwrap();
        let b = brute_force_minimal_scalings(&frame.exact).unwrap();
        if m != b {
            discrepancies += 1;
        }
        let mut pairs = as_pairs(m.vertices());
        pairs.sort();
        if pairs != oracle_minimal_scalings(&frame.exact) {
            oracle_discrepancies += 1;
        }
    }
    let elapsed = start.elapsed();
    let ok = discrepancies == 0 && oracle_discrepancies == 0 && elapsed < Duration::from_secs(60);
    report(
        "5",
        ok,
        format!(
            "{} frames, {discrepancies} enumerator/brute-force discrepancies, {oracle_discrepancies} against the Gram oracle, {:?}",
            corpus.len(),
            elapsed
        ),
    );
    ok
}

fn criterion_6_bound_suite() -> bool {
    let corpus = corpus(50, CORPUS_SEED);
    let mut violations = Vec::new();
    let mut bases = 0;
    for (i, frame) in corpus.iter().enumerate() {
        let m = enumerate_minimal_scalings(&frame.exact).unwrap();
        let r = check_mbound(&m);
        if !r.holds {
            violations.push(format!("frame {i}: |M|={} > {}", r.size, r.bound));
        }
        if frame.is_onb {
            bases += 1;
            if !(r.equality && r.bound == 1 && r.size == 1) {
                violations.push(format!("frame {i}: basis without equality"));
            }
        }
        let cap = frame.n * (frame.n + 1) / 2;
        if m.vertices().iter().any(|v| v.support().len() > cap) {
            violations.push(format!("frame {i}: support above {cap}"));
        }
    }
    let ok = violations.is_empty() && bases > 0;
    report(
        "6",
        ok,
        format!("{} frames ({bases} bases), violations: {violations:?}", corpus.len()),
    );
    ok
}

fn criterion_7_affine_dependence_agreement() -> bool {
    let corpus = corpus(50, CORPUS_SEED);
    let mut checked = 0;
    let mut dependent = 0;
    let mut disagreements = Vec::new();
    for (i, frame) in corpus.iter().enumerate() {
        let m = enumerate_minimal_scalings(&frame.exact).unwrap();
        if m.len() > 12 {
            continue;
        }
        checked += 1;
        let r = affine_dependence_report(m.vertices(), 0.0).unwrap();
        dependent += usize::from(r.dependent);
        if r.conditions_agree() != Some(true) {
            disagreements.push(i);
        }
    }
    let ok = disagreements.is_empty() && checked > 0;
    report(
        "7",
        ok,
        format!("{checked} frames checked ({dependent} dependent), disagreements: {disagreements:?}"),
    );
    ok
}

fn criterion_8_independent_vertices_give_disjoint_covers() -> bool {
    let corpus = corpus(50, CORPUS_SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 8);
    let mut frames = 0;
    let mut scalings = 0;
    let mut strict_count = 0;
    let mut violations = Vec::new();
    for (i, frame) in corpus.iter().enumerate() {
        let m = enumerate_minimal_scalings(&frame.exact).unwrap();
        if affine_dependence_flag(m.vertices(), 0.0) {
            continue;
        }
        frames += 1;
        let mut strict_ec = None;
        for trial in 0..20 {
            let c = random_scaling(m.vertices(), &mut rng, trial % 2 == 0);
            scalings += 1;
            let ec = empty_cover(&factor_poset(&frame.exact, Some(&c), POSET_CAP).unwrap());
            if !ec_pairwise_disjoint(&ec) {
                violations.push(format!("frame {i} trial {trial}: overlapping cover"));
            }
            if c.support().len() == frame.k() {
                strict_count += 1;
                match &strict_ec {
                    None => strict_ec = Some(ec),
                    Some(first) if *first != ec => {
                        violations.push(format!("frame {i} trial {trial}: strict covers differ"))
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let ok = violations.is_empty() && frames > 0;
    report(
        "8",
        ok,
        format!("{frames} frames, {scalings} scalings ({strict_count} strict), violations: {violations:?}"),
    );
    ok
}

/// Images of `M(F)` under appending a copy of `f_i`: `(v, 0)` and `v` with
/// `v(i)` moved to the new slot.
fn substitution_images(m: &[ScalingVector<Rational>], i: usize) -> Vec<(IndexSet, Vec<Rational>)> {
    let mut out = Vec::new();
    for v in m {
        let mut kept = v.weights().to_vec();
        kept.push(Rational::from_i64(0));
        let mut moved = kept.clone();
        let last = moved.len() - 1;
        moved.swap(i, last);
        for w in [kept, moved] {
            let s = ScalingVector::new(w, 0.0).unwrap();
            out.push((s.support().clone(), s.weights().to_vec()));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn doubling_cases() -> Vec<(usize, usize, usize, bool)> {
    let corpus = corpus(20, CORPUS_SEED ^ 9);
    corpus
        .iter()
        .enumerate()
        .map(|(idx, frame)| {
            let i = idx % frame.k();
            let m = enumerate_minimal_scalings(&frame.exact).unwrap();
            let (dup, _) = frame.with_duplicate(i);
            let m2 = enumerate_minimal_scalings(&dup).unwrap();
            let mut got = as_pairs(m2.vertices());
            got.sort();
            let pattern_ok = got == substitution_images(m.vertices(), i);
            (idx, m.len(), m2.len(), pattern_ok)
        })
        .collect()
}

fn criterion_9a_duplicate_follows_substitution_pattern() -> bool {
    let cases = doubling_cases();
    let bad: Vec<usize> = cases.iter().filter(|c| !c.3).map(|c| c.0).collect();
    let ok = bad.is_empty();
    report(
        "9a",
        ok,
        format!("{} frames, minimal scalings after duplication equal the substitution images except in {bad:?}", cases.len()),
    );
    ok
}

fn criterion_9b_duplicate_doubles_vertex_count() -> bool {
    let cases = doubling_cases();
    let not_doubled: Vec<String> = cases
        .iter()
        .filter(|c| c.2 != 2 * c.1)
        .map(|c| format!("#{}: {}->{}", c.0, c.1, c.2))
        .collect();
    let ok = not_doubled.is_empty();
    report(
        "9b",
        ok,
        format!(
            "{} frames, {} without an exact doubling (a vertex with v(i)=0 has a single image): {not_doubled:?}",
            cases.len(),
            not_doubled.len()
        ),
    );
    ok
}

fn main() -> ExitCode {
    let checks: [fn() -> bool; 11] = [
        criterion_1_six_vector_minimal_scalings,
        criterion_2_two_orthogonal_decompositions,
        criterion_3a_contact_point_vertex_count,
        criterion_3b_contact_point_john_decomposition,
        criterion_4_cross_frame_poset,
        criterion_5_oracle_equivalence,
        criterion_6_bound_suite,
        criterion_7_affine_dependence_agreement,
        criterion_8_independent_vertices_give_disjoint_covers,
        criterion_9a_duplicate_follows_substitution_pattern,
        criterion_9b_duplicate_doubles_vertex_count,
    ];
    let failed = checks.iter().filter(|check| !check()).count();
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
