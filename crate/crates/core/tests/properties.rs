use std::collections::HashMap;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rm_pmepr::algebra::{sparse_sdr, Gbf, Modulus};
use rm_pmepr::constructions::{alpha_beta_family, construct_coset_rep, davis_jedwab_family, CosetWords, KernelPair};
use rm_pmepr::exec::Executor;
use rm_pmepr::perm;
use rm_pmepr::sequence::{aperiodic_cross, autocorrelation, extend, phi_star, psi, star, CxSeq, ExtensionSpec};
use rm_pmepr::spectral::{coset_lower_bound, papr_p, pmepr, wht, EnvelopeConfig};

fn z(q: u32) -> Modulus {
    Modulus::new(q).unwrap()
}

fn gbf_from_index(q: Modulus, k: usize, mut i: usize) -> Gbf {
    let qq = q.q() as usize;
    let anf = (0..1 << k)
        .map(|_| {
            let d = (i % qq) as u32;
            i /= qq;
            d
        })
        .collect();
    Gbf::new(q, k, anf).unwrap()
}

fn random_gbf(q: Modulus, k: usize, rng: &mut impl Rng) -> Gbf {
    Gbf::new(q, k, (0..1 << k).map(|_| rng.gen_range(0..q.q())).collect()).unwrap()
}

fn arb_pair() -> impl Strategy<Value = (Gbf, Gbf)> {
    (prop::sample::select(vec![2u32, 4, 8]), 0usize..=3).prop_flat_map(|(q, k)| {
        let coeffs = prop::collection::vec(0..q, 1 << k);
        (coeffs.clone(), coeffs).prop_map(move |(a, b)| (Gbf::new(z(q), k, a).unwrap(), Gbf::new(z(q), k, b).unwrap()))
    })
}

fn arb_seq(n: usize) -> impl Strategy<Value = CxSeq> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n)
        .prop_map(|v| CxSeq::general(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()))
}

proptest! {
    #[test]
    fn rudin_shapiro_doubles_star((a, b) in (1usize..40).prop_flat_map(|n| (arb_seq(n), arb_seq(n)))) {
        let (c, d) = (a.try_add(&b).unwrap(), a.try_sub(&b).unwrap());
        let lhs = star(&c, &d).unwrap();
        let rhs = 2.0 * star(&a, &b).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1.0));
    }

    #[test]
    fn shared_affine_offsets_keep_phi_star((a, b) in arb_pair(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = a.modulus();
        let w: Vec<u32> = (0..a.m()).map(|_| rng.gen_range(0..q.q())).collect();
        let c = rng.gen_range(0..q.q());
        let lin = Gbf::affine(q, &w, c);
        let before = phi_star(&a, &b).unwrap();
        let after = phi_star(&a.try_add(&lin).unwrap(), &b.try_add(&lin).unwrap()).unwrap();
        prop_assert!((before - after).abs() < 1e-9);
    }

    #[test]
    fn cross_correlation_is_hermitian(a in (1usize..30).prop_flat_map(arb_seq), l in 0i64..30) {
        let x = aperiodic_cross(&a, &a, l).unwrap();
        let y = aperiodic_cross(&a, &a, -l).unwrap();
        prop_assert!((x - y.conj()).norm() < 1e-9);
    }
}

#[test]
fn sparse_sdrs_are_unique() {
    // Every sparse digit string with a nonzero last digit, up to length 18.
    fn walk(digits: &mut Vec<i8>, value: i64, seen: &mut HashMap<i64, Vec<i8>>, dup: &mut u32) {
        if let Some(&last) = digits.last() {
            if last != 0 && (1..=1 << 16).contains(&value) && seen.insert(value, digits.clone()).is_some() {
                *dup += 1;
            }
        }
        if digits.len() == 18 {
            return;
        }
        let pos = digits.len();
        let prev = digits.last().copied().unwrap_or(0);
        for d in [-1i8, 0, 1] {
            if d != 0 && prev != 0 {
                continue;
            }
            digits.push(d);
            walk(digits, value + d as i64 * (1 << pos), seen, dup);
            digits.pop();
        }
    }
    let mut seen = HashMap::new();
    let mut dup = 0;
    walk(&mut Vec::new(), 0, &mut seen, &mut dup);
    assert_eq!(dup, 0);
    assert_eq!(seen.len(), 1 << 16);
    for i in 1..=1i64 << 16 {
        let s = sparse_sdr(i);
        assert!(s.is_canonical());
        assert_eq!(s.digits(), seen[&i].as_slice(), "i={i}");
    }
}

#[test]
fn extended_pairs_never_beat_phi_star() {
    let q = z(4);
    let m = 4;
    let specs: Vec<ExtensionSpec> = (0..m)
        .flat_map(|x| (x + 1..m).map(move |y| vec![x, y]))
        .flat_map(|embed| ExtensionSpec::all_assignments(m, &embed).unwrap())
        .collect();
    assert_eq!(specs.len(), 24);
    let total = 1usize << 16;
    let ex = Executor::new(0).unwrap();
    const CHUNK: usize = 1024;
    let failures: usize = ex
        .map(0..total / CHUNK, |c| {
            let mut bad = 0;
            for idx in c * CHUNK..(c + 1) * CHUNK {
                let (a, b) = (gbf_from_index(q, 2, idx % 256), gbf_from_index(q, 2, idx / 256));
                let bound = phi_star(&a, &b).unwrap();
                let (pa, pb) = (psi(&a), psi(&b));
                for spec in &specs {
                    let s = star(&extend(&pa, spec).unwrap(), &extend(&pb, spec).unwrap()).unwrap();
                    if s > bound + 1e-9 {
                        bad += 1;
                    }
                }
            }
            bad
        })
        .into_iter()
        .sum();
    assert_eq!(failures, 0);
}

#[test]
fn extension_star_does_not_depend_on_the_assignment() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for q in [2u32, 4] {
        for k in 0..=3 {
            for _ in 0..5 {
                let (a, b) = (random_gbf(z(q), k, &mut rng), random_gbf(z(q), k, &mut rng));
                let (pa, pb) = (psi(&a), psi(&b));
                let base = star(&pa, &pb).unwrap();
                let m = 2 * k + 1;
                for embed in [(0..k).collect::<Vec<_>>(), (m - k..m).collect(), (0..k).map(|i| 2 * i).collect()] {
                    let stars: Vec<f64> = ExtensionSpec::all_assignments(m, &embed)
                        .unwrap()
                        .iter()
                        .map(|spec| star(&extend(&pa, spec).unwrap(), &extend(&pb, spec).unwrap()).unwrap())
                        .collect();
                    assert!(stars.iter().all(|s| (s - stars[0]).abs() < 1e-9));
                    // Contiguous placements keep the star itself.
                    if embed.windows(2).all(|w| w[1] == w[0] + 1) {
                        assert!((stars[0] - base).abs() < 1e-9);
                    }
                }
            }
        }
    }
}

#[test]
fn simultaneous_permutations_keep_phi_star() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let q = z(4);
    for k in 0..=3 {
        for _ in 0..40 {
            let (a, b) = (random_gbf(q, k, &mut rng), random_gbf(q, k, &mut rng));
            let base = phi_star(&a, &b).unwrap();
            for sigma in perm::all(k) {
                let s = phi_star(&a.permute_vars(&sigma).unwrap(), &b.permute_vars(&sigma).unwrap()).unwrap();
                assert!((s - base).abs() < 1e-9, "k={k} sigma={sigma:?}");
            }
        }
    }
}

#[test]
fn transform_magnitudes_are_affine_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let q = z(4);
    let sorted = |f: &Gbf| {
        let mut v: Vec<f64> = wht(f).unwrap().values().iter().map(|x| x.norm()).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    for _ in 0..10 {
        let f = random_gbf(q, 3, &mut rng);
        let base = sorted(&f);
        for sigma in perm::all(3) {
            let w: Vec<u32> = (0..3).map(|_| rng.gen_range(0..4)).collect();
            let g = f.permute_vars(&sigma).unwrap().try_add(&Gbf::affine(q, &w, rng.gen_range(0..4))).unwrap();
            for (x, y) in sorted(&g).iter().zip(&base) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn restricted_papr_stays_below_the_coset_bound() {
    let mut reps = Vec::new();
    for q in [4u32, 8] {
        for m in 3..=5 {
            reps.extend(davis_jedwab_family(z(q), m).unwrap());
            for p in [2u32, 4] {
                reps.extend(alpha_beta_family(z(q), p, m).unwrap().into_iter().map(|x| x.rep));
            }
        }
    }
    let h = KernelPair::holzmann_kharaghani(z(4)).unwrap();
    reps.push(construct_coset_rep(&h, 5, &[4, 0, 1, 2, 3]).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for rep in &reps {
        let words = CosetWords::new(&rep.gbf);
        let q = rep.q();
        for idx in [0u128].into_iter().chain((0..3).map(|_| rng.gen_range(0..words.size()))) {
            let word = rep.gbf.add_affine(&words.offsets(idx).0, words.offsets(idx).1).unwrap();
            for p in [2u32, 4, 8].into_iter().filter(|p| q % p == 0) {
                assert!(papr_p(&word, p).unwrap() <= rep.upper_bound + 1e-9);
            }
            assert!(coset_lower_bound(&word).unwrap() <= rep.upper_bound + 1e-9);
        }
    }
}

#[test]
fn finer_grids_never_lose_peaks() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..30 {
        let f = random_gbf(z(8), 4, &mut rng);
        let coarse = pmepr(&psi(&f), EnvelopeConfig { oversampling: 64, refine: false }).unwrap();
        let fine = pmepr(&psi(&f), EnvelopeConfig { oversampling: 128, refine: false }).unwrap();
        assert!(fine.grid_max >= coarse.grid_max - 1e-12);
    }
}

#[test]
fn complementarity_matches_vanishing_autocorrelation_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let q = z(4);
    let golay = davis_jedwab_family(q, 4).unwrap();
    let mut pairs: Vec<(CxSeq, CxSeq)> = golay.iter().map(|r| (psi(&r.gbf), psi(&r.companion()))).collect();
    pairs.extend((0..20).map(|_| (psi(&random_gbf(q, 4, &mut rng)), psi(&random_gbf(q, 4, &mut rng)))));
    for (a, b) in pairs {
        let n = a.len();
        let (ra, rb) = (autocorrelation(&a), autocorrelation(&b));
        let vanish = (1..n).all(|l| (ra[l] + rb[l]).norm() < 1e-9);
        let s = star(&a, &b).unwrap();
        assert_eq!((s - 2.0 * n as f64).abs() < 1e-9, vanish);
    }
}
