//! Acceptance suite. Prints one line per criterion and exits nonzero when any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use mckay_core::algebra::{full_path_space_slice, molien_sequence, quotient_hilbert, factor_through_bound};
use mckay_core::corner::{j_shriek, j_star};
use mckay_core::gamma::{affine_dynkin_adjacency, build_group};
use mckay_core::linalg::Matrix;
use mckay_core::moduli::{
    adhm_build_cyclic, dimension_bound_check, partition_adhm, quot_certificate_at, vgit_chain, vgit_pushforward,
};
use mckay_core::quiver::{delta, frame_quiver, mckay_quiver, theta_i, DimVector, Quiver};
use mckay_core::rep::{
    are_isomorphic, brute_force_stability, is_semistable, is_stable, random_flat_rep, s_equivalent, stability_verdict,
};
use mckay_core::{AlgebraKind, CorneredAlgebra, Field, FramedRep, GammaDescriptor, GradedAlgebra, Rational, F2, F3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Character orthogonality tolerance.
const CHARACTER_TOL: f64 = 1e-9;
/// Distance of a Molien or tensor coefficient from the nearest integer.
const MULTIPLICITY_TOL: f64 = 1e-6;
const SLICE_KMAX: usize = 8;
const STABILITY_SAMPLES: usize = 100;
const ROUND_TRIPS: usize = 20;
const VGIT_SAMPLES: usize = 20;
const ADHM_MAX_SIZE: usize = 4;
const QUOT_MAX_DIM: usize = 2;
const QUOT_TRUNCATION: usize = 4;
const QUOT_GOLDEN: usize = 9;

type Outcome = Result<String, String>;

fn desc(s: &str) -> GammaDescriptor {
    s.parse().expect("descriptor")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fail<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

/// Framed reps whose stability was established, kept for the dimension bound.
#[derive(Default)]
struct StableBank {
    rational: Vec<FramedRep<Rational>>,
    f2: Vec<FramedRep<F2>>,
    f3: Vec<FramedRep<F3>>,
}

fn c1_mckay() -> Outcome {
    let names = ["A1", "A2", "A3", "A4", "A5", "D4", "D5", "D6", "E6", "E7", "E8"];
    let mut worst = 0.0f64;
    for n in names {
        let d = desc(n);
        let g = build_group(d).map_err(fail)?;
        worst = worst.max(g.orthogonality_defect());
        ensure(g.orthogonality_defect() < CHARACTER_TOL, || format!("{n}: orthogonality defect"))?;
        let adj = g.adjacency().map_err(fail)?;
        ensure(adj == affine_dynkin_adjacency(d), || format!("{n}: adjacency differs from the stored table"))?;
        ensure(common::shape_of(&adj) == common::expected_shape(d), || format!("{n}: wrong affine Dynkin shape"))?;
        let dl = delta(&g).components;
        for (i, row) in adj.iter().enumerate() {
            let s: usize = row.iter().zip(&dl).map(|(a, b)| a * b).sum();
            ensure(s == 2 * dl[i], || format!("{n}: A delta != 2 delta at {i}"))?;
        }
        let order: usize = dl.iter().map(|x| x * x).sum();
        ensure(order == g.order, || format!("{n}: sum of squared dims {order} != |G| {}", g.order))?;
    }
    Ok(format!("{} groups, worst orthogonality defect {worst:.1e}", names.len()))
}

fn c2_slices() -> Outcome {
    let mut checked = 0;
    for n in ["A1", "A2", "A3", "D4", "D5"] {
        let g = build_group(desc(n)).map_err(fail)?;
        for (kind, with_z) in [(AlgebraKind::Preprojective, false), (AlgebraKind::GradedPreprojective, true)] {
            let mut alg = GradedAlgebra::<Rational>::for_group(&g, &kind).map_err(fail)?;
            let r = g.num_irreps();
            for i in 0..r {
                for j in 0..r {
                    let molien = molien_sequence(&g, i, j, with_z, SLICE_KMAX).map_err(fail)?;
                    for (k, &expected) in molien.iter().enumerate() {
                        let got = alg.dim(i, j, k).map_err(fail)?;
                        ensure(got == expected, || format!("{n} {kind:?} e{i}·e{j} degree {k}: {got} vs Molien {expected}"))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    // literal route on the whole path space for small degrees
    for n in ["A1", "A2"] {
        let g = build_group(desc(n)).map_err(fail)?;
        let q = AlgebraKind::GradedPreprojective.quiver(&g).map_err(fail)?;
        let mut alg = GradedAlgebra::<Rational>::new(Arc::new(q.clone()));
        let rels = q.relations();
        for i in 0..q.num_finite {
            for j in 0..q.num_finite {
                for k in 0..=4 {
                    let lit = full_path_space_slice::<Rational>(&q, &rels, i, j, k).dim;
                    ensure(lit == alg.dim(i, j, k).map_err(fail)?, || format!("{n} literal slice {i},{j},{k}"))?;
                }
            }
        }
    }
    Ok(format!("{checked} slice dimensions match Molien (tolerance {MULTIPLICITY_TOL:.0e})"))
}

fn c3_invariants() -> Outcome {
    let mut msgs = Vec::new();
    for n in ["A1", "A2", "A3", "A4", "D4", "D5", "D6"] {
        let d = desc(n);
        let g = build_group(d).map_err(fail)?;
        let got = mckay_core::algebra::hilbert_sequence(&g, &AlgebraKind::GradedPreprojective, Some(&[0]), SLICE_KMAX)
            .map_err(fail)?;
        let want = common::invariant_series_with_z(d, SLICE_KMAX);
        ensure(got == want, || format!("{n}: {got:?} vs invariant count {want:?}"))?;
        msgs.push(n);
    }
    Ok(format!("e0 Pi• e0 series equals invariant monomial count for {}", msgs.join(",")))
}

fn c4_factor_bounds() -> Outcome {
    let golden = [("A1", 0usize, vec![1usize]), ("A2", 1, vec![2, 2]), ("A3", 2, vec![3, 4, 3]), ("D4", 4, vec![4, 6, 8, 6, 4])];
    for (n, bound, hilb) in golden {
        let g = build_group(desc(n)).map_err(fail)?;
        let b = factor_through_bound(&g, &[0]).map_err(fail)?;
        ensure(b == bound, || format!("{n}: bound {b}, expected {bound}"))?;
        let q = quotient_hilbert(&g, &[0], bound + 4).map_err(fail)?;
        ensure(q[..hilb.len()] == hilb[..] && q[hilb.len()..].iter().all(|&x| x == 0), || {
            format!("{n}: quotient series {q:?}")
        })?;
    }
    Ok("A1=0 A2=1 A3=2 D4=4".into())
}

fn random_dims<R: Rng>(n: usize, max_total: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let v: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        let t: usize = v.iter().sum();
        if t >= 1 && t <= max_total {
            return v;
        }
    }
}

fn random_corner<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let set: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !set.is_empty() {
            return set;
        }
    }
}

fn stability_field<S: Field>(q: &Arc<Quiver>, rng: &mut ChaCha8Rng, bank: &mut Vec<FramedRep<S>>) -> Result<(usize, usize), String> {
    let n = q.num_finite;
    let (mut stable, mut semistable) = (0, 0);
    for s in 0..STABILITY_SAMPLES {
        // alternate uniform draws with ones weighted toward the framed vertex
        let mut dims = if s % 2 == 0 {
            random_dims(n, 5, rng)
        } else {
            let mut v: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
            v[0] = rng.gen_range(1..=2);
            v
        };
        dims.push(1);
        let density = [0.5, 0.8, 1.0][s % 3];
        let m = random_flat_rep::<S, _>(q.clone(), dims, density, rng);
        ensure(m.is_flat(), || "sampler produced a non-flat rep".into())?;
        let set = random_corner(n, rng);
        let th = theta_i(&set, &m.dim_vector()).map_err(fail)?;
        let fast_ss = is_semistable(&m, &th).map_err(fail)?;
        let fast_st = is_stable(&m, &th).map_err(fail)?;
        let brute = brute_force_stability(&m, &th).map_err(fail)?;
        ensure(fast_ss == brute.semistable && fast_st == brute.stable, || {
            format!("I={set:?} dims {:?}: fast ({fast_ss},{fast_st}) brute ({},{})", m.dims(), brute.semistable, brute.stable)
        })?;
        semistable += fast_ss as usize;
        if fast_st {
            stable += 1;
            bank.push(m);
        }
    }
    Ok((semistable, stable))
}

fn c5_stability(bank: &mut StableBank) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut report = Vec::new();
    for n in ["A1", "A2", "D4"] {
        let g = build_group(desc(n)).map_err(fail)?;
        let q0 = mckay_quiver(&g).map_err(fail)?;
        let mut w = vec![0; q0.num_finite];
        w[0] = 1;
        let q = Arc::new(frame_quiver(&q0, &DimVector::new(w)).map_err(fail)?);
        let (ss2, st2) = stability_field::<F2>(&q, &mut rng, &mut bank.f2).map_err(|e| format!("{n}/F2: {e}"))?;
        let (ss3, st3) = stability_field::<F3>(&q, &mut rng, &mut bank.f3).map_err(|e| format!("{n}/F3: {e}"))?;
        report.push(format!("{n}: F2 {ss2}ss/{st2}s F3 {ss3}ss/{st3}s"));
    }
    Ok(format!("{} samples per group and field agree with brute force; {}", STABILITY_SAMPLES, report.join(", ")))
}

fn c6_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut total = 0;
    for n in ["A1", "A2", "A3"] {
        let g = build_group(desc(n)).map_err(fail)?;
        for set in [vec![0usize], vec![0, 1]] {
            let mut c = CorneredAlgebra::<Rational>::new(&g, &AlgebraKind::GradedPreprojective, &set).map_err(fail)?;
            let q = c.algebra().quiver().clone();
            for _ in 0..ROUND_TRIPS {
                let dims = random_dims(q.num_finite, 4, &mut rng);
                let big = random_flat_rep::<Rational, _>(q.clone(), dims, 0.8, &mut rng);
                let m = j_star(&c, &big).map_err(fail)?;
                let ind = j_shriek(&mut c, &m).map_err(|e| format!("{n} I={set:?}: {e:?}"))?;
                ensure(ind.module.is_flat(), || format!("{n} I={set:?}: induced module violates relations"))?;
                let back = j_star(&c, &ind.module).map_err(fail)?;
                ensure(are_isomorphic(&back, &m), || format!("{n} I={set:?}: j* j! M not isomorphic to M"))?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} round trips j* j! M ≅ M"))
}

fn c7_vgit(bank: &mut StableBank) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let g = build_group(desc("A2")).map_err(fail)?;
    let q = Arc::new(frame_quiver(&mckay_quiver(&g).map_err(fail)?, &DimVector::new(vec![1, 0, 0])).map_err(fail)?);
    let shapes = [[1, 1, 1], [1, 1, 0], [2, 1, 1], [1, 0, 0], [2, 2, 1], [1, 1, 2], [2, 2, 2]];
    let (mut seen, mut tries, mut nontrivial) = (0, 0, 0);
    while seen < VGIT_SAMPLES {
        tries += 1;
        ensure(tries < 5000, || "could not sample enough stable modules".into())?;
        let mut dims = shapes[rng.gen_range(0..shapes.len())].to_vec();
        dims.push(1);
        let m = random_flat_rep::<Rational, _>(q.clone(), dims, 1.0, &mut rng);
        let th = theta_i(&[0, 1, 2], &m.dim_vector()).map_err(fail)?;
        if !is_stable(&m, &th).map_err(fail)? {
            continue;
        }
        seen += 1;
        let direct = vgit_pushforward(&m, &[0, 1, 2], &[0]).map_err(fail)?;
        let chain = vgit_chain(&m, &[&[0, 1, 2], &[0, 1], &[0]]).map_err(fail)?;
        ensure(s_equivalent(&direct, &chain), || format!("dims {:?}: one-step and two-step differ", m.dims()))?;
        ensure(direct.total_dims() == m.dims(), || "dimension not conserved".into())?;
        let core_th = theta_i(&[0], &direct.core.dim_vector()).map_err(fail)?;
        ensure(stability_verdict(&direct.core, &core_th).map_err(fail)?.stable, || "core is not stable".into())?;
        nontrivial += direct.simples.iter().any(|&s| s > 0) as usize;
        bank.rational.push(m);
    }
    Ok(format!("{seen} stable modules, {nontrivial} with simples split off"))
}

fn c9_adhm(bank: &mut StableBank) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut count = 0;
    for (name, n) in [("A1", 2usize), ("A2", 3), ("A3", 4)] {
        let g = build_group(desc(name)).map_err(fail)?;
        for size in 0..=ADHM_MAX_SIZE {
            for parts in common::partitions(size) {
                let mut data = partition_adhm::<Rational>(&parts, n);
                let p = common::random_equivariant_gl::<Rational, _>(&data.weights, &mut rng);
                let pinv = p.inverse().ok_or("singular base change")?;
                data.b1 = p.mul(&data.b1).mul(&pinv);
                data.b2 = p.mul(&data.b2).mul(&pinv);
                data.i = p.mul(&data.i);
                data.j = data.j.mul(&pinv);
                let m = adhm_build_cyclic(&g, &data).map_err(|e| format!("{name} {parts:?}: {e:?}"))?;
                let res = m.check_relations().map_err(fail)?;
                let bad = res.iter().filter(|r| !r.matrix.is_zero()).count();
                ensure(bad == 0, || format!("{name} {parts:?}: {bad} nonzero residuals"))?;
                let all: Vec<usize> = (0..g.num_irreps()).collect();
                let th = theta_i(&all, &m.dim_vector()).map_err(fail)?;
                ensure(is_stable(&m, &th).map_err(fail)?, || format!("{name} {parts:?}: not stable"))?;
                bank.rational.push(m);
                count += 1;
            }
        }
    }
    Ok(format!("{count} partition data sets give flat stable representations"))
}

fn bound_all<S: Field>(reps: &[FramedRep<S>]) -> Result<usize, String> {
    let mut checked = 0;
    for m in reps {
        let n = m.quiver().num_finite;
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let th = theta_i(&set, &m.dim_vector()).map_err(fail)?;
            if !is_stable(m, &th).map_err(fail)? {
                continue;
            }
            let ok = dimension_bound_check(m, &set).map_err(fail)?;
            ensure(ok, || format!("I={set:?} dims {:?} exceeds the completion", m.dims()))?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn c8_dimension_bound(bank: &StableBank) -> Outcome {
    let a = bound_all(&bank.rational)?;
    let b = bound_all(&bank.f2)?;
    let c = bound_all(&bank.f3)?;
    Ok(format!("{} (module, I) pairs within the minimal sufficient completion", a + b + c))
}

/// Invariant monomials `x^a y^b` (a+b even, a+b <= top) for the cyclic group of order 2.
fn monomial_model(top: usize) -> (Vec<(usize, usize)>, Vec<Matrix<F2>>) {
    let basis: Vec<(usize, usize)> =
        (0..=top).step_by(2).flat_map(|d| (0..=d).rev().map(move |a| (a, d - a))).collect();
    let gens = [(2, 0), (1, 1), (0, 2)];
    let mats = gens
        .iter()
        .map(|&(ga, gb)| {
            let mut m = Matrix::<F2>::zeros(basis.len(), basis.len());
            for (c, &(a, b)) in basis.iter().enumerate() {
                if let Some(r) = basis.iter().position(|&x| x == (a + ga, b + gb)) {
                    m[(r, c)] = F2::new(1);
                }
            }
            m
        })
        .collect();
    (basis, mats)
}

fn c10_quot() -> Outcome {
    let g = build_group(desc("A1")).map_err(fail)?;
    let mut alg = CorneredAlgebra::<F2>::new(&g, &AlgebraKind::Preprojective, &[0]).map_err(fail)?;
    let gq = alg.generator_quiver().clone();
    let ngen = alg.generators().len();
    ensure(ngen == 3, || format!("expected 3 generators, got {ngen}"))?;

    // route 1: every module of dim <= 2 with a marked vector, certified by the library
    let mut kernels: BTreeSet<String> = BTreeSet::new();
    let mut certified = 0;
    for d in 0..=QUOT_MAX_DIM {
        let entries = ngen * d * d;
        for code in 0u32..(1 << entries) {
            let maps: Vec<Matrix<F2>> = (0..ngen)
                .map(|gi| Matrix::from_fn(d, d, |r, c| F2::new(((code >> (gi * d * d + r * d + c)) & 1) as i64)))
                .collect();
            let z = mckay_core::QuiverRep::new(gq.clone(), vec![d], maps).map_err(fail)?;
            for mark_code in 0u32..(1 << d) {
                let mark: Vec<F2> = (0..d).map(|r| F2::new(((mark_code >> r) & 1) as i64)).collect();
                if let Ok(cert) = quot_certificate_at(&mut alg, &z, &mark, QUOT_TRUNCATION) {
                    ensure(cert.dims.components == vec![d, 0], || "certificate dims".into())?;
                    kernels.insert(format!("{:?}", cert.kernel[0]));
                    certified += 1;
                }
            }
        }
    }

    // route 2: closed subspaces of codimension <= 2 in the monomial model
    let (basis, gens) = monomial_model(QUOT_TRUNCATION);
    let n = basis.len();
    let mut closed = 1; // codimension zero
    for c in 1..=QUOT_MAX_DIM {
        for l in common::rref_matrices::<F2>(n, c) {
            let is_closed = gens.iter().all(|gm| l.vstack(&l.mul(gm)).rank() == c);
            closed += is_closed as usize;
        }
    }

    ensure(n == 9, || format!("truncation has dimension {n}, expected 9"))?;
    ensure(kernels.len() == closed, || format!("certified kernels {} vs closed subspaces {closed}", kernels.len()))?;
    ensure(closed == QUOT_GOLDEN, || format!("{closed} quotients, expected {QUOT_GOLDEN}"))?;
    Ok(format!("{} distinct quotients ({certified} marked modules certified) match {closed} closed subspaces", kernels.len()))
}

fn main() -> ExitCode {
    let mut bank = StableBank::default();
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut run = |n: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = f();
        results.push((n, name, out, t.elapsed().as_secs_f64()));
    };
    run(1, "McKay quivers", &mut c1_mckay);
    run(2, "graded slices vs Molien", &mut c2_slices);
    run(3, "cornered series vs invariants", &mut c3_invariants);
    run(4, "factor-through bounds", &mut c4_factor_bounds);
    run(5, "stability vs brute force", &mut || c5_stability(&mut bank));
    run(6, "j* j! round trip", &mut c6_round_trip);
    run(7, "VGIT chain", &mut || c7_vgit(&mut bank));
    // the dimension bound runs last so it sees every stable module collected above
    run(9, "ADHM partitions", &mut || c9_adhm(&mut bank));
    run(8, "dimension bound", &mut || c8_dimension_bound(&bank));
    run(10, "Quot correspondence", &mut c10_quot);
    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (n, name, out, secs) in results {
        match out {
            Ok(msg) => println!("[PASS] {n:>2} {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {n:>2} {name}: {msg} ({secs:.1}s)");
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
