//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Run with `cargo test -p steerlab-cli --test acceptance`.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steerlab::ghjw::{alice_conditional, purify_from_ensemble, relating_unitary, steering_observable, Purification};
use steerlab::identities::IdentitySuite;
use steerlab::protocols::{
    histogram_distance, rotational_invariance_check, run_fable, run_photon_trick, verify_claims,
    BobBasis, CarolStrategy, ClaimReport, FableConfig, FableOrdering, PhotonOrdering,
    PhotonTrickConfig, Preparation,
};
use steerlab::random::{ensemble_with_spectrum, random_ensemble, random_unitary};
use steerlab::states::{Ensemble, StateVector};

const N: usize = 100_000;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&x)
}

fn identity_suite() -> Verdict {
    let (checks, t) = timed(|| IdentitySuite::default().run());
    let failed: Vec<_> = checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    let worst = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    let fast = t < Duration::from_secs(1);
    Verdict::new(
        failed.is_empty() && fast,
        format!(
            "{} identities, max residual {worst:.2e} (tol 1e-9), failed {failed:?}, {:.3}s (< 1s)",
            checks.len(),
            t.as_secs_f64()
        ),
    )
}

/// Alice's ensemble when Bob measures the computational basis on `psi`.
fn computational_ensemble(psi: &Purification<f64>) -> Ensemble<f64> {
    let (da, db) = (psi.dim_alice, psi.dim_bob);
    let elements: Vec<_> = (0..db)
        .filter_map(|j| {
            let (p, cond) = alice_conditional(&psi.joint, da, db, &StateVector::basis(db, j));
            cond.map(|c| (p, c))
        })
        .collect();
    let total: f64 = elements.iter().map(|(p, _)| p).sum();
    Ensemble::new(elements.into_iter().map(|(p, s)| (p / total, s)).collect()).expect("valid ensemble")
}

struct GhjwStats {
    worst_relation: f64,
    worst_unitarity: f64,
    worst_weight: f64,
    worst_fidelity: f64,
    errors: Vec<String>,
    degenerate: usize,
    rank_deficient: usize,
}

fn ghjw_instances() -> GhjwStats {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut s = GhjwStats {
        worst_relation: 0.0,
        worst_unitarity: 0.0,
        worst_weight: 0.0,
        worst_fidelity: 1.0,
        errors: Vec::new(),
        degenerate: 0,
        rank_deficient: 0,
    };
    for i in 0..200 {
        let da = rng.random_range(2..=4);
        let ensemble = if i % 3 == 0 {
            // planted spectrum: repeated values, sometimes zeros
            let mut spectrum: Vec<f64> = vec![rng.random_range(1..3) as f64; da];
            if rng.random_bool(0.5) {
                spectrum[0] = 3.0;
            }
            let zeros = rng.random_range(0..da);
            for x in spectrum.iter_mut().skip(da - zeros) {
                *x = 0.0;
            }
            s.degenerate += 1;
            ensemble_with_spectrum::<f64, _>(&spectrum, &mut rng)
        } else {
            let k = rng.random_range(1..=6);
            random_ensemble::<f64, _>(da, k, &mut rng)
        };
        if ensemble.len() < da {
            s.rank_deficient += 1;
        }
        let db = rng.random_range(ensemble.len().max(2)..=6);
        let v = random_unitary::<f64, _>(db, &mut rng);

        let mut run = || -> steerlab::Result<()> {
            let psi = purify_from_ensemble(&ensemble, db)?;
            let psi_prime = psi.apply_bob(&v)?;
            let u = relating_unitary(&psi, &psi_prime, 1e-9)?;
            s.worst_unitarity = s.worst_unitarity.max(u.unitary_residual());
            let mapped = psi_prime.apply_bob(&u)?;
            s.worst_relation = s.worst_relation.max((psi.joint.vector() - mapped.joint.vector()).norm());

            for target in [ensemble.clone(), computational_ensemble(&psi_prime)] {
                let a = steering_observable(&psi, &target, 1e-9)?.analyze(&psi)?;
                s.worst_weight = s.worst_weight.max(a.max_weight_error());
                s.worst_fidelity = s.worst_fidelity.min(a.min_fidelity());
            }
            Ok(())
        };
        if let Err(e) = run() {
            s.errors.push(format!("instance {i}: {e}"));
        }
    }
    s
}

fn ghjw_exactness() -> Verdict {
    let (s, t) = timed(ghjw_instances);
    let pass = s.errors.is_empty()
        && s.worst_relation <= 1e-8
        && s.worst_unitarity <= 1e-9
        && s.worst_weight <= 1e-9
        && s.worst_fidelity >= 1.0 - 1e-9
        && t < Duration::from_secs(10);
    Verdict::new(
        pass,
        format!(
            "200 instances ({} planted-degenerate, {} rank-deficient): max ‖Ψ−(I⊗U)Ψ′‖ {:.2e}, \
             unitarity {:.2e}, weight error {:.2e}, min overlap 1−{:.2e}, errors {:?}, {:.2}s (< 10s)",
            s.degenerate,
            s.rank_deficient,
            s.worst_relation,
            s.worst_unitarity,
            s.worst_weight,
            1.0 - s.worst_fidelity,
            s.errors,
            t.as_secs_f64()
        ),
    )
}

fn photon_trick() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for basis in [BobBasis::Hv, BobBasis::Diagonal] {
        for ordering in [PhotonOrdering::BobFirst, PhotonOrdering::AliceFirst] {
            let cfg = PhotonTrickConfig { n_pairs: N, seed: 7, p: 0.7, bob_basis: basis, ordering };
            let ((_, r), t) = timed(|| run_photon_trick(&cfg).expect("valid config"));
            let matched = r.match_rate == Some(1.0);
            let (name, freq) = match basis {
                BobBasis::Hv => ("H", r.alice_outcome_frequencies["H"]),
                BobBasis::Diagonal => ("D", r.bob_outcome_frequencies["D"]),
            };
            let ok = matched
                && match basis {
                    BobBasis::Hv => within(freq, 0.69, 0.71),
                    BobBasis::Diagonal => within(freq, 0.49, 0.51),
                }
                && t < Duration::from_secs(5);
            pass &= ok;
            parts.push(format!(
                "{basis:?}/{ordering:?}: match {:?}, {name} {freq:.4}, {:.2}s",
                r.match_rate,
                t.as_secs_f64()
            ));
        }
    }
    Verdict::new(pass, parts.join("; "))
}

fn fable(prep: Preparation, strategy: CarolStrategy, ordering: FableOrdering, n: usize, seed: u64) -> (ClaimReport, Duration) {
    let cfg = FableConfig { n_pairs: n, seed, preparation: prep, carol_strategy: strategy, ordering };
    timed(|| verify_claims(&run_fable(&cfg).expect("valid config")))
}

fn fable_fractions() -> Verdict {
    use CarolStrategy::*;
    use FableOrdering::*;
    let mut pass = true;
    let mut parts = Vec::new();
    for (s, o) in [(CaseITrick, CarolFirst), (CaseITrick, CarolLast), (CaseIITrick, CarolFirst), (CaseIITrick, CarolLast)] {
        let (r, t) = fable(Preparation::EntangledQuartet, s, o, N, 1);
        let zz = r.zz_fraction.unwrap();
        let mut ok = within(zz, 0.323, 0.343) && t < Duration::from_secs(10);
        let mut line = format!("{s:?}/{o:?}: zz {zz:.4}");
        if s == CaseIITrick {
            let flagged = r.flagged_fraction.unwrap();
            ok &= within(flagged, 0.24, 0.26);
            line += &format!(", singlet {flagged:.4}");
            if o == CarolLast {
                let rejected = r.carol_triplet_rejection_fraction.unwrap();
                ok &= within(rejected, 0.74, 0.76);
                line += &format!(", rejected {rejected:.4}");
            }
        }
        line += &format!(", {:.2}s", t.as_secs_f64());
        pass &= ok;
        parts.push(line);
    }
    Verdict::new(pass, parts.join("; "))
}

fn exact_identification() -> Verdict {
    use CarolStrategy::*;
    use FableOrdering::*;
    let mut pass = true;
    let mut runs = 0;
    for o in [CarolFirst, CarolLast] {
        for (n, seed) in [(N, 2), (1, 3), (10, 4), (1000, 5), (1000, 6)] {
            let (one, _) = fable(Preparation::EntangledQuartet, CaseITrick, o, n, seed);
            let (two, _) = fable(Preparation::EntangledQuartet, CaseIITrick, o, n, seed);
            pass &= one.zz_prediction_match_rate.is_none_or(|r| r == 1.0);
            pass &= two.flagged_anticorrelation_rate.is_none_or(|r| r == 1.0);
            if n == N {
                pass &= one.zz_prediction_match_rate == Some(1.0);
                pass &= two.flagged_anticorrelation_rate == Some(1.0);
            }
            runs += 2;
        }
    }
    Verdict::new(
        pass,
        format!("{runs} runs, both orderings, N from 1 to 1e5: zz match and flagged anticorrelation exactly 1.0"),
    )
}

fn indistinguishability() -> Verdict {
    use CarolStrategy::*;
    use FableOrdering::*;
    use Preparation::*;
    let mut worst_cell: f64 = 0.0;
    let mut worst_distance: f64 = 0.0;
    for (p, s, o) in [
        (DirectCaseI, CaseITrick, CarolFirst),
        (DirectCaseII, CaseIITrick, CarolFirst),
        (EntangledQuartet, CaseITrick, CarolFirst),
        (EntangledQuartet, CaseIITrick, CarolLast),
    ] {
        let (r, _) = fable(p, s, o, N, 11);
        for h in &r.histograms {
            for f in h.joint {
                worst_cell = worst_cell.max((f - 0.25).abs());
            }
        }
    }
    for s in [CaseITrick, CaseIITrick] {
        let (a, _) = fable(EntangledQuartet, s, CarolFirst, N, 12);
        let (b, _) = fable(EntangledQuartet, s, CarolLast, N, 12);
        worst_distance = worst_distance.max(histogram_distance(&a, &b));
    }
    Verdict::new(
        worst_cell <= 0.01 && worst_distance <= 0.01,
        format!("max |cell − 1/4| {worst_cell:.4} (≤ 0.01), first/last histogram distance {worst_distance:.4} (≤ 0.01)"),
    )
}

fn rotational_invariance() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let worst = (0..100)
        .map(|_| rotational_invariance_check(&random_unitary::<f64, _>(2, &mut rng)))
        .map(|r| r.unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    Verdict::new(worst <= 1e-8, format!("100 unitaries, max residual {worst:.2e} (≤ 1e-8)"))
}

fn run_cli(args: &[String]) -> (Vec<u8>, Option<i32>) {
    let o = Command::new(env!("CARGO_BIN_EXE_steerlab")).args(args).output().expect("binary runs");
    (o.stdout, o.status.code())
}

fn determinism() -> Verdict {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let dir = std::env::temp_dir().join(format!("steerlab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let tx = |k: &str| dir.join(k).display().to_string();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let commands = [
        s(&["verify"]),
        s(&["verify", "--format", "csv", "--seed", "9"]),
        s(&["ghjw", "--config", &data.join("photon_p07.json").display().to_string()]),
        s(&["ghjw", "--config", &data.join("spin_cases.json").display().to_string()]),
        s(&["photon-trick", "--basis", "diagonal", "--pairs", "20000", "--seed", "3"]),
        s(&["photon-trick", "--ordering", "alice-first", "--format", "csv", "--pairs", "5000"]),
        s(&["fable", "--strategy", "case2", "--ordering", "last", "--pairs", "20000", "--seed", "5"]),
        s(&["fable", "--prep", "direct1", "--format", "csv", "--pairs", "5000", "--seed", "6"]),
    ];
    let mut differing = Vec::new();
    for (i, cmd) in commands.iter().enumerate() {
        let mut with_tx = cmd.clone();
        if cmd[0] == "fable" || cmd[0] == "photon-trick" {
            with_tx.extend(["--transcript".into(), tx(&format!("t{i}.csv"))]);
        }
        let (a, ca) = run_cli(&with_tx);
        let ta = std::fs::read(tx(&format!("t{i}.csv"))).ok();
        let (b, cb) = run_cli(&with_tx);
        let tb = std::fs::read(tx(&format!("t{i}.csv"))).ok();
        if a != b || ca != cb || ta != tb || a.is_empty() {
            differing.push(cmd.join(" "));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Verdict::new(
        differing.is_empty(),
        format!("{} commands run twice, byte-identical stdout and transcripts; differing: {differing:?}", commands.len()),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 8] = [
        ("identity suite", identity_suite),
        ("steering construction exactness", ghjw_exactness),
        ("photon trick", photon_trick),
        ("fable fractions", fable_fractions),
        ("exact identification", exact_identification),
        ("indistinguishability", indistinguishability),
        ("rotational invariance", rotational_invariance),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failures += 1;
        }
        println!("[{}] criterion {}: {name}: {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
