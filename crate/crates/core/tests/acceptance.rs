//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Each criterion runs its report checks one after another
//! so its wall time is meaningful.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use zitterlab::cli::report::{all_checks, CheckRecord};
use zitterlab::model::PhysicalConstants;
use zitterlab::roots::{render_domain_coloring, CharEq, Region};

struct Criterion {
    number: u32,
    title: &'static str,
    checks: &'static [&'static str],
    time_limit: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "rest-instability root",
        checks: &["eq22_real_root", "roots_rest_set"],
        time_limit: Some(Duration::from_secs(1)),
    },
    Criterion {
        number: 2,
        title: "root distribution",
        checks: &["roots_right_half_plane", "roots_argument_principle"],
        time_limit: Some(Duration::from_secs(10)),
    },
    Criterion {
        number: 3,
        title: "spectrum properties",
        checks: &["spectrum_beta_independence", "spectrum_linear_in_n"],
        time_limit: None,
    },
    Criterion {
        number: 4,
        title: "series identities",
        checks: &[
            "series_l_expansion",
            "series_binomial",
            "series_d_full_beta",
            "series_d_first_order",
            "series_reversion",
            "series_self_force",
            "series_linear_chain",
            "series_exp_closed_form",
        ],
        time_limit: Some(Duration::from_secs(5)),
    },
    Criterion {
        number: 5,
        title: "potential coefficients",
        checks: &["eq44_qn_sequence", "potential_qn_quadrature"],
        time_limit: None,
    },
    Criterion {
        number: 6,
        title: "geometry identities",
        checks: &["geometry_pythagoras", "geometry_denominator", "geometry_implicit_delay"],
        time_limit: None,
    },
    Criterion {
        number: 7,
        title: "potential decomposition",
        checks: &[
            "potential_decomposition",
            "potential_series_convergence",
            "potential_q_uniform",
            "potential_rest_energy",
        ],
        time_limit: None,
    },
    Criterion {
        number: 8,
        title: "double-well structure",
        checks: &["duffing_stationary_points", "duffing_origin_maximum"],
        time_limit: None,
    },
    Criterion {
        number: 9,
        title: "rest instability dynamics",
        checks: &["dynamics_rest_growth", "dynamics_full_run", "dynamics_saturation", "dynamics_truncated_rate"],
        time_limit: Some(Duration::from_secs(60)),
    },
    Criterion {
        number: 10,
        title: "uniform motion",
        checks: &[
            "eq28_uniform_invariance",
            "uniform_growth_b05",
            "uniform_growth_b09",
            "uniform_time_dilation_b09",
        ],
        time_limit: None,
    },
    Criterion {
        number: 11,
        title: "physical numbers",
        checks: &["model_dumbbell_radius", "model_zitter_period_classical", "model_zitter_period_dumbbell"],
        time_limit: None,
    },
];

fn run_criterion(c: &Criterion, k: &PhysicalConstants) -> (bool, String) {
    let checks = all_checks();
    let start = Instant::now();
    let mut records: Vec<CheckRecord> = Vec::new();
    for id in c.checks {
        match checks.iter().find(|ch| ch.id == *id) {
            Some(ch) => records.push(ch.run(k)),
            None => return (false, format!("check {id} missing")),
        }
    }
    let elapsed = start.elapsed();
    let mut pass = records.iter().all(|r| r.pass);
    let mut parts: Vec<String> = records
        .iter()
        .map(|r| {
            let mark = if r.pass { "ok" } else { "FAIL" };
            match &r.error {
                Some(e) => format!("{} {mark} ({e})", r.check_id),
                None => format!("{} {mark} (expected {:.6e}, measured {:.6e})", r.check_id, r.expected, r.measured),
            }
        })
        .collect();
    if let Some(limit) = c.time_limit {
        let in_time = elapsed < limit;
        pass &= in_time;
        parts.push(format!("{:.2?} of {:?}{}", elapsed, limit, if in_time { "" } else { " EXCEEDED" }));
    } else {
        parts.push(format!("{elapsed:.2?}"));
    }
    (pass, parts.join("; "))
}

fn report_bytes(threads: usize) -> Vec<u8> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    pool.install(|| {
        let mut out = Vec::new();
        let mut err = Vec::new();
        zitterlab::cli::run(["zitterlab", "report"], &mut out, &mut err);
        out
    })
}

fn ppm_bytes(threads: usize) -> Vec<u8> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    pool.install(|| {
        let eq = CharEq::new(0.3).expect("valid beta");
        let region = Region::new(-10.0, 10.0, -100.0, 100.0).expect("valid region");
        render_domain_coloring(&eq, &region, 200, 400).expect("render").to_ppm()
    })
}

fn determinism() -> (bool, String) {
    let many = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(4).max(4);
    let start = Instant::now();
    let (r1, rn, r_again) = (report_bytes(1), report_bytes(many), report_bytes(many));
    let (p1, pn) = (ppm_bytes(1), ppm_bytes(many));
    let report_same = !r1.is_empty() && r1 == rn && rn == r_again;
    let ppm_same = !p1.is_empty() && p1 == pn;
    let detail = format!(
        "report {} bytes, identical across 1/{many} threads and repeats: {report_same}; ppm {} bytes identical: {ppm_same}; {:.2?}",
        r1.len(),
        p1.len(),
        start.elapsed()
    );
    (report_same && ppm_same, detail)
}

fn main() -> ExitCode {
    let k = PhysicalConstants::codata2018();
    let mut all = true;
    for c in CRITERIA {
        let (pass, detail) = run_criterion(c, &k);
        all &= pass;
        println!("{} criterion {:>2} {}: {detail}", if pass { "PASS" } else { "FAIL" }, c.number, c.title);
    }
    let (pass, detail) = determinism();
    all &= pass;
    println!("{} criterion 12 determinism: {detail}", if pass { "PASS" } else { "FAIL" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
