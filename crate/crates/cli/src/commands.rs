use clap::Args;
use mz_sphere::geometry::{build_compatible_pair, constants, equal_area_partition, sample_uniform};
use mz_sphere::gram::{budget_even_p, budget_tropp, eig_experiment, eig_experiment_with_points, EigStats};
use mz_sphere::io::{self, fmt_f64, json_document};
use mz_sphere::mz::{
    budget_coupon, coupon_budget, coupon_failure_bound, coupon_simulate, det_mz_check, det_required_patches,
    random_mz_experiment, Exponent, MzReport, RandomMzConfig, RandomMzOutcome, TrialSpec, DEFAULT_POINT_CAP,
};
use mz_sphere::rng::{derive_key, label};
use mz_sphere::sphkernels::{check_kernel_bounds, poly_space_dim, KernelBoundReport};
use mz_sphere::{MzError, Result};
use serde::Serialize;

use crate::{parse_exponent, Format, Outcome};

const DEFAULT_P_LIST: &str = "1,2,4,inf";
/// Largest patch count reported by the deterministic search.
const PATCH_SEARCH_CEILING: usize = 1 << 34;

fn usage(msg: impl Into<String>) -> MzError {
    MzError::Domain(msg.into())
}

fn csv_line(cells: &[String]) -> String {
    let mut s = cells.join(",");
    s.push('\n');
    s
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 2)]
    q: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    eta: f64,
    #[arg(long)]
    eps: f64,
    /// Even exponent for the even-p budget.
    #[arg(long, default_value_t = 4)]
    p: usize,
}

#[derive(Serialize)]
struct BudgetRow {
    q: usize,
    n: usize,
    eta: f64,
    eps: f64,
    p: usize,
    d: u64,
    alpha: f64,
    c_thm: f64,
    c_lem: f64,
    tropp: u64,
    even_p: u64,
    /// `None` when the search overflows.
    coupon: Option<u64>,
}

pub fn budget(a: &BudgetArgs, format: Option<Format>) -> Result<Outcome> {
    let c = constants(a.q)?;
    let coupon = match budget_coupon(a.n, a.q, a.eta, a.eps) {
        Ok(v) => Some(v),
        Err(MzError::Overflow(_)) => None,
        Err(e) => return Err(e),
    };
    let row = BudgetRow {
        q: a.q,
        n: a.n,
        eta: a.eta,
        eps: a.eps,
        p: a.p,
        d: poly_space_dim(a.q, a.n)?,
        alpha: c.alpha,
        c_thm: c.c_thm,
        c_lem: c.c_lem,
        tropp: budget_tropp(a.n, a.q, a.eta, a.eps)?,
        even_p: budget_even_p(a.n, a.q, a.p, a.eta, a.eps)?,
        coupon,
    };
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => json_document("budget", &row),
        Format::Csv => {
            let head = "q,n,eta,eps,p,d,alpha,c_thm,c_lem,tropp,even_p,coupon\n";
            let cells = [
                row.q.to_string(),
                row.n.to_string(),
                fmt_f64(row.eta),
                fmt_f64(row.eps),
                row.p.to_string(),
                row.d.to_string(),
                fmt_f64(row.alpha),
                fmt_f64(row.c_thm),
                fmt_f64(row.c_lem),
                row.tropp.to_string(),
                row.even_p.to_string(),
                row.coupon.map_or_else(String::new, |v| v.to_string()),
            ];
            format!("{head}{}", csv_line(&cells))
        }
    };
    Ok(Outcome { text, pass: true })
}

#[derive(Debug, Args)]
pub struct EigsArgs {
    #[arg(long, default_value_t = 2)]
    q: usize,
    /// Comma-separated degrees.
    #[arg(long = "n-list", value_delimiter = ',', default_value = "8,50")]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 0.9)]
    eta: f64,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long, default_value_t = 200)]
    reps: usize,
    /// Sample size per repetition; defaults to the concentration budget.
    #[arg(long)]
    points: Option<usize>,
}

pub fn eigs(a: &EigsArgs, seed: u64, format: Option<Format>) -> Result<Outcome> {
    if !(a.eta > 0.0 && a.eta < 1.0) {
        return Err(usage(format!("eta must lie in (0, 1), got {}", a.eta)));
    }
    let rows = a
        .n_list
        .iter()
        .map(|&n| match a.points {
            Some(points) => eig_experiment_with_points(a.q, n, points, a.reps, seed),
            None => eig_experiment(n, a.q, a.eta, a.eps, a.reps, seed),
        })
        .collect::<Result<Vec<EigStats>>>()?;
    let pass = rows.iter().all(|s| s.within(a.eta));
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => io::eig_table_csv(&rows),
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                eta: f64,
                eps: f64,
                rows: &'a [EigStats],
            }
            json_document("eigs", &Body { eta: a.eta, eps: a.eps, rows: &rows })
        }
    };
    Ok(Outcome { text, pass })
}

#[derive(Debug, Args)]
pub struct CheckDetArgs {
    #[arg(long, default_value_t = 2)]
    q: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    eta: f64,
    /// Patch count; defaults to the smallest count meeting the precondition.
    #[arg(long)]
    m: Option<usize>,
    /// Largest patch count that will be constructed.
    #[arg(long, default_value_t = DEFAULT_POINT_CAP as usize)]
    cap: usize,
    #[arg(long = "p-list", value_delimiter = ',', default_value = DEFAULT_P_LIST, value_parser = parse_exponent)]
    p_list: Vec<Exponent>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum DetOutcome {
    Checked {
        patches: usize,
        required_patches: Option<usize>,
        report: MzReport,
    },
    Infeasible {
        /// `None` when beyond the search ceiling.
        required_patches: Option<usize>,
        cap: usize,
    },
}

pub fn check_det(a: &CheckDetArgs, seed: u64, format: Option<Format>) -> Result<Outcome> {
    let required = det_required_patches(a.q, a.n, a.eta, PATCH_SEARCH_CEILING)?;
    let patches = a.m.or(required);
    let outcome = match patches {
        Some(m) if m <= a.cap => {
            let partition = equal_area_partition(a.q, m)?;
            let points = partition.interior_points(seed);
            let pair = build_compatible_pair(&points, &partition)?
                .complete()
                .ok_or_else(|| usage("interior sample left a patch empty"))?;
            let spec = TrialSpec { n: a.n, eta: a.eta, p_list: a.p_list.clone(), trials: a.trials, seed };
            DetOutcome::Checked { patches: m, required_patches: required, report: det_mz_check(&pair, &points, &spec)? }
        }
        _ => DetOutcome::Infeasible { required_patches: required, cap: a.cap },
    };
    let pass = match &outcome {
        DetOutcome::Checked { report, .. } => report.pass,
        DetOutcome::Infeasible { .. } => true,
    };
    let text = match (format.unwrap_or(Format::Json), &outcome) {
        (Format::Csv, DetOutcome::Checked { report, .. }) => io::report_csv(seed, report),
        (Format::Csv, DetOutcome::Infeasible { .. }) => format!("{}\n{seed},infeasible,,,,,false\n", io::BATCH_HEADER),
        (Format::Json, o) => json_document("check_det", o),
    };
    Ok(Outcome { text, pass })
}

#[derive(Debug, Args)]
pub struct CheckRandomArgs {
    #[arg(long, default_value_t = 2)]
    q: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    eta: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long = "p-list", value_delimiter = ',', default_value = DEFAULT_P_LIST, value_parser = parse_exponent)]
    p_list: Vec<Exponent>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Independent runs; run `i` uses seed `(seed, MZ_SEED, i)`.
    #[arg(long, default_value_t = 1)]
    runs: u64,
    /// Sample size; defaults to the sufficient budget.
    #[arg(long)]
    points: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
    cap: u64,
}

pub fn check_random(a: &CheckRandomArgs, seed: u64, format: Option<Format>) -> Result<Outcome> {
    if a.runs == 0 {
        return Err(usage("runs must be at least 1"));
    }
    let runs = (0..a.runs)
        .map(|i| {
            let run_seed = derive_key(seed, &[label::MZ_SEED, i]);
            let trial = TrialSpec { n: a.n, eta: a.eta, p_list: a.p_list.clone(), trials: a.trials, seed: run_seed };
            let config = RandomMzConfig { points: a.points, cap: a.cap, ..RandomMzConfig::new(a.q, a.eps, trial) };
            Ok((run_seed, random_mz_experiment(&config)?))
        })
        .collect::<Result<Vec<(u64, RandomMzOutcome)>>>()?;
    let violations =
        runs.iter().filter(|(_, o)| matches!(o, RandomMzOutcome::Checked { report, .. } if !report.pass)).count();
    let text = match format.unwrap_or(Format::Json) {
        Format::Csv => io::batch_csv(&runs),
        Format::Json => {
            #[derive(Serialize)]
            struct Run<'a> {
                seed: u64,
                #[serde(flatten)]
                outcome: &'a RandomMzOutcome,
            }
            #[derive(Serialize)]
            struct Body<'a> {
                runs: Vec<Run<'a>>,
                checked: usize,
                occupancy_failures: usize,
                infeasible: usize,
                violations: usize,
            }
            let count = |f: fn(&RandomMzOutcome) -> bool| runs.iter().filter(|(_, o)| f(o)).count();
            json_document(
                "check_random",
                &Body {
                    runs: runs.iter().map(|(seed, outcome)| Run { seed: *seed, outcome }).collect(),
                    checked: count(|o| matches!(o, RandomMzOutcome::Checked { .. })),
                    occupancy_failures: count(|o| matches!(o, RandomMzOutcome::OccupancyFailure { .. })),
                    infeasible: count(|o| matches!(o, RandomMzOutcome::Infeasible { .. })),
                    violations,
                },
            )
        }
    };
    Ok(Outcome { text, pass: violations == 0 })
}

#[derive(Debug, Args)]
pub struct KernelBoundsArgs {
    /// Comma-separated sphere dimensions.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    q: Vec<usize>,
    /// Degrees checked are the powers of two up to this value.
    #[arg(long = "n-max", default_value_t = 32)]
    n_max: usize,
}

pub fn kernel_bounds(a: &KernelBoundsArgs, format: Option<Format>) -> Result<Outcome> {
    if a.n_max == 0 {
        return Err(usage("n-max must be at least 1"));
    }
    let degrees: Vec<usize> = std::iter::successors(Some(1usize), |&n| Some(2 * n)).take_while(|&n| n <= a.n_max).collect();
    let rows = a
        .q
        .iter()
        .flat_map(|&q| degrees.iter().map(move |&n| check_kernel_bounds(q, n)))
        .collect::<Result<Vec<KernelBoundReport>>>()?;
    let pass = rows.iter().all(|r| r.holds);
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                rows: &'a [KernelBoundReport],
                pass: bool,
            }
            json_document("kernel_bounds", &Body { rows: &rows, pass })
        }
        Format::Csv => {
            let mut out = String::from("q,n,l1,l1_bound,sup,sup_bound,deriv_integral,deriv_bound,holds\n");
            for r in &rows {
                let nums = [r.l1, r.l1_bound, r.sup, r.sup_bound, r.deriv_integral, r.deriv_bound].map(fmt_f64);
                out.push_str(&format!("{},{},{},{}\n", r.q, r.n, nums.join(","), r.holds));
            }
            out
        }
    };
    Ok(Outcome { text, pass })
}

#[derive(Debug, Args)]
pub struct CouponArgs {
    /// Number of coupon types.
    #[arg(long)]
    m: u64,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// Draws per experiment; defaults to the budget for `eps`.
    #[arg(long)]
    t: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    reps: u64,
}

#[derive(Serialize)]
struct CouponRow {
    m: u64,
    eps: f64,
    t: u64,
    reps: u64,
    bound: f64,
    empirical: f64,
    /// Binomial standard error at the bound.
    std_error: f64,
    pass: bool,
}

pub fn coupon(a: &CouponArgs, seed: u64, format: Option<Format>) -> Result<Outcome> {
    let t = match a.t {
        Some(t) => t,
        None => coupon_budget(a.m, a.eps)?,
    };
    let bound = coupon_failure_bound(a.m, t)?;
    let empirical = coupon_simulate(a.m, t, a.reps, seed)?;
    let b = bound.clamp(0.0, 1.0);
    let std_error = (b * (1.0 - b) / a.reps as f64).sqrt();
    let pass = empirical <= bound + 5.0 * std_error;
    let row = CouponRow { m: a.m, eps: a.eps, t, reps: a.reps, bound, empirical, std_error, pass };
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => json_document("coupon", &row),
        Format::Csv => {
            let cells = [
                row.m.to_string(),
                fmt_f64(row.eps),
                row.t.to_string(),
                row.reps.to_string(),
                fmt_f64(row.bound),
                fmt_f64(row.empirical),
                fmt_f64(row.std_error),
                row.pass.to_string(),
            ];
            format!("m,eps,t,reps,bound,empirical,std_error,pass\n{}", csv_line(&cells))
        }
    };
    Ok(Outcome { text, pass })
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long, default_value_t = 2)]
    q: usize,
    /// Number of patches.
    #[arg(long)]
    m: usize,
}

pub fn partition(a: &PartitionArgs, format: Option<Format>) -> Result<Outcome> {
    let part = equal_area_partition(a.q, a.m)?;
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => io::partition_json(&part),
        Format::Csv => io::partition_csv(&part),
    };
    Ok(Outcome { text, pass: true })
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 2)]
    q: usize,
    /// Number of points.
    #[arg(long)]
    count: usize,
}

pub fn sample(a: &SampleArgs, seed: u64, format: Option<Format>) -> Result<Outcome> {
    if a.q == 0 {
        return Err(usage("q must be at least 1"));
    }
    let points = sample_uniform(a.q, a.count, seed);
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => io::points_json(&points, seed),
        Format::Csv => io::points_csv(&points),
    };
    Ok(Outcome { text, pass: true })
}
