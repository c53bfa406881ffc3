//! Monte-Carlo simulation and benchmarking.

use std::time::Instant;

use anyhow::{bail, Result};
use gabring::counter;
use gabring::format::CodeConfig;
use gabring::gabidulin::sample_error;
use gabring::{GabidulinCode, RankProfile, RingElement, SkewPoly, Tower};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{load_code, write_output, BenchArgs, Decoder, SimulateArgs, Status};

/// The independent random stream of one trial.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn corrupt(code: &GabidulinCode, profile: &RankProfile, rng: &mut ChaCha8Rng) -> Result<(SkewPoly, Vec<RingElement>)> {
    let tower = code.tower();
    let f = code.random_message(rng);
    let e = sample_error(tower, code.n(), profile, rng)?;
    let word = code.encode(&f)?.iter().zip(&e.error).map(|(c, x)| tower.ext().add(c, x)).collect();
    Ok((f, word))
}

enum ProfileChoice {
    Fixed(RankProfile),
    AnyOfRank(Vec<RankProfile>),
}

impl ProfileChoice {
    fn pick(&self, rng: &mut ChaCha8Rng) -> RankProfile {
        match self {
            ProfileChoice::Fixed(p) => p.clone(),
            ProfileChoice::AnyOfRank(all) => all[rng.gen_range(0..all.len())].clone(),
        }
    }
}

struct Row {
    trial: u64,
    profile: RankProfile,
    success: bool,
    decoder: Decoder,
    wall_ns: u128,
}

pub(crate) fn cmd_simulate(args: &SimulateArgs) -> Result<Status> {
    let code = load_code(&args.config)?;
    let tower = code.tower();
    let limit = code.n().min(tower.m());
    let choice = match (&args.profile, args.rank) {
        (Some(p), _) => {
            let p = p.with_length(tower.r())?;
            if p.rank() > limit {
                bail!("profile {p} has rank {} but at most {limit} is realizable", p.rank());
            }
            ProfileChoice::Fixed(p)
        }
        (None, Some(t)) if t > limit => bail!("rank {t} exceeds the realizable maximum {limit}"),
        (None, Some(t)) => ProfileChoice::AnyOfRank(RankProfile::all_with_rank(t, tower.r())),
        (None, None) => bail!("one of --rank or --profile is required"),
    };
    let rows: Vec<Vec<Row>> = (0..args.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(args.seed, trial);
            let profile = choice.pick(&mut rng);
            let (f, word) = corrupt(&code, &profile, &mut rng)?;
            args.decoder
                .variants()
                .iter()
                .map(|&decoder| {
                    let start = Instant::now();
                    let result = decoder.run(&code, &word)?;
                    let wall_ns = start.elapsed().as_nanos();
                    let success = result.message() == Some(&f);
                    Ok(Row { trial, profile: profile.clone(), success, decoder, wall_ns })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["trial", "rank", "profile", "success", "decoder", "wall_time"])?;
    for row in rows.iter().flatten() {
        let wall = if args.no_timing { String::new() } else { format!("{:.9}", row.wall_ns as f64 * 1e-9) };
        csv.write_record([
            row.trial.to_string(),
            row.profile.rank().to_string(),
            row.profile.to_string(),
            row.success.to_string(),
            row.decoder.name().to_string(),
            wall,
        ])?;
    }
    write_output(args.output.as_deref(), &csv.into_inner()?)?;
    for &decoder in args.decoder.variants() {
        let ok = rows.iter().flatten().filter(|r| r.decoder == decoder && r.success).count();
        eprintln!("{}: {ok}/{} decoded", decoder.name(), args.trials);
    }
    Ok(Status::Done)
}

fn median<T: Ord + Copy>(mut xs: Vec<T>) -> T {
    xs.sort_unstable();
    xs[xs.len() / 2]
}

pub(crate) fn cmd_bench(args: &BenchArgs) -> Result<Status> {
    let (p, r, s, rate) = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let config = CodeConfig::from_json(&text)?;
            let code = config.build()?;
            let rate = code.k() as f64 / code.n() as f64;
            (config.params.p, config.params.r, config.params.s, rate)
        }
        None => (2, 2, 1, 0.5),
    };
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["n", "decoder", "median_ns", "ops_count"])?;
    for &n in &args.n_grid {
        if n == 0 {
            bail!("lengths in --n-grid must be positive");
        }
        let k = ((rate * n as f64).round() as usize).clamp(1, n);
        let code = GabidulinCode::with_power_basis(Tower::auto(p, r, s, n)?, n, k)?;
        let profile = RankProfile::new(vec![code.radius()]);
        for &decoder in args.decoder.variants() {
            let mut times = Vec::new();
            let mut ops = Vec::new();
            for trial in 0..args.trials {
                let mut rng = trial_rng(args.seed, trial);
                let (f, word) = corrupt(&code, &profile, &mut rng)?;
                let start = Instant::now();
                let (result, counts) = counter::measure(|| decoder.run(&code, &word));
                times.push(start.elapsed().as_nanos());
                ops.push(counts.mul);
                if result?.message() != Some(&f) {
                    bail!("{} decoder failed at n = {n}, trial {trial}", decoder.name());
                }
            }
            let time = if args.no_timing { String::new() } else { median(times).to_string() };
            csv.write_record([n.to_string(), decoder.name().to_string(), time, median(ops).to_string()])?;
        }
    }
    write_output(args.output.as_deref(), &csv.into_inner()?)?;
    Ok(Status::Done)
}
