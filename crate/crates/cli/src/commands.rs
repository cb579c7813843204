use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use lrc::code::{
    d_opt, d_opt_vector, discover_locality, exact_distance, label_for_gap, repair,
    sampled_weight_bound, verify_locality, Budget, Measured,
};
use lrc::construct::{
    construct_almost_optimal, default_partition, random_lrc, LrcParams, PartitionSpec,
};
use lrc::format;
use lrc::quasi::{discover_vector_locality, family_build, quasi_params, verify_vector_locality};
use lrc::simulate::simulate_repair;
use lrc::transforms::{enlarge, puncture, EnlargeOptions};
use lrc::{Field, LinearCode, LocalityAssignment};
use serde_json::json;

use crate::report::Report;
use crate::{Command, Construct, FieldArgs, ParamArgs, Quasi};

pub fn run(command: &Command, budget: Budget, report: &mut Report) -> Result<()> {
    match command {
        Command::Bound(p) => bound(*p, report),
        Command::Mindist { code, sample, seed } => mindist(code, *sample, *seed, budget, report),
        Command::Verify {
            code,
            locality,
            r,
            delta,
            discover,
            work_cap,
        } => {
            let code = read_code(code)?;
            let assignment = match (locality, discover) {
                (Some(path), false) => read_locality(path)?,
                _ => discover_locality(&code, *r, *delta, *work_cap)?,
            };
            verify(&code, &assignment, *r, *delta, budget, report)
        }
        Command::Construct(c) => construct(c, budget, report),
        Command::Enlarge {
            code,
            locality,
            r,
            delta,
            seed,
            d,
            samples,
        } => {
            let code = read_code(code)?;
            let assignment = read_locality(locality)?;
            report.set("seed", seed);
            let opts = EnlargeOptions {
                seed: *seed,
                max_samples: *samples,
                budget,
            };
            let out = enlarge(&code, &assignment, *r, *delta, *d, opts)?;
            describe(&out.code, report);
            report.set("r", r + 1);
            report.set("delta", delta);
            let bound = d_opt(out.code.n(), out.code.k(), r + 1, *delta)?;
            let gap = bound - out.witness.output_distance.value as i64;
            report.set("d", out.witness.output_distance);
            report.set("d_opt", bound);
            report.set("gap", gap);
            report.set("label", label_for_gap(gap, *delta));
            report.set("witness", &out.witness);
            report.set("repair_sets", out.assignment.sets());
            report.artifact("code", format::write_code(&out.code));
            report.artifact("loc", format::write_locality(&out.assignment));
            Ok(())
        }
        Command::Puncture {
            code,
            locality,
            coord,
        } => {
            let code = read_code(code)?;
            let assignment = read_locality(locality)?;
            let (out, sets) = puncture(&code, &assignment, *coord)?;
            report.set("coord", coord.unwrap_or(1));
            describe(&out, report);
            report.set("d_input", distance_or_null(&code, budget));
            report.set("d", distance_or_null(&out, budget));
            report.set("repair_sets", sets.sets());
            report.artifact("code", format::write_code(&out));
            report.artifact("loc", format::write_locality(&sets));
            Ok(())
        }
        Command::Quasi(Quasi::Verify { spec, locality, r }) => {
            quasi_verify(spec, locality.as_deref(), *r, report)
        }
        Command::Repair {
            code,
            locality,
            delta,
            word,
            message,
            erase,
        } => {
            let code = read_code(code)?;
            let assignment = read_locality(locality)?;
            repair_word(
                &code,
                &assignment,
                *delta,
                word.as_deref(),
                message.as_deref(),
                erase,
                report,
            )
        }
        Command::Simulate {
            code,
            locality,
            delta,
            trials,
            model,
            seed,
        } => {
            let code = read_code(code)?;
            let assignment = read_locality(locality)?;
            describe(&code, report);
            let stats = simulate_repair(&code, &assignment, *delta, *trials, *model, *seed)?;
            for (key, value) in serde_json::to_value(&stats)?.as_object().expect("struct") {
                report.set(key, value);
            }
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_code(path: &Path) -> Result<LinearCode> {
    format::parse_code(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn read_locality(path: &Path) -> Result<LocalityAssignment> {
    format::parse_locality(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn field_of(args: &FieldArgs) -> Result<Field> {
    Ok(Field::with_order(args.q, args.poly)?)
}

fn params_of(p: ParamArgs) -> Result<LrcParams> {
    Ok(LrcParams::new(p.n, p.k, p.r, p.delta)?)
}

fn partition_of(sizes: Option<&[usize]>, params: &LrcParams) -> Result<PartitionSpec> {
    Ok(match sizes {
        Some(s) => PartitionSpec::new(s.to_vec(), params)?,
        None => default_partition(params)?,
    })
}

fn describe(code: &LinearCode, report: &mut Report) {
    report.set("n", code.n());
    report.set("k", code.k());
    report.set("q", code.field().order());
}

fn distance_or_null(code: &LinearCode, budget: Budget) -> Option<Measured> {
    exact_distance(code, budget).ok()
}

fn bound(p: ParamArgs, report: &mut Report) -> Result<()> {
    report.set("n", p.n);
    report.set("k", p.k);
    report.set("r", p.r);
    report.set("delta", p.delta);
    report.set("d_opt", d_opt(p.n, p.k, p.r, p.delta)?);
    report.set("d_opt_vector", d_opt_vector(p.n, p.k, p.r)?);
    Ok(())
}

fn mindist(
    path: &Path,
    sample: Option<usize>,
    seed: u64,
    budget: Budget,
    report: &mut Report,
) -> Result<()> {
    let code = read_code(path)?;
    describe(&code, report);
    match sample {
        Some(samples) => {
            report.set("seed", seed);
            report.set("samples", samples);
            report.set("d_upper", sampled_weight_bound(&code, samples, seed));
            report.set("exact", false);
        }
        None => {
            let m = exact_distance(&code, budget)?;
            report.set("d", m.value);
            report.set("method", m.method);
            report.set("exact", m.exact);
        }
    }
    Ok(())
}

fn verify(
    code: &LinearCode,
    assignment: &LocalityAssignment,
    r: usize,
    delta: usize,
    budget: Budget,
    report: &mut Report,
) -> Result<()> {
    describe(code, report);
    report.set("r", r);
    report.set("delta", delta);
    let loc = verify_locality(code, assignment, r, delta);
    let d = exact_distance(code, budget)?;
    let bound = d_opt(code.n(), code.k(), r, delta)?;
    let gap = bound - d.value as i64;
    report.set("d", d.value);
    report.set("method", d.method);
    report.set("d_opt", bound);
    report.set("gap", gap);
    report.set("locality", if loc.all_pass() { "pass" } else { "fail" });
    report.set("failing_symbols", loc.failing_symbols());
    if loc.all_pass() {
        report.set("label", label_for_gap(gap, delta));
    } else {
        report.fail();
    }
    report.set("repair_sets", assignment.sets());
    Ok(())
}

fn construct(c: &Construct, budget: Budget, report: &mut Report) -> Result<()> {
    match c {
        Construct::AlmostOptimal {
            params,
            field,
            partition,
            seed,
            retries,
        } => {
            report.set("seed", seed);
            let params = params_of(*params)?;
            let field = field_of(field)?;
            let part = partition_of(partition.as_deref(), &params)?;
            let built =
                construct_almost_optimal(&params, &field, Some(&part), *seed, *retries, budget)?;
            describe(&built.code, report);
            for (key, value) in serde_json::to_value(&built.report)?
                .as_object()
                .expect("struct")
            {
                report.set(key, value);
            }
            report.artifact("code", format::write_code(&built.code));
            report.artifact("loc", format::write_locality(&built.assignment));
        }
        Construct::Random {
            params,
            field,
            partition,
            seed,
            check,
        } => {
            report.set("seed", seed);
            let params = params_of(*params)?;
            let field = field_of(field)?;
            let part = partition_of(partition.as_deref(), &params)?;
            let draw = random_lrc(&params, &field, &part, *seed)?;
            report.set("params", params);
            report.set("q", field.order());
            report.set("partition", &draw.partition);
            report.set("z", draw.floor.z);
            report.set("floor", draw.floor.value);
            report.set("permutation", &draw.permutation);
            let code = draw.code().ok();
            report.set("full_rank", code.is_some());
            if *check {
                let measured = match &code {
                    Some(c) => Some(exact_distance(c, budget)?),
                    None => None,
                };
                report.set("measured_d", measured);
                report.set(
                    "floor_met",
                    measured.is_some_and(|m| m.value >= draw.floor.value),
                );
            }
            if let Some(code) = code {
                report.artifact("code", format::write_code(&code));
            }
            report.artifact("loc", format::write_locality(&draw.assignment));
        }
        Construct::Family { name, i } => {
            let inst = family_build(*name, *i)?;
            let (n, k, d, r) = name.parameters(*i);
            report.set("family", name);
            report.set("i", i);
            report.set("claimed", json!({"n": n, "k": k, "d": d, "r": r}));
            report.set("bits", inst.spec.bits());
            report.set("blocks", &inst.blocks);
            report.artifact("quc", format::write_quasi_spec(&inst.spec));
        }
    }
    Ok(())
}

fn quasi_verify(path: &Path, locality: Option<&Path>, r: usize, report: &mut Report) -> Result<()> {
    let spec =
        format::parse_quasi_spec(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let params = quasi_params(&spec);
    if !params.size_log2.is_multiple_of(2) {
        bail!(
            "code size 2^{} is not a power of 4, so k is not an integer",
            params.size_log2
        );
    }
    let k = params.size_log2 / 2;
    report.set("n", params.n);
    report.set("k", k);
    report.set("d", params.d);
    report.set("r", r);
    report.set("degenerate", params.degenerate);
    report.set("constant_coordinates", &params.constant_coordinates);
    let bound = d_opt_vector(params.n, k, r)?;
    report.set("bound_eq2", bound);
    let entries = match locality {
        Some(p) => verify_vector_locality(&spec, &read_locality(p)?, r).entries,
        None => match discover_vector_locality(&spec, r, &[]) {
            Ok(a) => verify_vector_locality(&spec, &a, r).entries,
            Err(lrc::Error::InvalidLocality(msg)) => {
                report.set("optimal", false);
                report.set("locality_error", msg);
                report.fail();
                return Ok(());
            }
            Err(e) => return Err(e.into()),
        },
    };
    let local = entries.iter().all(|e| e.pass);
    report.set("optimal", local && params.d as i64 == bound);
    report.set("locality", if local { "pass" } else { "fail" });
    report.set("per_symbol_locality", &entries);
    if !local {
        report.fail();
    }
    Ok(())
}

fn repair_word(
    code: &LinearCode,
    assignment: &LocalityAssignment,
    delta: usize,
    word: Option<&Path>,
    message: Option<&[u32]>,
    erase: &[usize],
    report: &mut Report,
) -> Result<()> {
    describe(code, report);
    report.set("delta", delta);
    let (original, mut received) = match (word, message) {
        (Some(path), _) => {
            let w = format::parse_word(&read(path)?)
                .with_context(|| format!("in {}", path.display()))?;
            (None, w)
        }
        (None, Some(msg)) => {
            let w = code.encode(msg)?;
            let received = w.iter().map(|&v| Some(v)).collect();
            (Some(w), received)
        }
        (None, None) => bail!("one of --word or --message is required"),
    };
    if let Some(&bad) = erase.iter().find(|&&j| j == 0 || j > received.len()) {
        bail!("--erase {bad} is outside 1..={}", received.len());
    }
    for &j in erase {
        received[j - 1] = None;
    }
    report.set("erased", erasures(&received));
    report.set("received", format::write_word(&received).trim_end());
    if let Some(w) = &original {
        report.set("original", w);
    }
    let out = repair(code, assignment, &received, delta)?;
    report.set("repaired", &out.word);
    report.set("max_reads", out.max_reads());
    report.set("steps", &out.steps);
    if let Some(w) = &original {
        let same = *w == out.word;
        report.set("matches_original", same);
        if !same {
            report.fail();
        }
    }
    Ok(())
}

fn erasures(word: &[Option<u32>]) -> Vec<usize> {
    word.iter()
        .enumerate()
        .filter(|(_, v)| v.is_none())
        .map(|(i, _)| i + 1)
        .collect()
}
