use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use compression_core::compression::{
    compress, cost, cover_mass, energy, entropy, gap, gap_sq, mass, measure, rank, rank_sq,
};
use compression_core::experiments::{
    anning_lower_bound, erdos_straus_solve, integer_distance_line, power_sum_search,
    product_search, rational_distance_family, sandwich_search, unit_distance_pairs,
    unit_gap_point, write_erdos_straus_csv, write_json_lines, ErdosStrausSearch,
    ExistenceWitness, SandwichTheorem, UNIT_DISTANCE_TOL,
};
use compression_core::graph::build_graph;
use compression_core::sweep::{run_sweep, SweepConfig};
use compression_core::walk::{generate_walk, length_report, write_length_csv, Walk, WalkPolicy, SEGMENT_TOL};
use compression_core::{Error, NatTuple, Rat, Scalar, Scale, Tuple};
use serde_json::{json, Map, Value};

use crate::args::*;
use crate::output::{emit, write_file, OUT_DIR_VAR};

/// Exit status when a sweep finishes but finds hard violations.
pub const EXIT_VIOLATIONS: u8 = 3;

pub fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.verb {
        Verb::Eval(a) => eval(a),
        Verb::Sweep(a) => sweep(a),
        Verb::Search(a) => search(a),
        Verb::Walk(a) => walk(a),
        Verb::Graph(a) => graph(a),
        Verb::Experiment(e) => experiment(e),
    }
    .map(|code| code.unwrap_or(0))
}

enum Stat<S> {
    Scalar(S),
    Float(f64),
    Tuple(Tuple<S>),
}

fn stat_of<S: Scalar>(x: &Tuple<S>, m: Scale, stat: &str, s: Option<u32>) -> anyhow::Result<Stat<S>> {
    Ok(match stat {
        "mass" => Stat::Scalar(mass(x, m)),
        "entropy" => Stat::Scalar(entropy(x, m)),
        "gap_sq" => Stat::Scalar(gap_sq(x, m)),
        "rank_sq" => Stat::Scalar(rank_sq(x, m)),
        "measure" => Stat::Scalar(measure(x, m)),
        "cover_mass" | "cover" => {
            let s = s.context("cover_mass needs --s")?;
            Stat::Scalar(cover_mass(x, s)?)
        }
        "rank" => Stat::Float(rank(x, m)),
        "gap" => Stat::Float(gap(x, m)),
        "energy" => Stat::Float(energy(x, m)),
        "cost" => Stat::Float(cost(x, m)),
        "compress" => Stat::Tuple(compress(x, m)),
        other => bail!(
            "unknown statistic {other:?}; expected one of mass, entropy, gap_sq, gap, rank_sq, \
             rank, energy, measure, cover_mass, cost, compress"
        ),
    })
}

fn eval(a: EvalArgs) -> anyhow::Result<Option<u8>> {
    let m = Scale::new(a.m)?;
    let line = if a.float {
        let x = parse_f64_tuple(&a.tuple)?;
        match stat_of(&x, m, &a.stat, a.s)? {
            Stat::Scalar(v) | Stat::Float(v) => format!("{v:?}"),
            Stat::Tuple(t) => format!("{:?}", t.coords()),
        }
    } else {
        let x = parse_rat_tuple(&a.tuple)?;
        match stat_of(&x, m, &a.stat, a.s)? {
            Stat::Scalar(v) => format!("{v} ({:?})", v.to_f64()),
            Stat::Float(v) => format!("{v:?}"),
            Stat::Tuple(t) => {
                let exact: Vec<String> = t.iter().map(|c| c.to_string()).collect();
                format!("({}) ({:?})", exact.join(", "), t.to_f64().coords())
            }
        }
    };
    println!("{line}");
    Ok(None)
}

/// Parses TOML, or JSON when the text starts with `{`, into a JSON value.
fn read_config(path: &Path) -> anyhow::Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(&text)?)
    } else {
        toml::from_str(&text).map_err(|e| Error::Config(e.to_string()).into())
    }
}

fn sweep_config(a: &SweepArgs) -> anyhow::Result<SweepConfig> {
    let mut merged = Map::new();
    let mut put = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            merged.insert(k.to_string(), v);
        }
    };
    put("seed", a.seed.map(Value::from));
    put("n_min", a.n_min.map(Value::from));
    put("n_max", a.n_max.map(Value::from));
    put("coord_max", a.coord_max.map(Value::from));
    put("samples", a.samples.map(Value::from));
    put("m_max", a.m.map(Value::from));
    put(
        "inequalities",
        a.inequalities
            .as_ref()
            .map(|s| Value::from(s.split(',').map(|i| i.trim().to_string()).collect::<Vec<_>>())),
    );
    if let Some(path) = &a.config {
        match read_config(path)? {
            Value::Object(file) => merged.extend(file),
            _ => bail!("{} is not a table", path.display()),
        }
    }
    let missing: Vec<&str> = ["seed", "n_min", "n_max", "coord_max", "samples", "inequalities"]
        .into_iter()
        .filter(|k| !merged.contains_key(*k))
        .collect();
    if !missing.is_empty() {
        bail!("sweep is missing {} (pass flags or --config)", missing.join(", "));
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| Error::Config(e.to_string()).into())
}

fn sweep(a: SweepArgs) -> anyhow::Result<Option<u8>> {
    let cfg = sweep_config(&a)?;
    let report = run_sweep(&cfg, a.jobs.max(1))?;
    let csv = report.to_csv()?;
    match a.out.clone().or_else(|| std::env::var_os(OUT_DIR_VAR).map(PathBuf::from)) {
        Some(dir) => {
            write_file(&dir.join("sweep_report.csv"), csv.as_bytes())?;
            write_file(&dir.join("sweep_report.json"), report.to_json()?.as_bytes())?;
        }
        None => print!("{csv}"),
    }
    let violations = report.total_violations();
    eprintln!("sweep: {} samples, {violations} hard violations", cfg.samples);
    Ok((violations > 0).then_some(EXIT_VIOLATIONS))
}

fn one_witness(a: &SearchArgs, n: usize, l: u64, m: Scale) -> compression_core::Result<ExistenceWitness> {
    match a.theorem.as_str() {
        "power_sum" => {
            let s = a.s.ok_or_else(|| Error::Precondition("power_sum needs --s".into()))?;
            power_sum_search(n, l, s)
        }
        "product" => product_search(n, l, a.k),
        other => sandwich_search(n, l, a.k, m, other.parse::<SandwichTheorem>()?),
    }
}

fn search(a: SearchArgs) -> anyhow::Result<Option<u8>> {
    let m = Scale::new(a.m)?;
    let (ns, ls) = (parse_range(&a.n)?, parse_range(&a.l)?);
    let single = ns.start() == ns.end() && ls.start() == ls.end();
    let mut found = Vec::new();
    let mut skipped = 0usize;
    for n in ns {
        for l in ls.clone() {
            match one_witness(&a, n as usize, l, m) {
                Ok(w) => found.push(w),
                Err(e @ Error::Config(_)) => return Err(e.into()),
                Err(e) if single => return Err(e.into()),
                Err(_) => skipped += 1,
            }
        }
    }
    if found.is_empty() {
        bail!("no (n, L) pair in range satisfies the constraints of {}", a.theorem);
    }
    if skipped > 0 {
        eprintln!("search: skipped {skipped} infeasible (n, L) pairs");
    }
    let mut buf = Vec::new();
    write_json_lines(&found, &mut buf)?;
    emit(a.out.out.as_deref(), "witnesses.jsonl", &buf)?;
    Ok(None)
}

fn walk(a: WalkArgs) -> anyhow::Result<Option<u8>> {
    let policy: WalkPolicy = match &a.config {
        Some(path) => serde_json::from_value(read_config(path)?)
            .map_err(|e| Error::Config(e.to_string()))?,
        None => WalkPolicy::default(),
    };
    let x0 = parse_rat_tuple(&a.start)?;
    let w = generate_walk(&x0, Scale::new(a.m)?, a.steps, &policy, a.seed)?;
    if let Some(path) = &a.length_csv {
        let mut buf = Vec::new();
        write_length_csv(&[length_report(&w, 0.0)?], &mut buf)?;
        write_file(path, &buf)?;
    }
    emit(a.out.out.as_deref(), "walk.json", (w.to_json() + "\n").as_bytes())?;
    Ok(None)
}

fn graph(a: GraphArgs) -> anyhow::Result<Option<u8>> {
    let text = std::fs::read_to_string(&a.walk).with_context(|| format!("reading {}", a.walk.display()))?;
    let g = match Walk::<Rat>::from_json(&text) {
        Ok(w) => build_graph(&w, 0.0)?.to_json(),
        Err(_) => build_graph(&Walk::<f64>::from_json(&text)?, SEGMENT_TOL)?.to_json(),
    };
    emit(a.out.out.as_deref(), "graph.json", (g + "\n").as_bytes())?;
    Ok(None)
}

fn nat_tuple(s: &str) -> anyhow::Result<NatTuple> {
    let coords = s
        .split(',')
        .map(|c| c.trim().parse::<u64>().with_context(|| format!("not a natural number: {c:?}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(NatTuple::new(coords)?)
}

fn experiment(e: Experiment) -> anyhow::Result<Option<u8>> {
    match e {
        Experiment::ErdosStraus { n, bound, out } => {
            let rows = parse_range(&n)?
                .map(|n| erdos_straus_solve(n, bound))
                .collect::<compression_core::Result<Vec<ErdosStrausSearch>>>()?;
            let unsolved = rows.iter().filter(|r| r.solution.is_none()).count();
            if unsolved > 0 {
                eprintln!("erdos-straus: {unsolved} values of n unsolved within bound {bound}");
            }
            let mut buf = Vec::new();
            write_erdos_straus_csv(&rows, &mut buf)?;
            emit(out.out.as_deref(), "erdos_straus.csv", &buf)?;
        }
        Experiment::UnitDistance { n, count, seed, out } => {
            let mut points = Vec::with_capacity(2 * count);
            for i in 0..count as u64 {
                let x = unit_gap_point(n, seed.wrapping_add(i))?;
                points.push(compress(&x, Scale::ONE).into_coords());
                points.insert(points.len() - 1, x.into_coords());
            }
            let pairs = unit_distance_pairs(&points, UNIT_DISTANCE_TOL)?;
            let doc = json!({ "dimension": n, "seed": seed, "points": points, "unit_pairs": pairs });
            emit(out.out.as_deref(), "unit_distance.json", (doc.to_string() + "\n").as_bytes())?;
        }
        Experiment::RationalDistance { tuple, m, depth, out } => {
            let fam = rational_distance_family(&nat_tuple(&tuple)?, Scale::new(m)?, depth)?;
            let text = serde_json::to_string(&fam)? + "\n";
            emit(out.out.as_deref(), "rational_distance.json", text.as_bytes())?;
        }
        Experiment::IntegerDistance { tuple, m, bound, out } => {
            let line = integer_distance_line(&nat_tuple(&tuple)?, Scale::new(m)?, bound)?;
            let text = serde_json::to_string(&line)? + "\n";
            emit(out.out.as_deref(), "integer_distance.json", text.as_bytes())?;
        }
        Experiment::Anning { n, cluster, max_gap } => {
            println!("{:?}", anning_lower_bound(n, cluster, max_gap)?);
        }
    }
    Ok(None)
}
