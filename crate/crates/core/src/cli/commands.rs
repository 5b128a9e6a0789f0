use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use super::output::{emit, write_csv, Recorder};
use super::{
    AcKind, AntiConcentrationArgs, ApproxArgs, Command, Cutoff, GenArgs, GenKind, NoiseArgs, OracleArgs, Source,
    SpectrumArgs, StatsArgs, Theorem1Args,
};
use crate::bits::Bits;
use crate::circuit::{depth_of, NoiseParams};
use crate::ensembles::{
    anti_concentration_estimate, build_fig1a, build_fig1b, AcEnsemble, Fig1bConfig, GeneratorConfig,
};
use crate::error::{Error, Result};
use crate::fast::{
    approximate_distribution, theorem1_experiment, EnsembleSpec, FastConfig, FastEvaluator, TermBudget,
    TruncatedSeries,
};
use crate::fourier::{
    choose_l, clip_and_renormalize, error_statistics, reconstruct_pseudo_all, truncate_spectrum, truncation_bound,
    wht_forward, write_spectrum_jsonl, ConditionalTable, SpectrumTable,
};
use crate::oracle::{
    all_y, joint_table_noisy, joint_tables, output_distribution_noisy, output_distribution_pure, JointTable,
    OracleCaps,
};
use crate::schema::{read_circuit, write_circuit};

/// Slack on emitted oracle probabilities.
const PROB_SLACK: f64 = 1e-9;
const PARSEVAL_TOL: f64 = 1e-12;

pub(super) fn dispatch(cmd: &Command) -> Result<()> {
    let rec = Recorder::start();
    let (metrics, budgets, report) = match cmd {
        Command::Gen(a) => (gen(a)?, vec![], &a.report),
        Command::Oracle(a) => (oracle(a)?, vec![], &a.report),
        Command::Spectrum(a) => {
            let (m, b) = spectrum(a)?;
            (m, b, &a.report)
        }
        Command::Approx(a) => {
            let (m, b) = approx(a)?;
            (m, b, &a.report)
        }
        Command::Theorem1(a) => (theorem1(a)?, vec![], &a.report),
        Command::Anticoncentration(a) => (anticoncentration(a)?, vec![], &a.report),
        Command::Stats(a) => {
            let (m, b) = stats(a)?;
            (m, b, &a.report)
        }
    };
    emit(&rec.finish(cmd, metrics, budgets)?, report.as_deref())
}

fn load(path: &Path, noise: &NoiseArgs) -> Result<(EnsembleSpec, Option<u64>)> {
    let (e, seed) = read_circuit(path)?;
    if noise.is_empty() {
        return Ok((e, seed));
    }
    let np = noise.resolve(e.noise)?;
    Ok((EnsembleSpec::new(e.kind, e.circuit, np)?, seed))
}

fn twirl_or_zero(y: &Option<Bits>, m: usize) -> Result<Bits> {
    match y {
        Some(y) if y.len() != 2 * m => {
            Err(Error::SizeMismatch(format!("twirl string has {} bits, expected 2m = {}", y.len(), 2 * m)))
        }
        Some(y) => Ok(y.clone()),
        None => Ok(Bits::zeros(2 * m)),
    }
}

fn in_range(values: &[f64]) -> bool {
    values.iter().all(|v| (-PROB_SLACK..=1.0 + PROB_SLACK).contains(v))
}

fn rows_by_y(t: &JointTable) -> BTreeMap<String, Vec<f64>> {
    (0..1usize << (2 * t.m())).map(|yi| (Bits::from_u64(yi as u64, 2 * t.m()).to_string(), t.conditional(yi))).collect()
}

fn export(spectrum: &SpectrumTable, path: &Path) -> Result<()> {
    write_spectrum_jsonl(spectrum, BufWriter::new(File::create(path)?))
}

fn parseval(spectrum: &SpectrumTable, table: &JointTable) -> serde_json::Value {
    let lhs: f64 = spectrum.iter().map(|(_, _, v)| v * v).sum();
    let rhs: f64 = table.values().iter().map(|v| v * v).sum();
    json!({ "spectrum_energy": lhs, "table_energy": rhs, "gap": (lhs - rhs).abs(), "pass": (lhs - rhs).abs() <= PARSEVAL_TOL })
}

fn gen(a: &GenArgs) -> Result<serde_json::Value> {
    let noise = a.noise.resolve(NoiseParams::noiseless())?;
    let e = match a.kind {
        GenKind::Fig1a => {
            let mut cfg = GeneratorConfig::new(a.n, a.d, a.seed, a.set.into()).with_noise(noise);
            cfg.measured_wires = a.measured.clone();
            build_fig1a(&cfg)?
        }
        GenKind::Fig1b => {
            let mut cfg = Fig1bConfig::new(a.n, a.clifford_depth, a.t, a.seed).with_noise(noise);
            cfg.measured_wires = a.measured.clone();
            build_fig1b(&cfg)?
        }
    };
    write_circuit(&a.out, &e, Some(a.seed))?;
    Ok(json!({
        "n": e.circuit.n,
        "m": e.m(),
        "r": e.r(),
        "depth": depth_of(&e.circuit),
        "gates": e.circuit.gates.len(),
        "kind": e.kind,
    }))
}

fn oracle(a: &OracleArgs) -> Result<serde_json::Value> {
    let (e, _) = load(&a.circuit, &a.noise)?;
    let caps = OracleCaps::default();
    let c = &e.circuit;
    let y = twirl_or_zero(&a.y, e.m())?;
    let q = output_distribution_pure(c, &y, &caps)?;
    let q_noisy = if e.noise.is_noiseless() {
        q.clone()
    } else {
        output_distribution_noisy(c, &y, &e.noise, &caps)?
    };
    let mut metrics = json!({
        "m": e.m(),
        "r": e.r(),
        "noise": e.noise,
        "y": y,
        "q": q,
        "q_noisy": q_noisy,
        "in_range": in_range(&q) && in_range(&q_noisy),
    });
    if a.joint {
        let (jp, jn) = joint_tables(c, &e.noise, &caps)?;
        metrics["joint"] = json!(rows_by_y(&jp));
        metrics["joint_noisy"] = json!(rows_by_y(&jn));
        metrics["in_range"] = json!(metrics["in_range"] == json!(true) && in_range(jp.values()) && in_range(jn.values()));
    }
    if let Some(path) = &a.spectrum {
        let jn = joint_table_noisy(c, &e.noise, &caps)?;
        let f = wht_forward(&jn);
        export(&f, path)?;
        metrics["spectrum_entries"] = json!(f.len());
        metrics["parseval"] = parseval(&f, &jn);
    }
    Ok(metrics)
}

fn spectrum(a: &SpectrumArgs) -> Result<(serde_json::Value, Vec<TermBudget>)> {
    let (mut e, _) = load(&a.circuit, &a.noise)?;
    if a.noiseless {
        e.noise = NoiseParams::noiseless();
    }
    let caps = OracleCaps::default();
    match a.source {
        Source::Oracle => {
            let table = joint_table_noisy(&e.circuit, &e.noise, &caps)?;
            let f = wht_forward(&table);
            export(&f, &a.out)?;
            Ok((
                json!({ "entries": f.len(), "max_weight": f.max_weight(), "parseval": parseval(&f, &table) }),
                vec![],
            ))
        }
        Source::Fast => {
            let ev = FastEvaluator::new(&e, FastConfig::default())?;
            let series = TruncatedSeries::build(&ev, a.l.resolve(e.m()))?;
            let f = series.spectrum();
            export(&f, &a.out)?;
            Ok((json!({ "entries": f.len(), "max_weight": f.max_weight(), "l": series.l() }), vec![series.budget()]))
        }
    }
}

fn approx(a: &ApproxArgs) -> Result<(serde_json::Value, Vec<TermBudget>)> {
    let loaded = a.circuit.as_deref().map(|p| load(p, &a.noise)).transpose()?;
    let noise = match &loaded {
        Some((e, _)) => e.noise,
        None => a.noise.resolve(NoiseParams::noiseless())?,
    };
    let (cutoff, chosen) = match (a.l, a.delta, a.eta) {
        (Some(l), _, _) => (l, None),
        (None, Some(delta), Some(eta)) => {
            let r = a
                .r
                .or(loaded.as_ref().map(|(e, _)| e.r()))
                .ok_or_else(|| Error::InvalidParameter("--r is required without a circuit".into()))?;
            let c = choose_l(noise.epsilon(), delta, eta, r)?;
            (Cutoff::Weight(c.l), Some(c))
        }
        _ => return Err(Error::InvalidParameter("give --l, or --delta with --eta".into())),
    };
    let mut metrics = json!({ "epsilon": noise.epsilon(), "cutoff": cutoff, "choose_l": chosen });
    let Some((e, _)) = loaded else {
        return Ok((metrics, vec![]));
    };
    let y = twirl_or_zero(&a.y, e.m())?;
    let l = cutoff.resolve(e.m());
    let (dist, budget) = approximate_distribution(&e, &y, l)?;
    metrics["l"] = json!(l);
    metrics["y"] = json!(y);
    metrics["pseudo_probabilities"] = json!(dist);
    metrics["term_cap"] = json!(budget.term_cap(e.r()));
    if let Some(x) = &a.x {
        if x.len() != e.r() {
            return Err(Error::SizeMismatch(format!("outcome has {} bits, expected r = {}", x.len(), e.r())));
        }
        metrics["x"] = json!(x);
        metrics["pseudo_probability"] = json!(dist[x.index()]);
    }
    if a.clip {
        metrics["clipped"] = json!(clip_and_renormalize(&dist));
    }
    Ok((metrics, vec![budget]))
}

#[derive(Serialize)]
struct Theorem1CsvRow {
    seed: u64,
    y: String,
    delta_y: f64,
    threshold: f64,
    pass: bool,
}

fn theorem1(a: &Theorem1Args) -> Result<serde_json::Value> {
    let caps = OracleCaps::default();
    let mut instances: Vec<(u64, EnsembleSpec)> = Vec::new();
    match &a.circuit {
        Some(path) => {
            let (e, seed) = load(path, &a.noise)?;
            instances.push((seed.unwrap_or(0), e));
        }
        None => {
            let noise = a.noise.resolve(NoiseParams::noiseless())?;
            for &d in &a.d {
                for i in 0..a.instances as u64 {
                    let seed = a.seed.wrapping_add(i);
                    let cfg = GeneratorConfig::new(a.n, d, seed, a.set.into()).with_noise(noise);
                    instances.push((seed, build_fig1a(&cfg)?));
                }
            }
        }
    }
    let mut csv_rows = Vec::new();
    let mut points = Vec::new();
    let mut by_depth: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (seed, e) in &instances {
        let rep = theorem1_experiment(e, a.samples, a.sample_seed, &caps)?;
        let mean = rep.rows.iter().map(|r| r.delta_y).sum::<f64>() / rep.rows.len().max(1) as f64;
        by_depth.entry(rep.d).or_default().push(mean);
        for row in &rep.rows {
            csv_rows.push(Theorem1CsvRow {
                seed: *seed,
                y: row.y.to_string(),
                delta_y: row.delta_y,
                threshold: rep.threshold,
                pass: row.pass,
            });
        }
        points.push(json!({
            "seed": seed,
            "d": rep.d,
            "r": rep.r,
            "epsilon": rep.epsilon,
            "threshold": rep.threshold,
            "allowed_fraction": rep.allowed_fraction,
            "fraction_above": rep.fraction_above,
            "sigma": rep.sigma,
            "max_delta": rep.max_delta,
            "mean_delta": mean,
            "within_bound": rep.within_bound,
            "outside_theorem": rep.outside_theorem,
        }));
    }
    if let Some(path) = &a.csv {
        write_csv(path, &csv_rows)?;
    }
    let means: Vec<(usize, f64)> =
        by_depth.iter().map(|(d, v)| (*d, v.iter().sum::<f64>() / v.len() as f64)).collect();
    let monotone = means.windows(2).all(|w| w[1].1 <= w[0].1);
    let all_within = points.iter().all(|p| p["within_bound"] == json!(true));
    Ok(json!({
        "points": points,
        "mean_delta_by_depth": means,
        "monotone_nonincreasing": monotone,
        "all_within_bound": all_within,
    }))
}

fn anticoncentration(a: &AntiConcentrationArgs) -> Result<serde_json::Value> {
    let ensemble = match a.ensemble {
        AcKind::Fig1a => AcEnsemble::Fig1a(GeneratorConfig::new(a.n, a.d, a.seed, a.set.into())),
        AcKind::Clifford => AcEnsemble::CliffordWords { n: a.n, length: a.length },
        AcKind::Identity => AcEnsemble::Identity { n: a.n },
    };
    let rep = anti_concentration_estimate(&ensemble, a.samples, a.seed, a.alpha, &OracleCaps::default())?;
    Ok(serde_json::to_value(rep)?)
}

#[derive(Serialize)]
struct StatsCsvRow {
    l: usize,
    delta0: f64,
    #[serde(rename = "Delta")]
    big_delta: f64,
    bound: f64,
    pass: bool,
}

fn stats(a: &StatsArgs) -> Result<(serde_json::Value, Vec<TermBudget>)> {
    let (e, _) = load(&a.circuit, &a.noise)?;
    let caps = OracleCaps::default();
    let m = e.m();
    let table = joint_table_noisy(&e.circuit, &e.noise, &caps)?;
    let exact = ConditionalTable::from_joint(&table);
    let ls = a.l.clone().unwrap_or_else(|| (1..=2 * m).collect());
    let eps = e.noise.epsilon();
    let spectrum = wht_forward(&table);
    let ev = match a.source {
        Source::Fast => Some(FastEvaluator::new(&e, FastConfig::default())?),
        Source::Oracle => None,
    };
    let mut rows = Vec::new();
    let mut budgets = Vec::new();
    for &l in &ls {
        let approx = match &ev {
            Some(ev) => {
                let mut approx = ConditionalTable::new(e.r());
                let series = TruncatedSeries::build(ev, l.min(2 * m + 1))?;
                for y in all_y(m) {
                    let row = series.evaluate(&y)?;
                    approx.insert(y, row)?;
                }
                budgets.push(series.budget());
                approx
            }
            None => reconstruct_pseudo_all(&truncate_spectrum(&spectrum, l))?,
        };
        let mut st = error_statistics(&approx, &exact)?;
        if let Some(alpha) = a.alpha {
            st = st.with_anti_concentration(alpha);
        }
        rows.push(StatsCsvRow {
            l,
            delta0: st.delta0,
            big_delta: st.big_delta,
            bound: truncation_bound(st.c, eps, l),
            pass: st.within_truncation_bound(eps, l),
        });
    }
    if let Some(path) = &a.csv {
        write_csv(path, &rows)?;
    }
    let all_pass = rows.iter().all(|r| r.pass);
    Ok((json!({ "epsilon": eps, "r": e.r(), "m": m, "rows": rows, "all_pass": all_pass }), budgets))
}
