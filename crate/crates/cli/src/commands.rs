use std::fmt::Write as _;

use anyhow::{bail, Context as _, Result};
use serde_json::Value;
use tdpop::booleanize::{booleanize_quantile, threshold_table, train_split, MNIST_THRESHOLD};
use tdpop::cost::{
    sweep_trend, trend_csv, ArchKind, ArchModel, Calibration, LatencyCase, MeasuredDesign, SweepParams, Vary,
    MEASURED_DESIGNS,
};
use tdpop::dataset::{Dataset, RawTable};
use tdpop::flowgen::{lint_symmetry, plan_placement, FlowConfig};
use tdpop::model::{load_model, random_model};
use tdpop::reference::{infer_reference, labeled_random_inputs};
use tdpop::sim::{run_batch, traces_to_csv, PdlBank, StageConfig};
use tdpop::timing::{characterize_pdl, DelayProfile, NetDelayCalibration, PdlInstance};
use tdpop::{Edge, Time};

use crate::config::{usage, Outputs};
use crate::{BooleanizeArgs, CharacterizeArgs, CompareArgs, FlowgenArgs, InferArgs, SweepArgs};

pub struct Context {
    pub seed: Option<u64>,
    pub outputs: Outputs,
}

impl Context {
    fn require_seed(&self, what: &str) -> Result<u64> {
        self.seed
            .ok_or_else(|| usage(format!("{what} draws random numbers; pass --seed")))
    }
}

fn positive(name: &str, v: usize) -> Result<usize> {
    if v == 0 {
        return Err(usage(format!("--{name} must be positive")));
    }
    Ok(v)
}

fn profile_from(
    base: DelayProfile,
    d_low: Option<f64>,
    d_high: Option<f64>,
    sigma_static: Option<f64>,
    sigma_dynamic: Option<f64>,
    base_delay: Option<f64>,
) -> Result<DelayProfile> {
    let mut p = base;
    if let Some(v) = d_low {
        p.d_low = Time::from_ps(v);
    }
    if let Some(v) = d_high {
        p.d_high = Time::from_ps(v);
    }
    let p = p
        .with_sigmas(sigma_static.unwrap_or(0.0), sigma_dynamic.unwrap_or(0.0))
        .with_base(Time::from_ps(base_delay.unwrap_or(0.0)));
    p.validate().map_err(|e| usage(e.to_string()))?;
    Ok(p)
}

/// `mnist50` -> the MNIST calibration with 50 clauses per class.
fn find_calibration(name: &str) -> Result<&'static NetDelayCalibration> {
    let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (dataset, clauses) = name.split_at(split);
    clauses
        .parse()
        .ok()
        .and_then(|c| NetDelayCalibration::find(dataset, c))
        .ok_or_else(|| usage(format!("unknown calibration {name:?}; expected iris10, iris50, mnist50 or mnist100")))
}

fn find_design(name: &str) -> Result<&'static MeasuredDesign> {
    MEASURED_DESIGNS
        .iter()
        .find(|d| d.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| usage(format!("unknown design {name:?}; expected iris10, iris50, mnist50 or mnist100")))
}

pub fn characterize(ctx: &Context, a: CharacterizeArgs) -> Result<()> {
    let seed = ctx.require_seed("characterize")?;
    let n = positive("elements", a.elements.unwrap_or(150))?;
    let trials = positive("trials", a.trials.unwrap_or(1))?;
    let step = positive("weight-step", a.weight_step.unwrap_or(1))?;
    let defaults = DelayProfile::default();
    let d_low = a.d_low.unwrap_or(defaults.d_low.as_ps());
    let deltas = if a.delta.is_empty() {
        vec![a.d_high.unwrap_or(defaults.d_high.as_ps()) - d_low]
    } else {
        a.delta.clone()
    };
    let weights: Vec<usize> = (0..=n).step_by(step).collect();
    ctx.outputs.check(&["characterize.csv", "characterize_summary.csv"])?;

    let mut rows = String::from("delta_ps,weight,trial,delay_ps\n");
    let mut summary = String::from("delta_ps,rho,degenerate\n");
    for (id, &delta) in deltas.iter().enumerate() {
        let profile = profile_from(
            defaults,
            Some(d_low),
            Some(d_low + delta),
            a.sigma_static,
            a.sigma_dynamic,
            a.base,
        )?;
        let pdl = PdlInstance::uniform(id as u64, profile, n, seed)?;
        let c = characterize_pdl(&pdl, &weights, trials, seed)?;
        for s in &c.samples {
            writeln!(rows, "{delta},{},{},{}", s.weight, s.trial, s.delay.as_ps())?;
        }
        writeln!(summary, "{delta},{},{}", c.spearman.rho, c.spearman.degenerate)?;
        println!("delta {delta} ps: rho = {:.6}", c.spearman.rho);
    }
    ctx.outputs.write("characterize.csv", &rows)?;
    ctx.outputs.write("characterize_summary.csv", &summary)?;
    Ok(())
}

pub fn infer(ctx: &Context, a: InferArgs) -> Result<()> {
    let model = match &a.model {
        Some(p) => load_model(p).with_context(|| format!("loading model {}", p.display()))?,
        None => {
            let seed = ctx.require_seed("synthesizing a model")?;
            let features = positive("features", a.features.unwrap_or(12))?;
            let p = a.include_prob.unwrap_or(1.5 / features as f64);
            random_model(seed, a.classes.unwrap_or(3), a.clauses.unwrap_or(10), features, p)
                .map_err(|e| usage(e.to_string()))?
        }
    };
    let data = match &a.data {
        Some(p) => Dataset::load(p).with_context(|| format!("loading dataset {}", p.display()))?,
        None => {
            let seed = ctx.require_seed("drawing random inputs")?;
            labeled_random_inputs(&model, a.samples.unwrap_or(100), seed)
        }
    };
    if data.is_empty() {
        bail!("dataset {} has no samples", data.name);
    }

    let base = match &a.calibration {
        Some(name) => find_calibration(name)?.profile(),
        None => DelayProfile::default(),
    };
    let profile = profile_from(base, a.d_low, a.d_high, a.sigma_static, a.sigma_dynamic, a.base)?;
    let seed = if profile.is_noiseless() {
        ctx.seed.unwrap_or(0)
    } else {
        ctx.require_seed("a noisy delay profile")?
    };

    let mut stage = StageConfig::default();
    let set = |t: &mut Time, v: Option<f64>| {
        if let Some(v) = v {
            *t = Time::from_ps(v);
        }
    };
    set(&mut stage.clause_bundle_delay, a.bundle_delay);
    set(&mut stage.latch_delay, a.latch_delay);
    set(&mut stage.ack_delay, a.ack_delay);
    set(&mut stage.xnor_delay, a.xnor_delay);
    set(&mut stage.d_arb, a.d_arb);
    set(&mut stage.epsilon_meta, a.epsilon);
    if let Some(p) = &a.phase0 {
        stage.phase0 = match p.to_ascii_lowercase().as_str() {
            "rising" => Edge::Rising,
            "falling" => Edge::Falling,
            other => return Err(usage(format!("--phase0 must be rising or falling, got {other:?}"))),
        };
    }
    stage.validate().map_err(|e| usage(e.to_string()))?;

    ctx.outputs.check(&["traces.csv", "summary.csv", "predictions.csv"])?;
    let bank = PdlBank::for_model(&model, profile, seed)?;
    let result = run_batch(&model, &data, &bank, &stage, seed)?;

    let mut predictions = String::from("sample,label,predicted,reference,tie,metastable,latency_ps\n");
    let mut mismatches = Vec::new();
    for (i, (t, s)) in result.traces.iter().zip(&data.samples).enumerate() {
        writeln!(
            predictions,
            "{i},{},{},{},{},{},{}",
            s.label,
            t.predicted_class,
            t.reference_class,
            t.tie_reference,
            t.metastable,
            t.latency.as_ps()
        )?;
        if a.oracle {
            let r = infer_reference(&model, &s.features)?;
            if !r.tie && r.class != t.predicted_class {
                mismatches.push(i);
            }
        }
    }
    ctx.outputs.write("traces.csv", &traces_to_csv(&result.traces))?;
    ctx.outputs.write("summary.csv", &result.summary.to_csv())?;
    ctx.outputs.write("predictions.csv", &predictions)?;

    let s = &result.summary;
    println!(
        "{} samples: mean latency {:.1} ps (min {:.1}, max {:.1}, bound {:.1}), accuracy {:.4}, metastable {:.4}, ties {:.4}",
        s.samples,
        s.mean_latency_ps,
        s.min_latency_ps,
        s.max_latency_ps,
        s.worst_case_bound_ps,
        s.accuracy,
        s.metastable_rate,
        s.tie_rate
    );
    if a.oracle {
        println!("oracle mismatches: {}", mismatches.len());
        if !mismatches.is_empty() {
            bail!("{} predictions disagree with integer inference, first at sample {}", mismatches.len(), mismatches[0]);
        }
    }
    Ok(())
}

pub fn sweep(ctx: &Context, a: SweepArgs) -> Result<()> {
    let seed = ctx.require_seed("sweep")?;
    let vary = match a.vary.as_deref().unwrap_or("clauses") {
        "clauses" => Vary::Clauses,
        "classes" => Vary::Classes,
        other => return Err(usage(format!("--vary must be clauses or classes, got {other:?}"))),
    };
    let (from, to) = match vary {
        Vary::Clauses => (a.from.unwrap_or(10), a.to.unwrap_or(100)),
        Vary::Classes => (a.from.unwrap_or(2), a.to.unwrap_or(20)),
    };
    let step = positive("step", a.step.unwrap_or(match vary {
        Vary::Clauses => 10,
        Vary::Classes => 2,
    }))?;
    let range: Vec<usize> = (from..=to).step_by(step).collect();
    if range.is_empty() {
        return Err(usage(format!("empty range {from}..={to}")));
    }
    let kinds = if a.archs.is_empty() {
        ArchKind::ALL.to_vec()
    } else {
        a.archs
            .iter()
            .map(|s| s.parse::<ArchKind>().map_err(|e| usage(e.to_string())))
            .collect::<Result<_>>()?
    };
    let archs: Vec<ArchModel> = kinds.into_iter().map(ArchModel::new).collect();
    let params = SweepParams {
        vary,
        range,
        fixed_classes: a.fixed_classes.unwrap_or(6),
        fixed_clauses: a.fixed_clauses.unwrap_or(100),
        cycles: positive("cycles", a.cycles.unwrap_or(1000))?,
        seed,
    };
    ctx.outputs.check(&["trend.csv"])?;
    let points = sweep_trend(&archs, &params).map_err(|e| usage(e.to_string()))?;
    let path = ctx.outputs.write("trend.csv", &trend_csv(&points))?;
    println!("{} points written to {}", points.len(), path.display());
    Ok(())
}

pub fn compare(ctx: &Context, a: CompareArgs) -> Result<()> {
    let design = find_design(a.design.as_deref().unwrap_or("mnist50"))?;
    let classes = a.classes.unwrap_or(design.num_classes);
    let clauses = a.clauses.unwrap_or(design.clauses_per_class);
    let measured = classes == design.num_classes && clauses == design.clauses_per_class;
    let mut calibration = Calibration::default();
    let name = design.name.to_ascii_lowercase();
    calibration.time_domain_profile = find_calibration(&name)?.profile();

    let mut out = String::from(
        "arch,classes,clauses,popcount_latency_ps,argmax_latency_ps,total_latency_ps,avg_total_latency_ps,luts_ffs,measured_latency_ps,measured_luts_ffs\n",
    );
    let opt = |t: Option<Time>| t.map(|t| format!("{}", t.as_ps())).unwrap_or_default();
    for kind in ArchKind::ALL {
        let m = ArchModel::with_calibration(kind, calibration);
        let avg = LatencyCase::Average {
            mean_weight: clauses as f64 / 2.0,
        };
        let popcount = m.popcount_latency(clauses, LatencyCase::Worst).ok();
        let argmax = m.argmax_latency(classes, tdpop::cost::comparator_width(clauses)).ok();
        let total = m.total_latency(classes, clauses, LatencyCase::Worst).ok();
        let avg_total = m.total_latency(classes, clauses, avg).ok();
        let luts = m.popcount_resources(classes, clauses).map_err(|e| usage(e.to_string()))?;
        let (ml, mr) = match kind {
            ArchKind::GenericAdder => (Some(design.generic_latency_ns), design.generic_luts_ffs),
            ArchKind::Fpt18Ripple => (Some(design.fpt18_latency_ns), design.fpt18_luts_ffs),
            ArchKind::TimeDomain => (Some(design.time_domain_latency_ns), design.time_domain_luts_ffs),
            ArchKind::Async21DualRail => (None, design.async21_luts_ffs),
        };
        let (ml, mr) = if measured {
            (ml.map(|ns| format!("{}", ns * 1000.0)).unwrap_or_default(), mr.to_string())
        } else {
            (String::new(), String::new())
        };
        writeln!(
            out,
            "{kind},{classes},{clauses},{},{},{},{},{luts},{ml},{mr}",
            opt(popcount),
            opt(argmax),
            opt(total),
            opt(avg_total)
        )?;
    }
    ctx.outputs.check(&["compare.csv"])?;
    ctx.outputs.write("compare.csv", &out)?;
    print!("{out}");
    Ok(())
}

pub fn flowgen(ctx: &Context, a: &FlowgenArgs, section: Option<&Value>) -> Result<()> {
    let mut cfg = match section {
        Some(v) => serde_json::from_value::<FlowConfig>(v.clone()).map_err(|e| usage(format!("config section [flowgen]: {e}")))?,
        None => FlowConfig::default(),
    };
    let plan = &mut cfg.plan;
    if let Some(v) = a.num_pdls {
        plan.num_pdls = v;
    }
    if let Some(v) = a.elements {
        plan.elements_per_pdl = v;
    }
    if let Some(v) = a.origin_column {
        plan.origin.column = v;
    }
    if let Some(v) = a.origin_row {
        plan.origin.row = v;
    }
    if let Some(v) = &a.bel {
        plan.bel_name = v.clone();
    }
    if let Some(v) = a.column_stride {
        plan.column_stride = v;
    }
    if let Some(v) = a.low_max {
        cfg.window.low_max_ps = v;
    }
    if let Some(v) = a.high_min {
        cfg.window.high_min_ps = v;
    }
    if let Some(v) = a.high_max {
        cfg.window.high_max_ps = v;
    }

    let mut placements = plan_placement(&cfg.plan).map_err(|e| usage(e.to_string()))?;
    if let Some(arb) = &cfg.arbiters {
        placements.extend(plan_placement(arb).map_err(|e| usage(e.to_string()))?);
    }
    if let Err(violations) = lint_symmetry(&placements) {
        for v in &violations {
            eprintln!("symmetry: {v}");
        }
        bail!("{} symmetry violations", violations.len());
    }
    let script = cfg.emit().map_err(|e| usage(e.to_string()))?;
    ctx.outputs.check(&["constraints.tcl"])?;
    let path = ctx.outputs.write("constraints.tcl", &script)?;
    println!("{} elements constrained in {}", placements.len(), path.display());
    Ok(())
}

pub fn booleanize(ctx: &Context, a: BooleanizeArgs) -> Result<()> {
    let input = a.input.as_ref().ok_or_else(|| usage("--input is required"))?;
    let table = RawTable::load(input).with_context(|| format!("loading {}", input.display()))?;
    let data = match a.mode.as_deref().unwrap_or("quantile") {
        "quantile" => {
            let fraction = a.train_fraction.unwrap_or(0.8);
            let train = if fraction >= 1.0 {
                train_split(table.rows.len(), 1.0, 0)
            } else {
                train_split(table.rows.len(), fraction, ctx.require_seed("a train split")?)
            }
            .map_err(|e| usage(e.to_string()))?;
            booleanize_quantile(&table, &train, a.bins.unwrap_or(3)).map_err(|e| usage(e.to_string()))?
        }
        "threshold" => threshold_table(&table, a.threshold.unwrap_or(MNIST_THRESHOLD))?,
        other => return Err(usage(format!("--mode must be quantile or threshold, got {other:?}"))),
    };
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("data");
    let name = format!("{stem}_bool.csv");
    ctx.outputs.check(&[&name])?;
    let path = ctx.outputs.write(&name, &data.to_csv())?;
    println!(
        "{} samples, {} Boolean features written to {}",
        data.len(),
        data.num_features,
        path.display()
    );
    Ok(())
}
