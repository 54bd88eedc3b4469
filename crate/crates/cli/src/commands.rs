//! Subcommand implementations.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use resonate::cluster::{
    build_cluster_graph, classes_json, components, export_graph, iso_classes, GraphFormat,
};
use resonate::dynsys::{emit_dynsys, render, CoefStyle, DynFormat};
use resonate::quasi::{find_quasi, n_profile, omega_d, DetuningMode, OmegaOptions};
use resonate::solver::export::{csv_row, quartet_json, write_jsonl, CSV_HEADER};
use resonate::solver::{
    brute_force_oracle, classify_solution, count_angle, degree_in, participation,
    solve_gravity_scale, solve_three_wave, AngleOptions, ResonanceSet, SideConvention,
};
use resonate::{
    Dispersion, DispersionId, DomainMode, Error, PrecisionConfig, Result, SpectralDomain,
    WaveVector,
};

use crate::config::Settings;
use crate::manifest::{artifact, manifest_path, Manifest};
use crate::{verify, Command, Common, Failure};

/// Resolved shared parameters plus what the run produced.
pub struct Run {
    pub settings: Settings,
    pub disp: Dispersion,
    pub conv: SideConvention,
    pub prec: PrecisionConfig,
    out: Option<PathBuf>,
    common: Common,
    pub counts: BTreeMap<String, u64>,
}

impl Run {
    fn new(common: Common) -> Result<Run> {
        let mut settings = Settings::load(common.config.as_deref())?;
        if let Some(p) = &common.config {
            settings.record("config", p.display());
        }
        let disp: DispersionId =
            settings.get("disp", parse_opt(&common.disp)?, DispersionId::Gravity4)?;
        let conv = settings.get("sides", parse_opt(&common.sides)?, SideConvention::Distinct)?;
        let bits = settings.get("bits", common.bits, PrecisionConfig::default().bits)?;
        let env_threads = match std::env::var("RESONATE_THREADS") {
            Ok(v) => Some(
                v.parse::<usize>()
                    .map_err(|_| Error::Usage(format!("RESONATE_THREADS='{v}' is not a count")))?,
            ),
            Err(_) => None,
        };
        let default_threads = std::thread::available_parallelism().map_or(1, |n| n.get());
        let threads = settings.get("threads", common.threads.or(env_threads), default_threads)?;
        if threads == 0 {
            return Err(Error::Usage("--threads must be positive".into()));
        }
        // a second initialisation (only possible in-process) keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
        let out = settings
            .optional::<String>("out", common.out.as_ref().map(|p| p.display().to_string()))?;
        Ok(Run {
            settings,
            disp: disp.into(),
            conv,
            prec: PrecisionConfig::with_bits(bits),
            out: out.map(PathBuf::from),
            common,
            counts: BTreeMap::new(),
        })
    }

    pub fn domain(&mut self) -> Result<SpectralDomain> {
        let d = self.settings.require("D", self.common.d)?;
        let mode = self.settings.get(
            "mode",
            parse_opt(&self.common.mode)?,
            DomainMode::FullSquare,
        )?;
        let dn = self.settings.get("Dn", self.common.dn, d)?;
        if d < 0 || dn < 0 {
            return Err(Error::Usage("domain bounds must be nonnegative".into()));
        }
        if mode != DomainMode::PositiveQuadrant && dn != d {
            return Err(Error::Usage(
                "--Dn applies to positive-quadrant domains only".into(),
            ));
        }
        Ok(SpectralDomain::new(mode, d, dn))
    }

    fn gravity_only(&self, what: &str) -> Result<()> {
        if self.disp.id != DispersionId::Gravity4 {
            return Err(Error::Unsupported(format!(
                "{what} is defined for gravity4 only"
            )));
        }
        Ok(())
    }

    fn three_wave_only(&self, what: &str) -> Result<()> {
        if self.disp.order() != 3 {
            return Err(Error::Unsupported(format!(
                "{what} is defined for three-wave dispersions only"
            )));
        }
        Ok(())
    }

    /// Writes `data` to `--out` (plus manifest) or to stdout.
    fn emit(mut self, command: &str, started: Instant, data: &[u8]) -> Result<()> {
        match self.out.take() {
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(data)?;
                stdout.flush()?;
            }
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(&path, data)?;
                let manifest = Manifest {
                    tool: "resonate",
                    version: env!("CARGO_PKG_VERSION"),
                    command: command.to_string(),
                    params: std::mem::take(&mut self.settings.params),
                    wall_time_ms: started.elapsed().as_millis(),
                    started_unix: (SystemTime::now() - started.elapsed())
                        .duration_since(UNIX_EPOCH)
                        .map_or(0, |d| d.as_secs()),
                    artifacts: vec![artifact(&path, data)],
                    counts: std::mem::take(&mut self.counts),
                };
                manifest.write(&manifest_path(&path))?;
                eprintln!("wrote {} ({} bytes)", path.display(), data.len());
            }
        }
        Ok(())
    }
}

fn parse_opt<T: std::str::FromStr<Err = Error>>(s: &Option<String>) -> Result<Option<T>> {
    s.as_deref().map(str::parse).transpose()
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::Usage(format!("cannot parse {what} '{s}'")))
        })
        .collect()
}

fn parse_pair(s: &str) -> Result<[WaveVector; 2]> {
    let v: Vec<WaveVector> = s.split(';').map(str::parse).collect::<Result<_>>()?;
    v.try_into()
        .map_err(|_| Error::Usage(format!("expected two vectors 'm,n;m,n', got '{s}'")))
}

/// Which quartet kinds `solve` and `clusters` produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KindSel {
    Scale,
    Angle,
    All,
}

impl std::str::FromStr for KindSel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scale" => Ok(KindSel::Scale),
            "angle" => Ok(KindSel::Angle),
            "all" => Ok(KindSel::All),
            _ => Err(Error::Usage(format!(
                "unknown kind '{s}' (scale, angle or all)"
            ))),
        }
    }
}

impl std::fmt::Display for KindSel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KindSel::Scale => "scale",
            KindSel::Angle => "angle",
            KindSel::All => "all",
        })
    }
}

fn exact_set(
    run: &mut Run,
    dom: &SpectralDomain,
    kind: KindSel,
    stripes: usize,
    allow_large: bool,
) -> Result<ResonanceSet> {
    if run.disp.order() == 3 {
        return solve_three_wave(&run.disp, dom, run.conv);
    }
    let scale = || solve_gravity_scale(dom, run.conv);
    let angle = || -> Result<ResonanceSet> {
        let opts = AngleOptions {
            enumerate: true,
            allow_large_enumeration: allow_large,
            stripes,
            ..AngleOptions::default()
        };
        Ok(count_angle(dom, &opts)?.set.expect("enumerated"))
    };
    match kind {
        KindSel::Scale => Ok(scale()),
        KindSel::Angle => angle(),
        KindSel::All => scale().union(&angle()?),
    }
}

fn record_counts(run: &mut Run, set: &ResonanceSet) {
    run.counts.insert("total".into(), set.len());
    if set.disp == DispersionId::Gravity4 {
        let c = set.counts;
        run.counts.insert("scale".into(), c.scale);
        run.counts.insert("angle".into(), c.angle);
    }
}

pub fn run(cmd: Command) -> std::result::Result<(), Failure> {
    let started = Instant::now();
    match cmd {
        Command::Solve {
            common,
            kind,
            format,
            stripes,
            allow_large,
        } => {
            let mut run = Run::new(common)?;
            let dom = run.domain()?;
            let kind = run.settings.get("kind", parse_opt(&kind)?, KindSel::All)?;
            let format = run.settings.get("format", format, "jsonl".to_string())?;
            let stripes = run.settings.get("stripes", stripes, 1usize)?;
            run.settings.record("allow_large", allow_large);
            if run.disp.order() == 3 && kind != KindSel::All {
                return Err(Error::Usage("--kind applies to gravity4 only".into()).into());
            }
            let set = exact_set(&mut run, &dom, kind, stripes, allow_large)?;
            record_counts(&mut run, &set);
            let mut data = Vec::new();
            match format.as_str() {
                "jsonl" => write_jsonl(&set, &mut data)?,
                "csv" => {
                    writeln!(data, "{CSV_HEADER}").map_err(Error::from)?;
                    writeln!(data, "{}", csv_row(&set, started.elapsed().as_millis()))
                        .map_err(Error::from)?;
                }
                f => {
                    return Err(Error::Usage(format!("unknown format '{f}' (jsonl or csv)")).into())
                }
            }
            run.emit("solve", started, &data)?;
        }
        Command::Count {
            common,
            format,
            stripes,
            memory_mb,
        } => {
            let mut run = Run::new(common)?;
            let dom = run.domain()?;
            let format = run.settings.get("format", format, "text".to_string())?;
            let stripes = run.settings.get("stripes", stripes, 1usize)?;
            let memory_mb = run.settings.get("memory_mb", memory_mb, 1024u64)?;
            let set = if run.disp.order() == 3 {
                solve_three_wave(&run.disp, &dom, run.conv)?
            } else {
                let scale = solve_gravity_scale(&dom, run.conv).len();
                let opts = AngleOptions {
                    stripes,
                    memory_budget: memory_mb << 20,
                    ..AngleOptions::default()
                };
                let angle = count_angle(&dom, &opts)?;
                run.settings.record("stripes_used", angle.stripes);
                ResonanceSet::count_only(
                    run.disp.id,
                    dom,
                    resonate::solver::Counts {
                        total: scale + angle.count,
                        scale,
                        angle: angle.count,
                    },
                )
            };
            record_counts(&mut run, &set);
            let data = match format.as_str() {
                "text" => format!("{}\n", set.len()),
                "csv" => format!(
                    "{CSV_HEADER}\n{}\n",
                    csv_row(&set, started.elapsed().as_millis())
                ),
                f => return Err(Error::Usage(format!("unknown format '{f}' (text or csv)")).into()),
            };
            run.emit("count", started, data.as_bytes())?;
        }
        Command::Classify {
            common,
            lhs,
            rhs,
            multipliers,
        } => {
            let mut run = Run::new(common)?;
            run.gravity_only("classify")?;
            let lhs = parse_pair(&run.settings.require("lhs", lhs)?)?;
            let rhs = parse_pair(&run.settings.require("rhs", rhs)?)?;
            let p = run
                .settings
                .optional("multipliers", multipliers)?
                .map(|s: String| parse_list::<i64>(&s, "multipliers"))
                .transpose()?;
            let q = classify_solution(lhs, rhs, p.as_deref())?;
            let data = quartet_json(run.disp.id, &q) + "\n";
            run.emit("classify", started, data.as_bytes())?;
        }
        Command::Participation { common, k } => {
            let mut run = Run::new(common)?;
            let dom = run.domain()?;
            let k: WaveVector = run.settings.require::<String>("k", k)?.parse()?;
            let mut rec = serde_json::Map::new();
            rec.insert("disp".into(), run.disp.id.name().into());
            rec.insert("D".into(), dom.half_width().into());
            rec.insert("domain_mode".into(), dom.mode_name().into());
            rec.insert("k".into(), serde_json::json!([k.m, k.n]));
            if run.disp.id == DispersionId::Gravity4 {
                let p = participation(k, &solve_gravity_scale(&dom, run.conv))?;
                rec.insert("scale".into(), p.scale.into());
                rec.insert("angle".into(), p.angle.into());
                run.counts.insert("scale".into(), p.scale);
                run.counts.insert("angle".into(), p.angle);
            } else {
                if !dom.contains(k) {
                    return Err(Error::Domain(format!("{k} lies outside {dom}")).into());
                }
                let deg = degree_in(&solve_three_wave(&run.disp, &dom, run.conv)?, k);
                rec.insert("degree".into(), deg.into());
                run.counts.insert("degree".into(), deg);
            }
            let data = serde_json::Value::Object(rec).to_string() + "\n";
            run.emit("participation", started, data.as_bytes())?;
        }
        Command::OmegaD {
            common,
            over,
            histogram_cap,
        } => {
            let mut run = Run::new(common)?;
            let dom = run.domain()?;
            let over = run.settings.get("over", over, "both".to_string())?;
            let modes = match over.as_str() {
                "both" => vec![DetuningMode::Unconstrained, DetuningMode::Conserving],
                m => vec![m.parse()?],
            };
            let cap = run.settings.get("histogram_cap", histogram_cap, 1.0)?;
            let opts = OmegaOptions {
                precision: run.prec,
                histogram_cap: cap,
                conv: run.conv,
            };
            let mut data = String::new();
            for mode in modes {
                data.push_str(&omega_d(&dom, &run.disp, mode, &opts)?.to_json());
                data.push('\n');
            }
            run.emit("omega-d", started, data.as_bytes())?;
        }
        Command::Quasi {
            common,
            width,
            multipliers,
        } => {
            let mut run = Run::new(common)?;
            let dom = run.domain()?;
            let width: f64 = run.settings.require("width", width)?;
            let p = run
                .settings
                .optional("multipliers", multipliers)?
                .map(|s: String| parse_list::<i64>(&s, "multipliers"))
                .transpose()?;
            let found = find_quasi(&dom, &run.disp, width, p.as_deref(), run.conv, &run.prec)?;
            run.counts.insert("quasi".into(), found.len() as u64);
            let mut data = String::new();
            for q in &found {
                data.push_str(&q.to_json(run.disp.id));
                data.push('\n');
            }
            run.emit("quasi", started, data.as_bytes())?;
        }
        Command::Profile {
            common,
            deltas,
            grid,
        } => {
            let mut run = Run::new(common)?;
            let dom = run.domain()?;
            let grid = run.settings.get("grid", grid, 20usize)?;
            let deltas = match run.settings.optional::<String>("deltas", deltas)? {
                Some(s) => parse_list::<f64>(&s, "deltas")?,
                None => default_grid(&run, &dom, grid)?,
            };
            let profile = n_profile(&dom, &run.disp, &deltas, run.conv, &run.prec)?;
            run.counts.insert("exact".into(), profile.exact);
            let data = serde_json::to_string(&profile).expect("profile serializes") + "\n";
            run.emit("profile", started, data.as_bytes())?;
        }
        Command::Clusters {
            common,
            format,
            class,
            allow_large,
        } => {
            let mut run = Run::new(common)?;
            let dom = run.domain()?;
            let format = run.settings.get("format", format, "json".to_string())?;
            let class = run.settings.optional("class", class)?;
            run.settings.record("allow_large", allow_large);
            let set = exact_set(&mut run, &dom, KindSel::All, 1, allow_large)?;
            let graph = build_cluster_graph(&set)?;
            let clusters = components(&graph);
            let classes = iso_classes(&clusters);
            run.counts.insert("clusters".into(), clusters.len() as u64);
            run.counts.insert("classes".into(), classes.len() as u64);
            let data = match (format.as_str(), class) {
                ("json", None) => classes_json(&classes) + "\n",
                (f, sel) => {
                    let f: GraphFormat = f.parse()?;
                    let g = match sel {
                        None => &graph,
                        Some(id) => {
                            &classes
                                .iter()
                                .find(|c| c.class_id == id)
                                .ok_or_else(|| {
                                    Error::Usage(format!(
                                        "no class {id} (there are {})",
                                        classes.len()
                                    ))
                                })?
                                .representative
                        }
                    };
                    export_graph(g, f)
                }
            };
            run.emit("clusters", started, data.as_bytes())?;
        }
        Command::Gensys {
            common,
            format,
            coefs,
            classes,
        } => {
            let mut run = Run::new(common)?;
            run.three_wave_only("gensys")?;
            let dom = run.domain()?;
            let format: DynFormat = run
                .settings
                .get::<String>("format", format, "text".into())?
                .parse()?;
            let style = match run
                .settings
                .get::<String>("coefs", coefs, "per-triad".into())?
                .as_str()
            {
                "per-triad" => CoefStyle::PerTriad,
                "per-term" => CoefStyle::PerTerm,
                s => {
                    return Err(Error::Usage(format!(
                        "unknown coefficient style '{s}' (per-triad or per-term)"
                    ))
                    .into())
                }
            };
            run.settings.record("classes", classes);
            let set = solve_three_wave(&run.disp, &dom, run.conv)?;
            let clusters = components(&build_cluster_graph(&set)?);
            let iso = iso_classes(&clusters);
            let picked: Vec<(String, &resonate::cluster::ClusterGraph)> = if classes {
                iso.iter()
                    .map(|c| {
                        let tag = c.tag.as_deref().map_or(String::new(), |t| format!(" {t}"));
                        (
                            format!("class {}{tag} x{}", c.class_id, c.multiplicity),
                            &c.representative,
                        )
                    })
                    .collect()
            } else {
                clusters
                    .iter()
                    .enumerate()
                    .map(|(i, g)| {
                        (
                            format!(
                                "cluster {}: {} modes, {} triads",
                                i + 1,
                                g.vertex_count(),
                                g.edge_count()
                            ),
                            g,
                        )
                    })
                    .collect()
            };
            run.counts.insert("systems".into(), picked.len() as u64);
            let mut data = String::new();
            let mut docs = Vec::new();
            for (label, g) in &picked {
                let sys = emit_dynsys(g, style)?;
                match format {
                    DynFormat::Json => {
                        docs.push(serde_json::json!({ "label": label, "system": sys }))
                    }
                    DynFormat::Text => {
                        data.push_str(&format!("# {label}\n{}", render(&sys, format)))
                    }
                    DynFormat::Latex => {
                        data.push_str(&format!("% {label}\n{}", render(&sys, format)))
                    }
                }
            }
            if format == DynFormat::Json {
                data = serde_json::Value::Array(docs).to_string() + "\n";
            }
            run.emit("gensys", started, data.as_bytes())?;
        }
        Command::Oracle {
            common,
            multipliers,
        } => {
            let mut run = Run::new(common)?;
            let dom = run.domain()?;
            let p = run
                .settings
                .optional("multipliers", multipliers)?
                .map(|s: String| parse_list::<i64>(&s, "multipliers"))
                .transpose()?;
            let set = brute_force_oracle(&run.disp, &dom, p.as_deref(), run.conv)?;
            record_counts(&mut run, &set);
            let mut data = Vec::new();
            write_jsonl(&set, &mut data)?;
            run.emit("oracle", started, &data)?;
        }
        Command::Verify { common, long } => {
            let disp_given = common.disp.is_some();
            let mut run = Run::new(common)?;
            run.settings.record("long", long);
            let only = disp_given.then_some(run.disp.id);
            let rows = verify::run_checks(only, long, run.conv, &run.prec);
            let failed: Vec<&str> = rows
                .iter()
                .filter(|r| !r.pass)
                .map(|r| r.name.as_str())
                .collect();
            run.counts.insert("checks".into(), rows.len() as u64);
            run.counts.insert("failed".into(), failed.len() as u64);
            let data = verify::table(&rows);
            run.emit("verify", started, data.as_bytes())?;
            if !failed.is_empty() {
                return Err(Failure::Consistency(format!(
                    "failing checks: {}",
                    failed.join(", ")
                )));
            }
        }
    }
    Ok(())
}

/// Twenty (or `n`) widths spanning a decade either side of the conserving `Ω_D`.
fn default_grid(run: &Run, dom: &SpectralDomain, n: usize) -> Result<Vec<f64>> {
    let opts = OmegaOptions {
        precision: run.prec,
        conv: run.conv,
        ..OmegaOptions::default()
    };
    let centre = match omega_d(dom, &run.disp, DetuningMode::Conserving, &opts) {
        Ok(r) => r.omega_d.to_f64(),
        Err(Error::Validation(_)) => 1e-2,
        Err(e) => return Err(e),
    };
    let n = n.max(2);
    Ok((0..n)
        .map(|i| centre * 10f64.powf(-1.0 + 2.0 * i as f64 / (n - 1) as f64))
        .collect())
}
