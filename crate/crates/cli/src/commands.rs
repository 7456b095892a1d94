//! Command implementations.

use serde_json::{json, to_value};

use lks_core::augment::{
    find_augmenting_or_separate, find_regular_pair_in_spot, grow_matching, separate, validate_path, verify_separation,
    ExtractOptions, SeparationOrPath,
};
use lks_core::batch::{run_batch, BatchConfig};
use lks_core::dense::{
    verify_bounded_decomposition, verify_sparse_decomposition, Instance, InstanceFile, VerifyOptions,
};
use lks_core::generate::{generate, GeneratorSpec};
use lks_core::graph::{Graph, VertexSet};
use lks_core::lks::classify_ls;
use lks_core::matching::{
    gallai_edmonds, maximum_matching, verify_gallai_edmonds, verify_regularized_matching, RegularizedMatching,
};
use lks_core::params::{epsilon_levels, exact, lemma41_constants, lemma46_schedule, lemma47_schedule, TauPrime};
use lks_core::regularity::{certify_regular, szemeredi_partition, verify_partition, CertifyOptions};
use lks_core::structure::{rough_structure, separation_input, verify_structure, StructureOutput, StructureParams};
use lks_core::{Error, Result};

use crate::io::{load_graph, load_json, load_nabla, write};
use crate::{Cli, Command, DecompCmd, MatchCmd, Outcome, ParamsCmd, PipelineCmd, RegularityCmd, StructureCmd};

fn value<T: serde::Serialize>(x: &T) -> serde_json::Value {
    to_value(x).expect("report serialises")
}

fn outcome(pass: bool, summary: String, report: serde_json::Value) -> Result<Outcome> {
    Ok(Outcome { pass, summary, report })
}

fn certify_options(cli: &Cli) -> CertifyOptions {
    let mut opts = CertifyOptions::default();
    if let Some(seed) = cli.seed {
        opts.seed = seed;
    }
    opts
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Gen { kind, n, k, eta, gamma, knobs, graph_out, nabla_out, instance_out } => {
            let mut spec = GeneratorSpec::defaults((*kind).into(), cli.seed.unwrap_or(0));
            spec.n = n.unwrap_or(spec.n);
            spec.k = k.unwrap_or(spec.k);
            if let Some(e) = eta {
                spec.eta = e.clone();
            }
            if let Some(g) = gamma {
                spec.gamma = g.clone();
            }
            spec.knobs.extend(knobs.iter().cloned());
            let generated = generate(&spec)?;
            if let Some(path) = graph_out {
                write(path, &generated.graph.to_text())?;
            }
            match (nabla_out, &generated.nabla) {
                (Some(path), Some(nabla)) => write(path, &nabla.to_json())?,
                (Some(_), None) => return Err(Error::Input("this generator emits no decomposition".into())),
                _ => {}
            }
            match (instance_out, &generated.instance) {
                (Some(path), Some(inst)) => write(path, &serde_json::to_string_pretty(inst)?)?,
                (Some(_), None) => return Err(Error::Input("this generator emits no instance".into())),
                _ => {}
            }
            let pass = generated.audit.passed();
            let g = &generated.graph;
            outcome(
                pass,
                format!("generated n = {}, m = {}; audit {}", g.n(), g.m(), if pass { "passed" } else { "failed" }),
                json!({ "spec": value(&spec), "n": g.n(), "m": g.m(), "audit": value(&generated.audit) }),
            )
        }
        Command::Regularity(cmd) => regularity(cli, cmd),
        Command::Decomp(cmd) => decomp(cmd),
        Command::Match(cmd) => matching(cli, cmd),
        Command::Pipeline(cmd) => pipeline(cmd),
        Command::Structure(cmd) => structure(cmd),
        Command::Params(cmd) => params(cmd),
        Command::Batch { config, out } => {
            let mut config: BatchConfig = load_json(config)?;
            if let Some(seed) = cli.seed {
                for job in &mut config.jobs {
                    job.generator.seed = seed;
                }
            }
            let report = run_batch(&config);
            if let Some(path) = out {
                write(path, &serde_json::to_string_pretty(&report)?)?;
            }
            outcome(
                report.passed == report.total,
                format!("{} of {} instances passed", report.passed, report.total),
                value(&report),
            )
        }
    }
}

fn regularity(cli: &Cli, cmd: &RegularityCmd) -> Result<Outcome> {
    match cmd {
        RegularityCmd::Certify { graph, u, w, eps, size_cap } => {
            let g = load_graph(graph)?;
            let mut opts = certify_options(cli);
            if let Some(cap) = size_cap {
                opts.size_cap = *cap;
            }
            let verdict = certify_regular(&g, u, w, eps, &opts)?;
            outcome(
                verdict.regular,
                format!(
                    "{} (density {}, {:?})",
                    if verdict.regular { "regular" } else { "irregular" },
                    verdict.density,
                    verdict.mode
                ),
                value(&verdict),
            )
        }
        RegularityCmd::Partition { graph, eps, ell_min, prepartition } => {
            let g = load_graph(graph)?;
            let classes: Vec<VertexSet> = match prepartition {
                Some(path) => load_json(path)?,
                None => Vec::new(),
            };
            let partition = szemeredi_partition(&g, eps, *ell_min, &classes)?;
            let report = verify_partition(&g, &partition, eps, *ell_min, &classes)?;
            outcome(
                report.ok,
                format!(
                    "{} parts of size {}, exceptional {}, {} irregular ordered pairs; verifier {}",
                    partition.parts.len(),
                    partition.parts.first().map_or(0, VertexSet::len),
                    partition.exceptional.len(),
                    partition.irregular_ordered_pairs,
                    if report.ok { "passed" } else { "failed" }
                ),
                json!({ "partition": value(&partition), "report": value(&report) }),
            )
        }
    }
}

fn decomp(cmd: &DecompCmd) -> Result<Outcome> {
    let DecompCmd::Verify { graph, nabla, eta, bounded } = cmd;
    let g = load_graph(graph)?;
    let d = load_nabla(nabla)?;
    let prepartition = match eta {
        Some(eta) => {
            let (large, small) = classify_ls(&g, d.params.k, eta)?;
            vec![large, small]
        }
        None => Vec::new(),
    };
    let opts = VerifyOptions::default();
    let report = if *bounded {
        verify_bounded_decomposition(&g, &prepartition, &d, &opts)?
    } else {
        verify_sparse_decomposition(&g, &prepartition, &d, &opts)?
    };
    let failing: Vec<&str> = report.checks.iter().filter(|c| !c.ok).map(|c| c.property.as_str()).collect();
    let summary = if failing.is_empty() {
        format!("all {} properties hold", report.checks.len())
    } else {
        format!("failing: {}", failing.join(", "))
    };
    outcome(report.ok, summary, value(&report))
}

fn matching(cli: &Cli, cmd: &MatchCmd) -> Result<Outcome> {
    match cmd {
        MatchCmd::Max { graph } => {
            let g = load_graph(graph)?;
            let m = maximum_matching(&g);
            outcome(true, format!("maximum matching of size {}", m.len()), json!({ "size": m.len(), "edges": m }))
        }
        MatchCmd::Ge { graph } => {
            let g = load_graph(graph)?;
            let ge = gallai_edmonds(&g)?;
            let report = verify_gallai_edmonds(&g, &ge);
            outcome(
                report.ok,
                format!(
                    "|Q| = {}, {} components; verifier {}",
                    ge.q.len(),
                    ge.components.len(),
                    if report.ok { "passed" } else { "failed" }
                ),
                json!({ "decomposition": value(&ge), "report": value(&report) }),
            )
        }
        MatchCmd::Verify { graph, matching, eps, d, ell } => {
            let g = load_graph(graph)?;
            let m: RegularizedMatching = load_json(matching)?;
            let verdict = verify_regularized_matching(&g, &m, eps, d, *ell, &certify_options(cli))?;
            outcome(
                verdict.valid,
                format!("{} pairs; {}", m.len(), if verdict.valid { "valid" } else { "invalid" }),
                value(&verdict),
            )
        }
    }
}

fn instance_view<'a>(file: &'a InstanceFile, g: &'a Graph) -> Instance<'a> {
    Instance {
        graph: g,
        cover: &file.cover,
        host: file.host.clone(),
        ensemble: file.ensemble.clone(),
        params: file.params.clone(),
    }
}

fn pipeline(cmd: &PipelineCmd) -> Result<Outcome> {
    match cmd {
        PipelineCmd::Extract { instance, eps, alpha } => {
            let file: InstanceFile = load_json(instance)?;
            let g = file.graph()?;
            let inst = instance_view(&file, &g);
            let found = find_regular_pair_in_spot(&inst, &ExtractOptions::for_instance(&inst, eps.clone(), alpha))?;
            outcome(
                true,
                format!("pair of size {} in spot {} with density {}", found.x.len(), found.spot, found.density),
                value(&found),
            )
        }
        PipelineCmd::Grow { instance, eps, alpha } => {
            let file: InstanceFile = load_json(instance)?;
            let g = file.graph()?;
            let inst = instance_view(&file, &g);
            let grown = grow_matching(&inst, &ExtractOptions::for_instance(&inst, eps.clone(), alpha))?;
            outcome(
                grown.guarantee_met(),
                format!(
                    "{} pairs covering {} vertices; residual {} edges",
                    grown.matching.len(),
                    grown.matching.vertex_count(),
                    grown.residual_edges
                ),
                value(&grown),
            )
        }
        PipelineCmd::Dichotomy { instance, matching } => {
            let file: InstanceFile = load_json(instance)?;
            let g = file.graph()?;
            let m: RegularizedMatching = match matching {
                Some(path) => load_json(path)?,
                None => RegularizedMatching::default(),
            };
            let vm = m.vertex_set();
            let y0 = file.host.b.difference(&vm);
            let target: Vec<VertexSet> =
                file.ensemble.iter().map(|c| c.difference(&vm)).filter(|c| !c.is_empty()).collect();
            let p = &file.params;
            let result = find_augmenting_or_separate(&g, &p.tau, &p.omega, p.k, &m, &y0, &target)?;
            let (pass, summary, check) = match &result {
                SeparationOrPath::M1 { pairs, crossing_edges, bound, .. } => {
                    let ok = lks_core::Rational::from_integer((*crossing_edges).into()) < *bound;
                    (
                        ok,
                        format!("separation by {} pairs: {crossing_edges} crossing edges, bound {bound}", pairs.len()),
                        json!(ok),
                    )
                }
                SeparationOrPath::M2 { path } => {
                    let report = validate_path(&g, &m, path);
                    (report.ok, format!("augmenting path of length {}", path.len()), value(&report))
                }
            };
            outcome(pass, summary, json!({ "result": value(&result), "check": check }))
        }
        PipelineCmd::Separate { graph, nabla, eta, epsilon, omega } => {
            let g = load_graph(graph)?;
            let d = load_nabla(nabla)?;
            let eps = epsilon.clone().unwrap_or_else(|| d.params.epsilon.clone());
            let mut params = StructureParams::new(eta.clone(), eps.clone());
            params.omega = *omega;
            let input = separation_input(&g, &d, &params)?;
            let result =
                separate(&input.spot_graph, &d.spots, &input.lifted_m, &input.target, &input.y, &input.params)?;
            let checks = verify_separation(
                &input.spot_graph,
                &d.spots,
                &input.lifted_m,
                &input.target,
                &input.y,
                &result,
                &input.params.rho,
                &eps,
                d.params.k,
            );
            let pass = checks.i && checks.ii && checks.iii;
            outcome(
                pass,
                format!(
                    "{} rounds; M1 {} pairs, M2 {} pairs; lost {}, crossing {} < {}",
                    result.rounds.len(),
                    result.m1.len(),
                    result.m2.len(),
                    checks.lost,
                    checks.crossing_edges,
                    checks.crossing_bound
                ),
                json!({ "result": value(&result), "recount": value(&checks) }),
            )
        }
    }
}

fn structure(cmd: &StructureCmd) -> Result<Outcome> {
    match cmd {
        StructureCmd::Run { graph, nabla, eta, epsilon, omega, no_hypotheses, out } => {
            let g = load_graph(graph)?;
            let d = load_nabla(nabla)?;
            let eps = epsilon.clone().unwrap_or_else(|| d.params.epsilon.clone());
            let mut params = StructureParams::new(eta.clone(), eps);
            params.omega = *omega;
            params.check_hypotheses = !no_hypotheses;
            let output = rough_structure(&g, &d, &params)?;
            if let Some(path) = out {
                write(path, &serde_json::to_string_pretty(&output)?)?;
            }
            let failing: Vec<&str> =
                output.report.assertions.iter().filter(|a| !a.ok).map(|a| a.name.as_str()).collect();
            outcome(
                output.accepted,
                format!(
                    "{:?}; MA {} pairs, MB {} pairs; {}",
                    output.dichotomy,
                    output.ma.len(),
                    output.mb.len(),
                    if failing.is_empty() {
                        "all assertions hold".to_string()
                    } else {
                        format!("failing: {}", failing.join(", "))
                    }
                ),
                value(&output),
            )
        }
        StructureCmd::Verify { graph, nabla, output } => {
            let g = load_graph(graph)?;
            let d = load_nabla(nabla)?;
            let stored: StructureOutput = load_json(output)?;
            let report = verify_structure(&g, &d, &stored.eta, &stored)?;
            let failing: Vec<&str> = report.assertions.iter().filter(|a| !a.ok).map(|a| a.name.as_str()).collect();
            outcome(
                report.ok,
                if report.ok {
                    format!("{:?}; all assertions hold", report.dichotomy)
                } else {
                    format!("{:?}; failing: {}", report.dichotomy, failing.join(", "))
                },
                value(&report),
            )
        }
    }
}

fn params(cmd: &ParamsCmd) -> Result<Outcome> {
    match cmd {
        ParamsCmd::PairConstants { omega, eps, rho, tau, m } => {
            let (alpha, eps_rl) = lemma41_constants(omega, eps, rho, tau, *m)?;
            outcome(
                true,
                format!("alpha = {alpha}, eps_RL = {eps_rl}"),
                json!({ "alpha": exact(&alpha), "eps_RL": exact(&eps_rl) }),
            )
        }
        ParamsCmd::StepSchedule { omega, tau, rho, eps, m } => {
            let schedule = lemma46_schedule(omega, tau, rho, eps, *m)?;
            let identity = schedule.descent_identity().is_ok();
            outcome(
                identity,
                format!(
                    "{} levels, tau' = {}, identity {}, epsilon {}",
                    schedule.tau_levels.len(),
                    schedule.tau_prime,
                    if identity { "holds" } else { "fails" },
                    if schedule.eps_admissible { "admissible" } else { "too large" }
                ),
                schedule.to_json(),
            )
        }
        ParamsCmd::SeparationSchedule { omega, rho, eps, m, tau_prime } => {
            let tp = tau_prime.clone().map_or(TauPrime::Derived, TauPrime::Explicit);
            let schedule = lemma47_schedule(omega, rho, eps, *m, &tp)?;
            outcome(
                schedule.eps_sum_within_budget,
                format!(
                    "L = {}, epsilon sum {} the budget",
                    schedule.levels,
                    if schedule.eps_sum_within_budget { "within" } else { "above" }
                ),
                schedule.to_json(),
            )
        }
        ParamsCmd::EpsilonLevels { eps, levels } => {
            let values = epsilon_levels(eps, *levels)?;
            let total: lks_core::Rational = values.iter().sum();
            let within = &total <= eps;
            outcome(
                within,
                format!("{} levels, sum {} epsilon", values.len(), if within { "within" } else { "above" }),
                json!({ "levels": values.iter().map(exact).collect::<Vec<_>>(), "sum": exact(&total), "within": within }),
            )
        }
    }
}
