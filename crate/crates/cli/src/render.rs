//! Human-readable tables and Graphviz output.

use std::fmt::Write;

use fixedloci::quiver::{support_quiver, CoverEntry, CoverVector};

use crate::problem::ProblemFile;
use crate::report::{Report, ReportResult};
use crate::CliError;

fn fmt_vec<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn fmt_set(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn table(report: &Report) -> String {
    let mut out = String::new();
    match &report.result {
        ReportResult::Toric(t) => {
            let _ = writeln!(out, "toric quotient of rank {}", t.quotient_rank);
            let _ = writeln!(out, "rays: {}", t.fan.rays.iter().map(|r| fmt_vec(r)).collect::<Vec<_>>().join(" "));
            let _ = writeln!(out, "{:<12} {:<12} {:<4} rho", "V_rho", "cone J", "dim");
            for f in &t.fixed_points {
                let rho: Vec<String> = f.rho.iter().map(|r| fmt_vec(r)).collect();
                let _ = writeln!(out, "{:<12} {:<12} {:<4} {}", fmt_set(&f.v_rho), fmt_set(&f.cone), f.dimension, rho.join(" "));
            }
            let _ = writeln!(out, "{} fixed points", t.fixed_points.len());
        }
        ReportResult::Quiver(q) => {
            let _ = writeln!(out, "moduli dimension {}", q.moduli_dimension);
            let _ = writeln!(out, "{:<18} {:<4} beta", "status", "dim");
            for c in &q.components {
                let beta: Vec<String> =
                    c.beta.iter().map(|e| format!("{}@{}x{}", e.vertex, fmt_vec(&e.grade), e.mult)).collect();
                let _ = writeln!(out, "{:<18} {:<4} {}", format!("{:?}", c.status), c.dimension, beta.join(" "));
            }
            let _ = writeln!(
                out,
                "{} candidates: {} nonempty, {} empty, {} undecided; {} covers pruned",
                q.counts.candidates,
                q.counts.nonempty_verified,
                q.counts.empty_verified,
                q.counts.candidate_only,
                q.counts.pruned
            );
        }
        ReportResult::Grassmann(g) => {
            let blocks: Vec<String> = g.blocks.iter().map(|b| format!("{}^{}", b.weight, b.size)).collect();
            let _ = writeln!(out, "weight blocks: {}", blocks.join(" "));
            let _ = writeln!(out, "{:<4} component", "dim");
            for c in &g.components {
                let f: Vec<String> = c.factors.iter().map(|(t, q)| format!("Gr({t},{q})")).collect();
                let _ = writeln!(out, "{:<4} {}", c.dimension, f.join(" x "));
            }
            let _ = writeln!(out, "{} components", g.count);
        }
        ReportResult::Kempf(k) => {
            let _ = writeln!(out, "support    {}", fmt_set(&k.support));
            let _ = writeln!(out, "semistable {}", k.semistable);
            let _ = writeln!(out, "stable     {}", k.stable);
            let m = serde_json::to_string(&k.m_value).expect("serializes");
            let _ = writeln!(out, "m          {m}");
            match &k.adapted_one_ps {
                Some(l) => {
                    let _ = writeln!(out, "adapted    {}", fmt_vec(l));
                }
                None => {
                    let _ = writeln!(out, "adapted    none");
                }
            }
        }
    }
    out
}

/// Graphviz output: the fan for toric problems, the quiver and the supports
/// of the candidate covers for quiver problems.
pub fn dot(report: &Report) -> Result<String, CliError> {
    let mut out = String::new();
    match (&report.result, &report.input) {
        (ReportResult::Toric(t), _) => {
            let _ = writeln!(out, "graph fan {{");
            let used: std::collections::BTreeSet<usize> = t.fan.maximal_cones.iter().flatten().copied().collect();
            for i in &used {
                let _ = writeln!(out, "  r{i} [label=\"{}\"];", fmt_vec(&t.fan.rays[*i]));
            }
            for (k, c) in t.fan.maximal_cones.iter().enumerate() {
                let _ = writeln!(out, "  s{k} [shape=box,label=\"sigma{}\"];", fmt_set(c));
                for i in c {
                    let _ = writeln!(out, "  s{k} -- r{i};");
                }
            }
            let _ = writeln!(out, "}}");
        }
        (ReportResult::Quiver(q), ProblemFile::Quiver(input)) => {
            let problem = input.problem()?;
            let _ = writeln!(out, "digraph quiver {{");
            let _ = writeln!(out, "  subgraph cluster_q {{");
            let _ = writeln!(out, "    label=\"Q\";");
            for (i, v) in problem.quiver().vertices().iter().enumerate() {
                let _ = writeln!(out, "    q{i} [label=\"{v}\"];");
            }
            for a in problem.quiver().arrows() {
                let _ = writeln!(out, "    q{} -> q{} [label=\"{}\"];", a.source, a.target, a.name);
            }
            let _ = writeln!(out, "  }}");
            for (k, c) in q.components.iter().enumerate() {
                let beta = CoverVector::new(
                    c.beta
                        .iter()
                        .map(|e| CoverEntry {
                            vertex: problem.quiver().vertex_index(&e.vertex).expect("vertex from the same problem"),
                            grade: e.grade.clone(),
                            mult: e.mult,
                        })
                        .collect(),
                );
                let sq = support_quiver(&problem, &beta);
                let _ = writeln!(out, "  subgraph cluster_{k} {{");
                let _ = writeln!(out, "    label=\"{:?}\";", c.status);
                for (i, v) in sq.quiver.vertices().iter().enumerate() {
                    let _ = writeln!(out, "    c{k}_{i} [label=\"{v} x{}\"];", sq.dims[i]);
                }
                for a in sq.quiver.arrows() {
                    let _ = writeln!(out, "    c{k}_{} -> c{k}_{} [label=\"{}\"];", a.source, a.target, a.name);
                }
                let _ = writeln!(out, "  }}");
            }
            let _ = writeln!(out, "}}");
        }
        _ => {
            return Err(CliError::Validation(
                "dot output is available for toric and quiver problems".into(),
            ))
        }
    }
    Ok(out)
}
