use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bcfw::ampl::{amap, PositiveZ};
use bcfw::boundaries::pair_boundaries;
use bcfw::chords::{diagram_to_oplus, diagram_to_walks, enumerate, to_permutation, walks_to_diagram, LatticeWalkPair};
use bcfw::domino::{build_domino_matrix, check_sign_rules, construct_matrix, sample_assignment, ConstructionParams};
use bcfw::inverse::identify_cell;
use bcfw::rational::{format_q, parse_q};
use bcfw::rng::seeded;
use bcfw::separation::separator;
use bcfw::verify::{run_criterion, VerifyConfig, CRITERIA};
use bcfw::{ChordDiagram, DecoratedPermutation, Q};

#[derive(Parser)]
#[command(name = "bcfw", version, about = "BCFW cells of the nonnegative Grassmannian and the m = 4 amplituhedron")]
struct Cli {
    /// Output format: one JSON object per line, or a readable summary.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for the parallel checks.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Perm,
    Walks,
    Oplus,
    Diagram,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the chord diagrams on n markers, lexicographically.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Only this number of chords; all k by default.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Convert between diagrams, permutations, walk pairs and ⊕-diagrams.
    /// Reads one object per line from stdin when no input is given.
    Convert {
        #[arg(long, value_enum)]
        to: Target,
        input: Option<String>,
    },
    /// Domino matrices of a cell.
    Sample {
        #[arg(long)]
        diagram: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        /// Draw domino variables directly instead of running the construction.
        #[arg(long)]
        direct: bool,
    },
    /// The separating functionary of two cells, or of all pairs on n markers.
    Separate {
        #[arg(long, requires = "b", conflicts_with = "n")]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Map samples of a cell through Z and recover their cell and preimage.
    Invert {
        #[arg(long)]
        diagram: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        zs: usize,
        /// Vandermonde nodes for Z, comma separated; overrides --zs.
        #[arg(long, value_delimiter = ',')]
        nodes: Option<Vec<String>>,
    },
    /// Classify every codimension-one boundary of the given cells.
    Boundaries {
        #[arg(long, conflicts_with = "n")]
        diagram: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        k: Option<usize>,
    },
    /// Run the acceptance suites and print one row per criterion.
    Verify {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        zs: usize,
        /// Seeds per cell for the domino and inverse suites.
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        /// Random points per (n, k, Z) for the surjectivity suite.
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Only these criteria, comma separated.
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u8>>,
    },
}

struct Out {
    format: Format,
    stdout: io::StdoutLock<'static>,
}

impl Out {
    fn emit(&mut self, v: &Value, text: impl FnOnce() -> String) -> Result<()> {
        match self.format {
            Format::Json => writeln!(self.stdout, "{}", serde_json::to_string(v)?)?,
            Format::Text => writeln!(self.stdout, "{}", text())?,
        }
        Ok(())
    }
}

fn diagram_arg(s: &str) -> Result<ChordDiagram> {
    ChordDiagram::parse(s).with_context(|| format!("cannot read diagram {s:?}"))
}

fn diagrams(n: usize, k: Option<usize>) -> Result<Vec<ChordDiagram>> {
    if n < 4 {
        bail!("n must be at least 4");
    }
    Ok(match k {
        Some(k) if k + 4 > n => bail!("k = {k} needs n >= {}", k + 4),
        Some(k) => enumerate(n, k),
        None => (0..=n - 4).flat_map(|k| enumerate(n, k)).collect(),
    })
}

fn perm_json(p: &DecoratedPermutation) -> Value {
    json!({
        "n": p.domain().len(),
        "images": p.images(),
        "anti_excedances": p.anti_excedances(),
        "cycles": p.cycle_string(),
    })
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// The diagram behind any of the supported encodings.
fn read_any(s: &str) -> Result<ChordDiagram> {
    let t = s.trim();
    if !t.starts_with('{') && !t.starts_with('[') {
        return diagram_arg(t);
    }
    let v: Value = serde_json::from_str(t).context("input is not JSON")?;
    let obj = v.as_object();
    if obj.is_some_and(|o| o.contains_key("chords")) {
        return Ok(ChordDiagram::from_json(&v)?);
    }
    if obj.is_some_and(|o| o.contains_key("a_vertical")) {
        let w: LatticeWalkPair = serde_json::from_value(v)?;
        return Ok(walks_to_diagram(&w)?);
    }
    if let Some(rows) = v.get("rows").and_then(Value::as_array) {
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| anyhow!("a ⊕-diagram needs \"n\""))? as usize;
        let rows: Vec<String> = rows.iter().filter_map(|r| r.as_str().map(str::to_string)).collect();
        return by_search(n, Some(rows.len()), |d| diagram_to_oplus(d).row_strings() == rows);
    }
    let images: Vec<usize> = match v.get("images") {
        Some(i) => serde_json::from_value(i.clone())?,
        None => serde_json::from_value(v).context("unrecognised input")?,
    };
    let n = images.len();
    let domain: Vec<usize> = (1..=n).collect();
    let p = DecoratedPermutation::from_images(&domain, &images, Default::default())?;
    let k = p.anti_excedances().len();
    by_search(n, Some(k), |d| to_permutation(d) == p)
}

fn by_search(n: usize, k: Option<usize>, mut pred: impl FnMut(&ChordDiagram) -> bool) -> Result<ChordDiagram> {
    let none = || anyhow!("no BCFW cell on {n} markers has this encoding");
    if n < 4 || k.is_some_and(|k| k + 4 > n) {
        return Err(none());
    }
    diagrams(n, k)?.into_iter().find(|d| pred(d)).ok_or_else(none)
}

fn convert(out: &mut Out, to: Target, input: &str) -> Result<()> {
    let d = read_any(input)?;
    match to {
        Target::Diagram => out.emit(&d.to_json(), || d.to_text()),
        Target::Perm => {
            let p = to_permutation(&d);
            out.emit(&perm_json(&p), || format!("{}\n{}", join(p.domain()), join(p.images())))
        }
        Target::Walks => {
            let w = diagram_to_walks(&d);
            let mut v = serde_json::to_value(&w)?;
            v["a_horizontal"] = json!(w.a_horizontal());
            out.emit(&v, || format!("A vertical {:?}\nB vertical {:?}", w.a_vertical, w.b_vertical))
        }
        Target::Oplus => {
            let o = diagram_to_oplus(&d);
            let v = json!({"n": o.n, "row_labels": o.row_labels, "column_labels": o.column_labels, "rows": o.row_strings()});
            out.emit(&v, || {
                let rows: Vec<String> =
                    o.row_labels.iter().zip(o.row_strings()).map(|(l, r)| format!("{l:>3} {r}")).collect();
                format!("cols {}\n{}", join(&o.column_labels), rows.join("\n"))
            })
        }
    }
}

fn sample(out: &mut Out, d: &ChordDiagram, seed: u64, samples: usize, direct: bool) -> Result<()> {
    let mut rng = seeded(seed);
    for s in 0..samples as u64 {
        let (m, params) = if direct {
            let a = sample_assignment(d, &mut rng);
            (build_domino_matrix(d, &a)?, json!({"assignment": a.to_json()}))
        } else {
            let p = ConstructionParams::from_seed(d.k(), seed + s);
            (construct_matrix(d, &p)?, json!({"params": p.to_json()}))
        };
        let a = check_sign_rules(&m, d).map_err(|e| anyhow!("{d}: sample {s} breaks the sign rules: {e}"))?;
        let v = json!({
            "diagram": d.to_text(),
            "sample": s,
            "input": params,
            "matrix": m.to_json(),
            "domino": a.to_json(),
        });
        out.emit(&v, || {
            let rows: Vec<String> = m.data().iter().map(|r| join(r.iter().map(format_q))).collect();
            format!("{d} sample {s}\n{}", rows.join("\n"))
        })?;
    }
    Ok(())
}

fn invert(out: &mut Out, d: &ChordDiagram, seed: u64, samples: usize, panel: &[PositiveZ]) -> Result<bool> {
    let mut ok = true;
    for s in 0..samples as u64 {
        let c = bcfw::domino::sample_cell(d, seed + s);
        for (zi, z) in panel.iter().enumerate() {
            let y = amap(&c, z)?;
            let id = identify_cell(&y, z, d.n(), d.k())?;
            let found = id.as_ref().map(|i| i.diagram.clone());
            let good = found.as_ref() == Some(d) && id.as_ref().is_some_and(|i| i.preimage.row_space_eq(&c));
            ok &= good;
            let mut v = json!({
                "diagram": d.to_text(),
                "seed": seed + s,
                "z": zi,
                "identified": found.as_ref().map(ChordDiagram::to_text),
                "recovered": good,
            });
            if let Some(i) = &id {
                v["preimage"] = i.preimage.to_json();
            }
            if !good {
                v["sample"] = c.to_json();
                v["y"] = y.to_json();
                v["nodes"] = json!(z.nodes().iter().map(format_q).collect::<Vec<_>>());
            }
            out.emit(&v, || {
                let who = found.as_ref().map_or("no cell".to_string(), ChordDiagram::to_text);
                format!("seed {} z {zi}: {who} {}", seed + s, if good { "ok" } else { "MISMATCH" })
            })?;
        }
    }
    Ok(ok)
}

fn verify(out: &mut Out, cfg: &VerifyConfig, only: Option<&[u8]>) -> Result<bool> {
    let mut all = true;
    for (id, _) in CRITERIA {
        if only.is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let r = run_criterion(id, cfg).expect("listed criterion");
        all &= r.passed();
        out.emit(&r.to_json(), || {
            let mut s = r.line();
            for f in r.failures.iter().take(5) {
                s.push_str(&format!("\n      {f}"));
            }
            s
        })?;
    }
    let summary = json!({"summary": true, "passed": all, "config": cfg.to_json()});
    out.emit(&summary, || if all { "all criteria pass".into() } else { "some criteria FAIL".into() })?;
    Ok(all)
}

fn run(cli: Cli) -> Result<bool> {
    let mut out = Out { format: cli.format, stdout: io::stdout().lock() };
    match cli.cmd {
        Cmd::Enumerate { n, k } => {
            for d in diagrams(n, k)? {
                out.emit(&d.to_json(), || d.to_text())?;
            }
        }
        Cmd::Convert { to, input } => match input {
            Some(s) => convert(&mut out, to, &s)?,
            None => {
                for line in io::stdin().lock().lines() {
                    let line = line?;
                    if !line.trim().is_empty() {
                        convert(&mut out, to, &line)?;
                    }
                }
            }
        },
        Cmd::Sample { diagram, seed, samples, direct } => {
            sample(&mut out, &diagram_arg(&diagram)?, seed, samples, direct)?
        }
        Cmd::Separate { a, b, n } => {
            let pairs: Vec<(ChordDiagram, ChordDiagram)> = match (a, b, n) {
                (Some(a), Some(b), _) => vec![(diagram_arg(&a)?, diagram_arg(&b)?)],
                (_, _, Some(n)) => {
                    let all = diagrams(n, None)?;
                    (0..all.len())
                        .flat_map(|x| (x + 1..all.len()).map(move |y| (x, y)))
                        .map(|(x, y)| (all[x].clone(), all[y].clone()))
                        .collect()
                }
                _ => bail!("give --a and --b, or --n"),
            };
            for (a, b) in pairs {
                let s = separator(&a, &b)?;
                let mut v = s.to_json();
                v["a"] = json!(a.to_text());
                v["b"] = json!(b.to_text());
                out.emit(&v, || {
                    format!("{a} | {b}: {} (signs {:+}, {:+})", s.functionary.to_text(), s.sign_a, s.sign_b)
                })?;
            }
        }
        Cmd::Invert { diagram, seed, samples, zs, nodes } => {
            let d = diagram_arg(&diagram)?;
            let panel = match nodes {
                Some(ns) => {
                    let qs: Vec<Q> = ns.iter().map(|s| parse_q(s)).collect::<bcfw::Result<_>>()?;
                    vec![PositiveZ::vandermonde(d.n(), d.k(), &qs)?]
                }
                None => PositiveZ::panel(d.n(), d.k(), zs, seed),
            };
            return invert(&mut out, &d, seed, samples, &panel);
        }
        Cmd::Boundaries { diagram, n, k } => {
            let ds = match (diagram, n) {
                (Some(s), _) => vec![diagram_arg(&s)?],
                (None, Some(n)) => diagrams(n, k)?,
                (None, None) => bail!("give --diagram or --n"),
            };
            for d in ds {
                let bs = pair_boundaries(&d)?;
                let v =
                    json!({"diagram": d.to_text(), "boundaries": bs.iter().map(|b| b.to_json()).collect::<Vec<_>>()});
                out.emit(&v, || {
                    let rows: Vec<String> = bs.iter().map(|b| format!("  {}", b.to_json())).collect();
                    format!("{d}\n{}", rows.join("\n"))
                })?;
            }
        }
        Cmd::Verify { n, k, seed, samples, zs, seeds, points, criteria } => {
            if let Some(n) = n {
                if n < 4 {
                    bail!("n must be at least 4");
                }
            }
            let cfg = VerifyConfig { n, k, seed, samples, zs, seeds, points };
            return verify(&mut out, &cfg, criteria.as_deref());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        // read once when the global pool starts
        std::env::set_var("RAYON_NUM_THREADS", j.max(1).to_string());
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = writeln!(io::stderr(), "{}", json!({"error": format!("{e:#}")}));
            ExitCode::from(1)
        }
    }
}
