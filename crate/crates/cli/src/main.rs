//! `gw`: weights, weight varieties, classes and spectra of Grassmann codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use grassweight::classify7::{classify, expected_x_cards, fingerprint, representative, sample_orbits, spectrum_c37, ClassId};
use grassweight::extalg::AltForm;
use grassweight::gf::Field;
use grassweight::grassmann::{code_params, codeword_weight_direct, triple_count_weight, GeneratorMatrix};
use grassweight::qpoly::{verify_average_weight, verify_macwilliams, verify_sum_ni, wt_table};
use grassweight::textio::parse_form;
use grassweight::weightvar::{weight_by_formula, x_variety, x_variety_card};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gw", version, about = "Exact weights and spectra of Grassmann codes C(l, m) over GF(q)")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Length n and dimension k of C(l, m).
    Params {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        json: bool,
    },
    /// Weight of the codeword of a form file.
    Weight {
        #[arg(long)]
        form: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        /// Run every applicable method and require agreement.
        #[arg(long)]
        all: bool,
    },
    /// Class of a nonzero 3-form on F^7.
    Classify {
        #[arg(long)]
        form: PathBuf,
    },
    /// The weight variety X_i of a non-degenerate 3-form.
    Xvariety {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        i: usize,
        /// Include the points themselves.
        #[arg(long)]
        points: bool,
    },
    /// Weight spectrum of C(3, 7).
    Spectrum37 {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        json: bool,
    },
    /// Classify seeded random 3-forms on F^7 and compare with orbit sizes.
    Sample {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Generator matrix of C(l, m) as CSV.
    Genmatrix {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: u32,
    },
    /// Run a group of consistency checks.
    Verify {
        #[arg(value_enum)]
        scope: Scope,
        /// Comma-separated field sizes.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        q: Vec<u32>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Formula,
    Triples,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scope {
    Identities,
    Tables,
    Oracles,
}

fn load(path: &Path) -> Result<AltForm> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_form(&text).with_context(|| format!("parsing {}", path.display()))
}

fn form_json(form: &AltForm) -> Value {
    let terms: Vec<Value> = form
        .terms()
        .map(|(idx, c)| json!({ "indices": idx.indices().collect::<Vec<_>>(), "coeff": c.idx() }))
        .collect();
    json!({ "q": form.field().q(), "m": form.dim(), "grade": form.grade(), "terms": terms })
}

fn weight_by(form: &AltForm, method: Method) -> Result<u128> {
    Ok(match method {
        Method::Direct => codeword_weight_direct(form)? as u128,
        Method::Formula => weight_by_formula(form)?,
        Method::Triples => triple_count_weight(form)?,
    })
}

fn cmd_weight(path: &Path, method: Method, all: bool) -> Result<bool> {
    let form = load(path)?;
    if !all {
        println!("{}", weight_by(&form, method)?);
        return Ok(true);
    }
    let mut methods = vec![Method::Direct, Method::Formula];
    if form.grade() == 3 {
        methods.push(Method::Triples);
    }
    let mut results = Vec::new();
    for m in methods {
        let name = m.to_possible_value().expect("named").get_name().to_string();
        let w = weight_by(&form, m).with_context(|| format!("method {name}"))?;
        println!("{name}: {w}");
        results.push(w);
    }
    let agree = results.windows(2).all(|p| p[0] == p[1]);
    if !agree {
        eprintln!("methods disagree");
    }
    Ok(agree)
}

fn cmd_spectrum(q: u32, as_json: bool) -> Result<()> {
    let f = Field::new(q)?;
    let p = code_params(3, 7, q)?;
    let entries = spectrum_c37(f);
    if as_json {
        let es: Vec<Value> = entries
            .iter()
            .map(|e| {
                json!({
                    "weight": e.weight,
                    "count": e.count.to_string(),
                    "classes": e.classes.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        println!("{}", json!({ "q": q, "n": p.n.to_string(), "k": p.k, "entries": es }));
    } else {
        println!("C(3,7) over GF({q}): n={} k={}", p.n, p.k);
        for e in entries {
            let cs: Vec<String> = e.classes.iter().map(|c| c.to_string()).collect();
            println!("{:>24} {:>40}  [{}]", e.weight, e.count, cs.join(","));
        }
    }
    Ok(())
}

fn cmd_sample(q: u32, count: u64, seed: u64, as_json: bool) -> Result<()> {
    let report = sample_orbits(Field::new(q)?, count, seed)?;
    if as_json {
        let ts: Vec<Value> = report
            .tallies
            .iter()
            .map(|t| {
                json!({
                    "class": t.class.to_string(),
                    "observed": t.observed,
                    "expected": format!("{:.4}", t.expected),
                    "z": format!("{:.4}", t.z),
                })
            })
            .collect();
        println!("{}", json!({ "q": q, "count": count, "seed": seed, "classes": ts }));
    } else {
        println!("{:>5} {:>10} {:>14} {:>8}", "class", "observed", "expected", "z");
        for t in &report.tallies {
            println!("{:>5} {:>10} {:>14.4} {:>8.3}", t.class.to_string(), t.observed, t.expected, t.z);
        }
    }
    Ok(())
}

fn report(ok: bool, line: String, failures: &mut usize) {
    if !ok {
        *failures += 1;
    }
    println!("{} {line}", if ok { "PASS" } else { "FAIL" });
}

fn cmd_verify(scope: Scope, qs: &[u32]) -> Result<bool> {
    let mut failures = 0;
    match scope {
        Scope::Identities => {
            report(verify_sum_ni(), "sum of orbit sizes equals (q^35-1)/(q-1)".into(), &mut failures);
            report(verify_macwilliams(), "MacWilliams: sum N_i wt_i = q^34 |G(3,7)|".into(), &mut failures);
            report(verify_average_weight(), "average weight = |G(3,7)| (1 - |P^33|/|P^34|)".into(), &mut failures);
        }
        Scope::Tables => {
            for &q in qs {
                let f = Field::new(q)?;
                for i in 6..=11u8 {
                    let w = representative(ClassId::for_field(i, f)?, f)?;
                    let got = (x_variety_card(&w, 1)?, x_variety_card(&w, 2)?);
                    let want = expected_x_cards(i, q as u64).expect("classes 6-11");
                    report(
                        got == want,
                        format!("q={q} class {i}: |X_1|={} |X_2|={} (expected {} {})", got.0, got.1, want.0, want.1),
                        &mut failures,
                    );
                }
                for (n, id) in ClassId::all(f).into_iter().enumerate() {
                    let w = representative(id, f)?;
                    let got = weight_by_formula(&w)?;
                    let want = wt_table()[n].eval_int(q as i64).expect("integer").to_string();
                    report(got.to_string() == want, format!("q={q} class {id}: weight {got} (table {want})"), &mut failures);
                }
            }
        }
        Scope::Oracles => {
            for &q in qs {
                let f = Field::new(q)?;
                for id in ClassId::all(f) {
                    let w = representative(id, f)?;
                    let direct = codeword_weight_direct(&w)? as u128;
                    let formula = weight_by_formula(&w)?;
                    let mut line = format!("q={q} class {id}: direct {direct} formula {formula}");
                    let mut ok = direct == formula;
                    if q == 2 {
                        let t = triple_count_weight(&w)?;
                        line.push_str(&format!(" triples {t}"));
                        ok &= t == direct;
                    }
                    report(ok, line, &mut failures);
                }
            }
        }
    }
    Ok(failures == 0)
}

fn run(cli: Cli) -> Result<bool> {
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    #[cfg(not(feature = "parallel"))]
    if cli.threads.is_some_and(|n| n != 1) {
        bail!("built without the `parallel` feature; --threads must be 1");
    }
    match cli.command {
        Command::Params { l, m, q, json } => {
            let p = code_params(l, m, q)?;
            if json {
                println!("{}", json!({ "l": l, "m": m, "q": q, "n": p.n.to_string(), "k": p.k }));
            } else {
                println!("n={} k={}", p.n, p.k);
            }
        }
        Command::Weight { form, method, all } => return cmd_weight(&form, method, all),
        Command::Classify { form } => {
            let w = load(&form)?;
            let id = classify(&w)?;
            let fp = fingerprint(&w)?;
            println!(
                "{}",
                json!({ "class": id.index, "variant": id.variant_name(), "r": fp.r, "x1_card": fp.x1_card })
            );
        }
        Command::Xvariety { form, i, points } => {
            let w = load(&form)?;
            let mut out = json!({ "form": form_json(&w), "i": i, "cardinality": x_variety_card(&w, i)? });
            if points {
                let pts: Vec<Vec<u8>> =
                    x_variety(&w, i)?.iter().map(|v| v.coords().iter().map(|c| c.idx()).collect()).collect();
                out["points"] = json!(pts);
            }
            println!("{out}");
        }
        Command::Spectrum37 { q, json } => cmd_spectrum(q, json)?,
        Command::Sample { q, count, seed, json } => cmd_sample(q, count, seed, json)?,
        Command::Genmatrix { l, m, q } => {
            if l == 0 || l > m {
                bail!("need 1 <= l <= m");
            }
            print!("{}", GeneratorMatrix::new(l, m, Field::new(q)?)?.to_csv());
        }
        Command::Verify { scope, q } => return cmd_verify(scope, &q),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
