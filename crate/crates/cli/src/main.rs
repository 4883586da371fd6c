use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kgraph::composer::{associator, StarSeries};
use kgraph::factorizer::{extract_cn, solve, verify, FactorizationReport};
use kgraph::leibniz::{generate, predicted_coefficient, tripod};
use kgraph::poisson::{check_associativity, eval_sum, PolyBivector};
use kgraph::poly::Poly;
use kgraph::{Convention, GraphSum, KGraph, LGraph, Rational, WeightTable};

const STAR_WEIGHTS: &str = include_str!("../../core/fixtures/star_weights.txt");
const APPENDIX: &str = include_str!("../../core/fixtures/assoc3_leibniz_expansion.txt");
const LEIBNIZ_2: &str = include_str!("../../core/fixtures/leibniz_weights_2.txt");
const LEIBNIZ_3: &str = include_str!("../../core/fixtures/leibniz_weights_3.txt");

#[derive(Parser)]
#[command(name = "kgraph", version, about = "Exact Kontsevich-graph calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a graph series to canonical form.
    Normalize {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// The ħ^k part of the associator of a star-product.
    Associator {
        #[arg(long, value_parser = order_parser())]
        order: usize,
        /// Star-product weights; the shipped table by default.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "w")]
        convention: ConventionArg,
        #[command(flatten)]
        output: Output,
    },
    /// Factor an associator series through Leibniz graphs.
    Factorize {
        input: PathBuf,
        /// Order to factor; the highest order present by default.
        #[arg(long, value_parser = order_parser())]
        order: Option<usize>,
        /// Leibniz-graph weights to compare against.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "w")]
        convention: ConventionArg,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportFormat,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate a graph series on a polynomial bivector and arguments.
    Eval {
        input: PathBuf,
        #[arg(long)]
        bivector: PathBuf,
        /// One polynomial per line, one line per sink.
        #[arg(long)]
        args: PathBuf,
        /// Exit with status 1 unless the result is zero.
        #[arg(long)]
        expect_zero: bool,
        #[command(flatten)]
        output: Output,
    },
    /// ħ-coefficients of (f⋆g)⋆h − f⋆(g⋆h) on a bivector; status 0 iff all vanish.
    Assoc {
        #[arg(long, value_parser = order_parser())]
        order: usize,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "w")]
        convention: ConventionArg,
        #[arg(long)]
        bivector: PathBuf,
        /// Three polynomials, one per line.
        #[arg(long)]
        args: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run the order-2..=k reproduction checks against the shipped data.
    VerifyPaper {
        #[arg(long, value_parser = order_parser(), default_value = "4")]
        order: usize,
        /// Star-product weights covering the requested orders.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Leibniz weights at order 4.
        #[arg(long)]
        leibniz_weights: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "w")]
        convention: ConventionArg,
    },
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// Weights already include the star-factor product.
    #[value(name = "w")]
    Multiplied,
    /// Bare weights.
    #[value(name = "W")]
    Bare,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Multiplied => Convention::Multiplied,
            ConventionArg::Bare => Convention::Bare,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Tsv,
}

fn order_parser() -> clap::builder::RangedU64ValueParser<usize> {
    clap::builder::RangedU64ValueParser::<usize>::new().range(1..=7)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn check_exists(paths: &[&Path]) -> Result<()> {
    for p in paths {
        if !p.is_file() {
            bail!("no such file: {}", p.display());
        }
    }
    Ok(())
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn star_weights(
    path: Option<&Path>,
    convention: ConventionArg,
) -> Result<WeightTable<KGraph, Rational>> {
    let text = match path {
        Some(p) => read(p)?,
        None => STAR_WEIGHTS.to_string(),
    };
    WeightTable::parse(&text, convention.into()).context("star weights")
}

fn polynomials(path: &Path, vars: usize) -> Result<Vec<Poly<Rational>>> {
    read(path)?
        .lines()
        .enumerate()
        .filter_map(|(k, line)| {
            let content = line.split('#').next().unwrap_or("").trim();
            (!content.is_empty()).then(|| {
                Poly::parse(vars, content)
                    .map_err(|e| kgraph::Error::from(e.at_line(k + 1)))
                    .with_context(|| format!("{}", path.display()))
            })
        })
        .collect()
}

fn report_text(report: &FactorizationReport<Rational>, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Tsv => report.to_tsv(),
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Normalize { input, output } => {
            check_exists(&[&input])?;
            let sum: GraphSum<Rational> = GraphSum::parse(&read(&input)?)?;
            emit(&output, &sum.to_text())?;
            Ok(true)
        }
        Command::Associator {
            order,
            weights,
            convention,
            output,
        } => {
            if let Some(w) = &weights {
                check_exists(&[w])?;
            }
            let table = star_weights(weights.as_deref(), convention)?;
            let star = StarSeries::build(&table, order)?;
            let assoc = associator(&star, order)?.homogeneous(order);
            emit(&output, &assoc.to_text())?;
            Ok(true)
        }
        Command::Factorize {
            input,
            order,
            weights,
            convention,
            report,
            output,
        } => {
            check_exists(&[&input])?;
            if let Some(w) = &weights {
                check_exists(&[w])?;
            }
            let sum: GraphSum<Rational> = GraphSum::parse(&read(&input)?)?;
            let order = match order {
                Some(k) => k,
                None => sum
                    .orders()
                    .max()
                    .context("empty associator: pass --order")?,
            };
            if order < 2 {
                bail!("Leibniz graphs start at order 2");
            }
            let table = match &weights {
                Some(w) => Some(WeightTable::<LGraph, Rational>::parse(
                    &read(w)?,
                    convention.into(),
                )?),
                None => None,
            };
            let basis = generate(order, 3);
            let result = solve(&sum.homogeneous(order), &basis, table.as_ref())?;
            let mut text = report_text(&result, report);
            let mut ok = result.is_exact() && result.mismatches().is_empty();
            if let (Some(t), ReportFormat::Text) = (&table, report) {
                match extract_cn(&result, t) {
                    Ok(c) => text.push_str(&format!("# c_{order} = {c}\n")),
                    Err(e) => {
                        ok = false;
                        text.push_str(&format!("# c_{order}: {e}\n"));
                    }
                }
            }
            emit(&output, &text)?;
            Ok(ok)
        }
        Command::Eval {
            input,
            bivector,
            args,
            expect_zero,
            output,
        } => {
            check_exists(&[&input, &bivector, &args])?;
            let p = PolyBivector::<Rational>::parse(&read(&bivector)?).context("bivector")?;
            let sum: GraphSum<Rational> = GraphSum::parse(&read(&input)?)?;
            let a = polynomials(&args, p.dim())?;
            let value = eval_sum(&sum, &p, &a)?;
            emit(&output, &format!("{value}\n"))?;
            Ok(!expect_zero || value.is_zero())
        }
        Command::Assoc {
            order,
            weights,
            convention,
            bivector,
            args,
            output,
        } => {
            check_exists(&[&bivector, &args])?;
            if let Some(w) = &weights {
                check_exists(&[w])?;
            }
            let table = star_weights(weights.as_deref(), convention)?;
            let star = StarSeries::build(&table, order)?;
            let p = PolyBivector::<Rational>::parse(&read(&bivector)?).context("bivector")?;
            let a = polynomials(&args, p.dim())?;
            if a.len() != 3 {
                bail!("expected 3 arguments, found {}", a.len());
            }
            let parts = check_associativity(&star, &p, &a[0], &a[1], &a[2])?;
            let mut text = String::new();
            for (n, part) in parts.iter().enumerate() {
                text.push_str(&format!("{n}\t{part}\n"));
            }
            emit(&output, &text)?;
            Ok(parts.iter().all(Poly::is_zero))
        }
        Command::VerifyPaper {
            order,
            weights,
            leibniz_weights,
            convention,
        } => {
            if let Some(w) = &weights {
                check_exists(&[w])?;
            }
            if let Some(w) = &leibniz_weights {
                check_exists(&[w])?;
            }
            let table = star_weights(weights.as_deref(), convention)?;
            let top = match &leibniz_weights {
                Some(w) => Some(WeightTable::<LGraph, Rational>::parse(
                    &read(w)?,
                    convention.into(),
                )?),
                None => None,
            };
            verify_paper(order, &table, top.as_ref())
        }
    }
}

fn line(ok: bool, what: &str, detail: String) -> bool {
    println!("{} {what}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn verify_paper(
    order: usize,
    table: &WeightTable<KGraph, Rational>,
    leibniz_4: Option<&WeightTable<LGraph, Rational>>,
) -> Result<bool> {
    let mut ok = true;
    let appendix: GraphSum<Rational> = GraphSum::parse_raw(APPENDIX)?;
    let reduced = appendix.reduce();
    ok &= line(
        reduced.len() == 39,
        "appendix listing",
        format!("{} terms reduce to {}", appendix.len(), reduced.len()),
    );
    let expected_star = [1, 1, 4, 13, 247];
    let expected_assoc = [0, 0, 3, 39, 740];
    for n in 2..=order.max(2) {
        let label = format!("order {n}");
        let star = match StarSeries::build(table, n) {
            Ok(s) => s,
            Err(e) => {
                ok &= line(false, &label, format!("star weights: {e}"));
                continue;
            }
        };
        let sizes = star.support_sizes();
        let assoc = associator(&star, n)?.homogeneous(n);
        let counts_ok = n >= expected_star.len()
            || (sizes[n] == expected_star[n] && assoc.len() == expected_assoc[n]);
        ok &= line(
            counts_ok,
            &format!("{label} counts"),
            format!(
                "star support {}, associator {} terms",
                sizes[n],
                assoc.len()
            ),
        );
        if n == 3 && assoc != reduced {
            ok &= line(
                false,
                "appendix listing",
                "differs from the associator".into(),
            );
        }
        let weights = match n {
            2 => Some(WeightTable::parse(LEIBNIZ_2, Convention::Multiplied)?),
            3 => Some(WeightTable::parse(LEIBNIZ_3, Convention::Multiplied)?),
            4 => leibniz_4.cloned(),
            _ => None,
        };
        let Some(weights) = weights else {
            ok &= line(
                false,
                &format!("{label} factorization"),
                "no Leibniz weights".into(),
            );
            continue;
        };
        let coefficients: Vec<(LGraph, Rational)> = weights
            .iter()
            .filter(|(l, _)| l.order() == n)
            .map(|(l, w)| (l.clone(), predicted_coefficient(l, w, n)))
            .collect();
        let residual = verify(&assoc, coefficients.iter().map(|(l, c)| (l, c)));
        let report = solve(&assoc, &generate(n, 3), Some(&weights))?;
        let cn = extract_cn(&report, &weights);
        let mut detail = format!(
            "residual {}, support {}, nullspace {}, c_{n} = {}",
            residual.len(),
            report.support(),
            report.nullity(),
            cn.as_ref()
                .map_or_else(|e| e.to_string(), |c| c.to_string())
        );
        let mut good = residual.is_empty()
            && report.is_exact()
            && report.mismatches().is_empty()
            && cn.as_ref().ok() == Some(&q(n as i64, 6));
        if n == 2 {
            let c = report.coefficient(&tripod());
            good &= c == q(2, 3);
            detail.push_str(&format!(", tripod {c}"));
        }
        ok &= line(good, &format!("{label} factorization"), detail);
    }
    Ok(ok)
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
