use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use edgehodge::config::{parse_perversity, parse_weight, FibreConfig, RadialConfig, RunConfig};
use edgehodge::formats::{read_json, spectrum_csv, to_json, ModelFile, SpectrumFile};
use edgehodge::report::{Report, Section};
use edgehodge::run::{checks_section, complete_section, cone_lab_sections, fibre_data, fibre_spec_section, ih_section, list_report, space_section, spectral_sections, weights_section};
use edgehodge::suites::Suite;
use edgehodge::Error;
use edgehodge_core::fibredec::spectrum_for_predicates;
use edgehodge_core::radial::LogGrid;
use edgehodge_core::Q;

#[derive(Parser)]
#[command(name = "edgehodge", version, about = "Intersection and weighted L² cohomology of spaces with simple edge singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct SpaceArgs {
    /// Built-in space name (see `list`).
    #[arg(long, conflicts_with = "model")]
    space: Option<String>,
    /// Model file in JSON.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct FibreArgs {
    /// circle, torus or product
    #[arg(long = "fibre-kind")]
    kind: Option<String>,
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    lengths: Vec<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the built-in catalogue.
    List,
    /// Intersection cohomology for one or more perversities (`mbar`, `mlow` or a rational).
    Ih {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, required = true)]
        perversity: Vec<String>,
    },
    /// Max, min and minimal Hodge weighted cohomology.
    Weights {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long = "a", allow_hyphen_values = true, default_value = "0")]
        a: Vec<String>,
    },
    /// Self-adjointness predicates and critical indicial roots.
    Spectral {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long = "a", allow_hyphen_values = true, default_value = "0")]
        a: Vec<String>,
        /// Fibre spectrum file; otherwise the closed form or a mesh is used.
        #[arg(long)]
        spectrum: Option<PathBuf>,
        #[command(flatten)]
        fibre: FibreArgs,
    },
    /// Spectrum of a discretised fibre.
    FibreSpec {
        #[arg(long)]
        kind: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<f64>,
        #[arg(long, default_value_t = 8)]
        count: usize,
        /// Also write `degree,index,eigenvalue` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write the snapped spectrum as a spectrum file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Cone-level radial checks for one space's fibre.
    ConeLab {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long = "a", allow_hyphen_values = true, default_value = "0")]
        a: Vec<String>,
        #[arg(long = "lambda2", value_delimiter = ',', default_values_t = [0.0, 1.0])]
        lambda2: Vec<f64>,
        #[arg(long, default_value_t = LogGrid::DEFAULT_X0)]
        x0: f64,
        #[arg(long, default_value_t = LogGrid::DEFAULT_PER_DECADE)]
        per_decade: usize,
        #[arg(long, default_value_t = 0.75)]
        c: f64,
    },
    /// L² cohomology for complete edge metrics.
    Complete {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Run verification suites against a space.
    Verify {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, conflicts_with = "suite")]
        all: bool,
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long = "a", allow_hyphen_values = true)]
        a: Vec<String>,
    },
    /// Run a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write a built-in space as a model file.
    Export {
        #[arg(long)]
        space: String,
    },
}

impl SpaceArgs {
    fn config(&self) -> Result<RunConfig, Error> {
        let mut cfg = RunConfig::for_space("");
        cfg.space = self.space.clone();
        cfg.model = self.model.clone();
        if cfg.space.is_none() && cfg.model.is_none() {
            return Err(Error::Config("give --space or --model".into()));
        }
        Ok(cfg)
    }
}

fn weights(a: &[String]) -> Result<Vec<Q>, Error> {
    a.iter().map(|w| parse_weight(w)).collect()
}

fn titled(title: String, sections: Vec<Section>) -> Report {
    let mut r = Report::new(title);
    r.sections = sections;
    r
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

enum Output {
    Report(Report),
    /// Written verbatim, whatever the format.
    Raw(String),
}

fn execute(cli: &Cli) -> Result<Output, Error> {
    if let Command::Export { space } = &cli.command {
        return Ok(Output::Raw(to_json(&ModelFile::from_model(&RunConfig::for_space(space).load_space()?))));
    }
    report(cli).map(Output::Report)
}

fn report(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::List => Ok(list_report()),
        Command::Ih { space, perversity } => {
            let sp = space.config()?.load_space()?;
            let ps = perversity.iter().map(|p| parse_perversity(p, sp.f())).collect::<Result<Vec<_>, _>>()?;
            Ok(titled(format!("intersection cohomology: {}", sp.name()), vec![space_section(&sp)?, ih_section(&sp, &ps)?]))
        }
        Command::Weights { space, a } => {
            let sp = space.config()?.load_space()?;
            Ok(titled(format!("weighted cohomology: {}", sp.name()), vec![weights_section(&sp, &weights(a)?)?]))
        }
        Command::Spectral { space, a, spectrum, fibre } => {
            let mut cfg = space.config()?;
            if let Some(kind) = &fibre.kind {
                cfg.fibre = Some(FibreConfig { kind: kind.clone(), sizes: fibre.sizes.clone(), lengths: fibre.lengths.clone() });
                cfg.validate()?;
            }
            let sp = cfg.load_space()?;
            let spec = match spectrum {
                Some(path) => {
                    let s = read_json::<SpectrumFile>(path)?.to_spectrum()?;
                    s.check_betti(sp.fibre_betti())?;
                    s
                }
                None => fibre_data(&sp, &cfg)?.0.ok_or_else(|| Error::Config("no fibre spectrum: pass --spectrum or --fibre-kind".into()))?,
            };
            let (pred, roots) = spectral_sections(&sp, &weights(a)?, &spec);
            Ok(titled(format!("spectral predicates: {}", sp.name()), vec![pred, roots]))
        }
        Command::FibreSpec { kind, sizes, lengths, count, csv, export } => {
            let fc = FibreConfig { kind: kind.clone(), sizes: sizes.clone(), lengths: lengths.clone() };
            let fibre = fc.build()?;
            let (section, results) = fibre_spec_section(&fibre, *count)?;
            if let Some(path) = csv {
                write_file(path, &spectrum_csv(&results))?;
            }
            if let Some(path) = export {
                write_file(path, &to_json(&SpectrumFile::from_spectrum(&spectrum_for_predicates(&fibre)?)))?;
            }
            Ok(titled(format!("fibre spectrum: {} {:?}", fibre.kind().as_str(), fibre.sizes()), vec![section]))
        }
        Command::ConeLab { space, a, lambda2, x0, per_decade, c } => {
            let sp = space.config()?.load_space()?;
            let mut cfg = RunConfig::for_space(sp.name());
            cfg.radial = RadialConfig { x0: *x0, per_decade: *per_decade, c: *c };
            cfg.validate()?;
            let sections = cone_lab_sections(sp.f(), sp.fibre_betti(), &weights(a)?, lambda2, &cfg.grid()?, *c)?;
            Ok(titled(format!("cone lab: {}", sp.name()), sections))
        }
        Command::Complete { space } => {
            let sp = space.config()?.load_space()?;
            Ok(titled(format!("complete edge metric: {}", sp.name()), vec![complete_section(&sp, 0..=sp.n())?]))
        }
        Command::Verify { space, all, suite, a } => {
            let mut cfg = space.config()?;
            cfg.weights = a.clone();
            cfg.validate()?;
            let suites = if *all || suite.is_empty() {
                Suite::ALL.to_vec()
            } else {
                suite.iter().map(|s| Suite::parse(s)).collect::<Result<Vec<_>, _>>()?
            };
            let sp = cfg.load_space()?;
            let mut report = Report::new(format!("verification: {}", sp.name()));
            checks_section(&sp, &cfg, &suites, &mut report)?;
            Ok(report)
        }
        Command::Run { config } => edgehodge::run(&RunConfig::load(config)?),
        Command::Export { .. } => unreachable!("handled in execute"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("edgehodge: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let (text, passed) = match (&output, cli.format) {
        (Output::Raw(s), _) => (s.clone(), None),
        (Output::Report(r), Format::Text) => (r.to_text(), r.passed),
        (Output::Report(r), Format::Json) => (r.to_json(), r.passed),
    };
    let written = match &cli.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("edgehodge: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    if passed == Some(false) {
        eprintln!("edgehodge: verification failed");
        return ExitCode::from(4);
    }
    ExitCode::SUCCESS
}
