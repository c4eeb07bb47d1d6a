use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use siac::dg::{l2_error, load_field, project_initial, save_field, solve_advection, DtRule, Domain, UniformMesh2D};
use siac::filtering::{default_line_mu, filter_field, FilterConfig, Sampling};
use siac::harness::{
    filter_label, format_error, parse_cuts, parse_filters, parse_grid, parse_point, parse_real_expr,
    run_contours, run_convergence_study, run_counts_timing, run_slices, total_variation, write_contour_csv,
    write_cost_csv, write_slice_csv, InitialCondition, StudySpec, SLICE_SAMPLES,
};

#[derive(Parser)]
#[command(name = "siac", version, about = "SIAC line and tensor filtering of 2D DG advection fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Tensor,
    Line,
}

#[derive(Subcommand)]
enum Command {
    /// Solve u_t + u_x + u_y = 0 on [0, 2π]² and write the final field.
    Solve {
        #[arg(long, default_value = "sinxy")]
        ic: InitialCondition,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        #[arg(long, default_value = "2", value_parser = real)]
        tfinal: f64,
        #[arg(long, default_value_t = DtRule::DEFAULT_CFL)]
        cfl: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Filter a stored field at sample points and write `x,y,weight,value`.
    Filter {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value = "0", value_parser = real)]
        theta: f64,
        /// Defaults to |cos θ| + |sin θ| for line filters and 1 for tensor.
        #[arg(long, value_parser = real)]
        mu: Option<f64>,
        /// `errgrid` or `uniform:NX,NY`.
        #[arg(long, default_value = "errgrid")]
        sampling: String,
        #[arg(long)]
        out: PathBuf,
        /// Report the L2 error against this initial condition advected to --tfinal.
        #[arg(long)]
        ic: Option<InitialCondition>,
        #[arg(long, default_value = "2", value_parser = real)]
        tfinal: f64,
    },
    /// Run a convergence study from a key=value config file.
    Study {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Pointwise error profiles along straight cuts, one CSV per cut.
    Slices {
        #[arg(long)]
        field: PathBuf,
        /// e.g. `line:0:1; line:pi/4:sqrt2; line:3pi/4:sqrt2`
        #[arg(long)]
        filters: String,
        /// e.g. `h:1.0; v:1.0; d`
        #[arg(long)]
        cuts: String,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value = "sinxy")]
        ic: InitialCondition,
        #[arg(long, default_value = "2", value_parser = real)]
        tfinal: f64,
        #[arg(long, default_value_t = SLICE_SAMPLES)]
        samples: usize,
    },
    /// log10 pointwise error on a uniform grid, one CSV for DG and one per filter.
    Contours {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        filters: String,
        /// `NX,NY`
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value = "sinxy")]
        ic: InitialCondition,
        #[arg(long, default_value = "2", value_parser = real)]
        tfinal: f64,
    },
    /// Operation counts and median wall time for filtering a single point.
    Counts {
        #[arg(long)]
        k: usize,
        /// `X,Y`
        #[arg(long)]
        point: String,
        #[arg(long)]
        out: PathBuf,
        /// Elements per direction of the projected sin(x+y) field.
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value = "tensor:1; line:3pi/4:sqrt2")]
        filters: String,
    },
}

fn real(s: &str) -> Result<f64, String> {
    parse_real_expr(s).map_err(|e| e.to_string())
}

fn parse_sampling(s: &str) -> Result<Sampling> {
    match s.trim() {
        "errgrid" => Ok(Sampling::ErrorGrid),
        other => match other.strip_prefix("uniform:") {
            Some(grid) => {
                let (nx, ny) = parse_grid(grid)?;
                Ok(Sampling::Uniform { nx, ny })
            }
            None => bail!("bad sampling `{other}` (expected errgrid or uniform:NX,NY)"),
        },
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Solve {
            ic,
            k,
            nx,
            ny,
            tfinal,
            cfl,
            out,
        } => {
            let mesh = UniformMesh2D::new(nx, ny, Domain::default())?;
            let field0 = project_initial(&mesh, k, ic.exact(0.0))?;
            let field = solve_advection(&field0, tfinal, DtRule::new(cfl))?;
            save_field(&field, &out).with_context(|| format!("cannot write {}", out.display()))?;
            println!("l2_error {}", format_error(l2_error(&field, ic.exact(tfinal))));
        }
        Command::Filter {
            field,
            kind,
            theta,
            mu,
            sampling,
            out,
            ic,
            tfinal,
        } => {
            let field = load_field(&field).with_context(|| format!("cannot read {}", field.display()))?;
            let config = match kind {
                Kind::Line => FilterConfig::line(theta, mu.unwrap_or_else(|| default_line_mu(theta))),
                Kind::Tensor => FilterConfig::tensor(mu.unwrap_or(1.0)),
            };
            let sampled = filter_field(&field, &config, parse_sampling(&sampling)?)?;
            let mut w = create(&out)?;
            writeln!(w, "x,y,weight,value")?;
            for ((p, wt), v) in sampled.points.iter().zip(&sampled.weights).zip(&sampled.values) {
                writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e}", p.x, p.y, wt, v)?;
            }
            w.flush()?;
            let c = sampled.counters;
            println!(
                "{} points: {} scans, {} integrals, {} quadrature evaluations",
                sampled.len(),
                c.intersection_scans,
                c.integrals,
                c.quadrature_evals
            );
            if let Some(ic) = ic {
                println!("l2_error {}", format_error(sampled.l2_error(ic.exact(tfinal))));
            }
        }
        Command::Study { config, out_dir } => {
            let text = fs::read_to_string(&config).with_context(|| format!("cannot read {}", config.display()))?;
            let spec = StudySpec::parse(&text)?;
            let report = run_convergence_study(&spec)?;
            report.write(&out_dir)?;
            print!("{}", report.to_csv());
        }
        Command::Slices {
            field,
            filters,
            cuts,
            out_dir,
            ic,
            tfinal,
            samples,
        } => {
            let field = load_field(&field).with_context(|| format!("cannot read {}", field.display()))?;
            let filters = parse_filters(&filters)?;
            let profiles = run_slices(&field, ic.exact(tfinal), &filters, &parse_cuts(&cuts)?, samples)?;
            fs::create_dir_all(&out_dir)?;
            for p in &profiles {
                write_slice_csv(p, create(&out_dir.join(format!("slice_{}.csv", p.cut.stem())))?)?;
                let dg = total_variation(&p.dg);
                for (config, errs) in &p.filtered {
                    println!(
                        "{}: {} total variation ratio {:.4}",
                        p.cut,
                        filter_label(config),
                        total_variation(errs) / dg
                    );
                }
            }
        }
        Command::Contours {
            field,
            filters,
            grid,
            out_dir,
            ic,
            tfinal,
        } => {
            let field = load_field(&field).with_context(|| format!("cannot read {}", field.display()))?;
            let (nx, ny) = parse_grid(&grid)?;
            let grids = run_contours(&field, ic.exact(tfinal), &parse_filters(&filters)?, nx, ny)?;
            fs::create_dir_all(&out_dir)?;
            for g in &grids {
                write_contour_csv(g, create(&out_dir.join(format!("contour_{}.csv", g.label)))?)?;
                println!("{}: max log10 error {:.4}", g.label, g.max());
            }
        }
        Command::Counts {
            k,
            point,
            out,
            n,
            filters,
        } => {
            let mesh = UniformMesh2D::square(n)?;
            let field = project_initial(&mesh, k, InitialCondition::SinXY.exact(0.0))?;
            let rows = run_counts_timing(&field, parse_point(&point)?, &parse_filters(&filters)?)?;
            write_cost_csv(&rows, create(&out)?)?;
            write_cost_csv(&rows, std::io::stdout().lock())?;
        }
    }
    Ok(())
}
